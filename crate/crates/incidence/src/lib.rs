//! Incidence algebras of finite posets over exact commutative rings,
//! with machine verification that every biderivation decomposes into
//! per-region inner biderivations plus per-component extremal ones.
//!
//! The pieces, bottom up:
//!
//! * [`ring`] — exact arithmetic in the integers, integers mod `n`, or
//!   rationals, behind a single descriptor type.
//! * [`poset`] — finite posets from cover relations: order closure,
//!   connected components, maximal chains, and chain regions.
//! * [`algebra`] — sparse convolution arithmetic in `I(P, R)` and the
//!   projections (component, region, diagonal, hat) the decomposition
//!   is phrased in.
//! * [`bilinear`] — candidate biderivations as basis-pair tables, with
//!   checkers for the derivation laws and their consequences.
//! * [`structure`] — extraction of the region coefficients and extremal
//!   seeds, reconstruction, and exact round-trip verification.
//! * [`solver`] — a null-space oracle over `Z/p` that enumerates *all*
//!   biderivations of a small poset for completeness checks.
//!
//! The `examples/` directory walks through each capability; the
//! `incidence` binary wraps them as batch subcommands over JSON files.

pub mod algebra;
pub mod bilinear;
pub mod fixtures;
pub mod gen;
pub mod json;
pub mod poset;
pub mod report;
pub mod ring;
pub mod solver;
pub mod structure;

pub use algebra::{AlgebraElement, IncidenceAlgebra};
pub use bilinear::BilinearMap;
pub use poset::FinitePoset;
pub use report::CheckReport;
pub use ring::{RingDescriptor, RingValue};
