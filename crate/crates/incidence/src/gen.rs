//! Seeded random generation of algebra elements and structured
//! biderivations, shared by the fuzz command and the test suites.
//!
//! Coefficients are sampled from a bounded set to keep exact arithmetic
//! small while exercising signs: integers from -9..=9, full residue
//! range for modular rings, and rationals with numerator -9..=9 and
//! denominator 1..=9.

use std::collections::BTreeMap;

use rand::Rng;

use crate::algebra::{AlgebraElement, IncidenceAlgebra};
use crate::bilinear::BilinearMap;
use crate::ring::{RingDescriptor, RingValue};

/// Bounds documented above; see the CLI `--help` for the user-facing
/// statement.
pub fn random_value(ring: &RingDescriptor, rng: &mut impl Rng) -> RingValue {
    match ring {
        RingDescriptor::Integer => ring.from_integer(rng.gen_range(-9..=9)),
        RingDescriptor::Modular { modulus } => {
            let r = rng.gen_range(0..*modulus);
            RingValue::Modular(r)
        }
        RingDescriptor::Rational => {
            let num = rng.gen_range(-9i64..=9);
            let den = rng.gen_range(1i64..=9);
            ring.parse(&format!("{num}/{den}")).expect("generated rational")
        }
    }
}

/// A random element: each comparable pair independently receives a
/// random coefficient with probability 1/2 (zeros are dropped).
pub fn random_element(algebra: &IncidenceAlgebra, rng: &mut impl Rng) -> AlgebraElement {
    let mut entries = Vec::new();
    for &k in algebra.poset().comparable_pairs() {
        if rng.gen_bool(0.5) {
            entries.push((k, random_value(algebra.ring(), rng)));
        }
    }
    algebra.from_entries(entries).expect("keys come from the poset")
}

/// A random element supported on the pairs `(z, w)` with `z` minimal,
/// `w` maximal and `z < w`: the shape the extremal seed `gamma` must
/// have for `[f, [g, gamma]]` to be a biderivation.
pub fn random_extremal_gamma(algebra: &IncidenceAlgebra, rng: &mut impl Rng) -> AlgebraElement {
    let poset = algebra.poset();
    let entries: Vec<_> = poset
        .comparable_pairs()
        .iter()
        .filter(|&&(z, w)| z != w && poset.is_minimal(z) && poset.is_maximal(w))
        .map(|&k| (k, random_value(algebra.ring(), rng)))
        .collect();
    algebra.from_entries(entries).expect("keys come from the poset")
}

/// The data a structured random map was built from, kept so tests can
/// compare it against what extraction recovers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuredParts {
    pub lambdas: BTreeMap<(usize, usize), RingValue>,
    pub gamma: AlgebraElement,
}

/// A random biderivation built from the two shapes the structure
/// theorem produces: per-region inner coefficients plus an extremal map
/// seeded by a min/max-supported element.
pub fn random_structured_map(
    algebra: &IncidenceAlgebra,
    rng: &mut impl Rng,
) -> (BilinearMap, StructuredParts) {
    let poset = algebra.poset();
    let mut lambdas = BTreeMap::new();
    for i in 0..poset.components().count() {
        for j in 0..poset.regions(i).count() {
            lambdas.insert((i, j), random_value(algebra.ring(), rng));
        }
    }
    let gamma = random_extremal_gamma(algebra, rng);
    let inner = BilinearMap::inner_per_region(algebra.clone(), &lambdas)
        .expect("region indices enumerate the poset's regions");
    let map = inner
        .sum(&BilinearMap::extremal(algebra.clone(), &gamma))
        .expect("same algebra");
    (map, StructuredParts { lambdas, gamma })
}
