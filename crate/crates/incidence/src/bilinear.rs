//! Bilinear maps on the incidence algebra and the identity checkers
//! that recognize biderivations.
//!
//! A map is a table assigning an algebra element to each ordered pair of
//! basis units; evaluation extends the table bilinearly. The maps here
//! are bilinear by construction: over the shipped rings every additive
//! map of the underlying modules is linear, so restricting to tables
//! loses nothing at this scale.
//!
//! A table is a biderivation when, for all basis triples, it satisfies
//! the derivation law in each argument:
//! `b(fg, h) = f b(g, h) + b(f, h) g` and
//! `b(f, gh) = g b(f, h) + b(f, g) h`.
//! Both sides are trilinear, so checking basis triples checks all
//! inputs. The remaining checkers assert consequences of these laws
//! (vanishing on incomparable tuples, support shapes, partial-derivation
//! identities, the change-seat identity) and report every violated
//! instance with a witness.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::algebra::{AlgebraElement, AlgebraError, IncidenceAlgebra, PairKey};
use crate::poset::FinitePoset;
use crate::report::{CheckReport, Violation};
use crate::ring::RingValue;

/// An ordered pair of basis-unit keys: the left and right argument.
pub type TableKey = (PairKey, PairKey);

#[derive(Debug, Error)]
pub enum MapError {
    #[error("maps are defined over different posets or rings")]
    AlgebraMismatch,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("lambda index (component {component}, region {region}) is out of range")]
    InvalidRegion { component: usize, region: usize },
}

/// A bilinear map represented by its values on basis-unit pairs.
/// Absent table entries are zero; stored values are never zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilinearMap {
    algebra: IncidenceAlgebra,
    table: BTreeMap<TableKey, AlgebraElement>,
}

fn unit_name(poset: &FinitePoset, (x, y): PairKey) -> String {
    format!("e[{},{}]", poset.identifier(x), poset.identifier(y))
}

impl BilinearMap {
    pub fn zero(algebra: IncidenceAlgebra) -> Self {
        Self {
            algebra,
            table: BTreeMap::new(),
        }
    }

    /// Builds a map from raw table entries, validating every key pair
    /// against the order. Duplicate keys accumulate; zero values drop.
    pub fn from_table(
        algebra: IncidenceAlgebra,
        entries: impl IntoIterator<Item = (TableKey, AlgebraElement)>,
    ) -> Result<Self, MapError> {
        let mut table: BTreeMap<TableKey, AlgebraElement> = BTreeMap::new();
        for ((k1, k2), value) in entries {
            for (x, y) in [k1, k2] {
                if x >= algebra.poset().len() || y >= algebra.poset().len() {
                    return Err(MapError::Algebra(AlgebraError::InvalidIndex {
                        kind: "element",
                        index: x.max(y),
                    }));
                }
                if !algebra.poset().leq(x, y) {
                    return Err(MapError::Algebra(AlgebraError::NotComparable {
                        x: algebra.poset().identifier(x).to_string(),
                        y: algebra.poset().identifier(y).to_string(),
                    }));
                }
            }
            let value = algebra.from_entries(value.entries().map(|(k, v)| (k, v.clone())))?;
            let slot = table.entry((k1, k2)).or_insert_with(|| algebra.zero());
            *slot = algebra.add(slot, &value);
        }
        table.retain(|_, v| !v.is_zero());
        Ok(Self { algebra, table })
    }

    /// The inner biderivation `b(f, g) = lambda [f, g]`.
    pub fn inner(algebra: IncidenceAlgebra, lambda: RingValue) -> Self {
        let keys = algebra.poset().comparable_pairs().to_vec();
        let mut table = BTreeMap::new();
        for &k1 in &keys {
            for &k2 in &keys {
                let e1 = algebra.basis(k1.0, k1.1, algebra.ring().one()).expect("key is ordered");
                let e2 = algebra.basis(k2.0, k2.1, algebra.ring().one()).expect("key is ordered");
                let value = algebra.scale(&lambda, &algebra.bracket(&e1, &e2));
                if !value.is_zero() {
                    table.insert((k1, k2), value);
                }
            }
        }
        Self { algebra, table }
    }

    /// A sum of inner biderivations with one coefficient per chain
    /// region: `b(f, g) = sum over (i, j) of lambda[i][j] [f_ij, g_ij]`,
    /// where `f_ij` restricts `f` to all pairs inside region `j` of
    /// component `i` (diagonal included). Missing table entries are zero.
    pub fn inner_per_region(
        algebra: IncidenceAlgebra,
        lambdas: &BTreeMap<(usize, usize), RingValue>,
    ) -> Result<Self, MapError> {
        for &(i, j) in lambdas.keys() {
            if i >= algebra.poset().components().count()
                || j >= algebra.poset().regions(i).count()
            {
                return Err(MapError::InvalidRegion {
                    component: i,
                    region: j,
                });
            }
        }
        let keys = algebra.poset().comparable_pairs().to_vec();
        let mut table = BTreeMap::new();
        for &k1 in &keys {
            for &k2 in &keys {
                let e1 = algebra.basis(k1.0, k1.1, algebra.ring().one()).expect("key is ordered");
                let e2 = algebra.basis(k2.0, k2.1, algebra.ring().one()).expect("key is ordered");
                let mut value = algebra.zero();
                for (&(i, j), lambda) in lambdas {
                    let p1 = algebra.region_full_part(&e1, i, j);
                    let p2 = algebra.region_full_part(&e2, i, j);
                    if p1.is_zero() || p2.is_zero() {
                        continue;
                    }
                    value = algebra.add(&value, &algebra.scale(lambda, &algebra.bracket(&p1, &p2)));
                }
                if !value.is_zero() {
                    table.insert((k1, k2), value);
                }
            }
        }
        Ok(Self { algebra, table })
    }

    /// The extremal map `b(f, g) = [f, [g, gamma]]`.
    ///
    /// This is a raw constructor: for arbitrary `gamma` the result need
    /// not satisfy the biderivation laws, so callers check. It always
    /// does when `gamma` is supported on pairs `(z, w)` with `z` minimal
    /// and `w` maximal.
    pub fn extremal(algebra: IncidenceAlgebra, gamma: &AlgebraElement) -> Self {
        let keys = algebra.poset().comparable_pairs().to_vec();
        let inner_brackets: Vec<AlgebraElement> = keys
            .iter()
            .map(|&(u, v)| {
                let e = algebra.basis(u, v, algebra.ring().one()).expect("key is ordered");
                algebra.bracket(&e, gamma)
            })
            .collect();
        let mut table = BTreeMap::new();
        for &k1 in &keys {
            let e1 = algebra.basis(k1.0, k1.1, algebra.ring().one()).expect("key is ordered");
            for (idx2, &k2) in keys.iter().enumerate() {
                let value = algebra.bracket(&e1, &inner_brackets[idx2]);
                if !value.is_zero() {
                    table.insert((k1, k2), value);
                }
            }
        }
        Self { algebra, table }
    }

    pub fn sum(&self, other: &Self) -> Result<Self, MapError> {
        if self.algebra != other.algebra {
            return Err(MapError::AlgebraMismatch);
        }
        let mut table = self.table.clone();
        for (&key, value) in &other.table {
            let slot = table.entry(key).or_insert_with(|| self.algebra.zero());
            *slot = self.algebra.add(slot, value);
        }
        table.retain(|_, v| !v.is_zero());
        Ok(Self {
            algebra: self.algebra.clone(),
            table,
        })
    }

    pub fn negate_map(&self) -> Self {
        Self {
            algebra: self.algebra.clone(),
            table: self
                .table
                .iter()
                .map(|(&k, v)| (k, self.algebra.negate(v)))
                .collect(),
        }
    }

    pub fn algebra(&self) -> &IncidenceAlgebra {
        &self.algebra
    }

    pub fn is_zero_map(&self) -> bool {
        self.table.is_empty()
    }

    /// The table value at a basis pair, if nonzero.
    pub fn basis_value(&self, left: PairKey, right: PairKey) -> Option<&AlgebraElement> {
        self.table.get(&(left, right))
    }

    pub fn table_entries(&self) -> impl Iterator<Item = (TableKey, &AlgebraElement)> {
        self.table.iter().map(|(&k, v)| (k, v))
    }

    /// Bilinear evaluation: `b(f, g) = sum f_xy g_uv b(e_xy, e_uv)`.
    pub fn evaluate(&self, f: &AlgebraElement, g: &AlgebraElement) -> AlgebraElement {
        let alg = &self.algebra;
        let mut acc = alg.zero();
        for (k1, fv) in f.entries() {
            for (k2, gv) in g.entries() {
                if let Some(value) = self.table.get(&(k1, k2)) {
                    let scalar = alg.ring().mul(fv, gv);
                    acc = alg.add(&acc, &alg.scale(&scalar, value));
                }
            }
        }
        acc
    }

    fn units(&self) -> Vec<AlgebraElement> {
        self.algebra
            .poset()
            .comparable_pairs()
            .iter()
            .map(|&(x, y)| {
                self.algebra
                    .basis(x, y, self.algebra.ring().one())
                    .expect("key is ordered")
            })
            .collect()
    }

    /// Checks the two derivation laws on every basis triple.
    pub fn is_biderivation(&self) -> CheckReport {
        let alg = &self.algebra;
        let poset = alg.poset();
        let keys = poset.comparable_pairs();
        let units = self.units();
        let zero = alg.zero();
        let mut report = CheckReport::new();

        for (pi, &p) in keys.iter().enumerate() {
            for (qi, &q) in keys.iter().enumerate() {
                let prod = (p.1 == q.0).then_some((p.0, q.1));
                for &r in keys {
                    // derivation in the first argument:
                    // b(e_p e_q, e_r) = e_p b(e_q, e_r) + b(e_p, e_r) e_q
                    let lhs = prod
                        .and_then(|k| self.table.get(&(k, r)))
                        .unwrap_or(&zero);
                    let rhs = alg.add(
                        &alg.mul(&units[pi], self.table.get(&(q, r)).unwrap_or(&zero)),
                        &alg.mul(self.table.get(&(p, r)).unwrap_or(&zero), &units[qi]),
                    );
                    report.expect_eq(
                        "derivation-in-first-argument",
                        || {
                            format!(
                                "({}, {}, {})",
                                unit_name(poset, p),
                                unit_name(poset, q),
                                unit_name(poset, r)
                            )
                        },
                        lhs,
                        &rhs,
                    );

                    // derivation in the second argument:
                    // b(e_r, e_p e_q) = e_p b(e_r, e_q) + b(e_r, e_p) e_q
                    let lhs = prod
                        .and_then(|k| self.table.get(&(r, k)))
                        .unwrap_or(&zero);
                    let rhs = alg.add(
                        &alg.mul(&units[pi], self.table.get(&(r, q)).unwrap_or(&zero)),
                        &alg.mul(self.table.get(&(r, p)).unwrap_or(&zero), &units[qi]),
                    );
                    report.expect_eq(
                        "derivation-in-second-argument",
                        || {
                            format!(
                                "({}, {}, {})",
                                unit_name(poset, p),
                                unit_name(poset, q),
                                unit_name(poset, r)
                            )
                        },
                        lhs,
                        &rhs,
                    );
                }
            }
        }
        report
    }

    /// Checks the single-argument derivation law for `f -> b(f, fixed)`.
    pub fn is_derivation_in_first(&self, fixed: &AlgebraElement) -> CheckReport {
        let alg = &self.algebra;
        let poset = alg.poset();
        let keys = poset.comparable_pairs();
        let units = self.units();
        let mut report = CheckReport::new();
        for (pi, &p) in keys.iter().enumerate() {
            for (qi, &q) in keys.iter().enumerate() {
                let lhs = if p.1 == q.0 {
                    let prod = alg
                        .basis(p.0, q.1, alg.ring().one())
                        .expect("product key is ordered");
                    self.evaluate(&prod, fixed)
                } else {
                    alg.zero()
                };
                let rhs = alg.add(
                    &alg.mul(&units[pi], &self.evaluate(&units[qi], fixed)),
                    &alg.mul(&self.evaluate(&units[pi], fixed), &units[qi]),
                );
                report.expect_eq(
                    "derivation-law",
                    || {
                        format!(
                            "d = b(-, fixed), ({}, {})",
                            unit_name(poset, p),
                            unit_name(poset, q)
                        )
                    },
                    &lhs,
                    &rhs,
                );
            }
        }
        report
    }

    /// Checks `b(f, g) [h, k] = [f, g] b(h, k)` on all basis 4-tuples.
    pub fn check_change_seat(&self) -> CheckReport {
        let alg = &self.algebra;
        let poset = alg.poset();
        let keys = poset.comparable_pairs();
        let units = self.units();
        let zero = alg.zero();
        let brackets: Vec<Vec<AlgebraElement>> = units
            .iter()
            .map(|a| units.iter().map(|b| alg.bracket(a, b)).collect())
            .collect();
        let mut report = CheckReport::new();
        for (pi, &p) in keys.iter().enumerate() {
            for (qi, &q) in keys.iter().enumerate() {
                let b_pq = self.table.get(&(p, q)).unwrap_or(&zero);
                let br_pq = &brackets[pi][qi];
                for (ri, &r) in keys.iter().enumerate() {
                    for (si, &s) in keys.iter().enumerate() {
                        let b_rs = self.table.get(&(r, s)).unwrap_or(&zero);
                        let lhs = alg.mul(b_pq, &brackets[ri][si]);
                        let rhs = alg.mul(br_pq, b_rs);
                        report.expect_eq(
                            "change-seat",
                            || {
                                format!(
                                    "({}, {}, {}, {})",
                                    unit_name(poset, p),
                                    unit_name(poset, q),
                                    unit_name(poset, r),
                                    unit_name(poset, s)
                                )
                            },
                            &lhs,
                            &rhs,
                        );
                    }
                }
            }
        }
        report
    }

    /// Checks that the map vanishes whenever one pair among the four
    /// endpoints is not comparable.
    pub fn check_incomparability(&self) -> CheckReport {
        let alg = &self.algebra;
        let poset = alg.poset();
        let keys = poset.comparable_pairs();
        let zero = alg.zero();
        let mut report = CheckReport::new();
        for &(x, y) in keys {
            for &(u, v) in keys {
                let all_comparable = poset.comparable(x, u)
                    && poset.comparable(x, v)
                    && poset.comparable(y, u)
                    && poset.comparable(y, v);
                if !all_comparable {
                    let actual = self.table.get(&((x, y), (u, v))).unwrap_or(&zero);
                    report.expect_eq(
                        "incomparable-vanishing",
                        || {
                            format!(
                                "b({}, {})",
                                unit_name(poset, (x, y)),
                                unit_name(poset, (u, v))
                            )
                        },
                        &zero,
                        actual,
                    );
                }
            }
        }
        report
    }

    /// Checks that every table value is supported inside the positions
    /// allowed for its basis pair (see [`allowed_positions`]).
    pub fn check_support_shapes(&self) -> CheckReport {
        let alg = &self.algebra;
        let poset = alg.poset();
        let mut report = CheckReport::new();
        for (&(k1, k2), value) in &self.table {
            let allowed = allowed_positions(poset, k1, k2);
            let inside = alg
                .from_entries(
                    value
                        .entries()
                        .filter(|(pos, _)| allowed.binary_search(pos).is_ok())
                        .map(|(k, v)| (k, v.clone())),
                )
                .expect("restriction of a valid element");
            report.expect_eq(
                "support-shape",
                || {
                    format!(
                        "b({}, {})",
                        unit_name(poset, k1),
                        unit_name(poset, k2)
                    )
                },
                &inside,
                value,
            );
        }
        report
    }

    /// Runs the derivation-structure identities on each partial map
    /// `d = b(-, e_f)`: support shape of `d(e_xy)`, quasi-linearity of
    /// the boundary coefficients, antisymmetry of the two diagonal
    /// images at a strict pair, and additivity along chains.
    pub fn check_partial_derivation_suite(&self) -> CheckReport {
        let alg = &self.algebra;
        let ring = alg.ring();
        let poset = alg.poset();
        let keys = poset.comparable_pairs();
        let zero = alg.zero();
        let scalars = [ring.from_integer(2), ring.from_integer(-3)];
        let mut report = CheckReport::new();

        for &f in keys {
            let d = |k: PairKey| -> &AlgebraElement { self.table.get(&(k, f)).unwrap_or(&zero) };
            let witness_tail = format!("fixed {}", unit_name(poset, f));

            for &(x, y) in keys {
                let dxy = d((x, y));
                // support of d(e_xy) inside {(p, y): p <= x} U {(x, q): y < q}
                let inside = alg
                    .from_entries(
                        dxy.entries()
                            .filter(|&((s, t), _)| {
                                (t == y && poset.leq(s, x)) || (s == x && poset.lt(y, t))
                            })
                            .map(|(k, v)| (k, v.clone())),
                    )
                    .expect("restriction of a valid element");
                report.expect_eq(
                    "partial-derivation-support",
                    || format!("d({}), {}", unit_name(poset, (x, y)), witness_tail),
                    &inside,
                    dxy,
                );

                // d(r e_xy) = r d(e_xy)
                for r in &scalars {
                    let scaled_arg = alg.basis(x, y, r.clone()).expect("key is ordered");
                    let fixed = alg.basis(f.0, f.1, ring.one()).expect("key is ordered");
                    report.expect_eq(
                        "partial-derivation-scaling",
                        || {
                            format!(
                                "d({} {}), {}",
                                ring.format(r),
                                unit_name(poset, (x, y)),
                                witness_tail
                            )
                        },
                        &alg.scale(r, dxy),
                        &self.evaluate(&scaled_arg, &fixed),
                    );
                }

                // boundary coefficients match the diagonal images:
                // d_py(e_xy) = d_px(e_xx) for p < x, and
                // d_xq(e_xy) = d_yq(e_yy) for q > y
                for p in 0..poset.len() {
                    if poset.lt(p, x) {
                        let lhs = alg.coeff(dxy, p, y);
                        let rhs = alg.coeff(d((x, x)), p, x);
                        if lhs != rhs {
                            report.push(Violation {
                                identity: "partial-derivation-quasi-linearity".into(),
                                witness: format!(
                                    "d_[{},{}]({}) vs d_[{},{}](e[{},{}]), {}",
                                    poset.identifier(p),
                                    poset.identifier(y),
                                    unit_name(poset, (x, y)),
                                    poset.identifier(p),
                                    poset.identifier(x),
                                    poset.identifier(x),
                                    poset.identifier(x),
                                    witness_tail
                                ),
                                expected: Some(alg.basis(p, y, rhs).expect("ordered")),
                                actual: Some(alg.basis(p, y, lhs).expect("ordered")),
                            });
                        }
                    }
                }
                for q in 0..poset.len() {
                    if poset.lt(y, q) {
                        let lhs = alg.coeff(dxy, x, q);
                        let rhs = alg.coeff(d((y, y)), y, q);
                        if lhs != rhs {
                            report.push(Violation {
                                identity: "partial-derivation-quasi-linearity".into(),
                                witness: format!(
                                    "d_[{},{}]({}) vs d_[{},{}](e[{},{}]), {}",
                                    poset.identifier(x),
                                    poset.identifier(q),
                                    unit_name(poset, (x, y)),
                                    poset.identifier(y),
                                    poset.identifier(q),
                                    poset.identifier(y),
                                    poset.identifier(y),
                                    witness_tail
                                ),
                                expected: Some(alg.basis(x, q, rhs).expect("ordered")),
                                actual: Some(alg.basis(x, q, lhs).expect("ordered")),
                            });
                        }
                    }
                }
            }

            // d_xy(e_xx) + d_xy(e_yy) = 0 for x < y
            for &(x, y) in keys {
                if x == y {
                    continue;
                }
                let sum = ring.add(&alg.coeff(d((x, x)), x, y), &alg.coeff(d((y, y)), x, y));
                if !ring.is_zero(&sum) {
                    report.push(Violation {
                        identity: "diagonal-antisymmetry".into(),
                        witness: format!(
                            "d_[{x},{y}](e[{x},{x}]) + d_[{x},{y}](e[{y},{y}]), {tail}",
                            x = poset.identifier(x),
                            y = poset.identifier(y),
                            tail = witness_tail
                        ),
                        expected: Some(alg.zero()),
                        actual: Some(alg.basis(x, y, sum).expect("ordered")),
                    });
                }
            }

            // d_xz(e_xz) = d_xy(e_xy) + d_yz(e_yz) for x < y < z
            for &(x, z) in keys {
                for y in 0..poset.len() {
                    if !(poset.lt(x, y) && poset.lt(y, z)) {
                        continue;
                    }
                    let lhs = alg.coeff(d((x, z)), x, z);
                    let rhs = ring.add(
                        &alg.coeff(d((x, y)), x, y),
                        &alg.coeff(d((y, z)), y, z),
                    );
                    if lhs != rhs {
                        report.push(Violation {
                            identity: "chain-additivity".into(),
                            witness: format!(
                                "chain {} < {} < {}, {}",
                                poset.identifier(x),
                                poset.identifier(y),
                                poset.identifier(z),
                                witness_tail
                            ),
                            expected: Some(alg.basis(x, z, rhs).expect("ordered")),
                            actual: Some(alg.basis(x, z, lhs).expect("ordered")),
                        });
                    }
                }
            }
        }
        report
    }

    /// Checks the support of `b(e_xx, e_xx)`: zero unless `x` is minimal
    /// or maximal, in which case the value lives on pairs joining `x` to
    /// maximal (resp. minimal) elements.
    pub fn check_diagonal_square_support(&self) -> CheckReport {
        let alg = &self.algebra;
        let poset = alg.poset();
        let zero = alg.zero();
        let mut report = CheckReport::new();
        for x in 0..poset.len() {
            let value = self.table.get(&((x, x), (x, x))).unwrap_or(&zero);
            let (is_min, is_max) = (poset.is_minimal(x), poset.is_maximal(x));
            let witness = || format!("b(e[{0},{0}], e[{0},{0}])", poset.identifier(x));
            if !is_min && !is_max {
                report.expect_eq("diagonal-square-vanishing", witness, &zero, value);
                continue;
            }
            let inside = alg
                .from_entries(
                    value
                        .entries()
                        .filter(|&((s, t), _)| {
                            (is_min && s == x && poset.is_maximal(t))
                                || (is_max && t == x && poset.is_minimal(s))
                        })
                        .map(|(k, v)| (k, v.clone())),
                )
                .expect("restriction of a valid element");
            report.expect_eq("diagonal-square-support", witness, &inside, value);
        }
        report
    }

    /// Checks that `b(e_xy, e_uv)` vanishes for mutually comparable
    /// `x, y, u, v` with `x != v` and `y != u`, except on the pairs
    /// `(e_zz, e_ww)` joining a minimal and a maximal element.
    pub fn check_bracket_vanishing(&self) -> CheckReport {
        let alg = &self.algebra;
        let poset = alg.poset();
        let keys = poset.comparable_pairs();
        let zero = alg.zero();
        let mut report = CheckReport::new();
        for &(x, y) in keys {
            for &(u, v) in keys {
                let all_comparable = poset.comparable(x, u)
                    && poset.comparable(x, v)
                    && poset.comparable(y, u)
                    && poset.comparable(y, v);
                if !all_comparable || x == v || y == u {
                    continue;
                }
                let exempt = x == y
                    && u == v
                    && ((poset.is_minimal(x) && poset.is_maximal(u))
                        || (poset.is_minimal(u) && poset.is_maximal(x)));
                if exempt {
                    continue;
                }
                let actual = self.table.get(&((x, y), (u, v))).unwrap_or(&zero);
                report.expect_eq(
                    "bracket-vanishing",
                    || {
                        format!(
                            "b({}, {})",
                            unit_name(poset, (x, y)),
                            unit_name(poset, (u, v))
                        )
                    },
                    &zero,
                    actual,
                );
            }
        }
        report
    }

    /// Runs every lemma checker (not the biderivation law itself) and
    /// merges the reports.
    pub fn check_lemma_suite(&self) -> CheckReport {
        let mut report = self.check_incomparability();
        report.merge(self.check_support_shapes());
        report.merge(self.check_partial_derivation_suite());
        report.merge(self.check_diagonal_square_support());
        report.merge(self.check_bracket_vanishing());
        report.merge(self.check_change_seat());
        report
    }
}

/// The positions where `b(e_k1, e_k2)` may be supported, for any
/// biderivation `b`. Sorted and restricted to comparable pairs.
///
/// With `k1 = (x, y)` and `k2 = (u, v)` the four cases are:
/// distinct endpoints allow `(x, v)` and `(u, y)`; a shared left
/// endpoint allows `(x, q)` with `q` above both `y` and `v`; a shared
/// right endpoint allows `(p, y)` with `p` below both `x` and `u`; and
/// an equal pair allows `(p, y)` with `p <= x` plus `(x, q)` with
/// `y < q`.
pub fn allowed_positions(poset: &FinitePoset, k1: PairKey, k2: PairKey) -> Vec<PairKey> {
    let (x, y) = k1;
    let (u, v) = k2;
    let mut out = Vec::new();
    if x == u && y == v {
        for p in 0..poset.len() {
            if poset.leq(p, x) {
                out.push((p, y));
            }
        }
        for q in 0..poset.len() {
            if poset.lt(y, q) {
                out.push((x, q));
            }
        }
    } else if x == u {
        for q in 0..poset.len() {
            if poset.leq(y, q) && poset.leq(v, q) {
                out.push((x, q));
            }
        }
    } else if y == v {
        for p in 0..poset.len() {
            if poset.leq(p, x) && poset.leq(p, u) {
                out.push((p, y));
            }
        }
    } else {
        if poset.leq(x, v) {
            out.push((x, v));
        }
        if poset.leq(u, y) {
            out.push((u, y));
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}
