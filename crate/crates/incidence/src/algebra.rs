//! Sparse exact arithmetic in the incidence algebra of a finite poset.
//!
//! An element is a function from comparable pairs `(x, y)` (with
//! `x <= y`) to ring values, multiplied by convolution:
//! `(fg)(x, y) = sum over x <= z <= y of f(x, z) g(z, y)`.
//! The basis unit `e_xy` is 1 at `(x, y)` and 0 elsewhere, so
//! `e_xy e_uv = e_xv` when `y = u` and `0` otherwise, and for any `f`
//! the sandwich product collapses to `e_xy f e_uv = f(y, u) e_xv`.
//!
//! Elements store only nonzero coefficients and drop zeros eagerly, so
//! structural equality coincides with equality in the algebra.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::poset::FinitePoset;
use crate::ring::{RingDescriptor, RingError, RingValue};

/// An ordered pair of element indices with `x <= y`; a basis-unit key.
pub type PairKey = (usize, usize);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("pair (`{x}`, `{y}`) is not ordered x <= y in this poset")]
    NotComparable { x: String, y: String },
    #[error("invalid coefficient: {0}")]
    InvalidCoefficient(#[from] RingError),
    #[error("{kind} index {index} is out of range")]
    InvalidIndex { kind: &'static str, index: usize },
}

/// A sparse element of the incidence algebra: keys are comparable pairs,
/// values are nonzero ring elements.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AlgebraElement {
    entries: BTreeMap<PairKey, RingValue>,
}

impl AlgebraElement {
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = PairKey> + '_ {
        self.entries.keys().copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = (PairKey, &RingValue)> {
        self.entries.iter().map(|(&k, v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: PairKey) -> Option<&RingValue> {
        self.entries.get(&key)
    }
}

/// The incidence algebra `I(P, R)`: a poset plus a coefficient ring.
/// All element operations go through this context so they can consult
/// the order relation; elements themselves are plain sparse tables.
#[derive(Debug, Clone)]
pub struct IncidenceAlgebra {
    poset: Arc<FinitePoset>,
    ring: RingDescriptor,
}

impl PartialEq for IncidenceAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring
            && (Arc::ptr_eq(&self.poset, &other.poset) || self.poset == other.poset)
    }
}
impl Eq for IncidenceAlgebra {}

impl IncidenceAlgebra {
    pub fn new(poset: Arc<FinitePoset>, ring: RingDescriptor) -> Self {
        Self { poset, ring }
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn poset_arc(&self) -> &Arc<FinitePoset> {
        &self.poset
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement::default()
    }

    /// The multiplicative identity: the sum of `e_zz` over all elements.
    pub fn unit_delta(&self) -> AlgebraElement {
        let one = self.ring.one();
        AlgebraElement {
            entries: (0..self.poset.len()).map(|z| ((z, z), one.clone())).collect(),
        }
    }

    /// The scaled basis unit `r * e_xy`; requires `x <= y`.
    pub fn basis(&self, x: usize, y: usize, r: RingValue) -> Result<AlgebraElement, AlgebraError> {
        if !self.poset.leq(x, y) {
            return Err(AlgebraError::NotComparable {
                x: self.poset.identifier(x).to_string(),
                y: self.poset.identifier(y).to_string(),
            });
        }
        let mut entries = BTreeMap::new();
        if !self.ring.is_zero(&r) {
            entries.insert((x, y), r);
        }
        Ok(AlgebraElement { entries })
    }

    /// Builds an element from raw entries, validating keys against the
    /// order and coefficients against the ring. Zero coefficients are
    /// dropped; repeated keys accumulate.
    pub fn from_entries(
        &self,
        entries: impl IntoIterator<Item = (PairKey, RingValue)>,
    ) -> Result<AlgebraElement, AlgebraError> {
        let mut acc = self.zero();
        for ((x, y), r) in entries {
            if x >= self.poset.len() {
                return Err(AlgebraError::InvalidIndex { kind: "element", index: x });
            }
            if y >= self.poset.len() {
                return Err(AlgebraError::InvalidIndex { kind: "element", index: y });
            }
            self.ring.validate(&r)?;
            acc = self.add(&acc, &self.basis(x, y, r)?);
        }
        Ok(acc)
    }

    /// The coefficient of `a` at `(x, y)` (zero when absent).
    pub fn coeff(&self, a: &AlgebraElement, x: usize, y: usize) -> RingValue {
        a.entries.get(&(x, y)).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn add(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        let mut entries = a.entries.clone();
        for (&k, v) in &b.entries {
            match entries.entry(k) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(v.clone());
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let sum = self.ring.add(e.get(), v);
                    if self.ring.is_zero(&sum) {
                        e.remove();
                    } else {
                        *e.get_mut() = sum;
                    }
                }
            }
        }
        AlgebraElement { entries }
    }

    pub fn negate(&self, a: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            entries: a.entries.iter().map(|(&k, v)| (k, self.ring.neg(v))).collect(),
        }
    }

    pub fn sub(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        self.add(a, &self.negate(b))
    }

    pub fn scale(&self, r: &RingValue, a: &AlgebraElement) -> AlgebraElement {
        let mut entries = BTreeMap::new();
        for (&k, v) in &a.entries {
            let rv = self.ring.mul(r, v);
            if !self.ring.is_zero(&rv) {
                entries.insert(k, rv);
            }
        }
        AlgebraElement { entries }
    }

    /// Convolution product.
    pub fn mul(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        let mut acc: BTreeMap<PairKey, RingValue> = BTreeMap::new();
        for (&(x, z), av) in &a.entries {
            for (&(_, y), bv) in b.entries.range((z, 0)..=(z, usize::MAX)) {
                let term = self.ring.mul(av, bv);
                match acc.entry((x, y)) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(term);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() = self.ring.add(e.get(), &term);
                    }
                }
            }
        }
        acc.retain(|_, v| !self.ring.is_zero(v));
        AlgebraElement { entries: acc }
    }

    /// The Lie bracket `[a, b] = ab - ba`.
    pub fn bracket(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        self.sub(&self.mul(a, b), &self.mul(b, a))
    }

    fn filtered(
        &self,
        a: &AlgebraElement,
        mut keep: impl FnMut(usize, usize) -> bool,
    ) -> AlgebraElement {
        AlgebraElement {
            entries: a
                .entries
                .iter()
                .filter(|(&(x, y), _)| keep(x, y))
                .map(|(&k, v)| (k, v.clone()))
                .collect(),
        }
    }

    /// Entries with both endpoints in component `i`.
    pub fn component_part(&self, a: &AlgebraElement, i: usize) -> AlgebraElement {
        let parts = self.poset.components();
        self.filtered(a, |x, _| parts.component_of(x) == i)
    }

    /// Strictly ordered entries `x < y` with both endpoints in region
    /// `(i, j)`; the off-diagonal slice of the region.
    pub fn strict_region_part(&self, a: &AlgebraElement, i: usize, j: usize) -> AlgebraElement {
        let reg = self.poset.regions(i);
        self.filtered(a, |x, y| x != y && reg.contains(j, x) && reg.contains(j, y))
    }

    /// All entries `x <= y` with both endpoints in region `(i, j)`.
    ///
    /// Unlike the strict parts, summing this over every region may count
    /// a diagonal entry at a shared minimal or maximal element more than
    /// once; it is a projection, not a partition.
    pub fn region_full_part(&self, a: &AlgebraElement, i: usize, j: usize) -> AlgebraElement {
        let reg = self.poset.regions(i);
        self.filtered(a, |x, y| reg.contains(j, x) && reg.contains(j, y))
    }

    /// Diagonal entries `(z, z)`.
    pub fn diagonal_part(&self, a: &AlgebraElement) -> AlgebraElement {
        self.filtered(a, |x, y| x == y)
    }

    /// Diagonal entries at minimal or maximal elements of component `i`.
    pub fn hat_part(&self, a: &AlgebraElement, i: usize) -> AlgebraElement {
        let parts = self.poset.components();
        self.filtered(a, |x, y| {
            x == y
                && parts.component_of(x) == i
                && (self.poset.is_minimal(x) || self.poset.is_maximal(x))
        })
    }

    /// Renders an element like `2*e[a,b] + e[c,c]` for reports.
    pub fn format_element(&self, a: &AlgebraElement) -> String {
        if a.is_zero() {
            return "0".to_string();
        }
        a.entries
            .iter()
            .map(|(&(x, y), v)| {
                format!(
                    "{}*e[{},{}]",
                    self.ring.format(v),
                    self.poset.identifier(x),
                    self.poset.identifier(y)
                )
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::gen;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn algebra(p: FinitePoset, ring: RingDescriptor) -> IncidenceAlgebra {
        IncidenceAlgebra::new(Arc::new(p), ring)
    }

    fn int_algebra(p: FinitePoset) -> IncidenceAlgebra {
        algebra(p, RingDescriptor::Integer)
    }

    fn unit(alg: &IncidenceAlgebra, x: &str, y: &str) -> AlgebraElement {
        let p = alg.poset();
        alg.basis(
            p.index_of(x).unwrap(),
            p.index_of(y).unwrap(),
            alg.ring().one(),
        )
        .unwrap()
    }

    #[test]
    fn basis_unit_coefficients() {
        let alg = int_algebra(fixtures::three_chain());
        let e = unit(&alg, "x", "y");
        assert_eq!(alg.coeff(&e, 0, 1), alg.ring().one());
        assert_eq!(alg.coeff(&e, 0, 2), alg.ring().zero());
        assert_eq!(alg.coeff(&e, 1, 1), alg.ring().zero());
    }

    #[test]
    fn basis_with_zero_scalar_is_zero() {
        let alg = int_algebra(fixtures::three_chain());
        assert!(alg.basis(0, 1, alg.ring().zero()).unwrap().is_zero());
    }

    #[test]
    fn basis_rejects_unordered_pair() {
        let alg = int_algebra(fixtures::three_chain());
        assert!(matches!(
            alg.basis(2, 0, alg.ring().one()),
            Err(AlgebraError::NotComparable { .. })
        ));
    }

    #[test]
    fn unit_delta_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in fixtures::all() {
            let alg = int_algebra(p);
            let delta = alg.unit_delta();
            for _ in 0..20 {
                let a = gen::random_element(&alg, &mut rng);
                assert_eq!(alg.mul(&delta, &a), a);
                assert_eq!(alg.mul(&a, &delta), a);
            }
        }
    }

    #[test]
    fn additive_inverses_and_zero_scaling() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let alg = int_algebra(fixtures::branching());
        for _ in 0..20 {
            let a = gen::random_element(&alg, &mut rng);
            assert!(alg.add(&a, &alg.negate(&a)).is_zero());
            assert!(alg.scale(&alg.ring().zero(), &a).is_zero());
        }
    }

    #[test]
    fn basis_products() {
        let alg = int_algebra(fixtures::three_chain());
        let (exy, eyz, exz) = (unit(&alg, "x", "y"), unit(&alg, "y", "z"), unit(&alg, "x", "z"));
        assert_eq!(alg.mul(&exy, &eyz), exz);
        assert!(alg.mul(&exy, &exy).is_zero());
        assert!(alg.mul(&eyz, &exy).is_zero());
    }

    #[test]
    fn sandwich_identity() {
        // e_xy * f * e_uv = f(y, u) * e_xv, for every basis pair
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for p in fixtures::all() {
            let alg = algebra(p, RingDescriptor::Rational);
            for _ in 0..10 {
                let f = gen::random_element(&alg, &mut rng);
                for &(x, y) in alg.poset().comparable_pairs() {
                    for &(u, v) in alg.poset().comparable_pairs() {
                        let exy = alg.basis(x, y, alg.ring().one()).unwrap();
                        let euv = alg.basis(u, v, alg.ring().one()).unwrap();
                        let lhs = alg.mul(&alg.mul(&exy, &f), &euv);
                        let rhs = if alg.poset().leq(x, v) {
                            alg.basis(x, v, alg.coeff(&f, y, u)).unwrap()
                        } else {
                            alg.zero()
                        };
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn bracket_basics() {
        let alg = int_algebra(fixtures::three_chain());
        let (exx, exy, eyz, exz) =
            (unit(&alg, "x", "x"), unit(&alg, "x", "y"), unit(&alg, "y", "z"), unit(&alg, "x", "z"));
        assert!(alg.bracket(&exy, &exy).is_zero());
        assert_eq!(alg.bracket(&exx, &exy), exy);
        assert_eq!(alg.bracket(&exy, &eyz), exz);
    }

    #[test]
    fn mul_is_associative() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for ring in [
            RingDescriptor::Integer,
            RingDescriptor::modular(6).unwrap(),
            RingDescriptor::Rational,
        ] {
            for p in fixtures::all() {
                let alg = algebra(p, ring.clone());
                for _ in 0..15 {
                    let a = gen::random_element(&alg, &mut rng);
                    let b = gen::random_element(&alg, &mut rng);
                    let c = gen::random_element(&alg, &mut rng);
                    assert_eq!(alg.mul(&alg.mul(&a, &b), &c), alg.mul(&a, &alg.mul(&b, &c)));
                }
            }
        }
    }

    #[test]
    fn strict_parts_and_diagonal_partition_element() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in fixtures::all() {
            let alg = algebra(p, RingDescriptor::modular(5).unwrap());
            for _ in 0..20 {
                let a = gen::random_element(&alg, &mut rng);
                let mut total = alg.diagonal_part(&a);
                for i in 0..alg.poset().components().count() {
                    for j in 0..alg.poset().regions(i).count() {
                        total = alg.add(&total, &alg.strict_region_part(&a, i, j));
                    }
                }
                assert_eq!(total, a);
            }
        }
    }

    #[test]
    fn strict_region_part_excludes_diagonal() {
        let alg = int_algebra(fixtures::branching());
        let ezz = unit(&alg, "a", "a");
        for j in 0..alg.poset().regions(0).count() {
            assert!(alg.strict_region_part(&ezz, 0, j).is_zero());
        }
        // but the full region part keeps the diagonal of a shared element
        assert_eq!(alg.region_full_part(&ezz, 0, 0), ezz);
        assert_eq!(alg.region_full_part(&ezz, 0, 1), ezz);
    }

    #[test]
    fn strict_part_of_branch_pair_lives_in_one_region() {
        let alg = int_algebra(fixtures::branching());
        let eab = unit(&alg, "a", "b");
        assert_eq!(alg.strict_region_part(&eab, 0, 0), eab);
        assert!(alg.strict_region_part(&eab, 0, 1).is_zero());
    }

    #[test]
    fn distinct_region_strict_parts_annihilate() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for p in fixtures::all() {
            let alg = algebra(p, RingDescriptor::Integer);
            for _ in 0..20 {
                let a = gen::random_element(&alg, &mut rng);
                let b = gen::random_element(&alg, &mut rng);
                for i in 0..alg.poset().components().count() {
                    let regions = alg.poset().regions(i).count();
                    for j1 in 0..regions {
                        for j2 in 0..regions {
                            if j1 != j2 {
                                let lhs = alg.mul(
                                    &alg.strict_region_part(&a, i, j1),
                                    &alg.strict_region_part(&b, i, j2),
                                );
                                assert!(lhs.is_zero());
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn cross_component_parts_annihilate() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let alg = int_algebra(fixtures::two_component());
        for _ in 0..20 {
            let a = gen::random_element(&alg, &mut rng);
            let b = gen::random_element(&alg, &mut rng);
            assert!(alg.mul(&alg.component_part(&a, 0), &alg.component_part(&b, 1)).is_zero());
            assert!(alg.mul(&alg.component_part(&a, 1), &alg.component_part(&b, 0)).is_zero());
        }
    }

    #[test]
    fn hat_part_keeps_extreme_diagonals() {
        let alg = int_algebra(fixtures::branching());
        let delta = alg.unit_delta();
        let hat = alg.hat_part(&delta, 0);
        let names: Vec<&str> = hat.support().map(|(x, _)| alg.poset().identifier(x)).collect();
        // every element except the middle ones b and c
        assert_eq!(names, ["a", "d", "e", "f"]);
    }

    #[test]
    fn from_entries_accumulates_and_validates() {
        let alg = int_algebra(fixtures::three_chain());
        let two = alg.ring().from_integer(2);
        let minus_two = alg.ring().from_integer(-2);
        let a = alg
            .from_entries([((0, 1), two.clone()), ((0, 1), minus_two)])
            .unwrap();
        assert!(a.is_zero());
        assert!(alg.from_entries([((2, 0), two)]).is_err());
    }
}
