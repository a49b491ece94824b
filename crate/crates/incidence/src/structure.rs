//! Constructive decomposition of biderivations.
//!
//! On a poset whose maximal chains all have at least three elements,
//! every biderivation `b` is determined by one scalar per chain region
//! and one min/max-supported element per component:
//!
//! * `lambda[i][j]` is read off as `-b(e_xy, e_xx)` at position `(x, y)`
//!   for any strict pair `x < y` of the region; the choice of pair does
//!   not matter, and [`verify_lambda_constancy`] checks that it does not.
//! * `T[i]` is `-sum b(e_zz, e_ww)(z, w) e_zw` over pairs `z < w` of the
//!   component with `z` minimal and `w` maximal.
//!
//! [`reconstruct`] rebuilds the map as the sum of per-region inner
//! biderivations and per-component extremal maps seeded by hats (the
//! diagonal units at extreme elements), and [`verify_structure_theorem`]
//! asserts exact table equality of the round trip.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::algebra::{AlgebraElement, IncidenceAlgebra};
use crate::bilinear::{BilinearMap, TableKey};
use crate::poset::FinitePoset;
use crate::report::CheckReport;
use crate::ring::{RingDescriptor, RingValue};

/// The extracted data: per component, one lambda per region and the
/// extremal seed `T`, supported on pairs of a minimal and a maximal
/// element of that component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub ring: RingDescriptor,
    pub components: Vec<ComponentDecomposition>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentDecomposition {
    /// Region coefficients, indexed by region.
    pub lambdas: Vec<RingValue>,
    /// The extremal seed of this component.
    pub t: AlgebraElement,
}

#[derive(Debug, Error)]
pub enum StructureError {
    #[error("region (component {component}, region {region}) has no strictly ordered pair")]
    EmptyRegion { component: usize, region: usize },
    #[error("decomposition does not match the poset: {0}")]
    Shape(String),
}

/// Why extraction refused to run; carries the failing report.
#[derive(Debug, Error)]
pub enum ExtractionError {
    #[error("map is not a biderivation ({0} violations)", .report.violations().len())]
    NotBiderivation { report: CheckReport },
    #[error("poset fails the minimum chain-size precondition")]
    PreconditionFailed { report: CheckReport },
    #[error("lambda is not constant on region (component {component}, region {region})")]
    LambdaInconstant {
        component: usize,
        region: usize,
        report: CheckReport,
    },
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// Passes iff every maximal chain has at least three elements.
pub fn check_preconditions(poset: &FinitePoset) -> CheckReport {
    let mut report = CheckReport::new();
    for c in 0..poset.components().count() {
        for chain in poset.maximal_chains(c) {
            if chain.len() < 3 {
                let names = chain
                    .iter()
                    .map(|&x| poset.identifier(x))
                    .collect::<Vec<_>>()
                    .join(" < ");
                report.fail(
                    "min-chain-size",
                    format!("maximal chain {{{names}}} has {} < 3 elements", chain.len()),
                );
            }
        }
    }
    if poset.is_empty() {
        report.fail("min-chain-size", "poset is empty");
    }
    report
}

/// The lexicographically smallest strict pair inside a region.
fn canonical_strict_pair(
    poset: &FinitePoset,
    component: usize,
    region: usize,
) -> Result<(usize, usize), StructureError> {
    let reg = poset.regions(component);
    poset
        .comparable_pairs()
        .iter()
        .copied()
        .find(|&(x, y)| x != y && reg.contains(region, x) && reg.contains(region, y))
        .ok_or(StructureError::EmptyRegion { component, region })
}

fn lambda_at(b: &BilinearMap, x: usize, y: usize) -> RingValue {
    let alg = b.algebra();
    let value = b
        .basis_value((x, y), (x, x))
        .cloned()
        .unwrap_or_else(|| alg.zero());
    alg.ring().neg(&alg.coeff(&value, x, y))
}

/// Reads the region coefficient off the canonical strict pair:
/// `lambda = -b(e_xy, e_xx)(x, y)`.
pub fn extract_lambda(
    b: &BilinearMap,
    component: usize,
    region: usize,
) -> Result<RingValue, StructureError> {
    let (x, y) = canonical_strict_pair(b.algebra().poset(), component, region)?;
    Ok(lambda_at(b, x, y))
}

/// Asserts that the defining coefficient of lambda is the same at every
/// strict pair of the region, and that it flips sign when the arguments
/// swap: `b(e_xy, e_xx)(x, y) = -b(e_xx, e_xy)(x, y)`.
pub fn verify_lambda_constancy(b: &BilinearMap, component: usize, region: usize) -> CheckReport {
    let alg = b.algebra();
    let poset = alg.poset();
    let reg = poset.regions(component);
    let mut report = CheckReport::new();
    let strict: Vec<(usize, usize)> = poset
        .comparable_pairs()
        .iter()
        .copied()
        .filter(|&(x, y)| x != y && reg.contains(region, x) && reg.contains(region, y))
        .collect();
    let Some(&(x0, y0)) = strict.first() else {
        report.fail(
            "lambda-constancy",
            format!("region (component {component}, region {region}) has no strict pair"),
        );
        return report;
    };
    let reference = lambda_at(b, x0, y0);
    for &(u, v) in &strict {
        let here = lambda_at(b, u, v);
        if here != reference {
            report.fail(
                "lambda-constancy",
                format!(
                    "b(e[{u},{v}], e[{u},{u}])({u},{v}) = {} but pair ({x0},{y0}) gives {}",
                    alg.ring().format(&alg.ring().neg(&here)),
                    alg.ring().format(&alg.ring().neg(&reference)),
                    u = poset.identifier(u),
                    v = poset.identifier(v),
                    x0 = poset.identifier(x0),
                    y0 = poset.identifier(y0),
                ),
            );
        }
        // sign relation: b(e_uv, e_uu)(u,v) = -b(e_uu, e_uv)(u,v)
        let swapped = b
            .basis_value((u, u), (u, v))
            .cloned()
            .unwrap_or_else(|| alg.zero());
        let swapped_coeff = alg.coeff(&swapped, u, v);
        let direct = alg.ring().neg(&here); // = b(e_uv, e_uu)(u, v)
        if direct != alg.ring().neg(&swapped_coeff) {
            report.fail(
                "lambda-sign-relation",
                format!(
                    "b(e[{u},{v}], e[{u},{u}])({u},{v}) = {} but -b(e[{u},{u}], e[{u},{v}])({u},{v}) = {}",
                    alg.ring().format(&direct),
                    alg.ring().format(&alg.ring().neg(&swapped_coeff)),
                    u = poset.identifier(u),
                    v = poset.identifier(v),
                ),
            );
        }
    }
    report
}

/// The extremal seed of component `i`:
/// `T = -sum over z < w, z minimal, w maximal of b(e_zz, e_ww)(z, w) e_zw`.
pub fn extract_t(b: &BilinearMap, component: usize) -> AlgebraElement {
    let alg = b.algebra();
    let poset = alg.poset();
    let mut t = alg.zero();
    for &(z, w) in poset.comparable_pairs() {
        if z == w
            || poset.components().component_of(z) != component
            || !poset.is_minimal(z)
            || !poset.is_maximal(w)
        {
            continue;
        }
        let value = b
            .basis_value((z, z), (w, w))
            .cloned()
            .unwrap_or_else(|| alg.zero());
        let coeff = alg.ring().neg(&alg.coeff(&value, z, w));
        t = alg.add(&t, &alg.basis(z, w, coeff).expect("z < w"));
    }
    t
}

/// Extracts the full decomposition, refusing (with the failing report)
/// unless the map is a biderivation on a preconditioned poset with
/// constant lambdas.
pub fn extract_decomposition(b: &BilinearMap) -> Result<Decomposition, ExtractionError> {
    let report = b.is_biderivation();
    if !report.passed() {
        return Err(ExtractionError::NotBiderivation { report });
    }
    let poset = b.algebra().poset();
    let report = check_preconditions(poset);
    if !report.passed() {
        return Err(ExtractionError::PreconditionFailed { report });
    }
    for i in 0..poset.components().count() {
        for j in 0..poset.regions(i).count() {
            let report = verify_lambda_constancy(b, i, j);
            if !report.passed() {
                return Err(ExtractionError::LambdaInconstant {
                    component: i,
                    region: j,
                    report,
                });
            }
        }
    }
    let mut components = Vec::new();
    for i in 0..poset.components().count() {
        let lambdas = (0..poset.regions(i).count())
            .map(|j| extract_lambda(b, i, j))
            .collect::<Result<Vec<_>, _>>()?;
        components.push(ComponentDecomposition {
            lambdas,
            t: extract_t(b, i),
        });
    }
    Ok(Decomposition {
        ring: b.algebra().ring().clone(),
        components,
    })
}

/// Rebuilds the map a decomposition describes: per-region inner
/// biderivations plus, per component, the extremal map
/// `(f, g) -> [f_hat, [g_hat, T]]` on hat diagonals.
pub fn reconstruct(
    algebra: &IncidenceAlgebra,
    dec: &Decomposition,
) -> Result<BilinearMap, StructureError> {
    let poset = algebra.poset();
    if dec.ring != *algebra.ring() {
        return Err(StructureError::Shape(format!(
            "decomposition ring {} differs from algebra ring {}",
            dec.ring,
            algebra.ring()
        )));
    }
    if dec.components.len() != poset.components().count() {
        return Err(StructureError::Shape(format!(
            "{} component entries for a poset with {} components",
            dec.components.len(),
            poset.components().count()
        )));
    }
    let mut lambdas = BTreeMap::new();
    for (i, comp) in dec.components.iter().enumerate() {
        if comp.lambdas.len() != poset.regions(i).count() {
            return Err(StructureError::Shape(format!(
                "component {i} has {} lambdas for {} regions",
                comp.lambdas.len(),
                poset.regions(i).count()
            )));
        }
        for (j, lambda) in comp.lambdas.iter().enumerate() {
            lambdas.insert((i, j), lambda.clone());
        }
        for (z, w) in comp.t.support() {
            let ok = z != w
                && poset.components().component_of(z) == i
                && poset.is_minimal(z)
                && poset.is_maximal(w);
            if !ok {
                return Err(StructureError::Shape(format!(
                    "T of component {i} has support at ({}, {}), which is not a \
                     minimal-maximal pair of that component",
                    poset.identifier(z),
                    poset.identifier(w)
                )));
            }
        }
    }

    let inner = BilinearMap::inner_per_region(algebra.clone(), &lambdas)
        .map_err(|e| StructureError::Shape(e.to_string()))?;

    // extremal part on hat diagonals: only pairs of extreme elements of
    // the same component contribute
    let mut extremal_entries: Vec<(TableKey, AlgebraElement)> = Vec::new();
    for (i, comp) in dec.components.iter().enumerate() {
        if comp.t.is_zero() {
            continue;
        }
        let hats: Vec<usize> = poset
            .components()
            .members(i)
            .iter()
            .copied()
            .filter(|&z| poset.is_minimal(z) || poset.is_maximal(z))
            .collect();
        for &z in &hats {
            let ezz = algebra.basis(z, z, algebra.ring().one()).expect("diagonal");
            for &w in &hats {
                let eww = algebra.basis(w, w, algebra.ring().one()).expect("diagonal");
                let value = algebra.bracket(&ezz, &algebra.bracket(&eww, &comp.t));
                if !value.is_zero() {
                    extremal_entries.push((((z, z), (w, w)), value));
                }
            }
        }
    }
    let extremal = BilinearMap::from_table(algebra.clone(), extremal_entries)
        .map_err(|e| StructureError::Shape(e.to_string()))?;
    inner
        .sum(&extremal)
        .map_err(|e| StructureError::Shape(e.to_string()))
}

/// Runs the whole pipeline and reports which stage fails, if any:
/// biderivation laws, chain-size precondition, lambda constancy, then
/// exact table equality of `reconstruct(extract(b))` against `b`.
pub fn verify_structure_theorem(b: &BilinearMap) -> CheckReport {
    let mut report = CheckReport::new();
    let laws = b.is_biderivation();
    if !laws.passed() {
        report.fail("structure-theorem-stage", "biderivation laws failed");
        report.merge(laws);
        return report;
    }
    let poset = b.algebra().poset();
    let pre = check_preconditions(poset);
    if !pre.passed() {
        report.fail("structure-theorem-stage", "chain-size precondition failed");
        report.merge(pre);
        return report;
    }
    for i in 0..poset.components().count() {
        for j in 0..poset.regions(i).count() {
            let constancy = verify_lambda_constancy(b, i, j);
            if !constancy.passed() {
                report.fail(
                    "structure-theorem-stage",
                    format!("lambda constancy failed on (component {i}, region {j})"),
                );
                report.merge(constancy);
            }
        }
    }
    if !report.passed() {
        return report;
    }
    let dec = match extract_decomposition(b) {
        Ok(dec) => dec,
        Err(e) => {
            report.fail("structure-theorem-stage", format!("extraction failed: {e}"));
            return report;
        }
    };
    let rebuilt = match reconstruct(b.algebra(), &dec) {
        Ok(m) => m,
        Err(e) => {
            report.fail("structure-theorem-stage", format!("reconstruction failed: {e}"));
            return report;
        }
    };
    compare_tables(b, &rebuilt, &mut report);
    report
}

fn compare_tables(original: &BilinearMap, rebuilt: &BilinearMap, report: &mut CheckReport) {
    let alg = original.algebra();
    let poset = alg.poset();
    let zero = alg.zero();
    let mut keys: Vec<TableKey> = original
        .table_entries()
        .map(|(k, _)| k)
        .chain(rebuilt.table_entries().map(|(k, _)| k))
        .collect();
    keys.sort_unstable();
    keys.dedup();
    for (k1, k2) in keys {
        let expected = original.basis_value(k1, k2).unwrap_or(&zero);
        let actual = rebuilt.basis_value(k1, k2).unwrap_or(&zero);
        report.expect_eq(
            "round-trip",
            || {
                format!(
                    "b(e[{},{}], e[{},{}])",
                    poset.identifier(k1.0),
                    poset.identifier(k1.1),
                    poset.identifier(k2.0),
                    poset.identifier(k2.1)
                )
            },
            expected,
            actual,
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::gen;
    use crate::poset::FinitePoset;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn algebra(p: FinitePoset, ring: RingDescriptor) -> IncidenceAlgebra {
        IncidenceAlgebra::new(Arc::new(p), ring)
    }

    #[test]
    fn preconditions_on_fixtures_and_small_posets() {
        for p in fixtures::all() {
            assert!(check_preconditions(&p).passed());
        }
        let two_chain = FinitePoset::from_covers(&["x", "y"], &[("x", "y")]).unwrap();
        assert!(!check_preconditions(&two_chain).passed());
        let single = FinitePoset::from_covers(&["x"], &[]).unwrap();
        assert!(!check_preconditions(&single).passed());
    }

    #[test]
    fn inner_lambda_recovered_everywhere() {
        for p in fixtures::all() {
            for ring in [
                RingDescriptor::Integer,
                RingDescriptor::modular(5).unwrap(),
                RingDescriptor::Rational,
            ] {
                let alg = algebra(p.clone(), ring);
                let lambda = alg.ring().from_integer(3);
                let b = BilinearMap::inner(alg.clone(), lambda.clone());
                for i in 0..alg.poset().components().count() {
                    for j in 0..alg.poset().regions(i).count() {
                        assert_eq!(extract_lambda(&b, i, j).unwrap(), lambda);
                        assert!(verify_lambda_constancy(&b, i, j).passed());
                    }
                }
            }
        }
    }

    #[test]
    fn zero_map_extracts_to_zero() {
        let alg = algebra(fixtures::two_component(), RingDescriptor::Integer);
        let b = BilinearMap::zero(alg.clone());
        let dec = extract_decomposition(&b).unwrap();
        for comp in &dec.components {
            assert!(comp.t.is_zero());
            for l in &comp.lambdas {
                assert!(alg.ring().is_zero(l));
            }
        }
        assert!(reconstruct(&alg, &dec).unwrap().is_zero_map());
    }

    #[test]
    fn per_region_lambdas_recovered() {
        let alg = algebra(fixtures::branching(), RingDescriptor::Integer);
        let mut lambdas = std::collections::BTreeMap::new();
        lambdas.insert((0usize, 0usize), alg.ring().from_integer(4));
        lambdas.insert((0usize, 1usize), alg.ring().from_integer(-7));
        let b = BilinearMap::inner_per_region(alg.clone(), &lambdas).unwrap();
        assert_eq!(extract_lambda(&b, 0, 0).unwrap(), alg.ring().from_integer(4));
        assert_eq!(extract_lambda(&b, 0, 1).unwrap(), alg.ring().from_integer(-7));
    }

    #[test]
    fn lambda_choice_of_pair_does_not_matter() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for p in fixtures::all() {
            let alg = algebra(p, RingDescriptor::Rational);
            let (b, _) = gen::random_structured_map(&alg, &mut rng);
            let poset = alg.poset();
            for i in 0..poset.components().count() {
                for j in 0..poset.regions(i).count() {
                    let canonical = extract_lambda(&b, i, j).unwrap();
                    let reg = poset.regions(i);
                    for &(x, y) in poset.comparable_pairs() {
                        if x != y && reg.contains(j, x) && reg.contains(j, y) {
                            assert_eq!(super::lambda_at(&b, x, y), canonical);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn extremal_seed_recovered_on_three_chain() {
        let alg = algebra(fixtures::three_chain(), RingDescriptor::Integer);
        let gamma = alg.basis(0, 2, alg.ring().one()).unwrap();
        let b = BilinearMap::extremal(alg.clone(), &gamma);
        assert_eq!(extract_t(&b, 0), gamma);
        let b_inner = BilinearMap::inner(alg.clone(), alg.ring().from_integer(6));
        assert!(extract_t(&b_inner, 0).is_zero());
    }

    #[test]
    fn t_support_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for p in fixtures::all() {
            let alg = algebra(p, RingDescriptor::Integer);
            let (b, _) = gen::random_structured_map(&alg, &mut rng);
            let poset = alg.poset();
            for i in 0..poset.components().count() {
                let t = extract_t(&b, i);
                for (z, w) in t.support() {
                    assert!(poset.lt(z, w));
                    assert!(poset.is_minimal(z));
                    assert!(poset.is_maximal(w));
                    assert_eq!(poset.components().component_of(z), i);
                }
            }
        }
    }

    #[test]
    fn structured_maps_round_trip_and_recover_parts() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for p in fixtures::all() {
            for ring in [
                RingDescriptor::Integer,
                RingDescriptor::modular(5).unwrap(),
                RingDescriptor::Rational,
            ] {
                let alg = algebra(p.clone(), ring);
                for _ in 0..5 {
                    let (b, parts) = gen::random_structured_map(&alg, &mut rng);
                    let dec = extract_decomposition(&b).unwrap();
                    for (&(i, j), lambda) in &parts.lambdas {
                        assert_eq!(&dec.components[i].lambdas[j], lambda);
                    }
                    let mut gamma = alg.zero();
                    for comp in &dec.components {
                        gamma = alg.add(&gamma, &comp.t);
                    }
                    assert_eq!(gamma, parts.gamma);
                    let rebuilt = reconstruct(&alg, &dec).unwrap();
                    assert_eq!(rebuilt, b);
                    assert!(verify_structure_theorem(&b).passed());
                }
            }
        }
    }

    #[test]
    fn extraction_is_additive() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        let alg = algebra(fixtures::two_component(), RingDescriptor::Integer);
        let (b1, _) = gen::random_structured_map(&alg, &mut rng);
        let (b2, _) = gen::random_structured_map(&alg, &mut rng);
        let d1 = extract_decomposition(&b1).unwrap();
        let d2 = extract_decomposition(&b2).unwrap();
        let d = extract_decomposition(&b1.sum(&b2).unwrap()).unwrap();
        for i in 0..d.components.len() {
            for j in 0..d.components[i].lambdas.len() {
                assert_eq!(
                    d.components[i].lambdas[j],
                    alg.ring()
                        .add(&d1.components[i].lambdas[j], &d2.components[i].lambdas[j])
                );
            }
            assert_eq!(
                d.components[i].t,
                alg.add(&d1.components[i].t, &d2.components[i].t)
            );
        }
    }

    #[test]
    fn cross_component_independence() {
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        let alg = algebra(fixtures::two_component(), RingDescriptor::Integer);
        let (b, _) = gen::random_structured_map(&alg, &mut rng);
        for _ in 0..10 {
            let f = gen::random_element(&alg, &mut rng);
            let g = gen::random_element(&alg, &mut rng);
            let mut by_component = alg.zero();
            for i in 0..alg.poset().components().count() {
                by_component = alg.add(
                    &by_component,
                    &b.evaluate(&alg.component_part(&f, i), &alg.component_part(&g, i)),
                );
            }
            assert_eq!(b.evaluate(&f, &g), by_component);
        }
    }

    #[test]
    fn raw_extremal_equals_hat_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(36);
        for p in fixtures::all() {
            let alg = algebra(p, RingDescriptor::Integer);
            let gamma = gen::random_extremal_gamma(&alg, &mut rng);
            let raw = BilinearMap::extremal(alg.clone(), &gamma);
            let dec = Decomposition {
                ring: alg.ring().clone(),
                components: (0..alg.poset().components().count())
                    .map(|i| ComponentDecomposition {
                        lambdas: vec![
                            alg.ring().zero();
                            alg.poset().regions(i).count()
                        ],
                        t: alg.component_part(&gamma, i),
                    })
                    .collect(),
            };
            assert_eq!(reconstruct(&alg, &dec).unwrap(), raw);
        }
    }

    #[test]
    fn pipeline_reports_failing_stage() {
        let two_chain = FinitePoset::from_covers(&["x", "y"], &[("x", "y")]).unwrap();
        let alg = algebra(two_chain, RingDescriptor::Integer);
        let b = BilinearMap::inner(alg.clone(), alg.ring().one());
        let report = verify_structure_theorem(&b);
        assert!(!report.passed());
        assert!(report
            .violations()
            .iter()
            .any(|v| v.witness.contains("precondition")));
        assert!(matches!(
            extract_decomposition(&b),
            Err(ExtractionError::PreconditionFailed { .. })
        ));
    }

    #[test]
    fn extraction_refuses_corrupted_tables() {
        let alg = algebra(fixtures::three_chain(), RingDescriptor::Integer);
        let e = alg.basis(1, 2, alg.ring().one()).unwrap();
        let bad = BilinearMap::from_table(alg.clone(), [(((1, 1), (1, 1)), e)]).unwrap();
        assert!(matches!(
            extract_decomposition(&bad),
            Err(ExtractionError::NotBiderivation { .. })
        ));
    }

    #[test]
    fn reconstruct_rejects_shape_mismatches() {
        let alg = algebra(fixtures::three_chain(), RingDescriptor::Integer);
        let dec = Decomposition {
            ring: alg.ring().clone(),
            components: vec![],
        };
        assert!(matches!(
            reconstruct(&alg, &dec),
            Err(StructureError::Shape(_))
        ));
        let bad_t = Decomposition {
            ring: alg.ring().clone(),
            components: vec![ComponentDecomposition {
                lambdas: vec![alg.ring().zero()],
                // (x, y) is not a min-max pair: y is not maximal
                t: alg.basis(0, 1, alg.ring().one()).unwrap(),
            }],
        };
        assert!(matches!(
            reconstruct(&alg, &bad_t),
            Err(StructureError::Shape(_))
        ));
    }
}
