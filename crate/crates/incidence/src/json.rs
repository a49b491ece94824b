//! JSON file formats: posets, algebra elements, bilinear maps (explicit
//! tables or constructor specs), decompositions, and check reports.
//!
//! Coefficients travel as strings in the ring's text form (`"3"`,
//! `"-2"`, `"1/2"`), elements reference poset members by identifier,
//! and all emitted collections are sorted, so equal inputs serialize to
//! identical bytes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraElement, AlgebraError, IncidenceAlgebra};
use crate::bilinear::{BilinearMap, MapError};
use crate::poset::{FinitePoset, PosetError};
use crate::report::CheckReport;
use crate::ring::RingError;
use crate::structure::{ComponentDecomposition, Decomposition, StructureError};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate lambda entry for component {component}, region {region}")]
    DuplicateLambda { component: usize, region: usize },
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// `{"elements": [...], "covers": [["a","b"], ...]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PosetJson {
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
}

pub fn poset_from_json(json: &PosetJson) -> Result<FinitePoset, PosetError> {
    FinitePoset::from_covers(&json.elements, &json.covers)
}

pub fn poset_to_json(poset: &FinitePoset) -> PosetJson {
    PosetJson {
        elements: poset.elements().to_vec(),
        covers: poset
            .covers()
            .iter()
            .map(|&(x, y)| {
                (
                    poset.identifier(x).to_string(),
                    poset.identifier(y).to_string(),
                )
            })
            .collect(),
    }
}

/// `{"entries": [{"at": ["x","y"], "coeff": "3"}, ...]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ElementJson {
    pub entries: Vec<ElementEntryJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ElementEntryJson {
    pub at: (String, String),
    pub coeff: String,
}

fn index_of(poset: &FinitePoset, name: &str) -> Result<usize, IngestError> {
    poset
        .index_of(name)
        .ok_or_else(|| IngestError::UnknownElement(name.to_string()))
}

pub fn element_from_json(
    algebra: &IncidenceAlgebra,
    json: &ElementJson,
) -> Result<AlgebraElement, IngestError> {
    let mut entries = Vec::new();
    for e in &json.entries {
        let x = index_of(algebra.poset(), &e.at.0)?;
        let y = index_of(algebra.poset(), &e.at.1)?;
        let coeff = algebra.ring().parse(&e.coeff)?;
        entries.push(((x, y), coeff));
    }
    Ok(algebra.from_entries(entries)?)
}

pub fn element_to_json(algebra: &IncidenceAlgebra, element: &AlgebraElement) -> ElementJson {
    ElementJson {
        entries: element
            .entries()
            .map(|((x, y), v)| ElementEntryJson {
                at: (
                    algebra.poset().identifier(x).to_string(),
                    algebra.poset().identifier(y).to_string(),
                ),
                coeff: algebra.ring().format(v),
            })
            .collect(),
    }
}

/// A bilinear map in a file: either an explicit table or a constructor
/// spec, possibly a sum of both kinds.
///
/// * `{"entries": [{"left": ["x","y"], "right": ["u","v"], "value": {...}}]}`
/// * `{"inner": {"lambda": "3"}}`
/// * `{"inner_per_region": {"lambdas": [{"component": 0, "region": 1, "value": "2"}]}}`
/// * `{"extremal": {"gamma": {...}}}`
/// * `{"sum": [<spec>, ...]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapSpecJson {
    Entries(Vec<MapEntryJson>),
    Inner(InnerSpecJson),
    InnerPerRegion(InnerPerRegionSpecJson),
    Extremal(ExtremalSpecJson),
    Sum(Vec<MapSpecJson>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MapEntryJson {
    pub left: (String, String),
    pub right: (String, String),
    pub value: ElementJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InnerSpecJson {
    pub lambda: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InnerPerRegionSpecJson {
    pub lambdas: Vec<LambdaEntryJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LambdaEntryJson {
    pub component: usize,
    pub region: usize,
    pub value: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtremalSpecJson {
    pub gamma: ElementJson,
}

pub fn map_from_spec(
    algebra: &IncidenceAlgebra,
    spec: &MapSpecJson,
) -> Result<BilinearMap, IngestError> {
    match spec {
        MapSpecJson::Entries(entries) => {
            let mut table = Vec::new();
            for e in entries {
                let left = (
                    index_of(algebra.poset(), &e.left.0)?,
                    index_of(algebra.poset(), &e.left.1)?,
                );
                let right = (
                    index_of(algebra.poset(), &e.right.0)?,
                    index_of(algebra.poset(), &e.right.1)?,
                );
                let value = element_from_json(algebra, &e.value)?;
                table.push(((left, right), value));
            }
            Ok(BilinearMap::from_table(algebra.clone(), table)?)
        }
        MapSpecJson::Inner(inner) => {
            let lambda = algebra.ring().parse(&inner.lambda)?;
            Ok(BilinearMap::inner(algebra.clone(), lambda))
        }
        MapSpecJson::InnerPerRegion(spec) => {
            let mut lambdas = BTreeMap::new();
            for entry in &spec.lambdas {
                let value = algebra.ring().parse(&entry.value)?;
                if lambdas.insert((entry.component, entry.region), value).is_some() {
                    return Err(IngestError::DuplicateLambda {
                        component: entry.component,
                        region: entry.region,
                    });
                }
            }
            Ok(BilinearMap::inner_per_region(algebra.clone(), &lambdas)?)
        }
        MapSpecJson::Extremal(spec) => {
            let gamma = element_from_json(algebra, &spec.gamma)?;
            Ok(BilinearMap::extremal(algebra.clone(), &gamma))
        }
        MapSpecJson::Sum(specs) => {
            let mut acc = BilinearMap::zero(algebra.clone());
            for spec in specs {
                acc = acc.sum(&map_from_spec(algebra, spec)?)?;
            }
            Ok(acc)
        }
    }
}

pub fn map_to_json(map: &BilinearMap) -> MapSpecJson {
    let algebra = map.algebra();
    let poset = algebra.poset();
    MapSpecJson::Entries(
        map.table_entries()
            .map(|((l, r), value)| MapEntryJson {
                left: (
                    poset.identifier(l.0).to_string(),
                    poset.identifier(l.1).to_string(),
                ),
                right: (
                    poset.identifier(r.0).to_string(),
                    poset.identifier(r.1).to_string(),
                ),
                value: element_to_json(algebra, value),
            })
            .collect(),
    )
}

/// `{"components": [{"lambdas": [{"region": 0, "value": "2"}], "T": {...}}]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub components: Vec<ComponentJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComponentJson {
    pub lambdas: Vec<RegionLambdaJson>,
    #[serde(rename = "T")]
    pub t: ElementJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegionLambdaJson {
    pub region: usize,
    pub value: String,
}

pub fn decomposition_to_json(
    algebra: &IncidenceAlgebra,
    dec: &Decomposition,
) -> DecompositionJson {
    DecompositionJson {
        components: dec
            .components
            .iter()
            .map(|comp| ComponentJson {
                lambdas: comp
                    .lambdas
                    .iter()
                    .enumerate()
                    .map(|(region, value)| RegionLambdaJson {
                        region,
                        value: algebra.ring().format(value),
                    })
                    .collect(),
                t: element_to_json(algebra, &comp.t),
            })
            .collect(),
    }
}

pub fn decomposition_from_json(
    algebra: &IncidenceAlgebra,
    json: &DecompositionJson,
) -> Result<Decomposition, IngestError> {
    let mut components = Vec::new();
    for comp in &json.components {
        let mut lambdas = vec![algebra.ring().zero(); comp.lambdas.len()];
        for entry in &comp.lambdas {
            if entry.region >= lambdas.len() {
                lambdas.resize(entry.region + 1, algebra.ring().zero());
            }
            lambdas[entry.region] = algebra.ring().parse(&entry.value)?;
        }
        components.push(ComponentDecomposition {
            lambdas,
            t: element_from_json(algebra, &comp.t)?,
        });
    }
    Ok(Decomposition {
        ring: algebra.ring().clone(),
        components,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportJson {
    pub passed: bool,
    pub violations: Vec<ViolationJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ViolationJson {
    pub identity: String,
    pub witness: String,
    pub expected: Option<ElementJson>,
    pub actual: Option<ElementJson>,
}

pub fn report_to_json(algebra: &IncidenceAlgebra, report: &CheckReport) -> ReportJson {
    ReportJson {
        passed: report.passed(),
        violations: report
            .violations()
            .iter()
            .map(|v| ViolationJson {
                identity: v.identity.clone(),
                witness: v.witness.clone(),
                expected: v.expected.as_ref().map(|e| element_to_json(algebra, e)),
                actual: v.actual.as_ref().map(|e| element_to_json(algebra, e)),
            })
            .collect(),
    }
}
