//! JSON file formats. Rationals are always strings such as `"3"`, `"-2"` or
//! `"1/2"`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use tiefree_core::gs::{ExtRational, ValuationTable};
use tiefree_core::pipelines::PricingResult;
use tiefree_core::rational::parse_rational;
use tiefree_core::verify::{Instance, VerificationReport};
use tiefree_core::{ElementSet, Matroid, MatroidDescriptor, RationalVector};

#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &str) -> Result<T, FileError> {
    let text = std::fs::read_to_string(path).map_err(|source| FileError::Io { path: path.into(), source })?;
    serde_json::from_str(&text).map_err(|source| FileError::Json { path: path.into(), source })
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn rational_strings(v: &RationalVector) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

pub fn parse_rationals(values: &[String]) -> Result<RationalVector, String> {
    values
        .iter()
        .map(|s| parse_rational(s).ok_or_else(|| format!("not a rational: {s:?}")))
        .collect()
}

/// Either a matroid descriptor or an explicit list of bases,
/// `{"type": "bases", "n": 4, "bases": [[0, 2], [1, 3]]}`. Explicit lists need
/// not come from a matroid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetSystem {
    Matroid(MatroidDescriptor),
    Bases { n: usize, bases: Vec<ElementSet> },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BasesJson {
    #[allow(dead_code)]
    r#type: String,
    n: usize,
    bases: Vec<Vec<usize>>,
}

impl Serialize for SetSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            SetSystem::Matroid(d) => d.serialize(s),
            SetSystem::Bases { n, bases } => {
                let bases: Vec<&[usize]> = bases.iter().map(ElementSet::as_slice).collect();
                serde_json::json!({"type": "bases", "n": n, "bases": bases}).serialize(s)
            }
        }
    }
}

impl<'de> Deserialize<'de> for SetSystem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let value = Value::deserialize(d)?;
        if value.get("type").and_then(Value::as_str) == Some("bases") {
            let b: BasesJson = serde_json::from_value(value).map_err(D::Error::custom)?;
            let bases = b.bases.into_iter().map(ElementSet::from_iter_unsorted).collect();
            Ok(SetSystem::Bases { n: b.n, bases })
        } else {
            serde_json::from_value(value).map(SetSystem::Matroid).map_err(D::Error::custom)
        }
    }
}

impl SetSystem {
    /// Basis lists are accepted only when they satisfy the basis axioms.
    pub fn matroid(&self) -> Result<Matroid, String> {
        match self {
            SetSystem::Matroid(d) => d.build().map_err(|e| e.to_string()),
            SetSystem::Bases { n, bases } => Matroid::from_bases(*n, bases).map_err(|e| e.to_string()),
        }
    }

    pub fn bases(&self) -> Option<&[ElementSet]> {
        match self {
            SetSystem::Bases { bases, .. } => Some(bases),
            SetSystem::Matroid(_) => None,
        }
    }
}

/// `{"n": 3, "values": [["000", "0"], ["101", "4"]]}`. Character `i` of a
/// mask is element `i`; short masks are padded with zeros; masks not listed
/// are outside the domain.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ValuationJson {
    pub n: usize,
    pub values: Vec<(String, String)>,
}

fn mask_string(mask: u32, n: usize) -> String {
    (0..n).map(|i| if mask >> i & 1 == 1 { '1' } else { '0' }).collect()
}

fn parse_mask(s: &str, n: usize) -> Result<u32, String> {
    if s.len() > n {
        return Err(format!("mask {s:?} longer than n = {n}"));
    }
    s.chars().enumerate().try_fold(0u32, |acc, (i, c)| match c {
        '0' => Ok(acc),
        '1' => Ok(acc | 1 << i),
        _ => Err(format!("mask {s:?} is not a 0/1 string")),
    })
}

impl ValuationJson {
    pub fn from_table(v: &ValuationTable) -> Self {
        let values = v
            .values()
            .iter()
            .enumerate()
            .filter(|(_, x)| x.is_finite())
            .map(|(m, x)| (mask_string(m as u32, v.n()), x.to_string()))
            .collect();
        ValuationJson { n: v.n(), values }
    }

    pub fn to_table(&self) -> Result<ValuationTable, String> {
        if self.n > tiefree_core::gs::MAX_GS_ELEMENTS {
            return Err(format!("valuation on {} elements exceeds {}", self.n, tiefree_core::gs::MAX_GS_ELEMENTS));
        }
        let mut values = vec![ExtRational::NegInf; 1 << self.n];
        for (mask, value) in &self.values {
            let m = parse_mask(mask, self.n)?;
            values[m as usize] = if value == "-inf" {
                ExtRational::NegInf
            } else {
                ExtRational::Finite(parse_rational(value).ok_or_else(|| format!("not a rational: {value:?}"))?)
            };
        }
        ValuationTable::new(self.n, values).map_err(|e| e.to_string())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub ground_set: usize,
    pub matroid1: SetSystem,
    pub matroid2: SetSystem,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights1: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights2: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub valuations: Option<[ValuationJson; 2]>,
}

/// A checked instance.
pub struct Loaded {
    pub n: usize,
    pub systems: [SetSystem; 2],
    pub weights: Option<[RationalVector; 2]>,
    pub valuations: Option<[ValuationTable; 2]>,
}

impl InstanceFile {
    pub fn from_instance(inst: &Instance) -> Self {
        InstanceFile {
            ground_set: inst.n,
            matroid1: SetSystem::Matroid(inst.matroid1.clone()),
            matroid2: SetSystem::Matroid(inst.matroid2.clone()),
            weights1: inst.weights1.as_ref().map(rational_strings),
            weights2: inst.weights2.as_ref().map(rational_strings),
            valuations: inst
                .valuations
                .as_ref()
                .map(|[a, b]| [ValuationJson::from_table(a), ValuationJson::from_table(b)]),
        }
    }

    pub fn load(path: &str) -> Result<Loaded, FileError> {
        let file: InstanceFile = read_json(path)?;
        file.check().map_err(|message| FileError::Invalid { path: path.into(), message })
    }

    pub fn check(self) -> Result<Loaded, String> {
        let n = self.ground_set;
        for (name, system) in [("matroid1", &self.matroid1), ("matroid2", &self.matroid2)] {
            let size = match system {
                SetSystem::Matroid(d) => d.build().map_err(|e| format!("{name}: {e}"))?.n(),
                SetSystem::Bases { n, bases } => {
                    if let Some(b) = bases.iter().find(|b| b.max_element().is_some_and(|m| m >= *n)) {
                        return Err(format!("{name}: basis {b} outside ground set of size {n}"));
                    }
                    *n
                }
            };
            if size != n {
                return Err(format!("{name} has {size} elements but ground_set is {n}"));
            }
        }
        let weights = match (&self.weights1, &self.weights2) {
            (None, None) => None,
            (Some(a), Some(b)) => {
                let (a, b) = (parse_rationals(a)?, parse_rationals(b)?);
                if a.len() != n || b.len() != n {
                    return Err(format!("weights have lengths {} and {}, expected {n}", a.len(), b.len()));
                }
                Some([a, b])
            }
            _ => return Err("weights1 and weights2 must be given together".into()),
        };
        let valuations = match &self.valuations {
            None => None,
            Some([a, b]) => {
                let (a, b) = (a.to_table()?, b.to_table()?);
                if a.n() != n || b.n() != n {
                    return Err(format!("valuations have {} and {} elements, expected {n}", a.n(), b.n()));
                }
                Some([a, b])
            }
        };
        Ok(Loaded {
            n,
            systems: [self.matroid1, self.matroid2],
            weights,
            valuations,
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Bases {
    #[serde(rename = "B1")]
    pub b1: Vec<usize>,
    #[serde(rename = "B2")]
    pub b2: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CertificateJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q1: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q2: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<String>>,
    pub p_hat: Vec<String>,
    pub epsilon: String,
    pub delta: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PricesFile {
    pub prices: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bases: Option<Bases>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<ReportJson>,
}

impl PricesFile {
    pub fn from_result(r: &PricingResult) -> Self {
        PricesFile {
            prices: rational_strings(&r.prices),
            mode: Some(r.mode.as_str().into()),
            bases: Some(Bases {
                b1: r.b1.as_slice().to_vec(),
                b2: r.b2.as_slice().to_vec(),
            }),
            iterations: Some(r.iterations),
            certificate: r.weighted.as_ref().map(|c| CertificateJson {
                q1: Some(rational_strings(&c.q1)),
                q2: Some(rational_strings(&c.q2)),
                q: None,
                p_hat: rational_strings(&c.p_hat),
                epsilon: c.epsilon.to_string(),
                delta: c.delta.to_string(),
            }),
            report: None,
        }
    }

    pub fn price_vector(&self) -> Result<RationalVector, String> {
        parse_rationals(&self.prices)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ViolationJson {
    pub condition: u8,
    pub chosen: Vec<usize>,
    pub response: Option<Vec<usize>>,
    pub message: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ReportJson {
    pub conjecture: String,
    pub pass: bool,
    pub violations: Vec<ViolationJson>,
    pub argmin_singleton: Option<bool>,
    pub argmax_singleton: Option<bool>,
    pub sizes: BTreeMap<String, usize>,
}

impl ReportJson {
    pub fn from_report(r: &VerificationReport) -> Self {
        ReportJson {
            conjecture: r.conjecture.as_str().into(),
            pass: r.pass,
            violations: r
                .violations
                .iter()
                .map(|v| ViolationJson {
                    condition: v.condition,
                    chosen: v.chosen.as_slice().to_vec(),
                    response: v.response.as_ref().map(|s| s.as_slice().to_vec()),
                    message: v.message.clone(),
                })
                .collect(),
            argmin_singleton: r.argmin_singleton,
            argmax_singleton: r.argmax_singleton,
            sizes: r.sizes.iter().map(|(k, v)| ((*k).into(), *v)).collect(),
        }
    }
}

/// `{"U": 3, "V": 3, "edges": [[u, v], ...]}`; an edge's index is its
/// position in the list.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    #[serde(rename = "U")]
    pub u: usize,
    #[serde(rename = "V")]
    pub v: usize,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MatchWeightsFile {
    pub weights: Vec<String>,
    /// Edge chosen at each vertex of `U`.
    pub lightest: Vec<usize>,
    /// Edge chosen at each vertex of `V`.
    pub heaviest: Vec<usize>,
    pub lightest_is_perfect: bool,
    pub heaviest_is_perfect: bool,
}
