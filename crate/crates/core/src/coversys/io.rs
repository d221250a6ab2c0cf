use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::locale::FiniteLocale;
use super::poset::{mask_of, members, FinitePoset};
use super::system::CoverSystem;
use super::truth::PredicateModel;
use super::CoverError;

/// JSON form of a cover system. Points are referred to by index into
/// `elements`; `leq` lists order edges whose reflexive-transitive closure
/// is taken.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverSystemFile {
    pub elements: Vec<String>,
    #[serde(default)]
    pub leq: Vec<[usize; 2]>,
    pub covers: Vec<(usize, Vec<usize>)>,
    #[serde(rename = "R", default, skip_serializing_if = "Option::is_none")]
    pub r: Option<Vec<[usize; 2]>>,
}

/// JSON form of a finite lattice with an optional operator `m`, given as
/// the index of `m x` for each element `x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocaleFile {
    pub elements: Vec<String>,
    #[serde(default)]
    pub leq: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValuationEntry {
    pub args: Vec<usize>,
    pub holds: Vec<usize>,
}

/// A cover system file extended with a domain and, per predicate name,
/// the points where each argument tuple holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredicateModelFile {
    #[serde(flatten)]
    pub system: CoverSystemFile,
    pub domain: Vec<String>,
    #[serde(default)]
    pub valuation: BTreeMap<String, Vec<ValuationEntry>>,
}

fn json_error(e: serde_json::Error) -> CoverError {
    CoverError::Json(e.to_string())
}

fn edges(v: &[[usize; 2]]) -> Vec<(usize, usize)> {
    v.iter().map(|&[a, b]| (a, b)).collect()
}

fn point_set(points: &[usize], n: usize, what: &str) -> Result<u64, CoverError> {
    if let Some(&p) = points.iter().find(|&&p| p >= n) {
        return Err(CoverError::OutOfRange(format!("point {p} in {what}")));
    }
    Ok(mask_of(points.iter().copied()))
}

impl CoverSystemFile {
    pub fn to_system(&self) -> Result<CoverSystem, CoverError> {
        let p = FinitePoset::from_edges(self.elements.clone(), &edges(&self.leq))?;
        let n = p.len();
        let covers = self
            .covers
            .iter()
            .map(|(x, c)| Ok((*x, point_set(c, n, "a cover")?)))
            .collect::<Result<Vec<_>, CoverError>>()?;
        CoverSystem::new(p, covers, self.r.as_deref().map(edges))
    }

    /// Order given by its covering pairs, covers and relation listed in
    /// index order.
    pub fn from_system(s: &CoverSystem) -> CoverSystemFile {
        let p = s.poset();
        CoverSystemFile {
            elements: p.labels().to_vec(),
            leq: p.hasse().into_iter().map(|(a, b)| [a, b]).collect(),
            covers: (0..s.len())
                .flat_map(|x| {
                    s.covers_of(x)
                        .iter()
                        .map(move |&c| (x, members(c).collect()))
                })
                .collect(),
            r: s.relation().map(|r| {
                (0..s.len())
                    .flat_map(|x| members(r[x]).map(move |y| [x, y]))
                    .collect()
            }),
        }
    }
}

impl LocaleFile {
    pub fn to_locale(&self) -> Result<FiniteLocale, CoverError> {
        let p = FinitePoset::from_edges(self.elements.clone(), &edges(&self.leq))?;
        Ok(FiniteLocale::from_poset(p, self.m.clone())?)
    }

    pub fn from_locale(l: &FiniteLocale) -> LocaleFile {
        LocaleFile {
            elements: l.poset().labels().to_vec(),
            leq: l.poset().hasse().into_iter().map(|(a, b)| [a, b]).collect(),
            m: l.operator().map(<[usize]>::to_vec),
        }
    }
}

impl PredicateModelFile {
    pub fn to_model(&self) -> Result<PredicateModel, CoverError> {
        let system = self.system.to_system()?;
        let n = system.len();
        let mut valuation: BTreeMap<(String, usize), BTreeMap<Vec<usize>, u64>> = BTreeMap::new();
        for (name, entries) in &self.valuation {
            for e in entries {
                let set = point_set(&e.holds, n, &format!("the value of `{name}`"))?;
                valuation
                    .entry((name.clone(), e.args.len()))
                    .or_default()
                    .insert(e.args.clone(), set);
            }
        }
        PredicateModel::new(system, self.domain.clone(), valuation)
    }
}

/// A parsed structure file of any of the three kinds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Structure {
    System(CoverSystem),
    Locale(FiniteLocale),
    Model(PredicateModel),
}

/// Parses a structure file, telling the kinds apart by their keys: a
/// `domain` makes a predicate model, `covers` a cover system, anything
/// else a locale.
pub fn parse_structure(src: &str) -> Result<Structure, CoverError> {
    let v: serde_json::Value = serde_json::from_str(src).map_err(json_error)?;
    let has = |k: &str| v.get(k).is_some();
    if has("domain") {
        let f: PredicateModelFile = serde_json::from_value(v).map_err(json_error)?;
        Ok(Structure::Model(f.to_model()?))
    } else if has("covers") {
        let f: CoverSystemFile = serde_json::from_value(v).map_err(json_error)?;
        Ok(Structure::System(f.to_system()?))
    } else {
        let f: LocaleFile = serde_json::from_value(v).map_err(json_error)?;
        Ok(Structure::Locale(f.to_locale()?))
    }
}
