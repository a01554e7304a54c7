//! Bundled example surfaces and algebras.
//!
//! Entries are JSON files. The bundled copies are compiled in; setting
//! `GENTLE_TILT_CORPUS` to a directory makes [`load`] read `<dir>/<id>.json`
//! instead.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::io::{AlgebraJson, IoError, SurfaceJson};
use crate::quiver::{GentleAlgebra, StringError, StringWord};
use crate::surface::DissectedSurface;

pub const CORPUS_ENV: &str = "GENTLE_TILT_CORPUS";

const BUNDLED: &[(&str, &str)] = &[
    ("rank1-disk", include_str!("../../../corpus/rank1-disk.json")),
    ("rank2-disk", include_str!("../../../corpus/rank2-disk.json")),
    ("fig1", include_str!("../../../corpus/fig1.json")),
    ("fig2", include_str!("../../../corpus/fig2.json")),
    ("fig9", include_str!("../../../corpus/fig9.json")),
    ("fig10-n4", include_str!("../../../corpus/fig10-n4.json")),
    ("fig11", include_str!("../../../corpus/fig11.json")),
    ("fig12-n3", include_str!("../../../corpus/fig12-n3.json")),
    ("fig13-n4", include_str!("../../../corpus/fig13-n4.json")),
    ("appendix", include_str!("../../../corpus/appendix.json")),
];

/// Where an entry's algebra comes from when it has no surface of its own.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedFrom {
    pub entry: String,
    /// Named arcs of the source entry to cut along, in order.
    pub cut: Vec<String>,
    pub source_algebra: AlgebraJson,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub complements: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub completes: BTreeMap<String, bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_len: Option<usize>,
}

impl Expected {
    fn is_empty(&self) -> bool {
        self.complements.is_empty() && self.completes.is_empty() && self.max_len.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub id: String,
    pub description: String,
    /// The expected algebra (of the surface, or of the cut for derived entries).
    pub algebra: AlgebraJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface: Option<SurfaceJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derived_from: Option<DerivedFrom>,
    /// Named arcs given by their strings.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub arcs: BTreeMap<String, String>,
    /// Named modules given as lists of strings.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub modules: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Expected::is_empty")]
    pub expected: Expected,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("unknown corpus entry `{0}`")]
    Unknown(String),
    #[error("corpus entry `{id}`: {source}")]
    Invalid { id: String, source: IoError },
    #[error("corpus entry `{0}` has no surface")]
    NoSurface(String),
    #[error("corpus entry `{id}` has no {what} named `{name}`")]
    MissingName { id: String, what: &'static str, name: String },
    #[error(transparent)]
    String(#[from] StringError),
}

pub fn ids() -> Vec<&'static str> {
    BUNDLED.iter().map(|(id, _)| *id).collect()
}

fn override_dir() -> Option<PathBuf> {
    std::env::var_os(CORPUS_ENV).map(PathBuf::from)
}

/// Raw JSON text of an entry, honouring the directory override.
pub fn entry_text(id: &str) -> Result<String, CorpusError> {
    if let Some(dir) = override_dir() {
        let path = dir.join(format!("{id}.json"));
        if path.exists() {
            return std::fs::read_to_string(&path)
                .map_err(|e| CorpusError::Invalid { id: id.to_string(), source: e.into() });
        }
    }
    BUNDLED
        .iter()
        .find(|(k, _)| *k == id)
        .map(|(_, t)| t.to_string())
        .ok_or_else(|| CorpusError::Unknown(id.to_string()))
}

pub fn load(id: &str) -> Result<CorpusEntry, CorpusError> {
    let text = entry_text(id)?;
    serde_json::from_str(&text).map_err(|e| CorpusError::Invalid { id: id.to_string(), source: e.into() })
}

impl CorpusEntry {
    pub fn expected_algebra(&self) -> Result<GentleAlgebra, CorpusError> {
        self.algebra.to_algebra().map_err(|e| CorpusError::Invalid { id: self.id.clone(), source: e.into() })
    }

    pub fn surface(&self) -> Result<DissectedSurface, CorpusError> {
        let s = self.surface.as_ref().ok_or_else(|| CorpusError::NoSurface(self.id.clone()))?;
        s.to_surface().map_err(|e| CorpusError::Invalid { id: self.id.clone(), source: e.into() })
    }

    pub fn arc_string(&self, alg: &GentleAlgebra, name: &str) -> Result<StringWord, CorpusError> {
        let text = self.arcs.get(name).ok_or_else(|| CorpusError::MissingName {
            id: self.id.clone(),
            what: "arc",
            name: name.to_string(),
        })?;
        Ok(alg.parse_string(text)?)
    }

    pub fn module(&self, alg: &GentleAlgebra, name: &str) -> Result<Vec<StringWord>, CorpusError> {
        let list = self.modules.get(name).ok_or_else(|| CorpusError::MissingName {
            id: self.id.clone(),
            what: "module",
            name: name.to_string(),
        })?;
        list.iter().map(|s| alg.parse_string(s).map_err(CorpusError::from)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::quiver_isomorphic;

    #[test]
    fn every_entry_loads_and_matches_its_algebra() {
        for id in ids() {
            let e = load(id).unwrap();
            let expected = e.expected_algebra().unwrap();
            if e.surface.is_some() {
                let s = e.surface().unwrap();
                assert!(quiver_isomorphic(s.algebra(), &expected).is_some(), "{id}");
                for name in e.arcs.keys() {
                    e.arc_string(s.algebra(), name).unwrap();
                }
                for name in e.modules.keys() {
                    e.module(s.algebra(), name).unwrap();
                }
            }
        }
    }

    #[test]
    fn entries_round_trip() {
        for id in ids() {
            let text = entry_text(id).unwrap();
            let e: CorpusEntry = serde_json::from_str(&text).unwrap();
            let back = serde_json::to_value(&e).unwrap();
            let orig: serde_json::Value = serde_json::from_str(&text).unwrap();
            assert_eq!(back, orig, "{id}");
        }
    }
}
