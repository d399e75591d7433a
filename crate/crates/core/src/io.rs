//! JSON state files and event lists.
//!
//! A state file holds `"dims"` and exactly one of `"matrix"` (rows of
//! `[re, im]` pairs) or `"vector"` (a list of `[re, im]` pairs).

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::correlations::{EventString, Projector};
use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix, CVector};
use crate::state::{AnyState, DensityOperator, StateVector};

pub type ComplexPair = [f64; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<ComplexPair>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vector: Option<Vec<ComplexPair>>,
}

pub fn matrix_to_pairs(m: &CMatrix) -> Vec<Vec<ComplexPair>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn vector_to_pairs(v: &CVector) -> Vec<ComplexPair> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

pub fn matrix_from_pairs(rows: &[Vec<ComplexPair>]) -> Result<CMatrix> {
    let n = rows.len();
    let cols = rows.first().map(Vec::len).unwrap_or(0);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidInput("matrix rows have different lengths".into()));
    }
    Ok(CMatrix::from_fn(n, cols, |i, j| c(rows[i][j][0], rows[i][j][1])))
}

pub fn vector_from_pairs(v: &[ComplexPair]) -> CVector {
    CVector::from_iterator(v.len(), v.iter().map(|p| c(p[0], p[1])))
}

impl StateFile {
    pub fn from_state(state: &AnyState) -> Self {
        match state {
            AnyState::Pure(v) => Self::from_vector(v),
            AnyState::Mixed(d) => Self::from_density(d),
        }
    }

    pub fn from_vector(v: &StateVector) -> Self {
        Self { dims: v.dims().to_vec(), matrix: None, vector: Some(vector_to_pairs(v.amplitudes())) }
    }

    pub fn from_density(d: &DensityOperator) -> Self {
        Self { dims: d.dims().to_vec(), matrix: Some(matrix_to_pairs(d.matrix())), vector: None }
    }

    /// Validates and converts; errors name the violated invariant.
    pub fn to_state(&self) -> Result<AnyState> {
        match (&self.matrix, &self.vector) {
            (Some(m), None) => Ok(AnyState::Mixed(DensityOperator::new(self.dims.clone(), matrix_from_pairs(m)?)?)),
            (None, Some(v)) => Ok(AnyState::Pure(StateVector::new(self.dims.clone(), vector_from_pairs(v))?)),
            _ => Err(Error::InvalidInput(
                "state file needs exactly one of \"matrix\" or \"vector\"".into(),
            )),
        }
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, serde_json::to_string_pretty(self)? + "\n")?;
        Ok(())
    }
}

pub fn read_state(path: impl AsRef<Path>) -> Result<AnyState> {
    StateFile::read(path)?.to_state()
}

pub fn write_state(state: &AnyState, path: impl AsRef<Path>) -> Result<()> {
    StateFile::from_state(state).write(path)
}

/// One entry of an event list: `"I"`, a matrix, or `{"matrix": ...}` /
/// `{"vector": ...}` (the latter meaning the ray through that vector).
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum EventEntry {
    Certain(String),
    Matrix(Vec<Vec<ComplexPair>>),
    Object {
        #[serde(default)]
        matrix: Option<Vec<Vec<ComplexPair>>>,
        #[serde(default)]
        vector: Option<Vec<ComplexPair>>,
    },
}

impl EventEntry {
    pub fn to_projector(&self) -> Result<Option<Projector>> {
        match self {
            EventEntry::Certain(s) if s == "I" => Ok(None),
            EventEntry::Certain(s) => Err(Error::InvalidInput(format!("unknown event `{s}` (use \"I\")"))),
            EventEntry::Matrix(m) => Ok(Some(Projector::from_matrix(matrix_from_pairs(m)?)?)),
            EventEntry::Object { matrix: Some(m), vector: None } => {
                Ok(Some(Projector::from_matrix(matrix_from_pairs(m)?)?))
            }
            EventEntry::Object { matrix: None, vector: Some(v) } => Ok(Some(Projector::ray(&vector_from_pairs(v))?)),
            EventEntry::Object { .. } => Err(Error::InvalidInput(
                "event object needs exactly one of \"matrix\" or \"vector\"".into(),
            )),
        }
    }
}

/// Parses an event-string JSON array.
pub fn parse_event_string(json: &str) -> Result<EventString> {
    let entries: Vec<EventEntry> = serde_json::from_str(json)?;
    Ok(EventString::new(entries.iter().map(EventEntry::to_projector).collect::<Result<_>>()?))
}

/// Parses a JSON array of projectors (no identity markers).
pub fn parse_projector_list(json: &str) -> Result<Vec<Projector>> {
    let entries: Vec<EventEntry> = serde_json::from_str(json)?;
    entries
        .iter()
        .map(|e| {
            e.to_projector()?
                .ok_or_else(|| Error::InvalidInput("\"I\" is not allowed in a projector list".into()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fixture_round_trip_is_bit_identical() {
        let dir = tempfile::tempdir().unwrap();
        for name in fixtures::FIXTURE_NAMES {
            let state = fixtures::fixture(name).unwrap();
            let path = dir.path().join(format!("{name}.json"));
            write_state(&state, &path).unwrap();
            let back = StateFile::read(&path).unwrap();
            assert_eq!(back, StateFile::from_state(&state), "{name}");
            match (state, back.to_state().unwrap()) {
                (AnyState::Pure(a), AnyState::Pure(b)) => assert_eq!(a, b),
                (AnyState::Mixed(a), AnyState::Mixed(b)) => assert_eq!(a.matrix(), b.matrix()),
                _ => panic!("kind changed for {name}"),
            }
        }
    }

    #[test]
    fn validation_messages_name_the_invariant() {
        let f: StateFile = serde_json::from_str(r#"{"dims":[2],"matrix":[[[1,0],[0,0]],[[0,0],[1,0]]]}"#).unwrap();
        let err = f.to_state().unwrap_err().to_string();
        assert!(err.contains("trace") && err.contains("2.0"), "{err}");
        let f: StateFile = serde_json::from_str(r#"{"dims":[2],"vector":[[1,0],[1,0]]}"#).unwrap();
        assert!(f.to_state().unwrap_err().to_string().contains("norm"));
        let f: StateFile = serde_json::from_str(r#"{"dims":[2]}"#).unwrap();
        assert!(f.to_state().is_err());
        assert!(serde_json::from_str::<StateFile>(r#"{"dims":[2],"vectr":[]}"#).is_err());
    }

    #[test]
    fn event_list_forms() {
        let s = parse_event_string(r#"["I", [[[1,0],[0,0]],[[0,0],[0,0]]], {"vector": [[1,0],[1,0]]}]"#).unwrap();
        assert_eq!(s.len(), 3);
        assert!(s.entries()[0].is_none());
        assert_eq!(s.entries()[1].as_ref().unwrap(), &fixtures::spin_up());
        let p = s.entries()[2].as_ref().unwrap();
        assert!((p.matrix() - fixtures::x_plus().matrix()).camax() < 1e-15);
        assert!(parse_event_string(r#"["X"]"#).is_err());
        assert!(parse_projector_list(r#"["I"]"#).is_err());
    }
}
