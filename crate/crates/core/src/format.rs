//! JSON file formats: algebra definitions and probe lists.
//!
//! Coefficients are always strings (`"2"`, `"-1"`, `"1/2"`); JSON numbers are
//! rejected so no value ever passes through floating point.
//!
//! An algebra file lists one orientation per bracket:
//!
//! ```json
//! {
//!   "name": "sl2",
//!   "basis": [{"name": "e", "parity": 0}, {"name": "f", "parity": 0}, {"name": "h", "parity": 0}],
//!   "brackets": [
//!     {"left": "h", "right": "e", "result": [["2", "e"]]},
//!     {"left": "h", "right": "f", "result": [["-2", "f"]]},
//!     {"left": "e", "right": "f", "result": [["1", "h"]]}
//!   ]
//! }
//! ```
//!
//! A probe file lists elements as coefficient maps over basis names:
//! `{"probes": [{"f": "1", "q": "1", "z": "-1/2"}]}`.

use std::fs;
use std::path::{Path, PathBuf};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;
use crate::superalg::{catalog, AlgebraError, BasisVector, Element, SuperAlgebra};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("cannot read {path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{path}: {message}")]
    Field { path: String, message: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

fn field(path: impl Into<String>, message: impl ToString) -> FormatError {
    FormatError::Field {
        path: path.into(),
        message: message.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketSpec {
    pub left: String,
    pub right: String,
    /// `(coefficient, basis name)` pairs.
    pub result: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub name: String,
    pub basis: Vec<BasisVector>,
    #[serde(default)]
    pub brackets: Vec<BracketSpec>,
}

impl AlgebraFile {
    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("algebra file serializes")
    }

    /// Serializes `alg` with one orientation (`i <= j`) per nonzero bracket.
    pub fn from_algebra(alg: &SuperAlgebra) -> Self {
        let brackets = alg
            .upper_brackets()
            .map(|(i, j, terms)| BracketSpec {
                left: alg.basis()[i].name.clone(),
                right: alg.basis()[j].name.clone(),
                result: terms
                    .iter()
                    .map(|(k, c)| (c.to_string(), alg.basis()[*k].name.clone()))
                    .collect(),
            })
            .collect();
        AlgebraFile {
            name: alg.name().to_string(),
            basis: alg.basis().to_vec(),
            brackets,
        }
    }

    pub fn to_algebra(&self) -> Result<SuperAlgebra, FormatError> {
        let lookup = |path: String, name: &str| {
            self.basis
                .iter()
                .position(|b| b.name == name)
                .ok_or_else(|| field(path, format!("unknown basis name `{name}`")))
        };
        let mut entries = Vec::with_capacity(self.brackets.len());
        for (bi, b) in self.brackets.iter().enumerate() {
            let i = lookup(format!("brackets[{bi}].left"), &b.left)?;
            let j = lookup(format!("brackets[{bi}].right"), &b.right)?;
            let mut terms = Vec::with_capacity(b.result.len());
            for (ti, (coeff, name)) in b.result.iter().enumerate() {
                let path = format!("brackets[{bi}].result[{ti}]");
                let c: Scalar = coeff.parse().map_err(|e| field(path.clone(), e))?;
                terms.push((lookup(path, name)?, c));
            }
            entries.push(((i, j), terms));
        }
        Ok(SuperAlgebra::new(&self.name, self.basis.clone(), entries)?)
    }
}

/// A coefficient map over basis names, e.g. `{"f": "1", "z": "-1/2"}`.
pub type ElementSpec = IndexMap<String, String>;

pub fn parse_element(
    alg: &SuperAlgebra,
    spec: &ElementSpec,
    path: &str,
) -> Result<Element, FormatError> {
    let mut x = Element::zero(alg.dim());
    for (name, coeff) in spec {
        let p = format!("{path}.{name}");
        let i = alg
            .index_of(name)
            .ok_or_else(|| field(p.clone(), format!("unknown basis name `{name}`")))?;
        let c: Scalar = coeff.parse().map_err(|e| field(p, e))?;
        x.coords[i] += &c;
    }
    Ok(x)
}

pub fn element_spec(alg: &SuperAlgebra, x: &Element) -> ElementSpec {
    x.coords
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (alg.basis()[i].name.clone(), c.to_string()))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeFile {
    pub probes: Vec<ElementSpec>,
}

impl ProbeFile {
    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("probe file serializes")
    }

    pub fn from_elements(alg: &SuperAlgebra, probes: &[Element]) -> Self {
        ProbeFile {
            probes: probes.iter().map(|x| element_spec(alg, x)).collect(),
        }
    }

    pub fn to_elements(&self, alg: &SuperAlgebra) -> Result<Vec<Element>, FormatError> {
        self.probes
            .iter()
            .enumerate()
            .map(|(i, p)| parse_element(alg, p, &format!("probes[{i}]")))
            .collect()
    }
}

/// `catalog:<name>` or a path to an algebra file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Input {
    Catalog(String),
    File(PathBuf),
}

impl Input {
    pub fn parse(s: &str) -> Self {
        match s.strip_prefix("catalog:") {
            Some(name) => Input::Catalog(name.to_string()),
            None => Input::File(PathBuf::from(s)),
        }
    }

    pub fn load(&self) -> Result<SuperAlgebra, FormatError> {
        match self {
            Input::Catalog(name) => Ok(catalog(name)?),
            Input::File(path) => AlgebraFile::from_json(&read(path)?)?.to_algebra(),
        }
    }
}

impl std::fmt::Display for Input {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Input::Catalog(n) => write!(f, "catalog:{n}"),
            Input::File(p) => write!(f, "{}", p.display()),
        }
    }
}

pub fn read(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|e| FormatError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}
