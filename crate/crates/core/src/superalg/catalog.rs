//! Built-in algebras: the N=1 super Schrödinger algebra and three of its
//! subalgebras.
//!
//! The super Schrödinger table uses `[E, F] = h`. With `[E, F] = -h` the
//! graded Jacobi identity fails on 36 ordered basis triples (for example
//! `(e, F, F)`), so that sign is fixed here.

use super::{AlgebraError, SuperAlgebra};
use crate::format::AlgebraFile;

pub const SUPER_SCHRODINGER: &str = "super-schrodinger";

pub const CATALOG_NAMES: [&str; 4] = [
    SUPER_SCHRODINGER,
    "osp12",
    "super-heisenberg",
    "even-schrodinger",
];

const SUPER_SCHRODINGER_JSON: &str = include_str!("../../data/super_schrodinger.json");

fn super_schrodinger() -> SuperAlgebra {
    AlgebraFile::from_json(SUPER_SCHRODINGER_JSON)
        .and_then(|f| f.to_algebra())
        .expect("embedded algebra file is well formed")
}

fn sub(name: &str, names: &[&str]) -> SuperAlgebra {
    let s = super_schrodinger();
    let idx: Vec<usize> = names
        .iter()
        .map(|n| s.index(n).expect("known name"))
        .collect();
    s.restrict(name, &idx)
        .expect("catalog subsets are subalgebras")
}

pub fn catalog(name: &str) -> Result<SuperAlgebra, AlgebraError> {
    match name {
        SUPER_SCHRODINGER => Ok(super_schrodinger()),
        "osp12" => Ok(sub(name, &["h", "e", "f", "E", "F"])),
        "super-heisenberg" => Ok(sub(name, &["p", "q", "z", "G"])),
        "even-schrodinger" => Ok(sub(name, &["e", "f", "h", "p", "q", "z"])),
        _ => Err(AlgebraError::UnknownCatalog(name.to_string())),
    }
}
