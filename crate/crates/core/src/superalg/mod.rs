//! Finite-dimensional Lie superalgebras given by structure constants.

mod catalog;
mod element;

pub use catalog::{catalog, CATALOG_NAMES, SUPER_SCHRODINGER};
pub use element::Element;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::exactla::{Matrix, Subspace};
use crate::exec::Exec;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("basis name `{0}` is used twice")]
    DuplicateName(String),
    #[error("basis name must be nonempty")]
    EmptyName,
    #[error("unknown basis name `{0}`")]
    UnknownName(String),
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("bracket [{0}, {1}] is given more than once")]
    DuplicateBracket(String, String),
    #[error("element has {found} coordinates, algebra has dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unknown catalog algebra `{0}` (known: {known})", known = CATALOG_NAMES.join(", "))]
    UnknownCatalog(String),
    #[error("basis subset is not closed under the bracket")]
    NotSubalgebra,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn from_bit(b: u8) -> Option<Self> {
        match b {
            0 => Some(Parity::Even),
            1 => Some(Parity::Odd),
            _ => None,
        }
    }

    pub fn plus(self, other: Parity) -> Parity {
        Parity::from_bit((self.bit() + other.bit()) % 2).unwrap()
    }
}

impl Serialize for Parity {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u8(self.bit())
    }
}

impl<'de> Deserialize<'de> for Parity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let b = u8::deserialize(d)?;
        Parity::from_bit(b).ok_or_else(|| serde::de::Error::custom("parity must be 0 or 1"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisVector {
    pub name: String,
    pub parity: Parity,
}

impl BasisVector {
    pub fn new(name: &str, parity: Parity) -> Self {
        BasisVector {
            name: name.to_string(),
            parity,
        }
    }
}

/// One input bracket `[x_left, x_right] = sum of coeff * x_k`.
pub type BracketEntry = ((usize, usize), Vec<(usize, Scalar)>);

/// A structure-constant failure found by [`SuperAlgebra::validate`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    /// `c_{ij}^k != 0` but `|k| != |i| + |j|`.
    Grading {
        left: usize,
        right: usize,
        target: usize,
    },
    /// `[x_i, x_j] + (-1)^{|i||j|} [x_j, x_i] != 0`.
    Skew {
        left: usize,
        right: usize,
        residual: Element,
    },
    /// `[x,[y,z]] - [[x,y],z] - (-1)^{|z||x+y|} [[z,x],y] != 0`.
    Jacobi {
        x: usize,
        y: usize,
        z: usize,
        residual: Element,
    },
}

impl Violation {
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::Grading { .. } => "grading",
            Violation::Skew { .. } => "skew",
            Violation::Jacobi { .. } => "jacobi",
        }
    }
}

/// Structure constants stored for all ordered pairs after completion.
#[derive(Clone, PartialEq, Eq)]
pub struct SuperAlgebra {
    name: String,
    basis: Vec<BasisVector>,
    // index i * n + j, terms sorted by target index, no zeros
    table: Vec<Vec<(usize, Scalar)>>,
}

impl SuperAlgebra {
    /// Builds an algebra from one orientation per bracket. Missing opposite
    /// orientations are filled in by graded skew-symmetry; when both are
    /// given they are kept as-is and any inconsistency shows up in
    /// [`SuperAlgebra::validate`].
    pub fn new(
        name: &str,
        basis: Vec<BasisVector>,
        brackets: Vec<BracketEntry>,
    ) -> Result<Self, AlgebraError> {
        let n = basis.len();
        let mut seen = BTreeMap::new();
        for b in &basis {
            if b.name.is_empty() {
                return Err(AlgebraError::EmptyName);
            }
            if seen.insert(b.name.as_str(), ()).is_some() {
                return Err(AlgebraError::DuplicateName(b.name.clone()));
            }
        }
        let check = |index: usize| {
            if index < n {
                Ok(())
            } else {
                Err(AlgebraError::IndexOutOfRange { index, dim: n })
            }
        };

        let mut given: Vec<Option<Vec<(usize, Scalar)>>> = vec![None; n * n];
        for ((i, j), terms) in brackets {
            check(i)?;
            check(j)?;
            let mut merged: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (k, c) in terms {
                check(k)?;
                *merged.entry(k).or_insert_with(Scalar::zero) += &c;
            }
            let terms: Vec<_> = merged.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            if given[i * n + j].is_some() {
                return Err(AlgebraError::DuplicateBracket(
                    basis[i].name.clone(),
                    basis[j].name.clone(),
                ));
            }
            given[i * n + j] = Some(terms);
        }

        let mut table = vec![Vec::new(); n * n];
        for i in 0..n {
            for j in 0..n {
                if let Some(t) = &given[i * n + j] {
                    table[i * n + j] = t.clone();
                } else if let Some(t) = &given[j * n + i] {
                    // [x_i, x_j] = -(-1)^{|i||j|} [x_j, x_i]
                    let s = -Scalar::sign(basis[i].parity.bit() * basis[j].parity.bit());
                    table[i * n + j] = t.iter().map(|(k, c)| (*k, &s * c)).collect();
                }
            }
        }
        Ok(SuperAlgebra {
            name: name.to_string(),
            basis,
            table,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisVector] {
        &self.basis
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.basis[i].parity
    }

    pub fn parities(&self) -> Vec<Parity> {
        self.basis.iter().map(|b| b.parity).collect()
    }

    pub fn even_dim(&self) -> usize {
        self.basis
            .iter()
            .filter(|b| b.parity == Parity::Even)
            .count()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.name == name)
    }

    pub fn index(&self, name: &str) -> Result<usize, AlgebraError> {
        self.index_of(name)
            .ok_or_else(|| AlgebraError::UnknownName(name.to_string()))
    }

    /// Same basis and structure constants; the label is ignored.
    pub fn same_structure(&self, other: &SuperAlgebra) -> bool {
        self.basis == other.basis && self.table == other.table
    }

    /// Nonzero terms of `[x_i, x_j]`.
    pub fn structure(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.table[i * self.dim() + j]
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> Scalar {
        self.structure(i, j)
            .iter()
            .find(|(t, _)| *t == k)
            .map_or_else(Scalar::zero, |(_, c)| c.clone())
    }

    /// Brackets with `i <= j` and a nonzero result, in index order.
    pub fn upper_brackets(&self) -> impl Iterator<Item = (usize, usize, &[(usize, Scalar)])> + '_ {
        let n = self.dim();
        (0..n)
            .flat_map(move |i| (i..n).map(move |j| (i, j)))
            .filter(move |&(i, j)| !self.structure(i, j).is_empty())
            .map(move |(i, j)| (i, j, self.structure(i, j)))
    }

    pub fn basis_element(&self, i: usize) -> Element {
        Element::basis(self.dim(), i)
    }

    /// Element from `(name, coefficient)` pairs.
    pub fn element(&self, terms: &[(&str, Scalar)]) -> Result<Element, AlgebraError> {
        let mut x = Element::zero(self.dim());
        for (name, c) in terms {
            let i = self.index(name)?;
            x.coords[i] += c;
        }
        Ok(x)
    }

    pub fn conform(&self, x: &Element) -> Result<(), AlgebraError> {
        if x.dim() == self.dim() {
            Ok(())
        } else {
            Err(AlgebraError::DimensionMismatch {
                expected: self.dim(),
                found: x.dim(),
            })
        }
    }

    /// Parity of `x` if it is homogeneous and nonzero.
    pub fn homogeneous_parity(&self, x: &Element) -> Option<Parity> {
        let mut p = None;
        for (i, c) in x.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match p {
                None => p = Some(self.parity(i)),
                Some(q) if q != self.parity(i) => return None,
                _ => {}
            }
        }
        p
    }

    /// Bilinear extension of the structure constants.
    pub fn bracket(&self, x: &Element, y: &Element) -> Result<Element, AlgebraError> {
        self.conform(x)?;
        self.conform(y)?;
        Ok(self.bracket_unchecked(x, y))
    }

    pub(crate) fn bracket_unchecked(&self, x: &Element, y: &Element) -> Element {
        let n = self.dim();
        let mut out = Element::zero(n);
        for (i, xi) in x.coords.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.coords.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let w = xi * yj;
                for (k, c) in self.structure(i, j) {
                    out.coords[*k] += &(&w * c);
                }
            }
        }
        out
    }

    /// Matrix of `ad_x = [x, -]`; column `j` holds `[x, x_j]`.
    pub fn ad(&self, x: &Element) -> Result<Matrix, AlgebraError> {
        self.conform(x)?;
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for j in 0..n {
            let col = self.bracket_unchecked(x, &self.basis_element(j));
            for (k, c) in col.coords.into_iter().enumerate() {
                m[(k, j)] = c;
            }
        }
        Ok(m)
    }

    pub fn validate(&self) -> Vec<Violation> {
        self.validate_with(Exec::default())
    }

    /// Checks grading, graded skew-symmetry on every ordered pair, and the
    /// graded Jacobi identity on every ordered basis triple. The result is
    /// sorted, so it does not depend on `exec`.
    pub fn validate_with(&self, exec: Exec) -> Vec<Violation> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let want = self.parity(i).plus(self.parity(j));
                for (k, _) in self.structure(i, j) {
                    if self.parity(*k) != want {
                        out.push(Violation::Grading {
                            left: i,
                            right: j,
                            target: *k,
                        });
                    }
                }
                let s = Scalar::sign(self.parity(i).bit() * self.parity(j).bit());
                let mut residual = Element::zero(n);
                for (k, c) in self.structure(i, j) {
                    residual.coords[*k] += c;
                }
                for (k, c) in self.structure(j, i) {
                    residual.coords[*k] += &(&s * c);
                }
                if !residual.is_zero() {
                    out.push(Violation::Skew {
                        left: i,
                        right: j,
                        residual,
                    });
                }
            }
        }
        let jacobi = exec.map_range(n, |x| {
            let mut found = Vec::new();
            for y in 0..n {
                for z in 0..n {
                    let residual = self.jacobi_residual(x, y, z);
                    if !residual.is_zero() {
                        found.push(Violation::Jacobi { x, y, z, residual });
                    }
                }
            }
            found
        });
        out.extend(jacobi.into_iter().flatten());
        out.sort();
        out
    }

    /// `[x,[y,z]] - [[x,y],z] - (-1)^{|z||x+y|} [[z,x],y]` on basis vectors.
    pub fn jacobi_residual(&self, x: usize, y: usize, z: usize) -> Element {
        let (ex, ey, ez) = (
            self.basis_element(x),
            self.basis_element(y),
            self.basis_element(z),
        );
        let lhs = self.bracket_unchecked(&ex, &self.bracket_unchecked(&ey, &ez));
        let first = self.bracket_unchecked(&self.bracket_unchecked(&ex, &ey), &ez);
        let second = self.bracket_unchecked(&self.bracket_unchecked(&ez, &ex), &ey);
        let p = self.parity(z).bit() * self.parity(x).plus(self.parity(y)).bit();
        lhs.sub(&first).sub(&second.scale(&Scalar::sign(p)))
    }

    fn check_indices(&self, subset: &[usize]) -> Result<(), AlgebraError> {
        for &i in subset {
            if i >= self.dim() {
                return Err(AlgebraError::IndexOutOfRange {
                    index: i,
                    dim: self.dim(),
                });
            }
        }
        Ok(())
    }

    fn span_of(&self, subset: &[usize]) -> Subspace {
        Subspace::span(
            self.dim(),
            subset.iter().map(|&i| self.basis_element(i).coords),
        )
        .expect("basis vectors conform")
    }

    /// `[a, s]` lies in the span of `subset` for every basis `a` in `left`
    /// and every `s` in `subset`.
    fn brackets_land_in(&self, left: &[usize], subset: &[usize]) -> bool {
        let span = self.span_of(subset);
        left.iter().all(|&a| {
            subset.iter().all(|&s| {
                let v = self.bracket_unchecked(&self.basis_element(a), &self.basis_element(s));
                span.contains(&v.coords).expect("conforming vector")
            })
        })
    }

    pub fn is_ideal(&self, subset: &[usize]) -> Result<bool, AlgebraError> {
        self.check_indices(subset)?;
        let all: Vec<usize> = (0..self.dim()).collect();
        Ok(self.brackets_land_in(&all, subset))
    }

    pub fn is_subalgebra(&self, subset: &[usize]) -> Result<bool, AlgebraError> {
        self.check_indices(subset)?;
        Ok(self.brackets_land_in(subset, subset))
    }

    /// `{x : [x, y] = 0 for all y}`.
    pub fn center(&self) -> Subspace {
        let n = self.dim();
        // row (j, m): sum_i x_i c_{ij}^m = 0
        let mut m = Matrix::zeros(n * n, n);
        for i in 0..n {
            for j in 0..n {
                for (k, c) in self.structure(i, j) {
                    m[(j * n + k, i)] = c.clone();
                }
            }
        }
        m.nullspace()
    }

    /// The subalgebra spanned by the basis vectors in `subset`, in that order.
    pub fn restrict(&self, name: &str, subset: &[usize]) -> Result<SuperAlgebra, AlgebraError> {
        if !self.is_subalgebra(subset)? {
            return Err(AlgebraError::NotSubalgebra);
        }
        let pos: BTreeMap<usize, usize> = subset.iter().enumerate().map(|(a, &b)| (b, a)).collect();
        let basis = subset.iter().map(|&i| self.basis[i].clone()).collect();
        let mut brackets = Vec::new();
        for (a, &i) in subset.iter().enumerate() {
            for (b, &j) in subset.iter().enumerate() {
                let terms = self.structure(i, j);
                if terms.is_empty() {
                    continue;
                }
                let mapped = terms.iter().map(|(k, c)| (pos[k], c.clone())).collect();
                brackets.push(((a, b), mapped));
            }
        }
        SuperAlgebra::new(name, basis, brackets)
    }

    /// Human-readable element, e.g. `f + q - 1/2*z`.
    pub fn format_element(&self, x: &Element) -> String {
        let mut out = String::new();
        for (i, c) in x.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let name = &self.basis[i].name;
            let neg = c.is_negative();
            let mag = if neg { -c } else { c.clone() };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mag.is_one() {
                out.push_str(name);
            } else {
                out.push_str(&format!("{mag}*{name}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Debug for SuperAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SuperAlgebra {} (dim {})", self.name, self.dim())?;
        for (i, j, terms) in self.upper_brackets() {
            let mut v = Element::zero(self.dim());
            for (k, c) in terms {
                v.coords[*k] = c.clone();
            }
            writeln!(
                f,
                "  [{}, {}] = {}",
                self.basis[i].name,
                self.basis[j].name,
                self.format_element(&v)
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: i64) -> Scalar {
        Scalar::from_int(x)
    }

    fn schrodinger() -> SuperAlgebra {
        catalog(SUPER_SCHRODINGER).unwrap()
    }

    fn named(alg: &SuperAlgebra, name: &str) -> Element {
        alg.basis_element(alg.index(name).unwrap())
    }

    #[test]
    fn bracket_table_lookups() {
        let a = schrodinger();
        let (h, e, big_e) = (named(&a, "h"), named(&a, "e"), named(&a, "E"));
        assert_eq!(a.bracket(&h, &e).unwrap(), e.scale(&s(2)));
        assert_eq!(a.bracket(&big_e, &big_e).unwrap(), e.scale(&s(2)));
        assert!(a.bracket(&e, &e).unwrap().is_zero());
        // completed orientation: [e, h] = -2e
        assert_eq!(a.bracket(&e, &h).unwrap(), e.scale(&s(-2)));
    }

    #[test]
    fn z_is_central_in_every_slot() {
        let a = schrodinger();
        let z = a.index("z").unwrap();
        for v in 0..a.dim() {
            assert!(a.structure(z, v).is_empty());
            assert!(a.structure(v, z).is_empty());
        }
    }

    #[test]
    fn odd_pairs_are_symmetric() {
        let a = schrodinger();
        let (e, f) = (a.index("E").unwrap(), a.index("F").unwrap());
        assert_eq!(a.structure(e, f), a.structure(f, e));
    }

    #[test]
    fn abelian_algebra_is_valid() {
        let a = SuperAlgebra::new(
            "abelian",
            vec![
                BasisVector::new("a", Parity::Even),
                BasisVector::new("b", Parity::Even),
            ],
            vec![],
        )
        .unwrap();
        assert!(a.validate().is_empty());
        assert_eq!(a.center(), Subspace::full(2));
    }

    #[test]
    fn changed_bracket_is_caught() {
        let a = schrodinger();
        let (h, e) = (a.index("h").unwrap(), a.index("e").unwrap());
        let mut brackets: Vec<BracketEntry> = a
            .upper_brackets()
            .map(|(i, j, t)| ((i, j), t.to_vec()))
            .collect();
        for ((i, j), terms) in brackets.iter_mut() {
            if (*i, *j) == (e, h) {
                *terms = vec![(e, s(-3))];
            }
        }
        let bad = SuperAlgebra::new("bad", a.basis().to_vec(), brackets).unwrap();
        let v = bad.validate();
        assert_eq!(v.len(), 27);
        // first sorted violation is the triple (e, f, h) with residual -h
        assert_eq!(
            v[0],
            Violation::Jacobi {
                x: 0,
                y: 1,
                z: 2,
                residual: named(&a, "h").scale(&s(-1)),
            }
        );
    }

    #[test]
    fn inconsistent_orientation_is_a_skew_violation() {
        let basis = vec![
            BasisVector::new("h", Parity::Even),
            BasisVector::new("e", Parity::Even),
        ];
        let a = SuperAlgebra::new(
            "bad",
            basis,
            vec![((0, 1), vec![(1, s(2))]), ((1, 0), vec![(1, s(2))])],
        )
        .unwrap();
        assert!(a.validate().iter().any(|v| v.kind() == "skew"));
    }

    #[test]
    fn grading_violation_detected() {
        let basis = vec![
            BasisVector::new("a", Parity::Even),
            BasisVector::new("b", Parity::Odd),
        ];
        let a = SuperAlgebra::new("bad", basis, vec![((0, 0), vec![(1, s(1))])]).unwrap();
        assert!(a.validate().contains(&Violation::Grading {
            left: 0,
            right: 0,
            target: 1
        }));
    }

    #[test]
    fn construction_errors() {
        let basis = vec![
            BasisVector::new("a", Parity::Even),
            BasisVector::new("a", Parity::Even),
        ];
        assert_eq!(
            SuperAlgebra::new("x", basis, vec![]),
            Err(AlgebraError::DuplicateName("a".into()))
        );
        let basis = vec![BasisVector::new("a", Parity::Even)];
        assert!(matches!(
            SuperAlgebra::new("x", basis.clone(), vec![((0, 3), vec![])]),
            Err(AlgebraError::IndexOutOfRange { index: 3, .. })
        ));
        assert!(matches!(
            SuperAlgebra::new("x", basis, vec![((0, 0), vec![]), ((0, 0), vec![])]),
            Err(AlgebraError::DuplicateBracket(..))
        ));
    }

    #[test]
    fn completion_is_involutive() {
        let a = schrodinger();
        let n = a.dim();
        let all: Vec<BracketEntry> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| ((i, j), a.structure(i, j).to_vec()))
            .collect();
        let again = SuperAlgebra::new(a.name(), a.basis().to_vec(), all).unwrap();
        assert_eq!(again, a);
    }

    #[test]
    fn heisenberg_is_an_ideal_and_e_is_not() {
        let a = schrodinger();
        let idx = |names: &[&str]| {
            names
                .iter()
                .map(|n| a.index(n).unwrap())
                .collect::<Vec<_>>()
        };
        assert!(a.is_ideal(&idx(&["p", "q", "z", "G"])).unwrap());
        assert!(!a.is_ideal(&idx(&["e"])).unwrap());
        assert!(a.is_ideal(&(0..a.dim()).collect::<Vec<_>>()).unwrap());
        assert!(a.is_subalgebra(&idx(&["h", "e", "f", "E", "F"])).unwrap());
        assert!(!a.is_ideal(&idx(&["h", "e", "f", "E", "F"])).unwrap());
        assert!(a.is_ideal(&[42]).is_err());
    }

    #[test]
    fn centers() {
        let a = schrodinger();
        let z = named(&a, "z");
        assert_eq!(a.center(), Subspace::span(9, [z.coords]).unwrap());
        assert_eq!(catalog("osp12").unwrap().center().dim(), 0);
    }

    #[test]
    fn format_element_reads_naturally() {
        let a = schrodinger();
        let x = a
            .element(&[
                ("f", s(1)),
                ("q", s(1)),
                ("z", Scalar::ratio(-1, 2).unwrap()),
            ])
            .unwrap();
        assert_eq!(a.format_element(&x), "f + q - 1/2*z");
        assert_eq!(a.format_element(&Element::zero(9)), "0");
        assert_eq!(a.format_element(&named(&a, "e").scale(&s(-2))), "-2*e");
    }
}
