use std::fmt;

use super::{check_len, ExactError, Matrix};
use crate::scalar::Scalar;

/// A subspace of `Q^n`, stored by its canonical (RREF) basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::zeros(0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(ambient),
            pivots: (0..ambient).collect(),
        }
    }

    /// Row space of `m`.
    pub fn row_space(m: &Matrix) -> Self {
        let r = m.rref();
        let rows = (0..r.rank).map(|i| r.reduced.row(i).to_vec()).collect();
        Subspace {
            ambient: m.cols(),
            basis: Matrix::from_rows(m.cols(), rows).expect("rows come from one matrix"),
            pivots: r.pivots,
        }
    }

    pub fn span<I>(ambient: usize, vectors: I) -> Result<Self, ExactError>
    where
        I: IntoIterator<Item = Vec<Scalar>>,
    {
        let rows: Vec<Vec<Scalar>> = vectors.into_iter().collect();
        for r in &rows {
            check_len(ambient, r.len())?;
        }
        Ok(Subspace::row_space(&Matrix::from_rows(ambient, rows)?))
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn vectors(&self) -> impl Iterator<Item = &[Scalar]> + '_ {
        self.basis.row_vecs()
    }

    /// Remainder of `v` after eliminating every pivot coordinate.
    pub fn reduce(&self, v: &[Scalar]) -> Result<Vec<Scalar>, ExactError> {
        check_len(self.ambient, v.len())?;
        let mut w = v.to_vec();
        for (k, &p) in self.pivots.iter().enumerate() {
            if w[p].is_zero() {
                continue;
            }
            let f = w[p].clone();
            for (c, b) in self.basis.row(k).iter().enumerate() {
                if !b.is_zero() {
                    w[c] -= &(&f * b);
                }
            }
        }
        Ok(w)
    }

    pub fn contains(&self, v: &[Scalar]) -> Result<bool, ExactError> {
        Ok(self.reduce(v)?.iter().all(Scalar::is_zero))
    }

    pub fn contains_all(&self, other: &Subspace) -> Result<bool, ExactError> {
        check_len(self.ambient, other.ambient)?;
        for v in other.vectors() {
            if !self.contains(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, ExactError> {
        check_len(self.ambient, other.ambient)?;
        Ok(Subspace::row_space(&self.basis.vstack(&other.basis)?))
    }

    /// `{w : <w, v> = 0 for every v in self}`.
    pub fn annihilator(&self) -> Subspace {
        self.basis.nullspace()
    }

    /// Intersection as the common solution set of both annihilator systems.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, ExactError> {
        check_len(self.ambient, other.ambient)?;
        let stacked = self
            .annihilator()
            .basis
            .vstack(&other.annihilator().basis)?;
        Ok(stacked.nullspace())
    }

    /// Vectors of `self` that extend a basis of `inside` to a basis of
    /// `inside + self`, taken greedily in canonical order.
    pub fn complement_basis(&self, inside: &Subspace) -> Result<Vec<Vec<Scalar>>, ExactError> {
        check_len(self.ambient, inside.ambient)?;
        let mut acc = inside.clone();
        let mut out = Vec::new();
        for v in self.vectors() {
            if !acc.contains(v)? {
                acc = acc.sum(&Subspace::span(self.ambient, [v.to_vec()])?)?;
                out.push(v.to_vec());
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subspace(dim {} in Q^{}) {:?}",
            self.dim(),
            self.ambient,
            self.basis
        )
    }
}
