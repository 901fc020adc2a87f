//! Super-derivation algebras.
//!
//! Maps are `n x n` matrices acting on coordinate columns (column `i` is the
//! image of basis vector `i`). To reuse the subspace machinery, a map is
//! flattened column-major into a vector of length `n^2`: entry `(k, i)` sits
//! at index `i * n + k`, so the image of basis vector `i` occupies the block
//! `i*n .. (i+1)*n`. Every module uses this convention.

use thiserror::Error;

use crate::exactla::{ExactError, Matrix, Solution, Subspace};
use crate::exec::Exec;
use crate::scalar::Scalar;
use crate::superalg::{catalog, AlgebraError, Element, Parity, SuperAlgebra, SUPER_SCHRODINGER};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerivationError {
    #[error("algebra `{name}` fails validation with {count} violation(s)")]
    InvalidAlgebra { name: String, count: usize },
    #[error("this check is specific to the super Schrödinger algebra")]
    NotSuperSchrodinger,
    #[error("map is not in the span of the inner derivations and the outer map")]
    NotADerivation,
    #[error("map is declared homogeneous of degree {0:?} but has entries of the other degree")]
    NotHomogeneous(Parity),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degree {
    Homogeneous(Parity),
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMap {
    pub matrix: Matrix,
    pub degree: Degree,
}

impl LinearMap {
    pub fn new(matrix: Matrix) -> Result<Self, ExactError> {
        if matrix.rows() != matrix.cols() {
            return Err(ExactError::DimensionMismatch {
                expected: matrix.rows(),
                found: matrix.cols(),
            });
        }
        Ok(LinearMap {
            matrix,
            degree: Degree::Mixed,
        })
    }

    pub fn zero(n: usize) -> Self {
        LinearMap {
            matrix: Matrix::zeros(n, n),
            degree: Degree::Mixed,
        }
    }

    pub fn identity(n: usize) -> Self {
        LinearMap {
            matrix: Matrix::identity(n),
            degree: Degree::Homogeneous(Parity::Even),
        }
    }

    /// Declares the map homogeneous of degree `parity`, checking that it
    /// sends `L_b` into `L_{b + parity}`.
    pub fn declare(mut self, alg: &SuperAlgebra, parity: Parity) -> Result<Self, DerivationError> {
        let n = self.dim();
        for k in 0..n {
            for i in 0..n {
                if alg.parity(k) != alg.parity(i).plus(parity) && !self.matrix[(k, i)].is_zero() {
                    return Err(DerivationError::NotHomogeneous(parity));
                }
            }
        }
        self.degree = Degree::Homogeneous(parity);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, x: &Element) -> Result<Element, ExactError> {
        Ok(Element::from_coords(self.matrix.mul_vec(&x.coords)?))
    }

    pub fn image_of_basis(&self, i: usize) -> Element {
        Element::from_coords(self.matrix.column(i))
    }

    pub fn to_vec(&self) -> Vec<Scalar> {
        let n = self.dim();
        (0..n * n)
            .map(|t| self.matrix[(t % n, t / n)].clone())
            .collect()
    }

    pub fn from_vec(n: usize, v: &[Scalar]) -> Result<Self, ExactError> {
        crate::exactla::check_len(n * n, v.len())?;
        let mut m = Matrix::zeros(n, n);
        for (t, x) in v.iter().enumerate() {
            m[(t % n, t / n)] = x.clone();
        }
        LinearMap::new(m)
    }

    /// The degree-0 and degree-1 components.
    pub fn homogeneous_parts(&self, alg: &SuperAlgebra) -> [LinearMap; 2] {
        let n = self.dim();
        let mut parts = [Matrix::zeros(n, n), Matrix::zeros(n, n)];
        for k in 0..n {
            for i in 0..n {
                let d = (alg.parity(k).bit() + alg.parity(i).bit()) % 2;
                parts[d as usize][(k, i)] = self.matrix[(k, i)].clone();
            }
        }
        let [even, odd] = parts;
        [
            LinearMap {
                matrix: even,
                degree: Degree::Homogeneous(Parity::Even),
            },
            LinearMap {
                matrix: odd,
                degree: Degree::Homogeneous(Parity::Odd),
            },
        ]
    }

    /// `self o other`.
    pub fn compose(&self, other: &LinearMap) -> Result<LinearMap, ExactError> {
        let degree = match (self.degree, other.degree) {
            (Degree::Homogeneous(a), Degree::Homogeneous(b)) => Degree::Homogeneous(a.plus(b)),
            _ => Degree::Mixed,
        };
        Ok(LinearMap {
            matrix: self.matrix.mul(&other.matrix)?,
            degree,
        })
    }

    pub fn linear_combination(n: usize, terms: &[(Scalar, &LinearMap)]) -> LinearMap {
        let mut v = vec![Scalar::zero(); n * n];
        for (c, m) in terms {
            for (acc, x) in v.iter_mut().zip(m.to_vec()) {
                *acc += &(c * &x);
            }
        }
        LinearMap::from_vec(n, &v).expect("length n^2")
    }
}

/// `D1 D2 - (-1)^{|D1||D2|} D2 D1` for homogeneous maps.
pub fn supercommutator(a: &LinearMap, b: &LinearMap) -> Option<LinearMap> {
    let (Degree::Homogeneous(pa), Degree::Homogeneous(pb)) = (a.degree, b.degree) else {
        return None;
    };
    let ab = a.compose(b).ok()?;
    let ba = b.compose(a).ok()?;
    let s = Scalar::sign(pa.bit() * pb.bit());
    let mut m = LinearMap::linear_combination(a.dim(), &[(Scalar::one(), &ab), (-s, &ba)]);
    m.degree = Degree::Homogeneous(pa.plus(pb));
    Some(m)
}

/// `Der(L) = Der_0 + Der_1` as subspaces of the flattened endomorphism space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationSpace {
    pub dim_algebra: usize,
    pub even: Subspace,
    pub odd: Subspace,
    pub total: Subspace,
}

impl DerivationSpace {
    pub fn dim(&self) -> usize {
        self.total.dim()
    }

    fn maps_of(&self, s: &Subspace, degree: Degree) -> Vec<LinearMap> {
        s.vectors()
            .map(|v| {
                let mut m = LinearMap::from_vec(self.dim_algebra, v).expect("length n^2");
                m.degree = degree;
                m
            })
            .collect()
    }

    /// Canonical basis of the whole space.
    pub fn maps(&self) -> Vec<LinearMap> {
        self.maps_of(&self.total, Degree::Mixed)
    }

    pub fn even_maps(&self) -> Vec<LinearMap> {
        self.maps_of(&self.even, Degree::Homogeneous(Parity::Even))
    }

    pub fn odd_maps(&self) -> Vec<LinearMap> {
        self.maps_of(&self.odd, Degree::Homogeneous(Parity::Odd))
    }

    pub fn contains(&self, d: &LinearMap) -> Result<bool, ExactError> {
        self.total.contains(&d.to_vec())
    }
}

fn ensure_valid(alg: &SuperAlgebra) -> Result<(), DerivationError> {
    let v = alg.validate();
    if v.is_empty() {
        Ok(())
    } else {
        Err(DerivationError::InvalidAlgebra {
            name: alg.name().to_string(),
            count: v.len(),
        })
    }
}

pub fn derivation_space(alg: &SuperAlgebra) -> Result<DerivationSpace, DerivationError> {
    derivation_space_with(alg, Exec::default())
}

pub fn derivation_space_with(
    alg: &SuperAlgebra,
    exec: Exec,
) -> Result<DerivationSpace, DerivationError> {
    ensure_valid(alg)?;
    let even = homogeneous_derivations(alg, Parity::Even, exec);
    let odd = homogeneous_derivations(alg, Parity::Odd, exec);
    let total = even.sum(&odd)?;
    Ok(DerivationSpace {
        dim_algebra: alg.dim(),
        even,
        odd,
        total,
    })
}

/// Solves the super-Leibniz system over the entries `(k, i)` allowed for a
/// map of degree `degree`, then embeds the solutions into `Q^{n^2}`.
fn homogeneous_derivations(alg: &SuperAlgebra, degree: Parity, exec: Exec) -> Subspace {
    let n = alg.dim();
    // unknowns in flattened order, so the embedding is monotone
    let unknowns: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |k| (k, i)))
        .filter(|&(k, i)| alg.parity(k) == alg.parity(i).plus(degree))
        .collect();
    let mut position = vec![None; n * n];
    for (t, &(k, i)) in unknowns.iter().enumerate() {
        position[k * n + i] = Some(t);
    }
    let m = unknowns.len();

    // rows for the pair (i, j), one per output coordinate:
    // D[x_i,x_j] - [D x_i, x_j] - (-1)^{|D||i|} [x_i, D x_j] = 0
    let blocks = exec.map_range(n, |i| {
        let sign = Scalar::sign(degree.bit() * alg.parity(i).bit());
        let mut rows = Vec::new();
        for j in 0..n {
            let mut block = vec![vec![Scalar::zero(); m]; n];
            for (c, coef) in alg.structure(i, j) {
                for (out, row) in block.iter_mut().enumerate() {
                    if let Some(t) = position[out * n + c] {
                        row[t] += coef;
                    }
                }
            }
            for l in 0..n {
                if let Some(t) = position[l * n + i] {
                    for (out, coef) in alg.structure(l, j) {
                        block[*out][t] -= coef;
                    }
                }
                if let Some(t) = position[l * n + j] {
                    for (out, coef) in alg.structure(i, l) {
                        block[*out][t] -= &(&sign * coef);
                    }
                }
            }
            rows.extend(block.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())));
        }
        rows
    });
    let system = Matrix::from_rows(m, blocks.into_iter().flatten().collect())
        .expect("rows have one entry per unknown");
    let solutions = system.nullspace();
    let embedded = solutions.vectors().map(|v| {
        let mut full = vec![Scalar::zero(); n * n];
        for (t, &(k, i)) in unknowns.iter().enumerate() {
            full[i * n + k] = v[t].clone();
        }
        full
    });
    Subspace::span(n * n, embedded).expect("length n^2")
}

pub fn ad_map(alg: &SuperAlgebra, x: &Element) -> Result<LinearMap, DerivationError> {
    let mut m = LinearMap::new(alg.ad(x)?)?;
    if let Some(p) = alg.homogeneous_parity(x) {
        m.degree = Degree::Homogeneous(p);
    }
    Ok(m)
}

/// Span of `ad(x_i)` over the basis.
pub fn inner_space(alg: &SuperAlgebra) -> Subspace {
    let n = alg.dim();
    let vectors = (0..n).map(|i| {
        ad_map(alg, &alg.basis_element(i))
            .expect("basis element conforms")
            .to_vec()
    });
    Subspace::span(n * n, vectors).expect("length n^2")
}

/// The outer derivation of the super Schrödinger algebra: zero on
/// `e, f, h, E, F`, identity on `p, q, G`, and `z -> 2z`.
pub fn delta_map() -> LinearMap {
    // basis order (e, f, h, p, q, z, E, F, G)
    let diag = [0, 0, 0, 1, 1, 2, 0, 0, 1];
    let mut m = Matrix::zeros(9, 9);
    for (i, &d) in diag.iter().enumerate() {
        m[(i, i)] = Scalar::from_int(d);
    }
    LinearMap {
        matrix: m,
        degree: Degree::Homogeneous(Parity::Even),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LeibnizCheck {
    Holds,
    Fails {
        degree: Parity,
        left: usize,
        right: usize,
        residual: Element,
    },
}

impl LeibnizCheck {
    pub fn holds(&self) -> bool {
        matches!(self, LeibnizCheck::Holds)
    }
}

/// A map is a super-derivation iff both homogeneous components satisfy
/// `D[x,y] = [Dx,y] + (-1)^{|D||x|}[x,Dy]` on every basis pair.
pub fn is_derivation(alg: &SuperAlgebra, d: &LinearMap) -> Result<LeibnizCheck, DerivationError> {
    if d.dim() != alg.dim() {
        return Err(AlgebraError::DimensionMismatch {
            expected: alg.dim(),
            found: d.dim(),
        }
        .into());
    }
    let n = alg.dim();
    for part in d.homogeneous_parts(alg) {
        let Degree::Homogeneous(degree) = part.degree else {
            unreachable!("parts are homogeneous")
        };
        if part.matrix.is_zero() {
            continue;
        }
        for i in 0..n {
            let xi = alg.basis_element(i);
            let dxi = part.image_of_basis(i);
            let sign = Scalar::sign(degree.bit() * alg.parity(i).bit());
            for j in 0..n {
                let xj = alg.basis_element(j);
                let lhs = part.apply(&alg.bracket(&xi, &xj)?)?;
                let a = alg.bracket(&dxi, &xj)?;
                let b = alg.bracket(&xi, &part.image_of_basis(j))?;
                let residual = lhs.sub(&a).sub(&b.scale(&sign));
                if !residual.is_zero() {
                    return Ok(LeibnizCheck::Fails {
                        degree,
                        left: i,
                        right: j,
                        residual,
                    });
                }
            }
        }
    }
    Ok(LeibnizCheck::Holds)
}

/// Result of checking `Der(L) = IDer(L) + Q*outer` with `outer` not inner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OuterExtensionCheck {
    pub outer_is_derivation: bool,
    pub outer_not_inner: bool,
    pub inner_plus_outer_is_der: bool,
    pub dims_match: bool,
    pub dim_der: usize,
    pub dim_inner: usize,
}

impl OuterExtensionCheck {
    pub fn all_hold(&self) -> bool {
        self.outer_is_derivation
            && self.outer_not_inner
            && self.inner_plus_outer_is_der
            && self.dims_match
    }
}

pub fn check_outer_extension(
    alg: &SuperAlgebra,
    der: &DerivationSpace,
    outer: &LinearMap,
) -> Result<OuterExtensionCheck, DerivationError> {
    let inner = inner_space(alg);
    let n = alg.dim();
    let outer_vec = outer.to_vec();
    crate::exactla::check_len(n * n, outer_vec.len())?;
    let extended = inner.sum(&Subspace::span(n * n, [outer_vec.clone()])?)?;
    Ok(OuterExtensionCheck {
        outer_is_derivation: is_derivation(alg, outer)?.holds(),
        outer_not_inner: !inner.contains(&outer_vec)?,
        inner_plus_outer_is_der: extended == der.total,
        dims_match: der.dim() == inner.dim() + 1,
        dim_der: der.dim(),
        dim_inner: inner.dim(),
    })
}

/// `Der = IDer + Q*delta` for the super Schrödinger algebra.
pub fn verify_super_schrodinger_derivations(
    alg: &SuperAlgebra,
) -> Result<OuterExtensionCheck, DerivationError> {
    let reference = catalog(SUPER_SCHRODINGER)?;
    if !alg.same_structure(&reference) {
        return Err(DerivationError::NotSuperSchrodinger);
    }
    let der = derivation_space(alg)?;
    check_outer_extension(alg, &der, &delta_map())
}

/// `D = ad(inner) + outer_coeff * outer`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationCoordinates {
    pub inner: Element,
    pub outer: Scalar,
}

/// Solves `d = sum b_i ad(x_i) + lambda * outer`. The inner part is only
/// determined modulo the center; free coordinates are set to zero, which for
/// the super Schrödinger algebra means the `z` coefficient is zero.
pub fn decompose(
    alg: &SuperAlgebra,
    outer: &LinearMap,
    d: &LinearMap,
) -> Result<DerivationCoordinates, DerivationError> {
    let n = alg.dim();
    let mut columns: Vec<Vec<Scalar>> = (0..n)
        .map(|i| ad_map(alg, &alg.basis_element(i)).map(|m| m.to_vec()))
        .collect::<Result<_, _>>()?;
    columns.push(outer.to_vec());
    let system = Matrix::from_rows(n * n, columns)?.transpose();
    match system.solve(&d.to_vec())? {
        Solution::Inconsistent => Err(DerivationError::NotADerivation),
        Solution::Particular(mut x) => {
            let outer = x.pop().expect("n + 1 unknowns");
            Ok(DerivationCoordinates {
                inner: Element::from_coords(x),
                outer,
            })
        }
    }
}

/// Inverse of [`decompose`].
pub fn recompose(
    alg: &SuperAlgebra,
    outer: &LinearMap,
    coords: &DerivationCoordinates,
) -> Result<LinearMap, DerivationError> {
    let ad = ad_map(alg, &coords.inner)?;
    Ok(LinearMap::linear_combination(
        alg.dim(),
        &[(Scalar::one(), &ad), (coords.outer.clone(), outer)],
    ))
}
