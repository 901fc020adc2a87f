//! Local super-derivations.
//!
//! A linear map `Δ` is a local super-derivation if for every `x` there is a
//! super-derivation `D_x` with `Δ(x) = D_x(x)`, that is, `Δ(x)` lies in the
//! orbit `Der·x`. Each probe `x` cuts out the linear condition
//! `Δ(x) ∈ Der·x`; intersecting over a finite probe set gives a subspace that
//! contains every local super-derivation. `Der ⊆ LocDer ⊆ closure` always
//! holds, so if the closure has the same dimension as `Der`, then
//! `LocDer = Der`. The converse fails: a larger closure does not mean a local
//! map outside `Der` exists, only that these probes cannot rule it out.

mod replay;

pub use replay::{
    replay, AssertionSpec, ConclusionSpec, LemmaFacts, Reading, ReplayError, StageSpec, StartSpec,
    Transcript,
};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::derivations::{DerivationSpace, LinearMap};
use crate::exactla::{Matrix, Subspace};
use crate::exec::Exec;
use crate::format::ProbeFile;
use crate::scalar::Scalar;
use crate::superalg::{Element, SuperAlgebra};

const BUILTIN_PROBES_JSON: &str = include_str!("../../data/builtin_probes.json");

/// The shipped probe set for the super Schrödinger algebra.
pub fn builtin_probe_file() -> ProbeFile {
    ProbeFile::from_json(BUILTIN_PROBES_JSON).expect("embedded probe file is well formed")
}

/// `{D(x) : D ∈ Der}`.
pub fn orbit(der: &DerivationSpace, x: &Element) -> Subspace {
    let n = der.dim_algebra;
    let images = der.total.vectors().map(|v| apply_flat(n, v, &x.coords));
    Subspace::span(n, images).expect("images have length n")
}

/// Applies a column-major flattened map to a coordinate vector.
pub fn apply_flat(n: usize, map: &[Scalar], x: &[Scalar]) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); n];
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (m, o) in out.iter_mut().enumerate() {
            let a = &map[i * n + m];
            if !a.is_zero() {
                *o += &(a * xi);
            }
        }
    }
    out
}

pub fn is_local_value(der: &DerivationSpace, x: &Element, v: &Element) -> bool {
    orbit(der, x).contains(&v.coords).expect("dimensions agree")
}

/// Lifts a functional `w` on the algebra to the functional `Δ ↦ w(Δ(x))`
/// on the flattened endomorphism space.
fn lift(n: usize, w: &[Scalar], x: &Element) -> Vec<Scalar> {
    let mut f = vec![Scalar::zero(); n * n];
    for (i, xi) in x.coords.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (m, wm) in w.iter().enumerate() {
            if !wm.is_zero() {
                f[i * n + m] = wm * xi;
            }
        }
    }
    f
}

/// Functionals whose common kernel is `{Δ : Δ(x) ∈ orbit(x)}`.
pub fn probe_functionals(der: &DerivationSpace, x: &Element) -> Vec<Vec<Scalar>> {
    let n = der.dim_algebra;
    if x.is_zero() {
        return Vec::new();
    }
    orbit(der, x)
        .annihilator()
        .vectors()
        .map(|w| lift(n, w, x))
        .collect()
}

/// Functionals whose common kernel is `{Δ : Δ(x) = 0}`.
pub fn pin_functionals(n: usize, x: &Element) -> Vec<Vec<Scalar>> {
    (0..n)
        .map(|m| {
            let mut w = vec![Scalar::zero(); n];
            w[m] = Scalar::one();
            lift(n, &w, x)
        })
        .filter(|f| f.iter().any(|c| !c.is_zero()))
        .collect()
}

pub fn probe_constraint(der: &DerivationSpace, x: &Element) -> Subspace {
    kernel(der.dim_algebra, probe_functionals(der, x))
}

pub(crate) fn kernel(n: usize, functionals: Vec<Vec<Scalar>>) -> Subspace {
    if functionals.is_empty() {
        return Subspace::full(n * n);
    }
    Matrix::from_rows(n * n, functionals)
        .expect("functionals have length n^2")
        .nullspace()
}

/// Intersection of the probe constraints, computed as the kernel of all
/// probe functionals stacked in probe order.
pub fn probe_closure(der: &DerivationSpace, probes: &[Element]) -> Subspace {
    probe_closure_with(der, probes, Exec::default())
}

pub fn probe_closure_with(der: &DerivationSpace, probes: &[Element], exec: Exec) -> Subspace {
    let rows = exec.map(probes, |x| probe_functionals(der, x));
    kernel(der.dim_algebra, rows.into_iter().flatten().collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Certified,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub trial: u64,
    pub element: Element,
    pub image: Element,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapVector {
    pub map: LinearMap,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificationReport {
    pub algebra: String,
    pub dim_der: usize,
    pub dim_closure: usize,
    pub probes: Vec<Element>,
    pub verdict: Verdict,
    /// Complement of `Der` inside the closure, with refutation results.
    pub gap: Vec<GapVector>,
    /// False would mean a derivation violates a probe constraint, which is
    /// impossible for correct arithmetic.
    pub der_in_closure: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RefuteOptions {
    pub trials: u64,
    pub seed: u64,
}

impl Default for RefuteOptions {
    fn default() -> Self {
        RefuteOptions {
            trials: 1000,
            seed: 0,
        }
    }
}

pub fn certify(
    alg: &SuperAlgebra,
    der: &DerivationSpace,
    probes: &[Element],
    options: RefuteOptions,
    exec: Exec,
) -> CertificationReport {
    let closure = probe_closure_with(der, probes, exec);
    let der_in_closure = closure
        .contains_all(&der.total)
        .expect("same ambient space");
    let verdict = if closure.dim() == der.dim() && der_in_closure {
        Verdict::Certified
    } else {
        Verdict::Inconclusive
    };
    let gap = if verdict == Verdict::Inconclusive {
        closure
            .complement_basis(&der.total)
            .expect("same ambient space")
            .into_iter()
            .map(|v| {
                let map = LinearMap::from_vec(alg.dim(), &v).expect("length n^2");
                let witness = refute_with(der, &map, options, exec);
                GapVector { map, witness }
            })
            .collect()
    } else {
        Vec::new()
    };
    CertificationReport {
        algebra: alg.name().to_string(),
        dim_der: der.dim(),
        dim_closure: closure.dim(),
        probes: probes.to_vec(),
        verdict,
        gap,
        der_in_closure,
    }
}

/// A random element with numerators in `[-10, 10]` and denominators in
/// `{1, 2, 3}`.
pub fn random_element(rng: &mut impl Rng, n: usize) -> Element {
    Element::from_coords(
        (0..n)
            .map(|_| {
                let num = rng.random_range(-10..=10);
                let den = rng.random_range(1..=3);
                Scalar::ratio(num, den).expect("nonzero denominator")
            })
            .collect(),
    )
}

pub fn refute(
    der: &DerivationSpace,
    candidate: &LinearMap,
    options: RefuteOptions,
) -> Option<Witness> {
    refute_with(der, candidate, options, Exec::default())
}

const REFUTE_CHUNK: u64 = 64;

/// Searches random elements for `x` with `candidate(x) ∉ orbit(x)` and
/// returns the one with the smallest trial index. Finding none proves
/// nothing.
pub fn refute_with(
    der: &DerivationSpace,
    candidate: &LinearMap,
    options: RefuteOptions,
    exec: Exec,
) -> Option<Witness> {
    let n = der.dim_algebra;
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut start = 0;
    while start < options.trials {
        let len = REFUTE_CHUNK.min(options.trials - start);
        let xs: Vec<Element> = (0..len).map(|_| random_element(&mut rng, n)).collect();
        let hits = exec.map(&xs, |x| {
            let image = candidate.apply(x).expect("dimensions agree");
            (!is_local_value(der, x, &image)).then_some(image)
        });
        if let Some((k, image)) = hits
            .into_iter()
            .enumerate()
            .find_map(|(k, h)| h.map(|img| (k, img)))
        {
            return Some(Witness {
                trial: start + k as u64,
                element: xs[k].clone(),
                image,
            });
        }
        start += len;
    }
    None
}

/// The first listed element at which `candidate` leaves the orbit.
pub fn first_violated_probe(
    der: &DerivationSpace,
    candidate: &LinearMap,
    probes: &[Element],
) -> Option<usize> {
    probes.iter().position(|x| {
        let image = candidate.apply(x).expect("dimensions agree");
        !is_local_value(der, x, &image)
    })
}
