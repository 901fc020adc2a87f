//! Step-by-step reconstruction of the local-derivation argument for the
//! super Schrödinger algebra.
//!
//! The argument is data: a starting probe set with pinned values, then
//! stages that each add probes and assert linear conditions on every map in
//! the constrained space. Conditions are written in terms of readings of `Δ`:
//!
//! * `{"coef": [x, w]}` is the `w` coordinate of `Δ(x)`;
//! * `{"b": [y, x]}` is `Δ(x)_w / c` where `[y, x] = c·w`, i.e. the
//!   coefficient `b_y` of an inner derivation `ad(Σ b_y y)` read off at `x`.
//!
//! `b` readings are defined by the structure constants themselves, so their
//! sign conventions cannot drift from the bracket table.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{kernel, pin_functionals, probe_functionals};
use crate::derivations::{ad_map, derivation_space, DerivationError};
use crate::exactla::Subspace;
use crate::format::{parse_element, ElementSpec, FormatError};
use crate::scalar::Scalar;
use crate::superalg::{catalog, Element, SuperAlgebra, SUPER_SCHRODINGER};

const LEMMA_FACTS_JSON: &str = include_str!("../../data/lemma_facts.json");

#[derive(Debug, Error)]
pub enum ReplayError {
    #[error("the replay applies only to the super Schrödinger algebra")]
    NotSuperSchrodinger,
    #[error("{path}: {message}")]
    Reading { path: String, message: String },
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Derivation(#[from] DerivationError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Reading {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coef: Option<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssertionSpec {
    pub label: String,
    /// `Δ(x) = 0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub image_zero: Option<ElementSpec>,
    /// `Σ lhs = Σ rhs`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lhs: Vec<Reading>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rhs: Vec<Reading>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StartSpec {
    pub probes: Vec<ElementSpec>,
    /// Elements whose image is required to vanish.
    #[serde(default)]
    pub pins: Vec<ElementSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageSpec {
    pub name: String,
    #[serde(default)]
    pub probes: Vec<ElementSpec>,
    #[serde(default)]
    pub assertions: Vec<AssertionSpec>,
}

/// The surviving space must equal `span{ad(element)}`, and each surviving
/// map must equal `Σ reading · ad(element)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConclusionSpec {
    pub element: ElementSpec,
    pub reading: Reading,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LemmaFacts {
    pub start: StartSpec,
    pub stages: Vec<StageSpec>,
    pub conclusion: Vec<ConclusionSpec>,
}

impl LemmaFacts {
    pub fn builtin() -> Self {
        LemmaFacts::from_json(LEMMA_FACTS_JSON).expect("embedded lemma facts are well formed")
    }

    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("lemma facts serialize")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssertionFailure {
    /// Which functional failed, e.g. `Δ(h)_e` for an `image_zero` assertion.
    pub functional: String,
    /// Index of the basis vector of the constrained space it fails on.
    pub basis_index: usize,
    pub value: Scalar,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssertionResult {
    pub label: String,
    pub failure: Option<AssertionFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageResult {
    pub name: String,
    pub probes: Vec<Element>,
    pub dim: usize,
    pub assertions: Vec<AssertionResult>,
}

impl StageResult {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.failure.is_none())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConclusionResult {
    pub generators: Vec<Element>,
    pub spans_match: bool,
    pub readings_reconstruct: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub start_probes: usize,
    pub pins: Vec<Element>,
    pub start_dim: usize,
    pub stages: Vec<StageResult>,
    pub final_dim: usize,
    pub conclusion: ConclusionResult,
    pub reconstruction: String,
}

impl Transcript {
    pub fn passed(&self) -> bool {
        self.stages.iter().all(StageResult::passed)
            && self.conclusion.spans_match
            && self.conclusion.readings_reconstruct
    }
}

type Functional = Vec<Scalar>;

struct Resolver<'a> {
    alg: &'a SuperAlgebra,
}

impl Resolver<'_> {
    fn n(&self) -> usize {
        self.alg.dim()
    }

    fn index(&self, path: &str, name: &str) -> Result<usize, ReplayError> {
        self.alg.index_of(name).ok_or_else(|| ReplayError::Reading {
            path: path.to_string(),
            message: format!("unknown basis name `{name}`"),
        })
    }

    fn element(&self, spec: &ElementSpec, path: &str) -> Result<Element, ReplayError> {
        Ok(parse_element(self.alg, spec, path)?)
    }

    /// `(x, w, factor)` with the reading equal to `factor · Δ(x)_w`.
    fn reading(&self, r: &Reading, path: &str) -> Result<(usize, usize, Scalar), ReplayError> {
        let err = |message: String| ReplayError::Reading {
            path: path.to_string(),
            message,
        };
        let scale = match &r.scale {
            Some(s) => s.parse::<Scalar>().map_err(|e| err(e.to_string()))?,
            None => Scalar::one(),
        };
        match (&r.b, &r.coef) {
            (Some((y, x)), None) => {
                let (yi, xi) = (self.index(path, y)?, self.index(path, x)?);
                match self.alg.structure(yi, xi) {
                    [(w, c)] => Ok((
                        xi,
                        *w,
                        scale.checked_div(c).expect("stored constants are nonzero"),
                    )),
                    [] => Err(err(format!(
                        "[{y}, {x}] = 0, so b_{{{y},{x}}} cannot be read"
                    ))),
                    _ => Err(err(format!(
                        "[{y}, {x}] has several terms, so b_{{{y},{x}}} is ambiguous"
                    ))),
                }
            }
            (None, Some((x, w))) => Ok((self.index(path, x)?, self.index(path, w)?, scale)),
            _ => Err(err("a reading needs exactly one of `b` or `coef`".into())),
        }
    }

    fn add_reading(
        &self,
        f: &mut Functional,
        r: &Reading,
        sign: &Scalar,
        path: &str,
    ) -> Result<(), ReplayError> {
        let (x, w, factor) = self.reading(r, path)?;
        f[x * self.n() + w] += &(sign * &factor);
        Ok(())
    }

    fn assertion(
        &self,
        a: &AssertionSpec,
        path: &str,
    ) -> Result<Vec<(String, Functional)>, ReplayError> {
        let n = self.n();
        let mut out = Vec::new();
        if let Some(spec) = &a.image_zero {
            let x = self.element(spec, &format!("{path}.image_zero"))?;
            let shown = compact(&self.alg.format_element(&x));
            for (m, f) in (0..n).zip(pin_functionals_all(n, &x)) {
                out.push((format!("Δ({shown})_{}", self.alg.basis()[m].name), f));
            }
        }
        if !a.lhs.is_empty() || !a.rhs.is_empty() {
            let mut f = vec![Scalar::zero(); n * n];
            for (k, r) in a.lhs.iter().enumerate() {
                self.add_reading(&mut f, r, &Scalar::one(), &format!("{path}.lhs[{k}]"))?;
            }
            for (k, r) in a.rhs.iter().enumerate() {
                self.add_reading(
                    &mut f,
                    r,
                    &Scalar::from_int(-1),
                    &format!("{path}.rhs[{k}]"),
                )?;
            }
            out.push((a.label.clone(), f));
        }
        if out.is_empty() {
            return Err(ReplayError::Reading {
                path: path.to_string(),
                message: "assertion has no condition".into(),
            });
        }
        Ok(out)
    }
}

/// One functional per coordinate of `Δ(x)`, zero ones included.
fn pin_functionals_all(n: usize, x: &Element) -> Vec<Functional> {
    (0..n)
        .map(|m| {
            let mut f = vec![Scalar::zero(); n * n];
            for (i, xi) in x.coords.iter().enumerate() {
                f[i * n + m] = xi.clone();
            }
            f
        })
        .collect()
}

fn compact(s: &str) -> String {
    s.replace(' ', "")
}

fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check(functionals: &[(String, Functional)], space: &Subspace) -> Option<AssertionFailure> {
    for (name, f) in functionals {
        for (k, v) in space.vectors().enumerate() {
            let value = dot(f, v);
            if !value.is_zero() {
                return Some(AssertionFailure {
                    functional: name.clone(),
                    basis_index: k,
                    value,
                });
            }
        }
    }
    None
}

/// Runs `facts` against `alg`, which must be the super Schrödinger algebra.
pub fn replay(alg: &SuperAlgebra, facts: &LemmaFacts) -> Result<Transcript, ReplayError> {
    if !alg.same_structure(&catalog(SUPER_SCHRODINGER).expect("catalog entry")) {
        return Err(ReplayError::NotSuperSchrodinger);
    }
    let n = alg.dim();
    let der = derivation_space(alg)?;
    let res = Resolver { alg };

    let mut rows: Vec<Functional> = Vec::new();
    let mut pins = Vec::new();
    for (k, spec) in facts.start.pins.iter().enumerate() {
        let x = res.element(spec, &format!("start.pins[{k}]"))?;
        rows.extend(pin_functionals(n, &x));
        pins.push(x);
    }
    for (k, spec) in facts.start.probes.iter().enumerate() {
        let x = res.element(spec, &format!("start.probes[{k}]"))?;
        rows.extend(probe_functionals(&der, &x));
    }
    let mut space = kernel(n, rows.clone());
    let start_dim = space.dim();

    let mut stages = Vec::with_capacity(facts.stages.len());
    for (si, stage) in facts.stages.iter().enumerate() {
        let mut probes = Vec::with_capacity(stage.probes.len());
        for (k, spec) in stage.probes.iter().enumerate() {
            let x = res.element(spec, &format!("stages[{si}].probes[{k}]"))?;
            rows.extend(probe_functionals(&der, &x));
            probes.push(x);
        }
        if !probes.is_empty() {
            space = kernel(n, rows.clone());
        }
        let mut assertions = Vec::with_capacity(stage.assertions.len());
        for (ai, a) in stage.assertions.iter().enumerate() {
            let fs = res.assertion(a, &format!("stages[{si}].assertions[{ai}]"))?;
            assertions.push(AssertionResult {
                label: a.label.clone(),
                failure: check(&fs, &space),
            });
        }
        stages.push(StageResult {
            name: stage.name.clone(),
            probes,
            dim: space.dim(),
            assertions,
        });
    }

    let mut generators = Vec::new();
    let mut ads = Vec::new();
    let mut readings = Vec::new();
    for (k, c) in facts.conclusion.iter().enumerate() {
        let path = format!("conclusion[{k}]");
        let g = res.element(&c.element, &format!("{path}.element"))?;
        ads.push(ad_map(alg, &g)?.to_vec());
        readings.push(res.reading(&c.reading, &format!("{path}.reading"))?);
        generators.push(g);
    }
    let target = Subspace::span(n * n, ads.iter().cloned()).expect("length n^2");
    let readings_reconstruct = space.vectors().all(|v| {
        let mut sum = vec![Scalar::zero(); n * n];
        for ((x, w, factor), ad) in readings.iter().zip(&ads) {
            let coeff = &v[x * n + w] * factor;
            for (s, a) in sum.iter_mut().zip(ad) {
                *s += &(&coeff * a);
            }
        }
        sum.as_slice() == v
    });

    let inner: Vec<String> = facts
        .conclusion
        .iter()
        .zip(&generators)
        .map(|(c, g)| {
            format!(
                "{}*{}",
                reading_label(&c.reading),
                compact(&alg.format_element(g))
            )
        })
        .collect();
    let shift: String = pins
        .iter()
        .map(|x| format!("D_{{{}}} + ", compact(&alg.format_element(x))))
        .collect();
    let reconstruction = format!("∇ = {shift}ad({})", inner.join(" + "));

    Ok(Transcript {
        start_probes: facts.start.probes.len(),
        pins,
        start_dim,
        final_dim: space.dim(),
        conclusion: ConclusionResult {
            generators,
            spans_match: space == target,
            readings_reconstruct,
        },
        stages,
        reconstruction,
    })
}

fn reading_label(r: &Reading) -> String {
    let base = match (&r.b, &r.coef) {
        (Some((y, x)), _) => format!("b_{{{y},{x}}}"),
        (_, Some((x, w))) => format!("Δ({x})_{w}"),
        _ => "?".into(),
    };
    match &r.scale {
        Some(s) => format!("{s}*{base}"),
        None => base,
    }
}
