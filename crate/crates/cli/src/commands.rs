use std::path::PathBuf;

use serde_json::{json, Map, Value};

use superloc::derivations::{
    check_outer_extension, delta_map, derivation_space_with, inner_space, DerivationError,
};
use superloc::format::{read, FormatError, Input, ProbeFile};
use superloc::localder::{
    builtin_probe_file, certify, replay as run_replay, LemmaFacts, RefuteOptions, ReplayError,
    Verdict,
};
use superloc::superalg::{catalog, SuperAlgebra, CATALOG_NAMES, SUPER_SCHRODINGER};
use superloc::Exec;

use crate::report::{
    element, linear_map, violation, AlgebraSummary, CommandEcho, Report, EXIT_FAILED,
    EXIT_INCONCLUSIVE, EXIT_INPUT, EXIT_OK,
};

const SOUNDNESS: &str =
    "Der ⊆ LocDer ⊆ closure. Equal dimensions of Der and closure prove LocDer = Der. \
A larger closure proves nothing either way; refutation can only exclude individual maps.";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeFilter {
    Even,
    Odd,
    All,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Builtin,
    File(PathBuf),
}

impl Source {
    pub fn parse(s: &str) -> Self {
        match s {
            "builtin" => Source::Builtin,
            path => Source::File(PathBuf::from(path)),
        }
    }

    fn describe(&self) -> String {
        match self {
            Source::Builtin => "builtin".into(),
            Source::File(p) => p.display().to_string(),
        }
    }
}

fn echo(name: &str, input: Option<&str>, options: Value) -> CommandEcho {
    CommandEcho {
        name: name.to_string(),
        input: input.map(str::to_string),
        options: match options {
            Value::Object(m) => m,
            _ => Map::new(),
        },
    }
}

fn report(
    command: CommandEcho,
    alg: Option<&SuperAlgebra>,
    status: &'static str,
    exit_code: i32,
    result: Value,
) -> Report {
    Report {
        command,
        algebra: alg.map(AlgebraSummary::of),
        status,
        exit_code,
        result,
        timing_ms: None,
    }
}

fn input_error(command: CommandEcho, alg: Option<&SuperAlgebra>, message: impl ToString) -> Report {
    report(
        command,
        alg,
        "input-error",
        EXIT_INPUT,
        json!({ "error": message.to_string() }),
    )
}

fn load(input: &str) -> Result<SuperAlgebra, FormatError> {
    Input::parse(input).load()
}

fn invalid(command: CommandEcho, alg: &SuperAlgebra, count: usize) -> Report {
    report(
        command,
        Some(alg),
        "invalid-algebra",
        EXIT_FAILED,
        json!({ "error": format!("algebra fails validation with {count} violation(s); run `validate` for details") }),
    )
}

pub fn validate(input: &str, exec: Exec) -> Report {
    let cmd = echo("validate", Some(input), json!({}));
    let alg = match load(input) {
        Ok(a) => a,
        Err(e) => return input_error(cmd, None, e),
    };
    let n = alg.dim();
    let violations = alg.validate_with(exec);
    let (status, code) = if violations.is_empty() {
        ("valid", EXIT_OK)
    } else {
        ("violations", EXIT_FAILED)
    };
    let result = json!({
        "checked": { "grading_pairs": n * n, "skew_pairs": n * n, "jacobi_triples": n * n * n },
        "violation_count": violations.len(),
        "violations": violations.iter().map(|v| violation(&alg, v)).collect::<Vec<_>>(),
    });
    report(cmd, Some(&alg), status, code, result)
}

pub fn derivations(input: &str, degree: DegreeFilter, exec: Exec) -> Report {
    let degree_name = match degree {
        DegreeFilter::Even => "0",
        DegreeFilter::Odd => "1",
        DegreeFilter::All => "all",
    };
    let cmd = echo("derivations", Some(input), json!({ "degree": degree_name }));
    let alg = match load(input) {
        Ok(a) => a,
        Err(e) => return input_error(cmd, None, e),
    };
    let der = match derivation_space_with(&alg, exec) {
        Ok(d) => d,
        Err(DerivationError::InvalidAlgebra { count, .. }) => return invalid(cmd, &alg, count),
        Err(e) => return input_error(cmd, Some(&alg), e),
    };
    let inner = inner_space(&alg);
    let mut bases = Map::new();
    if degree != DegreeFilter::Odd {
        bases.insert(
            "even".into(),
            der.even_maps()
                .iter()
                .map(|m| linear_map(&alg, m))
                .collect(),
        );
    }
    if degree != DegreeFilter::Even {
        bases.insert(
            "odd".into(),
            der.odd_maps().iter().map(|m| linear_map(&alg, m)).collect(),
        );
    }
    let mut result = json!({
        "dims": {
            "even": der.even.dim(),
            "odd": der.odd.dim(),
            "total": der.dim(),
            "inner": inner.dim(),
            "outer_quotient": der.dim() - inner.dim(),
        },
        "bases": bases,
    });
    let mut code = EXIT_OK;
    if alg.same_structure(&catalog(SUPER_SCHRODINGER).expect("catalog entry")) {
        let delta = delta_map();
        let check = check_outer_extension(&alg, &der, &delta).expect("dimensions agree");
        if !check.all_hold() {
            code = EXIT_FAILED;
        }
        result["outer_derivation"] = json!({
            "map": linear_map(&alg, &delta),
            "is_derivation": check.outer_is_derivation,
            "is_not_inner": check.outer_not_inner,
            "inner_plus_span_equals_der": check.inner_plus_outer_is_der,
            "dim_der_equals_dim_inner_plus_one": check.dims_match,
        });
    }
    let status = if code == EXIT_OK { "ok" } else { "failed" };
    report(cmd, Some(&alg), status, code, result)
}

fn load_probes(alg: &SuperAlgebra, source: &Source) -> Result<Vec<superloc::Element>, String> {
    let file = match source {
        Source::Builtin => builtin_probe_file(),
        Source::File(p) => read(p)
            .and_then(|t| ProbeFile::from_json(&t))
            .map_err(|e| format!("{}: {e}", p.display()))?,
    };
    let probes = file
        .to_elements(alg)
        .map_err(|e| format!("{}: {e}", source.describe()))?;
    if probes.is_empty() {
        return Err(format!("{}: probe list is empty", source.describe()));
    }
    if let Some(k) = probes.iter().position(|x| x.is_zero()) {
        return Err(format!("{}: probes[{k}] is zero", source.describe()));
    }
    Ok(probes)
}

pub fn local_check(input: &str, probes: &Source, refute: RefuteOptions, exec: Exec) -> Report {
    let cmd = echo(
        "local-check",
        Some(input),
        json!({ "probes": probes.describe(), "refute_trials": refute.trials, "seed": refute.seed }),
    );
    let alg = match load(input) {
        Ok(a) => a,
        Err(e) => return input_error(cmd, None, e),
    };
    let der = match derivation_space_with(&alg, exec) {
        Ok(d) => d,
        Err(DerivationError::InvalidAlgebra { count, .. }) => return invalid(cmd, &alg, count),
        Err(e) => return input_error(cmd, Some(&alg), e),
    };
    let probe_list = match load_probes(&alg, probes) {
        Ok(p) => p,
        Err(e) => return input_error(cmd, Some(&alg), e),
    };
    let cert = certify(&alg, &der, &probe_list, refute, exec);
    let (status, code) = match (cert.der_in_closure, cert.verdict) {
        (false, _) => ("failed", EXIT_FAILED),
        (true, Verdict::Certified) => ("certified", EXIT_OK),
        (true, Verdict::Inconclusive) => ("inconclusive", EXIT_INCONCLUSIVE),
    };
    let gap: Vec<Value> = cert
        .gap
        .iter()
        .map(|g| {
            json!({
                "map": linear_map(&alg, &g.map),
                "refutation": g.witness.as_ref().map(|w| json!({
                    "trial": w.trial,
                    "element": element(&alg, &w.element),
                    "image": element(&alg, &w.image),
                })),
            })
        })
        .collect();
    let result = json!({
        "verdict": status,
        "dim_der": cert.dim_der,
        "dim_closure": cert.dim_closure,
        "der_in_closure": cert.der_in_closure,
        "probes": {
            "source": probes.describe(),
            "count": cert.probes.len(),
            "elements": cert.probes.iter().map(|x| element(&alg, x)).collect::<Vec<_>>(),
        },
        "soundness": SOUNDNESS,
        "gap": gap,
    });
    report(cmd, Some(&alg), status, code, result)
}

pub fn replay(input: &str, facts: &Source) -> Report {
    let cmd = echo("replay", Some(input), json!({ "facts": facts.describe() }));
    let alg = match load(input) {
        Ok(a) => a,
        Err(e) => return input_error(cmd, None, e),
    };
    let lemma_facts = match facts {
        Source::Builtin => LemmaFacts::builtin(),
        Source::File(p) => match read(p).and_then(|t| LemmaFacts::from_json(&t)) {
            Ok(f) => f,
            Err(e) => return input_error(cmd, Some(&alg), format!("{}: {e}", p.display())),
        },
    };
    let t = match run_replay(&alg, &lemma_facts) {
        Ok(t) => t,
        Err(
            e @ (ReplayError::NotSuperSchrodinger
            | ReplayError::Reading { .. }
            | ReplayError::Format(_)),
        ) => return input_error(cmd, Some(&alg), e),
        Err(e) => {
            return report(
                cmd,
                Some(&alg),
                "failed",
                EXIT_FAILED,
                json!({ "error": e.to_string() }),
            )
        }
    };
    let stages: Vec<Value> = t
        .stages
        .iter()
        .map(|st| {
            json!({
                "name": st.name,
                "probes_added": st.probes.iter().map(|x| element(&alg, x)).collect::<Vec<_>>(),
                "dim": st.dim,
                "passed": st.passed(),
                "assertions": st.assertions.iter().map(|a| match &a.failure {
                    None => json!({ "label": a.label, "holds": true }),
                    Some(f) => json!({
                        "label": a.label,
                        "holds": false,
                        "failure": {
                            "functional": f.functional,
                            "basis_index": f.basis_index,
                            "value": f.value.to_string(),
                        },
                    }),
                }).collect::<Vec<_>>(),
            })
        })
        .collect();
    let passed = t.passed();
    let result = json!({
        "start": {
            "probes": t.start_probes,
            "pinned_to_zero": t.pins.iter().map(|x| element(&alg, x)).collect::<Vec<_>>(),
            "dim": t.start_dim,
        },
        "stages": stages,
        "final": {
            "dim": t.final_dim,
            "generators": t.conclusion.generators.iter().map(|g| format!("ad({})", alg.format_element(g))).collect::<Vec<_>>(),
            "spans_match": t.conclusion.spans_match,
            "readings_reconstruct": t.conclusion.readings_reconstruct,
        },
        "reconstruction": t.reconstruction,
        "passed": passed,
    });
    let (status, code) = if passed {
        ("passed", EXIT_OK)
    } else {
        ("failed", EXIT_FAILED)
    };
    report(cmd, Some(&alg), status, code, result)
}

pub fn catalog_list() -> Report {
    let entries: Vec<Value> = CATALOG_NAMES
        .iter()
        .map(|name| {
            let a = catalog(name).expect("listed names load");
            json!({
                "name": name,
                "input": format!("catalog:{name}"),
                "dim": a.dim(),
                "even_dim": a.even_dim(),
                "odd_dim": a.dim() - a.even_dim(),
                "basis": a.basis().iter().map(|b| b.name.clone()).collect::<Vec<_>>(),
            })
        })
        .collect();
    report(
        echo("catalog", None, json!({})),
        None,
        "ok",
        EXIT_OK,
        json!({ "algebras": entries }),
    )
}

/// The builtin probe file, or the lemma facts with `lemmas`.
pub fn probes_export(lemmas: bool) -> String {
    if lemmas {
        LemmaFacts::builtin().to_json()
    } else {
        builtin_probe_file().to_json()
    }
}

pub fn degree_filter(s: &str) -> Option<DegreeFilter> {
    match s {
        "0" => Some(DegreeFilter::Even),
        "1" => Some(DegreeFilter::Odd),
        "all" => Some(DegreeFilter::All),
        _ => None,
    }
}
