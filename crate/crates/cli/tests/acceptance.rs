//! End-to-end acceptance checks. Prints one `[PASS]`/`[FAIL]` line per
//! criterion and exits nonzero if any fails.

use std::fs;
use std::path::Path;
use std::process::Command;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use superloc::derivations::{derivation_space, supercommutator, LinearMap};
use superloc::format::{AlgebraFile, ProbeFile};
use superloc::localder::{builtin_probe_file, probe_closure, probe_constraint, LemmaFacts};
use superloc::{catalog, Element, Matrix, Parity, Scalar, Subspace};

const SEED: u64 = 20240611;

struct Run {
    code: i32,
    stdout: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or(Value::Null)
    }
}

fn run(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_superloc"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).expect("utf-8 output"),
    }
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 temp path")
}

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn axioms(dir: &Path) -> Outcome {
    let r = run(&["validate", "catalog:super-schrodinger"]);
    let j = r.json();
    ensure(r.code == 0, format!("validate exited {}", r.code))?;
    ensure(
        j["result"]["checked"]["jacobi_triples"] == 729,
        "expected 729 triples",
    )?;
    ensure(j["result"]["violation_count"] == 0, "violations reported")?;

    let mut file = AlgebraFile::from_algebra(&catalog("super-schrodinger").unwrap());
    let b = file
        .brackets
        .iter_mut()
        .find(|b| (b.left.as_str(), b.right.as_str()) == ("E", "F"))
        .ok_or("no [E,F] entry")?;
    b.result[0].0 = "-1".into();
    let flipped = dir.join("flipped.json");
    fs::write(&flipped, file.to_json()).unwrap();
    let r = run(&["validate", path_str(&flipped)]);
    let j = r.json();
    let jacobi = j["result"]["violations"]
        .as_array()
        .map_or(0, |v| v.iter().filter(|x| x["kind"] == "jacobi").count());
    ensure(r.code == 1 && jacobi > 0, "sign flip of [E,F] not caught")?;
    Ok(format!(
        "729 triples hold; flipped [E,F] gives {jacobi} Jacobi violations"
    ))
}

fn derivations() -> Outcome {
    let r = run(&["derivations", "catalog:super-schrodinger"]);
    let j = r.json();
    let d = &j["result"]["dims"];
    ensure(r.code == 0, format!("exit {}", r.code))?;
    ensure(
        d["total"] == 9 && d["inner"] == 8 && d["outer_quotient"] == 1,
        format!("dims {d}"),
    )?;
    let o = &j["result"]["outer_derivation"];
    for k in [
        "is_derivation",
        "is_not_inner",
        "inner_plus_span_equals_der",
        "dim_der_equals_dim_inner_plus_one",
    ] {
        ensure(o[k] == true, format!("{k} is not true"))?;
    }
    Ok(format!(
        "Der 9 (even {}, odd {}), inner 8, quotient 1",
        d["even"], d["odd"]
    ))
}

fn certification(dir: &Path) -> Outcome {
    let r = run(&[
        "local-check",
        "catalog:super-schrodinger",
        "--probes=builtin",
    ]);
    let j = r.json();
    ensure(r.code == 0, format!("exit {}", r.code))?;
    ensure(j["result"]["verdict"] == "certified", "not certified")?;
    ensure(
        j["result"]["dim_closure"] == 9 && j["result"]["dim_der"] == 9,
        "dims differ from 9",
    )?;
    let z = dir.join("z.json");
    fs::write(&z, r#"{"probes":[{"z":"1"}]}"#).unwrap();
    let r = run(&[
        "local-check",
        "catalog:super-schrodinger",
        &format!("--probes={}", path_str(&z)),
        "--refute-trials=5",
    ]);
    ensure(r.code == 2, format!("single probe z exited {}", r.code))?;
    Ok("closure 9 = Der 9; probe set {z} is inconclusive (exit 2)".into())
}

const REPLAY_LABELS: [&str; 20] = [
    "Δ(h) = 0",
    "Δ(z) = 0",
    "b_{f,e} = 0",
    "b_{e,f} = 0",
    "b_{F,p} = 0",
    "b_{E,q} = 0",
    "b_{p,f} = b_{q,e}",
    "b_{G,E} = b_{G,F}",
    "b_{F,E} = b_{F,G}",
    "b_{E,F} = b_{E,G}",
    "b_{q,e} = 0",
    "b_{h,e} = b_{h,f}",
    "b_{F,E} = 0",
    "b_{E,F} = 0",
    "b_{E,E} = 0",
    "b_{F,F} = 0",
    "b_{h,F} = b_{h,e}",
    "b_{h,E} = b_{h,e}",
    "b_{G,G} = b_{G,E}",
    "λ_G = 0",
];

fn assertions(j: &Value) -> Vec<(String, bool)> {
    j["result"]["stages"]
        .as_array()
        .into_iter()
        .flatten()
        .flat_map(|st| st["assertions"].as_array().cloned().unwrap_or_default())
        .map(|a| {
            (
                a["label"].as_str().unwrap_or("").to_string(),
                a["holds"] == true,
            )
        })
        .collect()
}

fn replay() -> Outcome {
    let r = run(&["replay", "catalog:super-schrodinger"]);
    let j = r.json();
    ensure(r.code == 0, format!("exit {}", r.code))?;
    let got = assertions(&j);
    for label in REPLAY_LABELS {
        ensure(
            got.iter().any(|(l, ok)| l == label && *ok),
            format!("`{label}` missing or failing"),
        )?;
    }
    ensure(got.iter().all(|(_, ok)| *ok), "some assertion fails")?;
    let f = &j["result"]["final"];
    ensure(f["dim"] == 2, "final space is not 2-dimensional")?;
    ensure(
        f["generators"] == serde_json::json!(["ad(h)", "ad(G)"]) && f["spans_match"] == true,
        "final space is not span{ad(h), ad(G)}",
    )?;
    ensure(
        f["readings_reconstruct"] == true,
        "readings do not reconstruct",
    )?;
    let rec = j["result"]["reconstruction"].as_str().unwrap_or("");
    ensure(
        rec == "∇ = D_{h+z} + ad(b_{h,e}*h + b_{G,E}*G)",
        format!("reconstruction `{rec}`"),
    )?;
    let other = run(&["replay", "catalog:osp12"]);
    ensure(
        other.code == 3,
        "replay on another algebra should be an input error",
    )?;
    Ok(format!(
        "{} assertions hold; final space span{{ad(h), ad(G)}}; {rec}",
        got.len()
    ))
}

fn random_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::ratio(rng.random_range(-4..=4), rng.random_range(1..=3)).unwrap()
}

fn random_matrix(rng: &mut ChaCha8Rng) -> Matrix {
    let rows = rng.random_range(1..=6);
    let cols = rng.random_range(1..=6);
    let data = (0..rows * cols)
        .map(|_| {
            if rng.random_bool(0.4) {
                Scalar::zero()
            } else {
                random_scalar(rng)
            }
        })
        .collect();
    Matrix::new(rows, cols, data).unwrap()
}

fn random_subspace(rng: &mut ChaCha8Rng, ambient: usize) -> Subspace {
    let k = rng.random_range(0..=ambient);
    let vs: Vec<Vec<Scalar>> = (0..k)
        .map(|_| {
            (0..ambient)
                .map(|_| {
                    if rng.random_bool(0.5) {
                        Scalar::zero()
                    } else {
                        random_scalar(rng)
                    }
                })
                .collect()
        })
        .collect();
    Subspace::span(ambient, vs).unwrap()
}

fn combination(maps: &[LinearMap], rng: &mut ChaCha8Rng) -> LinearMap {
    let terms: Vec<(Scalar, &LinearMap)> = maps.iter().map(|m| (random_scalar(rng), m)).collect();
    LinearMap::linear_combination(9, &terms)
}

fn without_probe(facts: &mut LemmaFacts, names: &[(&str, &str)]) {
    for st in &mut facts.stages {
        st.probes.retain(|p| {
            p.len() != names.len()
                || !names
                    .iter()
                    .all(|(k, v)| p.get(*k).map(String::as_str) == Some(*v))
        });
    }
}

fn properties(dir: &Path) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for t in 0..500 {
        let m = random_matrix(&mut rng);
        ensure(
            m.rank() + m.nullspace().dim() == m.cols(),
            format!("rank-nullity fails on matrix {t}"),
        )?;
        let n = rng.random_range(1..=5);
        let (u, w) = (random_subspace(&mut rng, n), random_subspace(&mut rng, n));
        let lhs = u.sum(&w).unwrap().dim() + u.intersect(&w).unwrap().dim();
        ensure(
            lhs == u.dim() + w.dim(),
            format!("dimension law fails on pair {t}"),
        )?;
    }

    let alg = catalog("super-schrodinger").unwrap();
    let der = derivation_space(&alg).unwrap();
    let probes: Vec<Element> = builtin_probe_file().to_elements(&alg).unwrap();
    let constraints: Vec<Subspace> = probes.iter().map(|x| probe_constraint(&der, x)).collect();
    let closure = probe_closure(&der, &probes);
    let maps = der.maps();
    for t in 0..100 {
        let d = combination(&maps, &mut rng).to_vec();
        for (k, c) in constraints.iter().enumerate() {
            ensure(
                c.contains(&d).unwrap(),
                format!("derivation {t} violates probe {k}"),
            )?;
        }
        ensure(
            closure.contains(&d).unwrap(),
            format!("derivation {t} outside closure"),
        )?;
    }

    let parts = [
        (der.even_maps(), Parity::Even),
        (der.odd_maps(), Parity::Odd),
    ];
    for t in 0..100 {
        let (ma, pa) = &parts[rng.random_range(0..2)];
        let (mb, pb) = &parts[rng.random_range(0..2)];
        let a = combination(ma, &mut rng).declare(&alg, *pa).unwrap();
        let b = combination(mb, &mut rng).declare(&alg, *pb).unwrap();
        let c = supercommutator(&a, &b).unwrap();
        ensure(
            der.contains(&c).unwrap(),
            format!("supercommutator {t} leaves Der"),
        )?;
    }

    for t in 0..20 {
        let mut shuffled = probes.clone();
        shuffled.shuffle(&mut rng);
        ensure(
            probe_closure(&der, &shuffled) == closure,
            format!("permutation {t} changes the closure"),
        )?;
    }
    let mut shuffled = probes.clone();
    shuffled.shuffle(&mut rng);
    let pf = dir.join("shuffled.json");
    fs::write(&pf, ProbeFile::from_elements(&alg, &shuffled).to_json()).unwrap();
    let r = run(&[
        "local-check",
        "catalog:super-schrodinger",
        &format!("--probes={}", path_str(&pf)),
    ]);
    ensure(
        r.code == 0 && r.json()["result"]["dim_closure"] == 9,
        "shuffled probe file not certified",
    )?;

    let mut facts = LemmaFacts::builtin();
    without_probe(
        &mut facts,
        &[("e", "1"), ("f", "1"), ("E", "1"), ("F", "1")],
    );
    let ff = dir.join("ablated.json");
    fs::write(&ff, facts.to_json()).unwrap();
    let r = run(&[
        "replay",
        "catalog:super-schrodinger",
        &format!("--facts={}", path_str(&ff)),
    ]);
    let failing: Vec<String> = assertions(&r.json())
        .into_iter()
        .filter(|(_, ok)| !ok)
        .map(|(l, _)| l)
        .collect();
    ensure(r.code == 1, format!("ablated replay exited {}", r.code))?;
    ensure(
        failing.first().map(String::as_str) == Some("b_{q,e} = 0"),
        format!("ablation fails first at {failing:?}"),
    )?;
    Ok("500 matrix/subspace pairs, 100 derivations x 37 probes, 100 supercommutators, 20 permutations, ablation breaks b_{q,e} = 0".into())
}

fn determinism(dir: &Path) -> Outcome {
    let z = dir.join("z-det.json");
    fs::write(&z, r#"{"probes":[{"z":"1"},{"h":"1"}]}"#).unwrap();
    let zp = format!("--probes={}", path_str(&z));
    let commands: Vec<Vec<&str>> = vec![
        vec!["validate", "catalog:super-schrodinger"],
        vec!["derivations", "catalog:super-schrodinger"],
        vec![
            "derivations",
            "catalog:osp12",
            "--degree=1",
            "--format=text",
        ],
        vec![
            "local-check",
            "catalog:super-schrodinger",
            "--probes=builtin",
        ],
        vec![
            "local-check",
            "catalog:super-schrodinger",
            &zp,
            "--refute-trials=20",
            "--seed=7",
        ],
        vec!["replay", "catalog:super-schrodinger"],
        vec!["catalog"],
        vec!["probes", "export"],
        vec!["probes", "export", "--lemmas"],
    ];
    for args in &commands {
        let a = run(args);
        let b = run(args);
        ensure(
            a.stdout == b.stdout && a.code == b.code,
            format!("`{}` differs between runs", args.join(" ")),
        )?;
        let mut seq = vec!["--sequential"];
        seq.extend(args.iter());
        let c = run(&seq);
        ensure(
            a.stdout == c.stdout,
            format!("`{}` differs under --sequential", args.join(" ")),
        )?;
    }
    Ok(format!(
        "{} commands byte-identical across runs and strategies",
        commands.len()
    ))
}

fn main() {
    let dir = tempfile::tempdir().expect("temp dir");
    let d = dir.path();
    let criteria: Vec<Criterion> = vec![
        ("1 axiom validation", Box::new(|| axioms(d))),
        ("2 derivation algebra", Box::new(derivations)),
        (
            "3 local derivations certified",
            Box::new(|| certification(d)),
        ),
        ("4 argument replay", Box::new(replay)),
        ("5 property suites", Box::new(|| properties(d))),
        ("6 determinism", Box::new(|| determinism(d))),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        match check() {
            Ok(detail) => println!("[PASS] {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {name}: {why}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
