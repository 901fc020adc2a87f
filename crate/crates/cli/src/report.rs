use serde::Serialize;
use serde_json::{Map, Value};

use superloc::derivations::LinearMap;
use superloc::superalg::{Element, Parity, SuperAlgebra, Violation};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Debug, Clone, Serialize)]
pub struct CommandEcho {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(skip_serializing_if = "Map::is_empty")]
    pub options: Map<String, Value>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AlgebraSummary {
    pub name: String,
    pub dim: usize,
    pub even: Vec<String>,
    pub odd: Vec<String>,
}

impl AlgebraSummary {
    pub fn of(alg: &SuperAlgebra) -> Self {
        AlgebraSummary {
            name: alg.name().to_string(),
            dim: alg.dim(),
            even: names_of(alg, Parity::Even),
            odd: names_of(alg, Parity::Odd),
        }
    }
}

fn names_of(alg: &SuperAlgebra, parity: Parity) -> Vec<String> {
    alg.basis()
        .iter()
        .filter(|b| b.parity == parity)
        .map(|b| b.name.clone())
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: CommandEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraSummary>,
    pub status: &'static str,
    pub exit_code: i32,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut out = String::new();
        render(&value, 0, &mut out);
        out
    }
}

fn render(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match x {
                    Value::Object(inner) if !inner.is_empty() => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render(x, depth + 1, out);
                    }
                    Value::Array(items) if !items.is_empty() => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render(x, depth + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", scalar(x))),
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                match x {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}-\n"));
                        render(x, depth + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}- {}\n", scalar(x))),
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", scalar(v))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Object(_) => "{}".into(),
        Value::Array(_) => "[]".into(),
        other => other.to_string(),
    }
}

pub fn element(alg: &SuperAlgebra, x: &Element) -> Value {
    Value::String(alg.format_element(x))
}

/// Nonzero images of basis vectors, e.g. `{"p": "p", "z": "2*z"}`.
pub fn linear_map(alg: &SuperAlgebra, m: &LinearMap) -> Value {
    let mut out = Map::new();
    for (i, b) in alg.basis().iter().enumerate() {
        let image = m.image_of_basis(i);
        if !image.is_zero() {
            out.insert(b.name.clone(), element(alg, &image));
        }
    }
    Value::Object(out)
}

pub fn violation(alg: &SuperAlgebra, v: &Violation) -> Value {
    let name = |i: &usize| Value::String(alg.basis()[*i].name.clone());
    let mut m = Map::new();
    m.insert("kind".into(), v.kind().into());
    match v {
        Violation::Grading {
            left,
            right,
            target,
        } => {
            m.insert("left".into(), name(left));
            m.insert("right".into(), name(right));
            m.insert("target".into(), name(target));
        }
        Violation::Skew {
            left,
            right,
            residual,
        } => {
            m.insert("left".into(), name(left));
            m.insert("right".into(), name(right));
            m.insert("residual".into(), element(alg, residual));
        }
        Violation::Jacobi { x, y, z, residual } => {
            m.insert("x".into(), name(x));
            m.insert("y".into(), name(y));
            m.insert("z".into(), name(z));
            m.insert("residual".into(), element(alg, residual));
        }
    }
    Value::Object(m)
}
