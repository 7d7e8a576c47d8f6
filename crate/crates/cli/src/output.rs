//! Printing results and choosing the exit code.

use std::fmt::Display;
use std::io::Write;
use std::process::ExitCode;

use serde_json::{Map, Value};

use dbr_core::report::Report;

/// Something went wrong before or during a command.
#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    /// Bad arguments or input files: exit code 2.
    pub fn input(e: impl Display) -> Self {
        Failure {
            code: 2,
            message: e.to_string(),
        }
    }

    /// A mathematical identity failed: exit code 1.
    pub fn check(e: impl Display) -> Self {
        Failure {
            code: 1,
            message: format!("check failed: {e}"),
        }
    }

    pub fn exit(self) -> ExitCode {
        eprintln!("dbr: {}", self.message);
        ExitCode::from(self.code)
    }
}

/// Rebuilds objects with their keys in sorted order.
pub fn sorted(v: &Value) -> Value {
    match v {
        Value::Object(m) => {
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            let mut out = Map::new();
            for k in keys {
                out.insert(k.clone(), sorted(&m[k]));
            }
            Value::Object(out)
        }
        Value::Array(xs) => Value::Array(xs.iter().map(sorted).collect()),
        other => other.clone(),
    }
}

fn text_lines(v: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match x {
                    Value::Object(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        text_lines(x, indent + 2, out);
                    }
                    Value::Array(xs) if xs.iter().any(Value::is_object) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        for x in xs {
                            out.push_str(&format!("{pad}  -\n"));
                            text_lines(x, indent + 4, out);
                        }
                    }
                    Value::Array(xs) if xs.iter().all(Value::is_array) && !xs.is_empty() => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        for x in xs {
                            out.push_str(&format!("{pad}  {x}\n"));
                        }
                    }
                    Value::String(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    _ => out.push_str(&format!("{pad}{k}: {x}\n")),
                }
            }
        }
        other => out.push_str(&format!("{pad}{other}\n")),
    }
}

/// Prints the result and the check summary; exit code 1 names the first
/// failing identity.
pub fn emit(value: &Value, reports: &[Report], text: Option<&str>, json: bool) -> ExitCode {
    let mut out = String::new();
    if json {
        let mut value = value.clone();
        if let (Value::Object(m), false) = (&mut value, reports.is_empty()) {
            m.insert(
                "checks".into(),
                serde_json::to_value(reports).expect("reports serialize"),
            );
        }
        out = serde_json::to_string(&sorted(&value)).expect("json");
        out.push('\n');
    } else if let Some(t) = text {
        out.push_str(t);
    } else {
        text_lines(&sorted(value), 0, &mut out);
        for r in reports {
            let status = if r.passed() { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "{status} {} ({} checks, {} failed)\n",
                r.name, r.checked, r.failed
            ));
        }
    }
    // a closed pipe is not an error worth reporting
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
    let failed: Vec<&Report> = reports.iter().filter(|r| !r.passed()).collect();
    match failed.first() {
        None => ExitCode::SUCCESS,
        Some(r) => {
            let first = r
                .failures
                .first()
                .map(String::as_str)
                .unwrap_or("no detail");
            eprintln!("dbr: check failed: {}: {first}", r.name);
            if failed.len() > 1 {
                eprintln!("dbr: {} checks failed in total", failed.len());
            }
            ExitCode::from(1)
        }
    }
}
