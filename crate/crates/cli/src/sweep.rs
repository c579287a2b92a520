//! Parameter sweeps: rerun a task over a grid and flatten each report into
//! one CSV row.
//!
//! Columns: `param`, `value`, `passed`, then every scalar leaf of `results`
//! under its dotted path (array entries by index). Exact leaves contribute
//! a float display column `<path>` and a symbolic `<path>.exact` column;
//! toleranced leaves contribute `<path>` and `<path>.tolerance`.

use std::io::Write;

use serde_json::{Map, Value};

use crate::error::CliError;
use crate::spec::{ProblemSpec, Task};
use crate::tasks;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepParam {
    M,
    R,
    B0,
    Delta,
    T,
}

impl std::str::FromStr for SweepParam {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "m" => SweepParam::M,
            "R" | "r" => SweepParam::R,
            "B0" | "b0" => SweepParam::B0,
            "delta" => SweepParam::Delta,
            "t" => SweepParam::T,
            _ => {
                return Err(CliError::Input(format!(
                    "unknown sweep parameter {s:?}; expected m, R, B0, delta or t"
                )))
            }
        })
    }
}

impl SweepParam {
    fn name(self) -> &'static str {
        match self {
            SweepParam::M => "m",
            SweepParam::R => "R",
            SweepParam::B0 => "B0",
            SweepParam::Delta => "delta",
            SweepParam::T => "t",
        }
    }

    fn integral(self) -> bool {
        matches!(self, SweepParam::M | SweepParam::Delta)
    }
}

/// Parses `a:b:step` into the inclusive grid `a, a+step, …, ≤ b`.
pub fn parse_range(s: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, step] = parts.as_slice() else {
        return Err(CliError::Input(format!("range {s:?} is not of the form a:b:step")));
    };
    let num = |x: &str| {
        x.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| CliError::Input(format!("bad number {x:?} in range {s:?}")))
    };
    let (a, b, step) = (num(a)?, num(b)?, num(step)?);
    if step <= 0.0 || b < a {
        return Err(CliError::Input(format!("range {s:?} needs step > 0 and a <= b")));
    }
    let n = ((b - a) / step + 1e-9).floor() as usize;
    if n > 100_000 {
        return Err(CliError::Input(format!("range {s:?} has more than 100000 points")));
    }
    Ok((0..=n).map(|i| a + step * i as f64).collect())
}

/// The spec for one grid point.
pub fn apply(spec: &ProblemSpec, param: SweepParam, value: f64) -> Result<ProblemSpec, CliError> {
    if param.integral() && (value.fract() != 0.0 || value < 1.0) {
        return Err(CliError::Input(format!(
            "{} must be a positive integer, got {value}",
            param.name()
        )));
    }
    let mut out = spec.clone();
    let p = &mut out.params;
    match (param, spec.task) {
        (SweepParam::M, Task::Kernel | Task::EffectiveP) => {
            let params = out.params.clone();
            out = ProblemSpec::z_power(spec.task, value as u32);
            out.params = params;
        }
        (SweepParam::M, Task::Audit) => p.m = Some(value as u32),
        (SweepParam::R, Task::Dk | Task::Jm) => p.r_grid = Some(vec![value]),
        (SweepParam::B0, Task::Dk | Task::Ode) => p.b0 = Some(value),
        (SweepParam::B0, Task::Audit) => p.b0_list = Some(vec![value]),
        (SweepParam::Delta, Task::Jm | Task::Ode) => p.delta = Some(vec![value as u32]),
        (SweepParam::T, Task::Theta) => p.t = Some(vec![format!("{value}")]),
        _ => {
            return Err(CliError::Input(format!(
                "parameter {} does not apply to task {}",
                param.name(),
                spec.task.name()
            )))
        }
    }
    Ok(out)
}

fn float_cell(v: &Value) -> String {
    match v {
        Value::Null => "nan".into(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) if m.contains_key("coeff") && m.contains_key("pi_power") => {
            let coeff = m["coeff"].as_str().unwrap_or_default();
            let k = m["pi_power"].as_i64().unwrap_or(0);
            let display = openness::rational::parse(coeff)
                .map(|c| openness::rational::to_f64(&c) * std::f64::consts::PI.powi(k as i32))
                .unwrap_or(f64::NAN);
            out.push((prefix.to_string(), format!("{display}")));
            let sym = if k == 0 {
                coeff.to_string()
            } else {
                format!("{coeff}*pi^{k}")
            };
            out.push((key("exact"), sym));
        }
        Value::Object(m) if m.len() == 1 && m.get("infinite") == Some(&Value::Bool(true)) => {
            out.push((prefix.to_string(), "inf".into()));
            out.push((key("exact"), "+inf".into()));
        }
        Value::Object(m) if m.contains_key("value") && m.contains_key("tolerance") => {
            out.push((prefix.to_string(), float_cell(&m["value"])));
            out.push((key("tolerance"), float_cell(&m["tolerance"])));
        }
        Value::Object(m) => flatten_map(prefix, m, out),
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), item, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Null => out.push((prefix.to_string(), String::new())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn flatten_map(prefix: &str, m: &Map<String, Value>, out: &mut Vec<(String, String)>) {
    for (k, v) in m {
        let key = if prefix.is_empty() {
            k.clone()
        } else {
            format!("{prefix}.{k}")
        };
        flatten(&key, v, out);
    }
}

/// Summary of a finished sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepOutcome {
    pub rows: usize,
    pub failed_rows: usize,
}

pub fn run_sweep<W: Write>(
    spec: &ProblemSpec,
    param: SweepParam,
    grid: &[f64],
    out: W,
) -> Result<SweepOutcome, CliError> {
    let mut columns: Vec<String> = vec!["param".into(), "value".into(), "passed".into()];
    let mut rows: Vec<Vec<(String, String)>> = Vec::new();
    let mut failed_rows = 0;
    for &x in grid {
        let report = tasks::run(&apply(spec, param, x)?)?;
        if !report.passed {
            failed_rows += 1;
        }
        let mut cells = vec![
            ("param".to_string(), param.name().to_string()),
            ("value".to_string(), format!("{x}")),
            ("passed".to_string(), report.passed.to_string()),
        ];
        flatten("", &report.results, &mut cells);
        for (k, _) in &cells {
            if !columns.contains(k) {
                columns.push(k.clone());
            }
        }
        rows.push(cells);
    }
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| CliError::Io(std::io::Error::other(e));
    w.write_record(&columns).map_err(io)?;
    for cells in &rows {
        let record: Vec<&str> = columns
            .iter()
            .map(|c| cells.iter().find(|(k, _)| k == c).map_or("", |(_, v)| v.as_str()))
            .collect();
        w.write_record(&record).map_err(io)?;
    }
    w.flush()?;
    Ok(SweepOutcome {
        rows: rows.len(),
        failed_rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("1:3:1").unwrap(), vec![1.0, 2.0, 3.0]);
        assert_eq!(parse_range("0:1:0.25").unwrap().len(), 5);
        assert_eq!(parse_range("1.1:3:0.1").unwrap().len(), 20);
        for bad in ["1:2", "a:2:1", "1:2:0", "2:1:1", "0:1e9:1"] {
            assert!(parse_range(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn flatten_exact_and_measured() {
        let v = serde_json::json!({
            "k": { "coeff": "1/2", "pi_power": 1 },
            "x": { "value": 2.5, "tolerance": 0.0 },
            "rows": [{ "n": 3 }],
        });
        let mut out = Vec::new();
        flatten("", &v, &mut out);
        let get = |k: &str| out.iter().find(|(c, _)| c == k).map(|(_, v)| v.clone()).unwrap();
        assert_eq!(get("k.exact"), "1/2*pi^1");
        assert_eq!(get("k").parse::<f64>().unwrap(), std::f64::consts::FRAC_PI_2);
        assert_eq!(get("x"), "2.5");
        assert_eq!(get("rows.0.n"), "3");
    }

    #[test]
    fn parameters_apply_to_their_tasks() {
        let spec = ProblemSpec::from_json(r#"{"task":"audit"}"#).unwrap();
        assert_eq!(apply(&spec, SweepParam::M, 4.0).unwrap().params.m, Some(4));
        assert!(apply(&spec, SweepParam::T, 1.5).is_err());
        assert!(apply(&spec, SweepParam::M, 0.0).is_err());
        assert!("q".parse::<SweepParam>().is_err());
    }
}
