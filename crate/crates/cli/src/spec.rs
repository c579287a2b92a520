//! Problem descriptions read from JSON.

use openness::rational::{self, Rational};
use openness::toric::{Coefficient, ExponentVector, MonomialWeight, PolyFunction};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Theta,
    Kernel,
    EffectiveP,
    Dk,
    Jm,
    Ode,
    Audit,
    VerifyAll,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Theta => "theta",
            Task::Kernel => "kernel",
            Task::EffectiveP => "effective-p",
            Task::Dk => "dk",
            Task::Jm => "jm",
            Task::Ode => "ode",
            Task::Audit => "audit",
            Task::VerifyAll => "verify-all",
        }
    }

    /// Whether the task reads `weight` and `f`.
    pub fn needs_function(self) -> bool {
        matches!(self, Task::Kernel | Task::EffectiveP | Task::Dk | Task::Jm)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteName {
    Fast,
    Full,
}

/// One term `(re + i·im)·√radicand · z^alpha`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub alpha: Vec<u32>,
    #[serde(default = "one")]
    pub re: String,
    #[serde(default = "zero")]
    pub im: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radicand: Option<String>,
}

fn one() -> String {
    "1".into()
}

fn zero() -> String {
    "0".into()
}

/// Task parameters. Each task reads the ones it needs and ignores the rest.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// Points for `theta`, as rational strings.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Vec<String>>,
    /// Ratios to invert for `theta`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b0_list: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suite: Option<SuiteName>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub task: Task,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub weight: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub f: Vec<TermSpec>,
    #[serde(default)]
    pub params: Params,
}

/// `weight` and `f` parsed into exact objects.
#[derive(Clone, Debug)]
pub struct Problem {
    pub weight: MonomialWeight,
    pub f: PolyFunction,
}

fn parse_rational(s: &str, field: &str) -> Result<Rational, CliError> {
    rational::parse(s).map_err(|e| CliError::Input(format!("{field}: {e}")))
}

impl ProblemSpec {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text)
            .map_err(|e| CliError::Input(format!("line {}, column {}: {e}", e.line(), e.column())))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn problem(&self) -> Result<Problem, CliError> {
        if self.weight.is_empty() {
            return Err(CliError::Input(format!("task {} needs a weight", self.task.name())));
        }
        let a = self
            .weight
            .iter()
            .enumerate()
            .map(|(i, s)| parse_rational(s, &format!("weight[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let n = a.len();
        let weight = MonomialWeight::new(a).map_err(|e| CliError::Input(format!("weight: {e}")))?;
        let terms: &[TermSpec] = &self.f;
        let mut f = PolyFunction::zero(n);
        if terms.is_empty() {
            f = PolyFunction::one(n);
        }
        for (i, term) in terms.iter().enumerate() {
            if term.alpha.len() != n {
                return Err(CliError::Input(format!(
                    "f[{i}].alpha has {} entries but the weight has {n}",
                    term.alpha.len()
                )));
            }
            let re = parse_rational(&term.re, &format!("f[{i}].re"))?;
            let im = parse_rational(&term.im, &format!("f[{i}].im"))?;
            let c = match &term.radicand {
                Some(r) => {
                    let r = parse_rational(r, &format!("f[{i}].radicand"))?;
                    Coefficient::with_radicand(re, im, r).map_err(|e| CliError::Input(format!("f[{i}]: {e}")))?
                }
                None => Coefficient::new(re, im),
            };
            let alpha = ExponentVector::new(term.alpha.clone()).map_err(|e| CliError::Input(format!("f[{i}]: {e}")))?;
            f.add_term(alpha, c)
                .map_err(|e| CliError::Input(format!("f[{i}]: {e}")))?;
        }
        Ok(Problem { weight, f })
    }

    /// The `z^m`, `a = (m)` family member.
    pub fn z_power(task: Task, m: u32) -> Self {
        ProblemSpec {
            task,
            weight: vec![m.to_string()],
            f: vec![TermSpec {
                alpha: vec![m],
                re: one(),
                im: zero(),
                radicand: None,
            }],
            params: Params::default(),
        }
    }
}
