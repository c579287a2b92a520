//! Report layout. Exact values are `{"coeff": "p/q", "pi_power": k}` (or
//! `{"infinite": true}`); every float is `{"value": x, "tolerance": e}` where
//! `e` bounds the absolute error of `x`.

use openness::rational::{self, Rational};
use openness::toric::{ExtRational, PiScaled};
use openness::verify::Discrepancy;
use serde::Serialize;
use serde_json::{json, Value};

use crate::spec::ProblemSpec;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscrepancyNote {
    pub quantity: String,
    pub reference: String,
    pub computed: String,
    pub note: String,
}

impl From<&Discrepancy> for DiscrepancyNote {
    fn from(d: &Discrepancy) -> Self {
        DiscrepancyNote {
            quantity: d.quantity.into(),
            reference: d.reference.into(),
            computed: d.computed.into(),
            note: d.note.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub task: String,
    pub spec: ProblemSpec,
    pub results: Value,
    pub checks: Vec<Check>,
    pub discrepancies: Vec<DiscrepancyNote>,
    pub passed: bool,
}

impl Report {
    pub fn new(spec: &ProblemSpec, results: Value, checks: Vec<Check>, discrepancies: Vec<DiscrepancyNote>) -> Self {
        Report {
            task: spec.task.name().into(),
            spec: spec.clone(),
            results,
            passed: checks.iter().all(|c| c.passed),
            checks,
            discrepancies,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn exact(v: &PiScaled) -> Value {
    match v {
        PiScaled::Infinite => json!({ "infinite": true }),
        PiScaled::Finite { coeff, pi_power } => json!({ "coeff": rational::render(coeff), "pi_power": pi_power }),
    }
}

pub fn exact_rational(r: &Rational) -> Value {
    json!({ "coeff": rational::render(r), "pi_power": 0 })
}

pub fn exact_ext(r: &ExtRational) -> Value {
    match r {
        ExtRational::Finite(r) => exact_rational(r),
        ExtRational::Infinite => json!({ "infinite": true }),
    }
}

/// A float with an absolute error bound. Non-finite values become `null`.
pub fn measured(value: f64, tolerance: f64) -> Value {
    json!({ "value": finite_or_null(value), "tolerance": finite_or_null(tolerance) })
}

/// A float computed by a closed form to within a few ulps.
pub fn closed(value: f64) -> Value {
    closed_scaled(value, value)
}

/// A closed-form difference; its error is relative to the size of the
/// compared quantities, not of the difference.
pub fn closed_scaled(value: f64, scale: f64) -> Value {
    measured(value, 1e-13 * scale.abs())
}

fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}
