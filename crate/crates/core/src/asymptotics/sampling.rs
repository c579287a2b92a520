use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::montecarlo::{integrate, McConfig, McEstimate, Proposal};
use crate::rational::{self, Rational};
use crate::toric::{weighted_norm_sq, Coefficient, MonomialWeight, PolyFunction};

/// Monte Carlo `μ({w < −R} ∩ Δ^n)` for a weight given pointwise.
///
/// Radial coordinates are drawn with rate `min(1, n/max(R, n))` so that
/// roughly half of the mass of the proposal sits where `Σ t_j ≈ R`.
pub fn mc_sublevel<W>(n: usize, weight: W, r: f64, config: &McConfig) -> Result<McEstimate>
where
    W: Fn(&[Complex64]) -> f64 + Sync,
{
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::domain(format!("R must be finite and nonnegative, got {r}")));
    }
    let nf = n as f64;
    let rate = (nf / r.max(nf)).min(1.0);
    let (mean, std_error) = integrate(n, &Proposal::Exponential(vec![rate; n]), config, |_, z| {
        if weight(z) < -r {
            1.0
        } else {
            0.0
        }
    })?;
    Ok(McEstimate {
        mean,
        std_error,
        samples: config.samples,
        divergent: false,
        truncated_growth: vec![],
    })
}

/// The weights `φ_{θ,δ} = 2δ log|z1 cos θ + z2 sin θ|` against `F = z1`.
#[derive(Clone, Debug, PartialEq)]
pub struct LineFamilyReport {
    pub theta: f64,
    pub delta: f64,
    /// `∫_{Δ²} |z1|² e^{−φ_{θ,δ}}`.
    pub estimate: McEstimate,
    pub bound: f64,
    /// `estimate + 4σ < 2π²`.
    pub below_bound: bool,
    /// `θ = 0` value `π²/(2 − δ)`.
    pub theta_zero_value: f64,
    /// `|z1|² e^{−φ/δ}` fails to be integrable (exact gate).
    pub divergent_at_inverse_delta: bool,
    /// `|z1|² e^{−φ}` is integrable (exact gate).
    pub convergent_at_one: bool,
}

/// In coordinates `w1 = z1 cos θ + z2 sin θ`, `w2 = −z1 sin θ + z2 cos θ`
/// the weight is `δ log|w1|²` and `z1 = w1 cos θ − w2 sin θ`. The line
/// `{w1 = 0}` meets the polydisc in a disc along which the local picture is
/// the same as at the origin, so integrability is the toric criterion for
/// the support of `z1` in `w`-coordinates.
fn rotated_gate(theta: f64, delta: &Rational, p: &Rational) -> Result<bool> {
    let mut f = PolyFunction::zero(2);
    if theta.cos() != 0.0 {
        f.add_term([1, 0].into(), Coefficient::one())?;
    }
    if theta.sin() != 0.0 {
        f.add_term([0, 1].into(), Coefficient::one())?;
    }
    let a = MonomialWeight::new(vec![delta.clone(), Rational::from_integer(0.into())])?;
    Ok(weighted_norm_sq(&f, &a, p)?.is_finite())
}

pub fn line_family_report(theta: f64, delta: f64, config: &McConfig) -> Result<LineFamilyReport> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::domain(format!("delta must lie in (0, 1), got {delta}")));
    }
    if !theta.is_finite() {
        return Err(Error::domain("theta must be finite"));
    }
    let (c, s) = (theta.cos(), theta.sin());
    let dq = rational::from_f64(delta)?;
    let (mean, std_error) = integrate(2, &Proposal::Exponential(vec![1.0, 1.0]), config, |_, z| {
        let l = (z[0] * c + z[1] * s).norm_sqr();
        if l == 0.0 {
            0.0
        } else {
            z[0].norm_sqr() * l.powf(-delta)
        }
    })?;
    let estimate = McEstimate {
        mean,
        std_error,
        samples: config.samples,
        divergent: false,
        truncated_growth: vec![],
    };
    let bound = 2.0 * PI * PI;
    Ok(LineFamilyReport {
        theta,
        delta,
        below_bound: mean + 4.0 * std_error < bound,
        estimate,
        bound,
        theta_zero_value: PI * PI / (2.0 - delta),
        divergent_at_inverse_delta: !rotated_gate(theta, &dq, &dq.recip())?,
        convergent_at_one: rotated_gate(theta, &dq, &rational::int(1))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn disc_sublevel() {
        let cfg = McConfig::new(100_000, 17);
        let est = mc_sublevel(1, |z| z[0].norm_sqr().ln(), 1.0, &cfg).unwrap();
        assert!((est.mean - PI * (-1.0f64).exp()).abs() <= 3.0 * est.std_error);
        let est = mc_sublevel(2, |z| z[0].norm_sqr().ln() + z[1].norm_sqr().ln(), 0.0, &cfg).unwrap();
        assert_relative_eq!(est.mean, PI * PI, max_relative = 1e-12);
    }

    #[test]
    fn line_family_example() {
        let rep = line_family_report(0.05, 0.5, &McConfig::new(100_000, 2)).unwrap();
        assert!(rep.below_bound, "{rep:?}");
        assert!(rep.divergent_at_inverse_delta && rep.convergent_at_one);
        assert!((rep.estimate.mean - rep.theta_zero_value).abs() < 0.1 * rep.theta_zero_value);
        assert!(line_family_report(0.05, 1.0, &McConfig::new(1000, 2)).is_err());
    }
}
