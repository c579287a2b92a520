//! Cut-off functions, the smooth weight family, the two ODE witnesses and
//! their constant factors, and the summation chain behind the threshold
//! inequality.

mod chain;
pub mod mollifier;
mod ode;

pub use chain::{chain_audit, chain_identity, ChainAuditReport, ChainRow};
pub use ode::{delta_residuals, delta_witness, plain_residuals, plain_witness, OdeReport, OdeWitness};

use crate::error::{Error, Result};

fn check_t0_b0(t0: f64, b0: f64) -> Result<()> {
    if !(t0 > 0.0) || !t0.is_finite() {
        return Err(Error::domain(format!("t0 must be positive, got {t0}")));
    }
    if !(b0 > 0.0 && b0 <= 1.0) {
        return Err(Error::domain(format!("B0 must lie in (0, 1], got {b0}")));
    }
    Ok(())
}

/// `b_{t0}(t) = ∫_{−∞}^t (1/B0) 1{−t0−B0 < s < −t0} ds`.
pub fn b_eval(t: f64, t0: f64, b0: f64) -> Result<f64> {
    check_t0_b0(t0, b0)?;
    Ok(((t + t0 + b0) / b0).clamp(0.0, 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightFamilyParams {
    pub t0: f64,
    pub b0: f64,
    pub epsilon: f64,
}

impl WeightFamilyParams {
    pub fn new(t0: f64, b0: f64, epsilon: f64) -> Result<Self> {
        check_t0_b0(t0, b0)?;
        if !(epsilon > 0.0 && epsilon < b0 / 8.0) {
            return Err(Error::domain(format!("epsilon must lie in (0, B0/8), got {epsilon}")));
        }
        Ok(WeightFamilyParams { t0, b0, epsilon })
    }

    /// `[L, U] = [−t0−B0+2ε, −t0−2ε]`, the interval that gets mollified.
    pub fn plateau(&self) -> (f64, f64) {
        (-self.t0 - self.b0 + 2.0 * self.epsilon, -self.t0 - 2.0 * self.epsilon)
    }

    /// Half-width `ε/4` of the mollifier.
    pub fn radius(&self) -> f64 {
        self.epsilon / 4.0
    }

    /// `sup v″ = 1/(B0 − 4ε)`.
    pub fn sup_v2(&self) -> f64 {
        1.0 / (self.b0 - 4.0 * self.epsilon)
    }
}

/// `(v, v′, v″)` of the smooth weight at `t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightValue {
    pub v: f64,
    pub v1: f64,
    pub v2: f64,
}

/// `v″ = (1/(B0−4ε)) 1_{[L,U]} * ρ_{ε/4}` with `ρ` the normalized smooth bump,
/// integrated twice and normalized so that `v(t) = t` for `t ≥ −t0−ε`.
///
/// The factor `1/(B0−4ε)` (rather than `1/((1−4ε)B0)`) makes `v′` rise from
/// exactly 0 to exactly 1 for every `B0`.
pub fn weight_family_eval(t: f64, params: &WeightFamilyParams) -> Result<WeightValue> {
    let p = WeightFamilyParams::new(params.t0, params.b0, params.epsilon)?;
    let (l, u) = p.plateau();
    let h = p.radius();
    let scale = p.sup_v2();
    let (xl, xu) = ((t - l) / h, (t - u) / h);
    let v2 = scale * (mollifier::cdf(xl) - mollifier::cdf(xu));
    let v1 = scale * h * (mollifier::cdf_integral(xl) - mollifier::cdf_integral(xu));
    let v = scale * h * h * (mollifier::cdf_double_integral(xl) - mollifier::cdf_double_integral(xu)) + 0.5 * (l + u);
    Ok(WeightValue {
        v,
        v1: v1.clamp(0.0, 1.0),
        v2: v2.max(0.0),
    })
}

/// `1 − e^{−(t0+B0)}`.
pub fn a_factor(t0: f64, b0: f64) -> Result<f64> {
    check_t0_b0(t0, b0)?;
    Ok(-(-(t0 + b0)).exp_m1())
}

/// `1 + 1/δ`.
pub fn a_factor_jm(delta: u32) -> Result<f64> {
    if delta < 1 {
        return Err(Error::domain("delta must be a positive integer"));
    }
    Ok(1.0 + 1.0 / f64::from(delta))
}

/// `max (1 − e^{−t})` over `n` evenly spaced points of `[t0, t0+B0]`.
pub fn a_factor_sampled(t0: f64, b0: f64, n: usize) -> Result<f64> {
    check_t0_b0(t0, b0)?;
    let n = n.max(2);
    Ok((0..n)
        .map(|i| t0 + b0 * i as f64 / (n - 1) as f64)
        .map(|t| -(-t).exp_m1())
        .fold(f64::NEG_INFINITY, f64::max))
}

/// `max (1 + 1/δ − e^{−t})` over `n` evenly spaced points of `[t0, t0 + 60]`.
pub fn a_factor_jm_sampled(delta: u32, t0: f64, n: usize) -> Result<f64> {
    let k = a_factor_jm(delta)?;
    if !(t0 >= 0.0) {
        return Err(Error::domain("t0 must be nonnegative"));
    }
    let n = n.max(2);
    Ok((0..n)
        .map(|i| t0 + 60.0 * i as f64 / (n - 1) as f64)
        .map(|t| k - (-t).exp())
        .fold(f64::NEG_INFINITY, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn b_plateaus() {
        let (t0, b0) = (2.0, 0.5);
        assert_eq!(b_eval(-t0 - b0, t0, b0).unwrap(), 0.0);
        assert_eq!(b_eval(-t0, t0, b0).unwrap(), 1.0);
        assert_relative_eq!(b_eval(-t0 - b0 / 2.0, t0, b0).unwrap(), 0.5);
        assert_eq!(b_eval(-100.0, t0, b0).unwrap(), 0.0);
        assert!(b_eval(0.0, 0.0, b0).is_err());
    }

    #[test]
    fn family_plateaus() {
        let p = WeightFamilyParams::new(1.0, 0.5, 0.05).unwrap();
        let w = weight_family_eval(0.0, &p).unwrap();
        assert!(w.v.abs() < 1e-12 && (w.v1 - 1.0).abs() < 1e-12 && w.v2 == 0.0);
        let w = weight_family_eval(-1.0 - p.epsilon, &p).unwrap();
        assert!((w.v - (-1.0 - p.epsilon)).abs() < 1e-12);
        let w = weight_family_eval(-1.5, &p).unwrap();
        assert!(w.v1 == 0.0 && w.v2 == 0.0);
        let below = weight_family_eval(-1.5 + p.epsilon - 1e-9, &p).unwrap();
        let far = weight_family_eval(-40.0, &p).unwrap();
        assert_eq!(below.v, far.v);
        assert!(WeightFamilyParams::new(1.0, 0.5, 0.0625).is_err());
    }

    #[test]
    fn family_converges_to_indicator() {
        let (t0, b0) = (1.0, 0.8);
        let t = -t0 - 0.3;
        let vals: Vec<f64> = [16.0, 32.0, 64.0]
            .iter()
            .map(|k| {
                weight_family_eval(t, &WeightFamilyParams::new(t0, b0, b0 / k).unwrap())
                    .unwrap()
                    .v2
            })
            .collect();
        assert!(vals.windows(2).all(|w| w[1] < w[0]));
        assert!(vals.iter().all(|v| *v > 1.0 / b0));
        assert_relative_eq!(vals[2], 1.0 / (b0 * (1.0 - 4.0 / 64.0)), max_relative = 1e-12);
    }

    #[test]
    fn factors() {
        assert_relative_eq!(a_factor(1.0, 1.0).unwrap(), 1.0 - (-2.0f64).exp());
        assert!((a_factor(1.0, 1.0).unwrap() - 0.8647).abs() < 1e-4);
        assert!((1.0 - a_factor(60.0, 1.0).unwrap()) < 1e-26);
        assert_eq!(a_factor_jm(1).unwrap(), 2.0);
        assert_relative_eq!(a_factor_jm(10).unwrap(), 1.1);
        assert!(a_factor_jm(0).is_err());
        assert!((a_factor_sampled(0.7, 0.3, 10_000).unwrap() - a_factor(0.7, 0.3).unwrap()).abs() < 1e-12);
        assert!((a_factor_jm_sampled(3, 0.0, 10_000).unwrap() - a_factor_jm(3).unwrap()).abs() < 1e-12);
    }
}
