//! Sublevel and band volumes of monomial weights and the lower-bound
//! reports built on them.
//!
//! With `t_j = −log|z_j|²`, `{φ < −R} ∩ Δ^n` is `{Σ a_j t_j > R}` and the
//! measure is `π^n Π e^{−t_j} dt_j`, so volumes are `π^n P(Σ a_j E_j > R)` for
//! independent unit exponentials `E_j`.

mod dk;
mod jm;
mod sampling;

pub use dk::{dk_asymptote_report, DkReport};
pub use jm::{
    cone_integral, cone_integral_quadrature, jm_asymptote_report, jm_lhs_mc, piecewise_cones, Cone, DeltaRow, JmReport,
};
pub use sampling::{line_family_report, mc_sublevel, LineFamilyReport};

use crate::error::{Error, Result};
use crate::montecarlo::McConfig;
use crate::rational;
use crate::toric::{MonomialWeight, PiScaled, PolyFunction};

/// Relative spread below which two rates are treated as coincident.
const NEAR_EQUAL: f64 = 1e-4;

/// `e^{sR} · P(Σ c_j E_j > R)` for `R ≥ 0` and at most two nonzero `c_j`
/// (of either sign). Exponents are combined before exponentiating so large
/// `R` neither underflows nor loses the exact value when `s = 1/c`.
pub fn scaled_tail(c: &[f64], r: f64, s: f64) -> Result<f64> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::domain(format!("R must be finite and nonnegative, got {r}")));
    }
    let mut nz: Vec<f64> = c.iter().copied().filter(|&x| x != 0.0).collect();
    nz.sort_by(|x, y| y.total_cmp(x));
    let e = |ci: f64| ((s - 1.0 / ci) * r).exp();
    match nz.as_slice() {
        [] => Ok(0.0),
        &[c1] => Ok(if c1 > 0.0 { e(c1) } else { 0.0 }),
        &[c1, c2] if c2 > 0.0 => {
            let m = 0.5 * (c1 + c2);
            let h = 0.5 * (c1 - c2);
            if h <= NEAR_EQUAL * m {
                // divided difference of c ↦ c e^{−R/c} expanded at the midpoint
                let g = e(m);
                Ok(g * (1.0 + r / m) + g * r * r * (r - 3.0 * m) / m.powi(5) * h * h / 6.0)
            } else {
                Ok((c1 * e(c1) - c2 * e(c2)) / (c1 - c2))
            }
        }
        &[c1, c2] if c1 > 0.0 => Ok(c1 / (c1 - c2) * e(c1)),
        [_, _] => Ok(0.0),
        _ => Err(Error::Unsupported(
            "closed-form tail only for up to two nonzero coefficients".into(),
        )),
    }
}

/// `P(Σ c_j E_j > R)`.
pub fn tail_probability(c: &[f64], r: f64) -> Result<f64> {
    scaled_tail(c, r, 0.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VolumeMethod {
    ClosedForm,
    MonteCarlo,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SublevelVolume {
    pub value: f64,
    /// Present for Monte Carlo values.
    pub std_error: Option<f64>,
    /// Present when the value is an exact multiple of a power of π.
    pub exact: Option<PiScaled>,
    pub method: VolumeMethod,
}

fn nonzero_count(a: &MonomialWeight) -> usize {
    a.coeffs().iter().filter(|x| !num_traits::Zero::is_zero(*x)).count()
}

fn check_weight(a: &MonomialWeight) -> Result<()> {
    if a.is_zero() {
        return Err(Error::domain("weight is identically zero; sublevel sets are empty"));
    }
    Ok(())
}

/// `e^{sR} μ({φ < −R} ∩ Δ^n)`, closed form only.
pub fn scaled_sublevel(a: &MonomialWeight, r: f64, s: f64) -> Result<f64> {
    check_weight(a)?;
    let pi_n = std::f64::consts::PI.powi(a.dim() as i32);
    Ok(pi_n * scaled_tail(&a.to_f64(), r, s)?)
}

/// Default sampler used when no closed form is available.
pub fn default_mc_config() -> McConfig {
    McConfig::new(100_000, 0)
}

/// `μ({φ < −R} ∩ Δ^n)`. Closed form when at most two `a_j` are nonzero,
/// Monte Carlo with [`default_mc_config`] otherwise.
pub fn sublevel_volume(a: &MonomialWeight, r: f64) -> Result<SublevelVolume> {
    check_weight(a)?;
    if !(r >= 0.0) {
        return Err(Error::domain(format!("R must be nonnegative, got {r}")));
    }
    if nonzero_count(a) > 2 {
        return sublevel_volume_mc(a, r, &default_mc_config());
    }
    let exact = (r == 0.0).then(|| PiScaled::pi_pow(a.dim() as i32));
    Ok(SublevelVolume {
        value: scaled_sublevel(a, r, 0.0)?,
        std_error: None,
        exact,
        method: VolumeMethod::ClosedForm,
    })
}

pub fn sublevel_volume_mc(a: &MonomialWeight, r: f64, config: &McConfig) -> Result<SublevelVolume> {
    check_weight(a)?;
    let af = a.to_f64();
    let est = mc_sublevel(a.dim(), move |z| weight_value(&af, z), r, config)?;
    Ok(SublevelVolume {
        value: est.mean,
        std_error: Some(est.std_error),
        exact: None,
        method: VolumeMethod::MonteCarlo,
    })
}

fn weight_value(a: &[f64], z: &[num_complex::Complex64]) -> f64 {
    a.iter()
        .zip(z)
        .filter(|(aj, _)| **aj != 0.0)
        .map(|(aj, zj)| aj * zj.norm_sqr().ln())
        .sum()
}

fn check_b0(b0: f64) -> Result<()> {
    if !(b0 > 0.0 && b0 <= 1.0) {
        return Err(Error::domain(format!("B0 must lie in (0, 1], got {b0}")));
    }
    Ok(())
}

/// `μ({−(R+B0) < φ < −R})`.
pub fn band_volume(a: &MonomialWeight, r: f64, b0: f64) -> Result<f64> {
    check_b0(b0)?;
    check_weight(a)?;
    if nonzero_count(a) > 2 {
        return Err(Error::Unsupported(
            "band volumes need at most two nonzero weight coefficients".into(),
        ));
    }
    let v = scaled_sublevel(a, r, 0.0)? - scaled_sublevel(a, r + b0, 0.0)?;
    Ok(v.max(0.0))
}

/// `e^{sR} ∫ 1{−(R+B0) < φ < −R} |F|² dλ`.
///
/// The band is a Reinhardt domain, so the monomials of `F` stay orthogonal and
/// each contributes `|c_α|² π^n/Π(α_j+1) · P(R < Σ a_j E_j/(α_j+1) < R+B0)`.
pub fn scaled_band_integral(f: &PolyFunction, a: &MonomialWeight, r: f64, b0: f64, s: f64) -> Result<f64> {
    check_b0(b0)?;
    check_weight(a)?;
    if f.dim() != a.dim() {
        return Err(Error::domain("function and weight dimensions differ"));
    }
    let af = a.to_f64();
    let pi_n = std::f64::consts::PI.powi(a.dim() as i32);
    let mut total = 0.0;
    for (alpha, c) in f.terms() {
        let rates: Vec<f64> = alpha.entries().iter().map(|&e| e as f64 + 1.0).collect();
        let coeffs: Vec<f64> = af.iter().zip(&rates).map(|(aj, k)| aj / k).collect();
        let mass = pi_n / rates.iter().product::<f64>();
        let band = scaled_tail(&coeffs, r, s)? - (-s * b0).exp() * scaled_tail(&coeffs, r + b0, s)?;
        total += rational::to_f64(&c.norm_sq()) * mass * band.max(0.0);
    }
    Ok(total)
}

/// Limit estimate from the tail of a sequence on an equally spaced grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Extrapolation {
    Value(f64),
    Divergent,
    /// Fewer than three tail points.
    Unavailable,
}

/// Aitken Δ² on the last three values.
pub fn aitken_tail(values: &[f64]) -> Extrapolation {
    let [x0, x1, x2] = match values {
        [.., a, b, c] => [*a, *b, *c],
        _ => return Extrapolation::Unavailable,
    };
    let d1 = x1 - x0;
    let d2 = x2 - x1;
    let scale = x2.abs().max(1e-300);
    if d1.abs() <= 1e-14 * scale && d2.abs() <= 1e-14 * scale {
        return Extrapolation::Value(x2);
    }
    if d2 > 0.0 && d2 >= d1 {
        return Extrapolation::Divergent;
    }
    let dd = d2 - d1;
    if dd == 0.0 {
        return Extrapolation::Divergent;
    }
    Extrapolation::Value(x2 - d2 * d2 / dd)
}

/// Smallest `R` that counts as the tail when approximating a liminf.
pub const TAIL_START: f64 = 10.0;

/// One `(R, value)` series compared against a lower bound.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundSeries {
    pub name: &'static str,
    pub rows: Vec<(f64, f64)>,
    pub hypothesis_ok: bool,
    /// Minimum over `R ≥ 10` (over the whole grid if no point qualifies).
    pub liminf_estimate: f64,
    pub tail_points: usize,
    pub extrapolation: Extrapolation,
    pub lower_bound: PiScaled,
    /// `liminf_estimate − lower_bound`.
    pub slack: f64,
}

/// Absolute tolerance for bound comparisons.
pub const BOUND_TOLERANCE: f64 = 1e-9;

impl BoundSeries {
    pub(crate) fn new(name: &'static str, rows: Vec<(f64, f64)>, hypothesis_ok: bool, lower_bound: PiScaled) -> Self {
        let tail: Vec<f64> = rows.iter().filter(|(r, _)| *r >= TAIL_START).map(|(_, v)| *v).collect();
        let pool: Vec<f64> = if tail.is_empty() {
            rows.iter().map(|(_, v)| *v).collect()
        } else {
            tail.clone()
        };
        let liminf_estimate = pool.iter().copied().fold(f64::INFINITY, f64::min);
        BoundSeries {
            name,
            tail_points: tail.len(),
            extrapolation: aitken_tail(&tail),
            slack: liminf_estimate - lower_bound.to_f64(),
            liminf_estimate,
            lower_bound,
            hypothesis_ok,
            rows,
        }
    }

    /// Whether the bound holds; vacuous when the hypothesis fails.
    pub fn holds(&self) -> bool {
        !self.hypothesis_ok || self.slack >= -BOUND_TOLERANCE
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn tail_closed_forms() {
        assert_relative_eq!(tail_probability(&[2.0], 3.0).unwrap(), (-1.5f64).exp());
        let (c1, c2, r) = (2.0f64, 0.5f64, 1.7f64);
        let direct = (c1 * (-r / c1).exp() - c2 * (-r / c2).exp()) / (c1 - c2);
        assert_relative_eq!(tail_probability(&[c1, c2], r).unwrap(), direct, max_relative = 1e-14);
        assert_relative_eq!(
            tail_probability(&[1.0, 1.0], r).unwrap(),
            (1.0 + r) * (-r).exp(),
            max_relative = 1e-14
        );
        assert_relative_eq!(tail_probability(&[1.0, 0.0], r).unwrap(), (-r).exp());
        assert_relative_eq!(
            tail_probability(&[1.0, -3.0], r).unwrap(),
            0.25 * (-r).exp(),
            max_relative = 1e-14
        );
        assert_eq!(tail_probability(&[-1.0, -3.0], r).unwrap(), 0.0);
        assert_eq!(tail_probability(&[1.0, 1.0], 0.0).unwrap(), 1.0);
        assert!(tail_probability(&[1.0, 1.0, 1.0], 1.0).is_err());
    }

    #[test]
    fn near_equal_rates_are_continuous() {
        let r = 4.0;
        let exact_equal = tail_probability(&[1.0, 1.0], r).unwrap();
        for eps in [1e-3, 1e-5, 1e-7, 1e-10, 1e-13] {
            let v = tail_probability(&[1.0 + eps, 1.0], r).unwrap();
            assert!((v - exact_equal).abs() < 20.0 * eps * exact_equal, "eps = {eps}");
        }
        let a = tail_probability(&[1.0 + 1.01e-4, 1.0 - 1.01e-4], r).unwrap();
        let b = tail_probability(&[1.0 + 0.99e-4, 1.0 - 0.99e-4], r).unwrap();
        assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn sublevel_examples() {
        let a1 = MonomialWeight::from_ints(&[1]).unwrap();
        for r in [0.0, 1.0, 7.5] {
            assert_relative_eq!(
                sublevel_volume(&a1, r).unwrap().value,
                PI * (-r).exp(),
                max_relative = 1e-14
            );
        }
        let a2 = MonomialWeight::from_ints(&[1, 1]).unwrap();
        assert_eq!(sublevel_volume(&a2, 0.0).unwrap().exact, Some(PiScaled::pi_pow(2)));
        assert_relative_eq!(
            sublevel_volume(&a2, 2.0).unwrap().value,
            PI * PI * 3.0 * (-2.0f64).exp(),
            max_relative = 1e-14
        );
        assert!(sublevel_volume(&MonomialWeight::zero(2), 1.0).is_err());
    }

    #[test]
    fn band_examples() {
        let a1 = MonomialWeight::from_ints(&[1]).unwrap();
        assert_relative_eq!(
            band_volume(&a1, 0.0, 1.0).unwrap(),
            PI * (1.0 - (-1.0f64).exp()),
            max_relative = 1e-14
        );
        let (r, b0) = (3.0, 0.25);
        assert_relative_eq!(
            band_volume(&a1, r, b0).unwrap(),
            PI * (-r).exp() * (1.0 - (-b0).exp()),
            max_relative = 1e-13
        );
        assert!(band_volume(&a1, 1.0, 0.0).is_err());
        assert!(band_volume(&a1, 1.0, 1.5).is_err());
        for b0 in [1e-2, 1e-4, 1e-6] {
            let v = (r + b0).exp() / b0 * band_volume(&a1, r, b0).unwrap();
            assert!((v - PI).abs() < 2.0 * b0 * PI);
        }
    }

    #[test]
    fn band_integral_of_one_is_band_volume() {
        let a = MonomialWeight::new(vec![frac(1, 2), int(2)]).unwrap();
        let f = PolyFunction::one(2);
        let v = scaled_band_integral(&f, &a, 1.3, 0.4, 0.0).unwrap();
        assert_relative_eq!(v, band_volume(&a, 1.3, 0.4).unwrap(), max_relative = 1e-13);
    }

    #[test]
    fn aitken_rules() {
        assert_eq!(aitken_tail(&[1.0, 2.0]), Extrapolation::Unavailable);
        assert_eq!(aitken_tail(&[PI, PI, PI]), Extrapolation::Value(PI));
        assert_eq!(aitken_tail(&[1.0, 2.0, 3.0]), Extrapolation::Divergent);
        let geo: Vec<f64> = (0..3).map(|k| 2.0 + 0.5f64.powi(k)).collect();
        match aitken_tail(&geo) {
            Extrapolation::Value(v) => assert_relative_eq!(v, 2.0, max_relative = 1e-14),
            other => panic!("{other:?}"),
        }
    }
}
