//! Closed-form solutions `(u, s)` of the system
//! `s′ − s u′ = 1`, `(s + s′²/(u″s − s″)) e^{u−t} = 1` on `t > 0`:
//!
//! - without δ: `u = −log(1 − e^{−t})`, `s = t/(1 − e^{−t}) − 1`;
//! - with δ: `u = −log(k − e^{−t})`, `s = k(t + 1/δ)/(k − e^{−t}) − 1`, `k = 1 + 1/δ`.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OdeWitness {
    /// `None` for the plain system.
    pub delta: Option<u32>,
}

/// Values and first two derivatives of `u` and `s` at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub u: [f64; 3],
    pub s: [f64; 3],
}

pub fn plain_witness() -> OdeWitness {
    OdeWitness { delta: None }
}

pub fn delta_witness(delta: u32) -> Result<OdeWitness> {
    if delta < 1 {
        return Err(Error::domain("delta must be a positive integer"));
    }
    Ok(OdeWitness { delta: Some(delta) })
}

impl OdeWitness {
    /// Lower bound on `s`: 0, or `1/δ`.
    pub fn s_floor(&self) -> f64 {
        self.delta.map_or(0.0, |d| 1.0 / f64::from(d))
    }

    pub fn jet(&self, t: f64) -> Result<Jet> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::domain(format!("t must be positive, got {t}")));
        }
        Ok(match self.delta {
            None => {
                let e = t.exp_m1();
                let e1 = e + 1.0;
                Jet {
                    u: [-(-(-t).exp_m1()).ln(), -1.0 / e, e1 / (e * e)],
                    s: [
                        t * e1 / e - 1.0,
                        e1 * (e - t) / (e * e),
                        e1 * (t * (e + 2.0) - 2.0 * e) / (e * e * e),
                    ],
                }
            }
            Some(d) => {
                let w = 1.0 / f64::from(d);
                let k = 1.0 + w;
                let x = (-t).exp();
                let dd = k - x;
                let tw = t + w;
                Jet {
                    u: [-dd.ln(), -x / dd, k * x / (dd * dd)],
                    s: [
                        k * tw / dd - 1.0,
                        k / dd - k * tw * x / (dd * dd),
                        k * x * ((tw - 2.0) / (dd * dd) + 2.0 * tw * x / (dd * dd * dd)),
                    ],
                }
            }
        })
    }

    pub fn u(&self, t: f64) -> Result<f64> {
        Ok(self.jet(t)?.u[0])
    }

    pub fn s(&self, t: f64) -> Result<f64> {
        Ok(self.jet(t)?.s[0])
    }

    /// `g = (u″s − s″)/s′²`.
    pub fn g(&self, t: f64) -> Result<f64> {
        let j = self.jet(t)?;
        Ok((j.u[2] * j.s[0] - j.s[2]) / (j.s[1] * j.s[1]))
    }

    /// `(s′ − s u′ − 1, (s + s′²/(u″s − s″)) e^{u−t} − 1, u″s − s″)`.
    pub fn residuals(&self, t: f64) -> Result<(f64, f64, f64)> {
        let Jet { u, s } = self.jet(t)?;
        let margin = u[2] * s[0] - s[2];
        let r1 = s[1] - s[0] * u[1] - 1.0;
        let r2 = (s[0] + s[1] * s[1] / margin) * (u[0] - t).exp() - 1.0;
        Ok((r1, r2, margin))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OdeReport {
    pub witness: OdeWitness,
    pub points: usize,
    pub max_residual_first: f64,
    pub max_residual_second: f64,
    /// `min (u″s − s″)`; must be positive.
    pub min_margin: f64,
    /// `min s − floor`.
    pub min_s_excess: f64,
    /// `max u′`; must be `≤ 0`.
    pub max_u1: f64,
    /// Worst disagreement of closed-form derivatives with central differences,
    /// in units of the tolerance `FD_RELATIVE·|exact| + FD_FLOOR`; at most 1
    /// when the check passes.
    pub max_fd_error: f64,
}

/// Step of the finite-difference cross-check.
pub const FD_STEP: f64 = 1e-5;
pub const FD_RELATIVE: f64 = 1e-6;
/// Absolute floor in the finite-difference comparison. Where a derivative is
/// ~1e−20 (large `t`), roundoff in the differenced values dominates any
/// relative comparison.
pub const FD_FLOOR: f64 = 1e-9;

fn fd_error(w: &OdeWitness, t: f64) -> Result<f64> {
    let h = FD_STEP.min(0.5 * t);
    let (jp, jm, j) = (w.jet(t + h)?, w.jet(t - h)?, w.jet(t)?);
    let mut worst: f64 = 0.0;
    for (f, k) in [(0usize, 1usize), (1, 2)] {
        for (vp, vm, v) in [(jp.u, jm.u, j.u), (jp.s, jm.s, j.s)] {
            let fd = (vp[f] - vm[f]) / (2.0 * h);
            worst = worst.max((fd - v[k]).abs() / (FD_RELATIVE * v[k].abs() + FD_FLOOR));
        }
    }
    Ok(worst)
}

fn residual_report(w: OdeWitness, t_grid: &[f64]) -> Result<OdeReport> {
    if t_grid.is_empty() {
        return Err(Error::domain("t grid is empty"));
    }
    let mut rep = OdeReport {
        witness: w,
        points: t_grid.len(),
        max_residual_first: 0.0,
        max_residual_second: 0.0,
        min_margin: f64::INFINITY,
        min_s_excess: f64::INFINITY,
        max_u1: f64::NEG_INFINITY,
        max_fd_error: 0.0,
    };
    for &t in t_grid {
        let (r1, r2, margin) = w.residuals(t)?;
        let j = w.jet(t)?;
        rep.max_residual_first = rep.max_residual_first.max(r1.abs());
        rep.max_residual_second = rep.max_residual_second.max(r2.abs());
        rep.min_margin = rep.min_margin.min(margin);
        rep.min_s_excess = rep.min_s_excess.min(j.s[0] - w.s_floor());
        rep.max_u1 = rep.max_u1.max(j.u[1]);
        rep.max_fd_error = rep.max_fd_error.max(fd_error(&w, t)?);
    }
    Ok(rep)
}

pub fn plain_residuals(t_grid: &[f64]) -> Result<OdeReport> {
    residual_report(plain_witness(), t_grid)
}

pub fn delta_residuals(t_grid: &[f64], delta: u32) -> Result<OdeReport> {
    residual_report(delta_witness(delta)?, t_grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Vec<f64> {
        (0..200).map(|i| 0.1 + (50.0 - 0.1) * i as f64 / 199.0).collect()
    }

    #[test]
    fn plain_system() {
        let (r1, r2, m) = plain_witness().residuals(1.0).unwrap();
        assert!(r1.abs() < 1e-12 && r2.abs() < 1e-12 && m > 0.0);
        let rep = plain_residuals(&grid()).unwrap();
        assert!(
            rep.max_residual_first < 1e-10 && rep.max_residual_second < 1e-10,
            "{rep:?}"
        );
        assert!(rep.min_margin > 0.0 && rep.min_s_excess >= 0.0 && rep.max_u1 <= 0.0);
        assert!(rep.max_fd_error <= 1.0, "{rep:?}");
        let w = plain_witness();
        assert!(w.u(40.0).unwrap() < 1e-17);
        assert!((w.s(40.0).unwrap() - 39.0).abs() < 1e-12);
        let fine: Vec<f64> = (0..1000).map(|i| 1e-3 + 50.0 * i as f64 / 999.0).collect();
        assert!(fine.iter().all(|&t| w.s(t).unwrap() >= 0.0));
        assert!(plain_witness().jet(0.0).is_err());
    }

    #[test]
    fn delta_systems() {
        for d in [1, 2, 5, 10] {
            let rep = delta_residuals(&grid(), d).unwrap();
            assert!(
                rep.max_residual_first < 1e-10 && rep.max_residual_second < 1e-10,
                "{rep:?}"
            );
            assert!(rep.min_margin > 0.0 && rep.min_s_excess >= 0.0 && rep.max_u1 <= 0.0);
            assert!(rep.max_fd_error <= 1.0, "{rep:?}");
        }
        assert!(delta_witness(0).is_err());
    }

    #[test]
    fn delta_limits() {
        let big = delta_witness(1_000_000).unwrap();
        assert!((big.u(2.0).unwrap() - plain_witness().u(2.0).unwrap()).abs() < 1e-5);
        let w = delta_witness(4).unwrap();
        assert!((w.s(1e-9).unwrap() - 0.25).abs() < 1e-6);
    }
}
