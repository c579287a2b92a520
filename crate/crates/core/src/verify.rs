//! The acceptance criteria as runnable checks.
//!
//! Criteria 1 to 10 are exact or closed-form and make up the fast suite;
//! criterion 11 adds the Monte Carlo cross-checks and is only in the full
//! suite. The θ-dependent checks take θ as a parameter so that a broken θ
//! can be shown to fail them.

use std::f64::consts::PI;
use std::fmt;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::asymptotics::{dk_asymptote_report, jm_asymptote_report, scaled_sublevel, sublevel_volume_mc};
use crate::error::Result;
use crate::kernel::{effective_p_report, kernel_inv};
use crate::montecarlo::{mc_weighted_norm, McConfig};
use crate::rational::{self, frac, int, Rational};
use crate::scalars::{
    berndtsson_compare, coarse_q_bound, log_grid, q, q_analysis, theta_bound_check_with, theta_eval, theta_invert,
    SHARP_Q_BOUND,
};
use crate::toric::{membership, weighted_norm_sq, Coefficient, MonomialWeight, PiScaled, PolyFunction};
use crate::weights::{
    a_factor, a_factor_jm, a_factor_jm_sampled, a_factor_sampled, chain_audit, chain_identity, delta_residuals,
    plain_residuals,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Fast,
    Full,
}

impl Suite {
    pub fn criteria(self) -> &'static [u8] {
        match self {
            Suite::Fast => &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10],
            Suite::Full => &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11],
        }
    }
}

/// A worked value whose commonly quoted form disagrees with the computed one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discrepancy {
    pub quantity: &'static str,
    pub reference: &'static str,
    pub computed: &'static str,
    pub note: &'static str,
}

pub fn known_discrepancies() -> Vec<Discrepancy> {
    vec![
        Discrepancy {
            quantity: "K_{phi,F}(0) for F = z1 + z2^2, phi = log|z1|^2",
            reference: "4/pi^2",
            computed: "3/pi^2",
            note: "the projection leaves z2^2 and the integral of |z2|^4 over the bidisc is pi^2/3",
        },
        Discrepancy {
            quantity: "liminf r^-2 mu({c psi - log|I| < log r}) for psi = log|z|^2 on the disc",
            reference: "1/pi",
            computed: "pi",
            note: "the sublevel set is the disc of radius r; the quoted value is the kernel, not its inverse",
        },
    ]
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // timing is left out so that repeated runs print identical lines
        write!(
            f,
            "[{}] {:>2} {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail
        )
    }
}

pub fn criterion_name(id: u8) -> &'static str {
    match id {
        1 => "theta anchors and monotonicity",
        2 => "theta inequality chain",
        3 => "Q minimum",
        4 => "kernel examples",
        5 => "effective exponent on z^m",
        6 => "comparison with the linear exponent",
        7 => "sublevel equality case",
        8 => "sublevel bound with an ideal",
        9 => "ODE witnesses and factors",
        10 => "summation chain",
        11 => "Monte Carlo cross-checks",
        _ => "unknown",
    }
}

type Outcome = Result<(bool, String)>;

/// Runs one criterion. Errors are reported as failures.
pub fn run_criterion(id: u8, seed: u64) -> CriterionResult {
    let start = Instant::now();
    let outcome = match id {
        1 => theta_anchors_with(|t| theta_eval(t).unwrap_or(f64::NAN)),
        2 => theta_chain_with(|t| theta_eval(t).unwrap_or(f64::NAN)),
        3 => q_minimum(),
        4 => kernel_examples(),
        5 => z_power_family(),
        6 => linear_comparison(),
        7 => sublevel_equality(),
        8 => ideal_sublevel(),
        9 => ode_witnesses(),
        10 => summation_chain(seed),
        11 => monte_carlo(seed),
        _ => Ok((false, format!("no criterion {id}"))),
    };
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionResult {
        id,
        name: criterion_name(id),
        passed,
        detail,
        elapsed: start.elapsed(),
    }
}

pub fn run_suite(suite: Suite, seed: u64) -> Vec<CriterionResult> {
    suite.criteria().iter().map(|&id| run_criterion(id, seed)).collect()
}

pub fn theta_anchors_with<F: Fn(f64) -> f64>(theta: F) -> Outcome {
    let e1 = (theta(1.5) - 1.0).abs();
    let e2 = (theta(2.0) - 3f64.sqrt().recip()).abs();
    let grid = log_grid(1e-6, 0.5, 10_000);
    let decreasing = grid.windows(2).all(|w| theta(w[1]) < theta(w[0]));
    Ok((
        e1 <= 1e-12 && e2 <= 1e-12 && decreasing,
        format!(
            "|theta(3/2)-1| = {e1:.1e}, |theta(2)-3^-1/2| = {e2:.1e}, strictly decreasing on 1e4 points: {decreasing}"
        ),
    ))
}

pub fn theta_chain_with<F: Fn(f64) -> f64>(theta: F) -> Outcome {
    let grid = log_grid(1e-9, 999.0, 10_000);
    let rep = theta_bound_check_with(&grid, &theta)?;
    let worst = rep
        .rows
        .iter()
        .min_by(|a, b| a.min_slack.total_cmp(&b.min_slack))
        .expect("chain is nonempty");
    Ok((
        rep.all_hold() && rep.min_slack() > 0.0,
        format!(
            "{} inequalities on {} points, min slack {:.3e} ({} at t = {:.4})",
            rep.rows.len(),
            rep.points,
            rep.min_slack(),
            worst.name,
            worst.argmin_t
        ),
    ))
}

fn q_minimum() -> Outcome {
    let qa = q_analysis(1e-12)?;
    let half = q(0.5).exp();
    let ok = qa.exp_q_min > SHARP_Q_BOUND && qa.exp_q_min > coarse_q_bound() && qa.exp_q_min <= half;
    Ok((
        ok && qa.above_sharp_bound && qa.above_coarse_bound && qa.below_half_value,
        format!(
            "min e^Q = {:.10} at x = {:.10}; > {SHARP_Q_BOUND}, > {:.6}, <= e^Q(1/2) = {half:.6}",
            qa.exp_q_min,
            qa.x_min,
            coarse_q_bound()
        ),
    ))
}

fn kernel_examples() -> Outcome {
    let mut failures = Vec::new();
    for m in 1..=10i64 {
        let f = PolyFunction::monomial([m as u32].into());
        let k = kernel_inv(&f, &MonomialWeight::from_ints(&[m])?)?.kernel();
        if k != PiScaled::new(int(m + 1), -1) {
            failures.push(format!("z^{m}: {k}"));
        }
    }
    // sin²θ for θ = π/6 and π/4
    for sin2 in [frac(1, 4), frac(1, 2)] {
        let cos2 = int(1) - &sin2;
        let f = PolyFunction::zero(2)
            .with_term([1, 0], Coefficient::sqrt_of(cos2)?)?
            .with_term([0, 1], Coefficient::sqrt_of(sin2.clone())?)?;
        let k = kernel_inv(&f, &MonomialWeight::from_ints(&[1, 0])?)?.kernel();
        let want = PiScaled::new(int(2) / &sin2, -2);
        if k != want {
            failures.push(format!("sin^2 = {sin2}: {k} vs {want}"));
        }
    }
    let f = PolyFunction::zero(2)
        .with_term([1, 0], Coefficient::one())?
        .with_term([0, 2], Coefficient::one())?;
    let third = kernel_inv(&f, &MonomialWeight::from_ints(&[1, 0])?)?.kernel();
    if third != PiScaled::new(int(3), -2) {
        failures.push(format!("z1 + z2^2: {third}"));
    }
    let flagged = known_discrepancies()
        .iter()
        .any(|d| d.computed == "3/pi^2" && d.reference == "4/pi^2");
    Ok((
        failures.is_empty() && flagged,
        if failures.is_empty() {
            format!("(m+1)/pi for m = 1..10, 2/(pi^2 sin^2) at pi/6 and pi/4, third example {third} (reference value 4/pi^2 flagged)")
        } else {
            failures.join("; ")
        },
    ))
}

fn z_power_family() -> Outcome {
    let mut failures = Vec::new();
    for m in 1..=100i64 {
        let f = PolyFunction::monomial([m as u32].into());
        let a = MonomialWeight::from_ints(&[m])?;
        let rep = effective_p_report(&f, &a)?;
        let edge = int(1) + frac(1, m);
        let p_theta = theta_invert((m + 1) as f64)?;
        let ok = rep.c1 == PiScaled::pi_pow(1)
            && rep.c2 == PiScaled::new(frac(1, m + 1), 1)
            && p_theta < rational::to_f64(&edge)
            && rep.membership_verdict
            && !membership(&f, &a, &edge)?;
        if !ok {
            failures.push(m);
        }
    }
    Ok((
        failures.is_empty(),
        if failures.is_empty() {
            "C1 = pi, C2 = pi/(m+1), p_eff < 1 + 1/m, member at p_eff(1-1e-9), not at 1 + 1/m, m = 1..100".into()
        } else {
            format!("failed for m in {failures:?}")
        },
    ))
}

fn linear_comparison() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for ratio in [1.0, 2.0, 10.0, 100.0] {
        let c = berndtsson_compare(ratio, 1.0)?;
        let want = 1.0 + (1.0 / ratio) / 200.0;
        ok &= c.theta_dominates() && (c.p_berndtsson - want).abs() <= 1e-15;
        parts.push(format!("{ratio}: {:.6} > {:.6}", c.p_theta, c.p_berndtsson));
    }
    Ok((ok, parts.join(", ")))
}

fn sublevel_equality() -> Outcome {
    let a1 = MonomialWeight::from_ints(&[1])?;
    let a2 = MonomialWeight::from_ints(&[1, 1])?;
    let mut worst: f64 = 0.0;
    let mut slack_err: f64 = 0.0;
    let mut above = true;
    for r in 0..=30 {
        let r = f64::from(r);
        worst = worst.max((scaled_sublevel(&a1, r, 1.0)? - PI).abs() / PI);
        let v = scaled_sublevel(&a2, r, 1.0)?;
        above &= v >= PI * PI;
        slack_err = slack_err.max(((v - PI * PI) - PI * PI * r).abs() / (PI * PI * (1.0 + r)));
    }
    let bound_ok = kernel_inv(&PolyFunction::one(1), &a1)?.k_inv == PiScaled::pi_pow(1);
    let grid: Vec<f64> = (0..=30).map(f64::from).collect();
    let report_ok = dk_asymptote_report(&PolyFunction::one(1), &a1, &grid, 1.0)?.all_hold()
        && dk_asymptote_report(&PolyFunction::one(2), &a2, &grid, 1.0)?.all_hold();
    Ok((
        worst <= 1e-14 && slack_err <= 1e-13 && above && bound_ok && report_ok,
        format!(
            "a = (1): max rel err vs pi {worst:.1e}, bound K^-1 = pi exact; a = (1,1): slack pi^2 R to {slack_err:.1e}"
        ),
    ))
}

fn ideal_sublevel() -> Outcome {
    let a = MonomialWeight::from_ints(&[1])?;
    let grid: Vec<f64> = [0.5f64, 0.1, 0.01].iter().map(|r| -2.0 * r.ln()).collect();
    let deltas: Vec<u32> = (1..=1000).collect();
    let rep = jm_asymptote_report(&PolyFunction::one(1), &a, &deltas, &grid)?;
    let lhs_err = rep
        .lhs_rows
        .iter()
        .map(|(_, _, v)| (v - PI).abs() / PI)
        .fold(0.0, f64::max);
    let rhs_gap = (PI - rep.rhs) / PI;
    let trend = rep.deltas.windows(2).all(|w| w[1].rhs_term > w[0].rhs_term);
    let flagged = known_discrepancies()
        .iter()
        .any(|d| d.reference == "1/pi" && d.computed == "pi");
    Ok((
        lhs_err <= 1e-14 && (0.0..=1e-3).contains(&rhs_gap) && trend && rep.holds() && flagged,
        format!(
            "LHS = pi at r = 0.5, 0.1, 0.01 (rel err {lhs_err:.1e}); RHS sup = {:.6} at delta = {}, relative gap {rhs_gap:.2e}; increasing in delta (reference value 1/pi flagged)",
            rep.rhs, rep.rhs_argmax_delta
        ),
    ))
}

fn ode_witnesses() -> Outcome {
    let grid: Vec<f64> = (0..200).map(|i| 0.1 + 49.9 * f64::from(i) / 199.0).collect();
    let mut worst_res: f64 = 0.0;
    let mut ok = true;
    let plain = plain_residuals(&grid)?;
    worst_res = worst_res.max(plain.max_residual_first).max(plain.max_residual_second);
    ok &= plain.min_s_excess >= 0.0 && plain.min_margin > 0.0 && plain.max_fd_error <= 1.0;
    for d in [1, 2, 5, 10] {
        let r = delta_residuals(&grid, d)?;
        worst_res = worst_res.max(r.max_residual_first).max(r.max_residual_second);
        ok &= r.min_s_excess >= 0.0 && r.min_margin > 0.0 && r.max_fd_error <= 1.0;
    }
    let mut factor_err: f64 = 0.0;
    for (t0, b0) in [(1.0, 1.0), (0.5, 0.25), (3.0, 0.5), (10.0, 1.0)] {
        factor_err = factor_err.max((a_factor(t0, b0)? - a_factor_sampled(t0, b0, 10_000)?).abs());
    }
    for d in [1, 2, 5, 10] {
        let t0 = 1.0 + 1.0 / f64::from(d);
        factor_err = factor_err.max((a_factor_jm(d)? - a_factor_jm_sampled(d, t0, 10_000)?).abs());
    }
    Ok((
        ok && worst_res < 1e-10 && factor_err <= 1e-12,
        format!("max residual {worst_res:.1e} on 200 points, s above its floor, factor error {factor_err:.1e}"),
    ))
}

fn summation_chain(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut identity_ok = true;
    for _ in 0..100 {
        // p = 1 + k/(2d) with 0 < k < d lies in (1, 3/2)
        let d: i64 = rng.gen_range(2..10_000);
        let k: i64 = rng.gen_range(1..d);
        let p: Rational = int(1) + frac(k, 2 * d);
        identity_ok &= p > int(1) && p < frac(3, 2) && chain_identity(&p);
    }
    let b0s: Vec<f64> = (0..=6).map(|i| 0.5f64.powi(i)).collect();
    let rep = chain_audit(3, &b0s)?;
    let gap = rep.richardson_gap.unwrap_or(f64::INFINITY);
    let raw = rep.rows.last().map_or(f64::NAN, |r| r.gap_envelope);
    Ok((
        identity_ok && rep.all_hold() && gap.abs() <= 1e-6,
        format!(
            "identity exact for 100 random p; m = 3 limit {:.10}, extrapolated gap {gap:.1e}, raw gap at B0 = 1/64 {raw:.2e}, monotone {}",
            rep.limit, rep.monotone
        ),
    ))
}

fn random_weight(rng: &mut ChaCha8Rng, n: usize) -> Result<MonomialWeight> {
    MonomialWeight::new((0..n).map(|_| frac(rng.gen_range(0..9), 4)).collect())
}

fn random_function(rng: &mut ChaCha8Rng, n: usize) -> Result<PolyFunction> {
    let mut f = PolyFunction::zero(n);
    for _ in 0..rng.gen_range(1..=3) {
        let alpha: Vec<u32> = (0..n).map(|_| rng.gen_range(0..4)).collect();
        let c = Coefficient::new(int(rng.gen_range(-3..=3)), int(rng.gen_range(-3..=3)));
        f.add_term(alpha.as_slice().into(), c)?;
    }
    Ok(f)
}

fn monte_carlo(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6d63);
    let config = McConfig::new(100_000, seed);
    let (mut norms, mut divergent, mut misses) = (0, 0, Vec::new());
    let mut attempts = 0;
    while norms < 10 && attempts < 1000 {
        attempts += 1;
        let n = rng.gen_range(1..=3);
        let f = random_function(&mut rng, n)?;
        if f.is_zero() {
            continue;
        }
        let a = random_weight(&mut rng, n)?;
        let p = int(1);
        let exact = weighted_norm_sq(&f, &a, &p)?;
        let est = mc_weighted_norm(&f, &a, &p, &config)?;
        if !exact.is_finite() {
            divergent += 1;
            if !est.divergent || est.mean.is_finite() {
                misses.push("divergent case not flagged".to_string());
            }
            continue;
        }
        norms += 1;
        if est.divergent || !est.within_sigmas(exact.to_f64(), 4.0) {
            misses.push(format!("norm {}: {} vs {exact}", norms, est.mean));
        }
    }
    let mut volumes = 0;
    while volumes < 5 {
        let n = rng.gen_range(1..=2);
        let a = random_weight(&mut rng, n)?;
        if a.coeffs().iter().all(Zero::is_zero) {
            continue;
        }
        volumes += 1;
        let r = rng.gen_range(0.5..5.0);
        let exact = scaled_sublevel(&a, r, 0.0)?;
        let est = sublevel_volume_mc(&a, r, &config)?;
        let se = est.std_error.unwrap_or(0.0);
        if (est.value - exact).abs() > 4.0 * se + 1e-12 * exact {
            misses.push(format!("volume {volumes}: {} vs {exact} (se {se:.2e})", est.value));
        }
    }
    Ok((
        misses.is_empty() && norms == 10,
        if misses.is_empty() {
            format!("10 norms and 5 volumes within 4 standard errors at 1e5 samples; {divergent} divergent cases flagged exactly")
        } else {
            misses.join("; ")
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_suite_passes() {
        for r in run_suite(Suite::Fast, 0) {
            assert!(r.passed, "{r}");
        }
    }

    #[test]
    fn broken_theta_is_caught() {
        // wrong sign of the exponent
        let bad = |t: f64| ((t - 1.0) * (2.0 * t - 1.0)).powf(1.0 / t);
        assert!(!theta_anchors_with(bad).unwrap().0);
        assert!(!theta_chain_with(bad).unwrap().0);
        // a small multiplicative error only breaks the anchors
        let off = |t: f64| theta_eval(t).unwrap() * (1.0 + 1e-9);
        assert!(!theta_anchors_with(off).unwrap().0);
    }

    #[test]
    fn unknown_criterion_fails() {
        assert!(!run_criterion(12, 0).passed);
    }
}
