//! The threshold function `θ(t) = ((t−1)(2t−1))^{−1/t}`, its inverse on
//! `(1, 3/2]`, the auxiliary function `Q`, and the scalar inequality checks.

use crate::error::{Error, Result};

/// Lower bound for `min e^Q` checked by [`q_analysis`].
pub const SHARP_Q_BOUND: f64 = 0.2876;

/// `1/(√3 e^{2/e})`.
pub fn coarse_q_bound() -> f64 {
    1.0 / (3f64.sqrt() * (2.0 / std::f64::consts::E).exp())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaValue {
    pub t: f64,
    pub theta: f64,
}

/// `ln θ(1 + s)` for `s > 0`, written to keep full relative accuracy as `s → 0`.
fn ln_theta_excess(s: f64) -> f64 {
    -(s.ln() + (2.0 * s).ln_1p()) / (1.0 + s)
}

/// `θ(1 + s)`; use this instead of [`theta_eval`] when `t − 1` is known more
/// precisely than `t`.
pub fn theta_of_excess(s: f64) -> Result<f64> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::domain(format!("theta needs t > 1, got t - 1 = {s}")));
    }
    Ok(ln_theta_excess(s).exp())
}

pub fn theta_eval(t: f64) -> Result<f64> {
    if !(t > 1.0) || !t.is_finite() {
        return Err(Error::domain(format!("theta needs t > 1, got {t}")));
    }
    theta_of_excess(t - 1.0)
}

pub fn theta_value(t: f64) -> Result<ThetaValue> {
    Ok(ThetaValue {
        t,
        theta: theta_eval(t)?,
    })
}

/// `s = p* − 1` where `θ(p*) = ratio`, `p* ∈ (1, 3/2]`.
pub fn theta_invert_excess(ratio: f64) -> Result<f64> {
    if ratio.is_nan() || ratio < 1.0 {
        return Err(Error::InconsistentInput(format!(
            "theta_invert needs ratio >= 1, got {ratio}"
        )));
    }
    if ratio.is_infinite() {
        return Err(Error::domain("theta_invert needs a finite ratio"));
    }
    if ratio == 1.0 {
        return Ok(0.5);
    }
    let target = ratio.ln();
    // ln θ(1+s) is decreasing in s; bracket the root from below.
    let mut hi = 0.5;
    let mut lo = 0.25;
    while ln_theta_excess(lo) <= target {
        hi = lo;
        lo *= 0.5;
        if lo < f64::MIN_POSITIVE {
            return Err(Error::domain(format!("ratio {ratio} too large to invert")));
        }
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if ln_theta_excess(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (dlo, dhi) = (
        (ln_theta_excess(lo) - target).abs(),
        (ln_theta_excess(hi) - target).abs(),
    );
    Ok(if dlo <= dhi { lo } else { hi })
}

/// Unique `p* ∈ (1, 3/2]` with `θ(p*) = ratio`. Every `p ∈ (1, p*)` has
/// `θ(p) > ratio`.
///
/// For very large ratios `p*` sits within a few ulps of 1 and rounding `1 + s`
/// costs relative accuracy; [`theta_invert_excess`] returns `s` directly.
pub fn theta_invert(ratio: f64) -> Result<f64> {
    let s = theta_invert_excess(ratio)?;
    // Among the doubles next to 1 + s pick the one whose θ is closest.
    let t = 1.0 + s;
    let candidates = [t, t.next_down(), t.next_up()];
    let best = candidates
        .into_iter()
        .filter(|&c| c > 1.0)
        .min_by(|&x, &y| {
            let ex = (ln_theta_excess(x - 1.0) - ratio.ln()).abs();
            let ey = (ln_theta_excess(y - 1.0) - ratio.ln()).abs();
            ex.total_cmp(&ey)
        })
        .unwrap_or(t);
    Ok(best)
}

/// One inequality `lhs(t) < rhs(t)` of the threshold chain.
#[derive(Clone, Debug, PartialEq)]
pub struct InequalityRow {
    pub name: &'static str,
    pub min_slack: f64,
    pub argmin_t: f64,
    pub violations: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThetaBoundReport {
    pub points: usize,
    pub rows: Vec<InequalityRow>,
}

impl ThetaBoundReport {
    pub fn all_hold(&self) -> bool {
        self.points > 0 && self.rows.iter().all(|r| r.violations == 0 && r.min_slack > 0.0)
    }

    pub fn min_slack(&self) -> f64 {
        self.rows.iter().map(|r| r.min_slack).fold(f64::INFINITY, f64::min)
    }
}

type Side = fn(f64, f64) -> f64;

/// `(name, lhs(t, θ), rhs(t, θ))`.
const CHAIN: [(&str, Side, Side); 5] = [
    (
        "1/(200(t-1)) < 1/(6(t-1))",
        |t, _| 1.0 / (200.0 * (t - 1.0)),
        |t, _| 1.0 / (6.0 * (t - 1.0)),
    ),
    (
        "1/(6(t-1)) < t/(6(t-1))",
        |t, _| 1.0 / (6.0 * (t - 1.0)),
        |t, _| t / (6.0 * (t - 1.0)),
    ),
    ("t/(6(t-1)) < theta(t)", |t, _| t / (6.0 * (t - 1.0)), |_, th| th),
    (
        "t/(sqrt3 e^(2/e) (t-1)) < theta(t)",
        |t, _| coarse_q_bound() * t / (t - 1.0),
        |_, th| th,
    ),
    (
        "0.2876 t/(t-1) < theta(t)",
        |t, _| SHARP_Q_BOUND * t / (t - 1.0),
        |_, th| th,
    ),
];

/// [`theta_bound_check`] against an arbitrary θ implementation.
pub fn theta_bound_check_with<F>(t_grid: &[f64], theta: F) -> Result<ThetaBoundReport>
where
    F: Fn(f64) -> f64,
{
    if let Some(&bad) = t_grid.iter().find(|&&t| !(t > 1.0) || !t.is_finite()) {
        return Err(Error::domain(format!("grid point {bad} is not > 1")));
    }
    let mut rows: Vec<InequalityRow> = CHAIN
        .iter()
        .map(|(name, _, _)| InequalityRow {
            name,
            min_slack: f64::INFINITY,
            argmin_t: f64::NAN,
            violations: 0,
        })
        .collect();
    for &t in t_grid {
        let th = theta(t);
        for (row, (_, lhs, rhs)) in rows.iter_mut().zip(CHAIN.iter()) {
            let slack = rhs(t, th) - lhs(t, th);
            if !(slack > 0.0) {
                row.violations += 1;
            }
            if slack < row.min_slack || slack.is_nan() {
                row.min_slack = slack;
                row.argmin_t = t;
            }
        }
    }
    Ok(ThetaBoundReport {
        points: t_grid.len(),
        rows,
    })
}

pub fn theta_bound_check(t_grid: &[f64]) -> Result<ThetaBoundReport> {
    theta_bound_check_with(t_grid, |t| theta_eval(t).unwrap_or(f64::NAN))
}

/// `n` points with `t − 1` log-spaced over `[s_min, s_max]`.
pub fn log_grid(s_min: f64, s_max: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2 && s_min > 0.0 && s_max > s_min);
    let (l0, l1) = (s_min.ln(), s_max.ln());
    (0..n)
        .map(|i| 1.0 + (l0 + (l1 - l0) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QPoint {
    pub x: f64,
    pub q: f64,
    pub q1: f64,
    pub q2: f64,
}

fn xlnx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// `Q(x) = 2x ln x + (1−x) ln(1−x) − x ln(2−x)`, extended by 0 at both ends.
pub fn q(x: f64) -> f64 {
    2.0 * xlnx(x) + xlnx(1.0 - x) - x * (2.0 - x).ln()
}

pub fn q1(x: f64) -> f64 {
    2.0 * x.ln() - (1.0 - x).ln() + 2.0 / (2.0 - x) - (2.0 - x).ln()
}

pub fn q2(x: f64) -> f64 {
    2.0 / x + 1.0 / (1.0 - x) + 2.0 / ((2.0 - x) * (2.0 - x)) + 1.0 / (2.0 - x)
}

pub fn q_point(x: f64) -> Result<QPoint> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::domain(format!("Q is defined on (0,1), got {x}")));
    }
    Ok(QPoint {
        x,
        q: q(x),
        q1: q1(x),
        q2: q2(x),
    })
}

/// `P(t) = Q(1/t) = ln(θ(t)(t−1)/t)` for `t > 1`.
pub fn p_fn(t: f64) -> Result<f64> {
    if !(t > 1.0) {
        return Err(Error::domain(format!("P needs t > 1, got {t}")));
    }
    Ok(q(1.0 / t))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QAnalysis {
    pub x_min: f64,
    pub q_min: f64,
    pub exp_q_min: f64,
    pub q1_at_min: f64,
    pub above_sharp_bound: bool,
    pub above_coarse_bound: bool,
    pub below_half_value: bool,
}

/// Minimizes `Q` on `(0,1)` by bisection on `Q′`, which is increasing
/// (`Q″ > 0`), tends to `−∞` at `0+` and is positive at `1/2`.
pub fn q_analysis(tolerance: f64) -> Result<QAnalysis> {
    if !(tolerance > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive, got {tolerance}")));
    }
    let (mut lo, mut hi) = (1e-12, 0.5);
    debug_assert!(q1(lo) < 0.0 && q1(hi) > 0.0);
    while hi - lo > tolerance {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if q1(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x_min = if q1(lo).abs() <= q1(hi).abs() { lo } else { hi };
    let q_min = q(x_min);
    let exp_q_min = q_min.exp();
    Ok(QAnalysis {
        x_min,
        q_min,
        exp_q_min,
        q1_at_min: q1(x_min),
        above_sharp_bound: exp_q_min > SHARP_Q_BOUND,
        above_coarse_bound: exp_q_min > coarse_q_bound(),
        below_half_value: exp_q_min <= q(0.5).exp(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BerndtssonInput {
    pub c1: f64,
    pub epsilon0: f64,
    pub c2: f64,
}

impl BerndtssonInput {
    /// `ε0 = c2/100`.
    pub fn from_norms(c1: f64, c2: f64) -> Result<Self> {
        if !(c2 > 0.0) || !c1.is_finite() {
            return Err(Error::domain(format!(
                "need 0 < c2 and finite c1, got c1 = {c1}, c2 = {c2}"
            )));
        }
        if c2 > c1 {
            return Err(Error::InconsistentInput(format!("c2 = {c2} exceeds c1 = {c1}")));
        }
        Ok(BerndtssonInput {
            c1,
            epsilon0: c2 / 100.0,
            c2,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BerndtssonComparison {
    pub input: BerndtssonInput,
    pub p_berndtsson: f64,
    pub p_theta: f64,
}

impl BerndtssonComparison {
    pub fn theta_dominates(&self) -> bool {
        self.p_theta > self.p_berndtsson
    }
}

pub fn berndtsson_compare(c1: f64, c2: f64) -> Result<BerndtssonComparison> {
    let input = BerndtssonInput::from_norms(c1, c2)?;
    Ok(BerndtssonComparison {
        input,
        p_berndtsson: 1.0 + input.epsilon0 / (2.0 * input.c1),
        p_theta: theta_invert(c1 / c2)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn anchors() {
        assert_relative_eq!(theta_eval(1.5).unwrap(), 1.0, max_relative = 1e-15);
        assert_relative_eq!(theta_eval(2.0).unwrap(), 1.0 / 3f64.sqrt(), max_relative = 1e-15);
        let direct = (1.0f64 / (0.1 * 1.2)).powf(1.0 / 1.1);
        assert_relative_eq!(theta_eval(1.1).unwrap(), direct, max_relative = 1e-13);
        assert!(theta_eval(1.0).is_err());
        assert!(theta_eval(f64::NAN).is_err());
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(theta_invert(1.0).unwrap(), 1.5);
        assert!(theta_invert(4.0).unwrap() < 1.0 + 1.0 / 3.0);
        assert_relative_eq!(
            theta_eval(theta_invert(2.0).unwrap()).unwrap(),
            2.0,
            max_relative = 1e-10
        );
        assert!(matches!(theta_invert(0.5), Err(Error::InconsistentInput(_))));
    }

    #[test]
    fn round_trips() {
        for r in [1.0, 1.5, 2.0, 10.0, 1e3, 1e6] {
            let t = theta_invert(r).unwrap();
            assert!((theta_eval(t).unwrap() - r).abs() <= 1e-10 * r, "R = {r}");
            let s = theta_invert_excess(r).unwrap();
            assert!((theta_of_excess(s).unwrap() - r).abs() <= 1e-13 * r, "R = {r}");
        }
    }

    #[test]
    fn bound_chain_examples() {
        let rep = theta_bound_check(&[2.0, 1.0001, 100.0]).unwrap();
        assert!(rep.all_hold());
        let th2 = theta_eval(2.0).unwrap();
        assert_relative_eq!(th2 - 2.0 / 6.0, 0.244, epsilon = 1e-3);
        assert!(theta_eval(1.0001).unwrap() * 6.0 * 1e-4 / 1.0001 > 1.0);
        assert!(theta_eval(100.0).unwrap() > 0.2876 * 100.0 / 99.0);
    }

    #[test]
    fn flipped_exponent_breaks_the_chain() {
        let grid = log_grid(1e-6, 999.0, 1000);
        let flipped = |t: f64| ((t - 1.0) * (2.0 * t - 1.0)).powf(1.0 / t);
        assert!(!theta_bound_check_with(&grid, flipped).unwrap().all_hold());
    }

    #[test]
    fn q_properties() {
        assert!(q(1e-9).abs() < 1e-6 && q(1.0 - 1e-9).abs() < 1e-6);
        assert_eq!(q(0.0), 0.0);
        let half = 1.5 * 0.5f64.ln() - 0.5 * 1.5f64.ln();
        assert_relative_eq!(q(0.5), half, max_relative = 1e-15);
        let qa = q_analysis(1e-15).unwrap();
        assert!(qa.q1_at_min.abs() < 1e-10);
        assert!(qa.above_sharp_bound && qa.above_coarse_bound && qa.below_half_value);
        assert!(qa.exp_q_min < 0.2887);
        assert!(q_analysis(0.0).is_err());
        for t in [1.01, 1.5, 3.0, 40.0] {
            let lhs = p_fn(t).unwrap().exp();
            let rhs = theta_eval(t).unwrap() * (t - 1.0) / t;
            assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
        }
    }

    #[test]
    fn berndtsson_examples() {
        let b = berndtsson_compare(1.0, 1.0).unwrap();
        assert_relative_eq!(b.p_berndtsson, 1.005);
        assert_eq!(b.p_theta, 1.5);
        let pi = std::f64::consts::PI;
        let b = berndtsson_compare(pi, pi / 4.0).unwrap();
        assert_relative_eq!(b.p_berndtsson, 1.0 + 1.0 / 800.0, max_relative = 1e-15);
        assert!(b.p_theta < 4.0 / 3.0 && b.theta_dominates());
        assert!(matches!(berndtsson_compare(1.0, 2.0), Err(Error::InconsistentInput(_))));
    }
}
