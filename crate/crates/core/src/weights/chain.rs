//! Audit of the summation chain that turns the band estimate into the
//! threshold `θ(p) ≤ C1/C2`, on the family `F = z^m`, `a = (m)`:
//! `C1 = π`, `C2 = π/(m+1)`, `p = 1 + 1/m`.
//!
//! Three evaluations of the same sum are compared for every band width `B0`:
//! the direct series, its geometric closed form starting at
//! `k0 = ⌈p log(C1/C2)/B0⌉`, and the smooth envelope obtained by replacing
//! `e^{k0 B0/p}` with `C1/C2`. Only the envelope is smooth in `B0`, so it
//! alone is fed to Romberg extrapolation.

use std::f64::consts::PI;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::scalars::theta_eval;

/// `p/(p−1) − 4p/(2p−1) + 1 = 1/((p−1)(2p−1))`, in exact arithmetic.
/// False at the poles `p ∈ {1, 1/2}`.
pub fn chain_identity(p: &Rational) -> bool {
    let one = Rational::one();
    let two = rational::int(2);
    let a = p - &one;
    let b = &two * p - &one;
    if a.is_zero() || b.is_zero() {
        return false;
    }
    let lhs = p / &a - rational::int(4) * p / &b + &one;
    lhs == one / (a * b)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainRow {
    pub b0: f64,
    pub k0: u64,
    pub direct_sum: f64,
    pub geometric_sum: f64,
    pub envelope: f64,
    /// `envelope − limit`.
    pub gap_envelope: f64,
    /// `geometric_sum − limit`.
    pub gap_sum: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainAuditReport {
    pub m: u32,
    pub p: Rational,
    pub c1: f64,
    pub c2: f64,
    pub rows: Vec<ChainRow>,
    pub limit: f64,
    /// Envelope increases as `B0` decreases and stays below the limit.
    pub monotone: bool,
    /// Romberg value over the halving subsequence, when there are at least
    /// two halvings in the list.
    pub richardson: Option<f64>,
    pub richardson_gap: Option<f64>,
    pub identity_holds: bool,
    /// `|direct − geometric|` over all rows, relative to the limit.
    pub max_sum_disagreement: f64,
    /// Direct sums never exceed `C1`.
    pub sums_below_c1: bool,
    /// Envelope never exceeds the exact geometric sum.
    pub envelope_below_sum: bool,
    pub theta_p: f64,
    /// `θ(p) ≤ C1/C2`.
    pub theta_bound_holds: bool,
}

impl ChainAuditReport {
    pub fn all_hold(&self) -> bool {
        self.monotone
            && self.identity_holds
            && self.sums_below_c1
            && self.envelope_below_sum
            && self.theta_bound_holds
            && self.max_sum_disagreement < 1e-9
    }
}

struct Family {
    p: f64,
    c1: f64,
    c2: f64,
}

impl Family {
    fn r(&self) -> f64 {
        self.c2 / self.c1
    }

    fn limit(&self) -> f64 {
        let p = self.p;
        (p / (p - 1.0) - 4.0 * p / (2.0 * p - 1.0) + 1.0) * self.r().powf(p) * self.c1
    }

    fn rates(&self, b0: f64) -> [f64; 3] {
        let p = self.p;
        [(1.0 - 1.0 / p) * b0, (1.0 - 0.5 / p) * b0, b0]
    }

    fn k0(&self, b0: f64) -> u64 {
        (self.p * (self.c1 / self.c2).ln() / b0).ceil() as u64
    }

    fn term(&self, k: u64, b0: f64) -> f64 {
        let x = k as f64 * b0;
        let d = self.c2.sqrt() - (self.c1 * (-x / self.p).exp()).sqrt();
        b0 * (-(x + b0) + x / self.p).exp() * d * d
    }

    fn direct(&self, b0: f64) -> f64 {
        let mut k = self.k0(b0);
        let mut total = 0.0;
        // Terms decay like e^{−(1−1/p)kB0}; stop once they cannot move the sum.
        loop {
            let t = self.term(k, b0);
            total += t;
            if t <= 1e-18 * total || k > self.k0(b0) + 50_000_000 {
                return total;
            }
            k += 1;
        }
    }

    fn geometric(&self, b0: f64) -> f64 {
        let k0 = self.k0(b0) as f64;
        let [a1, a2, a3] = self.rates(b0);
        let g = |a: f64| (-a * k0).exp() / -(-a).exp_m1();
        b0 * (-b0).exp() * (self.c2 * g(a1) - 2.0 * (self.c1 * self.c2).sqrt() * g(a2) + self.c1 * g(a3))
    }

    fn envelope(&self, b0: f64) -> f64 {
        let p = self.p;
        let r = self.r();
        let [a1, a2, a3] = self.rates(b0);
        let h = |a: f64| b0 / -(-a).exp_m1();
        h(a1) * r.powf(p - 1.0) * (-b0 - a1).exp() * self.c2
            - 2.0 * h(a2) * r.powf(p - 0.5) * (-b0).exp() * (self.c1 * self.c2).sqrt()
            + h(a3) * r.powf(p) * (-2.0 * b0).exp() * self.c1
    }
}

/// Romberg table on values at `h, h/2, h/4, …`, assuming an expansion in
/// integer powers of `h`.
fn romberg(values: &[f64]) -> Option<f64> {
    if values.len() < 2 {
        return None;
    }
    let mut col = values.to_vec();
    let mut factor = 2.0;
    while col.len() > 1 {
        col = col.windows(2).map(|w| w[1] + (w[1] - w[0]) / (factor - 1.0)).collect();
        factor *= 2.0;
    }
    Some(col[0])
}

/// Longest run of exact halvings in a descending list.
fn halving_run(b0s: &[f64]) -> Vec<usize> {
    let mut best: Vec<usize> = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    for i in 0..b0s.len() {
        if cur
            .last()
            .is_some_and(|&j| (b0s[j] / 2.0 - b0s[i]).abs() <= 1e-15 * b0s[j])
        {
            cur.push(i);
        } else {
            cur = vec![i];
        }
        if cur.len() > best.len() {
            best = cur.clone();
        }
    }
    best
}

pub fn chain_audit(m: u32, b0_list: &[f64]) -> Result<ChainAuditReport> {
    if m < 1 {
        return Err(Error::domain("m must be a positive integer"));
    }
    if let Some(b) = b0_list.iter().find(|&&b| !(b > 0.0 && b <= 1.0)) {
        return Err(Error::domain(format!("B0 must lie in (0, 1], got {b}")));
    }
    let p = Rational::one() + rational::frac(1, i64::from(m));
    let fam = Family {
        p: rational::to_f64(&p),
        c1: PI,
        c2: PI / f64::from(m + 1),
    };
    let limit = fam.limit();

    let mut b0s = b0_list.to_vec();
    b0s.sort_by(|a, b| b.total_cmp(a));
    b0s.dedup();
    let rows: Vec<ChainRow> = b0s
        .iter()
        .map(|&b0| {
            let geometric_sum = fam.geometric(b0);
            let envelope = fam.envelope(b0);
            ChainRow {
                b0,
                k0: fam.k0(b0),
                direct_sum: fam.direct(b0),
                geometric_sum,
                envelope,
                gap_envelope: envelope - limit,
                gap_sum: geometric_sum - limit,
            }
        })
        .collect();

    let monotone = rows.windows(2).all(|w| w[1].envelope >= w[0].envelope) && rows.iter().all(|r| r.envelope <= limit);
    let run = halving_run(&b0s);
    let richardson = romberg(&run.iter().map(|&i| rows[i].envelope).collect::<Vec<_>>());
    let max_sum_disagreement = rows
        .iter()
        .map(|r| (r.direct_sum - r.geometric_sum).abs() / limit)
        .fold(0.0, f64::max);
    let theta_p = theta_eval(fam.p)?;

    Ok(ChainAuditReport {
        m,
        identity_holds: chain_identity(&p),
        p,
        c1: fam.c1,
        c2: fam.c2,
        sums_below_c1: rows.iter().all(|r| r.direct_sum <= fam.c1),
        envelope_below_sum: rows.iter().all(|r| r.envelope <= r.geometric_sum * (1.0 + 1e-12)),
        rows,
        limit,
        monotone,
        richardson_gap: richardson.map(|v| v - limit),
        richardson,
        max_sum_disagreement,
        theta_bound_holds: theta_p <= fam.c1 / fam.c2,
        theta_p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn halvings(k: u32) -> Vec<f64> {
        (0..=k).map(|i| 0.5f64.powi(i as i32)).collect()
    }

    #[test]
    fn identity_examples() {
        assert!(chain_identity(&rational::frac(6, 5)));
        let p = rational::frac(6, 5);
        let lhs = &p / (&p - rational::int(1)) - rational::int(4) * &p / (rational::int(2) * &p - rational::int(1))
            + rational::int(1);
        assert_eq!(lhs, rational::frac(25, 7));
        assert!(!chain_identity(&rational::int(1)));
    }

    #[test]
    fn limit_matches_closed_identity() {
        for m in [1u32, 3, 10] {
            let rep = chain_audit(m, &[1.0]).unwrap();
            let p = 1.0 + 1.0 / f64::from(m);
            let want = rep.c1 * (rep.c2 / rep.c1).powf(p) / ((p - 1.0) * (2.0 * p - 1.0));
            assert!((rep.limit - want).abs() < 1e-12 * want);
        }
    }

    #[test]
    fn m3_audit() {
        let rep = chain_audit(3, &halvings(6)).unwrap();
        assert!(rep.all_hold(), "{rep:#?}");
        let gap = rep.richardson_gap.unwrap();
        assert!(gap.abs() < 1e-6, "{gap}");
        // Raw envelope approaches the limit roughly linearly in B0.
        let g: Vec<f64> = rep.rows.iter().map(|r| r.gap_envelope.abs()).collect();
        assert!(g.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn m1_boundary() {
        let rep = chain_audit(1, &halvings(3)).unwrap();
        assert!((rep.theta_p - 1.0 / 3f64.sqrt()).abs() < 1e-14);
        assert!(rep.theta_bound_holds && rep.all_hold(), "{rep:#?}");
    }

    #[test]
    fn unsorted_input_and_errors() {
        let rep = chain_audit(2, &[0.25, 1.0, 0.5]).unwrap();
        assert_eq!(rep.rows[0].b0, 1.0);
        assert!(rep.richardson.is_some());
        assert!(chain_audit(0, &[1.0]).is_err());
        assert!(chain_audit(2, &[0.0]).is_err());
        assert!(chain_audit(2, &[1.5]).is_err());
    }
}
