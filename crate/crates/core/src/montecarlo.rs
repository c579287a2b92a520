//! Importance-sampled integrals over the unit polydisc.
//!
//! Points are drawn in log-polar form `z_j = e^{−t_j/2} e^{iϑ_j}` with
//! `t_j ~ Exp(λ_j)` and uniform angles. Since `dλ = Π π e^{−t_j} dt_j dϑ_j/2π`,
//! the unbiased weight of a sample is `Π π e^{(λ_j−1) t_j}/λ_j`.
//!
//! Samples are split into `partitions` contiguous blocks; block `k` draws from
//! ChaCha8 seeded with `seed` on stream `k`. Blocks run in parallel and are
//! combined in index order, so results depend only on (seed, samples,
//! partitions).

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::toric::{weighted_norm_sq, MonomialWeight, PolyFunction};

pub const MIN_SAMPLES: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct McConfig {
    pub samples: usize,
    pub seed: u64,
    pub partitions: usize,
}

impl McConfig {
    pub fn new(samples: usize, seed: u64) -> Self {
        McConfig {
            samples,
            seed,
            partitions: 8,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.samples < MIN_SAMPLES {
            return Err(Error::domain(format!(
                "Monte Carlo needs at least {MIN_SAMPLES} samples, got {}",
                self.samples
            )));
        }
        if self.partitions == 0 || self.partitions > self.samples {
            return Err(Error::domain(format!("bad partition count {}", self.partitions)));
        }
        Ok(())
    }
}

/// Estimate on the truncated box `t ∈ [0, cutoff]^n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncatedEstimate {
    pub cutoff: f64,
    pub mean: f64,
    pub std_error: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct McEstimate {
    /// `+∞` when `divergent`.
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
    /// Set from the exact criterion, never from the samples.
    pub divergent: bool,
    /// For divergent integrals: estimates on growing truncations.
    pub truncated_growth: Vec<TruncatedEstimate>,
}

impl McEstimate {
    /// `|mean − exact| ≤ k·σ`, with a relative floor of `1e−12` for
    /// zero-variance cases (a monomial sampled at its own rate).
    pub fn within_sigmas(&self, exact: f64, k: f64) -> bool {
        !self.divergent && (self.mean - exact).abs() <= k * self.std_error + 1e-12 * exact.abs()
    }
}

/// How coordinates are drawn.
#[derive(Clone, Debug)]
pub enum Proposal {
    /// `t_j ~ Exp(λ_j)`.
    Exponential(Vec<f64>),
    /// `t_j` uniform on `[0, T]`.
    Box(f64),
}

impl Proposal {
    fn dim(&self, n: usize) -> usize {
        match self {
            Proposal::Exponential(r) => r.len(),
            Proposal::Box(_) => n,
        }
    }
}

#[derive(Default, Clone, Copy)]
struct Moments {
    n: usize,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, o: Moments) -> Moments {
        if self.n == 0 {
            return o;
        }
        if o.n == 0 {
            return self;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        Moments {
            n,
            mean: self.mean + d * o.n as f64 / n as f64,
            m2: self.m2 + o.m2 + d * d * (self.n as f64) * (o.n as f64) / n as f64,
        }
    }
}

/// `∫_{Δ^n} g dλ` where `integrand(t, z)` returns `g(z)` at
/// `z_j = e^{−t_j/2}e^{iϑ_j}`. Returns (mean, standard error).
pub fn integrate<G>(n: usize, proposal: &Proposal, config: &McConfig, integrand: G) -> Result<(f64, f64)>
where
    G: Fn(&[f64], &[Complex64]) -> f64 + Sync,
{
    config.validate()?;
    if n == 0 || proposal.dim(n) != n {
        return Err(Error::domain("proposal dimension does not match the integral"));
    }
    match proposal {
        Proposal::Exponential(r) if r.iter().any(|&l| !(l > 0.0) || !l.is_finite()) => {
            return Err(Error::domain("proposal rates must be positive"));
        }
        Proposal::Box(t) if !(*t > 0.0) => return Err(Error::domain("box cutoff must be positive")),
        _ => {}
    }
    let parts = config.partitions;
    let base = config.samples / parts;
    let extra = config.samples % parts;
    let blocks: Vec<Moments> = (0..parts)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(k as u64);
            let count = base + usize::from(k < extra);
            let mut t = vec![0.0; n];
            let mut z = vec![Complex64::new(0.0, 0.0); n];
            let mut acc = Moments::default();
            for _ in 0..count {
                let mut w = 1.0;
                for j in 0..n {
                    let u: f64 = rng.gen();
                    let (tj, wj) = match proposal {
                        Proposal::Exponential(r) => {
                            let l = r[j];
                            let tj = -(-u).ln_1p() / l;
                            (tj, PI * ((l - 1.0) * tj).exp() / l)
                        }
                        Proposal::Box(cut) => {
                            let tj = u * cut;
                            (tj, PI * (-tj).exp() * cut)
                        }
                    };
                    let phase: f64 = rng.gen::<f64>() * 2.0 * PI;
                    t[j] = tj;
                    z[j] = Complex64::from_polar((-0.5 * tj).exp(), phase);
                    w *= wj;
                }
                let g = integrand(&t, &z);
                acc.push(if g == 0.0 { 0.0 } else { g * w });
            }
            acc
        })
        .collect();
    let total = blocks.into_iter().fold(Moments::default(), Moments::merge);
    let var = if total.n > 1 {
        total.m2 / (total.n - 1) as f64
    } else {
        0.0
    };
    Ok((total.mean, (var / total.n as f64).sqrt()))
}

/// `|F(z)|² e^{−pφ(z)}` in log-radial form.
fn weighted_integrand<'a>(
    f: &'a PolyFunction,
    a: &'a [f64],
    p: f64,
) -> impl Fn(&[f64], &[Complex64]) -> f64 + Sync + 'a {
    let a = a.to_vec();
    move |t, z| {
        let v = f.evaluate(z).norm_sqr();
        let e: f64 = a.iter().zip(t).map(|(aj, tj)| p * aj * tj).sum();
        v * e.exp()
    }
}

/// Cutoffs used to exhibit growth of divergent integrals.
pub const GROWTH_CUTOFFS: [f64; 4] = [4.0, 8.0, 16.0, 32.0];

/// Monte Carlo estimate of `∫_{Δ^n} |F|² e^{−pφ} dλ`.
///
/// Proposal rates are `λ_j = min_α (α_j + 1 − p a_j)`, which keeps the
/// importance weights bounded for every convergent case.
pub fn mc_weighted_norm(f: &PolyFunction, a: &MonomialWeight, p: &Rational, config: &McConfig) -> Result<McEstimate> {
    config.validate()?;
    let exact = weighted_norm_sq(f, a, p)?;
    let af = a.to_f64();
    let pf = rational::to_f64(p);
    let integrand = weighted_integrand(f, &af, pf);
    let n = f.dim();
    if !exact.is_finite() {
        let truncated_growth = GROWTH_CUTOFFS
            .iter()
            .map(|&cut| {
                integrate(n, &Proposal::Box(cut), config, &integrand).map(|(mean, std_error)| TruncatedEstimate {
                    cutoff: cut,
                    mean,
                    std_error,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(McEstimate {
            mean: f64::INFINITY,
            std_error: f64::INFINITY,
            samples: config.samples,
            divergent: true,
            truncated_growth,
        });
    }
    if f.is_zero() {
        return Ok(McEstimate {
            mean: 0.0,
            std_error: 0.0,
            samples: config.samples,
            divergent: false,
            truncated_growth: vec![],
        });
    }
    let rates: Vec<f64> = (0..n)
        .map(|j| {
            f.support()
                .map(|alpha| alpha.entries()[j] as f64 + 1.0 - pf * af[j])
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let (mean, std_error) = integrate(n, &Proposal::Exponential(rates), config, &integrand)?;
    Ok(McEstimate {
        mean,
        std_error,
        samples: config.samples,
        divergent: false,
        truncated_growth: vec![],
    })
}
