use num_traits::One;

use super::{aitken_tail, mc_sublevel, scaled_tail, Extrapolation, BOUND_TOLERANCE, TAIL_START};
use crate::error::{Error, Result};
use crate::montecarlo::{McConfig, McEstimate};
use crate::rational::{self, Rational};
use crate::toric::{
    jumping_number, weighted_norm_sq, ExponentVector, ExtRational, MonomialWeight, PiScaled, PolyFunction,
};

/// Closed cone in `t ∈ R²_{≥0}` spanned by two rays, on which the
/// piecewise-linear exponent equals `form · t`.
#[derive(Clone, Debug, PartialEq)]
pub struct Cone {
    pub rays: [[f64; 2]; 2],
    pub form: [f64; 2],
}

fn dot(x: &[f64; 2], y: &[f64; 2]) -> f64 {
    x[0] * y[0] + x[1] * y[1]
}

/// `∫_{cone(ρ1,ρ2)} e^{−L·t} dt = |det(ρ1,ρ2)| / ((L·ρ1)(L·ρ2))`, `+∞` unless
/// `L` is positive on both rays.
pub fn cone_integral(l: &[f64; 2], rays: &[[f64; 2]; 2]) -> f64 {
    let (l1, l2) = (dot(l, &rays[0]), dot(l, &rays[1]));
    if l1 <= 0.0 || l2 <= 0.0 {
        return f64::INFINITY;
    }
    (rays[0][0] * rays[1][1] - rays[0][1] * rays[1][0]).abs() / (l1 * l2)
}

/// Same integral in polar form, `∫ dϕ / (L·u(ϕ))²`, by tanh-sinh quadrature.
pub fn cone_integral_quadrature(l: &[f64; 2], rays: &[[f64; 2]; 2]) -> f64 {
    if dot(l, &rays[0]) <= 0.0 || dot(l, &rays[1]) <= 0.0 {
        return f64::INFINITY;
    }
    let (p0, p1) = (rays[0][1].atan2(rays[0][0]), rays[1][1].atan2(rays[1][0]));
    let (lo, hi) = if p0 <= p1 { (p0, p1) } else { (p1, p0) };
    quadrature::integrate(
        |phi| {
            let d = l[0] * phi.cos() + l[1] * phi.sin();
            1.0 / (d * d)
        },
        lo,
        hi,
        1e-13,
    )
    .integral
}

/// Cones of linearity of `w(t) = a·t + δ·min(a·t, β·t)` on the quadrant.
pub fn piecewise_cones(a: &[f64; 2], beta: &[f64; 2], delta: f64) -> Vec<Cone> {
    let d = [a[0] - beta[0], a[1] - beta[1]];
    let form = |use_a: bool| {
        let m = if use_a { a } else { beta };
        [a[0] + delta * m[0], a[1] + delta * m[1]]
    };
    let e1 = [1.0, 0.0];
    let e2 = [0.0, 1.0];
    if d[0] * d[1] < 0.0 {
        // a·t = β·t along the ray orthogonal to d inside the quadrant
        let split = [d[1].abs(), d[0].abs()];
        let side = |ray: &[f64; 2]| dot(&d, ray) <= 0.0; // a·t ≤ β·t there
        vec![
            Cone {
                rays: [e1, split],
                form: form(side(&e1)),
            },
            Cone {
                rays: [split, e2],
                form: form(side(&e2)),
            },
        ]
    } else {
        let a_smaller = d[0] <= 0.0 && d[1] <= 0.0;
        vec![Cone {
            rays: [e1, e2],
            form: form(a_smaller),
        }]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeltaRow {
    pub delta: u32,
    /// `K^{-1}_{ψ+δ max{ψ,log|F|²}, F^{1+δ}}(0) = ‖F^{1+δ}‖²_0`.
    pub k_inv: PiScaled,
    /// Same value from the cone decomposition (angular quadrature).
    pub k_inv_quadrature: f64,
    /// Jumping number of `F^{1+δ}` for the piecewise weight.
    pub piecewise_jumping: f64,
    /// `F^{1+δ} ∉ I_+(2c·weight)`: the weighted cone integral diverges at `2c`
    /// and converges just below it.
    pub outside_ideal: bool,
    /// `C_{ψ,F,δ}`; the sup factor is 1 for unit-modulus monomials.
    pub c_delta: f64,
    /// `C_{ψ,F,δ} / (1 + 1/δ)`.
    pub rhs_term: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct JmReport {
    /// Jumping number of `F` for the input weight.
    pub c: Rational,
    /// `2c·a`, the weight the estimate is applied to.
    pub normalized: Vec<Rational>,
    pub hypothesis_ok: bool,
    /// `(R, r, e^R μ({ψ − log|F|² < −R}))` with `r = e^{−R/2}`.
    pub lhs_rows: Vec<(f64, f64, f64)>,
    pub liminf_estimate: f64,
    pub extrapolation: Extrapolation,
    pub deltas: Vec<DeltaRow>,
    pub rhs: f64,
    pub rhs_argmax_delta: u32,
    pub slack: f64,
}

impl JmReport {
    pub fn holds(&self) -> bool {
        !self.hypothesis_ok || self.slack >= -BOUND_TOLERANCE
    }
}

/// Exponent vector of a unit-modulus monomial `F`, or why there is none.
fn unit_monomial(f: &PolyFunction) -> Result<&ExponentVector> {
    match f.as_monomial() {
        Some((beta, c)) if c.norm_sq().is_one() => Ok(beta),
        Some(_) => Err(Error::Unsupported(
            "exact path needs a coefficient of modulus one".into(),
        )),
        None => Err(Error::Unsupported(
            "exact path needs a monomial F; use jm_lhs_mc for the left-hand side".into(),
        )),
    }
}

fn embed2(v: &[f64]) -> [f64; 2] {
    match v {
        [x] => [*x, 0.0],
        [x, y] => [*x, *y],
        _ => unreachable!("dimension checked"),
    }
}

fn delta_row(a2: &[f64; 2], beta: &ExponentVector, delta: u32) -> DeltaRow {
    let n = beta.dim();
    let d = f64::from(delta);
    let b2 = embed2(&beta.entries().iter().map(|&e| e as f64).collect::<Vec<_>>());
    let gamma = beta.scaled(1 + delta);
    let k_inv = PiScaled::new(
        gamma
            .entries()
            .iter()
            .fold(Rational::one(), |acc, &g| acc / rational::int(g as i64 + 1)),
        n as i32,
    );
    let mut g1: [f64; 2] = [1.0, 1.0];
    for (j, &g) in gamma.entries().iter().enumerate() {
        g1[j] = g as f64 + 1.0;
    }
    let pi_n = std::f64::consts::PI.powi(n as i32);
    let cones = if n == 2 {
        piecewise_cones(a2, &b2, d)
    } else {
        // one variable: a single ray; pad with a dummy direction of zero weight
        vec![Cone {
            rays: [[1.0, 0.0], [0.0, 1.0]],
            form: [a2[0] + d * a2[0].min(b2[0]), 0.0],
        }]
    };
    let k_inv_quadrature = pi_n
        * if n == 2 {
            cones
                .iter()
                .map(|c| cone_integral_quadrature(&g1, &c.rays))
                .sum::<f64>()
        } else {
            1.0 / g1[0]
        };
    let mut jump = f64::INFINITY;
    for cone in &cones {
        for ray in &cone.rays {
            if n == 1 && ray[0] == 0.0 {
                continue;
            }
            let w = dot(&cone.form, ray);
            if w > 0.0 {
                jump = jump.min(dot(&g1, ray) / (2.0 * w));
            }
        }
    }
    let weighted = |p: f64| -> f64 {
        cones
            .iter()
            .map(|c| {
                let l = [g1[0] - p * c.form[0], g1[1] - p * c.form[1]];
                if n == 2 {
                    cone_integral(&l, &c.rays)
                } else if l[0] > 0.0 {
                    1.0 / l[0]
                } else {
                    f64::INFINITY
                }
            })
            .sum()
    };
    let outside_ideal =
        jump.is_finite() && weighted(2.0 * jump).is_infinite() && weighted(2.0 * jump * (1.0 - 1e-6)).is_finite();
    let c_delta = k_inv.to_f64();
    DeltaRow {
        delta,
        k_inv,
        k_inv_quadrature,
        piecewise_jumping: jump,
        outside_ideal,
        c_delta,
        rhs_term: c_delta * d / (d + 1.0),
    }
}

/// Lower-bound report for `e^R μ({ψ − log|F|² < −R})`.
///
/// `ψ = Σ a_j log|z_j|²` is first replaced by `2c ψ` with `c` the jumping
/// number of `F`, which makes `|F|² e^{−ψ}` non-integrable by construction.
/// With `R = −2 log r` the grid values are `r^{−2} μ({cψ − log|F| < log r})`.
/// Exact path: `F` a unit-modulus monomial, `n ≤ 2`.
pub fn jm_asymptote_report(
    f: &PolyFunction,
    a: &MonomialWeight,
    delta_list: &[u32],
    r_grid: &[f64],
) -> Result<JmReport> {
    if r_grid.is_empty() || delta_list.is_empty() {
        return Err(Error::domain("R grid and delta list must be nonempty"));
    }
    if let Some(&bad) = delta_list.iter().find(|&&d| d == 0) {
        return Err(Error::domain(format!("delta must be a positive integer, got {bad}")));
    }
    if a.dim() != f.dim() {
        return Err(Error::domain("function and weight dimensions differ"));
    }
    if a.dim() > 2 {
        return Err(Error::Unsupported("exact path is limited to n <= 2".into()));
    }
    let beta = unit_monomial(f)?;
    let c = match jumping_number(f, a)? {
        ExtRational::Finite(c) => c,
        ExtRational::Infinite => {
            return Err(Error::Precondition {
                gate: "jumping-number-finite",
                detail: "the weight vanishes identically".into(),
            })
        }
    };
    let scaled = a.scaled(&(rational::int(2) * &c))?;
    let hypothesis_ok = !weighted_norm_sq(f, &scaled, &rational::int(1))?.is_finite();
    let af = scaled.to_f64();
    let d: Vec<f64> = af.iter().zip(beta.entries()).map(|(x, &b)| x - b as f64).collect();
    let pi_n = std::f64::consts::PI.powi(a.dim() as i32);
    let lhs_rows = r_grid
        .iter()
        .map(|&r| Ok((r, (-0.5 * r).exp(), pi_n * scaled_tail(&d, r, 1.0)?)))
        .collect::<Result<Vec<_>>>()?;
    let tail: Vec<f64> = lhs_rows
        .iter()
        .filter(|row| row.0 >= TAIL_START)
        .map(|row| row.2)
        .collect();
    let pool: Vec<f64> = if tail.is_empty() {
        lhs_rows.iter().map(|row| row.2).collect()
    } else {
        tail.clone()
    };
    let liminf_estimate = pool.iter().copied().fold(f64::INFINITY, f64::min);

    let a2 = embed2(&af);
    let deltas: Vec<DeltaRow> = delta_list.iter().map(|&dl| delta_row(&a2, beta, dl)).collect();
    let best = deltas
        .iter()
        .max_by(|x, y| x.rhs_term.total_cmp(&y.rhs_term))
        .expect("nonempty");
    Ok(JmReport {
        rhs: best.rhs_term,
        rhs_argmax_delta: best.delta,
        slack: liminf_estimate - best.rhs_term,
        c,
        normalized: scaled.coeffs().to_vec(),
        hypothesis_ok,
        lhs_rows,
        liminf_estimate,
        extrapolation: aitken_tail(&tail),
        deltas,
    })
}

/// Monte Carlo `e^R μ({2cψ − log|F|² < −R})` for any nonzero `F`.
pub fn jm_lhs_mc(f: &PolyFunction, a: &MonomialWeight, r: f64, config: &McConfig) -> Result<McEstimate> {
    let c = jumping_number(f, a)?
        .finite()
        .cloned()
        .ok_or_else(|| Error::Precondition {
            gate: "jumping-number-finite",
            detail: "weight vanishes".into(),
        })?;
    let af = a.scaled(&(rational::int(2) * c))?.to_f64();
    let g = f.clone();
    let mut est = mc_sublevel(
        a.dim(),
        move |z| {
            let psi: f64 = af
                .iter()
                .zip(z)
                .filter(|(x, _)| **x != 0.0)
                .map(|(x, zj)| x * zj.norm_sqr().ln())
                .sum();
            psi - g.evaluate(z).norm_sqr().ln()
        },
        r,
        config,
    )?;
    let scale = r.exp();
    est.mean *= scale;
    est.std_error *= scale;
    Ok(est)
}
