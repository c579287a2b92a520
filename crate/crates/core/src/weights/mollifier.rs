//! The bump `ρ(x) = exp(−1/(1−x²))/Z` on `(−1, 1)` and its first three
//! antiderivatives, tabulated once and interpolated with cubic Hermite
//! polynomials (each table's derivative is the previous table, so the
//! interpolants use exact slopes).

use std::sync::OnceLock;

const NODES: usize = 4096;

fn raw_bump(x: f64) -> f64 {
    if x.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - x * x)).exp()
    }
}

pub(crate) struct Tables {
    z: f64,
    /// second moment `∫ x² ρ`
    sigma2: f64,
    step: f64,
    rho: Vec<f64>,
    cdf: Vec<f64>,
    i1: Vec<f64>,
    i2: Vec<f64>,
}

fn node(i: usize, step: f64) -> f64 {
    -1.0 + i as f64 * step
}

/// `∫` over one interval of the cubic Hermite interpolant.
fn hermite_area(h: f64, f0: f64, f1: f64, d0: f64, d1: f64) -> f64 {
    h * (f0 + f1) / 2.0 + h * h * (d0 - d1) / 12.0
}

fn build() -> Tables {
    let z = quadrature::integrate(raw_bump, -1.0, 1.0, 1e-16).integral;
    let sigma2 = quadrature::integrate(|x| x * x * raw_bump(x), -1.0, 1.0, 1e-16).integral / z;
    let step = 2.0 / (NODES - 1) as f64;
    let rho: Vec<f64> = (0..NODES).map(|i| raw_bump(node(i, step)) / z).collect();
    let mut cdf = vec![0.0; NODES];
    for i in 1..NODES {
        let piece = quadrature::integrate(raw_bump, node(i - 1, step), node(i, step), 1e-18).integral / z;
        cdf[i] = cdf[i - 1] + piece;
    }
    // pin the ends; the interior error is far below these adjustments' scale
    let total = cdf[NODES - 1];
    for c in &mut cdf {
        *c /= total;
    }
    let mut i1 = vec![0.0; NODES];
    let mut i2 = vec![0.0; NODES];
    for i in 1..NODES {
        i1[i] = i1[i - 1] + hermite_area(step, cdf[i - 1], cdf[i], rho[i - 1], rho[i]);
    }
    for i in 1..NODES {
        i2[i] = i2[i - 1] + hermite_area(step, i1[i - 1], i1[i], cdf[i - 1], cdf[i]);
    }
    Tables {
        z,
        sigma2,
        step,
        rho,
        cdf,
        i1,
        i2,
    }
}

pub(crate) fn tables() -> &'static Tables {
    static CELL: OnceLock<Tables> = OnceLock::new();
    CELL.get_or_init(build)
}

fn hermite(t: &Tables, f: &[f64], df: &[f64], x: f64) -> f64 {
    let pos = (x + 1.0) / t.step;
    let i = (pos.floor() as usize).min(NODES - 2);
    let s = pos - i as f64;
    let (s2, s3) = (s * s, s * s * s);
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    h00 * f[i] + h10 * t.step * df[i] + h01 * f[i + 1] + h11 * t.step * df[i + 1]
}

/// Normalizing constant `∫_{−1}^{1} exp(−1/(1−x²)) dx`.
pub fn bump_mass() -> f64 {
    tables().z
}

pub fn bump(x: f64) -> f64 {
    raw_bump(x) / tables().z
}

/// `C(x) = ∫_{−∞}^x ρ`.
pub fn cdf(x: f64) -> f64 {
    let t = tables();
    if x <= -1.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        hermite(t, &t.cdf, &t.rho, x)
    }
}

/// `∫_{−∞}^x C`; equals `x` for `x ≥ 1` since `ρ` is even.
pub fn cdf_integral(x: f64) -> f64 {
    let t = tables();
    if x <= -1.0 {
        0.0
    } else if x >= 1.0 {
        x
    } else {
        hermite(t, &t.i1, &t.cdf, x)
    }
}

/// `∫_{−∞}^x ∫_{−∞}^y C`; equals `(x² + σ²)/2` for `x ≥ 1`.
pub fn cdf_double_integral(x: f64) -> f64 {
    let t = tables();
    if x <= -1.0 {
        0.0
    } else if x >= 1.0 {
        0.5 * (x * x + t.sigma2)
    } else {
        hermite(t, &t.i2, &t.i1, x)
    }
}
