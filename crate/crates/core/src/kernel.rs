//! Generalized Bergman kernels at the origin of the unit polydisc and the
//! effective-exponent pipeline built on them.
//!
//! Every infimum here has the form `inf{‖F1‖²_0 : (F1 − F, 0) ∈ I}` for a
//! monomial ideal `I`. A holomorphic `G` on `Δ^n` has germ in `I` iff every
//! monomial of its Taylor series lies in `I` (monomial ideals are closed under
//! taking the monomials of a series), and monomials are orthogonal in
//! `L²(Δ^n)`. So the admissible `F1` form the affine space `F + {Taylor
//! support in I}`, and the minimizer is `F` with its terms in `I` deleted.

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::scalars;
use crate::toric::{
    jumping_number, membership, monomial_norm_sq, multiplier_ideal, weighted_norm_sq, ExponentVector, ExtRational,
    IdealKind, MonomialIdeal, MonomialWeight, PiScaled, PolyFunction,
};

pub use crate::montecarlo::{mc_weighted_norm, McConfig, McEstimate};

#[derive(Clone, Debug, PartialEq)]
pub struct KernelResult {
    /// `K^{-1}_{φ,F}(0)`.
    pub k_inv: PiScaled,
    pub jumping: ExtRational,
    pub ideal: MonomialIdeal,
    /// Terms of `F` that survive the projection.
    pub projected_support: Vec<ExponentVector>,
}

impl KernelResult {
    /// `K_{φ,F}(0) = 1/K^{-1}`.
    pub fn kernel(&self) -> PiScaled {
        self.k_inv.recip()
    }
}

/// Squared distance from `F` to the functions with Taylor support in `ideal`.
fn projection(f: &PolyFunction, ideal: &MonomialIdeal) -> (PiScaled, Vec<ExponentVector>) {
    let mut total = Rational::zero();
    let mut kept = Vec::new();
    for (alpha, c) in f.terms() {
        if !ideal.contains(alpha) {
            let norm = monomial_norm_sq(alpha);
            total += c.norm_sq() * norm.coeff().expect("monomial norms are finite");
            kept.push(alpha.clone());
        }
    }
    (PiScaled::new(total, f.dim() as i32), kept)
}

/// The constraint ideal `I_+(2c φ)` with `c` the jumping number of `F`.
///
/// With `c = +∞` (φ ≡ 0) the constraint degenerates to `F1(0) = F(0)`, i.e.
/// the maximal ideal, which recovers the classical Bergman kernel for `F = 1`.
fn constraint_ideal(dim: usize, c: &ExtRational, a: &MonomialWeight) -> Result<MonomialIdeal> {
    match c {
        ExtRational::Finite(c) => {
            let b: Vec<Rational> = a.coeffs().iter().map(|aj| rational::int(2) * c * aj).collect();
            Ok(multiplier_ideal(&b, IdealKind::Plus)?.ideal)
        }
        ExtRational::Infinite => Ok(MonomialIdeal::maximal(dim)),
    }
}

pub fn kernel_inv(f: &PolyFunction, a: &MonomialWeight) -> Result<KernelResult> {
    let jumping = jumping_number(f, a)?;
    let ideal = constraint_ideal(f.dim(), &jumping, a)?;
    let (k_inv, projected_support) = projection(f, &ideal);
    Ok(KernelResult {
        k_inv,
        jumping,
        ideal,
        projected_support,
    })
}

/// `C_{F,pφ}(0) = inf{‖F1‖²_0 : (F1 − F, 0) ∈ I(pφ)}`; zero iff `F ∈ I(pφ)`.
pub fn c_fp(f: &PolyFunction, a: &MonomialWeight, p: &Rational) -> Result<PiScaled> {
    if f.dim() != a.dim() {
        return Err(Error::domain("function and weight dimensions differ"));
    }
    let b = a
        .scaled(p)
        .map_err(|_| Error::domain("exponent p must be nonnegative"))?;
    let ideal = multiplier_ideal(b.coeffs(), IdealKind::Plain)?.ideal;
    Ok(projection(f, &ideal).0)
}

/// Bergman kernel `K(z0)` of the unit polydisc; only the center is exact.
pub fn classical_bergman(n: usize, z0: &[Complex64]) -> Result<PiScaled> {
    if n == 0 {
        return Err(Error::domain("dimension must be at least 1"));
    }
    if z0.len() != n {
        return Err(Error::domain(format!(
            "point has {} coordinates, expected {n}",
            z0.len()
        )));
    }
    if z0.iter().any(|z| !z.is_zero()) {
        return Err(Error::Unsupported(
            "Bergman kernel is only computed at the center".into(),
        ));
    }
    Ok(PiScaled::new(Rational::one(), -(n as i32)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct EffectivenessReport {
    /// `‖F‖²_φ`.
    pub c1: PiScaled,
    /// `K^{-1}_{φ,F}(0)`.
    pub c2: PiScaled,
    pub kernel: KernelResult,
    pub ratio: f64,
    /// Exact `C1/C2` (both carry `π^n`).
    pub ratio_exact: Rational,
    pub p_effective: f64,
    pub membership_p: f64,
    pub membership_verdict: bool,
    pub berndtsson_p: f64,
}

/// Factor applied to `p_effective` before testing membership; the bound's
/// inequality is strict.
pub const MEMBERSHIP_BACKOFF: f64 = 1.0 - 1e-9;

pub fn effective_p_report(f: &PolyFunction, a: &MonomialWeight) -> Result<EffectivenessReport> {
    let c1 = weighted_norm_sq(f, a, &Rational::one())?;
    if !c1.is_finite() {
        return Err(Error::Precondition {
            gate: "c1-finite",
            detail: format!(
                "||F||^2_phi diverges: jumping number {} is not above 1/2",
                jumping_number(f, a)?
            ),
        });
    }
    let kernel = kernel_inv(f, a)?;
    let c2 = kernel.k_inv.clone();
    if c2.is_zero() {
        return Err(Error::Precondition {
            gate: "kernel-inverse-positive",
            detail: "F lies in the constraint ideal, so K^{-1} = 0".into(),
        });
    }
    let ratio_exact = c1.exact_ratio(&c2).expect("C1 and C2 carry the same power of pi");
    let ratio = rational::to_f64(&ratio_exact);
    let p_effective = scalars::theta_invert(ratio)?;
    let membership_p = p_effective * MEMBERSHIP_BACKOFF;
    let membership_verdict = membership(f, a, &rational::from_f64(membership_p)?)?;
    let c1f = c1.to_f64();
    let c2f = c2.to_f64();
    Ok(EffectivenessReport {
        berndtsson_p: 1.0 + c2f / (200.0 * c1f),
        c1,
        c2,
        kernel,
        ratio,
        ratio_exact,
        p_effective,
        membership_p,
        membership_verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use crate::toric::Coefficient;

    fn z_pow(m: u32) -> PolyFunction {
        PolyFunction::monomial([m].into())
    }

    #[test]
    fn z_power_family() {
        for m in 1..=10u32 {
            let a = MonomialWeight::from_ints(&[m as i64]).unwrap();
            let k = kernel_inv(&z_pow(m), &a).unwrap();
            assert_eq!(k.k_inv, PiScaled::new(frac(1, m as i64 + 1), 1));
            assert_eq!(k.kernel(), PiScaled::new(int(m as i64 + 1), -1));
            let edge = int(1) + frac(1, m as i64);
            assert_eq!(c_fp(&z_pow(m), &a, &edge).unwrap(), k.k_inv);
            assert!(c_fp(&z_pow(m), &a, &(edge - frac(1, 100))).unwrap().is_zero());
        }
    }

    #[test]
    fn line_example() {
        // sin²θ = 1/4, cos²θ = 3/4
        let f = PolyFunction::zero(2)
            .with_term([1, 0], Coefficient::sqrt_of(frac(3, 4)).unwrap())
            .unwrap()
            .with_term([0, 1], Coefficient::sqrt_of(frac(1, 4)).unwrap())
            .unwrap();
        let a = MonomialWeight::new(vec![frac(2, 7), int(0)]).unwrap();
        let k = kernel_inv(&f, &a).unwrap();
        assert_eq!(k.jumping, ExtRational::Finite(frac(7, 4)));
        assert_eq!(k.k_inv, PiScaled::new(frac(1, 8), 2));
    }

    #[test]
    fn third_example() {
        let f = PolyFunction::zero(2)
            .with_term([1, 0], Coefficient::one())
            .unwrap()
            .with_term([0, 2], Coefficient::one())
            .unwrap();
        let a = MonomialWeight::from_ints(&[1, 0]).unwrap();
        let k = kernel_inv(&f, &a).unwrap();
        assert_eq!(k.k_inv, PiScaled::new(frac(1, 3), 2));
        assert_eq!(k.projected_support, vec![ExponentVector::from([0, 2])]);
        assert_eq!(c_fp(&f, &a, &int(1)).unwrap(), k.k_inv);
    }

    #[test]
    fn bergman_center_only() {
        assert_eq!(
            classical_bergman(1, &[Complex64::zero()]).unwrap(),
            PiScaled::pi_pow(-1)
        );
        assert_eq!(
            classical_bergman(2, &[Complex64::zero(); 2]).unwrap(),
            PiScaled::pi_pow(-2)
        );
        assert!(matches!(
            classical_bergman(1, &[Complex64::new(0.1, 0.0)]),
            Err(Error::Unsupported(_))
        ));
        let a = MonomialWeight::from_ints(&[1]).unwrap();
        let k = kernel_inv(&PolyFunction::one(1), &a).unwrap().kernel();
        assert!(k <= classical_bergman(1, &[Complex64::zero()]).unwrap());
    }

    #[test]
    fn effectiveness_examples() {
        let a = MonomialWeight::from_ints(&[3]).unwrap();
        let r = effective_p_report(&z_pow(3), &a).unwrap();
        assert_eq!(r.c1, PiScaled::pi_pow(1));
        assert_eq!(r.c2, PiScaled::new(frac(1, 4), 1));
        assert_eq!(r.ratio, 4.0);
        assert!(r.p_effective < 4.0 / 3.0 && r.membership_verdict);

        let a = MonomialWeight::new(vec![frac(1, 2)]).unwrap();
        let r = effective_p_report(&PolyFunction::one(1), &a).unwrap();
        assert_eq!(r.c1, PiScaled::new(int(2), 1));
        assert_eq!(r.c2, PiScaled::pi_pow(1));
        assert!(r.membership_verdict);

        let r = effective_p_report(&PolyFunction::one(2), &MonomialWeight::zero(2)).unwrap();
        assert_eq!(r.ratio, 1.0);
        assert_eq!(r.p_effective, 1.5);

        let a = MonomialWeight::from_ints(&[1]).unwrap();
        assert!(matches!(
            effective_p_report(&PolyFunction::one(1), &a),
            Err(Error::Precondition { gate: "c1-finite", .. })
        ));
        assert!(matches!(
            effective_p_report(&z_pow(1), &MonomialWeight::zero(1)),
            Err(Error::Precondition {
                gate: "kernel-inverse-positive",
                ..
            })
        ));
    }
}
