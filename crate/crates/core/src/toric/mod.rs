//! Exact integrals and ideals for monomial weights on the unit polydisc.
//!
//! With `t_j = −log|z_j|²` the Lebesgue measure becomes
//! `π^n Π e^{−t_j} dt_j` (angles integrated out), so
//! `∫ |z^α|² e^{−pφ} = π^n Π 1/(α_j + 1 − p a_j)` whenever every factor is
//! positive. Distinct monomials are orthogonal on polydiscs, which reduces
//! everything below to per-term rational arithmetic.

mod ideal;
mod semicontinuity;
mod types;

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};

pub use ideal::{multiplier_ideal, IdealKind, MonomialIdeal, MultiplierIdeal};
pub use semicontinuity::{semicontinuity_check, MemberRow, SemicontinuityReport, Verdict};
pub use types::{Coefficient, ExponentVector, MonomialWeight, PiScaled, PolyFunction};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// A nonnegative rational or `+∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtRational {
    Finite(Rational),
    Infinite,
}

impl ExtRational {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtRational::Finite(r) => Some(r),
            ExtRational::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtRational::Infinite)
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtRational::Finite(r) => rational::to_f64(r),
            ExtRational::Infinite => f64::INFINITY,
        }
    }
}

impl PartialOrd for ExtRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRational {
    fn cmp(&self, other: &Self) -> Ordering {
        use ExtRational::*;
        match (self, other) {
            (Infinite, Infinite) => Ordering::Equal,
            (Infinite, _) => Ordering::Greater,
            (_, Infinite) => Ordering::Less,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::Finite(r) => write!(f, "{}", rational::render(r)),
            ExtRational::Infinite => write!(f, "+inf"),
        }
    }
}

fn check_dims(f: &PolyFunction, a: &MonomialWeight) -> Result<()> {
    if f.dim() != a.dim() {
        return Err(Error::domain(format!(
            "function has dimension {} but weight has dimension {}",
            f.dim(),
            a.dim()
        )));
    }
    Ok(())
}

fn check_p(p: &Rational) -> Result<()> {
    if p.is_negative() {
        return Err(Error::domain(format!(
            "exponent p must be nonnegative, got {}",
            rational::render(p)
        )));
    }
    Ok(())
}

/// `∫_{Δ^n} |z^α|² dλ = π^n / Π(α_j + 1)`.
pub fn monomial_norm_sq(alpha: &ExponentVector) -> PiScaled {
    let denom = alpha
        .entries()
        .iter()
        .fold(Rational::one(), |acc, &e| acc * rational::int(e as i64 + 1));
    PiScaled::new(denom.recip(), alpha.dim() as i32)
}

/// `∫_{Δ^n} |F|² e^{−pφ} dλ`, `+∞` when some term diverges.
pub fn weighted_norm_sq(f: &PolyFunction, a: &MonomialWeight, p: &Rational) -> Result<PiScaled> {
    check_dims(f, a)?;
    check_p(p)?;
    let mut total = Rational::zero();
    for (alpha, c) in f.terms() {
        let mut prod = Rational::one();
        for (&e, aj) in alpha.entries().iter().zip(a.coeffs()) {
            let kappa = rational::int(e as i64 + 1) - p * aj;
            if !kappa.is_positive() {
                return Ok(PiScaled::Infinite);
            }
            prod *= kappa;
        }
        total += c.norm_sq() / prod;
    }
    Ok(PiScaled::new(total, f.dim() as i32))
}

/// `sup{c ≥ 0 : |F|² e^{−2cφ} ∈ L¹ near 0}`.
///
/// Note the factor 2: jumping numbers pair with `e^{−2cφ}`, while
/// [`weighted_norm_sq`] and [`membership`] use `e^{−pφ}`; `p = 2c`.
pub fn jumping_number(f: &PolyFunction, a: &MonomialWeight) -> Result<ExtRational> {
    check_dims(f, a)?;
    if f.is_zero() {
        return Err(Error::domain("jumping number of the zero function"));
    }
    let best = f
        .support()
        .flat_map(|alpha| {
            alpha
                .entries()
                .iter()
                .zip(a.coeffs())
                .filter(|(_, aj)| aj.is_positive())
                .map(|(&e, aj)| rational::int(e as i64 + 1) / (rational::int(2) * aj))
        })
        .min();
    Ok(best.map_or(ExtRational::Infinite, ExtRational::Finite))
}

/// Whether the germ of `F` at 0 lies in `I(pφ)`.
pub fn membership(f: &PolyFunction, a: &MonomialWeight, p: &Rational) -> Result<bool> {
    check_dims(f, a)?;
    check_p(p)?;
    Ok(f.support().all(|alpha| {
        alpha
            .entries()
            .iter()
            .zip(a.coeffs())
            .all(|(&e, aj)| rational::int(e as i64 + 1) > p * aj)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn z_pow(m: u32) -> PolyFunction {
        PolyFunction::monomial([m].into())
    }

    fn z1_plus_z2sq() -> PolyFunction {
        PolyFunction::zero(2)
            .with_term([1, 0], Coefficient::one())
            .unwrap()
            .with_term([0, 2], Coefficient::one())
            .unwrap()
    }

    #[test]
    fn monomial_norms() {
        assert_eq!(monomial_norm_sq(&[3].into()), PiScaled::new(frac(1, 4), 1));
        assert_eq!(monomial_norm_sq(&[0, 0, 0].into()), PiScaled::pi_pow(3));
        assert_eq!(monomial_norm_sq(&[0, 2].into()), PiScaled::new(frac(1, 3), 2));
    }

    #[test]
    fn weighted_norm_examples() {
        for m in 1..8 {
            let a = MonomialWeight::from_ints(&[m as i64]).unwrap();
            assert_eq!(weighted_norm_sq(&z_pow(m), &a, &int(1)).unwrap(), PiScaled::pi_pow(1));
        }
        let a = MonomialWeight::new(vec![frac(7, 3), int(5)]).unwrap();
        assert_eq!(
            weighted_norm_sq(&PolyFunction::one(2), &a, &int(0)).unwrap(),
            PiScaled::pi_pow(2)
        );
        let a = MonomialWeight::from_ints(&[1, 0]).unwrap();
        assert_eq!(
            weighted_norm_sq(&z1_plus_z2sq(), &a, &int(1)).unwrap(),
            PiScaled::Infinite
        );
        assert!(weighted_norm_sq(&z1_plus_z2sq(), &a, &int(-1)).is_err());
    }

    #[test]
    fn jumping_examples() {
        for m in 1..8i64 {
            let a = MonomialWeight::from_ints(&[m]).unwrap();
            assert_eq!(
                jumping_number(&z_pow(m as u32), &a).unwrap(),
                ExtRational::Finite(frac(m + 1, 2 * m))
            );
        }
        let a = MonomialWeight::from_ints(&[1, 0]).unwrap();
        assert_eq!(
            jumping_number(&z1_plus_z2sq(), &a).unwrap(),
            ExtRational::Finite(frac(1, 2))
        );
        let delta = frac(3, 7);
        let a = MonomialWeight::new(vec![delta.clone(), int(0)]).unwrap();
        assert_eq!(
            jumping_number(&PolyFunction::one(2), &a).unwrap(),
            ExtRational::Finite(delta.recip() / int(2))
        );
        assert_eq!(
            jumping_number(&PolyFunction::one(2), &MonomialWeight::zero(2)).unwrap(),
            ExtRational::Infinite
        );
        assert!(jumping_number(&PolyFunction::zero(1), &MonomialWeight::zero(1)).is_err());
    }

    #[test]
    fn membership_examples() {
        for m in 1..8i64 {
            let a = MonomialWeight::from_ints(&[m]).unwrap();
            let edge = int(1) + frac(1, m);
            assert!(!membership(&z_pow(m as u32), &a, &edge).unwrap());
            assert!(membership(&z_pow(m as u32), &a, &(edge - frac(1, 1000))).unwrap());
        }
        assert!(membership(&PolyFunction::one(3), &MonomialWeight::zero(3), &int(1000)).unwrap());
        let a = MonomialWeight::from_ints(&[1, 0]).unwrap();
        assert!(!membership(&z1_plus_z2sq(), &a, &int(1)).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = MonomialWeight::from_ints(&[1]).unwrap();
        assert!(weighted_norm_sq(&z1_plus_z2sq(), &a, &int(1)).is_err());
        assert!(jumping_number(&z1_plus_z2sq(), &a).is_err());
    }
}
