use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Exponent vector `α` of a monomial `z^α`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(alpha: Vec<u32>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::domain("exponent vector must have at least one entry"));
        }
        Ok(ExponentVector(alpha))
    }

    pub fn zero(n: usize) -> Self {
        assert!(n >= 1);
        ExponentVector(vec![0; n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Componentwise `self ≥ other`.
    pub fn dominates(&self, other: &ExponentVector) -> bool {
        self.dim() == other.dim() && self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    pub fn scaled(&self, k: u32) -> ExponentVector {
        ExponentVector(self.0.iter().map(|&e| e * k).collect())
    }
}

impl From<&[u32]> for ExponentVector {
    fn from(v: &[u32]) -> Self {
        ExponentVector::new(v.to_vec()).expect("non-empty exponent vector")
    }
}

impl<const N: usize> From<[u32; N]> for ExponentVector {
    fn from(v: [u32; N]) -> Self {
        ExponentVector::new(v.to_vec()).expect("non-empty exponent vector")
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// `φ = Σ_j a_j log|z_j|²` with rational `a_j ≥ 0`; `φ ≤ 0` on the unit polydisc.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialWeight {
    a: Vec<Rational>,
}

impl MonomialWeight {
    pub fn new(a: Vec<Rational>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::domain("weight must have at least one coordinate"));
        }
        if let Some(bad) = a.iter().find(|x| x.is_negative()) {
            return Err(Error::domain(format!(
                "weight coefficients must be nonnegative, got {}",
                rational::render(bad)
            )));
        }
        Ok(MonomialWeight { a })
    }

    pub fn zero(n: usize) -> Self {
        MonomialWeight::new(vec![Rational::zero(); n]).expect("n >= 1")
    }

    pub fn from_ints(a: &[i64]) -> Result<Self> {
        MonomialWeight::new(a.iter().map(|&x| rational::int(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.a
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(Zero::is_zero)
    }

    /// `λφ` for `λ ≥ 0`.
    pub fn scaled(&self, lambda: &Rational) -> Result<Self> {
        MonomialWeight::new(self.a.iter().map(|x| x * lambda).collect())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.a.iter().map(rational::to_f64).collect()
    }

    /// Value of `φ` at `z` (−∞ on the coordinate hyperplanes it sees).
    pub fn evaluate(&self, z: &[Complex64]) -> f64 {
        self.a
            .iter()
            .zip(z)
            .filter(|(a, _)| !a.is_zero())
            .map(|(a, zj)| rational::to_f64(a) * zj.norm_sqr().ln())
            .sum()
    }

    /// Componentwise `self ≤ other`.
    pub fn le(&self, other: &MonomialWeight) -> bool {
        self.dim() == other.dim() && self.a.iter().zip(&other.a).all(|(x, y)| x <= y)
    }
}

/// Coefficient `(re + i·im)·√radicand` with rational parts.
///
/// Only `|c|² = (re² + im²)·radicand` enters the toric computations; the
/// radicand keeps values like `cos(π/6) = √(3/4)` exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coefficient {
    pub re: Rational,
    pub im: Rational,
    pub radicand: Rational,
}

impl Coefficient {
    pub fn new(re: Rational, im: Rational) -> Self {
        Coefficient {
            re,
            im,
            radicand: Rational::one(),
        }
    }

    pub fn real(re: Rational) -> Self {
        Coefficient::new(re, Rational::zero())
    }

    pub fn one() -> Self {
        Coefficient::real(Rational::one())
    }

    /// `√r` for rational `r ≥ 0`.
    pub fn sqrt_of(r: Rational) -> Result<Self> {
        Coefficient::with_radicand(Rational::one(), Rational::zero(), r)
    }

    pub fn with_radicand(re: Rational, im: Rational, radicand: Rational) -> Result<Self> {
        if radicand.is_negative() {
            return Err(Error::domain("radicand must be nonnegative"));
        }
        Ok(Coefficient { re, im, radicand })
    }

    pub fn norm_sq(&self) -> Rational {
        (&self.re * &self.re + &self.im * &self.im) * &self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.radicand.is_zero() || (self.re.is_zero() && self.im.is_zero())
    }

    pub fn to_complex(&self) -> Complex64 {
        let s = rational::to_f64(&self.radicand).sqrt();
        Complex64::new(rational::to_f64(&self.re) * s, rational::to_f64(&self.im) * s)
    }
}

/// Finite sum `Σ c_α z^α` with nonzero stored coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyFunction {
    dim: usize,
    terms: BTreeMap<ExponentVector, Coefficient>,
}

impl PolyFunction {
    pub fn zero(dim: usize) -> Self {
        assert!(dim >= 1);
        PolyFunction {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize) -> Self {
        PolyFunction::monomial(ExponentVector::zero(dim))
    }

    pub fn monomial(alpha: ExponentVector) -> Self {
        let mut f = PolyFunction::zero(alpha.dim());
        f.terms.insert(alpha, Coefficient::one());
        f
    }

    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ExponentVector, Coefficient)>,
    {
        let mut f = PolyFunction::zero(dim);
        for (alpha, c) in terms {
            f.add_term(alpha, c)?;
        }
        Ok(f)
    }

    /// Adds `c z^α`. Repeated exponents are only allowed when both
    /// coefficients share a radicand.
    pub fn add_term(&mut self, alpha: ExponentVector, c: Coefficient) -> Result<()> {
        if alpha.dim() != self.dim {
            return Err(Error::domain(format!(
                "exponent {alpha} has dimension {}, expected {}",
                alpha.dim(),
                self.dim
            )));
        }
        if c.is_zero() {
            return Ok(());
        }
        match self.terms.remove(&alpha) {
            None => {
                self.terms.insert(alpha, c);
            }
            Some(old) => {
                if old.radicand != c.radicand {
                    return Err(Error::Unsupported(format!(
                        "cannot combine coefficients with different radicands at {alpha}"
                    )));
                }
                let sum = Coefficient {
                    re: old.re + c.re,
                    im: old.im + c.im,
                    radicand: c.radicand,
                };
                if !sum.is_zero() {
                    self.terms.insert(alpha, sum);
                }
            }
        }
        Ok(())
    }

    pub fn with_term(mut self, alpha: impl Into<ExponentVector>, c: Coefficient) -> Result<Self> {
        self.add_term(alpha.into(), c)?;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &Coefficient)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &ExponentVector> {
        self.terms.keys()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The single term when `self` is a monomial `c z^α`.
    pub fn as_monomial(&self) -> Option<(&ExponentVector, &Coefficient)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn evaluate(&self, z: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(alpha, c)| {
                let mono = alpha
                    .entries()
                    .iter()
                    .zip(z)
                    .fold(Complex64::one(), |acc, (&e, zj)| acc * zj.powu(e));
                c.to_complex() * mono
            })
            .sum()
    }
}

/// Exact value `coefficient · π^pi_power`, or `+∞` for a divergent integral.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PiScaled {
    Finite { coeff: Rational, pi_power: i32 },
    Infinite,
}

impl PiScaled {
    pub fn new(coeff: Rational, pi_power: i32) -> Self {
        if coeff.is_zero() {
            PiScaled::zero()
        } else {
            PiScaled::Finite { coeff, pi_power }
        }
    }

    pub fn zero() -> Self {
        PiScaled::Finite {
            coeff: Rational::zero(),
            pi_power: 0,
        }
    }

    pub fn pi_pow(k: i32) -> Self {
        PiScaled::new(Rational::one(), k)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, PiScaled::Finite { .. })
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, PiScaled::Finite { coeff, .. } if coeff.is_zero())
    }

    pub fn coeff(&self) -> Option<&Rational> {
        match self {
            PiScaled::Finite { coeff, .. } => Some(coeff),
            PiScaled::Infinite => None,
        }
    }

    pub fn pi_power(&self) -> Option<i32> {
        match self {
            PiScaled::Finite { pi_power, .. } => Some(*pi_power),
            PiScaled::Infinite => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            PiScaled::Finite { coeff, pi_power } => rational::to_f64(coeff) * std::f64::consts::PI.powi(*pi_power),
            PiScaled::Infinite => f64::INFINITY,
        }
    }

    /// Exact sum. `None` when both sides are nonzero with different powers of π.
    pub fn checked_add(&self, other: &PiScaled) -> Option<PiScaled> {
        use PiScaled::*;
        match (self, other) {
            (Infinite, _) | (_, Infinite) => Some(Infinite),
            (a, b) if a.is_zero() => Some(b.clone()),
            (a, b) if b.is_zero() => Some(a.clone()),
            (
                Finite {
                    coeff: c1,
                    pi_power: k1,
                },
                Finite {
                    coeff: c2,
                    pi_power: k2,
                },
            ) => (k1 == k2).then(|| PiScaled::new(c1 + c2, *k1)),
        }
    }

    pub fn scale(&self, r: &Rational) -> PiScaled {
        match self {
            PiScaled::Finite { coeff, pi_power } => PiScaled::new(coeff * r, *pi_power),
            PiScaled::Infinite if r.is_zero() => PiScaled::zero(),
            PiScaled::Infinite => PiScaled::Infinite,
        }
    }

    /// `1/x`; `1/0 = +∞` and `1/∞ = 0`.
    pub fn recip(&self) -> PiScaled {
        match self {
            PiScaled::Infinite => PiScaled::zero(),
            PiScaled::Finite { coeff, .. } if coeff.is_zero() => PiScaled::Infinite,
            PiScaled::Finite { coeff, pi_power } => PiScaled::new(coeff.recip(), -pi_power),
        }
    }

    /// `self / other` as an exact rational when both are finite, nonzero and
    /// carry the same power of π.
    pub fn exact_ratio(&self, other: &PiScaled) -> Option<Rational> {
        match (self, other) {
            (
                PiScaled::Finite {
                    coeff: c1,
                    pi_power: k1,
                },
                PiScaled::Finite {
                    coeff: c2,
                    pi_power: k2,
                },
            ) if !c2.is_zero() && (k1 == k2 || c1.is_zero()) => Some(c1 / c2),
            _ => None,
        }
    }
}

impl PartialOrd for PiScaled {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        use PiScaled::*;
        match (self, other) {
            (Infinite, Infinite) => Some(Ordering::Equal),
            (Infinite, _) => Some(Ordering::Greater),
            (_, Infinite) => Some(Ordering::Less),
            (
                Finite {
                    coeff: c1,
                    pi_power: k1,
                },
                Finite {
                    coeff: c2,
                    pi_power: k2,
                },
            ) => {
                if k1 == k2 || c1.is_zero() || c2.is_zero() {
                    Some(c1.cmp(c2))
                } else {
                    self.to_f64().partial_cmp(&other.to_f64())
                }
            }
        }
    }
}

impl fmt::Display for PiScaled {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PiScaled::Infinite => write!(f, "+inf"),
            PiScaled::Finite { coeff, pi_power: 0 } => write!(f, "{}", rational::render(coeff)),
            PiScaled::Finite { coeff, pi_power } => {
                write!(f, "{}*pi^{}", rational::render(coeff), pi_power)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn pi_scaled_arithmetic() {
        let a = PiScaled::new(frac(1, 3), 2);
        let b = PiScaled::new(frac(1, 6), 2);
        assert_eq!(a.checked_add(&b).unwrap(), PiScaled::new(frac(1, 2), 2));
        assert_eq!(a.checked_add(&PiScaled::zero()).unwrap(), a);
        assert!(a.checked_add(&PiScaled::pi_pow(1)).is_none());
        assert_eq!(a.checked_add(&PiScaled::Infinite).unwrap(), PiScaled::Infinite);
        assert_eq!(a.recip(), PiScaled::new(int(3), -2));
        assert_eq!(PiScaled::zero().recip(), PiScaled::Infinite);
        assert!(PiScaled::Infinite > a);
        assert!(b < a);
        assert_eq!(a.exact_ratio(&b), Some(int(2)));
    }

    #[test]
    fn coefficient_norm_with_radicand() {
        let c = Coefficient::with_radicand(int(1), int(0), frac(3, 4)).unwrap();
        assert_eq!(c.norm_sq(), frac(3, 4));
        assert!((c.to_complex().re - 3f64.sqrt() / 2.0).abs() < 1e-15);
        let g = Coefficient::new(int(1), int(2));
        assert_eq!(g.norm_sq(), int(5));
    }

    #[test]
    fn poly_rejects_dimension_mismatch_and_drops_zeros() {
        let mut f = PolyFunction::zero(2);
        assert!(f.add_term([1u32].into(), Coefficient::one()).is_err());
        f.add_term([1, 0].into(), Coefficient::one()).unwrap();
        f.add_term([1, 0].into(), Coefficient::real(int(-1))).unwrap();
        assert!(f.is_zero());
    }

    #[test]
    fn weight_rejects_negative_entries() {
        assert!(MonomialWeight::new(vec![frac(-1, 2)]).is_err());
        assert!(MonomialWeight::new(vec![]).is_err());
    }

    #[test]
    fn poly_evaluates() {
        let f = PolyFunction::zero(2)
            .with_term([1, 0], Coefficient::one())
            .unwrap()
            .with_term([0, 2], Coefficient::one())
            .unwrap();
        let z = [Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.5)];
        let v = f.evaluate(&z);
        assert!((v - Complex64::new(0.25, 0.0)).norm() < 1e-15);
    }
}
