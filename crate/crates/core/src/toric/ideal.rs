use std::fmt;

use num_traits::{Signed, Zero};

use super::types::ExponentVector;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Monomial ideal given by its minimal generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialIdeal {
    dim: usize,
    generators: Vec<ExponentVector>,
}

impl MonomialIdeal {
    /// Ideal generated by `gens`; redundant generators are dropped.
    pub fn from_generators(dim: usize, gens: Vec<ExponentVector>) -> Result<Self> {
        if let Some(g) = gens.iter().find(|g| g.dim() != dim) {
            return Err(Error::domain(format!("generator {g} does not have dimension {dim}")));
        }
        let mut sorted = gens;
        sorted.sort_by_key(|g| (g.degree(), g.clone()));
        sorted.dedup();
        let mut minimal: Vec<ExponentVector> = Vec::new();
        for g in sorted {
            if !minimal.iter().any(|h| g.dominates(h)) {
                minimal.push(g);
            }
        }
        minimal.sort();
        Ok(MonomialIdeal {
            dim,
            generators: minimal,
        })
    }

    pub fn principal(gamma: ExponentVector) -> Self {
        MonomialIdeal {
            dim: gamma.dim(),
            generators: vec![gamma],
        }
    }

    pub fn unit(dim: usize) -> Self {
        MonomialIdeal::principal(ExponentVector::zero(dim))
    }

    /// `(z_1, …, z_n)`, the germs vanishing at the origin.
    pub fn maximal(dim: usize) -> Self {
        let gens = (0..dim)
            .map(|j| {
                let mut e = vec![0; dim];
                e[j] = 1;
                ExponentVector::new(e).expect("dim >= 1")
            })
            .collect();
        MonomialIdeal::from_generators(dim, gens).expect("consistent dimensions")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[ExponentVector] {
        &self.generators
    }

    pub fn is_unit(&self) -> bool {
        self.generators.iter().any(|g| g.degree() == 0)
    }

    pub fn contains(&self, alpha: &ExponentVector) -> bool {
        self.generators.iter().any(|g| alpha.dominates(g))
    }

    /// `(z^γ)` when the ideal is principal.
    pub fn principal_generator(&self) -> Option<&ExponentVector> {
        match self.generators.as_slice() {
            [g] => Some(g),
            _ => None,
        }
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "z^{g}")?;
        }
        write!(f, ">")
    }
}

/// Which of `I(ψ)` and `I_+(ψ)` was asked for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IdealKind {
    Plain,
    Plus,
}

/// Multiplier ideal of `ψ = Σ b_j log|z_j|²` at the origin, tagged with the
/// kind that was requested.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplierIdeal {
    pub kind: IdealKind,
    pub ideal: MonomialIdeal,
}

fn check_exponents(b: &[Rational]) -> Result<()> {
    if b.is_empty() {
        return Err(Error::domain("weight must have at least one coordinate"));
    }
    if let Some(x) = b.iter().find(|x| x.is_negative()) {
        return Err(Error::domain(format!("negative exponent {}", rational::render(x))));
    }
    Ok(())
}

/// `z^α ∈ I(ψ)` iff `∫ |z^α|² e^{−ψ}` converges near 0, i.e. `α_j + 1 > b_j`,
/// whose least solution is `α_j = ⌊b_j⌋`.
fn plain_generator(b: &[Rational]) -> ExponentVector {
    ExponentVector::new(b.iter().map(rational::floor_to_u32).collect()).expect("non-empty")
}

/// `I_+(ψ) = ⋃_{ε>0} I((1+ε)ψ)`. The family is decreasing in ε and constant
/// for `ε < min_j (⌊b_j⌋ + 1 − b_j)/b_j`, so one representative suffices.
fn plus_generator(b: &[Rational]) -> ExponentVector {
    let eps = b
        .iter()
        .filter(|x| !x.is_zero())
        .map(|x| (x.floor() + rational::int(1) - x) / x)
        .min()
        .map(|gap| gap / rational::int(2))
        .unwrap_or_else(|| rational::int(1));
    let scaled: Vec<Rational> = b.iter().map(|x| x * (rational::int(1) + &eps)).collect();
    plain_generator(&scaled)
}

pub fn multiplier_ideal(b: &[Rational], kind: IdealKind) -> Result<MultiplierIdeal> {
    check_exponents(b)?;
    let gamma = match kind {
        IdealKind::Plain => plain_generator(b),
        IdealKind::Plus => plus_generator(b),
    };
    Ok(MultiplierIdeal {
        kind,
        ideal: MonomialIdeal::principal(gamma),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn minimalizes_generators() {
        let i = MonomialIdeal::from_generators(2, vec![[2, 1].into(), [1, 0].into(), [0, 3].into(), [1, 0].into()])
            .unwrap();
        assert_eq!(
            i.generators(),
            &[ExponentVector::from([0, 3]), ExponentVector::from([1, 0])]
        );
        assert!(i.contains(&[5, 0].into()));
        assert!(!i.contains(&[0, 2].into()));
    }

    #[test]
    fn spec_examples() {
        let m = 4;
        let i = multiplier_ideal(&[int(m + 1)], IdealKind::Plain).unwrap();
        assert_eq!(i.ideal.principal_generator().unwrap(), &ExponentVector::from([5]));
        let i = multiplier_ideal(&[int(1), int(0)], IdealKind::Plus).unwrap();
        assert_eq!(i.ideal.principal_generator().unwrap(), &ExponentVector::from([1, 0]));
        let i = multiplier_ideal(&[frac(1, 2), frac(1, 2)], IdealKind::Plain).unwrap();
        assert!(i.ideal.is_unit());
        assert!(multiplier_ideal(&[frac(-1, 2)], IdealKind::Plain).is_err());
    }

    #[test]
    fn plus_matches_plain_at_integers() {
        for k in 0..6 {
            let b = [int(k), frac(2 * k + 1, 2)];
            assert_eq!(
                multiplier_ideal(&b, IdealKind::Plain).unwrap().ideal,
                multiplier_ideal(&b, IdealKind::Plus).unwrap().ideal
            );
        }
    }

    #[test]
    fn maximal_ideal() {
        let m = MonomialIdeal::maximal(3);
        assert!(!m.contains(&[0, 0, 0].into()));
        assert!(m.contains(&[0, 1, 0].into()));
        assert_eq!(m.generators().len(), 3);
    }
}
