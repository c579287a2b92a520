use num_traits::One;

use super::{jumping_number, weighted_norm_sq, ExtRational, MonomialWeight, PiScaled, PolyFunction};
use crate::error::{Error, Result};
use crate::kernel::{c_fp, kernel_inv};

#[derive(Clone, Debug, PartialEq)]
pub struct MemberRow {
    pub jumping: ExtRational,
    /// `K^{-1}_{φ_m,F_m}(0)`.
    pub k_inv: PiScaled,
    /// `inf{‖F1‖²_0 : (F1 − F_m, 0) ∈ I(φ_m)}`.
    pub c0: PiScaled,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Hypothesis holds and so do both conclusions.
    Holds,
    /// `inf_m C_0 = 0`: nothing is asserted about the limit.
    HypothesisViolation,
    /// Hypothesis holds but a conclusion fails.
    ConclusionFailure,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SemicontinuityReport {
    pub members: Vec<MemberRow>,
    pub limit_jumping: ExtRational,
    pub inf_k_inv: f64,
    pub inf_c0: f64,
    /// `inf_m C_0 > 0`.
    pub hypothesis_ok: bool,
    /// `|F|² e^{−φ}` is not integrable near 0.
    pub limit_non_integrable: bool,
    /// `c(F_m, φ_m) ≥ c(F, φ)` for every member.
    pub jumping_inequality: bool,
    pub verdict: Verdict,
}

/// Checks lower semicontinuity of jumping numbers along a toric family.
///
/// The hypothesis is gated on `C_0 = inf_m c_fp(F_m, a_m, 1)`, the quantity
/// the limiting argument bounds; `inf_m K^{-1}` is reported alongside. On a
/// finite list the infimum is the minimum, so callers pass the tail they
/// care about.
pub fn semicontinuity_check(
    family: &[(PolyFunction, MonomialWeight)],
    limit: &(PolyFunction, MonomialWeight),
) -> Result<SemicontinuityReport> {
    if family.is_empty() {
        return Err(Error::domain("family must be nonempty"));
    }
    let limit_jumping = jumping_number(&limit.0, &limit.1)?;
    let members = family
        .iter()
        .map(|(f, a)| {
            Ok(MemberRow {
                jumping: jumping_number(f, a)?,
                k_inv: kernel_inv(f, a)?.k_inv,
                c0: c_fp(f, a, &One::one())?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let inf_k_inv = members.iter().map(|m| m.k_inv.to_f64()).fold(f64::INFINITY, f64::min);
    let inf_c0 = members.iter().map(|m| m.c0.to_f64()).fold(f64::INFINITY, f64::min);
    let hypothesis_ok = inf_c0 > 0.0;
    let limit_non_integrable = !weighted_norm_sq(&limit.0, &limit.1, &One::one())?.is_finite();
    let jumping_inequality = members.iter().all(|m| m.jumping >= limit_jumping);
    let verdict = if !hypothesis_ok {
        Verdict::HypothesisViolation
    } else if limit_non_integrable && jumping_inequality {
        Verdict::Holds
    } else {
        Verdict::ConclusionFailure
    };
    Ok(SemicontinuityReport {
        members,
        limit_jumping,
        inf_k_inv,
        inf_c0,
        hypothesis_ok,
        limit_non_integrable,
        jumping_inequality,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn z1(n: usize) -> PolyFunction {
        let mut e = vec![0; n];
        e[0] = 1;
        PolyFunction::monomial(super::super::ExponentVector::new(e).unwrap())
    }

    #[test]
    fn shrinking_weights_hold() {
        let family: Vec<_> = (2..20)
            .map(|m| (z1(1), MonomialWeight::new(vec![int(1) - frac(1, m)]).unwrap()))
            .collect();
        let limit = (z1(1), MonomialWeight::from_ints(&[1]).unwrap());
        let r = semicontinuity_check(&family, &limit).unwrap();
        assert!(r.jumping_inequality);
        assert!(r.members.iter().all(|m| m.jumping > r.limit_jumping));
    }

    #[test]
    fn constant_family_has_equality() {
        let pair = (PolyFunction::one(1), MonomialWeight::from_ints(&[1]).unwrap());
        let r = semicontinuity_check(&vec![pair.clone(); 5], &pair).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert!(r.members.iter().all(|m| m.jumping == r.limit_jumping));
    }

    #[test]
    fn vanishing_weights_violate_the_hypothesis() {
        let family: Vec<_> = (1..30)
            .map(|m| (z1(2), MonomialWeight::new(vec![frac(1, m), int(0)]).unwrap()))
            .collect();
        let limit = (z1(2), MonomialWeight::zero(2));
        let r = semicontinuity_check(&family, &limit).unwrap();
        assert_eq!(r.verdict, Verdict::HypothesisViolation);
        assert!(!r.limit_non_integrable);
        assert!(r.inf_k_inv > 0.0);
    }

    #[test]
    fn empty_family_is_rejected() {
        let pair = (PolyFunction::one(1), MonomialWeight::zero(1));
        assert!(semicontinuity_check(&[], &pair).is_err());
    }
}
