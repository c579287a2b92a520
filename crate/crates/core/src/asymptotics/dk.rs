use super::{scaled_band_integral, scaled_sublevel, BoundSeries};
use crate::error::{Error, Result};
use crate::kernel::kernel_inv;
use crate::rational;
use crate::toric::{jumping_number, weighted_norm_sq, ExtRational, MonomialWeight, PiScaled, PolyFunction};

#[derive(Clone, Debug, PartialEq)]
pub struct DkReport {
    pub b0: f64,
    /// `c_K` of `e^{−2cφ}` at the origin.
    pub c_k: ExtRational,
    /// `e^{R+B0} (1/B0) ∫_{band} |F|²` against `K^{-1}_{φ,F}(0)`.
    pub band: BoundSeries,
    /// `e^R μ({φ < −R})` against `K^{-1}_{φ,1}(0)`.
    pub sublevel: BoundSeries,
    /// `r^{−2c_K} μ({φ < log r})` with `r = e^{−R}`, against `K^{-1}_{φ,1}(0)`.
    pub dk_form: Option<BoundSeries>,
    /// Classical `K^{-1}(0) = π^n`, the weaker bound in the chain.
    pub classical_bound: PiScaled,
}

impl DkReport {
    pub fn all_hold(&self) -> bool {
        self.band.holds() && self.sublevel.holds() && self.dk_form.as_ref().is_none_or(BoundSeries::holds)
    }
}

/// Lower-bound report for sublevel and band volumes of a monomial weight.
///
/// Each series carries its own non-integrability gate, computed exactly.
/// Grid values are `e^{R+B0}` times the band integral (the band starts at
/// `−R`, so the exponent is `R + B0`).
pub fn dk_asymptote_report(f: &PolyFunction, a: &MonomialWeight, r_grid: &[f64], b0: f64) -> Result<DkReport> {
    if r_grid.is_empty() {
        return Err(Error::domain("R grid is empty"));
    }
    if f.is_zero() {
        return Err(Error::domain("F must not vanish identically"));
    }
    let one = PolyFunction::one(a.dim());
    let gate_f = !weighted_norm_sq(f, a, &rational::int(1))?.is_finite();
    let gate_1 = !weighted_norm_sq(&one, a, &rational::int(1))?.is_finite();
    let bound_f = kernel_inv(f, a)?.k_inv;
    let bound_1 = kernel_inv(&one, a)?.k_inv;

    let band_rows = r_grid
        .iter()
        .map(|&r| Ok((r, b0.exp() / b0 * scaled_band_integral(f, a, r, b0, 1.0)?)))
        .collect::<Result<Vec<_>>>()?;
    let sub_rows = r_grid
        .iter()
        .map(|&r| Ok((r, scaled_sublevel(a, r, 1.0)?)))
        .collect::<Result<Vec<_>>>()?;

    let c_k = jumping_number(&one, a)?;
    let dk_form = match &c_k {
        ExtRational::Finite(c) => {
            let two_c = 2.0 * rational::to_f64(c);
            let rows = r_grid
                .iter()
                .map(|&r| Ok((r, scaled_sublevel(a, r, two_c)?)))
                .collect::<Result<Vec<_>>>()?;
            // 2c·φ is never e^{-1}-integrable, so the gate holds by construction.
            Some(BoundSeries::new("dk-form", rows, true, bound_1.clone()))
        }
        ExtRational::Infinite => None,
    };
    Ok(DkReport {
        b0,
        band: BoundSeries::new("band", band_rows, gate_f, bound_f),
        sublevel: BoundSeries::new("sublevel", sub_rows, gate_1, bound_1),
        dk_form,
        c_k,
        classical_bound: PiScaled::pi_pow(a.dim() as i32),
    })
}
