//! Theorem-level computations on top of the exclude machinery:
//! ortho-derivatives, 3-to-1/PDS structure, Kloosterman sums, distance
//! bounds, gamma linear structures, and power-function identities.

mod bounds;
mod gamma;
mod kloosterman;
mod ortho;
mod pds;
mod power;

pub use bounds::{bound_report, BoundFamily, BoundReport, BoundRow};
pub use gamma::{gamma_linear_structures, gamma_weight_divisibility};
pub use kloosterman::{kloosterman_table, KloostermanTable};
pub use ortho::{ortho_derivative, OrthoDerivative};
pub use pds::{check_pds, pds_params, PdsParams};
pub use power::{
    monomial_apn_via_fractional_map, monomial_exponent, phi_preimage_mult, power_axis_mults,
    power_exclude_histogram, power_uniformity_check,
};

use crate::exclude::ExcludeHistogram;

/// Outcome of the frequency-divisibility test against CCZ-equivalence to a
/// plateaued function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlateauEquivalenceVerdict {
    /// Some multiplicity frequency m_k is not divisible by 2^n, which no
    /// function CCZ-equivalent to a plateaued one can exhibit.
    NotPlateauedEquivalent { multiplicity: u16, frequency: u64 },
    /// Every frequency is divisible by 2^n; nothing can be concluded.
    Inconclusive,
}

/// Frequency-divisibility verdict for an APN function with the given
/// exclude histogram.
pub fn plateaued_nonequivalence_test(
    n: u32,
    histogram: &ExcludeHistogram,
) -> PlateauEquivalenceVerdict {
    let modulus = 1u64 << n;
    for (&k, &m) in histogram.counts() {
        if m % modulus != 0 {
            return PlateauEquivalenceVerdict::NotPlateauedEquivalent {
                multiplicity: k,
                frequency: m,
            };
        }
    }
    PlateauEquivalenceVerdict::Inconclusive
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exclude::ExcludeSpectrum;
    use crate::field::FieldSpec;
    use crate::vbf::VectorialFunc;
    use std::sync::Arc;

    #[test]
    fn gold_n6_is_inconclusive() {
        let field = Arc::new(FieldSpec::new(6).unwrap());
        let f = VectorialFunc::from_monomial(&field, 3);
        let sp = ExcludeSpectrum::compute(&f).unwrap();
        assert_eq!(
            plateaued_nonequivalence_test(6, sp.histogram()),
            PlateauEquivalenceVerdict::Inconclusive
        );
    }
}
