//! Partial-difference-set structure of the image of a plateaued 3-to-1
//! function, and the two-valued exclude spectrum that comes with it.

use crate::error::{Error, Result};
use crate::exclude::ExcludeSpectrum;
use crate::spectral::{plateau_profile, WalshSpectrum};
use crate::vbf::VectorialFunc;

/// PDS parameters (v, k, lambda, mu) of im F \ {0} for a plateaued 3-to-1 F
/// over even n, together with the two exclude-multiplicity values
/// alpha(n) = (2^n + (-2)^{n/2+1} - 2)/6 and beta(n) = (2^n + (-2)^{n/2} - 2)/6.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PdsParams {
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
    pub mu: u64,
    pub alpha: u32,
    pub beta: u32,
}

pub fn pds_params(n: u32) -> Result<PdsParams> {
    if !n.is_multiple_of(2) || n < 4 {
        return Err(Error::RequiresEvenDimension(n));
    }
    let two_n = 1i64 << n;
    let signed_half = |e: u32| -> i64 {
        let mag = 1i64 << e;
        if e.is_multiple_of(2) {
            mag
        } else {
            -mag
        }
    };
    let alpha6 = two_n + signed_half(n / 2 + 1) - 2;
    let beta6 = two_n + signed_half(n / 2) - 2;
    assert!(alpha6 % 6 == 0 && beta6 % 6 == 0 && alpha6 > 0 && beta6 > 0);
    let alpha = (alpha6 / 6) as u32;
    let beta = (beta6 / 6) as u32;
    let lambda3 = 2 * (alpha as u64 - 1);
    let mu3 = 2 * beta as u64;
    assert!(lambda3.is_multiple_of(3) && mu3.is_multiple_of(3));
    Ok(PdsParams {
        v: 1 << n,
        k: ((1u64 << n) - 1) / 3,
        lambda: lambda3 / 3,
        mu: mu3 / 3,
        alpha,
        beta,
    })
}

/// Verifies, for a plateaued 3-to-1 F (translated to fix F(0) = 0), that
/// im F \ {0} is a PDS with the stated parameters by exhaustive ordered
/// difference counting, and that the exclude spectrum is two-valued at
/// alpha(n) / beta(n) with frequencies 2^n (2^n - 1)/3 and 2^{n+1} (2^n - 1)/3,
/// split by membership of b in the image.
///
/// The difference counting is independent of the transform that produced
/// `spectrum`; the two checks cross-validate each other.
pub fn check_pds(f: &VectorialFunc, spectrum: &ExcludeSpectrum) -> Result<bool> {
    let n = f.n();
    let params = pds_params(n)?;
    if !f.is_3to1() {
        return Err(Error::NotThreeToOne);
    }
    let profile = plateau_profile(&WalshSpectrum::compute(f));
    if !profile.is_plateaued() {
        return Err(Error::NotPlateaued { v: 0, distinct: 0 });
    }
    let size = f.len();
    let f0 = f.eval(0);
    // translated image membership: b in im(F + F(0))
    let mut in_image = vec![false; size];
    for x in 0..size {
        in_image[(f.eval(x as u16) ^ f0) as usize] = true;
    }
    if !in_image[0] || (1..size).filter(|&x| f.eval(x as u16) == f0).count() != 0 {
        // the single size-1 preimage must be the one at 0 after translation
        return Err(Error::RequiresZeroFixed(f0));
    }
    let image: Vec<u16> = (1..size as u16).filter(|&b| in_image[b as usize]).collect();
    if image.len() as u64 != params.k {
        return Ok(false);
    }

    // ordered difference counts over the image set
    let mut diff_counts = vec![0u64; size];
    for &x in &image {
        for &y in &image {
            if x != y {
                diff_counts[(x ^ y) as usize] += 1;
            }
        }
    }
    for d in 1..size {
        let expected = if in_image[d] {
            params.lambda
        } else {
            params.mu
        };
        if diff_counts[d] != expected {
            return Ok(false);
        }
    }

    // two-valued spectrum with the stated frequencies
    let k = params.k;
    let expected_hist = [
        (params.alpha as u16, (size as u64) * k),
        (params.beta as u16, 2 * (size as u64) * k),
    ];
    for (value, frequency) in expected_hist {
        if spectrum.histogram().count(value) != frequency {
            return Ok(false);
        }
    }
    if spectrum.histogram().counts().len() != 2 {
        return Ok(false);
    }
    // per-point split: mult at (0, b + F(0)) is alpha on the image, beta off it
    for b in 1..size as u16 {
        let m = spectrum
            .mult(0, b ^ f0)
            .expect("(0, b + F(0)) is off-graph for b != 0");
        let expected = if in_image[b as usize] {
            params.alpha
        } else {
            params.beta
        };
        if m as u32 != expected {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use std::sync::Arc;

    #[test]
    fn small_parameter_values() {
        let p4 = pds_params(4).unwrap();
        assert_eq!((p4.alpha, p4.beta), (1, 3));
        assert_eq!((p4.v, p4.k, p4.lambda, p4.mu), (16, 5, 0, 2));
        let p6 = pds_params(6).unwrap();
        assert_eq!((p6.alpha, p6.beta), (13, 9));
        let p8 = pds_params(8).unwrap();
        assert_eq!((p8.alpha, p8.beta), (37, 45));
        assert!(pds_params(5).is_err());
        assert!(pds_params(2).is_err());
    }

    #[test]
    fn gold_passes_check() {
        for n in [4u32, 6] {
            let field = Arc::new(FieldSpec::new(n).unwrap());
            let f = VectorialFunc::from_monomial(&field, 3);
            let sp = ExcludeSpectrum::compute(&f).unwrap();
            assert_eq!(check_pds(&f, &sp), Ok(true), "n={n}");
        }
    }

    #[test]
    fn non_3to1_rejected() {
        let field = Arc::new(FieldSpec::new(6).unwrap());
        let f = VectorialFunc::from_monomial(&field, 5); // gcd(5, 63) = 1: permutation
        let sp_err = check_pds(
            &f,
            &ExcludeSpectrum::compute(&VectorialFunc::from_monomial(&field, 3)).unwrap(),
        );
        assert_eq!(sp_err, Err(Error::NotThreeToOne));
    }
}
