//! Walsh spectra via the fast Walsh-Hadamard transform, plateaued/bent/AB
//! classification, amplitude profiles, and autocorrelation.
//!
//! All transforms use the bitwise inner product <u, x>.  Identities stated
//! over the field pairing Tr(ux) are reached through
//! [`FieldSpec::trace_dual`](crate::field::FieldSpec::trace_dual).

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::vbf::{BooleanFunc, VectorialFunc};

/// Signed accumulator usable in the Walsh-Hadamard butterfly.  Additions are
/// checked: exceeding the accumulator width aborts rather than wrapping.
pub trait FwhtScalar: Copy + Send + Sync {
    fn butterfly(a: Self, b: Self) -> (Self, Self);
}

macro_rules! impl_fwht_scalar {
    ($($t:ty),*) => {$(
        impl FwhtScalar for $t {
            #[inline]
            fn butterfly(a: Self, b: Self) -> (Self, Self) {
                (
                    a.checked_add(b).expect("transform accumulator overflow"),
                    a.checked_sub(b).expect("transform accumulator overflow"),
                )
            }
        }
    )*};
}

impl_fwht_scalar!(i32, i64, i128);

const PAR_THRESHOLD: usize = 1 << 15;

/// In-place Walsh-Hadamard transform: data\[u\] <- sum_x (-1)^{<u,x>} data\[x\].
/// Applying it twice multiplies by the length.
pub fn fwht_in_place<T: FwhtScalar>(data: &mut [T]) {
    let size = data.len();
    assert!(size.is_power_of_two(), "length must be a power of two");
    let mut half = 1;
    while half < size {
        if size >= PAR_THRESHOLD {
            fwht_stage_parallel(data, half);
        } else {
            for block in data.chunks_exact_mut(half * 2) {
                let (lo, hi) = block.split_at_mut(half);
                for i in 0..half {
                    (lo[i], hi[i]) = T::butterfly(lo[i], hi[i]);
                }
            }
        }
        half <<= 1;
    }
}

fn fwht_stage_parallel<T: FwhtScalar>(data: &mut [T], half: usize) {
    if data.len() / (half * 2) > 1 {
        data.par_chunks_exact_mut(half * 2).for_each(|block| {
            let (lo, hi) = block.split_at_mut(half);
            for i in 0..half {
                (lo[i], hi[i]) = T::butterfly(lo[i], hi[i]);
            }
        });
    } else {
        let (lo, hi) = data.split_at_mut(half);
        lo.par_iter_mut()
            .zip(hi.par_iter_mut())
            .for_each(|(a, b)| (*a, *b) = T::butterfly(*a, *b));
    }
}

/// Index of (u, v) in a 2^{2n}-entry table: u in the high n bits.
#[inline]
pub fn pair_index(n: u32, u: u16, v: u16) -> usize {
    ((u as usize) << n) | v as usize
}

/// The 0/1 indicator of the graph {(x, F(x))} as a 2^{2n} table.
pub fn graph_indicator<T: From<i8> + Clone>(f: &VectorialFunc) -> Vec<T> {
    let n = f.n();
    let mut ind = vec![T::from(0i8); 1 << (2 * n)];
    for x in 0..f.len() {
        ind[(x << n) | f.eval(x as u16) as usize] = T::from(1i8);
    }
    ind
}

/// The full signed Walsh table W_F(u, v) = sum_x (-1)^{<x,u> + <F(x),v>}.
///
/// Obtained as the Walsh-Hadamard transform of the graph indicator.  Values
/// are bounded by 2^n <= 2^16, and intermediate butterflies by the indicator
/// weight 2^n, so 32-bit accumulators suffice.
#[derive(Debug, Clone)]
pub struct WalshSpectrum {
    n: u32,
    values: Vec<i32>,
    linearity: u32,
}

impl WalshSpectrum {
    pub fn compute(f: &VectorialFunc) -> WalshSpectrum {
        let n = f.n();
        let mut values: Vec<i32> = graph_indicator(f);
        fwht_in_place(&mut values);
        debug_assert_eq!(values[0], 1 << n);
        let linearity = values[1..]
            .iter()
            .map(|&w| w.unsigned_abs())
            .max()
            .expect("n >= 2");
        WalshSpectrum {
            n,
            values,
            linearity,
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn value(&self, u: u16, v: u16) -> i32 {
        self.values[pair_index(self.n, u, v)]
    }

    pub fn values(&self) -> &[i32] {
        &self.values
    }

    /// max |W(u, v)| over (u, v) != (0, 0).
    pub fn linearity(&self) -> u32 {
        self.linearity
    }

    /// NL(F) = 2^{n-1} - linearity / 2.
    pub fn nonlinearity(&self) -> u32 {
        (1 << (self.n - 1)) - self.linearity / 2
    }

    /// Sum of W^4 over all (u, v).
    pub fn fourth_moment(&self) -> u128 {
        self.values
            .par_iter()
            .map(|&w| {
                let sq = (w as i64 * w as i64) as u128;
                sq * sq
            })
            .sum()
    }

    /// The fourth-moment characterization of APN:
    /// sum W^4 = 2^{2n} (3 * 2^{2n} - 2^{n+1}).
    pub fn is_apn_by_moment(&self) -> bool {
        let n = self.n as u128;
        self.fourth_moment() == (1 << (2 * n)) * (3 * (1 << (2 * n)) - (1 << (n + 1)))
    }
}

/// Per-component amplitude profile of a (candidate) plateaued function.
#[derive(Debug, Clone)]
pub struct PlateauProfile {
    n: u32,
    is_plateaued: bool,
    /// lambda_v for every v, populated only when `is_plateaued`.
    amplitudes: Vec<u32>,
    /// Components v != 0 whose Walsh values all have magnitude 2^{n/2}.
    bent_components: Vec<u16>,
    single_amplitude: bool,
}

impl PlateauProfile {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn is_plateaued(&self) -> bool {
        self.is_plateaued
    }

    /// lambda_v, defined when the function is plateaued.
    pub fn amplitude(&self, v: u16) -> Option<u32> {
        if self.is_plateaued {
            Some(self.amplitudes[v as usize])
        } else {
            None
        }
    }

    pub fn amplitudes(&self) -> Option<&[u32]> {
        if self.is_plateaued {
            Some(&self.amplitudes)
        } else {
            None
        }
    }

    pub fn bent_components(&self) -> &[u16] {
        &self.bent_components
    }

    pub fn single_amplitude(&self) -> bool {
        self.single_amplitude
    }
}

/// Classify each component v.F by its set of nonzero Walsh magnitudes.
///
/// One row-major pass tracking per-component min/max nonzero magnitude:
/// a component is plateaued iff the two agree, and bent iff they agree at
/// 2^{n/2} (Parseval then forces the component to have no zeros at all).
/// A component with no nonzero Walsh value would contradict Parseval, so
/// the construction asserts against it instead of handling it.
pub fn plateau_profile(spectrum: &WalshSpectrum) -> PlateauProfile {
    let n = spectrum.n();
    let size = 1usize << n;
    let bent_magnitude = if n.is_multiple_of(2) {
        1u32 << (n / 2)
    } else {
        0
    };
    let mut min_mag = vec![u32::MAX; size];
    let mut max_mag = vec![0u32; size];
    for (idx, w) in spectrum.values().iter().enumerate() {
        let mag = w.unsigned_abs();
        if mag != 0 {
            let v = idx & (size - 1);
            min_mag[v] = min_mag[v].min(mag);
            max_mag[v] = max_mag[v].max(mag);
        }
    }
    let mut amplitudes = vec![0u32; size];
    let mut bent_components = Vec::new();
    let mut is_plateaued = true;
    for v in 0..size {
        assert!(max_mag[v] != 0, "component {v:#x} violates Parseval");
        if min_mag[v] == max_mag[v] {
            amplitudes[v] = max_mag[v];
            if v != 0 && max_mag[v] == bent_magnitude {
                bent_components.push(v as u16);
            }
        } else {
            is_plateaued = false;
        }
    }
    if !is_plateaued {
        amplitudes.clear();
    } else if n.is_multiple_of(2) {
        // lambda_v^2 = 2^{n + m_v} with m_v even follows from Parseval;
        // a violation is an implementation bug.
        for &lambda in &amplitudes[..] {
            let sq = lambda as u64 * lambda as u64;
            assert!(sq.is_power_of_two() && sq.trailing_zeros() >= n);
        }
    }
    let single_amplitude = is_plateaued && amplitudes[1..].iter().all(|&l| l == amplitudes[1]);
    PlateauProfile {
        n,
        is_plateaued,
        amplitudes,
        bent_components,
        single_amplitude,
    }
}

/// AB test: n odd and every W(u, v) with (u, v) != (0, 0) lies in
/// {0, +-2^{(n+1)/2}}.
pub fn is_ab(spectrum: &WalshSpectrum) -> bool {
    let n = spectrum.n();
    if n.is_multiple_of(2) {
        return false;
    }
    let magnitude = 1u32 << n.div_ceil(2);
    spectrum.values()[1..]
        .iter()
        .all(|&w| w == 0 || w.unsigned_abs() == magnitude)
}

/// Autocorrelation of a Boolean function at one shift:
/// sum_x (-1)^{f(x) + f(x + shift)} = 2^{bits} - 2 wt(D_shift f).
pub fn autocorrelation(f: &BooleanFunc, shift: u32) -> i64 {
    (1i64 << f.n_in()) - 2 * f.derivative_weight(shift) as i64
}

/// For a plateaued profile, sum of lambda_v^2 over the hyperplane {v.c = 0}.
pub fn amplitude_hyperplane_sum(profile: &PlateauProfile, c: u16) -> Result<u64> {
    if c == 0 {
        return Err(Error::ZeroDirection);
    }
    let amplitudes = profile
        .amplitudes()
        .ok_or(Error::NotPlateaued { v: 0, distinct: 0 })?;
    Ok(amplitudes
        .iter()
        .enumerate()
        .filter(|(v, _)| (*v as u32 & c as u32).count_ones().is_multiple_of(2))
        .map(|(_, &l)| l as u64 * l as u64)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use std::collections::BTreeSet;
    use std::sync::Arc;

    fn func(n: u32, d: u64) -> VectorialFunc {
        VectorialFunc::from_monomial(&Arc::new(FieldSpec::new(n).unwrap()), d)
    }

    #[test]
    fn fwht_trivial_inputs() {
        let mut zeros = [0i64; 8];
        fwht_in_place(&mut zeros);
        assert_eq!(zeros, [0; 8]);
        let mut delta = [0i64; 8];
        delta[0] = 1;
        fwht_in_place(&mut delta);
        assert_eq!(delta, [1; 8]);
    }

    #[test]
    fn fwht_involution_up_to_scale() {
        let input: Vec<i64> = vec![3, -1, 4, 1, -5, 9, 2, -6];
        let mut data = input.clone();
        fwht_in_place(&mut data);
        fwht_in_place(&mut data);
        let scaled: Vec<i64> = input.iter().map(|&x| x * 8).collect();
        assert_eq!(data, scaled);
    }

    #[test]
    fn gold_n3_spectrum_is_ab() {
        let sp = WalshSpectrum::compute(&func(3, 3));
        assert_eq!(sp.value(0, 0), 8);
        assert_eq!(sp.linearity(), 4);
        assert!(is_ab(&sp));
        for w in &sp.values()[1..] {
            assert!(*w == 0 || w.unsigned_abs() == 4);
        }
    }

    #[test]
    fn linear_function_spectrum() {
        let sp = WalshSpectrum::compute(&func(4, 2));
        for w in sp.values() {
            assert!(*w == 0 || w.unsigned_abs() == 16);
        }
        assert!(!is_ab(&sp));
    }

    #[test]
    fn inverse_n5_not_ab() {
        let field = Arc::new(FieldSpec::new(5).unwrap());
        let table = (0..32).map(|x| field.inv(x)).collect();
        let f = VectorialFunc::new(5, table).unwrap();
        assert!(f.is_apn());
        assert!(!is_ab(&WalshSpectrum::compute(&f)));
    }

    #[test]
    fn even_dimension_never_ab() {
        assert!(!is_ab(&WalshSpectrum::compute(&func(4, 3))));
    }

    #[test]
    fn gold_n4_profile() {
        let sp = WalshSpectrum::compute(&func(4, 3));
        let profile = plateau_profile(&sp);
        assert!(profile.is_plateaued());
        assert!(!profile.single_amplitude());
        let mut seen = BTreeSet::new();
        for v in 1..16u16 {
            seen.insert(profile.amplitude(v).unwrap());
        }
        assert_eq!(seen.into_iter().collect::<Vec<_>>(), vec![4, 8]);
        // frozen: 10 bent components, which is 2 mod 4
        assert_eq!(profile.bent_components().len(), 10);
    }

    #[test]
    fn ab_profile_has_single_amplitude() {
        let profile = plateau_profile(&WalshSpectrum::compute(&func(5, 3)));
        assert!(profile.is_plateaued() && profile.single_amplitude());
        assert_eq!(profile.amplitude(1), Some(8)); // 2^{(n+1)/2}
        assert!(profile.bent_components().is_empty());
    }

    #[test]
    fn parseval_per_component() {
        let sp = WalshSpectrum::compute(&func(5, 5));
        for v in 0..32u16 {
            let sum: u64 = (0..32u16)
                .map(|u| {
                    let w = sp.value(u, v) as i64;
                    (w * w) as u64
                })
                .sum();
            assert_eq!(sum, 1 << 10);
        }
    }

    #[test]
    fn autocorrelation_at_zero() {
        let f = BooleanFunc::from_fn(6, |x| x.count_ones() % 2 == 1);
        assert_eq!(autocorrelation(&f, 0), 64);
    }

    #[test]
    fn hyperplane_sum_requires_plateaued_and_direction() {
        let profile = plateau_profile(&WalshSpectrum::compute(&func(4, 3)));
        assert_eq!(
            amplitude_hyperplane_sum(&profile, 0),
            Err(Error::ZeroDirection)
        );
        // sum over all v of lambda_v^2 = 2^n (3 * 2^n - 2) when APN:
        // check via complementary hyperplane identity at some c.
        let total: u64 = (0..16u16)
            .map(|v| {
                let l = profile.amplitude(v).unwrap() as u64;
                l * l
            })
            .sum();
        assert_eq!(total, 16 * (3 * 16 - 2));
    }
}
