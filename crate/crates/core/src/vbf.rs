//! Truth-table representation of functions F: F_2^n -> F_2^n and their
//! elementary combinatorics: derivatives, difference tables, ANF degree,
//! APN and 3-to-1 tests.
//!
//! The truth table is the canonical representation; polynomial forms are
//! constructors only.

use std::sync::{Arc, OnceLock};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};

/// F: F_2^n -> F_2^n as a table of 2^n n-bit outputs, with a cached
/// algebraic degree and an optional back-reference to the field the table
/// was evaluated over.
#[derive(Debug, Clone)]
pub struct VectorialFunc {
    n: u32,
    table: Vec<u16>,
    field: Option<Arc<FieldSpec>>,
    degree: OnceLock<u32>,
}

impl VectorialFunc {
    pub fn new(n: u32, table: Vec<u16>) -> Result<VectorialFunc> {
        let expected = 1usize << n;
        if table.len() != expected {
            return Err(Error::TableLength {
                got: table.len(),
                expected,
            });
        }
        if let Some((index, &value)) = table
            .iter()
            .enumerate()
            .find(|(_, &v)| v as usize >= expected)
        {
            return Err(Error::TableEntryRange {
                index,
                value: value as u32,
                max: (expected - 1) as u32,
            });
        }
        Ok(VectorialFunc {
            n,
            table,
            field: None,
            degree: OnceLock::new(),
        })
    }

    pub(crate) fn with_field(mut self, field: Arc<FieldSpec>) -> VectorialFunc {
        self.field = Some(field);
        self
    }

    /// The monomial map x -> x^d over the given field.
    pub fn from_monomial(field: &Arc<FieldSpec>, d: u64) -> VectorialFunc {
        let table = (0..field.order())
            .map(|x| field.pow(x as FieldElement, d))
            .collect();
        VectorialFunc {
            n: field.n(),
            table,
            field: Some(Arc::clone(field)),
            degree: OnceLock::new(),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// 2^n, the table length.
    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn eval(&self, x: u16) -> u16 {
        self.table[x as usize]
    }

    pub fn table(&self) -> &[u16] {
        &self.table
    }

    pub fn field(&self) -> Option<&Arc<FieldSpec>> {
        self.field.as_ref()
    }

    /// The derivative D_a F: x -> F(x) + F(x + a).
    pub fn derivative(&self, a: u16) -> VectorialFunc {
        let table = (0..self.len())
            .map(|x| self.table[x] ^ self.table[x ^ a as usize])
            .collect();
        VectorialFunc {
            n: self.n,
            table,
            field: self.field.clone(),
            degree: OnceLock::new(),
        }
    }

    /// Image of the shifted derivative x -> F(x) + F(x + a) + F(a + beta),
    /// returned sorted.
    pub fn shifted_derivative_image(&self, a: u16, beta: u16) -> Vec<u16> {
        let shift = self.table[(a ^ beta) as usize];
        let mut seen = vec![false; self.len()];
        for x in 0..self.len() {
            seen[(self.table[x] ^ self.table[x ^ a as usize] ^ shift) as usize] = true;
        }
        (0..self.len() as u16)
            .filter(|&v| seen[v as usize])
            .collect()
    }

    /// XOR of all outputs; nonzero iff the algebraic degree is n.
    pub fn xor_sum(&self) -> u16 {
        self.table.iter().fold(0, |acc, &v| acc ^ v)
    }

    /// Full difference tables (delta and gamma).  Memory is 2^{2n} counters;
    /// intended for n up to ~12.
    pub fn difference_tables(&self) -> DifferenceTables {
        let size = self.len();
        let mut delta = vec![0u32; size * size];
        delta
            .par_chunks_exact_mut(size)
            .enumerate()
            .for_each(|(a, row)| {
                for x in 0..size {
                    row[(self.table[x] ^ self.table[x ^ a]) as usize] += 1;
                }
            });
        let mut gamma = BooleanFunc::zeroed(2 * self.n);
        for a in 1..size {
            for b in 0..size {
                if delta[a * size + b] > 0 {
                    gamma.set(((a << self.n) | b) as u32, true);
                }
            }
        }
        DifferenceTables {
            n: self.n,
            delta,
            gamma,
        }
    }

    /// True iff every nonzero-direction derivative is 2-to-1, i.e. no
    /// equation F(x) + F(x+a) = b has more than 2 solutions.  Streams one
    /// direction at a time so only O(2^n) scratch is used.
    pub fn is_apn(&self) -> bool {
        self.apn_witness().is_none()
    }

    /// None when APN; otherwise some (a, b, count) with count > 2.
    pub fn apn_witness(&self) -> Option<(u16, u16, u32)> {
        let size = self.len();
        (1..size)
            .into_par_iter()
            .map_init(
                || vec![0u8; size],
                |counts, a| {
                    counts.fill(0);
                    for x in 0..size {
                        let b = (self.table[x] ^ self.table[x ^ a]) as usize;
                        counts[b] = counts[b].saturating_add(1);
                        if counts[b] > 2 {
                            return Some((a as u16, b as u16, counts[b] as u32));
                        }
                    }
                    None
                },
            )
            .find_map_any(|w| w)
    }

    /// True iff every image point has exactly 3 preimages except a single
    /// point with exactly 1.  This is the exact shape, not an image-size
    /// proxy.
    pub fn is_3to1(&self) -> bool {
        let mut preimages = vec![0u32; self.len()];
        for &v in &self.table {
            preimages[v as usize] += 1;
        }
        let mut singles = 0usize;
        for &c in &preimages {
            match c {
                0 | 3 => {}
                1 => singles += 1,
                _ => return false,
            }
        }
        singles == 1
    }

    /// Max ANF monomial weight over all output coordinates.  Cached.
    pub fn algebraic_degree(&self) -> u32 {
        *self.degree.get_or_init(|| {
            let mut max = 0u32;
            let mut bits = vec![0u8; self.len()];
            for coord in 0..self.n {
                for (x, b) in bits.iter_mut().enumerate() {
                    *b = (self.table[x] >> coord & 1) as u8;
                }
                moebius_in_place(&mut bits);
                for (x, &b) in bits.iter().enumerate() {
                    if b == 1 {
                        max = max.max(x.count_ones());
                    }
                }
                if max == self.n {
                    break;
                }
            }
            max
        })
    }

    /// Degree exactly 2: every derivative is affine and F itself is not.
    pub fn is_quadratic(&self) -> bool {
        self.algebraic_degree() == 2
    }

    /// Number of points where the two tables disagree.
    pub fn hamming_distance(&self, other: &VectorialFunc) -> Result<u32> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        Ok(self
            .table
            .iter()
            .zip(&other.table)
            .filter(|(a, b)| a != b)
            .count() as u32)
    }
}

/// Binary Moebius (ANF) transform of a 0/1 table, in place.  Involutive.
pub fn moebius_in_place(bits: &mut [u8]) {
    let size = bits.len();
    assert!(size.is_power_of_two());
    let mut step = 1;
    while step < size {
        for block in (0..size).step_by(step * 2) {
            for x in block + step..block + step * 2 {
                bits[x] ^= bits[x - step];
            }
        }
        step <<= 1;
    }
}

/// A Boolean function on n_in input bits as a packed bit table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanFunc {
    n_in: u32,
    bits: Vec<u64>,
}

impl BooleanFunc {
    pub fn zeroed(n_in: u32) -> BooleanFunc {
        let words = (1usize << n_in).div_ceil(64);
        BooleanFunc {
            n_in,
            bits: vec![0; words],
        }
    }

    pub fn from_fn(n_in: u32, mut f: impl FnMut(u32) -> bool) -> BooleanFunc {
        let mut out = BooleanFunc::zeroed(n_in);
        for x in 0..1u64 << n_in {
            if f(x as u32) {
                out.set(x as u32, true);
            }
        }
        out
    }

    pub fn n_in(&self) -> u32 {
        self.n_in
    }

    pub fn len(&self) -> usize {
        1 << self.n_in
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn get(&self, x: u32) -> bool {
        self.bits[(x >> 6) as usize] >> (x & 63) & 1 == 1
    }

    pub fn set(&mut self, x: u32, value: bool) {
        let word = (x >> 6) as usize;
        let mask = 1u64 << (x & 63);
        if value {
            self.bits[word] |= mask;
        } else {
            self.bits[word] &= !mask;
        }
    }

    /// Hamming weight (support size).
    pub fn weight(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Weight of the derivative x -> f(x) + f(x + shift).
    pub fn derivative_weight(&self, shift: u32) -> u64 {
        let mut w = 0u64;
        for x in 0..self.len() as u32 {
            if self.get(x) != self.get(x ^ shift) {
                w += 1;
            }
        }
        w
    }
}

/// delta(a, b) = #{x : F(x) + F(x+a) = b} and the gamma indicator on 2n bits.
#[derive(Debug, Clone)]
pub struct DifferenceTables {
    n: u32,
    delta: Vec<u32>,
    gamma: BooleanFunc,
}

impl DifferenceTables {
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn delta(&self, a: u16, b: u16) -> u32 {
        self.delta[((a as usize) << self.n) | b as usize]
    }

    pub fn gamma(&self) -> &BooleanFunc {
        &self.gamma
    }

    /// Max of delta(a, b) over a != 0 (the differential uniformity).
    pub fn uniformity(&self) -> u32 {
        let size = 1usize << self.n;
        self.delta[size..].iter().copied().max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    fn field(n: u32) -> Arc<FieldSpec> {
        Arc::new(FieldSpec::new(n).unwrap())
    }

    #[test]
    fn monomial_identity() {
        let f = VectorialFunc::from_monomial(&field(3), 1);
        assert_eq!(f.table(), &[0, 1, 2, 3, 4, 5, 6, 7]);
        assert_eq!(f.algebraic_degree(), 1);
        assert!(!f.is_apn(), "identity has constant derivatives");
    }

    #[test]
    fn gold_n3_tables() {
        let f = VectorialFunc::from_monomial(&field(3), 3);
        // frozen from hand evaluation over x^3 + x + 1
        assert_eq!(f.table(), &[0, 1, 3, 4, 5, 6, 7, 2]);
        assert!(f.is_apn());
        assert!(f.is_quadratic());
    }

    #[test]
    fn derivative_at_zero_vanishes() {
        let f = VectorialFunc::from_monomial(&field(4), 3);
        assert!(f.derivative(0).table().iter().all(|&v| v == 0));
    }

    #[test]
    fn apn_derivative_image_is_half_space() {
        let f = VectorialFunc::from_monomial(&field(5), 3);
        for a in 1..32u16 {
            let mut img: Vec<u16> = f.derivative(a).table().to_vec();
            img.sort_unstable();
            img.dedup();
            assert_eq!(img.len(), 16);
        }
    }

    #[test]
    fn shifted_derivative_image_example() {
        // H_1^0 of x^3 over F_8: image of x^3 + (x+1)^3 + 1, frozen by
        // direct enumeration.
        let f = VectorialFunc::from_monomial(&field(3), 3);
        assert_eq!(f.shifted_derivative_image(1, 0), vec![0, 2, 4, 6]);
    }

    #[test]
    fn difference_tables_gold_n3() {
        let f = VectorialFunc::from_monomial(&field(3), 3);
        let dt = f.difference_tables();
        for a in 1..8u16 {
            let mut row_sum = 0;
            for b in 0..8u16 {
                let d = dt.delta(a, b);
                assert!(d == 0 || d == 2);
                row_sum += d;
                assert_eq!(dt.gamma().get(((a as u32) << 3) | b as u32), d > 0);
            }
            assert_eq!(row_sum, 8);
        }
        assert_eq!(dt.uniformity(), 2);
        // gamma(0, .) = 0
        for b in 0..8u32 {
            assert!(!dt.gamma().get(b));
        }
    }

    #[test]
    fn linear_function_uniformity_is_full() {
        let f = VectorialFunc::from_monomial(&field(3), 2);
        assert_eq!(f.difference_tables().uniformity(), 8);
    }

    #[test]
    fn gamma_weight_of_apn() {
        // wt(gamma_F) = C(2^n, 2) for APN F
        let f = VectorialFunc::from_monomial(&field(4), 3);
        assert_eq!(f.difference_tables().gamma().weight(), 16 * 15 / 2);
    }

    #[test]
    fn three_to_one_shapes() {
        let f6 = field(6);
        assert!(VectorialFunc::from_monomial(&f6, 3).is_3to1());
        // permutation: all preimages size 1
        assert!(!VectorialFunc::from_monomial(&f6, 1).is_3to1());
        // x^9 over F_64: gcd(9, 63) = 9, preimages of size 9
        assert!(!VectorialFunc::from_monomial(&f6, 9).is_3to1());
    }

    #[test]
    fn hamming_distance_cases() {
        let f = VectorialFunc::from_monomial(&field(3), 3);
        let g = VectorialFunc::from_monomial(&field(3), 5);
        assert_eq!(f.hamming_distance(&f).unwrap(), 0);
        // frozen by direct count of table disagreements
        assert_eq!(f.hamming_distance(&g).unwrap(), 6);
        let mut flipped = f.table().to_vec();
        flipped[3] ^= 1;
        let h = VectorialFunc::new(3, flipped).unwrap();
        assert_eq!(f.hamming_distance(&h).unwrap(), 1);
        let wrong_n = VectorialFunc::from_monomial(&field(4), 3);
        assert!(matches!(
            f.hamming_distance(&wrong_n),
            Err(Error::DimensionMismatch(3, 4))
        ));
    }

    #[test]
    fn degree_is_n_iff_xor_sum_nonzero() {
        let f5 = field(5);
        for d in [1u64, 3, 5, 15, 29, 30] {
            let f = VectorialFunc::from_monomial(&f5, d);
            assert_eq!(
                f.algebraic_degree() == 5,
                f.xor_sum() != 0,
                "d = {d}, degree {}",
                f.algebraic_degree()
            );
        }
    }

    #[test]
    fn moebius_is_involutive() {
        let mut bits: Vec<u8> = (0..32).map(|x: u32| ((x * x % 7) & 1) as u8).collect();
        let orig = bits.clone();
        moebius_in_place(&mut bits);
        moebius_in_place(&mut bits);
        assert_eq!(bits, orig);
    }

    #[test]
    fn table_validation() {
        assert!(matches!(
            VectorialFunc::new(3, vec![0; 7]),
            Err(Error::TableLength {
                got: 7,
                expected: 8
            })
        ));
        assert!(matches!(
            VectorialFunc::new(3, vec![0, 0, 0, 0, 0, 0, 0, 8]),
            Err(Error::TableEntryRange { index: 7, .. })
        ));
    }
}
