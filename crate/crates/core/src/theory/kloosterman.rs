//! Binary Kloosterman sums K_n(a) = sum_x (-1)^{Tr(ax + 1/x)} with 1/0 := 0.

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::spectral::fwht_in_place;

/// All K_n(a) for one field, with the deviation max_{a != 0} |K_n(a) - 1|
/// that drives the distance bound for the inverse function.
#[derive(Debug, Clone)]
pub struct KloostermanTable {
    n: u32,
    values: Vec<i32>,
    max_dev: u32,
}

/// Computes the table by one Walsh-Hadamard transform of the sign table of
/// Tr(1/x): K_n(a) is the transform read at the trace-dual index of a.
/// Restricted to odd n, the setting in which the stated value-set and
/// congruence facts are used; those facts are verified on every entry.
pub fn kloosterman_table(spec: &FieldSpec) -> Result<KloostermanTable> {
    let n = spec.n();
    if n.is_multiple_of(2) {
        return Err(Error::RequiresOddDimension(n));
    }
    let mut signs: Vec<i32> = (0..spec.order())
        .map(|x| 1 - 2 * spec.trace(spec.inv(x as FieldElement)) as i32)
        .collect();
    fwht_in_place(&mut signs);
    let values: Vec<i32> = (0..spec.order())
        .map(|a| signs[spec.trace_dual(a as FieldElement) as usize])
        .collect();

    assert_eq!(values[0], 0, "K_n(0) sums a balanced trace");
    let range_sq = 1i64 << (n + 2); // (2^{n/2+1})^2
    let mut max_dev = 0u32;
    for &k in &values[1..] {
        let dev = k as i64 - 1;
        assert_eq!(dev.rem_euclid(4), 3, "K_n(a) - 1 must be 3 mod 4");
        assert!(dev * dev <= range_sq, "|K_n(a) - 1| exceeds 2^{{n/2+1}}");
        max_dev = max_dev.max(dev.unsigned_abs() as u32);
    }
    Ok(KloostermanTable { n, values, max_dev })
}

impl KloostermanTable {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn value(&self, a: FieldElement) -> i32 {
        self.values[a as usize]
    }

    pub fn values(&self) -> &[i32] {
        &self.values
    }

    /// max over a != 0 of |K_n(a) - 1|.
    pub fn max_dev(&self) -> u32 {
        self.max_dev
    }

    /// ceil((2^n - 5 - max_dev) / 6): a lower bound on every exclude
    /// multiplicity of the graph of the inverse function.
    pub fn emin_lower_bound(&self) -> i64 {
        let numerator = (1i64 << self.n) - 5 - self.max_dev as i64;
        (numerator + 5).div_euclid(6)
    }

    /// Distance bound to any other APN function: the e_min bound plus one.
    pub fn distance_lower_bound(&self) -> i64 {
        self.emin_lower_bound() + 1
    }
}
