//! Linear structures and derivative weights of the gamma indicator of an
//! APN function, viewed as a Boolean function on 2n bits.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spectral::{fwht_in_place, FwhtScalar};
use crate::vbf::VectorialFunc;

trait AutocorrScalar: FwhtScalar + PartialEq {
    fn from_sign(negative: bool) -> Self;
    fn square(self) -> Self;
    fn widen(self) -> i128;
}

impl AutocorrScalar for i64 {
    fn from_sign(negative: bool) -> i64 {
        if negative {
            -1
        } else {
            1
        }
    }
    fn square(self) -> i64 {
        self.checked_mul(self).expect("square overflow")
    }
    fn widen(self) -> i128 {
        self as i128
    }
}

impl AutocorrScalar for i128 {
    fn from_sign(negative: bool) -> i128 {
        if negative {
            -1
        } else {
            1
        }
    }
    fn square(self) -> i128 {
        self * self
    }
    fn widen(self) -> i128 {
        self
    }
}

fn gamma_autocorrelations<T: AutocorrScalar>(f: &VectorialFunc) -> Vec<T> {
    let n = f.n();
    let size = f.len();
    // sign table of gamma: -1 where gamma = 1
    let mut buf = vec![T::from_sign(false); 1 << (2 * n)];
    let mut reached = vec![false; size];
    for a in 1..size {
        reached.fill(false);
        for x in 0..size {
            reached[(f.eval(x as u16) ^ f.eval((x ^ a) as u16)) as usize] = true;
        }
        for (b, &hit) in reached.iter().enumerate() {
            if hit {
                buf[(a << n) | b] = T::from_sign(true);
            }
        }
    }
    fwht_in_place(&mut buf);
    buf.par_iter_mut().for_each(|w| *w = w.square());
    fwht_in_place(&mut buf);
    // buf[s] = 2^{2n} * autocorrelation of gamma at shift s
    buf
}

/// All nonzero directions (a, b), packed as (a << n) | b, in which the
/// derivative of gamma_F is constant.  Found through the autocorrelation:
/// a constant derivative at s means |autocorrelation(s)| = 2^{2n}.
pub fn gamma_linear_structures(f: &VectorialFunc) -> Result<Vec<u32>> {
    if let Some((a, b, count)) = f.apn_witness() {
        return Err(Error::NotApn { a, b, count });
    }
    let n = f.n();
    fn scan<T: AutocorrScalar>(buf: &[T], full: i128) -> Vec<u32> {
        assert_eq!(buf[0].widen(), full);
        buf.iter()
            .enumerate()
            .skip(1)
            .filter(|(_, t)| {
                let t = t.widen();
                t == full || t == -full
            })
            .map(|(s, _)| s as u32)
            .collect()
    }
    let full: i128 = 1 << (4 * n);
    let structures = if n >= 11 {
        scan(&gamma_autocorrelations::<i128>(f), full)
    } else {
        scan(&gamma_autocorrelations::<i64>(f), full)
    };
    Ok(structures)
}

/// For quadratic APN F over even n >= 4 with F(0) = 0: the weight of every
/// derivative D_{(0,b)} gamma_F, b != 0, is divisible by 6 * 2^n and at most
/// 2^n (2^n - 3 * 2^{n/2 - 1} + 2).
pub fn gamma_weight_divisibility(f: &VectorialFunc) -> Result<bool> {
    let n = f.n();
    if !n.is_multiple_of(2) || n < 4 {
        return Err(Error::RequiresEvenDimension(n));
    }
    if !f.is_quadratic() {
        return Err(Error::NotQuadratic(f.algebraic_degree()));
    }
    if let Some((a, b, count)) = f.apn_witness() {
        return Err(Error::NotApn { a, b, count });
    }
    if f.eval(0) != 0 {
        return Err(Error::RequiresZeroFixed(f.eval(0)));
    }
    let gamma = f.difference_tables();
    let gamma = gamma.gamma();
    let two_n = 1u64 << n;
    let divisor = 6 * two_n;
    let upper = two_n * (two_n - 3 * (1 << (n / 2 - 1)) + 2);
    for b in 1..f.len() as u32 {
        let w = gamma.derivative_weight(b);
        if !w.is_multiple_of(divisor) || w > upper {
            return Ok(false);
        }
    }
    Ok(true)
}
