//! Ortho-derivatives of quadratic APN functions.
//!
//! For quadratic APN F the set {F(x) + F(x+a) + F(0) + F(a) : x} is a linear
//! hyperplane for every a != 0, and pi_F(a) is its unique nonzero normal
//! vector (pi_F(0) = 0).

use crate::error::{Error, Result};
use crate::field::bit_dot;
use crate::vbf::VectorialFunc;

#[derive(Debug, Clone)]
pub struct OrthoDerivative {
    n: u32,
    table: Vec<u16>,
}

fn msb(v: u16) -> u32 {
    15 - v.leading_zeros()
}

/// Computes pi_F by Gaussian elimination over F_2 on each direction's
/// derivative-image span.  A span of dimension other than n - 1 contradicts
/// the quadratic APN preconditions and is reported as an error.
pub fn ortho_derivative(f: &VectorialFunc) -> Result<OrthoDerivative> {
    if !f.is_quadratic() {
        return Err(Error::NotQuadratic(f.algebraic_degree()));
    }
    if let Some((a, b, count)) = f.apn_witness() {
        return Err(Error::NotApn { a, b, count });
    }
    let n = f.n();
    let size = f.len();
    let f0 = f.eval(0);
    let mut table = vec![0u16; size];
    for a in 1..size as u16 {
        let fa = f.eval(a);
        // row-echelon basis of the span, indexed by pivot bit
        let mut basis = [0u16; 16];
        let mut rank = 0u32;
        for x in 0..size as u16 {
            let mut v = f.eval(x) ^ f.eval(x ^ a) ^ f0 ^ fa;
            while v != 0 {
                let pivot = msb(v) as usize;
                if basis[pivot] == 0 {
                    basis[pivot] = v;
                    rank += 1;
                    break;
                }
                v ^= basis[pivot];
            }
            if rank >= n {
                return Err(Error::SpanDimension {
                    a,
                    dim: rank,
                    expected: n - 1,
                });
            }
        }
        if rank != n - 1 {
            return Err(Error::SpanDimension {
                a,
                dim: rank,
                expected: n - 1,
            });
        }
        // Reduce to RREF, then read off the one-dimensional nullspace.
        let mut rows: Vec<u16> = basis.iter().copied().filter(|&r| r != 0).collect();
        for i in 0..rows.len() {
            let pivot = msb(rows[i]);
            for j in 0..rows.len() {
                if j != i && rows[j] >> pivot & 1 == 1 {
                    rows[j] ^= rows[i];
                }
            }
        }
        let pivot_mask: u16 = rows.iter().map(|&r| 1u16 << msb(r)).fold(0, |m, b| m | b);
        let free = (0..n)
            .find(|&i| pivot_mask >> i & 1 == 0)
            .expect("rank n-1 leaves one free coordinate");
        let mut normal: u16 = 1 << free;
        for &row in &rows {
            if row >> free & 1 == 1 {
                normal |= 1 << msb(row);
            }
        }
        debug_assert!(rows.iter().all(|&r| bit_dot(normal as u32, r as u32) == 0));
        table[a as usize] = normal;
    }
    Ok(OrthoDerivative { n, table })
}

impl OrthoDerivative {
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn value(&self, a: u16) -> u16 {
        self.table[a as usize]
    }

    pub fn table(&self) -> &[u16] {
        &self.table
    }

    /// The ortho-derivative as an (n, n)-function, e.g. for spectral reuse.
    pub fn as_vbf(&self) -> VectorialFunc {
        VectorialFunc::new(self.n, self.table.clone()).expect("valid table")
    }

    /// Hamming weight of the component function x -> <b, pi_F(x)>.
    pub fn component_weight(&self, b: u16) -> u32 {
        self.table
            .iter()
            .filter(|&&v| bit_dot(b as u32, v as u32) == 1)
            .count() as u32
    }
}
