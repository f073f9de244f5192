//! Arithmetic in F_{2^n} for 2 <= n <= 16, over a fixed polynomial basis.
//!
//! Elements are bitmasks of coordinates in the polynomial basis
//! {1, t, t^2, ..., t^{n-1}} modulo the field polynomial.  The default
//! modulus for each n is the lexicographically least irreducible polynomial
//! of that degree, so catalog truth tables are bit-reproducible across
//! builds.  Users may override the modulus.

use crate::error::{Error, Result};

/// An element of F_{2^n}, stored as an n-bit mask in the polynomial basis.
pub type FieldElement = u16;

pub const MIN_N: u32 = 2;
pub const MAX_N: u32 = 16;

/// Lexicographically least irreducible polynomial of degree n = 2..=16,
/// as a bitmask including the leading x^n term.
pub const DEFAULT_MODULI: [u32; 15] = [
    0x7, 0xB, 0x13, 0x25, 0x43, 0x83, 0x11B, 0x203, 0x409, 0x805, 0x1009, 0x201B, 0x4021, 0x8003,
    0x1002B,
];

/// Prime factors of 2^n - 1 for n = 2..=16, used to verify primitivity.
const MERSENNE_FACTORS: [&[u32]; 15] = [
    &[3],
    &[7],
    &[3, 5],
    &[31],
    &[3, 7],
    &[127],
    &[3, 5, 17],
    &[7, 73],
    &[3, 11, 31],
    &[23, 89],
    &[3, 5, 7, 13],
    &[8191],
    &[3, 43, 127],
    &[7, 31, 151],
    &[3, 5, 17, 257],
];

/// The default modulus for dimension n.
pub fn default_modulus(n: u32) -> Result<u32> {
    if !(MIN_N..=MAX_N).contains(&n) {
        return Err(Error::DimensionRange(n, MIN_N, MAX_N));
    }
    Ok(DEFAULT_MODULI[(n - MIN_N) as usize])
}

fn poly_degree(p: u32) -> i32 {
    31 - p.leading_zeros() as i32
}

fn poly_rem(mut a: u32, m: u32) -> u32 {
    let dm = poly_degree(m);
    while a != 0 && poly_degree(a) >= dm {
        a ^= m << (poly_degree(a) - dm);
    }
    a
}

/// Irreducibility over F_2 by exhaustive trial division: a polynomial of
/// degree n has a nontrivial factor iff it has one of degree <= n/2.
pub fn is_irreducible(p: u32) -> bool {
    let n = poly_degree(p);
    if n <= 0 {
        return false;
    }
    for d in 1..=(n / 2) {
        for q in (1u32 << d)..(1u32 << (d + 1)) {
            if poly_rem(p, q) == 0 {
                return false;
            }
        }
    }
    true
}

/// A fixed model of F_{2^n}: modulus, a verified-primitive generator, and the
/// absolute trace table.  Immutable after construction; all operations are
/// pure and safe for unrestricted concurrent use.
#[derive(Debug, Clone)]
pub struct FieldSpec {
    n: u32,
    modulus: u32,
    generator: FieldElement,
    trace_table: Vec<u8>,
}

impl FieldSpec {
    /// Field with the default (lexicographically least) modulus for n.
    pub fn new(n: u32) -> Result<FieldSpec> {
        FieldSpec::with_modulus(n, default_modulus(n)?)
    }

    /// Field with a caller-supplied modulus, which must be irreducible of
    /// degree exactly n.  The generator is the least primitive element,
    /// verified by raising to (2^n - 1)/p for every prime p | 2^n - 1.
    pub fn with_modulus(n: u32, modulus: u32) -> Result<FieldSpec> {
        if !(MIN_N..=MAX_N).contains(&n) {
            return Err(Error::DimensionRange(n, MIN_N, MAX_N));
        }
        if poly_degree(modulus) != n as i32 || !is_irreducible(modulus) {
            return Err(Error::InvalidModulus(modulus, n));
        }
        let mut spec = FieldSpec {
            n,
            modulus,
            generator: 0,
            trace_table: Vec::new(),
        };
        spec.generator = (2..1u32 << n)
            .map(|g| g as FieldElement)
            .find(|&g| spec.is_primitive(g))
            .expect("every finite field has a primitive element");
        spec.trace_table = (0..1u32 << n)
            .map(|x| spec.trace_by_squaring(x as FieldElement))
            .collect();
        let ones: u32 = spec.trace_table.iter().map(|&b| b as u32).sum();
        assert_eq!(ones, 1 << (n - 1), "trace must be balanced");
        Ok(spec)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// 2^n, the number of field elements.
    pub fn order(&self) -> usize {
        1 << self.n
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// The stored primitive element (least one for this modulus).
    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    /// Carry-less multiply with eager modular reduction.
    pub fn mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        debug_assert!((x as usize) < self.order() && (y as usize) < self.order());
        let mut acc: u32 = 0;
        let mut a = x as u32;
        let mut b = y as u32;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a >> self.n & 1 == 1 {
                a ^= self.modulus;
            }
        }
        acc as FieldElement
    }

    /// x^d by square-and-multiply.  x^0 = 1 for every x, including 0^0 = 1,
    /// so that the monomial map x -> x^d degenerates to the constant 1 at
    /// d = 0.
    pub fn pow(&self, x: FieldElement, d: u64) -> FieldElement {
        let mut result: FieldElement = 1;
        let mut base = x;
        let mut e = d;
        while e != 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }

    /// Multiplicative inverse, with the convention inv(0) = 0.
    pub fn inv(&self, x: FieldElement) -> FieldElement {
        if x == 0 {
            0
        } else {
            self.pow(x, (1u64 << self.n) - 2)
        }
    }

    /// Absolute trace Tr(x) = sum of x^{2^i}, as a bit.
    pub fn trace(&self, x: FieldElement) -> u8 {
        self.trace_table[x as usize]
    }

    fn trace_by_squaring(&self, x: FieldElement) -> u8 {
        let mut acc: FieldElement = 0;
        let mut y = x;
        for _ in 0..self.n {
            acc ^= y;
            y = self.mul(y, y);
        }
        debug_assert!(acc <= 1, "trace of {x:#x} reduced to {acc:#x}");
        acc as u8
    }

    /// True iff x has multiplicative order exactly 2^n - 1, checked through
    /// the hard-coded factorization of 2^n - 1.
    pub fn is_primitive(&self, x: FieldElement) -> bool {
        if x == 0 {
            return false;
        }
        let m = (1u64 << self.n) - 1;
        MERSENNE_FACTORS[(self.n - MIN_N) as usize]
            .iter()
            .all(|&p| self.pow(x, m / p as u64) != 1)
    }

    /// The linear map sigma with bit i of sigma(u) equal to Tr(u * t^i),
    /// so that <sigma(u), x> (bitwise dot) = Tr(u * x).  It converts between
    /// the trace pairing of the field and the bitwise pairing used by the
    /// transforms.
    pub fn trace_dual(&self, u: FieldElement) -> FieldElement {
        let mut s: FieldElement = 0;
        for i in 0..self.n {
            if self.trace(self.mul(u, 1 << i)) == 1 {
                s |= 1 << i;
            }
        }
        s
    }
}

/// Parity of the bitwise dot product <u, x> over F_2.
#[inline]
pub fn bit_dot(u: u32, x: u32) -> u8 {
    ((u & x).count_ones() & 1) as u8
}
