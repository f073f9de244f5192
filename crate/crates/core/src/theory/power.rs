//! Power-function identities: exponent detection, the scaling relation on
//! exclude multiplicities, axis values, the fractional-map APN test, and a
//! two-row histogram shortcut that avoids the 2^{2n} transform entirely.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exclude::{ExcludeHistogram, ExcludeSpectrum};
use crate::field::{FieldElement, FieldSpec};
use crate::vbf::VectorialFunc;

/// If F coincides with x -> x^d over `spec`, returns the canonical exponent
/// (reduced mod 2^n - 1, with x^{2^n - 1} kept distinct from x^0 = 1).
pub fn monomial_exponent(spec: &FieldSpec, f: &VectorialFunc) -> Option<u64> {
    if spec.n() != f.n() {
        return None;
    }
    if f.table().iter().all(|&v| v == 1) {
        return Some(0);
    }
    if f.eval(0) != 0 || f.eval(1) != 1 {
        return None;
    }
    let g = spec.generator();
    let target = f.eval(g);
    if target == 0 {
        return None;
    }
    // discrete log of F(g) base g
    let group_order = (1u64 << spec.n()) - 1;
    let mut power: FieldElement = 1;
    let mut e = 0u64;
    while power != target {
        power = spec.mul(power, g);
        e += 1;
        if e >= group_order {
            return None;
        }
    }
    let d = if e == 0 { group_order } else { e };
    (0..f.len())
        .all(|x| f.eval(x as u16) == spec.pow(x as u16, d))
        .then_some(d)
}

/// Scaling relation for an APN power function x^d: for a, c != 0 and
/// b != a^d, mult(a, b) = mult(c, (a^{-1} c)^d b).  Exhaustive for n <= 6,
/// deterministically sampled above.
pub fn power_uniformity_check(
    spec: &FieldSpec,
    f: &VectorialFunc,
    spectrum: &ExcludeSpectrum,
) -> Result<bool> {
    let d = monomial_exponent(spec, f).ok_or(Error::NotMonomial)?;
    let n = spec.n();
    let size = spec.order();
    let check_one = |a: u16, c: u16, b: u16| -> bool {
        let Some(m1) = spectrum.mult(a, b) else {
            return true; // on-graph, relation not applicable
        };
        let scale = spec.pow(spec.mul(spec.inv(a), c), d);
        let b2 = spec.mul(scale, b);
        let m2 = spectrum
            .mult(c, b2)
            .expect("scaled point stays off-graph when b != a^d");
        m1 == m2
    };
    if n <= 6 {
        for a in 1..size {
            for c in 1..size {
                for b in 0..size {
                    if !check_one(a as u16, c as u16, b as u16) {
                        return Ok(false);
                    }
                }
            }
        }
    } else {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let mask = (size - 1) as u64;
        for _ in 0..20_000 {
            let r = next();
            let a = 1 + ((r >> 4) % (size as u64 - 1)) as u16;
            let c = 1 + ((r >> 20) % (size as u64 - 1)) as u16;
            let b = (r >> 40 & mask) as u16;
            if !check_one(a, c, b) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Axis multiplicities of an APN power function for odd n: mult(a, 0) and
/// mult(0, a) are both (2^{n-1} - 1)/3 for every a != 0.  Returns the pair
/// after checking constancy and the stated value.
pub fn power_axis_mults(
    spec: &FieldSpec,
    f: &VectorialFunc,
    spectrum: &ExcludeSpectrum,
) -> Result<(u16, u16)> {
    let n = spec.n();
    if n.is_multiple_of(2) {
        return Err(Error::RequiresOddDimension(n));
    }
    monomial_exponent(spec, f).ok_or(Error::NotMonomial)?;
    let expected = ((1u32 << (n - 1)) - 1) / 3;
    for a in 1..spec.order() {
        let a = a as u16;
        let row = spectrum.mult(a, 0).expect("(a, 0) off-graph: a^d != 0");
        let col = spectrum.mult(0, a).expect("(0, a) off-graph: a != 0");
        assert_eq!(row as u32, expected, "mult({a}, 0)");
        assert_eq!(col as u32, expected, "mult(0, {a})");
    }
    Ok((expected as u16, expected as u16))
}

/// |Phi^{-1}(im D_1 F)| for Phi(x) = (x^d + b) / (x + a)^d on x != a, which
/// equals 3 mult(a, b) off the graph and 2^n - 1 on it; both are checked
/// against the supplied spectrum.
pub fn phi_preimage_mult(
    spec: &FieldSpec,
    f: &VectorialFunc,
    a: FieldElement,
    b: FieldElement,
    spectrum: &ExcludeSpectrum,
) -> Result<u64> {
    let d = monomial_exponent(spec, f).ok_or(Error::NotMonomial)?;
    let size = spec.order();
    let powers: Vec<FieldElement> = (0..size).map(|x| spec.pow(x as FieldElement, d)).collect();
    let mut in_image = vec![false; size];
    for x in 0..size {
        in_image[(powers[x] ^ powers[x ^ 1]) as usize] = true;
    }
    let mut count = 0u64;
    for x in 0..size as u32 {
        let x = x as u16;
        if x == a {
            continue;
        }
        let phi = spec.mul(powers[x as usize] ^ b, spec.inv(powers[(x ^ a) as usize]));
        if in_image[phi as usize] {
            count += 1;
        }
    }
    match spectrum.mult(a, b) {
        Some(m) => assert_eq!(count, 3 * m as u64),
        None => assert_eq!(count, size as u64 - 1),
    }
    Ok(count)
}

/// APN test for x^d without any spectra: x^d is APN iff for every a != 0
/// the map x -> (x^d + a^d)/(x + a)^d is 2-to-1 from F \ {0, a} into F \ {1}.
pub fn monomial_apn_via_fractional_map(spec: &FieldSpec, d: u64) -> bool {
    let size = spec.order();
    let powers: Vec<FieldElement> = (0..size).map(|x| spec.pow(x as FieldElement, d)).collect();
    let inverses: Vec<FieldElement> = (0..size).map(|x| spec.inv(x as FieldElement)).collect();
    (1..size).into_par_iter().all(|a| {
        let a = a as u16;
        let mut fibers = vec![0u8; size];
        for x in 0..size {
            let x = x as u16;
            if x == 0 || x == a {
                continue;
            }
            let value = spec.mul(
                powers[x as usize] ^ powers[a as usize],
                inverses[powers[(x ^ a) as usize] as usize],
            );
            if value == 1 {
                return false;
            }
            fibers[value as usize] += 1;
            if fibers[value as usize] > 2 {
                return false;
            }
        }
        fibers.iter().all(|&c| c == 0 || c == 2)
    })
}

/// Exclude histogram of an APN power function from two rows of direct triple
/// counts.  The scaling relation makes every row a != 0 a permuted copy of
/// row 1, so the histogram is row0 + (2^n - 1) copies of row 1.  Runs in
/// O(2^{2n}) time and O(2^n) memory, which is what makes n = 14..16 feasible.
pub fn power_exclude_histogram(f: &VectorialFunc) -> Result<ExcludeHistogram> {
    let spec = f.field().ok_or(Error::MissingField)?;
    monomial_exponent(spec, f).ok_or(Error::NotMonomial)?;
    if let Some((a, b, count)) = f.apn_witness() {
        return Err(Error::NotApn { a, b, count });
    }
    let n = f.n();
    let size = f.len();
    let on_graph_count = (3 * size - 2) as u64;
    let mult_cap = (size / 3) as u64;
    let mut counts: BTreeMap<u16, u64> = BTreeMap::new();
    for (row_index, weight) in [(0u16, 1u64), (1, (size - 1) as u64)] {
        let row = ordered_row_counts(f, row_index);
        let fa = f.eval(row_index);
        for (b, &c) in row.iter().enumerate() {
            if b as u16 == fa {
                assert_eq!(c, on_graph_count, "on-graph triple count");
                continue;
            }
            assert_eq!(c % 6, 0, "ordered solutions come in orbits of 6");
            let m = c / 6;
            assert!(m <= mult_cap);
            *counts.entry(m as u16).or_insert(0) += weight;
        }
    }
    let histogram = ExcludeHistogram::from_counts(counts);
    assert_eq!(histogram.total(), ((1u64 << n) - 1) << n);
    Ok(histogram)
}

/// s[b] = #{(x, y) : F(x) + F(y) + F(x + y + a) = b}, the ordered count of
/// solutions to the row-a triple system.
fn ordered_row_counts(f: &VectorialFunc, a: u16) -> Vec<u64> {
    let size = f.len();
    let table = f.table();
    (0..size)
        .into_par_iter()
        .fold(
            || vec![0u64; size],
            |mut acc, x| {
                let fx = table[x];
                let base = x ^ a as usize;
                for y in 0..size {
                    acc[(fx ^ table[y] ^ table[base ^ y]) as usize] += 1;
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; size],
            |mut left, right| {
                for (l, r) in left.iter_mut().zip(right) {
                    *l += r;
                }
                left
            },
        )
}
