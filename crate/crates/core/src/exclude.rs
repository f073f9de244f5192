//! Exclude multiplicities of Sidon sets, specialized to graphs of APN
//! functions.
//!
//! For a Sidon set S and p outside S, mult_S(p) counts the unordered triples
//! {x, y, z} in S with x + y + z = p.  The graph of F is Sidon exactly when
//! F is APN, and its off-graph multiplicities come out of one cube-and-
//! transform pass over the Walsh table: the transformed cube at an off-graph
//! (a, b) equals 6 * 2^{2n} * mult(a, b), and at an on-graph point it equals
//! (3 * 2^n - 2) * 2^{2n}.  A brute-force pair-enumeration oracle serves as
//! the independent check and handles arbitrary Sidon sets.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spectral::{fwht_in_place, FwhtScalar};
use crate::vbf::VectorialFunc;

/// Sentinel stored at on-graph cells of the multiplicity table, distinct
/// from 0 so that a multiplicity-zero point (a non-maximality witness) is
/// never conflated with an on-graph point.
pub const ON_GRAPH: u16 = u16::MAX;

// ---------------------------------------------------------------------
// Sidon sets and the brute-force oracle
// ---------------------------------------------------------------------

/// A set of points in F_2^ambient_dim, kept sorted, with O(1) membership.
#[derive(Debug, Clone)]
pub struct SidonSet {
    ambient_dim: u32,
    points: Vec<u32>,
    membership: Vec<u64>,
}

impl SidonSet {
    pub fn new(ambient_dim: u32, points: impl IntoIterator<Item = u32>) -> Result<SidonSet> {
        if ambient_dim == 0 || ambient_dim > 26 {
            return Err(Error::DimensionRange(ambient_dim, 1, 26));
        }
        let mut points: Vec<u32> = points.into_iter().collect();
        points.sort_unstable();
        points.dedup();
        if let Some(&p) = points.last() {
            if p as u64 >= 1u64 << ambient_dim {
                return Err(Error::PointRange(p as u64, ambient_dim));
            }
        }
        let mut membership = vec![0u64; (1usize << ambient_dim).div_ceil(64)];
        for &p in &points {
            membership[(p >> 6) as usize] |= 1 << (p & 63);
        }
        Ok(SidonSet {
            ambient_dim,
            points,
            membership,
        })
    }

    /// The graph {(x, F(x))} of F as a subset of F_2^{2n}.  The explicit
    /// point-set representation is for the oracle paths and is capped at
    /// n <= 13 (ambient dimension 26); the transform pipeline serves the
    /// larger dimensions.
    pub fn graph_of(f: &VectorialFunc) -> SidonSet {
        let n = f.n();
        SidonSet::new(
            2 * n,
            (0..f.len() as u32).map(|x| (x << n) | f.eval(x as u16) as u32),
        )
        .expect("graph ambient dimension exceeds the point-set cap")
    }

    pub fn ambient_dim(&self) -> u32 {
        self.ambient_dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[u32] {
        &self.points
    }

    #[inline]
    pub fn contains(&self, p: u32) -> bool {
        self.membership[(p >> 6) as usize] >> (p & 63) & 1 == 1
    }

    /// True iff no four pairwise-distinct points sum to zero, equivalently
    /// all pairwise sums of distinct points are distinct.
    pub fn is_sidon(&self) -> bool {
        let mut seen = vec![0u64; (1usize << self.ambient_dim).div_ceil(64)];
        for (i, &x) in self.points.iter().enumerate() {
            for &y in &self.points[i + 1..] {
                let s = x ^ y;
                let word = &mut seen[(s >> 6) as usize];
                let mask = 1u64 << (s & 63);
                if *word & mask != 0 {
                    return false;
                }
                *word |= mask;
            }
        }
        true
    }

    /// Exclude multiplicity of p by pair enumeration: for each pair x < y,
    /// test z = x + y + p for membership and count only z > y so each
    /// unordered triple is counted once.
    pub fn exclude_mult(&self, p: u32) -> Result<u64> {
        if self.contains(p) {
            return Err(Error::PointInSet(p as u64));
        }
        let mut count = 0u64;
        for (i, &x) in self.points.iter().enumerate() {
            for &y in &self.points[i + 1..] {
                let z = x ^ y ^ p;
                if z > y && self.contains(z) {
                    count += 1;
                }
            }
        }
        Ok(count)
    }

    /// A Sidon set is maximal iff every outside point has nonzero exclude
    /// multiplicity.  Enumerates all triples once into a coverage bitmap.
    pub fn is_maximal(&self) -> bool {
        if !self.is_sidon() {
            return false;
        }
        let size = 1usize << self.ambient_dim;
        let mut covered = vec![0u64; size.div_ceil(64)];
        for (i, &x) in self.points.iter().enumerate() {
            for (j, &y) in self.points.iter().enumerate().skip(i + 1) {
                let s = x ^ y;
                for &z in &self.points[j + 1..] {
                    let p = s ^ z;
                    covered[(p >> 6) as usize] |= 1 << (p & 63);
                }
            }
        }
        (0..size as u32)
            .all(|p| self.contains(p) || covered[(p >> 6) as usize] >> (p & 63) & 1 == 1)
    }
}

// ---------------------------------------------------------------------
// Fast spectrum through the cubed Walsh table
// ---------------------------------------------------------------------

/// Accumulator for the cube pipeline.  64-bit accumulators are used below
/// n = 11 and 128-bit from n = 11 up: the final transform of W^3 stays well
/// inside 2^63 only while 2^{5n} does, and the checked butterflies abort on
/// any overflow either way.
trait CubeScalar: FwhtScalar + PartialEq {
    fn from_bit(b: bool) -> Self;
    fn cube(self) -> Self;
    fn widen(self) -> i128;
}

impl CubeScalar for i64 {
    fn from_bit(b: bool) -> i64 {
        b as i64
    }
    fn cube(self) -> i64 {
        self.checked_mul(self)
            .and_then(|sq| sq.checked_mul(self))
            .expect("cube overflow")
    }
    fn widen(self) -> i128 {
        self as i128
    }
}

impl CubeScalar for i128 {
    fn from_bit(b: bool) -> i128 {
        b as i128
    }
    fn cube(self) -> i128 {
        self * self * self
    }
    fn widen(self) -> i128 {
        self
    }
}

const WIDE_ACCUMULATOR_MIN_N: u32 = 11;

fn cube_transform<T: CubeScalar>(f: &VectorialFunc) -> Vec<T> {
    let n = f.n();
    let mut buf = vec![T::from_bit(false); 1usize << (2 * n)];
    for x in 0..f.len() {
        buf[(x << n) | f.eval(x as u16) as usize] = T::from_bit(true);
    }
    fwht_in_place(&mut buf);
    buf.par_iter_mut().for_each(|w| *w = w.cube());
    fwht_in_place(&mut buf);
    buf
}

/// Walk the transformed cube row by row and hand each off-graph cell's exact
/// multiplicity to the sink.  Non-integrality or a wrong on-graph value can
/// only come from an implementation bug, so both abort hard.
fn consume_cube<T: CubeScalar>(f: &VectorialFunc, buf: &[T], mut sink: impl FnMut(usize, u16)) {
    let n = f.n();
    let size = 1usize << n;
    let denominator: i128 = 6i128 << (2 * n);
    let on_graph_value: i128 = ((3 * size - 2) as i128) << (2 * n);
    let mult_cap = (size / 3) as i128;
    for a in 0..size {
        let fa = f.eval(a as u16) as usize;
        let row = &buf[a << n..(a + 1) << n];
        for (b, cell) in row.iter().enumerate() {
            let value = cell.widen();
            if b == fa {
                assert_eq!(
                    value, on_graph_value,
                    "on-graph cell ({a:#x}, {b:#x}) has unexpected transform value"
                );
            } else {
                assert_eq!(
                    value % denominator,
                    0,
                    "non-integral multiplicity at ({a:#x}, {b:#x})"
                );
                let mult = value / denominator;
                assert!(
                    (0..=mult_cap).contains(&mult),
                    "multiplicity {mult} at ({a:#x}, {b:#x}) out of range"
                );
                sink((a << n) | b, mult as u16);
            }
        }
    }
}

/// Multiplicity frequencies m_k and the minimum e_min over off-graph points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExcludeHistogram {
    e_min: u16,
    counts: BTreeMap<u16, u64>,
}

impl ExcludeHistogram {
    /// Wraps raw frequency counts; panics on an empty map (every graph has
    /// off-graph points).
    pub fn from_counts(counts: BTreeMap<u16, u64>) -> ExcludeHistogram {
        let e_min = *counts.keys().next().expect("some off-graph point exists");
        ExcludeHistogram { e_min, counts }
    }

    pub fn e_min(&self) -> u16 {
        self.e_min
    }

    /// m_k, the number of off-graph points of multiplicity k.
    pub fn count(&self, k: u16) -> u64 {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &BTreeMap<u16, u64> {
        &self.counts
    }

    /// Total number of off-graph points: must be 2^{2n} - 2^n.
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// sum_k k * m_k, the number of triples whose sum falls off the graph.
    pub fn weighted_total(&self) -> u128 {
        self.counts
            .iter()
            .map(|(&k, &m)| k as u128 * m as u128)
            .sum()
    }
}

/// Full 2^{2n} off-graph multiplicity table for the graph of an APN
/// function, with on-graph cells holding [`ON_GRAPH`].
#[derive(Debug, Clone)]
pub struct ExcludeSpectrum {
    n: u32,
    mult: Vec<u16>,
    histogram: ExcludeHistogram,
}

impl ExcludeSpectrum {
    /// Compute the full table.  Refuses non-APN input, for which exclude
    /// multiplicities are not defined (the graph is not Sidon).
    pub fn compute(f: &VectorialFunc) -> Result<ExcludeSpectrum> {
        if let Some((a, b, count)) = f.apn_witness() {
            return Err(Error::NotApn { a, b, count });
        }
        let n = f.n();
        let mut mult = vec![ON_GRAPH; 1usize << (2 * n)];
        let mut counts = BTreeMap::new();
        {
            let mut sink = |idx: usize, m: u16| {
                mult[idx] = m;
                *counts.entry(m).or_insert(0u64) += 1;
            };
            if n >= WIDE_ACCUMULATOR_MIN_N {
                consume_cube(f, &cube_transform::<i128>(f), &mut sink);
            } else {
                consume_cube(f, &cube_transform::<i64>(f), &mut sink);
            }
        }
        Ok(ExcludeSpectrum {
            n,
            mult,
            histogram: ExcludeHistogram::from_counts(counts),
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// mult(a, b), or None when (a, b) lies on the graph.
    #[inline]
    pub fn mult(&self, a: u16, b: u16) -> Option<u16> {
        match self.mult[((a as usize) << self.n) | b as usize] {
            ON_GRAPH => None,
            m => Some(m),
        }
    }

    /// The raw table with [`ON_GRAPH`] sentinels, indexed by (a << n) | b.
    pub fn table(&self) -> &[u16] {
        &self.mult
    }

    pub fn e_min(&self) -> u16 {
        self.histogram.e_min
    }

    pub fn histogram(&self) -> &ExcludeHistogram {
        &self.histogram
    }

    /// The graph is a maximal Sidon set iff no outside point has
    /// multiplicity zero.
    pub fn is_maximal(&self) -> bool {
        self.histogram.e_min > 0
    }

    /// Shifted-derivative invariant: per row beta the multiset of values
    /// |{a : b in image of D_a F + F(a + beta)}| over b, which is 2^n at the
    /// on-graph cell and 3 * mult elsewhere; the union over beta; and the
    /// minimum m_F of the union.
    pub fn pi_invariant(&self) -> PiInvariant {
        let size = 1usize << self.n;
        let on_graph_value = size as u32;
        let mut per_beta = Vec::with_capacity(size);
        let mut union = BTreeSet::new();
        for beta in 0..size {
            let mut multiset: BTreeMap<u32, u64> = BTreeMap::new();
            for b in 0..size {
                let value = match self.mult[(beta << self.n) | b] {
                    ON_GRAPH => on_graph_value,
                    m => 3 * m as u32,
                };
                *multiset.entry(value).or_insert(0) += 1;
            }
            union.extend(multiset.keys().copied());
            per_beta.push(multiset);
        }
        let m_f = *union.first().expect("nonempty");
        PiInvariant {
            per_beta,
            union,
            m_f,
        }
    }

    /// Hamming-distance lower bound e_min + 1 to any other APN function;
    /// identical to ceil(m_F / 3) + 1 since m_F = 3 e_min.
    pub fn distance_lower_bound(&self) -> u32 {
        let e_min = self.histogram.e_min as u32;
        let m_f = 3 * e_min;
        assert!(m_f < 1 << self.n, "m_F below 2^n for every APN function");
        assert_eq!(m_f.div_ceil(3) + 1, e_min + 1);
        e_min + 1
    }
}

/// Histogram and e_min only, consuming the transform buffer in one streaming
/// pass without materializing the 2^{2n} multiplicity table.
pub fn exclude_histogram_only(f: &VectorialFunc) -> Result<ExcludeHistogram> {
    if let Some((a, b, count)) = f.apn_witness() {
        return Err(Error::NotApn { a, b, count });
    }
    let mut counts = BTreeMap::new();
    {
        let mut sink = |_idx: usize, m: u16| {
            *counts.entry(m).or_insert(0u64) += 1;
        };
        if f.n() >= WIDE_ACCUMULATOR_MIN_N {
            consume_cube(f, &cube_transform::<i128>(f), &mut sink);
        } else {
            consume_cube(f, &cube_transform::<i64>(f), &mut sink);
        }
    }
    Ok(ExcludeHistogram::from_counts(counts))
}

/// Per-row shifted-derivative-image sizes (see
/// [`ExcludeSpectrum::pi_invariant`]).
#[derive(Debug, Clone)]
pub struct PiInvariant {
    per_beta: Vec<BTreeMap<u32, u64>>,
    union: BTreeSet<u32>,
    m_f: u32,
}

impl PiInvariant {
    pub fn per_beta(&self) -> &[BTreeMap<u32, u64>] {
        &self.per_beta
    }

    pub fn union(&self) -> &BTreeSet<u32> {
        &self.union
    }

    pub fn m_f(&self) -> u32 {
        self.m_f
    }
}
