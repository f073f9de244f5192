//! Hamming-distance lower bounds from an APN function to every other APN
//! function, one row per applicable family.

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::spectral::{is_ab, plateau_profile, WalshSpectrum};
use crate::theory::kloosterman::kloosterman_table;
use crate::theory::power::monomial_exponent;
use crate::vbf::VectorialFunc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundFamily {
    /// AB functions: (2^{n-1} + 2) / 3.
    Ab,
    /// Plateaued APN, n >= 4 even: 2^{n/2 - 1}.
    PlateauedApn,
    /// 3-to-1 plateaued, n >= 4 even: (2^{n-1} - 2^{n/2} + 2)/3 when
    /// n = 0 mod 4, (2^{n-1} - 2^{n/2-1} + 2)/3 when n = 2 mod 4.
    ThreeToOnePlateaued,
    /// The inverse monomial (exponent 2^n - 2), n odd: the Kloosterman
    /// bound plus one.
    Inverse,
    /// The exact bound e_min + 1 read off a computed exclude spectrum.
    Generic,
}

impl BoundFamily {
    pub fn label(self) -> &'static str {
        match self {
            BoundFamily::Ab => "ab",
            BoundFamily::PlateauedApn => "plateaued-apn",
            BoundFamily::ThreeToOnePlateaued => "3-to-1-plateaued",
            BoundFamily::Inverse => "inverse",
            BoundFamily::Generic => "generic",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundRow {
    pub family: BoundFamily,
    pub formula_value: u64,
    /// e_min + 1 when the exclude spectrum was computed.
    pub exact_value: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct BoundReport {
    pub n: u32,
    pub rows: Vec<BoundRow>,
}

impl BoundReport {
    /// The strongest applicable lower bound.
    pub fn best(&self) -> u64 {
        self.rows
            .iter()
            .map(|r| r.formula_value.max(r.exact_value.unwrap_or(0)))
            .max()
            .unwrap_or(0)
    }
}

/// Classifies F and emits every applicable lower-bound row.  `exact_e_min`
/// is the computed minimum exclude multiplicity when available; each formula
/// value is checked against it (the formulas are lower bounds, so formula
/// <= e_min + 1 always).
pub fn bound_report(
    spec: &FieldSpec,
    f: &VectorialFunc,
    exact_e_min: Option<u16>,
) -> Result<BoundReport> {
    if let Some((a, b, count)) = f.apn_witness() {
        return Err(Error::NotApn { a, b, count });
    }
    let n = f.n();
    let exact = exact_e_min.map(|e| e as u64 + 1);
    let walsh = WalshSpectrum::compute(f);
    let profile = plateau_profile(&walsh);
    let mut rows = Vec::new();
    let mut push = |family: BoundFamily, formula_value: u64| {
        if let Some(e) = exact {
            assert!(
                formula_value <= e,
                "{} bound {formula_value} exceeds exact {e}",
                family.label()
            );
        }
        rows.push(BoundRow {
            family,
            formula_value,
            exact_value: exact,
        });
    };

    if is_ab(&walsh) {
        let value = (1u64 << (n - 1)) + 2;
        assert_eq!(value % 3, 0);
        push(BoundFamily::Ab, value / 3);
    }
    if n >= 4 && n.is_multiple_of(2) && profile.is_plateaued() {
        push(BoundFamily::PlateauedApn, 1 << (n / 2 - 1));
        if f.is_3to1() {
            let value = if n.is_multiple_of(4) {
                (1u64 << (n - 1)) - (1 << (n / 2)) + 2
            } else {
                (1u64 << (n - 1)) - (1 << (n / 2 - 1)) + 2
            };
            assert_eq!(value % 3, 0);
            push(BoundFamily::ThreeToOnePlateaued, value / 3);
        }
    }
    if n % 2 == 1 {
        if let Some(d) = monomial_exponent(spec, f) {
            if d == (1u64 << n) - 2 {
                let kt = kloosterman_table(spec)?;
                let bound = kt.distance_lower_bound();
                assert!(bound >= 1);
                push(BoundFamily::Inverse, bound as u64);
            }
        }
    }
    if let Some(e) = exact {
        push(BoundFamily::Generic, e);
    }
    Ok(BoundReport { n, rows })
}
