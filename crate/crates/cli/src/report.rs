//! Analysis report assembly and rendering (text and versioned JSON).

use std::collections::BTreeMap;

use serde::Serialize;

use apnforge_core::theory::BoundReport;

#[derive(Debug, Serialize)]
pub struct FunctionIdentity {
    pub kind: &'static str,
    pub description: String,
    pub n: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exponent: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sha256: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct Flags {
    pub apn: bool,
    pub ab: bool,
    pub plateaued: bool,
    pub quadratic: bool,
    pub three_to_one: bool,
    pub power: bool,
}

#[derive(Debug, Serialize)]
pub struct SpectrumSummary {
    pub linearity: u32,
    pub nonlinearity: u32,
    pub bent_components: usize,
    pub single_amplitude: bool,
}

#[derive(Debug, Serialize)]
pub struct ExcludeSummary {
    pub e_min: u16,
    pub m_f: u32,
    pub distance_lower_bound: u32,
    /// The union of shifted-derivative-image sizes: {2^n} + {3k : m_k > 0}.
    pub pi: Vec<u32>,
    pub histogram: Vec<(u16, u64)>,
}

#[derive(Debug, Serialize)]
pub struct BoundRowOut {
    pub family: &'static str,
    pub formula_value: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_value: Option<u64>,
}

#[derive(Debug, Serialize)]
pub struct AnalysisReport {
    pub schema: u32,
    pub function: FunctionIdentity,
    pub modulus: String,
    pub degree: u32,
    pub flags: Flags,
    pub spectrum: SpectrumSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exclude: Option<ExcludeSummary>,
    pub bounds: Vec<BoundRowOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<&'static str, u64>>,
}

impl AnalysisReport {
    /// The flag implications that must hold for every function.
    pub fn assert_consistent(&self) {
        if self.flags.ab {
            assert!(
                self.flags.apn && self.flags.plateaued,
                "ab implies apn and plateaued"
            );
        }
        if self.flags.quadratic {
            assert!(self.flags.plateaued, "quadratic implies plateaued");
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let f = &self.function;
        out.push_str(&format!("function   : {} (n={})\n", f.description, f.n));
        out.push_str(&format!("modulus    : {}\n", self.modulus));
        out.push_str(&format!("degree     : {}\n", self.degree));
        let flags = &self.flags;
        out.push_str(&format!(
            "flags      : apn={} ab={} plateaued={} quadratic={} 3-to-1={} power={}\n",
            flags.apn, flags.ab, flags.plateaued, flags.quadratic, flags.three_to_one, flags.power
        ));
        let sp = &self.spectrum;
        out.push_str(&format!(
            "spectrum   : linearity={} nonlinearity={} bent-components={} single-amplitude={}\n",
            sp.linearity, sp.nonlinearity, sp.bent_components, sp.single_amplitude
        ));
        match &self.exclude {
            Some(ex) => {
                let hist: Vec<String> = ex
                    .histogram
                    .iter()
                    .map(|(k, m)| format!("{k}:{m}"))
                    .collect();
                out.push_str(&format!(
                    "exclude    : e_min={} m_F={} distance>={} histogram {{{}}}\n",
                    ex.e_min,
                    ex.m_f,
                    ex.distance_lower_bound,
                    hist.join(", ")
                ));
                let pi: Vec<String> = ex.pi.iter().map(u32::to_string).collect();
                out.push_str(&format!("pi         : {{{}}}\n", pi.join(", ")));
            }
            None => out.push_str("exclude    : (not computed: function is not APN)\n"),
        }
        if self.bounds.is_empty() {
            out.push_str("bounds     : (none)\n");
        } else {
            out.push_str("bounds     :\n");
            for row in &self.bounds {
                match row.exact_value {
                    Some(e) => out.push_str(&format!(
                        "  {:<18} formula {:>8}   exact {:>8}\n",
                        row.family, row.formula_value, e
                    )),
                    None => out.push_str(&format!(
                        "  {:<18} formula {:>8}\n",
                        row.family, row.formula_value
                    )),
                }
            }
        }
        out
    }
}

pub fn bound_rows(report: &BoundReport) -> Vec<BoundRowOut> {
    report
        .rows
        .iter()
        .map(|row| BoundRowOut {
            family: row.family.label(),
            formula_value: row.formula_value,
            exact_value: row.exact_value,
        })
        .collect()
}
