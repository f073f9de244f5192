//! apnforge: batch analysis of vectorial Boolean functions over F_2^n.

mod report;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use sha2::{Digest, Sha256};

use apnforge_core::catalog::{self, Family, FamilySpec};
use apnforge_core::exclude::{exclude_histogram_only, ExcludeHistogram, ExcludeSpectrum, SidonSet};
use apnforge_core::field::FieldSpec;
use apnforge_core::spectral::{is_ab, plateau_profile, WalshSpectrum};
use apnforge_core::theory::{
    bound_report, kloosterman_table, monomial_exponent, ortho_derivative,
    plateaued_nonequivalence_test, power_exclude_histogram, PlateauEquivalenceVerdict,
};
use apnforge_core::vbf::VectorialFunc;

use report::{
    bound_rows, AnalysisReport, ExcludeSummary, Flags, FunctionIdentity, SpectrumSummary,
};

const DEFAULT_MAX_N: u32 = 16;
const ORACLE_MAX_N: u32 = 8;

#[derive(Parser)]
#[command(
    name = "apnforge",
    version,
    about = "Spectral and Sidon-set analysis of S-boxes F: F_2^n -> F_2^n"
)]
struct Cli {
    /// Worker threads (defaults to hardware parallelism)
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Force single-threaded execution
    #[arg(long, global = true, conflicts_with = "workers")]
    serial: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classification flags, spectrum summary, exclude data, and bounds
    Analyze {
        #[command(flatten)]
        func: FuncArgs,
        /// Emit the report as JSON (schema 1)
        #[arg(long)]
        json: bool,
        /// Stream histogram/e_min without materializing the full table
        #[arg(long)]
        histogram_only: bool,
        /// Include stage timings in the JSON report
        #[arg(long)]
        timings: bool,
    },
    /// Exclude-multiplicity histogram (CSV `multiplicity,count`)
    Mults {
        #[command(flatten)]
        func: FuncArgs,
        /// Dump every off-graph point as `a,b,mult` instead
        #[arg(long)]
        full: bool,
        /// Force the brute-force pair-enumeration oracle (n <= 8)
        #[arg(long)]
        oracle: bool,
        /// Stream histogram/e_min without materializing the full table
        #[arg(long, conflicts_with = "full", conflicts_with = "oracle")]
        histogram_only: bool,
    },
    /// Distance lower bounds to other APN functions
    Bound {
        #[command(flatten)]
        func: FuncArgs,
        #[arg(long)]
        json: bool,
    },
    /// Walsh spectrum operations
    Spectrum {
        #[command(subcommand)]
        action: SpectrumCmd,
    },
    /// Kloosterman sums K_n(a) (CSV `a,k`), n odd
    Kloosterman {
        #[arg(long)]
        n: u32,
        /// Modulus override as a hex bitmask (e.g. 0x43)
        #[arg(long)]
        modulus: Option<String>,
    },
    /// Check the transform-based exclude spectrum against the oracle
    CompareOracle {
        #[command(flatten)]
        func: FuncArgs,
        /// Sample count for n = 7..8 (n <= 6 is exhaustive)
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Open-problem scans over the built-in catalog
    Experiment {
        /// One of: odd-mults, ortho-nl, kaleyski
        name: String,
        /// Largest dimension to scan
        #[arg(long, default_value_t = 8)]
        max_n: u32,
    },
}

#[derive(Subcommand)]
enum SpectrumCmd {
    /// Nonzero Walsh values as CSV `u,v,w`
    Dump {
        #[command(flatten)]
        func: FuncArgs,
    },
}

#[derive(Args)]
struct FuncArgs {
    /// gold | kasami | welch | niho | inverse | dobbertin | blep
    #[arg(long)]
    family: Option<String>,
    /// Dimension n
    #[arg(long)]
    n: Option<u32>,
    /// Family parameter k (gold, kasami)
    #[arg(long)]
    k: Option<u32>,
    /// Family parameter t (welch/niho/inverse: n = 2t+1; dobbertin: n = 5t)
    #[arg(long)]
    t: Option<u32>,
    /// Raw monomial exponent d for x^d
    #[arg(long, alias = "d")]
    monomial_d: Option<u64>,
    /// Truth-table or polynomial file
    #[arg(long)]
    input: Option<PathBuf>,
    /// Modulus override as a hex bitmask (e.g. 0x43 for x^6+x+1)
    #[arg(long)]
    modulus: Option<String>,
}

fn max_n_guard() -> u32 {
    std::env::var("APNFORGE_MAX_N")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_N)
}

fn parse_modulus(text: &str) -> Result<u32> {
    let trimmed = text
        .trim()
        .trim_start_matches("0x")
        .trim_start_matches("0X");
    u32::from_str_radix(trimmed, 16).with_context(|| format!("bad modulus {text:?}"))
}

fn make_field(n: u32, modulus: &Option<String>) -> Result<Arc<FieldSpec>> {
    let field = match modulus {
        Some(m) => FieldSpec::with_modulus(n, parse_modulus(m)?)?,
        None => FieldSpec::new(n)?,
    };
    Ok(Arc::new(field))
}

struct Resolved {
    field: Arc<FieldSpec>,
    func: VectorialFunc,
    identity: FunctionIdentity,
}

fn resolve(args: &FuncArgs) -> Result<Resolved> {
    let guard = max_n_guard();
    if let Some(path) = &args.input {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let header_n: u32 = text
            .lines()
            .next()
            .and_then(|line| line.split(&['=', ';'][..]).nth(1))
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| anyhow!("missing n=<int> header in {}", path.display()))?;
        if header_n > guard {
            bail!("n={header_n} exceeds the size guard {guard} (set APNFORGE_MAX_N to override)");
        }
        let field = make_field(header_n, &args.modulus)?;
        let func = catalog::parse_with_field(&text, Some(Arc::clone(&field)))?;
        let digest = Sha256::digest(text.as_bytes());
        let identity = FunctionIdentity {
            kind: "file",
            description: path.display().to_string(),
            n: func.n(),
            exponent: None,
            sha256: Some(format!("{digest:x}")),
        };
        return Ok(Resolved {
            field,
            func,
            identity,
        });
    }

    let family = match (&args.family, args.monomial_d) {
        (Some(name), None) => match name.as_str() {
            "gold" => Family::Gold {
                k: args.k.ok_or_else(|| anyhow!("gold requires --k"))?,
            },
            "kasami" => Family::Kasami {
                k: args.k.ok_or_else(|| anyhow!("kasami requires --k"))?,
            },
            "welch" => Family::Welch,
            "niho" => Family::Niho,
            "inverse" => Family::Inverse,
            "dobbertin" => Family::Dobbertin,
            "blep" => Family::Blep,
            other => bail!("unknown family {other:?}"),
        },
        (None, Some(d)) => Family::Monomial { d },
        (Some(_), Some(_)) => bail!("--family and --monomial-d are mutually exclusive"),
        (None, None) => bail!("select a function with --family, --monomial-d, or --input"),
    };

    let n = match (args.n, args.t, family) {
        (Some(n), None, _) => n,
        (None, Some(t), Family::Dobbertin) => 5 * t,
        (None, Some(t), Family::Welch | Family::Niho | Family::Inverse) => 2 * t + 1,
        (None, Some(_), _) => bail!("--t applies to welch, niho, inverse, dobbertin"),
        (Some(n), Some(t), f) => {
            let derived = if matches!(f, Family::Dobbertin) {
                5 * t
            } else {
                2 * t + 1
            };
            if n != derived {
                bail!("--n {n} conflicts with --t {t}");
            }
            n
        }
        (None, None, Family::Blep) => 6,
        (None, None, _) => bail!("missing --n"),
    };
    if n > guard {
        bail!("n={n} exceeds the size guard {guard} (set APNFORGE_MAX_N to override)");
    }
    let field = make_field(n, &args.modulus)?;
    let spec = FamilySpec {
        family,
        field: Arc::clone(&field),
    };
    let func = catalog::build(&spec)?;
    let exponent = match family {
        Family::Blep => None,
        f => Some(catalog::family_exponent(f, n)?),
    };
    let identity = FunctionIdentity {
        kind: "family",
        description: family.to_string(),
        n,
        exponent,
        sha256: None,
    };
    Ok(Resolved {
        field,
        func,
        identity,
    })
}

/// Histogram through the cheapest sound path: the two-row monomial shortcut
/// for monomials at n >= 14 (the dense table would need >= 4 GiB), else the
/// dense or streaming transform.
fn histogram_for(
    field: &Arc<FieldSpec>,
    func: &VectorialFunc,
    histogram_only: bool,
) -> Result<(ExcludeHistogram, Option<ExcludeSpectrum>)> {
    let n = func.n();
    if n >= 14 {
        if monomial_exponent(field, func).is_some() {
            eprintln!("# n={n}: using the two-row monomial path");
            return Ok((power_exclude_histogram(func)?, None));
        }
        eprintln!(
            "# n={n}: streaming histogram (the transform buffer alone is 2^{} entries)",
            2 * n
        );
        return Ok((exclude_histogram_only(func)?, None));
    }
    if histogram_only {
        Ok((exclude_histogram_only(func)?, None))
    } else {
        let sp = ExcludeSpectrum::compute(func)?;
        Ok((sp.histogram().clone(), Some(sp)))
    }
}

fn cmd_analyze(
    func_args: &FuncArgs,
    json: bool,
    histogram_only: bool,
    timings: bool,
) -> Result<()> {
    let total_start = Instant::now();
    let resolved = resolve(func_args)?;
    let field = &resolved.field;
    let f = &resolved.func;
    let mut stage_ms: BTreeMap<&'static str, u64> = BTreeMap::new();

    let start = Instant::now();
    let apn = f.is_apn();
    let degree = f.algebraic_degree();
    let quadratic = f.is_quadratic();
    let three_to_one = f.is_3to1();
    let power = monomial_exponent(field, f).is_some();
    stage_ms.insert("classify", start.elapsed().as_millis() as u64);

    let start = Instant::now();
    let walsh = WalshSpectrum::compute(f);
    let profile = plateau_profile(&walsh);
    let ab = is_ab(&walsh);
    stage_ms.insert("walsh", start.elapsed().as_millis() as u64);

    let start = Instant::now();
    let exclude = if apn {
        let (hist, _) = histogram_for(field, f, histogram_only)?;
        let e_min = hist.e_min();
        let mut pi: Vec<u32> = hist.counts().keys().map(|&k| 3 * k as u32).collect();
        pi.push(1 << f.n());
        pi.sort_unstable();
        pi.dedup();
        Some(ExcludeSummary {
            e_min,
            m_f: 3 * e_min as u32,
            distance_lower_bound: e_min as u32 + 1,
            pi,
            histogram: hist.counts().iter().map(|(&k, &m)| (k, m)).collect(),
        })
    } else {
        eprintln!("# function is not APN; exclude multiplicities are undefined");
        None
    };
    stage_ms.insert("exclude", start.elapsed().as_millis() as u64);

    let start = Instant::now();
    let bounds = if apn {
        let e_min = exclude.as_ref().map(|ex| ex.e_min);
        bound_rows(&bound_report(field, f, e_min)?)
    } else {
        Vec::new()
    };
    stage_ms.insert("bounds", start.elapsed().as_millis() as u64);
    stage_ms.insert("total", total_start.elapsed().as_millis() as u64);

    let report = AnalysisReport {
        schema: 1,
        function: resolved.identity,
        modulus: format!("{:#x}", field.modulus()),
        degree,
        flags: Flags {
            apn,
            ab,
            plateaued: profile.is_plateaued(),
            quadratic,
            three_to_one,
            power,
        },
        spectrum: SpectrumSummary {
            linearity: walsh.linearity(),
            nonlinearity: walsh.nonlinearity(),
            bent_components: profile.bent_components().len(),
            single_amplitude: profile.single_amplitude(),
        },
        exclude,
        bounds,
        timings_ms: timings.then(|| stage_ms.clone()),
    };
    report.assert_consistent();
    for (stage, ms) in &stage_ms {
        eprintln!("# {stage}: {ms} ms");
    }
    if json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print!("{}", report.render_text());
    }
    Ok(())
}

fn cmd_mults(func_args: &FuncArgs, full: bool, oracle: bool, histogram_only: bool) -> Result<()> {
    let resolved = resolve(func_args)?;
    let f = &resolved.func;
    let n = f.n();
    if oracle {
        if n > ORACLE_MAX_N {
            bail!("the oracle path is limited to n <= {ORACLE_MAX_N}");
        }
        if !f.is_apn() {
            bail!("exclude multiplicities are undefined: the function is not APN");
        }
        let graph = SidonSet::graph_of(f);
        let mut counts: BTreeMap<u16, u64> = BTreeMap::new();
        let mut dump = Vec::new();
        for a in 0..f.len() {
            for b in 0..f.len() {
                let (a, b) = (a as u16, b as u16);
                let p = ((a as u32) << n) | b as u32;
                if graph.contains(p) {
                    continue;
                }
                let m = graph.exclude_mult(p)? as u16;
                *counts.entry(m).or_insert(0) += 1;
                if full {
                    dump.push((a, b, m));
                }
            }
        }
        emit_mults(&counts, full.then_some(&dump));
        print_verdict_if_interesting(n, &ExcludeHistogram::from_counts(counts));
        return Ok(());
    }
    if full {
        let sp = ExcludeSpectrum::compute(f)?;
        let mut dump = Vec::new();
        for a in 0..f.len() {
            for b in 0..f.len() {
                let (a, b) = (a as u16, b as u16);
                if let Some(m) = sp.mult(a, b) {
                    dump.push((a, b, m));
                }
            }
        }
        emit_mults(sp.histogram().counts(), Some(&dump));
        print_verdict_if_interesting(n, sp.histogram());
        return Ok(());
    }
    let (hist, _) = histogram_for(&resolved.field, f, histogram_only)?;
    emit_mults(hist.counts(), None);
    print_verdict_if_interesting(n, &hist);
    Ok(())
}

fn emit_mults(counts: &BTreeMap<u16, u64>, dump: Option<&Vec<(u16, u16, u16)>>) {
    match dump {
        Some(points) => {
            println!("a,b,mult");
            for (a, b, m) in points {
                println!("{a},{b},{m}");
            }
        }
        None => {
            println!("multiplicity,count");
            for (k, m) in counts {
                println!("{k},{m}");
            }
        }
    }
}

fn cmd_bound(func_args: &FuncArgs, json: bool) -> Result<()> {
    let resolved = resolve(func_args)?;
    let (hist, _) = histogram_for(&resolved.field, &resolved.func, true)?;
    let report = bound_report(&resolved.field, &resolved.func, Some(hist.e_min()))?;
    let rows = bound_rows(&report);
    if json {
        println!("{}", serde_json::to_string_pretty(&rows)?);
    } else {
        println!("{:<18} {:>10} {:>10}", "family", "formula", "exact");
        for row in &rows {
            match row.exact_value {
                Some(e) => println!("{:<18} {:>10} {:>10}", row.family, row.formula_value, e),
                None => println!("{:<18} {:>10} {:>10}", row.family, row.formula_value, "-"),
            }
        }
    }
    Ok(())
}

fn cmd_spectrum_dump(func_args: &FuncArgs) -> Result<()> {
    let resolved = resolve(func_args)?;
    let f = &resolved.func;
    if f.n() > 15 {
        bail!("spectrum dump is limited to n <= 15");
    }
    let sp = WalshSpectrum::compute(f);
    let n = f.n();
    println!("u,v,w");
    for u in 0..f.len() {
        for v in 0..f.len() {
            let (u, v) = (u as u16, v as u16);
            let w = sp.values()[apnforge_core::spectral::pair_index(n, u, v)];
            if w != 0 {
                println!("{u},{v},{w}");
            }
        }
    }
    Ok(())
}

fn cmd_kloosterman(n: u32, modulus: &Option<String>) -> Result<()> {
    if n > max_n_guard() {
        bail!("n={n} exceeds the size guard");
    }
    let field = make_field(n, modulus)?;
    let table = kloosterman_table(&field)?;
    println!("a,k");
    for (a, k) in table.values().iter().enumerate() {
        println!("{a},{k}");
    }
    eprintln!(
        "# max |K_n(a) - 1| = {}, e_min bound {}, distance bound {}",
        table.max_dev(),
        table.emin_lower_bound(),
        table.distance_lower_bound()
    );
    Ok(())
}

fn cmd_compare_oracle(func_args: &FuncArgs, samples: usize) -> Result<()> {
    let resolved = resolve(func_args)?;
    let f = &resolved.func;
    let n = f.n();
    if n > ORACLE_MAX_N {
        bail!("compare-oracle is limited to n <= {ORACLE_MAX_N}");
    }
    let sp = ExcludeSpectrum::compute(f)?;
    let graph = SidonSet::graph_of(f);
    let mut checked = 0u64;
    let mut failures = 0u64;
    // returns whether (a, b) was off-graph (and thus counted)
    let check = |a: u16, b: u16, failures: &mut u64| -> bool {
        let p = ((a as u32) << n) | b as u32;
        match sp.mult(a, b) {
            Some(m) => {
                if graph.exclude_mult(p).unwrap() != m as u64 {
                    *failures += 1;
                    println!("MISMATCH at ({a:#x}, {b:#x})");
                }
                true
            }
            None => false,
        }
    };
    if n <= 6 {
        for a in 0..f.len() {
            for b in 0..f.len() {
                if check(a as u16, b as u16, &mut failures) {
                    checked += 1;
                }
            }
        }
    } else {
        let mut state = 0x853c49e6748fea9bu64;
        let mask = (f.len() - 1) as u64;
        while checked < samples as u64 {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            let a = (state >> 8 & mask) as u16;
            let b = (state >> 32 & mask) as u16;
            if check(a, b, &mut failures) {
                checked += 1;
            }
        }
    }
    if failures == 0 {
        println!("PASS: {checked} off-graph points agree with the oracle");
        Ok(())
    } else {
        println!("FAIL: {failures} of {checked} points disagree");
        std::process::exit(1);
    }
}

fn catalog_instances(n: u32) -> Result<Vec<(String, VectorialFunc)>> {
    let field = Arc::new(FieldSpec::new(n)?);
    Ok(catalog::known_instances(&field)
        .iter()
        .map(|s| {
            (
                format!("{} n={n}", s.family),
                catalog::build(s).expect("catalog instance"),
            )
        })
        .collect())
}

fn cmd_experiment(name: &str, max_n: u32) -> Result<()> {
    if max_n > max_n_guard() {
        bail!("max_n={max_n} exceeds the size guard");
    }
    match name {
        // do all plateaued APN functions have odd exclude multiplicities?
        "odd-mults" => {
            let mut counterexamples = 0u64;
            for n in (4..=max_n).filter(|n| n % 2 == 0) {
                for (name, f) in catalog_instances(n)? {
                    if !f.is_apn() || !plateau_profile(&WalshSpectrum::compute(&f)).is_plateaued() {
                        continue;
                    }
                    let hist = exclude_histogram_only(&f)?;
                    let evens: Vec<u16> = hist
                        .counts()
                        .keys()
                        .copied()
                        .filter(|k| k % 2 == 0)
                        .collect();
                    if evens.is_empty() {
                        println!("{name}: all multiplicities odd");
                    } else {
                        counterexamples += 1;
                        println!("{name}: COUNTEREXAMPLE, even multiplicities {evens:?}");
                    }
                }
            }
            println!("summary: {counterexamples} counterexamples found");
        }
        // how small can the nonlinearity of an ortho-derivative get?
        "ortho-nl" => {
            let mut minimum: Option<(u32, String)> = None;
            for n in 3..=max_n {
                for (name, f) in catalog_instances(n)? {
                    if !f.is_quadratic() || !f.is_apn() {
                        continue;
                    }
                    let pi = ortho_derivative(&f)?;
                    let nl = WalshSpectrum::compute(&pi.as_vbf()).nonlinearity();
                    println!("{name}: NL(ortho-derivative) = {nl}");
                    if minimum.as_ref().is_none_or(|(m, _)| nl < *m) {
                        minimum = Some((nl, name));
                    }
                }
            }
            match minimum {
                Some((nl, name)) => println!("summary: minimum NL = {nl} at {name}"),
                None => println!("summary: no quadratic APN instances scanned"),
            }
        }
        // are mult(0,1) and mult(1,0) always the cube's value?
        "kaleyski" => {
            for n in 3..=max_n {
                let field = Arc::new(FieldSpec::new(n)?);
                let cube = ExcludeSpectrum::compute(&VectorialFunc::from_monomial(&field, 3))?;
                let reference = cube.mult(0, 1).expect("off-graph");
                for (name, f) in catalog_instances(n)? {
                    if !f.is_apn() || monomial_exponent(&field, &f).is_none() {
                        continue;
                    }
                    let sp = ExcludeSpectrum::compute(&f)?;
                    let at01 = sp.mult(0, 1).expect("off-graph");
                    let at10 = sp.mult(1, 0).expect("off-graph");
                    let verdict = if at01 == reference && at10 == reference {
                        "matches"
                    } else {
                        "DIFFERS"
                    };
                    println!(
                        "{name}: mult(0,1)={at01} mult(1,0)={at10} cube={reference} -> {verdict}"
                    );
                }
            }
        }
        other => bail!("unknown experiment {other:?} (odd-mults, ortho-nl, kaleyski)"),
    }
    Ok(())
}

/// Frequency-divisibility note on stderr, so CSV consumers see it without
/// it polluting the data stream.
fn print_verdict_if_interesting(n: u32, hist: &ExcludeHistogram) {
    if let PlateauEquivalenceVerdict::NotPlateauedEquivalent {
        multiplicity,
        frequency,
    } = plateaued_nonequivalence_test(n, hist)
    {
        eprintln!(
            "# not CCZ-equivalent to any plateaued function: 2^{n} does not divide m_{multiplicity} = {frequency}"
        );
    }
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let threads = if cli.serial {
        1
    } else {
        cli.workers.unwrap_or(0)
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .context("thread pool")?;
    match &cli.command {
        Command::Analyze {
            func,
            json,
            histogram_only,
            timings,
        } => cmd_analyze(func, *json, *histogram_only, *timings),
        Command::Mults {
            func,
            full,
            oracle,
            histogram_only,
        } => cmd_mults(func, *full, *oracle, *histogram_only),
        Command::Bound { func, json } => cmd_bound(func, *json),
        Command::Spectrum {
            action: SpectrumCmd::Dump { func },
        } => cmd_spectrum_dump(func),
        Command::Kloosterman { n, modulus } => cmd_kloosterman(*n, modulus),
        Command::CompareOracle { func, samples } => cmd_compare_oracle(func, *samples),
        Command::Experiment { name, max_n } => cmd_experiment(name, *max_n),
    }
}
