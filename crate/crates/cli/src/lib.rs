//! Command-line front end: argument parsing, command dispatch and report output.

pub mod report;

use std::collections::BTreeSet;
use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use p1red::arith::{primes, PadicContext, Rat};
use p1red::dynamics::{
    bad_prime_set, classify_quadratic, iterates_cgr_regression, pcf_decide_with, PcfOptions, PcfVerdict,
    DEFAULT_MAXDEPTH, DEFAULT_MAXITER, DEFAULT_MAX_FORM_BITS,
};
use p1red::map::RationalMap;
use p1red::monodromy::{monodromy_capped, DEFAULT_DIGITS, DEFAULT_MONODROMY_CAP, MAX_DIGITS};
use p1red::ramification::{branch_form, critical_form};
use p1red::reduction::{
    analyze_with, candidate_bad_primes, theorem1_verdict, AnalysisOptions, SearchBounds,
};
use p1red::{Error, Result};

use report::{
    fmt_complex, BadPrimesEntry, CriterionEntry, Entry, MonodromyEntry, PcfEntry, PrimeEntry,
    QuadraticEntry, Report, SCHEMA_VERSION,
};

#[derive(Parser, Debug)]
#[command(name = "p1red", version, about = "Good reduction, monodromy and PCF analysis of rational maps over Q")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Reduction reports at every interesting prime, plus monodromy and PCF status.
    Analyze(MapArgs),
    /// Per-prime reduction verdicts and good-reduction witnesses.
    Reduction(MapArgs),
    /// Monodromy generators and group order.
    Monodromy(MapArgs),
    /// Monodromy criterion for potential good reduction at each prime.
    Criterion(MapArgs),
    /// Post-critical finiteness.
    Pcf(MapArgs),
    /// Candidate bad primes from the criterion and the finitely critical bad set.
    BadPrimes(MapArgs),
    /// Classifies x^2 + a/b over a grid of numerators and denominators.
    QuadraticScan(ScanArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args, Debug, Clone)]
pub struct MapArgs {
    /// Rational function in x, e.g. "(2*x^2+1)/x".
    pub map: String,
    /// Primes as a comma-separated list of values and ranges, e.g. "2,3,5" or "2..50".
    #[arg(short = 'p', long = "primes")]
    pub primes: Option<String>,
    /// Initial working precision for monodromy, in decimal digits.
    #[arg(long, default_value_t = DEFAULT_DIGITS, value_parser = clap::value_parser!(u32).range(10..=MAX_DIGITS as i64))]
    pub digits: u32,
    /// Largest degree for which monodromy is computed.
    #[arg(long, default_value_t = DEFAULT_MONODROMY_CAP)]
    pub monodromy_cap: usize,
    /// Maximum number of pushforward layers in the PCF decision.
    #[arg(long, default_value_t = DEFAULT_MAXDEPTH)]
    pub maxdepth: usize,
    /// Maximum orbit length.
    #[arg(long, default_value_t = DEFAULT_MAXITER)]
    pub maxiter: usize,
    /// Largest |k| in the scalings x -> p^k x tried by the witness search.
    #[arg(long, default_value_t = 4)]
    pub max_scaling: u32,
    /// Number of translation centers tried by the witness search.
    #[arg(long, default_value_t = 64)]
    pub max_translations: usize,
    /// Extra translation centers, comma-separated rationals.
    #[arg(long, allow_hyphen_values = true)]
    pub translate: Option<String>,
    /// Iterates checked for critically good reduction outside the bad set (bad-primes only).
    #[arg(long, default_value_t = 0)]
    pub iterates: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct ScanArgs {
    /// Inclusive numerator range "a..b".
    #[arg(long, allow_hyphen_values = true, default_value = "-10..10")]
    pub num_range: String,
    /// Inclusive denominator range "a..b" of positive integers.
    #[arg(long, allow_hyphen_values = true, default_value = "1..5")]
    pub den_range: String,
    #[command(flatten)]
    pub common: Common,
}

/// Process exit code, stdout text and stderr text of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

pub fn exit_code(e: &Error) -> i32 {
    if e.is_resource_limit() {
        EXIT_RESOURCE
    } else if matches!(e, Error::Consistency(_)) {
        EXIT_INTERNAL
    } else {
        EXIT_INPUT
    }
}

/// One-line machine-readable error record.
pub fn error_line(e: &Error) -> String {
    serde_json::json!({ "error": e.kind(), "message": e.to_string() }).to_string()
}

fn parse_int(s: &str) -> Result<i64> {
    s.trim()
        .parse::<i64>()
        .map_err(|_| Error::Parse { pos: 0, msg: format!("expected an integer, got {s:?}") })
}

/// Parses "a..b" (inclusive).
pub fn parse_range(s: &str) -> Result<(i64, i64)> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| Error::Parse { pos: 0, msg: format!("expected a range a..b, got {s:?}") })?;
    let (a, b) = (parse_int(a)?, parse_int(b)?);
    if a > b {
        return Err(Error::Parse { pos: 0, msg: format!("empty range {s:?}") });
    }
    Ok((a, b))
}

/// Parses a list like "2,3,7..19": single values must be prime, ranges keep their primes.
pub fn parse_primes(s: &str) -> Result<Vec<u64>> {
    let mut out = BTreeSet::new();
    for item in s.split(',').filter(|t| !t.trim().is_empty()) {
        if item.contains("..") {
            let (a, b) = parse_range(item)?;
            out.extend((a.max(2)..=b).map(|q| q as u64).filter(|&q| primes::is_prime(q)));
        } else {
            let q = parse_int(item)?;
            if q < 2 || !primes::is_prime(q as u64) {
                return Err(Error::NotPrime(q.max(0) as u64));
            }
            out.insert(q as u64);
        }
    }
    if out.is_empty() {
        return Err(Error::Parse { pos: 0, msg: format!("no primes in {s:?}") });
    }
    Ok(out.into_iter().collect())
}

fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let b = parse_int(b)?;
            if b == 0 {
                return Err(Error::ZeroInput("zero denominator"));
            }
            Ok(Rat::new(BigInt::from(parse_int(a)?), BigInt::from(b)))
        }
        None => Ok(Rat::from_integer(BigInt::from(parse_int(s)?))),
    }
}

/// Primes up to 50 together with the prime divisors of the resultant and of the
/// critical and branch discriminants.
pub fn default_primes(map: &RationalMap) -> Result<Vec<u64>> {
    let mut out: BTreeSet<u64> = primes::primes_up_to(50).into_iter().collect();
    out.extend(primes::small_prime_divisors(&map.resultant()));
    if map.degree() >= 2 {
        out.extend(primes::small_prime_divisors(&critical_form(map)?.discriminant()));
        out.extend(primes::small_prime_divisors(&branch_form(map)?.discriminant()));
    }
    Ok(out.into_iter().collect())
}

impl MapArgs {
    fn bounds(&self) -> Result<SearchBounds> {
        let extra = match &self.translate {
            Some(s) => s.split(',').filter(|t| !t.trim().is_empty()).map(parse_rat).collect::<Result<_>>()?,
            None => Vec::new(),
        };
        Ok(SearchBounds {
            max_scaling: self.max_scaling,
            max_translations: self.max_translations,
            extra_translations: extra,
        })
    }

    fn analysis(&self) -> Result<AnalysisOptions> {
        Ok(AnalysisOptions { digits: self.digits, monodromy_cap: self.monodromy_cap, bounds: self.bounds()? })
    }

    fn pcf_options(&self) -> PcfOptions {
        PcfOptions { maxdepth: self.maxdepth, maxiter: self.maxiter, max_form_bits: DEFAULT_MAX_FORM_BITS }
    }

    fn primes(&self, map: &RationalMap) -> Result<Vec<u64>> {
        match &self.primes {
            Some(s) => parse_primes(s),
            None => default_primes(map),
        }
    }
}

fn report(map: &RationalMap, command: &str, results: Vec<Entry>) -> Report {
    Report {
        schema_version: SCHEMA_VERSION,
        map: map.to_string(),
        degree: map.degree(),
        command: command.to_string(),
        results,
    }
}

fn reduction_entries(map: &RationalMap, args: &MapArgs) -> Result<Vec<Entry>> {
    let reports = analyze_with(map, &args.primes(map)?, &args.analysis()?)?;
    Ok(reports.iter().map(|r| Entry::Reduction(PrimeEntry::from(r))).collect())
}

fn monodromy_entry(map: &RationalMap, args: &MapArgs) -> Result<Entry> {
    let m = monodromy_capped(map, args.digits, args.monodromy_cap)?;
    Ok(Entry::Monodromy(MonodromyEntry::from(&m)))
}

fn run_map_command(name: &str, args: &MapArgs) -> Result<Report> {
    let map = RationalMap::parse(&args.map)?;
    let results = match name {
        "reduction" => reduction_entries(&map, args)?,
        "monodromy" => vec![monodromy_entry(&map, args)?],
        "criterion" => {
            let m = monodromy_capped(&map, args.digits, args.monodromy_cap)?;
            args.primes(&map)?
                .into_iter()
                .map(|p| Ok(Entry::Criterion(CriterionEntry::from(&theorem1_verdict(&map, &PadicContext::new(p)?, &m)?))))
                .collect::<Result<_>>()?
        }
        "pcf" => vec![Entry::Pcf(PcfEntry::from(&pcf_decide_with(&map, &args.pcf_options())?))],
        "bad-primes" => vec![Entry::BadPrimes(bad_primes_entry(&map, args)?)],
        "analyze" => {
            let mut out = reduction_entries(&map, args)?;
            if map.degree() <= args.monodromy_cap {
                out.push(monodromy_entry(&map, args)?);
            }
            out.push(Entry::Pcf(PcfEntry::from(&pcf_decide_with(&map, &args.pcf_options())?)));
            out
        }
        other => unreachable!("unknown command {other}"),
    };
    Ok(report(&map, name, results))
}

fn bad_primes_entry(map: &RationalMap, args: &MapArgs) -> Result<BadPrimesEntry> {
    if map.degree() < 2 {
        return Err(Error::DegreeTooSmall(map.degree()));
    }
    let candidates = if map.degree() <= args.monodromy_cap {
        Some(candidate_bad_primes(map, &monodromy_capped(map, args.digits, args.monodromy_cap)?)?)
    } else {
        None
    };
    let verdict = pcf_decide_with(map, &args.pcf_options())?;
    if !matches!(verdict, PcfVerdict::Pcf { .. }) {
        return Ok(BadPrimesEntry::new(candidates, &verdict, None, Vec::new(), None));
    }
    let mut fc = bad_prime_set(map, &verdict)?;
    let (checked, passed) = if args.iterates > 0 {
        let listed = match &args.primes {
            Some(s) => parse_primes(s)?,
            None => primes::primes_up_to(50),
        };
        let outside: Vec<u64> = listed.into_iter().filter(|p| !fc.bad_primes.contains(p)).collect();
        let ok = iterates_cgr_regression(map, &mut fc, args.iterates, &outside)?;
        (outside, Some(ok))
    } else {
        (Vec::new(), None)
    };
    Ok(BadPrimesEntry::new(candidates, &verdict, Some(&fc), checked, passed))
}

fn run_scan(args: &ScanArgs) -> Result<Report> {
    let (a0, a1) = parse_range(&args.num_range)?;
    let (b0, b1) = parse_range(&args.den_range)?;
    if b0 < 1 {
        return Err(Error::Parse { pos: 0, msg: "denominators must be positive".into() });
    }
    let mut values: Vec<Rat> = (a0..=a1)
        .flat_map(|a| (b0..=b1).map(move |b| Rat::new(BigInt::from(a), BigInt::from(b))))
        .collect();
    values.sort();
    values.dedup();
    let results = values
        .iter()
        .map(|c| {
            let v = classify_quadratic(c)?;
            Ok(Entry::Quadratic(QuadraticEntry { c: c.to_string(), verdict: v.label().to_string() }))
        })
        .collect::<Result<_>>()?;
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        map: "x^2 + c".into(),
        degree: 2,
        command: "quadratic-scan".into(),
        results,
    })
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn text_criterion(out: &mut String, c: &CriterionEntry, indent: &str) {
    let _ = writeln!(
        out,
        "{indent}criterion: {} (group order {}, p divides order: {}, crv: {})",
        c.verdict,
        c.group_order,
        yes(c.divides_group_order),
        yes(c.crv)
    );
    if c.readings_disagree {
        let _ = writeln!(out, "{indent}  alternative reading gives {}", c.alternative_verdict);
    }
    for pr in &c.pairs {
        let _ = writeln!(
            out,
            "{indent}  {} vs {}: differences {:?}{}",
            pr.lambda,
            pr.mu,
            pr.differences,
            if pr.divisible { ", some divisible by p" } else { "" }
        );
    }
}

fn text_pcf(out: &mut String, e: &PcfEntry) {
    match e.verdict.as_str() {
        "pcf" => {
            let _ = writeln!(
                out,
                "PCF: postcritical form {} ({} points), stable at depth {}",
                e.postcritical_form.as_deref().unwrap_or(""),
                e.postcritical_size.unwrap_or(0),
                e.depth.unwrap_or(0)
            );
            if !e.rational_postcritical_points.is_empty() {
                let _ = writeln!(out, "  rational postcritical points: {}", e.rational_postcritical_points.join(", "));
            }
        }
        "not-pcf" => {
            let w = e.witness.as_ref().expect("witness");
            let _ = writeln!(
                out,
                "not PCF: orbit of {} escapes at step {}: {}",
                w.start,
                w.index.unwrap_or(0),
                w.points.join(", ")
            );
        }
        _ => {
            let _ = writeln!(out, "PCF status unknown after depth {}", e.depth.unwrap_or(0));
        }
    }
}

/// Human-readable rendering of a report.
pub fn render_text(r: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "map {} (degree {})", r.map, r.degree);
    for e in &r.results {
        match e {
            Entry::Reduction(p) => {
                let _ = writeln!(
                    out,
                    "p = {}: sgr {}, separable {}, crv {}, cgr {}, potential good reduction: {}",
                    p.prime,
                    yes(p.sgr),
                    yes(p.separable),
                    yes(p.crv),
                    yes(p.cgr),
                    p.potential_good_reduction
                );
                if let Some(w) = &p.witness {
                    let _ = writeln!(out, "  witness A = [[{}, {}], [{}, {}]], model {}", w.mobius[0], w.mobius[1], w.mobius[2], w.mobius[3], w.model);
                }
                if let Some(c) = &p.criterion {
                    text_criterion(&mut out, c, "  ");
                }
            }
            Entry::Criterion(c) => {
                let _ = writeln!(out, "p = {}:", c.prime);
                text_criterion(&mut out, c, "  ");
            }
            Entry::Monodromy(m) => {
                let _ = writeln!(
                    out,
                    "monodromy group of order {} (base point {}, {} digits)",
                    m.order,
                    fmt_complex(m.base_point),
                    m.digits
                );
                for g in &m.generators {
                    let label = g.exact.clone().unwrap_or_else(|| g.branch_value.clone());
                    let _ = writeln!(out, "  {label}: {} cycle type {:?}", g.permutation, g.cycle_type);
                }
                let _ = writeln!(
                    out,
                    "  transitive {}, product identity {}, total ramification {}",
                    yes(m.transitive),
                    yes(m.product_is_identity),
                    m.total_ramification
                );
            }
            Entry::Pcf(e) => text_pcf(&mut out, e),
            Entry::BadPrimes(b) => {
                match &b.criterion_candidates {
                    Some(c) => {
                        let _ = writeln!(out, "criterion candidate bad primes: {c:?}");
                    }
                    None => {
                        let _ = writeln!(out, "criterion candidate bad primes: not computed (degree above monodromy cap)");
                    }
                }
                text_pcf(&mut out, &b.pcf);
                if let Some(s) = &b.finitely_critical {
                    let _ = writeln!(out, "finitely critical bad set: {s:?}");
                }
                if let Some(ok) = b.regression_passed {
                    let _ = writeln!(
                        out,
                        "iterates 1..={} critically good at {:?}: {}",
                        b.checked_iterates,
                        b.regression_primes,
                        yes(ok)
                    );
                }
            }
            Entry::Quadratic(q) => {
                let _ = writeln!(out, "c = {}: {}", q.c, q.verdict);
            }
        }
    }
    out
}

/// Runs one parsed invocation.
pub fn run(cli: &Cli) -> Outcome {
    let (result, format) = match &cli.command {
        Command::Analyze(a) => (run_map_command("analyze", a), a.common.format),
        Command::Reduction(a) => (run_map_command("reduction", a), a.common.format),
        Command::Monodromy(a) => (run_map_command("monodromy", a), a.common.format),
        Command::Criterion(a) => (run_map_command("criterion", a), a.common.format),
        Command::Pcf(a) => (run_map_command("pcf", a), a.common.format),
        Command::BadPrimes(a) => (run_map_command("bad-primes", a), a.common.format),
        Command::QuadraticScan(a) => (run_scan(a), a.common.format),
    };
    match result {
        Ok(r) => {
            let stdout = match format {
                Format::Json => serde_json::to_string_pretty(&r).expect("report serializes") + "\n",
                Format::Text => render_text(&r),
            };
            Outcome { code: EXIT_OK, stdout, stderr: String::new() }
        }
        Err(e) => Outcome { code: exit_code(&e), stdout: String::new(), stderr: error_line(&e) + "\n" },
    }
}

/// Parses `args` (program name first) and runs; clap usage errors exit with code 2.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            }
        }
    }
}
