use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use unimodal::families::{
    census, counterexample_identity_holds, counterexample_t, fekete, fekete_count, is_prime, random_selfreciprocal,
    EnumSummary, Family,
};
use unimodal::machinery::{theorem_bound_report, BoundRow};
use unimodal::oracle::{oracle_count, OracleConfig};
use unimodal::suites::{suite_by_name, suites, Status, SuiteConfig, SuiteOutcome};
use unimodal::zerocount::{isolator_by_name, unimodular_count, zero_report, RootIsolator};
use unimodal::{Error, IntPoly};

use crate::config::{ConfigError, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub msg: String,
}

impl CliError {
    pub fn parse(msg: impl Into<String>) -> Self {
        Self { code: EXIT_PARSE, msg: msg.into() }
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Self { code: EXIT_PRECONDITION, msg: msg.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.msg)
    }
}

impl std::error::Error for CliError {}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::parse(e.0)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) => EXIT_PARSE,
            Error::ZeroPolynomial
            | Error::NotSelfReciprocal
            | Error::OddDegree(_)
            | Error::NotOddPrime(_)
            | Error::BudgetExceeded { .. }
            | Error::Invalid(_) => EXIT_PRECONDITION,
            Error::EndpointRoot | Error::Singular | Error::Unresolved(_) => EXIT_VERIFY_FAILED,
        };
        CliError { code, msg: e.to_string() }
    }
}

fn csv_err(e: csv::Error) -> CliError {
    CliError { code: EXIT_VERIFY_FAILED, msg: format!("csv: {e}") }
}

/// What a command produced. `primary` goes to the configured output file
/// or, failing that, to stdout; `summary` is always printed when present.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub primary: String,
    pub summary: Option<String>,
    pub plot: Option<String>,
    pub warnings: Vec<String>,
    pub code: i32,
}

/// Which symmetry `nz` demands of its input.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Check {
    SelfReciprocal,
    Skew,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    Nz { poly: IntPoly, check: Check, lift: bool, bits: Option<u32> },
    Census,
    Fekete { oracle: bool },
    Verify { suite: String },
    Scatter { random: bool },
    Counterexample,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Nz { .. } => "nz",
            Command::Census => "census",
            Command::Fekete { .. } => "fekete",
            Command::Verify { .. } => "verify",
            Command::Scatter { .. } => "scatter",
            Command::Counterexample => "counterexample",
        }
    }
}

/// Parses `1,-2,3` (constant term first) into a polynomial.
pub fn parse_coeff_list(s: &str) -> Result<IntPoly, CliError> {
    let coeffs: Result<Vec<BigInt>, _> = s.split(',').map(|t| t.trim().parse::<BigInt>()).collect();
    match coeffs {
        Ok(c) if !c.is_empty() => Ok(IntPoly::new(c)),
        _ => Err(CliError::parse(format!("cannot parse coefficient list {s:?}"))),
    }
}

/// Reads a JSON array of coefficients, or an object with a `coeffs` array.
pub fn parse_poly_json(text: &str) -> Result<IntPoly, CliError> {
    #[derive(serde::Deserialize)]
    #[serde(untagged)]
    enum Doc {
        Bare(IntPoly),
        Wrapped { coeffs: IntPoly },
    }
    match serde_json::from_str::<Doc>(text) {
        Ok(Doc::Bare(p)) | Ok(Doc::Wrapped { coeffs: p }) => Ok(p),
        Err(e) => Err(CliError::parse(format!("bad polynomial JSON: {e}"))),
    }
}

pub fn read_poly_file(path: &Path) -> Result<IntPoly, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
    parse_poly_json(&text)
}

/// Runs `cmd` on a worker pool sized by `cfg.workers`.
pub fn run(cmd: &Command, cfg: &RunConfig) -> Result<Report, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| CliError::precondition(format!("worker pool: {e}")))?;
    pool.install(|| dispatch(cmd, cfg))
}

fn dispatch(cmd: &Command, cfg: &RunConfig) -> Result<Report, CliError> {
    let iso = isolator_by_name(&cfg.isolator)?;
    match cmd {
        Command::Nz { poly, check, lift, bits } => cmd_nz(poly, *check, *lift, *bits, iso.as_ref()),
        Command::Census => cmd_census(cfg, iso.as_ref()),
        Command::Fekete { oracle } => cmd_fekete(cfg, *oracle, iso.as_ref()),
        Command::Verify { suite } => cmd_verify(cfg, suite),
        Command::Scatter { random } => cmd_scatter(cfg, *random),
        Command::Counterexample => cmd_counterexample(cfg),
    }
}

fn cmd_nz(p: &IntPoly, check: Check, lift: bool, bits: Option<u32>, iso: &dyn RootIsolator) -> Result<Report, CliError> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial.into());
    }
    let (_, core) = p.strip_low_zeros();
    let shape_ok = match check {
        Check::SelfReciprocal => core.is_self_reciprocal(),
        Check::Skew => core.is_skew_reciprocal(),
    };
    if !shape_ok && !lift {
        let want = if check == Check::Skew { "skew-reciprocal" } else { "self-reciprocal" };
        return Err(CliError::precondition(format!("{p} is not {want}; pass --lift to count it anyway")));
    }
    let c = unimodular_count(p, iso, bits)?;
    let doc = json!({
        "polynomial": p.to_string(),
        "coeffs": p,
        "degree": p.degree(),
        "self_reciprocal": core.is_self_reciprocal(),
        "skew_reciprocal": core.is_skew_reciprocal(),
        "route": c.route,
        "nz": c.nz,
        "nz_star": c.nz_star,
        "report": c.report,
    });
    Ok(Report { primary: format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()), ..Report::default() })
}

#[derive(Serialize)]
struct CensusRow {
    family: String,
    n: u64,
    count: String,
    min_nz: Option<usize>,
    max_nz: Option<usize>,
    avg_nz: String,
    histogram: String,
    argmin: String,
    status: String,
}

impl CensusRow {
    fn from_summary(s: &EnumSummary) -> Self {
        let hist = format!(
            "{{{}}}",
            s.histogram.iter().map(|(k, v)| format!("\"{k}\":{v}")).collect::<Vec<_>>().join(",")
        );
        CensusRow {
            family: s.family.name().into(),
            n: s.n as u64,
            count: s.count.to_string(),
            min_nz: s.min_nz,
            max_nz: s.max_nz,
            avg_nz: s.avg_nz.as_ref().map(|q| format!("{}/{}", q.numer(), q.denom())).unwrap_or_default(),
            histogram: hist,
            argmin: s
                .argmin
                .as_ref()
                .map(|p| p.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "))
                .unwrap_or_default(),
            status: "ok".into(),
        }
    }
}

fn write_csv<T: Serialize>(rows: &[T]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| csv_err(e.into_error().into()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn cmd_census(cfg: &RunConfig, iso: &dyn RootIsolator) -> Result<Report, CliError> {
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    for n in cfg.n.iter() {
        match census(cfg.family, n as usize, cfg.enum_budget, iso) {
            Ok(s) => rows.push(CensusRow::from_summary(&s)),
            Err(e @ Error::BudgetExceeded { .. }) => {
                warnings.push(format!("n={n}: skipped, {e}"));
                rows.push(CensusRow {
                    family: cfg.family.name().into(),
                    n,
                    count: cfg.family.count(n as usize).to_string(),
                    min_nz: None,
                    max_nz: None,
                    avg_nz: String::new(),
                    histogram: String::new(),
                    argmin: String::new(),
                    status: "skipped".into(),
                });
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(Report { primary: write_csv(&rows)?, warnings, ..Report::default() })
}

#[derive(Serialize)]
struct FeketeRow {
    p: u64,
    p_mod_4: u64,
    f_at_1: String,
    nz: usize,
    route: String,
    fraction: String,
    fraction_reduced: String,
    fraction_f64: f64,
    running_mean: f64,
    oracle_nz: Option<usize>,
    agree: Option<bool>,
}

fn cmd_fekete(cfg: &RunConfig, oracle: bool, iso: &dyn RootIsolator) -> Result<Report, CliError> {
    let primes: Vec<u64> = cfg.p.iter().filter(|&p| p > 2 && is_prime(p)).collect();
    if primes.is_empty() {
        return Err(CliError::precondition(format!("no odd primes in {}", cfg.p)));
    }
    let counted: Vec<Result<(FeketeRow, bool), Error>> = primes
        .par_iter()
        .map(|&p| {
            let f = fekete(p)?;
            let f1 = f.eval_at_one();
            let c = fekete_count(p, iso)?;
            let (oracle_nz, agree) = if oracle && p % 4 == 1 {
                let oc = if p <= 200 { OracleConfig::hundred_digits() } else { OracleConfig::large_degree() };
                let o = oracle_count(&f, &oc)?;
                (Some(o.nz), Some(o.nz == c.nz && o.is_trustworthy()))
            } else {
                (None, None)
            };
            let ok = f1 == BigInt::from(0) && agree != Some(false);
            let row = FeketeRow {
                p,
                p_mod_4: p % 4,
                f_at_1: f1.to_string(),
                nz: c.nz,
                route: c.route.clone(),
                fraction: format!("{}/{}", c.fraction.numer(), c.fraction.denom()),
                fraction_reduced: format!("{}/{}", c.fraction_reduced.numer(), c.fraction_reduced.denom()),
                fraction_f64: c.fraction_f64(),
                running_mean: 0.0,
                oracle_nz,
                agree,
            };
            Ok((row, ok))
        })
        .collect();
    let mut rows = Vec::with_capacity(counted.len());
    let mut failures = Vec::new();
    let mut sum = 0.0;
    for (i, r) in counted.into_iter().enumerate() {
        let (mut row, ok) = r?;
        sum += row.fraction_f64;
        row.running_mean = sum / (i + 1) as f64;
        if !ok {
            failures.push(format!("p={}: f_p(1)={} oracle={:?} exact={}", row.p, row.f_at_1, row.oracle_nz, row.nz));
        }
        rows.push(row);
    }
    let plot: String = rows.iter().map(|r| format!("{} {}\n", r.p, r.fraction_f64)).collect();
    let code = if failures.is_empty() { EXIT_OK } else { EXIT_VERIFY_FAILED };
    Ok(Report { primary: write_csv(&rows)?, plot: Some(plot), warnings: failures, code, ..Report::default() })
}

fn suite_config(cfg: &RunConfig) -> SuiteConfig {
    SuiteConfig {
        seed: cfg.seed,
        degree_budget: cfg.degree_budget,
        totient_limit: cfg.totient_limit,
        quad_tol: cfg.quad_tol,
        instances: cfg.count,
    }
}

#[derive(Serialize)]
struct VerifyRow<'a> {
    suite: &'a str,
    id: &'a str,
    lhs: f64,
    rhs: f64,
    margin: f64,
    status: Status,
    note: &'a str,
}

/// Runs one suite, or every suite for `"all"`.
pub fn run_suites(cfg: &RunConfig, name: &str) -> Result<Vec<SuiteOutcome>, CliError> {
    let sc = suite_config(cfg);
    let chosen = if name == "all" { suites() } else { vec![suite_by_name(name).map_err(|e| CliError::parse(e.to_string()))?] };
    chosen.iter().map(|s| s.run(&sc).map_err(CliError::from)).collect()
}

fn cmd_verify(cfg: &RunConfig, name: &str) -> Result<Report, CliError> {
    let outcomes = run_suites(cfg, name)?;
    let mut rows = Vec::new();
    let mut summary = String::new();
    let mut warnings = Vec::new();
    for o in &outcomes {
        summary.push_str(&format!(
            "{}: {}/{} pass, {} fail, {} skipped\n",
            o.suite,
            o.passed(),
            o.rows.len(),
            o.failed(),
            o.skipped()
        ));
        if o.skipped() > 0 {
            warnings.push(format!("{}: {} instances skipped over budget", o.suite, o.skipped()));
        }
        for r in &o.rows {
            rows.push(VerifyRow {
                suite: &o.suite,
                id: &r.id,
                lhs: r.lhs,
                rhs: r.rhs,
                margin: r.margin,
                status: r.status,
                note: &r.note,
            });
        }
    }
    let code = if outcomes.iter().all(SuiteOutcome::all_passed) { EXIT_OK } else { EXIT_VERIFY_FAILED };
    Ok(Report { primary: write_csv(&rows)?, summary: Some(summary), warnings, code, ..Report::default() })
}

/// Instances for `scatter`: whole family censuses, or seeded random
/// self-reciprocal polynomials over the configured coefficient set.
type Instances = (Vec<(String, IntPoly)>, Vec<String>);

fn scatter_instances(cfg: &RunConfig, random: bool) -> Result<Instances, CliError> {
    let mut out = Vec::new();
    let mut warnings = Vec::new();
    if random {
        let count = cfg.count.unwrap_or(100);
        let degrees: Vec<u64> = cfg.n.iter().collect();
        let base = unimodal::rng::SplitMix64::new(cfg.seed);
        for i in 0..count {
            let mut rng = base.derive(i as u64);
            let n = degrees[rng.below(degrees.len() as u64) as usize] as usize;
            out.push((format!("random:{i}"), random_selfreciprocal(&cfg.coeff_set, n, rng.next_u64())?));
        }
        return Ok((out, warnings));
    }
    if cfg.family != Family::SelfReciprocalLittlewood {
        return Err(CliError::precondition(format!("scatter needs a self-reciprocal family, got {}", cfg.family)));
    }
    for n in cfg.n.iter() {
        let n = n as usize;
        let size = cfg.family.count(n);
        if size > cfg.enum_budget {
            warnings.push(format!("n={n}: skipped, family size {size} exceeds enum_budget {}", cfg.enum_budget));
            continue;
        }
        for code in 0..size as u64 {
            out.push((format!("{}:n={n}:code={code}", cfg.family.name()), cfg.family.member(n, code)));
        }
    }
    Ok((out, warnings))
}

pub fn scatter_rows(cfg: &RunConfig, random: bool) -> Result<(Vec<BoundRow>, Vec<String>), CliError> {
    let (instances, warnings) = scatter_instances(cfg, random)?;
    let rows: Result<Vec<BoundRow>, Error> =
        instances.par_iter().map(|(id, p)| theorem_bound_report(id, p, cfg.epsilon)).collect();
    Ok((rows?, warnings))
}

fn cmd_scatter(cfg: &RunConfig, random: bool) -> Result<Report, CliError> {
    let (rows, warnings) = scatter_rows(cfg, random)?;
    let plot = rows
        .iter()
        .filter_map(|r| r.bound_value.map(|b| format!("{b} {}\n", r.nz_star)))
        .collect();
    Ok(Report { primary: write_csv(&rows)?, plot: Some(plot), warnings, ..Report::default() })
}

#[derive(Serialize)]
struct CounterexampleRow {
    n: u64,
    degree: usize,
    identity_holds: bool,
    nz: usize,
    nz_star: usize,
}

fn cmd_counterexample(cfg: &RunConfig) -> Result<Report, CliError> {
    if cfg.n.lo == 0 {
        return Err(CliError::precondition("counterexample needs n >= 1"));
    }
    let rows: Result<Vec<CounterexampleRow>, Error> = cfg
        .n
        .iter()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&n| {
            let t = counterexample_t(n as usize);
            let r = zero_report(&t)?;
            Ok(CounterexampleRow {
                n,
                degree: t.degree().unwrap_or(0),
                identity_holds: counterexample_identity_holds(n as usize),
                nz: r.nz,
                nz_star: r.nz_star,
            })
        })
        .collect();
    let rows = rows?;
    let bad: Vec<String> = rows
        .iter()
        .filter(|r| !r.identity_holds || r.nz_star != 2)
        .map(|r| format!("n={}: identity={} nz_star={}", r.n, r.identity_holds, r.nz_star))
        .collect();
    let code = if bad.is_empty() { EXIT_OK } else { EXIT_VERIFY_FAILED };
    Ok(Report { primary: write_csv(&rows)?, warnings: bad, code, ..Report::default() })
}
