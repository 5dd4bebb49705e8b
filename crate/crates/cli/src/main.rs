use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use unimodal_cli::commands::{parse_coeff_list, read_poly_file, Check};
use unimodal_cli::{run, CliError, Command, Report, RunConfig};

#[derive(Parser)]
#[command(name = "unimodal", version, about = "Exact unimodular zero counts and bound verifiers")]
struct Cli {
    /// Flat `key = value` config file, applied before environment and flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    workers: Option<String>,
    /// Write the CSV or JSON result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true)]
    isolator: Option<String>,
    /// Print the resolved configuration and exit.
    #[arg(long, global = true)]
    dump_config: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckArg {
    #[value(name = "self")]
    SelfReciprocal,
    Skew,
}

#[derive(Args)]
struct Seeded {
    #[arg(long)]
    seed: Option<String>,
    /// Number of seeded instances.
    #[arg(long)]
    count: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Zero report for one polynomial, as JSON.
    Nz {
        /// Coefficients from the constant term up, e.g. `1,1,-1`.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "file")]
        coeffs: Option<String>,
        /// JSON file holding a coefficient array.
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "self")]
        check: CheckArg,
        /// Count a polynomial that fails the symmetry check instead of rejecting it.
        #[arg(long)]
        lift: bool,
        /// Refine isolating intervals to this many bits.
        #[arg(long)]
        bits: Option<u32>,
    },
    /// Exact NZ statistics for every member of a family, one CSV row per degree.
    Census {
        #[arg(long)]
        family: Option<String>,
        /// Degree range, e.g. `1..16` (inclusive).
        #[arg(long)]
        n: Option<String>,
        /// Largest family size to enumerate.
        #[arg(long)]
        budget: Option<String>,
    },
    /// Unimodular zero counts of Fekete polynomials for the primes in a range.
    Fekete {
        #[arg(long)]
        p: Option<String>,
        /// Cross-check p = 1 (mod 4) against the numeric oracle.
        #[arg(long)]
        oracle: bool,
        /// Two-column `p fraction` data file.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Run a verification suite (or `all`) and summarise pass/fail.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[command(flatten)]
        seeded: Seeded,
        #[arg(long)]
        degree_budget: Option<String>,
        #[arg(long)]
        quad_tol: Option<String>,
        #[arg(long)]
        totient_limit: Option<String>,
        /// List the registered suites and exit.
        #[arg(long)]
        list: bool,
    },
    /// NZ* against the lower bound for a family census or seeded random instances.
    Scatter {
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        eps: Option<String>,
        /// Use seeded random self-reciprocal polynomials of degrees in `--n`.
        #[arg(long)]
        random: bool,
        #[command(flatten)]
        seeded: Seeded,
        #[arg(long, allow_hyphen_values = true)]
        coeff_set: Option<String>,
        #[arg(long)]
        budget: Option<String>,
        /// Two-column `bound_value nz_star` data file.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Check the bounded-sign-change cosine family for a range of n.
    Counterexample {
        #[arg(long)]
        n: Option<String>,
    },
}

type Flags = Vec<(&'static str, String)>;

fn push(flags: &mut Flags, key: &'static str, v: &Option<String>) {
    if let Some(v) = v {
        flags.push((key, v.clone()));
    }
}

fn push_path(flags: &mut Flags, key: &'static str, v: &Option<PathBuf>) {
    if let Some(v) = v {
        flags.push((key, v.display().to_string()));
    }
}

fn resolve(cli: &Cli) -> Result<(Command, RunConfig), CliError> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.config {
        let text =
            std::fs::read_to_string(path).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
        cfg.apply_text(&text)?;
    }
    cfg.apply_env(std::env::vars())?;

    let mut flags: Flags = Vec::new();
    push(&mut flags, "workers", &cli.workers);
    push(&mut flags, "isolator", &cli.isolator);
    push_path(&mut flags, "output", &cli.output);
    let seeded = |flags: &mut Flags, s: &Seeded| {
        push(flags, "seed", &s.seed);
        push(flags, "count", &s.count);
    };
    let cmd = match &cli.cmd {
        Cmd::Nz { coeffs, file, check, lift, bits } => {
            let poly = match (coeffs, file) {
                (Some(c), _) => parse_coeff_list(c)?,
                (None, Some(f)) => read_poly_file(f)?,
                (None, None) => return Err(CliError::parse("nz needs --coeffs or --file")),
            };
            let check = match check {
                CheckArg::SelfReciprocal => Check::SelfReciprocal,
                CheckArg::Skew => Check::Skew,
            };
            Command::Nz { poly, check, lift: *lift, bits: *bits }
        }
        Cmd::Census { family, n, budget } => {
            push(&mut flags, "family", family);
            push(&mut flags, "n", n);
            push(&mut flags, "enum_budget", budget);
            Command::Census
        }
        Cmd::Fekete { p, oracle, plot } => {
            push(&mut flags, "p", p);
            push_path(&mut flags, "plot", plot);
            Command::Fekete { oracle: *oracle }
        }
        Cmd::Verify { suite, seeded: s, degree_budget, quad_tol, totient_limit, .. } => {
            seeded(&mut flags, s);
            push(&mut flags, "degree_budget", degree_budget);
            push(&mut flags, "quad_tol", quad_tol);
            push(&mut flags, "totient_limit", totient_limit);
            Command::Verify { suite: suite.clone() }
        }
        Cmd::Scatter { family, n, eps, random, seeded: s, coeff_set, budget, plot } => {
            push(&mut flags, "family", family);
            push(&mut flags, "n", n);
            push(&mut flags, "epsilon", eps);
            seeded(&mut flags, s);
            push(&mut flags, "coeff_set", coeff_set);
            push(&mut flags, "enum_budget", budget);
            push_path(&mut flags, "plot", plot);
            Command::Scatter { random: *random }
        }
        Cmd::Counterexample { n } => {
            push(&mut flags, "n", n);
            Command::Counterexample
        }
    };
    for (k, v) in flags {
        cfg.set(k, &v)?;
    }
    cfg.command = Some(cmd.name().to_string());
    Ok((cmd, cfg))
}

fn write_to(path: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError { code: 1, msg: format!("write failed: {e}") };
    match path {
        Some(p) => std::fs::write(p, text).map_err(io),
        None => std::io::stdout().lock().write_all(text.as_bytes()).map_err(io),
    }
}

fn emit(report: &Report, cfg: &RunConfig) -> Result<(), CliError> {
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    match (&report.summary, &cfg.output) {
        (Some(s), None) => write_to(&None, s)?,
        (Some(s), Some(_)) => {
            write_to(&None, s)?;
            write_to(&cfg.output, &report.primary)?;
        }
        (None, out) => write_to(out, &report.primary)?,
    }
    if let (Some(plot), Some(path)) = (&report.plot, &cfg.plot) {
        write_to(&Some(path.clone()), plot)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Cmd::Verify { list: true, .. } = cli.cmd {
        for s in unimodal::suites::suites() {
            println!("{:<18} {}", s.name(), s.describe());
        }
        return ExitCode::SUCCESS;
    }
    let result = resolve(&cli).and_then(|(cmd, cfg)| {
        if cli.dump_config {
            print!("{}", cfg.to_text());
            return Ok(0);
        }
        let report = run(&cmd, &cfg)?;
        emit(&report, &cfg)?;
        Ok(report.code)
    });
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
