//! Command-line front end: `verify`, `sweep` and `check-pair`.
//!
//! Exit codes: 0 when every asserted check holds, 1 on violations, 2 on
//! configuration, parse or I/O errors.

pub mod matrix_file;
pub mod sweep;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::inequalities::{
    grid, run_pair, run_suite, trial_rng, CheckKind, CheckResult, HermitianPair, SuiteConfig,
    SuiteReport,
};
use crate::linalg::{random_commuting_pair, random_hermitian, HermitianMatrix};

pub use matrix_file::{
    format_complex, parse_complex, parse_matrix_file, write_matrix_file, FileError, MatrixFile,
    MatrixKind,
};
pub use sweep::{sweep_csv, sweep_pair, sweep_svg, RowStatus, SweepRow};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATIONS: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

/// Replay files written per failing `verify` run.
pub const MAX_REPLAYS: usize = 20;

#[derive(Debug, Parser)]
#[command(
    name = "matmean",
    version,
    about = "Weighted geometric means of positive definite matrices and randomized checks of Golden-Thompson-type inequalities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the check suite on seeded random pairs and write JSON and CSV reports.
    Verify(VerifyArgs),
    /// Write trace curves of the three operator families over a t grid.
    Sweep(SweepArgs),
    /// Run the checks on a pair read from a matrix file.
    CheckPair(CheckPairArgs),
}

#[derive(Debug, Clone, Args)]
struct SelectionArgs {
    /// Weights: `start:stop:step` or a comma-separated list [default: -3:3:0.05]
    #[arg(long = "t-grid", allow_hyphen_values = true)]
    t_grid: Option<String>,
    /// Scales r, comma-separated [default: 0.25,0.5,1,2,4]
    #[arg(long = "r-grid")]
    r_grid: Option<String>,
    /// Norms, comma-separated: trace, frobenius, operator, kyfan<k>, schatten<p> [default: trace, frobenius, operator and every Ky Fan norm]
    #[arg(long)]
    norms: Option<String>,
    /// Check families, comma-separated, or `all`
    #[arg(long, default_value = "all")]
    checks: String,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, env = "MATMEAN_SEED", default_value_t = 42)]
    seed: u64,
    /// Matrix dimension
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// Entry scale of the random Hermitian ensemble
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[command(flatten)]
    selection: SelectionArgs,
    /// Output directory for report.json, report.csv and replay files
    #[arg(long, default_value = "matmean-report")]
    out: PathBuf,
    /// Worker threads (0 = all cores); results do not depend on it
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Svg,
    Both,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, env = "MATMEAN_SEED", default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    n: usize,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long = "t-min", default_value_t = -3.0, allow_hyphen_values = true)]
    t_min: f64,
    #[arg(long = "t-max", default_value_t = 3.0, allow_hyphen_values = true)]
    t_max: f64,
    #[arg(long = "t-step", default_value_t = 0.05)]
    t_step: f64,
    /// Number of random pairs, one CSV/SVG each
    #[arg(long, default_value_t = 3)]
    pairs: usize,
    #[arg(long, value_enum, default_value_t = Format::Both)]
    format: Format,
    /// Output directory
    #[arg(long, default_value = "matmean-sweep")]
    out: PathBuf,
    /// Shift each matrix so that its smallest eigenvalue equals sigma
    #[arg(long)]
    positive: bool,
    /// Draw commuting pairs (the three curves then coincide)
    #[arg(long)]
    commuting: bool,
}

#[derive(Debug, Args)]
struct CheckPairArgs {
    /// Matrix pair file
    file: PathBuf,
    #[command(flatten)]
    selection: SelectionArgs,
    /// Optional directory for report.json and report.csv
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A failure reported to the user before exiting with [`EXIT_ERROR`].
struct Fatal(String);

impl<E: std::fmt::Display> From<E> for Fatal {
    fn from(e: E) -> Self {
        Fatal(e.to_string())
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_ERROR
                }
            };
        }
    };
    let result = match cli.command {
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Sweep(a) => cmd_sweep(&a, out),
        Command::CheckPair(a) => cmd_check_pair(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(Fatal(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_ERROR
        }
    }
}

/// `start:stop:step` or a comma-separated list.
pub fn parse_grid(text: &str) -> crate::Result<Vec<f64>> {
    let bad = |tok: &str| crate::MatError::InvalidParameter(format!("`{tok}` is not a number"));
    let number = |tok: &str| tok.trim().parse::<f64>().map_err(|_| bad(tok));
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [start, stop, step] => grid(number(start)?, number(stop)?, number(step)?),
        [_] => text.split(',').map(number).collect(),
        _ => Err(crate::MatError::InvalidParameter(format!(
            "`{text}` is neither start:stop:step nor a list"
        ))),
    }
}

fn parse_list<T: std::str::FromStr<Err = crate::MatError>>(text: &str) -> crate::Result<Vec<T>> {
    text.split(',').map(|s| s.trim().parse()).collect()
}

fn parse_checks(text: &str) -> crate::Result<Vec<CheckKind>> {
    if text.trim() == "all" {
        Ok(CheckKind::ALL.to_vec())
    } else {
        parse_list(text)
    }
}

impl SelectionArgs {
    fn apply(&self, config: &mut SuiteConfig) -> Result<(), Fatal> {
        let flag = |name: &str, e: crate::MatError| Fatal(format!("--{name}: {e}"));
        if let Some(t) = &self.t_grid {
            config.t_grid = parse_grid(t).map_err(|e| flag("t-grid", e))?;
        }
        if let Some(r) = &self.r_grid {
            config.r_grid = parse_grid(r).map_err(|e| flag("r-grid", e))?;
        }
        if let Some(n) = &self.norms {
            config.norms = parse_list(n).map_err(|e| flag("norms", e))?;
        }
        config.checks = parse_checks(&self.checks).map_err(|e| flag("checks", e))?;
        Ok(())
    }

    /// The flags to repeat when replaying a failure with `check-pair`.
    fn echo(&self) -> String {
        let mut s = String::new();
        for (name, v) in [
            ("t-grid", &self.t_grid),
            ("r-grid", &self.r_grid),
            ("norms", &self.norms),
        ] {
            if let Some(v) = v {
                s.push_str(&format!(" --{name}={v}"));
            }
        }
        s
    }
}

/// Per-check counts as a fixed-width table.
pub fn summary_table(report: &SuiteReport) -> String {
    let mut s = format!(
        "{:<36} {:>9} {:>9} {:>9} {:>8} {:>8} {:>12}\n",
        "check", "count", "holds", "equality", "violated", "n/a", "min_gap"
    );
    for a in &report.aggregates {
        let t = &a.tally;
        let id = if t.asserted {
            a.check_id.clone()
        } else {
            format!("{} (unasserted)", a.check_id)
        };
        s.push_str(&format!(
            "{:<36} {:>9} {:>9} {:>9} {:>8} {:>8} {:>12}\n",
            id,
            t.count,
            t.holds,
            t.equality,
            t.violated,
            t.not_applicable,
            t.min_gap.map_or("-".to_string(), |g| format!("{g:.3e}")),
        ));
    }
    let st = &report.statistics;
    for (name, rate) in [
        ("strict separation", st.strict_separation),
        ("commuting equality", st.commuting_equality),
        ("strict trace monotonicity", st.strict_trace_monotonicity),
    ] {
        if let Some(r) = rate.rate() {
            s.push_str(&format!(
                "{name}: {}/{} ({:.1}%)\n",
                rate.passed,
                rate.eligible,
                100.0 * r
            ));
        }
    }
    for (family, g) in &st.guard {
        if g.rescaled > 0 {
            s.push_str(&format!(
                "conditioning guard [{family}]: rescaled {}/{} trials, smallest factor {:.3}\n",
                g.rescaled, g.trials, g.min_scale
            ));
        }
    }
    s.push_str(&format!(
        "{}: {} violations in {} checks\n",
        if report.passed() { "PASS" } else { "FAIL" },
        report.total_violations,
        report.total_checks
    ));
    s
}

fn describe(r: &CheckResult) -> String {
    let c = &r.context;
    let mut s = format!(
        "{} lhs={:e} rhs={:e} gap={:e} tol={:e}",
        r.check_id, r.lhs, r.rhs, r.gap, r.tol
    );
    for (name, v) in [("t", c.t), ("r", c.r), ("q", c.q), ("scale", c.scale)] {
        if let Some(v) = v {
            s.push_str(&format!(" {name}={v}"));
        }
    }
    if let Some(norm) = &c.norm {
        s.push_str(&format!(" norm={norm}"));
    }
    if let Some(note) = &c.note {
        s.push_str(&format!(" ({note})"));
    }
    s
}

fn write_reports(dir: &Path, report: &SuiteReport) -> Result<(), Fatal> {
    fs::create_dir_all(dir).map_err(|e| Fatal(format!("{}: {e}", dir.display())))?;
    for (name, body) in [
        ("report.json", report.to_json()),
        ("report.csv", report.to_csv()),
    ] {
        let path = dir.join(name);
        fs::write(&path, body).map_err(|e| Fatal(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32, Fatal> {
    let mut config = SuiteConfig::for_dim(a.n);
    config.sigma = a.sigma;
    config.trials = a.trials;
    config.seed = a.seed;
    config.jobs = a.jobs;
    a.selection.apply(&mut config)?;
    let report = run_suite(&config)?;
    write_reports(&a.out, &report)?;
    write!(out, "{}", summary_table(&report))?;
    writeln!(out, "reports written to {}", a.out.display())?;
    if report.passed() {
        return Ok(EXIT_OK);
    }

    let dir = a.out.join("replay");
    fs::create_dir_all(&dir).map_err(|e| Fatal(format!("{}: {e}", dir.display())))?;
    writeln!(out, "failures (first {MAX_REPLAYS} written for replay):")?;
    for (i, f) in report.failures.iter().take(MAX_REPLAYS).enumerate() {
        let path = dir.join(format!("failure_{}.txt", i + 1));
        fs::write(&path, write_matrix_file(&f.h, &f.k, MatrixKind::Hermitian))
            .map_err(|e| Fatal(format!("{}: {e}", path.display())))?;
        let trial = f
            .result
            .context
            .trial
            .map_or(String::new(), |t| format!("trial {t}: "));
        writeln!(out, "  {trial}{}", describe(&f.result))?;
        let family = CheckKind::of_check_id(&f.result.check_id)
            .map_or(String::new(), |k| format!(" --checks {k}"));
        writeln!(
            out,
            "    replay: matmean check-pair {}{family}{}",
            path.display(),
            a.selection.echo()
        )?;
    }
    Ok(EXIT_VIOLATIONS)
}

fn cmd_check_pair(a: &CheckPairArgs, out: &mut dyn Write) -> Result<i32, Fatal> {
    let text =
        fs::read_to_string(&a.file).map_err(|e| Fatal(format!("{}: {e}", a.file.display())))?;
    let file = parse_matrix_file(&text).map_err(|e| Fatal(format!("{}: {e}", a.file.display())))?;
    let mut config = SuiteConfig::for_dim(file.h.dim());
    a.selection.apply(&mut config)?;
    let pair = HermitianPair::new(file.h, file.k)?;
    let (report, results) = run_pair(&config, pair)?;
    writeln!(
        out,
        "{}: n = {}, kind = {}, symmetrization residual {:e}",
        a.file.display(),
        config.n,
        file.kind,
        file.residual
    )?;
    write!(out, "{}", summary_table(&report))?;
    for r in results.iter().filter(|r| r.is_failure()) {
        writeln!(out, "  {}", describe(r))?;
    }
    if let Some(dir) = &a.out {
        write_reports(dir, &report)?;
    }
    Ok(if report.passed() {
        EXIT_OK
    } else {
        EXIT_VIOLATIONS
    })
}

/// The `index`-th sweep pair for `seed`.
pub fn sweep_input(
    seed: u64,
    index: usize,
    n: usize,
    sigma: f64,
    positive: bool,
    commuting: bool,
) -> crate::Result<HermitianPair> {
    let mut rng = trial_rng(seed, index);
    let (h, k) = if commuting {
        random_commuting_pair(n, sigma, &mut rng)
    } else {
        let h = random_hermitian(n, sigma, &mut rng);
        (h, random_hermitian(n, sigma, &mut rng))
    };
    let (h, k) = if positive {
        let shift = |m: HermitianMatrix| -> crate::Result<HermitianMatrix> {
            let min = *m.eig()?.eigenvalues.last().expect("n >= 1");
            Ok(m.shift(sigma - min))
        };
        (shift(h)?, shift(k)?)
    } else {
        (h, k)
    };
    HermitianPair::new(h, k)
}

fn cmd_sweep(a: &SweepArgs, out: &mut dyn Write) -> Result<i32, Fatal> {
    if a.n == 0 || a.n > 16 {
        return Err(Fatal(format!("--n: dimension {} outside 1..=16", a.n)));
    }
    if !(a.sigma > 0.0) || !a.sigma.is_finite() {
        return Err(Fatal(format!("--sigma: {} must be positive", a.sigma)));
    }
    if a.pairs == 0 {
        return Err(Fatal("--pairs: must be at least 1".into()));
    }
    let ts = grid(a.t_min, a.t_max, a.t_step).map_err(|e| Fatal(format!("t grid: {e}")))?;
    fs::create_dir_all(&a.out).map_err(|e| Fatal(format!("{}: {e}", a.out.display())))?;

    let mut violations = 0;
    for i in 1..=a.pairs {
        let pair = sweep_input(a.seed, i - 1, a.n, a.sigma, a.positive, a.commuting)?;
        let rows = sweep_pair(&pair, &ts);
        let overflow = rows.iter().filter(|r| !r.is_plotted()).count();
        let failed: Vec<&SweepRow> = rows
            .iter()
            .filter(|r| matches!(r.status, RowStatus::Violated(_)))
            .collect();
        violations += failed.len();
        let stem = a.out.join(format!("sweep_{i}"));
        let mut written = Vec::new();
        if a.format != Format::Svg {
            let path = stem.with_extension("csv");
            fs::write(&path, sweep_csv(&rows))
                .map_err(|e| Fatal(format!("{}: {e}", path.display())))?;
            written.push(path);
        }
        if a.format != Format::Csv {
            let path = stem.with_extension("svg");
            let title = format!("pair {i} (seed {}, n = {})", a.seed, a.n);
            fs::write(&path, sweep_svg(&rows, &title))
                .map_err(|e| Fatal(format!("{}: {e}", path.display())))?;
            written.push(path);
        }
        let names: Vec<String> = written.iter().map(|p| p.display().to_string()).collect();
        writeln!(
            out,
            "pair {i}: {} rows, {overflow} overflowed, {} ordering violations -> {}",
            rows.len(),
            failed.len(),
            names.join(", ")
        )?;
        for r in failed {
            if let RowStatus::Violated(names) = &r.status {
                writeln!(
                    out,
                    "  t = {}: {} violated ({})",
                    r.t,
                    names.join(", "),
                    r.regime
                )?;
            }
        }
    }
    Ok(if violations == 0 {
        EXIT_OK
    } else {
        EXIT_VIOLATIONS
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_flags() {
        assert_eq!(parse_grid("0:1:0.5").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("-1, 2").unwrap(), vec![-1.0, 2.0]);
        assert!(parse_grid("1:2").is_err());
        assert!(parse_grid("x").is_err());
    }

    #[test]
    fn check_lists() {
        assert_eq!(parse_checks("all").unwrap().len(), CheckKind::ALL.len());
        assert_eq!(
            parse_checks("theorem2, lie-trotter").unwrap(),
            vec![CheckKind::Theorem2, CheckKind::LieTrotter]
        );
        assert!(parse_checks("nope").is_err());
    }

    #[test]
    fn bad_flags_exit_with_config_error() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = run(["matmean", "verify", "--trials", "x"], &mut o, &mut e);
        assert_eq!(code, EXIT_ERROR);
        let code = run(
            [
                "matmean",
                "verify",
                "--norms",
                "kyfan9",
                "--trials",
                "0",
                "--out",
                "/nonexistent/never",
            ],
            &mut o,
            &mut e,
        );
        assert_eq!(code, EXIT_ERROR);
        assert!(String::from_utf8_lossy(&e).contains("norms"));
    }

    #[test]
    fn help_exits_cleanly() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(run(["matmean", "--help"], &mut o, &mut e), EXIT_OK);
        assert!(String::from_utf8_lossy(&o).contains("check-pair"));
    }
}
