//! Command-line front end.
//!
//! Exit codes: 0 when the expected sign holds (or none is claimed), 1 on
//! usage, parse or input errors, 2 on a sign violation, 3 when a strict
//! sign was expected and the value is zero within tolerance.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::chain::{brute_force_observables, closed_form_observables, ClosedForm, CouplingVector, ObservableReport};
use crate::config::{dump_model, read_model, ModelFile};
use crate::disorder::{exact_average_many, monte_carlo_average, Antithetic, BondLaw, DisorderModel, Sampling};
use crate::error::{Error, Result};
use crate::explorer::{default_asymmetric_scan, default_chord_scan, default_control_scan, ExploreGrids};
use crate::format::{fmt_g, write_curve_csv, write_scan_csv};
use crate::inequalities::{
    alpha_scan, check_first_inequality, check_second_inequality, critical_alpha_curve, Boundary, CheckOptions,
    Sign, SignVerdict, DEFAULT_REL_TOLERANCE, DEFAULT_SIGMAS,
};
use crate::reduce::with_workers;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_ZERO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "glasschain", version, about = "Exact correlations and correlation inequalities of the 1D Edwards-Anderson chain")]
pub struct Cli {
    /// Worker threads; 1 gives bit-reproducible sums.
    #[arg(long, global = true, env = "GLASSCHAIN_WORKERS")]
    pub workers: Option<usize>,

    /// Write the canonical form of the loaded model file here.
    #[arg(long, global = true, value_name = "PATH")]
    pub dump_model: Option<PathBuf>,

    /// Write the main output here instead of stdout.
    #[arg(long, short, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Observables of one coupling vector.
    Exact {
        /// Comma-separated couplings J_1,...,J_N.
        #[arg(long, allow_hyphen_values = true)]
        couplings: String,
        /// Sum over spin configurations instead of the closed forms.
        #[arg(long)]
        brute_force: bool,
    },
    /// Quenched averages of <J_h w_h> and <J_h J_k (w_hk - w_h w_k)>.
    Average {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        sampling: SamplingArgs,
        /// Only this bond (and, with --k, this pair).
        #[arg(long)]
        h: Option<usize>,
        #[arg(long, requires = "h")]
        k: Option<usize>,
        /// Sample even when the laws are discrete.
        #[arg(long)]
        sampled: bool,
    },
    /// Sign of <J_h w_h>.
    Check1 {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        check: CheckArgs,
        #[arg(long)]
        h: usize,
    },
    /// Sign of <J_h J_k (w_hk - w_h w_k)>.
    Check2 {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        check: CheckArgs,
        #[arg(long)]
        h: usize,
        #[arg(long)]
        k: usize,
    },
    /// CSV of the critical bias alpha* against J^(l).
    Curve {
        #[command(flatten)]
        mags: MagnitudeArgs,
        #[arg(long)]
        l: usize,
        /// `start:stop:count` or a comma-separated list.
        #[arg(long)]
        grid: String,
    },
    /// CSV of the averaged truncated correlation and g on an alpha grid.
    Scan {
        #[command(flatten)]
        mags: MagnitudeArgs,
        #[arg(long, default_value_t = 1)]
        h: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// `start:stop:count` or a comma-separated list.
        #[arg(long, default_value = "0:1:21")]
        alphas: String,
        /// Relative zero tolerance of the verdict column.
        #[arg(long, default_value_t = DEFAULT_REL_TOLERANCE)]
        tolerance: f64,
    },
    /// Chord, asymmetric-disorder and control scans, as JSON lines.
    Explore {
        /// Ring sizes of the chord and control scans.
        #[arg(long, default_value = "4,5,6")]
        ring_sizes: String,
        /// Bond magnitudes of the chord and control scans.
        #[arg(long, default_value = "0.5,1,2,4")]
        magnitudes: String,
        /// Ring sizes of the asymmetric scan.
        #[arg(long, default_value = "3,4,5,6")]
        asym_ring_sizes: String,
        /// Values a, b of the +a / -b laws.
        #[arg(long, default_value = "0.25,0.5,1,2,4")]
        asym_values: String,
    },
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Model file.
    #[arg(long, value_name = "PATH")]
    pub model: PathBuf,
}

#[derive(Debug, Args)]
pub struct MagnitudeArgs {
    /// Comma-separated magnitudes J^(1),...,J^(N).
    #[arg(long, required_unless_present = "model", conflicts_with = "model")]
    pub magnitudes: Option<String>,
    /// Bernoulli model file supplying the magnitudes.
    #[arg(long, value_name = "PATH")]
    pub model: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AntitheticArg {
    Off,
    Bond,
    All,
}

#[derive(Debug, Args)]
pub struct SamplingArgs {
    /// Monte Carlo draws for continuous laws.
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    /// Overrides the model file's seed (default 0).
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value = "bond")]
    pub antithetic: AntitheticArg,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub sampling: SamplingArgs,
    /// Relative zero tolerance for exact averages.
    #[arg(long, default_value_t = DEFAULT_REL_TOLERANCE)]
    pub tolerance: f64,
    /// Standard errors a sampled value must clear.
    #[arg(long, default_value_t = DEFAULT_SIGMAS)]
    pub sigmas: f64,
    /// Open chain instead of periodic.
    #[arg(long)]
    pub free: bool,
}

fn parse_list<T: std::str::FromStr>(field: &'static str, text: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| crate::error::invalid(field, format!("cannot parse \"{}\"", s.trim())))
        })
        .collect()
}

/// `start:stop:count` (inclusive, evenly spaced) or a comma list.
pub fn parse_grid(field: &'static str, text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [start, stop, count] => {
            let bad = |what: &str| crate::error::invalid(field, format!("cannot parse {what} in \"{text}\""));
            let start: f64 = start.trim().parse().map_err(|_| bad("start"))?;
            let stop: f64 = stop.trim().parse().map_err(|_| bad("stop"))?;
            let count: usize = count.trim().parse().map_err(|_| bad("count"))?;
            match count {
                0 => Err(crate::error::invalid(field, "count must be positive")),
                1 => Ok(vec![start]),
                _ => Ok((0..count)
                    .map(|i| {
                        if i + 1 == count {
                            stop
                        } else {
                            start + (stop - start) * i as f64 / (count - 1) as f64
                        }
                    })
                    .collect()),
            }
        }
        [_] => parse_list(field, text),
        _ => Err(crate::error::invalid(field, format!("\"{text}\" is neither start:stop:count nor a list"))),
    }
}

struct Outcome {
    text: String,
    code: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, code: EXIT_OK }
    }
}

fn load_model(path: &Path, dump: Option<&Path>) -> Result<ModelFile> {
    let file = read_model(path)?;
    if let Some(dump) = dump {
        std::fs::write(dump, dump_model(&file.model, file.seed))
            .map_err(|e| Error::Io(format!("{}: {e}", dump.display())))?;
    }
    Ok(file)
}

fn magnitudes(args: &MagnitudeArgs, dump: Option<&Path>) -> Result<Vec<f64>> {
    match (&args.magnitudes, &args.model) {
        (Some(text), _) => {
            if dump.is_some() {
                return Err(crate::error::invalid("dump-model", "needs --model"));
            }
            parse_list("magnitudes", text)
        }
        (None, Some(path)) => load_model(path, dump)?
            .model
            .laws()
            .iter()
            .enumerate()
            .map(|(i, law)| match law {
                BondLaw::Bernoulli { magnitude, .. } => Ok(*magnitude),
                other => Err(Error::WrongLawKind {
                    expected: "bernoulli",
                    index: i + 1,
                    found: other.kind(),
                }),
            })
            .collect(),
        (None, None) => Err(crate::error::invalid("magnitudes", "missing")),
    }
}

fn sampling(args: &SamplingArgs, file_seed: Option<u64>, h: usize) -> Sampling {
    let antithetic = match args.antithetic {
        AntitheticArg::Off => Antithetic::Off,
        AntitheticArg::Bond => Antithetic::Bond(h),
        AntitheticArg::All => Antithetic::All,
    };
    Sampling::new(args.samples, args.seed.or(file_seed).unwrap_or(0)).with_antithetic(antithetic)
}

fn report_text(c: &CouplingVector, r: &ObservableReport) -> String {
    let mut out = String::new();
    let method = match r.method {
        crate::chain::Method::ClosedForm => "closed_form",
        crate::chain::Method::BruteForce => "brute_force",
    };
    writeln!(out, "method {method}").unwrap();
    writeln!(out, "N {}", c.len()).unwrap();
    writeln!(out, "ln_Z {}", fmt_g(r.z.log_mag())).unwrap();
    writeln!(out, "Z {}", fmt_g(r.z.to_f64())).unwrap();
    for (i, w) in r.omega.iter().enumerate() {
        writeln!(out, "omega {} {}", i + 1, fmt_g(*w)).unwrap();
    }
    for p in &r.pairs {
        writeln!(out, "omega_pair {} {} {}", p.h, p.k, fmt_g(p.omega_pair)).unwrap();
    }
    for p in &r.pairs {
        writeln!(out, "truncated {} {} {}", p.h, p.k, fmt_g(p.truncated)).unwrap();
    }
    out
}

fn verdict_outcome(v: &SignVerdict) -> Outcome {
    let mut text = String::new();
    writeln!(text, "quantity {}", v.context).unwrap();
    writeln!(text, "value {}", fmt_g(v.value)).unwrap();
    writeln!(text, "std_error {}", fmt_g(v.std_error)).unwrap();
    writeln!(text, "tolerance {}", fmt_g(v.tolerance)).unwrap();
    writeln!(text, "verdict {}", v.verdict).unwrap();
    writeln!(text, "expected {}", v.expected.map_or("none", Sign::as_str)).unwrap();
    let code = if v.is_violation() {
        EXIT_VIOLATION
    } else if v.verdict == Sign::Zero && matches!(v.expected, Some(Sign::Positive | Sign::Negative)) {
        EXIT_ZERO
    } else {
        EXIT_OK
    };
    Outcome { text, code }
}

fn check_options(args: &CheckArgs, file_seed: Option<u64>, h: usize) -> CheckOptions {
    CheckOptions {
        rel_tolerance: args.tolerance,
        sigmas: args.sigmas,
        sampling: sampling(&args.sampling, file_seed, h),
        boundary: if args.free { Boundary::Free } else { Boundary::Periodic },
    }
}

fn average(m: &DisorderModel, args: &SamplingArgs, seed: Option<u64>, h: Option<usize>, k: Option<usize>, sampled: bool) -> Result<String> {
    let n = m.len();
    let bonds: Vec<usize> = match h {
        Some(h) => {
            crate::chain::check_index(h, n)?;
            vec![h]
        }
        None => (1..=n).collect(),
    };
    let pairs: Vec<(usize, usize)> = match (h, k) {
        (Some(h), Some(k)) => {
            crate::chain::check_pair(h, k, n)?;
            vec![(h, k)]
        }
        (Some(_), None) => Vec::new(),
        _ => (1..=n).flat_map(|h| (h + 1..=n).map(move |k| (h, k))).collect(),
    };
    let bond_value = |c: &CouplingVector, h: usize| -> Result<f64> { Ok(c.get(h)? * ClosedForm::new(c).omega(h)?) };
    let pair_value =
        |c: &CouplingVector, h: usize, k: usize| -> Result<f64> { Ok(c.get(h)? * c.get(k)? * ClosedForm::new(c).truncated(h, k)?) };

    let mut out = String::new();
    if m.is_discrete() && !sampled {
        let len = bonds.len() + pairs.len();
        let avg = exact_average_many(m, len, |c, out| {
            let cf = ClosedForm::new(c);
            for (i, &h) in bonds.iter().enumerate() {
                out[i] = c.get(h)? * cf.omega(h)?;
            }
            for (i, &(h, k)) in pairs.iter().enumerate() {
                out[bonds.len() + i] = c.get(h)? * c.get(k)? * cf.truncated(h, k)?;
            }
            Ok(())
        })?;
        writeln!(out, "mode exact").unwrap();
        for (i, &h) in bonds.iter().enumerate() {
            writeln!(out, "bond {h} {} 0", fmt_g(avg[i])).unwrap();
        }
        for (i, &(h, k)) in pairs.iter().enumerate() {
            writeln!(out, "pair {h} {k} {} 0", fmt_g(avg[bonds.len() + i])).unwrap();
        }
    } else {
        let base = sampling(args, seed, 1);
        writeln!(out, "mode sampled {} {}", base.n_samples, base.seed).unwrap();
        for &h in &bonds {
            let mc = monte_carlo_average(m, |c| bond_value(c, h), sampling(args, seed, h))?;
            writeln!(out, "bond {h} {} {}", fmt_g(mc.mean), fmt_g(mc.std_error)).unwrap();
        }
        for &(h, k) in &pairs {
            let mc = monte_carlo_average(m, |c| pair_value(c, h, k), sampling(args, seed, h))?;
            writeln!(out, "pair {h} {k} {} {}", fmt_g(mc.mean), fmt_g(mc.std_error)).unwrap();
        }
    }
    Ok(out)
}

fn explore(ring_sizes: &str, magnitudes: &str, asym_ring_sizes: &str, asym_values: &str) -> Result<String> {
    let grids = ExploreGrids {
        chord_ring_sizes: parse_list("ring-sizes", ring_sizes)?,
        magnitudes: parse_list("magnitudes", magnitudes)?,
        asymmetric_ring_sizes: parse_list("asym-ring-sizes", asym_ring_sizes)?,
        asymmetric_values: parse_list("asym-values", asym_values)?,
    };
    let mut out = String::new();
    for scan in [default_chord_scan(&grids)?, default_asymmetric_scan(&grids)?, default_control_scan(&grids)?] {
        out.push_str(&scan.to_json_lines());
    }
    Ok(out)
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let dump = cli.dump_model.as_deref();
    match &cli.command {
        Command::Exact { couplings, brute_force } => {
            if dump.is_some() {
                return Err(crate::error::invalid("dump-model", "exact takes no model file"));
            }
            let c = CouplingVector::new(parse_list("couplings", couplings)?)?;
            let report = if *brute_force {
                brute_force_observables(&c)?
            } else {
                closed_form_observables(&c)
            };
            Ok(Outcome::ok(report_text(&c, &report)))
        }
        Command::Average {
            model,
            sampling,
            h,
            k,
            sampled,
        } => {
            let file = load_model(&model.model, dump)?;
            average(&file.model, sampling, file.seed, *h, *k, *sampled).map(Outcome::ok)
        }
        Command::Check1 { model, check, h } => {
            let file = load_model(&model.model, dump)?;
            let v = check_first_inequality(&file.model, *h, &check_options(check, file.seed, *h))?;
            Ok(verdict_outcome(&v))
        }
        Command::Check2 { model, check, h, k } => {
            let file = load_model(&model.model, dump)?;
            let v = check_second_inequality(&file.model, *h, *k, &check_options(check, file.seed, *h))?;
            Ok(verdict_outcome(&v))
        }
        Command::Curve { mags, l, grid } => {
            let mags = magnitudes(mags, dump)?;
            let points = critical_alpha_curve(&mags, *l, &parse_grid("grid", grid)?)?;
            let mut buf = Vec::new();
            write_curve_csv(&mut buf, &points)?;
            Ok(Outcome::ok(String::from_utf8(buf).expect("ascii")))
        }
        Command::Scan {
            mags,
            h,
            k,
            alphas,
            tolerance,
        } => {
            let mags = magnitudes(mags, dump)?;
            let rows = alpha_scan(&mags, *h, *k, &parse_grid("alphas", alphas)?, *tolerance)?;
            let mut buf = Vec::new();
            write_scan_csv(&mut buf, &rows)?;
            Ok(Outcome::ok(String::from_utf8(buf).expect("ascii")))
        }
        Command::Explore {
            ring_sizes,
            magnitudes,
            asym_ring_sizes,
            asym_values,
        } => {
            if dump.is_some() {
                return Err(crate::error::invalid("dump-model", "explore takes no model file"));
            }
            explore(ring_sizes, magnitudes, asym_ring_sizes, asym_values).map(Outcome::ok)
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Main output goes to `stdout` or `--output`, messages to
/// `stderr`.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = if code == EXIT_OK {
                write!(stdout, "{}", e.render())
            } else {
                write!(stderr, "{}", e.render())
            };
            return code;
        }
    };
    if cli.workers == Some(0) {
        let _ = writeln!(stderr, "error: invalid parameter `workers`: must be at least 1");
        return EXIT_USAGE;
    }
    match with_workers(cli.workers, || execute(&cli)) {
        Ok(outcome) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &outcome.text).map_err(|e| format!("{}: {e}", path.display())),
                None => stdout.write_all(outcome.text.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: i/o: {e}");
                return EXIT_USAGE;
            }
            outcome.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

/// [`run_with`] on the process arguments and standard streams.
pub fn run() -> i32 {
    run_with(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with(std::iter::once("glasschain").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("g", "0:1:5").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(parse_grid("g", "0.5,2").unwrap(), vec![0.5, 2.0]);
        assert!(parse_grid("g", "0:1:0").is_err());
        assert!(parse_grid("g", "0:x:3").is_err());
        assert!(parse_grid("g", "1:2").is_err());
    }

    #[test]
    fn exact_prints_report() {
        let (code, out, _) = run_capture(&["exact", "--couplings", "1,1,-1"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("method closed_form\nN 3\n"));
        assert!(out.contains("omega 1 "));
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run_capture(&["exact"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["frobnicate"]).0, EXIT_USAGE);
        let (code, _, err) = run_capture(&["exact", "--couplings", "1,x"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("couplings"));
        assert_eq!(run_capture(&["--help"]).0, EXIT_OK);
    }
}
