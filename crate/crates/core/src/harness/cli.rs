use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::protocol::Termination;
use crate::state::Amplitude;

use super::config::Settings;
use super::report::{cmd_run, Mode, RunRequest};
use super::sweep::{cmd_maf, cmd_sweep, write_maf, write_sweep, Format, SweepSpec};
use super::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "pqt",
    version,
    about = "Probabilistic teleportation through a non-maximally entangled GHZ channel"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Success probability per (C, depth, strategy): closed form and enumeration.
    Sweep(GridArgs),
    /// Maximal average fidelity per (C, depth, strategy).
    Maf(GridArgs),
    /// One protocol run for a given input state.
    Run(RunArgs),
    /// Run the acceptance suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long)]
    pub c_min: Option<f64>,
    #[arg(long)]
    pub c_max: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    /// Comma-separated attempt counts, e.g. 0,1,2,3.
    #[arg(long, value_delimiter = ',')]
    pub depths: Option<Vec<usize>>,
    /// continue, plain-vnm or matched-vnm; comma-separated for several.
    #[arg(long, value_delimiter = ',')]
    pub strategy: Option<Vec<Termination>>,
    /// csv or json.
    #[arg(long)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub jobs: Option<usize>,
    /// key = value file; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Amplitude of |0>, e.g. 0.6 or 0.6+0.0i.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub a: Amplitude,
    /// Amplitude of |1>.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub b: Amplitude,
    /// Channel angle in [0, pi/4].
    #[arg(long, conflicts_with = "c")]
    pub chi: Option<f64>,
    /// Channel concurrence in [0, 1].
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long, alias = "depths", default_value_t = 0)]
    pub depth: usize,
    #[arg(long, default_value = "continue")]
    pub strategy: Termination,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    /// enumerate or sample.
    #[arg(long, default_value = "enumerate")]
    pub mode: Mode,
    /// json for a machine-readable report, csv for the branch table.
    #[arg(long)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Print per-term comparison notes.
    #[arg(long, short)]
    pub verbose: bool,
    #[arg(long)]
    pub jobs: Option<usize>,
}

impl GridArgs {
    fn settings(&self) -> Result<Settings> {
        let cli = Settings {
            c_min: self.c_min,
            c_max: self.c_max,
            points: self.points,
            depths: self.depths.clone(),
            strategies: self.strategy.clone(),
            jobs: self.jobs,
            format: self.format,
            out: self.out.as_ref().map(|p| p.display().to_string()),
            ..Settings::default()
        };
        let file = match &self.config {
            Some(path) => Settings::load(path).map_err(|e| match e {
                Error::Io(io) => {
                    Error::InvalidSpec(format!("cannot read {}: {io}", path.display()))
                }
                other => other,
            })?,
            None => Settings::default(),
        };
        Ok(cli.over(file))
    }
}

fn spec_from(s: &Settings) -> SweepSpec {
    let d = SweepSpec::default();
    SweepSpec {
        c_min: s.c_min.unwrap_or(d.c_min),
        c_max: s.c_max.unwrap_or(d.c_max),
        points: s.points.unwrap_or(d.points),
        depths: s.depths.clone().unwrap_or(d.depths),
        strategies: s.strategies.clone().unwrap_or(d.strategies),
        output_path: s.out.clone(),
        format: s.format.unwrap_or(d.format),
    }
}

fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        Some(n) if n > 0 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidSpec(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
        _ => Ok(f()),
    }
}

fn sink(out: Option<&str>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => {
            Box::new(BufWriter::new(File::create(path).map_err(|e| {
                Error::InvalidSpec(format!("cannot create {path}: {e}"))
            })?))
        }
        None => Box::new(io::stdout().lock()),
    })
}

fn sweep(args: &GridArgs, maf: bool) -> Result<bool> {
    let s = args.settings()?;
    let spec = spec_from(&s);
    let mut out = sink(spec.output_path.as_deref())?;
    if maf {
        let rows = with_jobs(s.jobs, || cmd_maf(&spec))??;
        write_maf(&rows, spec.format, &mut out)?;
    } else {
        let rows = with_jobs(s.jobs, || cmd_sweep(&spec))??;
        write_sweep(&rows, spec.format, &mut out)?;
    }
    out.flush()?;
    Ok(true)
}

fn run(args: &RunArgs) -> Result<bool> {
    let chi = match (args.chi, args.c) {
        (Some(chi), _) => chi,
        (None, Some(c)) => crate::state::GhzResource::from_concurrence(c)?.chi(),
        (None, None) => std::f64::consts::FRAC_PI_4,
    };
    let req = RunRequest {
        a: args.a,
        b: args.b,
        chi,
        depth: args.depth,
        strategy: args.strategy,
        seed: args.seed,
        trials: args.trials,
        mode: args.mode,
    };
    let report = with_jobs(args.jobs, || cmd_run(&req))??;
    let mut out = sink(args.out.as_ref().and_then(|p| p.to_str()))?;
    match args.format {
        None => out.write_all(report.to_text().as_bytes())?,
        Some(Format::Json) => {
            serde_json::to_writer_pretty(&mut out, &report)?;
            writeln!(out)?;
        }
        Some(Format::Csv) => {
            writeln!(out, "path,attempts,probability,status,correction,fidelity")?;
            for b in &report.branches {
                writeln!(
                    out,
                    "{},{},{:.16e},{},{},{:.16e}",
                    b.path,
                    b.attempts,
                    b.probability,
                    b.status,
                    b.correction.as_deref().unwrap_or(""),
                    b.fidelity
                )?;
            }
        }
    }
    out.flush()?;
    Ok(true)
}

fn verify_all(args: &VerifyArgs) -> Result<bool> {
    let results = with_jobs(args.jobs, verify::run_all)?;
    let mut out = io::stdout().lock();
    for r in &results {
        writeln!(out, "{}", r.line())?;
        if args.verbose || !r.passed {
            for n in &r.notes {
                writeln!(out, "    {n}")?;
            }
        }
    }
    let passed = results.iter().filter(|r| r.passed).count();
    writeln!(out, "verify: {passed}/{} suites passed", results.len())?;
    Ok(passed == results.len())
}

pub fn execute(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Sweep(a) => sweep(a, false),
        Command::Maf(a) => sweep(a, true),
        Command::Run(a) => run(a),
        Command::Verify(a) => verify_all(a),
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
        }
    };
    match execute(&cli) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAILED,
        Err(e) => {
            eprintln!("pqt: {e}");
            if e.is_input_error() {
                EXIT_INVALID
            } else {
                EXIT_FAILED
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_parse() {
        let cli = Cli::try_parse_from([
            "pqt",
            "sweep",
            "--c-min",
            "0.1",
            "--depths",
            "0,2",
            "--strategy",
            "plain-vnm,matched-vnm",
            "--format",
            "json",
            "--jobs",
            "2",
        ])
        .unwrap();
        let Command::Sweep(g) = cli.command else {
            panic!()
        };
        assert_eq!(g.depths, Some(vec![0, 2]));
        assert_eq!(g.strategy.unwrap().len(), 2);
        assert_eq!(g.format, Some(Format::Json));
    }

    #[test]
    fn complex_amplitudes_parse() {
        let cli = Cli::try_parse_from(["pqt", "run", "--a", "0.6", "--b", "0+0.8i", "--c", "0.5"])
            .unwrap();
        let Command::Run(r) = cli.command else {
            panic!()
        };
        assert_eq!(r.b, Amplitude::new(0.0, 0.8));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(
            main_with(["pqt", "sweep", "--strategy", "bogus"]),
            EXIT_INVALID
        );
        assert_eq!(main_with(["pqt", "sweep", "--points", "1"]), EXIT_INVALID);
        assert_eq!(
            main_with(["pqt", "run", "--a", "0.5", "--b", "0.5"]),
            EXIT_INVALID
        );
        assert_eq!(
            main_with(["pqt", "sweep", "--config", "/nonexistent/file"]),
            EXIT_INVALID
        );
    }
}
