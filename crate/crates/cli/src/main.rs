//! `metcoh`: command-line front end for metric cohomology experiments.

mod cmd_complex;
mod cmd_cover;
mod cmd_sofic;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use metcoh_core::cochain::{SearchConfig, SearchMode};
use metcoh_core::{Error, SchemeKind, SimplicialComplex, WeightScheme};

use report::{Header, Report};

#[derive(Parser)]
#[command(
    name = "metcoh",
    version,
    about = "Weighted cochain complexes, expansion constants, covers and sofic experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Heuristic,
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scheme {
    Mu,
    M,
}

#[derive(Args, Clone)]
pub struct Common {
    /// Worker threads for exhaustive searches; does not change the output.
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Largest search space explored exactly. Accepts forms like `1e6` or `2^20`.
    /// Defaults to $METCOH_BUDGET, else 2^28.
    #[arg(long)]
    budget: Option<String>,
    /// Largest matrix (rows times columns) handed to the linear solver.
    #[arg(long, default_value = "2^24")]
    linalg_budget: String,
    #[arg(long, value_enum, default_value = "exact")]
    mode: Mode,
    /// Withhold values that were not certified by exhaustive search.
    #[arg(long)]
    certified_only: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "mu")]
    scheme: Scheme,
    /// Annealing steps per search in heuristic mode.
    #[arg(long, default_value_t = 200_000)]
    heuristic_steps: u64,
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a generated complex in the complex file format.
    Generate(cmd_complex::GenerateArgs),
    /// Face counts, weights, components and cohomology of a complex.
    AnalyzeComplex(cmd_complex::AnalyzeArgs),
    /// Cosystole in one degree, or the cosystolic norm of a given class.
    Cosystole(cmd_complex::CosystoleArgs),
    /// Expansion constant in one degree, optionally with an expander check.
    Expansion(cmd_complex::ExpansionArgs),
    /// Upper Laplacian and random-walk spectra, links, and the local hypotheses.
    Spectrum(cmd_complex::SpectrumArgs),
    /// Build the finite cover defined by an edge labeling.
    BuildCover(cmd_cover::BuildCoverArgs),
    /// Compare the pushed-forward class downstairs with the pulled-back class on the cover.
    ShapiroCheck(cmd_cover::CoverCochainArgs),
    /// Push a class forward to permutation-module coefficients.
    Pushforward(cmd_cover::PushforwardArgs),
    /// Decide whether a degree-2 class dies on the cover.
    VanishingTest(cmd_cover::CoverCochainArgs),
    /// Pushforward class norms over a family of labelings.
    LowerBound(cmd_cover::LowerBoundArgs),
    /// Relator defects and freeness scores of a permutation almost-action.
    SoficReport(cmd_sofic::SoficReportArgs),
    /// Induced action on the orbits of a central action.
    Induce(cmd_sofic::ActionArgs),
    /// Defect cocycle of an extension approximation.
    DefectCocycle(cmd_sofic::ActionArgs),
    /// Compare the coboundary of the defect cocycle with the extension class.
    CompareAlpha(cmd_sofic::SpecArgs),
    /// Solve for a primitive of the extension class on an exact free action.
    AfreeCheck(cmd_sofic::SpecArgs),
    /// Match block statistics of an almost-action against honest actions.
    StabilityCheck(cmd_sofic::StabilityArgs),
}

/// Failures carry the file they came from.
pub struct Failure {
    context: Option<String>,
    error: Error,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure { context: None, error }
    }
}

pub type Outcome<T> = std::result::Result<T, Failure>;

pub trait Context<T> {
    fn in_file(self, path: &Path) -> Outcome<T>;
}

impl<T> Context<T> for metcoh_core::Result<T> {
    fn in_file(self, path: &Path) -> Outcome<T> {
        self.map_err(|error| Failure { context: Some(path.display().to_string()), error })
    }
}

pub fn read(path: &Path) -> Outcome<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure { context: Some(path.display().to_string()), error: Error::input(e.to_string()) })
}

pub fn load_complex(path: &Path) -> Outcome<SimplicialComplex> {
    SimplicialComplex::parse(&read(path)?).in_file(path)
}

/// Integers written plainly, as `1e6`, or as `2^20`.
pub fn parse_count(s: &str) -> metcoh_core::Result<u64> {
    let s = s.trim();
    let bad = || Error::input(format!("`{s}` is not a positive count"));
    let v = if let Ok(v) = s.parse::<u64>() {
        v
    } else if let Some((b, e)) = s.split_once('^') {
        let (b, e): (u64, u32) = (b.trim().parse().map_err(|_| bad())?, e.trim().parse().map_err(|_| bad())?);
        b.checked_pow(e).ok_or_else(bad)?
    } else {
        let f: f64 = s.parse().map_err(|_| bad())?;
        if !(f.is_finite() && f >= 1.0 && f.fract() == 0.0 && f <= u64::MAX as f64) {
            return Err(bad());
        }
        f as u64
    };
    if v == 0 {
        return Err(bad());
    }
    Ok(v)
}

impl Common {
    pub fn config(&self) -> metcoh_core::Result<SearchConfig> {
        let budget = match &self.budget {
            Some(b) => parse_count(b)?,
            None => match std::env::var("METCOH_BUDGET") {
                Ok(v) => parse_count(&v).map_err(|e| Error::input(format!("METCOH_BUDGET: {e}")))?,
                Err(_) => SearchConfig::default().budget,
            },
        };
        if self.workers == 0 {
            return Err(Error::input("--workers must be at least 1"));
        }
        Ok(SearchConfig {
            mode: match self.mode {
                Mode::Exact => SearchMode::Exact,
                Mode::Heuristic => SearchMode::Heuristic,
                Mode::Auto => SearchMode::Auto,
            },
            budget,
            linalg_budget: parse_count(&self.linalg_budget)?,
            workers: self.workers,
            seed: self.seed,
            heuristic_steps: self.heuristic_steps,
        })
    }

    pub fn scheme(&self, x: &SimplicialComplex) -> metcoh_core::Result<WeightScheme> {
        WeightScheme::of_kind(self.scheme_kind(), x)
    }

    fn scheme_kind(&self) -> SchemeKind {
        match self.scheme {
            Scheme::Mu => SchemeKind::Mu,
            Scheme::M => SchemeKind::M,
        }
    }

    pub fn report(&self, command: &'static str) -> Report {
        Report::new(Header {
            command,
            scheme: self.scheme_kind().to_string(),
            seed: self.seed,
            mode: match self.mode {
                Mode::Exact => "exact",
                Mode::Heuristic => "heuristic",
                Mode::Auto => "auto",
            }
            .to_string(),
            certified_only: self.certified_only,
        })
    }

    pub fn emit(&self, text: &str) -> Outcome<()> {
        match &self.output {
            Some(p) => std::fs::write(p, text)
                .map_err(|e| Failure { context: Some(p.display().to_string()), error: Error::input(e.to_string()) }),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn dispatch(cmd: Command) -> Outcome<()> {
    match cmd {
        Command::Generate(a) => cmd_complex::generate(a),
        Command::AnalyzeComplex(a) => cmd_complex::analyze(a),
        Command::Cosystole(a) => cmd_complex::cosystole(a),
        Command::Expansion(a) => cmd_complex::expansion(a),
        Command::Spectrum(a) => cmd_complex::spectrum(a),
        Command::BuildCover(a) => cmd_cover::build_cover(a),
        Command::ShapiroCheck(a) => cmd_cover::shapiro(a),
        Command::Pushforward(a) => cmd_cover::pushforward(a),
        Command::VanishingTest(a) => cmd_cover::vanishing(a),
        Command::LowerBound(a) => cmd_cover::lower_bound(a),
        Command::SoficReport(a) => cmd_sofic::sofic_report(a),
        Command::Induce(a) => cmd_sofic::induce(a),
        Command::DefectCocycle(a) => cmd_sofic::defect(a),
        Command::CompareAlpha(a) => cmd_sofic::compare(a),
        Command::AfreeCheck(a) => cmd_sofic::afree(a),
        Command::StabilityCheck(a) => cmd_sofic::stability(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f.context {
                Some(file) => eprintln!("error: {file}: {}", f.error),
                None => eprintln!("error: {}", f.error),
            }
            ExitCode::from(if f.error.is_capacity() { 3 } else { 2 })
        }
    }
}
