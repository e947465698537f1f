//! `mcf` — drive multidimensional continued-fraction transducers from the
//! command line.
//!
//! Subcommands map one-to-one onto library entry points: `expand` produces
//! Jacobi–Perron quotient tuples of a real vector, `moebius` and `bilinear`
//! run the integer-matrix transducers, `verify` replays a transducer run
//! against the independent interval oracle, `experiment` reproduces the
//! inputs-per-output statistics suites, and `dump-forms` prints the
//! synthesized bilinear coefficient families.
//!
//! Exit codes: `0` success, `1` usage or malformed input, `2` input stream
//! exhausted before the run could finish, `3` output guard never certified
//! within the step cap, `4` precision budget exhausted, `5` oracle
//! disagreement.

mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "mcf",
    version,
    about = "Exact Möbius and bilinear transformations of multidimensional continued fractions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Output encoding shared by all subcommands.
#[derive(ValueEnum, Clone, Copy, PartialEq, Eq, Debug)]
pub enum Format {
    /// Quotients one per line as `n: (a1,…,am)`, then `key: value` lines.
    Text,
    /// One pretty-printed JSON object carrying the same fields.
    Json,
}

/// Synthesized bilinear families.
#[derive(ValueEnum, Clone, Copy, PartialEq, Eq, Debug)]
pub enum OpKind {
    /// Componentwise sum `x⁽ⁱ⁾ + y⁽ⁱ⁾`.
    Sum,
    /// Componentwise product `x⁽ⁱ⁾ · y⁽ⁱ⁾`.
    Product,
}

/// Which engine `verify` replays.
#[derive(ValueEnum, Clone, Copy, PartialEq, Eq, Debug)]
pub enum Engine {
    Moebius,
    Bilinear,
}

/// Experiment suite selector.
#[derive(ValueEnum, Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    /// Fixed matrices over `(∛d, ∛d²)` for every non-cube d in range.
    Cubic,
    /// Random nonsingular matrices over random admissible expansions.
    RandomMcf,
    /// Random coefficient families over two independent random expansions.
    RandomBilinear,
}

#[derive(Subcommand)]
enum Command {
    /// Expand a real vector into Jacobi–Perron quotient tuples.
    Expand {
        /// Source spec: `cbrt:D`, `sqrt:D`, or `rat:p/q[,p/q...]`.
        #[arg(long)]
        source: String,
        /// Tuple dimension (default: inferred from the source; `cbrt` expands
        /// the pair `(∛D, ∛D²)` unless `--m 1` asks for the root alone).
        #[arg(long)]
        m: Option<usize>,
        /// Number of quotient tuples to produce.
        #[arg(long)]
        steps: usize,
        /// Interval refinement budget, in bits.
        #[arg(long, default_value_t = mcf_core::DEFAULT_PRECISION_BITS)]
        budget_bits: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Apply an integer matrix to an expansion and re-expand the image.
    Moebius {
        /// Input expansion (JSON: `{"m", "preperiod", "period"?}`).
        #[arg(long)]
        input: PathBuf,
        /// Row-major (m+1)×(m+1) integer matrix (JSON array of arrays).
        #[arg(long)]
        matrix: PathBuf,
        /// Stop after this many output tuples.
        #[arg(long, default_value_t = 10)]
        max_outputs: usize,
        /// Step cap (inputs + outputs + partials); default 20·max-outputs.
        #[arg(long)]
        max_steps: Option<usize>,
        /// Commit certified digits eagerly between full outputs.
        #[arg(long)]
        partial_output: bool,
        /// Write a per-event CSV log to this path.
        #[arg(long)]
        log: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Combine two expansions through a bilinear form family.
    Bilinear {
        /// First input expansion (JSON).
        #[arg(long)]
        x: PathBuf,
        /// Second input expansion (JSON).
        #[arg(long)]
        y: PathBuf,
        /// Coefficient family: JSON array of m+1 row-major (m+1)×(m+1)
        /// matrices, entry `[i]` giving the form of component i.
        #[arg(long, conflicts_with = "op")]
        forms: Option<PathBuf>,
        /// Synthesize the standard family instead of reading `--forms`.
        #[arg(long, value_enum)]
        op: Option<OpKind>,
        /// Stop after this many output tuples.
        #[arg(long, default_value_t = 10)]
        max_outputs: usize,
        /// Step cap (inputs + outputs + partials); default 20·max-outputs.
        #[arg(long)]
        max_steps: Option<usize>,
        /// Commit certified digits eagerly between full outputs.
        #[arg(long)]
        partial_output: bool,
        /// Write a per-event CSV log to this path.
        #[arg(long)]
        log: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Re-expand the image value with the interval oracle and compare.
    Verify {
        /// Which engine to replay.
        #[arg(long, value_enum)]
        against: Engine,
        /// Input expansion (moebius).
        #[arg(long)]
        input: Option<PathBuf>,
        /// Transformation matrix (moebius).
        #[arg(long)]
        matrix: Option<PathBuf>,
        /// First input expansion (bilinear).
        #[arg(long)]
        x: Option<PathBuf>,
        /// Second input expansion (bilinear).
        #[arg(long)]
        y: Option<PathBuf>,
        /// Coefficient family file (bilinear).
        #[arg(long, conflicts_with = "op")]
        forms: Option<PathBuf>,
        /// Synthesized family (bilinear).
        #[arg(long, value_enum)]
        op: Option<OpKind>,
        /// Outputs to produce and compare.
        #[arg(long, default_value_t = 10)]
        max_outputs: usize,
        /// Step cap for the engine run.
        #[arg(long)]
        max_steps: Option<usize>,
        /// Oracle refinement budget, in bits.
        #[arg(long, default_value_t = mcf_core::DEFAULT_PRECISION_BITS)]
        budget_bits: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run a statistics suite and write one CSV row per output event.
    Experiment {
        #[arg(long, value_enum)]
        mode: Mode,
        /// Tuple dimension (random modes).
        #[arg(long, default_value_t = 2)]
        m: usize,
        /// Number of trials (random modes).
        #[arg(long, default_value_t = 100)]
        trials: u64,
        /// Outputs requested per trial.
        #[arg(long, default_value_t = 500)]
        max_outputs: usize,
        /// Upper bound for random quotients and coefficients (random modes).
        #[arg(long, default_value_t = 1000)]
        bound: u64,
        /// Master seed; per-trial seeds derive from it (random modes).
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Results CSV path.
        #[arg(long)]
        out: PathBuf,
        /// Worker threads; 1 runs serially. Results are identical either way.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Smallest d (cubic mode).
        #[arg(long, default_value_t = 2)]
        d_min: u64,
        /// Largest d, inclusive; perfect cubes are skipped (cubic mode).
        #[arg(long, default_value_t = 100)]
        d_max: u64,
        /// Oracle budget per trial, in bits (cubic mode).
        #[arg(long, default_value_t = 1 << 16)]
        budget_bits: u64,
        /// Cross-check every k-th nonsingular trial; 0 disables (cubic mode).
        #[arg(long, default_value_t = 20)]
        verify_sample: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print a synthesized bilinear coefficient family.
    DumpForms {
        #[arg(long, value_enum)]
        op: OpKind,
        /// Tuple dimension.
        #[arg(long, default_value_t = 2)]
        m: usize,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match commands::dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(commands::exit_for_error(&err))
        }
    }
}
