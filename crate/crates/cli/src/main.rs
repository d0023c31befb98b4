//! `imag`: measures, decompositions, decay surfaces, conversion
//! probabilities and verification suites from the command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input or I/O error,
//! 3 unsupported request.

mod commands;
#[cfg(test)]
mod tests;

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use imaginarity::channels::NoiseKind;
use imaginarity::measures::MeasureKind;
use imaginarity::verify::Suite;

use commands::Streams;

#[derive(Debug, Parser)]
#[command(
    name = "imag",
    version,
    about = "Imaginarity measures and state conversion under real operations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the imaginarity of a state.
    Measure {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, value_enum, default_value = "gl")]
        measure: MeasureArg,
    },
    /// Print an optimal pure-state decomposition as JSON.
    Decompose {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, value_enum, default_value = "optimal")]
        mode: ModeArg,
    },
    /// Write the imaginarity decay surface of a noise channel as CSV.
    Decay {
        #[arg(long, value_enum)]
        channel: ChannelArg,
        /// Restricts the --check report to one measure.
        #[arg(long, value_enum)]
        measure: Option<MeasureArg>,
        #[arg(long, default_value_t = 101)]
        grid: usize,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Compare every grid point against direct channel simulation.
        #[arg(long)]
        check: bool,
    },
    /// Print the optimal probability of converting a pure state.
    Convert {
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
        /// Accept any target within this fidelity of --to.
        #[arg(long)]
        fidelity: Option<f64>,
    },
    /// Run a seeded verification suite.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Decay grid side length.
        #[arg(long, default_value_t = 101)]
        grid: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MeasureArg {
    G,
    Gl,
}

impl From<MeasureArg> for MeasureKind {
    fn from(m: MeasureArg) -> Self {
        match m {
            MeasureArg::G => MeasureKind::Geometric,
            MeasureArg::Gl => MeasureKind::GeometricLike,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Optimal,
    Equalized,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ChannelArg {
    Bf,
    Pd,
    Ad,
}

impl From<ChannelArg> for NoiseKind {
    fn from(c: ChannelArg) -> Self {
        match c {
            ChannelArg::Bf => NoiseKind::BitFlip(0.0),
            ChannelArg::Pd => NoiseKind::PhaseDamping(0.0),
            ChannelArg::Ad => NoiseKind::AmplitudeDamping(0.0),
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SuiteArg {
    Roof,
    Monotonicity,
    Decay,
    Conversion,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Roof => Suite::Roof,
            SuiteArg::Monotonicity => Suite::Monotonicity,
            SuiteArg::Decay => Suite::Decay,
            SuiteArg::Conversion => Suite::Conversion,
            SuiteArg::All => Suite::All,
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code.
fn run<I, T>(args: I, streams: &mut Streams) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests go to stdout with exit code 0.
            let text = e.render().to_string();
            let stream = if e.use_stderr() {
                &mut streams.err
            } else {
                &mut streams.out
            };
            let _ = stream.write_all(text.as_bytes());
            return e.exit_code() as u8;
        }
    };
    let result = match cli.command {
        Command::Measure { state, measure } => commands::measure(streams, &state, measure.into()),
        Command::Decompose { state, mode } => commands::decompose(streams, &state, matches!(mode, ModeArg::Equalized)),
        Command::Decay {
            channel,
            measure,
            grid,
            out,
            check,
        } => commands::decay(
            streams,
            channel.into(),
            measure.map(Into::into),
            grid,
            out.as_deref(),
            check,
        ),
        Command::Convert { from, to, fidelity } => commands::convert(streams, &from, &to, fidelity),
        Command::Verify {
            suite,
            samples,
            seed,
            grid,
        } => commands::verify(streams, suite.into(), samples, seed, grid),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(streams.err, "imag: {e}");
            e.exit_code()
        }
    }
}

fn main() -> ExitCode {
    let (mut out, mut err) = (io::stdout().lock(), io::stderr().lock());
    let mut streams = Streams {
        out: &mut out,
        err: &mut err,
    };
    ExitCode::from(run(std::env::args_os(), &mut streams))
}
