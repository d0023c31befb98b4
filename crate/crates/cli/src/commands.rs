use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use imaginarity::channels::{decay_simulated, decay_surface, NoiseKind, SurfaceRow};
use imaginarity::conversion::{pure_to_mixed_probability, stochastic_approx_probability, Branch, ConversionResult};
use imaginarity::io::{ensemble_to_json, parse_state, State};
use imaginarity::measures::{equalized_decomposition, measure_mixed, measure_pure, optimal_decomposition, MeasureKind};
use imaginarity::verify::{self, Options, Suite};
use imaginarity::{DensityMatrix, Ensemble, PureState};

/// Largest eigenvalue deficit for which a density source counts as pure.
const PURE_SOURCE: f64 = 1e-9;
const RECONSTRUCTION: f64 = 1e-9;
const ROOF_MATCH: f64 = 1e-8;
const EQUALIZED_MATCH: f64 = 1e-7;
const DECAY_CHECK: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },

    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },

    #[error("{path}: {source}")]
    Input { path: PathBuf, source: imaginarity::Error },

    #[error(transparent)]
    Core(#[from] imaginarity::Error),

    #[error("source state is not pure; conversion probabilities are only known for pure sources")]
    SourceNotPure,

    #[error("assertion failed: {0}")]
    Assertion(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Assertion(_) => 1,
            CliError::SourceNotPure => 3,
            _ => 2,
        }
    }
}

/// Result and diagnostic streams.
pub struct Streams<'a> {
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
}

type Result<T> = std::result::Result<T, CliError>;

/// Writes `text` to `out`. A closed pipe (e.g. `| head`) ends output
/// quietly.
fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(CliError::Write {
            path: "<stdout>".into(),
            source: e,
        }),
        _ => Ok(()),
    }
}

fn load(path: &Path) -> Result<State> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_owned(),
        source,
    })?;
    parse_state(&text).map_err(|source| CliError::Input {
        path: path.to_owned(),
        source,
    })
}

pub fn measure(streams: &mut Streams, path: &Path, kind: MeasureKind) -> Result<u8> {
    let value = match load(path)? {
        State::Pure(psi) => measure_pure(&psi, kind),
        State::Density(rho) => measure_mixed(&rho, kind)?,
    };
    emit(streams.out, &format!("{value:.12}\n"))?;
    Ok(0)
}

fn check_ensemble(ensemble: &Ensemble, rho: &DensityMatrix, equalized: bool) -> Result<()> {
    let err = ensemble.density_matrix().max_abs_diff(rho.matrix());
    if err > RECONSTRUCTION {
        return Err(CliError::Assertion(format!("ensemble misses the state by {err:e}")));
    }
    if equalized {
        let target = measure_mixed(rho, MeasureKind::GeometricLike)?;
        for (i, m) in ensemble.members.iter().enumerate() {
            let gap = (measure_pure(m, MeasureKind::GeometricLike) - target).abs();
            if gap > EQUALIZED_MATCH {
                return Err(CliError::Assertion(format!(
                    "member {i} is {gap:e} away from the mixed-state value"
                )));
            }
        }
    } else {
        let kind = MeasureKind::Geometric;
        let gap = (ensemble.average(|m| measure_pure(m, kind)) - measure_mixed(rho, kind)?).abs();
        if gap > ROOF_MATCH {
            return Err(CliError::Assertion(format!(
                "ensemble average is {gap:e} away from the roof"
            )));
        }
    }
    Ok(())
}

pub fn decompose(streams: &mut Streams, path: &Path, equalized: bool) -> Result<u8> {
    let ensemble = match load(path)? {
        State::Pure(psi) => Ensemble::single(psi),
        State::Density(rho) => {
            let ensemble = if equalized {
                equalized_decomposition(&rho)?
            } else {
                optimal_decomposition(&rho)?
            };
            check_ensemble(&ensemble, &rho, equalized)?;
            ensemble
        }
    };
    emit(streams.out, &format!("{}\n", ensemble_to_json(&ensemble)))?;
    Ok(0)
}

/// Shortest decimal that parses back to the same `f64`, in exponent form
/// for very small or very large magnitudes.
fn csv_number(x: f64) -> String {
    let x = x + 0.0; // drops the sign of negative zero
    if x == 0.0 || (1e-4..1e16).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn render_csv(rows: &[SurfaceRow]) -> String {
    let mut s = String::from("A,param,delta_gl,delta_g\n");
    for r in rows {
        let fields = [r.a, r.parameter, r.delta_gl, r.delta_g].map(csv_number);
        s.push_str(&fields.join(","));
        s.push('\n');
    }
    s
}

pub fn decay(
    streams: &mut Streams,
    family: NoiseKind,
    measure: Option<MeasureKind>,
    grid: usize,
    out: Option<&Path>,
    check: bool,
) -> Result<u8> {
    let rows = decay_surface(family, grid)?;
    let csv = render_csv(&rows);
    match out {
        Some(path) => fs::write(path, csv).map_err(|source| CliError::Write {
            path: path.to_owned(),
            source,
        })?,
        None => emit(streams.out, &csv)?,
    }
    if !check {
        return Ok(0);
    }

    let kinds: Vec<MeasureKind> = measure.map_or(MeasureKind::ALL.to_vec(), |m| vec![m]);
    let mut passed = true;
    let mut report = String::new();
    for kind in kinds {
        let mut worst: f64 = 0.0;
        for r in &rows {
            let closed = match kind {
                MeasureKind::GeometricLike => r.delta_gl,
                MeasureKind::Geometric => r.delta_g,
            };
            let simulated = decay_simulated(family.with_parameter(r.parameter), r.a, kind)?;
            worst = worst.max((closed - simulated).abs());
        }
        passed &= worst <= DECAY_CHECK;
        report.push_str(&format!(
            "max discrepancy ({}): {worst:.3e} vs limit {DECAY_CHECK:.1e}\n",
            kind.short_name()
        ));
    }
    // Keep the CSV stream clean when it goes to stdout.
    if out.is_some() {
        emit(streams.out, &report)?;
    } else {
        let _ = streams.err.write_all(report.as_bytes());
    }
    Ok(if passed { 0 } else { 1 })
}

fn pure_source(state: State) -> Result<PureState> {
    match state {
        State::Pure(psi) => Ok(psi),
        State::Density(rho) => rho.as_pure(PURE_SOURCE).ok_or(CliError::SourceNotPure),
    }
}

fn render_conversion(result: &ConversionResult) -> String {
    let mut s = format!("probability: {:.12}\n", result.probability);
    let branch = match result.branch {
        Branch::Deterministic => "deterministic",
        Branch::Filtered => "filtered",
    };
    s.push_str(&format!("branch: {branch}\n"));
    if result.target_is_free {
        s.push_str("note: target is free (zero imaginarity); probability is one by convention\n");
    }
    s
}

pub fn convert(streams: &mut Streams, from: &Path, to: &Path, fidelity: Option<f64>) -> Result<u8> {
    let psi = pure_source(load(from)?)?;
    let rho = load(to)?.density();
    let result = match fidelity {
        Some(f) => stochastic_approx_probability(&psi, &rho, f)?,
        None => pure_to_mixed_probability(&psi, &rho)?,
    };
    emit(streams.out, &render_conversion(&result))?;
    Ok(0)
}

pub fn verify(streams: &mut Streams, suite: Suite, samples: usize, seed: u64, grid: usize) -> Result<u8> {
    let options = Options {
        samples,
        seed,
        grid,
        ..Options::default()
    };
    let report = verify::run(suite, &options)?;
    emit(streams.out, &report.render())?;
    Ok(if report.passed() { 0 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::csv_number;

    #[test]
    fn csv_numbers_round_trip() {
        for x in [
            0.0,
            -0.0,
            1.0,
            0.1,
            0.2928932188134525,
            1e-4,
            5.07e-18,
            -3.2e-9,
            123456.789,
        ] {
            let text = csv_number(x);
            assert_eq!(text.parse::<f64>().unwrap(), x, "{text}");
        }
        assert_eq!(csv_number(-0.0), "0");
        assert_eq!(csv_number(-5.0732681787847516e-18), "-5.0732681787847516e-18");
        assert_eq!(csv_number(0.5), "0.5");
    }
}
