//! Seeded numerical verification suites.
//!
//! Each check records the largest deviation from the property under test
//! over seeded samples and compares it with a limit.
//! Every random stream is derived from the suite seed, so reports are
//! reproducible byte for byte.

use std::fmt::Write as _;

use rand::Rng;

use crate::channels::{
    apply, apply_stochastic, decay_closed_form, decay_simulated, random_real_channel, Completeness, KrausChannel,
    NoiseKind,
};
use crate::conversion::{
    conversion_bound, filter_outcome, filter_protocol, max_mgl_fidelity_ball, min_mgl_fidelity_ball,
    pure_to_mixed_probability, pure_to_pure_probability, sample_fidelity_ball, stochastic_approx_probability,
    FidelityBall,
};
use crate::error::{Error, Result};
use crate::measures::{
    convex_roof_oracle, equalized_decomposition, geometric_like_from_geometric, measure_mixed, measure_pure,
    optimal_decomposition, transpose_fidelity, MeasureKind, DEFAULT_RESTARTS,
};
use crate::numerics::{root_fidelity, ComplexMatrix};
use crate::sampling::{random_density, random_orthogonal, random_pure, random_real_density, seeded, SeededRng};
use crate::states::{is_real_state, DensityMatrix, PureState};

/// Outcome of one property check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    /// Largest deviation found (or the probed quantity itself).
    pub value: f64,
    /// The limit the value is held to.
    pub limit: f64,
    pub passed: bool,
    /// Extra context such as sample counts.
    pub note: String,
}

impl Check {
    /// Passes when `value ≤ limit`.
    fn at_most(suite: &'static str, name: impl Into<String>, value: f64, limit: f64, note: impl Into<String>) -> Self {
        Self {
            suite,
            name: name.into(),
            value,
            limit,
            passed: value <= limit,
            note: note.into(),
        }
    }

    /// Passes when `value > limit`.
    fn above(suite: &'static str, name: impl Into<String>, value: f64, limit: f64, note: impl Into<String>) -> Self {
        Self {
            suite,
            name: name.into(),
            value,
            limit,
            passed: value > limit,
            note: note.into(),
        }
    }

    pub fn line(&self) -> String {
        let relation = if self.passed { "ok" } else { "VIOLATED" };
        let mut s = format!(
            "[{}] {}: {:.3e} vs limit {:.1e} ({relation})",
            self.suite, self.name, self.value, self.limit
        );
        if !self.note.is_empty() {
            let _ = write!(s, " [{}]", self.note);
        }
        let _ = write!(s, " {}", if self.passed { "PASS" } else { "FAIL" });
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Roof,
    Monotonicity,
    Decay,
    Conversion,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Roof => "roof",
            Suite::Monotonicity => "monotonicity",
            Suite::Decay => "decay",
            Suite::Conversion => "conversion",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    pub samples: usize,
    pub seed: u64,
    /// Rejection samples per fidelity ball.
    pub ball_samples: usize,
    /// Decay grid side length.
    pub grid: usize,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            samples: 100,
            seed: 0,
            ball_samples: 10_000,
            grid: 101,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub suite: Suite,
    pub options: Options,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let o = &self.options;
        let _ = writeln!(s, "imaginarity verification report");
        let _ = writeln!(
            s,
            "suite: {}  seed: {}  samples: {}  ball-samples: {}  grid: {}",
            self.suite.name(),
            o.seed,
            o.samples,
            o.ball_samples,
            o.grid
        );
        for c in &self.checks {
            let _ = writeln!(s, "{}", c.line());
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        let _ = writeln!(
            s,
            "overall: {} ({} of {} checks passed)",
            if failed == 0 { "PASS" } else { "FAIL" },
            self.checks.len() - failed,
            self.checks.len()
        );
        s
    }
}

pub fn run(suite: Suite, options: &Options) -> Result<Report> {
    let (n, seed) = (options.samples.max(1), options.seed);
    let mut checks = Vec::new();
    if matches!(suite, Suite::Roof | Suite::All) {
        let qutrits = n / 4;
        checks.push(roof_oracle_agreement(n - qutrits, qutrits, seed)?);
        checks.push(bridge_identity(n, seed)?);
        checks.extend(decompositions(n, seed)?);
    }
    if matches!(suite, Suite::Monotonicity | Suite::All) {
        checks.push(faithfulness(n, seed)?);
        checks.push(orthogonal_invariance(n, seed)?);
        checks.extend(monotonicity(n, seed)?);
        checks.extend(convexity(n, seed)?);
    }
    if matches!(suite, Suite::Decay | Suite::All) {
        checks.extend(decay(options.grid)?);
        checks.extend(decay_shape(options.grid)?);
    }
    if matches!(suite, Suite::Conversion | Suite::All) {
        checks.extend(filter_achievability(20)?);
        checks.push(pure_target_consistency(n, seed)?);
        checks.extend(fidelity_ball_extremes(
            n.min(50),
            &[0.9, 0.99, 0.999],
            options.ball_samples,
            seed,
        )?);
        checks.extend(approximate_conversion(n.min(20), 1000, seed)?);
    }
    Ok(Report {
        suite,
        options: *options,
        checks,
    })
}

/// Independent stream `index` of the substream `salt`.
fn stream(seed: u64, salt: u64, index: usize) -> SeededRng {
    seeded(
        seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(salt.wrapping_mul(0xD1B5_4A32_D192_ED03))
            .wrapping_add(index as u64),
    )
}

/// Random pure or mixed state (sometimes real) in dimension 2 to 4.
fn any_state(rng: &mut SeededRng) -> DensityMatrix {
    let d = rng.random_range(2..=4);
    match rng.random_range(0..4) {
        0 => random_pure(rng, d).density(),
        1 => random_real_density(rng, d),
        _ => random_density(rng, d),
    }
}

fn gl(rho: &DensityMatrix) -> Result<f64> {
    measure_mixed(rho, MeasureKind::GeometricLike)
}

/// Largest `|oracle - closed form|` for `M_gl`, with 20 restarts and
/// ensembles of twice the dimension.
pub fn roof_oracle_agreement(qubits: usize, qutrits: usize, seed: u64) -> Result<Check> {
    let mut worst: f64 = 0.0;
    let mut below: f64 = 0.0;
    for i in 0..qubits + qutrits {
        let d = if i < qubits { 2 } else { 3 };
        let mut rng = stream(seed, 1, i);
        let rho = random_density(&mut rng, d);
        let closed = gl(&rho)?;
        let oracle = convex_roof_oracle(&rho, MeasureKind::GeometricLike, DEFAULT_RESTARTS, 2 * d, rng.random())?;
        worst = worst.max((oracle.value - closed).abs());
        below = below.max(closed - oracle.value);
    }
    Ok(Check::at_most(
        "roof",
        "convex roof oracle vs closed form (gl)",
        worst,
        1e-5,
        format!("{qubits} qubits, {qutrits} qutrits, max undershoot {below:.1e}"),
    ))
}

/// `M_gl = 1 - √(1 - M_g)` on pure and mixed states.
pub fn bridge_identity(count: usize, seed: u64) -> Result<Check> {
    let mut worst: f64 = 0.0;
    for i in 0..count {
        let rho = any_state(&mut stream(seed, 2, i));
        let g = measure_mixed(&rho, MeasureKind::Geometric)?;
        worst = worst.max((gl(&rho)? - (1.0 - (1.0 - g).sqrt())).abs());
        if let Some(psi) = rho.as_pure(1e-12) {
            let gp = measure_pure(&psi, MeasureKind::Geometric);
            let glp = measure_pure(&psi, MeasureKind::GeometricLike);
            worst = worst.max((glp - (1.0 - (1.0 - gp).sqrt())).abs());
            worst = worst.max((glp - geometric_like_from_geometric(gp)).abs());
        }
    }
    Ok(Check::at_most(
        "roof",
        "bridge identity",
        worst,
        1e-10,
        format!("{count} states"),
    ))
}

/// Reconstruction and roof attainment of both constructive decompositions.
pub fn decompositions(count: usize, seed: u64) -> Result<Vec<Check>> {
    let (mut rec, mut opt, mut eq): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for i in 0..count {
        let rho = any_state(&mut stream(seed, 3, i));
        let r = transpose_fidelity(&rho)?;
        let target = gl(&rho)?;
        let o = optimal_decomposition(&rho)?;
        rec = rec.max(o.density_matrix().max_abs_diff(rho.matrix()));
        opt = opt.max((o.average(|m| m.witness()) - r).abs());
        let e = equalized_decomposition(&rho)?;
        rec = rec.max(e.density_matrix().max_abs_diff(rho.matrix()));
        for m in &e.members {
            eq = eq.max((measure_pure(m, MeasureKind::GeometricLike) - target).abs());
        }
    }
    let note = format!("{count} states");
    Ok(vec![
        Check::at_most("roof", "decomposition reconstruction", rec, 1e-9, note.clone()),
        Check::at_most("roof", "optimal decomposition witness sum", opt, 1e-8, note.clone()),
        Check::at_most("roof", "equalized members at roof value (gl)", eq, 1e-7, note),
    ])
}

/// Zero exactly on real states: real states measure at most `1e-8` and
/// states with imaginary entries above `1e-8` measure strictly positive.
pub fn faithfulness(count: usize, seed: u64) -> Result<Check> {
    let mut worst: f64 = 0.0;
    for i in 0..count {
        let mut rng = stream(seed, 4, i);
        let rho = any_state(&mut rng);
        for kind in MeasureKind::ALL {
            let m = measure_mixed(&rho, kind)?;
            let real = is_real_state(&rho, 1e-8);
            // A miss counts as the full range of the measure.
            let miss = if real {
                m
            } else if m > 0.0 {
                0.0
            } else {
                kind.max_value()
            };
            worst = worst.max(miss);
        }
    }
    Ok(Check::at_most(
        "monotonicity",
        "M1 zero iff real",
        worst,
        1e-8,
        format!("{count} states"),
    ))
}

/// `M(O ρ Oᵀ) = M(ρ)` for real orthogonal `O`.
pub fn orthogonal_invariance(count: usize, seed: u64) -> Result<Check> {
    let mut worst: f64 = 0.0;
    for i in 0..count {
        let mut rng = stream(seed, 5, i);
        let rho = any_state(&mut rng);
        let o = random_orthogonal(&mut rng, rho.dim());
        let rotated = DensityMatrix::new(o.sandwich(rho.matrix()).hermitian_part())?;
        for kind in MeasureKind::ALL {
            worst = worst.max((measure_mixed(&rotated, kind)? - measure_mixed(&rho, kind)?).abs());
        }
    }
    Ok(Check::at_most(
        "monotonicity",
        "real orthogonal invariance",
        worst,
        1e-9,
        format!("{count} states"),
    ))
}

/// (M2) `M(Φ(ρ)) ≤ M(ρ)` and (M3) `Σ p_j M(ρ_j) ≤ M(ρ)` over random real
/// channels with 1 to 4 Kraus operators.
pub fn monotonicity(count: usize, seed: u64) -> Result<Vec<Check>> {
    let mut m2 = [0.0f64; 2];
    let mut m3 = [0.0f64; 2];
    for i in 0..count {
        let mut rng = stream(seed, 6, i);
        let rho = any_state(&mut rng);
        let channel = random_real_channel(rho.dim(), rng.random_range(1..=4), rng.random())?;
        let out = apply(&channel, &rho)?;
        let branches = apply_stochastic(&channel, &rho)?;
        for (k, kind) in MeasureKind::ALL.into_iter().enumerate() {
            let before = measure_mixed(&rho, kind)?;
            m2[k] = m2[k].max(measure_mixed(&out, kind)? - before);
            let mut avg = 0.0;
            for (p, s) in &branches {
                avg += p * measure_mixed(s, kind)?;
            }
            m3[k] = m3[k].max(avg - before);
        }
    }
    let note = format!("{count} channel/state pairs");
    let mut checks = Vec::new();
    for (k, kind) in MeasureKind::ALL.into_iter().enumerate() {
        let name = kind.short_name();
        checks.push(Check::at_most(
            "monotonicity",
            format!("M2 monotonicity ({name})"),
            m2[k],
            1e-9,
            note.clone(),
        ));
        checks.push(Check::at_most(
            "monotonicity",
            format!("M3 strong monotonicity ({name})"),
            m3[k],
            1e-9,
            note.clone(),
        ));
    }
    Ok(checks)
}

/// (M4) `M(Σ p_j ρ_j) ≤ Σ p_j M(ρ_j)` over random ensembles of 2 to 4 states.
pub fn convexity(count: usize, seed: u64) -> Result<Vec<Check>> {
    let mut worst = [0.0f64; 2];
    for i in 0..count {
        let mut rng = stream(seed, 7, i);
        let d = rng.random_range(2..=4);
        let n = rng.random_range(2..=4);
        let mut weights: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 1e-3).collect();
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        let states: Vec<DensityMatrix> = (0..n)
            .map(|_| {
                if rng.random_bool(0.5) {
                    random_pure(&mut rng, d).density()
                } else {
                    random_density(&mut rng, d)
                }
            })
            .collect();
        let mix = weights
            .iter()
            .zip(&states)
            .fold(ComplexMatrix::zeros(d), |acc, (w, s)| &acc + &s.matrix().scale_real(*w));
        let mix = DensityMatrix::new(mix)?;
        for (k, kind) in MeasureKind::ALL.into_iter().enumerate() {
            let mut avg = 0.0;
            for (w, s) in weights.iter().zip(&states) {
                avg += w * measure_mixed(s, kind)?;
            }
            worst[k] = worst[k].max(measure_mixed(&mix, kind)? - avg);
        }
    }
    Ok(MeasureKind::ALL
        .into_iter()
        .enumerate()
        .map(|(k, kind)| {
            Check::at_most(
                "monotonicity",
                format!("M4 convexity ({})", kind.short_name()),
                worst[k],
                1e-9,
                format!("{count} ensembles"),
            )
        })
        .collect())
}

pub const NOISE_FAMILIES: [NoiseKind; 3] = [
    NoiseKind::BitFlip(0.0),
    NoiseKind::PhaseDamping(0.0),
    NoiseKind::AmplitudeDamping(0.0),
];

/// Name used in reports, e.g. "bit flip".
pub fn family_name(kind: NoiseKind) -> &'static str {
    match kind {
        NoiseKind::BitFlip(_) => "bit flip",
        NoiseKind::PhaseDamping(_) => "phase damping",
        NoiseKind::AmplitudeDamping(_) => "amplitude damping",
    }
}

/// Closed-form decay against simulation on an `n × n` grid, plus the
/// dominance of `ΔM_g` over `ΔM_gl`.
pub fn decay(n: usize) -> Result<Vec<Check>> {
    if n < 3 {
        return Err(Error::BadParameter(format!("decay grid {n} is below 3")));
    }
    let at = |i: usize| i as f64 / (n - 1) as f64;
    let mut checks = Vec::new();
    for family in NOISE_FAMILIES {
        let fname = family_name(family);
        let mut diff = [0.0f64; 2];
        let mut dominance: f64 = f64::NEG_INFINITY;
        for i in 0..n {
            for j in 0..n {
                let kind = family.with_parameter(at(j));
                let mut closed = [0.0; 2];
                for (k, m) in MeasureKind::ALL.into_iter().enumerate() {
                    closed[k] = decay_closed_form(kind, at(i), m)?;
                    diff[k] = diff[k].max((closed[k] - decay_simulated(kind, at(i), m)?).abs());
                }
                dominance = dominance.max(closed[0] - closed[1]);
            }
        }
        for (k, m) in MeasureKind::ALL.into_iter().enumerate() {
            checks.push(Check::at_most(
                "decay",
                format!("{fname} closed form vs simulation ({})", m.short_name()),
                diff[k],
                1e-9,
                format!("{n}x{n} grid"),
            ));
        }
        checks.push(Check::at_most(
            "decay",
            format!("{fname} dominance, max of dM_gl - dM_g"),
            dominance,
            1e-12,
            format!("{n}x{n} grid"),
        ));
        let mid = family.with_parameter(0.5);
        let gap = decay_closed_form(mid, 0.5, MeasureKind::Geometric)?
            - decay_closed_form(mid, 0.5, MeasureKind::GeometricLike)?;
        checks.push(Check::above(
            "decay",
            format!("{fname} strict dominance at A = 0.5, parameter = 0.5"),
            gap,
            0.0,
            "",
        ));
    }
    Ok(checks)
}

/// Second differences of the closed forms: concave along the channel
/// parameter and convex along `A`.
pub fn decay_shape(n: usize) -> Result<Vec<Check>> {
    if n < 3 {
        return Err(Error::BadParameter(format!("decay grid {n} is below 3")));
    }
    let at = |i: usize| i as f64 / (n - 1) as f64;
    let mut checks = Vec::new();
    for family in NOISE_FAMILIES {
        for m in MeasureKind::ALL {
            let mut grid = vec![vec![0.0; n]; n];
            for (i, row) in grid.iter_mut().enumerate() {
                for (j, v) in row.iter_mut().enumerate() {
                    *v = decay_closed_form(family.with_parameter(at(j)), at(i), m)?;
                }
            }
            let (mut concave, mut convex) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
            // Rows run along the parameter, columns along A.
            for row in &grid {
                for w in row.windows(3) {
                    concave = concave.max(w[0] - 2.0 * w[1] + w[2]);
                }
            }
            for rows in grid.windows(3) {
                for ((a, b), c) in rows[0].iter().zip(&rows[1]).zip(&rows[2]) {
                    convex = convex.max(-(a - 2.0 * b + c));
                }
            }
            let fname = family_name(family);
            let name = m.short_name();
            checks.push(Check::at_most(
                "decay",
                format!("{fname} concave in parameter ({name})"),
                concave,
                1e-9,
                "max second difference",
            ));
            checks.push(Check::at_most(
                "decay",
                format!("{fname} convex in A ({name})"),
                convex,
                1e-9,
                "max negative second difference",
            ));
        }
    }
    Ok(checks)
}

/// Filter branch probability against the pure-state formula and branch
/// witness against the target, on an `n × n` grid with `A_source > A_target`.
pub fn filter_achievability(n: usize) -> Result<Vec<Check>> {
    let at = |i: usize| i as f64 / (n - 1) as f64;
    let (mut prob, mut wit): (f64, f64) = (0.0, 0.0);
    let mut worst_pair = (0.0, 0.0, 0.0, 0.0);
    let mut pairs = 0;
    for i in 0..n {
        for j in 0..n {
            let (s, t) = (at(i), at(j));
            if s <= t {
                continue;
            }
            pairs += 1;
            let f = filter_protocol(s, t)?;
            let formula = pure_to_pure_probability(&PureState::canonical(s)?, &PureState::canonical(t)?)?.probability;
            if (f.probability - formula).abs() > prob {
                prob = (f.probability - formula).abs();
                worst_pair = (s, t, f.probability, formula);
            }
            if f.probability > 0.0 {
                wit = wit.max((f.output_witness - t).abs());
            }
        }
    }
    let (s, t, p, q) = worst_pair;
    Ok(vec![
        Check::at_most(
            "conversion",
            "filter probability vs pure-state formula",
            prob,
            1e-8,
            format!("{pairs} pairs; worst A_s={s:.4} A_t={t:.4}: filter {p:.6}, formula {q:.6}"),
        ),
        Check::at_most(
            "conversion",
            "filter output witness vs target",
            wit,
            1e-9,
            format!("{pairs} pairs"),
        ),
    ])
}

/// On rank-one targets the pure-to-mixed value, the pure-to-pure value and
/// the `M_gl` ratio bound coincide.
pub fn pure_target_consistency(count: usize, seed: u64) -> Result<Check> {
    let mut worst: f64 = 0.0;
    for i in 0..count {
        let mut rng = stream(seed, 8, i);
        let d = rng.random_range(2..=4);
        let psi = random_pure(&mut rng, d);
        let phi = random_pure(&mut rng, d);
        let mixed = pure_to_mixed_probability(&psi, &phi.density())?.probability;
        let pure = pure_to_pure_probability(&psi, &phi)?.probability;
        let bound = conversion_bound(&psi.density(), &phi.density(), MeasureKind::GeometricLike)?.probability;
        worst = worst
            .max((mixed - pure).abs())
            .max((pure - bound).abs())
            .max((mixed - bound).abs());
    }
    Ok(Check::at_most(
        "conversion",
        "pure-to-mixed = pure-to-pure = bound on rank-one targets",
        worst,
        1e-10,
        format!("{count} pairs"),
    ))
}

/// Constructed minimizers and rejection-sampled ball members.
pub fn fidelity_ball_extremes(count: usize, fidelities: &[f64], samples: usize, seed: u64) -> Result<Vec<Check>> {
    let (mut fid, mut value, mut below, mut above): (f64, f64, f64, f64) =
        (0.0, 0.0, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for i in 0..count {
        let mut rng = stream(seed, 9, i);
        let rho = random_density(&mut rng, 2);
        let psi = random_pure(&mut rng, 2);
        for &f in fidelities {
            let ball = FidelityBall::new(rho.clone(), f)?;
            let (min_value, witness) = min_mgl_fidelity_ball(&ball)?;
            let r = root_fidelity(&rho, &witness)?;
            fid = fid.max(f - r * r);
            value = value.max((gl(&witness)? - min_value).abs());
            for s in sample_fidelity_ball(&ball, samples, &mut rng)? {
                below = below.max(min_value - gl(&s)?);
            }

            let pure_ball = FidelityBall::new(psi.density(), f)?;
            let (max_value, _) = max_mgl_fidelity_ball(&psi, f)?;
            for s in sample_fidelity_ball(&pure_ball, samples, &mut rng)? {
                above = above.max(gl(&s)? - max_value);
            }
        }
    }
    let note = format!("{count} states x {} fidelities", fidelities.len());
    let sampled = format!("{note}, {samples} samples per ball");
    Ok(vec![
        Check::at_most("conversion", "minimizer fidelity shortfall", fid, 1e-9, note.clone()),
        Check::at_most("conversion", "minimizer M_gl vs closed-form minimum", value, 1e-7, note),
        Check::at_most(
            "conversion",
            "sampled ball members below minimum",
            below,
            1e-6,
            sampled.clone(),
        ),
        Check::at_most(
            "conversion",
            "sampled pure-center ball members above maximum",
            above,
            1e-6,
            sampled,
        ),
    ])
}

/// Random real sub-normalized qubit channel: the first `n` operators of a
/// random real channel with `n + 1` operators.
pub fn random_real_filter(rng: &mut SeededRng) -> Result<KrausChannel> {
    let n = rng.random_range(1..=3);
    let full = random_real_channel(2, n + 1, rng.random())?;
    KrausChannel::new(full.kraus_ops()[..n].to_vec(), Completeness::SubNormalized)
}

/// Soundness of the stochastic-approximate probability against random real
/// filters, its monotonicity in `f`, and its `f = 1` limit.
pub fn approximate_conversion(triples: usize, channels: usize, seed: u64) -> Result<Vec<Check>> {
    let (mut excess, mut rising, mut limit): (f64, f64, f64) = (f64::NEG_INFINITY, 0.0, 0.0);
    let mut feasible = 0usize;
    for i in 0..triples {
        let mut rng = stream(seed, 10, i);
        let psi = random_pure(&mut rng, 2);
        let rho = random_density(&mut rng, 2);
        let f = 0.9 + 0.1 * rng.random::<f64>();
        let p_f = stochastic_approx_probability(&psi, &rho, f)?.probability;
        for _ in 0..channels {
            let filter = random_real_filter(&mut rng)?;
            if let Some((p, fo)) = filter_outcome(&filter, &psi, &rho)? {
                if fo >= f {
                    feasible += 1;
                    excess = excess.max(p - p_f);
                }
            }
        }
        let mut last = f64::NEG_INFINITY;
        for step in 0..=50 {
            let fs = 0.5 + 0.01 * step as f64;
            let p = stochastic_approx_probability(&psi, &rho, fs)?.probability;
            // P_f must not rise as f grows.
            if last.is_finite() {
                rising = rising.max(p - last);
            }
            last = p;
        }
        let at_one = stochastic_approx_probability(&psi, &rho, 1.0)?.probability;
        limit = limit.max((at_one - pure_to_mixed_probability(&psi, &rho)?.probability).abs());
    }
    let note = format!("{triples} triples x {channels} filters, {feasible} met the fidelity");
    Ok(vec![
        Check::at_most(
            "conversion",
            "random filters exceeding approximate probability",
            excess.max(0.0),
            1e-6,
            note,
        ),
        Check::at_most(
            "conversion",
            "approximate probability rising in f",
            rising,
            0.0,
            format!("{triples} triples"),
        ),
        Check::at_most(
            "conversion",
            "approximate probability at f = 1 vs exact",
            limit,
            1e-10,
            format!("{triples} triples"),
        ),
    ])
}
