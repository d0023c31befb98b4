//! Validated pure and mixed states, pure-state ensembles, the imaginarity
//! witness `A = |⟨ψ*|ψ⟩|` and the real-orthogonal canonical form.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::numerics::{bilinear, eig_hermitian, inner, norm_sqr, ComplexMatrix};
use crate::tol;

/// Normalized state vector with its witness `|Σ_j ψ_j²|` cached.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
    witness: f64,
}

impl PureState {
    /// Accepts vectors whose norm is within [`tol::NORM`] of one.
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let norm = norm_sqr(&amplitudes).sqrt();
        if amplitudes.is_empty() || (norm - 1.0).abs() > tol::NORM {
            return Err(Error::NotNormalized(norm));
        }
        Self::normalized(amplitudes)
    }

    /// Rescales any nonzero vector to unit norm.
    pub fn normalized(mut amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = norm_sqr(&amplitudes).sqrt();
        if amplitudes.is_empty() || norm == 0.0 {
            return Err(Error::NotNormalized(norm));
        }
        for z in &mut amplitudes {
            *z /= norm;
        }
        let witness = bilinear(&amplitudes, &amplitudes).norm().min(1.0);
        Ok(Self { amplitudes, witness })
    }

    /// The qubit state `√((1+A)/2)|0⟩ + i√((1-A)/2)|1⟩`.
    pub fn canonical(witness: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&witness) {
            return Err(Error::BadParameter(format!("witness {witness} outside [0, 1]")));
        }
        Self::normalized(vec![
            C64::new(((1.0 + witness) / 2.0).sqrt(), 0.0),
            C64::new(0.0, ((1.0 - witness) / 2.0).sqrt()),
        ])
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = vec![C64::new(0.0, 0.0); dim];
        v[k] = C64::new(1.0, 0.0);
        Self::normalized(v).expect("basis vector")
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn witness(&self) -> f64 {
        self.witness
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix {
            matrix: ComplexMatrix::outer(&self.amplitudes),
        }
    }

    /// |⟨self|other⟩|²
    pub fn fidelity(&self, other: &PureState) -> f64 {
        inner(&self.amplitudes, &other.amplitudes).norm_sqr()
    }
}

/// `|Σ_j ψ_j²|`, invariant under global phases and real orthogonal maps.
pub fn imaginarity_witness(psi: &PureState) -> f64 {
    psi.witness()
}

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        validate_density(&matrix)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// ρᵀ, which is again a state.
    pub fn transpose(&self) -> Self {
        Self {
            matrix: self.matrix.transpose(),
        }
    }

    /// The unit-norm support vector if the state is pure to within `tol`
    /// (largest eigenvalue at least `1 - tol`).
    pub fn as_pure(&self, tol: f64) -> Option<PureState> {
        let eig = eig_hermitian(&self.matrix).ok()?;
        if eig.eigenvalues[0] < 1.0 - tol {
            return None;
        }
        PureState::normalized(eig.eigenvector(0)).ok()
    }
}

/// Validates a candidate density matrix. Eigenvalues in `[-1e-10, 0)` are
/// clamped and a trace drift up to `1e-10` is renormalized away.
pub fn validate_density(m: &ComplexMatrix) -> Result<DensityMatrix> {
    let defect = m.hermiticity_defect();
    if defect > tol::HERMITIAN {
        return Err(Error::NotHermitian(defect));
    }
    let h = m.hermitian_part();
    let trace = h.trace().re;
    if (trace - 1.0).abs() > tol::TRACE {
        return Err(Error::BadTrace(trace));
    }
    let eig = eig_hermitian(&h)?;
    let min = *eig.eigenvalues.last().expect("nonempty spectrum");
    if min < -tol::PSD_CLAMP {
        return Err(Error::NotPsd(min));
    }
    let matrix = if min < 0.0 {
        let clamped = eig.reconstruct_with(|x| x.max(0.0)).hermitian_part();
        let t = clamped.trace().re;
        clamped.scale_real(1.0 / t)
    } else if trace != 1.0 {
        h.scale_real(1.0 / trace)
    } else {
        h
    };
    Ok(DensityMatrix { matrix })
}

/// True iff every entry has `|Im ρ_jk| ≤ tol`.
pub fn is_real_state(rho: &DensityMatrix, tol: f64) -> bool {
    rho.matrix.max_abs_imag() <= tol
}

/// Real orthogonal `O` and global phase `g` with
/// `O (g ψ) = √((1+A)/2)|0⟩ + i√((1-A)/2)|1⟩` (zero-padded).
#[derive(Debug, Clone)]
pub struct CanonicalForm {
    /// Real orthogonal matrix (stored with zero imaginary parts).
    pub orthogonal: ComplexMatrix,
    /// The two-level image, `PureState::canonical(A)`.
    pub embedding: PureState,
    /// Unit phase making `Σ (gψ_j)²` real and nonnegative.
    pub phase: C64,
}

impl CanonicalForm {
    /// `ḡ Oᵀ (cos β|0⟩ + i sin β|1⟩)`: the state with the same real frame as
    /// ψ but imaginarity angle `β`. `β = arccos √((1+A)/2)` recovers ψ.
    pub fn with_angle(&self, beta: f64) -> PureState {
        let n = self.orthogonal.dim();
        let (c, s) = (beta.cos(), beta.sin());
        let g = self.phase.conj();
        let v: Vec<C64> = (0..n)
            .map(|i| {
                let o0 = self.orthogonal[(0, i)].re;
                let o1 = self.orthogonal[(1, i)].re;
                g * C64::new(c * o0, s * o1)
            })
            .collect();
        PureState::normalized(v).expect("rotation of unit vectors")
    }

    /// Imaginarity angle `α` with `cos α = √((1+A)/2)`.
    pub fn angle(&self) -> f64 {
        self.embedding.amplitudes()[1]
            .im
            .atan2(self.embedding.amplitudes()[0].re)
    }
}

pub fn canonical_form(psi: &PureState) -> Result<CanonicalForm> {
    let n = psi.dim();
    if n < 2 {
        return Err(Error::DegenerateDimension);
    }
    let square_sum = bilinear(psi.amplitudes(), psi.amplitudes());
    let phase = C64::from_polar(1.0, -0.5 * square_sum.arg());
    let x: Vec<f64> = psi.amplitudes().iter().map(|z| (z * phase).re).collect();
    let y: Vec<f64> = psi.amplitudes().iter().map(|z| (z * phase).im).collect();

    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n);
    push_orthonormal(&mut rows, x);
    let y_norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    if y_norm > 1e-12 {
        push_orthonormal(&mut rows, y);
    }
    for k in 0..n {
        if rows.len() == n {
            break;
        }
        let mut e = vec![0.0; n];
        e[k] = 1.0;
        push_orthonormal(&mut rows, e);
    }
    let mut orthogonal = ComplexMatrix::zeros(n);
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            orthogonal[(i, j)] = C64::new(v, 0.0);
        }
    }
    Ok(CanonicalForm {
        orthogonal,
        embedding: PureState::canonical(psi.witness())?,
        phase,
    })
}

/// Real Gram-Schmidt step; keeps `v` only if a sizeable part survives.
fn push_orthonormal(rows: &mut Vec<Vec<f64>>, mut v: Vec<f64>) {
    for _ in 0..2 {
        for r in rows.iter() {
            let c: f64 = r.iter().zip(&v).map(|(a, b)| a * b).sum();
            for (x, a) in v.iter_mut().zip(r) {
                *x -= c * a;
            }
        }
    }
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 1e-6 {
        rows.push(v.into_iter().map(|x| x / norm).collect());
    }
}

/// Pure-state decomposition `ρ = Σ_j p_j |ψ_j⟩⟨ψ_j|`.
#[derive(Debug, Clone)]
pub struct Ensemble {
    pub weights: Vec<f64>,
    pub members: Vec<PureState>,
}

impl Ensemble {
    pub fn single(psi: PureState) -> Self {
        Self {
            weights: vec![1.0],
            members: vec![psi],
        }
    }

    /// Builds an ensemble from subnormalized vectors `√p_j |ψ_j⟩`, dropping
    /// members with `p_j` below [`tol::ZERO_WEIGHT`].
    pub fn from_unnormalized(vectors: &[Vec<C64>]) -> Self {
        let mut weights = Vec::new();
        let mut members = Vec::new();
        for v in vectors {
            let p = norm_sqr(v);
            if p < tol::ZERO_WEIGHT {
                continue;
            }
            weights.push(p);
            members.push(PureState::normalized(v.clone()).expect("nonzero member"));
        }
        let total: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= total;
        }
        Self { weights, members }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `Σ_j p_j |ψ_j⟩⟨ψ_j|` (unvalidated).
    pub fn density_matrix(&self) -> ComplexMatrix {
        let dim = self.members[0].dim();
        let mut out = ComplexMatrix::zeros(dim);
        for (p, m) in self.weights.iter().zip(&self.members) {
            out = &out + &ComplexMatrix::outer(m.amplitudes()).scale_real(*p);
        }
        out
    }

    /// `Σ_j p_j f(ψ_j)`
    pub fn average(&self, f: impl Fn(&PureState) -> f64) -> f64 {
        self.weights.iter().zip(&self.members).map(|(p, m)| p * f(m)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn maximally_mixed_is_valid() {
        let m = ComplexMatrix::identity(2).scale_real(0.5);
        let rho = validate_density(&m).unwrap();
        assert_eq!(rho.matrix(), &m);
    }

    #[test]
    fn trace_two_rejected() {
        let m = ComplexMatrix::identity(2);
        assert!(matches!(validate_density(&m), Err(Error::BadTrace(t)) if t == 2.0));
    }

    #[test]
    fn negative_eigenvalue_rejected() {
        let m = ComplexMatrix::from_real_rows(&[&[0.5, 0.6], &[0.6, 0.5]]);
        match validate_density(&m) {
            Err(Error::NotPsd(l)) => assert!((l + 0.1).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = ComplexMatrix::from_rows(&[vec![c(0.5, 0.0), c(0.0, 0.5)], vec![c(0.0, 0.5), c(0.5, 0.0)]]);
        assert!(matches!(validate_density(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn roundoff_negatives_clamped() {
        let m = ComplexMatrix::diag(&[1.0 + 5e-11, -5e-11]);
        let rho = validate_density(&m).unwrap();
        let eig = eig_hermitian(rho.matrix()).unwrap();
        assert!(eig.eigenvalues[1] >= 0.0);
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn witness_examples() {
        let real = PureState::normalized(vec![c(0.6, 0.0), c(0.0, 0.0), c(-0.8, 0.0)]).unwrap();
        assert!((real.witness() - 1.0).abs() < 1e-15);
        let plus_i = PureState::normalized(vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert!(plus_i.witness() < 1e-15);
        let t = PI / 6.0;
        let theta = PureState::new(vec![c(t.cos(), 0.0), c(0.0, t.sin())]).unwrap();
        assert!((theta.witness() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn new_rejects_unnormalized() {
        assert!(matches!(
            PureState::new(vec![c(1.0, 0.0), c(1.0, 0.0)]),
            Err(Error::NotNormalized(_))
        ));
    }

    fn check_canonical(psi: &PureState) -> CanonicalForm {
        let cf = canonical_form(psi).unwrap();
        let o = &cf.orthogonal;
        assert!(o.max_abs_imag() == 0.0);
        let oto = &o.transpose() * o;
        assert!(oto.max_abs_diff(&ComplexMatrix::identity(psi.dim())) < 1e-10);
        let rotated: Vec<C64> = psi.amplitudes().iter().map(|z| z * cf.phase).collect();
        let image = o.mul_vec(&rotated);
        let a = psi.witness();
        let expected = [((1.0 + a) / 2.0).sqrt(), ((1.0 - a) / 2.0).sqrt()];
        assert!((image[0] - c(expected[0], 0.0)).norm() < 1e-9);
        assert!((image[1] - c(0.0, expected[1])).norm() < 1e-9);
        for z in &image[2..] {
            assert!(z.norm() < 1e-9);
        }
        let back = cf.with_angle(cf.angle());
        assert!(back.fidelity(psi) > 1.0 - 1e-9);
        cf
    }

    #[test]
    fn canonical_of_canonical_state() {
        let psi = PureState::new(vec![c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2)]).unwrap();
        let cf = check_canonical(&psi);
        assert!((cf.embedding.amplitudes()[1] - c(0.0, FRAC_1_SQRT_2)).norm() < 1e-15);
    }

    #[test]
    fn canonical_of_real_state_is_ket_zero() {
        let psi = PureState::new(vec![c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)]).unwrap();
        let cf = check_canonical(&psi);
        assert_eq!(cf.embedding.amplitudes(), &[c(1.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn canonical_qutrit() {
        let s = 1.0 / 3f64.sqrt();
        let psi = PureState::new(vec![c(s, 0.0), c(0.0, s), c(s, 0.0)]).unwrap();
        assert!((psi.witness() - 1.0 / 3.0).abs() < 1e-15);
        let cf = check_canonical(&psi);
        let e = cf.embedding.amplitudes();
        assert!((e[0].re - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((e[1].im - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn canonical_needs_two_levels() {
        let psi = PureState::new(vec![c(0.0, 1.0)]).unwrap();
        assert!(matches!(canonical_form(&psi), Err(Error::DegenerateDimension)));
    }

    #[test]
    fn reality_predicate() {
        assert!(is_real_state(&DensityMatrix::maximally_mixed(2), tol::REALITY));
        let m = ComplexMatrix::from_rows(&[vec![c(0.5, 0.0), c(0.0, 0.5)], vec![c(0.0, -0.5), c(0.5, 0.0)]]);
        let rho = DensityMatrix::new(m).unwrap();
        assert!(!is_real_state(&rho, tol::REALITY));
        let real = DensityMatrix::new(ComplexMatrix::from_real_rows(&[&[0.7, 0.2], &[0.2, 0.3]])).unwrap();
        assert!(is_real_state(&real.transpose(), tol::REALITY));
    }

    #[test]
    fn ensemble_drops_light_members() {
        let e = Ensemble::from_unnormalized(&[
            vec![c(FRAC_1_SQRT_2, 0.0), c(0.0, 0.0)],
            vec![c(1e-7, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, FRAC_1_SQRT_2)],
        ]);
        assert_eq!(e.len(), 2);
        assert!(
            e.density_matrix()
                .max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.5))
                < 1e-12
        );
    }
}
