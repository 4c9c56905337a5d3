//! Pure and mixed states over a [`DimSpec`], with the standard test families.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::Exp1;

use crate::error::{bail_arg, bail_shape, Error, Result};
use crate::linalg::{
    hermitian_eig, kron_all, partial_trace, random::complex_gaussian, random_ginibre,
    ComplexMatrix, DimSpec,
};

/// Tolerance applied to all state invariants at construction.
pub const STATE_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    dims: DimSpec,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Normalizes `coeffs` into a state. Rejects zero vectors and length mismatches.
    pub fn from_coeffs(dims: DimSpec, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != dims.total() {
            bail_arg!(
                "dims {} need {} coefficients, got {}",
                dims,
                dims.total(),
                coeffs.len()
            );
        }
        if coeffs.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            bail_arg!("coefficients must be finite");
        }
        let norm = coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            bail_arg!("cannot normalize the zero vector");
        }
        let amplitudes = coeffs.into_iter().map(|z| z / norm).collect();
        Ok(PureState { dims, amplitudes })
    }

    /// Accepts already-normalized amplitudes (within [`STATE_TOL`]) without rescaling.
    pub fn from_normalized(dims: DimSpec, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != dims.total() {
            bail_shape!("dims {} need {} amplitudes, got {}", dims, dims.total(), amplitudes.len());
        }
        let norm2 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>();
        if (norm2.sqrt() - 1.0).abs() > STATE_TOL {
            bail_arg!("state is not normalized (norm {:.12})", norm2.sqrt());
        }
        Ok(PureState { dims, amplitudes })
    }

    pub fn dims(&self) -> &DimSpec {
        &self.dims
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn conj_amplitudes(&self) -> Vec<Complex64> {
        self.amplitudes.iter().map(|z| z.conj()).collect()
    }

    /// Rank-one projector `|ψ⟩⟨ψ|`.
    pub fn projector(&self) -> ComplexMatrix {
        let a = &self.amplitudes;
        ComplexMatrix::from_fn(a.len(), a.len(), |r, c| a[r] * a[c].conj())
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix {
            dims: self.dims.clone(),
            matrix: self.projector(),
        }
    }

    /// Reduced state of a single subsystem (0-based).
    pub fn marginal(&self, k: usize) -> Result<ComplexMatrix> {
        reduced_from_amplitudes(&self.amplitudes, &self.dims, k)
    }

    /// `(U₁⊗…⊗U_N)|ψ⟩`.
    pub fn apply_local_unitary(&self, unitaries: &[ComplexMatrix]) -> Result<Self> {
        let u = local_operator(&self.dims, unitaries)?;
        let v = &u * &ComplexMatrix::column(&self.amplitudes);
        Ok(PureState {
            dims: self.dims.clone(),
            amplitudes: v.into_vec(),
        })
    }

    /// Same amplitudes viewed under a different factorization of the same total dimension.
    pub fn with_dims(&self, dims: DimSpec) -> Result<Self> {
        if dims.total() != self.dims.total() {
            bail_shape!("cannot view dims {} as {}", self.dims, dims);
        }
        Ok(PureState {
            dims,
            amplitudes: self.amplitudes.clone(),
        })
    }
}

/// Reduced density matrix of subsystem `k`, computed straight from amplitudes:
/// `ρ_k[m, m'] = Σ_rest a[m, rest] ā[m', rest]`.
pub(crate) fn reduced_from_amplitudes(amps: &[Complex64], dims: &DimSpec, k: usize) -> Result<ComplexMatrix> {
    if k >= dims.parties() {
        bail_arg!("subsystem {} out of range for {} parties", k + 1, dims.parties());
    }
    let dk = dims.dims()[k];
    let mut out = ComplexMatrix::zeros(dk, dk);
    let inner: usize = dims.dims()[k + 1..].iter().product();
    let outer: usize = dims.dims()[..k].iter().product();
    for o in 0..outer {
        for i in 0..inner {
            for m in 0..dk {
                let a = amps[(o * dk + m) * inner + i];
                for mp in 0..dk {
                    let b = amps[(o * dk + mp) * inner + i];
                    out[(m, mp)] += a * b.conj();
                }
            }
        }
    }
    Ok(out)
}

fn local_operator(dims: &DimSpec, unitaries: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    if unitaries.len() != dims.parties() {
        bail_shape!(
            "need {} local unitaries, got {}",
            dims.parties(),
            unitaries.len()
        );
    }
    for (k, (u, &d)) in unitaries.iter().zip(dims.dims()).enumerate() {
        if !u.is_square() || u.rows() != d {
            bail_shape!("unitary {} is {}x{}, subsystem has dimension {d}", k + 1, u.rows(), u.cols());
        }
    }
    kron_all(unitaries)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dims: DimSpec,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity, each within [`STATE_TOL`].
    pub fn new(dims: DimSpec, matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() != dims.total() {
            bail_shape!(
                "matrix is {}x{} but dims {} need side {}",
                matrix.rows(),
                matrix.cols(),
                dims,
                dims.total()
            );
        }
        let herm = matrix.distance(&matrix.adjoint());
        if herm > STATE_TOL {
            return Err(Error::NotDensityMatrix(format!("not Hermitian (deviation {herm:.3e})")));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::NotDensityMatrix(format!("trace is {tr}, expected 1")));
        }
        let eig = hermitian_eig(&matrix)?;
        let min = eig.values.last().copied().unwrap_or(0.0);
        if min < -STATE_TOL {
            return Err(Error::NotDensityMatrix(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(DensityMatrix { dims, matrix })
    }

    pub(crate) fn new_unchecked(dims: DimSpec, matrix: ComplexMatrix) -> Self {
        DensityMatrix { dims, matrix }
    }

    pub fn dims(&self) -> &DimSpec {
        &self.dims
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eig(&self.matrix)
            .map(|e| e.values)
            .expect("validated density matrix is Hermitian")
    }

    pub fn reduced(&self, keep: &[usize]) -> Result<ComplexMatrix> {
        partial_trace(&self.matrix, &self.dims, keep)
    }

    /// `(U₁⊗…⊗U_N) ρ (U₁⊗…⊗U_N)†`.
    pub fn apply_local_unitary(&self, unitaries: &[ComplexMatrix]) -> Result<Self> {
        let u = local_operator(&self.dims, unitaries)?;
        let m = &(&u * &self.matrix) * &u.adjoint();
        Ok(DensityMatrix::new_unchecked(self.dims.clone(), m))
    }

    /// Convex combination `Σ wᵢ ρᵢ`; weights must be non-negative and sum to one.
    pub fn mixture(parts: &[(f64, DensityMatrix)]) -> Result<Self> {
        let (_, first) = parts
            .first()
            .ok_or_else(|| Error::Argument("empty mixture".into()))?;
        let dims = first.dims.clone();
        let mut total = 0.0;
        let mut acc = ComplexMatrix::zeros(dims.total(), dims.total());
        for (w, rho) in parts {
            if *w < 0.0 || !w.is_finite() {
                bail_arg!("mixture weight {w} is negative");
            }
            if rho.dims != dims {
                bail_shape!("mixture components have different dims");
            }
            total += w;
            acc = &acc + &rho.matrix.scale_real(*w);
        }
        if (total - 1.0).abs() > STATE_TOL {
            bail_arg!("mixture weights sum to {total}, expected 1");
        }
        Ok(DensityMatrix::new_unchecked(dims, acc))
    }
}

fn basis_amplitudes(dims: &DimSpec, entries: &[(usize, Complex64)]) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); dims.total()];
    for &(i, a) in entries {
        v[i] += a;
    }
    v
}

/// `(1/√d) Σᵢ |i i … i⟩` on `n` subsystems of dimension `d`.
pub fn ghz(n: usize, d: usize) -> Result<PureState> {
    if n < 2 || d < 2 {
        bail_arg!("GHZ state needs n >= 2 and d >= 2, got n={n}, d={d}");
    }
    let dims = DimSpec::new(vec![d; n])?;
    let amp = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    let entries: Vec<_> = (0..d).map(|i| (dims.compose(&vec![i; n]), amp)).collect();
    PureState::from_coeffs(dims.clone(), basis_amplitudes(&dims, &entries))
}

/// `(|10…0⟩ + |01…0⟩ + … + |0…01⟩)/√n` on `n` qubits.
pub fn w_state(n: usize) -> Result<PureState> {
    if n < 2 {
        bail_arg!("W state needs n >= 2, got {n}");
    }
    let dims = DimSpec::new(vec![2; n])?;
    let amp = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
    let entries: Vec<_> = (0..n).map(|k| (1usize << (n - 1 - k), amp)).collect();
    PureState::from_coeffs(dims.clone(), basis_amplitudes(&dims, &entries))
}

/// `(|00⟩ + |11⟩)/√2`.
pub fn bell() -> PureState {
    ghz(2, 2).expect("valid parameters")
}

/// `(|01⟩ - |10⟩)/√2`.
pub fn singlet() -> PureState {
    let dims = DimSpec::new(vec![2, 2]).expect("valid dims");
    let h = std::f64::consts::FRAC_1_SQRT_2;
    PureState::from_coeffs(
        dims.clone(),
        basis_amplitudes(&dims, &[(1, Complex64::new(h, 0.0)), (2, Complex64::new(-h, 0.0))]),
    )
    .expect("normalized")
}

/// Tensor product of local pure states.
pub fn product_state(locals: &[Vec<Complex64>]) -> Result<PureState> {
    if locals.is_empty() {
        bail_arg!("product state needs at least one factor");
    }
    let dims = DimSpec::new(locals.iter().map(|v| v.len()).collect())?;
    let cols: Vec<ComplexMatrix> = locals.iter().map(|v| ComplexMatrix::column(v)).collect();
    let v = kron_all(&cols)?;
    PureState::from_coeffs(dims, v.into_vec())
}

/// Computational basis product state `|x₁ x₂ … x_N⟩`.
pub fn basis_state(dims: DimSpec, digits: &[usize]) -> Result<PureState> {
    if digits.len() != dims.parties() || digits.iter().zip(dims.dims()).any(|(&x, &d)| x >= d) {
        bail_arg!("basis digits {digits:?} incompatible with dims {dims}");
    }
    let idx = dims.compose(digits);
    let v = basis_amplitudes(&dims, &[(idx, Complex64::new(1.0, 0.0))]);
    PureState::from_coeffs(dims, v)
}

fn maximally_mixed(dims: &DimSpec) -> ComplexMatrix {
    ComplexMatrix::identity(dims.total()).scale_real(1.0 / dims.total() as f64)
}

/// `p |Ψ⁻⟩⟨Ψ⁻| + (1-p) I/4`.
pub fn werner_2qubit(p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        bail_arg!("Werner parameter p must lie in [0, 1], got {p}");
    }
    let s = singlet();
    let m = &s.projector().scale_real(p) + &maximally_mixed(s.dims()).scale_real(1.0 - p);
    Ok(DensityMatrix::new_unchecked(s.dims().clone(), m))
}

/// `p |Φ⁺_d⟩⟨Φ⁺_d| + (1-p) I/d²` on `d ⊗ d`.
pub fn isotropic(d: usize, p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        bail_arg!("isotropic parameter p must lie in [0, 1], got {p}");
    }
    let phi = ghz(2, d)?;
    let m = &phi.projector().scale_real(p) + &maximally_mixed(phi.dims()).scale_real(1.0 - p);
    Ok(DensityMatrix::new_unchecked(phi.dims().clone(), m))
}

/// Pure state mixed with white noise: `q |ψ⟩⟨ψ| + (1-q) I/D`.
pub fn noisy(psi: &PureState, q: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&q) {
        bail_arg!("mixing weight must lie in [0, 1], got {q}");
    }
    let m = &psi.projector().scale_real(q) + &maximally_mixed(psi.dims()).scale_real(1.0 - q);
    Ok(DensityMatrix::new_unchecked(psi.dims().clone(), m))
}

/// Normalized Ginibre vector.
pub fn random_pure<R: Rng + ?Sized>(dims: &DimSpec, rng: &mut R) -> PureState {
    let v: Vec<Complex64> = (0..dims.total()).map(|_| complex_gaussian(rng)).collect();
    PureState::from_coeffs(dims.clone(), v).expect("Gaussian vector is nonzero")
}

/// Random product of local Ginibre vectors.
pub fn random_product_pure<R: Rng + ?Sized>(dims: &DimSpec, rng: &mut R) -> PureState {
    let locals: Vec<Vec<Complex64>> = dims
        .dims()
        .iter()
        .map(|&d| (0..d).map(|_| complex_gaussian(rng)).collect())
        .collect();
    product_state(&locals).expect("Gaussian factors are nonzero")
}

/// `G G† / tr(G G†)` with `G` Ginibre of shape `D × rank`.
pub fn random_mixed<R: Rng + ?Sized>(dims: &DimSpec, rank: usize, rng: &mut R) -> Result<DensityMatrix> {
    if rank == 0 {
        bail_arg!("rank must be at least 1");
    }
    let g = random_ginibre(dims.total(), rank, rng);
    let gg = &g * &g.adjoint();
    let tr = gg.trace().re;
    let mut m = gg.scale_real(1.0 / tr);
    hermitize(&mut m);
    Ok(DensityMatrix::new_unchecked(dims.clone(), m))
}

/// Uniform point on the probability simplex.
pub fn dirichlet_uniform<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let e: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| x / s).collect()
}

/// `Σ_t P_t |ψ₁ᵗ⟩⟨ψ₁ᵗ| ⊗ … ⊗ |ψ_Nᵗ⟩⟨ψ_Nᵗ|` with random local pure states and
/// Dirichlet(1, …, 1) weights.
pub fn random_separable_mixture<R: Rng + ?Sized>(
    dims: &DimSpec,
    terms: usize,
    rng: &mut R,
) -> Result<DensityMatrix> {
    if terms == 0 {
        bail_arg!("a mixture needs at least one term");
    }
    let weights = dirichlet_uniform(terms, rng);
    let mut acc = ComplexMatrix::zeros(dims.total(), dims.total());
    for w in weights {
        let psi = random_product_pure(dims, rng);
        acc = &acc + &psi.projector().scale_real(w);
    }
    let tr = acc.trace().re;
    let mut m = acc.scale_real(1.0 / tr);
    hermitize(&mut m);
    Ok(DensityMatrix::new_unchecked(dims.clone(), m))
}

/// Forces exact Hermiticity by mirroring the upper triangle.
fn hermitize(m: &mut ComplexMatrix) {
    let n = m.rows();
    for r in 0..n {
        m[(r, r)].im = 0.0;
        for c in r + 1..n {
            let v = m[(r, c)];
            m[(c, r)] = v.conj();
        }
    }
}
