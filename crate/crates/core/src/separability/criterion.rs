use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{bail_arg, bail_shape, Error, Result};
use crate::linalg::{general_eigenvalues, matrix_sqrt_psd, singular_values, ComplexMatrix};
use crate::states::DensityMatrix;
use crate::witness::{WitnessLabel, WitnessOperator};

/// Violation threshold `max(relative · λ₁, absolute)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ViolationTolerance {
    pub relative: f64,
    pub absolute: f64,
}

impl Default for ViolationTolerance {
    fn default() -> Self {
        ViolationTolerance {
            relative: 1e-8,
            absolute: 1e-12,
        }
    }
}

impl ViolationTolerance {
    pub fn threshold(&self, largest: f64) -> f64 {
        (self.relative * largest).max(self.absolute)
    }
}

/// Outcome of testing one operator against a state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessTestResult {
    pub witness: WitnessLabel,
    /// Singular values of `S`, descending.
    pub singular_values: Vec<f64>,
    /// λ₁
    pub lhs: f64,
    /// Σ_{i≥2} λᵢ
    pub rhs: f64,
    /// lhs - rhs
    pub margin: f64,
    pub threshold: f64,
    pub violated: bool,
}

impl WitnessTestResult {
    pub fn from_singular_values(witness: WitnessLabel, singular_values: Vec<f64>, tol: &ViolationTolerance) -> Self {
        let (margin, lhs, rhs) = condition_margin(&singular_values);
        let threshold = tol.threshold(lhs);
        WitnessTestResult {
            witness,
            singular_values,
            lhs,
            rhs,
            margin,
            threshold,
            violated: margin > threshold,
        }
    }
}

/// `(λ₁ - Σ_{i≥2} λᵢ, λ₁, Σ_{i≥2} λᵢ)` for a descending list.
pub fn condition_margin(values: &[f64]) -> (f64, f64, f64) {
    let lhs = values.first().copied().unwrap_or(0.0);
    let rhs = values.iter().skip(1).fold(0.0, |acc, v| acc + v);
    (lhs - rhs, lhs, rhs)
}

/// A density matrix with its square root cached, for repeated testing.
#[derive(Clone, Debug)]
pub struct PreparedState {
    rho: DensityMatrix,
    sqrt_rho: ComplexMatrix,
    sqrt_rho_t: ComplexMatrix,
}

impl PreparedState {
    pub fn new(rho: &DensityMatrix) -> Result<Self> {
        let sqrt_rho = matrix_sqrt_psd(rho.matrix())?;
        let sqrt_rho_t = sqrt_rho.transpose();
        Ok(PreparedState {
            rho: rho.clone(),
            sqrt_rho,
            sqrt_rho_t,
        })
    }

    pub fn rho(&self) -> &DensityMatrix {
        &self.rho
    }

    pub fn sqrt_rho(&self) -> &ComplexMatrix {
        &self.sqrt_rho
    }

    fn check(&self, o: &WitnessOperator) -> Result<()> {
        if o.structure().dims() != self.rho.dims() {
            bail_shape!(
                "witness dims {} do not match state dims {}",
                o.structure().dims(),
                self.rho.dims()
            );
        }
        Ok(())
    }

    /// `(√ρ)ᵀ O √ρ`.
    pub fn s_matrix(&self, o: &WitnessOperator) -> Result<ComplexMatrix> {
        self.check(o)?;
        Ok(&(&self.sqrt_rho_t * o.matrix()) * &self.sqrt_rho)
    }

    pub fn witness_test(&self, o: &WitnessOperator, tol: &ViolationTolerance) -> Result<WitnessTestResult> {
        let s = self.s_matrix(o)?;
        Ok(WitnessTestResult::from_singular_values(
            o.label().clone(),
            singular_values(&s),
            tol,
        ))
    }
}

pub fn s_matrix(rho: &DensityMatrix, o: &WitnessOperator) -> Result<ComplexMatrix> {
    PreparedState::new(rho)?.s_matrix(o)
}

pub fn witness_test(rho: &DensityMatrix, o: &WitnessOperator, tol: &ViolationTolerance) -> Result<WitnessTestResult> {
    PreparedState::new(rho)?.witness_test(o, tol)
}

/// Negative eigenvalues of `ρ O† ρ* O` above this are treated as rounding noise.
pub const SPECTRUM_NEG_TOL: f64 = 1e-10;

/// Square roots of the eigenvalues of `ρ O† ρ* O`, descending.
///
/// The product is similar to a PSD matrix only up to rounding, so tiny
/// negative real parts are clamped and magnitudes below the working precision
/// of the product are snapped to zero before taking roots.
pub fn spectrum_via_rho(rho: &DensityMatrix, o: &WitnessOperator) -> Result<Vec<f64>> {
    if o.structure().dims() != rho.dims() {
        bail_shape!("witness dims {} do not match state dims {}", o.structure().dims(), rho.dims());
    }
    let r = rho.matrix();
    let om = o.matrix();
    let k = &(&(&(r * &om.adjoint()) * &r.conj()) * om);
    let eig = general_eigenvalues(k)?;
    let floor = 32.0 * f64::EPSILON * k.frobenius_norm();
    let mut out = Vec::with_capacity(eig.len());
    for mu in eig {
        let mu: Complex64 = mu;
        if mu.re < -SPECTRUM_NEG_TOL {
            return Err(Error::Numerical(format!(
                "eigenvalue {mu} of rho O† rho* O is negative beyond tolerance"
            )));
        }
        let v = if mu.norm() <= floor { 0.0 } else { mu.re.max(0.0) };
        out.push(v.sqrt());
    }
    out.sort_by(|a, b| b.total_cmp(a));
    Ok(out)
}

/// Lower bound on the average decomposition concurrence implied by a violated
/// combination `Σ c O`.
///
/// Convention: the coefficients are taken as supplied and the operator is the
/// unnormalized sum `Σ cₘ Oₘ`; `c_max` is the coefficient of largest modulus.
/// A bare basis operator counts as a single term with `c = 1`. The result is
/// `max(0, λ₁ - Σ_{j≥2} λⱼ) / sqrt(|c_max|)` with λ the singular values of
/// `(√ρ)ᵀ (Σ c O) √ρ`.
pub fn average_concurrence_bound(rho: &DensityMatrix, o: &WitnessOperator) -> Result<f64> {
    let (scale, c_max) = match o.label() {
        WitnessLabel::Combination { coeffs, norm, .. } => {
            let c_max = coeffs
                .iter()
                .map(|c| Complex64::new(c[0], c[1]).norm())
                .fold(0.0, f64::max);
            (*norm, c_max)
        }
        WitnessLabel::BipartiteBasis { .. } | WitnessLabel::CutBasis { .. } => (1.0, 1.0),
        other => bail_arg!("witness {other} carries no coefficient provenance"),
    };
    if c_max == 0.0 {
        bail_arg!("all coefficients are zero");
    }
    let s = s_matrix(rho, o)?;
    let (margin, _, _) = condition_margin(&singular_values(&s));
    Ok((margin * scale).max(0.0) / c_max.sqrt())
}
