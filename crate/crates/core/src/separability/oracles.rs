//! Independent entanglement oracles used to cross-check the witness test.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{bail_arg, Error, Result};
use crate::linalg::{general_eigenvalues, hermitian_eig, kron, partial_transpose, ComplexMatrix};
use crate::states::DensityMatrix;

pub const PPT_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PptVerdict {
    Ppt,
    Npt,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PptResult {
    pub verdict: PptVerdict,
    pub min_eigenvalue: f64,
    /// Sum of the absolute values of the negative eigenvalues.
    pub negativity: f64,
    /// PPT decides separability exactly for 2⊗2 and 2⊗3.
    pub conclusive: bool,
}

/// Partial-transpose test on subsystem `subsystem` (0-based) of a bipartite state.
pub fn ppt_oracle(rho: &DensityMatrix, subsystem: usize) -> Result<PptResult> {
    let dims = rho.dims();
    if dims.parties() != 2 {
        bail_arg!("PPT oracle needs a bipartite state, got {}", dims);
    }
    let pt = partial_transpose(rho.matrix(), dims, subsystem)?;
    let eig = hermitian_eig(&pt)?;
    let min = eig.values.last().copied().unwrap_or(0.0);
    let negativity = eig.values.iter().filter(|&&v| v < 0.0).fold(0.0, |acc, v| acc - v);
    let verdict = if min < -PPT_TOL { PptVerdict::Npt } else { PptVerdict::Ppt };
    let mut ds = dims.dims().to_vec();
    ds.sort_unstable();
    let conclusive = verdict == PptVerdict::Npt || ds == [2, 2] || ds == [2, 3];
    Ok(PptResult {
        verdict,
        min_eigenvalue: min,
        negativity,
        conclusive,
    })
}

fn pauli_y() -> ComplexMatrix {
    let i = Complex64::new(0.0, 1.0);
    ComplexMatrix::from_row_major(2, 2, vec![Complex64::new(0.0, 0.0), -i, i, Complex64::new(0.0, 0.0)])
        .expect("static matrix")
}

/// Two-qubit concurrence `max(0, μ₁ - μ₂ - μ₃ - μ₄)` from the square roots of
/// the eigenvalues of `ρ (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`.
pub fn wootters_oracle(rho: &DensityMatrix) -> Result<f64> {
    if rho.dims().dims() != [2, 2] {
        bail_arg!("spin-flip concurrence needs a 2x2 state, got {}", rho.dims());
    }
    let yy = kron(&pauli_y(), &pauli_y())?;
    let r = rho.matrix();
    let product = &(&(r * &yy) * &r.conj()) * &yy;
    let floor = 32.0 * f64::EPSILON * product.frobenius_norm();
    let mut mu = Vec::with_capacity(4);
    for z in general_eigenvalues(&product)? {
        if z.re < -1e-10 {
            return Err(Error::Numerical(format!("negative spin-flip eigenvalue {z}")));
        }
        let v = if z.norm() <= floor { 0.0 } else { z.re.max(0.0) };
        mu.push(v.sqrt());
    }
    mu.sort_by(|a, b| b.total_cmp(a));
    Ok((mu[0] - mu[1] - mu[2] - mu[3]).max(0.0))
}
