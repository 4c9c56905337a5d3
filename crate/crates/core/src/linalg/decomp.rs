//! Spectral kernels: Hermitian eigendecomposition, PSD square root, singular
//! values, general eigenvalues and the Takagi factorization of complex
//! symmetric matrices. The dense factorizations are delegated to nalgebra.

use nalgebra::{DMatrix, Schur, SymmetricEigen};
use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{bail_shape, Error, Result};

/// Default Hermiticity / symmetry tolerance (Frobenius).
pub const TAU_HERM: f64 = 1e-10;
pub const TAU_SYM: f64 = 1e-10;
/// Eigenvalues in `[-EPS_PSD, 0)` are clamped to zero when taking square roots.
pub const EPS_PSD: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Descending.
    pub values: Vec<f64>,
    /// Eigenvectors as columns, in the order of `values`.
    pub vectors: ComplexMatrix,
}

pub fn hermitian_eig(h: &ComplexMatrix) -> Result<HermitianEigen> {
    hermitian_eig_tol(h, TAU_HERM)
}

pub fn hermitian_eig_tol(h: &ComplexMatrix, tol: f64) -> Result<HermitianEigen> {
    if !h.is_square() {
        bail_shape!("eigendecomposition needs a square matrix, got {}x{}", h.rows(), h.cols());
    }
    let dev = h.distance(&h.adjoint());
    if dev > tol {
        bail_shape!("matrix is not Hermitian (deviation {dev:.3e} > {tol:.1e})");
    }
    let sym = (h + &h.adjoint()).scale_real(0.5);
    let eig = SymmetricEigen::new(sym.to_nalgebra());
    let n = h.rows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

/// `V diag(f(λ)) V†` for a Hermitian eigendecomposition.
pub fn spectral_map(eig: &HermitianEigen, f: impl Fn(f64) -> f64) -> ComplexMatrix {
    let v = &eig.vectors;
    let n = v.rows();
    let fv: Vec<f64> = eig.values.iter().map(|&l| f(l)).collect();
    ComplexMatrix::from_fn(n, n, |r, c| {
        (0..n)
            .map(|k| v[(r, k)] * fv[k] * v[(c, k)].conj())
            .sum()
    })
}

/// Principal square root of a positive semidefinite Hermitian matrix.
pub fn matrix_sqrt_psd(rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(rho)?;
    let min = eig.values.last().copied().unwrap_or(0.0);
    if min < -EPS_PSD {
        return Err(Error::NotDensityMatrix(format!(
            "eigenvalue {min:.3e} below -{EPS_PSD:.0e}"
        )));
    }
    Ok(spectral_map(&eig, |l| l.max(0.0).sqrt()))
}

/// Singular values in descending order.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let svd = m.to_nalgebra().svd(false, false);
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Eigenvalues of a general square complex matrix (unordered).
pub fn general_eigenvalues(m: &ComplexMatrix) -> Result<Vec<Complex64>> {
    if !m.is_square() {
        bail_shape!("eigenvalues need a square matrix");
    }
    let schur = Schur::new(m.to_nalgebra());
    let ev = schur
        .eigenvalues()
        .ok_or_else(|| Error::Numerical("Schur decomposition did not converge".into()))?;
    Ok(ev.iter().copied().collect())
}

#[derive(Clone, Debug)]
pub struct Takagi {
    /// Non-negative, descending; equal to the singular values.
    pub values: Vec<f64>,
    /// Unitary with `s = v diag(values) vᵀ`.
    pub vectors: ComplexMatrix,
}

/// Takagi factorization `s = v diag(λ) vᵀ` of a complex symmetric matrix.
///
/// Writing `s = B + iC` and `u = x + iy`, the condition `s ū = λ u` is the real
/// symmetric eigenproblem `[[B, C], [C, -B]] [x; y] = λ [x; y]`, whose spectrum
/// comes in `±λ` pairs. Eigenvectors of the positive half give orthonormal
/// Takagi vectors; the null space is completed by Gram-Schmidt, since any
/// vector orthogonal to the range satisfies `s ū = 0`.
pub fn takagi_decompose(s: &ComplexMatrix) -> Result<Takagi> {
    if !s.is_square() {
        bail_shape!("Takagi factorization needs a square matrix");
    }
    let dev = s.distance(&s.transpose());
    if dev > TAU_SYM {
        bail_shape!("matrix is not complex symmetric (deviation {dev:.3e} > {TAU_SYM:.1e})");
    }
    let n = s.rows();
    let sym = (s + &s.transpose()).scale_real(0.5);
    let mut big = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            let z = sym[(r, c)];
            big[(r, c)] = z.re;
            big[(r, c + n)] = z.im;
            big[(r + n, c)] = z.im;
            big[(r + n, c + n)] = -z.re;
        }
    }
    let eig = SymmetricEigen::new(big);
    let mut order: Vec<usize> = (0..2 * n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let top = eig.eigenvalues[order[0]].max(0.0);
    let cutoff = (top * 1e-12).max(f64::MIN_POSITIVE);
    let mut values = Vec::with_capacity(n);
    let mut columns: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for &k in order.iter().take(n) {
        let lam = eig.eigenvalues[k];
        if lam <= cutoff {
            break;
        }
        let col: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new(eig.eigenvectors[(i, k)], eig.eigenvectors[(i + n, k)]))
            .collect();
        values.push(lam);
        columns.push(col);
    }
    complete_orthonormal(&mut columns, n);
    values.resize(n, 0.0);
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| columns[c][r]);
    Ok(Takagi { values, vectors })
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Extends an orthonormal family in Cⁿ to a basis using standard basis vectors.
fn complete_orthonormal(columns: &mut Vec<Vec<Complex64>>, n: usize) {
    let mut candidate = 0;
    while columns.len() < n && candidate < n {
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        v[candidate] = Complex64::new(1.0, 0.0);
        candidate += 1;
        for _ in 0..2 {
            for q in columns.iter() {
                let p = dot(q, &v);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= p * qi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            for vi in v.iter_mut() {
                *vi /= norm;
            }
            columns.push(v);
        }
    }
    debug_assert_eq!(columns.len(), n);
}

/// Frobenius norm of `U†U - I`.
pub fn unitarity_defect(u: &ComplexMatrix) -> f64 {
    let g = &u.adjoint() * u;
    (&g - &ComplexMatrix::identity(u.cols())).frobenius_norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::{random_ginibre, seeded_rng};

    fn random_hermitian(n: usize, seed: u64) -> ComplexMatrix {
        let g = random_ginibre(n, n, &mut seeded_rng(seed));
        (&g + &g.adjoint()).scale_real(0.5)
    }

    #[test]
    fn diagonal_eigenvalues_sorted() {
        let e = hermitian_eig(&ComplexMatrix::real_diagonal(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(e.values, vec![3.0, 2.0, 1.0]);
    }

    #[test]
    fn pauli_y_spectrum() {
        let i = Complex64::new(0.0, 1.0);
        let y = ComplexMatrix::from_row_major(2, 2, vec![0.0.into(), -i, i, 0.0.into()]).unwrap();
        let e = hermitian_eig(&y).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14);
        assert!((e.values[1] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn eig_reconstruction() {
        for seed in 0..5 {
            let h = random_hermitian(7, seed);
            let e = hermitian_eig(&h).unwrap();
            let back = spectral_map(&e, |l| l);
            assert!(back.distance(&h) < 1e-10);
            assert!(unitarity_defect(&e.vectors) < 1e-12);
        }
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(hermitian_eig(&m), Err(Error::Shape(_))));
    }

    #[test]
    fn sqrt_of_diagonal_and_identity() {
        let r = matrix_sqrt_psd(&ComplexMatrix::real_diagonal(&[4.0, 1.0])).unwrap();
        assert!(r.distance(&ComplexMatrix::real_diagonal(&[2.0, 1.0])) < 1e-14);
        let d = 5;
        let r = matrix_sqrt_psd(&ComplexMatrix::identity(d).scale_real(1.0 / d as f64)).unwrap();
        let expected = ComplexMatrix::identity(d).scale_real(1.0 / (d as f64).sqrt());
        assert!(r.distance(&expected) < 1e-14);
    }

    #[test]
    fn sqrt_rejects_negative_and_clamps_tiny() {
        let bad = ComplexMatrix::real_diagonal(&[1.0, -1e-6]);
        assert!(matches!(matrix_sqrt_psd(&bad), Err(Error::NotDensityMatrix(_))));
        let ok = matrix_sqrt_psd(&ComplexMatrix::real_diagonal(&[1.0, -1e-12])).unwrap();
        assert_eq!(ok[(1, 1)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn singular_values_simple() {
        let j = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]);
        let s = singular_values(&j);
        assert!((s[0] - 1.0).abs() < 1e-14 && (s[1] - 1.0).abs() < 1e-14);
        let u = [Complex64::new(1.0, 1.0), Complex64::new(2.0, 0.0)];
        let v = [Complex64::new(0.0, 3.0), Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.5)];
        let outer = ComplexMatrix::from_fn(2, 3, |r, c| u[r] * v[c]);
        let s = singular_values(&outer);
        let nu = u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let nv = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!((s[0] - nu * nv).abs() < 1e-12);
        assert!(s[1].abs() < 1e-12);
    }

    fn takagi_residual(s: &ComplexMatrix, t: &Takagi) -> f64 {
        let d = ComplexMatrix::real_diagonal(&t.values);
        let back = &(&t.vectors * &d) * &t.vectors.transpose();
        back.distance(s)
    }

    #[test]
    fn takagi_diagonal_and_swap() {
        let s = ComplexMatrix::real_diagonal(&[2.0, 1.0]);
        let t = takagi_decompose(&s).unwrap();
        assert_eq!(t.values.len(), 2);
        assert!((t.values[0] - 2.0).abs() < 1e-14 && (t.values[1] - 1.0).abs() < 1e-14);
        assert!(takagi_residual(&s, &t) < 1e-14);

        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let t = takagi_decompose(&x).unwrap();
        assert!((t.values[0] - 1.0).abs() < 1e-14 && (t.values[1] - 1.0).abs() < 1e-14);
        assert!(takagi_residual(&x, &t) < 1e-13);
        assert!(unitarity_defect(&t.vectors) < 1e-13);
    }

    #[test]
    fn takagi_rank_deficient() {
        // rank one: s = w wᵀ
        let w = [Complex64::new(0.3, 0.4), Complex64::new(-1.0, 0.2), Complex64::new(0.0, 0.7)];
        let s = ComplexMatrix::from_fn(3, 3, |r, c| w[r] * w[c]);
        let t = takagi_decompose(&s).unwrap();
        assert!(takagi_residual(&s, &t) < 1e-12);
        assert!(unitarity_defect(&t.vectors) < 1e-12);
        assert_eq!(t.values[1], 0.0);
        let z = ComplexMatrix::zeros(3, 3);
        let t = takagi_decompose(&z).unwrap();
        assert!(unitarity_defect(&t.vectors) < 1e-14);
    }

    #[test]
    fn takagi_rejects_nonsymmetric() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(takagi_decompose(&m), Err(Error::Shape(_))));
    }

    #[test]
    fn general_eigenvalues_of_triangular() {
        let m = ComplexMatrix::from_row_major(
            2,
            2,
            vec![Complex64::new(1.0, 1.0), 3.0.into(), 0.0.into(), Complex64::new(-2.0, 0.0)],
        )
        .unwrap();
        let mut ev = general_eigenvalues(&m).unwrap();
        ev.sort_by(|a, b| b.re.total_cmp(&a.re));
        assert!((ev[0] - Complex64::new(1.0, 1.0)).norm() < 1e-12);
        assert!((ev[1] - Complex64::new(-2.0, 0.0)).norm() < 1e-12);
    }
}
