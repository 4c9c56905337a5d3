//! Symmetric witness operators.
//!
//! Every operator here is complex symmetric (`Oᵀ = O`) and annihilates the
//! bilinear form `ψᵀ O ψ` on product states. The families are
//!
//! * the bipartite basis `[E_{ii'} - E_{i'i}] ⊗ [E_{jj'} - E_{j'j}]`,
//! * semi-random bipartite operators `[A - Aᵀ] ⊗ [B - Bᵀ]` with Ginibre `A`, `B`,
//! * cut operators `σ₁ ⊗ … ⊗ [σ_k - σ_kᵀ] ⊗ … ⊗ σ_N + transpose` for the
//!   bipartition of subsystem `k` against the rest, elementary or random,
//! * normalized linear combinations of any of the above.
//!
//! Indices are 0-based in the API; labels print them 1-based.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{bail_arg, bail_shape, Error, Result};
use crate::linalg::{kron, kron_all, random_ginibre, ComplexMatrix, DimSpec};

/// Symmetry tolerance every constructed operator satisfies.
pub const WITNESS_SYM_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Cut {
    /// Two parties, both antisymmetrized.
    Bipartite,
    /// Subsystem `k` (0-based) against the rest.
    Multipartite(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessStructure {
    dims: DimSpec,
    cut: Cut,
}

impl WitnessStructure {
    pub fn bipartite(dims: DimSpec) -> Result<Self> {
        dims.require_witness_compatible()?;
        if dims.parties() != 2 {
            bail_arg!("bipartite witness needs exactly two subsystems, got {}", dims);
        }
        Ok(WitnessStructure { dims, cut: Cut::Bipartite })
    }

    pub fn cut(dims: DimSpec, k: usize) -> Result<Self> {
        dims.require_witness_compatible()?;
        if k >= dims.parties() {
            bail_arg!("cut subsystem {} out of range 1..={}", k + 1, dims.parties());
        }
        Ok(WitnessStructure { dims, cut: Cut::Multipartite(k) })
    }

    pub fn dims(&self) -> &DimSpec {
        &self.dims
    }

    pub fn cut_kind(&self) -> Cut {
        self.cut
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessLabel {
    /// 1-based `(i, i', j, j')`.
    BipartiteBasis { i: usize, i2: usize, j: usize, j2: usize },
    /// 1-based row/column index per subsystem; the antisymmetrized factor sits at `k`.
    CutBasis { k: usize, rows: Vec<usize>, cols: Vec<usize> },
    SemiRandom { cut: Option<usize>, seed: Option<u64>, trial: Option<u64> },
    Combination {
        /// Coefficients as supplied.
        coeffs: Vec<[f64; 2]>,
        /// Frobenius norm of the unnormalized sum; the stored operator is the sum divided by this.
        norm: f64,
        terms: Vec<WitnessLabel>,
    },
    Scaled { factor: [f64; 2], inner: Box<WitnessLabel> },
}

impl fmt::Display for WitnessLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessLabel::BipartiteBasis { i, i2, j, j2 } => write!(f, "O({i},{i2}:{j},{j2})"),
            WitnessLabel::CutBasis { k, rows, cols } => {
                let pairs: Vec<String> = rows.iter().zip(cols).map(|(r, c)| format!("{r},{c}")).collect();
                write!(f, "O_{k}({})", pairs.join(":"))
            }
            WitnessLabel::SemiRandom { cut, seed, trial } => {
                write!(f, "semi-random")?;
                if let Some(k) = cut {
                    write!(f, "[cut {k}]")?;
                }
                match (seed, trial) {
                    (Some(s), Some(t)) => write!(f, "(seed {s}, trial {t})"),
                    (Some(s), None) => write!(f, "(seed {s})"),
                    _ => Ok(()),
                }
            }
            WitnessLabel::Combination { terms, .. } => write!(f, "combination of {} terms", terms.len()),
            WitnessLabel::Scaled { factor, inner } => write!(f, "({}{:+}i)*{inner}", factor[0], factor[1]),
        }
    }
}

#[derive(Clone, Debug)]
pub struct WitnessOperator {
    structure: WitnessStructure,
    matrix: ComplexMatrix,
    label: WitnessLabel,
}

impl WitnessOperator {
    /// Wraps a matrix, checking size and complex symmetry.
    pub fn new(structure: WitnessStructure, matrix: ComplexMatrix, label: WitnessLabel) -> Result<Self> {
        let side = structure.dims.total();
        if !matrix.is_square() || matrix.rows() != side {
            bail_shape!("witness must be {side}x{side}, got {}x{}", matrix.rows(), matrix.cols());
        }
        let dev = matrix.distance(&matrix.transpose());
        if dev > WITNESS_SYM_TOL * matrix.frobenius_norm().max(1.0) {
            bail_shape!("witness is not symmetric (deviation {dev:.3e})");
        }
        Ok(WitnessOperator { structure, matrix, label })
    }

    pub fn structure(&self) -> &WitnessStructure {
        &self.structure
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn label(&self) -> &WitnessLabel {
        &self.label
    }

    pub fn with_label(mut self, label: WitnessLabel) -> Self {
        self.label = label;
        self
    }

    /// `c·O` without renormalization.
    pub fn scaled(&self, c: Complex64) -> Self {
        WitnessOperator {
            structure: self.structure.clone(),
            matrix: self.matrix.scale(c),
            label: WitnessLabel::Scaled {
                factor: [c.re, c.im],
                inner: Box::new(self.label.clone()),
            },
        }
    }

    /// `ψᵀ O ψ`, the overlap between `|ψ*⟩` and `O|ψ⟩`.
    pub fn overlap(&self, amplitudes: &[Complex64]) -> Complex64 {
        self.matrix.bilinear(amplitudes, amplitudes)
    }
}

/// `d × d` matrix with a single 1 at `(r, c)`.
pub fn elementary_sigma(d: usize, r: usize, c: usize) -> Result<ComplexMatrix> {
    if r >= d || c >= d {
        bail_arg!("index ({}, {}) out of range for dimension {d}", r + 1, c + 1);
    }
    let mut m = ComplexMatrix::zeros(d, d);
    m[(r, c)] = Complex64::new(1.0, 0.0);
    Ok(m)
}

/// `m - mᵀ`.
pub fn antisymmetrize(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !m.is_square() {
        bail_shape!("antisymmetrization needs a square matrix, got {}x{}", m.rows(), m.cols());
    }
    Ok(m - &m.transpose())
}

/// Basis operator for `i < i2` on subsystem 1 and `j < j2` on subsystem 2 (0-based).
pub fn bipartite_basis_witness(dims: &DimSpec, i: usize, i2: usize, j: usize, j2: usize) -> Result<WitnessOperator> {
    let structure = WitnessStructure::bipartite(dims.clone())?;
    let (d1, d2) = (dims.dims()[0], dims.dims()[1]);
    if !(i < i2 && i2 < d1 && j < j2 && j2 < d2) {
        bail_arg!(
            "basis indices must satisfy i < i' <= {d1} and j < j' <= {d2}, got ({}, {}, {}, {})",
            i + 1,
            i2 + 1,
            j + 1,
            j2 + 1
        );
    }
    let a = antisymmetrize(&elementary_sigma(d1, i, i2)?)?;
    let b = antisymmetrize(&elementary_sigma(d2, j, j2)?)?;
    let label = WitnessLabel::BipartiteBasis { i: i + 1, i2: i2 + 1, j: j + 1, j2: j2 + 1 };
    WitnessOperator::new(structure, kron(&a, &b)?, label)
}

/// All `C(D₁,2)·C(D₂,2)` basis operators, lexicographic in `(i, i', j, j')`.
pub fn enumerate_bipartite_basis(dims: &DimSpec) -> Result<Vec<WitnessOperator>> {
    WitnessStructure::bipartite(dims.clone())?;
    let (d1, d2) = (dims.dims()[0], dims.dims()[1]);
    let mut out = Vec::with_capacity(d1 * (d1 - 1) / 2 * d2 * (d2 - 1) / 2);
    for i in 0..d1 {
        for i2 in i + 1..d1 {
            for j in 0..d2 {
                for j2 in j + 1..d2 {
                    out.push(bipartite_basis_witness(dims, i, i2, j, j2)?);
                }
            }
        }
    }
    Ok(out)
}

fn normalized(m: ComplexMatrix) -> Result<ComplexMatrix> {
    let n = m.frobenius_norm();
    if n == 0.0 || !n.is_finite() {
        return Err(Error::Numerical("operator has zero norm".into()));
    }
    Ok(m.scale_real(1.0 / n))
}

/// `[A - Aᵀ] ⊗ [B - Bᵀ]` for Ginibre `A`, `B`, scaled to unit Frobenius norm.
pub fn semi_random_bipartite<R: Rng + ?Sized>(dims: &DimSpec, rng: &mut R) -> Result<WitnessOperator> {
    let structure = WitnessStructure::bipartite(dims.clone())?;
    let a = antisymmetrize(&random_ginibre(dims.dims()[0], dims.dims()[0], rng))?;
    let b = antisymmetrize(&random_ginibre(dims.dims()[1], dims.dims()[1], rng))?;
    let m = normalized(kron(&a, &b)?)?;
    let label = WitnessLabel::SemiRandom { cut: None, seed: None, trial: None };
    WitnessOperator::new(structure, m, label)
}

/// `X + Xᵀ` with `X = σ₁ ⊗ … ⊗ [σ_k - σ_kᵀ] ⊗ … ⊗ σ_N`.
fn cut_operator(factors: &[ComplexMatrix], k: usize) -> Result<ComplexMatrix> {
    let mut fs = factors.to_vec();
    fs[k] = antisymmetrize(&fs[k])?;
    let x = kron_all(&fs)?;
    Ok(&x + &x.transpose())
}

/// Elementary cut operator: `E_{rows[m], cols[m]}` on every subsystem, with
/// the factor at `k` antisymmetrized, plus the transpose of the whole product.
/// Indices are 0-based. Tuples with `rows[k] == cols[k]` give the zero operator.
pub fn multipartite_cut_witness(dims: &DimSpec, k: usize, rows: &[usize], cols: &[usize]) -> Result<WitnessOperator> {
    let structure = WitnessStructure::cut(dims.clone(), k)?;
    if rows.len() != dims.parties() || cols.len() != dims.parties() {
        bail_arg!("need one (row, col) pair per subsystem");
    }
    let factors = dims
        .dims()
        .iter()
        .zip(rows.iter().zip(cols))
        .map(|(&d, (&r, &c))| elementary_sigma(d, r, c))
        .collect::<Result<Vec<_>>>()?;
    let m = cut_operator(&factors, k)?;
    let label = WitnessLabel::CutBasis {
        k: k + 1,
        rows: rows.iter().map(|r| r + 1).collect(),
        cols: cols.iter().map(|c| c + 1).collect(),
    };
    WitnessOperator::new(structure, m, label)
}

/// Random cut operator with Ginibre factors, unit Frobenius norm.
pub fn semi_random_multipartite<R: Rng + ?Sized>(dims: &DimSpec, k: usize, rng: &mut R) -> Result<WitnessOperator> {
    let structure = WitnessStructure::cut(dims.clone(), k)?;
    let factors: Vec<ComplexMatrix> = dims.dims().iter().map(|&d| random_ginibre(d, d, rng)).collect();
    let m = normalized(cut_operator(&factors, k)?)?;
    let label = WitnessLabel::SemiRandom { cut: Some(k + 1), seed: None, trial: None };
    WitnessOperator::new(structure, m, label)
}

/// `Σ cₘ Oₘ`, renormalized to unit Frobenius norm. The coefficients and the
/// normalization constant are kept in the label.
pub fn compose_witness(basis: &[WitnessOperator], coeffs: &[Complex64]) -> Result<WitnessOperator> {
    if basis.is_empty() || basis.len() != coeffs.len() {
        bail_arg!(
            "need equally many operators and coefficients, got {} and {}",
            basis.len(),
            coeffs.len()
        );
    }
    let structure = basis[0].structure.clone();
    if basis.iter().any(|o| o.structure != structure) {
        bail_arg!("all operators in a combination must share the same structure");
    }
    let side = structure.dims.total();
    let mut acc = ComplexMatrix::zeros(side, side);
    for (o, &c) in basis.iter().zip(coeffs) {
        acc = &acc + &o.matrix.scale(c);
    }
    let norm = acc.frobenius_norm();
    if norm == 0.0 {
        bail_arg!("combination is the zero operator");
    }
    let label = WitnessLabel::Combination {
        coeffs: coeffs.iter().map(|c| [c.re, c.im]).collect(),
        norm,
        terms: basis.iter().map(|o| o.label.clone()).collect(),
    };
    WitnessOperator::new(structure, acc.scale_real(1.0 / norm), label)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::seeded_rng;
    use crate::states::random_product_pure;

    fn dims(d: &[usize]) -> DimSpec {
        DimSpec::new(d.to_vec()).unwrap()
    }

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    /// Least-squares residual of `target` against the span of `family`
    /// (modified Gram-Schmidt on the flattened matrices).
    fn span_residual(family: &[ComplexMatrix], target: &ComplexMatrix) -> f64 {
        let mut q: Vec<Vec<Complex64>> = Vec::new();
        for m in family {
            let mut v = m.as_slice().to_vec();
            for b in &q {
                let p: Complex64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= p * bi;
                }
            }
            let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if n > 1e-12 {
                q.push(v.into_iter().map(|z| z / n).collect());
            }
        }
        let mut r = target.as_slice().to_vec();
        for b in &q {
            let p: Complex64 = b.iter().zip(&r).map(|(x, y)| x.conj() * y).sum();
            for (ri, bi) in r.iter_mut().zip(b) {
                *ri -= p * bi;
            }
        }
        r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    #[test]
    fn elementary_and_antisymmetric() {
        let s = elementary_sigma(2, 0, 1).unwrap();
        assert_eq!(s, ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]));
        let d = elementary_sigma(3, 1, 1).unwrap();
        assert_eq!(d[(1, 1)], re(1.0));
        assert_eq!(elementary_sigma(4, 0, 2).unwrap().transpose(), elementary_sigma(4, 2, 0).unwrap());
        assert!(elementary_sigma(2, 2, 0).is_err());

        let a = antisymmetrize(&s).unwrap();
        assert_eq!(a, ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]));
        let sym = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 3.0]]);
        assert_eq!(antisymmetrize(&sym).unwrap().max_abs(), 0.0);
        assert_eq!(antisymmetrize(&ComplexMatrix::identity(1)).unwrap(), ComplexMatrix::zeros(1, 1));
        assert!(antisymmetrize(&ComplexMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn two_qubit_basis_witness() {
        let o = bipartite_basis_witness(&dims(&[2, 2]), 0, 1, 0, 1).unwrap();
        let m = o.matrix();
        assert_eq!(m[(0, 3)], re(1.0));
        assert_eq!(m[(3, 0)], re(1.0));
        assert_eq!(m[(1, 2)], re(-1.0));
        assert_eq!(m[(2, 1)], re(-1.0));
        assert_eq!(m.as_slice().iter().filter(|z| z.norm() > 0.0).count(), 4);
        assert_eq!(m, &m.transpose());
        let zero = crate::states::basis_state(dims(&[2, 2]), &[0, 0]).unwrap();
        assert_eq!(o.overlap(zero.amplitudes()), re(0.0));
        assert!(bipartite_basis_witness(&dims(&[2, 2]), 1, 0, 0, 1).is_err());
    }

    #[test]
    fn basis_counts() {
        assert_eq!(enumerate_bipartite_basis(&dims(&[2, 2])).unwrap().len(), 1);
        assert_eq!(enumerate_bipartite_basis(&dims(&[3, 3])).unwrap().len(), 9);
        assert_eq!(enumerate_bipartite_basis(&dims(&[2, 4])).unwrap().len(), 6);
        let b = enumerate_bipartite_basis(&dims(&[3, 3])).unwrap();
        assert_eq!(b[1].label(), &WitnessLabel::BipartiteBasis { i: 1, i2: 2, j: 1, j2: 3 });
    }

    #[test]
    fn dimension_one_rejected() {
        assert!(WitnessStructure::bipartite(dims(&[1, 3])).is_err());
        assert!(WitnessStructure::bipartite(dims(&[2, 2, 2])).is_err());
        assert!(WitnessStructure::cut(dims(&[2, 2]), 2).is_err());
    }

    #[test]
    fn semi_random_lies_in_basis_span() {
        let mut rng = seeded_rng(8);
        for d in [vec![2, 2], vec![3, 3], vec![2, 4]] {
            let ds = dims(&d);
            let basis: Vec<ComplexMatrix> = enumerate_bipartite_basis(&ds)
                .unwrap()
                .into_iter()
                .map(|o| o.matrix().clone())
                .collect();
            for _ in 0..5 {
                let o = semi_random_bipartite(&ds, &mut rng).unwrap();
                assert!((o.matrix().frobenius_norm() - 1.0).abs() < 1e-14);
                assert!(span_residual(&basis, o.matrix()) < 1e-10);
            }
        }
    }

    #[test]
    fn two_qubit_semi_random_is_proportional_to_basis() {
        let basis = bipartite_basis_witness(&dims(&[2, 2]), 0, 1, 0, 1).unwrap();
        let o = semi_random_bipartite(&dims(&[2, 2]), &mut seeded_rng(31)).unwrap();
        let ratio = o.matrix()[(0, 3)] / basis.matrix()[(0, 3)];
        assert!(o.matrix().distance(&basis.matrix().scale(ratio)) < 1e-14);
    }

    #[test]
    fn semi_random_deterministic() {
        let a = semi_random_bipartite(&dims(&[3, 2]), &mut seeded_rng(1)).unwrap();
        let b = semi_random_bipartite(&dims(&[3, 2]), &mut seeded_rng(1)).unwrap();
        assert_eq!(a.matrix(), b.matrix());
        let a = semi_random_multipartite(&dims(&[2, 3, 2]), 1, &mut seeded_rng(1)).unwrap();
        let b = semi_random_multipartite(&dims(&[2, 3, 2]), 1, &mut seeded_rng(1)).unwrap();
        assert_eq!(a.matrix(), b.matrix());
    }

    #[test]
    fn cut_witness_is_symmetric_and_orthogonal_to_products() {
        let ds = dims(&[2, 2, 2]);
        let mut rng = seeded_rng(12);
        let psi = random_product_pure(&ds, &mut rng);
        for k in 0..3 {
            for idx in 0..64usize {
                let rows = [idx & 1, (idx >> 1) & 1, (idx >> 2) & 1];
                let cols = [(idx >> 3) & 1, (idx >> 4) & 1, (idx >> 5) & 1];
                let o = multipartite_cut_witness(&ds, k, &rows, &cols).unwrap();
                assert_eq!(o.matrix(), &o.matrix().transpose());
                assert!(o.overlap(psi.amplitudes()).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn semi_random_multipartite_orthogonal_to_products() {
        let ds = dims(&[2, 3, 2]);
        let mut rng = seeded_rng(77);
        for t in 0..100 {
            let o = semi_random_multipartite(&ds, t % 3, &mut rng).unwrap();
            assert!(o.matrix().distance(&o.matrix().transpose()) < 1e-14);
            let psi = random_product_pure(&ds, &mut rng);
            assert!(o.overlap(psi.amplitudes()).norm() < 1e-10);
        }
        assert!(semi_random_multipartite(&ds, 3, &mut rng).is_err());
    }

    #[test]
    fn two_party_cut_family_spans_bipartite_basis() {
        let ds = dims(&[2, 2]);
        let basis: Vec<ComplexMatrix> = enumerate_bipartite_basis(&ds)
            .unwrap()
            .into_iter()
            .map(|o| o.matrix().clone())
            .collect();
        let mut cut_family = Vec::new();
        for r0 in 0..2 {
            for c0 in 0..2 {
                for r1 in 0..2 {
                    for c1 in 0..2 {
                        let o = multipartite_cut_witness(&ds, 0, &[r0, r1], &[c0, c1]).unwrap();
                        cut_family.push(o.matrix().clone());
                    }
                }
            }
        }
        for b in &basis {
            assert!(span_residual(&cut_family, b) < 1e-12);
        }
        for c in &cut_family {
            assert!(span_residual(&basis, c) < 1e-12);
        }
    }

    #[test]
    fn composition() {
        let ds = dims(&[3, 3]);
        let basis = enumerate_bipartite_basis(&ds).unwrap();
        let single = compose_witness(&basis[..1], &[re(1.0)]).unwrap();
        // unit normalization of a norm-2 basis operator
        assert!(single.matrix().distance(&basis[0].matrix().scale_real(0.5)) < 1e-15);
        assert!(compose_witness(&basis[..2], &[re(0.0), re(0.0)]).is_err());
        assert!(compose_witness(&basis[..2], &[re(1.0)]).is_err());

        let mut rng = seeded_rng(3);
        let coeffs: Vec<Complex64> = (0..9).map(|_| crate::linalg::random::complex_gaussian(&mut rng)).collect();
        let o = compose_witness(&basis, &coeffs).unwrap();
        assert!(o.matrix().distance(&o.matrix().transpose()) < 1e-12);

        let scale = Complex64::new(-2.5, 0.75);
        let scaled: Vec<Complex64> = coeffs.iter().map(|c| c * scale).collect();
        let o2 = compose_witness(&basis, &scaled).unwrap();
        let phase = scale / scale.norm();
        assert!(o2.matrix().distance(&o.matrix().scale(phase)) < 1e-12);

        let mixed = vec![basis[0].clone(), semi_random_multipartite(&ds, 0, &mut rng).unwrap()];
        assert!(compose_witness(&mixed, &[re(1.0), re(1.0)]).is_err());
    }
}
