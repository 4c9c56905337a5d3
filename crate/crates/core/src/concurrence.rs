//! Pure-state concurrences: the operator-sum form over the witness basis and
//! the equivalent purity forms, bipartite and multipartite.

use num_complex::Complex64;

use crate::error::{bail_arg, Error, Result};
use crate::linalg::{move_subsystem_first, ComplexMatrix, DimSpec};
use crate::states::PureState;
use crate::witness::{enumerate_bipartite_basis, multipartite_cut_witness};

/// Concurrence below this is reported as a product state.
pub const PRODUCT_THRESHOLD: f64 = 1e-8;

/// Largest total dimension accepted by [`multipartite_concurrence_operator_form`],
/// whose cost grows as the fourth power of the side.
pub const OPERATOR_FORM_CAP: usize = 64;

fn purity(m: &ComplexMatrix) -> f64 {
    // tr(ρ²) = Σ |ρ_ij|² for Hermitian ρ
    m.as_slice().iter().map(Complex64::norm_sqr).sum()
}

fn require_bipartite(psi: &PureState) -> Result<()> {
    if psi.dims().parties() != 2 {
        bail_arg!("bipartite concurrence needs two subsystems, got {}", psi.dims());
    }
    Ok(())
}

/// `sqrt(Σ_{i<i', j<j'} |ψᵀ O^{(i,i':j,j')} ψ|²)`.
pub fn o_concurrence_bipartite(psi: &PureState) -> Result<f64> {
    require_bipartite(psi)?;
    let amps = psi.amplitudes();
    let sum: f64 = enumerate_bipartite_basis(psi.dims())?
        .iter()
        .map(|o| o.overlap(amps).norm_sqr())
        .sum();
    Ok(sum.sqrt())
}

/// `sqrt(2 - tr ρ₁² - tr ρ₂²)`.
pub fn i_concurrence_bipartite(psi: &PureState) -> Result<f64> {
    require_bipartite(psi)?;
    let p1 = purity(&psi.marginal(0)?);
    let p2 = purity(&psi.marginal(1)?);
    Ok((2.0 - p1 - p2).max(0.0).sqrt())
}

/// Bipartite concurrence of subsystem `k` (0-based) against the rest merged.
pub fn cut_concurrence(psi: &PureState, k: usize) -> Result<f64> {
    let dims = psi.dims();
    if k >= dims.parties() {
        bail_arg!("subsystem {} out of range for {} parties", k + 1, dims.parties());
    }
    let cut = dims.cut(k)?;
    let amps = move_subsystem_first(psi.amplitudes(), dims, k)?;
    let view = PureState::from_normalized(cut, amps)?;
    i_concurrence_bipartite(&view)
}

/// `sqrt(½ Σ_k C⁽²⁾(ψ_{k|rest})²)`.
pub fn multipartite_concurrence(psi: &PureState) -> Result<f64> {
    let n = psi.dims().parties();
    if n < 2 {
        bail_arg!("concurrence needs at least two subsystems");
    }
    let mut sum = 0.0;
    for k in 0..n {
        let c = cut_concurrence(psi, k)?;
        sum += c * c;
    }
    Ok((0.5 * sum).sqrt())
}

/// `sqrt(N - Σ_k tr ρ_k²)`.
pub fn multipartite_concurrence_purity(psi: &PureState) -> Result<f64> {
    let n = psi.dims().parties();
    if n < 2 {
        bail_arg!("concurrence needs at least two subsystems");
    }
    let mut total = n as f64;
    for k in 0..n {
        total -= purity(&psi.marginal(k)?);
    }
    Ok(total.max(0.0).sqrt())
}

/// `sqrt(⅛ Σ_k Σ_{all index tuples} |ψᵀ O_k ψ|²)` with every row/column index
/// ranging over the full subsystem dimension, zero operators included.
pub fn multipartite_concurrence_operator_form(psi: &PureState) -> Result<f64> {
    let dims = psi.dims();
    if dims.parties() < 2 {
        bail_arg!("concurrence needs at least two subsystems");
    }
    if dims.total() > OPERATOR_FORM_CAP {
        return Err(Error::SizeLimit {
            requested: dims.total(),
            limit: OPERATOR_FORM_CAP,
        });
    }
    let amps = psi.amplitudes();
    let n = dims.parties();
    // rows and columns each run over the composite index space
    let index_space = DimSpec::new(dims.dims().to_vec())?;
    let mut sum = 0.0;
    for k in 0..n {
        for r in 0..index_space.total() {
            let rows = index_space.digits(r);
            for c in 0..index_space.total() {
                let cols = index_space.digits(c);
                if rows[k] == cols[k] {
                    // antisymmetrized factor vanishes
                    continue;
                }
                let o = multipartite_cut_witness(dims, k, &rows, &cols)?;
                sum += o.overlap(amps).norm_sqr();
            }
        }
    }
    Ok((sum / 8.0).sqrt())
}

pub fn is_product(concurrence: f64) -> bool {
    concurrence < PRODUCT_THRESHOLD
}

/// Which formula(s) to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Purity,
    Cut,
    Operator,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Purity => "purity",
            Method::Cut => "cut",
            Method::Operator => "operator",
        }
    }
}

/// Evaluates one method on a pure state; bipartite states use the bipartite
/// forms for `Operator`.
pub fn evaluate(psi: &PureState, method: Method) -> Result<f64> {
    match method {
        Method::Purity => multipartite_concurrence_purity(psi),
        Method::Cut => multipartite_concurrence(psi),
        Method::Operator if psi.dims().parties() == 2 => o_concurrence_bipartite(psi),
        Method::Operator => multipartite_concurrence_operator_form(psi),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{random_unitary, seeded_rng};
    use crate::states::{basis_state, bell, ghz, random_product_pure, random_pure, w_state};

    fn dims(d: &[usize]) -> DimSpec {
        DimSpec::new(d.to_vec()).unwrap()
    }

    #[test]
    fn bipartite_reference_values() {
        assert!((o_concurrence_bipartite(&bell()).unwrap() - 1.0).abs() < 1e-12);
        assert!((i_concurrence_bipartite(&bell()).unwrap() - 1.0).abs() < 1e-12);
        let zero = basis_state(dims(&[2, 2]), &[0, 0]).unwrap();
        assert_eq!(o_concurrence_bipartite(&zero).unwrap(), 0.0);
        assert!(i_concurrence_bipartite(&zero).unwrap() < 1e-12);
        let qutrits = ghz(2, 3).unwrap();
        let expected = (4.0f64 / 3.0).sqrt();
        assert!((o_concurrence_bipartite(&qutrits).unwrap() - expected).abs() < 1e-12);
        assert!((i_concurrence_bipartite(&qutrits).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn bipartite_forms_agree() {
        let mut rng = seeded_rng(100);
        for d in [[2, 2], [2, 3], [3, 3], [3, 4], [4, 4]] {
            for _ in 0..20 {
                let psi = random_pure(&dims(&d), &mut rng);
                let a = o_concurrence_bipartite(&psi).unwrap();
                let b = i_concurrence_bipartite(&psi).unwrap();
                assert!((a - b).abs() < 1e-9, "{d:?}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn cut_values() {
        let g = ghz(3, 2).unwrap();
        let w = w_state(3).unwrap();
        for k in 0..3 {
            assert!((cut_concurrence(&g, k).unwrap() - 1.0).abs() < 1e-12);
            assert!((cut_concurrence(&w, k).unwrap() - (8.0f64 / 9.0).sqrt()).abs() < 1e-12);
        }
        let p = random_product_pure(&dims(&[2, 3, 2]), &mut seeded_rng(2));
        for k in 0..3 {
            assert!(cut_concurrence(&p, k).unwrap() < 1e-7);
        }
        assert!(cut_concurrence(&g, 3).is_err());
    }

    #[test]
    fn multipartite_reference_values() {
        let g = ghz(3, 2).unwrap();
        assert!((multipartite_concurrence(&g).unwrap() - 1.5f64.sqrt()).abs() < 1e-12);
        let w = w_state(3).unwrap();
        assert!((multipartite_concurrence(&w).unwrap() - (4.0f64 / 3.0).sqrt()).abs() < 1e-12);
        let g43 = ghz(4, 3).unwrap();
        let expected = (4.0 * (1.0 - 1.0 / 3.0f64)).sqrt();
        assert!((multipartite_concurrence_purity(&g43).unwrap() - expected).abs() < 1e-12);
        let product = basis_state(dims(&[2, 2, 2, 2]), &[0, 0, 1, 1]).unwrap();
        assert!(multipartite_concurrence(&product).unwrap() < 1e-12);
        assert!(multipartite_concurrence_purity(&product).unwrap() < 1e-12);
    }

    #[test]
    fn operator_form_matches_purity_form() {
        let g = ghz(3, 2).unwrap();
        assert!((multipartite_concurrence_operator_form(&g).unwrap() - 1.5f64.sqrt()).abs() < 1e-9);
        let w = w_state(3).unwrap();
        assert!((multipartite_concurrence_operator_form(&w).unwrap() - (4.0f64 / 3.0).sqrt()).abs() < 1e-9);
        let p = basis_state(dims(&[2, 2, 2]), &[0, 1, 0]).unwrap();
        assert!(multipartite_concurrence_operator_form(&p).unwrap() < 1e-10);

        let mut rng = seeded_rng(41);
        for d in [vec![2, 2], vec![2, 2, 2], vec![2, 2, 3]] {
            for _ in 0..5 {
                let psi = random_pure(&dims(&d), &mut rng);
                let a = multipartite_concurrence(&psi).unwrap();
                let b = multipartite_concurrence_purity(&psi).unwrap();
                let c = multipartite_concurrence_operator_form(&psi).unwrap();
                assert!((a - b).abs() < 1e-9 && (a - c).abs() < 1e-9, "{a} {b} {c}");
            }
        }
    }

    #[test]
    fn operator_form_size_cap() {
        let big = ghz(7, 2).unwrap();
        assert!(matches!(
            multipartite_concurrence_operator_form(&big),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn two_party_multipartite_equals_bipartite() {
        let psi = random_pure(&dims(&[3, 4]), &mut seeded_rng(6));
        let a = multipartite_concurrence(&psi).unwrap();
        let b = i_concurrence_bipartite(&psi).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn local_unitary_invariance() {
        let mut rng = seeded_rng(55);
        for d in [vec![3, 3], vec![2, 3, 2]] {
            let ds = dims(&d);
            let psi = random_pure(&ds, &mut rng);
            let us: Vec<ComplexMatrix> = d.iter().map(|&n| random_unitary(n, &mut rng)).collect();
            let moved = psi.apply_local_unitary(&us).unwrap();
            for m in [Method::Purity, Method::Cut, Method::Operator] {
                let a = evaluate(&psi, m).unwrap();
                let b = evaluate(&moved, m).unwrap();
                assert!((a - b).abs() < 1e-9, "{m:?}");
            }
        }
    }

    #[test]
    fn non_bipartite_rejected() {
        let g = ghz(3, 2).unwrap();
        assert!(o_concurrence_bipartite(&g).is_err());
        assert!(i_concurrence_bipartite(&g).is_err());
    }
}
