//! Complete separability check for pure states.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::DEFAULT_SIZE_CAP;
use crate::states::PureState;
use crate::witness::WitnessLabel;

/// Largest basis overlap still treated as zero.
pub const PURE_OVERLAP_THRESHOLD: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PureCheck {
    pub separable: bool,
    pub max_overlap: f64,
    /// Basis operator attaining `max_overlap`.
    pub worst: Option<WitnessLabel>,
    pub operators_checked: usize,
}

/// Evaluates `|ψᵀ O ψ|` over the whole basis family: the `(i,i':j,j')`
/// operators for two parties, and every single-cut operator for more.
///
/// Overlaps are computed from amplitudes: for the cut operator with row digits
/// `r`, column digits `c` and antisymmetrized factor `k`,
/// `ψᵀ O ψ = 2 (ψ[r] ψ[c] - ψ[r'] ψ[c'])`, where `r'`, `c'` swap the `k`-th digits.
pub fn pure_state_check(psi: &PureState) -> Result<PureCheck> {
    let dims = psi.dims();
    dims.require_witness_compatible()?;
    if dims.total() > DEFAULT_SIZE_CAP {
        return Err(Error::SizeLimit {
            requested: dims.total(),
            limit: DEFAULT_SIZE_CAP,
        });
    }
    let a = psi.amplitudes();
    let mut best = 0.0f64;
    let mut worst = None;
    let mut count = 0usize;
    let mut consider = |v: Complex64, label: &dyn Fn() -> WitnessLabel| {
        count += 1;
        let m = v.norm();
        if m > best {
            best = m;
            worst = Some(label());
        }
    };

    if dims.parties() == 2 {
        let (d1, d2) = (dims.dims()[0], dims.dims()[1]);
        let at = |i: usize, j: usize| a[i * d2 + j];
        for i in 0..d1 {
            for i2 in i + 1..d1 {
                for j in 0..d2 {
                    for j2 in j + 1..d2 {
                        let v = (at(i, j) * at(i2, j2) - at(i, j2) * at(i2, j)) * 2.0;
                        consider(v, &|| WitnessLabel::BipartiteBasis {
                            i: i + 1,
                            i2: i2 + 1,
                            j: j + 1,
                            j2: j2 + 1,
                        });
                    }
                }
            }
        }
    } else {
        let total = dims.total();
        for k in 0..dims.parties() {
            for r in 0..total {
                let rd = dims.digits(r);
                for c in 0..total {
                    let cd = dims.digits(c);
                    // (r, c) and (c, r) give the same modulus; equal k-digits give zero
                    if rd[k] >= cd[k] {
                        continue;
                    }
                    let mut rs = rd.clone();
                    let mut cs = cd.clone();
                    std::mem::swap(&mut rs[k], &mut cs[k]);
                    let v = (a[r] * a[c] - a[dims.compose(&rs)] * a[dims.compose(&cs)]) * 2.0;
                    consider(v, &|| WitnessLabel::CutBasis {
                        k: k + 1,
                        rows: rd.iter().map(|x| x + 1).collect(),
                        cols: cd.iter().map(|x| x + 1).collect(),
                    });
                }
            }
        }
    }
    Ok(PureCheck {
        separable: best < PURE_OVERLAP_THRESHOLD,
        max_overlap: best,
        worst,
        operators_checked: count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{seeded_rng, DimSpec};
    use crate::states::{basis_state, ghz, random_product_pure, random_pure, w_state};
    use crate::witness::multipartite_cut_witness;

    #[test]
    fn product_and_ghz() {
        let p = basis_state(DimSpec::new(vec![2; 4]).unwrap(), &[0, 0, 1, 1]).unwrap();
        let r = pure_state_check(&p).unwrap();
        assert!(r.separable && r.max_overlap < 1e-12);

        let g = pure_state_check(&ghz(3, 2).unwrap()).unwrap();
        assert!(!g.separable);
        assert!((g.max_overlap - 1.0).abs() < 1e-12);
        assert!(!pure_state_check(&w_state(4).unwrap()).unwrap().separable);
    }

    #[test]
    fn random_products_pass() {
        let mut rng = seeded_rng(3);
        for d in [vec![2, 3], vec![3, 3], vec![2, 2, 3]] {
            let ds = DimSpec::new(d).unwrap();
            for _ in 0..10 {
                let r = pure_state_check(&random_product_pure(&ds, &mut rng)).unwrap();
                assert!(r.separable, "{}", r.max_overlap);
            }
        }
    }

    #[test]
    fn amplitude_formula_matches_dense_operators() {
        let mut rng = seeded_rng(14);
        let ds = DimSpec::new(vec![3, 2]).unwrap();
        let psi = random_pure(&ds, &mut rng);
        let r = pure_state_check(&psi).unwrap();
        let dense_max = crate::witness::enumerate_bipartite_basis(&ds)
            .unwrap()
            .iter()
            .map(|o| o.overlap(psi.amplitudes()).norm())
            .fold(0.0, f64::max);
        assert!((r.max_overlap - dense_max).abs() < 1e-14);

        let ds = DimSpec::new(vec![2, 3, 2]).unwrap();
        let psi = random_pure(&ds, &mut rng);
        let r = pure_state_check(&psi).unwrap();
        let mut dense_max = 0.0f64;
        for k in 0..3 {
            for row in 0..12 {
                for col in 0..12 {
                    let o = multipartite_cut_witness(&ds, k, &ds.digits(row), &ds.digits(col)).unwrap();
                    dense_max = dense_max.max(o.overlap(psi.amplitudes()).norm());
                }
            }
        }
        assert!((r.max_overlap - dense_max).abs() < 1e-14);
    }
}
