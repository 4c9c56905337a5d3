//! Tensor-product structure: Kronecker products, partial traces and partial
//! transposes over a [`DimSpec`]. Subsystem indices are 0-based.

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, DimSpec, DEFAULT_SIZE_CAP};
use crate::error::{bail_arg, bail_shape, Error, Result};

/// Kronecker product with the default size cap.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    kron_capped(a, b, DEFAULT_SIZE_CAP)
}

pub fn kron_capped(a: &ComplexMatrix, b: &ComplexMatrix, cap: usize) -> Result<ComplexMatrix> {
    let rows = a.rows().checked_mul(b.rows());
    let cols = a.cols().checked_mul(b.cols());
    let (rows, cols) = match (rows, cols) {
        (Some(r), Some(c)) if r <= cap && c <= cap => (r, c),
        (r, c) => {
            return Err(Error::SizeLimit {
                requested: r.unwrap_or(usize::MAX).max(c.unwrap_or(usize::MAX)),
                limit: cap,
            })
        }
    };
    let (br, bc) = (b.rows(), b.cols());
    Ok(ComplexMatrix::from_fn(rows, cols, |r, c| {
        a[(r / br, c / bc)] * b[(r % br, c % bc)]
    }))
}

/// Kronecker product of a non-empty list of factors, left to right.
pub fn kron_all(factors: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| Error::Argument("kron of an empty factor list".into()))?;
    rest.iter().try_fold(first.clone(), |acc, f| kron(&acc, f))
}

fn check_state_matrix(rho: &ComplexMatrix, dims: &DimSpec) -> Result<()> {
    if !rho.is_square() || rho.rows() != dims.total() {
        bail_shape!(
            "matrix is {}x{} but dims {} need side {}",
            rho.rows(),
            rho.cols(),
            dims,
            dims.total()
        );
    }
    Ok(())
}

/// Traces out every subsystem not listed in `keep`; the result is ordered by
/// the kept subsystems in ascending order.
pub fn partial_trace(rho: &ComplexMatrix, dims: &DimSpec, keep: &[usize]) -> Result<ComplexMatrix> {
    check_state_matrix(rho, dims)?;
    if keep.is_empty() {
        bail_arg!("partial trace needs at least one kept subsystem");
    }
    let n = dims.parties();
    let mut kept = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if let Some(&bad) = kept.iter().find(|&&k| k >= n) {
        bail_arg!("subsystem {} out of range for {} parties", bad + 1, n);
    }
    let traced: Vec<usize> = (0..n).filter(|k| !kept.contains(k)).collect();
    let kept_dims = DimSpec::new(kept.iter().map(|&k| dims.dims()[k]).collect())?;
    let traced_dims = if traced.is_empty() {
        None
    } else {
        Some(DimSpec::new(traced.iter().map(|&k| dims.dims()[k]).collect())?)
    };
    let side = kept_dims.total();
    let inner = traced_dims.as_ref().map_or(1, |t| t.total());

    let mut out = ComplexMatrix::zeros(side, side);
    let mut full = vec![0usize; n];
    let place = |full: &mut [usize], kd: &[usize], td: &[usize]| {
        for (&k, &x) in kept.iter().zip(kd) {
            full[k] = x;
        }
        for (&k, &x) in traced.iter().zip(td) {
            full[k] = x;
        }
    };
    for r in 0..side {
        let rd = kept_dims.digits(r);
        for c in 0..side {
            let cd = kept_dims.digits(c);
            let mut acc = Complex64::new(0.0, 0.0);
            for t in 0..inner {
                let td = traced_dims.as_ref().map_or_else(Vec::new, |s| s.digits(t));
                place(&mut full, &rd, &td);
                let gr = dims.compose(&full);
                place(&mut full, &cd, &td);
                let gc = dims.compose(&full);
                acc += rho[(gr, gc)];
            }
            out[(r, c)] = acc;
        }
    }
    Ok(out)
}

/// Transposes the indices of one tensor factor, leaving the others untouched.
pub fn partial_transpose(rho: &ComplexMatrix, dims: &DimSpec, subsystem: usize) -> Result<ComplexMatrix> {
    check_state_matrix(rho, dims)?;
    if subsystem >= dims.parties() {
        bail_arg!(
            "subsystem {} out of range for {} parties",
            subsystem + 1,
            dims.parties()
        );
    }
    let side = dims.total();
    let mut out = ComplexMatrix::zeros(side, side);
    for r in 0..side {
        let mut rd = dims.digits(r);
        for c in 0..side {
            let mut cd = dims.digits(c);
            std::mem::swap(&mut rd[subsystem], &mut cd[subsystem]);
            out[(dims.compose(&rd), dims.compose(&cd))] = rho[(r, c)];
            std::mem::swap(&mut rd[subsystem], &mut cd[subsystem]);
        }
    }
    Ok(out)
}

/// Reorders amplitudes so subsystem `k` becomes the leading tensor factor.
/// Returns the permuted vector; the remaining factors keep their order.
pub fn move_subsystem_first(amplitudes: &[Complex64], dims: &DimSpec, k: usize) -> Result<Vec<Complex64>> {
    if amplitudes.len() != dims.total() {
        bail_shape!("vector length {} does not match dims {}", amplitudes.len(), dims);
    }
    if k >= dims.parties() {
        bail_arg!("subsystem {} out of range", k + 1);
    }
    let mut order = vec![k];
    order.extend((0..dims.parties()).filter(|&m| m != k));
    let permuted = DimSpec::new(order.iter().map(|&m| dims.dims()[m]).collect())?;
    let mut out = vec![Complex64::new(0.0, 0.0); amplitudes.len()];
    for (idx, amp) in amplitudes.iter().enumerate() {
        let d = dims.digits(idx);
        let pd: Vec<usize> = order.iter().map(|&m| d[m]).collect();
        out[permuted.compose(&pd)] = *amp;
    }
    Ok(out)
}
