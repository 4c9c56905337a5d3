//! Hollow congruences: find a unitary `u` with `uᵀ S u` zero on the diagonal.
//!
//! With the Takagi form `S = V diag(λ) Vᵀ`, choose phases `θ` with
//! `Σ λᵢ e^{2iθᵢ} = 0` (a closed polygon with side lengths λ, which exists
//! exactly when `λ₁ ≤ Σ_{i≥2} λᵢ`), then mix with a Sylvester–Hadamard matrix
//! `H`: every diagonal entry of `(ΦH)ᵀ diag(λ) (ΦH) / M` equals
//! `Σ λᵢ e^{2iθᵢ} / M = 0`. Hadamard matrices of this kind exist for powers of
//! two, so by default `S` is padded with zero rows and columns up to the next
//! power of two (a right-unitary `D × M` decomposition). Other sizes start
//! from a Fourier mix and are refined with random two-plane unitaries.
//!
//! When the polygon cannot close, the same construction spreads the residual
//! `λ₁ - Σ_{i≥2} λᵢ` evenly, which attains the lower bound
//! `max_j |(uᵀSu)_jj| ≥ (λ₁ - Σ_{i≥2} λᵢ) / M` valid for every unitary.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::criterion::{condition_margin, ViolationTolerance};
use crate::error::{bail_arg, Error, Result};
use crate::linalg::{seeded_rng, takagi_decompose, ComplexMatrix, DEFAULT_SIZE_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecompositionSize {
    /// Smallest power of two at least the side of `S`.
    Auto,
    /// Same side as `S`.
    Square,
    /// Explicit `M ≥ side`.
    Padded(usize),
}

#[derive(Clone, Debug)]
pub struct HollowOptions {
    pub hollow_tol: f64,
    pub max_iter: usize,
    pub size: DecompositionSize,
    /// Seed for the refinement stage.
    pub seed: u64,
    pub tolerance: ViolationTolerance,
}

impl Default for HollowOptions {
    fn default() -> Self {
        HollowOptions {
            hollow_tol: 1e-6,
            max_iter: 10_000,
            size: DecompositionSize::Auto,
            seed: 0,
            tolerance: ViolationTolerance::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    /// `S` was already hollow.
    Identity,
    Hadamard,
    Refined,
}

#[derive(Clone, Debug)]
pub struct DecompositionCertificate {
    /// `M × M` unitary acting on `S` padded to side `M`.
    pub u: ComplexMatrix,
    pub side: usize,
    pub singular_values: Vec<f64>,
    pub margin: f64,
    pub condition_holds: bool,
    /// `max(0, λ₁ - Σ_{i≥2} λᵢ) / M`.
    pub diagonal_floor: f64,
    pub max_abs_diagonal: f64,
    pub converged: bool,
    pub iterations: usize,
    pub construction: Construction,
}

impl DecompositionCertificate {
    pub fn size(&self) -> usize {
        self.u.rows()
    }

    /// First `side` rows of `u`: the `D × M` right-unitary transformation.
    pub fn right_unitary(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.side, self.size(), |r, c| self.u[(r, c)])
    }
}

fn max_abs_diag(t: &ComplexMatrix) -> f64 {
    t.diag().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Angles `φ` with `Σ lengths[i] e^{iφᵢ} = target` (real, non-negative) for
/// lengths sorted in descending order. Requires
/// `max(0, l₁ - Σ_{i≥2} lᵢ) ≤ target ≤ Σ lᵢ`.
fn arrange(lengths: &[f64], target: f64) -> Vec<f64> {
    match lengths {
        [] => Vec::new(),
        [_] => vec![0.0],
        [l1, rest @ ..] => {
            let l1 = *l1;
            let g: f64 = rest.iter().sum();
            // resultant requested from the remaining group
            let rho = if target >= (l1 - g).abs() { g } else { l1 + target };
            let (alpha, beta) = triangle(l1, rho, target);
            let mut out = vec![alpha];
            out.extend(arrange(rest, rho).into_iter().map(|a| a + beta));
            out
        }
    }
}

/// Directions `(α, β)` with `a e^{iα} + b e^{iβ} = t` for `|a - b| ≤ t ≤ a + b`.
fn triangle(a: f64, b: f64, t: f64) -> (f64, f64) {
    if t <= 0.0 || a <= 0.0 {
        return (0.0, PI);
    }
    let cos_alpha = ((t * t + a * a - b * b) / (2.0 * t * a)).clamp(-1.0, 1.0);
    let alpha = cos_alpha.acos();
    let rem = Complex64::new(t, 0.0) - Complex64::from_polar(a, alpha);
    let beta = if rem.norm() > 0.0 { rem.arg() } else { PI };
    (alpha, beta)
}

/// Phases `θ` minimizing `|Σ λᵢ e^{2iθᵢ}|`; the minimum is
/// `max(0, λ₁ - Σ_{i≥2} λᵢ)` for descending λ.
pub fn closure_phases(lambda: &[f64]) -> Vec<f64> {
    let (margin, _, _) = condition_margin(lambda);
    arrange(lambda, margin.max(0.0)).into_iter().map(|p| p / 2.0).collect()
}

fn sylvester_hadamard(m: usize) -> ComplexMatrix {
    debug_assert!(m.is_power_of_two());
    let s = 1.0 / (m as f64).sqrt();
    ComplexMatrix::from_fn(m, m, |i, j| {
        let sign = if (i & j).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        Complex64::new(sign * s, 0.0)
    })
}

fn fourier(m: usize) -> ComplexMatrix {
    let s = 1.0 / (m as f64).sqrt();
    ComplexMatrix::from_fn(m, m, |i, j| Complex64::from_polar(s, 2.0 * PI * (i * j) as f64 / m as f64))
}

/// Searches for a unitary hollowing the complex symmetric matrix `s`.
pub fn hollowizing_unitary(s: &ComplexMatrix, opts: &HollowOptions) -> Result<DecompositionCertificate> {
    let side = s.rows();
    if !s.is_square() {
        bail_arg!("hollowization needs a square matrix");
    }
    let m = match opts.size {
        DecompositionSize::Auto => side.next_power_of_two(),
        DecompositionSize::Square => side,
        DecompositionSize::Padded(m) if m >= side => m,
        DecompositionSize::Padded(m) => bail_arg!("decomposition size {m} is smaller than the matrix side {side}"),
    };
    if m > DEFAULT_SIZE_CAP {
        return Err(Error::SizeLimit {
            requested: m,
            limit: DEFAULT_SIZE_CAP,
        });
    }
    let takagi = takagi_decompose(s)?;
    let lambda = takagi.values.clone();
    let (margin, lhs, _) = condition_margin(&lambda);
    let condition_holds = margin <= opts.tolerance.threshold(lhs);
    let diagonal_floor = margin.max(0.0) / m as f64;
    let padded = s.pad_to(m, m);

    let finish = |u: ComplexMatrix, iterations: usize, construction: Construction| {
        let t = &(&u.transpose() * &padded) * &u;
        let max_abs_diagonal = max_abs_diag(&t);
        DecompositionCertificate {
            u,
            side,
            singular_values: lambda.clone(),
            margin,
            condition_holds,
            diagonal_floor,
            max_abs_diagonal,
            converged: condition_holds && max_abs_diagonal < opts.hollow_tol,
            iterations,
            construction,
        }
    };

    if max_abs_diag(s) < opts.hollow_tol {
        return Ok(finish(ComplexMatrix::identity(m), 0, Construction::Identity));
    }

    let theta = closure_phases(&lambda);
    let phases: Vec<Complex64> = (0..m)
        .map(|i| theta.get(i).map_or(Complex64::new(1.0, 0.0), |&t| Complex64::from_polar(1.0, t)))
        .collect();
    let phase = ComplexMatrix::diagonal(&phases);
    let v_conj = takagi.vectors.conj();
    let v_pad = ComplexMatrix::from_fn(m, m, |r, c| {
        if r < side && c < side {
            v_conj[(r, c)]
        } else if r == c {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });

    if m.is_power_of_two() {
        let x = &phase * &sylvester_hadamard(m);
        return Ok(finish(&v_pad * &x, 0, Construction::Hadamard));
    }

    let mut lam_pad = lambda.clone();
    lam_pad.resize(m, 0.0);
    let x0 = &phase * &fourier(m);
    let (x, iterations) = refine(&lam_pad, x0, opts);
    Ok(finish(&v_pad * &x, iterations, Construction::Refined))
}

/// Random two-plane unitary search on `T = Xᵀ diag(λ) X`, accepting moves that
/// lower `Σ_j |T_jj|²`. Returns the final `X` and the number of iterations.
fn refine(lambda: &[f64], mut x: ComplexMatrix, opts: &HollowOptions) -> (ComplexMatrix, usize) {
    let m = lambda.len();
    let mut rng = seeded_rng(opts.seed);
    let d = ComplexMatrix::real_diagonal(lambda);
    let mut t = &(&x.transpose() * &d) * &x;
    let mut step = 0.5f64;
    for iter in 0..opts.max_iter {
        if max_abs_diag(&t) < opts.hollow_tol {
            return (x, iter);
        }
        let p = rng.random_range(0..m);
        let mut q = rng.random_range(0..m - 1);
        if q >= p {
            q += 1;
        }
        let g = random_two_plane(&mut rng, step);
        let idx = [p, q];
        // new diagonal entries at p and q
        let entry = |a: usize, b: usize| -> Complex64 {
            let mut acc = Complex64::new(0.0, 0.0);
            for (xi, &x_) in idx.iter().enumerate() {
                for (yi, &y_) in idx.iter().enumerate() {
                    acc += g[xi][a] * g[yi][b] * t[(x_, y_)];
                }
            }
            acc
        };
        let new_pp = entry(0, 0);
        let new_qq = entry(1, 1);
        let before = t[(p, p)].norm_sqr() + t[(q, q)].norm_sqr();
        let after = new_pp.norm_sqr() + new_qq.norm_sqr();
        if after < before {
            apply_two_plane(&mut t, &mut x, p, q, &g);
            step = (step * 1.2).min(1.0);
        } else {
            step = (step * 0.97).max(1e-9);
        }
    }
    (x, opts.max_iter)
}

fn random_two_plane<R: Rng + ?Sized>(rng: &mut R, step: f64) -> [[Complex64; 2]; 2] {
    let mut n = || step * rng.sample::<f64, _>(StandardNormal);
    let (t, a, b, c) = (n(), n(), n(), n());
    let (ct, st) = (t.cos(), t.sin());
    let g = Complex64::from_polar(1.0, c);
    [
        [g * Complex64::from_polar(ct, a), -g * Complex64::from_polar(st, -b)],
        [g * Complex64::from_polar(st, b), g * Complex64::from_polar(ct, -a)],
    ]
}

/// `X ← X G`, `T ← Gᵀ T G` with `G` acting on coordinates `p`, `q`.
fn apply_two_plane(t: &mut ComplexMatrix, x: &mut ComplexMatrix, p: usize, q: usize, g: &[[Complex64; 2]; 2]) {
    let m = t.rows();
    for r in 0..x.rows() {
        let (xp, xq) = (x[(r, p)], x[(r, q)]);
        x[(r, p)] = xp * g[0][0] + xq * g[1][0];
        x[(r, q)] = xp * g[0][1] + xq * g[1][1];
    }
    // columns: T G
    for r in 0..m {
        let (tp, tq) = (t[(r, p)], t[(r, q)]);
        t[(r, p)] = tp * g[0][0] + tq * g[1][0];
        t[(r, q)] = tp * g[0][1] + tq * g[1][1];
    }
    // rows: Gᵀ (T G)
    for c in 0..m {
        let (tp, tq) = (t[(p, c)], t[(q, c)]);
        t[(p, c)] = g[0][0] * tp + g[1][0] * tq;
        t[(q, c)] = g[0][1] * tp + g[1][1] * tq;
    }
}
