//! Right-preconditioned GMRES.
//!
//! Solves `A M^{-1} y = b`, `x = M^{-1} y`, with modified Gram-Schmidt
//! Arnoldi and Givens rotations on the Hessenberg matrix. Right
//! preconditioning keeps the Arnoldi residual equal to the true residual
//! `b - A x`, which is also recomputed explicitly per iteration for the
//! history (the overlap-Schwarz experiments track error curves per
//! iteration, so the candidate solution is formed each step anyway). Full
//! GMRES by default; a restart length is available but iteration counts
//! comparable to unrestarted runs require the default.

use num_complex::Complex64;

use crate::history::{ConvergenceHistory, IterationFlag};
use crate::sparse::vec_norm;
use crate::{Error, Result};

/// Krylov solve parameters.
#[derive(Debug, Clone)]
pub struct KrylovConfig {
    /// Relative true-residual stopping tolerance.
    pub tol: f64,
    /// Global iteration budget across restart cycles.
    pub max_iters: usize,
    /// Restart length; `None` runs unrestarted.
    pub restart: Option<usize>,
}

impl Default for KrylovConfig {
    fn default() -> Self {
        Self { tol: 1e-6, max_iters: 200, restart: None }
    }
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Complex Givens rotation zeroing `g` against `f`: returns `(c, s, r)` with
/// `c` real, `c f + s g = r`, `-conj(s) f + c g = 0`, `c^2 + |s|^2 = 1`.
fn givens(f: Complex64, g: Complex64) -> (f64, Complex64, Complex64) {
    let fa = f.norm();
    let d = (f.norm_sqr() + g.norm_sqr()).sqrt();
    if d == 0.0 {
        (1.0, Complex64::default(), Complex64::default())
    } else if fa == 0.0 {
        (0.0, Complex64::new(1.0, 0.0), g)
    } else {
        let phase = f / fa;
        (fa / d, phase * g.conj() / d, phase * d)
    }
}

/// Runs right-preconditioned GMRES from a zero initial guess.
///
/// `preconditioner` of `None` means the identity. `observe_error` maps a
/// candidate solution to a relative error recorded alongside the residual
/// (NaN is recorded when absent). Non-convergence is reported through the
/// history flag, not as an error: `stagnated` on Arnoldi breakdown with the
/// residual above tolerance, `max_iters` when the budget runs out.
pub fn gmres(
    apply_a: &dyn Fn(&[Complex64]) -> Vec<Complex64>,
    preconditioner: Option<&dyn Fn(&[Complex64]) -> Vec<Complex64>>,
    b: &[Complex64],
    config: &KrylovConfig,
    mut observe_error: Option<&mut dyn FnMut(&[Complex64]) -> f64>,
) -> Result<(Vec<Complex64>, ConvergenceHistory)> {
    if !(config.tol > 0.0) {
        return Err(Error::Usage(format!("GMRES tolerance must be positive, got {}", config.tol)));
    }
    if config.max_iters == 0 || config.restart == Some(0) {
        return Err(Error::Usage("GMRES iteration budget and restart must be nonzero".into()));
    }
    let n = b.len();
    let apply_m = |v: &[Complex64]| -> Vec<Complex64> {
        match preconditioner {
            Some(m) => m(v),
            None => v.to_vec(),
        }
    };
    let mut history = ConvergenceHistory::default();
    let mut x = vec![Complex64::default(); n];
    let bnorm = vec_norm(b);
    let observe = |x: &[Complex64], observer: &mut Option<&mut dyn FnMut(&[Complex64]) -> f64>| {
        observer.as_mut().map_or(f64::NAN, |f| f(x))
    };
    if bnorm == 0.0 {
        let err = observe(&x, &mut observe_error);
        history.push(0, err, 0.0, IterationFlag::Converged);
        return Ok((x, history));
    }
    let err0 = observe(&x, &mut observe_error);
    if 1.0 <= config.tol {
        history.push(0, err0, 1.0, IterationFlag::Converged);
        return Ok((x, history));
    }
    history.push(0, err0, 1.0, IterationFlag::Running);

    let cycle_len = config.restart.unwrap_or(config.max_iters);
    let mut total_iter = 0usize;
    'outer: loop {
        let mut r = if total_iter == 0 {
            b.to_vec()
        } else {
            let ax = apply_a(&x);
            b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect()
        };
        let beta = vec_norm(&r);
        for v in &mut r {
            *v /= beta;
        }
        // Arnoldi basis of the preconditioned operator and the matching
        // preconditioned vectors Z (so x = x0 + Z y without extra M solves).
        let mut basis: Vec<Vec<Complex64>> = vec![r];
        let mut z_vectors: Vec<Vec<Complex64>> = Vec::new();
        // Upper-triangular R columns of the rotated Hessenberg matrix.
        let mut r_cols: Vec<Vec<Complex64>> = Vec::new();
        let mut rotations: Vec<(f64, Complex64)> = Vec::new();
        let mut g = vec![Complex64::default(); cycle_len + 1];
        g[0] = Complex64::new(beta, 0.0);

        for j in 0..cycle_len {
            total_iter += 1;
            let z = apply_m(&basis[j]);
            let mut w = apply_a(&z);
            z_vectors.push(z);
            let w_scale = vec_norm(&w);
            let mut h = vec![Complex64::default(); j + 2];
            for (i, v) in basis.iter().enumerate() {
                let hij = dot(v, &w);
                h[i] = hij;
                for (wk, vk) in w.iter_mut().zip(v) {
                    *wk -= hij * vk;
                }
            }
            let hnext = vec_norm(&w);
            h[j + 1] = Complex64::new(hnext, 0.0);
            let breakdown = hnext <= 1e-14 * w_scale.max(1e-300);
            if !breakdown {
                for wk in &mut w {
                    *wk /= hnext;
                }
                basis.push(w);
            }
            for (i, &(c, s)) in rotations.iter().enumerate() {
                let (hi, hi1) = (h[i], h[i + 1]);
                h[i] = c * hi + s * hi1;
                h[i + 1] = -s.conj() * hi + c * hi1;
            }
            let (c, s, rjj) = givens(h[j], h[j + 1]);
            rotations.push((c, s));
            h[j] = rjj;
            h[j + 1] = Complex64::default();
            g[j + 1] = -s.conj() * g[j];
            g[j] = c * g[j];
            r_cols.push(h);

            // Candidate solution from the least-squares coefficients.
            let mut y = vec![Complex64::default(); j + 1];
            for i in (0..=j).rev() {
                let mut acc = g[i];
                for l in (i + 1)..=j {
                    acc -= r_cols[l][i] * y[l];
                }
                // A zero diagonal only appears on breakdown with a defective
                // column; dropping that direction keeps the candidate finite.
                y[i] = if r_cols[i][i] == Complex64::default() {
                    Complex64::default()
                } else {
                    acc / r_cols[i][i]
                };
            }
            let mut candidate = x.clone();
            for (yl, zl) in y.iter().zip(&z_vectors) {
                for (ck, zk) in candidate.iter_mut().zip(zl) {
                    *ck += yl * zk;
                }
            }
            let ax = apply_a(&candidate);
            let true_res: f64 =
                vec_norm(&b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect::<Vec<_>>()) / bnorm;
            let rel_err = observe(&candidate, &mut observe_error);

            let flag = if true_res <= config.tol {
                IterationFlag::Converged
            } else if breakdown {
                IterationFlag::Stagnated
            } else if total_iter >= config.max_iters {
                IterationFlag::MaxIters
            } else {
                IterationFlag::Running
            };
            history.push(total_iter, rel_err, true_res, flag);
            if flag != IterationFlag::Running {
                return Ok((candidate, history));
            }
            if j + 1 == cycle_len {
                x = candidate;
                continue 'outer;
            }
        }
    }
}
