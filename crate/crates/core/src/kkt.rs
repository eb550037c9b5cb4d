//! Newton steps constrained to the hyperplane `sum(delta) = 0`.
//!
//! Solves `[H 1; 1^T 0] [delta; nu] = [-g; 0]`. Small systems use a dense LU
//! factorization of the bordered matrix. Larger ones use the equivalent
//! positive definite system `(H + 1 1^T) delta = -g + (u.g / sum u) 1`,
//! which holds because `H u = 0`, solved by Jacobi-preconditioned
//! conjugate gradients.

use nalgebra::{DMatrix, DVector};

use crate::energy::TotalHessian;
use crate::error::{Error, Result};

/// Largest edge count solved with the dense bordered system.
pub const DENSE_LIMIT: usize = 2000;

pub(crate) fn newton_step(hessian: &TotalHessian, gradient: &[f64], u: &[f64]) -> Result<Vec<f64>> {
    if hessian.dim() <= DENSE_LIMIT {
        dense_step(hessian, gradient)
    } else {
        cg_step(hessian, gradient, u)
    }
}

pub(crate) fn dense_step(hessian: &TotalHessian, gradient: &[f64]) -> Result<Vec<f64>> {
    let m = hessian.dim();
    let h = hessian.to_dense();
    let build = |ridge: f64| {
        let mut kkt = DMatrix::zeros(m + 1, m + 1);
        kkt.view_mut((0, 0), (m, m)).copy_from(&h);
        for i in 0..m {
            kkt[(i, i)] += ridge;
            kkt[(i, m)] = 1.0;
            kkt[(m, i)] = 1.0;
        }
        kkt
    };
    let mut rhs = DVector::zeros(m + 1);
    for (r, g) in rhs.iter_mut().zip(gradient) {
        *r = -g;
    }

    let solve = |kkt: DMatrix<f64>| {
        kkt.lu()
            .solve(&rhs)
            .filter(|x| x.iter().all(|v| v.is_finite()))
    };
    let solution = match solve(build(0.0)) {
        Some(x) => x,
        None => {
            let ridge = 1e-12 * h.trace() / m as f64;
            solve(build(ridge)).ok_or_else(|| Error::LinearSolve("singular KKT system".into()))?
        }
    };
    Ok(solution.iter().take(m).copied().collect())
}

pub(crate) fn cg_step(hessian: &TotalHessian, gradient: &[f64], u: &[f64]) -> Result<Vec<f64>> {
    let m = hessian.dim();
    let u_sum: f64 = u.iter().sum();
    let ug: f64 = u.iter().zip(gradient).map(|(a, b)| a * b).sum();
    let shift = ug / u_sum;
    let rhs: Vec<f64> = gradient.iter().map(|g| -g + shift).collect();

    let apply = |v: &[f64]| -> Vec<f64> {
        let total: f64 = v.iter().sum();
        hessian.mul_vec(v).into_iter().map(|x| x + total).collect()
    };
    let precond: Vec<f64> = hessian
        .diagonal()
        .into_iter()
        .map(|d| 1.0 / (d + 1.0))
        .collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();

    let mut x = vec![0.0; m];
    let mut r = rhs.clone();
    let mut z: Vec<f64> = r.iter().zip(&precond).map(|(a, p)| a * p).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let target = 1e-14 * dot(&rhs, &rhs).sqrt();
    for _ in 0..(10 * m).max(100) {
        if dot(&r, &r).sqrt() <= target {
            return Ok(x);
        }
        let ap = apply(&p);
        let alpha = rz / dot(&p, &ap);
        if !alpha.is_finite() {
            break;
        }
        for i in 0..m {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        z = r.iter().zip(&precond).map(|(a, p)| a * p).collect();
        let rz_next = dot(&r, &z);
        let beta = rz_next / rz;
        rz = rz_next;
        for i in 0..m {
            p[i] = z[i] + beta * p[i];
        }
    }
    // an inexact step is still a descent direction; accept it if finite
    if x.iter().all(|v| v.is_finite()) {
        Ok(x)
    } else {
        Err(Error::LinearSolve("conjugate gradients diverged".into()))
    }
}
