//! The convex energy whose gradient is the mismatch between prescribed and
//! realized cotangent weights.
//!
//! Sign convention: the algorithm energy integrates `(w_target - w(u)) du`,
//! so its gradient is `w_target - w(u)` and its Hessian `-dw/du` is positive
//! semidefinite. The per-face block returned by [`face_hessian`] is the
//! Jacobian of the cotangent triple itself, which is negative semidefinite.

use nalgebra::{DMatrix, DVector, Matrix3};
use nalgebra_sparse::{CooMatrix, CsrMatrix};

use crate::error::{Error, Result};
use crate::laplace::{weights_from_u, EdgeWeights, FaceShape, SpectralData};
use crate::mesh::MeshConnectivity;
use crate::metric::UCoordinates;
use crate::quadrature::energy_rule;

fn face_shape(u: [f64; 3]) -> Result<FaceShape> {
    FaceShape::from_u(u).ok_or_else(|| Error::DegenerateTriangle {
        lengths: u.map(|x| (2.0 * x).sqrt()),
    })
}

/// `(cot theta_i, cot theta_j, cot theta_k)`: the gradient of one face's
/// energy with respect to its `u` coordinates.
pub fn face_gradient(u: [f64; 3]) -> Result<[f64; 3]> {
    Ok(face_shape(u)?.cotangents())
}

/// Jacobian of the cotangent triple with respect to `u` for one face.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FaceHessianBlock(pub Matrix3<f64>);

/// Closed form: with `c = 2R^2 / A`, the diagonal is `-c / d_i^2` and the
/// `(i, j)` entry is `c cos(theta_k) / (d_i d_j)` where `k` is the third
/// corner.
pub fn face_hessian(u: [f64; 3]) -> Result<FaceHessianBlock> {
    Ok(face_hessian_of(&face_shape(u)?))
}

fn face_hessian_of(shape: &FaceShape) -> FaceHessianBlock {
    let d = shape.lengths();
    let cos = shape.cosines();
    let r = shape.circumradius();
    let c = 2.0 * r * r / shape.area();
    let mut block = Matrix3::zeros();
    for i in 0..3 {
        block[(i, i)] = -c / (d[i] * d[i]);
        for j in (i + 1)..3 {
            let k = 3 - i - j;
            let v = c * cos[k] / (d[i] * d[j]);
            block[(i, j)] = v;
            block[(j, i)] = v;
        }
    }
    FaceHessianBlock(block)
}

/// `g_k = w_target_k - w_k(u)`.
#[derive(Clone, Debug, PartialEq)]
pub struct EnergyGradient(pub Vec<f64>);

impl EnergyGradient {
    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

pub fn assemble_gradient(
    mesh: &MeshConnectivity,
    u: &UCoordinates,
    target: &EdgeWeights,
) -> Result<EnergyGradient> {
    check_lengths(mesh, u.len(), target.len())?;
    gradient_at(mesh, u.values(), target.values()).map(EnergyGradient)
}

fn gradient_at(mesh: &MeshConnectivity, u: &[f64], target: &[f64]) -> Result<Vec<f64>> {
    let w = weights_from_u(mesh, u)?;
    Ok(target.iter().zip(w).map(|(t, w)| t - w).collect())
}

fn check_lengths(mesh: &MeshConnectivity, u: usize, target: usize) -> Result<()> {
    let m = mesh.edge_count();
    for got in [u, target] {
        if got != m {
            return Err(Error::LengthMismatch { expected: m, got });
        }
    }
    Ok(())
}

/// Sparse symmetric `m x m` Hessian `-dw/du` of the algorithm energy.
#[derive(Clone, Debug)]
pub struct TotalHessian(pub CsrMatrix<f64>);

impl TotalHessian {
    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut dense = DMatrix::zeros(self.dim(), self.dim());
        for (i, j, v) in self.0.triplet_iter() {
            dense[(i, j)] += *v;
        }
        dense
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        for (i, row) in self.0.row_iter().enumerate() {
            out[i] = row
                .col_indices()
                .iter()
                .zip(row.values())
                .map(|(&j, a)| a * v[j])
                .sum();
        }
        out
    }

    pub fn diagonal(&self) -> Vec<f64> {
        let mut diag = vec![0.0; self.dim()];
        for (i, j, v) in self.0.triplet_iter() {
            if i == j {
                diag[i] += *v;
            }
        }
        diag
    }

    pub fn max_abs(&self) -> f64 {
        self.0.values().iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Each face adds half its cotangent to each of its edges' weights, so its
/// block enters `-dw/du` scaled by `-1/2`.
pub fn assemble_hessian(mesh: &MeshConnectivity, u: &UCoordinates) -> Result<TotalHessian> {
    let m = mesh.edge_count();
    if u.len() != m {
        return Err(Error::LengthMismatch {
            expected: m,
            got: u.len(),
        });
    }
    let mut coo = CooMatrix::new(m, m);
    for f in 0..mesh.face_count() {
        let shape = FaceShape::from_u(mesh.face_values(f, u.values()))
            .ok_or(Error::InadmissibleFace { face: f })?;
        let block = face_hessian_of(&shape).0;
        let edges = mesh.face_edges(f);
        for a in 0..3 {
            for b in 0..3 {
                coo.push(edges[a], edges[b], -0.5 * block[(a, b)]);
            }
        }
    }
    Ok(TotalHessian(CsrMatrix::from(&coo)))
}

/// Line integral of `(w_target - w(mu)) . dmu` along the straight segment
/// from `u_ref` to `u`, by 32-point Gauss-Legendre quadrature. The form is
/// closed, so any admissible path between the endpoints gives the same value.
pub fn energy_value(
    mesh: &MeshConnectivity,
    u: &UCoordinates,
    target: &EdgeWeights,
    u_ref: &UCoordinates,
) -> Result<f64> {
    check_lengths(mesh, u.len(), target.len())?;
    check_lengths(mesh, u_ref.len(), target.len())?;
    let delta: Vec<f64> = u
        .values()
        .iter()
        .zip(u_ref.values())
        .map(|(a, b)| a - b)
        .collect();
    if delta.iter().all(|&x| x == 0.0) {
        return Ok(0.0);
    }
    let mut total = 0.0;
    let mut point = vec![0.0; delta.len()];
    for &(tau, weight) in energy_rule() {
        for ((p, r), d) in point.iter_mut().zip(u_ref.values()).zip(&delta) {
            *p = r + tau * d;
        }
        let g = gradient_at(mesh, &point, target.values()).map_err(|e| match e {
            Error::InadmissibleFace { face } => Error::SegmentLeavesDomain { face },
            other => other,
        })?;
        total += weight * g.iter().zip(&delta).map(|(a, b)| a * b).sum::<f64>();
    }
    Ok(total)
}

/// Sum of [`energy_value`] over consecutive segments of a polyline.
pub fn energy_along_path(
    mesh: &MeshConnectivity,
    target: &EdgeWeights,
    path: &[UCoordinates],
) -> Result<f64> {
    path.windows(2)
        .map(|seg| energy_value(mesh, &seg[1], target, &seg[0]))
        .sum()
}

/// Eigenvalues (ascending) of `H` restricted to the hyperplane `sum(v) = 0`.
///
/// Uses the Helmert basis, whose `k`-th column is
/// `(1, ..., 1, -k, 0, ..., 0) / sqrt(k (k + 1))`.
pub fn tangent_eigenvalues(hessian: &TotalHessian) -> Result<DVector<f64>> {
    let m = hessian.dim();
    if m < 2 {
        return Ok(DVector::zeros(0));
    }
    let basis = DMatrix::from_fn(m, m - 1, |r, c| {
        let k = (c + 1) as f64;
        let scale = 1.0 / (k * (k + 1.0)).sqrt();
        match r.cmp(&(c + 1)) {
            std::cmp::Ordering::Less => scale,
            std::cmp::Ordering::Equal => -k * scale,
            std::cmp::Ordering::Greater => 0.0,
        }
    });
    let restricted = basis.transpose() * hessian.to_dense() * &basis;
    Ok(SpectralData::from_symmetric(restricted)?.eigenvalues)
}
