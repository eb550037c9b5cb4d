//! The forward operator: angles and cotangent weights from edge lengths,
//! the cotangent Laplace matrix, its spectrum and the heat kernel.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use nalgebra_sparse::CsrMatrix;

use crate::error::{Error, Result};
use crate::mesh::MeshConnectivity;
use crate::metric::{triangle_margin, PolyhedralMetric, DEGENERACY_SLACK};

/// Cosine-law geometry of one triangle. Index `x` refers to the corner
/// opposite edge `x`.
#[derive(Clone, Copy, Debug)]
pub struct FaceShape {
    lengths: [f64; 3],
    cosines: [f64; 3],
    area: f64,
    /// Corner whose sine produced `area`.
    pivot: usize,
}

impl FaceShape {
    /// Builds the shape from squared half-lengths `u = d^2 / 2`.
    pub fn from_u(u: [f64; 3]) -> Option<Self> {
        Self::from_lengths([
            (2.0 * u[0]).sqrt(),
            (2.0 * u[1]).sqrt(),
            (2.0 * u[2]).sqrt(),
        ])
    }

    /// `None` if the triangle is within [`DEGENERACY_SLACK`] of degenerate.
    pub fn from_lengths(d: [f64; 3]) -> Option<Self> {
        if !(triangle_margin(d) > DEGENERACY_SLACK) {
            return None;
        }
        let sq = [d[0] * d[0], d[1] * d[1], d[2] * d[2]];
        let mut cosines = [0.0; 3];
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let c = (sq[j] + sq[k] - sq[i]) / (2.0 * d[j] * d[k]);
            cosines[i] = c.clamp(-1.0, 1.0);
        }
        // the corner with the smallest |cos| has the best-conditioned sine
        let pivot = (0..3)
            .min_by(|&a, &b| cosines[a].abs().total_cmp(&cosines[b].abs()))
            .unwrap();
        let (j, k) = ((pivot + 1) % 3, (pivot + 2) % 3);
        let c = cosines[pivot];
        let sine = ((1.0 - c) * (1.0 + c)).sqrt();
        let area = 0.5 * d[j] * d[k] * sine;
        if !(area > 0.0) {
            return None;
        }
        Some(Self {
            lengths: d,
            cosines,
            area,
            pivot,
        })
    }

    pub fn lengths(&self) -> [f64; 3] {
        self.lengths
    }

    pub fn cosines(&self) -> [f64; 3] {
        self.cosines
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    /// `d_i / (2 sin theta_i)`.
    pub fn circumradius(&self) -> f64 {
        let d = self.lengths;
        let i = self.pivot;
        let sine = 2.0 * self.area / (d[(i + 1) % 3] * d[(i + 2) % 3]);
        d[i] / (2.0 * sine)
    }

    /// Area over semi-perimeter.
    pub fn inradius(&self) -> f64 {
        let s = 0.5 * self.lengths.iter().sum::<f64>();
        self.area / s
    }

    pub fn angles(&self) -> [f64; 3] {
        self.cosines.map(f64::acos)
    }

    /// `cot theta_i = cos theta_i * d_j d_k / (2A)`.
    pub fn cotangents(&self) -> [f64; 3] {
        let d = self.lengths;
        let cot: [f64; 3] = std::array::from_fn(|i| {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            self.cosines[i] * d[j] * d[k] / (2.0 * self.area)
        });
        cot
    }
}

/// Area, circumradius and inradius of a triangle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FaceGeometry {
    pub area: f64,
    pub circumradius: f64,
    pub inradius: f64,
}

pub fn face_geometry(lengths: [f64; 3]) -> Result<FaceGeometry> {
    let shape = FaceShape::from_lengths(lengths).ok_or(Error::DegenerateTriangle { lengths })?;
    Ok(FaceGeometry {
        area: shape.area(),
        circumradius: shape.circumradius(),
        inradius: shape.inradius(),
    })
}

/// Corner angles per face, `angles[f][c]` at corner `c` of face `f`.
#[derive(Clone, Debug, PartialEq)]
pub struct CornerAngles(pub Vec<[f64; 3]>);

pub fn corner_angles(mesh: &MeshConnectivity, metric: &PolyhedralMetric) -> Result<CornerAngles> {
    check_len(mesh, metric.len())?;
    (0..mesh.face_count())
        .map(|f| {
            FaceShape::from_lengths(mesh.face_values(f, metric.lengths()))
                .map(|s| s.angles())
                .ok_or(Error::InadmissibleFace { face: f })
        })
        .collect::<Result<_>>()
        .map(CornerAngles)
}

/// Cotangent weight per edge; negative across obtuse angles.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeWeights(pub Vec<f64>);

impl EdgeWeights {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `w = cot(alpha) / 2` on boundary edges, `(cot alpha + cot beta) / 2`
/// on interior ones.
pub fn cotangent_weights(
    mesh: &MeshConnectivity,
    metric: &PolyhedralMetric,
) -> Result<EdgeWeights> {
    check_len(mesh, metric.len())?;
    weights_from_u(mesh, metric.to_u().values()).map(EdgeWeights)
}

/// Weights straight from `u` coordinates, accumulated in face order.
pub(crate) fn weights_from_u(mesh: &MeshConnectivity, u: &[f64]) -> Result<Vec<f64>> {
    let mut w = vec![0.0; mesh.edge_count()];
    for f in 0..mesh.face_count() {
        let shape =
            FaceShape::from_u(mesh.face_values(f, u)).ok_or(Error::InadmissibleFace { face: f })?;
        for (e, cot) in mesh.face_edges(f).into_iter().zip(shape.cotangents()) {
            w[e] += 0.5 * cot;
        }
    }
    Ok(w)
}

fn check_len(mesh: &MeshConnectivity, got: usize) -> Result<()> {
    if got == mesh.edge_count() {
        Ok(())
    } else {
        Err(Error::LengthMismatch {
            expected: mesh.edge_count(),
            got,
        })
    }
}

/// Sparse symmetric cotangent Laplacian with exactly zero row sums.
#[derive(Clone, Debug, PartialEq)]
pub struct LaplaceMatrix(CsrMatrix<f64>);

impl LaplaceMatrix {
    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn csr(&self) -> &CsrMatrix<f64> {
        &self.0
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut dense = DMatrix::zeros(self.dim(), self.dim());
        for (i, j, v) in self.0.triplet_iter() {
            dense[(i, j)] = *v;
        }
        dense
    }

    pub fn max_abs(&self) -> f64 {
        self.0.values().iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Assembles `L_ij = -w_ij`, `L_ii = sum_k w_ik`. Parallel edges between the
/// same vertex pair add up. Each diagonal is the negated sum of its row's
/// off-diagonals taken in column order.
pub fn laplace_matrix(mesh: &MeshConnectivity, weights: &EdgeWeights) -> Result<LaplaceMatrix> {
    check_len(mesh, weights.len())?;
    let n = mesh.vertex_count();
    let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for (&[a, b], &w) in mesh.edges().iter().zip(weights.values()) {
        rows[a].push((b, -w));
        rows[b].push((a, -w));
    }

    let mut offsets = Vec::with_capacity(n + 1);
    let mut cols = Vec::new();
    let mut vals = Vec::new();
    offsets.push(0);
    for (i, row) in rows.iter_mut().enumerate() {
        row.sort_by_key(|&(j, _)| j);
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(row.len() + 1);
        for &(j, v) in row.iter() {
            match merged.last_mut() {
                Some((last, acc)) if *last == j => *acc += v,
                _ => merged.push((j, v)),
            }
        }
        let off_sum: f64 = merged.iter().map(|&(_, v)| v).sum();
        let at = merged.partition_point(|&(j, _)| j < i);
        merged.insert(at, (i, -off_sum));
        for (j, v) in merged {
            cols.push(j);
            vals.push(v);
        }
        offsets.push(cols.len());
    }
    let csr = CsrMatrix::try_from_csr_data(n, n, offsets, cols, vals)
        .expect("rows are sorted and in range");
    Ok(LaplaceMatrix(csr))
}

/// Ascending eigenvalues with orthonormal eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct SpectralData {
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: DMatrix<f64>,
}

impl SpectralData {
    /// Dense symmetric eigendecomposition of any symmetric matrix.
    pub fn from_symmetric(matrix: DMatrix<f64>) -> Result<Self> {
        let n = matrix.nrows();
        let eig =
            SymmetricEigen::try_new(matrix, f64::EPSILON, 0).ok_or(Error::EigenDecomposition)?;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let eigenvalues = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
        let eigenvectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
        Ok(Self {
            eigenvalues,
            eigenvectors,
        })
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `Phi f(Lambda) Phi^T`.
    pub fn apply_function(&self, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
        let scaled = DMatrix::from_fn(self.dim(), self.dim(), |r, c| {
            self.eigenvectors[(r, c)] * f(self.eigenvalues[c])
        });
        let k = &scaled * self.eigenvectors.transpose();
        symmetrize(k)
    }

    /// `Phi Lambda Phi^T`.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        self.apply_function(|lambda| lambda)
    }
}

fn symmetrize(m: DMatrix<f64>) -> DMatrix<f64> {
    let t = m.transpose();
    (m + t) * 0.5
}

pub fn spectral_decomposition(laplacian: &LaplaceMatrix) -> Result<SpectralData> {
    SpectralData::from_symmetric(laplacian.to_dense())
}

/// Dense heat kernel `K(t)`.
#[derive(Clone, Debug)]
pub struct HeatKernelMatrix {
    pub t: f64,
    pub matrix: DMatrix<f64>,
}

/// `K(t) = Phi exp(-Lambda t) Phi^T`.
pub fn heat_kernel(spectrum: &SpectralData, t: f64) -> Result<HeatKernelMatrix> {
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    Ok(HeatKernelMatrix {
        t,
        matrix: spectrum.apply_function(|lambda| (-lambda * t).exp()),
    })
}

/// Forward difference `-(K(h) - K(0)) / h`, which tends to `L` as `h -> 0`.
pub fn heat_kernel_to_laplacian(spectrum: &SpectralData, h: f64) -> Result<DMatrix<f64>> {
    if !(h > 0.0) {
        return Err(Error::NonPositiveStep(h));
    }
    let k0 = heat_kernel(spectrum, 0.0)?.matrix;
    let kh = heat_kernel(spectrum, h)?.matrix;
    Ok((kh - k0) * (-1.0 / h))
}
