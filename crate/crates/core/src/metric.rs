//! Edge-length metrics and their `u = d^2 / 2` coordinates.
//!
//! Two normalizations are in use: mesh-level `u` vectors are scaled so that
//! `sum(u) = m` (the edge count), while the single-triangle solver in
//! [`crate::recover::solve_triangle`] returns lengths with perimeter 3.

use crate::error::{Error, Result};
use crate::mesh::MeshConnectivity;

/// Relative slack applied to triangle inequalities wherever angles or
/// Hessians are evaluated.
pub const DEGENERACY_SLACK: f64 = 1e-10;

/// Smallest relative triangle-inequality margin of a face,
/// `min (a + b - c) / (a + b + c)` over the three permutations.
///
/// Positive iff the lengths form a nondegenerate triangle; at most 1/3.
/// Uniform scaling of the lengths leaves it unchanged.
pub fn triangle_margin(lengths: [f64; 3]) -> f64 {
    let [a, b, c] = lengths;
    let perimeter = a + b + c;
    let slack = (b + c - a).min(a + c - b).min(a + b - c);
    let margin = slack / perimeter;
    if margin.is_finite() {
        margin
    } else {
        f64::NEG_INFINITY
    }
}

fn check_positive(values: &[f64]) -> Result<()> {
    match values.iter().position(|&v| !(v > 0.0 && v.is_finite())) {
        Some(index) => Err(Error::NonPositive {
            index,
            value: values[index],
        }),
        None => Ok(()),
    }
}

/// Positive edge lengths in canonical edge order.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyhedralMetric(Vec<f64>);

impl PolyhedralMetric {
    pub fn new(lengths: Vec<f64>) -> Result<Self> {
        check_positive(&lengths)?;
        Ok(Self(lengths))
    }

    pub fn lengths(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Checks edge count and strict triangle inequalities on every face.
    pub fn validate(&self, mesh: &MeshConnectivity) -> Result<()> {
        self.validate_with_slack(mesh, 0.0)
    }

    pub(crate) fn validate_with_slack(&self, mesh: &MeshConnectivity, slack: f64) -> Result<()> {
        if self.len() != mesh.edge_count() {
            return Err(Error::LengthMismatch {
                expected: mesh.edge_count(),
                got: self.len(),
            });
        }
        match (0..mesh.face_count())
            .find(|&f| triangle_margin(mesh.face_values(f, &self.0)) <= slack)
        {
            Some(face) => Err(Error::InadmissibleFace { face }),
            None => Ok(()),
        }
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.0.iter().map(|d| d * factor).collect())
    }

    /// `u_k = d_k^2 / 2`, not normalized.
    pub fn to_u(&self) -> UCoordinates {
        UCoordinates {
            values: self.0.iter().map(|d| 0.5 * d * d).collect(),
            normalized: false,
        }
    }
}

/// Result of an admissibility check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Admissibility {
    Admissible,
    Violated { face: usize },
}

impl Admissibility {
    pub fn is_admissible(self) -> bool {
        self == Admissibility::Admissible
    }
}

/// The metric in `u = d^2 / 2` coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct UCoordinates {
    values: Vec<f64>,
    normalized: bool,
}

impl UCoordinates {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        check_positive(&values)?;
        Ok(Self {
            values,
            normalized: false,
        })
    }

    /// The constant metric `u = (1, ..., 1)`, which is already normalized.
    pub fn constant(m: usize) -> Self {
        Self {
            values: vec![1.0; m],
            normalized: true,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// `d_k = sqrt(2 u_k)`.
    pub fn to_metric(&self) -> PolyhedralMetric {
        PolyhedralMetric(self.values.iter().map(|u| (2.0 * u).sqrt()).collect())
    }

    /// Strict triangle inequalities on `sqrt(u)` for every face.
    pub fn admissibility(&self, mesh: &MeshConnectivity) -> Admissibility {
        self.admissibility_with_slack(mesh, 0.0)
    }

    /// Like [`admissibility`](Self::admissibility) but requires each face's
    /// [`triangle_margin`] to exceed `slack`.
    pub fn admissibility_with_slack(&self, mesh: &MeshConnectivity, slack: f64) -> Admissibility {
        assert_eq!(
            self.len(),
            mesh.edge_count(),
            "u has the wrong length for this mesh"
        );
        let face = (0..mesh.face_count()).find(|&f| {
            let [a, b, c] = mesh.face_values(f, &self.values);
            triangle_margin([a.sqrt(), b.sqrt(), c.sqrt()]) <= slack
        });
        match face {
            Some(face) => Admissibility::Violated { face },
            None => Admissibility::Admissible,
        }
    }

    /// Rescales so that `sum(u) = m`. Scaling `u` scales every length by the
    /// same factor, so admissibility is preserved.
    pub fn normalize(&self) -> Self {
        let m = self.len() as f64;
        let sum = self.sum();
        if (sum - m).abs() <= 1e-12 * m {
            return Self {
                values: self.values.clone(),
                normalized: true,
            };
        }
        let factor = m / sum;
        Self {
            values: self.values.iter().map(|u| u * factor).collect(),
            normalized: true,
        }
    }

    /// `self + step * direction`, or `None` if a component is not positive.
    pub(crate) fn offset(&self, direction: &[f64], step: f64) -> Option<Self> {
        let values: Vec<f64> = self
            .values
            .iter()
            .zip(direction)
            .map(|(u, d)| u + step * d)
            .collect();
        check_positive(&values).ok()?;
        Some(Self {
            values,
            normalized: false,
        })
    }

    /// `(1 - t) * self + t * other`.
    pub fn lerp(&self, other: &Self, t: f64) -> Self {
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (1.0 - t) * a + t * b)
            .collect();
        Self {
            values,
            normalized: false,
        }
    }
}

/// A direction tangent to the hyperplane `sum(u) = m`.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentVector(Vec<f64>);

impl TangentVector {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Removes the component-wise mean.
pub fn project_tangent(v: &[f64]) -> TangentVector {
    if v.is_empty() {
        return TangentVector(Vec::new());
    }
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    TangentVector(v.iter().map(|x| x - mean).collect())
}
