//! Recovering edge lengths from prescribed cotangent weights.
//!
//! The weights determine the metric up to one global scale. Recovery
//! minimizes the convex energy whose gradient is `w_target - w(u)` over the
//! normalized slice `sum(u) = m` with a projected Newton method.

use std::f64::consts::PI;

use crate::energy::{assemble_hessian, energy_value};
use crate::error::{Error, Result};
use crate::kkt::newton_step;
use crate::laplace::{weights_from_u, EdgeWeights};
use crate::mesh::{double_cover, MeshConnectivity};
use crate::metric::{project_tangent, PolyhedralMetric, UCoordinates, DEGENERACY_SLACK};

/// Relative tolerance on the agreement of the two sheets' copies of an edge.
pub const COVER_AGREEMENT: f64 = 1e-8;

/// Halvings after which a line search is declared stalled.
const MAX_BACKTRACKS: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    Newton,
    /// Steepest descent on the tangent hyperplane with the same line search.
    GradientDescent,
}

#[derive(Clone, Debug)]
pub struct SolverOptions {
    /// Stop once the projected gradient's max-norm falls to this value.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub backtracking: f64,
    pub sufficient_decrease: f64,
    /// Largest accepted `|mean(w_target - w)|` at the optimum. A nonzero mean
    /// means the target is only matched up to a constant shift, which no
    /// metric realizes.
    pub realizability_tolerance: f64,
    /// Minimum relative triangle-inequality margin for iterates.
    pub admissibility_slack: f64,
    /// Starting metric; the constant metric when `None`.
    pub initial: Option<UCoordinates>,
    pub method: Method,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            max_iterations: 100,
            backtracking: 0.5,
            sufficient_decrease: 1e-4,
            realizability_tolerance: 1e-8,
            admissibility_slack: DEGENERACY_SLACK,
            initial: None,
            method: Method::Newton,
        }
    }
}

impl SolverOptions {
    fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidOption(what.to_string()));
        if !(self.tolerance > 0.0) {
            return bad("tolerance must be positive");
        }
        if self.max_iterations == 0 {
            return bad("max iterations must be positive");
        }
        if !(self.backtracking > 0.0 && self.backtracking < 1.0) {
            return bad("backtracking factor must lie in (0, 1)");
        }
        if !(self.sufficient_decrease > 0.0 && self.sufficient_decrease < 1.0) {
            return bad("sufficient-decrease constant must lie in (0, 1)");
        }
        if !(self.realizability_tolerance > 0.0) {
            return bad("realizability tolerance must be positive");
        }
        if !(self.admissibility_slack > 0.0) {
            return bad("admissibility slack must be positive");
        }
        Ok(())
    }
}

/// Outcome of [`recover_metric`].
#[derive(Clone, Debug)]
pub struct SolveReport {
    /// The projected gradient met the tolerance and the target is matched
    /// without a constant shift.
    pub converged: bool,
    /// Accepted steps.
    pub iterations: usize,
    /// Max-norm of the projected gradient at `u`.
    pub gradient_norm: f64,
    /// `max |w_target - w(u)|`.
    pub residual_norm: f64,
    /// `mean(w_target - w(u))`, the Lagrange multiplier of `sum(u) = m`.
    pub multiplier: f64,
    /// Energy relative to the starting point, one entry per accepted iterate
    /// (including the start).
    pub energy_trace: Vec<f64>,
    /// Projected-gradient max-norm at every iterate.
    pub gradient_trace: Vec<f64>,
    /// Final iterate, normalized to `sum(u) = m`.
    pub u: UCoordinates,
    /// Why the solver stopped early, when it did.
    pub diagnostic: Option<String>,
}

impl SolveReport {
    pub fn metric(&self) -> PolyhedralMetric {
        self.u.to_metric()
    }
}

/// Lengths of the triangle whose cotangents are `cotangents`, scaled to
/// perimeter 3.
pub fn solve_triangle(cotangents: [f64; 3]) -> Result<[f64; 3]> {
    let angles = cotangents.map(|c| f64::atan2(1.0, c));
    let angle_sum: f64 = angles.iter().sum();
    if !((angle_sum - PI).abs() <= 1e-8) {
        return Err(Error::InconsistentCotangents { angle_sum });
    }
    let sines = angles.map(f64::sin);
    let scale = 3.0 / sines.iter().sum::<f64>();
    Ok(sines.map(|s| s * scale))
}

/// Finds the metric realizing `target` by projected Newton iterations.
///
/// Non-realizable targets are not an error: the report comes back with
/// `converged = false` and a diagnostic.
pub fn recover_metric(
    mesh: &MeshConnectivity,
    target: &EdgeWeights,
    options: &SolverOptions,
) -> Result<SolveReport> {
    options.validate()?;
    let m = mesh.edge_count();
    if target.len() != m {
        return Err(Error::LengthMismatch {
            expected: m,
            got: target.len(),
        });
    }
    let components = mesh.connected_components();
    if components != 1 {
        return Err(Error::DisconnectedMesh { components });
    }

    let mut u = match &options.initial {
        Some(init) if init.len() != m => {
            return Err(Error::LengthMismatch {
                expected: m,
                got: init.len(),
            })
        }
        Some(init) => init.normalize(),
        None => UCoordinates::constant(m),
    };
    if let crate::metric::Admissibility::Violated { face } =
        u.admissibility_with_slack(mesh, options.admissibility_slack)
    {
        return Err(Error::InadmissibleFace { face });
    }

    let mut energy = 0.0;
    let mut energy_trace = vec![energy];
    let mut gradient_trace = Vec::new();
    let mut iterations = 0;
    let mut diagnostic = None;
    let mut raw;

    loop {
        let w = weights_from_u(mesh, u.values())?;
        raw = target
            .values()
            .iter()
            .zip(&w)
            .map(|(t, w)| t - w)
            .collect::<Vec<_>>();
        let projected = project_tangent(&raw);
        let norm = projected.max_abs();
        gradient_trace.push(norm);
        if norm <= options.tolerance {
            break;
        }
        if iterations == options.max_iterations {
            diagnostic = Some(format!(
                "reached {} iterations with gradient norm {norm:e}",
                options.max_iterations
            ));
            break;
        }

        let mut direction = match options.method {
            Method::Newton => {
                let hessian = assemble_hessian(mesh, &u)?;
                project_tangent(&newton_step(&hessian, &raw, u.values())?).into_inner()
            }
            Method::GradientDescent => projected.values().iter().map(|g| -g).collect(),
        };
        let mut slope = dot(&raw, &direction);
        if !(slope < 0.0) {
            direction = projected.values().iter().map(|g| -g).collect();
            slope = dot(&raw, &direction);
        }

        match line_search(mesh, target, &u, &direction, slope, options) {
            Some((next, decrease)) => {
                u = next.normalize();
                energy += decrease;
                energy_trace.push(energy);
                iterations += 1;
            }
            None => {
                diagnostic = Some(format!(
                    "line search stalled at iteration {iterations} with gradient norm {norm:e}"
                ));
                break;
            }
        }
    }

    let gradient_norm = *gradient_trace.last().unwrap();
    let multiplier = raw.iter().sum::<f64>() / m as f64;
    let residual_norm = raw.iter().fold(0.0, |acc: f64, r| acc.max(r.abs()));
    let realizable = multiplier.abs() <= options.realizability_tolerance;
    if gradient_norm <= options.tolerance && !realizable {
        diagnostic = Some(format!(
            "target is matched only up to a constant shift of {multiplier:e}; no metric realizes it"
        ));
    }
    Ok(SolveReport {
        converged: gradient_norm <= options.tolerance && realizable,
        iterations,
        gradient_norm,
        residual_norm,
        multiplier,
        energy_trace,
        gradient_trace,
        u,
        diagnostic,
    })
}

/// Backtracks from a unit step until the iterate is admissible with slack
/// and satisfies the Armijo condition on the energy.
fn line_search(
    mesh: &MeshConnectivity,
    target: &EdgeWeights,
    u: &UCoordinates,
    direction: &[f64],
    slope: f64,
    options: &SolverOptions,
) -> Option<(UCoordinates, f64)> {
    let mut step = 1.0;
    for _ in 0..MAX_BACKTRACKS {
        if let Some(candidate) = u.offset(direction, step) {
            if candidate
                .admissibility_with_slack(mesh, options.admissibility_slack)
                .is_admissible()
            {
                if let Ok(decrease) = energy_value(mesh, &candidate, target, u) {
                    if decrease <= options.sufficient_decrease * step * slope {
                        return Some((candidate, decrease));
                    }
                }
            }
        }
        step *= options.backtracking;
    }
    None
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// How well one metric matches a multiple of another.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingReport {
    /// Median of the per-edge ratios `recovered / reference`.
    pub scale: f64,
    /// `max |recovered / (scale * reference) - 1|`.
    pub max_deviation: f64,
}

pub fn verify_scaling(
    recovered: &PolyhedralMetric,
    reference: &PolyhedralMetric,
) -> Result<ScalingReport> {
    if recovered.len() != reference.len() {
        return Err(Error::LengthMismatch {
            expected: reference.len(),
            got: recovered.len(),
        });
    }
    if recovered.is_empty() {
        return Err(Error::LengthMismatch {
            expected: 1,
            got: 0,
        });
    }
    let mut ratios: Vec<f64> = recovered
        .lengths()
        .iter()
        .zip(reference.lengths())
        .map(|(r, d)| r / d)
        .collect();
    let mut sorted = ratios.clone();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    let scale = if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        0.5 * (sorted[mid - 1] + sorted[mid])
    };
    for r in &mut ratios {
        *r = (*r / scale - 1.0).abs();
    }
    let max_deviation = ratios.into_iter().fold(0.0, f64::max);
    Ok(ScalingReport {
        scale,
        max_deviation,
    })
}

/// Recovers on the closed double cover of an open mesh and restricts the
/// result to the original edges.
///
/// Identified boundary edges receive twice their target weight on the
/// double, since both sheets contribute a half-cotangent there.
pub fn recover_via_double_cover(
    mesh: &MeshConnectivity,
    target: &EdgeWeights,
    options: &SolverOptions,
) -> Result<SolveReport> {
    if target.len() != mesh.edge_count() {
        return Err(Error::LengthMismatch {
            expected: mesh.edge_count(),
            got: target.len(),
        });
    }
    let cover = double_cover(mesh)?;
    let lifted = EdgeWeights(cover.push_forward_weights(target.values()));
    let mut lifted_options = options.clone();
    if let Some(init) = &options.initial {
        lifted_options.initial = Some(UCoordinates::new(cover.push_forward(init.values()))?);
    }
    let report = recover_metric(&cover.mesh, &lifted, &lifted_options)?;

    let doubled = report.u.values();
    let mut restricted = Vec::with_capacity(mesh.edge_count());
    for (edge, covers) in cover.edge_correspondence.iter().enumerate() {
        let first = doubled[covers[0]];
        for &c in &covers[1..] {
            let deviation = (doubled[c] - first).abs() / first;
            if deviation > COVER_AGREEMENT {
                return Err(Error::CoverMismatch { edge, deviation });
            }
        }
        restricted.push(first);
    }

    Ok(SolveReport {
        u: UCoordinates::new(restricted)?.normalize(),
        ..report
    })
}
