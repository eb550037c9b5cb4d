//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Run with `cargo test -p polymetric --test acceptance`.

mod common;

use std::time::{Duration, Instant};

use nalgebra::{DMatrix, Vector3};
use polymetric::energy::{
    assemble_gradient, assemble_hessian, energy_along_path, energy_value, face_gradient,
    face_hessian, tangent_eigenvalues,
};
use polymetric::laplace::{
    cotangent_weights, heat_kernel, heat_kernel_to_laplacian, laplace_matrix,
    spectral_decomposition, SpectralData,
};
use polymetric::mesh::double_cover;
use polymetric::metric::{PolyhedralMetric, UCoordinates};
use polymetric::recover::{
    recover_metric, recover_via_double_cover, solve_triangle, verify_scaling, SolverOptions,
};
use polymetric::shapes;

use common::{max_abs, perturbed_metric, random_triangle, rng, test_meshes, TestMesh};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// 1. Weights of a random metric recover that metric up to scale.
fn round_trip_rigidity() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut slowest = Duration::ZERO;
    let mut rng = rng(1);
    for TestMesh { name, mesh, base } in test_meshes() {
        let truth = perturbed_metric(&mesh, &base, 0.1, &mut rng);
        let target = cotangent_weights(&mesh, &truth).map_err(|e| e.to_string())?;
        let start = Instant::now();
        let report =
            recover_metric(&mesh, &target, &SolverOptions::default()).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        ensure(report.converged, || {
            format!("{name}: not converged ({:?})", report.diagnostic)
        })?;
        ensure(report.iterations <= 100, || {
            format!("{name}: {} iterations", report.iterations)
        })?;
        ensure(elapsed < Duration::from_secs(5), || {
            format!("{name}: took {elapsed:?}")
        })?;
        ensure(report.energy_trace.windows(2).all(|p| p[1] <= p[0]), || {
            format!("{name}: energy trace increases")
        })?;
        let check = verify_scaling(&report.metric(), &truth).map_err(|e| e.to_string())?;
        ensure(check.max_deviation <= 1e-8, || {
            format!("{name}: deviation {:e}", check.max_deviation)
        })?;
        worst = worst.max(check.max_deviation);
    }
    Ok(format!(
        "max deviation {worst:.2e}, slowest mesh {slowest:.2?}"
    ))
}

/// 2. Assembled gradient vs central differences of the quadrature energy.
fn gradient_correctness() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut rng = rng(2);
    for TestMesh { name, mesh, base } in test_meshes() {
        let target =
            cotangent_weights(&mesh, &perturbed_metric(&mesh, &base, 0.1, &mut rng)).unwrap();
        let reference = base.to_u().normalize();
        for _ in 0..20 {
            let u = perturbed_metric(&mesh, &base, 0.1, &mut rng)
                .to_u()
                .normalize();
            let g = assemble_gradient(&mesh, &u, &target).map_err(|e| e.to_string())?;
            let h = 1e-5 * max_abs(u.values().iter().copied());
            let mut fd = Vec::with_capacity(u.len());
            for k in 0..u.len() {
                let mut plus = u.values().to_vec();
                let mut minus = u.values().to_vec();
                plus[k] += h;
                minus[k] -= h;
                let ep = energy_value(
                    &mesh,
                    &UCoordinates::new(plus).unwrap(),
                    &target,
                    &reference,
                )
                .map_err(|e| e.to_string())?;
                let em = energy_value(
                    &mesh,
                    &UCoordinates::new(minus).unwrap(),
                    &target,
                    &reference,
                )
                .map_err(|e| e.to_string())?;
                fd.push((ep - em) / (2.0 * h));
            }
            let scale = max_abs(g.values().iter().copied());
            let err = max_abs(fd.iter().zip(g.values()).map(|(a, b)| a - b)) / scale;
            ensure(err <= 1e-5, || format!("{name}: relative error {err:e}"))?;
            worst = worst.max(err);
        }
    }
    Ok(format!(
        "20 points x 5 meshes, max relative error {worst:.2e}"
    ))
}

/// 3. Closed-form face Hessian vs finite differences, symmetry, kernel.
fn hessian_correctness() -> Outcome {
    let mut rng = rng(3);
    let (mut worst_fd, mut worst_kernel): (f64, f64) = (0.0, 0.0);
    for _ in 0..100 {
        let d = random_triangle(&mut rng, 0.15);
        let u = d.map(|x| 0.5 * x * x);
        let block = face_hessian(u).map_err(|e| e.to_string())?.0;
        ensure(block == block.transpose(), || {
            format!("block not symmetric for {d:?}")
        })?;

        let norm_u = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
        let h = 1e-6 * norm_u;
        let mut fd = nalgebra::Matrix3::zeros();
        for j in 0..3 {
            let (mut plus, mut minus) = (u, u);
            plus[j] += h;
            minus[j] -= h;
            let (gp, gm) = (face_gradient(plus).unwrap(), face_gradient(minus).unwrap());
            for i in 0..3 {
                fd[(i, j)] = (gp[i] - gm[i]) / (2.0 * h);
            }
        }
        let err = (block - fd).amax() / block.amax();
        ensure(err <= 1e-5, || format!("FD mismatch {err:e} for {d:?}"))?;
        let mixed = (fd - fd.transpose()).amax() / block.amax();
        ensure(mixed <= 1e-5, || {
            format!("mixed partials differ by {mixed:e} for {d:?}")
        })?;

        let kernel = (block * Vector3::from(u)).norm() / (block.norm() * norm_u);
        ensure(kernel <= 1e-8, || {
            format!("kernel residual {kernel:e} for {d:?}")
        })?;
        worst_fd = worst_fd.max(err);
        worst_kernel = worst_kernel.max(kernel);
    }
    Ok(format!(
        "100 triangles, FD error {worst_fd:.2e}, kernel residual {worst_kernel:.2e}"
    ))
}

/// 4. Hessian restricted to sum(v) = 0 is positive definite.
fn tangent_convexity() -> Outcome {
    let mut rng = rng(4);
    let mut worst_ratio = f64::INFINITY;
    for TestMesh { name, mesh, base } in test_meshes() {
        for metric in [base.clone(), perturbed_metric(&mesh, &base, 0.1, &mut rng)] {
            let u = metric.to_u().normalize();
            let hessian = assemble_hessian(&mesh, &u).map_err(|e| e.to_string())?;
            let full =
                SpectralData::from_symmetric(hessian.to_dense()).map_err(|e| e.to_string())?;
            let norm = max_abs(full.eigenvalues.iter().copied());
            let tangent = tangent_eigenvalues(&hessian).map_err(|e| e.to_string())?;
            let smallest = tangent[0];
            ensure(smallest >= -1e-10 * norm, || {
                format!("{name}: eigenvalue {smallest:e}")
            })?;
            ensure(smallest > 1e-8 * norm, || {
                format!("{name}: not strictly positive ({smallest:e} vs norm {norm:e})")
            })?;
            worst_ratio = worst_ratio.min(smallest / norm);
        }
    }
    Ok(format!(
        "min tangent eigenvalue / ||H|| = {worst_ratio:.3e}"
    ))
}

/// 5. Energy along two different polylines with common endpoints.
fn path_independence() -> Outcome {
    let mut rng = rng(5);
    let mut worst: f64 = 0.0;
    let meshes: Vec<TestMesh> = test_meshes()
        .into_iter()
        .filter(|m| m.name == "single triangle" || m.name == "tetrahedron")
        .collect();
    for TestMesh { name, mesh, base } in meshes {
        for _ in 0..5 {
            let mut draw = || {
                perturbed_metric(&mesh, &base, 0.2, &mut rng)
                    .to_u()
                    .normalize()
            };
            let target = cotangent_weights(&mesh, &draw().to_metric()).unwrap();
            let (a, b) = (draw(), draw());
            let path1 = [a.clone(), draw(), draw(), b.clone()];
            let path2 = [a, draw(), draw(), b];
            let e1 = energy_along_path(&mesh, &target, &path1).map_err(|e| e.to_string())?;
            let e2 = energy_along_path(&mesh, &target, &path2).map_err(|e| e.to_string())?;
            let diff = (e1 - e2).abs();
            ensure(diff <= 1e-8, || format!("{name}: {e1} vs {e2}"))?;
            worst = worst.max(diff);
        }
    }
    Ok(format!("max path discrepancy {worst:.2e}"))
}

fn rel_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).amax() / b.amax()
}

/// 6. Weights, L and K(t) are unchanged by uniform scaling of the metric.
fn scale_invariance() -> Outcome {
    let mut rng = rng(6);
    let mut worst: f64 = 0.0;
    for TestMesh { name, mesh, base } in test_meshes() {
        let d = perturbed_metric(&mesh, &base, 0.1, &mut rng);
        let w = cotangent_weights(&mesh, &d).unwrap();
        let l = laplace_matrix(&mesh, &w).unwrap();
        let spectrum = spectral_decomposition(&l).unwrap();
        for c in [0.1, 7.3] {
            let dc = d.scaled(c).unwrap();
            let wc = cotangent_weights(&mesh, &dc).unwrap();
            let err_w = max_abs(wc.values().iter().zip(w.values()).map(|(a, b)| a - b))
                / max_abs(w.values().iter().copied());
            let lc = laplace_matrix(&mesh, &wc).unwrap();
            let err_l = rel_diff(&lc.to_dense(), &l.to_dense());
            let spectrum_c = spectral_decomposition(&lc).unwrap();
            let mut err_k: f64 = 0.0;
            for t in [0.1, 1.0, 5.0] {
                let k = heat_kernel(&spectrum, t).unwrap().matrix;
                let kc = heat_kernel(&spectrum_c, t).unwrap().matrix;
                err_k = err_k.max(rel_diff(&kc, &k));
            }
            let err = err_w.max(err_l).max(err_k);
            ensure(err <= 1e-12, || {
                format!("{name}, c={c}: w {err_w:e}, L {err_l:e}, K {err_k:e}")
            })?;
            worst = worst.max(err);
        }
    }
    Ok(format!("max relative change {worst:.2e}"))
}

/// 7. Heat kernel identities and the tetrahedron closed form.
fn heat_kernel_identities() -> Outcome {
    let mut rng = rng(7);
    let mut notes = Vec::new();
    for TestMesh { name, mesh, base } in test_meshes() {
        let d = perturbed_metric(&mesh, &base, 0.1, &mut rng);
        let l = laplace_matrix(&mesh, &cotangent_weights(&mesh, &d).unwrap()).unwrap();
        let s = spectral_decomposition(&l).map_err(|e| e.to_string())?;
        let n = mesh.vertex_count();

        let k0 = heat_kernel(&s, 0.0).unwrap().matrix;
        let id_err = (&k0 - DMatrix::identity(n, n)).amax();
        ensure(id_err <= 1e-12, || format!("{name}: K(0) - I = {id_err:e}"))?;

        for (a, b) in [(0.3, 0.7), (1.0, 2.0), (0.05, 4.0)] {
            let prod = heat_kernel(&s, a).unwrap().matrix * heat_kernel(&s, b).unwrap().matrix;
            let sum = heat_kernel(&s, a + b).unwrap().matrix;
            let err = (prod - &sum).amax();
            ensure(err <= 1e-8, || {
                format!("{name}: semigroup error {err:e} at ({a}, {b})")
            })?;
            let rows = max_abs(sum.row_iter().map(|r| r.sum() - 1.0));
            ensure(rows <= 1e-8, || format!("{name}: row sums off by {rows:e}"))?;
        }

        let dense = l.to_dense();
        let bridge = heat_kernel_to_laplacian(&s, 1e-6).unwrap();
        let err = (bridge - &dense).amax() / dense.amax();
        ensure(err <= 1e-5, || {
            format!("{name}: -(K(h)-I)/h vs L relative error {err:e}")
        })?;
        notes.push(format!("{name} {err:.1e}"));
    }

    let (mesh, pos) = shapes::tetrahedron();
    let d = polymetric::mesh::induced_metric(&mesh, &pos).unwrap();
    let s = spectral_decomposition(
        &laplace_matrix(&mesh, &cotangent_weights(&mesh, &d).unwrap()).unwrap(),
    )
    .unwrap();
    let j = DMatrix::from_element(4, 4, 1.0);
    let identity = DMatrix::identity(4, 4);
    for t in [0.0, 0.25, 1.0, 3.0] {
        let closed = &j * 0.25 + (&identity - &j * 0.25) * (-4.0 * t / 3f64.sqrt()).exp();
        let err = (heat_kernel(&s, t).unwrap().matrix - closed).amax();
        ensure(err <= 1e-8, || {
            format!("tetrahedron closed form off by {err:e} at t={t}")
        })?;
    }
    Ok(format!("bridge errors: {}", notes.join(", ")))
}

/// 8. Direct single-triangle solver.
fn triangle_solver() -> Outcome {
    let r3 = 1.0 / 3f64.sqrt();
    let eq = solve_triangle([r3; 3]).map_err(|e| e.to_string())?;
    ensure(eq.iter().all(|x| (x - 1.0).abs() <= 1e-12), || {
        format!("equilateral gave {eq:?}")
    })?;
    let right = solve_triangle([4.0 / 3.0, 0.75, 0.0]).map_err(|e| e.to_string())?;
    let want = [0.75, 1.0, 1.25];
    ensure(
        right.iter().zip(want).all(|(a, b)| (a - b).abs() <= 1e-12),
        || format!("3-4-5 gave {right:?}"),
    )?;

    let mut rng = rng(8);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let d = random_triangle(&mut rng, 0.05);
        let cot = face_gradient(d.map(|x| 0.5 * x * x)).map_err(|e| e.to_string())?;
        let solved = solve_triangle(cot).map_err(|e| e.to_string())?;
        let perimeter: f64 = d.iter().sum();
        let err = (0..3)
            .map(|i| (solved[i] - 3.0 * d[i] / perimeter).abs())
            .fold(0.0, f64::max);
        ensure(err <= 1e-12, || format!("{d:?}: error {err:e}"))?;
        worst = worst.max(err);
    }
    Ok(format!("100 random triangles, max error {worst:.2e}"))
}

/// 9. Recovery through the double cover agrees with direct recovery.
fn double_cover_consistency() -> Outcome {
    let mut rng = rng(9);
    let mut worst: f64 = 0.0;
    let open: Vec<TestMesh> = test_meshes()
        .into_iter()
        .filter(|m| !m.mesh.is_closed())
        .chain([common::grid_patch()])
        .collect();
    for TestMesh { name, mesh, base } in open {
        let cover = double_cover(&mesh).map_err(|e| e.to_string())?;
        ensure(cover.mesh.is_closed(), || {
            format!("{name}: double has boundary")
        })?;
        ensure(
            cover.mesh.euler_characteristic() == 2 * mesh.euler_characteristic(),
            || {
                format!(
                    "{name}: chi {} vs {}",
                    cover.mesh.euler_characteristic(),
                    mesh.euler_characteristic()
                )
            },
        )?;
        let truth = perturbed_metric(&mesh, &base, 0.1, &mut rng);
        let target = cotangent_weights(&mesh, &truth).unwrap();
        let options = SolverOptions::default();
        let direct = recover_metric(&mesh, &target, &options).map_err(|e| e.to_string())?;
        let doubled =
            recover_via_double_cover(&mesh, &target, &options).map_err(|e| e.to_string())?;
        ensure(direct.converged && doubled.converged, || {
            format!("{name}: not converged")
        })?;
        let check = verify_scaling(&doubled.metric(), &direct.metric()).unwrap();
        ensure(check.max_deviation <= 1e-6, || {
            format!(
                "{name}: direct and double disagree by {:e}",
                check.max_deviation
            )
        })?;
        worst = worst.max(check.max_deviation);
    }
    Ok(format!("3 open meshes, max disagreement {worst:.2e}"))
}

/// 10. Two admissible starting points reach the same optimum.
fn uniqueness() -> Outcome {
    let mut rng = rng(10);
    let mut worst: f64 = 0.0;
    for TestMesh { name, mesh, base } in test_meshes() {
        let truth = perturbed_metric(&mesh, &base, 0.1, &mut rng);
        let target = cotangent_weights(&mesh, &truth).unwrap();
        let a =
            recover_metric(&mesh, &target, &SolverOptions::default()).map_err(|e| e.to_string())?;
        let init: PolyhedralMetric = perturbed_metric(&mesh, &base, 0.15, &mut rng);
        let options = SolverOptions {
            initial: Some(init.to_u()),
            ..Default::default()
        };
        let b = recover_metric(&mesh, &target, &options).map_err(|e| e.to_string())?;
        ensure(a.converged && b.converged, || {
            format!("{name}: not converged")
        })?;
        let diff = max_abs(a.u.values().iter().zip(b.u.values()).map(|(x, y)| x - y));
        ensure(diff <= 1e-7, || {
            format!("{name}: optima differ by {diff:e}")
        })?;
        worst = worst.max(diff);
    }
    Ok(format!("max |u_a - u_b| = {worst:.2e}"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 round-trip rigidity", round_trip_rigidity),
        ("2 gradient correctness", gradient_correctness),
        ("3 Hessian correctness and symmetry", hessian_correctness),
        ("4 convexity on the tangent space", tangent_convexity),
        ("5 path independence", path_independence),
        ("6 scale invariance", scale_invariance),
        ("7 heat kernel identities", heat_kernel_identities),
        ("8 triangle solver", triangle_solver),
        ("9 double-cover consistency", double_cover_consistency),
        ("10 uniqueness", uniqueness),
    ];
    let mut failures = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("[PASS] criterion {name}: {detail}"),
            Err(detail) => {
                failures += 1;
                println!("[FAIL] criterion {name}: {detail}");
            }
        }
    }
    println!(
        "{} of {} acceptance criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
