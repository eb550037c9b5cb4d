#![allow(dead_code)]

use polymetric::mesh::{induced_metric, MeshConnectivity};
use polymetric::metric::PolyhedralMetric;
use polymetric::shapes;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct TestMesh {
    pub name: &'static str,
    pub mesh: MeshConnectivity,
    pub base: PolyhedralMetric,
}

/// The five meshes every round-trip property is checked on.
pub fn test_meshes() -> Vec<TestMesh> {
    let embedded = |name, (mesh, pos)| {
        let base = induced_metric(&mesh, &pos).unwrap();
        TestMesh { name, mesh, base }
    };
    let torus = shapes::flat_torus(4, 4);
    let torus_metric = shapes::flat_torus_metric(&torus, 4);
    vec![
        embedded("single triangle", shapes::equilateral_triangle()),
        embedded("square+diagonal", shapes::square()),
        embedded("tetrahedron", shapes::tetrahedron()),
        embedded("icosahedron", shapes::icosahedron()),
        TestMesh {
            name: "4x4 flat torus",
            mesh: torus,
            base: torus_metric,
        },
    ]
}

/// A planar 3x3 grid of quads split into triangles: open, with interior
/// vertices.
pub fn grid_patch() -> TestMesh {
    let n = 4;
    let id = |i: usize, j: usize| i * n + j;
    let mut faces = Vec::new();
    let mut pos = Vec::new();
    for i in 0..n {
        for j in 0..n {
            pos.push([j as f64, i as f64, 0.0]);
        }
    }
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            faces.push([id(i, j), id(i, j + 1), id(i + 1, j + 1)]);
            faces.push([id(i, j), id(i + 1, j + 1), id(i + 1, j)]);
        }
    }
    let mesh = MeshConnectivity::from_faces(n * n, faces).unwrap();
    let base = induced_metric(&mesh, &polymetric::mesh::VertexPositions(pos)).unwrap();
    TestMesh {
        name: "3x3 grid patch",
        mesh,
        base,
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `base` with every length scaled by an independent factor in
/// `1 ± amplitude`, redrawn until every face keeps a clear margin.
pub fn perturbed_metric(
    mesh: &MeshConnectivity,
    base: &PolyhedralMetric,
    amplitude: f64,
    rng: &mut impl Rng,
) -> PolyhedralMetric {
    loop {
        let lengths = base
            .lengths()
            .iter()
            .map(|l| l * (1.0 + amplitude * rng.random_range(-1.0..1.0)))
            .collect();
        let d = PolyhedralMetric::new(lengths).unwrap();
        let margin_ok = (0..mesh.face_count()).all(|f| {
            let [a, b, c] = mesh.face_edges(f).map(|e| d.lengths()[e]);
            polymetric::metric::triangle_margin([a, b, c]) > 1e-3
        });
        if margin_ok {
            return d;
        }
    }
}

/// Lengths of a random triangle whose angles all exceed `min_angle`.
pub fn random_triangle(rng: &mut impl Rng, min_angle: f64) -> [f64; 3] {
    let pi = std::f64::consts::PI;
    loop {
        let a = rng.random_range(min_angle..pi);
        let b = rng.random_range(min_angle..pi);
        let c = pi - a - b;
        if c > min_angle {
            let scale = rng.random_range(0.1..10.0);
            return [a.sin() * scale, b.sin() * scale, c.sin() * scale];
        }
    }
}

pub fn max_abs(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m, v| m.max(v.abs()))
}
