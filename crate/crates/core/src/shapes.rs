//! Small reference meshes.

use crate::mesh::{MeshConnectivity, VertexPositions};
use crate::metric::PolyhedralMetric;

/// One triangle with the 3-4-5 right-angle embedding.
pub fn right_triangle() -> (MeshConnectivity, VertexPositions) {
    let mesh = MeshConnectivity::from_faces(3, vec![[0, 1, 2]]).unwrap();
    let pos = vec![[0.0, 0.0, 0.0], [3.0, 0.0, 0.0], [0.0, 4.0, 0.0]];
    (mesh, VertexPositions(pos))
}

/// One equilateral triangle with unit edges.
pub fn equilateral_triangle() -> (MeshConnectivity, VertexPositions) {
    let mesh = MeshConnectivity::from_faces(3, vec![[0, 1, 2]]).unwrap();
    let h = 3f64.sqrt() / 2.0;
    let pos = vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.5, h, 0.0]];
    (mesh, VertexPositions(pos))
}

/// Unit square split along the diagonal (0, 2).
pub fn square() -> (MeshConnectivity, VertexPositions) {
    let mesh = MeshConnectivity::from_faces(4, vec![[0, 1, 2], [0, 2, 3]]).unwrap();
    let pos = vec![
        [0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0],
        [1.0, 1.0, 0.0],
        [0.0, 1.0, 0.0],
    ];
    (mesh, VertexPositions(pos))
}

/// Regular tetrahedron with unit edges, outward-oriented faces.
pub fn tetrahedron() -> (MeshConnectivity, VertexPositions) {
    let s3 = 3f64.sqrt();
    let pos = vec![
        [0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0],
        [0.5, s3 / 2.0, 0.0],
        [0.5, s3 / 6.0, (2.0f64 / 3.0).sqrt()],
    ];
    let faces = vec![[0, 2, 1], [0, 1, 3], [1, 2, 3], [2, 0, 3]];
    let mesh = MeshConnectivity::from_faces(4, faces).unwrap();
    (mesh, VertexPositions(pos))
}

/// Regular icosahedron inscribed in the sphere of radius `sqrt(1 + phi^2)`.
pub fn icosahedron() -> (MeshConnectivity, VertexPositions) {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let pos = vec![
        [-1.0, phi, 0.0],
        [1.0, phi, 0.0],
        [-1.0, -phi, 0.0],
        [1.0, -phi, 0.0],
        [0.0, -1.0, phi],
        [0.0, 1.0, phi],
        [0.0, -1.0, -phi],
        [0.0, 1.0, -phi],
        [phi, 0.0, -1.0],
        [phi, 0.0, 1.0],
        [-phi, 0.0, -1.0],
        [-phi, 0.0, 1.0],
    ];
    let faces = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    let mesh = MeshConnectivity::from_faces(12, faces).unwrap();
    (mesh, VertexPositions(pos))
}

/// Periodic `rows x cols` grid triangulation of the torus. Each grid cell
/// is split along its (i, j)-(i+1, j+1) diagonal. Needs at least 3 in each
/// direction to stay free of multi-edges.
pub fn flat_torus(rows: usize, cols: usize) -> MeshConnectivity {
    assert!(rows >= 3 && cols >= 3, "torus grid must be at least 3x3");
    let id = |i: usize, j: usize| (i % rows) * cols + (j % cols);
    let mut faces = Vec::with_capacity(2 * rows * cols);
    for i in 0..rows {
        for j in 0..cols {
            faces.push([id(i, j), id(i, j + 1), id(i + 1, j + 1)]);
            faces.push([id(i, j), id(i + 1, j + 1), id(i + 1, j)]);
        }
    }
    MeshConnectivity::from_faces(rows * cols, faces).unwrap()
}

/// Flat metric on [`flat_torus`]: unit grid edges, `sqrt(2)` diagonals.
pub fn flat_torus_metric(mesh: &MeshConnectivity, cols: usize) -> PolyhedralMetric {
    let lengths = mesh
        .edges()
        .iter()
        .map(|&[a, b]| {
            let (ra, ca) = (a / cols, a % cols);
            let (rb, cb) = (b / cols, b % cols);
            if ra != rb && ca != cb {
                2f64.sqrt()
            } else {
                1.0
            }
        })
        .collect();
    PolyhedralMetric::new(lengths).unwrap()
}
