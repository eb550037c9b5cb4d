use super::{opposite_vertices, MeshConnectivity};
use crate::error::{Error, Result};

/// A closed mesh built by gluing a mesh to its orientation-reversed copy
/// along the boundary.
///
/// Faces `0..F` are the original sheet, faces `F..2F` the reversed copy in
/// the same order. Boundary vertices and edges are shared between sheets;
/// interior ones are duplicated.
#[derive(Clone, Debug)]
pub struct DoubleCover {
    pub mesh: MeshConnectivity,
    /// For each original edge, its covering edges: one for a boundary edge,
    /// two (original sheet first) for an interior edge.
    pub edge_correspondence: Vec<Vec<usize>>,
    /// Original vertex of every vertex in the double.
    pub vertex_origin: Vec<usize>,
}

impl DoubleCover {
    /// Lifts a per-edge quantity to the double by copying each value to all
    /// of its covering edges.
    pub fn push_forward(&self, values: &[f64]) -> Vec<f64> {
        let mut lifted = vec![0.0; self.mesh.edge_count()];
        for (k, covers) in self.edge_correspondence.iter().enumerate() {
            for &c in covers {
                lifted[c] = values[k];
            }
        }
        lifted
    }

    /// Cotangent weights are sums over incident faces, so an identified
    /// boundary edge of the double collects contributions from both sheets.
    /// This lifts target weights of the original mesh accordingly: interior
    /// edges copy their weight, boundary edges receive twice theirs.
    pub fn push_forward_weights(&self, weights: &[f64]) -> Vec<f64> {
        let mut lifted = vec![0.0; self.mesh.edge_count()];
        for (k, covers) in self.edge_correspondence.iter().enumerate() {
            match covers.as_slice() {
                [single] => lifted[*single] = 2.0 * weights[k],
                many => many.iter().for_each(|&c| lifted[c] = weights[k]),
            }
        }
        lifted
    }
}

/// Glues `mesh` and its reversed copy along their common boundary.
pub fn double_cover(mesh: &MeshConnectivity) -> Result<DoubleCover> {
    let boundary = mesh.boundary_vertex_mask();
    if mesh.is_closed() {
        return Err(Error::ClosedMesh);
    }

    let n = mesh.vertex_count();
    let mut sheet_vertex: Vec<usize> = (0..n).collect();
    let mut vertex_origin: Vec<usize> = (0..n).collect();
    for v in (0..n).filter(|&v| !boundary[v]) {
        sheet_vertex[v] = vertex_origin.len();
        vertex_origin.push(v);
    }

    let face_count = mesh.face_count();
    let mut faces = mesh.faces().to_vec();
    for &[a, b, c] in mesh.faces() {
        faces.push([sheet_vertex[a], sheet_vertex[c], sheet_vertex[b]]);
    }

    // corner k of a reversed face corresponds to corner REVERSED[k] of its original
    const REVERSED: [usize; 3] = [0, 2, 1];
    let original_edge = |f: usize, corner: usize| {
        if f < face_count {
            mesh.face_edges(f)[corner]
        } else {
            mesh.face_edges(f - face_count)[REVERSED[corner]]
        }
    };
    let sheet = |f: usize, corner: usize| -> u8 {
        let shared = mesh.is_boundary_edge(original_edge(f, corner));
        u8::from(f >= face_count && !shared)
    };
    let doubled = MeshConnectivity::build(vertex_origin.len(), faces, sheet)?;

    let mut edge_correspondence = vec![Vec::with_capacity(2); mesh.edge_count()];
    for f in 0..doubled.face_count() {
        for corner in 0..3 {
            let covers = &mut edge_correspondence[original_edge(f, corner)];
            let e = doubled.face_edges(f)[corner];
            if !covers.contains(&e) {
                covers.push(e);
            }
        }
    }

    debug_assert!(doubled.faces().iter().enumerate().all(|(f, face)| {
        (0..3).all(|corner| {
            let (a, b) = opposite_vertices(face, corner);
            let [oa, ob] = mesh.edges()[original_edge(f, corner)];
            let (a, b) = (vertex_origin[a], vertex_origin[b]);
            (a.min(b), a.max(b)) == (oa, ob)
        })
    }));

    Ok(DoubleCover {
        mesh: doubled,
        edge_correspondence,
        vertex_origin,
    })
}
