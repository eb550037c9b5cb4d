//! Combinatorial triangle meshes.
//!
//! A [`MeshConnectivity`] stores faces together with a canonically ordered
//! edge list. Edges are sorted lexicographically on `(min vertex, max vertex)`,
//! and every face corner is mapped to the edge opposite to it, so per-edge
//! quantities (lengths, weights) line up with per-corner quantities (angles).

mod double_cover;
mod obj;

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};
use crate::metric::PolyhedralMetric;

pub use double_cover::{double_cover, DoubleCover};
pub use obj::{load_obj, parse_obj, write_obj};

/// Vertex coordinates in 3-space.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct VertexPositions(pub Vec<[f64; 3]>);

impl VertexPositions {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[[f64; 3]] {
        &self.0
    }
}

/// Faces, edges and their incidences for a manifold triangle mesh.
///
/// Immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeshConnectivity {
    vertex_count: usize,
    faces: Vec<[usize; 3]>,
    edges: Vec<[usize; 2]>,
    edge_faces: Vec<Vec<usize>>,
    face_edges: Vec<[usize; 3]>,
}

/// Vertices of the edge opposite `corner` in a face.
#[inline]
pub(crate) fn opposite_vertices(face: &[usize; 3], corner: usize) -> (usize, usize) {
    (face[(corner + 1) % 3], face[(corner + 2) % 3])
}

impl MeshConnectivity {
    /// Builds connectivity from a face list. Edges are identified by their
    /// unordered vertex pair.
    pub fn from_faces(vertex_count: usize, faces: Vec<[usize; 3]>) -> Result<Self> {
        Self::build(vertex_count, faces, |_, _| 0)
    }

    /// Builds connectivity where the edge opposite `(face, corner)` is keyed by
    /// its vertex pair together with `sheet(face, corner)`. Two face sides with
    /// the same vertex pair but different sheets become distinct edges, which
    /// is how glued double covers keep both copies of an interior edge whose
    /// endpoints both lie on the boundary. Ties in the canonical order are
    /// broken by the sheet tag.
    pub(crate) fn build<F>(vertex_count: usize, faces: Vec<[usize; 3]>, sheet: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> u8,
    {
        if faces.is_empty() {
            return Err(Error::EmptyMesh);
        }
        for (f, face) in faces.iter().enumerate() {
            if let Some(&index) = face.iter().find(|&&v| v >= vertex_count) {
                return Err(Error::DanglingVertex {
                    face: f,
                    index,
                    vertex_count,
                });
            }
            if face[0] == face[1] || face[1] == face[2] || face[0] == face[2] {
                return Err(Error::RepeatedVertex { face: f });
            }
        }

        let mut sides: BTreeMap<(usize, usize, u8), Vec<(usize, usize)>> = BTreeMap::new();
        for (f, face) in faces.iter().enumerate() {
            for corner in 0..3 {
                let (a, b) = opposite_vertices(face, corner);
                let key = (a.min(b), a.max(b), sheet(f, corner));
                sides.entry(key).or_default().push((f, corner));
            }
        }

        let mut edges = Vec::with_capacity(sides.len());
        let mut edge_faces = Vec::with_capacity(sides.len());
        let mut face_edges = vec![[usize::MAX; 3]; faces.len()];
        for ((a, b, _), incident) in sides {
            if incident.len() > 2 {
                return Err(Error::NonManifoldEdge {
                    a,
                    b,
                    faces: incident.len(),
                });
            }
            let e = edges.len();
            edges.push([a, b]);
            edge_faces.push(incident.iter().map(|&(f, _)| f).collect());
            for (f, corner) in incident {
                face_edges[f][corner] = e;
            }
        }

        Ok(Self {
            vertex_count,
            faces,
            edges,
            edge_faces,
            face_edges,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    /// Edge endpoints `[min, max]` in canonical order.
    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    /// Faces incident to edge `e` (one for boundary edges, two otherwise).
    pub fn edge_faces(&self, e: usize) -> &[usize] {
        &self.edge_faces[e]
    }

    /// Edge indices opposite the three corners of face `f`.
    pub fn face_edges(&self, f: usize) -> [usize; 3] {
        self.face_edges[f]
    }

    /// First edge joining `a` and `b`, if any.
    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        let key = [a.min(b), a.max(b)];
        let start = self.edges.partition_point(|e| *e < key);
        (self.edges.get(start) == Some(&key)).then_some(start)
    }

    pub fn is_boundary_edge(&self, e: usize) -> bool {
        self.edge_faces[e].len() == 1
    }

    /// Indices of edges with a single incident face, ascending.
    pub fn boundary_edges(&self) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| self.is_boundary_edge(e))
            .collect()
    }

    pub fn is_closed(&self) -> bool {
        self.edge_faces.iter().all(|f| f.len() == 2)
    }

    /// Flags for vertices lying on at least one boundary edge.
    pub fn boundary_vertex_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.vertex_count];
        for e in self.boundary_edges() {
            let [a, b] = self.edges[e];
            mask[a] = true;
            mask[b] = true;
        }
        mask
    }

    /// `V - E + F`.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// Number of connected components among vertices used by faces.
    /// Vertices not referenced by any face are ignored.
    pub fn connected_components(&self) -> usize {
        let mut adjacency = vec![Vec::new(); self.vertex_count];
        let mut used = vec![false; self.vertex_count];
        for &[a, b] in &self.edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
            used[a] = true;
            used[b] = true;
        }
        let mut seen = vec![false; self.vertex_count];
        let mut components = 0;
        let mut queue = VecDeque::new();
        for start in 0..self.vertex_count {
            if !used[start] || seen[start] {
                continue;
            }
            components += 1;
            seen[start] = true;
            queue.push_back(start);
            while let Some(v) = queue.pop_front() {
                for &w in &adjacency[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        components
    }

    /// Gathers a per-edge quantity for the three corners of face `f`.
    pub(crate) fn face_values(&self, f: usize, per_edge: &[f64]) -> [f64; 3] {
        let [a, b, c] = self.face_edges[f];
        [per_edge[a], per_edge[b], per_edge[c]]
    }
}

/// Euclidean edge lengths of an embedded mesh.
pub fn induced_metric(
    mesh: &MeshConnectivity,
    positions: &VertexPositions,
) -> Result<PolyhedralMetric> {
    if positions.len() != mesh.vertex_count() {
        return Err(Error::LengthMismatch {
            expected: mesh.vertex_count(),
            got: positions.len(),
        });
    }
    let p = positions.as_slice();
    let lengths: Vec<f64> = mesh
        .edges()
        .iter()
        .map(|&[a, b]| {
            let d: f64 = (0..3).map(|i| (p[a][i] - p[b][i]).powi(2)).sum();
            d.sqrt()
        })
        .collect();
    if let Some(edge) = lengths.iter().position(|&d| d == 0.0) {
        return Err(Error::ZeroLengthEdge { edge });
    }
    let metric = PolyhedralMetric::new(lengths)?;
    metric.validate(mesh)?;
    Ok(metric)
}
