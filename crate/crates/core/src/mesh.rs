//! Triangle mesh substrate: representation, validation, boundary loop
//! extraction, and the basic measured quantities (areas, lengths, Euler
//! characteristic, vertex normals).
//!
//! A [`TriangleMesh`] is immutable once built. `TriangleMesh::new` performs
//! the full structural audit (index range, degenerate faces, orientation
//! consistency, manifoldness, boundary chaining) so that every downstream
//! operation can assume a clean oriented surface-with-boundary.

use std::collections::HashMap;

use nalgebra::{Point3, Rotation3, Vector3};

use crate::error::MeshError;
use crate::numeric::KahanSum;

/// Triangles with area below this are rejected at validation.
pub const DEGENERATE_AREA: f64 = 1e-14;
/// Triangles with aspect ratio (longest edge / shortest altitude) above this
/// are rejected at validation; cotangent weights blow up on them.
pub const DEGENERATE_ASPECT: f64 = 1e6;

/// An indexed, consistently oriented triangle surface with boundary.
#[derive(Debug, Clone)]
pub struct TriangleMesh {
    vertices: Vec<Point3<f64>>,
    faces: Vec<[u32; 3]>,
    boundary_loops: Vec<Vec<u32>>,
    boundary_vertex: Vec<bool>,
}

/// Euler characteristic bookkeeping for a connected surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SurfaceTopology {
    pub euler_char: i64,
    pub genus: i64,
    pub num_boundary_loops: usize,
}

impl TriangleMesh {
    /// Build a mesh and run the full validity audit.
    pub fn new(vertices: Vec<Point3<f64>>, faces: Vec<[u32; 3]>) -> Result<Self, MeshError> {
        if faces.is_empty() {
            return Err(MeshError::Empty);
        }
        let n = vertices.len();
        for (fi, f) in faces.iter().enumerate() {
            for &v in f {
                if v as usize >= n {
                    return Err(MeshError::IndexOutOfRange {
                        face: fi,
                        vertex: v,
                        num_vertices: n,
                    });
                }
            }
            if f[0] == f[1] || f[1] == f[2] || f[2] == f[0] {
                let repeated = if f[0] == f[1] || f[0] == f[2] {
                    f[0]
                } else {
                    f[1]
                };
                return Err(MeshError::DegenerateFace {
                    face: fi,
                    vertex: repeated,
                });
            }
            let (area, aspect) = triangle_area_aspect(
                &vertices[f[0] as usize],
                &vertices[f[1] as usize],
                &vertices[f[2] as usize],
            );
            if area < DEGENERATE_AREA || aspect > DEGENERATE_ASPECT {
                return Err(MeshError::DegenerateTriangle {
                    face: fi,
                    area,
                    aspect,
                });
            }
        }

        // Each directed edge may appear once; a duplicate means inconsistent
        // orientation or a non-manifold edge.
        let mut directed: HashMap<(u32, u32), usize> = HashMap::with_capacity(3 * faces.len());
        for (fi, f) in faces.iter().enumerate() {
            for k in 0..3 {
                let e = (f[k], f[(k + 1) % 3]);
                if let Some(&other) = directed.get(&e) {
                    return Err(MeshError::InconsistentOrientation {
                        from: e.0,
                        to: e.1,
                        first_face: other,
                        second_face: fi,
                    });
                }
                directed.insert(e, fi);
            }
        }

        // Fan-walk every vertex star: all incident faces must be reachable
        // across shared edges at the vertex (disk or half-disk stars only).
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (fi, f) in faces.iter().enumerate() {
            for &v in f {
                incident[v as usize].push(fi);
            }
        }
        for (v, inc) in incident.iter().enumerate() {
            if inc.is_empty() {
                continue;
            }
            if !star_is_single_fan(v as u32, inc, &faces, &directed) {
                return Err(MeshError::NonManifoldVertex { vertex: v as u32 });
            }
        }

        // Boundary half-edges are the directed edges without a reverse
        // partner; they chain into loops with the surface on the left.
        let mut next_boundary: HashMap<u32, u32> = HashMap::new();
        for (fi, f) in faces.iter().enumerate() {
            let _ = fi;
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                if !directed.contains_key(&(b, a)) {
                    if next_boundary.insert(a, b).is_some() {
                        return Err(MeshError::NonManifoldVertex { vertex: a });
                    }
                }
            }
        }
        let mut boundary_vertex = vec![false; n];
        for (&a, &b) in next_boundary.iter() {
            boundary_vertex[a as usize] = true;
            boundary_vertex[b as usize] = true;
        }
        let mut boundary_loops = Vec::new();
        let mut visited = vec![false; n];
        for start in 0..n as u32 {
            if !boundary_vertex[start as usize] || visited[start as usize] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut cur = start;
            loop {
                if visited[cur as usize] {
                    // Arrived at a vertex already consumed by another loop.
                    return Err(MeshError::OpenBoundaryChain { vertex: cur });
                }
                visited[cur as usize] = true;
                cycle.push(cur);
                match next_boundary.get(&cur) {
                    Some(&nxt) => cur = nxt,
                    None => return Err(MeshError::OpenBoundaryChain { vertex: cur }),
                }
                if cur == start {
                    break;
                }
            }
            boundary_loops.push(cycle);
        }

        Ok(Self {
            vertices,
            faces,
            boundary_loops,
            boundary_vertex,
        })
    }

    /// Replace vertex positions, keeping connectivity and boundary structure.
    ///
    /// Skips the structural audit; the caller owns geometric sanity (the
    /// solver monitors triangle quality itself).
    pub fn with_positions(&self, vertices: Vec<Point3<f64>>) -> TriangleMesh {
        assert_eq!(vertices.len(), self.vertices.len());
        TriangleMesh {
            vertices,
            faces: self.faces.clone(),
            boundary_loops: self.boundary_loops.clone(),
            boundary_vertex: self.boundary_vertex.clone(),
        }
    }

    pub fn vertices(&self) -> &[Point3<f64>] {
        &self.vertices
    }

    pub fn faces(&self) -> &[[u32; 3]] {
        &self.faces
    }

    pub fn boundary_loops(&self) -> &[Vec<u32>] {
        &self.boundary_loops
    }

    pub fn is_boundary_vertex(&self, v: u32) -> bool {
        self.boundary_vertex[v as usize]
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    /// Number of undirected edges.
    pub fn num_edges(&self) -> usize {
        let boundary: usize = self.boundary_loops.iter().map(Vec::len).sum();
        (3 * self.faces.len() + boundary) / 2
    }

    pub fn face_points(&self, f: usize) -> [&Point3<f64>; 3] {
        let [a, b, c] = self.faces[f];
        [
            &self.vertices[a as usize],
            &self.vertices[b as usize],
            &self.vertices[c as usize],
        ]
    }

    /// Twice-area vector of a face (cross product of edge vectors, halved).
    pub fn face_area_vector(&self, f: usize) -> Vector3<f64> {
        let [a, b, c] = self.face_points(f);
        0.5 * (b - a).cross(&(c - a))
    }

    pub fn face_area(&self, f: usize) -> f64 {
        self.face_area_vector(f).norm()
    }

    pub fn face_normal(&self, f: usize) -> Vector3<f64> {
        self.face_area_vector(f).normalize()
    }

    /// Sum of face areas, compensated, in face index order.
    pub fn surface_area(&self) -> f64 {
        let mut acc = KahanSum::new();
        for f in 0..self.faces.len() {
            acc.add(self.face_area(f));
        }
        acc.value()
    }

    /// Sum of boundary edge lengths over all loops.
    pub fn boundary_length(&self) -> f64 {
        let mut acc = KahanSum::new();
        for cycle in &self.boundary_loops {
            for (k, &a) in cycle.iter().enumerate() {
                let b = cycle[(k + 1) % cycle.len()];
                acc.add((self.vertices[b as usize] - self.vertices[a as usize]).norm());
            }
        }
        acc.value()
    }

    /// V - E + F.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.num_edges() as i64 + self.faces.len() as i64
    }

    /// Euler characteristic, genus, and boundary count of a connected mesh.
    pub fn topology(&self) -> Result<SurfaceTopology, MeshError> {
        let components = self.face_components();
        if components != 1 {
            return Err(MeshError::Disconnected { components });
        }
        let euler_char = self.euler_characteristic();
        let k = self.boundary_loops.len();
        let genus = (2 - k as i64 - euler_char) / 2;
        Ok(SurfaceTopology {
            euler_char,
            genus,
            num_boundary_loops: k,
        })
    }

    /// Number of connected components of the face adjacency graph.
    pub fn face_components(&self) -> usize {
        let mut directed: HashMap<(u32, u32), usize> = HashMap::with_capacity(3 * self.faces.len());
        for (fi, f) in self.faces.iter().enumerate() {
            for k in 0..3 {
                directed.insert((f[k], f[(k + 1) % 3]), fi);
            }
        }
        let mut seen = vec![false; self.faces.len()];
        let mut components = 0;
        let mut stack = Vec::new();
        for start in 0..self.faces.len() {
            if seen[start] {
                continue;
            }
            components += 1;
            seen[start] = true;
            stack.push(start);
            while let Some(fi) = stack.pop() {
                let f = self.faces[fi];
                for k in 0..3 {
                    let (a, b) = (f[k], f[(k + 1) % 3]);
                    if let Some(&g) = directed.get(&(b, a)) {
                        if !seen[g] {
                            seen[g] = true;
                            stack.push(g);
                        }
                    }
                }
            }
        }
        components
    }

    /// Area-weighted average of incident face normals, normalized.
    pub fn vertex_normals(&self) -> Result<Vec<Vector3<f64>>, MeshError> {
        let mut sums = vec![Vector3::zeros(); self.vertices.len()];
        for (fi, f) in self.faces.iter().enumerate() {
            let av = self.face_area_vector(fi);
            for &v in f {
                sums[v as usize] += av;
            }
        }
        for (v, s) in sums.iter_mut().enumerate() {
            let norm = s.norm();
            if norm < 1e-30 {
                return Err(MeshError::DegenerateNormal { vertex: v as u32 });
            }
            *s /= norm;
        }
        Ok(sums)
    }

    /// Worst triangle quality 4*sqrt(3)*A / (l1^2+l2^2+l3^2) over all faces
    /// (1 for equilateral, 0 for degenerate).
    pub fn min_triangle_quality(&self) -> f64 {
        let mut worst = f64::INFINITY;
        for f in 0..self.faces.len() {
            worst = worst.min(triangle_quality(self.face_points(f)));
        }
        worst
    }

    /// Rigidly transformed copy.
    pub fn transformed(&self, rotation: &Rotation3<f64>, translation: &Vector3<f64>) -> Self {
        let vertices = self
            .vertices
            .iter()
            .map(|p| rotation * p + translation)
            .collect();
        self.with_positions(vertices)
    }

    /// Dilated copy x -> t x.
    pub fn scaled(&self, t: f64) -> Self {
        let vertices = self
            .vertices
            .iter()
            .map(|p| Point3::from(p.coords * t))
            .collect();
        self.with_positions(vertices)
    }

    /// Deterministic fingerprint of connectivity and vertex data, used to
    /// detect mismatched mesh/report pairs.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut mix = |x: u64| {
            h ^= x;
            h = h.wrapping_mul(0x1000_0000_01b3);
        };
        mix(self.vertices.len() as u64);
        mix(self.faces.len() as u64);
        for p in &self.vertices {
            for c in p.coords.iter() {
                mix(c.to_bits());
            }
        }
        for f in &self.faces {
            for &v in f {
                mix(v as u64);
            }
        }
        h
    }
}

fn triangle_area_aspect(a: &Point3<f64>, b: &Point3<f64>, c: &Point3<f64>) -> (f64, f64) {
    let e0 = b - a;
    let e1 = c - b;
    let e2 = a - c;
    let area = 0.5 * e0.cross(&(-e2)).norm();
    let longest = e0.norm().max(e1.norm()).max(e2.norm());
    if area <= 0.0 {
        return (area, f64::INFINITY);
    }
    // Shortest altitude is 2A over the longest edge.
    let aspect = longest * longest / (2.0 * area);
    (area, aspect)
}

pub(crate) fn triangle_quality(points: [&Point3<f64>; 3]) -> f64 {
    let [a, b, c] = points;
    let l0 = (b - a).norm_squared();
    let l1 = (c - b).norm_squared();
    let l2 = (a - c).norm_squared();
    let area = 0.5 * (b - a).cross(&(c - a)).norm();
    4.0 * 3.0f64.sqrt() * area / (l0 + l1 + l2)
}

/// Walk the star of `v` across shared edges; true if all incident faces are
/// reachable from the first one (disk or half-disk star).
fn star_is_single_fan(
    v: u32,
    incident: &[usize],
    faces: &[[u32; 3]],
    directed: &HashMap<(u32, u32), usize>,
) -> bool {
    if incident.len() <= 1 {
        return true;
    }
    let mut reached: HashMap<usize, bool> = incident.iter().map(|&f| (f, false)).collect();
    let mut stack = vec![incident[0]];
    *reached.get_mut(&incident[0]).unwrap() = true;
    let mut count = 1;
    while let Some(fi) = stack.pop() {
        let f = faces[fi];
        for k in 0..3 {
            let (a, b) = (f[k], f[(k + 1) % 3]);
            if a != v && b != v {
                continue;
            }
            // Neighbor across the shared edge, if any.
            if let Some(&g) = directed.get(&(b, a)) {
                if let Some(flag) = reached.get_mut(&g) {
                    if !*flag {
                        *flag = true;
                        count += 1;
                        stack.push(g);
                    }
                }
            }
        }
    }
    count == incident.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64, z: f64) -> Point3<f64> {
        Point3::new(x, y, z)
    }

    fn quad_strip() -> TriangleMesh {
        // Two triangles sharing an edge, consistently oriented.
        TriangleMesh::new(
            vec![p(0., 0., 0.), p(1., 0., 0.), p(1., 1., 0.), p(0., 1., 0.)],
            vec![[0, 1, 2], [0, 2, 3]],
        )
        .unwrap()
    }

    #[test]
    fn single_right_triangle_area() {
        let m = TriangleMesh::new(
            vec![p(0., 0., 0.), p(1., 0., 0.), p(0., 1., 0.)],
            vec![[0, 1, 2]],
        )
        .unwrap();
        assert_eq!(m.surface_area(), 0.5);
        assert_eq!(m.boundary_loops().len(), 1);
        assert_eq!(m.euler_characteristic(), 1);
    }

    #[test]
    fn rejects_out_of_range_index() {
        let err = TriangleMesh::new(vec![p(0., 0., 0.), p(1., 0., 0.)], vec![[0, 1, 5]]);
        assert!(matches!(
            err,
            Err(MeshError::IndexOutOfRange { face: 0, vertex: 5, .. })
        ));
    }

    #[test]
    fn rejects_repeated_vertex() {
        let err = TriangleMesh::new(
            vec![p(0., 0., 0.), p(1., 0., 0.), p(0., 1., 0.)],
            vec![[0, 1, 1]],
        );
        assert!(matches!(err, Err(MeshError::DegenerateFace { face: 0, .. })));
    }

    #[test]
    fn rejects_sliver_triangle() {
        let err = TriangleMesh::new(
            vec![p(0., 0., 0.), p(1., 0., 0.), p(0.5, 1e-13, 0.)],
            vec![[0, 1, 2]],
        );
        assert!(matches!(err, Err(MeshError::DegenerateTriangle { face: 0, .. })));
    }

    #[test]
    fn rejects_inconsistent_orientation() {
        // Second face winds the shared edge the same way as the first.
        let err = TriangleMesh::new(
            vec![p(0., 0., 0.), p(1., 0., 0.), p(1., 1., 0.), p(0., 1., 0.)],
            vec![[0, 1, 2], [0, 3, 2]],
        );
        assert!(matches!(err, Err(MeshError::InconsistentOrientation { .. })));
    }

    #[test]
    fn rejects_bowtie_vertex() {
        // Two triangles meeting only at vertex 0.
        let err = TriangleMesh::new(
            vec![
                p(0., 0., 0.),
                p(1., 0., 0.),
                p(1., 1., 0.),
                p(-1., 0., 0.),
                p(-1., -1., 0.),
            ],
            vec![[0, 1, 2], [0, 3, 4]],
        );
        assert!(matches!(err, Err(MeshError::NonManifoldVertex { vertex: 0 })));
    }

    #[test]
    fn boundary_loop_of_strip() {
        let m = quad_strip();
        assert_eq!(m.boundary_loops().len(), 1);
        assert_eq!(m.boundary_loops()[0].len(), 4);
        let t = m.topology().unwrap();
        assert_eq!(t.euler_char, 1);
        assert_eq!(t.genus, 0);
        assert_eq!(t.num_boundary_loops, 1);
    }

    #[test]
    fn disconnected_topology_errors() {
        let m = TriangleMesh::new(
            vec![
                p(0., 0., 0.),
                p(1., 0., 0.),
                p(0., 1., 0.),
                p(5., 0., 0.),
                p(6., 0., 0.),
                p(5., 1., 0.),
            ],
            vec![[0, 1, 2], [3, 4, 5]],
        )
        .unwrap();
        assert!(matches!(
            m.topology(),
            Err(MeshError::Disconnected { components: 2 })
        ));
    }

    #[test]
    fn flat_strip_normals_point_up() {
        let m = quad_strip();
        for n in m.vertex_normals().unwrap() {
            assert!((n - Vector3::new(0., 0., 1.)).norm() < 1e-15);
        }
    }

    #[test]
    fn rigid_motion_preserves_measures() {
        let m = quad_strip();
        let rot = Rotation3::from_euler_angles(0.3, -1.1, 2.0);
        let moved = m.transformed(&rot, &Vector3::new(5.0, -2.0, 0.5));
        assert!((moved.surface_area() - m.surface_area()).abs() < 1e-14);
        assert!((moved.boundary_length() - m.boundary_length()).abs() < 1e-13);
    }

    #[test]
    fn dilation_scales_measures() {
        let m = quad_strip();
        let t = 1.7;
        let scaled = m.scaled(t);
        assert!((scaled.surface_area() - t * t * m.surface_area()).abs() < 1e-13);
        assert!((scaled.boundary_length() - t * m.boundary_length()).abs() < 1e-13);
    }
}
