//! Reference surfaces with closed-form ground truth: the critical catenoid,
//! the equatorial disk, spheres, and near-sphere shells used as solver seeds.

use nalgebra::{Point3, Unit, Vector3};
use thiserror::Error;

use crate::error::MeshError;
use crate::mesh::TriangleMesh;
use crate::numeric::{bisect, SplitMix64};

#[derive(Debug, Error)]
pub enum GeneratorError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

/// Parameters of the rotationally symmetric free boundary minimal annulus.
///
/// The boundary parameter `t0` is the unique positive root of
/// `t tanh t = 1`; the scale `c = 1/sqrt(cosh^2 t0 + t0^2)` puts the boundary
/// circles on the unit sphere. The surface is
/// `X(t, theta) = c (cosh t cos theta, cosh t sin theta, t)` for
/// `t in [-t0, t0]`.
#[derive(Debug, Clone, Copy)]
pub struct CatenoidParams {
    pub t0: f64,
    pub c: f64,
    /// Closed-form surface area 2 pi c^2 (t0 + sinh t0 cosh t0).
    pub area_sigma: f64,
    /// Closed-form boundary length 4 pi c cosh t0 (two circles).
    pub boundary_len: f64,
    /// Spherical area of the radial projection: the sphere minus two polar
    /// caps of height cos = c t0, i.e. 4 pi c t0.
    pub area_omega: f64,
    /// Cosine of the polar angle of the boundary circles, c t0.
    pub cap_cosine: f64,
}

impl CatenoidParams {
    /// Solve the boundary condition by bisection on [1, 1.5].
    pub fn solve() -> Self {
        let t0 = bisect(|t| t * t.tanh() - 1.0, 1.0, 1.5, 60);
        let c = 1.0 / (t0.cosh().powi(2) + t0 * t0).sqrt();
        let area_sigma = 2.0 * std::f64::consts::PI * c * c * (t0 + t0.sinh() * t0.cosh());
        let boundary_len = 4.0 * std::f64::consts::PI * c * t0.cosh();
        let area_omega = 4.0 * std::f64::consts::PI * c * t0;
        CatenoidParams {
            t0,
            c,
            area_sigma,
            boundary_len,
            area_omega,
            cap_cosine: c * t0,
        }
    }

    /// Polar angle of the northern boundary circle, acos(c t0).
    pub fn colatitude_min(&self) -> f64 {
        self.cap_cosine.acos()
    }

    /// Angular width of the projected band on the sphere.
    pub fn band_width(&self) -> f64 {
        std::f64::consts::PI - 2.0 * self.colatitude_min()
    }

    /// Distance from the origin to the surface along the ray of polar angle
    /// `phi`, i.e. the root of `r sin phi = c cosh(r cos phi / c)` in (0, 1].
    ///
    /// `phi` must lie in the projected band.
    pub fn radius_at_colatitude(&self, phi: f64) -> f64 {
        let phi0 = self.colatitude_min();
        debug_assert!(
            phi >= phi0 - 1e-12 && phi <= std::f64::consts::PI - phi0 + 1e-12,
            "phi {phi} outside the band"
        );
        let (s, co) = phi.sin_cos();
        bisect(|r| r * s - self.c * (r * co / self.c).cosh(), 1e-9, 1.0, 100)
    }

    /// Radial graph height u(phi) = 1 - r(phi).
    pub fn graph_height(&self, phi: f64) -> f64 {
        1.0 - self.radius_at_colatitude(phi)
    }

    /// du/dphi by implicit differentiation of the profile equation.
    pub fn graph_height_slope(&self, phi: f64) -> f64 {
        let r = self.radius_at_colatitude(phi);
        let (s, co) = phi.sin_cos();
        let sh = (r * co / self.c).sinh();
        let dr = -r * (co + s * sh) / (s - co * sh);
        -dr
    }
}

/// Mesh the catenoid on an (n_t + 1) x n_theta grid, uniform in t.
pub fn generate_catenoid(
    params: &CatenoidParams,
    n_t: usize,
    n_theta: usize,
) -> Result<TriangleMesh, GeneratorError> {
    if n_t < 2 || n_theta < 3 {
        return Err(GeneratorError::InvalidArgument(format!(
            "catenoid resolution ({n_t}, {n_theta}) below (2, 3)"
        )));
    }
    let mut vertices = Vec::with_capacity((n_t + 1) * n_theta);
    for i in 0..=n_t {
        let t = -params.t0 + 2.0 * params.t0 * i as f64 / n_t as f64;
        let rho = params.c * t.cosh();
        for j in 0..n_theta {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / n_theta as f64;
            vertices.push(Point3::new(
                rho * theta.cos(),
                rho * theta.sin(),
                params.c * t,
            ));
        }
    }
    let idx = |i: usize, j: usize| (i * n_theta + j % n_theta) as u32;
    let mut faces = Vec::with_capacity(2 * n_t * n_theta);
    for i in 0..n_t {
        for j in 0..n_theta {
            // Winding chosen so normals point away from the origin.
            faces.push([idx(i, j), idx(i, j + 1), idx(i + 1, j + 1)]);
            faces.push([idx(i, j), idx(i + 1, j + 1), idx(i + 1, j)]);
        }
    }
    Ok(TriangleMesh::new(vertices, faces)?)
}

/// Fan-triangulated regular n-gon refined `levels` times; new boundary
/// vertices are pushed onto the unit circle in the disk plane each level.
pub fn generate_disk(
    n: usize,
    levels: u32,
    plane_normal: &Unit<Vector3<f64>>,
) -> Result<TriangleMesh, GeneratorError> {
    if n < 3 {
        return Err(GeneratorError::InvalidArgument(format!(
            "disk base resolution {n} below 3"
        )));
    }
    let (e1, e2) = orthonormal_frame(plane_normal);
    let mut vertices = vec![Point3::origin()];
    for k in 0..n {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
        vertices.push(Point3::from(theta.cos() * e1 + theta.sin() * e2));
    }
    let mut faces = Vec::with_capacity(n);
    for k in 0..n as u32 {
        faces.push([0, k + 1, (k + 1) % n as u32 + 1]);
    }
    let mut mesh = TriangleMesh::new(vertices, faces)?;
    for _ in 0..levels {
        mesh = subdivide(&mesh, |p, on_boundary| {
            if on_boundary {
                Point3::from(p.coords / p.coords.norm())
            } else {
                p
            }
        })?;
    }
    Ok(mesh)
}

/// Icosahedron subdivided `subdivisions` times, all vertices on the unit
/// sphere.
pub fn generate_sphere(subdivisions: u32) -> Result<TriangleMesh, GeneratorError> {
    let t = (1.0 + 5.0f64.sqrt()) / 2.0;
    let raw = [
        (-1.0, t, 0.0),
        (1.0, t, 0.0),
        (-1.0, -t, 0.0),
        (1.0, -t, 0.0),
        (0.0, -1.0, t),
        (0.0, 1.0, t),
        (0.0, -1.0, -t),
        (0.0, 1.0, -t),
        (t, 0.0, -1.0),
        (t, 0.0, 1.0),
        (-t, 0.0, -1.0),
        (-t, 0.0, 1.0),
    ];
    let vertices: Vec<Point3<f64>> = raw
        .iter()
        .map(|&(x, y, z)| {
            let v = Vector3::new(x, y, z);
            Point3::from(v / v.norm())
        })
        .collect();
    let faces: Vec<[u32; 3]> = vec![
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
    let mut mesh = TriangleMesh::new(vertices, faces)?;
    for _ in 0..subdivisions {
        mesh = subdivide(&mesh, |p, _| Point3::from(p.coords / p.coords.norm()))?;
    }
    Ok(mesh)
}

/// Subdivided sphere with `num_windows` spherical caps of angular radius
/// `window_radius` removed; a genus-zero shell with k = num_windows boundary
/// loops, every vertex on the unit sphere.
pub fn generate_near_sphere_shell(
    num_windows: usize,
    window_radius: f64,
    subdivisions: u32,
) -> Result<TriangleMesh, GeneratorError> {
    if num_windows == 0 {
        return Err(GeneratorError::InvalidArgument(
            "need at least one window".into(),
        ));
    }
    if !(window_radius > 0.0 && window_radius < std::f64::consts::FRAC_PI_2) {
        return Err(GeneratorError::InvalidArgument(format!(
            "window radius {window_radius} outside (0, pi/2)"
        )));
    }
    let centers = window_centers(num_windows);
    for i in 0..centers.len() {
        for j in (i + 1)..centers.len() {
            let gap = centers[i].dot(&centers[j]).clamp(-1.0, 1.0).acos();
            if gap <= 2.0 * window_radius {
                return Err(GeneratorError::InvalidArgument(format!(
                    "windows {i} and {j} overlap: separation {gap:.4} <= 2 x radius"
                )));
            }
        }
    }
    let sphere = generate_sphere(subdivisions)?;
    let cos_radius = window_radius.cos();
    let mut kept_faces = Vec::new();
    for (fi, f) in sphere.faces().iter().enumerate() {
        let pts = sphere.face_points(fi);
        let centroid = (pts[0].coords + pts[1].coords + pts[2].coords).normalize();
        let inside = centers.iter().any(|c| centroid.dot(c) > cos_radius);
        if !inside {
            kept_faces.push(*f);
        }
    }
    // Compact the vertex list and snap everything back to the sphere.
    let mut remap = vec![u32::MAX; sphere.num_vertices()];
    let mut vertices = Vec::new();
    for f in &mut kept_faces {
        for v in f.iter_mut() {
            if remap[*v as usize] == u32::MAX {
                remap[*v as usize] = vertices.len() as u32;
                let p = sphere.vertices()[*v as usize];
                vertices.push(Point3::from(p.coords / p.coords.norm()));
            }
            *v = remap[*v as usize];
        }
    }
    Ok(TriangleMesh::new(vertices, kept_faces)?)
}

/// Multiply each selected vertex radius by (1 + amplitude * xi) with xi
/// drawn deterministically from `seed`, uniform in [-1, 1).
pub fn radial_noise(
    mesh: &TriangleMesh,
    amplitude: f64,
    seed: u64,
    interior_only: bool,
) -> TriangleMesh {
    let mut rng = SplitMix64::new(seed);
    let vertices = mesh
        .vertices()
        .iter()
        .enumerate()
        .map(|(v, p)| {
            let xi = rng.next_symmetric();
            if interior_only && mesh.is_boundary_vertex(v as u32) {
                *p
            } else {
                Point3::from(p.coords * (1.0 + amplitude * xi))
            }
        })
        .collect();
    mesh.with_positions(vertices)
}

/// 1:4 midpoint subdivision. `adjust` post-processes each new midpoint and
/// receives whether it lies on a boundary edge; original vertices also pass
/// through `adjust` with their boundary flag.
pub fn subdivide(
    mesh: &TriangleMesh,
    adjust: impl Fn(Point3<f64>, bool) -> Point3<f64>,
) -> Result<TriangleMesh, MeshError> {
    use std::collections::HashMap;
    let mut vertices: Vec<Point3<f64>> = mesh
        .vertices()
        .iter()
        .enumerate()
        .map(|(v, p)| adjust(*p, mesh.is_boundary_vertex(v as u32)))
        .collect();
    // An undirected edge is on the boundary iff its reverse directed edge is
    // missing; collect directed edges first.
    let mut directed = std::collections::HashSet::new();
    for f in mesh.faces() {
        for k in 0..3 {
            directed.insert((f[k], f[(k + 1) % 3]));
        }
    }
    let mut midpoints: HashMap<(u32, u32), u32> = HashMap::new();
    let mut faces = Vec::with_capacity(4 * mesh.num_faces());
    for f in mesh.faces() {
        let mut mids = [0u32; 3];
        for k in 0..3 {
            let (a, b) = (f[k], f[(k + 1) % 3]);
            let key = (a.min(b), a.max(b));
            mids[k] = *midpoints.entry(key).or_insert_with(|| {
                let on_boundary =
                    !directed.contains(&(a, b)) || !directed.contains(&(b, a));
                let mid = Point3::from(
                    0.5 * (mesh.vertices()[a as usize].coords
                        + mesh.vertices()[b as usize].coords),
                );
                vertices.push(adjust(mid, on_boundary));
                (vertices.len() - 1) as u32
            });
        }
        let [a, b, c] = *f;
        let [mab, mbc, mca] = mids;
        faces.push([a, mab, mca]);
        faces.push([b, mbc, mab]);
        faces.push([c, mca, mbc]);
        faces.push([mab, mbc, mca]);
    }
    TriangleMesh::new(vertices, faces)
}

fn window_centers(num_windows: usize) -> Vec<Vector3<f64>> {
    match num_windows {
        1 => vec![Vector3::z()],
        2 => vec![Vector3::z(), -Vector3::z()],
        m => {
            // Fibonacci lattice: deterministic, roughly even spread.
            let golden = std::f64::consts::PI * (3.0 - 5.0f64.sqrt());
            (0..m)
                .map(|i| {
                    let z = 1.0 - (2.0 * i as f64 + 1.0) / m as f64;
                    let rho = (1.0 - z * z).sqrt();
                    let theta = golden * i as f64;
                    Vector3::new(rho * theta.cos(), rho * theta.sin(), z)
                })
                .collect()
        }
    }
}

fn orthonormal_frame(normal: &Unit<Vector3<f64>>) -> (Vector3<f64>, Vector3<f64>) {
    let n = normal.into_inner();
    let helper = if n.x.abs() < 0.9 {
        Vector3::x()
    } else {
        Vector3::y()
    };
    let e1 = n.cross(&helper).normalize();
    let e2 = n.cross(&e1);
    (e1, e2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn catenoid_parameters_match_closed_forms() {
        let p = CatenoidParams::solve();
        assert!((p.t0 * p.t0.tanh() - 1.0).abs() < 1e-12);
        assert!((p.t0 - 1.19968).abs() < 1e-4);
        assert!((p.c - 0.46048).abs() < 1e-4);
        // Boundary circles sit on the unit sphere.
        assert!((p.c * p.c * (p.t0.cosh().powi(2) + p.t0 * p.t0) - 1.0).abs() < 1e-14);
        assert!((p.area_omega - 6.9422).abs() < 1e-3);
        assert!((2.0 * p.area_sigma - p.boundary_len).abs() < 1e-12);
    }

    #[test]
    fn catenoid_mesh_measures_converge() {
        let p = CatenoidParams::solve();
        let mesh = generate_catenoid(&p, 64, 128).unwrap();
        assert!((mesh.surface_area() - p.area_sigma).abs() / p.area_sigma < 5e-3);
        assert!((mesh.boundary_length() - p.boundary_len).abs() / p.boundary_len < 5e-3);
        let topo = mesh.topology().unwrap();
        assert_eq!(topo.euler_char, 0);
        assert_eq!(topo.num_boundary_loops, 2);
        assert_eq!(topo.genus, 0);
    }

    #[test]
    fn catenoid_boundary_on_unit_sphere() {
        let p = CatenoidParams::solve();
        let mesh = generate_catenoid(&p, 8, 16).unwrap();
        for cycle in mesh.boundary_loops() {
            for &v in cycle {
                let r = mesh.vertices()[v as usize].coords.norm();
                assert!((r - 1.0).abs() < 1e-12, "boundary vertex radius {r}");
            }
        }
    }

    #[test]
    fn catenoid_normals_point_outward() {
        let p = CatenoidParams::solve();
        let mesh = generate_catenoid(&p, 16, 32).unwrap();
        let normals = mesh.vertex_normals().unwrap();
        for (v, n) in normals.iter().enumerate() {
            let radial = mesh.vertices()[v].coords.normalize();
            assert!(n.dot(&radial) > 0.0, "inward normal at vertex {v}");
        }
    }

    #[test]
    fn catenoid_profile_inverts_parametrization() {
        let p = CatenoidParams::solve();
        // Point on the surface at parameter t, compared with the ray solve.
        for &t in &[0.0f64, 0.3, -0.7, 1.0] {
            let rho = p.c * t.cosh();
            let z = p.c * t;
            let r = (rho * rho + z * z).sqrt();
            let phi = (z / r).acos();
            assert!((p.radius_at_colatitude(phi) - r).abs() < 1e-12);
        }
    }

    #[test]
    fn catenoid_profile_slope_matches_finite_differences() {
        let p = CatenoidParams::solve();
        let h = 1e-6;
        for &phi in &[1.2, 1.4, std::f64::consts::FRAC_PI_2, 1.8] {
            let fd = (p.graph_height(phi + h) - p.graph_height(phi - h)) / (2.0 * h);
            let an = p.graph_height_slope(phi);
            assert!((fd - an).abs() < 1e-7, "phi={phi}: fd={fd} analytic={an}");
        }
    }

    #[test]
    fn disk_measures() {
        let mesh = generate_disk(6, 4, &Vector3::z_axis()).unwrap();
        assert!((mesh.surface_area() - PI).abs() / PI < 5e-3);
        assert!((mesh.boundary_length() - 2.0 * PI).abs() / (2.0 * PI) < 5e-3);
        let topo = mesh.topology().unwrap();
        assert_eq!(topo.euler_char, 1);
        assert_eq!(topo.genus, 0);
        assert_eq!(topo.num_boundary_loops, 1);
    }

    #[test]
    fn disk_refinement_converges_monotonically() {
        let mut last = f64::INFINITY;
        for levels in 2..=5 {
            let mesh = generate_disk(6, levels, &Vector3::z_axis()).unwrap();
            let err = (mesh.surface_area() - PI).abs();
            assert!(err < last, "disk area error did not decrease at level {levels}");
            last = err;
        }
    }

    #[test]
    fn sphere_area_and_topology() {
        let mesh = generate_sphere(3).unwrap();
        let topo = mesh.topology().unwrap();
        assert_eq!(topo.euler_char, 2);
        assert_eq!(topo.num_boundary_loops, 0);
        assert!((mesh.surface_area() - 4.0 * PI).abs() / (4.0 * PI) < 1e-2);
        // Outward orientation.
        let normals = mesh.vertex_normals().unwrap();
        for (v, n) in normals.iter().enumerate() {
            assert!(n.dot(&mesh.vertices()[v].coords) > 0.0);
        }
    }

    #[test]
    fn shell_topology_two_windows() {
        let mesh = generate_near_sphere_shell(2, 0.4, 3).unwrap();
        let topo = mesh.topology().unwrap();
        assert_eq!(topo.euler_char, 0);
        assert_eq!(topo.num_boundary_loops, 2);
        assert_eq!(topo.genus, 0);
    }

    #[test]
    fn shell_topology_four_windows() {
        let mesh = generate_near_sphere_shell(4, 0.3, 3).unwrap();
        let topo = mesh.topology().unwrap();
        assert_eq!(topo.euler_char, -2);
        assert_eq!(topo.num_boundary_loops, 4);
        assert_eq!(topo.genus, 0);
    }

    #[test]
    fn shell_area_close_to_sphere_minus_caps() {
        let radius = 0.2f64;
        let mesh = generate_near_sphere_shell(2, radius, 4).unwrap();
        let expected = 4.0 * PI - 2.0 * 2.0 * PI * (1.0 - radius.cos());
        // Jagged cap boundaries only track the circles to one edge length.
        assert!((mesh.surface_area() - expected).abs() / expected < 0.05);
    }

    #[test]
    fn overlapping_windows_rejected() {
        // Three spread windows of angular radius 1.1 must collide pairwise.
        assert!(matches!(
            generate_near_sphere_shell(3, 1.1, 2),
            Err(GeneratorError::InvalidArgument(_))
        ));
    }

    #[test]
    fn noise_is_deterministic_and_fixes_boundary() {
        let p = CatenoidParams::solve();
        let mesh = generate_catenoid(&p, 8, 16).unwrap();
        let a = radial_noise(&mesh, 0.01, 7, true);
        let b = radial_noise(&mesh, 0.01, 7, true);
        for (x, y) in a.vertices().iter().zip(b.vertices()) {
            assert_eq!(x, y);
        }
        for cycle in a.boundary_loops() {
            for &v in cycle {
                assert_eq!(a.vertices()[v as usize], mesh.vertices()[v as usize]);
            }
        }
    }
}
