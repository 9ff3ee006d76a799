//! Discrete curvature operators.
//!
//! Gauss curvature is the angle defect normalized by the mixed Voronoi area,
//! mean curvature is the cotangent Laplacian applied to positions and halved,
//! and boundary geodesic curvature is the turning angle over the dual
//! boundary length. With these choices the discrete Gauss-Bonnet identity
//!
//!   sum(angle defects) + sum(boundary turning angles) = 2 pi chi
//!
//! is combinatorial and holds to round-off on every valid mesh.

use nalgebra::Vector3;

use crate::mesh::TriangleMesh;
use crate::numeric::KahanSum;

#[derive(Debug, Clone)]
pub struct DiscreteCurvatures {
    /// 2 pi minus the incident angle sum at interior vertices; pi minus the
    /// angle sum (the turning angle) at boundary vertices.
    pub angle_defect: Vec<f64>,
    /// Mixed Voronoi area per vertex; the areas partition each triangle, so
    /// they sum exactly to the surface area.
    pub mixed_area: Vec<f64>,
    /// Angle defect / mixed area at interior vertices (None on the boundary).
    pub gauss: Vec<Option<f64>>,
    /// Halved raw cotangent Laplacian of the positions over the mixed area;
    /// the magnitude is the full mean curvature kappa_1 + kappa_2 (2 on the
    /// unit sphere), pointing along the outward normal on convex surfaces.
    pub mean_curvature_vector: Vec<Vector3<f64>>,
    /// Turning angle / half the adjacent boundary edge lengths (None in the
    /// interior).
    pub boundary_geodesic: Vec<Option<f64>>,
}

pub fn discrete_curvatures(mesh: &TriangleMesh) -> DiscreteCurvatures {
    let n = mesh.num_vertices();
    let mut angle_sum = vec![KahanSum::new(); n];
    let mut mixed_area = vec![0.0f64; n];
    let mut laplace = vec![Vector3::zeros(); n];

    for (fi, f) in mesh.faces().iter().enumerate() {
        let pts = mesh.face_points(fi);
        let mut cot = [0.0f64; 3];
        let mut ang = [0.0f64; 3];
        for k in 0..3 {
            let a = pts[k];
            let b = pts[(k + 1) % 3];
            let c = pts[(k + 2) % 3];
            let u = b - a;
            let v = c - a;
            let cross = u.cross(&v).norm();
            let dot = u.dot(&v);
            ang[k] = cross.atan2(dot);
            cot[k] = dot / cross;
        }
        for k in 0..3 {
            angle_sum[f[k] as usize].add(ang[k]);
        }

        // Cotangent weights: edge (k, k+1) is opposite corner k+2.
        for k in 0..3 {
            let i = f[k] as usize;
            let j = f[(k + 1) % 3] as usize;
            let w = 0.5 * cot[(k + 2) % 3];
            let d = mesh.vertices()[i] - mesh.vertices()[j];
            laplace[i] += w * d;
            laplace[j] -= w * d;
        }

        // Meyer mixed area: Voronoi split for non-obtuse triangles, else
        // half the area at the obtuse corner and a quarter elsewhere.
        let area = mesh.face_area(fi);
        let obtuse = (0..3).find(|&k| cot[k] < 0.0);
        match obtuse {
            None => {
                for k in 0..3 {
                    let a = pts[k];
                    let b = pts[(k + 1) % 3];
                    let c = pts[(k + 2) % 3];
                    let l_ab = (b - a).norm_squared();
                    let l_ac = (c - a).norm_squared();
                    // 1/8 (|ab|^2 cot(angle at c) + |ac|^2 cot(angle at b))
                    mixed_area[f[k] as usize] +=
                        0.125 * (l_ab * cot[(k + 2) % 3] + l_ac * cot[(k + 1) % 3]);
                }
            }
            Some(ko) => {
                for k in 0..3 {
                    mixed_area[f[k] as usize] += if k == ko { 0.5 * area } else { 0.25 * area };
                }
            }
        }
    }

    let mut angle_defect = vec![0.0f64; n];
    let mut gauss = vec![None; n];
    let mut mean_curvature_vector = vec![Vector3::zeros(); n];
    for v in 0..n {
        let sum = angle_sum[v].value();
        if mesh.is_boundary_vertex(v as u32) {
            angle_defect[v] = std::f64::consts::PI - sum;
        } else {
            angle_defect[v] = 2.0 * std::f64::consts::PI - sum;
            if mixed_area[v] > 0.0 {
                gauss[v] = Some(angle_defect[v] / mixed_area[v]);
            }
        }
        if mixed_area[v] > 0.0 {
            mean_curvature_vector[v] = laplace[v] / mixed_area[v];
        }
    }

    let mut boundary_geodesic = vec![None; n];
    for cycle in mesh.boundary_loops() {
        let m = cycle.len();
        for (k, &v) in cycle.iter().enumerate() {
            let prev = cycle[(k + m - 1) % m] as usize;
            let next = cycle[(k + 1) % m] as usize;
            let vp = mesh.vertices()[v as usize];
            let dual = 0.5
                * ((vp - mesh.vertices()[prev]).norm() + (mesh.vertices()[next] - vp).norm());
            boundary_geodesic[v as usize] = Some(angle_defect[v as usize] / dual);
        }
    }

    DiscreteCurvatures {
        angle_defect,
        mixed_area,
        gauss,
        mean_curvature_vector,
        boundary_geodesic,
    }
}

/// Mixed Voronoi areas only (quadrature weights).
pub fn mixed_voronoi_areas(mesh: &TriangleMesh) -> Vec<f64> {
    discrete_curvatures(mesh).mixed_area
}

/// | sum(angle defects) + sum(turning angles) - 2 pi chi |.
pub fn gauss_bonnet_residual(mesh: &TriangleMesh) -> f64 {
    let curv = discrete_curvatures(mesh);
    let mut acc = KahanSum::new();
    for d in &curv.angle_defect {
        acc.add(*d);
    }
    (acc.value() - 2.0 * std::f64::consts::PI * mesh.euler_characteristic() as f64).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use nalgebra::{Point3, Vector3};
    use std::f64::consts::PI;

    #[test]
    fn flat_disk_defects_and_turning() {
        let mesh = generators::generate_disk(6, 3, &Vector3::z_axis()).unwrap();
        let curv = discrete_curvatures(&mesh);
        let mut turning = 0.0;
        for v in 0..mesh.num_vertices() {
            if mesh.is_boundary_vertex(v as u32) {
                turning += curv.angle_defect[v];
            } else {
                assert!(
                    curv.angle_defect[v].abs() < 1e-12,
                    "interior defect {} at vertex {v}",
                    curv.angle_defect[v]
                );
            }
        }
        assert!((turning - 2.0 * PI).abs() < 1e-10);
    }

    #[test]
    fn sphere_defect_sum_is_4pi() {
        let mesh = generators::generate_sphere(3).unwrap();
        let curv = discrete_curvatures(&mesh);
        let total: f64 = curv.angle_defect.iter().sum();
        assert!((total - 4.0 * PI).abs() < 1e-10 * mesh.num_vertices() as f64);
    }

    #[test]
    fn gauss_bonnet_holds_on_catenoid() {
        let params = generators::CatenoidParams::solve();
        let mesh = generators::generate_catenoid(&params, 16, 32).unwrap();
        let budget = 1e-10 * (mesh.num_vertices() + mesh.num_faces()) as f64;
        assert!(gauss_bonnet_residual(&mesh) < budget);
    }

    #[test]
    fn mixed_areas_partition_surface() {
        let params = generators::CatenoidParams::solve();
        let mesh = generators::generate_catenoid(&params, 8, 16).unwrap();
        let total: f64 = mixed_voronoi_areas(&mesh).iter().sum();
        assert!((total - mesh.surface_area()).abs() < 1e-10);
    }

    #[test]
    fn unit_sphere_mean_curvature_is_two() {
        // H = 2 for the unit sphere; the discrete vector points inward
        // (the Laplacian of positions is the negative curvature normal).
        let mesh = generators::generate_sphere(4).unwrap();
        let curv = discrete_curvatures(&mesh);
        for (v, h) in curv.mean_curvature_vector.iter().enumerate() {
            let radial = mesh.vertices()[v].coords;
            assert!(
                (h.norm() - 2.0).abs() < 0.05,
                "|H| = {} at vertex {v}",
                h.norm()
            );
            assert!(h.dot(&radial) > 0.0);
        }
    }

    #[test]
    fn flat_square_interior_mean_curvature_vanishes() {
        // 2x2 grid of a flat square: the single interior vertex is a local
        // average of its neighbors, so the cotangent Laplacian vanishes.
        let mut vertices = Vec::new();
        for j in 0..3 {
            for i in 0..3 {
                vertices.push(Point3::new(i as f64, j as f64, 0.0));
            }
        }
        let mut faces = Vec::new();
        for j in 0..2u32 {
            for i in 0..2u32 {
                let a = j * 3 + i;
                faces.push([a, a + 1, a + 4]);
                faces.push([a, a + 4, a + 3]);
            }
        }
        let mesh = TriangleMesh::new(vertices, faces).unwrap();
        let curv = discrete_curvatures(&mesh);
        assert!(curv.mean_curvature_vector[4].norm() < 1e-14);
    }
}
