//! Error types for mesh validation and the numerical pipelines.

use thiserror::Error;

/// Structural or geometric defects detected while building a mesh.
#[derive(Debug, Error)]
pub enum MeshError {
    #[error("face {face} references vertex {vertex} but the mesh has {num_vertices} vertices")]
    IndexOutOfRange {
        face: usize,
        vertex: u32,
        num_vertices: usize,
    },
    #[error("face {face} repeats vertex {vertex}")]
    DegenerateFace { face: usize, vertex: u32 },
    #[error("face {face} is geometrically degenerate (area {area:.3e}, aspect ratio {aspect:.3e})")]
    DegenerateTriangle { face: usize, area: f64, aspect: f64 },
    #[error("directed edge ({from},{to}) appears in faces {first_face} and {second_face}: orientation is inconsistent or the edge is non-manifold")]
    InconsistentOrientation {
        from: u32,
        to: u32,
        first_face: usize,
        second_face: usize,
    },
    #[error("vertex {vertex} has a non-disk star (its incident faces do not form a single fan)")]
    NonManifoldVertex { vertex: u32 },
    #[error("boundary at vertex {vertex} does not chain into closed loops")]
    OpenBoundaryChain { vertex: u32 },
    #[error("mesh has no faces")]
    Empty,
    #[error("mesh is disconnected ({components} face components); verification assumes one surface")]
    Disconnected { components: usize },
    #[error("vertex {vertex} has a degenerate normal (zero-length area-weighted average)")]
    DegenerateNormal { vertex: u32 },
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("OBJ parse error at line {line}: {message}")]
    ObjParse { line: usize, message: String },
}

/// Errors from the constrained area-descent solver.
#[derive(Debug, Error)]
pub enum SolveError {
    #[error("boundary vertex {vertex} starts {distance:.3e} away from the unit sphere (tolerance {tolerance:.1e})")]
    BoundaryOffSphere {
        vertex: u32,
        distance: f64,
        tolerance: f64,
    },
    #[error("mesh degenerated at iteration {iteration}: triangle quality {quality:.3e} fell below the floor {floor:.3e}; consider remeshing or a smaller step")]
    Degenerated {
        iteration: usize,
        quality: f64,
        floor: f64,
    },
    #[error("mesh has no boundary; the free boundary problem needs one")]
    NoBoundary,
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

/// Errors from radial projection and the graph-field checks.
#[derive(Debug, Error)]
pub enum RadialError {
    #[error("vertex {vertex} is within {norm:.3e} of the origin; radial projection is undefined there")]
    DegenerateProjection { vertex: u32, norm: f64 },
    #[error("vertex {vertex} has radial height u = {u:.6} outside [0, 1); the surface is not a graph between the center and the sphere")]
    HeightOutOfRange { vertex: u32, u: f64 },
    #[error("the projection is not injective; the requested check needs a radial graph")]
    NotInjective,
    #[error("domain vertex {vertex} has norm {norm:.6}, expected 1 within {tolerance:.1e}")]
    DomainOffSphere {
        vertex: u32,
        norm: f64,
        tolerance: f64,
    },
    #[error("mesh has no boundary")]
    NoBoundary,
    #[error("field and surface meshes have different connectivity ({field} vs {surface} vertices)")]
    ConnectivityMismatch { field: usize, surface: usize },
    #[error("epsilon {epsilon} is outside (0, {width:.6}), the half-width of the projected band")]
    EpsilonOutOfRange { epsilon: f64, width: f64 },
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

/// Errors from the Steklov eigenproblem.
#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("mesh has no boundary; the Steklov problem needs one")]
    NoBoundary,
    #[error("interior stiffness block is not positive definite (mesh may be degenerate)")]
    InteriorFactorization,
    #[error("spectral result and report were computed on different meshes (fingerprint {result:#x} vs {report:#x})")]
    MeshMismatch { result: u64, report: u64 },
    #[error(transparent)]
    Mesh(#[from] MeshError),
}
