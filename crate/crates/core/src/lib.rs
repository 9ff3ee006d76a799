//! Numerical laboratory for genus-zero free boundary minimal surfaces in the
//! unit ball: mesh substrate, reference generators, constrained area descent,
//! radial-graph verification, and the discrete Steklov eigenproblem.

pub mod curvature;
pub mod error;
pub mod generators;
pub mod mesh;
pub mod numeric;
pub mod obj;

pub use error::{MeshError, RadialError, SolveError, SpectralError};
pub use mesh::{SurfaceTopology, TriangleMesh};
