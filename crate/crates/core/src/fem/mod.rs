//! P1 finite elements for the Laplacian on convex polygons.

pub mod assemble;
pub mod eigs;
pub mod mesh;
pub mod probe;

pub use assemble::assemble;
pub use eigs::{mixed_eigs, neumann_eigs, FemSpectrum};
pub use mesh::{triangulate, BoundaryTag, MeshQuality, TriMesh};
pub use probe::{eta_decomposition, linf_ratio, probe_eigenfunction, EigenfunctionProbe, EtaIdentity};
