//! Exact-arithmetic kernel for normal and 2-normal surfaces in closed
//! 3-manifold triangulations.
//!
//! The crate works with triangulations given as face gluing tables and with
//! surfaces given by their disc-type coordinate vectors (four triangle types
//! and three quadrilateral types per tetrahedron, plus three octagon types in
//! 2-normal mode). On top of the coordinate layer it provides:
//!
//! * canonical geometric realization of admissible vectors, with component
//!   splitting and surface classification,
//! * cutting a triangulation along a realized surface and analysing the
//!   complement regions,
//! * complete Hilbert-basis enumeration of the matching equations, and the
//!   fundamental surfaces of complement components,
//! * iterated construction of maximal systems of disjoint normal spheres and
//!   their 2-normal extensions, together with exact weight-bound reports.
//!
//! All surface arithmetic is done in arbitrary-precision integers; nothing is
//! ever rounded or silently truncated. Enumerations that would exceed a
//! configured cap fail with a resource error instead of returning partial
//! answers.

pub mod census;
pub mod coords;
pub mod error;
pub mod hilbert;
pub mod homology;
pub mod complement;
pub mod construct;
pub mod lattice;
pub mod realize;
pub mod perm;
pub mod tri;

pub use error::{Error, Result};
