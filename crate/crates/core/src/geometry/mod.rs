//! Convex bodies in the plane: construction, diameter and width, standard
//! position, and chord profiles along the diameter.

pub mod calipers;
pub mod frame;
pub mod polygon;
pub mod profile;
pub mod shapes;

pub use calipers::{diameter, width, Diameter, Width};
pub use frame::{check_normalized, normalize, BodyFrame, NormalizedBody};
pub use polygon::{ConvexPolygon, Vec2};
pub use profile::{h_derivative_bound_check, slice_profile, HControlReport, SliceProfile};
