//! Farthest points on the regular octahedron.
//!
//! The surface model and its unfolding distance oracle live in [`surface`];
//! [`hexagon`] builds the six developed copies of a probe point and their
//! Voronoi structure; [`farthest`] holds the closed-form farthest-point map
//! and its dividing curve; [`dynamics`] iterates the map.

pub mod dynamics;
pub mod error;
pub mod farthest;
pub mod hexagon;
pub mod planar;
pub mod surface;

pub use error::GeometryError;
pub use planar::{PlaneIsometry, PlanePoint, EPS, SQRT_3};
pub use surface::{Face, OctahedronModel, SurfacePoint};
