//! Numeric geometry kernel: pure, deterministic algorithms behind the
//! construction commands.

pub mod complex;
pub mod contour;
pub mod geom;
pub mod planar;
pub mod sample;
pub mod spline;
pub mod tessellate;
pub mod unfold;

pub use contour::{marching_squares, refine_crossing};
pub use planar::{plane_view_basis, polygon_area2};
pub use sample::{clip_polyline, sample_curve2, sample_curve3, sample_function_graph, sample_locus};
pub use spline::Spline2;
pub use tessellate::tessellate_surface;
