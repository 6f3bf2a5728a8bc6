//! Deterministic file exporters: SVG for 2D scenes, OBJ for the 3D scene,
//! CSV for sampled objects. All numbers are formatted locale-free with a
//! fixed number of significant digits, so identical scenes produce
//! byte-identical files on any platform.

mod csv;
mod numfmt;
mod obj;
mod svg;

pub use csv::csv_string;
pub use numfmt::fmt_sig;
pub use obj::{export_obj, obj_string};
pub use svg::{export_svg, svg_string};
