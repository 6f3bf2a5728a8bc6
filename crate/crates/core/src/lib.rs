//! Headless interpreter for GeoGebra-style construction scripts.
//!
//! A script (`.ggs`, one statement per line) defines named objects — sliders,
//! points, functions, curves, surfaces, solids — wired into a dependency
//! graph. Slider changes recompute exactly the affected objects. Scenes are
//! exported deterministically to SVG (2D views), OBJ (3D view) and CSV.

pub mod ast;
pub mod commands;
pub mod diag;
pub mod eval;
pub mod export;
pub mod graph;
pub mod kernel;
pub mod lexer;
pub mod parser;
pub mod scene;
pub mod value;

pub use ast::{Expr, Script, Statement};
pub use diag::Diagnostic;
pub use graph::{Construction, NodeId};
pub use value::{EvalConfig, GeoValue, View};
