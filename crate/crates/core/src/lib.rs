//! Beautification of knot diagrams drawn as closed cubic Bezier paths.
//!
//! A rough drawing is read from SVG ([`svg`]), scored by a weighted badness
//! objective ([`badness`]), optimized with optional exact symmetry
//! ([`optimize`], [`symmetry`]) and rendered with understrand breaks
//! ([`render`]).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod badness;
pub mod bezier;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod knot;
pub mod optimize;
pub mod point;
pub mod render;
pub mod svg;
pub mod symmetry;

pub use badness::{BadnessWeights, Breakdown, TopologyFingerprint};
pub use bezier::{CubicSegment, IntersectOptions, Intersection};
pub use error::{Error, Result};
pub use knot::{ControlPoints, Crossing, InkscapePath, KnotVec, MinObj};
pub use optimize::{Algorithm, OptimizeOptions, OptimizeReport};
pub use point::{Point2, Rect};
pub use render::{OverUnderSpec, RenderDoc, RenderOptions};
pub use symmetry::{ReducedVec, SymmetryGroup, SymmetrySpec};
