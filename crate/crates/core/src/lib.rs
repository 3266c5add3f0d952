//! Geometry of c-chains.
//!
//! A polygonal chain `(p_1, ..., p_n)` is a *c-chain* when every triple
//! `i < j < k` satisfies `|p_i p_j| + |p_j p_k| <= c |p_i p_k|`. This crate
//! provides the chain model with exact brute-force references, the fractal
//! lower-bound families, an accelerated recognizer built on a recursion tree
//! of ellipse range-counting indexes, and closed-form stretch-factor bounds.
//!
//! All user-facing vertex indices are 1-based.

// `!(x >= lo)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod chain;
pub mod error;
pub mod fractal;
pub mod geometry;
pub mod range_search;
pub mod recognition;

pub use bounds::{BestBound, BoundReport};
pub use chain::{MinC, PolygonalChain, Ratio, SimplicityReport, TripleWitness};
pub use error::{Error, Result};
pub use fractal::{FractalParams, GeneratorReport, Variant};
pub use geometry::{FocalEllipse, Orientation, Point, Segment, TouchPolicy};
pub use range_search::{Backend, BuildStats, RangeCounter};
pub use recognition::{DecisionOutcome, NodeId, RecursionTree};

/// Relative tolerance shared by every floating-point comparison.
pub const EPS_REL: f64 = 1e-9;

/// Absolute floor, multiplied by the magnitude of the inputs at each use.
pub const EPS_ABS: f64 = 1e-12;

/// `EPS_ABS` scaled to the magnitude of the given coordinates (never below `EPS_ABS`).
pub(crate) fn abs_eps<'a>(points: impl IntoIterator<Item = &'a Point>) -> f64 {
    let scale = points
        .into_iter()
        .fold(1.0_f64, |m, p| m.max(p.x.abs()).max(p.y.abs()));
    EPS_ABS * scale
}
