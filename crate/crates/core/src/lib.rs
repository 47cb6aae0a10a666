//! Combinatorics of the second Abel map of a nodal curve with a marked
//! component: tails and their nested families, twisters and quasistable
//! twists, blowups of the square of the curve, and the lifted graph.

pub mod blowup;
pub mod error;
pub mod graph;
pub mod harness;
pub mod jacobian;
pub mod lift2;
pub mod tails;

pub use error::{Error, GraphError, Result};
pub use graph::{CurveGraph, Subcurve};
