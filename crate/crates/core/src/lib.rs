//! Zero-forcing logic circuits.
//!
//! The crate simulates the color-change rule on colored graphs, builds gate
//! gadgets, compiles Boolean formulas into glued gadget circuits (directly for
//! monotone formulas, through a dual-rail encoding otherwise), and analyzes
//! timing, back forcing and what parties holding part of a circuit can learn.

pub mod analysis;
pub mod boolfn;
pub mod circuit;
pub mod dot;
pub mod engine;
pub mod error;
pub mod formula;
pub mod gadget;
pub mod graph;
pub mod netlist;
pub mod zfs;

pub use error::{Error, Result};
pub use graph::{Color, ColoredGraph, VertexId, VertexSet};
