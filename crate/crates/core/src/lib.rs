//! Exact Wirtinger numbers ω(D) and plain sphere numbers ρ(D) of link
//! diagrams.
//!
//! A diagram is parsed from a PD code ([`diagram`]), its regions and dual
//! multigraph are traced ([`dual`]), and [`coloring`] searches seed sets in
//! increasing size, saturating each one under Wirtinger moves or loop moves
//! along simple dual cycles. Every answer comes with a [`certificate`] that
//! can be replayed independently. [`census`] runs the computation over whole
//! knot tables.

pub mod census;
pub mod certificate;
pub mod coloring;
pub mod diagram;
pub mod dual;
pub mod error;
pub mod strandset;
pub mod unionfind;

pub use certificate::{verify, Certificate, FormatError, Reject};
pub use coloring::{
    closure, invariants, invariants_within, omega, rho, saturate, saturate_with, ColoringState,
    InvariantResult, Invariants, Mode, Move, Saturation, SearchLimits,
};
pub use diagram::{parse_pd, Diagram, EdgeLabel, StrandId};
pub use dual::{DualGraph, FaceId};
pub use error::{ColoringError, DiagramError, SearchError};
pub use strandset::StrandSet;
