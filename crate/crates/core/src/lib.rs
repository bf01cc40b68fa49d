//! Hausdorff-dimension estimates for graph-directed iterated function
//! systems of affine contractions.
//!
//! The crate computes topological pressure of locally constant potentials,
//! Bowen-equation roots, upper and lower dimension brackets for nonconformal
//! affine systems, quasiregularity constants and numerical asymptotic
//! expansions of the dimension under perturbation. Chaos-game sampling and
//! box counting serve as independent checks.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bowen;
pub mod graph;
pub mod linalg;
pub mod model;
pub mod oracle;
pub mod perturb;
pub mod pressure;
pub mod rotation_block;
pub mod specfile;

pub use graph::{DirectedMultigraph, Edge, Word};
pub use linalg::{SingularSpectrum, SquareMatrix};
pub use model::{AffineMap, AffineSystem, AxisBox, PerturbedFamily};
pub use pressure::{EdgePotential, PressureValue};
pub use specfile::{load_spec, parse_spec, Spec};
