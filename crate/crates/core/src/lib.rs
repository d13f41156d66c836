//! Numerical library for modular-invariant lattice energies on the upper
//! half-plane.
//!
//! The central objects are the unit-density lattice sums
//!
//! ```text
//! theta(a, z) = sum_{ (m,n) in Z^2 }                 exp(-pi a |mz+n|^2 / Im z)
//! M(a, z)     = sum_{ (m,n) in Z^2 } (|mz+n|^2/Im z) exp(-pi a |mz+n|^2 / Im z)
//! ```
//!
//! together with their derivatives, the one-dimensional Jacobi theta machinery
//! used to evaluate them, global minimization over lattice shapes, the
//! rectangular/square/hexagonal phase thresholds, and a grid-audit harness for
//! the quantitative inequalities the analysis rests on.

pub mod audit;
pub mod energy;
pub mod error;
pub mod halfplane;
pub mod series;
pub mod solver;
pub mod theta;

pub use error::{Error, Result};
pub use halfplane::{CauchyGreenTensor, HalfPlanePoint, LatticeBasis, ModularMove, ModularWord};
pub use series::{SeriesValue, TruncationBudget};
pub use theta::DerivOrder;

pub use energy::{EnergyEval, GammaAProfile, GammaCProfile, Method, PotentialSpec};
pub use solver::{PhaseDiagramRow, PhaseLabel, ThresholdReport};
