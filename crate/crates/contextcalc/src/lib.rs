//! Toolkit for computing contextuality witnesses and inaccessible-information
//! bounds from quantum descriptions or raw prepare-measure probability
//! tables, with explicit ontological models to verify the bounds numerically.
//!
//! Modules:
//! - [`qmath`]: dense complex linear algebra, quantum states and distances.
//! - [`optable`]: operational theories as probability tables and the
//!   LP-based distinguishability measures.
//! - [`qgames`]: quantum-side minimax constants, guessing probabilities,
//!   qubit closed forms, and the Haar threshold.
//! - [`ontomodels`]: sphere-grid ontological models and their bound audits.
//! - [`noise`]: channels, average gate fidelity, and noise thresholds.

pub mod noise;
pub mod ontomodels;
pub mod optable;
pub mod qgames;
pub mod qmath;

pub use qmath::ExtReal;
