//! Explicit Frobenius-splitting checks on flag varieties and Grassmannian
//! towers over prime fields, with exact calculus for parabolic weights.

pub mod gfpoly;
pub mod linalg;
pub mod splitcheck;
pub mod repdims;
pub mod parweights;
pub mod report;
pub mod flagchart;
pub mod grtower;
pub mod stab01;

pub use flagchart::FlagChart;
pub use gfpoly::{Poly, PrimeField};
pub use parweights::{ParData, QuasiParType};
pub use report::Check;
pub use splitcheck::SplitReport;
pub use stab01::FlagConfig;
