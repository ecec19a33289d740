//! Parabolic structures on `O^r` over P¹ at `y_1, z_1, z_2`: the genericity
//! condition on the flags, the special lines and hyperplanes in the fibre at
//! a free point `z`, degree-0 destabilizer search and a rank-2 brute-force
//! stability oracle.
//!
//! All flags are recorded in `W = H^0(O^r) = k^r`; the evaluation maps are
//! identities in this trivialization. `E_{x,i}` is the kernel of
//! `E_x ↠ Q_i(E)_x`, so a full flag has `dim E_{x,i} = r − i` and `E_{y_1,1}`
//! is a line.

mod config;
mod generic;
mod semistab;

pub use config::{parse_flag_config, write_flag_config, FlagConfig, MarkedPoint, P1Point};
pub use generic::{
    genericity_check_512, normal_form, random_flag_config, special_loci, standard_flag_config, Condition512,
    GenericityReport, SpecialLoci,
};
pub use semistab::{
    omega_c0, rank2_bruteforce, subspace_destabilizer_search, DestabReport, Rank2Report, Rank2Witness,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StabError {
    #[error("BadConfig: {0}")]
    BadConfig(String),
    #[error("UnsupportedRank: {0}")]
    UnsupportedRank(usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
