//! Big-cell charts of the full flag variety of `W = F_p^r`, the fixed
//! subspace configuration `(L_i, L, H, W_i, S_i)`, the determinantal
//! sections `d_i`, `e_i`, their product `σ`, vanishing orders along the
//! special loci and the `δ_k` chain.
//!
//! A chart is a constant frame `G` times a unipotent lower-triangular matrix
//! `U(x)`; `V_i` is spanned by the first `i` columns of `G·U(x)`.

mod config;
mod delta;
mod sections;
mod verify;

pub use config::{standard_config, SubspaceConfig};
pub use delta::{delta_chain, DeltaChainReport, DeltaLevel};
pub use sections::{
    divisor_sections, generic_chart, sigma_lemma59, vanishing_orders_at_special_loci,
    DivisorKind, DivisorSection, LocusOrder, SigmaReport,
};
pub use verify::{flag_verify, FlagVerifyOptions, FlagVerifyReport};

use crate::gfpoly::{PolyError, Poly, PrimeField};
use crate::linalg::{identity, Mat};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlagError {
    #[error("DegenerateConfig: {0}")]
    DegenerateConfig(String),
    #[error("NotInChart: {0}")]
    NotInChart(String),
    #[error("no general-position frame found over F_{0}")]
    NoGenericFrame(u64),
    #[error("rank {0} is below 2")]
    BadRank(usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlagChart {
    r: usize,
    field: PrimeField,
    base: Mat,
    block: usize,
    vars: Vec<(usize, usize)>,
    frame: Vec<Vec<Poly>>,
}

impl FlagChart {
    /// Chart `G · diag(U_block(x), I)`; with `block = r` this is a chart of
    /// the whole flag variety, with smaller blocks it is the chart of the
    /// flags that agree with the columns of `G` from position `block` on.
    pub fn new(field: PrimeField, base: Mat, block: usize) -> Self {
        let r = base.len();
        assert!(block <= r && base.iter().all(|row| row.len() == r));
        let vars: Vec<(usize, usize)> = (0..block)
            .flat_map(|j| (j + 1..block).map(move |i| (i, j)))
            .collect();
        let n = vars.len();
        let frame = (0..r)
            .map(|a| {
                (0..r)
                    .map(|j| {
                        let mut e = Poly::constant(field, n, base[a][j]);
                        for (v, &(i, jj)) in vars.iter().enumerate() {
                            if jj == j && base[a][i] != 0 {
                                let t = Poly::var(field, n, v).scale(base[a][i]);
                                e = &e + &t;
                            }
                        }
                        e
                    })
                    .collect()
            })
            .collect();
        FlagChart { r, field, base, block, vars, frame }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn base(&self) -> &Mat {
        &self.base
    }

    pub fn block(&self) -> usize {
        self.block
    }

    /// Chart variables as `(row, column)` pairs, 0-based, column-major.
    pub fn vars(&self) -> &[(usize, usize)] {
        &self.vars
    }

    pub fn var_index(&self, i: usize, j: usize) -> Option<usize> {
        self.vars.iter().position(|&v| v == (i, j))
    }

    /// `frame[row][col]` over the chart ring.
    pub fn frame(&self) -> &[Vec<Poly>] {
        &self.frame
    }

    /// Determinant of `[vecs | first m columns of the frame]`, square by
    /// construction.
    pub fn det_with(&self, vecs: &[Vec<u64>], m: usize) -> Poly {
        assert_eq!(vecs.len() + m, self.r, "block sizes must fill the matrix");
        let n = self.nvars();
        let rows = (0..self.r)
            .map(|a| {
                let mut row: Vec<Poly> =
                    vecs.iter().map(|v| Poly::constant(self.field, n, v[a])).collect();
                row.extend(self.frame[a][..m].iter().cloned());
                row
            })
            .collect();
        crate::linalg::poly_det(rows)
    }
}

/// The standard big cell centred at the coordinate flag.
pub fn big_cell_chart(r: usize, p: u64) -> Result<FlagChart, FlagError> {
    if r < 2 {
        return Err(FlagError::BadRank(r));
    }
    let field = PrimeField::new(p)?;
    Ok(FlagChart::new(field, identity(r), r))
}
