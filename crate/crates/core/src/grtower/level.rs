use super::TowerError;
use crate::gfpoly::{Poly, PrimeField};
use crate::linalg::poly_det;

/// One level `Gr_j` of the tower in its chart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerLevel {
    r: usize,
    j: usize,
    field: PrimeField,
    blocks: Vec<usize>,
    flag_vars: Vec<(usize, usize)>,
    pivots: Vec<usize>,
    fibre_vars: Vec<(usize, usize)>,
    frames: [Vec<Vec<Poly>>; 2],
    kmat: Vec<Vec<Poly>>,
}

/// Block sizes of the flag type `(1^j, r−2j, 1^j)`, empty blocks dropped.
fn flag_blocks(r: usize, j: usize) -> Vec<usize> {
    let mut b = vec![1; j];
    if r > 2 * j {
        b.push(r - 2 * j);
    }
    b.extend(std::iter::repeat_n(1, j));
    b
}

fn block_index(blocks: &[usize]) -> Vec<usize> {
    blocks.iter().enumerate().flat_map(|(b, &s)| std::iter::repeat_n(b, s)).collect()
}

/// Pivot rows of the fibre chart at level `j`.
fn pivots(r: usize, j: usize) -> Vec<usize> {
    let n = r - 2 * j;
    match n {
        0 => Vec::new(),
        1 => vec![0],
        _ => {
            let inner = pivots(r, j + 1);
            let m = n - 2;
            let mut p = vec![0, n];
            p.extend(inner.iter().map(|&q| if q < m { q + 1 } else { n + 1 + (q - m) }));
            p
        }
    }
}

/// `2·dim Flag_{(1^j, r−2j, 1^j)}(k^r) + (r−2j)²`.
pub fn expected_dim(r: usize, j: usize) -> usize {
    let blocks = flag_blocks(r, j);
    let flag = (r * r - blocks.iter().map(|b| b * b).sum::<usize>()) / 2;
    2 * flag + (r - 2 * j).pow(2)
}

impl TowerLevel {
    fn new(r: usize, j: usize, field: PrimeField) -> Self {
        let blocks = flag_blocks(r, j);
        let bidx = block_index(&blocks);
        let flag_vars: Vec<(usize, usize)> = (0..r)
            .flat_map(|c| (c + 1..r).map(move |a| (a, c)))
            .filter(|&(a, c)| bidx[a] > bidx[c])
            .collect();
        let n = r - 2 * j;
        let pivots = pivots(r, j);
        let fibre_vars: Vec<(usize, usize)> = (0..n)
            .flat_map(|c| (0..2 * n).map(move |row| (row, c)))
            .filter(|(row, _)| !pivots.contains(row))
            .collect();
        let nf = flag_vars.len();
        let nvars = 2 * nf + fibre_vars.len();
        let frame = |offset: usize| -> Vec<Vec<Poly>> {
            (0..r)
                .map(|a| {
                    (0..r)
                        .map(|c| {
                            if a == c {
                                Poly::one(field, nvars)
                            } else if let Some(v) = flag_vars.iter().position(|&x| x == (a, c)) {
                                Poly::var(field, nvars, offset + v)
                            } else {
                                Poly::zero(field, nvars)
                            }
                        })
                        .collect()
                })
                .collect()
        };
        let frames = [frame(0), frame(nf)];
        let kmat = (0..2 * n)
            .map(|row| {
                (0..n)
                    .map(|c| {
                        if let Some(pc) = pivots.iter().position(|&p| p == row) {
                            Poly::constant(field, nvars, u64::from(pc == c))
                        } else {
                            let v = fibre_vars.iter().position(|&x| x == (row, c)).unwrap();
                            Poly::var(field, nvars, 2 * nf + v)
                        }
                    })
                    .collect()
            })
            .collect();
        TowerLevel { r, j, field, blocks, flag_vars, pivots, fibre_vars, frames, kmat }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// Rank `r − 2j` of `F^i`.
    pub fn fibre_rank(&self) -> usize {
        self.r - 2 * self.j
    }

    pub fn nvars(&self) -> usize {
        2 * self.flag_vars.len() + self.fibre_vars.len()
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    /// Frame positions `(row, col)` carrying the variables of one flag.
    pub fn flag_vars(&self) -> &[(usize, usize)] {
        &self.flag_vars
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Positions `(row, col)` of the fibre matrix carrying variables.
    pub fn fibre_vars(&self) -> &[(usize, usize)] {
        &self.fibre_vars
    }

    /// Index of the first fibre variable.
    pub fn fibre_offset(&self) -> usize {
        2 * self.flag_vars.len()
    }

    /// Frame `M_i`, `i ∈ {1, 2}`.
    pub fn frame(&self, i: usize) -> &[Vec<Poly>] {
        &self.frames[i - 1]
    }

    /// `2n × n` matrix whose columns span `K`.
    pub fn kmat(&self) -> &[Vec<Poly>] {
        &self.kmat
    }

    /// Short description of the chart convention, for reports.
    pub fn fingerprint(&self) -> String {
        format!(
            "j={} blocks={:?} pivots={:?} nvars={}",
            self.j,
            self.blocks,
            self.pivots,
            self.nvars()
        )
    }
}

/// Levels `j = 0..=⌊r/2⌋` over F_p.
pub fn build_tower(r: usize, p: u64) -> Result<Vec<TowerLevel>, TowerError> {
    if r < 2 {
        return Err(TowerError::BadRank(r));
    }
    let field = PrimeField::new(p)?;
    Ok((0..=r / 2).map(|j| TowerLevel::new(r, j, field)).collect())
}

/// `s_i^{[j]}`: `K ∩ F^i ≠ 0` exactly where the other summand's block of the
/// fibre matrix is singular.
pub fn divisor_section(level: &TowerLevel, i: usize) -> Result<Poly, TowerError> {
    let n = level.fibre_rank();
    if n == 0 {
        return Err(TowerError::BadIndex(format!("level {} carries no divisors", level.j)));
    }
    let rows = match i {
        1 => n..2 * n,
        2 => 0..n,
        _ => return Err(TowerError::BadIndex(format!("divisor index {i}"))),
    };
    Ok(poly_det(rows.map(|a| level.kmat[a].clone()).collect()))
}
