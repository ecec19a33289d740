use super::{FlagConfig, P1Point, StabError};
use crate::flagchart::{FlagError, SubspaceConfig};
use crate::gfpoly::PrimeField;
use crate::linalg::{identity, inverse, nullspace, rank, solve, transpose, Mat, Subspace};
use rand::Rng;

/// A failed clause of the genericity condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition512 {
    /// `E_{y_1,1} ⊂ E_{z_1,r−i+1} ⊕ E_{z_2,i}`.
    A(usize),
    /// `E_{z_1,r−i} ∩ E_{z_2,i} ≠ 0`.
    B(usize),
}

impl std::fmt::Display for Condition512 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Condition512::A(i) => write!(f, "a{i}"),
            Condition512::B(i) => write!(f, "b{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericityReport {
    pub holds: bool,
    pub failures: Vec<Condition512>,
}

pub fn genericity_check_512(cfg: &FlagConfig) -> GenericityReport {
    let f = cfg.field();
    let r = cfg.r();
    let line = cfg.y1().e(1);
    let mut failures = Vec::new();
    for i in 1..=r {
        let sum = cfg.z1().e(r - i + 1).sum(f, &cfg.z2().e(i));
        if sum.contains_space(f, &line) {
            failures.push(Condition512::A(i));
        }
    }
    for i in 1..r {
        if cfg.z1().e(r - i).intersect(f, &cfg.z2().e(i)).dim() != 0 {
            failures.push(Condition512::B(i));
        }
    }
    GenericityReport { holds: failures.is_empty(), failures }
}

/// Lines `L_i = E_{z_1,r−i} ∩ E_{z_2,i−1}`, hyperplanes
/// `H_i = E_{y_1,1} ⊕ ⊕_{j∉{i,i+1}} L_j` and `H_z = W' + ⟨u(z)⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialLoci {
    pub lines: Vec<Subspace>,
    pub hyperplanes: Vec<Subspace>,
    /// `W' = E_{z_1,1} ∩ E_{z_2,1}`.
    pub w_prime: Subspace,
    /// Present when the configuration has a free point `z`.
    pub h_z: Option<Subspace>,
}

impl SpecialLoci {
    /// The configuration of lines, generic line `E_{y_1,1}` and hyperplane
    /// `H_z` used by the flag chart sections.
    pub fn subspace_config(&self, cfg: &FlagConfig) -> Result<SubspaceConfig, FlagError> {
        let h = self
            .h_z
            .as_ref()
            .ok_or_else(|| FlagError::DegenerateConfig("no free point z".into()))?;
        SubspaceConfig::new(
            cfg.field(),
            self.lines.iter().map(|l| l.basis()[0].clone()).collect(),
            cfg.y1().e(1).basis()[0].clone(),
            h.basis().to_vec(),
        )
    }
}

fn bad(msg: impl Into<String>) -> StabError {
    StabError::BadConfig(msg.into())
}

/// `W' + ⟨u(z)⟩` for the degree-one section `u = a + b·t` with
/// `u(z_1) ∈ E_{z_1,1}`, `u(z_2) ∈ E_{z_2,1}` and
/// `u(y_1) ∈ W' + E_{y_1,1}`, computed from the given basis of `W'`.
fn h_z_with_basis(cfg: &FlagConfig, w_basis: &[Vec<u64>], z: P1Point) -> Result<Subspace, StabError> {
    let f = cfg.field();
    let r = cfg.r();
    let w_prime = Subspace::span(f, r, w_basis);
    let y_plane = w_prime.sum(f, &cfg.y1().e(1));
    if y_plane.dim() != r - 1 {
        return Err(bad("E_{y1,1} lies in W'"));
    }
    // one normal per condition, acting on (a, b)
    let mut rows: Mat = Vec::new();
    for (plane, at) in [(cfg.z1().e(1), cfg.z1().at), (cfg.z2().e(1), cfg.z2().at), (y_plane, cfg.y1().at)] {
        let ann = plane.annihilator(f);
        let normal = &ann.basis()[0];
        let row = match at {
            P1Point::Affine(t) => {
                let mut row = normal.clone();
                row.extend(normal.iter().map(|&x| f.mul(x, t)));
                row
            }
            P1Point::Infinity => {
                let mut row = vec![0; r];
                row.extend(normal.iter().copied());
                row
            }
        };
        rows.push(row);
    }
    let sols = nullspace(f, &rows, 2 * r);
    let values: Vec<Vec<u64>> = sols.iter().map(|s| z.eval_linear(f, &s[..r], &s[r..])).collect();
    let mut all = w_basis.to_vec();
    all.extend(values);
    let h = Subspace::span(f, r, &all);
    if h.dim() != r - 1 {
        return Err(bad(format!("u(z) spans {} dimensions modulo W'", h.dim() as i64 - w_prime.dim() as i64)));
    }
    Ok(h)
}

pub fn special_loci(cfg: &FlagConfig) -> Result<SpecialLoci, StabError> {
    let g = genericity_check_512(cfg);
    if !g.holds {
        let names: Vec<String> = g.failures.iter().map(ToString::to_string).collect();
        return Err(bad(format!("genericity fails at {}", names.join(","))));
    }
    let f = cfg.field();
    let r = cfg.r();
    let lines: Vec<Subspace> = (1..=r).map(|i| cfg.z1().e(r - i).intersect(f, &cfg.z2().e(i - 1))).collect();
    if lines.iter().any(|l| l.dim() != 1) {
        return Err(bad("some L_i is not a line"));
    }
    let line = cfg.y1().e(1);
    let hyperplanes: Vec<Subspace> = (1..r)
        .map(|i| {
            (1..=r)
                .filter(|&j| j != i && j != i + 1)
                .fold(line.clone(), |acc, j| acc.sum(f, &lines[j - 1]))
        })
        .collect();
    if hyperplanes.iter().any(|h| h.dim() != r - 1) {
        return Err(bad("some H_i is not a hyperplane"));
    }
    let w_prime = cfg.z1().e(1).intersect(f, &cfg.z2().e(1));
    if w_prime.dim() != r - 2 {
        return Err(bad("W' does not have dimension r - 2"));
    }
    let h_z = cfg.z().map(|z| h_z_with_basis(cfg, w_prime.basis(), z)).transpose()?;
    Ok(SpecialLoci { lines, hyperplanes, w_prime, h_z })
}

/// Coordinate flag at `z_1`, opposite flag at `z_2` and `E_{y_1,1} = ⟨(1,…,1)⟩`.
pub fn standard_flag_config(
    field: PrimeField,
    r: usize,
    y1: P1Point,
    z1: P1Point,
    z2: P1Point,
    z: Option<P1Point>,
) -> Result<FlagConfig, StabError> {
    let opposite: Mat = (0..r).map(|a| (0..r).map(|c| u64::from(a + c == r - 1)).collect()).collect();
    FlagConfig::new(field, (y1, vec![1; r]), (z1, identity(r)), (z2, opposite), z)
}

/// `g ∈ GL(W)` carrying a generic configuration to the standard one at the
/// same points: the columns of `g^{-1}` are the vectors of `L_i` summing to
/// the spanning vector of `E_{y_1,1}`.
pub fn normal_form(cfg: &FlagConfig) -> Result<Mat, StabError> {
    let f = cfg.field();
    let loci = special_loci(cfg)?;
    let basis: Vec<Vec<u64>> = loci.lines.iter().map(|l| l.basis()[0].clone()).collect();
    let m = transpose(&basis);
    let y = cfg.y1().e(1);
    let c = solve(f, &m, &y.basis()[0]).ok_or_else(|| bad("the L_i do not span W"))?;
    if c.contains(&0) {
        return Err(bad("E_{y1,1} lies in a coordinate hyperplane"));
    }
    let scaled: Mat = m.iter().map(|row| row.iter().zip(&c).map(|(&x, &ci)| f.mul(x, ci)).collect()).collect();
    inverse(f, &scaled).ok_or_else(|| bad("the L_i do not span W"))
}

fn random_invertible<R: Rng>(f: PrimeField, r: usize, rng: &mut R) -> Mat {
    loop {
        let m: Mat = (0..r).map(|_| (0..r).map(|_| rng.gen_range(0..f.p())).collect()).collect();
        if rank(f, &m) == r {
            return m;
        }
    }
}

/// Uniform flags and line at `y_1 = 1`, `z_1 = 0`, `z_2 = ∞`, `z = 2`.
pub fn random_flag_config<R: Rng>(field: PrimeField, r: usize, rng: &mut R) -> Result<FlagConfig, StabError> {
    let p = field.p();
    if p < 3 {
        return Err(bad("need at least three affine points"));
    }
    let line = loop {
        let v: Vec<u64> = (0..r).map(|_| rng.gen_range(0..p)).collect();
        if v.iter().any(|&x| x != 0) {
            break v;
        }
    };
    FlagConfig::new(
        field,
        (P1Point::Affine(1), line),
        (P1Point::Affine(0), random_invertible(field, r, rng)),
        (P1Point::Infinity, random_invertible(field, r, rng)),
        Some(P1Point::Affine(2)),
    )
}
