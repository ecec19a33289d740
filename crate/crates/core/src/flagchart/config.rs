use super::FlagError;
use crate::gfpoly::PrimeField;
use crate::linalg::Subspace;

/// Lines `L_1..L_r` spanning `W`, a generic line `L`, a hyperplane `H`, the
/// hyperplanes `H_i = L + Σ_{j∉{i,i+1}} L_j` and the flags `W_i`, `S_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceConfig {
    r: usize,
    field: PrimeField,
    lines: Vec<Subspace>,
    l: Subspace,
    h: Subspace,
    h_normal: Vec<u64>,
    hs: Vec<Subspace>,
    w_sets: Vec<Vec<usize>>,
    s_sets: Vec<Vec<usize>>,
    w: Vec<Subspace>,
    s: Vec<Subspace>,
}

fn degenerate(msg: impl Into<String>) -> FlagError {
    FlagError::DegenerateConfig(msg.into())
}

/// 1-based line indices of `W_i` and of `S_i` (besides `L`), `1 ≤ i ≤ r−1`.
pub(crate) fn index_sets(r: usize) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let mut w = vec![None; r];
    let mut s = vec![None; r + 1];
    let range = |a: usize, b: usize| -> Vec<usize> { (a..=b).collect() };
    let outside = |a: usize, b: usize| -> Vec<usize> { (1..=r).filter(|j| *j < a || *j > b).collect() };
    for i in 1..=r / 2 {
        w[r + 1 - 2 * i] = Some(range(i + 1, r + 1 - i));
        if r - 2 * i > 0 {
            w[r - 2 * i] = Some(range(i + 1, r - i));
        }
        s[2 * i - 1] = Some(outside(i, r + 1 - i));
        s[2 * i] = Some(outside(i + 1, r + 1 - i));
    }
    let w_sets = (1..r).map(|i| w[i].clone().expect("every W_i is defined")).collect();
    let s_sets = (1..r).map(|i| s[i].clone().expect("every S_i is defined")).collect();
    (w_sets, s_sets)
}

impl SubspaceConfig {
    pub fn new(
        field: PrimeField,
        lines: Vec<Vec<u64>>,
        l: Vec<u64>,
        h_basis: Vec<Vec<u64>>,
    ) -> Result<Self, FlagError> {
        let r = lines.len();
        if r < 2 {
            return Err(FlagError::BadRank(r));
        }
        let span = |vs: &[Vec<u64>]| Subspace::span(field, r, vs);
        let line_spaces: Vec<Subspace> = lines.iter().map(|v| span(std::slice::from_ref(v))).collect();
        if line_spaces.iter().any(|s| s.dim() != 1) {
            return Err(degenerate("some L_i is not a line"));
        }
        if span(&lines).dim() != r {
            return Err(degenerate("the L_i do not span W"));
        }
        let l_space = span(std::slice::from_ref(&l));
        let h = span(&h_basis);
        if l_space.dim() != 1 || h.dim() != r - 1 {
            return Err(degenerate("L must be a line and H a hyperplane"));
        }
        if h.contains(field, &l) || h.contains(field, &lines[0]) || h.contains(field, &lines[r - 1]) {
            return Err(degenerate("one of L, L_1, L_r lies in H"));
        }
        for (i, v) in lines.iter().enumerate().take(r - 1).skip(1) {
            if !h.contains(field, v) {
                return Err(degenerate(format!("L_{} is not in H", i + 1)));
            }
        }
        let h_normal = h.annihilator(field).basis()[0].clone();
        let sum_of = |idx: &[usize], with_l: bool| {
            let mut vs: Vec<Vec<u64>> = idx.iter().map(|&j| lines[j - 1].clone()).collect();
            if with_l {
                vs.push(l.clone());
            }
            span(&vs)
        };
        let hs: Vec<Subspace> = (1..r)
            .map(|i| {
                let idx: Vec<usize> = (1..=r).filter(|&j| j != i && j != i + 1).collect();
                sum_of(&idx, true)
            })
            .collect();
        for (i, hi) in hs.iter().enumerate() {
            if hi.dim() != r - 1 {
                return Err(degenerate(format!("H_{} has dimension {}", i + 1, hi.dim())));
            }
        }
        let (w_sets, s_sets) = index_sets(r);
        let w: Vec<Subspace> = w_sets.iter().map(|s| sum_of(s, false)).collect();
        let s: Vec<Subspace> = s_sets.iter().map(|s| sum_of(s, true)).collect();
        for i in 0..r - 1 {
            if w[i].dim() != i + 1 || s[i].dim() != i + 1 {
                return Err(degenerate(format!(
                    "dim W_{0} = {1}, dim S_{0} = {2}",
                    i + 1,
                    w[i].dim(),
                    s[i].dim()
                )));
            }
        }
        for i in 0..r.saturating_sub(2) {
            if !w[i + 1].contains_space(field, &w[i]) {
                return Err(degenerate(format!("W_{} is not inside W_{}", i + 1, i + 2)));
            }
        }
        for a in 0..r {
            for b in a + 1..r {
                if line_spaces[a] == line_spaces[b] {
                    return Err(degenerate(format!("L_{} = L_{}", a + 1, b + 1)));
                }
            }
        }
        let mut hyper: Vec<&Subspace> = hs.iter().collect();
        hyper.push(&h);
        for a in 0..hyper.len() {
            for b in a + 1..hyper.len() {
                if hyper[a] == hyper[b] {
                    return Err(degenerate("two of the hyperplanes H_i, H coincide"));
                }
            }
        }
        Ok(SubspaceConfig {
            r,
            field,
            lines: line_spaces,
            l: l_space,
            h,
            h_normal,
            hs,
            w_sets,
            s_sets,
            w,
            s,
        })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// `L_i`, 1-based.
    pub fn line(&self, i: usize) -> &Subspace {
        &self.lines[i - 1]
    }

    pub fn generic_line(&self) -> &Subspace {
        &self.l
    }

    pub fn h(&self) -> &Subspace {
        &self.h
    }

    pub fn h_normal(&self) -> &[u64] {
        &self.h_normal
    }

    /// `H_i`, `1 ≤ i ≤ r−1`.
    pub fn h_i(&self, i: usize) -> &Subspace {
        &self.hs[i - 1]
    }

    /// `W_i`, `1 ≤ i ≤ r−1`.
    pub fn w(&self, i: usize) -> &Subspace {
        &self.w[i - 1]
    }

    /// `S_i`, `1 ≤ i ≤ r−1`.
    pub fn s(&self, i: usize) -> &Subspace {
        &self.s[i - 1]
    }

    /// Line indices summed in `W_i`.
    pub fn w_set(&self, i: usize) -> &[usize] {
        &self.w_sets[i - 1]
    }

    /// Line indices summed in `S_i` besides `L`.
    pub fn s_set(&self, i: usize) -> &[usize] {
        &self.s_sets[i - 1]
    }

    /// A basis `b_1..b_r` with `W_i = span(b_1..b_i)`, as matrix columns.
    pub fn adapted_basis(&self) -> Vec<Vec<u64>> {
        let f = self.field;
        let mut cols: Vec<Vec<u64>> = Vec::with_capacity(self.r);
        let mut prev = Subspace::zero(self.r);
        let mut flag: Vec<Subspace> = self.w.clone();
        flag.push(Subspace::whole(self.r));
        for wi in &flag {
            let v = wi
                .basis()
                .iter()
                .find(|v| !prev.contains(f, v))
                .expect("flag steps have dimension one")
                .clone();
            prev = prev.sum(f, &Subspace::span(f, self.r, std::slice::from_ref(&v)));
            cols.push(v);
        }
        (0..self.r).map(|a| cols.iter().map(|c| c[a]).collect()).collect()
    }
}

/// `L_i = span(e_i)`, `L = span(e_1+…+e_r)`, `H = span(e_2..e_{r−1}, e_1−e_r)`.
pub fn standard_config(r: usize, p: u64) -> Result<SubspaceConfig, FlagError> {
    let field = PrimeField::new(p)?;
    if p == 2 {
        return Err(degenerate("the standard configuration needs p > 2"));
    }
    if r < 2 {
        return Err(FlagError::BadRank(r));
    }
    let unit = |i: usize| -> Vec<u64> { (0..r).map(|a| u64::from(a == i)).collect() };
    let lines: Vec<Vec<u64>> = (0..r).map(unit).collect();
    let l = vec![1; r];
    let mut h_basis: Vec<Vec<u64>> = (1..r - 1).map(unit).collect();
    let mut last = unit(0);
    last[r - 1] = field.neg(1);
    h_basis.push(last);
    SubspaceConfig::new(field, lines, l, h_basis)
}
