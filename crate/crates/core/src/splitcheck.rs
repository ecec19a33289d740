//! The (p−1)-power splitting criterion on chart polynomials and its
//! compatibility with multiplication by coordinate divisors.
//!
//! `σ^{p−1}` splits the chart at the origin when the monomial
//! `(x_1⋯x_n)^{p−1}` occurs in it with nonzero coefficient. Over F_p a
//! nonzero coefficient `c` rescales to 1 by a `(p−1)`-th root of `c⁻¹` in the
//! algebraic closure, so `splits` records `c ≠ 0` and `normalized` records
//! `c = 1`.

use crate::gfpoly::{Monomial, Poly, PrimeField};

/// Policy string attached to every report.
pub const SPLIT_POLICY: &str = "splits iff coefficient != 0 (rescaled over the algebraic closure)";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitCandidate {
    sigma: Poly,
}

impl SplitCandidate {
    pub fn new(sigma: Poly) -> Self {
        SplitCandidate { sigma }
    }

    pub fn sigma(&self) -> &Poly {
        &self.sigma
    }

    pub fn nvars(&self) -> usize {
        self.sigma.nvars()
    }

    pub fn field(&self) -> PrimeField {
        self.sigma.field()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitReport {
    pub coefficient: u64,
    pub splits: bool,
    pub normalized: bool,
}

impl SplitReport {
    pub fn from_coefficient(coefficient: u64) -> Self {
        SplitReport {
            coefficient,
            splits: coefficient != 0,
            normalized: coefficient == 1,
        }
    }
}

/// Coefficient of `target` in `f^e`.
///
/// Runs the chain `f·f·⋯·f` on a dense box bounded by `target`, dropping
/// after step `s` every monomial that can no longer reach `target` in the
/// remaining `e − s` factors. The result agrees with reading the coefficient
/// off `f.pow_truncated(e, target)`.
pub fn target_coefficient(f: &Poly, e: u64, target: &Monomial) -> u64 {
    let field = f.field();
    let n = f.nvars();
    assert_eq!(target.len(), n, "target monomial length");
    let caps = target.exps();
    if e == 0 {
        return u64::from(caps.iter().all(|&c| c == 0));
    }
    let terms: Vec<(Vec<u32>, u64)> = f
        .terms()
        .filter(|(m, _)| m.exps().iter().zip(caps).all(|(a, b)| a <= b))
        .map(|(m, c)| (m.exps().to_vec(), c))
        .collect();
    if terms.is_empty() {
        return 0;
    }
    let max_deg: Vec<u64> = (0..n)
        .map(|i| terms.iter().map(|(m, _)| m[i] as u64).max().unwrap_or(0))
        .collect();
    let min_deg: Vec<u64> = (0..n)
        .map(|i| terms.iter().map(|(m, _)| m[i] as u64).min().unwrap_or(0))
        .collect();
    for i in 0..n {
        let t = caps[i] as u64;
        if max_deg[i] * e < t || min_deg[i] * e > t {
            return 0;
        }
    }
    let mut strides = vec![1usize; n];
    for i in (0..n.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * (caps[i + 1] as usize + 1);
    }
    let cells = if n == 0 { 1 } else { strides[0] * (caps[0] as usize + 1) };
    let offsets: Vec<(usize, &[u32], u64)> = terms
        .iter()
        .map(|(m, c)| {
            let idx = m.iter().zip(&strides).map(|(&x, &s)| x as usize * s).sum();
            (idx, m.as_slice(), *c)
        })
        .collect();
    // live cells of the current power, each with its exponent vector
    let mut cur: Vec<(usize, Vec<u32>)> = vec![(0, vec![0; n])];
    let mut acc = vec![0u64; cells];
    acc[0] = 1;
    for step in 1..=e {
        let remaining = e - step;
        let mut next = vec![0u64; cells];
        let mut live: Vec<(usize, Vec<u32>)> = Vec::new();
        for (idx, exps) in &cur {
            let c = acc[*idx];
            if c == 0 {
                continue;
            }
            'term: for &(off, m, tc) in &offsets {
                for k in 0..n {
                    let s = exps[k] as u64 + m[k] as u64;
                    let t = caps[k] as u64;
                    if s > t || s + remaining * max_deg[k] < t || s + remaining * min_deg[k] > t {
                        continue 'term;
                    }
                }
                let j = idx + off;
                if next[j] == 0 {
                    live.push((j, exps.iter().zip(m).map(|(a, b)| a + b).collect()));
                }
                next[j] = field.add(next[j], field.mul(c, tc));
            }
        }
        live.sort_unstable_by_key(|(j, _)| *j);
        live.dedup_by_key(|(j, _)| *j);
        acc = next;
        cur = live;
        if cur.is_empty() {
            return 0;
        }
    }
    let top: usize = caps.iter().zip(&strides).map(|(&x, &s)| x as usize * s).sum();
    acc[top]
}

fn full_target(nvars: usize, p: u64) -> Monomial {
    Monomial::new(vec![(p - 1) as u32; nvars])
}

/// Coefficient of `∏ x_i^{p−1}` in `σ^{p−1}`.
pub fn split_coefficient(c: &SplitCandidate) -> u64 {
    let p = c.field().p();
    target_coefficient(&c.sigma, p - 1, &full_target(c.nvars(), p))
}

pub fn splits_by_p_minus_1(c: &SplitCandidate) -> SplitReport {
    SplitReport::from_coefficient(split_coefficient(c))
}

/// Checks that multiplying by the coordinate divisors `{x_j = 0}` moves the
/// splitting coefficient to the restriction of `sigma_lift` to their
/// intersection.
pub fn divisor_propagation_check(sigma_lift: &Poly, divisor_vars: &[usize]) -> bool {
    let field = sigma_lift.field();
    let n = sigma_lift.nvars();
    let mut product = sigma_lift.clone();
    for &j in divisor_vars {
        product = &product * &Poly::var(field, n, j);
    }
    let lhs = split_coefficient(&SplitCandidate::new(product));
    let restricted = sigma_lift.restrict_zero(divisor_vars);
    let rhs = split_coefficient(&SplitCandidate::new(restricted));
    lhs == rhs
}
