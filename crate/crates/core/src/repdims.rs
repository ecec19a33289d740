//! Weyl dimensions for GL_n, the dimension identity behind the
//! GL_r × GL_r decomposition of sections on Grass_r(V₁⊕V₂), and the
//! region C where Weyl modules stay irreducible.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error("parts {0:?} are not weakly decreasing")]
    NotDecreasing(Vec<u64>),
    #[error("{parts} parts do not fit in GL_{rank}")]
    TooLong { parts: usize, rank: usize },
}

/// Weakly decreasing nonnegative parts padded with zeros to the GL-rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<u64>,
}

impl Partition {
    pub fn new(mut parts: Vec<u64>, rank: usize) -> Result<Self, RepError> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(RepError::NotDecreasing(parts));
        }
        while parts.len() > rank && parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.len() > rank {
            return Err(RepError::TooLong { parts: parts.len(), rank });
        }
        parts.resize(rank, 0);
        Ok(Partition { parts })
    }

    /// `(m, …, m)` repeated `a` times then `b` zeros.
    pub fn rectangle(m: u64, a: usize, b: usize) -> Self {
        let mut parts = vec![m; a];
        parts.resize(a + b, 0);
        Partition { parts }
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn rank(&self) -> usize {
        self.parts.len()
    }

    /// `λ(h₀) = λ₁ − λ_n`.
    pub fn h0(&self) -> u64 {
        match (self.parts.first(), self.parts.last()) {
            (Some(a), Some(b)) => a - b,
            _ => 0,
        }
    }
}

/// `∏_{i<j} (λ_i − λ_j + j − i)/(j − i)`.
pub fn weyl_dim(lambda: &Partition, n: usize) -> BigInt {
    let mut l = lambda.parts.clone();
    l.resize(n.max(l.len()), 0);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..n {
        for j in i + 1..n {
            num *= BigInt::from(l[i] - l[j] + (j - i) as u64);
            den *= BigInt::from((j - i) as u64);
        }
    }
    debug_assert!((&num % &den).is_zero());
    num / den
}

/// `dim H⁰(Grass_r(k^{2r}), det(Q)^m)`, the Weyl dimension of `(m^r, 0^r)`.
pub fn grass_sections_dim(r: usize, m: u64) -> BigInt {
    weyl_dim(&Partition::rectangle(m, r, r), 2 * r)
}

/// All partitions with `rank` parts inside the `m`-box.
pub fn box_partitions(rank: usize, m: u64) -> Vec<Partition> {
    fn rec(rank: usize, bound: u64, prefix: &mut Vec<u64>, out: &mut Vec<Partition>) {
        if prefix.len() == rank {
            out.push(Partition { parts: prefix.clone() });
            return;
        }
        for v in (0..=bound).rev() {
            prefix.push(v);
            rec(rank, v, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(rank, m, &mut Vec::new(), &mut out);
    out
}

/// Both sides of the identity `dim W_{(m^r,0^r)} = Σ_μ dim W_μ · dim W_ν`
/// with `ν = (m − μ_r, …, m − μ_1)`.
pub fn decomposition_sides(r: usize, m: u64) -> (BigInt, BigInt) {
    let lhs = grass_sections_dim(r, m);
    let rhs = box_partitions(r, m)
        .iter()
        .map(|mu| {
            let nu: Vec<u64> = mu.parts.iter().rev().map(|x| m - x).collect();
            weyl_dim(mu, r) * weyl_dim(&Partition { parts: nu }, r)
        })
        .sum();
    (lhs, rhs)
}

pub fn decomposition_identity(r: usize, m: u64) -> bool {
    let (a, b) = decomposition_sides(r, m);
    a == b
}

/// `λ(h₀) ≤ p − r + 1`.
pub fn dominant_in_c(lambda: &Partition, p: u64, r: usize) -> bool {
    (lambda.h0() as i128) <= p as i128 - r as i128 + 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(v: &[u64], n: usize) -> Partition {
        Partition::new(v.to_vec(), n).unwrap()
    }

    #[test]
    fn listed_weyl_dims() {
        assert_eq!(weyl_dim(&part(&[0, 0, 0], 3), 3), BigInt::from(1));
        assert_eq!(weyl_dim(&part(&[1, 0], 2), 2), BigInt::from(2));
        assert_eq!(weyl_dim(&part(&[2, 2, 0, 0], 4), 4), BigInt::from(20));
    }

    #[test]
    fn weyl_dim_matches_hook_content() {
        // dim of GL_n irrep = ∏ (n + c(b)) / hook(b) over boxes b
        for n in 1..5usize {
            for lam in box_partitions(n, 3) {
                let parts = lam.parts();
                let conj: Vec<u64> = (0..parts[0] as usize)
                    .map(|j| parts.iter().filter(|&&x| x as usize > j).count() as u64)
                    .collect();
                let mut num = BigInt::one();
                let mut den = BigInt::one();
                for (i, &row) in parts.iter().enumerate() {
                    for j in 0..row as usize {
                        num *= BigInt::from(n as i64 + j as i64 - i as i64);
                        let hook = (row as usize - j) + (conj[j] as usize - i) - 1;
                        den *= BigInt::from(hook as u64);
                    }
                }
                assert_eq!(weyl_dim(&lam, n), num / den, "{parts:?}");
            }
        }
    }

    #[test]
    fn listed_grass_dims() {
        for m in 0..6 {
            assert_eq!(grass_sections_dim(1, m), BigInt::from(m + 1));
        }
        assert_eq!(grass_sections_dim(2, 1), BigInt::from(6));
        assert_eq!(grass_sections_dim(2, 2), BigInt::from(20));
    }

    #[test]
    fn listed_identities() {
        for m in 0..5 {
            assert!(decomposition_identity(1, m));
        }
        let terms: Vec<BigInt> = box_partitions(2, 2)
            .iter()
            .map(|mu| {
                let nu: Vec<u64> = mu.parts().iter().rev().map(|x| 2 - x).collect();
                weyl_dim(mu, 2) * weyl_dim(&part(&nu, 2), 2)
            })
            .collect();
        let mut sorted = terms.clone();
        sorted.sort();
        let want: Vec<BigInt> = [1, 1, 1, 4, 4, 9].into_iter().map(BigInt::from).collect();
        assert_eq!(sorted, want);
        assert!(decomposition_identity(3, 2));
    }

    #[test]
    fn listed_region_c() {
        assert!(dominant_in_c(&Partition::rectangle(5, 3, 0), 5, 3));
        for (r, m) in [(2usize, 3u64), (3, 4), (4, 2)] {
            let p = r as u64 + m;
            assert!(dominant_in_c(&part(&[m], r), p, r));
        }
        assert!(!dominant_in_c(&part(&[7], 2), 7, 2));
        assert!(!dominant_in_c(&part(&[5], 3), 5, 3));
    }

    #[test]
    fn determinant_twist_invariance() {
        for n in 1..5usize {
            for lam in box_partitions(n, 3) {
                let shifted = Partition::new(lam.parts().iter().map(|x| x + 2).collect(), n).unwrap();
                assert_eq!(weyl_dim(&lam, n), weyl_dim(&shifted, n));
            }
        }
    }

    #[test]
    fn rejects_bad_partitions() {
        assert!(Partition::new(vec![1, 2], 2).is_err());
        assert!(Partition::new(vec![2, 1, 1], 2).is_err());
        assert_eq!(part(&[2, 1, 0, 0], 2).parts(), &[2, 1]);
    }
}
