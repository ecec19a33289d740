use super::{FlagConfig, MarkedPoint, P1Point, StabError};
use crate::gfpoly::PrimeField;
use crate::linalg::Subspace;
use crate::parweights::{canonical_weight, par_chi, ParData, QuasiParType, SubsheafProfile};
use num_bigint::BigInt;
use num_rational::BigRational;
use std::collections::{BTreeMap, BTreeSet};

/// `ω_c^0`: canonical weight for types `(r−1, 1)` at `y_1` and full flags at
/// `z_1`, `z_2`, degree 0 on P¹.
pub fn omega_c0(r: usize) -> Result<ParData, StabError> {
    let r32 = r as u32;
    let y = QuasiParType::new(vec![r32 - 1, 1]).map_err(|e| StabError::BadConfig(e.to_string()))?;
    let full = QuasiParType::full_flag(r32);
    canonical_weight(vec![("y1".into(), y), ("z1".into(), full.clone()), ("z2".into(), full)], r32, 0, 0)
        .map_err(|e| StabError::BadConfig(e.to_string()))
}

/// Checks that `ω` lives on `O^r` over P¹ with types matching the flags.
fn check_omega(cfg: &FlagConfig, omega: &ParData) -> Result<(), StabError> {
    if omega.rank() as usize != cfg.r() || omega.degree() != 0 || omega.genus() != 0 {
        return Err(StabError::BadConfig("ω must have rank r, degree 0 and genus 0".into()));
    }
    for (label, pt) in omega.points() {
        let mp = cfg
            .points()
            .into_iter()
            .find(|m| m.label == label)
            .ok_or_else(|| StabError::BadConfig(format!("ω has a point {label} without flag data")))?;
        if pt.ty.parts() != mp.type_parts().as_slice() {
            return Err(StabError::BadConfig(format!("type of ω at {label} differs from the flag")));
        }
    }
    Ok(())
}

/// `m_i = dim(U ∩ E_{x,i−1}) − dim(U ∩ E_{x,i})`.
fn induced_m(f: PrimeField, u: &Subspace, p: &MarkedPoint) -> Vec<u32> {
    let dims: Vec<usize> = (0..=p.chain.len() + 1).map(|i| u.intersect(f, &p.e(i)).dim()).collect();
    dims.windows(2).map(|w| (w[0] - w[1]) as u32).collect()
}

/// `induced_m` for the line spanned by a nonzero `v ∈ F_q²`.
fn line_m(f: PrimeField, v: [u64; 2], p: &MarkedPoint) -> Vec<u32> {
    let inside = |s: &Subspace| match s.dim() {
        0 => false,
        1 => {
            let w = &s.basis()[0];
            f.mul(v[0], w[1]) == f.mul(v[1], w[0])
        }
        _ => true,
    };
    let dims: Vec<u32> = (0..=p.chain.len() + 1).map(|i| u32::from(inside(&p.e(i)))).collect();
    dims.windows(2).map(|w| w[0] - w[1]).collect()
}

fn profile(cfg: &FlagConfig, omega: &ParData, u: &Subspace, deg: i64) -> SubsheafProfile {
    let f = cfg.field();
    let m: BTreeMap<String, Vec<u32>> = omega
        .points()
        .map(|(label, _)| {
            let mp = cfg.points().into_iter().find(|m| m.label == label).expect("checked by check_omega");
            (label.to_string(), induced_m(f, u, mp))
        })
        .collect();
    SubsheafProfile { r1: u.dim() as u32, deg, m }
}

fn slope_excess(omega: &ParData, prof: &SubsheafProfile) -> Result<BigRational, StabError> {
    let map = |e: crate::parweights::ParError| StabError::BadConfig(e.to_string());
    let chi_f = par_chi(omega, Some(prof)).map_err(map)?;
    let chi_e = par_chi(omega, None).map_err(map)?;
    Ok(chi_f / BigInt::from(prof.r1) - chi_e / BigInt::from(omega.rank()))
}

/// All `k`-dimensional subspaces of `F_q^r`, by reduced echelon form.
fn all_subspaces(f: PrimeField, r: usize, k: usize) -> Vec<Subspace> {
    fn pivot_sets(r: usize, k: usize, from: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if acc.len() == k {
            out.push(acc.clone());
            return;
        }
        for c in from..r {
            acc.push(c);
            pivot_sets(r, k, c + 1, acc, out);
            acc.pop();
        }
    }
    let mut sets = Vec::new();
    pivot_sets(r, k, 0, &mut Vec::new(), &mut sets);
    let q = f.p();
    let mut out = Vec::new();
    for piv in sets {
        let free: Vec<(usize, usize)> = piv
            .iter()
            .enumerate()
            .flat_map(|(row, &pc)| (pc + 1..r).filter(|c| !piv.contains(c)).map(move |c| (row, c)))
            .collect();
        let total = q.pow(free.len() as u32);
        for mut code in 0..total {
            let mut rows = vec![vec![0u64; r]; k];
            for (row, &pc) in piv.iter().enumerate() {
                rows[row][pc] = 1;
            }
            for &(row, c) in &free {
                rows[row][c] = code % q;
                code /= q;
            }
            out.push(Subspace::span(f, r, &rows));
        }
    }
    out
}

/// Proper nonzero subspaces in the lattice generated by the flag subspaces
/// under sum and intersection.
fn flag_lattice(cfg: &FlagConfig) -> Vec<Subspace> {
    let f = cfg.field();
    let r = cfg.r();
    let mut set: BTreeSet<Vec<Vec<u64>>> = BTreeSet::new();
    let mut spaces: Vec<Subspace> = Vec::new();
    let mut push = |s: Subspace, spaces: &mut Vec<Subspace>| {
        if set.insert(s.basis().to_vec()) {
            spaces.push(s);
        }
    };
    for p in cfg.points() {
        for s in &p.chain {
            push(s.clone(), &mut spaces);
        }
    }
    let mut start = 0;
    while start < spaces.len() && spaces.len() < 4096 {
        let end = spaces.len();
        for i in 0..end {
            for j in start.max(i + 1)..end {
                let a = spaces[i].sum(f, &spaces[j]);
                let b = spaces[i].intersect(f, &spaces[j]);
                push(a, &mut spaces);
                push(b, &mut spaces);
            }
        }
        start = end;
    }
    spaces.into_iter().filter(|s| s.dim() > 0 && s.dim() < r).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DestabReport {
    /// Every subspace was examined; otherwise only the flag lattice.
    pub exhaustive: bool,
    pub examined: usize,
    /// `max_U par μ(U⊗O) − par μ(E)`.
    pub max_excess: BigRational,
    /// A subspace attaining the maximum when it is `≥ 0`.
    pub witness: Option<Subspace>,
    pub stable: bool,
    pub semistable: bool,
}

/// Compares `par μ(U⊗O)` with `par μ(E)` over proper subspaces `U ⊂ W`.
/// Exhaustive for `r ≤ 4`, `q ≤ 7`.
pub fn subspace_destabilizer_search(cfg: &FlagConfig, omega: &ParData) -> Result<DestabReport, StabError> {
    check_omega(cfg, omega)?;
    let f = cfg.field();
    let r = cfg.r();
    let exhaustive = r <= 4 && f.p() <= 7;
    let candidates: Vec<Subspace> = if exhaustive {
        (1..r).flat_map(|k| all_subspaces(f, r, k)).collect()
    } else {
        flag_lattice(cfg)
    };
    let mut best: Option<(BigRational, Subspace)> = None;
    for u in &candidates {
        let e = slope_excess(omega, &profile(cfg, omega, u, 0))?;
        if best.as_ref().is_none_or(|(b, _)| e > *b) {
            best = Some((e, u.clone()));
        }
    }
    let (max_excess, arg) = best.ok_or_else(|| StabError::BadConfig("no proper subspaces".into()))?;
    let zero = BigRational::from_integer(BigInt::from(0));
    Ok(DestabReport {
        exhaustive,
        examined: candidates.len(),
        stable: max_excess < zero,
        semistable: max_excess <= zero,
        witness: (max_excess >= zero).then_some(arg),
        max_excess,
    })
}

/// Coefficients low degree first, trailing zeros trimmed.
fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn poly_rem(f: PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut a = trim(a.to_vec());
    let lb = *b.last().expect("nonzero divisor");
    let inv = f.inv(lb).expect("nonzero leading coefficient");
    while a.len() >= b.len() {
        let c = f.mul(*a.last().unwrap(), inv);
        let shift = a.len() - b.len();
        for (i, &bi) in b.iter().enumerate() {
            a[shift + i] = f.sub(a[shift + i], f.mul(c, bi));
        }
        a = trim(a);
    }
    a
}

/// Degree of `gcd(a, b)`; `None` when both vanish.
fn gcd_degree(f: PrimeField, a: &[u64], b: &[u64]) -> Option<usize> {
    let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
    while !y.is_empty() {
        let rem = poly_rem(f, &x, &y);
        x = std::mem::replace(&mut y, rem);
    }
    (!x.is_empty()).then(|| x.len() - 1)
}

fn eval(f: PrimeField, c: &[u64], t: u64) -> u64 {
    c.iter().rev().fold(0, |acc, &x| f.add(f.mul(acc, t), x))
}

/// `O(−d) ↪ O²` given by `(f(t), g(t))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rank2Witness {
    pub d: u64,
    pub f: Vec<u64>,
    pub g: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rank2Report {
    pub d_max: u64,
    pub examined: usize,
    pub max_excess: BigRational,
    pub witness: Option<Rank2Witness>,
    pub stable: bool,
    pub semistable: bool,
}

/// Sub line bundles `O(−d) ⊂ O²` for `0 ≤ d ≤ d_max`. By default `d_max` is
/// the ceiling of the weight mass `Σ_x a_top(x)/k`, past which
/// `par μ ≤ 1 − d + mass` cannot reach `par μ(E) ≥ 1`.
pub fn rank2_bruteforce(cfg: &FlagConfig, omega: &ParData, d_max: Option<u64>) -> Result<Rank2Report, StabError> {
    if cfg.r() != 2 {
        return Err(StabError::UnsupportedRank(cfg.r()));
    }
    check_omega(cfg, omega)?;
    let fld = cfg.field();
    let q = fld.p();
    let d_max = d_max.unwrap_or_else(|| {
        let mass: u64 = omega.points().map(|(_, p)| p.weight.top()).sum();
        mass.div_ceil(omega.k())
    });
    let mut best: Option<(BigRational, Rank2Witness)> = None;
    let mut examined = 0;
    let points: Vec<(&str, &MarkedPoint)> = omega
        .points()
        .map(|(label, _)| (label, cfg.points().into_iter().find(|p| p.label == label).expect("checked by check_omega")))
        .collect();
    for d in 0..=d_max {
        let d_us = d as usize;
        let mut cache: BTreeMap<BTreeMap<String, Vec<u32>>, BigRational> = BTreeMap::new();
        // leading pair normalized to (1, c) or (0, 1)
        let leads: Vec<(u64, u64)> = (0..q).map(|c| (1, c)).chain(std::iter::once((0, 1))).collect();
        let rest = q.checked_pow(2 * d as u32).ok_or_else(|| StabError::BadConfig("d_max too large".into()))?;
        for &(lf, lg) in &leads {
            for mut code in 0..rest {
                let mut fc = vec![0u64; d_us + 1];
                let mut gc = vec![0u64; d_us + 1];
                for i in 0..d_us {
                    fc[i] = code % q;
                    code /= q;
                    gc[i] = code % q;
                    code /= q;
                }
                fc[d_us] = lf;
                gc[d_us] = lg;
                if gcd_degree(fld, &fc, &gc) != Some(0) {
                    continue;
                }
                examined += 1;
                let mut m = BTreeMap::new();
                for (label, mp) in &points {
                    let v = match mp.at {
                        P1Point::Affine(t) => [eval(fld, &fc, t), eval(fld, &gc, t)],
                        P1Point::Infinity => [lf, lg],
                    };
                    m.insert(label.to_string(), line_m(fld, v, mp));
                }
                // the excess depends only on d and the profile
                let e = match cache.get(&m) {
                    Some(e) => e.clone(),
                    None => {
                        let prof = SubsheafProfile { r1: 1, deg: -(d as i64), m: m.clone() };
                        let e = slope_excess(omega, &prof)?;
                        cache.insert(m, e.clone());
                        e
                    }
                };
                if best.as_ref().is_none_or(|(b, _)| e > *b) {
                    best = Some((e, Rank2Witness { d, f: fc, g: gc }));
                }
            }
        }
    }
    let (max_excess, arg) = best.expect("d = 0 always contributes");
    let zero = BigRational::from_integer(BigInt::from(0));
    Ok(Rank2Report {
        d_max,
        examined,
        stable: max_excess < zero,
        semistable: max_excess <= zero,
        witness: (max_excess >= zero).then_some(arg),
        max_excess,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{genericity_check_512, random_flag_config, standard_flag_config};
    use super::*;
    use crate::linalg::{identity, Mat};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn k(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn subspace_counts_are_gaussian_binomials() {
        let f = k(3);
        assert_eq!(all_subspaces(f, 3, 1).len(), 13);
        assert_eq!(all_subspaces(f, 4, 2).len(), 130);
        let s: BTreeSet<_> = all_subspaces(f, 4, 2).into_iter().map(|s| s.basis().to_vec()).collect();
        assert_eq!(s.len(), 130);
    }

    #[test]
    fn line_profile_matches_intersections() {
        let f = k(5);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let cfg = random_flag_config(f, 2, &mut rng).unwrap();
        for p in cfg.points() {
            for a in 0..5 {
                for b in 0..5 {
                    if (a, b) == (0, 0) {
                        continue;
                    }
                    let u = Subspace::span(f, 2, &[vec![a, b]]);
                    assert_eq!(line_m(f, [a, b], p), induced_m(f, &u, p));
                }
            }
        }
    }

    #[test]
    fn gcd_detects_common_roots() {
        let f = k(5);
        assert_eq!(gcd_degree(f, &[1, 1], &[4, 1]), Some(0));
        // (t+1)(t+2) and (t+1)
        assert_eq!(gcd_degree(f, &[2, 3, 1], &[1, 1]), Some(1));
        assert_eq!(gcd_degree(f, &[3], &[0]), Some(0));
    }

    #[test]
    fn generic_omega_c0_is_stable() {
        let f = k(5);
        for r in 2..=3 {
            let cfg = standard_flag_config(f, r, P1Point::Affine(1), P1Point::Affine(0), P1Point::Infinity, None).unwrap();
            let rep = subspace_destabilizer_search(&cfg, &omega_c0(r).unwrap()).unwrap();
            assert!(rep.exhaustive && rep.stable && rep.witness.is_none(), "{rep:?}");
        }
    }

    #[test]
    fn equal_flags_are_destabilized_by_the_deepest_subspace() {
        let f = k(5);
        let cfg = FlagConfig::new(
            f,
            (P1Point::Affine(1), vec![1, 2, 3]),
            (P1Point::Affine(0), identity(3)),
            (P1Point::Infinity, identity(3)),
            None,
        )
        .unwrap();
        let rep = subspace_destabilizer_search(&cfg, &omega_c0(3).unwrap()).unwrap();
        assert!(!rep.semistable);
        assert_eq!(rep.witness.unwrap(), cfg.z1().e(2));
    }

    #[test]
    fn trivial_weights_are_strictly_semistable() {
        let f = k(5);
        let cfg = standard_flag_config(f, 2, P1Point::Affine(1), P1Point::Affine(0), P1Point::Infinity, None).unwrap();
        let omega = ParData::new(2, 0, 0, 2, Vec::new()).unwrap();
        let rep = rank2_bruteforce(&cfg, &omega, None).unwrap();
        assert!(rep.semistable && !rep.stable);
        assert_eq!(rep.witness.unwrap().d, 0);
    }

    #[test]
    fn common_line_destabilizes_in_rank_two() {
        let f = k(5);
        let m: Mat = vec![vec![1, 0], vec![1, 1]];
        let cfg = FlagConfig::new(f, (P1Point::Affine(1), vec![1, 1]), (P1Point::Affine(0), m.clone()), (P1Point::Infinity, m), None)
            .unwrap();
        let rep = rank2_bruteforce(&cfg, &omega_c0(2).unwrap(), None).unwrap();
        assert!(!rep.semistable);
        let w = rep.witness.unwrap();
        assert_eq!((w.d, w.f.clone(), w.g.clone()), (0, vec![1], vec![1]));
    }

    #[test]
    fn rank_three_destabilizers_match_genericity() {
        let f = k(7);
        let omega = omega_c0(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let cfg = random_flag_config(f, 3, &mut rng).unwrap();
            let rep = subspace_destabilizer_search(&cfg, &omega).unwrap();
            assert_eq!(rep.stable, genericity_check_512(&cfg).holds);
        }
    }

    #[test]
    fn rank_two_oracle_matches_genericity() {
        let f = k(5);
        let omega = omega_c0(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..30 {
            let cfg = random_flag_config(f, 2, &mut rng).unwrap();
            let rep = rank2_bruteforce(&cfg, &omega, None).unwrap();
            assert_eq!(rep.d_max, 2);
            assert_eq!(rep.stable, genericity_check_512(&cfg).holds);
        }
    }

    #[test]
    fn verdicts_are_gl_invariant() {
        let f = k(7);
        let omega = omega_c0(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let cfg = random_flag_config(f, 3, &mut rng).unwrap();
            let g: Mat = loop {
                let m: Mat = (0..3).map(|_| (0..3).map(|_| rng.gen_range(0..7)).collect()).collect();
                if crate::linalg::rank(f, &m) == 3 {
                    break m;
                }
            };
            let moved = cfg.transform(&g).unwrap();
            assert_eq!(genericity_check_512(&cfg), genericity_check_512(&moved));
            let (a, b) = (
                subspace_destabilizer_search(&cfg, &omega).unwrap(),
                subspace_destabilizer_search(&moved, &omega).unwrap(),
            );
            assert_eq!((a.max_excess, a.stable), (b.max_excess, b.stable));
        }
    }

    #[test]
    fn lattice_mode_agrees_on_larger_fields() {
        let f = k(11);
        let omega = omega_c0(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let cfg = random_flag_config(f, 3, &mut rng).unwrap();
            let rep = subspace_destabilizer_search(&cfg, &omega).unwrap();
            assert!(!rep.exhaustive);
            assert_eq!(rep.stable, genericity_check_512(&cfg).holds);
        }
    }
}
