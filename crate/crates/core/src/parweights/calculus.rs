use super::{check_m, qi, Eps, ParData, ParError, QuasiParType, SubsheafProfile};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

/// Canonical weight: `k = 2r`, `a_1 = 0`, `a_{i+1} − a_i = n_i + n_{i+1}`.
pub fn canonical_weight(
    types: Vec<(String, QuasiParType)>,
    r: u32,
    d: i64,
    g: u64,
) -> Result<ParData, ParError> {
    let k = 2 * r as u64;
    let mut points = Vec::with_capacity(types.len());
    for (label, ty) in types {
        if ty.rank() != r {
            return Err(ParError::BadType(format!(
                "type {:?} at {label} sums to {}, rank is {r}",
                ty.parts(),
                ty.rank()
            )));
        }
        let n = ty.parts();
        let mut a = vec![0u64];
        for i in 0..n.len() - 1 {
            let next = a[i] + (n[i] + n[i + 1]) as u64;
            a.push(next);
        }
        if *a.last().unwrap() >= k {
            return Err(ParError::WeightOverflow(format!("canonical weight {a:?} reaches {k}")));
        }
        points.push((label, ty, a));
    }
    ParData::new(r, d, g, k, points)
}

/// `χ(F) + (1/k) Σ_x Σ_i a_i(x) m_i(x)`; `None` means F = E.
pub fn par_chi(omega: &ParData, profile: Option<&SubsheafProfile>) -> Result<BigRational, ParError> {
    let full;
    let prof = match profile {
        Some(p) => {
            p.validate(omega)?;
            p
        }
        None => {
            full = SubsheafProfile::full(omega);
            &full
        }
    };
    let chi = BigInt::from(prof.deg)
        + BigInt::from(prof.r1) * (BigInt::from(1) - BigInt::from(omega.genus()));
    let mut mass = BigInt::zero();
    for (label, pt) in omega.points() {
        for (a, m) in pt.weight.a().iter().zip(&prof.m[label]) {
            mass += BigInt::from(*a) * BigInt::from(*m);
        }
    }
    Ok(BigRational::from_integer(chi) + BigRational::new(mass, BigInt::from(omega.k())))
}

/// `ℓ = (kχ − Σ_x Σ_i d_i(x) r_i(x)) / r`.
pub fn ell(omega: &ParData) -> BigRational {
    let mut s = BigInt::zero();
    for (_, pt) in omega.points() {
        for (d, r) in pt.weight.increments().iter().zip(pt.ty.partial_ranks()) {
            s += BigInt::from(*d) * BigInt::from(r);
        }
    }
    let num = BigInt::from(omega.k()) * omega.chi() - s;
    BigRational::new(num, BigInt::from(omega.rank()))
}

/// The Σ expression for type `n`, weights `w_j = a_j/k` and intersection
/// profile `m` in rank `r`.
pub fn sigma_value_eps(n: &[u32], w: &[Eps], r: u32, m: &[u32]) -> Eps {
    let r1: i64 = m.iter().map(|&x| x as i64).sum();
    let mut acc = Eps::zero();
    let mut prefix = 0i64;
    for j in 0..n.len() {
        prefix += m[j] as i64;
        let comb = (r1 - prefix) * (n[j] as i64 - m[j] as i64);
        acc = &acc + &Eps::constant(qi(comb));
        let coef = qi(r1 * n[j] as i64 - r as i64 * m[j] as i64);
        acc = &acc + &w[j].scale(&coef);
    }
    acc
}

fn weights_over_k(omega: &ParData, label: &str) -> Result<Vec<Eps>, ParError> {
    let pt = omega.point(label)?;
    let k = BigInt::from(omega.k());
    Ok(pt
        .weight
        .a()
        .iter()
        .map(|&a| Eps::constant(BigRational::new(BigInt::from(a), k.clone())))
        .collect())
}

/// Σ at `x` for the intersection profile `m` (with `r_1 = Σ m_i`).
pub fn sigma_value(omega: &ParData, x: &str, m: &[u32]) -> Result<BigRational, ParError> {
    let pt = omega.point(x)?;
    let r1 = m.iter().sum();
    check_m(&pt.ty, r1, m)?;
    let w = weights_over_k(omega, x)?;
    Ok(sigma_value_eps(pt.ty.parts(), &w, omega.rank(), m).c0)
}

/// All `m` with `0 ≤ m_i ≤ n_i` and `Σ m_i = r1`.
pub fn m_vectors(n: &[u32], r1: u32) -> Vec<Vec<u32>> {
    fn rec(n: &[u32], left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let rest: u32 = n[cur.len() + 1..].iter().sum();
        let ni = n[cur.len()];
        for v in 0..=ni.min(left) {
            if left - v > rest {
                continue;
            }
            cur.push(v);
            rec(n, left - v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, r1, &mut Vec::new(), &mut out);
    out
}

/// Minimum of Σ at `x` over every intersection profile of rank `r1`.
pub fn sigma_min(omega: &ParData, x: &str, r1: u32) -> Result<BigRational, ParError> {
    if r1 == 0 || r1 >= omega.rank() {
        return Err(ParError::BadProfile(format!(
            "subsheaf rank {r1} outside (0, {})",
            omega.rank()
        )));
    }
    let pt = omega.point(x)?;
    let w = weights_over_k(omega, x)?;
    m_vectors(pt.ty.parts(), r1)
        .iter()
        .map(|m| sigma_value_eps(pt.ty.parts(), &w, omega.rank(), m).c0)
        .min()
        .ok_or_else(|| ParError::BadProfile(format!("no profile of rank {r1} at {x}")))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodimBounds {
    /// `min_{0<r₁<r} r₁(r−r₁)(g−1) + |I|/k`, the non-strict bound.
    pub bound1: BigRational,
    /// The same value, the bound for the unstable locus (strict).
    pub bound2: BigRational,
    /// `min_{0<r₁<r} (r₁(r−r₁)(g−1) + Σ_x sigma_min)`.
    pub sharper: BigRational,
}

pub fn codim_bounds(omega: &ParData) -> Result<CodimBounds, ParError> {
    let r = omega.rank() as i64;
    if r < 2 {
        return Err(ParError::BadType("codimension bounds need rank at least 2".into()));
    }
    let g1 = omega.genus() as i64 - 1;
    let base = (1..r).map(|r1| qi(r1 * (r - r1) * g1)).min().unwrap();
    let bound = base
        + BigRational::new(
            BigInt::from(omega.num_points()),
            BigInt::from(omega.k()),
        );
    let mut sharper: Option<BigRational> = None;
    for r1 in 1..r {
        let mut v = qi(r1 * (r - r1) * g1);
        for (label, _) in omega.points() {
            v += sigma_min(omega, label, r1 as u32)?;
        }
        sharper = Some(match sharper {
            Some(s) if s <= v => s,
            _ => v,
        });
    }
    Ok(CodimBounds {
        bound1: bound.clone(),
        bound2: bound,
        sharper: sharper.unwrap(),
    })
}

/// Hecke transformation at a full-flag point: `d ↦ d − 1`,
/// `a′_i = a_{i+1} − a_2` for `2 ≤ i ≤ r−1`, `a′_r = k − a_2`.
pub fn hecke_transform(omega: &ParData, z: &str) -> Result<ParData, ParError> {
    let pt = omega
        .point(z)
        .map_err(|_| ParError::BadHeckePoint(format!("unknown point {z}")))?;
    if !pt.ty.is_full_flag() || omega.rank() < 2 {
        return Err(ParError::BadHeckePoint(format!(
            "type {:?} at {z} is not a full flag of rank at least 2",
            pt.ty.parts()
        )));
    }
    let a = pt.weight.a();
    let r = omega.rank() as usize;
    let k = omega.k();
    let mut new_a = vec![0u64];
    for i in 2..r {
        new_a.push(a[i] - a[1]);
    }
    new_a.push(k - a[1]);
    let points = omega
        .points()
        .map(|(l, p)| {
            let w = if l == z { new_a.clone() } else { p.weight.a().to_vec() };
            (l.to_string(), p.ty.clone(), w)
        })
        .collect();
    ParData::new(omega.rank(), omega.degree() - 1, omega.genus(), k, points)
}

#[cfg(test)]
mod tests {
    use super::super::q;
    use super::*;

    fn ty(v: &[u32]) -> QuasiParType {
        QuasiParType::new(v.to_vec()).unwrap()
    }

    fn canon(r: u32, d: i64, g: u64, types: &[&[u32]]) -> ParData {
        let t = types
            .iter()
            .enumerate()
            .map(|(i, v)| (format!("x{i}"), ty(v)))
            .collect();
        canonical_weight(t, r, d, g).unwrap()
    }

    #[test]
    fn listed_canonical_weights() {
        let w = canon(3, 0, 0, &[&[1, 1, 1], &[2, 1]]);
        assert_eq!(w.k(), 6);
        assert_eq!(w.point("x0").unwrap().weight.a(), &[0, 2, 4]);
        assert_eq!(w.point("x1").unwrap().weight.a(), &[0, 3]);
        let w2 = canon(2, 0, 0, &[&[1, 1]]);
        assert_eq!((w2.k(), w2.point("x0").unwrap().weight.a()), (4, &[0u64, 2][..]));
        assert!(matches!(
            canonical_weight(vec![("x".into(), ty(&[1, 1]))], 3, 0, 0),
            Err(ParError::BadType(_))
        ));
    }

    #[test]
    fn listed_par_chi() {
        let w = canon(3, 0, 0, &[&[2, 1], &[1, 1, 1], &[1, 1, 1]]);
        assert_eq!(par_chi(&w, None).unwrap(), q(11, 2));
        let empty = ParData::new(3, 2, 1, 6, vec![]).unwrap();
        assert_eq!(par_chi(&empty, None).unwrap(), qi(2));
        let prof = SubsheafProfile::full(&w);
        let lhs = par_chi(&w, Some(&prof)).unwrap();
        let rhs = par_chi(&w, None).unwrap() * qi(prof.r1 as i64) / qi(w.rank() as i64);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn listed_ell() {
        let w = canon(3, 0, 0, &[&[2, 1], &[1, 1, 1], &[1, 1, 1]]);
        assert_eq!(ell(&w), qi(0));
        for r in 1..5 {
            assert_eq!(ell(&ParData::new(r, 0, 1, 7, vec![]).unwrap()), qi(0));
        }
        assert_eq!(ell(&canon(2, 0, 0, &[&[1, 1]])), qi(3));
    }

    #[test]
    fn listed_sigma_values() {
        let w4 = canon(4, 0, 0, &[&[1, 1, 1, 1]]);
        assert_eq!(sigma_value(&w4, "x0", &[1, 1, 0, 0]).unwrap(), qi(2));
        let w3 = canon(3, 0, 0, &[&[2, 1]]);
        assert_eq!(sigma_value(&w3, "x0", &[1, 0]).unwrap(), q(1, 2));
        assert_eq!(sigma_value(&w3, "x0", &[0, 1]).unwrap(), qi(1));
        assert!(sigma_value(&w3, "x0", &[0, 2]).is_err());
    }

    #[test]
    fn listed_sigma_min() {
        for r in 2..=6u32 {
            let w = canon(r, 0, 0, &[&vec![1; r as usize]]);
            for r1 in 1..r {
                let closed = q((r1 * (r - r1)) as i64, 2);
                for m in m_vectors(&vec![1; r as usize], r1) {
                    assert_eq!(sigma_value(&w, "x0", &m).unwrap(), closed);
                }
                assert_eq!(sigma_min(&w, "x0", r1).unwrap(), closed);
            }
        }
        let w3 = canon(3, 0, 0, &[&[2, 1]]);
        assert_eq!(sigma_min(&w3, "x0", 1).unwrap(), q(1, 2));
        let by_hand = [&[2u32, 0][..], &[1, 1][..]]
            .iter()
            .map(|m| sigma_value(&w3, "x0", m).unwrap())
            .min()
            .unwrap();
        assert_eq!(sigma_min(&w3, "x0", 2).unwrap(), by_hand);
        assert_eq!(by_hand, q(1, 2));
    }

    #[test]
    fn listed_codim_bounds() {
        let pts = (0..3).map(|i| (format!("p{i}"), ty(&[1, 1]), vec![0, 1])).collect();
        let w = ParData::new(2, 0, 2, 4, pts).unwrap();
        assert_eq!(codim_bounds(&w).unwrap().bound1, q(7, 4));
        let pts1 = (0..5).map(|i| (format!("p{i}"), ty(&[1, 1]), vec![0, 3])).collect();
        let w1 = ParData::new(2, 0, 1, 9, pts1).unwrap();
        assert_eq!(codim_bounds(&w1).unwrap().bound2, q(5, 9));
        let f = [1u32, 1, 1];
        let w3 = canon(3, 0, 0, &[&f, &f, &f, &f]);
        assert_eq!(codim_bounds(&w3).unwrap().sharper, qi(2));
    }

    #[test]
    fn listed_hecke() {
        for r in [2u32, 3, 4] {
            let w = canon(r, 1, 0, &[&vec![1; r as usize]]);
            let h = hecke_transform(&w, "x0").unwrap();
            assert_eq!(h.degree(), 0);
            assert_eq!(h.point("x0").unwrap().weight.a(), w.point("x0").unwrap().weight.a());
        }
        let w = canon(3, 0, 0, &[&[2, 1]]);
        assert!(matches!(hecke_transform(&w, "x0"), Err(ParError::BadHeckePoint(_))));
    }

    #[test]
    fn m_vector_count() {
        assert_eq!(m_vectors(&[2, 1], 2).len(), 2);
        assert_eq!(m_vectors(&[1, 1, 1, 1], 2).len(), 6);
        assert_eq!(m_vectors(&[3], 1), vec![vec![1]]);
    }
}
