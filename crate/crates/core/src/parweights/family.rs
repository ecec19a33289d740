use super::calculus::{m_vectors, sigma_value_eps};
use super::{q, qi, Eps, ParData, ParError, QuasiParType};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

const RESERVED: [&str; 3] = ["y1", "z1", "z2"];

fn family_scale(r: u32, n_iprime: usize) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(n_iprime as u64 * (r as u64 - 1) * r as u64))
}

/// Weights `a_i(z)/k` of the ω^t family at the distinguished point with
/// `t = ε` infinitesimal.
pub fn omega_t_weights_eps(r: u32, n_iprime: usize) -> Vec<Eps> {
    let s = family_scale(r, n_iprime);
    let mut w: Vec<Eps> = (0..r as i64 - 1).map(|i| Eps::constant(&s * qi(i))).collect();
    let top = BigRational::new(BigInt::one(), BigInt::from(n_iprime as u64 * r as u64));
    w.push(&Eps::constant(top) + &Eps::eps());
    w
}

/// The weight ω^t on `{y1, z1, z2} ∪ I′` with `d = g = 0`; `k` is the
/// least common denominator of every listed fraction.
pub fn omega_t_family(
    r: u32,
    iprime: &[String],
    z: &str,
    t: &BigRational,
) -> Result<ParData, ParError> {
    if r < 2 {
        return Err(ParError::BadType("the family needs rank at least 2".into()));
    }
    if iprime.is_empty() || !iprime.iter().any(|x| x == z) {
        return Err(ParError::BadProfile(format!("{z} is not among the listed points")));
    }
    if let Some(bad) = iprime.iter().find(|x| RESERVED.contains(&x.as_str())) {
        return Err(ParError::BadProfile(format!("label {bad} is reserved")));
    }
    let bound = family_scale(r, iprime.len());
    if t.abs() >= bound {
        return Err(ParError::BadT(format!(
            "|t| = {} is not below {}",
            super::fmt_q(&t.abs()),
            super::fmt_q(&bound)
        )));
    }
    let two_r = qi(2 * r as i64);
    let full = QuasiParType::full_flag(r);
    let hyper = QuasiParType::new(vec![r - 1, 1]).unwrap();
    let mut fracs: Vec<(String, QuasiParType, Vec<BigRational>)> = Vec::new();
    fracs.push(("y1".into(), hyper, vec![qi(0), qi(r as i64) / &two_r]));
    let canon_full: Vec<BigRational> = (0..r as i64).map(|i| qi(2 * i) / &two_r).collect();
    fracs.push(("z1".into(), full.clone(), canon_full.clone()));
    fracs.push(("z2".into(), full.clone(), canon_full));
    let eps_w = omega_t_weights_eps(r, iprime.len());
    for x in iprime {
        let w: Vec<BigRational> = if x == z {
            eps_w.iter().map(|e| e.at(t)).collect()
        } else {
            (0..r as i64).map(|i| &bound * qi(i)).collect()
        };
        fracs.push((x.clone(), full.clone(), w));
    }
    let k = fracs
        .iter()
        .flat_map(|(_, _, w)| w.iter().map(|f| f.denom().clone()))
        .fold(BigInt::one(), |acc, d| acc.lcm(&d));
    let k_u64 = u64::try_from(k.clone())
        .map_err(|_| ParError::WeightOverflow("common denominator exceeds 64 bits".into()))?;
    let points = fracs
        .into_iter()
        .map(|(l, ty, w)| {
            let a = w
                .iter()
                .map(|f| {
                    let v = f * BigRational::from_integer(k.clone());
                    u64::try_from(v.to_integer()).unwrap_or(u64::MAX)
                })
                .collect();
            (l, ty, a)
        })
        .collect();
    ParData::new(r, 0, 0, k_u64, points)
}

/// Minimum of Σ at the distinguished point over profiles of rank 1 and
/// `r − 1`, compared with `1/2 + ε`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma56Report {
    pub r: u32,
    pub n_iprime: usize,
    pub weight_sum: Eps,
    pub sigma_1_min: Eps,
    pub sigma_r1_min: Eps,
    pub bound: Eps,
    pub holds_symbolic: bool,
    pub concrete_t: BigRational,
    pub holds_concrete: bool,
}

pub fn lemma56_check(r: u32, n_iprime: usize) -> Lemma56Report {
    assert!(r >= 2 && n_iprime >= 1);
    let w = omega_t_weights_eps(r, n_iprime);
    let n = vec![1u32; r as usize];
    let min_over = |r1: u32| {
        m_vectors(&n, r1)
            .iter()
            .map(|m| sigma_value_eps(&n, &w, r, m))
            .min()
            .unwrap()
    };
    let s1 = min_over(1);
    let sr1 = min_over(r - 1);
    let bound = &Eps::constant(q(1, 2)) + &Eps::eps();
    let weight_sum = w.iter().fold(Eps::zero(), |acc, x| &acc + x);
    let concrete_t = family_scale(r, n_iprime) / qi(100);
    let holds_concrete = [&s1, &sr1].iter().all(|s| s.at(&concrete_t) >= bound.at(&concrete_t));
    Lemma56Report {
        r,
        n_iprime,
        holds_symbolic: s1 >= bound && sr1 >= bound,
        weight_sum,
        sigma_1_min: s1,
        sigma_r1_min: sr1,
        bound,
        concrete_t,
        holds_concrete,
    }
}
