//! Exact rational calculus for parabolic types and weights: Euler
//! characteristics, the per-point codimension contribution Σ, codimension
//! bounds, Hecke transformation, the ω^t family and GPS inequalities.

mod calculus;
mod config;
mod eps;
mod family;
mod gps;

pub use calculus::{
    canonical_weight, codim_bounds, ell, hecke_transform, m_vectors, par_chi, sigma_min,
    sigma_value, sigma_value_eps, CodimBounds,
};
pub use config::{parse_pardata, parse_types, write_pardata};
pub use eps::Eps;
pub use family::{lemma56_check, omega_t_family, omega_t_weights_eps, Lemma56Report};
pub use gps::{
    chi_range_check, gps_alpha_semistable, n_j_omega, ChiRangeReport, GpsProfile, GpsRank,
    GpsVerdict, TwoComponent,
};

use num_bigint::BigInt;
use num_rational::BigRational;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParError {
    #[error("BadType: {0}")]
    BadType(String),
    #[error("WeightOverflow: {0}")]
    WeightOverflow(String),
    #[error("BadProfile: {0}")]
    BadProfile(String),
    #[error("BadHeckePoint: {0}")]
    BadHeckePoint(String),
    #[error("BadT: {0}")]
    BadT(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub(crate) fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub(crate) fn qi(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Prints a rational as `num/den`.
pub fn fmt_q(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Type `(n_1, …, n_{l+1})` of a flag of quotients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuasiParType(Vec<u32>);

impl QuasiParType {
    pub fn new(n: Vec<u32>) -> Result<Self, ParError> {
        if n.is_empty() || n.contains(&0) {
            return Err(ParError::BadType(format!("{n:?} needs positive entries")));
        }
        Ok(QuasiParType(n))
    }

    pub fn full_flag(r: u32) -> Self {
        QuasiParType(vec![1; r as usize])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn rank(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_full_flag(&self) -> bool {
        self.0.iter().all(|&x| x == 1)
    }

    /// `r_i = n_1 + … + n_i`.
    pub fn partial_ranks(&self) -> Vec<u32> {
        self.0
            .iter()
            .scan(0, |s, &x| {
                *s += x;
                Some(*s)
            })
            .collect()
    }
}

/// Weights `0 = a_1 < … < a_{l+1} < k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParWeight {
    k: u64,
    a: Vec<u64>,
}

impl ParWeight {
    pub fn new(k: u64, a: Vec<u64>) -> Result<Self, ParError> {
        if k == 0 {
            return Err(ParError::BadProfile("k must be positive".into()));
        }
        if a.first() != Some(&0) {
            return Err(ParError::BadProfile(format!("weight {a:?} must start at 0")));
        }
        if a.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ParError::BadProfile(format!("weight {a:?} must increase strictly")));
        }
        if *a.last().unwrap() >= k {
            return Err(ParError::WeightOverflow(format!("weight {a:?} reaches k = {k}")));
        }
        Ok(ParWeight { k, a })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn a(&self) -> &[u64] {
        &self.a
    }

    /// `d_i = a_{i+1} − a_i` for `1 ≤ i ≤ l`.
    pub fn increments(&self) -> Vec<u64> {
        self.a.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn top(&self) -> u64 {
        *self.a.last().unwrap()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParPoint {
    pub ty: QuasiParType,
    pub weight: ParWeight,
}

/// Weight datum `ω = (k, {n(x), a(x)})` with rank, degree and genus.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParData {
    r: u32,
    d: i64,
    g: u64,
    k: u64,
    points: BTreeMap<String, ParPoint>,
    order: Vec<String>,
}

impl ParData {
    pub fn new(
        r: u32,
        d: i64,
        g: u64,
        k: u64,
        points: Vec<(String, QuasiParType, Vec<u64>)>,
    ) -> Result<Self, ParError> {
        if r == 0 {
            return Err(ParError::BadType("rank must be positive".into()));
        }
        let mut map = BTreeMap::new();
        let mut order = Vec::new();
        for (label, ty, a) in points {
            if ty.rank() != r {
                return Err(ParError::BadType(format!(
                    "type {:?} at {label} sums to {}, rank is {r}",
                    ty.parts(),
                    ty.rank()
                )));
            }
            if a.len() != ty.parts().len() {
                return Err(ParError::BadProfile(format!(
                    "weight length {} differs from type length {} at {label}",
                    a.len(),
                    ty.parts().len()
                )));
            }
            let weight = ParWeight::new(k, a)?;
            if map.insert(label.clone(), ParPoint { ty, weight }).is_some() {
                return Err(ParError::BadProfile(format!("point {label} listed twice")));
            }
            order.push(label);
        }
        Ok(ParData { r, d, g, k, points: map, order })
    }

    pub fn rank(&self) -> u32 {
        self.r
    }

    pub fn degree(&self) -> i64 {
        self.d
    }

    pub fn genus(&self) -> u64 {
        self.g
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    /// `χ = d + r(1 − g)`.
    pub fn chi(&self) -> BigInt {
        BigInt::from(self.d) + BigInt::from(self.r) * (BigInt::from(1) - BigInt::from(self.g))
    }

    pub fn num_points(&self) -> usize {
        self.order.len()
    }

    /// Points in insertion order.
    pub fn points(&self) -> impl Iterator<Item = (&str, &ParPoint)> {
        self.order.iter().map(|l| (l.as_str(), &self.points[l]))
    }

    pub fn point(&self, label: &str) -> Result<&ParPoint, ParError> {
        self.points
            .get(label)
            .ok_or_else(|| ParError::BadProfile(format!("unknown point {label}")))
    }
}

/// Rank, degree and per-point intersection profile of a subsheaf.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsheafProfile {
    pub r1: u32,
    pub deg: i64,
    pub m: BTreeMap<String, Vec<u32>>,
}

impl SubsheafProfile {
    /// Profile of E itself.
    pub fn full(omega: &ParData) -> Self {
        SubsheafProfile {
            r1: omega.r,
            deg: omega.d,
            m: omega
                .points()
                .map(|(l, p)| (l.to_string(), p.ty.parts().to_vec()))
                .collect(),
        }
    }

    pub fn validate(&self, omega: &ParData) -> Result<(), ParError> {
        for (label, pt) in omega.points() {
            let m = self
                .m
                .get(label)
                .ok_or_else(|| ParError::BadProfile(format!("no m-vector at {label}")))?;
            check_m(&pt.ty, self.r1, m).map_err(|e| match e {
                ParError::BadProfile(s) => ParError::BadProfile(format!("{label}: {s}")),
                other => other,
            })?;
        }
        if let Some(extra) = self.m.keys().find(|l| omega.points.get(*l).is_none()) {
            return Err(ParError::BadProfile(format!("unknown point {extra}")));
        }
        Ok(())
    }
}

pub(crate) fn check_m(ty: &QuasiParType, r1: u32, m: &[u32]) -> Result<(), ParError> {
    if m.len() != ty.parts().len() {
        return Err(ParError::BadProfile(format!(
            "m-vector {m:?} has length {}, type has {}",
            m.len(),
            ty.parts().len()
        )));
    }
    if m.iter().zip(ty.parts()).any(|(a, b)| a > b) {
        return Err(ParError::BadProfile(format!("m-vector {m:?} exceeds type {:?}", ty.parts())));
    }
    if m.iter().sum::<u32>() != r1 {
        return Err(ParError::BadProfile(format!("m-vector {m:?} does not sum to {r1}")));
    }
    Ok(())
}
