use super::{ell, qi, ParData, ParError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::cmp::Ordering;

/// Rank of the subsheaf: on an irreducible curve, or per component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GpsRank {
    Single(u32),
    Pair(u32, u32),
}

/// Polarization degrees and top-weight sums `Σ_{x∈I_j} a_{l+1}(x)/k`
/// of a two-component curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoComponent {
    pub c1: u64,
    pub c2: u64,
    pub top1: BigRational,
    pub top2: BigRational,
}

impl TwoComponent {
    /// Splits the points of `omega` into `I_1 = i1` and `I_2` = the rest.
    pub fn from_data(omega: &ParData, i1: &[String], c1: u64, c2: u64) -> Result<Self, ParError> {
        if c1 + c2 == 0 {
            return Err(ParError::BadProfile("c1 + c2 must be positive".into()));
        }
        for l in i1 {
            omega.point(l)?;
        }
        let k = BigInt::from(omega.k());
        let mut top1 = BigRational::zero();
        let mut top2 = BigRational::zero();
        for (l, pt) in omega.points() {
            let t = BigRational::new(BigInt::from(pt.weight.top()), k.clone());
            if i1.iter().any(|x| x == l) {
                top1 += t;
            } else {
                top2 += t;
            }
        }
        Ok(TwoComponent { c1, c2, top1, top2 })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GpsProfile {
    pub rank: GpsRank,
    pub parchi_f: BigRational,
    pub dimq_f: u32,
    pub alpha: BigRational,
    pub dimq: u32,
    pub two_component: Option<TwoComponent>,
}

/// Outcome of the inequality for one subsheaf.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GpsVerdict {
    Stable,
    StrictlySemistable,
    Unstable,
}

impl GpsVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            GpsVerdict::Stable => "stable",
            GpsVerdict::StrictlySemistable => "strictly-semistable",
            GpsVerdict::Unstable => "unstable",
        }
    }
}

/// Compares `parχ(F) − dim Q^F·α` with `r(F)·(parχ(E) − dim Q·α)/r(E)`,
/// using the modified `parχ_m` when the profile has two components.
pub fn gps_alpha_semistable(
    p: &GpsProfile,
    parchi_e: &BigRational,
    r_e: u32,
) -> Result<GpsVerdict, ParError> {
    if p.dimq_f > p.dimq {
        return Err(ParError::BadProfile(format!(
            "dim Q^F = {} exceeds dim Q = {}",
            p.dimq_f, p.dimq
        )));
    }
    if p.alpha <= BigRational::zero() || p.alpha > BigRational::one() {
        return Err(ParError::BadProfile("alpha must lie in (0, 1]".into()));
    }
    if r_e == 0 {
        return Err(ParError::BadProfile("E must have positive rank".into()));
    }
    let (r_f, m_f) = match (&p.rank, &p.two_component) {
        (GpsRank::Single(r), _) => (qi(*r as i64), BigRational::zero()),
        (GpsRank::Pair(r1, r2), Some(tc)) => {
            let c = qi((tc.c1 + tc.c2) as i64);
            let rf = (qi(tc.c1 as i64) * qi(*r1 as i64) + qi(tc.c2 as i64) * qi(*r2 as i64)) / c;
            let m = (&rf - qi(*r1 as i64)) * &tc.top1 + (&rf - qi(*r2 as i64)) * &tc.top2;
            (rf, m)
        }
        (GpsRank::Pair(..), None) => {
            return Err(ParError::BadProfile(
                "a rank pair needs the two-component data".into(),
            ))
        }
    };
    let lhs = &p.parchi_f + m_f - qi(p.dimq_f as i64) * &p.alpha;
    let rhs = r_f * (parchi_e - qi(p.dimq as i64) * &p.alpha) / qi(r_e as i64);
    Ok(match lhs.cmp(&rhs) {
        Ordering::Less => GpsVerdict::Stable,
        Ordering::Equal => GpsVerdict::StrictlySemistable,
        Ordering::Greater => GpsVerdict::Unstable,
    })
}

/// `n_j^ω = (1/k)(r·c_j/(c_1+c_2)·ℓ + Σ_{x∈I_j} Σ_i d_i(x) r_i(x))`.
pub fn n_j_omega(
    omega: &ParData,
    i1: &[String],
    c1: u64,
    c2: u64,
) -> Result<(BigRational, BigRational), ParError> {
    if c1 + c2 == 0 {
        return Err(ParError::BadProfile("c1 + c2 must be positive".into()));
    }
    for l in i1 {
        omega.point(l)?;
    }
    let l = ell(omega);
    let mut s1 = BigInt::zero();
    let mut s2 = BigInt::zero();
    for (label, pt) in omega.points() {
        let s: BigInt = pt
            .weight
            .increments()
            .iter()
            .zip(pt.ty.partial_ranks())
            .map(|(d, r)| BigInt::from(*d) * BigInt::from(r))
            .sum();
        if i1.iter().any(|x| x == label) {
            s1 += s;
        } else {
            s2 += s;
        }
    }
    let r = qi(omega.rank() as i64);
    let k = qi(omega.k() as i64);
    let c = qi((c1 + c2) as i64);
    let n = |cj: u64, s: BigInt| {
        (&r * qi(cj as i64) / &c * &l + BigRational::from_integer(s)) / &k
    };
    Ok((n(c1, s1), n(c2, s2)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChiRangeReport {
    /// `n_j + (r − dim Q^{E_{3−j}})α ≤ χ_j ≤ n_j + dim Q^{E_j}·α` for both j.
    pub alpha_bounds: bool,
    /// `n_j ≤ χ_j ≤ n_j + r` for both j.
    pub coarse: bool,
}

#[allow(clippy::too_many_arguments)]
pub fn chi_range_check(
    n: &(BigRational, BigRational),
    chi1: i64,
    chi2: i64,
    r: u32,
    dimq_e1: u32,
    dimq_e2: u32,
    alpha: &BigRational,
) -> ChiRangeReport {
    let r_q = qi(r as i64);
    let side = |nj: &BigRational, chi: i64, own: u32, other: u32| {
        let chi = qi(chi);
        let lo = nj + (&r_q - qi(other as i64)) * alpha;
        let hi = nj + qi(own as i64) * alpha;
        (lo <= chi && chi <= hi, nj <= &chi && chi <= nj + &r_q)
    };
    let (a1, c1) = side(&n.0, chi1, dimq_e1, dimq_e2);
    let (a2, c2) = side(&n.1, chi2, dimq_e2, dimq_e1);
    ChiRangeReport { alpha_bounds: a1 && a2, coarse: c1 && c2 }
}
