use super::{sigma_lemma59, standard_config, FlagChart, FlagError, SubspaceConfig};
use crate::gfpoly::Poly;
use crate::linalg::poly_det;
use crate::splitcheck::{divisor_propagation_check, splits_by_p_minus_1, SplitCandidate, SplitReport};

/// One level `R_k` of the chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaLevel {
    pub k: usize,
    pub nvars: usize,
    pub delta: Poly,
    pub split: SplitReport,
    /// Each division by `x_{k,i+1}` on `Z_{k,i}` was exact.
    pub divisible: bool,
    /// `divisor_propagation_check` held at every step.
    pub propagation: bool,
    /// `c` with `g_{k−1} = c·δ_{k−1}`; `None` at `k = 1` or when no such `c` exists.
    pub ratio_to_next: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaChainReport {
    pub r: usize,
    pub p: u64,
    /// Levels `k = r, r−1, …, 1`.
    pub levels: Vec<DeltaLevel>,
    /// `c` with `δ_r = c·σ` in the same chart.
    pub sigma_ratio: Option<u64>,
    pub sigma_split: SplitReport,
    pub ok: bool,
}

/// `U_k` as a polynomial matrix over the chart ring.
fn unipotent(chart: &FlagChart) -> Vec<Vec<Poly>> {
    let f = chart.field();
    let n = chart.nvars();
    let k = chart.block();
    (0..k)
        .map(|a| {
            (0..k)
                .map(|j| match a.cmp(&j) {
                    std::cmp::Ordering::Equal => Poly::one(f, n),
                    std::cmp::Ordering::Less => Poly::zero(f, n),
                    std::cmp::Ordering::Greater => Poly::var(f, n, chart.var_index(a, j).unwrap()),
                })
                .collect()
        })
        .collect()
}

/// `δ_k = e_1⋯e_{r−1}|_{R_k} · ∏_{i<k} 1_{C_{k,i}}` on the chart
/// `B·diag(U_k, I)` of `R_k = {V_j = W_j, j ≥ k}`.
fn delta_on_level(cfg: &SubspaceConfig, basis: &crate::linalg::Mat, k: usize) -> (FlagChart, Poly) {
    let f = cfg.field();
    let r = cfg.r();
    let chart = FlagChart::new(f, basis.clone(), k);
    let mut delta = Poly::one(f, chart.nvars());
    for i in 1..r {
        delta = &delta * &chart.det_with(cfg.s(i).basis(), r - i);
    }
    let u = unipotent(&chart);
    for i in 1..k {
        let minor: Vec<Vec<Poly>> = (k - i..k).map(|a| u[a][..i].to_vec()).collect();
        delta = &delta * &poly_det(minor);
    }
    (chart, delta)
}

/// `c` with `g = c·h`, if any.
fn ratio(g: &Poly, h: &Poly) -> Option<u64> {
    let (lm, lc) = h.leading()?;
    let f = h.field();
    let c = f.mul(g.coeff(lm).ok()?, f.inv(lc).ok()?);
    (c != 0 && *g == h.scale(c)).then_some(c)
}

/// Walks `δ_k` down `Z_{k,1} ⊃ … ⊃ Z_{k,k−1} = R_{k−1}`, where
/// `Z_{k,i} = {x_{k,1} = … = x_{k,i} = 0}`, dividing by `x_{k,i+1}` and
/// restricting at each step.
fn descend(chart: &FlagChart, delta: &Poly) -> Result<(Option<Poly>, bool), FlagError> {
    let k = chart.block();
    let f = chart.field();
    let mut labels = chart.vars().to_vec();
    let mut g = delta.clone();
    let mut propagation = true;
    for i in 0..k - 1 {
        let idx = labels.iter().position(|&v| v == (k - 1, i)).unwrap();
        let x = Poly::var(f, labels.len(), idx);
        let q = match g.div_exact(&x)? {
            Some(q) => q,
            None => return Ok((None, propagation)),
        };
        propagation &= divisor_propagation_check(&q, &[idx]);
        g = q.restrict_zero(&[idx]);
        labels.remove(idx);
    }
    Ok((Some(g), propagation))
}

pub fn delta_chain(r: usize, p: u64) -> Result<DeltaChainReport, FlagError> {
    if r < 2 {
        return Err(FlagError::BadRank(r));
    }
    let cfg = standard_config(r, p)?;
    let basis = cfg.adapted_basis();
    let built: Vec<(FlagChart, Poly)> = (1..=r).rev().map(|k| delta_on_level(&cfg, &basis, k)).collect();
    let mut levels = Vec::with_capacity(r);
    for (pos, (chart, delta)) in built.iter().enumerate() {
        let k = chart.block();
        let split = splits_by_p_minus_1(&SplitCandidate::new(delta.clone()));
        let (divisible, propagation, ratio_to_next) = if k > 1 {
            let (g, prop) = descend(chart, delta)?;
            let next = &built[pos + 1].1;
            (g.is_some(), prop, g.and_then(|g| ratio(&g, next)))
        } else {
            (true, true, None)
        };
        levels.push(DeltaLevel {
            k,
            nvars: chart.nvars(),
            delta: delta.clone(),
            split,
            divisible,
            propagation,
            ratio_to_next,
        });
    }
    let full = FlagChart::new(cfg.field(), basis, r);
    let sigma = sigma_lemma59(&full, &cfg)?.sigma;
    let sigma_ratio = ratio(&levels[0].delta, &sigma);
    let sigma_split = splits_by_p_minus_1(&SplitCandidate::new(sigma));
    let base = &levels[r - 1];
    let ok = base.delta.is_constant()
        && !base.delta.is_zero()
        && levels.iter().all(|l| l.split == base.split)
        && levels[..r - 1].iter().all(|l| l.divisible && l.propagation && l.ratio_to_next.is_some())
        && sigma_ratio.is_some()
        && sigma_split == levels[0].split;
    Ok(DeltaChainReport { r, p, levels, sigma_ratio, sigma_split, ok })
}
