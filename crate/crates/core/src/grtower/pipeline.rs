use super::{build_tower, divisor_section, Restriction, TowerError, TowerLevel};
use crate::flagchart::{big_cell_chart, sigma_lemma59, standard_config};
use crate::gfpoly::Poly;
use crate::splitcheck::{splits_by_p_minus_1, SplitCandidate, SplitReport};

/// Split checks on charts with more than this many exponent cells are skipped.
pub const SPLIT_CELL_LIMIT: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PipelineOptions {
    /// Allow `r = 3`.
    pub heavy: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SplitStatus {
    Computed(SplitReport),
    Skipped(String),
}

impl SplitStatus {
    /// `false` only for a computed check that failed.
    pub fn ok(&self) -> bool {
        match self {
            SplitStatus::Computed(s) => s.splits,
            SplitStatus::Skipped(_) => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelReport {
    pub j: usize,
    pub nvars: usize,
    /// Multiplicity of `s_1^{[j]}` in `σ_j`; `None` where the level has no divisor.
    pub order_d1: Option<u32>,
    pub order_d2: Option<u32>,
    pub split: SplitStatus,
    /// Whether `σ_j` came from a lift with zero residual; `None` at the top.
    pub lift_ok: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerReport {
    pub r: usize,
    pub p: u64,
    /// Chart convention per level.
    pub fingerprint: Vec<String>,
    /// Top level first.
    pub levels: Vec<LevelReport>,
}

impl TowerReport {
    pub fn pass(&self) -> bool {
        self.levels.iter().all(|l| split_ok(l) && l.lift_ok != Some(false))
    }
}

/// Largest `e` with `s^e | σ`, for nonconstant `s`.
fn multiplicity(sigma: &Poly, s: &Poly) -> Result<u32, TowerError> {
    if sigma.is_zero() {
        return Ok(u32::MAX);
    }
    let mut q = sigma.clone();
    let mut e = 0;
    while let Some(next) = q.div_exact(s)? {
        q = next;
        e += 1;
    }
    Ok(e)
}

fn split_status(sigma: &Poly) -> SplitStatus {
    let p = sigma.field().p();
    let cells = (p as f64).powi(sigma.nvars() as i32);
    if cells > SPLIT_CELL_LIMIT as f64 {
        SplitStatus::Skipped(format!("{p}^{} exponent cells", sigma.nvars()))
    } else {
        SplitStatus::Computed(splits_by_p_minus_1(&SplitCandidate::new(sigma.clone())))
    }
}

/// `σ_Y = σ ⊠ σ` on `Flag(k^r)²`, with `σ` the product of the Schubert-type
/// sections of the standard configuration in the big cell.
pub fn default_sigma_y(r: usize, p: u64) -> Result<Poly, TowerError> {
    let chart = big_cell_chart(r, p).map_err(|e| TowerError::Precondition(e.to_string()))?;
    let cfg = standard_config(r, p).map_err(|e| TowerError::Precondition(e.to_string()))?;
    let sigma = sigma_lemma59(&chart, &cfg)
        .map_err(|e| TowerError::Precondition(e.to_string()))?
        .sigma;
    let n = sigma.nvars();
    let first: Vec<usize> = (0..n).collect();
    let second: Vec<usize> = (n..2 * n).collect();
    Ok(&sigma.embed(2 * n, &first)? * &sigma.embed(2 * n, &second)?)
}

fn level_orders(level: &TowerLevel, sigma: &Poly) -> Result<(Option<u32>, Option<u32>), TowerError> {
    if level.fibre_rank() == 0 {
        return Ok((None, None));
    }
    let mut out = [None, None];
    for (i, slot) in out.iter_mut().enumerate() {
        let s = divisor_section(level, i + 1)?;
        if !s.is_constant() {
            *slot = Some(multiplicity(sigma, &s)?);
        }
    }
    Ok((out[0], out[1]))
}

/// Carries `σ_Y` down the tower: `σ_{j−1} = σ̃_j·s_1^{[j−1]}·s_2^{[j−1]}`,
/// seeded at the odd top by `σ_Y·s_1`. Returns `σ_0` and the per-level
/// report.
pub fn corollary45_pipeline(
    r: usize,
    p: u64,
    sigma_y: Option<&Poly>,
    opts: PipelineOptions,
) -> Result<(Poly, TowerReport), TowerError> {
    if r < 2 {
        return Err(TowerError::BadRank(r));
    }
    if r >= 4 {
        return Err(TowerError::Unsupported(format!("r = {r} is construction only")));
    }
    if r == 3 && !opts.heavy {
        return Err(TowerError::Unsupported("r = 3 needs the heavy option".into()));
    }
    if p <= 3 * r as u64 {
        return Err(TowerError::Precondition(format!("p = {p} is not above 3r = {}", 3 * r)));
    }
    let tower = build_tower(r, p)?;
    let top = tower.last().expect("tower has a top level");
    let nf = top.flag_vars().len();
    let sigma_y = match sigma_y {
        Some(s) => s.clone(),
        None => default_sigma_y(r, p)?,
    };
    if sigma_y.nvars() != 2 * nf || sigma_y.field() != top.field() {
        return Err(TowerError::Precondition(format!(
            "σ_Y must live in {} variables over F_{p}",
            2 * nf
        )));
    }
    if !splits_by_p_minus_1(&SplitCandidate::new(sigma_y.clone())).splits {
        return Err(TowerError::Precondition("σ_Y^{p−1} does not split Y".into()));
    }

    let mapping: Vec<usize> = (0..2 * nf).collect();
    let mut sigma = sigma_y.embed(top.nvars(), &mapping)?;
    if top.fibre_rank() == 1 {
        sigma = &sigma * &divisor_section(top, 1)?;
    }
    let mut levels = Vec::new();
    let (order_d1, order_d2) = level_orders(top, &sigma)?;
    let split = split_status(&sigma);
    if !split.ok() {
        return Err(TowerError::PipelineBroken { level: top.j(), reason: "top section does not split".into() });
    }
    levels.push(LevelReport { j: top.j(), nvars: top.nvars(), order_d1, order_d2, split, lift_ok: None });

    for j in (1..tower.len()).rev() {
        let (upper, lower) = (&tower[j], &tower[j - 1]);
        let res = Restriction::new(upper, lower)?;
        let lifted = res.lift(&sigma)?;
        sigma = &(&lifted * &divisor_section(lower, 1)?) * &divisor_section(lower, 2)?;
        let (order_d1, order_d2) = level_orders(lower, &sigma)?;
        let split = split_status(&sigma);
        let report = LevelReport { j: lower.j(), nvars: lower.nvars(), order_d1, order_d2, split, lift_ok: Some(true) };
        if !split_ok(&report) {
            return Err(TowerError::PipelineBroken {
                level: lower.j(),
                reason: format!("{:?}", report),
            });
        }
        levels.push(report);
    }
    let report = TowerReport { r, p, fingerprint: tower.iter().map(TowerLevel::fingerprint).collect(), levels };
    Ok((sigma, report))
}

fn split_ok(l: &LevelReport) -> bool {
    l.split.ok() && l.order_d1.is_none_or(|o| o >= 1) && l.order_d2.is_none_or(|o| o >= 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfpoly::{parse_poly, PrimeField};

    #[test]
    fn rank_two_pipeline_splits_and_vanishes() {
        for p in [7u64, 11] {
            let (sigma0, report) = corollary45_pipeline(2, p, None, PipelineOptions::default()).unwrap();
            assert!(report.pass(), "{report:?}");
            assert_eq!(sigma0.nvars(), 4);
            let bottom = report.levels.last().unwrap();
            assert_eq!(bottom.j, 0);
            assert!(bottom.order_d1.unwrap() >= 1 && bottom.order_d2.unwrap() >= 1);
            assert!(matches!(bottom.split, SplitStatus::Computed(s) if s.splits));
        }
    }

    #[test]
    fn product_of_quadratics_seeds_the_pipeline() {
        let k = PrimeField::new(7).unwrap();
        let sy = parse_poly(k, 2, "x1^2*x2^2 - 4*x1^2 - x2^2 + 4").unwrap();
        let (_, report) = corollary45_pipeline(2, 7, Some(&sy), PipelineOptions::default()).unwrap();
        assert!(report.pass());
    }

    #[test]
    fn square_is_refused() {
        let k = PrimeField::new(7).unwrap();
        let sy = parse_poly(k, 2, "x1^4 - 2*x1^2 + 1").unwrap();
        let err = corollary45_pipeline(2, 7, Some(&sy), PipelineOptions::default()).unwrap_err();
        assert!(matches!(err, TowerError::Precondition(_)));
    }

    #[test]
    fn small_primes_and_large_ranks_are_refused() {
        assert!(matches!(
            corollary45_pipeline(2, 5, None, PipelineOptions::default()),
            Err(TowerError::Precondition(_))
        ));
        assert!(matches!(
            corollary45_pipeline(3, 11, None, PipelineOptions::default()),
            Err(TowerError::Unsupported(_))
        ));
        assert!(matches!(
            corollary45_pipeline(4, 13, None, PipelineOptions { heavy: true }),
            Err(TowerError::Unsupported(_))
        ));
    }

    #[test]
    fn default_sigma_y_splits() {
        for p in [7u64, 11, 13] {
            let s = default_sigma_y(2, p).unwrap();
            assert!(splits_by_p_minus_1(&SplitCandidate::new(s)).splits);
        }
    }

    #[test]
    fn rank_three_heavy_pipeline_lifts() {
        let (sigma0, report) = corollary45_pipeline(3, 11, None, PipelineOptions { heavy: true }).unwrap();
        assert!(report.pass(), "{report:?}");
        assert_eq!(sigma0.nvars(), 9);
        assert_eq!(report.levels[0].order_d1, Some(1));
        assert!(report.levels.iter().all(|l| matches!(l.split, SplitStatus::Skipped(_))));
    }
}
