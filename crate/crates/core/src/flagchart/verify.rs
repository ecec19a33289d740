use super::{
    delta_chain, generic_chart, sigma_lemma59, standard_config, vanishing_orders_at_special_loci, FlagError,
};
use crate::report::{all_pass, Check};
use crate::splitcheck::{splits_by_p_minus_1, SplitCandidate};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FlagVerifyOptions {
    pub orders: bool,
    pub delta_chain: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlagVerifyReport {
    pub r: usize,
    pub p: u64,
    pub checks: Vec<Check>,
}

impl FlagVerifyReport {
    pub fn pass(&self) -> bool {
        all_pass(&self.checks)
    }
}

/// Builds the configuration and a generic chart, then checks `σ`, its
/// multidegree, its split coefficient and optionally the locus orders and
/// the `δ` chain.
pub fn flag_verify(r: usize, p: u64, opts: FlagVerifyOptions) -> Result<FlagVerifyReport, FlagError> {
    let cfg = standard_config(r, p)?;
    let chart = generic_chart(&cfg)?;
    let mut checks = vec![Check::new("config", format!("r={r} p={p}"), true)];
    let standard = *chart.base() == crate::linalg::identity(r);
    checks.push(Check::new(
        "chart",
        if standard { "standard" } else { "vandermonde" },
        true,
    ));
    let rep = sigma_lemma59(&chart, &cfg)?;
    checks.push(Check::new("sigma_nonzero", rep.sigma.len(), !rep.sigma.is_zero()));
    let degs: Vec<String> = rep
        .multidegree
        .iter()
        .map(|d| format!("x{}{}:{}/{}", d.var.0 + 1, d.var.1 + 1, d.degree, d.bound))
        .collect();
    checks.push(Check::new("multidegree", degs.join(","), rep.ok));
    let split = splits_by_p_minus_1(&SplitCandidate::new(rep.sigma.clone()));
    checks.push(Check::new("split_coefficient", split.coefficient, split.splits));
    if opts.orders {
        for o in vanishing_orders_at_special_loci(&rep.sigma, &chart, &cfg)? {
            let value = match &o.order {
                Ok(ord) => format!("{ord}>={}", o.bound),
                Err(_) => "not-in-chart".to_string(),
            };
            checks.push(Check::new(format!("order_{}", o.name), value, o.meets_bound()));
        }
    }
    if opts.delta_chain {
        let dc = delta_chain(r, p)?;
        for l in &dc.levels {
            checks.push(Check::new(
                format!("delta_{}", l.k),
                l.split.coefficient,
                l.split.splits && l.divisible && l.propagation,
            ));
        }
        checks.push(Check::new(
            "delta_top_matches_sigma",
            dc.sigma_split.coefficient,
            dc.ok && dc.sigma_split.splits == split.splits,
        ));
    }
    Ok(FlagVerifyReport { r, p, checks })
}
