use crate::{read_input, usage, CliError, Report};
use frobsplit_core::flagchart::{self, FlagError, FlagVerifyOptions};
use frobsplit_core::gfpoly::{parse_poly, PrimeField};
use frobsplit_core::grtower::{corollary45_pipeline, default_sigma_y, PipelineOptions, SplitStatus, TowerError};
use frobsplit_core::repdims::{box_partitions, decomposition_sides, dominant_in_c, weyl_dim, Partition};
use frobsplit_core::splitcheck::{splits_by_p_minus_1, SplitCandidate, SplitReport};
use serde_json::{json, Value};
use std::fmt::Write;
use std::path::Path;

fn line(out: &mut String, v: Value) {
    out.push_str(&v.to_string());
    out.push('\n');
}

fn split_json(s: &SplitReport) -> Value {
    json!({"coefficient": s.coefficient, "splits": s.splits, "normalized": s.normalized})
}

fn flag_err(e: FlagError) -> CliError {
    match e {
        FlagError::BadRank(_) | FlagError::Poly(_) => usage(e),
        _ => CliError::Failed(e.to_string()),
    }
}

pub fn split_check(p: u64, nvars: usize, poly: &str) -> Result<Report, CliError> {
    let field = PrimeField::new(p).map_err(usage)?;
    let path = Path::new(poly);
    let src = if path.is_file() { read_input(path)? } else { poly.to_string() };
    let sigma = parse_poly(field, nvars, src.trim()).map_err(usage)?;
    let rep = splits_by_p_minus_1(&SplitCandidate::new(sigma));
    let text = format!("coefficient={} splits={} normalized={}\n", rep.coefficient, rep.splits, rep.normalized);
    Ok(Report::new(text, rep.splits))
}

pub fn flag_verify(r: usize, p: u64, orders: bool, delta_chain: bool) -> Result<Report, CliError> {
    PrimeField::new(p).map_err(usage)?;
    let rep = flagchart::flag_verify(r, p, FlagVerifyOptions { orders, delta_chain }).map_err(flag_err)?;
    let mut out = String::new();
    for c in &rep.checks {
        line(&mut out, json!({"name": c.name, "value": c.value, "pass": c.pass}));
    }
    Ok(Report::new(out, rep.pass()))
}

pub fn delta_chain(r: usize, p: u64) -> Result<Report, CliError> {
    PrimeField::new(p).map_err(usage)?;
    let rep = flagchart::delta_chain(r, p).map_err(flag_err)?;
    let mut out = String::new();
    for l in &rep.levels {
        line(
            &mut out,
            json!({
                "k": l.k,
                "nvars": l.nvars,
                "split": split_json(&l.split),
                "divisible": l.divisible,
                "propagation": l.propagation,
                "ratio_to_next": l.ratio_to_next,
            }),
        );
    }
    line(
        &mut out,
        json!({"sigma_ratio": rep.sigma_ratio, "sigma_split": split_json(&rep.sigma_split), "ok": rep.ok}),
    );
    Ok(Report::new(out, rep.ok))
}

pub fn tower_verify(r: usize, p: u64, heavy: bool, sigma_y: Option<&Path>) -> Result<Report, CliError> {
    PrimeField::new(p).map_err(usage)?;
    let tower_err = |e: TowerError| match e {
        TowerError::LiftFailed(_) | TowerError::PipelineBroken { .. } | TowerError::OutsideBirationalLocus(_) => {
            CliError::Failed(e.to_string())
        }
        _ => usage(e),
    };
    let start = match sigma_y {
        Some(path) => {
            let nvars = default_sigma_y(r, p).map_err(tower_err)?.nvars();
            let field = PrimeField::new(p).map_err(usage)?;
            Some(parse_poly(field, nvars, read_input(path)?.trim()).map_err(usage)?)
        }
        None => None,
    };
    let (_, rep) = corollary45_pipeline(r, p, start.as_ref(), PipelineOptions { heavy }).map_err(tower_err)?;
    let mut out = String::new();
    for l in &rep.levels {
        let split = match &l.split {
            SplitStatus::Computed(s) => split_json(s),
            SplitStatus::Skipped(why) => json!({"skipped": why}),
        };
        let vanishes = l.order_d1.is_none_or(|o| o >= 1) && l.order_d2.is_none_or(|o| o >= 1);
        line(
            &mut out,
            json!({
                "level": l.j,
                "nvars": l.nvars,
                "order_d1": l.order_d1,
                "order_d2": l.order_d2,
                "vanishes": vanishes,
                "split": split,
                "lift_ok": l.lift_ok,
                "pass": l.split.ok() && l.lift_ok != Some(false) && vanishes,
            }),
        );
    }
    let pass = rep.pass()
        && rep.levels.iter().all(|l| l.order_d1.is_none_or(|o| o >= 1) && l.order_d2.is_none_or(|o| o >= 1));
    line(&mut out, json!({"r": rep.r, "p": rep.p, "fingerprint": rep.fingerprint, "pass": pass}));
    Ok(Report::new(out, pass))
}

fn show(parts: &[u64]) -> String {
    let v: Vec<String> = parts.iter().map(u64::to_string).collect();
    format!("({})", v.join(","))
}

pub fn repdim(r: usize, m: u64, p: Option<u64>) -> Result<Report, CliError> {
    if r == 0 {
        return Err(usage("rank must be positive"));
    }
    if let Some(p) = p {
        PrimeField::new(p).map_err(usage)?;
    }
    let (lhs, rhs) = decomposition_sides(r, m);
    let mut out = String::new();
    let mut pass = lhs == rhs;
    writeln!(out, "lhs={lhs} rhs={rhs} identity={}", lhs == rhs).unwrap();
    if let Some(p) = p {
        writeln!(out, "p={p} hypothesis_p_gt_r_plus_m={}", p > r as u64 + m).unwrap();
    }
    for mu in box_partitions(r, m) {
        let nu_parts: Vec<u64> = mu.parts().iter().rev().map(|x| m - x).collect();
        let nu = Partition::new(nu_parts, r).map_err(usage)?;
        write!(
            out,
            "mu={} nu={} dim_mu={} dim_nu={}",
            show(mu.parts()),
            show(nu.parts()),
            weyl_dim(&mu, r),
            weyl_dim(&nu, r)
        )
        .unwrap();
        if let Some(p) = p {
            let (a, b) = (dominant_in_c(&mu, p, r), dominant_in_c(&nu, p, r));
            pass &= a && b;
            write!(out, " mu_in_c={a} nu_in_c={b}").unwrap();
        }
        out.push('\n');
    }
    Ok(Report::new(out, pass))
}
