use crate::{read_input, usage, CliError, OmegaArgs, Report, WeightsOp};
use frobsplit_core::parweights::{
    canonical_weight, chi_range_check, codim_bounds, ell, fmt_q, gps_alpha_semistable, hecke_transform, n_j_omega,
    par_chi, parse_pardata, parse_types, sigma_min, sigma_value, write_pardata, GpsProfile, GpsRank, GpsVerdict,
    ParData, TwoComponent,
};
use num_rational::BigRational;
use std::fmt::Write;

fn load(a: &OmegaArgs) -> Result<ParData, CliError> {
    if let Some(path) = &a.config {
        return parse_pardata(&read_input(path)?).map_err(usage);
    }
    let types = parse_types(a.types.as_deref().ok_or_else(|| usage("need --config or --types"))?).map_err(usage)?;
    let r = match (a.rank, types.first()) {
        (Some(r), _) => r,
        (None, Some(t)) => t.rank(),
        (None, None) => return Err(usage("no types given")),
    };
    let labels: Vec<String> = match &a.labels {
        Some(l) => l.split(',').map(|s| s.trim().to_string()).collect(),
        None => (1..=types.len()).map(|i| format!("x{i}")).collect(),
    };
    if labels.len() != types.len() {
        return Err(usage(format!("{} labels for {} types", labels.len(), types.len())));
    }
    canonical_weight(labels.into_iter().zip(types).collect(), r, a.degree, a.genus).map_err(usage)
}

fn rational(s: &str) -> Result<BigRational, CliError> {
    s.trim().parse::<BigRational>().map_err(|_| usage(format!("bad rational {s:?}")))
}

fn list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, CliError> {
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| x.trim().parse::<T>().map_err(|_| usage(format!("bad entry {x:?}"))))
        .collect()
}

pub fn run(op: &WeightsOp) -> Result<Report, CliError> {
    let mut out = String::new();
    let pass = match op {
        WeightsOp::Canonical(a) => {
            out = write_pardata(&load(a)?);
            true
        }
        WeightsOp::Sigma { omega, point, m, r1 } => {
            let w = load(omega)?;
            match (m, r1) {
                (Some(m), _) => {
                    let v = sigma_value(&w, point, &list::<u32>(m)?).map_err(usage)?;
                    writeln!(out, "sigma={}", fmt_q(&v)).unwrap();
                    true
                }
                (None, Some(r1)) => {
                    let v = sigma_min(&w, point, *r1).map_err(usage)?;
                    let floor = BigRational::new(1.into(), w.k().into());
                    writeln!(out, "sigma_min={} floor={} holds={}", fmt_q(&v), fmt_q(&floor), v >= floor).unwrap();
                    v >= floor
                }
                (None, None) => return Err(usage("need --m or --r1")),
            }
        }
        WeightsOp::Codim(a) => {
            let b = codim_bounds(&load(a)?).map_err(usage)?;
            writeln!(out, "bound1={} bound2={} sharper={}", fmt_q(&b.bound1), fmt_q(&b.bound2), fmt_q(&b.sharper))
                .unwrap();
            true
        }
        WeightsOp::Hecke { omega, point } => {
            out = write_pardata(&hecke_transform(&load(omega)?, point).map_err(usage)?);
            true
        }
        WeightsOp::Ell(a) => {
            writeln!(out, "ell={}", fmt_q(&ell(&load(a)?))).unwrap();
            true
        }
        WeightsOp::Gps { omega, sub_rank, parchi_f, dimq_f, alpha, dimq, i1, c1, c2 } => {
            let w = load(omega)?;
            let ranks = list::<u32>(sub_rank)?;
            let (rank, two_component) = match ranks[..] {
                [r] => (GpsRank::Single(r), None),
                [r1, r2] => {
                    let (Some(c1), Some(c2)) = (c1, c2) else {
                        return Err(usage("a rank pair needs --c1 and --c2"));
                    };
                    let i1: Vec<String> = list(i1.as_deref().unwrap_or(""))?;
                    let tc = TwoComponent::from_data(&w, &i1, *c1, *c2).map_err(usage)?;
                    (GpsRank::Pair(r1, r2), Some(tc))
                }
                _ => return Err(usage("--sub-rank takes one or two ranks")),
            };
            let profile = GpsProfile {
                rank,
                parchi_f: rational(parchi_f)?,
                dimq_f: *dimq_f,
                alpha: rational(alpha)?,
                dimq: *dimq,
                two_component,
            };
            let parchi_e = par_chi(&w, None).map_err(usage)?;
            let v = gps_alpha_semistable(&profile, &parchi_e, w.rank()).map_err(usage)?;
            writeln!(out, "parchi_e={} verdict={}", fmt_q(&parchi_e), v.as_str()).unwrap();
            v != GpsVerdict::Unstable
        }
        WeightsOp::Njomega { omega, i1, c1, c2, chi1, chi2, alpha, dimq1, dimq2 } => {
            let w = load(omega)?;
            let i1: Vec<String> = list(i1)?;
            let n = n_j_omega(&w, &i1, *c1, *c2).map_err(usage)?;
            writeln!(out, "n1={} n2={}", fmt_q(&n.0), fmt_q(&n.1)).unwrap();
            match (chi1, chi2, alpha, dimq1, dimq2) {
                (Some(x1), Some(x2), Some(a), Some(d1), Some(d2)) => {
                    let rep = chi_range_check(&n, *x1, *x2, w.rank(), *d1, *d2, &rational(a)?);
                    writeln!(out, "alpha_bounds={} coarse={}", rep.alpha_bounds, rep.coarse).unwrap();
                    rep.alpha_bounds && rep.coarse
                }
                _ => true,
            }
        }
    };
    Ok(Report::new(out, pass))
}
