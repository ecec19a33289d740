use super::{FlagChart, FlagError, SubspaceConfig};
use crate::gfpoly::{AffineForm, Order, Poly};
use crate::linalg::{det, inverse, Mat};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DivisorKind {
    /// `D_i`, cut by `d_i`.
    D,
    /// `E_i`, cut by `e_i`.
    E,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorSection {
    pub poly: Poly,
    pub label: String,
    pub kind: DivisorKind,
    pub index: usize,
}

/// Degree of `σ` in one chart variable against the bound coming from
/// `⊗ det(V_i)^{-2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VarDegree {
    pub var: (usize, usize),
    pub degree: u32,
    pub bound: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaReport {
    pub sigma: Poly,
    pub multidegree: Vec<VarDegree>,
    /// Every section has degree ≤ 1 in the columns of its `V_{r−i}` and 0
    /// elsewhere, and `σ` stays within the anticanonical bound.
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocusOrder {
    pub name: String,
    pub order: Result<Order, FlagError>,
    pub bound: u64,
}

impl LocusOrder {
    pub fn in_chart(&self) -> bool {
        self.order.is_ok()
    }

    /// True for in-chart loci meeting the bound; not-in-chart loci are false.
    pub fn meets_bound(&self) -> bool {
        matches!(self.order, Ok(Order::Infinite))
            || matches!(self.order, Ok(Order::Finite(o)) if o >= self.bound)
    }
}

fn check_shapes(chart: &FlagChart, cfg: &SubspaceConfig) -> Result<(), FlagError> {
    if chart.r() != cfg.r() || chart.field() != cfg.field() {
        return Err(FlagError::DegenerateConfig(format!(
            "chart over F_{} of rank {} against configuration over F_{} of rank {}",
            chart.field().p(),
            chart.r(),
            cfg.field().p(),
            cfg.r()
        )));
    }
    if chart.block() != chart.r() {
        return Err(FlagError::DegenerateConfig("sections need a full-flag chart".into()));
    }
    Ok(())
}

/// `d_i = det[basis W_i | V_{r−i}]` and `e_i = det[basis S_i | V_{r−i}]`,
/// ordered `d_1..d_{r−1}, e_1..e_{r−1}`.
pub fn divisor_sections(chart: &FlagChart, cfg: &SubspaceConfig) -> Result<Vec<DivisorSection>, FlagError> {
    check_shapes(chart, cfg)?;
    let r = cfg.r();
    let mut out = Vec::with_capacity(2 * (r - 1));
    for (kind, tag) in [(DivisorKind::D, 'd'), (DivisorKind::E, 'e')] {
        for i in 1..r {
            let space = match kind {
                DivisorKind::D => cfg.w(i),
                DivisorKind::E => cfg.s(i),
            };
            out.push(DivisorSection {
                poly: chart.det_with(space.basis(), r - i),
                label: format!("{tag}{i}"),
                kind,
                index: i,
            });
        }
    }
    Ok(out)
}

fn product(sections: &[DivisorSection], chart: &FlagChart) -> Poly {
    sections
        .iter()
        .fold(Poly::one(chart.field(), chart.nvars()), |acc, s| &acc * &s.poly)
}

/// `σ = d_1⋯d_{r−1}·e_1⋯e_{r−1}` with its multidegree report.
pub fn sigma_lemma59(chart: &FlagChart, cfg: &SubspaceConfig) -> Result<SigmaReport, FlagError> {
    let sections = divisor_sections(chart, cfg)?;
    let r = cfg.r();
    let mut ok = true;
    for s in &sections {
        let k = r - s.index;
        for (v, &(_, j)) in chart.vars().iter().enumerate() {
            let deg = s.poly.degree_in(v).unwrap_or(0);
            ok &= if j < k { deg <= 1 } else { deg == 0 };
        }
    }
    let sigma = product(&sections, chart);
    let multidegree: Vec<VarDegree> = chart
        .vars()
        .iter()
        .enumerate()
        .map(|(v, &(i, j))| VarDegree {
            var: (i, j),
            degree: sigma.degree_in(v).unwrap_or(0),
            bound: 2 * (r - 1 - j) as u32,
        })
        .collect();
    ok &= !sigma.is_zero() && multidegree.iter().all(|d| d.degree <= d.bound);
    Ok(SigmaReport { sigma, multidegree, ok })
}

/// Vandermonde-type frame `G_{a,j} = t_j^a`, `t_j = s + step·j`.
fn vandermonde(cfg: &SubspaceConfig, s: u64, step: u64) -> Mat {
    let f = cfg.field();
    let r = cfg.r();
    (0..r)
        .map(|a| (0..r).map(|j| f.pow(f.add(s, f.mul(step, j as u64 % f.p())), a as u64)).collect())
        .collect()
}

fn origin_is_generic(cfg: &SubspaceConfig, g: &Mat) -> bool {
    let f = cfg.field();
    let r = cfg.r();
    let ginv = match inverse(f, g) {
        Some(m) => m,
        None => return false,
    };
    let dets_ok = (1..r).all(|i| {
        [cfg.w(i), cfg.s(i)].iter().all(|sp| {
            let m: Mat = (0..r)
                .map(|a| {
                    let mut row: Vec<u64> = sp.basis().iter().map(|v| v[a]).collect();
                    row.extend(g[a][..r - i].iter().copied());
                    row
                })
                .collect();
            det(f, &m) != 0
        })
    });
    dets_ok
        && (1..=r).all(|i| x_locus_constants(cfg, &ginv, i).is_some())
        && y_normals(cfg).iter().all(|(_, n)| row_times(cfg, n, g)[r - 1] != 0)
}

/// A chart `G·U(x)` whose origin lies off every `D_i`, `E_i` and which meets
/// every special locus. Returns the standard big cell when that already
/// works, otherwise searches Vandermonde frames deterministically.
pub fn generic_chart(cfg: &SubspaceConfig) -> Result<FlagChart, FlagError> {
    let f = cfg.field();
    let r = cfg.r();
    let id = crate::linalg::identity(r);
    if origin_is_generic(cfg, &id) {
        return Ok(FlagChart::new(f, id, r));
    }
    let p = f.p();
    for step in 1..p {
        for s in 0..p {
            let g = vandermonde(cfg, s, step);
            if origin_is_generic(cfg, &g) {
                return Ok(FlagChart::new(f, g, r));
            }
        }
    }
    Err(FlagError::NoGenericFrame(p))
}

/// `x_{a,0} = v_a / v_0` for `v = G⁻¹ l_i`, or `None` when `v_0 = 0`.
fn x_locus_constants(cfg: &SubspaceConfig, ginv: &Mat, i: usize) -> Option<Vec<u64>> {
    let f = cfg.field();
    let v = crate::linalg::mat_vec(f, ginv, &cfg.line(i).basis()[0]);
    let lead = f.inv(v[0]).ok()?;
    Some(v.iter().map(|&x| f.mul(x, lead)).collect())
}

fn y_normals(cfg: &SubspaceConfig) -> Vec<(String, Vec<u64>)> {
    let f = cfg.field();
    let r = cfg.r();
    let mut out: Vec<(String, Vec<u64>)> = (1..r)
        .map(|i| (format!("Y{i}"), cfg.h_i(i).annihilator(f).basis()[0].clone()))
        .collect();
    out.push((format!("Y{r}"), cfg.h_normal().to_vec()));
    out
}

fn row_times(cfg: &SubspaceConfig, n: &[u64], g: &Mat) -> Vec<u64> {
    let f = cfg.field();
    (0..cfg.r())
        .map(|j| (0..cfg.r()).fold(0, |acc, a| f.add(acc, f.mul(n[a], g[a][j]))))
        .collect()
}

fn identity_forms(n: usize) -> Vec<AffineForm> {
    (0..n)
        .map(|v| {
            let mut coeffs = vec![0; n];
            coeffs[v] = 1;
            AffineForm { coeffs, constant: 0 }
        })
        .collect()
}

/// Orders of `σ` along `X_1..X_r` and `Y_1..Y_r`, each brought to a
/// coordinate subspace by an affine change of chart coordinates.
pub fn vanishing_orders_at_special_loci(
    sigma: &Poly,
    chart: &FlagChart,
    cfg: &SubspaceConfig,
) -> Result<Vec<LocusOrder>, FlagError> {
    check_shapes(chart, cfg)?;
    let f = cfg.field();
    let r = cfg.r();
    let n = chart.nvars();
    if sigma.nvars() != n || sigma.field() != f {
        return Err(FlagError::DegenerateConfig("σ does not live on this chart".into()));
    }
    let bound = (r - 2) as u64;
    let ginv = inverse(f, chart.base())
        .ok_or_else(|| FlagError::DegenerateConfig("chart frame is singular".into()))?;
    let col0: Vec<usize> = (1..r).map(|a| chart.var_index(a, 0).unwrap()).collect();
    let last_row: Vec<usize> = (0..r - 1).map(|j| chart.var_index(r - 1, j).unwrap()).collect();
    let mut out = Vec::with_capacity(2 * r);
    for i in 1..=r {
        let name = format!("X{i}");
        let order = match x_locus_constants(cfg, &ginv, i) {
            None => Err(FlagError::NotInChart(name.clone())),
            Some(c) => {
                let mut map = identity_forms(n);
                for a in 1..r {
                    map[col0[a - 1]].constant = c[a];
                }
                Ok(sigma.substitute_affine(&map, n)?.vanishing_order(&col0))
            }
        };
        out.push(LocusOrder { name, order, bound });
    }
    for (name, normal) in y_normals(cfg) {
        let w = row_times(cfg, &normal, chart.base());
        let order = match f.inv(w[r - 1]) {
            Err(_) => Err(FlagError::NotInChart(name.clone())),
            Ok(winv) => {
                let mut map = identity_forms(n);
                for j in 0..r - 1 {
                    let form = &mut map[last_row[j]];
                    form.constant = f.neg(f.mul(w[j], winv));
                    for a in j + 1..r - 1 {
                        form.coeffs[chart.var_index(a, j).unwrap()] = f.neg(f.mul(w[a], winv));
                    }
                }
                Ok(sigma.substitute_affine(&map, n)?.vanishing_order(&last_row))
            }
        };
        out.push(LocusOrder { name, order, bound });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::{big_cell_chart, standard_config};
    use super::*;
    use crate::gfpoly::parse_poly;
    use crate::splitcheck::{split_coefficient, splits_by_p_minus_1, SplitCandidate};

    #[test]
    fn rank_two_sections() {
        let chart = big_cell_chart(2, 5).unwrap();
        let cfg = standard_config(2, 5).unwrap();
        let k = cfg.field();
        let s = divisor_sections(&chart, &cfg).unwrap();
        assert_eq!(s[0].label, "d1");
        assert_eq!(s[0].poly, Poly::constant(k, 1, k.neg(1)));
        assert_eq!(s[1].label, "e1");
        assert_eq!(s[1].poly, parse_poly(k, 1, "x1 - 1").unwrap());
        let rep = sigma_lemma59(&chart, &cfg).unwrap();
        assert_eq!(rep.sigma, parse_poly(k, 1, "1 - x1").unwrap());
        assert!(rep.ok);
        let split = splits_by_p_minus_1(&SplitCandidate::new(rep.sigma));
        assert_eq!(split.coefficient, 1);
    }

    #[test]
    fn rank_two_splits_for_small_primes() {
        for p in [5, 7, 11, 13, 17, 19, 23, 29, 31] {
            let cfg = standard_config(2, p).unwrap();
            let chart = generic_chart(&cfg).unwrap();
            let rep = sigma_lemma59(&chart, &cfg).unwrap();
            assert_ne!(split_coefficient(&SplitCandidate::new(rep.sigma)), 0, "p = {p}");
        }
    }

    #[test]
    fn standard_origin_is_special_for_rank_three() {
        let cfg = standard_config(3, 11).unwrap();
        let chart = big_cell_chart(3, 11).unwrap();
        let s = divisor_sections(&chart, &cfg).unwrap();
        assert!(s.iter().any(|d| d.poly.constant_term() == 0));
        let g = generic_chart(&cfg).unwrap();
        assert_ne!(*g.base(), crate::linalg::identity(3));
        for d in divisor_sections(&g, &cfg).unwrap() {
            assert_ne!(d.poly.constant_term(), 0, "{}", d.label);
        }
    }

    #[test]
    fn rank_three_orders() {
        let cfg = standard_config(3, 11).unwrap();
        let chart = generic_chart(&cfg).unwrap();
        let rep = sigma_lemma59(&chart, &cfg).unwrap();
        assert!(rep.ok);
        let orders = vanishing_orders_at_special_loci(&rep.sigma, &chart, &cfg).unwrap();
        assert_eq!(orders.len(), 6);
        for o in &orders {
            assert!(o.in_chart() && o.meets_bound(), "{o:?}");
        }
        assert_eq!(rep.sigma.vanishing_order(&[0, 1, 2]), Order::Finite(0));
    }

    #[test]
    fn standard_chart_reports_missing_loci() {
        let cfg = standard_config(3, 11).unwrap();
        let chart = big_cell_chart(3, 11).unwrap();
        let rep = sigma_lemma59(&chart, &cfg).unwrap();
        let orders = vanishing_orders_at_special_loci(&rep.sigma, &chart, &cfg).unwrap();
        let x2 = orders.iter().find(|o| o.name == "X2").unwrap();
        assert!(matches!(x2.order, Err(FlagError::NotInChart(_))));
        assert!(!x2.meets_bound());
        for o in orders.iter().filter(|o| o.in_chart()) {
            assert!(o.meets_bound(), "{o:?}");
        }
    }

    #[test]
    fn coefficient_is_chart_independent() {
        for (r, p) in [(2, 7), (3, 7), (3, 11), (3, 13)] {
            let cfg = standard_config(r, p).unwrap();
            let std = sigma_lemma59(&big_cell_chart(r, p).unwrap(), &cfg).unwrap();
            let gen = sigma_lemma59(&generic_chart(&cfg).unwrap(), &cfg).unwrap();
            let a = split_coefficient(&SplitCandidate::new(std.sigma));
            let b = split_coefficient(&SplitCandidate::new(gen.sigma));
            assert_eq!(a, b, "r = {r}, p = {p}");
        }
    }
}
