use super::{divisor_section, phi_chart_map, TowerError, TowerLevel};
use crate::gfpoly::{Monomial, Poly};
use crate::linalg::{poly_det, rank, solve, Mat};
use std::collections::BTreeMap;

/// Spanning set of `H^0(O(m))` on the fibre Grassmannian: all products of
/// `m` maximal minors of the fibre matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionSpace {
    pub m: usize,
    pub basis: Vec<Poly>,
}

impl SectionSpace {
    /// Dimension of the span.
    pub fn rank(&self) -> usize {
        let (mat, _) = coefficient_matrix(&self.basis);
        match mat.first() {
            None => 0,
            Some(_) => rank(self.basis[0].field(), &mat),
        }
    }
}

/// Rows are monomials, columns the given polynomials.
fn coefficient_matrix(polys: &[Poly]) -> (Mat, Vec<Monomial>) {
    let mut index: BTreeMap<Monomial, usize> = BTreeMap::new();
    for g in polys {
        for (m, _) in g.terms() {
            let next = index.len();
            index.entry(m.clone()).or_insert(next);
        }
    }
    let mut mat = vec![vec![0; polys.len()]; index.len()];
    for (c, g) in polys.iter().enumerate() {
        for (m, v) in g.terms() {
            mat[index[m]][c] = v;
        }
    }
    let mut monos = vec![Monomial::one(0); index.len()];
    for (m, i) in index {
        monos[i] = m;
    }
    (mat, monos)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

fn maximal_minors(kmat: &[Vec<Poly>], n: usize) -> Vec<Poly> {
    subsets(kmat.len(), n)
        .into_iter()
        .map(|rows| poly_det(rows.iter().map(|&a| kmat[a].clone()).collect()))
        .collect()
}

/// Products of `m` elements of `gens`, with repetition.
fn products(gens: &[Poly], m: usize, one: &Poly) -> Vec<Poly> {
    fn rec(gens: &[Poly], m: usize, from: usize, acc: &Poly, out: &mut Vec<Poly>) {
        if m == 0 {
            out.push(acc.clone());
            return;
        }
        for i in from..gens.len() {
            rec(gens, m - 1, i, &(acc * &gens[i]), out);
        }
    }
    let mut out = Vec::new();
    rec(gens, m, 0, one, &mut out);
    out
}

pub fn section_space(level: &TowerLevel, m: usize) -> SectionSpace {
    let one = Poly::one(level.field(), level.nvars());
    let n = level.fibre_rank();
    if n == 0 {
        return SectionSpace { m, basis: vec![one] };
    }
    let minors = maximal_minors(level.kmat(), n);
    SectionSpace { m, basis: products(&minors, m, &one) }
}

/// The restriction `H^0(ω^{-1}_{Gr_0}(−D_1−D_2)) → H^0(ω^{-1}_{Gr_1})` in
/// charts.
///
/// For `g` on `Gr_0` the restriction along `φ_1` is
/// `h = g∘φ · det S∘φ / J`, where `S = (∂s_a/∂u_{k_b})` for two chart
/// coordinates `u_{k_1}, u_{k_2}` and `J = det[e_{k_1} | e_{k_2} | Dφ]`
/// compares the residue form with the chart form on `Gr_1`.
#[derive(Debug, Clone)]
pub struct Restriction {
    phi: Vec<Poly>,
    det_s: Poly,
    jac: Poly,
    space: SectionSpace,
    restricted: Vec<Poly>,
}

impl Restriction {
    pub fn new(upper: &TowerLevel, lower: &TowerLevel) -> Result<Self, TowerError> {
        if lower.j() != 0 {
            return Err(TowerError::Unsupported(
                "lifts above level 0 need line bundles from the flag base".into(),
            ));
        }
        let phi = phi_chart_map(upper, lower)?;
        let r = lower.r();
        let s = [divisor_section(lower, 1)?, divisor_section(lower, 2)?];
        let nl = lower.nvars();
        let nu = upper.nvars();
        let f = lower.field();
        let grads: Vec<Vec<Poly>> = s
            .iter()
            .map(|si| (0..nl).map(|k| si.derivative(k).substitute(&phi)).collect::<Result<_, _>>())
            .collect::<Result<_, _>>()?;
        let pair = (0..nl)
            .flat_map(|a| (a + 1..nl).map(move |b| (a, b)))
            .map(|(a, b)| {
                let d = &(&grads[0][a] * &grads[1][b]) - &(&grads[0][b] * &grads[1][a]);
                (a, b, d)
            })
            .find(|(_, _, d)| !d.is_zero());
        let (k1, k2, det_s) = pair.ok_or_else(|| TowerError::LiftFailed("D_1 and D_2 are not transverse".into()))?;
        let dphi: Vec<Vec<Poly>> = phi.iter().map(|g| (0..nu).map(|t| g.derivative(t)).collect()).collect();
        let jm: Vec<Vec<Poly>> = (0..nl)
            .map(|a| {
                let mut row = vec![
                    Poly::constant(f, nu, u64::from(a == k1)),
                    Poly::constant(f, nu, u64::from(a == k2)),
                ];
                row.extend(dphi[a].iter().cloned());
                row
            })
            .collect();
        let jac = poly_det(jm);
        if jac.is_zero() {
            return Err(TowerError::LiftFailed("φ is not an immersion in this chart".into()));
        }
        let space = section_space(lower, 2 * r - 2);
        let restricted = space
            .basis
            .iter()
            .map(|b| Ok(&b.substitute(&phi)? * &det_s))
            .collect::<Result<Vec<Poly>, TowerError>>()?;
        Ok(Restriction { phi, det_s, jac, space, restricted })
    }

    pub fn phi(&self) -> &[Poly] {
        &self.phi
    }

    pub fn space(&self) -> &SectionSpace {
        &self.space
    }

    /// `h` with `h·J = g∘φ · det S∘φ`, or `None` when the quotient is not a
    /// polynomial.
    pub fn apply(&self, g: &Poly) -> Result<Option<Poly>, TowerError> {
        let num = &g.substitute(&self.phi)? * &self.det_s;
        Ok(num.div_exact(&self.jac)?)
    }

    /// A section `g` of the span with `apply(g) = target`.
    pub fn lift(&self, target: &Poly) -> Result<Poly, TowerError> {
        let rhs = target * &self.jac;
        let mut cols = self.restricted.clone();
        cols.push(rhs);
        let (mat, _) = coefficient_matrix(&cols);
        let f = target.field();
        let n = self.restricted.len();
        let a: Mat = mat.iter().map(|row| row[..n].to_vec()).collect();
        let b: Vec<u64> = mat.iter().map(|row| row[n]).collect();
        let c = solve(f, &a, &b).ok_or_else(|| TowerError::LiftFailed("restriction system is inconsistent".into()))?;
        let nl = self.space.basis[0].nvars();
        let g = self
            .space
            .basis
            .iter()
            .zip(&c)
            .filter(|(_, &ci)| ci != 0)
            .fold(Poly::zero(f, nl), |acc, (b, &ci)| &acc + &b.scale(ci));
        if self.apply(&g)?.as_ref() != Some(target) {
            return Err(TowerError::LiftFailed("nonzero residual".into()));
        }
        Ok(g)
    }
}

/// `σ̃` on `Gr_{j−1}` restricting to `target` on `Gr_j` along `φ_j`.
pub fn lift_section(upper: &TowerLevel, lower: &TowerLevel, target: &Poly) -> Result<Poly, TowerError> {
    Restriction::new(upper, lower)?.lift(target)
}

#[cfg(test)]
mod tests {
    use super::super::build_tower;
    use super::*;
    use crate::gfpoly::parse_poly;
    use crate::repdims::grass_sections_dim;
    use num_bigint::BigInt;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rank_two_quadratic_space() {
        let t = build_tower(2, 7).unwrap();
        let s = section_space(&t[0], 2);
        assert_eq!(s.basis.len(), 21);
        assert_eq!(s.rank(), 20);
    }

    #[test]
    fn ranks_match_weyl_dimensions() {
        let t = build_tower(2, 11).unwrap();
        for m in 0..=4u64 {
            let got = section_space(&t[0], m as usize).rank();
            assert_eq!(BigInt::from(got), grass_sections_dim(2, m), "m={m}");
        }
    }

    #[test]
    fn zero_target_lifts_to_zero() {
        let t = build_tower(2, 7).unwrap();
        let g = lift_section(&t[1], &t[0], &Poly::zero(t[1].field(), 2)).unwrap();
        assert!(g.is_zero());
    }

    #[test]
    fn random_targets_lift() {
        for p in [7u64, 11] {
            let t = build_tower(2, p).unwrap();
            let res = Restriction::new(&t[1], &t[0]).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(p);
            for _ in 0..25 {
                let g = res
                    .space()
                    .basis
                    .iter()
                    .fold(Poly::zero(t[0].field(), 4), |acc, b| &acc + &b.scale(rng.gen_range(0..p)));
                let h = res.apply(&g).unwrap().unwrap();
                let lifted = res.lift(&h).unwrap();
                assert_eq!(res.apply(&lifted).unwrap().unwrap(), h);
            }
        }
    }

    #[test]
    fn standard_quadratics_lift() {
        let t = build_tower(2, 7).unwrap();
        let k = t[1].field();
        let h = parse_poly(k, 2, "x1^2*x2^2 - x1^2*x2 - x1*x2^2 + x1*x2").unwrap();
        let g = lift_section(&t[1], &t[0], &h).unwrap();
        assert!(!g.is_zero());
        let too_big = parse_poly(k, 2, "x1^3").unwrap();
        assert!(matches!(lift_section(&t[1], &t[0], &too_big), Err(TowerError::LiftFailed(_))));
    }
}
