use super::{TowerError, TowerLevel};
use crate::gfpoly::Poly;
use crate::linalg::{inverse, mat_vec, nullspace, poly_inverse, poly_mat_mul, rank, unitriangular_inverse, Mat, Subspace};

fn check_pair(upper: &TowerLevel, lower: &TowerLevel) -> Result<(), TowerError> {
    if upper.r() != lower.r() || upper.field() != lower.field() || upper.j() != lower.j() + 1 {
        return Err(TowerError::BadIndex(format!(
            "φ needs levels j and j−1 of one tower, got {} and {}",
            upper.j(),
            lower.j()
        )));
    }
    Ok(())
}

fn coarse_index(lower: &TowerLevel) -> Vec<usize> {
    lower
        .blocks()
        .iter()
        .enumerate()
        .flat_map(|(b, &s)| std::iter::repeat_n(b, s))
        .collect()
}

fn broken(msg: impl Into<String>) -> TowerError {
    TowerError::Unsupported(format!("chart construction: {}", msg.into()))
}

/// `φ_j` as polynomials in the level-`j` chart variables, one per
/// level-`(j−1)` chart variable.
///
/// The flags forget their `j`-th steps; the new kernel is spanned by the
/// two lines `A_{i,j}/A_{i,j−1}` and the lift of `K`.
pub fn phi_chart_map(upper: &TowerLevel, lower: &TowerLevel) -> Result<Vec<Poly>, TowerError> {
    check_pair(upper, lower)?;
    let r = upper.r();
    let j = upper.j();
    let n = upper.fibre_rank();
    let n2 = n + 2;
    let f = upper.field();
    let nv = upper.nvars();
    let zero = Poly::zero(f, nv);
    let cb = coarse_index(lower);
    let mut coarse_frames = Vec::with_capacity(2);
    let mut coords: Vec<Vec<Vec<Poly>>> = Vec::with_capacity(2);
    for i in 1..=2 {
        let m = upper.frame(i);
        let b: Vec<Vec<Poly>> = (0..r)
            .map(|a| (0..r).map(|c| if cb[a] == cb[c] { m[a][c].clone() } else { zero.clone() }).collect())
            .collect();
        let binv = unitriangular_inverse(&b).ok_or_else(|| broken("block part is not unitriangular"))?;
        let mc = poly_mat_mul(m, &binv);
        for a in 0..r {
            for c in 0..r {
                let ok = if a == c {
                    mc[a][c] == Poly::one(f, nv)
                } else if cb[a] <= cb[c] {
                    mc[a][c].is_zero()
                } else {
                    true
                };
                if !ok {
                    return Err(broken("coarsened frame is not in normal form"));
                }
            }
        }
        let mcinv = unitriangular_inverse(&mc).ok_or_else(|| broken("coarse frame not invertible"))?;
        // columns: the new line, then the lifts of the K columns
        let mut vecs: Vec<Vec<Poly>> = vec![(0..r).map(|a| m[a][j - 1].clone()).collect()];
        for c in 0..n {
            let v: Vec<Poly> = (0..r)
                .map(|a| {
                    (0..n).fold(zero.clone(), |acc, t| {
                        let k = &upper.kmat()[(i - 1) * n + t][c];
                        if k.is_zero() || m[a][j + t].is_zero() {
                            acc
                        } else {
                            &acc + &(k * &m[a][j + t])
                        }
                    })
                })
                .collect();
            vecs.push(v);
        }
        let mut cs = Vec::with_capacity(vecs.len());
        for v in vecs {
            let col: Vec<Vec<Poly>> = v.into_iter().map(|x| vec![x]).collect();
            let w = poly_mat_mul(&mcinv, &col);
            if (0..r).any(|a| (a < j - 1 || a > r - j) && !w[a][0].is_zero()) {
                return Err(broken("kernel vector leaves F^i"));
            }
            cs.push((j - 1..=r - j).map(|a| w[a][0].clone()).collect::<Vec<Poly>>());
        }
        coarse_frames.push(mc);
        coords.push(cs);
    }
    // K' as a 2n' × n' matrix: line 1, line 2, then the lifted K columns
    let kp: Vec<Vec<Poly>> = (0..2 * n2)
        .map(|row| {
            let (i, t) = (row / n2, row % n2);
            (0..n2)
                .map(|c| match c {
                    0 if i == 0 => coords[0][0][t].clone(),
                    1 if i == 1 => coords[1][0][t].clone(),
                    0 | 1 => zero.clone(),
                    _ => coords[i][c - 1][t].clone(),
                })
                .collect()
        })
        .collect();
    let pb: Vec<Vec<Poly>> = lower.pivots().iter().map(|&row| kp[row].clone()).collect();
    let pbinv = poly_inverse(&pb).ok_or_else(|| broken("pivot block of the image is not a unit"))?;
    let kn = poly_mat_mul(&kp, &pbinv);
    for (c, &row) in lower.pivots().iter().enumerate() {
        for c2 in 0..n2 {
            let want = Poly::constant(f, nv, u64::from(c == c2));
            if kn[row][c2] != want {
                return Err(broken("pivot normalisation failed"));
            }
        }
    }
    let mut images = Vec::with_capacity(lower.nvars());
    for mc in &coarse_frames {
        images.extend(lower.flag_vars().iter().map(|&(a, c)| mc[a][c].clone()));
    }
    images.extend(lower.fibre_vars().iter().map(|&(row, c)| kn[row][c].clone()));
    Ok(images)
}

fn eval_mat(m: &[Vec<Poly>], point: &[u64]) -> Result<Mat, TowerError> {
    m.iter()
        .map(|row| row.iter().map(|x| x.eval(point).map_err(TowerError::from)).collect())
        .collect()
}

fn outside(msg: impl Into<String>) -> TowerError {
    TowerError::OutsideBirationalLocus(msg.into())
}

/// `φ_j^{-1}` at a chart point of `D_1^{[j−1]} ∩ D_2^{[j−1]}` where both
/// `q_i` have corank exactly one.
pub fn phi_inverse(upper: &TowerLevel, lower: &TowerLevel, point: &[u64]) -> Result<Vec<u64>, TowerError> {
    check_pair(upper, lower)?;
    let f = upper.field();
    let r = upper.r();
    let j = upper.j();
    let n = upper.fibre_rank();
    let n2 = n + 2;
    let kp = eval_mat(lower.kmat(), point)?;
    let block = |i: usize| -> Mat { kp[i * n2..(i + 1) * n2].to_vec() };
    let mut frames: Vec<Mat> = Vec::with_capacity(2);
    let mut k_images: Vec<Vec<Vec<u64>>> = Vec::with_capacity(2);
    for i in 0..2 {
        let mc = eval_mat(lower.frame(i + 1), point)?;
        let own = block(i);
        let other = block(1 - i);
        if rank(f, &other) != n2 - 1 {
            return Err(outside(format!("q_{} does not have corank one", i + 1)));
        }
        let c = nullspace(f, &other, n2).pop().unwrap();
        let line = mat_vec(f, &own, &c);
        let embed = |w: &[u64]| -> Vec<u64> {
            (0..r)
                .map(|a| (0..n2).fold(0, |acc, t| f.add(acc, f.mul(w[t], mc[a][j - 1 + t]))))
                .collect()
        };
        let head: Vec<Vec<u64>> = (0..j - 1).map(|c| (0..r).map(|a| mc[a][c]).collect()).collect();
        let mut a_j = head.clone();
        a_j.push(embed(&line));
        let own_t: Mat = (0..n2).map(|c| (0..n2).map(|t| own[t][c]).collect()).collect();
        let mut a_rj = head;
        a_rj.extend(own_t.iter().map(|w| embed(w)));
        let a_j = Subspace::span(f, r, &a_j);
        let a_rj = Subspace::span(f, r, &a_rj);
        if a_j.dim() != j || a_rj.dim() != r - j {
            return Err(outside("recovered flag has the wrong dimensions"));
        }
        // normal-form frame for the refined flag
        let mut m: Mat = vec![vec![0; r]; r];
        let mut start = 0;
        for &size in upper.blocks() {
            let end = start + size;
            let space: Vec<Vec<u64>> = if end == j {
                a_j.basis().to_vec()
            } else if end == r - j {
                a_rj.basis().to_vec()
            } else {
                (0..end).map(|c| (0..r).map(|a| mc[a][c]).collect()).collect()
            };
            let sys: Mat = (0..end).map(|a| space.iter().map(|v| v[a]).collect()).collect();
            let inv = inverse(f, &sys).ok_or_else(|| outside("refined flag leaves the chart"))?;
            for k in 0..size {
                let rhs: Vec<u64> = (0..end).map(|a| u64::from(a == start + k)).collect();
                let y = mat_vec(f, &inv, &rhs);
                for a in 0..r {
                    m[a][start + k] = space.iter().zip(&y).fold(0, |acc, (v, &yy)| f.add(acc, f.mul(v[a], yy)));
                }
            }
            start = end;
        }
        let minv = inverse(f, &m).ok_or_else(|| outside("singular frame"))?;
        let imgs: Vec<Vec<u64>> = (0..n2)
            .map(|c| {
                let col: Vec<u64> = (0..n2).map(|t| own[t][c]).collect();
                let v = embed(&col);
                let w = mat_vec(f, &minv, &v);
                w[j..r - j].to_vec()
            })
            .collect();
        frames.push(m);
        k_images.push(imgs);
    }
    let mut out = Vec::with_capacity(upper.nvars());
    for m in &frames {
        out.extend(upper.flag_vars().iter().map(|&(a, c)| m[a][c]));
    }
    if n > 0 {
        let vecs: Vec<Vec<u64>> = (0..n2)
            .map(|c| k_images[0][c].iter().chain(&k_images[1][c]).copied().collect())
            .collect();
        let k = Subspace::span(f, 2 * n, &vecs);
        if k.dim() != n {
            return Err(outside("kernel quotient has the wrong rank"));
        }
        let kmat: Mat = (0..2 * n).map(|a| k.basis().iter().map(|v| v[a]).collect()).collect();
        let pb: Mat = upper.pivots().iter().map(|&row| kmat[row].clone()).collect();
        let pinv = inverse(f, &pb).ok_or_else(|| outside("kernel leaves the fibre chart"))?;
        let norm = crate::linalg::mat_mul(f, &kmat, &pinv);
        out.extend(upper.fibre_vars().iter().map(|&(row, c)| norm[row][c]));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::{build_tower, divisor_section};
    use super::*;
    use crate::gfpoly::parse_poly;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rank_two_map_is_a_coordinate_embedding() {
        let t = build_tower(2, 7).unwrap();
        let phi = phi_chart_map(&t[1], &t[0]).unwrap();
        let k = t[0].field();
        let want = ["x1", "0", "0", "x2"].map(|s| parse_poly(k, 2, s).unwrap());
        assert_eq!(phi, want.to_vec());
    }

    fn image_in_divisors(r: usize, p: u64) {
        let t = build_tower(r, p).unwrap();
        for j in 1..t.len() {
            let phi = phi_chart_map(&t[j], &t[j - 1]).unwrap();
            for i in 1..=2 {
                let s = divisor_section(&t[j - 1], i).unwrap();
                assert!(s.substitute(&phi).unwrap().is_zero(), "r={r} j={j} i={i}");
            }
        }
    }

    #[test]
    fn images_lie_in_both_divisors() {
        image_in_divisors(2, 7);
        image_in_divisors(3, 7);
        image_in_divisors(4, 5);
        image_in_divisors(5, 5);
    }

    fn round_trip(r: usize, p: u64, seed: u64) {
        let t = build_tower(r, p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for j in 1..t.len() {
            let phi = phi_chart_map(&t[j], &t[j - 1]).unwrap();
            let mut hits = 0;
            for _ in 0..40 {
                let x: Vec<u64> = (0..t[j].nvars()).map(|_| rng.gen_range(0..p)).collect();
                let u: Vec<u64> = phi.iter().map(|g| g.eval(&x).unwrap()).collect();
                match phi_inverse(&t[j], &t[j - 1], &u) {
                    Ok(back) => {
                        assert_eq!(back, x, "r={r} j={j}");
                        hits += 1;
                    }
                    Err(TowerError::OutsideBirationalLocus(_)) => {}
                    Err(e) => panic!("{e}"),
                }
            }
            assert!(hits >= 20, "r={r} j={j}: only {hits} points in the birational locus");
        }
    }

    #[test]
    fn inverse_round_trips() {
        round_trip(2, 7, 0);
        round_trip(3, 11, 1);
        round_trip(4, 11, 2);
    }

    #[test]
    fn inverse_rejects_points_off_the_locus() {
        let t = build_tower(2, 7).unwrap();
        // s_1 ≠ 0 here
        let e = phi_inverse(&t[1], &t[0], &[0, 1, 0, 0]).unwrap_err();
        assert!(matches!(e, TowerError::OutsideBirationalLocus(_)));
    }

    #[test]
    fn pulled_back_quotient_has_corank_one() {
        let t = build_tower(3, 11).unwrap();
        let phi = phi_chart_map(&t[1], &t[0]).unwrap();
        let f = t[0].field();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let x: Vec<u64> = (0..t[1].nvars()).map(|_| rng.gen_range(0..11)).collect();
            let u: Vec<u64> = phi.iter().map(|g| g.eval(&x).unwrap()).collect();
            let kp = eval_mat(t[0].kmat(), &u).unwrap();
            assert_eq!(rank(f, &kp), 3);
            // K' ∩ F'^1 is a line exactly when K ≠ F^1, i.e. t ≠ 0; the
            // chart never reaches K = F^2
            let t_coord = eval_mat(t[1].kmat(), &x).unwrap()[1][0];
            assert_eq!(rank(f, &kp[3..6].to_vec()) == 2, t_coord != 0);
            assert_eq!(rank(f, &kp[0..3].to_vec()), 2);
        }
    }
}
