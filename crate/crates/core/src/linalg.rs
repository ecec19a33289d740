//! Dense linear algebra over F_p and fraction-free determinants over F_p[x].

use crate::gfpoly::{Poly, PrimeField};

/// Row-major matrix of residues.
pub type Mat = Vec<Vec<u64>>;

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| u64::from(i == j)).collect())
        .collect()
}

pub fn transpose(a: &Mat) -> Mat {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| (0..rows).map(|i| a[i][j]).collect()).collect()
}

pub fn mat_mul(f: PrimeField, a: &Mat, b: &Mat) -> Mat {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(0, |acc, k| f.add(acc, f.mul(row[k], b[k][j]))))
                .collect()
        })
        .collect()
}

pub fn mat_vec(f: PrimeField, a: &Mat, v: &[u64]) -> Vec<u64> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y))))
        .collect()
}

/// Reduced row echelon form and pivot columns.
pub fn rref(f: PrimeField, a: &Mat) -> (Mat, Vec<usize>) {
    let mut m = a.clone();
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, pr);
        let inv = f.inv(m[r][c]).expect("pivot is nonzero");
        for x in m[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let factor = m[i][c];
                for j in 0..cols {
                    let t = f.mul(factor, m[r][j]);
                    m[i][j] = f.sub(m[i][j], t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank(f: PrimeField, a: &Mat) -> usize {
    rref(f, a).1.len()
}

pub fn det(f: PrimeField, a: &Mat) -> u64 {
    let n = a.len();
    let mut m = a.clone();
    let mut d = 1;
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| m[i][c] != 0) else {
            return 0;
        };
        if pr != c {
            m.swap(pr, c);
            d = f.neg(d);
        }
        d = f.mul(d, m[c][c]);
        let inv = f.inv(m[c][c]).expect("pivot is nonzero");
        for i in c + 1..n {
            if m[i][c] != 0 {
                let factor = f.mul(m[i][c], inv);
                for j in c..n {
                    let t = f.mul(factor, m[c][j]);
                    m[i][j] = f.sub(m[i][j], t);
                }
            }
        }
    }
    d
}

pub fn inverse(f: PrimeField, a: &Mat) -> Option<Mat> {
    let n = a.len();
    let aug: Mat = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| u64::from(i == j)));
            r
        })
        .collect();
    let (m, piv) = rref(f, &aug);
    if piv.len() < n || piv[n - 1] >= n {
        return None;
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Solves `a x = b`; free variables are set to zero, so the answer is
/// determined by the pivoting order.
pub fn solve(f: PrimeField, a: &Mat, b: &[u64]) -> Option<Vec<u64>> {
    let cols = a.first().map_or(0, Vec::len);
    let aug: Mat = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    let (m, piv) = rref(f, &aug);
    if piv.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![0; cols];
    for (r, &c) in piv.iter().enumerate() {
        x[c] = m[r][cols];
    }
    Some(x)
}

/// Basis of `{x : a x = 0}`.
pub fn nullspace(f: PrimeField, a: &Mat, cols: usize) -> Vec<Vec<u64>> {
    let (m, piv) = rref(f, a);
    let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0; cols];
            v[fc] = 1;
            for (r, &pc) in piv.iter().enumerate() {
                v[pc] = f.neg(m[r][fc]);
            }
            v
        })
        .collect()
}

/// A linear subspace of F_p^n kept as the nonzero rows of a reduced echelon
/// form, so two subspaces are equal exactly when their bases are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<u64>>,
}

impl Subspace {
    pub fn span(f: PrimeField, ambient: usize, vecs: &[Vec<u64>]) -> Self {
        let rows: Mat = vecs.iter().map(|v| v.iter().map(|x| x % f.p()).collect()).collect();
        let (m, piv) = rref(f, &rows);
        Subspace {
            ambient,
            basis: m.into_iter().take(piv.len()).collect(),
        }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new() }
    }

    pub fn whole(ambient: usize) -> Self {
        Subspace { ambient, basis: identity(ambient) }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u64>] {
        &self.basis
    }

    pub fn contains(&self, f: PrimeField, v: &[u64]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        rank(f, &rows) == self.basis.len()
    }

    pub fn contains_space(&self, f: PrimeField, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(f, v))
    }

    pub fn sum(&self, f: PrimeField, other: &Subspace) -> Subspace {
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Subspace::span(f, self.ambient, &rows)
    }

    /// Vectors orthogonal to the subspace under the standard pairing.
    pub fn annihilator(&self, f: PrimeField) -> Subspace {
        let ns = nullspace(f, &self.basis, self.ambient);
        Subspace::span(f, self.ambient, &ns)
    }

    pub fn intersect(&self, f: PrimeField, other: &Subspace) -> Subspace {
        let a = self.annihilator(f).sum(f, &other.annihilator(f));
        a.annihilator(f)
    }

    /// Image under `g` acting on column vectors.
    pub fn map(&self, f: PrimeField, g: &Mat) -> Subspace {
        let imgs: Vec<Vec<u64>> = self.basis.iter().map(|v| mat_vec(f, g, v)).collect();
        Subspace::span(f, self.ambient, &imgs)
    }
}

/// Determinant of a square polynomial matrix by Bareiss fraction-free
/// elimination; every division is exact.
pub fn poly_det(mut m: Vec<Vec<Poly>>) -> Poly {
    let n = m.len();
    assert!(n > 0, "determinant of an empty matrix");
    let field = m[0][0].field();
    let nvars = m[0][0].nvars();
    let mut sign_neg = false;
    let mut prev = Poly::one(field, nvars);
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(pr) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return Poly::zero(field, nvars);
            };
            m.swap(k, pr);
            sign_neg = !sign_neg;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num
                    .div_exact(&prev)
                    .expect("same ring")
                    .expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign_neg {
        -&d
    } else {
        d
    }
}

/// Product of polynomial matrices.
pub fn poly_mat_mul(a: &[Vec<Poly>], b: &[Vec<Poly>]) -> Vec<Vec<Poly>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner, "inner dimensions");
            (0..cols)
                .map(|j| {
                    let mut acc = row[0].scale(0);
                    for (k, x) in row.iter().enumerate() {
                        if !x.is_zero() && !b[k][j].is_zero() {
                            acc = &acc + &(x * &b[k][j]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Inverse of a lower unitriangular polynomial matrix by forward
/// substitution, or `None` when the matrix is not lower unitriangular.
pub fn unitriangular_inverse(m: &[Vec<Poly>]) -> Option<Vec<Vec<Poly>>> {
    let n = m.len();
    let field = m[0][0].field();
    let nvars = m[0][0].nvars();
    let one = Poly::one(field, nvars);
    for (a, row) in m.iter().enumerate() {
        if row[a] != one || row[a + 1..].iter().any(|x| !x.is_zero()) {
            return None;
        }
    }
    let mut inv = vec![vec![Poly::zero(field, nvars); n]; n];
    for c in 0..n {
        inv[c][c] = one.clone();
        for a in c + 1..n {
            let mut acc = Poly::zero(field, nvars);
            for k in c..a {
                if !m[a][k].is_zero() && !inv[k][c].is_zero() {
                    acc = &acc + &(&m[a][k] * &inv[k][c]);
                }
            }
            inv[a][c] = -&acc;
        }
    }
    Some(inv)
}

/// Inverse of a polynomial matrix whose determinant is a nonzero constant,
/// via the adjugate; `None` otherwise.
pub fn poly_inverse(m: &[Vec<Poly>]) -> Option<Vec<Vec<Poly>>> {
    let n = m.len();
    let field = m[0][0].field();
    let nvars = m[0][0].nvars();
    let d = poly_det(m.to_vec());
    if !d.is_constant() || d.is_zero() {
        return None;
    }
    let dinv = field.inv(d.constant_term()).ok()?;
    if n == 1 {
        return Some(vec![vec![Poly::constant(field, nvars, dinv)]]);
    }
    let mut inv = vec![vec![Poly::zero(field, nvars); n]; n];
    for a in 0..n {
        for c in 0..n {
            let minor: Vec<Vec<Poly>> = (0..n)
                .filter(|&i| i != c)
                .map(|i| (0..n).filter(|&j| j != a).map(|j| m[i][j].clone()).collect())
                .collect();
            let cof = poly_det(minor).scale(dinv);
            inv[a][c] = if (a + c) % 2 == 0 { cof } else { -&cof };
        }
    }
    Some(inv)
}
