use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Mul, Neg, Sub};

use super::{shape, PolyError, PrimeField};

/// Truncated products switch to a dense accumulator when the cap box has at
/// most this many cells.
pub const DENSE_CELL_LIMIT: usize = 10_000_000;

/// Exponent vector. Ordered graded-lexicographically with `x1 > x2 > ...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Per-variable maximum exponent for truncated arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpCap(Vec<u32>);

impl ExpCap {
    pub fn new(caps: Vec<u32>) -> Self {
        ExpCap(caps)
    }

    pub fn uniform(nvars: usize, cap: u32) -> Self {
        ExpCap(vec![cap; nvars])
    }

    pub fn caps(&self) -> &[u32] {
        &self.0
    }

    pub fn allows(&self, m: &Monomial) -> bool {
        m.0.iter().zip(&self.0).all(|(e, c)| e <= c)
    }

    fn cells(&self) -> Option<usize> {
        let mut n: usize = 1;
        for &c in &self.0 {
            n = n.checked_mul(c as usize + 1)?;
        }
        Some(n)
    }
}

/// Order of vanishing; the zero polynomial vanishes to infinite order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(u64),
    Infinite,
}

impl std::fmt::Display for Order {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => write!(f, "inf"),
        }
    }
}

/// `x_i -> sum_j coeffs[j] * y_j + constant`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineForm {
    pub coeffs: Vec<u64>,
    pub constant: u64,
}

/// Sparse polynomial over F_p. Stored coefficients are nonzero residues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    field: PrimeField,
    nvars: usize,
    terms: BTreeMap<Monomial, u64>,
}

impl Poly {
    pub fn zero(field: PrimeField, nvars: usize) -> Self {
        Poly {
            field,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: PrimeField, nvars: usize, c: u64) -> Self {
        Self::monomial(field, Monomial::one(nvars), c)
    }

    pub fn one(field: PrimeField, nvars: usize) -> Self {
        Self::constant(field, nvars, 1)
    }

    pub fn var(field: PrimeField, nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        Self::monomial(field, Monomial::var(nvars, i), 1)
    }

    pub fn monomial(field: PrimeField, m: Monomial, c: u64) -> Self {
        let nvars = m.len();
        let mut terms = BTreeMap::new();
        let c = c % field.p();
        if c != 0 {
            terms.insert(m, c);
        }
        Poly {
            field,
            nvars,
            terms,
        }
    }

    /// Builds a polynomial from (exponents, coefficient) pairs, summing repeats.
    pub fn from_terms<I>(field: PrimeField, nvars: usize, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Vec<u32>, u64)>,
    {
        let mut out = Poly::zero(field, nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(shape(format!(
                    "monomial of length {} in a ring with {nvars} variables",
                    e.len()
                )));
            }
            out.add_term(Monomial(e), c % field.p());
        }
        Ok(out)
    }

    fn from_map(field: PrimeField, nvars: usize, terms: BTreeMap<Monomial, u64>) -> Self {
        Poly {
            field,
            nvars,
            terms,
        }
    }

    fn add_term(&mut self, m: Monomial, c: u64) {
        if c == 0 {
            return;
        }
        let f = self.field;
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = f.add(*v, c);
                if *v == 0 {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, u64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coeff(&self, m: &Monomial) -> Result<u64, PolyError> {
        if m.len() != self.nvars {
            return Err(shape(format!(
                "monomial of length {} queried in a ring with {} variables",
                m.len(),
                self.nvars
            )));
        }
        Ok(self.terms.get(m).copied().unwrap_or(0))
    }

    pub fn constant_term(&self) -> u64 {
        self.terms.get(&Monomial::one(self.nvars)).copied().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[i]).max()
    }

    pub fn leading(&self) -> Option<(&Monomial, u64)> {
        self.terms.iter().next_back().map(|(m, &c)| (m, c))
    }

    fn check_same(&self, other: &Poly) -> Result<(), PolyError> {
        if self.field != other.field {
            return Err(shape(format!(
                "fields F_{} and F_{} differ",
                self.field.p(),
                other.field.p()
            )));
        }
        if self.nvars != other.nvars {
            return Err(shape(format!(
                "{} and {} variables",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.try_add(&other.neg_ref())
    }

    fn neg_ref(&self) -> Poly {
        let f = self.field;
        let terms = self.terms.iter().map(|(m, &c)| (m.clone(), f.neg(c))).collect();
        Poly::from_map(f, self.nvars, terms)
    }

    pub fn scale(&self, c: u64) -> Poly {
        let f = self.field;
        let c = c % f.p();
        if c == 0 {
            return Poly::zero(f, self.nvars);
        }
        let terms = self.terms.iter().map(|(m, &v)| (m.clone(), f.mul(v, c))).collect();
        Poly::from_map(f, self.nvars, terms)
    }

    /// Product, optionally dropping monomials with an exponent above the cap.
    pub fn mul_capped(&self, other: &Poly, cap: Option<&ExpCap>) -> Result<Poly, PolyError> {
        self.check_same(other)?;
        if let Some(c) = cap {
            if c.0.len() != self.nvars {
                return Err(shape(format!(
                    "cap of length {} for {} variables",
                    c.0.len(),
                    self.nvars
                )));
            }
        }
        Ok(Poly::from_map(self.field, self.nvars, mul_maps(self, other, cap)))
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.mul_capped(other, None)
    }

    pub fn truncate(&self, cap: &ExpCap) -> Poly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| cap.allows(m))
            .map(|(m, &c)| (m.clone(), c))
            .collect();
        Poly::from_map(self.field, self.nvars, terms)
    }

    pub fn pow(&self, e: u64) -> Poly {
        let mut acc = Poly::one(self.field, self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `f^e` with the cap applied after every intermediate product.
    ///
    /// Square-and-multiply by default. When the base is sparse compared with
    /// the cap box the chain `f * f * ... * f` is cheaper; truncation
    /// soundness makes both produce the same polynomial.
    pub fn pow_truncated(&self, e: u64, cap: &ExpCap) -> Result<Poly, PolyError> {
        if cap.0.len() != self.nvars {
            return Err(shape(format!(
                "cap of length {} for {} variables",
                cap.0.len(),
                self.nvars
            )));
        }
        let base = self.truncate(cap);
        let cells = cap.cells().unwrap_or(usize::MAX);
        if e >= 2 && (base.len() as u128) * (e as u128) <= cells as u128 / 64 {
            let mut acc = Poly::one(self.field, self.nvars).truncate(cap);
            for _ in 0..e {
                acc = acc.mul_capped(&base, Some(cap))?;
                if acc.is_zero() {
                    break;
                }
            }
            return Ok(acc);
        }
        let mut acc = Poly::one(self.field, self.nvars).truncate(cap);
        let mut sq = base;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_capped(&sq, Some(cap))?;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul_capped(&sq, Some(cap))?;
            }
        }
        Ok(acc)
    }

    /// Partial derivative in variable `i`.
    pub fn derivative(&self, i: usize) -> Poly {
        let f = self.field;
        let mut out = Poly::zero(f, self.nvars);
        for (m, &c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[i] -= 1;
            out.add_term(Monomial(exps), f.mul(c, e as u64 % f.p()));
        }
        out
    }

    pub fn eval(&self, point: &[u64]) -> Result<u64, PolyError> {
        if point.len() != self.nvars {
            return Err(shape(format!(
                "point of length {} for {} variables",
                point.len(),
                self.nvars
            )));
        }
        let f = self.field;
        let mut acc = 0;
        for (m, &c) in &self.terms {
            let mut t = c;
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t = f.mul(t, f.pow(*x % f.p(), e as u64));
                }
            }
            acc = f.add(acc, t);
        }
        Ok(acc)
    }

    /// Replaces `x_i` by `images[i]`; all images live in one target ring.
    pub fn substitute(&self, images: &[Poly]) -> Result<Poly, PolyError> {
        if images.len() != self.nvars {
            return Err(shape(format!(
                "{} images for {} variables",
                images.len(),
                self.nvars
            )));
        }
        let (field, target) = match images.first() {
            Some(g) => (g.field, g.nvars),
            None => {
                let c = self.constant_term();
                return Ok(Poly::constant(self.field, 0, c));
            }
        };
        for g in images {
            if g.field != field || g.nvars != target {
                return Err(shape("substitution images live in different rings"));
            }
        }
        if field != self.field {
            return Err(shape("substitution changes the base field"));
        }
        let mut powers: Vec<Vec<Poly>> = images
            .iter()
            .map(|g| vec![Poly::one(field, target), g.clone()])
            .collect();
        let mut acc: HashMap<Monomial, u64> = HashMap::new();
        for (m, &c) in &self.terms {
            let mut t = Poly::constant(field, target, c);
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
                if t.is_zero() {
                    break;
                }
            }
            for (tm, tc) in t.terms {
                let slot = acc.entry(tm).or_insert(0);
                *slot = field.add(*slot, tc);
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        Ok(Poly::from_map(field, target, terms))
    }

    pub fn substitute_affine(&self, map: &[AffineForm], target_nvars: usize) -> Result<Poly, PolyError> {
        let f = self.field;
        let mut images = Vec::with_capacity(map.len());
        for form in map {
            if form.coeffs.len() != target_nvars {
                return Err(shape(format!(
                    "affine form with {} coefficients for {target_nvars} target variables",
                    form.coeffs.len()
                )));
            }
            let mut g = Poly::constant(f, target_nvars, form.constant);
            for (j, &c) in form.coeffs.iter().enumerate() {
                g.add_term(Monomial::var(target_nvars, j), c % f.p());
            }
            images.push(g);
        }
        self.substitute(&images)
    }

    /// Minimum over terms of the summed exponents of the chosen variables.
    pub fn vanishing_order(&self, coords: &[usize]) -> Order {
        self.terms
            .keys()
            .map(|m| coords.iter().map(|&j| m.0[j] as u64).sum::<u64>())
            .min()
            .map_or(Order::Infinite, Order::Finite)
    }

    /// Sets the listed variables to zero and removes them from the ring.
    pub fn restrict_zero(&self, vars: &[usize]) -> Poly {
        let keep: Vec<usize> = (0..self.nvars).filter(|i| !vars.contains(i)).collect();
        let mut out = Poly::zero(self.field, keep.len());
        for (m, &c) in &self.terms {
            if vars.iter().all(|&j| m.0[j] == 0) {
                let e = keep.iter().map(|&i| m.0[i]).collect();
                out.terms.insert(Monomial(e), c);
            }
        }
        out
    }

    /// Moves variable `i` to position `mapping[i]` of a ring with `nvars` variables.
    pub fn embed(&self, nvars: usize, mapping: &[usize]) -> Result<Poly, PolyError> {
        if mapping.len() != self.nvars || mapping.iter().any(|&j| j >= nvars) {
            return Err(shape("bad variable embedding"));
        }
        let mut out = Poly::zero(self.field, nvars);
        for (m, &c) in &self.terms {
            let mut e = vec![0u32; nvars];
            for (i, &x) in m.0.iter().enumerate() {
                e[mapping[i]] += x;
            }
            out.add_term(Monomial(e), c);
        }
        Ok(out)
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    ///
    /// With a single divisor the graded-lex division remainder vanishes
    /// exactly when the division is exact.
    pub fn div_exact(&self, d: &Poly) -> Result<Option<Poly>, PolyError> {
        self.check_same(d)?;
        let (lm, lc) = match d.leading() {
            Some((m, c)) => (m.clone(), c),
            None => return Err(PolyError::ZeroInverse),
        };
        let f = self.field;
        let lc_inv = f.inv(lc)?;
        let mut rem = self.clone();
        let mut quot = Poly::zero(f, self.nvars);
        while let Some((rm, rc)) = rem.leading().map(|(m, c)| (m.clone(), c)) {
            if !lm.divides(&rm) {
                return Ok(None);
            }
            let qe: Vec<u32> = rm.0.iter().zip(&lm.0).map(|(a, b)| a - b).collect();
            let qc = f.mul(rc, lc_inv);
            let qm = Monomial(qe);
            for (dm, &dc) in &d.terms {
                let e = Monomial(dm.0.iter().zip(&qm.0).map(|(a, b)| a + b).collect());
                rem.add_term(e, f.neg(f.mul(dc, qc)));
            }
            quot.add_term(qm, qc);
        }
        Ok(Some(quot))
    }
}

fn mul_maps(a: &Poly, b: &Poly, cap: Option<&ExpCap>) -> BTreeMap<Monomial, u64> {
    let f = a.field;
    let n = a.nvars;
    let (aa, bb): (Vec<_>, Vec<_>) = match cap {
        Some(c) => (
            a.terms.iter().filter(|(m, _)| c.allows(m)).collect(),
            b.terms.iter().filter(|(m, _)| c.allows(m)).collect(),
        ),
        None => (a.terms.iter().collect(), b.terms.iter().collect()),
    };
    if aa.is_empty() || bb.is_empty() {
        return BTreeMap::new();
    }
    if let Some(c) = cap {
        if let Some(cells) = c.cells().filter(|&s| s <= DENSE_CELL_LIMIT) {
            let caps = &c.0;
            let mut strides = vec![1usize; n];
            for i in (0..n.saturating_sub(1)).rev() {
                strides[i] = strides[i + 1] * (caps[i + 1] as usize + 1);
            }
            let index = |m: &Monomial| -> usize {
                m.0.iter().zip(&strides).map(|(&e, &s)| e as usize * s).sum()
            };
            let ai: Vec<(usize, &[u32], u64)> =
                aa.iter().map(|(m, &c)| (index(m), m.exps(), c)).collect();
            let bi: Vec<(usize, &[u32], u64)> =
                bb.iter().map(|(m, &c)| (index(m), m.exps(), c)).collect();
            let mut acc = vec![0u64; cells];
            let mut touched = Vec::new();
            for &(ia, ea, ca) in &ai {
                'pair: for &(ib, eb, cb) in &bi {
                    for k in 0..n {
                        if ea[k] + eb[k] > caps[k] {
                            continue 'pair;
                        }
                    }
                    let slot = &mut acc[ia + ib];
                    if *slot == 0 {
                        touched.push(ia + ib);
                    }
                    *slot = f.add(*slot, f.mul(ca, cb));
                }
            }
            let mut out = BTreeMap::new();
            touched.sort_unstable();
            touched.dedup();
            for idx in touched {
                let c = acc[idx];
                if c == 0 {
                    continue;
                }
                let mut e = vec![0u32; n];
                let mut rest = idx;
                for k in 0..n {
                    e[k] = (rest / strides[k]) as u32;
                    rest %= strides[k];
                }
                out.insert(Monomial(e), c);
            }
            return out;
        }
    }
    let mut acc: HashMap<Vec<u32>, u64> = HashMap::with_capacity(aa.len() * bb.len().min(64));
    for (ma, &ca) in &aa {
        'pair: for (mb, &cb) in &bb {
            let mut e = Vec::with_capacity(n);
            for k in 0..n {
                let s = ma.0[k] + mb.0[k];
                if let Some(c) = cap {
                    if s > c.0[k] {
                        continue 'pair;
                    }
                }
                e.push(s);
            }
            let slot = acc.entry(e).or_insert(0);
            *slot = f.add(*slot, f.mul(ca, cb));
        }
    }
    acc.into_iter()
        .filter(|(_, c)| *c != 0)
        .map(|(e, c)| (Monomial(e), c))
        .collect()
}

impl Add for &Poly {
    type Output = Poly;
    /// Panics when the operands live in different rings.
    fn add(self, rhs: &Poly) -> Poly {
        self.try_add(rhs).expect("polynomial ring mismatch")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.try_sub(rhs).expect("polynomial ring mismatch")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.try_mul(rhs).expect("polynomial ring mismatch")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.neg_ref()
    }
}
