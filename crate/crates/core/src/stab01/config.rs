use super::StabError;
use crate::gfpoly::PrimeField;
use crate::linalg::{rank, transpose, Mat, Subspace};

/// A point of P¹ in its affine coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum P1Point {
    Affine(u64),
    Infinity,
}

impl P1Point {
    /// Value at this point of the section `a + b·t` of `O(1)^r`.
    pub fn eval_linear(&self, f: PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
        match *self {
            P1Point::Affine(t) => a.iter().zip(b).map(|(&x, &y)| f.add(x, f.mul(t, y))).collect(),
            P1Point::Infinity => b.to_vec(),
        }
    }
}

impl std::fmt::Display for P1Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            P1Point::Affine(t) => write!(f, "{t}"),
            P1Point::Infinity => write!(f, "inf"),
        }
    }
}

/// A marked point with its flag of kernels `E_x ⊋ E_{x,1} ⊋ … ⊋ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedPoint {
    pub label: String,
    pub at: P1Point,
    /// `chain[i−1] = E_{x,i}`.
    pub chain: Vec<Subspace>,
}

impl MarkedPoint {
    /// `E_{x,i}`: the whole space for `i = 0`, zero past the flag.
    pub fn e(&self, i: usize) -> Subspace {
        let r = self.chain.first().map_or(0, Subspace::ambient);
        match i {
            0 => Subspace::whole(r),
            _ => self.chain.get(i - 1).cloned().unwrap_or_else(|| Subspace::zero(r)),
        }
    }

    /// Type `n(x)`: `n_i = dim E_{x,i−1} − dim E_{x,i}`.
    pub fn type_parts(&self) -> Vec<u32> {
        (1..=self.chain.len() + 1).map(|i| (self.e(i - 1).dim() - self.e(i).dim()) as u32).collect()
    }
}

/// Parabolic data on `O^r` over P¹ pulled back to `W = H^0(E) = k^r`: a line
/// `E_{y_1,1}` at `y_1`, full flags at `z_1`, `z_2` and an optional free point
/// `z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlagConfig {
    r: usize,
    field: PrimeField,
    y1: MarkedPoint,
    z1: MarkedPoint,
    z2: MarkedPoint,
    z: Option<P1Point>,
}

fn bad(msg: impl Into<String>) -> StabError {
    StabError::BadConfig(msg.into())
}

/// Kernels `E_{x,i}` spanned by the first `r − i` columns of `m`.
fn full_flag(field: PrimeField, m: &Mat) -> Result<Vec<Subspace>, StabError> {
    let r = m.len();
    if m.iter().any(|row| row.len() != r) || rank(field, m) != r {
        return Err(bad("flag matrix is not invertible"));
    }
    let cols = transpose(m);
    Ok((1..r).map(|i| Subspace::span(field, r, &cols[..r - i])).collect())
}

impl FlagConfig {
    pub fn new(
        field: PrimeField,
        y1: (P1Point, Vec<u64>),
        z1: (P1Point, Mat),
        z2: (P1Point, Mat),
        z: Option<P1Point>,
    ) -> Result<Self, StabError> {
        let r = y1.1.len();
        if r < 2 {
            return Err(StabError::UnsupportedRank(r));
        }
        let line = Subspace::span(field, r, std::slice::from_ref(&y1.1));
        if line.dim() != 1 {
            return Err(bad("E_{y1,1} is not a line"));
        }
        let mut ats = vec![y1.0, z1.0, z2.0];
        ats.extend(z);
        for (i, a) in ats.iter().enumerate() {
            if let P1Point::Affine(t) = a {
                if *t >= field.p() {
                    return Err(bad(format!("coordinate {t} is not reduced mod {}", field.p())));
                }
            }
            if ats[..i].contains(a) {
                return Err(bad(format!("point {a} is marked twice")));
            }
        }
        let point = |label: &str, at, chain| MarkedPoint { label: label.into(), at, chain };
        Ok(FlagConfig {
            r,
            field,
            y1: point("y1", y1.0, vec![line]),
            z1: point("z1", z1.0, full_flag(field, &z1.1)?),
            z2: point("z2", z2.0, full_flag(field, &z2.1)?),
            z,
        })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn y1(&self) -> &MarkedPoint {
        &self.y1
    }

    pub fn z1(&self) -> &MarkedPoint {
        &self.z1
    }

    pub fn z2(&self) -> &MarkedPoint {
        &self.z2
    }

    pub fn z(&self) -> Option<P1Point> {
        self.z
    }

    pub fn points(&self) -> [&MarkedPoint; 3] {
        [&self.y1, &self.z1, &self.z2]
    }

    /// `g` applied to every subspace.
    pub fn transform(&self, g: &Mat) -> Result<Self, StabError> {
        let f = self.field;
        if g.len() != self.r || rank(f, g) != self.r {
            return Err(bad("transform is not invertible"));
        }
        let map = |p: &MarkedPoint| MarkedPoint {
            label: p.label.clone(),
            at: p.at,
            chain: p.chain.iter().map(|s| s.map(f, g)).collect(),
        };
        Ok(FlagConfig { r: self.r, field: f, y1: map(&self.y1), z1: map(&self.z1), z2: map(&self.z2), z: self.z })
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> StabError {
    StabError::Parse { line, msg: msg.into() }
}

fn parse_at(line: usize, s: &str, p: u64) -> Result<P1Point, StabError> {
    if s == "inf" {
        return Ok(P1Point::Infinity);
    }
    let t: i64 = s.parse().map_err(|_| parse_err(line, format!("bad point coordinate {s:?}")))?;
    Ok(P1Point::Affine(t.rem_euclid(p as i64) as u64))
}

fn parse_row(line: usize, s: &str, p: u64) -> Result<Vec<u64>, StabError> {
    s.split_whitespace()
        .map(|x| {
            x.parse::<i64>()
                .map(|v| v.rem_euclid(p as i64) as u64)
                .map_err(|_| parse_err(line, format!("bad entry {x:?}")))
        })
        .collect()
}

/// Reads the configuration file format:
///
/// ```text
/// rank=3
/// field=7
/// point z1 at=0 flag=1 0 0; 0 1 0; 0 0 1
/// point z2 at=inf flag=0 0 1; 0 1 0; 1 0 0
/// line y1 at=1 span=1 1 1
/// point z at=2
/// ```
///
/// `hyperplane y1 at=<t> normal=<row>` is accepted for rank 2, where the
/// hyperplane is a line.
pub fn parse_flag_config(src: &str) -> Result<FlagConfig, StabError> {
    let mut r = None;
    let mut p = None;
    let mut y1 = None;
    let mut z1 = None;
    let mut z2 = None;
    let mut z = None;
    for (n, raw) in src.lines().enumerate() {
        let line = n + 1;
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        if let Some(v) = text.strip_prefix("rank=") {
            r = Some(v.trim().parse::<usize>().map_err(|_| parse_err(line, "bad rank"))?);
            continue;
        }
        if let Some(v) = text.strip_prefix("field=") {
            p = Some(v.trim().parse::<u64>().map_err(|_| parse_err(line, "bad field"))?);
            continue;
        }
        let p = p.ok_or_else(|| parse_err(line, "field= must come first"))?;
        let r = r.ok_or_else(|| parse_err(line, "rank= must come first"))?;
        let mut words = text.splitn(3, char::is_whitespace);
        let kind = words.next().unwrap_or("");
        let label = words.next().ok_or_else(|| parse_err(line, "missing label"))?;
        let rest = words.next().unwrap_or("").trim();
        let (at_part, data) = match rest.split_once(char::is_whitespace) {
            Some((a, d)) => (a, d.trim()),
            None => (rest, ""),
        };
        let at = parse_at(line, at_part.strip_prefix("at=").ok_or_else(|| parse_err(line, "expected at="))?, p)?;
        match (kind, label) {
            ("point", "z") => z = Some(at),
            ("point", "z1") | ("point", "z2") => {
                let rows = data.strip_prefix("flag=").ok_or_else(|| parse_err(line, "expected flag="))?;
                let m: Mat = rows.split(';').map(|row| parse_row(line, row, p)).collect::<Result<_, _>>()?;
                if m.len() != r || m.iter().any(|row| row.len() != r) {
                    return Err(parse_err(line, format!("flag must be {r} x {r}")));
                }
                if label == "z1" {
                    z1 = Some((at, m));
                } else {
                    z2 = Some((at, m));
                }
            }
            ("line", "y1") => {
                let v = parse_row(line, data.strip_prefix("span=").ok_or_else(|| parse_err(line, "expected span="))?, p)?;
                if v.len() != r {
                    return Err(parse_err(line, format!("span needs {r} entries")));
                }
                y1 = Some((at, v));
            }
            ("hyperplane", "y1") => {
                let v = parse_row(line, data.strip_prefix("normal=").ok_or_else(|| parse_err(line, "expected normal="))?, p)?;
                if r != 2 || v.len() != 2 {
                    return Err(parse_err(line, "the datum at y1 is a line; hyperplane form needs rank 2"));
                }
                y1 = Some((at, vec![v[1], (p - v[0]) % p]));
            }
            _ => return Err(parse_err(line, format!("unknown entry {kind} {label}"))),
        }
    }
    let field = PrimeField::new(p.ok_or_else(|| parse_err(0, "missing field="))?).map_err(|e| parse_err(0, e.to_string()))?;
    let cfg = FlagConfig::new(
        field,
        y1.ok_or_else(|| parse_err(0, "missing y1"))?,
        z1.ok_or_else(|| parse_err(0, "missing z1"))?,
        z2.ok_or_else(|| parse_err(0, "missing z2"))?,
        z,
    )?;
    if Some(cfg.r()) != r {
        return Err(parse_err(0, "rank= disagrees with the data"));
    }
    Ok(cfg)
}

/// Prints a configuration in the format read by [`parse_flag_config`].
pub fn write_flag_config(cfg: &FlagConfig) -> String {
    let r = cfg.r();
    let mut out = format!("rank={r}\nfield={}\n", cfg.field().p());
    for zp in [cfg.z1(), cfg.z2()] {
        // columns: a basis adapted to the flag, deepest first
        let mut cols: Vec<Vec<u64>> = Vec::new();
        for i in (0..r).rev() {
            let sub = zp.e(i);
            for v in sub.basis() {
                let mut trial = cols.clone();
                trial.push(v.clone());
                if rank(cfg.field(), &trial) > cols.len() {
                    cols = trial;
                    break;
                }
            }
        }
        let m = transpose(&cols);
        let rows: Vec<String> =
            m.iter().map(|row| row.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")).collect();
        out += &format!("point {} at={} flag={}\n", zp.label, zp.at, rows.join("; "));
    }
    let l = &cfg.y1().chain[0].basis()[0];
    out += &format!(
        "line y1 at={} span={}\n",
        cfg.y1().at,
        l.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
    );
    if let Some(z) = cfg.z() {
        out += &format!("point z at={z}\n");
    }
    out
}
