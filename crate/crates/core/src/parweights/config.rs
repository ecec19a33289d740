//! Line-oriented weight files.
//!
//! ```text
//! # comment
//! rank=3
//! degree=0
//! genus=0
//! k=6
//! point y1 type=2,1 weight=0,3
//! point z1 type=1,1,1 weight=0,2,4
//! ```
//!
//! When `k` and every `weight=` are omitted the canonical weight is used.

use super::{canonical_weight, ParData, ParError, QuasiParType};
use std::fmt::Write;

fn perr(line: usize, msg: impl Into<String>) -> ParError {
    ParError::Parse { line, msg: msg.into() }
}

fn parse_list<T: std::str::FromStr>(line: usize, s: &str) -> Result<Vec<T>, ParError> {
    s.trim_matches(|c| c == '(' || c == ')')
        .split(',')
        .map(|x| x.trim().parse::<T>().map_err(|_| perr(line, format!("bad number {x:?}"))))
        .collect()
}

/// Parses `"(2,1);(1,1,1)"` into types.
pub fn parse_types(src: &str) -> Result<Vec<QuasiParType>, ParError> {
    src.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|s| QuasiParType::new(parse_list(1, s.trim())?))
        .collect()
}

pub fn parse_pardata(src: &str) -> Result<ParData, ParError> {
    let mut rank = None;
    let mut degree = 0i64;
    let mut genus = 0u64;
    let mut k = None;
    let mut points: Vec<(String, QuasiParType, Option<Vec<u64>>)> = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let ln = i + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("point ") {
            let mut it = rest.split_whitespace();
            let label = it.next().ok_or_else(|| perr(ln, "point needs a label"))?;
            let mut ty = None;
            let mut w = None;
            for field in it {
                match field.split_once('=') {
                    Some(("type", v)) => ty = Some(QuasiParType::new(parse_list(ln, v)?)?),
                    Some(("weight", v)) => w = Some(parse_list(ln, v)?),
                    _ => return Err(perr(ln, format!("unexpected field {field:?}"))),
                }
            }
            let ty = ty.ok_or_else(|| perr(ln, "point needs type="))?;
            points.push((label.to_string(), ty, w));
            continue;
        }
        let (key, val) = line
            .split_once('=')
            .ok_or_else(|| perr(ln, format!("expected key=value, got {line:?}")))?;
        let val = val.trim();
        let bad = |_| perr(ln, format!("bad value {val:?} for {key}"));
        match key.trim() {
            "rank" => rank = Some(val.parse::<u32>().map_err(bad)?),
            "degree" => degree = val.parse::<i64>().map_err(bad)?,
            "genus" => genus = val.parse::<u64>().map_err(bad)?,
            "k" => k = Some(val.parse::<u64>().map_err(bad)?),
            other => return Err(perr(ln, format!("unknown key {other:?}"))),
        }
    }
    let r = rank.ok_or_else(|| perr(0, "missing rank="))?;
    let any_weight = points.iter().any(|p| p.2.is_some());
    match k {
        None if !any_weight => {
            let types = points.into_iter().map(|(l, t, _)| (l, t)).collect();
            canonical_weight(types, r, degree, genus)
        }
        None => Err(perr(0, "weights given without k=")),
        Some(k) => {
            let mut pts = Vec::with_capacity(points.len());
            for (l, t, w) in points {
                let w = w.ok_or_else(|| perr(0, format!("point {l} has no weight=")))?;
                pts.push((l, t, w));
            }
            ParData::new(r, degree, genus, k, pts)
        }
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

/// Writes the file format read by [`parse_pardata`].
pub fn write_pardata(w: &ParData) -> String {
    let mut out = String::new();
    writeln!(out, "rank={}", w.rank()).unwrap();
    writeln!(out, "degree={}", w.degree()).unwrap();
    writeln!(out, "genus={}", w.genus()).unwrap();
    writeln!(out, "k={}", w.k()).unwrap();
    for (label, pt) in w.points() {
        writeln!(
            out,
            "point {label} type={} weight={}",
            join(pt.ty.parts()),
            join(pt.weight.a())
        )
        .unwrap();
    }
    out
}
