//! Acceptance suite: one line per criterion, exit status 1 if any fails.
//!
//! Every comparison is exact. Budgets are wall-clock limits for the test
//! profile and count as part of each criterion.

use frobsplit_core::flagchart::{flag_verify, FlagVerifyOptions};
use frobsplit_core::gfpoly::{ExpCap, Monomial, Poly, PrimeField};
use frobsplit_core::grtower::{build_tower, corollary45_pipeline, section_space, PipelineOptions, Restriction, SplitStatus};
use frobsplit_core::linalg::{mat_mul, rank, Mat, Subspace};
use frobsplit_core::parweights::{
    canonical_weight, codim_bounds, ell, hecke_transform, lemma56_check, sigma_min, sigma_value, ParData,
    QuasiParType,
};
use frobsplit_core::repdims::{decomposition_identity, grass_sections_dim};
use frobsplit_core::splitcheck::divisor_propagation_check;
use frobsplit_core::stab01::{
    genericity_check_512, omega_c0, random_flag_config, rank2_bruteforce, special_loci,
    subspace_destabilizer_search, FlagConfig, P1Point,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn field(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Every `m` with `0 ≤ m_i ≤ n_i` and `Σ m_i = r1`, by brute force over the box.
fn box_vectors(n: &[u32], r1: u32) -> Vec<Vec<u32>> {
    let mut all = vec![Vec::new()];
    for &ni in n {
        all = all.into_iter().flat_map(|v: Vec<u32>| (0..=ni).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    all.into_iter().filter(|v| v.iter().sum::<u32>() == r1).collect()
}

fn one_point(r: u32, d: i64, ty: Vec<u32>) -> ParData {
    canonical_weight(vec![("x".into(), QuasiParType::new(ty).unwrap())], r, d, 0).unwrap()
}

fn compositions(r: u32) -> Vec<Vec<u32>> {
    if r == 0 {
        return vec![Vec::new()];
    }
    (1..=r)
        .flat_map(|first| compositions(r - first).into_iter().map(move |rest| [vec![first], rest].concat()))
        .collect()
}

fn c1_sigma_closed_forms() -> Outcome {
    let mut checked = 0;
    for r in 2..=6u32 {
        let full = one_point(r, 0, vec![1; r as usize]);
        let hook = one_point(r, 0, vec![r - 1, 1]);
        for r1 in 1..r {
            for m in box_vectors(&vec![1; r as usize], r1) {
                let v = sigma_value(&full, "x", &m).map_err(|e| e.to_string())?;
                let want = q((r1 * (r - r1)) as i64, 2);
                ensure(v == want, || format!("full r={r} r1={r1} m={m:?}: {v} != {want}"))?;
                checked += 1;
            }
            for m in box_vectors(&[r - 1, 1], r1) {
                let v = sigma_value(&hook, "x", &m).map_err(|e| e.to_string())?;
                let want = if m[1] != 0 { q((r - r1) as i64, 2) } else { q(r1 as i64, 2) };
                ensure(v == want, || format!("(r-1,1) r={r} r1={r1} m={m:?}: {v} != {want}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} m-vectors match the closed forms"))
}

fn c2_sigma_lower_bound() -> Outcome {
    let mut checked = 0;
    for r in 2..=5u32 {
        for n in compositions(r).into_iter().filter(|n| n.len() > 1) {
            let omega = one_point(r, 0, n.clone());
            let floor = q(1, omega.k() as i64);
            for r1 in 1..r {
                let s = sigma_min(&omega, "x", r1).map_err(|e| e.to_string())?;
                ensure(s >= floor, || format!("type {n:?} r1={r1}: sigma_min {s} < {floor}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (type, r1) pairs with nontrivial flags"))
}

fn c3_hecke_fixed_point() -> Outcome {
    let mut checked = 0;
    for r in 2..=8u32 {
        for d in -2..=2i64 {
            let types = vec![
                ("z".to_string(), QuasiParType::full_flag(r)),
                ("y".to_string(), QuasiParType::new(vec![r - 1, 1]).unwrap()),
            ];
            let omega = canonical_weight(types.clone(), r, d, 0).unwrap();
            let h = hecke_transform(&omega, "z").map_err(|e| e.to_string())?;
            let a = h.point("z").unwrap().weight.a().to_vec();
            ensure(a[0] == 0 && a.windows(2).all(|w| w[0] < w[1]) && *a.last().unwrap() < h.k(), || {
                format!("r={r}: weights {a:?} break 0 = a_1 < ... < a_r < k")
            })?;
            ensure(h == canonical_weight(types, r, d - 1, 0).unwrap(), || format!("r={r} d={d}: not canonical"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} canonical data fixed"))
}

fn c4_flag_verify() -> Outcome {
    let mut lines = Vec::new();
    for (r, p) in [(2usize, 7u64), (2, 11), (2, 31), (3, 11), (3, 13)] {
        let rep = flag_verify(r, p, FlagVerifyOptions { orders: true, delta_chain: true }).map_err(|e| e.to_string())?;
        let mut in_chart = 0;
        for c in &rep.checks {
            if c.name.starts_with("order_") && c.value == "not-in-chart" {
                continue;
            }
            in_chart += usize::from(c.name.starts_with("order_"));
            ensure(c.pass, || format!("(r={r}, p={p}) {c}"))?;
        }
        for needed in ["split_coefficient", "delta_top_matches_sigma"] {
            ensure(rep.checks.iter().any(|c| c.name == needed), || format!("(r={r}, p={p}) no {needed}"))?;
        }
        lines.push(format!("({r},{p}):{in_chart}/{} loci", 2 * r));
    }
    Ok(lines.join(" "))
}

fn c5_tower_pipeline() -> Outcome {
    let mut out = Vec::new();
    for p in [7u64, 11] {
        let (sigma0, rep) = corollary45_pipeline(2, p, None, PipelineOptions::default()).map_err(|e| e.to_string())?;
        let bottom = rep.levels.last().unwrap();
        ensure(sigma0.nvars() == 4 && bottom.nvars == 4, || format!("p={p}: sigma_0 has {} variables", sigma0.nvars()))?;
        ensure(bottom.order_d1.is_some_and(|o| o >= 1) && bottom.order_d2.is_some_and(|o| o >= 1), || {
            format!("p={p}: orders {:?} {:?}", bottom.order_d1, bottom.order_d2)
        })?;
        match &bottom.split {
            SplitStatus::Computed(s) => ensure(s.splits, || format!("p={p}: sigma_0 does not split"))?,
            SplitStatus::Skipped(why) => return Err(format!("p={p}: split check skipped ({why})")),
        }
        ensure(rep.pass(), || format!("p={p}: pipeline report fails"))?;
        out.push(format!("p={p} orders=({},{})", bottom.order_d1.unwrap(), bottom.order_d2.unwrap()));
    }
    Ok(out.join(" "))
}

fn c6_lift_solvability() -> Outcome {
    let mut out = Vec::new();
    for p in [7u64, 11] {
        let t = build_tower(2, p).map_err(|e| e.to_string())?;
        let space = section_space(&t[0], 2);
        ensure(BigInt::from(space.rank()) == grass_sections_dim(2, 2) && space.rank() == 20, || {
            format!("p={p}: section space rank {}", space.rank())
        })?;
        let res = Restriction::new(&t[1], &t[0]).map_err(|e| e.to_string())?;
        let mut rng = ChaCha8Rng::seed_from_u64(600 + p);
        for i in 0..100 {
            let g = res
                .space()
                .basis
                .iter()
                .fold(Poly::zero(field(p), 4), |acc, b| &acc + &b.scale(rng.gen_range(0..p)));
            let target = res.apply(&g).map_err(|e| e.to_string())?.ok_or("restriction undefined")?;
            let lifted = res.lift(&target).map_err(|e| format!("p={p} target {i}: {e}"))?;
            let back = res.apply(&lifted).map_err(|e| e.to_string())?;
            ensure(back.as_ref() == Some(&target), || format!("p={p} target {i}: nonzero residual"))?;
        }
        out.push(format!("p={p}:100/100"));
    }
    Ok(format!("{} rank=20", out.join(" ")))
}

fn random_poly(rng: &mut ChaCha8Rng, p: u64, n: usize, max_exp: u32, terms: usize) -> Poly {
    let t: Vec<(Vec<u32>, u64)> =
        (0..terms).map(|_| ((0..n).map(|_| rng.gen_range(0..=max_exp)).collect(), rng.gen_range(0..p))).collect();
    Poly::from_terms(field(p), n, t).unwrap()
}

fn c7_divisor_propagation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..1000 {
        let p = [5u64, 7, 11][i % 3];
        let n = rng.gen_range(1..=4);
        let terms = rng.gen_range(1..=6);
        let sigma = random_poly(&mut rng, p, n, 3, terms);
        let divisors: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        ensure(divisor_propagation_check(&sigma, &divisors), || format!("case {i}: p={p} {sigma} {divisors:?}"))?;
    }
    Ok("1000/1000 identities hold".into())
}

fn c8_truncation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut coeffs = 0;
    for i in 0..500 {
        let p = [2u64, 3, 5, 7, 11][i % 5];
        let n = rng.gen_range(1..=3);
        let terms = rng.gen_range(1..=4);
        let f = random_poly(&mut rng, p, n, 3, terms);
        let e = rng.gen_range(0..=p);
        let caps: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=12)).collect();
        let cut = f.pow_truncated(e, &ExpCap::new(caps.clone())).map_err(|x| x.to_string())?;
        // untruncated oracle by repeated multiplication
        let full = (0..e).fold(Poly::one(field(p), n), |acc, _| &acc * &f);
        let mut monos = vec![Vec::new()];
        for &c in &caps {
            monos = monos.into_iter().flat_map(|m: Vec<u32>| (0..=c).map(move |x| [m.clone(), vec![x]].concat())).collect();
        }
        for m in monos {
            let m = Monomial::new(m);
            ensure(cut.coeff(&m).unwrap() == full.coeff(&m).unwrap(), || format!("case {i}: {f}^{e} at {m:?}"))?;
            coeffs += 1;
        }
        ensure(cut.terms().all(|(m, _)| m.exps().iter().zip(&caps).all(|(a, c)| a <= c)), || {
            format!("case {i}: term outside the cap")
        })?;
    }
    Ok(format!("500 powers, {coeffs} coefficients compared"))
}

fn c9_stability_equivalence() -> Outcome {
    let mut generic = [0, 0];
    let omega2 = omega_c0(2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..200 {
        let cfg = random_flag_config(field(5), 2, &mut rng).map_err(|e| e.to_string())?;
        let holds = genericity_check_512(&cfg).holds;
        let rep = rank2_bruteforce(&cfg, &omega2, None).map_err(|e| e.to_string())?;
        ensure(rep.stable == holds, || format!("r=2 case {i}: stable={} generic={holds}", rep.stable))?;
        generic[0] += usize::from(holds);
    }
    let omega3 = omega_c0(3).unwrap();
    for i in 0..200 {
        let cfg = random_flag_config(field(7), 3, &mut rng).map_err(|e| e.to_string())?;
        let holds = genericity_check_512(&cfg).holds;
        let rep = subspace_destabilizer_search(&cfg, &omega3).map_err(|e| e.to_string())?;
        ensure(rep.exhaustive, || "r=3 search over F_7 is not exhaustive".into())?;
        ensure(rep.witness.is_none() == holds, || format!("r=3 case {i}: witness={:?} generic={holds}", rep.witness))?;
        generic[1] += usize::from(holds);
    }
    Ok(format!("r=2/F5 {}/200 generic, r=3/F7 {}/200 generic, all verdicts agree", generic[0], generic[1]))
}

fn random_gl(rng: &mut ChaCha8Rng, f: PrimeField, r: usize) -> Mat {
    loop {
        let g: Mat = (0..r).map(|_| (0..r).map(|_| rng.gen_range(0..f.p())).collect()).collect();
        if rank(f, &g) == r {
            return g;
        }
    }
}

/// Invertible upper-triangular: right multiplication keeps every span of
/// leading columns.
fn random_upper(rng: &mut ChaCha8Rng, f: PrimeField, r: usize) -> Mat {
    (0..r)
        .map(|a| {
            (0..r)
                .map(|c| match a.cmp(&c) {
                    std::cmp::Ordering::Equal => rng.gen_range(1..f.p()),
                    std::cmp::Ordering::Less => rng.gen_range(0..f.p()),
                    std::cmp::Ordering::Greater => 0,
                })
                .collect()
        })
        .collect()
}

fn c10_special_loci() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut found = 0;
    let mut tries = 0;
    let pts = |z| (P1Point::Affine(1), P1Point::Affine(0), P1Point::Infinity, Some(P1Point::Affine(z)));
    while found < 100 {
        tries += 1;
        let r = 2 + found % 2;
        let f = field(11);
        let (y1, z1, z2, z) = pts(2 + (tries % 5) as u64);
        let line: Vec<u64> = (0..r).map(|_| rng.gen_range(0..11)).collect();
        if line.iter().all(|&x| x == 0) {
            continue;
        }
        let (a, b) = (random_gl(&mut rng, f, r), random_gl(&mut rng, f, r));
        let cfg = FlagConfig::new(f, (y1, line.clone()), (z1, a.clone()), (z2, b.clone()), z).map_err(|e| e.to_string())?;
        if !genericity_check_512(&cfg).holds {
            continue;
        }
        let loci = special_loci(&cfg).map_err(|e| e.to_string())?;
        let distinct = (0..r).all(|i| (i + 1..r).all(|j| loci.lines[i] != loci.lines[j]));
        let total = loci.lines.iter().fold(Subspace::zero(r), |acc, l| acc.sum(f, l));
        ensure(loci.lines.iter().all(|l| l.dim() == 1) && distinct && total.dim() == r, || {
            format!("case {found}: lines {:?}", loci.lines)
        })?;
        ensure(loci.hyperplanes.iter().all(|h| h.dim() == r - 1), || format!("case {found}: hyperplane dims"))?;
        let hz = loci.h_z.clone().ok_or("no H_z")?;
        ensure(hz.dim() == r - 1, || format!("case {found}: dim H_z = {}", hz.dim()))?;
        // same subspaces from other adapted bases and another spanning vector
        let c = rng.gen_range(1..11);
        let scaled: Vec<u64> = line.iter().map(|&x| f.mul(x, c)).collect();
        let (ua, ub) = (random_upper(&mut rng, f, r), random_upper(&mut rng, f, r));
        let again = FlagConfig::new(f, (y1, scaled), (z1, mat_mul(f, &a, &ua)), (z2, mat_mul(f, &b, &ub)), z)
            .map_err(|e| e.to_string())?;
        let loci2 = special_loci(&again).map_err(|e| e.to_string())?;
        ensure(loci2.h_z.as_ref() == Some(&hz) && loci2.lines == loci.lines, || {
            format!("case {found}: loci change with the bases")
        })?;
        found += 1;
    }
    Ok(format!("100 generic configurations over F_11 ({tries} drawn)"))
}

fn c11_dimension_identity() -> Outcome {
    for r in 1..=4usize {
        for m in 0..=4u64 {
            ensure(decomposition_identity(r, m), || format!("r={r} m={m}"))?;
        }
    }
    let t = build_tower(2, 7).map_err(|e| e.to_string())?;
    let rank = section_space(&t[0], 2).rank();
    let dim = grass_sections_dim(2, 2);
    ensure(dim == BigInt::from(20) && rank == 20, || format!("grass_sections_dim={dim} rank={rank}"))?;
    Ok("20 identities, grass_sections_dim(2,2)=20=rank".into())
}

fn c12_numeric_reproductions() -> Outcome {
    let types = vec![
        ("y1".to_string(), QuasiParType::new(vec![2, 1]).unwrap()),
        ("z1".to_string(), QuasiParType::full_flag(3)),
        ("z2".to_string(), QuasiParType::full_flag(3)),
    ];
    let omega = canonical_weight(types, 3, 0, 0).unwrap();
    // k = 6, χ = 3; Σ d_i r_i = 3·2 + 2·(2·1 + 2·2) = 18 = kχ
    let l = ell(&omega);
    ensure(l == q(0, 1), || format!("ell = {l}"))?;
    // the argument needs r > 2 or |I'| > 1; the 1/2 floor is the weight sum when I' = {z}
    for r in 2..=5u32 {
        for n_iprime in 1..=3usize {
            let rep = lemma56_check(r, n_iprime);
            let excluded = r == 2 && n_iprime == 1;
            let chain = rep.sigma_1_min >= rep.weight_sum && rep.sigma_r1_min >= rep.weight_sum;
            ensure(chain != excluded, || format!("r={r} |I'|={n_iprime}: minima against the weight sum {rep:?}"))?;
            if n_iprime == 1 {
                ensure(rep.weight_sum == rep.bound, || format!("r={r}: weight sum {:?}", rep.weight_sum))?;
                ensure(rep.holds_symbolic != excluded && rep.holds_concrete != excluded, || {
                    format!("r={r} |I'|=1: {rep:?}")
                })?;
            }
        }
    }
    let r2 = lemma56_check(2, 1);
    let half = frobsplit_core::parweights::Eps::constant(q(1, 2));
    ensure(r2.sigma_1_min == &half - &frobsplit_core::parweights::Eps::eps(), || format!("r=2: {:?}", r2.sigma_1_min))?;
    let pts: Vec<(String, QuasiParType, Vec<u64>)> =
        (1..=3).map(|i| (format!("x{i}"), QuasiParType::new(vec![1, 1]).unwrap(), vec![0, i as u64])).collect();
    let data = ParData::new(2, 0, 2, 4, pts).map_err(|e| e.to_string())?;
    let b = codim_bounds(&data).map_err(|e| e.to_string())?;
    ensure(b.bound1 == q(7, 4) && b.bound2 == q(7, 4), || format!("bound {} != 7/4", b.bound1))?;
    Ok("ell=0, sigma minima >= 1/2+eps for 2<r<=5 with I'={z} (r=2 excluded: 1/2-eps), bound 7/4".into())
}

fn main() {
    let criteria: [(u32, &str, u64, fn() -> Outcome); 12] = [
        (1, "sigma closed forms", 1, c1_sigma_closed_forms),
        (2, "sigma lower bound", 10, c2_sigma_lower_bound),
        (3, "hecke fixed point", 1, c3_hecke_fixed_point),
        (4, "flag-verify at desk scale", 90, c4_flag_verify),
        (5, "tower pipeline", 60, c5_tower_pipeline),
        (6, "lift solvability", 10, c6_lift_solvability),
        (7, "divisor propagation", 10, c7_divisor_propagation),
        (8, "truncation soundness", 10, c8_truncation),
        (9, "stability equivalence", 30, c9_stability_equivalence),
        (10, "special loci", 10, c10_special_loci),
        (11, "dimension identity", 5, c11_dimension_identity),
        (12, "numeric reproductions", 1, c12_numeric_reproductions),
    ];
    let mut failed = 0;
    for (id, name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if took > Duration::from_secs(budget) => Err(format!("{detail}; over the {budget}s budget")),
            other => other,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d.as_str()),
            Err(d) => ("FAIL", d.as_str()),
        };
        failed += usize::from(outcome.is_err());
        println!("criterion {id:>2} {tag} [{:.2}s] {name}: {detail}", took.as_secs_f64());
    }
    println!("acceptance: {}/12 passed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
