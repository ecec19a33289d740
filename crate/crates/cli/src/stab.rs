use crate::{read_input, usage, CliError, Report, StabArgs};
use frobsplit_core::gfpoly::PrimeField;
use frobsplit_core::linalg::Subspace;
use frobsplit_core::parweights::fmt_q;
use frobsplit_core::stab01::{
    genericity_check_512, omega_c0, parse_flag_config, random_flag_config, rank2_bruteforce, special_loci,
    subspace_destabilizer_search, FlagConfig,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

fn basis(s: &Subspace) -> Value {
    json!(s.basis())
}

/// Verdict of the stability oracle next to the genericity condition; the
/// two should agree.
fn examine(cfg: &FlagConfig, d_max: Option<u64>) -> Result<(Map<String, Value>, bool), CliError> {
    let gen = genericity_check_512(cfg);
    let omega = omega_c0(cfg.r()).map_err(usage)?;
    let mut obj = Map::new();
    obj.insert("r".into(), json!(cfg.r()));
    obj.insert("p".into(), json!(cfg.field().p()));
    obj.insert("generic".into(), json!(gen.holds));
    let failures: Vec<String> = gen.failures.iter().map(ToString::to_string).collect();
    obj.insert("failures".into(), json!(failures));
    let stable = if cfg.r() == 2 {
        let rep = rank2_bruteforce(cfg, &omega, d_max).map_err(usage)?;
        obj.insert("oracle".into(), json!("rank2-bruteforce"));
        obj.insert("exhaustive".into(), json!(true));
        obj.insert("examined".into(), json!(rep.examined));
        obj.insert("max_excess".into(), json!(fmt_q(&rep.max_excess)));
        obj.insert("stable".into(), json!(rep.stable));
        obj.insert("semistable".into(), json!(rep.semistable));
        let witness = rep.witness.map(|w| json!({"d": w.d, "f": w.f, "g": w.g}));
        obj.insert("witness".into(), json!(witness));
        rep.stable
    } else {
        let rep = subspace_destabilizer_search(cfg, &omega).map_err(usage)?;
        obj.insert("oracle".into(), json!("subspace-search"));
        obj.insert("exhaustive".into(), json!(rep.exhaustive));
        obj.insert("examined".into(), json!(rep.examined));
        obj.insert("max_excess".into(), json!(fmt_q(&rep.max_excess)));
        obj.insert("stable".into(), json!(rep.stable));
        obj.insert("semistable".into(), json!(rep.semistable));
        obj.insert("witness".into(), json!(rep.witness.as_ref().map(basis)));
        rep.stable
    };
    let agree = stable == gen.holds;
    obj.insert("agree".into(), json!(agree));
    if gen.holds {
        let loci = special_loci(cfg).map_err(usage)?;
        let lines: Vec<Value> = loci.lines.iter().map(basis).collect();
        let hyper: Vec<Value> = loci.hyperplanes.iter().map(basis).collect();
        obj.insert("lines".into(), json!(lines));
        obj.insert("hyperplanes".into(), json!(hyper));
        obj.insert("w_prime".into(), basis(&loci.w_prime));
        obj.insert("h_z".into(), json!(loci.h_z.as_ref().map(basis)));
    }
    Ok((obj, agree))
}

pub fn run(a: &StabArgs, seed: u64) -> Result<Report, CliError> {
    let mut out = String::new();
    let mut pass = true;
    let mut emit = |obj: Map<String, Value>, agree: bool| {
        out.push_str(&Value::Object(obj).to_string());
        out.push('\n');
        pass &= agree;
    };
    match (&a.config, a.random) {
        (Some(path), _) => {
            let cfg = parse_flag_config(&read_input(path)?).map_err(usage)?;
            let (obj, agree) = examine(&cfg, a.d_max)?;
            emit(obj, agree);
        }
        (None, Some(n)) => {
            let (r, p) = (a.r.unwrap_or(2), a.p.unwrap_or(5));
            let field = PrimeField::new(p).map_err(usage)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for i in 0..n {
                let cfg = random_flag_config(field, r, &mut rng).map_err(usage)?;
                let (body, agree) = examine(&cfg, a.d_max)?;
                let mut obj = Map::new();
                obj.insert("config".into(), json!(i));
                obj.insert("seed".into(), json!(seed));
                obj.extend(body);
                emit(obj, agree);
            }
        }
        (None, None) => return Err(usage("need --config or --random")),
    }
    Ok(Report::new(out, pass))
}
