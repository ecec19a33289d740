//! Inputs shared by the benchmarks.

use frobsplit_core::gfpoly::{parse_poly, Poly, PrimeField};

/// `(x1 + … + xn + 1)·x1⋯xn` over `F_p`, a section whose split
/// coefficient is nonzero.
pub fn shifted_product(p: u64, n: usize) -> Poly {
    let field = PrimeField::new(p).expect("prime modulus");
    let mut terms: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    terms.push("1".into());
    let sum = parse_poly(field, n, &terms.join(" + ")).expect("linear form parses");
    let mono: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let prod = parse_poly(field, n, &mono.join("*")).expect("monomial parses");
    &sum * &prod
}
