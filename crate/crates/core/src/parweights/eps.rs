use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// `c0 + c1·ε` for a formal positive infinitesimal `ε`, ordered
/// lexicographically (constant term first).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Eps {
    pub c0: BigRational,
    pub c1: BigRational,
}

impl Eps {
    pub fn new(c0: BigRational, c1: BigRational) -> Self {
        Eps { c0, c1 }
    }

    pub fn constant(c0: BigRational) -> Self {
        Eps { c0, c1: BigRational::zero() }
    }

    pub fn zero() -> Self {
        Eps::constant(BigRational::zero())
    }

    /// The infinitesimal itself.
    pub fn eps() -> Self {
        Eps {
            c0: BigRational::zero(),
            c1: BigRational::from_integer(1.into()),
        }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Eps { c0: &self.c0 * q, c1: &self.c1 * q }
    }

    /// Value at a concrete `ε = t`.
    pub fn at(&self, t: &BigRational) -> BigRational {
        &self.c0 + &self.c1 * t
    }
}

impl Ord for Eps {
    fn cmp(&self, other: &Self) -> Ordering {
        self.c0.cmp(&other.c0).then_with(|| self.c1.cmp(&other.c1))
    }
}

impl PartialOrd for Eps {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Eps {
    type Output = Eps;
    fn add(self, o: &Eps) -> Eps {
        Eps { c0: &self.c0 + &o.c0, c1: &self.c1 + &o.c1 }
    }
}

impl Sub for &Eps {
    type Output = Eps;
    fn sub(self, o: &Eps) -> Eps {
        Eps { c0: &self.c0 - &o.c0, c1: &self.c1 - &o.c1 }
    }
}

impl Mul<&BigRational> for &Eps {
    type Output = Eps;
    fn mul(self, q: &BigRational) -> Eps {
        self.scale(q)
    }
}

impl Neg for &Eps {
    type Output = Eps;
    fn neg(self) -> Eps {
        Eps { c0: -&self.c0, c1: -&self.c1 }
    }
}

impl fmt::Display for Eps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::fmt_q(&self.c0))?;
        if !self.c1.is_zero() {
            let sign = if self.c1.is_negative() { '-' } else { '+' };
            write!(f, " {sign} {}*eps", super::fmt_q(&self.c1.abs()))?;
        }
        Ok(())
    }
}
