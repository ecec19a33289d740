//! Named pass/fail checks shared by the verification pipelines.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub value: String,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, value: impl ToString, pass: bool) -> Self {
        Check { name: name.into(), value: value.to_string(), pass }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.name, self.value, if self.pass { "pass" } else { "FAIL" })
    }
}

pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}
