//! Pass/fail reports with counterexample witnesses, shared by all the
//! law-checking batteries.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawCheck {
    pub law: String,
    pub pass: bool,
    pub witness: Option<String>,
}

impl LawCheck {
    pub fn pass(law: &str) -> LawCheck {
        LawCheck {
            law: law.to_string(),
            pass: true,
            witness: None,
        }
    }

    pub fn fail(law: &str, witness: String) -> LawCheck {
        LawCheck {
            law: law.to_string(),
            pass: false,
            witness: Some(witness),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawReport {
    pub title: String,
    pub checks: Vec<LawCheck>,
}

impl LawReport {
    pub fn new(title: String) -> LawReport {
        LawReport {
            title,
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: LawCheck) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: LawReport) {
        self.checks.extend(other.checks);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &LawCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        for c in &self.checks {
            match &c.witness {
                Some(w) => writeln!(f, "  [{}] {} :: {}", if c.pass { "ok" } else { "FAIL" }, c.law, w)?,
                None => writeln!(f, "  [{}] {}", if c.pass { "ok" } else { "FAIL" }, c.law)?,
            }
        }
        Ok(())
    }
}
