//! Structured pass/fail results.
//!
//! Every validator and scenario in this crate reports through [`Report`]:
//! a list of named sub-checks, each stating the claim it verified and, on
//! failure, a witness describing the counterexample.

/// A single verified claim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    /// Short machine-friendly name, e.g. `selector-fixes-class`.
    pub name: String,
    /// The statement that was checked, written as a formula or equation.
    pub claim: String,
    pub pass: bool,
    /// Counterexample payload on failure; occasionally extra detail on success.
    pub witness: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>, claim: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            claim: claim.into(),
            pass: true,
            witness: None,
        }
    }

    pub fn fail(
        name: impl Into<String>,
        claim: impl Into<String>,
        witness: impl Into<String>,
    ) -> Self {
        Check {
            name: name.into(),
            claim: claim.into(),
            pass: false,
            witness: Some(witness.into()),
        }
    }

    pub fn from_bool(
        name: impl Into<String>,
        claim: impl Into<String>,
        pass: bool,
        witness: impl Into<String>,
    ) -> Self {
        if pass {
            Check::pass(name, claim)
        } else {
            Check::fail(name, claim, witness)
        }
    }
}

/// Outcome of a validation or scenario run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Report { checks: Vec::new() }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn merge(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }
}

impl std::fmt::Display for Report {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for c in &self.checks {
            let status = if c.pass { "PASS" } else { "FAIL" };
            write!(f, "{status} {}: {}", c.name, c.claim)?;
            if let Some(w) = &c.witness {
                write!(f, " [{w}]")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
