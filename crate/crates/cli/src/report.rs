use moellerlab_greenhyp::CheckReport;
use serde::Serialize;

use crate::config::Suite;

/// Which side of the tolerance a residual must fall on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    AtMost,
    AtLeast,
}

/// One checked identity: what was measured and the statement it tests.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Identity {
    pub identity: String,
    pub claim: String,
    pub residual: f64,
    pub tolerance: f64,
    pub bound: Bound,
    pub pass: bool,
}

impl Identity {
    pub fn at_most(identity: impl Into<String>, claim: &str, residual: f64, tolerance: f64) -> Self {
        Self {
            identity: identity.into(),
            claim: claim.to_owned(),
            residual,
            tolerance,
            bound: Bound::AtMost,
            pass: residual <= tolerance,
        }
    }

    pub fn at_least(identity: impl Into<String>, claim: &str, value: f64, minimum: f64) -> Self {
        Self {
            identity: identity.into(),
            claim: claim.to_owned(),
            residual: value,
            tolerance: minimum,
            bound: Bound::AtLeast,
            pass: value >= minimum,
        }
    }

    /// Exact yes/no outcome, recorded as residual 0 or 1.
    pub fn holds(identity: impl Into<String>, claim: &str, ok: bool) -> Self {
        Self::at_most(identity, claim, if ok { 0.0 } else { 1.0 }, 0.0)
    }

    pub fn from_check(c: CheckReport, claim: &str) -> Self {
        Self::at_most(c.identity, claim, c.residual, c.tolerance)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub pass: bool,
    /// Set when the suite checks a substitute for a property it cannot test.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub proxy_for: Option<String>,
    pub identities: Vec<Identity>,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl SuiteReport {
    pub fn new(suite: Suite) -> Self {
        Self { suite, pass: false, proxy_for: None, identities: Vec::new(), notes: Vec::new(), error: None }
    }

    pub fn push(&mut self, id: Identity) {
        self.identities.push(id);
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn finish(mut self) -> Self {
        self.pass = self.error.is_none() && !self.identities.is_empty() && self.identities.iter().all(|i| i.pass);
        self
    }

    pub fn failed(suite: Suite, error: impl Into<String>) -> Self {
        let mut r = Self::new(suite);
        r.error = Some(error.into());
        r
    }

    pub fn identity(&self, name: &str) -> Option<&Identity> {
        self.identities.iter().find(|i| i.identity == name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub scenario: String,
    pub seed: u64,
    pub pass: bool,
    pub suites: Vec<SuiteReport>,
}

impl RunReport {
    pub fn suite(&self, s: Suite) -> Option<&SuiteReport> {
        self.suites.iter().find(|r| r.suite == s)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
