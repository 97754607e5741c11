//! Named verification outcomes with residual listings.

use serde::Serialize;

/// Residuals listed per check are capped; the count is always exact.
pub const MAX_LISTED: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Residual {
    pub at: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub nonzero: usize,
    pub residuals: Vec<Residual>,
}

impl Check {
    pub fn from_residuals(name: impl Into<String>, residuals: impl IntoIterator<Item = (String, String)>) -> Self {
        let mut listed = Vec::new();
        let mut nonzero = 0;
        for (at, value) in residuals {
            nonzero += 1;
            if listed.len() < MAX_LISTED {
                listed.push(Residual { at, value });
            }
        }
        Self { name: name.into(), pass: nonzero == 0, nonzero, residuals: listed }
    }

    pub fn ok(name: impl Into<String>) -> Self {
        Self::from_residuals(name, std::iter::empty())
    }

    pub fn flag(name: impl Into<String>, pass: bool, at: impl Into<String>, value: impl Into<String>) -> Self {
        if pass {
            Self::ok(name)
        } else {
            Self::from_residuals(name, [(at.into(), value.into())])
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Checks(pub Vec<Check>);

impl Checks {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, c: Check) {
        self.0.push(c);
    }

    pub fn extend(&mut self, other: Checks) {
        self.0.extend(other.0);
    }

    pub fn pass(&self) -> bool {
        self.0.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.0.iter().find(|c| !c.pass)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Check> {
        self.0.iter()
    }

    /// Prefix every check name, e.g. to tag the two sides of an equivalence.
    pub fn prefixed(mut self, p: &str) -> Self {
        for c in &mut self.0 {
            c.name = format!("{p}: {}", c.name);
        }
        self
    }
}
