use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Stable,
    SemiStable,
    NotStable,
    NotSemiStable,
    Inconclusive,
}

impl Status {
    /// Ordering key: positive claims above zero, negative ones below.
    pub fn strength(self) -> i8 {
        match self {
            Status::Stable => 2,
            Status::SemiStable => 1,
            Status::Inconclusive => 0,
            Status::NotStable => -1,
            Status::NotSemiStable => -2,
        }
    }

    pub fn is_positive(self) -> bool {
        self.strength() > 0
    }

    pub fn is_negative(self) -> bool {
        self.strength() < 0
    }

    /// Whether this status logically entails `other`.
    pub fn implies(self, other: Status) -> bool {
        match (self, other) {
            (a, b) if a == b => true,
            (Status::Stable, Status::SemiStable) => true,
            (Status::NotSemiStable, Status::NotStable) => true,
            _ => false,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Stable => "stable",
            Status::SemiStable => "semi-stable",
            Status::NotStable => "not stable",
            Status::NotSemiStable => "not semi-stable",
            Status::Inconclusive => "inconclusive",
        };
        f.write_str(s)
    }
}

/// Where a claim comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimSource {
    Certificate,
    Theorem,
    Literature,
    Heuristic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reason {
    pub criterion: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<String>,
    pub note: String,
    pub source: ClaimSource,
}

impl Reason {
    pub fn theorem(criterion: &str, margin: Option<String>, note: impl Into<String>) -> Self {
        Reason { criterion: criterion.to_string(), margin, note: note.into(), source: ClaimSource::Theorem }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityVerdict {
    pub status: Status,
    pub reasons: Vec<Reason>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub literature: Option<String>,
}

impl StabilityVerdict {
    pub fn new(status: Status, reasons: Vec<Reason>) -> Self {
        StabilityVerdict { status, reasons, literature: None }
    }

    pub fn inconclusive() -> Self {
        Self::new(Status::Inconclusive, Vec::new())
    }
}
