//! Read-only table of known (semi-)stability results for small `(n, d)`.
//!
//! Entries are advisory: they are reported with source `literature` and never
//! override a verified certificate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::verdict::{ClaimSource, Reason, StabilityVerdict, Status};

const BUILTIN: &str = include_str!("../data/literature-v1.json");

pub const TABLE_VERSION: &str = "literature-v1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiteratureEntry {
    pub n: usize,
    pub d: u32,
    pub class: String,
    pub status: Status,
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LiteratureTable {
    entries: Vec<LiteratureEntry>,
}

impl LiteratureTable {
    pub fn builtin() -> Self {
        Self::from_json(BUILTIN).expect("bundled literature table parses")
    }

    /// Parses a JSON list of `{n, d, class, status, source}`.
    ///
    /// Only positive statuses are accepted, and a `(n, d, class)` key may
    /// appear once.
    pub fn from_json(text: &str) -> Result<Self> {
        let entries: Vec<LiteratureEntry> =
            serde_json::from_str(text).map_err(|e| Error::Malformed(format!("literature table: {e}")))?;
        for (i, e) in entries.iter().enumerate() {
            if !e.status.is_positive() {
                return Err(Error::Malformed(format!("entry {i}: status {} is not a positive claim", e.status)));
            }
            if e.class.trim().is_empty() {
                return Err(Error::Malformed(format!("entry {i}: empty class")));
            }
            if entries[..i].iter().any(|o| o.n == e.n && o.d == e.d && o.class.eq_ignore_ascii_case(&e.class)) {
                return Err(Error::Malformed(format!("entry {i}: duplicate ({}, {}, {})", e.n, e.d, e.class)));
            }
        }
        Ok(LiteratureTable { entries })
    }

    pub fn entries(&self) -> &[LiteratureEntry] {
        &self.entries
    }

    /// Class tags compare case-insensitively (`A1` = `a1`).
    pub fn lookup(&self, n: usize, d: u32, class: &str) -> Option<&LiteratureEntry> {
        let class = class.trim();
        self.entries.iter().find(|e| e.n == n && e.d == d && e.class.eq_ignore_ascii_case(class))
    }

    pub fn verdict(&self, n: usize, d: u32, class: &str) -> Option<StabilityVerdict> {
        self.lookup(n, d, class).map(|e| StabilityVerdict {
            status: e.status,
            reasons: vec![Reason {
                criterion: "literature".into(),
                margin: None,
                note: format!("{} singularities", e.class),
                source: ClaimSource::Literature,
            }],
            literature: Some(e.source.clone()),
        })
    }
}

/// Lookup in the bundled table.
pub fn literature_lookup(n: usize, d: u32, class: &str) -> Option<StabilityVerdict> {
    LiteratureTable::builtin().verdict(n, d, class)
}
