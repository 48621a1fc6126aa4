use std::collections::BTreeMap;
use std::fmt;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::model::Convention;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Path,
    Cycle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Bruteforce,
    Fast,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Bruteforce => "bruteforce",
            Mode::Fast => "fast",
        }
    }
}

/// How symmetric copies of a labeling are collapsed in a count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reduction {
    /// Path labelings up to reversal.
    Canonical,
    /// No reduction.
    Raw,
    /// Cycle labelings up to rotation and reflection.
    Dihedral,
}

impl Reduction {
    pub fn as_str(self) -> &'static str {
        match self {
            Reduction::Canonical => "canonical",
            Reduction::Raw => "raw",
            Reduction::Dihedral => "dihedral",
        }
    }
}

impl fmt::Display for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl From<Convention> for Reduction {
    fn from(c: Convention) -> Self {
        match c {
            Convention::Canonical => Reduction::Canonical,
            Convention::Raw => Reduction::Raw,
        }
    }
}

/// Per-constant solution counts for one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountReport {
    pub family: Family,
    pub n: u32,
    pub convention: Reduction,
    pub mode: Mode,
    pub per_k: BTreeMap<u32, u64>,
    pub total: u64,
    pub elapsed: Duration,
}

impl CountReport {
    /// Builds a report, dropping zero entries and deriving the total.
    pub fn new(
        family: Family,
        n: u32,
        convention: Reduction,
        mode: Mode,
        per_k: impl IntoIterator<Item = (u32, u64)>,
        elapsed: Duration,
    ) -> Self {
        let per_k: BTreeMap<u32, u64> = per_k.into_iter().filter(|&(_, c)| c > 0).collect();
        let total = per_k.values().sum();
        Self {
            family,
            n,
            convention,
            mode,
            per_k,
            total,
            elapsed,
        }
    }

    /// The single labeling of a one-vertex path.
    pub fn trivial_path(convention: Reduction, mode: Mode, elapsed: Duration) -> Self {
        Self {
            family: Family::Path,
            n: 0,
            convention,
            mode,
            per_k: BTreeMap::new(),
            total: 1,
            elapsed,
        }
    }

    pub fn count(&self, k: u32) -> u64 {
        self.per_k.get(&k).copied().unwrap_or(0)
    }

    /// Compares counts only, ignoring mode and timing.
    pub fn divergence(&self, other: &CountReport) -> Option<Divergence> {
        if self.total != other.total {
            return Some(Divergence {
                n: self.n,
                k: None,
                left: self.total,
                right: other.total,
            });
        }
        let keys: std::collections::BTreeSet<u32> =
            self.per_k.keys().chain(other.per_k.keys()).copied().collect();
        keys.into_iter().find_map(|k| {
            let (left, right) = (self.count(k), other.count(k));
            (left != right).then_some(Divergence {
                n: self.n,
                k: Some(k),
                left,
                right,
            })
        })
    }
}

/// First point where two reports disagree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Divergence {
    pub n: u32,
    /// `None` when the totals differ.
    pub k: Option<u32>,
    pub left: u64,
    pub right: u64,
}

impl fmt::Display for Divergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.k {
            Some(k) => write!(f, "n={} k={}: {} vs {}", self.n, k, self.left, self.right),
            None => write!(f, "n={} total: {} vs {}", self.n, self.left, self.right),
        }
    }
}
