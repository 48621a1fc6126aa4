//! Regression sweep: the propagating search against the exhaustive oracle.

use std::fmt;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::model::Convention;
use crate::oracle::{path_tally, Guard};
use crate::report::{CountReport, Divergence};
use crate::search::{count_path_fast, SearchOptions};

/// Largest `n` swept without lifting the guard.
pub const VERIFY_GUARD: u32 = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseOutcome {
    pub n: u32,
    pub convention: Convention,
    pub fast_total: u64,
    pub oracle_total: u64,
    pub divergence: Option<Divergence>,
}

impl CaseOutcome {
    pub fn passed(&self) -> bool {
        self.divergence.is_none()
    }
}

impl fmt::Display for CaseOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.divergence {
            None => write!(
                f,
                "PASS n={} {}: {}",
                self.n, self.convention, self.fast_total
            ),
            Some(d) => write!(
                f,
                "FAIL n={} {}: fast vs oracle differ at {}",
                self.n, self.convention, d
            ),
        }
    }
}

/// Compares a fast report against an oracle report for the same instance.
pub fn compare(convention: Convention, fast: &CountReport, oracle: &CountReport) -> CaseOutcome {
    CaseOutcome {
        n: fast.n,
        convention,
        fast_total: fast.total,
        oracle_total: oracle.total,
        divergence: fast.divergence(oracle),
    }
}

/// Runs both engines for `n = 0..=max_n` under both conventions.
/// `on_case` sees each outcome as soon as it is known.
pub fn verify_sweep(
    max_n: u32,
    options: SearchOptions,
    guard: Guard,
    mut on_case: impl FnMut(&CaseOutcome),
) -> Result<Vec<CaseOutcome>> {
    if guard == Guard::Enforced && max_n > VERIFY_GUARD {
        return Err(Error::GuardExceeded {
            engine: "verification sweep",
            n: max_n,
            limit: VERIFY_GUARD,
        });
    }
    let mut outcomes = Vec::new();
    for n in 0..=max_n {
        let start = Instant::now();
        let tally = path_tally(n, guard)?;
        let elapsed = start.elapsed();
        for convention in Convention::ALL {
            let fast = count_path_fast(n, convention, options)?;
            let outcome = compare(convention, &fast, &tally.report(convention, elapsed));
            on_case(&outcome);
            outcomes.push(outcome);
        }
    }
    Ok(outcomes)
}
