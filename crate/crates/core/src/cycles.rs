//! Magic labelings of the cycle `C_n`, and the path-versus-cycle comparison.
//!
//! Cycle labelings use labels `1..=2n` over the interleaved sequence
//! `v1, e1, ..., v_n, e_n`, where the last edge `e_n` joins `v_n` back to
//! `v1`. The search mirrors the path engine; the closing edge label is forced
//! to `k - v_n - v1` and must be the one label left over.

use std::time::Instant;

use serde::Serialize;

use crate::bounds::cycle_k_bounds;
use crate::error::{Error, Result};
use crate::model::{Convention, Label, MagicConstant, MAX_PATH_LENGTH};
use crate::oracle::CycleConvention;
use crate::report::{CountReport, Family, Mode};
use crate::search::{count_path_fast, run_tasks, LabelSet, Progress, SearchOptions, SearchTask};

pub const MATERIALIZE_LIMIT: u32 = 4;

fn check_length(n: u32) -> Result<()> {
    if !(3..=MAX_PATH_LENGTH).contains(&n) {
        return Err(Error::LengthOutOfRange {
            n,
            min: 3,
            max: MAX_PATH_LENGTH,
        });
    }
    Ok(())
}

fn forced(k: i64, a: Label, b: Label, max: usize) -> Option<Label> {
    let c = k - i64::from(a) - i64::from(b);
    (c >= 1 && c <= max as i64 && c != i64::from(a) && c != i64::from(b)).then_some(c as Label)
}

/// Every `(k, a, b)` whose forced `v2` is a distinct label in `1..=2n`.
pub fn split_cycle_tasks(n: u32, k: MagicConstant) -> Vec<SearchTask> {
    let max = 2 * n as usize;
    let mut tasks = Vec::new();
    for a in 1..=max as Label {
        for b in (1..=max as Label).filter(|&b| b != a) {
            if forced(i64::from(k.0), a, b, max).is_some() {
                tasks.push(SearchTask { k, a, b });
            }
        }
    }
    tasks
}

/// Walks vertices `v3..v_n`, then checks the closing edge.
#[allow(clippy::too_many_arguments)]
fn walk(
    k: i64,
    first: i64,
    v: i64,
    used: LabelSet,
    max: usize,
    vertices_left: u32,
    seq: &mut Vec<Label>,
    visit: &mut dyn FnMut(&[Label]),
) {
    if vertices_left == 0 {
        let closing = k - v - first;
        if (1..=max as i64).contains(&closing) && !used.contains(closing as Label) {
            seq.push(closing as Label);
            visit(seq);
            seq.pop();
        }
        return;
    }
    let s = k - v;
    for e in 1..=max as i64 {
        let next = s - e;
        if next == e || !(1..=max as i64).contains(&next) {
            continue;
        }
        let (e8, n8) = (e as Label, next as Label);
        if used.contains(e8) || used.contains(n8) {
            continue;
        }
        let mut u = used;
        u.insert(e8);
        u.insert(n8);
        seq.push(e8);
        seq.push(n8);
        walk(k, first, next, u, max, vertices_left - 1, seq, visit);
        seq.truncate(seq.len() - 2);
    }
}

/// Number of magic cycle labelings beginning `a, b, k - a - b`.
pub fn count_cycle_task(n: u32, task: SearchTask) -> u64 {
    if check_length(n).is_err() {
        return 0;
    }
    let max = 2 * n as usize;
    let (a, b) = (task.a, task.b);
    if a == b || !(1..=max).contains(&(a as usize)) || !(1..=max).contains(&(b as usize)) {
        return 0;
    }
    let Some(c) = forced(i64::from(task.k.0), a, b, max) else {
        return 0;
    };
    let mut used = LabelSet::new();
    for l in [a, b, c] {
        used.insert(l);
    }
    let mut count = 0u64;
    let mut seq = vec![a, b, c];
    walk(
        i64::from(task.k.0),
        i64::from(a),
        i64::from(c),
        used,
        max,
        n - 2,
        &mut seq,
        &mut |_| count += 1,
    );
    count
}

/// Counts magic labelings of `C_n`. The dihedral count divides each raw
/// per-constant count by `2n`: distinct labels mean no labeling is fixed by
/// a non-trivial rotation or reflection.
pub fn count_cycle_fast(
    n: u32,
    convention: CycleConvention,
    options: SearchOptions,
) -> Result<CountReport> {
    check_length(n)?;
    let start = Instant::now();
    let range = cycle_k_bounds(n)?;
    let tasks: Vec<SearchTask> = range
        .iter()
        .flat_map(|k| split_cycle_tasks(n, MagicConstant(k as u32)))
        .collect();
    let progress = Progress::new(format!("cycle n={n}"), tasks.len(), options.progress);
    let per_k = run_tasks(
        &tasks,
        |t| t.k.0 as usize,
        range.k_max as usize + 1,
        options.workers,
        &progress,
        |t| count_cycle_task(n, *t),
    )?;
    let orbit = 2 * u64::from(n);
    let per_k = per_k.into_iter().enumerate().map(|(k, c)| {
        let c = match convention {
            CycleConvention::Raw => c,
            CycleConvention::Dihedral => {
                debug_assert_eq!(c % orbit, 0);
                c / orbit
            }
        };
        (k as u32, c)
    });
    Ok(CountReport::new(
        Family::Cycle,
        n,
        convention.into(),
        Mode::Fast,
        per_k,
        start.elapsed(),
    ))
}

/// Every raw magic cycle labeling, sorted, for `n <= MATERIALIZE_LIMIT`.
pub fn cycle_solutions(n: u32) -> Result<Vec<Vec<Label>>> {
    check_length(n)?;
    if n > MATERIALIZE_LIMIT {
        return Err(Error::GuardExceeded {
            engine: "solution listing",
            n,
            limit: MATERIALIZE_LIMIT,
        });
    }
    let max = 2 * n as usize;
    let mut out = Vec::new();
    for k in cycle_k_bounds(n)?.iter() {
        for task in split_cycle_tasks(n, MagicConstant(k as u32)) {
            let c = forced(k, task.a, task.b, max).expect("feasible task");
            let mut used = LabelSet::new();
            for l in [task.a, task.b, c] {
                used.insert(l);
            }
            let mut seq = vec![task.a, task.b, c];
            walk(
                k,
                i64::from(task.a),
                i64::from(c),
                used,
                max,
                n - 2,
                &mut seq,
                &mut |s| out.push(s.to_vec()),
            );
        }
    }
    out.sort();
    Ok(out)
}

/// Path and cycle counts for the same number of edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub n: u32,
    pub path_count: u64,
    pub cycle_count: u64,
    /// `path_count >= cycle_count`.
    pub holds: bool,
    /// `path_count > cycle_count`.
    pub strict: bool,
    pub path_canonical: u64,
    pub cycle_dihedral: u64,
    pub reduced_holds: bool,
    pub reduced_strict: bool,
}

/// Compares `P_n` against `C_n`: raw against raw first, then canonical paths
/// against dihedral cycle orbits. Observations only; nothing is asserted.
pub fn check_path_cycle_bound(n: u32, options: SearchOptions) -> Result<BoundCheck> {
    check_length(n)?;
    let path_raw = count_path_fast(n, Convention::Raw, options)?.total;
    let path_canonical = count_path_fast(n, Convention::Canonical, options)?.total;
    let cycle_raw = count_cycle_fast(n, CycleConvention::Raw, options)?.total;
    let cycle_dihedral = count_cycle_fast(n, CycleConvention::Dihedral, options)?.total;
    Ok(BoundCheck {
        n,
        path_count: path_raw,
        cycle_count: cycle_raw,
        holds: path_raw >= cycle_raw,
        strict: path_raw > cycle_raw,
        path_canonical,
        cycle_dihedral,
        reduced_holds: path_canonical >= cycle_dihedral,
        reduced_strict: path_canonical > cycle_dihedral,
    })
}
