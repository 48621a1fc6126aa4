//! Backtracking counter for magic labelings of `P_n`.
//!
//! For a fixed constant `k` the search picks the first vertex `a` and first
//! edge `b`; the second vertex is then forced to `k - a - b`. From there on
//! each step only chooses an unused edge label `e`, and the next vertex is
//! forced to `k - v - e`. Candidate edges are found in one mask operation:
//! `e` is usable iff `e` and `s - e` (with `s = k - v`) are both free and
//! distinct, i.e. `e` lies in `free & reflect(free, s)` minus `s / 2`.
//!
//! Summing the remaining edge weights shows that the vertices still to be
//! placed (all but the last) have a fixed total. That closes the tail of the
//! search: with one, two or three edges left the count is read off masks
//! directly, with four edges left the pinned edge of the three-edge tail
//! filters the candidates, and further up the total is checked against the
//! smallest and largest sums the free labels can make.

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use rayon::prelude::*;

use crate::bounds::k_bounds;
use crate::error::{Error, Result};
use crate::model::{Convention, Label, Labeling, MagicConstant, MAX_PATH_LENGTH};
use crate::report::{CountReport, Family, Mode};

/// Largest `n` for which solutions may be materialized.
pub const MATERIALIZE_LIMIT: u32 = 4;

/// Bit position that label 0 maps to in the reflected mask.
const REFLECT_TOP: i64 = 63;

/// Used labels as a bit set; bit `l` is set iff label `l` is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct LabelSet {
    mask: u64,
}

impl LabelSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contains(self, label: Label) -> bool {
        self.mask & (1u64 << label) != 0
    }

    pub fn insert(&mut self, label: Label) {
        self.mask |= 1u64 << label;
    }

    pub fn len(self) -> u32 {
        self.mask.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.mask == 0
    }

    /// Labels of `1..=max` not yet used.
    pub fn unused(self, max: usize) -> FreeLabels {
        FreeLabels::new(full_mask(max) & !self.mask)
    }
}

fn full_mask(max: usize) -> u64 {
    debug_assert!(max < 64);
    if max == 63 {
        !1
    } else {
        ((1u64 << (max + 1)) - 1) & !1
    }
}

/// Free labels kept twice: directly, and bit-reversed so that bit `63 - l`
/// stands for label `l`. Shifting the reversed copy right by `63 - s` lines
/// up label `s - l` with bit `l`.
#[derive(Debug, Clone, Copy)]
pub struct FreeLabels {
    direct: u64,
    reflected: u64,
}

impl FreeLabels {
    fn new(direct: u64) -> Self {
        Self {
            direct,
            reflected: direct.reverse_bits(),
        }
    }

    #[inline]
    fn remove(&mut self, label: u32) {
        self.direct &= !(1u64 << label);
        self.reflected &= !(1u64 << (REFLECT_TOP as u32 - label));
    }

    /// Bit `l` set iff `sum - l` is in the set.
    #[inline]
    fn partners(&self, sum: i64) -> u64 {
        let shift = REFLECT_TOP - sum;
        if shift >= 0 {
            if shift >= 64 {
                0
            } else {
                self.reflected >> shift
            }
        } else if shift <= -64 {
            0
        } else {
            self.reflected << -shift
        }
    }

    /// Labels `e` such that `e` and `sum - e` are distinct free labels.
    #[inline]
    fn pairs_summing_to(&self, sum: i64) -> u64 {
        if sum < 3 {
            return 0;
        }
        let mut cand = self.direct & self.partners(sum);
        if sum % 2 == 0 && sum < 128 {
            cand &= !(1u64 << (sum / 2));
        }
        cand
    }

    /// Labels `l` such that `l + shift` is in this set.
    #[inline]
    fn offset(&self, shift: i64) -> u64 {
        if shift >= 64 || shift <= -64 {
            0
        } else if shift >= 0 {
            (self.direct >> shift) & !1
        } else {
            (self.direct << -shift) & !1
        }
    }

    /// Labels `l` such that `sum - l` is in this set.
    #[inline]
    fn reflect(&self, sum: i64) -> u64 {
        self.partners(sum) & !1
    }

    #[inline]
    fn contains(&self, label: i64) -> bool {
        (1..64).contains(&label) && self.direct & (1u64 << label) != 0
    }

    pub fn count(&self) -> u32 {
        self.direct.count_ones()
    }

    pub fn sum(&self) -> i64 {
        let mut rest = self.direct;
        let mut sum = 0;
        while rest != 0 {
            sum += i64::from(rest.trailing_zeros());
            rest &= rest - 1;
        }
        sum
    }

    /// Whether `target` lies between the sums of the `count` smallest and the
    /// `count` largest free labels.
    #[inline]
    fn can_sum(&self, target: i64, count: u32) -> bool {
        let (mut lo, mut hi) = (0i64, 0i64);
        let (mut low_bits, mut high_bits) = (self.direct, self.direct);
        for _ in 0..count {
            lo += i64::from(low_bits.trailing_zeros());
            low_bits &= low_bits - 1;
            let top = 63 - high_bits.leading_zeros();
            hi += i64::from(top);
            high_bits &= !(1u64 << top);
        }
        lo <= target && target <= hi
    }
}

/// Bits `1..limit` (labels strictly below `limit`).
#[inline]
fn labels_below(limit: i64) -> u64 {
    if limit <= 1 {
        0
    } else if limit >= 64 {
        !1
    } else {
        ((1u64 << limit) - 1) & !1
    }
}

/// One independent unit of work: a constant plus the first vertex and edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SearchTask {
    pub k: MagicConstant,
    /// Label of `v1`.
    pub a: Label,
    /// Label of `e1`.
    pub b: Label,
}

impl SearchTask {
    /// The forced label of `v2`, if it lies in `1..=max` and differs from `a`, `b`.
    pub fn forced_second_vertex(&self, max: usize) -> Option<Label> {
        let c = i64::from(self.k.0) - i64::from(self.a) - i64::from(self.b);
        (c >= 1 && c <= max as i64 && c != i64::from(self.a) && c != i64::from(self.b))
            .then_some(c as Label)
    }

    fn is_feasible(&self, max: usize) -> bool {
        self.a != self.b
            && (1..=max).contains(&(self.a as usize))
            && (1..=max).contains(&(self.b as usize))
            && self.forced_second_vertex(max).is_some()
    }
}

/// Below this many remaining edges the internal-vertex sum check costs more
/// than it prunes.
const SUM_CHECK_MIN_EDGES: u32 = 5;

struct PathWalker {
    k: i64,
    first: i64,
    canonical: bool,
    /// Labels above `first`: where the last vertex must land when canonical.
    above_first: FreeLabels,
}

impl PathWalker {
    fn new(k: i64, first: i64, canonical: bool) -> Self {
        Self {
            k,
            first,
            canonical,
            above_first: FreeLabels::new(!labels_below(first + 1) & !1),
        }
    }

    /// Labelings completing the path from vertex `v` with `edges_left` edges
    /// to go; `free_sum` is the sum of the free labels.
    fn count(&self, v: i64, free: FreeLabels, free_sum: i64, edges_left: u32) -> u64 {
        let s = self.k - v;
        match edges_left {
            1 => {
                // last vertex is s - e; canonical needs it above the first vertex
                let cand = free.pairs_summing_to(s);
                let kept = if self.canonical {
                    cand & labels_below(s - self.first)
                } else {
                    cand
                };
                u64::from(kept.count_ones())
            }
            2 => self.count_last_two(v, free, free_sum),
            3 => self.count_last_three(v, free, free_sum),
            4 => {
                // after v1 the pinned edge of the three-edge tail is v1 + k - inner
                let inner = 4 * self.k - v - free_sum;
                let mut rest = free.pairs_summing_to(s) & free.offset(self.k - inner);
                let mut total = 0;
                while rest != 0 {
                    let next = i64::from(rest.trailing_zeros());
                    rest &= rest - 1;
                    let mut f = free;
                    f.remove(next as u32);
                    f.remove((s - next) as u32);
                    total += self.count_last_three(next, f, free_sum - s);
                }
                total
            }
            m => {
                if m >= SUM_CHECK_MIN_EDGES {
                    // the m - 1 vertices still to place before the last one sum to this
                    let inner = i64::from(m) * self.k - v - free_sum;
                    if !free.can_sum(inner, m - 1) {
                        return 0;
                    }
                }
                let mut total = 0;
                let mut rest = free.pairs_summing_to(s);
                while rest != 0 {
                    let e = rest.trailing_zeros();
                    rest &= rest - 1;
                    let next = s - i64::from(e);
                    let mut f = free;
                    f.remove(e);
                    f.remove(next as u32);
                    total += self.count(next, f, free_sum - s, m - 1);
                }
                total
            }
        }
    }

    /// Four labels left. The next vertex is pinned to `2k - v - free_sum`
    /// and the final pair may be placed in either order.
    #[inline]
    fn count_last_two(&self, v: i64, free: FreeLabels, free_sum: i64) -> u64 {
        let e = free_sum - self.k;
        let next = self.k - v - e;
        if e == next || !free.contains(e) || !free.contains(next) {
            return 0;
        }
        let mut f = free;
        f.remove(e as u32);
        f.remove(next as u32);
        if self.canonical {
            u64::from((f.direct & self.above_first.direct).count_ones())
        } else {
            2
        }
    }

    /// Six labels left: `v, e1, v1, e2, v2, e3, last`. The two inner vertices
    /// sum to `inner = 3k - v - free_sum`, which pins `e2 = k - inner`. Each
    /// choice of `v1` then fixes `e1 = k - v - v1` and `v2 = inner - v1`, and
    /// the remaining pair fills `e3, last` in either order. Everything is
    /// evaluated over all `v1` at once with masks.
    #[inline]
    fn count_last_three(&self, v: i64, free: FreeLabels, free_sum: i64) -> u64 {
        let s = self.k - v;
        let inner = 3 * self.k - v - free_sum;
        let e2 = self.k - inner;
        if s == inner || !free.contains(e2) {
            return 0;
        }
        let mut f = free;
        f.remove(e2 as u32);
        // v1 free, s - v1 free, inner - v1 free, all distinct
        let cand = f.pairs_summing_to(s) & f.pairs_summing_to(inner);
        if cand == 0 {
            return 0;
        }
        let hits = u64::from(cand.count_ones());
        if !self.canonical {
            return 2 * hits;
        }
        // last vertex is either leftover label; count those above `first`
        let high = self.above_first;
        let high_free = u64::from((f.direct & high.direct).count_ones());
        let taken_high = cand & high.direct;
        let e1_high = cand & high.reflect(s);
        let v2_high = cand & high.reflect(inner);
        hits * high_free
            - u64::from(taken_high.count_ones())
            - u64::from(e1_high.count_ones())
            - u64::from(v2_high.count_ones())
    }

    fn count_task(&self, n: u32, b: Label) -> u64 {
        let max = 2 * n as usize + 1;
        let task = SearchTask {
            k: MagicConstant(self.k as u32),
            a: self.first as Label,
            b,
        };
        if !task.is_feasible(max) {
            return 0;
        }
        let Some(c) = task.forced_second_vertex(max) else {
            return 0;
        };
        if n == 1 {
            return u64::from(!self.canonical || task.a < c);
        }
        let mut used = LabelSet::new();
        for l in [task.a, task.b, c] {
            used.insert(l);
        }
        let free = used.unused(max);
        self.count(i64::from(c), free, free.sum(), n - 1)
    }
}

fn check_length(n: u32) -> Result<()> {
    if n > MAX_PATH_LENGTH {
        return Err(Error::LengthOutOfRange {
            n,
            min: 0,
            max: MAX_PATH_LENGTH,
        });
    }
    Ok(())
}

/// Number of magic labelings of `P_n` beginning `a, b, k - a - b`.
///
/// Infeasible tasks count zero. Under the canonical convention only
/// labelings whose last vertex exceeds `a` are counted.
pub fn count_for_task(n: u32, task: SearchTask, convention: Convention) -> u64 {
    if n == 0 || n > MAX_PATH_LENGTH {
        return 0;
    }
    if task.a == 0 || task.a > 63 {
        return 0;
    }
    PathWalker::new(
        i64::from(task.k.0),
        i64::from(task.a),
        convention == Convention::Canonical,
    )
    .count_task(n, task.b)
}

/// All tasks `(k, a, b)` whose forced `v2 = k - a - b` is a distinct label.
pub fn split_tasks(n: u32, k: MagicConstant) -> Vec<SearchTask> {
    let max = 2 * n as usize + 1;
    let mut tasks = Vec::new();
    for a in 1..=max as Label {
        for b in 1..=max as Label {
            let task = SearchTask { k, a, b };
            if a != b && task.forced_second_vertex(max).is_some() {
                tasks.push(task);
            }
        }
    }
    tasks
}

/// Count for a single magic constant, summed over [`split_tasks`].
pub fn count_for_k(n: u32, k: MagicConstant, convention: Convention) -> Result<u64> {
    check_length(n)?;
    let range = k_bounds(n)?;
    if !range.contains(i64::from(k.0)) {
        return Err(Error::ConstantOutOfRange {
            k: i64::from(k.0),
            range,
        });
    }
    Ok(split_tasks(n, k)
        .into_iter()
        .map(|t| count_for_task(n, t, convention))
        .sum())
}

/// Knobs for the parallel engines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub workers: usize,
    /// Search only `k <= 3n + 3` and mirror counts through `k -> 6n + 6 - k`.
    pub complement_halving: bool,
    /// Report task progress on stderr, at most once per second.
    pub progress: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            workers: default_workers(),
            complement_halving: false,
            progress: false,
        }
    }
}

impl SearchOptions {
    pub fn with_workers(workers: usize) -> Self {
        Self {
            workers,
            ..Self::default()
        }
    }
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism()
        .map(|p| p.get())
        .unwrap_or(1)
}

/// Rate-limited progress line on stderr.
pub(crate) struct Progress {
    label: String,
    total: u64,
    done: AtomicU64,
    last_emit_ms: AtomicU64,
    start: Instant,
    enabled: bool,
}

impl Progress {
    pub(crate) fn new(label: String, total: usize, enabled: bool) -> Self {
        Self {
            label,
            total: total as u64,
            done: AtomicU64::new(0),
            last_emit_ms: AtomicU64::new(0),
            start: Instant::now(),
            enabled,
        }
    }

    pub(crate) fn tick(&self) {
        let done = self.done.fetch_add(1, Ordering::Relaxed) + 1;
        if !self.enabled {
            return;
        }
        let now = self.start.elapsed().as_millis() as u64;
        let last = self.last_emit_ms.load(Ordering::Relaxed);
        if now >= last + 1000
            && self
                .last_emit_ms
                .compare_exchange(last, now, Ordering::Relaxed, Ordering::Relaxed)
                .is_ok()
        {
            eprintln!(
                "{}: {}/{} tasks ({:.1}s)",
                self.label,
                done,
                self.total,
                now as f64 / 1000.0
            );
        }
    }
}

/// Runs `count` over every task on a pool of `workers` threads and sums the
/// results into per-constant slots. Each worker folds into its own vector;
/// vectors are merged by addition.
pub(crate) fn run_tasks<T, F>(
    tasks: &[T],
    slot_of: impl Fn(&T) -> usize + Sync,
    slots: usize,
    workers: usize,
    progress: &Progress,
    count: F,
) -> Result<Vec<u64>>
where
    T: Sync,
    F: Fn(&T) -> u64 + Sync,
{
    if workers == 0 {
        return Err(Error::NoWorkers);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Pool(e.to_string()))?;
    Ok(pool.install(|| {
        tasks
            .par_iter()
            .fold(
                || vec![0u64; slots],
                |mut acc, t| {
                    acc[slot_of(t)] += count(t);
                    progress.tick();
                    acc
                },
            )
            .reduce(
                || vec![0u64; slots],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            )
    }))
}

/// Counts magic labelings of `P_n` with the propagating search.
pub fn count_path_fast(
    n: u32,
    convention: Convention,
    options: SearchOptions,
) -> Result<CountReport> {
    check_length(n)?;
    if options.workers == 0 {
        return Err(Error::NoWorkers);
    }
    let start = Instant::now();
    if n == 0 {
        return Ok(CountReport::trivial_path(
            convention.into(),
            Mode::Fast,
            start.elapsed(),
        ));
    }
    let range = k_bounds(n)?;
    let mirror = 6 * n + 6;
    let searched_max = if options.complement_halving {
        range.k_max.min(i64::from(mirror / 2))
    } else {
        range.k_max
    };
    let tasks: Vec<SearchTask> = (range.k_min..=searched_max)
        .flat_map(|k| split_tasks(n, MagicConstant(k as u32)))
        .collect();
    let progress = Progress::new(format!("path n={n}"), tasks.len(), options.progress);
    let slots = range.k_max as usize + 1;
    let mut per_k = run_tasks(
        &tasks,
        |t| t.k.0 as usize,
        slots,
        options.workers,
        &progress,
        |t| count_for_task(n, *t, convention),
    )?;
    if options.complement_halving {
        for k in range.k_min..i64::from(mirror / 2) {
            per_k[(i64::from(mirror) - k) as usize] = per_k[k as usize];
        }
    }
    Ok(CountReport::new(
        Family::Path,
        n,
        convention.into(),
        Mode::Fast,
        per_k
            .into_iter()
            .enumerate()
            .map(|(k, c)| (k as u32, c)),
        start.elapsed(),
    ))
}

/// Canonical total recomputed as half of the raw total; a cross-check only.
pub fn canonical_total_from_raw(n: u32, options: SearchOptions) -> Result<u64> {
    let raw = count_path_fast(n, Convention::Raw, options)?;
    Ok(if n == 0 { raw.total } else { raw.total / 2 })
}

/// Materializes every magic labeling of `P_n` found by the search, for
/// `n <= MATERIALIZE_LIMIT`. Sorted lexicographically.
pub fn path_solutions(n: u32, convention: Convention) -> Result<Vec<Labeling>> {
    if n > MATERIALIZE_LIMIT {
        return Err(Error::GuardExceeded {
            engine: "solution listing",
            n,
            limit: MATERIALIZE_LIMIT,
        });
    }
    if n == 0 {
        return Ok(vec![Labeling::new(vec![1])?]);
    }
    let max = 2 * n as usize + 1;
    let mut out = Vec::new();
    for k in k_bounds(n)?.iter() {
        for task in split_tasks(n, MagicConstant(k as u32)) {
            let c = task.forced_second_vertex(max).expect("split_tasks yields feasible tasks");
            let mut used = LabelSet::new();
            for l in [task.a, task.b, c] {
                used.insert(l);
            }
            let mut seq = vec![task.a, task.b, c];
            extend_path(k, used.unused(max), n - 1, &mut seq, &mut out);
        }
    }
    if convention == Convention::Canonical {
        out.retain(|s| s[0] < s[s.len() - 1]);
    }
    out.sort();
    out.into_iter().map(Labeling::new).collect()
}

fn extend_path(k: i64, free: FreeLabels, edges_left: u32, seq: &mut Vec<Label>, out: &mut Vec<Vec<Label>>) {
    if edges_left == 0 {
        out.push(seq.clone());
        return;
    }
    let v = i64::from(*seq.last().expect("non-empty"));
    let s = k - v;
    let mut rest = free.pairs_summing_to(s);
    while rest != 0 {
        let e = rest.trailing_zeros();
        rest &= rest - 1;
        let next = s - i64::from(e);
        debug_assert!(free.contains(next));
        let mut f = free;
        f.remove(e);
        f.remove(next as u32);
        seq.push(e as Label);
        seq.push(next as Label);
        extend_path(k, f, edges_left - 1, seq, out);
        seq.truncate(seq.len() - 2);
    }
}
