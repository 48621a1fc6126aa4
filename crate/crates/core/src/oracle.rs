//! Exhaustive reference enumerators.
//!
//! Every permutation of the label set is generated and tested edge by edge.
//! Nothing is pruned: the only shortcut is stopping the weight check at the
//! first mismatching edge of a permutation. These counters are slow on
//! purpose and serve as ground truth for the search engines.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{Convention, Label, Labeling};
use crate::report::{CountReport, Family, Mode, Reduction};

/// Largest path length the oracle accepts while guarded: `15!` permutations.
pub const PATH_GUARD: u32 = 7;
/// Largest cycle length the oracle accepts while guarded: `10!` permutations.
pub const CYCLE_GUARD: u32 = 5;
/// Hard ceiling even with the guard lifted; labels must fit the 64-bit masks.
const HARD_LIMIT: u32 = 31;

/// Whether the runtime guards on `n` apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Guard {
    #[default]
    Enforced,
    Lifted,
}

/// Calls `visit` once for every permutation of `items[start..]`, leaving
/// `items[..start]` untouched. Heap's algorithm, iterative form.
pub fn for_each_permutation(items: &mut [Label], start: usize, mut visit: impl FnMut(&[Label])) {
    let m = items.len().saturating_sub(start);
    visit(items);
    if m < 2 {
        return;
    }
    let mut c = vec![0usize; m];
    let mut i = 1;
    while i < m {
        if c[i] < i {
            let j = if i % 2 == 0 { 0 } else { c[i] };
            items.swap(start + j, start + i);
            visit(items);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Magic constant of a path sequence, or `None` if some edge disagrees.
/// A single vertex yields `Some(0)`.
#[inline]
fn path_weight(seq: &[Label]) -> Option<u32> {
    if seq.len() < 3 {
        return Some(0);
    }
    let k = u32::from(seq[0]) + u32::from(seq[1]) + u32::from(seq[2]);
    let mut i = 2;
    while i + 2 < seq.len() {
        if u32::from(seq[i]) + u32::from(seq[i + 1]) + u32::from(seq[i + 2]) != k {
            return None;
        }
        i += 2;
    }
    Some(k)
}

/// Magic constant of an interleaved cycle sequence `v1, e1, ..., v_n, e_n`.
#[inline]
fn cycle_weight(seq: &[Label]) -> Option<u32> {
    let len = seq.len();
    let k = u32::from(seq[0]) + u32::from(seq[1]) + u32::from(seq[2]);
    let mut i = 2;
    while i < len {
        let w = u32::from(seq[i]) + u32::from(seq[i + 1]) + u32::from(seq[(i + 2) % len]);
        if w != k {
            return None;
        }
        i += 2;
    }
    Some(k)
}

/// Raw and reversal-reduced counts of magic path labelings, indexed by `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathTally {
    pub n: u32,
    pub raw: BTreeMap<u32, u64>,
    pub canonical: BTreeMap<u32, u64>,
}

impl PathTally {
    pub fn report(&self, convention: Convention, elapsed: std::time::Duration) -> CountReport {
        if self.n == 0 {
            return CountReport::trivial_path(convention.into(), Mode::Bruteforce, elapsed);
        }
        let per_k = match convention {
            Convention::Canonical => &self.canonical,
            Convention::Raw => &self.raw,
        };
        CountReport::new(
            Family::Path,
            self.n,
            convention.into(),
            Mode::Bruteforce,
            per_k.iter().map(|(&k, &c)| (k, c)),
            elapsed,
        )
    }
}

/// Rejects path lengths the oracle will not enumerate under `guard`.
pub fn check_path_guard(n: u32, guard: Guard) -> Result<()> {
    if n > HARD_LIMIT {
        return Err(Error::LengthOutOfRange {
            n,
            min: 0,
            max: HARD_LIMIT,
        });
    }
    if guard == Guard::Enforced && n > PATH_GUARD {
        return Err(Error::GuardExceeded {
            engine: "brute-force path oracle",
            n,
            limit: PATH_GUARD,
        });
    }
    Ok(())
}

fn add_into(mut acc: Vec<u64>, other: Vec<u64>) -> Vec<u64> {
    for (a, b) in acc.iter_mut().zip(other) {
        *a += b;
    }
    acc
}

fn to_map(counts: &[u64]) -> BTreeMap<u32, u64> {
    counts
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c > 0)
        .map(|(k, &c)| (k as u32, c))
        .collect()
}

/// Runs every permutation of `1..=2n+1` once and tallies both conventions.
///
/// Work is split by the label at the first position; blocks are merged by
/// addition, so the result does not depend on scheduling.
pub fn path_tally(n: u32, guard: Guard) -> Result<PathTally> {
    check_path_guard(n, guard)?;
    if n == 0 {
        let one = BTreeMap::from([(0, 1)]);
        return Ok(PathTally {
            n,
            raw: one.clone(),
            canonical: one,
        });
    }
    let len = 2 * n as usize + 1;
    let slots = 3 * len + 1;
    let (raw, canonical) = (1..=len as Label)
        .into_par_iter()
        .map(|first| {
            let mut raw = vec![0u64; slots];
            let mut canonical = vec![0u64; slots];
            let mut seq: Vec<Label> = std::iter::once(first)
                .chain((1..=len as Label).filter(|&l| l != first))
                .collect();
            for_each_permutation(&mut seq, 1, |p| {
                if let Some(k) = path_weight(p) {
                    raw[k as usize] += 1;
                    if p[0] < p[len - 1] {
                        canonical[k as usize] += 1;
                    }
                }
            });
            (raw, canonical)
        })
        .reduce(
            || (vec![0u64; slots], vec![0u64; slots]),
            |(r1, c1), (r2, c2)| (add_into(r1, r2), add_into(c1, c2)),
        );
    Ok(PathTally {
        n,
        raw: to_map(&raw),
        canonical: to_map(&canonical),
    })
}

/// Counts magic labelings of `P_n` by exhaustive permutation.
pub fn count_path_bruteforce(n: u32, convention: Convention, guard: Guard) -> Result<CountReport> {
    let start = Instant::now();
    let tally = path_tally(n, guard)?;
    Ok(tally.report(convention, start.elapsed()))
}

/// Every magic labeling of `P_n`, in no particular order.
pub fn path_solutions_bruteforce(n: u32, guard: Guard) -> Result<Vec<Labeling>> {
    check_path_guard(n, guard)?;
    let len = 2 * n as usize + 1;
    let mut seq: Vec<Label> = (1..=len as Label).collect();
    let mut out = Vec::new();
    for_each_permutation(&mut seq, 0, |p| {
        if path_weight(p).is_some() {
            out.push(p.to_vec());
        }
    });
    out.into_iter().map(Labeling::new).collect()
}

/// Cycle counts under the two conventions: every labeling, and one per
/// dihedral orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CycleConvention {
    Raw,
    Dihedral,
}

impl CycleConvention {
    pub const ALL: [CycleConvention; 2] = [CycleConvention::Raw, CycleConvention::Dihedral];
}

impl From<CycleConvention> for Reduction {
    fn from(c: CycleConvention) -> Self {
        match c {
            CycleConvention::Raw => Reduction::Raw,
            CycleConvention::Dihedral => Reduction::Dihedral,
        }
    }
}

/// The `2n` images of a cycle sequence under rotation by whole vertex-edge
/// steps and reflection through `v1`.
pub fn dihedral_images(seq: &[Label]) -> Vec<Vec<Label>> {
    let len = seq.len();
    let reflected: Vec<Label> = (0..len).map(|p| seq[(len - p) % len]).collect();
    let mut images = Vec::with_capacity(len);
    for base in [seq, reflected.as_slice()] {
        for shift in (0..len).step_by(2) {
            images.push((0..len).map(|p| base[(p + shift) % len]).collect());
        }
    }
    images
}

fn is_orbit_minimum(seq: &[Label]) -> bool {
    dihedral_images(seq).iter().all(|img| seq <= img.as_slice())
}

fn check_cycle_guard(n: u32, guard: Guard) -> Result<()> {
    if !(3..=HARD_LIMIT).contains(&n) {
        return Err(Error::LengthOutOfRange {
            n,
            min: 3,
            max: HARD_LIMIT,
        });
    }
    if guard == Guard::Enforced && n > CYCLE_GUARD {
        return Err(Error::GuardExceeded {
            engine: "brute-force cycle oracle",
            n,
            limit: CYCLE_GUARD,
        });
    }
    Ok(())
}

/// Counts magic labelings of `C_n` by exhaustive permutation of `1..=2n`.
///
/// The dihedral count keeps a labeling iff it is the lexicographically
/// smallest of its `2n` images, which counts orbits without assuming the
/// group acts freely.
pub fn count_cycle_bruteforce(
    n: u32,
    convention: CycleConvention,
    guard: Guard,
) -> Result<CountReport> {
    check_cycle_guard(n, guard)?;
    let start = Instant::now();
    let len = 2 * n as usize;
    let slots = 3 * len + 1;
    let counts = (1..=len as Label)
        .into_par_iter()
        .map(|first| {
            let mut counts = vec![0u64; slots];
            let mut seq: Vec<Label> = std::iter::once(first)
                .chain((1..=len as Label).filter(|&l| l != first))
                .collect();
            for_each_permutation(&mut seq, 1, |p| {
                if let Some(k) = cycle_weight(p) {
                    let keep = match convention {
                        CycleConvention::Raw => true,
                        CycleConvention::Dihedral => is_orbit_minimum(p),
                    };
                    if keep {
                        counts[k as usize] += 1;
                    }
                }
            });
            counts
        })
        .reduce(|| vec![0u64; slots], add_into);
    Ok(CountReport::new(
        Family::Cycle,
        n,
        convention.into(),
        Mode::Bruteforce,
        to_map(&counts),
        start.elapsed(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{cycle_k_bounds, k_bounds};
    use crate::model::is_magic;
    use std::collections::HashSet;

    #[test]
    fn heap_visits_every_permutation_once() {
        for len in 0..=6usize {
            let mut items: Vec<Label> = (1..=len as Label).collect();
            let mut seen = HashSet::new();
            let mut visits = 0usize;
            for_each_permutation(&mut items, 0, |p| {
                visits += 1;
                seen.insert(p.to_vec());
            });
            let fact: usize = (1..=len).product();
            assert_eq!(visits, fact);
            assert_eq!(seen.len(), fact);
        }
    }

    #[test]
    fn heap_respects_fixed_prefix() {
        let mut items: Vec<Label> = vec![9, 1, 2, 3];
        let mut visits = 0;
        for_each_permutation(&mut items, 1, |p| {
            assert_eq!(p[0], 9);
            visits += 1;
        });
        assert_eq!(visits, 6);
    }

    #[test]
    fn small_path_counts() {
        let c = count_path_bruteforce(1, Convention::Canonical, Guard::Enforced).unwrap();
        assert_eq!(c.total, 3);
        let r = count_path_bruteforce(1, Convention::Raw, Guard::Enforced).unwrap();
        assert_eq!(r.total, 6);
        let c2 = count_path_bruteforce(2, Convention::Canonical, Guard::Enforced).unwrap();
        assert_eq!(c2.total, 12);
        assert_eq!(c2.per_k, BTreeMap::from([(8, 4), (9, 4), (10, 4)]));
        let z = count_path_bruteforce(0, Convention::Canonical, Guard::Enforced).unwrap();
        assert_eq!(z.total, 1);
        assert!(z.per_k.is_empty());
    }

    #[test]
    fn guards() {
        assert!(matches!(
            count_path_bruteforce(8, Convention::Raw, Guard::Enforced),
            Err(Error::GuardExceeded { .. })
        ));
        assert!(matches!(
            count_cycle_bruteforce(6, CycleConvention::Raw, Guard::Enforced),
            Err(Error::GuardExceeded { .. })
        ));
        assert!(count_cycle_bruteforce(2, CycleConvention::Raw, Guard::Lifted).is_err());
        assert!(count_path_bruteforce(32, Convention::Raw, Guard::Lifted).is_err());
    }

    #[test]
    fn materialized_solutions_agree_with_tally() {
        for n in 1..=4 {
            let sols = path_solutions_bruteforce(n, Guard::Enforced).unwrap();
            let tally = path_tally(n, Guard::Enforced).unwrap();
            assert_eq!(sols.len() as u64, tally.raw.values().sum::<u64>());
            assert!(sols.iter().all(|s| is_magic(s).is_some()));
        }
        let sols = path_solutions_bruteforce(2, Guard::Enforced).unwrap();
        assert!(sols.contains(&Labeling::new(vec![1, 5, 3, 2, 4]).unwrap()));
        assert!(sols.contains(&Labeling::new(vec![1, 5, 3, 4, 2]).unwrap()));
    }

    #[test]
    fn path_symmetries_small() {
        for n in 1..=4u32 {
            let t = path_tally(n, Guard::Enforced).unwrap();
            let range = k_bounds(n).unwrap();
            for (&k, &raw) in &t.raw {
                assert!(range.contains(i64::from(k)));
                assert_eq!(raw, 2 * t.canonical[&k]);
                assert_eq!(raw, t.raw[&(6 * n + 6 - k)]);
            }
        }
    }

    #[test]
    fn dihedral_images_of_triangle() {
        let seq: Vec<Label> = vec![1, 2, 3, 4, 5, 6];
        let images = dihedral_images(&seq);
        assert_eq!(images.len(), 6);
        assert_eq!(images[0], seq);
        assert_eq!(images[1], vec![3, 4, 5, 6, 1, 2]);
        assert_eq!(images[3], vec![1, 6, 5, 4, 3, 2]);
        let distinct: HashSet<_> = images.into_iter().collect();
        assert_eq!(distinct.len(), 6);
    }

    #[test]
    fn triangle_cycle_counts() {
        let raw = count_cycle_bruteforce(3, CycleConvention::Raw, Guard::Enforced).unwrap();
        let orbits = count_cycle_bruteforce(3, CycleConvention::Dihedral, Guard::Enforced).unwrap();
        assert_eq!(raw.total % 6, 0);
        assert_eq!(raw.total, 6 * orbits.total);
        let range = cycle_k_bounds(3).unwrap();
        assert!(raw.per_k.keys().all(|&k| range.contains(i64::from(k))));
    }
}
