//! Domain types for labelings of the path `P_n`.
//!
//! A labeling is stored in path order `v1, e1, v2, e2, ..., v_{n+1}`: even
//! positions hold vertex labels, odd positions hold edge labels, and edge `i`
//! is the triple at positions `2i, 2i+1, 2i+2`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported path length. Labels `1..=2n+1` must fit in a 64-bit mask.
pub const MAX_PATH_LENGTH: u32 = 31;

/// Label value. Labels never exceed 63.
pub type Label = u8;

/// A path with `n` edges and `n + 1` vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PathInstance {
    n: u32,
}

impl PathInstance {
    pub fn new(n: u32) -> Result<Self> {
        if n > MAX_PATH_LENGTH {
            return Err(Error::LengthOutOfRange {
                n,
                min: 0,
                max: MAX_PATH_LENGTH,
            });
        }
        Ok(Self { n })
    }

    /// Number of edges.
    pub fn n(self) -> u32 {
        self.n
    }

    /// Number of labelled elements, `2n + 1`.
    pub fn element_count(self) -> usize {
        2 * self.n as usize + 1
    }
}

/// Common edge weight of a magic labeling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MagicConstant(pub u32);

impl fmt::Display for MagicConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Outcome of the magic test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Magic {
    /// Every edge has weight `k`.
    Constant(MagicConstant),
    /// No edges at all (`n == 0`); trivially magic, but without a constant.
    Vacuous,
}

impl Magic {
    pub fn constant(self) -> Option<MagicConstant> {
        match self {
            Magic::Constant(k) => Some(k),
            Magic::Vacuous => None,
        }
    }
}

/// Inclusive interval of magic constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KRange {
    pub k_min: i64,
    pub k_max: i64,
}

impl KRange {
    pub fn contains(&self, k: i64) -> bool {
        self.k_min <= k && k <= self.k_max
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> {
        self.k_min..=self.k_max
    }

    pub fn len(&self) -> usize {
        (self.k_max - self.k_min + 1).max(0) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.k_min > self.k_max
    }
}

impl fmt::Display for KRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.k_min, self.k_max)
    }
}

/// Whether reversal pairs are collapsed to one representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// Keep only labelings whose first vertex label is below the last one.
    Canonical,
    /// Count every labeling.
    Raw,
}

impl Convention {
    pub const ALL: [Convention; 2] = [Convention::Canonical, Convention::Raw];

    pub fn as_str(self) -> &'static str {
        match self {
            Convention::Canonical => "canonical",
            Convention::Raw => "raw",
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A bijection from `1..=2n+1` onto the elements of `P_n`, in path order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Labeling {
    labels: Vec<Label>,
}

impl Labeling {
    /// Validates that `labels` has odd length and is a permutation of `1..=len`.
    pub fn new(labels: Vec<Label>) -> Result<Self> {
        let len = labels.len();
        if len.is_multiple_of(2) || len > 2 * MAX_PATH_LENGTH as usize + 1 {
            return Err(Error::InvalidLabeling(format!(
                "length {len} is not 2n+1 for 0 <= n <= {MAX_PATH_LENGTH}"
            )));
        }
        let mut seen = 0u64;
        for &l in &labels {
            if l == 0 || l as usize > len {
                return Err(Error::InvalidLabeling(format!(
                    "label {l} outside 1..={len}"
                )));
            }
            let bit = 1u64 << l;
            if seen & bit != 0 {
                return Err(Error::InvalidLabeling(format!("label {l} repeated")));
            }
            seen |= bit;
        }
        Ok(Self { labels })
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    /// Number of edges of the underlying path.
    pub fn n(&self) -> u32 {
        (self.labels.len() / 2) as u32
    }

    pub fn instance(&self) -> PathInstance {
        PathInstance { n: self.n() }
    }

    pub fn into_labels(self) -> Vec<Label> {
        self.labels
    }
}

impl fmt::Display for Labeling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, l) in self.labels.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("]")
    }
}

/// Weight of every edge, `v_i + e_i + v_{i+1}`.
pub fn edge_weights(l: &Labeling) -> Vec<u32> {
    l.labels
        .windows(3)
        .step_by(2)
        .map(|w| w.iter().map(|&x| u32::from(x)).sum())
        .collect()
}

/// Returns the magic constant if all edge weights agree.
pub fn is_magic(l: &Labeling) -> Option<Magic> {
    let weights = edge_weights(l);
    match weights.split_first() {
        None => Some(Magic::Vacuous),
        Some((&k, rest)) => rest
            .iter()
            .all(|&w| w == k)
            .then_some(Magic::Constant(MagicConstant(k))),
    }
}

pub fn reverse(l: &Labeling) -> Labeling {
    let mut labels = l.labels.clone();
    labels.reverse();
    Labeling { labels }
}

/// True iff the first vertex label is smaller than the last vertex label.
pub fn is_canonical(l: &Labeling) -> Result<bool> {
    let (first, last) = match (l.labels.first(), l.labels.last()) {
        (Some(a), Some(b)) if l.labels.len() > 1 => (*a, *b),
        _ => return Err(Error::NoReversalPair),
    };
    Ok(first < last)
}

/// Replaces every label `x` by `2n + 2 - x`.
pub fn complement(l: &Labeling) -> Labeling {
    let top = l.labels.len() as Label + 1;
    Labeling {
        labels: l.labels.iter().map(|&x| top - x).collect(),
    }
}

/// Constant of the complemented labeling: `6n + 6 - k`.
pub fn complement_constant(n: u32, k: MagicConstant) -> MagicConstant {
    MagicConstant(6 * n + 6 - k.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lab(v: &[Label]) -> Labeling {
        Labeling::new(v.to_vec()).unwrap()
    }

    #[test]
    fn weights() {
        assert_eq!(edge_weights(&lab(&[1, 2, 3])), vec![6]);
        assert_eq!(edge_weights(&lab(&[1, 4, 5, 2, 3])), vec![10, 10]);
        assert_eq!(edge_weights(&lab(&[1, 2, 5, 3, 4])), vec![8, 12]);
        assert!(edge_weights(&lab(&[1])).is_empty());
    }

    #[test]
    fn magic_test() {
        assert_eq!(
            is_magic(&lab(&[1, 4, 5, 2, 3])),
            Some(Magic::Constant(MagicConstant(10)))
        );
        assert_eq!(is_magic(&lab(&[1, 2, 5, 3, 4])), None);
        assert_eq!(is_magic(&lab(&[1])), Some(Magic::Vacuous));
        assert_eq!(is_magic(&lab(&[1])).unwrap().constant(), None);
    }

    #[test]
    fn reversal() {
        assert_eq!(reverse(&lab(&[1, 4, 5, 2, 3])), lab(&[3, 2, 5, 4, 1]));
        assert_eq!(reverse(&lab(&[1])), lab(&[1]));
        assert_eq!(reverse(&lab(&[1, 2, 3])), lab(&[3, 2, 1]));
    }

    #[test]
    fn canonical() {
        assert!(is_canonical(&lab(&[1, 4, 5, 2, 3])).unwrap());
        assert!(!is_canonical(&lab(&[3, 2, 5, 4, 1])).unwrap());
        assert!(is_canonical(&lab(&[2, 1, 3])).unwrap());
        assert!(matches!(
            is_canonical(&lab(&[1])),
            Err(Error::NoReversalPair)
        ));
    }

    #[test]
    fn complements() {
        let l = lab(&[1, 4, 5, 2, 3]);
        let c = complement(&l);
        assert_eq!(c, lab(&[5, 2, 1, 4, 3]));
        assert_eq!(is_magic(&c), Some(Magic::Constant(MagicConstant(8))));
        assert_eq!(complement_constant(2, MagicConstant(10)), MagicConstant(8));
        assert_eq!(complement(&lab(&[1, 2, 3])), lab(&[3, 2, 1]));
        assert_eq!(complement_constant(1, MagicConstant(6)), MagicConstant(6));
        assert_eq!(complement(&lab(&[1])), lab(&[1]));
    }

    #[test]
    fn rejects_bad_labelings() {
        assert!(Labeling::new(vec![]).is_err());
        assert!(Labeling::new(vec![1, 2]).is_err());
        assert!(Labeling::new(vec![1, 1, 3]).is_err());
        assert!(Labeling::new(vec![0, 1, 2]).is_err());
        assert!(Labeling::new(vec![1, 2, 4]).is_err());
        assert!(PathInstance::new(32).is_err());
        assert_eq!(PathInstance::new(13).unwrap().element_count(), 27);
    }
}
