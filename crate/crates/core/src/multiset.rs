//! Player universes as level multiplicities, and coalitions as submultisets.
//!
//! A universe `{1^n1, 2^n2, ..., m^nm}` is stored as its count vector. Levels
//! are 0-based internally and 1-based whenever they are printed.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default bound on the number of coalitions an enumerating operation may visit.
pub const DEFAULT_ENUM_CAP: u128 = 10_000_000;

/// Environment variable that overrides [`DEFAULT_ENUM_CAP`].
pub const ENUM_CAP_ENV: &str = "HIERGAME_ENUM_CAP";

/// The enumeration cap in effect: `HIERGAME_ENUM_CAP` when set and parseable,
/// otherwise [`DEFAULT_ENUM_CAP`].
pub fn enumeration_cap() -> u128 {
    std::env::var(ENUM_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<u128>().ok())
        .unwrap_or(DEFAULT_ENUM_CAP)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Multiset {
    counts: Vec<u32>,
}

impl Multiset {
    pub fn new(counts: Vec<u32>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::InvalidMultiset("at least one level is required".into()));
        }
        if let Some(i) = counts.iter().position(|&c| c == 0) {
            return Err(Error::InvalidMultiset(format!(
                "level {} has multiplicity 0",
                i + 1
            )));
        }
        Ok(Multiset { counts })
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn levels(&self) -> usize {
        self.counts.len()
    }

    pub fn count(&self, level: usize) -> u32 {
        self.counts[level]
    }

    /// Total number of players.
    pub fn size(&self) -> u32 {
        self.counts.iter().sum()
    }

    /// Number of submultisets, `prod (n_i + 1)`.
    pub fn lattice_size(&self) -> u128 {
        self.counts
            .iter()
            .fold(1u128, |acc, &c| acc.saturating_mul(c as u128 + 1))
    }

    pub fn check_cap(&self, cap: u128) -> Result<()> {
        let size = self.lattice_size();
        if size > cap {
            return Err(Error::CapExceeded { size, cap });
        }
        Ok(())
    }

    pub fn lattice(&self) -> Result<Lattice> {
        self.check_cap(enumeration_cap())?;
        Ok(Lattice::new(self))
    }

    pub fn full(&self) -> Coalition {
        Coalition::from_counts(self.counts.clone())
    }

    pub fn empty(&self) -> Coalition {
        Coalition::from_counts(vec![0; self.levels()])
    }

    pub fn contains(&self, x: &Coalition) -> bool {
        x.levels() == self.levels() && x.counts.iter().zip(&self.counts).all(|(a, b)| a <= b)
    }

    /// Validates `x` as a coalition of this universe.
    pub fn check(&self, x: &Coalition) -> Result<()> {
        if x.levels() != self.levels() {
            return Err(Error::DimensionMismatch {
                expected: self.levels(),
                got: x.levels(),
            });
        }
        if !self.contains(x) {
            return Err(Error::NotSubmultiset {
                coalition: x.to_string(),
                universe: self.to_string(),
            });
        }
        Ok(())
    }

    pub fn complement(&self, x: &Coalition) -> Coalition {
        debug_assert!(self.contains(x));
        Coalition::from_counts(
            self.counts
                .iter()
                .zip(&x.counts)
                .map(|(n, l)| n - l)
                .collect(),
        )
    }
}

impl TryFrom<Vec<u32>> for Multiset {
    type Error = Error;

    fn try_from(counts: Vec<u32>) -> Result<Self> {
        Multiset::new(counts)
    }
}

impl From<Multiset> for Vec<u32> {
    fn from(m: Multiset) -> Self {
        m.counts
    }
}

impl fmt::Display for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_levels(f, &self.counts, true)
    }
}

/// A submultiset `{1^l1, ..., m^lm}` of some universe.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coalition {
    counts: Vec<u32>,
}

impl Coalition {
    pub fn from_counts(counts: Vec<u32>) -> Self {
        Coalition { counts }
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn levels(&self) -> usize {
        self.counts.len()
    }

    pub fn count(&self, level: usize) -> u32 {
        self.counts[level]
    }

    pub fn size(&self) -> u32 {
        self.counts.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    /// Submultiset order.
    pub fn is_subset_of(&self, other: &Coalition) -> bool {
        self.levels() == other.levels()
            && self.counts.iter().zip(&other.counts).all(|(a, b)| a <= b)
    }

    pub fn union(&self, other: &Coalition) -> Coalition {
        Coalition::from_counts(
            self.counts
                .iter()
                .zip(&other.counts)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn with_added(&self, level: usize, k: u32) -> Coalition {
        let mut c = self.clone();
        c.counts[level] += k;
        c
    }

    pub fn with_removed(&self, level: usize, k: u32) -> Coalition {
        let mut c = self.clone();
        c.counts[level] -= k;
        c
    }

    /// Prefix sums `l1, l1+l2, ...`.
    pub fn prefix_sums(&self) -> Vec<u32> {
        self.counts
            .iter()
            .scan(0u32, |acc, &c| {
                *acc += c;
                Some(*acc)
            })
            .collect()
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_levels(f, &self.counts, false)
    }
}

fn fmt_levels(f: &mut fmt::Formatter<'_>, counts: &[u32], keep_zero: bool) -> fmt::Result {
    write!(f, "{{")?;
    let mut first = true;
    for (i, &c) in counts.iter().enumerate() {
        if c == 0 && !keep_zero {
            continue;
        }
        if !first {
            write!(f, ",")?;
        }
        first = false;
        write!(f, "{}^{}", i + 1, c)?;
    }
    write!(f, "}}")
}

/// Mixed-radix indexing of all submultisets of a universe.
///
/// The last level varies fastest, so iteration order is lexicographic on the
/// count vector and every `x - e_i` has a smaller index than `x`.
#[derive(Debug, Clone)]
pub struct Lattice {
    dims: Vec<u32>,
    strides: Vec<usize>,
    len: usize,
}

impl Lattice {
    pub fn new(universe: &Multiset) -> Self {
        let dims = universe.counts().to_vec();
        let mut strides = vec![0usize; dims.len()];
        let mut acc = 1usize;
        for i in (0..dims.len()).rev() {
            strides[i] = acc;
            acc *= dims[i] as usize + 1;
        }
        Lattice {
            dims,
            strides,
            len: acc,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn levels(&self) -> usize {
        self.dims.len()
    }

    pub fn stride(&self, level: usize) -> usize {
        self.strides[level]
    }

    pub fn index(&self, counts: &[u32]) -> usize {
        counts
            .iter()
            .zip(&self.strides)
            .map(|(&c, &s)| c as usize * s)
            .sum()
    }

    pub fn decode(&self, mut index: usize) -> Vec<u32> {
        let mut out = vec![0u32; self.dims.len()];
        for (i, &s) in self.strides.iter().enumerate() {
            out[i] = (index / s) as u32;
            index %= s;
        }
        out
    }

    pub fn coalition(&self, index: usize) -> Coalition {
        Coalition::from_counts(self.decode(index))
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        (0..self.len).map(move |i| self.decode(i))
    }

    pub fn dim(&self, level: usize) -> u32 {
        self.dims[level]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_zero_levels() {
        assert!(Multiset::new(vec![]).is_err());
        assert!(Multiset::new(vec![2, 0]).is_err());
        let m = Multiset::new(vec![2, 3]).unwrap();
        assert_eq!(m.size(), 5);
        assert_eq!(m.lattice_size(), 12);
    }

    #[test]
    fn submultiset_check() {
        let m = Multiset::new(vec![2, 2]).unwrap();
        assert!(m.check(&Coalition::from_counts(vec![2, 1])).is_ok());
        assert!(matches!(
            m.check(&Coalition::from_counts(vec![3, 0])),
            Err(Error::NotSubmultiset { .. })
        ));
        assert!(matches!(
            m.check(&Coalition::from_counts(vec![1])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn cap_is_enforced() {
        let m = Multiset::new(vec![9, 9, 9]).unwrap();
        assert!(m.check_cap(1000).is_ok());
        assert_eq!(
            m.check_cap(999),
            Err(Error::CapExceeded {
                size: 1000,
                cap: 999
            })
        );
    }

    #[test]
    fn lattice_round_trips() {
        let m = Multiset::new(vec![3, 1, 2]).unwrap();
        let lat = Lattice::new(&m);
        assert_eq!(lat.len(), 24);
        for i in 0..lat.len() {
            assert_eq!(lat.index(&lat.decode(i)), i);
        }
        assert_eq!(lat.decode(lat.len() - 1), vec![3, 1, 2]);
    }

    #[test]
    fn display_is_one_based() {
        let m = Multiset::new(vec![3, 3]).unwrap();
        assert_eq!(m.to_string(), "{1^3,2^3}");
        assert_eq!(Coalition::from_counts(vec![0, 2]).to_string(), "{2^2}");
        assert_eq!(m.complement(&Coalition::from_counts(vec![1, 3])).counts(), &[2, 0]);
    }
}
