//! Explicit monotone games on multisets and the relational machinery on them:
//! desirability, completeness, and dummy/passer/blocker detection.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::multiset::{Coalition, Lattice, Multiset};

/// A monotone game given by its antichain of minimal winning coalitions.
///
/// The antichain is normalized on construction (dominated members dropped,
/// sorted), so structural equality is game equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExplicitGame {
    universe: Multiset,
    min_winning: Vec<Coalition>,
}

/// Winning status of every coalition, indexed by [`Lattice`].
#[derive(Debug, Clone)]
pub struct WinTable {
    lattice: Lattice,
    win: Vec<bool>,
}

impl WinTable {
    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn wins(&self, counts: &[u32]) -> bool {
        self.win[self.lattice.index(counts)]
    }

    pub fn wins_at(&self, index: usize) -> bool {
        self.win[index]
    }

    pub fn len(&self) -> usize {
        self.win.len()
    }

    pub fn is_empty(&self) -> bool {
        self.win.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LevelRelation {
    Equivalent,
    /// The first level is strictly more desirable than the second.
    StrictlyAbove,
    StrictlyBelow,
    Incomparable,
}

impl LevelRelation {
    fn from_flags(i_ge_j: bool, j_ge_i: bool) -> Self {
        match (i_ge_j, j_ge_i) {
            (true, true) => LevelRelation::Equivalent,
            (true, false) => LevelRelation::StrictlyAbove,
            (false, true) => LevelRelation::StrictlyBelow,
            (false, false) => LevelRelation::Incomparable,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            LevelRelation::StrictlyAbove => LevelRelation::StrictlyBelow,
            LevelRelation::StrictlyBelow => LevelRelation::StrictlyAbove,
            r => r,
        }
    }
}

/// Levels (0-based) carrying dummies, passers and blockers.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SpecialPlayers {
    pub dummies: Vec<usize>,
    pub passers: Vec<usize>,
    pub blockers: Vec<usize>,
}

impl ExplicitGame {
    pub fn new(universe: Multiset, min_winning: Vec<Coalition>) -> Result<Self> {
        for x in &min_winning {
            universe.check(x)?;
        }
        Ok(ExplicitGame {
            universe,
            min_winning: normalize_antichain(min_winning, |a, b| a.is_subset_of(b)),
        })
    }

    /// Builds the game whose winning coalitions are those accepted by `wins`.
    /// `wins` must be monotone; the result is derived from the minimal elements.
    pub fn from_predicate<F>(universe: Multiset, wins: F) -> Result<Self>
    where
        F: Fn(&[u32]) -> bool,
    {
        let lattice = universe.lattice()?;
        let win = (0..lattice.len()).map(|i| wins(&lattice.decode(i))).collect();
        let table = WinTable { lattice, win };
        Ok(Self::from_table(universe, &table))
    }

    pub(crate) fn from_table(universe: Multiset, table: &WinTable) -> Self {
        let lat = &table.lattice;
        let mut min_winning = Vec::new();
        for idx in 0..lat.len() {
            if !table.win[idx] {
                continue;
            }
            let counts = lat.decode(idx);
            let minimal = (0..lat.levels())
                .filter(|&i| counts[i] > 0)
                .all(|i| !table.win[idx - lat.stride(i)]);
            if minimal {
                min_winning.push(Coalition::from_counts(counts));
            }
        }
        min_winning.sort();
        ExplicitGame {
            universe,
            min_winning,
        }
    }

    pub fn universe(&self) -> &Multiset {
        &self.universe
    }

    pub fn levels(&self) -> usize {
        self.universe.levels()
    }

    pub fn min_winning(&self) -> &[Coalition] {
        &self.min_winning
    }

    /// True when nothing wins or the empty coalition wins.
    pub fn is_degenerate(&self) -> bool {
        self.min_winning.is_empty() || self.min_winning.iter().any(Coalition::is_empty)
    }

    pub fn is_winning(&self, x: &Coalition) -> Result<bool> {
        self.universe.check(x)?;
        Ok(self.wins_unchecked(x.counts()))
    }

    pub(crate) fn wins_unchecked(&self, counts: &[u32]) -> bool {
        self.min_winning
            .iter()
            .any(|m| m.counts().iter().zip(counts).all(|(a, b)| a <= b))
    }

    pub fn winning_table(&self) -> Result<WinTable> {
        let lattice = self.universe.lattice()?;
        let mut win = vec![false; lattice.len()];
        for m in &self.min_winning {
            win[lattice.index(m.counts())] = true;
        }
        // Upward closure: x wins iff it is marked or some x - e_i wins.
        for idx in 0..lattice.len() {
            if win[idx] {
                continue;
            }
            let counts = lattice.decode(idx);
            win[idx] = (0..lattice.levels())
                .any(|i| counts[i] > 0 && win[idx - lattice.stride(i)]);
        }
        Ok(WinTable { lattice, win })
    }

    /// The antichain of losing coalitions that become winning when any
    /// available player is added.
    pub fn maximal_losing(&self) -> Result<Vec<Coalition>> {
        let table = self.winning_table()?;
        Ok(maximal_losing_from(&table))
    }

    pub fn level_relation(&self, i: usize, j: usize) -> Result<LevelRelation> {
        self.check_level(i)?;
        self.check_level(j)?;
        if i == j {
            return Err(Error::Precondition(
                "level_relation needs two distinct levels".into(),
            ));
        }
        let table = self.winning_table()?;
        Ok(relation_in(&table, i, j))
    }

    /// Pairwise desirability between all levels.
    pub fn desirability(&self) -> Result<Desirability> {
        let table = self.winning_table()?;
        Ok(Desirability::from_table(&table))
    }

    pub fn is_complete(&self) -> Result<bool> {
        Ok(self.desirability()?.is_total())
    }

    pub fn special_players(&self) -> Result<SpecialPlayers> {
        let m = self.levels();
        let full = self.universe.full();
        let mut out = SpecialPlayers::default();
        for i in 0..m {
            if self.min_winning.iter().all(|x| x.count(i) == 0) {
                out.dummies.push(i);
            }
            let mut single = vec![0; m];
            single[i] = 1;
            if self.wins_unchecked(&single) {
                out.passers.push(i);
            }
            if !self.wins_unchecked(full.with_removed(i, 1).counts()) {
                out.blockers.push(i);
            }
        }
        Ok(out)
    }

    fn check_level(&self, level: usize) -> Result<()> {
        if level >= self.levels() {
            return Err(Error::LevelOutOfRange {
                level: level + 1,
                levels: self.levels(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for ExplicitGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "game on {} with minimal winning [", self.universe)?;
        for (i, x) in self.min_winning.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

pub(crate) fn maximal_losing_from(table: &WinTable) -> Vec<Coalition> {
    let lat = table.lattice();
    let mut out = Vec::new();
    for idx in 0..lat.len() {
        if table.win[idx] {
            continue;
        }
        let counts = lat.decode(idx);
        let maximal = (0..lat.levels())
            .filter(|&i| counts[i] < lat.dim(i))
            .all(|i| table.win[idx + lat.stride(i)]);
        if maximal {
            out.push(Coalition::from_counts(counts));
        }
    }
    out.sort();
    out
}

/// Compares one player of level `i` with one of level `j`, quantifying over
/// every coalition of the universe with one unit of each removed.
pub(crate) fn relation_in(table: &WinTable, i: usize, j: usize) -> LevelRelation {
    let lat = table.lattice();
    let mut i_ge_j = true;
    let mut j_ge_i = true;
    for idx in 0..lat.len() {
        let counts = lat.decode(idx);
        // counts plays the role of X ∪ {i} ∪ {j}; both units must be present.
        if counts[i] == 0 || counts[j] == 0 {
            continue;
        }
        let with_i = table.win[idx - lat.stride(j)];
        let with_j = table.win[idx - lat.stride(i)];
        if with_j && !with_i {
            i_ge_j = false;
        }
        if with_i && !with_j {
            j_ge_i = false;
        }
        if !i_ge_j && !j_ge_i {
            break;
        }
    }
    LevelRelation::from_flags(i_ge_j, j_ge_i)
}

/// Isbell desirability between levels of one game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Desirability {
    rel: Vec<Vec<LevelRelation>>,
}

impl Desirability {
    pub(crate) fn from_table(table: &WinTable) -> Self {
        let m = table.lattice().levels();
        let mut rel = vec![vec![LevelRelation::Equivalent; m]; m];
        for i in 0..m {
            for j in (i + 1)..m {
                let r = relation_in(table, i, j);
                rel[i][j] = r;
                rel[j][i] = r.flip();
            }
        }
        Desirability { rel }
    }

    pub fn get(&self, i: usize, j: usize) -> LevelRelation {
        self.rel[i][j]
    }

    pub fn levels(&self) -> usize {
        self.rel.len()
    }

    pub fn is_total(&self) -> bool {
        self.rel
            .iter()
            .all(|row| row.iter().all(|&r| r != LevelRelation::Incomparable))
    }

    /// `i` strictly more desirable than `j`.
    pub fn strictly_above(&self, i: usize, j: usize) -> bool {
        self.rel[i][j] == LevelRelation::StrictlyAbove
    }

    /// Equivalence classes of levels, each sorted, ordered by first member.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let m = self.levels();
        let mut seen = vec![false; m];
        let mut out = Vec::new();
        for i in 0..m {
            if seen[i] {
                continue;
            }
            let class: Vec<usize> = (i..m)
                .filter(|&j| self.rel[i][j] == LevelRelation::Equivalent)
                .collect();
            for &j in &class {
                seen[j] = true;
            }
            out.push(class);
        }
        out
    }
}

/// Sorts and removes members dominated under `le` (and duplicates). Keeps the
/// minimal elements.
pub(crate) fn normalize_antichain<F>(mut items: Vec<Coalition>, le: F) -> Vec<Coalition>
where
    F: Fn(&Coalition, &Coalition) -> bool,
{
    items.sort();
    items.dedup();
    let keep: Vec<bool> = items
        .iter()
        .enumerate()
        .map(|(a, x)| {
            !items
                .iter()
                .enumerate()
                .any(|(b, y)| a != b && le(y, x))
        })
        .collect();
    items
        .into_iter()
        .zip(keep)
        .filter_map(|(x, k)| k.then_some(x))
        .collect()
}
