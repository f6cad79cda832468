//! Exhaustive check of the structural characterization on small universes:
//! a complete game has a unique shift-maximal losing coalition exactly when
//! it is disjunctive hierarchical, and a unique shift-minimal winning one
//! exactly when it is conjunctive hierarchical.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{Desirability, ExplicitGame};
use crate::hierarchy::{shift_extremal, HierSpec, Kind};
use crate::multiset::{Lattice, Multiset};
use crate::sweep::canonical_specs;

/// Upper bound on the number of monotone games enumerated per universe.
pub const GAME_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpecRef {
    pub kind: Kind,
    pub n: Vec<u32>,
    pub k: Vec<u32>,
    /// For each level of the universe, the (0-based) level of `n` it maps to.
    pub level_map: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GameRecord {
    pub min_winning: Vec<Vec<u32>>,
    /// Counts over the merged levels (see `SpecRef::level_map`).
    pub shift_max_losing: Vec<Vec<u32>>,
    pub shift_min_winning: Vec<Vec<u32>>,
    pub disjunctive: Option<SpecRef>,
    pub conjunctive: Option<SpecRef>,
}

impl GameRecord {
    pub fn disjunctive_law_holds(&self) -> bool {
        (self.shift_max_losing.len() == 1) == self.disjunctive.is_some()
    }

    pub fn conjunctive_law_holds(&self) -> bool {
        (self.shift_min_winning.len() == 1) == self.conjunctive.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructuralReport {
    pub universe: Vec<u32>,
    /// Monotone games with at least one winning and one losing coalition.
    pub games: usize,
    pub complete: usize,
    pub unique_shift_max_losing: usize,
    pub disjunctive_hierarchical: usize,
    pub unique_shift_min_winning: usize,
    pub conjunctive_hierarchical: usize,
    pub violations: Vec<GameRecord>,
    /// A complete game with several shift-maximal losing coalitions, if any.
    pub witness: Option<GameRecord>,
}

impl StructuralReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "universe {:?}", self.universe);
        let _ = writeln!(s, "  games                     {}", self.games);
        let _ = writeln!(s, "  complete                  {}", self.complete);
        let _ = writeln!(s, "  unique shift-max losing   {}", self.unique_shift_max_losing);
        let _ = writeln!(s, "  disjunctive hierarchical  {}", self.disjunctive_hierarchical);
        let _ = writeln!(s, "  unique shift-min winning  {}", self.unique_shift_min_winning);
        let _ = writeln!(s, "  conjunctive hierarchical  {}", self.conjunctive_hierarchical);
        let _ = writeln!(s, "  violations                {}", self.violations.len());
        for v in &self.violations {
            let _ = writeln!(s, "    {:?}", v.min_winning);
        }
        if let Some(w) = &self.witness {
            let _ = writeln!(
                s,
                "  witness {:?} with shift-max losing {:?}",
                w.min_winning, w.shift_max_losing
            );
        }
        s
    }
}

/// Every up-set of the lattice as a winning table. Points are decided from
/// the top index down; a point may win only if all its upper covers win.
fn up_sets(lat: &Lattice) -> Result<Vec<Vec<bool>>> {
    let mut out = Vec::new();
    let mut win = vec![false; lat.len()];
    fn go(lat: &Lattice, idx: usize, win: &mut Vec<bool>, out: &mut Vec<Vec<bool>>) -> Result<()> {
        if idx == 0 {
            for w in [false, true] {
                if w && !covers_win(lat, 0, win) {
                    continue;
                }
                win[0] = w;
                if out.len() >= GAME_CAP {
                    return Err(Error::CapExceeded {
                        size: GAME_CAP as u128 + 1,
                        cap: GAME_CAP as u128,
                    });
                }
                out.push(win.clone());
            }
            return Ok(());
        }
        win[idx] = false;
        go(lat, idx - 1, win, out)?;
        if covers_win(lat, idx, win) {
            win[idx] = true;
            go(lat, idx - 1, win, out)?;
            win[idx] = false;
        }
        Ok(())
    }
    fn covers_win(lat: &Lattice, idx: usize, win: &[bool]) -> bool {
        let c = lat.decode(idx);
        (0..lat.levels())
            .filter(|&j| c[j] < lat.dim(j))
            .all(|j| win[idx + lat.stride(j)])
    }
    go(lat, lat.len() - 1, &mut win, &mut out)?;
    Ok(out)
}

/// Merges equivalent levels of a complete game and orders the classes by
/// decreasing desirability.
fn merged(game: &ExplicitGame) -> Result<(ExplicitGame, Vec<usize>)> {
    let table = game.winning_table()?;
    let des = Desirability::from_table(&table);
    let mut classes = des.classes();
    classes.sort_by(|a, b| {
        if des.strictly_above(a[0], b[0]) {
            std::cmp::Ordering::Less
        } else if des.strictly_above(b[0], a[0]) {
            std::cmp::Ordering::Greater
        } else {
            std::cmp::Ordering::Equal
        }
    });
    let dims = game.universe().counts();
    let mut level_map = vec![0usize; dims.len()];
    for (c, class) in classes.iter().enumerate() {
        for &l in class {
            level_map[l] = c;
        }
    }
    let merged_n: Vec<u32> = classes
        .iter()
        .map(|cl| cl.iter().map(|&l| dims[l]).sum())
        .collect();
    let spread = |counts: &[u32]| -> Vec<u32> {
        let mut out = vec![0u32; dims.len()];
        for (c, class) in classes.iter().enumerate() {
            let mut left = counts[c];
            for &l in class {
                let take = left.min(dims[l]);
                out[l] = take;
                left -= take;
            }
        }
        out
    };
    let g = ExplicitGame::from_predicate(Multiset::new(merged_n)?, |c| table.wins(&spread(c)))?;
    Ok((g, level_map))
}

fn find_spec(kind: Kind, merged: &ExplicitGame, level_map: &[usize]) -> Result<Option<SpecRef>> {
    let n = merged.universe().counts();
    for spec in canonical_specs(kind, n, None) {
        if &spec.realize()? == merged {
            return Ok(Some(spec_ref(&spec, level_map)));
        }
    }
    Ok(None)
}

fn spec_ref(spec: &HierSpec, level_map: &[usize]) -> SpecRef {
    SpecRef {
        kind: spec.kind(),
        n: spec.n().to_vec(),
        k: spec.k().to_vec(),
        level_map: level_map.to_vec(),
    }
}

fn counts_of(cs: &[crate::multiset::Coalition]) -> Vec<Vec<u32>> {
    cs.iter().map(|c| c.counts().to_vec()).collect()
}

pub fn cmd_structural(universe: &Multiset) -> Result<StructuralReport> {
    let lat = universe.lattice()?;
    let mut report = StructuralReport {
        universe: universe.counts().to_vec(),
        games: 0,
        complete: 0,
        unique_shift_max_losing: 0,
        disjunctive_hierarchical: 0,
        unique_shift_min_winning: 0,
        conjunctive_hierarchical: 0,
        violations: Vec::new(),
        witness: None,
    };
    for win in up_sets(&lat)? {
        // Skip nothing winning and the empty coalition winning.
        if win[0] || !win[lat.len() - 1] {
            continue;
        }
        report.games += 1;
        let game = ExplicitGame::from_predicate(universe.clone(), |c| win[lat.index(c)])?;
        if !game.is_complete()? {
            continue;
        }
        report.complete += 1;
        // Equivalent levels are one class of players; shifts act on classes.
        let (m, level_map) = merged(&game)?;
        let ext = shift_extremal(&m)?;
        let rec = GameRecord {
            min_winning: counts_of(game.min_winning()),
            shift_max_losing: counts_of(&ext.shift_max_losing),
            shift_min_winning: counts_of(&ext.shift_min_winning),
            disjunctive: find_spec(Kind::Disjunctive, &m, &level_map)?,
            conjunctive: find_spec(Kind::Conjunctive, &m, &level_map)?,
        };
        if rec.shift_max_losing.len() == 1 {
            report.unique_shift_max_losing += 1;
        }
        if rec.disjunctive.is_some() {
            report.disjunctive_hierarchical += 1;
        }
        if rec.shift_min_winning.len() == 1 {
            report.unique_shift_min_winning += 1;
        }
        if rec.conjunctive.is_some() {
            report.conjunctive_hierarchical += 1;
        }
        let holds = rec.disjunctive_law_holds() && rec.conjunctive_law_holds();
        if report.witness.is_none() && rec.shift_max_losing.len() > 1 {
            report.witness = Some(rec.clone());
        }
        if !holds {
            report.violations.push(rec);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn up_set_counts() {
        // Monotone functions on a chain of length 3: 4 up-sets (plus none).
        let lat = Multiset::new(vec![3]).unwrap().lattice().unwrap();
        assert_eq!(up_sets(&lat).unwrap().len(), 5);
        // 2x2 grid: lattice paths C(4,2) = 6 up-sets.
        let lat = Multiset::new(vec![1, 1]).unwrap().lattice().unwrap();
        assert_eq!(up_sets(&lat).unwrap().len(), 6);
        let lat = Multiset::new(vec![2, 2]).unwrap().lattice().unwrap();
        assert_eq!(up_sets(&lat).unwrap().len(), 20);
    }

    #[test]
    fn single_level_threshold_games() {
        let r = cmd_structural(&Multiset::new(vec![3]).unwrap()).unwrap();
        assert_eq!(r.games, 3);
        assert_eq!(r.complete, 3);
        assert_eq!(r.unique_shift_max_losing, 3);
        assert_eq!(r.disjunctive_hierarchical, 3);
        assert!(r.holds());
    }

    #[test]
    fn two_by_two() {
        let r = cmd_structural(&Multiset::new(vec![2, 2]).unwrap()).unwrap();
        assert!(r.holds(), "{}", r.to_table());
        assert!(r.complete > 0);
    }
}
