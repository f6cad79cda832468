//! Disjunctive and conjunctive hierarchical games: membership, realization,
//! canonicity, and shift-extremal coalitions.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{Desirability, ExplicitGame, LevelRelation};
use crate::multiset::{Coalition, Multiset};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    /// Wins when some prefix threshold is met.
    Disjunctive,
    /// Wins when every prefix threshold is met.
    Conjunctive,
}

impl Kind {
    pub fn flip(self) -> Kind {
        match self {
            Kind::Disjunctive => Kind::Conjunctive,
            Kind::Conjunctive => Kind::Disjunctive,
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Disjunctive => "disjunctive",
            Kind::Conjunctive => "conjunctive",
        })
    }
}

/// A hierarchical game `H(n, k)` of either kind.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HierSpec {
    kind: Kind,
    n: Multiset,
    k: Vec<u32>,
}

impl HierSpec {
    /// Validates threshold ordering for `kind` and rejects degenerate games
    /// (the empty coalition winning, or nothing winning).
    pub fn new(kind: Kind, n: Vec<u32>, k: Vec<u32>) -> Result<Self> {
        let n = Multiset::new(n).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        if k.len() != n.levels() {
            return Err(Error::InvalidSpec(format!(
                "n has {} levels but k has {}",
                n.levels(),
                k.len()
            )));
        }
        if k.contains(&0) {
            return Err(Error::InvalidSpec("thresholds must be positive".into()));
        }
        let m = k.len();
        for i in 1..m {
            let ok = match kind {
                Kind::Disjunctive => k[i - 1] < k[i],
                Kind::Conjunctive if i == m - 1 => k[i - 1] <= k[i],
                Kind::Conjunctive => k[i - 1] < k[i],
            };
            if !ok {
                return Err(Error::InvalidSpec(format!(
                    "{kind} thresholds out of order at level {}: {:?}",
                    i + 1,
                    k
                )));
            }
        }
        let spec = HierSpec { kind, n, k };
        if !spec.wins(spec.n.counts()) {
            return Err(Error::InvalidSpec(format!(
                "no coalition wins in {spec}"
            )));
        }
        Ok(spec)
    }

    pub fn disjunctive(n: Vec<u32>, k: Vec<u32>) -> Result<Self> {
        Self::new(Kind::Disjunctive, n, k)
    }

    pub fn conjunctive(n: Vec<u32>, k: Vec<u32>) -> Result<Self> {
        Self::new(Kind::Conjunctive, n, k)
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn n(&self) -> &[u32] {
        self.n.counts()
    }

    pub fn k(&self) -> &[u32] {
        &self.k
    }

    pub fn universe(&self) -> &Multiset {
        &self.n
    }

    pub fn levels(&self) -> usize {
        self.k.len()
    }

    pub(crate) fn wins(&self, counts: &[u32]) -> bool {
        let mut prefix = 0u32;
        let mut met = counts.iter().zip(&self.k).map(|(&l, &t)| {
            prefix += l;
            prefix >= t
        });
        match self.kind {
            Kind::Disjunctive => met.any(|b| b),
            Kind::Conjunctive => met.all(|b| b),
        }
    }

    pub fn is_winning(&self, x: &Coalition) -> Result<bool> {
        self.n.check(x)?;
        Ok(self.wins(x.counts()))
    }

    pub fn realize(&self) -> Result<ExplicitGame> {
        ExplicitGame::from_predicate(self.n.clone(), |c| self.wins(c))
    }

    pub fn canon_check(&self) -> CanonReport {
        let n = self.n();
        let k = &self.k;
        let m = k.len();
        let condition_a = k[0] <= n[0];
        // Disjunctive: levels strictly between the first and the last.
        // Conjunctive: the last level too, since a violation there makes the
        // whole last level blockers and merges it upward.
        let upper = match self.kind {
            Kind::Disjunctive => m.saturating_sub(1),
            Kind::Conjunctive => m,
        };
        let condition_b: Vec<bool> = (1..upper.max(1))
            .map(|i| k[i] < k[i - 1] + n[i])
            .collect();
        let canonical = condition_a && condition_b.iter().all(|&b| b);

        let (dummy_last_level, normalized_spec) = match self.kind {
            Kind::Disjunctive if m >= 2 => {
                let cap = k[m - 2] + n[m - 1];
                let mut spec = self.clone();
                if k[m - 1] > cap {
                    spec.k[m - 1] = cap;
                }
                (k[m - 1] >= cap, spec)
            }
            Kind::Conjunctive if m >= 2 => (k[m - 2] == k[m - 1], self.clone()),
            _ => (false, self.clone()),
        };

        CanonReport {
            canonical,
            condition_a,
            condition_b,
            dummy_last_level,
            passer_first_level: self.kind == Kind::Disjunctive && k[0] == 1,
            blocker_first_level: self.kind == Kind::Conjunctive && k[0] == n[0],
            normalized_spec,
        }
    }

    /// Errors unless canonical; also enforces that middle levels have at
    /// least two players, which canonicity implies.
    pub fn require_canonical(&self) -> Result<CanonReport> {
        let report = self.canon_check();
        if !report.canonical {
            return Err(Error::NonCanonical(self.to_string()));
        }
        let m = self.levels();
        if m > 2 && self.n()[1..m - 1].iter().any(|&c| c < 2) {
            return Err(Error::Validation(format!(
                "canonical {self} has a middle level with a single player"
            )));
        }
        Ok(report)
    }

    /// Merges levels that are equivalent in the realized game and re-derives
    /// the canonical thresholds. Returns the new spec and, for each original
    /// level, the index of the level it was merged into.
    pub fn canonicalize_semantic(&self) -> Result<(HierSpec, Vec<usize>)> {
        let game = self.realize()?;
        let table = game.winning_table()?;
        let des = Desirability::from_table(&table);
        let classes = des.classes();

        // Classes must be consecutive runs of levels ordered by desirability.
        let mut mapping = vec![0usize; self.levels()];
        let mut expected = 0usize;
        for (c, class) in classes.iter().enumerate() {
            for (off, &lvl) in class.iter().enumerate() {
                if lvl != expected + off {
                    return Err(Error::Validation(format!(
                        "equivalence classes of {self} are not contiguous"
                    )));
                }
                mapping[lvl] = c;
            }
            expected += class.len();
        }
        for w in classes.windows(2) {
            if des.get(w[0][0], w[1][0]) != LevelRelation::StrictlyAbove {
                return Err(Error::Validation(format!(
                    "levels of {self} are not ordered by desirability"
                )));
            }
        }

        let merged_n: Vec<u32> = classes
            .iter()
            .map(|cl| cl.iter().map(|&l| self.n()[l]).sum())
            .collect();
        let merged_universe = Multiset::new(merged_n.clone())?;
        let spread = |counts: &[u32]| -> Vec<u32> {
            let mut out = vec![0u32; self.levels()];
            for (c, class) in classes.iter().enumerate() {
                let mut left = counts[c];
                for &lvl in class {
                    let take = left.min(self.n()[lvl]);
                    out[lvl] = take;
                    left -= take;
                }
            }
            out
        };
        let merged = ExplicitGame::from_predicate(merged_universe, |c| table.wins(&spread(c)))?;
        let merged_table = merged.winning_table()?;
        let lat = merged_table.lattice();

        let m = classes.len();
        let k: Vec<u32> = match self.kind {
            Kind::Disjunctive => (0..m)
                .map(|i| {
                    1 + lat
                        .iter()
                        .enumerate()
                        .filter(|(idx, _)| !merged_table.wins_at(*idx))
                        .map(|(_, c)| c[..=i].iter().sum::<u32>())
                        .max()
                        .unwrap_or(0)
                })
                .collect(),
            Kind::Conjunctive => (0..m)
                .map(|i| {
                    lat.iter()
                        .enumerate()
                        .filter(|(idx, _)| merged_table.wins_at(*idx))
                        .map(|(_, c)| c[..=i].iter().sum::<u32>())
                        .min()
                        .unwrap_or(0)
                })
                .collect(),
        };
        let spec = HierSpec::new(self.kind, merged_n, k)?;
        if spec.realize()? != merged {
            return Err(Error::Validation(format!(
                "merged game of {self} is not reproduced by {spec}"
            )));
        }
        if !spec.canon_check().canonical {
            return Err(Error::Validation(format!("{spec} is not canonical")));
        }
        Ok((spec, mapping))
    }

    /// The unique shift-maximal losing coalition
    /// `{1^(k1-1), 2^(k2-k1), ..., m^(km-k(m-1))}` of a canonical disjunctive
    /// game without passers or dummies.
    pub fn shift_maximal_losing(&self) -> Result<Coalition> {
        if self.kind != Kind::Disjunctive {
            return Err(Error::Precondition("spec must be disjunctive".into()));
        }
        let report = self.canon_check();
        if !report.canonical {
            return Err(Error::NonCanonical(self.to_string()));
        }
        if report.passer_first_level {
            return Err(Error::Precondition(format!("{self} has passers")));
        }
        if report.dummy_last_level {
            return Err(Error::Precondition(format!("{self} has dummies")));
        }
        let mut counts = Vec::with_capacity(self.levels());
        let mut prev = 1u32;
        for &t in &self.k {
            counts.push(t - prev);
            prev = t;
        }
        Ok(Coalition::from_counts(counts))
    }
}

impl fmt::Display for HierSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = match self.kind {
            Kind::Disjunctive => "H_exists",
            Kind::Conjunctive => "H_forall",
        };
        write!(f, "{sym}(n={:?}, k={:?})", self.n(), self.k)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CanonReport {
    pub canonical: bool,
    pub condition_a: bool,
    pub condition_b: Vec<bool>,
    pub dummy_last_level: bool,
    pub passer_first_level: bool,
    pub blocker_first_level: bool,
    #[serde(skip)]
    pub normalized_spec: HierSpec,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftExtremal {
    pub shift_min_winning: Vec<Coalition>,
    pub shift_max_losing: Vec<Coalition>,
}

/// Shift-minimal winning and shift-maximal losing coalitions of a complete
/// game. A shift moves one unit from a level to a strictly less desirable one.
pub fn shift_extremal(game: &ExplicitGame) -> Result<ShiftExtremal> {
    let table = game.winning_table()?;
    let des = Desirability::from_table(&table);
    if !des.is_total() {
        return Err(Error::NotComplete);
    }
    let lat = table.lattice();
    let m = lat.levels();
    let shifts: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .filter(|&(i, j)| des.strictly_above(i, j))
        .collect();

    let mut shift_min_winning = Vec::new();
    let mut shift_max_losing = Vec::new();
    for idx in 0..lat.len() {
        let c = lat.decode(idx);
        if table.wins_at(idx) {
            let drops_lose = (0..m)
                .filter(|&i| c[i] > 0)
                .all(|i| !table.wins_at(idx - lat.stride(i)));
            let shifts_lose = shifts
                .iter()
                .filter(|&&(i, j)| c[i] > 0 && c[j] < lat.dim(j))
                .all(|&(i, j)| !table.wins_at(idx - lat.stride(i) + lat.stride(j)));
            if drops_lose && shifts_lose {
                shift_min_winning.push(Coalition::from_counts(c));
            }
        } else {
            let adds_win = (0..m)
                .filter(|&j| c[j] < lat.dim(j))
                .all(|j| table.wins_at(idx + lat.stride(j)));
            // Any coalition that shifts onto this one must be winning.
            let preimages_win = shifts
                .iter()
                .filter(|&&(i, j)| c[j] > 0 && c[i] < lat.dim(i))
                .all(|&(i, j)| table.wins_at(idx + lat.stride(i) - lat.stride(j)));
            if adds_win && preimages_win {
                shift_max_losing.push(Coalition::from_counts(c));
            }
        }
    }
    Ok(ShiftExtremal {
        shift_min_winning,
        shift_max_losing,
    })
}
