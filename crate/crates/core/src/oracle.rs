//! Exact feasibility oracle for weightedness and rough weightedness of any
//! explicit game, representation checking, and extremal weights.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cert::RoughCert;
use crate::error::{Error, Result};
use crate::game::{maximal_losing_from, ExplicitGame};
use crate::lp::{self, LinearSystem, Optimum, Rational, Relation, Sense};
use crate::multiset::Coalition;

/// The trichotomy every game falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Class {
    Weighted,
    RoughNotWeighted,
    NotRough,
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Class::Weighted => "weighted",
            Class::RoughNotWeighted => "rough_not_weighted",
            Class::NotRough => "not_rough",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Weighted,
    Rough,
}

/// Separating constraints on level weights: minimal winning coalitions from
/// below, maximal losing ones from above. Monotonicity makes these enough.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationSystem {
    levels: usize,
    min_winning: Vec<Coalition>,
    max_losing: Vec<Coalition>,
}

fn counts_row(x: &Coalition, extra: Option<i64>) -> Vec<Rational> {
    let mut row: Vec<Rational> = x
        .counts()
        .iter()
        .map(|&c| Rational::from_integer(c.into()))
        .collect();
    if let Some(e) = extra {
        row.push(Rational::from_integer(e.into()));
    }
    row
}

impl SeparationSystem {
    pub fn build(game: &ExplicitGame) -> Result<Self> {
        if game.is_degenerate() {
            return Err(Error::Precondition(format!("{game} is degenerate")));
        }
        let table = game.winning_table()?;
        Ok(SeparationSystem {
            levels: game.levels(),
            min_winning: game.min_winning().to_vec(),
            max_losing: maximal_losing_from(&table),
        })
    }

    pub fn min_winning(&self) -> &[Coalition] {
        &self.min_winning
    }

    pub fn max_losing(&self) -> &[Coalition] {
        &self.max_losing
    }

    /// Variables `(w_1..w_m, q)`, `q` free; losing coalitions sit at least one
    /// below the quota.
    pub fn weighted_system(&self) -> LinearSystem {
        let mut sys = LinearSystem::new(self.levels + 1);
        sys.set_free(self.levels);
        for x in &self.min_winning {
            sys.push(counts_row(x, Some(-1)), Relation::Ge, Rational::zero());
        }
        for x in &self.max_losing {
            sys.push(counts_row(x, Some(-1)), Relation::Le, -Rational::one());
        }
        sys
    }

    /// Rough representations with quota fixed to one.
    pub fn rough_system(&self) -> LinearSystem {
        let mut sys = LinearSystem::new(self.levels);
        for x in &self.min_winning {
            sys.push(counts_row(x, None), Relation::Ge, Rational::one());
        }
        for x in &self.max_losing {
            sys.push(counts_row(x, None), Relation::Le, Rational::one());
        }
        sys
    }
}

pub fn oracle_weighted(game: &ExplicitGame) -> Result<Option<RoughCert>> {
    let sep = SeparationSystem::build(game)?;
    let Some(mut point) = lp::feasible_point(&sep.weighted_system()) else {
        return Ok(None);
    };
    let quota = point.pop().expect("quota variable");
    let cert = RoughCert::new(quota, point)?;
    debug_assert!(verify_representation(game, &cert, Mode::Weighted)?);
    Ok(Some(cert))
}

pub fn oracle_rough(game: &ExplicitGame) -> Result<Option<RoughCert>> {
    let sep = SeparationSystem::build(game)?;
    if let Some(point) = lp::feasible_point(&sep.rough_system()) {
        if point.iter().any(|w| w.is_positive()) {
            return Ok(Some(RoughCert::new(Rational::one(), point)?));
        }
    }
    // Quota zero forces every positively weighted player to win alone.
    let passers = game.special_players()?.passers;
    if let Some(&i) = passers.first() {
        let mut w = vec![Rational::zero(); game.levels()];
        w[i] = Rational::one();
        return Ok(Some(RoughCert::new(Rational::zero(), w)?));
    }
    Ok(None)
}

/// The oracle's verdict with its witness (a weighted representation for
/// weighted games, a rough one otherwise).
pub fn oracle_class(game: &ExplicitGame) -> Result<(Class, Option<RoughCert>)> {
    if let Some(c) = oracle_weighted(game)? {
        return Ok((Class::Weighted, Some(c)));
    }
    match oracle_rough(game)? {
        Some(c) => Ok((Class::RoughNotWeighted, Some(c))),
        None => Ok((Class::NotRough, None)),
    }
}

/// Checks `cert` against every coalition of `game`.
pub fn verify_representation(game: &ExplicitGame, cert: &RoughCert, mode: Mode) -> Result<bool> {
    if cert.levels() != game.levels() {
        return Err(Error::DimensionMismatch {
            expected: game.levels(),
            got: cert.levels(),
        });
    }
    let table = game.winning_table()?;
    let lat = table.lattice();
    let q = cert.quota();
    for (idx, counts) in lat.iter().enumerate() {
        let w = cert.weight_of(&counts);
        let wins = table.wins_at(idx);
        let ok = match mode {
            Mode::Weighted => wins == (&w >= q),
            Mode::Rough => (&w >= q || !wins) && (&w <= q || wins),
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Optimum of `objective · w` over the rough representations with quota one.
pub fn extremal_weight(game: &ExplicitGame, objective: &[Rational], sense: Sense) -> Result<Rational> {
    Ok(extremal_point(game, objective, sense)?.0)
}

/// Like [`extremal_weight`], also returning an optimal weight vector.
pub fn extremal_point(
    game: &ExplicitGame,
    objective: &[Rational],
    sense: Sense,
) -> Result<(Rational, Vec<Rational>)> {
    if objective.len() != game.levels() {
        return Err(Error::DimensionMismatch {
            expected: game.levels(),
            got: objective.len(),
        });
    }
    let sep = SeparationSystem::build(game)?;
    match lp::optimize(&sep.rough_system(), objective, sense) {
        Optimum::Infeasible => Err(Error::Infeasible),
        Optimum::Unbounded => Err(Error::Unbounded),
        Optimum::Finite { value, point } => Ok((value, point)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hierarchy::HierSpec;
    use crate::lp::testutil::{q, qi};
    use crate::multiset::Multiset;

    fn game(n: &[u32], k: &[u32]) -> ExplicitGame {
        HierSpec::disjunctive(n.to_vec(), k.to_vec())
            .unwrap()
            .realize()
            .unwrap()
    }

    fn four_singletons() -> ExplicitGame {
        ExplicitGame::new(
            Multiset::new(vec![1, 1, 1, 1]).unwrap(),
            vec![
                Coalition::from_counts(vec![1, 1, 0, 0]),
                Coalition::from_counts(vec![0, 0, 1, 1]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn weighted_examples() {
        let g = game(&[3, 3], &[2, 3]);
        let c = oracle_weighted(&g).unwrap().unwrap();
        assert!(verify_representation(&g, &c, Mode::Weighted).unwrap());
        let hand = RoughCert::new(qi(2), vec![qi(1), q(2, 3)]).unwrap();
        assert!(verify_representation(&g, &hand, Mode::Weighted).unwrap());

        assert!(oracle_weighted(&four_singletons()).unwrap().is_none());

        let maj = game(&[5], &[3]);
        let c = oracle_weighted(&maj).unwrap().unwrap();
        assert!(verify_representation(&maj, &c, Mode::Weighted).unwrap());
        let hand = RoughCert::new(qi(3), vec![qi(1)]).unwrap();
        assert!(verify_representation(&maj, &hand, Mode::Weighted).unwrap());
    }

    #[test]
    fn rough_examples() {
        let ex = game(&[3, 3, 3], &[2, 3, 5]);
        let c = oracle_rough(&ex).unwrap().unwrap();
        assert!(verify_representation(&ex, &c, Mode::Rough).unwrap());
        let paper = RoughCert::new(qi(1), vec![q(1, 2), q(1, 2), qi(0)]).unwrap();
        assert!(verify_representation(&ex, &paper, Mode::Rough).unwrap());
        let bad = RoughCert::new(qi(1), vec![q(1, 2), q(1, 2), q(1, 10)]).unwrap();
        assert!(!verify_representation(&ex, &bad, Mode::Rough).unwrap());

        let fs = four_singletons();
        assert!(oracle_rough(&fs).unwrap().is_some());
        let halves = RoughCert::new(qi(1), vec![q(1, 2); 4]).unwrap();
        assert!(verify_representation(&fs, &halves, Mode::Rough).unwrap());

        assert!(oracle_rough(&game(&[2, 2, 2, 2, 2], &[2, 3, 4, 5, 6]))
            .unwrap()
            .is_none());
    }

    #[test]
    fn passer_branch() {
        // Disjunctive with k1 = 1: level one are passers.
        let g = game(&[2, 3], &[1, 3]);
        let (class, _) = oracle_class(&g).unwrap();
        assert_ne!(class, Class::NotRough);
        let c = RoughCert::new(qi(0), vec![qi(1), qi(0)]).unwrap();
        assert!(verify_representation(&g, &c, Mode::Rough).unwrap());
    }

    #[test]
    fn unsc_weighted() {
        let g = HierSpec::conjunctive(vec![5, 10], vec![5, 9])
            .unwrap()
            .realize()
            .unwrap();
        let c = RoughCert::new(qi(39), vec![qi(7), qi(1)]).unwrap();
        assert!(verify_representation(&g, &c, Mode::Weighted).unwrap());
        assert_eq!(oracle_class(&g).unwrap().0, Class::Weighted);
    }

    #[test]
    fn extremal_examples() {
        let ex = game(&[3, 3, 3], &[2, 3, 5]);
        let obj = vec![qi(0), qi(0), qi(1)];
        assert_eq!(extremal_weight(&ex, &obj, Sense::Maximize).unwrap(), qi(0));
        let m = vec![qi(1), qi(1), qi(2)];
        assert_eq!(extremal_weight(&ex, &m, Sense::Minimize).unwrap(), qi(1));

        let g = game(&[2, 4], &[2, 4]);
        let w1 = vec![qi(1), qi(0)];
        assert_eq!(extremal_weight(&g, &w1, Sense::Maximize).unwrap(), q(1, 2));
        assert_eq!(extremal_weight(&g, &w1, Sense::Minimize).unwrap(), q(1, 2));

        let np = game(&[2, 2, 2, 2, 2], &[2, 3, 4, 5, 6]);
        assert_eq!(
            extremal_weight(&np, &[qi(1), qi(0), qi(0), qi(0), qi(0)], Sense::Maximize),
            Err(Error::Infeasible)
        );
    }

    #[test]
    fn dimension_mismatch() {
        let g = game(&[3, 3], &[2, 3]);
        let c = RoughCert::new(qi(1), vec![qi(1)]).unwrap();
        assert!(matches!(
            verify_representation(&g, &c, Mode::Rough),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
