//! Duality, the threshold transform `k -> k*`, and minors (subgames and
//! reduced games).

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cert::RoughCert;
use crate::error::{Error, Result};
use crate::game::ExplicitGame;
use crate::hierarchy::{HierSpec, Kind};
use crate::lp::Rational;
use crate::multiset::{Coalition, Multiset};

/// The game whose winning coalitions are the complements of losing ones.
pub fn dual_explicit(game: &ExplicitGame) -> Result<ExplicitGame> {
    let table = game.winning_table()?;
    let full = game.universe().counts().to_vec();
    ExplicitGame::from_predicate(game.universe().clone(), |c| {
        let comp: Vec<u32> = full.iter().zip(c).map(|(n, l)| n - l).collect();
        !table.wins(&comp)
    })
}

/// `k*_i = n_1 + ... + n_i - k_i + 1`.
pub fn k_star(n: &[u32], k: &[u32]) -> Result<Vec<u32>> {
    if n.len() != k.len() {
        return Err(Error::DimensionMismatch {
            expected: n.len(),
            got: k.len(),
        });
    }
    let mut prefix = 0i64;
    n.iter()
        .zip(k)
        .map(|(&ni, &ki)| {
            prefix += i64::from(ni);
            let v = prefix - i64::from(ki) + 1;
            u32::try_from(v)
                .ok()
                .filter(|&v| v >= 1)
                .ok_or_else(|| {
                    Error::InvalidSpec(format!("threshold {ki} exceeds prefix sum {prefix}"))
                })
        })
        .collect()
}

/// `H_exists(n, k)* = H_forall(n, k*)` and vice versa, for canonical specs.
/// A disjunctive last level beyond the dummy bound is clamped first.
pub fn dual_spec(spec: &HierSpec) -> Result<HierSpec> {
    let spec = spec.require_canonical()?.normalized_spec;
    let ks = k_star(spec.n(), spec.k())?;
    HierSpec::new(spec.kind().flip(), spec.n().to_vec(), ks)
}

/// Dual rough representation `[w(P) - q; w]`, rescaled to quota one when
/// that quota is positive.
pub fn dual_cert(universe: &Multiset, cert: &RoughCert) -> Result<RoughCert> {
    if cert.levels() != universe.levels() {
        return Err(Error::DimensionMismatch {
            expected: universe.levels(),
            got: cert.levels(),
        });
    }
    let total = cert.weight_of(universe.counts());
    let quota = total - cert.quota();
    if quota.is_negative() {
        return Err(Error::Validation(format!(
            "{cert} gives the full coalition less than the quota"
        )));
    }
    Ok(RoughCert::new(quota, cert.weights().to_vec())?.normalized())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MinorKind {
    /// Players in `removed` are absent.
    Subgame,
    /// Players in `removed` are present.
    Reduced,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MinorStep {
    pub kind: MinorKind,
    pub removed: Coalition,
}

impl MinorStep {
    pub fn subgame(removed: Coalition) -> Self {
        MinorStep {
            kind: MinorKind::Subgame,
            removed,
        }
    }

    pub fn reduced(removed: Coalition) -> Self {
        MinorStep {
            kind: MinorKind::Reduced,
            removed,
        }
    }
}

/// Levels of `universe` that keep at least one player after removing `removed`.
pub fn retained_levels(universe: &Multiset, removed: &Coalition) -> Vec<usize> {
    (0..universe.levels())
        .filter(|&i| universe.count(i) > removed.count(i))
        .collect()
}

/// `G_A` or `G^A` on the remaining players; emptied levels are dropped.
pub fn minor(game: &ExplicitGame, step: &MinorStep) -> Result<ExplicitGame> {
    let universe = game.universe();
    universe.check(&step.removed)?;
    let keep = retained_levels(universe, &step.removed);
    if keep.is_empty() {
        return Err(Error::Precondition(
            "minor would remove every player".into(),
        ));
    }
    let rest = universe.complement(&step.removed);
    let sub_universe = Multiset::new(keep.iter().map(|&i| rest.count(i)).collect())?;
    let table = game.winning_table()?;
    let base: Vec<u32> = match step.kind {
        MinorKind::Subgame => vec![0; universe.levels()],
        MinorKind::Reduced => step.removed.counts().to_vec(),
    };
    ExplicitGame::from_predicate(sub_universe, |c| {
        let mut full = base.clone();
        for (&i, &l) in keep.iter().zip(c) {
            full[i] += l;
        }
        table.wins(&full)
    })
}

/// Lemma-style transfer of a rough representation to a minor: same weights
/// on retained levels; quota `q` for subgames and `max(0, q - w(A))` for
/// reduced games. `None` when no retained level has positive weight.
pub fn transfer_cert(cert: &RoughCert, universe: &Multiset, step: &MinorStep) -> Option<RoughCert> {
    let keep = retained_levels(universe, &step.removed);
    let weights: Vec<Rational> = keep.iter().map(|&i| cert.weights()[i].clone()).collect();
    if !weights.iter().any(|w| w.is_positive()) {
        return None;
    }
    let quota = match step.kind {
        MinorKind::Subgame => cert.quota().clone(),
        MinorKind::Reduced => {
            let q = cert.quota() - cert.weight(&step.removed);
            if q.is_negative() {
                Rational::zero()
            } else {
                q
            }
        }
    };
    RoughCert::new(quota, weights).ok()
}

/// True when `fine` is `coarse` with some levels split: `grouping[j]` names
/// the level of `coarse` that level `j` of `fine` belongs to.
pub fn equals_grouped(fine: &ExplicitGame, coarse: &ExplicitGame, grouping: &[usize]) -> Result<bool> {
    if grouping.len() != fine.levels() {
        return Err(Error::DimensionMismatch {
            expected: fine.levels(),
            got: grouping.len(),
        });
    }
    let mut sums = vec![0u32; coarse.levels()];
    for (j, &g) in grouping.iter().enumerate() {
        if g >= coarse.levels() {
            return Err(Error::LevelOutOfRange {
                level: g + 1,
                levels: coarse.levels(),
            });
        }
        sums[g] += fine.universe().count(j);
    }
    if sums != coarse.universe().counts() {
        return Ok(false);
    }
    let ft = fine.winning_table()?;
    let ct = coarse.winning_table()?;
    let same = ft.lattice().iter().enumerate().all(|(idx, c)| {
        let mut s = vec![0u32; coarse.levels()];
        for (j, &g) in grouping.iter().enumerate() {
            s[g] += c[j];
        }
        ft.wins_at(idx) == ct.wins(&s)
    });
    Ok(same)
}

/// A hierarchical minor together with how to obtain it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedMinor {
    pub name: String,
    pub spec: HierSpec,
    pub step: MinorStep,
    /// For each retained level of the source, the level of `spec` it lands in.
    pub grouping: Vec<usize>,
}

fn canonical_or_none(n: Vec<u32>, k: Vec<u32>) -> Option<HierSpec> {
    let spec = HierSpec::disjunctive(n, k).ok()?;
    spec.canon_check().canonical.then_some(spec)
}

pub fn cut_tail(spec: &HierSpec) -> Option<NamedMinor> {
    let m = spec.levels();
    if spec.kind() != Kind::Disjunctive || m < 2 {
        return None;
    }
    let out = canonical_or_none(spec.n()[..m - 1].to_vec(), spec.k()[..m - 1].to_vec())?;
    let mut removed = vec![0; m];
    removed[m - 1] = spec.n()[m - 1];
    Some(NamedMinor {
        name: "cut_tail".into(),
        spec: out,
        step: MinorStep::subgame(Coalition::from_counts(removed)),
        grouping: (0..m - 1).collect(),
    })
}

pub fn cut_head(spec: &HierSpec) -> Option<NamedMinor> {
    let (n, k) = (spec.n(), spec.k());
    let m = spec.levels();
    if spec.kind() != Kind::Disjunctive || m < 2 || k[0] > n[0] {
        return None;
    }
    let mut n2 = vec![n[1] + k[0] - 1];
    n2.extend_from_slice(&n[2..]);
    let out = canonical_or_none(n2, k[1..].to_vec())?;
    let mut removed = vec![0; m];
    removed[0] = n[0] - k[0] + 1;
    let mut grouping: Vec<usize> = if k[0] > 1 { vec![0] } else { vec![] };
    grouping.extend((1..m).map(|i| i - 1));
    Some(NamedMinor {
        name: "cut_head".into(),
        spec: out,
        step: MinorStep::subgame(Coalition::from_counts(removed)),
        grouping,
    })
}

/// Reduced game by one player of level `i` (0-based), available when
/// `k_i > k_{i-1} + 1` with `k_{-1} = 0`.
pub fn remove_one(spec: &HierSpec, i: usize) -> Option<NamedMinor> {
    let (n, k) = (spec.n(), spec.k());
    let m = spec.levels();
    if spec.kind() != Kind::Disjunctive || i >= m {
        return None;
    }
    let prev = if i == 0 { 0 } else { k[i - 1] };
    if k[i] <= prev + 1 || n[i] < 2 {
        return None;
    }
    let mut n2 = n.to_vec();
    n2[i] -= 1;
    let k2: Vec<u32> = k
        .iter()
        .enumerate()
        .map(|(j, &t)| if j >= i { t - 1 } else { t })
        .collect();
    let out = canonical_or_none(n2, k2)?;
    let mut removed = vec![0; m];
    removed[i] = 1;
    Some(NamedMinor {
        name: format!("remove_one:{}", i + 1),
        spec: out,
        step: MinorStep::reduced(Coalition::from_counts(removed)),
        grouping: (0..m).collect(),
    })
}

/// The two-level subgame on levels `i, i+1` (0-based): the bottom-most
/// `k_{i-1} - 1` players above level `i` stay and merge into it, everything
/// else outside the window is removed.
pub fn consecutive_window(spec: &HierSpec, i: usize) -> Option<NamedMinor> {
    let (n, k) = (spec.n(), spec.k());
    let m = spec.levels();
    if spec.kind() != Kind::Disjunctive || i + 1 >= m {
        return None;
    }
    let mut keep_above = if i == 0 { 0 } else { k[i - 1] - 1 };
    let mut removed = n.to_vec();
    removed[i] = 0;
    removed[i + 1] = 0;
    for j in (0..i).rev() {
        let take = keep_above.min(n[j]);
        removed[j] -= take;
        keep_above -= take;
    }
    if keep_above > 0 {
        return None;
    }
    let merged = n[i] + if i == 0 { 0 } else { k[i - 1] - 1 };
    let out = canonical_or_none(vec![merged, n[i + 1]], vec![k[i], k[i + 1]])?;
    let grouping: Vec<usize> = (0..m)
        .filter(|&j| n[j] > removed[j])
        .map(|j| if j <= i { 0 } else { 1 })
        .collect();
    Some(NamedMinor {
        name: format!("window:{}", i + 1),
        spec: out,
        step: MinorStep::subgame(Coalition::from_counts(removed)),
        grouping,
    })
}

/// `cut_tail`, `cut_head` and every applicable `remove_one` of a canonical
/// disjunctive spec. Minors that are invalid or not canonical are omitted.
pub fn named_minors(spec: &HierSpec) -> Result<Vec<NamedMinor>> {
    if spec.kind() != Kind::Disjunctive {
        return Err(Error::Precondition("named minors need a disjunctive spec".into()));
    }
    spec.require_canonical()?;
    let mut out = Vec::new();
    out.extend(cut_tail(spec));
    out.extend(cut_head(spec));
    out.extend((0..spec.levels()).filter_map(|i| remove_one(spec, i)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::testutil::{q, qi};

    fn dj(n: &[u32], k: &[u32]) -> HierSpec {
        HierSpec::disjunctive(n.to_vec(), k.to_vec()).unwrap()
    }

    fn cj(n: &[u32], k: &[u32]) -> HierSpec {
        HierSpec::conjunctive(n.to_vec(), k.to_vec()).unwrap()
    }

    fn coal(c: &[u32]) -> Coalition {
        Coalition::from_counts(c.to_vec())
    }

    #[test]
    fn dual_examples() {
        let g = ExplicitGame::new(Multiset::new(vec![2]).unwrap(), vec![coal(&[2])]).unwrap();
        let d = dual_explicit(&g).unwrap();
        assert_eq!(d.min_winning(), &[coal(&[1])]);

        let dict = ExplicitGame::new(Multiset::new(vec![1, 1]).unwrap(), vec![coal(&[1, 0])]).unwrap();
        assert_eq!(dual_explicit(&dict).unwrap(), dict);

        let g = dj(&[3, 3], &[2, 3]).realize().unwrap();
        assert_eq!(dual_explicit(&dual_explicit(&g).unwrap()).unwrap(), g);
    }

    #[test]
    fn k_star_examples() {
        assert_eq!(k_star(&[3, 3, 3], &[2, 3, 5]).unwrap(), vec![2, 4, 5]);
        assert_eq!(k_star(&[2, 4], &[2, 4]).unwrap(), vec![1, 3]);
        assert!(k_star(&[2], &[1, 2]).is_err());
    }

    #[test]
    fn dual_spec_examples() {
        assert_eq!(dual_spec(&dj(&[3, 3, 3], &[2, 3, 5])).unwrap(), cj(&[3, 3, 3], &[2, 4, 5]));
        assert_eq!(dual_spec(&cj(&[5, 10], &[5, 9])).unwrap(), dj(&[5, 10], &[1, 7]));
        assert_eq!(dual_spec(&dj(&[2, 4], &[2, 4])).unwrap(), cj(&[2, 4], &[1, 3]));
        for s in [dj(&[3, 3, 3], &[2, 3, 5]), cj(&[5, 10], &[5, 9]), dj(&[2, 2], &[2, 4])] {
            let d = dual_spec(&s).unwrap();
            assert_eq!(
                d.realize().unwrap(),
                dual_explicit(&s.realize().unwrap()).unwrap(),
                "{s}"
            );
        }
    }

    #[test]
    fn dual_cert_example() {
        let u = Multiset::new(vec![3, 3, 3]).unwrap();
        let c = RoughCert::new(qi(1), vec![q(1, 2), q(1, 2), qi(0)]).unwrap();
        let d = dual_cert(&u, &c).unwrap();
        assert_eq!(d.quota(), &qi(1));
        assert_eq!(d.weights(), &[q(1, 4), q(1, 4), qi(0)]);
        let dual = cj(&[3, 3, 3], &[2, 4, 5]).realize().unwrap();
        assert!(crate::oracle::verify_representation(&dual, &d, crate::oracle::Mode::Rough).unwrap());
    }

    #[test]
    fn minor_examples() {
        let g = dj(&[3, 3, 3], &[2, 3, 5]).realize().unwrap();
        let sub = minor(&g, &MinorStep::subgame(coal(&[0, 0, 3]))).unwrap();
        assert_eq!(sub, dj(&[3, 3], &[2, 3]).realize().unwrap());
        assert_eq!(minor(&g, &MinorStep::reduced(coal(&[0, 0, 0]))).unwrap(), g);
        let red = minor(&g, &MinorStep::reduced(coal(&[0, 0, 1]))).unwrap();
        assert_eq!(red, dj(&[3, 3, 2], &[2, 3, 4]).realize().unwrap());
        assert!(minor(&g, &MinorStep::subgame(coal(&[4, 0, 0]))).is_err());
    }

    #[test]
    fn named_minor_examples() {
        let s = dj(&[3, 3, 3], &[2, 3, 5]);
        let all = named_minors(&s).unwrap();
        let get = |name: &str| all.iter().find(|m| m.name == name).unwrap().spec.clone();
        assert_eq!(get("cut_head"), dj(&[4, 3], &[3, 5]));
        assert_eq!(get("cut_tail"), dj(&[3, 3], &[2, 3]));
        assert_eq!(get("remove_one:3"), dj(&[3, 3, 2], &[2, 3, 4]));
        // k_2 = k_1 + 1: no remove_one at level two.
        assert!(all.iter().all(|m| m.name != "remove_one:2"));
        let g = s.realize().unwrap();
        for nm in &all {
            let mg = minor(&g, &nm.step).unwrap();
            assert!(equals_grouped(&mg, &nm.spec.realize().unwrap(), &nm.grouping).unwrap(), "{}", nm.name);
        }
    }

    #[test]
    fn windows_are_subgames() {
        let s = dj(&[3, 4, 4, 3], &[2, 5, 7, 9]);
        let g = s.realize().unwrap();
        for i in 0..3 {
            let w = consecutive_window(&s, i).unwrap();
            assert_eq!(w.spec.k(), &s.k()[i..i + 2]);
            let mg = minor(&g, &w.step).unwrap();
            assert!(equals_grouped(&mg, &w.spec.realize().unwrap(), &w.grouping).unwrap(), "window {i}");
        }
    }

    #[test]
    fn cert_transfer() {
        let g = dj(&[3, 3, 3], &[2, 3, 5]).realize().unwrap();
        let c = RoughCert::new(qi(1), vec![q(1, 2), q(1, 2), qi(0)]).unwrap();
        let step = MinorStep::reduced(coal(&[1, 0, 0]));
        let t = transfer_cert(&c, g.universe(), &step).unwrap();
        assert_eq!(t.quota(), &q(1, 2));
        let only_dummy = MinorStep::subgame(coal(&[3, 3, 0]));
        assert!(transfer_cert(&c, g.universe(), &only_dummy).is_none());
    }
}
