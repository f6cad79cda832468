//! Closed-form classification of hierarchical games.
//!
//! Weighted games are recognized by the known case lists for disjunctive and
//! conjunctive games; roughly weighted ones by the rough case lists, with a
//! certificate attached to every positive verdict. Case tags (`"Thm4(2)"`,
//! `"Thm12(vi)"`, ...) name the theorem clause that matched and are part of
//! the command-line output.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::cert::RoughCert;
use crate::error::{Error, Result};
use crate::hierarchy::{HierSpec, Kind};
use crate::lp::Rational;
use crate::oracle::{self, Class};
use crate::transforms;

/// Clauses of the weighted characterizations, numbered (1)–(5).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WeightedRule {
    /// (1) a single level.
    SingleLevel,
    /// (2) two levels with `k2 = k1 + 1`.
    AdjacentThresholds,
    /// (3) two levels with `n2 = k2 - k1 + 1`.
    TightSecondLevel,
    /// (4) the first level consists of passers (disjunctive) or blockers
    /// (conjunctive), and what remains is weighted.
    TrivialFirstLevel,
    /// (5) the last level consists of dummies and the truncation is weighted.
    DummyLastLevel,
}

impl WeightedRule {
    fn number(self) -> u8 {
        match self {
            WeightedRule::SingleLevel => 1,
            WeightedRule::AdjacentThresholds => 2,
            WeightedRule::TightSecondLevel => 3,
            WeightedRule::TrivialFirstLevel => 4,
            WeightedRule::DummyLastLevel => 5,
        }
    }
}

/// Clauses of the rough characterizations, (i)–(vii).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RoughRule {
    /// (i) passers (disjunctive) or blockers (conjunctive) on the first level.
    TrivialFirstLevel,
    /// (ii) `k = (2, 4)` and its dual.
    TwoFour,
    /// (iii) `k = (k, k+2)` with `n2 = 4` and its dual.
    GapTwo,
    /// (iv) `k = (2, 3, 4)` and its dual.
    TwoThreeFour,
    /// (v) `k = (k, k+1, k+2)`, `n3 = 2`, with `n2 = 2`.
    ConsecutiveNarrow,
    /// (v) `k = (k, k+1, k+2)`, `n3 = 2`, with `n2 >= 3`.
    ConsecutiveWide,
    /// (vi) `k = (k, k+1, k3)` with `n3 = k3 - k >= 3`.
    LongTail,
    /// (vii) dummy last level over a roughly weighted truncation.
    DummyLastLevel,
}

impl RoughRule {
    fn label(self, kind: Kind) -> &'static str {
        match (self, kind) {
            (RoughRule::TrivialFirstLevel, _) => "i",
            (RoughRule::TwoFour, _) => "ii",
            (RoughRule::GapTwo, _) => "iii",
            (RoughRule::TwoThreeFour, _) => "iv",
            (RoughRule::ConsecutiveNarrow, Kind::Disjunctive) => "v",
            (RoughRule::ConsecutiveWide, Kind::Disjunctive) => "v",
            (RoughRule::ConsecutiveNarrow, Kind::Conjunctive) => "va",
            (RoughRule::ConsecutiveWide, Kind::Conjunctive) => "vb",
            (RoughRule::LongTail, _) => "vi",
            (RoughRule::DummyLastLevel, _) => "vii",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Case {
    Weighted(Kind, WeightedRule),
    Rough(Kind, RoughRule),
    Unmatched,
}

impl Case {
    pub fn tag(&self) -> String {
        match self {
            Case::Weighted(Kind::Disjunctive, r) => format!("Thm4({})", r.number()),
            Case::Weighted(Kind::Conjunctive, r) => format!("Thm5({})", r.number()),
            Case::Rough(Kind::Disjunctive, r) => format!("Thm12({})", r.label(Kind::Disjunctive)),
            Case::Rough(Kind::Conjunctive, r) => format!("Thm13({})", r.label(Kind::Conjunctive)),
            Case::Unmatched => "none".into(),
        }
    }

    /// Inverse of [`Case::tag`]. The disjunctive `(v)` tag parses to the
    /// narrow variant.
    pub fn parse(tag: &str) -> Result<Case> {
        let unknown = || Error::UnknownCase(tag.to_string());
        if tag == "none" {
            return Ok(Case::Unmatched);
        }
        let (head, rest) = tag.split_once('(').ok_or_else(unknown)?;
        let label = rest.strip_suffix(')').ok_or_else(unknown)?;
        let weighted = |kind| {
            let rule = match label {
                "1" => WeightedRule::SingleLevel,
                "2" => WeightedRule::AdjacentThresholds,
                "3" => WeightedRule::TightSecondLevel,
                "4" => WeightedRule::TrivialFirstLevel,
                "5" => WeightedRule::DummyLastLevel,
                _ => return Err(unknown()),
            };
            Ok(Case::Weighted(kind, rule))
        };
        let rough = |kind| {
            let rule = match (label, kind) {
                ("i", _) => RoughRule::TrivialFirstLevel,
                ("ii", _) => RoughRule::TwoFour,
                ("iii", _) => RoughRule::GapTwo,
                ("iv", _) => RoughRule::TwoThreeFour,
                ("v", Kind::Disjunctive) => RoughRule::ConsecutiveNarrow,
                ("va", Kind::Conjunctive) => RoughRule::ConsecutiveNarrow,
                ("vb", Kind::Conjunctive) => RoughRule::ConsecutiveWide,
                ("vi", _) => RoughRule::LongTail,
                ("vii", _) => RoughRule::DummyLastLevel,
                _ => return Err(unknown()),
            };
            Ok(Case::Rough(kind, rule))
        };
        match head {
            "Thm4" => weighted(Kind::Disjunctive),
            "Thm5" => weighted(Kind::Conjunctive),
            "Thm12" => rough(Kind::Disjunctive),
            "Thm13" => rough(Kind::Conjunctive),
            _ => Err(unknown()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub class: Class,
    pub matched_case: String,
    /// For the dummy-level clauses, the case matched by the truncation.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sub_case: Option<String>,
    pub certificate: Option<RoughCert>,
    /// Conjunctive rough verdicts only: whether a literal reading of the
    /// conjunctive rough case list gives the same answer.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub literal_case_agrees: Option<bool>,
}

fn frac(a: u32, b: u32) -> Rational {
    Rational::new(BigInt::from(a), BigInt::from(b))
}

/// Canonical form used by the case lists, with an over-large disjunctive last
/// threshold clamped to the dummy bound.
fn prepare(spec: &HierSpec) -> Result<HierSpec> {
    let report = spec.require_canonical()?;
    Ok(report.normalized_spec)
}

fn weighted_disjunctive(n: &[u32], k: &[u32]) -> Option<WeightedRule> {
    let m = k.len();
    if m == 1 {
        return Some(WeightedRule::SingleLevel);
    }
    if m == 2 && k[1] == k[0] + 1 {
        return Some(WeightedRule::AdjacentThresholds);
    }
    if m == 2 && n[1] == k[1] - k[0] + 1 {
        return Some(WeightedRule::TightSecondLevel);
    }
    if k[0] == 1 {
        // With passers on top, the game is weighted iff the game on the
        // remaining two levels, thresholds (k2, k3), is.
        if m == 2 || (m == 3 && (k[2] == k[1] + 1 || n[2] == k[2] - k[1] + 1)) {
            return Some(WeightedRule::TrivialFirstLevel);
        }
    }
    if (2..=4).contains(&m)
        && k[m - 1] == k[m - 2] + n[m - 1]
        && weighted_disjunctive(&n[..m - 1], &k[..m - 1])
            .is_some_and(|r| r != WeightedRule::DummyLastLevel)
    {
        return Some(WeightedRule::DummyLastLevel);
    }
    None
}

fn weighted_conjunctive(n: &[u32], k: &[u32]) -> Option<WeightedRule> {
    let m = k.len();
    if m == 1 {
        return Some(WeightedRule::SingleLevel);
    }
    if m == 2 && k[1] == k[0] + 1 {
        return Some(WeightedRule::AdjacentThresholds);
    }
    if m == 2 && n[1] == k[1] - k[0] + 1 {
        return Some(WeightedRule::TightSecondLevel);
    }
    if k[0] == n[0] {
        // Reduced game on levels two and three: thresholds (k2-k1, k3-k1).
        if m == 2 || (m == 3 && (k[2] == k[1] + 1 || n[2] == k[2] - k[1] + 1)) {
            return Some(WeightedRule::TrivialFirstLevel);
        }
    }
    if (2..=4).contains(&m)
        && k[m - 1] == k[m - 2]
        && weighted_conjunctive(&n[..m - 1], &k[..m - 1])
            .is_some_and(|r| r != WeightedRule::DummyLastLevel)
    {
        return Some(WeightedRule::DummyLastLevel);
    }
    None
}

/// Rough clauses (i)–(vii) for a disjunctive `(n, k)`, first match wins.
/// Clause (iv) also admits `n3 = 2`, where `(2, 3, 4)` is roughly weighted
/// with weights `(1/2, 1/2, 0)`.
fn rough_disjunctive(n: &[u32], k: &[u32]) -> Option<RoughRule> {
    let m = k.len();
    if k[0] == 1 {
        return Some(RoughRule::TrivialFirstLevel);
    }
    if m == 2 && k == [2, 4] && n[0] >= 2 && n[1] >= 4 {
        return Some(RoughRule::TwoFour);
    }
    if m == 2 && k[0] > 2 && k[1] == k[0] + 2 && n[0] >= k[0] && n[1] == 4 {
        return Some(RoughRule::GapTwo);
    }
    if m == 3 && k == [2, 3, 4] && n[0] >= 2 && ((n[1] == 2 && n[2] >= 3) || n[2] == 2) {
        return Some(RoughRule::TwoThreeFour);
    }
    if m == 3 && k[0] > 2 && k[0] <= n[0] && k[1] == k[0] + 1 && k[2] == k[0] + 2 && n[2] == 2 {
        return Some(if n[1] == 2 {
            RoughRule::ConsecutiveNarrow
        } else {
            RoughRule::ConsecutiveWide
        });
    }
    if m == 3 && k[0] >= 2 && k[0] <= n[0] && k[1] == k[0] + 1 && k[2] >= k[0] + 3 && n[2] == k[2] - k[0] {
        return Some(RoughRule::LongTail);
    }
    if m >= 2
        && k[m - 1] == k[m - 2] + n[m - 1]
        && rough_disjunctive(&n[..m - 1], &k[..m - 1])
            .is_some_and(|r| r != RoughRule::DummyLastLevel)
    {
        return Some(RoughRule::DummyLastLevel);
    }
    None
}

/// The conjunctive rough case list read word for word. Where the text is
/// ambiguous, clause (vb)'s trailing `n3 >= 3` is read as `n2 >= 3` (it
/// already fixes `n3 = 2`) and clause (vi)'s unbound `k` as `k1`.
fn rough_conjunctive_literal(n: &[u32], k: &[u32]) -> bool {
    let m = k.len();
    if k[0] == n[0] {
        return true;
    }
    let (n1, k1) = (n[0], k[0]);
    if m == 2 {
        if n1 >= 2 && n[1] >= 4 && k1 + 1 == n1 && k[1] + 3 == n1 + n[1] {
            return true;
        }
        if k1 >= 1 && k1 + 1 < n1 && k[1] == k1 + 2 && n[1] == 4 {
            return true;
        }
    }
    if m == 3 {
        if n[1] == 2 && n1 >= 2 && n[2] >= 3 && k1 + 1 == n1 && k[1] == n1 && k[2] + 1 == n1 + n[2] {
            return true;
        }
        if n[1] == 2 && n[2] == 2 && k1 >= 1 && k1 + 1 < n1 && k[1] == k1 + 1 && k[2] == k1 + 2 {
            return true;
        }
        if n[2] == 2 && n[1] >= 3 && k[2] == k[1] + 1 && k[1] - k1 + 1 == n[1] && k1 >= 1 && k1 + 1 < n1 {
            return true;
        }
        if k[2] == k[1] + 1 && k1 >= 1 && k1 < n1 && n[1] >= 3 {
            return true;
        }
    }
    m >= 2 && k[m - 1] == k[m - 2] && rough_conjunctive_literal(&n[..m - 1], &k[..m - 1])
}

/// Weightedness by the case lists. Conjunctive answers are checked against
/// the disjunctive list on the dual spec.
pub fn classify_weighted(spec: &HierSpec) -> Result<(bool, Case)> {
    let spec = prepare(spec)?;
    match spec.kind() {
        Kind::Disjunctive => Ok(match weighted_disjunctive(spec.n(), spec.k()) {
            Some(r) => (true, Case::Weighted(Kind::Disjunctive, r)),
            None => (false, Case::Unmatched),
        }),
        Kind::Conjunctive => {
            let own = weighted_conjunctive(spec.n(), spec.k());
            let dual = transforms::dual_spec(&spec)?;
            let via_dual = weighted_disjunctive(dual.n(), dual.k());
            if own.is_some() != via_dual.is_some() {
                return Err(Error::Validation(format!(
                    "weighted verdict for {spec} ({}) disagrees with its dual {dual} ({})",
                    own.is_some(),
                    via_dual.is_some()
                )));
            }
            Ok(match own {
                Some(r) => (true, Case::Weighted(Kind::Conjunctive, r)),
                None => (false, Case::Unmatched),
            })
        }
    }
}

/// Full verdict with certificate.
pub fn classify_rough(spec: &HierSpec) -> Result<Verdict> {
    let spec = prepare(spec)?;
    let (weighted, wcase) = classify_weighted(&spec)?;
    if weighted {
        let sub_case = sub_case_of(&spec, wcase)?;
        return Ok(Verdict {
            class: Class::Weighted,
            matched_case: wcase.tag(),
            sub_case,
            certificate: Some(weighted_certificate(&spec)?),
            literal_case_agrees: None,
        });
    }
    let (case, literal) = match spec.kind() {
        Kind::Disjunctive => (
            rough_disjunctive(spec.n(), spec.k())
                .map_or(Case::Unmatched, |r| Case::Rough(Kind::Disjunctive, r)),
            None,
        ),
        Kind::Conjunctive => {
            let dual = transforms::dual_spec(&spec)?;
            let case = rough_disjunctive(dual.n(), dual.k())
                .map_or(Case::Unmatched, |r| Case::Rough(Kind::Conjunctive, r));
            let literal = rough_conjunctive_literal(spec.n(), spec.k());
            (case, Some(literal == (case != Case::Unmatched)))
        }
    };
    if case == Case::Unmatched {
        return Ok(Verdict {
            class: Class::NotRough,
            matched_case: case.tag(),
            sub_case: None,
            certificate: None,
            literal_case_agrees: literal,
        });
    }
    Ok(Verdict {
        class: Class::RoughNotWeighted,
        matched_case: case.tag(),
        sub_case: sub_case_of(&spec, case)?,
        certificate: Some(certificate_for(&spec, case)?),
        literal_case_agrees: literal,
    })
}

fn truncate(spec: &HierSpec) -> Result<HierSpec> {
    let m = spec.levels();
    HierSpec::new(spec.kind(), spec.n()[..m - 1].to_vec(), spec.k()[..m - 1].to_vec())
}

fn sub_case_of(spec: &HierSpec, case: Case) -> Result<Option<String>> {
    let inner = match case {
        Case::Weighted(kind, WeightedRule::DummyLastLevel) => {
            let t = truncate(spec)?;
            let rule = match kind {
                Kind::Disjunctive => weighted_disjunctive(t.n(), t.k()),
                Kind::Conjunctive => weighted_conjunctive(t.n(), t.k()),
            };
            rule.map(|r| Case::Weighted(kind, r))
        }
        Case::Rough(kind, RoughRule::DummyLastLevel) => {
            let t = match kind {
                Kind::Disjunctive => truncate(spec)?,
                Kind::Conjunctive => truncate(&transforms::dual_spec(spec)?)?,
            };
            rough_disjunctive(t.n(), t.k()).map(|r| Case::Rough(kind, r))
        }
        _ => None,
    };
    Ok(inner.map(|c| c.tag()))
}

fn weighted_certificate(spec: &HierSpec) -> Result<RoughCert> {
    oracle::oracle_weighted(&spec.realize()?)?.ok_or_else(|| {
        Error::Validation(format!("{spec} matched a weighted case but has no weighted representation"))
    })
}

/// Closed-form rough weights for a disjunctive spec under `rule`.
fn disjunctive_rough_cert(n: &[u32], k: &[u32], rule: RoughRule) -> Result<RoughCert> {
    let mismatch = || {
        Error::Precondition(format!(
            "n={n:?}, k={k:?} does not fall under rough clause {}",
            rule.label(Kind::Disjunctive)
        ))
    };
    if rough_disjunctive(n, k) != Some(rule)
        && !(matches!(rule, RoughRule::ConsecutiveNarrow | RoughRule::ConsecutiveWide)
            && matches!(
                rough_disjunctive(n, k),
                Some(RoughRule::ConsecutiveNarrow | RoughRule::ConsecutiveWide)
            ))
    {
        return Err(mismatch());
    }
    let one = Rational::one;
    let zero = Rational::zero;
    let m = k.len();
    let (q, w) = match rule {
        RoughRule::TrivialFirstLevel => {
            let mut w = vec![zero(); m];
            w[0] = one();
            (zero(), w)
        }
        RoughRule::TwoFour => (one(), vec![frac(1, 2), frac(1, 4)]),
        RoughRule::GapTwo => (one(), vec![frac(1, k[0]), frac(1, 2 * k[0])]),
        RoughRule::TwoThreeFour if n[2] == 2 => (one(), vec![frac(1, 2), frac(1, 2), zero()]),
        RoughRule::TwoThreeFour => (one(), vec![frac(1, 2), frac(1, 4), frac(1, 4)]),
        RoughRule::ConsecutiveNarrow | RoughRule::ConsecutiveWide | RoughRule::LongTail => {
            (one(), vec![frac(1, k[0]), frac(1, k[0]), zero()])
        }
        RoughRule::DummyLastLevel => {
            let (tn, tk) = (&n[..m - 1], &k[..m - 1]);
            let inner = rough_disjunctive(tn, tk).ok_or_else(mismatch)?;
            return Ok(disjunctive_rough_cert(tn, tk, inner)?.with_zero_level());
        }
    };
    RoughCert::new(q, w)
}

fn certificate_for(spec: &HierSpec, case: Case) -> Result<RoughCert> {
    match case {
        Case::Weighted(kind, _) if kind == spec.kind() => weighted_certificate(spec),
        Case::Rough(Kind::Disjunctive, rule) if spec.kind() == Kind::Disjunctive => {
            disjunctive_rough_cert(spec.n(), spec.k(), rule)
        }
        Case::Rough(Kind::Conjunctive, rule) if spec.kind() == Kind::Conjunctive => {
            let dual = transforms::dual_spec(spec)?;
            let c = disjunctive_rough_cert(dual.n(), dual.k(), rule)?;
            transforms::dual_cert(dual.universe(), &c)
        }
        Case::Unmatched => Err(Error::Precondition(format!(
            "{spec} matched no case, so there is nothing to certify"
        ))),
        _ => Err(Error::Precondition(format!(
            "case {} does not apply to a {} spec",
            case.tag(),
            spec.kind()
        ))),
    }
}

/// Certificate for `spec` under the case named by `tag`: the exact LP
/// solution for weighted cases, closed-form weights for rough ones.
pub fn synthesize_certificate(spec: &HierSpec, tag: &str) -> Result<RoughCert> {
    let case = Case::parse(tag)?;
    let spec = prepare(spec)?;
    certificate_for(&spec, case)
}
