//! Fourier–Motzkin elimination with back-substitution.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use super::{LinearSystem, Optimum, Rational, Relation, Sense};

pub enum Outcome<T> {
    Done(T),
    /// An elimination step would exceed the row budget.
    TooLarge,
}

/// `coeffs · x <= rhs`
#[derive(Debug, Clone)]
struct Ineq {
    coeffs: Vec<Rational>,
    rhs: Rational,
}

enum Step {
    Rows(Vec<Ineq>),
    Infeasible,
    TooLarge,
}

/// All rows as `<=`, plus `-x_j <= 0` for sign-constrained variables.
fn to_le_rows(sys: &LinearSystem, extra_vars: usize) -> Vec<Ineq> {
    let width = sys.vars() + extra_vars;
    let widen = |c: &[Rational]| -> Vec<Rational> {
        let mut v = vec![Rational::zero(); extra_vars];
        v.extend(c.iter().cloned());
        debug_assert_eq!(v.len(), width);
        v
    };
    let mut out = Vec::new();
    for r in sys.rows() {
        let c = widen(&r.coeffs);
        if matches!(r.rel, Relation::Le | Relation::Eq) {
            out.push(Ineq {
                coeffs: c.clone(),
                rhs: r.rhs.clone(),
            });
        }
        if matches!(r.rel, Relation::Ge | Relation::Eq) {
            out.push(Ineq {
                coeffs: c.iter().map(|v| -v).collect(),
                rhs: -r.rhs.clone(),
            });
        }
    }
    for j in 0..sys.vars() {
        if !sys.is_free(j) {
            let mut c = vec![Rational::zero(); width];
            c[extra_vars + j] = -Rational::one();
            out.push(Ineq {
                coeffs: c,
                rhs: Rational::zero(),
            });
        }
    }
    out
}

/// Scales so the first nonzero coefficient has magnitude one, drops constant
/// rows, and keeps the tightest row per direction.
fn tidy(rows: Vec<Ineq>) -> Step {
    let mut best: BTreeMap<Vec<Rational>, Rational> = BTreeMap::new();
    for r in rows {
        let Some(lead) = r.coeffs.iter().find(|c| !c.is_zero()).map(|c| c.abs()) else {
            if r.rhs.is_negative() {
                return Step::Infeasible;
            }
            continue;
        };
        let coeffs: Vec<Rational> = r.coeffs.iter().map(|c| c / &lead).collect();
        let rhs = &r.rhs / &lead;
        best.entry(coeffs)
            .and_modify(|b| {
                if rhs < *b {
                    *b = rhs.clone();
                }
            })
            .or_insert(rhs);
    }
    Step::Rows(
        best.into_iter()
            .map(|(coeffs, rhs)| Ineq { coeffs, rhs })
            .collect(),
    )
}

fn eliminate(rows: &[Ineq], var: usize, limit: usize) -> Step {
    let (mut pos, mut neg, mut zero) = (Vec::new(), Vec::new(), Vec::new());
    for r in rows {
        let a = &r.coeffs[var];
        if a.is_positive() {
            pos.push(r);
        } else if a.is_negative() {
            neg.push(r);
        } else {
            zero.push(r.clone());
        }
    }
    if pos.len() * neg.len() + zero.len() > limit {
        return Step::TooLarge;
    }
    let mut out = zero;
    for p in &pos {
        let ap = &p.coeffs[var];
        for n in &neg {
            let an = -&n.coeffs[var];
            let coeffs = p
                .coeffs
                .iter()
                .zip(&n.coeffs)
                .map(|(x, y)| x / ap + y / &an)
                .collect();
            out.push(Ineq {
                coeffs,
                rhs: &p.rhs / ap + &n.rhs / &an,
            });
        }
    }
    tidy(out)
}

/// Eliminates variables from the last index down to `keep`, returning every
/// intermediate system (`stages[s]` has the last `s` variables eliminated).
fn project(rows: Vec<Ineq>, width: usize, keep: usize, limit: usize) -> Outcome<Option<Vec<Vec<Ineq>>>> {
    let first = match tidy(rows) {
        Step::Rows(r) => r,
        Step::Infeasible => return Outcome::Done(None),
        Step::TooLarge => return Outcome::TooLarge,
    };
    let mut stages = vec![first];
    for var in (keep..width).rev() {
        match eliminate(stages.last().expect("non-empty"), var, limit) {
            Step::Rows(r) => stages.push(r),
            Step::Infeasible => return Outcome::Done(None),
            Step::TooLarge => return Outcome::TooLarge,
        }
    }
    Outcome::Done(Some(stages))
}

/// Bounds on `var` implied by `rows` once variables `< var` take `fixed`.
fn bounds(rows: &[Ineq], var: usize, fixed: &[Rational]) -> (Option<Rational>, Option<Rational>) {
    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    for r in rows {
        let a = &r.coeffs[var];
        if a.is_zero() {
            continue;
        }
        let rest = fixed
            .iter()
            .zip(&r.coeffs)
            .fold(Rational::zero(), |acc, (x, c)| acc + x * c);
        let b = (&r.rhs - rest) / a;
        if a.is_positive() {
            if hi.as_ref().is_none_or(|h| b < *h) {
                hi = Some(b);
            }
        } else if lo.as_ref().is_none_or(|l| b > *l) {
            lo = Some(b);
        }
    }
    (lo, hi)
}

/// Fills in variables `start..width` from the stored projections, taking the
/// smallest admissible value for each.
fn back_substitute(stages: &[Vec<Ineq>], width: usize, mut point: Vec<Rational>) -> Vec<Rational> {
    let start = point.len();
    for var in start..width {
        // Stage with exactly the variables 0..=var present.
        let rows = &stages[width - 1 - var];
        let (lo, hi) = bounds(rows, var, &point);
        let v = match (lo, hi) {
            (Some(l), _) => l,
            (None, Some(h)) => h.min(Rational::zero()),
            (None, None) => Rational::zero(),
        };
        point.push(v);
    }
    point
}

pub fn feasible_point(sys: &LinearSystem, limit: usize) -> Outcome<Option<Vec<Rational>>> {
    let width = sys.vars();
    if width == 0 {
        let ok = sys.satisfied_by(&[]);
        return Outcome::Done(ok.then(Vec::new));
    }
    let rows = to_le_rows(sys, 0);
    match project(rows, width, 0, limit) {
        Outcome::TooLarge => Outcome::TooLarge,
        Outcome::Done(None) => Outcome::Done(None),
        Outcome::Done(Some(stages)) => {
            let point = back_substitute(&stages, width, Vec::new());
            debug_assert!(sys.satisfied_by(&point));
            Outcome::Done(Some(point))
        }
    }
}

/// Optimizes by adjoining `t = objective · x` as variable 0 and projecting
/// everything else away.
pub fn optimize(
    sys: &LinearSystem,
    objective: &[Rational],
    sense: Sense,
    limit: usize,
) -> Outcome<Optimum> {
    assert_eq!(objective.len(), sys.vars());
    let width = sys.vars() + 1;
    let mut rows = to_le_rows(sys, 1);
    let mut up = vec![Rational::one()];
    up.extend(objective.iter().map(|c| -c));
    let down: Vec<Rational> = up.iter().map(|c| -c).collect();
    rows.push(Ineq {
        coeffs: up,
        rhs: Rational::zero(),
    });
    rows.push(Ineq {
        coeffs: down,
        rhs: Rational::zero(),
    });
    let stages = match project(rows, width, 1, limit) {
        Outcome::TooLarge => return Outcome::TooLarge,
        Outcome::Done(None) => return Outcome::Done(Optimum::Infeasible),
        Outcome::Done(Some(s)) => s,
    };
    let (lo, hi) = bounds(stages.last().expect("non-empty"), 0, &[]);
    if let (Some(l), Some(h)) = (&lo, &hi) {
        if l > h {
            return Outcome::Done(Optimum::Infeasible);
        }
    }
    let value = match sense {
        Sense::Maximize => hi,
        Sense::Minimize => lo,
    };
    let Some(value) = value else {
        return Outcome::Done(Optimum::Unbounded);
    };
    let point = back_substitute(&stages, width, vec![value.clone()]);
    let point = point[1..].to_vec();
    debug_assert!(sys.satisfied_by(&point));
    Outcome::Done(Optimum::Finite { value, point })
}
