//! Exact rational linear feasibility and optimization.
//!
//! Two independent engines answer the same questions: Fourier–Motzkin
//! elimination ([`fm`]), used first since the systems here have only a handful
//! of variables, and a two-phase simplex with Bland's rule ([`simplex`]) that
//! takes over whenever elimination would grow past its constraint budget.

pub mod fm;
pub mod simplex;

use num_rational::BigRational;
use num_traits::Zero;

pub type Rational = BigRational;

/// Constraint budget for a single elimination step before handing the system
/// to the simplex engine.
pub const FM_ROW_LIMIT: usize = 600;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub coeffs: Vec<Rational>,
    pub rel: Relation,
    pub rhs: Rational,
}

/// `rows` over `vars` variables. Variables are non-negative unless marked free.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    vars: usize,
    free: Vec<bool>,
    rows: Vec<Row>,
}

impl LinearSystem {
    pub fn new(vars: usize) -> Self {
        LinearSystem {
            vars,
            free: vec![false; vars],
            rows: Vec::new(),
        }
    }

    pub fn set_free(&mut self, var: usize) {
        self.free[var] = true;
    }

    pub fn push(&mut self, coeffs: Vec<Rational>, rel: Relation, rhs: Rational) {
        assert_eq!(coeffs.len(), self.vars, "row width must match variable count");
        self.rows.push(Row { coeffs, rel, rhs });
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_free(&self, var: usize) -> bool {
        self.free[var]
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    /// Exact check of a candidate point against every row and sign constraint.
    pub fn satisfied_by(&self, x: &[Rational]) -> bool {
        if x.len() != self.vars {
            return false;
        }
        if (0..self.vars).any(|j| !self.free[j] && x[j] < Rational::zero()) {
            return false;
        }
        self.rows.iter().all(|r| {
            let lhs = dot(&r.coeffs, x);
            match r.rel {
                Relation::Le => lhs <= r.rhs,
                Relation::Ge => lhs >= r.rhs,
                Relation::Eq => lhs == r.rhs,
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Optimum {
    Infeasible,
    Unbounded,
    Finite {
        value: Rational,
        point: Vec<Rational>,
    },
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// A feasible point, or `None` when the system is infeasible.
pub fn feasible_point(sys: &LinearSystem) -> Option<Vec<Rational>> {
    match fm::feasible_point(sys, FM_ROW_LIMIT) {
        fm::Outcome::Done(p) => p,
        fm::Outcome::TooLarge => simplex::feasible_point(sys),
    }
}

pub fn optimize(sys: &LinearSystem, objective: &[Rational], sense: Sense) -> Optimum {
    match fm::optimize(sys, objective, sense, FM_ROW_LIMIT) {
        fm::Outcome::Done(o) => o,
        fm::Outcome::TooLarge => simplex::optimize(sys, objective, sense),
    }
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;
    use num_bigint::BigInt;

    pub fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    pub fn qi(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    pub fn row(c: &[i64]) -> Vec<Rational> {
        c.iter().map(|&v| qi(v)).collect()
    }
}
