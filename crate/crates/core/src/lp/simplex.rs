//! Dictionary-form simplex over exact rationals with Bland's rule.
//!
//! Every constraint becomes `a · x <= b` with an implicit slack, so the
//! dictionary is only as wide as the number of structural variables. Phase one
//! uses the auxiliary variable `x0` subtracted from every row.

use num_traits::{One, Signed, Zero};

use super::{LinearSystem, Optimum, Rational, Relation, Sense};

/// `x_basis[i] = rhs[i] - sum_j a[i][j] * x_nonbasis[j]`, and the objective
/// `z = z0 + sum_j c[j] * x_nonbasis[j]` is maximized.
struct Dictionary {
    a: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    nonbasis: Vec<usize>,
    c: Vec<Rational>,
    z0: Rational,
}

enum Run {
    Optimal,
    Unbounded,
}

impl Dictionary {
    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.a[row][col].clone();
        let cols = self.nonbasis.len();
        // Solve the pivot row for the entering variable.
        let inv = Rational::one() / &p;
        for j in 0..cols {
            if j == col {
                self.a[row][j] = inv.clone();
            } else if !self.a[row][j].is_zero() {
                self.a[row][j] = &self.a[row][j] * &inv;
            }
        }
        self.rhs[row] = &self.rhs[row] * &inv;
        let pivot_row = self.a[row].clone();
        let pivot_rhs = self.rhs[row].clone();
        for i in 0..self.a.len() {
            if i == row || self.a[i][col].is_zero() {
                continue;
            }
            let f = self.a[i][col].clone();
            for j in 0..cols {
                if j == col {
                    self.a[i][j] = -(&f * &pivot_row[j]);
                } else if !pivot_row[j].is_zero() {
                    self.a[i][j] -= &f * &pivot_row[j];
                }
            }
            self.rhs[i] -= &f * &pivot_rhs;
        }
        if !self.c[col].is_zero() {
            let f = self.c[col].clone();
            for j in 0..cols {
                if j == col {
                    self.c[j] = -(&f * &pivot_row[j]);
                } else if !pivot_row[j].is_zero() {
                    self.c[j] -= &f * &pivot_row[j];
                }
            }
            self.z0 += &f * &pivot_rhs;
        }
        std::mem::swap(&mut self.basis[row], &mut self.nonbasis[col]);
    }

    fn run(&mut self) -> Run {
        loop {
            let entering = (0..self.nonbasis.len())
                .filter(|&j| self.c[j].is_positive())
                .min_by_key(|&j| self.nonbasis[j]);
            let Some(col) = entering else {
                return Run::Optimal;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.a.len() {
                if !self.a[i][col].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / &self.a[i][col];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((row, _)) = best else {
                return Run::Unbounded;
            };
            self.pivot(row, col);
        }
    }

    fn value_of(&self, var: usize) -> Rational {
        self.basis
            .iter()
            .position(|&b| b == var)
            .map_or_else(Rational::zero, |i| self.rhs[i].clone())
    }
}

struct Prepared {
    dict: Dictionary,
    /// Column ids of each original variable: (positive part, negative part).
    var_cols: Vec<(usize, Option<usize>)>,
}

/// Id of the phase-one auxiliary variable; larger than every other id so
/// Bland's rule prefers real variables on ties.
const AUX: usize = usize::MAX;

/// Builds a feasible dictionary, or `None` when the system is infeasible.
fn phase_one(sys: &LinearSystem) -> Option<Prepared> {
    let mut var_cols = Vec::new();
    let mut width = 0usize;
    for j in 0..sys.vars() {
        if sys.is_free(j) {
            var_cols.push((width, Some(width + 1)));
            width += 2;
        } else {
            var_cols.push((width, None));
            width += 1;
        }
    }
    let expand = |coeffs: &[Rational], sign: bool| -> Vec<Rational> {
        let mut row = vec![Rational::zero(); width];
        for (j, (p, n)) in var_cols.iter().enumerate() {
            let v = if sign { coeffs[j].clone() } else { -coeffs[j].clone() };
            if let Some(n) = n {
                row[*n] = -v.clone();
            }
            row[*p] = v;
        }
        row
    };
    let mut a = Vec::new();
    let mut rhs = Vec::new();
    for r in sys.rows() {
        if matches!(r.rel, Relation::Le | Relation::Eq) {
            a.push(expand(&r.coeffs, true));
            rhs.push(r.rhs.clone());
        }
        if matches!(r.rel, Relation::Ge | Relation::Eq) {
            a.push(expand(&r.coeffs, false));
            rhs.push(-r.rhs.clone());
        }
    }
    let rows = a.len();
    let basis: Vec<usize> = (width..width + rows).collect();
    let mut nonbasis: Vec<usize> = (0..width).collect();

    let most_negative = (0..rows)
        .filter(|&i| rhs[i].is_negative())
        .min_by(|&x, &y| rhs[x].cmp(&rhs[y]));
    let Some(start) = most_negative else {
        let c = vec![Rational::zero(); width];
        return Some(Prepared {
            dict: Dictionary {
                a,
                rhs,
                basis,
                nonbasis,
                c,
                z0: Rational::zero(),
            },
            var_cols,
        });
    };

    // x_b = rhs - a x + x0; maximize -x0.
    for row in a.iter_mut() {
        row.push(-Rational::one());
    }
    nonbasis.push(AUX);
    let mut c = vec![Rational::zero(); width + 1];
    c[width] = -Rational::one();
    let mut dict = Dictionary {
        a,
        rhs,
        basis,
        nonbasis,
        c,
        z0: Rational::zero(),
    };
    dict.pivot(start, width);
    match dict.run() {
        Run::Optimal => {}
        Run::Unbounded => unreachable!("phase one objective is bounded above by zero"),
    }
    if dict.z0.is_negative() {
        return None;
    }
    if let Some(row) = dict.basis.iter().position(|&b| b == AUX) {
        // Degenerate: x0 sits in the basis at level zero.
        let col = (0..dict.nonbasis.len())
            .find(|&j| !dict.a[row][j].is_zero())
            .expect("auxiliary row has a nonzero entry");
        dict.pivot(row, col);
    }
    let aux_col = dict
        .nonbasis
        .iter()
        .position(|&v| v == AUX)
        .expect("auxiliary variable is nonbasic");
    for row in dict.a.iter_mut() {
        row.remove(aux_col);
    }
    dict.nonbasis.remove(aux_col);
    dict.c = vec![Rational::zero(); dict.nonbasis.len()];
    dict.z0 = Rational::zero();
    Some(Prepared { dict, var_cols })
}

fn extract(p: &Prepared) -> Vec<Rational> {
    p.var_cols
        .iter()
        .map(|(pos, neg)| {
            let v = p.dict.value_of(*pos);
            match neg {
                Some(n) => v - p.dict.value_of(*n),
                None => v,
            }
        })
        .collect()
}

pub fn feasible_point(sys: &LinearSystem) -> Option<Vec<Rational>> {
    let p = phase_one(sys)?;
    let point = extract(&p);
    debug_assert!(sys.satisfied_by(&point));
    Some(point)
}

pub fn optimize(sys: &LinearSystem, objective: &[Rational], sense: Sense) -> Optimum {
    assert_eq!(objective.len(), sys.vars());
    let Some(mut p) = phase_one(sys) else {
        return Optimum::Infeasible;
    };
    // Objective over column ids, as a maximization.
    let mut by_id = std::collections::HashMap::new();
    for (j, (pos, neg)) in p.var_cols.iter().enumerate() {
        let v = match sense {
            Sense::Maximize => objective[j].clone(),
            Sense::Minimize => -objective[j].clone(),
        };
        if let Some(n) = neg {
            by_id.insert(*n, -v.clone());
        }
        by_id.insert(*pos, v);
    }
    let d = &mut p.dict;
    let cols = d.nonbasis.len();
    let mut c = vec![Rational::zero(); cols];
    let mut z0 = Rational::zero();
    for (j, id) in d.nonbasis.iter().enumerate() {
        if let Some(v) = by_id.get(id) {
            c[j] += v;
        }
    }
    for (i, id) in d.basis.iter().enumerate() {
        let Some(v) = by_id.get(id) else { continue };
        if v.is_zero() {
            continue;
        }
        z0 += v * &d.rhs[i];
        for j in 0..cols {
            if !d.a[i][j].is_zero() {
                c[j] -= v * &d.a[i][j];
            }
        }
    }
    d.c = c;
    d.z0 = z0;
    match d.run() {
        Run::Unbounded => Optimum::Unbounded,
        Run::Optimal => {
            let point = extract(&p);
            debug_assert!(sys.satisfied_by(&point));
            let value = super::dot(objective, &point);
            Optimum::Finite { value, point }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::testutil::{q, qi, row};
    use super::*;

    #[test]
    fn feasible_with_equalities() {
        let mut s = LinearSystem::new(3);
        s.push(row(&[1, 1, 1]), Relation::Eq, qi(1));
        s.push(row(&[2, 0, 0]), Relation::Ge, qi(1));
        s.push(row(&[0, 3, 0]), Relation::Ge, qi(1));
        let p = feasible_point(&s).unwrap();
        assert!(s.satisfied_by(&p));
    }

    #[test]
    fn detects_infeasibility() {
        let mut s = LinearSystem::new(2);
        s.push(row(&[1, 1]), Relation::Ge, qi(3));
        s.push(row(&[1, 1]), Relation::Le, qi(2));
        assert!(feasible_point(&s).is_none());
    }

    #[test]
    fn optimizes_with_negative_rhs_and_free_vars() {
        let mut s = LinearSystem::new(2);
        s.set_free(1);
        s.push(row(&[1, 0]), Relation::Le, qi(3));
        s.push(row(&[-1, 1]), Relation::Ge, qi(-2));
        s.push(row(&[0, 1]), Relation::Le, qi(5));
        match optimize(&s, &row(&[1, -1]), Sense::Maximize) {
            Optimum::Finite { value, .. } => assert_eq!(value, qi(2)),
            o => panic!("{o:?}"),
        }
        match optimize(&s, &row(&[0, 1]), Sense::Minimize) {
            Optimum::Finite { value, .. } => assert_eq!(value, qi(-2)),
            o => panic!("{o:?}"),
        }
        let mut t = LinearSystem::new(2);
        t.set_free(1);
        t.push(row(&[-1, 1]), Relation::Ge, qi(-2));
        assert_eq!(optimize(&t, &row(&[0, 1]), Sense::Maximize), Optimum::Unbounded);
    }

    #[test]
    fn fractional_optimum() {
        let mut s = LinearSystem::new(2);
        s.push(row(&[2, 1]), Relation::Le, qi(4));
        s.push(row(&[1, 2]), Relation::Le, qi(4));
        match optimize(&s, &row(&[1, 1]), Sense::Maximize) {
            Optimum::Finite { value, .. } => assert_eq!(value, q(8, 3)),
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn redundant_equalities() {
        let mut s = LinearSystem::new(2);
        s.push(row(&[1, 1]), Relation::Eq, qi(2));
        s.push(row(&[2, 2]), Relation::Eq, qi(4));
        match optimize(&s, &row(&[1, 0]), Sense::Maximize) {
            Optimum::Finite { value, point } => {
                assert_eq!(value, qi(2));
                assert_eq!(point, vec![qi(2), qi(0)]);
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn empty_system() {
        let s = LinearSystem::new(2);
        assert_eq!(feasible_point(&s), Some(vec![qi(0), qi(0)]));
        assert_eq!(optimize(&s, &row(&[-1, 0]), Sense::Maximize), Optimum::Finite {
            value: qi(0),
            point: vec![qi(0), qi(0)]
        });
    }
}
