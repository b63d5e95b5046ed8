//! Dense exact-rational simplex method.
//!
//! Two-phase tableau solver over nonnegative variables. Pivoting uses Bland's
//! rule (lowest-index entering column, lowest-index leaving basic variable on
//! ratio ties), so it terminates on degenerate programs. Sizes in this crate
//! are tiny (tens of rows), so the dense tableau is fine.

use num_traits::{Signed, Zero};

use crate::rational::{one, zero, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpSolution {
    Infeasible,
    Unbounded,
    Optimal { value: Rational, point: Vec<Rational> },
}

impl LpSolution {
    pub fn optimal_value(&self) -> Option<&Rational> {
        match self {
            LpSolution::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpSolution::Infeasible)
    }
}

#[derive(Clone, Debug)]
struct Row {
    coeffs: Vec<Rational>,
    rel: Relation,
    rhs: Rational,
}

/// `maximize c·x  subject to  rows,  x >= 0`.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    num_vars: usize,
    objective: Vec<Rational>,
    rows: Vec<Row>,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            objective: vec![zero(); num_vars],
            rows: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn maximize(&mut self, objective: Vec<Rational>) -> &mut Self {
        assert_eq!(objective.len(), self.num_vars, "objective length");
        self.objective = objective;
        self
    }

    pub fn constrain(&mut self, coeffs: Vec<Rational>, rel: Relation, rhs: Rational) -> &mut Self {
        assert_eq!(coeffs.len(), self.num_vars, "constraint length");
        self.rows.push(Row { coeffs, rel, rhs });
        self
    }

    pub fn solve(&self) -> LpSolution {
        Tableau::build(self).solve(&self.objective)
    }
}

struct Tableau {
    /// `rows x (cols + 1)`; last column is the right-hand side.
    t: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    num_vars: usize,
    cols: usize,
    art_start: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let m = lp.rows.len();
        let n_slack = lp.rows.iter().filter(|r| r.rel != Relation::Eq).count();
        let art_start = lp.num_vars + n_slack;
        let cols = art_start + m;
        let mut t = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut slack = lp.num_vars;
        for (r, row) in lp.rows.iter().enumerate() {
            let mut line = vec![zero(); cols + 1];
            line[..lp.num_vars].clone_from_slice(&row.coeffs);
            match row.rel {
                Relation::Le => {
                    line[slack] = one();
                    slack += 1;
                }
                Relation::Ge => {
                    line[slack] = -one();
                    slack += 1;
                }
                Relation::Eq => {}
            }
            line[cols] = row.rhs.clone();
            if line[cols].is_negative() {
                for q in line.iter_mut() {
                    *q = -&*q;
                }
            }
            line[art_start + r] = one();
            t.push(line);
            basis.push(art_start + r);
        }
        Tableau {
            t,
            basis,
            num_vars: lp.num_vars,
            cols,
            art_start,
        }
    }

    fn reduced_costs(&self, cost: &[Rational]) -> Vec<Rational> {
        let mut d: Vec<Rational> = cost.to_vec();
        for (r, &b) in self.basis.iter().enumerate() {
            if cost[b].is_zero() {
                continue;
            }
            for j in 0..self.cols {
                if !self.t[r][j].is_zero() {
                    d[j] -= &cost[b] * &self.t[r][j];
                }
            }
        }
        d
    }

    fn pivot(&mut self, r: usize, j: usize, d: &mut [Rational]) {
        let piv = self.t[r][j].clone();
        for q in self.t[r].iter_mut() {
            if !q.is_zero() {
                *q /= &piv;
            }
        }
        let pivot_row = self.t[r].clone();
        for (k, row) in self.t.iter_mut().enumerate() {
            if k == r || row[j].is_zero() {
                continue;
            }
            let f = row[j].clone();
            for (q, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *q -= &f * p;
                }
            }
        }
        if !d[j].is_zero() {
            let f = d[j].clone();
            for (q, p) in d.iter_mut().zip(&pivot_row[..self.cols]) {
                if !p.is_zero() {
                    *q -= &f * p;
                }
            }
        }
        self.basis[r] = j;
    }

    /// Runs Bland pivoting; returns false if unbounded.
    fn optimize(&mut self, cost: &[Rational], allowed: &dyn Fn(usize) -> bool) -> bool {
        let mut d = self.reduced_costs(cost);
        loop {
            let entering = (0..self.cols).find(|&j| allowed(j) && d[j].is_positive());
            let Some(j) = entering else { return true };
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..self.t.len() {
                let a = &self.t[r][j];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.t[r][self.cols] / a;
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => {
                        ratio < *best || (ratio == *best && self.basis[r] < self.basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let Some((r, _)) = leave else { return false };
            self.pivot(r, j, &mut d);
        }
    }

    fn objective_value(&self, cost: &[Rational]) -> Rational {
        let mut v = zero();
        for (r, &b) in self.basis.iter().enumerate() {
            if !cost[b].is_zero() {
                v += &cost[b] * &self.t[r][self.cols];
            }
        }
        v
    }

    fn solve(mut self, objective: &[Rational]) -> LpSolution {
        let art_start = self.art_start;
        let mut phase1 = vec![zero(); self.cols];
        for q in phase1[art_start..].iter_mut() {
            *q = -one();
        }
        // Phase 1 is bounded above by zero.
        self.optimize(&phase1, &|_| true);
        if self.objective_value(&phase1).is_negative() {
            return LpSolution::Infeasible;
        }

        // Drive zero-level artificials out of the basis; drop redundant rows.
        let mut r = 0;
        while r < self.t.len() {
            if self.basis[r] >= art_start {
                let col = (0..art_start).find(|&j| !self.t[r][j].is_zero());
                match col {
                    Some(j) => {
                        let mut dummy = vec![zero(); self.cols];
                        self.pivot(r, j, &mut dummy);
                        r += 1;
                    }
                    None => {
                        self.t.remove(r);
                        self.basis.remove(r);
                    }
                }
            } else {
                r += 1;
            }
        }

        let mut phase2 = vec![zero(); self.cols];
        phase2[..self.num_vars].clone_from_slice(objective);
        if !self.optimize(&phase2, &|j| j < art_start) {
            return LpSolution::Unbounded;
        }
        let mut point = vec![zero(); self.num_vars];
        for (r, &b) in self.basis.iter().enumerate() {
            if b < self.num_vars {
                point[b] = self.t[r][self.cols].clone();
            }
        }
        LpSolution::Optimal {
            value: self.objective_value(&phase2),
            point,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn textbook_maximum() {
        // max 3x + 5y  s.t. x <= 4, 2y <= 12, 3x + 2y <= 18  -> 36 at (2, 6)
        let mut lp = LinearProgram::new(2);
        lp.maximize(ints(&[3, 5]))
            .constrain(ints(&[1, 0]), Relation::Le, int(4))
            .constrain(ints(&[0, 2]), Relation::Le, int(12))
            .constrain(ints(&[3, 2]), Relation::Le, int(18));
        match lp.solve() {
            LpSolution::Optimal { value, point } => {
                assert_eq!(value, int(36));
                assert_eq!(point, ints(&[2, 6]));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn detects_infeasible() {
        let mut lp = LinearProgram::new(1);
        lp.constrain(ints(&[1]), Relation::Ge, int(2))
            .constrain(ints(&[1]), Relation::Le, int(1));
        assert_eq!(lp.solve(), LpSolution::Infeasible);
    }

    #[test]
    fn detects_unbounded() {
        let mut lp = LinearProgram::new(2);
        lp.maximize(ints(&[1, 0]))
            .constrain(ints(&[1, -1]), Relation::Le, int(1));
        assert_eq!(lp.solve(), LpSolution::Unbounded);
    }

    #[test]
    fn equalities_with_negative_rhs_and_redundancy() {
        // x + y = -(-1), 2x + 2y = 2 (redundant), maximize x - y  -> 1 at (1, 0)
        let mut lp = LinearProgram::new(2);
        lp.maximize(ints(&[1, -1]))
            .constrain(ints(&[-1, -1]), Relation::Eq, int(-1))
            .constrain(ints(&[2, 2]), Relation::Eq, int(2));
        assert_eq!(lp.solve().optimal_value(), Some(&int(1)));
    }

    #[test]
    fn fractional_optimum() {
        // max x + y  s.t. 2x + y <= 1, x + 2y <= 1  -> 2/3
        let mut lp = LinearProgram::new(2);
        lp.maximize(ints(&[1, 1]))
            .constrain(ints(&[2, 1]), Relation::Le, int(1))
            .constrain(ints(&[1, 2]), Relation::Le, int(1));
        assert_eq!(lp.solve().optimal_value(), Some(&rat(2, 3)));
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's classic cycling example; Bland's rule must terminate.
        let mut lp = LinearProgram::new(4);
        lp.maximize(vec![rat(3, 4), int(-150), rat(1, 50), int(-6)])
            .constrain(vec![rat(1, 4), int(-60), rat(-1, 25), int(9)], Relation::Le, int(0))
            .constrain(vec![rat(1, 2), int(-90), rat(-1, 50), int(3)], Relation::Le, int(0))
            .constrain(ints(&[0, 0, 1, 0]), Relation::Le, int(1));
        assert_eq!(lp.solve().optimal_value(), Some(&rat(1, 20)));
    }
}
