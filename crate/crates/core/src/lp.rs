//! Exact feasibility LP: phase-one simplex over the rationals with Bland's rule.
//!
//! The problems solved here are tiny (a handful of variables, one row per
//! support monomial), so a dense tableau is all that is needed.

use num_traits::{Signed, Zero};

use crate::num::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> Self {
        Constraint { coeffs, relation, rhs }
    }

    pub fn is_satisfied(&self, x: &[Rational]) -> bool {
        let lhs: Rational = self.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Ge => lhs >= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

/// Variables are either sign-free or constrained to be non-negative.
#[derive(Clone, Debug)]
pub struct FeasibilityProblem {
    free: Vec<bool>,
    constraints: Vec<Constraint>,
}

impl FeasibilityProblem {
    pub fn new(free: Vec<bool>) -> Self {
        FeasibilityProblem { free, constraints: Vec::new() }
    }

    pub fn all_free(n: usize) -> Self {
        Self::new(vec![true; n])
    }

    pub fn all_nonnegative(n: usize) -> Self {
        Self::new(vec![false; n])
    }

    pub fn num_vars(&self) -> usize {
        self.free.len()
    }

    pub fn push(&mut self, c: Constraint) {
        assert_eq!(c.coeffs.len(), self.free.len(), "constraint width");
        self.constraints.push(c);
    }

    /// Checks a candidate point against every constraint and sign restriction.
    pub fn is_feasible_point(&self, x: &[Rational]) -> bool {
        x.len() == self.free.len()
            && x.iter().zip(&self.free).all(|(v, &free)| free || !v.is_negative())
            && self.constraints.iter().all(|c| c.is_satisfied(x))
    }

    /// Returns a feasible point (a basic solution) or `None` if the system is empty.
    pub fn solve(&self) -> Option<Vec<Rational>> {
        let nv = self.free.len();
        // column layout: original (split for free vars), slacks, artificials
        let mut col_of: Vec<(usize, Option<usize>)> = Vec::with_capacity(nv);
        let mut ncols = 0;
        for &free in &self.free {
            if free {
                col_of.push((ncols, Some(ncols + 1)));
                ncols += 2;
            } else {
                col_of.push((ncols, None));
                ncols += 1;
            }
        }
        let structural = ncols;
        let m = self.constraints.len();

        struct Row {
            coeffs: Vec<Rational>,
            relation: Relation,
            rhs: Rational,
        }
        let mut rows: Vec<Row> = self
            .constraints
            .iter()
            .map(|c| {
                let mut coeffs = vec![Rational::zero(); structural];
                for (j, a) in c.coeffs.iter().enumerate() {
                    let (pos, neg) = col_of[j];
                    coeffs[pos] = a.clone();
                    if let Some(neg) = neg {
                        coeffs[neg] = -a.clone();
                    }
                }
                // a zero right-hand side lets `>=` rows start from a slack basis
                let flip = c.rhs.is_negative() || (c.rhs.is_zero() && c.relation == Relation::Ge);
                let (coeffs, relation, rhs) = if flip {
                    let flipped = match c.relation {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    (coeffs.into_iter().map(|a| -a).collect(), flipped, -c.rhs.clone())
                } else {
                    (coeffs, c.relation, c.rhs.clone())
                };
                Row { coeffs, relation, rhs }
            })
            .collect();

        let slack_count = rows.iter().filter(|r| r.relation != Relation::Eq).count();
        let art_count = rows.iter().filter(|r| r.relation != Relation::Le).count();
        let total = structural + slack_count + art_count;
        let art_start = structural + slack_count;

        let mut tableau: Vec<Vec<Rational>> = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let (mut next_slack, mut next_art) = (structural, art_start);
        for row in rows.iter_mut() {
            let mut t = std::mem::take(&mut row.coeffs);
            t.resize(total + 1, Rational::zero());
            t[total] = row.rhs.clone();
            match row.relation {
                Relation::Le => {
                    t[next_slack] = Rational::from_integer(1.into());
                    basis.push(next_slack);
                    next_slack += 1;
                }
                Relation::Ge => {
                    t[next_slack] = Rational::from_integer((-1).into());
                    next_slack += 1;
                    t[next_art] = Rational::from_integer(1.into());
                    basis.push(next_art);
                    next_art += 1;
                }
                Relation::Eq => {
                    t[next_art] = Rational::from_integer(1.into());
                    basis.push(next_art);
                    next_art += 1;
                }
            }
            tableau.push(t);
        }

        // reduced costs of the phase-one objective sum(artificials); last entry is -objective
        let mut cost = vec![Rational::zero(); total + 1];
        for (i, row) in tableau.iter().enumerate() {
            if basis[i] >= art_start {
                for (c, a) in cost.iter_mut().zip(row) {
                    *c -= a;
                }
            }
        }
        for c in cost.iter_mut().take(total).skip(art_start) {
            *c = Rational::zero();
        }

        // Bland: lowest-index improving column
        while let Some(enter) = (0..total).find(|&j| cost[j].is_negative()) {
            let mut leave: Option<(usize, Rational)> = None;
            for (i, row) in tableau.iter().enumerate() {
                if row[enter].is_positive() {
                    let ratio = &row[total] / &row[enter];
                    let better = match &leave {
                        None => true,
                        Some((li, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*li]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let (pr, _) = leave.expect("phase-one objective is bounded below");
            pivot(&mut tableau, &mut cost, pr, enter);
            basis[pr] = enter;
        }

        if !cost[total].is_zero() {
            return None;
        }
        let mut values = vec![Rational::zero(); total];
        for (i, &b) in basis.iter().enumerate() {
            values[b] = tableau[i][total].clone();
        }
        let x: Vec<Rational> = col_of
            .iter()
            .map(|&(pos, neg)| match neg {
                Some(neg) => &values[pos] - &values[neg],
                None => values[pos].clone(),
            })
            .collect();
        debug_assert!(self.is_feasible_point(&x));
        Some(x)
    }
}

fn pivot(tableau: &mut [Vec<Rational>], cost: &mut [Rational], pr: usize, pc: usize) {
    let p = tableau[pr][pc].clone();
    for v in tableau[pr].iter_mut() {
        *v /= &p;
    }
    let prow = tableau[pr].clone();
    for (i, row) in tableau.iter_mut().enumerate() {
        if i == pr || row[pc].is_zero() {
            continue;
        }
        let f = row[pc].clone();
        for (v, a) in row.iter_mut().zip(&prow) {
            if !a.is_zero() {
                *v -= &f * a;
            }
        }
    }
    if !cost[pc].is_zero() {
        let f = cost[pc].clone();
        for (v, a) in cost.iter_mut().zip(&prow) {
            if !a.is_zero() {
                *v -= &f * a;
            }
        }
    }
}
