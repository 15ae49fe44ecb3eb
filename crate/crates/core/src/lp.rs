//! Dense two-phase simplex over exact rationals.
//!
//! Problems are stated as `maximize c·x subject to A x = b, x ≥ 0`. Callers
//! introduce their own slack or surplus columns. Pivoting follows Bland's
//! rule (lowest eligible index enters, ties on the ratio test leave by lowest
//! basic index), which rules out cycling on degenerate problems.

use num::{Signed, Zero};

use crate::rational::{self, Rational};

#[derive(Debug, Clone)]
pub struct LinearProgram {
    num_vars: usize,
    rows: Vec<(Vec<Rational>, Rational)>,
    objective: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { value: Rational, values: Vec<Rational> },
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

impl LinearProgram {
    /// A problem over `num_vars` nonnegative variables with a zero objective.
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            rows: Vec::new(),
            objective: vec![rational::zero(); num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Adds `Σ coeffs[j]·x_j = rhs` from sparse `(column, coefficient)` pairs.
    pub fn add_equality<I>(&mut self, terms: I, rhs: Rational)
    where
        I: IntoIterator<Item = (usize, Rational)>,
    {
        let mut row = vec![rational::zero(); self.num_vars];
        for (j, c) in terms {
            row[j] += c;
        }
        self.rows.push((row, rhs));
    }

    pub fn set_objective<I>(&mut self, terms: I)
    where
        I: IntoIterator<Item = (usize, Rational)>,
    {
        self.objective = vec![rational::zero(); self.num_vars];
        for (j, c) in terms {
            self.objective[j] += c;
        }
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).run(&self.objective)
    }
}

struct Tableau {
    num_vars: usize,
    num_artificial: usize,
    // each row: coefficients for original + artificial columns, then rhs
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let m = lp.rows.len();
        let width = lp.num_vars + m + 1;
        let mut rows = Vec::with_capacity(m);
        for (r, (coeffs, rhs)) in lp.rows.iter().enumerate() {
            let flip = rhs.is_negative();
            let mut row = Vec::with_capacity(width);
            row.extend(coeffs.iter().map(|c| if flip { -c } else { c.clone() }));
            row.extend((0..m).map(|k| {
                if k == r {
                    rational::one()
                } else {
                    rational::zero()
                }
            }));
            row.push(if flip { -rhs } else { rhs.clone() });
            rows.push(row);
        }
        Self {
            num_vars: lp.num_vars,
            num_artificial: m,
            rows,
            basis: (lp.num_vars..lp.num_vars + m).collect(),
        }
    }

    fn width(&self) -> usize {
        self.num_vars + self.num_artificial
    }

    fn rhs(&self, r: usize) -> &Rational {
        self.rows[r].last().expect("rhs column")
    }

    fn run(mut self, objective: &[Rational]) -> LpOutcome {
        let width = self.width();
        let num_vars = self.num_vars;
        let artificial = |j: usize| j >= num_vars;

        // Phase 1: maximize minus the sum of artificials.
        let phase1: Vec<Rational> = (0..width)
            .map(|j| {
                if artificial(j) {
                    -rational::one()
                } else {
                    rational::zero()
                }
            })
            .collect();
        let all: Vec<bool> = vec![true; width];
        if !self.optimize(&phase1, &all) {
            unreachable!("phase 1 is bounded above by zero");
        }
        let residual: Rational = (0..self.rows.len())
            .filter(|&r| artificial(self.basis[r]))
            .map(|r| self.rhs(r).clone())
            .sum();
        if residual.is_positive() {
            return LpOutcome::Infeasible;
        }

        // Pivot remaining (zero-valued) artificials out; drop redundant rows.
        let mut r = 0;
        while r < self.rows.len() {
            if artificial(self.basis[r]) {
                match (0..self.num_vars).find(|&j| !self.rows[r][j].is_zero()) {
                    Some(j) => self.pivot(r, j, None),
                    None => {
                        self.rows.remove(r);
                        self.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }

        // Phase 2 on the original columns only.
        let mut cost = objective.to_vec();
        cost.resize(width, rational::zero());
        let allowed: Vec<bool> = (0..width).map(|j| !artificial(j)).collect();
        if !self.optimize(&cost, &allowed) {
            return LpOutcome::Unbounded;
        }
        let mut values = vec![rational::zero(); self.num_vars];
        for (r, &b) in self.basis.iter().enumerate() {
            if b < self.num_vars {
                values[b] = self.rhs(r).clone();
            }
        }
        let value = values.iter().zip(objective).map(|(x, c)| x * c).sum();
        LpOutcome::Optimal { value, values }
    }

    /// Maximizes `cost` from the current basis. False if unbounded.
    fn optimize(&mut self, cost: &[Rational], allowed: &[bool]) -> bool {
        let width = self.width();
        // reduced costs: c_j - Σ_r c_{B(r)} a_{rj}; last slot tracks -value
        let mut reduced: Vec<Rational> = cost.to_vec();
        reduced.push(rational::zero());
        for (r, &b) in self.basis.iter().enumerate() {
            if cost[b].is_zero() {
                continue;
            }
            for (j, a) in self.rows[r].iter().enumerate() {
                if !a.is_zero() {
                    reduced[j] -= &cost[b] * a;
                }
            }
        }
        loop {
            let Some(enter) = (0..width).find(|&j| allowed[j] && reduced[j].is_positive()) else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(r) / a;
                let better = match &leave {
                    None => true,
                    Some((best_r, best)) => {
                        ratio < *best || (ratio == *best && self.basis[r] < self.basis[*best_r])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let Some((leave, _)) = leave else {
                return false;
            };
            self.pivot(leave, enter, Some(&mut reduced));
        }
    }

    fn pivot(&mut self, pr: usize, pc: usize, reduced: Option<&mut Vec<Rational>>) {
        let inv = rational::one() / &self.rows[pr][pc];
        for a in self.rows[pr].iter_mut() {
            if !a.is_zero() {
                *a *= &inv;
            }
        }
        let pivot_row = self.rows[pr].clone();
        let eliminate = |row: &mut Vec<Rational>| {
            let factor = row[pc].clone();
            if factor.is_zero() {
                return;
            }
            for (a, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *a -= &factor * p;
                }
            }
        };
        for (r, row) in self.rows.iter_mut().enumerate() {
            if r != pr {
                eliminate(row);
            }
        }
        if let Some(red) = reduced {
            eliminate(red);
        }
        self.basis[pr] = pc;
    }
}
