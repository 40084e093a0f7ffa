//! Two-phase tableau simplex for `min c·y, A y = b, y ≥ 0` with Bland's rule.
//!
//! Every row carries an artificial column for the whole run, so the
//! tableau always holds `B⁻¹` and the simplex multipliers can be read off
//! the artificial columns in either phase.

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum StandardOutcome<T> {
    /// Primal basic optimum and multipliers `π` with `π A ≤ c`, `π·b = c·y`.
    Optimal { primal: Vec<T>, multipliers: Vec<T> },
    /// `π` with `π A ≤ 0` and `π·b > 0`.
    Infeasible { multipliers: Vec<T> },
    /// Feasible point plus direction `d ≥ 0`, `A d = 0`, `c·d < 0`.
    Unbounded { primal: Vec<T>, direction: Vec<T> },
}

struct Tableau<T> {
    /// `m` rows of `n + m` columns followed by the right-hand side.
    rows: Vec<Vec<T>>,
    basis: Vec<usize>,
    n: usize,
}

impl<T: Scalar> Tableau<T> {
    fn m(&self) -> usize {
        self.rows.len()
    }

    fn rhs(&self, i: usize) -> &T {
        &self.rows[i][self.n + self.m()]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = T::one() / &self.rows[r][c];
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= inv.clone();
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= f.clone() * p;
                }
            }
        }
        self.rows[r] = pivot_row;
        self.basis[r] = c;
    }

    /// Reduced costs `c_j − c_B B⁻¹ A_j` for all `n + m` columns.
    fn reduced_costs(&self, cost: &[T]) -> Vec<T> {
        let width = self.n + self.m();
        let mut red: Vec<T> = (0..width)
            .map(|j| cost.get(j).cloned().unwrap_or_else(T::zero))
            .collect();
        for (i, row) in self.rows.iter().enumerate() {
            let cb = cost.get(self.basis[i]).cloned().unwrap_or_else(T::zero);
            if cb.is_zero() {
                continue;
            }
            for (r, a) in red.iter_mut().zip(row.iter()) {
                if !a.is_zero() {
                    *r -= cb.clone() * a;
                }
            }
        }
        red
    }

    /// Runs Bland's rule over the real columns. Returns the entering column
    /// of an unbounded direction if one is found.
    fn optimize(&mut self, cost: &[T]) -> Option<usize> {
        loop {
            let red = self.reduced_costs(cost);
            // no improving column: optimal
            let q = (0..self.n).find(|&j| red[j].is_negative())?;
            let mut best: Option<(T, usize, usize)> = None;
            for i in 0..self.m() {
                let a = &self.rows[i][q];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i).clone() / a;
                let better = match &best {
                    None => true,
                    Some((r, _, var)) => ratio < *r || (ratio == *r && self.basis[i] < *var),
                };
                if better {
                    best = Some((ratio, i, self.basis[i]));
                }
            }
            match best {
                Some((_, r, _)) => self.pivot(r, q),
                None => return Some(q),
            }
        }
    }

    fn primal(&self) -> Vec<T> {
        let mut y = vec![T::zero(); self.n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.n {
                y[b] = self.rhs(i).clone();
            }
        }
        y
    }

    /// `π = c_B B⁻¹`, read from the artificial columns.
    fn multipliers(&self, cost: &[T], art_cost: &T) -> Vec<T> {
        let red = self.reduced_costs(cost);
        (0..self.m())
            .map(|i| art_cost.clone() - &red[self.n + i])
            .collect()
    }
}

pub(crate) fn solve_standard<T: Scalar>(a: &[Vec<T>], b: &[T], c: &[T]) -> StandardOutcome<T> {
    let m = a.len();
    let n = c.len();
    let mut sign = vec![T::one(); m];
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let flip = b[i].is_negative();
        if flip {
            sign[i] = -T::one();
        }
        let mut row = Vec::with_capacity(n + m + 1);
        row.extend(a[i].iter().take(n).map(|x| if flip { -x.clone() } else { x.clone() }));
        for k in 0..m {
            row.push(if k == i { T::one() } else { T::zero() });
        }
        row.push(b[i].abs());
        rows.push(row);
    }
    let mut tab = Tableau {
        rows,
        basis: (n..n + m).collect(),
        n,
    };

    // Phase I: minimise the sum of artificials.
    let mut phase1 = vec![T::zero(); n + m];
    for x in phase1[n..].iter_mut() {
        *x = T::one();
    }
    let unbounded = tab.optimize(&phase1);
    debug_assert!(unbounded.is_none(), "phase I is bounded below");
    let infeasibility: T = (0..m)
        .filter(|&i| tab.basis[i] >= n)
        .fold(T::zero(), |acc, i| acc + tab.rhs(i));
    if infeasibility.is_positive() {
        let pi = tab.multipliers(&phase1, &T::one());
        let multipliers = pi.into_iter().zip(&sign).map(|(p, s)| p * s).collect();
        return StandardOutcome::Infeasible { multipliers };
    }

    // Drive zero-level artificials out of the basis where possible; rows
    // where this fails are redundant and never constrain a ratio test.
    for i in 0..m {
        if tab.basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| !tab.rows[i][j].is_zero()) {
                tab.pivot(i, j);
            }
        }
    }

    let cost: Vec<T> = c.to_vec();
    if let Some(q) = tab.optimize(&cost) {
        let mut direction = vec![T::zero(); n];
        direction[q] = T::one();
        for (i, &bv) in tab.basis.iter().enumerate() {
            if bv < n {
                direction[bv] = -tab.rows[i][q].clone();
            }
        }
        return StandardOutcome::Unbounded {
            primal: tab.primal(),
            direction,
        };
    }
    let pi = tab.multipliers(&cost, &T::zero());
    let multipliers = pi.into_iter().zip(&sign).map(|(p, s)| p * s).collect();
    StandardOutcome::Optimal {
        primal: tab.primal(),
        multipliers,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;
    use num_traits::Signed;

    fn r(x: i64) -> Rational64 {
        Rational64::from_integer(x)
    }

    #[test]
    fn small_standard_problem() {
        // min -y0 - y1  s.t. y0 + y2 = 1, y1 + y3 = 2
        let a = vec![vec![r(1), r(0), r(1), r(0)], vec![r(0), r(1), r(0), r(1)]];
        let b = vec![r(1), r(2)];
        let c = vec![r(-1), r(-1), r(0), r(0)];
        match solve_standard(&a, &b, &c) {
            StandardOutcome::Optimal { primal, multipliers } => {
                assert_eq!(primal, vec![r(1), r(2), r(0), r(0)]);
                assert_eq!(multipliers, vec![r(-1), r(-1)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn infeasible_standard_problem() {
        // y0 = -1 with y0 ≥ 0
        let a = vec![vec![r(1)]];
        let outcome = solve_standard(&a, &[r(-1)], &[r(0)]);
        let StandardOutcome::Infeasible { multipliers } = outcome else {
            panic!("expected infeasible");
        };
        assert!((multipliers[0] * r(-1)).is_positive());
        assert!(!(multipliers[0] * r(1)).is_positive());
    }

    #[test]
    fn redundant_rows_are_tolerated() {
        let a = vec![vec![r(1), r(1)], vec![r(2), r(2)]];
        let b = vec![r(1), r(2)];
        let c = vec![r(1), r(2)];
        match solve_standard(&a, &b, &c) {
            StandardOutcome::Optimal { primal, .. } => assert_eq!(primal, vec![r(1), r(0)]),
            other => panic!("unexpected {other:?}"),
        }
    }
}
