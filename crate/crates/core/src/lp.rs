//! Strictly positive solutions of `A w = b` by an exact two-phase simplex.
//!
//! Writing `w = v + t·1` with `v ≥ 0` and `0 ≤ t ≤ 1`, a strictly positive
//! solution exists iff the largest feasible `t` is positive. Pivoting follows
//! Bland's rule, so the method terminates on degenerate tableaus.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

struct Tableau {
    /// Constraint rows; the last entry of each row is its right-hand side.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    columns: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let lead = self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            *x /= &lead;
        }
        for i in 0..self.rows.len() {
            if i != r && !self.rows[i][c].is_zero() {
                let factor = self.rows[i][c].clone();
                for j in 0..=self.columns {
                    let delta = &factor * &self.rows[r][j];
                    self.rows[i][j] -= delta;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost · x` over columns allowed to enter. Returns `false`
    /// when unbounded.
    fn maximize(&mut self, cost: &[Rational], allowed: impl Fn(usize) -> bool) -> bool {
        loop {
            let entering = (0..self.columns).filter(|&j| allowed(j)).find(|&j| {
                let mut reduced = cost[j].clone();
                for (row, &b) in self.rows.iter().zip(&self.basis) {
                    if !cost[b].is_zero() {
                        reduced -= &cost[b] * &row[j];
                    }
                }
                reduced.is_positive()
            });
            let Some(c) = entering else {
                return true;
            };
            let mut leaving: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[c].is_positive() {
                    let ratio = &row[self.columns] / &row[c];
                    let better = match &leaving {
                        None => true,
                        Some((l, best)) => ratio < *best || (ratio == *best && self.basis[i] < self.basis[*l]),
                    };
                    if better {
                        leaving = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = leaving else {
                return false;
            };
            self.pivot(r, c);
        }
    }

    fn value(&self, column: usize) -> Rational {
        self.basis
            .iter()
            .position(|&b| b == column)
            .map_or_else(Rational::zero, |r| self.rows[r][self.columns].clone())
    }
}

/// A solution of `rows · w = rhs` with every entry strictly positive, chosen
/// to maximize its smallest entry (capped at 1), or `None` when none exists.
pub fn strictly_positive_solution(rows: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(rows.len(), rhs.len(), "one right-hand side per row");
    let vars = rows.first().map_or(0, Vec::len);
    let t = vars;
    let slack = vars + 1;
    let m = rows.len() + 1;
    let structural = vars + 2;
    let columns = structural + m;

    let mut tableau_rows = Vec::with_capacity(m);
    for (row, b) in rows.iter().zip(rhs) {
        let mut out = vec![Rational::zero(); columns + 1];
        let sign = if b.is_negative() { -Rational::one() } else { Rational::one() };
        for (j, a) in row.iter().enumerate() {
            out[j] = &sign * a;
        }
        out[t] = &sign * row.iter().sum::<Rational>();
        out[columns] = &sign * b;
        tableau_rows.push(out);
    }
    let mut cap = vec![Rational::zero(); columns + 1];
    cap[t] = Rational::one();
    cap[slack] = Rational::one();
    cap[columns] = Rational::one();
    tableau_rows.push(cap);
    for (i, row) in tableau_rows.iter_mut().enumerate() {
        row[structural + i] = Rational::one();
    }
    let mut tableau = Tableau {
        rows: tableau_rows,
        basis: (structural..columns).collect(),
        columns,
    };

    let mut phase_one = vec![Rational::zero(); columns];
    for c in phase_one.iter_mut().skip(structural) {
        *c = -Rational::one();
    }
    tableau.maximize(&phase_one, |_| true);
    if (structural..columns).any(|a| tableau.value(a).is_positive()) {
        return None;
    }
    // Drive artificial columns out of the basis, dropping redundant rows.
    let mut r = 0;
    while r < tableau.rows.len() {
        if tableau.basis[r] >= structural {
            match (0..structural).find(|&j| !tableau.rows[r][j].is_zero()) {
                Some(c) => tableau.pivot(r, c),
                None => {
                    tableau.rows.remove(r);
                    tableau.basis.remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }

    let mut phase_two = vec![Rational::zero(); columns];
    phase_two[t] = Rational::one();
    let bounded = tableau.maximize(&phase_two, |j| j < structural);
    debug_assert!(bounded, "t is capped at 1");
    let shift = tableau.value(t);
    if !shift.is_positive() {
        return None;
    }
    Some((0..vars).map(|j| tableau.value(j) + &shift).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn check(rows: &[Vec<Rational>], rhs: &[Rational], w: &[Rational]) {
        assert!(w.iter().all(|x| x.is_positive()));
        for (row, b) in rows.iter().zip(rhs) {
            let lhs: Rational = row.iter().zip(w).map(|(a, x)| a * x).sum();
            assert_eq!(&lhs, b);
        }
    }

    fn ints(values: &[i64]) -> Vec<Rational> {
        values.iter().map(|&v| int(v)).collect()
    }

    #[test]
    fn finds_interior_point() {
        let rows = vec![ints(&[1, 1, 0]), ints(&[0, 1, 1])];
        let rhs = ints(&[2, 2]);
        let w = strictly_positive_solution(&rows, &rhs).unwrap();
        check(&rows, &rhs, &w);
    }

    #[test]
    fn boundary_only_is_rejected() {
        // w1 + w2 = 1 and w1 = 1 force w2 = 0.
        let rows = vec![ints(&[1, 1]), ints(&[1, 0])];
        assert!(strictly_positive_solution(&rows, &ints(&[1, 1])).is_none());
    }

    #[test]
    fn inconsistent_is_rejected() {
        let rows = vec![ints(&[1, 1]), ints(&[1, 1])];
        assert!(strictly_positive_solution(&rows, &ints(&[1, 2])).is_none());
    }

    #[test]
    fn redundant_rows_are_fine() {
        let rows = vec![ints(&[1, 1, 1]), ints(&[1, 1, 1]), ints(&[1, 0, 0])];
        let rhs = ints(&[3, 3, 1]);
        let w = strictly_positive_solution(&rows, &rhs).unwrap();
        check(&rows, &rhs, &w);
    }

    #[test]
    fn unique_positive_solution() {
        let rows = vec![ints(&[1, 1]), ints(&[1, -1])];
        let w = strictly_positive_solution(&rows, &ints(&[3, 1])).unwrap();
        assert_eq!(w, ints(&[2, 1]));
    }
}
