//! Dense two-phase simplex over exact rationals.
//!
//! Solves `min c·x` subject to `A x = b`, `x ≥ 0`. Pricing is by most negative
//! reduced cost, falling back to Bland's rule (lowest-index entering column,
//! lowest-index basic variable among ratio ties) once pivots stall, so every
//! solve terminates.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    /// `dual` satisfies `dual·A_j ≤ c_j` for every column, with equality on the basis.
    Optimal {
        x: Vec<Rational>,
        value: Rational,
        dual: Vec<Rational>,
    },
    /// Farkas certificate `y`: `y·A_j ≤ 0` for every column and `y·b > 0`.
    Infeasible {
        farkas: Vec<Rational>,
    },
    Unbounded,
}

/// Equality-form linear program. `rows[i]` holds row `i` of `A`.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub rows: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
    pub cost: Vec<Rational>,
}

struct Tableau {
    // m rows of (structural columns | artificial columns | rhs)
    cells: Vec<Vec<Rational>>,
    reduced: Vec<Rational>,
    objective_rhs: Rational,
    basis: Vec<usize>,
    structural: usize,
}

impl Tableau {
    fn width(&self) -> usize {
        self.structural + self.cells.len()
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let width = self.width();
        let inv = Rational::one() / &self.cells[row][col];
        for value in self.cells[row].iter_mut() {
            if !value.is_zero() {
                *value *= &inv;
            }
        }
        let pivot_row = self.cells[row].clone();
        for (r, cells) in self.cells.iter_mut().enumerate() {
            if r == row || cells[col].is_zero() {
                continue;
            }
            let factor = cells[col].clone();
            for (cell, p) in cells.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *cell -= &factor * p;
                }
            }
        }
        if !self.reduced[col].is_zero() {
            let factor = self.reduced[col].clone();
            for (cell, p) in self.reduced.iter_mut().zip(&pivot_row[..width]) {
                if !p.is_zero() {
                    *cell -= &factor * p;
                }
            }
            self.objective_rhs -= &factor * &pivot_row[width];
        }
        self.basis[row] = col;
    }

    /// Pivots over columns `0..limit` until optimal. Returns `false` if unbounded.
    ///
    /// Entering columns follow the most negative reduced cost; after a run of
    /// degenerate pivots the rule switches to Bland's for the rest of the
    /// phase, which cannot cycle.
    fn optimize(&mut self, limit: usize) -> bool {
        let width = self.width();
        let mut bland = false;
        let mut stalled = 0usize;
        loop {
            let col = if bland {
                (0..limit).find(|&j| self.reduced[j].is_negative())
            } else {
                (0..limit)
                    .filter(|&j| self.reduced[j].is_negative())
                    .min_by(|&a, &b| self.reduced[a].cmp(&self.reduced[b]).then(a.cmp(&b)))
            };
            let Some(col) = col else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for (r, cells) in self.cells.iter().enumerate() {
                if !cells[col].is_positive() {
                    continue;
                }
                let ratio = &cells[width] / &cells[col];
                let better = match &best {
                    None => true,
                    Some((br, bratio)) => ratio < *bratio || (ratio == *bratio && self.basis[r] < self.basis[*br]),
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            match best {
                Some((row, ratio)) => {
                    if ratio.is_zero() {
                        stalled += 1;
                        if stalled > DEGENERATE_LIMIT {
                            bland = true;
                        }
                    } else {
                        stalled = 0;
                    }
                    self.pivot(row, col);
                }
                None => return false,
            }
        }
    }
}

const DEGENERATE_LIMIT: usize = 32;

impl LinearProgram {
    pub fn solve(&self) -> LpOutcome {
        let m = self.rows.len();
        let n = self.cost.len();
        assert_eq!(self.rhs.len(), m, "rhs length");
        assert!(self.rows.iter().all(|r| r.len() == n), "row length");

        let signs: Vec<Rational> = self
            .rhs
            .iter()
            .map(|b| {
                if b.is_negative() {
                    -Rational::one()
                } else {
                    Rational::one()
                }
            })
            .collect();
        let width = n + m;
        let mut cells = Vec::with_capacity(m);
        for (i, row) in self.rows.iter().enumerate() {
            let mut cell_row = Vec::with_capacity(width + 1);
            cell_row.extend(row.iter().map(|a| a * &signs[i]));
            cell_row.extend((0..m).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
            cell_row.push(&self.rhs[i] * &signs[i]);
            cells.push(cell_row);
        }
        // Phase one: minimize the sum of artificials.
        let mut reduced = vec![Rational::zero(); width];
        for j in 0..n {
            reduced[j] = -cells.iter().map(|r| &r[j]).sum::<Rational>();
        }
        let objective_rhs = -cells.iter().map(|r| &r[width]).sum::<Rational>();
        let mut tab = Tableau {
            cells,
            reduced,
            objective_rhs,
            basis: (n..n + m).collect(),
            structural: n,
        };
        let bounded = tab.optimize(n);
        debug_assert!(bounded, "phase one is bounded below by zero");
        // objective_rhs holds -z
        if tab.objective_rhs.is_negative() {
            let farkas = (0..m)
                .map(|i| (Rational::one() - &tab.reduced[n + i]) * &signs[i])
                .collect();
            return LpOutcome::Infeasible { farkas };
        }

        // Drive zero-valued artificials out of the basis where possible.
        for row in 0..m {
            if tab.basis[row] < n {
                continue;
            }
            if let Some(col) = (0..n).find(|&j| !tab.cells[row][j].is_zero()) {
                tab.pivot(row, col);
            }
        }

        // Phase two with the true costs; artificial columns stay out.
        let mut reduced = vec![Rational::zero(); width];
        let mut objective_rhs = Rational::zero();
        for j in 0..width {
            let cj = if j < n { self.cost[j].clone() } else { Rational::zero() };
            let mut dj = cj;
            for (r, cells) in tab.cells.iter().enumerate() {
                let b = tab.basis[r];
                if b < n && !self.cost[b].is_zero() && !cells[j].is_zero() {
                    dj -= &self.cost[b] * &cells[j];
                }
            }
            reduced[j] = dj;
        }
        for (r, cells) in tab.cells.iter().enumerate() {
            let b = tab.basis[r];
            if b < n {
                objective_rhs -= &self.cost[b] * &cells[width];
            }
        }
        tab.reduced = reduced;
        tab.objective_rhs = objective_rhs;
        if !tab.optimize(n) {
            return LpOutcome::Unbounded;
        }

        let mut x = vec![Rational::zero(); n];
        for (r, &b) in tab.basis.iter().enumerate() {
            if b < n {
                x[b] = tab.cells[r][width].clone();
            }
        }
        let value = -tab.objective_rhs.clone();
        let dual = (0..m).map(|i| -&tab.reduced[n + i] * &signs[i]).collect();
        LpOutcome::Optimal { x, value, dual }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn lp(rows: Vec<Vec<i64>>, rhs: Vec<i64>, cost: Vec<i64>) -> LinearProgram {
        LinearProgram {
            rows: rows.into_iter().map(|r| r.into_iter().map(int).collect()).collect(),
            rhs: rhs.into_iter().map(int).collect(),
            cost: cost.into_iter().map(int).collect(),
        }
    }

    fn dot(a: &[Rational], b: &[Rational]) -> Rational {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    #[test]
    fn solves_small_lp_with_dual() {
        // min -x - y  s.t. x + 2y + s1 = 4, 3x + y + s2 = 6
        let p = lp(vec![vec![1, 2, 1, 0], vec![3, 1, 0, 1]], vec![4, 6], vec![-1, -1, 0, 0]);
        match p.solve() {
            LpOutcome::Optimal { x, value, dual } => {
                assert_eq!(x[0], rat(8, 5));
                assert_eq!(x[1], rat(6, 5));
                assert_eq!(value, rat(-14, 5));
                // strong duality
                assert_eq!(dot(&dual, &p.rhs), value);
                for j in 0..4 {
                    let col: Vec<Rational> = p.rows.iter().map(|r| r[j].clone()).collect();
                    assert!(dot(&dual, &col) <= p.cost[j]);
                }
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_gives_farkas() {
        // x + y = 1, x + y = 2
        let p = lp(vec![vec![1, 1], vec![1, 1]], vec![1, 2], vec![0, 0]);
        let LpOutcome::Infeasible { farkas } = p.solve() else {
            panic!()
        };
        for j in 0..2 {
            let col: Vec<Rational> = p.rows.iter().map(|r| r[j].clone()).collect();
            assert!(!dot(&farkas, &col).is_positive());
        }
        assert!(dot(&farkas, &p.rhs).is_positive());
    }

    #[test]
    fn negative_rhs_and_redundant_rows() {
        // -x - y = -1 (twice), min x
        let p = lp(vec![vec![-1, -1], vec![-1, -1]], vec![-1, -1], vec![1, 0]);
        let LpOutcome::Optimal { x, value, .. } = p.solve() else {
            panic!()
        };
        assert_eq!(value, int(0));
        assert_eq!(x, vec![int(0), int(1)]);
    }

    #[test]
    fn detects_unbounded() {
        // x - y = 0, min -x
        let p = lp(vec![vec![1, -1]], vec![0], vec![-1, 0]);
        assert_eq!(p.solve(), LpOutcome::Unbounded);
    }

    #[test]
    fn no_columns() {
        let p = LinearProgram {
            rows: vec![vec![], vec![]],
            rhs: vec![rat(1, 2), int(1)],
            cost: vec![],
        };
        assert!(matches!(p.solve(), LpOutcome::Infeasible { .. }));
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's classic cycling instance (with slacks).
        let q = |v: &[(i64, i64)]| v.iter().map(|&(a, b)| rat(a, b)).collect::<Vec<_>>();
        let p = LinearProgram {
            rows: vec![
                q(&[(1, 4), (-8, 1), (-1, 1), (9, 1), (1, 1), (0, 1), (0, 1)]),
                q(&[(1, 2), (-12, 1), (-1, 2), (3, 1), (0, 1), (1, 1), (0, 1)]),
                q(&[(0, 1), (0, 1), (1, 1), (0, 1), (0, 1), (0, 1), (1, 1)]),
            ],
            rhs: q(&[(0, 1), (0, 1), (1, 1)]),
            cost: q(&[(-3, 4), (20, 1), (-1, 2), (6, 1), (0, 1), (0, 1), (0, 1)]),
        };
        let LpOutcome::Optimal { value, .. } = p.solve() else {
            panic!()
        };
        assert_eq!(value, rat(-5, 4));
    }
}
