//! Dense two-phase tableau simplex for small equality-form programs
//!
//! ```text
//! minimize cᵀx  subject to  A x = b,  x ≥ 0.
//! ```
//!
//! Entering columns follow Dantzig's rule until a run of degenerate pivots
//! is seen, after which Bland's rule is used for the rest of the solve.

use crate::error::{Error, Result};

const PIVOT_TOL: f64 = 1e-9;
const DEGENERATE_RUN: usize = 64;

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    pub pivots: usize,
}

struct Tableau {
    rows: usize,
    width: usize,
    /// `rows` constraint rows followed by the objective row; the last
    /// column holds the right-hand side.
    data: Vec<f64>,
    basis: Vec<usize>,
    bland: bool,
    degenerate_run: usize,
    pivots: usize,
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.width + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.width - 1)
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.width;
        let inv = 1.0 / self.at(pr, pc);
        for v in &mut self.data[pr * w..(pr + 1) * w] {
            *v *= inv;
        }
        let pivot_row: Vec<f64> = self.data[pr * w..(pr + 1) * w].to_vec();
        let nz: Vec<usize> = (0..w).filter(|&c| pivot_row[c] != 0.0).collect();
        for r in 0..=self.rows {
            if r == pr {
                continue;
            }
            let factor = self.data[r * w + pc];
            if factor == 0.0 {
                continue;
            }
            let row = &mut self.data[r * w..(r + 1) * w];
            for &c in &nz {
                row[c] -= factor * pivot_row[c];
            }
            row[pc] = 0.0;
        }
        self.basis[pr] = pc;
        self.pivots += 1;
    }

    /// Runs simplex pivots over the columns allowed by `allowed`.
    fn optimize(&mut self, allowed: usize, max_pivots: usize) -> Result<()> {
        let obj = self.rows;
        loop {
            let entering = if self.bland {
                (0..allowed).find(|&c| self.at(obj, c) < -PIVOT_TOL)
            } else {
                (0..allowed)
                    .filter(|&c| self.at(obj, c) < -PIVOT_TOL)
                    .min_by(|&a, &b| self.at(obj, a).total_cmp(&self.at(obj, b)))
            };
            let Some(pc) = entering else {
                return Ok(());
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows {
                let a = self.at(r, pc);
                if a > PIVOT_TOL {
                    let ratio = self.rhs(r).max(0.0) / a;
                    let better = match leave {
                        None => true,
                        Some((lr, best)) => {
                            ratio < best - 1e-12 || (ratio <= best + 1e-12 && self.basis[r] < self.basis[lr])
                        }
                    };
                    if better {
                        leave = Some((r, ratio));
                    }
                }
            }
            let Some((pr, ratio)) = leave else {
                return Err(Error::Numerical("linear program is unbounded".into()));
            };
            if ratio <= 1e-12 {
                self.degenerate_run += 1;
                if self.degenerate_run >= DEGENERATE_RUN {
                    self.bland = true;
                }
            } else {
                self.degenerate_run = 0;
            }
            self.pivot(pr, pc);
            if self.pivots > max_pivots {
                return Err(Error::Numerical(format!("simplex exceeded {max_pivots} pivots")));
            }
        }
    }
}

/// Solves `min cᵀx, A x = b, x ≥ 0` with `A` given row-major.
pub fn solve_equality_lp(a: &[f64], b: &[f64], c: &[f64]) -> Result<LpSolution> {
    let (m, n) = (b.len(), c.len());
    if a.len() != m * n {
        return Err(Error::ShapeMismatch(format!("A has {} entries, expected {m}x{n}", a.len())));
    }
    let width = n + m + 1;
    let mut data = vec![0.0; (m + 1) * width];
    for r in 0..m {
        let sign = if b[r] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            data[r * width + j] = sign * a[r * n + j];
        }
        data[r * width + n + r] = 1.0;
        data[r * width + width - 1] = sign * b[r];
    }
    // Phase one: minimize the sum of artificials.
    for r in 0..m {
        for j in 0..n {
            data[m * width + j] -= data[r * width + j];
        }
        data[m * width + width - 1] -= data[r * width + width - 1];
    }
    let mut t = Tableau {
        rows: m,
        width,
        data,
        basis: (n..n + m).collect(),
        bland: false,
        degenerate_run: 0,
        pivots: 0,
    };
    let max_pivots = 50 * (m + n) + 1000;
    t.optimize(n + m, max_pivots)?;
    let infeasibility = -t.rhs(m);
    let scale = 1.0 + b.iter().map(|v| v.abs()).sum::<f64>();
    if infeasibility > 1e-9 * scale {
        return Err(Error::Numerical(format!("linear program is infeasible ({infeasibility:e})")));
    }

    // Drive artificials out of the basis; rows where that is impossible
    // are redundant and dropped.
    let mut keep = vec![true; m];
    for r in 0..m {
        if t.basis[r] >= n {
            let col = (0..n)
                .filter(|&j| t.at(r, j).abs() > PIVOT_TOL)
                .max_by(|&x, &y| t.at(r, x).abs().total_cmp(&t.at(r, y).abs()));
            match col {
                Some(j) => t.pivot(r, j),
                None => keep[r] = false,
            }
        }
    }
    let kept: Vec<usize> = (0..m).filter(|&r| keep[r]).collect();
    let new_width = n + 1;
    let mut data = vec![0.0; (kept.len() + 1) * new_width];
    for (nr, &r) in kept.iter().enumerate() {
        for j in 0..n {
            data[nr * new_width + j] = t.at(r, j);
        }
        data[nr * new_width + n] = t.rhs(r);
    }
    let basis: Vec<usize> = kept.iter().map(|&r| t.basis[r]).collect();
    let rows = kept.len();
    // Phase two objective row: c minus its basic components.
    data[rows * new_width..rows * new_width + n].copy_from_slice(c);
    for (r, &bcol) in basis.iter().enumerate() {
        let cb = c[bcol];
        if cb != 0.0 {
            for j in 0..=n {
                let v = data[r * new_width + j];
                data[rows * new_width + j] -= cb * v;
            }
        }
    }
    let mut t2 = Tableau {
        rows,
        width: new_width,
        data,
        basis,
        bland: false,
        degenerate_run: 0,
        pivots: t.pivots,
    };
    t2.optimize(n, max_pivots)?;

    let mut x = vec![0.0; n];
    for (r, &bcol) in t2.basis.iter().enumerate() {
        x[bcol] = t2.rhs(r).max(0.0);
    }
    let objective = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
    Ok(LpSolution {
        x,
        objective,
        pivots: t2.pivots,
    })
}
