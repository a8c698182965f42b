//! Dense two-phase simplex for the small equality-form programs
//!
//! ```text
//!     minimize  c'y   subject to  A y = b,  y >= 0,
//! ```
//!
//! where `A` has at most a few dozen rows and a few thousand columns. The
//! optimal row multipliers are returned alongside the objective; the moment
//! dual reads its polynomial witness straight out of them.

use crate::error::{Error, Result};

const PIVOT_EPS: f64 = 1e-11;
const REDUCED_COST_EPS: f64 = 1e-9;
const MAX_ITERS: usize = 20_000;
/// Switch from Dantzig pricing to Bland's rule after this many iterations.
const BLAND_AFTER: usize = 5_000;

#[derive(Debug, Clone)]
pub struct SimplexSolution {
    pub objective: f64,
    /// Row multipliers of the optimal basis (the dual variables).
    pub multipliers: Vec<f64>,
    /// Primal solution, indexed like the input columns.
    pub y: Vec<f64>,
}

/// Solves `Ax = b` in place by Gaussian elimination with partial pivoting.
/// `a` is row-major `n x n` and gets destroyed.
fn solve_dense(a: &mut [f64], b: &mut [f64], n: usize) -> Result<()> {
    for k in 0..n {
        let mut pivot_row = k;
        let mut pivot_val = a[k * n + k].abs();
        for r in k + 1..n {
            let v = a[r * n + k].abs();
            if v > pivot_val {
                pivot_row = r;
                pivot_val = v;
            }
        }
        if pivot_val < 1e-13 {
            return Err(Error::Numeric("singular basis matrix".into()));
        }
        if pivot_row != k {
            for j in 0..n {
                a.swap(k * n + j, pivot_row * n + j);
            }
            b.swap(k, pivot_row);
        }
        let piv = a[k * n + k];
        for r in k + 1..n {
            let factor = a[r * n + k] / piv;
            if factor == 0.0 {
                continue;
            }
            for j in k..n {
                a[r * n + j] -= factor * a[k * n + j];
            }
            b[r] -= factor * b[k];
        }
    }
    for k in (0..n).rev() {
        let mut acc = b[k];
        for j in k + 1..n {
            acc -= a[k * n + j] * b[j];
        }
        b[k] = acc / a[k * n + k];
    }
    Ok(())
}

struct Tableau<'a> {
    cols: &'a [Vec<f64>],
    n: usize,
    /// Artificial column `i` is `sign_i * e_i`, appended after the real ones.
    art_signs: Vec<f64>,
}

impl Tableau<'_> {
    fn total_cols(&self) -> usize {
        self.cols.len() + self.n
    }

    fn col_entry(&self, j: usize, row: usize) -> f64 {
        if j < self.cols.len() {
            self.cols[j][row]
        } else if j - self.cols.len() == row {
            self.art_signs[row]
        } else {
            0.0
        }
    }

    fn col_dot(&self, j: usize, v: &[f64]) -> f64 {
        if j < self.cols.len() {
            self.cols[j].iter().zip(v).map(|(a, b)| a * b).sum()
        } else {
            self.art_signs[j - self.cols.len()] * v[j - self.cols.len()]
        }
    }

    fn basis_matrix_t(&self, basis: &[usize]) -> Vec<f64> {
        let n = self.n;
        let mut m = vec![0.0; n * n];
        for (i, &j) in basis.iter().enumerate() {
            for row in 0..n {
                // transpose: basis column i becomes row i
                m[i * n + row] = self.col_entry(j, row);
            }
        }
        m
    }

    fn basis_matrix(&self, basis: &[usize]) -> Vec<f64> {
        let n = self.n;
        let mut m = vec![0.0; n * n];
        for (i, &j) in basis.iter().enumerate() {
            for row in 0..n {
                m[row * n + i] = self.col_entry(j, row);
            }
        }
        m
    }
}

/// One simplex phase: iterate to optimality for the cost vector `cost`
/// (indexed over real + artificial columns), mutating `basis` and the basic
/// values `xb`. `allow` masks columns permitted to enter.
fn run_phase(
    tab: &Tableau,
    cost: &[f64],
    basis: &mut [usize],
    xb: &mut Vec<f64>,
    allow: &dyn Fn(usize) -> bool,
) -> Result<Vec<f64>> {
    let n = tab.n;
    for iter in 0..MAX_ITERS {
        // multipliers: B' pi = c_B
        let mut bt = tab.basis_matrix_t(basis);
        let mut pi: Vec<f64> = basis.iter().map(|&j| cost[j]).collect();
        solve_dense(&mut bt, &mut pi, n)?;

        // price out
        let mut entering = None;
        let mut best = -REDUCED_COST_EPS;
        for j in 0..tab.total_cols() {
            if !allow(j) || basis.contains(&j) {
                continue;
            }
            let rc = cost[j] - tab.col_dot(j, &pi);
            if iter >= BLAND_AFTER {
                if rc < -REDUCED_COST_EPS {
                    entering = Some(j);
                    break;
                }
            } else if rc < best {
                best = rc;
                entering = Some(j);
            }
        }
        let Some(e) = entering else {
            return Ok(pi);
        };

        // direction: B u = A_e
        let mut b_mat = tab.basis_matrix(basis);
        let mut u: Vec<f64> = (0..n).map(|row| tab.col_entry(e, row)).collect();
        solve_dense(&mut b_mat, &mut u, n)?;

        let mut leave = None;
        let mut best_ratio = f64::INFINITY;
        for i in 0..n {
            if u[i] > PIVOT_EPS {
                let ratio = xb[i].max(0.0) / u[i];
                if ratio < best_ratio - 1e-12
                    || (ratio < best_ratio + 1e-12
                        && leave.is_some_and(|l: usize| basis[i] < basis[l]))
                {
                    best_ratio = ratio;
                    leave = Some(i);
                }
            }
        }
        let Some(l) = leave else {
            return Err(Error::Numeric("unbounded linear program".into()));
        };

        for i in 0..n {
            xb[i] -= best_ratio * u[i];
        }
        xb[l] = best_ratio;
        basis[l] = e;
    }
    Err(Error::Numeric("simplex iteration limit reached".into()))
}

/// Minimizes `c'y` over `{ y >= 0 : sum_j y_j cols[j] = rhs }`.
///
/// Columns all have length `rhs.len()`. Fails with [`Error::Infeasible`]
/// when the feasible set is empty.
pub fn solve_equality_lp(cols: &[Vec<f64>], cost: &[f64], rhs: &[f64]) -> Result<SimplexSolution> {
    let n = rhs.len();
    if cols.is_empty() || cost.len() != cols.len() {
        return Err(Error::InvalidInput("simplex: empty or mismatched columns".into()));
    }
    if cols.iter().any(|c| c.len() != n) {
        return Err(Error::InvalidInput("simplex: column length mismatch".into()));
    }
    let tab = Tableau {
        cols,
        n,
        art_signs: rhs.iter().map(|&b| if b < 0.0 { -1.0 } else { 1.0 }).collect(),
    };

    // phase 1: artificial basis, minimize the artificial mass
    let mut basis: Vec<usize> = (cols.len()..cols.len() + n).collect();
    let mut xb: Vec<f64> = rhs.iter().map(|b| b.abs()).collect();
    let mut phase1_cost = vec![0.0; tab.total_cols()];
    for j in cols.len()..tab.total_cols() {
        phase1_cost[j] = 1.0;
    }
    run_phase(&tab, &phase1_cost, &mut basis, &mut xb, &|_| true)?;
    let artificial_mass: f64 = basis
        .iter()
        .zip(xb.iter())
        .filter(|(&j, _)| j >= cols.len())
        .map(|(_, &v)| v)
        .sum();
    if artificial_mass > 1e-7 {
        return Err(Error::Infeasible(format!(
            "equality system infeasible (residual {artificial_mass:.3e})"
        )));
    }
    // drive leftover zero-valued artificials out where possible
    for i in 0..n {
        if basis[i] < cols.len() {
            continue;
        }
        let mut b_mat = tab.basis_matrix_t(&basis);
        let mut ei = vec![0.0; n];
        ei[i] = 1.0;
        solve_dense(&mut b_mat, &mut ei, n)?;
        if let Some(j) = (0..cols.len())
            .find(|&j| !basis.contains(&j) && tab.col_dot(j, &ei).abs() > 1e-7)
        {
            basis[i] = j;
        }
    }
    if basis.iter().any(|&j| j >= cols.len()) {
        return Err(Error::Numeric("dependent equality rows in linear program".into()));
    }

    // phase 2
    let mut phase2_cost = vec![0.0; tab.total_cols()];
    phase2_cost[..cols.len()].copy_from_slice(cost);
    let pi = run_phase(&tab, &phase2_cost, &mut basis, &mut xb, &|j| j < cols.len())?;

    let mut y = vec![0.0; cols.len()];
    for (i, &j) in basis.iter().enumerate() {
        y[j] = xb[i].max(0.0);
    }
    let objective = y.iter().zip(cost).map(|(a, b)| a * b).sum();
    Ok(SimplexSolution { objective, multipliers: pi, y })
}
