//! Minimax values of explicit payoff matrices by dense simplex.
//!
//! The row player minimizes `max_j Σ_i A[i][j]·x_i` over distributions `x`.
//! After shifting every payoff to at least 1 and substituting `y = x/ρ`, this
//! is `max Σ y` subject to `Aᵀy ≤ 1, y ≥ 0`, whose slack basis is feasible
//! from the start. Pivoting prices by largest reduced cost with a Harris ratio
//! test, reinverts the basis periodically, and finishes with dual simplex
//! passes if rounding left the basis infeasible. The answer is only returned
//! after the primal strategy and the dual (column) strategy have been
//! re-evaluated against the original matrix and found to sandwich the value.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::exact::exact_minimax;
use crate::error::{invalid, Error, Result};

/// Largest accepted gap between the primal and dual values.
pub const CERTIFICATE_GAP: f64 = 2e-9;

const PIVOT_EPS: f64 = 1e-9;

/// Dense row-major payoff matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Payoffs {
    n_rows: usize,
    n_cols: usize,
    data: Vec<f64>,
}

impl Payoffs {
    pub fn new(n_rows: usize, n_cols: usize, data: Vec<f64>) -> Result<Self> {
        if n_rows == 0 || n_cols == 0 {
            return Err(invalid!("payoff matrix must be nonempty"));
        }
        if data.len() != n_rows * n_cols {
            return Err(invalid!("{n_rows}x{n_cols} payoff matrix given {} entries", data.len()));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(invalid!("payoffs must be finite"));
        }
        Ok(Payoffs { n_rows, n_cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n_cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(invalid!("ragged payoff rows"));
        }
        Self::new(rows.len(), n_cols, rows.concat())
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n_cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n_cols..(i + 1) * self.n_cols]
    }

    /// Expected payoff of every column when rows are played with `x`.
    pub fn column_payoffs(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n_cols];
        for (i, &xi) in x.iter().enumerate() {
            if xi != 0.0 {
                for (o, a) in out.iter_mut().zip(self.row(i)) {
                    *o += xi * a;
                }
            }
        }
        out
    }

    /// Expected payoff of every row against the column strategy `y`.
    pub fn row_payoffs(&self, y: &[f64]) -> Vec<f64> {
        (0..self.n_rows).map(|i| self.row(i).iter().zip(y).map(|(a, b)| a * b).sum()).collect()
    }

    /// Side-by-side concatenation of two matrices with the same rows.
    pub fn hstack(&self, other: &Payoffs) -> Result<Payoffs> {
        if self.n_rows != other.n_rows {
            return Err(invalid!("cannot join {} rows with {} rows", self.n_rows, other.n_rows));
        }
        let mut data = Vec::with_capacity(self.data.len() + other.data.len());
        for i in 0..self.n_rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Payoffs::new(self.n_rows, self.n_cols + other.n_cols, data)
    }
}

/// Optimal strategies for both players plus the certified value.
#[derive(Debug, Clone, PartialEq)]
pub struct MinimaxSolution {
    /// `max_j Σ_i A[i][j]·x_i` for the returned row strategy.
    pub value: f64,
    pub row_strategy: Vec<f64>,
    /// Optimal column strategy; `min_i Σ_j A[i][j]·y_j` is at least `value - gap`.
    pub col_certificate: Vec<f64>,
    /// Value guaranteed by the column certificate.
    pub dual_value: f64,
}

impl MinimaxSolution {
    pub fn gap(&self) -> f64 {
        self.value - self.dual_value
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.row_strategy.iter().enumerate().filter(|(_, &x)| x > 0.0).map(|(i, _)| i)
    }
}

/// Dense LU factorization with partial pivoting.
struct Lu {
    n: usize,
    /// Unit-lower `L` below the diagonal, `U` on and above it.
    lu: Vec<f64>,
    /// Row `k` of the factored matrix is row `perm[k]` of the input.
    perm: Vec<usize>,
}

impl Lu {
    fn new(mut m: Vec<f64>, n: usize) -> Result<Self> {
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let pivot = (col..n).max_by(|&p, &q| m[p * n + col].abs().total_cmp(&m[q * n + col].abs())).unwrap_or(col);
            if m[pivot * n + col] == 0.0 {
                return Err(Error::Numerical("singular basis".into()));
            }
            if pivot != col {
                for c in 0..n {
                    m.swap(pivot * n + c, col * n + c);
                }
                perm.swap(pivot, col);
            }
            let p = m[col * n + col];
            for r in col + 1..n {
                let f = m[r * n + col] / p;
                m[r * n + col] = f;
                if f != 0.0 {
                    for c in col + 1..n {
                        m[r * n + c] -= f * m[col * n + c];
                    }
                }
            }
        }
        Ok(Lu { n, lu: m, perm })
    }

    /// Solves `M z = b`.
    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut z: Vec<f64> = self.perm.iter().map(|&k| b[k]).collect();
        for r in 0..n {
            let s: f64 = (0..r).map(|c| self.lu[r * n + c] * z[c]).sum();
            z[r] -= s;
        }
        for r in (0..n).rev() {
            let s: f64 = (r + 1..n).map(|c| self.lu[r * n + c] * z[c]).sum();
            z[r] = (z[r] - s) / self.lu[r * n + r];
        }
        z
    }

    /// Solves `Mᵀ z = b`.
    fn solve_transposed(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut w = b.to_vec();
        for r in 0..n {
            let s: f64 = (0..r).map(|c| self.lu[c * n + r] * w[c]).sum();
            w[r] = (w[r] - s) / self.lu[r * n + r];
        }
        for r in (0..n).rev() {
            let s: f64 = (r + 1..n).map(|c| self.lu[c * n + r] * w[c]).sum();
            w[r] -= s;
        }
        let mut z = vec![0.0; n];
        for (k, &row) in self.perm.iter().enumerate() {
            z[row] = w[k];
        }
        z
    }
}

/// Pivots between refactorizations of the basis.
const REINVERT_EVERY: usize = 32;
/// Basic variables may dip this far below zero during the ratio test.
const FEASIBILITY_EPS: f64 = 1e-9;
/// Degenerate pivots in a row before switching to Bland's rule.
const DEGENERATE_RUN: usize = 50;
const CLEANUP_ROUNDS: usize = 8;

struct Tableau {
    /// `n_cons` constraint rows then the objective row, each `width` wide.
    cells: Vec<f64>,
    /// The tableau before any pivot.
    original: Vec<f64>,
    width: usize,
    n_cons: usize,
    n_vars: usize,
    basis: Vec<usize>,
    /// Largest original coefficient of every column, at least 1.
    scale: Vec<f64>,
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.cells[r * self.width + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.width - 1)
    }

    /// How far below zero the basic variable of row `r` may sit: a negative
    /// value on a column with huge coefficients hides a large violation.
    fn tolerance(&self, r: usize) -> f64 {
        FEASIBILITY_EPS / self.scale[self.basis[r]]
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.width;
        let p = self.at(pr, pc);
        for c in 0..w {
            self.cells[pr * w + c] /= p;
        }
        self.cells[pr * w + pc] = 1.0;
        for r in 0..=self.n_cons {
            if r == pr {
                continue;
            }
            let f = self.at(r, pc);
            if f != 0.0 {
                for c in 0..w {
                    let v = self.cells[pr * w + c];
                    if v != 0.0 {
                        self.cells[r * w + c] -= f * v;
                    }
                }
                self.cells[r * w + pc] = 0.0;
            }
        }
        self.basis[pr] = pc;
    }

    /// Recomputes the whole tableau for the current basis from the original
    /// data, discarding the rounding accumulated by pivoting.
    fn reinvert(&mut self) -> Result<()> {
        let (n, w) = (self.n_cons, self.width);
        let mut b = vec![0.0; n * n];
        for j in 0..n {
            for (r, &var) in self.basis.iter().enumerate() {
                b[j * n + r] = self.original[j * w + var];
            }
        }
        let lu = Lu::new(b, n)?;
        let obj = n * w;
        let costs: Vec<f64> = self.basis.iter().map(|&var| -self.original[obj + var]).collect();
        let duals = lu.solve_transposed(&costs);
        let mut column = vec![0.0; n];
        for c in 0..w {
            for (j, x) in column.iter_mut().enumerate() {
                *x = self.original[j * w + c];
            }
            let z = lu.solve(&column);
            for (r, zr) in z.iter().enumerate() {
                self.cells[r * w + c] = *zr;
            }
            let priced: f64 = duals.iter().zip(&column).map(|(d, a)| d * a).sum();
            self.cells[obj + c] = self.original[obj + c] + priced;
        }
        for (r, &var) in self.basis.iter().enumerate() {
            for k in 0..=n {
                self.cells[k * w + var] = if k == r { 1.0 } else { 0.0 };
            }
        }
        Ok(())
    }

    /// Most negative reduced cost, or the first negative one when `bland`.
    fn entering(&self, bland: bool) -> Option<usize> {
        let obj = self.n_cons;
        let candidates = (0..self.n_vars + self.n_cons).filter(|&c| self.at(obj, c) < -PIVOT_EPS);
        if bland {
            candidates.min()
        } else {
            candidates.min_by(|&p, &q| self.at(obj, p).total_cmp(&self.at(obj, q)))
        }
    }

    /// Two-pass ratio test: find the largest step that keeps every basic
    /// variable above minus its tolerance, then among the rows blocking within
    /// that step take the largest pivot element.
    fn leaving(&self, enter: usize) -> Option<usize> {
        let mut bound = f64::INFINITY;
        for r in 0..self.n_cons {
            let a = self.at(r, enter);
            if a > PIVOT_EPS {
                bound = bound.min((self.rhs(r).max(0.0) + self.tolerance(r)) / a);
            }
        }
        let mut best: Option<(usize, f64)> = None;
        for r in 0..self.n_cons {
            let a = self.at(r, enter);
            if a > PIVOT_EPS && self.rhs(r).max(0.0) / a <= bound {
                let better = match best {
                    None => true,
                    Some((b, ab)) => a > ab || (a == ab && self.basis[r] < self.basis[b]),
                };
                if better {
                    best = Some((r, a));
                }
            }
        }
        best.map(|(r, _)| r)
    }

    /// Primal simplex to optimality. Pricing is by largest reduced cost and
    /// falls back to Bland's rule after a run of degenerate pivots. The
    /// problem is bounded because every structural coefficient is at least 1.
    fn primal(&mut self, budget: &mut usize) -> Result<()> {
        let mut since_reinversion = 0;
        let mut degenerate_run = 0;
        while *budget > 0 {
            *budget -= 1;
            let bland = degenerate_run >= DEGENERATE_RUN;
            let enter = match self.entering(bland) {
                Some(c) => c,
                None if since_reinversion == 0 => return Ok(()),
                None => {
                    self.reinvert()?;
                    since_reinversion = 0;
                    continue;
                }
            };
            let Some(r) = self.leaving(enter) else {
                return Err(Error::Numerical("simplex found an unbounded direction".into()));
            };
            let before = self.rhs(self.n_cons);
            self.pivot(r, enter);
            if self.rhs(self.n_cons) > before + FEASIBILITY_EPS {
                degenerate_run = 0;
            } else {
                degenerate_run += 1;
            }
            since_reinversion += 1;
            if since_reinversion == REINVERT_EVERY {
                self.reinvert()?;
                since_reinversion = 0;
            }
        }
        Err(Error::Numerical("simplex did not terminate".into()))
    }

    /// Dual simplex from a dual-feasible basis: drives out negative basic
    /// variables left behind by rounding, keeping reduced costs nonnegative.
    fn dual(&mut self, budget: &mut usize) -> Result<()> {
        let obj = self.n_cons;
        let total = self.n_vars + self.n_cons;
        let mut since_reinversion = 0;
        while *budget > 0 {
            *budget -= 1;
            let violation = |r: usize| self.rhs(r) * self.scale[self.basis[r]];
            let worst = (0..self.n_cons).min_by(|&p, &q| violation(p).total_cmp(&violation(q)));
            let r = match worst {
                Some(r) if self.rhs(r) < -self.tolerance(r) => r,
                _ if since_reinversion == 0 => return Ok(()),
                _ => {
                    self.reinvert()?;
                    since_reinversion = 0;
                    continue;
                }
            };
            let mut best: Option<(usize, f64, f64)> = None;
            for c in 0..total {
                let a = self.at(r, c);
                if a < -PIVOT_EPS {
                    let ratio = self.at(obj, c).max(0.0) / -a;
                    let better = match best {
                        None => true,
                        Some((_, br, ba)) => ratio < br || (ratio == br && -a > ba),
                    };
                    if better {
                        best = Some((c, ratio, -a));
                    }
                }
            }
            let Some((c, _, _)) = best else {
                return Err(Error::Numerical("simplex basis cannot be made feasible".into()));
            };
            self.pivot(r, c);
            since_reinversion += 1;
            if since_reinversion == REINVERT_EVERY {
                self.reinvert()?;
                since_reinversion = 0;
            }
        }
        Err(Error::Numerical("simplex did not terminate".into()))
    }

    fn feasible(&self) -> bool {
        (0..self.n_cons).all(|r| self.rhs(r) >= -self.tolerance(r))
    }

    /// Alternates primal and dual phases until the reinverted basis is both
    /// primal and dual feasible.
    fn solve(&mut self) -> Result<()> {
        let total = self.n_vars + self.n_cons;
        let mut budget = 50 * (total + 10) * (self.n_cons + 10);
        for _ in 0..CLEANUP_ROUNDS {
            self.primal(&mut budget)?;
            if self.feasible() {
                return Ok(());
            }
            self.dual(&mut budget)?;
            if self.entering(false).is_none() {
                return Ok(());
            }
        }
        Err(Error::Numerical("simplex could not settle on an optimal basis".into()))
    }
}

fn normalize_nonnegative(v: &mut [f64]) -> Result<()> {
    for x in v.iter_mut() {
        if *x < 0.0 {
            *x = 0.0;
        }
    }
    let total: f64 = v.iter().sum();
    if !(total > 0.0) {
        return Err(Error::Numerical("strategy collapsed to zero".into()));
    }
    for x in v.iter_mut() {
        *x /= total;
    }
    Ok(())
}

/// Normalizes a basic solution, also trying copies with entries below a
/// relative threshold zeroed: roundoff leaves tiny weights on strategies that
/// should be absent, which matters when their payoffs are huge. Keeps the
/// candidate that `eval` scores best.
fn purify(v: Vec<f64>, eval: impl Fn(&[f64]) -> f64, maximize: bool) -> Result<(f64, Vec<f64>)> {
    let top = v.iter().copied().fold(0.0, f64::max);
    let mut best: Option<(f64, Vec<f64>)> = None;
    for threshold in [0.0, 1e-14, 1e-12, 1e-10] {
        let mut candidate: Vec<f64> = v.iter().map(|&x| if x > threshold * top { x } else { 0.0 }).collect();
        normalize_nonnegative(&mut candidate)?;
        let score = eval(&candidate);
        let better = match &best {
            None => true,
            Some((b, _)) => (maximize && score > *b) || (!maximize && score < *b),
        };
        if better {
            best = Some((score, candidate));
        }
    }
    best.ok_or_else(|| Error::Numerical("empty strategy".into()))
}

/// Optimal mixed strategy for the minimizing row player, with certificate.
///
/// Payoffs spanning many orders of magnitude can defeat floating-point
/// pivoting; the game is then re-solved in exact rational arithmetic and the
/// answer certified the same way.
pub fn lp_minimax(a: &Payoffs) -> Result<MinimaxSolution> {
    match solve_dense(a) {
        Err(Error::Numerical(_)) => {
            let (x, y) = exact_minimax(a)?;
            let (value, row_strategy) = purify(x, |x| max_column_payoff(a, x), false)?;
            let (dual_value, col_certificate) = purify(y, |y| min_row_payoff(a, y), true)?;
            certified(MinimaxSolution { value, row_strategy, col_certificate, dual_value })
        }
        other => other,
    }
}

fn max_column_payoff(a: &Payoffs, x: &[f64]) -> f64 {
    a.column_payoffs(x).into_iter().fold(f64::NEG_INFINITY, f64::max)
}

fn min_row_payoff(a: &Payoffs, y: &[f64]) -> f64 {
    a.row_payoffs(y).into_iter().fold(f64::INFINITY, f64::min)
}

fn certified(solution: MinimaxSolution) -> Result<MinimaxSolution> {
    if !(solution.gap() <= CERTIFICATE_GAP) {
        return Err(Error::Numerical(format!(
            "primal value {} and dual value {} differ by more than {CERTIFICATE_GAP}",
            solution.value, solution.dual_value
        )));
    }
    Ok(solution)
}

fn solve_dense(a: &Payoffs) -> Result<MinimaxSolution> {
    let (n_rows, n_cols) = (a.n_rows(), a.n_cols());
    let min_payoff = a.data.iter().copied().fold(f64::INFINITY, f64::min);
    let shift = 1.0 - min_payoff;

    // constraint j: Σ_i (A[i][j] + shift)·y_i + s_j = 1
    let width = n_rows + n_cols + 1;
    let mut cells = vec![0.0; (n_cols + 1) * width];
    for j in 0..n_cols {
        for i in 0..n_rows {
            cells[j * width + i] = a.get(i, j) + shift;
        }
        cells[j * width + n_rows + j] = 1.0;
        cells[j * width + width - 1] = 1.0;
    }
    for i in 0..n_rows {
        cells[n_cols * width + i] = -1.0;
    }
    let scale = (0..width - 1).map(|c| (0..n_cols).map(|j| cells[j * width + c].abs()).fold(1.0, f64::max)).collect();
    let mut tab = Tableau {
        scale,
        original: cells.clone(),
        cells,
        width,
        n_cons: n_cols,
        n_vars: n_rows,
        basis: (n_rows..n_rows + n_cols).collect(),
    };
    tab.solve()?;

    let mut x = vec![0.0; n_rows];
    for (r, &b) in tab.basis.iter().enumerate() {
        if b < n_rows {
            x[b] = tab.rhs(r);
        }
    }
    let y: Vec<f64> = (0..n_cols).map(|j| tab.at(n_cols, n_rows + j)).collect();
    let (value, x) = purify(x, |x| max_column_payoff(a, x), false)?;
    let (dual_value, y) = purify(y, |y| min_row_payoff(a, y), true)?;
    certified(MinimaxSolution { value, row_strategy: x, col_certificate: y, dual_value })
}
