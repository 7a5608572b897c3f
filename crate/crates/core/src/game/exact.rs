//! The minimax linear program in exact arithmetic.
//!
//! Every finite `f64` is a dyadic rational, so after scaling by a power of two
//! the program has integer data and can be pivoted without rounding. The
//! tableau stays integral with one common positive denominator: pivoting on
//! `p` maps every entry outside the pivot row to `(p·t − t_k·t_r)/d`, an exact
//! division, and makes `p` the new denominator. Only the final strategies are
//! rounded back to `f64`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::simplex::Payoffs;
use crate::error::{Error, Result};

/// Degenerate pivots in a row before switching to Bland's rule for good.
const DEGENERATE_RUN: usize = 20;

struct Tableau {
    /// `n_cons` constraint rows then the objective row; the entries are these
    /// integers divided by `denominator`.
    cells: Vec<BigInt>,
    denominator: BigInt,
    width: usize,
    n_cons: usize,
    basis: Vec<usize>,
}

impl Tableau {
    /// `max Σy s.t. (A + shift)ᵀ y + s = 1` with the slack basis, every
    /// constraint multiplied by a power of two that clears denominators.
    fn new(a: &Payoffs) -> Result<Self> {
        let (n_rows, n_cols) = (a.n_rows(), a.n_cols());
        let mut entries = Vec::with_capacity(n_rows * n_cols);
        for i in 0..n_rows {
            for &x in a.row(i) {
                entries.push(
                    BigRational::from_float(x).ok_or_else(|| Error::Numerical(format!("payoff {x} is not finite")))?,
                );
            }
        }
        let lowest = entries.iter().min().cloned().unwrap_or_else(BigRational::zero);
        let shift = BigRational::one() - lowest;
        for e in &mut entries {
            *e += &shift;
        }
        let scale = entries.iter().map(|e| e.denom().clone()).max().unwrap_or_else(BigInt::one);
        let width = n_rows + n_cols + 1;
        let mut cells = vec![BigInt::zero(); (n_cols + 1) * width];
        for j in 0..n_cols {
            for i in 0..n_rows {
                let e = &entries[i * n_cols + j];
                // denominators are powers of two, so each divides the largest
                cells[j * width + i] = e.numer() * (&scale / e.denom());
            }
            cells[j * width + n_rows + j] = scale.clone();
            cells[j * width + width - 1] = scale.clone();
        }
        for i in 0..n_rows {
            cells[n_cols * width + i] = -BigInt::one();
        }
        Ok(Tableau {
            cells,
            denominator: BigInt::one(),
            width,
            n_cons: n_cols,
            basis: (n_rows..n_rows + n_cols).collect(),
        })
    }

    fn at(&self, r: usize, c: usize) -> &BigInt {
        &self.cells[r * self.width + c]
    }

    fn rhs(&self, r: usize) -> &BigInt {
        self.at(r, self.width - 1)
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.width;
        let p = self.at(pr, pc).clone();
        let pivot_row: Vec<(usize, BigInt)> = (0..w)
            .filter(|&c| !self.cells[pr * w + c].is_zero())
            .map(|c| (c, self.cells[pr * w + c].clone()))
            .collect();
        for r in 0..=self.n_cons {
            if r == pr {
                continue;
            }
            let f = self.at(r, pc).clone();
            let row = &mut self.cells[r * w..(r + 1) * w];
            if f.is_zero() {
                for x in row.iter_mut() {
                    if !x.is_zero() {
                        *x = &*x * &p / &self.denominator;
                    }
                }
                continue;
            }
            let mut k = 0;
            for (c, x) in row.iter_mut().enumerate() {
                let through = if k < pivot_row.len() && pivot_row[k].0 == c {
                    k += 1;
                    Some(&pivot_row[k - 1].1)
                } else {
                    None
                };
                match through {
                    Some(v) => *x = (&*x * &p - &f * v) / &self.denominator,
                    None if !x.is_zero() => *x = &*x * &p / &self.denominator,
                    None => {}
                }
            }
        }
        // primal pivots are positive, so the denominator stays positive
        self.denominator = p;
        self.basis[pr] = pc;
    }

    /// Primal simplex from the feasible slack basis: largest reduced cost,
    /// then Bland's rule once pivots stall.
    fn solve(&mut self) -> Result<()> {
        let obj = self.n_cons;
        let mut degenerate_run = 0;
        loop {
            let candidates = (0..self.width - 1).filter(|&c| self.at(obj, c).is_negative());
            let enter = if degenerate_run >= DEGENERATE_RUN {
                candidates.min()
            } else {
                candidates.min_by(|&p, &q| self.at(obj, p).cmp(self.at(obj, q)))
            };
            let Some(enter) = enter else { return Ok(()) };
            // ratios rhs/a share the denominator, so compare cross products
            let mut leave: Option<usize> = None;
            for r in 0..self.n_cons {
                if !self.at(r, enter).is_positive() {
                    continue;
                }
                let better = match leave {
                    None => true,
                    Some(b) => {
                        let lhs = self.rhs(r) * self.at(b, enter);
                        let rhs = self.rhs(b) * self.at(r, enter);
                        match lhs.cmp(&rhs) {
                            Ordering::Less => true,
                            Ordering::Equal => self.basis[r] < self.basis[b],
                            Ordering::Greater => false,
                        }
                    }
                };
                if better {
                    leave = Some(r);
                }
            }
            let Some(r) = leave else {
                return Err(Error::Numerical("exact simplex found an unbounded direction".into()));
            };
            if self.rhs(r).is_zero() {
                degenerate_run += 1;
            } else if degenerate_run < DEGENERATE_RUN {
                degenerate_run = 0;
            }
            self.pivot(r, enter);
        }
    }
}

/// Row and column strategies of the game, normalized, rounded from the exact
/// optimum.
pub(super) fn exact_minimax(a: &Payoffs) -> Result<(Vec<f64>, Vec<f64>)> {
    let (n_rows, n_cols) = (a.n_rows(), a.n_cols());
    let mut tab = Tableau::new(a)?;
    tab.solve()?;

    let obj = n_cols;
    let total = tab.rhs(obj).clone();
    if !total.is_positive() {
        return Err(Error::Numerical(format!("exact simplex ended with objective {total}")));
    }
    let ratio = |n: &BigInt| BigRational::new(n.clone(), total.clone()).to_f64().unwrap_or(f64::NAN);
    let mut x = vec![0.0; n_rows];
    for (r, &b) in tab.basis.iter().enumerate() {
        if b < n_rows {
            x[b] = ratio(tab.rhs(r));
        }
    }
    let y = (0..n_cols).map(|j| ratio(tab.at(obj, n_rows + j))).collect();
    Ok((x, y))
}
