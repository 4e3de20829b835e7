//! Smith normal form over `Z`.
//!
//! Pivoting: the nonzero entry of least absolute value in the active
//! submatrix, ties broken by `(row, col)` order. After row and column `k`
//! are cleared, divisibility of the remaining block by the pivot is enforced
//! by folding an offending row into row `k` and repeating. Every step is an
//! elementary unimodular operation, mirrored into whichever transforms the
//! caller asked for.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// `u * a * v == s`, with `u`, `v` unimodular and `s` diagonal with
/// nonnegative entries `d_1 | d_2 | ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Diagonal of `s` (length `min(rows, cols)`).
    pub fn diagonal(&self) -> Vec<BigInt> {
        diagonal_of(&self.s)
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

pub(crate) fn diagonal_of(s: &IntMatrix) -> Vec<BigInt> {
    (0..s.rows().min(s.cols()))
        .map(|i| s.at(i, i).clone())
        .collect()
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let w = SnfWork::run(a, Track::UV);
    SmithForm {
        u: w.u.unwrap(),
        s: w.a,
        v: w.v.unwrap(),
    }
}

/// Nonzero invariant factors only, without building transforms.
pub fn invariant_factors(a: &IntMatrix) -> Vec<BigInt> {
    let w = SnfWork::run(a, Track::default());
    diagonal_of(&w.a)
        .into_iter()
        .filter(|d| !d.is_zero())
        .collect()
}

/// Which transforms to accumulate alongside the reduction.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Track {
    pub u: bool,
    pub u_inv: bool,
    pub v: bool,
    pub v_inv: bool,
}

impl Track {
    pub const UV: Track = Track {
        u: true,
        u_inv: false,
        v: true,
        v_inv: false,
    };
}

pub(crate) struct SnfWork {
    pub a: IntMatrix,
    pub u: Option<IntMatrix>,
    pub u_inv: Option<IntMatrix>,
    pub v: Option<IntMatrix>,
    pub v_inv: Option<IntMatrix>,
    pub rank: usize,
}

impl SnfWork {
    pub fn run(a: &IntMatrix, track: Track) -> SnfWork {
        let (r, c) = a.shape();
        let mut w = SnfWork {
            a: a.clone(),
            u: track.u.then(|| IntMatrix::identity(r)),
            u_inv: track.u_inv.then(|| IntMatrix::identity(r)),
            v: track.v.then(|| IntMatrix::identity(c)),
            v_inv: track.v_inv.then(|| IntMatrix::identity(c)),
            rank: 0,
        };
        w.reduce();
        w
    }

    // Row operations act on `a` and `u` from the left; `u_inv` gets the
    // inverse operation from the right.
    fn row_add(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_row_multiple(dst, src, k);
        if let Some(u) = &mut self.u {
            u.add_row_multiple(dst, src, k);
        }
        if let Some(ui) = &mut self.u_inv {
            ui.add_col_multiple(src, dst, &-k);
        }
    }

    fn row_swap(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        if let Some(u) = &mut self.u {
            u.swap_rows(i, j);
        }
        if let Some(ui) = &mut self.u_inv {
            ui.swap_cols(i, j);
        }
    }

    fn row_negate(&mut self, i: usize) {
        self.a.negate_row(i);
        if let Some(u) = &mut self.u {
            u.negate_row(i);
        }
        if let Some(ui) = &mut self.u_inv {
            ui.negate_col(i);
        }
    }

    fn col_add(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_col_multiple(dst, src, k);
        if let Some(v) = &mut self.v {
            v.add_col_multiple(dst, src, k);
        }
        if let Some(vi) = &mut self.v_inv {
            vi.add_row_multiple(src, dst, &-k);
        }
    }

    fn col_swap(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        if let Some(v) = &mut self.v {
            v.swap_cols(i, j);
        }
        if let Some(vi) = &mut self.v_inv {
            vi.swap_rows(i, j);
        }
    }

    fn min_pivot(&self, k: usize) -> Option<(usize, usize)> {
        let (rows, cols) = self.a.shape();
        let mut best: Option<(usize, usize, BigInt)> = None;
        for r in k..rows {
            for c in k..cols {
                let x = self.a.at(r, c);
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs();
                if best.as_ref().is_none_or(|(_, _, b)| ax < *b) {
                    let one = ax.is_one();
                    best = Some((r, c, ax));
                    if one {
                        return best.map(|(r, c, _)| (r, c));
                    }
                }
            }
        }
        best.map(|(r, c, _)| (r, c))
    }

    fn reduce(&mut self) {
        let (rows, cols) = self.a.shape();
        let mut k = 0;
        while k < rows.min(cols) {
            let Some((pr, pc)) = self.min_pivot(k) else {
                break;
            };
            self.row_swap(k, pr);
            self.col_swap(k, pc);
            if !self.clear_cross(k) {
                // A smaller remainder appeared; pick a new pivot.
                continue;
            }
            // Enforce divisibility of the trailing block by the pivot.
            let p = self.a.at(k, k).clone();
            let offending =
                (k + 1..rows).find(|&r| (k + 1..cols).any(|c| !(self.a.at(r, c) % &p).is_zero()));
            if let Some(r) = offending {
                self.row_add(k, r, &BigInt::one());
                continue;
            }
            if p.is_negative() {
                self.row_negate(k);
            }
            k += 1;
        }
        self.rank = k;
    }

    /// Eliminates column `k` below and row `k` right of the pivot. Returns
    /// false if a nonzero remainder was left behind.
    fn clear_cross(&mut self, k: usize) -> bool {
        let (rows, cols) = self.a.shape();
        let p = self.a.at(k, k).clone();
        let mut clean = true;
        for r in k + 1..rows {
            let x = self.a.at(r, k);
            if x.is_zero() {
                continue;
            }
            let q = x / &p;
            if !q.is_zero() {
                self.row_add(r, k, &-q);
            }
            if !self.a.at(r, k).is_zero() {
                clean = false;
            }
        }
        for c in k + 1..cols {
            let x = self.a.at(k, c);
            if x.is_zero() {
                continue;
            }
            let q = x / &p;
            if !q.is_zero() {
                self.col_add(c, k, &-q);
            }
            if !self.a.at(k, c).is_zero() {
                clean = false;
            }
        }
        clean
    }
}
