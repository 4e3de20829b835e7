//! Row-style Hermite normal form and the exact solves built on it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// `h == t * m` with `t` unimodular and `h` in row echelon form: the first
/// nonzero entry of each nonzero row (its pivot) is positive, pivots move
/// strictly right going down, entries above a pivot lie in `[0, pivot)`,
/// and zero rows come last. This form is unique for the row lattice of `m`.
#[derive(Clone, Debug)]
pub struct Hermite {
    pub h: IntMatrix,
    pub t: IntMatrix,
    /// Pivot column of each nonzero row, in order.
    pub pivots: Vec<usize>,
}

impl Hermite {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// The nonzero rows: the canonical basis of the row lattice.
    pub fn basis(&self) -> Vec<Vec<BigInt>> {
        (0..self.rank()).map(|r| self.h.row(r).to_vec()).collect()
    }
}

pub fn hermite_rows(m: &IntMatrix) -> Hermite {
    let (rows, cols) = m.shape();
    let mut h = m.clone();
    let mut t = IntMatrix::identity(rows);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // Euclid on column c among rows r.. until a single nonzero remains.
        loop {
            let mut best: Option<(usize, BigInt)> = None;
            for i in r..rows {
                let x = h.at(i, c);
                if !x.is_zero() && best.as_ref().is_none_or(|(_, b)| x.abs() < *b) {
                    best = Some((i, x.abs()));
                }
            }
            let Some((p, _)) = best else { break };
            h.swap_rows(r, p);
            t.swap_rows(r, p);
            let pivot = h.at(r, c).clone();
            let mut done = true;
            for i in r + 1..rows {
                let x = h.at(i, c);
                if x.is_zero() {
                    continue;
                }
                let q = -(x / &pivot);
                h.add_row_multiple(i, r, &q);
                t.add_row_multiple(i, r, &q);
                if !h.at(i, c).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.at(r, c).is_zero() {
            continue;
        }
        if h.at(r, c).is_negative() {
            h.negate_row(r);
            t.negate_row(r);
        }
        let pivot = h.at(r, c).clone();
        for i in 0..r {
            let q = -h.at(i, c).div_floor(&pivot);
            h.add_row_multiple(i, r, &q);
            t.add_row_multiple(i, r, &q);
        }
        pivots.push(c);
        r += 1;
    }
    Hermite { h, t, pivots }
}

/// Canonical basis (Hermite rows) of the lattice spanned by `gens`.
pub fn lattice_basis(gens: &[Vec<BigInt>], dim: usize) -> Vec<Vec<BigInt>> {
    if gens.is_empty() {
        return Vec::new();
    }
    let m = IntMatrix::from_rows(gens.iter().cloned()).expect("ragged generators");
    assert_eq!(m.cols(), dim);
    hermite_rows(&m).basis()
}

/// Some integer solution of `a * x == b`, or `None` when there is none.
///
/// Works on the Hermite form of `a^T`: if `h = t a^T` then `a = h^T t^{-T}`,
/// so `x = t^T y` where `h^T y = b` is solved by forward substitution along
/// the pivots.
pub fn hermite_solve(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(b.len(), a.rows(), "right-hand side length mismatch");
    let herm = hermite_rows(&a.transpose());
    let mut residual = b.to_vec();
    let mut y = vec![BigInt::zero(); a.cols()];
    for (l, &c) in herm.pivots.iter().enumerate() {
        let p = herm.h.at(l, c);
        let (q, rem) = residual[c].div_rem(p);
        if !rem.is_zero() {
            return None;
        }
        if !q.is_zero() {
            for (k, x) in herm.h.row(l).iter().enumerate() {
                if !x.is_zero() {
                    residual[k] -= x * &q;
                }
            }
        }
        y[l] = q;
    }
    if residual.iter().any(|x| !x.is_zero()) {
        return None;
    }
    Some(herm.t.transpose().apply(&y))
}

/// Canonical representative of the coset `v + L`, where `basis` is the
/// Hermite basis of `L` (as returned by [`lattice_basis`]): each pivot
/// coordinate is brought into `[0, pivot)`.
pub fn reduce_mod_lattice(v: &[BigInt], basis: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut out = v.to_vec();
    for row in basis {
        let Some(c) = row.iter().position(|x| !x.is_zero()) else {
            continue;
        };
        let q = out[c].div_floor(&row[c]);
        if !q.is_zero() {
            for (o, x) in out.iter_mut().zip(row) {
                *o -= x * &q;
            }
        }
    }
    out
}
