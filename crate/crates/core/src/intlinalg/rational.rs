//! Linear algebra over `Q`, kept separate from the integral code paths so it
//! can serve as an independent check on ranks.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::IntMatrix;

pub type QMatrix = Vec<Vec<BigRational>>;

pub fn to_rational(a: &IntMatrix) -> QMatrix {
    (0..a.rows())
        .map(|r| {
            a.row(r)
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect()
        })
        .collect()
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut QMatrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row[c..].iter_mut().zip(&pivot[c..]) {
                *x -= p * &f;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_over_q(a: &IntMatrix) -> usize {
    if a.rows() == 0 || a.cols() == 0 {
        return 0;
    }
    rref(&mut to_rational(a)).len()
}

/// Inverse of a square integer matrix over `Q`, if it is nonsingular.
pub fn inverse_over_q(a: &IntMatrix) -> Option<QMatrix> {
    let n = a.rows();
    assert_eq!(n, a.cols(), "inverse of non-square matrix");
    let mut aug: QMatrix = to_rational(a)
        .into_iter()
        .enumerate()
        .map(|(i, mut row)| {
            row.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots.iter().take(n).enumerate().any(|(i, &c)| c != i) {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Clears denominators: returns the integer vector `l * v` for the least
/// common multiple `l` of the denominators.
pub fn clear_denominators(v: &[BigRational]) -> Vec<BigInt> {
    use num_integer::Integer;
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    v.iter().map(|x| (x * &l).to_integer()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks() {
        let a = IntMatrix::from_rows([[1, 2, 3], [2, 4, 6], [0, 1, 1]]).unwrap();
        assert_eq!(rank_over_q(&a), 2);
        assert_eq!(rank_over_q(&IntMatrix::zeros(3, 0)), 0);
    }

    #[test]
    fn inverse() {
        let a = IntMatrix::from_rows([[0, -1], [1, 0]]).unwrap();
        let inv = inverse_over_q(&a).unwrap();
        let q = |n: i64| BigRational::from_integer(n.into());
        assert_eq!(inv, vec![vec![q(0), q(1)], vec![q(-1), q(0)]]);
        assert!(inverse_over_q(&IntMatrix::from_rows([[1, 2], [2, 4]]).unwrap()).is_none());
    }
}
