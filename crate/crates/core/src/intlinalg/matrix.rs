use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Dense matrix of arbitrary-precision integers, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from row-major data of the given shape.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::input(format!(
                "matrix data has {} entries, expected {}x{}",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    /// Builds a matrix from a list of rows. An empty list gives the 0x0 matrix.
    pub fn from_rows<R, V, T>(rows: R) -> Result<Self>
    where
        R: IntoIterator<Item = V>,
        V: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let rows: Vec<Vec<BigInt>> = rows
            .into_iter()
            .map(|r| r.into_iter().map(Into::into).collect())
            .collect();
        let cols = rows.first().map_or(0, Vec::len);
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(Error::input(format!(
                "row {} has {} entries, expected {}",
                i + 1,
                r.len(),
                cols
            )));
        }
        let n = rows.len();
        Ok(IntMatrix {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds an `len x k` matrix whose columns are the given vectors.
    pub fn from_columns(len: usize, columns: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(len, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), len, "column length mismatch");
            for (r, x) in col.iter().enumerate() {
                m.data[r * m.cols + c] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Checked entry access.
    pub fn get(&self, r: usize, c: usize) -> Result<&BigInt> {
        if r >= self.rows || c >= self.cols {
            return Err(Error::input(format!(
                "index ({r}, {c}) out of range for {}x{} matrix",
                self.rows, self.cols
            )));
        }
        Ok(&self.data[r * self.cols + c])
    }

    #[inline]
    pub(crate) fn at(&self, r: usize, c: usize) -> &BigInt {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub(crate) fn at_mut(&mut self, r: usize, c: usize) -> &mut BigInt {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: impl Into<BigInt>) -> Result<()> {
        if r >= self.rows || c >= self.cols {
            return Err(Error::input(format!(
                "index ({r}, {c}) out of range for {}x{} matrix",
                self.rows, self.cols
            )));
        }
        self.data[r * self.cols + c] = value.into();
        Ok(())
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.at(r, c).clone();
            }
        }
        t
    }

    pub fn try_mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::input(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.at(k, c);
                    if !b.is_zero() {
                        out.data[r * other.cols + c] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }

    /// Side-by-side concatenation. All blocks must have `rows` rows.
    pub fn hstack(rows: usize, blocks: &[&IntMatrix]) -> IntMatrix {
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = IntMatrix::zeros(rows, cols);
        let mut offset = 0;
        for b in blocks {
            assert_eq!(b.rows, rows, "hstack row mismatch");
            out.set_block(0, offset, b);
            offset += b.cols;
        }
        out
    }

    /// Vertical concatenation. All blocks must have `cols` columns.
    pub fn vstack(cols: usize, blocks: &[&IntMatrix]) -> IntMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut out = IntMatrix::zeros(rows, cols);
        let mut offset = 0;
        for b in blocks {
            assert_eq!(b.cols, cols, "vstack column mismatch");
            out.set_block(offset, 0, b);
            offset += b.rows;
        }
        out
    }

    /// Overwrites the block starting at `(r0, c0)` with `block`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &IntMatrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.data[(r0 + r) * self.cols + c0 + c] = block.at(r, c).clone();
            }
        }
    }

    /// Adds `scale * block` into the block starting at `(r0, c0)`.
    pub fn add_block(&mut self, r0: usize, c0: usize, block: &IntMatrix, scale: i64) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for r in 0..block.rows {
            for c in 0..block.cols {
                let x = block.at(r, c);
                if !x.is_zero() {
                    self.data[(r0 + r) * self.cols + c0 + c] += x * scale;
                }
            }
        }
    }

    pub fn select_columns(&self, cols: &[usize]) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (k, &c) in cols.iter().enumerate() {
                out.data[r * cols.len() + k] = self.at(r, c).clone();
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> IntMatrix {
        let mut out = IntMatrix::zeros(rows.len(), self.cols);
        for (k, &r) in rows.iter().enumerate() {
            out.data[k * self.cols..(k + 1) * self.cols].clone_from_slice(self.row(r));
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::input(format!(
                "determinant of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n {
            if a.at(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !a.at(r, k).is_zero()) else {
                    return Ok(BigInt::zero());
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j)) / &prev;
                    *a.at_mut(i, j) = v;
                }
            }
            prev = a.at(k, k).clone();
        }
        let det = a.at(n - 1, n - 1).clone();
        Ok(if sign < 0 { -det } else { det })
    }

    pub(crate) fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    pub(crate) fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// `row[dst] += k * row[src]`
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let s = &self.data[src * self.cols + c];
            if !s.is_zero() {
                let v = s * k;
                self.data[dst * self.cols + c] += v;
            }
        }
    }

    /// `col[dst] += k * col[src]`
    pub(crate) fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let s = &self.data[r * self.cols + src];
            if !s.is_zero() {
                let v = s * k;
                self.data[r * self.cols + dst] += v;
            }
        }
    }

    pub(crate) fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let x = &mut self.data[r * self.cols + c];
            *x = -std::mem::take(x);
        }
    }

    pub(crate) fn negate_col(&mut self, c: usize) {
        for r in 0..self.rows {
            let x = &mut self.data[r * self.cols + c];
            *x = -std::mem::take(x);
        }
    }

    /// Largest absolute value of any entry (zero for empty matrices).
    pub fn max_abs(&self) -> BigInt {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_default()
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        self.try_mul(rhs).expect("matrix shape mismatch")
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{}x{}{}", self.rows, self.cols, self)
    }
}

/// Text form `[a b c ; d e f]`, the same syntax `B` uses in `.tcx` files.
/// A matrix with no rows prints as `[]`; a matrix with rows but no columns
/// prints one empty row per row, separated by `;`.
impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, " ;")?;
            }
            for x in self.row(r) {
                write!(f, " {x}")?;
            }
        }
        if self.rows > 0 {
            write!(f, " ")?;
        }
        write!(f, "]")
    }
}

impl FromStr for IntMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let inner = s
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::input("matrix must be enclosed in [ ]"))?;
        if inner.trim().is_empty() {
            return Ok(IntMatrix::zeros(0, 0));
        }
        let rows = inner
            .split(';')
            .map(|row| {
                row.split_whitespace()
                    .map(|t| {
                        t.parse::<BigInt>()
                            .map_err(|_| Error::input(format!("bad integer `{t}`")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        IntMatrix::from_rows(rows)
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<String>>,
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr {
            rows: self.rows,
            cols: self.cols,
            entries: (0..self.rows)
                .map(|r| self.row(r).iter().map(ToString::to_string).collect())
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = MatrixRepr::deserialize(deserializer)?;
        if repr.entries.len() != repr.rows || repr.entries.iter().any(|r| r.len() != repr.cols) {
            return Err(D::Error::custom("matrix entries do not match shape"));
        }
        let data = repr
            .entries
            .iter()
            .flatten()
            .map(|t| t.parse::<BigInt>().map_err(D::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(IntMatrix {
            rows: repr.rows,
            cols: repr.cols,
            data,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn out_of_range_access_is_an_error() {
        let m = IntMatrix::zeros(2, 3);
        assert!(m.get(1, 2).is_ok());
        assert!(m.get(2, 0).is_err());
        assert!(m.get(0, 3).is_err());
    }

    #[test]
    fn text_form() {
        let m: IntMatrix = "[1 0 -2 0 ; 0 2 0 -1]".parse().unwrap();
        assert_eq!(m.shape(), (2, 4));
        assert_eq!(m.to_string(), "[ 1 0 -2 0 ; 0 2 0 -1 ]");
        assert_eq!(m.to_string().parse::<IntMatrix>().unwrap(), m);
        assert!("[1 2 ; 3]".parse::<IntMatrix>().is_err());
    }

    #[test]
    fn bareiss_determinant() {
        let m = IntMatrix::from_rows([[2, 1, 0], [1, 3, 4], [0, 5, 7]]).unwrap();
        // 2*(21-20) - 1*(7-0) + 0 = -5
        assert_eq!(m.determinant().unwrap(), BigInt::from(-5));
        let z = IntMatrix::from_rows([[0, 1], [0, 2]]).unwrap();
        assert_eq!(z.determinant().unwrap(), BigInt::zero());
        assert_eq!(IntMatrix::zeros(0, 0).determinant().unwrap(), BigInt::one());
    }

    #[test]
    fn json_roundtrip_keeps_big_entries() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let m = IntMatrix::from_rows([vec![big.clone(), -big], vec![1.into(), 0.into()]]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        let back: IntMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }
}
