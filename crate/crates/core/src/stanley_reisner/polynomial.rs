use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::simplicial::Face;

/// Exponent vector over a fixed number of variables. Ordered graded-lex
/// with `x_1 > x_2 > ... > x_m`: higher total degree is greater, ties are
/// broken by comparing exponents from `x_1` on.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    /// `x_i` for a 1-based index.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i - 1] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    /// Sum of exponents.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Topological degree, `deg x_i = 2`.
    pub fn degree(&self) -> u32 {
        2 * self.total()
    }

    pub fn support(&self) -> Face {
        let bits = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .fold(0u64, |acc, (i, _)| acc | 1 << i);
        Face::from_bits(bits)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.0.len(), other.0.len(), "variable count mismatch");
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn times_var(&self, i: usize) -> Monomial {
        let mut e = self.0.clone();
        e[i - 1] += 1;
        Monomial(e)
    }

    /// All exponent vectors with the given total, in descending order.
    pub fn all_of_total(nvars: usize, total: u32) -> Vec<Monomial> {
        fn rec(nvars: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if cur.len() + 1 == nvars {
                cur.push(left);
                out.push(Monomial(cur.clone()));
                cur.pop();
                return;
            }
            for e in (0..=left).rev() {
                cur.push(e);
                rec(nvars, left - e, cur, out);
                cur.pop();
            }
        }
        if nvars == 0 {
            return if total == 0 {
                vec![Monomial(vec![])]
            } else {
                vec![]
            };
        }
        let mut out = Vec::new();
        rec(nvars, total, &mut Vec::new(), &mut out);
        out
    }

    fn write_with(&self, f: &mut fmt::Formatter<'_>, var: &str) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{var}{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.total() == 0 {
            return write!(f, "1");
        }
        self.write_with(f, "x")
    }
}

/// Coefficient rings used here: `Z` and `Q`.
pub trait Coefficient:
    Clone
    + PartialEq
    + Zero
    + One
    + Signed
    + fmt::Display
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    /// Whether the coefficient prints without a `/`.
    fn is_integral(&self) -> bool;
}

impl Coefficient for BigInt {
    fn is_integral(&self) -> bool {
        true
    }
}

impl Coefficient for BigRational {
    fn is_integral(&self) -> bool {
        self.is_integer()
    }
}

/// Sparse polynomial; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<C = BigInt> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coefficient> Default for Polynomial<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coefficient> Polynomial<C> {
    pub fn zero() -> Self {
        Polynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn term(m: Monomial, c: C) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::term(Monomial::var(nvars, i), C::one())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get().clone() + &c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, C)> {
        self.terms.into_iter()
    }

    /// Topological degree if homogeneous and nonzero.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, a)| (m.clone(), a.clone() * c)))
    }

    /// `self^e`. For `e = 0` the number of variables is taken from `self`,
    /// so the zero polynomial to the zeroth power has none.
    pub fn pow(&self, e: u32) -> Self {
        if e == 0 {
            let nvars = self.terms.keys().next().map_or(0, Monomial::nvars);
            return Self::constant(nvars, C::one());
        }
        let mut acc = self.clone();
        for _ in 1..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn retain(&mut self, mut keep: impl FnMut(&Monomial) -> bool) {
        self.terms.retain(|m, _| keep(m));
    }

    pub fn map_coefficients<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Polynomial<D> {
        Polynomial::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Text form with the given variable prefix, leading (largest) term
    /// first: `2x1^2 - x2*x3`.
    pub fn to_text(&self, var: &str) -> String {
        struct Show<'a, C>(&'a Polynomial<C>, &'a str);
        impl<C: Coefficient> fmt::Display for Show<'_, C> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.write_with(f, self.1)
            }
        }
        Show(self, var).to_string()
    }

    fn write_with(&self, f: &mut fmt::Formatter<'_>, var: &str) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            if m.total() == 0 {
                write!(f, "{a}")?;
                continue;
            }
            if !a.is_one() {
                if a.is_integral() {
                    write!(f, "{a}")?;
                } else {
                    write!(f, "{a}*")?;
                }
            }
            m.write_with(f, var)?;
        }
        Ok(())
    }
}

impl<C: Coefficient> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_with(f, "x")
    }
}

impl<C: Coefficient> fmt::Debug for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl<C: Coefficient> Add for &Polynomial<C> {
    type Output = Polynomial<C>;

    fn add(self, rhs: &Polynomial<C>) -> Polynomial<C> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<C: Coefficient> Neg for &Polynomial<C> {
    type Output = Polynomial<C>;

    fn neg(self) -> Polynomial<C> {
        Polynomial::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())))
    }
}

impl<C: Coefficient> Sub for &Polynomial<C> {
    type Output = Polynomial<C>;

    fn sub(self, rhs: &Polynomial<C>) -> Polynomial<C> {
        self + &(-rhs)
    }
}

impl<C: Coefficient> Mul for &Polynomial<C> {
    type Output = Polynomial<C>;

    fn mul(self, rhs: &Polynomial<C>) -> Polynomial<C> {
        let mut out = Polynomial::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a.mul(b), x.clone() * y);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(nvars: usize, i: usize) -> Polynomial {
        Polynomial::var(nvars, i)
    }

    fn c(nvars: usize, v: i64) -> Polynomial {
        Polynomial::constant(nvars, BigInt::from(v))
    }

    #[test]
    fn grlex_order() {
        let a = Monomial::new(vec![2, 0]);
        let b = Monomial::new(vec![1, 1]);
        let d = Monomial::new(vec![0, 1]);
        assert!(a > b && b > d);
        assert_eq!(
            Monomial::all_of_total(2, 2),
            vec![a, b, Monomial::new(vec![0, 2])]
        );
    }

    #[test]
    fn text_form() {
        let p = &(&c(3, 2) * &x(3, 1).pow(2)) - &(&x(3, 2) * &x(3, 3));
        assert_eq!(p.to_string(), "2x1^2 - x2*x3");
        assert_eq!(Polynomial::<BigInt>::zero().to_string(), "0");
        assert_eq!((&c(2, -3) + &x(2, 2)).to_string(), "x2 - 3");
        let half = BigRational::new(1.into(), 2.into());
        let q = Polynomial::term(Monomial::var(2, 1), half);
        assert_eq!(q.to_text("u"), "1/2*u1");
    }

    #[test]
    fn cancellation_drops_terms() {
        let p = &x(2, 1) - &x(2, 1);
        assert!(p.is_zero());
    }
}
