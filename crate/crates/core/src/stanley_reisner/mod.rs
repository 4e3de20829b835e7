//! Graded pieces of the Stanley-Reisner ring `Z[K] = Z[x_1..x_m] / (x_sigma :
//! sigma not in K)` with `deg x_i = 2`, multiplication by linear forms, and
//! quotients by linear forms.

mod polynomial;
mod text;

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};

pub use polynomial::{Coefficient, Monomial, Polynomial};
pub use text::{parse_polynomial, parse_polynomial_with};

use crate::error::{Error, Result};
use crate::intlinalg::{cokernel_structure, kernel_basis, IntMatrix, ZModule};
use crate::simplicial::{SimplicialComplex, SubgroupData};

/// `sum_j c_j x_j`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LinearForm(Vec<BigInt>);

impl LinearForm {
    pub fn new(coefficients: Vec<BigInt>) -> Self {
        LinearForm(coefficients)
    }

    pub fn from_i64(coefficients: &[i64]) -> Self {
        LinearForm(coefficients.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Reads a form such as `x1 - 2x3` in `m` variables.
    pub fn parse(text: &str, m: usize) -> Result<Self> {
        let p = parse_polynomial(text, m)?;
        Self::from_polynomial(&p, m)
    }

    pub fn from_polynomial(p: &Polynomial, m: usize) -> Result<Self> {
        let mut c = vec![BigInt::zero(); m];
        for (mono, a) in p.terms() {
            if mono.total() != 1 {
                return Err(Error::input(format!(
                    "`{p}` is not a linear form (term of degree {})",
                    mono.degree()
                )));
            }
            let i = mono.exponents().iter().position(|&e| e == 1).unwrap();
            c[i] = a.clone();
        }
        Ok(LinearForm(c))
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn to_polynomial(&self) -> Polynomial {
        let m = self.0.len();
        Polynomial::from_terms(
            self.0
                .iter()
                .enumerate()
                .map(|(i, c)| (Monomial::var(m, i + 1), c.clone())),
        )
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_polynomial())
    }
}

impl SubgroupData {
    /// `u_i = sum_j B_ij x_j` for each row of `B`.
    pub fn linear_forms(&self) -> Vec<LinearForm> {
        self.matrix()
            .to_rows()
            .into_iter()
            .map(LinearForm::new)
            .collect()
    }
}

/// The face-supported monomials of one degree, in descending graded-lex order.
#[derive(Clone, Debug)]
pub struct GradedBasis {
    degree: u32,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl GradedBasis {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Coordinates of a reduced homogeneous polynomial of this degree.
    pub fn coordinates(&self, p: &Polynomial) -> Result<Vec<BigInt>> {
        let mut v = vec![BigInt::zero(); self.len()];
        for (m, c) in p.terms() {
            let i = self.position(m).ok_or_else(|| {
                Error::input(format!(
                    "monomial {m:?} is not a basis element of degree {}",
                    self.degree
                ))
            })?;
            v[i] = c.clone();
        }
        Ok(v)
    }

    pub fn polynomial(&self, v: &[BigInt]) -> Polynomial {
        assert_eq!(v.len(), self.len());
        Polynomial::from_terms(self.monomials.iter().cloned().zip(v.iter().cloned()))
    }
}

fn check_even(j: u32) -> Result<()> {
    if !j.is_multiple_of(2) {
        return Err(Error::input(format!(
            "degree {j} is odd; graded pieces live in even degrees"
        )));
    }
    Ok(())
}

/// Basis of `Z[K]_j`.
pub fn monomial_basis(k: &SimplicialComplex, j: u32) -> Result<GradedBasis> {
    check_even(j)?;
    let m = k.vertex_count();
    let mut monomials = Vec::new();
    let mut cur = vec![0u32; m];
    fill(
        k,
        0,
        j / 2,
        crate::simplicial::Face::from_bits(0),
        &mut cur,
        &mut monomials,
    );
    monomials.sort_by(|a, b| b.cmp(a));
    let index = monomials
        .iter()
        .enumerate()
        .map(|(i, mo)| (mo.clone(), i))
        .collect();
    Ok(GradedBasis {
        degree: j,
        monomials,
        index,
    })
}

fn fill(
    k: &SimplicialComplex,
    var: usize,
    left: u32,
    support: crate::simplicial::Face,
    cur: &mut Vec<u32>,
    out: &mut Vec<Monomial>,
) {
    if left == 0 {
        out.push(Monomial::new(cur.clone()));
        return;
    }
    if var == cur.len() {
        return;
    }
    fill(k, var + 1, left, support, cur, out);
    let grown = support.with(var + 1);
    if !k.contains_face(grown) {
        return;
    }
    for e in 1..=left {
        cur[var] = e;
        fill(k, var + 1, left - e, grown, cur, out);
    }
    cur[var] = 0;
}

/// Drops every term whose support is not a face.
pub fn reduce<C: Coefficient>(k: &SimplicialComplex, p: &Polynomial<C>) -> Polynomial<C> {
    let mut out = p.clone();
    out.retain(|m| k.contains_face(m.support()));
    out
}

/// Number of face-supported monomials of degree `j`: a face with `s`
/// vertices supports `C(j/2 - 1, s - 1)` of them.
pub fn hilbert_coefficient(k: &SimplicialComplex, j: u32) -> Result<u64> {
    check_even(j)?;
    let d = u64::from(j / 2);
    if d == 0 {
        return Ok(1);
    }
    let counts = k.face_counts();
    let mut total: u128 = 0;
    for (s, &f) in counts.iter().enumerate().skip(1) {
        let s = s as u64;
        if s > d {
            break;
        }
        total += f as u128 * binomial(u128::from(d - 1), u128::from(s - 1));
    }
    u64::try_from(total).map_err(|_| Error::input("Hilbert coefficient overflows u64"))
}

/// Matrix of `x -> u*x` from `src` to `dst` (which must be one degree up).
pub fn mult_matrix_between(u: &LinearForm, src: &GradedBasis, dst: &GradedBasis) -> IntMatrix {
    assert_eq!(src.degree + 2, dst.degree);
    let mut out = IntMatrix::zeros(dst.len(), src.len());
    for (c, alpha) in src.monomials.iter().enumerate() {
        for (i, coef) in u.coefficients().iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            if let Some(r) = dst.position(&alpha.times_var(i + 1)) {
                out.set(r, c, coef.clone()).expect("in range");
            }
        }
    }
    out
}

fn check_form(k: &SimplicialComplex, u: &LinearForm) -> Result<()> {
    if u.nvars() != k.vertex_count() {
        return Err(Error::input(format!(
            "linear form has {} coefficients, expected {}",
            u.nvars(),
            k.vertex_count()
        )));
    }
    if u.is_zero() {
        return Err(Error::input("linear form is identically zero"));
    }
    Ok(())
}

/// Matrix of `Z[K]_j -> Z[K]_{j+2}`, `x -> u*x`.
pub fn mult_matrix(k: &SimplicialComplex, u: &LinearForm, j: u32) -> Result<IntMatrix> {
    check_form(k, u)?;
    let src = monomial_basis(k, j)?;
    let dst = monomial_basis(k, j + 2)?;
    Ok(mult_matrix_between(u, &src, &dst))
}

/// `(Z[K] / (forms))_j`.
pub fn quotient_piece(k: &SimplicialComplex, forms: &[LinearForm], j: u32) -> Result<ZModule> {
    check_even(j)?;
    for u in forms {
        check_form(k, u)?;
    }
    let target = monomial_basis(k, j)?;
    if j == 0 || forms.is_empty() {
        return Ok(ZModule::free(target.len()));
    }
    let src = monomial_basis(k, j - 2)?;
    let blocks: Vec<IntMatrix> = forms
        .iter()
        .map(|u| mult_matrix_between(u, &src, &target))
        .collect();
    let refs: Vec<&IntMatrix> = blocks.iter().collect();
    Ok(cokernel_structure(&IntMatrix::hstack(target.len(), &refs)))
}

/// A homogeneous `g` in `Z[u_1..u_n]` with `g*f = 0` in `Z[K]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Annihilator {
    /// Topological degree of `g`.
    pub degree: u32,
    /// `g`, written in the variables `u_1..u_n`.
    pub element: Polynomial,
}

impl Annihilator {
    pub fn text(&self) -> String {
        self.element.to_text("u")
    }
}

/// For each even `e <= max_degree`, a basis of the homogeneous degree-`e`
/// elements of `Z[u_1..u_n]` annihilating `f` in `Z[K]`.
pub fn annihilator_search(
    k: &SimplicialComplex,
    s: &SubgroupData,
    f: &Polynomial,
    max_degree: u32,
) -> Result<Vec<Annihilator>> {
    let m = k.vertex_count();
    if s.m() != m {
        return Err(Error::input(format!(
            "B has {} columns but K has {m} vertices",
            s.m()
        )));
    }
    if f.terms().any(|(mo, _)| mo.nvars() != m) {
        return Err(Error::input("polynomial has the wrong number of variables"));
    }
    let f = reduce(k, f);
    if f.is_zero() {
        return Err(Error::input("element reduces to 0 in Z[K]"));
    }
    let n = s.n();
    let forms: Vec<Polynomial> = s
        .linear_forms()
        .iter()
        .map(LinearForm::to_polynomial)
        .collect();
    let mut found = Vec::new();
    for e in (0..=max_degree / 2).map(|h| 2 * h) {
        let gens = Monomial::all_of_total(n, e / 2);
        let images: Vec<Polynomial> = gens
            .iter()
            .map(|g| {
                let mut prod = f.clone();
                for (i, &a) in g.exponents().iter().enumerate() {
                    for _ in 0..a {
                        prod = reduce(k, &(&prod * &forms[i]));
                    }
                }
                prod
            })
            .collect();
        let mut support: Vec<Monomial> = images
            .iter()
            .flat_map(|p| p.terms().map(|(mo, _)| mo.clone()))
            .collect();
        support.sort();
        support.dedup();
        let row_of: HashMap<&Monomial, usize> =
            support.iter().enumerate().map(|(i, mo)| (mo, i)).collect();
        let mut mat = IntMatrix::zeros(support.len(), gens.len());
        for (c, p) in images.iter().enumerate() {
            for (mo, a) in p.terms() {
                mat.set(row_of[mo], c, a.clone()).expect("in range");
            }
        }
        for v in kernel_basis(&mat) {
            let g = Polynomial::from_terms(gens.iter().cloned().zip(v));
            found.push(Annihilator {
                degree: e,
                element: g,
            });
        }
    }
    Ok(found)
}

/// Whether `p` (homogeneous of degree `j`, reduced) lies in the ideal
/// generated by `forms` in `Z[K]`.
pub fn in_linear_ideal(
    k: &SimplicialComplex,
    forms: &[LinearForm],
    p: &Polynomial,
    j: u32,
) -> Result<bool> {
    let p = reduce(k, p);
    if p.is_zero() {
        return Ok(true);
    }
    if p.homogeneous_degree() != Some(j) {
        return Err(Error::input(format!(
            "`{p}` is not homogeneous of degree {j}"
        )));
    }
    if j == 0 || forms.is_empty() {
        return Ok(false);
    }
    let target = monomial_basis(k, j)?;
    let src = monomial_basis(k, j - 2)?;
    let blocks: Vec<IntMatrix> = forms
        .iter()
        .map(|u| mult_matrix_between(u, &src, &target))
        .collect();
    let refs: Vec<&IntMatrix> = blocks.iter().collect();
    let a = IntMatrix::hstack(target.len(), &refs);
    Ok(crate::intlinalg::hermite_solve(&a, &target.coordinates(&p)?).is_some())
}

/// `prod_i u_i^{a_i}` expanded in the `x` variables and reduced.
pub fn evaluate_in_forms(k: &SimplicialComplex, s: &SubgroupData, g: &Polynomial) -> Polynomial {
    let forms: Vec<Polynomial> = s
        .linear_forms()
        .iter()
        .map(LinearForm::to_polynomial)
        .collect();
    let m = k.vertex_count();
    let mut out = Polynomial::zero();
    for (mo, c) in g.terms() {
        let mut t = Polynomial::constant(m, c.clone());
        for (i, &a) in mo.exponents().iter().enumerate() {
            t = &t * &forms[i].pow(a);
        }
        out = &out + &t;
    }
    reduce(k, &out)
}

/// The constant `1` in `m` variables.
pub fn one(m: usize) -> Polynomial {
    Polynomial::constant(m, BigInt::one())
}
