//! Restriction to fixed points: for `K` pure with `n`-vertex maximal faces
//! and every `B_v` nonsingular, `Φ(x_i)|_v` is `(row r of B_v^{-1}) · u`
//! when `i` is the `r`-th vertex of `σ_v`, and `0` otherwise.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::intlinalg::rational::{clear_denominators, inverse_over_q, rank_over_q, rref, QMatrix};
use crate::intlinalg::IntMatrix;
use crate::simplicial::{Face, SimplicialComplex, SubgroupData};
use crate::stanley_reisner::{monomial_basis, reduce, LinearForm, Monomial, Polynomial};

pub type QPolynomial = Polynomial<BigRational>;

#[derive(Clone, Debug)]
pub struct VertexData {
    pub face: Face,
    pub b_v: IntMatrix,
    pub det: BigInt,
    /// Rows of `B_v^{-1}`.
    pub alpha_rows: QMatrix,
}

impl VertexData {
    pub fn is_unimodular(&self) -> bool {
        self.det == BigInt::one() || self.det == -BigInt::one()
    }
}

/// One polynomial in `u_1..u_n` per vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct GkmTuple(pub Vec<QPolynomial>);

impl GkmTuple {
    pub fn entries(&self) -> &[QPolynomial] {
        &self.0
    }

    pub fn texts(&self) -> Vec<String> {
        self.0.iter().map(|p| p.to_text("u")).collect()
    }

    /// Whether every entry has integer coefficients.
    pub fn is_integral(&self) -> bool {
        self.0
            .iter()
            .all(|p| p.terms().all(|(_, c)| c.is_integer()))
    }
}

impl fmt::Display for GkmTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.texts().join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GkmEdge {
    /// 0-based vertex positions.
    pub v: usize,
    pub w: usize,
    /// The vertex of `σ_v` not in `σ_w`.
    pub dropped: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GkmCheck {
    pub holds: bool,
    pub failing_edges: Vec<GkmEdge>,
}

#[derive(Clone, Debug)]
pub struct GkmData {
    complex: SimplicialComplex,
    subgroup: SubgroupData,
    vertices: Vec<VertexData>,
}

impl GkmData {
    pub fn new(k: &SimplicialComplex, s: &SubgroupData) -> Result<Self> {
        let n = s.n();
        if s.m() != k.vertex_count() {
            return Err(Error::input(format!(
                "B has {} columns but K has {} vertices",
                s.m(),
                k.vertex_count()
            )));
        }
        match k.pure_dimension() {
            Some(d) if d == n => {}
            Some(d) => {
                return Err(Error::NotGkm(format!(
                    "maximal faces have {d} vertices but n = {n}"
                )))
            }
            None => return Err(Error::input("K is not pure")),
        }
        let vertices = k
            .maximal_faces()
            .iter()
            .map(|&face| {
                let b_v = s.columns_of(face);
                let det = b_v.determinant()?;
                let alpha_rows = inverse_over_q(&b_v)
                    .ok_or_else(|| Error::NotGkm(format!("B_v is singular at vertex {face}")))?;
                Ok(VertexData {
                    face,
                    b_v,
                    det,
                    alpha_rows,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let data = GkmData {
            complex: k.clone(),
            subgroup: s.clone(),
            vertices,
        };
        for (r, u) in s.linear_forms().iter().enumerate() {
            let t = data.phi(&u.to_polynomial());
            let expected = QPolynomial::var(n, r + 1);
            if t.0.iter().any(|e| *e != expected) {
                return Err(Error::internal(format!(
                    "Φ(u{}) = {t} is not the constant tuple",
                    r + 1
                )));
            }
        }
        Ok(data)
    }

    pub fn vertices(&self) -> &[VertexData] {
        &self.vertices
    }

    pub fn n(&self) -> usize {
        self.subgroup.n()
    }

    pub fn is_delzant(&self) -> bool {
        self.vertices.iter().all(VertexData::is_unimodular)
    }

    /// `Φ(x_i)|_v` for a 1-based `i`.
    pub fn phi_variable(&self, v: usize, i: usize) -> QPolynomial {
        let vd = &self.vertices[v];
        let Some(r) = vd.face.vertices().iter().position(|&x| x == i) else {
            return QPolynomial::zero();
        };
        let n = self.n();
        QPolynomial::from_terms(
            vd.alpha_rows[r]
                .iter()
                .enumerate()
                .map(|(c, a)| (Monomial::var(n, c + 1), a.clone())),
        )
    }

    /// `Φ` extended as a ring map.
    pub fn phi(&self, p: &Polynomial) -> GkmTuple {
        let n = self.n();
        let m = self.complex.vertex_count();
        GkmTuple(
            (0..self.vertices.len())
                .map(|v| {
                    let images: Vec<QPolynomial> =
                        (1..=m).map(|i| self.phi_variable(v, i)).collect();
                    let mut out = QPolynomial::zero();
                    for (mono, c) in p.terms() {
                        let mut t = QPolynomial::constant(n, BigRational::from_integer(c.clone()));
                        for (i, &e) in mono.exponents().iter().enumerate() {
                            if e > 0 {
                                t = &t * &images[i].pow(e);
                            }
                        }
                        out = &out + &t;
                    }
                    out
                })
                .collect(),
        )
    }

    /// Pairs of vertices whose faces share `n - 1` vertices.
    pub fn edges(&self) -> Vec<GkmEdge> {
        let n = self.n();
        let mut out = Vec::new();
        for v in 0..self.vertices.len() {
            for w in v + 1..self.vertices.len() {
                let (a, b) = (self.vertices[v].face, self.vertices[w].face);
                let shared = Face::from_bits(a.bits() & b.bits()).len();
                if n > 0 && shared == n - 1 {
                    out.push(GkmEdge {
                        v,
                        w,
                        dropped: a.minus(b).vertices()[0],
                    });
                }
            }
        }
        out
    }

    /// The edge form `Φ(x_k)|_v` where `k` is the vertex of `σ_v` dropped on
    /// the way to `w`.
    pub fn edge_form(&self, v: usize, w: usize) -> Result<QPolynomial> {
        let diff = self.vertices[v].face.minus(self.vertices[w].face);
        if diff.len() != 1 || self.vertices[w].face.minus(self.vertices[v].face).len() != 1 {
            return Err(Error::input(format!(
                "vertices {v} and {w} are not joined by an edge"
            )));
        }
        Ok(self.phi_variable(v, diff.vertices()[0]))
    }

    /// GKM condition: the edge form divides `f_v - f_w` along every edge.
    pub fn gkm_check(&self, t: &GkmTuple) -> Result<GkmCheck> {
        if t.0.len() != self.vertices.len() {
            return Err(Error::input(format!(
                "tuple has {} entries, expected {}",
                t.0.len(),
                self.vertices.len()
            )));
        }
        let mut failing = Vec::new();
        for e in self.edges() {
            let alpha = self.edge_form(e.v, e.w)?;
            let diff = &t.0[e.v] - &t.0[e.w];
            if !divides_linear(&alpha, &diff) {
                failing.push(e);
            }
        }
        Ok(GkmCheck {
            holds: failing.is_empty(),
            failing_edges: failing,
        })
    }

    /// Position of a maximal face in the vertex order.
    pub fn vertex_index(&self, face: Face) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v.face == face)
            .ok_or_else(|| Error::input(format!("{face} is not a maximal face of K")))
    }

    /// A torsion element over the subring extended by `extra`: `f = x_{σ_v}`
    /// and `g = u_{n+1} - sum a_i u_i` with `Φ(g)|_v = 0`, so `g f = 0`.
    pub fn find_torsion(&self, extra: &LinearForm, v: Face) -> Result<TorsionElement> {
        let n = self.n();
        let m = self.complex.vertex_count();
        if extra.nvars() != m {
            return Err(Error::input(format!(
                "extra form has {} coefficients, expected {m}",
                extra.nvars()
            )));
        }
        let mut rows = self.subgroup.matrix().to_rows();
        rows.push(extra.coefficients().to_vec());
        let stacked = IntMatrix::from_rows(rows.clone())?;
        if rank_over_q(&stacked) != n + 1 {
            return Err(Error::input(format!(
                "extra form `{extra}` is dependent on the rows of B"
            )));
        }
        let idx = self.vertex_index(v)?;
        let image = self.phi(&extra.to_polynomial()).0.swap_remove(idx);
        let a: Vec<BigRational> = (1..=n)
            .map(|i| image.coefficient(&Monomial::var(n, i)))
            .collect();
        let mut g_rat: Vec<BigRational> = a.iter().map(|x| -x.clone()).collect();
        g_rat.push(BigRational::one());
        let g_coeffs = clear_denominators(&g_rat);

        let f = Polynomial::term(
            Monomial::new((1..=m).map(|i| u32::from(v.contains(i))).collect()),
            BigInt::one(),
        );
        let extended = SubgroupData::new(stacked)?;
        let g_x: Polynomial = extended
            .linear_forms()
            .iter()
            .zip(&g_coeffs)
            .fold(Polynomial::zero(), |acc, (u, c)| {
                &acc + &u.to_polynomial().scale(c)
            });
        let verified = reduce(&self.complex, &(&g_x * &f)).is_zero();
        if !verified {
            return Err(Error::internal(format!(
                "g = {} does not annihilate {f} in Z[K]",
                u_text(&g_coeffs)
            )));
        }
        Ok(TorsionElement {
            vertex: v,
            f,
            g: Polynomial::from_terms(
                g_coeffs
                    .iter()
                    .enumerate()
                    .map(|(i, c)| (Monomial::var(n + 1, i + 1), c.clone())),
            ),
            g_coefficients: g_coeffs,
            verified,
        })
    }

    /// Whether `Φ` is injective on `Z[K]_j`.
    pub fn is_injective_in_degree(&self, j: u32) -> Result<bool> {
        let basis = monomial_basis(&self.complex, j)?;
        let n = self.n();
        let targets = Monomial::all_of_total(n, j / 2);
        let images: Vec<GkmTuple> = basis
            .monomials()
            .iter()
            .map(|mo| self.phi(&Polynomial::term(mo.clone(), BigInt::one())))
            .collect();
        let mut mat: QMatrix = Vec::new();
        for v in 0..self.vertices.len() {
            for t in &targets {
                mat.push(images.iter().map(|img| img.0[v].coefficient(t)).collect());
            }
        }
        if basis.is_empty() {
            return Ok(true);
        }
        Ok(rref(&mut mat).len() == basis.len())
    }
}

fn u_text(coeffs: &[BigInt]) -> String {
    let n = coeffs.len();
    Polynomial::from_terms(
        coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| (Monomial::var(n, i + 1), c.clone())),
    )
    .to_text("u")
}

/// Whether the nonzero linear form `alpha` divides `p`: substitute the
/// last variable of `alpha` by its solution and test for zero.
fn divides_linear(alpha: &QPolynomial, p: &QPolynomial) -> bool {
    if p.is_zero() {
        return true;
    }
    let Some((lead, c)) = alpha.terms().next() else {
        return false;
    };
    let l = lead
        .exponents()
        .iter()
        .position(|&e| e == 1)
        .expect("linear");
    let n = lead.nvars();
    // u_l = -(alpha - c u_l) / c
    let rest = alpha - &QPolynomial::term(lead.clone(), c.clone());
    let sub = rest.scale(&(-c.recip()));
    let mut out = QPolynomial::zero();
    for (mono, a) in p.terms() {
        let mut e = mono.exponents().to_vec();
        let k = std::mem::take(&mut e[l]);
        let t = QPolynomial::term(Monomial::new(e), a.clone());
        out = if k == 0 {
            &out + &t
        } else {
            &out + &(&t * &sub.pow(k))
        };
    }
    debug_assert!(out.terms().all(|(m, _)| m.nvars() == n));
    out.is_zero()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TorsionElement {
    pub vertex: Face,
    #[serde(serialize_with = "poly_text")]
    pub f: Polynomial,
    /// `g` in the variables `u_1..u_{n+1}`.
    #[serde(serialize_with = "poly_u_text")]
    pub g: Polynomial,
    #[serde(serialize_with = "crate::intlinalg::serialize_bigints")]
    pub g_coefficients: Vec<BigInt>,
    pub verified: bool,
}

fn poly_text<S: serde::Serializer>(p: &Polynomial, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

fn poly_u_text<S: serde::Serializer>(p: &Polynomial, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_text("u"))
}

pub fn phi_restrictions(
    k: &SimplicialComplex,
    s: &SubgroupData,
    p: &Polynomial,
) -> Result<GkmTuple> {
    Ok(GkmData::new(k, s)?.phi(p))
}
