//! Splitting off one linear form. With `C(n)` the Koszul complex on
//! `u_1..u_n` and `C(n+1)` the one on `u_1..u_{n+1}`, there is a short exact
//! sequence of complexes
//!
//! ```text
//! 0 -> C(n) --τ*--> C(n+1) --τ_*--> C(n)[-1] -> 0
//! ```
//!
//! where `τ*` is the inclusion and `τ_*` strips `ξ_{n+1}`. Its long exact
//! sequence at a fixed internal degree `j` reads
//!
//! ```text
//! 0 -> T~_{n+1}(j) -> T_n(j-2) -δ-> T_n(j) -> T~_n(j) -> T_{n-1}(j-2) -> ... -> T~_0(j) -> 0
//! ```
//!
//! with `δ` multiplication by `u_{n+1}`.
//!
//! Conventions: for `S` containing `n+1` and `S' = S \ {n+1}`,
//! `τ_*(α ⊗ ξ_S) = (-1)^{|S'|} α ⊗ ξ_{S'}`. The target complex carries the
//! differential `-∂`, so `τ_* ∂' = -∂ τ_*` and the snake map is `+u_{n+1}`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::intlinalg::{
    hermite_solve, invariant_factors, kernel_basis, lattice_contains, lattice_eq, lattice_quotient,
    preimage_lattice, smith_solve, IntMatrix, SubquotientPresentation, ZModule,
};
use crate::koszul_tor::KoszulComplex;
use crate::simplicial::{SimplicialComplex, SubgroupData};
use crate::stanley_reisner::{mult_matrix_between, LinearForm};

#[derive(Clone, Debug)]
pub struct GysinData {
    extended: SubgroupData,
    /// 0-based row of `B~` playing the role of `u_{n+1}`.
    split: usize,
    bound: u32,
    extra: LinearForm,
    small: KoszulComplex,
    big: KoszulComplex,
}

impl GysinData {
    /// `split` is the 1-based row of `B~` split off as `u_{n+1}`; `None`
    /// selects the last row.
    pub fn new(
        k: &SimplicialComplex,
        extended: &SubgroupData,
        split: Option<usize>,
        bound: u32,
    ) -> Result<Self> {
        let rows = extended.n();
        if rows == 0 {
            return Err(Error::input("B~ needs at least one row to split off"));
        }
        let split = match split {
            None => rows - 1,
            Some(s) if (1..=rows).contains(&s) => s - 1,
            Some(s) => {
                return Err(Error::input(format!(
                    "split row {s} out of range 1..={rows}"
                )))
            }
        };
        let forms = extended.linear_forms();
        let extra = forms[split].clone();
        let mut kept: Vec<LinearForm> = forms
            .iter()
            .enumerate()
            .filter(|&(r, _)| r != split)
            .map(|(_, u)| u.clone())
            .collect();
        let small = KoszulComplex::from_forms(k, kept.clone(), bound)?;
        kept.push(extra.clone());
        let big = KoszulComplex::from_forms(k, kept, bound)?;
        Ok(GysinData {
            extended: extended.clone(),
            split,
            bound,
            extra,
            small,
            big,
        })
    }

    pub fn n(&self) -> usize {
        self.small.n()
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    /// 1-based split row.
    pub fn split_row(&self) -> usize {
        self.split + 1
    }

    pub fn extended(&self) -> &SubgroupData {
        &self.extended
    }

    pub fn small(&self) -> &KoszulComplex {
        &self.small
    }

    pub fn big(&self) -> &KoszulComplex {
        &self.big
    }

    /// `τ* : C(n)_{p,j} -> C(n+1)_{p,j}`.
    pub fn tau_up(&self, p: usize, j: u32) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.big.chain_rank(p, j), self.small.chain_rank(p, j));
        if out.cols() == 0 {
            return out;
        }
        let w = self.small.ring_basis(p, j).expect("nonempty").len();
        let id = IntMatrix::identity(w);
        let targets = self.big.subsets(p);
        for (s_idx, s) in self.small.subsets(p).iter().enumerate() {
            let t_idx = targets.binary_search(s).expect("subset present");
            out.set_block(t_idx * w, s_idx * w, &id);
        }
        out
    }

    /// `τ_* : C(n+1)_{p,j} -> C(n)_{p-1,j-2}`.
    pub fn tau_down(&self, p: usize, j: u32) -> IntMatrix {
        let rows = if p == 0 || j < 2 {
            0
        } else {
            self.small.chain_rank(p - 1, j - 2)
        };
        let mut out = IntMatrix::zeros(rows, self.big.chain_rank(p, j));
        if rows == 0 || out.cols() == 0 {
            return out;
        }
        let n = self.n();
        let w = self.big.ring_basis(p, j).expect("nonempty").len();
        let sign = if (p - 1).is_multiple_of(2) { 1 } else { -1 };
        let targets = self.small.subsets(p - 1);
        let id = IntMatrix::identity(w);
        for (s_idx, s) in self.big.subsets(p).iter().enumerate() {
            if s.last() != Some(&n) {
                continue;
            }
            let t_idx = targets
                .binary_search(&s[..s.len() - 1].to_vec())
                .expect("subset present");
            out.add_block(t_idx * w, s_idx * w, &id, sign);
        }
        out
    }

    /// `·u_{n+1} : C(n)_{p,j-2} -> C(n)_{p,j}`.
    pub fn mult_extra(&self, p: usize, j: u32) -> IntMatrix {
        let src_rank = if j < 2 {
            0
        } else {
            self.small.chain_rank(p, j - 2)
        };
        let mut out = IntMatrix::zeros(self.small.chain_rank(p, j), src_rank);
        if src_rank == 0 || out.rows() == 0 {
            return out;
        }
        let src = self.small.ring_basis(p, j - 2).expect("nonempty");
        let dst = self.small.ring_basis(p, j).expect("nonempty");
        let block = mult_matrix_between(&self.extra, src, dst);
        for s_idx in 0..self.small.subsets(p).len() {
            out.set_block(s_idx * dst.len(), s_idx * src.len(), &block);
        }
        out
    }

    fn small_pres(&self, p: usize, j: i64) -> Result<SubquotientPresentation> {
        if j < 0 || p > self.n() {
            return zero_presentation();
        }
        self.small.presentation(p, j as u32)
    }

    fn big_pres(&self, p: usize, j: u32) -> Result<SubquotientPresentation> {
        self.big.presentation(p, j)
    }

    /// Chain-level short exactness in every bidegree up to the bound.
    pub fn chain_level_check(&self) -> Result<ChainLevelReport> {
        let mut failures = Vec::new();
        let mut checked = 0;
        for p in 0..=self.n() + 1 {
            for j in (0..=self.bound).step_by(2) {
                checked += 1;
                let up = self.tau_up(p, j);
                let down = self.tau_down(p, j);
                let at = format!("(p={p}, j={j})");
                if !(&down * &up).is_zero() {
                    failures.push(format!("τ_* τ* != 0 at {at}"));
                }
                if up.cols() > 0 && crate::intlinalg::rational::rank_over_q(&up) != up.cols() {
                    failures.push(format!("τ* not injective at {at}"));
                }
                if down.rows() > 0 {
                    let f = invariant_factors(&down);
                    if f.len() != down.rows() || !f.iter().all(One::is_one) {
                        failures.push(format!("τ_* not surjective at {at}"));
                    }
                }
                let ker = kernel_basis(&down);
                let ker_m = IntMatrix::from_columns(down.cols(), &ker);
                if !lattice_eq(&ker_m, &up) {
                    failures.push(format!("ker τ_* != im τ* at {at}"));
                }
                if p >= 1 {
                    let d_big = self.big.differential(p, j)?;
                    let d_small = self.small.differential(p, j)?;
                    if &d_big * &up != &self.tau_up(p - 1, j) * &d_small {
                        failures.push(format!("∂ τ* != τ* ∂ at {at}"));
                    }
                    if j >= 2 {
                        let lhs = &self.tau_down(p - 1, j) * &d_big;
                        let rhs = (&self.small.differential(p - 1, j - 2)? * &down).neg();
                        if lhs != rhs {
                            failures.push(format!("τ_* ∂ != -∂ τ_* at {at}"));
                        }
                    }
                }
            }
        }
        Ok(ChainLevelReport { checked, failures })
    }

    /// Every node of the long exact sequence for each even `j <= bound`.
    pub fn build_and_verify_exactness(&self) -> Result<GysinReport> {
        let per_j = (0..=self.bound)
            .step_by(2)
            .collect::<Vec<u32>>()
            .into_par_iter()
            .map(|j| self.sequence_at(j))
            .collect::<Result<Vec<_>>>()?;
        let nodes: Vec<GysinNode> = per_j.into_iter().flatten().collect();
        let chain_level = self.chain_level_check()?;
        let exact = nodes.iter().all(|n| n.pass) && chain_level.failures.is_empty();
        Ok(GysinReport {
            bound: self.bound,
            split: self.split_row(),
            n: self.n(),
            exact,
            nodes,
            chain_level,
        })
    }

    fn sequence_at(&self, j: u32) -> Result<Vec<GysinNode>> {
        let n = self.n();
        let ji = i64::from(j);
        // Terms in sequence order, each with the chain map to the next term.
        let mut terms: Vec<(Term, SubquotientPresentation)> = Vec::new();
        terms.push((Term::Big { i: n + 1, j }, self.big_pres(n + 1, j)?));
        for i in (0..=n).rev() {
            terms.push((Term::Small { i, j: ji - 2 }, self.small_pres(i, ji - 2)?));
            terms.push((Term::Small { i, j: ji }, self.small_pres(i, ji)?));
            terms.push((Term::Big { i, j }, self.big_pres(i, j)?));
        }
        let mut maps: Vec<IntMatrix> = Vec::with_capacity(terms.len());
        for w in terms.windows(2) {
            let chain = match (w[0].0, w[1].0) {
                (Term::Big { i, .. }, Term::Small { .. }) => self.tau_down(i, j),
                (Term::Small { i, .. }, Term::Small { .. }) => self.mult_extra(i, j),
                (Term::Small { i, .. }, Term::Big { .. }) => self.tau_up(i, j),
                _ => unreachable!("sequence alternates"),
            };
            if chain.shape() != (w[1].1.ambient_dim(), w[0].1.ambient_dim()) {
                return Err(Error::internal(format!(
                    "chain map {} -> {} has shape {:?}",
                    w[0].0,
                    w[1].0,
                    chain.shape()
                )));
            }
            maps.push(w[0].1.induced_map(&chain, &w[1].1));
        }
        let mut nodes = Vec::with_capacity(terms.len());
        for (k, (term, pres)) in terms.iter().enumerate() {
            let gens = pres.generators().len();
            let incoming = if k == 0 {
                IntMatrix::zeros(gens, 0)
            } else {
                maps[k - 1].clone()
            };
            let (outgoing, next_rel) = if k + 1 == terms.len() {
                (IntMatrix::zeros(0, gens), IntMatrix::zeros(0, 0))
            } else {
                (maps[k].clone(), terms[k + 1].1.relations())
            };
            nodes.push(check_node(*term, pres, &incoming, &outgoing, &next_rel)?);
        }
        Ok(nodes)
    }

    /// `δ` on `T_i(j-2) -> T_i(j)` computed as multiplication by `u_{n+1}`
    /// and by the snake chase with two different lifts.
    pub fn connecting_map_check(&self) -> Result<Vec<ConnectingCheck>> {
        let cells: Vec<(usize, u32)> = (0..=self.n())
            .flat_map(|i| (2..=self.bound).step_by(2).map(move |j| (i, j)))
            .collect();
        cells
            .into_par_iter()
            .map(|(i, j)| self.connecting_at(i, j))
            .collect()
    }

    fn connecting_at(&self, i: usize, j: u32) -> Result<ConnectingCheck> {
        let src = self.small_pres(i, i64::from(j) - 2)?;
        let dst = self.small_pres(i, i64::from(j))?;
        let direct = src.induced_map(&self.mult_extra(i, j), &dst);
        let lift_down = self.tau_down(i + 1, j);
        let d_big = self.big.differential(i + 1, j)?;
        let up = self.tau_up(i, j);
        let shift = self.tau_up(i + 1, j);
        let ones = vec![BigInt::one(); shift.cols()];
        let shift_vec = shift.apply(&ones);

        let chase = |use_smith: bool| -> Result<IntMatrix> {
            let cols = src
                .generators()
                .iter()
                .map(|z| {
                    let y = if use_smith {
                        let y0 = smith_solve(&lift_down, z)
                            .ok_or_else(|| Error::internal("τ_* lift failed"))?;
                        y0.iter().zip(&shift_vec).map(|(a, b)| a + b).collect()
                    } else {
                        hermite_solve(&lift_down, z)
                            .ok_or_else(|| Error::internal("τ_* lift failed"))?
                    };
                    let v = d_big.apply(&y);
                    let w = hermite_solve(&up, &v)
                        .ok_or_else(|| Error::internal("∂ of lift is not in the image of τ*"))?;
                    Ok(dst.classify(&w))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(IntMatrix::from_columns(dst.generators().len(), &cols))
        };
        let via_hermite = chase(false)?;
        let via_smith = chase(true)?;
        let agrees = direct == via_hermite && direct == via_smith;
        if !agrees {
            return Err(Error::internal(format!(
                "connecting map at (i={i}, j={j}) differs from multiplication by u_{{n+1}}"
            )));
        }
        Ok(ConnectingCheck {
            i,
            j,
            source: src.module().clone(),
            target: dst.module().clone(),
            agrees,
            map: direct.to_rows(),
        })
    }
}

fn zero_presentation() -> Result<SubquotientPresentation> {
    SubquotientPresentation::new(&IntMatrix::zeros(0, 0), &IntMatrix::zeros(0, 0))
}

/// Position in the long exact sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "ring", rename_all = "snake_case")]
pub enum Term {
    /// `Tor` over the smaller subring.
    Small { i: usize, j: i64 },
    /// `Tor` over the subring with `u_{n+1}` added.
    Big { i: usize, j: u32 },
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Small { i, j } => write!(f, "T_{i}({j})"),
            Term::Big { i, j } => write!(f, "T~_{i}({j})"),
        }
    }
}

fn check_node(
    term: Term,
    pres: &SubquotientPresentation,
    incoming: &IntMatrix,
    outgoing: &IntMatrix,
    next_rel: &IntMatrix,
) -> Result<GysinNode> {
    let gens = pres.generators().len();
    if gens == 0 {
        return Ok(GysinNode {
            term,
            group: ZModule::zero(),
            image: ZModule::zero(),
            kernel: ZModule::zero(),
            pass: true,
        });
    }
    let rel = pres.relations();
    let image_lat = IntMatrix::hstack(gens, &[incoming, &rel]);
    let kernel_lat = if outgoing.rows() == 0 {
        IntMatrix::identity(gens)
    } else {
        preimage_lattice(outgoing, next_rel)
    };
    let pass = lattice_eq(&image_lat, &kernel_lat);
    let image = lattice_quotient(&image_lat, &rel)?;
    let kernel = if lattice_contains(&kernel_lat, &rel) {
        lattice_quotient(&kernel_lat, &rel)?
    } else {
        return Err(Error::internal(format!(
            "outgoing map at {term} is not well defined on classes"
        )));
    };
    Ok(GysinNode {
        term,
        group: pres.module().clone(),
        image,
        kernel,
        pass,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GysinNode {
    pub term: Term,
    pub group: ZModule,
    /// Image of the incoming map.
    pub image: ZModule,
    /// Kernel of the outgoing map.
    pub kernel: ZModule,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainLevelReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GysinReport {
    pub bound: u32,
    pub split: usize,
    pub n: usize,
    pub exact: bool,
    pub nodes: Vec<GysinNode>,
    pub chain_level: ChainLevelReport,
}

impl GysinReport {
    pub fn failing(&self) -> impl Iterator<Item = &GysinNode> {
        self.nodes.iter().filter(|n| !n.pass)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConnectingCheck {
    pub i: usize,
    /// Internal degree of the target.
    pub j: u32,
    pub source: ZModule,
    pub target: ZModule,
    pub agrees: bool,
    /// Matrix of `δ` on generators.
    #[serde(serialize_with = "serialize_rows")]
    pub map: Vec<Vec<BigInt>>,
}

fn serialize_rows<S: serde::Serializer>(
    rows: &[Vec<BigInt>],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    struct Row<'a>(&'a [BigInt]);
    impl Serialize for Row<'_> {
        fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
            crate::intlinalg::serialize_bigints(self.0, s)
        }
    }
    let mut seq = s.serialize_seq(Some(rows.len()))?;
    for r in rows {
        seq.serialize_element(&Row(r))?;
    }
    seq.end()
}

impl ConnectingCheck {
    pub fn is_nonzero_node(&self) -> bool {
        !self.source.is_zero()
    }

    pub fn map_is_zero(&self) -> bool {
        self.map.iter().flatten().all(Zero::is_zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> SimplicialComplex {
        SimplicialComplex::new(4, &[vec![1, 2], vec![2, 3], vec![3, 4], vec![1, 4]]).unwrap()
    }

    fn data(k: &SimplicialComplex, rows: &[&[i64]], d: u32) -> GysinData {
        let s = SubgroupData::new(IntMatrix::from_rows(rows.iter().map(|r| r.to_vec())).unwrap())
            .unwrap();
        GysinData::new(k, &s, None, d).unwrap()
    }

    #[test]
    fn single_form_sequence_is_exact() {
        let g = data(&SimplicialComplex::simplex_boundary(2), &[&[2, -1]], 12);
        let r = g.build_and_verify_exactness().unwrap();
        assert!(r.exact, "{:?}", r.failing().collect::<Vec<_>>());
        assert!(r
            .nodes
            .iter()
            .filter(|n| matches!(n.term, Term::Big { i: 1, .. }))
            .all(|n| n.group.is_zero()));
        for c in g.connecting_map_check().unwrap() {
            assert!(c.agrees);
        }
    }

    #[test]
    fn connecting_map_at_degree_two_is_multiplication() {
        // δ : Z[K]_0 -> Z[K]_2 sends 1 to 2x1 - x2.
        let g = data(&SimplicialComplex::simplex_boundary(2), &[&[2, -1]], 4);
        let c = g.connecting_map_check().unwrap();
        let at2 = c.iter().find(|c| c.i == 0 && c.j == 2).unwrap();
        assert_eq!(at2.source, ZModule::free(1));
        assert_eq!(at2.target, ZModule::free(2));
        assert!(!at2.map_is_zero());
    }

    #[test]
    fn square_sequences_are_exact() {
        for rows in [
            [[1, 0, -1, 0], [0, 1, 0, -1]],
            [[1, 0, -2, 0], [0, 2, 0, -1]],
        ] {
            let r: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
            let g = data(&square(), &r, 10);
            let rep = g.build_and_verify_exactness().unwrap();
            assert!(rep.exact, "{:?}", rep.failing().collect::<Vec<_>>());
            assert!(rep.chain_level.failures.is_empty());
            assert!(g.connecting_map_check().unwrap().iter().all(|c| c.agrees));
        }
    }

    #[test]
    fn node_check_detects_a_gap() {
        // Z with zero maps on both sides is not exact.
        let pres =
            SubquotientPresentation::new(&IntMatrix::zeros(0, 1), &IntMatrix::zeros(1, 0)).unwrap();
        let term = Term::Small { i: 0, j: 0 };
        let node = check_node(
            term,
            &pres,
            &IntMatrix::zeros(1, 0),
            &IntMatrix::zeros(1, 1),
            &IntMatrix::zeros(1, 0),
        )
        .unwrap();
        assert!(!node.pass);
        let node = check_node(
            term,
            &pres,
            &IntMatrix::from_rows([[2]]).unwrap(),
            &IntMatrix::zeros(1, 1),
            &IntMatrix::zeros(1, 0),
        )
        .unwrap();
        assert!(!node.pass);
        assert_eq!(node.image, ZModule::free(1));
        let node = check_node(
            term,
            &pres,
            &IntMatrix::from_rows([[-1]]).unwrap(),
            &IntMatrix::zeros(1, 1),
            &IntMatrix::zeros(1, 0),
        )
        .unwrap();
        assert!(node.pass);
    }

    #[test]
    fn split_row_is_validated() {
        let s = SubgroupData::new(IntMatrix::from_rows([[2, -1]]).unwrap()).unwrap();
        let k = SimplicialComplex::simplex_boundary(2);
        assert!(GysinData::new(&k, &s, Some(2), 4).is_err());
        assert!(GysinData::new(&k, &SubgroupData::empty(2), None, 4).is_err());
    }
}
