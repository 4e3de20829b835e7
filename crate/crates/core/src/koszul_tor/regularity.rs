//! Direct check that `u_1, .., u_n` is a regular sequence on `Z[K]` in low
//! degrees, independent of the Koszul homology.

use serde::Serialize;

use super::KoszulComplex;
use crate::error::Result;
use crate::intlinalg::{
    lattice_basis, lattice_contains, preimage_lattice, reduce_mod_lattice, IntMatrix,
};
use crate::stanley_reisner::mult_matrix_between;
use crate::Polynomial;

/// A zero divisor: `u_index * element` lies in `(u_1..u_{index-1})` while
/// `element` does not.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegularityFailure {
    /// 1-based index of the offending form.
    pub index: usize,
    /// Degree of `element`.
    pub degree: u32,
    #[serde(serialize_with = "as_text")]
    pub element: Polynomial,
}

fn as_text<S: serde::Serializer>(p: &Polynomial, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegularityReport {
    /// Products were examined in target degrees up to this bound.
    pub bound: u32,
    pub failure: Option<RegularityFailure>,
}

impl RegularityReport {
    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }
}

impl KoszulComplex {
    /// Generators (as columns) of `(u_1..u_k)` inside `Z[K]_j`.
    fn ideal_piece(&self, k: usize, j: u32) -> IntMatrix {
        let dst = &self.bases[(j / 2) as usize];
        if j == 0 || k == 0 {
            return IntMatrix::zeros(dst.len(), 0);
        }
        let src = &self.bases[(j / 2 - 1) as usize];
        let blocks: Vec<IntMatrix> = self.forms[..k]
            .iter()
            .map(|u| mult_matrix_between(u, src, dst))
            .collect();
        let refs: Vec<&IntMatrix> = blocks.iter().collect();
        IntMatrix::hstack(dst.len(), &refs)
    }
}

/// For each `i` and each target degree `j <= bound`, compares
/// `{f in Z[K]_{j-2} : u_i f in (u_1..u_{i-1})}` with `(u_1..u_{i-1})_{j-2}`.
/// Reports the first failure ordered by `i`, then by degree.
pub fn regular_sequence_check(kc: &KoszulComplex) -> Result<RegularityReport> {
    let bound = kc.max_degree();
    for i in 0..kc.n() {
        for j in (2..=bound).step_by(2) {
            let src = &kc.bases[(j / 2 - 1) as usize];
            let dst = &kc.bases[(j / 2) as usize];
            let mult = mult_matrix_between(&kc.forms[i], src, dst);
            let colon = preimage_lattice(&mult, &kc.ideal_piece(i, j));
            let ideal = kc.ideal_piece(i, j - 2);
            if lattice_contains(&ideal, &colon) {
                continue;
            }
            let basis = lattice_basis(&ideal.transpose().to_rows(), ideal.rows());
            let f = (0..colon.cols())
                .map(|c| colon.column(c))
                .find(|v| {
                    !lattice_contains(
                        &ideal,
                        &IntMatrix::from_columns(v.len(), std::slice::from_ref(v)),
                    )
                })
                .expect("some generator escapes the ideal");
            let f = reduce_mod_lattice(&f, &basis);
            return Ok(RegularityReport {
                bound,
                failure: Some(RegularityFailure {
                    index: i + 1,
                    degree: j - 2,
                    element: src.polynomial(&f),
                }),
            });
        }
    }
    Ok(RegularityReport {
        bound,
        failure: None,
    })
}
