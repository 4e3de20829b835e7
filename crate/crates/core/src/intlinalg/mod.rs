//! Exact integer linear algebra: Smith and Hermite forms, kernels,
//! cokernels, homology subquotients, and sublattice comparisons.
//!
//! Everything here is a pure function of its inputs.

mod hermite;
mod matrix;
pub mod rational;
mod snf;
mod zmodule;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

pub use hermite::{hermite_rows, hermite_solve, lattice_basis, reduce_mod_lattice, Hermite};
pub use matrix::IntMatrix;
pub use snf::{invariant_factors, smith_normal_form, SmithForm};
pub use zmodule::{serialize_bigint, serialize_bigints, ZModule};

use crate::error::{Error, Result};
use snf::{SnfWork, Track};

/// Hermite-reduced `Z`-basis of `{v : a v = 0}`.
pub fn kernel_basis(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let w = SnfWork::run(
        a,
        Track {
            v: true,
            ..Track::default()
        },
    );
    let v = w.v.unwrap();
    let raw: Vec<Vec<BigInt>> = (w.rank..a.cols()).map(|c| v.column(c)).collect();
    lattice_basis(&raw, a.cols())
}

/// Structure of `Z^rows / image(a)`.
pub fn cokernel_structure(a: &IntMatrix) -> ZModule {
    let w = SnfWork::run(a, Track::default());
    ZModule::from_smith_diagonal(a.rows(), &snf::diagonal_of(&w.a))
}

/// `ker(d_out) / im(d_in)`.
pub fn homology_subquotient(d_out: &IntMatrix, d_in: &IntMatrix) -> Result<ZModule> {
    Ok(SubquotientPresentation::new(d_out, d_in)?.module().clone())
}

/// Some integer solution of `a x = b` via the Smith form. Generally a
/// different solution from [`hermite_solve`] when the solution is not unique.
pub fn smith_solve(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let w = SnfWork::run(a, Track::UV);
    let (u, v) = (w.u.unwrap(), w.v.unwrap());
    let ub = u.apply(b);
    let mut y = vec![BigInt::zero(); a.cols()];
    for (i, x) in ub.iter().enumerate() {
        if i < w.rank {
            let (q, r) = x.div_rem(w.a.at(i, i));
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !x.is_zero() {
            return None;
        }
    }
    Some(v.apply(&y))
}

/// A subquotient `ker(d_out) / im(d_in)` together with explicit generators,
/// so that cycles can be classified and induced maps computed.
#[derive(Clone, Debug)]
pub struct SubquotientPresentation {
    ambient: usize,
    /// `k x ambient`: coordinates of a cycle in the kernel basis.
    cycle_coords: IntMatrix,
    /// Rows of the Smith left transform kept for the nontrivial generators.
    change: IntMatrix,
    generators: Vec<Vec<BigInt>>,
    /// Order of each generator; zero for free generators.
    orders: Vec<BigInt>,
    module: ZModule,
}

impl SubquotientPresentation {
    pub fn new(d_out: &IntMatrix, d_in: &IntMatrix) -> Result<Self> {
        let ambient = d_out.cols();
        if d_in.rows() != ambient {
            return Err(Error::input(format!(
                "composable shapes required: d_out is {}x{}, d_in is {}x{}",
                d_out.rows(),
                d_out.cols(),
                d_in.rows(),
                d_in.cols()
            )));
        }
        if !(d_out * d_in).is_zero() {
            return Err(Error::internal("d_out * d_in != 0: not a chain complex"));
        }
        let out = SnfWork::run(
            d_out,
            Track {
                v: true,
                v_inv: true,
                ..Track::default()
            },
        );
        let (v, v_inv) = (out.v.unwrap(), out.v_inv.unwrap());
        let kernel_idx: Vec<usize> = (out.rank..ambient).collect();
        let k = kernel_idx.len();
        let cycle_coords = v_inv.select_rows(&kernel_idx);
        let z = v.select_columns(&kernel_idx);
        let coords = &cycle_coords * d_in;
        let rel = SnfWork::run(
            &coords,
            Track {
                u: true,
                u_inv: true,
                ..Track::default()
            },
        );
        let (u, u_inv) = (rel.u.unwrap(), rel.u_inv.unwrap());
        let diag = snf::diagonal_of(&rel.a);
        let gens_basis = &z * &u_inv;

        let mut keep = Vec::new();
        let mut orders = Vec::new();
        for i in 0..k {
            let d = diag.get(i).cloned().unwrap_or_default();
            if d.is_one() {
                continue;
            }
            keep.push(i);
            orders.push(d);
        }
        // Torsion generators first (in divisibility order), then free ones.
        let mut order_idx: Vec<usize> = (0..keep.len()).collect();
        order_idx.sort_by_key(|&t| orders[t].is_zero());
        let keep: Vec<usize> = order_idx.iter().map(|&t| keep[t]).collect();
        let orders: Vec<BigInt> = order_idx.iter().map(|&t| orders[t].clone()).collect();

        let generators = keep.iter().map(|&i| gens_basis.column(i)).collect();
        let change = u.select_rows(&keep);
        let module = ZModule::from_smith_diagonal(k, &diag);
        Ok(SubquotientPresentation {
            ambient,
            cycle_coords,
            change,
            generators,
            orders,
            module,
        })
    }

    pub fn module(&self) -> &ZModule {
        &self.module
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Cycle representatives of the generators.
    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.generators
    }

    /// Generator orders, zero meaning infinite.
    pub fn orders(&self) -> &[BigInt] {
        &self.orders
    }

    /// Coordinates of the class of the cycle `z` with respect to
    /// [`Self::generators`], torsion coordinates reduced into `[0, order)`.
    /// The caller is responsible for `z` being a cycle.
    pub fn classify(&self, z: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(z.len(), self.ambient, "chain length mismatch");
        let c = self.cycle_coords.apply(z);
        let w = self.change.apply(&c);
        w.into_iter()
            .zip(&self.orders)
            .map(|(x, d)| if d.is_zero() { x } else { x.mod_floor(d) })
            .collect()
    }

    /// Relation matrix `diag(orders)` of the presentation, restricted to
    /// the torsion generators (one column each).
    pub fn relations(&self) -> IntMatrix {
        let g = self.generators.len();
        let cols: Vec<Vec<BigInt>> = self
            .orders
            .iter()
            .enumerate()
            .filter(|(_, d)| !d.is_zero())
            .map(|(i, d)| {
                let mut col = vec![BigInt::zero(); g];
                col[i] = d.clone();
                col
            })
            .collect();
        IntMatrix::from_columns(g, &cols)
    }

    /// Matrix of the map induced on classes by the chain map `f` from
    /// `self`'s ambient space into `target`'s ambient space.
    pub fn induced_map(&self, f: &IntMatrix, target: &SubquotientPresentation) -> IntMatrix {
        assert_eq!(f.cols(), self.ambient);
        assert_eq!(f.rows(), target.ambient);
        let cols: Vec<Vec<BigInt>> = self
            .generators
            .iter()
            .map(|g| target.classify(&f.apply(g)))
            .collect();
        IntMatrix::from_columns(target.generators.len(), &cols)
    }
}

/// Column lattices: is `col(x) ⊆ col(y)`? Decided by comparing the Smith
/// invariants of `y` and of the stacked `[y | x]`.
pub fn lattice_contains(y: &IntMatrix, x: &IntMatrix) -> bool {
    assert_eq!(x.rows(), y.rows());
    let n = y.rows();
    let stacked = IntMatrix::hstack(n, &[y, x]);
    let fy = invariant_factors(y);
    let fs = invariant_factors(&stacked);
    fy.len() == fs.len() && fy.iter().product::<BigInt>() == fs.iter().product::<BigInt>()
}

pub fn lattice_eq(x: &IntMatrix, y: &IntMatrix) -> bool {
    lattice_contains(x, y) && lattice_contains(y, x)
}

/// Generators (as columns) of `{v in Z^cols(m) : m v ∈ col(target)}`.
pub fn preimage_lattice(m: &IntMatrix, target: &IntMatrix) -> IntMatrix {
    assert_eq!(m.rows(), target.rows());
    let b = m.cols();
    let joint = IntMatrix::hstack(m.rows(), &[m, &target.neg()]);
    let ker = kernel_basis(&joint);
    let cols: Vec<Vec<BigInt>> = ker.into_iter().map(|v| v[..b].to_vec()).collect();
    IntMatrix::from_columns(b, &cols)
}

/// Structure of `col(big) / col(small)`; requires `col(small) ⊆ col(big)`.
pub fn lattice_quotient(big: &IntMatrix, small: &IntMatrix) -> Result<ZModule> {
    let n = big.rows();
    let basis = lattice_basis(&big.transpose().to_rows(), n);
    let basis_m = IntMatrix::from_columns(n, &basis);
    let mut coords = Vec::with_capacity(small.cols());
    for c in 0..small.cols() {
        let v = small.column(c);
        let x = hermite_solve(&basis_m, &v)
            .ok_or_else(|| Error::internal("sublattice not contained in lattice"))?;
        coords.push(x);
    }
    let rel = IntMatrix::from_columns(basis.len(), &coords);
    Ok(cokernel_structure(&rel))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows.iter().map(|r| r.to_vec())).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn same_span(a: &[Vec<BigInt>], b: &[Vec<BigInt>], dim: usize) -> bool {
        lattice_basis(a, dim) == lattice_basis(b, dim)
    }

    #[test]
    fn kernel_examples() {
        let b = m(&[&[1, 0, -1, 0], &[0, 1, 0, -1]]);
        let k = kernel_basis(&b);
        assert!(same_span(
            &k,
            &[ints(&[1, 0, 1, 0]), ints(&[0, 1, 0, 1])],
            4
        ));
        assert!(kernel_basis(&IntMatrix::identity(3)).is_empty());
        let k = kernel_basis(&m(&[&[2, -4]]));
        assert!(same_span(&k, &[ints(&[2, 1])], 2));
    }

    #[test]
    fn cokernel_examples() {
        let t = |v: &[i64]| ints(v);
        assert_eq!(
            cokernel_structure(&m(&[&[2]])),
            ZModule::new(0, t(&[2])).unwrap()
        );
        assert_eq!(
            cokernel_structure(&IntMatrix::zeros(2, 3)),
            ZModule::free(2)
        );
        assert_eq!(
            cokernel_structure(&m(&[&[2, 0], &[0, 3]])),
            ZModule::new(0, t(&[6])).unwrap()
        );
    }

    #[test]
    fn homology_examples() {
        let n = 3;
        let h = homology_subquotient(&IntMatrix::zeros(1, n), &IntMatrix::zeros(n, 0)).unwrap();
        assert_eq!(h, ZModule::free(n));
        let h = homology_subquotient(&IntMatrix::identity(2), &IntMatrix::zeros(2, 0)).unwrap();
        assert!(h.is_zero());
        let h = homology_subquotient(&m(&[&[0, 0]]), &m(&[&[2], &[0]])).unwrap();
        assert_eq!(h, ZModule::new(1, ints(&[2])).unwrap());
    }

    #[test]
    fn homology_rejects_non_complex() {
        let err = homology_subquotient(&m(&[&[1, 0]]), &m(&[&[1], &[0]])).unwrap_err();
        assert!(matches!(err, Error::Internal(_)));
        assert!(homology_subquotient(&m(&[&[1, 0]]), &m(&[&[1]])).is_err());
    }

    #[test]
    fn classify_torsion_generator() {
        // Z^2 / <(2, 0)>: the class of (1, 0) has order 2, (0, 1) is free.
        let p = SubquotientPresentation::new(&m(&[&[0, 0]]), &m(&[&[2], &[0]])).unwrap();
        assert_eq!(p.orders(), &ints(&[2, 0])[..]);
        assert_eq!(p.classify(&ints(&[2, 0])), ints(&[0, 0]));
        assert_ne!(p.classify(&ints(&[1, 0])), ints(&[0, 0]));
        for g in p.generators() {
            let c = p.classify(g);
            assert_eq!(c.iter().filter(|x| !x.is_zero()).count(), 1);
        }
    }

    #[test]
    fn lattices() {
        let a = m(&[&[2, 0], &[0, 2]]);
        let b = m(&[&[2, 2], &[0, 2]]);
        assert!(lattice_eq(&a, &b));
        let c = m(&[&[1], &[0]]);
        assert!(!lattice_contains(&a, &c));
        assert!(lattice_contains(&IntMatrix::hstack(2, &[&a, &c]), &c));
        let q = lattice_quotient(&IntMatrix::identity(2), &a).unwrap();
        assert_eq!(q, ZModule::new(0, ints(&[2, 2])).unwrap());
        // Preimage of 2Z under (1 1): {(x, y) : x + y even}.
        let pre = preimage_lattice(&m(&[&[1, 1]]), &m(&[&[2]]));
        assert!(lattice_eq(&pre, &m(&[&[1, 2], &[1, 0]])));
    }

    #[test]
    fn two_solvers_agree_on_solvability() {
        let a = m(&[&[2, 4, 0], &[0, 6, 3]]);
        for b in [ints(&[2, 3]), ints(&[1, 0]), ints(&[4, 9]), ints(&[0, 1])] {
            let h = hermite_solve(&a, &b);
            let s = smith_solve(&a, &b);
            assert_eq!(h.is_some(), s.is_some());
            if let (Some(h), Some(s)) = (h, s) {
                assert_eq!(a.apply(&h), b);
                assert_eq!(a.apply(&s), b);
            }
        }
    }
}
