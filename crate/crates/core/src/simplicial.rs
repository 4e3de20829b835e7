//! Simplicial complexes on `[m]` and the matrix `B` of the quotient torus.

use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::intlinalg::{rational::rank_over_q, serialize_bigint, smith_normal_form, IntMatrix};

/// Largest supported vertex count.
pub const MAX_VERTICES: usize = 64;

/// A subset of `[m]`, stored as a bitset (bit `i - 1` for vertex `i`).
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face(u64);

impl Face {
    pub const EMPTY: Face = Face(0);

    pub fn from_bits(bits: u64) -> Face {
        Face(bits)
    }

    /// From 1-based vertex labels; each must lie in `[m]`.
    pub fn from_vertices(m: usize, vertices: &[usize]) -> Result<Face> {
        let mut bits = 0u64;
        for &v in vertices {
            if v == 0 || v > m {
                return Err(Error::input(format!("vertex {v} out of range (m = {m})")));
            }
            bits |= 1 << (v - 1);
        }
        Ok(Face(bits))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// Sorted 1-based labels.
    pub fn vertices(self) -> Vec<usize> {
        (0..64)
            .filter(|i| self.0 >> i & 1 == 1)
            .map(|i| i + 1)
            .collect()
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, vertex: usize) -> bool {
        (1..=64).contains(&vertex) && self.0 >> (vertex - 1) & 1 == 1
    }

    pub fn is_subset_of(self, other: Face) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: Face) -> Face {
        Face(self.0 | other.0)
    }

    pub fn minus(self, other: Face) -> Face {
        Face(self.0 & !other.0)
    }

    pub fn with(self, vertex: usize) -> Face {
        Face(self.0 | 1 << (vertex - 1))
    }

    pub fn without(self, vertex: usize) -> Face {
        Face(self.0 & !(1 << (vertex - 1)))
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.vertices().iter().join(" "))
    }
}

impl fmt::Debug for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Face {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.vertices().serialize(s)
    }
}

/// Simplicial complex on `[m]`, given by its maximal faces. Vertices in no
/// face are ghost vertices; `{i}` is then a non-face, so `x_i` vanishes in
/// the Stanley-Reisner ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    m: usize,
    maximal: Vec<Face>,
}

impl SimplicialComplex {
    /// Any list of faces; non-maximal ones are absorbed. The surviving
    /// maximal faces keep their first-occurrence order.
    pub fn new(m: usize, faces: &[Vec<usize>]) -> Result<Self> {
        if m > MAX_VERTICES {
            return Err(Error::input(format!(
                "at most {MAX_VERTICES} vertices are supported, got {m}"
            )));
        }
        let faces = faces
            .iter()
            .map(|f| Face::from_vertices(m, f))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_faces(m, &faces))
    }

    pub(crate) fn from_faces(m: usize, faces: &[Face]) -> Self {
        let mut maximal: Vec<Face> = Vec::new();
        for (i, &f) in faces.iter().enumerate() {
            let dominated = faces
                .iter()
                .enumerate()
                .any(|(j, &g)| f != g && f.is_subset_of(g) || (f == g && j < i));
            if !dominated && !f.is_empty() {
                maximal.push(f);
            }
        }
        SimplicialComplex { m, maximal }
    }

    /// The full simplex on `[m]`.
    pub fn simplex(m: usize) -> Self {
        let all = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
        Self::from_faces(m, &[Face(all)])
    }

    /// The boundary of the `(m-1)`-simplex.
    pub fn simplex_boundary(m: usize) -> Self {
        let faces: Vec<Vec<usize>> = (1..=m)
            .map(|skip| (1..=m).filter(|&v| v != skip).collect())
            .collect();
        Self::new(m, &faces).expect("valid by construction")
    }

    pub fn vertex_count(&self) -> usize {
        self.m
    }

    pub fn maximal_faces(&self) -> &[Face] {
        &self.maximal
    }

    pub fn contains_face(&self, sigma: Face) -> bool {
        sigma.is_empty() || self.maximal.iter().any(|&f| sigma.is_subset_of(f))
    }

    /// Face membership for 1-based labels.
    pub fn is_face(&self, sigma: &[usize]) -> Result<bool> {
        Ok(self.contains_face(Face::from_vertices(self.m, sigma)?))
    }

    pub fn dimension_bound(&self) -> usize {
        self.maximal.iter().map(|f| f.len()).max().unwrap_or(0)
    }

    /// All faces including the empty face, sorted by size then bits.
    pub fn faces(&self) -> Vec<Face> {
        let mut all = std::collections::BTreeSet::new();
        all.insert(Face::EMPTY);
        for &f in &self.maximal {
            // Enumerate submasks of f.
            let mut s = f.0;
            loop {
                all.insert(Face(s));
                if s == 0 {
                    break;
                }
                s = (s - 1) & f.0;
            }
        }
        let mut v: Vec<Face> = all.into_iter().collect();
        v.sort_by_key(|f| (f.len(), f.0));
        v
    }

    /// `f_{k}` = number of faces with `k` vertices, for `k = 0..=dim+1`.
    pub fn face_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.dimension_bound() + 1];
        for f in self.faces() {
            counts[f.len()] += 1;
        }
        counts
    }

    /// Inclusion-minimal non-faces: the generators `x_σ` of the
    /// Stanley-Reisner ideal.
    pub fn minimal_nonfaces(&self) -> Vec<Face> {
        let mut out = std::collections::BTreeSet::new();
        for tau in self.faces() {
            for v in 1..=self.m {
                if tau.contains(v) {
                    continue;
                }
                let sigma = tau.with(v);
                if self.contains_face(sigma) {
                    continue;
                }
                if sigma
                    .vertices()
                    .iter()
                    .all(|&w| self.contains_face(sigma.without(w)))
                {
                    out.insert(sigma);
                }
            }
        }
        let mut v: Vec<Face> = out.into_iter().collect();
        v.sort_by_key(|f| (f.len(), f.0));
        v
    }

    /// Pure: all maximal faces have the same size.
    pub fn pure_dimension(&self) -> Option<usize> {
        let first = self.maximal.first()?.len();
        self.maximal
            .iter()
            .all(|f| f.len() == first)
            .then_some(first)
    }

    pub fn ghost_vertices(&self) -> Vec<usize> {
        (1..=self.m)
            .filter(|&v| !self.contains_face(Face::EMPTY.with(v)))
            .collect()
    }

    /// Relabels vertex `i` as `perm[i - 1]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.m);
        let faces: Vec<Face> = self
            .maximal
            .iter()
            .map(|f| {
                f.vertices()
                    .iter()
                    .fold(Face::EMPTY, |acc, &v| acc.with(perm[v - 1]))
            })
            .collect();
        Self::from_faces(self.m, &faces)
    }
}

/// The `n x m` integer matrix `B` of the projection `T -> R`. Its rows are
/// the linear forms `u_i = sum_j B_ij x_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupData {
    b: IntMatrix,
}

impl SubgroupData {
    /// Requires rank `n` over `Q`, so that the `u_i` generate a polynomial
    /// subring.
    pub fn new(b: IntMatrix) -> Result<Self> {
        let (n, m) = b.shape();
        if n > m {
            return Err(Error::input(format!("B has {n} rows but only {m} columns")));
        }
        let r = rank_over_q(&b);
        if r != n {
            return Err(Error::input(format!(
                "B must have full row rank {n} over Q, but has rank {r}"
            )));
        }
        Ok(SubgroupData { b })
    }

    /// `n = 0`: the subring is `Z` itself.
    pub fn empty(m: usize) -> Self {
        SubgroupData {
            b: IntMatrix::zeros(0, m),
        }
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.b
    }

    /// `dim R`
    pub fn n(&self) -> usize {
        self.b.rows()
    }

    /// `dim T`
    pub fn m(&self) -> usize {
        self.b.cols()
    }

    /// Column submatrix `B_σ` (columns in increasing vertex order).
    pub fn columns_of(&self, sigma: Face) -> IntMatrix {
        let cols: Vec<usize> = sigma.vertices().iter().map(|v| v - 1).collect();
        self.b.select_columns(&cols)
    }

    /// Keeps the rows in the given order.
    pub fn with_rows(&self, rows: &[usize]) -> Result<Self> {
        SubgroupData::new(self.b.select_rows(rows))
    }

    /// Relabels vertex `i` as `perm[i - 1]`, moving columns along.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut out = IntMatrix::zeros(self.n(), self.m());
        for (c, &target) in perm.iter().enumerate() {
            for r in 0..self.n() {
                *out.at_mut(r, target - 1) = self.b.at(r, c).clone();
            }
        }
        SubgroupData { b: out }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceDeterminant {
    pub face: Face,
    #[serde(serialize_with = "serialize_bigint")]
    pub det: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LocalFreeness {
    Pass {
        faces: Vec<FaceDeterminant>,
    },
    Fail {
        faces: Vec<FaceDeterminant>,
        failing: Vec<Face>,
    },
    NotApplicable {
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalFreenessReport {
    #[serde(flatten)]
    pub verdict: LocalFreeness,
    /// Set when `n` is smaller than the largest face, which rules out a
    /// locally free action regardless of the per-face test.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

/// Local freeness of the `G`-action: for a pure complex whose maximal faces
/// have exactly `n` vertices, every `B_σ` must be nonsingular.
pub fn check_local_freeness(k: &SimplicialComplex, s: &SubgroupData) -> LocalFreenessReport {
    let n = s.n();
    let largest = k.dimension_bound();
    let warning = (n < largest).then(|| {
        format!(
            "dim G = m - n = {} exceeds m - (largest face size) = {}; the action cannot be locally free",
            s.m() - n,
            s.m() - largest
        )
    });
    let verdict = match k.pure_dimension() {
        None if k.maximal_faces().is_empty() => LocalFreeness::NotApplicable {
            reason: "complex has no nonempty faces".into(),
        },
        None => LocalFreeness::NotApplicable {
            reason: "complex is not pure".into(),
        },
        Some(d) if d != n => LocalFreeness::NotApplicable {
            reason: format!("maximal faces have {d} vertices but n = {n}"),
        },
        Some(_) => {
            let faces: Vec<FaceDeterminant> = k
                .maximal_faces()
                .iter()
                .map(|&f| FaceDeterminant {
                    face: f,
                    det: s.columns_of(f).determinant().expect("square"),
                })
                .collect();
            let failing: Vec<Face> = faces
                .iter()
                .filter(|fd| fd.det.is_zero())
                .map(|fd| fd.face)
                .collect();
            if failing.is_empty() {
                LocalFreeness::Pass { faces }
            } else {
                LocalFreeness::Fail { faces, failing }
            }
        }
    };
    LocalFreenessReport { verdict, warning }
}

/// `G` is connected iff `B : Z^m -> Z^n` is onto, i.e. all invariant
/// factors of `B` equal 1.
pub fn check_connected_kernel(s: &SubgroupData) -> bool {
    let snf = smith_normal_form(s.matrix());
    let d = snf.diagonal();
    d.len() == s.n() && d.iter().all(One::is_one)
}
