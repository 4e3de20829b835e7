//! Exact computation of the bigraded integral Tor modules
//! `Tor_{Z[u_1..u_n]}(Z[K], Z)` of a Stanley-Reisner ring `Z[K]` over the
//! polynomial subring generated by linear forms `u_i = sum_j B_ij x_j`.
//!
//! The crate is layered bottom-up:
//!
//! * [`intlinalg`]: Smith and Hermite normal forms over arbitrary-precision
//!   integers, kernels, cokernels and homology subquotients.
//! * [`simplicial`]: simplicial complexes on `[m]` and the matrix `B`.
//! * [`stanley_reisner`]: graded pieces of `Z[K]`, multiplication maps,
//!   quotients by linear forms, annihilators.
//! * [`koszul_tor`]: the Koszul complex, Tor tables, verdicts.
//! * [`gkm`]: fixed-point restrictions for Delzant-type inputs.
//! * [`gysin`]: the long exact sequence obtained by splitting off one form.
//! * [`cli`]: `.tcx` input files, command dispatch and report rendering.

pub mod cli;
pub mod error;
pub mod gkm;
pub mod gysin;
pub mod intlinalg;
pub mod koszul_tor;
pub mod simplicial;
pub mod stanley_reisner;

pub use error::{Error, Result};
pub use intlinalg::{IntMatrix, ZModule};
pub use koszul_tor::{BigradedTor, KoszulComplex};
pub use simplicial::{Face, SimplicialComplex, SubgroupData};
pub use stanley_reisner::{LinearForm, Monomial, Polynomial};
