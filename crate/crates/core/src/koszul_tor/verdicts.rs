use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::{BigradedTor, KoszulComplex};
use crate::error::{Error, Result};
use crate::intlinalg::{lattice_basis, reduce_mod_lattice, serialize_bigints, ZModule};
use crate::stanley_reisner::reduce;

/// A property checked for every internal degree up to `bound`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    HoldsUpTo {
        bound: u32,
    },
    Fails {
        bound: u32,
        #[serde(skip_serializing_if = "Option::is_none")]
        witness: Option<Witness>,
    },
    NotApplicable {
        reason: String,
    },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::HoldsUpTo { .. })
    }

    pub fn fails(&self) -> bool {
        matches!(self, Verdict::Fails { .. })
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Fails { witness, .. } => witness.as_ref(),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Verdict::HoldsUpTo { bound } => format!("HOLDS_UP_TO({bound})"),
            Verdict::Fails { .. } => "FAILS".into(),
            Verdict::NotApplicable { .. } => "NOT_APPLICABLE".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Witness {
    Cycle(Tor1Witness),
    Entry(EntryWitness),
}

impl std::fmt::Display for Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Witness::Cycle(w) => write!(f, "{w}"),
            Witness::Entry(e) => {
                write!(f, "Tor at (p={}, j={}, q={}) is {}", e.p, e.j, e.q, e.group)
            }
        }
    }
}

/// A nonzero table cell.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntryWitness {
    pub p: usize,
    pub j: u32,
    pub q: i64,
    pub group: ZModule,
}

/// One term `f ⊗ ξ_i` of a witness cycle.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CycleTerm {
    pub xi: usize,
    pub coefficient: String,
}

/// A degree-1 Koszul cycle `sum_i f_i ⊗ ξ_i` that is not a boundary.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tor1Witness {
    pub p: usize,
    pub j: u32,
    pub q: i64,
    pub group: ZModule,
    /// Order of the class; zero for an element of infinite order.
    #[serde(serialize_with = "crate::intlinalg::serialize_bigint")]
    pub order: BigInt,
    pub terms: Vec<CycleTerm>,
    /// Coordinates in the chain basis at `(1, j)`.
    #[serde(serialize_with = "serialize_bigints")]
    pub coordinates: Vec<BigInt>,
}

impl std::fmt::Display for Tor1Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "witness at (p=1, j={}): cycle ", self.j)?;
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})*xi{}", t.coefficient, t.xi)?;
        }
        let order = if self.order.is_zero() {
            "infinite order".to_string()
        } else {
            format!("order {}", self.order)
        };
        write!(f, ", a class of {order} in Tor_1 = {}", self.group)
    }
}

impl KoszulComplex {
    /// Lowest-degree nonzero class in `Tor_1`, represented by the canonical
    /// coset representative of its first generator.
    pub fn tor1_witness(&self, table: &BigradedTor) -> Result<Option<Tor1Witness>> {
        if self.n() == 0 {
            return Ok(None);
        }
        let Some(j) = (0..=self.max_degree)
            .step_by(2)
            .find(|&j| !table.get(1, j).is_zero())
        else {
            return Ok(None);
        };
        let pres = self.presentation(1, j)?;
        let d_in = self.differential(2, j)?;
        let boundaries = lattice_basis(&d_in.transpose().to_rows(), d_in.rows());
        let z = reduce_mod_lattice(&pres.generators()[0], &boundaries);
        self.check_cycle(j, &z)?;
        let terms = self
            .decompose(1, j, &z)
            .into_iter()
            .map(|(s, poly)| CycleTerm {
                xi: s[0],
                coefficient: poly.to_string(),
            })
            .collect();
        Ok(Some(Tor1Witness {
            p: 1,
            j,
            q: i64::from(j) - 1,
            group: pres.module().clone(),
            order: pres.orders()[0].clone(),
            terms,
            coordinates: z,
        }))
    }

    /// Recomputes `sum_i u_i f_i` with polynomial arithmetic.
    fn check_cycle(&self, j: u32, z: &[BigInt]) -> Result<()> {
        let mut total = crate::Polynomial::zero();
        for (s, f) in self.decompose(1, j, z) {
            let u = self.forms[s[0] - 1].to_polynomial();
            total = &total + &(&u * &f);
        }
        if !reduce(self.complex(), &total).is_zero() {
            return Err(Error::internal("witness is not a Koszul cycle"));
        }
        Ok(())
    }

    /// The four verdicts, with the internal consistency checks: `Tor_1`
    /// vanishing must coincide with odd vanishing, and must force every
    /// `Tor_p` with `p >= 1` to vanish.
    pub fn verdicts(&self, table: &BigradedTor) -> Result<Verdicts> {
        let bound = table.max_degree();
        let entries = table.entries();
        let bigcm = match self.tor1_witness(table)? {
            None => Verdict::HoldsUpTo { bound },
            Some(w) => Verdict::Fails {
                bound,
                witness: Some(Witness::Cycle(w)),
            },
        };
        let first = |pred: &dyn Fn(&super::TorEntry) -> bool| {
            entries.iter().find(|e| pred(e)).map(|e| {
                Witness::Entry(EntryWitness {
                    p: e.p,
                    j: e.j,
                    q: e.q,
                    group: table.get(e.p, e.j),
                })
            })
        };
        let verdict_of = |w: Option<Witness>| match w {
            None => Verdict::HoldsUpTo { bound },
            Some(w) => Verdict::Fails {
                bound,
                witness: Some(w),
            },
        };
        let odd_vanishing = verdict_of(first(&|e| e.q.rem_euclid(2) == 1));
        let tor0_torsion_free = verdict_of(first(&|e| e.p == 0 && !e.torsion.is_empty()));
        let free_over_r = match (&bigcm, &tor0_torsion_free) {
            (Verdict::HoldsUpTo { .. }, Verdict::HoldsUpTo { .. }) => Verdict::HoldsUpTo { bound },
            (Verdict::Fails { witness, .. }, _) | (_, Verdict::Fails { witness, .. }) => {
                Verdict::Fails {
                    bound,
                    witness: witness.clone(),
                }
            }
            _ => Verdict::NotApplicable {
                reason: "component verdicts unavailable".into(),
            },
        };
        if bigcm.fails() != odd_vanishing.fails() {
            return Err(Error::internal(format!(
                "Tor_1 verdict {} disagrees with odd-degree verdict {} up to j = {bound}",
                bigcm.label(),
                odd_vanishing.label()
            )));
        }
        if bigcm.holds() {
            if let Some(e) = entries.iter().find(|e| e.p >= 1) {
                return Err(Error::internal(format!(
                    "Tor_1 vanishes up to j = {bound} but Tor_{} at j = {} is nonzero",
                    e.p, e.j
                )));
            }
        }
        Ok(Verdicts {
            bound,
            bigcm,
            odd_vanishing,
            tor0_torsion_free,
            free_over_r,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdicts {
    pub bound: u32,
    pub bigcm: Verdict,
    pub odd_vanishing: Verdict,
    pub tor0_torsion_free: Verdict,
    #[serde(rename = "free_over_R")]
    pub free_over_r: Verdict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DepthQualifier {
    /// `Tor_1` vanishes up to the bound; the value is exact if that persists.
    ConditionalOnBound,
    /// Higher internal degrees could only lower the value.
    AtMost,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DepthEstimate {
    pub value: usize,
    pub qualifier: DepthQualifier,
    pub bound: u32,
}

impl std::fmt::Display for DepthEstimate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.qualifier {
            DepthQualifier::ConditionalOnBound => {
                write!(f, "{} (conditional on j <= {})", self.value, self.bound)
            }
            DepthQualifier::AtMost => write!(f, "<= {}", self.value),
        }
    }
}

/// `n - max{p : Tor_p != 0}` over the computed range.
pub fn depth_estimate(table: &BigradedTor) -> DepthEstimate {
    let top = table.top_nonzero_p().unwrap_or(0);
    let tor1_vanishes = (0..=table.max_degree())
        .step_by(2)
        .all(|j| table.get(1, j).is_zero());
    DepthEstimate {
        value: table.n() - top.min(table.n()),
        qualifier: if tor1_vanishes {
            DepthQualifier::ConditionalOnBound
        } else {
            DepthQualifier::AtMost
        },
        bound: table.max_degree(),
    }
}
