use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A finitely generated abelian group `Z^rank + Z/d_1 + ... + Z/d_k` with
/// `2 <= d_1 | d_2 | ... | d_k`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ZModule {
    rank: usize,
    torsion: Vec<BigInt>,
}

impl ZModule {
    pub fn new(rank: usize, torsion: Vec<BigInt>) -> Result<Self> {
        if let Some(d) = torsion.iter().find(|d| *d < &BigInt::from(2)) {
            return Err(Error::input(format!("invariant factor {d} must be >= 2")));
        }
        if let Some(w) = torsion.windows(2).find(|w| !w[1].is_multiple_of(&w[0])) {
            return Err(Error::input(format!(
                "invariant factors {} and {} violate divisibility",
                w[0], w[1]
            )));
        }
        Ok(ZModule { rank, torsion })
    }

    pub fn zero() -> Self {
        ZModule::default()
    }

    pub fn free(rank: usize) -> Self {
        ZModule {
            rank,
            torsion: Vec::new(),
        }
    }

    /// Builds the module from a Smith diagonal of a presentation with
    /// `generators` generators: zero entries and missing entries are free,
    /// units vanish.
    pub fn from_smith_diagonal(generators: usize, diagonal: &[BigInt]) -> Self {
        let nonzero = diagonal.iter().filter(|d| !d.is_zero()).count();
        let mut torsion: Vec<BigInt> = diagonal
            .iter()
            .filter(|d| !d.is_zero() && !d.abs().is_one())
            .map(|d| d.abs())
            .collect();
        torsion.sort();
        ZModule {
            rank: generators - nonzero,
            torsion,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }
}

/// `0`, `Z`, `Z^2 + Z/2 + Z/6`, ...
impl fmt::Display for ZModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        write!(f, "{}", parts.join(" + "))
    }
}

/// Integers that fit in `i64` serialize as JSON numbers, larger ones as
/// decimal strings.
pub fn serialize_bigint<S: Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    match i64::try_from(x) {
        Ok(v) => s.serialize_i64(v),
        Err(_) => s.serialize_str(&x.to_string()),
    }
}

pub fn serialize_bigints<S: Serializer>(
    xs: &[BigInt],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        match i64::try_from(x) {
            Ok(v) => seq.serialize_element(&v)?,
            Err(_) => seq.serialize_element(&x.to_string())?,
        }
    }
    seq.end()
}

impl Serialize for ZModule {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            rank: usize,
            #[serde(serialize_with = "serialize_bigints")]
            torsion: &'a [BigInt],
        }
        Repr {
            rank: self.rank,
            torsion: &self.torsion,
        }
        .serialize(s)
    }
}
