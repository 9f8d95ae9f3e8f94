use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// The statements the workbench checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum TheoremId {
    /// Operator identity under `T*S = S*T`, `αT*T + βS*S = γI`.
    Prvi,
    /// Element form of `Prvi`: `x, y ∈ X` with algebra coefficients.
    Cprvi,
    /// `Cprvi` in `ℓ₂(A)`.
    L2,
    /// `Cprvi` for tuples of rectangular matrices.
    Bhk,
    /// Central coefficients acting on the right.
    EulLagr,
    /// Sections of a Hilbert bundle over a finite base.
    Bundle,
    /// Conjugate-exponent identity and the two one-sided inequalities.
    BohrPq,
    /// Two-operator Bohr inequality.
    Bohr2,
    /// `n`-operator Bohr inequality.
    Bohrn,
    /// `Bohrn` for central right multipliers.
    Bohrncor,
    /// `|Σ tᵢAᵢ|² ≤ Σ tᵢ|Aᵢ|²` for matrices.
    Amqm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Assertion {
    Identity,
    Order,
}

impl TheoremId {
    pub const ALL: [TheoremId; 11] = [
        TheoremId::Prvi,
        TheoremId::Cprvi,
        TheoremId::L2,
        TheoremId::Bhk,
        TheoremId::EulLagr,
        TheoremId::Bundle,
        TheoremId::BohrPq,
        TheoremId::Bohr2,
        TheoremId::Bohrn,
        TheoremId::Bohrncor,
        TheoremId::Amqm,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::Prvi => "prvi",
            TheoremId::Cprvi => "cprvi",
            TheoremId::L2 => "l2",
            TheoremId::Bhk => "bhk",
            TheoremId::EulLagr => "eul-lagr",
            TheoremId::Bundle => "bundle",
            TheoremId::BohrPq => "bohr-pq",
            TheoremId::Bohr2 => "bohr2",
            TheoremId::Bohrn => "bohrn",
            TheoremId::Bohrncor => "bohrncor",
            TheoremId::Amqm => "amqm",
        }
    }

    /// `BohrPq` asserts an identity and, depending on `p`, one of two order
    /// relations; it is classed by its identity.
    pub fn assertion(self) -> Assertion {
        match self {
            TheoremId::Bohr2 | TheoremId::Bohrn | TheoremId::Bohrncor | TheoremId::Amqm => Assertion::Order,
            _ => Assertion::Identity,
        }
    }

    /// Parses a comma-separated list, where `all` expands to every id.
    pub fn parse_list(s: &str) -> Result<Vec<TheoremId>, Error> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part == "all" {
                out.extend(Self::ALL);
            } else {
                out.push(part.parse()?);
            }
        }
        if out.is_empty() {
            return Err(Error::InvalidParameter("no theorem selected".into()));
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Self::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown theorem id `{s}`")))
    }
}

impl TryFrom<String> for TheoremId {
    type Error = Error;

    fn try_from(s: String) -> Result<Self, Error> {
        s.parse()
    }
}

impl From<TheoremId> for String {
    fn from(id: TheoremId) -> String {
        id.as_str().to_owned()
    }
}

/// The one-sided conjugate-exponent inequalities whose "only if" directions
/// are probed by witness search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WitnessTarget {
    /// `|x−y|² + |(1−p)x−y|² ≤ p|x|² + q|y|²`, violated for `p > 2`.
    #[serde(rename = "bohr-i")]
    BohrI,
    /// The reverse inequality, violated for `p < 2`.
    #[serde(rename = "bohr-ii")]
    BohrII,
}

impl WitnessTarget {
    pub fn as_str(self) -> &'static str {
        match self {
            WitnessTarget::BohrI => "bohr-i",
            WitnessTarget::BohrII => "bohr-ii",
        }
    }
}

impl fmt::Display for WitnessTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WitnessTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "bohr-i" => Ok(WitnessTarget::BohrI),
            "bohr-ii" => Ok(WitnessTarget::BohrII),
            _ => Err(Error::InvalidParameter(format!("unknown witness target `{s}`"))),
        }
    }
}
