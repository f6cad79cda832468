//! Quota/weight certificates with exact rational entries.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lp::Rational;
use crate::multiset::Coalition;

/// `[q; w]`: one weight per level. Used both for weighted representations
/// (`w(X) >= q` exactly when `X` wins) and rough ones.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RoughCert {
    quota: Rational,
    weights: Vec<Rational>,
}

impl RoughCert {
    pub fn new(quota: Rational, weights: Vec<Rational>) -> Result<Self> {
        if quota.is_negative() || weights.iter().any(|w| w.is_negative()) {
            return Err(Error::Validation(
                "quota and weights must be non-negative".into(),
            ));
        }
        if quota.is_zero() && weights.iter().all(|w| w.is_zero()) {
            return Err(Error::Validation(
                "quota and weights are all zero".into(),
            ));
        }
        Ok(RoughCert { quota, weights })
    }

    pub fn quota(&self) -> &Rational {
        &self.quota
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn levels(&self) -> usize {
        self.weights.len()
    }

    pub fn weight_of(&self, counts: &[u32]) -> Rational {
        self.weights
            .iter()
            .zip(counts)
            .fold(Rational::zero(), |acc, (w, &c)| acc + w * Rational::from_integer(c.into()))
    }

    pub fn weight(&self, x: &Coalition) -> Rational {
        self.weight_of(x.counts())
    }

    /// Divides through by a positive quota so that `q = 1`.
    pub fn normalized(&self) -> RoughCert {
        if !self.quota.is_positive() {
            return self.clone();
        }
        RoughCert {
            quota: Rational::from_integer(1.into()),
            weights: self.weights.iter().map(|w| w / &self.quota).collect(),
        }
    }

    /// Appends a zero weight for an extra trailing level.
    pub fn with_zero_level(&self) -> RoughCert {
        let mut weights = self.weights.clone();
        weights.push(Rational::zero());
        RoughCert {
            quota: self.quota.clone(),
            weights,
        }
    }
}

impl fmt::Display for RoughCert {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}; ", self.quota)?;
        for (i, w) in self.weights.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{w}")?;
        }
        f.write_str("]")
    }
}

pub fn rational_to_string(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    s.trim()
        .parse::<Rational>()
        .map_err(|e| Error::Document(format!("bad rational `{s}`: {e}")))
}

#[derive(Serialize, Deserialize)]
struct CertRepr {
    quota: String,
    weights: Vec<String>,
}

impl Serialize for RoughCert {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CertRepr {
            quota: rational_to_string(&self.quota),
            weights: self.weights.iter().map(rational_to_string).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RoughCert {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = CertRepr::deserialize(d)?;
        let quota = parse_rational(&repr.quota).map_err(serde::de::Error::custom)?;
        let weights = repr
            .weights
            .iter()
            .map(|w| parse_rational(w))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        RoughCert::new(quota, weights).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::testutil::{q, qi};

    #[test]
    fn rejects_all_zero_and_negative() {
        assert!(RoughCert::new(qi(0), vec![qi(0), qi(0)]).is_err());
        assert!(RoughCert::new(qi(1), vec![qi(-1)]).is_err());
        assert!(RoughCert::new(qi(0), vec![qi(1), qi(0)]).is_ok());
    }

    #[test]
    fn json_round_trip_uses_fraction_strings() {
        let c = RoughCert::new(qi(1), vec![q(1, 2), q(1, 2), qi(0)]).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"quota":"1","weights":["1/2","1/2","0"]}"#);
        let back: RoughCert = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn normalization() {
        let c = RoughCert::new(qi(39), vec![qi(7), qi(1)]).unwrap();
        let n = c.normalized();
        assert_eq!(n.quota(), &qi(1));
        assert_eq!(n.weights(), &[q(7, 39), q(1, 39)]);
        assert_eq!(c.weight_of(&[5, 4]), qi(39));
    }
}
