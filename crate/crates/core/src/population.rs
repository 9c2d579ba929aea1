use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational_list, serde_rational_vec, Rational};

/// Normalized, non-negative population vector `(ρ₁, …, ρₙ)`.
///
/// Components are stored 0-based but addressed 1-based by [`Self::get`] so that
/// indices line up with vertex labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PopulationVector(Vec<Rational>);

impl PopulationVector {
    pub fn new(components: Vec<Rational>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidPopulation("no components".into()));
        }
        if let Some(neg) = components.iter().position(|c| c.is_negative()) {
            return Err(Error::InvalidPopulation(format!(
                "component {} is negative ({})",
                neg + 1,
                format_rational(&components[neg])
            )));
        }
        let total: Rational = components.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidPopulation(format!(
                "components sum to {}, expected 1",
                format_rational(&total)
            )));
        }
        Ok(Self(components))
    }

    /// Scales non-negative weights so they sum to one.
    pub fn normalized(weights: Vec<Rational>) -> Result<Self> {
        if weights.iter().any(|w| w.is_negative()) {
            return Err(Error::InvalidPopulation("negative weight".into()));
        }
        let total: Rational = weights.iter().sum();
        if total.is_zero() {
            return Err(Error::InvalidPopulation("weights sum to zero".into()));
        }
        Self::new(weights.into_iter().map(|w| w / &total).collect())
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0);
        let share = Rational::new(1.into(), (n as i64).into());
        Self(vec![share; n])
    }

    /// Parses a comma-separated list of rationals; the list must already sum to one.
    pub fn parse(input: &str) -> Result<Self> {
        Self::new(parse_rational_list(input)?)
    }

    /// Skips validation; callers must guarantee the invariants.
    pub(crate) fn from_unchecked(components: Vec<Rational>) -> Self {
        debug_assert!(components.iter().all(|c| !c.is_negative()));
        Self(components)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_components(self) -> Vec<Rational> {
        self.0
    }

    /// Component at 1-based vertex `vertex`.
    pub fn get(&self, vertex: usize) -> &Rational {
        &self.0[vertex - 1]
    }

    pub fn is_non_decreasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn has_distinct_components(&self) -> bool {
        let mut sorted: Vec<&Rational> = self.0.iter().collect();
        sorted.sort();
        sorted.windows(2).all(|w| w[0] != w[1])
    }

    /// Convex combination `Σ λₖ pₖ`; the coefficients must be non-negative and sum to one.
    pub fn convex_combination(terms: &[(&PopulationVector, Rational)]) -> Result<Self> {
        let dim = terms
            .first()
            .map(|(p, _)| p.dim())
            .ok_or_else(|| Error::Precondition("empty combination".into()))?;
        let mut acc = vec![Rational::zero(); dim];
        for (point, weight) in terms {
            if point.dim() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    got: point.dim(),
                });
            }
            for (slot, value) in acc.iter_mut().zip(point.components()) {
                *slot += weight * value;
            }
        }
        Self::new(acc)
    }
}

impl fmt::Display for PopulationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (idx, c) in self.0.iter().enumerate() {
            if idx > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl Serialize for PopulationVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serde_rational_vec::serialize(&self.0, serializer)
    }
}

impl<'de> Deserialize<'de> for PopulationVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let components = serde_rational_vec::deserialize(deserializer)?;
        Self::new(components).map_err(serde::de::Error::custom)
    }
}
