//! Preparation states: exact distributions over configurations.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use super::model::Configuration;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// A p-state. Weights are strictly positive and sum to exactly one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PState {
    weights: BTreeMap<Configuration, Rational>,
}

impl PState {
    pub fn new(weights: impl IntoIterator<Item = (Configuration, Rational)>) -> Result<Self> {
        let mut map: BTreeMap<Configuration, Rational> = BTreeMap::new();
        for (c, w) in weights {
            if !w.is_positive() {
                return Err(Error::InvalidState(format!(
                    "non-positive weight {}",
                    rational::display(&w)
                )));
            }
            *map.entry(c).or_insert_with(Rational::zero) += w;
        }
        let total: Rational = map.values().cloned().sum();
        if !total.is_one() {
            return Err(Error::InvalidState(format!(
                "weights sum to {}",
                rational::display(&total)
            )));
        }
        Ok(PState { weights: map })
    }

    /// Normalizes non-negative masses; zero masses are dropped. `None` when
    /// the total mass is zero.
    pub(crate) fn normalized(mass: BTreeMap<Configuration, Rational>) -> Option<PState> {
        let total: Rational = mass.values().cloned().sum();
        if total.is_zero() {
            return None;
        }
        let weights = mass
            .into_iter()
            .filter(|(_, w)| !w.is_zero())
            .map(|(c, w)| (c, w / &total))
            .collect();
        Some(PState { weights })
    }

    pub fn point(config: Configuration) -> Self {
        PState {
            weights: BTreeMap::from([(config, Rational::one())]),
        }
    }

    pub fn uniform(configs: &[Configuration]) -> Result<Self> {
        if configs.is_empty() {
            return Err(Error::InvalidState("uniform over nothing".into()));
        }
        let w = rational::ratio(1, configs.len() as i64);
        PState::new(configs.iter().map(|c| (c.clone(), w.clone())))
    }

    /// `lambda * a + (1 - lambda) * b`, for `lambda` in `[0, 1]`.
    pub fn mixture(lambda: &Rational, a: &PState, b: &PState) -> Result<Self> {
        if !rational::is_probability(lambda) {
            return Err(Error::InvalidState("mixture weight outside [0,1]".into()));
        }
        let mu = Rational::one() - lambda;
        let mut mass = BTreeMap::new();
        for (c, w) in &a.weights {
            *mass.entry(c.clone()).or_insert_with(Rational::zero) += lambda * w;
        }
        for (c, w) in &b.weights {
            *mass.entry(c.clone()).or_insert_with(Rational::zero) += &mu * w;
        }
        PState::normalized(mass).ok_or_else(|| Error::InvalidState("empty mixture".into()))
    }

    pub fn weight(&self, config: &Configuration) -> Rational {
        self.weights.get(config).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Configuration, &Rational)> {
        self.weights.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Configuration> {
        self.weights.keys()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn as_point(&self) -> Option<&Configuration> {
        match self.weights.len() {
            1 => self.weights.keys().next(),
            _ => None,
        }
    }
}
