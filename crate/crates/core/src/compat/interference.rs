//! Interference between a coarse value and the base values it pools.

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{ConfigDescription, Event, MeasurementSystem, PState, VariableKind};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedConfig {
    pub config: ConfigDescription,
    #[serde(with = "rational::json")]
    pub weight: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterferenceRecord {
    pub preparation: Vec<WeightedConfig>,
    pub coarse: Event,
    pub fine: Vec<Event>,
    /// `None` means a single measurement.
    pub follow: Option<Event>,
    /// `Pr(coarse & follow)`.
    #[serde(with = "rational::json")]
    pub coarse_path: Rational,
    /// `sum_i Pr(fine_i & follow)`.
    #[serde(with = "rational::json")]
    pub fine_sum: Rational,
    /// `coarse_path - fine_sum`; non-zero is interference.
    #[serde(with = "rational::json")]
    pub deficit: Rational,
}

pub fn describe_state(sys: &MeasurementSystem, sigma: &PState) -> Vec<WeightedConfig> {
    sigma
        .iter()
        .map(|(c, w)| WeightedConfig {
            config: sys.describe_config(c),
            weight: w.clone(),
        })
        .collect()
}

pub fn interference_deficit(
    sys: &MeasurementSystem,
    sigma: &PState,
    coarse: &Event,
    fine: &[Event],
    follow: Option<&Event>,
) -> Result<InterferenceRecord> {
    let cvar = sys.variable(&coarse.variable)?;
    let VariableKind::Coarse { base, blocks } = &cvar.kind else {
        return Err(Error::BlockMismatch(format!("{} is not a coarse variable", coarse.variable)));
    };
    let ci = cvar.value_index(&coarse.value).ok_or_else(|| Error::UnknownValue {
        variable: coarse.variable.clone(),
        value: coarse.value.clone(),
    })?;
    let block: BTreeSet<&str> = blocks[ci].iter().map(String::as_str).collect();
    let mut given = BTreeSet::new();
    for f in fine {
        if &f.variable != base {
            return Err(Error::BlockMismatch(format!("{f} is not a value of {base}")));
        }
        sys.resolve(f)?;
        if !given.insert(f.value.as_str()) {
            return Err(Error::BlockMismatch(format!("{f} listed twice")));
        }
    }
    if given != block {
        return Err(Error::BlockMismatch(format!(
            "fine events must be exactly the block of {coarse}: {{{}}}",
            blocks[ci].join(", ")
        )));
    }

    let path = |first: &Event| -> Result<Rational> {
        let mut seq = vec![first.clone()];
        seq.extend(follow.cloned());
        sys.sequence_prob(sigma, &seq)
    };
    let coarse_path = path(coarse)?;
    let mut fine_sum = Rational::zero();
    for f in fine {
        fine_sum += path(f)?;
    }
    Ok(InterferenceRecord {
        preparation: describe_state(sys, sigma),
        coarse: coarse.clone(),
        fine: fine.to_vec(),
        follow: follow.cloned(),
        deficit: &coarse_path - &fine_sum,
        coarse_path,
        fine_sum,
    })
}
