use std::collections::BTreeSet;

use rand::Rng;

use crate::error::{Error, Result};
use crate::measure::{Dynamics, InitialSpec, MeasurementSystem, TransitionTable, Variable};
use crate::rational::{self, Rational};
use crate::seed;

const MAX_DENOMINATOR: u64 = 12;

/// A random table system: every outcome row is a distribution with
/// denominator at most 12, every update a uniformly chosen node. All nodes
/// are initial, so all are reachable.
pub fn random_table_system(num_configs: usize, variables: &[(String, usize)], seed: u64) -> Result<MeasurementSystem> {
    if num_configs == 0 {
        return Err(Error::InvalidArgument("num_configs must be at least 1".into()));
    }
    if variables.is_empty() {
        return Err(Error::InvalidArgument("at least one variable required".into()));
    }
    let mut names = BTreeSet::new();
    for (name, k) in variables {
        if *k < 2 {
            return Err(Error::InvalidArgument(format!("{name:?} needs at least two values")));
        }
        if !names.insert(name.as_str()) {
            return Err(Error::InvalidArgument(format!("duplicate variable {name:?}")));
        }
    }

    let mut rng = seed::rng_for(seed, 0);
    let vars: Vec<Variable> = variables
        .iter()
        .map(|(name, k)| Variable {
            name: name.clone(),
            values: (0..*k).map(|i| format!("{}{}", name.to_lowercase(), i)).collect(),
            kind: crate::measure::VariableKind::Base,
        })
        .collect();

    let mut outcomes = Vec::with_capacity(num_configs);
    let mut updates = Vec::with_capacity(num_configs);
    for _ in 0..num_configs {
        let mut o = Vec::new();
        let mut u = Vec::new();
        for (_, k) in variables {
            let den = rng.random_range(1..=MAX_DENOMINATOR);
            let mut parts = vec![0u64; *k];
            for _ in 0..den {
                parts[rng.random_range(0..*k)] += 1;
            }
            o.push(
                parts
                    .into_iter()
                    .map(|p| rational::ratio(p as i64, den as i64))
                    .collect::<Vec<Rational>>(),
            );
            u.push((0..*k).map(|_| rng.random_range(0..num_configs)).collect());
        }
        outcomes.push(o);
        updates.push(u);
    }

    MeasurementSystem::new(
        vars,
        Dynamics::Table(TransitionTable { outcomes, updates }),
        &[],
        InitialSpec::Full,
    )
}
