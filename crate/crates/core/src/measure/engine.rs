//! Outcome laws, event filtering and sequential probabilities.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use indexmap::IndexMap;
use rand::Rng;
use num_traits::{One, Zero};

use super::model::{Configuration, Dynamics, Event, Item, MeasurementSystem, Pool, ResolvedEvent};
use super::state::PState;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Result of conditioning a p-state on one event.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filtered {
    pub prob: Rational,
    /// `None` when `prob` is zero: the conditioned state is undefined.
    pub state: Option<PState>,
    /// Some positive-weight configuration was an empty pool, so the
    /// measurement could not be performed there.
    pub exhausted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceEval {
    pub prob: Rational,
    pub exhausted: bool,
}

/// Which configurations count as preparations when a criterion is
/// quantified over "every p-state".
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Domain {
    #[default]
    Reachable,
    /// Every non-empty sub-multiset of the population (every node for
    /// table dynamics).
    AllSubPools,
}

impl MeasurementSystem {
    /// Positive-probability successors of `config` given that `ev` is
    /// reported, with their joint probabilities. Equal successors are merged.
    pub(crate) fn transitions(&self, config: &Configuration, ev: ResolvedEvent) -> Result<Vec<(Rational, Configuration)>> {
        match (config, &self.dynamics) {
            (Configuration::Node(n), Dynamics::Table(t)) => {
                let p = &t.outcomes[*n][ev.var][ev.value];
                if p.is_zero() {
                    Ok(Vec::new())
                } else {
                    Ok(vec![(p.clone(), Configuration::Node(t.updates[*n][ev.var][ev.value]))])
                }
            }
            (Configuration::Pool(pool), Dynamics::Urn) => {
                if pool.is_empty() {
                    return Err(Error::EmptyPool);
                }
                let hits: u64 = pool
                    .iter()
                    .filter(|(i, _)| self.value_of(i, ev.var) == ev.value)
                    .map(|(_, c)| c)
                    .sum();
                if hits == 0 {
                    return Ok(Vec::new());
                }
                let next = self.population.filter(|i| self.value_of(i, ev.var) == ev.value);
                Ok(vec![(
                    rational::ratio(hits as i64, pool.total() as i64),
                    Configuration::Pool(next),
                )])
            }
            (Configuration::Pool(pool), Dynamics::Deck(_)) => {
                if pool.is_empty() {
                    return Err(Error::EmptyPool);
                }
                let total = pool.total() as i64;
                let mut merged: BTreeMap<Configuration, Rational> = BTreeMap::new();
                for (item, c) in pool.iter() {
                    if self.value_of(item, ev.var) != ev.value {
                        continue;
                    }
                    let next = Configuration::Pool(self.deck_after_draw(pool, item));
                    *merged.entry(next).or_insert_with(Rational::zero) += rational::ratio(c as i64, total);
                }
                Ok(merged.into_iter().map(|(c, p)| (p, c)).collect())
            }
            _ => Err(Error::InvalidSystem(
                "configuration kind does not match the system dynamics".into(),
            )),
        }
    }

    fn deck_after_draw(&self, pool: &Pool, item: &Item) -> Pool {
        let (pos, flags) = self.rule.as_ref().expect("deck dynamics carry a resolved rule");
        if flags[item.0[*pos] as usize] {
            pool.clone()
        } else {
            let mut next = pool.clone();
            next.remove_one(item);
            next
        }
    }

    /// Probability of each value of `variable` in one measurement on `config`.
    pub fn outcome_distribution(&self, config: &Configuration, variable: &str) -> Result<IndexMap<String, Rational>> {
        let var = self.var_index(variable)?;
        let mut out = IndexMap::new();
        for (value, label) in self.variables[var].values.iter().enumerate() {
            let p: Rational = self
                .transitions(config, ResolvedEvent { var, value })?
                .into_iter()
                .map(|(p, _)| p)
                .sum();
            out.insert(label.clone(), p);
        }
        Ok(out)
    }

    /// The configuration left behind when `event` is reported on `config`.
    ///
    /// Urn dynamics ignore `config` (the refill depends only on the value).
    /// Deck dynamics fail with [`Error::AmbiguousDraw`] when items carrying
    /// the value lead to different successors; use [`Self::draw_and_update`]
    /// to name the drawn item.
    pub fn update_config(&self, config: &Configuration, event: &Event) -> Result<Configuration> {
        let ev = self.resolve(event)?;
        match (&self.dynamics, config) {
            (Dynamics::Urn, _) => Ok(Configuration::Pool(
                self.population.filter(|i| self.value_of(i, ev.var) == ev.value),
            )),
            (Dynamics::Table(t), Configuration::Node(n)) => Ok(Configuration::Node(t.updates[*n][ev.var][ev.value])),
            _ => {
                let mut next = self.transitions(config, ev)?;
                match next.len() {
                    0 => Err(Error::InvalidArgument(format!("{event} cannot occur in this configuration"))),
                    1 => Ok(next.pop().expect("one successor").1),
                    _ => Err(Error::AmbiguousDraw(format!(
                        "{event} is carried by items with different replacement outcomes"
                    ))),
                }
            }
        }
    }

    /// Draws the named item, reports its value of `variable`, and updates.
    pub fn draw_and_update(&self, config: &Configuration, variable: &str, item: &Item) -> Result<Configuration> {
        let var = self.var_index(variable)?;
        let Configuration::Pool(pool) = config else {
            return Err(Error::InvalidArgument("table configurations have no items".into()));
        };
        if pool.count(item) == 0 {
            return Err(Error::InvalidArgument("drawn item is not in the pool".into()));
        }
        match &self.dynamics {
            Dynamics::Urn => {
                let value = self.value_of(item, var);
                Ok(Configuration::Pool(self.population.filter(|i| self.value_of(i, var) == value)))
            }
            Dynamics::Deck(_) => Ok(Configuration::Pool(self.deck_after_draw(pool, item))),
            Dynamics::Table(_) => unreachable!("pool configuration under table dynamics"),
        }
    }

    /// Performs one measurement of `variable` at random: draws an item (or
    /// samples a table row) and applies the update. Returns the reported
    /// value and the successor configuration.
    pub fn sample_step<R: Rng + ?Sized>(
        &self,
        config: &Configuration,
        variable: &str,
        rng: &mut R,
    ) -> Result<(String, Configuration)> {
        let var = self.var_index(variable)?;
        let labels = &self.variables[var].values;
        match (config, &self.dynamics) {
            (Configuration::Node(n), Dynamics::Table(t)) => {
                let row = &t.outcomes[*n][var];
                let u: f64 = rng.random();
                let mut acc = 0.0;
                let mut value = row.iter().rposition(|p| !p.is_zero()).expect("rows sum to one");
                for (i, p) in row.iter().enumerate() {
                    acc += rational::to_f64(p);
                    if u < acc && !p.is_zero() {
                        value = i;
                        break;
                    }
                }
                Ok((labels[value].clone(), Configuration::Node(t.updates[*n][var][value])))
            }
            (Configuration::Pool(pool), _) => {
                if pool.is_empty() {
                    return Err(Error::EmptyPool);
                }
                let mut k = rng.random_range(0..pool.total());
                let item = pool
                    .iter()
                    .find(|(_, c)| {
                        if k < *c {
                            true
                        } else {
                            k -= c;
                            false
                        }
                    })
                    .map(|(i, _)| i.clone())
                    .expect("index below pool total");
                let value = self.value_of(&item, var);
                Ok((labels[value].clone(), self.draw_and_update(config, variable, &item)?))
            }
            _ => Err(Error::InvalidSystem(
                "configuration kind does not match the system dynamics".into(),
            )),
        }
    }

    pub(crate) fn filter_resolved(&self, sigma: &PState, ev: ResolvedEvent) -> Result<Filtered> {
        let mut mass: BTreeMap<Configuration, Rational> = BTreeMap::new();
        let mut prob = Rational::zero();
        let mut exhausted = false;
        for (config, w) in sigma.iter() {
            if config.is_exhausted() {
                exhausted = true;
                continue;
            }
            for (p, next) in self.transitions(config, ev)? {
                let m = w * p;
                prob += &m;
                *mass.entry(next).or_insert_with(Rational::zero) += m;
            }
        }
        let state = if prob.is_zero() { None } else { PState::normalized(mass) };
        Ok(Filtered { prob, state, exhausted })
    }

    /// Probability of `event` in `sigma` and the state conditioned on it.
    pub fn filter_event(&self, sigma: &PState, event: &Event) -> Result<Filtered> {
        self.filter_resolved(sigma, self.resolve(event)?)
    }

    pub(crate) fn sequence_resolved(&self, sigma: &PState, events: &[ResolvedEvent]) -> Result<SequenceEval> {
        let mut prob = Rational::one();
        let mut exhausted = false;
        let mut state = sigma.clone();
        for &ev in events {
            let f = self.filter_resolved(&state, ev)?;
            exhausted |= f.exhausted;
            prob *= f.prob;
            match f.state {
                Some(s) => state = s,
                None => {
                    return Ok(SequenceEval {
                        prob: Rational::zero(),
                        exhausted,
                    })
                }
            }
        }
        Ok(SequenceEval { prob, exhausted })
    }

    /// Probability of the measurement sequence, with a flag telling whether
    /// some branch ran out of items before its next measurement.
    pub fn sequence_eval(&self, sigma: &PState, events: &[Event]) -> Result<SequenceEval> {
        if events.is_empty() {
            return Err(Error::InvalidArgument("empty event sequence".into()));
        }
        self.sequence_resolved(sigma, &self.resolve_all(events)?)
    }

    /// `Pr[sigma](e1 & e2 & ...)`, "e1 and then e2 and then ...".
    pub fn sequence_prob(&self, sigma: &PState, events: &[Event]) -> Result<Rational> {
        Ok(self.sequence_eval(sigma, events)?.prob)
    }

    /// `Pr[sigma](target | conditions)`, the ratio of sequence probabilities.
    pub fn conditional_prob(&self, sigma: &PState, target: &Event, conditions: &[Event]) -> Result<Rational> {
        let denom = self.sequence_prob(sigma, conditions)?;
        if denom.is_zero() {
            return Err(Error::ZeroCondition);
        }
        let mut all = conditions.to_vec();
        all.push(target.clone());
        Ok(self.sequence_prob(sigma, &all)? / denom)
    }

    /// Uniform mixture of the initial configurations.
    pub fn initial_state(&self) -> PState {
        PState::uniform(&self.initial).expect("validated systems have initial configurations")
    }

    /// The initial state filtered on each preparation event in turn.
    pub fn prepare(&self, events: &[Event]) -> Result<PState> {
        let mut state = self.initial_state();
        for e in events {
            state = self.filter_event(&state, e)?.state.ok_or(Error::ZeroCondition)?;
        }
        Ok(state)
    }

    fn all_events(&self) -> Vec<ResolvedEvent> {
        self.variables
            .iter()
            .enumerate()
            .flat_map(|(var, v)| (0..v.values.len()).map(move |value| ResolvedEvent { var, value }))
            .collect()
    }

    /// Least set containing the initial configurations and closed under
    /// every positive-probability update. Exhausted pools are terminal and
    /// are not included.
    pub fn reachable_configs(&self) -> BTreeSet<Configuration> {
        let events = self.all_events();
        let mut seen: BTreeSet<Configuration> = BTreeSet::new();
        let mut queue: VecDeque<Configuration> = VecDeque::new();
        for c in &self.initial {
            if seen.insert(c.clone()) {
                queue.push_back(c.clone());
            }
        }
        while let Some(c) = queue.pop_front() {
            for &ev in &events {
                let next = self.transitions(&c, ev).expect("reachable configurations are non-empty");
                for (_, n) in next {
                    if !n.is_exhausted() && seen.insert(n.clone()) {
                        queue.push_back(n);
                    }
                }
            }
        }
        seen
    }

    /// Point-state preparations, in canonical order.
    pub fn domain(&self, domain: Domain) -> Vec<Configuration> {
        match (domain, &self.dynamics) {
            (Domain::Reachable, _) => self.reachable_configs().into_iter().collect(),
            (Domain::AllSubPools, Dynamics::Table(t)) => (0..t.num_nodes()).map(Configuration::Node).collect(),
            (Domain::AllSubPools, _) => self
                .population
                .sub_multisets()
                .into_iter()
                .map(Configuration::Pool)
                .collect(),
        }
    }

    /// Filter repeatability `sigma & e & e = sigma & e` for every reachable
    /// point state and every event with positive probability there.
    pub fn is_filter_repeatable(&self) -> bool {
        let events = self.all_events();
        self.reachable_configs().into_iter().all(|c| {
            let sigma = PState::point(c);
            events.iter().all(|&ev| {
                let once = self.filter_resolved(&sigma, ev).expect("non-empty pool");
                match once.state {
                    None => true,
                    Some(s) => {
                        let twice = self.filter_resolved(&s, ev).expect("non-empty pool");
                        twice.prob.is_one() && twice.state.as_ref() == Some(&s)
                    }
                }
            })
        })
    }
}
