//! Variables, items, configurations and the measurement system itself.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VariableKind {
    Base,
    /// Coarse-graining of a base variable. `blocks[i]` lists the base values
    /// pooled into the coarse value `values[i]`.
    Coarse { base: String, blocks: Vec<Vec<String>> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub values: Vec<String>,
    pub kind: VariableKind,
}

impl Variable {
    pub fn base<S: Into<String>>(name: S, values: &[&str]) -> Self {
        Variable {
            name: name.into(),
            values: values.iter().map(|v| v.to_string()).collect(),
            kind: VariableKind::Base,
        }
    }

    pub fn coarse<S: Into<String>>(name: S, base: &str, blocks: &[(&str, &[&str])]) -> Self {
        Variable {
            name: name.into(),
            values: blocks.iter().map(|(v, _)| v.to_string()).collect(),
            kind: VariableKind::Coarse {
                base: base.to_string(),
                blocks: blocks
                    .iter()
                    .map(|(_, b)| b.iter().map(|s| s.to_string()).collect())
                    .collect(),
            },
        }
    }

    pub fn is_base(&self) -> bool {
        matches!(self.kind, VariableKind::Base)
    }

    pub fn value_index(&self, value: &str) -> Option<usize> {
        self.values.iter().position(|v| v == value)
    }
}

/// An item's label indices, one per base variable in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Item(pub(crate) Vec<u32>);

impl Item {
    pub fn labels(&self) -> &[u32] {
        &self.0
    }
}

/// A multiset of items. Zero counts are never stored, so equal multisets
/// compare equal and order canonically.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pool(BTreeMap<Item, u64>);

impl Pool {
    pub fn new() -> Self {
        Pool(BTreeMap::new())
    }

    pub fn add(&mut self, item: Item, count: u64) {
        if count > 0 {
            *self.0.entry(item).or_insert(0) += count;
        }
    }

    /// Removes one copy; returns false if the item is absent.
    pub fn remove_one(&mut self, item: &Item) -> bool {
        match self.0.get_mut(item) {
            Some(c) if *c > 1 => {
                *c -= 1;
                true
            }
            Some(_) => {
                self.0.remove(item);
                true
            }
            None => false,
        }
    }

    pub fn count(&self, item: &Item) -> u64 {
        self.0.get(item).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Item, u64)> {
        self.0.iter().map(|(i, c)| (i, *c))
    }

    pub fn is_sub_multiset_of(&self, other: &Pool) -> bool {
        self.iter().all(|(i, c)| other.count(i) >= c)
    }

    pub fn filter<F: Fn(&Item) -> bool>(&self, keep: F) -> Pool {
        Pool(
            self.0
                .iter()
                .filter(|(i, _)| keep(i))
                .map(|(i, c)| (i.clone(), *c))
                .collect(),
        )
    }

    /// Every non-empty sub-multiset, in canonical order.
    pub fn sub_multisets(&self) -> Vec<Pool> {
        let entries: Vec<(&Item, u64)> = self.iter().collect();
        let mut out = vec![Pool::new()];
        for (item, count) in entries {
            let mut next = Vec::with_capacity(out.len() * (count as usize + 1));
            for base in &out {
                for k in 0..=count {
                    let mut p = base.clone();
                    p.add(item.clone(), k);
                    next.push(p);
                }
            }
            out = next;
        }
        out.retain(|p| !p.is_empty());
        out.sort();
        out
    }
}

/// State of the stochastic game's substrate: the active pool for urn and
/// deck dynamics, or a table node.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Configuration {
    Pool(Pool),
    Node(usize),
}

impl Configuration {
    pub fn is_exhausted(&self) -> bool {
        matches!(self, Configuration::Pool(p) if p.is_empty())
    }
}

/// An elementary proposition `variable = value`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Event {
    pub variable: String,
    pub value: String,
}

impl Event {
    pub fn new(variable: &str, value: &str) -> Self {
        Event {
            variable: variable.to_string(),
            value: value.to_string(),
        }
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.variable, self.value)
    }
}

impl FromStr for Event {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().split_once(':') {
            Some((var, val)) if !var.trim().is_empty() && !val.trim().is_empty() => {
                Ok(Event::new(var.trim(), val.trim()))
            }
            _ => Err(Error::MalformedEvent(s.to_string())),
        }
    }
}

/// Parses `A:x,B:y,...`.
pub fn parse_events(s: &str) -> Result<Vec<Event>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(Event::from_str)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct ResolvedEvent {
    pub var: usize,
    pub value: usize,
}

/// Drawn item is put back iff its label for `variable` is in `replace_on`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplacementRule {
    pub variable: String,
    pub replace_on: BTreeSet<String>,
}

impl ReplacementRule {
    pub fn new(variable: &str, replace_on: &[&str]) -> Self {
        ReplacementRule {
            variable: variable.to_string(),
            replace_on: replace_on.iter().map(|s| s.to_string()).collect(),
        }
    }
}

/// Outcome probabilities and successor nodes, indexed `[node][variable][value]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionTable {
    pub outcomes: Vec<Vec<Vec<Rational>>>,
    pub updates: Vec<Vec<Vec<usize>>>,
}

impl TransitionTable {
    pub fn num_nodes(&self) -> usize {
        self.outcomes.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Dynamics {
    /// Draw one item from the pool; refill the pool with every population
    /// item carrying the reported value.
    Urn,
    /// Draw one item; replace or discard it according to the rule.
    Deck(ReplacementRule),
    Table(TransitionTable),
}

/// An item with its multiplicity, keyed by base-variable name, e.g.
/// `{"Color": "Yellow", "Pattern": "Plain", "count": 2}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ItemCount {
    #[serde(flatten)]
    pub labels: BTreeMap<String, String>,
    pub count: u64,
}

impl ItemCount {
    pub fn new(labels: &[(&str, &str)], count: u64) -> Self {
        ItemCount {
            labels: labels
                .iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
            count,
        }
    }
}

/// Name-level description of a configuration.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConfigDescription {
    Node(usize),
    Pool(Vec<ItemCount>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InitialSpec {
    /// The whole population (pool dynamics) or every node (table dynamics).
    Full,
    Listed(Vec<ConfigDescription>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct CoarseMap {
    pub base_var: usize,
    /// Coarse value index for each base value index.
    pub block_of: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementSystem {
    pub(crate) variables: Vec<Variable>,
    pub(crate) dynamics: Dynamics,
    pub(crate) population: Pool,
    pub(crate) initial: Vec<Configuration>,
    /// Position in an item's label vector, for base variables.
    pub(crate) base_pos: Vec<Option<usize>>,
    pub(crate) base_vars: Vec<usize>,
    pub(crate) coarse: Vec<Option<CoarseMap>>,
    /// (label position, replace flag per value) for deck dynamics.
    pub(crate) rule: Option<(usize, Vec<bool>)>,
}

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidSystem(msg.into()))
}

impl MeasurementSystem {
    pub fn new(
        variables: Vec<Variable>,
        dynamics: Dynamics,
        population: &[ItemCount],
        initial: InitialSpec,
    ) -> Result<Self> {
        let mut names = BTreeSet::new();
        for v in &variables {
            if v.name.is_empty() {
                return invalid("variable with empty name");
            }
            if !names.insert(v.name.as_str()) {
                return invalid(format!("duplicate variable {:?}", v.name));
            }
            if v.values.len() < 2 {
                return invalid(format!("variable {:?} needs at least two values", v.name));
            }
            let mut seen = BTreeSet::new();
            for val in &v.values {
                if val.is_empty() {
                    return invalid(format!("variable {:?} has an empty value label", v.name));
                }
                if !seen.insert(val.as_str()) {
                    return invalid(format!("variable {:?} repeats value {:?}", v.name, val));
                }
            }
        }

        let mut base_pos = vec![None; variables.len()];
        let mut base_vars = Vec::new();
        for (i, v) in variables.iter().enumerate() {
            if v.is_base() {
                base_pos[i] = Some(base_vars.len());
                base_vars.push(i);
            }
        }
        if base_vars.is_empty() {
            return invalid("system has no base variable");
        }

        let mut coarse = vec![None; variables.len()];
        for (i, v) in variables.iter().enumerate() {
            if let VariableKind::Coarse { base, blocks } = &v.kind {
                let Some(bi) = variables.iter().position(|w| &w.name == base) else {
                    return invalid(format!("{:?} coarsens unknown variable {:?}", v.name, base));
                };
                if !variables[bi].is_base() {
                    return invalid(format!("{:?} coarsens non-base variable {:?}", v.name, base));
                }
                if blocks.len() != v.values.len() {
                    return invalid(format!("{:?}: one block per coarse value required", v.name));
                }
                let base_values = &variables[bi].values;
                let mut block_of = vec![usize::MAX; base_values.len()];
                for (ci, block) in blocks.iter().enumerate() {
                    if block.is_empty() {
                        return invalid(format!("{:?}: block {:?} is empty", v.name, v.values[ci]));
                    }
                    for b in block {
                        let Some(bv) = variables[bi].value_index(b) else {
                            return invalid(format!("{:?}: {:?} is not a value of {:?}", v.name, b, base));
                        };
                        if block_of[bv] != usize::MAX {
                            return invalid(format!("{:?}: base value {:?} in two blocks", v.name, b));
                        }
                        block_of[bv] = ci;
                    }
                }
                if let Some(missing) = block_of.iter().position(|&b| b == usize::MAX) {
                    return invalid(format!(
                        "{:?}: base value {:?} is in no block",
                        v.name, base_values[missing]
                    ));
                }
                coarse[i] = Some(CoarseMap { base_var: bi, block_of });
            }
        }

        let mut sys = MeasurementSystem {
            variables,
            dynamics,
            population: Pool::new(),
            initial: Vec::new(),
            base_pos,
            base_vars,
            coarse,
            rule: None,
        };

        match &sys.dynamics {
            Dynamics::Table(table) => {
                if sys.coarse.iter().any(Option::is_some) {
                    return invalid("table dynamics do not support coarse variables");
                }
                if !population.is_empty() {
                    return invalid("table dynamics take no population");
                }
                sys.validate_table(table)?;
            }
            Dynamics::Urn | Dynamics::Deck(_) => {
                let mut pool = Pool::new();
                for ic in population {
                    if ic.count == 0 {
                        return invalid("population item with count 0");
                    }
                    pool.add(sys.item_from_labels(&ic.labels)?, ic.count);
                }
                if pool.is_empty() {
                    return invalid("population is empty");
                }
                sys.population = pool;
            }
        }

        if let Dynamics::Deck(rule) = &sys.dynamics {
            let var = sys.var_index(&rule.variable)?;
            let Some(pos) = sys.base_pos[var] else {
                return invalid("replacement rule must name a base variable");
            };
            for v in &rule.replace_on {
                if sys.variables[var].value_index(v).is_none() {
                    return invalid(format!("replacement value {:?} unknown for {:?}", v, rule.variable));
                }
            }
            let flags = sys.variables[var]
                .values
                .iter()
                .map(|v| rule.replace_on.contains(v))
                .collect();
            sys.rule = Some((pos, flags));
        }

        sys.initial = match initial {
            InitialSpec::Full => match &sys.dynamics {
                Dynamics::Table(t) => (0..t.num_nodes()).map(Configuration::Node).collect(),
                _ => vec![Configuration::Pool(sys.population.clone())],
            },
            InitialSpec::Listed(list) => {
                let mut out = Vec::new();
                for d in &list {
                    out.push(sys.resolve_config(d)?);
                }
                out.sort();
                out.dedup();
                out
            }
        };
        if sys.initial.is_empty() {
            return invalid("no initial configuration");
        }
        for c in &sys.initial {
            if let Configuration::Pool(p) = c {
                if p.is_empty() {
                    return invalid("initial configurations must be non-empty");
                }
                if !p.is_sub_multiset_of(&sys.population) {
                    return invalid("initial configuration is not a sub-multiset of the population");
                }
            }
        }
        Ok(sys)
    }

    fn validate_table(&self, t: &TransitionTable) -> Result<()> {
        let n = t.num_nodes();
        if n == 0 {
            return invalid("table has no nodes");
        }
        if t.updates.len() != n {
            return invalid("outcome and update tables disagree on node count");
        }
        for node in 0..n {
            if t.outcomes[node].len() != self.variables.len() || t.updates[node].len() != self.variables.len() {
                return invalid(format!("node {node}: one row per variable required"));
            }
            for (vi, var) in self.variables.iter().enumerate() {
                let row = &t.outcomes[node][vi];
                let upd = &t.updates[node][vi];
                if row.len() != var.values.len() || upd.len() != var.values.len() {
                    return invalid(format!("node {node}, {:?}: one entry per value required", var.name));
                }
                if row.iter().any(|p| !rational::is_probability(p)) {
                    return invalid(format!("node {node}, {:?}: entry outside [0,1]", var.name));
                }
                let sum: Rational = row.iter().cloned().sum();
                if !sum.is_one() {
                    return invalid(format!(
                        "node {node}, {:?}: outcome row sums to {}",
                        var.name,
                        rational::display(&sum)
                    ));
                }
                if let Some(bad) = upd.iter().find(|&&u| u >= n) {
                    return invalid(format!("node {node}, {:?}: update target {bad} out of range", var.name));
                }
            }
        }
        Ok(())
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn dynamics(&self) -> &Dynamics {
        &self.dynamics
    }

    pub fn population(&self) -> &Pool {
        &self.population
    }

    pub fn initial(&self) -> &[Configuration] {
        &self.initial
    }

    pub fn base_variables(&self) -> impl Iterator<Item = &Variable> {
        self.base_vars.iter().map(|&i| &self.variables[i])
    }

    pub fn variable(&self, name: &str) -> Result<&Variable> {
        Ok(&self.variables[self.var_index(name)?])
    }

    pub(crate) fn var_index(&self, name: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub(crate) fn resolve(&self, event: &Event) -> Result<ResolvedEvent> {
        let var = self.var_index(&event.variable)?;
        let value = self.variables[var]
            .value_index(&event.value)
            .ok_or_else(|| Error::UnknownValue {
                variable: event.variable.clone(),
                value: event.value.clone(),
            })?;
        Ok(ResolvedEvent { var, value })
    }

    pub(crate) fn resolve_all(&self, events: &[Event]) -> Result<Vec<ResolvedEvent>> {
        events.iter().map(|e| self.resolve(e)).collect()
    }

    pub fn event_of_index(&self, var: usize, value: usize) -> Event {
        let v = &self.variables[var];
        Event::new(&v.name, &v.values[value])
    }

    /// Every event of `variable`, in declaration order.
    pub fn events_of(&self, variable: &str) -> Result<Vec<Event>> {
        let v = self.variable(variable)?;
        Ok(v.values.iter().map(|x| Event::new(&v.name, x)).collect())
    }

    /// Value index of `item` under variable `var` (coarse variables map
    /// through their block).
    pub(crate) fn value_of(&self, item: &Item, var: usize) -> usize {
        match (&self.base_pos[var], &self.coarse[var]) {
            (Some(pos), _) => item.0[*pos] as usize,
            (None, Some(cm)) => {
                let pos = self.base_pos[cm.base_var].expect("coarse base is a base variable");
                cm.block_of[item.0[pos] as usize]
            }
            (None, None) => unreachable!("variable is neither base nor coarse"),
        }
    }

    pub fn item_from_labels(&self, labels: &BTreeMap<String, String>) -> Result<Item> {
        for k in labels.keys() {
            let vi = self.var_index(k)?;
            if self.base_pos[vi].is_none() {
                return invalid(format!("item labels name non-base variable {k:?}"));
            }
        }
        let mut idx = Vec::with_capacity(self.base_vars.len());
        for &vi in &self.base_vars {
            let var = &self.variables[vi];
            let Some(label) = labels.get(&var.name) else {
                return invalid(format!("item lacks a label for {:?}", var.name));
            };
            let Some(x) = var.value_index(label) else {
                return Err(Error::UnknownValue {
                    variable: var.name.clone(),
                    value: label.clone(),
                });
            };
            idx.push(x as u32);
        }
        Ok(Item(idx))
    }

    pub fn item_labels(&self, item: &Item) -> BTreeMap<String, String> {
        self.base_vars
            .iter()
            .zip(&item.0)
            .map(|(&vi, &x)| {
                let v = &self.variables[vi];
                (v.name.clone(), v.values[x as usize].clone())
            })
            .collect()
    }

    pub fn item(&self, labels: &[(&str, &str)]) -> Result<Item> {
        self.item_from_labels(
            &labels
                .iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
        )
    }

    pub fn describe_config(&self, config: &Configuration) -> ConfigDescription {
        match config {
            Configuration::Node(n) => ConfigDescription::Node(*n),
            Configuration::Pool(p) => ConfigDescription::Pool(
                p.iter()
                    .map(|(i, c)| ItemCount {
                        labels: self.item_labels(i),
                        count: c,
                    })
                    .collect(),
            ),
        }
    }

    pub fn resolve_config(&self, d: &ConfigDescription) -> Result<Configuration> {
        match (d, &self.dynamics) {
            (ConfigDescription::Node(n), Dynamics::Table(t)) => {
                if *n >= t.num_nodes() {
                    return invalid(format!("node {n} out of range"));
                }
                Ok(Configuration::Node(*n))
            }
            (ConfigDescription::Pool(items), Dynamics::Urn | Dynamics::Deck(_)) => {
                let mut p = Pool::new();
                for ic in items {
                    p.add(self.item_from_labels(&ic.labels)?, ic.count);
                }
                Ok(Configuration::Pool(p))
            }
            _ => invalid("configuration kind does not match the system dynamics"),
        }
    }

    /// Short human form, e.g. `{Yellow/Plain x2, Green/Plain}` or `#3`.
    pub fn config_label(&self, config: &Configuration) -> String {
        match config {
            Configuration::Node(n) => format!("#{n}"),
            Configuration::Pool(p) => {
                let parts: Vec<String> = p
                    .iter()
                    .map(|(i, c)| {
                        let names: Vec<&str> = self
                            .base_vars
                            .iter()
                            .zip(&i.0)
                            .map(|(&vi, &x)| self.variables[vi].values[x as usize].as_str())
                            .collect();
                        if c == 1 {
                            names.join("/")
                        } else {
                            format!("{} x{}", names.join("/"), c)
                        }
                    })
                    .collect();
                format!("{{{}}}", parts.join(", "))
            }
        }
    }
}
