//! JSON system documents.
//!
//! ```json
//! {
//!   "dynamics": "deck",
//!   "variables": [
//!     {"name": "Face", "values": ["King", "Queen"]},
//!     {"name": "Suit", "values": ["Hearts", "Spades"]}
//!   ],
//!   "population": [{"Face": "King", "Suit": "Hearts", "count": 1}, ...],
//!   "initial": "full",
//!   "replacement_rule": {"variable": "Suit", "replace_on": ["Spades"]}
//! }
//! ```
//!
//! Coarse variables add `"coarse_of"` and `"blocks"` (coarse value to list
//! of base values). Table systems replace `population`/`replacement_rule`
//! with `outcome_table` and `update_table`, one object per node mapping
//! each variable name to a per-value array of `{"num", "den"}` rationals or
//! successor node indices; their `initial` is `"full"` or a list of node
//! indices.

use std::collections::BTreeSet;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use serde_path_to_error::Segment;
use thiserror::Error;

use crate::measure::{
    ConfigDescription, Configuration, Dynamics, InitialSpec, ItemCount, MeasurementSystem, ReplacementRule,
    TransitionTable, Variable, VariableKind,
};
use crate::rational::{Rational, RationalJson};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    /// The document does not match the schema; `pointer` is a JSON pointer.
    #[error("schema violation at {pointer:?}: {message}")]
    Spec { pointer: String, message: String },
    #[error("invalid system: {0}")]
    Validation(String),
}

fn spec_err<T>(pointer: impl Into<String>, message: impl Into<String>) -> Result<T, CatalogError> {
    Err(CatalogError::Spec {
        pointer: pointer.into(),
        message: message.into(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum DynamicsKind {
    Urn,
    Deck,
    Table,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VariableDoc {
    name: String,
    values: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coarse_of: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    blocks: Option<IndexMap<String, Vec<String>>>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
enum InitialKeyword {
    #[serde(rename = "full")]
    Full,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum InitialDoc {
    Keyword(InitialKeyword),
    Listed(Vec<ConfigDescription>),
}

impl Default for InitialDoc {
    fn default() -> Self {
        InitialDoc::Keyword(InitialKeyword::Full)
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RuleDoc {
    variable: String,
    replace_on: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemDoc {
    dynamics: DynamicsKind,
    variables: Vec<VariableDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    population: Vec<ItemCount>,
    #[serde(default)]
    initial: InitialDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    replacement_rule: Option<RuleDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    outcome_table: Option<Vec<IndexMap<String, Vec<RationalJson>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    update_table: Option<Vec<IndexMap<String, Vec<usize>>>>,
}

fn pointer_of(path: &serde_path_to_error::Path) -> String {
    let mut out = String::new();
    for seg in path.iter() {
        out.push('/');
        match seg {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } => out.push_str(&key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => out.push_str(variant),
            Segment::Unknown => out.push('?'),
        }
    }
    out
}

/// Parses and validates a system document.
pub fn load_system(text: &str) -> Result<MeasurementSystem, CatalogError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: SystemDoc = serde_path_to_error::deserialize(de).map_err(|e| CatalogError::Spec {
        pointer: pointer_of(e.path()),
        message: e.inner().to_string(),
    })?;
    from_doc(doc)
}

fn variables_from_doc(docs: &[VariableDoc]) -> Result<Vec<Variable>, CatalogError> {
    let mut out = Vec::with_capacity(docs.len());
    for (i, v) in docs.iter().enumerate() {
        let here = format!("/variables/{i}");
        let kind = match (&v.coarse_of, &v.blocks) {
            (None, None) => VariableKind::Base,
            (Some(base), Some(blocks)) => {
                let Some(base_doc) = docs.iter().find(|d| &d.name == base) else {
                    return spec_err(format!("{here}/coarse_of"), format!("unknown variable {base:?}"));
                };
                let keys: Vec<&String> = blocks.keys().collect();
                let values: Vec<&String> = v.values.iter().collect();
                if keys != values {
                    return spec_err(format!("{here}/blocks"), "block keys must list the coarse values in order");
                }
                let mut covered = BTreeSet::new();
                for (key, members) in blocks {
                    if members.is_empty() {
                        return spec_err(format!("{here}/blocks/{key}"), "empty block");
                    }
                    for m in members {
                        if !base_doc.values.contains(m) {
                            return spec_err(
                                format!("{here}/blocks/{key}"),
                                format!("{m:?} is not a value of {base:?}"),
                            );
                        }
                        if !covered.insert(m.clone()) {
                            return spec_err(format!("{here}/blocks/{key}"), format!("{m:?} appears in two blocks"));
                        }
                    }
                }
                if let Some(missing) = base_doc.values.iter().find(|b| !covered.contains(*b)) {
                    return spec_err(format!("{here}/blocks"), format!("base value {missing:?} is in no block"));
                }
                VariableKind::Coarse {
                    base: base.clone(),
                    blocks: blocks.values().cloned().collect(),
                }
            }
            _ => return spec_err(here, "coarse_of and blocks must appear together"),
        };
        out.push(Variable {
            name: v.name.clone(),
            values: v.values.clone(),
            kind,
        });
    }
    Ok(out)
}

fn from_doc(doc: SystemDoc) -> Result<MeasurementSystem, CatalogError> {
    let variables = variables_from_doc(&doc.variables)?;
    let names: Vec<&str> = variables.iter().map(|v| v.name.as_str()).collect();

    let dynamics = match doc.dynamics {
        DynamicsKind::Urn | DynamicsKind::Deck => {
            if doc.outcome_table.is_some() {
                return spec_err("/outcome_table", "only table dynamics take an outcome table");
            }
            if doc.update_table.is_some() {
                return spec_err("/update_table", "only table dynamics take an update table");
            }
            if doc.population.is_empty() {
                return spec_err("/population", "population is required and non-empty");
            }
            match (doc.dynamics, &doc.replacement_rule) {
                (DynamicsKind::Urn, None) => Dynamics::Urn,
                (DynamicsKind::Urn, Some(_)) => {
                    return spec_err("/replacement_rule", "only deck dynamics take a replacement rule")
                }
                (_, Some(rule)) => Dynamics::Deck(ReplacementRule {
                    variable: rule.variable.clone(),
                    replace_on: rule.replace_on.iter().cloned().collect(),
                }),
                (_, None) => return spec_err("/replacement_rule", "deck dynamics need a replacement rule"),
            }
        }
        DynamicsKind::Table => {
            if !doc.population.is_empty() {
                return spec_err("/population", "table dynamics take no population");
            }
            if doc.replacement_rule.is_some() {
                return spec_err("/replacement_rule", "only deck dynamics take a replacement rule");
            }
            let (Some(outcome_doc), Some(update_doc)) = (&doc.outcome_table, &doc.update_table) else {
                return spec_err("", "table dynamics need outcome_table and update_table");
            };
            let mut outcomes = Vec::new();
            for (n, row) in outcome_doc.iter().enumerate() {
                check_row_keys(row.keys(), &names, &format!("/outcome_table/{n}"))?;
                let mut per_var = Vec::new();
                for name in &names {
                    let mut vals = Vec::new();
                    for (k, r) in row[*name].iter().enumerate() {
                        match Rational::try_from(r) {
                            Ok(x) => vals.push(x),
                            Err(m) => return spec_err(format!("/outcome_table/{n}/{name}/{k}"), m),
                        }
                    }
                    per_var.push(vals);
                }
                outcomes.push(per_var);
            }
            let mut updates = Vec::new();
            for (n, row) in update_doc.iter().enumerate() {
                check_row_keys(row.keys(), &names, &format!("/update_table/{n}"))?;
                updates.push(names.iter().map(|name| row[*name].clone()).collect());
            }
            Dynamics::Table(TransitionTable { outcomes, updates })
        }
    };

    let initial = match doc.initial {
        InitialDoc::Keyword(InitialKeyword::Full) => InitialSpec::Full,
        InitialDoc::Listed(list) => {
            let table = doc.dynamics == DynamicsKind::Table;
            for (i, c) in list.iter().enumerate() {
                if table != matches!(c, ConfigDescription::Node(_)) {
                    return spec_err(format!("/initial/{i}"), "configuration kind does not match the dynamics");
                }
            }
            InitialSpec::Listed(list)
        }
    };

    MeasurementSystem::new(variables, dynamics, &doc.population, initial)
        .map_err(|e| CatalogError::Validation(e.to_string()))
}

fn check_row_keys<'a>(
    keys: impl Iterator<Item = &'a String>,
    names: &[&str],
    pointer: &str,
) -> Result<(), CatalogError> {
    let got: BTreeSet<&str> = keys.map(String::as_str).collect();
    let want: BTreeSet<&str> = names.iter().copied().collect();
    if got != want {
        return spec_err(pointer, "row must have exactly one entry per variable");
    }
    Ok(())
}

fn to_doc(sys: &MeasurementSystem) -> SystemDoc {
    let variables = sys
        .variables()
        .iter()
        .map(|v| match &v.kind {
            VariableKind::Base => VariableDoc {
                name: v.name.clone(),
                values: v.values.clone(),
                coarse_of: None,
                blocks: None,
            },
            VariableKind::Coarse { base, blocks } => VariableDoc {
                name: v.name.clone(),
                values: v.values.clone(),
                coarse_of: Some(base.clone()),
                blocks: Some(v.values.iter().cloned().zip(blocks.iter().cloned()).collect()),
            },
        })
        .collect();

    let population = match sys.describe_config(&Configuration::Pool(sys.population().clone())) {
        ConfigDescription::Pool(items) => items,
        ConfigDescription::Node(_) => unreachable!(),
    };

    let full: Vec<Configuration> = match sys.dynamics() {
        Dynamics::Table(t) => (0..t.num_nodes()).map(Configuration::Node).collect(),
        _ => vec![Configuration::Pool(sys.population().clone())],
    };
    let initial = if sys.initial() == full.as_slice() {
        InitialDoc::Keyword(InitialKeyword::Full)
    } else {
        InitialDoc::Listed(sys.initial().iter().map(|c| sys.describe_config(c)).collect())
    };

    let names: Vec<String> = sys.variables().iter().map(|v| v.name.clone()).collect();
    let (dynamics, replacement_rule, outcome_table, update_table) = match sys.dynamics() {
        Dynamics::Urn => (DynamicsKind::Urn, None, None, None),
        Dynamics::Deck(rule) => (
            DynamicsKind::Deck,
            Some(RuleDoc {
                variable: rule.variable.clone(),
                replace_on: rule.replace_on.iter().cloned().collect(),
            }),
            None,
            None,
        ),
        Dynamics::Table(t) => (
            DynamicsKind::Table,
            None,
            Some(
                t.outcomes
                    .iter()
                    .map(|node| {
                        names
                            .iter()
                            .cloned()
                            .zip(node.iter().map(|row| row.iter().map(RationalJson::from).collect()))
                            .collect()
                    })
                    .collect(),
            ),
            Some(
                t.updates
                    .iter()
                    .map(|node| names.iter().cloned().zip(node.iter().cloned()).collect())
                    .collect(),
            ),
        ),
    };

    SystemDoc {
        dynamics,
        variables,
        population,
        initial,
        replacement_rule,
        outcome_table,
        update_table,
    }
}

/// Canonical pretty-printed document for `sys`.
pub fn save_system(sys: &MeasurementSystem) -> String {
    serde_json::to_string_pretty(&to_doc(sys)).expect("system documents serialize")
}
