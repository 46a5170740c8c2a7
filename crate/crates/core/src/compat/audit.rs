//! Repeatability, sharpness, and the implication audit between criteria.

use indexmap::IndexMap;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::criteria::{Analyzer, Verdict, Witness};
use crate::error::Result;
use crate::measure::{ConfigDescription, Event, PState, ResolvedEvent};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepeatabilityCell {
    /// `q_j`, the value asked for on re-measurement.
    pub target: String,
    /// `q_k`, the value obtained first.
    pub given: String,
    pub verdict: Verdict,
    pub vacuous: bool,
    /// `left` is the conditional probability, `right` the expected delta.
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepeatabilityReport {
    pub variable: String,
    pub cells: Vec<RepeatabilityCell>,
    pub all_hold: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SharpnessEntry {
    pub config: ConfigDescription,
    /// The value each variable takes with certainty, if any.
    pub sharp: IndexMap<String, Option<String>>,
    pub sharp_in_all_base: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SharpnessAudit {
    pub entries: Vec<SharpnessEntry>,
    pub any_sharp_in_all_base: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationRow {
    pub p: Event,
    pub q: Event,
    pub nondisturbance: Verdict,
    /// Ignored measurement of `q`'s variable before `p`.
    pub ignored: Verdict,
    pub order_exchange: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyRow {
    pub p: Event,
    pub variable: String,
    /// Order exchange holds with every value of `variable`.
    pub order_exchange_all: bool,
    pub ignored: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationAudit {
    /// Whether `sigma & p & p = sigma & p` holds; only then is
    /// order exchange => non-disturbance asserted.
    pub filter_repeatable: bool,
    pub rows: Vec<RelationRow>,
    pub families: Vec<FamilyRow>,
    /// Implication failures. Non-empty means the engine is unsound.
    pub violations: Vec<String>,
}

impl Analyzer<'_> {
    /// `Pr(q_j | q_k) = delta_jk` on every point state with `Pr(q_k) > 0`.
    pub fn repeatability_check(&self, variable: &str) -> Result<RepeatabilityReport> {
        let var = self.sys.var_index(variable)?;
        let n = self.sys.variables[var].values.len();
        let mut cells = Vec::with_capacity(n * n);
        for j in 0..n {
            for k in 0..n {
                let (target, given) = (ResolvedEvent { var, value: j }, ResolvedEvent { var, value: k });
                let expected = if j == k { Rational::one() } else { Rational::zero() };
                let mut qualified = false;
                let mut witness = None;
                for c in &self.domain {
                    let sigma = PState::point(c.clone());
                    let first = self.sys.sequence_resolved(&sigma, &[given])?;
                    if first.exhausted || first.prob.is_zero() {
                        continue;
                    }
                    let both = self.sys.sequence_resolved(&sigma, &[given, target])?;
                    if both.exhausted {
                        continue;
                    }
                    qualified = true;
                    let cond = both.prob / first.prob;
                    if cond != expected {
                        witness = Some(Witness {
                            config: self.sys.describe_config(c),
                            left: cond,
                            right: expected,
                        });
                        break;
                    }
                }
                let v = &self.sys.variables[var];
                cells.push(RepeatabilityCell {
                    target: v.values[j].clone(),
                    given: v.values[k].clone(),
                    verdict: Verdict::from_bool(witness.is_none()),
                    vacuous: !qualified,
                    witness,
                });
            }
        }
        let all_hold = cells.iter().all(|c| c.verdict.holds());
        Ok(RepeatabilityReport {
            variable: variable.to_string(),
            cells,
            all_hold,
        })
    }

    /// For every point state, the value each variable yields with certainty.
    pub fn sharpness_audit(&self) -> Result<SharpnessAudit> {
        let mut entries = Vec::with_capacity(self.domain.len());
        for c in &self.domain {
            if c.is_exhausted() {
                continue;
            }
            let mut sharp = IndexMap::new();
            let mut all_base = true;
            for v in &self.sys.variables {
                let dist = self.sys.outcome_distribution(c, &v.name)?;
                let certain = dist.iter().find(|(_, p)| p.is_one()).map(|(k, _)| k.clone());
                if v.is_base() && certain.is_none() {
                    all_base = false;
                }
                sharp.insert(v.name.clone(), certain);
            }
            entries.push(SharpnessEntry {
                config: self.sys.describe_config(c),
                sharp,
                sharp_in_all_base: all_base,
            });
        }
        let any = entries.iter().any(|e| e.sharp_in_all_base);
        Ok(SharpnessAudit {
            entries,
            any_sharp_in_all_base: any,
        })
    }

    /// All three verdicts for every value pair of every ordered pair of
    /// distinct variables, checked against the implications
    /// order exchange => non-disturbance (repeatable filters only) and
    /// order exchange for every q_k => ignored measurement of Q.
    pub fn relation_audit(&self) -> Result<RelationAudit> {
        let repeatable = self.sys.is_filter_repeatable();
        let mut rows = Vec::new();
        let mut families = Vec::new();
        let mut violations = Vec::new();
        let names: Vec<String> = self.sys.variables.iter().map(|v| v.name.clone()).collect();
        for a in &names {
            for b in &names {
                if a == b {
                    continue;
                }
                for p in self.sys.events_of(a)? {
                    let ignored = self.check_ignored(&p, b)?.verdict;
                    let mut oe_all = true;
                    for q in self.sys.events_of(b)? {
                        let nd = self.check_nondisturbance(&p, &q)?.verdict;
                        let oe = self.check_order_exchange(&p, &q)?.verdict;
                        oe_all &= oe.holds();
                        if repeatable && oe.holds() && !nd.holds() {
                            violations.push(format!("order exchange holds but non-disturbance fails for ({p}, {q})"));
                        }
                        rows.push(RelationRow {
                            p: p.clone(),
                            q,
                            nondisturbance: nd,
                            ignored,
                            order_exchange: oe,
                        });
                    }
                    if oe_all && !ignored.holds() {
                        violations.push(format!(
                            "order exchange holds for every value of {b} but ignored measurement fails for ({p}, {b})"
                        ));
                    }
                    families.push(FamilyRow {
                        p,
                        variable: b.clone(),
                        order_exchange_all: oe_all,
                        ignored,
                    });
                }
            }
        }
        Ok(RelationAudit {
            filter_repeatable: repeatable,
            rows,
            families,
            violations,
        })
    }
}
