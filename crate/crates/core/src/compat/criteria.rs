//! The three value-pair compatibility criteria.
//!
//! For a pair of values `p`, `q` and a p-state `sigma`:
//!
//! - non-disturbance: `Pr[sigma](p | p & q) = 1`,
//! - ignored measurement: `sum_s Pr[sigma](Q=s & p) = Pr[sigma](p)`,
//! - order exchange: `Pr[sigma](p & q) = Pr[sigma](q & p)`.
//!
//! A criterion holds for the pair when its equality holds for every point
//! state in the preparation domain. Every side is affine in `sigma` once the
//! conditional's denominator is cleared, so point states decide mixtures.

use serde::{Deserialize, Serialize};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::measure::{ConfigDescription, Configuration, Domain, Event, MeasurementSystem, PState, ResolvedEvent};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CriterionKind {
    NonDisturbance,
    IgnoredMeasurement,
    OrderExchange,
}

impl CriterionKind {
    pub const ALL: [CriterionKind; 3] = [
        CriterionKind::NonDisturbance,
        CriterionKind::IgnoredMeasurement,
        CriterionKind::OrderExchange,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
}

impl Verdict {
    pub fn holds(self) -> bool {
        self == Verdict::Holds
    }

    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Pair {
    Values { p: Event, q: Event },
    ValueVariable { p: Event, variable: String },
}

/// A point state where the two sides of a criterion differ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub config: ConfigDescription,
    #[serde(with = "rational::json")]
    pub left: Rational,
    #[serde(with = "rational::json")]
    pub right: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub kind: CriterionKind,
    pub pair: Pair,
    pub verdict: Verdict,
    /// No point state qualified, so the criterion holds vacuously.
    pub vacuous: bool,
    pub witness: Option<Witness>,
}

/// Both sides of a criterion at one p-state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sides {
    pub left: Rational,
    pub right: Rational,
    /// A measurement in one of the sequences found an empty pool.
    pub exhausted: bool,
    /// False when the criterion says nothing about this state (the
    /// non-disturbance condition has probability zero).
    pub applicable: bool,
}

impl Sides {
    pub fn equal(&self) -> bool {
        self.left == self.right
    }

    fn counts(&self) -> bool {
        self.applicable && !self.exhausted
    }
}

/// `(Pr(p & q), Pr(q & p))`.
pub fn order_exchange_sides(sys: &MeasurementSystem, sigma: &PState, p: &Event, q: &Event) -> Result<Sides> {
    let (p, q) = (sys.resolve(p)?, sys.resolve(q)?);
    order_exchange_resolved(sys, sigma, p, q)
}

fn order_exchange_resolved(sys: &MeasurementSystem, sigma: &PState, p: ResolvedEvent, q: ResolvedEvent) -> Result<Sides> {
    let pq = sys.sequence_resolved(sigma, &[p, q])?;
    let qp = sys.sequence_resolved(sigma, &[q, p])?;
    Ok(Sides {
        left: pq.prob,
        right: qp.prob,
        exhausted: pq.exhausted || qp.exhausted,
        applicable: true,
    })
}

/// `(Pr(p | p & q), 1)`; not applicable when `Pr(p & q) = 0`.
pub fn nondisturbance_sides(sys: &MeasurementSystem, sigma: &PState, p: &Event, q: &Event) -> Result<Sides> {
    let (p, q) = (sys.resolve(p)?, sys.resolve(q)?);
    nondisturbance_resolved(sys, sigma, p, q)
}

fn nondisturbance_resolved(sys: &MeasurementSystem, sigma: &PState, p: ResolvedEvent, q: ResolvedEvent) -> Result<Sides> {
    let pq = sys.sequence_resolved(sigma, &[p, q])?;
    let pqp = sys.sequence_resolved(sigma, &[p, q, p])?;
    let exhausted = pq.exhausted || pqp.exhausted;
    if pq.prob.is_zero() {
        return Ok(Sides {
            left: Rational::zero(),
            right: Rational::zero(),
            exhausted,
            applicable: false,
        });
    }
    Ok(Sides {
        left: pqp.prob / pq.prob,
        right: Rational::one(),
        exhausted,
        applicable: true,
    })
}

/// `(sum_s Pr(Q=s & p), Pr(p))`.
pub fn ignored_sides(sys: &MeasurementSystem, sigma: &PState, p: &Event, variable: &str) -> Result<Sides> {
    let p = sys.resolve(p)?;
    let var = sys.var_index(variable)?;
    ignored_resolved(sys, sigma, p, var)
}

fn ignored_resolved(sys: &MeasurementSystem, sigma: &PState, p: ResolvedEvent, var: usize) -> Result<Sides> {
    let mut left = Rational::zero();
    let mut exhausted = false;
    for value in 0..sys.variables[var].values.len() {
        let e = sys.sequence_resolved(sigma, &[ResolvedEvent { var, value }, p])?;
        left += e.prob;
        exhausted |= e.exhausted;
    }
    let single = sys.sequence_resolved(sigma, &[p])?;
    Ok(Sides {
        left,
        right: single.prob,
        exhausted: exhausted || single.exhausted,
        applicable: true,
    })
}

/// Sides of `kind` at `sigma`. For ignored measurement `q` only names the
/// ignored variable.
pub fn criterion_sides(sys: &MeasurementSystem, kind: CriterionKind, sigma: &PState, p: &Event, q: &Event) -> Result<Sides> {
    match kind {
        CriterionKind::NonDisturbance => nondisturbance_sides(sys, sigma, p, q),
        CriterionKind::IgnoredMeasurement => ignored_sides(sys, sigma, p, &q.variable),
        CriterionKind::OrderExchange => order_exchange_sides(sys, sigma, p, q),
    }
}

/// Verdict of a criterion at a single, possibly mixed, state. States where
/// the criterion does not apply count as holding.
pub fn holds_at(sides: &Sides) -> bool {
    !sides.counts() || sides.equal()
}

/// Criteria evaluated over a fixed preparation domain.
pub struct Analyzer<'a> {
    pub(crate) sys: &'a MeasurementSystem,
    pub(crate) domain: Vec<Configuration>,
}

impl<'a> Analyzer<'a> {
    /// Quantifies over point states on the reachable configurations.
    pub fn new(sys: &'a MeasurementSystem) -> Self {
        Self::with_domain(sys, Domain::Reachable)
    }

    pub fn with_domain(sys: &'a MeasurementSystem, domain: Domain) -> Self {
        Analyzer {
            sys,
            domain: sys.domain(domain),
        }
    }

    pub fn system(&self) -> &MeasurementSystem {
        self.sys
    }

    pub fn domain(&self) -> &[Configuration] {
        &self.domain
    }

    /// First failing point state in canonical order, if any.
    fn decide<F>(&self, eval: F) -> Result<(Verdict, bool, Option<Witness>)>
    where
        F: Fn(&PState) -> Result<Sides>,
    {
        let mut qualified = false;
        for c in &self.domain {
            let sides = eval(&PState::point(c.clone()))?;
            if !sides.counts() {
                continue;
            }
            qualified = true;
            if !sides.equal() {
                let witness = Witness {
                    config: self.sys.describe_config(c),
                    left: sides.left,
                    right: sides.right,
                };
                return Ok((Verdict::Fails, false, Some(witness)));
            }
        }
        Ok((Verdict::Holds, !qualified, None))
    }

    pub fn check_order_exchange(&self, p: &Event, q: &Event) -> Result<CriterionReport> {
        let (rp, rq) = (self.sys.resolve(p)?, self.sys.resolve(q)?);
        let (verdict, vacuous, witness) = self.decide(|s| order_exchange_resolved(self.sys, s, rp, rq))?;
        Ok(CriterionReport {
            kind: CriterionKind::OrderExchange,
            pair: Pair::Values { p: p.clone(), q: q.clone() },
            verdict,
            vacuous,
            witness,
        })
    }

    pub fn check_nondisturbance(&self, p: &Event, q: &Event) -> Result<CriterionReport> {
        let (rp, rq) = (self.sys.resolve(p)?, self.sys.resolve(q)?);
        let (verdict, vacuous, witness) = self.decide(|s| nondisturbance_resolved(self.sys, s, rp, rq))?;
        Ok(CriterionReport {
            kind: CriterionKind::NonDisturbance,
            pair: Pair::Values { p: p.clone(), q: q.clone() },
            verdict,
            vacuous,
            witness,
        })
    }

    pub fn check_ignored(&self, p: &Event, variable: &str) -> Result<CriterionReport> {
        let rp = self.sys.resolve(p)?;
        let var = self.sys.var_index(variable)?;
        let (verdict, vacuous, witness) = self.decide(|s| ignored_resolved(self.sys, s, rp, var))?;
        Ok(CriterionReport {
            kind: CriterionKind::IgnoredMeasurement,
            pair: Pair::ValueVariable {
                p: p.clone(),
                variable: variable.to_string(),
            },
            verdict,
            vacuous,
            witness,
        })
    }

    pub fn check(&self, kind: CriterionKind, p: &Event, q: &Event) -> Result<CriterionReport> {
        match kind {
            CriterionKind::NonDisturbance => self.check_nondisturbance(p, q),
            CriterionKind::IgnoredMeasurement => self.check_ignored(p, &q.variable),
            CriterionKind::OrderExchange => self.check_order_exchange(p, q),
        }
    }

    /// The three verdicts for `(p, q)`; ignored measurement uses `q`'s variable.
    pub fn verdict_pattern(&self, p: &Event, q: &Event) -> Result<VerdictPattern> {
        Ok(VerdictPattern {
            nondisturbance: self.check_nondisturbance(p, q)?.verdict.holds(),
            ignored: self.check_ignored(p, &q.variable)?.verdict.holds(),
            order_exchange: self.check_order_exchange(p, q)?.verdict.holds(),
        })
    }

    /// One order-exchange report per value pair of `a` x `b`.
    pub fn compatibility_matrix(&self, a: &str, b: &str) -> Result<CompatibilityMatrix> {
        let rows = self.sys.events_of(a)?;
        let cols = self.sys.events_of(b)?;
        let mut cells = Vec::with_capacity(rows.len());
        for p in &rows {
            let mut row = Vec::with_capacity(cols.len());
            for q in &cols {
                row.push(self.check_order_exchange(p, q)?);
            }
            cells.push(row);
        }
        let all_hold = cells.iter().flatten().all(|r| r.verdict.holds());
        Ok(CompatibilityMatrix {
            row_variable: a.to_string(),
            col_variable: b.to_string(),
            cells,
            all_hold,
        })
    }
}

/// Which of the three criteria hold for one value pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VerdictPattern {
    pub nondisturbance: bool,
    pub ignored: bool,
    pub order_exchange: bool,
}

impl VerdictPattern {
    /// E.g. `(1)&!(2)&(3)`, numbering non-disturbance, ignored, order exchange.
    pub fn code(&self) -> String {
        let f = |b: bool, n: u8| if b { format!("({n})") } else { format!("!({n})") };
        format!(
            "{}&{}&{}",
            f(self.nondisturbance, 1),
            f(self.ignored, 2),
            f(self.order_exchange, 3)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompatibilityMatrix {
    pub row_variable: String,
    pub col_variable: String,
    pub cells: Vec<Vec<CriterionReport>>,
    /// Variable-level compatibility: every value pair holds.
    pub all_hold: bool,
}

pub fn check_order_exchange(sys: &MeasurementSystem, p: &Event, q: &Event) -> Result<CriterionReport> {
    Analyzer::new(sys).check_order_exchange(p, q)
}

pub fn check_nondisturbance(sys: &MeasurementSystem, p: &Event, q: &Event) -> Result<CriterionReport> {
    Analyzer::new(sys).check_nondisturbance(p, q)
}

pub fn check_ignored(sys: &MeasurementSystem, p: &Event, variable: &str) -> Result<CriterionReport> {
    Analyzer::new(sys).check_ignored(p, variable)
}

pub fn compatibility_matrix(sys: &MeasurementSystem, a: &str, b: &str) -> Result<CompatibilityMatrix> {
    Analyzer::new(sys).compatibility_matrix(a, b)
}

/// Re-evaluates a failing report's witness; `Ok(true)` when it reproduces
/// the recorded sides exactly.
pub fn witness_reproduces(sys: &MeasurementSystem, report: &CriterionReport) -> Result<bool> {
    let Some(w) = &report.witness else {
        return Err(Error::InvalidArgument("report has no witness".into()));
    };
    let sigma = PState::point(sys.resolve_config(&w.config)?);
    let sides = match &report.pair {
        Pair::Values { p, q } => criterion_sides(sys, report.kind, &sigma, p, q)?,
        Pair::ValueVariable { p, variable } => ignored_sides(sys, &sigma, p, variable)?,
    };
    Ok(sides.left == w.left && sides.right == w.right && w.left != w.right)
}
