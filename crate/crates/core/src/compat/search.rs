//! Randomized search for table systems separating the three criteria.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::criteria::{Analyzer, VerdictPattern};
use super::enumeration::enumerated_pattern;
use crate::catalog::random_table_system;
use crate::error::{Error, Result};
use crate::measure::{Event, MeasurementSystem};
use crate::seed::derive_seed;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchParams {
    pub num_configs: usize,
    pub variables: Vec<(String, usize)>,
}

/// Verdict patterns with no known classical example.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TargetPattern {
    /// Non-disturbance without ignored measurement.
    NonDisturbanceOnly,
    /// Ignored measurement without non-disturbance.
    IgnoredOnly,
    /// Both Lüders criteria without order exchange.
    BothWithoutOrderExchange,
}

impl TargetPattern {
    pub const ALL: [TargetPattern; 3] = [
        TargetPattern::NonDisturbanceOnly,
        TargetPattern::IgnoredOnly,
        TargetPattern::BothWithoutOrderExchange,
    ];

    pub fn matches(self, v: &VerdictPattern) -> bool {
        match self {
            TargetPattern::NonDisturbanceOnly => v.nondisturbance && !v.ignored,
            TargetPattern::IgnoredOnly => v.ignored && !v.nondisturbance,
            TargetPattern::BothWithoutOrderExchange => v.nondisturbance && v.ignored && !v.order_exchange,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairFinding {
    pub p: Event,
    pub q: Event,
    pub pattern: VerdictPattern,
    pub matches: Vec<TargetPattern>,
}

#[derive(Debug, Clone)]
pub struct Finding {
    pub trial: usize,
    pub seed: u64,
    pub system: MeasurementSystem,
    pub pairs: Vec<PairFinding>,
    /// Every pair's pattern agreed with path enumeration.
    pub reverified: bool,
}

#[derive(Debug, Clone)]
pub struct SearchReport {
    pub trials: usize,
    pub seed: u64,
    pub pairs_examined: usize,
    pub findings: Vec<Finding>,
    /// Findings discarded because the two evaluation routes disagreed.
    pub rejected: usize,
}

/// Every ordered pair of values of distinct variables with its pattern.
pub fn pattern_table(sys: &MeasurementSystem) -> Result<Vec<(Event, Event, VerdictPattern)>> {
    let analyzer = Analyzer::new(sys);
    let mut out = Vec::new();
    for a in sys.variables() {
        for b in sys.variables() {
            if a.name == b.name {
                continue;
            }
            for p in sys.events_of(&a.name)? {
                for q in sys.events_of(&b.name)? {
                    let v = analyzer.verdict_pattern(&p, &q)?;
                    out.push((p.clone(), q, v));
                }
            }
        }
    }
    Ok(out)
}

/// Generates `trials` random table systems and keeps those with a value
/// pair matching a [`TargetPattern`], after re-verifying by enumeration.
/// Trial `t` uses sub-seed `derive_seed(seed, t)`, so the result does not
/// depend on scheduling.
pub fn search_counterexamples(params: &SearchParams, trials: usize, seed: u64) -> Result<SearchReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let outcomes: Vec<Result<(usize, Option<Finding>, bool)>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let sub = derive_seed(seed, t as u64);
            let sys = random_table_system(params.num_configs, &params.variables, sub)?;
            let table = pattern_table(&sys)?;
            let examined = table.len();
            let pairs: Vec<PairFinding> = table
                .into_iter()
                .filter_map(|(p, q, pattern)| {
                    let matches: Vec<TargetPattern> =
                        TargetPattern::ALL.into_iter().filter(|t| t.matches(&pattern)).collect();
                    (!matches.is_empty()).then_some(PairFinding { p, q, pattern, matches })
                })
                .collect();
            if pairs.is_empty() {
                return Ok((examined, None, false));
            }
            let mut reverified = true;
            for pf in &pairs {
                reverified &= enumerated_pattern(&sys, &pf.p, &pf.q)? == pf.pattern;
            }
            Ok((
                examined,
                Some(Finding {
                    trial: t,
                    seed: sub,
                    system: sys,
                    pairs,
                    reverified,
                }),
                !reverified,
            ))
        })
        .collect();

    let mut report = SearchReport {
        trials,
        seed,
        pairs_examined: 0,
        findings: Vec::new(),
        rejected: 0,
    };
    for o in outcomes {
        let (examined, finding, rejected) = o?;
        report.pairs_examined += examined;
        if rejected {
            report.rejected += 1;
        } else if let Some(f) = finding {
            report.findings.push(f);
        }
    }
    Ok(report)
}
