//! Second evaluation route: per-path recursion over point configurations.
//!
//! Used to re-verify search findings. It walks draws item by item (or table
//! rows) and never builds conditioned p-states.

use num_traits::{One, Zero};

use super::criteria::VerdictPattern;
use crate::error::Result;
use crate::measure::{Configuration, Dynamics, Event, MeasurementSystem, ResolvedEvent};
use crate::rational::{self, Rational};

struct Path {
    prob: Rational,
    exhausted: bool,
}

fn walk(sys: &MeasurementSystem, config: &Configuration, events: &[ResolvedEvent]) -> Path {
    let Some((first, rest)) = events.split_first() else {
        return Path {
            prob: Rational::one(),
            exhausted: false,
        };
    };
    match (config, &sys.dynamics) {
        (Configuration::Node(n), Dynamics::Table(t)) => {
            let p = &t.outcomes[*n][first.var][first.value];
            if p.is_zero() {
                return Path {
                    prob: Rational::zero(),
                    exhausted: false,
                };
            }
            let tail = walk(sys, &Configuration::Node(t.updates[*n][first.var][first.value]), rest);
            Path {
                prob: p * tail.prob,
                exhausted: tail.exhausted,
            }
        }
        (Configuration::Pool(pool), dynamics) => {
            if pool.is_empty() {
                return Path {
                    prob: Rational::zero(),
                    exhausted: true,
                };
            }
            let total = pool.total() as i64;
            let mut prob = Rational::zero();
            let mut exhausted = false;
            for (item, count) in pool.iter() {
                if sys.value_of(item, first.var) != first.value {
                    continue;
                }
                let next = match dynamics {
                    Dynamics::Urn => sys.population.filter(|i| sys.value_of(i, first.var) == first.value),
                    Dynamics::Deck(rule) => {
                        let pos = sys.base_pos[sys.var_index(&rule.variable).expect("validated rule")]
                            .expect("rule names a base variable");
                        let label = &sys.variables[sys.base_vars[pos]].values[item.0[pos] as usize];
                        let mut next = pool.clone();
                        if !rule.replace_on.contains(label) {
                            next.remove_one(item);
                        }
                        next
                    }
                    Dynamics::Table(_) => unreachable!("pool under table dynamics"),
                };
                let tail = walk(sys, &Configuration::Pool(next), rest);
                prob += rational::ratio(count as i64, total) * tail.prob;
                exhausted |= tail.exhausted;
            }
            Path { prob, exhausted }
        }
        _ => unreachable!("configuration kind matches dynamics"),
    }
}

/// `Pr(e1 & e2 & ...)` from a point configuration, by path enumeration.
pub fn path_prob(sys: &MeasurementSystem, config: &Configuration, events: &[Event]) -> Result<Rational> {
    Ok(walk(sys, config, &sys.resolve_all(events)?).prob)
}

/// The three verdicts for `(p, q)` over the reachable configurations,
/// computed by path enumeration only.
pub fn enumerated_pattern(sys: &MeasurementSystem, p: &Event, q: &Event) -> Result<VerdictPattern> {
    let rp = sys.resolve(p)?;
    let rq = sys.resolve(q)?;
    let qvar = rq.var;
    let n_q = sys.variables[qvar].values.len();
    let mut pattern = VerdictPattern {
        nondisturbance: true,
        ignored: true,
        order_exchange: true,
    };
    for c in sys.reachable_configs() {
        let pq = walk(sys, &c, &[rp, rq]);
        let qp = walk(sys, &c, &[rq, rp]);
        if !(pq.exhausted || qp.exhausted) && pq.prob != qp.prob {
            pattern.order_exchange = false;
        }

        let pqp = walk(sys, &c, &[rp, rq, rp]);
        if !(pq.exhausted || pqp.exhausted) && !pq.prob.is_zero() && pqp.prob != pq.prob {
            pattern.nondisturbance = false;
        }

        let single = walk(sys, &c, &[rp]);
        let mut sum = Rational::zero();
        let mut exhausted = single.exhausted;
        for value in 0..n_q {
            let e = walk(sys, &c, &[ResolvedEvent { var: qvar, value }, rp]);
            sum += e.prob;
            exhausted |= e.exhausted;
        }
        if !exhausted && sum != single.prob {
            pattern.ignored = false;
        }
    }
    Ok(pattern)
}
