use std::io::Write;

use incompat_core::catalog::{builtin, load_system, save_system};
use incompat_core::compat::{
    interference_deficit, search_counterexamples, Analyzer, CriterionKind, CriterionReport, RepeatabilityReport,
    SearchParams, SharpnessAudit,
};
use incompat_core::measure::{parse_events, Domain, Dynamics, Event, MeasurementSystem, VariableKind};
use incompat_core::quantum::{run_experiment, ExperimentConfig, PairMode, IDENTITY_TOL};
use serde::Serialize;
use serde_json::json;

use crate::format::{rat, real, Table};
use crate::montecarlo::monte_carlo_estimate;
use crate::{CliError, Command, SystemArgs};

type Out<'a> = &'a mut dyn Write;

pub(crate) fn execute(cmd: Command, out: Out) -> Result<i32, CliError> {
    match cmd {
        Command::Analyze {
            system,
            pairs,
            all_subpools,
            json,
            assert_compatible,
        } => analyze(&system, &pairs, all_subpools, json, assert_compatible, out),
        Command::Prob { system, prep, seq, json } => prob(&system, &prep, &seq, json, out),
        Command::Interfere {
            system,
            prep,
            coarse,
            fine,
            follow,
            json,
        } => interfere(&system, &prep, &coarse, fine.as_deref(), follow.as_deref(), json, out),
        Command::Quantum {
            dims,
            trials,
            rho_samples,
            seed,
            tolerance,
            json,
        } => quantum(&dims, trials, rho_samples, seed, tolerance, json, out),
        Command::Simulate {
            system,
            prep,
            seq,
            trials,
            seed,
            json,
        } => simulate(&system, &prep, &seq, trials, seed, json, out),
        Command::Search {
            configs,
            vars,
            trials,
            seed,
            json,
        } => search(configs, &vars, trials, seed, json, out),
    }
}

fn load(args: &SystemArgs) -> Result<(String, MeasurementSystem), CliError> {
    if let Some(name) = &args.builtin {
        let sys = builtin(name).ok_or_else(|| CliError::Usage(format!("unknown builtin {name:?}")))?;
        return Ok((name.clone(), sys));
    }
    let path = args
        .system
        .as_ref()
        .ok_or_else(|| CliError::Usage("one of --builtin or --system is required".into()))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok((path.display().to_string(), load_system(&text)?))
}

fn events(s: &str) -> Result<Vec<Event>, CliError> {
    parse_events(s).map_err(|e| CliError::Usage(e.to_string()))
}

fn event(s: &str) -> Result<Event, CliError> {
    s.trim().parse().map_err(|e: incompat_core::Error| CliError::Usage(e.to_string()))
}

fn seq_text(events: &[Event]) -> String {
    events.iter().map(ToString::to_string).collect::<Vec<_>>().join(" & ")
}

fn write_json<T: Serialize>(out: Out, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("reports serialize");
    writeln!(out, "{text}")?;
    Ok(())
}

fn dynamics_name(sys: &MeasurementSystem) -> &'static str {
    match sys.dynamics() {
        Dynamics::Urn => "urn",
        Dynamics::Deck(_) => "deck",
        Dynamics::Table(_) => "table",
    }
}

fn criterion_label(kind: CriterionKind) -> &'static str {
    match kind {
        CriterionKind::NonDisturbance => "(1) non-disturbance",
        CriterionKind::IgnoredMeasurement => "(2) ignored measurement",
        CriterionKind::OrderExchange => "(3) order exchange",
    }
}

fn verdict_text(r: &CriterionReport) -> &'static str {
    match (r.verdict.holds(), r.vacuous) {
        (true, true) => "holds (vacuous)",
        (true, false) => "holds",
        (false, _) => "fails",
    }
}

#[derive(Serialize)]
struct PairReports {
    p: Event,
    q: Event,
    reports: Vec<CriterionReport>,
}

#[derive(Serialize)]
struct AnalyzeJson<'a> {
    system: &'a str,
    dynamics: &'a str,
    domain: &'a str,
    configurations: usize,
    pairs: &'a [PairReports],
    repeatability: &'a [RepeatabilityReport],
    sharpness: &'a SharpnessAudit,
    all_order_exchange_hold: bool,
}

fn analyze(
    args: &SystemArgs,
    pair_args: &[String],
    all_subpools: bool,
    json: bool,
    assert_compatible: bool,
    out: Out,
) -> Result<i32, CliError> {
    let (name, sys) = load(args)?;
    let domain = if all_subpools { Domain::AllSubPools } else { Domain::Reachable };
    let analyzer = Analyzer::with_domain(&sys, domain);

    let mut pairs: Vec<(Event, Event)> = Vec::new();
    for s in pair_args {
        let evs = events(s)?;
        let [p, q] = <[Event; 2]>::try_from(evs)
            .map_err(|_| CliError::Usage(format!("--pairs expects exactly two events, got {s:?}")))?;
        pairs.push((p, q));
    }
    let listed = !pairs.is_empty();
    if !listed {
        for a in sys.variables() {
            for b in sys.variables() {
                if a.name == b.name {
                    continue;
                }
                for p in sys.events_of(&a.name)? {
                    for q in sys.events_of(&b.name)? {
                        pairs.push((p.clone(), q));
                    }
                }
            }
        }
    }

    let mut results = Vec::with_capacity(pairs.len());
    for (p, q) in pairs {
        let reports = CriterionKind::ALL
            .iter()
            .map(|&k| analyzer.check(k, &p, &q))
            .collect::<incompat_core::Result<Vec<_>>>()?;
        results.push(PairReports { p, q, reports });
    }
    let repeatability = sys
        .variables()
        .iter()
        .map(|v| analyzer.repeatability_check(&v.name))
        .collect::<incompat_core::Result<Vec<_>>>()?;
    let sharpness = analyzer.sharpness_audit()?;
    let all_oe = results
        .iter()
        .all(|r| r.reports.iter().all(|c| c.kind != CriterionKind::OrderExchange || c.verdict.holds()));

    if json {
        write_json(
            out,
            &AnalyzeJson {
                system: &name,
                dynamics: dynamics_name(&sys),
                domain: if all_subpools { "all-subpools" } else { "reachable" },
                configurations: analyzer.domain().len(),
                pairs: &results,
                repeatability: &repeatability,
                sharpness: &sharpness,
                all_order_exchange_hold: all_oe,
            },
        )?;
    } else {
        writeln!(
            out,
            "system: {name} ({} dynamics, {} {} configurations)",
            dynamics_name(&sys),
            analyzer.domain().len(),
            if all_subpools { "non-empty sub-pool" } else { "reachable" }
        )?;
        if listed {
            for r in &results {
                writeln!(out)?;
                writeln!(out, "pair {}, {}", r.p, r.q)?;
                let mut t = Table::new(["criterion", "verdict", "left", "right", "witness"]);
                for c in &r.reports {
                    let (l, rr, w) = match &c.witness {
                        Some(w) => (
                            rat(&w.left),
                            rat(&w.right),
                            sys.config_label(&sys.resolve_config(&w.config)?),
                        ),
                        None => ("-".into(), "-".into(), "-".into()),
                    };
                    t.row([criterion_label(c.kind).to_string(), verdict_text(c).into(), l, rr, w]);
                }
                write!(out, "{}", t.render())?;
            }
        } else {
            for a in sys.variables() {
                for b in sys.variables() {
                    if a.name == b.name {
                        continue;
                    }
                    writeln!(out)?;
                    writeln!(out, "{} x {}", a.name, b.name)?;
                    let mut t = Table::new(["p", "q", "(1)", "(2)", "(3)", "order exchange witness"]);
                    for r in results.iter().filter(|r| r.p.variable == a.name && r.q.variable == b.name) {
                        let mut cells = vec![r.p.to_string(), r.q.to_string()];
                        cells.extend(r.reports.iter().map(|c| if c.verdict.holds() { "holds" } else { "fails" }.to_string()));
                        let oe = &r.reports[2];
                        cells.push(match &oe.witness {
                            Some(w) => format!(
                                "{} vs {} at {}",
                                rat(&w.left),
                                rat(&w.right),
                                sys.config_label(&sys.resolve_config(&w.config)?)
                            ),
                            None => "-".into(),
                        });
                        t.row(cells);
                    }
                    write!(out, "{}", t.render())?;
                }
            }
        }

        writeln!(out)?;
        writeln!(out, "repeatability")?;
        let mut t = Table::new(["variable", "verdict", "failing pairs", "first failure"]);
        for r in &repeatability {
            let failing: Vec<_> = r.cells.iter().filter(|c| !c.verdict.holds()).collect();
            let first = match failing.first().and_then(|c| c.witness.as_ref().map(|w| (c, w))) {
                Some((c, w)) => format!(
                    "Pr({} | {}) = {} at {}",
                    c.target,
                    c.given,
                    rat(&w.left),
                    sys.config_label(&sys.resolve_config(&w.config)?)
                ),
                None => "-".into(),
            };
            t.row([
                r.variable.clone(),
                if r.all_hold { "holds" } else { "fails" }.into(),
                failing.len().to_string(),
                first,
            ]);
        }
        write!(out, "{}", t.render())?;

        writeln!(out)?;
        writeln!(out, "sharpness")?;
        let mut headers = vec!["configuration".to_string()];
        headers.extend(sys.variables().iter().map(|v| v.name.clone()));
        headers.push("sharp in all base".into());
        let mut t = Table::new(headers);
        for e in &sharpness.entries {
            let mut cells = vec![sys.config_label(&sys.resolve_config(&e.config)?)];
            cells.extend(e.sharp.values().map(|v| v.clone().unwrap_or_else(|| "-".into())));
            cells.push(if e.sharp_in_all_base { "yes" } else { "no" }.into());
            t.row(cells);
        }
        write!(out, "{}", t.render())?;
        writeln!(
            out,
            "states sharp in every base variable: {}",
            sharpness.entries.iter().filter(|e| e.sharp_in_all_base).count()
        )?;
    }

    if assert_compatible && !all_oe {
        if !json {
            writeln!(out)?;
            writeln!(out, "incompatible: some pair fails order exchange")?;
        }
        return Ok(1);
    }
    Ok(0)
}

fn prob(args: &SystemArgs, prep: &str, seq: &str, json: bool, out: Out) -> Result<i32, CliError> {
    let (_, sys) = load(args)?;
    let prep = events(prep)?;
    let seq = events(seq)?;
    if seq.is_empty() {
        return Err(CliError::Usage("--seq needs at least one event".into()));
    }
    let sigma = sys.prepare(&prep)?;
    let p = sys.sequence_prob(&sigma, &seq)?;
    if json {
        write_json(
            out,
            &json!({
                "prep": prep,
                "seq": seq,
                "probability": incompat_core::rational::RationalJson::from(&p),
            }),
        )?;
    } else {
        writeln!(out, "{}", rat(&p))?;
    }
    Ok(0)
}

fn interfere(
    args: &SystemArgs,
    prep: &str,
    coarse: &str,
    fine: Option<&str>,
    follow: Option<&str>,
    json: bool,
    out: Out,
) -> Result<i32, CliError> {
    let (_, sys) = load(args)?;
    let sigma = sys.prepare(&events(prep)?)?;
    let coarse = event(coarse)?;
    let fine = match fine {
        Some(f) => events(f)?,
        None => {
            let v = sys.variable(&coarse.variable)?;
            match (&v.kind, v.value_index(&coarse.value)) {
                (VariableKind::Coarse { base, blocks }, Some(i)) => {
                    blocks[i].iter().map(|b| Event::new(base, b)).collect()
                }
                _ => Vec::new(),
            }
        }
    };
    let follow = follow.map(event).transpose()?;
    let r = interference_deficit(&sys, &sigma, &coarse, &fine, follow.as_ref())?;
    if json {
        write_json(out, &r)?;
        return Ok(0);
    }
    let tail = |e: &Event| match &follow {
        Some(f) => format!("Pr({e} & {f})"),
        None => format!("Pr({e})"),
    };
    let mut t = Table::new(["quantity", "value"]);
    t.row([tail(&coarse), rat(&r.coarse_path)]);
    let fine_terms: Vec<String> = fine.iter().map(|f| tail(f)).collect();
    t.row([fine_terms.join(" + "), rat(&r.fine_sum)]);
    t.row(["deficit".to_string(), rat(&r.deficit)]);
    write!(out, "{}", t.render())?;
    Ok(0)
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, CliError> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad {what} {x:?}")))
        })
        .collect()
}

fn quantum(
    dims: &str,
    trials: usize,
    rho_samples: usize,
    seed: u64,
    tolerance: Option<f64>,
    json: bool,
    out: Out,
) -> Result<i32, CliError> {
    let dims: Vec<usize> = parse_list(dims, "dimension")?;
    let mut cfg = ExperimentConfig::new(dims, trials, rho_samples, seed);
    cfg.tolerance = tolerance.unwrap_or(IDENTITY_TOL);
    let report = run_experiment(&cfg).map_err(|e| match e {
        incompat_core::Error::InvalidArgument(m) => CliError::Usage(m),
        other => other.into(),
    })?;
    if json {
        write_json(out, &report)?;
        return Ok(0);
    }
    let dims_text: Vec<String> = cfg.dims.iter().map(ToString::to_string).collect();
    writeln!(
        out,
        "trials: {}  dims: {}  rho samples: {}  seed: {}  tolerance: {}",
        cfg.trials,
        dims_text.join(","),
        cfg.rho_samples,
        cfg.seed,
        real(cfg.tolerance)
    )?;
    let c = &report.confusion;
    let mut t = Table::new([
        "criterion",
        "form",
        "check",
        "both hold",
        "commute only",
        "criterion only",
        "neither",
    ]);
    let rows = [
        ("non-disturbance", "family", c.nondisturbance),
        ("non-disturbance", "derived-form", c.nondisturbance_pair),
        ("ignored measurement", "family", c.ignored),
        ("order exchange", "pair", c.order_exchange),
    ];
    for (name, form, cc) in rows {
        for (check, m) in [("identity", cc.identity), ("sampled", cc.sampled)] {
            t.row([
                name.to_string(),
                form.into(),
                check.into(),
                m.both.to_string(),
                m.commute_only.to_string(),
                m.criterion_only.to_string(),
                m.neither.to_string(),
            ]);
        }
    }
    write!(out, "{}", t.render())?;
    let generic: Vec<_> = report.trials.iter().filter(|r| r.mode == PairMode::Generic).collect();
    let max_commuting = report
        .trials
        .iter()
        .filter(|r| r.mode == PairMode::Commuting)
        .map(|r| r.commutator_defect)
        .fold(0.0, f64::max);
    let min_generic = generic.iter().map(|r| r.commutator_defect).fold(f64::INFINITY, f64::min);
    let min_witness = generic
        .iter()
        .filter_map(|r| r.witness.as_ref().map(|w| w.violation))
        .fold(f64::INFINITY, f64::min);
    writeln!(
        out,
        "generic pairs with an order-exchange witness: {}/{}",
        generic.len() - report.generic_without_witness,
        generic.len()
    )?;
    writeln!(out, "largest commuting-pair defect: {}", real(max_commuting))?;
    if !generic.is_empty() {
        writeln!(out, "smallest generic-pair defect: {}", real(min_generic))?;
        writeln!(out, "smallest witness violation: {}", real(min_witness))?;
    }
    writeln!(
        out,
        "equivalence: {}",
        if report.perfect() { "no disagreements" } else { "DISAGREEMENTS FOUND" }
    )?;
    Ok(0)
}

fn simulate(args: &SystemArgs, prep: &str, seq: &str, trials: u64, seed: u64, json: bool, out: Out) -> Result<i32, CliError> {
    let (_, sys) = load(args)?;
    let prep = events(prep)?;
    let seq = events(seq)?;
    if seq.is_empty() {
        return Err(CliError::Usage("--seq needs at least one event".into()));
    }
    let est = monte_carlo_estimate(&sys, &prep, &seq, trials, seed).map_err(|e| match e {
        incompat_core::Error::InvalidArgument(m) => CliError::Usage(m),
        other => other.into(),
    })?;
    if json {
        write_json(out, &est)?;
        return Ok(0);
    }
    let mut t = Table::new(["quantity", "value"]);
    t.row(["sequence".to_string(), seq_text(&seq)]);
    t.row([
        "preparation".to_string(),
        if prep.is_empty() { "-".into() } else { seq_text(&prep) },
    ]);
    t.row(["trials".to_string(), est.trials.to_string()]);
    t.row(["hits".to_string(), est.hits.to_string()]);
    t.row(["estimate".to_string(), real(est.estimate)]);
    t.row([
        "exact".to_string(),
        format!("{} = {}", rat(&est.exact), real(incompat_core::rational::to_f64(&est.exact))),
    ]);
    t.row(["4-sigma bound".to_string(), real(est.bound)]);
    t.row(["within bound".to_string(), if est.within_bound { "yes" } else { "no" }.into()]);
    write!(out, "{}", t.render())?;
    Ok(0)
}

fn parse_vars(s: &str) -> Result<Vec<(String, usize)>, CliError> {
    s.split(',')
        .map(|part| {
            let (name, n) = part
                .split_once(':')
                .ok_or_else(|| CliError::Usage(format!("bad variable spec {part:?}, expected NAME:VALUES")))?;
            let n: usize = n
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad value count in {part:?}")))?;
            Ok((name.trim().to_string(), n))
        })
        .collect()
}

fn search(configs: usize, vars: &str, trials: usize, seed: u64, json: bool, out: Out) -> Result<i32, CliError> {
    let params = SearchParams {
        num_configs: configs,
        variables: parse_vars(vars)?,
    };
    let report = search_counterexamples(&params, trials, seed).map_err(|e| match e {
        incompat_core::Error::InvalidArgument(m) => CliError::Usage(m),
        other => other.into(),
    })?;
    if json {
        let findings: Vec<serde_json::Value> = report
            .findings
            .iter()
            .map(|f| {
                json!({
                    "trial": f.trial,
                    "seed": f.seed,
                    "reverified": f.reverified,
                    "pairs": f.pairs,
                    "system": serde_json::from_str::<serde_json::Value>(&save_system(&f.system))
                        .expect("saved systems are JSON"),
                })
            })
            .collect();
        write_json(
            out,
            &json!({
                "trials": report.trials,
                "seed": report.seed,
                "pairs_examined": report.pairs_examined,
                "rejected": report.rejected,
                "findings": findings,
            }),
        )?;
        return Ok(0);
    }
    writeln!(
        out,
        "trials: {}  seed: {}  pairs examined: {}  findings: {}  rejected: {}",
        report.trials,
        report.seed,
        report.pairs_examined,
        report.findings.len(),
        report.rejected
    )?;
    if report.findings.is_empty() {
        return Ok(0);
    }
    let mut t = Table::new(["trial", "p", "q", "pattern", "targets", "reverified"]);
    for f in &report.findings {
        for pf in &f.pairs {
            let targets: Vec<String> = pf.matches.iter().map(|m| format!("{m:?}")).collect();
            t.row([
                f.trial.to_string(),
                pf.p.to_string(),
                pf.q.to_string(),
                pf.pattern.code(),
                targets.join(","),
                if f.reverified { "yes" } else { "no" }.into(),
            ]);
        }
    }
    write!(out, "{}", t.render())?;
    Ok(0)
}
