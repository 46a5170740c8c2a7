//! Random projector pairs and the commutativity equivalence experiment.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::identity::{criterion_identity_check, Operand};
use super::ops::{
    c, commutator_defect, make_projector, orthonormalize, seq_prob_q, ComplexMatrix, ComplexVector, DensityOp,
    Projector, ProjectorFamily, IDENTITY_TOL,
};
use crate::compat::CriterionKind;
use crate::error::{Error, Result};
use crate::seed::derive_seed;

/// Generic pairs closer to commuting than this are redrawn.
pub const GENERIC_MIN_DEFECT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairMode {
    Commuting,
    Generic,
}

/// Complex vector with independent standard normal real and imaginary parts.
pub fn gaussian_vector(d: usize, rng: &mut impl Rng) -> ComplexVector {
    ComplexVector::from_fn(d, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re, im)
    })
}

pub fn random_pure_state(d: usize, rng: &mut impl Rng) -> DensityOp {
    loop {
        if let Ok(rho) = DensityOp::pure(&gaussian_vector(d, rng)) {
            return rho;
        }
    }
}

/// Orthonormal basis from a Gaussian matrix.
fn random_basis(d: usize, rng: &mut impl Rng) -> Vec<ComplexVector> {
    loop {
        let cols: Vec<ComplexVector> = (0..d).map(|_| gaussian_vector(d, rng)).collect();
        if let Ok(b) = orthonormalize(&cols) {
            return b;
        }
    }
}

fn random_span(d: usize, rank: usize, rng: &mut impl Rng) -> Projector {
    loop {
        let vs: Vec<ComplexVector> = (0..rank).map(|_| gaussian_vector(d, rng)).collect();
        if let Ok(p) = make_projector(&vs) {
            return p;
        }
    }
}

fn pair_from_rng(dim: usize, mode: PairMode, ranks: (usize, usize), rng: &mut impl Rng) -> Result<(Projector, Projector)> {
    for r in [ranks.0, ranks.1] {
        if r == 0 || r >= dim {
            return Err(Error::InvalidArgument(format!("rank {r} outside 1..{dim}")));
        }
    }
    match mode {
        PairMode::Commuting => {
            let basis = random_basis(dim, rng);
            let pick = |r: usize, rng: &mut dyn rand::RngCore| {
                let vs: Vec<ComplexVector> = index::sample(rng, dim, r).into_iter().map(|i| basis[i].clone()).collect();
                make_projector(&vs)
            };
            let p = pick(ranks.0, rng)?;
            let q = pick(ranks.1, rng)?;
            Ok((p, q))
        }
        PairMode::Generic => loop {
            let p = random_span(dim, ranks.0, rng);
            let q = random_span(dim, ranks.1, rng);
            if commutator_defect(&p, &q)? > GENERIC_MIN_DEFECT {
                return Ok((p, q));
            }
        },
    }
}

/// A seeded projector pair. Commuting pairs share a random eigenbasis;
/// generic pairs are independent random spans.
pub fn gen_pair(dim: usize, mode: PairMode, ranks: (usize, usize), seed: u64) -> Result<(Projector, Projector)> {
    pair_from_rng(dim, mode, ranks, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Labelled density operator used as a test preparation.
#[derive(Debug, Clone)]
pub struct Probe {
    pub label: String,
    pub rho: DensityOp,
}

/// `d^2` pure states whose projectors span the Hermitian operators:
/// `|i>`, `(|i> + |j>)/sqrt2` and `(|i> + i|j>)/sqrt2` for `i < j`.
pub fn spanning_set(d: usize) -> Vec<Probe> {
    let e = |i: usize| {
        let mut v = ComplexVector::zeros(d);
        v[i] = c(1.0, 0.0);
        v
    };
    let mut out = Vec::with_capacity(d * d);
    for i in 0..d {
        out.push(Probe {
            label: format!("|{i}>"),
            rho: DensityOp::basis(d, i),
        });
    }
    for i in 0..d {
        for j in i + 1..d {
            let real = e(i) + e(j);
            let imag = e(i) + e(j) * c(0.0, 1.0);
            out.push(Probe {
                label: format!("|{i}>+|{j}>"),
                rho: DensityOp::pure(&real).expect("non-zero"),
            });
            out.push(Probe {
                label: format!("|{i}>+i|{j}>"),
                rho: DensityOp::pure(&imag).expect("non-zero"),
            });
        }
    }
    out
}

/// Largest violation of each criterion's probability equality over probes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampledViolations {
    /// `max_j |Pr(p_j & q & p_j) - Pr(p_j & q)|` over `{P, I - P}`.
    pub nondisturbance: f64,
    /// `|Pr(p & q & p) - Pr(p & q)|` for `P` alone.
    pub nondisturbance_pair: f64,
    /// `|sum_s Pr(q_s & p) - Pr(p)|` over `{Q, I - Q}`.
    pub ignored: f64,
    /// `|Pr(p & q) - Pr(q & p)|`.
    pub order_exchange: f64,
}

fn probe_violations(rho: &DensityOp, p: &Projector, q: &Projector) -> Result<SampledViolations> {
    let pc = p.complement();
    let qc = q.complement();
    let nd = |pj: &Projector| -> Result<f64> { Ok((seq_prob_q(rho, &[pj, q, pj])? - seq_prob_q(rho, &[pj, q])?).abs()) };
    let pair = nd(p)?;
    let family = pair.max(nd(&pc)?);
    let ignored = (seq_prob_q(rho, &[q, p])? + seq_prob_q(rho, &[&qc, p])? - seq_prob_q(rho, &[p])?).abs();
    let oe = (seq_prob_q(rho, &[p, q])? - seq_prob_q(rho, &[q, p])?).abs();
    Ok(SampledViolations {
        nondisturbance: family,
        nondisturbance_pair: pair,
        ignored,
        order_exchange: oe,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityDefects {
    pub nondisturbance: f64,
    pub nondisturbance_pair: f64,
    pub ignored: f64,
    pub order_exchange: f64,
}

/// Density operator maximizing the order-exchange violation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhoWitness {
    pub label: String,
    /// Row-major entries as `[re, im]`.
    pub rho: Vec<Vec<[f64; 2]>>,
    pub left: f64,
    pub right: f64,
    pub violation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub dim: usize,
    pub mode: PairMode,
    pub ranks: (usize, usize),
    pub commutator_defect: f64,
    pub identity_defects: IdentityDefects,
    pub sampled_violations: SampledViolations,
    /// Present for generic pairs.
    pub witness: Option<RhoWitness>,
}

/// Counts of (commutes, criterion holds) outcomes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusion {
    pub both: usize,
    pub commute_only: usize,
    pub criterion_only: usize,
    pub neither: usize,
}

impl Confusion {
    fn add(&mut self, commutes: bool, holds: bool) {
        match (commutes, holds) {
            (true, true) => self.both += 1,
            (true, false) => self.commute_only += 1,
            (false, true) => self.criterion_only += 1,
            (false, false) => self.neither += 1,
        }
    }

    pub fn off_diagonal(&self) -> usize {
        self.commute_only + self.criterion_only
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionConfusion {
    pub identity: Confusion,
    pub sampled: Confusion,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionSummary {
    pub nondisturbance: CriterionConfusion,
    /// Single-pair non-disturbance, `PQPQP = PQP`.
    pub nondisturbance_pair: CriterionConfusion,
    pub ignored: CriterionConfusion,
    pub order_exchange: CriterionConfusion,
}

impl ConfusionSummary {
    pub fn off_diagonal(&self) -> usize {
        [
            self.nondisturbance,
            self.nondisturbance_pair,
            self.ignored,
            self.order_exchange,
        ]
        .iter()
        .map(|c| c.identity.off_diagonal() + c.sampled.off_diagonal())
        .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub dims: Vec<usize>,
    pub trials: usize,
    pub rho_samples: usize,
    pub seed: u64,
    pub tolerance: f64,
}

impl ExperimentConfig {
    pub fn new(dims: Vec<usize>, trials: usize, rho_samples: usize, seed: u64) -> Self {
        ExperimentConfig {
            dims,
            trials,
            rho_samples,
            seed,
            tolerance: IDENTITY_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub trials: Vec<TrialRecord>,
    pub confusion: ConfusionSummary,
    /// Generic pairs with no probe violating order exchange by more than
    /// [`GENERIC_MIN_DEFECT`].
    pub generic_without_witness: usize,
}

impl ExperimentReport {
    pub fn perfect(&self) -> bool {
        self.confusion.off_diagonal() == 0 && self.generic_without_witness == 0
    }
}

fn to_entries(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

fn run_trial(cfg: &ExperimentConfig, t: usize) -> Result<TrialRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, t as u64));
    let dim = cfg.dims[(t / 2) % cfg.dims.len()];
    let mode = if t % 2 == 0 { PairMode::Commuting } else { PairMode::Generic };
    let ranks = (rng.random_range(1..dim), rng.random_range(1..dim));
    let (p, q) = pair_from_rng(dim, mode, ranks, &mut rng)?;
    let tol = cfg.tolerance;

    let pf = ProjectorFamily::binary(&p);
    let qf = ProjectorFamily::binary(&q);
    let check = |k, a, b| criterion_identity_check(k, a, b, tol).map(|c| c.defect);
    let identity_defects = IdentityDefects {
        nondisturbance: check(CriterionKind::NonDisturbance, Operand::Family(&pf), Operand::Single(&q))?,
        nondisturbance_pair: check(CriterionKind::NonDisturbance, Operand::Single(&p), Operand::Single(&q))?,
        ignored: check(CriterionKind::IgnoredMeasurement, Operand::Single(&p), Operand::Family(&qf))?,
        order_exchange: check(CriterionKind::OrderExchange, Operand::Single(&p), Operand::Single(&q))?,
    };

    let mut probes = spanning_set(dim);
    for n in 0..cfg.rho_samples {
        probes.push(Probe {
            label: format!("sample {n}"),
            rho: random_pure_state(dim, &mut rng),
        });
    }
    let mut worst = SampledViolations {
        nondisturbance: 0.0,
        nondisturbance_pair: 0.0,
        ignored: 0.0,
        order_exchange: 0.0,
    };
    let mut best: Option<(usize, f64)> = None;
    for (i, probe) in probes.iter().enumerate() {
        let v = probe_violations(&probe.rho, &p, &q)?;
        worst.nondisturbance = worst.nondisturbance.max(v.nondisturbance);
        worst.nondisturbance_pair = worst.nondisturbance_pair.max(v.nondisturbance_pair);
        worst.ignored = worst.ignored.max(v.ignored);
        worst.order_exchange = worst.order_exchange.max(v.order_exchange);
        if best.is_none_or(|(_, b)| v.order_exchange > b) {
            best = Some((i, v.order_exchange));
        }
    }
    let witness = match (mode, best) {
        (PairMode::Generic, Some((i, violation))) => {
            let probe = &probes[i];
            Some(RhoWitness {
                label: probe.label.clone(),
                rho: to_entries(probe.rho.matrix()),
                left: seq_prob_q(&probe.rho, &[&p, &q])?,
                right: seq_prob_q(&probe.rho, &[&q, &p])?,
                violation,
            })
        }
        _ => None,
    };
    Ok(TrialRecord {
        trial: t,
        dim,
        mode,
        ranks,
        commutator_defect: commutator_defect(&p, &q)?,
        identity_defects,
        sampled_violations: worst,
        witness,
    })
}

/// Runs `trials` seeded trials alternating commuting and generic pairs over
/// `dims`, and tallies commutativity against every criterion in both the
/// operator-identity and the sampled-state form.
pub fn equivalence_experiment(dims: &[usize], trials: usize, rho_samples: usize, seed: u64) -> Result<ExperimentReport> {
    run_experiment(&ExperimentConfig::new(dims.to_vec(), trials, rho_samples, seed))
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    if cfg.trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if cfg.dims.is_empty() || cfg.dims.iter().any(|&d| d < 2) {
        return Err(Error::InvalidArgument("dimensions must be at least 2".into()));
    }
    if !(cfg.tolerance > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let records: Vec<TrialRecord> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(cfg, t))
        .collect::<Result<_>>()?;

    let tol = cfg.tolerance;
    let mut confusion = ConfusionSummary::default();
    let mut generic_without_witness = 0;
    for r in &records {
        let commutes = r.commutator_defect <= tol;
        let tally = |c: &mut CriterionConfusion, identity: f64, sampled: f64| {
            c.identity.add(commutes, identity <= tol);
            c.sampled.add(commutes, sampled <= tol);
        };
        let (id, sv) = (&r.identity_defects, &r.sampled_violations);
        tally(&mut confusion.nondisturbance, id.nondisturbance, sv.nondisturbance);
        tally(&mut confusion.nondisturbance_pair, id.nondisturbance_pair, sv.nondisturbance_pair);
        tally(&mut confusion.ignored, id.ignored, sv.ignored);
        tally(&mut confusion.order_exchange, id.order_exchange, sv.order_exchange);
        if r.mode == PairMode::Generic && r.witness.as_ref().is_none_or(|w| w.violation <= GENERIC_MIN_DEFECT) {
            generic_without_witness += 1;
        }
    }
    Ok(ExperimentReport {
        config: cfg.clone(),
        trials: records,
        confusion,
        generic_without_witness,
    })
}

