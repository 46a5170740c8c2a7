use incompat_core::compat::CriterionKind;
use incompat_core::quantum::{
    c, commutator_defect, criterion_identity_check, equivalence_experiment, gaussian_vector, gen_pair,
    lueders_condition, make_projector, random_pure_state, run_experiment, seq_prob_q, spanning_set, ComplexMatrix,
    ComplexVector, DensityOp, ExperimentConfig, IdentityForm, Operand, PairMode, Projector, ProjectorFamily,
    CONSTRUCTION_TOL, IDENTITY_TOL,
};
use incompat_core::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn v2(a: f64, b: f64) -> ComplexVector {
    ComplexVector::from_vec(vec![c(a, 0.0), c(b, 0.0)])
}

fn p_e1() -> Projector {
    make_projector(&[v2(1.0, 0.0)]).unwrap()
}

fn q_half() -> Projector {
    make_projector(&[v2(1.0, 1.0)]).unwrap()
}

fn rho_e1() -> DensityOp {
    DensityOp::basis(2, 0)
}

/// Real 2x2 arithmetic written out by hand.
mod hand {
    pub type M = [[f64; 2]; 2];

    pub fn mul(a: M, b: M) -> M {
        let mut r = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        r
    }

    pub fn tr(a: M) -> f64 {
        a[0][0] + a[1][1]
    }

    /// `Tr(B A rho A B)`.
    pub fn seq(rho: M, a: M, b: M) -> f64 {
        tr(mul(mul(mul(mul(b, a), rho), a), b))
    }

    pub const P: M = [[1.0, 0.0], [0.0, 0.0]];
    pub const Q: M = [[0.5, 0.5], [0.5, 0.5]];
}

fn close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
    (a - b).norm() <= tol
}

fn real2(rows: [[f64; 2]; 2]) -> ComplexMatrix {
    ComplexMatrix::from_fn(2, 2, |i, j| c(rows[i][j], 0.0))
}

#[test]
fn hand_checkable_instance() {
    let (p, q, rho) = (p_e1(), q_half(), rho_e1());
    let pq = seq_prob_q(&rho, &[&p, &q]).unwrap();
    let qp = seq_prob_q(&rho, &[&q, &p]).unwrap();
    assert!((pq - hand::seq(hand::P, hand::P, hand::Q)).abs() <= 1e-12);
    assert!((qp - hand::seq(hand::P, hand::Q, hand::P)).abs() <= 1e-12);
    assert!((pq - 0.5).abs() <= 1e-12);
    assert!((qp - 0.25).abs() <= 1e-12);

    let comm = hand::mul(hand::P, hand::Q);
    let comm2 = hand::mul(hand::Q, hand::P);
    let fro: f64 = (0..2)
        .flat_map(|i| (0..2).map(move |j| (i, j)))
        .map(|(i, j)| (comm[i][j] - comm2[i][j]).powi(2))
        .sum::<f64>()
        .sqrt();
    let d = commutator_defect(&p, &q).unwrap();
    assert!((d - fro).abs() <= 1e-12);
    assert!((d - 1.0 / 2f64.sqrt()).abs() <= 1e-12);
}

#[test]
fn projector_examples() {
    assert!(close(p_e1().matrix(), &real2([[1.0, 0.0], [0.0, 0.0]]), 1e-15));
    let id = make_projector(&[v2(1.0, 0.0), v2(0.0, 1.0)]).unwrap();
    assert!(close(id.matrix(), &ComplexMatrix::identity(2, 2), 1e-15));
    assert_eq!(id.rank(), 2);
    assert!(close(q_half().matrix(), &real2([[0.5, 0.5], [0.5, 0.5]]), 1e-15));
    assert!(matches!(
        make_projector(&[v2(1.0, 1.0), v2(-2.0, -2.0)]),
        Err(Error::RankDeficient { index: 1 })
    ));
}

#[test]
fn lueders_examples() {
    let half = DensityOp::maximally_mixed(2);
    let out = lueders_condition(&half, &p_e1(), IDENTITY_TOL).unwrap();
    assert!(close(out.matrix(), p_e1().matrix(), 1e-15));

    let inside = DensityOp::pure(&v2(1.0, 1.0)).unwrap();
    let out = lueders_condition(&inside, &q_half(), IDENTITY_TOL).unwrap();
    assert!(close(out.matrix(), inside.matrix(), 1e-15));
    let out = lueders_condition(&inside, &Projector::identity(2), IDENTITY_TOL).unwrap();
    assert!(close(out.matrix(), inside.matrix(), 1e-15));

    let orth = DensityOp::basis(2, 1);
    assert_eq!(lueders_condition(&orth, &p_e1(), IDENTITY_TOL).unwrap_err(), Error::ZeroCondition);
}

#[test]
fn seq_prob_examples_and_errors() {
    let id = Projector::identity(2);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..5 {
        let rho = random_pure_state(2, &mut rng);
        assert!((seq_prob_q(&rho, &[&id, &id]).unwrap() - 1.0).abs() <= 1e-12);
    }
    let p3 = Projector::identity(3);
    assert_eq!(
        seq_prob_q(&rho_e1(), &[&p3]).unwrap_err(),
        Error::DimensionMismatch { expected: 2, found: 3 }
    );
    assert!(matches!(seq_prob_q(&rho_e1(), &[]), Err(Error::InvalidArgument(_))));
}

#[test]
fn commutator_examples() {
    let p = Projector::diagonal(2, &[0]);
    let q = Projector::diagonal(2, &[1]);
    assert_eq!(commutator_defect(&p, &q).unwrap(), 0.0);
    assert!(commutator_defect(&q_half(), &Projector::identity(2)).unwrap() <= 1e-15);
    assert!(matches!(
        commutator_defect(&p, &Projector::identity(3)),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn identity_examples() {
    let (p, q) = (p_e1(), q_half());
    let oe = criterion_identity_check(CriterionKind::OrderExchange, Operand::Single(&p), Operand::Single(&q), IDENTITY_TOL)
        .unwrap();
    assert!(!oe.holds);
    let pqp = p.matrix() * q.matrix() * p.matrix();
    let qpq = q.matrix() * p.matrix() * q.matrix();
    assert!(close(&pqp, &real2([[0.5, 0.0], [0.0, 0.0]]), 1e-15));
    assert!(close(&qpq, &real2([[0.25, 0.25], [0.25, 0.25]]), 1e-15));

    let fam = ProjectorFamily::new(vec![Projector::diagonal(2, &[0]), Projector::diagonal(2, &[1])], CONSTRUCTION_TOL)
        .unwrap();
    let ig = criterion_identity_check(
        CriterionKind::IgnoredMeasurement,
        Operand::Single(&q),
        Operand::Family(&fam),
        IDENTITY_TOL,
    )
    .unwrap();
    assert!(!ig.holds);
    assert!(ig.defect > 0.1);

    let nd = criterion_identity_check(CriterionKind::NonDisturbance, Operand::Single(&p), Operand::Single(&q), IDENTITY_TOL)
        .unwrap();
    assert_eq!(nd.form, IdentityForm::DerivedForm);
    assert!(!nd.holds);
    let ndf = criterion_identity_check(
        CriterionKind::NonDisturbance,
        Operand::Family(&fam),
        Operand::Single(&q),
        IDENTITY_TOL,
    )
    .unwrap();
    assert_eq!(ndf.form, IdentityForm::Operator);
    assert!(!ndf.holds);

    let shape = criterion_identity_check(CriterionKind::OrderExchange, Operand::Family(&fam), Operand::Single(&q), IDENTITY_TOL);
    assert!(matches!(shape, Err(Error::ShapeMismatch(_))));
    let shape = criterion_identity_check(CriterionKind::IgnoredMeasurement, Operand::Single(&p), Operand::Single(&q), IDENTITY_TOL);
    assert!(matches!(shape, Err(Error::ShapeMismatch(_))));
}

#[test]
fn commuting_pairs_satisfy_every_identity() {
    for seed in 0..20 {
        let d = 2 + (seed as usize % 5);
        let (p, q) = gen_pair(d, PairMode::Commuting, (1, d - 1), seed).unwrap();
        assert!(commutator_defect(&p, &q).unwrap() <= 1e-10);
        let (pf, qf) = (ProjectorFamily::binary(&p), ProjectorFamily::binary(&q));
        let checks = [
            (CriterionKind::OrderExchange, Operand::Single(&p), Operand::Single(&q)),
            (CriterionKind::IgnoredMeasurement, Operand::Single(&p), Operand::Family(&qf)),
            (CriterionKind::NonDisturbance, Operand::Family(&pf), Operand::Single(&q)),
            (CriterionKind::NonDisturbance, Operand::Single(&p), Operand::Single(&q)),
        ];
        for (k, a, b) in checks {
            let r = criterion_identity_check(k, a, b, IDENTITY_TOL).unwrap();
            assert!(r.holds && r.defect <= 1e-12, "{k:?} {}", r.defect);
        }
    }
}

#[test]
fn gen_pair_properties() {
    for seed in 0..30 {
        let (p, q) = gen_pair(2, PairMode::Generic, (1, 1), seed).unwrap();
        assert!(commutator_defect(&p, &q).unwrap() > 1e-6);
    }
    let a = gen_pair(4, PairMode::Generic, (2, 3), 99).unwrap();
    let b = gen_pair(4, PairMode::Generic, (2, 3), 99).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.0.rank(), 2);
    assert_eq!(a.1.rank(), 3);
    assert!(matches!(gen_pair(3, PairMode::Generic, (0, 1), 1), Err(Error::InvalidArgument(_))));
    assert!(matches!(gen_pair(3, PairMode::Commuting, (1, 3), 1), Err(Error::InvalidArgument(_))));
}

#[test]
fn spanning_set_spans_hermitian_operators() {
    for d in 2..=6 {
        let set = spanning_set(d);
        assert_eq!(set.len(), d * d);
        // Stack each rho as a real vector of length 2 d^2 and check rank d^2.
        let rows: Vec<Vec<f64>> = set
            .iter()
            .map(|p| p.rho.matrix().iter().flat_map(|z| [z.re, z.im]).collect())
            .collect();
        let m = nalgebra::DMatrix::from_fn(rows.len(), 2 * d * d, |i, j| rows[i][j]);
        assert_eq!(m.rank(1e-9), d * d);
    }
}

#[test]
fn experiment_examples() {
    let r = equivalence_experiment(&[2, 3], 8, 10, 5).unwrap();
    assert_eq!(r.trials.len(), 8);
    assert!(r.perfect());
    for t in &r.trials {
        match t.mode {
            PairMode::Commuting => {
                assert!(t.witness.is_none());
                let s = t.sampled_violations;
                assert!(s.order_exchange <= 1e-9 && s.ignored <= 1e-9 && s.nondisturbance <= 1e-9);
            }
            PairMode::Generic => assert!(t.witness.as_ref().unwrap().violation > 1e-6),
        }
    }
    let json = serde_json::to_value(&r).unwrap();
    assert!(json["trials"][0]["identity_defects"]["order_exchange"].is_number());
    assert_eq!(json["trials"][0]["mode"], "commuting");

    assert!(matches!(equivalence_experiment(&[2], 0, 1, 1), Err(Error::InvalidArgument(_))));
    assert!(matches!(equivalence_experiment(&[1], 2, 1, 1), Err(Error::InvalidArgument(_))));
    assert!(matches!(equivalence_experiment(&[], 2, 1, 1), Err(Error::InvalidArgument(_))));
}

#[test]
fn experiment_is_deterministic() {
    let a = equivalence_experiment(&[2, 4], 12, 5, 77).unwrap();
    let b = equivalence_experiment(&[2, 4], 12, 5, 77).unwrap();
    assert_eq!(a, b);
    let mut cfg = ExperimentConfig::new(vec![3], 4, 3, 1);
    cfg.tolerance = 0.0;
    assert!(run_experiment(&cfg).is_err());
}

#[test]
fn diag_vs_half_witness() {
    // Order exchange fails for diag(1,0) and the all-1/2 matrix at |0><0|.
    let (p, q) = (p_e1(), q_half());
    let probe = spanning_set(2).into_iter().find(|p| p.label == "|0>").unwrap();
    let l = seq_prob_q(&probe.rho, &[&p, &q]).unwrap();
    let r = seq_prob_q(&probe.rho, &[&q, &p]).unwrap();
    assert!((l - 0.5).abs() <= 1e-12 && (r - 0.25).abs() <= 1e-12);
}

fn any_pair() -> impl Strategy<Value = (usize, PairMode, usize, usize, u64)> {
    (2usize..=6, any::<bool>(), any::<u64>()).prop_flat_map(|(d, commuting, seed)| {
        let mode = if commuting { PairMode::Commuting } else { PairMode::Generic };
        (Just(d), Just(mode), 1..d, 1..d, Just(seed))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn constructed_projectors_are_valid((d, mode, r1, r2, seed) in any_pair()) {
        let (p, q) = gen_pair(d, mode, (r1, r2), seed).unwrap();
        for x in [&p, &q] {
            let (herm, idem) = x.invariant_defects();
            prop_assert!(herm <= CONSTRUCTION_TOL && idem <= CONSTRUCTION_TOL, "{herm} {idem}");
            prop_assert!((x.matrix().trace().re - x.rank() as f64).abs() <= CONSTRUCTION_TOL * d as f64);
            prop_assert!(Projector::from_matrix(x.matrix().clone(), CONSTRUCTION_TOL).is_ok());
        }
    }

    #[test]
    fn pair_form_iff_commuting((d, mode, r1, r2, seed) in any_pair()) {
        let (p, q) = gen_pair(d, mode, (r1, r2), seed).unwrap();
        let commutes = commutator_defect(&p, &q).unwrap() <= IDENTITY_TOL;
        let nd = criterion_identity_check(CriterionKind::NonDisturbance, Operand::Single(&p), Operand::Single(&q), IDENTITY_TOL).unwrap();
        prop_assert_eq!(nd.holds, commutes);
        prop_assert_eq!(commutes, mode == PairMode::Commuting);
    }

    #[test]
    fn lueders_output_is_a_density((d, mode, r1, r2, seed) in any_pair()) {
        let (p, _) = gen_pair(d, mode, (r1, r2), seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x55);
        let rho = random_pure_state(d, &mut rng);
        if let Ok(out) = lueders_condition(&rho, &p, IDENTITY_TOL) {
            prop_assert!(DensityOp::new(out.matrix().clone(), CONSTRUCTION_TOL).is_ok());
            prop_assert!((out.expectation(&p).unwrap() - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn family_completeness((d, mode, r1, r2, seed) in any_pair()) {
        let (p, q) = gen_pair(d, mode, (r1, r2), seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = gaussian_vector(d, &mut rng);
        let rho = DensityOp::pure(&v).unwrap();
        let prefix = seq_prob_q(&rho, &[&p]).unwrap();
        let fam = ProjectorFamily::binary(&q);
        let total: f64 = fam.members().iter().map(|qs| seq_prob_q(&rho, &[&p, qs]).unwrap()).sum();
        prop_assert!((total - prefix).abs() <= 1e-9);
    }

    #[test]
    fn sampled_and_identity_agree(seed in any::<u64>(), d in 2usize..=5) {
        let r = equivalence_experiment(&[d], 2, 3, seed).unwrap();
        prop_assert!(r.perfect(), "{:?}", r.confusion);
    }
}
