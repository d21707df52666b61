mod common;

use common::*;
use interalign::algebra::{Field, MonomialOrder, PolyRing, PrimeField};
use interalign::channel::{sample_exact, sample_modular, AnyChannel, Mode};
use interalign::feasibility::*;
use interalign::schemes::{
    build_alignment_system, build_neutralization_system, solve_3user_linear, solve_inband_linear,
    AlignmentSystem, SchemeKind, SystemKind,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tiny_system(seed: u64) -> AlignmentSystem<PrimeField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = PrimeField::new(5).unwrap();
    let n = rng.random_range(1..=3);
    let ring = PolyRing::new(field, var_names(n), MonomialOrder::GrevLex);
    let mut coeff = |r: &mut ChaCha8Rng| field.random_elem(r);
    let eqs = (0..rng.random_range(1..=2))
        .map(|_| random_poly(&ring, 3, 2, &mut rng, &mut coeff))
        .collect();
    let ineqs = (0..rng.random_range(1..=2))
        .map(|_| random_poly(&ring, 3, 2, &mut rng, &mut coeff))
        .collect();
    AlignmentSystem {
        scheme: SchemeKind::ThreePhase,
        kind: SystemKind::Alignment,
        k: 0,
        m: 1,
        ring,
        equalities: eqs,
        inequalities: ineqs,
        coding_vars: n,
    }
}

fn solvable_over_f5(sys: &AlignmentSystem<PrimeField>) -> bool {
    grid(5, sys.ring.nvars()).any(|p| sys.satisfied_at(&p))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn rabinowitsch_preserves_solvability_over_f5(seed in any::<u64>()) {
        let sys = tiny_system(seed);
        let original = solvable_over_f5(&sys);
        for form in [InequalityForm::Product, InequalityForm::PerInequality] {
            let reduced = rabinowitsch_with(&sys, form);
            prop_assert!(reduced.inequalities.is_empty());
            prop_assert_eq!(solvable_over_f5(&reduced), original, "{:?}", form);
            // A point over F_5 is a point over the closure.
            if original {
                let v = decide(&reduced, &DecideConfig::default()).unwrap();
                prop_assert_eq!(v.outcome, Outcome::Feasible);
            }
        }
    }
}

fn modular_field(seed: u64) -> PrimeField {
    PrimeField::random_31bit(&mut ChaCha8Rng::seed_from_u64(seed))
}

#[test]
fn constructed_points_satisfy_the_system_and_decide_feasible() {
    for seed in 0..5 {
        let field = modular_field(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (mode, k) in [(Mode::OutOfBand, 3), (Mode::InBand, 3), (Mode::InBand, 4)] {
            let ch = sample_modular(&field, k, 1, mode, false, &mut rng).unwrap();
            let (kind, sol) = match mode {
                Mode::OutOfBand => (
                    SchemeKind::ThreePhase,
                    solve_3user_linear(&ch, 0, &mut rng).unwrap(),
                ),
                Mode::InBand => (
                    SchemeKind::InBand,
                    solve_inband_linear(&ch, &mut rng).unwrap(),
                ),
            };
            let sys = build_alignment_system(&ch, kind, MonomialOrder::GrevLex).unwrap();
            let point: Vec<u64> = sol
                .solution
                .coding
                .iter()
                .flat_map(|m| m.diagonal())
                .collect();
            assert!(sys.satisfied_at(&point), "{kind} K={k}");
            // Extend by 1/g for each auxiliary variable.
            let reduced = rabinowitsch_with(&sys, InequalityForm::PerInequality);
            let mut ext = point.clone();
            for g in &sys.inequalities {
                ext.push(field.inv(&g.evaluate(&point)).unwrap());
            }
            assert!(reduced.satisfied_at(&ext));
            let v = decide(
                &add_dimension_slices(&reduced, &mut rng),
                &DecideConfig::default(),
            )
            .unwrap();
            assert_eq!(v.outcome, Outcome::Feasible, "{kind} K={k}");
        }
    }
}

#[test]
fn decide_refuses_inequalities() {
    let sys = tiny_system(3);
    assert!(matches!(
        decide(&sys, &DecideConfig::default()),
        Err(FeasibilityError::InequalitiesPresent(_))
    ));
}

fn fixed_report(
    ch: AnyChannel,
    scheme: SchemeKind,
    system: SystemKind,
    backend: Backend,
) -> GenericityReport {
    let mut cfg =
        GenericityConfig::new(scheme, ChannelSource::Fixed(Box::new(ch)), 77).with_backend(backend);
    cfg.system = system;
    cfg.trials = 2;
    generic_feasibility(&cfg).unwrap()
}

#[test]
fn verdicts_are_invariant_under_user_relabeling() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cases = [
        (
            3,
            true,
            SchemeKind::ThreePhase,
            SystemKind::Alignment,
            Consensus::Feasible,
        ),
        (
            3,
            true,
            SchemeKind::ThreePhase,
            SystemKind::Neutralization,
            Consensus::Infeasible,
        ),
        (
            5,
            false,
            SchemeKind::ThreePhase,
            SystemKind::Alignment,
            Consensus::Infeasible,
        ),
    ];
    for (k, reciprocal, scheme, system, want) in cases {
        let ch = sample_exact(k, 1, Mode::OutOfBand, reciprocal, &mut rng).unwrap();
        let perm: Vec<usize> = (0..k).rev().collect();
        let moved = ch.permute_users(&perm);
        let counts = |c| match system {
            SystemKind::Alignment => build_alignment_system(c, scheme, MonomialOrder::GrevLex)
                .unwrap()
                .counts(),
            SystemKind::Neutralization => {
                build_neutralization_system(c, scheme, MonomialOrder::GrevLex)
                    .unwrap()
                    .counts()
            }
        };
        assert_eq!(counts(&ch), counts(&moved));
        let a = fixed_report(AnyChannel::Exact(ch), scheme, system, Backend::Modular);
        let b = fixed_report(AnyChannel::Exact(moved), scheme, system, Backend::Modular);
        assert_eq!(a.consensus, want, "K={k} {system:?}");
        assert_eq!(b.consensus, want, "K={k} {system:?} relabeled");
    }
}

#[test]
fn genericity_reports_are_deterministic() {
    let src = || ChannelSource::Generic {
        k: 4,
        m: 1,
        mode: Mode::OutOfBand,
        reciprocal: true,
    };
    let mut a = GenericityConfig::new(SchemeKind::ThreePhase, src(), 3);
    a.trials = 3;
    let mut b = a.clone();
    b.jobs = Some(1);
    let (ra, rb) = (
        generic_feasibility(&a).unwrap(),
        generic_feasibility(&b).unwrap(),
    );
    assert_eq!(
        serde_json::to_string(&ra).unwrap(),
        serde_json::to_string(&rb).unwrap()
    );
    assert_eq!(ra.consensus, Consensus::Feasible);
}
