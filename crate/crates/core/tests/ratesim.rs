use interalign::algebra::{ComplexFloat, GaussRat, GaussianRationals};
use interalign::channel::{
    build_structured, sample_float, to_float, ChannelInstance, Mode, StructuredFamily,
};
use interalign::linalg::Mat;
use interalign::ratesim::*;
use interalign::schemes::{solve_rank1_closed_form, AlignmentSolution, SchemeKind};
use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn channel(k: usize, seed: u64) -> ChannelInstance<ComplexFloat> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_float(k, 1, Mode::OutOfBand, false, &mut rng).unwrap()
}

fn family_coding(ch: &ChannelInstance<ComplexFloat>, seed: u64) -> Coding {
    let fam = SolutionFamily::new(ch).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    fam.coding(&fam.sample(&mut rng).unwrap()).unwrap()
}

fn all_ones_k3() -> (
    ChannelInstance<ComplexFloat>,
    AlignmentSolution<ComplexFloat>,
) {
    let f = GaussianRationals;
    let cf = solve_rank1_closed_form(
        &f,
        &vec![GaussRat::from_int(-1); 3],
        &vec![GaussRat::from_int(1); 3],
        &vec![GaussRat::from_int(1); 3],
    )
    .unwrap();
    let ch = to_float(&build_structured(&StructuredFamily::AllOnes { k: 3 }).unwrap());
    let coding = cf
        .coding()
        .iter()
        .map(|m| m.map(&ComplexFloat, GaussRat::to_complex))
        .collect();
    let sol = AlignmentSolution::from_coding(&ch, SchemeKind::ThreePhase, coding).unwrap();
    (ch, sol)
}

#[test]
fn analytic_sinr_matches_noise_draws() {
    let mut checked = 0;
    for (k, seed) in [(3, 1), (3, 2), (3, 3), (4, 4), (4, 5), (4, 6)] {
        let ch = channel(k, seed);
        let model = Model::new(&ch).unwrap();
        let power = PowerConfig::from_snr_db(15.0);
        let (c, p_sym) = model.scale_to_power(&family_coding(&ch, seed), &power);
        let analytic = model.sinr(&c, p_sym, power.noise);
        let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
        let est = monte_carlo_sinr(&model, &c, p_sym, power.noise, 100_000, &mut rng);
        for (a, e) in analytic.iter().zip(&est.sinr) {
            assert!(
                (a - e.sinr).abs() <= 3.0 * e.std_err,
                "K={k} seed={seed}: analytic {a} vs {e:?}"
            );
            checked += 1;
        }
        let predicted = model.phase_powers(&c, p_sym, power.noise);
        for (ph, (p, m)) in predicted.iter().zip(&est.phase_powers).enumerate() {
            for (x, y) in p.iter().zip(m) {
                // Sample means of squared Gaussians: relative sd 1/sqrt(n).
                assert!(
                    (x - y).abs() <= 4.0 * x / (100_000f64).sqrt(),
                    "phase {ph}: {x} vs {y}"
                );
            }
        }
    }
    assert_eq!(checked, 21);
}

#[test]
fn all_ones_sinr_agrees_with_simulation() {
    let (ch, sol) = all_ones_k3();
    let power = PowerConfig::new(1e4, 1.0).unwrap();
    let analytic = effective_sinr(&ch, &sol, &power).unwrap();
    let model = Model::new(&ch).unwrap();
    let c = Coding::from_solution(&sol).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let est = monte_carlo_sinr(&model, &c, power.power, power.noise, 1_000_000, &mut rng);
    for (a, e) in analytic.iter().zip(&est.sinr) {
        assert!((a - e.sinr).abs() / a < 0.02, "{a} vs {}", e.sinr);
    }
}

#[test]
fn phase_three_only_combiner() {
    // Diagonal H: no interference, so with D3 = 0 and no phase-one term the
    // destination sees |B_ii|^2 P / noise with B = H D2.
    let f = ComplexFloat;
    let h = Mat::diag(
        &f,
        &[C64::new(1.0, 0.5), C64::new(-0.3, 2.0), C64::new(0.7, -0.7)],
    );
    let g = Mat::from_fn(&f, 3, 3, |i, j| C64::new((i + 2 * j) as f64 * 0.1, 0.3));
    let ch = ChannelInstance::new(3, 1, Mode::OutOfBand, h.clone(), Some(g), None, None).unwrap();
    let model = Model::new(&ch).unwrap();
    let d2 = vec![C64::new(2.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.5, 0.5)];
    let c = Coding {
        d1: vec![C64::new(0.4, 0.1); 3],
        d2: d2.clone(),
        d3: vec![C64::new(0.0, 0.0); 3],
    };
    let (p, noise) = (50.0, 2.0);
    let sinr = model.sinr_with_combiner(&c, &[C64::new(0.0, 0.0); 3], p, noise);
    for i in 0..3 {
        let want = (h.get(i, i) * d2[i]).norm_sqr() * p / noise;
        assert!((sinr[i] - want).abs() < 1e-9 * want);
    }
}

#[test]
fn noiseless_limit_diverges() {
    let (ch, sol) = all_ones_k3();
    let lo = effective_sinr(&ch, &sol, &PowerConfig::new(1.0, 1.0).unwrap()).unwrap();
    let hi = effective_sinr(&ch, &sol, &PowerConfig::new(1.0, 1e-12).unwrap()).unwrap();
    for (a, b) in lo.iter().zip(&hi) {
        assert!(*b > 1e11 * a);
    }
}

#[test]
fn unverified_solutions_are_rejected() {
    let (ch, sol) = all_ones_k3();
    let f = ComplexFloat;
    let mut coding = sol.coding.clone();
    coding[1] = Mat::diag(
        &f,
        &[C64::new(1.0, 0.0), C64::new(2.0, 0.0), C64::new(3.0, 0.0)],
    );
    let bad = AlignmentSolution::from_coding(&ch, SchemeKind::ThreePhase, coding).unwrap();
    let power = PowerConfig::from_snr_db(20.0);
    assert!(matches!(
        effective_sinr(&ch, &bad, &power),
        Err(RateError::Unverified(_))
    ));
    assert!(matches!(
        apply_power_constraints(&ch, &bad, &power),
        Err(RateError::Unverified(_))
    ));
    assert!(PowerConfig::new(0.0, 1.0).is_err());
    assert!(PowerConfig::new(1.0, -1.0).is_err());
}

#[test]
fn power_scaling_is_tight_and_feasible() {
    for seed in 0..10 {
        let ch = channel(3, seed);
        let sol = family_coding(&ch, seed).to_solution(&ch).unwrap();
        let power = PowerConfig::from_snr_db(20.0);
        let scaled = apply_power_constraints(&ch, &sol, &power).unwrap();
        let model = Model::new(&ch).unwrap();
        // Independent second moments from the scaled matrices themselves.
        let c = Coding::from_solution(&scaled.solution).unwrap();
        let phases = model.phase_powers(&c, scaled.p_sym, power.noise);
        assert_eq!(phases, scaled.phase_powers);
        for ph in &phases {
            let max = ph.iter().cloned().fold(0.0, f64::max);
            assert!(ph.iter().all(|&p| p <= power.power + 1e-9), "{ph:?}");
            assert!((max - power.power).abs() < 1e-6 * power.power, "{ph:?}");
        }
    }
}

#[test]
fn power_scaling_is_idempotent_and_torus_invariant() {
    let ch = channel(3, 21);
    let sol = family_coding(&ch, 21).to_solution(&ch).unwrap();
    let power = PowerConfig::from_snr_db(25.0);
    let once = apply_power_constraints(&ch, &sol, &power).unwrap();
    let twice = apply_power_constraints(&ch, &once.solution, &power).unwrap();
    let close = |a: &AlignmentSolution<ComplexFloat>, b: &AlignmentSolution<ComplexFloat>| {
        a.coding.iter().zip(&b.coding).all(|(x, y)| {
            x.diagonal()
                .iter()
                .zip(y.diagonal())
                .all(|(p, q)| (p - q).norm() <= 1e-9 * (1.0 + p.norm()))
        })
    };
    assert!(close(&once.solution, &twice.solution));
    // D1 -> a D1, D2 -> ab D2, D3 -> b D3 keeps alignment; the output must not move.
    let (a, b) = (C64::new(2.0, 1.0), C64::new(-0.5, 3.0));
    let coding = vec![
        sol.coding[0].scale(&a),
        sol.coding[1].scale(&(a * b)),
        sol.coding[2].scale(&b),
    ];
    let moved = AlignmentSolution::from_coding(&ch, SchemeKind::ThreePhase, coding).unwrap();
    let again = apply_power_constraints(&ch, &moved, &power).unwrap();
    let rates = |s: &PowerScaled| effective_sinr(&ch, &s.solution, &power).unwrap();
    for (x, y) in rates(&once).iter().zip(rates(&again)) {
        assert!((x - y).abs() <= 1e-9 * x);
    }
    for (x, y) in once
        .phase_powers
        .iter()
        .flatten()
        .zip(again.phase_powers.iter().flatten())
    {
        assert!((x - y).abs() <= 1e-9 * power.power);
    }
}

#[test]
fn sinr_grows_with_power() {
    for (k, seed) in [(3, 31), (4, 32)] {
        let ch = channel(k, seed);
        let model = Model::new(&ch).unwrap();
        let shape = family_coding(&ch, seed);
        let mut last = vec![0.0; k];
        for db in (0..=40).step_by(5) {
            let power = PowerConfig::from_snr_db(db as f64);
            let (c, p_sym) = model.scale_to_power(&shape, &power);
            let s = model.sinr(&c, p_sym, power.noise);
            for (x, y) in s.iter().zip(&last) {
                assert!(
                    *x >= *y * (1.0 - 1e-12),
                    "K={k} {db} dB: {s:?} after {last:?}"
                );
            }
            last = s;
        }
    }
}

#[test]
fn time_sharing_examples() {
    let p = PowerConfig::from_snr_db(30.0);
    let h = C64::new(0.6, -0.8);
    assert!((time_sharing_from_gains(&[h], &p, false) - (1.0 + p.power).log2()).abs() < 1e-12);
    let ones = to_float(&build_structured(&StructuredFamily::AllOnes { k: 4 }).unwrap());
    assert_eq!(time_sharing_rate(&ones, &p, false), 0.0);
    let ch = channel(3, 5);
    assert!(time_sharing_rate(&ch, &p, true) > time_sharing_rate(&ch, &p, false));
}

#[test]
fn rate_accounting_divisor() {
    assert_eq!(rate_divisor(false), 2.0);
    assert_eq!(rate_divisor(true), 3.0);
    let ch = channel(3, 8);
    let power = PowerConfig::from_snr_db(20.0);
    for charge in [false, true] {
        let opts = RateOptions {
            restarts: 1,
            iterations: 5,
            charge_feedback: charge,
            ..Default::default()
        };
        let r = optimize_sum_rate(&ch, &power, &opts, 3).unwrap().report;
        assert_eq!(r.divisor, rate_divisor(charge));
        let want: f64 = r.sinr.iter().map(|s| (1.0 + s).log2()).sum::<f64>() / r.divisor;
        assert!((r.sum_rate - want).abs() < 1e-12);
        assert!(r.rates.iter().all(|x| *x >= 0.0));
    }
}

#[test]
fn optimizer_seeded_point_and_monotone_trace() {
    for (k, seed) in [(3, 41), (4, 42)] {
        let ch = channel(k, seed);
        let power = PowerConfig::from_snr_db(20.0);
        let none = RateOptions {
            restarts: 1,
            iterations: 0,
            ..Default::default()
        };
        let seeded = optimize_sum_rate(&ch, &power, &none, 9).unwrap();
        let fam = SolutionFamily::new(&ch).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let (_, _, rate) = fam
            .evaluate(&fam.sample(&mut rng).unwrap(), &power, &none)
            .unwrap();
        assert_eq!(seeded.report.sum_rate, rate);

        let opts = RateOptions {
            restarts: 3,
            iterations: 60,
            ..Default::default()
        };
        let best = optimize_sum_rate(&ch, &power, &opts, 9).unwrap();
        assert!(best.report.sum_rate >= rate);
        for curve in &best.trace {
            assert!(curve.windows(2).all(|w| w[1] >= w[0]));
        }
        let again = optimize_sum_rate(&ch, &power, &opts, 9).unwrap();
        assert_eq!(best.report, again.report);
    }
}

#[test]
fn unsupported_shapes() {
    let power = PowerConfig::from_snr_db(10.0);
    let opts = RateOptions::default();
    assert!(matches!(
        optimize_sum_rate(&channel(5, 1), &power, &opts, 1),
        Err(RateError::Unsupported(_))
    ));
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let inband = sample_float(3, 1, Mode::InBand, false, &mut rng).unwrap();
    assert!(matches!(
        optimize_sum_rate(&inband, &power, &opts, 1),
        Err(RateError::Unsupported(_))
    ));
}

#[test]
fn curves_are_deterministic() {
    let cfg = |jobs| CurveConfig {
        k: 3,
        mode: Mode::OutOfBand,
        reciprocal: false,
        snr_db: parse_snr_grid("0:10:20").unwrap(),
        trials: 2,
        seed: 5,
        rate: RateOptions {
            restarts: 2,
            iterations: 20,
            ..Default::default()
        },
        jobs,
    };
    let a = monte_carlo_curves(&cfg(Some(1))).unwrap();
    let b = monte_carlo_curves(&cfg(None)).unwrap();
    assert_eq!(curves_to_csv(&a.points), curves_to_csv(&b.points));
    assert_eq!(a.details, b.details);
    let csv = curves_to_csv(&a.points);
    assert!(csv.starts_with("snr_db,ia_sum_rate,ts_sum_rate,trials\n"));
    assert_eq!(csv.lines().count(), 4);
}
