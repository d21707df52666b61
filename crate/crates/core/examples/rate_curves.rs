//! Finite-SNR sum rate of three-phase alignment against time sharing, and
//! the counting plan for the multi-phase generalization.

use interalign::channel::Mode;
use interalign::ratesim::{curves_to_csv, dof_slope, monte_carlo_curves, CurveConfig, RateOptions};
use interalign::schemes::multiphase_plan;

fn main() {
    let cfg = CurveConfig {
        k: 3,
        mode: Mode::OutOfBand,
        reciprocal: false,
        snr_db: (0..=8).map(|i| 5.0 * i as f64).collect(),
        trials: 4,
        seed: 2,
        rate: RateOptions {
            restarts: 3,
            iterations: 150,
            ..RateOptions::default()
        },
        jobs: None,
    };
    let curves = monte_carlo_curves(&cfg).unwrap();
    print!("{}", curves_to_csv(&curves.points));

    let ia = dof_slope(&curves.points, 30.0, 40.0, |p| p.ia_sum_rate).unwrap();
    let ts = dof_slope(&curves.points, 30.0, 40.0, |p| p.ts_sum_rate).unwrap();
    println!("slope 30..40 dB: alignment {ia:.2}, time sharing {ts:.2}");

    println!("\nK  phases  variables  equations  DoF if solvable");
    for k in 3..=10 {
        let p = multiphase_plan(k);
        println!(
            "{:<2} {:>6} {:>10} {:>10} {:>16.3}",
            p.k, p.phases, p.n_v, p.n_e, p.conjectured_dof
        );
    }
}
