//! In-band (full-duplex) alignment: single-antenna K=3 and K=4, the K=5
//! system with no nonzero solution, and block-diagonal MIMO for K=4.

use interalign::algebra::Field;
use interalign::algebra::GaussianRationals;
use interalign::channel::{sample_exact, Mode};
use interalign::schemes::{inband_nullspace, solve_inband_linear, solve_mimo, DEFAULT_MIMO_CAP};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for k in [3, 4] {
        let ch = sample_exact(k, 1, Mode::InBand, false, &mut rng).unwrap();
        let lin = solve_inband_linear(&ch, &mut rng).unwrap();
        let d = &lin.diagnostics;
        println!(
            "K={k}: rank {} of {} unknowns, nullspace {}",
            d.rank, d.unknowns, d.nullspace_dim
        );
    }

    let ch = sample_exact(5, 1, Mode::InBand, false, &mut rng).unwrap();
    let (a, basis) = inband_nullspace(&ch).unwrap();
    println!(
        "K=5: {} x {} system, nullspace dimension {}",
        a.rows(),
        a.cols(),
        basis.len()
    );

    let f = GaussianRationals;
    for m in 1..=2 {
        let ch = sample_exact(4, m, Mode::InBand, false, &mut rng).unwrap();
        let lin = solve_mimo(&ch, DEFAULT_MIMO_CAP, &mut rng).unwrap();
        let dets: Vec<String> = lin
            .solution
            .combining
            .iter()
            .map(|c| {
                let det = c.det();
                if f.is_zero(&det) {
                    "0".into()
                } else {
                    "nonzero".into()
                }
            })
            .collect();
        println!(
            "MIMO K=4 M={m}: nullity {} of {} unknowns, combining determinants {:?}",
            lin.diagnostics.nullspace_dim, lin.diagnostics.unknowns, dets
        );
    }
}
