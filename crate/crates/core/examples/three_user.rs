//! Three-user out-of-band alignment by linear algebra: a random point of the
//! nullspace of the alignment equations, checked against the desired-signal
//! inequalities.

use interalign::channel::{sample_exact, Mode};
use interalign::schemes::{solve_3user_linear, verify_alignment, SchemeKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    for reciprocal in [true, false] {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let ch = sample_exact(3, 1, Mode::OutOfBand, reciprocal, &mut rng).unwrap();
        let lin = solve_3user_linear(&ch, 0, &mut rng).expect("generic channel");
        let d = &lin.diagnostics;
        println!(
            "reciprocal={reciprocal}: {} unknowns, {} equations, rank {}, nullspace {}, bad subspaces {:?}, {} draw(s)",
            d.unknowns, d.equations, d.rank, d.nullspace_dim, d.bad_subspace_dims, d.attempts
        );
        let report = verify_alignment(&ch, SchemeKind::ThreePhase, &lin.solution).unwrap();
        println!("  verified: {}", report.passed());
        for (i, l) in lin.solution.lambda.iter().enumerate() {
            println!("  lambda[{}] ~ {:.4}", i + 1, l.to_complex());
        }
    }
}
