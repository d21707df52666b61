//! Generic feasibility of the interactive schemes: random channel draws,
//! one Groebner-basis decision per draw, and a consensus verdict.

use interalign::channel::Mode;
use interalign::feasibility::{generic_feasibility, Backend, ChannelSource, GenericityConfig};
use interalign::schemes::{SchemeKind, SystemKind};

fn run(label: &str, cfg: GenericityConfig) {
    let r = generic_feasibility(&cfg).unwrap();
    let outcomes: Vec<String> = r
        .verdicts
        .iter()
        .map(|v| format!("{:?}", v.verdict.outcome))
        .collect();
    println!("{label}: {:?} [{}]", r.consensus, outcomes.join(", "));
}

fn main() {
    let generic = |k, reciprocal| ChannelSource::Generic {
        k,
        m: 1,
        mode: Mode::OutOfBand,
        reciprocal,
    };

    run(
        "K=4 three-phase, reciprocal",
        GenericityConfig::new(SchemeKind::ThreePhase, generic(4, true), 1),
    );
    run(
        "K=5 three-phase, reciprocal",
        GenericityConfig::new(SchemeKind::ThreePhase, generic(5, true), 1),
    );

    let mut cfg = GenericityConfig::new(SchemeKind::ThreePhase, generic(3, true), 1)
        .with_backend(Backend::Rational);
    cfg.system = SystemKind::Neutralization;
    cfg.trials = 2;
    run("K=3 neutralization over Q(i)", cfg);

    run(
        "symmetric zero-diagonal K=4",
        GenericityConfig::new(
            SchemeKind::ThreePhase,
            ChannelSource::SymmetricZeroDiagonal4,
            1,
        ),
    );
}
