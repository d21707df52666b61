//! Buchberger completion, ideal membership, and a feasibility decision for a
//! system with an inequality.

use interalign::algebra::{
    buchberger, contains_unit, ideal_membership, MonomialOrder, PolyRing, PrimeField,
};
use interalign::feasibility::{decide, rabinowitsch, DecideConfig};
use interalign::schemes::{AlignmentSystem, SchemeKind, SystemKind};

fn main() {
    let field = PrimeField::new(32003).unwrap();
    let vars = vec!["x".to_string(), "y".to_string(), "z".to_string()];
    let ring = PolyRing::new(field, vars, MonomialOrder::GrevLex);
    let gens: Vec<_> = ["x^2 + y^2 + z^2 - 1", "x*y - z", "x - y"]
        .iter()
        .map(|s| ring.parse(s).unwrap())
        .collect();

    let gb = buchberger(&gens).unwrap();
    println!("reduced basis ({} elements):", gb.len());
    for g in &gb.polys {
        println!("  {g}");
    }
    let f = ring.parse("y^2 - z").unwrap();
    println!("y^2 - z in ideal: {}", ideal_membership(&f, &gb).unwrap());
    println!("ideal is proper: {}", !contains_unit(&gb));

    // Same equalities, plus the requirement z != 0 replaced by t z - 1 = 0.
    let sys = AlignmentSystem {
        scheme: SchemeKind::ThreePhase,
        kind: SystemKind::Alignment,
        k: 0,
        m: 1,
        ring: ring.clone(),
        equalities: gens.clone(),
        inequalities: vec![ring.parse("z").unwrap()],
        coding_vars: 3,
    };
    let reduced = rabinowitsch(&sys);
    for e in &reduced.equalities {
        println!("  {e} = 0");
    }
    let v = decide(&reduced, &DecideConfig::default()).unwrap();
    println!("with z != 0: {:?} ({} reductions)", v.outcome, v.reductions);

    // x = y and z = x y with z = 0 forces x = 0; adding x != 0 is infeasible.
    let sys = AlignmentSystem {
        inequalities: vec![ring.parse("x").unwrap()],
        equalities: vec![
            ring.parse("x*y - z").unwrap(),
            ring.parse("x - y").unwrap(),
            ring.parse("z").unwrap(),
        ],
        ..sys
    };
    let v = decide(&rabinowitsch(&sys), &DecideConfig::default()).unwrap();
    println!("with z = 0, x != 0: {:?}", v.outcome);
}
