//! Closed-form neutralization for `H = D + u v^T` with a reciprocal reverse
//! channel: the effective matrix comes out as `(1 - alpha) D`.

use interalign::algebra::{GaussRat, GaussianRationals};
use interalign::channel::{build_structured, StructuredFamily};
use interalign::linalg::Mat;
use interalign::schemes::{
    effective_matrix, solve_rank1_closed_form, verify_alignment, AlignmentSolution, SchemeKind,
};

fn show(m: &Mat<GaussianRationals>) {
    for row in m.to_rows() {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:>8}")).collect();
        println!("  [{}]", cells.join(" "));
    }
}

fn main() {
    let f = GaussianRationals;
    let d = vec![
        GaussRat::from_int(2),
        GaussRat::from_parts((1, 1), (1, 1)),
        GaussRat::from_int(-3),
    ];
    let u = vec![
        GaussRat::from_int(1),
        GaussRat::from_int(2),
        GaussRat::from_parts((1, 2), (0, 1)),
    ];
    let v = vec![
        GaussRat::from_int(3),
        GaussRat::from_parts((0, 1), (-1, 1)),
        GaussRat::from_int(1),
    ];

    let family = StructuredFamily::Rank1PlusDiagonal {
        d: d.clone(),
        u: u.clone(),
        v: v.clone(),
    };
    let ch = build_structured(&family).expect("valid family");
    let cf = solve_rank1_closed_form(&f, &d, &u, &v).expect("nonzero D, u, v");
    println!("alpha = {}", cf.alpha);

    let b = effective_matrix(&ch, SchemeKind::ThreePhase, &cf.coding()).unwrap();
    println!("B =");
    show(&b);

    let one_minus_alpha = &GaussRat::from_int(1) - &cf.alpha;
    let expect = Mat::diag(&f, &d).scale(&one_minus_alpha);
    assert_eq!(b, expect);
    println!("B == (1 - alpha) D exactly");

    // The all-ones channel is the case D = -I, u = v = 1.
    let k = 3;
    let ones = build_structured(&StructuredFamily::AllOnes { k }).unwrap();
    let cf = solve_rank1_closed_form(
        &f,
        &vec![GaussRat::from_int(-1); k],
        &vec![GaussRat::from_int(1); k],
        &vec![GaussRat::from_int(1); k],
    )
    .unwrap();
    let sol = AlignmentSolution::from_coding(&ones, SchemeKind::ThreePhase, cf.coding()).unwrap();
    let report = verify_alignment(&ones, SchemeKind::ThreePhase, &sol).unwrap();
    println!(
        "\nall-ones K={k}: alpha = {}, verified = {}",
        cf.alpha,
        report.passed()
    );
    println!("B =");
    show(&sol.b);
}
