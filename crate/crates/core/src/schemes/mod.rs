//! Transmission schemes: effective end-to-end matrices, alignment systems,
//! constructive solvers and verification.

mod plan;
mod solve;
mod system;

pub use plan::{multiphase_plan, MultiphasePlan};
pub use solve::{
    inband_nullspace, sample_nullspace_point, solve_3user_linear, solve_inband_linear, solve_mimo,
    solve_rank1_closed_form, ClosedForm, LinearDiagnostics, LinearSolution, DEFAULT_MIMO_CAP,
    MAX_SAMPLER_ATTEMPTS,
};
pub use system::{
    build_alignment_system, build_neutralization_system, coding_var_name, linear_coefficients,
    AlignmentSystem, PolyMat, SystemCounts, SystemKind,
};

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::algebra::Field;
use crate::channel::{matrix_json, ChannelError, ChannelInstance, JsonScalar, Mode};
use crate::linalg::Mat;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    /// Forward, one reverse slot, forward: `B = H D2 + H D3 G D1 H`.
    ThreePhase,
    /// Two reverse slots: `B = H D3 + H D4 G D1 H + H D5 G D2 H`.
    TwoReverse,
    /// Full-duplex two-phase scheme, block-diagonal for `M > 1`:
    /// `B = H D1 + H D2 U + W D3 H`.
    InBand,
    /// The general N-forward-phase scheme (counting only).
    MultiPhase { phases: usize },
}

impl SchemeKind {
    pub fn mode(self) -> Mode {
        match self {
            SchemeKind::InBand => Mode::InBand,
            _ => Mode::OutOfBand,
        }
    }

    /// Number of coding matrices `D1..Dn`.
    pub fn coding_count(self) -> usize {
        match self {
            SchemeKind::ThreePhase | SchemeKind::InBand => 3,
            SchemeKind::TwoReverse => 5,
            SchemeKind::MultiPhase { phases } => phases * phases - 1,
        }
    }

    pub fn forward_slots(self) -> usize {
        match self {
            SchemeKind::MultiPhase { phases } => phases,
            _ => 2,
        }
    }

    pub fn reverse_slots(self) -> usize {
        match self {
            SchemeKind::ThreePhase => 1,
            SchemeKind::TwoReverse => 2,
            SchemeKind::InBand => 0,
            SchemeKind::MultiPhase { phases } => phases - 1,
        }
    }

    pub fn spec(self, m: usize) -> SchemeSpec {
        SchemeSpec {
            kind: self,
            block: m,
            coding: (1..=self.coding_count()).map(|s| format!("D{s}")).collect(),
            forward_slots: self.forward_slots(),
            reverse_slots: self.reverse_slots(),
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemeKind::ThreePhase => write!(f, "three-phase"),
            SchemeKind::TwoReverse => write!(f, "two-reverse"),
            SchemeKind::InBand => write!(f, "two-phase-inband"),
            SchemeKind::MultiPhase { phases } => write!(f, "multi-phase:{phases}"),
        }
    }
}

impl FromStr for SchemeKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "three-phase" | "three-phase-oob" => Ok(SchemeKind::ThreePhase),
            "two-reverse" | "three-phase-oob-two-reverse" => Ok(SchemeKind::TwoReverse),
            "two-phase-inband" | "inband" | "two-phase-inband-mimo" | "inband-mimo" => {
                Ok(SchemeKind::InBand)
            }
            other => {
                if let Some(n) = other.strip_prefix("multi-phase:") {
                    let phases: usize = n.parse().map_err(|_| format!("bad phase count `{n}`"))?;
                    if phases == 0 {
                        return Err("multi-phase needs at least one phase".into());
                    }
                    Ok(SchemeKind::MultiPhase { phases })
                } else {
                    Err(format!(
                        "unknown scheme `{other}` (expected three-phase, two-reverse, two-phase-inband, multi-phase:N)"
                    ))
                }
            }
        }
    }
}

/// Slot counts and the coding-matrix catalog of a scheme.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeSpec {
    pub kind: SchemeKind,
    /// Block size of the (block-)diagonal coding matrices.
    pub block: usize,
    pub coding: Vec<String>,
    pub forward_slots: usize,
    pub reverse_slots: usize,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SchemeError {
    #[error("scheme {scheme} needs a {expected} channel")]
    ModeMismatch {
        scheme: SchemeKind,
        expected: &'static str,
    },
    #[error("coding matrices do not match the scheme structure: {0}")]
    Structure(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("non-generic channel instance: {0}")]
    NonGeneric(String),
    #[error("no admissible point found after {attempts} random draws")]
    SamplerExhausted { attempts: usize },
    #[error("degenerate channel: {0}")]
    Degenerate(String),
    #[error("combining matrix of destination {destination} is singular")]
    SingularCombining { destination: usize },
    #[error(transparent)]
    Channel(#[from] ChannelError),
}

/// Minimal matrix algebra shared by numeric and polynomial matrices, so the
/// scheme formulas are written once.
pub(crate) trait MatAlgebra: Sized {
    fn mul(&self, o: &Self) -> Self;
    fn add(&self, o: &Self) -> Self;
}

impl<F: Field> MatAlgebra for Mat<F> {
    fn mul(&self, o: &Self) -> Self {
        Mat::mul(self, o)
    }
    fn add(&self, o: &Self) -> Self {
        Mat::add(self, o)
    }
}

/// The scheme's end-to-end matrix from its coding matrices.
pub(crate) fn compose<T: MatAlgebra>(
    kind: SchemeKind,
    h: &T,
    g: Option<&T>,
    u: Option<&T>,
    w: Option<&T>,
    d: &[T],
) -> Result<T, SchemeError> {
    fn need<'a, T>(x: Option<&'a T>, name: &str) -> Result<&'a T, SchemeError> {
        x.ok_or_else(|| SchemeError::Structure(format!("channel has no {name} matrix")))
    }
    match kind {
        SchemeKind::ThreePhase => {
            let g = need(g, "G")?;
            Ok(h.mul(&d[1]).add(&h.mul(&d[2]).mul(&g.mul(&d[0]).mul(h))))
        }
        SchemeKind::TwoReverse => {
            let g = need(g, "G")?;
            let a = h.mul(&d[2]);
            let b = h.mul(&d[3]).mul(&g.mul(&d[0]).mul(h));
            let c = h.mul(&d[4]).mul(&g.mul(&d[1]).mul(h));
            Ok(a.add(&b).add(&c))
        }
        SchemeKind::InBand => {
            let (u, w) = (need(u, "U")?, need(w, "W")?);
            Ok(h.mul(&d[0])
                .add(&h.mul(&d[1]).mul(u))
                .add(&w.mul(&d[2]).mul(h)))
        }
        SchemeKind::MultiPhase { .. } => Err(SchemeError::Unsupported(
            "the multi-phase scheme is available as a counting plan only".into(),
        )),
    }
}

pub(crate) fn check_mode<F: Field>(
    ch: &ChannelInstance<F>,
    kind: SchemeKind,
) -> Result<(), SchemeError> {
    if ch.mode != kind.mode() {
        let expected = match kind.mode() {
            Mode::OutOfBand => "out-of-band",
            Mode::InBand => "in-band",
        };
        return Err(SchemeError::ModeMismatch {
            scheme: kind,
            expected,
        });
    }
    Ok(())
}

/// End-to-end matrix `B` for numeric coding matrices `D1..Dn`.
pub fn effective_matrix<F: Field>(
    ch: &ChannelInstance<F>,
    kind: SchemeKind,
    coding: &[Mat<F>],
) -> Result<Mat<F>, SchemeError> {
    check_mode(ch, kind)?;
    if coding.len() != kind.coding_count() {
        return Err(SchemeError::Structure(format!(
            "{kind} takes {} coding matrices, got {}",
            kind.coding_count(),
            coding.len()
        )));
    }
    let n = ch.dim();
    for (s, d) in coding.iter().enumerate() {
        if d.rows() != n || d.cols() != n {
            return Err(SchemeError::Structure(format!(
                "D{} is {}x{}, expected {n}x{n}",
                s + 1,
                d.rows(),
                d.cols()
            )));
        }
        if !d.is_block_diagonal(ch.m) {
            return Err(SchemeError::Structure(format!(
                "D{} has an entry outside its {}x{} diagonal blocks",
                s + 1,
                ch.m,
                ch.m
            )));
        }
    }
    compose(
        kind,
        &ch.h,
        ch.g.as_ref(),
        ch.u.as_ref(),
        ch.w.as_ref(),
        coding,
    )
}

/// Row indices belonging to destination `i`.
pub(crate) fn block_of(i: usize, m: usize) -> std::ops::Range<usize> {
    i * m..(i + 1) * m
}

/// Interfering columns for receive row `r` (all columns outside its user's block).
pub(crate) fn interferers(r: usize, k: usize, m: usize) -> Vec<usize> {
    let own = r / m;
    (0..k * m).filter(|c| c / m != own).collect()
}

/// Witness column for the single-antenna inequality of destination `i`.
pub(crate) fn witness(i: usize, k: usize) -> usize {
    (i + 1) % k
}

/// A numeric point of the solution family.
#[derive(Clone, Debug, PartialEq)]
pub struct AlignmentSolution<F: Field> {
    pub scheme: SchemeKind,
    /// `D1..Dn`.
    pub coding: Vec<Mat<F>>,
    /// Per receive antenna: the interference ratio `B[r][j] / H[r][j]`.
    pub lambda: Vec<F::Elem>,
    pub b: Mat<F>,
    /// Per destination, the `M x M` desired-signal matrix left after the
    /// combination `y'_r - lambda_r y_r`: entries `B[r][c] - lambda_r H[r][c]`.
    pub combining: Vec<Mat<F>>,
}

impl<F: Field> AlignmentSolution<F> {
    pub fn from_coding(
        ch: &ChannelInstance<F>,
        kind: SchemeKind,
        coding: Vec<Mat<F>>,
    ) -> Result<Self, SchemeError> {
        let b = effective_matrix(ch, kind, &coding)?;
        let (lambda, combining) = combine(ch, &b);
        Ok(AlignmentSolution {
            scheme: kind,
            coding,
            lambda,
            b,
            combining,
        })
    }

    /// Coding matrices, effective matrix, combining data and the
    /// verification outcome.
    pub fn to_json(&self, report: &VerificationReport<F>) -> Value
    where
        F: JsonScalar,
    {
        json!({
            "scheme": self.scheme.to_string(),
            "coding": self.coding.iter().map(matrix_json).collect::<Vec<_>>(),
            "B": matrix_json(&self.b),
            "lambda": self.lambda.iter().map(F::elem_json).collect::<Vec<_>>(),
            "combining": self.combining.iter().map(matrix_json).collect::<Vec<_>>(),
            "verification": {
                "passed": report.passed(),
                "equalities": report.equalities,
                "inequalities": report.inequalities,
            },
        })
    }

    /// Desired-signal coefficient of single-antenna destination `i`.
    pub fn desired(&self, i: usize) -> &F::Elem {
        self.combining[i].get(0, 0)
    }

    /// Same solution with `(D2, D3)` (three-phase) or the last `n-1`
    /// matrices multiplied by `c`.
    pub fn scaled_tail(&self, ch: &ChannelInstance<F>, c: &F::Elem) -> Result<Self, SchemeError> {
        let start = match self.scheme {
            SchemeKind::ThreePhase => 1,
            SchemeKind::TwoReverse => 2,
            _ => 0,
        };
        let coding = self
            .coding
            .iter()
            .enumerate()
            .map(|(s, d)| if s >= start { d.scale(c) } else { d.clone() })
            .collect();
        Self::from_coding(ch, self.scheme, coding)
    }
}

fn combine<F: Field>(ch: &ChannelInstance<F>, b: &Mat<F>) -> (Vec<F::Elem>, Vec<Mat<F>>) {
    let f = ch.field();
    let (k, m) = (ch.k, ch.m);
    let lambda: Vec<F::Elem> = (0..k * m)
        .map(|r| {
            let j0 = interferers(r, k, m)[0];
            f.div(b.get(r, j0), ch.h.get(r, j0))
                .unwrap_or_else(|| f.zero())
        })
        .collect();
    let combining = (0..k)
        .map(|i| {
            let rows = block_of(i, m);
            Mat::from_fn(f, m, m, |a, c| {
                let r = rows.start + a;
                let col = rows.start + c;
                f.sub(b.get(r, col), &f.mul(&lambda[r], ch.h.get(r, col)))
            })
        })
        .collect();
    (lambda, combining)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstraintCheck {
    pub label: String,
    pub pass: bool,
    /// Absolute value of the evaluated expression.
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport<F: Field> {
    pub equalities: Vec<ConstraintCheck>,
    pub inequalities: Vec<ConstraintCheck>,
    pub lambda: Vec<F::Elem>,
}

impl<F: Field> VerificationReport<F> {
    pub fn passed(&self) -> bool {
        self.equalities
            .iter()
            .chain(&self.inequalities)
            .all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&ConstraintCheck> {
        self.equalities
            .iter()
            .chain(&self.inequalities)
            .filter(|c| !c.pass)
            .collect()
    }
}

/// Re-derives `B` from the coding matrices and checks every cross-multiplied
/// alignment equality (all interferer pairs per receive antenna) and every
/// desired-signal inequality. Exact fields compare exactly; floats use a
/// relative tolerance against the row scale.
pub fn verify_alignment<F: Field>(
    ch: &ChannelInstance<F>,
    kind: SchemeKind,
    sol: &AlignmentSolution<F>,
) -> Result<VerificationReport<F>, SchemeError> {
    let f = ch.field();
    let b = effective_matrix(ch, kind, &sol.coding)?;
    let (k, m) = (ch.k, ch.m);
    let h = &ch.h;
    let mut equalities = Vec::new();
    let mut inequalities = Vec::new();
    for r in 0..k * m {
        let row_scale: f64 = (0..k * m).map(|c| f.magnitude(b.get(r, c))).sum::<f64>()
            * (0..k * m).map(|c| f.magnitude(h.get(r, c))).sum::<f64>();
        let js = interferers(r, k, m);
        for (a, &j) in js.iter().enumerate() {
            for &j2 in &js[a + 1..] {
                let v = f.sub(
                    &f.mul(b.get(r, j), h.get(r, j2)),
                    &f.mul(b.get(r, j2), h.get(r, j)),
                );
                let pass = if f.is_exact() {
                    f.is_zero(&v)
                } else {
                    f.near_zero(&v, row_scale)
                };
                equalities.push(ConstraintCheck {
                    label: format!("row {} cols {},{}", r + 1, j + 1, j2 + 1),
                    pass,
                    value: f.magnitude(&v),
                });
            }
        }
    }
    let (lambda, combining) = combine(ch, &b);
    for i in 0..k {
        if m == 1 {
            let j = witness(i, k);
            let v = f.sub(
                &f.mul(b.get(i, i), h.get(i, j)),
                &f.mul(b.get(i, j), h.get(i, i)),
            );
            let scale = (f.magnitude(b.get(i, i)) + f.magnitude(b.get(i, j)))
                * (f.magnitude(h.get(i, i)) + f.magnitude(h.get(i, j)));
            let pass = if f.is_exact() {
                !f.is_zero(&v)
            } else {
                !f.near_zero(&v, scale) && scale > 0.0
            };
            inequalities.push(ConstraintCheck {
                label: format!("destination {} desired", i + 1),
                pass,
                value: f.magnitude(&v),
            });
        } else {
            let c = &combining[i];
            let det = c.det();
            let scale: f64 = (0..m)
                .map(|a| (0..m).map(|bb| f.magnitude(c.get(a, bb))).sum::<f64>())
                .product();
            let pass = if f.is_exact() {
                !f.is_zero(&det)
            } else {
                !f.near_zero(&det, scale) && scale > 0.0
            };
            inequalities.push(ConstraintCheck {
                label: format!("destination {} combining determinant", i + 1),
                pass,
                value: f.magnitude(&det),
            });
        }
    }
    Ok(VerificationReport {
        equalities,
        inequalities,
        lambda,
    })
}
