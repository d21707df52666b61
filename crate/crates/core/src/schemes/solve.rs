//! Constructive solutions: the rank-1-plus-diagonal closed form and the
//! linear-algebra constructions with random nullspace sampling.

use rand::Rng;

use super::system::{alignment_equalities, coding_var_index};
use super::{
    build_alignment_system, check_mode, linear_coefficients, verify_alignment, AlignmentSolution,
    SchemeError, SchemeKind,
};
use crate::algebra::{Field, MonomialOrder, RandomElem};
use crate::channel::{ChannelError, ChannelInstance};
use crate::linalg::Mat;

/// Retry cap for the nullspace sampler.
pub const MAX_SAMPLER_ATTEMPTS: usize = 64;

/// Largest block size `solve_mimo` accepts by default.
pub const DEFAULT_MIMO_CAP: usize = 3;

/// Coding matrices of the closed-form neutralizing solution for
/// `H = D + u v^T`, `G = H^T`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedForm<F: Field> {
    pub d1: Mat<F>,
    pub d2: Mat<F>,
    pub d3: Mat<F>,
    /// `3 + 3s + s^2` with `s = v^T D^-1 u`; the effective matrix is `(1 - alpha) D`.
    pub alpha: F::Elem,
}

impl<F: Field> ClosedForm<F> {
    pub fn coding(&self) -> Vec<Mat<F>> {
        vec![self.d1.clone(), self.d2.clone(), self.d3.clone()]
    }
}

/// `D1 = D^-1 diag(u)^-1 diag(v)`, `D3 = D^-1 diag(v)^-1 diag(u)`, `D2 = -alpha I`.
pub fn solve_rank1_closed_form<F: Field>(
    field: &F,
    d: &[F::Elem],
    u: &[F::Elem],
    v: &[F::Elem],
) -> Result<ClosedForm<F>, SchemeError> {
    let k = d.len();
    if u.len() != k || v.len() != k {
        return Err(SchemeError::Structure(
            "D, u and v must have the same length".into(),
        ));
    }
    let hyp = |what: &str, i: usize| {
        SchemeError::Channel(ChannelError::Hypothesis(format!(
            "{what} is zero at index {i}"
        )))
    };
    for (name, xs) in [("D", d), ("u", u), ("v", v)] {
        if let Some(i) = xs.iter().position(|x| field.is_zero(x)) {
            return Err(hyp(name, i));
        }
    }
    let inv = |x: &F::Elem| field.inv(x).expect("checked nonzero");
    let s = (0..k).fold(field.zero(), |acc, i| {
        field.add(&acc, &field.mul(&field.mul(&v[i], &u[i]), &inv(&d[i])))
    });
    let three = field.from_i64(3);
    let alpha = field.add(
        &field.add(&three, &field.mul(&three, &s)),
        &field.mul(&s, &s),
    );
    if field.is_zero(&field.sub(&alpha, &field.one())) {
        return Err(SchemeError::Degenerate(
            "3 + 3 v^T D^-1 u + (v^T D^-1 u)^2 = 1".into(),
        ));
    }
    let d1: Vec<_> = (0..k)
        .map(|i| field.mul(&field.mul(&inv(&d[i]), &inv(&u[i])), &v[i]))
        .collect();
    let d3: Vec<_> = (0..k)
        .map(|i| field.mul(&field.mul(&inv(&d[i]), &inv(&v[i])), &u[i]))
        .collect();
    let d2 = vec![field.neg(&alpha); k];
    Ok(ClosedForm {
        d1: Mat::diag(field, &d1),
        d2: Mat::diag(field, &d2),
        d3: Mat::diag(field, &d3),
        alpha,
    })
}

/// Rank data gathered while building a linear solution.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct LinearDiagnostics {
    pub unknowns: usize,
    pub equations: usize,
    pub rank: usize,
    pub nullspace_dim: usize,
    /// Dimension of each inequality's zero set inside the solution space.
    pub bad_subspace_dims: Vec<usize>,
    /// Random draws used by the sampler (1 = first draw accepted).
    pub attempts: usize,
}

#[derive(Clone, Debug)]
pub struct LinearSolution<F: Field> {
    pub solution: AlignmentSolution<F>,
    pub diagnostics: LinearDiagnostics,
}

/// Draws random combinations of `basis` until `accept` holds.
pub fn sample_nullspace_point<F: RandomElem, R: Rng + ?Sized>(
    field: &F,
    basis: &[Vec<F::Elem>],
    rng: &mut R,
    mut accept: impl FnMut(&[F::Elem]) -> bool,
) -> Result<(Vec<F::Elem>, usize), SchemeError> {
    let Some(len) = basis.first().map(Vec::len) else {
        return Err(SchemeError::SamplerExhausted { attempts: 0 });
    };
    for attempt in 1..=MAX_SAMPLER_ATTEMPTS {
        let mut z = vec![field.zero(); len];
        for b in basis {
            let c = field.random_nonzero_elem(rng);
            for (zi, bi) in z.iter_mut().zip(b) {
                *zi = field.add(zi, &field.mul(&c, bi));
            }
        }
        if accept(&z) {
            return Ok((z, attempt));
        }
    }
    Err(SchemeError::SamplerExhausted {
        attempts: MAX_SAMPLER_ATTEMPTS,
    })
}

/// Like [`sample_nullspace_point`] without materializing a basis: each
/// attempt asks `a` for the kernel vector with random free coordinates.
fn sample_kernel_point<F: RandomElem, R: Rng + ?Sized>(
    field: &F,
    a: &Mat<F>,
    nullity: usize,
    rng: &mut R,
    mut accept: impl FnMut(&[F::Elem]) -> bool,
) -> Result<(Vec<F::Elem>, usize), SchemeError> {
    if nullity == 0 {
        return Err(SchemeError::SamplerExhausted { attempts: 0 });
    }
    for attempt in 1..=MAX_SAMPLER_ATTEMPTS {
        let coeffs: Vec<F::Elem> = (0..nullity)
            .map(|_| field.random_nonzero_elem(rng))
            .collect();
        let z = a.nullspace_combination(&coeffs);
        if accept(&z) {
            return Ok((z, attempt));
        }
    }
    Err(SchemeError::SamplerExhausted {
        attempts: MAX_SAMPLER_ATTEMPTS,
    })
}

/// Places the values of every coding variable (in ring order) into matrices.
fn coding_from_values<F: Field>(
    field: &F,
    slots: usize,
    k: usize,
    m: usize,
    values: &[F::Elem],
) -> Vec<Mat<F>> {
    let n = k * m;
    (0..slots)
        .map(|s| {
            let mut d = Mat::zeros(field, n, n);
            for node in 0..k {
                for a in 0..m {
                    for b in 0..m {
                        d.set(
                            node * m + a,
                            node * m + b,
                            values[coding_var_index(s, node, a, b, k, m)].clone(),
                        );
                    }
                }
            }
            d
        })
        .collect()
}

fn stack_row<F: Field>(a: &Mat<F>, row: &[F::Elem]) -> Mat<F> {
    let mut rows = a.to_rows();
    rows.push(row.to_vec());
    Mat::from_rows(a.field(), rows)
}

/// The three-user out-of-band construction: pin `D1 = e_pin e_pin^T`, which
/// makes the three alignment equalities linear in the six entries of
/// `(D2, D3)`, then pick a nullspace point off every inequality's zero set.
pub fn solve_3user_linear<F: RandomElem, R: Rng + ?Sized>(
    ch: &ChannelInstance<F>,
    pin: usize,
    rng: &mut R,
) -> Result<LinearSolution<F>, SchemeError> {
    let kind = SchemeKind::ThreePhase;
    check_mode(ch, kind)?;
    if ch.k != 3 || ch.m != 1 {
        return Err(SchemeError::Unsupported(format!(
            "the linear construction needs K=3, M=1 (got K={}, M={})",
            ch.k, ch.m
        )));
    }
    assert!(pin < 3, "pin index out of range");
    let f = ch.field();
    let sys = build_alignment_system(ch, kind, MonomialOrder::GrevLex)?;
    let mut values: Vec<Option<F::Elem>> = vec![None; 9];
    for (i, v) in values.iter_mut().enumerate().take(3) {
        *v = Some(if i == pin { f.one() } else { f.zero() });
    }
    let unknowns: Vec<usize> = (3..9).collect();
    let eqs: Vec<_> = sys
        .equalities
        .iter()
        .map(|p| p.specialize(&values))
        .collect();
    let ineqs: Vec<_> = sys
        .inequalities
        .iter()
        .map(|p| p.specialize(&values))
        .collect();
    let a = linear_coefficients(&eqs, &unknowns)?;
    let c = linear_coefficients(&ineqs, &unknowns)?;
    let rank = a.rank();
    if rank != 3 {
        return Err(SchemeError::NonGeneric(format!(
            "alignment coefficient matrix has rank {rank}, expected 3"
        )));
    }
    let mut bad = Vec::new();
    for i in 0..3 {
        let r = stack_row(&a, c.row(i)).rank();
        if r != 4 {
            return Err(SchemeError::NonGeneric(format!(
                "inequality {} leaves augmented rank {r}, expected 4",
                i + 1
            )));
        }
        bad.push(6 - r);
    }
    let basis = a.nullspace();
    let (z, attempts) = sample_nullspace_point(f, &basis, rng, |z| {
        c.mul_vec(z).iter().all(|x| !f.is_zero(x))
    })?;
    let mut full: Vec<F::Elem> = values
        .iter()
        .map(|v| v.clone().unwrap_or_else(|| f.zero()))
        .collect();
    full[3..].clone_from_slice(&z);
    let coding = coding_from_values(f, 3, 3, 1, &full);
    let solution = checked_solution(ch, kind, coding)?;
    Ok(LinearSolution {
        solution,
        diagnostics: LinearDiagnostics {
            unknowns: 6,
            equations: 3,
            rank,
            nullspace_dim: basis.len(),
            bad_subspace_dims: bad,
            attempts,
        },
    })
}

fn checked_solution<F: Field>(
    ch: &ChannelInstance<F>,
    kind: SchemeKind,
    coding: Vec<Mat<F>>,
) -> Result<AlignmentSolution<F>, SchemeError> {
    let sol = AlignmentSolution::from_coding(ch, kind, coding)?;
    let rep = verify_alignment(ch, kind, &sol)?;
    if !rep.passed() {
        let what: Vec<_> = rep.failures().iter().map(|c| c.label.clone()).collect();
        return Err(SchemeError::NonGeneric(format!(
            "constructed point fails {}",
            what.join("; ")
        )));
    }
    Ok(sol)
}

/// Nullspace of the in-band alignment equations in all `3K M^2` unknowns,
/// with the rank data. Works for any K and M.
pub fn inband_nullspace<F: Field>(
    ch: &ChannelInstance<F>,
) -> Result<(Mat<F>, Vec<Vec<F::Elem>>), SchemeError> {
    let a = inband_coefficients(ch)?;
    let basis = a.nullspace();
    Ok((a, basis))
}

fn inband_coefficients<F: Field>(ch: &ChannelInstance<F>) -> Result<Mat<F>, SchemeError> {
    let (ring, _, eqs) = alignment_equalities(ch, SchemeKind::InBand, MonomialOrder::GrevLex)?;
    let unknowns: Vec<usize> = (0..ring.nvars()).collect();
    linear_coefficients(&eqs, &unknowns)
}

/// Single-antenna in-band construction for K = 3, 4.
pub fn solve_inband_linear<F: RandomElem, R: Rng + ?Sized>(
    ch: &ChannelInstance<F>,
    rng: &mut R,
) -> Result<LinearSolution<F>, SchemeError> {
    let kind = SchemeKind::InBand;
    check_mode(ch, kind)?;
    let k = ch.k;
    if ch.m != 1 {
        return Err(SchemeError::Unsupported("use solve_mimo for M > 1".into()));
    }
    let f = ch.field();
    let sys = build_alignment_system(ch, kind, MonomialOrder::GrevLex)?;
    let unknowns: Vec<usize> = (0..3 * k).collect();
    let a = linear_coefficients(&sys.equalities, &unknowns)?;
    let basis = a.nullspace();
    if !(3..=4).contains(&k) {
        return Err(SchemeError::Unsupported(format!(
            "the two-phase in-band construction covers K=3,4; for K={k} the alignment nullspace has dimension {}",
            basis.len()
        )));
    }
    let rank = a.cols() - basis.len();
    if rank != k * (k - 2) {
        return Err(SchemeError::NonGeneric(format!(
            "alignment rank {rank}, expected {}",
            k * (k - 2)
        )));
    }
    let c = linear_coefficients(&sys.inequalities, &unknowns)?;
    let mut bad = Vec::new();
    for i in 0..k {
        let r = stack_row(&a, c.row(i)).rank();
        if r != rank + 1 {
            return Err(SchemeError::NonGeneric(format!(
                "inequality {} lies in the alignment row space",
                i + 1
            )));
        }
        bad.push(3 * k - r);
    }
    let (z, attempts) = sample_nullspace_point(f, &basis, rng, |z| {
        c.mul_vec(z).iter().all(|x| !f.is_zero(x))
    })?;
    let coding = coding_from_values(f, 3, k, 1, &z);
    let solution = checked_solution(ch, kind, coding)?;
    Ok(LinearSolution {
        solution,
        diagnostics: LinearDiagnostics {
            unknowns: 3 * k,
            equations: sys.equalities.len(),
            rank,
            nullspace_dim: basis.len(),
            bad_subspace_dims: bad,
            attempts,
        },
    })
}

/// Four-user block-diagonal in-band construction. Each destination's
/// combining matrix must be nonsingular.
pub fn solve_mimo<F: RandomElem, R: Rng + ?Sized>(
    ch: &ChannelInstance<F>,
    cap: usize,
    rng: &mut R,
) -> Result<LinearSolution<F>, SchemeError> {
    let kind = SchemeKind::InBand;
    check_mode(ch, kind)?;
    let (k, m) = (ch.k, ch.m);
    if k != 4 {
        return Err(SchemeError::Unsupported(format!(
            "the MIMO construction is for K=4, got K={k}"
        )));
    }
    if m > cap {
        return Err(SchemeError::Unsupported(format!(
            "M={m} exceeds the configured cap {cap}"
        )));
    }
    let f = ch.field();
    let a = inband_coefficients(ch)?;
    let rank = a.rank();
    let nullity = a.cols() - rank;
    let mut singular = 0;
    let (z, attempts) = sample_kernel_point(f, &a, nullity, rng, |z| {
        let coding = coding_from_values(f, 3, k, m, z);
        match AlignmentSolution::from_coding(ch, kind, coding) {
            Ok(sol) => match sol.combining.iter().position(|c| f.is_zero(&c.det())) {
                Some(i) => {
                    singular = i;
                    false
                }
                None => true,
            },
            Err(_) => false,
        }
    })
    .map_err(|e| match e {
        SchemeError::SamplerExhausted { .. } => SchemeError::SingularCombining {
            destination: singular + 1,
        },
        other => other,
    })?;
    let coding = coding_from_values(f, 3, k, m, &z);
    let solution = checked_solution(ch, kind, coding)?;
    Ok(LinearSolution {
        solution,
        diagnostics: LinearDiagnostics {
            unknowns: a.cols(),
            equations: a.rows(),
            rank,
            nullspace_dim: nullity,
            bad_subspace_dims: Vec::new(),
            attempts,
        },
    })
}
