//! Symbolic alignment and neutralization systems.

use std::fmt::Write as _;
use std::sync::Arc;

use super::{
    block_of, check_mode, compose, interferers, witness, MatAlgebra, SchemeError, SchemeKind,
};
use crate::algebra::{Field, MonomialOrder, PolyRing, Polynomial};
use crate::channel::ChannelInstance;
use crate::linalg::Mat;

/// Dense matrix of polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMat<F: Field> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Polynomial<F>>,
}

impl<F: Field> PolyMat<F> {
    pub fn from_const(ring: &Arc<PolyRing<F>>, m: &Mat<F>) -> Self {
        let data = (0..m.rows())
            .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
            .map(|(i, j)| ring.constant(m.get(i, j).clone()))
            .collect();
        PolyMat {
            rows: m.rows(),
            cols: m.cols(),
            data,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial<F> {
        &self.data[i * self.cols + j]
    }

    /// Block-diagonal matrix of fresh variables for coding slot `slot`.
    fn coding(ring: &Arc<PolyRing<F>>, slot: usize, k: usize, m: usize) -> Self {
        let n = k * m;
        let mut data = vec![ring.zero(); n * n];
        for node in 0..k {
            for a in 0..m {
                for b in 0..m {
                    let (r, c) = (node * m + a, node * m + b);
                    data[r * n + c] = ring.var(coding_var_index(slot, node, a, b, k, m));
                }
            }
        }
        PolyMat {
            rows: n,
            cols: n,
            data,
        }
    }

    /// Determinant by cofactor expansion; meant for the small combining blocks.
    pub fn det(&self) -> Polynomial<F> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 1 {
            return self.data[0].clone();
        }
        let ring = self.data[0].ring().clone();
        let mut acc = ring.zero();
        for c in 0..n {
            let entry = self.get(0, c);
            if entry.is_zero() {
                continue;
            }
            let minor = PolyMat {
                rows: n - 1,
                cols: n - 1,
                data: (1..n)
                    .flat_map(|i| (0..n).filter(move |&j| j != c).map(move |j| (i, j)))
                    .map(|(i, j)| self.get(i, j).clone())
                    .collect(),
            };
            let term = entry * &minor.det();
            acc = if c % 2 == 0 {
                &acc + &term
            } else {
                &acc - &term
            };
        }
        acc
    }
}

impl<F: Field> MatAlgebra for PolyMat<F> {
    fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows);
        let ring = self.data[0].ring().clone();
        let mut data = Vec::with_capacity(self.rows * o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = ring.zero();
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), o.get(k, j));
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = &acc + &(a * b);
                }
                data.push(acc);
            }
        }
        PolyMat {
            rows: self.rows,
            cols: o.cols,
            data,
        }
    }

    fn add(&self, o: &Self) -> Self {
        PolyMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }
}

pub(crate) fn coding_var_index(
    slot: usize,
    node: usize,
    a: usize,
    b: usize,
    k: usize,
    m: usize,
) -> usize {
    slot * k * m * m + node * m * m + a * m + b
}

/// `d<slot>_<node>` for single antennas, `d<slot>_<node>_<row>_<col>` for blocks (1-based).
pub fn coding_var_name(slot: usize, node: usize, a: usize, b: usize, m: usize) -> String {
    if m == 1 {
        format!("d{}_{}", slot + 1, node + 1)
    } else {
        format!("d{}_{}_{}_{}", slot + 1, node + 1, a + 1, b + 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SystemKind {
    Alignment,
    Neutralization,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SystemCounts {
    pub n_v: usize,
    pub n_e: usize,
    pub n_ie: usize,
}

/// Equalities `f = 0` and inequalities `g != 0` over the coding-matrix
/// entries (plus any auxiliary variables appended later).
#[derive(Clone, Debug)]
pub struct AlignmentSystem<F: Field> {
    pub scheme: SchemeKind,
    pub kind: SystemKind,
    pub k: usize,
    pub m: usize,
    pub ring: Arc<PolyRing<F>>,
    pub equalities: Vec<Polynomial<F>>,
    pub inequalities: Vec<Polynomial<F>>,
    /// The first `coding_vars` ring variables are coding-matrix entries.
    pub coding_vars: usize,
}

impl<F: Field> AlignmentSystem<F> {
    pub fn counts(&self) -> SystemCounts {
        SystemCounts {
            n_v: self.ring.nvars(),
            n_e: self.equalities.len(),
            n_ie: self.inequalities.len(),
        }
    }

    /// Text dump: a variable line, then one polynomial per line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "# scheme {} {:?} K={} M={} field {}",
            self.scheme,
            self.kind,
            self.k,
            self.m,
            self.ring.field.describe()
        );
        let _ = writeln!(s, "# variables {}", self.ring.vars.join(","));
        let _ = writeln!(s, "# equalities {}", self.equalities.len());
        for p in &self.equalities {
            let _ = writeln!(s, "{p}");
        }
        let _ = writeln!(s, "# inequalities {}", self.inequalities.len());
        for p in &self.inequalities {
            let _ = writeln!(s, "{p}");
        }
        s
    }

    /// Evaluates every constraint at a point of the ring.
    pub fn satisfied_at(&self, point: &[F::Elem]) -> bool {
        let f = &self.ring.field;
        self.equalities
            .iter()
            .all(|p| f.is_zero(&p.evaluate(point)))
            && self
                .inequalities
                .iter()
                .all(|p| !f.is_zero(&p.evaluate(point)))
    }
}

fn coding_ring<F: Field>(
    ch: &ChannelInstance<F>,
    kind: SchemeKind,
    order: MonomialOrder,
) -> Arc<PolyRing<F>> {
    let (k, m) = (ch.k, ch.m);
    let mut vars = Vec::new();
    for slot in 0..kind.coding_count() {
        for node in 0..k {
            for a in 0..m {
                for b in 0..m {
                    vars.push(coding_var_name(slot, node, a, b, m));
                }
            }
        }
    }
    PolyRing::new(ch.field().clone(), vars, order)
}

fn symbolic_b<F: Field>(
    ch: &ChannelInstance<F>,
    kind: SchemeKind,
    ring: &Arc<PolyRing<F>>,
) -> Result<PolyMat<F>, SchemeError> {
    let lift = |m: &Mat<F>| PolyMat::from_const(ring, m);
    let d: Vec<PolyMat<F>> = (0..kind.coding_count())
        .map(|s| PolyMat::coding(ring, s, ch.k, ch.m))
        .collect();
    compose(
        kind,
        &lift(&ch.h),
        ch.g.as_ref().map(lift).as_ref(),
        ch.u.as_ref().map(lift).as_ref(),
        ch.w.as_ref().map(lift).as_ref(),
        &d,
    )
}

/// The ring, the symbolic `B` and the pivot-form equalities.
pub(crate) fn alignment_equalities<F: Field>(
    ch: &ChannelInstance<F>,
    kind: SchemeKind,
    order: MonomialOrder,
) -> Result<(Arc<PolyRing<F>>, PolyMat<F>, Vec<Polynomial<F>>), SchemeError> {
    check_mode(ch, kind)?;
    let ring = coding_ring(ch, kind, order);
    let b = symbolic_b(ch, kind, &ring)?;
    let h = &ch.h;
    let (k, m) = (ch.k, ch.m);
    let mut equalities = Vec::new();
    for r in 0..k * m {
        let js = interferers(r, k, m);
        let j0 = js[0];
        for &j in &js[1..] {
            equalities.push(&b.get(r, j0).scale(h.get(r, j)) - &b.get(r, j).scale(h.get(r, j0)));
        }
    }
    Ok((ring, b, equalities))
}

/// Cross-multiplied alignment system. For every receive row, the first
/// interfering column is the pivot and each other interferer gives
/// `B[r][j0] H[r][j] - B[r][j] H[r][j0]`. Single-antenna inequalities use
/// the witness column `(i mod K) + 1`; MIMO uses the determinant of the
/// row-scaled combining block.
pub fn build_alignment_system<F: Field>(
    ch: &ChannelInstance<F>,
    kind: SchemeKind,
    order: MonomialOrder,
) -> Result<AlignmentSystem<F>, SchemeError> {
    let (ring, b, equalities) = alignment_equalities(ch, kind, order)?;
    let h = &ch.h;
    let (k, m) = (ch.k, ch.m);
    let mut inequalities = Vec::new();
    for i in 0..k {
        if m == 1 {
            let j = witness(i, k);
            inequalities.push(&b.get(i, i).scale(h.get(i, j)) - &b.get(i, j).scale(h.get(i, i)));
        } else {
            let rows = block_of(i, m);
            let mut data = Vec::with_capacity(m * m);
            for r in rows.clone() {
                let j0 = interferers(r, k, m)[0];
                for c in rows.clone() {
                    data.push(&b.get(r, c).scale(h.get(r, j0)) - &b.get(r, j0).scale(h.get(r, c)));
                }
            }
            inequalities.push(
                PolyMat {
                    rows: m,
                    cols: m,
                    data,
                }
                .det(),
            );
        }
    }
    let coding_vars = ring.nvars();
    Ok(AlignmentSystem {
        scheme: kind,
        kind: SystemKind::Alignment,
        k,
        m,
        ring,
        equalities,
        inequalities,
        coding_vars,
    })
}

/// `B` diagonal with nonzero diagonal: `B[i][j] = 0` for `i != j`, `B[i][i] != 0`.
pub fn build_neutralization_system<F: Field>(
    ch: &ChannelInstance<F>,
    kind: SchemeKind,
    order: MonomialOrder,
) -> Result<AlignmentSystem<F>, SchemeError> {
    check_mode(ch, kind)?;
    if ch.m != 1 {
        return Err(SchemeError::Unsupported(
            "neutralization systems are built for single-antenna channels".into(),
        ));
    }
    let ring = coding_ring(ch, kind, order);
    let b = symbolic_b(ch, kind, &ring)?;
    let k = ch.k;
    let mut equalities = Vec::new();
    for i in 0..k {
        for j in 0..k {
            if i != j {
                equalities.push(b.get(i, j).clone());
            }
        }
    }
    let inequalities = (0..k).map(|i| b.get(i, i).clone()).collect();
    let coding_vars = ring.nvars();
    Ok(AlignmentSystem {
        scheme: kind,
        kind: SystemKind::Neutralization,
        k,
        m: 1,
        ring,
        equalities,
        inequalities,
        coding_vars,
    })
}

/// Coefficient matrix of polynomials that are homogeneous linear in the
/// variables `unknowns` (columns in that order). Any other term is an error.
pub fn linear_coefficients<F: Field>(
    polys: &[Polynomial<F>],
    unknowns: &[usize],
) -> Result<Mat<F>, SchemeError> {
    let ring = polys
        .first()
        .map(|p| p.ring().clone())
        .ok_or_else(|| SchemeError::Structure("empty system".into()))?;
    let f = &ring.field;
    let mut col_of = vec![usize::MAX; ring.nvars()];
    for (c, &v) in unknowns.iter().enumerate() {
        col_of[v] = c;
    }
    let mut out = Mat::zeros(f, polys.len(), unknowns.len());
    for (r, p) in polys.iter().enumerate() {
        for (mono, coef) in p.terms() {
            let e = mono.exponents();
            let var = (mono.degree() == 1).then(|| e.iter().position(|&x| x == 1).unwrap());
            match var {
                Some(v) if col_of[v] != usize::MAX => out.set(r, col_of[v], coef.clone()),
                _ => {
                    return Err(SchemeError::Structure(format!(
                        "polynomial {} is not linear in the unknowns",
                        r + 1
                    )))
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{GaussianRationals, PrimeField};
    use crate::channel::{sample_exact, sample_modular, Mode};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn three_phase_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for k in 3..=6 {
            let ch = sample_exact(k, 1, Mode::OutOfBand, true, &mut rng).unwrap();
            let c = build_alignment_system(&ch, SchemeKind::ThreePhase, MonomialOrder::GrevLex)
                .unwrap()
                .counts();
            assert_eq!(
                c,
                SystemCounts {
                    n_v: 3 * k,
                    n_e: k * (k - 2),
                    n_ie: k
                }
            );
            let c =
                build_neutralization_system(&ch, SchemeKind::ThreePhase, MonomialOrder::GrevLex)
                    .unwrap()
                    .counts();
            assert_eq!(
                c,
                SystemCounts {
                    n_v: 3 * k,
                    n_e: k * (k - 1),
                    n_ie: k
                }
            );
            let c = build_alignment_system(&ch, SchemeKind::TwoReverse, MonomialOrder::GrevLex)
                .unwrap()
                .counts();
            assert_eq!((c.n_v, c.n_e), (5 * k, k * (k - 2)));
        }
    }

    #[test]
    fn mimo_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let fp = PrimeField::new(1_000_003).unwrap();
        for m in 1..=2 {
            let ch = sample_modular(&fp, 4, m, Mode::InBand, false, &mut rng).unwrap();
            let c = build_alignment_system(&ch, SchemeKind::InBand, MonomialOrder::GrevLex)
                .unwrap()
                .counts();
            assert_eq!(
                c,
                SystemCounts {
                    n_v: 12 * m * m,
                    n_e: 12 * m * m - 4 * m,
                    n_ie: 4
                }
            );
        }
        let ch = sample_modular(&fp, 4, 3, Mode::InBand, false, &mut rng).unwrap();
        let (ring, _, eqs) =
            alignment_equalities(&ch, SchemeKind::InBand, MonomialOrder::GrevLex).unwrap();
        assert_eq!((ring.nvars(), eqs.len()), (108, 96));
    }

    #[test]
    fn equalities_are_ratio_conditions() {
        // Evaluate a random point: the cross-multiplied form vanishes iff the
        // ratios B/H agree, checked on a constructed aligned B.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let ch = sample_exact(3, 1, Mode::InBand, false, &mut rng).unwrap();
        let sys = build_alignment_system(&ch, SchemeKind::InBand, MonomialOrder::GrevLex).unwrap();
        // D1 = I, D2 = D3 = 0 gives B = H: every ratio is 1.
        let f = GaussianRationals;
        let mut pt = vec![f.zero(); 9];
        for v in pt.iter_mut().take(3) {
            *v = f.one();
        }
        assert!(sys.equalities.iter().all(|p| p.evaluate(&pt).is_zero()));
        assert!(sys.inequalities.iter().all(|p| p.evaluate(&pt).is_zero()));
    }

    #[test]
    fn mode_mismatch() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let ch = sample_exact(3, 1, Mode::InBand, false, &mut rng).unwrap();
        assert!(matches!(
            build_alignment_system(&ch, SchemeKind::ThreePhase, MonomialOrder::GrevLex),
            Err(SchemeError::ModeMismatch { .. })
        ));
    }
}
