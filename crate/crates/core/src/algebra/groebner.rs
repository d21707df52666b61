//! Buchberger's algorithm with normal pair selection and the Gebauer–Möller
//! pair criteria, followed by inter-reduction. A batched variant reduces all
//! pairs of the lowest degree at once by sparse row elimination.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;
use std::time::{Duration, Instant};

use super::poly::{sub_shifted_tail, Term};
use super::{AlgebraError, Field, Monomial, PolyRing, Polynomial};

/// Resource caps for one run. `None` means unlimited.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Budget {
    pub max_basis: Option<usize>,
    pub max_reductions: Option<u64>,
    pub max_time: Option<Duration>,
    /// Cap on the stored entries of one batched reduction matrix.
    pub max_matrix_entries: Option<usize>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn reductions(n: u64) -> Self {
        Budget {
            max_reductions: Some(n),
            ..Budget::default()
        }
    }
}

#[derive(Clone, Debug)]
pub struct GroebnerConfig {
    pub budget: Budget,
    /// Return the reduced basis. When false the output keeps the input
    /// generators alongside everything the completion added.
    pub reduce: bool,
    /// Stop as soon as a nonzero constant enters the basis.
    pub stop_on_unit: bool,
    pub strategy: Strategy,
}

/// How S-pairs are reduced.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    /// One pair at a time by polynomial division.
    #[default]
    Pairwise,
    /// Every pair of the lowest lcm degree at once, as rows of a sparse
    /// matrix in echelon form. Meant for degree orders: under lex the
    /// preprocessing can pull in reducers of far higher degree than the
    /// pairwise run ever touches.
    Batched,
}

impl Default for GroebnerConfig {
    fn default() -> Self {
        GroebnerConfig {
            budget: Budget::unlimited(),
            reduce: true,
            stop_on_unit: true,
            strategy: Strategy::Pairwise,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct GroebnerStats {
    pub pairs_created: u64,
    pub pairs_skipped: u64,
    pub reductions: u64,
    pub zero_reductions: u64,
    pub max_basis: usize,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroebnerBasis<F: Field> {
    pub polys: Vec<Polynomial<F>>,
    pub generators: Vec<Polynomial<F>>,
    pub reduced: bool,
}

impl<F: Field> GroebnerBasis<F> {
    pub fn ring(&self) -> &Arc<PolyRing<F>> {
        self.generators[0].ring()
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// Remainder of `f` on division by the basis.
    pub fn normal_form(&self, f: &Polynomial<F>) -> Result<Polynomial<F>, AlgebraError> {
        if self.polys.is_empty() {
            return Ok(f.clone());
        }
        Ok(super::divide_multivariate(f, &self.polys)?.1)
    }
}

#[derive(Clone, Debug)]
pub enum GroebnerOutcome<F: Field> {
    Complete {
        basis: GroebnerBasis<F>,
        stats: GroebnerStats,
    },
    /// A cap was hit. `partial` is the working basis at that moment: it
    /// generates the same ideal but is not necessarily a Gröbner basis.
    BudgetExhausted {
        partial: Vec<Polynomial<F>>,
        stats: GroebnerStats,
    },
}

impl<F: Field> GroebnerOutcome<F> {
    pub fn basis(&self) -> Option<&GroebnerBasis<F>> {
        match self {
            GroebnerOutcome::Complete { basis, .. } => Some(basis),
            GroebnerOutcome::BudgetExhausted { .. } => None,
        }
    }

    pub fn into_basis(self) -> Option<GroebnerBasis<F>> {
        match self {
            GroebnerOutcome::Complete { basis, .. } => Some(basis),
            GroebnerOutcome::BudgetExhausted { .. } => None,
        }
    }

    pub fn stats(&self) -> &GroebnerStats {
        match self {
            GroebnerOutcome::Complete { stats, .. }
            | GroebnerOutcome::BudgetExhausted { stats, .. } => stats,
        }
    }

    pub fn is_exhausted(&self) -> bool {
        matches!(self, GroebnerOutcome::BudgetExhausted { .. })
    }
}

/// `lcm/LT(p) * p - lcm/LT(q) * q`.
pub fn s_polynomial<F: Field>(
    p: &Polynomial<F>,
    q: &Polynomial<F>,
) -> Result<Polynomial<F>, AlgebraError> {
    let ((mp, cp), (mq, cq)) = match (p.leading_term(), q.leading_term()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(AlgebraError::ZeroPolynomial),
    };
    p.checked_sub(q).map(|_| ())?;
    let field = p.field();
    let l = mp.lcm(mq);
    let a = p.mul_term(&mp.quotient_of(&l).unwrap(), &field.inv(cp).unwrap());
    let b = q.mul_term(&mq.quotient_of(&l).unwrap(), &field.inv(cq).unwrap());
    Ok(&a - &b)
}

/// Gröbner basis with no resource limits.
pub fn buchberger<F: Field>(
    generators: &[Polynomial<F>],
) -> Result<GroebnerBasis<F>, AlgebraError> {
    let cfg = GroebnerConfig {
        stop_on_unit: false,
        ..GroebnerConfig::default()
    };
    Ok(buchberger_with(generators, &cfg)?
        .into_basis()
        .expect("unlimited budget"))
}

fn support_mask(m: &Monomial) -> u64 {
    m.exponents()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .fold(0u64, |acc, (i, _)| acc | 1 << (i % 64))
}

struct Elem<F: Field> {
    terms: Vec<Term<F>>,
    mask: u64,
    active: bool,
}

impl<F: Field> Elem<F> {
    fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

struct Stop;

struct Run<'a, F: Field> {
    field: &'a F,
    ring: &'a Arc<PolyRing<F>>,
    cfg: &'a GroebnerConfig,
    start: Instant,
    stats: GroebnerStats,
    ticks: u32,
}

impl<F: Field> Run<'_, F> {
    fn check_time(&mut self) -> Result<(), Stop> {
        self.ticks = self.ticks.wrapping_add(1);
        if self.ticks.is_multiple_of(256) {
            if let Some(t) = self.cfg.budget.max_time {
                if self.start.elapsed() > t {
                    return Err(Stop);
                }
            }
        }
        Ok(())
    }

    /// Full reduction of `p` by the active elements; the result is monic.
    fn normal_form(
        &mut self,
        mut p: Vec<Term<F>>,
        basis: &[Elem<F>],
    ) -> Result<Vec<Term<F>>, Stop> {
        let order = self.ring.order;
        let mut rem: Vec<Term<F>> = Vec::new();
        let mut start = 0;
        while start < p.len() {
            self.check_time()?;
            let (lm, lc) = (&p[start].0, &p[start].1);
            let lmask = support_mask(lm);
            let mut best: Option<(usize, Monomial)> = None;
            for (k, g) in basis.iter().enumerate() {
                if !g.active || g.mask & !lmask != 0 {
                    continue;
                }
                if let Some(q) = g.lm().quotient_of(lm) {
                    if best
                        .as_ref()
                        .is_none_or(|(b, _)| basis[*b].terms.len() > g.terms.len())
                    {
                        best = Some((k, q));
                    }
                }
            }
            match best {
                Some((k, q)) => {
                    let c = lc.clone();
                    p = sub_shifted_tail(self.field, order, &p[start..], &c, &q, &basis[k].terms);
                    start = 0;
                }
                None => {
                    rem.push(p[start].clone());
                    start += 1;
                }
            }
        }
        Ok(make_monic(self.field, rem))
    }
}

fn make_monic<F: Field>(field: &F, mut terms: Vec<Term<F>>) -> Vec<Term<F>> {
    if let Some((_, lc)) = terms.first() {
        if !field.is_one(lc) {
            let inv = field.inv(lc).expect("nonzero leading coefficient");
            for t in terms.iter_mut() {
                t.1 = field.mul(&t.1, &inv);
            }
        }
    }
    terms
}

/// Gebauer–Möller update: add `basis[h]`, prune old pairs, add new ones.
fn update<F: Field>(
    basis: &mut [Elem<F>],
    pairs: &mut Vec<Pair>,
    h: usize,
    stats: &mut GroebnerStats,
) {
    let hm = basis[h].lm().clone();
    let cands: Vec<(usize, Monomial, bool)> = basis[..h]
        .iter()
        .enumerate()
        .filter(|(_, g)| g.active)
        .map(|(i, g)| (i, g.lm().lcm(&hm), g.lm().is_coprime(&hm)))
        .collect();
    stats.pairs_created += cands.len() as u64;
    // Among the new pairs: drop those whose lcm is properly divided by
    // another new lcm, then keep one pair per distinct lcm unless some pair
    // with that lcm has coprime leading monomials, in which case drop them all.
    let mut fresh: Vec<Pair> = Vec::new();
    for a in 0..cands.len() {
        let lcm = &cands[a].1;
        let dominated = cands.iter().any(|c| c.1 != *lcm && c.1.divides(lcm));
        let group_coprime = cands.iter().any(|c| c.1 == *lcm && c.2);
        let duplicate = fresh.iter().any(|p| p.lcm == *lcm);
        if dominated || group_coprime || duplicate {
            stats.pairs_skipped += 1;
            continue;
        }
        fresh.push(Pair {
            i: cands[a].0,
            j: h,
            lcm: lcm.clone(),
        });
    }
    // Old pairs made redundant by the new leading monomial.
    let before = pairs.len();
    pairs.retain(|p| {
        !(hm.divides(&p.lcm)
            && basis[p.i].lm().lcm(&hm) != p.lcm
            && basis[p.j].lm().lcm(&hm) != p.lcm)
    });
    stats.pairs_skipped += (before - pairs.len()) as u64;
    pairs.extend(fresh);
    for g in basis[..h].iter_mut() {
        if g.active && hm.divides(g.lm()) {
            g.active = false;
        }
    }
}

/// Buchberger's algorithm under the ring's monomial order.
pub fn buchberger_with<F: Field>(
    generators: &[Polynomial<F>],
    cfg: &GroebnerConfig,
) -> Result<GroebnerOutcome<F>, AlgebraError> {
    let first = generators.first().ok_or(AlgebraError::AllZeroGenerators)?;
    for g in generators {
        first.checked_sub(g).map(|_| ())?;
    }
    let inputs: Vec<Polynomial<F>> = generators
        .iter()
        .filter(|g| !g.is_zero())
        .cloned()
        .collect();
    if inputs.is_empty() {
        return Err(AlgebraError::AllZeroGenerators);
    }
    let ring = first.ring().clone();
    let field = &ring.field;
    let order = ring.order;
    let mut run = Run {
        field,
        ring: &ring,
        cfg,
        start: Instant::now(),
        stats: GroebnerStats::default(),
        ticks: 0,
    };
    let mut basis: Vec<Elem<F>> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut unit = false;

    let result: Result<(), Stop> = (|| {
        let mut sorted = inputs.clone();
        sorted.sort_by(|a, b| {
            order.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap())
        });
        for g in &sorted {
            let h = run.normal_form(g.terms().to_vec(), &basis)?;
            if h.is_empty() {
                continue;
            }
            if push(&mut basis, &mut pairs, h, &mut run.stats) {
                unit = true;
                if cfg.stop_on_unit {
                    return Ok(());
                }
            }
        }
        if cfg.strategy == Strategy::Batched {
            return run.batched(&mut basis, &mut pairs, &mut unit);
        }
        loop {
            if let Some(t) = cfg.budget.max_time {
                if run.start.elapsed() > t {
                    return Err(Stop);
                }
            }
            // Normal selection: smallest lcm first; ties go to the oldest pair.
            let Some(best) = (0..pairs.len()).min_by(|&a, &b| {
                order
                    .cmp(&pairs[a].lcm, &pairs[b].lcm)
                    .then((pairs[a].j, pairs[a].i).cmp(&(pairs[b].j, pairs[b].i)))
            }) else {
                return Ok(());
            };
            let pair = pairs.swap_remove(best);
            if let Some(max) = cfg.budget.max_reductions {
                if run.stats.reductions >= max {
                    return Err(Stop);
                }
            }
            run.stats.reductions += 1;
            let s = spoly_terms(
                field,
                order,
                &basis[pair.i].terms,
                &basis[pair.j].terms,
                &pair.lcm,
            );
            let h = run.normal_form(s, &basis)?;
            if h.is_empty() {
                run.stats.zero_reductions += 1;
                continue;
            }
            if push(&mut basis, &mut pairs, h, &mut run.stats) {
                unit = true;
                if cfg.stop_on_unit {
                    return Ok(());
                }
            }
            if let Some(max) = cfg.budget.max_basis {
                if basis.iter().filter(|g| g.active).count() > max {
                    return Err(Stop);
                }
            }
        }
    })();

    run.stats.elapsed = run.start.elapsed();
    let to_poly = |t: Vec<Term<F>>| Polynomial::from_sorted(ring.clone(), t);
    if result.is_err() {
        let mut partial = inputs.clone();
        partial.extend(basis.into_iter().map(|e| to_poly(e.terms)));
        return Ok(GroebnerOutcome::BudgetExhausted {
            partial,
            stats: run.stats,
        });
    }

    let polys = if unit {
        // The reduced basis of the unit ideal is {1}.
        if cfg.reduce {
            vec![ring.one()]
        } else {
            let mut all = inputs.clone();
            all.extend(basis.into_iter().map(|e| to_poly(e.terms)));
            all
        }
    } else if cfg.reduce {
        interreduce(&mut run, basis)
            .into_iter()
            .map(to_poly)
            .collect()
    } else {
        let mut all = inputs.clone();
        all.extend(basis.into_iter().map(|e| to_poly(e.terms)));
        all
    };
    run.stats.elapsed = run.start.elapsed();
    Ok(GroebnerOutcome::Complete {
        basis: GroebnerBasis {
            polys,
            generators: inputs,
            reduced: cfg.reduce,
        },
        stats: run.stats,
    })
}

impl<F: Field> Run<'_, F> {
    fn out_of_time(&self) -> bool {
        self.cfg
            .budget
            .max_time
            .is_some_and(|t| self.start.elapsed() > t)
    }

    fn batched(
        &mut self,
        basis: &mut Vec<Elem<F>>,
        pairs: &mut Vec<Pair>,
        unit: &mut bool,
    ) -> Result<(), Stop> {
        let field = self.field;
        let order = self.ring.order;
        while !pairs.is_empty() {
            if self.out_of_time() {
                return Err(Stop);
            }
            if let Some(max) = self.cfg.budget.max_reductions {
                if self.stats.reductions >= max {
                    return Err(Stop);
                }
            }
            let d = pairs.iter().map(|p| p.lcm.degree()).min().unwrap();
            let (sel, rest): (Vec<Pair>, Vec<Pair>) = std::mem::take(pairs)
                .into_iter()
                .partition(|p| p.lcm.degree() == d);
            *pairs = rest;
            self.stats.reductions += sel.len() as u64;

            // Rows are (multiplier, basis index); the first `n_spair` come from pairs.
            let mut rows: Vec<(Monomial, usize)> = Vec::new();
            let mut seen: HashSet<(Monomial, usize)> = HashSet::new();
            for p in &sel {
                for idx in [p.i, p.j] {
                    let q = basis[idx].lm().quotient_of(&p.lcm).unwrap();
                    if seen.insert((q.clone(), idx)) {
                        rows.push((q, idx));
                    }
                }
            }
            let n_spair = rows.len();

            // Symbolic preprocessing: one reducer row for every reducible
            // monomial that is not already a leading monomial.
            let mut done: HashSet<Monomial> =
                rows.iter().map(|(q, i)| basis[*i].lm().mul(q)).collect();
            let mut cols: HashSet<Monomial> = HashSet::new();
            let mut queue: Vec<Monomial> = Vec::new();
            let note = |q: &Monomial,
                        terms: &[Term<F>],
                        cols: &mut HashSet<Monomial>,
                        queue: &mut Vec<Monomial>| {
                for (m, _) in terms {
                    let mm = m.mul(q);
                    if cols.insert(mm.clone()) {
                        queue.push(mm);
                    }
                }
            };
            let cap = self.cfg.budget.max_matrix_entries.unwrap_or(usize::MAX);
            let mut entries = 0usize;
            for (q, i) in &rows {
                note(q, &basis[*i].terms, &mut cols, &mut queue);
                entries += basis[*i].terms.len();
            }
            while let Some(m) = queue.pop() {
                if entries > cap || self.out_of_time() {
                    return Err(Stop);
                }
                if !done.insert(m.clone()) {
                    continue;
                }
                let mask = support_mask(&m);
                let mut best: Option<(usize, Monomial)> = None;
                for (k, g) in basis.iter().enumerate() {
                    if !g.active || g.mask & !mask != 0 {
                        continue;
                    }
                    if let Some(q) = g.lm().quotient_of(&m) {
                        if best
                            .as_ref()
                            .is_none_or(|(b, _)| basis[*b].terms.len() > g.terms.len())
                        {
                            best = Some((k, q));
                        }
                    }
                }
                if let Some((k, q)) = best {
                    note(&q, &basis[k].terms, &mut cols, &mut queue);
                    entries += basis[k].terms.len();
                    rows.push((q, k));
                }
            }

            let mut monos: Vec<Monomial> = cols.into_iter().collect();
            monos.sort_by(|a, b| order.cmp(b, a));
            let col_of: HashMap<&Monomial, u32> = monos
                .iter()
                .enumerate()
                .map(|(c, m)| (m, c as u32))
                .collect();
            let sparse = |q: &Monomial, i: usize| -> Vec<(u32, F::Elem)> {
                basis[i]
                    .terms
                    .iter()
                    .map(|(m, c)| (col_of[&m.mul(q)], c.clone()))
                    .collect()
            };

            // Pivots: every reducer row, then the first pair row for each
            // leading column still free. The other pair rows get reduced.
            let ncols = monos.len();
            let mut pivot: Vec<Option<usize>> = vec![None; ncols];
            let mut prow: Vec<Vec<(u32, F::Elem)>> = Vec::new();
            let mut todo: Vec<Vec<(u32, F::Elem)>> = Vec::new();
            for (q, i) in rows[n_spair..].iter().chain(&rows[..n_spair]) {
                let r = sparse(q, *i);
                let lead = r[0].0 as usize;
                if pivot[lead].is_none() {
                    pivot[lead] = Some(prow.len());
                    prow.push(r);
                } else {
                    todo.push(r);
                }
            }
            drop(rows);

            log::trace!(
                "degree {d}: {} pairs, {} pivot rows, {} rows to reduce, {ncols} columns, {entries} entries, basis {}",
                sel.len(),
                prow.len(),
                todo.len(),
                basis.iter().filter(|g| g.active).count(),
            );
            let mut dense: Vec<F::Elem> = vec![field.zero(); ncols];
            let mut fresh: Vec<Vec<(u32, F::Elem)>> = Vec::new();
            for r in todo {
                if self.out_of_time() {
                    return Err(Stop);
                }
                let start = r[0].0 as usize;
                for (c, v) in r {
                    dense[c as usize] = v;
                }
                let mut out: Vec<(u32, F::Elem)> = Vec::new();
                for c in start..ncols {
                    if field.is_zero(&dense[c]) {
                        continue;
                    }
                    let coef = std::mem::replace(&mut dense[c], field.zero());
                    match pivot[c] {
                        Some(p) => {
                            for (cc, v) in &prow[p][1..] {
                                let slot = &mut dense[*cc as usize];
                                *slot = field.sub_mul(slot, &coef, v);
                            }
                        }
                        None => out.push((c as u32, coef)),
                    }
                }
                if out.is_empty() {
                    self.stats.zero_reductions += 1;
                    continue;
                }
                let inv = field.inv(&out[0].1).expect("nonzero lead");
                for t in out.iter_mut() {
                    t.1 = field.mul(&t.1, &inv);
                }
                entries += out.len();
                if entries > cap {
                    return Err(Stop);
                }
                pivot[out[0].0 as usize] = Some(prow.len());
                prow.push(out.clone());
                fresh.push(out);
            }

            // Largest leading monomial first, so that a later divisor
            // deactivates the earlier multiples.
            fresh.sort_by_key(|r| r[0].0);
            for r in fresh {
                let terms: Vec<Term<F>> = r
                    .into_iter()
                    .map(|(c, v)| (monos[c as usize].clone(), v))
                    .collect();
                if push(basis, pairs, terms, &mut self.stats) {
                    *unit = true;
                    if self.cfg.stop_on_unit {
                        return Ok(());
                    }
                }
            }
            if let Some(max) = self.cfg.budget.max_basis {
                if basis.iter().filter(|g| g.active).count() > max {
                    return Err(Stop);
                }
            }
        }
        Ok(())
    }
}

/// Returns true when the new element is a constant.
fn push<F: Field>(
    basis: &mut Vec<Elem<F>>,
    pairs: &mut Vec<Pair>,
    h: Vec<Term<F>>,
    stats: &mut GroebnerStats,
) -> bool {
    let is_unit = h.len() == 1 && h[0].0.is_one();
    let mask = support_mask(&h[0].0);
    basis.push(Elem {
        terms: h,
        mask,
        active: true,
    });
    let idx = basis.len() - 1;
    update(basis, pairs, idx, stats);
    stats.max_basis = stats
        .max_basis
        .max(basis.iter().filter(|g| g.active).count());
    is_unit
}

fn spoly_terms<F: Field>(
    field: &F,
    order: super::MonomialOrder,
    p: &[Term<F>],
    q: &[Term<F>],
    lcm: &Monomial,
) -> Vec<Term<F>> {
    // Both are monic, so the leading terms cancel with unit coefficients.
    let up = p[0].0.quotient_of(lcm).unwrap();
    let uq = q[0].0.quotient_of(lcm).unwrap();
    let shifted: Vec<Term<F>> = p.iter().map(|(m, c)| (m.mul(&up), c.clone())).collect();
    sub_shifted_tail(field, order, &shifted, &field.one(), &uq, q)
}

fn interreduce<F: Field>(run: &mut Run<'_, F>, basis: Vec<Elem<F>>) -> Vec<Vec<Term<F>>> {
    let mut min: Vec<Elem<F>> = basis.into_iter().filter(|g| g.active).collect();
    let lms: Vec<Monomial> = min.iter().map(|g| g.lm().clone()).collect();
    let mut idx = 0;
    min.retain(|g| {
        let me = idx;
        idx += 1;
        !lms.iter()
            .enumerate()
            .any(|(o, m)| o != me && m.divides(g.lm()) && (m != g.lm() || o < me))
    });
    let order = run.ring.order;
    min.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
    let mut out = Vec::with_capacity(min.len());
    for k in 0..min.len() {
        min[k].active = false;
        let lead = min[k].terms[0].clone();
        let tail = min[k].terms[1..].to_vec();
        let mut reduced_tail = run.normal_form_unbounded(tail, &min);
        let mut terms = vec![lead];
        terms.append(&mut reduced_tail);
        min[k].terms = terms.clone();
        min[k].active = true;
        out.push(terms);
    }
    out
}

impl<F: Field> Run<'_, F> {
    /// Reduction without monic normalisation or time checks.
    fn normal_form_unbounded(&mut self, mut p: Vec<Term<F>>, basis: &[Elem<F>]) -> Vec<Term<F>> {
        let order = self.ring.order;
        let mut rem: Vec<Term<F>> = Vec::new();
        let mut start = 0;
        while start < p.len() {
            let lm = &p[start].0;
            let lmask = support_mask(lm);
            let hit = basis.iter().find_map(|g| {
                if !g.active || g.mask & !lmask != 0 {
                    return None;
                }
                g.lm().quotient_of(lm).map(|q| (g, q))
            });
            match hit {
                Some((g, q)) => {
                    let c = p[start].1.clone();
                    p = sub_shifted_tail(self.field, order, &p[start..], &c, &q, &g.terms);
                    start = 0;
                }
                None => {
                    rem.push(p[start].clone());
                    start += 1;
                }
            }
        }
        rem
    }
}

/// True iff the basis contains a nonzero constant.
pub fn contains_unit<F: Field>(basis: &GroebnerBasis<F>) -> bool {
    basis.polys.iter().any(|p| p.is_unit())
}

/// True iff `f` reduces to zero modulo the basis.
pub fn ideal_membership<F: Field>(
    f: &Polynomial<F>,
    basis: &GroebnerBasis<F>,
) -> Result<bool, AlgebraError> {
    Ok(basis.normal_form(f)?.is_zero())
}
