//! Sparse multivariate polynomials.
//!
//! A [`Polynomial`] keeps its terms sorted by decreasing monomial under the
//! order of its [`PolyRing`], with no zero coefficients, so the leading term
//! is always `terms[0]`.
//!
//! Text format: terms joined by `+` (a binary `-` is also read), each term
//! `coef*v1^e1*v2^e2...`.
//! Coefficients that contain sign or fraction characters (every Q(i)
//! coefficient) are wrapped in parentheses, e.g. `(1/2+-3/1*i)*x^2*y+(1/1+0/1*i)`.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use super::{AlgebraError, Field, Monomial, MonomialOrder};

pub type Term<F> = (Monomial, <F as Field>::Elem);

/// Coefficient field, variable catalog and monomial order.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyRing<F: Field> {
    pub field: F,
    pub vars: Vec<String>,
    pub order: MonomialOrder,
}

impl<F: Field> PolyRing<F> {
    pub fn new(field: F, vars: Vec<String>, order: MonomialOrder) -> Arc<Self> {
        Arc::new(PolyRing { field, vars, order })
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Same field and variables under another order.
    pub fn with_order(&self, order: MonomialOrder) -> Arc<Self> {
        Arc::new(PolyRing {
            field: self.field.clone(),
            vars: self.vars.clone(),
            order,
        })
    }

    /// Same field and order with extra variables appended (smallest in the order).
    pub fn extended(&self, extra: &[&str]) -> Arc<Self> {
        let mut vars = self.vars.clone();
        vars.extend(extra.iter().map(|s| s.to_string()));
        Arc::new(PolyRing {
            field: self.field.clone(),
            vars,
            order: self.order,
        })
    }

    pub fn zero(self: &Arc<Self>) -> Polynomial<F> {
        Polynomial {
            ring: self.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(self: &Arc<Self>, c: F::Elem) -> Polynomial<F> {
        self.term(Monomial::one(self.nvars()), c)
    }

    pub fn one(self: &Arc<Self>) -> Polynomial<F> {
        self.constant(self.field.one())
    }

    pub fn var(self: &Arc<Self>, idx: usize) -> Polynomial<F> {
        self.term(Monomial::var(self.nvars(), idx), self.field.one())
    }

    pub fn var_named(self: &Arc<Self>, name: &str) -> Result<Polynomial<F>, AlgebraError> {
        let idx = self
            .var_index(name)
            .ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))?;
        Ok(self.var(idx))
    }

    pub fn term(self: &Arc<Self>, m: Monomial, c: F::Elem) -> Polynomial<F> {
        assert_eq!(m.nvars(), self.nvars(), "monomial arity");
        if self.field.is_zero(&c) {
            return self.zero();
        }
        Polynomial {
            ring: self.clone(),
            terms: vec![(m, c)],
        }
    }

    /// Builds a canonical polynomial from arbitrary terms (duplicates are summed).
    pub fn from_terms(self: &Arc<Self>, mut terms: Vec<Term<F>>) -> Polynomial<F> {
        let order = self.order;
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let mut out: Vec<Term<F>> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = self.field.add(lc, &c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !self.field.is_zero(c));
        Polynomial {
            ring: self.clone(),
            terms: out,
        }
    }

    /// Parses the text format described in the module docs.
    pub fn parse(self: &Arc<Self>, s: &str) -> Result<Polynomial<F>, AlgebraError> {
        let s = s.trim();
        if s == "0" || s.is_empty() {
            return Ok(self.zero());
        }
        let mut terms = Vec::new();
        for (minus, term) in split_terms(s) {
            let term = term.trim();
            if term.is_empty() {
                return Err(AlgebraError::Parse(format!("empty term in `{s}`")));
            }
            let (neg, body) = match term.strip_prefix('-') {
                Some(rest) if rest.starts_with(|c: char| c.is_alphabetic() || c == '(') => {
                    (!minus, rest)
                }
                _ => (minus, term),
            };
            let mut coef = self.field.one();
            let mut exps = vec![0u16; self.nvars()];
            for factor in split_top_level(body, '*') {
                let factor = factor.trim();
                if factor.starts_with(|c: char| c.is_alphabetic() || c == '_') {
                    let (name, e) = match factor.split_once('^') {
                        Some((n, e)) => {
                            let e: u16 = e
                                .trim()
                                .parse()
                                .map_err(|_| AlgebraError::Parse(format!("bad exponent `{e}`")))?;
                            (n.trim(), e)
                        }
                        None => (factor, 1),
                    };
                    let idx = self
                        .var_index(name)
                        .ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))?;
                    exps[idx] += e;
                } else {
                    coef = self.field.mul(&coef, &self.field.parse_elem(factor)?);
                }
            }
            if neg {
                coef = self.field.neg(&coef);
            }
            terms.push((Monomial::from_exponents(&exps), coef));
        }
        Ok(self.from_terms(terms))
    }
}

fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                parts.push(&s[start..i]);
                start = i + ch.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

/// Splits a sum into terms at top-level `+` and binary `-`, flagging the
/// terms that follow a `-`.
fn split_terms(s: &str) -> Vec<(bool, &str)> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut minus = false;
    let chars: Vec<(usize, char)> = s.char_indices().collect();
    for (k, &(i, ch)) in chars.iter().enumerate() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' | '-' if depth == 0 => {
                let before = chars[..k]
                    .iter()
                    .rev()
                    .map(|&(_, c)| c)
                    .find(|c| !c.is_whitespace());
                // A sign at the start, after an operator, or in a float
                // exponent belongs to the number that follows.
                let exponent =
                    matches!(before, Some('e' | 'E')) && k >= 2 && chars[k - 2].1.is_ascii_digit();
                if matches!(before, None | Some('^' | '*' | '/' | '+' | '-')) || exponent {
                    continue;
                }
                parts.push((minus, &s[start..i]));
                minus = ch == '-';
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push((minus, &s[start..]));
    parts
}

/// A polynomial over `F` tied to its ring.
#[derive(Clone)]
pub struct Polynomial<F: Field> {
    ring: Arc<PolyRing<F>>,
    terms: Vec<Term<F>>,
}

impl<F: Field> PartialEq for Polynomial<F> {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring)
            && self.terms == other.terms
    }
}

impl<F: Field> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl<F: Field> Polynomial<F> {
    pub fn ring(&self) -> &Arc<PolyRing<F>> {
        &self.ring
    }

    pub fn field(&self) -> &F {
        &self.ring.field
    }

    pub fn terms(&self) -> &[Term<F>] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term<F>> {
        self.terms
    }

    pub(crate) fn from_sorted(ring: Arc<PolyRing<F>>, terms: Vec<Term<F>>) -> Self {
        Polynomial { ring, terms }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// A nonzero constant, i.e. a unit of the polynomial ring.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    pub fn leading_term(&self) -> Option<&Term<F>> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coeff(&self) -> Option<&F::Elem> {
        self.terms.first().map(|t| &t.1)
    }

    /// Exponent vector of the leading monomial.
    pub fn multidegree(&self) -> Option<&[u16]> {
        self.leading_monomial().map(|m| m.exponents())
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| m.degree())
            .max()
            .unwrap_or(0)
    }

    fn compatible(&self, other: &Self) -> Result<(), AlgebraError> {
        if Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring {
            Ok(())
        } else {
            Err(AlgebraError::RingMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.compatible(other)?;
        Ok(self.combine(other, false))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.compatible(other)?;
        Ok(self.combine(other, true))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.compatible(other)?;
        let field = &self.ring.field;
        let mut acc = self.ring.zero();
        // Accumulate one row per term of the shorter factor.
        let (short, long) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        for (m, c) in &short.terms {
            let row: Vec<Term<F>> = long
                .terms
                .iter()
                .map(|(m2, c2)| (m.mul(m2), field.mul(c, c2)))
                .collect();
            acc.terms = merge(field, self.ring.order, &acc.terms, &row, false);
        }
        Ok(acc)
    }

    fn combine(&self, other: &Self, subtract: bool) -> Self {
        let terms = merge(
            &self.ring.field,
            self.ring.order,
            &self.terms,
            &other.terms,
            subtract,
        );
        Polynomial {
            ring: self.ring.clone(),
            terms,
        }
    }

    pub fn neg(&self) -> Self {
        let field = &self.ring.field;
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), field.neg(c)))
                .collect(),
        }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let field = &self.ring.field;
        if field.is_zero(c) {
            return self.ring.zero();
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), field.mul(a, c)))
                .collect(),
        }
    }

    /// `c * m * self`.
    pub fn mul_term(&self, m: &Monomial, c: &F::Elem) -> Self {
        let field = &self.ring.field;
        if field.is_zero(c) {
            return self.ring.zero();
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m2, a)| (m2.mul(m), field.mul(a, c)))
                .collect(),
        }
    }

    /// Scaled so that the leading coefficient is one.
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            None => self.clone(),
            Some(lc) if self.ring.field.is_one(lc) => self.clone(),
            Some(lc) => self.scale(
                &self
                    .ring
                    .field
                    .inv(lc)
                    .expect("nonzero leading coefficient"),
            ),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = self.ring.one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn evaluate(&self, point: &[F::Elem]) -> F::Elem {
        assert_eq!(point.len(), self.ring.nvars(), "evaluation point arity");
        let field = &self.ring.field;
        let mut acc = field.zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                for _ in 0..e {
                    v = field.mul(&v, x);
                }
            }
            acc = field.add(&acc, &v);
        }
        acc
    }

    /// Replace variable `idx` by `replacement` (which must live in the same ring).
    pub fn substitute(&self, idx: usize, replacement: &Self) -> Result<Self, AlgebraError> {
        self.compatible(replacement)?;
        let mut powers = vec![self.ring.one()];
        let mut acc: Vec<Term<F>> = Vec::new();
        let mut plain: Vec<Term<F>> = Vec::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_var(idx);
            if e == 0 {
                plain.push((m.clone(), c.clone()));
                continue;
            }
            while powers.len() <= e as usize {
                let next = powers.last().unwrap() * replacement;
                powers.push(next);
            }
            acc.extend(powers[e as usize].mul_term(&rest, c).terms);
        }
        acc.extend(plain);
        Ok(self.ring.from_terms(acc))
    }

    /// Substitutes constants for the variables with `Some` value.
    pub fn specialize(&self, values: &[Option<F::Elem>]) -> Self {
        assert_eq!(values.len(), self.ring.nvars());
        let field = &self.ring.field;
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut c = c.clone();
                let mut exps = m.exponents().to_vec();
                for (v, val) in values.iter().enumerate() {
                    if let Some(val) = val {
                        for _ in 0..exps[v] {
                            c = field.mul(&c, val);
                        }
                        exps[v] = 0;
                    }
                }
                (Monomial::from_exponents(&exps), c)
            })
            .collect();
        self.ring.from_terms(terms)
    }

    /// Moves the polynomial into `target`, sending variable `i` to
    /// `var_map[i]`. The target must have the same field.
    pub fn embed(&self, target: &Arc<PolyRing<F>>, var_map: &[usize]) -> Self {
        assert_eq!(var_map.len(), self.ring.nvars());
        let n = target.nvars();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut exps = vec![0u16; n];
                for (i, &e) in m.exponents().iter().enumerate() {
                    exps[var_map[i]] += e;
                }
                (Monomial::from_exponents(&exps), c.clone())
            })
            .collect();
        target.from_terms(terms)
    }

    /// The same polynomial re-sorted for a ring that differs only in order.
    pub fn with_ring_order(&self, target: &Arc<PolyRing<F>>) -> Self {
        assert_eq!(target.vars, self.ring.vars);
        let order = target.order;
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Polynomial {
            ring: target.clone(),
            terms,
        }
    }

    /// Applies `f` to every coefficient, landing in `target`.
    pub fn map_coeffs<G: Field>(
        &self,
        target: &Arc<PolyRing<G>>,
        f: impl Fn(&F::Elem) -> G::Elem,
    ) -> Polynomial<G> {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.extend_to(target.nvars()), f(c)))
            .collect();
        target.from_terms(terms)
    }
}

/// Merge two sorted term lists (`a + b` or `a - b`).
pub(crate) fn merge<F: Field>(
    field: &F,
    order: MonomialOrder,
    a: &[Term<F>],
    b: &[Term<F>],
    subtract: bool,
) -> Vec<Term<F>> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match order.cmp(&a[i].0, &b[j].0) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                let c = if subtract {
                    field.neg(&b[j].1)
                } else {
                    b[j].1.clone()
                };
                out.push((b[j].0.clone(), c));
                j += 1;
            }
            Ordering::Equal => {
                let c = if subtract {
                    field.sub(&a[i].1, &b[j].1)
                } else {
                    field.add(&a[i].1, &b[j].1)
                };
                if !field.is_zero(&c) {
                    out.push((a[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    for t in &b[j..] {
        let c = if subtract {
            field.neg(&t.1)
        } else {
            t.1.clone()
        };
        out.push((t.0.clone(), c));
    }
    out
}

/// `p - c * m * g` where the leading terms are known to cancel; `p[0]` and
/// `g[0]` are skipped.
pub(crate) fn sub_shifted_tail<F: Field>(
    field: &F,
    order: MonomialOrder,
    p: &[Term<F>],
    c: &F::Elem,
    m: &Monomial,
    g: &[Term<F>],
) -> Vec<Term<F>> {
    let p = &p[1..];
    let g = &g[1..];
    let mut out = Vec::with_capacity(p.len() + g.len());
    let mut i = 0;
    for (gm, gc) in g {
        let sm = gm.mul(m);
        while i < p.len() && order.cmp(&p[i].0, &sm) == Ordering::Greater {
            out.push(p[i].clone());
            i += 1;
        }
        if i < p.len() && p[i].0 == sm {
            let v = field.sub_mul(&p[i].1, c, gc);
            if !field.is_zero(&v) {
                out.push((sm, v));
            }
            i += 1;
        } else {
            out.push((sm, field.neg(&field.mul(c, gc))));
        }
    }
    out.extend_from_slice(&p[i..]);
    out
}

/// The multivariate division algorithm: `f = sum q_i g_i + r` with no term of
/// `r` divisible by any `LT(g_i)`. Divisors are tried in the given order.
pub fn divide_multivariate<F: Field>(
    f: &Polynomial<F>,
    divisors: &[Polynomial<F>],
) -> Result<(Vec<Polynomial<F>>, Polynomial<F>), AlgebraError> {
    for g in divisors {
        f.compatible(g)?;
        if g.is_zero() {
            return Err(AlgebraError::ZeroPolynomial);
        }
    }
    let ring = f.ring.clone();
    let field = &ring.field;
    let order = ring.order;
    let mut quotients: Vec<Vec<Term<F>>> = vec![Vec::new(); divisors.len()];
    let mut remainder: Vec<Term<F>> = Vec::new();
    let mut p = f.terms.clone();
    let lc_inv: Vec<F::Elem> = divisors
        .iter()
        .map(|g| field.inv(&g.terms[0].1).expect("nonzero"))
        .collect();
    while let Some((lm, lc)) = p.first().cloned() {
        let hit = divisors
            .iter()
            .enumerate()
            .find_map(|(i, g)| g.terms[0].0.quotient_of(&lm).map(|q| (i, q)));
        match hit {
            Some((i, q)) => {
                let c = field.mul(&lc, &lc_inv[i]);
                p = sub_shifted_tail(field, order, &p, &c, &q, &divisors[i].terms);
                quotients[i].push((q, c));
            }
            None => {
                remainder.push((lm, lc));
                p.remove(0);
            }
        }
    }
    // Quotient terms are produced in decreasing order already.
    let quotients = quotients.into_iter().map(|t| ring.from_terms(t)).collect();
    Ok((
        quotients,
        Polynomial {
            ring,
            terms: remainder,
        },
    ))
}

impl<F: Field> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let field = &self.ring.field;
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, "+")?;
            }
            let cs = field.format_elem(c);
            if cs.contains(['+', '-', '/', ' ', 'e']) {
                write!(f, "({cs})")?;
            } else {
                write!(f, "{cs}")?;
            }
            for (v, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*{}", self.ring.vars[v])?,
                    _ => write!(f, "*{}^{}", self.ring.vars[v], e)?,
                }
            }
        }
        Ok(())
    }
}

macro_rules! forward_op {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<F: Field> std::ops::$tr for &Polynomial<F> {
            type Output = Polynomial<F>;
            /// Panics if the operands live in different rings; use the
            /// `checked_*` methods to get an error instead.
            fn $method(self, rhs: &Polynomial<F>) -> Polynomial<F> {
                self.$checked(rhs).expect("polynomial ring mismatch")
            }
        }
    };
}

forward_op!(Add, add, checked_add);
forward_op!(Sub, sub, checked_sub);
forward_op!(Mul, mul, checked_mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{GaussRat, GaussianRationals, PrimeField};

    fn qring(vars: &[&str], order: MonomialOrder) -> Arc<PolyRing<GaussianRationals>> {
        PolyRing::new(
            GaussianRationals,
            vars.iter().map(|s| s.to_string()).collect(),
            order,
        )
    }

    #[test]
    fn ring_identities() {
        let r = qring(&["x", "y"], MonomialOrder::Lex);
        let x = r.var(0);
        let one = r.one();
        assert_eq!(&(&x + &one) * &(&x - &one), r.parse("x^2+-1").unwrap());
        assert_eq!(&x + &r.zero(), x);
        // (x + iy)(x - iy) = x^2 + y^2
        let iy = r.var(1).scale(&GaussRat::i());
        assert_eq!(&(&x + &iy) * &(&x - &iy), r.parse("x^2+y^2").unwrap());
    }

    #[test]
    fn binary_minus_parses() {
        let r = qring(&["x", "y"], MonomialOrder::Lex);
        assert_eq!(r.parse("x^2-1").unwrap(), r.parse("x^2+-1").unwrap());
        assert_eq!(
            r.parse("x - y - 2*x").unwrap(),
            r.parse("-1*x+-1*y").unwrap()
        );
        assert_eq!(r.parse("x*-2").unwrap(), r.parse("-2*x").unwrap());
        assert_eq!(r.parse("-x-(1/2)").unwrap(), r.parse("-1*x+-1/2").unwrap());
    }

    #[test]
    fn mismatched_rings_are_rejected() {
        let r1 = qring(&["x", "y"], MonomialOrder::Lex);
        let r2 = qring(&["x", "z"], MonomialOrder::Lex);
        assert_eq!(
            r1.var(0).checked_add(&r2.var(0)),
            Err(AlgebraError::RingMismatch)
        );
        let f = PolyRing::new(
            PrimeField::new(7).unwrap(),
            vec!["x".into(), "y".into()],
            MonomialOrder::Lex,
        );
        let g = PolyRing::new(
            PrimeField::new(11).unwrap(),
            vec!["x".into(), "y".into()],
            MonomialOrder::Lex,
        );
        assert_eq!(
            f.var(0).checked_mul(&g.var(0)),
            Err(AlgebraError::RingMismatch)
        );
    }

    #[test]
    fn textbook_division_example() {
        // f = x^2 y + x y^2 + y^2 by (xy - 1, y^2 - 1) under lex x > y.
        // Hand execution: q1 = x + y, q2 = 1, r = x + y + 1.
        let r = qring(&["x", "y"], MonomialOrder::Lex);
        let f = r.parse("x^2*y+x*y^2+y^2").unwrap();
        let g1 = r.parse("x*y+-1").unwrap();
        let g2 = r.parse("y^2+-1").unwrap();
        let (q, rem) = divide_multivariate(&f, &[g1.clone(), g2.clone()]).unwrap();
        assert_eq!(rem, r.parse("x+y+1").unwrap());
        assert_eq!(q[0], r.parse("x+y").unwrap());
        assert_eq!(q[1], r.one());
        assert_eq!(&(&(&q[0] * &g1) + &(&q[1] * &g2)) + &rem, f);
    }

    #[test]
    fn trivial_divisions() {
        let r = qring(&["x", "y"], MonomialOrder::GrevLex);
        let x = r.var(0);
        let (q, rem) = divide_multivariate(&x, std::slice::from_ref(&x)).unwrap();
        assert!(rem.is_zero());
        assert_eq!(q[0], r.one());
        let (_, rem) = divide_multivariate(&r.one(), &[r.var(0), r.var(1)]).unwrap();
        assert_eq!(rem, r.one());
        assert_eq!(
            divide_multivariate(&x, &[r.zero()]),
            Err(AlgebraError::ZeroPolynomial)
        );
    }

    #[test]
    fn text_format_round_trip() {
        let r = qring(&["d1_1", "d2_3", "t"], MonomialOrder::GrevLex);
        let p = r
            .parse("(1/2+-3/1*i)*d1_1^2*d2_3+(-7/3+0/1*i)*t+(5/1+1/1*i)")
            .unwrap();
        assert_eq!(p.len(), 3);
        let s = p.to_string();
        assert_eq!(r.parse(&s).unwrap(), p);
        let fp = PolyRing::new(
            PrimeField::new(101).unwrap(),
            vec!["x".into(), "y".into()],
            MonomialOrder::GrevLex,
        );
        let q = fp.parse("3*x*y+100*y^2+-1").unwrap();
        assert_eq!(q.to_string(), "3*x*y+100*y^2+100");
        assert_eq!(fp.parse(&q.to_string()).unwrap(), q);
    }

    #[test]
    fn substitution_and_evaluation_agree() {
        let r = qring(&["x", "y", "z"], MonomialOrder::GrevLex);
        let p = r.parse("x^2*y+3*x*z+-2").unwrap();
        let rep = r.parse("y+z+1").unwrap();
        let s = p.substitute(0, &rep).unwrap();
        let pt = [
            GaussRat::from_int(5),
            GaussRat::from_parts((1, 2), (1, 3)),
            GaussRat::from_int(-2),
        ];
        let x_val = rep.evaluate(&pt);
        let pt2 = [x_val, pt[1].clone(), pt[2].clone()];
        assert_eq!(s.evaluate(&pt), p.evaluate(&pt2));
    }
}
