#![allow(dead_code)]

use std::sync::Arc;

use interalign::algebra::{
    divide_multivariate, s_polynomial, Field, GaussRat, GaussianRationals, GroebnerBasis, Monomial,
    MonomialOrder, PolyRing, Polynomial, PrimeField,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn var_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{}", i + 1)).collect()
}

/// Random nonconstant polynomial: up to `terms` terms of degree `1..=deg`,
/// plus a constant term half of the time.
pub fn random_poly<F: Field, R: Rng>(
    ring: &Arc<PolyRing<F>>,
    terms: usize,
    deg: u16,
    rng: &mut R,
    coeff: &mut impl FnMut(&mut R) -> F::Elem,
) -> Polynomial<F> {
    let n = ring.nvars();
    loop {
        let mut p = ring.zero();
        for _ in 0..rng.random_range(1..=terms) {
            let mut exps = vec![0u16; n];
            for _ in 0..rng.random_range(1..=deg) {
                exps[rng.random_range(0..n)] += 1;
            }
            p = &p + &ring.term(Monomial::from_exponents(&exps), coeff(rng));
        }
        if rng.random_bool(0.5) {
            p = &p + &ring.constant(coeff(rng));
        }
        if !p.is_constant() {
            return p;
        }
    }
}

/// Small random system over a random 31-bit prime field.
pub fn fp_system(
    seed: u64,
    order: MonomialOrder,
) -> (Arc<PolyRing<PrimeField>>, Vec<Polynomial<PrimeField>>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = PrimeField::random_31bit(&mut rng);
    let n = rng.random_range(2..=3);
    let ring = PolyRing::new(field, var_names(n), order);
    let count = rng.random_range(2..=n + 1);
    let polys = (0..count)
        .map(|_| {
            random_poly(&ring, 4, 3, &mut rng, &mut |r: &mut ChaCha8Rng| {
                field.random_elem(r)
            })
        })
        .collect();
    (ring, polys)
}

/// Small random system over Q(i) with Gaussian-integer coefficients.
pub fn qi_system(
    seed: u64,
    order: MonomialOrder,
) -> (
    Arc<PolyRing<GaussianRationals>>,
    Vec<Polynomial<GaussianRationals>>,
) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(2..=3);
    let ring = PolyRing::new(GaussianRationals, var_names(n), order);
    let count = rng.random_range(2..=n + 1);
    let mut coeff = |r: &mut ChaCha8Rng| {
        GaussRat::from_parts((r.random_range(-3..=3), 1), (r.random_range(-3..=3), 1))
    };
    let polys = (0..count)
        .map(|_| random_poly(&ring, 3, 2, &mut rng, &mut coeff))
        .collect();
    (ring, polys)
}

/// `f = sum q_i g_i + r` holds and no term of `r` is divisible by a leading monomial.
pub fn division_holds<F: Field>(f: &Polynomial<F>, divisors: &[Polynomial<F>]) -> bool {
    let (qs, r) = divide_multivariate(f, divisors).unwrap();
    let mut back = r.clone();
    for (q, g) in qs.iter().zip(divisors) {
        back = &back + &(q * g);
    }
    let lms: Vec<&Monomial> = divisors
        .iter()
        .map(|g| g.leading_monomial().unwrap())
        .collect();
    let remainder_ok = r
        .terms()
        .iter()
        .all(|(m, _)| lms.iter().all(|l| !l.divides(m)));
    back == *f && remainder_ok
}

/// Every S-polynomial of the basis reduces to zero.
pub fn spolys_reduce<F: Field>(b: &GroebnerBasis<F>) -> bool {
    (0..b.polys.len()).all(|i| {
        (i + 1..b.polys.len()).all(|j| {
            let s = s_polynomial(&b.polys[i], &b.polys[j]).unwrap();
            b.normal_form(&s).unwrap().is_zero()
        })
    })
}

/// Every generator reduces to zero modulo the basis.
pub fn generators_reduce<F: Field>(b: &GroebnerBasis<F>, gens: &[Polynomial<F>]) -> bool {
    gens.iter()
        .all(|g| g.is_zero() || b.normal_form(g).unwrap().is_zero())
}

/// All points of `F_p^n` for tiny `p`.
pub fn grid(p: u64, n: usize) -> impl Iterator<Item = Vec<u64>> {
    (0..p.pow(n as u32)).map(move |mut idx| {
        (0..n)
            .map(|_| {
                let v = idx % p;
                idx /= p;
                v
            })
            .collect()
    })
}
