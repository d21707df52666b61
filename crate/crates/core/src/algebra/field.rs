//! Coefficient fields.
//!
//! Every exact computation in the crate is generic over [`Field`], a context
//! object that owns the arithmetic. Two exact fields are provided: the
//! Gaussian rationals Q(i) and prime fields F_p. [`ComplexFloat`] implements
//! the same trait for `f64` complex numbers so that scheme formulas can be
//! shared between exact and floating-point evaluation.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_complex::{Complex, Complex64};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use super::AlgebraError;

/// Arithmetic context for a coefficient field.
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    /// `a - b * c`, the inner step of every elimination loop.
    fn sub_mul(&self, a: &Self::Elem, b: &Self::Elem, c: &Self::Elem) -> Self::Elem {
        self.sub(a, &self.mul(b, c))
    }

    /// Text form used by the polynomial serializer.
    fn format_elem(&self, a: &Self::Elem) -> String;
    fn parse_elem(&self, s: &str) -> Result<Self::Elem, AlgebraError>;

    /// Exact fields compare with zero exactly; floating fields use a relative
    /// tolerance against `reference`.
    fn is_exact(&self) -> bool {
        true
    }

    fn near_zero(&self, a: &Self::Elem, _reference: f64) -> bool {
        self.is_zero(a)
    }

    /// Size of an element, used for tolerances (float) and pivot choice (exact).
    fn magnitude(&self, a: &Self::Elem) -> f64;

    /// Smaller is a better elimination pivot. Zero is never chosen.
    fn pivot_cost(&self, a: &Self::Elem) -> u64 {
        let _ = a;
        1
    }

    /// Optional kernels for large exact matrices (row-major data). `None`
    /// means the field has no special path and generic elimination is used.
    ///
    /// Pivot columns and one nullspace vector per free column; each vector
    /// is nonzero in its own free column and zero in the other free columns.
    fn fast_nullspace(
        &self,
        rows: usize,
        cols: usize,
        data: &[Self::Elem],
    ) -> Option<(Vec<usize>, Vec<Vec<Self::Elem>>)> {
        let _ = (rows, cols, data);
        None
    }

    fn fast_rank(&self, rows: usize, cols: usize, data: &[Self::Elem]) -> Option<usize> {
        let _ = (rows, cols, data);
        None
    }

    /// A nonzero multiple of `sum_b coeffs[b] e_b`, with `e_b` the nullspace
    /// vector that is one in the b-th free column and zero in the others.
    fn fast_kernel_combination(
        &self,
        rows: usize,
        cols: usize,
        data: &[Self::Elem],
        coeffs: &[Self::Elem],
    ) -> Option<Vec<Self::Elem>> {
        let _ = (rows, cols, data, coeffs);
        None
    }

    fn fast_det(&self, n: usize, data: &[Self::Elem]) -> Option<Self::Elem> {
        let _ = (n, data);
        None
    }

    /// Product of an `n x k` and a `k x m` matrix.
    fn fast_mul(
        &self,
        a: &[Self::Elem],
        b: &[Self::Elem],
        n: usize,
        k: usize,
        m: usize,
    ) -> Option<Vec<Self::Elem>> {
        let _ = (a, b, n, k, m);
        None
    }

    /// Description of the context, e.g. `"Q(i)"` or `"F_2147483647"`.
    fn describe(&self) -> String;
}

// ---------------------------------------------------------------------------
// Gaussian rationals

/// An element `re + im*i` of Q(i). Both parts are reduced fractions with a
/// positive denominator (maintained by `BigRational`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

// BigRational's own operators reduce with a binary gcd, which is very slow
// when one operand is much longer than the other (a huge numerator against a
// small channel denominator). These helpers reduce the long operand first.

fn gcd_fast(a: &BigInt, b: &BigInt) -> BigInt {
    let (a, b) = (a.magnitude(), b.magnitude());
    let (big, small) = if a.bits() >= b.bits() { (a, b) } else { (b, a) };
    if small.is_zero() {
        return BigInt::from(big.clone());
    }
    if small.is_one() {
        return BigInt::one();
    }
    if big.bits() > small.bits() + 64 {
        return BigInt::from((big % small).gcd(small));
    }
    BigInt::from(big.gcd(small))
}

/// `n / d` in lowest terms with a positive denominator; `d` is nonzero.
fn reduced(n: BigInt, d: BigInt) -> BigRational {
    if n.is_zero() {
        return BigRational::zero();
    }
    let g = gcd_fast(&n, &d);
    let (n, d) = if g.is_one() { (n, d) } else { (n / &g, d / &g) };
    if d.is_negative() {
        BigRational::new_raw(-n, -d)
    } else {
        BigRational::new_raw(n, d)
    }
}

fn radd(a: &BigRational, b: &BigRational) -> BigRational {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.denom() == b.denom() {
        return reduced(a.numer() + b.numer(), a.denom().clone());
    }
    reduced(
        a.numer() * b.denom() + b.numer() * a.denom(),
        a.denom() * b.denom(),
    )
}

fn rneg(a: &BigRational) -> BigRational {
    BigRational::new_raw(-a.numer(), a.denom().clone())
}

fn rmul(a: &BigRational, b: &BigRational) -> BigRational {
    if a.is_zero() || b.is_zero() {
        return BigRational::zero();
    }
    // Cross-cancel; the result is then already in lowest terms.
    let g1 = gcd_fast(a.numer(), b.denom());
    let g2 = gcd_fast(b.numer(), a.denom());
    let n = (a.numer() / &g1) * (b.numer() / &g2);
    let d = (a.denom() / &g2) * (b.denom() / &g1);
    BigRational::new_raw(n, d)
}

fn rdiv(a: &BigRational, b: &BigRational) -> BigRational {
    let inv = if b.numer().is_negative() {
        BigRational::new_raw(-b.denom(), -b.numer())
    } else {
        BigRational::new_raw(b.denom().clone(), b.numer().clone())
    };
    rmul(a, &inv)
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn from_parts(re: (i64, i64), im: (i64, i64)) -> Self {
        GaussRat {
            re: ratio(re.0, re.1),
            im: ratio(im.0, im.1),
        }
    }

    pub fn from_int(n: i64) -> Self {
        GaussRat {
            re: BigRational::from_integer(n.into()),
            im: BigRational::zero(),
        }
    }

    pub fn i() -> Self {
        GaussRat {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// `|z|^2` as an exact rational.
    pub fn norm_sqr(&self) -> BigRational {
        radd(&rmul(&self.re, &self.re), &rmul(&self.im, &self.im))
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(GaussRat {
            re: rdiv(&self.re, &n),
            im: rneg(&rdiv(&self.im, &n)),
        })
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    /// Total bit size of the four integers, a proxy for arithmetic cost.
    pub fn bit_size(&self) -> u64 {
        self.re.numer().bits()
            + self.re.denom().bits()
            + self.im.numer().bits()
            + self.im.denom().bits()
    }
}

pub(crate) fn rat_to_f64(r: &BigRational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Keep the top 60 bits of each part and restore the exponent.
            let (nb, db) = (r.numer().bits(), r.denom().bits());
            let (ns, ds) = (nb.saturating_sub(60), db.saturating_sub(60));
            let n = (r.numer() >> ns).to_f64().unwrap_or(0.0);
            let d = (r.denom() >> ds).to_f64().unwrap_or(1.0);
            let exp = (ns as i64 - ds as i64).clamp(-2100, 2100) as i32;
            n / d * 2f64.powi(exp)
        }
    }
}

impl std::ops::Add for &GaussRat {
    type Output = GaussRat;
    fn add(self, o: &GaussRat) -> GaussRat {
        GaussRat {
            re: radd(&self.re, &o.re),
            im: radd(&self.im, &o.im),
        }
    }
}

impl std::ops::Sub for &GaussRat {
    type Output = GaussRat;
    fn sub(self, o: &GaussRat) -> GaussRat {
        GaussRat {
            re: radd(&self.re, &rneg(&o.re)),
            im: radd(&self.im, &rneg(&o.im)),
        }
    }
}

impl std::ops::Mul for &GaussRat {
    type Output = GaussRat;
    fn mul(self, o: &GaussRat) -> GaussRat {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussRat {
                re: rmul(&self.re, &o.re),
                im: BigRational::zero(),
            };
        }
        GaussRat {
            re: radd(&rmul(&self.re, &o.re), &rneg(&rmul(&self.im, &o.im))),
            im: radd(&rmul(&self.re, &o.im), &rmul(&self.im, &o.re)),
        }
    }
}

impl std::ops::Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

fn fmt_ratio(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}*i", fmt_ratio(&self.re), fmt_ratio(&self.im))
    }
}

fn parse_ratio(s: &str) -> Result<BigRational, AlgebraError> {
    let bad = || AlgebraError::Parse(format!("bad rational `{s}`"));
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| bad())?;
    let d = BigInt::from_str(d).map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

impl FromStr for GaussRat {
    type Err = AlgebraError;

    /// Accepts `a/b+c/d*i` (the canonical form), a bare rational `a/b`, or a
    /// bare integer.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let s = s
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .unwrap_or(s);
        if let Some(body) = s.strip_suffix("*i") {
            // Split at the '+' that separates the parts. Signs inside a part are
            // only ever leading, so the separator is the first '+' after index 0
            // that is not directly followed by nothing.
            let bytes = body.as_bytes();
            for (idx, &b) in bytes.iter().enumerate().skip(1) {
                if b == b'+' {
                    let re = parse_ratio(&body[..idx])?;
                    let im = parse_ratio(&body[idx + 1..])?;
                    return Ok(GaussRat { re, im });
                }
            }
            return Ok(GaussRat {
                re: BigRational::zero(),
                im: parse_ratio(body)?,
            });
        }
        Ok(GaussRat {
            re: parse_ratio(s)?,
            im: BigRational::zero(),
        })
    }
}

/// The field Q(i), the exact stand-in for the complex numbers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GaussianRationals;

impl Field for GaussianRationals {
    type Elem = GaussRat;

    fn zero(&self) -> GaussRat {
        GaussRat::default()
    }
    fn one(&self) -> GaussRat {
        GaussRat::from_int(1)
    }
    fn from_i64(&self, n: i64) -> GaussRat {
        GaussRat::from_int(n)
    }
    fn is_zero(&self, a: &GaussRat) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &GaussRat) -> bool {
        a.im.is_zero() && a.re.is_one()
    }
    fn add(&self, a: &GaussRat, b: &GaussRat) -> GaussRat {
        a + b
    }
    fn sub(&self, a: &GaussRat, b: &GaussRat) -> GaussRat {
        a - b
    }
    fn mul(&self, a: &GaussRat, b: &GaussRat) -> GaussRat {
        a * b
    }
    fn neg(&self, a: &GaussRat) -> GaussRat {
        -a
    }
    fn inv(&self, a: &GaussRat) -> Option<GaussRat> {
        a.inv()
    }
    fn format_elem(&self, a: &GaussRat) -> String {
        a.to_string()
    }
    fn parse_elem(&self, s: &str) -> Result<GaussRat, AlgebraError> {
        s.parse()
    }
    fn magnitude(&self, a: &GaussRat) -> f64 {
        a.to_complex().norm()
    }
    fn pivot_cost(&self, a: &GaussRat) -> u64 {
        a.bit_size()
    }
    fn fast_nullspace(
        &self,
        rows: usize,
        cols: usize,
        data: &[GaussRat],
    ) -> Option<(Vec<usize>, Vec<Vec<GaussRat>>)> {
        // The rational elimination spends its time in gcds of huge
        // numerators; fraction-free elimination on cleared rows does not.
        let ints = clear_rows(rows, cols, data);
        let (pivots, basis) = crate::linalg::bareiss_nullspace(rows, cols, ints);
        let basis = basis
            .into_iter()
            .map(|v| v.into_iter().map(from_gaussian_int).collect())
            .collect();
        Some((pivots, basis))
    }
    fn fast_det(&self, n: usize, data: &[GaussRat]) -> Option<GaussRat> {
        let scale = (0..n).fold(BigInt::one(), |acc, i| {
            acc * denominator_lcm(&data[i * n..(i + 1) * n])
        });
        let d = crate::linalg::bareiss_det(n, clear_rows(n, n, data));
        Some(GaussRat {
            re: reduced(d.re, scale.clone()),
            im: reduced(d.im, scale),
        })
    }
    fn fast_rank(&self, rows: usize, cols: usize, data: &[GaussRat]) -> Option<usize> {
        crate::multimod::certified_full_rank(rows, cols, &clear_rows(rows, cols, data))
    }
    fn fast_kernel_combination(
        &self,
        rows: usize,
        cols: usize,
        data: &[GaussRat],
        coeffs: &[GaussRat],
    ) -> Option<Vec<GaussRat>> {
        let ints = clear_rows(rows, cols, data);
        let cs = clear_rows(1, coeffs.len(), coeffs);
        let x = crate::multimod::kernel_combination(rows, cols, &ints, &cs)?;
        let content = x
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(&c.re).gcd(&c.im));
        Some(
            x.into_iter()
                .map(|c| {
                    if content.is_zero() || content.is_one() {
                        from_gaussian_int(c)
                    } else {
                        from_gaussian_int(Complex::new(c.re / &content, c.im / &content))
                    }
                })
                .collect(),
        )
    }
    fn fast_mul(
        &self,
        a: &[GaussRat],
        b: &[GaussRat],
        n: usize,
        k: usize,
        m: usize,
    ) -> Option<Vec<GaussRat>> {
        // Scale rows of `a` and columns of `b` to Gaussian integers, multiply,
        // and divide once per entry.
        let row_scale: Vec<BigInt> = (0..n)
            .map(|i| denominator_lcm(&a[i * k..(i + 1) * k]))
            .collect();
        let col_scale: Vec<BigInt> = (0..m)
            .map(|j| denominator_lcm((0..k).map(|t| &b[t * m + j])))
            .collect();
        let ai: Vec<Complex<BigInt>> = (0..n * k)
            .map(|x| scaled_int(&a[x], &row_scale[x / k]))
            .collect();
        let bi: Vec<Complex<BigInt>> = (0..k * m)
            .map(|x| scaled_int(&b[x], &col_scale[x % m]))
            .collect();
        let zero = Complex::new(BigInt::zero(), BigInt::zero());
        let mut out = vec![zero; n * m];
        for i in 0..n {
            for t in 0..k {
                let x = &ai[i * k + t];
                if x.is_zero() {
                    continue;
                }
                for j in 0..m {
                    let y = &bi[t * m + j];
                    if !y.is_zero() {
                        out[i * m + j] += x * y;
                    }
                }
            }
        }
        Some(
            out.into_iter()
                .enumerate()
                .map(|(x, c)| {
                    let d = &row_scale[x / m] * &col_scale[x % m];
                    GaussRat {
                        re: reduced(c.re, d.clone()),
                        im: reduced(c.im, d),
                    }
                })
                .collect(),
        )
    }
    fn describe(&self) -> String {
        "Q(i)".to_string()
    }
}

fn denominator_lcm<'a>(xs: impl IntoIterator<Item = &'a GaussRat>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, e| {
        if e.re.denom().is_one() && e.im.denom().is_one() {
            acc
        } else {
            acc.lcm(e.re.denom()).lcm(e.im.denom())
        }
    })
}

fn scaled_int(e: &GaussRat, scale: &BigInt) -> Complex<BigInt> {
    Complex::new(
        e.re.numer() * (scale / e.re.denom()),
        e.im.numer() * (scale / e.im.denom()),
    )
}

fn from_gaussian_int(c: Complex<BigInt>) -> GaussRat {
    GaussRat {
        re: BigRational::from_integer(c.re),
        im: BigRational::from_integer(c.im),
    }
}

/// Each row multiplied by the lcm of its denominators; the row space (and
/// so the nullspace) is unchanged.
fn clear_rows(rows: usize, cols: usize, data: &[GaussRat]) -> Vec<Complex<BigInt>> {
    let mut out = Vec::with_capacity(rows * cols);
    for row in data.chunks(cols.max(1)).take(rows) {
        let scale = denominator_lcm(row);
        out.extend(row.iter().map(|e| scaled_int(e, &scale)));
    }
    out
}

// ---------------------------------------------------------------------------
// Prime fields

/// The prime field F_p with `p < 2^32`, residues stored in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, AlgebraError> {
        if !(2..(1 << 32)).contains(&p) || !is_prime(p) {
            return Err(AlgebraError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    /// A uniformly chosen prime in `[2^30, 2^31)`.
    pub fn random_31bit<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let c = rng.random_range((1u64 << 30)..(1u64 << 31)) | 1;
            if is_prime(c) {
                return PrimeField { p: c };
            }
        }
    }

    /// A random 31-bit prime with `p = 1 (mod 4)`, so that F_p contains a
    /// square root of -1 and Q(i) maps into it.
    pub fn random_31bit_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let f = Self::random_31bit(rng);
            if f.p % 4 == 1 {
                return f;
            }
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }

    /// A square root of -1, if one exists (`p = 1 mod 4` or `p = 2`).
    pub fn sqrt_minus_one(&self) -> Option<u64> {
        if self.p == 2 {
            return Some(1);
        }
        if self.p % 4 != 1 {
            return None;
        }
        (2..self.p).find_map(|c| {
            let r = self.pow(c, (self.p - 1) / 4);
            (r * r % self.p == self.p - 1).then_some(r)
        })
    }

    pub fn reduce_int(&self, n: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        let mut r = n % &p;
        if r.sign() == Sign::Minus {
            r += &p;
        }
        r.to_u64().expect("residue fits")
    }

    pub fn reduce_rational(&self, r: &BigRational) -> Option<u64> {
        let d = self.reduce_int(r.denom());
        self.inv(&d)
            .map(|di| self.reduce_int(r.numer()) * di % self.p)
    }

    /// Image of a Gaussian rational under the ring map sending `i` to a fixed
    /// square root of -1. `None` if the map is undefined (a denominator
    /// vanishes mod p, or p has no square root of -1).
    pub fn reduce_gaussian(&self, z: &GaussRat, sqrt_m1: u64) -> Option<u64> {
        let re = self.reduce_rational(&z.re)?;
        let im = self.reduce_rational(&z.im)?;
        Some((re + im * sqrt_m1 % self.p) % self.p)
    }

    pub fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.random_range(0..self.p)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.random_range(1..self.p)
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // Extended Euclid on signed 64-bit values; p < 2^32 so nothing overflows.
        let (mut r0, mut r1) = (self.p as i64, *a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Some(t0.rem_euclid(self.p as i64) as u64)
    }
    fn sub_mul(&self, a: &u64, b: &u64, c: &u64) -> u64 {
        let bc = b * c % self.p;
        self.sub(a, &bc)
    }
    fn format_elem(&self, a: &u64) -> String {
        a.to_string()
    }
    fn parse_elem(&self, s: &str) -> Result<u64, AlgebraError> {
        let s = s.trim();
        let s = s
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .unwrap_or(s);
        let v =
            BigInt::from_str(s).map_err(|_| AlgebraError::Parse(format!("bad residue `{s}`")))?;
        Ok(self.reduce_int(&v))
    }
    fn magnitude(&self, a: &u64) -> f64 {
        if *a == 0 {
            0.0
        } else {
            1.0
        }
    }
    fn describe(&self) -> String {
        format!("F_{}", self.p)
    }
}

/// Deterministic Miller-Rabin, exact for all `n < 3.3e24`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(sp) {
            return n == sp;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

// ---------------------------------------------------------------------------
// Floating point

/// Relative tolerance used by [`ComplexFloat::near_zero`].
pub const FLOAT_REL_TOL: f64 = 1e-9;

/// `f64` complex numbers behind the [`Field`] interface. Not exact: zero
/// tests against a reference magnitude use [`FLOAT_REL_TOL`].
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ComplexFloat;

impl Field for ComplexFloat {
    type Elem = Complex64;

    fn zero(&self) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }
    fn one(&self) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }
    fn from_i64(&self, n: i64) -> Complex64 {
        Complex64::new(n as f64, 0.0)
    }
    fn is_zero(&self, a: &Complex64) -> bool {
        a.re == 0.0 && a.im == 0.0
    }
    fn add(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a + b
    }
    fn sub(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a - b
    }
    fn mul(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a * b
    }
    fn neg(&self, a: &Complex64) -> Complex64 {
        -a
    }
    fn inv(&self, a: &Complex64) -> Option<Complex64> {
        (!self.is_zero(a)).then(|| a.inv())
    }
    fn format_elem(&self, a: &Complex64) -> String {
        format!("{}+{}*i", a.re, a.im)
    }
    fn parse_elem(&self, s: &str) -> Result<Complex64, AlgebraError> {
        let bad = || AlgebraError::Parse(format!("bad complex `{s}`"));
        let t = s.trim();
        if let Some(body) = t.strip_suffix("*i") {
            let idx = body[1..].find('+').map(|i| i + 1).ok_or_else(bad)?;
            let re: f64 = body[..idx].parse().map_err(|_| bad())?;
            let im: f64 = body[idx + 1..].parse().map_err(|_| bad())?;
            Ok(Complex64::new(re, im))
        } else {
            Ok(Complex64::new(t.parse().map_err(|_| bad())?, 0.0))
        }
    }
    fn is_exact(&self) -> bool {
        false
    }
    fn near_zero(&self, a: &Complex64, reference: f64) -> bool {
        a.norm() <= FLOAT_REL_TOL * reference.max(f64::MIN_POSITIVE)
    }
    fn magnitude(&self, a: &Complex64) -> f64 {
        a.norm()
    }
    fn describe(&self) -> String {
        "C (f64)".to_string()
    }
}

/// Fields that can draw random elements, used for random linear
/// combinations and random slices.
pub trait RandomElem: Field {
    /// A random element; never zero.
    fn random_nonzero_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;
}

impl RandomElem for GaussianRationals {
    /// A nonzero integer in `[-1000, 1000]`.
    fn random_nonzero_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> GaussRat {
        loop {
            let n = rng.random_range(-1000..=1000i64);
            if n != 0 {
                return GaussRat::from_int(n);
            }
        }
    }
}

impl RandomElem for PrimeField {
    fn random_nonzero_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        self.random_nonzero(rng)
    }
}

impl RandomElem for ComplexFloat {
    /// Standard complex Gaussian (zero with probability zero).
    fn random_nonzero_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> Complex64 {
        use rand_distr::{Distribution, StandardNormal};
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re * s, im * s)
    }
}

// ---------------------------------------------------------------------------
// Tagged scalars

/// Which exact field a scalar lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarContext {
    GaussianRational,
    PrimeField(PrimeField),
}

/// A self-describing exact scalar. Arithmetic between scalars from different
/// contexts is rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactScalar {
    Gaussian(GaussRat),
    Modular { residue: u64, field: PrimeField },
}

impl ExactScalar {
    pub fn context(&self) -> ScalarContext {
        match self {
            ExactScalar::Gaussian(_) => ScalarContext::GaussianRational,
            ExactScalar::Modular { field, .. } => ScalarContext::PrimeField(*field),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ExactScalar::Gaussian(z) => z.is_zero(),
            ExactScalar::Modular { residue, .. } => *residue == 0,
        }
    }

    fn binary(
        &self,
        other: &Self,
        q: impl Fn(&GaussRat, &GaussRat) -> GaussRat,
        m: impl Fn(&PrimeField, &u64, &u64) -> u64,
    ) -> Result<Self, AlgebraError> {
        match (self, other) {
            (ExactScalar::Gaussian(a), ExactScalar::Gaussian(b)) => {
                Ok(ExactScalar::Gaussian(q(a, b)))
            }
            (
                ExactScalar::Modular {
                    residue: a,
                    field: fa,
                },
                ExactScalar::Modular {
                    residue: b,
                    field: fb,
                },
            ) if fa == fb => Ok(ExactScalar::Modular {
                residue: m(fa, a, b),
                field: *fa,
            }),
            _ => Err(AlgebraError::ContextMismatch),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.binary(other, |a, b| a + b, |f, a, b| f.add(a, b))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.binary(other, |a, b| a - b, |f, a, b| f.sub(a, b))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.binary(other, |a, b| a * b, |f, a, b| f.mul(a, b))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, AlgebraError> {
        if other.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        self.binary(
            other,
            |a, b| a * &b.inv().expect("nonzero"),
            |f, a, b| f.div(a, b).expect("nonzero"),
        )
    }

    pub fn parse(ctx: ScalarContext, s: &str) -> Result<Self, AlgebraError> {
        match ctx {
            ScalarContext::GaussianRational => Ok(ExactScalar::Gaussian(s.parse()?)),
            ScalarContext::PrimeField(field) => Ok(ExactScalar::Modular {
                residue: field.parse_elem(s)?,
                field,
            }),
        }
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactScalar::Gaussian(z) => write!(f, "{z}"),
            ExactScalar::Modular { residue, .. } => write!(f, "{residue}"),
        }
    }
}
