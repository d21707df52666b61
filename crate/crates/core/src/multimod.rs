//! Multi-modular linear algebra over the Gaussian integers.
//!
//! A Gaussian integer is determined modulo `p = 1 (mod 4)` by its images
//! under the two ring maps `Z[i] -> F_p` that send `i` to either square root
//! of -1. Both images are computed for enough 31-bit primes to cover a
//! Hadamard bound, then lifted by Chinese remaindering.

use num_bigint::{BigInt, BigUint, Sign};
use num_complex::Complex;
use num_traits::{One, Zero};

use crate::algebra::{is_prime, Field, PrimeField};

pub(crate) type GInt = Complex<BigInt>;

/// Modular reduction of products below `p^2` without a hardware divide.
#[derive(Clone, Copy)]
struct Barrett {
    p: u64,
    m: u64,
}

impl Barrett {
    fn new(p: u64) -> Self {
        Barrett { p, m: u64::MAX / p }
    }

    #[inline]
    fn reduce(&self, x: u64) -> u64 {
        let q = ((x as u128 * self.m as u128) >> 64) as u64;
        let r = x - q * self.p;
        if r >= self.p {
            r - self.p
        } else {
            r
        }
    }

    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a * b)
    }
}

/// Primes `p = 1 (mod 4)` below `2^31`, largest first.
fn gaussian_primes() -> impl Iterator<Item = (PrimeField, u64)> {
    (1u64..(1 << 29)).rev().filter_map(|q| {
        let p = 4 * q + 1;
        if p >= 1 << 31 || !is_prime(p) {
            return None;
        }
        let f = PrimeField::new(p).ok()?;
        let s = f.sqrt_minus_one()?;
        Some((f, s))
    })
}

/// Sign and little-endian digits, reduced once per prime.
struct Digits(Vec<(bool, Vec<u32>)>);

impl Digits {
    fn new(entries: &[GInt]) -> Self {
        let split = |n: &BigInt| {
            let (sign, d) = n.to_u32_digits();
            (sign == Sign::Minus, d)
        };
        Digits(
            entries
                .iter()
                .flat_map(|c| [split(&c.re), split(&c.im)])
                .collect(),
        )
    }

    fn reduce(&self, k: usize, p: u64) -> u64 {
        let (neg, d) = &self.0[k];
        let r = d
            .iter()
            .rev()
            .fold(0u64, |r, &x| ((r << 32) | x as u64) % p);
        if *neg && r != 0 {
            p - r
        } else {
            r
        }
    }

    /// Images of entry `k / 2` under `i -> s` and `i -> -s`.
    fn images(&self, idx: usize, p: u64, s: u64, bar: &Barrett) -> (u64, u64) {
        let re = self.reduce(2 * idx, p);
        let im = bar.mul(self.reduce(2 * idx + 1, p), s);
        ((re + im) % p, (re + p - im) % p)
    }
}

fn bits_of(c: &GInt) -> u64 {
    c.re.bits().max(c.im.bits())
}

/// log2 of the Hadamard bound on every maximal minor of the matrix.
fn hadamard_bits(rows: usize, cols: usize, a: &[GInt]) -> f64 {
    (0..rows)
        .map(|i| {
            let top = a[i * cols..(i + 1) * cols]
                .iter()
                .map(bits_of)
                .max()
                .unwrap_or(0);
            // |entry|^2 < 2^(2 top + 1), summed over the row.
            top as f64 + 0.5 * (1.0 + (cols as f64).log2())
        })
        .sum()
}

/// Forward elimination mod p to row echelon form. Returns the pivot columns
/// and the determinant of the pivot columns restricted to the pivot rows
/// (in the original row order, up to the recorded swaps).
fn echelon(
    rows: usize,
    cols: usize,
    m: &mut [u64],
    f: &PrimeField,
    bar: &Barrett,
) -> (Vec<usize>, u64) {
    let p = f.modulus();
    let mut pivots = Vec::new();
    let mut det = 1u64;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| m[i * cols + c] != 0) else {
            continue;
        };
        if piv != r {
            for j in c..cols {
                m.swap(r * cols + j, piv * cols + j);
            }
            det = (p - det) % p;
        }
        let lead = m[r * cols + c];
        det = bar.mul(det, lead);
        let inv = f.inv(&lead).expect("nonzero pivot");
        for j in c..cols {
            m[r * cols + j] = bar.mul(m[r * cols + j], inv);
        }
        for i in r + 1..rows {
            let factor = m[i * cols + c];
            if factor == 0 {
                continue;
            }
            let neg = p - factor;
            for j in c..cols {
                let v = m[i * cols + j] + bar.mul(neg, m[r * cols + j]);
                m[i * cols + j] = if v >= p { v - p } else { v };
            }
        }
        pivots.push(c);
        r += 1;
    }
    (pivots, det)
}

fn reduced_matrix(
    digits: &Digits,
    n: usize,
    p: u64,
    s: u64,
    bar: &Barrett,
) -> (Vec<u64>, Vec<u64>) {
    let mut plus = Vec::with_capacity(n);
    let mut minus = Vec::with_capacity(n);
    for k in 0..n {
        let (a, b) = digits.images(k, p, s, bar);
        plus.push(a);
        minus.push(b);
    }
    (plus, minus)
}

/// Rank over Q(i) when one prime already shows it is maximal; `None` when
/// the modular rank is deficient and might be an unlucky reduction.
pub(crate) fn certified_full_rank(rows: usize, cols: usize, a: &[GInt]) -> Option<usize> {
    let digits = Digits::new(a);
    let (f, s) = gaussian_primes().next()?;
    let bar = Barrett::new(f.modulus());
    let (mut m, _) = reduced_matrix(&digits, rows * cols, f.modulus(), s, &bar);
    let (pivots, _) = echelon(rows, cols, &mut m, &f, &bar);
    (pivots.len() == rows.min(cols)).then_some(pivots.len())
}

/// Solves the echelon system for the pivot unknowns, free unknowns fixed to
/// `free_vals`, and scales the result by `det`.
fn kernel_vector(
    cols: usize,
    m: &[u64],
    pivots: &[usize],
    free: &[usize],
    free_vals: &[u64],
    det: u64,
    p: u64,
    bar: &Barrett,
) -> Vec<u64> {
    let mut x = vec![0u64; cols];
    for (&fc, &v) in free.iter().zip(free_vals) {
        x[fc] = v;
    }
    for (k, &pc) in pivots.iter().enumerate().rev() {
        let mut acc = 0u64;
        for j in pc + 1..cols {
            if x[j] != 0 {
                acc = (acc + bar.mul(m[k * cols + j], x[j])) % p;
            }
        }
        // Pivot rows are normalized to a leading one.
        x[pc] = (p - acc) % p;
    }
    x.iter().map(|&v| bar.mul(v, det)).collect()
}

/// For a full-row-rank integral matrix: `det(A_P) * sum_b coeffs[b] e_b`,
/// where `e_b` is the nullspace vector with a one in the b-th free column
/// and zeros in the other free columns, and `A_P` the pivot columns. The
/// result is exact; `None` if the rank is deficient or the lift fails its
/// check.
pub(crate) fn kernel_combination(
    rows: usize,
    cols: usize,
    a: &[GInt],
    coeffs: &[GInt],
) -> Option<Vec<GInt>> {
    if rows >= cols {
        return None;
    }
    let digits = Digits::new(a);
    let coeff_digits = Digits::new(coeffs);
    let coeff_bits = coeffs.iter().map(bits_of).max().unwrap_or(0) as f64
        + (coeffs.len().max(1) as f64).log2()
        + 1.0;
    // Each lifted coordinate is a sum of minors times coefficients; the
    // extra bits cover the sign and the two real parts.
    let target = hadamard_bits(rows, cols, a) + coeff_bits + 4.0;

    let mut pivots_ref: Option<Vec<usize>> = None;
    let mut moduli: Vec<u64> = Vec::new();
    let mut residues: Vec<Vec<u64>> = vec![Vec::new(); 2 * cols];
    let mut covered = 0.0;
    let mut skipped = 0;
    for (f, s) in gaussian_primes() {
        if covered >= target {
            break;
        }
        let p = f.modulus();
        let bar = Barrett::new(p);
        let (mut plus, mut minus) = reduced_matrix(&digits, rows * cols, p, s, &bar);
        let (piv_plus, det_plus) = echelon(rows, cols, &mut plus, &f, &bar);
        let (piv_minus, det_minus) = echelon(rows, cols, &mut minus, &f, &bar);
        let reference = pivots_ref.get_or_insert_with(|| piv_plus.clone());
        if reference.len() != rows {
            return None;
        }
        if piv_plus != *reference || piv_minus != *reference {
            skipped += 1;
            if skipped > 8 {
                return None;
            }
            continue;
        }
        let free: Vec<usize> = (0..cols).filter(|c| !reference.contains(c)).collect();
        if free.len() != coeffs.len() {
            return None;
        }
        let (cp, cm): (Vec<u64>, Vec<u64>) = (0..coeffs.len())
            .map(|b| coeff_digits.images(b, p, s, &bar))
            .unzip();
        let xp = kernel_vector(cols, &plus, reference, &free, &cp, det_plus, p, &bar);
        let xm = kernel_vector(cols, &minus, reference, &free, &cm, det_minus, p, &bar);
        let half = f.inv(&2).expect("odd prime");
        let half_s = f.inv(&bar.mul(2, s)).expect("unit");
        for j in 0..cols {
            let re = bar.mul((xp[j] + xm[j]) % p, half);
            let im = bar.mul((xp[j] + p - xm[j]) % p, half_s);
            residues[2 * j].push(re);
            residues[2 * j + 1].push(im);
        }
        moduli.push(p);
        covered += (p as f64).log2();
    }
    let garner = Garner::new(&moduli);
    let lifted: Vec<BigInt> = residues.iter().map(|r| garner.lift(r)).collect();
    let x: Vec<GInt> = lifted
        .chunks(2)
        .map(|c| Complex::new(c[0].clone(), c[1].clone()))
        .collect();
    // Las Vegas check: the lift is only returned if it is a true kernel vector.
    let ok = (0..rows).all(|i| {
        let mut acc = Complex::new(BigInt::zero(), BigInt::zero());
        for j in 0..cols {
            let e = &a[i * cols + j];
            if !e.is_zero() && !x[j].is_zero() {
                acc += e * &x[j];
            }
        }
        acc.is_zero()
    });
    ok.then_some(x)
}

/// Garner reconstruction into `(-M/2, M/2]` for a fixed set of moduli.
struct Garner {
    moduli: Vec<u64>,
    /// `inverses[i][j] = moduli[j]^-1 mod moduli[i]` for `j < i`.
    inverses: Vec<Vec<u64>>,
    modulus: BigUint,
}

impl Garner {
    fn new(moduli: &[u64]) -> Self {
        let inverses = moduli
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                let f = PrimeField::new(p).expect("prime");
                moduli[..i]
                    .iter()
                    .map(|&q| f.inv(&(q % p)).expect("distinct primes"))
                    .collect()
            })
            .collect();
        Garner {
            moduli: moduli.to_vec(),
            inverses,
            modulus: moduli.iter().fold(BigUint::one(), |m, &p| m * p),
        }
    }

    fn lift(&self, residues: &[u64]) -> BigInt {
        let mut digits: Vec<u64> = Vec::with_capacity(self.moduli.len());
        for (i, &p) in self.moduli.iter().enumerate() {
            let bar = Barrett::new(p);
            let mut t = residues[i];
            for (&v, &inv) in digits.iter().zip(&self.inverses[i]) {
                t = bar.mul((t + p - v % p) % p, inv);
            }
            digits.push(t);
        }
        let mut x = BigUint::zero();
        for (&d, &p) in digits.iter().zip(&self.moduli).rev() {
            x = x * p + d;
        }
        if &x + &x > self.modulus {
            BigInt::from(x) - BigInt::from(self.modulus.clone())
        } else {
            BigInt::from(x)
        }
    }
}
