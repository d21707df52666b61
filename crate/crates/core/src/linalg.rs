//! Dense matrices over any [`Field`]: products, elimination, rank,
//! nullspace, determinant and inverse.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::algebra::Field;

#[derive(Clone, PartialEq)]
pub struct Mat<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> fmt::Debug for Mat<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "Mat {}x{} over {}",
            self.rows,
            self.cols,
            self.field.describe()
        )?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| self.field.format_elem(self.get(i, j)))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Row echelon data from [`Mat::rref`].
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    pub reduced: Mat<F>,
    pub pivots: Vec<usize>,
}

impl<F: Field> Mat<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Mat {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_fn(
        field: &F,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> F::Elem,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn from_rows(field: &F, rows: Vec<Vec<F::Elem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat {
            field: field.clone(),
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn diag(field: &F, d: &[F::Elem]) -> Self {
        let mut m = Self::zeros(field, d.len(), d.len());
        for (i, v) in d.iter().enumerate() {
            m.set(i, i, v.clone());
        }
        m
    }

    /// Block-diagonal matrix from square blocks.
    pub fn block_diag(field: &F, blocks: &[Mat<F>]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut m = Self::zeros(field, n, n);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, b.cols, "blocks must be square");
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(off + i, off + j, b.get(i, j).clone());
                }
            }
            off += b.rows;
        }
        m
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<F::Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn diagonal(&self) -> Vec<F::Elem> {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i).clone())
            .collect()
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat<F> {
        Mat::from_fn(&self.field, rows, cols, |i, j| {
            self.get(r0 + i, c0 + j).clone()
        })
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(&self.field, self.cols, self.rows, |i, j| {
            self.get(j, i).clone()
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| self.field.is_zero(v))
    }

    /// All entries outside the `block`×`block` diagonal blocks are zero.
    pub fn is_block_diagonal(&self, block: usize) -> bool {
        (0..self.rows).all(|i| {
            (0..self.cols).all(|j| i / block == j / block || self.field.is_zero(self.get(i, j)))
        })
    }

    pub fn mul(&self, o: &Mat<F>) -> Mat<F> {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        let f = &self.field;
        if let Some(data) = f.fast_mul(&self.data, &o.data, self.rows, self.cols, o.cols) {
            return Mat {
                field: f.clone(),
                rows: self.rows,
                cols: o.cols,
                data,
            };
        }
        let mut out = Mat::zeros(f, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..o.cols {
                    let v = f.add(out.get(i, j), &f.mul(a, o.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Mat<F>) -> Mat<F> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let f = &self.field;
        Mat {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| f.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, o: &Mat<F>) -> Mat<F> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let f = &self.field;
        Mat {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| f.sub(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: &F::Elem) -> Mat<F> {
        let f = &self.field;
        Mat {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| f.mul(a, c)).collect(),
        }
    }

    pub fn map<G: Field>(&self, field: &G, f: impl Fn(&F::Elem) -> G::Elem) -> Mat<G> {
        Mat {
            field: field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<G: Field>(
        &self,
        field: &G,
        f: impl Fn(&F::Elem) -> Option<G::Elem>,
    ) -> Option<Mat<G>> {
        let data = self.data.iter().map(f).collect::<Option<Vec<_>>>()?;
        Some(Mat {
            field: field.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(v.len(), self.cols);
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
            })
            .collect()
    }

    /// Reduced row echelon form. Exact fields pick the cheapest nonzero pivot
    /// in each column; floating point picks the largest magnitude.
    pub fn rref(&self) -> Echelon<F> {
        let f = &self.field;
        let mut m = self.clone();
        let scale = self.data.iter().map(|v| f.magnitude(v)).fold(0.0, f64::max);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let cand = (r..m.rows).filter(|&i| !f.near_zero(m.get(i, c), scale));
            let best = if f.is_exact() {
                cand.min_by_key(|&i| f.pivot_cost(m.get(i, c)))
            } else {
                cand.max_by(|&a, &b| {
                    f.magnitude(m.get(a, c))
                        .total_cmp(&f.magnitude(m.get(b, c)))
                })
            };
            let Some(p) = best else { continue };
            for j in 0..m.cols {
                m.data.swap(r * m.cols + j, p * m.cols + j);
            }
            let inv = f.inv(m.get(r, c)).expect("nonzero pivot");
            for j in c..m.cols {
                let v = f.mul(m.get(r, j), &inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || f.is_zero(m.get(i, c)) {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = f.sub_mul(m.get(i, j), &factor, m.get(r, j));
                    m.set(i, j, v);
                }
                if !f.is_exact() {
                    m.set(i, c, f.zero());
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { reduced: m, pivots }
    }

    pub fn rank(&self) -> usize {
        if let Some(r) = self.field.fast_rank(self.rows, self.cols, &self.data) {
            return r;
        }
        self.nullspace_with_pivots().0.len()
    }

    /// Basis of the right nullspace, one vector per free column. Vectors are
    /// nonzero in their own free column and zero in the other free columns;
    /// generic elimination puts a one there, fraction-free kernels may scale.
    pub fn nullspace(&self) -> Vec<Vec<F::Elem>> {
        self.nullspace_with_pivots().1
    }

    fn nullspace_with_pivots(&self) -> (Vec<usize>, Vec<Vec<F::Elem>>) {
        let f = &self.field;
        if let Some(out) = f.fast_nullspace(self.rows, self.cols, &self.data) {
            return out;
        }
        let Echelon { reduced, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let basis = free
            .iter()
            .map(|&fc| {
                let mut v = vec![f.zero(); self.cols];
                v[fc] = f.one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(reduced.get(r, fc));
                }
                v
            })
            .collect();
        (pivots, basis)
    }

    /// A nonzero multiple of `sum_b coeffs[b] e_b`, where `e_b` is the
    /// nullspace vector with a one in the b-th free column and zeros in the
    /// other free columns. Needs one coefficient per free column.
    pub fn nullspace_combination(&self, coeffs: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        if let Some(v) = f.fast_kernel_combination(self.rows, self.cols, &self.data, coeffs) {
            return v;
        }
        let (pivots, basis) = self.nullspace_with_pivots();
        assert_eq!(basis.len(), coeffs.len(), "one coefficient per free column");
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut z = vec![f.zero(); self.cols];
        for ((v, c), &fc) in basis.iter().zip(coeffs).zip(&free) {
            let w = f
                .div(c, &v[fc])
                .expect("basis vector is nonzero in its free column");
            for (zi, vi) in z.iter_mut().zip(v) {
                *zi = f.add(zi, &f.mul(&w, vi));
            }
        }
        z
    }

    pub fn det(&self) -> F::Elem {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let f = &self.field;
        if let Some(d) = f.fast_det(self.rows, &self.data) {
            return d;
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = f.one();
        for c in 0..n {
            let cand = (c..n).filter(|&i| !f.is_zero(m.get(i, c)));
            let best = if f.is_exact() {
                cand.min_by_key(|&i| f.pivot_cost(m.get(i, c)))
            } else {
                cand.max_by(|&a, &b| {
                    f.magnitude(m.get(a, c))
                        .total_cmp(&f.magnitude(m.get(b, c)))
                })
            };
            let Some(p) = best else { return f.zero() };
            if p != c {
                for j in 0..n {
                    m.data.swap(c * n + j, p * n + j);
                }
                det = f.neg(&det);
            }
            let piv = m.get(c, c).clone();
            det = f.mul(&det, &piv);
            let inv = f.inv(&piv).expect("nonzero pivot");
            for i in c + 1..n {
                if f.is_zero(m.get(i, c)) {
                    continue;
                }
                let factor = f.mul(m.get(i, c), &inv);
                for j in c..n {
                    let v = f.sub_mul(m.get(i, j), &factor, m.get(c, j));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Mat<F>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let f = &self.field;
        let aug = Mat::from_fn(f, n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                f.one()
            } else {
                f.zero()
            }
        });
        let e = aug.rref();
        if e.pivots.len() < n || e.pivots[n - 1] != n - 1 {
            return None;
        }
        Some(e.reduced.block(0, n, n, n))
    }
}

/// Determinant over the Gaussian integers by fraction-free elimination.
pub(crate) fn bareiss_det(n: usize, mut m: Vec<Complex<BigInt>>) -> Complex<BigInt> {
    let zero = || Complex::new(BigInt::zero(), BigInt::zero());
    let mut prev = Complex::new(BigInt::one(), BigInt::zero());
    let mut negate = false;
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i * n + c].is_zero()) else {
            return zero();
        };
        if p != c {
            for j in 0..n {
                m.swap(c * n + j, p * n + j);
            }
            negate = !negate;
        }
        let piv = m[c * n + c].clone();
        for i in c + 1..n {
            let lead = m[i * n + c].clone();
            for j in c + 1..n {
                let v = &piv * &m[i * n + j] - &lead * &m[c * n + j];
                m[i * n + j] = v / &prev;
            }
        }
        prev = piv;
    }
    if n == 0 {
        return Complex::new(BigInt::one(), BigInt::zero());
    }
    if negate {
        -prev
    } else {
        prev
    }
}

/// Fraction-free (Bareiss) elimination over the Gaussian integers. Returns
/// the pivot columns and one nullspace vector per free column, scaled by the
/// last pivot so that every back-substitution division is exact.
pub(crate) fn bareiss_nullspace(
    rows: usize,
    cols: usize,
    mut m: Vec<Complex<BigInt>>,
) -> (Vec<usize>, Vec<Vec<Complex<BigInt>>>) {
    let cost = |c: &Complex<BigInt>| c.re.bits() + c.im.bits();
    let mut pivots = Vec::new();
    let mut prev = Complex::new(BigInt::one(), BigInt::zero());
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows)
            .filter(|&i| !m[i * cols + c].is_zero())
            .min_by_key(|&i| cost(&m[i * cols + c]))
        else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                m.swap(r * cols + j, p * cols + j);
            }
        }
        let piv = m[r * cols + c].clone();
        for i in r + 1..rows {
            let lead = m[i * cols + c].clone();
            for j in c..cols {
                let v = &piv * &m[i * cols + j] - &lead * &m[r * cols + j];
                m[i * cols + j] = v / &prev;
            }
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let basis = free
        .iter()
        .map(|&fc| {
            let mut x = vec![Complex::new(BigInt::zero(), BigInt::zero()); cols];
            x[fc] = prev.clone();
            for (k, &pc) in pivots.iter().enumerate().rev() {
                let mut acc = Complex::new(BigInt::zero(), BigInt::zero());
                for j in pc + 1..cols {
                    if !x[j].is_zero() && !m[k * cols + j].is_zero() {
                        acc += &m[k * cols + j] * &x[j];
                    }
                }
                x[pc] = -acc / &m[k * cols + pc];
            }
            let content = x
                .iter()
                .fold(BigInt::zero(), |g, c| g.gcd(&c.re).gcd(&c.im));
            if !content.is_one() {
                for c in &mut x {
                    c.re /= &content;
                    c.im /= &content;
                }
            }
            x
        })
        .collect();
    (pivots, basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{GaussRat, GaussianRationals, PrimeField};
    use proptest::prelude::*;

    fn q(n: i64) -> GaussRat {
        GaussRat::from_int(n)
    }

    #[test]
    fn rank_nullspace_det_small() {
        let f = GaussianRationals;
        let m = Mat::from_rows(
            &f,
            vec![
                vec![q(1), q(2), q(3)],
                vec![q(2), q(4), q(6)],
                vec![q(1), q(0), q(1)],
            ],
        );
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(m.mul_vec(&ns[0]).iter().all(|v| v.is_zero()));
        assert!(m.det().is_zero());
        let a = Mat::from_rows(&f, vec![vec![q(2), GaussRat::i()], vec![q(1), q(3)]]);
        // 6 - i
        assert_eq!(a.det(), GaussRat::from_parts((6, 1), (-1, 1)));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Mat::identity(&f, 2));
    }

    proptest! {
        #[test]
        fn rank_nullity_over_fp(entries in prop::collection::vec(0u64..7, 12)) {
            let f = PrimeField::new(7).unwrap();
            let m = Mat::from_fn(&f, 3, 4, |i, j| entries[i * 4 + j]);
            let ns = m.nullspace();
            prop_assert_eq!(ns.len() + m.rank(), 4);
            for v in &ns {
                prop_assert!(m.mul_vec(v).iter().all(|x| *x == 0));
            }
        }

        #[test]
        fn fraction_free_nullspace_over_qi(
            inner in 1usize..4,
            parts in prop::collection::vec((-3i64..4, 1i64..5, -3i64..4, 1i64..5), 32),
        ) {
            // A 4x5 product through an inner dimension of 1..3 forces deficient ranks.
            let f = GaussianRationals;
            let e = |k: usize| {
                let (a, b, c, d) = parts[k];
                GaussRat::from_parts((a, b), (c, d))
            };
            let left = Mat::from_fn(&f, 4, inner, |i, j| e(i * 3 + j));
            let right = Mat::from_fn(&f, inner, 5, |i, j| e(16 + i * 5 + j));
            let m = left.mul(&right);
            let ns = m.nullspace();
            prop_assert_eq!(m.rank(), m.rref().pivots.len());
            prop_assert_eq!(ns.len() + m.rank(), 5);
            for v in &ns {
                prop_assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
            }
            let basis = Mat::from_fn(&f, ns.len(), 5, |i, j| ns[i][j].clone());
            prop_assert_eq!(basis.rref().pivots.len(), ns.len());
        }

        #[test]
        fn det_is_multiplicative(a in prop::collection::vec(0u64..11, 9), b in prop::collection::vec(0u64..11, 9)) {
            let f = PrimeField::new(11).unwrap();
            let ma = Mat::from_fn(&f, 3, 3, |i, j| a[i * 3 + j]);
            let mb = Mat::from_fn(&f, 3, 3, |i, j| b[i * 3 + j]);
            prop_assert_eq!(ma.mul(&mb).det(), f.mul(&ma.det(), &mb.det()));
        }
    }
}
