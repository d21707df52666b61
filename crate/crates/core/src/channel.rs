//! Interference-channel instances, random samplers, structured families and
//! the JSON interchange format.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{ComplexFloat, Field, GaussRat, GaussianRationals, PrimeField};
use crate::linalg::Mat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Destinations feed back on a separate reverse channel `G`.
    OutOfBand,
    /// Full duplex on one band: source-source `U` and destination-destination `W`.
    InBand,
}

impl Mode {
    pub fn tag(self) -> &'static str {
        match self {
            Mode::OutOfBand => "oob",
            Mode::InBand => "ib",
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChannelError {
    #[error("invalid shape: {0}")]
    Shape(String),
    #[error("structured family hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("malformed channel JSON: {0}")]
    Json(String),
}

/// One realisation of the K-user channel with `M` antennas per node. All
/// matrices are `KM x KM`; `H[i][j]` is the gain from source `j` to
/// destination `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelInstance<F: Field> {
    pub k: usize,
    pub m: usize,
    pub mode: Mode,
    pub reciprocal: bool,
    pub h: Mat<F>,
    pub g: Option<Mat<F>>,
    pub u: Option<Mat<F>>,
    pub w: Option<Mat<F>>,
}

impl<F: Field> ChannelInstance<F> {
    pub fn new(
        k: usize,
        m: usize,
        mode: Mode,
        h: Mat<F>,
        g: Option<Mat<F>>,
        u: Option<Mat<F>>,
        w: Option<Mat<F>>,
    ) -> Result<Self, ChannelError> {
        let reciprocal = g.as_ref().is_some_and(|g| *g == h.transpose());
        let ch = ChannelInstance {
            k,
            m,
            mode,
            reciprocal,
            h,
            g,
            u,
            w,
        };
        ch.validate()?;
        Ok(ch)
    }

    pub fn field(&self) -> &F {
        self.h.field()
    }

    pub fn dim(&self) -> usize {
        self.k * self.m
    }

    /// Checks the mode/shape contract.
    pub fn validate(&self) -> Result<(), ChannelError> {
        if self.k < 2 || self.m < 1 {
            return Err(ChannelError::Shape(format!(
                "need K >= 2 and M >= 1, got K={} M={}",
                self.k, self.m
            )));
        }
        let n = self.dim();
        let square = |name: &str, x: &Mat<F>| {
            if x.rows() != n || x.cols() != n {
                Err(ChannelError::Shape(format!(
                    "{name} is {}x{}, expected {n}x{n}",
                    x.rows(),
                    x.cols()
                )))
            } else {
                Ok(())
            }
        };
        square("H", &self.h)?;
        match self.mode {
            Mode::OutOfBand => {
                let g = self
                    .g
                    .as_ref()
                    .ok_or_else(|| ChannelError::Shape("out-of-band needs G".into()))?;
                square("G", g)?;
                if self.u.is_some() || self.w.is_some() {
                    return Err(ChannelError::Shape("out-of-band takes no U/W".into()));
                }
                if self.reciprocal && *g != self.h.transpose() {
                    return Err(ChannelError::Shape(
                        "reciprocal flag set but G != H^T".into(),
                    ));
                }
            }
            Mode::InBand => {
                if self.g.is_some() {
                    return Err(ChannelError::Shape("in-band takes no G".into()));
                }
                let u = self
                    .u
                    .as_ref()
                    .ok_or_else(|| ChannelError::Shape("in-band needs U".into()))?;
                let w = self
                    .w
                    .as_ref()
                    .ok_or_else(|| ChannelError::Shape("in-band needs W".into()))?;
                square("U", u)?;
                square("W", w)?;
            }
        }
        Ok(())
    }

    /// Relabels users by `perm` (user `i` becomes `perm[i]`).
    pub fn permute_users(&self, perm: &[usize]) -> Self {
        let m = self.m;
        let p = |x: &Mat<F>| {
            let mut out = x.clone();
            for i in 0..self.dim() {
                for j in 0..self.dim() {
                    out.set(
                        perm[i / m] * m + i % m,
                        perm[j / m] * m + j % m,
                        x.get(i, j).clone(),
                    );
                }
            }
            out
        };
        ChannelInstance {
            h: p(&self.h),
            g: self.g.as_ref().map(p),
            u: self.u.as_ref().map(p),
            w: self.w.as_ref().map(p),
            ..self.clone()
        }
    }

    pub fn map<G: Field>(
        &self,
        field: &G,
        f: impl Fn(&F::Elem) -> G::Elem + Copy,
    ) -> ChannelInstance<G> {
        ChannelInstance {
            k: self.k,
            m: self.m,
            mode: self.mode,
            reciprocal: self.reciprocal,
            h: self.h.map(field, f),
            g: self.g.as_ref().map(|x| x.map(field, f)),
            u: self.u.as_ref().map(|x| x.map(field, f)),
            w: self.w.as_ref().map(|x| x.map(field, f)),
        }
    }
}

/// Generic sampler: `draw` produces one entry at a time, in a fixed order
/// (H, then G or U and W, row-major).
pub fn sample_with<F: Field>(
    field: &F,
    k: usize,
    m: usize,
    mode: Mode,
    reciprocal: bool,
    mut draw: impl FnMut() -> F::Elem,
) -> Result<ChannelInstance<F>, ChannelError> {
    if k < 2 || m < 1 {
        return Err(ChannelError::Shape(format!(
            "need K >= 2 and M >= 1, got K={k} M={m}"
        )));
    }
    if reciprocal && mode == Mode::InBand {
        return Err(ChannelError::Shape(
            "reciprocity is implied for in-band; use an out-of-band instance".into(),
        ));
    }
    let n = k * m;
    let mut sample = || Mat::from_fn(field, n, n, |_, _| draw());
    let h = sample();
    let (g, u, w) = match mode {
        Mode::OutOfBand => {
            let g = if reciprocal { h.transpose() } else { sample() };
            (Some(g), None, None)
        }
        Mode::InBand => {
            let u = sample();
            let w = sample();
            (None, Some(u), Some(w))
        }
    };
    Ok(ChannelInstance {
        k,
        m,
        mode,
        reciprocal,
        h,
        g,
        u,
        w,
    })
}

/// Gaussian rational with numerator in `[-100, 100] \ {0}` and denominator in
/// `[1, 100]` for both parts. Never zero.
pub fn random_gauss_rat<R: Rng + ?Sized>(rng: &mut R) -> GaussRat {
    let mut part = || {
        let mut n = 0i64;
        while n == 0 {
            n = rng.random_range(-100..=100);
        }
        let d = rng.random_range(1..=100i64);
        (n, d)
    };
    let re = part();
    let im = part();
    GaussRat::from_parts(re, im)
}

pub fn random_complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re * s, im * s)
}

pub fn sample_exact<R: Rng + ?Sized>(
    k: usize,
    m: usize,
    mode: Mode,
    reciprocal: bool,
    rng: &mut R,
) -> Result<ChannelInstance<GaussianRationals>, ChannelError> {
    sample_with(&GaussianRationals, k, m, mode, reciprocal, || {
        random_gauss_rat(rng)
    })
}

/// Standard circularly-symmetric complex Gaussian entries.
pub fn sample_float<R: Rng + ?Sized>(
    k: usize,
    m: usize,
    mode: Mode,
    reciprocal: bool,
    rng: &mut R,
) -> Result<ChannelInstance<ComplexFloat>, ChannelError> {
    sample_with(&ComplexFloat, k, m, mode, reciprocal, || {
        random_complex_normal(rng)
    })
}

/// Uniform nonzero residues.
pub fn sample_modular<R: Rng + ?Sized>(
    field: &PrimeField,
    k: usize,
    m: usize,
    mode: Mode,
    reciprocal: bool,
    rng: &mut R,
) -> Result<ChannelInstance<PrimeField>, ChannelError> {
    sample_with(field, k, m, mode, reciprocal, || field.random_nonzero(rng))
}

/// Channel families with closed-form structure.
#[derive(Clone, Debug, PartialEq)]
pub enum StructuredFamily {
    /// Ones off the diagonal, zeros on it.
    AllOnes { k: usize },
    /// `H = D + u v^T` with `D` diagonal.
    Rank1PlusDiagonal {
        d: Vec<GaussRat>,
        u: Vec<GaussRat>,
        v: Vec<GaussRat>,
    },
    /// Symmetric 4x4 with zero diagonal; `h = [h12, h13, h14, h23, h24, h34]`.
    SymmetricZeroDiagonal4 { h: [GaussRat; 6] },
}

/// Builds a reciprocal out-of-band instance (`G = H^T`) for the family.
pub fn build_structured(
    family: &StructuredFamily,
) -> Result<ChannelInstance<GaussianRationals>, ChannelError> {
    let f = GaussianRationals;
    let h = match family {
        StructuredFamily::AllOnes { k } => {
            if *k < 2 {
                return Err(ChannelError::Shape(format!("need K >= 2, got {k}")));
            }
            Mat::from_fn(&f, *k, *k, |i, j| {
                if i == j {
                    GaussRat::default()
                } else {
                    GaussRat::from_int(1)
                }
            })
        }
        StructuredFamily::Rank1PlusDiagonal { d, u, v } => {
            let k = d.len();
            if k < 2 || u.len() != k || v.len() != k {
                return Err(ChannelError::Shape(
                    "D, u, v must share a length >= 2".into(),
                ));
            }
            if let Some(i) = d.iter().position(|x| x.is_zero()) {
                return Err(ChannelError::Hypothesis(format!(
                    "D is singular (D[{i}] = 0)"
                )));
            }
            if let Some(i) = u.iter().position(|x| x.is_zero()) {
                return Err(ChannelError::Hypothesis(format!(
                    "u has a zero component at {i}"
                )));
            }
            if let Some(i) = v.iter().position(|x| x.is_zero()) {
                return Err(ChannelError::Hypothesis(format!(
                    "v has a zero component at {i}"
                )));
            }
            Mat::from_fn(&f, k, k, |i, j| {
                let r = &u[i] * &v[j];
                if i == j {
                    &r + &d[i]
                } else {
                    r
                }
            })
        }
        StructuredFamily::SymmetricZeroDiagonal4 { h } => {
            let idx = |i: usize, j: usize| -> Option<usize> {
                let (a, b) = if i < j { (i, j) } else { (j, i) };
                match (a, b) {
                    (0, 1) => Some(0),
                    (0, 2) => Some(1),
                    (0, 3) => Some(2),
                    (1, 2) => Some(3),
                    (1, 3) => Some(4),
                    (2, 3) => Some(5),
                    _ => None,
                }
            };
            Mat::from_fn(&f, 4, 4, |i, j| {
                idx(i, j).map_or_else(GaussRat::default, |k| h[k].clone())
            })
        }
    };
    let k = h.rows();
    let g = h.transpose();
    ChannelInstance::new(k, 1, Mode::OutOfBand, h, Some(g), None, None)
}

// ---------------------------------------------------------------------------
// JSON

/// A channel of either scalar kind, as read from or written to JSON.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyChannel {
    Exact(ChannelInstance<GaussianRationals>),
    Float(ChannelInstance<ComplexFloat>),
}

fn bigint_json(n: &BigInt) -> Value {
    match i64::try_from(n) {
        Ok(v) => json!(v),
        Err(_) => json!(n.to_string()),
    }
}

fn ratio_json(r: &BigRational) -> Value {
    json!([bigint_json(r.numer()), bigint_json(r.denom())])
}

fn parse_bigint(v: &Value) -> Result<BigInt, ChannelError> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| ChannelError::Json(format!("non-integer in fraction: {n}"))),
        Value::String(s) => s
            .parse()
            .map_err(|_| ChannelError::Json(format!("bad integer `{s}`"))),
        other => Err(ChannelError::Json(format!("expected integer, got {other}"))),
    }
}

fn parse_ratio(v: &Value) -> Result<BigRational, ChannelError> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| ChannelError::Json(format!("expected [num, den], got {v}")))?;
    let n = parse_bigint(&arr[0])?;
    let d = parse_bigint(&arr[1])?;
    if d.is_zero() {
        return Err(ChannelError::Json("zero denominator".into()));
    }
    Ok(BigRational::new(n, d))
}

fn exact_json(z: &GaussRat) -> Value {
    json!({"re": ratio_json(&z.re), "im": ratio_json(&z.im)})
}

fn float_json(z: &Complex64) -> Value {
    json!({"re": z.re, "im": z.im})
}

/// Scalars with a JSON encoding: exact `{"re": [n, d], "im": [n, d]}`,
/// float `{"re": x, "im": y}`, modular residues as integers.
pub trait JsonScalar: Field {
    fn elem_json(e: &Self::Elem) -> Value;
}

impl JsonScalar for GaussianRationals {
    fn elem_json(e: &GaussRat) -> Value {
        exact_json(e)
    }
}

impl JsonScalar for ComplexFloat {
    fn elem_json(e: &Complex64) -> Value {
        float_json(e)
    }
}

impl JsonScalar for PrimeField {
    fn elem_json(e: &u64) -> Value {
        json!(e)
    }
}

pub fn matrix_json<F: JsonScalar>(m: &Mat<F>) -> Value {
    mat_json(m, F::elem_json)
}

fn mat_json<F: Field>(m: &Mat<F>, enc: impl Fn(&F::Elem) -> Value) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(&enc).collect()))
            .collect(),
    )
}

fn mat_from_json<F: Field>(
    field: &F,
    v: &Value,
    name: &str,
    dec: impl Fn(&Value) -> Result<F::Elem, ChannelError>,
) -> Result<Mat<F>, ChannelError> {
    let rows = v
        .as_array()
        .ok_or_else(|| ChannelError::Json(format!("{name} must be an array of rows")))?;
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        let row = row
            .as_array()
            .ok_or_else(|| ChannelError::Json(format!("{name} row must be an array")))?;
        out.push(row.iter().map(&dec).collect::<Result<Vec<_>, _>>()?);
    }
    if out.iter().any(|r| r.len() != out.len()) {
        return Err(ChannelError::Json(format!("{name} must be square")));
    }
    Ok(Mat::from_rows(field, out))
}

fn instance_json<F: Field>(
    ch: &ChannelInstance<F>,
    scalar: &str,
    enc: impl Fn(&F::Elem) -> Value + Copy,
) -> Value {
    let mut obj = serde_json::Map::new();
    obj.insert("K".into(), json!(ch.k));
    obj.insert("M".into(), json!(ch.m));
    obj.insert("mode".into(), json!(ch.mode.tag()));
    obj.insert("reciprocal".into(), json!(ch.reciprocal));
    obj.insert("scalar".into(), json!(scalar));
    obj.insert("H".into(), mat_json(&ch.h, enc));
    for (name, m) in [("G", &ch.g), ("U", &ch.u), ("W", &ch.w)] {
        if let Some(m) = m {
            obj.insert(name.into(), mat_json(m, enc));
        }
    }
    Value::Object(obj)
}

fn instance_from_json<F: Field>(
    field: &F,
    v: &Value,
    dec: impl Fn(&Value) -> Result<F::Elem, ChannelError> + Copy,
) -> Result<ChannelInstance<F>, ChannelError> {
    let get_usize = |key: &str, default: Option<usize>| -> Result<usize, ChannelError> {
        match v.get(key) {
            Some(x) => x.as_u64().map(|x| x as usize).ok_or_else(|| {
                ChannelError::Json(format!("`{key}` must be a non-negative integer"))
            }),
            None => default.ok_or_else(|| ChannelError::Json(format!("missing `{key}`"))),
        }
    };
    let k = get_usize("K", None)?;
    let m = get_usize("M", Some(1))?;
    let mode = match v.get("mode").and_then(Value::as_str) {
        Some("oob") | None => Mode::OutOfBand,
        Some("ib") => Mode::InBand,
        Some(other) => return Err(ChannelError::Json(format!("unknown mode `{other}`"))),
    };
    let mat = |name: &str| -> Result<Option<Mat<F>>, ChannelError> {
        v.get(name)
            .map(|x| mat_from_json(field, x, name, dec))
            .transpose()
    };
    let h = mat("H")?.ok_or_else(|| ChannelError::Json("missing `H`".into()))?;
    let declared_recip = v
        .get("reciprocal")
        .and_then(Value::as_bool)
        .unwrap_or(false);
    let mut g = mat("G")?;
    if g.is_none() && mode == Mode::OutOfBand && declared_recip {
        g = Some(h.transpose());
    }
    let ch = ChannelInstance {
        k,
        m,
        mode,
        reciprocal: declared_recip,
        h,
        g,
        u: mat("U")?,
        w: mat("W")?,
    };
    ch.validate()?;
    Ok(ch)
}

impl AnyChannel {
    pub fn to_json(&self) -> Value {
        match self {
            AnyChannel::Exact(ch) => instance_json(ch, "exact", exact_json),
            AnyChannel::Float(ch) => instance_json(ch, "float", float_json),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self, ChannelError> {
        match v.get("scalar").and_then(Value::as_str).unwrap_or("exact") {
            "exact" => Ok(AnyChannel::Exact(instance_from_json(
                &GaussianRationals,
                v,
                |x| {
                    let re = x
                        .get("re")
                        .ok_or_else(|| ChannelError::Json("scalar needs `re`".into()))?;
                    let im = x
                        .get("im")
                        .map(parse_ratio)
                        .transpose()?
                        .unwrap_or_else(BigRational::zero);
                    Ok(GaussRat::new(parse_ratio(re)?, im))
                },
            )?)),
            "float" => Ok(AnyChannel::Float(instance_from_json(
                &ComplexFloat,
                v,
                |x| {
                    let re = x
                        .get("re")
                        .and_then(Value::as_f64)
                        .ok_or_else(|| ChannelError::Json("scalar needs numeric `re`".into()))?;
                    let im = x.get("im").and_then(Value::as_f64).unwrap_or(0.0);
                    Ok(Complex64::new(re, im))
                },
            )?)),
            other => Err(ChannelError::Json(format!("unknown scalar kind `{other}`"))),
        }
    }

    pub fn parse(text: &str) -> Result<Self, ChannelError> {
        let v: Value = serde_json::from_str(text).map_err(|e| ChannelError::Json(e.to_string()))?;
        Self::from_json(&v)
    }

    pub fn k(&self) -> usize {
        match self {
            AnyChannel::Exact(c) => c.k,
            AnyChannel::Float(c) => c.k,
        }
    }
}

/// Float copy of an exact instance.
pub fn to_float(ch: &ChannelInstance<GaussianRationals>) -> ChannelInstance<ComplexFloat> {
    ch.map(&ComplexFloat, GaussRat::to_complex)
}

/// Image of an exact instance in F_p, using `sqrt(-1)` for `i`. `None` if a
/// denominator vanishes mod p.
pub fn reduce_mod_p(
    ch: &ChannelInstance<GaussianRationals>,
    field: &PrimeField,
) -> Option<ChannelInstance<PrimeField>> {
    let s = field.sqrt_minus_one()?;
    let red = |m: &Mat<GaussianRationals>| m.try_map(field, |z| field.reduce_gaussian(z, s));
    let opt = |m: &Option<Mat<GaussianRationals>>| -> Option<Option<Mat<PrimeField>>> {
        match m {
            Some(m) => red(m).map(Some),
            None => Some(None),
        }
    };
    Some(ChannelInstance {
        k: ch.k,
        m: ch.m,
        mode: ch.mode,
        reciprocal: ch.reciprocal,
        h: red(&ch.h)?,
        g: opt(&ch.g)?,
        u: opt(&ch.u)?,
        w: opt(&ch.w)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn reciprocal_sample_has_transposed_reverse_channel() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let ch = sample_exact(3, 1, Mode::OutOfBand, true, &mut rng).unwrap();
        assert_eq!(ch.g.as_ref().unwrap(), &ch.h.transpose());
        assert!(ch.reciprocal);
    }

    #[test]
    fn inband_mimo_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let ch = sample_exact(4, 2, Mode::InBand, false, &mut rng).unwrap();
        assert_eq!((ch.h.rows(), ch.h.cols()), (8, 8));
        assert!(ch.u.is_some() && ch.w.is_some() && ch.g.is_none());
        assert!(sample_exact(1, 1, Mode::InBand, false, &mut rng).is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = sample_exact(
            3,
            1,
            Mode::OutOfBand,
            false,
            &mut ChaCha8Rng::seed_from_u64(5),
        )
        .unwrap();
        let b = sample_exact(
            3,
            1,
            Mode::OutOfBand,
            false,
            &mut ChaCha8Rng::seed_from_u64(5),
        )
        .unwrap();
        assert_eq!(a, b);
        let c = sample_float(
            3,
            1,
            Mode::OutOfBand,
            true,
            &mut ChaCha8Rng::seed_from_u64(5),
        )
        .unwrap();
        let d = sample_float(
            3,
            1,
            Mode::OutOfBand,
            true,
            &mut ChaCha8Rng::seed_from_u64(5),
        )
        .unwrap();
        assert_eq!(c, d);
    }

    #[test]
    fn structured_families() {
        let ones = build_structured(&StructuredFamily::AllOnes { k: 3 }).unwrap();
        let expect = [[0, 1, 1], [1, 0, 1], [1, 1, 0]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(ones.h.get(i, j), &GaussRat::from_int(expect[i][j]));
            }
        }
        let r1 = build_structured(&StructuredFamily::Rank1PlusDiagonal {
            d: vec![GaussRat::from_int(-1); 3],
            u: vec![GaussRat::from_int(1); 3],
            v: vec![GaussRat::from_int(1); 3],
        })
        .unwrap();
        assert_eq!(r1.h, ones.h);
        let bad = StructuredFamily::Rank1PlusDiagonal {
            d: vec![
                GaussRat::from_int(-1),
                GaussRat::default(),
                GaussRat::from_int(1),
            ],
            u: vec![GaussRat::from_int(1); 3],
            v: vec![GaussRat::from_int(1); 3],
        };
        assert!(matches!(
            build_structured(&bad),
            Err(ChannelError::Hypothesis(_))
        ));

        let h: [GaussRat; 6] = std::array::from_fn(|i| GaussRat::from_int(i as i64 + 1));
        let s = build_structured(&StructuredFamily::SymmetricZeroDiagonal4 { h }).unwrap();
        assert_eq!(s.h, s.h.transpose());
        assert!((0..4).all(|i| s.h.get(i, i).is_zero()));
        assert_eq!(s.h.get(0, 3), &GaussRat::from_int(3));
        assert_eq!(s.h.get(2, 1), &GaussRat::from_int(4));
    }

    #[test]
    fn json_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let ex = AnyChannel::Exact(sample_exact(3, 1, Mode::OutOfBand, false, &mut rng).unwrap());
        assert_eq!(AnyChannel::from_json(&ex.to_json()).unwrap(), ex);
        let ib = AnyChannel::Exact(sample_exact(4, 2, Mode::InBand, false, &mut rng).unwrap());
        assert_eq!(AnyChannel::parse(&ib.to_json().to_string()).unwrap(), ib);
        let fl = AnyChannel::Float(sample_float(3, 1, Mode::OutOfBand, true, &mut rng).unwrap());
        assert_eq!(AnyChannel::from_json(&fl.to_json()).unwrap(), fl);
        assert!(AnyChannel::parse(r#"{"K":3,"mode":"oob","H":[[1]]}"#).is_err());
    }

    #[test]
    fn modular_image_preserves_reciprocity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let ch = sample_exact(3, 1, Mode::OutOfBand, true, &mut rng).unwrap();
        let p = PrimeField::random_31bit_gaussian(&mut rng);
        let red = reduce_mod_p(&ch, &p).unwrap();
        assert_eq!(red.g.unwrap(), red.h.transpose());
    }
}
