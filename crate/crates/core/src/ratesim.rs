//! Finite-SNR rates of the three-phase out-of-band scheme: noise
//! propagation, per-node power scaling, local search over the alignment
//! solutions and the time-sharing baseline.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::ComplexFloat;
use crate::channel::{random_complex_normal, sample_float, ChannelError, ChannelInstance, Mode};
use crate::linalg::Mat;
use crate::schemes::{verify_alignment, AlignmentSolution, SchemeError, SchemeKind};

#[derive(Debug, thiserror::Error)]
pub enum RateError {
    #[error("invalid power configuration: {0}")]
    InvalidPower(String),
    #[error("solution does not verify: {0}")]
    Unverified(String),
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
}

/// Per-node, per-slot transmit power and per-antenna noise variance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerConfig {
    pub power: f64,
    pub noise: f64,
}

impl PowerConfig {
    pub fn new(power: f64, noise: f64) -> Result<Self, RateError> {
        if !(power > 0.0 && noise > 0.0 && power.is_finite() && noise.is_finite()) {
            return Err(RateError::InvalidPower(format!(
                "need P > 0 and noise > 0, got P={power} noise={noise}"
            )));
        }
        Ok(PowerConfig { power, noise })
    }

    /// Unit noise, `P = 10^(snr/10)`.
    pub fn from_snr_db(snr_db: f64) -> Self {
        PowerConfig {
            power: 10f64.powf(snr_db / 10.0),
            noise: 1.0,
        }
    }

    pub fn snr_db(&self) -> f64 {
        10.0 * (self.power / self.noise).log10()
    }
}

/// Diagonal three-phase coding `(D1, D2, D3)` as vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Coding {
    pub d1: Vec<C64>,
    pub d2: Vec<C64>,
    pub d3: Vec<C64>,
}

impl Coding {
    pub fn from_solution(sol: &AlignmentSolution<ComplexFloat>) -> Result<Self, RateError> {
        if sol.scheme != SchemeKind::ThreePhase || sol.coding.len() != 3 {
            return Err(RateError::Unsupported(
                "rates are modelled for the three-phase scheme".into(),
            ));
        }
        let d = |i: usize| sol.coding[i].diagonal();
        Ok(Coding {
            d1: d(0),
            d2: d(1),
            d3: d(2),
        })
    }

    pub fn to_solution(
        &self,
        ch: &ChannelInstance<ComplexFloat>,
    ) -> Result<AlignmentSolution<ComplexFloat>, RateError> {
        let f = ComplexFloat;
        let coding = vec![
            Mat::diag(&f, &self.d1),
            Mat::diag(&f, &self.d2),
            Mat::diag(&f, &self.d3),
        ];
        Ok(AlignmentSolution::from_coding(
            ch,
            SchemeKind::ThreePhase,
            coding,
        )?)
    }
}

/// Single-antenna out-of-band channel as dense matrices.
#[derive(Clone, Debug)]
pub struct Model {
    k: usize,
    h: DMatrix<C64>,
    g: DMatrix<C64>,
}

fn to_dense(m: &Mat<ComplexFloat>) -> DMatrix<C64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| *m.get(i, j))
}

/// Pivot interferer of destination `i`: the first column other than `i`.
fn pivot(i: usize) -> usize {
    if i == 0 {
        1
    } else {
        0
    }
}

impl Model {
    pub fn new(ch: &ChannelInstance<ComplexFloat>) -> Result<Self, RateError> {
        if ch.mode != Mode::OutOfBand || ch.m != 1 {
            return Err(RateError::Unsupported(
                "rates are modelled for single-antenna out-of-band channels".into(),
            ));
        }
        let g = ch.g.as_ref().expect("validated out-of-band channel");
        Ok(Model {
            k: ch.k,
            h: to_dense(&ch.h),
            g: to_dense(g),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `H D3 G D1`, the path of the phase-one noise into phase three.
    fn loop_matrix(&self, c: &Coding) -> DMatrix<C64> {
        let k = self.k;
        DMatrix::from_fn(k, k, |i, j| {
            (0..k)
                .map(|l| self.h[(i, l)] * c.d3[l] * self.g[(l, j)])
                .sum::<C64>()
                * c.d1[j]
        })
    }

    /// `B = H D2 + H D3 G D1 H`.
    pub fn effective(&self, c: &Coding) -> DMatrix<C64> {
        let t = self.loop_matrix(c);
        let k = self.k;
        DMatrix::from_fn(k, k, |i, j| {
            self.h[(i, j)] * c.d2[j] + (0..k).map(|l| t[(i, l)] * self.h[(l, j)]).sum::<C64>()
        })
    }

    /// Combining weights `lambda_i = B[i][j0] / H[i][j0]`; destination `i`
    /// uses `y'_i - lambda_i y_i`.
    pub fn lambda(&self, b: &DMatrix<C64>) -> Vec<C64> {
        (0..self.k)
            .map(|i| b[(i, pivot(i))] / self.h[(i, pivot(i))])
            .collect()
    }

    /// Per-user SINR with symbols of power `p_sym` and the aligning
    /// combiner. Residual interference (zero for an exact solution) counts as
    /// noise.
    pub fn sinr(&self, c: &Coding, p_sym: f64, noise: f64) -> Vec<f64> {
        let lambda = self.lambda(&self.effective(c));
        self.sinr_with_combiner(c, &lambda, p_sym, noise)
    }

    /// Per-user SINR when destination `i` forms `y'_i - lambda[i] y_i`. The
    /// phase-one noise reaches both observations and is tracked jointly.
    pub fn sinr_with_combiner(
        &self,
        c: &Coding,
        lambda: &[C64],
        p_sym: f64,
        noise: f64,
    ) -> Vec<f64> {
        let k = self.k;
        let t = self.loop_matrix(c);
        let b = self.effective(c);
        (0..k)
            .map(|i| {
                let l = lambda[i];
                let signal = (b[(i, i)] - l * self.h[(i, i)]).norm_sqr() * p_sym;
                let interference: f64 = (0..k)
                    .filter(|&j| j != i)
                    .map(|j| (b[(i, j)] - l * self.h[(i, j)]).norm_sqr())
                    .sum::<f64>()
                    * p_sym;
                let relay: f64 = (0..k).map(|q| (self.h[(i, q)] * c.d3[q]).norm_sqr()).sum();
                let echo: f64 = (0..k)
                    .map(|j| (t[(i, j)] - if i == j { l } else { C64::new(0.0, 0.0) }).norm_sqr())
                    .sum();
                let noise_var = noise * (1.0 + relay + echo);
                signal / (interference + noise_var)
            })
            .collect()
    }

    /// Transmit power of every node in each of the three slots.
    pub fn phase_powers(&self, c: &Coding, p_sym: f64, noise: f64) -> [Vec<f64>; 3] {
        let k = self.k;
        let phase1 = vec![p_sym; k];
        let rx: Vec<f64> = (0..k)
            .map(|j| (0..k).map(|q| self.h[(j, q)].norm_sqr()).sum::<f64>() * p_sym + noise)
            .collect();
        let phase2: Vec<f64> = (0..k).map(|j| c.d1[j].norm_sqr() * rx[j]).collect();
        let phase3 = (0..k)
            .map(|j| {
                // Source j sends d2_j x_j + d3_j (G D1 (H x + n) + n~)_j.
                let gd1: Vec<C64> = (0..k).map(|l| self.g[(j, l)] * c.d1[l]).collect();
                let sym: f64 = (0..k)
                    .map(|q| {
                        let via: C64 = (0..k).map(|l| gd1[l] * self.h[(l, q)]).sum();
                        let direct = if q == j { c.d2[j] } else { C64::new(0.0, 0.0) };
                        (direct + c.d3[j] * via).norm_sqr()
                    })
                    .sum();
                let fwd_noise: f64 = gd1.iter().map(|z| z.norm_sqr()).sum::<f64>() + 1.0;
                sym * p_sym + noise * c.d3[j].norm_sqr() * fwd_noise
            })
            .collect();
        [phase1, phase2, phase3]
    }

    /// Uses the scheme's scaling freedom `D1 -> a D1, D2 -> ab D2,
    /// D3 -> b D3` (which scales `B` by `ab` and keeps alignment) to make
    /// the strongest node tight in each slot, with `P_sym = P`.
    pub fn scale_to_power(&self, c: &Coding, power: &PowerConfig) -> (Coding, f64) {
        let p_sym = power.power;
        let mut out = c.clone();
        let peak = |v: &[f64]| v.iter().cloned().fold(0.0, f64::max);
        let m2 = peak(&self.phase_powers(&out, p_sym, power.noise)[1]);
        if m2 > 0.0 && m2.is_finite() {
            let a = (power.power / m2).sqrt();
            out.d1.iter_mut().for_each(|z| *z *= a);
            out.d2.iter_mut().for_each(|z| *z *= a);
        }
        let m3 = peak(&self.phase_powers(&out, p_sym, power.noise)[2]);
        if m3 > 0.0 && m3.is_finite() {
            let b = (power.power / m3).sqrt();
            out.d2.iter_mut().for_each(|z| *z *= b);
            out.d3.iter_mut().for_each(|z| *z *= b);
        }
        (out, p_sym)
    }
}

fn check_verified(
    ch: &ChannelInstance<ComplexFloat>,
    sol: &AlignmentSolution<ComplexFloat>,
) -> Result<(), RateError> {
    let rep = verify_alignment(ch, SchemeKind::ThreePhase, sol)?;
    if rep.passed() {
        Ok(())
    } else {
        let what: Vec<String> = rep.failures().iter().map(|c| c.label.clone()).collect();
        Err(RateError::Unverified(what.join("; ")))
    }
}

/// Per-user SINR of a verified three-phase solution, symbols at power `P`.
pub fn effective_sinr(
    ch: &ChannelInstance<ComplexFloat>,
    sol: &AlignmentSolution<ComplexFloat>,
    power: &PowerConfig,
) -> Result<Vec<f64>, RateError> {
    let model = Model::new(ch)?;
    let c = Coding::from_solution(sol)?;
    check_verified(ch, sol)?;
    Ok(model.sinr(&c, power.power, power.noise))
}

#[derive(Clone, Debug)]
pub struct PowerScaled {
    pub solution: AlignmentSolution<ComplexFloat>,
    pub p_sym: f64,
    /// `[phase][node]`.
    pub phase_powers: [Vec<f64>; 3],
}

/// Rescales a verified solution so every node meets the per-slot power cap
/// with the strongest node tight in each slot.
pub fn apply_power_constraints(
    ch: &ChannelInstance<ComplexFloat>,
    sol: &AlignmentSolution<ComplexFloat>,
    power: &PowerConfig,
) -> Result<PowerScaled, RateError> {
    let model = Model::new(ch)?;
    check_verified(ch, sol)?;
    let (c, p_sym) = model.scale_to_power(&Coding::from_solution(sol)?, power);
    let phase_powers = model.phase_powers(&c, p_sym, power.noise);
    Ok(PowerScaled {
        solution: c.to_solution(ch)?,
        p_sym,
        phase_powers,
    })
}

/// `(1/K) sum_i log2(1 + |h_ii|^2 P / noise)`; `boosted` lets each user
/// spend the power of all K slots in its own slot.
pub fn time_sharing_from_gains(direct: &[C64], power: &PowerConfig, boosted: bool) -> f64 {
    let k = direct.len() as f64;
    let p = if boosted {
        power.power * k
    } else {
        power.power
    };
    direct
        .iter()
        .map(|h| (1.0 + h.norm_sqr() * p / power.noise).log2())
        .sum::<f64>()
        / k
}

pub fn time_sharing_rate<F: crate::algebra::Field<Elem = C64>>(
    ch: &ChannelInstance<F>,
    power: &PowerConfig,
    boosted: bool,
) -> f64 {
    let direct: Vec<C64> = (0..ch.dim()).map(|i| *ch.h.get(i, i)).collect();
    time_sharing_from_gains(&direct, power, boosted)
}

/// Forward slots charged in the rate; `charge_feedback` adds the reverse slot.
pub fn rate_divisor(charge_feedback: bool) -> f64 {
    let s = SchemeKind::ThreePhase;
    (s.forward_slots()
        + if charge_feedback {
            s.reverse_slots()
        } else {
            0
        }) as f64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    pub snr_db: f64,
    pub sinr: Vec<f64>,
    pub rates: Vec<f64>,
    /// Bits per charged slot.
    pub sum_rate: f64,
    pub divisor: f64,
    pub ts_sum_rate: f64,
    pub p_sym: f64,
    pub phase_powers: [Vec<f64>; 3],
}

fn report(
    model: &Model,
    c: &Coding,
    p_sym: f64,
    power: &PowerConfig,
    opts: &RateOptions,
) -> RateReport {
    let sinr = model.sinr(c, p_sym, power.noise);
    let divisor = rate_divisor(opts.charge_feedback);
    let rates: Vec<f64> = sinr.iter().map(|s| (1.0 + s).log2() / divisor).collect();
    let direct: Vec<C64> = (0..model.k).map(|i| model.h[(i, i)]).collect();
    RateReport {
        snr_db: power.snr_db(),
        sum_rate: rates.iter().sum(),
        sinr,
        rates,
        divisor,
        ts_sum_rate: time_sharing_from_gains(&direct, power, opts.boosted_time_sharing),
        p_sym,
        phase_powers: model.phase_powers(c, p_sym, power.noise),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateOptions {
    pub restarts: usize,
    pub iterations: usize,
    pub charge_feedback: bool,
    pub boosted_time_sharing: bool,
}

impl Default for RateOptions {
    fn default() -> Self {
        RateOptions {
            restarts: 8,
            iterations: 400,
            charge_feedback: false,
            boosted_time_sharing: false,
        }
    }
}

// ---------------------------------------------------------------------------
// Solution family

/// A point of the three-phase solution set, stored as complex coordinates.
///
/// K=3: `(z2, z3, v)` with `D1 = (1, z2, z3)` and `v` in C^6 projected onto
/// the `(D2, D3)` nullspace, which has dimension 3 for every `D1`.
///
/// K=4: `(z2, z3, z4, x, c)` with `D1 = (1, z2, z3, z4)` and `x` the free
/// entries of a nontrivial null vector normalized by `d2_1 = 0`,
/// `d3_1 = 1`. The admissible `D1` form a curve, so these coordinates are
/// kept on the variety `A(D1) x = 0` by projection. `c` adds the trivial
/// null direction `D2 += c I`, which leaves the effective channel after
/// combining unchanged but moves the transmit powers.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyPoint(pub Vec<C64>);

pub struct SolutionFamily {
    model: Model,
    /// `A(D1) = base + sum_q d1_q slope[q]` (the map is affine in `D1`).
    base: DMatrix<C64>,
    slope: Vec<DMatrix<C64>>,
}

const NULL_TOL: f64 = 1e-8;
const PROJECT_ITERS: usize = 30;
const PROJECT_TOL: f64 = 1e-12;
const MAX_SEEDS: usize = 200;

fn cz(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

impl SolutionFamily {
    pub fn new(ch: &ChannelInstance<ComplexFloat>) -> Result<Self, RateError> {
        let model = Model::new(ch)?;
        let k = model.k;
        if !(3..=4).contains(&k) {
            return Err(RateError::Unsupported(format!(
                "no constructive three-phase solution family for K={k} (K=3 and K=4 only)"
            )));
        }
        let mut fam = SolutionFamily {
            model,
            base: DMatrix::zeros(0, 0),
            slope: Vec::new(),
        };
        let zero = vec![cz(0.0, 0.0); k];
        fam.base = fam.coefficients(&zero);
        fam.slope = (0..k)
            .map(|q| {
                let mut e = zero.clone();
                e[q] = cz(1.0, 0.0);
                fam.coefficients(&e) - &fam.base
            })
            .collect();
        Ok(fam)
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    /// Complex coordinates of a point.
    pub fn dim(&self) -> usize {
        let k = self.model.k;
        if k == 3 {
            2 + 2 * k
        } else {
            (k - 1) + 2 * (k - 1) + 1
        }
    }

    /// Coefficients of the alignment equalities in `(d2, d3)` for fixed `D1`.
    fn coefficients(&self, d1: &[C64]) -> DMatrix<C64> {
        let k = self.model.k;
        let (h, g) = (&self.model.h, &self.model.g);
        // (G D1 H)_lj
        let gdh = DMatrix::from_fn(k, k, |l, j| {
            (0..k).map(|q| g[(l, q)] * d1[q] * h[(q, j)]).sum::<C64>()
        });
        let mut rows: Vec<Vec<C64>> = Vec::new();
        for r in 0..k {
            let js: Vec<usize> = (0..k).filter(|&j| j != r).collect();
            let j0 = js[0];
            for &j in &js[1..] {
                let mut row = vec![cz(0.0, 0.0); 2 * k];
                row[j0] += h[(r, j0)] * h[(r, j)];
                row[j] -= h[(r, j)] * h[(r, j0)];
                for l in 0..k {
                    row[k + l] = h[(r, l)] * (gdh[(l, j0)] * h[(r, j)] - gdh[(l, j)] * h[(r, j0)]);
                }
                rows.push(row);
            }
        }
        DMatrix::from_fn(rows.len(), 2 * k, |i, j| rows[i][j])
    }

    fn system(&self, d1: &[C64]) -> DMatrix<C64> {
        let mut a = self.base.clone();
        for (q, s) in self.slope.iter().enumerate() {
            a += s * d1[q];
        }
        a
    }

    /// Orthogonal projection of `v` onto the numerical nullspace of `a`.
    fn project_null(a: &DMatrix<C64>, v: &DVector<C64>) -> Option<DVector<C64>> {
        let svd = a.clone().svd(false, true);
        let vt = svd.v_t.as_ref()?;
        let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
        let mut out = v.clone();
        for (r, s) in svd.singular_values.iter().enumerate() {
            if *s > NULL_TOL * smax {
                let row = vt.row(r);
                let c: C64 = (0..v.len()).map(|j| row[j] * v[j]).sum();
                for j in 0..v.len() {
                    out[j] -= row[j].conj() * c;
                }
            }
        }
        Some(out)
    }

    fn split4(&self, y: &[C64]) -> (Vec<C64>, DVector<C64>) {
        let k = self.model.k;
        let mut d1 = vec![cz(1.0, 0.0)];
        d1.extend_from_slice(&y[..k - 1]);
        let free = &y[k - 1..3 * (k - 1)];
        let mut x = DVector::zeros(2 * k);
        for i in 1..k {
            x[i] = free[i - 1];
            x[k + i] = free[k - 2 + i];
        }
        x[k] = cz(1.0, 0.0);
        (d1, x)
    }

    /// Pulls the K=4 coordinates back onto `A(D1) x = 0` with minimum-norm
    /// Gauss-Newton steps. The shift `c` is left alone.
    fn project(&self, y: &[C64]) -> Option<FamilyPoint> {
        let k = self.model.k;
        let n = 3 * (k - 1);
        let mut y = y.to_vec();
        for _ in 0..PROJECT_ITERS {
            let (d1, x) = self.split4(&y);
            let a = self.system(&d1);
            let f = &a * &x;
            let scale = a.norm() * x.norm();
            if !scale.is_finite() {
                return None;
            }
            if f.norm() <= PROJECT_TOL * scale {
                return Some(FamilyPoint(y));
            }
            let mut jac = DMatrix::zeros(f.len(), n);
            for q in 1..k {
                jac.set_column(q - 1, &(&self.slope[q] * &x));
            }
            for i in 1..k {
                jac.set_column(k - 2 + i, &a.column(i));
                jac.set_column(2 * (k - 1) + i - 1, &a.column(k + i));
            }
            let step = jac.svd(true, true).solve(&f, 1e-14).ok()?;
            for i in 0..n {
                y[i] -= step[i];
            }
        }
        None
    }

    /// The coding a point stands for, or `None` when it is off the variety.
    pub fn coding(&self, p: &FamilyPoint) -> Option<Coding> {
        let k = self.model.k;
        let y = &p.0;
        if k == 3 {
            let d1 = vec![cz(1.0, 0.0), y[0], y[1]];
            let v = DVector::from_column_slice(&y[2..]);
            let z = Self::project_null(&self.system(&d1), &v)?;
            return Some(Coding {
                d1,
                d2: z.rows(0, k).iter().cloned().collect(),
                d3: z.rows(k, k).iter().cloned().collect(),
            });
        }
        let (d1, x) = self.split4(y);
        let c = y[3 * (k - 1)];
        Some(Coding {
            d1,
            d2: x.rows(0, k).iter().map(|z| z + c).collect(),
            d3: x.rows(k, k).iter().cloned().collect(),
        })
    }

    fn gaussian_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<C64> {
        (0..self.dim())
            .map(|_| random_complex_normal(rng))
            .collect()
    }

    /// A random point of the family.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<FamilyPoint> {
        if self.model.k == 3 {
            return Some(FamilyPoint(self.gaussian_point(rng)));
        }
        (0..MAX_SEEDS).find_map(|_| self.project(&self.gaussian_point(rng)))
    }

    /// A nearby point: Gaussian step of scale `step`, then back onto the family.
    pub fn perturb<R: Rng + ?Sized>(
        &self,
        p: &FamilyPoint,
        step: f64,
        rng: &mut R,
    ) -> Option<FamilyPoint> {
        let y: Vec<C64> =
            p.0.iter()
                .map(|z| z + random_complex_normal(rng) * step)
                .collect();
        if self.model.k == 3 {
            Some(FamilyPoint(y))
        } else {
            self.project(&y)
        }
    }

    /// Power-scaled coding and its sum rate.
    pub fn evaluate(
        &self,
        p: &FamilyPoint,
        power: &PowerConfig,
        opts: &RateOptions,
    ) -> Option<(Coding, f64, f64)> {
        let c = self.coding(p)?;
        let (c, p_sym) = self.model.scale_to_power(&c, power);
        let rate: f64 = self
            .model
            .sinr(&c, p_sym, power.noise)
            .iter()
            .map(|s| (1.0 + s).log2())
            .sum::<f64>()
            / rate_divisor(opts.charge_feedback);
        rate.is_finite().then_some((c, p_sym, rate))
    }
}

#[derive(Clone, Debug)]
pub struct Optimized {
    pub solution: AlignmentSolution<ComplexFloat>,
    pub report: RateReport,
    /// Best-so-far sum rate after each iteration, per restart.
    pub trace: Vec<Vec<f64>>,
}

/// Adaptive random search over the solution family. Each restart starts from
/// a random point and perturbs it with a step that grows on success and
/// shrinks on failure. Deterministic per seed.
pub fn optimize_sum_rate(
    ch: &ChannelInstance<ComplexFloat>,
    power: &PowerConfig,
    opts: &RateOptions,
    seed: u64,
) -> Result<Optimized, RateError> {
    let family = SolutionFamily::new(ch)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(Coding, f64, f64)> = None;
    let mut trace = Vec::new();
    for _ in 0..opts.restarts.max(1) {
        let Some(mut point) = family.sample(&mut rng) else {
            continue;
        };
        let mut cur = family.evaluate(&point, power, opts);
        let mut cur_rate = cur.as_ref().map_or(f64::NEG_INFINITY, |c| c.2);
        let mut step = 0.5;
        let mut curve = Vec::with_capacity(opts.iterations);
        for _ in 0..opts.iterations {
            let next = family.perturb(&point, step, &mut rng);
            match next.as_ref().and_then(|p| family.evaluate(p, power, opts)) {
                Some(e) if e.2 > cur_rate => {
                    point = next.expect("evaluated point");
                    cur_rate = e.2;
                    cur = Some(e);
                    step = (step * 1.5).min(2.0);
                }
                _ => step = (step * 0.85).max(1e-6),
            }
            curve.push(cur_rate);
        }
        trace.push(curve);
        if let Some(c) = cur {
            if best.as_ref().is_none_or(|b| c.2 > b.2) {
                best = Some(c);
            }
        }
    }
    let (coding, p_sym, _) = best
        .ok_or_else(|| RateError::Unsupported("no admissible alignment solution found".into()))?;
    let solution = coding.to_solution(ch)?;
    check_verified(ch, &solution)?;
    let report = report(family.model(), &coding, p_sym, power, opts);
    Ok(Optimized {
        solution,
        report,
        trace,
    })
}

/// Rate report for a fixed (already power-scaled) coding.
pub fn rate_report(
    ch: &ChannelInstance<ComplexFloat>,
    scaled: &PowerScaled,
    power: &PowerConfig,
    opts: &RateOptions,
) -> Result<RateReport, RateError> {
    let model = Model::new(ch)?;
    Ok(report(
        &model,
        &Coding::from_solution(&scaled.solution)?,
        scaled.p_sym,
        power,
        opts,
    ))
}

// ---------------------------------------------------------------------------
// Noise-draw oracle

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SinrEstimate {
    pub sinr: f64,
    pub std_err: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NoiseDrawEstimate {
    pub sinr: Vec<SinrEstimate>,
    /// Empirical transmit power `[phase][node]`.
    pub phase_powers: [Vec<f64>; 3],
}

fn cn<R: Rng + ?Sized>(var: f64, rng: &mut R) -> C64 {
    random_complex_normal(rng) * var.sqrt()
}

/// Simulates the three slots with Gaussian symbols and noise and estimates
/// each destination's SINR after the `y' - lambda y` combination: the gain is
/// regressed on the symbol and the residual counts as noise.
pub fn monte_carlo_sinr<R: Rng + ?Sized>(
    model: &Model,
    c: &Coding,
    p_sym: f64,
    noise: f64,
    draws: usize,
    rng: &mut R,
) -> NoiseDrawEstimate {
    let k = model.k;
    let lambda = model.lambda(&model.effective(c));
    let mut cross = vec![C64::new(0.0, 0.0); k];
    let mut xpow = vec![0.0; k];
    let mut powers = [vec![0.0; k], vec![0.0; k], vec![0.0; k]];
    let mut samples: Vec<Vec<(C64, C64)>> = vec![Vec::with_capacity(draws); k];
    for _ in 0..draws {
        let x: Vec<C64> = (0..k).map(|_| cn(p_sym, rng)).collect();
        let y: Vec<C64> = (0..k)
            .map(|i| (0..k).map(|j| model.h[(i, j)] * x[j]).sum::<C64>() + cn(noise, rng))
            .collect();
        let back: Vec<C64> = (0..k).map(|i| c.d1[i] * y[i]).collect();
        let f: Vec<C64> = (0..k)
            .map(|i| (0..k).map(|j| model.g[(i, j)] * back[j]).sum::<C64>() + cn(noise, rng))
            .collect();
        let s: Vec<C64> = (0..k).map(|i| c.d2[i] * x[i] + c.d3[i] * f[i]).collect();
        for i in 0..k {
            powers[0][i] += x[i].norm_sqr();
            powers[1][i] += back[i].norm_sqr();
            powers[2][i] += s[i].norm_sqr();
            let y3 = (0..k).map(|j| model.h[(i, j)] * s[j]).sum::<C64>() + cn(noise, rng);
            let comb = y3 - lambda[i] * y[i];
            cross[i] += comb * x[i].conj();
            xpow[i] += x[i].norm_sqr();
            samples[i].push((comb, x[i]));
        }
    }
    let n = draws as f64;
    let sinr = (0..k)
        .map(|i| {
            let gain = cross[i] / xpow[i];
            let err: f64 = samples[i]
                .iter()
                .map(|(cmb, x)| (cmb - gain * x).norm_sqr())
                .sum::<f64>()
                / n;
            let sinr = gain.norm_sqr() * p_sym / err;
            // Residual power is exponential (relative sd 1/sqrt(n)); the
            // regressed gain adds about 2/sqrt(n sinr).
            let std_err = sinr * (1.0 / n + 4.0 / (n * sinr.max(f64::MIN_POSITIVE))).sqrt();
            SinrEstimate { sinr, std_err }
        })
        .collect();
    for p in powers.iter_mut() {
        p.iter_mut().for_each(|v| *v /= n);
    }
    NoiseDrawEstimate {
        sinr,
        phase_powers: powers,
    }
}

// ---------------------------------------------------------------------------
// Curves

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub snr_db: f64,
    pub ia_sum_rate: f64,
    pub ts_sum_rate: f64,
    pub trials: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialDetail {
    pub trial: usize,
    pub snr_db: f64,
    pub ia_sum_rate: f64,
    pub ts_sum_rate: f64,
    pub sinr: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Curves {
    pub points: Vec<CurvePoint>,
    pub details: Vec<TrialDetail>,
}

#[derive(Clone, Debug)]
pub struct CurveConfig {
    pub k: usize,
    pub mode: Mode,
    /// Draw `G = H^T` instead of an independent reverse channel.
    pub reciprocal: bool,
    pub snr_db: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub rate: RateOptions,
    pub jobs: Option<usize>,
}

/// Averages optimized IA and time-sharing sum rates over `trials` float
/// channels at every grid point. Deterministic per seed.
pub fn monte_carlo_curves(cfg: &CurveConfig) -> Result<Curves, RateError> {
    if cfg.trials == 0 {
        return Err(RateError::Unsupported("trials must be at least 1".into()));
    }
    if cfg.mode != Mode::OutOfBand {
        return Err(RateError::Unsupported(
            "rate curves are produced for the out-of-band scheme".into(),
        ));
    }
    let mut master = ChaCha8Rng::seed_from_u64(cfg.seed);
    let seeds: Vec<u64> = (0..cfg.trials).map(|_| master.random()).collect();
    let one = |(t, &seed): (usize, &u64)| -> Result<Vec<TrialDetail>, RateError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = sample_float(cfg.k, 1, Mode::OutOfBand, cfg.reciprocal, &mut rng)?;
        cfg.snr_db
            .iter()
            .map(|&snr| {
                let power = PowerConfig::from_snr_db(snr);
                let opt = optimize_sum_rate(&ch, &power, &cfg.rate, rng.random())?;
                Ok(TrialDetail {
                    trial: t + 1,
                    snr_db: snr,
                    ia_sum_rate: opt.report.sum_rate,
                    ts_sum_rate: opt.report.ts_sum_rate,
                    sinr: opt.report.sinr,
                })
            })
            .collect()
    };
    let per_trial: Result<Vec<Vec<TrialDetail>>, RateError> = match cfg.jobs {
        Some(1) => seeds.iter().enumerate().map(one).collect(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(|| seeds.par_iter().enumerate().map(one).collect()),
        None => seeds.par_iter().enumerate().map(one).collect(),
    };
    let per_trial = per_trial?;
    let n = cfg.trials as f64;
    let points = cfg
        .snr_db
        .iter()
        .enumerate()
        .map(|(g, &snr)| CurvePoint {
            snr_db: snr,
            ia_sum_rate: per_trial.iter().map(|t| t[g].ia_sum_rate).sum::<f64>() / n,
            ts_sum_rate: per_trial.iter().map(|t| t[g].ts_sum_rate).sum::<f64>() / n,
            trials: cfg.trials,
        })
        .collect();
    Ok(Curves {
        points,
        details: per_trial.into_iter().flatten().collect(),
    })
}

pub const CSV_HEADER: &str = "snr_db,ia_sum_rate,ts_sum_rate,trials";

pub fn curves_to_csv(points: &[CurvePoint]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for p in points {
        s.push_str(&format!(
            "{},{:.9},{:.9},{}\n",
            p.snr_db, p.ia_sum_rate, p.ts_sum_rate, p.trials
        ));
    }
    s
}

/// High-SNR slope in bits per doubling of SNR between two grid points.
pub fn dof_slope(
    points: &[CurvePoint],
    lo_db: f64,
    hi_db: f64,
    pick: impl Fn(&CurvePoint) -> f64,
) -> Option<f64> {
    let at = |db: f64| {
        points
            .iter()
            .find(|p| (p.snr_db - db).abs() < 1e-9)
            .map(&pick)
    };
    let (lo, hi) = (at(lo_db)?, at(hi_db)?);
    Some((hi - lo) / ((hi_db - lo_db) / (10.0 * 2f64.log10())))
}

/// `a:step:b` in dB, inclusive of `b` when it lies on the grid.
pub fn parse_snr_grid(spec: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<f64> = spec
        .split(':')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|e| format!("bad SNR grid {spec:?}: {e}"))
        })
        .collect::<Result<_, _>>()?;
    match parts.as_slice() {
        [a] => Ok(vec![*a]),
        [a, step, b] if *step > 0.0 && b >= a => {
            let n = ((b - a) / step + 1e-9).floor() as usize;
            Ok((0..=n).map(|i| a + step * i as f64).collect())
        }
        _ => Err(format!("bad SNR grid {spec:?}; expected start:step:stop")),
    }
}
