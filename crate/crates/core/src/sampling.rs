//! Sampling sets, generating functions, and truncated interpolation series.
//!
//! The uniform (cardinal) series uses sinc kernels on the integers; the
//! nonuniform series uses Lagrange-type kernels
//!
//! ```text
//! phi_n(z) = phi(z) / (phi'(lambda_n) * (z - lambda_n))
//! ```
//!
//! built from a generating function `phi` vanishing exactly on the sampling
//! set. Sine-type generating functions are produced in sine-wave-crossing
//! form `phi(z) = A sin(pi z) - g(z)` with `A > ||g||`, which pins one simple
//! zero in each interval `(n - 1/2, n + 1/2)`.

use crate::error::{Error, Result};
use crate::signal::Spectrum;
use crate::C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Normalized cardinal sine: `sin(pi x) / (pi x)`, 1 at the origin.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Integers,
    SineTypeZeros,
    BlockLattice,
}

/// Ordered sampling points `lambda_n`, `n` in `[-n_max, n_max]`.
#[derive(Debug, Clone)]
pub struct SamplingSet {
    points: Vec<f64>,
    n_max: usize,
    provenance: Provenance,
    separation: f64,
}

impl SamplingSet {
    /// The integer lattice `lambda_n = n`, `|n| <= n_max`.
    pub fn integers(n_max: usize) -> Self {
        let points = (-(n_max as i64)..=n_max as i64).map(|n| n as f64).collect();
        SamplingSet { points, n_max, provenance: Provenance::Integers, separation: 1.0 }
    }

    /// Validate and wrap an explicit odd-length point list centered on index 0.
    pub fn from_points(points: Vec<f64>, provenance: Provenance) -> Result<Self> {
        if points.is_empty() || points.len() % 2 == 0 {
            return Err(Error::InvalidParams("point list must have odd length 2*n_max + 1".into()));
        }
        let mut separation = f64::INFINITY;
        for i in 1..points.len() {
            let gap = points[i] - points[i - 1];
            if gap <= 0.0 {
                return Err(Error::InvalidParams("points must be strictly increasing".into()));
            }
            separation = separation.min(gap);
        }
        let n_max = points.len() / 2;
        Ok(SamplingSet { points, n_max, provenance, separation })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn separation(&self) -> f64 {
        self.separation
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Point with signed index `n`, `|n| <= n_max`.
    pub fn point(&self, n: i64) -> Result<f64> {
        let idx = n + self.n_max as i64;
        if idx < 0 || idx >= self.points.len() as i64 {
            return Err(Error::IndexOutOfRange(n, self.n_max));
        }
        Ok(self.points[idx as usize])
    }
}

#[derive(Debug, Clone)]
pub enum GenForm {
    /// `sin(pi z)`; zeros are the integers.
    ClosedSine,
    /// `A sin(pi z) - g(z)` with `g` bandlimited and `A > ||g||_{PW^1}`.
    SineWaveCrossing { amplitude: f64, g: Spectrum },
    /// `z^{delta} * prod_{0 < |lambda| < radius} (1 - z/lambda)` with
    /// symmetric pairing of index `n` and `-n` factors.
    TruncatedProduct { radius: f64 },
}

#[derive(Debug, Clone, Copy)]
pub enum DerivativeRule {
    Analytic,
    CentralDifference(f64),
}

/// Entire function vanishing exactly on a sampling set.
#[derive(Debug, Clone)]
pub struct GeneratingFunction {
    form: GenForm,
    zero_set: SamplingSet,
    derivative_rule: DerivativeRule,
}

impl GeneratingFunction {
    /// `sin(pi z)` with integer zeros out to `n_max`.
    pub fn closed_sine(n_max: usize) -> Self {
        GeneratingFunction {
            form: GenForm::ClosedSine,
            zero_set: SamplingSet::integers(n_max),
            derivative_rule: DerivativeRule::Analytic,
        }
    }

    /// Sine-wave-crossing form; locates its zeros on construction.
    pub fn sine_wave_crossing(amplitude: f64, g: Spectrum, n_max: usize) -> Result<Self> {
        let zero_set = find_sine_type_zeros(amplitude, &g, n_max)?;
        Ok(GeneratingFunction {
            form: GenForm::SineWaveCrossing { amplitude, g },
            zero_set,
            derivative_rule: DerivativeRule::Analytic,
        })
    }

    /// Truncated product over an explicit zero set.
    pub fn truncated_product(zero_set: SamplingSet, radius: f64) -> Self {
        GeneratingFunction {
            form: GenForm::TruncatedProduct { radius },
            zero_set,
            derivative_rule: DerivativeRule::CentralDifference(1e-5),
        }
    }

    pub fn zero_set(&self) -> &SamplingSet {
        &self.zero_set
    }

    pub fn form(&self) -> &GenForm {
        &self.form
    }

    /// Evaluate `phi(z)`.
    pub fn eval(&self, z: C64) -> Result<C64> {
        match &self.form {
            GenForm::ClosedSine => Ok((z * PI).sin()),
            GenForm::SineWaveCrossing { amplitude, g } => Ok((z * PI).sin() * *amplitude - g.eval(z)?),
            GenForm::TruncatedProduct { radius } => {
                let r = *radius;
                if r < 4.0 * z.norm() {
                    return Err(Error::RadiusTooSmall { radius: r, z_abs: z.norm() });
                }
                let n_max = self.zero_set.n_max();
                let pts = self.zero_set.points();
                let center = pts[n_max];
                let mut acc = if center.abs() < 1e-12 {
                    z // z^{delta} factor for a zero at the origin
                } else {
                    C64::new(1.0 - z.re / center, -z.im / center)
                };
                for j in 1..=n_max {
                    let lp = pts[n_max + j];
                    let lm = pts[n_max - j];
                    if lp.abs() >= r && lm.abs() >= r {
                        break;
                    }
                    if lp.abs() < r {
                        acc *= C64::new(1.0, 0.0) - z / lp;
                    }
                    if lm.abs() < r {
                        acc *= C64::new(1.0, 0.0) - z / lm;
                    }
                }
                Ok(acc)
            }
        }
    }

    /// `phi'(lambda_n)` under the configured derivative rule.
    pub fn derivative_at_zero(&self, n: i64) -> Result<C64> {
        let lambda = self.zero_set.point(n)?;
        match self.derivative_rule {
            DerivativeRule::Analytic => match &self.form {
                GenForm::ClosedSine => Ok(C64::new(PI * (PI * lambda).cos(), 0.0)),
                GenForm::SineWaveCrossing { amplitude, g } => {
                    Ok(C64::new(amplitude * PI * (PI * lambda).cos(), 0.0) - g.eval_derivative(lambda))
                }
                GenForm::TruncatedProduct { .. } => Err(Error::InvalidParams(
                    "truncated products have no analytic derivative rule".into(),
                )),
            },
            DerivativeRule::CentralDifference(h) => {
                let fp = self.eval(C64::new(lambda + h, 0.0))?;
                let fm = self.eval(C64::new(lambda - h, 0.0))?;
                Ok((fp - fm) / (2.0 * h))
            }
        }
    }
}

/// Locate the zeros of `A sin(pi z) - g(z)`, one per interval
/// `(n - 1/2, n + 1/2)` for `|n| <= n_max`.
///
/// Bracketed bisection followed by at most 8 Newton refinements; tolerance
/// 1e-13. `A > ||g||_infty` guarantees the sign change at the half-integer
/// bracket endpoints; when it fails, `BracketFailure` is the caller's signal
/// that the amplitude condition is violated.
pub fn find_sine_type_zeros(amplitude: f64, g: &Spectrum, n_max: usize) -> Result<SamplingSet> {
    let phi = |x: f64| amplitude * (PI * x).sin() - g.eval_real(x).re;
    let dphi = |x: f64| amplitude * PI * (PI * x).cos() - g.eval_derivative(x).re;
    let mut points = Vec::with_capacity(2 * n_max + 1);
    for n in -(n_max as i64)..=n_max as i64 {
        let mut lo = n as f64 - 0.5;
        let mut hi = n as f64 + 0.5;
        let flo = phi(lo);
        let fhi = phi(hi);
        if flo == 0.0 {
            points.push(lo);
            continue;
        }
        if flo.signum() == fhi.signum() {
            return Err(Error::BracketFailure(lo, hi));
        }
        let mut x = 0.5 * (lo + hi);
        for _ in 0..30 {
            x = 0.5 * (lo + hi);
            let fx = phi(x);
            if fx == 0.0 {
                break;
            }
            if fx.signum() == flo.signum() {
                lo = x;
            } else {
                hi = x;
            }
        }
        for _ in 0..8 {
            let fx = phi(x);
            let dx = dphi(x);
            if dx == 0.0 {
                break;
            }
            let step = fx / dx;
            x -= step;
            if step.abs() < 1e-13 {
                break;
            }
        }
        let d = dphi(x);
        if d.abs() < 1e-8 {
            return Err(Error::NonSimpleZero(x, d.abs()));
        }
        points.push(x);
    }
    SamplingSet::from_points(points, Provenance::SineTypeZeros)
}

/// Empirical sine-type bounds from strip sampling.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SineTypeReport {
    pub a_est: f64,
    pub b_est: f64,
    pub pass: bool,
}

/// Sample `|phi(xi + i eta)| / e^{pi |eta|}` on the lines `|eta| in {H, 2H}`
/// and report the empirical two-sided bounds.
pub fn verify_sine_type(phi: &GeneratingFunction, h: f64, strip_samples: usize) -> Result<SineTypeReport> {
    if h <= 0.0 || 2.0 * h > crate::signal::IM_T_GUARD {
        return Err(Error::InvalidParams(format!("strip height H = {h} outside (0, 5]")));
    }
    if strip_samples < 2 {
        return Err(Error::InvalidParams("need at least 2 strip samples".into()));
    }
    let xi_max = 10.0;
    let mut a_est = f64::INFINITY;
    let mut b_est: f64 = 0.0;
    for &eta in &[h, -h, 2.0 * h, -2.0 * h] {
        let scale = (PI * eta.abs()).exp();
        for j in 0..strip_samples {
            let xi = -xi_max + 2.0 * xi_max * j as f64 / (strip_samples - 1) as f64;
            let v = phi.eval(C64::new(xi, eta))?.norm() / scale;
            a_est = a_est.min(v);
            b_est = b_est.max(v);
        }
    }
    let pass = a_est > 1e-12 && b_est.is_finite();
    Ok(SineTypeReport { a_est, b_est, pass })
}

/// Generating function plus cached derivatives at its zeros: the Lagrange
/// kernels `phi_n`.
#[derive(Debug, Clone)]
pub struct KernelFamily {
    generating: GeneratingFunction,
    derivatives: Vec<C64>,
}

impl KernelFamily {
    pub fn new(generating: GeneratingFunction) -> Result<Self> {
        let n_max = generating.zero_set().n_max() as i64;
        let mut derivatives = Vec::with_capacity(2 * n_max as usize + 1);
        for n in -n_max..=n_max {
            let d = generating.derivative_at_zero(n)?;
            if d.norm() < 1e-8 {
                return Err(Error::NonSimpleZero(generating.zero_set().point(n)?, d.norm()));
            }
            derivatives.push(d);
        }
        Ok(KernelFamily { generating, derivatives })
    }

    /// Sinc kernels on the integer lattice.
    pub fn integer_lattice(n_max: usize) -> Self {
        KernelFamily::new(GeneratingFunction::closed_sine(n_max)).expect("integer lattice is valid")
    }

    pub fn generating(&self) -> &GeneratingFunction {
        &self.generating
    }

    pub fn zero_set(&self) -> &SamplingSet {
        self.generating.zero_set()
    }

    pub fn n_max(&self) -> usize {
        self.generating.zero_set().n_max()
    }

    pub fn derivative(&self, n: i64) -> Result<C64> {
        let idx = n + self.n_max() as i64;
        if idx < 0 || idx >= self.derivatives.len() as i64 {
            return Err(Error::IndexOutOfRange(n, self.n_max()));
        }
        Ok(self.derivatives[idx as usize])
    }

    /// Evaluate `phi_n(z)`; the removable singularity at `z = lambda_n`
    /// returns the limit value 1.
    pub fn eval(&self, n: i64, z: C64) -> Result<C64> {
        let lambda = self.zero_set().point(n)?;
        let dz = z - C64::new(lambda, 0.0);
        if dz.norm() < 1e-8 {
            return Ok(C64::new(1.0, 0.0));
        }
        // The integer lattice reduces to a shifted sinc in closed form; this
        // avoids the sin(pi z) roundoff near distant integers.
        if matches!(self.generating.form(), GenForm::ClosedSine) && z.im == 0.0 {
            return Ok(C64::new(sinc(z.re - lambda), 0.0));
        }
        let phi = self.generating.eval(z)?;
        Ok(phi / (self.derivative(n)? * dz))
    }

    /// Shared-prefactor evaluation: `phi(t)` once, then all kernels at `t`.
    /// Returns the kernel values for `|n| <= n_trunc`.
    pub fn eval_all(&self, n_trunc: usize, t: f64) -> Result<Vec<C64>> {
        if n_trunc > self.n_max() {
            return Err(Error::IndexOutOfRange(n_trunc as i64, self.n_max()));
        }
        let z = C64::new(t, 0.0);
        let phi = match self.generating.form() {
            GenForm::ClosedSine => None,
            _ => Some(self.generating.eval(z)?),
        };
        let mut out = Vec::with_capacity(2 * n_trunc + 1);
        for n in -(n_trunc as i64)..=n_trunc as i64 {
            let lambda = self.zero_set().point(n)?;
            let dz = t - lambda;
            let v = if dz.abs() < 1e-8 {
                C64::new(1.0, 0.0)
            } else {
                match phi {
                    None => C64::new(sinc(dz), 0.0),
                    Some(p) => p / (self.derivative(n)? * dz),
                }
            };
            out.push(v);
        }
        Ok(out)
    }
}

/// Samples `f(n)` for `|n| <= n_trunc` (one quadrature per sample).
pub fn integer_samples(f: &Spectrum, n_trunc: usize) -> Vec<C64> {
    (-(n_trunc as i64)..=n_trunc as i64).map(|n| f.eval_real(n as f64)).collect()
}

/// Truncated cardinal series `sum_{|n|<=N} f(n) sinc(t - n)`.
pub fn shannon_series(f: &Spectrum, n_trunc: usize, t: f64) -> Result<C64> {
    if f.band_edge() > PI * (1.0 + 1e-12) {
        return Err(Error::InvalidParams("cardinal series needs band_edge <= pi".into()));
    }
    Ok(shannon_series_from_samples(&integer_samples(f, n_trunc), t))
}

/// Cardinal series from precomputed samples `f(-N) .. f(N)`.
pub fn shannon_series_from_samples(samples: &[C64], t: f64) -> C64 {
    let n_trunc = samples.len() / 2;
    let mut acc = C64::new(0.0, 0.0);
    for (i, &v) in samples.iter().enumerate() {
        let n = i as i64 - n_trunc as i64;
        acc += v * sinc(t - n as f64);
    }
    acc
}

/// Truncated nonuniform series `sum_{|n|<=N} f(lambda_n) phi_n(t)`.
pub fn nonuniform_series(f: &Spectrum, kernels: &KernelFamily, n_trunc: usize, t: f64) -> Result<C64> {
    if f.band_edge() > PI * (1.0 + 1e-12) {
        return Err(Error::InvalidParams("interpolation series needs band_edge <= pi".into()));
    }
    let samples = lattice_samples(f, kernels.zero_set(), n_trunc)?;
    nonuniform_series_from_samples(&samples, kernels, t)
}

/// Samples `f(lambda_n)` for `|n| <= n_trunc` over a sampling set.
pub fn lattice_samples(f: &Spectrum, set: &SamplingSet, n_trunc: usize) -> Result<Vec<C64>> {
    if n_trunc > set.n_max() {
        return Err(Error::IndexOutOfRange(n_trunc as i64, set.n_max()));
    }
    Ok((-(n_trunc as i64)..=n_trunc as i64)
        .map(|n| f.eval_real(set.point(n).expect("range checked")))
        .collect())
}

/// Nonuniform series from precomputed samples aligned with `|n| <= N`.
pub fn nonuniform_series_from_samples(samples: &[C64], kernels: &KernelFamily, t: f64) -> Result<C64> {
    let n_trunc = samples.len() / 2;
    let kvals = kernels.eval_all(n_trunc, t)?;
    let mut acc = C64::new(0.0, 0.0);
    for (&s, &k) in samples.iter().zip(&kvals) {
        acc += s * k;
    }
    Ok(acc)
}
