//! Frequency-domain signal representation for bandlimited function spaces.
//!
//! A [`Spectrum`] stores samples of f̂ on a symmetric grid over `[-sigma,
//! sigma]` together with a quadrature rule; the signal itself is recovered by
//!
//! ```text
//! f(t) = (1/2pi) * integral of fhat(w) exp(iwt) dw
//! ```
//!
//! Norms follow the normalized convention `((1/2sigma) int |fhat|^p)^{1/p}`,
//! which makes the constant spectrum have unit norm for every p and keeps the
//! norm-nesting inequality clean. All evaluation is plain quadrature against
//! the stored grid, so a spectrum is the single source of truth: whatever
//! error the grid introduces is shared consistently by every consumer.

use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::C64;
use serde::{Deserialize, Serialize};

/// Largest |Im t| accepted by [`Spectrum::eval`]. Strip verification of
/// sine-type functions needs complex evaluation; beyond this the exponential
/// weights make quadrature meaningless anyway.
pub const IM_T_GUARD: f64 = 10.0;

/// Default frequency-grid size: resolves Dirichlet-kernel oscillation for
/// truncation orders up to a few hundred.
pub const DEFAULT_GRID_LEN: usize = 4097;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quadrature {
    Trapezoid,
    Simpson,
}

/// Grid configuration for building spectra.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub band_edge: f64,
    pub len: usize,
    pub quadrature: Quadrature,
}

impl GridSpec {
    pub fn new(band_edge: f64, len: usize, quadrature: Quadrature) -> Self {
        GridSpec { band_edge, len, quadrature }
    }

    pub fn with_band(band_edge: f64) -> Self {
        GridSpec { band_edge, len: DEFAULT_GRID_LEN, quadrature: Quadrature::Trapezoid }
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec::with_band(std::f64::consts::PI)
    }
}

/// Complex frequency-domain samples of f̂ over `[-sigma, sigma]` plus the
/// quadrature rule that turns them into function values.
#[derive(Debug, Clone)]
pub struct Spectrum {
    band_edge: f64,
    grid: Vec<f64>,
    values: Vec<C64>,
    quadrature: Quadrature,
    weights: Vec<f64>,
}

fn quadrature_weights(grid: &[f64], rule: Quadrature) -> Result<Vec<f64>> {
    let n = grid.len();
    if n < 3 {
        return Err(Error::InvalidParams("grid needs at least 3 points".into()));
    }
    let h = grid[1] - grid[0];
    let mut w = vec![0.0; n];
    match rule {
        Quadrature::Trapezoid => {
            for wi in w.iter_mut() {
                *wi = h;
            }
            w[0] = 0.5 * h;
            w[n - 1] = 0.5 * h;
        }
        Quadrature::Simpson => {
            if n % 2 == 0 {
                return Err(Error::InvalidParams("Simpson rule needs an odd point count".into()));
            }
            w[0] = h / 3.0;
            w[n - 1] = h / 3.0;
            for (i, wi) in w.iter_mut().enumerate().take(n - 1).skip(1) {
                *wi = if i % 2 == 1 { 4.0 * h / 3.0 } else { 2.0 * h / 3.0 };
            }
        }
    }
    Ok(w)
}

impl Spectrum {
    /// Build a spectrum on a uniform grid from a function of omega.
    pub fn from_fn<F: Fn(f64) -> C64>(spec: GridSpec, f: F) -> Result<Self> {
        if spec.band_edge <= 0.0 {
            return Err(Error::InvalidParams("band_edge must be positive".into()));
        }
        if spec.len < 3 || spec.len % 2 == 0 {
            return Err(Error::InvalidParams("grid length must be odd and >= 3".into()));
        }
        let sigma = spec.band_edge;
        let n = spec.len;
        let h = 2.0 * sigma / (n - 1) as f64;
        let grid: Vec<f64> = (0..n).map(|j| -sigma + j as f64 * h).collect();
        let values: Vec<C64> = grid.iter().map(|&w| f(w)).collect();
        Spectrum::new(sigma, grid, values, spec.quadrature)
    }

    /// Build from explicit grid and values, validating the type invariants.
    pub fn new(band_edge: f64, grid: Vec<f64>, values: Vec<C64>, quadrature: Quadrature) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::InvalidParams("grid/values length mismatch".into()));
        }
        let n = grid.len();
        for i in 1..n {
            if grid[i] <= grid[i - 1] {
                return Err(Error::InvalidParams("grid must be strictly increasing".into()));
            }
        }
        if (grid[0] + band_edge).abs() > 1e-12 * band_edge || (grid[n - 1] - band_edge).abs() > 1e-12 * band_edge {
            return Err(Error::InvalidParams("grid must cover [-sigma, sigma] inclusive".into()));
        }
        for i in 0..n / 2 {
            if (grid[i] + grid[n - 1 - i]).abs() > 1e-12 * band_edge {
                return Err(Error::InvalidParams("grid must be symmetric about 0".into()));
            }
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFiniteResult("spectrum values must be finite".into()));
        }
        let weights = quadrature_weights(&grid, quadrature)?;
        Ok(Spectrum { band_edge, grid, values, quadrature, weights })
    }

    pub fn band_edge(&self) -> f64 {
        self.band_edge
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn quadrature(&self) -> Quadrature {
        self.quadrature
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// True if `other` lives on the same grid with the same band edge.
    pub fn same_grid(&self, other: &Spectrum) -> bool {
        self.band_edge == other.band_edge
            && self.grid.len() == other.grid.len()
            && self.quadrature == other.quadrature
    }

    /// Pointwise linear combination `a*self + b*other` on a shared grid.
    pub fn axpy(&self, a: C64, other: &Spectrum, b: C64) -> Result<Spectrum> {
        if !self.same_grid(other) {
            return Err(Error::GridMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&x, &y)| a * x + b * y)
            .collect();
        Spectrum::new(self.band_edge, self.grid.clone(), values, self.quadrature)
    }

    /// Scale the spectrum by a complex constant.
    pub fn scaled(&self, c: C64) -> Spectrum {
        let mut out = self.clone();
        for v in out.values.iter_mut() {
            *v *= c;
        }
        out
    }

    /// Evaluate the signal at a complex point:
    /// `(1/2pi) * quadrature of fhat(w) exp(iwt)`.
    pub fn eval(&self, t: C64) -> Result<C64> {
        if t.im.abs() > IM_T_GUARD {
            return Err(Error::StripExceeded(t.im, IM_T_GUARD));
        }
        let mut acc = C64::new(0.0, 0.0);
        if t.im == 0.0 {
            for ((&w, &v), &wt) in self.grid.iter().zip(&self.values).zip(&self.weights) {
                let (s, c) = (w * t.re).sin_cos();
                acc += v * C64::new(c, s) * wt;
            }
        } else {
            for ((&w, &v), &wt) in self.grid.iter().zip(&self.values).zip(&self.weights) {
                let phase = C64::new(0.0, 1.0) * t * w;
                acc += v * phase.exp() * wt;
            }
        }
        let out = acc / (2.0 * std::f64::consts::PI);
        if !out.re.is_finite() || !out.im.is_finite() {
            return Err(Error::NonFiniteResult(format!("eval at t = {t}")));
        }
        Ok(out)
    }

    /// Real-axis evaluation (cannot hit the strip guard).
    pub fn eval_real(&self, t: f64) -> C64 {
        self.eval(C64::new(t, 0.0)).expect("real-axis evaluation is total")
    }

    /// Derivative of the signal: quadrature of `iw * fhat * exp(iwt)`.
    pub fn eval_derivative(&self, t: f64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for ((&w, &v), &wt) in self.grid.iter().zip(&self.values).zip(&self.weights) {
            let (s, c) = (w * t).sin_cos();
            acc += v * C64::new(c, s) * C64::new(0.0, w) * wt;
        }
        acc / (2.0 * std::f64::consts::PI)
    }

    /// Normalized PW norm `((1/2sigma) int |fhat|^p)^{1/p}`; `p = inf` is the
    /// grid max of |fhat|.
    pub fn pw_norm(&self, p: f64) -> Result<f64> {
        if !(p >= 1.0) {
            return Err(Error::InvalidParams(format!("norm exponent p = {p} outside [1, inf]")));
        }
        if p.is_infinite() {
            return Ok(self.values.iter().map(|v| v.norm()).fold(0.0, f64::max));
        }
        let mut acc = 0.0;
        for (&v, &wt) in self.values.iter().zip(&self.weights) {
            acc += v.norm().powf(p) * wt;
        }
        Ok((acc / (2.0 * self.band_edge)).powf(1.0 / p))
    }
}

/// Frequency-domain inner product `(1/2sigma) int fhat * conj(ghat)`.
pub fn inner_product(a: &Spectrum, b: &Spectrum) -> Result<C64> {
    if !a.same_grid(b) {
        return Err(Error::GridMismatch);
    }
    let mut acc = C64::new(0.0, 0.0);
    for ((&x, &y), &wt) in a.values.iter().zip(&b.values).zip(&a.weights) {
        acc += x * y.conj() * wt;
    }
    Ok(acc / (2.0 * a.band_edge))
}

/// Spectrum of the reproducing kernel `r_lambda(t) = sin(sigma(t-lambda)) /
/// (pi (t-lambda))`, i.e. `fhat(w) = exp(-iw lambda)` on `[-sigma, sigma]`.
pub fn reproducing_kernel(lambda: f64, sigma: f64) -> Spectrum {
    reproducing_kernel_on(lambda, GridSpec::with_band(sigma))
}

/// Same as [`reproducing_kernel`] on an explicit grid.
pub fn reproducing_kernel_on(lambda: f64, spec: GridSpec) -> Spectrum {
    Spectrum::from_fn(spec, |w| {
        let (s, c) = (w * lambda).sin_cos();
        C64::new(c, -s)
    })
    .expect("kernel grid spec is valid")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignalFamily {
    TrigPolynomial,
    Fejer,
    EdgeSingularAlpha,
    ShiftedSinc,
    RandomSmooth,
}

/// Parameters for the built-in test-signal families.
///
/// Parameter layout per family:
/// - `TrigPolynomial`: odd-length list of real coefficients `c_{-d} .. c_d`
///   for `fhat(w) = sum c_m exp(-iwm)`; a two-element list `[degree, decay]`
///   draws random coefficients `c_m = u_m * exp(-|m|*decay)`, `u_m` uniform
///   in [-1,1), from `seed`.
/// - `Fejer`: no parameters; `fhat(w) = 1 - |w|/sigma`.
/// - `EdgeSingularAlpha`: `[alpha]` with `0 < alpha < 1`;
///   `fhat(w) = (1 - |w|/sigma)^(-alpha)` with the two endpoint nodes
///   replaced by the value one half-step inward (integrable singularity,
///   finite quadrature). `alpha >= 1/2` leaves the L2 family.
/// - `ShiftedSinc`: `[lambda]`; equals `reproducing_kernel(lambda, sigma)`.
/// - `RandomSmooth`: optional `[a, d]` (defaults `[12, 3]`);
///   `fhat(w) = exp(-a (w/sigma)^2) * sum_{|m|<=d} c_m exp(-iwm)` with
///   complex `c_m` drawn from `seed`. Decays fast in time, handy wherever a
///   generic well-behaved signal is needed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TestSignalParams {
    pub family: SignalFamily,
    pub parameters: Vec<f64>,
    pub seed: u64,
}

impl TestSignalParams {
    pub fn new(family: SignalFamily, parameters: Vec<f64>, seed: u64) -> Self {
        TestSignalParams { family, parameters, seed }
    }
}

/// Build a spectrum from a family description. Deterministic given the seed.
pub fn make_test_signal(params: &TestSignalParams, spec: GridSpec) -> Result<Spectrum> {
    let sigma = spec.band_edge;
    match params.family {
        SignalFamily::TrigPolynomial => {
            let coeffs: Vec<f64> = match params.parameters.len() {
                0 => {
                    return Err(Error::InvalidParams(
                        "trig_polynomial needs coefficients or [degree, decay]".into(),
                    ))
                }
                2 => {
                    let degree = params.parameters[0] as i64;
                    let decay = params.parameters[1];
                    if degree < 0 {
                        return Err(Error::InvalidParams("negative degree".into()));
                    }
                    let mut rng = SplitMix64::new(params.seed);
                    (-degree..=degree)
                        .map(|m| rng.next_sym() * (-(m.abs() as f64) * decay).exp())
                        .collect()
                }
                n if n % 2 == 1 => params.parameters.clone(),
                _ => {
                    return Err(Error::InvalidParams(
                        "coefficient list must have odd length c_{-d}..c_d".into(),
                    ))
                }
            };
            let d = (coeffs.len() / 2) as i64;
            Spectrum::from_fn(spec, |w| {
                let mut acc = C64::new(0.0, 0.0);
                for (i, &c) in coeffs.iter().enumerate() {
                    let m = i as i64 - d;
                    let (s, co) = (w * m as f64).sin_cos();
                    acc += C64::new(co, -s) * c;
                }
                acc
            })
        }
        SignalFamily::Fejer => Spectrum::from_fn(spec, |w| C64::new(1.0 - w.abs() / sigma, 0.0)),
        SignalFamily::EdgeSingularAlpha => {
            let alpha = *params
                .parameters
                .first()
                .ok_or_else(|| Error::InvalidParams("edge_singular_alpha needs [alpha]".into()))?;
            if !(0.0 < alpha && alpha < 1.0) {
                return Err(Error::InvalidParams(format!("alpha = {alpha} outside (0,1)")));
            }
            let h = 2.0 * sigma / (spec.len - 1) as f64;
            // Clip the endpoint nodes half a step inward so the integrable
            // singularity stays finite on the grid.
            let w_max = sigma - 0.5 * h;
            Spectrum::from_fn(spec, |w| {
                let ww = w.abs().min(w_max);
                C64::new((1.0 - ww / sigma).powf(-alpha), 0.0)
            })
        }
        SignalFamily::ShiftedSinc => {
            let lambda = *params
                .parameters
                .first()
                .ok_or_else(|| Error::InvalidParams("shifted_sinc needs [lambda]".into()))?;
            Ok(reproducing_kernel_on(lambda, spec))
        }
        SignalFamily::RandomSmooth => {
            let a = params.parameters.first().copied().unwrap_or(12.0);
            let d = params.parameters.get(1).copied().unwrap_or(3.0) as i64;
            if a <= 0.0 || d < 0 {
                return Err(Error::InvalidParams("random_smooth needs a > 0, d >= 0".into()));
            }
            let mut rng = SplitMix64::new(params.seed);
            let coeffs: Vec<C64> = (-d..=d).map(|_| C64::new(rng.next_sym(), rng.next_sym())).collect();
            Spectrum::from_fn(spec, |w| {
                let u = w / sigma;
                let env = (-a * u * u).exp();
                let mut acc = C64::new(0.0, 0.0);
                for (i, &c) in coeffs.iter().enumerate() {
                    let m = i as i64 - d;
                    let (s, co) = (w * m as f64).sin_cos();
                    acc += c * C64::new(co, -s);
                }
                acc * env
            })
        }
    }
}
