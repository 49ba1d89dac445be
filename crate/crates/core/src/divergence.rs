//! Convergence/divergence diagnostics for truncated sampling series.
//!
//! The central quantity is the operator norm of the truncated cardinal
//! series from the L1-type space into bounded functions,
//!
//! ```text
//! ||S_N|| = sup over (t, w) of | sum_{|n|<=N} e^{iwn} sinc(t - n) |
//! ```
//!
//! (the extremal unit-norm spectrum concentrates at the worst frequency, so
//! the double sup realizes the operator norm under the normalized PW1 norm).
//! The sup grows like log N — the classical Lebesgue-constant mechanism —
//! and the maximizer sits just outside the sampling window near t = N + 1/3,
//! w = pi. A Walsh-analogue projection norm is included as the contrast
//! case whose dyadic partial sums have norm exactly 1.

use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::sampling::{sinc, KernelFamily};
use crate::signal::Spectrum;
use crate::C64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Operator-norm estimates indexed by truncation order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormCurve {
    pub entries: Vec<(usize, f64)>,
    /// Resolution metadata: (coarse t-step, fine t-step, omega count).
    pub grids: Vec<(f64, f64, usize)>,
}

/// Local vs global sup error of a truncated series.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ErrorProfile {
    pub n_trunc: usize,
    pub local_sup: f64,
    pub global_sup: f64,
    pub argmax_t: f64,
}

/// Grid policy for [`shannon_norm_estimate`].
///
/// The sup over t is attained near the sampling-window edge, so a full
/// fine grid over [-(N+2), N+2] is wasteful: we scan coarsely (symmetry in
/// t -> -t lets us scan t >= 0 only), then refine around the best
/// candidates at the fine step. Fine steps are chosen as coarse/2^k so that
/// refined grids are supersets of coarser ones and the estimate is monotone
/// under refinement.
#[derive(Debug, Clone, Copy)]
pub struct NormGrid {
    pub t_step_coarse: f64,
    pub t_step_fine: f64,
    pub omega_count: usize,
}

/// Max over the omega grid of `|sum a_n e^{iwn}|` for `n = -N..N`, via a
/// zero-padded FFT (the sum is a trigonometric polynomial, so a length-M
/// DFT evaluates it at M uniform frequencies covering the period exactly).
fn trig_sup(coeffs: &[C64], omega_count: usize, planner: &mut FftPlanner<f64>) -> f64 {
    let m = omega_count.max(coeffs.len());
    let mut buf: Vec<rustfft::num_complex::Complex64> = vec![C64::new(0.0, 0.0); m];
    buf[..coeffs.len()].copy_from_slice(coeffs);
    // A plain DFT of the shifted coefficients; the e^{-iwN} prefactor has
    // modulus 1 and drops out of the sup.
    let fft = planner.plan_fft_inverse(m);
    fft.process(&mut buf);
    buf.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

fn row_value(n_trunc: usize, t: f64, omega_count: usize, planner: &mut FftPlanner<f64>) -> f64 {
    let coeffs: Vec<C64> = (-(n_trunc as i64)..=n_trunc as i64)
        .map(|n| C64::new(sinc(t - n as f64), 0.0))
        .collect();
    trig_sup(&coeffs, omega_count, planner)
}

/// Estimate `||S_N||` by grid maximization over (t, omega).
///
/// The omega grid must resolve the oscillation scale 1/N: `omega_count`
/// below `16N` (step above `pi/(8N)`) is rejected.
pub fn shannon_norm_estimate(n_trunc: usize, grid: NormGrid) -> Result<f64> {
    if n_trunc == 0 {
        return Ok(1.0);
    }
    let step_omega = 2.0 * PI / grid.omega_count as f64;
    let required = PI / (8.0 * n_trunc as f64);
    if step_omega > required * (1.0 + 1e-12) {
        return Err(Error::GridTooCoarse { step: step_omega, required });
    }
    if grid.t_step_fine <= 0.0 || grid.t_step_coarse <= 0.0 {
        return Err(Error::InvalidParams("grid steps must be positive".into()));
    }
    let t_max = n_trunc as f64 + 2.0;
    let coarse_count = (t_max / grid.t_step_coarse).ceil() as usize;
    // Coarse scan over t >= 0 (t -> -t mirrors omega -> -omega, leaving the
    // sup unchanged).
    let coarse: Vec<(f64, f64)> = (0..=coarse_count)
        .into_par_iter()
        .map_init(FftPlanner::new, |pl, j| {
            let t = j as f64 * grid.t_step_coarse;
            (t, row_value(n_trunc, t, grid.omega_count, pl))
        })
        .collect();
    let mut best = coarse.iter().cloned().fold((0.0, 0.0), |a, b| if b.1 > a.1 { b } else { a });
    // Refine around the top candidates at the fine step; candidates are the
    // local maxima of the coarse scan, best first.
    let mut candidates: Vec<(f64, f64)> = coarse
        .iter()
        .enumerate()
        .filter(|&(j, &(_, v))| {
            let left = if j > 0 { coarse[j - 1].1 } else { f64::NEG_INFINITY };
            let right = if j + 1 < coarse.len() { coarse[j + 1].1 } else { f64::NEG_INFINITY };
            v >= left && v >= right
        })
        .map(|(_, &c)| c)
        .collect();
    candidates.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    candidates.truncate(5);
    let per_side = (grid.t_step_coarse / grid.t_step_fine).round() as i64;
    for (t0, _) in candidates {
        let local: Vec<f64> = (-per_side..=per_side)
            .into_par_iter()
            .map_init(FftPlanner::new, |pl, j| {
                let t = t0 + j as f64 * grid.t_step_fine;
                if t < 0.0 {
                    0.0
                } else {
                    row_value(n_trunc, t, grid.omega_count, pl)
                }
            })
            .collect();
        for (j, v) in local.into_iter().enumerate() {
            if v > best.1 {
                best = (t0 + (j as i64 - per_side) as f64 * grid.t_step_fine, v);
            }
        }
    }
    Ok(best.1)
}

/// Convenience: norm curve over a list of truncation orders with the
/// default per-order grids.
pub fn shannon_norm_curve(orders: &[usize]) -> Result<NormCurve> {
    let mut entries = Vec::new();
    let mut grids = Vec::new();
    for &n in orders {
        let g = default_norm_grid(n);
        entries.push((n, shannon_norm_estimate(n, g)?));
        grids.push((g.t_step_coarse, g.t_step_fine, g.omega_count));
    }
    Ok(NormCurve { entries, grids })
}

/// Default grid for order N: coarse step 1/8, fine step 1/(16N) rounded
/// down to a power-of-two division of the coarse step, 16N omega points.
pub fn default_norm_grid(n_trunc: usize) -> NormGrid {
    let n = n_trunc.max(1) as f64;
    let target = 1.0 / (16.0 * n);
    let mut fine = 0.125;
    while fine > target {
        fine *= 0.5;
    }
    NormGrid { t_step_coarse: 0.125, t_step_fine: fine, omega_count: 16 * n_trunc.max(1) }
}

/// Least-squares fit of `value` against `log N`; returns (slope, intercept,
/// r_squared).
pub fn log_fit(curve: &NormCurve) -> (f64, f64, f64) {
    let xs: Vec<f64> = curve.entries.iter().map(|&(n, _)| (n as f64).ln()).collect();
    let ys: Vec<f64> = curve.entries.iter().map(|&(_, v)| v).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope, intercept, r2)
}

/// Grid max and min of `Re (S_N f)(t)` over `[-window, window]`.
pub fn oscillation_probe(f: &Spectrum, n_trunc: usize, window: f64) -> Result<(f64, f64)> {
    if window < n_trunc as f64 + 2.0 {
        return Err(Error::InvalidParams("window must be at least N + 2".into()));
    }
    let samples = crate::sampling::integer_samples(f, n_trunc);
    let step = 1.0 / 16.0;
    let count = (2.0 * window / step).ceil() as usize;
    let vals: Vec<f64> = (0..=count)
        .into_par_iter()
        .map(|j| {
            let t = -window + j as f64 * step;
            crate::sampling::shannon_series_from_samples(&samples, t).re
        })
        .collect();
    let max_val = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min_val = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok((max_val, min_val))
}

/// Which truncated series an error profile measures.
pub enum SeriesTag<'a> {
    Shannon,
    Nonuniform(&'a KernelFamily),
}

/// Local (`[-T, T]`) and global (`[-window, window]`) sup of
/// `|f - series_N f|` on a step-1/32 grid, with the global argmax.
pub fn error_profile(
    f: &Spectrum,
    series: SeriesTag<'_>,
    n_trunc: usize,
    t_local: f64,
    window: f64,
) -> Result<ErrorProfile> {
    let step = 1.0 / 32.0;
    let samples: Vec<C64> = match &series {
        SeriesTag::Shannon => crate::sampling::integer_samples(f, n_trunc),
        SeriesTag::Nonuniform(k) => crate::sampling::lattice_samples(f, k.zero_set(), n_trunc)?,
    };
    let count = (2.0 * window / step).ceil() as usize;
    let errs: Vec<(f64, f64)> = (0..=count)
        .into_par_iter()
        .map(|j| {
            let t = -window + j as f64 * step;
            let approx = match &series {
                SeriesTag::Shannon => crate::sampling::shannon_series_from_samples(&samples, t),
                SeriesTag::Nonuniform(k) => {
                    crate::sampling::nonuniform_series_from_samples(&samples, k, t).expect("range checked")
                }
            };
            (t, (f.eval_real(t) - approx).norm())
        })
        .collect();
    let mut local_sup: f64 = 0.0;
    let mut global_sup: f64 = 0.0;
    let mut argmax_t = 0.0;
    for (t, e) in errs {
        if t.abs() <= t_local {
            local_sup = local_sup.max(e);
        }
        if e > global_sup {
            global_sup = e;
            argmax_t = t;
        }
    }
    Ok(ErrorProfile { n_trunc, local_sup, global_sup, argmax_t })
}

/// L-infinity -> L-infinity norm of the Walsh partial-sum projection P_N,
/// i.e. the L1([0,1]) norm of the Walsh–Dirichlet kernel
/// `D_N(x) = sum_{n<N} psi_n(x)` (Paley ordering).
///
/// D_N is constant on dyadic intervals of length 2^{-m}, m = ceil(log2 N),
/// where it takes the integer value `sum_{n<N} (-1)^{popcount(n & j)}` on
/// interval j (up to a bit permutation of j that leaves the sum over all
/// intervals unchanged). The L1 norm is therefore an exact finite sum.
pub fn walsh_projection_norm(n_terms: usize) -> Result<f64> {
    if n_terms == 0 {
        return Err(Error::InvalidParams("need at least one Walsh term".into()));
    }
    let m = (usize::BITS - (n_terms - 1).leading_zeros()) as usize; // ceil(log2 N)
    let intervals = 1usize << m;
    let mut total: f64 = 0.0;
    for j in 0..intervals {
        let mut d: i64 = 0;
        for n in 0..n_terms {
            let parity = (n & j).count_ones() & 1;
            d += if parity == 0 { 1 } else { -1 };
        }
        total += d.unsigned_abs() as f64;
    }
    Ok(total / intervals as f64)
}

/// Monte-Carlo estimate of the same L1 norm by direct Walsh-function
/// summation at uniform random points. Slowly converging by design — it
/// exists to cross-check the exact dyadic summation.
pub fn walsh_projection_norm_mc(n_terms: usize, samples: usize, seed: u64) -> Result<f64> {
    if n_terms == 0 {
        return Err(Error::InvalidParams("need at least one Walsh term".into()));
    }
    let mut rng = SplitMix64::new(seed);
    let mut acc = 0.0;
    for _ in 0..samples {
        // The leading binary digits of x drive the Rademacher signs:
        // psi_n(x) = prod over set bits k of n of (-1)^{b_{k+1}(x)} where
        // b_j(x) is the j-th binary digit after the point.
        let bits = rng.next_u64() >> 11; // 53 uniform fraction bits, MSB first at position 52
        let mut d: i64 = 0;
        for n in 0..n_terms {
            let mut parity = 0u64;
            let mut nn = n;
            let mut k = 0u32;
            while nn > 0 {
                if nn & 1 == 1 {
                    parity ^= (bits >> (52 - k)) & 1;
                }
                nn >>= 1;
                k += 1;
            }
            d += if parity == 0 { 1 } else { -1 };
        }
        acc += d.unsigned_abs() as f64;
    }
    Ok(acc / samples as f64)
}
