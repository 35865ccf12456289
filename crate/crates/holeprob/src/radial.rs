//! The radial model of the Mittag-Leffler ensembles.
//!
//! For the kernels built from `z^k e^{-|z|^α/2}` the set of moduli of the
//! points has the law of independent variables `R_k` with
//! `R_k^α ~ Gamma(2k/α, 1)`, `k = 1, 2, ...` (`k <= n` for the finite
//! ensemble). Hole probabilities of centred disks and annuli are therefore
//! products of one-dimensional gamma probabilities.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, Uniform};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::specfun::{inc_gamma, ln_add_exp, ln_gamma_unchecked};

/// Number of points of an ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Size {
    Finite(usize),
    Infinite,
}

/// The process `X_n^{(α)}` (finite `n`) or `X_∞^{(α)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleSpec {
    pub alpha: f64,
    pub size: Size,
}

impl EnsembleSpec {
    pub fn finite(alpha: f64, n: usize) -> Result<Self> {
        Self::new(alpha, Size::Finite(n))
    }

    pub fn infinite(alpha: f64) -> Result<Self> {
        Self::new(alpha, Size::Infinite)
    }

    pub fn new(alpha: f64, size: Size) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::domain("EnsembleSpec", format!("alpha = {alpha} must be positive")));
        }
        if size == Size::Finite(0) {
            return Err(Error::domain("EnsembleSpec", "a finite ensemble needs n >= 1"));
        }
        Ok(EnsembleSpec { alpha, size })
    }

    /// Gamma shape of `R_k^α`.
    pub fn gamma_shape(&self, k: usize) -> f64 {
        2.0 * k as f64 / self.alpha
    }
}

/// A log hole probability with its truncation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoleResult {
    /// Natural log of the hole probability (`-inf` if it underflows).
    pub log_prob: f64,
    /// Number of radial factors included.
    pub truncation_k: usize,
    /// Bound on the total `|log factor|` of the omitted factors.
    pub tail_bound: f64,
}

pub(crate) fn stream_rng(seed: u64, replica: u64, k: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&replica.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(k);
    rng
}

fn draw_radius(alpha: f64, seed: u64, replica: u64, k: usize) -> f64 {
    let shape = 2.0 * k as f64 / alpha;
    let gamma = Gamma::new(shape, 1.0).expect("shape is positive and finite");
    let g: f64 = gamma.sample(&mut stream_rng(seed, replica, k as u64));
    g.powf(1.0 / alpha)
}

/// The single modulus `R_k` of configuration `replica`, identical to the
/// value [`sample_radii_replica`] produces for that index.
pub fn sample_radius(spec: EnsembleSpec, k: usize, seed: u64, replica: u64) -> Result<f64> {
    let in_range = match spec.size {
        Size::Finite(n) => (1..=n).contains(&k),
        Size::Infinite => k >= 1,
    };
    if !in_range {
        return Err(Error::domain("sample_radius", format!("index k = {k} is outside the ensemble")));
    }
    Ok(draw_radius(spec.alpha, seed, replica, k))
}

/// Sorted moduli `R_1, ..., R_K` with `K = min(n, k_max)`.
///
/// Every `R_k` comes from its own ChaCha stream keyed by `(seed, k)`, so the
/// output is reproducible regardless of how the work is scheduled.
pub fn sample_radii(spec: EnsembleSpec, k_max: usize, seed: u64) -> Result<Vec<f64>> {
    sample_radii_replica(spec, k_max, seed, 0)
}

/// As [`sample_radii`], for the `replica`-th independent configuration.
pub fn sample_radii_replica(
    spec: EnsembleSpec,
    k_max: usize,
    seed: u64,
    replica: u64,
) -> Result<Vec<f64>> {
    if k_max == 0 {
        return Err(Error::domain("sample_radii", "k_max must be at least 1"));
    }
    let count = match spec.size {
        Size::Finite(n) => n.min(k_max),
        Size::Infinite => k_max,
    };
    let draw = |k: usize| draw_radius(spec.alpha, seed, replica, k);
    let mut radii: Vec<f64> = if count >= 4096 {
        (1..=count).into_par_iter().map(draw).collect()
    } else {
        (1..=count).map(draw).collect()
    };
    radii.sort_by(f64::total_cmp);
    Ok(radii)
}

const FACTOR_NEGLIGIBLE: f64 = 1e-15;
const TAIL_TARGET: f64 = 1e-12;
const MAX_FACTORS: usize = 10_000_000;

/// `log P[no point in D(0, r)]`.
pub fn hole_prob_disk(spec: EnsembleSpec, r: f64) -> Result<HoleResult> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::domain("hole_prob_disk", format!("r = {r} must be positive")));
    }
    radial_product(spec, None, r)
}

/// `log P[no point in {r_in < |z| < r_out}]`.
///
/// Accepts `r_in = 0` (the disk) and `r_in = r_out` (empty annulus).
pub fn hole_prob_annulus(spec: EnsembleSpec, r_in: f64, r_out: f64) -> Result<HoleResult> {
    if !(r_in >= 0.0) || !(r_out >= r_in) || !r_out.is_finite() {
        return Err(Error::domain(
            "hole_prob_annulus",
            format!("need 0 <= r_in <= r_out, got {r_in}, {r_out}"),
        ));
    }
    if r_out == 0.0 {
        return Ok(HoleResult {
            log_prob: 0.0,
            truncation_k: 0,
            tail_bound: 0.0,
        });
    }
    radial_product(spec, Some(r_in), r_out)
}

fn radial_product(spec: EnsembleSpec, r_in: Option<f64>, r_out: f64) -> Result<HoleResult> {
    let alpha = spec.alpha;
    let x_out = r_out.powf(alpha);
    let x_in = r_in.map(|r| r.powf(alpha));
    let ln_factor = |k: usize| -> Result<(f64, f64)> {
        let s = spec.gamma_shape(k);
        let outer = inc_gamma(s, x_out)?;
        let lf = match x_in {
            None => outer.ln_q,
            Some(xi) if xi >= x_out => 0.0,
            Some(xi) => ln_add_exp(inc_gamma(s, xi)?.ln_p, outer.ln_q),
        };
        Ok((lf.min(0.0), outer.p()))
    };

    let mut log_prob = 0.0;
    match spec.size {
        Size::Finite(n) => {
            for k in 1..=n {
                log_prob += ln_factor(k)?.0;
            }
            Ok(HoleResult {
                log_prob,
                truncation_k: n,
                tail_bound: 0.0,
            })
        }
        Size::Infinite => {
            let k0 = ((2.0 * (alpha * x_out).ceil()) as usize).max(64);
            let h = 2.0 / alpha;
            let mut k = 0;
            loop {
                k += 1;
                let (lf, p_out) = ln_factor(k)?;
                log_prob += lf;
                if k < k0 || lf.abs() > FACTOR_NEGLIGIBLE {
                    continue;
                }
                // Factors beyond k satisfy |log factor| <= P/(1-P) with
                // P(s+h, x) <= P(s, x) ρ(s), ρ(s) = x^h Γ(s+1)/Γ(s+h+1)
                // decreasing in s.
                let s = spec.gamma_shape(k);
                let rho = (h * x_out.ln() + ln_gamma_unchecked(s + 1.0)
                    - ln_gamma_unchecked(s + h + 1.0))
                .exp();
                if rho < 1.0 && p_out < 1.0 {
                    let tail = p_out * rho / (1.0 - rho) / (1.0 - p_out);
                    if tail < TAIL_TARGET {
                        return Ok(HoleResult {
                            log_prob,
                            truncation_k: k,
                            tail_bound: tail,
                        });
                    }
                }
                if k >= MAX_FACTORS {
                    return Err(Error::no_conv(
                        "infinite radial product",
                        format!("tail bound not reached after {k} factors"),
                    ));
                }
            }
        }
    }
}

/// Moment generating function of `S = R_K^α / n` for an index `K` uniform on
/// `{1..n}`: `E[e^{tS}] = (1/n) Σ_k (1 - t/n)^{-2k/α}`.
pub fn mgf_scaled_radius(n: u64, alpha: f64, t: f64) -> Result<f64> {
    let nf = n as f64;
    if n == 0 || !(alpha > 0.0) || !(t < nf) {
        return Err(Error::domain(
            "mgf_scaled_radius",
            format!("need n >= 1, alpha > 0 and t < n, got n = {n}, alpha = {alpha}, t = {t}"),
        ));
    }
    if t == 0.0 {
        return Ok(1.0);
    }
    // q = (1 - t/n)^{-2/α}; value = q (q^n - 1) / (n (q - 1)).
    let ln_q = -(2.0 / alpha) * (-t / nf).ln_1p();
    Ok(ln_q.exp() * (nf * ln_q).exp_m1() / (nf * ln_q.exp_m1()))
}

/// Kolmogorov-Smirnov distance between the law of `R^α / n`, for a radius
/// picked uniformly from a sampled configuration, and `Uniform[0, 2/α]`.
///
/// Configurations are indexed by replica; only the selected radius of each
/// configuration is drawn, from the same `(seed, replica, k)` stream that
/// [`sample_radii_replica`] would use for it.
pub fn scaling_limit_check(spec: EnsembleSpec, samples: usize, seed: u64) -> Result<f64> {
    let n = match spec.size {
        Size::Finite(n) => n,
        Size::Infinite => {
            return Err(Error::domain("scaling_limit_check", "needs a finite ensemble"));
        }
    };
    if samples == 0 {
        return Err(Error::domain("scaling_limit_check", "samples must be positive"));
    }
    let alpha = spec.alpha;
    let pick = Uniform::new_inclusive(1usize, n).expect("n >= 1");
    let mut values: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let k = pick.sample(&mut stream_rng(seed, i, 0));
            draw_radius(alpha, seed, i, k).powf(alpha) / n as f64
        })
        .collect();
    values.sort_by(f64::total_cmp);
    let cdf = |x: f64| (x * alpha / 2.0).clamp(0.0, 1.0);
    Ok(ks_statistic(&values, cdf))
}

/// Two-sided KS statistic of sorted `values` against a continuous CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(sorted: &[f64], cdf: F) -> f64 {
    let m = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            ((i as f64 + 1.0) / m - f).max(f - i as f64 / m)
        })
        .fold(0.0, f64::max)
}
