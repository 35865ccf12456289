//! Weighted Fekete points on the complement of a hole.
//!
//! A weighted Fekete set maximises
//! `F(z) = Σ_{i<j} [log|z_i - z_j| - g(|z_i|)/2 - g(|z_j|)/2]`
//! over `n` points of `U^c`. The normalised quantity
//! `δ_n = exp(2F/(n(n-1)))` decreases to `e^{-R}` where `R` is the constrained
//! minimum energy, so the reported energy `-log δ_n` increases towards `R`.
//!
//! The optimiser is projected gradient ascent with backtracking, restarted
//! from several random initial configurations. It finds good local maxima,
//! not certified global ones.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::potential::{EquilibriumMeasure, RadialField};
use crate::radial::stream_rng;
use crate::region::Region;

/// Pairwise distances are clipped below at this value inside the objective.
pub const COLLISION_FLOOR: f64 = 1e-9;
pub const DEFAULT_REPLICAS: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct FeketeResult {
    pub points: Vec<Complex64>,
    /// `δ_n = (Π_{i<j} |z_i - z_j| e^{-g_i/2} e^{-g_j/2})^{2/(n(n-1))}`.
    pub delta_n: f64,
    /// `-log δ_n`.
    pub energy: f64,
    pub min_separation: f64,
    /// Gradient steps taken by the winning replica.
    pub iterations: usize,
    /// True when the winning replica stopped on the budget rather than on
    /// convergence.
    pub budget_exhausted: bool,
    /// Index of the winning replica.
    pub replica: usize,
}

/// Minimum pairwise distance; `+inf` for fewer than two points.
pub fn separation(points: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            best = best.min((a - b).norm());
        }
    }
    best
}

/// The objective `F` with distances clipped at [`COLLISION_FLOOR`].
fn objective(points: &[Complex64], g: &[f64]) -> f64 {
    let n = points.len();
    let mut acc = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            acc += (points[i] - points[j]).norm().max(COLLISION_FLOOR).ln();
        }
    }
    acc - 0.5 * (n as f64 - 1.0) * g.iter().sum::<f64>()
}

/// `δ_n` recomputed from a configuration.
pub fn weighted_delta(points: &[Complex64], field: &RadialField) -> Result<f64> {
    let n = points.len();
    if n < 2 {
        return Err(Error::domain("weighted_delta", "need at least two points"));
    }
    let g: Vec<f64> = points.iter().map(|z| field.g(z.norm())).collect();
    let pairs = (n * (n - 1)) as f64 / 2.0;
    Ok((objective(points, &g) / pairs).exp())
}

fn gradient(points: &[Complex64], field: &RadialField) -> Vec<Complex64> {
    let n = points.len();
    let half = 0.5 * (n as f64 - 1.0);
    let mut grad = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        for j in i + 1..n {
            let d = points[i] - points[j];
            let r2 = d.norm_sqr().max(COLLISION_FLOOR * COLLISION_FLOOR);
            let v = d / r2;
            grad[i] += v;
            grad[j] -= v;
        }
        let r = points[i].norm();
        if r > 0.0 {
            grad[i] -= points[i] / r * (half * field.g1(r));
        }
    }
    grad
}

struct Run {
    points: Vec<Complex64>,
    value: f64,
    iterations: usize,
    exhausted: bool,
}

fn project(region: &Region, z: Complex64) -> Result<Complex64> {
    let w = region.project_to_complement(z);
    if region.contains(w) || !w.re.is_finite() || !w.im.is_finite() {
        return Err(Error::domain("optimize_fekete", format!("projection of {z} stayed inside the hole")));
    }
    Ok(w)
}

fn run_replica(
    n: usize,
    field: &RadialField,
    eq: &EquilibriumMeasure,
    region: &Region,
    seed: u64,
    replica: usize,
    budget: usize,
) -> Result<Run> {
    let mut rng = stream_rng(seed, replica as u64, u64::MAX);
    let mut points = Vec::with_capacity(n);
    for _ in 0..n {
        let r = eq.inverse_mass(rng.random::<f64>());
        let theta = std::f64::consts::TAU * rng.random::<f64>();
        points.push(project(region, Complex64::from_polar(r, theta))?);
    }
    let g_of = |pts: &[Complex64]| -> Vec<f64> { pts.iter().map(|z| field.g(z.norm())).collect() };
    let mut value = objective(&points, &g_of(&points));
    let mut step = 1e-2 / n as f64;
    let mut stalls = 0;
    for it in 0..budget {
        let grad = gradient(&points, field);
        let gnorm = grad.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if gnorm == 0.0 {
            return Ok(Run { points, value, iterations: it, exhausted: false });
        }
        let mut accepted = false;
        for _ in 0..60 {
            let trial: Vec<Complex64> = points
                .iter()
                .zip(&grad)
                .map(|(z, v)| project(region, z + v * step))
                .collect::<Result<_>>()?;
            let tv = objective(&trial, &g_of(&trial));
            if tv > value {
                let gain = tv - value;
                points = trial;
                value = tv;
                step *= 1.5;
                accepted = true;
                stalls = if gain <= 1e-13 * value.abs().max(1.0) { stalls + 1 } else { 0 };
                break;
            }
            step *= 0.5;
        }
        if !accepted || stalls >= 20 {
            return Ok(Run { points, value, iterations: it + 1, exhausted: false });
        }
    }
    Ok(Run { points, value, iterations: budget, exhausted: true })
}

/// Weighted Fekete points of `n` points in the complement of `region` with
/// [`DEFAULT_REPLICAS`] random restarts.
pub fn optimize_fekete(n: usize, field: &RadialField, region: &Region, seed: u64, budget: usize) -> Result<FeketeResult> {
    optimize_fekete_with(n, field, region, seed, budget, DEFAULT_REPLICAS)
}

/// As [`optimize_fekete`] with an explicit number of restarts. Replicas run
/// in parallel; the best objective wins and ties go to the lowest replica.
pub fn optimize_fekete_with(
    n: usize,
    field: &RadialField,
    region: &Region,
    seed: u64,
    budget: usize,
    replicas: usize,
) -> Result<FeketeResult> {
    if n < 2 {
        return Err(Error::domain("optimize_fekete", format!("need n >= 2, got {n}")));
    }
    if replicas == 0 || budget == 0 {
        return Err(Error::domain("optimize_fekete", "replicas and budget must be positive"));
    }
    field.validate()?;
    let eq = EquilibriumMeasure::new(field)?;
    let runs: Vec<Run> = (0..replicas)
        .into_par_iter()
        .map(|k| run_replica(n, field, &eq, region, seed, k, budget))
        .collect::<Result<_>>()?;
    let (replica, best) = runs
        .into_iter()
        .enumerate()
        .reduce(|a, b| if b.1.value > a.1.value { b } else { a })
        .expect("at least one replica");
    let pairs = (n * (n - 1)) as f64 / 2.0;
    let energy = -best.value / pairs;
    Ok(FeketeResult {
        min_separation: separation(&best.points),
        delta_n: (-energy).exp(),
        energy,
        iterations: best.iterations,
        budget_exhausted: best.exhausted,
        replica,
        points: best.points,
    })
}
