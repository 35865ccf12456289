//! Hole probabilities for general regions through the Gram matrix of the
//! orthonormal functions `φ_k(z) ∝ z^k e^{-|z|^α/2}` over the complement of
//! the hole, and a truncated Fredholm series used as an oracle.
//!
//! In polar form the radial part of every entry is an incomplete gamma
//! function, so only the angular integral is done numerically:
//!
//! `M_ij = Γ(s)/√(Γ_i Γ_j) · (1/2π) ∫ e^{i(i-j)θ} [P(s, lo^α) + Q(s, hi^α)] dθ`
//!
//! with `s = (i+j+2)/α`, `Γ_k = Γ(2(k+1)/α)` and `(lo, hi)` the part of the
//! ray at angle θ that lies in the hole.

use std::f64::consts::{PI, TAU};

use nalgebra::{Cholesky, DMatrix};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fit::{fit_decay, DecayFit, MIN_FIT_POINTS};
use crate::quad::GaussLegendre;
use crate::radial::Size;
use crate::region::Region;
use crate::specfun::{inc_gamma, ln_add_exp, ln_gamma_unchecked, mittag_leffler, Accuracy};

/// Largest gamma shape accepted in the normalisation of `φ_k`.
pub const MAX_GAMMA_SHAPE: f64 = 1e7;

/// Resolution control for the angular integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GramQuad {
    /// Nodes per angular piece on the first pass.
    pub initial_nodes: usize,
    /// Refinement stops with an error beyond this many nodes per piece.
    pub max_nodes: usize,
    /// Largest entrywise change between two passes that counts as converged.
    pub tol: f64,
}

impl Default for GramQuad {
    fn default() -> Self {
        GramQuad {
            initial_nodes: 32,
            max_nodes: 16_384,
            tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GramSpec {
    pub n: usize,
    pub alpha: f64,
    /// The (already scaled) hole.
    pub region: Region,
    pub quad: GramQuad,
}

impl GramSpec {
    pub fn new(n: usize, alpha: f64, region: Region) -> Result<Self> {
        let spec = GramSpec {
            n,
            alpha,
            region,
            quad: GramQuad::default(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_quad(mut self, quad: GramQuad) -> Self {
        self.quad = quad;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::domain("GramSpec", "n must be at least 1"));
        }
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return Err(Error::domain("GramSpec", format!("alpha = {} must be positive", self.alpha)));
        }
        let top = 2.0 * self.n as f64 / self.alpha;
        if top > MAX_GAMMA_SHAPE {
            return Err(Error::IndexOverflow(top));
        }
        if self.quad.initial_nodes < 2 || self.quad.max_nodes < self.quad.initial_nodes || !(self.quad.tol > 0.0) {
            return Err(Error::domain("GramSpec", format!("bad quadrature settings {:?}", self.quad)));
        }
        Ok(())
    }
}

/// Angular nodes `(θ, w)` with weights summing to 1 over the circle (the
/// factor `1/2π` is folded in).
///
/// When the ray map is smooth and periodic the trapezoid rule is used; it is
/// exact for the Fourier modes the Gram entries need. Otherwise each piece
/// between breakpoints gets Gauss-Legendre after the substitution
/// `θ = θ0 + (θ1 - θ0)(1 - cos πt)/2`, which absorbs square-root behaviour
/// at tangent rays.
fn angular_nodes(region: &Region, per_piece: usize) -> Vec<(f64, f64)> {
    let breaks = region.angular_breaks();
    if breaks.len() == 2 {
        let h = 1.0 / per_piece as f64;
        return (0..per_piece).map(|k| (TAU * k as f64 * h, h)).collect();
    }
    let gl = GaussLegendre::new(per_piece);
    let mut out = Vec::with_capacity(per_piece * (breaks.len() - 1));
    for w in breaks.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        for (t, wt) in gl.mapped(0.0, 1.0) {
            let theta = t0 + (t1 - t0) * 0.5 * (1.0 - (PI * t).cos());
            let jac = (t1 - t0) * 0.5 * PI * (PI * t).sin();
            out.push((theta, wt * jac / TAU));
        }
    }
    out
}

/// Per-node radial factors for every `m = i + j`.
struct RayTable {
    /// `ln[P(s, lo^α) + Q(s, hi^α)]`, the complement mass along the ray.
    ln_outside: Vec<f64>,
    /// `P(s, hi^α) - P(s, lo^α)`, the mass inside the hole.
    inside: Vec<f64>,
}

fn ray_table(alpha: f64, n: usize, ray: Option<(f64, f64)>) -> Result<RayTable> {
    let mmax = 2 * n - 1;
    let mut ln_outside = vec![0.0; mmax];
    let mut inside = vec![0.0; mmax];
    if let Some((lo, hi)) = ray {
        for m in 0..mmax {
            let s = (m as f64 + 2.0) / alpha;
            let g_hi = inc_gamma(s, hi.powf(alpha))?;
            if lo > 0.0 {
                let g_lo = inc_gamma(s, lo.powf(alpha))?;
                ln_outside[m] = ln_add_exp(g_lo.ln_p, g_hi.ln_q);
                // The smaller of the two equivalent differences loses less.
                inside[m] = if g_lo.ln_q < g_hi.ln_p {
                    g_lo.q() - g_hi.q()
                } else {
                    g_hi.p() - g_lo.p()
                };
            } else {
                ln_outside[m] = g_hi.ln_q;
                inside[m] = g_hi.p();
            }
        }
    }
    Ok(RayTable { ln_outside, inside })
}

/// `ln Γ(s) - ½(ln Γ_i + ln Γ_j)` for the entry `(i, j)`.
fn ln_norm(alpha: f64, i: usize, j: usize) -> f64 {
    let lg = |k: usize| ln_gamma_unchecked(2.0 * (k as f64 + 1.0) / alpha);
    ln_gamma_unchecked((i + j) as f64 / alpha + 2.0 / alpha) - 0.5 * (lg(i) + lg(j))
}

fn assemble(spec: &GramSpec, nodes: &[(f64, f64)]) -> Result<DMatrix<Complex64>> {
    let n = spec.n;
    let tables: Vec<RayTable> = nodes
        .par_iter()
        .map(|&(theta, _)| ray_table(spec.alpha, n, spec.region.ray(theta)))
        .collect::<Result<_>>()?;
    let rows: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (i..n)
                .map(|j| {
                    let m = i + j;
                    let pref = ln_norm(spec.alpha, i, j);
                    if i == j {
                        // Direct complement form: no cancellation.
                        let v: f64 = nodes
                            .iter()
                            .zip(&tables)
                            .map(|(&(_, w), t)| w * (pref + t.ln_outside[m]).exp())
                            .sum();
                        Complex64::new(v, 0.0)
                    } else {
                        // The constant part integrates to zero for i != j.
                        let k = (i as f64) - (j as f64);
                        let scale = pref.exp();
                        let v: Complex64 = nodes
                            .iter()
                            .zip(&tables)
                            .filter(|(_, t)| t.inside[m] != 0.0)
                            .map(|(&(theta, w), t)| Complex64::from_polar(w * t.inside[m], k * theta))
                            .sum();
                        -v * scale
                    }
                })
                .collect()
        })
        .collect();
    let mut mat = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for (i, row) in rows.into_iter().enumerate() {
        for (off, v) in row.into_iter().enumerate() {
            let j = i + off;
            mat[(i, j)] = v;
            mat[(j, i)] = v.conj();
        }
    }
    Ok(mat)
}

/// The Hermitian matrix `M_n(U) = (∫_{U^c} φ_i φ̄_j dm)_{i,j<n}`.
///
/// The angular resolution doubles until no entry moves by more than
/// `spec.quad.tol`.
pub fn gram_matrix(spec: &GramSpec) -> Result<DMatrix<Complex64>> {
    spec.validate()?;
    let n = spec.n;
    if spec.region.is_empty() {
        return Ok(DMatrix::identity(n, n));
    }
    let mut per_piece = spec.quad.initial_nodes.max(2 * n);
    let mut prev = assemble(spec, &angular_nodes(&spec.region, per_piece))?;
    loop {
        per_piece *= 2;
        if per_piece > spec.quad.max_nodes {
            return Err(Error::no_conv(
                "Gram angular quadrature",
                format!("entries still moving at {} nodes per piece", per_piece / 2),
            ));
        }
        let next = assemble(spec, &angular_nodes(&spec.region, per_piece))?;
        let change = (&next - &prev).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if change < spec.quad.tol {
            return Ok(next);
        }
        prev = next;
    }
}

/// `ln det M` through a Cholesky factorisation after symmetric diagonal
/// scaling. Returns `-inf` when the matrix is not numerically positive
/// definite, i.e. the probability is below working precision.
pub fn log_det_hermitian(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let d: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    if d.iter().any(|&x| !(x > 0.0)) {
        return f64::NEG_INFINITY;
    }
    let inv_sqrt: Vec<f64> = d.iter().map(|x| 1.0 / x.sqrt()).collect();
    let scaled = DMatrix::from_fn(n, n, |i, j| m[(i, j)] * (inv_sqrt[i] * inv_sqrt[j]));
    let ln_diag: f64 = d.iter().map(|x| x.ln()).sum();
    match Cholesky::new(scaled) {
        Some(ch) => {
            let l = ch.l_dirty();
            let mut acc = ln_diag;
            for k in 0..n {
                let lk = l[(k, k)].re;
                if !(lk > 0.0) {
                    return f64::NEG_INFINITY;
                }
                acc += 2.0 * lk.ln();
            }
            acc
        }
        None => f64::NEG_INFINITY,
    }
}

/// `ln P[X_n(U) = 0] = ln det M_n(U)`.
pub fn hole_prob_gram(spec: &GramSpec) -> Result<f64> {
    Ok(log_det_hermitian(&gram_matrix(spec)?))
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Result of the truncated Fredholm series for `P[X(U) = 0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FredholmBracket {
    /// `ln` of the partial sum of the requested order.
    pub log_estimate: f64,
    /// Bracket on the probability from the last two partial sums, widened by
    /// the quadrature error estimate.
    pub lower: f64,
    pub upper: f64,
    /// Partial sums `S_0 = 1, S_1, ..., S_m`.
    pub partial_sums: Vec<f64>,
    /// `(1/k!) ∫_{U^k} det K(z_a, z_b) dm^k` for `k = 0..=m`.
    pub terms: Vec<f64>,
    /// Change in the final partial sum under the last refinement.
    pub quad_error: f64,
    /// Number of Nyström nodes at the final resolution.
    pub nodes: usize,
}

impl FredholmBracket {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, p: f64) -> bool {
        self.lower <= p && p <= self.upper
    }
}

pub const MAX_FREDHOLM_ORDER: usize = 4;

/// Area nodes `(z, w)` in polar product form.
fn area_nodes(region: &Region, n_theta: usize, n_r: usize) -> Vec<(Complex64, f64)> {
    let radial = GaussLegendre::new(n_r);
    let mut out = Vec::new();
    for (theta, w_theta) in angular_nodes(region, n_theta) {
        if let Some((lo, hi)) = region.ray(theta) {
            for (r, w_r) in radial.mapped(lo, hi) {
                out.push((Complex64::from_polar(r, theta), TAU * w_theta * w_r * r));
            }
        }
    }
    out
}

type Kernel = Box<dyn Fn(Complex64, Complex64) -> Result<Complex64> + Sync>;

fn kernel_fn(alpha: f64, size: Size) -> Result<Kernel> {
    match size {
        Size::Finite(n) => {
            let ln_c: Vec<f64> = (0..n)
                .map(|k| 0.5 * ((alpha / TAU).ln() - ln_gamma_unchecked(2.0 * (k as f64 + 1.0) / alpha)))
                .collect();
            Ok(Box::new(move |z: Complex64, w: Complex64| {
                let zw = z * w.conj();
                let damp = -0.5 * (z.norm().powf(alpha) + w.norm().powf(alpha));
                let mut p = Complex64::new(1.0, 0.0);
                let mut acc = Complex64::new(0.0, 0.0);
                for lc in &ln_c {
                    acc += p * (2.0 * lc + damp).exp();
                    p *= zw;
                }
                Ok(acc)
            }))
        }
        Size::Infinite => {
            let acc = Accuracy::default();
            Ok(Box::new(move |z: Complex64, w: Complex64| {
                let e = mittag_leffler(2.0 / alpha, 2.0 / alpha, z * w.conj(), acc)?;
                let damp = (-0.5 * (z.norm().powf(alpha) + w.norm().powf(alpha))).exp();
                Ok(e.value * (alpha / TAU * damp))
            }))
        }
    }
}

/// Fredholm terms `e_k` for `k = 0..=order` at one resolution.
fn fredholm_terms(region: &Region, alpha: f64, size: Size, order: usize, n_theta: usize, n_r: usize) -> Result<(Vec<f64>, usize)> {
    let kernel = kernel_fn(alpha, size)?;
    let nodes = area_nodes(region, n_theta, n_r);
    let big_n = nodes.len();
    let sw: Vec<f64> = nodes.iter().map(|&(_, w)| w.sqrt()).collect();
    let rows: Vec<Vec<Complex64>> = (0..big_n)
        .into_par_iter()
        .map(|a| {
            (0..=a)
                .map(|b| Ok(kernel(nodes[a].0, nodes[b].0)? * (sw[a] * sw[b])))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut mat = DMatrix::from_element(big_n, big_n, Complex64::new(0.0, 0.0));
    for (a, row) in rows.into_iter().enumerate() {
        for (b, v) in row.into_iter().enumerate() {
            mat[(a, b)] = v;
            mat[(b, a)] = v.conj();
        }
    }
    let eig = hermitian_eigenvalues(&mat);
    // Elementary symmetric polynomials, largest eigenvalues last so small
    // ones are accumulated first.
    let mut e = vec![0.0; order + 1];
    e[0] = 1.0;
    for &lam in &eig {
        let lam = lam.max(0.0);
        for k in (1..=order).rev() {
            e[k] += lam * e[k - 1];
        }
    }
    Ok((e, big_n))
}

/// Truncated inclusion-exclusion series
/// `P[X(U)=0] = Σ_k (-1)^k/k! ∫_{U^k} det(K(z_a, z_b)) dm^k`
/// for the kernel `K_n` or `K_∞`, evaluated up to `order` (at most 4).
///
/// Each term equals the `k`-th elementary symmetric function of the
/// eigenvalues of the Nyström discretisation `W^{1/2} K W^{1/2}`, which is
/// the tensor-product quadrature of the `k`-fold integral. The area rule is
/// refined until the final partial sum stabilises.
pub fn fredholm_hole_oracle(region: &Region, alpha: f64, size: Size, order: usize) -> Result<FredholmBracket> {
    if !(1..=MAX_FREDHOLM_ORDER).contains(&order) {
        return Err(Error::domain(
            "fredholm_hole_oracle",
            format!("order must be in 1..={MAX_FREDHOLM_ORDER}, got {order}"),
        ));
    }
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::domain("fredholm_hole_oracle", format!("alpha = {alpha} must be positive")));
    }
    if region.is_empty() {
        let mut terms = vec![0.0; order + 1];
        terms[0] = 1.0;
        return Ok(FredholmBracket {
            log_estimate: 0.0,
            lower: 1.0,
            upper: 1.0,
            partial_sums: vec![1.0; order + 1],
            terms,
            quad_error: 0.0,
            nodes: 0,
        });
    }
    let partial = |e: &[f64]| -> Vec<f64> {
        let mut s = Vec::with_capacity(e.len());
        let mut acc = 0.0;
        for (k, ek) in e.iter().enumerate() {
            acc += if k % 2 == 0 { *ek } else { -ek };
            s.push(acc);
        }
        s
    };
    const LEVELS: [(usize, usize); 4] = [(16, 8), (24, 12), (32, 16), (48, 24)];
    let mut prev: Option<f64> = None;
    let mut result = None;
    for (n_theta, n_r) in LEVELS {
        let (e, nodes) = fredholm_terms(region, alpha, size, order, n_theta, n_r)?;
        let s = partial(&e);
        let last = s[order];
        if let Some(p) = prev {
            let err = (last - p).abs();
            result = Some((e, s, err, nodes));
            if err < 1e-13 {
                break;
            }
        }
        prev = Some(last);
    }
    let (terms, partial_sums, quad_error, nodes) = result.expect("at least two levels");
    // Terms must shrink for the partial sums to alternate around the limit.
    if terms.windows(2).skip(1).any(|w| w[1] >= w[0]) {
        return Err(Error::NonBracketing { order });
    }
    let (a, b) = (partial_sums[order - 1], partial_sums[order]);
    let lower = a.min(b) - quad_error;
    let upper = a.max(b) + quad_error;
    if !(upper > 0.0) || !(b > 0.0) {
        return Err(Error::NonBracketing { order });
    }
    Ok(FredholmBracket {
        log_estimate: b.ln(),
        lower,
        upper,
        partial_sums,
        terms,
        quad_error,
        nodes,
    })
}

/// One point of a Gram decay fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GramPoint {
    pub r: f64,
    pub n: usize,
    pub log_prob: f64,
}

/// Gram log hole probabilities of `rU` in `X_n` with `n = ⌈2 r^α⌉` along a
/// grid, and the decay constant fitted to them.
///
/// With this coupling `rU = (n/2)^{1/α} U`, so `log P / r^{2α}` tends to the
/// decay constant of `U` for the unscaled field `|z|^α`.
pub fn decay_fit_gram(region: &Region, alpha: f64, r_grid: &[f64]) -> Result<(DecayFit, Vec<GramPoint>)> {
    let increasing = r_grid.windows(2).all(|w| w[1] > w[0]) && r_grid.first().is_some_and(|&r| r > 0.0);
    if r_grid.len() < MIN_FIT_POINTS || !increasing {
        return Err(Error::InsufficientGrid {
            need: MIN_FIT_POINTS,
            got: if increasing { r_grid.len() } else { 0 },
        });
    }
    let points: Vec<GramPoint> = r_grid
        .par_iter()
        .map(|&r| {
            let n = (2.0 * r.powf(alpha)).ceil() as usize;
            let spec = GramSpec::new(n.max(1), alpha, region.scaled(r)?)?;
            Ok(GramPoint {
                r,
                n: spec.n,
                log_prob: hole_prob_gram(&spec)?,
            })
        })
        .collect::<Result<_>>()?;
    let logs: Vec<f64> = points.iter().map(|p| p.log_prob).collect();
    let fit = fit_decay(r_grid, &logs, alpha)?;
    Ok((fit, points))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angular_weights_sum_to_one() {
        for region in [Region::disk(0.5).unwrap(), Region::triangle(0.5).unwrap(), Region::half_disk(0.8).unwrap()] {
            let s: f64 = angular_nodes(&region, 40).iter().map(|p| p.1).sum();
            assert!((s - 1.0).abs() < 1e-13, "{}", region.kind());
        }
    }

    #[test]
    fn empty_region_gives_identity() {
        let m = gram_matrix(&GramSpec::new(5, 2.0, Region::empty()).unwrap()).unwrap();
        assert_eq!(m, DMatrix::identity(5, 5));
    }

    #[test]
    fn log_det_of_diagonal() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(0.5, 0.0),
            Complex64::new(0.25, 0.0),
        ]));
        assert!((log_det_hermitian(&m) - (0.125f64).ln()).abs() < 1e-15);
        let singular = DMatrix::from_element(2, 2, Complex64::new(1.0, 0.0));
        assert_eq!(log_det_hermitian(&singular), f64::NEG_INFINITY);
    }

    #[test]
    fn rejects_bad_orders_and_sizes() {
        let d = Region::disk(0.3).unwrap();
        assert!(fredholm_hole_oracle(&d, 2.0, Size::Infinite, 0).is_err());
        assert!(fredholm_hole_oracle(&d, 2.0, Size::Infinite, 5).is_err());
        assert!(matches!(GramSpec::new(0, 2.0, d), Err(Error::Domain { .. })));
        assert!(matches!(GramSpec::new(usize::MAX / 2, 2.0, d), Err(Error::IndexOverflow(_))));
    }
}
