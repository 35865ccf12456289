//! Number and linear-statistic variances for the determinantal processes
//! `X_L` on the unit disk with kernel `K_L(z,w) = (1 - z w̄)^{-(L+1)}` with
//! respect to `dμ_L = (L/π)(1 - |z|²)^{L-1} dm`.
//!
//! Everything is radial, so in the variables `u = |z|²`, `v = |w|²` the
//! two angular integrals collapse to
//! `A(a) = ∫_0^{2π} (1 + a² - 2a cos θ)^{-(L+1)} dθ` with `a = √(uv)`, and
//! `|K|² dμ dμ` becomes `(L²/2π) W(u) W(v) A(√(uv)) du dv` with
//! `W(u) = (1-u)^{L-1}`.

use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::quad::{integrate_breaks, GaussLegendre, Tol};

/// Largest radius accepted by the variance routines.
pub const R_MAX: f64 = 0.999;

const TOL: Tol = Tol::new(0.0, 1e-10).with_max_intervals(20_000);

fn gl16() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(16))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicEnsemble {
    l: f64,
}

impl HyperbolicEnsemble {
    pub fn new(l: f64) -> Result<Self> {
        if !(l > 0.0) || !l.is_finite() {
            return Err(Error::domain("HyperbolicEnsemble", format!("L = {l} must be positive")));
        }
        Ok(HyperbolicEnsemble { l })
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    /// `(1-u)^{L-1}`.
    pub fn weight(&self, u: f64) -> f64 {
        (1.0 - u).powf(self.l - 1.0)
    }

    /// `A(a) = ∫_0^{2π} (1 + a² - 2a cos θ)^{-(L+1)} dθ` for `0 <= a < 1`.
    ///
    /// The integrand peaks in a window of width `1 - a` around θ = 0, so the
    /// half-range `[0, π]` is split into panels that double in width from
    /// `(1-a)/4`, each with 16-point Gauss-Legendre.
    pub fn angular_kernel(&self, a: f64) -> f64 {
        let c = 1.0 - a;
        let f = |t: f64| (c * c + 2.0 * a * (1.0 - t.cos())).powf(-(self.l + 1.0));
        let rule = gl16();
        let mut lo = 0.0;
        let mut width = (0.25 * c).min(PI);
        let mut acc = 0.0;
        while lo < PI {
            let hi = (lo + width).min(PI);
            acc += rule.integrate(f, lo, hi);
            lo = hi;
            width *= 2.0;
        }
        2.0 * acc
    }

    /// The reduced pair density `(L²/2π) W(u) W(v) A(√(uv))`.
    pub fn pair_density(&self, u: f64, v: f64) -> f64 {
        self.l * self.l / TAU * self.weight(u) * self.weight(v) * self.angular_kernel((u * v).sqrt())
    }

    /// `∫_{s}^{1} W(v) A(√(uv)) dv`. For `L < 1` the substitution
    /// `w = (1-v)^L` removes the endpoint singularity of `W` at `v = 1`.
    fn outer_shell(&self, u: f64, s: f64) -> Result<f64> {
        let l = self.l;
        let v = if l < 1.0 {
            integrate_breaks(
                |w| {
                    let v = 1.0 - w.powf(1.0 / l);
                    self.angular_kernel((u * v).sqrt()) / l
                },
                &[0.0, (1.0 - s).powf(l)],
                TOL,
            )?
        } else {
            integrate_breaks(|v| self.weight(v) * self.angular_kernel((u * v).sqrt()), &[s, 1.0], TOL)?
        };
        Ok(v.value)
    }
}

/// A variance with the divisor that makes it bounded as `r -> 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceResult {
    pub value: f64,
    pub r: f64,
    /// Growth scale: `1/(1-r)`, `(1-r)^{-(1-p)}`, `-log(1-r)` or 1.
    pub normalization: f64,
}

impl VarianceResult {
    pub fn normalized(&self) -> f64 {
        self.value / self.normalization
    }
}

fn check_r(func: &'static str, r: f64) -> Result<()> {
    if !(r > 0.0 && r <= R_MAX) {
        return Err(Error::domain(func, format!("r = {r} must lie in (0, {R_MAX}]")));
    }
    Ok(())
}

/// Breakpoints on `[0, s]` accumulating geometrically at `s`, where the
/// integrands vary on the scale `1 - s`.
fn graded_to(s: f64) -> Vec<f64> {
    let mut pts = vec![0.0];
    let gap = 1.0 - s;
    let mut k = 64.0;
    while k >= 1.0 {
        let p = s - k * gap;
        if p > 0.0 {
            pts.push(p);
        }
        k /= 4.0;
    }
    pts.push(s);
    pts
}

/// `V[X_L(rD)] = ∫_{rD} ∫_{(rD)^c} |K_L|² dμ_L dμ_L`.
pub fn variance_count(l: f64, r: f64) -> Result<VarianceResult> {
    check_r("variance_count", r)?;
    let ens = HyperbolicEnsemble::new(l)?;
    let s = r * r;
    let mut err = None;
    let inner = integrate_breaks(
        |u| match ens.outer_shell(u, s) {
            Ok(v) => ens.weight(u) * v,
            Err(e) => {
                err.get_or_insert(e);
                f64::NAN
            }
        },
        &graded_to(s),
        TOL,
    );
    if let Some(e) = err {
        return Err(e);
    }
    Ok(VarianceResult {
        value: l * l / TAU * inner?.value,
        r,
        normalization: 1.0 / (1.0 - r),
    })
}

/// `f(u) = (1 - u/r²)_+^{p/2}`, the statistic `φ_p` as a function of `|z|²`.
fn phi_p(u: f64, s: f64, p: f64) -> f64 {
    if u >= s {
        0.0
    } else {
        (1.0 - u / s).powf(0.5 * p)
    }
}

/// Integrand of the linear-statistic variance at `(u, v)`, including the
/// `½ |φ(z) - φ(w)|²` factor; symmetric in its arguments.
pub fn linear_pair_integrand(l: f64, r: f64, p: f64, u: f64, v: f64) -> Result<f64> {
    let ens = HyperbolicEnsemble::new(l)?;
    let s = r * r;
    let d = phi_p(u, s, p) - phi_p(v, s, p);
    Ok(0.5 * d * d * ens.pair_density(u, v))
}

/// `V[X_L(φ_p)] = ½ ∫∫ |φ_p(z) - φ_p(w)|² |K_L|² dμ_L dμ_L` with
/// `φ_p(z) = (1 - |z|²/r²)_+^{p/2}`.
///
/// The square `[0,r²]²` (both points inside the support of `φ_p`) and the
/// strip `[0,r²] × [r²,1]` are integrated separately; outside both the
/// integrand vanishes. On `[0, r²]` the substitution `u = r²(1 - t^m)` turns
/// `φ_p` into `t^{mp/2}`, which removes its endpoint singularity for
/// `mp/2 >= 1`.
pub fn variance_linear(l: f64, r: f64, p: f64) -> Result<VarianceResult> {
    check_r("variance_linear", r)?;
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::domain("variance_linear", format!("p = {p} must be positive")));
    }
    let ens = HyperbolicEnsemble::new(l)?;
    let s = r * r;
    let m = (2.0 / p).ceil().clamp(2.0, 8.0);
    let u_of = |t: f64| s * (1.0 - t.powf(m));
    let jac = |t: f64| s * m * t.powf(m - 1.0);
    let f_of = |t: f64| t.powf(0.5 * m * p);
    let mut breaks: Vec<f64> = [1.0, 4.0, 16.0, 64.0]
        .iter()
        .map(|k| (k * (1.0 - s) / s).powf(1.0 / m))
        .filter(|&t| t < 1.0)
        .collect();
    breaks.extend([0.0, 1.0]);
    breaks.sort_by(f64::total_cmp);

    let mut err: Option<Error> = None;
    let strip = integrate_breaks(
        |t| {
            let u = u_of(t);
            match ens.outer_shell(u, s) {
                Ok(v) => f_of(t).powi(2) * ens.weight(u) * v * jac(t),
                Err(e) => {
                    err.get_or_insert(e);
                    f64::NAN
                }
            }
        },
        &breaks,
        TOL,
    );
    if let Some(e) = err.take() {
        return Err(e);
    }
    let strip = strip?.value;
    // The strip sets the scale: as p -> 0 the square term vanishes and a
    // purely relative target on it would never be met.
    let outer_tol = Tol::new(1e-11 * strip, 1e-9).with_max_intervals(20_000);
    let inner_tol = Tol::new(1e-11 * strip, 1e-9).with_max_intervals(20_000);
    // Both inside: by symmetry, the triangle t_v > t_u counted once.
    let square = integrate_breaks(
        |tu| {
            let u = u_of(tu);
            let fu = f_of(tu);
            let mut pts = vec![tu];
            pts.extend(breaks.iter().copied().filter(|&x| x > tu));
            if pts.len() < 2 {
                return 0.0;
            }
            match integrate_breaks(
                |tv| {
                    let v = u_of(tv);
                    let d = fu - f_of(tv);
                    d * d * ens.weight(v) * ens.angular_kernel((u * v).sqrt()) * jac(tv)
                },
                &pts,
                inner_tol,
            ) {
                Ok(v) => ens.weight(u) * jac(tu) * v.value,
                Err(e) => {
                    err.get_or_insert(e);
                    f64::NAN
                }
            }
        },
        &breaks,
        outer_tol,
    );
    if let Some(e) = err {
        return Err(e);
    }
    let value = l * l / TAU * (square?.value + strip);
    let normalization = if (p - 1.0).abs() < 1e-12 {
        -(1.0 - r).ln()
    } else if p < 1.0 {
        (1.0 - r).powf(-(1.0 - p))
    } else {
        1.0
    };
    Ok(VarianceResult { value, r, normalization })
}

/// `E[X_L(rD)] = L r²/(1 - r²)`.
pub fn mean_count(l: f64, r: f64) -> Result<f64> {
    HyperbolicEnsemble::new(l)?;
    if !(0.0..1.0).contains(&r) {
        return Err(Error::domain("mean_count", format!("r = {r} must lie in [0, 1)")));
    }
    Ok(l * r * r / (1.0 - r * r))
}

/// `E[X_L(rD)] = ∫_{rD} K_L(z,z) dμ_L` by quadrature, `L ∫_0^{r²} (1-u)^{-2} du`.
pub fn mean_count_quadrature(l: f64, r: f64) -> Result<f64> {
    HyperbolicEnsemble::new(l)?;
    if !(0.0..1.0).contains(&r) {
        return Err(Error::domain("mean_count_quadrature", format!("r = {r} must lie in [0, 1)")));
    }
    if r == 0.0 {
        return Ok(0.0);
    }
    let v = integrate_breaks(|u| (1.0 - u).powi(-2), &graded_to(r * r), Tol::new(0.0, 1e-13))?;
    Ok(l * v.value)
}

/// The window `[1/(π 2^{L+2} 3^{2L}), L/2]` that holds `(1-r) V[X_L(rD)]`
/// as `r -> 1`.
pub fn count_window(l: f64) -> (f64, f64) {
    (1.0 / (PI * 2f64.powf(l + 2.0) * 3f64.powf(2.0 * l)), l / 2.0)
}

/// Upper bound `V[X_L(rD)] <= E[X_L(rD)] = L r²/(1-r²)`, valid for every r.
pub fn count_upper_bound(l: f64, r: f64) -> Result<f64> {
    mean_count(l, r)
}

/// Finite-r lower bound
/// `V >= (1/(r π 2^{L+2})) ((1-r)^{-2L} 3^{-2L} - 1)(1-r)^{2L-1}`.
pub fn count_lower_bound(l: f64, r: f64) -> f64 {
    let q = 1.0 - r;
    ((q.powf(-2.0 * l) * 3f64.powf(-2.0 * l)) - 1.0) * q.powf(2.0 * l - 1.0) / (r * PI * 2f64.powf(l + 2.0))
}

/// Upper bound `V[X_L(φ_p)] <= (L/r^{2p}) ∫_{1-r²}^1 t^{p-2} dt`.
pub fn linear_upper_bound(l: f64, r: f64, p: f64) -> f64 {
    let s = r * r;
    let c = l / s.powf(p);
    if (p - 1.0).abs() < 1e-12 {
        -c * (1.0 - s).ln()
    } else {
        c / (p - 1.0) * (1.0 - (1.0 - s).powf(p - 1.0))
    }
}

/// Lower bound on `(1-r)^{1-p} V[X_L(φ_p)]` for `p < 1` and `r^4 > 1/2`:
/// `(1/(π 2^{L+2})) (2^{-2L} - (1-r)^{2L})`.
pub fn linear_lower_bound_normalized(l: f64, r: f64) -> f64 {
    (2f64.powf(-2.0 * l) - (1.0 - r).powf(2.0 * l)) / (PI * 2f64.powf(l + 2.0))
}
