//! Weighted logarithmic potential theory for radial external fields.
//!
//! For a radial field `Q(z) = g(|z|)/2` the equilibrium measure is
//! `dμ = (g''(r) + g'(r)/r)/(4π) dm` on the disk `|z| <= T`, `T g'(T) = 2`,
//! and its energy is
//! `R_∅ = log(1/T) + g(T) - ¼ ∫_0^T r g'(r)² dr`.
//! Removing a region `U` inside that disk sweeps `μ|_U` onto `∂U`; with `ν`
//! the swept (balayage) measure the constrained minimum energy is
//! `R_U = R_∅ + ½ [∫ g dν - ∫_U g dμ]`.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::{integrate, integrate_breaks, Tol};
use crate::region::{Region, Shape};

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type CurveFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

const TOL: Tol = Tol::new(1e-13, 1e-13);

#[derive(Clone)]
enum FieldKind {
    /// `c r^α`
    Power { c: f64, alpha: f64 },
    Custom { g: RealFn, g1: RealFn, g2: RealFn },
}

/// A radial external field `g` with its first two derivatives.
#[derive(Clone)]
pub struct RadialField {
    label: String,
    kind: FieldKind,
}

impl fmt::Debug for RadialField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialField").field("label", &self.label).finish()
    }
}

impl RadialField {
    /// `g(r) = r^α`.
    pub fn power(alpha: f64) -> Result<Self> {
        Self::scaled_power(1.0, alpha)
    }

    /// `g(r) = c r^α`.
    pub fn scaled_power(c: f64, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite() && c > 0.0 && c.is_finite()) {
            return Err(Error::domain(
                "RadialField",
                format!("need c > 0 and alpha > 0, got c = {c}, alpha = {alpha}"),
            ));
        }
        let label = if c == 1.0 {
            format!("r^{alpha}")
        } else {
            format!("{c}*r^{alpha}")
        };
        Ok(RadialField {
            label,
            kind: FieldKind::Power { c, alpha },
        })
    }

    /// A field given by closures for `g`, `g'` and `g''`.
    pub fn custom<G, G1, G2>(label: impl Into<String>, g: G, g1: G1, g2: G2) -> Self
    where
        G: Fn(f64) -> f64 + Send + Sync + 'static,
        G1: Fn(f64) -> f64 + Send + Sync + 'static,
        G2: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        RadialField {
            label: label.into(),
            kind: FieldKind::Custom {
                g: Arc::new(g),
                g1: Arc::new(g1),
                g2: Arc::new(g2),
            },
        }
    }

    /// The field `c g`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::domain("RadialField::scaled", format!("factor {c} must be positive")));
        }
        Ok(match &self.kind {
            FieldKind::Power { c: c0, alpha } => Self::scaled_power(c * c0, *alpha)?,
            FieldKind::Custom { g, g1, g2 } => {
                let (g, g1, g2) = (g.clone(), g1.clone(), g2.clone());
                Self::custom(
                    format!("{c}*({})", self.label),
                    move |r| c * g(r),
                    move |r| c * g1(r),
                    move |r| c * g2(r),
                )
            }
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `(c, α)` for fields of the form `c r^α`.
    pub fn power_params(&self) -> Option<(f64, f64)> {
        match self.kind {
            FieldKind::Power { c, alpha } => Some((c, alpha)),
            FieldKind::Custom { .. } => None,
        }
    }

    /// `c` when the field is `c r²`.
    pub fn quadratic_coefficient(&self) -> Option<f64> {
        self.power_params().filter(|&(_, a)| a == 2.0).map(|(c, _)| c)
    }

    pub fn g(&self, r: f64) -> f64 {
        match &self.kind {
            FieldKind::Power { c, alpha } => c * r.powf(*alpha),
            FieldKind::Custom { g, .. } => g(r),
        }
    }

    pub fn g1(&self, r: f64) -> f64 {
        match &self.kind {
            FieldKind::Power { c, alpha } => c * alpha * r.powf(alpha - 1.0),
            FieldKind::Custom { g1, .. } => g1(r),
        }
    }

    pub fn g2(&self, r: f64) -> f64 {
        match &self.kind {
            FieldKind::Power { c, alpha } => c * alpha * (alpha - 1.0) * r.powf(alpha - 2.0),
            FieldKind::Custom { g2, .. } => g2(r),
        }
    }

    /// Numerical check of the admissibility conditions at sentinel radii:
    /// `g` nondecreasing, `r g'(r)` nondecreasing with limit 0 at `0+`, and
    /// `r e^{-g(r)/2} -> 0`.
    pub fn validate(&self) -> Result<()> {
        let radii: Vec<f64> = (-8..=6).flat_map(|e| [1.0, 2.5, 5.0].map(|m| m * 10f64.powi(e))).collect();
        let bad = |what: &str| Err(Error::domain("RadialField::validate", format!("{}: {what}", self.label)));
        for w in radii.windows(2) {
            if self.g(w[1]) < self.g(w[0]) {
                return bad("g is not nondecreasing");
            }
            if w[1] * self.g1(w[1]) < w[0] * self.g1(w[0]) * (1.0 - 1e-12) {
                return bad("r g'(r) is not nondecreasing");
            }
        }
        if (1e-8 * self.g1(1e-8)).abs() > 1e-3 {
            return bad("r g'(r) does not vanish at 0+");
        }
        let far = 1e6;
        if !(far * (-0.5 * self.g(far)).exp() < 1e-3) {
            return bad("r e^{-g(r)/2} does not vanish at infinity");
        }
        Ok(())
    }
}

/// Solves `t g'(t) = level` on `[1e-9, 1e6]`.
///
/// `r g'(r)` is nondecreasing, so the root is bracketed; the iteration is
/// bisection in `log t` while the bracket is wide, then Illinois-modified
/// regula falsi.
pub fn solve_level(field: &RadialField, level: f64) -> Result<f64> {
    let f = |t: f64| t * field.g1(t) - level;
    let (mut lo, mut hi) = (1e-9, 1e6);
    let (mut flo, mut fhi) = (f(lo), f(hi));
    if !(flo <= 0.0 && fhi >= 0.0) {
        return Err(Error::BracketFailure {
            what: "t g'(t) - level",
            lo,
            hi,
        });
    }
    let ftol = 1e-14 * level.abs().max(1.0);
    let mut side = 0i8;
    for _ in 0..500 {
        let x = if hi / lo > 2.0 {
            (lo * hi).sqrt()
        } else {
            let s = hi - fhi * (hi - lo) / (fhi - flo);
            if s > lo && s < hi {
                s
            } else {
                0.5 * (lo + hi)
            }
        };
        let fx = f(x);
        if fx.abs() <= ftol {
            return Ok(x);
        }
        if fx < 0.0 {
            lo = x;
            flo = fx;
            if side == -1 {
                fhi *= 0.5;
            }
            side = -1;
        } else {
            hi = x;
            fhi = fx;
            if side == 1 {
                flo *= 0.5;
            }
            side = 1;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            return Ok(if f(lo).abs() < f(hi).abs() { lo } else { hi });
        }
    }
    Err(Error::no_conv("solve_level", format!("level {level}")))
}

/// Support radius `T` of the equilibrium measure: `T g'(T) = 2`.
pub fn solve_t(field: &RadialField) -> Result<f64> {
    solve_level(field, 2.0)
}

/// Minimum weighted energy `R_∅` of the unconstrained problem.
pub fn r_empty(field: &RadialField) -> Result<f64> {
    let t = solve_t(field)?;
    let integral = integrate(|r| r * field.g1(r).powi(2), 0.0, t, TOL)?;
    Ok(-t.ln() + field.g(t) - 0.25 * integral.value)
}

/// The equilibrium measure of a radial field.
#[derive(Debug, Clone)]
pub struct EquilibriumMeasure {
    /// Support radius.
    pub t: f64,
    /// Minimum energy `R_∅`.
    pub r_empty: f64,
    field: RadialField,
}

impl EquilibriumMeasure {
    pub fn new(field: &RadialField) -> Result<Self> {
        Ok(EquilibriumMeasure {
            t: solve_t(field)?,
            r_empty: r_empty(field)?,
            field: field.clone(),
        })
    }

    pub fn field(&self) -> &RadialField {
        &self.field
    }

    /// Density with respect to area measure at modulus `r`.
    pub fn radial_density(&self, r: f64) -> f64 {
        if r <= 0.0 || r > self.t {
            0.0
        } else {
            (self.field.g2(r) + self.field.g1(r) / r) / (4.0 * PI)
        }
    }

    /// Mass of `{|z| <= r}`, equal to `r g'(r) / 2` inside the support.
    pub fn mass_within(&self, r: f64) -> f64 {
        if r >= self.t {
            1.0
        } else if r <= 0.0 {
            0.0
        } else {
            0.5 * r * self.field.g1(r)
        }
    }

    /// Radius `r` with `mass_within(r) = u`.
    pub fn inverse_mass(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        let (mut lo, mut hi) = (0.0, self.t);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.mass_within(mid) < u {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= f64::EPSILON * hi {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    /// Total mass by quadrature of the density.
    pub fn total_mass(&self) -> Result<f64> {
        let v = integrate(|r| TAU * r * self.radial_density(r), 0.0, self.t, TOL)?;
        Ok(v.value)
    }

    /// Logarithmic potential `p(z) = ∫ log(1/|z-w|) dμ(w)`.
    ///
    /// The angular average of `log(1/|z - r e^{iθ}|)` is `log(1/max(|z|, r))`,
    /// which collapses the area integral to a radial one.
    pub fn potential(&self, z: Complex64) -> Result<f64> {
        let m = z.norm();
        if m >= self.t {
            return Ok(-m.ln());
        }
        let f = &self.field;
        let outer = integrate(|r| -r.ln() * 0.5 * (f.g1(r) + r * f.g2(r)), m, self.t, TOL)?;
        let inner = if m > 0.0 { -m.ln() * self.mass_within(m) } else { 0.0 };
        Ok(inner + outer.value)
    }

    /// `∫_U f(r, θ) dμ` for a region inside the support.
    pub fn restricted_integral<F>(&self, region: &Region, f: F) -> Result<f64>
    where
        F: Fn(f64, f64) -> f64,
    {
        if region.is_empty() {
            return Ok(0.0);
        }
        region.polar_integral(|r, theta| f(r, theta) * self.radial_density(r), TOL)
    }
}

/// `(1/2π) ∫_0^{2π} log(1/|z - r e^{iθ}|) dθ` by adaptive quadrature, split
/// at the angle of `z` where the integrand peaks.
pub fn angular_log_average(z: Complex64, r: f64) -> Result<f64> {
    let phi = z.arg().rem_euclid(TAU);
    let v = integrate_breaks(
        |theta| -(z - Complex64::from_polar(r, theta)).norm().ln(),
        &[0.0, phi, TAU],
        Tol::new(1e-12, 1e-12).with_max_intervals(20_000),
    )?;
    Ok(v.value / TAU)
}

fn require_inside_support(region: &Region, t: f64) -> Result<()> {
    let m = region.max_modulus();
    let ok = if region.boundary_contact {
        m <= t * (1.0 + 1e-12)
    } else {
        m < t
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Unsupported(format!(
            "hypothesis violated: the closure of U must lie inside the equilibrium support |z| < T = {t}, \
             but the {} reaches |z| = {m}",
            region.kind()
        )))
    }
}

/// One arc of a boundary measure: a curve on `[t0, t1]` and the mass per
/// unit parameter along it.
#[derive(Clone)]
pub struct BoundaryPiece {
    pub t0: f64,
    pub t1: f64,
    pub point: CurveFn,
    pub density: RealFn,
}

impl fmt::Debug for BoundaryPiece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundaryPiece")
            .field("t0", &self.t0)
            .field("t1", &self.t1)
            .finish_non_exhaustive()
    }
}

/// A candidate for the balayage of `μ|_U` onto `∂U`.
#[derive(Debug, Clone)]
pub struct BalayageCandidate {
    pub pieces: Vec<BoundaryPiece>,
    pub total_mass: f64,
}

fn circle(center: Complex64, radius: f64, density: RealFn) -> BoundaryPiece {
    BoundaryPiece {
        t0: 0.0,
        t1: TAU,
        point: Arc::new(move |t| center + Complex64::from_polar(radius, t)),
        density,
    }
}

impl BalayageCandidate {
    pub fn new(pieces: Vec<BoundaryPiece>) -> Result<Self> {
        for p in &pieces {
            for i in 0..=64 {
                let t = p.t0 + (p.t1 - p.t0) * i as f64 / 64.0;
                if (p.density)(t) < 0.0 {
                    return Err(Error::domain("BalayageCandidate", format!("negative density at t = {t}")));
                }
            }
        }
        let mut c = BalayageCandidate {
            pieces,
            total_mass: 0.0,
        };
        c.total_mass = c.integrate(|_| 1.0)?;
        Ok(c)
    }

    /// The known balayage densities:
    /// centred disks and annuli for any radial field, translated disks,
    /// ellipses and cardioids for quadratic fields `c r²`.
    pub fn for_region(region: &Region, field: &RadialField) -> Result<Self> {
        let quad = field.quadratic_coefficient();
        let unsupported = || {
            Err(Error::Unsupported(format!(
                "no balayage density is known for a {} under the field {}",
                region.kind(),
                field.label()
            )))
        };
        let pieces = match region.shape {
            Shape::Empty => vec![],
            Shape::Disk { center, radius: a } if center.norm() == 0.0 => {
                let d = a * field.g1(a) / (4.0 * PI);
                vec![circle(center, a, Arc::new(move |_| d))]
            }
            Shape::Disk { center, radius: a } => match quad {
                Some(c) => {
                    let d = c * a * a / TAU;
                    vec![circle(center, a, Arc::new(move |_| d))]
                }
                None => return unsupported(),
            },
            Shape::Annulus { inner: a, outer: b } => {
                let (ga, gb) = (a * field.g1(a), b * field.g1(b));
                let log_ratio = (b / a).ln();
                let lambda = ((field.g(b) - field.g(a)) - ga * log_ratio) / ((gb - ga) * log_ratio);
                let per_angle = (gb - ga) / (4.0 * PI);
                let origin = Complex64::new(0.0, 0.0);
                vec![
                    circle(origin, a, Arc::new(move |_| lambda * per_angle)),
                    circle(origin, b, Arc::new(move |_| (1.0 - lambda) * per_angle)),
                ]
            }
            Shape::Ellipse { a, b } => match quad {
                Some(c) => {
                    let e = (a * a - b * b) / (a * a + b * b);
                    vec![BoundaryPiece {
                        t0: 0.0,
                        t1: TAU,
                        point: Arc::new(move |t| Complex64::new(a * t.cos(), b * t.sin())),
                        density: Arc::new(move |t| c * a * b / TAU * (1.0 - e * (2.0 * t).cos())),
                    }]
                }
                None => return unsupported(),
            },
            Shape::Cardioid { a, b } => match quad {
                Some(c) => vec![BoundaryPiece {
                    t0: 0.0,
                    t1: TAU,
                    point: Arc::new(move |t| Complex64::from_polar(b * (1.0 + 2.0 * a * t.cos()), t)),
                    density: Arc::new(move |t| c * b * b / TAU * (1.0 + 2.0 * a * a + 2.0 * a * t.cos())),
                }],
                None => return unsupported(),
            },
            Shape::Triangle { .. } | Shape::HalfDisk { .. } => return unsupported(),
        };
        Self::new(pieces)
    }

    /// `∫ f dν` for real `f`.
    pub fn integrate<F: Fn(Complex64) -> f64>(&self, f: F) -> Result<f64> {
        let mut total = 0.0;
        for p in &self.pieces {
            total += integrate(|t| f((p.point)(t)) * (p.density)(t), p.t0, p.t1, TOL)?.value;
        }
        Ok(total)
    }

    /// `∫ f dν` for complex `f`.
    pub fn integrate_complex<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Result<Complex64> {
        let re = self.integrate(|w| f(w).re)?;
        let im = self.integrate(|w| f(w).im)?;
        Ok(Complex64::new(re, im))
    }
}

/// `R_U` from a balayage candidate:
/// `R_∅ + ½ [∫ g dν - ∫_U g dμ]`.
pub fn r_hole_from_balayage(
    region: &Region,
    field: &RadialField,
    candidate: &BalayageCandidate,
) -> Result<f64> {
    let eq = EquilibriumMeasure::new(field)?;
    require_inside_support(region, eq.t)?;
    let mu_mass = eq.restricted_integral(region, |_, _| 1.0)?;
    if (candidate.total_mass - mu_mass).abs() > 1e-6 {
        return Err(Error::MassMismatch {
            nu: candidate.total_mass,
            mu: mu_mass,
        });
    }
    let nu_g = candidate.integrate(|w| field.g(w.norm()))?;
    let mu_g = eq.restricted_integral(region, |r, _| field.g(r))?;
    Ok(eq.r_empty + 0.5 * (nu_g - mu_g))
}

/// `max_{0<=n<=n_max} |∫ w^n dν - ∫_U w^n dμ|`.
pub fn balayage_moment_residual(
    region: &Region,
    candidate: &BalayageCandidate,
    field: &RadialField,
    n_max: usize,
) -> Result<f64> {
    let eq = EquilibriumMeasure::new(field)?;
    let mut worst: f64 = 0.0;
    for n in 0..=n_max {
        let nf = n as f64;
        let nu = candidate.integrate_complex(|w| w.powu(n as u32))?;
        let mu_re = eq.restricted_integral(region, |r, t| r.powf(nf) * (nf * t).cos())?;
        let mu_im = eq.restricted_integral(region, |r, t| r.powf(nf) * (nf * t).sin())?;
        worst = worst.max((nu - Complex64::new(mu_re, mu_im)).norm());
    }
    Ok(worst)
}

fn unsupported_alpha(region: &Region, alpha: f64) -> Error {
    Error::Unsupported(format!(
        "hypothesis violated: the {} constant is only available for the quadratic field (alpha = 2), got alpha = {alpha}",
        region.kind()
    ))
}

/// `R_U' = R_U - R_∅` in closed form for the field `|z|^α`.
///
/// Centred disks and annuli are covered for every `α`, the remaining shapes
/// (and translated disks) for `α = 2`.
pub fn r_hole_closed_form(region: &Region, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::domain("r_hole_closed_form", format!("alpha = {alpha} must be positive")));
    }
    // Centred disks and annuli are settled by the radial product at every
    // scale; the other shapes rely on U lying inside the support.
    let radial = match region.shape {
        Shape::Disk { center, .. } => center.norm() == 0.0,
        Shape::Annulus { .. } | Shape::Empty => true,
        _ => false,
    };
    if !radial {
        require_inside_support(region, (2.0 / alpha).powf(1.0 / alpha))?;
    }
    let quadratic = alpha == 2.0;
    let sqrt3 = 3f64.sqrt();
    Ok(match region.shape {
        Shape::Empty => 0.0,
        Shape::Disk { center, radius: a } => {
            if center.norm() == 0.0 || quadratic {
                alpha / 2.0 * a.powf(2.0 * alpha) / 4.0
            } else {
                return Err(unsupported_alpha(region, alpha));
            }
        }
        Shape::Annulus { inner: a, outer: b } => {
            let (aa, ba) = (a.powf(alpha), b.powf(alpha));
            alpha / 2.0 * (ba * ba / 4.0 - aa * aa / 4.0 - (ba - aa).powi(2) / (2.0 * alpha * (b / a).ln()))
        }
        _ if !quadratic => return Err(unsupported_alpha(region, alpha)),
        Shape::Ellipse { a, b } => 0.5 * (a * b).powi(3) / (a * a + b * b),
        Shape::Cardioid { a, b } => {
            let b4 = b.powi(4);
            b4 / 2.0 * (a * a + 1.0).powi(2) - b4 / 4.0
        }
        Shape::Triangle { a } => a.powi(4) / TAU * (9.0 * sqrt3 / 80.0),
        Shape::HalfDisk { a } => a.powi(4) / 2.0 * (0.5 - 4.0 / (PI * PI)),
    })
}

/// Limit of `r^{-2α} log P[no point in rU]`, that is `R_∅ - R_U = -R_U'`.
pub fn decay_constant(region: &Region, alpha: f64) -> Result<f64> {
    match r_hole_closed_form(region, alpha) {
        Ok(v) => Ok(-v),
        Err(Error::Unsupported(msg)) if !msg.contains("support") => {
            let field = RadialField::power(alpha)?;
            let cand = BalayageCandidate::for_region(region, &field).map_err(|_| Error::Unsupported(msg))?;
            let eq = EquilibriumMeasure::new(&field)?;
            Ok(eq.r_empty - r_hole_from_balayage(region, &field, &cand)?)
        }
        Err(e) => Err(e),
    }
}

/// `R_U'` by an independent numerical route, when one exists: balayage
/// quadrature, or the moment identities for the triangle and half-disk.
pub fn r_hole_numeric(region: &Region, alpha: f64) -> Result<(f64, &'static str)> {
    let field = RadialField::power(alpha)?;
    match region.shape {
        Shape::Triangle { a } if alpha == 2.0 => {
            require_inside_support(region, 1.0)?;
            Ok((triangle_r_prime_from_moments(a)?, "triangle-moments"))
        }
        Shape::HalfDisk { a } if alpha == 2.0 => {
            require_inside_support(region, 1.0)?;
            Ok((halfdisk_r_prime_from_series(a, HALFDISK_TERMS)?, "halfdisk-series"))
        }
        _ => {
            let cand = BalayageCandidate::for_region(region, &field)?;
            let eq = EquilibriumMeasure::new(&field)?;
            Ok((r_hole_from_balayage(region, &field, &cand)? - eq.r_empty, "balayage"))
        }
    }
}

/// Energies of the β-ensemble problem, computed with the field `(2/β) g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaEnergy {
    /// Support radius, the solution of `t g'(t) = β`.
    pub t_beta: f64,
    pub r_empty: f64,
    pub r_hole: f64,
    /// `R_{U,β} - R_{∅,β}`.
    pub difference: f64,
    /// `-(β/2) (R_{U,β} - R_{∅,β})`.
    pub decay: f64,
}

/// Constrained and unconstrained energies for the β-ensemble with field
/// `|z|^α`, through the rescaled field `(2/β)|z|^α`.
pub fn r_hole_beta(region: &Region, alpha: f64, beta: f64) -> Result<BetaEnergy> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::domain("r_hole_beta", format!("beta = {beta} must be positive")));
    }
    let base = RadialField::power(alpha)?;
    let t_beta = solve_level(&base, beta)?;
    require_inside_support(region, t_beta)?;
    let c = 2.0 / beta;
    let field = base.scaled(c)?;
    let r_empty = r_empty(&field)?;
    let difference = match BalayageCandidate::for_region(region, &field) {
        Ok(cand) => r_hole_from_balayage(region, &field, &cand)? - r_empty,
        // c r^α is r^α seen through z -> c^{1/α} z.
        Err(Error::Unsupported(_)) => r_hole_closed_form(&region.scaled(c.powf(1.0 / alpha))?, alpha)?,
        Err(e) => return Err(e),
    };
    Ok(BetaEnergy {
        t_beta,
        r_empty,
        r_hole: r_empty + difference,
        difference,
        decay: -0.5 * beta * difference,
    })
}

/// Moment identities on the equilateral triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleMoments {
    /// Balayage mass on each edge, `(1/3π) ∫_U dm`.
    pub edge_mass: f64,
    /// `∫_0^1 t(1-t) dν(t)` on one edge, from the `w³` moment identity.
    pub t1mt: f64,
    /// `√3 a² / (20π)`.
    pub expected: f64,
    pub residual: f64,
}

/// Edge moments of the triangle balayage from area quadrature.
///
/// On the edge `w = a(t + (1-t)ω)` one has `Re (w/a)³ = 1 - (9/2) t(1-t)`, so
/// the `n = 3` moment identity `3a³ ∫ (w/a)³ dν = (1/π)∫_U w³ dm` determines
/// `∫ t(1-t) dν` without knowing `ν`.
pub fn triangle_constraint_check(a: f64) -> Result<TriangleMoments> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::domain("triangle_constraint_check", format!("a = {a} must lie in (0, 1)")));
    }
    let tri = Region::triangle(a)?;
    let edge_mass = tri.polar_integral(|_, _| 1.0, TOL)? / (3.0 * PI);
    let cube = tri.polar_integral(|r, t| r.powi(3) * (3.0 * t).cos(), TOL)? / (3.0 * a.powi(3) * PI);
    let t1mt = 2.0 / 9.0 * (edge_mass - cube);
    let expected = 3f64.sqrt() * a * a / (20.0 * PI);
    Ok(TriangleMoments {
        edge_mass,
        t1mt,
        expected,
        residual: (t1mt - expected).abs(),
    })
}

/// `R_U'` for the triangle from its moment identities: on each edge
/// `|w|² = a²(1 - 3t(1-t))`.
pub fn triangle_r_prime_from_moments(a: f64) -> Result<f64> {
    let m = triangle_constraint_check(a)?;
    let nu_sq = 3.0 * a * a * (m.edge_mass - 3.0 * m.t1mt);
    let mu_sq = Region::triangle(a)?.polar_integral(|r, _| r * r, TOL)? / PI;
    Ok(0.5 * (nu_sq - mu_sq))
}

/// Truncation used for half-disk series diagnostics.
pub const HALFDISK_TERMS: usize = 10_000;

/// Partial sum of the sine series for the arc density of the half-disk
/// balayage, `(4a²/π²) Σ_{k<=terms} sin((2k-1)θ)/(4k²-1)`.
pub fn halfdisk_arc_density(a: f64, theta: f64, terms: usize) -> f64 {
    let s: f64 = (1..=terms)
        .map(|k| {
            let kf = k as f64;
            ((2.0 * kf - 1.0) * theta).sin() / (4.0 * kf * kf - 1.0)
        })
        .sum();
    4.0 * a * a / (PI * PI) * s
}

/// `∫ |z|² dν` for the half-disk, `a² ∫_0^π (1 - cos 2θ) g(θ) dθ`, summed
/// term by term over the first `terms` sine modes.
pub fn halfdisk_second_moment(a: f64, terms: usize) -> f64 {
    let s: f64 = (1..=terms)
        .rev()
        .map(|k| {
            let m = 2.0 * k as f64 - 1.0;
            (2.0 / m - 1.0 / (m + 2.0) - 1.0 / (m - 2.0)) / (m * (m + 2.0))
        })
        .sum();
    4.0 * a.powi(4) / (PI * PI) * s
}

/// `R_U'` for the half-disk from the truncated series and an area quadrature
/// of `(1/π) ∫_U |z|² dm`.
pub fn halfdisk_r_prime_from_series(a: f64, terms: usize) -> Result<f64> {
    let mu_sq = Region::half_disk(a)?.polar_integral(|r, _| r * r, TOL)? / PI;
    Ok(0.5 * (halfdisk_second_moment(a, terms) - mu_sq))
}
