//! Hole shapes: membership, polar description and projection onto the
//! complement.

use std::f64::consts::{FRAC_PI_3, PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::{integrate_breaks, Tol};

/// The canonical hole shapes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    Empty,
    /// `{|z - center| < radius}`.
    Disk { center: Complex64, radius: f64 },
    /// `{inner < |z| < outer}`.
    Annulus { inner: f64, outer: f64 },
    /// `{(x/a)² + (y/b)² < 1}`.
    Ellipse { a: f64, b: f64 },
    /// Interior of the curve `b(1 + 2a cos θ) e^{iθ}`, `0 <= a < 1/2`.
    Cardioid { a: f64, b: f64 },
    /// Equilateral triangle with vertices `a`, `aω`, `aω²`, `ω = e^{2πi/3}`.
    Triangle { a: f64 },
    /// `{r e^{iθ} : 0 < r < a, 0 < θ < π}`.
    HalfDisk { a: f64 },
}

/// A hole region.
///
/// `boundary_contact` marks regions that are allowed to touch the boundary
/// circle of the equilibrium support; by default the closure must lie
/// strictly inside it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub shape: Shape,
    pub boundary_contact: bool,
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("Region", format!("{name} = {v} must be positive and finite")))
    }
}

impl Region {
    fn from_shape(shape: Shape) -> Self {
        Region {
            shape,
            boundary_contact: false,
        }
    }

    pub fn empty() -> Self {
        Self::from_shape(Shape::Empty)
    }

    /// Centred disk of radius `a`; `a = 0` gives the empty region.
    pub fn disk(a: f64) -> Result<Self> {
        Self::disk_at(Complex64::new(0.0, 0.0), a)
    }

    pub fn disk_at(center: Complex64, radius: f64) -> Result<Self> {
        if radius == 0.0 {
            return Ok(Self::empty());
        }
        positive("radius", radius)?;
        if !center.re.is_finite() || !center.im.is_finite() {
            return Err(Error::domain("Region", "disk center must be finite"));
        }
        Ok(Self::from_shape(Shape::Disk { center, radius }))
    }

    pub fn annulus(inner: f64, outer: f64) -> Result<Self> {
        positive("inner", inner)?;
        positive("outer", outer)?;
        if inner >= outer {
            return Err(Error::domain("Region", format!("annulus needs inner < outer, got {inner}, {outer}")));
        }
        Ok(Self::from_shape(Shape::Annulus { inner, outer }))
    }

    pub fn ellipse(a: f64, b: f64) -> Result<Self> {
        positive("a", a)?;
        positive("b", b)?;
        Ok(Self::from_shape(Shape::Ellipse { a, b }))
    }

    pub fn cardioid(a: f64, b: f64) -> Result<Self> {
        positive("b", b)?;
        if !(0.0..0.5).contains(&a) {
            return Err(Error::domain("Region", format!("cardioid needs 0 <= a < 1/2, got {a}")));
        }
        Ok(Self::from_shape(Shape::Cardioid { a, b }))
    }

    pub fn triangle(a: f64) -> Result<Self> {
        positive("a", a)?;
        Ok(Self::from_shape(Shape::Triangle { a }))
    }

    pub fn half_disk(a: f64) -> Result<Self> {
        positive("a", a)?;
        Ok(Self::from_shape(Shape::HalfDisk { a }))
    }

    pub fn with_boundary_contact(mut self, allowed: bool) -> Self {
        self.boundary_contact = allowed;
        self
    }

    pub fn is_empty(&self) -> bool {
        matches!(self.shape, Shape::Empty)
    }

    pub fn kind(&self) -> &'static str {
        match self.shape {
            Shape::Empty => "empty",
            Shape::Disk { .. } => "disk",
            Shape::Annulus { .. } => "annulus",
            Shape::Ellipse { .. } => "ellipse",
            Shape::Cardioid { .. } => "cardioid",
            Shape::Triangle { .. } => "triangle",
            Shape::HalfDisk { .. } => "halfdisk",
        }
    }

    /// The image under `z -> s z`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        positive("scale", s)?;
        let shape = match self.shape {
            Shape::Empty => Shape::Empty,
            Shape::Disk { center, radius } => Shape::Disk {
                center: center * s,
                radius: radius * s,
            },
            Shape::Annulus { inner, outer } => Shape::Annulus {
                inner: inner * s,
                outer: outer * s,
            },
            Shape::Ellipse { a, b } => Shape::Ellipse { a: a * s, b: b * s },
            Shape::Cardioid { a, b } => Shape::Cardioid { a, b: b * s },
            Shape::Triangle { a } => Shape::Triangle { a: a * s },
            Shape::HalfDisk { a } => Shape::HalfDisk { a: a * s },
        };
        Ok(Region { shape, ..*self })
    }

    pub fn contains(&self, z: Complex64) -> bool {
        match self.shape {
            Shape::Empty => false,
            Shape::Disk { center, radius } => (z - center).norm() < radius,
            Shape::Annulus { inner, outer } => {
                let m = z.norm();
                inner < m && m < outer
            }
            Shape::Ellipse { a, b } => (z.re / a).powi(2) + (z.im / b).powi(2) < 1.0,
            Shape::Cardioid { a, b } => {
                let m = z.norm();
                m == 0.0 || m < b * (1.0 + 2.0 * a * z.arg().cos())
            }
            Shape::Triangle { a } => (0..3).all(|j| {
                let normal = Complex64::from_polar(1.0, FRAC_PI_3 + 2.0 * FRAC_PI_3 * j as f64);
                (z * normal.conj()).re < 0.5 * a
            }),
            Shape::HalfDisk { a } => z.norm() < a && z.im > 0.0,
        }
    }

    /// Largest modulus over the closure.
    pub fn max_modulus(&self) -> f64 {
        match self.shape {
            Shape::Empty => 0.0,
            Shape::Disk { center, radius } => center.norm() + radius,
            Shape::Annulus { outer, .. } => outer,
            Shape::Ellipse { a, b } => a.max(b),
            Shape::Cardioid { a, b } => b * (1.0 + 2.0 * a),
            Shape::Triangle { a } | Shape::HalfDisk { a } => a,
        }
    }

    pub fn area(&self) -> f64 {
        match self.shape {
            Shape::Empty => 0.0,
            Shape::Disk { radius, .. } => PI * radius * radius,
            Shape::Annulus { inner, outer } => PI * (outer * outer - inner * inner),
            Shape::Ellipse { a, b } => PI * a * b,
            Shape::Cardioid { a, b } => PI * b * b * (1.0 + 2.0 * a * a),
            Shape::Triangle { a } => 0.75 * 3f64.sqrt() * a * a,
            Shape::HalfDisk { a } => 0.5 * PI * a * a,
        }
    }

    /// The set `{t > 0 : t e^{iθ} ∈ region}` as an interval `(lo, hi)`.
    ///
    /// Every canonical shape meets each ray from the origin in at most one
    /// interval.
    pub fn ray(&self, theta: f64) -> Option<(f64, f64)> {
        match self.shape {
            Shape::Empty => None,
            Shape::Disk { center, radius } => {
                let p = (center * Complex64::from_polar(1.0, -theta)).re;
                let c2 = center.norm_sqr();
                let disc = p * p - c2 + radius * radius;
                if disc <= 0.0 {
                    return None;
                }
                let sq = disc.sqrt();
                let hi = p + sq;
                if hi <= 0.0 {
                    return None;
                }
                let lo = if c2 < radius * radius { 0.0 } else { (p - sq).max(0.0) };
                Some((lo, hi))
            }
            Shape::Annulus { inner, outer } => Some((inner, outer)),
            Shape::Ellipse { a, b } => {
                let (s, c) = theta.sin_cos();
                Some((0.0, a * b / (b * b * c * c + a * a * s * s).sqrt()))
            }
            Shape::Cardioid { a, b } => Some((0.0, b * (1.0 + 2.0 * a * theta.cos()))),
            Shape::Triangle { a } => {
                let t = theta.rem_euclid(TAU);
                let sector = (t / (2.0 * FRAC_PI_3)).floor().min(2.0);
                let phi = sector * 2.0 * FRAC_PI_3;
                Some((0.0, 0.5 * a / (t - phi - FRAC_PI_3).cos()))
            }
            Shape::HalfDisk { a } => {
                let t = theta.rem_euclid(TAU);
                if t > 0.0 && t < PI {
                    Some((0.0, a))
                } else {
                    None
                }
            }
        }
    }

    /// Angles in `[0, 2π]` (sorted, including both ends) between which the
    /// ray interval depends smoothly on θ.
    pub fn angular_breaks(&self) -> Vec<f64> {
        let mut pts = vec![0.0, TAU];
        match self.shape {
            Shape::Triangle { .. } => {
                pts.extend([2.0 * FRAC_PI_3, 4.0 * FRAC_PI_3]);
            }
            Shape::HalfDisk { .. } => pts.push(PI),
            Shape::Disk { center, radius } if center.norm() > radius => {
                let half = (radius / center.norm()).asin();
                let phi = center.arg();
                pts.extend([(phi - half).rem_euclid(TAU), (phi + half).rem_euclid(TAU)]);
            }
            _ => {}
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup_by(|x, y| (*x - *y).abs() < 1e-15);
        pts
    }

    /// `∫_U f(r, θ) r dr dθ` by nested adaptive quadrature in polar form.
    pub fn polar_integral<F>(&self, f: F, tol: Tol) -> Result<f64>
    where
        F: Fn(f64, f64) -> f64,
    {
        let breaks = self.angular_breaks();
        let mut inner_err = None;
        let outer = integrate_breaks(
            |theta| match self.ray(theta) {
                None => 0.0,
                Some((lo, hi)) => match crate::quad::integrate(|r| f(r, theta) * r, lo, hi, tol) {
                    Ok(v) => v.value,
                    Err(e) => {
                        inner_err.get_or_insert(e);
                        f64::NAN
                    }
                },
            },
            &breaks,
            tol,
        );
        if let Some(e) = inner_err {
            return Err(e);
        }
        Ok(outer?.value)
    }

    /// A point of the closed complement near `z`: `z` itself when it lies
    /// outside, otherwise the closest boundary point (disk, annulus,
    /// half-disk, triangle) or the radial retraction onto the boundary
    /// (ellipse, cardioid). Ties go to the larger modulus.
    pub fn project_to_complement(&self, z: Complex64) -> Complex64 {
        if !self.contains(z) {
            return z;
        }
        let w = self.boundary_point_near(z);
        // Rounding can leave the boundary point a hair inside; nudge it out.
        let dir = w - z;
        let dir = if dir.norm() > 0.0 { dir / dir.norm() } else { Complex64::new(1.0, 0.0) };
        let mut step = 1e-15 * w.norm().max(1.0);
        let mut out = w;
        while self.contains(out) {
            out = w + dir * step;
            step *= 2.0;
        }
        out
    }

    fn boundary_point_near(&self, z: Complex64) -> Complex64 {
        let unit = |w: Complex64| {
            let m = w.norm();
            if m > 0.0 {
                w / m
            } else {
                Complex64::new(1.0, 0.0)
            }
        };
        match self.shape {
            Shape::Empty => z,
            Shape::Disk { center, radius } => {
                let d = z - center;
                let dir = if d.norm() > 0.0 { unit(d) } else { unit(center) };
                center + dir * radius
            }
            Shape::Annulus { inner, outer } => {
                let m = z.norm();
                if m - inner < outer - m {
                    unit(z) * inner
                } else {
                    unit(z) * outer
                }
            }
            Shape::HalfDisk { a } => {
                if a - z.norm() <= z.im {
                    unit(z) * a
                } else {
                    Complex64::new(z.re, 0.0)
                }
            }
            Shape::Triangle { a } => {
                let (j, gap) = (0..3)
                    .map(|j| {
                        let normal = Complex64::from_polar(1.0, FRAC_PI_3 + 2.0 * FRAC_PI_3 * j as f64);
                        (j, 0.5 * a - (z * normal.conj()).re)
                    })
                    .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
                z + Complex64::from_polar(gap, FRAC_PI_3 + 2.0 * FRAC_PI_3 * j as f64)
            }
            Shape::Ellipse { .. } | Shape::Cardioid { .. } => {
                let theta = z.arg();
                let (_, hi) = self.ray(theta).expect("star-shaped about the origin");
                Complex64::from_polar(hi, theta)
            }
        }
    }
}
