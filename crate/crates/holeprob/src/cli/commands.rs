//! The subcommands, each producing one table.

use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::args::{EnergyArgs, FeketeArgs, HoleArgs, Method, SampleArgs, ShapeArgs, ShapeKind, VarianceArgs};
use super::output::{Cell, Table};
use super::CliError;
use crate::error::Error;
use crate::fekete::{optimize_fekete_with, COLLISION_FLOOR};
use crate::fit::{fit_decay, MIN_FIT_POINTS};
use crate::fluctuations as fl;
use crate::gram::{fredholm_hole_oracle, hole_prob_gram, GramQuad, GramSpec};
use crate::potential::{
    decay_constant, r_empty, r_hole_beta, r_hole_closed_form, r_hole_numeric, BalayageCandidate, RadialField,
};
use crate::radial::{hole_prob_annulus, hole_prob_disk, sample_radius, EnsembleSpec, Size};
use crate::region::{Region, Shape};

/// A table together with the tolerances it was computed under.
pub struct Report {
    pub table: Table,
    pub tolerances: Value,
    /// Set when some row was written but missed its stopping criterion.
    pub incomplete: Option<String>,
}

fn need(v: Option<f64>, flag: &str, shape: &str) -> Result<f64, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("--shape {shape} needs --{flag}")))
}

/// The unit-scale hole described by the shape flags.
pub fn build_region(s: &ShapeArgs, default: ShapeKind) -> Result<Region, CliError> {
    let kind = s.shape.unwrap_or(default);
    let region = match kind {
        ShapeKind::Empty => Region::empty(),
        ShapeKind::Disk => {
            let c = s.center.map_or(Complex64::new(0.0, 0.0), |p| Complex64::new(p.x, p.y));
            Region::disk_at(c, s.a.unwrap_or(1.0))?
        }
        ShapeKind::Annulus => match s.c {
            Some(c) => Region::annulus(c, 1.0)?,
            None => Region::annulus(need(s.a, "a", "annulus")?, need(s.b, "b", "annulus")?)?,
        },
        ShapeKind::Ellipse => Region::ellipse(need(s.a, "a", "ellipse")?, need(s.b, "b", "ellipse")?)?,
        ShapeKind::Cardioid => Region::cardioid(need(s.a, "a", "cardioid")?, need(s.b, "b", "cardioid")?)?,
        ShapeKind::Triangle => Region::triangle(need(s.a, "a", "triangle")?)?,
        ShapeKind::Halfdisk => Region::half_disk(need(s.a, "a", "halfdisk")?)?,
    };
    if s.center.is_some() && kind != ShapeKind::Disk {
        return Err(CliError::Usage("--center applies to --shape disk only".into()));
    }
    Ok(region.with_boundary_contact(s.boundary_contact))
}

fn shape_cells(s: &ShapeArgs, kind: ShapeKind) -> [Cell; 3] {
    let name = format!("{kind:?}").to_lowercase();
    let (a, b) = match (kind, s.c) {
        (ShapeKind::Annulus, Some(c)) => (Some(c), Some(1.0)),
        _ => (s.a, s.b),
    };
    [Cell::S(name), a.into(), b.into()]
}

/// `energy`: columns `shape, a, b, alpha, beta, r_empty, r_hole,
/// r_prime_closed, r_prime_numeric, difference, method, decay`.
pub fn energy(args: &EnergyArgs) -> Result<Report, CliError> {
    let region = build_region(&args.shape, ShapeKind::Disk)?;
    let mut table = Table::new(&[
        "shape",
        "a",
        "b",
        "alpha",
        "beta",
        "r_empty",
        "r_hole",
        "r_prime_closed",
        "r_prime_numeric",
        "difference",
        "method",
        "decay",
    ]);
    for &alpha in args.alpha.values() {
        for &beta in args.beta.values() {
            let base = RadialField::power(alpha)?;
            let c = 2.0 / beta;
            let field = base.scaled(c)?;
            let r_e = r_empty(&field)?;
            let numeric = if beta == 2.0 {
                optional(r_hole_numeric(&region, alpha))?
            } else {
                match BalayageCandidate::for_region(&region, &field) {
                    Ok(_) => optional(r_hole_beta(&region, alpha, beta))?.map(|b| (b.difference, "balayage")),
                    Err(Error::Unsupported(_)) => None,
                    Err(e) => return Err(e.into()),
                }
            };
            // c|z|^α is |z|^α seen through z -> c^{1/α} z.
            let closed = match r_hole_closed_form(&region.scaled(c.powf(1.0 / alpha))?, alpha) {
                Ok(v) => Some(v),
                // A shape outside the support is an error whatever the route.
                Err(Error::Unsupported(m)) if numeric.is_some() && !m.contains("support") => None,
                Err(e) => return Err(e.into()),
            };
            let r_prime = closed.or(numeric.map(|n| n.0)).expect("one route succeeded");
            let mut row: Vec<Cell> = shape_cells(&args.shape, args.shape.shape.unwrap_or(ShapeKind::Disk)).into();
            row.extend([
                alpha.into(),
                beta.into(),
                r_e.into(),
                (r_e + r_prime).into(),
                closed.into(),
                numeric.map(|n| n.0).into(),
                closed.zip(numeric).map(|(c, n)| c - n.0).into(),
                numeric.map_or("closed-form", |n| n.1).into(),
                (0.0 - 0.5 * beta * r_prime).into(),
            ]);
            table.push(row);
        }
    }
    Ok(Report {
        table,
        tolerances: json!({ "quadrature_rel": 1e-10 }),
        incomplete: None,
    })
}

/// `Ok(None)` for an unsupported route, other errors pass through.
fn optional<T>(r: crate::Result<T>) -> Result<Option<T>, CliError> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::Unsupported(_)) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

struct HoleRow {
    r: f64,
    n: Option<usize>,
    log_p: f64,
    lower: Option<f64>,
    upper: Option<f64>,
}

fn hole_row(args: &HoleArgs, region: &Region, r: f64) -> Result<HoleRow, CliError> {
    let alpha = args.alpha;
    let size = args.n.map_or(Size::Infinite, Size::Finite);
    let scaled = region.scaled(r)?;
    let mut row = HoleRow {
        r,
        n: args.n,
        log_p: 0.0,
        lower: None,
        upper: None,
    };
    match args.method {
        Method::Radial => {
            let spec = EnsembleSpec::new(alpha, size)?;
            row.log_p = match scaled.shape {
                Shape::Empty => 0.0,
                Shape::Disk { center, radius } if center.norm() == 0.0 => hole_prob_disk(spec, radius)?.log_prob,
                Shape::Annulus { inner, outer } => hole_prob_annulus(spec, inner, outer)?.log_prob,
                _ => {
                    return Err(CliError::Mismatch(format!(
                        "method radial needs a centred disk or an annulus, got {}",
                        region.kind()
                    )))
                }
            };
        }
        Method::Gram => {
            let n = args.n.unwrap_or_else(|| (2.0 * r.powf(alpha)).ceil().max(1.0) as usize);
            let quad = GramQuad {
                tol: args.tol,
                ..GramQuad::default()
            };
            row.n = Some(n);
            row.log_p = hole_prob_gram(&GramSpec::new(n, alpha, scaled)?.with_quad(quad))?;
        }
        Method::Fredholm => {
            let b = fredholm_hole_oracle(&scaled, alpha, size, args.order)?;
            row.log_p = b.log_estimate;
            row.lower = Some(b.lower);
            row.upper = Some(b.upper);
        }
    }
    Ok(row)
}

/// `hole`: columns `kind, r, n, log_p, normalized, p_lower, p_upper, slope,
/// analytic_decay, residual_rms`. Data rows have kind `row`; the footer
/// (kind `fit`) carries the fitted slope when the grid has enough points.
pub fn hole(args: &HoleArgs) -> Result<Report, CliError> {
    if !(args.tol > 0.0) {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    let region = build_region(&args.shape, ShapeKind::Disk)?;
    let rows: Vec<HoleRow> = args
        .r
        .values()
        .par_iter()
        .map(|&r| hole_row(args, &region, r))
        .collect::<Result<_, _>>()?;
    let mut table = Table::new(&[
        "kind",
        "r",
        "n",
        "log_p",
        "normalized",
        "p_lower",
        "p_upper",
        "slope",
        "analytic_decay",
        "residual_rms",
    ]);
    for row in &rows {
        table.push(vec![
            "row".into(),
            row.r.into(),
            row.n.map_or(Cell::Empty, Cell::from),
            row.log_p.into(),
            (row.log_p / row.r.powf(2.0 * args.alpha)).into(),
            row.lower.into(),
            row.upper.into(),
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
        ]);
    }
    let logs: Vec<f64> = rows.iter().map(|r| r.log_p).collect();
    let fit = if logs.len() >= MIN_FIT_POINTS && logs.iter().all(|v| v.is_finite()) {
        Some(fit_decay(args.r.values(), &logs, args.alpha)?)
    } else {
        None
    };
    let analytic = optional(decay_constant(&region, args.alpha))?;
    table.footer = Some(vec![
        "fit".into(),
        Cell::Empty,
        Cell::Empty,
        Cell::Empty,
        Cell::Empty,
        Cell::Empty,
        Cell::Empty,
        fit.map(|f| f.slope).into(),
        analytic.into(),
        fit.map(|f| f.residual_rms).into(),
    ]);
    let tolerances = match args.method {
        Method::Radial => json!({ "tail_bound": 1e-12 }),
        Method::Gram => json!({ "angular_entry_change": args.tol }),
        Method::Fredholm => json!({ "order": args.order, "partial_sum_change": 1e-13 }),
    };
    Ok(Report {
        table,
        tolerances,
        incomplete: None,
    })
}

/// `fekete`: columns `n, energy, delta_n, min_separation, iterations,
/// budget_exhausted, replica, target`, where `target` is the limit
/// `R_∅ + R_U'` of the energy.
pub fn fekete(args: &FeketeArgs) -> Result<Report, CliError> {
    let region = build_region(&args.shape, ShapeKind::Empty)?;
    let field = RadialField::power(args.alpha)?;
    let target = optional(decay_constant(&region, args.alpha))?.map(|d| r_empty(&field).map(|e| e - d));
    let target = target.transpose()?;
    let ns = args.n.integers("--n").map_err(CliError::Usage)?;
    let mut table = Table::new(&[
        "n",
        "energy",
        "delta_n",
        "min_separation",
        "iterations",
        "budget_exhausted",
        "replica",
        "target",
    ]);
    let mut incomplete = None;
    for n in ns {
        let res = optimize_fekete_with(n, &field, &region, args.seed, args.budget, args.replicas)?;
        if res.budget_exhausted {
            incomplete = Some(format!("fekete optimisation for n = {n} stopped on the step budget"));
        }
        table.push(vec![
            n.into(),
            res.energy.into(),
            res.delta_n.into(),
            res.min_separation.into(),
            res.iterations.into(),
            res.budget_exhausted.into(),
            res.replica.into(),
            target.into(),
        ]);
    }
    Ok(Report {
        table,
        incomplete,
        tolerances: json!({ "relative_gain": 1e-13, "collision_floor": COLLISION_FLOOR }),
    })
}

/// `variance`: columns `statistic, L, r, p, variance, normalized, mean,
/// norm_lower, norm_upper, var_lower, var_upper`. The `norm_*` bounds apply
/// to the normalized variance, the `var_*` bounds to the raw one.
pub fn variance(args: &VarianceArgs) -> Result<Report, CliError> {
    let mut table = Table::new(&[
        "statistic",
        "L",
        "r",
        "p",
        "variance",
        "normalized",
        "mean",
        "norm_lower",
        "norm_upper",
        "var_lower",
        "var_upper",
    ]);
    let mut jobs = Vec::new();
    for &l in args.l.values() {
        for &r in args.r.values() {
            match &args.p {
                None => jobs.push((l, r, None)),
                Some(ps) => jobs.extend(ps.values().iter().map(|&p| (l, r, Some(p)))),
            }
        }
    }
    let rows: Vec<Vec<Cell>> = jobs
        .par_iter()
        .map(|&(l, r, p)| -> crate::Result<Vec<Cell>> {
            Ok(match p {
                None => {
                    let v = fl::variance_count(l, r)?;
                    let (lo, hi) = fl::count_window(l);
                    vec![
                        "count".into(),
                        l.into(),
                        r.into(),
                        Cell::Empty,
                        v.value.into(),
                        v.normalized().into(),
                        fl::mean_count(l, r)?.into(),
                        lo.into(),
                        hi.into(),
                        fl::count_lower_bound(l, r).into(),
                        fl::count_upper_bound(l, r)?.into(),
                    ]
                }
                Some(p) => {
                    let v = fl::variance_linear(l, r, p)?;
                    let lower = (p < 1.0).then(|| fl::linear_lower_bound_normalized(l, r));
                    vec![
                        "linear".into(),
                        l.into(),
                        r.into(),
                        p.into(),
                        v.value.into(),
                        v.normalized().into(),
                        Cell::Empty,
                        lower.into(),
                        Cell::Empty,
                        Cell::Empty,
                        fl::linear_upper_bound(l, r, p).into(),
                    ]
                }
            })
        })
        .collect::<crate::Result<_>>()?;
    for row in rows {
        table.push(row);
    }
    Ok(Report {
        table,
        tolerances: json!({ "quadrature_rel": 1e-10, "r_max": fl::R_MAX }),
        incomplete: None,
    })
}

/// `sample`: columns `k, radius, gamma_shape`, in index order.
pub fn sample(args: &SampleArgs) -> Result<Report, CliError> {
    let size = args.n.map_or(Size::Infinite, Size::Finite);
    let spec = EnsembleSpec::new(args.alpha, size)?;
    let count = args.n.unwrap_or(args.k_max);
    let mut table = Table::new(&["k", "radius", "gamma_shape"]);
    for k in 1..=count {
        table.push(vec![
            k.into(),
            sample_radius(spec, k, args.seed, args.replica)?.into(),
            spec.gamma_shape(k).into(),
        ]);
    }
    Ok(Report {
        table,
        tolerances: json!({}),
        incomplete: None,
    })
}
