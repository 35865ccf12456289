//! Command-line flags.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// A list of reals from `lo..hi[:step]` (inclusive, default step 1), a
/// comma list, or a single value. Always nonempty and strictly increasing.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Grid(pub Vec<f64>);

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |t: &str| -> Result<f64, String> {
            let v: f64 = t.trim().parse().map_err(|_| format!("`{t}` is not a number"))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format!("`{t}` is not finite"))
            }
        };
        let values = if let Some((lo, rest)) = s.split_once("..") {
            let (hi, step) = match rest.split_once(':') {
                Some((hi, step)) => (parse(hi)?, parse(step)?),
                None => (parse(rest)?, 1.0),
            };
            let lo = parse(lo)?;
            if !(step > 0.0) {
                return Err(format!("step must be positive in `{s}`"));
            }
            if hi < lo {
                return Err(format!("empty range `{s}`"));
            }
            let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
            if count > 1_000_000 {
                return Err(format!("range `{s}` has too many points"));
            }
            (0..count).map(|i| lo + i as f64 * step).collect()
        } else {
            s.split(',').map(parse).collect::<Result<Vec<_>, _>>()?
        };
        if values.is_empty() {
            return Err("empty grid".into());
        }
        if values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(format!("grid `{s}` must be strictly increasing"));
        }
        Ok(Grid(values))
    }
}

impl Grid {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    /// The grid as nonnegative integers.
    pub fn integers(&self, name: &str) -> Result<Vec<usize>, String> {
        self.0
            .iter()
            .map(|&v| {
                if v >= 0.0 && v.fract() == 0.0 && v < 1e15 {
                    Ok(v as usize)
                } else {
                    Err(format!("{name} must be a nonnegative integer, got {v}"))
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ShapeKind {
    Empty,
    Disk,
    Annulus,
    Ellipse,
    Cardioid,
    Triangle,
    Halfdisk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Radial,
    Gram,
    Fredholm,
}

/// Complex number written `x,y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl FromStr for Point {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (x, y) = s.split_once(',').ok_or_else(|| format!("expected `x,y`, got `{s}`"))?;
        let x = x.trim().parse().map_err(|_| format!("bad x in `{s}`"))?;
        let y = y.trim().parse().map_err(|_| format!("bad y in `{s}`"))?;
        Ok(Point { x, y })
    }
}

/// Shape of the (unit-scale) hole.
#[derive(Debug, Clone, Args, Serialize)]
pub struct ShapeArgs {
    /// Hole shape [default: disk for energy and hole, empty for fekete].
    #[arg(long, value_enum)]
    pub shape: Option<ShapeKind>,
    /// Radius (disk, default 1; triangle circumradius; half-disk), semi-axis along x
    /// (ellipse), inner radius (annulus) or the cardioid parameter a.
    #[arg(long)]
    pub a: Option<f64>,
    /// Semi-axis along y (ellipse), outer radius (annulus) or cardioid scale b.
    #[arg(long)]
    pub b: Option<f64>,
    /// Annulus ratio: inner radius c, outer radius 1.
    #[arg(long)]
    pub c: Option<f64>,
    /// Centre of a disk hole, `x,y`.
    #[arg(long)]
    pub center: Option<Point>,
    /// Allow the hole to touch the boundary of the equilibrium support.
    #[arg(long)]
    pub boundary_contact: bool,
}

#[derive(Debug, Parser)]
#[command(name = "holeprob", version, about = "Hole probabilities and energies for Mittag-Leffler ensembles")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "csv")]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// Minimum energies R_∅, R_U and R_U' = R_U - R_∅ for a hole shape.
    Energy(EnergyArgs),
    /// Log hole probabilities of rU over a grid of r, with a decay fit.
    Hole(HoleArgs),
    /// Weighted Fekete points on the complement of a hole.
    Fekete(FeketeArgs),
    /// Number or linear-statistic variance for X_L on the unit disk.
    Variance(VarianceArgs),
    /// Sampled moduli R_k of one configuration.
    Sample(SampleArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EnergyArgs {
    #[command(flatten)]
    pub shape: ShapeArgs,
    /// Exponent(s) of the field |z|^α.
    #[arg(long, default_value = "2")]
    pub alpha: Grid,
    /// β-ensemble parameter(s); 2 is the determinantal case.
    #[arg(long, default_value = "2")]
    pub beta: Grid,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct HoleArgs {
    #[command(flatten)]
    pub shape: ShapeArgs,
    #[arg(long, default_value = "2")]
    pub alpha: f64,
    #[arg(long, value_enum, default_value = "radial")]
    pub method: Method,
    /// Number of points. Omitted: the infinite ensemble (radial, fredholm)
    /// or n = ⌈2 r^α⌉ per radius (gram).
    #[arg(long)]
    pub n: Option<usize>,
    /// Scale factors r of the hole.
    #[arg(long, default_value = "4..8")]
    pub r: Grid,
    /// Truncation order of the Fredholm series (1 to 4).
    #[arg(long, default_value_t = 4)]
    pub order: usize,
    /// Entrywise convergence target of the Gram angular quadrature.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FeketeArgs {
    #[command(flatten)]
    pub shape: ShapeArgs,
    /// Numbers of points.
    #[arg(long, default_value = "10,20,40")]
    pub n: Grid,
    #[arg(long, default_value = "2")]
    pub alpha: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Gradient steps per restart.
    #[arg(long, default_value_t = 20_000)]
    pub budget: usize,
    /// Random restarts.
    #[arg(long, default_value_t = 4)]
    pub replicas: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VarianceArgs {
    /// Parameter(s) L of the kernel (1 - z w̄)^{-(L+1)}.
    #[arg(long = "L", default_value = "1")]
    pub l: Grid,
    /// Radii in (0, 0.999].
    #[arg(long, default_value = "0.9,0.95,0.99")]
    pub r: Grid,
    /// Exponent(s) p of φ_p = (1 - |z|²/r²)_+^{p/2}; omitted: counting variance.
    #[arg(long)]
    pub p: Option<Grid>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SampleArgs {
    #[arg(long, default_value = "2")]
    pub alpha: f64,
    /// Number of points; omitted: the infinite ensemble truncated at --k-max.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    pub k_max: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub replica: u64,
}
