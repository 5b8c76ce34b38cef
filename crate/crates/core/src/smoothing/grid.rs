use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::variety::MultiplicityVariety;

/// Radius used by grids without an explicit extent: the evaluation domain,
/// or twice the largest modulus (at least 2) when the domain is unbounded.
pub fn default_radius(v: &MultiplicityVariety, domain: f64) -> f64 {
    if domain.is_finite() {
        domain
    } else {
        2.0 * v.points().last().map_or(1.0, |p| p.modulus()).max(1.0)
    }
}

/// Sample grid for field evaluation.
///
/// Text forms: `polar:<rings>:<sectors>[:<rmax>]` and
/// `cart:<nx>:<ny>[:<extent>]`. A missing radius is the radius of the
/// evaluation disc; a missing extent inscribes the square in that disc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GridSpec {
    /// Radii `rmax (i+1)/rings`, angles `2 pi s/sectors`.
    Polar {
        rings: usize,
        sectors: usize,
        rmax: Option<f64>,
    },
    /// Uniform nodes on `[-extent, extent]^2`, row-major in `y`.
    Cartesian {
        nx: usize,
        ny: usize,
        extent: Option<f64>,
    },
}

impl GridSpec {
    pub fn len(&self) -> usize {
        match *self {
            GridSpec::Polar { rings, sectors, .. } => rings * sectors,
            GridSpec::Cartesian { nx, ny, .. } => nx * ny,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Fills a missing radius or extent.
    pub fn resolve(self, default_radius: f64) -> Self {
        match self {
            GridSpec::Polar {
                rings,
                sectors,
                rmax,
            } => GridSpec::Polar {
                rings,
                sectors,
                rmax: Some(rmax.unwrap_or(default_radius)),
            },
            GridSpec::Cartesian { nx, ny, extent } => GridSpec::Cartesian {
                nx,
                ny,
                extent: Some(extent.unwrap_or(default_radius / 2f64.sqrt())),
            },
        }
    }

    /// Outer radius of the grid (the half-diagonal for Cartesian grids).
    pub fn reach(&self, default_radius: f64) -> f64 {
        match self.resolve(default_radius) {
            GridSpec::Polar { rmax, .. } => rmax.unwrap_or(default_radius),
            GridSpec::Cartesian { extent, .. } => extent.unwrap_or(default_radius) * 2f64.sqrt(),
        }
    }

    /// Grid spacing: the ring step for polar grids, the node step in `x`
    /// for Cartesian grids.
    pub fn spacing(&self, default_radius: f64) -> f64 {
        match self.resolve(default_radius) {
            GridSpec::Polar { rings, rmax, .. } => rmax.unwrap_or(default_radius) / rings as f64,
            GridSpec::Cartesian { nx, extent, .. } => {
                2.0 * extent.unwrap_or(default_radius) / (nx.max(2) - 1) as f64
            }
        }
    }

    pub fn points(&self, default_radius: f64) -> Vec<(f64, f64)> {
        match self.resolve(default_radius) {
            GridSpec::Polar {
                rings,
                sectors,
                rmax,
            } => {
                let rmax = rmax.unwrap_or(default_radius);
                let mut out = Vec::with_capacity(rings * sectors);
                for i in 0..rings {
                    let r = rmax * (i + 1) as f64 / rings as f64;
                    for s in 0..sectors {
                        let (sin, cos) = (2.0 * PI * s as f64 / sectors as f64).sin_cos();
                        out.push((r * cos, r * sin));
                    }
                }
                out
            }
            GridSpec::Cartesian { nx, ny, extent } => {
                let e = extent.unwrap_or(default_radius);
                let mut out = Vec::with_capacity(nx * ny);
                for j in 0..ny {
                    let y = axis(j, ny, e);
                    for i in 0..nx {
                        out.push((axis(i, nx, e), y));
                    }
                }
                out
            }
        }
    }
}

/// `i`-th of `n` uniform nodes on `[-e, e]`; a single node sits at 0.
pub(crate) fn axis(i: usize, n: usize, e: f64) -> f64 {
    if n < 2 {
        0.0
    } else {
        -e + 2.0 * e * i as f64 / (n - 1) as f64
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::invalid(format!(
                "bad grid '{s}', expected polar:R:S[:rmax] or cart:NX:NY[:extent]"
            ))
        };
        let parts: Vec<&str> = s.trim().split(':').collect();
        if parts.len() < 3 || parts.len() > 4 {
            return Err(bad());
        }
        let a: usize = parts[1].parse().map_err(|_| bad())?;
        let b: usize = parts[2].parse().map_err(|_| bad())?;
        let r: Option<f64> = match parts.get(3) {
            Some(t) => {
                let v: f64 = t.parse().map_err(|_| bad())?;
                if !(v.is_finite() && v > 0.0) {
                    return Err(bad());
                }
                Some(v)
            }
            None => None,
        };
        if a == 0 || b == 0 {
            return Err(bad());
        }
        match parts[0] {
            "polar" => Ok(GridSpec::Polar {
                rings: a,
                sectors: b,
                rmax: r,
            }),
            "cart" | "cartesian" => Ok(GridSpec::Cartesian {
                nx: a,
                ny: b,
                extent: r,
            }),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (kind, a, b, r) = match *self {
            GridSpec::Polar {
                rings,
                sectors,
                rmax,
            } => ("polar", rings, sectors, rmax),
            GridSpec::Cartesian { nx, ny, extent } => ("cart", nx, ny, extent),
        };
        write!(f, "{kind}:{a}:{b}")?;
        if let Some(r) = r {
            write!(f, ":{r}")?;
        }
        Ok(())
    }
}
