//! Dirichlet problem for the Laplace equation on `[-1, 1]^2` with the
//! 5-point stencil, solved through the linear-system classifier.

use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::linsys::{classify_linear_system, SolutionKind};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ComplexVector, C64};
use crate::qgs::{CostLedger, RunConfig};
use crate::qipe::IpeConfig;

pub const DEFAULT_GRID: usize = 17;
pub const MIN_GRID: usize = 5;
/// Distance below which a point counts as sitting on a charge.
const SINGULAR_RADIUS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChargeCase {
    Monopole,
    Dipole,
    Quadrupole,
}

impl ChargeCase {
    pub const ALL: [ChargeCase; 3] = [ChargeCase::Monopole, ChargeCase::Dipole, ChargeCase::Quadrupole];

    /// Point charges `(x, y, q)`.
    pub fn charges(self) -> &'static [(f64, f64, f64)] {
        match self {
            ChargeCase::Monopole => &[(2.0, 0.0, 1.0)],
            ChargeCase::Dipole => &[(2.0, 0.0, 1.0), (-2.0, 0.0, -1.0)],
            ChargeCase::Quadrupole => &[
                (2.0, 0.0, 1.0),
                (0.0, 2.0, 1.0),
                (-2.0, 0.0, -1.0),
                (0.0, -2.0, -1.0),
            ],
        }
    }
}

impl fmt::Display for ChargeCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChargeCase::Monopole => "monopole",
            ChargeCase::Dipole => "dipole",
            ChargeCase::Quadrupole => "quadrupole",
        })
    }
}

impl std::str::FromStr for ChargeCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "monopole" => Ok(ChargeCase::Monopole),
            "dipole" => Ok(ChargeCase::Dipole),
            "quadrupole" => Ok(ChargeCase::Quadrupole),
            other => Err(Error::param(
                "case",
                format!("expected monopole|dipole|quadrupole, got {other}"),
            )),
        }
    }
}

/// `Σ q / r` over the charges of `case`.
pub fn exact_potential(case: ChargeCase, x: f64, y: f64) -> Result<f64> {
    let mut phi = 0.0;
    for &(cx, cy, q) in case.charges() {
        let r = (x - cx).hypot(y - cy);
        if r < SINGULAR_RADIUS {
            return Err(Error::Singularity { x, y });
        }
        phi += q / r;
    }
    Ok(phi)
}

pub fn grid_coordinate(g: usize, i: usize) -> f64 {
    -1.0 + 2.0 * i as f64 / (g - 1) as f64
}

/// Potential sampled on a `G x G` grid, row-major with `y` as the row.
#[derive(Debug, Clone)]
pub struct PotentialGrid {
    pub case: Option<ChargeCase>,
    pub grid_size: usize,
    pub values: Vec<f64>,
    /// Reference solution at the same nodes.
    pub exact: Vec<f64>,
    pub ledger: CostLedger,
}

#[derive(Debug, Serialize)]
struct CsvRow {
    x: f64,
    y: f64,
    value: f64,
    exact: f64,
    abs_error: f64,
}

impl PotentialGrid {
    pub fn index(&self, ix: usize, iy: usize) -> usize {
        iy * self.grid_size + ix
    }

    pub fn value(&self, ix: usize, iy: usize) -> f64 {
        self.values[self.index(ix, iy)]
    }

    pub fn is_boundary(&self, ix: usize, iy: usize) -> bool {
        let last = self.grid_size - 1;
        ix == 0 || iy == 0 || ix == last || iy == last
    }

    fn interior(&self) -> impl Iterator<Item = usize> + '_ {
        let g = self.grid_size;
        (1..g - 1).flat_map(move |iy| (1..g - 1).map(move |ix| iy * g + ix))
    }

    /// Relative L2 error against `exact` over interior nodes.
    pub fn relative_error(&self) -> f64 {
        let (mut num, mut den) = (0.0, 0.0);
        for i in self.interior() {
            num += (self.values[i] - self.exact[i]).powi(2);
            den += self.exact[i].powi(2);
        }
        if den == 0.0 {
            num.sqrt()
        } else {
            (num / den).sqrt()
        }
    }

    pub fn max_interior_error(&self) -> f64 {
        self.interior()
            .map(|i| (self.values[i] - self.exact[i]).abs())
            .fold(0.0, f64::max)
    }

    /// `(min, max)` over boundary nodes.
    pub fn boundary_range(&self) -> (f64, f64) {
        let g = self.grid_size;
        let mut range = (f64::INFINITY, f64::NEG_INFINITY);
        for iy in 0..g {
            for ix in 0..g {
                if self.is_boundary(ix, iy) {
                    let v = self.value(ix, iy);
                    range = (range.0.min(v), range.1.max(v));
                }
            }
        }
        range
    }

    /// CSV with columns `x, y, value, exact, abs_error`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        let g = self.grid_size;
        for iy in 0..g {
            for ix in 0..g {
                let i = self.index(ix, iy);
                out.serialize(CsvRow {
                    x: grid_coordinate(g, ix),
                    y: grid_coordinate(g, iy),
                    value: self.values[i],
                    exact: self.exact[i],
                    abs_error: (self.values[i] - self.exact[i]).abs(),
                })?;
            }
        }
        out.flush()?;
        Ok(())
    }
}

/// Solve the discrete Laplace equation with Dirichlet data taken from
/// `reference` on the boundary. `reference` is also stored as the exact
/// solution for error reporting.
pub fn solve_dirichlet<F>(g: usize, reference: F, cfg: &RunConfig, ipe: &IpeConfig) -> Result<PotentialGrid>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    if g < MIN_GRID {
        return Err(Error::param("grid", format!("must be at least {MIN_GRID}, got {g}")));
    }
    let mut exact = Vec::with_capacity(g * g);
    for iy in 0..g {
        for ix in 0..g {
            exact.push(reference(grid_coordinate(g, ix), grid_coordinate(g, iy))?);
        }
    }
    let inner = g - 2;
    let unknown = |ix: usize, iy: usize| (iy - 1) * inner + (ix - 1);
    let n = inner * inner;
    let mut a = ComplexMatrix::zeros(n, n);
    let mut b = ComplexVector::zeros(n);
    for iy in 1..g - 1 {
        for ix in 1..g - 1 {
            let row = unknown(ix, iy);
            a[(row, row)] = C64::new(4.0, 0.0);
            for (jx, jy) in [(ix - 1, iy), (ix + 1, iy), (ix, iy - 1), (ix, iy + 1)] {
                if jx == 0 || jy == 0 || jx == g - 1 || jy == g - 1 {
                    b[row] += C64::new(exact[jy * g + jx], 0.0);
                } else {
                    a[(row, unknown(jx, jy))] = C64::new(-1.0, 0.0);
                }
            }
        }
    }

    let out = classify_linear_system(&a, &b, cfg, ipe)?;
    let SolutionKind::Unique(x) = out.kind else {
        return Err(Error::NoUniqueSolution);
    };
    let mut values = exact.clone();
    for iy in 1..g - 1 {
        for ix in 1..g - 1 {
            values[iy * g + ix] = x[unknown(ix, iy)].re;
        }
    }
    Ok(PotentialGrid {
        case: None,
        grid_size: g,
        values,
        exact,
        ledger: out.ledger,
    })
}

pub fn laplace_dirichlet_solve(
    case: ChargeCase,
    g: usize,
    cfg: &RunConfig,
    ipe: &IpeConfig,
) -> Result<PotentialGrid> {
    let mut grid = solve_dirichlet(g, |x, y| exact_potential(case, x, y), cfg, ipe)?;
    grid.case = Some(case);
    Ok(grid)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldSample {
    pub x: f64,
    pub y: f64,
    pub ex: f64,
    pub ey: f64,
}

/// `E = -∇φ` by central differences at every interior node.
pub fn electric_field(grid: &PotentialGrid) -> Result<Vec<FieldSample>> {
    let g = grid.grid_size;
    if g < 3 || grid.values.len() != g * g {
        return Err(Error::param("grid", "need at least 3 points per axis"));
    }
    let two_h = 4.0 / (g - 1) as f64;
    let mut out = Vec::with_capacity((g - 2) * (g - 2));
    for iy in 1..g - 1 {
        for ix in 1..g - 1 {
            out.push(FieldSample {
                x: grid_coordinate(g, ix),
                y: grid_coordinate(g, iy),
                ex: -(grid.value(ix + 1, iy) - grid.value(ix - 1, iy)) / two_h,
                ey: -(grid.value(ix, iy + 1) - grid.value(ix, iy - 1)) / two_h,
            });
        }
    }
    Ok(out)
}
