//! An independent hole counter: sample the union on a voxel grid, then
//! count the 6-connected components of the empty cells.
//!
//! Occupancy is decided exactly at cell centers, one grid row at a time:
//! along a row each facet inequality bounds the cell index from one side,
//! so a translate covers one contiguous interval of cells.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::exact_math::{format_rational, int, rat, ExactScalar, Vec3};
use crate::geometry::TranslateFamily;

/// Default cap on `nx * ny * nz`.
pub const DEFAULT_CELL_BUDGET: u64 = 200_000_000;

/// Empty layers kept around the family's bounding box.
pub const PADDING: usize = 2;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("grid of {cells} cells exceeds the budget of {budget}; use a larger cell size")]
    Budget { cells: u128, budget: u64 },
    #[error("invalid oracle input: {0}")]
    Invalid(String),
}

/// Cell-center occupancy of a family on a regular grid. Cell `(i, j, k)`
/// has center `origin + (i + 1/2, j + 1/2, k + 1/2) * h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VoxelGrid {
    pub origin: Vec3,
    pub h: ExactScalar,
    pub dims: (usize, usize, usize),
    /// One bit per cell, `x` fastest, then `y`, then `z`.
    occupancy: Vec<u64>,
}

impl VoxelGrid {
    fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (k * self.dims.1 + j) * self.dims.0 + i
    }

    pub fn cell_count(&self) -> u64 {
        (self.dims.0 * self.dims.1 * self.dims.2) as u64
    }

    pub fn is_occupied(&self, i: usize, j: usize, k: usize) -> bool {
        let idx = self.index(i, j, k);
        self.occupancy[idx / 64] >> (idx % 64) & 1 == 1
    }

    pub fn occupied_count(&self) -> u64 {
        self.occupancy.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    /// Maximal runs `[start, end)` of empty cells in row `(j, k)`.
    fn empty_runs(&self, j: usize, k: usize) -> Vec<(usize, usize)> {
        let mut runs = Vec::new();
        let mut start = None;
        for i in 0..self.dims.0 {
            match (self.is_occupied(i, j, k), start) {
                (false, None) => start = Some(i),
                (true, Some(s)) => {
                    runs.push((s, i));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            runs.push((s, self.dims.0));
        }
        runs
    }

    /// Run-length text dump. After a short header, one line per row
    /// `(j, k)` in order of increasing `k`, then `j`: alternating run lengths
    /// starting with an empty run (possibly of length 0).
    pub fn to_rle(&self) -> String {
        let mut out = String::new();
        out.push_str("# holecount occupancy v1\n");
        out.push_str(&format!("dims {} {} {}\n", self.dims.0, self.dims.1, self.dims.2));
        out.push_str(&format!(
            "origin {} {} {}\n",
            format_rational(&self.origin.x),
            format_rational(&self.origin.y),
            format_rational(&self.origin.z)
        ));
        out.push_str(&format!("h {}\n", format_rational(&self.h)));
        for k in 0..self.dims.2 {
            for j in 0..self.dims.1 {
                let mut runs = Vec::new();
                let mut current = false;
                let mut len = 0usize;
                for i in 0..self.dims.0 {
                    if self.is_occupied(i, j, k) == current {
                        len += 1;
                    } else {
                        runs.push(len.to_string());
                        current = !current;
                        len = 1;
                    }
                }
                runs.push(len.to_string());
                out.push_str(&runs.join(" "));
                out.push('\n');
            }
        }
        out
    }
}

fn ceil_int(q: &ExactScalar) -> BigInt {
    -((-q.numer()).div_floor(q.denom()))
}

/// One facet of one translate, rewritten for the grid with integer
/// coefficients: the center of cell `(i, j, k)` satisfies it iff
/// `ax * i <= r0 - ay * j - az * k`.
struct RowConstraint {
    ax: BigInt,
    ay: BigInt,
    az: BigInt,
    r0: BigInt,
}

impl RowConstraint {
    fn new(ax: ExactScalar, ay: ExactScalar, az: ExactScalar, r0: ExactScalar) -> Self {
        let d = [&ax, &ay, &az, &r0]
            .iter()
            .fold(BigInt::from(1), |acc, q| acc.lcm(q.denom()));
        let scale = |q: &ExactScalar| q.numer() * (&d / q.denom());
        Self {
            ax: scale(&ax),
            ay: scale(&ay),
            az: scale(&az),
            r0: scale(&r0),
        }
    }
}

/// Samples the union at cell centers. The grid covers the family's bounding
/// box with at least [`PADDING`] empty layers on every side.
pub fn rasterize(family: &TranslateFamily, h: &ExactScalar, budget: u64) -> Result<VoxelGrid, OracleError> {
    if !h.is_positive() {
        return Err(OracleError::Invalid("cell size must be positive".into()));
    }
    let (lo, hi) = family
        .bounding_box()
        .ok_or_else(|| OracleError::Invalid("empty family".into()))?;
    let pad = int(PADDING as i64);
    let origin = Vec3::new(&lo.x - h * &pad, &lo.y - h * &pad, &lo.z - h * &pad);
    let extent = |l: &ExactScalar, u: &ExactScalar| -> u128 {
        let cells = ceil_int(&((u - l) / h)).to_u128().unwrap_or(u128::MAX / 4);
        cells.max(1) + 2 * PADDING as u128
    };
    let (nx, ny, nz) = (extent(&lo.x, &hi.x), extent(&lo.y, &hi.y), extent(&lo.z, &hi.z));
    let cells = nx.saturating_mul(ny).saturating_mul(nz);
    if cells > u128::from(budget) {
        return Err(OracleError::Budget { cells, budget });
    }
    let (nx, ny, nz) = (nx as usize, ny as usize, nz as usize);
    let half = rat(1, 2);
    let first_center = Vec3::new(&origin.x + h * &half, &origin.y + h * &half, &origin.z + h * &half);
    let translates: Vec<Vec<RowConstraint>> = family
        .translates()
        .iter()
        .map(|t| {
            t.body()
                .facets()
                .iter()
                .map(|f| {
                    RowConstraint::new(
                        &f.normal.x * h,
                        &f.normal.y * h,
                        &f.normal.z * h,
                        &f.offset + f.normal.dot(t.offset()) - f.normal.dot(&first_center),
                    )
                })
                .collect()
        })
        .collect();

    // Occupied intervals per row, computed in parallel over z-slabs.
    let slabs: Vec<Vec<Vec<(usize, usize)>>> = (0..nz)
        .into_par_iter()
        .map(|k| {
            let kk = BigInt::from(k);
            (0..ny)
                .map(|j| {
                    let jj = BigInt::from(j);
                    let mut intervals = Vec::new();
                    'translate: for facets in &translates {
                        let mut lo_i = BigInt::zero();
                        let mut hi_i = BigInt::from(nx as i64 - 1);
                        for c in facets {
                            let r = &c.r0 - &c.ay * &jj - &c.az * &kk;
                            if c.ax.is_positive() {
                                hi_i = hi_i.min(r.div_floor(&c.ax));
                            } else if c.ax.is_negative() {
                                lo_i = lo_i.max(r.div_ceil(&c.ax));
                            } else if r.is_negative() {
                                continue 'translate;
                            }
                            if lo_i > hi_i {
                                continue 'translate;
                            }
                        }
                        let a = lo_i.to_usize().expect("inside the grid");
                        let b = hi_i.to_usize().expect("inside the grid");
                        intervals.push((a, b + 1));
                    }
                    intervals
                })
                .collect()
        })
        .collect();

    let total = nx * ny * nz;
    let mut occupancy = vec![0u64; total.div_ceil(64)];
    for (k, rows) in slabs.into_iter().enumerate() {
        for (j, intervals) in rows.into_iter().enumerate() {
            let base = (k * ny + j) * nx;
            for (a, b) in intervals {
                for idx in base + a..base + b {
                    occupancy[idx / 64] |= 1 << (idx % 64);
                }
            }
        }
    }
    Ok(VoxelGrid {
        origin,
        h: h.clone(),
        dims: (nx, ny, nz),
        occupancy,
    })
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        parent[hi] = lo;
    }
}

/// Number of 6-connected components of empty cells, the outer one included.
pub fn count_complement_components(grid: &VoxelGrid) -> u64 {
    let (_, ny, nz) = grid.dims;
    // Runs of each row, numbered consecutively; `row_start[r]` is the id of
    // the first run of row `r = k * ny + j`.
    let mut runs: Vec<Vec<(usize, usize)>> = Vec::with_capacity(ny * nz);
    let mut row_start = Vec::with_capacity(ny * nz + 1);
    let mut next = 0;
    for k in 0..nz {
        for j in 0..ny {
            let r = grid.empty_runs(j, k);
            row_start.push(next);
            next += r.len();
            runs.push(r);
        }
    }
    let mut parent: Vec<usize> = (0..next).collect();
    let link = |parent: &mut Vec<usize>, a_row: usize, b_row: usize| {
        let (ra, rb) = (&runs[a_row], &runs[b_row]);
        let (mut x, mut y) = (0, 0);
        while x < ra.len() && y < rb.len() {
            let (s1, e1) = ra[x];
            let (s2, e2) = rb[y];
            if s1 < e2 && s2 < e1 {
                union(parent, row_start[a_row] + x, row_start[b_row] + y);
            }
            if e1 <= e2 {
                x += 1;
            } else {
                y += 1;
            }
        }
    };
    for k in 0..nz {
        for j in 0..ny {
            let row = k * ny + j;
            if j + 1 < ny {
                link(&mut parent, row, row + 1);
            }
            if k + 1 < nz {
                link(&mut parent, row, row + ny);
            }
        }
    }
    (0..next).filter(|&x| find(&mut parent, x) == x).count() as u64
}

/// Counts at `h` and `h/2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub h: String,
    pub dims: (usize, usize, usize),
    pub count: u64,
    pub refined_h: String,
    pub refined_dims: (usize, usize, usize),
    pub refined_count: u64,
    /// Both resolutions agree.
    pub stable: bool,
}

pub fn oracle_hole_count(family: &TranslateFamily, h: &ExactScalar, budget: u64) -> Result<OracleReport, OracleError> {
    let coarse = rasterize(family, h, budget)?;
    let count = count_complement_components(&coarse);
    let dims = coarse.dims;
    drop(coarse);
    let h2 = h * rat(1, 2);
    let fine = rasterize(family, &h2, budget)?;
    let refined_count = count_complement_components(&fine);
    Ok(OracleReport {
        h: format_rational(h),
        dims,
        count,
        refined_h: format_rational(&h2),
        refined_dims: fine.dims,
        refined_count,
        stable: count == refined_count,
    })
}

/// A quarter of the thinnest feature the construction introduces.
pub fn default_resolution(feature: &ExactScalar) -> ExactScalar {
    feature * rat(1, 4)
}

/// Number of cells [`rasterize`] would allocate for `h`.
pub fn grid_cells(family: &TranslateFamily, h: &ExactScalar) -> Option<u128> {
    let (lo, hi) = family.bounding_box()?;
    let axis = |l: &ExactScalar, u: &ExactScalar| {
        ceil_int(&((u - l) / h)).to_u128().unwrap_or(u128::MAX / 4).max(1) + 2 * PADDING as u128
    };
    Some(
        axis(&lo.x, &hi.x)
            .saturating_mul(axis(&lo.y, &hi.y))
            .saturating_mul(axis(&lo.z, &hi.z)),
    )
}

/// `preferred`, or the finest of `preferred * (20 + k) / 20` for
/// `k = 1..=max_steps` whose refined grid (cell size `h/2`, as used by
/// [`oracle_hole_count`]) fits in `budget`. Returns the coarsest candidate
/// if none fits.
pub fn fit_resolution(family: &TranslateFamily, preferred: &ExactScalar, budget: u64, max_steps: usize) -> ExactScalar {
    let fits = |h: &ExactScalar| {
        grid_cells(family, &(h * rat(1, 2))).is_none_or(|cells| cells <= u128::from(budget))
    };
    let mut h = preferred.clone();
    for k in 1..=max_steps {
        if fits(&h) {
            break;
        }
        h = preferred * rat(20 + k as i64, 20);
    }
    h
}
