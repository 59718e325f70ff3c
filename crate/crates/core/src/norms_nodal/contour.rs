//! Marching-squares zero-set extraction on a rectangular chart grid.

use crate::error::{invalid, Error, Result};

use super::MAX_SIGN_CHANGE_FRACTION;

/// Tensor grid with coordinates `a` (rows) and `b` (columns); a `Some(period)`
/// makes the corresponding direction periodic.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourGrid {
    pub a: Vec<f64>,
    pub a_period: Option<f64>,
    pub b: Vec<f64>,
    pub b_period: Option<f64>,
}

impl ContourGrid {
    pub fn new(a: Vec<f64>, a_period: Option<f64>, b: Vec<f64>, b_period: Option<f64>) -> Self {
        Self { a, a_period, b, b_period }
    }

    fn cells(n: usize, periodic: bool) -> usize {
        if periodic {
            n
        } else {
            n.saturating_sub(1)
        }
    }

    /// Coordinate of node `i + 1` as seen from node `i` (unwrapped).
    fn next(coords: &[f64], period: Option<f64>, i: usize) -> f64 {
        if i + 1 < coords.len() {
            coords[i + 1]
        } else {
            coords[0] + period.expect("wrap only on periodic axes")
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourLength {
    pub length: f64,
    pub sign_change_fraction: f64,
}

/// Total length of the zero set of the sampled function `values` (row-major,
/// `a.len() × b.len()`), measured with the diagonal chart metric `(E, G)(a)`.
/// Edge crossings are linearly interpolated; saddle cells are split by the
/// sign of the cell-centre average.
pub fn contour_length(grid: &ContourGrid, values: &[f64], metric: impl Fn(f64) -> (f64, f64)) -> Result<ContourLength> {
    let (na, nb) = (grid.a.len(), grid.b.len());
    if values.len() != na * nb || na < 2 || nb < 2 {
        return Err(invalid("contour grid and values disagree in size"));
    }
    let ca = ContourGrid::cells(na, grid.a_period.is_some());
    let cb = ContourGrid::cells(nb, grid.b_period.is_some());
    let v = |i: usize, j: usize| values[(i % na) * nb + j % nb];
    let mut length = 0.0;
    let mut changed = 0usize;
    for i in 0..ca {
        let (a0, a1) = (grid.a[i], ContourGrid::next(&grid.a, grid.a_period, i));
        for j in 0..cb {
            let (b0, b1) = (grid.b[j], ContourGrid::next(&grid.b, grid.b_period, j));
            // Corners counterclockwise from (a0, b0).
            let c = [(a0, b0, v(i, j)), (a0, b1, v(i, j + 1)), (a1, b1, v(i + 1, j + 1)), (a1, b0, v(i + 1, j))];
            let positive = c.map(|p| p.2 > 0.0);
            let mut crossings: [Option<(f64, f64)>; 4] = [None; 4];
            for e in 0..4 {
                let (p, q) = (c[e], c[(e + 1) % 4]);
                if positive[e] != positive[(e + 1) % 4] {
                    let t = p.2 / (p.2 - q.2);
                    crossings[e] = Some((p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1)));
                }
            }
            let found: Vec<usize> = (0..4).filter(|&e| crossings[e].is_some()).collect();
            if found.is_empty() {
                continue;
            }
            changed += 1;
            let seg = |e: usize, f: usize| {
                let (p, q) = (crossings[e].unwrap(), crossings[f].unwrap());
                let (ea, gb) = metric(0.5 * (p.0 + q.0));
                (ea * (q.0 - p.0).powi(2) + gb * (q.1 - p.1).powi(2)).sqrt()
            };
            length += match found.len() {
                2 => seg(found[0], found[1]),
                _ => {
                    // Edge e joins corner e to corner e+1. If the centre
                    // agrees with corner 0, corners 1 and 3 are cut off.
                    let centre = 0.25 * (c[0].2 + c[1].2 + c[2].2 + c[3].2) > 0.0;
                    if centre == positive[0] {
                        seg(0, 1) + seg(2, 3)
                    } else {
                        seg(3, 0) + seg(1, 2)
                    }
                }
            };
        }
    }
    let fraction = changed as f64 / (ca * cb) as f64;
    if fraction > MAX_SIGN_CHANGE_FRACTION {
        return Err(Error::GridTooCoarse { fraction });
    }
    Ok(ContourLength { length, sign_change_fraction: fraction })
}
