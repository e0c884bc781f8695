//! Symmetric Hausdorff distance between finite 2-D point sets.

use crate::error::{Error, Result};

pub type Point = [f64; 2];

fn dist2(a: &Point, b: &Point) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    dx * dx + dy * dy
}

/// `max_{a in A} min_{b in B} |a - b|`.
///
/// The inner scan stops as soon as some `b` comes closer than the running
/// maximum, since that `a` can no longer raise it.
pub fn directed_hausdorff(a: &[Point], b: &[Point]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyInput("hausdorff point set"));
    }
    let mut cmax = 0.0f64;
    for p in a {
        let mut cmin = f64::INFINITY;
        for q in b {
            let d = dist2(p, q);
            if d < cmin {
                cmin = d;
                if cmin <= cmax {
                    break;
                }
            }
        }
        if cmin > cmax {
            cmax = cmin;
        }
    }
    Ok(cmax.sqrt())
}

pub fn hausdorff(a: &[Point], b: &[Point]) -> Result<f64> {
    Ok(directed_hausdorff(a, b)?.max(directed_hausdorff(b, a)?))
}
