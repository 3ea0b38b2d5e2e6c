//! Positions for a new point: given a strong realization of `g` on `n - 1`
//! points, in how many ways can the removed point of `f` be placed so that
//! every full line of `f` lands on a line of the plane?

use crate::error::{Error, Result};
use crate::incidence::{remove_point, LinearSpaceFunction, PointSet};
use crate::symbolic::QPoly;

/// The full lines of `f` through the removed point, with that point deleted
/// and the remaining points relabeled as in [`LinearSpaceFunction::restrict`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Removal {
    Free,
    OnLine(PointSet),
    Between(PointSet, PointSet),
}

impl Removal {
    pub fn of(f: &LinearSpaceFunction, p: usize) -> Result<Self> {
        if p >= f.n() {
            return Err(Error::OutOfRange(format!("point {p} not in 0..{}", f.n())));
        }
        let through: Vec<PointSet> =
            f.lines().iter().filter(|&&l| l >> p & 1 == 1).map(|&l| remove_point(l, p)).collect();
        match through[..] {
            [] => Ok(Removal::Free),
            [l] => Ok(Removal::OnLine(l)),
            [a, b] => Ok(Removal::Between(a, b)),
            _ => Err(Error::Precondition(format!("point {p} lies on {} full lines; at most 2 allowed", through.len()))),
        }
    }
}

/// The smallest collinear set of `g` containing `s`: its full line, or `s`
/// itself when `s` is a pair on no full line.
#[inline]
fn span(g_lines: &[PointSet], s: PointSet) -> PointSet {
    g_lines.iter().copied().find(|&l| l & s == s).unwrap_or(s)
}

/// `μ(g, f)` as `[c0, c1, c2]` meaning `c0 + c1·q + c2·q²`; `f` has `n` points.
#[inline]
pub(crate) fn mu_coeffs(g_lines: &[PointSet], n: usize, r: Removal) -> [i64; 3] {
    match r {
        Removal::Free => [2 - n as i64, 1, 1],
        Removal::OnLine(s) => [1 - span(g_lines, s).count_ones() as i64, 1, 0],
        Removal::Between(s1, s2) => {
            let (a, b) = (span(g_lines, s1), span(g_lines, s2));
            if a == b {
                [1 - a.count_ones() as i64, 1, 0]
            } else if a & b != 0 {
                [0, 0, 0]
            } else {
                [1, 0, 0]
            }
        }
    }
}

/// The number of positions for `removed` in a plane containing a strong
/// realization of `g`, where `g >= restrict(f, removed)`.
pub fn mu(g: &LinearSpaceFunction, f: &LinearSpaceFunction, removed: usize) -> Result<QPoly> {
    if g.n() + 1 != f.n() {
        return Err(Error::PointCountMismatch(g.n() + 1, f.n()));
    }
    let r = Removal::of(f, removed)?;
    if !g.is_geq(&f.restrict(removed)?)? {
        return Err(Error::Precondition(format!("[{g}] is not above the restriction of [{f}]")));
    }
    Ok(QPoly::from_i64s(&mu_coeffs(g.lines(), f.n(), r)))
}

/// Default removal point: smallest index, ties broken by smallest label.
pub fn removal_point(f: &LinearSpaceFunction) -> Option<usize> {
    let idx = f.indices();
    (0..f.n()).filter(|&p| idx[p] <= 2).min_by_key(|&p| (idx[p], p))
}

/// Points allowed as removal points (index at most 2).
pub fn removable_points(f: &LinearSpaceFunction) -> Vec<usize> {
    let idx = f.indices();
    (0..f.n()).filter(|&p| idx[p] <= 2).collect()
}
