//! Labeled linear spaces on a small point set.
//!
//! A linear space on the points `0..n` is stored by its full lines only:
//! every pair of points is implicitly collinear, and a set of three or more
//! points is collinear exactly when it sits inside one of the full lines.
//! Because two full lines share at most one point, the representation is
//! closed by construction and structural equality is equality of spaces.

mod canon;
mod catalogue;
mod enumerate;
mod triples;

use std::collections::{HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

pub use canon::{canonical_form, canonicalize, dual, ClassId, ClassTable, ClassTags, IsoClass};
pub(crate) use canon::{canonical_lines, factorial};
pub use catalogue::{parse_catalogue, write_catalogue, CatalogueEntry};
pub use enumerate::{
    enumerate_classes, extensions, labeled_universe, next_level, ClassFilter, ClassLevels, MAX_ENUMERATION_POINTS,
};
pub use triples::TripleMask;

/// Bit set of points; bit `i` is point `i`.
pub type PointSet = u16;

/// Largest point count a [`LinearSpaceFunction`] can hold.
pub const MAX_POINTS: usize = 16;

#[inline]
pub(crate) fn popcount(s: PointSet) -> u32 {
    s.count_ones()
}

/// Iterate over the points of a set in increasing order.
#[inline]
pub fn points_of(mut s: PointSet) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if s == 0 {
            None
        } else {
            let p = s.trailing_zeros() as usize;
            s &= s - 1;
            Some(p)
        }
    })
}

/// Drop bit `p` and shift every higher bit down by one.
#[inline]
pub(crate) fn remove_point(s: PointSet, p: usize) -> PointSet {
    let low = s & ((1u16 << p) - 1);
    let high = (s as u32 >> (p + 1)) << p;
    low | high as PointSet
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearSpaceFunction {
    n: usize,
    lines: Vec<PointSet>,
}

impl LinearSpaceFunction {
    /// Build from full lines, checking every invariant.
    pub fn new(n: usize, lines: Vec<PointSet>) -> Result<Self> {
        if n > MAX_POINTS {
            return Err(Error::OutOfRange(format!("{n} points exceeds the maximum of {MAX_POINTS}")));
        }
        let all = full_mask(n);
        for &l in &lines {
            if l & !all != 0 {
                return Err(Error::InvalidSpace(format!("line {} uses a point outside 0..{n}", fmt_set(l))));
            }
            if popcount(l) < 3 {
                return Err(Error::InvalidSpace(format!("line {} has fewer than 3 points", fmt_set(l))));
            }
        }
        for (i, &a) in lines.iter().enumerate() {
            for &b in &lines[i + 1..] {
                if popcount(a & b) >= 2 {
                    return Err(Error::InvalidSpace(format!(
                        "lines {} and {} share more than one point",
                        fmt_set(a),
                        fmt_set(b)
                    )));
                }
            }
        }
        let mut lines = lines;
        lines.sort_unstable();
        Ok(LinearSpaceFunction { n, lines })
    }

    /// Caller guarantees the invariants; lines are sorted here.
    pub(crate) fn from_lines_unchecked(n: usize, mut lines: Vec<PointSet>) -> Self {
        lines.sort_unstable();
        debug_assert!(lines.iter().all(|&l| popcount(l) >= 3));
        LinearSpaceFunction { n, lines }
    }

    /// The arc function: no three points collinear.
    pub fn arc(n: usize) -> Self {
        assert!(n <= MAX_POINTS);
        LinearSpaceFunction { n, lines: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lines(&self) -> &[PointSet] {
        &self.lines
    }

    pub fn num_lines(&self) -> usize {
        self.lines.len()
    }

    pub fn is_arc(&self) -> bool {
        self.lines.is_empty()
    }

    /// Value of the boolean function on `s`.
    pub fn is_collinear(&self, s: PointSet) -> bool {
        popcount(s) <= 2 || self.lines.iter().any(|&l| l & s == s)
    }

    /// The full line containing `s`, if any.
    pub fn line_containing(&self, s: PointSet) -> Option<PointSet> {
        self.lines.iter().copied().find(|&l| l & s == s)
    }

    /// Number of full lines through `p`.
    pub fn point_index(&self, p: usize) -> usize {
        self.lines.iter().filter(|&&l| l >> p & 1 == 1).count()
    }

    pub fn indices(&self) -> Vec<usize> {
        let mut idx = vec![0; self.n];
        for &l in &self.lines {
            for p in points_of(l) {
                idx[p] += 1;
            }
        }
        idx
    }

    /// Every point lies on at least three full lines.
    pub fn is_superfiguration(&self) -> bool {
        self.n > 0 && self.indices().iter().all(|&i| i >= 3)
    }

    /// `n` lines of size 3 with every point on exactly three of them.
    pub fn is_configuration(&self) -> bool {
        self.n > 0
            && self.lines.len() == self.n
            && self.lines.iter().all(|&l| popcount(l) == 3)
            && self.indices().iter().all(|&i| i == 3)
    }

    /// Number of collinear triples; strictly increases along the partial order.
    pub fn triple_count(&self) -> usize {
        self.lines
            .iter()
            .map(|&l| {
                let k = popcount(l) as usize;
                k * (k - 1) * (k - 2) / 6
            })
            .sum()
    }

    pub fn triples(&self) -> TripleMask {
        TripleMask::of_lines(&self.lines)
    }

    /// `self >= other`: every full line of `other` lies inside a full line of `self`.
    pub fn is_geq(&self, other: &LinearSpaceFunction) -> Result<bool> {
        if self.n != other.n {
            return Err(Error::PointCountMismatch(self.n, other.n));
        }
        Ok(other.lines.iter().all(|&s| self.lines.iter().any(|&l| l & s == s)))
    }

    /// Remove point `p`, relabeling the points above it downward.
    pub fn restrict(&self, p: usize) -> Result<LinearSpaceFunction> {
        if p >= self.n {
            return Err(Error::OutOfRange(format!("point {p} not in 0..{}", self.n)));
        }
        let lines = self.lines.iter().map(|&l| remove_point(l, p)).filter(|&l| popcount(l) >= 3).collect();
        Ok(LinearSpaceFunction::from_lines_unchecked(self.n - 1, lines))
    }

    /// Apply a relabeling: point `i` becomes `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<LinearSpaceFunction> {
        if perm.len() != self.n {
            return Err(Error::PointCountMismatch(perm.len(), self.n));
        }
        let mut seen = 0u32;
        for &t in perm {
            if t >= self.n || seen >> t & 1 == 1 {
                return Err(Error::Precondition("relabeling is not a permutation".into()));
            }
            seen |= 1 << t;
        }
        let lines = self.lines.iter().map(|&l| points_of(l).fold(0, |acc, p| acc | 1 << perm[p])).collect();
        Ok(LinearSpaceFunction::from_lines_unchecked(self.n, lines))
    }

    /// Every labeled linear space on the same points that is `>= self`, including
    /// `self`, sorted.
    pub fn upper_set(&self) -> Vec<LinearSpaceFunction> {
        let n = self.n;
        let mut seen: HashSet<LinearSpaceFunction> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(self.clone());
        queue.push_back(self.clone());
        while let Some(g) = queue.pop_front() {
            for a in 0..n {
                for b in a + 1..n {
                    for c in b + 1..n {
                        let t: PointSet = 1 << a | 1 << b | 1 << c;
                        if g.is_collinear(t) {
                            continue;
                        }
                        let mut sets = g.lines.clone();
                        sets.push(t);
                        let h = closure(n, &sets).expect("points are in range");
                        if seen.insert(h.clone()) {
                            queue.push_back(h);
                        }
                    }
                }
            }
        }
        let mut out: Vec<_> = seen.into_iter().collect();
        out.sort();
        out
    }

    /// Lines written as `0,1,2;3,4,5`.
    pub fn lines_string(&self) -> String {
        self.lines
            .iter()
            .map(|&l| points_of(l).map(|p| p.to_string()).collect::<Vec<_>>().join(","))
            .collect::<Vec<_>>()
            .join(";")
    }
}

impl fmt::Debug for LinearSpaceFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearSpace(n={}, [{}])", self.n, self.lines_string())
    }
}

impl fmt::Display for LinearSpaceFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} [{}]", self.n, self.lines_string())
    }
}

/// Parse lines written as `0,1,2;3,4,5` (or `-` for none) on `n` points.
pub fn parse_lines(n: usize, text: &str) -> Result<Vec<PointSet>> {
    let text = text.trim();
    if text == "-" || text.is_empty() {
        return Ok(Vec::new());
    }
    let mut masks = Vec::new();
    for l in text.split(';') {
        let mut mask: PointSet = 0;
        for p in l.split(',') {
            let p: usize = p.trim().parse().map_err(|e| Error::InvalidSpace(format!("bad point {p:?}: {e}")))?;
            if p >= n {
                return Err(Error::InvalidSpace(format!("point {p} out of range for n={n}")));
            }
            mask |= 1 << p;
        }
        masks.push(mask);
    }
    Ok(masks)
}

pub(crate) fn full_mask(n: usize) -> PointSet {
    if n >= 16 {
        u16::MAX
    } else {
        (1u16 << n) - 1
    }
}

pub(crate) fn fmt_set(s: PointSet) -> String {
    let inner: Vec<String> = points_of(s).map(|p| p.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

/// Smallest linear space in which every given set is collinear.
pub fn closure(n: usize, sets: &[PointSet]) -> Result<LinearSpaceFunction> {
    if n > MAX_POINTS {
        return Err(Error::OutOfRange(format!("{n} points exceeds the maximum of {MAX_POINTS}")));
    }
    let all = full_mask(n);
    if let Some(&bad) = sets.iter().find(|&&s| s & !all != 0) {
        return Err(Error::OutOfRange(format!("set {} uses a point outside 0..{n}", fmt_set(bad))));
    }
    let mut lines: Vec<PointSet> = sets.iter().copied().filter(|&s| popcount(s) >= 3).collect();
    'outer: loop {
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                if popcount(lines[i] & lines[j]) >= 2 {
                    lines[i] |= lines[j];
                    lines.swap_remove(j);
                    continue 'outer;
                }
            }
        }
        break;
    }
    lines.sort_unstable();
    lines.dedup();
    Ok(LinearSpaceFunction { n, lines })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    fn set(points: &[usize]) -> PointSet {
        points.iter().fold(0, |acc, &p| acc | 1 << p)
    }

    pub(crate) fn fano() -> LinearSpaceFunction {
        let lines = [[0, 1, 2], [0, 3, 4], [0, 5, 6], [1, 3, 5], [1, 4, 6], [2, 3, 6], [2, 4, 5]];
        LinearSpaceFunction::new(7, lines.iter().map(|l| set(l)).collect()).unwrap()
    }

    #[test]
    fn closure_merges_two_point_overlap() {
        let f = closure(4, &[set(&[0, 1, 2]), set(&[0, 1, 3])]).unwrap();
        assert_eq!(f.lines(), &[set(&[0, 1, 2, 3])]);
    }

    #[test]
    fn closure_keeps_disjoint_lines() {
        let f = closure(6, &[set(&[0, 1, 2]), set(&[3, 4, 5])]).unwrap();
        assert_eq!(f.num_lines(), 2);
    }

    #[test]
    fn closure_of_fano_is_fano() {
        let fano = fano();
        let f = closure(7, fano.lines()).unwrap();
        assert_eq!(f, fano);
    }

    #[test]
    fn closure_cascades_and_drops_small_sets() {
        let f = closure(6, &[set(&[0, 1]), set(&[0, 1, 2]), set(&[2, 3, 4]), set(&[1, 2, 4])]).unwrap();
        assert_eq!(f.lines(), &[set(&[0, 1, 2, 3, 4])]);
    }

    #[test]
    fn closure_rejects_out_of_range() {
        assert!(closure(3, &[set(&[0, 1, 3])]).is_err());
    }

    #[test]
    fn new_rejects_bad_spaces() {
        assert!(LinearSpaceFunction::new(4, vec![set(&[0, 1, 2]), set(&[0, 1, 3])]).is_err());
        assert!(LinearSpaceFunction::new(4, vec![set(&[0, 1])]).is_err());
        assert!(LinearSpaceFunction::new(3, vec![set(&[0, 1, 3])]).is_err());
    }

    #[test]
    fn is_geq_examples() {
        let g = LinearSpaceFunction::new(4, vec![set(&[0, 1, 2, 3])]).unwrap();
        let f = LinearSpaceFunction::new(4, vec![set(&[0, 1, 2])]).unwrap();
        assert!(g.is_geq(&f).unwrap());
        assert!(g.is_geq(&LinearSpaceFunction::arc(4)).unwrap());
        let g = LinearSpaceFunction::new(4, vec![set(&[0, 1, 3])]).unwrap();
        assert!(!g.is_geq(&f).unwrap());
        assert!(g.is_geq(&LinearSpaceFunction::arc(5)).is_err());
    }

    #[test]
    fn point_index_examples() {
        let fano = fano();
        assert!((0..7).all(|p| fano.point_index(p) == 3));
        assert_eq!(LinearSpaceFunction::arc(5).point_index(2), 0);
        let f = LinearSpaceFunction::new(3, vec![set(&[0, 1, 2])]).unwrap();
        assert_eq!(f.point_index(0), 1);
    }

    #[test]
    fn restrict_examples() {
        let r = fano().restrict(6).unwrap();
        assert_eq!(r.n(), 6);
        assert_eq!(r.num_lines(), 4);
        assert!(r.lines().iter().all(|&l| popcount(l) == 3));

        let f = LinearSpaceFunction::new(4, vec![set(&[0, 1, 2, 3])]).unwrap();
        assert_eq!(f.restrict(3).unwrap().lines(), &[set(&[0, 1, 2])]);

        let f = LinearSpaceFunction::new(3, vec![set(&[0, 1, 2])]).unwrap();
        assert_eq!(f.restrict(2).unwrap(), LinearSpaceFunction::arc(2));

        let f = LinearSpaceFunction::new(5, vec![set(&[0, 2, 3, 4])]).unwrap();
        assert_eq!(f.restrict(1).unwrap().lines(), &[set(&[0, 1, 2, 3])]);
    }

    #[test]
    fn upper_set_examples() {
        assert_eq!(LinearSpaceFunction::arc(3).upper_set().len(), 2);
        assert_eq!(LinearSpaceFunction::arc(4).upper_set().len(), 6);
        let f = LinearSpaceFunction::new(4, vec![set(&[0, 1, 2])]).unwrap();
        let up = f.upper_set();
        assert_eq!(up.len(), 2);
        assert!(up.contains(&f));
    }

    #[test]
    fn configuration_and_superfiguration_flags() {
        let fano = fano();
        assert!(fano.is_superfiguration());
        assert!(fano.is_configuration());
        assert!(!fano.restrict(0).unwrap().is_superfiguration());
        assert!(!LinearSpaceFunction::arc(3).is_configuration());
    }

    #[test]
    fn relabel_rejects_non_permutations() {
        let f = fano();
        assert!(f.relabel(&[0, 0, 1, 2, 3, 4, 5]).is_err());
        assert!(f.relabel(&[0, 1, 2]).is_err());
        let g = f.relabel(&[6, 5, 4, 3, 2, 1, 0]).unwrap();
        assert_eq!(g.num_lines(), 7);
    }
}
