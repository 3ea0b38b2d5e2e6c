//! Finite projective planes as explicit incidence structures.

mod field;
mod format;

pub use field::{is_prime, prime_power, FiniteField, MAX_FIELD_ORDER};
pub use format::{parse_plane, serialize_plane};

use crate::error::{Error, Result};

pub type Point = u32;
pub type LineId = u32;

/// A validated projective plane of order `q` on `q^2 + q + 1` points.
///
/// Lines are kept sorted (each line ascending, the list lexicographically),
/// so two planes with the same line sets compare equal.
#[derive(Clone, Debug)]
pub struct ProjectivePlane {
    order: u32,
    lines: Vec<Vec<Point>>,
    point_lines: Vec<Vec<LineId>>,
    pair_to_line: Vec<LineId>,
    line_meet: Vec<Point>,
    label: String,
    /// Known to be Desarguesian, so collineations act transitively on
    /// ordered quadrangles.
    frame_transitive: bool,
}

impl PartialEq for ProjectivePlane {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.lines == other.lines
    }
}

impl Eq for ProjectivePlane {}

impl ProjectivePlane {
    /// Build a plane from its lines, checking every axiom.
    pub fn from_lines(mut lines: Vec<Vec<Point>>, label: impl Into<String>) -> Result<Self> {
        let first = lines.first().ok_or_else(|| Error::Axiom("plane has no lines".into()))?;
        if first.len() < 3 {
            return Err(Error::Axiom(format!("line size {} is below 3", first.len())));
        }
        let q = first.len() as u64 - 1;
        let n = q * q + q + 1;
        if n > u16::MAX as u64 {
            return Err(Error::OutOfRange(format!("order {q} is too large")));
        }
        let n = n as usize;
        if lines.len() != n {
            return Err(Error::Axiom(format!("line count {} ≠ {n}", lines.len())));
        }
        for (i, line) in lines.iter_mut().enumerate() {
            line.sort_unstable();
            if line.len() != q as usize + 1 {
                return Err(Error::Axiom(format!("line {i} has {} points, expected {}", line.len(), q + 1)));
            }
            if let Some(&p) = line.iter().find(|&&p| p as usize >= n) {
                return Err(Error::Axiom(format!("line {i} contains point {p} outside 0..{n}")));
            }
            if line.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Axiom(format!("line {i} repeats a point")));
            }
        }
        lines.sort();
        let mut point_lines = vec![Vec::new(); n];
        for (i, line) in lines.iter().enumerate() {
            for &p in line {
                point_lines[p as usize].push(i as LineId);
            }
        }
        if let Some((p, through)) = point_lines.iter().enumerate().find(|(_, l)| l.len() != q as usize + 1) {
            return Err(Error::Axiom(format!("point {p} lies on {} lines, expected {}", through.len(), q + 1)));
        }
        let mut pair_to_line = vec![LineId::MAX; n * n];
        for (i, line) in lines.iter().enumerate() {
            for (x, &a) in line.iter().enumerate() {
                for &b in &line[x + 1..] {
                    let slot = &mut pair_to_line[a as usize * n + b as usize];
                    if *slot != LineId::MAX {
                        return Err(Error::Axiom(format!(
                            "points {a} and {b} lie on both line {} and line {i}",
                            *slot
                        )));
                    }
                    *slot = i as LineId;
                    pair_to_line[b as usize * n + a as usize] = i as LineId;
                }
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if pair_to_line[a * n + b] == LineId::MAX {
                    return Err(Error::Axiom(format!("points {a} and {b} lie on no common line")));
                }
            }
        }
        let mut line_meet = vec![Point::MAX; n * n];
        for (p, through) in point_lines.iter().enumerate() {
            for (x, &l) in through.iter().enumerate() {
                for &m in &through[x + 1..] {
                    line_meet[l as usize * n + m as usize] = p as Point;
                    line_meet[m as usize * n + l as usize] = p as Point;
                }
            }
        }
        for l in 0..n {
            for m in l + 1..n {
                if line_meet[l * n + m] == Point::MAX {
                    return Err(Error::Axiom(format!("lines {l} and {m} do not meet")));
                }
            }
        }
        let plane = ProjectivePlane {
            order: q as u32,
            lines,
            point_lines,
            pair_to_line,
            line_meet,
            label: label.into(),
            frame_transitive: false,
        };
        if plane.quadrangle().is_none() {
            return Err(Error::Axiom("no four points with no three collinear".into()));
        }
        Ok(plane)
    }

    /// The Desarguesian plane over `field`.
    pub fn pg2(field: &FiniteField) -> Self {
        let q = field.order();
        let normalized = |v: [u32; 3]| -> bool { v.iter().rev().find(|&&c| c != 0) == Some(&1) };
        let mut triples = Vec::new();
        for x in 0..q {
            for y in 0..q {
                for z in 0..q {
                    if normalized([x, y, z]) {
                        triples.push([x, y, z]);
                    }
                }
            }
        }
        let lines = triples
            .iter()
            .map(|form| {
                triples
                    .iter()
                    .enumerate()
                    .filter(|(_, pt)| {
                        let s = field.add(
                            field.add(field.mul(form[0], pt[0]), field.mul(form[1], pt[1])),
                            field.mul(form[2], pt[2]),
                        );
                        s == 0
                    })
                    .map(|(i, _)| i as Point)
                    .collect()
            })
            .collect();
        let mut plane = Self::from_lines(lines, format!("PG(2,{q})")).expect("PG(2,q) satisfies the plane axioms");
        plane.frame_transitive = true;
        plane
    }

    pub fn is_frame_transitive(&self) -> bool {
        self.frame_transitive
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn num_points(&self) -> usize {
        self.lines.len()
    }

    pub fn lines(&self) -> &[Vec<Point>] {
        &self.lines
    }

    pub fn line(&self, l: LineId) -> &[Point] {
        &self.lines[l as usize]
    }

    pub fn lines_through(&self, p: Point) -> &[LineId] {
        &self.point_lines[p as usize]
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// The unique line through two distinct points.
    pub fn line_through(&self, a: Point, b: Point) -> Result<LineId> {
        let n = self.num_points();
        if a as usize >= n || b as usize >= n {
            return Err(Error::OutOfRange(format!("point out of range 0..{n}")));
        }
        if a == b {
            return Err(Error::Precondition(format!("line_through needs two distinct points, got {a} twice")));
        }
        Ok(self.join(a, b))
    }

    /// [`line_through`](Self::line_through) without checks.
    #[inline]
    pub fn join(&self, a: Point, b: Point) -> LineId {
        self.pair_to_line[a as usize * self.num_points() + b as usize]
    }

    /// The common point of two distinct lines.
    #[inline]
    pub fn meet(&self, l: LineId, m: LineId) -> Point {
        self.line_meet[l as usize * self.num_points() + m as usize]
    }

    #[inline]
    pub fn collinear(&self, a: Point, b: Point, c: Point) -> bool {
        a == b || a == c || b == c || self.join(a, b) == self.join(a, c)
    }

    pub fn incident(&self, p: Point, l: LineId) -> bool {
        self.lines[l as usize].binary_search(&p).is_ok()
    }

    /// Four points, no three collinear.
    pub fn quadrangle(&self) -> Option<[Point; 4]> {
        let n = self.num_points() as Point;
        let (a, b) = (0, 1);
        let c = (2..n).find(|&c| !self.collinear(a, b, c))?;
        let d = (2..n)
            .find(|&d| d != c && !self.collinear(a, b, d) && !self.collinear(a, c, d) && !self.collinear(b, c, d))?;
        Some([a, b, c, d])
    }

    /// The plane with points renamed by `perm` (`perm[old] = new`).
    pub fn relabel(&self, perm: &[Point]) -> Result<Self> {
        let lines = self.lines.iter().map(|l| l.iter().map(|&p| perm[p as usize]).collect()).collect();
        let mut plane = Self::from_lines(lines, self.label.clone())?;
        plane.frame_transitive = self.frame_transitive;
        Ok(plane)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pg(q: u64) -> ProjectivePlane {
        ProjectivePlane::pg2(&FiniteField::of_order(q).unwrap())
    }

    #[test]
    fn fano_parameters() {
        let p = pg(2);
        assert_eq!(p.num_points(), 7);
        assert!(p.lines().iter().all(|l| l.len() == 3));
        assert_eq!(p.label(), "PG(2,2)");
    }

    #[test]
    fn counts_for_small_orders() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 16] {
            let p = pg(q);
            assert_eq!(p.num_points() as u64, q * q + q + 1);
            assert_eq!(p.order() as u64, q);
        }
    }

    #[test]
    fn pairs_lie_on_exactly_one_line() {
        let p = pg(3);
        let n = p.num_points() as Point;
        for a in 0..n {
            for b in a + 1..n {
                let hits = p.lines().iter().filter(|l| l.contains(&a) && l.contains(&b)).count();
                assert_eq!(hits, 1);
                assert_eq!(p.line(p.line_through(a, b).unwrap()).len(), 4);
            }
        }
        for l in 0..n {
            for m in l + 1..n {
                let common = p.line(l).iter().filter(|x| p.line(m).contains(x)).count();
                assert_eq!(common, 1);
                assert!(p.incident(p.meet(l, m), l) && p.incident(p.meet(l, m), m));
            }
        }
    }

    #[test]
    fn line_through_is_unique() {
        let p = pg(4);
        for a in 0..21 {
            for b in 0..21 {
                if a == b {
                    assert!(p.line_through(a, b).is_err());
                    continue;
                }
                let l = p.line_through(a, b).unwrap();
                assert_eq!(p.line(l).len(), 5);
                for &c in p.line(l) {
                    if c != a {
                        assert_eq!(p.line_through(a, c).unwrap(), l);
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_two_lines_sharing_two_points() {
        let lines = vec![
            vec![0, 1, 2],
            vec![0, 1, 3],
            vec![0, 4, 5],
            vec![1, 4, 6],
            vec![2, 3, 4],
            vec![2, 5, 6],
            vec![3, 5, 6],
        ];
        let err = ProjectivePlane::from_lines(lines, "bad").unwrap_err();
        assert!(matches!(err, Error::Axiom(_)));
        assert!(err.to_string().contains("points 0 and 1"), "{err}");
    }

    #[test]
    fn triangle_is_not_a_plane() {
        let err = ProjectivePlane::from_lines(vec![vec![0, 1], vec![1, 2], vec![0, 2]], "triangle").unwrap_err();
        assert!(matches!(err, Error::Axiom(_)));
    }

    #[test]
    fn relabeling_keeps_axioms() {
        let p = pg(3);
        let perm: Vec<Point> = (0..13).map(|i| (i * 5) % 13).collect();
        let r = p.relabel(&perm).unwrap();
        assert_eq!(r.num_points(), 13);
    }
}
