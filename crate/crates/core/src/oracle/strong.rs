//! Backtracking placement of a linear space into a plane.
//!
//! Points are placed in a rigidity-first order: the next point is the one
//! on the most full lines already fixed by two placed points. A point on two
//! fixed lines has at most one position (their meet), a point on one fixed
//! line ranges over that line, and only the remaining points range over
//! the whole plane.

use num_bigint::BigInt;
use rayon::prelude::*;

use super::bits::{line_bits, with_width, Bits};
use super::RealizationCount;
use crate::incidence::{points_of, IsoClass, LinearSpaceFunction, PointSet};
use crate::plane::{Point, ProjectivePlane};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Strong,
    Weak,
}

/// Constraint on a later step, imposed once two earlier steps are placed.
#[derive(Clone, Copy)]
struct Event {
    later: usize,
    other: usize,
    /// The later point must lie on the line (`true`) or off it (`false`).
    on: bool,
}

struct Plan {
    /// Positions of the first steps, when they are pinned.
    fixed: Vec<Point>,
    /// `events[k]`: constraints that become known when step `k` is placed,
    /// each pairing step `k` with an earlier step.
    events: Vec<Vec<Event>>,
}

impl Plan {
    fn new(f: &LinearSpaceFunction, mode: Mode, start: &[usize]) -> Self {
        let n = f.n();
        let lines = f.lines();
        let idx = f.indices();
        let mut order: Vec<usize> = start.to_vec();
        let mut placed: PointSet = start.iter().fold(0, |m, &p| m | 1 << p);
        while order.len() < n {
            let next = (0..n)
                .filter(|&p| placed >> p & 1 == 0)
                .max_by_key(|&p| {
                    let through = lines.iter().filter(|&&l| l >> p & 1 == 1);
                    let fixed = through.clone().filter(|&&l| (l & placed).count_ones() >= 2).count();
                    let touched = through.filter(|&&l| l & placed != 0).count();
                    (fixed, touched, idx[p], std::cmp::Reverse(p))
                })
                .expect("an unplaced point remains");
            order.push(next);
            placed |= 1 << next;
        }
        let mut events = vec![Vec::new(); n];
        for i in 0..n {
            let v = order[i];
            let step_of = |p: usize| order[..i].iter().position(|&e| e == p);
            // One pair per full line: the rest of the line follows from the
            // earlier steps' own constraints.
            for &l in lines.iter().filter(|&&l| l >> v & 1 == 1) {
                let mut on: Vec<usize> = points_of(l).filter_map(step_of).collect();
                on.sort_unstable();
                if on.len() >= 2 {
                    events[on[1]].push(Event { later: i, other: on[0], on: true });
                }
            }
            if mode == Mode::Strong {
                for k in 0..i {
                    for j in 0..k {
                        if !f.is_collinear(1 << v | 1 << order[j] | 1 << order[k]) {
                            events[k].push(Event { later: i, other: j, on: false });
                        }
                    }
                }
            }
        }
        Plan { fixed: Vec::new(), events }
    }
}

struct Search<'a, const W: usize> {
    plane: &'a ProjectivePlane,
    lines: &'a [Bits<W>],
    plan: &'a Plan,
    n: usize,
    pos: Vec<Point>,
    used: Bits<W>,
    /// `allowed[k * n + i]`: positions left for step `i` once steps `0..k`
    /// are placed.
    allowed: Vec<Bits<W>>,
}

impl<const W: usize> Search<'_, W> {
    fn place(&mut self, k: usize, x: Point) -> u128 {
        let n = self.n;
        for i in k + 1..n {
            self.allowed[(k + 1) * n + i] = self.allowed[k * n + i];
        }
        for e in &self.plan.events[k] {
            let line = &self.lines[self.plane.join(self.pos[e.other], x) as usize];
            let set = &mut self.allowed[(k + 1) * n + e.later];
            if e.on {
                set.intersect_with(line);
            } else {
                set.subtract(line);
            }
        }
        if (k + 1..n).any(|i| self.allowed[(k + 1) * n + i].is_empty()) {
            return 0;
        }
        self.pos.push(x);
        self.used.insert(x);
        let total = self.count(k + 1);
        self.used.remove(x);
        self.pos.pop();
        total
    }

    fn count(&mut self, i: usize) -> u128 {
        if i == self.n {
            return 1;
        }
        let mut cand = self.allowed[i * self.n + i];
        cand.subtract(&self.used);
        if let Some(&x) = self.plan.fixed.get(i) {
            return if cand.contains(x) { self.place(i, x) } else { 0 };
        }
        let mut total = 0;
        for x in cand.iter() {
            total += self.place(i, x);
        }
        total
    }
}

fn run(plane: &ProjectivePlane, f: &LinearSpaceFunction, mode: Mode) -> u128 {
    let n = f.n();
    let v = plane.num_points();
    if n == 0 {
        return 1;
    }
    if n > v {
        return 0;
    }
    // A strong realization maps a quadrangle of `f` to a quadrangle of the
    // plane; when the collineation group is transitive on those, pinning the
    // image of one divides the search by the number of ordered quadrangles.
    if mode == Mode::Strong && plane.is_frame_transitive() {
        if let (Some(quad), Some(frame)) = (quadrangle(f), plane.quadrangle()) {
            let mut plan = Plan::new(f, mode, &quad);
            plan.fixed = frame.to_vec();
            let q = plane.order() as u128;
            let frames = v as u128 * (v as u128 - 1) * q * q * (q - 1) * (q - 1);
            return with_width!(v, search(plane, &plan, n)) * frames;
        }
    }
    let plan = Plan::new(f, mode, &[]);
    with_width!(v, search(plane, &plan, n))
}

/// The first four points of `f`, lexicographically, with no three collinear.
fn quadrangle(f: &LinearSpaceFunction) -> Option<[usize; 4]> {
    let n = f.n();
    let free = |s: &[usize]| {
        (0..s.len()).all(|i| {
            (i + 1..s.len()).all(|j| (j + 1..s.len()).all(|k| !f.is_collinear(1 << s[i] | 1 << s[j] | 1 << s[k])))
        })
    };
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if !free(&[a, b, c]) {
                    continue;
                }
                for d in c + 1..n {
                    if free(&[a, b, c, d]) {
                        return Some([a, b, c, d]);
                    }
                }
            }
        }
    }
    None
}

fn search<const W: usize>(plane: &ProjectivePlane, plan: &Plan, n: usize) -> u128 {
    let v = plane.num_points();
    let lines = line_bits::<W>(plane);
    let all = Bits::<W>::full(v);
    let firsts: Vec<Point> = match plan.fixed.first() {
        Some(&x) => vec![x],
        None => (0..v as Point).collect(),
    };
    firsts
        .into_par_iter()
        .map(|first| {
            let mut s = Search {
                plane,
                lines: &lines,
                plan,
                n,
                pos: Vec::with_capacity(n),
                used: Bits::empty(),
                allowed: vec![all; (n + 1) * n],
            };
            s.place(0, first)
        })
        .sum()
}

/// Injective maps of the points of `f` into the plane under which a set is
/// collinear exactly when it lies in a full line of `f`.
pub fn count_strong_labeled(plane: &ProjectivePlane, f: &LinearSpaceFunction) -> BigInt {
    BigInt::from(run(plane, f, Mode::Strong))
}

pub fn count_strong(plane: &ProjectivePlane, cls: &IsoClass) -> RealizationCount {
    RealizationCount::new(plane, cls, run(plane, &cls.canon, Mode::Strong))
}

/// Injective maps sending every full line of `f` into a line of the plane;
/// further collinearities are allowed.
pub fn count_weak(plane: &ProjectivePlane, f: &LinearSpaceFunction) -> BigInt {
    BigInt::from(run(plane, f, Mode::Weak))
}

/// Class counts of `cls` in each plane, in order.
pub fn signature(cls: &IsoClass, planes: &[ProjectivePlane]) -> Vec<BigInt> {
    planes.iter().map(|p| count_strong(p, cls).class_count).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::incidence::{canonicalize, labeled_universe, ClassFilter};
    use crate::oracle::tests::pg;
    use crate::symbolic::QPoly;

    fn lsf(n: usize, lines: &[&[usize]]) -> LinearSpaceFunction {
        let masks = lines.iter().map(|l| l.iter().fold(0u16, |m, &p| m | 1 << p)).collect();
        LinearSpaceFunction::new(n, masks).unwrap()
    }

    fn brute_strong(plane: &ProjectivePlane, f: &LinearSpaceFunction, weak: bool) -> u64 {
        fn go(plane: &ProjectivePlane, f: &LinearSpaceFunction, weak: bool, t: &mut Vec<Point>) -> u64 {
            if t.len() == f.n() {
                let k = t.len();
                for a in 0..k {
                    for b in a + 1..k {
                        for c in b + 1..k {
                            let want = f.is_collinear(1 << a | 1 << b | 1 << c);
                            let got = plane.collinear(t[a], t[b], t[c]);
                            if want != got && (!weak || want) {
                                return 0;
                            }
                        }
                    }
                }
                return 1;
            }
            let mut total = 0;
            for x in 0..plane.num_points() as Point {
                if !t.contains(&x) {
                    t.push(x);
                    total += go(plane, f, weak, t);
                    t.pop();
                }
            }
            total
        }
        go(plane, f, weak, &mut Vec::new())
    }

    #[test]
    fn agrees_with_tuple_scan() {
        let plane = pg(2);
        for n in 1..=5 {
            for f in labeled_universe(n) {
                assert_eq!(count_strong_labeled(&plane, &f), BigInt::from(brute_strong(&plane, &f, false)), "{f}");
                assert_eq!(count_weak(&plane, &f), BigInt::from(brute_strong(&plane, &f, true)), "{f}");
            }
        }
    }

    #[test]
    fn every_tuple_realizes_one_space() {
        for q in [2, 3, 4] {
            let plane = pg(q);
            for n in 1..=4 {
                let total: BigInt = labeled_universe(n).iter().map(|f| count_strong_labeled(&plane, f)).sum();
                assert_eq!(total, QPoly::falling_points(n).eval_i64(q as i64), "q = {q}, n = {n}");
            }
        }
    }

    #[test]
    fn weak_counts_sum_strong_counts_above() {
        for q in [2, 3] {
            let plane = pg(q);
            for n in 1..=4 {
                for f in labeled_universe(n) {
                    let above: BigInt = f.upper_set().iter().map(|g| count_strong_labeled(&plane, g)).sum();
                    assert_eq!(count_weak(&plane, &f), above, "q = {q}, {f}");
                }
            }
        }
    }

    #[test]
    fn weak_examples() {
        let plane = pg(2);
        assert_eq!(count_weak(&plane, &LinearSpaceFunction::arc(3)), BigInt::from(210));
        assert_eq!(count_weak(&plane, &lsf(3, &[&[0, 1, 2]])), BigInt::from(42));
    }

    #[test]
    fn fano_and_moebius_kantor() {
        let fano = canonicalize(&crate::incidence::tests::fano());
        let c = count_strong(&pg(2), &fano);
        assert_eq!(c.class_count, BigInt::from(5040));
        assert_eq!(c.unordered_copies, BigInt::from(1));
        assert_eq!(c.labeled_count, BigInt::from(168));
        assert_eq!(count_strong(&pg(3), &fano).class_count, BigInt::from(0));
        let mk = crate::incidence::enumerate_classes(8, ClassFilter::Superfigurations).unwrap();
        assert_eq!(mk.len(), 1);
        assert_eq!(count_strong(&pg(4), &mk[0]).class_count, BigInt::from(101606400u64));
    }

    #[test]
    fn pinned_frame_matches_full_search() {
        for q in [3, 4] {
            let plane = pg(q);
            let plain = ProjectivePlane::from_lines(plane.lines().to_vec(), "plain").unwrap();
            assert!(plane.is_frame_transitive() && !plain.is_frame_transitive());
            for n in 4..=7 {
                for cls in crate::incidence::enumerate_classes(n, ClassFilter::All).unwrap() {
                    assert_eq!(
                        count_strong_labeled(&plane, &cls.canon),
                        count_strong_labeled(&plain, &cls.canon),
                        "q = {q}, {}",
                        cls.canon
                    );
                }
            }
        }
    }

    #[test]
    fn relabeled_plane_gives_same_counts() {
        let plane = pg(3);
        let v = plane.num_points() as Point;
        let perm: Vec<Point> = (0..v).map(|p| (p * 5 + 3) % v).collect();
        let moved = plane.relabel(&perm).unwrap();
        for f in [lsf(5, &[&[0, 1, 2], &[2, 3, 4]]), lsf(6, &[&[0, 1, 2, 3]]), LinearSpaceFunction::arc(4)] {
            assert_eq!(count_strong_labeled(&plane, &f), count_strong_labeled(&moved, &f));
            assert_eq!(count_weak(&plane, &f), count_weak(&moved, &f));
        }
    }
}
