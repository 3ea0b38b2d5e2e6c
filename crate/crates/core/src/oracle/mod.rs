//! Brute-force counts on explicit planes, used as ground truth for the
//! derived formulas.
//!
//! Ordered counts: `count_arcs` counts `n`-tuples of distinct points with no
//! three collinear, `count_strong` counts injective maps realizing exactly
//! the collinearities of a linear space, `count_weak` at least them.

mod bits;
mod strong;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::incidence::{factorial, IsoClass};
use crate::plane::{Point, ProjectivePlane};
use bits::{line_bits, with_width, Bits};

pub use strong::{count_strong, count_strong_labeled, count_weak, signature};

/// Strong realization counts of one class in one plane.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RealizationCount {
    #[serde(rename = "plane")]
    pub plane_label: String,
    pub target: String,
    /// Realizations of one fixed labeled representative.
    #[serde(rename = "labeled", serialize_with = "as_number")]
    pub labeled_count: BigInt,
    /// Ordered tuples realizing any labeling: `labeled_count × labelings`.
    #[serde(rename = "class", serialize_with = "as_number")]
    pub class_count: BigInt,
    /// Point sets carrying a copy: `labeled_count / aut_order`.
    #[serde(rename = "unordered", serialize_with = "as_number")]
    pub unordered_copies: BigInt,
}

impl RealizationCount {
    pub(crate) fn new(plane: &ProjectivePlane, cls: &IsoClass, labeled: u128) -> Self {
        let labeled_count = BigInt::from(labeled);
        RealizationCount {
            plane_label: plane.label().to_string(),
            target: cls.class_id.to_string(),
            class_count: &labeled_count * cls.labelings,
            unordered_copies: &labeled_count / cls.aut_order,
            labeled_count,
        }
    }
}

pub(crate) fn as_number<S: serde::Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    let n: serde_json::Number = v.to_string().parse().expect("integers are valid JSON numbers");
    n.serialize(s)
}

/// Ordered `n`-arcs of the plane: `n!` times the number of `n`-point sets
/// with no three collinear.
pub fn count_arcs(plane: &ProjectivePlane, n: usize) -> BigInt {
    let v = plane.num_points();
    if n == 0 {
        return BigInt::from(1);
    }
    if n > v {
        return BigInt::from(0);
    }
    if n == 1 {
        return BigInt::from(v);
    }
    BigInt::from(with_width!(v, unordered_arcs(plane, n))) * factorial_big(n)
}

fn unordered_arcs<const W: usize>(plane: &ProjectivePlane, n: usize) -> u128 {
    let lines = line_bits::<W>(plane);
    (0..plane.num_points() as Point)
        .into_par_iter()
        .map(|first| {
            let mut chosen = vec![first];
            arc_dfs(plane, &lines, &mut chosen, &Bits::empty(), n)
        })
        .sum()
}

/// Sets extending `chosen` (in increasing order) to `n` points; `forbidden`
/// holds the lines through pairs of `chosen` except the last point's pairs.
fn arc_dfs<const W: usize>(
    plane: &ProjectivePlane,
    lines: &[Bits<W>],
    chosen: &mut Vec<Point>,
    forbidden: &Bits<W>,
    n: usize,
) -> u128 {
    let v = plane.num_points();
    let last = *chosen.last().expect("at least one point chosen");
    let mut forbidden = *forbidden;
    for &p in &chosen[..chosen.len() - 1] {
        forbidden.union_with(&lines[plane.join(p, last) as usize]);
    }
    if chosen.len() + 1 == n {
        return forbidden.count_free_above(last, v) as u128;
    }
    let mut total = 0;
    for x in last + 1..v as Point {
        if !forbidden.contains(x) {
            chosen.push(x);
            total += arc_dfs(plane, lines, chosen, &forbidden, n);
            chosen.pop();
        }
    }
    total
}

pub(crate) fn factorial_big(n: usize) -> BigInt {
    (1..=n as u64).fold(BigInt::from(1), |acc, k| acc * k)
}

/// Class count of the Fano plane from ordered quadrangles: a quadrangle
/// spans a Fano subplane exactly when its three diagonal points are
/// collinear, and each subplane holds 168 ordered quadrangles.
pub fn count_fano_fast(plane: &ProjectivePlane) -> BigInt {
    let v = plane.num_points() as Point;
    let hits: u128 = (0..v)
        .into_par_iter()
        .map(|a| {
            let mut hits = 0u128;
            for b in (0..v).filter(|&b| b != a) {
                let ab = plane.join(a, b);
                for c in (0..v).filter(|&c| c != a && c != b && !plane.collinear(a, b, c)) {
                    let (ac, bc) = (plane.join(a, c), plane.join(b, c));
                    for d in 0..v {
                        if d == a || d == b || d == c || plane.collinear(a, b, d) {
                            continue;
                        }
                        if plane.collinear(a, c, d) || plane.collinear(b, c, d) {
                            continue;
                        }
                        let p = plane.meet(ab, plane.join(c, d));
                        let q = plane.meet(ac, plane.join(b, d));
                        let r = plane.meet(plane.join(a, d), bc);
                        if plane.collinear(p, q, r) {
                            hits += 1;
                        }
                    }
                }
            }
            hits
        })
        .sum();
    BigInt::from(hits / 168) * factorial(7)
}
