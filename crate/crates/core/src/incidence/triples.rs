use std::sync::LazyLock;

use super::{points_of, PointSet};

/// Points supported by [`TripleMask`].
pub const TRIPLE_POINTS: usize = 12;

const WORDS: usize = 4;

/// Bit index of each triple `a < b < c` in colex order.
static TRIPLE_BIT: LazyLock<Vec<u16>> = LazyLock::new(|| {
    let n = TRIPLE_POINTS;
    let mut table = vec![u16::MAX; n * n * n];
    let mut next = 0u16;
    for c in 0..n {
        for b in 0..c {
            for a in 0..b {
                table[(a * n + b) * n + c] = next;
                next += 1;
            }
        }
    }
    table
});

/// The set of collinear triples of a linear space on at most 12 points.
///
/// A closed linear space is determined by its collinear triples, and
/// `g >= f` holds exactly when the triples of `f` are a subset of those of `g`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct TripleMask([u64; WORDS]);

impl TripleMask {
    pub fn of_lines(lines: &[PointSet]) -> Self {
        let mut m = TripleMask::default();
        for &l in lines {
            m.add_line(l);
        }
        m
    }

    pub fn add_line(&mut self, line: PointSet) {
        let n = TRIPLE_POINTS;
        let pts: Vec<usize> = points_of(line).collect();
        assert!(pts.last().is_none_or(|&p| p < n), "triple masks support at most {n} points");
        for (i, &a) in pts.iter().enumerate() {
            for (j, &b) in pts.iter().enumerate().skip(i + 1) {
                for &c in &pts[j + 1..] {
                    let bit = TRIPLE_BIT[(a * n + b) * n + c] as usize;
                    self.0[bit / 64] |= 1 << (bit % 64);
                }
            }
        }
    }

    #[inline]
    pub fn contains_all(&self, other: &TripleMask) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a & b == *b)
    }

    pub fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }
}
