//! Fixed-width point sets; the width is picked once per plane so that the
//! inner loops work on plain arrays.

use crate::plane::{Point, ProjectivePlane};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Bits<const W: usize>([u64; W]);

impl<const W: usize> Bits<W> {
    pub fn empty() -> Self {
        Bits([0; W])
    }

    /// All of `0..n`.
    pub fn full(n: usize) -> Self {
        let mut b = Self::empty();
        for (w, word) in b.0.iter_mut().enumerate() {
            *word = match n.saturating_sub(w * 64) {
                0 => 0,
                k if k >= 64 => !0,
                k => (1 << k) - 1,
            };
        }
        b
    }

    pub fn of(points: &[Point]) -> Self {
        let mut b = Self::empty();
        for &p in points {
            b.insert(p);
        }
        b
    }

    #[inline]
    pub fn insert(&mut self, p: Point) {
        self.0[p as usize / 64] |= 1 << (p % 64);
    }

    #[inline]
    pub fn remove(&mut self, p: Point) {
        self.0[p as usize / 64] &= !(1 << (p % 64));
    }

    #[inline]
    pub fn contains(&self, p: Point) -> bool {
        self.0[p as usize / 64] >> (p % 64) & 1 == 1
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn intersect_with(&mut self, other: &Self) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a &= b;
        }
    }

    #[inline]
    pub fn subtract(&mut self, other: &Self) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a &= !b;
        }
    }

    #[inline]
    pub fn union_with(&mut self, other: &Self) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Point> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros();
                rest &= rest - 1;
                Some(w as Point * 64 + b)
            })
        })
    }

    /// Number of points of `0..n` above `p` that are not in the set.
    pub fn count_free_above(&self, p: Point, n: usize) -> u64 {
        let mut free = Self::full(n);
        free.subtract(self);
        let first = p as usize + 1;
        free.0
            .iter()
            .enumerate()
            .map(|(w, &word)| {
                let lo = w * 64;
                let word = match first.saturating_sub(lo) {
                    0 => word,
                    k if k >= 64 => 0,
                    k => word & !((1u64 << k) - 1),
                };
                word.count_ones() as u64
            })
            .sum()
    }
}

pub(crate) fn line_bits<const W: usize>(plane: &ProjectivePlane) -> Vec<Bits<W>> {
    plane.lines().iter().map(|l| Bits::of(l)).collect()
}

/// Run `$f::<W>(args)` with the smallest supported word count `W` that
/// holds `$points` points.
macro_rules! with_width {
    ($points:expr, $f:ident($($arg:expr),*)) => {
        match ($points).div_ceil(64) {
            0..=1 => $f::<1>($($arg),*),
            2 => $f::<2>($($arg),*),
            3..=4 => $f::<4>($($arg),*),
            5..=8 => $f::<8>($($arg),*),
            9..=16 => $f::<16>($($arg),*),
            17..=32 => $f::<32>($($arg),*),
            33..=64 => $f::<64>($($arg),*),
            65..=128 => $f::<128>($($arg),*),
            129..=256 => $f::<256>($($arg),*),
            257..=512 => $f::<512>($($arg),*),
            _ => $f::<1024>($($arg),*),
        }
    };
}
pub(crate) use with_width;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_count_respects_bounds() {
        let b = Bits::<2>::of(&[3, 5, 64, 69]);
        assert_eq!(b.count_free_above(2, 70), 67 - 4);
        assert_eq!(b.count_free_above(64, 70), 4);
        assert_eq!(b.count_free_above(69, 70), 0);
        assert_eq!(b.count_free_above(0, 64), 64 - 1 - 2);
    }

    #[test]
    fn full_and_iter() {
        let b = Bits::<2>::full(70);
        assert_eq!(b.iter().count(), 70);
        assert_eq!(b.iter().last(), Some(69));
        assert!(Bits::<1>::empty().is_empty());
    }
}
