//! Enumeration of linear spaces up to isomorphism.
//!
//! Every linear space on `n` points arises from one on `n - 1` points by
//! adding a point `x` together with the lines through it. Each line through
//! `x` is either an existing full line extended by `x`, or `x` joined to a
//! pair of points not yet on a common full line; the chosen sets must be
//! pairwise disjoint. Extending every class representative of the previous
//! level and keeping one canonical form per class yields the next level.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::canon::{canonical_lines, IsoClass};
use super::{LinearSpaceFunction, PointSet};
use crate::error::{Error, Result};

/// Default upper limit for [`enumerate_classes`].
pub const MAX_ENUMERATION_POINTS: usize = 11;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassFilter {
    All,
    Superfigurations,
    Configurations,
}

impl ClassFilter {
    pub fn accepts(&self, c: &IsoClass) -> bool {
        match self {
            ClassFilter::All => true,
            ClassFilter::Superfigurations => c.tags.is_superfiguration,
            ClassFilter::Configurations => c.tags.is_configuration,
        }
    }
}

impl fmt::Display for ClassFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassFilter::All => "all",
            ClassFilter::Superfigurations => "superfigurations",
            ClassFilter::Configurations => "configurations",
        })
    }
}

impl FromStr for ClassFilter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(ClassFilter::All),
            "superfigurations" | "sf" => Ok(ClassFilter::Superfigurations),
            "configurations" | "cfg" => Ok(ClassFilter::Configurations),
            _ => Err(Error::Precondition(format!("unknown filter {s:?}"))),
        }
    }
}

/// Call `emit` with every one-point extension of `g`; the new point is `g.n()`.
pub fn extensions(g: &LinearSpaceFunction, mut emit: impl FnMut(LinearSpaceFunction)) {
    let m = g.n();
    let x: PointSet = 1 << m;
    let lines = g.lines();
    let mut options: Vec<PointSet> = lines.to_vec();
    for a in 0..m {
        for b in a + 1..m {
            let pair: PointSet = 1 << a | 1 << b;
            if !lines.iter().any(|&l| l & pair == pair) {
                options.push(pair);
            }
        }
    }
    let mut chosen = Vec::with_capacity(m);
    extend_rec(lines, &options, 0, 0, &mut chosen, x, m + 1, &mut emit);
}

#[allow(clippy::too_many_arguments)]
fn extend_rec(
    lines: &[PointSet],
    options: &[PointSet],
    start: usize,
    used: PointSet,
    chosen: &mut Vec<usize>,
    x: PointSet,
    n: usize,
    emit: &mut impl FnMut(LinearSpaceFunction),
) {
    let mut new_lines: Vec<PointSet> = lines.to_vec();
    for &i in chosen.iter() {
        if i < lines.len() {
            new_lines[i] |= x;
        } else {
            new_lines.push(options[i] | x);
        }
    }
    emit(LinearSpaceFunction::from_lines_unchecked(n, new_lines));
    for i in start..options.len() {
        if options[i] & used == 0 {
            chosen.push(i);
            extend_rec(lines, options, i + 1, used | options[i], chosen, x, n, emit);
            chosen.pop();
        }
    }
}

/// Classes on `n` points from the classes on `n - 1` points.
pub fn next_level(prev: &[IsoClass]) -> Vec<IsoClass> {
    let n = prev.first().map_or(1, |c| c.n() + 1);
    let parts: Vec<HashMap<Vec<PointSet>, u64>> = prev
        .par_iter()
        .map(|parent| {
            let mut local = HashMap::new();
            extensions(&parent.canon, |h| {
                let (canon, aut) = canonical_lines(h.n(), h.lines());
                local.entry(canon).or_insert(aut);
            });
            local
        })
        .collect();
    let mut all: BTreeMap<Vec<PointSet>, u64> = BTreeMap::new();
    for part in parts {
        for (canon, aut) in part {
            all.entry(canon).or_insert(aut);
        }
    }
    all.into_iter()
        .map(|(lines, aut)| IsoClass::from_canonical(LinearSpaceFunction::from_lines_unchecked(n, lines), aut))
        .collect()
}

/// All classes for every point count `0..=max`, built level by level.
#[derive(Clone, Debug)]
pub struct ClassLevels {
    levels: Vec<Vec<IsoClass>>,
}

impl ClassLevels {
    pub fn build(max: usize) -> Self {
        let mut levels = ClassLevels { levels: vec![vec![IsoClass::from_canonical(LinearSpaceFunction::arc(0), 1)]] };
        levels.extend_to(max);
        levels
    }

    pub fn extend_to(&mut self, max: usize) {
        while self.levels.len() <= max {
            let next = next_level(self.levels.last().expect("level 0 exists"));
            self.levels.push(next);
        }
    }

    /// Adopt a precomputed level (e.g. loaded from a cache) as level `n`.
    pub fn push_level(&mut self, classes: Vec<IsoClass>) -> Result<()> {
        let n = self.levels.len();
        if classes.iter().any(|c| c.n() != n) {
            return Err(Error::Precondition(format!("level {n} contains classes of another size")));
        }
        self.levels.push(classes);
        Ok(())
    }

    pub fn max(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, n: usize) -> &[IsoClass] {
        &self.levels[n]
    }
}

/// Isomorphism classes of linear spaces on `n` points passing `filter`,
/// ordered by canonical encoding.
pub fn enumerate_classes(n: usize, filter: ClassFilter) -> Result<Vec<IsoClass>> {
    if n == 0 || n > MAX_ENUMERATION_POINTS {
        return Err(Error::OutOfRange(format!("enumeration supports 1..={MAX_ENUMERATION_POINTS} points, got {n}")));
    }
    let levels = ClassLevels::build(n);
    Ok(levels.level(n).iter().filter(|c| filter.accepts(c)).cloned().collect())
}

/// Every labeled linear space on `n` points, sorted.
pub fn labeled_universe(n: usize) -> Vec<LinearSpaceFunction> {
    let mut level = vec![LinearSpaceFunction::arc(0)];
    for _ in 0..n {
        let mut next = Vec::new();
        for g in &level {
            extensions(g, |h| next.push(h));
        }
        level = next;
    }
    level.sort();
    level
}
