//! Every labeled linear space on `k` points, tagged with its class and its
//! collinear-triple mask so that upper sets reduce to mask containment.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::incidence::{canonical_lines, labeled_universe, PointSet, TripleMask};

/// Canonical line list → index of the class in its level.
pub(crate) type ClassIndex = HashMap<Vec<PointSet>, u32>;

pub(crate) struct Universe {
    triples: Vec<TripleMask>,
    class: Vec<u32>,
    starts: Vec<u32>,
    lines: Vec<PointSet>,
}

impl Universe {
    pub fn len(&self) -> usize {
        self.class.len()
    }

    #[inline]
    pub fn lines(&self, i: usize) -> &[PointSet] {
        &self.lines[self.starts[i] as usize..self.starts[i + 1] as usize]
    }

    #[inline]
    pub fn class(&self, i: usize) -> u32 {
        self.class[i]
    }

    #[inline]
    pub fn triples(&self, i: usize) -> &TripleMask {
        &self.triples[i]
    }

    /// Every labeled space on `n` points, classified by `index` (canonical
    /// lines → class position within level `n`).
    pub fn build(n: usize, index: &ClassIndex) -> Universe {
        let members = labeled_universe(n);
        let tagged: Vec<(u32, TripleMask)> = members
            .par_iter()
            .map(|g| {
                let (canon, _) = canonical_lines(n, g.lines());
                (index[&canon], g.triples())
            })
            .collect();
        let mut out = Universe { triples: Vec::new(), class: Vec::new(), starts: vec![0], lines: Vec::new() };
        for (g, (class, triples)) in members.iter().zip(tagged) {
            out.triples.push(triples);
            out.class.push(class);
            out.lines.extend_from_slice(g.lines());
            out.starts.push(out.lines.len() as u32);
        }
        out
    }
}
