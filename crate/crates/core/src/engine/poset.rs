//! Counting the labeled spaces above a class.
//!
//! `N(f, c)` is the number of labeled spaces `g >= f` (for a fixed labeled
//! representative `f`) that lie in class `c`. Counting pairs `f' <= g` with
//! `f' ≅ f` and `g ≅ c` in two ways gives
//! `N(f, c) = M(c, f) · |Aut f| / |Aut c|`, where `M(c, f)` counts the
//! labeled spaces below the representative of `c` that lie in class `f`.
//! The spaces below `c` are exactly the unions of one linear space per
//! full line of `c`, so `M(c, ·)` comes from a product enumeration.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::universe::ClassIndex;
use crate::error::{Error, Result};
use crate::incidence::{canonical_lines, labeled_universe, points_of, ClassId, ClassLevels, IsoClass, PointSet};

const CHECKPOINT_FORMAT: &str = "arclab-poset-v1";
const CHUNK: usize = 64;

/// Labeled linear spaces on `k` points for each `k`, built on first use.
struct LocalSpaces {
    by_size: Vec<OnceLock<Vec<Vec<PointSet>>>>,
}

impl LocalSpaces {
    fn new(max: usize) -> Self {
        LocalSpaces { by_size: (0..=max).map(|_| OnceLock::new()).collect() }
    }

    fn get(&self, k: usize) -> &[Vec<PointSet>] {
        self.by_size[k].get_or_init(|| labeled_universe(k).into_iter().map(|f| f.lines().to_vec()).collect())
    }
}

#[derive(Clone, Debug)]
pub struct PosetCounts {
    below: Vec<Vec<(u32, u64)>>,
    above: Vec<Vec<(u32, u64)>>,
}

#[derive(Serialize, Deserialize)]
struct Chunk {
    format: String,
    n: usize,
    classes: Vec<ClassId>,
    tallies: Vec<Vec<(u32, u64)>>,
}

fn chunk_path(dir: &Path, n: usize, start: usize) -> PathBuf {
    dir.join(format!("poset-n{n}-{start:06}.json"))
}

fn load_chunk(path: &Path, n: usize, classes: &[IsoClass]) -> Option<Vec<Vec<(u32, u64)>>> {
    let text = fs::read_to_string(path).ok()?;
    let chunk: Chunk = serde_json::from_str(&text).ok()?;
    let ids: Vec<ClassId> = classes.iter().map(|c| c.class_id).collect();
    (chunk.format == CHECKPOINT_FORMAT && chunk.n == n && chunk.classes == ids).then_some(chunk.tallies)
}

pub(crate) fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

impl PosetCounts {
    /// Counts for the classes of level `n`. With a checkpoint directory,
    /// finished chunks are stored there and reused on the next run.
    pub(crate) fn compute(
        levels: &ClassLevels,
        n: usize,
        index: &ClassIndex,
        checkpoint: Option<&Path>,
    ) -> Result<Self> {
        let classes = levels.level(n);
        let local = LocalSpaces::new(n);
        let mut below = Vec::with_capacity(classes.len());
        for start in (0..classes.len()).step_by(CHUNK) {
            let part = &classes[start..(start + CHUNK).min(classes.len())];
            let path = checkpoint.map(|d| chunk_path(d, n, start));
            if let Some(tallies) = path.as_deref().and_then(|p| load_chunk(p, n, part)) {
                below.extend(tallies);
                continue;
            }
            let tallies: Vec<Vec<(u32, u64)>> = part
                .par_iter()
                .map(|c| downset_tally(c.canon.lines(), n, levels, index, &local))
                .collect::<Result<_>>()?;
            if let Some(p) = &path {
                let chunk = Chunk {
                    format: CHECKPOINT_FORMAT.into(),
                    n,
                    classes: part.iter().map(|c| c.class_id).collect(),
                    tallies: tallies.clone(),
                };
                write_atomic(p, &serde_json::to_string(&chunk)?)?;
            }
            below.extend(tallies);
        }
        Self::from_below(classes, below)
    }

    fn from_below(classes: &[IsoClass], below: Vec<Vec<(u32, u64)>>) -> Result<Self> {
        let mut above = vec![Vec::new(); classes.len()];
        for (c, tally) in below.iter().enumerate() {
            for &(f, m) in tally {
                if f as usize == c {
                    continue;
                }
                let num = m as u128 * classes[f as usize].aut_order as u128;
                let den = classes[c].aut_order as u128;
                if !num.is_multiple_of(den) {
                    return Err(Error::Internal(format!(
                        "non-integral count of {} above {}",
                        classes[c].class_id, classes[f as usize].class_id
                    )));
                }
                above[f as usize].push((c as u32, (num / den) as u64));
            }
        }
        Ok(PosetCounts { below, above })
    }

    /// `(c, N(f, c))` for every class `c` strictly above class `f`.
    pub fn above(&self, f: usize) -> &[(u32, u64)] {
        &self.above[f]
    }

    /// `(f, M(c, f))` for every class `f` at or below class `c`.
    pub fn below(&self, c: usize) -> &[(u32, u64)] {
        &self.below[c]
    }
}

/// `M(c, ·)` for the class with full lines `lines` on `n` points.
fn downset_tally(
    lines: &[PointSet],
    n: usize,
    levels: &ClassLevels,
    index: &ClassIndex,
    local: &LocalSpaces,
) -> Result<Vec<(u32, u64)>> {
    // A line meeting no other line can be filled in up to isomorphism: any
    // permutation of its points extends to a relabeling of the whole space.
    let factors: Vec<Vec<(Vec<PointSet>, u64)>> = lines
        .iter()
        .enumerate()
        .map(|(i, &l)| {
            let pts: Vec<usize> = points_of(l).collect();
            let map = |s: PointSet| points_of(s).fold(0 as PointSet, |acc, p| acc | 1 << pts[p]);
            let isolated = lines.iter().enumerate().all(|(j, &m)| j == i || m & l == 0);
            if isolated {
                levels
                    .level(pts.len())
                    .iter()
                    .map(|d| (d.canon.lines().iter().map(|&s| map(s)).collect(), d.labelings))
                    .collect()
            } else {
                local.get(pts.len()).iter().map(|ls| (ls.iter().map(|&s| map(s)).collect(), 1)).collect()
            }
        })
        .collect();
    let mut tally: HashMap<u32, u64> = HashMap::new();
    let mut pos = vec![0usize; factors.len()];
    let mut buf: Vec<PointSet> = Vec::with_capacity(n * n);
    loop {
        buf.clear();
        let mut weight = 1u64;
        for (f, &i) in factors.iter().zip(&pos) {
            buf.extend_from_slice(&f[i].0);
            weight *= f[i].1;
        }
        let (canon, _) = canonical_lines(n, &buf);
        let idx = *index
            .get(&canon)
            .ok_or_else(|| Error::Internal(format!("space below a class is missing from level {n}")))?;
        *tally.entry(idx).or_default() += weight;
        let mut k = 0;
        loop {
            if k == factors.len() {
                let mut out: Vec<(u32, u64)> = tally.into_iter().collect();
                out.sort_unstable();
                return Ok(out);
            }
            pos[k] += 1;
            if pos[k] < factors[k].len() {
                break;
            }
            pos[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::incidence::LinearSpaceFunction;

    fn index_of(levels: &ClassLevels, n: usize) -> ClassIndex {
        levels.level(n).iter().enumerate().map(|(i, c)| (c.canon.lines().to_vec(), i as u32)).collect()
    }

    #[test]
    fn counts_agree_with_labeled_universe() {
        let levels = ClassLevels::build(6);
        for n in 3..=6 {
            let index = index_of(&levels, n);
            let poset = PosetCounts::compute(&levels, n, &index, None).unwrap();
            let universe: Vec<(LinearSpaceFunction, u32)> = labeled_universe(n)
                .into_iter()
                .map(|g| {
                    let c = index[&canonical_lines(n, g.lines()).0];
                    (g, c)
                })
                .collect();
            for (f, cls) in levels.level(n).iter().enumerate() {
                let mut direct: HashMap<u32, u64> = HashMap::new();
                for (g, c) in &universe {
                    if *c as usize != f && g.is_geq(&cls.canon).unwrap() {
                        *direct.entry(*c).or_default() += 1;
                    }
                }
                let mut direct: Vec<(u32, u64)> = direct.into_iter().collect();
                direct.sort_unstable();
                assert_eq!(poset.above(f), &direct[..], "n = {n}, class {f}");
            }
        }
    }

    #[test]
    fn arc_lies_below_every_labeling_once() {
        let levels = ClassLevels::build(7);
        let index = index_of(&levels, 7);
        let poset = PosetCounts::compute(&levels, 7, &index, None).unwrap();
        let arc = index[&Vec::new()] as usize;
        for (c, cls) in levels.level(7).iter().enumerate() {
            if c != arc {
                assert!(poset.above(arc).contains(&(c as u32, cls.labelings)));
            }
        }
    }

    #[test]
    fn checkpoint_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let levels = ClassLevels::build(7);
        let index = index_of(&levels, 7);
        let first = PosetCounts::compute(&levels, 7, &index, Some(dir.path())).unwrap();
        assert!(chunk_path(dir.path(), 7, 0).exists());
        let second = PosetCounts::compute(&levels, 7, &index, Some(dir.path())).unwrap();
        assert_eq!(first.below, second.below);
    }
}
