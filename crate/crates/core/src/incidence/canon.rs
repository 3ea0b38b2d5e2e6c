//! Canonical forms and automorphism counts.
//!
//! The linear space is turned into a bipartite point/line incidence graph.
//! Points on no full line are interchangeable, as are the points lying on a
//! single full line; both kinds are factored out (the latter as a line
//! colour) before running individualization-refinement on what remains.
//! Every leaf of the search tree yields a relabeled line list and the
//! lexicographically smallest one is the canonical representative. The
//! number of leaves reaching it is the automorphism group order of the
//! incidence graph.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{points_of, popcount, LinearSpaceFunction, PointSet, MAX_POINTS};
use crate::error::{Error, Result};

const MAX_VERTICES: usize = 64;

/// Stable identifier of an isomorphism class: point count plus a 64-bit
/// FNV-1a hash of the canonical line list.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassId {
    n: u8,
    hash: u64,
}

impl ClassId {
    pub fn of_canonical(canon: &LinearSpaceFunction) -> Self {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut feed = |b: u8| {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        };
        feed(canon.n() as u8);
        for &l in canon.lines() {
            for b in l.to_le_bytes() {
                feed(b);
            }
        }
        ClassId { n: canon.n() as u8, hash: h }
    }

    pub fn points(&self) -> usize {
        self.n as usize
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{:016x}", self.n, self.hash)
    }
}

impl fmt::Debug for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ClassId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse { line: 0, msg: format!("bad class id {s:?}") };
        let (n, hash) = s.split_once(':').ok_or_else(bad)?;
        let n: u8 = n.parse().map_err(|_| bad())?;
        if hash.len() != 16 {
            return Err(bad());
        }
        let hash = u64::from_str_radix(hash, 16).map_err(|_| bad())?;
        Ok(ClassId { n, hash })
    }
}

impl Serialize for ClassId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ClassId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassTags {
    pub is_superfiguration: bool,
    pub is_configuration: bool,
    pub num_full_lines: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoClass {
    pub canon: LinearSpaceFunction,
    pub aut_order: u64,
    /// Number of labeled linear spaces in the class, `n! / aut_order`.
    pub labelings: u64,
    pub class_id: ClassId,
    pub tags: ClassTags,
}

impl IsoClass {
    /// `canon` must already be canonical.
    pub fn from_canonical(canon: LinearSpaceFunction, aut_order: u64) -> Self {
        let n = canon.n();
        let labelings = factorial(n) / aut_order;
        let tags = ClassTags {
            is_superfiguration: canon.is_superfiguration(),
            is_configuration: canon.is_configuration(),
            num_full_lines: canon.num_lines(),
        };
        IsoClass { class_id: ClassId::of_canonical(&canon), canon, aut_order, labelings, tags }
    }

    pub fn n(&self) -> usize {
        self.canon.n()
    }

    pub fn is_superfiguration(&self) -> bool {
        self.tags.is_superfiguration
    }
}

/// Classes keyed by identifier.
pub type ClassTable = BTreeMap<ClassId, IsoClass>;

pub(crate) fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

pub fn canonicalize(f: &LinearSpaceFunction) -> IsoClass {
    let (canon, aut) = canonical_form(f);
    IsoClass::from_canonical(canon, aut)
}

/// Canonical representative and automorphism group order.
pub fn canonical_form(f: &LinearSpaceFunction) -> (LinearSpaceFunction, u64) {
    let (lines, aut) = canonical_lines(f.n(), f.lines());
    (LinearSpaceFunction::from_lines_unchecked(f.n(), lines), aut)
}

#[inline]
fn mix(x: u8) -> u64 {
    let mut z = (x as u64).wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

struct Incidence {
    nv: usize,
    k: usize,
    m: usize,
    adj: [u64; MAX_VERTICES],
    privs: [u8; MAX_VERTICES],
}

struct Best {
    enc: Vec<PointSet>,
    count: u64,
}

/// Canonical line list (sorted) and automorphism group order for a
/// linear space given by its full lines.
pub(crate) fn canonical_lines(n: usize, lines: &[PointSet]) -> (Vec<PointSet>, u64) {
    assert!(n <= MAX_POINTS);
    let m = lines.len();
    let mut idx = [0u8; MAX_POINTS];
    for &l in lines {
        for p in points_of(l) {
            idx[p] += 1;
        }
    }
    let mut core_pos = [u8::MAX; MAX_POINTS];
    let mut k = 0usize;
    let mut singles: PointSet = 0;
    let mut isolated = 0usize;
    for p in 0..n {
        match idx[p] {
            0 => isolated += 1,
            1 => singles |= 1 << p,
            _ => {
                core_pos[p] = k as u8;
                k += 1;
            }
        }
    }
    let nv = k + m;
    assert!(nv <= MAX_VERTICES, "incidence graph too large");
    let mut g = Incidence { nv, k, m, adj: [0; MAX_VERTICES], privs: [0; MAX_VERTICES] };
    for (j, &l) in lines.iter().enumerate() {
        g.privs[j] = popcount(l & singles) as u8;
        for p in points_of(l & !singles) {
            let v = core_pos[p] as usize;
            g.adj[v] |= 1 << (k + j);
            g.adj[k + j] |= 1 << v;
        }
    }

    let mut color = [0u8; MAX_VERTICES];
    for j in 0..m {
        let smaller = (0..m).filter(|&i| g.privs[i] < g.privs[j]).count();
        color[k + j] = (k + smaller) as u8;
    }
    refine(&g, &mut color);
    let mut best = Best { enc: Vec::new(), count: 0 };
    search(&g, &color, &mut best);

    let mut aut = best.count;
    for j in 0..m {
        aut *= factorial(g.privs[j] as usize);
    }
    aut *= factorial(isolated);
    (best.enc, aut)
}

fn cell_count(color: &[u8]) -> usize {
    let mut seen = 0u64;
    for &c in color {
        seen |= 1 << c;
    }
    seen.count_ones() as usize
}

/// Colours are cell start positions; split cells by the multiset of
/// neighbour colours until stable.
fn refine(g: &Incidence, color: &mut [u8; MAX_VERTICES]) {
    let nv = g.nv;
    if nv == 0 {
        return;
    }
    let mut cells = cell_count(&color[..nv]);
    let mut keys = [(0u8, 0u64, 0u8); MAX_VERTICES];
    while cells < nv {
        for v in 0..nv {
            let mut h = 0u64;
            let mut a = g.adj[v];
            while a != 0 {
                let u = a.trailing_zeros() as usize;
                h = h.wrapping_add(mix(color[u]));
                a &= a - 1;
            }
            keys[v] = (color[v], h, v as u8);
        }
        let keys = &mut keys[..nv];
        keys.sort_unstable();
        let mut new_cells = 0;
        let mut start = 0u8;
        for i in 0..nv {
            if i == 0 || keys[i].0 != keys[i - 1].0 || keys[i].1 != keys[i - 1].1 {
                start = i as u8;
                new_cells += 1;
            }
            color[keys[i].2 as usize] = start;
        }
        if new_cells == cells {
            break;
        }
        cells = new_cells;
    }
}

fn search(g: &Incidence, color: &[u8; MAX_VERTICES], best: &mut Best) {
    let nv = g.nv;
    let mut size = [0u8; MAX_VERTICES];
    for &c in &color[..nv] {
        size[c as usize] += 1;
    }
    let target = (0..nv).find(|&c| size[c] >= 2);
    let Some(target) = target else {
        leaf(g, color, best);
        return;
    };
    let target = target as u8;
    for v in 0..nv {
        if color[v] != target {
            continue;
        }
        let mut next = *color;
        for u in 0..nv {
            if u != v && next[u] == target {
                next[u] = target + 1;
            }
        }
        refine(g, &mut next);
        search(g, &next, best);
    }
}

fn leaf(g: &Incidence, color: &[u8; MAX_VERTICES], best: &mut Best) {
    let (k, m) = (g.k, g.m);
    let mut line_at = [0u8; MAX_VERTICES];
    for j in 0..m {
        line_at[color[k + j] as usize - k] = j as u8;
    }
    let mut enc = [0 as PointSet; MAX_VERTICES];
    let mut next = k;
    for pos in 0..m {
        let j = line_at[pos] as usize;
        let mut mask: u32 = 0;
        let mut a = g.adj[k + j];
        while a != 0 {
            let u = a.trailing_zeros() as usize;
            mask |= 1 << color[u];
            a &= a - 1;
        }
        let pr = g.privs[j] as usize;
        mask |= ((1u32 << pr) - 1) << next;
        next += pr;
        enc[pos] = mask as PointSet;
    }
    let enc = &mut enc[..m];
    enc.sort_unstable();
    if best.count == 0 || *enc < best.enc[..] {
        best.enc.clear();
        best.enc.extend_from_slice(enc);
        best.count = 1;
    } else if *enc == best.enc[..] {
        best.count += 1;
    }
}

/// Interchange points and full lines. The dual has one point per full line
/// of `f` and one full line per point of `f` lying on at least three lines.
pub fn dual(f: &LinearSpaceFunction) -> Option<IsoClass> {
    let m = f.num_lines();
    if m == 0 || m > MAX_POINTS {
        return None;
    }
    let mut dual_lines = Vec::new();
    for p in 0..f.n() {
        let through: PointSet =
            f.lines().iter().enumerate().filter(|(_, &l)| l >> p & 1 == 1).fold(0, |acc, (j, _)| acc | 1 << j);
        if popcount(through) >= 3 {
            dual_lines.push(through);
        }
    }
    let d = LinearSpaceFunction::new(m, dual_lines).ok()?;
    Some(canonicalize(&d))
}
