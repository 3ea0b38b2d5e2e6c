//! Coefficients of influence without any weak counts.
//!
//! Start from `A_arc` and repeatedly replace a minimal non-superfiguration
//! `g` by `B_g - Σ_{h > g} A_h`. The `B` terms are set aside; what remains
//! after every non-superfiguration is gone is an integer combination of the
//! superfiguration symbols on the same number of points. Since the
//! rewriting only ever multiplies by upper-set counts, every coefficient is
//! an integer rather than a polynomial.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::poset::{write_atomic, PosetCounts};
use super::universe::ClassIndex;
use crate::error::{Error, Result};
use crate::incidence::{parse_catalogue, write_catalogue, ClassId, ClassLevels, IsoClass};

/// Class-basis coefficient of every superfiguration on `n` points in `C_n`.
///
/// With a checkpoint directory the class list and the partial upper-set
/// counts are stored there, so an interrupted run resumes where it stopped.
pub fn influence(n: usize, checkpoint: Option<&Path>) -> Result<BTreeMap<ClassId, BigInt>> {
    if !(1..=crate::incidence::MAX_ENUMERATION_POINTS).contains(&n) {
        return Err(Error::OutOfRange(format!(
            "influence supports 1..={} points, got {n}",
            crate::incidence::MAX_ENUMERATION_POINTS
        )));
    }
    if let Some(dir) = checkpoint {
        fs::create_dir_all(dir)?;
    }
    let mut levels = ClassLevels::build(n - 1);
    levels.push_level(top_level(&levels, n, checkpoint)?)?;
    let classes = levels.level(n);
    let index: ClassIndex = classes.iter().enumerate().map(|(i, c)| (c.canon.lines().to_vec(), i as u32)).collect();
    let poset = PosetCounts::compute(&levels, n, &index, checkpoint)?;
    influence_from(classes, &poset)
}

fn top_level(levels: &ClassLevels, n: usize, checkpoint: Option<&Path>) -> Result<Vec<IsoClass>> {
    let Some(dir) = checkpoint else {
        return Ok(crate::incidence::next_level(levels.level(n - 1)));
    };
    let path = dir.join(format!("classes-n{n}.txt"));
    if let Ok(text) = fs::read_to_string(&path) {
        if let Ok(entries) = parse_catalogue(&text) {
            if entries.iter().all(|e| e.class.n() == n) {
                return Ok(entries.into_iter().map(|e| e.class).collect());
            }
        }
    }
    let classes = crate::incidence::next_level(levels.level(n - 1));
    write_atomic(&path, &write_catalogue(&classes))?;
    Ok(classes)
}

/// The substitution itself, given the classes of one level and their upper-set counts.
pub fn influence_from(classes: &[IsoClass], poset: &PosetCounts) -> Result<BTreeMap<ClassId, BigInt>> {
    let arc = classes
        .iter()
        .position(|c| c.canon.is_arc())
        .ok_or_else(|| Error::Precondition("level has no arc class".into()))?;
    // Minimal first: the triple count strictly increases upward, and ties
    // are broken by canonical order, which is the order of `classes`.
    let mut order: Vec<usize> = (0..classes.len()).filter(|&i| !classes[i].is_superfiguration()).collect();
    order.sort_by_key(|&i| (classes[i].canon.triple_count(), i));

    let mut coef = vec![BigInt::zero(); classes.len()];
    coef[arc] = BigInt::from(1);
    for g in order {
        if coef[g].is_zero() {
            continue;
        }
        let k = std::mem::take(&mut coef[g]);
        for &(h, count) in poset.above(g) {
            coef[h as usize] -= &k * count;
        }
    }

    let mut out = BTreeMap::new();
    for (c, cls) in classes.iter().enumerate().filter(|(_, c)| c.is_superfiguration()) {
        let (q, r) = coef[c].div_rem(&BigInt::from(cls.labelings));
        if !r.is_zero() {
            return Err(Error::InexactConversion(cls.class_id));
        }
        out.insert(cls.class_id, q);
    }
    Ok(out)
}
