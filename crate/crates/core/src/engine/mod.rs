//! Arc-count formulas by induction on the number of points.
//!
//! For every linear space `f` on `n` points the engine keeps `A_f`, the
//! number of strong realizations in a plane of order `q`, as an expression
//! linear in the superfiguration symbols. Weak counts `B_f` come from level
//! `n - 1` by adding one point of index at most 2; strong counts follow by
//! peeling off the spaces strictly above `f`:
//! `A_f = B_f - Σ_{g > f} A_g`. Superfigurations, where no point can be
//! removed, become fresh symbols.

mod influence;
mod mu;
mod poset;
mod universe;

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::incidence::{canonical_lines, ClassId, ClassLevels, ClassTable, IsoClass, LinearSpaceFunction};
use crate::symbolic::{Basis, CountExpression, QPoly};
use poset::write_atomic;
use universe::{ClassIndex, Universe};

pub use influence::influence;
pub use mu::{mu, removable_points, removal_point};
pub use poset::PosetCounts;

/// Largest point count for [`arc_formula`].
pub const MAX_FORMULA_POINTS: usize = 9;

const CHECKPOINT_FORMAT: &str = concat!("arclab-level-", env!("CARGO_PKG_VERSION"));

/// Strong and weak counts for every class on `n` points, in the labeled basis.
pub struct LevelTable {
    n: usize,
    classes: Vec<IsoClass>,
    index: ClassIndex,
    by_id: HashMap<ClassId, usize>,
    strong: Vec<CountExpression>,
    weak: Vec<Option<CountExpression>>,
    universe: OnceLock<Universe>,
}

impl LevelTable {
    fn new(n: usize, classes: Vec<IsoClass>, strong: Vec<CountExpression>, weak: Vec<Option<CountExpression>>) -> Self {
        let index = class_index(&classes);
        let by_id = classes.iter().enumerate().map(|(i, c)| (c.class_id, i)).collect();
        LevelTable { n, classes, index, by_id, strong, weak, universe: OnceLock::new() }
    }

    /// The table for the empty space: one realization.
    fn base() -> Self {
        let empty = IsoClass::from_canonical(LinearSpaceFunction::arc(0), 1);
        let one = CountExpression::polynomial(QPoly::one(), Basis::Labeled);
        LevelTable::new(0, vec![empty], vec![one.clone()], vec![Some(one)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn classes(&self) -> &[IsoClass] {
        &self.classes
    }

    fn position(&self, f: &LinearSpaceFunction) -> Result<usize> {
        if f.n() != self.n {
            return Err(Error::PointCountMismatch(f.n(), self.n));
        }
        let (canon, _) = canonical_lines(f.n(), f.lines());
        self.index
            .get(&canon)
            .map(|&i| i as usize)
            .ok_or_else(|| Error::Internal(format!("[{f}] has no class in level {}", self.n)))
    }

    fn position_of_id(&self, id: ClassId) -> Result<usize> {
        self.by_id.get(&id).copied().ok_or(Error::UnknownClass(id))
    }

    /// `A_f` for a labeled `f` (depends only on its class).
    pub fn strong(&self, f: &LinearSpaceFunction) -> Result<&CountExpression> {
        Ok(&self.strong[self.position(f)?])
    }

    pub fn strong_of_class(&self, id: ClassId) -> Result<&CountExpression> {
        Ok(&self.strong[self.position_of_id(id)?])
    }

    /// `B_f` for a labeled `f`; superfigurations have none.
    pub fn weak(&self, f: &LinearSpaceFunction) -> Result<&CountExpression> {
        self.weak[self.position(f)?].as_ref().ok_or_else(|| Error::Superfiguration(f.to_string()))
    }

    pub fn weak_of_class(&self, id: ClassId) -> Result<Option<&CountExpression>> {
        Ok(self.weak[self.position_of_id(id)?].as_ref())
    }

    /// `A` of the arc on `n` points.
    pub fn arc(&self) -> &CountExpression {
        self.strong(&LinearSpaceFunction::arc(self.n)).expect("every level contains the arc")
    }

    fn universe(&self) -> &Universe {
        self.universe.get_or_init(|| Universe::build(self.n, &self.index))
    }
}

fn class_index(classes: &[IsoClass]) -> ClassIndex {
    classes.iter().enumerate().map(|(i, c)| (c.canon.lines().to_vec(), i as u32)).collect()
}

/// `B_f` using the default removal point (smallest index, then smallest label).
pub fn weak_expr(f: &LinearSpaceFunction, prev: &LevelTable) -> Result<CountExpression> {
    let p = mu::removal_point(f).ok_or_else(|| Error::Superfiguration(f.to_string()))?;
    weak_expr_removing(f, p, prev)
}

/// `B_f = Σ_{g >= f'} μ(g, f) A_g` where `f'` is `f` without point `p`.
pub fn weak_expr_removing(f: &LinearSpaceFunction, p: usize, prev: &LevelTable) -> Result<CountExpression> {
    if f.n() != prev.n + 1 {
        return Err(Error::PointCountMismatch(f.n(), prev.n + 1));
    }
    if f.is_superfiguration() {
        return Err(Error::Superfiguration(f.to_string()));
    }
    let removal = mu::Removal::of(f, p)?;
    let below = f.restrict(p)?.triples();
    let universe = prev.universe();
    let mut acc = vec![[0i64; 3]; prev.classes.len()];
    for i in 0..universe.len() {
        if universe.triples(i).contains_all(&below) {
            let m = mu::mu_coeffs(universe.lines(i), f.n(), removal);
            let a = &mut acc[universe.class(i) as usize];
            for k in 0..3 {
                a[k] += m[k];
            }
        }
    }
    let mut out = CountExpression::zero(Basis::Labeled);
    for (c, m) in acc.iter().enumerate() {
        if *m != [0; 3] {
            out.add_scaled(&prev.strong[c], &QPoly::from_i64s(m))?;
        }
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
struct LevelCheckpoint {
    format: String,
    n: usize,
    classes: Vec<ClassId>,
    strong: Vec<CountExpression>,
    weak: Vec<Option<CountExpression>>,
}

fn level_path(dir: &Path, n: usize) -> PathBuf {
    dir.join(format!("level-n{n}.json"))
}

fn load_level(dir: &Path, n: usize, classes: &[IsoClass]) -> Option<LevelTable> {
    let text = fs::read_to_string(level_path(dir, n)).ok()?;
    let saved: LevelCheckpoint = serde_json::from_str(&text).ok()?;
    let ids: Vec<ClassId> = classes.iter().map(|c| c.class_id).collect();
    let valid = saved.format == CHECKPOINT_FORMAT
        && saved.n == n
        && saved.classes == ids
        && saved.strong.len() == ids.len()
        && saved.weak.len() == ids.len();
    valid.then(|| LevelTable::new(n, classes.to_vec(), saved.strong, saved.weak))
}

fn save_level(dir: &Path, table: &LevelTable) -> Result<()> {
    let saved = LevelCheckpoint {
        format: CHECKPOINT_FORMAT.into(),
        n: table.n,
        classes: table.classes.iter().map(|c| c.class_id).collect(),
        strong: table.strong.clone(),
        weak: table.weak.clone(),
    };
    fs::create_dir_all(dir)?;
    write_atomic(&level_path(dir, table.n), &serde_json::to_string(&saved)?)
}

/// Level `n` from level `n - 1`. Classes are processed in batches of equal
/// collinear-triple count, from the largest down, so every space strictly
/// above a class is finished before the class itself.
pub fn level_compute(levels: &ClassLevels, prev: &LevelTable, checkpoint: Option<&Path>) -> Result<LevelTable> {
    let n = prev.n + 1;
    if levels.max() < n {
        return Err(Error::Precondition(format!("classes on {n} points have not been enumerated")));
    }
    let classes = levels.level(n);
    let index = class_index(classes);
    let poset = PosetCounts::compute(levels, n, &index, checkpoint)?;
    let weak: Vec<Option<CountExpression>> = classes
        .par_iter()
        .map(|c| (!c.is_superfiguration()).then(|| weak_expr(&c.canon, prev)).transpose())
        .collect::<Result<_>>()?;

    let mut order: Vec<usize> = (0..classes.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(classes[i].canon.triple_count()));
    let mut strong: Vec<Option<CountExpression>> = vec![None; classes.len()];
    for batch in order.chunk_by(|&a, &b| classes[a].canon.triple_count() == classes[b].canon.triple_count()) {
        let done: Vec<CountExpression> = batch
            .par_iter()
            .map(|&f| {
                let Some(b) = &weak[f] else {
                    return Ok(CountExpression::symbol(classes[f].class_id, Basis::Labeled));
                };
                let mut a = b.clone();
                for &(c, count) in poset.above(f) {
                    let above = strong[c as usize]
                        .as_ref()
                        .ok_or_else(|| Error::Internal("class above was not processed first".into()))?;
                    a.add_scaled(above, &QPoly::constant(-(count as i64)))?;
                }
                Ok(a)
            })
            .collect::<Result<_>>()?;
        for (&f, a) in batch.iter().zip(done) {
            strong[f] = Some(a);
        }
    }
    let strong = strong.into_iter().map(|a| a.expect("every class is in one batch")).collect();
    Ok(LevelTable::new(n, classes.to_vec(), strong, weak))
}

/// Level tables built on demand, optionally persisted to a checkpoint directory.
pub struct Engine {
    levels: ClassLevels,
    tables: Vec<LevelTable>,
    symbols: ClassTable,
    checkpoint: Option<PathBuf>,
}

impl Default for Engine {
    fn default() -> Self {
        Self::new()
    }
}

impl Engine {
    pub fn new() -> Self {
        Engine {
            levels: ClassLevels::build(0),
            tables: vec![LevelTable::base()],
            symbols: ClassTable::new(),
            checkpoint: None,
        }
    }

    /// Store each finished level (and partial poset counts) under `dir`,
    /// and reuse whatever a previous run left there.
    pub fn with_checkpoint(dir: impl Into<PathBuf>) -> Self {
        Engine { checkpoint: Some(dir.into()), ..Self::new() }
    }

    pub fn compute_to(&mut self, n: usize) -> Result<()> {
        if n > MAX_FORMULA_POINTS {
            return Err(Error::OutOfRange(format!(
                "formulas are supported up to {MAX_FORMULA_POINTS} points, got {n}"
            )));
        }
        if let Some(dir) = &self.checkpoint {
            fs::create_dir_all(dir)?;
        }
        self.levels.extend_to(n);
        while self.tables.len() <= n {
            let k = self.tables.len();
            let dir = self.checkpoint.as_deref();
            let table = match dir.and_then(|d| load_level(d, k, self.levels.level(k))) {
                Some(t) => t,
                None => {
                    let t = level_compute(&self.levels, self.tables.last().expect("level 0 exists"), dir)?;
                    if let Some(d) = dir {
                        save_level(d, &t)?;
                    }
                    t
                }
            };
            for c in table.classes.iter().filter(|c| c.is_superfiguration()) {
                self.symbols.insert(c.class_id, c.clone());
            }
            self.tables.push(table);
        }
        Ok(())
    }

    pub fn table(&self, n: usize) -> Option<&LevelTable> {
        self.tables.get(n)
    }

    /// Every superfiguration class met so far, the symbols of all expressions.
    pub fn symbols(&self) -> &ClassTable {
        &self.symbols
    }

    /// `C_n` in the class basis.
    pub fn arc_formula(&mut self, n: usize) -> Result<CountExpression> {
        if n == 0 {
            return Err(Error::OutOfRange("formulas start at one point".into()));
        }
        self.compute_to(n)?;
        self.tables[n].arc().to_class_basis(&self.symbols)
    }
}

/// `C_n(Π) = p(q) + Σ_s p_s(q) A_s(Π)`, with `A_s` counting the whole class `s`.
pub fn arc_formula(n: usize) -> Result<CountExpression> {
    Engine::new().arc_formula(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn lsf(n: usize, lines: &[&[usize]]) -> LinearSpaceFunction {
        let masks = lines.iter().map(|l| l.iter().fold(0u16, |m, &p| m | 1 << p)).collect();
        LinearSpaceFunction::new(n, masks).unwrap()
    }

    fn engine(n: usize) -> Engine {
        let mut e = Engine::new();
        e.compute_to(n).unwrap();
        e
    }

    fn poly(desc: &[i64]) -> QPoly {
        QPoly::from_i64s_desc(desc)
    }

    fn product(factors: &[QPoly]) -> QPoly {
        factors.iter().fold(QPoly::one(), |a, b| &a * b)
    }

    #[test]
    fn weak_counts_on_three_points() {
        let e = engine(2);
        let prev = e.table(2).unwrap();
        let arc = weak_expr(&LinearSpaceFunction::arc(3), prev).unwrap();
        assert_eq!(arc, CountExpression::polynomial(QPoly::falling_points(3), Basis::Labeled));
        let line = weak_expr(&lsf(3, &[&[0, 1, 2]]), prev).unwrap();
        let expected = product(&[poly(&[1, 1, 1]), poly(&[1, 1, 0]), poly(&[1, -1])]);
        assert_eq!(line.base(), &expected);
        assert_eq!(line.base().eval_i64(2), BigInt::from(42));
    }

    #[test]
    fn fano_has_no_weak_expression() {
        let e = engine(6);
        let err = weak_expr(&crate::incidence::tests::fano(), e.table(6).unwrap()).unwrap_err();
        assert!(matches!(err, Error::Superfiguration(_)));
    }

    #[test]
    fn small_arc_formulas_are_polynomials() {
        let mut e = Engine::new();
        let base = product(&[poly(&[1, 1, 1]), poly(&[1, 1, 0]), poly(&[1, 0, 0])]);
        assert_eq!(e.arc_formula(3).unwrap().base(), &base);
        let c4 = &base * &product(&[poly(&[1, -1]), poly(&[1, -1])]);
        let c4f = e.arc_formula(4).unwrap();
        assert!(c4f.terms().is_empty());
        assert_eq!(c4f.base(), &c4);
        let c5 = &c4 * &product(&[poly(&[1, -2]), poly(&[1, -3])]);
        assert_eq!(e.arc_formula(5).unwrap().base(), &c5);
        let c6 = &c5 * &poly(&[1, -9, 21]);
        let c6f = e.arc_formula(6).unwrap();
        assert!(c6f.terms().is_empty());
        assert_eq!(c6f.base(), &c6);
    }

    #[test]
    fn seven_points_depend_on_fano_once() {
        let mut e = Engine::new();
        let c7 = e.arc_formula(7).unwrap();
        let c4 = product(&[poly(&[1, 1, 1]), poly(&[1, 1, 0]), poly(&[1, 0, 0]), poly(&[1, -1]), poly(&[1, -1])]);
        let base = &c4 * &product(&[poly(&[1, -3]), poly(&[1, -5]), poly(&[1, -20, 148, -468, 498])]);
        assert_eq!(c7.base(), &base);
        assert_eq!(c7.terms().len(), 1);
        let fano = crate::incidence::canonicalize(&crate::incidence::tests::fano()).class_id;
        assert_eq!(c7.coefficient(fano), QPoly::constant(-1));
    }

    #[test]
    fn strong_sums_telescope() {
        let e = engine(7);
        for n in 1..=7 {
            let t = e.table(n).unwrap();
            let mut total = CountExpression::zero(Basis::Labeled);
            for (c, a) in t.classes.iter().zip(&t.strong) {
                total.add_scaled(a, &QPoly::constant(c.labelings as i64)).unwrap();
            }
            assert_eq!(total, CountExpression::polynomial(QPoly::falling_points(n), Basis::Labeled), "n = {n}");
            assert_eq!(t.weak(&LinearSpaceFunction::arc(n)).unwrap(), &total);
        }
    }

    #[test]
    fn removal_point_does_not_matter() {
        let e = engine(6);
        for n in 1..=7 {
            let prev = e.table(n - 1).unwrap();
            for c in crate::incidence::ClassLevels::build(n).level(n) {
                if c.is_superfiguration() {
                    continue;
                }
                let reference = weak_expr(&c.canon, prev).unwrap();
                for p in mu::removable_points(&c.canon) {
                    assert_eq!(weak_expr_removing(&c.canon, p, prev).unwrap(), reference, "{} removing {p}", c.canon);
                }
            }
        }
    }

    #[test]
    fn isomorphic_spaces_share_expressions() {
        let e = engine(6);
        let f = lsf(6, &[&[0, 1, 2], &[2, 3, 4]]);
        let g = f.relabel(&[5, 3, 0, 1, 4, 2]).unwrap();
        let prev = e.table(5).unwrap();
        assert_eq!(weak_expr(&f, prev).unwrap(), weak_expr(&g, prev).unwrap());
        let t = e.table(6).unwrap();
        assert_eq!(t.strong(&f).unwrap(), t.strong(&g).unwrap());
    }

    #[test]
    fn superfigurations_are_their_own_symbols() {
        let e = engine(7);
        let fano = crate::incidence::tests::fano();
        let id = crate::incidence::canonicalize(&fano).class_id;
        assert_eq!(e.table(7).unwrap().strong(&fano).unwrap(), &CountExpression::symbol(id, Basis::Labeled));
    }

    #[test]
    fn checkpoints_resume() {
        let dir = tempfile::tempdir().unwrap();
        let mut first = Engine::with_checkpoint(dir.path());
        let c7 = first.arc_formula(7).unwrap();
        assert!(level_path(dir.path(), 7).exists());
        let mut second = Engine::with_checkpoint(dir.path());
        assert_eq!(second.arc_formula(7).unwrap(), c7);
    }

    #[test]
    fn formula_range() {
        assert!(matches!(arc_formula(MAX_FORMULA_POINTS + 1), Err(Error::OutOfRange(_))));
        assert!(matches!(arc_formula(0), Err(Error::OutOfRange(_))));
    }
}
