//! End-to-end checks of derived formulas against brute-force counts.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;

use super::Cache;
use crate::closedform;
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::incidence::{ClassFilter, ClassId};
use crate::oracle;
use crate::plane::{prime_power, FiniteField, ProjectivePlane};
use crate::symbolic::{Basis, CountExpression, QPoly};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn eq<T: PartialEq + std::fmt::Display>(name: String, got: T, want: T) -> Self {
        let passed = got == want;
        let detail = if passed { format!("{got}") } else { format!("got {got}, expected {want}") };
        Check { name, passed, detail }
    }
}

pub fn run(max_q: u64, max_points: usize, cache: &Cache) -> Result<Vec<Check>> {
    if max_points > crate::engine::MAX_FORMULA_POINTS {
        return Err(Error::OutOfRange(format!(
            "formulas go up to {} points, got {max_points}",
            crate::engine::MAX_FORMULA_POINTS
        )));
    }
    let orders: Vec<u64> = (2..=max_q).filter(|&q| prime_power(q).is_some()).collect();
    let planes: Vec<ProjectivePlane> =
        orders.iter().map(|&q| FiniteField::of_order(q).map(|f| ProjectivePlane::pg2(&f))).collect::<Result<_>>()?;
    let mut engine = Engine::new();
    let mut checks = Vec::new();

    for n in 1..=max_points.min(6) {
        let formula = engine.arc_formula(n)?;
        let want = CountExpression::polynomial(closedform::cn_small(n)?, Basis::Class);
        checks.push(Check::eq(format!("C_{n} is a single polynomial"), formula.to_string(), want.to_string()));
    }

    for n in 1..=max_points {
        engine.compute_to(n)?;
        let t = engine.table(n).expect("level computed above");
        let falling = CountExpression::polynomial(QPoly::falling_points(n), Basis::Labeled);
        checks.push(Check::eq(
            format!("B_arc telescopes for n = {n}"),
            t.weak(&crate::incidence::LinearSpaceFunction::arc(n))?.to_string(),
            falling.to_string(),
        ));
    }

    for n in 1..=max_points {
        let formula = engine.arc_formula(n)?;
        for plane in &planes {
            let values = class_counts(formula.terms().keys().copied(), plane, cache)?;
            let q = BigInt::from(plane.order());
            checks.push(Check::eq(
                format!("C_{n} on {}", plane.label()),
                formula.eval(&q, &values)?,
                oracle::count_arcs(plane, n),
            ));
        }
    }

    for n in 7..=max_points {
        let labels = cache.labels(n)?;
        let classes = cache.classes(n, ClassFilter::Superfigurations)?;
        for (label, id) in &labels {
            let cls = classes.iter().find(|c| c.class_id == *id).ok_or(Error::UnknownClass(*id))?;
            for plane in &planes {
                checks.push(Check::eq(
                    format!("A_{label} on {}", plane.label()),
                    oracle::count_strong(plane, cls).class_count,
                    closedform::as_closed(*label, plane.order() as u64)?,
                ));
            }
        }
    }

    let iss_orders: Vec<u64> = (2..=121).filter(|&q| prime_power(q).is_some()).collect();
    let agree = iss_orders
        .iter()
        .map(|&q| Ok(closedform::c9_iss(q)? == closedform::c9_from_closed_forms(q)?))
        .collect::<Result<Vec<bool>>>()?;
    checks.push(Check {
        name: "C_9 two ways for prime powers up to 121".into(),
        passed: agree.iter().all(|&b| b),
        detail: format!("{} of {} orders agree", agree.iter().filter(|&&b| b).count(), agree.len()),
    });
    Ok(checks)
}

/// Brute-force class counts of the given superfigurations on one plane.
fn class_counts(
    ids: impl Iterator<Item = ClassId>,
    plane: &ProjectivePlane,
    cache: &Cache,
) -> Result<BTreeMap<ClassId, BigInt>> {
    let mut out = BTreeMap::new();
    for id in ids {
        let cls = cache
            .classes(id.points(), ClassFilter::Superfigurations)?
            .into_iter()
            .find(|c| c.class_id == id)
            .ok_or(Error::UnknownClass(id))?;
        out.insert(id, oracle::count_strong(plane, &cls).class_count);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        let checks = run(3, 7, &Cache::disabled()).unwrap();
        assert!(checks.len() > 20);
        for c in &checks {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
