use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::QPoly;
use crate::error::{Error, Result};
use crate::incidence::{ClassId, ClassTable};

/// What an `A`-symbol counts: realizations of one labeled representative,
/// or of the whole isomorphism class (labeled count times labelings).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Labeled,
    Class,
}

/// `base(q) + Σ_s terms[s](q) · A_s`, linear in the superfiguration counts `A_s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountExpression {
    base: QPoly,
    terms: BTreeMap<ClassId, QPoly>,
    basis: Basis,
}

impl CountExpression {
    pub fn zero(basis: Basis) -> Self {
        CountExpression { base: QPoly::zero(), terms: BTreeMap::new(), basis }
    }

    pub fn polynomial(base: QPoly, basis: Basis) -> Self {
        CountExpression { base, terms: BTreeMap::new(), basis }
    }

    /// The bare symbol `A_s`.
    pub fn symbol(class: ClassId, basis: Basis) -> Self {
        let mut e = Self::zero(basis);
        e.terms.insert(class, QPoly::one());
        e
    }

    pub fn from_parts(base: QPoly, terms: BTreeMap<ClassId, QPoly>, basis: Basis) -> Self {
        let terms = terms.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        CountExpression { base, terms, basis }
    }

    pub fn base(&self) -> &QPoly {
        &self.base
    }

    pub fn terms(&self) -> &BTreeMap<ClassId, QPoly> {
        &self.terms
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn coefficient(&self, class: ClassId) -> QPoly {
        self.terms.get(&class).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.base.is_zero() && self.terms.is_empty()
    }

    fn check_basis(&self, other: &Self) -> Result<()> {
        if self.basis == other.basis {
            Ok(())
        } else {
            Err(Error::BasisMismatch)
        }
    }

    /// `self += k · other`
    pub fn add_scaled(&mut self, other: &Self, k: &QPoly) -> Result<()> {
        self.check_basis(other)?;
        self.base.add_scaled(&other.base, k);
        for (id, p) in &other.terms {
            let entry = self.terms.entry(*id).or_default();
            entry.add_scaled(p, k);
            if entry.is_zero() {
                self.terms.remove(id);
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.add_scaled(other, &QPoly::one())?;
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.add_scaled(other, &QPoly::constant(-1))?;
        Ok(out)
    }

    pub fn scale_by_poly(&self, k: &QPoly) -> Self {
        let mut out = Self::zero(self.basis);
        out.add_scaled(self, k).expect("same basis");
        out
    }

    /// Replace `A_class` by `replacement` everywhere.
    pub fn substitute(&self, class: ClassId, replacement: &Self) -> Result<Self> {
        self.check_basis(replacement)?;
        if replacement.terms.contains_key(&class) {
            return Err(Error::SelfReference(class));
        }
        let mut out = self.clone();
        if let Some(k) = out.terms.remove(&class) {
            out.add_scaled(replacement, &k)?;
        }
        Ok(out)
    }

    /// Convert labeled-count coefficients to class-count coefficients by
    /// dividing each by the number of labelings of its class.
    pub fn to_class_basis(&self, classes: &ClassTable) -> Result<Self> {
        if self.basis == Basis::Class {
            return Ok(self.clone());
        }
        let mut terms = BTreeMap::new();
        for (id, p) in &self.terms {
            let cls = classes.get(id).ok_or(Error::UnknownClass(*id))?;
            let q = p.div_exact(&BigInt::from(cls.labelings)).ok_or(Error::InexactConversion(*id))?;
            terms.insert(*id, q);
        }
        Ok(CountExpression { base: self.base.clone(), terms, basis: Basis::Class })
    }

    /// Inverse of [`to_class_basis`](Self::to_class_basis).
    pub fn to_labeled_basis(&self, classes: &ClassTable) -> Result<Self> {
        if self.basis == Basis::Labeled {
            return Ok(self.clone());
        }
        let mut terms = BTreeMap::new();
        for (id, p) in &self.terms {
            let cls = classes.get(id).ok_or(Error::UnknownClass(*id))?;
            terms.insert(*id, p.scale(&BigInt::from(cls.labelings)));
        }
        Ok(CountExpression { base: self.base.clone(), terms, basis: Basis::Labeled })
    }

    /// Evaluate at `q` with the given symbol values (in this expression's basis).
    pub fn eval(&self, q: &BigInt, values: &BTreeMap<ClassId, BigInt>) -> Result<BigInt> {
        let mut total = self.base.eval(q);
        for (id, p) in &self.terms {
            let v = values.get(id).ok_or(Error::UnknownClass(*id))?;
            total += p.eval(q) * v;
        }
        Ok(total)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("expressions always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let e: Self = serde_json::from_str(text)?;
        Ok(Self::from_parts(e.base, e.terms, e.basis))
    }

    fn render(&self, latex: bool, name: &dyn Fn(ClassId) -> String) -> String {
        let mut out = self.base.to_string();
        if latex {
            out = self.base.to_latex();
        }
        let mut terms: Vec<(String, &ClassId, &QPoly)> = self.terms.iter().map(|(id, p)| (name(*id), id, p)).collect();
        // Smaller spaces first, then names in natural order (`9_3` before `9_10`).
        terms.sort_by(|a, b| (a.1.points(), a.0.len(), &a.0).cmp(&(b.1.points(), b.0.len(), &b.0)));
        for (label, _, p) in terms {
            let sym = if latex { format!("A_{{{label}}}") } else { format!("A[{label}]") };
            let (neg, mag) =
                if p.is_constant() && p.coeff(0) < BigInt::from(0) { (true, -p) } else { (false, p.clone()) };
            let factor = if mag == QPoly::one() { String::new() } else { format!("{} ", mag.as_factor(latex)) };
            let factor = if latex { factor.trim_end().to_string() } else { factor };
            if out == "0" {
                out = format!("{}{factor}{sym}", if neg { "-" } else { "" });
            } else {
                out.push_str(&format!(" {} {factor}{sym}", if neg { '-' } else { '+' }));
            }
        }
        out
    }

    /// LaTeX rendering; `name` maps class ids to symbol subscripts.
    pub fn to_latex(&self, name: &dyn Fn(ClassId) -> String) -> String {
        self.render(true, name)
    }

    pub fn to_text(&self, name: &dyn Fn(ClassId) -> String) -> String {
        self.render(false, name)
    }
}

impl fmt::Display for CountExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(&|id| id.to_string()))
    }
}
