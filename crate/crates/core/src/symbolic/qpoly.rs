use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Polynomial in `q` with arbitrary-precision integer coefficients,
/// constant term first and without trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QPoly {
    coeffs: Vec<BigInt>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    /// The indeterminate `q`.
    pub fn q() -> Self {
        Self::from_coeffs(vec![BigInt::zero(), BigInt::one()])
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::from_coeffs(vec![c.into()])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Coefficients listed from the leading term down to the constant.
    pub fn from_i64s_desc(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().rev().map(|&c| BigInt::from(c)).collect())
    }

    /// `q^2 + q + 1 - c`, the number of points of a plane minus `c`.
    pub fn points_minus(c: i64) -> Self {
        Self::from_i64s(&[1 - c, 1, 1])
    }

    /// `q + 1 - c`, the number of points of a line minus `c`.
    pub fn line_minus(c: i64) -> Self {
        Self::from_i64s(&[1 - c, 1])
    }

    /// `(q^2+q+1)(q^2+q)...(q^2+q+2-n)`: ordered `n`-tuples of distinct points.
    pub fn falling_points(n: usize) -> Self {
        (0..n).fold(Self::one(), |acc, i| &acc * &Self::points_minus(i as i64))
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        QPoly { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Divide every coefficient by `d`, if all divisions are exact.
    pub fn div_exact(&self, d: &BigInt) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (quo, rem) = c.div_rem(d);
            if !rem.is_zero() {
                return None;
            }
            out.push(quo);
        }
        Some(QPoly { coeffs: out })
    }

    pub fn eval(&self, q: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * q + c)
    }

    pub fn eval_i64(&self, q: i64) -> BigInt {
        self.eval(&BigInt::from(q))
    }

    /// `self += k * other`
    pub fn add_scaled(&mut self, other: &QPoly, k: &QPoly) {
        if other.is_zero() || k.is_zero() {
            return;
        }
        let len = other.coeffs.len() + k.coeffs.len() - 1;
        if self.coeffs.len() < len {
            self.coeffs.resize(len, BigInt::zero());
        }
        for (i, a) in other.coeffs.iter().enumerate() {
            for (j, b) in k.coeffs.iter().enumerate() {
                self.coeffs[i + j] += a * b;
            }
        }
        self.trim();
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    fn render(&self, latex: bool) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if i == 0 || !mag.is_one() {
                out.push_str(&mag.to_string());
            }
            match (i, latex) {
                (0, _) => {}
                (1, _) => out.push('q'),
                (_, true) if i >= 10 => out.push_str(&format!("q^{{{i}}}")),
                _ => out.push_str(&format!("q^{i}")),
            }
        }
        out
    }

    pub fn to_latex(&self) -> String {
        self.render(true)
    }

    /// Render as a factor: parenthesized unless it is a single term.
    pub(crate) fn as_factor(&self, latex: bool) -> String {
        let s = self.render(latex);
        if self.coeffs.iter().filter(|c| !c.is_zero()).count() > 1 {
            format!("({s})")
        } else {
            s
        }
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

impl Add for &QPoly {
    type Output = QPoly;

    fn add(self, rhs: &QPoly) -> QPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &QPoly {
    type Output = QPoly;

    fn sub(self, rhs: &QPoly) -> QPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &QPoly {
    type Output = QPoly;

    fn mul(self, rhs: &QPoly) -> QPoly {
        let mut out = QPoly::zero();
        out.add_scaled(self, rhs);
        out
    }
}

impl Neg for &QPoly {
    type Output = QPoly;

    fn neg(self) -> QPoly {
        QPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Add for QPoly {
    type Output = QPoly;

    fn add(self, rhs: QPoly) -> QPoly {
        &self + &rhs
    }
}

impl Sub for QPoly {
    type Output = QPoly;

    fn sub(self, rhs: QPoly) -> QPoly {
        &self - &rhs
    }
}

impl Mul for QPoly {
    type Output = QPoly;

    fn mul(self, rhs: QPoly) -> QPoly {
        &self * &rhs
    }
}

impl Neg for QPoly {
    type Output = QPoly;

    fn neg(self) -> QPoly {
        -&self
    }
}

impl AddAssign<&QPoly> for QPoly {
    fn add_assign(&mut self, rhs: &QPoly) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), BigInt::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
        self.trim();
    }
}

impl SubAssign<&QPoly> for QPoly {
    fn sub_assign(&mut self, rhs: &QPoly) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), BigInt::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
        self.trim();
    }
}

// Coefficients travel as plain JSON integers of any size.
impl Serialize for QPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let nums: Vec<serde_json::Number> =
            self.coeffs.iter().map(|c| c.to_string().parse().expect("integers are valid JSON numbers")).collect();
        nums.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let nums = Vec::<serde_json::Number>::deserialize(d)?;
        let coeffs = nums
            .iter()
            .map(|n| n.to_string().parse::<BigInt>().map_err(|_| D::Error::custom(format!("{n} is not an integer"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(QPoly::from_coeffs(coeffs))
    }
}
