//! Finite fields GF(p^k) with elements encoded as integers in `0..q`.
//!
//! An element is the residue polynomial `c_0 + c_1 x + ... + c_{k-1} x^{k-1}`
//! encoded as `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`. Multiplication goes
//! through discrete log tables built from a primitive element.

use crate::error::{Error, Result};

/// Default upper bound on the field order.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteField {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Split `q` as `p^k` with `p` prime, if possible.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    let (mut r, mut k) = (q, 0);
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p as u32, k))
}

/// Polynomials over GF(p) as coefficient vectors, constant term first.
mod poly {
    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        while r.len() > dm {
            let shift = r.len() - 1 - dm;
            let c = (r[r.len() - 1] as u64 * lead_inv as u64 % p as u64) as u32;
            for (i, &mi) in m.iter().enumerate() {
                let sub = (c as u64 * mi as u64 % p as u64) as u32;
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        let mut out: Vec<u32> = out.into_iter().map(|c| c as u32).collect();
        trim(&mut out);
        out
    }

    pub fn inv_mod(a: u32, p: u32) -> u32 {
        let (mut base, mut e, mut acc) = (a as u64 % p as u64, p as u64 - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p as u64;
            }
            base = base * base % p as u64;
            e >>= 1;
        }
        acc as u32
    }

    /// All monic polynomials of degree `d`, in no particular order.
    pub fn monic(d: usize, p: u32) -> impl Iterator<Item = Vec<u32>> {
        let count = (p as u64).pow(d as u32);
        (0..count).map(move |mut idx| {
            let mut c = Vec::with_capacity(d + 1);
            for _ in 0..d {
                c.push((idx % p as u64) as u32);
                idx /= p as u64;
            }
            c.push(1);
            c
        })
    }

    pub fn is_irreducible(m: &[u32], p: u32) -> bool {
        let k = m.len() - 1;
        (1..=k / 2).all(|d| monic(d, p).all(|f| !rem(m, &f, p).is_empty()))
    }
}

impl FiniteField {
    pub fn new(p: u32, k: u32) -> Result<Self> {
        Self::with_bound(p, k, MAX_FIELD_ORDER)
    }

    /// The field of order `q`, if `q` is a prime power.
    pub fn of_order(q: u64) -> Result<Self> {
        let (p, k) = prime_power(q).ok_or_else(|| Error::Field(format!("{q} is not a prime power")))?;
        Self::new(p, k)
    }

    pub fn with_bound(p: u32, k: u32, bound: u64) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::Field(format!("{p} is not prime")));
        }
        if k == 0 {
            return Err(Error::Field("extension degree must be at least 1".into()));
        }
        let q = (p as u64).checked_pow(k).filter(|&q| q <= bound);
        let q = q.ok_or_else(|| Error::Field(format!("order {p}^{k} exceeds bound {bound}")))?;
        let modulus = smallest_irreducible(p, k as usize)
            .ok_or_else(|| Error::Internal(format!("no irreducible polynomial of degree {k} over GF({p})")))?;
        let mut field = FiniteField { p, k, q: q as u32, modulus, exp: Vec::new(), log: Vec::new() };
        field.build_log_tables()?;
        Ok(field)
    }

    fn decode(&self, mut a: u32) -> Vec<u32> {
        let mut c = Vec::with_capacity(self.k as usize);
        for _ in 0..self.k {
            c.push(a % self.p);
            a /= self.p;
        }
        poly::trim(&mut c);
        c
    }

    fn encode(&self, c: &[u32]) -> u32 {
        c.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let prod = poly::mul(&self.decode(a), &self.decode(b), self.p);
        self.encode(&poly::rem(&prod, &self.modulus, self.p))
    }

    fn build_log_tables(&mut self) -> Result<()> {
        let q = self.q;
        let order = q - 1;
        let mut factors = Vec::new();
        let mut r = order;
        let mut d = 2;
        while d * d <= r {
            if r.is_multiple_of(d) {
                factors.push(d);
                while r.is_multiple_of(d) {
                    r /= d;
                }
            }
            d += 1;
        }
        if r > 1 {
            factors.push(r);
        }
        let pow = |f: &Self, mut base: u32, mut e: u32| {
            let mut acc = 1;
            while e > 0 {
                if e & 1 == 1 {
                    acc = f.slow_mul(acc, base);
                }
                base = f.slow_mul(base, base);
                e >>= 1;
            }
            acc
        };
        let generator = (1..q)
            .find(|&g| q == 2 || factors.iter().all(|&f| pow(self, g, order / f) != 1))
            .ok_or_else(|| Error::Internal("multiplicative group has no generator".into()))?;
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![u32::MAX; q as usize];
        let mut x = 1;
        for i in 0..order {
            exp.push(x);
            log[x as usize] = i;
            x = self.slow_mul(x, generator);
        }
        self.exp = exp;
        self.log = log;
        Ok(())
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Coefficients of the defining polynomial, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b, mut scale, mut out) = (a, b, 1, 0);
        while a > 0 || b > 0 {
            out += (a % self.p + b % self.p) % self.p * scale;
            a /= self.p;
            b /= self.p;
            scale *= self.p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        let (mut a, mut scale, mut out) = (a, 1, 0);
        while a > 0 {
            out += (self.p - a % self.p) % self.p * scale;
            a /= self.p;
            scale *= self.p;
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let order = self.q - 1;
        let s = self.log[a as usize] + self.log[b as usize];
        self.exp[(if s >= order { s - order } else { s }) as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| {
            let order = self.q - 1;
            self.exp[((order - self.log[a as usize]) % order) as usize]
        })
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = (self.q - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (e % order)) % order) as usize]
    }

    /// Evaluate a polynomial with integer coefficients (reduced mod p).
    pub fn eval_int_poly(&self, coeffs: &[i64], x: u32) -> u32 {
        let p = self.p as i64;
        coeffs.iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, x), c.rem_euclid(p) as u32))
    }
}

/// Lexicographically smallest monic irreducible of degree `k`, comparing
/// coefficient vectors constant term first.
fn smallest_irreducible(p: u32, k: usize) -> Option<Vec<u32>> {
    let count = (p as u64).pow(k as u32);
    (0..count)
        .map(|mut idx| {
            let mut c = vec![0u32; k + 1];
            for i in (0..k).rev() {
                c[i] = (idx % p as u64) as u32;
                idx /= p as u64;
            }
            c[k] = 1;
            c
        })
        .find(|m| poly::is_irreducible(m, p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exhaustive(f: &FiniteField) {
        let q = f.order();
        for a in 0..q {
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
            for b in 0..q {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in 0..q {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn prime_field_modulus_is_x() {
        let f = FiniteField::new(5, 1).unwrap();
        assert_eq!(f.order(), 5);
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.mul(3, 4), 2);
    }

    #[test]
    fn gf9_modulus() {
        let f = FiniteField::new(3, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
    }

    #[test]
    fn gf4_cyclic_group() {
        let f = FiniteField::new(2, 2).unwrap();
        for a in 1..4 {
            assert_eq!(f.pow(a, 3), 1);
        }
        assert!((1..4).any(|a| f.pow(a, 1) != 1 && f.mul(a, a) != 1));
    }

    #[test]
    fn field_axioms_exhaustive() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32, 49, 64] {
            exhaustive(&FiniteField::of_order(q).unwrap());
        }
    }

    #[test]
    fn inverses_up_to_1024() {
        for q in 2..=1024u64 {
            if let Ok(f) = FiniteField::of_order(q) {
                for a in 1..f.order() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1, "q = {q}");
                }
            }
        }
    }

    #[test]
    fn multiplicative_group_is_cyclic() {
        let f = FiniteField::of_order(27).unwrap();
        let orders: Vec<u64> = (1..27).map(|a| (1..=26).find(|&e| f.pow(a, e) == 1).unwrap()).collect();
        assert!(orders.contains(&26));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(FiniteField::new(6, 1), Err(Error::Field(_))));
        assert!(FiniteField::new(2, 0).is_err());
        assert!(FiniteField::new(2, 21).is_err());
        assert!(FiniteField::of_order(12).is_err());
    }

    #[test]
    fn modulus_is_smallest() {
        // every lexicographically smaller monic candidate must be reducible
        let f = FiniteField::new(2, 3).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1, 1]);
        let f = FiniteField::new(5, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
    }
}
