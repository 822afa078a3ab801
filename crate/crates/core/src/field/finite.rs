//! Prime-power finite fields with table-driven arithmetic.
//!
//! An element of GF(p^m) = F_p[g]/(modulus) is stored as the integer
//! `sum d_i p^i` where `d_i` is the coefficient of `g^i`.

use crate::error::{Error, Result};

/// Largest field size accepted (exp/log tables are held in memory).
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteField {
    p: u32,
    m: u32,
    /// q = p^r is the size of the fixed field of the twist.
    r: u32,
    size: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Dense polynomial helpers over F_p, coefficients low to high.
mod fp {
    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn inv(a: u32, p: u32) -> u32 {
        // p is small, Fermat is fine.
        let mut r = 1u64;
        let mut b = a as u64 % p as u64;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p as u64;
            }
            b = b * b % p as u64;
            e >>= 1;
        }
        r as u32
    }

    /// Remainder of `a` modulo `b` (b nonzero).
    pub fn rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let db = b.len() - 1;
        let lead_inv = inv(b[db], p);
        while r.len() > db {
            let top = r.len() - 1;
            let factor = r[top] as u64 * lead_inv as u64 % p as u64;
            let shift = top - db;
            for (i, &bi) in b.iter().enumerate() {
                let sub = factor * bi as u64 % p as u64;
                r[shift + i] = ((r[shift + i] as u64 + p as u64 - sub) % p as u64) as u32;
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
        let mut v: Vec<u32> = out.into_iter().map(|x| x as u32).collect();
        trim(&mut v);
        v
    }
}

impl FiniteField {
    /// Build GF(p^m) from a monic modulus of degree m (coefficients low to
    /// high, each in `0..p`). `r` must divide `m`; q = p^r.
    pub fn new(p: u32, modulus: Vec<u32>, r: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        let mut modulus = modulus;
        fp::trim(&mut modulus);
        if modulus.len() < 2 {
            return Err(Error::InvalidField("modulus must have degree >= 1".into()));
        }
        if modulus.iter().any(|&c| c >= p) || *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidField("modulus must be monic over F_p".into()));
        }
        let m = (modulus.len() - 1) as u32;
        if r == 0 || !m.is_multiple_of(r) {
            return Err(Error::InvalidField(format!("q = {p}^{r} is not a subfield of GF({p}^{m})")));
        }
        let size = (p as u64).checked_pow(m).filter(|&s| s <= MAX_FIELD_SIZE).ok_or_else(|| {
            Error::InvalidField(format!("GF({p}^{m}) exceeds the supported size {MAX_FIELD_SIZE}"))
        })? as u32;
        if !irreducible(&modulus, p) {
            return Err(Error::InvalidField("modulus is reducible".into()));
        }
        let mut field = FiniteField { p, m, r, size, modulus, exp: Vec::new(), log: Vec::new() };
        field.build_tables();
        Ok(field)
    }

    /// GF(p^m) with the first irreducible modulus (in index order) for which
    /// `g` is a primitive element.
    pub fn with_default_modulus(p: u32, m: u32, r: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if m == 0 {
            return Err(Error::InvalidField("extension degree must be >= 1".into()));
        }
        let size = (p as u64).checked_pow(m).filter(|&s| s <= MAX_FIELD_SIZE).ok_or_else(|| {
            Error::InvalidField(format!("GF({p}^{m}) exceeds the supported size {MAX_FIELD_SIZE}"))
        })?;
        for low in 0..size {
            let mut modulus = digits(low as u32, p, m as usize);
            modulus.push(1);
            if !irreducible(&modulus, p) {
                continue;
            }
            let f = FiniteField::new(p, modulus, r)?;
            if f.order(f.gen()) == f.size - 1 {
                return Ok(f);
            }
        }
        Err(Error::InvalidField(format!("no primitive modulus for GF({p}^{m})")))
    }

    fn build_tables(&mut self) {
        let n = self.size as usize;
        let one = 1u32;
        // Find a primitive element by brute force over small candidates.
        let mut candidate = if n == 2 { 1 } else { 2 };
        loop {
            let mut exp = Vec::with_capacity(n - 1);
            let mut x = one;
            let mut ok = true;
            for k in 0..n - 1 {
                if k > 0 && x == one {
                    ok = false;
                    break;
                }
                exp.push(x);
                x = self.slow_mul(x, candidate);
            }
            if ok && x == one {
                let mut log = vec![0u32; n];
                for (k, &v) in exp.iter().enumerate() {
                    log[v as usize] = k as u32;
                }
                self.exp = exp;
                self.log = log;
                return;
            }
            candidate += 1;
        }
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let m = self.m as usize;
        let prod = fp::mul(&digits(a, self.p, m), &digits(b, self.p, m), self.p);
        undigits(&fp::rem(&prod, &self.modulus, self.p), self.p)
    }

    fn order(&self, a: u32) -> u32 {
        if a == 0 {
            return 0;
        }
        let n = self.size - 1;
        let l = self.log[a as usize];
        n / gcd(n, l)
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    /// Size of the fixed field of the twist.
    pub fn q(&self) -> u32 {
        self.p.pow(self.r)
    }
    pub fn q_exponent(&self) -> u32 {
        self.r
    }
    pub fn size(&self) -> u32 {
        self.size
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The root `g` of the modulus.
    pub fn gen(&self) -> u32 {
        if self.m == 1 {
            (self.p - self.modulus[0]) % self.p
        } else {
            self.p
        }
    }

    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        if self.m == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        while a > 0 || b > 0 {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        while a > 0 {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
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
        let n = self.size - 1;
        let s = self.log[a as usize] as u64 + self.log[b as usize] as u64;
        self.exp[(s % n as u64) as usize]
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let n = self.size - 1;
        Ok(self.exp[((n - self.log[a as usize]) % n) as usize])
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.size - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (e % n)) % n) as usize]
    }

    /// a^(q^i); any integer i.
    pub fn twist(&self, a: u32, i: i64) -> u32 {
        if a == 0 || i == 0 {
            return a;
        }
        let period = (self.m / self.r) as i64;
        let k = i.rem_euclid(period) as u32;
        let n = (self.size - 1) as u64;
        let mut e = 1u64;
        for _ in 0..k {
            e = e * self.q() as u64 % n;
        }
        self.exp[((self.log[a as usize] as u64 * e) % n) as usize]
    }

    /// Coordinates of `a` over F_p (the base-p digits).
    pub fn coords(&self, a: u32) -> Vec<u32> {
        digits(a, self.p, self.m as usize)
    }

    pub fn from_coords(&self, c: &[u32]) -> u32 {
        undigits(c, self.p)
    }

    pub fn render(&self, a: u32) -> String {
        if self.m == 1 {
            return a.to_string();
        }
        let d = self.coords(a);
        let mut terms = Vec::new();
        for (i, &c) in d.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "g".to_string(),
                _ => format!("g^{i}"),
            };
            terms.push(match (c, mono.is_empty()) {
                (_, true) => c.to_string(),
                (1, false) => mono,
                (_, false) => format!("{c}*{mono}"),
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    /// Header text, e.g. `GF(3^2; mod=g^2 + 1)`.
    pub fn header(&self) -> String {
        let mut s = if self.m == 1 { format!("GF({}", self.p) } else { format!("GF({}^{}", self.p, self.m) };
        let mod_str = render_poly_in(&self.modulus, "g");
        s.push_str(&format!("; mod={mod_str}"));
        if self.r != 1 {
            s.push_str(&format!("; q={}^{}", self.p, self.r));
        }
        s.push(')');
        s
    }
}

fn render_poly_in(c: &[u32], var: &str) -> String {
    let mut terms = Vec::new();
    for (i, &a) in c.iter().enumerate().rev() {
        if a == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        terms.push(match (a, mono.is_empty()) {
            (_, true) => a.to_string(),
            (1, false) => mono,
            (_, false) => format!("{a}*{mono}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn digits(mut a: u32, p: u32, m: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(m);
    for _ in 0..m {
        out.push(a % p);
        a /= p;
    }
    out
}

pub(crate) fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

/// Trial division by every monic polynomial of degree 1..=deg/2.
fn irreducible(modulus: &[u32], p: u32) -> bool {
    let deg = modulus.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for low in 0..count {
            let mut f = digits(low as u32, p, d);
            f.push(1);
            if fp::rem(modulus, &f, p).is_empty() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf9_tables() {
        let f = FiniteField::new(3, vec![1, 0, 1], 1).unwrap();
        assert_eq!(f.size(), 9);
        let g = f.gen();
        // g^2 = -1
        assert_eq!(f.mul(g, g), f.from_int(-1));
        for a in 1..9 {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        assert_eq!(f.twist(g, 1), f.pow(g, 3));
        assert_eq!(f.twist(f.twist(g, 1), -1), g);
    }

    #[test]
    fn reducible_rejected() {
        // g^2 + 2 = (g+1)(g+2) over F_3
        assert!(FiniteField::new(3, vec![2, 0, 1], 1).is_err());
        assert!(FiniteField::new(4, vec![1, 1], 1).is_err());
    }

    #[test]
    fn default_modulus_is_primitive() {
        let f = FiniteField::with_default_modulus(2, 4, 1).unwrap();
        assert_eq!(f.order(f.gen()), 15);
        let f = FiniteField::with_default_modulus(5, 1, 1).unwrap();
        assert_eq!(f.order(f.gen()), 4);
    }

    #[test]
    fn twist_with_larger_q() {
        let f = FiniteField::with_default_modulus(2, 4, 2).unwrap();
        let g = f.gen();
        assert_eq!(f.twist(g, 1), f.pow(g, 4));
        assert_eq!(f.twist(g, 2), g);
    }

    #[test]
    fn additive_structure() {
        let f = FiniteField::with_default_modulus(5, 2, 1).unwrap();
        for a in 0..25 {
            assert_eq!(f.add(a, f.neg(a)), 0);
            for b in 0..25 {
                assert_eq!(f.add(a, b), f.add(b, a));
                let c = f.mul(a, b);
                assert_eq!(f.twist(c, 1), f.mul(f.twist(a, 1), f.twist(b, 1)));
            }
        }
    }
}
