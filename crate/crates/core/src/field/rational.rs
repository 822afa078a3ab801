//! Rational functions in θ over a finite field, kept as reduced fractions
//! with monic denominator.

use super::finite::FiniteField;
use super::poly::{self, Poly};
use crate::error::{Error, Result};

/// Cap on θ-degrees produced by twisting, to avoid runaway allocation.
pub const MAX_THETA_DEGREE: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatFunc {
    pub num: Poly,
    pub den: Poly,
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc { num: Vec::new(), den: vec![1] }
    }

    pub fn constant(c: u32) -> Self {
        if c == 0 {
            Self::zero()
        } else {
            RatFunc { num: vec![c], den: vec![1] }
        }
    }

    pub fn theta() -> Self {
        RatFunc { num: vec![0, 1], den: vec![1] }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    /// Is the denominator 1?
    pub fn is_polynomial(&self) -> bool {
        self.den == [1]
    }

    pub fn new(f: &FiniteField, num: Poly, den: Poly) -> Result<Self> {
        let mut num = num;
        let mut den = den;
        poly::trim(&mut num);
        poly::trim(&mut den);
        if den.is_empty() {
            return Err(Error::DivisionByZero);
        }
        if num.is_empty() {
            return Ok(Self::zero());
        }
        let g = poly::gcd(f, &num, &den);
        if g.len() > 1 {
            num = poly::divrem(f, &num, &g).0;
            den = poly::divrem(f, &den, &g).0;
        }
        let (den, lc) = poly::monic(f, &den);
        let num = poly::scale(f, &num, f.inv(lc)?);
        Ok(RatFunc { num, den })
    }

    pub fn add(&self, f: &FiniteField, o: &Self) -> Self {
        if self.den == o.den {
            return Self::new(f, poly::add(f, &self.num, &o.num), self.den.clone()).unwrap();
        }
        let num = poly::add(f, &poly::mul(f, &self.num, &o.den), &poly::mul(f, &o.num, &self.den));
        Self::new(f, num, poly::mul(f, &self.den, &o.den)).unwrap()
    }

    pub fn neg(&self, f: &FiniteField) -> Self {
        RatFunc { num: poly::neg(f, &self.num), den: self.den.clone() }
    }

    pub fn mul(&self, f: &FiniteField, o: &Self) -> Self {
        Self::new(f, poly::mul(f, &self.num, &o.num), poly::mul(f, &self.den, &o.den)).unwrap()
    }

    pub fn inv(&self, f: &FiniteField) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(f, self.den.clone(), self.num.clone())
    }

    /// θ ↦ θ^(q^i); coefficients lie in F_q and are fixed.
    pub fn twist(&self, f: &FiniteField, i: i64) -> Result<Self> {
        if i == 0 || self.is_zero() {
            return Ok(self.clone());
        }
        let q = f.size() as u128;
        let k = q.checked_pow(i.unsigned_abs() as u32).filter(|&k| k <= MAX_THETA_DEGREE as u128);
        if i > 0 {
            let k = k.ok_or_else(|| Error::InvalidField(format!("twist by {i} exceeds the degree cap")))? as usize;
            let top = (self.num.len().max(self.den.len()) - 1) * k;
            if top > MAX_THETA_DEGREE {
                return Err(Error::InvalidField(format!("twist by {i} exceeds the degree cap")));
            }
            // Inflation preserves coprimality and monicity.
            Ok(RatFunc { num: poly::inflate(&self.num, k), den: poly::inflate(&self.den, k) })
        } else {
            let not_power = || Error::NotAQthPower { element: self.render(f), power: i.unsigned_abs() as u32 };
            let k = match k {
                Some(k) => k as usize,
                None => {
                    // Only constants survive an absurdly large root.
                    if self.num.len() == 1 && self.den.len() == 1 {
                        return Ok(self.clone());
                    }
                    return Err(not_power());
                }
            };
            let num = poly::deflate(&self.num, k).ok_or_else(not_power)?;
            let den = poly::deflate(&self.den, k).ok_or_else(not_power)?;
            Ok(RatFunc { num, den })
        }
    }

    pub fn render(&self, f: &FiniteField) -> String {
        let n = render_poly(f, &self.num);
        if self.den == [1] {
            return n;
        }
        let d = render_poly(f, &self.den);
        let wrap = |s: String, multi: bool| if multi { format!("({s})") } else { s };
        let num_multi = n.contains('+');
        let den_multi = self.den.iter().filter(|&&c| c != 0).count() > 1 || d.contains('*') || d.contains('+');
        format!("{}/{}", wrap(n, num_multi), wrap(d, den_multi))
    }
}

/// Render a polynomial in `th`, descending powers.
pub fn render_poly(f: &FiniteField, a: &[u32]) -> String {
    let mut terms = Vec::new();
    for (i, &c) in a.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "th".to_string(),
            _ => format!("th^{i}"),
        };
        let cs = f.render(c);
        let cs = if cs.contains('+') { format!("({cs})") } else { cs };
        terms.push(match (c == 1, mono.is_empty()) {
            (_, true) => cs,
            (true, false) => mono,
            (false, false) => format!("{cs}*{mono}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}
