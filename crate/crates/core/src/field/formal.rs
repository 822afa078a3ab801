//! Formal twist fields: fractions whose numerator is a polynomial in twist
//! symbols `g[i]` and whose denominator is a monomial in invertible symbols.
//! The Frobenius twist shifts every index.

use std::collections::BTreeMap;

use super::finite::FiniteField;
use crate::error::{Error, Result};

/// A twist symbol: generator index and shift.
pub type Sym = (u16, i32);
/// Sorted list of (symbol, positive exponent).
pub type Mono = Vec<(Sym, u32)>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormalFrac {
    pub num: BTreeMap<Mono, u32>,
    pub den: Mono,
}

fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    let mut out: BTreeMap<Sym, u32> = a.iter().copied().collect();
    for &(s, e) in b {
        *out.entry(s).or_insert(0) += e;
    }
    out.into_iter().collect()
}

/// Exponent-wise `a - b`, assuming b divides a.
fn mono_div(a: &Mono, b: &Mono) -> Mono {
    let mut out: BTreeMap<Sym, u32> = a.iter().copied().collect();
    for &(s, e) in b {
        let x = out.get_mut(&s).expect("monomial divides");
        *x -= e;
        if *x == 0 {
            out.remove(&s);
        }
    }
    out.into_iter().collect()
}

fn mono_lcm(a: &Mono, b: &Mono) -> Mono {
    let mut out: BTreeMap<Sym, u32> = a.iter().copied().collect();
    for &(s, e) in b {
        let x = out.entry(s).or_insert(0);
        *x = (*x).max(e);
    }
    out.into_iter().collect()
}

fn mono_shift(a: &Mono, i: i32) -> Mono {
    a.iter().map(|&((g, s), e)| ((g, s + i), e)).collect()
}

impl FormalFrac {
    pub fn zero() -> Self {
        FormalFrac { num: BTreeMap::new(), den: Vec::new() }
    }

    pub fn constant(c: u32) -> Self {
        let mut num = BTreeMap::new();
        if c != 0 {
            num.insert(Vec::new(), c);
        }
        FormalFrac { num, den: Vec::new() }
    }

    pub fn symbol(gen: u16, shift: i32) -> Self {
        let mut num = BTreeMap::new();
        num.insert(vec![((gen, shift), 1)], 1);
        FormalFrac { num, den: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    /// Cancel monomial factors shared by every numerator term and the
    /// denominator.
    fn normalize(mut self) -> Self {
        if self.num.is_empty() {
            self.den.clear();
            return self;
        }
        let mut common = Vec::new();
        for &(s, e) in &self.den {
            let m = self
                .num
                .keys()
                .map(|mono| mono.iter().find(|(t, _)| *t == s).map(|x| x.1).unwrap_or(0))
                .min()
                .unwrap_or(0)
                .min(e);
            if m > 0 {
                common.push((s, m));
            }
        }
        if common.is_empty() {
            return self;
        }
        let num = self.num.iter().map(|(mono, &c)| (mono_div(mono, &common), c)).collect();
        FormalFrac { num, den: mono_div(&self.den, &common) }
    }

    pub fn add(&self, f: &FiniteField, o: &Self) -> Self {
        let l = mono_lcm(&self.den, &o.den);
        let a = mono_div(&l, &self.den);
        let b = mono_div(&l, &o.den);
        let mut num: BTreeMap<Mono, u32> = BTreeMap::new();
        for (src, scale) in [(&self.num, &a), (&o.num, &b)] {
            for (mono, &c) in src {
                let key = mono_mul(mono, scale);
                let v = num.entry(key.clone()).or_insert(0);
                *v = f.add(*v, c);
                if *v == 0 {
                    num.remove(&key);
                }
            }
        }
        FormalFrac { num, den: l }.normalize()
    }

    pub fn neg(&self, f: &FiniteField) -> Self {
        FormalFrac { num: self.num.iter().map(|(m, &c)| (m.clone(), f.neg(c))).collect(), den: self.den.clone() }
    }

    pub fn mul(&self, f: &FiniteField, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut num: BTreeMap<Mono, u32> = BTreeMap::new();
        for (ma, &ca) in &self.num {
            for (mb, &cb) in &o.num {
                let key = mono_mul(ma, mb);
                let v = num.entry(key.clone()).or_insert(0);
                *v = f.add(*v, f.mul(ca, cb));
                if *v == 0 {
                    num.remove(&key);
                }
            }
        }
        FormalFrac { num, den: mono_mul(&self.den, &o.den) }.normalize()
    }

    /// Inverse; the numerator must be a single term in invertible symbols.
    pub fn inv(&self, f: &FiniteField, invertible: &[bool], names: &[String]) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.num.len() != 1 {
            return Err(Error::NonMonomialDenominator(self.render(f, names)));
        }
        let (mono, &c) = self.num.iter().next().unwrap();
        if mono.iter().any(|((g, _), _)| !invertible[*g as usize]) {
            return Err(Error::NonMonomialDenominator(self.render(f, names)));
        }
        let mut num = BTreeMap::new();
        num.insert(self.den.clone(), f.inv(c)?);
        Ok(FormalFrac { num, den: mono.clone() }.normalize())
    }

    pub fn twist(&self, f: &FiniteField, i: i64) -> Self {
        let i = i as i32;
        FormalFrac {
            num: self.num.iter().map(|(m, &c)| (mono_shift(m, i), f.twist(c, i as i64))).collect(),
            den: mono_shift(&self.den, i),
        }
    }

    /// Replace every symbol g[i] by g[-i].
    pub fn negate_indices(&self) -> Self {
        let neg = |m: &Mono| -> Mono {
            let mut v: Mono = m.iter().map(|&((g, s), e)| ((g, -s), e)).collect();
            v.sort_unstable();
            v
        };
        FormalFrac { num: self.num.iter().map(|(m, &c)| (neg(m), c)).collect(), den: neg(&self.den) }
    }

    /// If the element is a constant of the coefficient field, return it.
    pub fn as_constant(&self) -> Option<u32> {
        if self.num.is_empty() {
            return Some(0);
        }
        if self.den.is_empty() && self.num.len() == 1 {
            if let Some(&c) = self.num.get(&Vec::new()) {
                return Some(c);
            }
        }
        None
    }

    pub fn render(&self, f: &FiniteField, names: &[String]) -> String {
        if self.num.is_empty() {
            return "0".into();
        }
        // Higher total degree first, then by monomial order.
        let mut terms: Vec<(&Mono, u32)> = self.num.iter().map(|(m, &c)| (m, c)).collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().map(|x| x.1).sum();
            let db: u32 = b.0.iter().map(|x| x.1).sum();
            db.cmp(&da).then_with(|| a.0.cmp(b.0))
        });
        let parts: Vec<String> = terms
            .iter()
            .map(|(m, c)| {
                let ms = render_mono(m, names);
                let cs = f.render(*c);
                let cs = if cs.contains('+') { format!("({cs})") } else { cs };
                match (ms.is_empty(), *c == 1) {
                    (true, _) => cs,
                    (false, true) => ms,
                    (false, false) => format!("{cs}*{ms}"),
                }
            })
            .collect();
        let n = parts.join(" + ");
        if self.den.is_empty() {
            return n;
        }
        let n = if parts.len() > 1 { format!("({n})") } else { n };
        let d = render_mono(&self.den, names);
        let single = self.den.len() == 1 && self.den[0].1 == 1;
        if single {
            format!("{n}/{d}")
        } else {
            format!("{n}/({d})")
        }
    }
}

pub fn render_sym(sym: Sym, names: &[String]) -> String {
    let (g, s) = sym;
    let name = &names[g as usize];
    if s == 0 {
        name.clone()
    } else {
        format!("{name}[{s}]")
    }
}

fn render_mono(m: &Mono, names: &[String]) -> String {
    m.iter()
        .map(|&(s, e)| {
            let base = render_sym(s, names);
            if e == 1 {
                base
            } else {
                format!("{base}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}
