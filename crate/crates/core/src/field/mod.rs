//! Coefficient fields: finite fields, rational function fields F_q(θ) and
//! formal twist fields, all supporting Frobenius twists c ↦ c^(i).

pub mod finite;
pub mod formal;
pub mod poly;
pub mod rational;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
pub use finite::FiniteField;
use formal::FormalFrac;
use rational::RatFunc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldKind {
    Finite(FiniteField),
    /// F_q(θ) with q the size of the coefficient field.
    Rational(FiniteField),
    /// Formal twist field over the coefficient field (q = its size).
    Formal { coeffs: FiniteField, names: Vec<String>, invertible: Vec<bool>, theta_gen: u16 },
}

#[derive(Debug, PartialEq, Eq)]
struct FieldInner {
    kind: FieldKind,
    theta: Repr,
}

/// Shared handle to a coefficient field.
#[derive(Debug, Clone)]
pub struct Field(Arc<FieldInner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}
impl Eq for Field {}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Repr {
    Fin(u32),
    Rat(RatFunc),
    Ftf(FormalFrac),
}

#[derive(Clone)]
pub struct FieldElement {
    field: Field,
    repr: Repr,
}

impl Field {
    /// Finite field with θ given as an element index (see [`FiniteField`]).
    pub fn finite(ff: FiniteField, theta: Option<u32>) -> Result<Self> {
        let theta = match theta {
            Some(t) if t < ff.size() => t,
            Some(t) => return Err(Error::InvalidField(format!("theta index {t} out of range"))),
            None if ff.m() == 1 => 1,
            None => ff.gen(),
        };
        Ok(Field(Arc::new(FieldInner { kind: FieldKind::Finite(ff), theta: Repr::Fin(theta) })))
    }

    /// Convenience: GF(p^m) with a default primitive modulus, q = p, θ = g.
    pub fn gf(p: u32, m: u32) -> Result<Self> {
        Self::finite(FiniteField::with_default_modulus(p, m, 1)?, None)
    }

    /// F_q(θ) over the given coefficient field; q is its full size.
    pub fn rational(coeffs: FiniteField) -> Result<Self> {
        if coeffs.q_exponent() != coeffs.m() {
            let ff = FiniteField::new(coeffs.p(), coeffs.modulus().to_vec(), coeffs.m())?;
            return Self::rational(ff);
        }
        Ok(Field(Arc::new(FieldInner { kind: FieldKind::Rational(coeffs), theta: Repr::Rat(RatFunc::theta()) })))
    }

    /// Formal twist field with the given generator names; `theta` names the
    /// generator playing θ (as its index-0 symbol).
    pub fn formal(coeffs: FiniteField, names: Vec<String>, invertible: Vec<String>, theta: &str) -> Result<Self> {
        let coeffs = if coeffs.q_exponent() != coeffs.m() {
            FiniteField::new(coeffs.p(), coeffs.modulus().to_vec(), coeffs.m())?
        } else {
            coeffs
        };
        for (i, n) in names.iter().enumerate() {
            if !is_identifier(n) || RESERVED.contains(&n.as_str()) {
                return Err(Error::InvalidField(format!("bad generator name '{n}'")));
            }
            if names[..i].contains(n) {
                return Err(Error::InvalidField(format!("duplicate generator '{n}'")));
            }
        }
        for n in &invertible {
            if !names.contains(n) {
                return Err(Error::InvalidField(format!("invertible symbol '{n}' is not a generator")));
            }
        }
        if names.iter().any(|n| n == "th") && theta != "th" {
            return Err(Error::InvalidField("generator 'th' must be the theta generator".into()));
        }
        let theta_gen = names
            .iter()
            .position(|n| n == theta)
            .ok_or_else(|| Error::InvalidField(format!("theta generator '{theta}' missing")))? as u16;
        let inv_flags = names.iter().map(|n| invertible.contains(n)).collect();
        Ok(Field(Arc::new(FieldInner {
            kind: FieldKind::Formal { coeffs, names, invertible: inv_flags, theta_gen },
            theta: Repr::Ftf(FormalFrac::symbol(theta_gen, 0)),
        })))
    }

    pub fn kind(&self) -> &FieldKind {
        &self.0.kind
    }

    fn coeff_field(&self) -> &FiniteField {
        match &self.0.kind {
            FieldKind::Finite(f) | FieldKind::Rational(f) => f,
            FieldKind::Formal { coeffs, .. } => coeffs,
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.coeff_field().p()
    }

    /// q, the size of the twist-fixed field F_q.
    pub fn q(&self) -> u32 {
        match &self.0.kind {
            FieldKind::Finite(f) => f.q(),
            FieldKind::Rational(f) | FieldKind::Formal { coeffs: f, .. } => f.size(),
        }
    }

    /// Number of elements for finite fields.
    pub fn size(&self) -> Option<u32> {
        match &self.0.kind {
            FieldKind::Finite(f) => Some(f.size()),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.0.kind, FieldKind::Finite(_))
    }

    /// True when every negative twist exists.
    pub fn is_perfect(&self) -> bool {
        !matches!(self.0.kind, FieldKind::Rational(_))
    }

    fn wrap(&self, repr: Repr) -> FieldElement {
        FieldElement { field: self.clone(), repr }
    }

    pub fn zero(&self) -> FieldElement {
        self.from_int(0)
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        let c = self.coeff_field().from_int(n);
        self.from_coeff(c)
    }

    /// Embed an element of the coefficient finite field (by index).
    pub fn from_coeff(&self, c: u32) -> FieldElement {
        match &self.0.kind {
            FieldKind::Finite(_) => self.wrap(Repr::Fin(c)),
            FieldKind::Rational(_) => self.wrap(Repr::Rat(RatFunc::constant(c))),
            FieldKind::Formal { .. } => self.wrap(Repr::Ftf(FormalFrac::constant(c))),
        }
    }

    pub fn theta(&self) -> FieldElement {
        self.wrap(self.0.theta.clone())
    }

    /// The finite-field generator `g` (root of the modulus).
    pub fn generator(&self) -> FieldElement {
        let g = self.coeff_field().gen();
        self.from_coeff(g)
    }

    /// Formal twist symbol `name[shift]`.
    pub fn symbol(&self, name: &str, shift: i32) -> Option<FieldElement> {
        match &self.0.kind {
            FieldKind::Formal { names, .. } => {
                let g = names.iter().position(|n| n == name)? as u16;
                Some(self.wrap(Repr::Ftf(FormalFrac::symbol(g, shift))))
            }
            _ => None,
        }
    }

    pub fn symbol_names(&self) -> &[String] {
        match &self.0.kind {
            FieldKind::Formal { names, .. } => names,
            _ => &[],
        }
    }

    /// Uniformly random element; finite fields only.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<FieldElement> {
        let n = self.size()?;
        Some(self.wrap(Repr::Fin(rng.gen_range(0..n))))
    }

    /// Element with the given index; finite fields only.
    pub fn element(&self, index: u32) -> Option<FieldElement> {
        let n = self.size()?;
        (index < n).then(|| self.wrap(Repr::Fin(index)))
    }

    /// Dimension over F_p (finite fields only).
    pub fn prime_degree(&self) -> Option<usize> {
        match &self.0.kind {
            FieldKind::Finite(f) => Some(f.m() as usize),
            _ => None,
        }
    }

    /// Degree of the coefficient field F_p-basis used for rational and formal
    /// coefficients.
    pub fn coeff_degree(&self) -> usize {
        self.coeff_field().m() as usize
    }

    pub fn coeff_coords(&self, c: u32) -> Vec<u32> {
        self.coeff_field().coords(c)
    }

    pub fn coeff_from_coords(&self, c: &[u32]) -> u32 {
        self.coeff_field().from_coords(c)
    }

    /// Header text accepted by the parser.
    pub fn header(&self) -> String {
        match &self.0.kind {
            FieldKind::Finite(f) => {
                let mut h = f.header();
                let default_theta = if f.m() == 1 { 1 } else { f.gen() };
                if let Repr::Fin(t) = self.0.theta {
                    if t != default_theta {
                        h.pop();
                        h.push_str(&format!("; th={})", f.render(t)));
                    }
                }
                h
            }
            FieldKind::Rational(f) => format!("{}(th)", f.header()),
            FieldKind::Formal { coeffs, names, invertible, theta_gen } => {
                let mut h = coeffs.header();
                h = h.replacen("GF", "FTF", 1);
                h.pop();
                h.push_str(&format!("; gens={}", names.join(",")));
                let inv: Vec<&str> =
                    names.iter().zip(invertible).filter(|(_, &i)| i).map(|(n, _)| n.as_str()).collect();
                if !inv.is_empty() {
                    h.push_str(&format!("; inv={}", inv.join(",")));
                }
                if names[*theta_gen as usize] != "th" {
                    h.push_str(&format!("; th={}", names[*theta_gen as usize]));
                }
                h.push(')');
                h
            }
        }
    }
}

pub(crate) const RESERVED: &[&str] = &["tau", "sig", "g", "t"];

fn is_identifier(s: &str) -> bool {
    let mut c = s.chars();
    matches!(c.next(), Some(x) if x.is_ascii_alphabetic() || x == '_')
        && c.all(|x| x.is_ascii_alphanumeric() || x == '_')
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Fin(a) => *a == 0,
            Repr::Rat(r) => r.is_zero(),
            Repr::Ftf(f) => f.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.field.one()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let ff = self.field.coeff_field();
        let repr = match (&self.repr, &other.repr) {
            (Repr::Fin(a), Repr::Fin(b)) => Repr::Fin(ff.add(*a, *b)),
            (Repr::Rat(a), Repr::Rat(b)) => Repr::Rat(a.add(ff, b)),
            (Repr::Ftf(a), Repr::Ftf(b)) => Repr::Ftf(a.add(ff, b)),
            _ => return Err(Error::MixedFields),
        };
        Ok(self.field.wrap(repr))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let ff = self.field.coeff_field();
        let repr = match (&self.repr, &other.repr) {
            (Repr::Fin(a), Repr::Fin(b)) => Repr::Fin(ff.mul(*a, *b)),
            (Repr::Rat(a), Repr::Rat(b)) => Repr::Rat(a.mul(ff, b)),
            (Repr::Ftf(a), Repr::Ftf(b)) => Repr::Ftf(a.mul(ff, b)),
            _ => return Err(Error::MixedFields),
        };
        Ok(self.field.wrap(repr))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    pub fn inv(&self) -> Result<Self> {
        let ff = self.field.coeff_field();
        let repr = match &self.repr {
            Repr::Fin(a) => Repr::Fin(ff.inv(*a)?),
            Repr::Rat(a) => Repr::Rat(a.inv(ff)?),
            Repr::Ftf(a) => match &self.field.0.kind {
                FieldKind::Formal { names, invertible, .. } => Repr::Ftf(a.inv(ff, invertible, names)?),
                _ => unreachable!(),
            },
        };
        Ok(self.field.wrap(repr))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.checked_mul(&other.inv()?)
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        if let Repr::Fin(a) = base.repr {
            return Ok(self.field.wrap(Repr::Fin(self.field.coeff_field().pow(a, e))));
        }
        let mut acc = self.field.one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        Ok(acc)
    }

    /// Frobenius twist c^(i) = c^(q^i).
    pub fn twist(&self, i: i64) -> Result<Self> {
        if i == 0 {
            return Ok(self.clone());
        }
        let ff = self.field.coeff_field();
        let repr = match &self.repr {
            Repr::Fin(a) => Repr::Fin(ff.twist(*a, i)),
            Repr::Rat(a) => Repr::Rat(a.twist(ff, i)?),
            Repr::Ftf(a) => Repr::Ftf(a.twist(ff, i)),
        };
        Ok(self.field.wrap(repr))
    }

    /// g[i] ↦ g[-i] on every twist symbol; formal twist fields only.
    pub fn negate_indices(&self) -> Option<Self> {
        match &self.repr {
            Repr::Ftf(f) => Some(self.field.wrap(Repr::Ftf(f.negate_indices()))),
            _ => None,
        }
    }

    /// Index of a finite-field element.
    pub fn index(&self) -> Option<u32> {
        match self.repr {
            Repr::Fin(a) => Some(a),
            _ => None,
        }
    }

    /// Numerator/denominator coefficient lists for F_q(θ) elements.
    pub fn as_rational(&self) -> Option<(&[u32], &[u32])> {
        match &self.repr {
            Repr::Rat(r) => Some((&r.num, &r.den)),
            _ => None,
        }
    }

    /// Build an F_q(θ) polynomial from coefficient indices (low to high).
    pub fn rational_poly(field: &Field, coeffs: Vec<u32>) -> Result<Self> {
        match &field.0.kind {
            FieldKind::Rational(ff) => Ok(field.wrap(Repr::Rat(RatFunc::new(ff, coeffs, vec![1])?))),
            _ => Err(Error::MixedFields),
        }
    }

    /// Coefficient-field index when the element is a constant.
    pub fn as_coeff(&self) -> Option<u32> {
        match &self.repr {
            Repr::Fin(a) => Some(*a),
            Repr::Rat(r) => match (r.num.len(), r.den.as_slice()) {
                (0, _) => Some(0),
                (1, [1]) => Some(r.num[0]),
                _ => None,
            },
            Repr::Ftf(f) => f.as_constant(),
        }
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.repr == other.repr && self.field == other.field
    }
}
impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.repr.hash(state);
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ff = self.field.coeff_field();
        let s = match &self.repr {
            Repr::Fin(a) => ff.render(*a),
            Repr::Rat(r) => r.render(ff),
            Repr::Ftf(x) => x.render(ff, self.field.symbol_names()),
        };
        f.write_str(&s)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// Operators panic on mixed fields; library code only combines elements of
// one field. Use the `checked_*` methods for untrusted input.
impl std::ops::Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: Self) -> FieldElement {
        self.checked_add(rhs).expect("mixed fields")
    }
}

impl std::ops::Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: Self) -> FieldElement {
        self.checked_sub(rhs).expect("mixed fields")
    }
}

impl std::ops::Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: Self) -> FieldElement {
        self.checked_mul(rhs).expect("mixed fields")
    }
}

impl std::ops::Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        let ff = self.field.coeff_field();
        let repr = match &self.repr {
            Repr::Fin(a) => Repr::Fin(ff.neg(*a)),
            Repr::Rat(a) => Repr::Rat(a.neg(ff)),
            Repr::Ftf(a) => Repr::Ftf(a.neg(ff)),
        };
        self.field.wrap(repr)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_arithmetic() {
        let k = Field::rational(FiniteField::new(3, vec![0, 1], 1).unwrap()).unwrap();
        let th = k.theta();
        let a = &th + &k.one();
        let b = &th + &k.from_int(2);
        assert_eq!(&a + &b, &k.from_int(2) * &th);
        assert_eq!(th.inv().unwrap().to_string(), "1/th");
        assert_eq!(th.twist(1).unwrap(), th.pow(3).unwrap());
        assert_eq!(th.pow(3).unwrap().twist(-1).unwrap(), th);
        assert_eq!(th.twist(-1).unwrap_err().code(), "NotAQthPower");
    }

    #[test]
    fn mixed_fields_rejected() {
        let a = Field::gf(2, 2).unwrap().one();
        let b = Field::gf(3, 1).unwrap().one();
        assert_eq!(a.checked_add(&b).unwrap_err(), Error::MixedFields);
    }

    #[test]
    fn formal_symbols() {
        let ff = FiniteField::new(3, vec![0, 1], 1).unwrap();
        let k = Field::formal(ff, vec!["a".into(), "th".into()], vec!["a".into()], "th").unwrap();
        let a2 = k.symbol("a", 2).unwrap();
        assert_eq!(a2.inv().unwrap().to_string(), "1/a[2]");
        let x = &k.symbol("a", 0).unwrap() * &k.symbol("th", 1).unwrap();
        assert_eq!(x.twist(-1).unwrap().to_string(), "a[-1]*th");
        assert_eq!(k.theta().to_string(), "th");
    }
}
