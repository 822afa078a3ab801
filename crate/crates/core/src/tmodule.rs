//! t-modules, Drinfeld modules and their morphisms.
//!
//! Convention: vectors are columns. A morphism f: E → F between modules of
//! dimensions d and e is an e×d matrix over K{τ} with f·E_t = F_t·f.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::skew::{SkewMatrix, SkewPoly, Var};

/// A polynomial in t with coefficients in the twist-fixed field F_q,
/// coefficients low to high.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TPoly {
    coeffs: Vec<FieldElement>,
}

impl TPoly {
    /// Coefficients must be fixed by the twist.
    pub fn new(coeffs: Vec<FieldElement>) -> Result<Self> {
        for c in &coeffs {
            if c.twist(1)? != *c {
                return Err(Error::DimensionMismatch(format!("coefficient {c} of a polynomial in t is not in F_q")));
            }
        }
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(FieldElement::is_zero) {
            coeffs.pop();
        }
        Ok(TPoly { coeffs })
    }

    /// From integer coefficients reduced mod p.
    pub fn from_ints(field: &Field, coeffs: &[i64]) -> Self {
        TPoly::new(coeffs.iter().map(|&c| field.from_int(c)).collect()).expect("prime field constants are fixed")
    }

    pub fn t(field: &Field) -> Self {
        Self::from_ints(field, &[0, 1])
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            match (self.coeffs.get(i), o.coeffs.get(i)) {
                (Some(a), Some(b)) => out.push(a + b),
                (Some(a), None) | (None, Some(a)) => out.push(a.clone()),
                (None, None) => unreachable!(),
            }
        }
        TPoly::new(out).expect("closed under addition")
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return TPoly { coeffs: Vec::new() };
        }
        let zero = self.coeffs[0].field().zero();
        let mut out = vec![zero; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        TPoly::new(out).expect("closed under multiplication")
    }
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let x = match i {
                0 => String::new(),
                1 => "t".into(),
                _ => format!("t^{i}"),
            };
            let cs = c.to_string();
            let cs = if cs.contains('+') { format!("({cs})") } else { cs };
            parts.push(match (x.is_empty(), c.is_one()) {
                (true, _) => cs,
                (false, true) => x,
                (false, false) => format!("{cs}*{x}"),
            });
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct TModule {
    field: Field,
    phi_t: SkewMatrix,
    nilpotent: SkewMatrix,
    rank: usize,
}

impl TModule {
    /// Validates that the constant term is θI + N with N nilpotent.
    pub fn new(field: &Field, phi_t: SkewMatrix) -> Result<Self> {
        let d = phi_t.rows();
        if phi_t.cols() != d {
            return Err(Error::DimensionMismatch(format!("Φ_t must be square, got {}x{}", d, phi_t.cols())));
        }
        if let Some(f) = phi_t.field() {
            if f != field {
                return Err(Error::MixedFields);
            }
        }
        let var = phi_t.var();
        let constant = phi_t.coeff_matrix(0);
        let nilpotent = constant.sub(&SkewMatrix::scalar(var, d, &field.theta()))?;
        if !nilpotent.pow(d as u32, field)?.is_zero() {
            return Err(Error::NotATModule(format!("constant term minus θI is not nilpotent: {nilpotent}")));
        }
        let rank = phi_t.degree().unwrap_or(0);
        Ok(TModule { field: field.clone(), phi_t, nilpotent, rank })
    }

    /// The zero module (dimension 0).
    pub fn zero(field: &Field, var: Var) -> Self {
        let z = SkewMatrix::zeros(var, 0, 0);
        TModule { field: field.clone(), phi_t: z.clone(), nilpotent: z, rank: 0 }
    }

    /// φ_t = θ + Σ a_i x^i from (degree, coefficient) pairs with degree >= 1.
    pub fn drinfeld(field: &Field, var: Var, coeffs: &[(usize, FieldElement)]) -> Result<Self> {
        if coeffs.iter().any(|(k, _)| *k == 0) {
            return Err(Error::NotATModule("the constant term of a Drinfeld module is θ".into()));
        }
        let top = coeffs.iter().map(|c| c.0).max().ok_or(Error::RankZero)?;
        let mut terms: Vec<(usize, FieldElement)> = vec![(0, field.theta())];
        terms.extend(coeffs.iter().cloned());
        let p = SkewPoly::from_terms(var, terms);
        if p.degree() != Some(top) {
            return Err(Error::ZeroLeading);
        }
        Self::from_poly(field, p)
    }

    /// Drinfeld module from φ_t itself; the constant term must equal θ.
    pub fn from_poly(field: &Field, p: SkewPoly) -> Result<Self> {
        if p.coeff(0) != Some(&field.theta()) {
            return Err(Error::NotATModule(format!("constant term of {p} is not θ")));
        }
        match p.degree() {
            Some(0) | None => Err(Error::RankZero),
            Some(_) => Self::new(field, SkewMatrix::single(p)),
        }
    }

    pub fn carlitz(field: &Field) -> Self {
        Self::carlitz_tensor(field, 1)
    }

    /// C^⊗e = θI_e + N_e + E_{e×1}τ with N_e the superdiagonal shift.
    pub fn carlitz_tensor(field: &Field, e: usize) -> Self {
        assert!(e >= 1, "tensor power must be positive");
        let var = Var::Tau;
        let mut m = SkewMatrix::scalar(var, e, &field.theta());
        for i in 0..e - 1 {
            m.set(i, i + 1, SkewPoly::constant(field.one(), var));
        }
        let corner = m.get(e - 1, 0).add(&SkewPoly::x_pow(field, 1, var));
        m.set(e - 1, 0, corner);
        Self::new(field, m).expect("Carlitz tensor powers are t-modules")
    }

    /// Product module (block diagonal).
    pub fn product(field: &Field, var: Var, mods: &[TModule]) -> Result<Self> {
        for m in mods {
            if m.var() != var || &m.field != field {
                return Err(Error::MixedFields);
            }
        }
        let blocks: Vec<SkewMatrix> = mods.iter().map(|m| m.phi_t.clone()).collect();
        Self::new(field, SkewMatrix::block_diag(var, &blocks))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn var(&self) -> Var {
        self.phi_t.var()
    }
    pub fn dim(&self) -> usize {
        self.phi_t.rows()
    }
    /// deg Φ_t.
    pub fn rank(&self) -> usize {
        self.rank
    }
    pub fn phi_t(&self) -> &SkewMatrix {
        &self.phi_t
    }
    /// N in the constant term θI + N.
    pub fn nilpotent(&self) -> &SkewMatrix {
        &self.nilpotent
    }
    /// Coefficient matrix of Φ_t at the top degree.
    pub fn leading(&self) -> SkewMatrix {
        self.phi_t.coeff_matrix(self.rank)
    }

    pub fn is_drinfeld(&self) -> bool {
        self.dim() == 1 && self.rank >= 1 && self.nilpotent.is_zero()
    }

    /// Φ_a for a ∈ F_q[t], by Horner's rule.
    pub fn phi_a(&self, a: &TPoly) -> Result<SkewMatrix> {
        let d = self.dim();
        let var = self.var();
        let mut acc = SkewMatrix::zeros(var, d, d);
        for c in a.coeffs().iter().rev() {
            acc = acc.mul(&self.phi_t)?.add(&SkewMatrix::scalar(var, d, c))?;
        }
        Ok(acc)
    }

    /// The adjoint module: Φ_t ↦ [(Φ_t)^σ]^T (or the inverse map on σ-modules).
    pub fn adjoint(&self) -> Result<Self> {
        Self::new(&self.field, self.phi_t.adjoint()?)
    }
}

impl fmt::Display for TModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dim() == 1 {
            write!(f, "{}", self.phi_t.get(0, 0))
        } else {
            let parts: Vec<String> = self
                .phi_t
                .decompose()
                .into_iter()
                .map(|(k, m)| match k {
                    0 => m.to_string(),
                    1 => format!("{m}*{}", self.var().name()),
                    _ => format!("{m}*{}^{k}", self.var().name()),
                })
                .collect();
            if parts.is_empty() {
                f.write_str("[]")
            } else {
                f.write_str(&parts.join(" + "))
            }
        }
    }
}

impl fmt::Debug for TModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TModule({self})")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TModMorphism {
    pub source: TModule,
    pub target: TModule,
    pub f: SkewMatrix,
}

/// f·src_t − dst_t·f.
pub fn morphism_residual(f: &SkewMatrix, src: &TModule, dst: &TModule) -> Result<SkewMatrix> {
    if f.shape() != (dst.dim(), src.dim()) {
        return Err(Error::DimensionMismatch(format!(
            "morphism must be {}x{}, got {}x{}",
            dst.dim(),
            src.dim(),
            f.rows(),
            f.cols()
        )));
    }
    f.mul(src.phi_t())?.sub(&dst.phi_t().mul(f)?)
}

pub fn check_morphism(f: SkewMatrix, src: &TModule, dst: &TModule) -> Result<TModMorphism> {
    let r = morphism_residual(&f, src, dst)?;
    if !r.is_zero() {
        return Err(Error::NotAMorphism { residual: r.to_string() });
    }
    Ok(TModMorphism { source: src.clone(), target: dst.clone(), f })
}

impl TModMorphism {
    pub fn identity(m: &TModule) -> Self {
        TModMorphism { source: m.clone(), target: m.clone(), f: SkewMatrix::identity(m.var(), m.dim(), m.field()) }
    }

    /// self ∘ other.
    pub fn compose(&self, other: &TModMorphism) -> Result<Self> {
        if other.target != self.source {
            return Err(Error::DimensionMismatch("composition of non-matching morphisms".into()));
        }
        Ok(TModMorphism { source: other.source.clone(), target: self.target.clone(), f: self.f.mul(&other.f)? })
    }
}
