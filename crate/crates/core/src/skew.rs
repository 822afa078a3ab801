//! Twisted polynomial rings K{τ} (τc = c^(1)τ) and K{σ} (σc = c^(-1)σ),
//! and dense matrices over them.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Tau,
    Sigma,
}

impl Var {
    /// Twist direction: x·c = c^(sign)·x.
    pub fn sign(self) -> i64 {
        match self {
            Var::Tau => 1,
            Var::Sigma => -1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::Tau => "tau",
            Var::Sigma => "sig",
        }
    }

    pub fn flip(self) -> Var {
        match self {
            Var::Tau => Var::Sigma,
            Var::Sigma => Var::Tau,
        }
    }

    /// c ↦ c^(sign·k), the coefficient move past x^k.
    pub fn shift(self, c: &FieldElement, k: usize) -> Result<FieldElement> {
        c.twist(self.sign() * k as i64)
    }
}

/// A twisted polynomial, stored as strictly increasing (degree, nonzero
/// coefficient) pairs.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SkewPoly {
    var: Var,
    terms: Vec<(usize, FieldElement)>,
}

impl SkewPoly {
    pub fn zero(var: Var) -> Self {
        SkewPoly { var, terms: Vec::new() }
    }

    pub fn constant(c: FieldElement, var: Var) -> Self {
        Self::monomial(c, 0, var)
    }

    pub fn monomial(c: FieldElement, k: usize, var: Var) -> Self {
        if c.is_zero() {
            Self::zero(var)
        } else {
            SkewPoly { var, terms: vec![(k, c)] }
        }
    }

    /// x^k with coefficient 1.
    pub fn x_pow(field: &Field, k: usize, var: Var) -> Self {
        Self::monomial(field.one(), k, var)
    }

    /// Collects terms, summing repeated degrees and dropping zeros.
    pub fn from_terms(var: Var, terms: impl IntoIterator<Item = (usize, FieldElement)>) -> Self {
        let mut map: BTreeMap<usize, FieldElement> = BTreeMap::new();
        for (k, c) in terms {
            match map.get_mut(&k) {
                Some(v) => *v = &*v + &c,
                None => {
                    map.insert(k, c);
                }
            }
        }
        SkewPoly { var, terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn with_var(mut self, var: Var) -> Self {
        self.var = var;
        self
    }

    pub fn terms(&self) -> &[(usize, FieldElement)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.last().map(|t| t.0)
    }

    pub fn leading(&self) -> Option<&FieldElement> {
        self.terms.last().map(|t| &t.1)
    }

    pub fn coeff(&self, k: usize) -> Option<&FieldElement> {
        self.terms.binary_search_by_key(&k, |t| t.0).ok().map(|i| &self.terms[i].1)
    }

    /// Coefficient at degree k, or `zero` when absent.
    pub fn coeff_or(&self, k: usize, zero: &FieldElement) -> FieldElement {
        self.coeff(k).cloned().unwrap_or_else(|| zero.clone())
    }

    pub fn field(&self) -> Option<&Field> {
        self.terms.first().map(|t| t.1.field())
    }

    pub fn add(&self, other: &Self) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone().with_var(self.var);
        }
        assert_eq!(self.var, other.var, "mixed skew variables");
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let a = self.terms.get(i);
            let b = other.terms.get(j);
            match (a, b) {
                (Some((da, ca)), Some((db, cb))) if da == db => {
                    let s = ca + cb;
                    if !s.is_zero() {
                        out.push((*da, s));
                    }
                    i += 1;
                    j += 1;
                }
                (Some((da, ca)), Some((db, _))) if da < db => {
                    out.push((*da, ca.clone()));
                    i += 1;
                }
                (Some(_), Some((db, cb))) => {
                    out.push((*db, cb.clone()));
                    j += 1;
                }
                (Some((da, ca)), None) => {
                    out.push((*da, ca.clone()));
                    i += 1;
                }
                (None, Some((db, cb))) => {
                    out.push((*db, cb.clone()));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        SkewPoly { var: self.var, terms: out }
    }

    pub fn neg(&self) -> Self {
        SkewPoly { var: self.var, terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// c·f (left scalar multiplication, no twist).
    pub fn scale_left(&self, c: &FieldElement) -> Self {
        if c.is_zero() {
            return Self::zero(self.var);
        }
        SkewPoly {
            var: self.var,
            terms: self.terms.iter().map(|(k, a)| (*k, c * a)).filter(|(_, a)| !a.is_zero()).collect(),
        }
    }

    /// f·c: the coefficient at x^k picks up c^(±k).
    pub fn scale_right(&self, c: &FieldElement) -> Result<Self> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (k, a) in &self.terms {
            let v = a * &self.var.shift(c, *k)?;
            if !v.is_zero() {
                terms.push((*k, v));
            }
        }
        Ok(SkewPoly { var: self.var, terms })
    }

    /// Multiply by x^s on the left.
    pub fn shift_left(&self, s: usize) -> Result<Self> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (k, a) in &self.terms {
            terms.push((k + s, self.var.shift(a, s)?));
        }
        Ok(SkewPoly { var: self.var, terms })
    }

    /// Skew product f·g.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.var));
        }
        if self.var != other.var {
            return Err(Error::MixedFields);
        }
        let mut acc: BTreeMap<usize, FieldElement> = BTreeMap::new();
        for (i, a) in &self.terms {
            for (j, b) in &other.terms {
                let v = a.checked_mul(&self.var.shift(b, *i)?)?;
                match acc.get_mut(&(i + j)) {
                    Some(x) => *x = &*x + &v,
                    None => {
                        acc.insert(i + j, v);
                    }
                }
            }
        }
        Ok(SkewPoly { var: self.var, terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() })
    }

    pub fn pow(&self, e: u32, field: &Field) -> Result<Self> {
        let mut acc = SkewPoly::constant(field.one(), self.var);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Evaluate as an F_q-linear map: Σ a_i c^(±i).
    pub fn eval(&self, c: &FieldElement) -> Result<FieldElement> {
        let mut acc = c.field().zero();
        for (k, a) in &self.terms {
            acc = &acc + &a.checked_mul(&self.var.shift(c, *k)?)?;
        }
        Ok(acc)
    }

    /// The adjoint transform: Σ a_i τ^i ↦ Σ a_i^(-i) σ^i, and
    /// Σ b_i σ^i ↦ Σ b_i^(i) τ^i. Mutually inverse.
    pub fn adjoint(&self) -> Result<Self> {
        let var = self.var.flip();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (k, a) in &self.terms {
            terms.push((*k, a.twist(-self.var.sign() * *k as i64)?));
        }
        Ok(SkewPoly { var, terms })
    }

    /// Twist every coefficient by i (no variable change).
    pub fn twist_coeffs(&self, i: i64) -> Result<Self> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (k, a) in &self.terms {
            terms.push((*k, a.twist(i)?));
        }
        Ok(SkewPoly { var: self.var, terms })
    }

    /// Apply `f` to every coefficient, keeping degrees.
    pub fn try_map_coeffs(&self, f: impl Fn(&FieldElement) -> Result<FieldElement>) -> Result<Self> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (k, a) in &self.terms {
            let v = f(a)?;
            if !v.is_zero() {
                terms.push((*k, v));
            }
        }
        Ok(SkewPoly { var: self.var, terms })
    }

    /// Drop all terms of degree >= k.
    pub fn truncate(&self, k: usize) -> Self {
        SkewPoly { var: self.var, terms: self.terms.iter().filter(|t| t.0 < k).cloned().collect() }
    }
}

fn wrap_coeff(s: String) -> String {
    if s.contains('+') {
        format!("({s})")
    } else {
        s
    }
}

impl fmt::Display for SkewPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let name = self.var.name();
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let x = match k {
                    0 => String::new(),
                    1 => name.to_string(),
                    _ => format!("{name}^{k}"),
                };
                if x.is_empty() {
                    c.to_string()
                } else if c.is_one() {
                    x
                } else {
                    format!("{}*{x}", wrap_coeff(c.to_string()))
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for SkewPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Dense row-major matrix over K{τ} or K{σ}.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SkewMatrix {
    var: Var,
    rows: usize,
    cols: usize,
    entries: Vec<SkewPoly>,
}

impl SkewMatrix {
    pub fn zeros(var: Var, rows: usize, cols: usize) -> Self {
        SkewMatrix { var, rows, cols, entries: vec![SkewPoly::zero(var); rows * cols] }
    }

    pub fn identity(var: Var, n: usize, field: &Field) -> Self {
        Self::scalar(var, n, &field.one())
    }

    /// c·I_n.
    pub fn scalar(var: Var, n: usize, c: &FieldElement) -> Self {
        let mut m = Self::zeros(var, n, n);
        for i in 0..n {
            m.set(i, i, SkewPoly::constant(c.clone(), var));
        }
        m
    }

    pub fn from_rows(var: Var, rows: Vec<Vec<SkewPoly>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            for e in row {
                if !e.is_zero() && e.var() != var {
                    return Err(Error::DimensionMismatch("entries use different variables".into()));
                }
                entries.push(e.with_var(var));
            }
        }
        Ok(SkewMatrix { var, rows: r, cols: c, entries })
    }

    /// 1×1 matrix.
    pub fn single(p: SkewPoly) -> Self {
        SkewMatrix { var: p.var(), rows: 1, cols: 1, entries: vec![p] }
    }

    pub fn var(&self) -> Var {
        self.var
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &SkewPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: SkewPoly) {
        self.entries[i * self.cols + j] = p.with_var(self.var);
    }

    pub fn entries(&self) -> &[SkewPoly] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(SkewPoly::is_zero)
    }

    pub fn field(&self) -> Option<&Field> {
        self.entries.iter().find_map(SkewPoly::field)
    }

    /// Maximum entry degree, None for the zero matrix.
    pub fn degree(&self) -> Option<usize> {
        self.entries.iter().filter_map(SkewPoly::degree).max()
    }

    /// Column degree: max degree over the entries of column j.
    pub fn col_degree(&self, j: usize) -> Option<usize> {
        (0..self.rows).filter_map(|i| self.get(i, j).degree()).max()
    }

    fn same_shape(&self, o: &Self, what: &str) -> Result<()> {
        if self.shape() != o.shape() {
            return Err(Error::DimensionMismatch(format!(
                "{what}: {}x{} vs {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.same_shape(o, "add")?;
        let entries = self.entries.iter().zip(&o.entries).map(|(a, b)| a.add(b)).collect();
        Ok(SkewMatrix { var: self.var, rows: self.rows, cols: self.cols, entries })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        SkewMatrix { var: self.var, rows: self.rows, cols: self.cols, entries: self.entries.iter().map(SkewPoly::neg).collect() }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::DimensionMismatch(format!(
                "mul: {}x{} by {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = Self::zeros(self.var, self.rows, o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = SkewPoly::zero(self.var);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = o.get(k, j);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(b)?);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Left multiplication of every entry by a scalar.
    pub fn scale_left(&self, c: &FieldElement) -> Self {
        SkewMatrix {
            var: self.var,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.scale_left(c)).collect(),
        }
    }

    /// Plain transpose; entries are not twisted.
    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.var, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Entrywise adjoint composed with transpose: entry (i,j) is (X_ji)^σ
    /// (or ^τ for σ-matrices).
    pub fn adjoint(&self) -> Result<Self> {
        let mut out = Self::zeros(self.var.flip(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).adjoint()?);
            }
        }
        Ok(out)
    }

    pub fn try_map(&self, f: impl Fn(&SkewPoly) -> Result<SkewPoly>) -> Result<Self> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            entries.push(f(e)?);
        }
        Ok(SkewMatrix { var: self.var, rows: self.rows, cols: self.cols, entries })
    }

    /// Same entries read in the other variable with every coefficient
    /// twisted by i.
    pub fn twist_coeffs(&self, i: i64) -> Result<Self> {
        self.try_map(|e| e.twist_coeffs(i))
    }

    pub fn with_var(&self, var: Var) -> Self {
        SkewMatrix {
            var,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.clone().with_var(var)).collect(),
        }
    }

    /// Assemble a block matrix; every block row must share heights and every
    /// block column widths.
    pub fn block(blocks: &[Vec<SkewMatrix>]) -> Result<Self> {
        let first = blocks.first().and_then(|r| r.first()).ok_or_else(|| Error::DimensionMismatch("empty block".into()))?;
        let var = first.var;
        let widths: Vec<usize> = blocks[0].iter().map(|b| b.cols).collect();
        let mut rows = 0;
        for br in blocks {
            if br.len() != widths.len() {
                return Err(Error::DimensionMismatch("ragged block rows".into()));
            }
            let h = br[0].rows;
            for (b, &w) in br.iter().zip(&widths) {
                if b.rows != h || b.cols != w {
                    return Err(Error::DimensionMismatch("block sizes disagree".into()));
                }
            }
            rows += h;
        }
        let cols: usize = widths.iter().sum();
        let mut out = Self::zeros(var, rows, cols);
        let mut r0 = 0;
        for br in blocks {
            let mut c0 = 0;
            for b in br {
                for i in 0..b.rows {
                    for j in 0..b.cols {
                        out.set(r0 + i, c0 + j, b.get(i, j).clone());
                    }
                }
                c0 += b.cols;
            }
            r0 += br[0].rows;
        }
        Ok(out)
    }

    /// Block diagonal of square or rectangular blocks.
    pub fn block_diag(var: Var, blocks: &[SkewMatrix]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(var, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let mut out = Self::zeros(self.var, rows.len(), cols.len());
        for (a, i) in rows.clone().enumerate() {
            for (b, j) in cols.clone().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    /// Coefficient matrix at x^k (entries are constants).
    pub fn coeff_matrix(&self, k: usize) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|e| match e.coeff(k) {
                Some(c) => SkewPoly::constant(c.clone(), self.var),
                None => SkewPoly::zero(self.var),
            })
            .collect();
        SkewMatrix { var: self.var, rows: self.rows, cols: self.cols, entries }
    }

    /// Coefficient of entry (i,j) at degree k.
    pub fn coeff(&self, i: usize, j: usize, k: usize) -> Option<&FieldElement> {
        self.get(i, j).coeff(k)
    }

    /// Decompose as Σ A_k x^k, listing the nonzero A_k by ascending k.
    pub fn decompose(&self) -> Vec<(usize, SkewMatrix)> {
        let mut degs: Vec<usize> = self.entries.iter().flat_map(|e| e.terms().iter().map(|t| t.0)).collect();
        degs.sort_unstable();
        degs.dedup();
        degs.into_iter().map(|k| (k, self.coeff_matrix(k))).collect()
    }

    pub fn pow(&self, e: u32, field: &Field) -> Result<Self> {
        let mut acc = Self::identity(self.var, self.rows, field);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Inverse of a constant matrix by Gauss-Jordan elimination.
    pub fn const_inverse(&self, field: &Field) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        if self.degree().unwrap_or(0) > 0 {
            return Err(Error::DimensionMismatch("inverse of a non-constant matrix".into()));
        }
        let n = self.rows;
        let zero = field.zero();
        let mut a: Vec<Vec<FieldElement>> =
            (0..n).map(|i| (0..n).map(|j| self.get(i, j).coeff_or(0, &zero)).collect()).collect();
        let mut inv: Vec<Vec<FieldElement>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { field.one() } else { zero.clone() }).collect()).collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::SingularLeading)?;
            a.swap(col, piv);
            inv.swap(col, piv);
            let s = a[col][col].inv()?;
            for j in 0..n {
                a[col][j] = &a[col][j] * &s;
                inv[col][j] = &inv[col][j] * &s;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for j in 0..n {
                        a[r][j] = &a[r][j] - &(&f * &a[col][j]);
                        inv[r][j] = &inv[r][j] - &(&f * &inv[col][j]);
                    }
                }
            }
        }
        let rows = inv.into_iter().map(|r| r.into_iter().map(|c| SkewPoly::constant(c, self.var)).collect()).collect();
        Self::from_rows(self.var, rows)
    }
}

impl fmt::Display for SkewMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for SkewMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FiniteField;

    fn f3t() -> Field {
        Field::rational(FiniteField::new(3, vec![0, 1], 1).unwrap()).unwrap()
    }

    #[test]
    fn tau_commutation() {
        let k = f3t();
        let tau = SkewPoly::x_pow(&k, 1, Var::Tau);
        let th = SkewPoly::constant(k.theta(), Var::Tau);
        let prod = tau.mul(&th).unwrap();
        assert_eq!(prod, SkewPoly::monomial(k.theta().pow(3).unwrap(), 1, Var::Tau));
        assert_eq!(prod.to_string(), "th^3*tau");
    }

    #[test]
    fn adjoint_roundtrip_and_anti() {
        let k = Field::gf(2, 3).unwrap();
        let g = k.generator();
        let f = SkewPoly::from_terms(Var::Tau, [(0, g.clone()), (2, k.one()), (3, g.pow(3).unwrap())]);
        let h = SkewPoly::from_terms(Var::Tau, [(1, g.pow(5).unwrap()), (2, g.clone())]);
        assert_eq!(f.adjoint().unwrap().adjoint().unwrap(), f);
        let lhs = f.mul(&h).unwrap().adjoint().unwrap();
        let rhs = h.adjoint().unwrap().mul(&f.adjoint().unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn matrix_inverse() {
        let k = Field::gf(3, 2).unwrap();
        let g = SkewPoly::constant(k.generator(), Var::Tau);
        let one = SkewPoly::constant(k.one(), Var::Tau);
        let m = SkewMatrix::from_rows(Var::Tau, vec![vec![g.clone(), one.clone()], vec![one, SkewPoly::zero(Var::Tau)]]).unwrap();
        let inv = m.const_inverse(&k).unwrap();
        assert_eq!(m.mul(&inv).unwrap(), SkewMatrix::identity(Var::Tau, 2, &k));
    }
}
