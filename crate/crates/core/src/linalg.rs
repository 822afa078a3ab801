//! Dense linear algebra over a prime field F_p, plus a linearizer turning
//! F_q-linear maps between skew matrices into F_p matrices.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement, FieldKind};
use crate::skew::{SkewMatrix, SkewPoly, Var};

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1;
    let (mut b, mut e) = (a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Row echelon form over F_p, maintained incrementally.
#[derive(Clone, Debug)]
pub struct Echelon {
    p: u64,
    /// (pivot column, row) with the row normalized so the pivot is 1.
    rows: Vec<(usize, Vec<u64>)>,
}

impl Echelon {
    pub fn new(p: u32) -> Self {
        Echelon { p: p as u64, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the current rows.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let p = self.p;
        let mut v: Vec<u64> = v.iter().map(|x| x % p).collect();
        for (c, row) in &self.rows {
            let f = v.get(*c).copied().unwrap_or(0);
            if f != 0 {
                if v.len() < row.len() {
                    v.resize(row.len(), 0);
                }
                for (x, r) in v.iter_mut().zip(row) {
                    *x = (*x + (p - f) * r) % p;
                }
            }
        }
        v
    }

    /// Insert `v`; returns false when it was already in the span.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        let p = self.p;
        let mut v = self.reduce(v);
        let Some(c) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let s = inv_mod(v[c], p);
        for x in v.iter_mut() {
            *x = *x * s % p;
        }
        for (_, row) in self.rows.iter_mut() {
            let f = row.get(c).copied().unwrap_or(0);
            if f != 0 {
                if row.len() < v.len() {
                    row.resize(v.len(), 0);
                }
                for (x, r) in row.iter_mut().zip(&v) {
                    *x = (*x + (p - f) * r) % p;
                }
            }
        }
        self.rows.push((c, v));
        true
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }
}

/// Kernel of the linear map whose columns are `cols` (each of length `rows`).
pub fn nullspace(cols: &[Vec<u64>], rows: usize, p: u32) -> Vec<Vec<u64>> {
    let n = cols.len();
    let p64 = p as u64;
    // Augment each column with its unit vector and eliminate on the image
    // part; columns whose image reduces to zero give kernel vectors.
    let mut ech = Echelon::new(p);
    let mut kernel = Vec::new();
    for (j, c) in cols.iter().enumerate() {
        let mut v = vec![0u64; rows + n];
        for (i, x) in c.iter().enumerate() {
            v[i] = x % p64;
        }
        v[rows + j] = 1;
        let r = ech.reduce(&v);
        if r[..rows].iter().all(|&x| x == 0) {
            kernel.push(r[rows..].to_vec());
        } else {
            ech.insert(&v);
        }
    }
    kernel
}

/// Some x with Σ_j x_j·cols_j = rhs, if one exists.
pub fn solve(cols: &[Vec<u64>], rhs: &[u64], rows: usize, p: u32) -> Option<Vec<u64>> {
    let n = cols.len();
    let p64 = p as u64;
    let mut ech = Echelon::new(p);
    for (j, c) in cols.iter().enumerate() {
        let mut v = vec![0u64; rows + n];
        for (i, x) in c.iter().enumerate() {
            v[i] = x % p64;
        }
        v[rows + j] = 1;
        ech.insert(&v);
    }
    let mut b = vec![0u64; rows + n];
    for (i, x) in rhs.iter().enumerate() {
        b[i] = x % p64;
    }
    let r = ech.reduce(&b);
    if r[..rows].iter().any(|&x| x != 0) {
        return None;
    }
    // Every echelon row is some (Σ a_j col_j, a); after reduction the tail holds −x.
    Some(r[rows..].iter().map(|&x| (p64 - x) % p64).collect())
}

/// Coordinates of one skew-matrix coefficient over F_p.
#[derive(Clone, Debug)]
pub(crate) struct Linearizer {
    field: Field,
    /// θ-degree bound of the polynomial ansatz (rational fields).
    theta_bound: Option<usize>,
}

/// (entry index, x-degree, θ-degree, F_p digit).
type Key = (usize, usize, usize, usize);

impl Linearizer {
    /// None when the field has no usable F_p-coordinates.
    pub(crate) fn new(field: &Field, theta_bound: usize) -> Option<Self> {
        match field.kind() {
            FieldKind::Finite(_) => Some(Linearizer { field: field.clone(), theta_bound: None }),
            FieldKind::Rational(_) => Some(Linearizer { field: field.clone(), theta_bound: Some(theta_bound) }),
            FieldKind::Formal { .. } => None,
        }
    }

    pub(crate) fn p(&self) -> u32 {
        self.field.characteristic()
    }

    /// Number of F_p unknowns for a rows×cols matrix of degree ≤ bound.
    pub(crate) fn unknowns(&self, rows: usize, cols: usize, bound: usize) -> usize {
        let per = self.field.coeff_degree() * self.theta_bound.map_or(1, |d| d.saturating_add(1));
        rows.saturating_mul(cols).saturating_mul(bound + 1).saturating_mul(per)
    }

    /// An F_p-basis of the admissible coefficients.
    pub(crate) fn scalar_basis(&self) -> Vec<FieldElement> {
        let m = self.field.coeff_degree();
        let mut out = Vec::new();
        let unit = |k: usize| {
            let mut d = vec![0u32; m];
            d[k] = 1;
            self.field.coeff_from_coords(&d)
        };
        match self.theta_bound {
            None => out.extend((0..m).map(|k| self.field.from_coeff(unit(k)))),
            Some(d) => {
                for j in 0..=d {
                    for k in 0..m {
                        let mut c = vec![0u32; j + 1];
                        c[j] = unit(k);
                        out.push(FieldElement::rational_poly(&self.field, c).expect("polynomial"));
                    }
                }
            }
        }
        out
    }

    fn scalar(&self, c: &FieldElement, entry: usize, deg: usize, out: &mut BTreeMap<Key, u64>) -> Result<()> {
        let mut put = |th: usize, coeff: u32| {
            for (digit, v) in self.field.coeff_coords(coeff).into_iter().enumerate() {
                if v != 0 {
                    out.insert((entry, deg, th, digit), v as u64);
                }
            }
        };
        if let Some(i) = c.index() {
            put(0, i);
            return Ok(());
        }
        match c.as_rational() {
            Some((num, den)) => {
                if den.len() != 1 {
                    return Err(Error::UnboundedSearch("linear search needs polynomial coefficients".into()));
                }
                for (th, &a) in num.iter().enumerate() {
                    if a != 0 {
                        put(th, a);
                    }
                }
                Ok(())
            }
            None => Err(Error::UnboundedSearch("no F_p-coordinates for this field".into())),
        }
    }

    pub(crate) fn flatten(&self, m: &SkewMatrix) -> Result<BTreeMap<Key, u64>> {
        let mut out = BTreeMap::new();
        for (e, p) in m.entries().iter().enumerate() {
            for (k, c) in p.terms() {
                self.scalar(c, e, *k, &mut out)?;
            }
        }
        Ok(out)
    }

    /// F_p-basis of rows×cols matrices with entries of degree ≤ bound.
    pub(crate) fn matrix_basis(&self, var: Var, rows: usize, cols: usize, bound: usize) -> Vec<SkewMatrix> {
        let scalars = self.scalar_basis();
        let mut out = Vec::new();
        for i in 0..rows {
            for j in 0..cols {
                for k in 0..=bound {
                    for s in &scalars {
                        let mut u = SkewMatrix::zeros(var, rows, cols);
                        u.set(i, j, SkewPoly::monomial(s.clone(), k, var));
                        out.push(u);
                    }
                }
            }
        }
        out
    }
}

/// Dense columns from sparse keyed vectors, sharing one key index.
pub(crate) fn densify(vectors: &[BTreeMap<Key, u64>]) -> (Vec<Vec<u64>>, BTreeMap<Key, usize>) {
    let mut index = BTreeMap::new();
    for v in vectors {
        for k in v.keys() {
            let n = index.len();
            index.entry(*k).or_insert(n);
        }
    }
    let cols = vectors
        .iter()
        .map(|v| {
            let mut c = vec![0u64; index.len()];
            for (k, x) in v {
                c[index[k]] = *x;
            }
            c
        })
        .collect();
    (cols, index)
}

/// Σ x_j·basis_j for F_p coefficients x.
pub(crate) fn combine(basis: &[SkewMatrix], x: &[u64], field: &Field) -> Result<SkewMatrix> {
    let first = basis.first().ok_or_else(|| Error::DimensionMismatch("empty basis".into()))?;
    let mut acc = SkewMatrix::zeros(first.var(), first.rows(), first.cols());
    for (b, &c) in basis.iter().zip(x) {
        if c != 0 {
            acc = acc.add(&b.scale_left(&field.from_int(c as i64)))?;
        }
    }
    Ok(acc)
}
