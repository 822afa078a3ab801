//! Symbolic reduction with a tracked scalar c.
//!
//! A [`TrackedPoly`] stands for Σ_l w_l(c)·x^l where each tracker w_l is a
//! skew polynomial evaluated as an F_q-linear map at the unknown scalar c.
//! Reducing Ψ_t·(c·x^k·E_ij) with tracked coefficients produces column
//! (i, j, k) of the structure matrix Π_t.

use std::collections::BTreeMap;

use crate::biderivation::ReductionPlan;
use crate::error::Result;
use crate::field::FieldElement;
use crate::skew::{SkewMatrix, SkewPoly, Var};
use crate::tmodule::TModule;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrackedPoly {
    var: Var,
    slots: BTreeMap<usize, SkewPoly>,
}

impl TrackedPoly {
    pub fn zero(var: Var) -> Self {
        TrackedPoly { var, slots: BTreeMap::new() }
    }

    /// c·x^k.
    pub fn generator(one: &FieldElement, k: usize, var: Var) -> Self {
        let mut slots = BTreeMap::new();
        slots.insert(k, SkewPoly::constant(one.clone(), var));
        TrackedPoly { var, slots }
    }

    /// Single slot `k` holding tracker `w`.
    pub fn single(w: SkewPoly, k: usize, var: Var) -> Self {
        let mut t = Self::zero(var);
        t.insert(k, w);
        t
    }

    fn insert(&mut self, k: usize, w: SkewPoly) {
        let cur = self.slots.remove(&k).unwrap_or_else(|| SkewPoly::zero(self.var));
        let sum = cur.add(&w);
        if !sum.is_zero() {
            self.slots.insert(k, sum);
        }
    }

    pub fn slots(&self) -> &BTreeMap<usize, SkewPoly> {
        &self.slots
    }

    /// Tracker at slot k (zero when absent).
    pub fn slot(&self, k: usize) -> SkewPoly {
        self.slots.get(&k).cloned().unwrap_or_else(|| SkewPoly::zero(self.var))
    }

    pub fn degree(&self) -> Option<usize> {
        self.slots.keys().next_back().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, w) in &o.slots {
            out.insert(*k, w.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        TrackedPoly { var: self.var, slots: self.slots.iter().map(|(k, w)| (*k, w.neg())).collect() }
    }

    /// f·T: the term f_s x^s · w_l(c) x^l lands at slot s+l with tracker
    /// (f_s x^s)·w_l.
    pub fn left_mul(&self, f: &SkewPoly) -> Result<Self> {
        let mut out = Self::zero(self.var);
        for (s, fs) in f.terms() {
            let mono = SkewPoly::monomial(fs.clone(), *s, self.var);
            for (l, w) in &self.slots {
                out.insert(s + l, mono.mul(w)?);
            }
        }
        Ok(out)
    }

    /// T·g: w_l(c) x^l · g_s x^s = (g_s^(±l) w_l)(c) x^(l+s).
    pub fn right_mul(&self, g: &SkewPoly) -> Result<Self> {
        let mut out = Self::zero(self.var);
        for (l, w) in &self.slots {
            for (s, gs) in g.terms() {
                out.insert(l + s, w.scale_left(&self.var.shift(gs, *l)?));
            }
        }
        Ok(out)
    }

    /// Substitute a concrete scalar.
    pub fn evaluate(&self, c: &FieldElement) -> Result<SkewPoly> {
        let mut terms = Vec::with_capacity(self.slots.len());
        for (k, w) in &self.slots {
            terms.push((*k, w.eval(c)?));
        }
        Ok(SkewPoly::from_terms(self.var, terms))
    }
}

/// Dense matrix of tracked polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrackedMatrix {
    pub var: Var,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<TrackedPoly>,
}

impl TrackedMatrix {
    pub fn zeros(var: Var, rows: usize, cols: usize) -> Self {
        TrackedMatrix { var, rows, cols, entries: vec![TrackedPoly::zero(var); rows * cols] }
    }

    pub fn get(&self, i: usize, j: usize) -> &TrackedPoly {
        &self.entries[i * self.cols + j]
    }

    fn get_mut(&mut self, i: usize, j: usize) -> &mut TrackedPoly {
        &mut self.entries[i * self.cols + j]
    }

    /// Plain matrix times tracked matrix.
    pub fn left_mul(&self, m: &SkewMatrix) -> Result<Self> {
        let mut out = Self::zeros(self.var, m.rows(), self.cols);
        for i in 0..m.rows() {
            for j in 0..self.cols {
                let mut acc = TrackedPoly::zero(self.var);
                for k in 0..m.cols() {
                    if m.get(i, k).is_zero() || self.get(k, j).is_zero() {
                        continue;
                    }
                    acc = acc.add(&self.get(k, j).left_mul(m.get(i, k))?);
                }
                *out.get_mut(i, j) = acc;
            }
        }
        Ok(out)
    }

    /// Tracked matrix times plain matrix.
    pub fn right_mul(&self, m: &SkewMatrix) -> Result<Self> {
        let mut out = Self::zeros(self.var, self.rows, m.cols());
        for i in 0..self.rows {
            for j in 0..m.cols() {
                let mut acc = TrackedPoly::zero(self.var);
                for k in 0..self.cols {
                    if self.get(i, k).is_zero() || m.get(k, j).is_zero() {
                        continue;
                    }
                    acc = acc.add(&self.get(i, k).right_mul(m.get(k, j))?);
                }
                *out.get_mut(i, j) = acc;
            }
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let entries = self.entries.iter().zip(&o.entries).map(|(a, b)| a.add(&b.neg())).collect();
        TrackedMatrix { entries, ..self.clone() }
    }

    pub fn add(&self, o: &Self) -> Self {
        let entries = self.entries.iter().zip(&o.entries).map(|(a, b)| a.add(b)).collect();
        TrackedMatrix { entries, ..self.clone() }
    }

    pub fn evaluate(&self, c: &FieldElement) -> Result<SkewMatrix> {
        let mut out = SkewMatrix::zeros(self.var, self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).evaluate(c)?);
            }
        }
        Ok(out)
    }
}

/// Result of a tracked reduction: reduced(c) = Ψ_t·(c x^k E_ij) − δ^(U(c)).
#[derive(Clone, Debug)]
pub struct TrackedReduction {
    pub reduced: TrackedMatrix,
    pub witness: TrackedMatrix,
}

/// Tracked reduction of Ψ_t·(c·x^k·E_{row,col}).
pub fn tracked_reduce(plan: &ReductionPlan, source: &TModule, target: &TModule, row: usize, col: usize, k: usize) -> Result<TrackedReduction> {
    let var = plan.var;
    let field = source.field();
    let (e, d) = (target.dim(), source.dim());
    let mut gen = TrackedMatrix::zeros(var, e, d);
    *gen.get_mut(row, col) = TrackedPoly::generator(&field.one(), k, var);
    let mut cur = gen.left_mul(target.phi_t())?;
    let mut witness = TrackedMatrix::zeros(var, e, d);
    let zero = field.zero();
    for leaf in &plan.leaves {
        while let Some((i, l, level)) = plan.next_target(leaf, |a, b| cur.get(a, b).degree()) {
            let top = cur.get(i, l).degree().expect("nonzero");
            let w = cur.get(i, l).slot(top);
            // U = w·x^level·E_{i, l−lo}·LC^-1 as a tracked matrix.
            let mut u = TrackedMatrix::zeros(var, e, d);
            let j = l - leaf.lo;
            for m in 0..leaf.hi - leaf.lo {
                let a = leaf.lc_inv.get(j, m).coeff_or(0, &zero);
                if a.is_zero() {
                    continue;
                }
                let tracker = w.scale_left(&var.shift(&a, level)?);
                *u.get_mut(i, leaf.lo + m) = TrackedPoly::single(tracker, level, var);
            }
            let inner = u.right_mul(source.phi_t())?.sub(&u.left_mul(target.phi_t())?);
            cur = cur.sub(&inner);
            witness = witness.add(&u);
        }
    }
    Ok(TrackedReduction { reduced: cur, witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biderivation::{inner_biderivation, reduce_canonical, Biderivation};
    use crate::field::{Field, FiniteField};

    #[test]
    fn specialization_matches_concrete() {
        let k = Field::gf(3, 2).unwrap();
        let phi = TModule::drinfeld(&k, Var::Tau, &[(1, k.generator()), (3, k.one())]).unwrap();
        let psi = TModule::drinfeld(&k, Var::Tau, &[(2, k.one())]).unwrap();
        let plan = ReductionPlan::new(&phi, &psi).unwrap();
        for deg in 0..3 {
            let tr = tracked_reduce(&plan, &phi, &psi, 0, 0, deg).unwrap();
            for idx in 0..9 {
                let c = k.element(idx).unwrap();
                let w = SkewMatrix::single(SkewPoly::monomial(c.clone(), deg, Var::Tau));
                let d = Biderivation::new(&phi, &psi, psi.phi_t().mul(&w).unwrap()).unwrap();
                let (cls, _) = reduce_canonical(&d).unwrap();
                assert_eq!(tr.reduced.evaluate(&c).unwrap(), cls.canonical);
                let u = tr.witness.evaluate(&c).unwrap();
                let inner = inner_biderivation(&u, &phi, &psi).unwrap();
                assert_eq!(d.delta_t.sub(&inner.delta_t).unwrap(), cls.canonical);
            }
        }
    }

    #[test]
    fn example_columns_over_rational() {
        let k = Field::rational(FiniteField::new(3, vec![0, 1], 1).unwrap()).unwrap();
        let phi = TModule::drinfeld(&k, Var::Tau, &[(3, k.one())]).unwrap();
        let psi = TModule::drinfeld(&k, Var::Tau, &[(2, k.one())]).unwrap();
        let plan = ReductionPlan::new(&phi, &psi).unwrap();
        let col = |deg| {
            let r = tracked_reduce(&plan, &phi, &psi, 0, 0, deg).unwrap().reduced;
            (0..3).map(|l| r.get(0, 0).slot(l).to_string()).collect::<Vec<_>>()
        };
        assert_eq!(col(0), ["th", "0", "tau^2"]);
        assert_eq!(col(1), ["0", "th", "tau^4"]);
        assert_eq!(col(2), ["0", "(2*th^3 + th)*tau^2", "th + tau^6"]);
    }
}
