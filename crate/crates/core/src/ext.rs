//! The t-module structure Π on Ext¹, its Ext¹₀ part and the sequence to 𝔾ₐ^s.

use std::collections::HashMap;

use crate::biderivation::{Biderivation, ExtClass, ReductionPlan};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::skew::{SkewMatrix, SkewPoly, Var};
use crate::tmodule::{check_morphism, TModMorphism, TModule};
use crate::tracked::{tracked_reduce, TrackedMatrix};

/// Coordinate label: coefficient of x^deg in entry (row, col) of δ_t.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisLabel {
    pub row: usize,
    pub col: usize,
    pub deg: usize,
}

/// Enumeration order of the canonical coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasisOrder {
    /// Source column outer, target row, degree inner.
    ColumnMajor,
    /// Target row outer, source column, degree inner.
    RowMajor,
    /// Source columns in the given order, then rows, then degree.
    Columns(Vec<usize>),
}

#[derive(Clone, Debug)]
pub struct ExtStructure {
    pub source: TModule,
    pub target: TModule,
    pub plan: ReductionPlan,
    pub basis: Vec<BasisLabel>,
    pub pi_t: SkewMatrix,
    /// Tracked witnesses U_b(c), one per basis column, with
    /// Ψ_t·(c·e_b) − δ^(U_b(c)) equal to column b of Π_t evaluated at c.
    pub witnesses: Vec<TrackedMatrix>,
    /// Indices of the coordinates projected onto 𝔾ₐ^s.
    pub ga: Vec<usize>,
    index: HashMap<BasisLabel, usize>,
}

/// Π⁰ with its inclusion into Π.
#[derive(Clone, Debug)]
pub struct SubStructure {
    pub basis: Vec<BasisLabel>,
    pub pi0_t: SkewMatrix,
    pub inclusion: SkewMatrix,
}

impl ExtStructure {
    /// Generic builder: tracked reduction of Ψ_t·(c·e_b) for every basis
    /// label b.
    pub fn build(source: &TModule, target: &TModule, order: BasisOrder) -> Result<Self> {
        let plan = ReductionPlan::new(source, target)?;
        let var = source.var();
        let basis = enumerate_basis(&plan, source.dim(), order)?;
        let index: HashMap<BasisLabel, usize> = basis.iter().enumerate().map(|(i, b)| (*b, i)).collect();
        let n = basis.len();
        let mut pi_t = SkewMatrix::zeros(var, n, n);
        let mut witnesses = Vec::with_capacity(n);
        for (b, label) in basis.iter().enumerate() {
            let tr = tracked_reduce(&plan, source, target, label.row, label.col, label.deg)?;
            for (a, out) in basis.iter().enumerate() {
                pi_t.set(a, b, tr.reduced.get(out.row, out.col).slot(out.deg));
            }
            witnesses.push(tr.witness);
        }
        let theta = source.field().theta();
        let ga = (0..n)
            .filter(|&a| {
                basis[a].deg == 0
                    && (0..n).all(|b| {
                        let e = pi_t.get(a, b);
                        if a == b {
                            *e == SkewPoly::constant(theta.clone(), var)
                        } else {
                            e.is_zero()
                        }
                    })
            })
            .collect();
        Ok(ExtStructure { source: source.clone(), target: target.clone(), plan, basis, pi_t, witnesses, ga, index })
    }

    pub fn var(&self) -> Var {
        self.pi_t.var()
    }

    pub fn field(&self) -> &Field {
        self.source.field()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// s, the rank of the 𝔾ₐ quotient.
    pub fn ga_rank(&self) -> usize {
        self.ga.len()
    }

    pub fn position(&self, label: &BasisLabel) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Coordinates of a canonical matrix.
    pub fn coords(&self, canonical: &SkewMatrix) -> Result<Vec<FieldElement>> {
        if !self.plan.is_canonical(canonical) {
            return Err(Error::DimensionMismatch(format!("{canonical} is not in canonical form")));
        }
        let zero = self.field().zero();
        Ok(self.basis.iter().map(|b| canonical.get(b.row, b.col).coeff_or(b.deg, &zero)).collect())
    }

    pub fn from_coords(&self, coords: &[FieldElement]) -> Result<SkewMatrix> {
        if coords.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!("expected {} coordinates, got {}", self.dim(), coords.len())));
        }
        let var = self.var();
        let mut m = SkewMatrix::zeros(var, self.target.dim(), self.source.dim());
        for (b, c) in self.basis.iter().zip(coords) {
            let e = m.get(b.row, b.col).add(&SkewPoly::monomial(c.clone(), b.deg, var));
            m.set(b.row, b.col, e);
        }
        Ok(m)
    }

    /// Canonical class of an arbitrary biderivation for this pair.
    pub fn class_of(&self, delta: &Biderivation) -> Result<ExtClass> {
        if delta.source != self.source || delta.target != self.target {
            return Err(Error::MixedPairs);
        }
        let (canonical, _) = self.plan.reduce(delta)?;
        Ok(ExtClass { source: self.source.clone(), target: self.target.clone(), canonical })
    }

    pub fn class_from_coords(&self, coords: &[FieldElement]) -> Result<ExtClass> {
        Ok(ExtClass { source: self.source.clone(), target: self.target.clone(), canonical: self.from_coords(coords)? })
    }

    /// The structure as a t-module of dimension dim().
    pub fn as_tmodule(&self) -> Result<TModule> {
        TModule::new(self.field(), self.pi_t.clone())
    }

    /// Nilpotent part N of the constant term θI + N.
    pub fn nilpotent(&self) -> Result<SkewMatrix> {
        let theta = self.field().theta();
        self.pi_t.coeff_matrix(0).sub(&SkewMatrix::scalar(self.var(), self.dim(), &theta))
    }

    /// Π⁰: delete the 𝔾ₐ coordinates.
    pub fn ext0(&self) -> SubStructure {
        let keep: Vec<usize> = (0..self.dim()).filter(|i| !self.ga.contains(i)).collect();
        let var = self.var();
        let mut pi0 = SkewMatrix::zeros(var, keep.len(), keep.len());
        let mut inclusion = SkewMatrix::zeros(var, self.dim(), keep.len());
        for (a, &i) in keep.iter().enumerate() {
            inclusion.set(i, a, SkewPoly::constant(self.field().one(), var));
            for (b, &j) in keep.iter().enumerate() {
                pi0.set(a, b, self.pi_t.get(i, j).clone());
            }
        }
        SubStructure { basis: keep.iter().map(|&i| self.basis[i]).collect(), pi0_t: pi0, inclusion }
    }

    /// The 0/1 projection g onto the 𝔾ₐ coordinates (s × dim).
    pub fn projection(&self) -> SkewMatrix {
        let var = self.var();
        let mut g = SkewMatrix::zeros(var, self.ga.len(), self.dim());
        for (a, &i) in self.ga.iter().enumerate() {
            g.set(a, i, SkewPoly::constant(self.field().one(), var));
        }
        g
    }
}

/// Apply a structure matrix to coordinates: out_a = Σ_b eval(M_ab, x_b).
pub fn apply_matrix(m: &SkewMatrix, coords: &[FieldElement], field: &Field) -> Result<Vec<FieldElement>> {
    if m.cols() != coords.len() {
        return Err(Error::DimensionMismatch("coordinate vector length".into()));
    }
    let mut out = Vec::with_capacity(m.rows());
    for a in 0..m.rows() {
        let mut acc = field.zero();
        for (b, x) in coords.iter().enumerate() {
            let e = m.get(a, b);
            if !e.is_zero() {
                acc = &acc + &e.eval(x)?;
            }
        }
        out.push(acc);
    }
    Ok(out)
}

fn enumerate_basis(plan: &ReductionPlan, d: usize, order: BasisOrder) -> Result<Vec<BasisLabel>> {
    let e = plan.rows;
    let degs = &plan.col_degrees;
    let mut out = Vec::with_capacity(plan.dimension());
    match order {
        BasisOrder::ColumnMajor => {
            for (col, &n) in degs.iter().enumerate().take(d) {
                for row in 0..e {
                    out.extend((0..n).map(|deg| BasisLabel { row, col, deg }));
                }
            }
        }
        BasisOrder::RowMajor => {
            for row in 0..e {
                for (col, &n) in degs.iter().enumerate().take(d) {
                    out.extend((0..n).map(|deg| BasisLabel { row, col, deg }));
                }
            }
        }
        BasisOrder::Columns(cols) => {
            let mut sorted = cols.clone();
            sorted.sort_unstable();
            if sorted != (0..d).collect::<Vec<_>>() {
                return Err(Error::DimensionMismatch("column order must be a permutation".into()));
            }
            for col in cols {
                for row in 0..e {
                    out.extend((0..degs[col]).map(|deg| BasisLabel { row, col, deg }));
                }
            }
        }
    }
    Ok(out)
}

fn require_rank_gap(source: &TModule, target: &TModule) -> Result<()> {
    if source.rank() <= target.rank() {
        return Err(Error::UnsupportedRegime(format!(
            "rk source = {} must exceed rk target = {}; for rk source < rk target use duality transport",
            source.rank(),
            target.rank()
        )));
    }
    Ok(())
}

/// Ext¹(φ, ψ) for Drinfeld modules with rk φ > rk ψ; basis e_l = x^l.
pub fn ext_drinfeld_structure(phi: &TModule, psi: &TModule) -> Result<ExtStructure> {
    if !phi.is_drinfeld() || !psi.is_drinfeld() {
        return Err(Error::NotATModule("both modules must be Drinfeld modules".into()));
    }
    require_rank_gap(phi, psi)?;
    ExtStructure::build(phi, psi, BasisOrder::ColumnMajor)
}

/// Ext¹(φ_1 × … × φ_n, ψ_1 × … × ψ_m); block diagonal in the order
/// (source 1: all targets), (source 2: all targets), …
pub fn ext_product_structure(sources: &[TModule], targets: &[TModule]) -> Result<ExtStructure> {
    let first = sources.first().ok_or_else(|| Error::DimensionMismatch("no source modules".into()))?;
    if targets.is_empty() {
        return Err(Error::DimensionMismatch("no target modules".into()));
    }
    for s in sources {
        for t in targets {
            if !s.is_drinfeld() || !t.is_drinfeld() {
                return Err(Error::NotATModule("products are taken of Drinfeld modules".into()));
            }
            require_rank_gap(s, t)?;
        }
    }
    let field = first.field();
    let var = first.var();
    let src = TModule::product(field, var, sources)?;
    let tgt = TModule::product(field, var, targets)?;
    ExtStructure::build(&src, &tgt, BasisOrder::ColumnMajor)
}

/// Ext¹(Φ, ψ) for a t-module Φ with invertible leading matrix.
pub fn ext_tmodule_source(phi: &TModule, psi: &TModule) -> Result<ExtStructure> {
    if !psi.is_drinfeld() {
        return Err(Error::NotATModule("target must be a Drinfeld module".into()));
    }
    require_rank_gap(phi, psi)?;
    phi.leading().const_inverse(phi.field()).map_err(|_| Error::SingularLeading)?;
    ExtStructure::build(phi, psi, BasisOrder::ColumnMajor)
}

/// Ext¹(Φ, C^⊗e), coordinates enumerated row-major.
pub fn ext_carlitz_target(phi: &TModule, e: usize) -> Result<ExtStructure> {
    if phi.rank() < 2 {
        return Err(Error::UnsupportedRegime(format!("rk Φ = {} must be at least 2", phi.rank())));
    }
    if phi.var() != Var::Tau {
        return Err(Error::MixedFields);
    }
    phi.leading().const_inverse(phi.field()).map_err(|_| Error::SingularLeading)?;
    let c = TModule::carlitz_tensor(phi.field(), e);
    ExtStructure::build(phi, &c, BasisOrder::RowMajor)
}

/// σ-side structure for σ-modules with deg φ > deg ψ.
pub fn sigma_ext_structure(phi: &TModule, psi: &TModule) -> Result<ExtStructure> {
    if phi.var() != Var::Sigma || psi.var() != Var::Sigma {
        return Err(Error::DimensionMismatch("σ-side structure needs σ-modules".into()));
    }
    require_rank_gap(phi, psi)?;
    ExtStructure::build(phi, psi, BasisOrder::ColumnMajor)
}

/// τ ↔ σ with every twist index negated; formal twist fields only.
pub fn negate_indices(m: &SkewMatrix) -> Result<SkewMatrix> {
    let flipped = m.try_map(|p| {
        p.try_map_coeffs(|c| {
            c.negate_indices().ok_or_else(|| Error::InvalidField("index negation needs a formal twist field".into()))
        })
    })?;
    Ok(flipped.with_var(m.var().flip()))
}

/// Ext¹_τ(φ, ψ) with rk φ < rk ψ, carried to the σ-side as
/// Ext¹_σ(ψ^σ, φ^σ).
#[derive(Clone, Debug)]
pub struct DualityTransport {
    pub phi: TModule,
    pub psi: TModule,
    /// Structure on Ext¹_σ(ψ^σ, φ^σ).
    pub structure: ExtStructure,
}

pub fn duality_transport(phi: &TModule, psi: &TModule) -> Result<DualityTransport> {
    if phi.var() != Var::Tau || psi.var() != Var::Tau {
        return Err(Error::DimensionMismatch("duality transport starts from τ-modules".into()));
    }
    if phi.rank() >= psi.rank() {
        return Err(Error::UnsupportedRegime(format!(
            "duality transport needs rk φ = {} < rk ψ = {}",
            phi.rank(),
            psi.rank()
        )));
    }
    let psi_s = psi.adjoint()?;
    let phi_s = phi.adjoint()?;
    let structure = ExtStructure::build(&psi_s, &phi_s, BasisOrder::ColumnMajor)?;
    Ok(DualityTransport { phi: phi.clone(), psi: psi.clone(), structure })
}

impl DualityTransport {
    /// δ ↦ δ^σ = ad(δ), as a σ-side biderivation.
    pub fn transport(&self, delta: &Biderivation) -> Result<Biderivation> {
        if delta.source != self.phi || delta.target != self.psi {
            return Err(Error::MixedPairs);
        }
        Biderivation::new(&self.structure.source, &self.structure.target, delta.delta_t.adjoint()?)
    }

    /// Canonical σ-side class of δ^σ.
    pub fn transport_class(&self, delta: &Biderivation) -> Result<ExtClass> {
        self.structure.class_of(&self.transport(delta)?)
    }
}

/// The sequences 0 → Ext¹₀ → Ext¹ → 𝔾ₐ^s → 0 as t-module morphisms.
#[derive(Clone, Debug)]
pub struct GaSequence {
    pub ext0: TModule,
    pub ext: TModule,
    pub ga: TModule,
    pub inclusion: TModMorphism,
    pub projection: TModMorphism,
}

pub fn ga_sequence(e: &ExtStructure) -> Result<GaSequence> {
    let ext = e.as_tmodule()?;
    let sub = e.ext0();
    let ext0 = TModule::new(e.field(), sub.pi0_t.clone())?;
    let s = e.ga_rank();
    let ga = TModule::new(e.field(), SkewMatrix::scalar(e.var(), s, &e.field().theta()))?;
    let inclusion = check_morphism(sub.inclusion, &ext0, &ext)?;
    let projection = check_morphism(e.projection(), &ext, &ga)?;
    Ok(GaSequence { ext0, ext, ga, inclusion, projection })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FiniteField;

    fn f3t() -> Field {
        Field::rational(FiniteField::new(3, vec![0, 1], 1).unwrap()).unwrap()
    }

    fn dr(k: &Field, n: usize) -> TModule {
        TModule::drinfeld(k, Var::Tau, &[(n, k.one())]).unwrap()
    }

    #[test]
    fn rank_two_over_carlitz() {
        let k = f3t();
        let e = ext_drinfeld_structure(&dr(&k, 2), &dr(&k, 1)).unwrap();
        assert_eq!(e.pi_t.to_string(), "[[th, 0], [tau, th + tau^2]]");
        assert_eq!(e.ga, vec![0]);
        let sub = e.ext0();
        assert_eq!(sub.pi0_t.to_string(), "[[th + tau^2]]");
    }

    #[test]
    fn three_over_two_ext0() {
        let k = f3t();
        let e = ext_drinfeld_structure(&dr(&k, 3), &dr(&k, 2)).unwrap();
        let sub = e.ext0();
        assert_eq!(sub.pi0_t.to_string(), "[[th, (2*th^3 + th)*tau^2], [tau^4, th + tau^6]]");
        let seq = ga_sequence(&e).unwrap();
        assert!(seq.projection.f.mul(&seq.inclusion.f).unwrap().is_zero());
    }

    #[test]
    fn unsupported_when_ranks_inverted() {
        let k = f3t();
        assert_eq!(ext_drinfeld_structure(&dr(&k, 2), &dr(&k, 3)).unwrap_err().code(), "UnsupportedRegime");
        assert_eq!(ext_drinfeld_structure(&dr(&k, 2), &dr(&k, 2)).unwrap_err().code(), "UnsupportedRegime");
    }

    #[test]
    fn product_is_block_diagonal() {
        let k = f3t();
        let p = ext_product_structure(&[dr(&k, 3)], &[dr(&k, 2), dr(&k, 1)]).unwrap();
        let a = ext_drinfeld_structure(&dr(&k, 3), &dr(&k, 2)).unwrap();
        let b = ext_drinfeld_structure(&dr(&k, 3), &dr(&k, 1)).unwrap();
        assert_eq!(p.pi_t, SkewMatrix::block_diag(Var::Tau, &[a.pi_t, b.pi_t]));
        assert_eq!(p.ga_rank(), 2);
    }
}
