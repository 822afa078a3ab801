//! Baer sums, the F_q[t]-action, pullback and pushout, split testing,
//! bounded Hom spaces and the six-term sequence maps.

use crate::biderivation::{assemble_extension, inner_biderivation, reduce_canonical, Biderivation, ExtClass, ReductionPlan};
use crate::error::{Error, Result};
use crate::ext::{BasisOrder, ExtStructure};
use crate::field::{Field, FieldElement, FieldKind};
use crate::linalg::{combine, densify, nullspace, solve, Echelon, Linearizer};
use crate::skew::{SkewMatrix, SkewPoly, Var};
use crate::tmodule::{check_morphism, TModMorphism, TModule, TPoly};

/// Largest x-degree bound accepted for linear searches over F_q(θ).
pub const RATIONAL_BOUND_CEILING: usize = 8;
/// Largest number of F_p unknowns a linear search may use.
pub const MAX_UNKNOWNS: usize = 6000;

impl ExtClass {
    pub fn zero(source: &TModule, target: &TModule) -> Self {
        ExtClass {
            source: source.clone(),
            target: target.clone(),
            canonical: SkewMatrix::zeros(source.var(), target.dim(), source.dim()),
        }
    }

    pub fn neg(&self) -> Self {
        ExtClass { canonical: self.canonical.neg(), ..self.clone() }
    }

    /// The middle term of the extension this class describes.
    pub fn middle(&self) -> Result<TModule> {
        assemble_extension(&self.as_biderivation())
    }
}

fn canonical(delta: &Biderivation) -> Result<ExtClass> {
    Ok(reduce_canonical(delta)?.0)
}

pub fn baer_sum(a: &ExtClass, b: &ExtClass) -> Result<ExtClass> {
    if a.source != b.source || a.target != b.target {
        return Err(Error::MixedPairs);
    }
    canonical(&a.as_biderivation().add(&b.as_biderivation())?)
}

/// Ψ_a·δ_t, before reduction.
pub fn act_biderivation(a: &TPoly, delta: &Biderivation) -> Result<Biderivation> {
    let psi_a = delta.target.phi_a(a)?;
    Biderivation::new(&delta.source, &delta.target, psi_a.mul(&delta.delta_t)?)
}

/// a * [δ] = [Ψ_a·δ].
pub fn t_action(a: &TPoly, delta: &ExtClass) -> Result<ExtClass> {
    canonical(&act_biderivation(a, &delta.as_biderivation())?)
}

/// Pullback of δ (E → F) along g: G → E, given by δ·g. The morphism
/// [[g, 0], [0, 1]] between the middle terms is checked.
pub fn pullback(delta: &Biderivation, g: &TModMorphism) -> Result<Biderivation> {
    if g.target != delta.source {
        return Err(Error::DimensionMismatch("g must land in the source of δ".into()));
    }
    let out = Biderivation::new(&g.source, &delta.target, delta.delta_t.mul(&g.f)?)?;
    let var = delta.source.var();
    let e = delta.target.dim();
    let field = delta.source.field();
    let map = SkewMatrix::block(&[
        vec![g.f.clone(), SkewMatrix::zeros(var, g.f.rows(), e)],
        vec![SkewMatrix::zeros(var, e, g.f.cols()), SkewMatrix::identity(var, e, field)],
    ])?;
    check_morphism(map, &assemble_extension(&out)?, &assemble_extension(delta)?)?;
    Ok(out)
}

/// Pushout of δ (E → F) along f: F → G, given by f·δ. The morphism
/// [[1, 0], [0, f]] between the middle terms is checked.
pub fn pushout(delta: &Biderivation, f: &TModMorphism) -> Result<Biderivation> {
    if f.source != delta.target {
        return Err(Error::DimensionMismatch("f must start at the target of δ".into()));
    }
    let out = Biderivation::new(&delta.source, &f.target, f.f.mul(&delta.delta_t)?)?;
    let var = delta.source.var();
    let d = delta.source.dim();
    let field = delta.source.field();
    let map = SkewMatrix::block(&[
        vec![SkewMatrix::identity(var, d, field), SkewMatrix::zeros(var, d, f.f.cols())],
        vec![SkewMatrix::zeros(var, f.f.rows(), d), f.f.clone()],
    ])?;
    check_morphism(map, &assemble_extension(delta)?, &assemble_extension(&out)?)?;
    Ok(out)
}

/// Outcome of a split test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SplitVerdict {
    /// δ = δ^(U).
    Split(SkewMatrix),
    NotSplit,
    /// No witness of degree ≤ B exists; larger witnesses were not searched.
    Inconclusive(usize),
}

/// Decide whether δ is inner.
///
/// With a canonical form (on either side of the duality) the answer is exact.
/// Otherwise a linear search over witnesses of degree ≤ `bound` is run.
pub fn is_split(delta: &Biderivation, bound: Option<usize>) -> Result<SplitVerdict> {
    let (src, tgt) = (&delta.source, &delta.target);
    if let Ok(plan) = ReductionPlan::new(src, tgt) {
        let (canon, u) = plan.reduce(delta)?;
        return Ok(if canon.is_zero() { SplitVerdict::Split(u) } else { SplitVerdict::NotSplit });
    }
    if src.field().is_perfect() {
        if let Some(v) = split_via_adjoint(delta)? {
            return Ok(v);
        }
    }
    let b = bound.unwrap_or_else(|| delta.delta_t.degree().unwrap_or(0) + src.rank().max(tgt.rank()));
    Ok(match witness_search(delta, b)? {
        Some(u) => SplitVerdict::Split(u),
        None => SplitVerdict::Inconclusive(b),
    })
}

/// Linear search for U of degree ≤ bound with δ^(U) = δ. None when no such
/// U exists or the search space cannot be set up.
pub fn witness_search(delta: &Biderivation, bound: usize) -> Result<Option<SkewMatrix>> {
    let (src, tgt) = (&delta.source, &delta.target);
    let Some(lin) = linearizer(src.field(), &[src, tgt], Some(&delta.delta_t), bound)? else {
        return Ok(None);
    };
    if lin.unknowns(tgt.dim(), src.dim(), bound) > MAX_UNKNOWNS {
        return Ok(None);
    }
    let basis = lin.matrix_basis(src.var(), tgt.dim(), src.dim(), bound);
    if basis.is_empty() {
        return Ok(delta.delta_t.is_zero().then(|| delta.delta_t.clone()));
    }
    let mut images = Vec::with_capacity(basis.len() + 1);
    for u in &basis {
        images.push(lin.flatten(&inner_biderivation(u, src, tgt)?.delta_t)?);
    }
    images.push(lin.flatten(&delta.delta_t)?);
    let (mut cols, _) = densify(&images);
    let rhs = cols.pop().expect("rhs");
    let rows = rhs.len();
    match solve(&cols, &rhs, rows, lin.p()) {
        Some(x) => {
            let u = combine(&basis, &x, src.field())?;
            debug_assert_eq!(inner_biderivation(&u, src, tgt)?.delta_t, delta.delta_t);
            Ok(Some(u))
        }
        None => Ok(None),
    }
}

/// δ is inner iff ad(δ) is inner on the σ-side; a σ-witness V gives U = −ad(V).
fn split_via_adjoint(delta: &Biderivation) -> Result<Option<SplitVerdict>> {
    let (Ok(psi_s), Ok(phi_s)) = (delta.target.adjoint(), delta.source.adjoint()) else {
        return Ok(None);
    };
    let Ok(plan) = ReductionPlan::new(&psi_s, &phi_s) else {
        return Ok(None);
    };
    let d_s = Biderivation::new(&psi_s, &phi_s, delta.delta_t.adjoint()?)?;
    let (canon, v) = plan.reduce(&d_s)?;
    if !canon.is_zero() {
        return Ok(Some(SplitVerdict::NotSplit));
    }
    let u = v.adjoint()?.neg();
    if inner_biderivation(&u, &delta.source, &delta.target)?.delta_t != delta.delta_t {
        return Err(Error::UnsupportedRegime("adjoint witness failed to transport".into()));
    }
    Ok(Some(SplitVerdict::Split(u)))
}

/// θ-degree bound for polynomial ansatz over F_q(θ).
fn theta_bound(field: &Field, mods: &[&TModule], extra: Option<&SkewMatrix>, b: usize) -> usize {
    let mut h = 1usize;
    let mut scan = |m: &SkewMatrix| {
        for p in m.entries() {
            for (_, c) in p.terms() {
                if let Some((num, _)) = c.as_rational() {
                    h = h.max(num.len().saturating_sub(1));
                }
            }
        }
    };
    for m in mods {
        scan(m.phi_t());
    }
    if let Some(x) = extra {
        scan(x);
    }
    let q = field.q() as usize;
    h.saturating_mul(q.saturating_pow(b as u32)).max(1)
}

fn linearizer(field: &Field, mods: &[&TModule], extra: Option<&SkewMatrix>, b: usize) -> Result<Option<Linearizer>> {
    match field.kind() {
        FieldKind::Formal { .. } => Ok(None),
        FieldKind::Rational(_) => {
            if b > RATIONAL_BOUND_CEILING {
                return Ok(None);
            }
            Ok(Linearizer::new(field, theta_bound(field, mods, extra, b)))
        }
        FieldKind::Finite(_) => Ok(Linearizer::new(field, 0)),
    }
}

/// A bounded basis of Hom(source, target).
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub source: TModule,
    pub target: TModule,
    pub bound: usize,
    /// F_q-linearly independent morphisms of degree ≤ bound.
    pub basis: Vec<SkewMatrix>,
    /// True when every morphism is known to lie in the span.
    pub complete: bool,
}

/// Column degrees with invertible leading matrix, or None.
fn column_lc_degrees(m: &TModule) -> Option<Vec<usize>> {
    let phi = m.phi_t();
    let var = m.var();
    let d = m.dim();
    let mut degs = Vec::with_capacity(d);
    let mut lc = SkewMatrix::zeros(var, d, d);
    for j in 0..d {
        let n = phi.col_degree(j)?;
        degs.push(n);
        for i in 0..d {
            if let Some(c) = phi.coeff(i, j, n) {
                lc.set(i, j, SkewPoly::constant(c.clone(), var));
            }
        }
    }
    lc.const_inverse(m.field()).ok().map(|_| degs)
}

/// Common row degree with invertible leading matrix, or None.
fn uniform_row_degree(m: &TModule) -> Option<usize> {
    let phi = m.phi_t();
    let var = m.var();
    let d = m.dim();
    let n = phi.degree()?;
    let mut lc = SkewMatrix::zeros(var, d, d);
    for i in 0..d {
        let top = (0..d).filter_map(|k| phi.get(i, k).degree()).max()?;
        if top != n {
            return None;
        }
        for k in 0..d {
            if let Some(c) = phi.coeff(i, k, n) {
                lc.set(i, k, SkewPoly::constant(c.clone(), var));
            }
        }
    }
    lc.const_inverse(m.field()).ok().map(|_| n)
}

/// Leading-term comparison shows every morphism source → target is zero.
pub fn hom_forced_zero(source: &TModule, target: &TModule) -> bool {
    if source.dim() == 0 || target.dim() == 0 {
        return true;
    }
    let src_deg = source.phi_t().degree().unwrap_or(0);
    let tgt_deg = target.phi_t().degree().unwrap_or(0);
    if let Some(degs) = column_lc_degrees(source) {
        if degs.iter().all(|&n| n > tgt_deg) {
            return true;
        }
    }
    matches!(uniform_row_degree(target), Some(m) if m > src_deg)
}

/// F_p-spanning set of the constants F_q inside the field.
fn fq_spanning_set(field: &Field) -> Vec<FieldElement> {
    let m = field.coeff_degree();
    let units = (0..m).map(|k| {
        let mut d = vec![0u32; m];
        d[k] = 1;
        field.from_coeff(field.coeff_from_coords(&d))
    });
    match field.size() {
        // Trace down to F_q of an F_p-basis of K.
        Some(size) => {
            let q = field.q() as u64;
            let mut n = 0u32;
            let mut acc = 1u64;
            while acc < size as u64 {
                acc *= q;
                n += 1;
            }
            units
                .map(|b| {
                    let mut t = field.zero();
                    for i in 0..n {
                        t = &t + &b.twist(i as i64).expect("finite twist");
                    }
                    t
                })
                .collect()
        }
        None => units.collect(),
    }
}

/// Morphisms f: source → target (f·Φ_t = Ψ_t·f) of degree ≤ bound.
pub fn hom_space(source: &TModule, target: &TModule, bound: usize) -> Result<HomSpace> {
    if source.field() != target.field() || source.var() != target.var() {
        return Err(Error::MixedFields);
    }
    let empty = |complete| HomSpace { source: source.clone(), target: target.clone(), bound, basis: Vec::new(), complete };
    if hom_forced_zero(source, target) {
        return Ok(empty(true));
    }
    let field = source.field();
    let lin = match linearizer(field, &[source, target], None, bound)? {
        Some(l) => l,
        None => {
            return Err(Error::UnboundedSearch(format!(
                "Hom over {} needs a finite search space; bound {bound} exceeds what can be searched",
                field.header()
            )))
        }
    };
    let n = lin.unknowns(target.dim(), source.dim(), bound);
    if n > MAX_UNKNOWNS {
        return Err(Error::UnboundedSearch(format!("{n} unknowns exceed the ceiling {MAX_UNKNOWNS}")));
    }
    let basis = lin.matrix_basis(source.var(), target.dim(), source.dim(), bound);
    let mut images = Vec::with_capacity(basis.len());
    for f in &basis {
        let r = f.mul(source.phi_t())?.sub(&target.phi_t().mul(f)?)?;
        images.push(lin.flatten(&r)?);
    }
    let (cols, index) = densify(&images);
    let kernel = nullspace(&cols, index.len(), lin.p());
    let mut sols = Vec::with_capacity(kernel.len());
    for x in &kernel {
        sols.push(combine(&basis, x, field)?);
    }
    // Thin an F_p-basis down to an F_q-basis.
    let scalars = fq_spanning_set(field);
    let mut chosen = Vec::new();
    let mut flat = Vec::new();
    for s in &sols {
        flat.push(lin.flatten(s)?);
        for l in &scalars {
            flat.push(lin.flatten(&s.scale_left(l))?);
        }
    }
    let (dense, _) = densify(&flat);
    let mut ech = Echelon::new(lin.p());
    let stride = scalars.len() + 1;
    for (i, s) in sols.into_iter().enumerate() {
        if ech.contains(&dense[i * stride]) {
            continue;
        }
        for v in &dense[i * stride..(i + 1) * stride] {
            ech.insert(v);
        }
        chosen.push(s);
    }
    Ok(HomSpace { basis: chosen, ..empty(false) })
}

/// The six-term sequences attached to 0 → F → X → E → 0 given by δ
/// (source E, target F) and a module G.
#[derive(Clone, Debug)]
pub struct SixTerm {
    pub delta: Biderivation,
    pub g: TModule,
    pub x: TModule,
}

/// Ext¹(E,G) → Ext¹(X,G) → Ext¹(F,G) laid out as one structure.
#[derive(Clone, Debug)]
pub struct ExtSequence {
    pub sub: ExtStructure,
    pub middle: ExtStructure,
    pub quotient: ExtStructure,
    /// Lower-left block of the middle structure.
    pub delta_t: SkewMatrix,
}

pub fn six_term_maps(delta: &Biderivation, g: &TModule) -> Result<SixTerm> {
    if g.field() != delta.source.field() || g.var() != delta.source.var() {
        return Err(Error::MixedFields);
    }
    Ok(SixTerm { delta: delta.clone(), g: g.clone(), x: assemble_extension(delta)? })
}

impl SixTerm {
    pub fn e(&self) -> &TModule {
        &self.delta.source
    }

    pub fn f(&self) -> &TModule {
        &self.delta.target
    }

    fn var(&self) -> Var {
        self.x.var()
    }

    /// i = [0; 1]: F → X.
    pub fn inclusion(&self) -> SkewMatrix {
        let (d, e) = (self.e().dim(), self.f().dim());
        let mut m = SkewMatrix::zeros(self.var(), d + e, e);
        for k in 0..e {
            m.set(d + k, k, SkewPoly::constant(self.x.field().one(), self.var()));
        }
        m
    }

    /// π = [1, 0]: X → E.
    pub fn projection(&self) -> SkewMatrix {
        let (d, e) = (self.e().dim(), self.f().dim());
        let mut m = SkewMatrix::zeros(self.var(), d, d + e);
        for k in 0..d {
            m.set(k, k, SkewPoly::constant(self.x.field().one(), self.var()));
        }
        m
    }

    // Maps of 0 → Hom(G,F) → Hom(G,X) → Hom(G,E) → Ext¹(G,F) → Ext¹(G,X) → Ext¹(G,E) → 0.

    pub fn cov_hom_i(&self, f: &SkewMatrix) -> Result<SkewMatrix> {
        check_morphism(f.clone(), &self.g, self.f())?;
        self.inclusion().mul(f)
    }

    pub fn cov_hom_pi(&self, f: &SkewMatrix) -> Result<SkewMatrix> {
        check_morphism(f.clone(), &self.g, &self.x)?;
        self.projection().mul(f)
    }

    /// f ↦ δ·f.
    pub fn cov_connecting(&self, f: &SkewMatrix) -> Result<Biderivation> {
        check_morphism(f.clone(), &self.g, self.e())?;
        Biderivation::new(&self.g, self.f(), self.delta.delta_t.mul(f)?)
    }

    /// η ↦ −i·η.
    pub fn cov_ext_i(&self, eta: &Biderivation) -> Result<Biderivation> {
        self.expect_pair(eta, &self.g, self.f())?;
        Biderivation::new(&self.g, &self.x, self.inclusion().mul(&eta.delta_t)?.neg())
    }

    /// η ↦ −π·η.
    pub fn cov_ext_pi(&self, eta: &Biderivation) -> Result<Biderivation> {
        self.expect_pair(eta, &self.g, &self.x)?;
        Biderivation::new(&self.g, self.e(), self.projection().mul(&eta.delta_t)?.neg())
    }

    // Maps of 0 → Hom(E,G) → Hom(X,G) → Hom(F,G) → Ext¹(E,G) → Ext¹(X,G) → Ext¹(F,G) → 0.

    pub fn con_hom_pi(&self, f: &SkewMatrix) -> Result<SkewMatrix> {
        check_morphism(f.clone(), self.e(), &self.g)?;
        f.mul(&self.projection())
    }

    pub fn con_hom_i(&self, f: &SkewMatrix) -> Result<SkewMatrix> {
        check_morphism(f.clone(), &self.x, &self.g)?;
        f.mul(&self.inclusion())
    }

    /// f ↦ f·δ.
    pub fn con_connecting(&self, f: &SkewMatrix) -> Result<Biderivation> {
        check_morphism(f.clone(), self.f(), &self.g)?;
        Biderivation::new(self.e(), &self.g, f.mul(&self.delta.delta_t)?)
    }

    /// η ↦ η·(−π).
    pub fn con_ext_pi(&self, eta: &Biderivation) -> Result<Biderivation> {
        self.expect_pair(eta, self.e(), &self.g)?;
        Biderivation::new(&self.x, &self.g, eta.delta_t.mul(&self.projection())?.neg())
    }

    /// η ↦ η·(−i).
    pub fn con_ext_i(&self, eta: &Biderivation) -> Result<Biderivation> {
        self.expect_pair(eta, &self.x, &self.g)?;
        Biderivation::new(self.f(), &self.g, eta.delta_t.mul(&self.inclusion())?.neg())
    }

    fn expect_pair(&self, eta: &Biderivation, src: &TModule, tgt: &TModule) -> Result<()> {
        if &eta.source != src || &eta.target != tgt {
            return Err(Error::MixedPairs);
        }
        Ok(())
    }

    /// Structures on Ext¹(E,G), Ext¹(X,G), Ext¹(F,G), with the middle basis
    /// listing the F-columns of X first so that its matrix is block lower
    /// triangular [[Π(F,G), 0], [Δ, Π(E,G)]].
    pub fn ext_sequence(&self) -> Result<ExtSequence> {
        let (d, e) = (self.e().dim(), self.f().dim());
        let order: Vec<usize> = (d..d + e).chain(0..d).collect();
        let middle = ExtStructure::build(&self.x, &self.g, BasisOrder::Columns(order))?;
        let sub = ExtStructure::build(self.e(), &self.g, BasisOrder::ColumnMajor)?;
        let quotient = ExtStructure::build(self.f(), &self.g, BasisOrder::ColumnMajor)?;
        let nq = quotient.dim();
        let n = middle.dim();
        if n != nq + sub.dim() {
            return Err(Error::DimensionMismatch("Ext¹(X,G) does not split into the outer terms".into()));
        }
        let top_right = middle.pi_t.submatrix(0..nq, nq..n);
        if !top_right.is_zero()
            || middle.pi_t.submatrix(0..nq, 0..nq) != quotient.pi_t
            || middle.pi_t.submatrix(nq..n, nq..n) != sub.pi_t
        {
            return Err(Error::UnsupportedRegime("Ext¹(X,G) is not block triangular in the outer structures".into()));
        }
        let delta_t = middle.pi_t.submatrix(nq..n, 0..nq);
        Ok(ExtSequence { sub, middle, quotient, delta_t })
    }
}
