//! Biderivations, inner biderivations and reduction to canonical form.
//!
//! A biderivation from Φ (dim d) to Ψ (dim e) is determined by δ_t, an e×d
//! matrix. Two biderivations are equivalent when they differ by an inner
//! biderivation δ^(U) = U·Φ_t − Ψ_t·U.
//!
//! Canonical reduction works column by column. Source column l has degree
//! n_l (within its diagonal block, see [`ReductionPlan`]); an entry of column
//! l is reduced once its degree is below n_l. The generator killing the top
//! term c·x^(n_j + k) of entry (i, j) is U = c·x^k·E_ij·LC^-1, where LC is
//! the leading coefficient matrix of the block.

use std::fmt;

use crate::error::{Error, Result};
use crate::skew::{SkewMatrix, SkewPoly, Var};
use crate::tmodule::TModule;

#[derive(Clone, PartialEq, Eq)]
pub struct Biderivation {
    pub source: TModule,
    pub target: TModule,
    pub delta_t: SkewMatrix,
}

impl Biderivation {
    pub fn new(source: &TModule, target: &TModule, delta_t: SkewMatrix) -> Result<Self> {
        if delta_t.shape() != (target.dim(), source.dim()) {
            return Err(Error::DimensionMismatch(format!(
                "δ_t must be {}x{}, got {}x{}",
                target.dim(),
                source.dim(),
                delta_t.rows(),
                delta_t.cols()
            )));
        }
        if source.var() != target.var() || (!delta_t.is_zero() && delta_t.var() != source.var()) {
            return Err(Error::MixedFields);
        }
        if source.field() != target.field() || delta_t.field().is_some_and(|f| f != source.field()) {
            return Err(Error::MixedFields);
        }
        let delta_t = delta_t.with_var(source.var());
        Ok(Biderivation { source: source.clone(), target: target.clone(), delta_t })
    }

    pub fn zero(source: &TModule, target: &TModule) -> Self {
        Biderivation {
            source: source.clone(),
            target: target.clone(),
            delta_t: SkewMatrix::zeros(source.var(), target.dim(), source.dim()),
        }
    }

    fn same_pair(&self, o: &Self) -> Result<()> {
        if self.source != o.source || self.target != o.target {
            return Err(Error::MixedPairs);
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.same_pair(o)?;
        Ok(Biderivation { delta_t: self.delta_t.add(&o.delta_t)?, ..self.clone() })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.same_pair(o)?;
        Ok(Biderivation { delta_t: self.delta_t.sub(&o.delta_t)?, ..self.clone() })
    }

    pub fn neg(&self) -> Self {
        Biderivation { delta_t: self.delta_t.neg(), ..self.clone() }
    }
}

impl fmt::Debug for Biderivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Biderivation({} -> {}: {})", self.source, self.target, self.delta_t)
    }
}

/// δ^(U) = U·Φ_t − Ψ_t·U.
pub fn inner_biderivation(u: &SkewMatrix, source: &TModule, target: &TModule) -> Result<Biderivation> {
    if u.shape() != (target.dim(), source.dim()) {
        return Err(Error::DimensionMismatch(format!(
            "U must be {}x{}, got {}x{}",
            target.dim(),
            source.dim(),
            u.rows(),
            u.cols()
        )));
    }
    let d = u.mul(source.phi_t())?.sub(&target.phi_t().mul(u)?)?;
    Biderivation::new(source, target, d)
}

/// A contiguous range of source columns reduced together.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Leaf {
    pub lo: usize,
    pub hi: usize,
    /// Inverse of the leading coefficient matrix of the diagonal block.
    pub lc_inv: SkewMatrix,
}

/// How canonical forms for a (source, target) pair are computed.
///
/// In the basic regime the whole leading coefficient matrix is invertible.
/// When it is not, but the source is block lower triangular with invertible
/// diagonal leading matrices, the blocks are reduced right to left: a
/// generator supported on a block only disturbs the columns to its left.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionPlan {
    pub var: Var,
    pub rows: usize,
    pub col_degrees: Vec<usize>,
    /// Leaves in processing order.
    pub leaves: Vec<Leaf>,
}

impl ReductionPlan {
    pub fn new(source: &TModule, target: &TModule) -> Result<Self> {
        if source.var() != target.var() || source.field() != target.field() {
            return Err(Error::MixedFields);
        }
        let d = source.dim();
        let mut col_degrees = vec![0; d];
        let mut leaves = Vec::new();
        if d > 0 && target.dim() > 0 {
            plan_range(source, target.rank(), 0, d, &mut col_degrees, &mut leaves)?;
        }
        Ok(ReductionPlan { var: source.var(), rows: target.dim(), col_degrees, leaves })
    }

    /// Number of canonical coordinates: rows × Σ n_l.
    pub fn dimension(&self) -> usize {
        self.rows * self.col_degrees.iter().sum::<usize>()
    }

    /// The leaf containing column `col`.
    pub fn leaf_of(&self, col: usize) -> &Leaf {
        self.leaves.iter().find(|l| l.lo <= col && col < l.hi).expect("every column lies in a leaf")
    }

    /// The next entry to reduce within a leaf: highest level first, then
    /// columns left to right, then rows ascending. Returns
    /// (row, column, level).
    pub fn next_target(&self, leaf: &Leaf, degree_of: impl Fn(usize, usize) -> Option<usize>) -> Option<(usize, usize, usize)> {
        let mut best: Option<(usize, usize, usize)> = None;
        for col in leaf.lo..leaf.hi {
            let n = self.col_degrees[col];
            for row in 0..self.rows {
                if let Some(deg) = degree_of(row, col) {
                    if deg >= n {
                        let level = deg - n;
                        if best.is_none_or(|b| level > b.2) {
                            best = Some((row, col, level));
                        }
                    }
                }
            }
        }
        best
    }

    /// Reduce δ to canonical form. Returns (canonical, U) with
    /// δ − δ^(U) = canonical.
    pub fn reduce(&self, delta: &Biderivation) -> Result<(SkewMatrix, SkewMatrix)> {
        let source = &delta.source;
        let target = &delta.target;
        let var = self.var;
        let mut cur = delta.delta_t.clone();
        let mut witness = SkewMatrix::zeros(var, target.dim(), source.dim());
        for leaf in &self.leaves {
            while let Some((row, col, level)) = self.next_target(leaf, |i, j| cur.get(i, j).degree()) {
                let c = cur.get(row, col).leading().expect("nonzero entry").clone();
                let u = generator(self, leaf, row, col - leaf.lo, level, &c, source.dim())?;
                let inner = inner_biderivation(&u, source, target)?;
                cur = cur.sub(&inner.delta_t)?;
                witness = witness.add(&u)?;
            }
        }
        Ok((cur, witness))
    }

    /// Is every entry below its column degree?
    pub fn is_canonical(&self, m: &SkewMatrix) -> bool {
        (0..m.rows()).all(|i| (0..m.cols()).all(|j| m.get(i, j).degree().is_none_or(|k| k < self.col_degrees[j])))
    }
}

/// U = c·x^k·E_{row, j}·LC^-1, placed in the columns of `leaf`.
fn generator(
    plan: &ReductionPlan,
    leaf: &Leaf,
    row: usize,
    j: usize,
    k: usize,
    c: &crate::field::FieldElement,
    cols: usize,
) -> Result<SkewMatrix> {
    let var = plan.var;
    let mut u = SkewMatrix::zeros(var, plan.rows, cols);
    let zero = c.field().zero();
    for m in 0..leaf.hi - leaf.lo {
        let a = leaf.lc_inv.get(j, m).coeff_or(0, &zero);
        if a.is_zero() {
            continue;
        }
        // c·x^k·a = c·a^(±k)·x^k
        let coeff = c * &var.shift(&a, k)?;
        u.set(row, leaf.lo + m, SkewPoly::monomial(coeff, k, var));
    }
    Ok(u)
}

/// Plan the reduction of source columns lo..hi.
fn plan_range(
    source: &TModule,
    target_rank: usize,
    lo: usize,
    hi: usize,
    col_degrees: &mut [usize],
    leaves: &mut Vec<Leaf>,
) -> Result<()> {
    match simple_leaf(source, target_rank, lo, hi) {
        Ok((leaf, degs)) => {
            col_degrees[lo..hi].copy_from_slice(&degs);
            leaves.push(leaf);
            Ok(())
        }
        Err(first_err) => {
            let phi = source.phi_t();
            for s in lo + 1..hi {
                let upper_right_zero = (lo..s).all(|i| (s..hi).all(|j| phi.get(i, j).is_zero()));
                if !upper_right_zero {
                    continue;
                }
                let mut degs = col_degrees.to_vec();
                let mut sub = Vec::new();
                // Right block first: its generators only reach columns to the left.
                if plan_range(source, target_rank, s, hi, &mut degs, &mut sub).is_ok()
                    && plan_range(source, target_rank, lo, s, &mut degs, &mut sub).is_ok()
                {
                    col_degrees.copy_from_slice(&degs);
                    leaves.extend(sub);
                    return Ok(());
                }
            }
            Err(first_err)
        }
    }
}

fn simple_leaf(source: &TModule, target_rank: usize, lo: usize, hi: usize) -> Result<(Leaf, Vec<usize>)> {
    let block = source.phi_t().submatrix(lo..hi, lo..hi);
    let mut degs = Vec::with_capacity(hi - lo);
    let mut lc = SkewMatrix::zeros(block.var(), hi - lo, hi - lo);
    for j in 0..hi - lo {
        let n = block.col_degree(j).unwrap_or(0);
        if n <= target_rank {
            return Err(Error::UnsupportedRegime(format!(
                "source column degree {n} does not exceed the target rank {target_rank}; \
                 equal or inverted ranks have no canonical form here (see `ext-dual` for rk source < rk target)"
            )));
        }
        degs.push(n);
        for i in 0..hi - lo {
            if let Some(c) = block.coeff(i, j, n) {
                lc.set(i, j, SkewPoly::constant(c.clone(), block.var()));
            }
        }
    }
    let lc_inv = lc.const_inverse(source.field()).map_err(|_| Error::SingularLeading)?;
    Ok((Leaf { lo, hi, lc_inv }, degs))
}

/// An Ext¹ class, held by its canonical representative.
#[derive(Clone, PartialEq, Eq)]
pub struct ExtClass {
    pub source: TModule,
    pub target: TModule,
    pub canonical: SkewMatrix,
}

impl ExtClass {
    pub fn as_biderivation(&self) -> Biderivation {
        Biderivation { source: self.source.clone(), target: self.target.clone(), delta_t: self.canonical.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.canonical.is_zero()
    }
}

impl fmt::Debug for ExtClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExtClass({})", self.canonical)
    }
}

/// Canonical form of δ together with the witness U (δ − δ^(U) = canonical).
pub fn reduce_canonical(delta: &Biderivation) -> Result<(ExtClass, SkewMatrix)> {
    let plan = ReductionPlan::new(&delta.source, &delta.target)?;
    let (canonical, u) = plan.reduce(delta)?;
    Ok((ExtClass { source: delta.source.clone(), target: delta.target.clone(), canonical }, u))
}

/// The middle term [[Φ_t, 0], [δ_t, Ψ_t]] of the extension 0 → Ψ → X → Φ → 0.
pub fn assemble_extension(delta: &Biderivation) -> Result<TModule> {
    let var = delta.source.var();
    let (d, e) = (delta.source.dim(), delta.target.dim());
    let m = SkewMatrix::block(&[
        vec![delta.source.phi_t().clone(), SkewMatrix::zeros(var, d, e)],
        vec![delta.delta_t.clone(), delta.target.phi_t().clone()],
    ])?;
    TModule::new(delta.source.field(), m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Field, FiniteField};

    fn f3t() -> Field {
        Field::rational(FiniteField::new(3, vec![0, 1], 1).unwrap()).unwrap()
    }

    fn dr(k: &Field, n: usize) -> TModule {
        TModule::drinfeld(k, Var::Tau, &[(n, k.one())]).unwrap()
    }

    fn x(k: &Field, n: usize) -> SkewPoly {
        SkewPoly::x_pow(k, n, Var::Tau)
    }

    #[test]
    fn inner_of_constant() {
        // U = 1 on (θ+τ³, θ+τ²): τ³ − τ².
        let k = f3t();
        let (phi, psi) = (dr(&k, 3), dr(&k, 2));
        let u = SkewMatrix::identity(Var::Tau, 1, &k);
        let inner = inner_biderivation(&u, &phi, &psi).unwrap();
        assert_eq!(inner.delta_t, SkewMatrix::single(x(&k, 3).sub(&x(&k, 2))));
    }

    #[test]
    fn inner_of_tau() {
        // δ^(τ) = (θ^(1) − θ)τ − τ³ + τ⁴
        let k = f3t();
        let (phi, psi) = (dr(&k, 3), dr(&k, 2));
        let u = SkewMatrix::single(x(&k, 1));
        let inner = inner_biderivation(&u, &phi, &psi).unwrap();
        let th = k.theta();
        let expect = SkewPoly::from_terms(
            Var::Tau,
            [(1, &th.twist(1).unwrap() - &th), (3, -&k.one()), (4, k.one())],
        );
        assert_eq!(inner.delta_t, SkewMatrix::single(expect));
    }

    #[test]
    fn reduce_tau_cubed() {
        let k = f3t();
        let (phi, psi) = (dr(&k, 3), dr(&k, 2));
        let d = Biderivation::new(&phi, &psi, SkewMatrix::single(x(&k, 3))).unwrap();
        let (cls, u) = reduce_canonical(&d).unwrap();
        assert_eq!(cls.canonical, SkewMatrix::single(x(&k, 2)));
        let inner = inner_biderivation(&u, &phi, &psi).unwrap();
        assert_eq!(d.delta_t.sub(&inner.delta_t).unwrap(), cls.canonical);
    }

    #[test]
    fn equal_rank_unsupported() {
        let k = f3t();
        let d = Biderivation::zero(&dr(&k, 2), &dr(&k, 2));
        assert_eq!(reduce_canonical(&d).unwrap_err().code(), "UnsupportedRegime");
    }

    #[test]
    fn singular_leading_detected() {
        let k = f3t();
        let var = Var::Tau;
        let th = SkewPoly::constant(k.theta(), var);
        let m = SkewMatrix::from_rows(
            var,
            vec![vec![th.add(&x(&k, 3)), x(&k, 3)], vec![x(&k, 3), th.add(&x(&k, 3))]],
        )
        .unwrap();
        // Leading matrix [[1,1],[1,1]] is singular and there is no block split.
        let src = TModule::new(&k, m).unwrap();
        let d = Biderivation::zero(&src, &TModule::carlitz(&k));
        assert_eq!(reduce_canonical(&d).unwrap_err(), Error::SingularLeading);
    }

    #[test]
    fn assemble_block_shape() {
        let k = f3t();
        let (e, f) = (dr(&k, 2), dr(&k, 3));
        let d = Biderivation::new(&e, &f, SkewMatrix::single(SkewPoly::constant(k.one(), Var::Tau).add(&x(&k, 1)))).unwrap();
        let m = assemble_extension(&d).unwrap();
        assert_eq!(m.phi_t().to_string(), "[[th + tau^2, 0], [1 + tau, th + tau^3]]");
    }
}
