//! Brute-force verification over finite fields.
//!
//! Everything here uses plain canonical reduction and direct skew arithmetic;
//! the tracked reducer that builds structure matrices is never called, so a
//! passing report is an independent confirmation.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::biderivation::{inner_biderivation, Biderivation, ReductionPlan};
use crate::error::{Error, Result};
use crate::ext::{apply_matrix, ExtStructure};
use crate::field::{Field, FieldElement};
use crate::homological::{hom_space, witness_search, SixTerm};
use crate::skew::{SkewMatrix, SkewPoly, Var};
use crate::tmodule::{TModule, TPoly};

/// Enumeration ceiling on carrier sizes.
pub const MAX_CARRIER: u128 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Sample,
    Enumerate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub input: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub check: String,
    pub field: String,
    pub mode: Mode,
    pub seed: Option<u64>,
    /// Number of elements or samples examined.
    pub checked: usize,
    pub passed: bool,
    pub counterexample: Option<Counterexample>,
    pub notes: Vec<String>,
}

impl Report {
    fn new(check: &str, field: &Field, mode: Mode, seed: Option<u64>) -> Self {
        Report {
            check: check.into(),
            field: field.header(),
            mode,
            seed,
            checked: 0,
            passed: true,
            counterexample: None,
            notes: Vec::new(),
        }
    }

    fn fail(&mut self, input: impl ToString, expected: impl ToString, actual: impl ToString) {
        if self.passed {
            self.passed = false;
            self.counterexample =
                Some(Counterexample { input: input.to_string(), expected: expected.to_string(), actual: actual.to_string() });
        }
    }
}

fn require_finite(field: &Field) -> Result<u32> {
    field.size().ok_or_else(|| Error::InvalidField(format!("verification needs a finite field, got {}", field.header())))
}

fn random_coords(field: &Field, n: usize, rng: &mut ChaCha8Rng) -> Vec<FieldElement> {
    (0..n).map(|_| field.random(rng).expect("finite field")).collect()
}

fn random_poly(field: &Field, var: Var, max_deg: usize, rng: &mut ChaCha8Rng) -> SkewPoly {
    SkewPoly::from_terms(var, (0..=max_deg).map(|k| (k, field.random(rng).expect("finite field"))))
}

fn random_matrix(field: &Field, var: Var, rows: usize, cols: usize, max_deg: usize, rng: &mut ChaCha8Rng) -> SkewMatrix {
    let mut m = SkewMatrix::zeros(var, rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, random_poly(field, var, max_deg, rng));
        }
    }
    m
}

fn render_coords(c: &[FieldElement]) -> String {
    format!("[{}]", c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

/// Coordinates of the canonical form of δ in the structure's basis.
fn class_coords(e: &ExtStructure, plan: &ReductionPlan, delta: &Biderivation) -> Result<Vec<FieldElement>> {
    let (canon, _) = plan.reduce(delta)?;
    e.coords(&canon)
}

/// canonical(Ψ_a·w) against Π_a applied to coords(w), for sampled w.
///
/// Each sample draws an arbitrary biderivation δ (entries above the canonical
/// degrees), reduces it, and checks both δ and its canonical form.
pub fn verify_structure(e: &ExtStructure, samples: usize, seed: u64) -> Result<Report> {
    let field = e.field().clone();
    require_finite(&field)?;
    let mut report = Report::new("structure", &field, Mode::Sample, Some(seed));
    let plan = ReductionPlan::new(&e.source, &e.target)?;
    let var = e.var();
    let ext_mod = TModule::new(&field, e.pi_t.clone());
    let actions = [TPoly::t(&field), TPoly::from_ints(&field, &[1, 1]), TPoly::from_ints(&field, &[0, 0, 1])];
    let pi_a = match &ext_mod {
        Ok(m) => actions.iter().map(|a| m.phi_a(a)).collect::<Result<Vec<_>>>()?,
        Err(err) => {
            report.notes.push(format!("structure matrix is not a t-module: {err}"));
            report.fail(e.pi_t.to_string(), "a t-module", err.to_string());
            return Ok(report);
        }
    };
    let top = e.plan.col_degrees.iter().copied().max().unwrap_or(0) + 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let raw = random_matrix(&field, var, e.target.dim(), e.source.dim(), top, &mut rng);
        let delta = Biderivation::new(&e.source, &e.target, raw)?;
        let x = class_coords(e, &plan, &delta)?;
        let w = Biderivation::new(&e.source, &e.target, e.from_coords(&x)?)?;
        for (a, pa) in actions.iter().zip(&pi_a) {
            let expected = apply_matrix(pa, &x, &field)?;
            let psi_a = e.target.phi_a(a)?;
            for input in [&w, &delta] {
                let moved = Biderivation::new(&e.source, &e.target, psi_a.mul(&input.delta_t)?)?;
                let got = class_coords(e, &plan, &moved)?;
                if got != expected {
                    report.fail(
                        format!("a = {a}, delta = {}", input.delta_t),
                        render_coords(&expected),
                        render_coords(&got),
                    );
                    report.checked += 1;
                    return Ok(report);
                }
            }
        }
        report.checked += 1;
    }
    Ok(report)
}

/// Every vector in K^n, or CarrierTooLarge.
fn enumerate_space(field: &Field, n: usize) -> Result<Vec<Vec<FieldElement>>> {
    let size = require_finite(field)? as u128;
    let total = size.checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > MAX_CARRIER {
        return Err(Error::CarrierTooLarge { size: total, ceiling: MAX_CARRIER });
    }
    let mut out = Vec::with_capacity(total as usize);
    for mut idx in 0..total {
        let mut v = Vec::with_capacity(n);
        for _ in 0..n {
            v.push(field.element((idx % size) as u32).expect("in range"));
            idx /= size;
        }
        out.push(v);
    }
    Ok(out)
}

fn key(v: &[FieldElement]) -> Vec<u32> {
    v.iter().map(|x| x.index().expect("finite field")).collect()
}

/// 0 → Ext¹₀ → Ext¹ → 𝔾ₐ^s → 0: injectivity, exactness in the middle,
/// surjectivity, and t-equivariance of the projection.
pub fn verify_ga_exactness(e: &ExtStructure, mode: Mode, samples: usize, seed: u64) -> Result<Report> {
    let field = e.field().clone();
    require_finite(&field)?;
    let seed_opt = (mode == Mode::Sample).then_some(seed);
    let mut report = Report::new("ga-sequence", &field, mode, seed_opt);
    // The maps are taken as given; ga_sequence would reject a broken
    // structure before any point is examined.
    let sub_structure = e.ext0();
    let incl = &sub_structure.inclusion;
    let pi0 = &sub_structure.pi0_t;
    let proj = &e.projection();
    let (n, n0, s) = (e.dim(), incl.cols(), proj.rows());
    let theta = field.theta();
    let check_point = |x: &[FieldElement], report: &mut Report| -> Result<()> {
        let gx = apply_matrix(proj, x, &field)?;
        let tx = apply_matrix(&e.pi_t, x, &field)?;
        let lhs = apply_matrix(proj, &tx, &field)?;
        let rhs: Vec<FieldElement> = gx.iter().map(|c| &theta * c).collect();
        if lhs != rhs {
            report.fail(render_coords(x), render_coords(&rhs), render_coords(&lhs));
        }
        Ok(())
    };
    let check_sub = |y: &[FieldElement], report: &mut Report| -> Result<()> {
        let lhs = apply_matrix(incl, &apply_matrix(pi0, y, &field)?, &field)?;
        let rhs = apply_matrix(&e.pi_t, &apply_matrix(incl, y, &field)?, &field)?;
        if lhs != rhs {
            report.fail(render_coords(y), render_coords(&rhs), render_coords(&lhs));
        }
        Ok(())
    };
    match mode {
        Mode::Enumerate => {
            let sub = enumerate_space(&field, n0)?;
            let all = enumerate_space(&field, n)?;
            let mut image = HashSet::new();
            for y in &sub {
                let iy = apply_matrix(incl, y, &field)?;
                if iy.iter().all(|c| c.is_zero()) && !y.iter().all(|c| c.is_zero()) {
                    report.fail(render_coords(y), "nonzero image", "zero");
                }
                image.insert(key(&iy));
                check_sub(y, &mut report)?;
            }
            if image.len() != sub.len() {
                report.fail("inclusion", format!("{} distinct images", sub.len()), image.len());
            }
            let mut hit = HashSet::new();
            for x in &all {
                let gx = apply_matrix(proj, x, &field)?;
                let in_kernel = gx.iter().all(|c| c.is_zero());
                if in_kernel != image.contains(&key(x)) {
                    report.fail(render_coords(x), format!("kernel membership {}", image.contains(&key(x))), in_kernel);
                }
                hit.insert(key(&gx));
                check_point(x, &mut report)?;
                report.checked += 1;
            }
            let want = (require_finite(&field)? as usize).pow(s as u32);
            if hit.len() != want {
                report.fail("projection", format!("{want} images"), hit.len());
            }
        }
        Mode::Sample => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let y = random_coords(&field, n0, &mut rng);
                let gy = apply_matrix(proj, &apply_matrix(incl, &y, &field)?, &field)?;
                if !gy.iter().all(|c| c.is_zero()) {
                    report.fail(render_coords(&y), "0", render_coords(&gy));
                }
                check_sub(&y, &mut report)?;
                let x = random_coords(&field, n, &mut rng);
                check_point(&x, &mut report)?;
                // Preimage of a random point of 𝔾ₐ^s.
                let z = random_coords(&field, s, &mut rng);
                let lift = apply_matrix(&proj.transpose(), &z, &field)?;
                let back = apply_matrix(proj, &lift, &field)?;
                if back != z {
                    report.fail(render_coords(&z), render_coords(&z), render_coords(&back));
                }
                report.checked += 1;
            }
        }
    }
    Ok(report)
}

/// Which of the two six-term sequences to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Hom(G, -) and Ext¹(G, -).
    Covariant,
    /// Hom(-, G) and Ext¹(-, G).
    Contravariant,
}

/// All F_q-combinations of a Hom basis.
fn hom_elements(basis: &[SkewMatrix], rows: usize, cols: usize, var: Var, field: &Field) -> Result<Vec<SkewMatrix>> {
    let scalars: Vec<FieldElement> = (0..require_finite(field)?)
        .map(|i| field.element(i).expect("in range"))
        .filter(|x| x.twist(1).ok().as_ref() == Some(x))
        .collect();
    let total = (scalars.len() as u128).checked_pow(basis.len() as u32).unwrap_or(u128::MAX);
    if total > MAX_CARRIER {
        return Err(Error::CarrierTooLarge { size: total, ceiling: MAX_CARRIER });
    }
    let mut out = vec![SkewMatrix::zeros(var, rows, cols)];
    for b in basis {
        let mut next = Vec::with_capacity(out.len() * scalars.len());
        for m in &out {
            for c in &scalars {
                next.push(m.add(&b.scale_left(c))?);
            }
        }
        out = next;
    }
    Ok(out)
}

struct ExtNode {
    structure: ExtStructure,
    plan: ReductionPlan,
}

impl ExtNode {
    fn new(source: &TModule, target: &TModule) -> Result<Self> {
        let structure = ExtStructure::build(source, target, crate::ext::BasisOrder::ColumnMajor)?;
        let plan = ReductionPlan::new(source, target)?;
        Ok(ExtNode { structure, plan })
    }

    fn coords(&self, d: &Biderivation) -> Result<Vec<u32>> {
        Ok(key(&class_coords(&self.structure, &self.plan, d)?))
    }

    fn element(&self, x: &[FieldElement]) -> Result<Biderivation> {
        Biderivation::new(&self.structure.source, &self.structure.target, self.structure.from_coords(x)?)
    }
}

/// Exactness of a six-term sequence at its interior nodes.
///
/// Enumerate mode compares kernels and images as sets at every node and
/// searches a preimage for every class of the last Ext group. Sample mode
/// checks that consecutive maps compose to zero and lifts sampled classes of
/// the last group. Hom groups are searched up to `hom_bound`; a note is added
/// when that search is not known to be complete.
pub fn verify_six_term(six: &SixTerm, variant: Variant, mode: Mode, hom_bound: usize, samples: usize, seed: u64) -> Result<Report> {
    let field = six.x.field().clone();
    require_finite(&field)?;
    let var = six.x.var();
    let seed_opt = (mode == Mode::Sample).then_some(seed);
    let mut report = Report::new(
        match variant {
            Variant::Covariant => "six-term (covariant)",
            Variant::Contravariant => "six-term (contravariant)",
        },
        &field,
        mode,
        seed_opt,
    );
    let (e, f, x, g) = (six.e(), six.f(), &six.x, &six.g);
    // (Hom nodes as (source, target)), Ext nodes likewise.
    let (homs, exts) = match variant {
        Variant::Covariant => ([(g, f), (g, x), (g, e)], [(g, f), (g, x), (g, e)]),
        Variant::Contravariant => ([(e, g), (x, g), (f, g)], [(e, g), (x, g), (f, g)]),
    };
    let mut hom_sets = Vec::new();
    for (s, t) in homs {
        let h = hom_space(s, t, hom_bound)?;
        if !h.complete {
            report.notes.push(format!("Hom({s}, {t}) searched up to degree {hom_bound}"));
        }
        hom_sets.push(hom_elements(&h.basis, t.dim(), s.dim(), var, &field)?);
    }
    let nodes = exts.iter().map(|(s, t)| ExtNode::new(s, t)).collect::<Result<Vec<_>>>()?;

    let hom_map = |k: usize, m: &SkewMatrix| -> Result<SkewMatrix> {
        match (variant, k) {
            (Variant::Covariant, 0) => six.cov_hom_i(m),
            (Variant::Covariant, _) => six.cov_hom_pi(m),
            (Variant::Contravariant, 0) => six.con_hom_pi(m),
            (Variant::Contravariant, _) => six.con_hom_i(m),
        }
    };
    let connecting = |m: &SkewMatrix| match variant {
        Variant::Covariant => six.cov_connecting(m),
        Variant::Contravariant => six.con_connecting(m),
    };
    let ext_map = |k: usize, d: &Biderivation| match (variant, k) {
        (Variant::Covariant, 0) => six.cov_ext_i(d),
        (Variant::Covariant, _) => six.cov_ext_pi(d),
        (Variant::Contravariant, 0) => six.con_ext_pi(d),
        (Variant::Contravariant, _) => six.con_ext_i(d),
    };

    // Hom(·)_0 → Hom(·)_1 → Hom(·)_2.
    let img0: HashSet<String> = hom_sets[0].iter().map(|m| hom_map(0, m).map(|r| r.to_string())).collect::<Result<_>>()?;
    if img0.len() != hom_sets[0].len() {
        report.fail("first Hom map", "injective", format!("{} images of {}", img0.len(), hom_sets[0].len()));
    }
    let img1: HashSet<String> = hom_sets[1].iter().map(|m| hom_map(1, m).map(|r| r.to_string())).collect::<Result<_>>()?;
    for m in &hom_sets[1] {
        let zero = hom_map(1, m)?.is_zero();
        if zero != img0.contains(&m.to_string()) {
            report.fail(m, format!("in image: {}", img0.contains(&m.to_string())), format!("in kernel: {zero}"));
        }
        report.checked += 1;
    }
    // Hom(·)_2 → Ext(·)_0: kernel of the connecting map is the image above.
    let mut img_conn = HashSet::new();
    for m in &hom_sets[2] {
        let c = nodes[0].coords(&connecting(m)?)?;
        let zero = c.iter().all(|&i| i == 0);
        if zero != img1.contains(&m.to_string()) {
            report.fail(m, format!("in image: {}", img1.contains(&m.to_string())), format!("in kernel: {zero}"));
        }
        img_conn.insert(c);
        report.checked += 1;
    }
    match mode {
        Mode::Enumerate => {
            let mut images = vec![img_conn];
            for k in 0..2 {
                let mut next = HashSet::new();
                for v in enumerate_space(&field, nodes[k].structure.dim())? {
                    let d = nodes[k].element(&v)?;
                    let out = nodes[k + 1].coords(&ext_map(k, &d)?)?;
                    let zero = out.iter().all(|&i| i == 0);
                    let in_image = images[k].contains(&key(&v));
                    if zero != in_image {
                        report.fail(&d.delta_t, format!("in image: {in_image}"), format!("in kernel: {zero}"));
                    }
                    next.insert(out);
                    report.checked += 1;
                }
                images.push(next);
            }
            // Every class of the last group has a preimage.
            for v in enumerate_space(&field, nodes[2].structure.dim())? {
                if !images[2].contains(&key(&v)) {
                    report.fail(render_coords(&v), "a preimage", "none");
                }
                report.checked += 1;
            }
        }
        Mode::Sample => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                if let Some(m) = hom_sets[2].get(rng.gen_range(0..hom_sets[2].len())) {
                    let d = connecting(m)?;
                    let out = nodes[1].coords(&ext_map(0, &d)?)?;
                    if out.iter().any(|&i| i != 0) {
                        report.fail(m, "0", format!("{out:?}"));
                    }
                }
                let v = random_coords(&field, nodes[0].structure.dim(), &mut rng);
                let mid = ext_map(0, &nodes[0].element(&v)?)?;
                let out = nodes[2].coords(&ext_map(1, &mid)?)?;
                if out.iter().any(|&i| i != 0) {
                    report.fail(render_coords(&v), "0", format!("{out:?}"));
                }
                // Lift a sampled class of the last group.
                let w = random_coords(&field, nodes[2].structure.dim(), &mut rng);
                let target = nodes[2].element(&w)?;
                let lifted = lift_last(six, variant, &target)?;
                let back = nodes[2].coords(&ext_map(1, &lifted)?)?;
                if back != key(&w) {
                    report.fail(render_coords(&w), format!("{:?}", key(&w)), format!("{back:?}"));
                }
                report.checked += 1;
            }
        }
    }
    Ok(report)
}

/// A preimage of η under the last Ext map.
fn lift_last(six: &SixTerm, variant: Variant, eta: &Biderivation) -> Result<Biderivation> {
    let var = six.x.var();
    let (d, e) = (six.e().dim(), six.f().dim());
    let r = six.g.dim();
    match variant {
        // −π·[−η; 0] = η.
        Variant::Covariant => {
            let m = SkewMatrix::block(&[vec![eta.delta_t.neg()], vec![SkewMatrix::zeros(var, e, r)]])?;
            Biderivation::new(&six.g, &six.x, m)
        }
        // [0, −η]·(−i) = η.
        Variant::Contravariant => {
            let m = SkewMatrix::block(&[vec![SkewMatrix::zeros(var, r, d), eta.delta_t.neg()]])?;
            Biderivation::new(&six.x, &six.g, m)
        }
    }
}

/// The adjoint map δ ↦ ad(δ) from Ext¹_τ(φ, ψ) to Ext¹_σ(ψ^σ, φ^σ):
/// inner goes to inner with an exhibited witness, distinct sampled classes
/// stay distinct, and the t-action commutes up to an exhibited witness.
pub fn verify_duality(phi: &TModule, psi: &TModule, samples: usize, seed: u64) -> Result<Report> {
    verify_duality_with(phi, psi, &phi.adjoint()?, &psi.adjoint()?, samples, seed)
}

/// [`verify_duality`] against explicitly supplied σ-side modules.
pub fn verify_duality_with(
    phi: &TModule,
    psi: &TModule,
    phi_s: &TModule,
    psi_s: &TModule,
    samples: usize,
    seed: u64,
) -> Result<Report> {
    let field = phi.field().clone();
    require_finite(&field)?;
    let mut report = Report::new("duality", &field, Mode::Sample, Some(seed));
    let (psi_s, phi_s) = (psi_s.clone(), phi_s.clone());
    let var = phi.var();
    let (d, e) = (phi.dim(), psi.dim());
    let max_rank = phi.rank().max(psi.rank());
    let plan = ReductionPlan::new(phi, psi).ok();
    if plan.is_none() {
        report.notes.push("no τ-side canonical form; classes are sampled as raw biderivations".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sigma_inner = |v: &SkewMatrix| inner_biderivation(v, &psi_s, &phi_s).map(|b| b.delta_t);
    for _ in 0..samples {
        // Inner to inner: ad(δ^(U)) = δ_σ^(−ad U).
        let u = random_matrix(&field, var, e, d, max_rank, &mut rng);
        let inner = inner_biderivation(&u, phi, psi)?;
        let v = u.adjoint()?.neg();
        let lhs = inner.delta_t.adjoint()?;
        let rhs = sigma_inner(&v)?;
        if lhs != rhs {
            report.fail(format!("U = {u}"), &rhs, &lhs);
            return Ok(report);
        }

        // A sampled class and the t-action.
        let raw = random_matrix(&field, var, e, d, max_rank, &mut rng);
        let delta = Biderivation::new(phi, psi, raw)?;
        let class = match &plan {
            Some(p) => p.reduce(&delta)?.0,
            None => delta.delta_t.clone(),
        };
        // ad(canonical(Ψ_t δ)) − t*ad(δ) = δ_σ^(ad δ + ad U), U the reduction witness.
        let moved = psi.phi_t().mul(&class)?;
        let (moved_c, moved_u) = match &plan {
            Some(p) => p.reduce(&Biderivation::new(phi, psi, moved)?)?,
            None => (moved, SkewMatrix::zeros(var, e, d)),
        };
        let lhs = moved_c.adjoint()?.sub(&phi_s.phi_t().mul(&class.adjoint()?)?)?;
        let rhs = sigma_inner(&class.adjoint()?.add(&moved_u.adjoint()?)?)?;
        if lhs != rhs {
            report.fail(format!("delta = {class}"), &rhs, &lhs);
            return Ok(report);
        }

        // Injectivity: a nonzero canonical class must not become inner.
        if plan.is_some() && !class.is_zero() {
            let img = Biderivation::new(&psi_s, &phi_s, class.adjoint()?)?;
            let bound = class.degree().unwrap_or(0) + max_rank;
            if let Some(w) = witness_search(&img, bound)? {
                report.fail(format!("delta = {class}"), "not inner", format!("inner with witness {w}"));
                return Ok(report);
            }
        }
        report.checked += 1;
    }
    let zero = Biderivation::zero(phi, psi);
    if !zero.delta_t.adjoint()?.is_zero() {
        report.fail("0", "0", zero.delta_t.adjoint()?);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ext::ext_drinfeld_structure;

    fn dr(k: &Field, n: usize) -> TModule {
        TModule::drinfeld(k, Var::Tau, &[(n, k.one())]).unwrap()
    }

    #[test]
    fn structure_passes_and_mutation_fails() {
        let k = Field::gf(3, 2).unwrap();
        let mut e = ext_drinfeld_structure(&dr(&k, 3), &dr(&k, 2)).unwrap();
        let r = verify_structure(&e, 50, 7).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.checked, 50);
        // Twist the coefficients of the first entry the twist changes.
        let (i, j, twisted) = (0..e.dim())
            .flat_map(|i| (0..e.dim()).map(move |j| (i, j)))
            .find_map(|(i, j)| {
                let p = e.pi_t.get(i, j);
                let t = p.twist_coeffs(1).unwrap();
                (t != *p).then_some((i, j, t))
            })
            .unwrap();
        e.pi_t.set(i, j, twisted);
        let r = verify_structure(&e, 50, 7).unwrap();
        assert!(!r.passed);
        assert!(r.counterexample.is_some());
    }

    #[test]
    fn reports_are_deterministic() {
        let k = Field::gf(2, 3).unwrap();
        let e = ext_drinfeld_structure(&dr(&k, 2), &dr(&k, 1)).unwrap();
        assert_eq!(verify_structure(&e, 20, 3).unwrap(), verify_structure(&e, 20, 3).unwrap());
    }

    #[test]
    fn carrier_ceiling() {
        let k = Field::gf(3, 2).unwrap();
        let e = ext_drinfeld_structure(&dr(&k, 9), &dr(&k, 1)).unwrap();
        let err = verify_ga_exactness(&e, Mode::Enumerate, 0, 0).unwrap_err();
        assert_eq!(err.code(), "CarrierTooLarge");
    }

    #[test]
    fn duality_on_small_field() {
        let k = Field::gf(2, 3).unwrap();
        let r = verify_duality(&dr(&k, 3), &dr(&k, 2), 10, 1).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn ga_sequence_exact() {
        let k = Field::gf(3, 1).unwrap();
        let e = crate::ext::ext_carlitz_target(&dr(&k, 2), 2).unwrap();
        let r = verify_ga_exactness(&e, Mode::Enumerate, 0, 0).unwrap();
        assert!(r.passed, "{r:?}");
        let r = verify_ga_exactness(&e, Mode::Sample, 30, 5).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn six_term_exact() {
        let k = Field::gf(3, 1).unwrap();
        let one = SkewMatrix::scalar(Var::Tau, 1, &k.one());
        let cases = [(Variant::Covariant, dr(&k, 2), dr(&k, 1), dr(&k, 3)), (Variant::Contravariant, dr(&k, 3), dr(&k, 2), dr(&k, 1))];
        for (v, e, f, g) in cases {
            let delta = Biderivation::new(&e, &f, one.clone()).unwrap();
            let six = crate::homological::six_term_maps(&delta, &g).unwrap();
            let r = verify_six_term(&six, v, Mode::Enumerate, 3, 0, 0).unwrap();
            assert!(r.passed, "{r:?}");
            assert!(r.checked > 0);
            let r = verify_six_term(&six, v, Mode::Sample, 3, 20, 9).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn six_term_rejects_corrupted_middle() {
        let k = Field::gf(3, 1).unwrap();
        let (e, f, g) = (dr(&k, 3), dr(&k, 2), dr(&k, 1));
        let one = SkewMatrix::scalar(Var::Tau, 1, &k.one());
        let delta = Biderivation::new(&e, &f, one).unwrap();
        let mut six = crate::homological::six_term_maps(&delta, &g).unwrap();
        let mut xt = six.x.phi_t().clone();
        xt.set(1, 1, xt.get(1, 1).add(&SkewPoly::monomial(k.one(), 3, Var::Tau)));
        six.x = TModule::new(&k, xt).unwrap();
        let r = verify_six_term(&six, Variant::Contravariant, Mode::Enumerate, 3, 0, 0).unwrap();
        assert!(!r.passed);
        assert!(r.counterexample.is_some());
    }

    #[test]
    fn ga_rejects_corrupted_structure() {
        let k = Field::gf(3, 1).unwrap();
        let mut e = crate::ext::ext_carlitz_target(&dr(&k, 2), 2).unwrap();
        let (row, col) = (e.ga[0], (e.ga[0] + 1) % e.dim());
        let entry = e.pi_t.get(row, col).clone();
        e.pi_t.set(row, col, entry.add(&SkewPoly::constant(k.one(), Var::Tau)));
        let r = verify_ga_exactness(&e, Mode::Enumerate, 0, 0).unwrap();
        assert!(!r.passed);
    }

    #[test]
    fn duality_rejects_wrong_modules() {
        // Same shapes, but the σ-side target does not match the τ-side source.
        let k = Field::gf(2, 3).unwrap();
        let bad = TModule::drinfeld(&k, Var::Tau, &[(3, k.generator())]).unwrap();
        let r = verify_duality_with(&dr(&k, 3), &dr(&k, 2), &bad.adjoint().unwrap(), &dr(&k, 2).adjoint().unwrap(), 10, 1).unwrap();
        assert!(!r.passed);
    }
}
