mod common;

use common::*;
use drinfeld_ext::ext::apply_matrix;
use drinfeld_ext::*;
use proptest::prelude::*;

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(cfg(128))]

    #[test]
    fn twist_composes(x in 0u32..16, y in 0u32..16, i in -6i64..6, j in -6i64..6) {
        let k = gf(2, 4);
        let (c, d) = (k.element(x).unwrap(), k.element(y).unwrap());
        prop_assert_eq!(c.twist(i + j).unwrap(), c.twist(i).unwrap().twist(j).unwrap());
        prop_assert_eq!((&c * &d).twist(i).unwrap(), &c.twist(i).unwrap() * &d.twist(i).unwrap());
        prop_assert_eq!((&c + &d).twist(i).unwrap(), &c.twist(i).unwrap() + &d.twist(i).unwrap());
    }

    #[test]
    fn formal_twist_is_total(i in -8i64..8, j in -8i64..8, s in -3i32..3) {
        let k = parse_field("FTF(3; gens=a,b,th; inv=a)").unwrap();
        let c = parse_element(&k, &format!("(b[{s}] + th)/a[{}]", s + 1)).unwrap();
        prop_assert_eq!(c.twist(i + j).unwrap(), c.twist(i).unwrap().twist(j).unwrap());
        prop_assert_eq!(c.twist(i).unwrap().twist(-i).unwrap(), c);
    }

    #[test]
    fn rational_normal_form(n in coeffs(3, 4), d in coeffs(3, 3)) {
        let k = parse_field("GF(3)(th)").unwrap();
        let num = FieldElement::rational_poly(&k, n).unwrap();
        let den = FieldElement::rational_poly(&k, d).unwrap();
        prop_assume!(!den.is_zero());
        let q = num.div(&den).unwrap();
        // Normal forms are unique, so rendering and parsing back is exact.
        let back = parse_element(&k, &q.to_string()).unwrap();
        prop_assert_eq!(&back, &q);
        prop_assert_eq!(&(&q * &den), &num);
    }

    #[test]
    fn skew_ring_axioms(f in coeffs(4, 4), g in coeffs(4, 4), h in coeffs(4, 4)) {
        let k = gf(2, 2);
        let (f, g, h) = (poly_from(&k, Var::Tau, &f), poly_from(&k, Var::Tau, &g), poly_from(&k, Var::Tau, &h));
        let one = SkewPoly::constant(k.one(), Var::Tau);
        prop_assert_eq!(f.mul(&g).unwrap().mul(&h).unwrap(), f.mul(&g.mul(&h).unwrap()).unwrap());
        prop_assert_eq!(f.mul(&g.add(&h)).unwrap(), f.mul(&g).unwrap().add(&f.mul(&h).unwrap()));
        prop_assert_eq!(g.add(&h).mul(&f).unwrap(), g.mul(&f).unwrap().add(&h.mul(&f).unwrap()));
        prop_assert_eq!(f.mul(&one).unwrap(), f.clone());
        prop_assert_eq!(one.mul(&f).unwrap(), f.clone());
        if let (Some(a), Some(b)) = (f.degree(), g.degree()) {
            prop_assert_eq!(f.mul(&g).unwrap().degree(), Some(a + b));
        }
    }

    #[test]
    fn evaluation_is_composition(f in coeffs(9, 4), g in coeffs(9, 4), c in 0u32..9) {
        let k = gf(3, 2);
        let (f, g) = (poly_from(&k, Var::Tau, &f), poly_from(&k, Var::Tau, &g));
        let c = k.element(c).unwrap();
        prop_assert_eq!(f.mul(&g).unwrap().eval(&c).unwrap(), f.eval(&g.eval(&c).unwrap()).unwrap());
    }

    #[test]
    fn adjoint_is_additive_anti_homomorphism(f in coeffs(8, 5), g in coeffs(8, 5)) {
        let k = gf(2, 3);
        let (f, g) = (poly_from(&k, Var::Tau, &f), poly_from(&k, Var::Tau, &g));
        let ad = |p: &SkewPoly| p.adjoint().unwrap();
        prop_assert_eq!(ad(&f.add(&g)), ad(&f).add(&ad(&g)));
        prop_assert_eq!(ad(&f.mul(&g).unwrap()), ad(&g).mul(&ad(&f)).unwrap());
        prop_assert_eq!(ad(&ad(&f)), f);
    }

    #[test]
    fn matrix_render_parse_round_trip(e in entries(9, 4, 4)) {
        let k = gf(3, 2);
        let m = matrix_from(&k, Var::Tau, 2, 2, &e);
        prop_assert_eq!(parse_matrix(&k, Var::Tau, &m.to_string()).unwrap(), m.clone());
        let s = m.adjoint().unwrap();
        prop_assert_eq!(parse_matrix(&k, Var::Sigma, &s.to_string()).unwrap(), s);
    }
}

proptest! {
    #![proptest_config(cfg(48))]

    #[test]
    fn phi_a_is_a_ring_homomorphism(a in prop::collection::vec(0i64..2, 0..=4), b in prop::collection::vec(0i64..2, 0..=4)) {
        let k = gf(2, 2);
        let (a, b) = (TPoly::from_ints(&k, &a), TPoly::from_ints(&k, &b));
        for m in [module(&k, "g + tau + tau^2"), TModule::carlitz_tensor(&k, 2)] {
            let lhs = m.phi_a(&a.mul(&b)).unwrap();
            prop_assert_eq!(lhs, m.phi_a(&a).unwrap().mul(&m.phi_a(&b).unwrap()).unwrap());
            prop_assert_eq!(m.phi_a(&a.add(&b)).unwrap(), m.phi_a(&a).unwrap().add(&m.phi_a(&b).unwrap()).unwrap());
        }
    }

    #[test]
    fn module_adjoint_round_trip(c in prop::collection::vec(0u32..16, 3)) {
        let k = gf(2, 4);
        let top = k.element(c[2].max(1)).unwrap();
        let m = TModule::drinfeld(&k, Var::Tau, &[(1, k.element(c[0]).unwrap()), (2, k.element(c[1]).unwrap()), (3, top)]).unwrap();
        let back = m.adjoint().unwrap().adjoint().unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn canonical_form_is_well_defined_and_linear(
        d1 in coeffs(9, 6), d2 in coeffs(9, 6), u in coeffs(9, 4)
    ) {
        let k = gf(3, 2);
        let (phi, psi) = (module(&k, "th + g*tau^3"), module(&k, "th + tau + tau^2"));
        let m1 = SkewMatrix::single(poly_from(&k, Var::Tau, &d1));
        let m2 = SkewMatrix::single(poly_from(&k, Var::Tau, &d2));
        let u = SkewMatrix::single(poly_from(&k, Var::Tau, &u));
        let b1 = bider(&phi, &psi, m1.clone());
        let inner = inner_biderivation(&u, &phi, &psi).unwrap();
        let c1 = canonical(&b1);
        prop_assert_eq!(canonical(&b1.add(&inner).unwrap()), c1.clone());
        let b2 = bider(&phi, &psi, m2.clone());
        prop_assert_eq!(canonical(&b1.add(&b2).unwrap()), c1.add(&canonical(&b2)).unwrap());
        // Witness identity and degree bound.
        let (class, w) = reduce_canonical(&b1).unwrap();
        let wi = inner_biderivation(&w, &phi, &psi).unwrap();
        prop_assert_eq!(m1.sub(&wi.delta_t).unwrap(), class.canonical.clone());
        prop_assert!(class.canonical.degree().is_none_or(|d| d < phi.rank()));
        prop_assert_eq!(canonical(&class.as_biderivation()), class.canonical);
    }

    #[test]
    fn t_module_source_canonical_form(e in entries(4, 4, 5), u in entries(4, 2, 3)) {
        let k = gf(2, 2);
        let phi = module(&k, "tmodule dim=2 [[th, 0], [0, th]] + [[0, 1], [0, 0]]*tau + [[1, 0], [0, 1]]*tau^3");
        let psi = module(&k, "th + tau");
        let m = matrix_from(&k, Var::Tau, 1, 2, &e[..2]);
        let u = matrix_from(&k, Var::Tau, 1, 2, &u);
        let b = bider(&phi, &psi, m);
        let inner = inner_biderivation(&u, &phi, &psi).unwrap();
        prop_assert_eq!(canonical(&b.add(&inner).unwrap()), canonical(&b));
    }

    #[test]
    fn action_through_structure_matrix(d in coeffs(9, 7), which in 0usize..4) {
        let k = gf(3, 2);
        let (phi, psi) = (module(&k, "th + tau^3"), module(&k, "th + tau^2"));
        let e = ext_drinfeld_structure(&phi, &psi).unwrap();
        let a = [
            TPoly::t(&k),
            TPoly::from_ints(&k, &[0, 0, 1]),
            TPoly::from_ints(&k, &[1, 1]),
            TPoly::from_ints(&k, &[0, 1, 0, 1]),
        ][which].clone();
        let delta = bider(&phi, &psi, SkewMatrix::single(poly_from(&k, Var::Tau, &d)));
        let x = e.coords(&canonical(&delta)).unwrap();
        let pi_a = e.as_tmodule().unwrap().phi_a(&a).unwrap();
        let want = apply_matrix(&pi_a, &x, &k).unwrap();
        let moved = bider(&phi, &psi, psi.phi_a(&a).unwrap().mul(&delta.delta_t).unwrap());
        prop_assert_eq!(e.coords(&canonical(&moved)).unwrap(), want);
    }

    #[test]
    fn baer_group_laws(a in coeffs(4, 6), b in coeffs(4, 6), c in coeffs(4, 6)) {
        let k = gf(2, 2);
        let (phi, psi) = (module(&k, "th + tau^3"), module(&k, "th + tau^2"));
        let cls = |v: &[u32]| reduce_canonical(&bider(&phi, &psi, SkewMatrix::single(poly_from(&k, Var::Tau, v)))).unwrap().0;
        let (a, b, c) = (cls(&a), cls(&b), cls(&c));
        let zero = ExtClass::zero(&phi, &psi);
        let s = |x: &ExtClass, y: &ExtClass| baer_sum(x, y).unwrap();
        prop_assert_eq!(s(&s(&a, &b), &c), s(&a, &s(&b, &c)));
        prop_assert_eq!(s(&a, &b), s(&b, &a));
        prop_assert_eq!(s(&a, &zero), a.clone());
        prop_assert!(s(&a, &a.neg()).is_zero());
        let t2 = TPoly::from_ints(&k, &[1, 0, 1]);
        prop_assert_eq!(t_action(&t2, &s(&a, &b)).unwrap(), s(&t_action(&t2, &a).unwrap(), &t_action(&t2, &b).unwrap()));
    }

    #[test]
    fn pullback_pushout_and_action_agree(d in coeffs(9, 6), which in 0usize..3) {
        let k = gf(3, 2);
        let (phi, psi) = (module(&k, "th + tau^3"), module(&k, "th + g*tau^2"));
        let a = [TPoly::t(&k), TPoly::from_ints(&k, &[1, 1]), TPoly::from_ints(&k, &[0, 0, 1])][which].clone();
        let delta = bider(&phi, &psi, SkewMatrix::single(poly_from(&k, Var::Tau, &d)));
        let act = t_action(&a, &reduce_canonical(&delta).unwrap().0).unwrap().canonical;
        let g = check_morphism(phi.phi_a(&a).unwrap(), &phi, &phi).unwrap();
        let f = check_morphism(psi.phi_a(&a).unwrap(), &psi, &psi).unwrap();
        prop_assert_eq!(canonical(&pullback(&delta, &g).unwrap()), act.clone());
        prop_assert_eq!(canonical(&pushout(&delta, &f).unwrap()), act);
    }

    #[test]
    fn short_exact_ext_sequence_on_classes(d in coeffs(3, 3), x in prop::collection::vec(0u32..3, 5)) {
        // rk G below both outer ranks: 0 → Ext¹(E,G) → Ext¹(X,G) → Ext¹(F,G) → 0.
        let k = gf(3, 1);
        let (e, f, g) = (module(&k, "th + tau^3"), module(&k, "th + tau^2"), module(&k, "th + tau"));
        let delta = bider(&e, &f, SkewMatrix::single(poly_from(&k, Var::Tau, &d)));
        let six = six_term_maps(&delta, &g).unwrap();
        let seq = six.ext_sequence().unwrap();
        let xs: Vec<FieldElement> = x.iter().map(|&i| k.element(i).unwrap()).collect();
        let eta = Biderivation::new(&six.x, &g, seq.middle.from_coords(&xs).unwrap()).unwrap();
        let to_f = six.con_ext_i(&eta).unwrap();
        let y = seq.quotient.class_of(&to_f).unwrap();
        // The F-coordinates come first in the middle basis.
        let nq = seq.quotient.dim();
        prop_assert_eq!(seq.quotient.coords(&y.canonical).unwrap(), xs[..nq].iter().map(|c| -c).collect::<Vec<_>>());
        // Composite of the two maps vanishes.
        let from_e = Biderivation::new(&e, &g, seq.sub.from_coords(&xs[nq..]).unwrap()).unwrap();
        let through = six.con_ext_i(&six.con_ext_pi(&from_e).unwrap()).unwrap();
        prop_assert!(canonical(&through).is_zero());
    }
}

#[test]
fn carlitz_tensor_shapes() {
    let k = gf(3, 2);
    for e in 1..=5 {
        let c = TModule::carlitz_tensor(&k, e);
        assert_eq!((c.rank(), c.dim()), (1, e));
    }
}

#[test]
fn structure_invariants() {
    let k = gf(3, 2);
    let cases = [
        ext_drinfeld_structure(&module(&k, "th + tau^3"), &module(&k, "th + tau^2")).unwrap(),
        ext_product_structure(&[module(&k, "th + tau^3"), module(&k, "th + tau^4")], &[module(&k, "th + tau^2")]).unwrap(),
        ext_tmodule_source(&module(&k, "tmodule dim=2 [[th, 0], [0, th]] + [[1, 0], [0, 1]]*tau^3"), &module(&k, "th + tau")).unwrap(),
        ext_carlitz_target(&module(&k, "th + tau^3"), 3).unwrap(),
    ];
    for (i, e) in cases.iter().enumerate() {
        let n = e.nilpotent().unwrap();
        assert!(n.pow(e.dim() as u32, &k).unwrap().is_zero());
        if i < 3 {
            assert!(n.is_zero(), "case {i}");
        }
        let g = e.projection();
        let theta = SkewMatrix::scalar(Var::Tau, e.ga_rank(), &k.theta());
        assert_eq!(g.mul(&e.pi_t).unwrap(), theta.mul(&g).unwrap());
        for &r in &e.ga {
            for j in 0..e.dim() {
                let want = if j == r { SkewPoly::constant(k.theta(), Var::Tau) } else { SkewPoly::zero(Var::Tau) };
                assert_eq!(e.pi_t.get(r, j), &want);
            }
        }
        let sub = e.ext0();
        assert_eq!(e.pi_t.mul(&sub.inclusion).unwrap(), sub.inclusion.mul(&sub.pi0_t).unwrap());
    }
}
