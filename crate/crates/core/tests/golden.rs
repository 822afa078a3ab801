//! Exact renderings of worked examples.

mod common;

use common::*;
use drinfeld_ext::*;

fn q3() -> Field {
    parse_field("GF(3)(th)").unwrap()
}

fn formal(gens: &str) -> Field {
    parse_field(&format!("FTF(3; gens={gens},th; inv=a)")).unwrap()
}

#[test]
fn twisted_products() {
    let k = formal("a,c");
    let p = parse_poly(&k, Var::Tau, "(th + tau^2)*(c*tau)").unwrap();
    assert_eq!(p.to_string(), "c*th*tau + c[2]*tau^3");
    let m = parse_module(&k, Var::Tau, "th + a*tau^3").unwrap();
    assert_eq!(m.adjoint().unwrap().to_string(), "th + a[-3]*sig^3");
    let c = parse_element(&k, "c").unwrap();
    assert_eq!(parse_poly(&k, Var::Tau, "tau^2").unwrap().eval(&c).unwrap().to_string(), "c[2]");
}

#[test]
fn module_constructors() {
    let k = q3();
    assert_eq!(TModule::carlitz(&k).to_string(), "th + tau");
    let phi = TModule::drinfeld(&k, Var::Tau, &[(3, k.one())]).unwrap();
    assert_eq!((phi.to_string(), phi.rank()), ("th + tau^3".to_string(), 3));
    let c2 = TModule::carlitz_tensor(&k, 2);
    assert_eq!(c2.to_string(), "[[th, 1], [0, th]] + [[0, 0], [1, 0]]*tau");
    assert_eq!(module(&k, "tmodule dim=2 [[th,1],[0,th]] + [[0,0],[1,0]]*tau"), c2);
}

#[test]
fn inner_biderivations_of_monomials() {
    let k = formal("a,c");
    let (phi, psi) = (module(&k, "th + tau^3"), module(&k, "th + tau^2"));
    let u = |s: &str| inner_biderivation(&mat(&k, s), &phi, &psi).unwrap().delta_t.to_string();
    assert_eq!(u("c"), "[[2*c[2]*tau^2 + c*tau^3]]");
    // c(θ^(1) − θ)τ − c^(2)τ³ + cτ⁴.
    assert_eq!(u("c*tau"), "[[(2*c*th + c*th[1])*tau + 2*c[2]*tau^3 + c*tau^4]]");
}

#[test]
fn reduction_of_a_shifted_monomial() {
    let k = formal("a,c");
    let (phi, psi) = (module(&k, "th + tau^3"), module(&k, "th + tau^2"));
    let d = bider(&phi, &psi, mat(&k, "(th + tau^2)*c*tau^2"));
    assert_eq!(canonical(&d).to_string(), "[[(c[2]*th + 2*c[2]*th[1])*tau + (c*th + c[6])*tau^2]]");
}

#[test]
fn rank_three_over_rank_two() {
    let k = q3();
    let e = ext_drinfeld_structure(&module(&k, "th + tau^3"), &module(&k, "th + tau^2")).unwrap();
    let parts: Vec<String> = e.pi_t.decompose().iter().map(|(d, a)| format!("{d}: {a}")).collect();
    assert_eq!(
        parts,
        [
            "0: [[th, 0, 0], [0, th, 0], [0, 0, th]]",
            "2: [[0, 0, 0], [0, 0, 2*th^3 + th], [1, 0, 0]]",
            "4: [[0, 0, 0], [0, 0, 0], [0, 1, 0]]",
            "6: [[0, 0, 0], [0, 0, 0], [0, 0, 1]]",
        ]
    );
    assert_eq!(e.ga, vec![0]);
    assert_eq!(e.ext0().pi0_t.to_string(), "[[th, (2*th^3 + th)*tau^2], [tau^4, th + tau^6]]");
    // Each column: t * c·τ^i for a constant c.
    let a = TPoly::t(&k);
    let one = ExtClass::zero(&e.source, &e.target);
    let c0 = e.class_of(&bider(&e.source, &e.target, mat(&k, "1"))).unwrap();
    assert_eq!(t_action(&a, &c0).unwrap().canonical.to_string(), "[[th + tau^2]]");
    assert!(t_action(&a, &one).unwrap().is_zero());
}

#[test]
fn formal_rank_three_over_rank_two() {
    let k = formal("a,b");
    let e = ext_drinfeld_structure(&module(&k, "th + a*tau^3"), &module(&k, "th + b*tau^2")).unwrap();
    assert_eq!(
        e.pi_t.to_string(),
        "[[th, 0, 0], [0, th, ((b*th + 2*b*th[1])/a[1])*tau^2], [b*tau^2, b*b[2]/a[2]*tau^4, th + b*b[2]*b[4]/(a[2]*a[5])*tau^6]]"
    );
}

#[test]
fn formal_sigma_side() {
    let k = formal("a,b");
    let phi = parse_module(&k, Var::Sigma, "th + a*sig^3").unwrap();
    let psi = parse_module(&k, Var::Sigma, "th + b*sig^2").unwrap();
    assert_eq!(
        sigma_ext_structure(&phi, &psi).unwrap().pi_t.to_string(),
        "[[th, 0, 0], [0, th, ((2*b*th[-1] + b*th)/a[-1])*sig^2], [b*sig^2, b[-2]*b/a[-2]*sig^4, th + b[-4]*b[-2]*b/(a[-5]*a[-2])*sig^6]]"
    );
}

#[test]
fn formal_duality_transport() {
    let k = formal("a,b");
    let d = duality_transport(&module(&k, "th + b*tau^2"), &module(&k, "th + a*tau^3")).unwrap();
    assert_eq!(d.structure.source.to_string(), "th + a[-3]*sig^3");
    assert_eq!(d.structure.target.to_string(), "th + b[-2]*sig^2");
    assert_eq!(
        d.structure.pi_t.to_string(),
        "[[th, 0, 0], [0, th, ((2*b[-2]*th[-1] + b[-2]*th)/a[-4])*sig^2], [b[-2]*sig^2, b[-4]*b[-2]/a[-5]*sig^4, th + b[-6]*b[-4]*b[-2]/(a[-8]*a[-5])*sig^6]]"
    );
}

#[test]
fn ga_ranks() {
    let k = q3();
    let (p3, p4, p2, c) = (module(&k, "th + tau^3"), module(&k, "th + tau^4"), module(&k, "th + tau^2"), module(&k, "th + tau"));
    assert_eq!(ext_drinfeld_structure(&p3, &p2).unwrap().ga_rank(), 1);
    assert_eq!(ext_product_structure(&[p3.clone(), p4], &[p2, c.clone()]).unwrap().ga_rank(), 4);
    // A_n = I and N_Φ with one nonzero row: one zero row remains.
    let src = module(&k, "tmodule dim=2 [[th, 1], [0, th]] + [[1, 0], [0, 1]]*tau^3");
    assert_eq!(ext_tmodule_source(&src, &c).unwrap().ga_rank(), 1);
    let src = module(&k, "tmodule dim=2 [[th, 0], [0, th]] + [[1, 0], [0, 1]]*tau^3");
    assert_eq!(ext_tmodule_source(&src, &c).unwrap().ga_rank(), 2);
}

#[test]
fn class_sum_and_maps() {
    let k = q3();
    let (phi, psi) = (module(&k, "th + tau^3"), module(&k, "th + tau^2"));
    let cls = |s: &str| reduce_canonical(&bider(&phi, &psi, mat(&k, s))).unwrap().0;
    assert_eq!(baer_sum(&cls("1"), &cls("tau")).unwrap().canonical.to_string(), "[[1 + tau]]");
    let d = bider(&phi, &psi, mat(&k, "1"));
    let g = check_morphism(phi.phi_t().clone(), &phi, &phi).unwrap();
    let f = check_morphism(psi.phi_t().clone(), &psi, &psi).unwrap();
    assert_eq!(canonical(&pullback(&d, &g).unwrap()).to_string(), "[[th + tau^2]]");
    assert_eq!(canonical(&pushout(&d, &f).unwrap()).to_string(), "[[th + tau^2]]");
    let h = hom_space(&phi, &module(&k, "th + tau"), 4).unwrap();
    assert!(h.basis.is_empty() && h.complete);
}

#[test]
fn extension_by_carlitz() {
    let k = q3();
    let (f, e) = (module(&k, "th + tau^3"), module(&k, "th + tau^2"));
    let g = TModule::carlitz(&k);
    let run = |d: &str| six_term_maps(&bider(&e, &f, mat(&k, d)), &g).unwrap();
    let six = run("1 + tau");
    assert_eq!(six.x.phi_t().to_string(), "[[th + tau^2, 0], [1 + tau, th + tau^3]]");
    let seq = six.ext_sequence().unwrap();
    assert_eq!(
        seq.middle.pi_t.to_string(),
        "[[th, 0, 0, 0, 0], [tau, th, tau^2, 0, 0], [0, tau, th, 0, 0], [0, 0, 2*tau, th, 0], [0, 0, 2*tau, tau, th + tau^2]]"
    );
    assert_eq!(seq.delta_t.to_string(), "[[0, 0, 2*tau], [0, 0, 2*tau]]");
    // Only the coupling block moves with δ.
    let seq3 = run("1 + tau^3").ext_sequence().unwrap();
    assert_eq!(seq3.quotient.pi_t, seq.quotient.pi_t);
    assert_eq!(seq3.sub.pi_t, seq.sub.pi_t);
    assert_eq!(seq3.delta_t.to_string(), "[[0, 0, 2*tau], [0, 0, (th^3 + 2*th)*tau + 2*tau^3]]");
}

#[test]
fn coupling_block_checked_by_oracle() {
    // The computed block passes brute-force verification; replacing its
    // (θ^(1) − θ)τ − τ³ entry with (θ − θ^(1))τ + τ⁴ does not.
    for f in ["GF(3^2)", "GF(3^3)"] {
        let k = parse_field(f).unwrap();
        let (fm, e) = (module(&k, "th + tau^3"), module(&k, "th + tau^2"));
        let d = bider(&e, &fm, mat(&k, "1 + tau^3"));
        let mut mid = six_term_maps(&d, &TModule::carlitz(&k)).unwrap().ext_sequence().unwrap().middle;
        assert!(oracle::verify_structure(&mid, 200, 1).unwrap().passed);
        let n = mid.dim();
        mid.pi_t.set(n - 1, 2, parse_poly(&k, Var::Tau, "(th - th^3)*tau + tau^4").unwrap());
        let r = oracle::verify_structure(&mid, 200, 1).unwrap();
        assert!(!r.passed && r.counterexample.is_some());
    }
}
