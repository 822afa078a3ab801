use std::fmt::Write as _;

use drinfeld_ext::ext::{ext_drinfeld_structure, negate_indices, BasisLabel};
use drinfeld_ext::json::{ext_structure_to_json, skew_matrix_to_json};
use drinfeld_ext::oracle::{self, Mode, Report, Variant};
use drinfeld_ext::{
    act_biderivation, assemble_extension, baer_sum, check_morphism, duality_transport, ext_carlitz_target,
    ext_product_structure, ext_tmodule_source, ga_sequence, hom_space, is_split, parse_field, parse_matrix,
    parse_module, parse_tpoly, pullback, pushout, reduce_canonical, sigma_ext_structure, six_term_maps, Biderivation,
    Error, ExtStructure, Field, SplitVerdict, TModule, Var,
};
use serde_json::{json, Value};

use crate::{Check, Cli, Cmd, ModeArg, Pair, WithDelta};

/// Rendered output and whether a verification passed.
pub struct Output {
    pub text: String,
    pub verified: bool,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Domain(e) => write!(f, "{e}"),
        }
    }
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "UsageError",
            CliError::Domain(e) => e.code(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Domain(Error::Parse { .. }) => 2,
            CliError::Domain(_) => 1,
        }
    }
}

type Res<T> = Result<T, CliError>;

struct Session {
    field: Field,
    json: bool,
}

impl Session {
    fn module(&self, s: &str, var: Var) -> Res<TModule> {
        Ok(parse_module(&self.field, var, s)?)
    }

    fn pair(&self, p: &Pair) -> Res<(TModule, TModule)> {
        let var = var_of(p.sigma);
        Ok((self.module(&p.phi, var)?, self.module(&p.psi, var)?))
    }

    fn delta(&self, d: &WithDelta) -> Res<Biderivation> {
        let (phi, psi) = self.pair(&d.pair)?;
        let m = parse_matrix(&self.field, phi.var(), &d.delta)?;
        Ok(Biderivation::new(&phi, &psi, m)?)
    }

    fn emit(&self, text: String, value: Value) -> Output {
        let text = if self.json { format!("{}\n", serde_json::to_string_pretty(&value).expect("serializable")) } else { text };
        Output { text, verified: true }
    }
}

fn var_of(sigma: bool) -> Var {
    if sigma {
        Var::Sigma
    } else {
        Var::Tau
    }
}

fn label(l: &BasisLabel, var: Var, single: bool) -> String {
    let mono = match l.deg {
        0 => "1".to_string(),
        1 => var.name().to_string(),
        k => format!("{}^{k}", var.name()),
    };
    if single {
        mono
    } else {
        format!("{mono} at ({}, {})", l.row, l.col)
    }
}

fn structure_text(e: &ExtStructure) -> String {
    let var = e.var();
    let single = e.source.dim() == 1 && e.target.dim() == 1;
    let mut s = String::new();
    let _ = writeln!(s, "field: {}", e.field().header());
    let _ = writeln!(s, "source: {}", e.source);
    let _ = writeln!(s, "target: {}", e.target);
    let labels: Vec<String> = e.basis.iter().map(|l| label(l, var, single)).collect();
    let _ = writeln!(s, "basis: {}", labels.join(", "));
    let _ = writeln!(s, "pi_t: {}", e.pi_t);
    for (k, a) in e.pi_t.decompose() {
        let _ = writeln!(s, "  {}^{k}: {a}", var.name());
    }
    let _ = writeln!(s, "ga_rank: {}", e.ga_rank());
    s
}

fn structure_out(sess: &Session, e: &ExtStructure) -> Output {
    sess.emit(structure_text(e), ext_structure_to_json(e))
}

/// Drinfeld pairs go through the Drinfeld entry point, anything else through
/// the generic builder.
fn ext_any(phi: &TModule, psi: &TModule) -> Res<ExtStructure> {
    if phi.var() == Var::Sigma {
        return Ok(sigma_ext_structure(phi, psi)?);
    }
    if phi.is_drinfeld() && psi.is_drinfeld() {
        return Ok(ext_drinfeld_structure(phi, psi)?);
    }
    Ok(ExtStructure::build(phi, psi, drinfeld_ext::BasisOrder::ColumnMajor)?)
}

fn report_out(sess: &Session, r: &Report) -> Output {
    let mut text = String::new();
    let _ = writeln!(text, "check: {}", r.check);
    let _ = writeln!(text, "field: {}", r.field);
    let mode = match r.mode {
        Mode::Sample => "sample",
        Mode::Enumerate => "enumerate",
    };
    match r.seed {
        Some(seed) => {
            let _ = writeln!(text, "mode: {mode} (seed {seed})");
        }
        None => {
            let _ = writeln!(text, "mode: {mode}");
        }
    }
    let _ = writeln!(text, "checked: {}", r.checked);
    let _ = writeln!(text, "result: {}", if r.passed { "pass" } else { "FAIL" });
    if let Some(c) = &r.counterexample {
        let _ = writeln!(text, "counterexample: {}", c.input);
        let _ = writeln!(text, "  expected: {}", c.expected);
        let _ = writeln!(text, "  actual:   {}", c.actual);
    }
    for n in &r.notes {
        let _ = writeln!(text, "note: {n}");
    }
    let mut out = sess.emit(text, serde_json::to_value(r).expect("serializable"));
    out.verified = r.passed;
    out
}

pub fn run(cli: &Cli) -> Res<Output> {
    let sess = Session { field: parse_field(&cli.field)?, json: cli.json };
    let k = &sess.field;
    Ok(match &cli.cmd {
        Cmd::Ext(p) => {
            let (phi, psi) = sess.pair(p)?;
            structure_out(&sess, &ext_any(&phi, &psi)?)
        }
        Cmd::Ext0(p) => {
            let (phi, psi) = sess.pair(p)?;
            let e = ext_any(&phi, &psi)?;
            let sub = e.ext0();
            let single = phi.dim() == 1 && psi.dim() == 1;
            let labels: Vec<String> = sub.basis.iter().map(|l| label(l, e.var(), single)).collect();
            let text = format!("basis: {}\npi0_t: {}\nga_rank: {}\n", labels.join(", "), sub.pi0_t, e.ga_rank());
            let basis: Vec<Value> = sub.basis.iter().map(|b| json!({"row": b.row, "col": b.col, "deg": b.deg})).collect();
            sess.emit(text, json!({"basis": basis, "pi0_t": skew_matrix_to_json(&sub.pi0_t), "ga_rank": e.ga_rank()}))
        }
        Cmd::ExtSeq(p) => {
            let (phi, psi) = sess.pair(p)?;
            let e = ext_any(&phi, &psi)?;
            let seq = ga_sequence(&e)?;
            let text = format!(
                "ext0: {}\next: {}\nga: {}\ninclusion: {}\nprojection: {}\n",
                seq.ext0.phi_t(),
                seq.ext.phi_t(),
                seq.ga.phi_t(),
                seq.inclusion.f,
                seq.projection.f
            );
            sess.emit(
                text,
                json!({
                    "ext0": skew_matrix_to_json(seq.ext0.phi_t()),
                    "ext": skew_matrix_to_json(seq.ext.phi_t()),
                    "ga_rank": e.ga_rank(),
                    "inclusion": skew_matrix_to_json(&seq.inclusion.f),
                    "projection": skew_matrix_to_json(&seq.projection.f),
                }),
            )
        }
        Cmd::ExtProd { phi, psi } => {
            let srcs = phi.iter().map(|s| sess.module(s, Var::Tau)).collect::<Res<Vec<_>>>()?;
            let tgts = psi.iter().map(|s| sess.module(s, Var::Tau)).collect::<Res<Vec<_>>>()?;
            structure_out(&sess, &ext_product_structure(&srcs, &tgts)?)
        }
        Cmd::ExtTmod(p) => {
            let (phi, psi) = sess.pair(p)?;
            structure_out(&sess, &ext_tmodule_source(&phi, &psi)?)
        }
        Cmd::ExtCarlitz { phi, e } => {
            let phi = sess.module(phi, Var::Tau)?;
            let s = ext_carlitz_target(&phi, *e)?;
            let mut out = structure_out(&sess, &s);
            if !sess.json {
                out.text.push_str(&format!("nilpotent: {}\n", s.nilpotent()?));
            }
            out
        }
        Cmd::ExtDual { phi, psi, negate } => {
            let (phi, psi) = (sess.module(phi, Var::Tau)?, sess.module(psi, Var::Tau)?);
            let d = duality_transport(&phi, &psi)?;
            let mut out = structure_out(&sess, &d.structure);
            if *negate {
                let m = negate_indices(&d.structure.pi_t)?;
                if sess.json {
                    let mut v = ext_structure_to_json(&d.structure);
                    v["pi_t_negated"] = skew_matrix_to_json(&m);
                    out = sess.emit(String::new(), v);
                } else {
                    out.text.push_str(&format!("negated: {m}\n"));
                }
            }
            out
        }
        Cmd::Adjoint { delta, phi, sigma } => {
            let var = var_of(*sigma);
            let m = match (delta, phi) {
                (Some(d), None) => parse_matrix(k, var, d)?,
                (None, Some(p)) => sess.module(p, var)?.phi_t().clone(),
                _ => return Err(CliError::Usage("adjoint needs --delta or --phi".into())),
            };
            let ad = m.adjoint()?;
            sess.emit(format!("{ad}\n"), skew_matrix_to_json(&ad))
        }
        Cmd::Reduce(d) => {
            let delta = sess.delta(d)?;
            let (class, u) = reduce_canonical(&delta)?;
            sess.emit(
                format!("canonical: {}\nwitness: {u}\n", class.canonical),
                json!({"canonical": skew_matrix_to_json(&class.canonical), "witness": skew_matrix_to_json(&u)}),
            )
        }
        Cmd::Assemble(d) => {
            let x = assemble_extension(&sess.delta(d)?)?;
            sess.emit(format!("{}\n", x.phi_t()), skew_matrix_to_json(x.phi_t()))
        }
        Cmd::Baer { pair, delta } => {
            if delta.len() != 2 {
                return Err(CliError::Usage(format!("baer takes exactly two --delta values, got {}", delta.len())));
            }
            let a = reduce_canonical(&sess.delta(&WithDelta { pair: pair.clone(), delta: delta[0].clone() })?)?.0;
            let b = reduce_canonical(&sess.delta(&WithDelta { pair: pair.clone(), delta: delta[1].clone() })?)?.0;
            let s = baer_sum(&a, &b)?;
            sess.emit(format!("{}\n", s.canonical), skew_matrix_to_json(&s.canonical))
        }
        Cmd::Act { d, a } => {
            let a = parse_tpoly(k, a)?;
            let moved = act_biderivation(&a, &sess.delta(d)?)?;
            let c = reduce_canonical(&moved)?.0.canonical;
            sess.emit(format!("{c}\n"), skew_matrix_to_json(&c))
        }
        Cmd::Pullback { d, g, from } => {
            let delta = sess.delta(d)?;
            let src = match from {
                Some(g) => sess.module(g, delta.source.var())?,
                None => delta.source.clone(),
            };
            let f = check_morphism(parse_matrix(k, src.var(), g)?, &src, &delta.source)?;
            class_out(&sess, &pullback(&delta, &f)?)?
        }
        Cmd::Pushout { d, f, to } => {
            let delta = sess.delta(d)?;
            let tgt = match to {
                Some(g) => sess.module(g, delta.target.var())?,
                None => delta.target.clone(),
            };
            let f = check_morphism(parse_matrix(k, tgt.var(), f)?, &delta.target, &tgt)?;
            class_out(&sess, &pushout(&delta, &f)?)?
        }
        Cmd::Split { d, bound } => {
            let delta = sess.delta(d)?;
            match is_split(&delta, *bound)? {
                SplitVerdict::Split(u) => sess.emit(
                    format!("split\nwitness: {u}\n"),
                    json!({"verdict": "split", "witness": skew_matrix_to_json(&u)}),
                ),
                SplitVerdict::NotSplit => sess.emit("not split\n".into(), json!({"verdict": "not-split"})),
                SplitVerdict::Inconclusive(b) => sess.emit(
                    format!("inconclusive: no witness of degree <= {b}\n"),
                    json!({"verdict": "inconclusive", "bound": b}),
                ),
            }
        }
        Cmd::Hom { pair, bound } => {
            let (phi, psi) = sess.pair(pair)?;
            let h = hom_space(&phi, &psi, bound.unwrap_or(2 * phi.dim().max(psi.dim())))?;
            let mut text = format!("dim: {}\ncomplete: {}\n", h.basis.len(), h.complete);
            for b in &h.basis {
                let _ = writeln!(text, "  {b}");
            }
            let basis: Vec<Value> = h.basis.iter().map(skew_matrix_to_json).collect();
            sess.emit(text, json!({"bound": h.bound, "complete": h.complete, "basis": basis}))
        }
        Cmd::Sixterm { d, g } => {
            let delta = sess.delta(d)?;
            let g = sess.module(g, delta.source.var())?;
            let six = six_term_maps(&delta, &g)?;
            let seq = six.ext_sequence()?;
            let text = format!(
                "x_t: {}\next(E,G): {}\next(X,G): {}\next(F,G): {}\nomega_t: {}\ndelta_t: {}\n",
                six.x.phi_t(),
                seq.sub.pi_t,
                seq.middle.pi_t,
                seq.quotient.pi_t,
                seq.middle.pi_t,
                seq.delta_t
            );
            sess.emit(
                text,
                json!({
                    "x_t": skew_matrix_to_json(six.x.phi_t()),
                    "sub": ext_structure_to_json(&seq.sub),
                    "middle": ext_structure_to_json(&seq.middle),
                    "quotient": ext_structure_to_json(&seq.quotient),
                    "delta_t": skew_matrix_to_json(&seq.delta_t),
                }),
            )
        }
        Cmd::Verify { phi, psi, check, delta, g, samples, seed, mode, bound } => {
            let (phi, psi) = (sess.module(phi, Var::Tau)?, sess.module(psi, Var::Tau)?);
            let mode = match mode {
                ModeArg::Sample => Mode::Sample,
                ModeArg::Enumerate => Mode::Enumerate,
            };
            let r = match check {
                Check::Structure => oracle::verify_structure(&ext_any(&phi, &psi)?, *samples, *seed)?,
                Check::Ga => oracle::verify_ga_exactness(&ext_any(&phi, &psi)?, mode, *samples, *seed)?,
                Check::Duality => oracle::verify_duality(&phi, &psi, *samples, *seed)?,
                Check::SixtermCov | Check::SixtermCon => {
                    let d = delta.as_ref().ok_or_else(|| CliError::Usage("six-term checks need --delta".into()))?;
                    let delta = Biderivation::new(&phi, &psi, parse_matrix(k, Var::Tau, d)?)?;
                    let six = six_term_maps(&delta, &sess.module(g, Var::Tau)?)?;
                    let variant = if *check == Check::SixtermCov { Variant::Covariant } else { Variant::Contravariant };
                    oracle::verify_six_term(&six, variant, mode, *bound, *samples, *seed)?
                }
            };
            report_out(&sess, &r)
        }
    })
}

/// δ_t, plus its canonical form when the pair has one.
fn class_out(sess: &Session, delta: &Biderivation) -> Res<Output> {
    let canonical = match reduce_canonical(delta) {
        Ok((class, _)) => Some(class.canonical),
        Err(Error::UnsupportedRegime(_) | Error::SingularLeading) => None,
        Err(e) => return Err(e.into()),
    };
    let mut text = format!("delta_t: {}\n", delta.delta_t);
    if let Some(c) = &canonical {
        let _ = writeln!(text, "canonical: {c}");
    }
    Ok(sess.emit(
        text,
        json!({"delta_t": skew_matrix_to_json(&delta.delta_t), "canonical": canonical.as_ref().map(skew_matrix_to_json)}),
    ))
}
