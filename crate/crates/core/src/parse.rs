//! Text grammar for fields, elements, skew polynomials, matrices and modules.
//!
//! Field headers: `GF(3^2; mod=g^2+1)`, `GF(3)(th)`, `FTF(3; gens=a,b,th; inv=a)`.
//! Expressions: `th`, `g`, integers, `a[-3]` (twist symbol or twist of any
//! scalar), `tau`, `sig`, `+ - * / ^`, parentheses and `[[..],[..]]` matrices.

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement, FiniteField};
use crate::skew::{SkewMatrix, SkewPoly, Var};
use crate::tmodule::{TModule, TPoly};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(u64),
    Ident(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Comma,
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<(usize, char)> = s.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        match c {
            c if c.is_whitespace() => {
                i += 1;
            }
            '0'..='9' => {
                let mut n: u64 = 0;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    n = n
                        .checked_mul(10)
                        .and_then(|x| x.checked_add(chars[i].1 as u64 - '0' as u64))
                        .ok_or_else(|| Error::parse(pos, "integer literal too large"))?;
                    i += 1;
                }
                out.push((pos, Tok::Num(n)));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut id = String::new();
                while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                    id.push(chars[i].1);
                    i += 1;
                }
                out.push((pos, Tok::Ident(id)));
            }
            'θ' | 'τ' | 'σ' => {
                let id = match c {
                    'θ' => "th",
                    'τ' => "tau",
                    _ => "sig",
                };
                out.push((pos, Tok::Ident(id.into())));
                i += 1;
            }
            _ => {
                let t = match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    '+' => Tok::Plus,
                    '-' | '−' => Tok::Minus,
                    '*' | '·' => Tok::Star,
                    '/' => Tok::Slash,
                    '^' => Tok::Caret,
                    ',' => Tok::Comma,
                    _ => return Err(Error::parse(pos, format!("unexpected character '{c}'"))),
                };
                out.push((pos, t));
                i += 1;
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
enum Ast {
    Num(u64),
    Ident(usize, String, Option<i64>),
    Neg(Box<Ast>),
    Bin(usize, char, Box<Ast>, Box<Ast>),
    Pow(usize, Box<Ast>, i64),
    Matrix(usize, Vec<Vec<Ast>>),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    i: usize,
    end: usize,
}

impl Parser {
    fn new(s: &str) -> Result<Self> {
        Ok(Parser { toks: tokenize(s)?, i: 0, end: s.len() })
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |t| t.0)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.1)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok, what: &str) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(Error::parse(self.pos(), format!("expected {what}")))
        }
    }

    fn finish(&self) -> Result<()> {
        if self.i < self.toks.len() {
            return Err(Error::parse(self.pos(), "unexpected trailing input"));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Ast> {
        let mut lhs = self.term()?;
        loop {
            let pos = self.pos();
            if self.eat(&Tok::Plus) {
                lhs = Ast::Bin(pos, '+', Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(&Tok::Minus) {
                lhs = Ast::Bin(pos, '-', Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Ast> {
        let mut lhs = self.unary()?;
        loop {
            let pos = self.pos();
            if self.eat(&Tok::Star) {
                lhs = Ast::Bin(pos, '*', Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(&Tok::Slash) {
                lhs = Ast::Bin(pos, '/', Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Ast> {
        if self.eat(&Tok::Minus) {
            return Ok(Ast::Neg(Box::new(self.unary()?)));
        }
        if self.eat(&Tok::Plus) {
            return self.unary();
        }
        self.power()
    }

    fn signed_int(&mut self) -> Result<i64> {
        let neg = self.eat(&Tok::Minus);
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.i += 1;
                let n = i64::try_from(n).map_err(|_| Error::parse(self.pos(), "integer too large"))?;
                Ok(if neg { -n } else { n })
            }
            _ => Err(Error::parse(self.pos(), "expected an integer")),
        }
    }

    fn power(&mut self) -> Result<Ast> {
        let base = self.atom()?;
        let pos = self.pos();
        if self.eat(&Tok::Caret) {
            let e = if self.eat(&Tok::LParen) {
                let e = self.signed_int()?;
                self.expect(&Tok::RParen, "')'")?;
                e
            } else {
                self.signed_int()?
            };
            return Ok(Ast::Pow(pos, Box::new(base), e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Ast> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.i += 1;
                Ok(Ast::Num(n))
            }
            Some(Tok::Ident(id)) => {
                self.i += 1;
                let idx = if self.eat(&Tok::LBracket) {
                    let k = self.signed_int()?;
                    self.expect(&Tok::RBracket, "']'")?;
                    Some(k)
                } else {
                    None
                };
                Ok(Ast::Ident(pos, id, idx))
            }
            Some(Tok::LParen) => {
                self.i += 1;
                let e = self.expr()?;
                self.expect(&Tok::RParen, "')'")?;
                Ok(e)
            }
            Some(Tok::LBracket) => {
                self.i += 1;
                let mut rows = Vec::new();
                loop {
                    self.expect(&Tok::LBracket, "'[' opening a matrix row")?;
                    let mut row = vec![self.expr()?];
                    while self.eat(&Tok::Comma) {
                        row.push(self.expr()?);
                    }
                    self.expect(&Tok::RBracket, "']' closing a matrix row")?;
                    rows.push(row);
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                self.expect(&Tok::RBracket, "']' closing the matrix")?;
                Ok(Ast::Matrix(pos, rows))
            }
            _ => Err(Error::parse(pos, "expected a number, name, '(' or '['")),
        }
    }
}

fn parse_ast(s: &str) -> Result<Ast> {
    let mut p = Parser::new(s)?;
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

/// Evaluated expression value.
#[derive(Clone, Debug)]
enum Value {
    Scalar(FieldElement),
    Poly(SkewPoly),
    Matrix(SkewMatrix),
}

struct Ctx<'a> {
    field: &'a Field,
    /// Name of the polynomial variable and the ring it lives in.
    vars: &'a [(&'a str, Var)],
}

impl Ctx<'_> {
    fn to_poly(&self, v: Value, var: Var, pos: usize) -> Result<SkewPoly> {
        match v {
            Value::Scalar(c) => Ok(SkewPoly::constant(c, var)),
            Value::Poly(p) => {
                if !p.is_zero() && p.var() != var {
                    return Err(Error::parse(pos, "mixed tau and sig"));
                }
                Ok(p.with_var(var))
            }
            Value::Matrix(_) => Err(Error::parse(pos, "expected a scalar or polynomial, found a matrix")),
        }
    }

    fn var_of(&self, a: &Value, b: &Value) -> Var {
        let pick = |v: &Value| match v {
            Value::Poly(p) if !p.is_zero() => Some(p.var()),
            Value::Matrix(m) => Some(m.var()),
            _ => None,
        };
        pick(a).or_else(|| pick(b)).unwrap_or(self.vars.first().map_or(Var::Tau, |v| v.1))
    }

    fn to_matrix(&self, v: Value, var: Var, pos: usize) -> Result<SkewMatrix> {
        match v {
            Value::Matrix(m) => Ok(m),
            other => Ok(SkewMatrix::single(self.to_poly(other, var, pos)?)),
        }
    }

    fn eval(&self, a: &Ast) -> Result<Value> {
        match a {
            Ast::Num(n) => Ok(Value::Scalar(self.field.from_int((*n % self.field.characteristic() as u64) as i64))),
            Ast::Ident(pos, name, idx) => {
                let base = if let Some(&(_, var)) = self.vars.iter().find(|v| v.0 == name) {
                    if idx.is_some() {
                        return Err(Error::parse(*pos, format!("'{name}' cannot be twisted")));
                    }
                    return Ok(Value::Poly(SkewPoly::x_pow(self.field, 1, var)));
                } else if let Some(sym) = self.field.symbol(name, idx.unwrap_or(0) as i32) {
                    return Ok(Value::Scalar(sym));
                } else if name == "th" {
                    self.field.theta()
                } else if name == "g" {
                    self.field.generator()
                } else {
                    return Err(Error::parse(*pos, format!("unknown name '{name}'")));
                };
                match idx {
                    Some(i) => Ok(Value::Scalar(base.twist(*i)?)),
                    None => Ok(Value::Scalar(base)),
                }
            }
            Ast::Neg(x) => Ok(match self.eval(x)? {
                Value::Scalar(c) => Value::Scalar(-&c),
                Value::Poly(p) => Value::Poly(p.neg()),
                Value::Matrix(m) => Value::Matrix(m.neg()),
            }),
            Ast::Pow(pos, b, e) => {
                let v = self.eval(b)?;
                match v {
                    Value::Scalar(c) => Ok(Value::Scalar(c.pow(*e)?)),
                    _ if *e < 0 => Err(Error::parse(*pos, "negative power of a polynomial")),
                    Value::Poly(p) => {
                        if let [(1, c)] = p.terms() {
                            if c.is_one() {
                                return Ok(Value::Poly(SkewPoly::x_pow(self.field, *e as usize, p.var())));
                            }
                        }
                        Ok(Value::Poly(p.pow(*e as u32, self.field)?))
                    }
                    Value::Matrix(m) => {
                        if m.rows() != m.cols() {
                            return Err(Error::parse(*pos, "power of a non-square matrix"));
                        }
                        Ok(Value::Matrix(m.pow(*e as u32, self.field)?))
                    }
                }
            }
            Ast::Matrix(pos, rows) => {
                let mut out = Vec::with_capacity(rows.len());
                let mut vals = Vec::new();
                for r in rows {
                    let mut row = Vec::with_capacity(r.len());
                    for x in r {
                        let v = self.eval(x)?;
                        vals.push(v.clone());
                        row.push(v);
                    }
                    out.push(row);
                }
                let var = vals.iter().find_map(|v| match v {
                    Value::Poly(p) if !p.is_zero() => Some(p.var()),
                    _ => None,
                });
                let var = var.unwrap_or(self.vars.first().map_or(Var::Tau, |v| v.1));
                let rows = out
                    .into_iter()
                    .map(|r| r.into_iter().map(|v| self.to_poly(v, var, *pos)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                Ok(Value::Matrix(SkewMatrix::from_rows(var, rows)?))
            }
            Ast::Bin(pos, op, l, r) => {
                let a = self.eval(l)?;
                let b = self.eval(r)?;
                let pos = *pos;
                let var = self.var_of(&a, &b);
                match op {
                    '+' | '-' => {
                        let b = if *op == '-' {
                            match b {
                                Value::Scalar(c) => Value::Scalar(-&c),
                                Value::Poly(p) => Value::Poly(p.neg()),
                                Value::Matrix(m) => Value::Matrix(m.neg()),
                            }
                        } else {
                            b
                        };
                        match (a, b) {
                            (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(&x + &y)),
                            (Value::Matrix(x), y) | (y, Value::Matrix(x)) => {
                                let y = self.to_matrix(y, var, pos)?;
                                Ok(Value::Matrix(x.add(&y)?))
                            }
                            (x, y) => Ok(Value::Poly(self.to_poly(x, var, pos)?.add(&self.to_poly(y, var, pos)?))),
                        }
                    }
                    '*' => match (a, b) {
                        (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(&x * &y)),
                        (Value::Scalar(x), Value::Matrix(m)) => Ok(Value::Matrix(m.scale_left(&x))),
                        (x @ Value::Matrix(_), y) | (x, y @ Value::Matrix(_)) => {
                            let x = self.to_matrix(x, var, pos)?;
                            let y = self.to_matrix(y, var, pos)?;
                            if x.cols() != y.rows() && y.shape() == (1, 1) {
                                let p = y.get(0, 0).clone();
                                return Ok(Value::Matrix(x.try_map(|e| e.mul(&p))?));
                            }
                            if x.cols() != y.rows() && x.shape() == (1, 1) {
                                let p = x.get(0, 0).clone();
                                return Ok(Value::Matrix(y.try_map(|e| p.mul(e))?));
                            }
                            Ok(Value::Matrix(x.mul(&y)?))
                        }
                        (x, y) => {
                            let x = self.to_poly(x, var, pos)?;
                            let y = self.to_poly(y, var, pos)?;
                            Ok(Value::Poly(x.mul(&y)?))
                        }
                    },
                    '/' => {
                        let inv = match b {
                            Value::Scalar(c) => c.inv()?,
                            _ => return Err(Error::parse(pos, "can only divide by a scalar")),
                        };
                        match a {
                            Value::Scalar(x) => Ok(Value::Scalar(&x * &inv)),
                            Value::Poly(p) => Ok(Value::Poly(p.scale_right(&inv)?)),
                            Value::Matrix(m) => Ok(Value::Matrix(m.try_map(|e| e.scale_right(&inv))?)),
                        }
                    }
                    _ => unreachable!(),
                }
            }
        }
    }
}

const SKEW_VARS: &[(&str, Var)] = &[("tau", Var::Tau), ("sig", Var::Sigma)];

/// Parse a field element.
pub fn parse_element(field: &Field, s: &str) -> Result<FieldElement> {
    let ast = parse_ast(s)?;
    match (Ctx { field, vars: &[] }).eval(&ast)? {
        Value::Scalar(c) => Ok(c),
        _ => Err(Error::parse(0, "expected a field element")),
    }
}

/// Parse a skew polynomial; `var` is used when the text has no variable.
pub fn parse_poly(field: &Field, var: Var, s: &str) -> Result<SkewPoly> {
    let ast = parse_ast(s)?;
    let ctx = Ctx { field, vars: SKEW_VARS };
    let v = ctx.eval(&ast)?;
    let p = match v {
        Value::Poly(p) if !p.is_zero() => {
            if p.var() != var {
                return Err(Error::parse(0, format!("expected a polynomial in {}", var.name())));
            }
            p
        }
        other => ctx.to_poly(other, var, 0)?,
    };
    Ok(p)
}

/// Parse a matrix (a bare polynomial becomes 1×1).
pub fn parse_matrix(field: &Field, var: Var, s: &str) -> Result<SkewMatrix> {
    let ast = parse_ast(s)?;
    let ctx = Ctx { field, vars: SKEW_VARS };
    let m = ctx.to_matrix(ctx.eval(&ast)?, var, 0)?;
    // Constant entries carry no variable of their own.
    if m.entries().iter().any(|p| p.degree().unwrap_or(0) > 0 && p.var() != var) {
        return Err(Error::parse(0, format!("expected entries in {}", var.name())));
    }
    Ok(m.with_var(var))
}

/// Parse an element of F_q[t].
pub fn parse_tpoly(field: &Field, s: &str) -> Result<TPoly> {
    let ast = parse_ast(s)?;
    let ctx = Ctx { field, vars: &[("t", Var::Tau)] };
    let p = ctx.to_poly(ctx.eval(&ast)?, Var::Tau, 0)?;
    let deg = p.degree().map_or(0, |d| d + 1);
    let zero = field.zero();
    TPoly::new((0..deg).map(|k| p.coeff_or(k, &zero)).collect()).map_err(|e| Error::parse(0, e.to_string()))
}

/// Parse a module description:
/// `drinfeld "th + tau^3"`, `tmodule dim=2 <matrix>`, `carlitz e=2`,
/// or a bare polynomial / matrix.
pub fn parse_module(field: &Field, var: Var, s: &str) -> Result<TModule> {
    let t = s.trim();
    if let Some(rest) = t.strip_prefix("carlitz") {
        let rest = rest.trim();
        let e = if rest.is_empty() {
            1
        } else {
            let v = rest.strip_prefix("e=").ok_or_else(|| Error::parse(7, "expected e=<n>"))?;
            v.trim().parse::<usize>().map_err(|_| Error::parse(9, "expected a positive integer"))?
        };
        if e == 0 {
            return Err(Error::parse(9, "tensor power must be positive"));
        }
        let c = TModule::carlitz_tensor(field, e);
        return if var == Var::Tau { Ok(c) } else { c.adjoint() };
    }
    let (body, dim) = if let Some(rest) = t.strip_prefix("drinfeld") {
        (rest, Some(1))
    } else if let Some(rest) = t.strip_prefix("tmodule") {
        let rest = rest.trim_start();
        if let Some(r) = rest.strip_prefix("dim=") {
            let end = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
            let d = r[..end].parse::<usize>().map_err(|_| Error::parse(0, "expected dim=<n>"))?;
            (&r[end..], Some(d))
        } else {
            (rest, None)
        }
    } else {
        (t, None)
    };
    let body = body.trim().trim_matches('"');
    let m = parse_matrix(field, var, body)?;
    if let Some(d) = dim {
        if m.rows() != d {
            return Err(Error::parse(0, format!("declared dimension {d} but the matrix is {}x{}", m.rows(), m.cols())));
        }
    }
    if m.shape() == (1, 1) {
        TModule::from_poly(field, m.get(0, 0).clone())
    } else {
        TModule::new(field, m)
    }
}

/// Parse a polynomial over F_p in `g` into coefficients low to high.
fn parse_fp_poly(s: &str, p: u32) -> Result<Vec<u32>> {
    fn ev(a: &Ast, p: u64) -> Result<Vec<u64>> {
        let add = |x: Vec<u64>, y: Vec<u64>| -> Vec<u64> {
            let n = x.len().max(y.len());
            (0..n).map(|i| (x.get(i).unwrap_or(&0) + y.get(i).unwrap_or(&0)) % p).collect()
        };
        let mul = |x: &[u64], y: &[u64]| -> Vec<u64> {
            if x.is_empty() || y.is_empty() {
                return Vec::new();
            }
            let mut out = vec![0u64; x.len() + y.len() - 1];
            for (i, a) in x.iter().enumerate() {
                for (j, b) in y.iter().enumerate() {
                    out[i + j] = (out[i + j] + a * b) % p;
                }
            }
            out
        };
        let neg = |x: Vec<u64>| x.into_iter().map(|c| (p - c % p) % p).collect::<Vec<_>>();
        Ok(match a {
            Ast::Num(n) => vec![n % p],
            Ast::Ident(_, g, None) if g == "g" => vec![0, 1],
            Ast::Ident(pos, name, _) => return Err(Error::parse(*pos, format!("unexpected '{name}' in a polynomial in g"))),
            Ast::Neg(x) => neg(ev(x, p)?),
            Ast::Bin(pos, op, l, r) => {
                let (x, y) = (ev(l, p)?, ev(r, p)?);
                match op {
                    '+' => add(x, y),
                    '-' => add(x, neg(y)),
                    '*' => mul(&x, &y),
                    _ => return Err(Error::parse(*pos, "division is not allowed here")),
                }
            }
            Ast::Pow(pos, b, e) => {
                if *e < 0 {
                    return Err(Error::parse(*pos, "negative exponent"));
                }
                let b = ev(b, p)?;
                let mut acc = vec![1];
                for _ in 0..*e {
                    acc = mul(&acc, &b);
                }
                acc
            }
            Ast::Matrix(pos, _) => return Err(Error::parse(*pos, "unexpected matrix")),
        })
    }
    let v = ev(&parse_ast(s)?, p as u64)?;
    let mut out: Vec<u32> = v.into_iter().map(|c| c as u32).collect();
    while out.last() == Some(&0) {
        out.pop();
    }
    Ok(out)
}

/// Parse `p` or `p^m`.
fn parse_prime_power(s: &str) -> Result<(u32, u32)> {
    let s = s.trim();
    let (a, b) = match s.split_once('^') {
        Some((a, b)) => (a, b),
        None => (s, "1"),
    };
    let p = a.trim().parse::<u32>().map_err(|_| Error::parse(0, format!("bad prime '{a}'")))?;
    let m = b.trim().parse::<u32>().map_err(|_| Error::parse(0, format!("bad exponent '{b}'")))?;
    Ok((p, m))
}

/// Parse a field header.
pub fn parse_field(s: &str) -> Result<Field> {
    let s = s.trim();
    let (kind, rest) = if let Some(r) = s.strip_prefix("GF(") {
        ("GF", r)
    } else if let Some(r) = s.strip_prefix("FTF(") {
        ("FTF", r)
    } else {
        return Err(Error::parse(0, "expected GF(...) or FTF(...)"));
    };
    let close = rest.find(')').ok_or_else(|| Error::parse(s.len(), "missing ')'"))?;
    let inner = &rest[..close];
    let tail = rest[close + 1..].trim();
    let mut parts = inner.split(';');
    let (p, m) = parse_prime_power(parts.next().unwrap_or(""))?;
    let mut modulus = None;
    let mut q_exp = None;
    let mut theta = None;
    let mut gens = None;
    let mut inv = Vec::new();
    for opt in parts {
        let (k, v) = opt.split_once('=').ok_or_else(|| Error::parse(0, format!("bad option '{}'", opt.trim())))?;
        let v = v.trim();
        match k.trim() {
            "mod" => modulus = Some(parse_fp_poly(v, p)?),
            "q" => {
                let r = if v.contains('^') {
                    let (qp, r) = parse_prime_power(v)?;
                    if qp != p {
                        return Err(Error::parse(0, "q must be a power of p"));
                    }
                    r
                } else {
                    let q = v.parse::<u64>().map_err(|_| Error::parse(0, "bad q"))?;
                    (1..=m).find(|&r| (p as u64).pow(r) == q).ok_or_else(|| Error::parse(0, "q must be a power of p"))?
                };
                q_exp = Some(r);
            }
            "th" => theta = Some(v.to_string()),
            "gens" => gens = Some(v.split(',').map(|x| x.trim().to_string()).collect::<Vec<_>>()),
            "inv" => inv = v.split(',').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect(),
            other => return Err(Error::parse(0, format!("unknown option '{other}'"))),
        }
    }
    let ff = match &modulus {
        Some(md) => {
            if md.len() as u32 != m + 1 {
                return Err(Error::InvalidField(format!("modulus must have degree {m}")));
            }
            FiniteField::new(p, md.clone(), q_exp.unwrap_or(1))?
        }
        None => FiniteField::with_default_modulus(p, m, q_exp.unwrap_or(1))?,
    };
    match kind {
        "GF" => {
            if tail.is_empty() {
                let theta_idx = match theta {
                    Some(t) => {
                        let c = parse_fp_poly(&t, p)?;
                        let tmp = Field::finite(ff.clone(), None)?;
                        let g = tmp.generator();
                        let mut acc = tmp.zero();
                        for (i, &a) in c.iter().enumerate() {
                            acc = &acc + &(&tmp.from_int(a as i64) * &g.pow(i as i64)?);
                        }
                        Some(acc.index().expect("finite"))
                    }
                    None => None,
                };
                Field::finite(ff, theta_idx)
            } else if tail == "(th)" {
                if theta.is_some() || gens.is_some() {
                    return Err(Error::parse(0, "rational function fields take no th= or gens= option"));
                }
                Field::rational(ff)
            } else {
                Err(Error::parse(0, format!("unexpected '{tail}' after the field header")))
            }
        }
        _ => {
            if !tail.is_empty() {
                return Err(Error::parse(0, format!("unexpected '{tail}' after the field header")));
            }
            let gens = gens.ok_or_else(|| Error::parse(0, "FTF needs gens=..."))?;
            let th = theta.unwrap_or_else(|| "th".into());
            Field::formal(ff, gens, inv, &th)
        }
    }
}
