//! Dense univariate polynomials over a [`FiniteField`], coefficients low to high.

use super::finite::FiniteField;

pub type Poly = Vec<u32>;

pub fn trim(a: &mut Poly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub fn degree(a: &[u32]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub fn add(f: &FiniteField, a: &[u32], b: &[u32]) -> Poly {
    let n = a.len().max(b.len());
    let mut out: Poly = (0..n)
        .map(|i| f.add(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0)))
        .collect();
    trim(&mut out);
    out
}

pub fn neg(f: &FiniteField, a: &[u32]) -> Poly {
    a.iter().map(|&c| f.neg(c)).collect()
}

pub fn sub(f: &FiniteField, a: &[u32], b: &[u32]) -> Poly {
    add(f, a, &neg(f, b))
}

pub fn scale(f: &FiniteField, a: &[u32], c: u32) -> Poly {
    let mut out: Poly = a.iter().map(|&x| f.mul(x, c)).collect();
    trim(&mut out);
    out
}

pub fn mul(f: &FiniteField, a: &[u32], b: &[u32]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y != 0 {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
    }
    trim(&mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(f: &FiniteField, a: &[u32], b: &[u32]) -> (Poly, Poly) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = f.inv(b[db]).expect("nonzero leading coefficient");
    let mut r: Poly = a.to_vec();
    trim(&mut r);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u32; r.len() - db];
    while r.len() > db {
        let top = r.len() - 1;
        let c = f.mul(r[top], lead_inv);
        let shift = top - db;
        q[shift] = c;
        for i in 0..=db {
            r[shift + i] = f.sub(r[shift + i], f.mul(c, b[i]));
        }
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub fn monic(f: &FiniteField, a: &[u32]) -> (Poly, u32) {
    match degree(a) {
        None => (Vec::new(), 0),
        Some(d) => {
            let lc = a[d];
            let inv = f.inv(lc).expect("nonzero");
            (scale(f, a, inv), lc)
        }
    }
}

/// Monic gcd.
pub fn gcd(f: &FiniteField, a: &[u32], b: &[u32]) -> Poly {
    let mut x: Poly = a.to_vec();
    let mut y: Poly = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = divrem(f, &x, &y);
        x = y;
        y = r;
    }
    monic(f, &x).0
}

/// Substitute x -> x^k.
pub fn inflate(a: &[u32], k: usize) -> Poly {
    if a.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; (a.len() - 1) * k + 1];
    for (i, &c) in a.iter().enumerate() {
        out[i * k] = c;
    }
    out
}

/// Inverse of [`inflate`]; `None` when some exponent is not divisible by k.
pub fn deflate(a: &[u32], k: usize) -> Option<Poly> {
    if a.iter().enumerate().any(|(i, &c)| c != 0 && i % k != 0) {
        return None;
    }
    Some(a.iter().step_by(k).copied().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_and_division() {
        let f = FiniteField::new(3, vec![0, 1], 1).unwrap();
        // (x+1)(x+2) and (x+1)x
        let a = mul(&f, &[1, 1], &[2, 1]);
        let b = mul(&f, &[1, 1], &[0, 1]);
        assert_eq!(gcd(&f, &a, &b), vec![1, 1]);
        let (q, r) = divrem(&f, &a, &[1, 1]);
        assert_eq!(q, vec![2, 1]);
        assert!(r.is_empty());
    }

    #[test]
    fn inflate_roundtrip() {
        let a = vec![1, 0, 2];
        assert_eq!(deflate(&inflate(&a, 3), 3).unwrap(), a);
        assert!(deflate(&[0, 1], 3).is_none());
    }
}
