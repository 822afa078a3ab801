#![allow(dead_code)]

use drinfeld_ext::*;
use proptest::prelude::*;

pub fn gf(p: u32, m: u32) -> Field {
    Field::gf(p, m).unwrap()
}

pub fn module(k: &Field, s: &str) -> TModule {
    parse_module(k, Var::Tau, s).unwrap()
}

pub fn mat(k: &Field, s: &str) -> SkewMatrix {
    parse_matrix(k, Var::Tau, s).unwrap()
}

pub fn bider(src: &TModule, tgt: &TModule, m: SkewMatrix) -> Biderivation {
    Biderivation::new(src, tgt, m).unwrap()
}

pub fn canonical(d: &Biderivation) -> SkewMatrix {
    reduce_canonical(d).unwrap().0.canonical
}

/// Polynomial from coefficient indices, low degree first.
pub fn poly_from(k: &Field, var: Var, idx: &[u32]) -> SkewPoly {
    SkewPoly::from_terms(var, idx.iter().enumerate().map(|(d, &i)| (d, k.element(i).unwrap())))
}

/// rows×cols matrix from a flat list of coefficient-index vectors.
pub fn matrix_from(k: &Field, var: Var, rows: usize, cols: usize, idx: &[Vec<u32>]) -> SkewMatrix {
    let mut m = SkewMatrix::zeros(var, rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, poly_from(k, var, &idx[i * cols + j]));
        }
    }
    m
}

pub fn coeffs(size: u32, max_len: usize) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0..size, 0..=max_len)
}

pub fn entries(size: u32, n: usize, max_len: usize) -> impl Strategy<Value = Vec<Vec<u32>>> {
    prop::collection::vec(coeffs(size, max_len), n)
}
