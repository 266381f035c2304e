//! Exact linear algebra over the rationals: row reduction, kernels, square
//! solves, determinants and congruence diagonalization of symmetric forms.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::num::{Int, Rat};

pub type Matrix = Vec<Vec<Rat>>;

pub fn from_ints(m: &[Vec<i64>]) -> Matrix {
    m.iter()
        .map(|row| row.iter().map(|&x| Rat::from_integer(Int::from(x))).collect())
        .collect()
}

pub fn from_bigints(m: &[Vec<Int>]) -> Matrix {
    m.iter()
        .map(|row| row.iter().cloned().map(Rat::from_integer).collect())
        .collect()
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let t = &m[r][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

/// Basis of `{x : m x = 0}`; `cols` is needed when `m` has no rows.
pub fn nullspace(m: &Matrix, cols: usize) -> Vec<Vec<Rat>> {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rat::zero(); cols];
        v[free] = Rat::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -a[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solves `a x = b` for square nonsingular `a`; `None` when singular.
pub fn solve_square(a: &Matrix, b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n].clone()).collect())
}

pub fn determinant(a: &Matrix) -> Rat {
    let n = a.len();
    let mut m = a.clone();
    let mut det = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= &m[c][c];
        let inv = m[c][c].recip();
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] * &inv;
            for j in c..n {
                let t = &m[c][j] * &f;
                m[i][j] -= t;
            }
        }
    }
    det
}

pub fn inverse(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let mut aug: Matrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Diagonal entries of a form congruent to the symmetric matrix `g`
/// (`P^T g P` diagonal for some invertible rational `P`).
pub fn diagonalize_symmetric(g: &Matrix) -> Vec<Rat> {
    let n = g.len();
    let mut a = g.clone();
    let mut diag = Vec::with_capacity(n);
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // e_k <- e_k + e_j makes the pivot 2 a_kj + a_jj = 2 a_kj.
                for i in 0..n {
                    let t = a[j][i].clone();
                    a[k][i] += t;
                }
                for i in 0..n {
                    let t = a[i][j].clone();
                    a[i][k] += t;
                }
            }
        }
        let p = a[k][k].clone();
        if !p.is_zero() {
            for i in k + 1..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let f = &a[i][k] / &p;
                for j in k..n {
                    let t = &a[k][j] * &f;
                    a[i][j] -= t;
                }
                for j in k..n {
                    let t = &a[j][k] * &f;
                    a[j][i] -= t;
                }
            }
        }
        diag.push(p);
    }
    diag
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

pub fn signature(g: &Matrix) -> Signature {
    let d = diagonalize_symmetric(g);
    Signature {
        positive: d.iter().filter(|x| x.is_positive()).count(),
        negative: d.iter().filter(|x| x.is_negative()).count(),
        zero: d.iter().filter(|x| x.is_zero()).count(),
    }
}

/// Negative definiteness by the signs of leading principal minors:
/// `(-1)^k det(g_k) > 0` for every `k`.
pub fn is_negative_definite(g: &Matrix) -> bool {
    let n = g.len();
    for k in 1..=n {
        let sub: Matrix = g[..k].iter().map(|row| row[..k].to_vec()).collect();
        let d = determinant(&sub);
        let ok = if k % 2 == 0 { d.is_positive() } else { d.is_negative() };
        if !ok {
            return false;
        }
    }
    true
}

pub fn mat_vec(m: &Matrix, v: &[Rat]) -> Vec<Rat> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}
