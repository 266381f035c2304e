//! Exact feasibility of `sum_j x_j g_j = b, x >= 0` by a phase-one simplex
//! with Bland's rule, returning either the coefficients or a Farkas
//! certificate.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::num::Rat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    /// Non-negative coefficients, one per generator.
    Inside(Vec<Rat>),
    /// A functional `w` with `w.g >= 0` for every generator and `w.b < 0`.
    Outside(Vec<Rat>),
}

impl Membership {
    pub fn is_inside(&self) -> bool {
        matches!(self, Membership::Inside(_))
    }
}

/// Decides whether `target` lies in the cone spanned by `generators` (all of
/// the same length as `target`), with the standard dot product.
pub fn cone_membership(generators: &[Vec<Rat>], target: &[Rat]) -> Membership {
    let d = target.len();
    let m = generators.len();
    let cols = m + d;
    // Flip rows so the right-hand side is non-negative.
    let sign: Vec<bool> = target.iter().map(|b| b.is_negative()).collect();
    let mut t: Vec<Vec<Rat>> = (0..d)
        .map(|i| {
            let mut row = Vec::with_capacity(cols + 1);
            for g in generators {
                row.push(if sign[i] { -g[i].clone() } else { g[i].clone() });
            }
            for k in 0..d {
                row.push(if k == i { Rat::one() } else { Rat::zero() });
            }
            row.push(target[i].abs());
            row
        })
        .collect();
    let mut basis: Vec<usize> = (m..cols).collect();
    let cost = |j: usize| if j >= m { Rat::one() } else { Rat::zero() };

    loop {
        // Reduced costs c_j - c_B B^-1 A_j; Bland: smallest improving index.
        let mut entering = None;
        for j in 0..cols {
            if basis.contains(&j) {
                continue;
            }
            let mut rc = cost(j);
            for (r, &bj) in basis.iter().enumerate() {
                if bj >= m && !t[r][j].is_zero() {
                    rc -= &t[r][j];
                }
            }
            if rc.is_negative() {
                entering = Some(j);
                break;
            }
        }
        let Some(j) = entering else { break };
        let mut leave: Option<(usize, Rat)> = None;
        for r in 0..d {
            if t[r][j].is_positive() {
                let ratio = &t[r][cols] / &t[r][j];
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => ratio < *best || (ratio == *best && basis[r] < basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        // Phase one is bounded below by zero, so some row must leave.
        let (r, _) = leave.expect("phase one objective is bounded");
        pivot(&mut t, r, j);
        basis[r] = j;
    }

    let objective: Rat = basis
        .iter()
        .enumerate()
        .filter(|(_, &bj)| bj >= m)
        .map(|(r, _)| t[r][cols].clone())
        .sum();
    if objective.is_zero() {
        let mut x = vec![Rat::zero(); m];
        for (r, &bj) in basis.iter().enumerate() {
            if bj < m {
                x[bj] = t[r][cols].clone();
            }
        }
        return Membership::Inside(x);
    }
    // y = c_B B^-1, read off the artificial block of the tableau.
    let mut y = vec![Rat::zero(); d];
    for (r, &bj) in basis.iter().enumerate() {
        if bj >= m {
            for (i, yi) in y.iter_mut().enumerate() {
                *yi += &t[r][m + i];
            }
        }
    }
    let w = y
        .into_iter()
        .zip(&sign)
        .map(|(yi, &s)| if s { yi } else { -yi })
        .collect();
    Membership::Outside(w)
}

fn pivot(t: &mut [Vec<Rat>], r: usize, j: usize) {
    let inv = t[r][j].recip();
    for x in t[r].iter_mut() {
        *x *= &inv;
    }
    let pivot_row = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == r || row[j].is_zero() {
            continue;
        }
        let f = row[j].clone();
        for (x, p) in row.iter_mut().zip(&pivot_row) {
            if !p.is_zero() {
                *x -= p * &f;
            }
        }
    }
}

/// Checks a membership answer against the data it was computed from.
pub fn verify(generators: &[Vec<Rat>], target: &[Rat], answer: &Membership) -> bool {
    let dot = |a: &[Rat], b: &[Rat]| -> Rat { a.iter().zip(b).map(|(x, y)| x * y).sum() };
    match answer {
        Membership::Inside(x) => {
            x.len() == generators.len()
                && x.iter().all(|c| !c.is_negative())
                && (0..target.len()).all(|i| {
                    let s: Rat = generators.iter().zip(x).map(|(g, c)| &g[i] * c).sum();
                    s == target[i]
                })
        }
        Membership::Outside(w) => {
            generators.iter().all(|g| !dot(w, g).is_negative()) && dot(w, target).is_negative()
        }
    }
}
