//! Rational polyhedral cones in `Pic(X) (x) Q`.
//!
//! A cone is stored with both representations: primitive integral generators
//! and an inequality description `f.x >= 0`, `l.x = 0` obtained by the double
//! description method. Duality is taken with respect to the intersection
//! form, so `dual_cone(Eff)` is the nef cone.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::lattice::{DivisorClass, IntersectionLattice};
use crate::linalg;
use crate::lp::{self, Membership};
use crate::num::{self, Int, Rat};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConeError {
    #[error("generator {0} is zero")]
    ZeroGenerator(usize),
    #[error("class has {got} coordinates, cone lives in rank {rank}")]
    RankMismatch { rank: usize, got: usize },
    #[error("intersection form is degenerate")]
    DegenerateForm,
    #[error("reference class is not in the positive cone")]
    NotPositive,
    #[error("ray {0} does not have negative self-intersection")]
    NonNegativeRay(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalCone {
    rank: usize,
    generators: Vec<Vec<Int>>,
    rays: Vec<Vec<Int>>,
    facets: Vec<Vec<Int>>,
    equalities: Vec<Vec<Int>>,
}

impl RationalCone {
    pub fn from_generators(rank: usize, generators: &[DivisorClass]) -> Result<Self, ConeError> {
        let mut gens = Vec::with_capacity(generators.len());
        for (i, g) in generators.iter().enumerate() {
            if g.len() != rank {
                return Err(ConeError::RankMismatch { rank, got: g.len() });
            }
            let (_, p) = num::primitive_split(&g.0).ok_or(ConeError::ZeroGenerator(i))?;
            gens.push(p);
        }
        gens.sort();
        gens.dedup();
        Ok(Self::from_primitive(rank, gens))
    }

    fn from_primitive(rank: usize, generators: Vec<Vec<Int>>) -> Self {
        let dd = double_description(&generators, rank);
        let mut cone = Self { rank, generators, rays: Vec::new(), facets: dd.rays, equalities: dd.lineality };
        cone.rays = cone.minimal_generators();
        cone
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> Vec<DivisorClass> {
        self.generators.iter().map(|g| DivisorClass::from_bigints(g)).collect()
    }

    /// Extremal rays (a minimal generating set), primitive integral and in
    /// lexicographic order.
    pub fn extremal_rays(&self) -> Vec<DivisorClass> {
        self.rays.iter().map(|g| DivisorClass::from_bigints(g)).collect()
    }

    pub fn ray_ints(&self) -> &[Vec<Int>] {
        &self.rays
    }

    /// Inequalities `f.x >= 0` (standard dot product) cutting out the cone
    /// inside the subspace given by [`Self::equalities`].
    pub fn facets(&self) -> &[Vec<Int>] {
        &self.facets
    }

    pub fn equalities(&self) -> &[Vec<Int>] {
        &self.equalities
    }

    /// True when the cone contains no line.
    pub fn is_pointed(&self) -> bool {
        let rows: Vec<Vec<Int>> = self.facets.iter().chain(&self.equalities).cloned().collect();
        rows.is_empty() && self.rank == 0 || linalg::rank(&linalg::from_bigints(&rows)) == self.rank
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.equalities.is_empty()
    }

    pub fn contains(&self, d: &DivisorClass) -> bool {
        assert_eq!(d.len(), self.rank, "class/cone rank mismatch");
        self.facets.iter().all(|f| !num::dot_rat_int(&d.0, f).is_negative())
            && self.equalities.iter().all(|l| num::dot_rat_int(&d.0, l).is_zero())
    }

    /// Membership decided by the simplex method, with either non-negative
    /// coefficients on [`Self::generators`] or a separating functional.
    pub fn membership_certificate(&self, d: &DivisorClass) -> Membership {
        let gens: Vec<Vec<Rat>> = self.generators.iter().map(|g| num::to_rat_vec(g)).collect();
        lp::cone_membership(&gens, &d.0)
    }

    fn minimal_generators(&self) -> Vec<Vec<Int>> {
        if self.is_pointed() {
            let tight_rank = |g: &[Int]| {
                let rows: Vec<Vec<Int>> = self
                    .facets
                    .iter()
                    .filter(|f| num::dot_int(f, g).is_zero())
                    .chain(&self.equalities)
                    .cloned()
                    .collect();
                linalg::rank(&linalg::from_bigints(&rows))
            };
            return self
                .generators
                .iter()
                .filter(|g| tight_rank(g) + 1 == self.rank)
                .cloned()
                .collect();
        }
        // With a lineality space there is no canonical set of extremal
        // rays; drop redundant generators in lexicographic order.
        let mut keep: Vec<Vec<Int>> = self.generators.clone();
        let mut i = 0;
        while i < keep.len() {
            let others: Vec<Vec<Rat>> = keep
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, g)| num::to_rat_vec(g))
                .collect();
            if lp::cone_membership(&others, &num::to_rat_vec(&keep[i])).is_inside() {
                keep.remove(i);
            } else {
                i += 1;
            }
        }
        keep
    }
}

/// `{D : D.g >= 0 for every generator g}`, the dual with respect to the
/// intersection form.
pub fn dual_cone(lattice: &IntersectionLattice, cone: &RationalCone) -> Result<RationalCone, ConeError> {
    if cone.rank != lattice.rank() {
        return Err(ConeError::RankMismatch { rank: lattice.rank(), got: cone.rank });
    }
    if !lattice.is_nondegenerate() {
        return Err(ConeError::DegenerateForm);
    }
    let gram = lattice.gram();
    let rows: Vec<Vec<Int>> = cone
        .generators
        .iter()
        .map(|g| {
            let v: Vec<Int> = (0..cone.rank)
                .map(|i| (0..cone.rank).map(|j| Int::from(gram[i][j]) * &g[j]).sum())
                .collect();
            num::primitive_int(&v)
        })
        .collect();
    let dd = double_description(&rows, cone.rank);
    let mut gens = dd.rays;
    for l in dd.lineality {
        gens.push(l.iter().map(|x| -x).collect());
        gens.push(l);
    }
    gens.sort();
    gens.dedup();
    Ok(RationalCone::from_primitive(cone.rank, gens))
}

/// Nef is contained in Eff: every extremal ray of `nef` lies in `eff`.
pub fn inclusion_chain_check(eff: &RationalCone, nef: &RationalCone) -> bool {
    nef.extremal_rays().iter().all(|r| eff.contains(r))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EffcReport {
    pub holds: bool,
    pub bound: u64,
    /// Classes in the light half-cone that were tested for membership.
    pub checked: u64,
    pub counterexample: Option<DivisorClass>,
}

/// Bounded check that every integral class with coordinates in
/// `[-bound, bound]`, `D^2 >= 0` and `D.ample > 0` lies in the cone spanned by
/// `negative_rays`. Shells of growing height are scanned, so a failure is
/// reported at the smallest height where it occurs.
pub fn effc_sample_report(
    lattice: &IntersectionLattice,
    negative_rays: &[DivisorClass],
    ample: &DivisorClass,
    bound: u64,
) -> Result<EffcReport, ConeError> {
    let n = lattice.rank();
    if ample.len() != n {
        return Err(ConeError::RankMismatch { rank: n, got: ample.len() });
    }
    if !lattice.self_intersection(ample).is_positive() {
        return Err(ConeError::NotPositive);
    }
    for (i, r) in negative_rays.iter().enumerate() {
        if r.len() != n {
            return Err(ConeError::RankMismatch { rank: n, got: r.len() });
        }
        if !lattice.self_intersection(r).is_negative() {
            return Err(ConeError::NonNegativeRay(i));
        }
    }
    let cone = RationalCone::from_generators(n, negative_rays)?;
    let small = |v: &[Int]| v.iter().map(num::to_i64).collect::<Vec<i64>>();
    let facets: Vec<Vec<i64>> = cone.facets().iter().map(|f| small(f)).collect();
    let equalities: Vec<Vec<i64>> = cone.equalities().iter().map(|f| small(f)).collect();
    let (_, ample_int) = num::primitive_split(&ample.0).expect("ample class is nonzero");
    let ample_int = small(&ample_int);
    let gram = lattice.gram();
    let ample_dual: Vec<i64> = (0..n).map(|i| (0..n).map(|j| gram[i][j] * ample_int[j]).sum()).collect();
    let dot = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<i64>();

    let mut checked = 0u64;
    let b = bound as i64;
    for h in 0..=b {
        let mut v = vec![-h; n];
        loop {
            if h == 0 || v.iter().any(|x| x.abs() == h) {
                if dot(&v, &ample_dual) > 0 {
                    let sq: i64 = (0..n).map(|i| v[i] * (0..n).map(|j| gram[i][j] * v[j]).sum::<i64>()).sum();
                    if sq >= 0 {
                        checked += 1;
                        let inside = facets.iter().all(|f| dot(f, &v) >= 0)
                            && equalities.iter().all(|l| dot(l, &v) == 0);
                        if !inside {
                            return Ok(EffcReport {
                                holds: false,
                                bound,
                                checked,
                                counterexample: Some(DivisorClass::from_ints(&v)),
                            });
                        }
                    }
                }
            }
            let mut i = 0;
            while i < n && v[i] == h {
                v[i] = -h;
                i += 1;
            }
            if i == n {
                break;
            }
            v[i] += 1;
        }
    }
    Ok(EffcReport { holds: true, bound, checked, counterexample: None })
}

pub fn effc_sample_check(
    lattice: &IntersectionLattice,
    negative_rays: &[DivisorClass],
    ample: &DivisorClass,
    bound: u64,
) -> Result<bool, ConeError> {
    effc_sample_report(lattice, negative_rays, ample, bound).map(|r| r.holds)
}

pub(crate) struct DoubleDescription {
    /// Extreme rays of the pointed part, primitive and sorted.
    pub rays: Vec<Vec<Int>>,
    /// Basis of the lineality space.
    pub lineality: Vec<Vec<Int>>,
}

struct Ray {
    v: Vec<Int>,
    zero: Vec<u64>,
}

fn bit(set: &[u64], i: usize) -> bool {
    set[i / 64] >> (i % 64) & 1 == 1
}

fn set_bit(set: &mut [u64], i: usize) {
    set[i / 64] |= 1 << (i % 64);
}

/// Extreme rays and lineality space of `{x : a.x >= 0 for every row a}`.
pub(crate) fn double_description(rows: &[Vec<Int>], dim: usize) -> DoubleDescription {
    let qrows = linalg::from_bigints(rows);
    let lineality: Vec<Vec<Int>> = linalg::nullspace(&qrows, dim)
        .into_iter()
        .map(|v| num::primitive_split(&v).expect("kernel basis vectors are nonzero").1)
        .collect();

    // Restricting to the orthogonal complement of the lineality space makes
    // the cone pointed, and the constraint system then has full rank.
    let mut all: Vec<Vec<Int>> = Vec::new();
    for l in &lineality {
        all.push(l.clone());
    }
    all.extend(rows.iter().cloned());
    for l in &lineality {
        all.push(l.iter().map(|x| -x).collect());
    }
    if all.is_empty() || dim == 0 {
        return DoubleDescription { rays: Vec::new(), lineality };
    }

    // Initial simplicial cone from `dim` independent rows.
    let mut chosen: Vec<usize> = Vec::new();
    let mut basis: Vec<Vec<Rat>> = Vec::new();
    for (i, r) in all.iter().enumerate() {
        let mut trial = basis.clone();
        trial.push(num::to_rat_vec(r));
        if linalg::rank(&trial) > basis.len() {
            basis = trial;
            chosen.push(i);
            if basis.len() == dim {
                break;
            }
        }
    }
    debug_assert_eq!(basis.len(), dim);
    let words = all.len().div_ceil(64);
    let inv = linalg::inverse(&basis).expect("chosen rows are independent");
    let mut rays: Vec<Ray> = (0..dim)
        .map(|j| {
            let col: Vec<Rat> = (0..dim).map(|i| inv[i][j].clone()).collect();
            let v = num::primitive_split(&col).expect("inverse columns are nonzero").1;
            let mut zero = vec![0u64; words];
            for (k, &c) in chosen.iter().enumerate() {
                if k != j {
                    set_bit(&mut zero, c);
                }
            }
            Ray { v, zero }
        })
        .collect();

    for (k, a) in all.iter().enumerate() {
        if chosen.contains(&k) {
            continue;
        }
        let vals: Vec<Int> = rays.iter().map(|r| num::dot_int(a, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        if neg.is_empty() {
            for (i, r) in rays.iter_mut().enumerate() {
                if vals[i].is_zero() {
                    set_bit(&mut r.zero, k);
                }
            }
            continue;
        }
        let mut fresh: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common: Vec<u64> = rays[p].zero.iter().zip(&rays[q].zero).map(|(x, y)| x & y).collect();
                let count: u32 = common.iter().map(|w| w.count_ones()).sum();
                if (count as usize) + 2 < dim {
                    continue;
                }
                let adjacent = (0..rays.len()).all(|t| {
                    t == p || t == q || !common.iter().zip(&rays[t].zero).all(|(c, z)| c & z == *c)
                });
                if !adjacent {
                    continue;
                }
                let v: Vec<Int> = rays[q]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(nq, np)| &vals[p] * nq - &vals[q] * np)
                    .collect();
                let v = num::primitive_int(&v);
                let mut zero = common;
                set_bit(&mut zero, k);
                fresh.push(Ray { v, zero });
            }
        }
        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
        for (i, mut r) in rays.into_iter().enumerate() {
            if vals[i].is_zero() {
                set_bit(&mut r.zero, k);
                next.push(r);
            } else if vals[i].is_positive() {
                next.push(r);
            }
        }
        next.extend(fresh);
        rays = next;
    }
    let _ = bit;
    let mut out: Vec<Vec<Int>> = rays.into_iter().map(|r| r.v).collect();
    out.sort();
    out.dedup();
    DoubleDescription { rays: out, lineality }
}
