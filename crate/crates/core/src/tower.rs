//! The Fibonacci blow-up tower over a rational elliptic surface.
//!
//! Starting from a fiber `P0` with a singular point `p0` of multiplicity
//! `a0`, each new center lies on the last exceptional curve and on the strict
//! transform of the one before it. The multiplicities of the pulled-back
//! fiber then satisfy `a_{i+1} = a_i + a_{i-1}` and the positive part of `-K`
//! after step `i` is `coeff_i * pi^* P0` with `coeff_i = prod_{k<=i} (1 - 1/mu_k)`.

use alloc::vec::Vec;

use num_traits::{One, Signed};

use crate::lattice::{DivisorClass, IntersectionLattice};
use crate::negative::CurveClass;
use crate::num::{rat, Int, Rat};
use crate::surface::{BlowupSpec, Center, SurfaceError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TowerVariant {
    /// `p0` is a triple point of the fiber: `a0 = 3`.
    TriplePoint,
    /// `p0` is a node: `a0 = 2`.
    Node,
}

impl TowerVariant {
    pub fn a0(self) -> i64 {
        match self {
            TowerVariant::TriplePoint => 3,
            TowerVariant::Node => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerState {
    pub variant: TowerVariant,
    pub i: usize,
    pub a_prev: Int,
    pub a_cur: Int,
    pub b_cur: Rat,
    pub mu_cur: Rat,
    /// `prod_{k<=i} (1 - 1/mu_k)`.
    pub coeff: Rat,
    /// `prod_{k<i} (1 - 1/mu_k)`, so that `prefix * a_cur = mu_cur`.
    pub prefix: Rat,
}

impl TowerState {
    pub fn a_next(&self) -> Int {
        &self.a_cur + &self.a_prev
    }
}

/// Step 0. The multiplicity before `a0` is taken to be 1, which gives
/// `a1 = a0 + 1`.
pub fn tower_init(variant: TowerVariant) -> TowerState {
    let a0 = Int::from(variant.a0());
    let mu = Rat::from_integer(a0.clone());
    TowerState {
        variant,
        i: 0,
        a_prev: Int::one(),
        b_cur: mu.clone(),
        coeff: Rat::one() - mu.recip(),
        mu_cur: mu,
        a_cur: a0,
        prefix: Rat::one(),
    }
}

pub fn tower_step(s: &TowerState) -> TowerState {
    let a_next = s.a_next();
    let b = Rat::new(a_next.clone(), s.a_cur.clone());
    let mu = (&s.mu_cur - Rat::one()) * &b;
    let prefix = s.coeff.clone();
    let coeff = &prefix * (Rat::one() - mu.recip());
    TowerState {
        variant: s.variant,
        i: s.i + 1,
        a_prev: s.a_cur.clone(),
        a_cur: a_next,
        b_cur: b,
        mu_cur: mu,
        coeff,
        prefix,
    }
}

/// States `0..=steps`.
pub fn tower_sequence(variant: TowerVariant, steps: usize) -> Vec<TowerState> {
    let mut out = Vec::with_capacity(steps + 1);
    out.push(tower_init(variant));
    for _ in 0..steps {
        let next = tower_step(out.last().expect("nonempty"));
        out.push(next);
    }
    out
}

/// `mu_i = (prod_{k<i} (1 - 1/mu_k)) * a_i`, the closed form agreeing with
/// the recursion.
pub fn mui_consistency(s: &TowerState) -> bool {
    &s.prefix * Rat::from_integer(s.a_cur.clone()) == s.mu_cur
}

pub fn kappa_persists(s: &TowerState) -> bool {
    s.mu_cur > Rat::one()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsReport {
    pub steps: usize,
    /// Indices `4 < i <= steps` with `b_i <= 8/5`.
    pub b_violations: Vec<usize>,
    /// Indices with `mu_i <= 8/3`.
    pub mu_violations: Vec<usize>,
    /// Indices `i` with `mu_{i+1} <= mu_i`.
    pub monotonicity_violations: Vec<usize>,
    /// Indices where the closed form for `mu_i` disagrees with the recursion.
    pub consistency_violations: Vec<usize>,
}

impl BoundsReport {
    pub fn passed(&self) -> bool {
        self.b_violations.is_empty()
            && self.mu_violations.is_empty()
            && self.monotonicity_violations.is_empty()
            && self.consistency_violations.is_empty()
    }
}

/// Exact check of `b_i > 8/5` for `4 < i <= steps`, `mu_i > 8/3` for
/// `i <= steps`, strict growth of `mu` and the closed form for `mu_i`, all on
/// the triple-point tower.
pub fn bounds_check(steps: usize) -> BoundsReport {
    let seq = tower_sequence(TowerVariant::TriplePoint, steps);
    let b_min = rat(8, 5);
    let mu_min = rat(8, 3);
    let mut report = BoundsReport {
        steps,
        b_violations: Vec::new(),
        mu_violations: Vec::new(),
        monotonicity_violations: Vec::new(),
        consistency_violations: Vec::new(),
    };
    for s in &seq {
        if s.i > 4 && s.b_cur <= b_min {
            report.b_violations.push(s.i);
        }
        if s.mu_cur <= mu_min {
            report.mu_violations.push(s.i);
        }
        if !mui_consistency(s) {
            report.consistency_violations.push(s.i);
        }
    }
    for w in seq.windows(2) {
        if w[1].mu_cur <= w[0].mu_cur {
            report.monotonicity_violations.push(w[0].i);
        }
    }
    report
}

/// The tower realized as a blow-up of the plane: nine general points give
/// the pencil with fiber class `f = 3H - E_1 - ... - E_9`, then `depth`
/// infinitely near centers follow the proximity pattern above.
#[derive(Debug, Clone)]
pub struct TowerSurface {
    pub variant: TowerVariant,
    pub depth: usize,
    pub spec: BlowupSpec,
    pub lattice: IntersectionLattice,
    /// `pi^* P0`, the pulled-back fiber class.
    pub fiber: DivisorClass,
    /// `pi^* P0 - a_k E_{p_k}` for each tower center `p_k`: the part of the
    /// pulled-back fiber supported over `p_k`, taken as a single candidate.
    pub candidates: Vec<CurveClass>,
}

pub fn tower_centers(depth: usize) -> Vec<Center> {
    let mut centers: Vec<Center> = (0..9).map(|_| Center::General).collect();
    for k in 0..depth {
        centers.push(match k {
            0 => Center::General,
            1 => Center::OnExceptional(9),
            _ => Center::OnTwoExceptionals(9 + k - 1, 9 + k - 2),
        });
    }
    centers
}

pub fn tower_surface(variant: TowerVariant, depth: usize) -> Result<TowerSurface, SurfaceError> {
    let spec = BlowupSpec::new(crate::surface::Base::Plane, tower_centers(depth))?;
    let (lattice, _) = spec.build_lattice()?;
    let mut f = alloc::vec![0i64; lattice.rank()];
    f[0] = 3;
    for x in f.iter_mut().take(10).skip(1) {
        *x = -1;
    }
    let fiber = DivisorClass::from_ints(&f);
    let seq = tower_sequence(variant, depth.saturating_sub(1));
    let candidates = seq
        .iter()
        .take(depth)
        .map(|s| {
            let mut v = f.clone();
            v[10 + s.i] = -crate::num::to_i64(&s.a_cur);
            CurveClass::new(&lattice, DivisorClass::from_ints(&v), false).map_err(SurfaceError::Lattice)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TowerSurface { variant, depth, spec, lattice, fiber, candidates })
}

/// True when `mu` never drops to 1 or below along the first `steps` steps.
pub fn kappa_persists_through(variant: TowerVariant, steps: usize) -> bool {
    tower_sequence(variant, steps).iter().all(kappa_persists)
}

/// Sign of `coeff` after every step; the tower stops being meaningful once
/// this turns non-positive.
pub fn first_kappa_loss(variant: TowerVariant, steps: usize) -> Option<usize> {
    tower_sequence(variant, steps).iter().find(|s| !s.coeff.is_positive()).map(|s| s.i)
}
