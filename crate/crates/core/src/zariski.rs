//! Zariski decomposition `D = P + N` against a finite list of candidate
//! negative curves, by the classical support-growth iteration.

use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::cone::RationalCone;
use crate::lattice::{DivisorClass, IntersectionLattice};
use crate::linalg;
use crate::negative::CurveClass;
use crate::num::Rat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZariskiDecomposition {
    pub positive: DivisorClass,
    /// Support curves with positive coefficients, sorted by class.
    pub negative_support: Vec<(CurveClass, Rat)>,
}

impl ZariskiDecomposition {
    pub fn negative(&self, rank: usize) -> DivisorClass {
        let mut n = DivisorClass(alloc::vec![Rat::zero(); rank]);
        for (c, x) in &self.negative_support {
            n = n + c.class.scale(x);
        }
        n
    }

    pub fn coefficient(&self, class: &DivisorClass) -> Rat {
        self.negative_support
            .iter()
            .find(|(c, _)| &c.class == class)
            .map(|(_, x)| x.clone())
            .unwrap_or_else(Rat::zero)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ZariskiError {
    #[error("class has {got} coordinates, lattice has rank {rank}")]
    RankMismatch { rank: usize, got: usize },
    #[error("support curves do not have a negative definite intersection matrix")]
    SingularSupportGram,
    #[error("class is not in the effective cone")]
    NotPseudoeffective,
    #[error("a support coefficient came out negative")]
    NegativeCoefficient,
    #[error("candidate curves exhausted without reaching a nef positive part")]
    NonConvergent,
}

/// Decomposes `d` against `candidates`. Duplicate candidate classes are
/// merged; the result does not depend on their order.
pub fn zariski_decompose(
    lattice: &IntersectionLattice,
    d: &DivisorClass,
    candidates: &[CurveClass],
) -> Result<ZariskiDecomposition, ZariskiError> {
    zariski_decompose_in(lattice, d, candidates, None)
}

/// As [`zariski_decompose`], first checking `d` against a known effective
/// cone.
pub fn zariski_decompose_in(
    lattice: &IntersectionLattice,
    d: &DivisorClass,
    candidates: &[CurveClass],
    eff: Option<&RationalCone>,
) -> Result<ZariskiDecomposition, ZariskiError> {
    let n = lattice.rank();
    if d.len() != n {
        return Err(ZariskiError::RankMismatch { rank: n, got: d.len() });
    }
    if let Some(c) = candidates.iter().find(|c| c.class.len() != n) {
        return Err(ZariskiError::RankMismatch { rank: n, got: c.class.len() });
    }
    if let Some(cone) = eff {
        if !cone.contains(d) {
            return Err(ZariskiError::NotPseudoeffective);
        }
    }
    let mut cands: Vec<CurveClass> = candidates.to_vec();
    cands.sort_by(|a, b| a.class.cmp(&b.class));
    cands.dedup_by(|a, b| a.class == b.class);

    let mut support: Vec<usize> = (0..cands.len())
        .filter(|&i| lattice.pair(d, &cands[i].class).is_negative())
        .collect();
    let mut coeffs: Vec<Rat> = Vec::new();
    let mut positive = d.clone();
    loop {
        if !support.is_empty() {
            let gram: Vec<Vec<Rat>> = support
                .iter()
                .map(|&i| support.iter().map(|&j| lattice.pair(&cands[i].class, &cands[j].class)).collect())
                .collect();
            if !linalg::is_negative_definite(&gram) {
                return Err(ZariskiError::SingularSupportGram);
            }
            let rhs: Vec<Rat> = support.iter().map(|&i| lattice.pair(d, &cands[i].class)).collect();
            coeffs = linalg::solve_square(&gram, &rhs).ok_or(ZariskiError::SingularSupportGram)?;
            positive = d.clone();
            for (&i, x) in support.iter().zip(&coeffs) {
                positive = positive - cands[i].class.scale(x);
            }
        }
        let grow: Vec<usize> = (0..cands.len())
            .filter(|i| !support.contains(i) && lattice.pair(&positive, &cands[*i].class).is_negative())
            .collect();
        if grow.is_empty() {
            break;
        }
        support.extend(grow);
        support.sort_unstable();
    }
    if coeffs.iter().any(|x| x.is_negative()) {
        return Err(ZariskiError::NegativeCoefficient);
    }
    if lattice.self_intersection(&positive).is_negative() {
        return Err(ZariskiError::NonConvergent);
    }
    let negative_support = support
        .into_iter()
        .zip(coeffs)
        .filter(|(_, x)| x.is_positive())
        .map(|(i, x)| (cands[i].clone(), x))
        .collect();
    Ok(ZariskiDecomposition { positive, negative_support })
}

/// Anticanonical Iitaka dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kappa {
    MinusInfinity,
    Zero,
    One,
    Two,
    /// `P != 0`, `P^2 = 0` and no hint separates 0 from 1.
    Undetermined01,
    /// The decomposition itself could not be computed from the data.
    Unknown,
}

impl Kappa {
    pub fn is_determined(self) -> bool {
        !matches!(self, Kappa::Undetermined01 | Kappa::Unknown)
    }

    pub fn label(self) -> &'static str {
        match self {
            Kappa::MinusInfinity => "-inf",
            Kappa::Zero => "0",
            Kappa::One => "1",
            Kappa::Two => "2",
            Kappa::Undetermined01 => "0|1",
            Kappa::Unknown => "unknown",
        }
    }
}

impl fmt::Display for Kappa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct KappaHints {
    /// The surface (or its relative minimal model) carries an elliptic
    /// fibration given by an anticanonical multiple.
    pub fibration: bool,
    /// Every anticanonical multiple is rigid.
    pub anticanonical_rigid: bool,
}

/// Reads off `kappa(-K)` from the decomposition of `-K`.
pub fn kappa_from_zariski(
    lattice: &IntersectionLattice,
    zd: &Result<ZariskiDecomposition, ZariskiError>,
    hints: KappaHints,
) -> Kappa {
    let zd = match zd {
        Ok(z) => z,
        Err(ZariskiError::NotPseudoeffective) => return Kappa::MinusInfinity,
        Err(_) => return Kappa::Unknown,
    };
    if zd.positive.is_zero() {
        return Kappa::Zero;
    }
    let sq = lattice.self_intersection(&zd.positive);
    if sq.is_positive() {
        Kappa::Two
    } else if hints.fibration {
        Kappa::One
    } else if hints.anticanonical_rigid {
        Kappa::Zero
    } else {
        Kappa::Undetermined01
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat;
    use crate::surface::BlowupSpec;

    fn c(v: &[i64]) -> DivisorClass {
        DivisorClass::from_ints(v)
    }

    #[test]
    fn bl1_example() {
        let l = BlowupSpec::plane(1).build_lattice().unwrap().0;
        let cands = [CurveClass::new(&l, c(&[0, 1]), true).unwrap(), CurveClass::new(&l, c(&[1, -1]), true).unwrap()];
        let zd = zariski_decompose(&l, &c(&[1, 2]), &cands).unwrap();
        assert_eq!(zd.positive, c(&[1, 0]));
        assert_eq!(zd.negative_support.len(), 1);
        assert_eq!(zd.coefficient(&c(&[0, 1])), rat(2, 1));
        let nef = zariski_decompose(&l, &c(&[2, -1]), &cands).unwrap();
        assert!(nef.negative_support.is_empty());
    }

    #[test]
    fn quartic_kappa_minus_infinity() {
        let l = BlowupSpec::quartic(1).build_lattice().unwrap().0;
        let eff = RationalCone::from_generators(2, &[c(&[0, 1]), c(&[1, -2])]).unwrap();
        let r = zariski_decompose_in(&l, &l.anticanonical(), &[], Some(&eff));
        assert_eq!(r, Err(ZariskiError::NotPseudoeffective));
        assert_eq!(kappa_from_zariski(&l, &r, KappaHints::default()), Kappa::MinusInfinity);
    }

    #[test]
    fn del_pezzo_and_elliptic_kappa() {
        let l = BlowupSpec::plane(3).build_lattice().unwrap().0;
        let r = zariski_decompose(&l, &l.anticanonical(), &[]);
        assert_eq!(kappa_from_zariski(&l, &r, KappaHints::default()), Kappa::Two);
        let l9 = BlowupSpec::plane(9).build_lattice().unwrap().0;
        let r = zariski_decompose(&l9, &l9.anticanonical(), &[]);
        let hint = KappaHints { fibration: true, ..Default::default() };
        assert_eq!(kappa_from_zariski(&l9, &r, hint), Kappa::One);
        assert_eq!(kappa_from_zariski(&l9, &r, KappaHints::default()), Kappa::Undetermined01);
    }
}
