//! Decision rules for polyhedrality of `Eff(X)` and finite generation of the
//! Cox ring, driven by lattice data, curve lists and geometric flags.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::cone::RationalCone;
use crate::lattice::{DivisorClass, IntersectionLattice};
use crate::linalg;
use crate::negative::{self, CurveClass, DynkinType};
use crate::num::{self, Int, Rat};
use crate::zariski::{self, Kappa, KappaHints, ZariskiDecomposition, ZariskiError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tri {
    True,
    False,
    Undetermined,
}

impl Tri {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Tri::True
        } else {
            Tri::False
        }
    }

    pub fn from_option(b: Option<bool>) -> Self {
        b.map_or(Tri::Undetermined, Tri::from_bool)
    }

    pub fn label(self) -> &'static str {
        match self {
            Tri::True => "true",
            Tri::False => "false",
            Tri::Undetermined => "undetermined",
        }
    }
}

impl fmt::Display for Tri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SurfaceFlags {
    /// `K` is numerically trivial (K3 or Enriques).
    pub k_trivial: bool,
    pub k3_or_enriques: Option<bool>,
    pub aut_finite: Option<bool>,
    /// Overrides the nefness of `-K` computed from the curve list.
    pub anticanonical_nef: Option<bool>,
    pub minimal: bool,
    pub general_position: bool,
    pub anticanonical_rigid: Option<bool>,
    /// Certificate that some nef class is not semiample.
    pub nef_not_semiample: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fibration {
    pub m: u32,
    /// Reducible fibers, as extended Dynkin types.
    pub fibers: Vec<DynkinType>,
}

impl Fibration {
    pub fn rank_sum(&self) -> usize {
        self.fibers.iter().map(|t| t.rank).sum()
    }
}

#[derive(Debug, Clone)]
pub struct SurfaceData {
    pub name: String,
    pub lattice: IntersectionLattice,
    /// Negative curves; `effective_certified` marks classes known to be
    /// integral curves, the rest are candidates.
    pub negative_curves: Vec<CurveClass>,
    /// Generators of `Eff(X)` when it is known to be polyhedral.
    pub eff_generators: Option<Vec<DivisorClass>>,
    pub flags: SurfaceFlags,
    pub fibration: Option<Fibration>,
    pub relative_minimal_model: Option<Box<SurfaceData>>,
}

impl SurfaceData {
    pub fn new(name: impl Into<String>, lattice: IntersectionLattice) -> Self {
        Self {
            name: name.into(),
            lattice,
            negative_curves: Vec::new(),
            eff_generators: None,
            flags: SurfaceFlags::default(),
            fibration: None,
            relative_minimal_model: None,
        }
    }

    pub fn rho(&self) -> usize {
        self.lattice.rank()
    }

    pub fn eff_cone(&self) -> Result<Option<RationalCone>, ClassifyError> {
        match &self.eff_generators {
            None => Ok(None),
            Some(g) => RationalCone::from_generators(self.rho(), g)
                .map(Some)
                .map_err(|_| ClassifyError::InvalidData(String::from("effective cone generators"))),
        }
    }

    /// Nefness of `-K`: the explicit flag if present, otherwise
    /// non-negativity against every listed curve and every known effective
    /// generator.
    pub fn anticanonical_nef(&self) -> bool {
        if let Some(b) = self.flags.anticanonical_nef {
            return b;
        }
        let ak = self.lattice.anticanonical();
        let curves_ok = self.negative_curves.iter().all(|c| !self.lattice.pair(&ak, &c.class).is_negative());
        let eff_ok = self
            .eff_generators
            .iter()
            .flatten()
            .all(|g| !self.lattice.pair(&ak, g).is_negative());
        curves_ok && eff_ok && !self.lattice.self_intersection(&ak).is_negative()
    }

    fn fibration_hint(&self) -> bool {
        self.fibration.is_some()
            || self
                .relative_minimal_model
                .as_ref()
                .is_some_and(|y| y.fibration.is_some())
    }

    pub fn check(&self) -> Result<(), ClassifyError> {
        if self.flags.k_trivial && !self.lattice.canonical_numerically_trivial() {
            return Err(ClassifyError::InconsistentFlags(String::from(
                "k_trivial set but the canonical class is not numerically trivial",
            )));
        }
        if let Some(fib) = &self.fibration {
            if fib.m == 0 {
                return Err(ClassifyError::InvalidData(String::from("fibration multiplicity must be positive")));
            }
            for t in &fib.fibers {
                if !t.extended || t.rank == 0 {
                    return Err(ClassifyError::InvalidData(format!("fiber type {t} is not extended")));
                }
            }
            mordell_weil_rank(fib)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    #[error("fiber ranks sum to {0}, more than 8")]
    FiberRankTooLarge(usize),
    #[error("inconsistent flags: {0}")]
    InconsistentFlags(String),
    #[error("invalid surface data: {0}")]
    InvalidData(String),
    #[error("component intersection matrix is singular")]
    SingularFiberBasis,
    #[error("-K . D must be positive")]
    ZeroAnticanonicalDegree,
}

/// Rules the decision procedures can apply. Ids are stable strings used in
/// reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    /// `K` numerically trivial: `kappa(-K) = 0`.
    CanonicalTrivial,
    /// `-K` outside a known effective cone: `kappa(-K) = -inf`.
    AnticanonicalNotEffective,
    /// `kappa(-K)` read off the Zariski decomposition of `-K`.
    ZariskiKappa,
    /// K3 or Enriques: Eff polyhedral and Cox ring finitely generated iff
    /// `Aut(X)` is finite.
    KTrivialAutomorphisms,
    /// Picard number at most two: Eff is polyhedral.
    PicardRankAtMostTwo,
    /// `kappa(-K) = 2`: Eff is polyhedral.
    BigAnticanonical,
    /// `-K` nef and `K^2 = 0`: Eff polyhedral iff the fiber ranks sum to 8.
    FibrationExtremalConfig,
    /// `kappa(-K) = 1` and the relative minimal model has polyhedral Eff.
    RelativeMinimalModel,
    /// `kappa(-K) = 2`: Cox ring finitely generated.
    BigAnticanonicalCox,
    /// `kappa(-K) = 1`: Cox ring finitely generated iff Eff polyhedral.
    KappaOneEquivalence,
    /// `-K` nef, `kappa(-K) = 0`, `K` not trivial: `-K` nef but not
    /// semiample, so not finitely generated.
    NefAnticanonicalKappaZero,
    /// `kappa(-K) = 0` with a nonzero positive part: nef and semiample
    /// cones differ.
    KappaZeroPositivePart,
    /// A nef class that is not semiample: not finitely generated.
    NefNotSemiample,
    /// Finite generation forces polyhedral Eff.
    CoxImpliesEff,
    /// No rule applies.
    Undetermined,
}

impl Rule {
    pub fn id(self) -> &'static str {
        match self {
            Rule::CanonicalTrivial => "canonical-trivial",
            Rule::AnticanonicalNotEffective => "anticanonical-not-effective",
            Rule::ZariskiKappa => "zariski-kappa",
            Rule::KTrivialAutomorphisms => "k-trivial-automorphisms",
            Rule::PicardRankAtMostTwo => "picard-rank-at-most-two",
            Rule::BigAnticanonical => "big-anticanonical",
            Rule::FibrationExtremalConfig => "fibration-extremal-config",
            Rule::RelativeMinimalModel => "relative-minimal-model",
            Rule::BigAnticanonicalCox => "big-anticanonical-cox",
            Rule::KappaOneEquivalence => "kappa-one-equivalence",
            Rule::NefAnticanonicalKappaZero => "nef-anticanonical-kappa-zero",
            Rule::KappaZeroPositivePart => "kappa-zero-positive-part",
            Rule::NefNotSemiample => "nef-not-semiample",
            Rule::CoxImpliesEff => "cox-implies-eff",
            Rule::Undetermined => "undetermined",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Justification {
    pub rule: Rule,
    pub detail: String,
}

impl Justification {
    fn new(rule: Rule, detail: impl Into<String>) -> Self {
        Self { rule, detail: detail.into() }
    }
}

/// Which of the three finitely generated families a surface with nef `-K`
/// falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoxCase {
    /// Minimal resolution of a Du Val del Pezzo surface.
    DelPezzoResolution,
    /// Elliptic fibration whose Jacobian has finite Mordell-Weil group.
    JacobianFiniteMordellWeil,
    /// K3 or Enriques surface with finite automorphism group.
    K3EnriquesFiniteAut,
}

impl CoxCase {
    pub fn label(self) -> &'static str {
        match self {
            CoxCase::DelPezzoResolution => "i",
            CoxCase::JacobianFiniteMordellWeil => "ii",
            CoxCase::K3EnriquesFiniteAut => "iii",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub kappa_anti: Kappa,
    pub eff_polyhedral: Tri,
    pub cox_fg: Tri,
    pub justification: Vec<Justification>,
    pub mw_rank: Option<i64>,
    pub cox_case: Option<CoxCase>,
    /// Decomposition of `-K` when it was computed.
    pub anticanonical_zariski: Option<ZariskiDecomposition>,
}

impl Verdict {
    pub fn rules(&self) -> Vec<Rule> {
        self.justification.iter().map(|j| j.rule).collect()
    }

    /// Anything left open.
    pub fn is_undetermined(&self) -> bool {
        self.cox_fg == Tri::Undetermined || self.eff_polyhedral == Tri::Undetermined || !self.kappa_anti.is_determined()
    }
}

/// `8 - sum r_i`, the Mordell-Weil rank of a rational elliptic surface with
/// the given reducible fibers.
pub fn mordell_weil_rank(fibration: &Fibration) -> Result<i64, ClassifyError> {
    let s = fibration.rank_sum();
    if s > 8 {
        return Err(ClassifyError::FiberRankTooLarge(s));
    }
    Ok(8 - s as i64)
}

/// `kappa(-K)` and the rules used to obtain it.
pub fn anticanonical_kappa(
    s: &SurfaceData,
) -> Result<(Kappa, Option<ZariskiDecomposition>, Vec<Justification>), ClassifyError> {
    let mut why = Vec::new();
    if s.flags.k_trivial {
        why.push(Justification::new(Rule::CanonicalTrivial, "K is numerically trivial, so -K = 0"));
        return Ok((Kappa::Zero, None, why));
    }
    let ak = s.lattice.anticanonical();
    let eff = s.eff_cone()?;
    let result = zariski::zariski_decompose_in(&s.lattice, &ak, &s.negative_curves, eff.as_ref());
    let hints = KappaHints {
        fibration: s.fibration_hint(),
        anticanonical_rigid: s.flags.anticanonical_rigid == Some(true),
    };
    let kappa = zariski::kappa_from_zariski(&s.lattice, &result, hints);
    match &result {
        Err(ZariskiError::NotPseudoeffective) => {
            why.push(Justification::new(Rule::AnticanonicalNotEffective, "-K lies outside the effective cone"));
        }
        Err(e) => {
            why.push(Justification::new(Rule::ZariskiKappa, format!("Zariski decomposition of -K failed: {e}")));
        }
        Ok(zd) => {
            let p2 = s.lattice.self_intersection(&zd.positive);
            let detail = match kappa {
                Kappa::Two => format!("P^2 = {} > 0", num::fmt_rat(&p2)),
                Kappa::Zero if zd.positive.is_zero() => String::from("positive part is zero"),
                Kappa::Zero => String::from("P^2 = 0 and every anticanonical multiple is rigid"),
                Kappa::One => String::from("P^2 = 0 and an elliptic fibration is present"),
                _ => String::from("P^2 = 0, P != 0 and no hint separates kappa 0 from 1"),
            };
            why.push(Justification::new(Rule::ZariskiKappa, detail));
        }
    }
    Ok((kappa, result.ok(), why))
}

fn eff_with_kappa(
    s: &SurfaceData,
    kappa: Kappa,
    why: &mut Vec<Justification>,
) -> Result<Tri, ClassifyError> {
    if s.flags.k_trivial {
        let t = Tri::from_option(s.flags.aut_finite);
        why.push(Justification::new(Rule::KTrivialAutomorphisms, format!("Aut(X) finite: {t}")));
        return Ok(t);
    }
    if s.rho() <= 2 {
        why.push(Justification::new(Rule::PicardRankAtMostTwo, format!("rho = {}", s.rho())));
        return Ok(Tri::True);
    }
    if kappa == Kappa::Two {
        why.push(Justification::new(Rule::BigAnticanonical, "kappa(-K) = 2"));
        return Ok(Tri::True);
    }
    if s.anticanonical_nef() && s.lattice.canonical_square() == 0 {
        if let Some(fib) = &s.fibration {
            let sum = fib.rank_sum();
            mordell_weil_rank(fib)?;
            why.push(Justification::new(Rule::FibrationExtremalConfig, format!("fiber ranks sum to {sum}")));
            return Ok(Tri::from_bool(sum == 8));
        }
    }
    if kappa == Kappa::One {
        if let Some(y) = &s.relative_minimal_model {
            let model = decide_cox_fg(y)?;
            if model.eff_polyhedral == Tri::True {
                why.push(Justification::new(
                    Rule::RelativeMinimalModel,
                    format!("relative minimal model {} has polyhedral Eff", y.name),
                ));
                return Ok(Tri::True);
            }
        }
    }
    why.push(Justification::new(Rule::Undetermined, String::from("no rule decides polyhedrality of Eff")));
    Ok(Tri::Undetermined)
}

/// Polyhedrality of `Eff(X)` and the rules applied.
pub fn decide_eff_polyhedral(s: &SurfaceData) -> Result<(Tri, Vec<Justification>), ClassifyError> {
    s.check()?;
    let (kappa, _, mut why) = anticanonical_kappa(s)?;
    let t = eff_with_kappa(s, kappa, &mut why)?;
    Ok((t, why))
}

/// Full verdict: `kappa(-K)`, polyhedrality of Eff and finite generation of
/// the Cox ring.
pub fn decide_cox_fg(s: &SurfaceData) -> Result<Verdict, ClassifyError> {
    s.check()?;
    let (kappa, zd, mut why) = anticanonical_kappa(s)?;
    let mut eff = eff_with_kappa(s, kappa, &mut why)?;
    let nef = s.anticanonical_nef();
    let fib_sum = s.fibration.as_ref().map(Fibration::rank_sum);
    let mw_rank = s.fibration.as_ref().map(mordell_weil_rank).transpose()?;
    let mut case = None;

    let cox = if s.flags.k_trivial {
        let t = Tri::from_option(s.flags.aut_finite);
        if t == Tri::True {
            case = Some(CoxCase::K3EnriquesFiniteAut);
        }
        why.push(Justification::new(Rule::KTrivialAutomorphisms, format!("Aut(X) finite: {t}")));
        t
    } else if s.flags.nef_not_semiample {
        if kappa == Kappa::Two || kappa == Kappa::One {
            return Err(ClassifyError::InconsistentFlags(String::from(
                "nef classes are semiample when kappa(-K) >= 1",
            )));
        }
        why.push(Justification::new(Rule::NefNotSemiample, "a nef class is not semiample"));
        Tri::False
    } else {
        match kappa {
            Kappa::Two => {
                if nef {
                    case = Some(CoxCase::DelPezzoResolution);
                }
                why.push(Justification::new(Rule::BigAnticanonicalCox, "kappa(-K) = 2"));
                Tri::True
            }
            Kappa::One => {
                if eff == Tri::True && nef && fib_sum == Some(8) {
                    case = Some(CoxCase::JacobianFiniteMordellWeil);
                }
                why.push(Justification::new(Rule::KappaOneEquivalence, format!("Eff polyhedral: {eff}")));
                eff
            }
            Kappa::Zero if nef => {
                why.push(Justification::new(
                    Rule::NefAnticanonicalKappaZero,
                    "-K is nef with kappa 0, hence not semiample",
                ));
                Tri::False
            }
            Kappa::Zero if zd.as_ref().is_some_and(|z| !z.positive.is_zero()) => {
                why.push(Justification::new(Rule::KappaZeroPositivePart, "nonzero positive part with kappa 0"));
                Tri::False
            }
            _ => {
                why.push(Justification::new(Rule::Undetermined, format!("kappa(-K) = {kappa}, no certificate")));
                Tri::Undetermined
            }
        }
    };

    if cox == Tri::True {
        match eff {
            Tri::False => {
                return Err(ClassifyError::InconsistentFlags(String::from(
                    "finitely generated Cox ring with non-polyhedral Eff",
                )))
            }
            Tri::Undetermined => {
                eff = Tri::True;
                why.push(Justification::new(Rule::CoxImpliesEff, "finite generation forces polyhedral Eff"));
            }
            Tri::True => {}
        }
    }
    Ok(Verdict {
        kappa_anti: kappa,
        eff_polyhedral: eff,
        cox_fg: cox,
        justification: why,
        mw_rank,
        cox_case: case,
        anticanonical_zariski: zd,
    })
}

/// Basis `f, s, f_1..f_8` of a finite-index sublattice: fiber, `m`-section
/// and the eight fiber components not meeting `s`, in ambient coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibrationBasis {
    pub m: i64,
    pub f: DivisorClass,
    pub s: DivisorClass,
    pub components: Vec<DivisorClass>,
}

impl FibrationBasis {
    fn vectors(&self) -> Vec<&DivisorClass> {
        let mut v = vec![&self.f, &self.s];
        v.extend(self.components.iter());
        v
    }

    /// Index of the sublattice, `sqrt(|det B| / |det G|)`.
    pub fn index(&self, lattice: &IntersectionLattice) -> Result<u64, ClassifyError> {
        let v = self.vectors();
        let gram: Vec<Vec<Rat>> = v.iter().map(|a| v.iter().map(|b| lattice.pair(a, b)).collect()).collect();
        let db = linalg::determinant(&gram).abs();
        let dg = linalg::determinant(&linalg::from_ints(lattice.gram())).abs();
        if db.is_zero() || dg.is_zero() {
            return Err(ClassifyError::SingularFiberBasis);
        }
        let sq = (db / dg).to_integer();
        let k = sq.sqrt();
        if &k * &k != sq {
            return Err(ClassifyError::InvalidData(String::from("basis index is not an integer")));
        }
        Ok(num::to_i64(&k) as u64)
    }
}

/// Nef classes `D` with `D^2 = a` and `-K.D = b` on a surface with `-K`
/// proportional to the fiber. Follows the parametrization by `b_i = D.f_i`
/// in `[0, b]` with denominators dividing `k` (default: the index of the
/// basis), keeps integral classes nef against `curves`.
pub fn nef_classes_bounded(
    lattice: &IntersectionLattice,
    basis: &FibrationBasis,
    curves: &[CurveClass],
    a: i64,
    b: i64,
    k: Option<u64>,
) -> Result<Vec<DivisorClass>, ClassifyError> {
    if b <= 0 {
        return Err(ClassifyError::ZeroAnticanonicalDegree);
    }
    let n = lattice.rank();
    if basis.vectors().iter().any(|v| v.len() != n) || basis.components.len() + 2 != n || basis.m <= 0 {
        return Err(ClassifyError::InvalidData(String::from("fibration basis does not match the lattice")));
    }
    let m = Rat::from_integer(Int::from(basis.m));
    if lattice.anticanonical() != basis.f.scale(&m.recip()) {
        return Err(ClassifyError::InvalidData(String::from("-K is not f/m")));
    }
    if lattice.pair(&basis.f, &basis.s) != m {
        return Err(ClassifyError::InvalidData(String::from("f.s differs from m")));
    }
    let k = match k {
        Some(k) if k > 0 => k,
        Some(_) => return Err(ClassifyError::InvalidData(String::from("denominator bound must be positive"))),
        None => basis.index(lattice)?,
    };
    let comps = &basis.components;
    let mmat: Vec<Vec<Rat>> = comps.iter().map(|x| comps.iter().map(|y| lattice.pair(x, y)).collect()).collect();
    if !linalg::is_negative_definite(&mmat) {
        return Err(ClassifyError::SingularFiberBasis);
    }
    let minv = linalg::inverse(&mmat).ok_or(ClassifyError::SingularFiberBasis)?;
    let beta = Rat::from_integer(Int::from(b));
    let s_dot: Vec<Rat> = comps.iter().map(|c| lattice.pair(&basis.s, c)).collect();
    let s2 = lattice.self_intersection(&basis.s);
    let a = Rat::from_integer(Int::from(a));

    let steps = (k as i64) * b;
    let kq = Rat::from_integer(Int::from(k));
    let mut out = Vec::new();
    let mut idx = vec![0i64; comps.len()];
    loop {
        // D.f_i = b_i  =>  M alpha = b_vec - beta (s.f_i).
        let rhs: Vec<Rat> = idx
            .iter()
            .zip(&s_dot)
            .map(|(&t, sd)| Rat::from_integer(Int::from(t)) / &kq - &beta * sd)
            .collect();
        let alpha = linalg::mat_vec(&minv, &rhs);
        let mut nvec = lattice.zero();
        for (c, x) in comps.iter().zip(&alpha) {
            nvec = nvec + c.scale(x);
        }
        let n2 = lattice.self_intersection(&nvec);
        let ns = lattice.pair(&nvec, &basis.s);
        let two = Rat::from_integer(Int::from(2));
        let alpha_f = (&a - &n2 - &beta * &beta * &s2 - &two * &beta * &ns) / (&two * &beta * &m);
        let d = basis.f.scale(&alpha_f) + nvec + basis.s.scale(&beta);
        if d.is_integral() && curves.iter().all(|c| !lattice.pair(&d, &c.class).is_negative()) {
            out.push(d);
        }
        let mut i = 0;
        while i < idx.len() && idx[i] == steps {
            idx[i] = 0;
            i += 1;
        }
        if i == idx.len() {
            break;
        }
        idx[i] += 1;
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Number of (-1)-classes, up to each height bound, meeting every listed
/// (-2)-curve non-negatively (the others cannot be integral curves).
pub fn minus_one_curve_counts(s: &SurfaceData, bounds: &[u64]) -> Vec<usize> {
    let minus_two: Vec<&CurveClass> = s.negative_curves.iter().filter(|c| c.is_minus_two()).collect();
    let max = bounds.iter().copied().max().unwrap_or(0);
    let all = negative::minus_one_classes(&s.lattice, max);
    let height = |d: &DivisorClass| -> u64 {
        if s.lattice.is_plane_blowup_basis() {
            num::to_i64(&d.0[0].abs().to_integer()) as u64
        } else {
            num::to_i64(&d.max_abs().to_integer()) as u64
        }
    };
    let kept: Vec<u64> = all
        .iter()
        .filter(|d| minus_two.iter().all(|c| !s.lattice.pair(d, &c.class).is_negative()))
        .map(height)
        .collect();
    bounds.iter().map(|&b| kept.iter().filter(|&&h| h <= b).count()).collect()
}

/// True when the counts from [`minus_one_curve_counts`] are all equal.
pub fn minus_one_stabilizes(s: &SurfaceData, bounds: &[u64]) -> bool {
    let c = minus_one_curve_counts(s, bounds);
    c.windows(2).all(|w| w[0] == w[1])
}
