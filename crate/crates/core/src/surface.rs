//! Standard Picard lattices: the plane, Hirzebruch surfaces, the blow-up of a
//! quartic K3, and iterated blow-ups with infinitely near centers.
//!
//! Basis order is the base basis (`H` for the plane and the quartic, `f, s`
//! for a Hirzebruch surface) followed by the total transforms `E_0, .., E_{r-1}`
//! of the exceptional curves. In these coordinates the form is the base form
//! plus `-1` on each `E_i`, and `K = pi^* K_base + sum E_i`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::lattice::{DivisorClass, IntersectionLattice, LatticeError};
use crate::num::Rat;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SurfaceError {
    #[error("center {center} refers to center {target}, which is not earlier")]
    ForwardReference { center: usize, target: usize },
    #[error("center {0} lies on the same exceptional curve twice")]
    RepeatedExceptional(usize),
    #[error("the quartic K3 base admits at most one blown-up point, got {0}")]
    TooManyQuarticCenters(usize),
    #[error("the quartic K3 base admits only a general center")]
    InfinitelyNearOnQuartic,
    #[error("center index {index} out of range ({count} centers)")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("class has {got} coordinates, base lattice rank is {expected}")]
    BaseRankMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Base {
    Plane,
    Hirzebruch(u32),
    QuarticK3,
}

impl Base {
    pub fn rank(self) -> usize {
        match self {
            Base::Plane | Base::QuarticK3 => 1,
            Base::Hirzebruch(_) => 2,
        }
    }

    fn gram(self) -> Vec<Vec<i64>> {
        match self {
            Base::Plane => vec![vec![1]],
            Base::QuarticK3 => vec![vec![4]],
            Base::Hirzebruch(n) => vec![vec![0, 1], vec![1, -(n as i64)]],
        }
    }

    fn canonical(self) -> Vec<i64> {
        match self {
            Base::Plane => vec![-3],
            Base::QuarticK3 => vec![0],
            // K = -2s - (n+2)f in the (f, s) basis.
            Base::Hirzebruch(n) => vec![-(n as i64 + 2), -2],
        }
    }

    fn labels(self) -> Vec<String> {
        match self {
            Base::Plane | Base::QuarticK3 => vec!["H".into()],
            Base::Hirzebruch(_) => vec!["f".into(), "s".into()],
        }
    }

    fn is_rational(self) -> bool {
        !matches!(self, Base::QuarticK3)
    }
}

/// Position of a blown-up point relative to earlier exceptional curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Center {
    General,
    /// On the (strict transform of the) exceptional curve of center `j`.
    OnExceptional(usize),
    /// At the intersection of the exceptional curves of centers `j` and `k`.
    OnTwoExceptionals(usize, usize),
}

impl Center {
    fn targets(self) -> impl Iterator<Item = usize> {
        let (a, b) = match self {
            Center::General => (None, None),
            Center::OnExceptional(j) => (Some(j), None),
            Center::OnTwoExceptionals(j, k) => (Some(j), Some(k)),
        };
        a.into_iter().chain(b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlowupSpec {
    pub base: Base,
    pub centers: Vec<Center>,
}

impl BlowupSpec {
    pub fn new(base: Base, centers: Vec<Center>) -> Result<Self, SurfaceError> {
        let spec = Self { base, centers };
        spec.validate()?;
        Ok(spec)
    }

    pub fn plane(points: usize) -> Self {
        Self { base: Base::Plane, centers: vec![Center::General; points] }
    }

    pub fn hirzebruch(n: u32) -> Self {
        Self { base: Base::Hirzebruch(n), centers: Vec::new() }
    }

    pub fn quartic(points: usize) -> Self {
        Self { base: Base::QuarticK3, centers: vec![Center::General; points] }
    }

    pub fn validate(&self) -> Result<(), SurfaceError> {
        for (i, c) in self.centers.iter().enumerate() {
            for t in c.targets() {
                if t >= i {
                    return Err(SurfaceError::ForwardReference { center: i, target: t });
                }
            }
            if let Center::OnTwoExceptionals(j, k) = c {
                if j == k {
                    return Err(SurfaceError::RepeatedExceptional(i));
                }
            }
        }
        if self.base == Base::QuarticK3 {
            if self.centers.len() > 1 {
                return Err(SurfaceError::TooManyQuarticCenters(self.centers.len()));
            }
            if self.centers.iter().any(|c| *c != Center::General) {
                return Err(SurfaceError::InfinitelyNearOnQuartic);
            }
        }
        Ok(())
    }

    pub fn base_rank(&self) -> usize {
        self.base.rank()
    }

    pub fn rank(&self) -> usize {
        self.base_rank() + self.centers.len()
    }

    fn exceptional_index(&self, i: usize) -> Result<usize, SurfaceError> {
        if i >= self.centers.len() {
            return Err(SurfaceError::IndexOutOfRange { index: i, count: self.centers.len() });
        }
        Ok(self.base_rank() + i)
    }

    pub fn proximity(&self) -> ProximityMatrix {
        let n = self.centers.len();
        let mut rows = vec![vec![false; n]; n];
        for (i, c) in self.centers.iter().enumerate() {
            for t in c.targets() {
                rows[i][t] = true;
            }
        }
        ProximityMatrix { rows }
    }

    /// The Picard lattice and basis labels.
    pub fn build_lattice(&self) -> Result<(IntersectionLattice, Vec<String>), SurfaceError> {
        self.validate()?;
        let b = self.base_rank();
        let n = self.rank();
        let mut gram = vec![vec![0i64; n]; n];
        for (i, row) in self.base.gram().into_iter().enumerate() {
            gram[i][..b].copy_from_slice(&row);
        }
        let mut canonical = self.base.canonical();
        for i in b..n {
            gram[i][i] = -1;
            canonical.push(1);
        }
        let mut labels = self.base.labels();
        labels.extend((0..self.centers.len()).map(|i| format!("E{i}")));
        let lattice = IntersectionLattice::new(gram, canonical)?;
        let lattice = if n >= 2 { lattice.require_hyperbolic()? } else { lattice };
        Ok((lattice.with_rational_surface(self.base.is_rational()), labels))
    }

    /// Total transform `E_i` of the exceptional curve over center `i`.
    pub fn total_exceptional(&self, i: usize) -> Result<DivisorClass, SurfaceError> {
        let idx = self.exceptional_index(i)?;
        let mut v = vec![Rat::zero(); self.rank()];
        v[idx] = Rat::from_integer(1.into());
        Ok(DivisorClass(v))
    }

    /// Strict transform `E_i - sum_{j proximate to i} E_j`.
    pub fn strict_exceptional(&self, i: usize) -> Result<DivisorClass, SurfaceError> {
        let mut d = self.total_exceptional(i)?;
        let prox = self.proximity();
        for j in i + 1..self.centers.len() {
            if prox.is_proximate(j, i) {
                d.0[self.base_rank() + j] -= Rat::from_integer(1.into());
            }
        }
        Ok(d)
    }

    /// Pull-back of a base class: zero coefficients on every exceptional.
    pub fn pullback(&self, d: &DivisorClass) -> Result<DivisorClass, SurfaceError> {
        if d.len() != self.base_rank() {
            return Err(SurfaceError::BaseRankMismatch { expected: self.base_rank(), got: d.len() });
        }
        let mut v = d.0.clone();
        v.resize(self.rank(), Rat::zero());
        Ok(DivisorClass(v))
    }

    /// Pull-back from the surface obtained by blowing up only the first
    /// `prefix` centers.
    pub fn pullback_from_prefix(&self, prefix: usize, d: &DivisorClass) -> Result<DivisorClass, SurfaceError> {
        let expected = self.base_rank() + prefix;
        if d.len() != expected || prefix > self.centers.len() {
            return Err(SurfaceError::BaseRankMismatch { expected, got: d.len() });
        }
        let mut v = d.0.clone();
        v.resize(self.rank(), Rat::zero());
        Ok(DivisorClass(v))
    }
}

/// Entry `(i, j)` is set when center `i` lies on the strict transform of the
/// exceptional curve of the earlier center `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProximityMatrix {
    rows: Vec<Vec<bool>>,
}

impl ProximityMatrix {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_proximate(&self, i: usize, j: usize) -> bool {
        self.rows[i][j]
    }

    pub fn row_sum(&self, i: usize) -> usize {
        self.rows[i].iter().filter(|&&b| b).count()
    }

    pub fn rows(&self) -> &[Vec<bool>] {
        &self.rows
    }
}
