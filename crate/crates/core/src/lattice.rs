//! Intersection forms on Picard lattices and divisor classes.

use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::linalg::{self, Signature};
use crate::num::{self, Int, Rat};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("gram matrix must be square and non-empty")]
    NotSquare,
    #[error("gram matrix is not symmetric at ({0}, {1})")]
    Asymmetric(usize, usize),
    #[error("canonical class has length {got}, lattice rank is {rank}")]
    CanonicalLength { rank: usize, got: usize },
    #[error("basis vector {0} violates the parity condition e^2 + K.e even")]
    Parity(usize),
    #[error("intersection form has signature ({positive}, {negative}) with {zero} null directions, expected (1, {expected_negative})")]
    NotHyperbolic {
        positive: usize,
        negative: usize,
        zero: usize,
        expected_negative: usize,
    },
    #[error("class has {got} coordinates, lattice rank is {rank}")]
    RankMismatch { rank: usize, got: usize },
    #[error("class is not integral")]
    NonIntegral,
    #[error("Riemann-Roch characteristic needs a rational surface lattice")]
    NotRationalSurface,
    #[error("reference class is not in the positive cone")]
    NotPositive,
    #[error("class is zero")]
    ZeroClass,
    #[error("class has nonzero self-intersection")]
    NotIsotropic,
}

/// `Pic(X)` with its intersection pairing on a fixed basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionLattice {
    gram: Vec<Vec<i64>>,
    canonical: Vec<i64>,
    hyperbolic_required: bool,
    rational_surface: bool,
}

impl IntersectionLattice {
    /// Validates symmetry, lengths and the characteristic-vector parity.
    pub fn new(gram: Vec<Vec<i64>>, canonical: Vec<i64>) -> Result<Self, LatticeError> {
        let n = gram.len();
        if n == 0 || gram.iter().any(|r| r.len() != n) {
            return Err(LatticeError::NotSquare);
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(LatticeError::Asymmetric(i, j));
                }
            }
        }
        if canonical.len() != n {
            return Err(LatticeError::CanonicalLength { rank: n, got: canonical.len() });
        }
        for e in 0..n {
            let ke: i64 = (0..n).map(|j| canonical[j] * gram[j][e]).sum();
            if (gram[e][e] + ke).rem_euclid(2) != 0 {
                return Err(LatticeError::Parity(e));
            }
        }
        Ok(Self { gram, canonical, hyperbolic_required: false, rational_surface: false })
    }

    /// Requires signature `(1, rank - 1)`.
    pub fn require_hyperbolic(mut self) -> Result<Self, LatticeError> {
        let sig = self.signature();
        let n = self.rank();
        if sig.positive != 1 || sig.negative != n - 1 {
            return Err(LatticeError::NotHyperbolic {
                positive: sig.positive,
                negative: sig.negative,
                zero: sig.zero,
                expected_negative: n - 1,
            });
        }
        self.hyperbolic_required = true;
        Ok(self)
    }

    pub fn with_rational_surface(mut self, rational: bool) -> Self {
        self.rational_surface = rational;
        self
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn canonical_coords(&self) -> &[i64] {
        &self.canonical
    }

    pub fn canonical(&self) -> DivisorClass {
        DivisorClass::from_ints(&self.canonical)
    }

    pub fn anticanonical(&self) -> DivisorClass {
        -self.canonical()
    }

    pub fn is_hyperbolic_required(&self) -> bool {
        self.hyperbolic_required
    }

    pub fn is_rational_surface(&self) -> bool {
        self.rational_surface
    }

    pub fn signature(&self) -> Signature {
        linalg::signature(&linalg::from_ints(&self.gram))
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.signature().zero == 0
    }

    pub fn basis_vector(&self, i: usize) -> DivisorClass {
        let mut v = alloc::vec![Rat::zero(); self.rank()];
        v[i] = Rat::one();
        DivisorClass(v)
    }

    pub fn zero(&self) -> DivisorClass {
        DivisorClass(alloc::vec![Rat::zero(); self.rank()])
    }

    /// `K_X^2`.
    pub fn canonical_square(&self) -> i64 {
        let k = &self.canonical;
        let n = self.rank();
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| k[i] * self.gram[i][j] * k[j]).sum()
    }

    /// True when `K` pairs to zero with every basis vector.
    pub fn canonical_numerically_trivial(&self) -> bool {
        (0..self.rank()).all(|e| (0..self.rank()).map(|j| self.canonical[j] * self.gram[j][e]).sum::<i64>() == 0)
    }

    /// True when the basis is `H, E_1, .., E_r` with `H^2 = 1`, `E_i^2 = -1`
    /// and `K = -3H + sum E_i`, i.e. a blow-up of the plane in total
    /// transform coordinates.
    pub fn is_plane_blowup_basis(&self) -> bool {
        let n = self.rank();
        for i in 0..n {
            for j in 0..n {
                let expected = if i != j {
                    0
                } else if i == 0 {
                    1
                } else {
                    -1
                };
                if self.gram[i][j] != expected {
                    return false;
                }
            }
        }
        self.canonical[0] == -3 && self.canonical[1..].iter().all(|&k| k == 1)
    }

    pub fn check(&self, d: &DivisorClass) -> Result<(), LatticeError> {
        if d.0.len() != self.rank() {
            return Err(LatticeError::RankMismatch { rank: self.rank(), got: d.0.len() });
        }
        Ok(())
    }

    /// Intersection number `D1 . D2`.
    ///
    /// Panics if either class has the wrong length; see [`Self::checked_pair`].
    pub fn pair(&self, a: &DivisorClass, b: &DivisorClass) -> Rat {
        assert_eq!(a.0.len(), self.rank(), "class/lattice rank mismatch");
        assert_eq!(b.0.len(), self.rank(), "class/lattice rank mismatch");
        let mut acc = Rat::zero();
        for (i, ai) in a.0.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            let mut row = Rat::zero();
            for (j, bj) in b.0.iter().enumerate() {
                let g = self.gram[i][j];
                if g != 0 && !bj.is_zero() {
                    row += bj * Int::from(g);
                }
            }
            acc += ai * row;
        }
        acc
    }

    pub fn checked_pair(&self, a: &DivisorClass, b: &DivisorClass) -> Result<Rat, LatticeError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.pair(a, b))
    }

    pub fn self_intersection(&self, d: &DivisorClass) -> Rat {
        self.pair(d, d)
    }

    /// `K . D`.
    pub fn k_degree(&self, d: &DivisorClass) -> Rat {
        self.pair(&self.canonical(), d)
    }

    /// `p_a(D) = 1 + (D^2 + D.K)/2` for integral `D`.
    pub fn arithmetic_genus(&self, d: &DivisorClass) -> Result<i64, LatticeError> {
        self.check(d)?;
        if !d.is_integral() {
            return Err(LatticeError::NonIntegral);
        }
        let s = self.self_intersection(d) + self.k_degree(d);
        // Parity of the lattice makes s even.
        Ok(1 + num::to_i64(&(s.to_integer() / Int::from(2))))
    }

    /// `chi(D) = 1 + (D^2 - D.K)/2` on a rational surface.
    pub fn rr_chi(&self, d: &DivisorClass) -> Result<Rat, LatticeError> {
        self.check(d)?;
        if !self.rational_surface {
            return Err(LatticeError::NotRationalSurface);
        }
        Ok(Rat::one() + (self.self_intersection(d) - self.k_degree(d)) / Int::from(2))
    }

    /// Membership in the half of the light cone containing `ample`. The zero
    /// class is never a member.
    pub fn in_light_halfcone(&self, d: &DivisorClass, ample: &DivisorClass) -> Result<bool, LatticeError> {
        self.check(d)?;
        self.check(ample)?;
        if !self.self_intersection(ample).is_positive() {
            return Err(LatticeError::NotPositive);
        }
        if d.is_zero() {
            return Ok(false);
        }
        Ok(!self.self_intersection(d).is_negative() && self.pair(d, ample).is_positive())
    }

    /// Writes an isotropic class as `M = a D` with `a > 0` and `D` primitive
    /// integral.
    pub fn primitive_generator(&self, m: &DivisorClass) -> Result<(Rat, DivisorClass), LatticeError> {
        self.check(m)?;
        if !self.self_intersection(m).is_zero() {
            return Err(LatticeError::NotIsotropic);
        }
        let (a, prim) = num::primitive_split(&m.0).ok_or(LatticeError::ZeroClass)?;
        Ok((a, DivisorClass(num::to_rat_vec(&prim))))
    }
}

/// A rational point of `Pic(X) (x) Q`, in the coordinates of the lattice basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass(pub Vec<Rat>);

impl DivisorClass {
    pub fn new(coords: Vec<Rat>) -> Self {
        Self(coords)
    }

    pub fn from_ints(v: &[i64]) -> Self {
        Self(num::rats(v))
    }

    pub fn from_bigints(v: &[Int]) -> Self {
        Self(num::to_rat_vec(v))
    }

    pub fn coords(&self) -> &[Rat] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(num::is_integral)
    }

    /// Integer coordinates, if the class is integral.
    pub fn to_ints(&self) -> Option<Vec<Int>> {
        self.is_integral().then(|| self.0.iter().map(|q| q.to_integer()).collect())
    }

    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.to_ints().map(|v| v.iter().map(num::to_i64).collect())
    }

    pub fn scale(&self, s: &Rat) -> Self {
        Self(self.0.iter().map(|x| x * s).collect())
    }

    /// Primitive integral representative of the ray through this class.
    pub fn primitive_ray(&self) -> Option<Self> {
        num::primitive_split(&self.0).map(|(_, p)| Self::from_bigints(&p))
    }

    pub fn max_abs(&self) -> Rat {
        self.0.iter().map(|q| q.abs()).max().unwrap_or_else(Rat::zero)
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, o: &DivisorClass) -> DivisorClass {
        DivisorClass(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, o: &DivisorClass) -> DivisorClass {
        DivisorClass(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Add for DivisorClass {
    type Output = DivisorClass;
    fn add(self, o: DivisorClass) -> DivisorClass {
        &self + &o
    }
}

impl Sub for DivisorClass {
    type Output = DivisorClass;
    fn sub(self, o: DivisorClass) -> DivisorClass {
        &self - &o
    }
}

impl Neg for DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass(self.0.into_iter().map(|x| -x).collect())
    }
}

impl Mul<&DivisorClass> for &Rat {
    type Output = DivisorClass;
    fn mul(self, d: &DivisorClass) -> DivisorClass {
        d.scale(self)
    }
}
