//! Exact divisor-cone computations on Picard lattices of smooth projective
//! surfaces.
//!
//! Everything here runs over arbitrary-precision integers and rationals:
//! intersection pairings, effective and nef cone generators, Zariski
//! decompositions, enumeration of (-1)- and (-2)-classes, Dynkin fiber
//! recognition, the Fibonacci blow-up tower and the decision rules for
//! polyhedrality of the effective cone and finite generation of the Cox ring.
//!
//! The crate is `no_std` and only needs `alloc`; file formats and the command
//! line live in the companion `coxsurf` crate.

#![no_std]

extern crate alloc;

pub mod classify;
pub mod cone;
pub mod lattice;
pub mod linalg;
pub mod lp;
pub mod negative;
pub mod num;
pub mod surface;
pub mod tower;
pub mod zariski;

pub use classify::{
    decide_cox_fg, decide_eff_polyhedral, mordell_weil_rank, nef_classes_bounded, ClassifyError, CoxCase,
    Fibration, FibrationBasis, Rule, SurfaceData, SurfaceFlags, Tri, Verdict,
};
pub use cone::{dual_cone, effc_sample_check, inclusion_chain_check, ConeError, RationalCone};
pub use lattice::{DivisorClass, IntersectionLattice, LatticeError};
pub use negative::{
    dual_graph, dynkin_classify, enumerate_classes, minus_one_classes, minus_two_classes, CurveClass, DynkinFamily,
    DynkinType, FiberComponentGraph,
};
pub use num::{Int, Rat};
pub use surface::{Base, BlowupSpec, Center, ProximityMatrix, SurfaceError};
pub use tower::{
    bounds_check, kappa_persists, mui_consistency, tower_init, tower_sequence, tower_step, TowerState, TowerVariant,
};
pub use zariski::{kappa_from_zariski, zariski_decompose, Kappa, KappaHints, ZariskiDecomposition, ZariskiError};
