//! Exact arithmetic for even integral lattices and their orthogonal groups.
//!
//! The crate is `no_std` and only needs `alloc`. Every computation is exact
//! over ℤ or ℚ; there is no floating point anywhere.
//!
//! Matrices act on column vectors of lattice coordinates. A product `g·h`
//! means "apply `h` first", and a [`GroupWord`] `g₁g₂…g_k` acts as
//! `v ↦ g₁(g₂(…g_k(v)))`.

#![no_std]

extern crate alloc;

mod error;

pub mod discform;
pub mod eichler;
pub mod exact;
pub mod forge;
pub mod isometry;
pub mod jacobi;
pub mod lattice;

pub use error::{Error, Result};

pub use discform::{DiscAut, DiscElement, DiscriminantForm};
pub use eichler::{
    is_in_eu, Census, CensusClass, Eichler, HyperbolicSplitting, OrbitInvariant,
    PlaneStabilization, Reduction,
};
pub use exact::{Int, Mat, Rat};
pub use forge::{CommutatorCertificate, Forge, Scope};
pub use isometry::{Atom, GroupWord, IsometryMap, Membership, SquareClass};
pub use jacobi::{
    paramodular_jt_check, IdentityCheck, JacobiElement, JacobiFrame, ParamodularReport,
};
pub use lattice::{Block, KneserReport, Lattice, RepresentsMinusTwo};
