//! Rational points of bounded height over small number fields, Weil
//! restriction of scalars, and the invariants that enter Manin's conjecture
//! and Peyre's constant.
//!
//! The crate is organised bottom-up:
//!
//! * [`nfcore`]: number fields, ideals, places, zeta values;
//! * [`heights`]: heights attached to metrized line bundles;
//! * [`piclattice`]: Picard lattices with effective cones and Galois actions;
//! * [`weilres`]: the restriction-of-scalars compiler and its point maps;
//! * [`enumerate`]: counting points of bounded height;
//! * [`tamagawa`]: local densities, L-factors and Tamagawa numbers;
//! * [`lab`]: configuration, fitting and packaged experiments.

pub mod arith;
pub mod enumerate;
pub mod heights;
pub mod lab;
pub mod linalg;
pub mod lp;
pub mod nfcore;
pub mod piclattice;
pub mod poly;
pub mod polyfp;
pub mod tamagawa;
pub mod weilres;

pub use arith::Rat;
