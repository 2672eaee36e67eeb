//! Spin state vectors with tracked quantization frames on the double cover of
//! the rotation group, two-particle constructions, exchange phases and the
//! exclusion rules that follow from them.

pub mod cli;
pub mod coupling;
pub mod error;
pub mod geometry;
pub mod numerics;
mod quadrature;
pub mod states;
pub mod su2;
pub mod twoparticle;
pub mod wigner;
