//! Exact-arithmetic machinery for measure-once quantum finite automata built
//! from rational quaternion encodings of words.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is pure: file
//! formats, the command-line front end and threaded enumeration live in the
//! `qfalab` crate.
//!
//! Module map:
//! - [`exactnum`]: canonical rationals and linear combinations of prime radicals.
//! - [`words`]: plain words over `x1..xn`, reduced words in the free group on
//!   `{a, b}`, the binary encoding and the sign-flipping word transforms.
//! - [`quaternion`]: rational quaternions and the map from free words to unit
//!   quaternions.
//! - [`ratmatrix`]: dense rational matrices, direct sums, Kronecker products and
//!   the 4x4 orthogonal embedding of quaternions.
//! - [`qfa`]: rational automata and the radical-initial-vector automata produced
//!   by the reduction.
//! - [`mmpcp`]: mixed-modification PCP instances and a bounded solver.
//! - [`reduction`]: the instance-to-automaton compilers.
//! - [`polypack`]: the injective packing polynomial and its number-theoretic
//!   helpers.
//! - [`kronpoly`]: polynomial evaluation through Kronecker powers.
//! - [`harness`]: bounded collision search and the property suites.
#![no_std]

extern crate alloc;

pub mod exactnum;
pub mod harness;
pub mod kronpoly;
pub mod mmpcp;
pub mod polypack;
pub mod qfa;
pub mod quaternion;
pub mod ratmatrix;
pub mod reduction;
pub mod words;

pub use exactnum::{RadicalSignature, Rational};
pub use quaternion::QuatRat;
pub use ratmatrix::RatMatrix;
pub use words::{FreeWord, Letter, Word};
