//! Exact verification toolkit for residue-level distinction criteria of
//! level-zero non-cuspidal discrete series of `GL2` over a division algebra,
//! relative to the unit group of a quaternionic sub-algebra.
//!
//! The crate works at the residue-field level only: finite fields with exact
//! arithmetic ([`ffchar`]), the finite group `GL2(F_Q)` and its nonsplit torus
//! ([`gl2fq`]), matrix models of twisted Steinberg and parabolically induced
//! representations ([`repmodels`]), a truncated regular tree with orbit
//! classes ([`treeorbits`]), the linear constraint system whose nullity bounds
//! the dimension of the invariant-form space ([`distinction`]), and symbolic
//! parameter-transfer bookkeeping for the split side ([`jl`]).
//!
//! Character values are kept as exact rational angles (see [`angle`]) and only
//! lowered to floating-point complex numbers at the linear-algebra boundary,
//! which is generic over the scalar type (see [`scalar::Scalar`]).

pub mod angle;
pub mod distinction;
pub mod ffchar;
pub mod gl2fq;
pub mod jl;
pub mod linalg;
pub mod repmodels;
pub mod scalar;
pub mod treeorbits;
pub mod verify;

/// Default real scalar used by the CLI and the verification suite.
pub type Real = f64;
/// Default complex scalar.
pub type Cplx = num_complex::Complex<Real>;


pub use distinction::{DistinctionReport, Verdict};
pub use ffchar::{FieldParams, FiniteField, MulCharacter, PairData, TameCharacter};
