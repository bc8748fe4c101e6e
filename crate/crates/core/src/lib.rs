//! Exact arithmetic for truncated q-hypergeometric sums and their
//! congruences modulo powers of cyclotomic polynomials.
//!
//! Everything here is `no_std` with `alloc`: Laurent polynomials over
//! rationals ([`polyring`]), cyclotomic polynomials ([`cyclotomic`]),
//! q-analogues ([`qcombinatorics`]), the congruence engine
//! ([`congruence`]) and the concrete statements it checks ([`theorems`]).

#![no_std]

extern crate alloc;

pub mod congruence;
pub mod cyclotomic;
mod error;
pub mod polyring;
pub mod qcombinatorics;
pub mod rational;
pub mod theorems;

pub use congruence::{congruent_mod_phi, legendre, residue_index, ResidueRing, Verdict};
pub use cyclotomic::{cyclotomic, euler_totient};
pub use error::Error;
pub use polyring::LaurentPoly;
pub use qcombinatorics::{gauss_binomial, q_integer, q_pochhammer, FactoredDen, QRat};
pub use rational::Rational;
