//! Bases and generators for algebras over monads on finite sets and posets.
//!
//! The crate covers concrete monads with exhaustive law checking, their
//! Eilenberg-Moore algebras, generators and bases of those algebras, the
//! Kleisli representation of algebra homomorphisms, determinisation of
//! automata with side effects through distributive laws, and the canonical
//! residual finite state automaton of a regular language.

pub mod algebra;
pub mod bialgebra;
pub mod error;
pub mod finite;
pub mod generator;
pub mod jacobs;
pub mod json;
pub mod kleisli;
pub mod laws;
pub mod monad;
pub mod report;
pub mod rfsa;
pub mod tvalue;

pub use error::{Error, Result};
pub use finite::{compose, Carrier, CarrierRef, FiniteFunction, Semiring};
pub use monad::{Monad, Space, TSpace};
pub use report::{Certificate, Mode, Opts, Report};
pub use tvalue::{rat, Rational, TVal, TValue};
