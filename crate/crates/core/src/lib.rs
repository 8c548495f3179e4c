//! Epsilon calculus workbench: syntax, proofs, epsilon elimination and
//! finite semantics.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod syntax;
pub mod proof;
pub mod translate;
pub mod elim;
pub mod semantics;
