//! Verification of mathematical texts written in a ForTheL-like controlled
//! language: parsing, first-order translation, a resolution prover and the
//! verification driver.

pub mod bridge;
pub mod fol;
pub mod prover;
pub mod syntax;
pub mod verifier;
