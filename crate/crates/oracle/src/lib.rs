//! Brute-force semantic oracles used to test the verifier: evaluation in
//! finite interpretations, bounded model search for formulas and clause
//! sets, a truth-table oracle and seeded random generators.

pub mod equality;
pub mod gen;
pub mod model;
pub mod sat;

pub use model::{
    equivalent, eval, for_each_interpretation, satisfiable, Interpretation, Signature,
};
pub use sat::{clauses_satisfiable, dpll, truth_table_satisfiable};
