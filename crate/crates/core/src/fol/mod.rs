//! First-order terms, formulas and clauses, the translation from surface
//! statements, and clause-level preprocessing.

pub mod bounds;
pub mod brand;
pub mod clause;
pub mod formula;
pub mod normal;
pub mod term;
pub mod translate;
pub mod unify;

pub use bounds::{check_bounds, BoundViolation};
pub use brand::{brand_transform, uninterpreted_equality, BRAND_EQ};
pub use clause::{Clause, ClauseSource, Literal};
pub use formula::{Atom, Formula};
pub use normal::{clausify, nnf, skolemize_cnf, SkolemCounter};
pub use term::{Substitution, Term};
pub use translate::{translate, translate_closed, TranslateError};
pub use unify::{unify, unify_atoms, UnifyError};
