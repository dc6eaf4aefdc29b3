//! Interface to external TPTP provers.

pub mod runner;
pub mod tptp;

pub use runner::{
    find_executable, run_external, set_max_processes, szs_verdict, validate_specs,
    ExternalProverSpec, ExternalVerdict, RunError, SpecError,
};
pub use tptp::{read, read_problem, write_problem, Mangling, TptpError, TptpProblem};
