//! Formulas, goal assignments, the concrete grammar and the closure.

mod ast;
mod closure;
mod parser;
mod printer;

pub use ast::*;
pub use closure::{bar, ecl, ecl_set};
pub use parser::{check_dialect, check_positive, parse_coalition, parse_path_formula, parse_state_formula, Dialect};
