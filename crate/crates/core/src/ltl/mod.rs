//! Linear temporal logic: syntax trees, parsing, negation normal form and
//! evaluation on ultimately periodic words.

mod formula;
mod lasso;
mod parse;
mod random;

pub use formula::Formula;
pub use lasso::{lasso_models, LassoError, LassoWord};
pub use parse::{parse_ltl, ParseError};
pub use random::{random_formula, random_lasso};
