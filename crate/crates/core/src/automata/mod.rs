//! ω-automata: LTL to Büchi translation, Safra determinization to Rabin
//! automata, HOA import/export and the empty/universal state partition.

mod buchi;
mod hoa;
mod rabin;
mod safra;

pub use buchi::{ltl_to_nba, BuchiAutomaton};
pub use hoa::{parse_hoa, print_hoa, HoaError};
pub use rabin::{PairMarks, RabinAutomaton, RabinPair, StateClass};
pub use safra::determinize;

use crate::alphabet::TooManyPropositions;
use crate::ltl::Formula;

/// Default bound on the number of automaton states built by the translation
/// pipeline.
pub const DEFAULT_STATE_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AutomatonError {
    #[error("state cap of {0} exceeded")]
    StateCap(usize),
    #[error(transparent)]
    Alphabet(#[from] TooManyPropositions),
    #[error("invalid automaton: {0}")]
    Invalid(String),
}

/// Full pipeline: negation normal form, simplification, tableau, Safra,
/// minimization.
///
/// The alphabet is the formula's atoms followed by any `extra_ap` not already
/// present.
pub fn ltl_to_dra(
    f: &Formula,
    extra_ap: &[String],
    cap: usize,
) -> Result<RabinAutomaton, AutomatonError> {
    let mut names = f.atoms();
    for a in extra_ap {
        if !names.contains(a) {
            names.push(a.clone());
        }
    }
    let alphabet = crate::alphabet::Alphabet::new(names)?;
    let nba = ltl_to_nba(&f.to_nnf().simplify(), &alphabet, cap)?;
    Ok(determinize(&nba, cap)?.minimize())
}
