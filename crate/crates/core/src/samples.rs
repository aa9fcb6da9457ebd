//! The running example: a seven-state chain observed through one
//! proposition `P`, and the two-state automaton for `F G P`.

use crate::alphabet::Alphabet;
use crate::automata::{RabinAutomaton, RabinPair};
use crate::markov::MarkovChain;

/// Chain on `a..g` with `P` holding on `b, d, e, f`. Every branching state
/// splits evenly; `d` and `g` move deterministically.
pub const RUNNING_EXAMPLE_CHAIN: &str = "\
state a
state b props P
state c
state d props P
state e props P
state f props P
state g
init a 1
trans a a 1/2
trans a b 1/2
trans b c 1/2
trans b d 1/2
trans c a 1/2
trans c f 1/2
trans d e 1
trans e e 1/2
trans e d 1/2
trans f f 1/2
trans f g 1/2
trans g f 1
";

pub fn running_example_chain() -> MarkovChain {
    MarkovChain::parse(RUNNING_EXAMPLE_CHAIN).expect("well-formed sample")
}

/// Deterministic Rabin automaton for `F G P`: state 0 is entered on the
/// empty letter, state 1 on `{P}`; the single pair is `({1}, {0})`.
pub fn persistence_dra() -> RabinAutomaton {
    let ab = Alphabet::new(["P"]).expect("one proposition");
    RabinAutomaton::new(
        ab,
        0,
        vec![vec![0, 1], vec![0, 1]],
        vec![RabinPair::new(vec![1], vec![0])],
    )
    .expect("well-formed sample")
}

/// Three traces of the running example, as system states:
/// `a³bca²b`, `a⁵b(de²)³` and `abcf⁴(gf)²`.
pub fn running_example_traces() -> [Vec<&'static str>; 3] {
    let t = |s: &'static str| s.split(' ').collect::<Vec<_>>();
    [
        t("a a a b c a a b"),
        t("a a a a a b d e e d e e d e e"),
        t("a b c f f f f g f g f"),
    ]
}
