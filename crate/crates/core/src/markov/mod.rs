//! Finite Markov chains with state labels: the chain file format, products
//! with Rabin automata, SCC analysis, exact reachability and sampling.

mod chain;
mod product;
mod sample;
mod solve;

pub use chain::{format_prob, parse_prob, ChainError, MarkovChain, Transition};
pub use product::{product, ProductChain, ESCAPE_STATE};
pub use sample::{sample_run, Sampler};
pub use solve::{reach_probability, reach_probability_f64, scc_decompose, SccDecomposition};

/// Exact probabilities.
pub type Prob = num_rational::BigRational;
