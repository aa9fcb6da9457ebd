//! Maximum-likelihood runtime monitoring of LTL properties over finite
//! Markov chains whose transition probabilities are unknown.

pub mod alphabet;
pub mod automata;
pub mod graph;
pub mod ltl;
pub mod markov;
pub mod samples;
pub mod monitor;
mod scc_stack;
pub mod online;
pub mod experiments;
