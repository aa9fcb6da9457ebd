//! Shared generators and oracles for the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::Arc;

use ltlmon::alphabet::{Alphabet, Letter};
use ltlmon::automata::ltl_to_dra;
use ltlmon::ltl::{parse_ltl, Formula, LassoWord};
use ltlmon::markov::{MarkovChain, Prob, Sampler};
use ltlmon::monitor::{Monitor, PMin, Property};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rat(n: i64, d: i64) -> Prob {
    Prob::new(n.into(), d.into())
}

/// Second lasso oracle: every subformula is evaluated position by position
/// by walking the folded word forward. A walk of `len + 1` steps from any
/// position has entered the cycle and gone once around it, so it sees every
/// position the suffix will ever visit.
pub fn walk_models(w: &LassoWord, f: &Formula, ab: &Alphabet) -> bool {
    eval(w, f, ab)[0]
}

fn eval(w: &LassoWord, f: &Formula, ab: &Alphabet) -> Vec<bool> {
    use Formula::*;
    let n = w.len();
    let horizon = n + 1;
    let path = |i: usize| {
        let mut out = Vec::with_capacity(horizon);
        let mut j = i;
        for _ in 0..horizon {
            out.push(j);
            j = w.succ(j);
        }
        out
    };
    match f {
        True => vec![true; n],
        False => vec![false; n],
        Atom(a) => {
            let k = ab.position(a).expect("atom in alphabet");
            (0..n).map(|i| w.at(i).contains(k)).collect()
        }
        Not(a) => eval(w, a, ab).into_iter().map(|x| !x).collect(),
        And(a, b) => {
            let (x, y) = (eval(w, a, ab), eval(w, b, ab));
            (0..n).map(|i| x[i] && y[i]).collect()
        }
        Or(a, b) => {
            let (x, y) = (eval(w, a, ab), eval(w, b, ab));
            (0..n).map(|i| x[i] || y[i]).collect()
        }
        Next(a) => {
            let x = eval(w, a, ab);
            (0..n).map(|i| x[w.succ(i)]).collect()
        }
        Until(a, b) => {
            let (x, y) = (eval(w, a, ab), eval(w, b, ab));
            (0..n)
                .map(|i| {
                    for j in path(i) {
                        if y[j] {
                            return true;
                        }
                        if !x[j] {
                            return false;
                        }
                    }
                    false
                })
                .collect()
        }
        Release(a, b) => {
            let (x, y) = (eval(w, a, ab), eval(w, b, ab));
            (0..n)
                .map(|i| {
                    for j in path(i) {
                        if !y[j] {
                            return false;
                        }
                        if x[j] {
                            return true;
                        }
                    }
                    true
                })
                .collect()
        }
        Eventually(a) => {
            let x = eval(w, a, ab);
            (0..n).map(|i| path(i).iter().any(|&j| x[j])).collect()
        }
        Always(a) => {
            let x = eval(w, a, ab);
            (0..n).map(|i| path(i).iter().all(|&j| x[j])).collect()
        }
    }
}

/// A random chain on `k` states named `s0..`, each row a composition of
/// ten tenths over at most three successors, labelled with random subsets
/// of `p, q`. Every positive probability is at least 1/10.
pub fn random_chain(rng: &mut ChaCha8Rng, k: usize) -> MarkovChain {
    let mut c = MarkovChain::new();
    for i in 0..k {
        let mut props = Vec::new();
        for ap in ["p", "q"] {
            if rng.gen_bool(0.5) {
                props.push(ap);
            }
        }
        c.add_state(&format!("s{i}"), &props).unwrap();
    }
    c.set_initial(0, rat(1, 1)).unwrap();
    let all: Vec<usize> = (0..k).collect();
    for i in 0..k {
        let d = rng.gen_range(1..=k.min(3));
        let succ: Vec<usize> = all.choose_multiple(rng, d).copied().collect();
        // Split 10 into d positive parts.
        let mut cuts: Vec<i64> = (1..10).collect::<Vec<_>>().choose_multiple(rng, d - 1).copied().collect();
        cuts.sort_unstable();
        cuts.insert(0, 0);
        cuts.push(10);
        for (j, &t) in succ.iter().enumerate() {
            c.add_transition(i, t, rat(cuts[j + 1] - cuts[j], 10)).unwrap();
        }
    }
    c
}

pub const CORPUS_FORMULAS: [&str; 6] = ["F G p", "G F p", "G (p -> F q)", "p U q", "F (p & X q)", "G p"];

pub fn dra_for(f: &str) -> Arc<Property> {
    let aps = vec!["p".to_string(), "q".to_string()];
    Arc::new(Property::new(ltl_to_dra(&parse_ltl(f).unwrap(), &aps, 100_000).unwrap()))
}

pub fn pmin() -> PMin {
    PMin::new(rat(1, 10)).unwrap()
}

/// One closed trace together with the chain it came from and the monitor
/// that has read it.
pub struct Case {
    pub formula: &'static str,
    pub chain: MarkovChain,
    pub trace: Vec<usize>,
    pub monitor: Monitor,
}

impl Case {
    /// The trace as ids of the induced chain (first-occurrence order).
    pub fn ids(&self) -> Vec<usize> {
        let dra = self.monitor.property().dra();
        ltlmon::monitor::product_trace(dra, &self.chain, &self.trace)
            .into_iter()
            .map(|(q, s)| self.monitor.state_id(q, s).unwrap())
            .collect()
    }
}

pub fn letters(c: &MarkovChain, ab: &Alphabet) -> Vec<Letter> {
    (0..c.num_states()).map(|s| c.letter(s, ab)).collect()
}

/// `count` closed traces of length at most 30 over chains with at most six
/// states.
pub fn corpus(seed: u64, count: usize) -> Vec<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut props: HashMap<&str, Arc<Property>> = HashMap::new();
    let mut out = Vec::new();
    while out.len() < count {
        let formula = *CORPUS_FORMULAS.choose(&mut rng).unwrap();
        let prop = props.entry(formula).or_insert_with(|| dra_for(formula)).clone();
        let k = rng.gen_range(1..=6);
        let chain = random_chain(&mut rng, k);
        let sampler = Sampler::new(&chain).unwrap();
        let run = sampler.run(30, &mut rng);
        let ls = letters(&chain, prop.dra().alphabet());
        let mut mon = Monitor::new(prop.clone(), pmin());
        let mut closed = Vec::new();
        for (i, &s) in run.iter().enumerate() {
            mon.observe(s, ls[s]);
            if mon.is_closed() {
                closed.push(i + 1);
            }
        }
        let Some(&len) = closed.choose(&mut rng) else {
            continue;
        };
        let trace = run[..len].to_vec();
        let mut monitor = Monitor::new(prop, pmin());
        for &s in &trace {
            monitor.observe(s, ls[s]);
        }
        out.push(Case {
            formula,
            chain,
            trace,
            monitor,
        });
    }
    out
}

/// A chain with the induced chain's states and edges but random positive
/// probabilities on every row.
pub fn competitor(induced: &MarkovChain, rng: &mut ChaCha8Rng) -> MarkovChain {
    let mut c = MarkovChain::new();
    for s in 0..induced.num_states() {
        c.add_state(induced.name(s), &[]).unwrap();
    }
    c.set_initial(0, rat(1, 1)).unwrap();
    for s in 0..induced.num_states() {
        let row = induced.row(s);
        let w: Vec<i64> = row.iter().map(|_| rng.gen_range(1..=1000)).collect();
        let total: i64 = w.iter().sum();
        for (t, &x) in row.iter().zip(&w) {
            c.add_transition(s, t.to, rat(x, total)).unwrap();
        }
    }
    c
}

pub mod criteria;
