mod common;

use common::{dra_for, random_chain, rat, CORPUS_FORMULAS};
use ltlmon::markov::{product, reach_probability, reach_probability_f64, MarkovChain, Prob, ProductChain, Sampler};
use ltlmon::samples;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_system(seed: u64) -> (MarkovChain, ProductChain) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.gen_range(1..=8);
    let chain = random_chain(&mut rng, k);
    let f = CORPUS_FORMULAS[rng.gen_range(0..CORPUS_FORMULAS.len())];
    let pc = product(dra_for(f).dra(), &chain);
    (chain, pc)
}

fn random_product(seed: u64) -> ProductChain {
    random_system(seed).1
}

/// Probability of reaching a bottom SCC that is not good.
fn bad_probability(pc: &ProductChain) -> Prob {
    let d = pc.scc_decompose();
    let good = d.good.as_ref().unwrap();
    let mut target = vec![false; pc.chain.num_states()];
    for (i, comp) in d.components.iter().enumerate() {
        if d.bottom[i] && !good[i] {
            for &v in comp {
                target[v] = true;
            }
        }
    }
    let x = reach_probability(&pc.chain, &target);
    pc.chain.initial().iter().map(|(s, p)| p * &x[*s]).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn product_rows_stay_stochastic(seed in any::<u64>()) {
        let (chain, pc) = random_system(seed);
        prop_assert!(pc.chain.validate(None).is_empty());
        // Every product edge carries the probability of its system edge.
        for r in 0..pc.chain.num_states() {
            let (_, s) = pc.origin[r].unwrap();
            for t in pc.chain.row(r) {
                let (_, s2) = pc.origin[t.to].unwrap();
                prop_assert_eq!(Some(&t.prob), chain.prob(s, s2));
            }
        }
    }

    #[test]
    fn good_and_bad_probabilities_sum_to_one(seed in any::<u64>()) {
        let pc = random_product(seed);
        prop_assert_eq!(pc.sat_probability() + bad_probability(&pc), Prob::one());
    }

    #[test]
    fn components_are_topologically_ordered(seed in any::<u64>()) {
        let pc = random_product(seed);
        let d = pc.scc_decompose();
        for s in 0..pc.chain.num_states() {
            for t in pc.chain.successors(s) {
                prop_assert!(d.component_of[s] <= d.component_of[t]);
            }
        }
    }

    #[test]
    fn float_solve_matches_exact(seed in any::<u64>()) {
        let pc = random_product(seed);
        let exact = pc.sat_probability().to_f64().unwrap();
        prop_assert!((pc.sat_probability_f64(1e-13) - exact).abs() < 1e-9);
    }

    #[test]
    fn chain_text_round_trips(seed in any::<u64>()) {
        let pc = random_product(seed);
        let text = pc.chain.to_text();
        let back = MarkovChain::parse(&text).unwrap();
        prop_assert_eq!(back.to_text(), text);
        let again = ProductChain::from_marked_chain(back);
        prop_assert_eq!(again.sat_probability(), pc.sat_probability());
    }
}

/// Fraction of sampled product runs that end in a good bottom SCC.
fn monte_carlo(pc: &ProductChain, runs: usize, len: usize, seed: u64) -> f64 {
    let good = pc.in_good_bscc();
    let sampler = Sampler::new(&pc.chain).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hits = (0..runs)
        .filter(|_| {
            let run = sampler.run(len, &mut rng);
            good[*run.last().unwrap()]
        })
        .count();
    hits as f64 / runs as f64
}

#[test]
fn running_example_sampling_agrees_with_solve() {
    let pc = product(&samples::persistence_dra(), &samples::running_example_chain());
    let exact = pc.sat_probability();
    assert!(exact > Prob::zero() && exact < Prob::one());
    // Leaving {a, b, c} takes a geometric number of rounds with success
    // probability at least 1/4 per three steps; 300 steps leave < 1e-6.
    let est = monte_carlo(&pc, 10_000, 300, 1);
    assert!((est - exact.to_f64().unwrap()).abs() <= 0.02, "{est} vs {exact}");
}

#[test]
fn random_chains_sampling_agrees_with_solve() {
    for seed in 0..5 {
        let pc = random_product(seed);
        let exact = pc.sat_probability().to_f64().unwrap();
        let est = monte_carlo(&pc, 10_000, 400, seed);
        assert!((est - exact).abs() <= 0.02, "seed {seed}: {est} vs {exact}");
    }
}

#[test]
fn reach_probabilities_on_a_ladder() {
    // Symmetric walk on 0..=4 absorbed at both ends: P(reach 4 from i) = i/4.
    let mut c = MarkovChain::new();
    for i in 0..5 {
        c.add_state(&format!("x{i}"), &[]).unwrap();
    }
    c.set_initial(2, Prob::one()).unwrap();
    c.add_transition(0, 0, Prob::one()).unwrap();
    c.add_transition(4, 4, Prob::one()).unwrap();
    for i in 1..4 {
        c.add_transition(i, i - 1, rat(1, 2)).unwrap();
        c.add_transition(i, i + 1, rat(1, 2)).unwrap();
    }
    let target = [false, false, false, false, true];
    let x = reach_probability(&c, &target);
    let y = reach_probability_f64(&c, &target, 1e-14);
    for i in 0..5 {
        assert_eq!(x[i], rat(i as i64, 4));
        assert!((y[i] - i as f64 / 4.0).abs() < 1e-10);
    }
}
