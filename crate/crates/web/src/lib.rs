//! Browser bindings: monitor a hand-written trace of the running example,
//! compare the full and online monitors on a simulated run, and solve or
//! estimate the acceptance probability of the chain family.

use std::sync::Arc;

use ltlmon::automata::ltl_to_dra;
use ltlmon::experiments::{
    build_family, confidence_based_estimates, fixed_length_estimates, FamilyParams, Setup,
};
use ltlmon::ltl::parse_ltl;
use ltlmon::markov::{parse_prob, product, MarkovChain, Sampler};
use ltlmon::monitor::{format_step, Monitor, PMin, Property};
use ltlmon::online::OnlineMonitor;
use ltlmon::samples::running_example_chain;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wasm_bindgen::prelude::*;

const STATE_CAP: usize = 20_000;

fn property(formula: &str, chain: &MarkovChain) -> Result<Arc<Property>, String> {
    let f = parse_ltl(formula).map_err(|e| e.to_string())?;
    let dra = ltl_to_dra(&f, chain.aps(), STATE_CAP).map_err(|e| e.to_string())?;
    Ok(Arc::new(Property::new(dra)))
}

fn pmin(value: &str) -> Result<PMin, String> {
    let p = parse_prob(value).ok_or_else(|| format!("bad probability '{value}'"))?;
    PMin::new(p)
}

/// Monitors a space-separated sequence of state names of the running
/// example. Returns one `step verdict m gamma` line per observation.
pub fn monitor_trace_text(trace: &str, formula: &str, p_min: &str) -> Result<String, String> {
    let chain = running_example_chain();
    let prop = property(formula, &chain)?;
    let mut mon = Monitor::new(prop.clone(), pmin(p_min)?);
    let mut out = String::new();
    for (step, name) in trace.split_whitespace().enumerate() {
        let s = chain
            .state(name)
            .ok_or_else(|| format!("unknown state '{name}'"))?;
        mon.observe(s, chain.letter(s, prop.dra().alphabet()));
        out.push_str(&format_step(step as u64, mon.verdict(), &mon.confidence()));
        out.push('\n');
    }
    Ok(out)
}

/// Simulates `steps` steps of the running example and returns, per step,
/// `ln γ` of the full monitor followed by that of the online monitor.
pub fn compare_monitors_vec(seed: u64, steps: usize, formula: &str, p_min: &str) -> Result<Vec<f64>, String> {
    let chain = running_example_chain();
    let prop = property(formula, &chain)?;
    let pm = pmin(p_min)?;
    let mut full = Monitor::new(prop.clone(), pm.clone());
    let mut online = OnlineMonitor::new(prop.clone(), pm);
    let sampler = Sampler::new(&chain)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let run = sampler.run(steps, &mut rng);
    let mut out = Vec::with_capacity(2 * run.len());
    for s in run {
        let letter = chain.letter(s, prop.dra().alphabet());
        full.observe(s, letter);
        online.observe(s, letter);
        out.push(full.confidence().log_gamma);
        out.push(online.confidence().log_gamma);
    }
    Ok(out)
}

/// Exact probability that a run of the family chain with ladder height `n`
/// satisfies `G F acc`, followed by fixed-length and confidence-based
/// estimates for the given step quota.
pub fn family_vec(n: usize, quota: u64, runs: usize, threshold: f64, seed: u64) -> Result<Vec<f64>, String> {
    let fp = FamilyParams::standard(n);
    let chain = build_family(&fp)?;
    let setup = Setup::family(&fp, None)?;
    let exact = product(setup.property.dra(), &chain).sat_probability_f64(1e-14);
    let fl = fixed_length_estimates(&setup, n, runs, &[quota], seed);
    let cb = confidence_based_estimates(&setup, n, runs, &[quota], threshold, seed);
    Ok(vec![exact, fl[0].estimate, cb[0].estimate])
}

#[wasm_bindgen]
pub fn monitor_trace(trace: &str, formula: &str, p_min: &str) -> Result<String, JsError> {
    monitor_trace_text(trace, formula, p_min).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn compare_monitors(seed: u64, steps: usize, formula: &str, p_min: &str) -> Result<Vec<f64>, JsError> {
    compare_monitors_vec(seed, steps, formula, p_min).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn family(n: usize, quota: u64, runs: usize, threshold: f64, seed: u64) -> Result<Vec<f64>, JsError> {
    family_vec(n, quota, runs, threshold, seed).map_err(|e| JsError::new(&e))
}
