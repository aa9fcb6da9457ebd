//! Checks shared by the integration tests and the acceptance report. Each
//! returns a one-line summary, or a description of the first failure.

use std::sync::Arc;

use ltlmon::markov::{product, Prob, Sampler};
use ltlmon::monitor::{
    escape_chain, likelihood, log_likelihood, verdict_probability, ConfidenceKind, Monitor, PMin,
    Property, Verdict,
};
use ltlmon::online::OnlineMonitor;
use ltlmon::samples;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{competitor, corpus, rat, Case};

pub type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn running_monitor(trace: &[&str]) -> Monitor {
    let c = samples::running_example_chain();
    let prop = Arc::new(Property::new(samples::persistence_dra()));
    let mut m = Monitor::new(prop.clone(), PMin::new(rat(1, 10)).unwrap());
    for name in trace {
        let s = c.state(name).unwrap();
        m.observe(s, c.letter(s, prop.dra().alphabet()));
    }
    m
}

/// Checks every edge of an induced chain against `(from, to, num, den)`
/// and that no other edge exists.
fn check_edges(m: &Monitor, edges: &[(&str, &str, i64, i64)]) -> Result<(), String> {
    let c = samples::running_example_chain();
    let pc = m.induced_chain(|s| c.name(s).to_string()).map_err(|e| e.to_string())?;
    let ch = &pc.chain;
    let total: usize = (0..ch.num_states()).map(|s| ch.row(s).len()).sum();
    ensure(total == edges.len(), || format!("{total} edges, expected {}", edges.len()))?;
    for &(a, b, n, d) in edges {
        let (Some(x), Some(y)) = (ch.state(a), ch.state(b)) else {
            return Err(format!("missing state {a} or {b}"));
        };
        let got = ch.prob(x, y).cloned().unwrap_or_else(Prob::zero);
        ensure(got == rat(n, d), || format!("P({a}, {b}) = {got}, expected {n}/{d}"))?;
    }
    Ok(())
}

/// Running example: induced chains, verdicts, `m` and `γ` of the three
/// traces. Product states are written `q:s`, where `q` is the automaton
/// state before reading the label of `s` (1 right after a `P` state).
pub fn golden_running_example() -> Outcome {
    let [t1, t2, t3] = samples::running_example_traces();
    let expected = [
        (&t1, Verdict::False, 1u64, 10.0 / 9.0),
        (&t2, Verdict::True, 3, 1000.0 / 729.0),
        (&t3, Verdict::False, 2, 100.0 / 81.0),
    ];
    let pmin = PMin::new(rat(1, 10)).unwrap();
    for (i, (t, v, m, g)) in expected.iter().enumerate() {
        let mon = running_monitor(t);
        ensure(mon.verdict() == *v, || format!("trace {}: verdict {}", i + 1, mon.verdict()))?;
        let c = mon.confidence();
        ensure(c.m == Some(*m), || format!("trace {}: m = {:?}", i + 1, c.m))?;
        let exact = pmin.gamma(*m).unwrap();
        let closed_form = num_traits::pow(rat(10, 9), *m as usize);
        ensure(mon.gamma() == Some(exact.clone()) && exact == closed_form, || {
            format!("trace {}: gamma {:?}", i + 1, mon.gamma())
        })?;
        ensure((exact.to_f64().unwrap() - g).abs() < 1e-12, || format!("trace {}: gamma {exact}", i + 1))?;
    }
    check_edges(
        &running_monitor(&t1),
        &[("0:a", "0:a", 3, 5), ("0:a", "0:b", 2, 5), ("0:b", "1:c", 1, 1), ("1:c", "0:a", 1, 1)],
    )
    .map_err(|e| format!("trace 1: {e}"))?;
    let head = [("0:a", "0:a", 4, 5), ("0:a", "0:b", 1, 5), ("0:b", "1:d", 1, 1), ("1:d", "1:e", 1, 1)];
    // Counting transitions of a⁵b(de²)³ gives e → e three times and e → d
    // twice. One more d evens the row out.
    let mut by_count = head.to_vec();
    by_count.extend([("1:e", "1:e", 3, 5), ("1:e", "1:d", 2, 5)]);
    check_edges(&running_monitor(&t2), &by_count).map_err(|e| format!("trace 2: {e}"))?;
    let mut t2d = t2.clone();
    t2d.push("d");
    let mut even = head.to_vec();
    even.extend([("1:e", "1:e", 1, 2), ("1:e", "1:d", 1, 2)]);
    let longer = running_monitor(&t2d);
    check_edges(&longer, &even).map_err(|e| format!("trace 2 + d: {e}"))?;
    ensure(longer.confidence().m == Some(3), || "trace 2 + d: m changed".into())?;
    check_edges(
        &running_monitor(&t3),
        &[
            ("0:a", "0:b", 1, 1),
            ("0:b", "1:c", 1, 1),
            ("1:c", "0:f", 1, 1),
            ("0:f", "1:f", 1, 2),
            ("0:f", "1:g", 1, 2),
            ("1:f", "1:f", 2, 3),
            ("1:f", "1:g", 1, 3),
            ("1:g", "0:f", 1, 1),
        ],
    )
    .map_err(|e| format!("trace 3: {e}"))?;
    Ok("verdicts F,T,F; m 1,3,2; gamma 10/9, 1000/729, 100/81; e-row of the second chain 3/5,2/5 (1/2,1/2 after one more d)".into())
}

/// No random chain on the induced chain's edges explains the trace better.
pub fn ml_optimality(cases: &[Case], competitors: usize) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst = f64::NEG_INFINITY;
    for (i, case) in cases.iter().enumerate() {
        let ids = case.ids();
        let induced = case.monitor.induced_chain(|s| format!("s{s}")).map_err(|e| e.to_string())?;
        let best = log_likelihood(&induced.chain, &ids);
        for _ in 0..competitors {
            let other = competitor(&induced.chain, &mut rng);
            let l = log_likelihood(&other, &ids);
            worst = worst.max(l - best);
            ensure(l <= best + 1e-9, || format!("trace {i}: competitor {l} > induced {best}"))?;
        }
        // A chain missing a trace transition cannot produce the trace.
        if let Some((a, b)) = ids.windows(2).map(|w| (w[0], w[1])).next() {
            let mut broken = induced.chain.clone();
            broken = drop_edge(&broken, a, b);
            ensure(log_likelihood(&broken, &ids) == f64::NEG_INFINITY, || format!("trace {i}: dropped edge"))?;
        }
    }
    Ok(format!(
        "{} traces x {competitors} competitors, max log-ratio {:.3e}",
        cases.len(),
        worst
    ))
}

fn drop_edge(c: &ltlmon::markov::MarkovChain, a: usize, b: usize) -> ltlmon::markov::MarkovChain {
    let mut out = ltlmon::markov::MarkovChain::new();
    for s in 0..c.num_states() {
        out.add_state(c.name(s), &[]).unwrap();
    }
    for (s, p) in c.initial() {
        out.set_initial(*s, p.clone()).unwrap();
    }
    for s in 0..c.num_states() {
        for t in c.row(s) {
            if (s, t.to) != (a, b) {
                out.add_transition(s, t.to, t.prob.clone()).unwrap();
            }
        }
    }
    out
}

/// Exactly one SCC of every corpus trace graph is bottom.
pub fn unique_bottom_scc(cases: &[Case]) -> Outcome {
    for (i, case) in cases.iter().enumerate() {
        let induced = case.monitor.induced_chain(|s| format!("s{s}")).map_err(|e| e.to_string())?;
        let d = induced.scc_decompose();
        let bottoms = d.bottom.iter().filter(|&&b| b).count();
        ensure(bottoms == 1, || format!("trace {i}: {bottoms} bottom SCCs"))?;
        ensure(d.components.len() == case.monitor.num_sccs(), || format!("trace {i}: SCC count"))?;
    }
    Ok(format!("{} traces", cases.len()))
}

/// The induced chain accepts from the last state with probability 0 or 1,
/// and 1 exactly for verdict true.
pub fn zero_one(cases: &[Case]) -> Outcome {
    let (mut ones, mut zeros) = (0, 0);
    for (i, case) in cases.iter().enumerate() {
        let induced = case.monitor.induced_chain(|s| format!("s{s}")).map_err(|e| e.to_string())?;
        let p = verdict_probability(&induced, &case.ids()).map_err(|e| e.to_string())?;
        let v = case.monitor.verdict();
        if p.is_one() {
            ones += 1;
            ensure(v == Verdict::True, || format!("trace {i}: probability 1, verdict {v}"))?;
        } else if p.is_zero() {
            zeros += 1;
            ensure(v == Verdict::False, || format!("trace {i}: probability 0, verdict {v}"))?;
        } else {
            return Err(format!("trace {i}: probability {p}"));
        }
    }
    Ok(format!("{ones} traces with probability 1, {zeros} with 0"))
}

/// Moving `p_min` of the least-exited bottom state to a rejecting sink
/// lowers the likelihood by exactly `γ`.
pub fn escape_tightness(cases: &[Case]) -> Outcome {
    let (mut checked, mut certain) = (0, 0);
    let mut worst = 0.0f64;
    for (i, case) in cases.iter().enumerate() {
        let mon = &case.monitor;
        let conf = mon.confidence();
        if conf.kind == ConfidenceKind::Certain {
            certain += 1;
            continue;
        }
        let m = conf.m.ok_or_else(|| format!("trace {i}: no m"))?;
        let target = mon
            .bottom_scc()
            .into_iter()
            .min_by_key(|&r| mon.exit_count(r))
            .ok_or_else(|| format!("trace {i}: empty bottom SCC"))?;
        ensure(mon.exit_count(target) == m, || format!("trace {i}: m mismatch"))?;
        let induced = mon.induced_chain(|s| format!("s{s}")).map_err(|e| e.to_string())?;
        let t = mon.state_id(target.0, target.1).unwrap();
        let pmin = super::pmin();
        let esc = escape_chain(&induced, t, pmin.value()).map_err(|e| e.to_string())?;
        let ids = case.ids();
        let ratio = likelihood(&induced.chain, &ids) / likelihood(&esc.chain, &ids);
        let gamma = mon.gamma().unwrap();
        ensure(ratio == gamma, || format!("trace {i}: ratio {ratio} vs gamma {gamma}"))?;
        let lr = log_likelihood(&induced.chain, &ids) - log_likelihood(&esc.chain, &ids);
        let rel = (lr.exp() / gamma.to_f64().unwrap() - 1.0).abs();
        worst = worst.max(rel);
        ensure(rel <= 1e-12, || format!("trace {i}: relative error {rel}"))?;
        let p = verdict_probability(&esc, &ids).map_err(|e| e.to_string())?;
        ensure(p.is_zero(), || format!("trace {i}: escape chain accepts with {p}"))?;
        checked += 1;
    }
    Ok(format!(
        "{checked} traces exact, max float relative error {worst:.1e}, {certain} with certain verdicts skipped"
    ))
}

/// Runs of the running example: both monitors reach `m ≥ 100`, and after
/// the run has entered its bottom SCC and visited all of it the two
/// monitors agree on the verdict at every step.
pub fn divergence_and_agreement(runs: u64, len: usize) -> Outcome {
    let chain = samples::running_example_chain();
    let prop = Arc::new(Property::new(samples::persistence_dra()));
    let pc = product(prop.dra(), &chain);
    let dec = pc.scc_decompose();
    let sampler = Sampler::new(&chain).unwrap();
    let pmin = PMin::new(rat(1, 10)).unwrap();
    let letters: Vec<_> = (0..chain.num_states()).map(|s| chain.letter(s, prop.dra().alphabet())).collect();
    let (mut full_ok, mut online_ok) = (0u64, 0u64);
    let mut latest_cover = 0usize;
    for run in 0..runs {
        let mut rng = ChaCha8Rng::seed_from_u64(run);
        let trace = sampler.run(len, &mut rng);
        let mut full = Monitor::new(prop.clone(), pmin.clone());
        let mut lean = OnlineMonitor::new(prop.clone(), pmin.clone());
        let mut entered: Option<usize> = None;
        let mut seen = std::collections::BTreeSet::new();
        let mut covered = false;
        for (i, &s) in trace.iter().enumerate() {
            full.observe(s, letters[s]);
            lean.observe(s, letters[s]);
            let (q, _) = full.current().unwrap();
            let r = pc.state_of(q, s).unwrap();
            let comp = dec.component_of[r];
            if entered.is_none() && dec.bottom[comp] {
                entered = Some(comp);
            }
            if let Some(b) = entered {
                if !covered {
                    seen.insert(r);
                    if seen.len() == dec.components[b].len() {
                        covered = true;
                        latest_cover = latest_cover.max(i);
                    }
                } else {
                    ensure(full.verdict() == lean.verdict(), || {
                        format!("run {run} step {i}: {} vs {}", full.verdict(), lean.verdict())
                    })?;
                    ensure(full.verdict() != Verdict::Unknown, || format!("run {run} step {i}: unknown"))?;
                }
            }
            // Visit counts never exceed exit counts, so once both monitors
            // look at the same SCC the online bound is the smaller one.
            // Before that the online SCC can be a proper part of the full
            // one and have a larger minimum.
            let (mf, ml) = (full.confidence().m, lean.confidence().m);
            if let (Some(a), Some(b), true) = (mf, ml, lean.last_scc() == full.bottom_scc()) {
                ensure(b <= a, || format!("run {run} step {i}: online m {b} > full m {a}"))?;
            }
        }
        full_ok += (full.confidence().m.unwrap_or(0) >= 100) as u64;
        online_ok += (lean.confidence().m.unwrap_or(0) >= 100) as u64;
    }
    let need = (runs * 99).div_ceil(100);
    ensure(full_ok >= need && online_ok >= need, || {
        format!("m >= 100 in {full_ok} (full) and {online_ok} (online) of {runs} runs")
    })?;
    Ok(format!(
        "m >= 100 in {full_ok}/{runs} (full) and {online_ok}/{runs} (online) runs; agreement from coverage (latest step {latest_cover})"
    ))
}

pub fn standard_corpus() -> Vec<Case> {
    corpus(2024, 200)
}
