//! The estimation experiment: a family of chains with two bottom SCCs and
//! two ways of spending a step budget to estimate the probability that a run
//! satisfies `G F acc`.

use std::fmt::{self, Write};
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::alphabet::Letter;
use crate::automata::{ltl_to_dra, AutomatonError, DEFAULT_STATE_CAP};
use crate::ltl::parse_ltl;
use crate::markov::{MarkovChain, Prob, Sampler};
use crate::monitor::{ConfidenceKind, Monitor, PMin, Property, Verdict};

/// The monitored property of the family.
pub const FAMILY_FORMULA: &str = "G F acc";

/// Parameters of the chain family.
///
/// A walk `a_{-l} … a_{r_len}` starts at `a_0` and moves left with
/// probability `p`. Leaving on the left enters the ladder `b_0 … b_n`, which
/// climbs with probability `q`; leaving on the right enters `c_0 … c_m`,
/// which advances with probability `s`, falls back to `c_0` otherwise, and
/// is absorbed at `c_m`. `acc` holds on `b_0` and `c_0 … c_{m-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyParams {
    pub l: usize,
    pub r_len: usize,
    pub m: usize,
    pub n: usize,
    pub p: Prob,
    pub q: Prob,
    pub s: Prob,
}

fn ratio(n: i64, d: i64) -> Prob {
    Prob::new(n.into(), d.into())
}

impl FamilyParams {
    /// `l = 4, r_len = 6, m = 4, p = 0.5, q = 0.45, s = 0.08`.
    pub fn standard(n: usize) -> Self {
        FamilyParams {
            l: 4,
            r_len: 6,
            m: 4,
            n,
            p: ratio(1, 2),
            q: ratio(9, 20),
            s: ratio(2, 25),
        }
    }

    pub fn check(&self) -> Result<(), String> {
        for (name, v) in [("p", &self.p), ("q", &self.q), ("s", &self.s)] {
            if *v <= ratio(0, 1) || *v >= ratio(1, 1) {
                return Err(format!("{name} must lie strictly between 0 and 1"));
            }
        }
        for (name, v) in [("l", self.l), ("r_len", self.r_len), ("m", self.m), ("n", self.n)] {
            if v == 0 {
                return Err(format!("{name} must be at least 1"));
            }
        }
        Ok(())
    }

    /// Smallest positive transition probability of the family.
    pub fn p_min(&self) -> Prob {
        let one = ratio(1, 1);
        [&self.p, &self.q, &self.s]
            .into_iter()
            .flat_map(|v| [v.clone(), &one - v])
            .min()
            .expect("nonempty")
    }

    /// Exit-left probability of the walk: `(r_len + 1) / (l + r_len + 2)`
    /// for `p = 1/2`, general gambler's ruin otherwise.
    pub fn left_exit_probability(&self) -> Prob {
        // Positions 0..=N with N = l + r_len + 2; start at l + 1; absorbed
        // left at 0.
        let n = (self.l + self.r_len + 2) as i64;
        let k = (self.l + 1) as i64;
        if self.p == ratio(1, 2) {
            return ratio(n - k, n);
        }
        let rho = &self.p / (ratio(1, 1) - &self.p);
        let pw = |e: i64| num_traits::pow(rho.clone(), e as usize);
        // P(hit 0 before N from k) with left-step probability p.
        (pw(k) - pw(n)) / (ratio(1, 1) - pw(n))
    }
}

fn a_name(i: i64) -> String {
    format!("a{i}")
}

/// Builds the family chain; initial state `a0`.
pub fn build_family(fp: &FamilyParams) -> Result<MarkovChain, String> {
    fp.check()?;
    let one = ratio(1, 1);
    let (l, r) = (fp.l as i64, fp.r_len as i64);
    let mut c = MarkovChain::new();
    for i in -l..=r {
        c.add_state(&a_name(i), &[])?;
    }
    for i in 0..=fp.n {
        c.add_state(&format!("b{i}"), if i == 0 { &["acc"] } else { &[] })?;
    }
    for i in 0..=fp.m {
        c.add_state(&format!("c{i}"), if i < fp.m { &["acc"] } else { &[] })?;
    }
    let id = |c: &MarkovChain, n: &str| c.state(n).expect("declared");
    c.set_initial(id(&c, "a0"), one.clone())?;
    let (p, q, s) = (&fp.p, &fp.q, &fp.s);
    for i in -l..=r {
        let here = id(&c, &a_name(i));
        let left = if i == -l { "b0".to_string() } else { a_name(i - 1) };
        let right = if i == r { "c0".to_string() } else { a_name(i + 1) };
        let (lt, rt) = (id(&c, &left), id(&c, &right));
        c.add_transition(here, lt, p.clone())?;
        c.add_transition(here, rt, &one - p)?;
    }
    let b = |c: &MarkovChain, i: usize| id(c, &format!("b{i}"));
    for i in 0..=fp.n {
        let here = b(&c, i);
        let down = if i == 0 { here } else { b(&c, i - 1) };
        let up = if i == fp.n { here } else { b(&c, i + 1) };
        c.add_transition(here, down, &one - q)?;
        c.add_transition(here, up, q.clone())?;
    }
    let cc = |c: &MarkovChain, i: usize| id(c, &format!("c{i}"));
    for i in 0..fp.m {
        let (here, next, zero) = (cc(&c, i), cc(&c, i + 1), cc(&c, 0));
        c.add_transition(here, zero, &one - s)?;
        c.add_transition(here, next, s.clone())?;
    }
    let last = cc(&c, fp.m);
    c.add_transition(last, last, one)?;
    Ok(c)
}

/// A chain, a property and what is needed to sample and monitor runs.
#[derive(Clone, Debug)]
pub struct Setup {
    pub chain: MarkovChain,
    pub property: Arc<Property>,
    pub pmin: PMin,
    sampler: Sampler,
    letters: Vec<Letter>,
}

impl Setup {
    pub fn new(chain: MarkovChain, property: Arc<Property>, pmin: PMin) -> Result<Setup, String> {
        let sampler = Sampler::new(&chain)?;
        let letters = (0..chain.num_states())
            .map(|s| chain.letter(s, property.dra().alphabet()))
            .collect();
        Ok(Setup {
            chain,
            property,
            pmin,
            sampler,
            letters,
        })
    }

    /// The family chain with `G F acc` and `p_min` set to the family's
    /// smallest transition probability unless overridden.
    pub fn family(fp: &FamilyParams, pmin: Option<Prob>) -> Result<Setup, String> {
        let chain = build_family(fp)?;
        let f = parse_ltl(FAMILY_FORMULA).expect("fixed formula");
        let dra = ltl_to_dra(&f, &[], DEFAULT_STATE_CAP).map_err(|e: AutomatonError| e.to_string())?;
        let pmin = PMin::new(pmin.unwrap_or_else(|| fp.p_min()))?;
        Setup::new(chain, Arc::new(Property::new(dra)), pmin)
    }

    pub fn monitor(&self) -> Monitor {
        Monitor::new(self.property.clone(), self.pmin.clone())
    }

    pub fn letter(&self, s: usize) -> Letter {
        self.letters[s]
    }

    pub fn sampler(&self) -> &Sampler {
        &self.sampler
    }
}

/// Generator of run `run` under `seed`: ChaCha8 seeded by `seed`, on
/// stream `run`.
pub fn run_rng(seed: u64, run: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(run);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    FixedLength,
    ConfidenceBased,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::FixedLength => "fixed_length",
            Method::ConfidenceBased => "confidence_based",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EstimatorReport {
    pub method: Method,
    pub n: usize,
    pub quota: u64,
    pub seed: u64,
    /// Fraction of classified runs with verdict true; NaN if none was.
    pub estimate: f64,
    pub runs_used: usize,
    pub steps_used: u64,
    /// The confidence-based estimator could not complete a single run.
    pub exhausted: bool,
}

/// Fixed-length estimation for several quotas at once: `runs` runs, each
/// monitored for `quota / runs` steps; Unknown counts as not true. Runs are
/// shared between quotas, so a larger quota extends the same runs.
pub fn fixed_length_estimates(
    setup: &Setup,
    n: usize,
    runs: usize,
    quotas: &[u64],
    seed: u64,
) -> Vec<EstimatorReport> {
    let lens: Vec<u64> = quotas.iter().map(|&k| k / runs.max(1) as u64).collect();
    let max_len = lens.iter().copied().max().unwrap_or(0);
    let mut trues = vec![0usize; quotas.len()];
    for run in 0..runs {
        let mut rng = run_rng(seed, run as u64);
        let mut mon = setup.monitor();
        let mut s = 0;
        // Verdict after each required prefix length.
        let check = |len: u64, mon: &Monitor, trues: &mut [usize]| {
            for (i, &l) in lens.iter().enumerate() {
                if l == len && mon.verdict() == Verdict::True {
                    trues[i] += 1;
                }
            }
        };
        for step in 0..max_len {
            s = if step == 0 {
                setup.sampler().initial(&mut rng)
            } else {
                setup.sampler().step(s, &mut rng)
            };
            mon.observe(s, setup.letter(s));
            check(step + 1, &mon, &mut trues);
        }
    }
    quotas
        .iter()
        .zip(&lens)
        .zip(&trues)
        .map(|((&quota, &len), &t)| EstimatorReport {
            method: Method::FixedLength,
            n,
            quota,
            seed,
            estimate: if runs == 0 { f64::NAN } else { t as f64 / runs as f64 },
            runs_used: runs,
            steps_used: len * runs as u64,
            exhausted: false,
        })
        .collect()
}

/// Outcome of one confidence-based run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOutcome {
    pub steps: u64,
    /// `None` if the run hit the step cap before reaching the threshold.
    pub verdict: Option<Verdict>,
}

/// Monitors run `run` until its confidence reaches `threshold` or `cap`
/// steps have been taken. Open traces never qualify.
pub fn confidence_run(setup: &Setup, seed: u64, run: u64, threshold: f64, cap: u64) -> RunOutcome {
    let ln_threshold = threshold.ln();
    let mut rng = run_rng(seed, run);
    let mut mon = setup.monitor();
    let mut s = 0;
    for step in 0..cap {
        s = if step == 0 {
            setup.sampler().initial(&mut rng)
        } else {
            setup.sampler().step(s, &mut rng)
        };
        mon.observe(s, setup.letter(s));
        let c = mon.confidence();
        let done = match c.kind {
            ConfidenceKind::Certain => true,
            ConfidenceKind::Finite => c.log_gamma >= ln_threshold,
            ConfidenceKind::Open => false,
        };
        if done {
            return RunOutcome {
                steps: step + 1,
                verdict: Some(mon.verdict()),
            };
        }
    }
    RunOutcome {
        steps: cap,
        verdict: None,
    }
}

/// Confidence-based estimation for several quotas at once. Of at most
/// `runs` runs, they are taken in order until the total number of steps
/// reaches the quota; the run that crosses it is completed and counted. A
/// single run is abandoned after `2 · max(quota) + 10⁶` steps.
pub fn confidence_based_estimates(
    setup: &Setup,
    n: usize,
    runs: usize,
    quotas: &[u64],
    threshold: f64,
    seed: u64,
) -> Vec<EstimatorReport> {
    let max_quota = quotas.iter().copied().max().unwrap_or(0);
    let cap = 2 * max_quota + 1_000_000;
    let mut outcomes = Vec::new();
    let mut total = 0u64;
    while total < max_quota && outcomes.len() < runs {
        let o = confidence_run(setup, seed, outcomes.len() as u64, threshold, cap);
        total += o.steps;
        outcomes.push(o);
    }
    quotas
        .iter()
        .map(|&quota| {
            let (mut used, mut steps, mut trues) = (0usize, 0u64, 0usize);
            for o in &outcomes {
                if steps >= quota {
                    break;
                }
                steps += o.steps;
                if let Some(v) = o.verdict {
                    used += 1;
                    trues += usize::from(v == Verdict::True);
                }
            }
            EstimatorReport {
                method: Method::ConfidenceBased,
                n,
                quota,
                seed,
                estimate: if used == 0 { f64::NAN } else { trues as f64 / used as f64 },
                runs_used: used,
                steps_used: steps,
                exhausted: used == 0,
            }
        })
        .collect()
}

/// Settings of a full experiment.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub base: FamilyParams,
    pub ns: Vec<usize>,
    pub quotas: Vec<u64>,
    pub seeds: Vec<u64>,
    pub runs: usize,
    pub threshold: f64,
    /// Overrides the family's smallest transition probability.
    pub pmin: Option<Prob>,
}

/// Runs both estimators for every `n`, quota and seed. Rows are ordered by
/// method, `n`, quota and seed, independent of scheduling.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<EstimatorReport>, String> {
    let setups = cfg
        .ns
        .iter()
        .map(|&n| {
            let fp = FamilyParams { n, ..cfg.base.clone() };
            Setup::family(&fp, cfg.pmin.clone())
        })
        .collect::<Result<Vec<_>, _>>()?;
    if cfg.quotas.is_empty() {
        return Ok(Vec::new());
    }
    let jobs: Vec<(usize, u64, Method)> = (0..cfg.ns.len())
        .flat_map(|i| {
            cfg.seeds
                .iter()
                .flat_map(move |&s| [(i, s, Method::FixedLength), (i, s, Method::ConfidenceBased)])
        })
        .collect();
    let mut rows: Vec<EstimatorReport> = jobs
        .par_iter()
        .flat_map_iter(|&(i, seed, method)| {
            let (setup, n) = (&setups[i], cfg.ns[i]);
            match method {
                Method::FixedLength => fixed_length_estimates(setup, n, cfg.runs, &cfg.quotas, seed),
                Method::ConfidenceBased => {
                    confidence_based_estimates(setup, n, cfg.runs, &cfg.quotas, cfg.threshold, seed)
                }
            }
        })
        .collect();
    let n_pos = |n: usize| cfg.ns.iter().position(|&x| x == n).unwrap_or(usize::MAX);
    let q_pos = |q: u64| cfg.quotas.iter().position(|&x| x == q).unwrap_or(usize::MAX);
    let s_pos = |s: u64| cfg.seeds.iter().position(|&x| x == s).unwrap_or(usize::MAX);
    rows.sort_by_key(|r| (r.method, n_pos(r.n), q_pos(r.quota), s_pos(r.seed)));
    Ok(rows)
}

pub const CSV_HEADER: &str = "method,n,quota,seed,estimate,runs_used,steps_used";

pub fn to_csv(rows: &[EstimatorReport]) -> String {
    let mut s = String::new();
    writeln!(s, "{CSV_HEADER}").unwrap();
    for r in rows {
        writeln!(
            s,
            "{},{},{},{},{:.6},{},{}",
            r.method, r.n, r.quota, r.seed, r.estimate, r.runs_used, r.steps_used
        )
        .unwrap();
    }
    s
}
