//! The full-memory monitor: verdict from the maximum-likelihood chain
//! induced by the trace, confidence from the likelihood-ratio bound.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::alphabet::Letter;
use crate::automata::{PairMarks, RabinAutomaton, StateClass};
use crate::markov::{MarkovChain, Prob, ProductChain, ESCAPE_STATE};
use crate::scc_stack::SccStack;

/// A property as seen by the monitors: a Rabin automaton with its state
/// classification and per-state pair memberships.
#[derive(Clone, Debug)]
pub struct Property {
    dra: RabinAutomaton,
    classes: Vec<StateClass>,
    marks: Vec<PairMarks>,
}

impl Property {
    pub fn new(dra: RabinAutomaton) -> Self {
        let classes = dra.classify_states();
        let marks = dra.pair_marks();
        Property { dra, classes, marks }
    }

    pub fn dra(&self) -> &RabinAutomaton {
        &self.dra
    }

    pub fn class(&self, q: usize) -> StateClass {
        self.classes[q]
    }

    pub fn marks(&self, q: usize) -> &PairMarks {
        &self.marks[q]
    }

    pub fn num_pairs(&self) -> usize {
        self.dra.pairs().len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    True,
    False,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::True => "true",
            Verdict::False => "false",
            Verdict::Unknown => "?",
        })
    }
}

/// Why a confidence value is what it is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConfidenceKind {
    /// Closed trace in a state that is neither empty nor universal.
    Finite,
    /// The automaton state is empty or universal: the verdict cannot change.
    Certain,
    /// The trace is open. The bound is infinite by convention, but it
    /// expresses confidence in not knowing.
    Open,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Confidence {
    /// Minimum exit count over the trace's bottom SCC (closed traces only).
    pub m: Option<u64>,
    /// `ln γ`, possibly `+∞`.
    pub log_gamma: f64,
    pub kind: ConfidenceKind,
}

impl Confidence {
    fn infinite(kind: ConfidenceKind) -> Self {
        Confidence {
            m: None,
            log_gamma: f64::INFINITY,
            kind,
        }
    }
}

/// The assumed lower bound on positive transition probabilities.
#[derive(Clone, Debug, PartialEq)]
pub struct PMin {
    value: Prob,
    /// `ln(1 / (1 - p_min))`.
    log_factor: f64,
}

impl PMin {
    pub fn new(value: Prob) -> Result<PMin, String> {
        if !value.is_positive() || value > Prob::one() {
            return Err(format!(
                "p_min must lie in (0, 1], got {}",
                crate::markov::format_prob(&value)
            ));
        }
        let p: f64 = num_traits::ToPrimitive::to_f64(&value).unwrap_or(f64::NAN);
        let log_factor = if value.is_one() {
            f64::INFINITY
        } else {
            -(-p).ln_1p()
        };
        Ok(PMin { value, log_factor })
    }

    pub fn value(&self) -> &Prob {
        &self.value
    }

    pub fn log_factor(&self) -> f64 {
        self.log_factor
    }

    /// `m · ln(1/(1-p_min))`, with `0 · ∞ = 0`.
    pub fn log_gamma(&self, m: u64) -> f64 {
        if m == 0 {
            0.0
        } else {
            m as f64 * self.log_factor
        }
    }

    /// `(1/(1-p_min))^m` exactly; `None` when `p_min = 1` and `m > 0`.
    pub fn gamma(&self, m: u64) -> Option<Prob> {
        if m == 0 {
            return Some(Prob::one());
        }
        if self.value.is_one() {
            return None;
        }
        let base = (Prob::one() - &self.value).recip();
        Some(num_traits::pow(base, m as usize))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MonitorError {
    #[error("the trace is open")]
    OpenTrace,
    #[error("the trace is empty")]
    EmptyTrace,
    #[error("the trace has likelihood zero under the chain")]
    ZeroLikelihood,
    #[error("state {0} is not in the bottom SCC")]
    NotInBottomScc(usize),
    #[error("escape probability must lie in (0, 1)")]
    BadEscapeProbability,
}

/// Dense map from product states to ids, indexed by automaton state and
/// then system state.
#[derive(Clone, Debug, Default)]
pub(crate) struct StateIndex {
    table: Vec<Vec<usize>>,
}

impl StateIndex {
    const NONE: usize = usize::MAX;

    pub fn get(&self, (q, s): (usize, usize)) -> Option<usize> {
        let id = *self.table.get(q)?.get(s)?;
        (id != Self::NONE).then_some(id)
    }

    pub fn insert(&mut self, (q, s): (usize, usize), id: usize) {
        if self.table.len() <= q {
            self.table.resize(q + 1, Vec::new());
        }
        let row = &mut self.table[q];
        if row.len() <= s {
            row.resize(s + 1, Self::NONE);
        }
        row[s] = id;
    }
}

/// Monitor state for one observed stream.
///
/// System states are fed as dense indices together with their letter; the
/// automaton component is computed along the way.
#[derive(Clone, Debug)]
pub struct Monitor {
    prop: Arc<Property>,
    pmin: PMin,
    ids: StateIndex,
    states: Vec<(usize, usize)>,
    /// Observed transitions with multiplicities, per source state.
    succ: Vec<Vec<(usize, u64)>>,
    stack: SccStack,
    current: Option<usize>,
    next_q: usize,
    len: u64,
}

impl Monitor {
    pub fn new(prop: Arc<Property>, pmin: PMin) -> Self {
        let next_q = prop.dra().initial();
        let stack = SccStack::new(prop.num_pairs());
        Monitor {
            prop,
            pmin,
            ids: StateIndex::default(),
            states: Vec::new(),
            succ: Vec::new(),
            stack,
            current: None,
            next_q,
            len: 0,
        }
    }

    pub fn property(&self) -> &Property {
        &self.prop
    }

    /// Appends system state `s`, whose label is `letter`.
    pub fn observe(&mut self, s: usize, letter: Letter) {
        let key = (self.next_q, s);
        self.next_q = self.prop.dra().step(self.next_q, letter);
        if let Some(prev) = self.current {
            self.stack.increment(prev);
        }
        let id = match self.ids.get(key) {
            Some(id) => {
                self.stack.merge_from(id);
                id
            }
            None => {
                let id = self.stack.push(self.prop.marks(key.0));
                debug_assert_eq!(id, self.states.len());
                self.ids.insert(key, id);
                self.states.push(key);
                self.succ.push(Vec::new());
                id
            }
        };
        if let Some(prev) = self.current {
            match self.succ[prev].iter_mut().find(|e| e.0 == id) {
                Some(e) => e.1 += 1,
                None => self.succ[prev].push((id, 1)),
            }
        }
        self.current = Some(id);
        self.len += 1;
    }

    /// Number of observed states.
    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Whether the last state occurred earlier in the trace.
    pub fn is_closed(&self) -> bool {
        self.current.is_some_and(|c| self.stack.count(c) > 0)
    }

    /// The last product state `(q, s)`.
    pub fn current(&self) -> Option<(usize, usize)> {
        self.current.map(|c| self.states[c])
    }

    /// Dense id of a product state, in order of first occurrence.
    pub fn state_id(&self, q: usize, s: usize) -> Option<usize> {
        self.ids.get((q, s))
    }

    /// Product states in order of first occurrence.
    pub fn states(&self) -> &[(usize, usize)] {
        &self.states
    }

    /// Occurrences of `r` in `r_0 … r_{n-1}`.
    pub fn exit_count(&self, r: (usize, usize)) -> u64 {
        self.state_id(r.0, r.1).map_or(0, |id| self.stack.count(id))
    }

    /// Occurrences of the step `r → r'`.
    pub fn transition_count(&self, r: (usize, usize), r2: (usize, usize)) -> u64 {
        let (Some(a), Some(b)) = (self.state_id(r.0, r.1), self.state_id(r2.0, r2.1)) else {
            return 0;
        };
        self.succ[a].iter().find(|e| e.0 == b).map_or(0, |e| e.1)
    }

    /// Members of the last SCC of the trace graph.
    pub fn bottom_scc(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<_> = self
            .stack
            .top_members()
            .iter()
            .map(|&i| self.states[i])
            .collect();
        v.sort_unstable();
        v
    }

    /// Number of SCCs of the trace graph.
    pub fn num_sccs(&self) -> usize {
        self.stack.len()
    }

    pub fn verdict(&self) -> Verdict {
        let Some((q, _)) = self.current() else {
            return Verdict::Unknown;
        };
        match self.prop.class(q) {
            StateClass::Universal => Verdict::True,
            StateClass::Empty => Verdict::False,
            StateClass::Other if !self.is_closed() => Verdict::Unknown,
            StateClass::Other if self.stack.top_good() => Verdict::True,
            StateClass::Other => Verdict::False,
        }
    }

    pub fn confidence(&self) -> Confidence {
        let Some((q, _)) = self.current() else {
            return Confidence::infinite(ConfidenceKind::Open);
        };
        if self.prop.class(q) != StateClass::Other {
            return Confidence::infinite(ConfidenceKind::Certain);
        }
        if !self.is_closed() {
            return Confidence::infinite(ConfidenceKind::Open);
        }
        let m = self.stack.top_min().expect("nonempty trace");
        Confidence {
            m: Some(m),
            log_gamma: self.pmin.log_gamma(m),
            kind: ConfidenceKind::Finite,
        }
    }

    /// Exact `γ` for a finite confidence.
    pub fn gamma(&self) -> Option<Prob> {
        self.confidence().m.and_then(|m| self.pmin.gamma(m))
    }

    /// The chain induced by the trace, as a product chain whose states are
    /// numbered by first occurrence and named `q:name(s)`.
    pub fn induced_chain(&self, name: impl Fn(usize) -> String) -> Result<ProductChain, MonitorError> {
        if !self.is_closed() {
            return Err(MonitorError::OpenTrace);
        }
        let mut c = MarkovChain::new();
        for &(q, s) in &self.states {
            let m = self.prop.marks(q);
            let props: Vec<String> = m
                .inf
                .iter()
                .map(|i| format!("@inf{i}"))
                .chain(m.fin.iter().map(|i| format!("@fin{i}")))
                .collect();
            let props: Vec<&str> = props.iter().map(String::as_str).collect();
            c.add_state(&format!("{q}:{}", name(s)), &props)
                .expect("distinct product states");
        }
        c.set_initial(0, Prob::one()).expect("first state");
        for (r, row) in self.succ.iter().enumerate() {
            let total = self.stack.count(r);
            for &(t, k) in row {
                c.add_transition(r, t, Prob::new(k.into(), total.into()))
                    .expect("distinct successors");
            }
        }
        let marks = self.states.iter().map(|&(q, _)| self.prop.marks(q).clone()).collect();
        let origin = self.states.iter().map(|&k| Some(k)).collect();
        Ok(ProductChain::from_parts(c, origin, marks, self.prop.num_pairs()))
    }
}

/// One TSV line: step, verdict, `m` (or `-`), `ln γ` (or `inf`).
pub fn format_step(step: u64, v: Verdict, c: &Confidence) -> String {
    let m = c.m.map_or_else(|| "-".to_string(), |m| m.to_string());
    let g = if c.log_gamma.is_infinite() {
        "inf".to_string()
    } else {
        format!("{:.6}", c.log_gamma)
    };
    format!("{step}\t{v}\t{m}\t{g}")
}

/// The product states visited by a system trace.
pub fn product_trace(dra: &RabinAutomaton, c: &MarkovChain, trace: &[usize]) -> Vec<(usize, usize)> {
    let mut q = dra.initial();
    trace
        .iter()
        .map(|&s| {
            let r = (q, s);
            q = dra.step(q, c.letter(s, dra.alphabet()));
            r
        })
        .collect()
}

/// `ln(μ(r_0) · Π P(r_{i-1}, r_i))`, or `-∞` if some factor is zero.
pub fn log_likelihood(c: &MarkovChain, trace: &[usize]) -> f64 {
    let Some(&first) = trace.first() else {
        return 0.0;
    };
    let init = c
        .initial()
        .iter()
        .find(|(s, _)| *s == first)
        .map_or(0.0, |(_, p)| num_traits::ToPrimitive::to_f64(p).unwrap_or(0.0));
    let mut l = init.ln();
    for w in trace.windows(2) {
        let p = c.row(w[0]).iter().find(|t| t.to == w[1]).map_or(0.0, |t| t.p);
        l += p.ln();
    }
    l
}

/// Exact likelihood of a trace.
pub fn likelihood(c: &MarkovChain, trace: &[usize]) -> Prob {
    let Some(&first) = trace.first() else {
        return Prob::one();
    };
    let mut l = c
        .initial()
        .iter()
        .find(|(s, _)| *s == first)
        .map_or_else(Prob::zero, |(_, p)| p.clone());
    for w in trace.windows(2) {
        match c.prob(w[0], w[1]) {
            Some(p) => l *= p,
            None => return Prob::zero(),
        }
    }
    l
}

/// Adds a fresh absorbing escape state without pair memberships, reached
/// from `target` with probability `esc`; the rest of `target`'s row is
/// scaled by `1 - esc`. `target` must lie in a bottom SCC.
pub fn escape_chain(pc: &ProductChain, target: usize, esc: &Prob) -> Result<ProductChain, MonitorError> {
    if !esc.is_positive() || esc >= &Prob::one() {
        return Err(MonitorError::BadEscapeProbability);
    }
    let dec = pc.scc_decompose();
    if !dec.bottom[dec.component_of[target]] {
        return Err(MonitorError::NotInBottomScc(target));
    }
    let src = &pc.chain;
    let mut c = MarkovChain::new();
    for s in 0..src.num_states() {
        let labels: Vec<&str> = src.labels(s).iter().map(String::as_str).collect();
        c.add_state(src.name(s), &labels).expect("distinct names");
    }
    let e = c.add_state(ESCAPE_STATE, &[]).map_err(|_| MonitorError::BadEscapeProbability)?;
    for (s, p) in src.initial() {
        c.set_initial(*s, p.clone()).expect("distinct initial states");
    }
    let keep = Prob::one() - esc;
    for s in 0..src.num_states() {
        for t in src.row(s) {
            let p = if s == target { &t.prob * &keep } else { t.prob.clone() };
            c.add_transition(s, t.to, p).expect("distinct successors");
        }
    }
    c.add_transition(target, e, esc.clone()).expect("fresh state");
    c.add_transition(e, e, Prob::one()).expect("fresh state");
    let mut origin = pc.origin.clone();
    origin.push(None);
    let mut marks = pc.marks.clone();
    marks.push(PairMarks::default());
    Ok(ProductChain::from_parts(c, origin, marks, pc.num_pairs))
}

/// Probability that a run of `pc` extending `trace` is accepted: the
/// probability of reaching a good bottom SCC from the last state.
pub fn verdict_probability(pc: &ProductChain, trace: &[usize]) -> Result<Prob, MonitorError> {
    let &last = trace.last().ok_or(MonitorError::EmptyTrace)?;
    if likelihood(&pc.chain, trace).is_zero() {
        return Err(MonitorError::ZeroLikelihood);
    }
    Ok(pc.state_probabilities().swap_remove(last))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    fn r(n: i64, d: i64) -> Prob {
        Prob::new(n.into(), d.into())
    }

    fn run(trace: &[&str]) -> (Monitor, MarkovChain) {
        let c = samples::running_example_chain();
        let prop = Arc::new(Property::new(samples::persistence_dra()));
        let mut m = Monitor::new(prop.clone(), PMin::new(r(1, 10)).unwrap());
        for name in trace {
            let s = c.state(name).unwrap();
            m.observe(s, c.letter(s, prop.dra().alphabet()));
        }
        (m, c)
    }

    #[test]
    fn transition_counts_of_first_trace() {
        let [t1, _, _] = samples::running_example_traces();
        let (m, c) = run(&t1);
        let st = |n: &str| c.state(n).unwrap();
        let (a, b, cc) = ((0, st("a")), (0, st("b")), (1, st("c")));
        assert_eq!(m.transition_count(a, a), 3);
        assert_eq!(m.transition_count(a, b), 2);
        assert_eq!(m.transition_count(b, cc), 1);
        assert_eq!(m.transition_count(cc, a), 1);
    }

    #[test]
    fn open_prefixes() {
        let (m, _) = run(&["a"]);
        assert_eq!(m.verdict(), Verdict::Unknown);
        assert_eq!(m.confidence().kind, ConfidenceKind::Open);
        let (m, _) = run(&["a", "b"]);
        assert!(!m.is_closed());
        assert_eq!(m.verdict(), Verdict::Unknown);
        assert!(m.induced_chain(|s| s.to_string()).is_err());
        let (m, _) = run(&["a", "a"]);
        let ic = m.induced_chain(|s| s.to_string()).unwrap();
        assert_eq!(ic.chain.num_states(), 1);
        assert_eq!(ic.chain.prob(0, 0), Some(&r(1, 1)));
    }

    #[test]
    fn pmin_one_is_infinite_once_closed() {
        let p = PMin::new(r(1, 1)).unwrap();
        assert_eq!(p.log_gamma(0), 0.0);
        assert!(p.log_gamma(1).is_infinite());
        assert_eq!(p.gamma(1), None);
        assert!(PMin::new(r(0, 1)).is_err());
        assert!(PMin::new(r(3, 2)).is_err());
    }

    #[test]
    fn tsv_format() {
        let c = Confidence {
            m: Some(3),
            log_gamma: 0.316_081,
            kind: ConfidenceKind::Finite,
        };
        assert_eq!(format_step(4, Verdict::True, &c), "4\ttrue\t3\t0.316081");
        let c = Confidence::infinite(ConfidenceKind::Open);
        assert_eq!(format_step(0, Verdict::Unknown, &c), "0\t?\t-\tinf");
    }
}
