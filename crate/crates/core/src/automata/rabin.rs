use super::AutomatonError;
use crate::alphabet::{Alphabet, Letter};
use crate::graph;
use crate::ltl::LassoWord;

/// A Rabin pair: accepted when `inf` is visited infinitely often and `fin`
/// only finitely often. Both are sorted state lists.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RabinPair {
    pub inf: Vec<usize>,
    pub fin: Vec<usize>,
}

impl RabinPair {
    pub fn new(mut inf: Vec<usize>, mut fin: Vec<usize>) -> Self {
        inf.sort_unstable();
        inf.dedup();
        fin.sort_unstable();
        fin.dedup();
        RabinPair { inf, fin }
    }
}

/// The Rabin pairs a single state belongs to, by pair index.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PairMarks {
    pub inf: Vec<usize>,
    pub fin: Vec<usize>,
}

impl PairMarks {
    /// Whether a strongly connected set with these members witnesses some
    /// pair: a member lies in `inf` of pair i and no member lies in `fin`
    /// of pair i.
    pub fn witnesses_pair<'a, I>(members: I, num_pairs: usize) -> bool
    where
        I: IntoIterator<Item = &'a PairMarks>,
    {
        let mut inf = vec![false; num_pairs];
        let mut fin = vec![false; num_pairs];
        for m in members {
            for &i in &m.inf {
                inf[i] = true;
            }
            for &i in &m.fin {
                fin[i] = true;
            }
        }
        (0..num_pairs).any(|i| inf[i] && !fin[i])
    }
}

/// Language class of a single automaton state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StateClass {
    /// No word is accepted from this state.
    Empty,
    /// Every word is accepted from this state.
    Universal,
    Other,
}

/// A complete deterministic Rabin automaton over `2^AP`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RabinAutomaton {
    alphabet: Alphabet,
    initial: usize,
    /// Row-major `state * 2^|AP| + letter`.
    delta: Vec<usize>,
    pairs: Vec<RabinPair>,
}

impl RabinAutomaton {
    /// Builds an automaton from a successor table `trans[state][letter]`.
    pub fn new(
        alphabet: Alphabet,
        initial: usize,
        trans: Vec<Vec<usize>>,
        pairs: Vec<RabinPair>,
    ) -> Result<Self, AutomatonError> {
        let n = trans.len();
        let letters = alphabet.num_letters();
        if initial >= n {
            return Err(AutomatonError::Invalid(format!(
                "initial state {initial} out of range"
            )));
        }
        let mut delta = Vec::with_capacity(n * letters);
        for (q, row) in trans.iter().enumerate() {
            if row.len() != letters {
                return Err(AutomatonError::Invalid(format!(
                    "state {q} has {} successors, expected {letters}",
                    row.len()
                )));
            }
            if let Some(&t) = row.iter().find(|&&t| t >= n) {
                return Err(AutomatonError::Invalid(format!(
                    "state {q} has successor {t} out of range"
                )));
            }
            delta.extend_from_slice(row);
        }
        for (i, p) in pairs.iter().enumerate() {
            if p.inf.iter().chain(&p.fin).any(|&q| q >= n) {
                return Err(AutomatonError::Invalid(format!(
                    "Rabin pair {i} refers to a missing state"
                )));
            }
        }
        let pairs = pairs
            .into_iter()
            .map(|p| RabinPair::new(p.inf, p.fin))
            .collect();
        Ok(RabinAutomaton {
            alphabet,
            initial,
            delta,
            pairs,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn num_states(&self) -> usize {
        self.delta.len() / self.alphabet.num_letters()
    }

    pub fn pairs(&self) -> &[RabinPair] {
        &self.pairs
    }

    pub fn step(&self, q: usize, a: Letter) -> usize {
        self.delta[q * self.alphabet.num_letters() + a.index()]
    }

    pub fn successors(&self, q: usize) -> &[usize] {
        let l = self.alphabet.num_letters();
        &self.delta[q * l..(q + 1) * l]
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        (0..self.num_states())
            .map(|q| {
                let mut s = self.successors(q).to_vec();
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect()
    }

    /// Pair memberships of every state.
    pub fn pair_marks(&self) -> Vec<PairMarks> {
        let mut marks = vec![PairMarks::default(); self.num_states()];
        for (i, p) in self.pairs.iter().enumerate() {
            for &q in &p.inf {
                marks[q].inf.push(i);
            }
            for &q in &p.fin {
                marks[q].fin.push(i);
            }
        }
        marks
    }

    /// Whether the set of states visited infinitely often satisfies the
    /// Rabin condition.
    pub fn accepts_inf_set(&self, inf: &[bool]) -> bool {
        self.pairs.iter().any(|p| {
            p.inf.iter().any(|&q| inf[q]) && p.fin.iter().all(|&q| !inf[q])
        })
    }

    /// Runs the automaton on `prefix · cycle^ω` from `start`.
    pub fn accepts_lasso_from(&self, start: usize, w: &LassoWord) -> bool {
        let mut q = start;
        for &a in &w.prefix {
            q = self.step(q, a);
        }
        let c = w.cycle.len();
        // The run is periodic once (state, cycle position) repeats.
        let mut seen = vec![usize::MAX; self.num_states() * c];
        let mut trail = Vec::new();
        let mut pos = 0;
        loop {
            let key = q * c + pos;
            if seen[key] != usize::MAX {
                let mut inf = vec![false; self.num_states()];
                for &s in &trail[seen[key]..] {
                    inf[s] = true;
                }
                return self.accepts_inf_set(&inf);
            }
            seen[key] = trail.len();
            trail.push(q);
            q = self.step(q, w.cycle[pos]);
            pos = (pos + 1) % c;
        }
    }

    pub fn accepts_lasso(&self, w: &LassoWord) -> bool {
        if w.cycle.is_empty() {
            return false;
        }
        self.accepts_lasso_from(self.initial, w)
    }

    /// Partitions states into empty, universal and the rest.
    ///
    /// A state is non-empty iff it reaches a cycle witnessing some pair, and
    /// non-universal iff it reaches a cycle violating every pair. The latter
    /// is a Streett emptiness check done by recursive SCC refinement.
    pub fn classify_states(&self) -> Vec<StateClass> {
        let n = self.num_states();
        let adj = self.adjacency();

        let mut accepting_cycle = vec![false; n];
        for p in &self.pairs {
            let mut allowed = vec![true; n];
            for &q in &p.fin {
                allowed[q] = false;
            }
            let sub = |v: usize| -> Vec<usize> {
                if allowed[v] {
                    adj[v].iter().copied().filter(|&w| allowed[w]).collect()
                } else {
                    Vec::new()
                }
            };
            for comp in graph::tarjan_scc(n, sub) {
                if allowed[comp[0]]
                    && comp.iter().any(|q| p.inf.binary_search(q).is_ok())
                    && graph::is_nontrivial(&comp, sub)
                {
                    for &q in &comp {
                        accepting_cycle[q] = true;
                    }
                }
            }
        }
        let nonempty = graph::backward_reachable(&adj, &accepting_cycle);

        let mut rejecting_cycle = vec![false; n];
        let all: Vec<usize> = (0..n).collect();
        self.find_rejecting(&adj, &all, &mut rejecting_cycle);
        let nonuniversal = graph::backward_reachable(&adj, &rejecting_cycle);

        (0..n)
            .map(|q| match (nonempty[q], nonuniversal[q]) {
                (false, _) => StateClass::Empty,
                (true, false) => StateClass::Universal,
                (true, true) => StateClass::Other,
            })
            .collect()
    }

    /// Marks states on cycles within `within` whose state set violates every
    /// Rabin pair (for each pair: misses `inf` or hits `fin`).
    fn find_rejecting(&self, adj: &[Vec<usize>], within: &[usize], out: &mut [bool]) {
        // Work on local indices so each call costs O(|within|) rather than
        // O(number of states).
        let local: std::collections::HashMap<usize, usize> =
            within.iter().enumerate().map(|(i, &q)| (q, i)).collect();
        let sub: Vec<Vec<usize>> = within
            .iter()
            .map(|&q| adj[q].iter().filter_map(|w| local.get(w).copied()).collect())
            .collect();
        for comp in graph::tarjan_scc(within.len(), |v| sub[v].iter().copied()) {
            if !graph::is_nontrivial(&comp, |v| sub[v].iter().copied()) {
                continue;
            }
            let comp: Vec<usize> = comp.iter().map(|&v| within[v]).collect();
            let has = |set: &[usize]| comp.iter().any(|q| set.binary_search(q).is_ok());
            // A pair this component satisfies: its inf states can never be on
            // a rejecting cycle inside the component.
            match self.pairs.iter().find(|p| has(&p.inf) && !has(&p.fin)) {
                None => {
                    for &q in &comp {
                        out[q] = true;
                    }
                }
                Some(p) => {
                    let rest: Vec<usize> = comp
                        .iter()
                        .copied()
                        .filter(|q| p.inf.binary_search(q).is_err())
                        .collect();
                    if !rest.is_empty() {
                        self.find_rejecting(adj, &rest, out);
                    }
                }
            }
        }
    }

    /// A language-equivalent automaton with merged states: unreachable
    /// states are dropped, all empty states collapse into one rejecting sink,
    /// all universal states into one accepting sink, and the rest are merged
    /// when they agree on pair membership and on successor classes.
    pub fn minimize(&self) -> RabinAutomaton {
        let n = self.num_states();
        let letters = self.alphabet.num_letters();
        let reach = self.reachable();
        let classes = self.classify_states();
        let marks = self.pair_marks();
        let mut block: Vec<usize> = vec![usize::MAX; n];
        let mut count;
        {
            let mut ids: std::collections::HashMap<(u8, &PairMarks), usize> =
                std::collections::HashMap::new();
            let none = PairMarks::default();
            for q in (0..n).filter(|&q| reach[q]) {
                let key = match classes[q] {
                    StateClass::Empty => (0, &none),
                    StateClass::Universal => (1, &none),
                    StateClass::Other => (2, &marks[q]),
                };
                let len = ids.len();
                block[q] = *ids.entry(key).or_insert(len);
            }
            count = ids.len();
        }
        loop {
            let mut ids: std::collections::HashMap<Vec<usize>, usize> =
                std::collections::HashMap::new();
            let mut next = vec![usize::MAX; n];
            for q in (0..n).filter(|&q| reach[q]) {
                let mut sig = Vec::with_capacity(letters + 1);
                sig.push(block[q]);
                sig.extend(self.successors(q).iter().map(|&t| block[t]));
                let len = ids.len();
                next[q] = *ids.entry(sig).or_insert(len);
            }
            block = next;
            if ids.len() == count {
                break;
            }
            count = ids.len();
        }
        // Renumber so the initial state's block comes first and the rest
        // follow in order of first appearance.
        let mut order = vec![usize::MAX; count];
        let mut fresh = 0;
        for q in std::iter::once(self.initial).chain(0..n) {
            if reach[q] && order[block[q]] == usize::MAX {
                order[block[q]] = fresh;
                fresh += 1;
            }
        }
        let mut trans = vec![Vec::new(); count];
        let mut rep = vec![usize::MAX; count];
        for q in (0..n).filter(|&q| reach[q]) {
            let b = order[block[q]];
            if trans[b].is_empty() {
                rep[b] = q;
                trans[b] = self.successors(q).iter().map(|&t| order[block[t]]).collect();
            }
        }
        let mut pairs: Vec<RabinPair> = Vec::new();
        for p in &self.pairs {
            let keep = |v: &[usize]| -> Vec<usize> {
                let mut out: Vec<usize> = (0..count)
                    .filter(|&b| classes[rep[b]] == StateClass::Other && v.binary_search(&rep[b]).is_ok())
                    .collect();
                out.dedup();
                out
            };
            let inf = keep(&p.inf);
            if !inf.is_empty() {
                pairs.push(RabinPair::new(inf, keep(&p.fin)));
            }
        }
        let universal: Vec<usize> = (0..count)
            .filter(|&b| classes[rep[b]] == StateClass::Universal)
            .collect();
        if !universal.is_empty() {
            pairs.push(RabinPair::new(universal, Vec::new()));
        }
        RabinAutomaton::new(self.alphabet.clone(), 0, trans, pairs)
            .expect("quotient of a valid automaton is valid")
    }

    /// States reachable from the initial state.
    pub fn reachable(&self) -> Vec<bool> {
        let adj = self.adjacency();
        graph::forward_reachable(self.num_states(), [self.initial], |v| adj[v].clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::persistence_dra as persistence;

    #[test]
    fn lasso_acceptance() {
        let a = persistence();
        let p = Letter(1);
        let e = Letter(0);
        assert!(a.accepts_lasso(&LassoWord::new(vec![], vec![p])));
        assert!(!a.accepts_lasso(&LassoWord::new(vec![], vec![e])));
        assert!(!a.accepts_lasso(&LassoWord::new(vec![], vec![p, e])));
        assert!(a.accepts_lasso(&LassoWord::new(vec![e, e, p, e], vec![p])));
    }

    #[test]
    fn persistence_states_are_other() {
        assert_eq!(
            persistence().classify_states(),
            vec![StateClass::Other, StateClass::Other]
        );
    }

    #[test]
    fn classification_with_sinks() {
        // 0 --p--> 1 (accepting sink), 0 --!p--> 2 (rejecting sink)
        let ab = Alphabet::new(["p"]).unwrap();
        let a = RabinAutomaton::new(
            ab,
            0,
            vec![vec![2, 1], vec![1, 1], vec![2, 2]],
            vec![RabinPair::new(vec![1], vec![])],
        )
        .unwrap();
        assert_eq!(
            a.classify_states(),
            vec![StateClass::Other, StateClass::Universal, StateClass::Empty]
        );
    }

    #[test]
    fn streett_refinement_finds_nested_rejecting_cycle() {
        // One SCC {0, 1, 2}. Pair (inf {0}, fin {}) is satisfied by the whole
        // component, but the sub-cycle 1 <-> 2 avoids 0 and is rejecting.
        let ab = Alphabet::new(["p"]).unwrap();
        let a = RabinAutomaton::new(
            ab,
            0,
            vec![vec![1, 1], vec![2, 0], vec![1, 1]],
            vec![RabinPair::new(vec![0], vec![])],
        )
        .unwrap();
        assert!(a.classify_states().iter().all(|&c| c == StateClass::Other));
    }

    #[test]
    fn invalid_tables_are_rejected() {
        let ab = Alphabet::new(["p"]).unwrap();
        assert!(RabinAutomaton::new(ab.clone(), 0, vec![vec![0]], vec![]).is_err());
        assert!(RabinAutomaton::new(ab.clone(), 0, vec![vec![0, 3]], vec![]).is_err());
        assert!(RabinAutomaton::new(ab, 1, vec![vec![0, 0]], vec![]).is_err());
    }
}
