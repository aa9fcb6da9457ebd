//! The memory-saving monitor. Instead of the whole trace graph it keeps a
//! suffix `S_1 … S_ℓ` of the SCC sequence, a visit counter `vi` for the
//! states in it, and a bound `bd` on the total size of the suffix that grows
//! by one whenever a new state arrives while the suffix is full.

use std::sync::Arc;

use crate::alphabet::Letter;
use crate::automata::StateClass;
use crate::monitor::{Confidence, ConfidenceKind, PMin, Property, StateIndex, Verdict};
use crate::scc_stack::SccStack;

#[derive(Clone, Debug)]
pub struct OnlineMonitor {
    prop: Arc<Property>,
    pmin: PMin,
    ids: StateIndex,
    states: Vec<(usize, usize)>,
    /// Live stack node of each product state, if it is in the suffix.
    node: Vec<Option<usize>>,
    /// Product state of each stack node.
    owner: Vec<usize>,
    stack: SccStack,
    bd: usize,
    current: Option<usize>,
    next_q: usize,
    len: u64,
}

impl OnlineMonitor {
    pub fn new(prop: Arc<Property>, pmin: PMin) -> Self {
        let next_q = prop.dra().initial();
        let stack = SccStack::new(prop.num_pairs());
        OnlineMonitor {
            prop,
            pmin,
            ids: StateIndex::default(),
            states: Vec::new(),
            node: Vec::new(),
            owner: Vec::new(),
            stack,
            bd: 0,
            current: None,
            next_q,
            len: 0,
        }
    }

    fn vi_node(&self, r: usize) -> Option<usize> {
        self.node[r].filter(|&v| self.stack.count(v) > 0)
    }

    pub fn observe(&mut self, s: usize, letter: Letter) {
        let key = (self.next_q, s);
        self.next_q = self.prop.dra().step(self.next_q, letter);
        let r2 = match self.ids.get(key) {
            Some(id) => id,
            None => {
                self.ids.insert(key, self.states.len());
                self.states.push(key);
                self.node.push(None);
                self.states.len() - 1
            }
        };
        if let Some(r) = self.current {
            let v = self.node[r].expect("current state is in the suffix");
            self.stack.increment(v);
        }
        match self.vi_node(r2) {
            // (a) a state of the suffix: merge from its SCC on.
            Some(v) => self.stack.merge_from(v),
            None => {
                // (c) the suffix is full: widen the bound, drop S_1.
                if self.stack.total_size() >= self.bd {
                    self.bd += 1;
                    for v in self.stack.drop_first() {
                        self.node[self.owner[v]] = None;
                    }
                }
                // (b), and the tail of (c): append {r'}.
                let v = self.stack.push(self.prop.marks(key.0));
                debug_assert_eq!(v, self.owner.len());
                self.owner.push(r2);
                self.node[r2] = Some(v);
            }
        }
        self.current = Some(r2);
        self.len += 1;
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bound(&self) -> usize {
        self.bd
    }

    /// `Σ |S_i|`.
    pub fn scc_size(&self) -> usize {
        self.stack.total_size()
    }

    /// Number of SCCs in the suffix.
    pub fn num_sccs(&self) -> usize {
        self.stack.len()
    }

    /// `vi` of a product state.
    pub fn visits(&self, r: (usize, usize)) -> u64 {
        self.ids
            .get(r)
            .and_then(|i| self.node[i])
            .map_or(0, |v| self.stack.count(v))
    }

    pub fn current(&self) -> Option<(usize, usize)> {
        self.current.map(|c| self.states[c])
    }

    /// Members of `S_ℓ`, sorted.
    pub fn last_scc(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<_> = self
            .stack
            .top_members()
            .iter()
            .map(|&n| self.states[self.owner[n]])
            .collect();
        v.sort_unstable();
        v
    }

    fn is_closed(&self) -> bool {
        self.current.is_some_and(|c| self.vi_node(c).is_some())
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
        let kind = match self.current() {
            None => ConfidenceKind::Open,
            Some((q, _)) if self.prop.class(q) != StateClass::Other => ConfidenceKind::Certain,
            Some(_) if !self.is_closed() => ConfidenceKind::Open,
            Some(_) => {
                let m = self.stack.top_min().expect("nonempty suffix");
                return Confidence {
                    m: Some(m),
                    log_gamma: self.pmin.log_gamma(m),
                    kind: ConfidenceKind::Finite,
                };
            }
        };
        Confidence {
            m: None,
            log_gamma: f64::INFINITY,
            kind,
        }
    }
}

/// One TSV line of the online monitor: the full monitor's columns plus
/// `Σ |S_i|`.
pub fn format_online_step(step: u64, v: Verdict, c: &Confidence, scc_size: usize) -> String {
    format!("{}\t{scc_size}", crate::monitor::format_step(step, v, c))
}
