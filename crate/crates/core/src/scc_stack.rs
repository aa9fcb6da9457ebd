//! SCCs of a graph that is explored along a single path.
//!
//! Every node is entered from the previous node of the path, so the SCCs are
//! totally ordered by reachability and form a stack whose top holds the
//! current node. An edge back to an older node merges the stack suffix
//! starting at that node's SCC. Each node carries an exit counter, and each
//! SCC tracks the minimum of its counters and the Rabin pairs its members
//! touch.

use std::collections::VecDeque;

use crate::automata::PairMarks;
use crate::graph::DisjointSets;

#[derive(Clone, Debug)]
struct Scc {
    seq: u64,
    members: Vec<usize>,
    min: u64,
    /// Members whose counter equals `min`.
    at_min: usize,
    inf: Vec<bool>,
    fin: Vec<bool>,
}

impl Scc {
    fn absorb(&mut self, mut other: Scc) {
        if other.members.len() > self.members.len() {
            std::mem::swap(&mut self.members, &mut other.members);
        }
        self.members.append(&mut other.members);
        match self.min.cmp(&other.min) {
            std::cmp::Ordering::Less => {}
            std::cmp::Ordering::Equal => self.at_min += other.at_min,
            std::cmp::Ordering::Greater => {
                self.min = other.min;
                self.at_min = other.at_min;
            }
        }
        for (a, b) in self.inf.iter_mut().zip(other.inf) {
            *a |= b;
        }
        for (a, b) in self.fin.iter_mut().zip(other.fin) {
            *a |= b;
        }
        self.seq = self.seq.min(other.seq);
    }
}

#[derive(Clone, Debug)]
pub(crate) struct SccStack {
    num_pairs: usize,
    sets: DisjointSets,
    counts: Vec<u64>,
    alive: Vec<bool>,
    data: Vec<Option<Scc>>,
    stack: VecDeque<usize>,
    next_seq: u64,
    total: usize,
}

impl SccStack {
    pub fn new(num_pairs: usize) -> Self {
        SccStack {
            num_pairs,
            sets: DisjointSets::new(),
            counts: Vec::new(),
            alive: Vec::new(),
            data: Vec::new(),
            stack: VecDeque::new(),
            next_seq: 0,
            total: 0,
        }
    }

    /// Adds a fresh node with counter 0 as a new top SCC.
    pub fn push(&mut self, marks: &PairMarks) -> usize {
        let v = self.sets.push();
        self.counts.push(0);
        self.alive.push(true);
        let mut inf = vec![false; self.num_pairs];
        let mut fin = vec![false; self.num_pairs];
        for &i in &marks.inf {
            inf[i] = true;
        }
        for &i in &marks.fin {
            fin[i] = true;
        }
        self.data.push(Some(Scc {
            seq: self.next_seq,
            members: vec![v],
            min: 0,
            at_min: 1,
            inf,
            fin,
        }));
        self.next_seq += 1;
        self.stack.push_back(v);
        self.total += 1;
        v
    }

    pub fn count(&self, v: usize) -> u64 {
        self.counts[v]
    }

    #[cfg(test)]
    pub fn is_alive(&self, v: usize) -> bool {
        self.alive[v]
    }

    /// Increments the counter of `v`, which must lie in the top SCC.
    pub fn increment(&mut self, v: usize) {
        let root = self.sets.find(v);
        debug_assert_eq!(Some(&root), self.stack.back());
        let c = self.counts[v];
        self.counts[v] = c + 1;
        let scc = self.data[root].as_mut().expect("live SCC");
        if c == scc.min {
            scc.at_min -= 1;
            if scc.at_min == 0 {
                // The minimum only grows between merges, so rescans are
                // paid for by the increments that raised it.
                let counts = &self.counts;
                scc.min = scc.members.iter().map(|&u| counts[u]).min().expect("nonempty");
                scc.at_min = scc.members.iter().filter(|&&u| counts[u] == scc.min).count();
            }
        }
    }

    /// Merges the SCC of `v` with every SCC above it.
    pub fn merge_from(&mut self, v: usize) {
        debug_assert!(self.alive[v]);
        let root = self.sets.find(v);
        let seq = self.data[root].as_ref().expect("live SCC").seq;
        let pos = self
            .stack
            .partition_point(|&r| self.data[r].as_ref().expect("live SCC").seq < seq);
        while self.stack.len() > pos + 1 {
            let upper = self.stack.pop_back().expect("nonempty");
            let lower = self.stack.pop_back().expect("nonempty");
            let a = self.data[lower].take().expect("live SCC");
            let b = self.data[upper].take().expect("live SCC");
            let r = self.sets.union(lower, upper);
            let mut merged = a;
            merged.absorb(b);
            self.data[r] = Some(merged);
            self.stack.push_back(r);
        }
    }

    /// Removes the bottom-most SCC and returns its nodes, which become dead.
    pub fn drop_first(&mut self) -> Vec<usize> {
        let Some(r) = self.stack.pop_front() else {
            return Vec::new();
        };
        let scc = self.data[r].take().expect("live SCC");
        for &v in &scc.members {
            self.alive[v] = false;
        }
        self.total -= scc.members.len();
        scc.members
    }

    fn top(&self) -> Option<&Scc> {
        self.stack
            .back()
            .map(|&r| self.data[r].as_ref().expect("live SCC"))
    }

    /// Smallest counter in the top SCC.
    pub fn top_min(&self) -> Option<u64> {
        self.top().map(|s| s.min)
    }

    /// Whether the top SCC witnesses some Rabin pair.
    pub fn top_good(&self) -> bool {
        self.top()
            .is_some_and(|s| s.inf.iter().zip(&s.fin).any(|(&i, &f)| i && !f))
    }

    pub fn top_members(&self) -> &[usize] {
        self.top().map_or(&[], |s| &s.members)
    }

    /// Number of SCCs.
    pub fn len(&self) -> usize {
        self.stack.len()
    }

    /// Number of live nodes.
    pub fn total_size(&self) -> usize {
        self.total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn marks(inf: &[usize], fin: &[usize]) -> PairMarks {
        PairMarks {
            inf: inf.to_vec(),
            fin: fin.to_vec(),
        }
    }

    #[test]
    fn merge_suffix() {
        let mut s = SccStack::new(1);
        let a = s.push(&marks(&[], &[0]));
        s.increment(a);
        let b = s.push(&marks(&[0], &[]));
        s.increment(b);
        let c = s.push(&marks(&[0], &[]));
        assert_eq!(s.len(), 3);
        assert!(s.top_good());
        s.increment(c);
        s.merge_from(b);
        assert_eq!(s.len(), 2);
        assert!(s.top_good());
        assert_eq!(s.top_min(), Some(1));
        s.increment(b);
        s.merge_from(a);
        assert_eq!(s.len(), 1);
        assert!(!s.top_good());
        let mut m = s.top_members().to_vec();
        m.sort_unstable();
        assert_eq!(m, vec![a, b, c]);
        assert_eq!(s.top_min(), Some(1));
        assert_eq!(s.count(b), 2);
    }

    #[test]
    fn drop_first_kills_nodes() {
        let mut s = SccStack::new(0);
        let a = s.push(&PairMarks::default());
        s.increment(a);
        let b = s.push(&PairMarks::default());
        assert_eq!(s.drop_first(), vec![a]);
        assert!(!s.is_alive(a));
        assert!(s.is_alive(b));
        assert_eq!(s.total_size(), 1);
        assert_eq!(s.top_min(), Some(0));
    }
}
