//! Tableau translation of LTL into nondeterministic Büchi automata.
//!
//! The expansion follows the classic on-the-fly construction: a tableau node
//! records the subformulas that must hold now (`old`) and in the next
//! position (`next`). Until subformulas yield one generalized acceptance set
//! each, which a counter then degeneralizes.

use std::collections::{BTreeSet, HashMap, VecDeque};

use super::AutomatonError;
use crate::alphabet::{Alphabet, Letter};
use crate::graph;
use crate::ltl::Formula;

/// A nondeterministic Büchi automaton over `2^AP` with explicit letters.
#[derive(Clone, Debug)]
pub struct BuchiAutomaton {
    pub alphabet: Alphabet,
    pub initial: Vec<usize>,
    /// `trans[state][letter]` lists successor states.
    pub trans: Vec<Vec<Vec<usize>>>,
    pub accepting: Vec<bool>,
}

impl BuchiAutomaton {
    pub fn num_states(&self) -> usize {
        self.trans.len()
    }

    pub fn successors(&self, q: usize, a: Letter) -> &[usize] {
        &self.trans[q][a.index()]
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        self.trans
            .iter()
            .map(|row| {
                let mut s: Vec<usize> = row.iter().flatten().copied().collect();
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect()
    }

    /// Drops states that are unreachable or cannot reach an accepting cycle.
    /// Initial states are kept (possibly without successors) so the result
    /// is never stateless.
    pub fn trim(&self) -> BuchiAutomaton {
        let n = self.num_states();
        let adj = self.adjacency();
        let reach = graph::forward_reachable(n, self.initial.iter().copied(), |v| adj[v].clone());
        let mut on_good_cycle = vec![false; n];
        for comp in graph::tarjan_scc(n, |v| adj[v].clone()) {
            if comp.iter().any(|&q| self.accepting[q])
                && graph::is_nontrivial(&comp, |v| adj[v].clone())
            {
                for &q in &comp {
                    on_good_cycle[q] = true;
                }
            }
        }
        let live = graph::backward_reachable(&adj, &on_good_cycle);
        let keep: Vec<bool> = (0..n)
            .map(|q| reach[q] && (live[q] || self.initial.contains(&q)))
            .collect();
        let mut map = vec![usize::MAX; n];
        let mut count = 0;
        for q in 0..n {
            if keep[q] {
                map[q] = count;
                count += 1;
            }
        }
        let trans = (0..n)
            .filter(|&q| keep[q])
            .map(|q| {
                self.trans[q]
                    .iter()
                    .map(|succ| {
                        succ.iter()
                            .filter(|&&t| keep[t] && live[t])
                            .map(|&t| map[t])
                            .collect()
                    })
                    .collect()
            })
            .collect();
        BuchiAutomaton {
            alphabet: self.alphabet.clone(),
            initial: self.initial.iter().map(|&q| map[q]).collect(),
            trans,
            accepting: (0..n).filter(|&q| keep[q]).map(|q| self.accepting[q]).collect(),
        }
    }

    /// The largest direct simulation: `sim[q][r]` holds when `r` is
    /// accepting whenever `q` is and, letter by letter, every successor of
    /// `q` is simulated by some successor of `r`.
    pub fn direct_simulation(&self) -> Vec<Vec<bool>> {
        let n = self.num_states();
        let mut sim: Vec<Vec<bool>> = (0..n)
            .map(|q| (0..n).map(|r| !self.accepting[q] || self.accepting[r]).collect())
            .collect();
        let mut changed = true;
        while changed {
            changed = false;
            for q in 0..n {
                for r in 0..n {
                    if q == r || !sim[q][r] {
                        continue;
                    }
                    let ok = self.trans[q].iter().zip(&self.trans[r]).all(|(sq, sr)| {
                        sq.iter().all(|&q2| sr.iter().any(|&r2| sim[q2][r2]))
                    });
                    if !ok {
                        sim[q][r] = false;
                        changed = true;
                    }
                }
            }
        }
        sim
    }

    /// Removes successors (and initial states) that are strictly simulated
    /// by a sibling, and redirects simulation-equivalent states to one
    /// representative. Both preserve the language.
    pub fn prune_simulated(&self) -> BuchiAutomaton {
        let n = self.num_states();
        let sim = self.direct_simulation();
        let rep: Vec<usize> = (0..n)
            .map(|q| (0..n).find(|&r| sim[q][r] && sim[r][q]).unwrap_or(q))
            .collect();
        let prune = |set: &[usize]| -> Vec<usize> {
            let mut v: Vec<usize> = set.iter().map(|&t| rep[t]).collect();
            v.sort_unstable();
            v.dedup();
            let keep: Vec<usize> = v
                .iter()
                .copied()
                .filter(|&t| !v.iter().any(|&u| u != t && sim[t][u] && !sim[u][t]))
                .collect();
            keep
        };
        BuchiAutomaton {
            alphabet: self.alphabet.clone(),
            initial: prune(&self.initial),
            trans: self.trans.iter().map(|row| row.iter().map(|s| prune(s)).collect()).collect(),
            accepting: self.accepting.clone(),
        }
    }

    /// An accepting state with a self-loop on every letter, if any.
    pub fn universal_sink(&self) -> Option<usize> {
        (0..self.num_states()).find(|&q| {
            self.accepting[q] && self.trans[q].iter().all(|succ| succ.contains(&q))
        })
    }

    /// Merges bisimilar states: same acceptance flag and, for every letter,
    /// the same set of successor classes.
    pub fn quotient(&self) -> BuchiAutomaton {
        let n = self.num_states();
        let mut class: Vec<usize> = self.accepting.iter().map(|&a| a as usize).collect();
        let mut count = 0;
        loop {
            let mut ids: HashMap<(usize, Vec<Vec<usize>>), usize> = HashMap::new();
            let next: Vec<usize> = (0..n)
                .map(|q| {
                    let sig: Vec<Vec<usize>> = self.trans[q]
                        .iter()
                        .map(|succ| {
                            let mut c: Vec<usize> = succ.iter().map(|&t| class[t]).collect();
                            c.sort_unstable();
                            c.dedup();
                            c
                        })
                        .collect();
                    let len = ids.len();
                    *ids.entry((class[q], sig)).or_insert(len)
                })
                .collect();
            let stable = ids.len() == count;
            count = ids.len();
            class = next;
            if stable {
                break;
            }
        }
        let mut trans = vec![Vec::new(); count];
        let mut accepting = vec![false; count];
        for q in 0..n {
            let c = class[q];
            if trans[c].is_empty() {
                trans[c] = self.trans[q]
                    .iter()
                    .map(|succ| {
                        let mut s: Vec<usize> = succ.iter().map(|&t| class[t]).collect();
                        s.sort_unstable();
                        s.dedup();
                        s
                    })
                    .collect();
                accepting[c] = self.accepting[q];
            }
        }
        let mut initial: Vec<usize> = self.initial.iter().map(|&q| class[q]).collect();
        initial.sort_unstable();
        initial.dedup();
        BuchiAutomaton {
            alphabet: self.alphabet.clone(),
            initial,
            trans,
            accepting,
        }
    }

    /// Membership of a lasso word by a nested search over the product of the
    /// automaton with the folded word positions.
    pub fn accepts_lasso(&self, w: &crate::ltl::LassoWord) -> bool {
        let len = w.len();
        if w.cycle.is_empty() {
            return false;
        }
        let n = self.num_states();
        let id = |q: usize, pos: usize| q * len + pos;
        let total = n * len;
        let succ = |v: usize| -> Vec<usize> {
            let (q, pos) = (v / len, v % len);
            let next = w.succ(pos);
            self.successors(q, w.at(pos))
                .iter()
                .map(|&t| id(t, next))
                .collect()
        };
        let reach = graph::forward_reachable(total, self.initial.iter().map(|&q| id(q, 0)), succ);
        let comps = graph::tarjan_scc(total, |v| if reach[v] { succ(v) } else { Vec::new() });
        comps.iter().any(|c| {
            reach[c[0]]
                && c.iter().any(|&v| self.accepting[v / len])
                && graph::is_nontrivial(c, succ)
        })
    }
}

/// Hash-consed NNF formulas with `F`/`G` expanded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Node {
    True,
    False,
    Lit(usize, bool),
    And(u32, u32),
    Or(u32, u32),
    Next(u32),
    Until(u32, u32),
    Release(u32, u32),
}

#[derive(Default)]
struct Pool {
    nodes: Vec<Node>,
    ids: HashMap<Node, u32>,
}

impl Pool {
    fn intern(&mut self, n: Node) -> u32 {
        if let Some(&i) = self.ids.get(&n) {
            return i;
        }
        let i = self.nodes.len() as u32;
        self.nodes.push(n);
        self.ids.insert(n, i);
        i
    }

    fn build(&mut self, f: &Formula, ab: &Alphabet) -> Result<u32, AutomatonError> {
        use Formula::*;
        let node = match f {
            True => Node::True,
            False => Node::False,
            Atom(a) => Node::Lit(lookup(ab, a)?, true),
            Not(inner) => match &**inner {
                Atom(a) => Node::Lit(lookup(ab, a)?, false),
                _ => return Err(AutomatonError::Invalid(format!("formula not in NNF: {f}"))),
            },
            And(a, b) => Node::And(self.build(a, ab)?, self.build(b, ab)?),
            Or(a, b) => Node::Or(self.build(a, ab)?, self.build(b, ab)?),
            Next(a) => Node::Next(self.build(a, ab)?),
            Until(a, b) => Node::Until(self.build(a, ab)?, self.build(b, ab)?),
            Release(a, b) => Node::Release(self.build(a, ab)?, self.build(b, ab)?),
            Eventually(a) => {
                let t = self.intern(Node::True);
                Node::Until(t, self.build(a, ab)?)
            }
            Always(a) => {
                let ff = self.intern(Node::False);
                Node::Release(ff, self.build(a, ab)?)
            }
        };
        Ok(self.intern(node))
    }
}

fn lookup(ab: &Alphabet, a: &str) -> Result<usize, AutomatonError> {
    ab.position(a)
        .ok_or_else(|| AutomatonError::Invalid(format!("atom '{a}' not in alphabet")))
}

type Set = BTreeSet<u32>;

struct Pending {
    incoming: BTreeSet<usize>,
    new: Set,
    old: Set,
    next: Set,
}

struct TableauNode {
    incoming: BTreeSet<usize>,
    old: Set,
}

const INIT: usize = usize::MAX;

fn expand(pool: &Pool, root: u32, cap: usize) -> Result<Vec<TableauNode>, AutomatonError> {
    let mut done: Vec<TableauNode> = Vec::new();
    let mut index: HashMap<(Set, Set), usize> = HashMap::new();
    let mut stack = vec![Pending {
        incoming: BTreeSet::from([INIT]),
        new: Set::from([root]),
        old: Set::new(),
        next: Set::new(),
    }];
    while let Some(mut n) = stack.pop() {
        let Some(eta) = n.new.pop_first() else {
            let key = (n.old, n.next);
            if let Some(&id) = index.get(&key) {
                done[id].incoming.extend(n.incoming);
                continue;
            }
            let id = done.len();
            if id >= cap {
                return Err(AutomatonError::StateCap(cap));
            }
            stack.push(Pending {
                incoming: BTreeSet::from([id]),
                new: key.1.clone(),
                old: Set::new(),
                next: Set::new(),
            });
            done.push(TableauNode {
                incoming: n.incoming,
                old: key.0.clone(),
            });
            index.insert(key, id);
            continue;
        };
        let node = pool.nodes[eta as usize];
        if n.old.contains(&eta) && !matches!(node, Node::Lit(..)) {
            stack.push(n);
            continue;
        }
        let add = |set: &mut Set, old: &Set, f: u32| {
            if !old.contains(&f) {
                set.insert(f);
            }
        };
        match node {
            Node::False => {}
            Node::True => {
                n.old.insert(eta);
                stack.push(n);
            }
            Node::Lit(a, pos) => {
                let neg = pool.ids.get(&Node::Lit(a, !pos));
                if neg.is_some_and(|i| n.old.contains(i)) {
                    continue;
                }
                n.old.insert(eta);
                stack.push(n);
            }
            Node::And(a, b) => {
                add(&mut n.new, &n.old, a);
                add(&mut n.new, &n.old, b);
                n.old.insert(eta);
                stack.push(n);
            }
            Node::Next(a) => {
                n.old.insert(eta);
                n.next.insert(a);
                stack.push(n);
            }
            Node::Or(a, b) | Node::Until(a, b) | Node::Release(a, b) => {
                n.old.insert(eta);
                let mut n2 = Pending {
                    incoming: n.incoming.clone(),
                    new: n.new.clone(),
                    old: n.old.clone(),
                    next: n.next.clone(),
                };
                match node {
                    Node::Or(..) => {
                        add(&mut n.new, &n.old, a);
                        add(&mut n2.new, &n2.old, b);
                    }
                    Node::Until(..) => {
                        add(&mut n.new, &n.old, a);
                        n.next.insert(eta);
                        add(&mut n2.new, &n2.old, b);
                    }
                    _ => {
                        add(&mut n.new, &n.old, b);
                        n.next.insert(eta);
                        add(&mut n2.new, &n2.old, a);
                        add(&mut n2.new, &n2.old, b);
                    }
                }
                stack.push(n2);
                stack.push(n);
            }
        }
    }
    Ok(done)
}

/// Translates an NNF formula into a Büchi automaton over `alphabet`.
pub fn ltl_to_nba(
    f: &Formula,
    alphabet: &Alphabet,
    cap: usize,
) -> Result<BuchiAutomaton, AutomatonError> {
    if !f.is_nnf() {
        return Err(AutomatonError::Invalid(format!("formula not in NNF: {f}")));
    }
    let mut pool = Pool::default();
    let root = pool.build(f, alphabet)?;
    let nodes = expand(&pool, root, cap)?;

    // Letters compatible with each node's literals.
    let compatible: Vec<Vec<bool>> = nodes
        .iter()
        .map(|nd| {
            alphabet
                .letters()
                .map(|l| {
                    nd.old.iter().all(|&x| match pool.nodes[x as usize] {
                        Node::Lit(a, pos) => l.contains(a) == pos,
                        _ => true,
                    })
                })
                .collect()
        })
        .collect();

    // Generalized acceptance: one set per until subformula.
    // Untils that no node promises impose no constraint.
    let untils: Vec<(u32, u32)> = pool
        .nodes
        .iter()
        .enumerate()
        .filter_map(|(i, n)| match n {
            Node::Until(_, b) if nodes.iter().any(|nd| nd.old.contains(&(i as u32))) => {
                Some((i as u32, *b))
            }
            _ => None,
        })
        .collect();
    // Tableau vertex 0 is the pre-initial vertex, node i is vertex i + 1.
    let in_set = |v: usize, k: usize| -> bool {
        if v == 0 {
            return false;
        }
        let old = &nodes[v - 1].old;
        let (u, b) = untils[k];
        !old.contains(&u) || old.contains(&b)
    };
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); nodes.len() + 1];
    for (i, nd) in nodes.iter().enumerate() {
        for &src in &nd.incoming {
            let v = if src == INIT { 0 } else { src + 1 };
            succ[v].push(i + 1);
        }
    }

    let k = untils.len().max(1);
    let degen_accepting = |v: usize, c: usize| -> bool {
        if untils.is_empty() {
            true
        } else {
            c == 0 && in_set(v, 0)
        }
    };
    let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut order: Vec<(usize, usize)> = Vec::new();
    let mut queue = VecDeque::new();
    ids.insert((0, 0), 0);
    order.push((0, 0));
    queue.push_back((0usize, 0usize));
    let mut trans: Vec<Vec<Vec<usize>>> = Vec::new();
    while let Some((v, c)) = queue.pop_front() {
        let c2 = if !untils.is_empty() && in_set(v, c) {
            (c + 1) % k
        } else {
            c
        };
        let mut row = vec![Vec::new(); alphabet.num_letters()];
        for &t in &succ[v] {
            let key = (t, c2);
            let tid = match ids.get(&key) {
                Some(&x) => x,
                None => {
                    let x = order.len();
                    if x >= cap {
                        return Err(AutomatonError::StateCap(cap));
                    }
                    ids.insert(key, x);
                    order.push(key);
                    queue.push_back(key);
                    x
                }
            };
            for l in alphabet.letters() {
                if compatible[t - 1][l.index()] {
                    row[l.index()].push(tid);
                }
            }
        }
        trans.push(row);
    }
    let accepting = order.iter().map(|&(v, c)| degen_accepting(v, c)).collect();
    let nba = BuchiAutomaton {
        alphabet: alphabet.clone(),
        initial: vec![0],
        trans,
        accepting,
    };
    Ok(nba.trim().quotient().prune_simulated().trim().quotient())
}
