use std::collections::{HashMap, VecDeque};

use num_traits::Zero;

use super::solve::{reach_probability, reach_probability_f64, scc_decompose, SccDecomposition};
use super::{MarkovChain, Prob};
use crate::automata::{PairMarks, RabinAutomaton};

/// Name of the absorbing state added by escape constructions.
pub const ESCAPE_STATE: &str = "escape";

/// A Markov chain over pairs (automaton state, system state) together with
/// the Rabin pairs each product state belongs to.
///
/// A product state `(q, s)` carries the automaton state *before* reading the
/// label of `s`. In the chain file the pair memberships appear as labels
/// `@inf<i>` and `@fin<i>`.
#[derive(Clone, Debug)]
pub struct ProductChain {
    pub chain: MarkovChain,
    /// `(q, s)` of each state, or `None` for states without such an origin
    /// (escape states, or chains read back from a file).
    pub origin: Vec<Option<(usize, usize)>>,
    pub marks: Vec<PairMarks>,
    pub num_pairs: usize,
    index: HashMap<(usize, usize), usize>,
}

fn mark_labels(m: &PairMarks) -> Vec<String> {
    m.inf
        .iter()
        .map(|i| format!("@inf{i}"))
        .chain(m.fin.iter().map(|i| format!("@fin{i}")))
        .collect()
}

/// The product `A ⊗ M`, restricted to states reachable from the initial
/// distribution. Product states are named `q:name`.
pub fn product(a: &RabinAutomaton, c: &MarkovChain) -> ProductChain {
    let pm = a.pair_marks();
    let letters: Vec<_> = (0..c.num_states())
        .map(|s| c.letter(s, a.alphabet()))
        .collect();
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut origin = Vec::new();
    let mut queue = VecDeque::new();
    let mut visit = |key: (usize, usize),
                     origin: &mut Vec<Option<(usize, usize)>>,
                     queue: &mut VecDeque<usize>| {
        *index.entry(key).or_insert_with(|| {
            origin.push(Some(key));
            queue.push_back(origin.len() - 1);
            origin.len() - 1
        })
    };
    let mut init = Vec::new();
    for (s, p) in c.initial() {
        if p.is_zero() {
            continue;
        }
        let id = visit((a.initial(), *s), &mut origin, &mut queue);
        init.push((id, p.clone()));
    }
    let mut edges: Vec<Vec<(usize, Prob)>> = Vec::new();
    while let Some(id) = queue.pop_front() {
        let (q, s) = origin[id].expect("product state");
        let q2 = a.step(q, letters[s]);
        let row = c
            .row(s)
            .iter()
            .filter(|t| !t.prob.is_zero())
            .map(|t| (visit((q2, t.to), &mut origin, &mut queue), t.prob.clone()))
            .collect();
        if edges.len() <= id {
            edges.resize(id + 1, Vec::new());
        }
        edges[id] = row;
    }
    edges.resize(origin.len(), Vec::new());

    let mut chain = MarkovChain::new();
    let mut marks = Vec::with_capacity(origin.len());
    for o in &origin {
        let (q, s) = o.expect("product state");
        let mut props: Vec<String> = c.labels(s).to_vec();
        props.extend(mark_labels(&pm[q]));
        let props: Vec<&str> = props.iter().map(String::as_str).collect();
        chain
            .add_state(&format!("{q}:{}", c.name(s)), &props)
            .expect("product names are unique");
        marks.push(pm[q].clone());
    }
    for (id, p) in init {
        chain.set_initial(id, p).expect("distinct initial states");
    }
    for (id, row) in edges.into_iter().enumerate() {
        for (t, p) in row {
            chain.add_transition(id, t, p).expect("distinct successors");
        }
    }
    let index = origin
        .iter()
        .enumerate()
        .map(|(i, o)| (o.expect("product state"), i))
        .collect();
    ProductChain {
        chain,
        origin,
        marks,
        num_pairs: a.pairs().len(),
        index,
    }
}

impl ProductChain {
    /// Assembles a product chain from parts; `origin` and `marks` are per
    /// state of `chain`.
    pub fn from_parts(
        chain: MarkovChain,
        origin: Vec<Option<(usize, usize)>>,
        marks: Vec<PairMarks>,
        num_pairs: usize,
    ) -> Self {
        assert_eq!(origin.len(), chain.num_states());
        assert_eq!(marks.len(), chain.num_states());
        let index = origin
            .iter()
            .enumerate()
            .filter_map(|(i, o)| o.map(|k| (k, i)))
            .collect();
        ProductChain {
            chain,
            origin,
            marks,
            num_pairs,
            index,
        }
    }

    /// Recovers pair memberships from `@inf<i>` / `@fin<i>` labels, as
    /// written by [`product`].
    pub fn from_marked_chain(chain: MarkovChain) -> Self {
        let mut num_pairs = 0;
        let marks: Vec<PairMarks> = (0..chain.num_states())
            .map(|s| {
                let mut m = PairMarks::default();
                for l in chain.labels(s) {
                    if let Some(i) = l.strip_prefix("@inf").and_then(|x| x.parse::<usize>().ok()) {
                        m.inf.push(i);
                        num_pairs = num_pairs.max(i + 1);
                    } else if let Some(i) =
                        l.strip_prefix("@fin").and_then(|x| x.parse::<usize>().ok())
                    {
                        m.fin.push(i);
                        num_pairs = num_pairs.max(i + 1);
                    }
                }
                m
            })
            .collect();
        let origin = vec![None; chain.num_states()];
        ProductChain::from_parts(chain, origin, marks, num_pairs)
    }

    pub fn state_of(&self, q: usize, s: usize) -> Option<usize> {
        self.index.get(&(q, s)).copied()
    }

    /// SCCs in topological order with bottom and good flags. A component is
    /// good if it is nontrivial and some Rabin pair has a member in `inf`
    /// and none in `fin`.
    pub fn scc_decompose(&self) -> SccDecomposition {
        let mut d = scc_decompose(&self.chain);
        let good = d
            .components
            .iter()
            .map(|comp| {
                let nontrivial = crate::graph::is_nontrivial(comp, |v| self.chain.successors(v));
                nontrivial
                    && PairMarks::witnesses_pair(comp.iter().map(|&v| &self.marks[v]), self.num_pairs)
            })
            .collect();
        d.good = Some(good);
        d
    }

    /// Per state: whether it lies in a good bottom SCC.
    pub fn in_good_bscc(&self) -> Vec<bool> {
        let d = self.scc_decompose();
        let good = d.good.as_ref().expect("product decomposition");
        let mut out = vec![false; self.chain.num_states()];
        for (i, comp) in d.components.iter().enumerate() {
            if d.bottom[i] && good[i] {
                for &v in comp {
                    out[v] = true;
                }
            }
        }
        out
    }

    /// Probability, from each state, of reaching a good bottom SCC.
    pub fn state_probabilities(&self) -> Vec<Prob> {
        reach_probability(&self.chain, &self.in_good_bscc())
    }

    /// Probability that a run from the initial distribution is accepted.
    pub fn sat_probability(&self) -> Prob {
        let x = self.state_probabilities();
        self.chain
            .initial()
            .iter()
            .map(|(s, p)| p * &x[*s])
            .sum()
    }

    /// Floating-point variant of [`ProductChain::sat_probability`] by
    /// Gauss-Seidel iteration.
    pub fn sat_probability_f64(&self, tolerance: f64) -> f64 {
        let x = reach_probability_f64(&self.chain, &self.in_good_bscc(), tolerance);
        self.chain
            .initial()
            .iter()
            .map(|(s, p)| super::chain::to_f64(p) * x[*s])
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    #[test]
    fn running_example_product() {
        let pc = product(&samples::persistence_dra(), &samples::running_example_chain());
        let c = &pc.chain;
        let b = c.state("0:b").unwrap();
        let d = c.state("1:d").unwrap();
        assert!(c.prob(b, d).is_some());
        let mut names: Vec<&str> = (0..c.num_states()).map(|s| c.name(s)).collect();
        names.sort_unstable();
        assert_eq!(
            names,
            ["0:a", "0:b", "0:f", "1:c", "1:d", "1:e", "1:f", "1:g"]
        );
        assert!(c.validate(None).is_empty());

        let dec = pc.scc_decompose();
        let good = dec.good.as_ref().unwrap();
        let mut bsccs: Vec<(Vec<&str>, bool)> = dec
            .components
            .iter()
            .enumerate()
            .filter(|(i, _)| dec.bottom[*i])
            .map(|(i, comp)| {
                let mut n: Vec<&str> = comp.iter().map(|&v| c.name(v)).collect();
                n.sort_unstable();
                (n, good[i])
            })
            .collect();
        bsccs.sort();
        assert_eq!(
            bsccs,
            vec![
                (vec!["0:f", "1:f", "1:g"], false),
                (vec!["1:d", "1:e"], true)
            ]
        );
    }

    #[test]
    fn unlabelled_chain_stays_in_initial_layer() {
        let mut c = MarkovChain::new();
        let x = c.add_state("x", &[]).unwrap();
        let y = c.add_state("y", &[]).unwrap();
        let half = Prob::new(1.into(), 2.into());
        c.set_initial(x, Prob::from_integer(1.into())).unwrap();
        for (s, t) in [(x, x), (x, y), (y, x), (y, y)] {
            c.add_transition(s, t, half.clone()).unwrap();
        }
        let pc = product(&samples::persistence_dra(), &c);
        assert!(pc.origin.iter().all(|o| o.unwrap().0 == 0));
        assert_eq!(pc.sat_probability(), Prob::zero());
    }

    #[test]
    fn marks_survive_text_round_trip() {
        let pc = product(&samples::persistence_dra(), &samples::running_example_chain());
        let back = ProductChain::from_marked_chain(MarkovChain::parse(&pc.chain.to_text()).unwrap());
        assert_eq!(back.marks, pc.marks);
        assert_eq!(back.num_pairs, 1);
        assert_eq!(back.sat_probability(), pc.sat_probability());
    }
}
