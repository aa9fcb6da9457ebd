//! Small directed-graph utilities shared by the automata and chain code.

/// Strongly connected components by Tarjan's algorithm (iterative).
///
/// Components come out in reverse topological order: a component appears
/// before every component that can reach it.
pub fn tarjan_scc<F, I>(n: usize, mut succ: F) -> Vec<Vec<usize>>
where
    F: FnMut(usize) -> I,
    I: IntoIterator<Item = usize>,
{
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut next = 0;
    // Call frames: (vertex, successor list, position in it).
    let mut frames: Vec<(usize, Vec<usize>, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        frames.push((root, succ(root).into_iter().collect(), 0));

        while let Some(frame) = frames.last_mut() {
            let v = frame.0;
            if frame.2 < frame.1.len() {
                let w = frame.1[frame.2];
                frame.2 += 1;
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, succ(w).into_iter().collect(), 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            frames.pop();
            if let Some(parent) = frames.last() {
                let p = parent.0;
                low[p] = low[p].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                comps.push(comp);
            }
        }
    }
    comps
}

/// Vertices reachable from `sources` (inclusive).
pub fn forward_reachable<F, I>(n: usize, sources: impl IntoIterator<Item = usize>, mut succ: F) -> Vec<bool>
where
    F: FnMut(usize) -> I,
    I: IntoIterator<Item = usize>,
{
    let mut seen = vec![false; n];
    let mut work: Vec<usize> = Vec::new();
    for s in sources {
        if !seen[s] {
            seen[s] = true;
            work.push(s);
        }
    }
    while let Some(v) = work.pop() {
        for w in succ(v) {
            if !seen[w] {
                seen[w] = true;
                work.push(w);
            }
        }
    }
    seen
}

/// Vertices that can reach some vertex in `targets` (inclusive), given the
/// forward adjacency.
pub fn backward_reachable(adj: &[Vec<usize>], targets: &[bool]) -> Vec<bool> {
    let n = adj.len();
    let mut rev = vec![Vec::new(); n];
    for (v, ws) in adj.iter().enumerate() {
        for &w in ws {
            rev[w].push(v);
        }
    }
    let sources = (0..n).filter(|&v| targets[v]);
    forward_reachable(n, sources, |v| rev[v].clone())
}

/// True if the component contains a cycle (more than one vertex, or a
/// self-loop).
pub fn is_nontrivial<F, I>(comp: &[usize], mut succ: F) -> bool
where
    F: FnMut(usize) -> I,
    I: IntoIterator<Item = usize>,
{
    comp.len() > 1 || succ(comp[0]).into_iter().any(|w| w == comp[0])
}

/// Minimal union-find with path halving and union by size.
#[derive(Clone, Debug, Default)]
pub struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self) -> usize {
        let i = self.parent.len();
        self.parent.push(i);
        self.size.push(1);
        i
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b` and returns the new representative.
    pub fn union(&mut self, a: usize, b: usize) -> usize {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return a;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sccs_in_reverse_topological_order() {
        // 0 -> 1 <-> 2 -> 3, 3 self-loop, 4 isolated
        let adj: [Vec<usize>; 5] = [vec![1], vec![2], vec![1, 3], vec![3], vec![]];
        let comps = tarjan_scc(adj.len(), |v| adj[v].clone());
        let pos = |x: usize| comps.iter().position(|c| c.contains(&x)).unwrap();
        assert_eq!(comps.len(), 4);
        assert!(pos(3) < pos(1));
        assert!(pos(1) < pos(0));
        assert_eq!(comps[pos(1)], vec![1, 2]);
        assert!(is_nontrivial(&comps[pos(3)], |v| adj[v].clone()));
        assert!(!is_nontrivial(&comps[pos(0)], |v| adj[v].clone()));
    }

    #[test]
    fn deep_path_does_not_overflow() {
        let n = 200_000;
        let comps = tarjan_scc(n, |v| if v + 1 < n { vec![v + 1] } else { vec![0] });
        assert_eq!(comps.len(), 1);
    }

    #[test]
    fn reachability() {
        let adj = vec![vec![1], vec![], vec![1]];
        assert_eq!(forward_reachable(3, [0], |v| adj[v].clone()), vec![true, true, false]);
        assert_eq!(
            backward_reachable(&adj, &[false, true, false]),
            vec![true, true, true]
        );
    }

    #[test]
    fn union_find() {
        let mut d = DisjointSets::new();
        for _ in 0..4 {
            d.push();
        }
        d.union(0, 1);
        d.union(2, 3);
        assert_eq!(d.find(1), d.find(0));
        assert_ne!(d.find(1), d.find(2));
        d.union(1, 3);
        assert_eq!(d.find(0), d.find(2));
    }
}
