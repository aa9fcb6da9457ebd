//! Safra's determinization of Büchi automata into Rabin automata.
//!
//! A macrostate is an ordered tree of named nodes, each labelled with a set
//! of Büchi states. Every node name `i` gives a Rabin pair: accept if node
//! `i` is marked (its subtree collapsed after all its states were seen
//! accepting) infinitely often and absent only finitely often.

use std::collections::{HashMap, VecDeque};

use super::{AutomatonError, BuchiAutomaton, RabinAutomaton, RabinPair};
use crate::alphabet::Letter;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct TreeNode {
    name: u32,
    marked: bool,
    label: Vec<u32>,
    children: Vec<TreeNode>,
}

/// `None` is the empty tree: all runs died.
type Tree = Option<TreeNode>;

fn collect_names(node: &TreeNode, used: &mut Vec<bool>) {
    used[node.name as usize] = true;
    for c in &node.children {
        collect_names(c, used);
    }
}

fn spawn_accepting(node: &mut TreeNode, accepting: &[bool], used: &mut [bool]) {
    node.marked = false;
    for c in &mut node.children {
        spawn_accepting(c, accepting, used);
    }
    let acc: Vec<u32> = node
        .label
        .iter()
        .copied()
        .filter(|&q| accepting[q as usize])
        .collect();
    if !acc.is_empty() {
        let name = used
            .iter()
            .enumerate()
            .skip(1)
            .find(|(_, u)| !**u)
            .map(|(i, _)| i)
            .expect("Safra name pool exhausted");
        used[name] = true;
        node.children.push(TreeNode {
            name: name as u32,
            marked: false,
            label: acc,
            children: Vec::new(),
        });
    }
}

fn powerset_step(node: &mut TreeNode, nba: &BuchiAutomaton, a: Letter) {
    let mut next: Vec<u32> = node
        .label
        .iter()
        .flat_map(|&q| nba.successors(q as usize, a).iter().map(|&t| t as u32))
        .collect();
    next.sort_unstable();
    next.dedup();
    node.label = next;
    for c in &mut node.children {
        powerset_step(c, nba, a);
    }
}

/// Removes from each node the states already claimed by an older sibling
/// (or an older sibling of an ancestor).
fn horizontal_merge(node: &mut TreeNode, claimed: &mut [bool]) {
    node.label.retain(|&q| !claimed[q as usize]);
    let mut local = claimed.to_vec();
    for c in &mut node.children {
        horizontal_merge(c, &mut local);
        for &q in &c.label {
            local[q as usize] = true;
        }
    }
}

fn drop_empty(node: &mut TreeNode) {
    node.children.retain(|c| !c.label.is_empty());
    for c in &mut node.children {
        drop_empty(c);
    }
}

fn vertical_merge(node: &mut TreeNode) {
    if !node.children.is_empty() {
        let covered: usize = node.children.iter().map(|c| c.label.len()).sum();
        // Children are disjoint subsets of the label after the horizontal
        // merge, so equal cardinality means equal sets.
        if covered == node.label.len() {
            node.children.clear();
            node.marked = true;
            return;
        }
    }
    for c in &mut node.children {
        vertical_merge(c);
    }
}

fn successor(
    tree: &Tree,
    nba: &BuchiAutomaton,
    a: Letter,
    max_name: usize,
    top: Option<u32>,
) -> Tree {
    let mut root = tree.clone()?;
    let mut used = vec![false; max_name + 1];
    collect_names(&root, &mut used);
    spawn_accepting(&mut root, &nba.accepting, &mut used);
    powerset_step(&mut root, nba, a);
    horizontal_merge(&mut root, &mut vec![false; nba.num_states()]);
    if root.label.is_empty() {
        return None;
    }
    drop_empty(&mut root);
    vertical_merge(&mut root);
    // A tree holding a state that accepts every word accepts every word
    // itself, so all such trees can share one representative.
    if let Some(t) = top {
        if root.label.binary_search(&t).is_ok() {
            return Some(TreeNode {
                name: 1,
                marked: true,
                label: vec![t],
                children: Vec::new(),
            });
        }
    }
    Some(root)
}

fn visit(node: &TreeNode, f: &mut impl FnMut(&TreeNode)) {
    f(node);
    for c in &node.children {
        visit(c, f);
    }
}

/// Determinizes `nba` into a complete Rabin automaton with the same
/// language. Rabin pairs that can never be satisfied are dropped.
pub fn determinize(nba: &BuchiAutomaton, cap: usize) -> Result<RabinAutomaton, AutomatonError> {
    let n = nba.num_states();
    let max_name = 2 * n.max(1);
    let top = nba.universal_sink().map(|q| q as u32);
    let mut init = nba.initial.iter().map(|&q| q as u32).collect::<Vec<_>>();
    init.sort_unstable();
    init.dedup();
    let start: Tree = if init.is_empty() {
        None
    } else {
        Some(TreeNode {
            name: 1,
            marked: false,
            label: init,
            children: Vec::new(),
        })
    };

    let mut ids: HashMap<Tree, usize> = HashMap::new();
    let mut trees: Vec<Tree> = Vec::new();
    let mut queue = VecDeque::new();
    ids.insert(start.clone(), 0);
    trees.push(start);
    queue.push_back(0);
    let mut trans: Vec<Vec<usize>> = Vec::new();
    while let Some(id) = queue.pop_front() {
        let mut row = Vec::with_capacity(nba.alphabet.num_letters());
        for a in nba.alphabet.letters() {
            let t = successor(&trees[id], nba, a, max_name, top);
            let tid = match ids.get(&t) {
                Some(&x) => x,
                None => {
                    let x = trees.len();
                    if x >= cap {
                        return Err(AutomatonError::StateCap(cap));
                    }
                    ids.insert(t.clone(), x);
                    trees.push(t);
                    queue.push_back(x);
                    x
                }
            };
            row.push(tid);
        }
        trans.push(row);
    }

    let mut present = vec![Vec::new(); max_name + 1];
    let mut marked = vec![Vec::new(); max_name + 1];
    for (id, t) in trees.iter().enumerate() {
        let mut here = vec![false; max_name + 1];
        if let Some(root) = t {
            visit(root, &mut |nd| {
                here[nd.name as usize] = true;
                if nd.marked {
                    marked[nd.name as usize].push(id);
                }
            });
        }
        for (name, h) in here.iter().enumerate() {
            if *h {
                present[name].push(id);
            }
        }
    }
    let all: Vec<usize> = (0..trees.len()).collect();
    let pairs = (1..=max_name)
        .filter(|&name| !marked[name].is_empty())
        .map(|name| {
            let fin = all
                .iter()
                .copied()
                .filter(|id| present[name].binary_search(id).is_err())
                .collect();
            RabinPair::new(marked[name].clone(), fin)
        })
        .collect();
    RabinAutomaton::new(nba.alphabet.clone(), 0, trans, pairs)
}
