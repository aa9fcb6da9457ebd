use num_traits::{One, Zero};

use super::{MarkovChain, Prob};
use crate::graph;

/// Strongly connected components in topological order: every edge between
/// different components goes from an earlier to a later one.
#[derive(Clone, Debug)]
pub struct SccDecomposition {
    pub components: Vec<Vec<usize>>,
    pub component_of: Vec<usize>,
    pub bottom: Vec<bool>,
    /// Set for product chains only.
    pub good: Option<Vec<bool>>,
}

pub fn scc_decompose(c: &MarkovChain) -> SccDecomposition {
    let n = c.num_states();
    let mut components = graph::tarjan_scc(n, |v| c.successors(v));
    components.reverse();
    let mut component_of = vec![0; n];
    for (i, comp) in components.iter().enumerate() {
        for &v in comp {
            component_of[v] = i;
        }
    }
    let bottom = components
        .iter()
        .enumerate()
        .map(|(i, comp)| {
            comp.iter()
                .all(|&v| c.successors(v).all(|w| component_of[w] == i))
        })
        .collect();
    SccDecomposition {
        components,
        component_of,
        bottom,
        good: None,
    }
}

/// States that are neither targets nor unable to reach one.
fn unknowns(c: &MarkovChain, target: &[bool]) -> Vec<bool> {
    let can = graph::backward_reachable(&c.adjacency(), target);
    (0..c.num_states()).map(|s| can[s] && !target[s]).collect()
}

/// Exact probability, from every state, of eventually visiting `target`.
///
/// States that cannot reach the target get 0; the rest are solved one SCC
/// at a time, successors first, by Gauss-Jordan elimination.
pub fn reach_probability(c: &MarkovChain, target: &[bool]) -> Vec<Prob> {
    let n = c.num_states();
    let unknown = unknowns(c, target);
    let mut x: Vec<Prob> = (0..n)
        .map(|s| if target[s] { Prob::one() } else { Prob::zero() })
        .collect();
    let comps = graph::tarjan_scc(n, |v| {
        let u = &unknown;
        c.successors(v).filter(move |&w| u[v] && u[w])
    });
    let mut pos = vec![usize::MAX; n];
    for comp in comps {
        if !unknown[comp[0]] {
            continue;
        }
        let k = comp.len();
        for (i, &v) in comp.iter().enumerate() {
            pos[v] = i;
        }
        // Rows of [I - P_CC | b].
        let mut m: Vec<Vec<Prob>> = vec![vec![Prob::zero(); k + 1]; k];
        for (i, &v) in comp.iter().enumerate() {
            m[i][i] = Prob::one();
            for t in c.row(v) {
                if pos[t.to] != usize::MAX {
                    m[i][pos[t.to]] -= &t.prob;
                } else {
                    m[i][k] += &t.prob * &x[t.to];
                }
            }
        }
        gauss_jordan(&mut m);
        for (i, &v) in comp.iter().enumerate() {
            x[v] = m[i][k].clone();
        }
        for &v in &comp {
            pos[v] = usize::MAX;
        }
    }
    x
}

/// Solves the augmented system in place, leaving the solution in the last
/// column.
fn gauss_jordan(m: &mut [Vec<Prob>]) {
    let k = m.len();
    for col in 0..k {
        let pivot = (col..k)
            .find(|&r| !m[r][col].is_zero())
            .expect("reachability system is nonsingular");
        m.swap(col, pivot);
        let inv = m[col][col].recip();
        for x in &mut m[col][col..=k] {
            *x = &*x * &inv;
        }
        let pivot_row = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, p) in row[col..=k].iter_mut().zip(&pivot_row[col..=k]) {
                    *x -= &f * p;
                }
            }
        }
    }
}

/// Floating-point reachability by Gauss-Seidel sweeps until no value moves
/// by more than `tolerance`.
pub fn reach_probability_f64(c: &MarkovChain, target: &[bool], tolerance: f64) -> Vec<f64> {
    let n = c.num_states();
    let unknown = unknowns(c, target);
    let mut x: Vec<f64> = (0..n).map(|s| if target[s] { 1.0 } else { 0.0 }).collect();
    let order: Vec<usize> = (0..n).filter(|&s| unknown[s]).collect();
    loop {
        let mut delta: f64 = 0.0;
        for &s in &order {
            let v: f64 = c.row(s).iter().map(|t| t.p * x[t.to]).sum();
            delta = delta.max((v - x[s]).abs());
            x[s] = v;
        }
        if delta <= tolerance {
            return x;
        }
    }
}
