use super::Formula;
use crate::alphabet::{Alphabet, Letter};

/// The ultimately periodic word `prefix · cycle^ω`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LassoWord {
    pub prefix: Vec<Letter>,
    pub cycle: Vec<Letter>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LassoError {
    #[error("lasso cycle is empty")]
    EmptyCycle,
    #[error("atom '{0}' is not in the alphabet")]
    UnknownAtom(String),
}

impl LassoWord {
    pub fn new(prefix: Vec<Letter>, cycle: Vec<Letter>) -> Self {
        LassoWord { prefix, cycle }
    }

    /// Number of distinct positions, `|prefix| + |cycle|`.
    pub fn len(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Letter at position `i` of the infinite word.
    pub fn at(&self, i: usize) -> Letter {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// Successor of position `i` in the folded position graph.
    pub fn succ(&self, i: usize) -> usize {
        if i + 1 < self.len() {
            i + 1
        } else {
            self.prefix.len()
        }
    }
}

/// Decides `prefix · cycle^ω ⊨ f`.
///
/// Each subformula is evaluated on the `|prefix| + |cycle|` positions of the
/// folded word; `U` is a least and `R` a greatest fixpoint along the
/// successor function.
pub fn lasso_models(w: &LassoWord, f: &Formula, alphabet: &Alphabet) -> Result<bool, LassoError> {
    if w.cycle.is_empty() {
        return Err(LassoError::EmptyCycle);
    }
    Ok(eval(w, f, alphabet)?[0])
}

fn eval(w: &LassoWord, f: &Formula, ab: &Alphabet) -> Result<Vec<bool>, LassoError> {
    use Formula::*;
    let n = w.len();
    Ok(match f {
        True => vec![true; n],
        False => vec![false; n],
        Atom(name) => {
            let i = ab
                .position(name)
                .ok_or_else(|| LassoError::UnknownAtom(name.clone()))?;
            (0..n).map(|k| w.at(k).contains(i)).collect()
        }
        Not(a) => eval(w, a, ab)?.into_iter().map(|b| !b).collect(),
        And(a, b) => zip(eval(w, a, ab)?, eval(w, b, ab)?, |x, y| x && y),
        Or(a, b) => zip(eval(w, a, ab)?, eval(w, b, ab)?, |x, y| x || y),
        Next(a) => {
            let v = eval(w, a, ab)?;
            (0..n).map(|k| v[w.succ(k)]).collect()
        }
        Until(a, b) => until(w, &eval(w, a, ab)?, eval(w, b, ab)?),
        Release(a, b) => release(w, &eval(w, a, ab)?, eval(w, b, ab)?),
        Eventually(a) => until(w, &vec![true; n], eval(w, a, ab)?),
        Always(a) => release(w, &vec![false; n], eval(w, a, ab)?),
    })
}

fn zip(a: Vec<bool>, b: Vec<bool>, op: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| op(x, y)).collect()
}

fn until(w: &LassoWord, hold: &[bool], goal: Vec<bool>) -> Vec<bool> {
    let mut x = goal;
    loop {
        let mut changed = false;
        for k in (0..w.len()).rev() {
            if !x[k] && hold[k] && x[w.succ(k)] {
                x[k] = true;
                changed = true;
            }
        }
        if !changed {
            return x;
        }
    }
}

fn release(w: &LassoWord, stop: &[bool], inv: Vec<bool>) -> Vec<bool> {
    let mut x = inv;
    loop {
        let mut changed = false;
        for k in (0..w.len()).rev() {
            if x[k] && !stop[k] && !x[w.succ(k)] {
                x[k] = false;
                changed = true;
            }
        }
        if !changed {
            return x;
        }
    }
}
