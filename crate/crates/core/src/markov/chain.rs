use std::collections::HashMap;
use std::fmt::Write;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Prob;
use crate::alphabet::{Alphabet, Letter};

/// Parses `0.45`, `7/12` or `1` into an exact probability. Returns `None`
/// for malformed input; range is not checked.
pub fn parse_prob(s: &str) -> Option<Prob> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Prob::new(n, d));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}").parse().ok()?;
    let den = num_traits::pow(BigInt::from(10), frac.len());
    Some(Prob::new(digits, den))
}

/// Prints `p` as `num/den`, or as an integer when the denominator is 1.
pub fn format_prob(p: &Prob) -> String {
    if p.denom().is_one() {
        p.numer().to_string()
    } else {
        format!("{}/{}", p.numer(), p.denom())
    }
}

pub(crate) fn to_f64(p: &Prob) -> f64 {
    p.to_f64().unwrap_or(f64::NAN)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Transition {
    pub to: usize,
    pub prob: Prob,
    /// `prob` rounded to a double.
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ChainError {
    pub line: usize,
    pub message: String,
}

/// A finite labelled Markov chain with exact transition probabilities.
///
/// States are named; names are interned to dense indices in declaration
/// order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MarkovChain {
    names: Vec<String>,
    index: HashMap<String, usize>,
    labels: Vec<Vec<String>>,
    aps: Vec<String>,
    rows: Vec<Vec<Transition>>,
    init: Vec<(usize, Prob)>,
}

impl MarkovChain {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares a state with its atomic propositions.
    pub fn add_state(&mut self, name: &str, props: &[&str]) -> Result<usize, String> {
        if self.index.contains_key(name) {
            return Err(format!("state '{name}' declared twice"));
        }
        let id = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        let mut label: Vec<String> = Vec::new();
        for &p in props {
            if !label.iter().any(|l| l == p) {
                label.push(p.to_string());
            }
            if !self.aps.iter().any(|a| a == p) {
                self.aps.push(p.to_string());
            }
        }
        self.labels.push(label);
        self.rows.push(Vec::new());
        Ok(id)
    }

    pub fn set_initial(&mut self, s: usize, prob: Prob) -> Result<(), String> {
        if self.init.iter().any(|(t, _)| *t == s) {
            return Err(format!("initial probability of '{}' given twice", self.names[s]));
        }
        self.init.push((s, prob));
        Ok(())
    }

    pub fn add_transition(&mut self, from: usize, to: usize, prob: Prob) -> Result<(), String> {
        if self.rows[from].iter().any(|t| t.to == to) {
            return Err(format!(
                "transition {} -> {} given twice",
                self.names[from], self.names[to]
            ));
        }
        let p = to_f64(&prob);
        self.rows[from].push(Transition { to, prob, p });
        Ok(())
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, s: usize) -> &str {
        &self.names[s]
    }

    pub fn state(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn labels(&self, s: usize) -> &[String] {
        &self.labels[s]
    }

    /// Atomic propositions used by some label, in order of first use.
    pub fn aps(&self) -> &[String] {
        &self.aps
    }

    /// The letter of state `s` over `alphabet`; propositions outside the
    /// alphabet are dropped.
    pub fn letter(&self, s: usize, alphabet: &Alphabet) -> Letter {
        alphabet.letter(self.labels[s].iter().map(String::as_str))
    }

    pub fn initial(&self) -> &[(usize, Prob)] {
        &self.init
    }

    pub fn row(&self, s: usize) -> &[Transition] {
        &self.rows[s]
    }

    pub fn prob(&self, from: usize, to: usize) -> Option<&Prob> {
        self.rows[from].iter().find(|t| t.to == to).map(|t| &t.prob)
    }

    pub fn successors(&self, s: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows[s].iter().filter(|t| t.prob.is_positive()).map(|t| t.to)
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        (0..self.num_states()).map(|s| self.successors(s).collect()).collect()
    }

    /// Smallest positive transition probability.
    pub fn min_probability(&self) -> Option<Prob> {
        self.rows
            .iter()
            .flatten()
            .map(|t| &t.prob)
            .filter(|p| p.is_positive())
            .min()
            .cloned()
    }

    /// Problems that make this not a Markov chain: rows or the initial
    /// distribution not summing to exactly one, negative entries, and (if
    /// given) positive probabilities below `p_min`.
    pub fn validate(&self, p_min: Option<&Prob>) -> Vec<String> {
        let mut out = Vec::new();
        let one = Prob::one();
        for s in 0..self.num_states() {
            let mut sum = Prob::zero();
            for t in &self.rows[s] {
                if t.prob.is_negative() {
                    out.push(format!(
                        "transition {} -> {} has negative probability {}",
                        self.names[s],
                        self.names[t.to],
                        format_prob(&t.prob)
                    ));
                }
                if let Some(pm) = p_min {
                    if t.prob.is_positive() && &t.prob < pm {
                        out.push(format!(
                            "transition {} -> {} has probability {} below p_min {}",
                            self.names[s],
                            self.names[t.to],
                            format_prob(&t.prob),
                            format_prob(pm)
                        ));
                    }
                }
                sum += &t.prob;
            }
            if sum != one {
                out.push(format!(
                    "row of state {} sums to {}",
                    self.names[s],
                    format_prob(&sum)
                ));
            }
        }
        let mut sum = Prob::zero();
        for (s, p) in &self.init {
            if p.is_negative() {
                out.push(format!("initial probability of {} is negative", self.names[*s]));
            }
            sum += p;
        }
        if sum != one {
            out.push(format!("initial distribution sums to {}", format_prob(&sum)));
        }
        out
    }

    /// Parses the line-oriented chain format:
    ///
    /// ```text
    /// state <id> [props <ap> ...]
    /// init <id> <prob>
    /// trans <src> <dst> <prob>
    /// ```
    ///
    /// Probabilities are decimals or `num/den`; `#` starts a comment.
    pub fn parse(text: &str) -> Result<MarkovChain, ChainError> {
        let mut c = MarkovChain::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |message: String| ChainError { line, message };
            let content = raw.split('#').next().unwrap_or("");
            let toks: Vec<&str> = content.split_whitespace().collect();
            let Some(&kw) = toks.first() else { continue };
            let lookup = |name: &str, c: &MarkovChain| {
                c.state(name)
                    .ok_or_else(|| err(format!("state '{name}' used before declaration")))
            };
            let prob = |s: &str| {
                parse_prob(s).ok_or_else(|| err(format!("malformed probability '{s}'")))
            };
            match kw {
                "state" => {
                    let name = toks.get(1).ok_or_else(|| err("missing state name".into()))?;
                    let props = match toks.get(2) {
                        None => &toks[2..],
                        Some(&"props") => &toks[3..],
                        Some(other) => {
                            return Err(err(format!("expected 'props', found '{other}'")))
                        }
                    };
                    c.add_state(name, props).map_err(err)?;
                }
                "init" => {
                    if toks.len() != 3 {
                        return Err(err("expected: init <id> <prob>".into()));
                    }
                    let s = lookup(toks[1], &c)?;
                    let p = prob(toks[2])?;
                    c.set_initial(s, p).map_err(err)?;
                }
                "trans" => {
                    if toks.len() != 4 {
                        return Err(err("expected: trans <src> <dst> <prob>".into()));
                    }
                    let s = lookup(toks[1], &c)?;
                    let t = lookup(toks[2], &c)?;
                    let p = prob(toks[3])?;
                    c.add_transition(s, t, p).map_err(err)?;
                }
                other => return Err(err(format!("unknown directive '{other}'"))),
            }
        }
        Ok(c)
    }

    /// Writes the chain in the format read by [`MarkovChain::parse`].
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (i, name) in self.names.iter().enumerate() {
            write!(s, "state {name}").unwrap();
            if !self.labels[i].is_empty() {
                write!(s, " props {}", self.labels[i].join(" ")).unwrap();
            }
            writeln!(s).unwrap();
        }
        for (st, p) in &self.init {
            writeln!(s, "init {} {}", self.names[*st], format_prob(p)).unwrap();
        }
        for (i, row) in self.rows.iter().enumerate() {
            for t in row {
                writeln!(s, "trans {} {} {}", self.names[i], self.names[t.to], format_prob(&t.prob))
                    .unwrap();
            }
        }
        s
    }
}
