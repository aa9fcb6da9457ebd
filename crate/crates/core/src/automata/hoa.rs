//! Reader and writer for the deterministic Rabin subset of the Hanoi
//! Omega-Automata (HOA v1) format.
//!
//! Acceptance sets `2i` and `2i+1` of a printed automaton are `Fin` and
//! `Inf` of Rabin pair `i`. On input, any disjunction of conjunctions with at
//! most one `Fin` and one `Inf` each is accepted. Edge labels are arbitrary
//! boolean expressions over AP indices or, with no labels, implicit letter
//! order. Transition-based marks are moved onto states by splitting each
//! state by the marks of its incoming edge, and missing edges go to a fresh
//! rejecting sink.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write;

use super::{AutomatonError, RabinAutomaton, RabinPair};
use crate::alphabet::{Alphabet, Letter};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HoaError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: automaton is not deterministic: {message}")]
    NonDeterministic { line: usize, message: String },
    #[error("unsupported acceptance condition: {0}")]
    UnsupportedAcceptance(String),
    #[error("line {line}: AP index {index} is not declared")]
    UndeclaredAp { line: usize, index: usize },
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

fn syntax(line: usize, message: impl Into<String>) -> HoaError {
    HoaError::Syntax {
        line,
        message: message.into(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Header(String),
    Ident(String),
    Str(String),
    Int(usize),
    Punct(char),
    Body,
    End,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, HoaError> {
    let mut out = Vec::new();
    let b = text.as_bytes();
    let (mut i, mut line) = (0, 1);
    while i < b.len() {
        let c = b[i] as char;
        match c {
            '\n' => {
                line += 1;
                i += 1;
            }
            c if c.is_whitespace() => i += 1,
            '/' if b.get(i + 1) == Some(&b'*') => {
                let start = line;
                i += 2;
                loop {
                    if i + 1 >= b.len() {
                        return Err(syntax(start, "unterminated comment"));
                    }
                    if b[i] == b'*' && b[i + 1] == b'/' {
                        i += 2;
                        break;
                    }
                    if b[i] == b'\n' {
                        line += 1;
                    }
                    i += 1;
                }
            }
            '"' => {
                let mut j = i + 1;
                let mut s = String::new();
                while j < b.len() && b[j] != b'"' {
                    if b[j] == b'\\' && j + 1 < b.len() {
                        j += 1;
                    }
                    if b[j] == b'\n' {
                        line += 1;
                    }
                    s.push(b[j] as char);
                    j += 1;
                }
                if j >= b.len() {
                    return Err(syntax(line, "unterminated string"));
                }
                out.push((Tok::Str(s), line));
                i = j + 1;
            }
            '-' if text[i..].starts_with("--BODY--") => {
                out.push((Tok::Body, line));
                i += 8;
            }
            '-' if text[i..].starts_with("--END--") => {
                out.push((Tok::End, line));
                i += 7;
            }
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < b.len() && b[j].is_ascii_digit() {
                    j += 1;
                }
                let v = text[i..j]
                    .parse()
                    .map_err(|_| syntax(line, "integer out of range"))?;
                out.push((Tok::Int(v), line));
                i = j;
            }
            c if c.is_ascii_alphabetic() || c == '_' || c == '@' => {
                let mut j = i + 1;
                while j < b.len()
                    && ((b[j] as char).is_ascii_alphanumeric() || b[j] == b'_' || b[j] == b'-')
                {
                    j += 1;
                }
                let word = text[i..j].to_string();
                if b.get(j) == Some(&b':') {
                    out.push((Tok::Header(word), line));
                    i = j + 1;
                } else {
                    out.push((Tok::Ident(word), line));
                    i = j;
                }
            }
            '[' | ']' | '{' | '}' | '(' | ')' | '&' | '|' | '!' => {
                out.push((Tok::Punct(c), line));
                i += 1;
            }
            _ => return Err(syntax(line, format!("unexpected character '{c}'"))),
        }
    }
    Ok(out)
}

/// Boolean label over AP indices.
#[derive(Clone, Debug)]
enum Label {
    Const(bool),
    Ap(usize),
    Not(Box<Label>),
    And(Box<Label>, Box<Label>),
    Or(Box<Label>, Box<Label>),
}

impl Label {
    fn eval(&self, l: Letter) -> bool {
        match self {
            Label::Const(b) => *b,
            Label::Ap(i) => l.contains(*i),
            Label::Not(a) => !a.eval(l),
            Label::And(a, b) => a.eval(l) && b.eval(l),
            Label::Or(a, b) => a.eval(l) || b.eval(l),
        }
    }
}

/// Acceptance formula atoms.
#[derive(Clone, Debug)]
enum Acc {
    Const(bool),
    Fin(usize),
    Inf(usize),
    And(Box<Acc>, Box<Acc>),
    Or(Box<Acc>, Box<Acc>),
}

struct Cursor {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Cursor {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn line(&self) -> usize {
        self.toks
            .get(self.pos)
            .or(self.toks.last())
            .map_or(1, |t| t.1)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.0.clone());
        self.pos += 1;
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Punct(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), HoaError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(syntax(self.line(), format!("expected '{c}'")))
        }
    }

    fn int(&mut self, what: &str) -> Result<usize, HoaError> {
        let line = self.line();
        match self.next() {
            Some(Tok::Int(v)) => Ok(v),
            _ => Err(syntax(line, format!("expected {what}"))),
        }
    }

    fn label_or(&mut self, num_ap: usize) -> Result<Label, HoaError> {
        let mut l = self.label_and(num_ap)?;
        while self.eat('|') {
            l = Label::Or(Box::new(l), Box::new(self.label_and(num_ap)?));
        }
        Ok(l)
    }

    fn label_and(&mut self, num_ap: usize) -> Result<Label, HoaError> {
        let mut l = self.label_atom(num_ap)?;
        while self.eat('&') {
            l = Label::And(Box::new(l), Box::new(self.label_atom(num_ap)?));
        }
        Ok(l)
    }

    fn label_atom(&mut self, num_ap: usize) -> Result<Label, HoaError> {
        let line = self.line();
        match self.next() {
            Some(Tok::Punct('!')) => Ok(Label::Not(Box::new(self.label_atom(num_ap)?))),
            Some(Tok::Punct('(')) => {
                let l = self.label_or(num_ap)?;
                self.expect(')')?;
                Ok(l)
            }
            Some(Tok::Ident(w)) if w == "t" => Ok(Label::Const(true)),
            Some(Tok::Ident(w)) if w == "f" => Ok(Label::Const(false)),
            Some(Tok::Int(i)) if i < num_ap => Ok(Label::Ap(i)),
            Some(Tok::Int(i)) => Err(HoaError::UndeclaredAp { line, index: i }),
            Some(Tok::Ident(w)) if w.starts_with('@') => {
                Err(syntax(line, format!("aliases are not supported ({w})")))
            }
            _ => Err(syntax(line, "malformed label")),
        }
    }

    fn acc_or(&mut self) -> Result<Acc, HoaError> {
        let mut a = self.acc_and()?;
        while self.eat('|') {
            a = Acc::Or(Box::new(a), Box::new(self.acc_and()?));
        }
        Ok(a)
    }

    fn acc_and(&mut self) -> Result<Acc, HoaError> {
        let mut a = self.acc_atom()?;
        while self.eat('&') {
            a = Acc::And(Box::new(a), Box::new(self.acc_atom()?));
        }
        Ok(a)
    }

    fn acc_atom(&mut self) -> Result<Acc, HoaError> {
        let line = self.line();
        match self.next() {
            Some(Tok::Punct('(')) => {
                let a = self.acc_or()?;
                self.expect(')')?;
                Ok(a)
            }
            Some(Tok::Ident(w)) if w == "t" => Ok(Acc::Const(true)),
            Some(Tok::Ident(w)) if w == "f" => Ok(Acc::Const(false)),
            Some(Tok::Ident(w)) if w == "Fin" || w == "Inf" => {
                self.expect('(')?;
                if self.eat('!') {
                    return Err(HoaError::UnsupportedAcceptance(format!(
                        "complemented set in {w}"
                    )));
                }
                let s = self.int("acceptance set")?;
                self.expect(')')?;
                Ok(if w == "Fin" { Acc::Fin(s) } else { Acc::Inf(s) })
            }
            _ => Err(syntax(line, "malformed acceptance condition")),
        }
    }
}

/// One Rabin pair as acceptance-set indices; `None` for `fin` means no
/// finiteness constraint, `None` for `inf` means every state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct PairSpec {
    fin: Option<usize>,
    inf: Option<usize>,
}

fn rabin_shape(acc: &Acc) -> Result<Vec<PairSpec>, HoaError> {
    fn disjuncts<'a>(a: &'a Acc, out: &mut Vec<&'a Acc>) {
        match a {
            Acc::Or(x, y) => {
                disjuncts(x, out);
                disjuncts(y, out);
            }
            _ => out.push(a),
        }
    }
    fn conjuncts<'a>(a: &'a Acc, out: &mut Vec<&'a Acc>) -> Result<(), HoaError> {
        match a {
            Acc::And(x, y) => {
                conjuncts(x, out)?;
                conjuncts(y, out)
            }
            Acc::Or(..) => Err(HoaError::UnsupportedAcceptance(
                "not a disjunction of Fin/Inf conjunctions".into(),
            )),
            _ => {
                out.push(a);
                Ok(())
            }
        }
    }
    let mut ds = Vec::new();
    disjuncts(acc, &mut ds);
    let mut pairs = Vec::new();
    'outer: for d in ds {
        let mut cs = Vec::new();
        conjuncts(d, &mut cs)?;
        let mut spec = PairSpec { fin: None, inf: None };
        for c in cs {
            match c {
                Acc::Const(true) => {}
                Acc::Const(false) => continue 'outer,
                Acc::Fin(s) if spec.fin.is_none() => spec.fin = Some(*s),
                Acc::Inf(s) if spec.inf.is_none() => spec.inf = Some(*s),
                _ => {
                    return Err(HoaError::UnsupportedAcceptance(
                        "more than one Fin or Inf in a conjunction".into(),
                    ))
                }
            }
        }
        pairs.push(spec);
    }
    Ok(pairs)
}

struct RawEdge {
    label: Option<Label>,
    dst: usize,
    marks: Vec<usize>,
    line: usize,
}

struct RawState {
    marks: Vec<usize>,
    edges: Vec<RawEdge>,
    line: usize,
}

/// Successor and edge marks of one letter.
type MarkedEdge = (usize, Vec<usize>);

/// Parses a deterministic HOA automaton with Rabin-shaped acceptance.
pub fn parse_hoa(text: &str) -> Result<RabinAutomaton, HoaError> {
    let mut c = Cursor {
        toks: tokenize(text)?,
        pos: 0,
    };
    let mut num_states: Option<usize> = None;
    let mut start: Option<usize> = None;
    let mut aps: Option<Vec<String>> = None;
    let mut acceptance: Option<(usize, Acc)> = None;
    let mut seen_version = false;

    loop {
        let line = c.line();
        match c.next() {
            Some(Tok::Body) => break,
            Some(Tok::Header(h)) => match h.as_str() {
                "HOA" => {
                    match c.next() {
                        Some(Tok::Ident(v)) if v == "v1" || v.starts_with("v1") => {}
                        _ => return Err(syntax(line, "unsupported HOA version")),
                    }
                    seen_version = true;
                }
                "States" => num_states = Some(c.int("state count")?),
                "Start" => {
                    let s = c.int("start state")?;
                    if c.peek() == Some(&Tok::Punct('&')) {
                        return Err(HoaError::NonDeterministic {
                            line,
                            message: "conjunctive initial states".into(),
                        });
                    }
                    if start.replace(s).is_some() {
                        return Err(HoaError::NonDeterministic {
                            line,
                            message: "multiple initial states".into(),
                        });
                    }
                }
                "AP" => {
                    let n = c.int("AP count")?;
                    let mut names = Vec::new();
                    for _ in 0..n {
                        match c.next() {
                            Some(Tok::Str(s)) => names.push(s),
                            _ => return Err(syntax(line, "AP header lists fewer names than declared")),
                        }
                    }
                    aps = Some(names);
                }
                "Acceptance" => {
                    let n = c.int("number of acceptance sets")?;
                    let a = c.acc_or()?;
                    acceptance = Some((n, a));
                }
                _ => {
                    // Other headers (name, acc-name, properties, ...) carry
                    // no information we need; their values end with the line.
                    while c.pos < c.toks.len()
                        && c.toks[c.pos].1 == line
                        && !matches!(c.peek(), Some(Tok::Header(_)) | Some(Tok::Body))
                    {
                        c.next();
                    }
                }
            },
            Some(_) => return Err(syntax(line, "expected a header name followed by ':'")),
            None => return Err(syntax(line, "missing --BODY--")),
        }
    }
    if !seen_version {
        return Err(syntax(1, "missing 'HOA: v1' header"));
    }
    let aps = aps.unwrap_or_default();
    let alphabet = Alphabet::new(aps.clone()).map_err(AutomatonError::from)?;
    if alphabet.len() != aps.len() {
        return Err(syntax(1, "duplicate AP name"));
    }
    let (num_sets, acc) = acceptance.ok_or_else(|| syntax(1, "missing Acceptance header"))?;
    let specs = rabin_shape(&acc)?;
    for s in &specs {
        for x in [s.fin, s.inf].into_iter().flatten() {
            if x >= num_sets {
                return Err(HoaError::UnsupportedAcceptance(format!(
                    "set {x} exceeds declared count {num_sets}"
                )));
            }
        }
    }

    // Body.
    let mut states: HashMap<usize, RawState> = HashMap::new();
    let mut current: Option<usize> = None;
    loop {
        let line = c.line();
        match c.peek().cloned() {
            Some(Tok::End) => {
                c.next();
                break;
            }
            None => return Err(syntax(line, "missing --END--")),
            Some(Tok::Header(h)) if h == "State" => {
                c.next();
                if c.peek() == Some(&Tok::Punct('[')) {
                    return Err(syntax(line, "state labels are not supported"));
                }
                let id = c.int("state number")?;
                if let Some(Tok::Str(_)) = c.peek() {
                    c.next();
                }
                let marks = read_marks(&mut c)?;
                if states.contains_key(&id) {
                    return Err(syntax(line, format!("state {id} defined twice")));
                }
                states.insert(
                    id,
                    RawState {
                        marks,
                        edges: Vec::new(),
                        line,
                    },
                );
                current = Some(id);
            }
            Some(Tok::Header(h)) => return Err(syntax(line, format!("unexpected '{h}:' in body"))),
            Some(_) => {
                let Some(src) = current else {
                    return Err(syntax(line, "edge before any State:"));
                };
                let label = if c.eat('[') {
                    let l = c.label_or(aps.len())?;
                    c.expect(']')?;
                    Some(l)
                } else {
                    None
                };
                let dst = c.int("edge target")?;
                if c.peek() == Some(&Tok::Punct('&')) {
                    return Err(HoaError::NonDeterministic {
                        line,
                        message: "universal branching".into(),
                    });
                }
                let marks = read_marks(&mut c)?;
                states.get_mut(&src).expect("current state").edges.push(RawEdge {
                    label,
                    dst,
                    marks,
                    line,
                });
            }
        }
    }

    let n = num_states.unwrap_or_else(|| states.keys().max().map_or(0, |m| m + 1));
    let start = start.ok_or_else(|| syntax(1, "missing Start header"))?;
    if start >= n {
        return Err(syntax(1, format!("start state {start} out of range")));
    }
    for (id, st) in &states {
        if *id >= n {
            return Err(syntax(st.line, format!("state {id} out of range")));
        }
        for e in &st.edges {
            if e.dst >= n {
                return Err(syntax(e.line, format!("edge target {} out of range", e.dst)));
            }
        }
    }

    // Deterministic successor table with edge marks; None = missing edge.
    let letters = alphabet.num_letters();
    let mut table: Vec<Vec<Option<MarkedEdge>>> = vec![vec![None; letters]; n];
    let mut state_marks: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (&id, st) in &states {
        state_marks[id] = st.marks.clone();
        let implicit = st.edges.iter().all(|e| e.label.is_none());
        if implicit && !st.edges.is_empty() && st.edges.len() != letters {
            return Err(syntax(
                st.line,
                format!("implicit labels need {letters} edges, found {}", st.edges.len()),
            ));
        }
        for (k, e) in st.edges.iter().enumerate() {
            let matches: Vec<Letter> = match &e.label {
                Some(l) => alphabet.letters().filter(|&a| l.eval(a)).collect(),
                None if implicit => vec![Letter(k as u32)],
                None => return Err(syntax(e.line, "mixing labelled and unlabelled edges")),
            };
            for a in matches {
                let slot = &mut table[id][a.index()];
                if slot.is_some() {
                    return Err(HoaError::NonDeterministic {
                        line: e.line,
                        message: format!(
                            "state {id} has two edges for letter {}",
                            alphabet.display(a)
                        ),
                    });
                }
                *slot = Some((e.dst, e.marks.clone()));
            }
        }
    }

    // Split states by the marks of the edge used to enter them. A missing
    // edge leads to the sink, which carries no marks and loops.
    type Key = Option<(usize, BTreeSet<usize>)>;
    let mut ids: HashMap<Key, usize> = HashMap::new();
    let mut keys: Vec<Key> = Vec::new();
    let mut queue = VecDeque::new();
    let init: Key = Some((start, BTreeSet::new()));
    ids.insert(init.clone(), 0);
    keys.push(init);
    queue.push_back(0);
    let mut trans: Vec<Vec<usize>> = Vec::new();
    while let Some(id) = queue.pop_front() {
        let row = alphabet
            .letters()
            .map(|a| {
                let key: Key = match &keys[id] {
                    None => None,
                    Some((q, _)) => table[*q][a.index()]
                        .as_ref()
                        .map(|(t, m)| (*t, m.iter().copied().collect())),
                };
                *ids.entry(key.clone()).or_insert_with(|| {
                    keys.push(key);
                    queue.push_back(keys.len() - 1);
                    keys.len() - 1
                })
            })
            .collect();
        trans.push(row);
    }
    let marks_of = |k: &Key| -> BTreeSet<usize> {
        match k {
            None => BTreeSet::new(),
            Some((q, m)) => m.iter().chain(&state_marks[*q]).copied().collect(),
        }
    };
    let all_marks: Vec<BTreeSet<usize>> = keys.iter().map(marks_of).collect();
    let pairs = specs
        .iter()
        .map(|s| {
            let with = |set: usize| -> Vec<usize> {
                (0..keys.len()).filter(|&i| all_marks[i].contains(&set)).collect()
            };
            let inf = match s.inf {
                Some(x) => with(x),
                None => (0..keys.len()).collect(),
            };
            let fin = s.fin.map(with).unwrap_or_default();
            RabinPair::new(inf, fin)
        })
        .collect();
    Ok(RabinAutomaton::new(alphabet, 0, trans, pairs)?)
}

fn read_marks(c: &mut Cursor) -> Result<Vec<usize>, HoaError> {
    let mut marks = Vec::new();
    if c.eat('{') {
        while !c.eat('}') {
            marks.push(c.int("acceptance set number")?);
        }
    }
    Ok(marks)
}

fn minterm(ab: &Alphabet, a: Letter) -> String {
    if ab.is_empty() {
        return "t".into();
    }
    (0..ab.len())
        .map(|i| if a.contains(i) { format!("{i}") } else { format!("!{i}") })
        .collect::<Vec<_>>()
        .join("&")
}

/// Prints the automaton in HOA v1 with state-based Rabin acceptance.
pub fn print_hoa(a: &RabinAutomaton) -> String {
    let ab = a.alphabet();
    let mut s = String::new();
    let k = a.pairs().len();
    writeln!(s, "HOA: v1").unwrap();
    writeln!(s, "States: {}", a.num_states()).unwrap();
    writeln!(s, "Start: {}", a.initial()).unwrap();
    write!(s, "AP: {}", ab.len()).unwrap();
    for n in ab.names() {
        write!(s, " \"{n}\"").unwrap();
    }
    writeln!(s).unwrap();
    writeln!(s, "acc-name: Rabin {k}").unwrap();
    let cond = if k == 0 {
        "f".to_string()
    } else {
        (0..k)
            .map(|i| format!("(Fin({})&Inf({}))", 2 * i, 2 * i + 1))
            .collect::<Vec<_>>()
            .join(" | ")
    };
    writeln!(s, "Acceptance: {} {cond}", 2 * k).unwrap();
    writeln!(s, "properties: deterministic complete state-acc trans-labels explicit-labels").unwrap();
    writeln!(s, "--BODY--").unwrap();
    let marks = a.pair_marks();
    for (q, mk) in marks.iter().enumerate() {
        let mut sets: Vec<usize> = mk
            .fin
            .iter()
            .map(|i| 2 * i)
            .chain(mk.inf.iter().map(|i| 2 * i + 1))
            .collect();
        sets.sort_unstable();
        write!(s, "State: {q}").unwrap();
        if !sets.is_empty() {
            let list: Vec<String> = sets.iter().map(|x| x.to_string()).collect();
            write!(s, " {{{}}}", list.join(" ")).unwrap();
        }
        writeln!(s).unwrap();
        let mut by_dst: Vec<(usize, Vec<Letter>)> = Vec::new();
        for l in ab.letters() {
            let t = a.step(q, l);
            match by_dst.iter_mut().find(|(d, _)| *d == t) {
                Some((_, ls)) => ls.push(l),
                None => by_dst.push((t, vec![l])),
            }
        }
        for (t, ls) in by_dst {
            let label = if ls.len() == ab.num_letters() {
                "t".to_string()
            } else {
                ls.iter()
                    .map(|&l| minterm(ab, l))
                    .collect::<Vec<_>>()
                    .join(" | ")
            };
            writeln!(s, "[{label}] {t}").unwrap();
        }
    }
    writeln!(s, "--END--").unwrap();
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const PERSISTENCE: &str = r#"HOA: v1
name: "F G P"
States: 2
Start: 0
AP: 1 "P"
acc-name: Rabin 1
Acceptance: 2 Fin(0) & Inf(1)
--BODY--
State: 0 {0}
[!0] 0
[0] 1
State: 1 {1}
[!0] 0
[0] 1
--END--
"#;

    #[test]
    fn parses_single_pair() {
        let a = parse_hoa(PERSISTENCE).unwrap();
        assert_eq!(a.num_states(), 2);
        assert_eq!(a.pairs(), &[RabinPair::new(vec![1], vec![0])]);
        assert_eq!(a.step(0, Letter(1)), 1);
        assert_eq!(a.step(1, Letter(0)), 0);
    }

    #[test]
    fn round_trip() {
        let a = parse_hoa(PERSISTENCE).unwrap();
        assert_eq!(parse_hoa(&print_hoa(&a)).unwrap(), a);
    }

    #[test]
    fn malformed_header_names_line() {
        let text = PERSISTENCE.replace("States: 2", "States two");
        match parse_hoa(&text) {
            Err(HoaError::Syntax { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn nondeterminism_rejected() {
        let text = PERSISTENCE.replace("[0] 1\nState: 1", "[t] 1\nState: 1");
        assert!(matches!(
            parse_hoa(&text),
            Err(HoaError::NonDeterministic { line: 11, .. })
        ));
    }

    #[test]
    fn undeclared_ap_rejected() {
        let text = PERSISTENCE.replace("[0] 1\nState: 1", "[1] 1\nState: 1");
        assert!(matches!(
            parse_hoa(&text),
            Err(HoaError::UndeclaredAp { index: 1, .. })
        ));
    }

    #[test]
    fn unsupported_acceptance_rejected() {
        let text = PERSISTENCE.replace("Fin(0) & Inf(1)", "Inf(0) & Inf(1)");
        assert!(matches!(
            parse_hoa(&text),
            Err(HoaError::UnsupportedAcceptance(_))
        ));
        let text = PERSISTENCE.replace("Fin(0) & Inf(1)", "Fin(0) | Inf(1) & (Fin(0) | Inf(1))");
        assert!(matches!(
            parse_hoa(&text),
            Err(HoaError::UnsupportedAcceptance(_))
        ));
    }

    #[test]
    fn incomplete_input_gets_rejecting_sink() {
        let text = "HOA: v1\nStates: 1\nStart: 0\nAP: 1 \"p\"\nAcceptance: 1 Inf(0)\n--BODY--\nState: 0 {0}\n[0] 0\n--END--\n";
        let a = parse_hoa(text).unwrap();
        assert_eq!(a.num_states(), 2);
        let sink = a.step(0, Letter(0));
        assert_eq!(a.step(sink, Letter(1)), sink);
        assert_eq!(a.pairs(), &[RabinPair::new(vec![0], vec![])]);
    }

    #[test]
    fn transition_marks_split_states() {
        // Büchi with the mark on the edge entering state 0 on p: G F p.
        let text = "HOA: v1\nStates: 1\nStart: 0\nAP: 1 \"p\"\nAcceptance: 1 Inf(0)\n--BODY--\nState: 0\n[0] 0 {0}\n[!0] 0\n--END--\n";
        let a = parse_hoa(text).unwrap();
        assert_eq!(a.num_states(), 2);
        use crate::ltl::LassoWord;
        assert!(a.accepts_lasso(&LassoWord::new(vec![], vec![Letter(0), Letter(1)])));
        assert!(!a.accepts_lasso(&LassoWord::new(vec![Letter(1)], vec![Letter(0)])));
    }

    #[test]
    fn implicit_labels() {
        let text = "HOA: v1\nStates: 2\nStart: 0\nAP: 1 \"P\"\nAcceptance: 2 Fin(0)&Inf(1)\n--BODY--\nState: 0 {0}\n0\n1\nState: 1 {1}\n0\n1\n--END--\n";
        assert_eq!(parse_hoa(text).unwrap(), parse_hoa(PERSISTENCE).unwrap());
    }
}
