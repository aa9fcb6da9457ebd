//! Atomic propositions and letters of the alphabet `2^AP`.

use std::collections::HashMap;
use std::fmt;

/// Largest supported number of atomic propositions. Letters are expanded
/// explicitly, so every automaton carries `2^|AP|` successors per state.
pub const MAX_AP: usize = 16;

/// A letter of `2^AP`: bit `i` is set iff proposition `i` holds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(pub u32);

impl Letter {
    pub const EMPTY: Letter = Letter(0);

    pub fn contains(self, prop: usize) -> bool {
        self.0 >> prop & 1 == 1
    }

    pub fn with(self, prop: usize) -> Letter {
        Letter(self.0 | 1 << prop)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// An ordered, duplicate-free list of atomic proposition names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("too many atomic propositions ({0}, at most {MAX_AP} supported)")]
pub struct TooManyPropositions(pub usize);

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Self, TooManyPropositions>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut ab = Alphabet::default();
        for n in names {
            ab.insert(n.into())?;
        }
        Ok(ab)
    }

    /// Adds `name` if absent and returns its index.
    pub fn insert(&mut self, name: String) -> Result<usize, TooManyPropositions> {
        if let Some(&i) = self.index.get(&name) {
            return Ok(i);
        }
        if self.names.len() == MAX_AP {
            return Err(TooManyPropositions(MAX_AP + 1));
        }
        let i = self.names.len();
        self.index.insert(name.clone(), i);
        self.names.push(name);
        Ok(i)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Number of letters, `2^|AP|`.
    pub fn num_letters(&self) -> usize {
        1 << self.names.len()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        (0..self.num_letters() as u32).map(Letter)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Builds the letter holding exactly the named propositions. Names not in
    /// the alphabet are ignored.
    pub fn letter<'s, I: IntoIterator<Item = &'s str>>(&self, props: I) -> Letter {
        props
            .into_iter()
            .filter_map(|p| self.position(p))
            .fold(Letter::EMPTY, Letter::with)
    }

    pub fn display(&self, letter: Letter) -> LetterDisplay<'_> {
        LetterDisplay {
            alphabet: self,
            letter,
        }
    }
}

pub struct LetterDisplay<'a> {
    alphabet: &'a Alphabet,
    letter: Letter,
}

impl fmt::Display for LetterDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for (i, n) in self.alphabet.names.iter().enumerate() {
            if self.letter.contains(i) {
                if !first {
                    write!(f, ",")?;
                }
                write!(f, "{n}")?;
                first = false;
            }
        }
        write!(f, "}}")
    }
}
