use std::collections::BTreeSet;
use std::fmt;

/// An LTL formula over named atomic propositions.
///
/// `Eventually` and `Always` are kept as nodes so that parsed formulas print
/// back the way they were written; [`Formula::expand_derived`] rewrites them
/// into `Until` and `Release`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
    Eventually(Box<Formula>),
    Always(Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::or(Formula::not(a), b)
    }

    pub fn next(f: Formula) -> Formula {
        Formula::Next(Box::new(f))
    }

    pub fn until(a: Formula, b: Formula) -> Formula {
        Formula::Until(Box::new(a), Box::new(b))
    }

    pub fn release(a: Formula, b: Formula) -> Formula {
        Formula::Release(Box::new(a), Box::new(b))
    }

    pub fn eventually(f: Formula) -> Formula {
        Formula::Eventually(Box::new(f))
    }

    pub fn always(f: Formula) -> Formula {
        Formula::Always(Box::new(f))
    }

    /// Number of nodes in the syntax tree.
    pub fn size(&self) -> usize {
        use Formula::*;
        match self {
            True | False | Atom(_) => 1,
            Not(a) | Next(a) | Eventually(a) | Always(a) => 1 + a.size(),
            And(a, b) | Or(a, b) | Until(a, b) | Release(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Atom names in order of first occurrence (left to right).
    pub fn atoms(&self) -> Vec<String> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        self.collect_atoms(&mut seen, &mut out);
        out
    }

    fn collect_atoms(&self, seen: &mut BTreeSet<String>, out: &mut Vec<String>) {
        use Formula::*;
        match self {
            True | False => {}
            Atom(n) => {
                if seen.insert(n.clone()) {
                    out.push(n.clone());
                }
            }
            Not(a) | Next(a) | Eventually(a) | Always(a) => a.collect_atoms(seen, out),
            And(a, b) | Or(a, b) | Until(a, b) | Release(a, b) => {
                a.collect_atoms(seen, out);
                b.collect_atoms(seen, out);
            }
        }
    }

    /// Rewrites `F a` into `true U a` and `G a` into `false R a`.
    pub fn expand_derived(&self) -> Formula {
        use Formula::*;
        match self {
            True | False | Atom(_) => self.clone(),
            Not(a) => Formula::not(a.expand_derived()),
            Next(a) => Formula::next(a.expand_derived()),
            And(a, b) => Formula::and(a.expand_derived(), b.expand_derived()),
            Or(a, b) => Formula::or(a.expand_derived(), b.expand_derived()),
            Until(a, b) => Formula::until(a.expand_derived(), b.expand_derived()),
            Release(a, b) => Formula::release(a.expand_derived(), b.expand_derived()),
            Eventually(a) => Formula::until(True, a.expand_derived()),
            Always(a) => Formula::release(False, a.expand_derived()),
        }
    }

    /// Negation normal form: negations are pushed down to atoms. `F` and `G`
    /// are kept (they are each other's duals).
    pub fn to_nnf(&self) -> Formula {
        self.nnf(false)
    }

    fn nnf(&self, neg: bool) -> Formula {
        use Formula::*;
        match (self, neg) {
            (True, false) | (False, true) => True,
            (True, true) | (False, false) => False,
            (Atom(_), false) => self.clone(),
            (Atom(_), true) => Formula::not(self.clone()),
            (Not(a), _) => a.nnf(!neg),
            (Next(a), _) => Formula::next(a.nnf(neg)),
            (And(a, b), false) => Formula::and(a.nnf(false), b.nnf(false)),
            (And(a, b), true) => Formula::or(a.nnf(true), b.nnf(true)),
            (Or(a, b), false) => Formula::or(a.nnf(false), b.nnf(false)),
            (Or(a, b), true) => Formula::and(a.nnf(true), b.nnf(true)),
            (Until(a, b), false) => Formula::until(a.nnf(false), b.nnf(false)),
            (Until(a, b), true) => Formula::release(a.nnf(true), b.nnf(true)),
            (Release(a, b), false) => Formula::release(a.nnf(false), b.nnf(false)),
            (Release(a, b), true) => Formula::until(a.nnf(true), b.nnf(true)),
            (Eventually(a), false) => Formula::eventually(a.nnf(false)),
            (Eventually(a), true) => Formula::always(a.nnf(true)),
            (Always(a), false) => Formula::always(a.nnf(false)),
            (Always(a), true) => Formula::eventually(a.nnf(true)),
        }
    }

    /// Equivalence-preserving rewrites: constant folding, idempotence and
    /// a few temporal absorption laws (`F F a = F a`, `G (a R b) = G b`, ...).
    pub fn simplify(&self) -> Formula {
        use Formula::*;
        match self {
            True | False | Atom(_) => self.clone(),
            Not(a) => match a.simplify() {
                True => False,
                False => True,
                Not(b) => *b,
                b => Formula::not(b),
            },
            And(a, b) => match (a.simplify(), b.simplify()) {
                (False, _) | (_, False) => False,
                (True, x) | (x, True) => x,
                (x, y) if x == y => x,
                (x, y) => Formula::and(x, y),
            },
            Or(a, b) => match (a.simplify(), b.simplify()) {
                (True, _) | (_, True) => True,
                (False, x) | (x, False) => x,
                (x, y) if x == y => x,
                (x, y) => Formula::or(x, y),
            },
            Next(a) => match a.simplify() {
                x @ (True | False) => x,
                x => Formula::next(x),
            },
            Until(a, b) => match (a.simplify(), b.simplify()) {
                (_, x @ (True | False)) => x,
                (False, y) => y,
                (True, y) => Formula::eventually(y).simplify(),
                (_, y @ Eventually(_)) => y,
                (x, y) if x == y => y,
                (x, y) => Formula::until(x, y),
            },
            Release(a, b) => match (a.simplify(), b.simplify()) {
                (_, y @ (True | False)) => y,
                (True, y) => y,
                (False, y) => Formula::always(y).simplify(),
                (_, y @ Always(_)) => y,
                (x, y) if x == y => y,
                (x, y) => Formula::release(x, y),
            },
            Eventually(a) => match a.simplify() {
                x @ (True | False) => x,
                x @ Eventually(_) => x,
                Until(_, y) => Formula::eventually(*y),
                Always(y) if matches!(*y, Eventually(_)) => Always(y),
                x => Formula::eventually(x),
            },
            Always(a) => match a.simplify() {
                x @ (True | False) => x,
                x @ Always(_) => x,
                Release(_, y) => Formula::always(*y),
                Eventually(y) if matches!(*y, Always(_)) => Eventually(y),
                x => Formula::always(x),
            },
        }
    }

    pub fn is_nnf(&self) -> bool {
        use Formula::*;
        match self {
            True | False | Atom(_) => true,
            Not(a) => matches!(**a, Atom(_)),
            Next(a) | Eventually(a) | Always(a) => a.is_nnf(),
            And(a, b) | Or(a, b) | Until(a, b) | Release(a, b) => a.is_nnf() && b.is_nnf(),
        }
    }

    fn precedence(&self) -> u8 {
        use Formula::*;
        match self {
            Or(..) => 1,
            And(..) => 2,
            Until(..) | Release(..) => 3,
            _ => 4,
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Formula::*;
        // Binary operands are parenthesised unless they bind strictly
        // tighter, so the output always parses back to the same tree.
        let operand = |f: &mut fmt::Formatter<'_>, sub: &Formula, min: u8| {
            if sub.precedence() > min {
                write!(f, "{sub}")
            } else {
                write!(f, "({sub})")
            }
        };
        match self {
            True => write!(f, "true"),
            False => write!(f, "false"),
            Atom(n) => write!(f, "{n}"),
            Not(a) => {
                write!(f, "!")?;
                operand(f, a, 3)
            }
            Next(a) => {
                write!(f, "X ")?;
                operand(f, a, 3)
            }
            Eventually(a) => {
                write!(f, "F ")?;
                operand(f, a, 3)
            }
            Always(a) => {
                write!(f, "G ")?;
                operand(f, a, 3)
            }
            And(a, b) | Or(a, b) | Until(a, b) | Release(a, b) => {
                let (op, p) = match self {
                    And(..) => ("&", 2),
                    Or(..) => ("|", 1),
                    Until(..) => ("U", 3),
                    _ => ("R", 3),
                };
                operand(f, a, p)?;
                write!(f, " {op} ")?;
                operand(f, b, p)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }
    fn q() -> Formula {
        Formula::atom("q")
    }

    #[test]
    fn nnf_until_dual() {
        let f = Formula::not(Formula::until(p(), q()));
        assert_eq!(
            f.to_nnf(),
            Formula::release(Formula::not(p()), Formula::not(q()))
        );
    }

    #[test]
    fn nnf_double_negation() {
        assert_eq!(Formula::not(Formula::not(p())).to_nnf(), p());
    }

    #[test]
    fn nnf_next_self_dual() {
        assert_eq!(
            Formula::not(Formula::next(p())).to_nnf(),
            Formula::next(Formula::not(p()))
        );
    }

    #[test]
    fn nnf_constants_and_temporal_duals() {
        assert_eq!(Formula::not(Formula::True).to_nnf(), Formula::False);
        let f = Formula::not(Formula::always(Formula::eventually(p())));
        assert_eq!(
            f.to_nnf(),
            Formula::eventually(Formula::always(Formula::not(p())))
        );
        assert!(f.to_nnf().is_nnf());
        assert!(!f.is_nnf());
    }

    #[test]
    fn expand_derived_operators() {
        let f = Formula::eventually(Formula::always(p()));
        assert_eq!(
            f.expand_derived(),
            Formula::until(Formula::True, Formula::release(Formula::False, p()))
        );
    }

    #[test]
    fn atoms_in_order() {
        let f = Formula::until(q(), Formula::and(p(), q()));
        assert_eq!(f.atoms(), vec!["q".to_string(), "p".to_string()]);
        assert_eq!(f.size(), 5);
    }
}
