//! Recursive-descent parser for the textual LTL syntax.
//!
//! Precedence, loosest first: `->` (right associative), `|`/`OR`, `&`/`AND`,
//! `U`/`R` (right associative), then the prefix operators `!`/`NOT`, `X`,
//! `F`, `G`.

use super::Formula;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Next,
    Eventually,
    Always,
    Until,
    Release,
    LParen,
    RParen,
    End,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let err = |message: String| ParseError {
            line: l0,
            column: c0,
            message,
        };
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let two: String = chars[i..chars.len().min(i + 2)].iter().collect();
        let (tok, len) = match c {
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            '!' | '~' => (Tok::Not, 1),
            '&' if two == "&&" => (Tok::And, 2),
            '&' => (Tok::And, 1),
            '|' if two == "||" => (Tok::Or, 2),
            '|' => (Tok::Or, 1),
            '-' if two == "->" => (Tok::Implies, 2),
            '=' if two == "=>" => (Tok::Implies, 2),
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                let tok = match word.as_str() {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    "NOT" => Tok::Not,
                    "AND" => Tok::And,
                    "OR" => Tok::Or,
                    "X" => Tok::Next,
                    "F" => Tok::Eventually,
                    "G" => Tok::Always,
                    "U" => Tok::Until,
                    "R" => Tok::Release,
                    _ => Tok::Ident(word),
                };
                (tok, j - i)
            }
            _ => return Err(err(format!("unknown operator '{c}'"))),
        };
        out.push(Spanned {
            tok,
            line: l0,
            column: c0,
        });
        i += len;
        col += len;
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let s = &self.toks[self.pos];
        ParseError {
            line: s.line,
            column: s.column,
            message: message.into(),
        }
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            lhs = Formula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.binary()?;
        while *self.peek() == Tok::And {
            self.bump();
            lhs = Formula::and(lhs, self.binary()?);
        }
        Ok(lhs)
    }

    fn binary(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.unary()?;
        match self.peek() {
            Tok::Until => {
                self.bump();
                Ok(Formula::until(lhs, self.binary()?))
            }
            Tok::Release => {
                self.bump();
                Ok(Formula::release(lhs, self.binary()?))
            }
            _ => Ok(lhs),
        }
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Next => {
                self.bump();
                Ok(Formula::next(self.unary()?))
            }
            Tok::Eventually => {
                self.bump();
                Ok(Formula::eventually(self.unary()?))
            }
            Tok::Always => {
                self.bump();
                Ok(Formula::always(self.unary()?))
            }
            Tok::True => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::False => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Formula::Atom(name))
            }
            Tok::LParen => {
                self.bump();
                let f = self.implication()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error("expected ')'"));
                }
                self.bump();
                Ok(f)
            }
            Tok::End => Err(self.error("unexpected end of formula")),
            t => Err(self.error(format!("unexpected token {t:?}"))),
        }
    }
}

/// Parses an LTL formula. Derived operators (`F`, `G`, `->`) are kept as
/// written except for implication, which becomes `!a | b`.
pub fn parse_ltl(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let f = p.implication()?;
    if *p.peek() != Tok::End {
        return Err(p.error("trailing input"));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Formula as L;

    #[test]
    fn eventually_always() {
        assert_eq!(
            parse_ltl("F G p").unwrap(),
            L::eventually(L::always(L::atom("p")))
        );
    }

    #[test]
    fn literal_true() {
        assert_eq!(parse_ltl("true").unwrap(), L::True);
    }

    #[test]
    fn response_property() {
        assert_eq!(
            parse_ltl("G (r -> F a)").unwrap(),
            L::always(L::or(L::not(L::atom("r")), L::eventually(L::atom("a"))))
        );
    }

    #[test]
    fn precedence() {
        // unary > U > & > |
        let f = parse_ltl("a | b & c U !d").unwrap();
        let expect = L::or(
            L::atom("a"),
            L::and(L::atom("b"), L::until(L::atom("c"), L::not(L::atom("d")))),
        );
        assert_eq!(f, expect);
        assert_eq!(parse_ltl("a OR b AND NOT c").unwrap(), parse_ltl("a | b & !c").unwrap());
        assert_eq!(
            parse_ltl("a U b U c").unwrap(),
            L::until(L::atom("a"), L::until(L::atom("b"), L::atom("c")))
        );
        assert_eq!(
            parse_ltl("X X p").unwrap(),
            L::next(L::next(L::atom("p")))
        );
    }

    #[test]
    fn errors_carry_position() {
        let e = parse_ltl("p &\n  # q").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        assert!(e.message.contains("unknown operator"));
        let e = parse_ltl("(p U q").unwrap_err();
        assert!(e.message.contains("')'"));
        assert!(parse_ltl("p q").is_err());
        assert!(parse_ltl("").is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "F G p",
            "G (r -> F a)",
            "(p U q) U r",
            "!(p & q) | X (a R b)",
            "p U (q & r)",
            "a | b & c",
        ] {
            let f = parse_ltl(s).unwrap();
            assert_eq!(parse_ltl(&f.to_string()).unwrap(), f, "{s} -> {f}");
        }
    }
}
