//! Text syntax for LTL.
//!
//! ```text
//! implies := or ( "->" implies )?
//! or      := and ( "|" and )*
//! and     := until ( "&" until )*
//! until   := unary ( "U" until )?
//! unary   := ( "!" | "X" | "F" | "G" ) unary | atom | "(" implies ")"
//! atom    := "tt" | "ff" | "true" | "false" | [a-zA-Z_][a-zA-Z0-9_]*
//! ```
//!
//! Implication is desugared to `!a | b`; the result may contain general
//! negation and must go through [`to_nnf`](super::to_nnf) before translation.

use std::fmt;

use thiserror::Error;

use super::formula::{Formula, Prop};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{kind} at offset {position}")]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    MissingOperand(&'static str),
    UnknownOperator(String),
    UnexpectedToken(String),
    UnclosedParen,
    TrailingInput(String),
    Empty,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::MissingOperand(side) => write!(f, "missing {side} operand"),
            ParseErrorKind::UnknownOperator(op) => write!(f, "unknown operator `{op}`"),
            ParseErrorKind::UnexpectedToken(t) => write!(f, "unexpected `{t}`"),
            ParseErrorKind::UnclosedParen => f.write_str("unclosed parenthesis"),
            ParseErrorKind::TrailingInput(t) => write!(f, "trailing input starting at `{t}`"),
            ParseErrorKind::Empty => f.write_str("empty formula"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    True,
    False,
    Not,
    Next,
    Finally,
    Globally,
    Until,
    And,
    Or,
    Implies,
    LParen,
    RParen,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => s.as_str(),
            Tok::True => "tt",
            Tok::False => "ff",
            Tok::Not => "!",
            Tok::Next => "X",
            Tok::Finally => "F",
            Tok::Globally => "G",
            Tok::Until => "U",
            Tok::And => "&",
            Tok::Or => "|",
            Tok::Implies => "->",
            Tok::LParen => "(",
            Tok::RParen => ")",
        };
        f.write_str(s)
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let word = &text[start..i];
            let tok = match word {
                "tt" | "true" => Tok::True,
                "ff" | "false" => Tok::False,
                "X" => Tok::Next,
                "F" => Tok::Finally,
                "G" => Tok::Globally,
                "U" => Tok::Until,
                _ => Tok::Ident(word.to_string()),
            };
            toks.push((start, tok));
            continue;
        }
        let tok = match c {
            '!' => Tok::Not,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '&' => {
                if bytes.get(i + 1) == Some(&b'&') {
                    i += 1;
                }
                Tok::And
            }
            '|' => {
                if bytes.get(i + 1) == Some(&b'|') {
                    i += 1;
                }
                Tok::Or
            }
            '-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Implies
            }
            _ => {
                let end = text[start..]
                    .find(|ch: char| ch.is_ascii_whitespace() || ch.is_ascii_alphanumeric())
                    .map_or(text.len(), |o| start + o.max(c.len_utf8()));
                return Err(ParseError {
                    position: start,
                    kind: ParseErrorKind::UnknownOperator(text[start..end].to_string()),
                });
            }
        };
        i += 1;
        toks.push((start, tok));
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    props: &'a mut Vec<String>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn missing(&self, side: &'static str) -> ParseError {
        ParseError {
            position: self.offset(),
            kind: ParseErrorKind::MissingOperand(side),
        }
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Implies) {
            if self.peek().is_none() {
                return Err(self.missing("right"));
            }
            let rhs = self.implies()?;
            return Ok(Formula::or(vec![Formula::not(lhs), rhs]));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut items = vec![self.and()?];
        while self.eat(&Tok::Or) {
            if self.peek().is_none() {
                return Err(self.missing("right"));
            }
            items.push(self.and()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Formula::or(items)
        })
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut items = vec![self.until()?];
        while self.eat(&Tok::And) {
            if self.peek().is_none() {
                return Err(self.missing("right"));
            }
            items.push(self.until()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Formula::and(items)
        })
    }

    fn until(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.unary()?;
        if self.eat(&Tok::Until) {
            if self.peek().is_none() {
                return Err(self.missing("right"));
            }
            let rhs = self.until()?;
            return Ok(Formula::until(lhs, rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let offset = self.offset();
        let Some(tok) = self.peek().cloned() else {
            return Err(self.missing("an"));
        };
        self.pos += 1;
        let unary_operand = |p: &mut Self| {
            if p.peek().is_none() {
                Err(p.missing("unary"))
            } else {
                p.unary()
            }
        };
        match tok {
            Tok::Not => Ok(Formula::not(unary_operand(self)?)),
            Tok::Next => Ok(Formula::next(unary_operand(self)?)),
            Tok::Finally => Ok(Formula::finally(unary_operand(self)?)),
            Tok::Globally => Ok(Formula::globally(unary_operand(self)?)),
            Tok::True => Ok(Formula::tt()),
            Tok::False => Ok(Formula::ff()),
            Tok::Ident(name) => {
                let index = match self.props.iter().position(|p| *p == name) {
                    Some(i) => i,
                    None => {
                        self.props.push(name.clone());
                        self.props.len() - 1
                    }
                };
                Ok(Formula::atom(Prop::new(index as u32, name)))
            }
            Tok::LParen => {
                let inner = self.implies()?;
                if !self.eat(&Tok::RParen) {
                    return Err(ParseError {
                        position: offset,
                        kind: ParseErrorKind::UnclosedParen,
                    });
                }
                Ok(inner)
            }
            other => Err(ParseError {
                position: offset,
                kind: if matches!(other, Tok::Until | Tok::And | Tok::Or | Tok::Implies) {
                    ParseErrorKind::MissingOperand("left")
                } else {
                    ParseErrorKind::UnexpectedToken(other.to_string())
                },
            }),
        }
    }
}

/// Parses `text`, resolving atoms against `props` and appending any
/// proposition not yet in the table.
pub fn parse_ltl(text: &str, props: &mut Vec<String>) -> Result<Formula, ParseError> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(ParseError {
            position: 0,
            kind: ParseErrorKind::Empty,
        });
    }
    let mut parser = Parser {
        toks,
        pos: 0,
        end: text.len(),
        props,
    };
    let f = parser.implies()?;
    if let Some((offset, tok)) = parser.toks.get(parser.pos) {
        return Err(ParseError {
            position: *offset,
            kind: ParseErrorKind::TrailingInput(tok.to_string()),
        });
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::formula::Node;

    fn parse(text: &str) -> (Formula, Vec<String>) {
        let mut props = Vec::new();
        let f = parse_ltl(text, &mut props).unwrap();
        (f, props)
    }

    #[test]
    fn parses_disjunction_of_persistence() {
        let (f, props) = parse("F G a | F G b");
        assert_eq!(props, ["a", "b"]);
        assert_eq!(f.to_string(), "F G a | F G b");
        assert!(matches!(f.node(), Node::Or(cs) if cs.len() == 2));
    }

    #[test]
    fn keeps_negation_before_normalization() {
        let (f, _) = parse("!(X a)");
        match f.node() {
            Node::Not(g) => assert!(matches!(g.node(), Node::Next(_))),
            other => panic!("expected negation, got {other:?}"),
        }
    }

    #[test]
    fn dangling_until_is_an_error() {
        let err = parse_ltl("a U", &mut Vec::new()).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::MissingOperand("right"));
        assert_eq!(err.position, 3);
    }

    #[test]
    fn unknown_operator_is_reported() {
        let err = parse_ltl("a <-> b", &mut Vec::new()).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::UnknownOperator(_)));
        assert_eq!(err.position, 2);
    }

    #[test]
    fn precedence_and_associativity() {
        let (f, _) = parse("a | b & c U d -> e");
        assert_eq!(f.to_string(), "!(a | (b & (c U d))) | e");
        let (g, _) = parse("a U b U c");
        assert_eq!(g.to_string(), "a U (b U c)");
    }

    #[test]
    fn reuses_existing_proposition_indices() {
        let mut props = vec!["b".to_string()];
        let f = parse_ltl("a & b", &mut props).unwrap();
        assert_eq!(props, ["b", "a"]);
        let idx: Vec<u32> = f.props().iter().map(Prop::index).collect();
        assert_eq!(idx, [0, 1]);
    }

    #[test]
    fn unclosed_paren() {
        let err = parse_ltl("(a & b", &mut Vec::new()).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnclosedParen);
    }

    #[test]
    fn display_round_trips() {
        for text in ["G (a -> F b)", "X X !a", "(a U b) & G F c", "tt | ff"] {
            let (f, mut props) = parse(text);
            let again = parse_ltl(&f.to_string(), &mut props).unwrap();
            assert_eq!(f, again, "{text}");
        }
    }
}
