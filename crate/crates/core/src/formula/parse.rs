//! Recursive-descent parser for the concrete formula syntax.
//!
//! Grammar (precedence low to high, `->` right-associative):
//!
//! ```text
//! form  := impl
//! impl  := disj ('->' impl)?
//! disj  := conj ('|' conj)*
//! conj  := unary ('&' unary)*
//! unary := '!' unary | '<' ID '>' unary | '[' ID ']' unary | atom
//! atom  := 'alive' '(' ID ')' | ID '@' ID | 'true' | 'false' | '(' form ')'
//! ```

use std::fmt;

use thiserror::Error;

use super::{AgentId, Formula};

/// A parse failure, with the byte offset into the input and the set of
/// token descriptions that would have been accepted there.
#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub struct SyntaxError {
    pub offset: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at byte {}: found {}, expected {}",
            self.offset,
            self.found,
            self.expected.join(" or ")
        )
    }
}

/// Parses a formula. The constants `true`/`false` are rejected here because
/// they abbreviate `alive(a) | !alive(a)` for a fixed agent; use
/// [`parse_with_top_agent`] when an agent for them is in scope.
pub fn parse(text: &str) -> Result<Formula, SyntaxError> {
    Parser::new(text, None).run()
}

/// Parses a formula, expanding `true`/`false` using the given agent.
pub fn parse_with_top_agent(text: &str, top: &AgentId) -> Result<Formula, SyntaxError> {
    Parser::new(text, Some(top.clone())).run()
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Ident(String),
    Alive,
    True,
    False,
    Bang,
    Amp,
    Pipe,
    Arrow,
    At,
    LAngle,
    RAngle,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Alive => "`alive`".into(),
            Tok::True => "`true`".into(),
            Tok::False => "`false`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::At => "`@`".into(),
            Tok::LAngle => "`<`".into(),
            Tok::RAngle => "`>`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    top: Option<AgentId>,
    lex_error: Option<SyntaxError>,
}

impl Parser {
    fn new(text: &str, top: Option<AgentId>) -> Self {
        let mut toks = Vec::new();
        let mut lex_error = None;
        let bytes = text.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            if c.is_ascii_whitespace() {
                i += 1;
                continue;
            }
            let start = i;
            let tok = match c {
                '!' => {
                    i += 1;
                    Tok::Bang
                }
                '&' => {
                    i += 1;
                    Tok::Amp
                }
                '|' => {
                    i += 1;
                    Tok::Pipe
                }
                '@' => {
                    i += 1;
                    Tok::At
                }
                '<' => {
                    i += 1;
                    Tok::LAngle
                }
                '>' => {
                    i += 1;
                    Tok::RAngle
                }
                '[' => {
                    i += 1;
                    Tok::LBracket
                }
                ']' => {
                    i += 1;
                    Tok::RBracket
                }
                '(' => {
                    i += 1;
                    Tok::LParen
                }
                ')' => {
                    i += 1;
                    Tok::RParen
                }
                '-' if bytes.get(i + 1) == Some(&b'>') => {
                    i += 2;
                    Tok::Arrow
                }
                c if c.is_ascii_alphabetic() => {
                    let mut j = i + 1;
                    while j < bytes.len()
                        && ((bytes[j] as char).is_ascii_alphanumeric() || bytes[j] == b'_')
                    {
                        j += 1;
                    }
                    let word = &text[i..j];
                    i = j;
                    match word {
                        "alive" => Tok::Alive,
                        "true" => Tok::True,
                        "false" => Tok::False,
                        _ => Tok::Ident(word.to_string()),
                    }
                }
                other => {
                    lex_error = Some(SyntaxError {
                        offset: i,
                        expected: vec!["a token"],
                        found: format!("`{other}`"),
                    });
                    break;
                }
            };
            toks.push((start, tok));
        }
        toks.push((text.len(), Tok::Eof));
        Parser {
            toks,
            pos: 0,
            top,
            lex_error,
        }
    }

    fn run(mut self) -> Result<Formula, SyntaxError> {
        if let Some(err) = self.lex_error.take() {
            return Err(err);
        }
        let phi = self.implication()?;
        self.expect_eof()?;
        Ok(phi)
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: Vec<&'static str>) -> SyntaxError {
        SyntaxError {
            offset: self.offset(),
            expected,
            found: self.peek().describe(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &'static str) -> Result<(), SyntaxError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(vec![what]))
        }
    }

    fn expect_eof(&mut self) -> Result<(), SyntaxError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.error(vec!["end of input", "an operator"]))
        }
    }

    fn ident(&mut self, what: &'static str) -> Result<String, SyntaxError> {
        match self.peek() {
            Tok::Ident(_) => {
                if let Tok::Ident(s) = self.bump() {
                    Ok(s)
                } else {
                    unreachable!()
                }
            }
            _ => Err(self.error(vec![what])),
        }
    }

    fn implication(&mut self) -> Result<Formula, SyntaxError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, SyntaxError> {
        match self.peek() {
            Tok::Bang => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LAngle => {
                self.bump();
                let a = self.ident("an agent name")?;
                self.expect(Tok::RAngle, "`>`")?;
                Ok(Formula::diamond(AgentId(a), self.unary()?))
            }
            Tok::LBracket => {
                self.bump();
                let a = self.ident("an agent name")?;
                self.expect(Tok::RBracket, "`]`")?;
                Ok(Formula::boxed(AgentId(a), self.unary()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, SyntaxError> {
        match self.peek().clone() {
            Tok::Alive => {
                self.bump();
                self.expect(Tok::LParen, "`(`")?;
                let a = self.ident("an agent name")?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Formula::Global(AgentId(a)))
            }
            Tok::True => {
                let off = self.offset();
                self.bump();
                match &self.top {
                    Some(a) => Ok(Formula::top(a.clone())),
                    None => Err(SyntaxError {
                        offset: off,
                        expected: vec!["an atom (`true` needs an agent in scope)"],
                        found: "`true`".into(),
                    }),
                }
            }
            Tok::False => {
                let off = self.offset();
                self.bump();
                match &self.top {
                    Some(a) => Ok(Formula::bot(a.clone())),
                    None => Err(SyntaxError {
                        offset: off,
                        expected: vec!["an atom (`false` needs an agent in scope)"],
                        found: "`false`".into(),
                    }),
                }
            }
            Tok::LParen => {
                self.bump();
                let phi = self.implication()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(phi)
            }
            Tok::Ident(name) => {
                self.bump();
                self.expect(Tok::At, "`@`")?;
                let agent = self.ident("an agent name")?;
                Ok(Formula::local(name, AgentId(agent)))
            }
            _ => Err(self.error(vec!["an atom", "`!`", "`<`", "`[`", "`(`"])),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::Fragment;
    use super::*;

    fn a(s: &str) -> AgentId {
        AgentId::new(s)
    }

    #[test]
    fn single_global_atom() {
        assert_eq!(parse("alive(a)").unwrap(), Formula::global(a("a")));
    }

    #[test]
    fn diamond_negated_global() {
        assert_eq!(
            parse("<a> !alive(c)").unwrap(),
            Formula::diamond(a("a"), Formula::not(Formula::global(a("c")))),
        );
    }

    #[test]
    fn box_expands_to_primitives() {
        assert_eq!(
            parse("p@b & [c] p@d").unwrap(),
            Formula::and(
                Formula::local("p", a("b")),
                Formula::not(Formula::diamond(
                    a("c"),
                    Formula::not(Formula::local("p", a("d")))
                )),
            ),
        );
    }

    #[test]
    fn precedence_and_associativity() {
        // -> binds loosest and associates right; & binds tighter than |.
        let phi = parse("p@a -> q@a -> p@a & q@a | p@a").unwrap();
        let p = || Formula::local("p", a("a"));
        let q = || Formula::local("q", a("a"));
        assert_eq!(
            phi,
            Formula::implies(
                p(),
                Formula::implies(q(), Formula::or(Formula::and(p(), q()), p()))
            )
        );
    }

    #[test]
    fn printing_examples() {
        let phi = Formula::diamond(a("a"), Formula::local("p", a("c")));
        assert_eq!(phi.to_string(), "<a> p@c");
        let boxed = Formula::boxed(a("a"), Formula::local("p", a("c")));
        assert_eq!(boxed.to_string(), "[a] p@c");
        let dneg = Formula::not(Formula::not(Formula::local("p", a("a"))));
        assert_eq!(dneg.to_string(), "!!p@a");
        let chain = Formula::diamond(a("c"), Formula::diamond(a("d"), Formula::global(a("a"))));
        assert_eq!(chain.to_string(), "<c><d> alive(a)");
        let grouped = Formula::diamond(
            a("c"),
            Formula::and(
                Formula::global(a("d")),
                Formula::diamond(a("d"), Formula::global(a("a"))),
            ),
        );
        assert_eq!(grouped.to_string(), "<c>(alive(d) & <d> alive(a))");
    }

    #[test]
    fn print_parse_round_trip() {
        for text in [
            "alive(a)",
            "p@b & [c] p@d",
            "<a> !alive(c)",
            "!!p@a",
            "p@a & (q@a & p@b)",
            "(p@a | q@a) -> [b](p@a & <c> q@c)",
            "![a] p@c",
        ] {
            let phi = parse(text).unwrap();
            let printed = phi.to_string();
            assert_eq!(parse(&printed).unwrap(), phi, "round-trip of {text}");
        }
    }

    #[test]
    fn constants_need_agent_context() {
        assert!(parse("true").is_err());
        let phi = parse_with_top_agent("true", &a("a")).unwrap();
        assert_eq!(phi, Formula::top(a("a")));
        assert_eq!(
            parse_with_top_agent("false", &a("a")).unwrap(),
            Formula::bot(a("a"))
        );
    }

    #[test]
    fn error_reports_offset_and_expectation() {
        let err = parse("p@a & & q@a").unwrap_err();
        assert_eq!(err.offset, 6);
        assert!(!err.expected.is_empty());
        let err = parse("p@").unwrap_err();
        assert_eq!(err.offset, 2);
    }

    #[test]
    fn fragment_check() {
        assert!(parse("p@a & <b> q@c").unwrap().in_local_fragment());
        assert!(!parse("p@a & alive(b)").unwrap().in_local_fragment());
        let _ = Fragment::Lminus;
    }
}
