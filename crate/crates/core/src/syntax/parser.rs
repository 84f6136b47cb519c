//! Recursive-descent parser for programs. The token-level [`Parser`] is public
//! so that the task-file reader can embed programs inside directives.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::syntax::ast::{Atom, Literal, Program, Rule, Term};
use crate::syntax::lexer::{tokenize, Tok, Token};

pub struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

enum HeadArg {
    Term(Term),
    Range(i64, i64, usize, usize),
}

impl Parser {
    pub fn new(text: &str) -> Result<Self> {
        Ok(Parser {
            tokens: tokenize(text)?,
            pos: 0,
        })
    }

    pub fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    pub fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    pub fn position(&self) -> (usize, usize) {
        let t = &self.tokens[self.pos];
        (t.line, t.column)
    }

    pub fn at_eof(&self) -> bool {
        matches!(self.peek(), Tok::Eof)
    }

    pub fn bump(&mut self) -> Tok {
        let t = self.tokens[self.pos].tok.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    pub fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        let (line, column) = self.position();
        Err(Error::Syntax {
            line,
            column,
            message: message.into(),
        })
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, tok: &Tok) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.error(format!(
                "expected {}, found {}",
                tok.describe(),
                self.peek().describe()
            ))
        }
    }

    pub fn expect_ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            other => self.error(format!("expected identifier, found {}", other.describe())),
        }
    }

    pub fn expect_int(&mut self) -> Result<i64> {
        match self.peek().clone() {
            Tok::Int(i) => {
                self.bump();
                Ok(i)
            }
            other => self.error(format!("expected integer, found {}", other.describe())),
        }
    }

    pub fn parse_term(&mut self) -> Result<Term> {
        match self.peek().clone() {
            Tok::Int(i) => {
                self.bump();
                Ok(Term::Int(i))
            }
            Tok::Var(v) => {
                self.bump();
                Ok(Term::Var(Arc::from(v.as_str())))
            }
            Tok::Ident(name) if name != "not" => {
                self.bump();
                if self.eat(&Tok::LParen) {
                    let args = self.parse_term_list()?;
                    Ok(Term::Func(Arc::from(name.as_str()), args))
                } else {
                    Ok(Term::Sym(Arc::from(name.as_str())))
                }
            }
            other => self.error(format!("expected term, found {}", other.describe())),
        }
    }

    /// Comma-separated terms up to and including the closing parenthesis.
    fn parse_term_list(&mut self) -> Result<Vec<Term>> {
        let mut args = vec![self.parse_term()?];
        while self.eat(&Tok::Comma) {
            args.push(self.parse_term()?);
        }
        self.expect(&Tok::RParen)?;
        Ok(args)
    }

    pub fn parse_atom(&mut self) -> Result<Atom> {
        let name = self.expect_ident()?;
        if name == "not" {
            return self.error("`not` cannot be used as a predicate name");
        }
        let args = if self.eat(&Tok::LParen) {
            self.parse_term_list()?
        } else {
            Vec::new()
        };
        Ok(Atom {
            predicate: Arc::from(name.as_str()),
            args,
        })
    }

    pub fn parse_literal(&mut self) -> Result<Literal> {
        if matches!(self.peek(), Tok::Ident(s) if s == "not") {
            self.bump();
            return Ok(Literal::Not(self.parse_atom()?));
        }
        let (line, column) = self.position();
        let lhs = self.parse_term()?;
        if let Tok::Cmp(op) = *self.peek() {
            self.bump();
            let rhs = self.parse_term()?;
            return Ok(Literal::Cmp(lhs, op, rhs));
        }
        match lhs {
            Term::Sym(name) => Ok(Literal::Pos(Atom {
                predicate: name,
                args: Vec::new(),
            })),
            Term::Func(name, args) => Ok(Literal::Pos(Atom {
                predicate: name,
                args,
            })),
            _ => Err(Error::Syntax {
                line,
                column,
                message: "expected atom or comparison".into(),
            }),
        }
    }

    pub fn parse_body(&mut self) -> Result<Vec<Literal>> {
        let mut body = vec![self.parse_literal()?];
        while self.eat(&Tok::Comma) {
            body.push(self.parse_literal()?);
        }
        Ok(body)
    }

    fn parse_head_args(&mut self) -> Result<Vec<HeadArg>> {
        let mut args = Vec::new();
        loop {
            let (line, column) = self.position();
            if let (Tok::Int(lo), Tok::DotDot) = (self.peek().clone(), self.peek_at(1).clone()) {
                self.bump();
                self.bump();
                let hi = self.expect_int()?;
                args.push(HeadArg::Range(lo, hi, line, column));
            } else {
                args.push(HeadArg::Term(self.parse_term()?));
            }
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(&Tok::RParen)?;
        Ok(args)
    }

    /// Parses one rule. Facts with integer ranges expand into several rules.
    pub fn parse_rule(&mut self) -> Result<Vec<Rule>> {
        let (line, column) = self.position();
        let rules = match self.peek().clone() {
            Tok::WeakIf => {
                self.bump();
                let body = self.parse_body()?;
                self.expect(&Tok::Dot)?;
                self.expect(&Tok::LBracket)?;
                let weight = self.parse_term()?;
                self.expect(&Tok::At)?;
                let level = self.parse_term()?;
                let mut terms = Vec::new();
                while self.eat(&Tok::Comma) {
                    terms.push(self.parse_term()?);
                }
                self.expect(&Tok::RBracket)?;
                self.eat(&Tok::Dot);
                vec![Rule::Weak {
                    body,
                    weight,
                    level,
                    terms,
                }]
            }
            Tok::If => {
                self.bump();
                let body = self.parse_body()?;
                self.expect(&Tok::Dot)?;
                vec![Rule::Constraint { body }]
            }
            Tok::Int(lower) if *self.peek_at(1) == Tok::LBrace => {
                self.bump();
                self.bump();
                let mut heads = vec![self.parse_atom()?];
                while self.eat(&Tok::Semi) {
                    heads.push(self.parse_atom()?);
                }
                self.expect(&Tok::RBrace)?;
                let upper = self.expect_int()?;
                let body = self.parse_optional_body()?;
                if lower < 0 || lower > upper || upper as usize > heads.len() {
                    return Err(Error::Syntax {
                        line,
                        column,
                        message: format!(
                            "choice bounds must satisfy 0 <= lower <= upper <= {} (got {lower}..{upper})",
                            heads.len()
                        ),
                    });
                }
                vec![Rule::Choice {
                    lower: lower as u32,
                    upper: upper as u32,
                    heads,
                    body,
                }]
            }
            Tok::Ident(_) => {
                let name = self.expect_ident()?;
                if name == "not" {
                    return Err(Error::Syntax {
                        line,
                        column,
                        message: "rule head cannot be negated".into(),
                    });
                }
                let args = if self.eat(&Tok::LParen) {
                    self.parse_head_args()?
                } else {
                    Vec::new()
                };
                let body = self.parse_optional_body()?;
                expand_head(&name, args, body)?
            }
            other => return self.error(format!("expected rule, found {}", other.describe())),
        };
        for rule in &rules {
            let vars = rule.unsafe_vars();
            if !vars.is_empty() {
                return Err(Error::Unsafe {
                    line,
                    column,
                    variables: vars.iter().map(|v| v.to_string()).collect(),
                });
            }
        }
        Ok(rules)
    }

    fn parse_optional_body(&mut self) -> Result<Vec<Literal>> {
        let body = if self.eat(&Tok::If) {
            self.parse_body()?
        } else {
            Vec::new()
        };
        self.expect(&Tok::Dot)?;
        Ok(body)
    }

    /// Parses rules until `stop` (not consumed) or end of input.
    pub fn parse_rules_until(&mut self, stop: &Tok) -> Result<Program> {
        let mut program = Program::default();
        while self.peek() != stop && !self.at_eof() {
            program.rules.extend(self.parse_rule()?);
        }
        Ok(program)
    }
}

fn expand_head(name: &str, args: Vec<HeadArg>, body: Vec<Literal>) -> Result<Vec<Rule>> {
    let mut heads: Vec<Vec<Term>> = vec![Vec::new()];
    for arg in args {
        match arg {
            HeadArg::Term(t) => heads.iter_mut().for_each(|h| h.push(t.clone())),
            HeadArg::Range(lo, hi, line, column) => {
                if !body.is_empty() {
                    return Err(Error::Syntax {
                        line,
                        column,
                        message: "ranges are only allowed in facts".into(),
                    });
                }
                if lo > hi {
                    return Err(Error::EmptyRange {
                        line,
                        column,
                        lo,
                        hi,
                    });
                }
                heads = heads
                    .into_iter()
                    .flat_map(|h| {
                        (lo..=hi).map(move |v| {
                            let mut h = h.clone();
                            h.push(Term::Int(v));
                            h
                        })
                    })
                    .collect();
            }
        }
    }
    Ok(heads
        .into_iter()
        .map(|args| Rule::Normal {
            head: Atom {
                predicate: Arc::from(name),
                args,
            },
            body: body.clone(),
        })
        .collect())
}

/// Parses a complete program.
pub fn parse_program(text: &str) -> Result<Program> {
    let mut p = Parser::new(text)?;
    let program = p.parse_rules_until(&Tok::Eof)?;
    Ok(program)
}

/// Parses a block of (possibly ranged) facts such as `node(1..4).`.
pub fn parse_range_facts(text: &str) -> Result<Program> {
    let mut p = Parser::new(text)?;
    let mut program = Program::default();
    while !p.at_eof() {
        let (line, column) = p.position();
        let rules = p.parse_rule()?;
        if rules.iter().any(|r| !r.is_fact()) {
            return Err(Error::Syntax {
                line,
                column,
                message: "expected a fact".into(),
            });
        }
        program.rules.extend(rules);
    }
    Ok(program)
}

/// Parses exactly one rule (which must not be a ranged fact).
pub fn parse_rule(text: &str) -> Result<Rule> {
    let mut p = Parser::new(text)?;
    let mut rules = p.parse_rule()?;
    if !p.at_eof() {
        return p.error("trailing input after rule");
    }
    if rules.len() != 1 {
        return p.error("expected a single rule");
    }
    Ok(rules.pop().unwrap())
}

pub fn parse_atom(text: &str) -> Result<Atom> {
    let mut p = Parser::new(text)?;
    let atom = p.parse_atom()?;
    if !p.at_eof() {
        return p.error("trailing input after atom");
    }
    Ok(atom)
}
