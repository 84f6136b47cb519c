//! Program syntax: AST, parser and canonical printer.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod print;

pub use ast::{Atom, CmpOp, Literal, Name, Program, Rule, RuleKind, Term};
pub use parser::{parse_atom, parse_program, parse_range_facts, parse_rule, Parser};
pub use print::pretty_print;
