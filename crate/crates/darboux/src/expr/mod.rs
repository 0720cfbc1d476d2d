//! Analytic scalar expressions with exact derivatives.
//!
//! The front door for curve and surface component formulas: a small grammar
//! over `+ - * / ^`, the functions `sin cos tan exp log sqrt sinh cosh atan`,
//! decimal literals and the constants `pi`, `e`.  Expressions are immutable
//! after parsing and evaluation is pure, so concurrent use needs no locking.

mod ast;
mod eval;
mod jet;
mod parser;
mod token;

pub use ast::{Expr, Func, Node};
pub use eval::{eval, eval_jet, eval_scalar};
pub use jet::{Dual, Jet, Jet3, Jet5, Real};
pub use parser::{parse, parse_with_vars};
pub use token::{tokenize, Token, TokenKind};
