//! Recursive-descent parser.
//!
//! Grammar (see the crate README for the full EBNF):
//!
//! ```text
//! expr   := term  (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := "-" unary | power
//! power  := atom ("^" unary)?            // right-associative
//! atom   := number | constant | variable | func "(" expr ")" | "(" expr ")"
//! ```
//!
//! Unary minus binds looser than `^`, so `-s^2` parses as `-(s^2)`.
//! `pi` and `e` are reserved constants.

use super::ast::{Expr, Func, Node};
use super::token::{tokenize, Token, TokenKind};
use crate::error::{KernelError, Result};

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    end: usize,
    vars: &'a [&'a str],
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn here(&self) -> usize {
        self.peek().map(|t| t.position).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<&Token> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eat_op(&mut self, ops: &[&str]) -> Option<String> {
        if let Some(t) = self.peek() {
            if t.kind == TokenKind::Operator && ops.contains(&t.text.as_str()) {
                let s = t.text.clone();
                self.pos += 1;
                return Some(s);
            }
        }
        None
    }

    fn err(&self, message: impl Into<String>) -> KernelError {
        KernelError::Syntax {
            position: self.here(),
            message: message.into(),
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        while let Some(op) = self.eat_op(&["+", "-"]) {
            let rhs = self.term()?;
            lhs = if op == "+" {
                Node::Add(Box::new(lhs), Box::new(rhs))
            } else {
                Node::Sub(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        while let Some(op) = self.eat_op(&["*", "/"]) {
            let rhs = self.unary()?;
            lhs = if op == "*" {
                Node::Mul(Box::new(lhs), Box::new(rhs))
            } else {
                Node::Div(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Node> {
        if self.eat_op(&["-"]).is_some() {
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.atom()?;
        if self.eat_op(&["^"]).is_some() {
            let exponent = self.unary()?;
            return Ok(Node::Pow(Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node> {
        let tok = match self.bump() {
            Some(t) => t.clone(),
            None => return Err(self.err("unexpected end of expression")),
        };
        match tok.kind {
            TokenKind::Number => {
                tok.text
                    .parse::<f64>()
                    .map(Node::Const)
                    .map_err(|_| KernelError::Syntax {
                        position: tok.position,
                        message: format!("invalid numeric literal {:?}", tok.text),
                    })
            }
            TokenKind::Identifier => {
                if let Some(func) = Func::from_name(&tok.text) {
                    self.expect_paren("(", "expected ( after function name")?;
                    let arg = self.expr()?;
                    self.expect_paren(")", "unbalanced paren: expected )")?;
                    return Ok(Node::Call(func, Box::new(arg)));
                }
                match tok.text.as_str() {
                    "pi" => Ok(Node::Const(std::f64::consts::PI)),
                    "e" => Ok(Node::Const(std::f64::consts::E)),
                    name => {
                        if let Some(i) = self.vars.iter().position(|v| *v == name) {
                            Ok(Node::Var(i))
                        } else {
                            Err(KernelError::Syntax {
                                position: tok.position,
                                message: format!("unknown identifier {name:?}"),
                            })
                        }
                    }
                }
            }
            TokenKind::Paren if tok.text == "(" => {
                let inner = self.expr()?;
                self.expect_paren(")", "unbalanced paren: expected )")?;
                Ok(inner)
            }
            _ => Err(KernelError::Syntax {
                position: tok.position,
                message: format!("unexpected token {:?}", tok.text),
            }),
        }
    }

    fn expect_paren(&mut self, which: &str, msg: &str) -> Result<()> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Paren && t.text == which => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(msg)),
        }
    }
}

/// Parse `text` over the given variable names (e.g. `["s"]` or `["u", "v"]`).
pub fn parse_with_vars(text: &str, vars: &[&str]) -> Result<Expr> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        end: text.len(),
        vars,
    };
    let root = p.expr()?;
    if let Some(t) = p.peek() {
        return Err(KernelError::Syntax {
            position: t.position,
            message: format!("unexpected trailing token {:?}", t.text),
        });
    }
    Ok(Expr {
        root,
        vars: vars.iter().map(|s| s.to_string()).collect(),
    })
}

/// Parse an expression in the single variable `s`.
pub fn parse(text: &str) -> Result<Expr> {
    parse_with_vars(text, &["s"])
}
