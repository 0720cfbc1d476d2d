//! Expression trees and their canonical printing.

use std::fmt;

/// The nine supported analytic functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Sinh,
    Cosh,
    Atan,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Atan => "atan",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "atan" => Func::Atan,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Const(f64),
    /// Index into the expression's variable list.
    Var(usize),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

/// A parsed expression together with the names of its variables.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    pub(crate) root: Node,
    pub(crate) vars: Vec<String>,
}

impl Expr {
    pub fn variables(&self) -> &[String] {
        &self.vars
    }
}

// Printing precedence: additive 1, multiplicative 2, unary minus 3, power 4,
// atoms 6.  Right operands of the left-associative binary operators print one
// level tighter so the reparsed tree is structurally identical.
fn prec(n: &Node) -> u8 {
    match n {
        Node::Add(..) | Node::Sub(..) => 1,
        Node::Mul(..) | Node::Div(..) => 2,
        Node::Neg(..) => 3,
        Node::Pow(..) => 4,
        Node::Const(..) | Node::Var(..) | Node::Call(..) => 6,
    }
}

fn write_node(n: &Node, min_prec: u8, vars: &[String], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let p = prec(n);
    let need = p < min_prec;
    if need {
        write!(f, "(")?;
    }
    match n {
        Node::Const(v) => write!(f, "{v}")?,
        Node::Var(i) => write!(f, "{}", vars[*i])?,
        Node::Neg(x) => {
            write!(f, "-")?;
            write_node(x, 4, vars, f)?;
        }
        Node::Add(l, r) => {
            write_node(l, 1, vars, f)?;
            write!(f, " + ")?;
            write_node(r, 2, vars, f)?;
        }
        Node::Sub(l, r) => {
            write_node(l, 1, vars, f)?;
            write!(f, " - ")?;
            write_node(r, 2, vars, f)?;
        }
        Node::Mul(l, r) => {
            write_node(l, 2, vars, f)?;
            write!(f, "*")?;
            write_node(r, 3, vars, f)?;
        }
        Node::Div(l, r) => {
            write_node(l, 2, vars, f)?;
            write!(f, "/")?;
            write_node(r, 3, vars, f)?;
        }
        Node::Pow(b, e) => {
            write_node(b, 5, vars, f)?;
            write!(f, "^")?;
            write_node(e, 3, vars, f)?;
        }
        Node::Call(func, arg) => {
            write!(f, "{}(", func.name())?;
            write_node(arg, 1, vars, f)?;
            write!(f, ")")?;
        }
    }
    if need {
        write!(f, ")")?;
    }
    Ok(())
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_node(&self.root, 0, &self.vars, f)
    }
}
