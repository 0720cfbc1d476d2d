//! Generic evaluation of expression trees over any `Real` scalar.

use super::ast::{Expr, Func, Node};
use super::jet::{Jet3, Real};
use crate::error::{KernelError, Result};

/// Evaluate `e` with the given variable values (same order as `e.variables()`).
pub fn eval<T: Real>(e: &Expr, vars: &[T]) -> Result<T> {
    debug_assert_eq!(vars.len(), e.vars.len());
    eval_node(&e.root, vars)
}

/// Plain numeric evaluation.
pub fn eval_scalar(e: &Expr, vars: &[f64]) -> Result<f64> {
    eval(e, vars)
}

/// Value and first three derivatives of a univariate expression at `s`.
pub fn eval_jet(e: &Expr, s: f64) -> Result<Jet3> {
    eval(e, &[Jet3::variable(s)])
}

fn eval_node<T: Real>(n: &Node, vars: &[T]) -> Result<T> {
    Ok(match n {
        Node::Const(v) => T::constant(*v),
        Node::Var(i) => vars[*i],
        Node::Neg(x) => -eval_node(x, vars)?,
        Node::Add(l, r) => eval_node(l, vars)? + eval_node(r, vars)?,
        Node::Sub(l, r) => eval_node(l, vars)? - eval_node(r, vars)?,
        Node::Mul(l, r) => eval_node(l, vars)? * eval_node(r, vars)?,
        Node::Div(l, r) => {
            let num = eval_node(l, vars)?;
            let den = eval_node(r, vars)?;
            if den.primal() == 0.0 {
                return Err(KernelError::Domain("division by zero".into()));
            }
            num / den
        }
        Node::Pow(b, e) => {
            let base = eval_node(b, vars)?;
            let expo = eval_node(e, vars)?;
            let p = expo.primal();
            if expo.is_constant() && p.fract() == 0.0 && p.abs() <= 512.0 {
                let n = p as i32;
                if n < 0 && base.primal() == 0.0 {
                    return Err(KernelError::Domain(
                        "zero base with negative exponent".into(),
                    ));
                }
                base.powi(n)
            } else {
                if base.primal() <= 0.0 {
                    return Err(KernelError::Domain(format!(
                        "non-integer power of non-positive base {}",
                        base.primal()
                    )));
                }
                (expo * base.ln()).exp()
            }
        }
        Node::Call(func, arg) => {
            let a = eval_node(arg, vars)?;
            match func {
                Func::Sin => a.sin(),
                Func::Cos => a.cos(),
                Func::Tan => a.tan(),
                Func::Exp => a.exp(),
                Func::Log => {
                    if a.primal() <= 0.0 {
                        return Err(KernelError::Domain(format!(
                            "log of non-positive value {}",
                            a.primal()
                        )));
                    }
                    a.ln()
                }
                Func::Sqrt => {
                    if a.primal() < 0.0 {
                        return Err(KernelError::Domain(format!(
                            "sqrt of negative value {}",
                            a.primal()
                        )));
                    }
                    a.sqrt()
                }
                Func::Sinh => a.sinh(),
                Func::Cosh => a.cosh(),
                Func::Atan => a.atan(),
            }
        }
    })
}
