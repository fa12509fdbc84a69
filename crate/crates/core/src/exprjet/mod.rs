//! Scalar-field expressions over chart coordinates and their exact
//! derivatives through order 3 by truncated Taylor arithmetic.

mod expr;
mod jet;
mod parse;

pub use expr::{Expr, Func};
pub use jet::{Jet, JetLayout, MAX_ORDER};
pub use parse::{parse_expr, ParseError};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero in `{subexpr}`")]
    DivisionByZero { subexpr: String },
    #[error("sqrt of non-positive argument {value} in `{subexpr}`")]
    SqrtDomain { subexpr: String, value: f64 },
    #[error("jet order {0} exceeds the supported maximum of 3")]
    OrderTooHigh(usize),
    #[error("point has {got} coordinates, expression needs at least {need}")]
    PointTooShort { got: usize, need: usize },
}

/// Evaluates `e` at `point` with every partial derivative up to `order`.
///
/// The jet has one variable per point coordinate.
pub fn eval_jet(e: &Expr, point: &[f64], order: usize) -> Result<Jet, EvalError> {
    if order > MAX_ORDER {
        return Err(EvalError::OrderTooHigh(order));
    }
    if let Some(max) = e.max_var() {
        if max >= point.len() {
            return Err(EvalError::PointTooShort {
                got: point.len(),
                need: max + 1,
            });
        }
    }
    let vars: Vec<Jet> = (0..point.len())
        .map(|i| Jet::variable(point.len(), order, i, point[i]))
        .collect();
    let zero = Jet::zero(point.len(), order);
    eval_rec(e, &vars, &zero)
}

fn eval_rec(e: &Expr, vars: &[Jet], zero: &Jet) -> Result<Jet, EvalError> {
    Ok(match e {
        Expr::Const(c) => zero.add_scalar(*c),
        Expr::Var(i) => vars[*i].clone(),
        Expr::Neg(a) => eval_rec(a, vars, zero)?.neg(),
        Expr::Add(a, b) => eval_rec(a, vars, zero)?.add(&eval_rec(b, vars, zero)?),
        Expr::Sub(a, b) => eval_rec(a, vars, zero)?.sub(&eval_rec(b, vars, zero)?),
        Expr::Mul(a, b) => eval_rec(a, vars, zero)?.mul(&eval_rec(b, vars, zero)?),
        Expr::Div(a, b) => {
            let num = eval_rec(a, vars, zero)?;
            let den = eval_rec(b, vars, zero)?;
            if den.value() == 0.0 || !den.value().is_finite() {
                return Err(EvalError::DivisionByZero {
                    subexpr: e.to_string(),
                });
            }
            num.div(&den)
        }
        Expr::Pow(a, k) => eval_rec(a, vars, zero)?.powi(*k),
        Expr::Func(f, a) => {
            let arg = eval_rec(a, vars, zero)?;
            match f {
                Func::Sin => arg.sin(),
                Func::Cos => arg.cos(),
                Func::Exp => arg.exp(),
                Func::Sqrt => {
                    let v = arg.value();
                    if v < 0.0 || (v == 0.0 && arg.order() > 0) {
                        return Err(EvalError::SqrtDomain {
                            subexpr: e.to_string(),
                            value: v,
                        });
                    }
                    arg.sqrt()
                }
            }
        }
    })
}
