//! Coefficient expressions: `+ - * / ^`, parentheses, numbers, the constants
//! `pi` (or `π`) and `e`, the functions `sin cos tan exp ln sqrt abs`, and the
//! variables `x` and, where allowed, `t`.

use crate::error::{Error, Result};
use meval::{ContextProvider, FuncEvalError};
use std::str::FromStr;

/// A parsed expression in the variables it was checked against.
#[derive(Debug, Clone, PartialEq)]
pub struct Expression {
    source: String,
    expr: meval::Expr,
}

struct Vars {
    x: Option<f64>,
    t: Option<f64>,
}

impl ContextProvider for Vars {
    fn get_var(&self, name: &str) -> Option<f64> {
        match name {
            "x" => self.x,
            "t" => self.t,
            "pi" => Some(std::f64::consts::PI),
            "e" => Some(std::f64::consts::E),
            _ => None,
        }
    }

    fn eval_func(&self, name: &str, args: &[f64]) -> std::result::Result<f64, FuncEvalError> {
        let f: fn(f64) -> f64 = match name {
            "sin" => f64::sin,
            "cos" => f64::cos,
            "tan" => f64::tan,
            "exp" => f64::exp,
            "ln" => f64::ln,
            "sqrt" => f64::sqrt,
            "abs" => f64::abs,
            _ => return Err(FuncEvalError::UnknownFunction),
        };
        match args {
            [a] => Ok(f(*a)),
            [] => Err(FuncEvalError::TooFewArguments),
            _ => Err(FuncEvalError::TooManyArguments),
        }
    }
}

impl Expression {
    /// Parses `text` in the variable `x` only.
    pub fn spatial(text: &str) -> Result<Self> {
        Self::parse(text, false)
    }

    /// Parses `text` in the variables `x` and `t`.
    pub fn space_time(text: &str) -> Result<Self> {
        Self::parse(text, true)
    }

    /// Parses a constant.
    pub fn constant(text: &str) -> Result<f64> {
        let e = Self::parse_raw(text)?;
        e.eval_with_context(Vars { x: None, t: None })
            .map_err(|err| Error::Parse(format!("`{text}`: {err}")))
    }

    fn parse_raw(text: &str) -> Result<meval::Expr> {
        let cleaned = text.trim().replace('π', "pi").replace('−', "-");
        meval::Expr::from_str(&cleaned).map_err(|err| Error::Parse(format!("`{}`: {err}", text.trim())))
    }

    fn parse(text: &str, with_time: bool) -> Result<Self> {
        let expr = Self::parse_raw(text)?;
        // evaluating once visits every token, so unknown names surface here
        let probe = Vars {
            x: Some(0.5),
            t: with_time.then_some(0.5),
        };
        expr.eval_with_context(probe)
            .map_err(|err| Error::Parse(format!("`{}`: {err}", text.trim())))?;
        Ok(Self {
            source: text.trim().to_string(),
            expr,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Value at `(x, t)`; `NaN` if evaluation fails.
    pub fn eval(&self, x: f64, t: f64) -> f64 {
        self.expr
            .eval_with_context(Vars { x: Some(x), t: Some(t) })
            .unwrap_or(f64::NAN)
    }
}
