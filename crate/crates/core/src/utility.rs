//! Utility (scalarisation) functions.
//!
//! A utility is either linear, `u(v) = w · v`, or a monotone expression
//! built from a small closed set of primitives. Both serialise to a
//! prefix-notation string:
//!
//! ```text
//! dot [0.5,0.5]          linear with weights (0.5, 0.5)
//! mul obj0 obj1          product of the first two objectives
//! add obj0 pow obj1 2    v0 + v1^2
//! min obj0 max obj1 3    min(v0, max(v1, 3))
//! ```
//!
//! Operators are binary (`add`/`sum`, `mul`/`prod`, `min`, `max`) or
//! `pow <expr> <exponent>`; leaves are `obj<i>` or numeric constants.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_dims, Error, Result};
use crate::value::{ValueVector, WeightVector};

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Objective(usize),
    Const(f64),
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Min(Box<Expr>, Box<Expr>),
    Max(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, f64),
}

impl Expr {
    pub fn eval(&self, v: &[f64]) -> f64 {
        match self {
            Expr::Objective(i) => v[*i],
            Expr::Const(c) => *c,
            Expr::Add(a, b) => a.eval(v) + b.eval(v),
            Expr::Mul(a, b) => a.eval(v) * b.eval(v),
            Expr::Min(a, b) => a.eval(v).min(b.eval(v)),
            Expr::Max(a, b) => a.eval(v).max(b.eval(v)),
            Expr::Pow(a, p) => a.eval(v).powf(*p),
        }
    }

    /// One past the highest objective index referenced.
    pub fn arity(&self) -> usize {
        match self {
            Expr::Objective(i) => i + 1,
            Expr::Const(_) => 0,
            Expr::Add(a, b) | Expr::Mul(a, b) | Expr::Min(a, b) | Expr::Max(a, b) => {
                a.arity().max(b.arity())
            }
            Expr::Pow(a, _) => a.arity(),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Objective(i) => write!(f, "obj{i}"),
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Add(a, b) => write!(f, "add {a} {b}"),
            Expr::Mul(a, b) => write!(f, "mul {a} {b}"),
            Expr::Min(a, b) => write!(f, "min {a} {b}"),
            Expr::Max(a, b) => write!(f, "max {a} {b}"),
            Expr::Pow(a, p) => write!(f, "pow {a} {p}"),
        }
    }
}

/// A scalarisation `u: R^d -> R`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum UtilityFunction {
    Linear(WeightVector),
    Monotone { expr: Expr, dim: usize },
}

/// Upper corner of the probe box `[0, PROBE_MAX]^d` used by the
/// monotonicity check.
pub const PROBE_MAX: f64 = 10.0;
const PROBE_STEP: f64 = 0.5;

impl UtilityFunction {
    pub fn linear(weights: Vec<f64>) -> Result<Self> {
        Ok(Self::Linear(WeightVector::new(weights)?))
    }

    /// A monotone expression utility over `dim` objectives. Fails unless the
    /// expression passes [`UtilityFunction::check_monotone`].
    pub fn monotone(expr: Expr, dim: usize) -> Result<Self> {
        if expr.arity() > dim {
            return Err(Error::DimensionMismatch { expected: dim, found: expr.arity() });
        }
        let u = Self::Monotone { expr, dim };
        u.check_monotone()?;
        Ok(u)
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Linear(w) => w.dim(),
            Self::Monotone { dim, .. } => *dim,
        }
    }

    pub fn is_linear(&self) -> bool {
        matches!(self, Self::Linear(_))
    }

    pub fn eval(&self, v: &ValueVector) -> Result<f64> {
        self.eval_slice(v.as_slice())
    }

    pub fn eval_slice(&self, v: &[f64]) -> Result<f64> {
        check_dims(self.dim(), v.len())?;
        let u = match self {
            Self::Linear(w) => w.as_slice().iter().zip(v).map(|(a, b)| a * b).sum(),
            Self::Monotone { expr, .. } => expr.eval(v),
        };
        if u.is_finite() {
            Ok(u)
        } else {
            Err(Error::Numeric(format!("utility {self} is not finite at {v:?}")))
        }
    }

    /// Checks `u(v + δ e_i) >= u(v)` on a regular probe grid over
    /// `[0, PROBE_MAX]^d`, with `δ` equal to the grid step.
    pub fn check_monotone(&self) -> Result<()> {
        let d = self.dim();
        // keep the probe grid to a few thousand points
        let per_axis = match d {
            0..=3 => 11,
            4 => 6,
            _ => 3,
        };
        let step = PROBE_MAX / (per_axis - 1) as f64;
        let mut idx = vec![0usize; d];
        loop {
            let point: Vec<f64> = idx.iter().map(|&k| k as f64 * step).collect();
            let base = self.eval_slice(&point)?;
            for i in 0..d {
                let mut moved = point.clone();
                moved[i] += PROBE_STEP;
                let up = self.eval_slice(&moved)?;
                if up < base {
                    return Err(Error::Domain(format!(
                        "utility {self} decreases along objective {i} at {point:?}"
                    )));
                }
            }
            let mut axis = 0;
            loop {
                if axis == d {
                    return Ok(());
                }
                idx[axis] += 1;
                if idx[axis] < per_axis {
                    break;
                }
                idx[axis] = 0;
                axis += 1;
            }
        }
    }
}

impl fmt::Display for UtilityFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Linear(w) => {
                write!(f, "dot [")?;
                for (i, x) in w.as_slice().iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "]")
            }
            Self::Monotone { expr, .. } => write!(f, "{expr}"),
        }
    }
}

impl FromStr for UtilityFunction {
    type Err = Error;

    /// Parses a prefix expression. The dimension of an expression utility is
    /// inferred from the highest objective it references (at least 2).
    fn from_str(s: &str) -> Result<Self> {
        let tokens = tokenize(s);
        let mut pos = 0;
        if tokens.first().map(String::as_str) == Some("dot") {
            pos += 1;
            let weights = parse_list(&tokens, &mut pos)?;
            expect_end(&tokens, pos)?;
            return Self::linear(weights);
        }
        let expr = parse_expr(&tokens, &mut pos)?;
        expect_end(&tokens, pos)?;
        let dim = expr.arity().max(2);
        Self::monotone(expr, dim)
    }
}

impl TryFrom<String> for UtilityFunction {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<UtilityFunction> for String {
    fn from(u: UtilityFunction) -> Self {
        u.to_string()
    }
}

fn tokenize(s: &str) -> Vec<String> {
    let spaced = s.replace('[', " [ ").replace(']', " ] ").replace(',', " ");
    spaced.split_whitespace().map(str::to_owned).collect()
}

fn expect_end(tokens: &[String], pos: usize) -> Result<()> {
    if pos == tokens.len() {
        Ok(())
    } else {
        Err(Error::Parse(format!("unexpected trailing token '{}'", tokens[pos])))
    }
}

fn next<'a>(tokens: &'a [String], pos: &mut usize) -> Result<&'a str> {
    let t = tokens
        .get(*pos)
        .ok_or_else(|| Error::Parse("unexpected end of utility expression".into()))?;
    *pos += 1;
    Ok(t)
}

fn parse_number(token: &str) -> Result<f64> {
    let x: f64 = token
        .parse()
        .map_err(|_| Error::Parse(format!("expected a number, found '{token}'")))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::Parse(format!("non-finite constant '{token}'")))
    }
}

fn parse_list(tokens: &[String], pos: &mut usize) -> Result<Vec<f64>> {
    if next(tokens, pos)? != "[" {
        return Err(Error::Parse("expected '[' after 'dot'".into()));
    }
    let mut out = Vec::new();
    loop {
        match next(tokens, pos)? {
            "]" => return Ok(out),
            t => out.push(parse_number(t)?),
        }
    }
}

fn parse_expr(tokens: &[String], pos: &mut usize) -> Result<Expr> {
    let token = next(tokens, pos)?;
    let binary = |pos: &mut usize| -> Result<(Box<Expr>, Box<Expr>)> {
        let a = parse_expr(tokens, pos)?;
        let b = parse_expr(tokens, pos)?;
        Ok((Box::new(a), Box::new(b)))
    };
    Ok(match token {
        "add" | "sum" => {
            let (a, b) = binary(pos)?;
            Expr::Add(a, b)
        }
        "mul" | "prod" => {
            let (a, b) = binary(pos)?;
            Expr::Mul(a, b)
        }
        "min" => {
            let (a, b) = binary(pos)?;
            Expr::Min(a, b)
        }
        "max" => {
            let (a, b) = binary(pos)?;
            Expr::Max(a, b)
        }
        "pow" => {
            let base = parse_expr(tokens, pos)?;
            let exponent = parse_number(next(tokens, pos)?)?;
            Expr::Pow(Box::new(base), exponent)
        }
        t if t.starts_with("obj") => {
            let i = t[3..]
                .parse()
                .map_err(|_| Error::Parse(format!("bad objective reference '{t}'")))?;
            Expr::Objective(i)
        }
        t => Expr::Const(parse_number(t)?),
    })
}
