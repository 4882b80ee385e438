use statrs::function::gamma::ln_gamma;

use super::parser::{BinOp, Expr, Function};
use super::{DslError, ParamEnv};

/// Integer exponents go through `powi` so that `x^2` is a plain product.
pub(crate) fn pow(base: f64, exponent: f64) -> f64 {
    if exponent.fract() == 0.0 && exponent.abs() <= f64::from(i32::MAX) {
        base.powi(exponent as i32)
    } else {
        base.powf(exponent)
    }
}

struct Evaluation<'a> {
    n: u64,
    env: &'a ParamEnv,
}

impl Evaluation<'_> {
    fn domain(&self, expr: &Expr, reason: &str) -> DslError {
        DslError::Domain {
            n: self.n,
            expr: expr.to_string(),
            reason: reason.to_string(),
        }
    }

    fn finite(&self, expr: &Expr, value: f64) -> Result<f64, DslError> {
        if value.is_finite() {
            Ok(value)
        } else {
            Err(self.domain(expr, "result is not a finite number"))
        }
    }

    fn eval(&self, expr: &Expr) -> Result<f64, DslError> {
        match expr {
            Expr::Literal(v) => Ok(*v),
            Expr::Var(name) if name == "n" => Ok(self.n as f64),
            Expr::Var(name) => self
                .env
                .get(name)
                .ok_or_else(|| DslError::UnboundVariable { name: name.clone() }),
            Expr::Neg(inner) => Ok(-self.eval(inner)?),
            Expr::BinOp { op, lhs, rhs } => {
                let a = self.eval(lhs)?;
                let b = self.eval(rhs)?;
                let value = match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == 0.0 {
                            return Err(self.domain(expr, "division by zero"));
                        }
                        a / b
                    }
                    BinOp::Pow => self.pow(expr, a, b)?,
                };
                self.finite(expr, value)
            }
            Expr::Call { function, args } => {
                let values = args.iter().map(|a| self.eval(a)).collect::<Result<Vec<_>, _>>()?;
                let x = values[0];
                let value = match function {
                    Function::Sqrt => {
                        if x < 0.0 {
                            return Err(self.domain(expr, "square root of a negative number"));
                        }
                        x.sqrt()
                    }
                    Function::Exp => x.exp(),
                    Function::Ln => {
                        if x <= 0.0 {
                            return Err(self.domain(expr, "logarithm of a nonpositive number"));
                        }
                        x.ln()
                    }
                    Function::Gamma => {
                        if x <= 0.0 {
                            return Err(self.domain(expr, "gamma of a nonpositive number"));
                        }
                        ln_gamma(x).exp()
                    }
                    Function::Abs => x.abs(),
                    Function::Pow => self.pow(expr, x, values[1])?,
                    Function::Min => x.min(values[1]),
                    Function::Max => x.max(values[1]),
                };
                self.finite(expr, value)
            }
        }
    }

    fn pow(&self, expr: &Expr, base: f64, exponent: f64) -> Result<f64, DslError> {
        if base == 0.0 && exponent < 0.0 {
            return Err(self.domain(expr, "zero raised to a negative power"));
        }
        if base < 0.0 && exponent.fract() != 0.0 {
            return Err(self.domain(expr, "negative base with a non-integer exponent"));
        }
        Ok(pow(base, exponent))
    }
}

/// Evaluates `expr` at integer `n` with parameters from `env`.
pub fn eval(expr: &Expr, n: u64, env: &ParamEnv) -> Result<f64, DslError> {
    Evaluation { n, env }.eval(expr)
}
