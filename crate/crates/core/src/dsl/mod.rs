//! A small expression language for user-defined `f(n)` and `e_n`.
//!
//! Expressions use `+ - * / ^`, parentheses, numeric literals, the
//! variable `n`, named parameters and the functions `sqrt`, `exp`, `ln`,
//! `gamma`, `abs`, `pow`, `min`, `max`. For example the Pöschl–Teller
//! spectrum is `n*(n+nu)` with `nu` bound in a [`ParamEnv`].

mod eval;
mod lexer;
mod parser;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use thiserror::Error;

pub use eval::eval;
pub use lexer::{tokenize, Token, TokenKind};
pub use parser::{parse, BinOp, Expr, Function};

use crate::error::Error;
use crate::series::{SpecKind, StateSpec, GROUND_TOLERANCE};

/// Highest `n` checked when a compiled expression is validated.
pub const PROBE_DEPTH: u64 = 16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DslError {
    #[error("unexpected character {found:?} at byte {position}")]
    Lex { position: usize, found: char },

    #[error("expected {expected} at byte {position}, found `{found}`")]
    Parse {
        position: usize,
        expected: String,
        found: String,
    },

    #[error("{function}() takes {want} argument(s), got {got}")]
    Arity {
        function: &'static str,
        got: usize,
        want: usize,
    },

    #[error("unknown function `{name}` at byte {position}")]
    UnknownFunction { name: String, position: usize },

    #[error("unbound variable `{name}`")]
    UnboundVariable { name: String },

    #[error("domain error at n = {n} in `{expr}`: {reason}")]
    Domain { n: u64, expr: String, reason: String },

    #[error("invalid parameter binding: {0}")]
    Binding(String),
}

impl DslError {
    pub fn name(&self) -> &'static str {
        match self {
            DslError::Lex { .. } => "LexError",
            DslError::Parse { .. } => "ParseError",
            DslError::Arity { .. } => "ArityError",
            DslError::UnknownFunction { .. } => "UnknownFunction",
            DslError::UnboundVariable { .. } => "UnboundVariable",
            DslError::Domain { .. } => "DomainError",
            DslError::Binding(_) => "BindingError",
        }
    }
}

/// Which quantity an expression defines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExprKind {
    /// Nonlinearity function `f(n)`.
    F,
    /// Spectrum `e_n`.
    E,
}

impl ExprKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ExprKind::F => "f",
            ExprKind::E => "e",
        }
    }
}

impl fmt::Display for ExprKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExprKind {
    type Err = DslError;

    fn from_str(s: &str) -> Result<Self, DslError> {
        match s {
            "f" => Ok(ExprKind::F),
            "e" => Ok(ExprKind::E),
            _ => Err(DslError::Binding(format!("expression kind must be `f` or `e`, got `{s}`"))),
        }
    }
}

/// Named parameter values. The name `n` is reserved for the level index.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParamEnv {
    values: BTreeMap<String, f64>,
}

impl ParamEnv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: &str, value: f64) -> Result<(), DslError> {
        if name == "n" {
            return Err(DslError::Binding("`n` is reserved for the level index".into()));
        }
        if tokenize(name).map(|t| t.len() == 1 && t[0].kind == TokenKind::Ident) != Ok(true) {
            return Err(DslError::Binding(format!("`{name}` is not an identifier")));
        }
        if !value.is_finite() {
            return Err(DslError::Binding(format!("{name} = {value} is not finite")));
        }
        self.values.insert(name.to_string(), value);
        Ok(())
    }

    /// Parses a `name=value` binding.
    pub fn insert_binding(&mut self, binding: &str) -> Result<(), DslError> {
        let (name, value) = binding
            .split_once('=')
            .ok_or_else(|| DslError::Binding(format!("`{binding}` is not of the form name=value")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| DslError::Binding(format!("`{}` is not a number", value.trim())))?;
        self.insert(name.trim(), value)
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.values.get(name).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.values.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

/// A parsed expression with a per-`n` cache of its values.
#[derive(Debug)]
pub struct CompiledExpr {
    ast: Expr,
    env: ParamEnv,
    memo: RwLock<HashMap<u64, Result<f64, DslError>>>,
}

impl CompiledExpr {
    pub fn new(src: &str, env: ParamEnv) -> Result<Self, DslError> {
        let ast = parse(&tokenize(src)?)?;
        if let Some(name) = ast.variables().into_iter().find(|v| *v != "n" && env.get(v).is_none()) {
            return Err(DslError::UnboundVariable { name: name.to_string() });
        }
        Ok(CompiledExpr {
            ast,
            env,
            memo: RwLock::new(HashMap::new()),
        })
    }

    pub fn ast(&self) -> &Expr {
        &self.ast
    }

    pub fn value(&self, n: u64) -> Result<f64, DslError> {
        if let Some(hit) = self.memo.read().unwrap_or_else(|e| e.into_inner()).get(&n) {
            return hit.clone();
        }
        let computed = eval(&self.ast, n, &self.env);
        self.memo
            .write()
            .unwrap_or_else(|e| e.into_inner())
            .entry(n)
            .or_insert(computed)
            .clone()
    }
}

/// Compiles `src` into a state family and validates it on `n <= PROBE_DEPTH`.
pub fn compile_spec(kind: ExprKind, src: &str, env: ParamEnv, radius: f64) -> Result<StateSpec, Error> {
    if !(radius > 0.0) {
        return Err(Error::InvalidArgument(format!("radius = {radius} must be positive")));
    }
    let compiled = Arc::new(CompiledExpr::new(src, env)?);
    let spec_kind = match kind {
        ExprKind::F => SpecKind::Nonlinearity,
        ExprKind::E => SpecKind::Spectrum,
    };
    let evaluator = {
        let compiled = compiled.clone();
        Arc::new(move |n| compiled.value(n).map_err(Error::from))
    };
    let spec = StateSpec::new(spec_kind, format!("{kind}: {src}"), radius, evaluator);

    match kind {
        ExprKind::E => {
            let ground = spec.value(0)?;
            if ground.abs() > GROUND_TOLERANCE {
                return Err(Error::SpectrumGroundNotZero { value: ground });
            }
            for n in 1..=PROBE_DEPTH {
                let value = spec.value(n)?;
                if value <= 0.0 {
                    return Err(Error::NonpositiveSpectrum { n, value });
                }
            }
        }
        ExprKind::F => {
            for n in 1..=PROBE_DEPTH {
                if spec.value(n)? == 0.0 {
                    return Err(Error::ZeroNonlinearity { n });
                }
            }
        }
    }
    Ok(spec)
}
