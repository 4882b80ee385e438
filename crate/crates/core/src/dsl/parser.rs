//! Recursive-descent parser.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := unary
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?
//! atom   := Number | Ident | Ident '(' args ')' | '(' expr ')'
//! args   := expr (',' expr)*
//! ```
//!
//! `^` is right-associative and binds tighter than unary minus on its left,
//! so `-x^2` is `-(x^2)` while `2^-1` is `2^(-1)`.

use std::fmt;

use super::lexer::{Token, TokenKind};
use super::DslError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    pub fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Function {
    Sqrt,
    Exp,
    Ln,
    Gamma,
    Abs,
    Pow,
    Min,
    Max,
}

impl Function {
    pub const ALL: [Function; 8] = [
        Function::Sqrt,
        Function::Exp,
        Function::Ln,
        Function::Gamma,
        Function::Abs,
        Function::Pow,
        Function::Min,
        Function::Max,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Function::Sqrt => "sqrt",
            Function::Exp => "exp",
            Function::Ln => "ln",
            Function::Gamma => "gamma",
            Function::Abs => "abs",
            Function::Pow => "pow",
            Function::Min => "min",
            Function::Max => "max",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Function::Pow | Function::Min | Function::Max => 2,
            _ => 1,
        }
    }

    pub fn from_name(name: &str) -> Option<Function> {
        Function::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Literal(f64),
    Var(String),
    Neg(Box<Expr>),
    BinOp {
        op: BinOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
    Call {
        function: Function,
        args: Vec<Expr>,
    },
}

impl Expr {
    pub fn binop(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::BinOp {
            op,
            lhs: Box::new(lhs),
            rhs: Box::new(rhs),
        }
    }

    /// Free variable names in order of first appearance.
    pub fn variables(&self) -> Vec<&str> {
        fn walk<'a>(e: &'a Expr, out: &mut Vec<&'a str>) {
            match e {
                Expr::Literal(_) => {}
                Expr::Var(name) => {
                    if !out.contains(&name.as_str()) {
                        out.push(name);
                    }
                }
                Expr::Neg(inner) => walk(inner, out),
                Expr::BinOp { lhs, rhs, .. } => {
                    walk(lhs, out);
                    walk(rhs, out);
                }
                Expr::Call { args, .. } => args.iter().for_each(|a| walk(a, out)),
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }
}

/// Fully parenthesized rendering that reparses to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Literal(v) => write!(f, "{v}"),
            Expr::Var(name) => f.write_str(name),
            Expr::Neg(inner) => write!(f, "(-{inner})"),
            Expr::BinOp { op, lhs, rhs } => write!(f, "({lhs} {} {rhs})", op.symbol()),
            Expr::Call { function, args } => {
                write!(f, "{}(", function.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    /// Byte offset just past the last token, reported for unexpected end of input.
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn peek_kind(&self) -> Option<TokenKind> {
        self.peek().map(|t| t.kind)
    }

    fn advance(&mut self) -> Option<&'a Token> {
        let t = self.tokens.get(self.pos);
        self.pos += 1;
        t
    }

    fn error(&self, expected: &str) -> DslError {
        match self.peek() {
            Some(t) => DslError::Parse {
                position: t.position,
                expected: expected.into(),
                found: t.lexeme.clone(),
            },
            None => DslError::Parse {
                position: self.end,
                expected: expected.into(),
                found: "end of input".into(),
            },
        }
    }

    fn expect(&mut self, kind: TokenKind, expected: &str) -> Result<&'a Token, DslError> {
        if self.peek_kind() == Some(kind) {
            Ok(self.advance().unwrap())
        } else {
            Err(self.error(expected))
        }
    }

    fn expr(&mut self) -> Result<Expr, DslError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek_kind() {
                Some(TokenKind::Plus) => BinOp::Add,
                Some(TokenKind::Minus) => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.advance();
            let rhs = self.term()?;
            lhs = Expr::binop(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, DslError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek_kind() {
                Some(TokenKind::Star) => BinOp::Mul,
                Some(TokenKind::Slash) => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.advance();
            let rhs = self.unary()?;
            lhs = Expr::binop(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr, DslError> {
        if self.peek_kind() == Some(TokenKind::Minus) {
            self.advance();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, DslError> {
        let base = self.atom()?;
        if self.peek_kind() == Some(TokenKind::Caret) {
            self.advance();
            let exponent = self.unary()?;
            return Ok(Expr::binop(BinOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, DslError> {
        let Some(token) = self.peek() else {
            return Err(self.error("a number, identifier or '('"));
        };
        match token.kind {
            TokenKind::Number => {
                self.advance();
                // The lexer only emits finite, parseable literals.
                Ok(Expr::Literal(token.lexeme.parse().expect("lexer validated number")))
            }
            TokenKind::Ident => {
                self.advance();
                if self.peek_kind() == Some(TokenKind::LParen) {
                    self.call(token)
                } else {
                    Ok(Expr::Var(token.lexeme.clone()))
                }
            }
            TokenKind::LParen => {
                self.advance();
                let inner = self.expr()?;
                self.expect(TokenKind::RParen, "')'")?;
                Ok(inner)
            }
            _ => Err(self.error("a number, identifier or '('")),
        }
    }

    fn call(&mut self, name: &Token) -> Result<Expr, DslError> {
        let function = Function::from_name(&name.lexeme).ok_or_else(|| DslError::UnknownFunction {
            name: name.lexeme.clone(),
            position: name.position,
        })?;
        self.expect(TokenKind::LParen, "'('")?;
        let mut args = vec![self.expr()?];
        while self.peek_kind() == Some(TokenKind::Comma) {
            self.advance();
            args.push(self.expr()?);
        }
        self.expect(TokenKind::RParen, "',' or ')'")?;
        if args.len() != function.arity() {
            return Err(DslError::Arity {
                function: function.name(),
                got: args.len(),
                want: function.arity(),
            });
        }
        Ok(Expr::Call { function, args })
    }
}

/// Parses a complete token stream into an expression tree.
pub fn parse(tokens: &[Token]) -> Result<Expr, DslError> {
    let end = tokens.last().map_or(0, |t| t.position + t.lexeme.len());
    let mut parser = Parser { tokens, pos: 0, end };
    let expr = parser.expr()?;
    if parser.peek().is_some() {
        return Err(parser.error("an operator or end of input"));
    }
    Ok(expr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::tokenize;

    fn p(src: &str) -> Result<Expr, DslError> {
        parse(&tokenize(src)?)
    }

    fn lit(v: f64) -> Expr {
        Expr::Literal(v)
    }

    fn var(n: &str) -> Expr {
        Expr::Var(n.into())
    }

    #[test]
    fn hydrogen_expression() {
        let n_plus_1 = Expr::binop(BinOp::Add, var("n"), lit(1.0));
        let expected = Expr::binop(
            BinOp::Sub,
            lit(1.0),
            Expr::binop(BinOp::Div, lit(1.0), Expr::binop(BinOp::Pow, n_plus_1, lit(2.0))),
        );
        assert_eq!(p("1 - 1/(n+1)^2").unwrap(), expected);
    }

    #[test]
    fn poschl_teller_expression() {
        let expected = Expr::binop(BinOp::Mul, var("n"), Expr::binop(BinOp::Add, var("n"), var("nu")));
        assert_eq!(p("n*(n+nu)").unwrap(), expected);
    }

    #[test]
    fn arity_errors() {
        assert_eq!(
            p("sqrt(n,2)").unwrap_err(),
            DslError::Arity {
                function: "sqrt",
                got: 2,
                want: 1
            }
        );
        assert!(matches!(p("pow(n)"), Err(DslError::Arity { want: 2, got: 1, .. })));
        assert!(p("max(n, 2)").is_ok());
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(p("-x^2").unwrap(), Expr::Neg(Box::new(Expr::binop(BinOp::Pow, var("x"), lit(2.0)))));
        assert_eq!(
            p("2^3^2").unwrap(),
            Expr::binop(BinOp::Pow, lit(2.0), Expr::binop(BinOp::Pow, lit(3.0), lit(2.0)))
        );
        assert_eq!(
            p("2^-1").unwrap(),
            Expr::binop(BinOp::Pow, lit(2.0), Expr::Neg(Box::new(lit(1.0))))
        );
        assert_eq!(
            p("a-b-c").unwrap(),
            Expr::binop(BinOp::Sub, Expr::binop(BinOp::Sub, var("a"), var("b")), var("c"))
        );
        assert_eq!(
            p("a/b*c").unwrap(),
            Expr::binop(BinOp::Mul, Expr::binop(BinOp::Div, var("a"), var("b")), var("c"))
        );
    }

    #[test]
    fn parse_errors_carry_positions() {
        match p("1 + ").unwrap_err() {
            DslError::Parse { position, found, .. } => {
                assert_eq!(position, 3);
                assert_eq!(found, "end of input");
            }
            e => panic!("{e:?}"),
        }
        match p("(1 + 2").unwrap_err() {
            DslError::Parse { expected, .. } => assert_eq!(expected, "')'"),
            e => panic!("{e:?}"),
        }
        assert!(matches!(p("1 2"), Err(DslError::Parse { position: 2, .. })));
        assert!(matches!(p(""), Err(DslError::Parse { position: 0, .. })));
        assert!(matches!(p("foo(1)"), Err(DslError::UnknownFunction { .. })));
    }

    #[test]
    fn display_reparses() {
        for src in ["1 - 1/(n+1)^2", "-x^2", "2^-1^3", "pow(q, 1-n) * max(a, -b)", "gamma(n + 2*kappa)"] {
            let e = p(src).unwrap();
            assert_eq!(p(&e.to_string()).unwrap(), e, "{src} -> {e}");
        }
    }
}
