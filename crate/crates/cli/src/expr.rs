//! Prefix-application expression language over forms and bar chains.
//!
//! ```text
//! expr    := ['-'] term (('+' | '-') term)*
//! term    := [int ['/' int] ['*']] factor
//! factor  := op '(' expr ')' ['(' expr ')']
//!          | '(' expr ')'
//!          | '[' word ('|' word)* ']'          bar word, "[]" is empty
//!          | item+                              product of letters and d-letters
//! item    := ident | 'd' ident | 'd' '{' ident* '}'
//! ```
//!
//! Operators: `b`, `B`, `d`, `nat`, `karoubi`, `beta`, `pbar`, `bprime`,
//! `delta`, `cotrace`, `b2`, `partial`, `embed`, and the binary `mul`.

use std::fmt;

use algcochain::bar::{
    bar_bprime, beta, bprime_bimodule, coproduct, cotrace, embed, partial_bar, partial_proj, BarChain, BarTensor,
    BarWord, OmegaOneBarChain,
};
use algcochain::linear::LinComb;
use algcochain::ncforms::{
    connes_b, form_mul, form_unit, hochschild_b, karoubi_d, natural_quotient, universal_d, AWord, CyclicClass, Form,
    FormWord,
};
use algcochain::{Scalar, Symbol};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("type error at line {line}: {message}")]
    Type { line: usize, message: String },
}

/// Evaluated value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "terms", rename_all = "snake_case")]
pub enum Value {
    Form(Form),
    Bar(BarChain),
    BarTensor(BarTensor),
    OmegaOneBar(OmegaOneBarChain),
    CyclicClass(CyclicClass),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Form(_) => "form",
            Value::Bar(_) => "bar chain",
            Value::BarTensor(_) => "bar tensor",
            Value::OmegaOneBar(_) => "omega-one-bar chain",
            Value::CyclicClass(_) => "cyclic class",
        }
    }

    pub fn to_latex(&self) -> String {
        match self {
            Value::Form(x) => x.to_latex(),
            Value::Bar(x) => x.to_latex(),
            Value::BarTensor(x) => x.to_latex(),
            Value::OmegaOneBar(x) => x.to_latex(),
            Value::CyclicClass(x) => format!("\\natural\\left({}\\right)", x.representative().to_latex()),
        }
    }

    fn scale(&self, c: &Scalar) -> Value {
        match self {
            Value::Form(x) => Value::Form(x.scale(c)),
            Value::Bar(x) => Value::Bar(x.scale(c)),
            Value::BarTensor(x) => Value::BarTensor(x.scale(c)),
            Value::OmegaOneBar(x) => Value::OmegaOneBar(x.scale(c)),
            Value::CyclicClass(x) => Value::CyclicClass(x.scale(c)),
        }
    }

    fn add(&self, o: &Value) -> Option<Value> {
        Some(match (self, o) {
            (Value::Form(x), Value::Form(y)) => Value::Form(x.add(y)),
            (Value::Bar(x), Value::Bar(y)) => Value::Bar(x.add(y)),
            (Value::BarTensor(x), Value::BarTensor(y)) => Value::BarTensor(x.add(y)),
            (Value::OmegaOneBar(x), Value::OmegaOneBar(y)) => Value::OmegaOneBar(x.add(y)),
            (Value::CyclicClass(x), Value::CyclicClass(y)) => Value::CyclicClass(x.add(y)),
            _ => return None,
        })
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Form(x) => write!(f, "{}", x),
            Value::Bar(x) => write!(f, "{}", x),
            Value::BarTensor(x) => write!(f, "{}", x),
            Value::OmegaOneBar(x) => write!(f, "{}", x),
            Value::CyclicClass(x) => write!(f, "{}", x),
        }
    }
}

const UNARY: [&str; 13] =
    ["b", "B", "d", "nat", "karoubi", "beta", "pbar", "bprime", "delta", "cotrace", "b2", "partial", "embed"];

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Sym(char),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    column: usize,
}

fn tokenize(src: &str, line: usize) -> Result<Vec<Token>, ExprError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), column });
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let n = s.parse().map_err(|_| ExprError::Parse { line, column, message: "integer too large".into() })?;
            out.push(Token { tok: Tok::Int(n), column });
        } else if "()[]{}|+-*/".contains(c) {
            out.push(Token { tok: Tok::Sym(c), column });
            i += 1;
        } else {
            return Err(ExprError::Parse { line, column, message: format!("unexpected character '{}'", c) });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    line: usize,
    end_column: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|t| &t.tok)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_column, |t| t.column)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Parse { line: self.line, column: self.column(), message: message.into() })
    }

    fn type_err<T>(&self, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Type { line: self.line, message: message.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ExprError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", c))
        }
    }

    fn expr(&mut self) -> Result<Value, ExprError> {
        let neg = self.eat('-');
        let mut acc = self.term()?;
        if neg {
            acc = acc.scale(&Scalar::from_int(-1));
        }
        loop {
            let sign = if self.eat('+') {
                1
            } else if self.eat('-') {
                -1
            } else {
                break;
            };
            let t = self.term()?.scale(&Scalar::from_int(sign));
            acc = match acc.add(&t) {
                Some(v) => v,
                None => return self.type_err(format!("cannot add {} and {}", acc.kind(), t.kind())),
            };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Value, ExprError> {
        let mut coef = None;
        if let Some(Tok::Int(n)) = self.peek().cloned() {
            self.pos += 1;
            let mut c = Scalar::from_int(n);
            if self.eat('/') {
                match self.peek().cloned() {
                    Some(Tok::Int(m)) if m != 0 => {
                        self.pos += 1;
                        c = Scalar::rat(n, m);
                    }
                    _ => return self.err("expected nonzero denominator"),
                }
            }
            self.eat('*');
            coef = Some(c);
        }
        let starts_factor = match self.peek() {
            Some(Tok::Ident(_)) => true,
            Some(Tok::Sym(c)) => "([".contains(*c),
            _ => false,
        };
        let v = match (coef, starts_factor) {
            (Some(c), false) => return Ok(Value::Form(form_unit().scale(&c))),
            (c, true) => {
                let v = self.factor()?;
                match c {
                    Some(c) => v.scale(&c),
                    None => v,
                }
            }
            (None, false) => return self.err("expected a term"),
        };
        Ok(v)
    }

    fn factor(&mut self) -> Result<Value, ExprError> {
        match self.peek().cloned() {
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Some(Tok::Sym('[')) => {
                self.pos += 1;
                self.bar_literal()
            }
            Some(Tok::Ident(name)) if self.peek2() == Some(&Tok::Sym('(')) && (UNARY.contains(&name.as_str()) || name == "mul") => {
                self.pos += 1;
                self.apply(&name)
            }
            Some(Tok::Ident(_)) => self.form_literal(),
            _ => self.err("expected a term"),
        }
    }

    fn argument(&mut self) -> Result<Value, ExprError> {
        self.expect('(')?;
        let v = self.expr()?;
        self.expect(')')?;
        Ok(v)
    }

    fn apply(&mut self, op: &str) -> Result<Value, ExprError> {
        let x = self.argument()?;
        if op == "mul" {
            let y = self.argument()?;
            return match (&x, &y) {
                (Value::Form(a), Value::Form(b)) => Ok(Value::Form(form_mul(a, b))),
                _ => self.type_err(format!("mul expects two forms, got {} and {}", x.kind(), y.kind())),
            };
        }
        let out = match (op, &x) {
            ("b", Value::Form(f)) => Value::Form(hochschild_b(f)),
            ("B", Value::Form(f)) => Value::Form(connes_b(f)),
            ("d", Value::Form(f)) => Value::Form(universal_d(f)),
            ("nat", Value::Form(f)) => Value::CyclicClass(natural_quotient(f)),
            ("karoubi", Value::Form(f)) => Value::CyclicClass(karoubi_d(&natural_quotient(f))),
            ("karoubi", Value::CyclicClass(c)) => Value::CyclicClass(karoubi_d(c)),
            ("beta", Value::Bar(x)) => Value::Form(beta(x)),
            ("pbar", Value::Form(f)) => Value::Bar(partial_bar(f)),
            ("bprime", Value::Bar(x)) => Value::Bar(bar_bprime(x)),
            ("delta", Value::Bar(x)) => Value::BarTensor(coproduct(x)),
            ("cotrace", Value::Form(f)) => Value::OmegaOneBar(cotrace(f)),
            ("b2", Value::OmegaOneBar(x)) => Value::OmegaOneBar(bprime_bimodule(x)),
            ("partial", Value::OmegaOneBar(x)) => Value::Bar(partial_proj(x)),
            ("embed", Value::Bar(x)) => Value::Form(embed(x)),
            _ => return self.type_err(format!("{} does not apply to a {}", op, x.kind())),
        };
        Ok(out)
    }

    fn ident(&mut self) -> Option<String> {
        match self.peek().cloned() {
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Some(s)
            }
            _ => None,
        }
    }

    fn bar_literal(&mut self) -> Result<Value, ExprError> {
        let mut entries: Vec<AWord> = Vec::new();
        let mut current: AWord = Vec::new();
        let mut any = false;
        loop {
            if self.eat(']') {
                break;
            }
            if self.eat('|') {
                if current.is_empty() {
                    return self.err("empty bar entry");
                }
                entries.push(std::mem::take(&mut current));
                continue;
            }
            match self.ident() {
                Some(s) => {
                    current.push(Symbol::new(&s));
                    any = true;
                }
                None => return self.err("expected a letter, '|' or ']'"),
            }
        }
        if !current.is_empty() {
            entries.push(current);
        } else if any {
            return self.err("empty bar entry");
        }
        Ok(Value::Bar(LinComb::basis(BarWord(entries))))
    }

    fn form_literal(&mut self) -> Result<Value, ExprError> {
        let mut acc = form_unit();
        let mut items = 0;
        while let Some(Tok::Ident(name)) = self.peek().cloned() {
            if self.peek2() == Some(&Tok::Sym('(')) && (UNARY.contains(&name.as_str()) || name == "mul") {
                break;
            }
            self.pos += 1;
            let factor = if name == "d" {
                if self.eat('{') {
                    let mut w = Vec::new();
                    while let Some(s) = self.ident() {
                        w.push(Symbol::new(&s));
                    }
                    self.expect('}')?;
                    if w.is_empty() {
                        return self.err("empty word under d");
                    }
                    Form::basis(FormWord::new(vec![], vec![w]))
                } else if let Some(s) = self.ident() {
                    Form::basis(FormWord::new(vec![], vec![vec![Symbol::new(&s)]]))
                } else {
                    return self.err("expected a letter after d");
                }
            } else {
                Form::basis(FormWord::new(vec![Symbol::new(&name)], vec![]))
            };
            acc = form_mul(&acc, &factor);
            items += 1;
        }
        if items == 0 {
            return self.err("expected a form");
        }
        Ok(Value::Form(acc))
    }
}

/// Evaluate one expression on source line `line` (1-based).
pub fn eval_line(src: &str, line: usize) -> Result<Value, ExprError> {
    let toks = tokenize(src, line)?;
    let mut p = Parser { toks, pos: 0, line, end_column: src.chars().count() + 1 };
    let v = p.expr()?;
    if p.pos < p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(v)
}

/// Evaluate every non-blank line not starting with `#`.
pub fn eval_source(src: &str) -> Result<Vec<(usize, Value)>, ExprError> {
    src.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| eval_line(l, i + 1).map(|v| (i + 1, v)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn text(s: &str) -> String {
        eval_line(s, 1).unwrap().to_string()
    }

    #[test]
    fn documented_examples() {
        assert_eq!(text("b (a0 d a1)"), "a0 a1 - a1 a0");
        assert_eq!(text("B (a0)"), "d a0");
    }

    #[test]
    fn products_follow_leibniz() {
        // d a · b = d(ab) − a db
        assert_eq!(eval_line("d a b", 1).unwrap(), eval_line("d{a b} - a d b", 1).unwrap());
        assert_eq!(eval_line("mul (a) (d b)", 1).unwrap(), eval_line("a d b", 1).unwrap());
    }

    #[test]
    fn bar_operators() {
        assert_eq!(text("bprime ([a1 | a2])"), text("[a1 a2]"));
        assert!(matches!(eval_line("delta ([a])", 1).unwrap(), Value::BarTensor(_)));
        let z = eval_line("pbar (beta ([a | b]))", 1).unwrap();
        assert!(matches!(z, Value::Bar(ref x) if x.is_zero()));
        assert_eq!(eval_line("embed (pbar (a0 d a1))", 1).unwrap(), eval_line("B (a0 d a1)", 1).unwrap());
    }

    #[test]
    fn coefficients_and_sums() {
        assert_eq!(eval_line("2 a - a - a", 1).unwrap(), Value::Form(Form::zero()));
        assert_eq!(text("1/2 * d a + 1/2 d a"), "d a");
        assert_eq!(text("3"), "3");
    }

    #[test]
    fn errors_report_position() {
        match eval_line("b (a0 d", 1) {
            Err(ExprError::Parse { line: 1, column, .. }) => assert_eq!(column, 8),
            other => panic!("{:?}", other),
        }
        match eval_source("B (a)\n  b (a $ b)") {
            Err(ExprError::Parse { line: 2, column: 8, .. }) => {}
            other => panic!("{:?}", other),
        }
        assert!(matches!(eval_line("beta (a)", 1), Err(ExprError::Type { .. })));
        assert!(matches!(eval_line("a + [b]", 1), Err(ExprError::Type { .. })));
    }

    #[test]
    fn json_round_trip() {
        for s in ["b (a0 d a1 d a2)", "delta ([a | b c])", "cotrace (a d b)", "karoubi (a d b)", "[]"] {
            let v = eval_line(s, 1).unwrap();
            let j = serde_json::to_string(&v).unwrap();
            assert_eq!(serde_json::from_str::<Value>(&j).unwrap(), v, "{}", s);
        }
    }
}
