//! Coefficient expressions in named parameters, and the textual form syntax.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! sum     := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | '+' unary | atom
//! atom    := integer | 'i' | ident | 'conj' '(' sum ')' | 'e' '(' [index (',' index)*] ')'
//!          | '(' sum ')'
//! ```
//!
//! Rationals are written `p/q`. `e(j, -k, ...)` is the monomial
//! `η^j ∧ η^{k̄} ∧ ...` in the given factor order. `*` between two forms is the
//! wedge product; the divisor of `/` and the argument of `conj` must be
//! coefficients. `|t|^2` is spelled `t*conj(t)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exterior::{BasisForm, Form};
use crate::scalar::Scalar;

/// Values for the named parameters of an expression.
pub type Assignment = BTreeMap<String, Scalar>;

#[derive(Clone, Debug, PartialEq)]
enum Node {
    Lit(Scalar),
    Param(String),
    Basis(Vec<i64>),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Conj(Box<Node>),
}

impl Node {
    fn has_basis(&self) -> bool {
        match self {
            Node::Basis(_) => true,
            Node::Lit(_) | Node::Param(_) => false,
            Node::Neg(a) | Node::Conj(a) => a.has_basis(),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                a.has_basis() || b.has_basis()
            }
        }
    }
}

/// A scalar-valued expression over literals and parameter names.
#[derive(Clone, PartialEq)]
pub struct CoefExpr(Node);

impl CoefExpr {
    pub fn lit(s: Scalar) -> Self {
        CoefExpr(Node::Lit(s))
    }

    pub fn param(name: impl Into<String>) -> Self {
        CoefExpr(Node::Param(name.into()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let node = Parser::new(text, 1).parse_all()?;
        if node.has_basis() {
            return Err(Error::syntax(1, 1, "expected a coefficient, found a form"));
        }
        Ok(CoefExpr(node))
    }

    pub fn conj(self) -> Self {
        fold(Node::Conj(Box::new(self.0)))
    }

    /// The literal value, if this expression is a literal.
    pub fn as_literal(&self) -> Option<&Scalar> {
        match &self.0 {
            Node::Lit(s) => Some(s),
            _ => None,
        }
    }

    pub fn params(&self) -> BTreeSet<String> {
        fn go(n: &Node, out: &mut BTreeSet<String>) {
            match n {
                Node::Param(p) => {
                    out.insert(p.clone());
                }
                Node::Lit(_) | Node::Basis(_) => {}
                Node::Neg(a) | Node::Conj(a) => go(a, out),
                Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                    go(a, out);
                    go(b, out);
                }
            }
        }
        let mut out = BTreeSet::new();
        go(&self.0, &mut out);
        out
    }

    pub fn eval(&self, assignment: &Assignment) -> Result<Scalar> {
        eval_node(&self.0, assignment)
    }
}

fn eval_node(n: &Node, a: &Assignment) -> Result<Scalar> {
    Ok(match n {
        Node::Lit(s) => s.clone(),
        Node::Param(p) => a.get(p).cloned().ok_or_else(|| Error::UnboundParameter(p.clone()))?,
        Node::Basis(_) => unreachable!("coefficient expressions carry no basis factors"),
        Node::Neg(x) => -eval_node(x, a)?,
        Node::Conj(x) => eval_node(x, a)?.conj(),
        Node::Add(x, y) => eval_node(x, a)? + eval_node(y, a)?,
        Node::Sub(x, y) => eval_node(x, a)? - eval_node(y, a)?,
        Node::Mul(x, y) => eval_node(x, a)? * eval_node(y, a)?,
        Node::Div(x, y) => eval_node(x, a)?.checked_div(&eval_node(y, a)?)?,
    })
}

/// Folds literal operands so that expansions of literal input stay literal.
fn fold(node: Node) -> CoefExpr {
    let lit = |n: &Node| match n {
        Node::Lit(s) => Some(s.clone()),
        _ => None,
    };
    let folded = match &node {
        Node::Neg(a) => lit(a).map(|a| -a),
        Node::Add(a, b) => lit(a).zip(lit(b)).map(|(a, b)| a + b),
        Node::Sub(a, b) => lit(a).zip(lit(b)).map(|(a, b)| a - b),
        Node::Mul(a, b) => lit(a).zip(lit(b)).map(|(a, b)| a * b),
        Node::Div(a, b) => lit(a).zip(lit(b)).and_then(|(a, b)| a.checked_div(&b).ok()),
        Node::Conj(a) => lit(a).map(|a| a.conj()),
        _ => None,
    };
    CoefExpr(folded.map(Node::Lit).unwrap_or(node))
}

impl std::ops::Add for CoefExpr {
    type Output = CoefExpr;
    fn add(self, rhs: CoefExpr) -> CoefExpr {
        fold(Node::Add(Box::new(self.0), Box::new(rhs.0)))
    }
}

impl std::ops::Sub for CoefExpr {
    type Output = CoefExpr;
    fn sub(self, rhs: CoefExpr) -> CoefExpr {
        fold(Node::Sub(Box::new(self.0), Box::new(rhs.0)))
    }
}

impl std::ops::Mul for CoefExpr {
    type Output = CoefExpr;
    fn mul(self, rhs: CoefExpr) -> CoefExpr {
        fold(Node::Mul(Box::new(self.0), Box::new(rhs.0)))
    }
}

impl std::ops::Div for CoefExpr {
    type Output = CoefExpr;
    fn div(self, rhs: CoefExpr) -> CoefExpr {
        fold(Node::Div(Box::new(self.0), Box::new(rhs.0)))
    }
}

impl std::ops::Neg for CoefExpr {
    type Output = CoefExpr;
    fn neg(self) -> CoefExpr {
        fold(Node::Neg(Box::new(self.0)))
    }
}

fn fmt_node(n: &Node, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match n {
        Node::Lit(s) => write!(f, "({s})"),
        Node::Param(p) => write!(f, "{p}"),
        Node::Basis(w) => {
            let w: Vec<String> = w.iter().map(|x| x.to_string()).collect();
            write!(f, "e({})", w.join(","))
        }
        Node::Neg(a) => {
            write!(f, "-(")?;
            fmt_node(a, f)?;
            write!(f, ")")
        }
        Node::Conj(a) => {
            write!(f, "conj(")?;
            fmt_node(a, f)?;
            write!(f, ")")
        }
        Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
            let op = match n {
                Node::Add(..) => "+",
                Node::Sub(..) => "-",
                Node::Mul(..) => "*",
                _ => "/",
            };
            write!(f, "(")?;
            fmt_node(a, f)?;
            write!(f, " {op} ")?;
            fmt_node(b, f)?;
            write!(f, ")")
        }
    }
}

/// Fully parenthesized; parses back to an equivalent expression.
impl fmt::Display for CoefExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Node::Lit(s) => write!(f, "{s}"),
            other => fmt_node(other, f),
        }
    }
}

impl fmt::Debug for CoefExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoefExpr({self})")
    }
}

/// A form whose coefficients are coefficient expressions, e.g. one
/// right-hand side of a structure equation before parameters are fixed.
#[derive(Clone, PartialEq, Default)]
pub struct SymbolicForm {
    terms: BTreeMap<BasisForm, CoefExpr>,
}

impl SymbolicForm {
    pub fn zero() -> Self {
        SymbolicForm::default()
    }

    /// Parses the form syntax. `line` and `column` locate `text` inside a
    /// larger document and only affect error positions.
    pub fn parse_at(text: &str, line: usize, column: usize) -> Result<Self> {
        let shift = |e: Error| match e {
            Error::Syntax { line, column: c, message } => {
                Error::Syntax { line, column: c + column - 1, message }
            }
            other => other,
        };
        let node = Parser::new(text, line).parse_all().map_err(shift)?;
        let mut out = SymbolicForm::zero();
        for (b, c) in expand(&node).map_err(|m| Error::syntax(line, column, m))? {
            out.push(b, c);
        }
        Ok(out)
    }

    pub fn parse(text: &str) -> Result<Self> {
        SymbolicForm::parse_at(text, 1, 1)
    }

    pub fn from_form(form: &Form) -> Self {
        SymbolicForm {
            terms: form.terms().map(|(b, c)| (b.clone(), CoefExpr::lit(c.clone()))).collect(),
        }
    }

    fn push(&mut self, b: BasisForm, c: CoefExpr) {
        let c = match self.terms.remove(&b) {
            Some(prev) => prev + c,
            None => c,
        };
        if c.as_literal().is_some_and(Zero::is_zero) {
            return;
        }
        self.terms.insert(b, c);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisForm, &CoefExpr)> {
        self.terms.iter()
    }

    pub fn is_zero_syntactically(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn params(&self) -> BTreeSet<String> {
        self.terms.values().flat_map(|c| c.params()).collect()
    }

    pub fn max_index(&self) -> usize {
        self.terms.keys().map(BasisForm::max_index).max().unwrap_or(0)
    }

    pub fn eval(&self, assignment: &Assignment) -> Result<Form> {
        let mut out = Form::zero();
        for (b, c) in &self.terms {
            out.add_term(c.eval(assignment)?, b.clone());
        }
        Ok(out)
    }
}

impl fmt::Display for SymbolicForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (b, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            match c.as_literal() {
                Some(s) => write!(f, "({s})*{b}")?,
                None => write!(f, "{c}*{b}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SymbolicForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymbolicForm[{self}]")
    }
}

type Expansion = Vec<(BasisForm, CoefExpr)>;

/// Distributes a parsed expression into a list of (monomial, coefficient).
fn expand(n: &Node) -> std::result::Result<Expansion, String> {
    let scalar = |n: &Node| vec![(BasisForm::unit(), fold(n.clone()))];
    Ok(match n {
        Node::Lit(_) | Node::Param(_) => scalar(n),
        Node::Conj(a) => vec![(BasisForm::unit(), CoefExpr((**a).clone()).conj())],
        Node::Basis(w) => match BasisForm::from_word(w).map_err(|e| e.to_string())? {
            None => vec![],
            Some((neg, b)) => {
                let one = CoefExpr::lit(Scalar::one());
                vec![(b, if neg { -one } else { one })]
            }
        },
        Node::Neg(a) => expand(a)?.into_iter().map(|(b, c)| (b, -c)).collect(),
        Node::Add(a, b) => {
            let mut v = expand(a)?;
            v.extend(expand(b)?);
            v
        }
        Node::Sub(a, b) => {
            let mut v = expand(a)?;
            v.extend(expand(b)?.into_iter().map(|(b, c)| (b, -c)));
            v
        }
        Node::Mul(a, b) => {
            let (ea, eb) = (expand(a)?, expand(b)?);
            let mut v = Vec::new();
            for (ba, ca) in &ea {
                for (bb, cb) in &eb {
                    if let Some((neg, prod)) = ba.wedge(bb) {
                        let c = ca.clone() * cb.clone();
                        v.push((prod, if neg { -c } else { c }));
                    }
                }
            }
            v
        }
        Node::Div(a, b) => {
            let d = CoefExpr((**b).clone());
            expand(a)?.into_iter().map(|(b, c)| (b, c / d.clone())).collect()
        }
    })
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    Comma,
    Bad,
    End,
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
}

impl Parser {
    fn new(text: &str, line: usize) -> Self {
        let mut toks = Vec::new();
        let chars: Vec<char> = text.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                toks.push((Tok::Int(s.parse().expect("digits")), col));
                continue;
            }
            if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                toks.push((Tok::Ident(chars[start..i].iter().collect()), col));
                continue;
            }
            let t = match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                _ => Tok::Bad,
            };
            toks.push((t, col));
            i += 1;
        }
        toks.push((Tok::End, chars.len() + 1));
        Parser { toks, pos: 0, line }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::syntax(self.line, self.col(), msg))
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn parse_all(&mut self) -> Result<Node> {
        if *self.peek() == Tok::End {
            return self.err("empty expression");
        }
        let n = self.sum()?;
        if *self.peek() != Tok::End {
            return self.err("unexpected token");
        }
        Ok(n)
    }

    fn sum(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    self.bump();
                    let col = self.col();
                    let rhs = self.unary()?;
                    if rhs.has_basis() {
                        return Err(Error::syntax(self.line, col, "cannot divide by a form"));
                    }
                    lhs = Node::Div(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Node> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(Node::Neg(Box::new(self.unary()?)))
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Node> {
        let col = self.col();
        match self.bump() {
            Tok::Int(v) => Ok(Node::Lit(Scalar::real(BigRational::from_integer(v)))),
            Tok::LParen => {
                let n = self.sum()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(n)
            }
            Tok::Ident(name) => match name.as_str() {
                "i" => Ok(Node::Lit(Scalar::i())),
                "conj" => {
                    self.expect(Tok::LParen, "'(' after conj")?;
                    let inner = self.sum()?;
                    self.expect(Tok::RParen, "')'")?;
                    if inner.has_basis() {
                        return Err(Error::syntax(self.line, col, "conj() takes a coefficient"));
                    }
                    Ok(Node::Conj(Box::new(inner)))
                }
                "e" if *self.peek() == Tok::LParen => {
                    self.bump();
                    let mut word = Vec::new();
                    if *self.peek() != Tok::RParen {
                        loop {
                            let icol = self.col();
                            let neg = if *self.peek() == Tok::Minus {
                                self.bump();
                                true
                            } else {
                                false
                            };
                            match self.bump() {
                                Tok::Int(v) => {
                                    let v: i64 = v.try_into().map_err(|_| {
                                        Error::syntax(self.line, icol, "index too large")
                                    })?;
                                    if v == 0 {
                                        return Err(Error::syntax(self.line, icol, "index 0"));
                                    }
                                    word.push(if neg { -v } else { v });
                                }
                                _ => {
                                    return Err(Error::syntax(self.line, icol, "expected an index"))
                                }
                            }
                            if *self.peek() == Tok::Comma {
                                self.bump();
                            } else {
                                break;
                            }
                        }
                    }
                    self.expect(Tok::RParen, "')' closing e(...)")?;
                    Ok(Node::Basis(word))
                }
                _ => Ok(Node::Param(name)),
            },
            Tok::End => Err(Error::syntax(self.line, col, "unexpected end of input")),
            Tok::Bad => Err(Error::syntax(self.line, col, "unexpected character")),
            _ => Err(Error::syntax(self.line, col, "unexpected token")),
        }
    }
}

/// Parses `name=value,name=value` (values in the coefficient grammar).
pub fn parse_assignment(text: &str) -> Result<Assignment> {
    let mut out = Assignment::new();
    for part in split_top_level(text) {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Invalid(format!("expected name=value, got '{part}'")))?;
        let k = k.trim();
        if k.is_empty() || !k.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(Error::Invalid(format!("bad parameter name '{k}'")));
        }
        out.insert(k.to_string(), v.trim().parse()?);
    }
    Ok(out)
}

/// Splits on commas that are not inside parentheses.
pub fn split_top_level(text: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&text[start..]);
    parts
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(pairs: &[(&str, Scalar)]) -> Assignment {
        pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
    }

    #[test]
    fn literal_gaussian() {
        let v = CoefExpr::parse("1/2 + 1/3*i").unwrap().eval(&Assignment::new()).unwrap();
        assert_eq!(v, Scalar::from_ratios(1, 2, 1, 3));
    }

    #[test]
    fn substitution() {
        let v = CoefExpr::parse("D").unwrap().eval(&a(&[("D", Scalar::ratio(1, 5))])).unwrap();
        assert_eq!(v, Scalar::ratio(1, 5));
    }

    #[test]
    fn conj_over_one_minus_modulus() {
        let e = CoefExpr::parse("conj(t)/(1 - t*conj(t))").unwrap();
        let v = e.eval(&a(&[("t", Scalar::ratio(1, 2))])).unwrap();
        assert_eq!(v, Scalar::ratio(2, 3));
        assert_eq!(e.eval(&a(&[("t", Scalar::int(1))])), Err(Error::DivisionByZero));
        assert_eq!(e.eval(&Assignment::new()), Err(Error::UnboundParameter("t".into())));
    }

    #[test]
    fn display_round_trips() {
        let e = CoefExpr::parse("-conj(t)/(1-t*conj(t)) + 3/4*i*D").unwrap();
        let again = CoefExpr::parse(&e.to_string()).unwrap();
        let s = a(&[("t", Scalar::from_ratios(1, 3, -1, 5)), ("D", Scalar::ratio(1, 8))]);
        assert_eq!(e.eval(&s).unwrap(), again.eval(&s).unwrap());
    }

    #[test]
    fn syntax_errors_carry_position() {
        match CoefExpr::parse("1 + * 2") {
            Err(Error::Syntax { column, .. }) => assert_eq!(column, 5),
            other => panic!("{other:?}"),
        }
        assert!(CoefExpr::parse("(1 + 2").is_err());
        assert!(CoefExpr::parse("1 $ 2").is_err());
        assert!(CoefExpr::parse("e(1)").is_err());
        assert!(CoefExpr::parse("").is_err());
    }

    #[test]
    fn form_syntax() {
        let f = SymbolicForm::parse("1*e(1,-1) + 1*e(1,-2) + D*e(2,-2)").unwrap();
        assert_eq!(f.params().into_iter().collect::<Vec<_>>(), vec!["D".to_string()]);
        let v = f.eval(&a(&[("D", Scalar::ratio(1, 8))])).unwrap();
        assert_eq!(v.len(), 3);
        assert_eq!(v.bidegree(), Some((1, 1)));

        // factor order produces the sign
        let g = SymbolicForm::parse("e(-1,1)").unwrap().eval(&Assignment::new()).unwrap();
        assert_eq!(g, Form::from_word(-Scalar::one(), &[1, -1]));

        // grouping and wedge
        let h = SymbolicForm::parse("i/2*(e(1,-1) + e(2,-2))").unwrap().eval(&Assignment::new()).unwrap();
        assert_eq!(h.len(), 2);
        let w = SymbolicForm::parse("e(1)*e(2) - e(1,2)").unwrap().eval(&Assignment::new()).unwrap();
        assert!(w.is_zero());

        assert!(SymbolicForm::parse("1/e(1)").is_err());
        assert!(SymbolicForm::parse("conj(e(1))").is_err());
    }

    #[test]
    fn assignment_parsing() {
        let s = parse_assignment("D=1/8, t=1/3 - i/5").unwrap();
        assert_eq!(s["t"], Scalar::from_ratios(1, 3, -1, 5));
        assert!(parse_assignment("D").is_err());
    }
}
