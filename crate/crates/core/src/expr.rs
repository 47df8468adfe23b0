//! Text expressions over the generators of `L_K(E)`.
//!
//! ```text
//! sum     := term (('+' | '-') term)*
//! term    := '-' term | product
//! product := factor ('.'? factor)*
//! factor  := atom '*'*
//! atom    := integer ('/' integer)? | name ('[' integer ']')? | '(' sum ')'
//! ```
//!
//! Postfix `*` is the involution, so `e*` is the ghost of `e` and
//! `(e f)*` is `f* e*`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::algebra::LpaElement;
use crate::error::AlgebraError;
use crate::graph::{Edge, Graph, VertexId};
use crate::scalar::Field;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Scalar(BigRational),
    Vertex(VertexId),
    Edge(Edge),
    Star(Box<Expr>),
    Product(Vec<Expr>),
    Sum(Vec<Expr>),
    Neg(Box<Expr>),
}

impl Expr {
    pub fn parse(src: &str, g: &Graph) -> Result<Expr, AlgebraError> {
        let mut p = Parser {
            src: src.as_bytes(),
            pos: 0,
            g,
        };
        let e = p.sum()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(p.err("unexpected input"));
        }
        Ok(e)
    }

    pub fn evaluate(&self, g: &Arc<Graph>, field: &Field) -> Result<LpaElement, AlgebraError> {
        Ok(match self {
            Expr::Scalar(q) => LpaElement::one(g, field).scale(&field.from_rational(q)?)?,
            Expr::Vertex(v) => LpaElement::vertex(g, field, *v),
            Expr::Edge(e) => LpaElement::edge(g, field, *e),
            Expr::Star(x) => x.evaluate(g, field)?.star(),
            Expr::Neg(x) => -&x.evaluate(g, field)?,
            Expr::Product(xs) => {
                let mut acc = LpaElement::one(g, field);
                for x in xs {
                    acc = acc.try_mul(&x.evaluate(g, field)?)?;
                }
                acc
            }
            Expr::Sum(xs) => {
                let mut acc = LpaElement::zero(g, field);
                for x in xs {
                    acc = acc.try_add(&x.evaluate(g, field)?)?;
                }
                acc
            }
        })
    }

    pub fn display(&self, g: &Graph) -> String {
        match self {
            Expr::Scalar(q) => q.to_string(),
            Expr::Vertex(v) => g.vertex_name(*v).to_string(),
            Expr::Edge(e) => g.edge_name(*e),
            Expr::Star(x) => match **x {
                Expr::Scalar(_) | Expr::Vertex(_) | Expr::Edge(_) | Expr::Star(_) => {
                    format!("{}*", x.display(g))
                }
                _ => format!("({})*", x.display(g)),
            },
            Expr::Neg(x) => match **x {
                Expr::Sum(_) => format!("-({})", x.display(g)),
                _ => format!("-{}", x.display(g)),
            },
            Expr::Product(xs) => xs
                .iter()
                .map(|x| match x {
                    Expr::Sum(_) | Expr::Neg(_) | Expr::Product(_) => format!("({})", x.display(g)),
                    _ => x.display(g),
                })
                .collect::<Vec<_>>()
                .join(" "),
            Expr::Sum(xs) => {
                let mut out = String::new();
                for (i, x) in xs.iter().enumerate() {
                    match (i, x) {
                        (0, _) => out.push_str(&Self::sum_operand(x, g)),
                        (_, Expr::Neg(inner)) => {
                            out.push_str(" - ");
                            out.push_str(&Self::sum_operand(inner, g));
                        }
                        _ => {
                            out.push_str(" + ");
                            out.push_str(&Self::sum_operand(x, g));
                        }
                    }
                }
                out
            }
        }
    }

    fn sum_operand(x: &Expr, g: &Graph) -> String {
        match x {
            Expr::Sum(_) => format!("({})", x.display(g)),
            _ => x.display(g),
        }
    }
}

/// Parses and evaluates: the normal form of a text expression.
pub fn normal_form(src: &str, g: &Arc<Graph>, field: &Field) -> Result<LpaElement, AlgebraError> {
    Expr::parse(src, g)?.evaluate(g, field)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    g: &'a Graph,
}

fn ident_start(c: u8) -> bool {
    c.is_ascii_alphabetic() || c == b'_'
}

fn ident_char(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_' || c == b'\''
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> AlgebraError {
        AlgebraError::SyntaxError {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn sum(&mut self) -> Result<Expr, AlgebraError> {
        let mut terms = Vec::new();
        push_flat(&mut terms, self.term()?, |e| matches!(e, Expr::Sum(_)));
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    push_flat(&mut terms, self.term()?, |e| matches!(e, Expr::Sum(_)));
                }
                Some(b'-') => {
                    self.pos += 1;
                    terms.push(Expr::Neg(Box::new(self.term()?)));
                }
                _ => break,
            }
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            Expr::Sum(terms)
        })
    }

    fn term(&mut self) -> Result<Expr, AlgebraError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.term()?)));
        }
        let mut factors = Vec::new();
        push_flat(&mut factors, self.factor()?, |e| {
            matches!(e, Expr::Product(_))
        });
        loop {
            match self.peek() {
                Some(b'.') => {
                    self.pos += 1;
                    push_flat(&mut factors, self.factor()?, |e| {
                        matches!(e, Expr::Product(_))
                    });
                }
                Some(c) if c == b'(' || c.is_ascii_digit() || ident_start(c) => {
                    push_flat(&mut factors, self.factor()?, |e| {
                        matches!(e, Expr::Product(_))
                    });
                }
                _ => break,
            }
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            Expr::Product(factors)
        })
    }

    fn factor(&mut self) -> Result<Expr, AlgebraError> {
        let mut e = self.atom()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            e = Expr::Star(Box::new(e));
        }
        Ok(e)
    }

    fn integer(&mut self) -> Result<BigInt, AlgebraError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(text.parse().unwrap())
    }

    fn atom(&mut self) -> Result<Expr, AlgebraError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.sum()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let den = if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let d = self.integer()?;
                    if d == BigInt::from(0) {
                        return Err(self.err("zero denominator"));
                    }
                    d
                } else {
                    BigInt::one()
                };
                Ok(Expr::Scalar(BigRational::new(num, den)))
            }
            Some(c) if ident_start(c) => {
                let start = self.pos;
                while self.pos < self.src.len() && ident_char(self.src[self.pos]) {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos])
                    .unwrap()
                    .to_string();
                if self.src.get(self.pos) == Some(&b'[') {
                    self.pos += 1;
                    let idx = self.integer()?;
                    if self.peek() != Some(b']') {
                        return Err(self.err("expected ']'"));
                    }
                    self.pos += 1;
                    let full = format!("{name}[{idx}]");
                    return self
                        .g
                        .parse_edge(&full)
                        .map(Expr::Edge)
                        .ok_or(AlgebraError::UnknownSymbol(full));
                }
                if let Some(v) = self.g.vertex_id(&name) {
                    Ok(Expr::Vertex(v))
                } else if let Some(e) = self.g.parse_edge(&name) {
                    Ok(Expr::Edge(e))
                } else {
                    Err(AlgebraError::UnknownSymbol(name))
                }
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

fn push_flat(out: &mut Vec<Expr>, e: Expr, same: impl Fn(&Expr) -> bool) {
    if same(&e) {
        match e {
            Expr::Sum(xs) | Expr::Product(xs) => out.extend(xs),
            _ => unreachable!(),
        }
    } else {
        out.push(e);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use proptest::prelude::*;

    fn nf(src: &str) -> String {
        let g = Arc::new(g_toe());
        normal_form(src, &g, &Field::Rational).unwrap().display()
    }

    #[test]
    fn examples() {
        assert_eq!(nf("e* e"), "v");
        assert_eq!(nf("f*e"), "0");
        assert_eq!(nf("e e* + f f* - v"), "0");
        assert_eq!(nf("(e+f).(e*+f*)"), "v");
        assert_eq!(nf("(e*+f*)(e+f)"), "v + w");
        assert_eq!(nf("(e f)*"), "f* e*");
        assert_eq!(nf("3/2 e - -e"), "5/2 e");
        assert_eq!(nf("2"), "2 v + 2 w");
    }

    #[test]
    fn errors() {
        let g = g_toe();
        assert_eq!(
            Expr::parse("q*", &g),
            Err(AlgebraError::UnknownSymbol("q".into()))
        );
        assert!(matches!(
            Expr::parse("e +", &g),
            Err(AlgebraError::SyntaxError { pos: 3, .. })
        ));
        assert!(matches!(
            Expr::parse("(e", &g),
            Err(AlgebraError::SyntaxError { .. })
        ));
        assert!(matches!(
            Expr::parse("e )", &g),
            Err(AlgebraError::SyntaxError { pos: 2, .. })
        ));
    }

    #[test]
    fn indexed_edges() {
        let g = Arc::new(g_omega());
        let x = normal_form("k[3]* k[3] - k[1]* k[2]", &g, &Field::Rational).unwrap();
        assert_eq!(x.display(), "h");
        assert_eq!(
            Expr::parse("k", &g),
            Err(AlgebraError::UnknownSymbol("k".into()))
        );
    }

    fn arb_expr() -> impl Strategy<Value = String> {
        let leaf = prop_oneof![
            Just("v".to_string()),
            Just("w".to_string()),
            Just("e".to_string()),
            Just("f".to_string()),
            (1u32..5, 1u32..4).prop_map(|(a, b)| format!("{a}/{b}")),
            (0u32..7).prop_map(|a| a.to_string()),
        ];
        leaf.prop_recursive(4, 24, 4, |inner| {
            prop_oneof![
                inner.clone().prop_map(|x| format!("({x})*")),
                inner.clone().prop_map(|x| format!("{x}*")),
                inner.clone().prop_map(|x| format!("-{x}")),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a} + {b}")),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a} - {b}")),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}).({b})")),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) ({b})")),
                inner.prop_map(|x| format!("({x})")),
            ]
        })
    }

    proptest! {
        #[test]
        fn parse_print_round_trip(src in arb_expr()) {
            let g = Arc::new(g_toe());
            let Ok(a) = Expr::parse(&src, &g) else { return Ok(()); };
            let printed = a.display(&g);
            let b = Expr::parse(&printed, &g).unwrap();
            prop_assert_eq!(&a, &b, "printed as {}", printed);
            let k = Field::Rational;
            prop_assert_eq!(a.evaluate(&g, &k).unwrap(), b.evaluate(&g, &k).unwrap());
        }
    }
}
