//! Dense univariate polynomials over a [`Field`], Laurent polynomials in
//! `x, x⁻¹`, and the irreducibility checks used to validate twisting data.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ScalarError;
use crate::scalar::{write_term, Field, Scalar};

/// Coefficients are stored low degree first with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(field: Field, coeffs: Vec<Scalar>) -> Self {
        let mut p = Poly { field, coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Scalar::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn zero(field: Field) -> Self {
        Poly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(c: Scalar) -> Self {
        Poly::new(c.field(), vec![c])
    }

    pub fn x(field: Field) -> Self {
        let coeffs = vec![field.zero(), field.one()];
        Poly::new(field, coeffs)
    }

    /// Builds a polynomial from small integer coefficients, low degree first.
    pub fn from_i64s(field: &Field, coeffs: &[i64]) -> Self {
        Poly::new(
            field.clone(),
            coeffs.iter().map(|&c| field.from_i64(c)).collect(),
        )
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect();
        Poly::new(self.field.clone(), coeffs)
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.field.clone(), self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        Poly::new(
            self.field.clone(),
            self.coeffs.iter().map(|a| a * c).collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.field.clone());
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(self.field.clone(), out)
    }

    /// Euclidean division. Panics on division by zero.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = d
            .leading()
            .and_then(Scalar::inv)
            .expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![self.field.zero(); self.coeffs.len().saturating_sub(dd).max(1)];
        while rem.len() > dd {
            let top = rem.len() - 1;
            let c = &rem[top] * &lead_inv;
            let shift = top - dd;
            if !c.is_zero() {
                for (k, dc) in d.coeffs.iter().enumerate() {
                    rem[shift + k] = &rem[shift + k] - &(&c * dc);
                }
            }
            quot[shift] = c;
            rem.pop();
        }
        (
            Poly::new(self.field.clone(), quot),
            Poly::new(self.field.clone(), rem),
        )
    }

    /// Returns `(g, s, t)` with `s·self + t·other = g = gcd(self, other)`.
    pub fn ext_gcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let one = Poly::constant(self.field.one());
        let zero = Poly::zero(self.field.clone());
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (one.clone(), zero.clone());
        let (mut t0, mut t1) = (zero, one);
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s2 = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s2);
            let t2 = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t2);
        }
        (r0, s0, t0)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = x.field().zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + &x.field().embed(c);
        }
        acc
    }

    /// Constant term is one.
    pub fn is_normalized(&self) -> bool {
        self.coeffs.first().is_some_and(Scalar::is_one)
    }

    /// The polynomial `1 - x`, the representative that marks the untwisted
    /// cycle module.
    pub fn one_minus_x(field: &Field) -> Poly {
        Poly::from_i64s(field, &[1, -1])
    }

    pub fn irreducibility(&self) -> Irreducibility {
        irreducibility(self)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let body = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            write_term(&mut out, c, &body, first);
            first = false;
        }
        write!(f, "{out}")
    }
}

/// A Laurent polynomial `Σ a_k x^k`, `k ∈ ℤ`, with only nonzero terms stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    field: Field,
    terms: BTreeMap<i64, Scalar>,
}

impl LaurentPoly {
    pub fn new(field: Field) -> Self {
        LaurentPoly {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_poly(p: &Poly) -> Self {
        let mut out = LaurentPoly::new(p.field().clone());
        for (i, c) in p.coeffs().iter().enumerate() {
            out.add_term(i as i64, c.clone());
        }
        out
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn add_term(&mut self, exp: i64, c: Scalar) {
        let sum = match self.terms.get(&exp) {
            Some(old) => old + &c,
            None => c,
        };
        if sum.is_zero() {
            self.terms.remove(&exp);
        } else {
            self.terms.insert(exp, sum);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Scalar)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The associate `u·x^k·self` with constant term one and no negative
    /// powers, as an ordinary polynomial. `None` for the zero polynomial.
    pub fn associate(&self) -> Option<Poly> {
        let (&low, c0) = self.terms.iter().next()?;
        let inv = c0.inv()?;
        let high = *self.terms.keys().next_back()?;
        let mut coeffs = vec![self.field.zero(); (high - low) as usize + 1];
        for (k, c) in &self.terms {
            coeffs[(k - low) as usize] = c * &inv;
        }
        Some(Poly::new(self.field.clone(), coeffs))
    }

    /// Parses expressions such as `1+x+x^2`, `1 - x - x^2`, `x^-1`, `2x^3`,
    /// `1/2 x`, `3*x^2 - 1`.
    pub fn parse(src: &str, field: &Field) -> Result<Self, ScalarError> {
        LaurentParser {
            src: src.as_bytes(),
            pos: 0,
            field,
        }
        .parse()
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (i, (k, c)) in self.terms.iter().enumerate() {
            let body = match k {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{k}"),
            };
            write_term(&mut out, c, &body, i == 0);
        }
        write!(f, "{out}")
    }
}

struct LaurentParser<'a> {
    src: &'a [u8],
    pos: usize,
    field: &'a Field,
}

impl LaurentParser<'_> {
    fn err(&self, msg: &str) -> ScalarError {
        ScalarError::PolySyntax {
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

    fn integer(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()?
            .parse()
            .ok()
    }

    fn parse(mut self) -> Result<LaurentPoly, ScalarError> {
        let mut out = LaurentPoly::new(self.field.clone());
        let mut first = true;
        loop {
            let mut negative = false;
            match self.peek() {
                None if !first => break,
                None => return Err(self.err("empty polynomial")),
                Some(b'+') if !first => self.pos += 1,
                Some(b'-') => {
                    negative = true;
                    self.pos += 1;
                }
                Some(_) if first => {}
                Some(_) => return Err(self.err("expected '+' or '-'")),
            }
            first = false;
            let (exp, coeff) = self.term()?;
            let mut c = self.field.from_rational(&coeff)?;
            if negative {
                c = -c;
            }
            out.add_term(exp, c);
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(i64, BigRational), ScalarError> {
        let mut coeff = BigRational::one();
        let mut saw_coeff = false;
        if let Some(n) = self.integer() {
            saw_coeff = true;
            let mut q = BigRational::from_integer(n);
            if self.peek() == Some(b'/') {
                self.pos += 1;
                let d = self
                    .integer()
                    .ok_or_else(|| self.err("expected denominator"))?;
                if d.is_zero() {
                    return Err(self.err("zero denominator"));
                }
                q /= BigRational::from_integer(d);
            }
            coeff = q;
            if self.peek() == Some(b'*') {
                self.pos += 1;
            }
        }
        if self.peek() == Some(b'x') {
            self.pos += 1;
            let mut exp = 1i64;
            if self.peek() == Some(b'^') {
                self.pos += 1;
                let neg = if self.peek() == Some(b'-') {
                    self.pos += 1;
                    true
                } else {
                    false
                };
                let e = self
                    .integer()
                    .and_then(|e| e.to_i64())
                    .ok_or_else(|| self.err("expected exponent"))?;
                exp = if neg { -e } else { e };
            }
            Ok((exp, coeff))
        } else if saw_coeff {
            Ok((0, coeff))
        } else {
            Err(self.err("expected a coefficient or 'x'"))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible,
    Reducible,
    /// Rational polynomials of degree four or more without rational roots.
    Unknown,
}

fn irreducibility(p: &Poly) -> Irreducibility {
    let Some(deg) = p.degree() else {
        return Irreducibility::Reducible;
    };
    if deg == 0 {
        // units are not irreducible
        return Irreducibility::Reducible;
    }
    if deg == 1 {
        return Irreducibility::Irreducible;
    }
    match p.field() {
        Field::Prime(q) => {
            if has_monic_factor_up_to(p, *q, deg / 2) {
                Irreducibility::Reducible
            } else {
                Irreducibility::Irreducible
            }
        }
        Field::Rational => match has_rational_root(p) {
            Some(true) => Irreducibility::Reducible,
            Some(false) if deg <= 3 => Irreducibility::Irreducible,
            _ => Irreducibility::Unknown,
        },
        Field::Extension(_) => Irreducibility::Unknown,
    }
}

/// Brute force over every monic divisor candidate of degree `1..=max_deg`.
fn has_monic_factor_up_to(p: &Poly, q: u64, max_deg: usize) -> bool {
    let field = p.field().clone();
    for d in 1..=max_deg {
        let count = q.pow(d as u32);
        for idx in 0..count {
            let mut coeffs = Vec::with_capacity(d + 1);
            let mut rest = idx;
            for _ in 0..d {
                coeffs.push(field.from_i64((rest % q) as i64));
                rest /= q;
            }
            coeffs.push(field.one());
            let cand = Poly::new(field.clone(), coeffs);
            if p.div_rem(&cand).1.is_zero() {
                return true;
            }
        }
    }
    false
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n == 0 {
        return Some(vec![BigInt::zero()]);
    }
    if n > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d != n / d {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    Some(out)
}

/// Rational root screening. `None` when the coefficients are too large to
/// enumerate divisors.
fn has_rational_root(p: &Poly) -> Option<bool> {
    let rats: Vec<BigRational> = p
        .coeffs()
        .iter()
        .map(|c| c.as_rational().cloned())
        .collect::<Option<_>>()?;
    let lcm = rats.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = rats
        .iter()
        .map(|r| (r * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    if ints[0].is_zero() {
        return Some(true);
    }
    let lead = ints.last()?;
    for num in divisors(&ints[0])? {
        for den in divisors(lead)? {
            for sign in [1, -1] {
                let root = BigRational::new(num.clone() * sign, den.clone());
                let val = rats
                    .iter()
                    .rev()
                    .fold(BigRational::zero(), |acc, c| acc * &root + c);
                if val.is_zero() {
                    return Some(true);
                }
            }
        }
    }
    Some(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_normalize() {
        let q = Field::Rational;
        let p = LaurentPoly::parse("x^-1 + 1 + x", &q).unwrap();
        assert_eq!(p.associate().unwrap(), Poly::from_i64s(&q, &[1, 1, 1]));
        let p = LaurentPoly::parse("2x - 2", &q).unwrap();
        assert_eq!(p.associate().unwrap(), Poly::from_i64s(&q, &[1, -1]));
        let p = LaurentPoly::parse("3*x^2", &q).unwrap();
        assert_eq!(p.associate().unwrap(), Poly::from_i64s(&q, &[1]));
        assert!(LaurentPoly::parse("1 + y", &q).is_err());
        assert!(LaurentPoly::parse("", &q).is_err());
    }

    #[test]
    fn display_round_trips() {
        let q = Field::Rational;
        for src in ["1 + x + x^2", "1 - x - x^2", "-1/2 x^3", "x^-2 + 3"] {
            let p = LaurentPoly::parse(src, &q).unwrap();
            let again = LaurentPoly::parse(&p.to_string(), &q).unwrap();
            assert_eq!(p, again);
        }
        assert_eq!(Poly::from_i64s(&q, &[1, 1, 1]).to_string(), "1 + x + x^2");
    }

    #[test]
    fn rational_irreducibility() {
        let q = Field::Rational;
        let cases = [
            (vec![1, 1], Irreducibility::Irreducible),
            (vec![1, 1, 1], Irreducibility::Irreducible),
            (vec![1, -1, -1], Irreducibility::Irreducible),
            (vec![1, 0, -1], Irreducibility::Reducible),
            (vec![1, 0, 0, 1], Irreducibility::Reducible),
            (vec![1, 0, 0, 2], Irreducibility::Irreducible),
            (vec![4, 0, 5, 0, 1], Irreducibility::Unknown),
        ];
        for (c, want) in cases {
            assert_eq!(Poly::from_i64s(&q, &c).irreducibility(), want, "{c:?}");
        }
    }

    #[test]
    fn prime_field_irreducibility() {
        let f2 = Field::prime(2).unwrap();
        assert_eq!(
            Poly::from_i64s(&f2, &[1, 1, 1]).irreducibility(),
            Irreducibility::Irreducible
        );
        assert_eq!(
            Poly::from_i64s(&f2, &[1, 0, 1]).irreducibility(),
            Irreducibility::Reducible
        );
        // x^4 + x + 1 irreducible, (x^2+x+1)^2 = x^4 + x^2 + 1 not
        assert_eq!(
            Poly::from_i64s(&f2, &[1, 1, 0, 0, 1]).irreducibility(),
            Irreducibility::Irreducible
        );
        assert_eq!(
            Poly::from_i64s(&f2, &[1, 0, 1, 0, 1]).irreducibility(),
            Irreducibility::Reducible
        );
    }

    #[test]
    fn division_identity() {
        let q = Field::Rational;
        let a = Poly::from_i64s(&q, &[3, 0, 2, 5, 1]);
        let b = Poly::from_i64s(&q, &[1, 2, 1]);
        let (quo, rem) = a.div_rem(&b);
        assert_eq!(quo.mul(&b).add(&rem), a);
        assert!(rem.degree().unwrap_or(0) < 2);
    }
}
