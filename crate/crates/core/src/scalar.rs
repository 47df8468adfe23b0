//! Exact coefficient fields: the rationals, prime fields `GF(p)`, and simple
//! extensions `K[x]/(f)` over either of them.
//!
//! Every [`Scalar`] carries enough information to identify its field, so two
//! scalars can be combined without a separate context object. Mixing scalars
//! from different fields is a logic error and panics; callers that accept
//! user data check [`Scalar::field`] first.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ScalarError;
use crate::poly::Poly;

/// A field descriptor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Prime(u64),
    Extension(Arc<ExtensionField>),
}

/// `K[x]/(f)` for a base field `K` and a modulus `f` with nonzero constant term.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct ExtensionField {
    modulus: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Prime { value: u64, modulus: u64 },
    Ext(ExtElem),
}

/// An element of an [`ExtensionField`], stored as its remainder modulo `f`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtElem {
    field: Arc<ExtensionField>,
    rep: Poly,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % p as u128) as u64;
        }
        base = ((base as u128 * base as u128) % p as u128) as u64;
        exp >>= 1;
    }
    acc
}

impl Field {
    /// The prime field `GF(p)`.
    pub fn prime(p: u64) -> Result<Self, ScalarError> {
        if !is_prime(p) {
            return Err(ScalarError::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    /// The extension `base[x]/(modulus)`. The modulus must have degree at least
    /// one and a nonzero constant term so that the class of `x` is invertible.
    /// Irreducibility is the caller's responsibility.
    pub fn extension(modulus: Poly) -> Result<Self, ScalarError> {
        if matches!(modulus.field(), Field::Extension(_)) {
            return Err(ScalarError::NestedExtension);
        }
        match modulus.degree() {
            Some(d) if d >= 1 => {}
            _ => return Err(ScalarError::DegenerateModulus(modulus.to_string())),
        }
        if modulus.coeff(0).is_zero() {
            return Err(ScalarError::DegenerateModulus(modulus.to_string()));
        }
        Ok(Field::Extension(Arc::new(ExtensionField { modulus })))
    }

    /// Parses `q`, `Q`, `gf3`, `GF(5)`, `f7`.
    pub fn parse(src: &str) -> Result<Self, ScalarError> {
        let s = src.trim().to_ascii_lowercase();
        if s == "q" || s == "rational" || s == "rationals" {
            return Ok(Field::Rational);
        }
        let digits = s
            .strip_prefix("gf")
            .or_else(|| s.strip_prefix('f'))
            .map(|rest| rest.trim_start_matches('(').trim_end_matches(')'));
        match digits.and_then(|d| d.parse::<u64>().ok()) {
            Some(p) => Field::prime(p),
            None => Err(ScalarError::UnknownField(src.to_string())),
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(BigRational::zero()),
            Field::Prime(p) => Scalar::Prime {
                value: 0,
                modulus: *p,
            },
            Field::Extension(ext) => Scalar::Ext(ExtElem {
                field: ext.clone(),
                rep: Poly::zero(ext.base().clone()),
            }),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Prime {
                value: n.rem_euclid(*p as i64) as u64,
                modulus: *p,
            },
            Field::Extension(ext) => ext.embed(&ext.base().from_i64(n)),
        }
    }

    /// Maps a rational number into the field. Fails when the denominator
    /// vanishes in positive characteristic.
    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar, ScalarError> {
        match self {
            Field::Rational => Ok(Scalar::Rational(q.clone())),
            Field::Prime(p) => {
                let pb = BigInt::from(*p);
                let num = q.numer().mod_floor(&pb).to_u64().unwrap_or(0);
                let den = q.denom().mod_floor(&pb).to_u64().unwrap_or(0);
                if den == 0 {
                    return Err(ScalarError::DenominatorVanishes(q.to_string(), *p));
                }
                let inv = mod_pow(den, p - 2, *p);
                Ok(Scalar::Prime {
                    value: ((num as u128 * inv as u128) % *p as u128) as u64,
                    modulus: *p,
                })
            }
            Field::Extension(ext) => Ok(ext.embed(&ext.base().from_rational(q)?)),
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
            Field::Extension(ext) => ext.base().characteristic(),
        }
    }

    /// Number of elements, when finite and small enough to count.
    pub fn order(&self) -> Option<u64> {
        match self {
            Field::Rational => None,
            Field::Prime(p) => Some(*p),
            Field::Extension(ext) => {
                let q = ext.base().order()?;
                q.checked_pow(ext.degree() as u32)
            }
        }
    }

    /// All elements of a prime field in increasing order.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        match self {
            Field::Prime(p) => Some(
                (0..*p)
                    .map(|value| Scalar::Prime { value, modulus: *p })
                    .collect(),
            ),
            _ => None,
        }
    }

    /// For an extension field, the base field; otherwise the field itself.
    pub fn base(&self) -> &Field {
        match self {
            Field::Extension(ext) => ext.base(),
            other => other,
        }
    }

    /// Embeds a scalar of the base field into `self` (identity when `self` is
    /// not an extension).
    pub fn embed(&self, s: &Scalar) -> Scalar {
        match self {
            Field::Extension(ext) if !matches!(s, Scalar::Ext(_)) => ext.embed(s),
            _ => s.clone(),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "GF({p})"),
            Field::Extension(ext) => write!(f, "{}[x]/({})", ext.base(), ext.modulus),
        }
    }
}

impl ExtensionField {
    pub fn base(&self) -> &Field {
        self.modulus.field()
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap_or(0)
    }

    fn embed(self: &Arc<Self>, s: &Scalar) -> Scalar {
        Scalar::Ext(ExtElem {
            field: self.clone(),
            rep: Poly::constant(s.clone()),
        })
    }
}

impl ExtElem {
    /// The residue class of `x`.
    pub fn generator(field: &Arc<ExtensionField>) -> Scalar {
        let x = Poly::x(field.base().clone());
        Scalar::Ext(ExtElem {
            field: field.clone(),
            rep: x.div_rem(&field.modulus).1,
        })
    }

    pub fn from_poly(field: &Arc<ExtensionField>, p: &Poly) -> Scalar {
        Scalar::Ext(ExtElem {
            field: field.clone(),
            rep: p.div_rem(&field.modulus).1,
        })
    }

    /// Coordinates over the base field in the power basis `1, x, …, x^{d-1}`.
    pub fn coordinates(&self) -> Vec<Scalar> {
        (0..self.field.degree())
            .map(|i| self.rep.coeff(i))
            .collect()
    }

    pub fn rep(&self) -> &Poly {
        &self.rep
    }
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Prime { modulus, .. } => Field::Prime(*modulus),
            Scalar::Ext(e) => Field::Extension(e.field.clone()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Prime { value, .. } => *value == 0,
            Scalar::Ext(e) => e.rep.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Prime { value, .. } => *value == 1,
            Scalar::Ext(e) => e.rep.degree() == Some(0) && e.rep.coeff(0).is_one(),
        }
    }

    /// True for rationals with a negative value; other fields have no sign.
    pub fn is_negative(&self) -> bool {
        matches!(self, Scalar::Rational(q) if q.is_negative())
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Prime { value, modulus } => Scalar::Prime {
                value: mod_pow(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
            Scalar::Ext(e) => {
                let (g, s, _) = e.rep.ext_gcd(&e.field.modulus);
                // g is a nonzero constant since the modulus is irreducible or
                // at least coprime to the element.
                if g.degree() != Some(0) {
                    return None;
                }
                let c = g.coeff(0).inv()?;
                Scalar::Ext(ExtElem {
                    field: e.field.clone(),
                    rep: s.scale(&c).div_rem(&e.field.modulus).1,
                })
            }
        })
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, exp: i64) -> Option<Scalar> {
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        let mut acc = self.field().one();
        for _ in 0..exp.unsigned_abs() {
            acc = &acc * &base;
        }
        Some(acc)
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            _ => None,
        }
    }
}

fn check_same(a: &Scalar, b: &Scalar) {
    let ok = match (a, b) {
        (Scalar::Rational(_), Scalar::Rational(_)) => true,
        (Scalar::Prime { modulus: p, .. }, Scalar::Prime { modulus: q, .. }) => p == q,
        (Scalar::Ext(x), Scalar::Ext(y)) => Arc::ptr_eq(&x.field, &y.field) || x.field == y.field,
        _ => false,
    };
    assert!(ok, "scalar field mismatch: {} vs {}", a.field(), b.field());
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        check_same(self, rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (
                Scalar::Prime {
                    value: a,
                    modulus: p,
                },
                Scalar::Prime { value: b, .. },
            ) => Scalar::Prime {
                value: ((*a as u128 + *b as u128) % *p as u128) as u64,
                modulus: *p,
            },
            (Scalar::Ext(a), Scalar::Ext(b)) => Scalar::Ext(ExtElem {
                field: a.field.clone(),
                rep: a.rep.add(&b.rep),
            }),
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Prime { value, modulus } => Scalar::Prime {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
            Scalar::Ext(a) => Scalar::Ext(ExtElem {
                field: a.field.clone(),
                rep: a.rep.neg(),
            }),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        check_same(self, rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (
                Scalar::Prime {
                    value: a,
                    modulus: p,
                },
                Scalar::Prime { value: b, .. },
            ) => Scalar::Prime {
                value: ((*a as u128 * *b as u128) % *p as u128) as u64,
                modulus: *p,
            },
            (Scalar::Ext(a), Scalar::Ext(b)) => Scalar::Ext(ExtElem {
                field: a.field.clone(),
                rep: a.rep.mul(&b.rep).div_rem(&a.field.modulus).1,
            }),
            _ => unreachable!(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write!(f, "{q}"),
            Scalar::Prime { value, .. } => write!(f, "{value}"),
            Scalar::Ext(e) => write!(f, "{}", e.rep),
        }
    }
}

/// Writes `coeff·body` as a term of a sum. `first` controls whether a leading
/// `+` is emitted. Rational signs are pulled out front; compound coefficients
/// are parenthesised.
pub(crate) fn write_term(out: &mut String, coeff: &Scalar, body: &str, first: bool) {
    let (negative, magnitude) = if coeff.is_negative() {
        (true, -coeff)
    } else {
        (false, coeff.clone())
    };
    match (first, negative) {
        (true, false) => {}
        (true, true) => out.push('-'),
        (false, false) => out.push_str(" + "),
        (false, true) => out.push_str(" - "),
    }
    let mag = magnitude.to_string();
    let compound = mag.contains(' ');
    if magnitude.is_one() && !body.is_empty() {
        out.push_str(body);
    } else if body.is_empty() {
        if compound {
            out.push_str(&format!("({mag})"));
        } else {
            out.push_str(&mag);
        }
    } else if compound {
        out.push_str(&format!("({mag}) {body}"));
    } else {
        out.push_str(&format!("{mag} {body}"));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::Rational(BigRational::new(n.into(), d.into()))
    }

    #[test]
    fn prime_field_inverse() {
        let f = Field::prime(7).unwrap();
        for a in 1..7 {
            let x = f.from_i64(a);
            assert!((&x * &x.inv().unwrap()).is_one());
        }
        assert!(Field::prime(8).is_err());
    }

    #[test]
    fn rational_embedding_in_prime_field() {
        let f = Field::prime(5).unwrap();
        let half = f
            .from_rational(&BigRational::new(1.into(), 2.into()))
            .unwrap();
        assert_eq!(half, f.from_i64(3));
        assert!(f
            .from_rational(&BigRational::new(1.into(), 5.into()))
            .is_err());
    }

    #[test]
    fn cube_root_of_unity_extension() {
        // x^3 = 1 in Q[x]/(1 + x + x^2)
        let modulus = Poly::new(Field::Rational, vec![q(1, 1), q(1, 1), q(1, 1)]);
        let Field::Extension(ext) = Field::extension(modulus).unwrap() else {
            unreachable!()
        };
        let x = ExtElem::generator(&ext);
        let x3 = x.pow(3).unwrap();
        assert!(x3.is_one());
        assert!(!x.is_one());
        let xinv = x.inv().unwrap();
        assert_eq!(xinv, x.pow(2).unwrap());
    }

    #[test]
    fn parse_fields() {
        assert_eq!(Field::parse("q").unwrap(), Field::Rational);
        assert_eq!(Field::parse("gf3").unwrap(), Field::Prime(3));
        assert_eq!(Field::parse("GF(2)").unwrap(), Field::Prime(2));
        assert!(Field::parse("gf4").is_err());
        assert!(Field::parse("reals").is_err());
    }

    #[test]
    fn term_formatting() {
        let mut s = String::new();
        write_term(&mut s, &q(1, 1), "v", true);
        write_term(&mut s, &q(-1, 1), "e f*", false);
        write_term(&mut s, &q(3, 2), "f", false);
        write_term(&mut s, &q(-2, 1), "", false);
        assert_eq!(s, "v - e f* + 3/2 f - 2");
    }
}
