use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Coefficient field: the rationals or a prime field GF(p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    /// GF(p). Residues are multiplied in `u64`, so `p` must stay below 2^32.
    pub fn prime(p: u64) -> Result<Field> {
        if p >= 1 << 32 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match *self {
            Field::Rational => Scalar(Repr::Q(BigRational::from_integer(BigInt::from(n)))),
            Field::Prime(p) => Scalar(Repr::Gf {
                value: n.rem_euclid(p as i64) as u64,
                p,
            }),
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match *self {
            Field::Rational => Scalar(Repr::Q(BigRational::from_integer(n.clone()))),
            Field::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(p));
                Scalar(Repr::Gf {
                    value: r.to_u64().expect("residue fits"),
                    p,
                })
            }
        }
    }

    /// The image of the rational `num/den` in this field; fails when the
    /// denominator vanishes in the field (e.g. 1/3 over GF(3)).
    pub fn ratio(&self, num: i64, den: i64) -> Result<Scalar> {
        self.from_bigint(&BigInt::from(num))
            .checked_div(&self.from_bigint(&BigInt::from(den)))
    }

    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar> {
        self.from_bigint(q.numer())
            .checked_div(&self.from_bigint(q.denom()))
    }

    /// Parses `"p/q"` or an integer string.
    pub fn parse(&self, text: &str) -> Result<Scalar> {
        let q = parse_rational(text)?;
        self.from_rational(&q)
    }
}

pub fn parse_rational(text: &str) -> Result<BigRational> {
    let bad = || Error::ParseScalar(text.to_string());
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Q(BigRational),
    Gf { value: u64, p: u64 },
}

/// An exact field element. Arithmetic between elements of different fields
/// is a programming error and panics; public constructors check fields.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar(Repr);

impl Scalar {
    pub fn field(&self) -> Field {
        match &self.0 {
            Repr::Q(_) => Field::Rational,
            Repr::Gf { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Q(q) => q.is_zero(),
            Repr::Gf { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Q(q) => q.is_one(),
            Repr::Gf { value, .. } => *value == 1,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.0 {
            Repr::Q(q) => Some(q),
            Repr::Gf { .. } => None,
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        match &self.0 {
            Repr::Q(q) => {
                if q.is_zero() {
                    Err(Error::DivisionByZero(Field::Rational))
                } else {
                    Ok(Scalar(Repr::Q(q.recip())))
                }
            }
            Repr::Gf { value, p } => {
                if *value == 0 {
                    return Err(Error::DivisionByZero(Field::Prime(*p)));
                }
                Ok(Scalar(Repr::Gf {
                    value: pow_mod(*value, p - 2, *p),
                    p: *p,
                }))
            }
        }
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self * &other.inv()?)
    }

    /// Absolute value for rationals; identity on residues.
    pub fn abs(&self) -> Scalar {
        match &self.0 {
            Repr::Q(q) => Scalar(Repr::Q(q.abs())),
            Repr::Gf { .. } => self.clone(),
        }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = self.field().one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Q(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Repr::Gf { value, .. } => write!(f, "{value}"),
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $q:expr, $g:expr) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                match (&self.0, &rhs.0) {
                    (Repr::Q(a), Repr::Q(b)) => Scalar(Repr::Q($q(a, b))),
                    (Repr::Gf { value: a, p }, Repr::Gf { value: b, p: p2 }) if p == p2 => {
                        Scalar(Repr::Gf {
                            value: $g(*a, *b, *p),
                            p: *p,
                        })
                    }
                    _ => panic!("scalar field mismatch: {} vs {}", self.field(), rhs.field()),
                }
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}

binop!(
    Add,
    add,
    |a: &BigRational, b: &BigRational| a + b,
    |a: u64, b: u64, p: u64| (a + b) % p
);
binop!(
    Sub,
    sub,
    |a: &BigRational, b: &BigRational| a - b,
    |a: u64, b: u64, p: u64| (a + p - b) % p
);
binop!(
    Mul,
    mul,
    |a: &BigRational, b: &BigRational| a * b,
    |a: u64, b: u64, p: u64| a * b % p
);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        match (&mut self.0, &rhs.0) {
            (Repr::Q(a), Repr::Q(b)) => *a += b,
            _ => *self = &*self + rhs,
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        match (&mut self.0, &rhs.0) {
            (Repr::Q(a), Repr::Q(b)) => *a -= b,
            _ => *self = &*self - rhs,
        }
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match &self.0 {
            Repr::Q(q) => Scalar(Repr::Q(-q)),
            Repr::Gf { value, p } => Scalar(Repr::Gf {
                value: (p - value) % p,
                p: *p,
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_reduce() {
        let q = Field::Rational;
        let a = q.parse("6/4").unwrap();
        assert_eq!(a.to_string(), "3/2");
        assert_eq!((&a + &q.parse("-3/2").unwrap()), q.zero());
        assert_eq!(q.parse("-7").unwrap().to_string(), "-7");
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::prime(5).unwrap();
        let two = f.from_i64(2);
        assert_eq!(two.inv().unwrap(), f.from_i64(3));
        assert_eq!(f.from_i64(-1), f.from_i64(4));
        assert_eq!(f.parse("1/2").unwrap(), f.from_i64(3));
    }

    #[test]
    fn rejects_composite_modulus() {
        assert_eq!(Field::prime(4), Err(Error::NotPrime(4)));
        assert!(Field::prime(1).is_err());
    }

    #[test]
    fn one_third_undefined_in_gf3() {
        let f = Field::prime(3).unwrap();
        assert_eq!(f.ratio(1, 3), Err(Error::DivisionByZero(f)));
    }

    #[test]
    fn bad_literals() {
        assert!(Field::Rational.parse("1/0").is_err());
        assert!(Field::Rational.parse("x").is_err());
    }
}
