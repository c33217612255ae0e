//! Field scalars: exact rationals or residues modulo a prime.
//!
//! Rationals are kept in lowest terms with positive denominator (the
//! `BigRational` constructor guarantees both). Prime-field values are
//! canonical residues in `[0, p)` with `p` validated prime at construction.
//! Every binary operation checks that both operands carry the same field tag.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FieldTag {
    Rational,
    Prime(u64),
}

impl FieldTag {
    pub fn prime(p: u64) -> Result<FieldTag> {
        if !is_prime(p) {
            return Err(Error::InvalidModulus(p));
        }
        Ok(FieldTag::Prime(p))
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, FieldTag::Rational)
    }
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Rational => write!(f, "Q"),
            FieldTag::Prime(p) => write!(f, "F{p}"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).map_or(false, |sq| sq <= p) {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Mod { p: u64, v: u64 },
}

impl Scalar {
    pub fn zero(tag: FieldTag) -> Scalar {
        match tag {
            FieldTag::Rational => Scalar::Rat(BigRational::zero()),
            FieldTag::Prime(p) => Scalar::Mod { p, v: 0 },
        }
    }

    pub fn one(tag: FieldTag) -> Scalar {
        match tag {
            FieldTag::Rational => Scalar::Rat(BigRational::one()),
            FieldTag::Prime(p) => Scalar::Mod { p, v: 1 % p },
        }
    }

    pub fn from_i64(n: i64, tag: FieldTag) -> Scalar {
        match tag {
            FieldTag::Rational => Scalar::Rat(BigRational::from(BigInt::from(n))),
            FieldTag::Prime(p) => {
                let r = n.rem_euclid(p as i64 as i64);
                // rem_euclid needs p to fit in i64; fall back through i128 otherwise
                let v = if p <= i64::MAX as u64 {
                    r as u64 % p
                } else {
                    (n as i128).rem_euclid(p as i128) as u64
                };
                Scalar::Mod { p, v }
            }
        }
    }

    pub fn rational(num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar::Rat(BigRational::new(
            BigInt::from(num),
            BigInt::from(den),
        )))
    }

    pub fn field(&self) -> FieldTag {
        match self {
            Scalar::Rat(_) => FieldTag::Rational,
            Scalar::Mod { p, .. } => FieldTag::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Mod { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Mod { p, v } => *v == 1 % p,
        }
    }

    fn check_same_field(&self, other: &Scalar) -> Result<()> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar> {
        self.check_same_field(other)?;
        Ok(match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Mod { p, v: a }, Scalar::Mod { v: b, .. }) => Scalar::Mod {
                p: *p,
                v: ((*a as u128 + *b as u128) % *p as u128) as u64,
            },
            _ => unreachable!("field tags checked above"),
        })
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar> {
        self.check_same_field(other)?;
        Ok(match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Mod { p, v: a }, Scalar::Mod { v: b, .. }) => Scalar::Mod {
                p: *p,
                v: ((*a as u128 * *b as u128) % *p as u128) as u64,
            },
            _ => unreachable!("field tags checked above"),
        })
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Mod { p, v } => Scalar::Mod {
                p: *p,
                v: if *v == 0 { 0 } else { p - v },
            },
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rat(a) => Scalar::Rat(a.recip()),
            Scalar::Mod { p, v } => Scalar::Mod {
                p: *p,
                v: mod_inv(*v, *p),
            },
        })
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        self.mul(&other.inv()?)
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = Scalar::one(self.field());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same field");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same field");
            }
        }
        acc
    }

    /// Rational value accessor; errors over prime fields.
    pub fn as_rational(&self) -> Result<&BigRational> {
        match self {
            Scalar::Rat(r) => Ok(r),
            Scalar::Mod { p, .. } => Err(Error::UnsupportedField(format!(
                "expected a rational, found residue mod {p}"
            ))),
        }
    }
}

/// Extended-Euclid modular inverse; `v` must be nonzero mod prime `p`.
fn mod_inv(v: u64, p: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, v as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1, "modulus is prime and v nonzero");
    t.rem_euclid(p as i128) as u64
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{r}"),
            Scalar::Mod { v, .. } => write!(f, "{v}"),
        }
    }
}

/// Parses `"p/q"` or an integer into a scalar of the given field. Over a
/// prime field, `p/q` means `p * q^{-1} mod p`.
pub fn parse_scalar(text: &str, tag: FieldTag) -> Result<Scalar> {
    let bad = || Error::Syntax {
        line: 0,
        msg: format!("malformed scalar `{text}`"),
    };
    let (num_s, den_s) = match text.split_once('/') {
        Some((a, b)) => (a, Some(b)),
        None => (text, None),
    };
    let num: BigInt = num_s.parse().map_err(|_| bad())?;
    let den: BigInt = match den_s {
        Some(d) => d.parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    match tag {
        FieldTag::Rational => Ok(Scalar::Rat(BigRational::new(num, den))),
        FieldTag::Prime(p) => {
            let n = bigint_mod(&num, p);
            let d = bigint_mod(&den, p);
            let d_inv = Scalar::Mod { p, v: d }.inv()?;
            Scalar::Mod { p, v: n }.mul(&d_inv)
        }
    }
}

fn bigint_mod(n: &BigInt, p: u64) -> u64 {
    let m = n % BigInt::from(p);
    let m = if m.is_negative() { m + BigInt::from(p) } else { m };
    let digits: BigUint = m.to_biguint().expect("non-negative after shift");
    let mut out = 0u64;
    for d in digits.to_u64_digits() {
        // at most one digit since the value is < p <= u64::MAX
        out = d;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_add_keeps_lowest_terms() {
        let a = Scalar::rational(1, 2).unwrap();
        let b = Scalar::rational(1, 3).unwrap();
        assert_eq!(a.add(&b).unwrap(), Scalar::rational(5, 6).unwrap());
    }

    #[test]
    fn prime_inverse() {
        let tag = FieldTag::prime(7).unwrap();
        let three = Scalar::from_i64(3, tag);
        assert_eq!(three.inv().unwrap(), Scalar::Mod { p: 7, v: 5 });
        assert!(three.mul(&three.inv().unwrap()).unwrap().is_one());
    }

    #[test]
    fn zero_has_no_inverse() {
        assert_eq!(
            Scalar::zero(FieldTag::Rational).inv(),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn mixed_fields_rejected() {
        let a = Scalar::one(FieldTag::Rational);
        let b = Scalar::one(FieldTag::prime(5).unwrap());
        assert_eq!(a.add(&b), Err(Error::FieldMismatch));
    }

    #[test]
    fn composite_modulus_rejected() {
        assert_eq!(FieldTag::prime(6), Err(Error::InvalidModulus(6)));
        assert!(FieldTag::prime(2).is_ok());
        assert!(FieldTag::prime(101).is_ok());
    }

    #[test]
    fn negative_values_normalize() {
        let tag = FieldTag::prime(7).unwrap();
        assert_eq!(Scalar::from_i64(-1, tag), Scalar::Mod { p: 7, v: 6 });
        let r = Scalar::rational(2, -4).unwrap();
        assert_eq!(r, Scalar::rational(-1, 2).unwrap());
        assert_eq!(r.to_string(), "-1/2");
    }

    #[test]
    fn parse_scalar_forms() {
        assert_eq!(
            parse_scalar("-3/6", FieldTag::Rational).unwrap(),
            Scalar::rational(-1, 2).unwrap()
        );
        assert_eq!(
            parse_scalar("4", FieldTag::Rational).unwrap(),
            Scalar::from_i64(4, FieldTag::Rational)
        );
        let tag = FieldTag::prime(7).unwrap();
        // 1/2 = 4 mod 7
        assert_eq!(parse_scalar("1/2", tag).unwrap(), Scalar::Mod { p: 7, v: 4 });
    }

    #[test]
    fn pow_matches_repeated_mul() {
        let x = Scalar::rational(2, 3).unwrap();
        assert_eq!(x.pow(0), Scalar::one(FieldTag::Rational));
        assert_eq!(x.pow(3), Scalar::rational(8, 27).unwrap());
    }
}
