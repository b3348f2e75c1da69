//! Exact base-field arithmetic: the rationals and prime fields.

use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The ring a scalar lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    /// ℤ/p for a prime p.
    Prime(u64),
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        if p < 2 || !is_prime(p) {
            return Err(Error::InvalidInput(alloc::format!("{p} is not prime")));
        }
        Ok(Field::Prime(p))
    }

    /// Characteristic of the field (0 for ℚ).
    pub fn characteristic(self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => p,
        }
    }

    /// Fails unless every integer in `1..=m` is invertible.
    pub fn require_divisible_up_to(self, m: u64) -> Result<()> {
        match self {
            Field::Rational => Ok(()),
            Field::Prime(p) if p > m => Ok(()),
            Field::Prime(p) => Err(Error::Characteristic { p, needed: m }),
        }
    }

    pub fn zero(self) -> Scalar {
        match self {
            Field::Rational => Scalar::Q(BigRational::zero()),
            Field::Prime(p) => Scalar::Fp { v: 0, p },
        }
    }

    pub fn one(self) -> Scalar {
        self.int(1)
    }

    pub fn int(self, n: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Fp { v: reduce_i128(n as i128, p), p },
        }
    }

    /// `num / den`, failing when `den` vanishes in this field.
    pub fn ratio(self, num: i64, den: i64) -> Result<Scalar> {
        let d = self.int(den);
        let inv = d.inverse().ok_or(Error::DivisionByZero)?;
        Ok(&self.int(num) * &inv)
    }

    /// `1/n!`, guarded by the characteristic.
    pub fn inv_factorial(self, n: u64) -> Result<Scalar> {
        self.require_divisible_up_to(n)?;
        let mut f = self.one();
        for k in 2..=n {
            f = &f * &self.int(k as i64);
        }
        f.inverse().ok_or(Error::DivisionByZero)
    }

    /// Parses a literal such as `3`, `-1/2` into this field.
    pub fn parse(self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let bad = || Error::Parse(alloc::format!("bad scalar literal `{s}`"));
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match self {
            Field::Rational => Ok(Scalar::Q(BigRational::new(num, den))),
            Field::Prime(p) => {
                let pb = BigInt::from(p);
                let n = ((num % &pb) + &pb) % &pb;
                let d = ((den % &pb) + &pb) % &pb;
                let n = Scalar::Fp { v: n.to_u64().unwrap(), p };
                let d = Scalar::Fp { v: d.to_u64().unwrap(), p };
                let di = d.inverse().ok_or(Error::DivisionByZero)?;
                Ok(&n * &di)
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl core::str::FromStr for Field {
    type Err = Error;
    fn from_str(s: &str) -> Result<Field> {
        let s = s.trim();
        if s == "Q" {
            return Ok(Field::Rational);
        }
        if let Some(p) = s.strip_prefix("Fp:") {
            let p: u64 = p
                .parse()
                .map_err(|_| Error::Parse(alloc::format!("bad field `{s}`")))?;
            return Field::prime(p);
        }
        Err(Error::Parse(alloc::format!("bad field `{s}`")))
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn reduce_i128(n: i128, p: u64) -> u64 {
    let p = p as i128;
    (((n % p) + p) % p) as u64
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    r
}

/// An exact scalar tagged with its ring.
///
/// Arithmetic between scalars of different rings panics; the checked
/// entry points of the higher-level types reject such mixes before any
/// arithmetic happens.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { v: u64, p: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rational,
            Scalar::Fp { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::Fp { v, .. } => *v == 1,
        }
    }

    pub fn inverse(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Q(q) => Scalar::Q(q.recip()),
            Scalar::Fp { v, p } => Scalar::Fp { v: pow_mod(*v, p - 2, *p), p: *p },
        })
    }

    pub fn checked_add(&self, o: &Scalar) -> Result<Scalar> {
        same_field(self, o)?;
        Ok(self + o)
    }

    pub fn checked_mul(&self, o: &Scalar) -> Result<Scalar> {
        same_field(self, o)?;
        Ok(self * o)
    }

    /// The rational value, if this is a rational scalar.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Q(q) => Some(q),
            _ => None,
        }
    }

    /// Canonical literal: `p/q` or an integer.
    pub fn literal(&self) -> String {
        alloc::format!("{self}")
    }

    fn is_negative(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_negative(),
            Scalar::Fp { .. } => false,
        }
    }
}

fn same_field(a: &Scalar, b: &Scalar) -> Result<()> {
    if a.field() == b.field() {
        Ok(())
    } else {
        Err(Error::FieldMismatch(a.field(), b.field()))
    }
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("scalar ring mismatch: {} vs {}", a.field(), b.field())
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) if p == q => Scalar::Fp {
                v: ((*a as u128 + *b as u128) % *p as u128) as u64,
                p: *p,
            },
            _ => mismatch(self, o),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self + &(-o)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) if p == q => {
                Scalar::Fp { v: mul_mod(*a, *b, *p), p: *p }
            }
            _ => mismatch(self, o),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { v, p } => Scalar::Fp { v: (p - v) % p, p: *p },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => *a += b,
            (s, o) => *s = &*s + o,
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => *a -= b,
            (s, o) => *s = &*s - o,
        }
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, o: &Scalar) {
        *self = &*self * o;
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Arbitrary but fixed total order, used only for deterministic output.
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => a.cmp(b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) => (p, a).cmp(&(q, b)),
            (Scalar::Q(_), _) => Ordering::Less,
            _ => Ordering::Greater,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

/// Writes `c*term`, `term`, `-term` with the sign folded into the joiner.
pub(crate) fn write_signed_terms<I, T>(f: &mut fmt::Formatter<'_>, terms: I) -> fmt::Result
where
    I: IntoIterator<Item = (Scalar, T)>,
    T: fmt::Display,
{
    let mut first = true;
    for (c, t) in terms {
        let neg = c.is_negative();
        let mag = if neg { -&c } else { c };
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else if neg {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        if mag.is_one() || alloc::format!("{t}") == "1" {
            if mag.is_one() {
                write!(f, "{t}")?;
            } else {
                write!(f, "{mag}")?;
            }
        } else {
            write!(f, "{mag}*{t}")?;
        }
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}
