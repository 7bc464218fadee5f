//! Exact ordered-field scalars: rationals and elements of a real quadratic
//! field `Q(sqrt(D))`.
//!
//! Every predicate in the toolkit (interval membership, gap comparison,
//! collision detection) goes through [`Scalar::compare`], which decides the
//! sign of `a + b*sqrt(D)` by integer case analysis. Nothing on a correctness
//! path ever touches a float.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("incompatible radicands: sqrt({0}) and sqrt({1})")]
    IncompatibleRadicands(u64, u64),
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
}

/// Binary and unary operations accepted by [`Scalar::arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    /// Unary; the right operand is ignored.
    Neg,
    /// Unary; the right operand is ignored.
    Abs,
}

/// `(a + b*sqrt(d)) / c` with `c > 0` and `gcd(a, b, c) = 1`. Rationals have
/// `b = 0` and `d = 0`; quadratics have `b != 0` and `d >= 2` square-free.
/// A value is `Small` exactly when all three integers fit in an `i64`, which
/// keeps the representation unique.
#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small { a: i64, b: i64, c: i64, d: u64 },
    Big { a: BigInt, b: BigInt, c: BigInt, d: u64 },
}

/// An exact real number in `Q` or in a single real quadratic field.
///
/// Values are kept normalized, so structural equality is mathematical
/// equality. Small values stay inline; arithmetic falls back to big integers
/// only when an intermediate overflows.
///
/// The `std::ops` operators and the `Ord` impl panic when two quadratics over
/// different radicands meet; the fallible [`Scalar::arith`] and
/// [`Scalar::compare`] report that case as [`ScalarError::IncompatibleRadicands`].
/// Within one [`crate::Iet`] every scalar lives in the same field, so the
/// panicking forms are safe there.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar(Repr);

type Wide = (BigInt, BigInt, BigInt, u64);

fn gcd_i128(mut x: i128, mut y: i128) -> i128 {
    x = x.abs();
    y = y.abs();
    while y != 0 {
        let t = x % y;
        x = y;
        y = t;
    }
    x
}

impl Scalar {
    /// Canonical form of `(a + b*sqrt(d)) / c` from machine integers.
    fn from_i128(mut a: i128, mut b: i128, mut c: i128, mut d: u64) -> Scalar {
        debug_assert!(c != 0);
        if b == 0 {
            d = 0;
        }
        if c < 0 {
            match (a.checked_neg(), b.checked_neg(), c.checked_neg()) {
                (Some(na), Some(nb), Some(nc)) => {
                    a = na;
                    b = nb;
                    c = nc;
                }
                _ => return Self::from_big(a.into(), b.into(), c.into(), d),
            }
        }
        let g = gcd_i128(gcd_i128(a, b), c);
        if g > 1 {
            a /= g;
            b /= g;
            c /= g;
        }
        match (i64::try_from(a), i64::try_from(b), i64::try_from(c)) {
            (Ok(a), Ok(b), Ok(c)) => Scalar(Repr::Small { a, b, c, d }),
            _ => Scalar(Repr::Big {
                a: a.into(),
                b: b.into(),
                c: c.into(),
                d,
            }),
        }
    }

    /// Canonical form of `(a + b*sqrt(d)) / c` from big integers.
    fn from_big(mut a: BigInt, mut b: BigInt, mut c: BigInt, mut d: u64) -> Scalar {
        debug_assert!(!c.is_zero());
        if b.is_zero() {
            d = 0;
        }
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        match (a.to_i64(), b.to_i64(), c.to_i64()) {
            (Some(a), Some(b), Some(c)) => Scalar(Repr::Small { a, b, c, d }),
            _ => Scalar(Repr::Big { a, b, c, d }),
        }
    }

    fn wide(&self) -> Wide {
        match &self.0 {
            Repr::Small { a, b, c, d } => (BigInt::from(*a), BigInt::from(*b), BigInt::from(*c), *d),
            Repr::Big { a, b, c, d } => (a.clone(), b.clone(), c.clone(), *d),
        }
    }

    fn d(&self) -> u64 {
        match &self.0 {
            Repr::Small { d, .. } | Repr::Big { d, .. } => *d,
        }
    }

    pub fn zero() -> Self {
        Scalar(Repr::Small { a: 0, b: 0, c: 1, d: 0 })
    }

    pub fn one() -> Self {
        Scalar(Repr::Small { a: 1, b: 0, c: 1, d: 0 })
    }

    pub fn from_integer(n: i64) -> Self {
        Scalar(Repr::Small { a: n, b: 0, c: 1, d: 0 })
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_big(n, BigInt::zero(), BigInt::one(), 0)
    }

    /// `num / den`. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num.into(), 0, den.into(), 0)
    }

    pub fn from_rational(r: BigRational) -> Self {
        let (num, den) = r.into();
        Self::from_big(num, BigInt::zero(), den, 0)
    }

    /// `a + b*sqrt(d)`. The radicand is reduced to its square-free part, so
    /// `sqrt(20)` becomes `2*sqrt(5)` and perfect squares collapse to rationals.
    pub fn quadratic(a: BigRational, b: BigRational, d: u64) -> Self {
        let (square, free) = square_free_split(d);
        let b = b * BigRational::from_integer(BigInt::from(square));
        Self::normalized(a, b, free)
    }

    /// `sqrt(d)`.
    pub fn sqrt(d: u64) -> Self {
        Self::quadratic(BigRational::zero(), BigRational::one(), d)
    }

    /// `a + b*sqrt(d)` for square-free `d` (or `d` in {0, 1}).
    fn normalized(a: BigRational, b: BigRational, d: u64) -> Self {
        if b.is_zero() || d == 0 {
            return Self::from_rational(a);
        }
        if d == 1 {
            return Self::from_rational(a + b);
        }
        let c = a.denom().lcm(b.denom());
        let big_a = a.numer() * (&c / a.denom());
        let big_b = b.numer() * (&c / b.denom());
        Self::from_big(big_a, big_b, c, d)
    }

    /// The radicand of the field this value needs, `None` for rationals.
    pub fn radicand(&self) -> Option<u64> {
        match self.d() {
            0 => None,
            d => Some(d),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.d() == 0
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.parts().0)
    }

    /// `(a, b)` such that the value is `a + b*sqrt(D)`; `b` is zero for rationals.
    pub fn parts(&self) -> (BigRational, BigRational) {
        let (a, b, c, _) = self.wide();
        (BigRational::new(a, c.clone()), BigRational::new(b, c))
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Small { a, b, .. } => *a == 0 && *b == 0,
            Repr::Big { .. } => false,
        }
    }

    /// The common radicand of two operands, or an error if both are
    /// quadratic over different fields.
    fn common_radicand(&self, other: &Scalar) -> Result<u64, ScalarError> {
        match (self.d(), other.d()) {
            (x, y) if x != 0 && y != 0 && x != y => Err(ScalarError::IncompatibleRadicands(x, y)),
            (x, y) => Ok(x.max(y)),
        }
    }

    fn add_impl(&self, rhs: &Scalar, negate_rhs: bool) -> Result<Scalar, ScalarError> {
        let d = self.common_radicand(rhs)?;
        if let (
            Repr::Small { a: a1, b: b1, c: c1, .. },
            Repr::Small { a: a2, b: b2, c: c2, .. },
        ) = (&self.0, &rhs.0)
        {
            let (a1, b1, c1) = (*a1 as i128, *b1 as i128, *c1 as i128);
            let (mut a2, mut b2, c2) = (*a2 as i128, *b2 as i128, *c2 as i128);
            if negate_rhs {
                a2 = -a2;
                b2 = -b2;
            }
            if c1 == c2 {
                return Ok(Self::from_i128(a1 + a2, b1 + b2, c1, d));
            }
            let sum = (|| {
                Some((
                    (a1 * c2).checked_add(a2 * c1)?,
                    (b1 * c2).checked_add(b2 * c1)?,
                    c1 * c2,
                ))
            })();
            if let Some((a, b, c)) = sum {
                return Ok(Self::from_i128(a, b, c, d));
            }
        }
        let (a1, b1, c1, _) = self.wide();
        let (mut a2, mut b2, c2, _) = rhs.wide();
        if negate_rhs {
            a2 = -a2;
            b2 = -b2;
        }
        Ok(Self::from_big(&a1 * &c2 + &a2 * &c1, &b1 * &c2 + &b2 * &c1, c1 * c2, d))
    }

    pub fn checked_add(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        self.add_impl(rhs, false)
    }

    pub fn checked_sub(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        self.add_impl(rhs, true)
    }

    pub fn checked_mul(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        let d = self.common_radicand(rhs)?;
        if let (
            Repr::Small { a: a1, b: b1, c: c1, .. },
            Repr::Small { a: a2, b: b2, c: c2, .. },
        ) = (&self.0, &rhs.0)
        {
            let (a1, b1, c1) = (*a1 as i128, *b1 as i128, *c1 as i128);
            let (a2, b2, c2) = (*a2 as i128, *b2 as i128, *c2 as i128);
            let product = (|| {
                Some((
                    (a1 * a2).checked_add((b1 * b2).checked_mul(d as i128)?)?,
                    (a1 * b2).checked_add(a2 * b1)?,
                    c1 * c2,
                ))
            })();
            if let Some((a, b, c)) = product {
                return Ok(Self::from_i128(a, b, c, d));
            }
        }
        let (a1, b1, c1, _) = self.wide();
        let (a2, b2, c2, _) = rhs.wide();
        let a = &a1 * &a2 + &b1 * &b2 * BigInt::from(d);
        let b = a1 * b2 + a2 * b1;
        Ok(Self::from_big(a, b, c1 * c2, d))
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        if rhs.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let d = self.common_radicand(rhs)?;
        // 1 / ((a + b sqrt d) / c) = c (a - b sqrt d) / (a^2 - b^2 d); the
        // norm is nonzero because sqrt(d) is irrational.
        let (a, b, c, _) = rhs.wide();
        let norm = &a * &a - &b * &b * BigInt::from(d);
        let reciprocal = Self::from_big(&c * a, -(c * b), norm, d);
        self.checked_mul(&reciprocal)
    }

    /// Dispatches one of the field operations by tag.
    pub fn arith(lhs: &Scalar, op: ArithOp, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        match op {
            ArithOp::Add => lhs.checked_add(rhs),
            ArithOp::Sub => lhs.checked_sub(rhs),
            ArithOp::Mul => lhs.checked_mul(rhs),
            ArithOp::Div => lhs.checked_div(rhs),
            ArithOp::Neg => Ok(-lhs),
            ArithOp::Abs => Ok(lhs.abs()),
        }
    }

    /// Exact sign of the value.
    pub fn signum(&self) -> Ordering {
        match &self.0 {
            Repr::Small { a, b, d, .. } => small_sign(*a as i128, *b as i128, *d)
                .unwrap_or_else(|| big_sign(&BigInt::from(*a), &BigInt::from(*b), *d)),
            Repr::Big { a, b, d, .. } => big_sign(a, b, *d),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn abs(&self) -> Scalar {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Exact total-order comparison. Rationals compare with quadratics of any
    /// radicand; two quadratics must share theirs.
    pub fn compare(&self, rhs: &Scalar) -> Result<Ordering, ScalarError> {
        let d = self.common_radicand(rhs)?;
        if let (
            Repr::Small { a: a1, b: b1, c: c1, .. },
            Repr::Small { a: a2, b: b2, c: c2, .. },
        ) = (&self.0, &rhs.0)
        {
            if c1 == c2 {
                let da = *a1 as i128 - *a2 as i128;
                let db = *b1 as i128 - *b2 as i128;
                if let Some(sign) = small_sign(da, db, d) {
                    return Ok(sign);
                }
            }
        }
        Ok(self.checked_sub(rhs)?.signum())
    }

    /// `(floor(x), x - floor(x))` with `0 <= frac < 1`.
    pub fn frac_floor(&self) -> (BigInt, Scalar) {
        let floor = self.floor();
        let frac = self - &Scalar::from_bigint(floor.clone());
        (floor, frac)
    }

    pub fn floor(&self) -> BigInt {
        let (a, b, c, d) = self.wide();
        if d == 0 {
            return a.div_floor(&c);
        }
        // b*sqrt(d) lies strictly inside (approx, approx + 1).
        let root = (&b * &b * BigInt::from(d)).sqrt();
        let approx = if b.is_positive() { root } else { -root - BigInt::one() };
        let mut k = (a + approx).div_floor(&c);
        while *self < Scalar::from_bigint(k.clone()) {
            k -= 1;
        }
        while *self >= Scalar::from_bigint(&k + 1) {
            k += 1;
        }
        k
    }

    /// The fractional part `x - floor(x)`.
    pub fn fract(&self) -> Scalar {
        self.frac_floor().1
    }

    /// Decimal rendering rounded toward negative infinity to `digits`
    /// fractional digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = num_traits::pow(BigInt::from(10), digits);
        let scaled = (self * &Scalar::from_bigint(scale)).floor();
        let negative = scaled.is_negative();
        let mut magnitude = scaled.abs().to_str_radix(10);
        if magnitude.len() <= digits {
            magnitude = format!("{}{}", "0".repeat(digits + 1 - magnitude.len()), magnitude);
        }
        let split = magnitude.len() - digits;
        let (int_part, frac_part) = magnitude.split_at(split);
        let sign = if negative { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac_part}")
        }
    }

    /// Lossy conversion for display and plotting only.
    pub fn to_f64(&self) -> f64 {
        let (a, b) = self.parts();
        a.to_f64().unwrap_or(f64::NAN) + b.to_f64().unwrap_or(f64::NAN) * (self.d() as f64).sqrt()
    }

    pub fn min(self, other: Scalar) -> Scalar {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Scalar) -> Scalar {
        if other > self {
            other
        } else {
            self
        }
    }
}

/// Sign of `a + b*sqrt(d)`, or `None` if the squares overflow.
fn small_sign(a: i128, b: i128, d: u64) -> Option<Ordering> {
    let sa = a.cmp(&0);
    let sb = b.cmp(&0);
    if sb == Ordering::Equal || sa == sb {
        return Some(if sa == Ordering::Equal { sb } else { sa });
    }
    if sa == Ordering::Equal {
        return Some(sb);
    }
    // Opposite signs: the larger of a^2 and b^2 d wins. They are never equal
    // since d is not a perfect square.
    let lhs = a.checked_mul(a)?;
    let rhs = b.checked_mul(b)?.checked_mul(d as i128)?;
    Some(if lhs > rhs { sa } else { sb })
}

fn big_sign(a: &BigInt, b: &BigInt, d: u64) -> Ordering {
    let sa = a.sign().ordering();
    let sb = b.sign().ordering();
    if sb == Ordering::Equal || sa == sb {
        return if sa == Ordering::Equal { sb } else { sa };
    }
    if sa == Ordering::Equal {
        return sb;
    }
    if a * a > b * b * BigInt::from(d) {
        sa
    } else {
        sb
    }
}

trait SignOrdering {
    fn ordering(self) -> Ordering;
}

impl SignOrdering for Sign {
    fn ordering(self) -> Ordering {
        match self {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }
}

/// Splits `d` as `square^2 * free` with `free` square-free.
fn square_free_split(mut d: u64) -> (u64, u64) {
    if d == 0 {
        return (0, 0);
    }
    let mut square = 1u64;
    let mut free = 1u64;
    let mut p = 2u64;
    while p * p <= d {
        while d % (p * p) == 0 {
            d /= p * p;
            square *= p;
        }
        if d % p == 0 {
            d /= p;
            free *= p;
        }
        p += 1;
    }
    (square, free * d)
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    /// # Panics
    /// On two quadratics over different radicands.
    fn cmp(&self, other: &Self) -> Ordering {
        self.compare(other).expect("comparison across quadratic fields")
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match self.$checked(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("scalar {}: {e}", stringify!($method)),
                }
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match &self.0 {
            Repr::Small { a, b, c, d } if *a != i64::MIN && *b != i64::MIN => Scalar(Repr::Small {
                a: -a,
                b: -b,
                c: *c,
                d: *d,
            }),
            _ => {
                let (a, b, c, d) = self.wide();
                Scalar::from_big(-a, -b, c, d)
            }
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_integer(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::from_rational(r)
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    /// `p/q` for rationals, `a+b*sqrt(D)` for quadratics; the output parses
    /// back to the same value.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.parts();
        let d = self.d();
        if d == 0 {
            return f.write_str(&fmt_rational(&a));
        }
        let coeff = if b.is_one() {
            String::new()
        } else if (-&b).is_one() {
            "-".to_string()
        } else {
            format!("{}*", fmt_rational(&b))
        };
        if a.is_zero() {
            write!(f, "{coeff}sqrt({d})")
        } else if b.is_negative() {
            write!(f, "{}{coeff}sqrt({d})", fmt_rational(&a))
        } else {
            write!(f, "{}+{coeff}sqrt({d})", fmt_rational(&a))
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

impl FromStr for Scalar {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse::parse_scalar(s)
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

mod parse {
    //! Grammar (whitespace ignored):
    //!
    //! ```text
    //! scalar := term (('+' | '-') term)*
    //! term   := rational ['*' 'sqrt(' int ')'] | 'sqrt(' int ')'
    //! rational := int ['/' int]
    //! ```
    //!
    //! A leading sign is allowed on the first term.

    use super::{BigRational, Scalar, ScalarError};
    use num_bigint::BigInt;
    use num_traits::{One, Zero};

    struct Cursor {
        chars: Vec<(usize, char)>,
        pos: usize,
        end: usize,
    }

    impl Cursor {
        fn peek(&self) -> Option<char> {
            self.chars.get(self.pos).map(|&(_, c)| c)
        }

        fn offset(&self) -> usize {
            self.chars.get(self.pos).map_or(self.end, |&(i, _)| i)
        }

        fn error(&self, message: impl Into<String>) -> ScalarError {
            ScalarError::Parse {
                position: self.offset(),
                message: message.into(),
            }
        }

        fn eat(&mut self, c: char) -> bool {
            if self.peek() == Some(c) {
                self.pos += 1;
                true
            } else {
                false
            }
        }

        fn expect_word(&mut self, word: &str) -> Result<(), ScalarError> {
            for c in word.chars() {
                if !self.eat(c) {
                    return Err(self.error(format!("expected '{word}'")));
                }
            }
            Ok(())
        }

        fn integer(&mut self) -> Result<BigInt, ScalarError> {
            let start = self.pos;
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.error("expected digits"));
            }
            let digits: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
            Ok(digits.parse().expect("ascii digits"))
        }

        fn radicand(&mut self) -> Result<u64, ScalarError> {
            self.expect_word("sqrt(")?;
            let at = self.offset();
            let d = self.integer()?;
            self.expect_word(")")?;
            u64::try_from(d).map_err(|_| ScalarError::Parse {
                position: at,
                message: "radicand out of range".into(),
            })
        }
    }

    pub(super) fn parse_scalar(text: &str) -> Result<Scalar, ScalarError> {
        let chars: Vec<(usize, char)> = text
            .char_indices()
            .filter(|(_, c)| !c.is_whitespace())
            .collect();
        let mut cur = Cursor {
            chars,
            pos: 0,
            end: text.len(),
        };
        if cur.peek().is_none() {
            return Err(cur.error("empty scalar"));
        }
        let mut rational = BigRational::zero();
        let mut irrational = BigRational::zero();
        let mut radicand: Option<u64> = None;
        let mut first = true;
        while cur.peek().is_some() {
            let negative = if cur.eat('-') {
                true
            } else if cur.eat('+') {
                false
            } else if first {
                false
            } else {
                return Err(cur.error("expected '+' or '-'"));
            };
            first = false;
            let (coeff, root) = if cur.peek() == Some('s') {
                (BigRational::one(), Some(cur.radicand()?))
            } else {
                let num = cur.integer()?;
                let den = if cur.eat('/') {
                    let at = cur.offset();
                    let den = cur.integer()?;
                    if den.is_zero() {
                        return Err(ScalarError::Parse {
                            position: at,
                            message: "zero denominator".into(),
                        });
                    }
                    den
                } else {
                    BigInt::one()
                };
                let root = if cur.eat('*') {
                    Some(cur.radicand()?)
                } else {
                    None
                };
                (BigRational::new(num, den), root)
            };
            let coeff = if negative { -coeff } else { coeff };
            match root {
                None => rational += coeff,
                Some(d) => {
                    // Fold the square part of d into the coefficient first so
                    // that sqrt(5) and sqrt(20) land in the same field.
                    let (square, free) = super::square_free_split(d);
                    let coeff = coeff * BigRational::from_integer(BigInt::from(square));
                    if free == 1 || free == 0 {
                        rational += coeff;
                        continue;
                    }
                    match radicand {
                        Some(prev) if prev != free => {
                            return Err(ScalarError::IncompatibleRadicands(prev, free));
                        }
                        _ => radicand = Some(free),
                    }
                    irrational += coeff;
                }
            }
        }
        Ok(match radicand {
            Some(d) => Scalar::normalized(rational, irrational, d),
            None => Scalar::from_rational(rational),
        })
    }
}
