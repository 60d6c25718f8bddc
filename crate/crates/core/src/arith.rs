//! Exact arithmetic in the real quadratic field Q(sqrt 5).
//!
//! Every threshold the allocators and checkers compare against (the golden
//! ratio and the constants derived from it) lives in this field. Elements are
//! stored as `rat + surd * sqrt(5)` and ordered without ever touching floating
//! point: the sign of a difference is decided from the signs of its two parts
//! and, when they disagree, from one comparison of squares.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Rational;

/// An element `rat + surd * sqrt(5)` of Q(sqrt 5) over the scalar field `T`.
///
/// `T` is any ordered field scalar (`BigRational` in the library, `Ratio<i64>`
/// or similar where overflow is ruled out). Since sqrt 5 is irrational the
/// representation is unique, so structural equality is numeric equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Sqrt5<T> {
    rat: T,
    surd: T,
}

impl<T> Sqrt5<T> {
    pub const fn new(rat: T, surd: T) -> Self {
        Sqrt5 { rat, surd }
    }

    pub fn rat_part(&self) -> &T {
        &self.rat
    }

    pub fn surd_part(&self) -> &T {
        &self.surd
    }

    pub fn into_parts(self) -> (T, T) {
        (self.rat, self.surd)
    }
}

impl<T: Zero> Sqrt5<T> {
    pub fn from_rational(rat: T) -> Self {
        Sqrt5 {
            rat,
            surd: T::zero(),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.surd.is_zero()
    }
}

impl<T> Sqrt5<T>
where
    T: Clone + Signed + PartialOrd,
{
    /// Sign of the real number this element denotes.
    pub fn signum_ord(&self) -> Ordering {
        let zero = T::zero();
        let a = self.rat.partial_cmp(&zero).unwrap_or(Ordering::Equal);
        let b = self.surd.partial_cmp(&zero).unwrap_or(Ordering::Equal);
        match (a, b) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (x, y) if x == y => x,
            // Parts disagree: the part with the larger magnitude wins.
            // |rat| vs |surd| sqrt5  <=>  rat^2 vs 5 surd^2.
            (rat_sign, _) => {
                let lhs = self.rat.clone() * self.rat.clone();
                let five = T::one() + T::one() + T::one() + T::one() + T::one();
                let rhs = five * self.surd.clone() * self.surd.clone();
                match lhs.partial_cmp(&rhs).unwrap_or(Ordering::Equal) {
                    Ordering::Greater => rat_sign,
                    Ordering::Less => rat_sign.reverse(),
                    // rat^2 = 5 surd^2 with both nonzero is impossible for
                    // rational parts; reached only by inexact scalars.
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum_ord() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum_ord() == Ordering::Less
    }

    /// Galois conjugate `rat - surd * sqrt(5)`.
    pub fn conjugate(&self) -> Self {
        Sqrt5 {
            rat: self.rat.clone(),
            surd: -self.surd.clone(),
        }
    }

    /// Field norm `rat^2 - 5 surd^2`.
    pub fn norm(&self) -> T {
        let five = T::one() + T::one() + T::one() + T::one() + T::one();
        self.rat.clone() * self.rat.clone() - five * self.surd.clone() * self.surd.clone()
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.rat.is_zero() && self.surd.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(Sqrt5 {
            rat: self.rat.clone() / n.clone(),
            surd: -self.surd.clone() / n,
        })
    }

    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        rhs.recip().map(|r| self.clone() * r)
    }

    pub fn scale(&self, k: &T) -> Self {
        Sqrt5 {
            rat: self.rat.clone() * k.clone(),
            surd: self.surd.clone() * k.clone(),
        }
    }
}

impl<T> PartialOrd for Sqrt5<T>
where
    T: Clone + Signed + PartialOrd,
{
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some((self.clone() - other.clone()).signum_ord())
    }
}

impl<T> Ord for Sqrt5<T>
where
    T: Clone + Signed + Ord,
{
    fn cmp(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).signum_ord()
    }
}

impl<T: Add<Output = T>> Add for Sqrt5<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Sqrt5 {
            rat: self.rat + rhs.rat,
            surd: self.surd + rhs.surd,
        }
    }
}

impl<T: Sub<Output = T>> Sub for Sqrt5<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Sqrt5 {
            rat: self.rat - rhs.rat,
            surd: self.surd - rhs.surd,
        }
    }
}

impl<T: Neg<Output = T>> Neg for Sqrt5<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Sqrt5 {
            rat: -self.rat,
            surd: -self.surd,
        }
    }
}

impl<T> Mul for Sqrt5<T>
where
    T: Clone + Add<Output = T> + Mul<Output = T> + One,
{
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let five = T::one() + T::one() + T::one() + T::one() + T::one();
        Sqrt5 {
            rat: self.rat.clone() * rhs.rat.clone() + five * self.surd.clone() * rhs.surd.clone(),
            surd: self.rat * rhs.surd + self.surd * rhs.rat,
        }
    }
}

impl<T: Zero + Clone + PartialEq> Zero for Sqrt5<T>
where
    T: Add<Output = T>,
{
    fn zero() -> Self {
        Sqrt5 {
            rat: T::zero(),
            surd: T::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.surd.is_zero()
    }
}

/// Exact element of Q(sqrt 5) over arbitrary-precision rationals.
pub type Value = Sqrt5<Rational>;

impl From<Rational> for Value {
    fn from(r: Rational) -> Self {
        Value::from_rational(r)
    }
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::from_rational(Rational::from_integer(v.into()))
    }
}

/// `num/den + surd_num/surd_den * sqrt(5)` from machine integers.
pub fn value(num: i64, den: i64, surd_num: i64, surd_den: i64) -> Value {
    Sqrt5::new(
        Rational::new(num.into(), den.into()),
        Rational::new(surd_num.into(), surd_den.into()),
    )
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Orders two field elements exactly.
pub fn value_cmp(a: &Value, b: &Value) -> Ordering {
    a.cmp(b)
}

/// The golden ratio and every approximation factor that appears as a
/// guarantee of the allocators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenConstants {
    pub phi: Value,
    pub phi_minus_one: Value,
    pub two_over_phi_plus_two: Value,
    pub two_thirds: Value,
    pub three_fifths: Value,
    pub four_sevenths: Value,
    pub pmms_adjusted: Value,
    pub ef1_adjusted: Value,
    pub phi_minus_half: Value,
}

impl GoldenConstants {
    /// `(name, value)` pairs in a fixed order, for rendering.
    pub fn named(&self) -> Vec<(&'static str, &Value)> {
        vec![
            ("phi", &self.phi),
            ("phi-1", &self.phi_minus_one),
            ("2/(phi+2)", &self.two_over_phi_plus_two),
            ("2/3", &self.two_thirds),
            ("3/5", &self.three_fifths),
            ("4/7", &self.four_sevenths),
            ("(4phi-2)/(2phi+3)", &self.pmms_adjusted),
            ("2/(2phi-1)", &self.ef1_adjusted),
            ("phi-1/2", &self.phi_minus_half),
        ]
    }
}

pub fn phi() -> Value {
    value(1, 2, 1, 2)
}

/// Builds every constant from `phi` with field operations, so the closed
/// forms are consequences of the arithmetic rather than transcribed.
pub fn golden_constants() -> GoldenConstants {
    let one = Value::from(1);
    let two = Value::from(2);
    let phi = phi();
    let div = |a: Value, b: Value| a.checked_div(&b).expect("nonzero denominator");
    GoldenConstants {
        phi_minus_one: phi.clone() - one.clone(),
        two_over_phi_plus_two: div(two.clone(), phi.clone() + two.clone()),
        two_thirds: Value::from(rational(2, 3)),
        three_fifths: Value::from(rational(3, 5)),
        four_sevenths: Value::from(rational(4, 7)),
        pmms_adjusted: div(
            Value::from(4) * phi.clone() - two.clone(),
            two.clone() * phi.clone() + Value::from(3),
        ),
        ef1_adjusted: div(two.clone(), two.clone() * phi.clone() - one),
        phi_minus_half: phi.clone() - Value::from(rational(1, 2)),
        phi,
    }
}

fn parse_rational(text: &str) -> Option<Rational> {
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.parse::<BigInt>().ok()?, d.parse::<BigInt>().ok()?),
        None => (text.parse::<BigInt>().ok()?, BigInt::one()),
    };
    (!den.is_zero()).then(|| Rational::new(num, den))
}

/// Parses a named constant (`phi`, `phi-1`, `2/(phi+2)`, ... as listed by
/// [`GoldenConstants::named`]), a rational `p` or `p/q`, or the rendered form
/// `p/q + r/s√5`.
pub fn parse_value(text: &str) -> Option<Value> {
    let text: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let key = text.to_ascii_lowercase().replace('φ', "phi");
    let constants = golden_constants();
    if let Some((_, v)) = constants.named().into_iter().find(|(name, _)| *name == key) {
        return Some(v.clone());
    }
    let Some(body) = key.strip_suffix("√5") else {
        return parse_rational(&key).map(Value::from);
    };
    match body.char_indices().skip(1).filter(|&(_, c)| c == '+' || c == '-').last() {
        Some((at, _)) => {
            let rat = parse_rational(&body[..at])?;
            let surd = parse_rational(body[at..].trim_start_matches('+'))?;
            Some(Value::new(rat, surd))
        }
        None => Some(Value::new(Rational::zero(), parse_rational(body)?)),
    }
}

fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Value {
    /// `p/q + r/s√5`, with the surd term omitted when it is zero.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.surd.is_zero() {
            return f.write_str(&fmt_rational(&self.rat));
        }
        let surd_abs = fmt_rational(&self.surd.abs());
        let surd_neg = self.surd.is_negative();
        if self.rat.is_zero() {
            let sign = if surd_neg { "-" } else { "" };
            write!(f, "{sign}{surd_abs}√5")
        } else {
            let op = if surd_neg { '-' } else { '+' };
            write!(f, "{} {op} {surd_abs}√5", fmt_rational(&self.rat))
        }
    }
}

/// Floor of `v * 10^exp`, exact up to a 40-digit guard on sqrt(5).
fn floor_times_pow10(v: &Value, exp: i32) -> BigInt {
    let ten = BigInt::from(10);
    let factor = if exp >= 0 {
        Rational::from_integer(ten.pow(exp as u32))
    } else {
        Rational::new(BigInt::one(), ten.pow((-exp) as u32))
    };
    let w = v.scale(&factor);
    let guard = ten.pow(40);
    let sqrt5 = (BigInt::from(5) * &guard * &guard).sqrt();
    let num = w.rat.numer() * w.surd.denom() * &guard + w.surd.numer() * w.rat.denom() * sqrt5;
    let den = w.rat.denom() * w.surd.denom() * guard;
    num.div_floor(&den)
}

/// Decimal approximation with exactly `digits` significant digits, rounded
/// half up.
pub fn to_decimal(v: &Value, digits: u32) -> String {
    if v.is_zero() {
        return "0".to_string();
    }
    let negative = v.is_negative();
    let mag = if negative { -v.clone() } else { v.clone() };
    // exp: number of integer digits, i.e. 10^(exp-1) <= mag < 10^exp.
    let mut exp: i32 = 0;
    let ten = Value::from(10);
    let tenth = Value::from(rational(1, 10));
    let mut upper = Value::from(1);
    while mag >= upper {
        upper = upper * ten.clone();
        exp += 1;
    }
    while mag < upper.clone() * tenth.clone() {
        upper = upper * tenth.clone();
        exp -= 1;
    }
    let scale = digits as i32 - exp;
    let (mut q, r) = floor_times_pow10(&mag, scale + 2).div_rem(&BigInt::from(100));
    if r >= BigInt::from(50) {
        q += 1;
    }
    let mut digits_str = q.to_string();
    let mut point = exp;
    if digits_str.len() > digits as usize {
        // rounding carried into a new leading digit
        digits_str.truncate(digits as usize);
        point += 1;
    }
    let body = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), digits_str)
    } else if point as usize >= digits_str.len() {
        format!("{}{}", digits_str, "0".repeat(point as usize - digits_str.len()))
    } else {
        let (a, b) = digits_str.split_at(point as usize);
        format!("{a}.{b}")
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}
