//! Exact arithmetic in the quadratic field ℚ(√3).
//!
//! Every number is stored as `a + b·√3` with reduced rational `a`, `b`.
//! Since √3 is irrational the representation is unique, so equality is
//! componentwise and hashing is well defined. Comparison and `floor` are
//! exact: signs are decided by comparing `a²` against `3b²`, never by
//! floating point.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

/// Formats a rational as `p/q` with the denominator always present.
pub fn frac_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or a bare integer literal into an exact rational.
///
/// Decimal floats are rejected: exact parameters must never pass through
/// binary floating point.
pub fn parse_frac(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    if s.contains('.') {
        return Err(format!(
            "`{s}` looks like a decimal float; exact rationals must be written as P/Q or an integer"
        ));
    }
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|e| format!("bad numerator in `{s}`: {e}"))?;
            let q = BigInt::from_str(q.trim()).map_err(|e| format!("bad denominator in `{s}`: {e}"))?;
            if q.is_zero() {
                return Err(format!("zero denominator in `{s}`"));
            }
            Ok(BigRational::new(p, q))
        }
        None => {
            let p = BigInt::from_str(s).map_err(|e| format!("bad integer `{s}`: {e}"))?;
            Ok(BigRational::from_integer(p))
        }
    }
}

/// An exact element `a + b·√3` of ℚ(√3).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QR3 {
    a: BigRational,
    b: BigRational,
}

impl QR3 {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        QR3 { a, b }
    }

    pub fn rational(a: BigRational) -> Self {
        QR3 { a, b: BigRational::zero() }
    }

    pub fn integer(n: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `p/q` as an element of the field.
    pub fn ratio(p: i64, q: i64) -> Self {
        Self::rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// The generator √3 itself.
    pub fn sqrt3() -> Self {
        QR3 { a: BigRational::zero(), b: BigRational::one() }
    }

    /// `c·√3` for rational `c`.
    pub fn sqrt3_times(c: BigRational) -> Self {
        QR3 { a: BigRational::zero(), b: c }
    }

    pub fn zero() -> Self {
        Self::rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// True when the number lies in ℚ (no √3 component).
    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn sqrt3_coefficient(&self) -> &BigRational {
        &self.b
    }

    /// Multiplies by a rational scalar.
    pub fn scale(&self, c: &BigRational) -> Self {
        QR3 { a: &self.a * c, b: &self.b * c }
    }

    /// Exact sign of the real value, decided by comparing `a²` with `3b²`.
    pub fn sign(&self) -> Ordering {
        let sa = rational_sign(&self.a);
        let sb = rational_sign(&self.b);
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
            (Ordering::Less, Ordering::Less) => Ordering::Less,
            // Opposite signs: |a| vs |b|·√3 ⟺ a² vs 3b².
            (Ordering::Greater, Ordering::Less) | (Ordering::Less, Ordering::Greater) => {
                let a2 = &self.a * &self.a;
                let b2_3 = &self.b * &self.b * BigRational::from_integer(BigInt::from(3));
                match a2.cmp(&b2_3) {
                    Ordering::Greater => sa,
                    Ordering::Less => sb,
                    // a² = 3b² with a, b ≠ 0 would make √3 rational.
                    Ordering::Equal => unreachable!("sqrt(3) is irrational"),
                }
            }
        }
    }

    /// Greatest integer `n ≤ a + b·√3`, computed exactly.
    pub fn floor(&self) -> BigInt {
        if self.b.is_zero() {
            return self.a.floor().to_integer();
        }
        // Clear denominators: value = (A + B·√3) / q with integers A, B and q > 0.
        let q: BigInt = self.a.denom().lcm(self.b.denom());
        let a_scaled = self.a.numer() * (&q / self.a.denom());
        let b_scaled = self.b.numer() * (&q / self.b.denom());
        // L = A + floor(B·√3), so L ≤ A + B·√3 < L + 1.
        let l = &a_scaled + floor_sqrt3_multiple(&b_scaled);
        let candidate = l.div_floor(&q);
        // floor(value) is `candidate` or `candidate + 1`.
        let next: BigInt = &candidate + 1;
        let diff = self - &QR3::rational(BigRational::from_integer(next.clone()));
        if diff.sign() != Ordering::Less {
            next
        } else {
            candidate
        }
    }

    /// Euclidean remainder into `[0, m)` for a positive modulus `m`.
    pub fn rem_floor(&self, m: &QR3) -> QR3 {
        debug_assert_eq!(m.sign(), Ordering::Greater);
        let ratio = self * &m.reciprocal_of_positive();
        let n = ratio.floor();
        self - &m.scale(&BigRational::from_integer(n))
    }

    /// Reciprocal, defined for nonzero values: 1/(a+b√3) = (a−b√3)/(a²−3b²).
    fn reciprocal_of_positive(&self) -> QR3 {
        let norm = &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(BigInt::from(3));
        debug_assert!(!norm.is_zero());
        QR3 { a: &self.a / &norm, b: -(&self.b / &norm) }
    }

    /// Decimal rendering truncated toward zero after `digits` fractional digits.
    ///
    /// The only approximate view of a QR3; exact serialization goes through
    /// the `p/q` component strings.
    pub fn to_decimal(&self, digits: u32) -> String {
        let sign = self.sign();
        let abs = if sign == Ordering::Less { -self.clone() } else { self.clone() };
        let pow = BigInt::from(10u8).pow(digits);
        let scaled = abs.scale(&BigRational::from_integer(pow.clone()));
        let d = scaled.floor();
        let (int_part, frac_part) = d.div_rem(&pow);
        let frac_digits = format!("{:0>width$}", frac_part.to_string(), width = digits as usize);
        let minus = if sign == Ordering::Less { "-" } else { "" };
        format!("{minus}{int_part}.{frac_digits}")
    }

    /// Approximate value, for diagnostics only.
    pub fn to_f64_lossy(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * 3.0_f64.sqrt()
    }
}

fn rational_sign(r: &BigRational) -> Ordering {
    if r.is_zero() {
        Ordering::Equal
    } else if r.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

/// floor(B·√3) for an integer B, via the integer square root of 3B².
fn floor_sqrt3_multiple(b: &BigInt) -> BigInt {
    if b.is_zero() {
        return BigInt::zero();
    }
    let t: BigInt = 3 * b * b;
    let s = t.sqrt();
    if b.is_positive() {
        s
    } else {
        // B < 0: floor(−√t) = −ceil(√t); t is never a perfect square here.
        debug_assert_ne!(&s * &s, t);
        -s - 1
    }
}

impl PartialOrd for QR3 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QR3 {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).sign()
    }
}

impl fmt::Debug for QR3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QR3({self})")
    }
}

impl fmt::Display for QR3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", frac_string(&self.a))
        } else if self.a.is_zero() {
            write!(f, "{}*sqrt3", frac_string(&self.b))
        } else {
            write!(f, "{}+{}*sqrt3", frac_string(&self.a), frac_string(&self.b))
        }
    }
}

impl FromStr for QR3 {
    type Err = String;

    /// Accepts `P/Q`, an integer, `S/T*sqrt3`, or `P/Q+S/T*sqrt3`.
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        match s.split_once("+") {
            Some((ra, rb)) => {
                let b = rb
                    .trim()
                    .strip_suffix("*sqrt3")
                    .ok_or_else(|| format!("`{s}`: expected `*sqrt3` after `+`"))?;
                Ok(QR3::new(parse_frac(ra)?, parse_frac(b)?))
            }
            None => match s.strip_suffix("*sqrt3") {
                Some(b) => Ok(QR3::sqrt3_times(parse_frac(b)?)),
                None => Ok(QR3::rational(parse_frac(s)?)),
            },
        }
    }
}

impl Add for &QR3 {
    type Output = QR3;
    fn add(self, rhs: &QR3) -> QR3 {
        QR3 { a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }
}

impl Sub for &QR3 {
    type Output = QR3;
    fn sub(self, rhs: &QR3) -> QR3 {
        QR3 { a: &self.a - &rhs.a, b: &self.b - &rhs.b }
    }
}

impl Mul for &QR3 {
    type Output = QR3;
    fn mul(self, rhs: &QR3) -> QR3 {
        let three = BigRational::from_integer(BigInt::from(3));
        QR3 {
            a: &self.a * &rhs.a + &(&self.b * &rhs.b) * &three,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }
}

impl Neg for QR3 {
    type Output = QR3;
    fn neg(self) -> QR3 {
        QR3 { a: -self.a, b: -self.b }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for QR3 {
            type Output = QR3;
            fn $method(self, rhs: QR3) -> QR3 {
                $trait::$method(&self, &rhs)
            }
        }
        impl $trait<&QR3> for QR3 {
            type Output = QR3;
            fn $method(self, rhs: &QR3) -> QR3 {
                $trait::$method(&self, rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl AddAssign<&QR3> for QR3 {
    fn add_assign(&mut self, rhs: &QR3) {
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}

impl SubAssign<&QR3> for QR3 {
    fn sub_assign(&mut self, rhs: &QR3) {
        self.a -= &rhs.a;
        self.b -= &rhs.b;
    }
}

/// Wire form: `{"a": "p/q", "b": "s/t"}` meaning `a + b·√3` with reduced fractions.
impl Serialize for QR3 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("QR3", 2)?;
        st.serialize_field("a", &frac_string(&self.a))?;
        st.serialize_field("b", &frac_string(&self.b))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for QR3 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            a: String,
            b: String,
        }
        let raw = Raw::deserialize(deserializer)?;
        Ok(QR3::new(
            parse_frac(&raw.a).map_err(D::Error::custom)?,
            parse_frac(&raw.b).map_err(D::Error::custom)?,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(d))
    }

    #[test]
    fn floor_of_sqrt3_is_one() {
        assert_eq!(QR3::sqrt3().floor(), BigInt::from(1));
    }

    #[test]
    fn product_expands_with_sqrt3_squared_equals_three() {
        // (1 + 2√3)(3 − √3) = −3 + 5√3
        let lhs = QR3::new(q(1, 1), q(2, 1));
        let rhs = QR3::new(q(3, 1), q(-1, 1));
        assert_eq!(&lhs * &rhs, QR3::new(q(-3, 1), q(5, 1)));
    }

    #[test]
    fn floor_examples_exact() {
        let cases = [
            (QR3::new(q(0, 1), q(1, 1)), 1),    // √3 ≈ 1.732
            (QR3::new(q(0, 1), q(-1, 1)), -2),  // −√3 ≈ −1.732
            (QR3::new(q(0, 1), q(2, 1)), 3),    // 2√3 ≈ 3.46
            (QR3::new(q(-1, 2), q(0, 1)), -1),  // −1/2
            (QR3::new(q(7, 2), q(0, 1)), 3),    // 7/2
            (QR3::new(q(5, 1), q(-2, 1)), 1),   // 5 − 2√3 ≈ 1.535
            (QR3::new(q(-5, 1), q(3, 1)), 0),   // 3√3 − 5 ≈ 0.196
            (QR3::new(q(-6, 1), q(3, 1)), -1),  // 3√3 − 6 ≈ −0.804
        ];
        for (v, expect) in cases {
            assert_eq!(v.floor(), BigInt::from(expect), "floor({v})");
        }
    }

    #[test]
    fn rem_floor_lands_in_fundamental_interval() {
        let m = QR3::new(q(3, 2), q(0, 1));
        let v = QR3::new(q(-7, 3), q(2, 1)); // ≈ 1.13
        let r = v.rem_floor(&m);
        assert!(r.sign() != Ordering::Less);
        assert!((&r - &m).sign() == Ordering::Less);
        // v − r is an integer multiple of m.
        let k = &(&v - &r) * &QR3::new(q(2, 3), q(0, 1));
        assert!(k.is_rational() && k.rational_part().is_integer());
    }

    #[test]
    fn ordering_is_total_and_strict() {
        let a = QR3::new(q(1, 1), q(1, 1)); // 1 + √3 ≈ 2.73
        let b = QR3::new(q(5, 2), q(0, 1)); // 2.5
        let c = QR3::new(q(0, 1), q(3, 2)); // 1.5√3 ≈ 2.598
        assert!(b < c && c < a);
        assert_eq!(a.cmp(&a), Ordering::Equal);
    }

    #[test]
    fn decimal_rendering_truncates_toward_zero() {
        assert_eq!(QR3::sqrt3().to_decimal(6), "1.732050");
        assert_eq!(QR3::ratio(-1, 2).to_decimal(3), "-0.500");
        assert_eq!(QR3::integer(4).to_decimal(2), "4.00");
    }

    #[test]
    fn parse_round_trips_display() {
        for s in ["2/3", "-5", "1/2+3/4*sqrt3", "-2/7*sqrt3"] {
            let v: QR3 = s.parse().unwrap();
            let again: QR3 = v.to_string().parse().unwrap();
            assert_eq!(v, again);
        }
    }

    #[test]
    fn rejects_decimal_floats() {
        assert!(parse_frac("0.5").is_err());
        assert!("1.25".parse::<QR3>().is_err());
    }

    #[test]
    fn serde_uses_exact_fraction_strings() {
        let v = QR3::new(q(1, 2), q(-3, 4));
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(json, r#"{"a":"1/2","b":"-3/4"}"#);
        let back: QR3 = serde_json::from_str(&json).unwrap();
        assert_eq!(back, v);
    }
}
