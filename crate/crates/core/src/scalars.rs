//! Exact arithmetic in the biquadratic field ℚ(√2, √3) and the [`Scalar`]
//! abstraction shared by the exact and floating-point code paths.
//!
//! Every constant that appears in the explicit matrices of this crate
//! (1/(2√2), 1/(2√6), √3, 1/√3, ...) lives in ℚ(√2, √3), so a single fixed
//! field is enough for the exact mode.

use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, RemAssign, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Common interface of the two scalar backends: [`QuadScalar`] (exact) and
/// `f64` (numeric).
pub trait Scalar:
    Clone + fmt::Debug + PartialEq + Send + Sync + 'static + Num + Neg<Output = Self>
{
    /// Whether arithmetic is exact (comparisons to zero are decisions, not
    /// tolerances).
    const EXACT: bool;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    fn sqrt2() -> Self;
    fn sqrt3() -> Self;

    /// Square root, when it exists in the backend. The exact backend only
    /// handles non-negative rationals r with r, r/2, r/3 or r/6 a rational
    /// square.
    fn try_sqrt(&self) -> Option<Self>;

    fn to_f64(&self) -> f64;

    /// Conversion from a double; exact backends take the binary value as is.
    fn from_f64(v: f64) -> Self;

    /// Exact zero test in exact mode; `|x| <= tol` in numeric mode.
    fn near_zero(&self, tol: f64) -> bool;

    fn checked_inv(&self) -> Result<Self> {
        if self.is_zero() {
            Err(Error::Domain("inverse of zero".into()))
        } else {
            Ok(Self::one() / self.clone())
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn sqrt2() -> Self {
        std::f64::consts::SQRT_2
    }

    fn sqrt3() -> Self {
        3f64.sqrt()
    }

    fn try_sqrt(&self) -> Option<Self> {
        (*self >= 0.0).then(|| self.sqrt())
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_f64(v: f64) -> Self {
        v
    }

    fn near_zero(&self, tol: f64) -> bool {
        self.abs() <= tol
    }
}

/// Extra operations on complex scalars built over a [`Scalar`].
pub trait ComplexExt<S: Scalar> {
    fn near_zero(&self, tol: f64) -> bool;
    fn to_c64(&self) -> Complex<f64>;
}

impl<S: Scalar> ComplexExt<S> for Complex<S> {
    fn near_zero(&self, tol: f64) -> bool {
        self.re.near_zero(tol) && self.im.near_zero(tol)
    }

    fn to_c64(&self) -> Complex<f64> {
        Complex::new(self.re.to_f64(), self.im.to_f64())
    }
}

/// An element c0 + c1·√2 + c2·√3 + c3·√6 of ℚ(√2, √3).
///
/// The representation is unique since {1, √2, √3, √6} is a ℚ-basis. Zero is
/// stored without allocation; most entries of the matrices in this crate
/// are zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QuadScalar {
    c: Option<Box<[BigRational; 4]>>,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl QuadScalar {
    pub fn new(c0: BigRational, c1: BigRational, c2: BigRational, c3: BigRational) -> Self {
        Self::from_array([c0, c1, c2, c3])
    }

    fn from_array(c: [BigRational; 4]) -> Self {
        if c.iter().all(Zero::is_zero) {
            Self { c: None }
        } else {
            Self { c: Some(Box::new(c)) }
        }
    }

    /// Small-integer constructor: (c0 + c1√2 + c2√3 + c3√6) / den.
    pub fn from_ints(c0: i64, c1: i64, c2: i64, c3: i64, den: i64) -> Self {
        Self::new(rat(c0, den), rat(c1, den), rat(c2, den), rat(c3, den))
    }

    pub fn rational(r: BigRational) -> Self {
        Self::new(r, BigRational::zero(), BigRational::zero(), BigRational::zero())
    }

    pub fn sqrt6() -> Self {
        Self::from_ints(0, 0, 0, 1, 1)
    }

    /// The coefficients (c0, c1, c2, c3).
    pub fn coeffs(&self) -> [BigRational; 4] {
        match &self.c {
            Some(c) => (**c).clone(),
            None => Default::default(),
        }
    }

    pub fn is_rational(&self) -> bool {
        match &self.c {
            Some(c) => c[1].is_zero() && c[2].is_zero() && c[3].is_zero(),
            None => true,
        }
    }

    fn map_coeffs(&self, f: impl Fn(usize, &BigRational) -> BigRational) -> Self {
        match &self.c {
            Some(c) => Self::from_array(std::array::from_fn(|i| f(i, &c[i]))),
            None => Self::default(),
        }
    }

    /// Conjugation √2 ↦ −√2.
    fn sigma2(&self) -> Self {
        self.map_coeffs(|i, v| if i % 2 == 1 { -v } else { v.clone() })
    }

    /// Conjugation √3 ↦ −√3.
    fn sigma3(&self) -> Self {
        self.map_coeffs(|i, v| if i >= 2 { -v } else { v.clone() })
    }

    /// Multiplicative inverse; fails on zero.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("inverse of zero in Q(sqrt2, sqrt3)".into()));
        }
        // u·σ2(u) ∈ ℚ(√3), times its σ3-conjugate lands in ℚ.
        let s2 = self.sigma2();
        let t = self * &s2;
        let t3 = t.sigma3();
        let norm = &t * &t3;
        debug_assert!(norm.is_rational());
        let n = norm.coeffs()[0].clone();
        Ok((&s2 * &t3).map_coeffs(|_, v| v / &n))
    }

    /// Checked conversion to `f64`; errors if a coefficient does not fit.
    pub fn embed(&self) -> Result<f64> {
        const BASIS: [f64; 4] = [1.0, std::f64::consts::SQRT_2, 1.7320508075688772, 2.449489742783178];
        let Some(cs) = &self.c else { return Ok(0.0) };
        let mut acc = 0.0;
        for (c, b) in cs.iter().zip(BASIS) {
            if c.is_zero() {
                continue;
            }
            let v = c
                .to_f64()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Range(format!("coefficient {c} overflows f64")))?;
            acc += v * b;
        }
        Ok(acc)
    }

    fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
        if r.is_negative() {
            return None;
        }
        let (n, d) = (r.numer(), r.denom());
        let sn = n.sqrt();
        let sd = d.sqrt();
        (&sn * &sn == *n && &sd * &sd == *d).then(|| BigRational::new(sn, sd))
    }
}

impl fmt::Debug for QuadScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QuadScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 4] = ["", "√2", "√3", "√6"];
        let mut wrote = false;
        for (c, name) in self.coeffs().iter().zip(NAMES) {
            if c.is_zero() {
                continue;
            }
            if wrote {
                write!(f, " + ")?;
            }
            if name.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{name}")?;
            } else {
                write!(f, "({c}){name}")?;
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn mul_ref(u: &QuadScalar, v: &QuadScalar) -> QuadScalar {
    let (Some(uc), Some(vc)) = (&u.c, &v.c) else { return QuadScalar::default() };
    if v.is_rational() {
        return u.map_coeffs(|_, a| a * &vc[0]);
    }
    if u.is_rational() {
        return v.map_coeffs(|_, b| &uc[0] * b);
    }
    let [a0, a1, a2, a3] = &**uc;
    let [b0, b1, b2, b3] = &**vc;
    let two = BigRational::from_integer(2.into());
    let three = BigRational::from_integer(3.into());
    let six = BigRational::from_integer(6.into());
    // √2√2=2, √3√3=3, √6√6=6, √2√3=√6, √2√6=2√3, √3√6=3√2
    let c0 = a0 * b0 + &two * (a1 * b1) + &three * (a2 * b2) + &six * (a3 * b3);
    let c1 = a0 * b1 + a1 * b0 + &three * (a2 * b3 + a3 * b2);
    let c2 = a0 * b2 + a2 * b0 + &two * (a1 * b3 + a3 * b1);
    let c3 = a0 * b3 + a3 * b0 + a1 * b2 + a2 * b1;
    QuadScalar::new(c0, c1, c2, c3)
}

fn add_signed(lhs: &mut QuadScalar, rhs: &QuadScalar, negate: bool) {
    let Some(rc) = &rhs.c else { return };
    match &mut lhs.c {
        None => *lhs = if negate { -rhs } else { rhs.clone() },
        Some(lc) => {
            for (a, b) in lc.iter_mut().zip(rc.iter()) {
                if b.is_zero() {
                    continue;
                }
                if negate {
                    *a -= b;
                } else {
                    *a += b;
                }
            }
            if lc.iter().all(Zero::is_zero) {
                lhs.c = None;
            }
        }
    }
}

impl<'a> Mul<&'a QuadScalar> for &'a QuadScalar {
    type Output = QuadScalar;
    fn mul(self, rhs: &'a QuadScalar) -> QuadScalar {
        mul_ref(self, rhs)
    }
}

impl Mul for QuadScalar {
    type Output = QuadScalar;
    fn mul(self, rhs: QuadScalar) -> QuadScalar {
        mul_ref(&self, &rhs)
    }
}

impl<'a> Add<&'a QuadScalar> for &'a QuadScalar {
    type Output = QuadScalar;
    fn add(self, rhs: &'a QuadScalar) -> QuadScalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for QuadScalar {
    type Output = QuadScalar;
    fn add(mut self, rhs: QuadScalar) -> QuadScalar {
        self += &rhs;
        self
    }
}

impl<'a> Sub<&'a QuadScalar> for &'a QuadScalar {
    type Output = QuadScalar;
    fn sub(self, rhs: &'a QuadScalar) -> QuadScalar {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for QuadScalar {
    type Output = QuadScalar;
    fn sub(mut self, rhs: QuadScalar) -> QuadScalar {
        self -= &rhs;
        self
    }
}

impl<'a> AddAssign<&'a QuadScalar> for QuadScalar {
    fn add_assign(&mut self, rhs: &'a QuadScalar) {
        add_signed(self, rhs, false);
    }
}

impl<'a> SubAssign<&'a QuadScalar> for QuadScalar {
    fn sub_assign(&mut self, rhs: &'a QuadScalar) {
        add_signed(self, rhs, true);
    }
}

impl AddAssign for QuadScalar {
    fn add_assign(&mut self, rhs: QuadScalar) {
        *self += &rhs;
    }
}

impl SubAssign for QuadScalar {
    fn sub_assign(&mut self, rhs: QuadScalar) {
        *self -= &rhs;
    }
}

impl MulAssign for QuadScalar {
    fn mul_assign(&mut self, rhs: QuadScalar) {
        *self = mul_ref(self, &rhs);
    }
}

/// Division by zero panics, matching the primitive numeric types; use
/// [`QuadScalar::inv`] for the checked form.
impl Div for QuadScalar {
    type Output = QuadScalar;
    fn div(self, rhs: QuadScalar) -> QuadScalar {
        let inv = rhs.inv().expect("division by zero in Q(sqrt2, sqrt3)");
        mul_ref(&self, &inv)
    }
}

impl DivAssign for QuadScalar {
    fn div_assign(&mut self, rhs: QuadScalar) {
        *self = self.clone() / rhs;
    }
}

/// Field remainder: always zero.
impl Rem for QuadScalar {
    type Output = QuadScalar;
    fn rem(self, rhs: QuadScalar) -> QuadScalar {
        assert!(!rhs.is_zero(), "remainder by zero");
        QuadScalar::zero()
    }
}

impl RemAssign for QuadScalar {
    fn rem_assign(&mut self, rhs: QuadScalar) {
        *self = self.clone() % rhs;
    }
}

impl Neg for QuadScalar {
    type Output = QuadScalar;
    fn neg(self) -> QuadScalar {
        -&self
    }
}

impl<'a> Neg for &'a QuadScalar {
    type Output = QuadScalar;
    fn neg(self) -> QuadScalar {
        self.map_coeffs(|_, v| -v)
    }
}

impl Zero for QuadScalar {
    fn zero() -> Self {
        Self::default()
    }
    fn is_zero(&self) -> bool {
        self.c.is_none()
    }
}

impl One for QuadScalar {
    fn one() -> Self {
        Self::from_ints(1, 0, 0, 0, 1)
    }
}

impl Num for QuadScalar {
    type FromStrRadixErr = Error;

    /// Parses a rational `p` or `p/q`.
    fn from_str_radix(s: &str, radix: u32) -> Result<Self> {
        Ok(Self::rational(parse_rational(s, radix)?))
    }
}

impl FromStr for QuadScalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::from_str_radix(s.trim(), 10)
    }
}

impl Scalar for QuadScalar {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_ints(num, 0, 0, 0, den)
    }

    fn sqrt2() -> Self {
        Self::from_ints(0, 1, 0, 0, 1)
    }

    fn sqrt3() -> Self {
        Self::from_ints(0, 0, 1, 0, 1)
    }

    fn try_sqrt(&self) -> Option<Self> {
        if !self.is_rational() {
            return None;
        }
        let r = self.coeffs()[0].clone();
        for (k, slot) in [(1, 0usize), (2, 1), (3, 2), (6, 3)] {
            let scaled = &r / BigRational::from_integer(k.into());
            if let Some(s) = Self::rational_sqrt(&scaled) {
                let mut c: [BigRational; 4] = Default::default();
                c[slot] = s;
                return Some(Self::from_array(c));
            }
        }
        None
    }

    fn to_f64(&self) -> f64 {
        self.embed().unwrap_or(f64::NAN)
    }

    fn from_f64(v: f64) -> Self {
        Self::rational(BigRational::from_float(v).unwrap_or_default())
    }

    fn near_zero(&self, _tol: f64) -> bool {
        self.is_zero()
    }

    fn checked_inv(&self) -> Result<Self> {
        self.inv()
    }
}

#[derive(Serialize, Deserialize)]
struct QuadJson {
    c0: String,
    c1: String,
    c2: String,
    c3: String,
}

/// Parses `p` or `p/q` with optional sign and surrounding whitespace.
pub fn parse_rational(s: &str, radix: u32) -> Result<BigRational> {
    let bad = |why: &str| Error::Parse(format!("{s:?}: {why}"));
    let int = |t: &str| BigInt::parse_bytes(t.trim().as_bytes(), radix).ok_or_else(|| bad("not an integer"));
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(int(s)?)),
        Some((n, d)) => {
            let d = int(d)?;
            if d.is_zero() {
                return Err(bad("zero denominator"));
            }
            Ok(BigRational::new(int(n)?, d))
        }
    }
}

/// Parses products and quotients of rationals (integer, decimal or p/q
/// form) and the surds sqrt2, sqrt3, sqrt6 (also written √2, √3, √6), with
/// an optional leading sign: "-2/sqrt3", "3*sqrt2/4", "0.5".
pub fn parse_expr(s: &str) -> Result<QuadScalar> {
    let bad = |why: &str| Error::Parse(format!("{s:?}: {why}"));
    let text = s.trim().replace('√', "sqrt");
    let (neg, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(&text)),
    };
    if body.is_empty() {
        return Err(bad("empty expression"));
    }
    let mut acc = QuadScalar::one();
    let mut divide = false;
    let mut rest = body;
    loop {
        let end = rest.find(['*', '/']).unwrap_or(rest.len());
        let tok = rest[..end].trim();
        let mut factor = QuadScalar::one();
        let mut t = tok;
        if let Some(pos) = t.find("sqrt") {
            let surd = match &t[pos + 4..] {
                "2" => QuadScalar::sqrt2(),
                "3" => QuadScalar::sqrt3(),
                "6" => QuadScalar::sqrt6(),
                _ => return Err(bad("only sqrt2, sqrt3 and sqrt6 are supported")),
            };
            factor = surd;
            t = &t[..pos];
        }
        if !t.is_empty() {
            factor = factor * QuadScalar::rational(parse_decimal(t).ok_or_else(|| bad("not a number"))?);
        } else if tok.is_empty() {
            return Err(bad("missing operand"));
        }
        acc = if divide { acc * factor.inv()? } else { acc * factor };
        if end == rest.len() {
            break;
        }
        divide = rest.as_bytes()[end] == b'/';
        rest = &rest[end + 1..];
    }
    Ok(if neg { -acc } else { acc })
}

fn parse_decimal(t: &str) -> Option<BigRational> {
    let (int, frac) = t.split_once('.').unwrap_or((t, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}").parse().ok()?;
    Some(BigRational::new(digits, BigInt::from(10u32).pow(frac.len() as u32)))
}

fn rat_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

impl Serialize for QuadScalar {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let c = self.coeffs();
        QuadJson { c0: rat_string(&c[0]), c1: rat_string(&c[1]), c2: rat_string(&c[2]), c3: rat_string(&c[3]) }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for QuadScalar {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let j = QuadJson::deserialize(de)?;
        let p = |s: &str| parse_rational(s, 10).map_err(D::Error::custom);
        Ok(QuadScalar::new(p(&j.c0)?, p(&j.c1)?, p(&j.c2)?, p(&j.c3)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(c0: i64, c1: i64, c2: i64, c3: i64, den: i64) -> QuadScalar {
        QuadScalar::from_ints(c0, c1, c2, c3, den)
    }

    #[test]
    fn basis_products_reduce() {
        assert_eq!(QuadScalar::sqrt2() * QuadScalar::sqrt3(), QuadScalar::sqrt6());
        assert_eq!(QuadScalar::sqrt2() * QuadScalar::sqrt6(), q(0, 0, 2, 0, 1));
        assert_eq!(QuadScalar::sqrt3() * QuadScalar::sqrt6(), q(0, 3, 0, 0, 1));
        assert_eq!(QuadScalar::sqrt6() * QuadScalar::sqrt6(), q(6, 0, 0, 0, 1));
        assert_eq!(q(1, 0, 1, 0, 1) * q(-1, 0, 1, 0, 1), q(2, 0, 0, 0, 1));
    }

    #[test]
    fn rationalised_product() {
        let a = q(1, 0, 0, 0, 2) * QuadScalar::sqrt2().inv().unwrap();
        let b = q(1, 0, 0, 0, 2) * QuadScalar::sqrt6().inv().unwrap();
        assert_eq!(a * b, q(0, 0, 1, 0, 24));
    }

    #[test]
    fn inverses() {
        assert_eq!(q(1, 0, 1, 0, 1).inv().unwrap(), q(-1, 0, 1, 0, 2));
        assert_eq!(QuadScalar::sqrt6().inv().unwrap(), q(0, 0, 0, 1, 6));
        assert_eq!(q(2, 0, 0, 0, 1).inv().unwrap(), q(1, 0, 0, 0, 2));
        assert!(matches!(QuadScalar::zero().inv(), Err(Error::Domain(_))));
    }

    #[test]
    fn embedding_values() {
        assert_eq!(QuadScalar::sqrt6().embed().unwrap(), 2.449489742783178);
        let v = q(0, 0, -1, 0, 3).embed().unwrap();
        assert!((v - -0.5773502691896258).abs() <= 4.0 * f64::EPSILON * 0.58);
        assert_eq!(QuadScalar::zero().embed().unwrap(), 0.0);
    }

    #[test]
    fn embed_overflow_is_range_error() {
        let huge = BigRational::from_integer(BigInt::from(10).pow(400));
        assert!(matches!(QuadScalar::rational(huge).embed(), Err(Error::Range(_))));
    }

    #[test]
    fn sqrt_of_special_rationals() {
        assert_eq!(q(3, 0, 0, 0, 1).try_sqrt(), Some(QuadScalar::sqrt3()));
        assert_eq!(q(25, 0, 0, 0, 4).try_sqrt(), Some(q(5, 0, 0, 0, 2)));
        assert_eq!(q(1, 0, 0, 0, 2).try_sqrt(), Some(q(0, 1, 0, 0, 2)));
        assert_eq!(q(5, 0, 0, 0, 1).try_sqrt(), None);
        assert_eq!(q(-4, 0, 0, 0, 1).try_sqrt(), None);
    }

    #[test]
    fn json_shape() {
        let v = q(1, 0, -3, 0, 2);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"c0":"1/2","c1":"0/1","c2":"-3/2","c3":"0/1"}"#);
        let back: QuadScalar = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
        let loose: QuadScalar =
            serde_json::from_str(r#"{"c0":"4","c1":"0","c2":"0","c3":"-2/6"}"#).unwrap();
        assert_eq!(loose, q(12, 0, 0, -1, 3));
    }

    fn arb_quad() -> impl Strategy<Value = QuadScalar> {
        (prop::array::uniform4(-20i64..20), 1i64..12)
            .prop_map(|(c, d)| QuadScalar::from_ints(c[0], c[1], c[2], c[3], d))
    }

    proptest! {
        #[test]
        fn field_axioms(a in arb_quad(), b in arb_quad(), c in arb_quad()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            if !a.is_zero() {
                prop_assert_eq!(&a * &a.inv().unwrap(), QuadScalar::one());
            }
        }

        #[test]
        fn embedding_is_multiplicative(a in arb_quad(), b in arb_quad()) {
            let lhs = (&a * &b).embed().unwrap();
            let rhs = a.embed().unwrap() * b.embed().unwrap();
            let scale = a.embed().unwrap().abs().max(1.0) * b.embed().unwrap().abs().max(1.0);
            // absolute error relative to operand sizes: the product itself may cancel to ~0
            prop_assert!((lhs - rhs).abs() <= 1e-14 * scale * 64.0);
        }
    }

    #[test]
    fn expression_parser() {
        assert_eq!(parse_expr("2/sqrt3").unwrap(), QuadScalar::from_ints(0, 0, 2, 0, 3));
        assert_eq!(parse_expr("-2/√3").unwrap(), QuadScalar::from_ints(0, 0, -2, 0, 3));
        assert_eq!(parse_expr("3*sqrt2/4").unwrap(), QuadScalar::from_ints(0, 3, 0, 0, 4));
        assert_eq!(parse_expr("0.25").unwrap(), QuadScalar::from_ratio(1, 4));
        assert_eq!(parse_expr("2sqrt6").unwrap(), QuadScalar::from_ints(0, 0, 0, 2, 1));
        assert!(parse_expr("sqrt5").is_err());
        assert!(parse_expr("1/0").is_err());
        assert!(parse_expr("").is_err());
        assert!(parse_expr("2*").is_err());
    }
}
