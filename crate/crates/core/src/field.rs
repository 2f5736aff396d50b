//! Exact coefficient fields.
//!
//! Everything symbolic in this crate is computed over the Gaussian rationals
//! `Q(i)` ([`ComplexRational`]) or over a real quadratic extension
//! `Q(i)(sqrt d)` ([`Surd`]). The latter is what lets us place base points
//! exactly on the hypersurface, where `|w|^2` is a rational that is rarely
//! a sum of two rational squares.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Minimal exact-field interface used by the generic polynomial code.
///
/// The method names avoid `add`/`mul` so they never collide with the
/// `std::ops` impls on the concrete types.
pub trait Field: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    /// Multiplicative inverse; `None` for zero.
    fn recip(&self) -> Option<Self>;
    /// Complex conjugation (a field automorphism).
    fn conj(&self) -> Self;
    fn from_gaussian(c: &ComplexRational) -> Self;
    fn to_c64(&self) -> Complex64;
    /// Exact sign of the real part.
    fn re_sign(&self) -> Ordering;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn from_rational(r: &BigRational) -> Self {
        Self::from_gaussian(&ComplexRational::real(r.clone()))
    }

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(n)))
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.times(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.times(&base);
            }
        }
        acc
    }

    /// `conj(x) == x`.
    fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// `|x|^2`, which is real.
    fn norm_sqr(&self) -> Self {
        self.times(&self.conj())
    }
}

/// Exact complex rational `re + i im`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ComplexRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl ComplexRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Self {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self::new(int(re), int(im))
    }

    /// `(re_num/re_den) + i (im_num/im_den)`.
    pub fn from_fracs(re: (i64, i64), im: (i64, i64)) -> Self {
        Self::new(frac(re.0, re.1), frac(im.0, im.1))
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn is_real_exact(&self) -> bool {
        self.im.is_zero()
    }

    /// Squared modulus as an exact rational.
    pub fn abs_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Nearest Gaussian rational with denominator `2^bits` to a float value.
    pub fn approx_f64(z: Complex64, bits: u32) -> Self {
        Self::new(approx_rational(z.re, bits), approx_rational(z.im, bits))
    }
}

impl fmt::Debug for ComplexRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for ComplexRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "({})i", self.im),
            (false, false) => write!(f, "({} + ({})i)", self.re, self.im),
        }
    }
}

impl Field for ComplexRational {
    fn zero() -> Self {
        Self::default()
    }
    fn one() -> Self {
        Self::real(BigRational::one())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        Self::new(&self.re + &o.re, &self.im + &o.im)
    }
    fn minus(&self, o: &Self) -> Self {
        Self::new(&self.re - &o.re, &self.im - &o.im)
    }
    fn times(&self, o: &Self) -> Self {
        if self.im.is_zero() && o.im.is_zero() {
            return Self::real(&self.re * &o.re);
        }
        Self::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
    fn negated(&self) -> Self {
        Self::new(-&self.re, -&self.im)
    }
    fn recip(&self) -> Option<Self> {
        if Field::is_zero(self) {
            return None;
        }
        let n = self.abs_sqr();
        Some(Self::new(&self.re / &n, -&self.im / &n))
    }
    fn conj(&self) -> Self {
        Self::new(self.re.clone(), -&self.im)
    }
    fn from_gaussian(c: &ComplexRational) -> Self {
        c.clone()
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
    fn re_sign(&self) -> Ordering {
        sign_of(&self.re)
    }
}

macro_rules! forward_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                self.plus(&o)
            }
        }
        impl<'a> Add<&'a $t> for &'a $t {
            type Output = $t;
            fn add(self, o: &$t) -> $t {
                self.plus(o)
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                self.minus(&o)
            }
        }
        impl<'a> Sub<&'a $t> for &'a $t {
            type Output = $t;
            fn sub(self, o: &$t) -> $t {
                self.minus(o)
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, o: $t) -> $t {
                self.times(&o)
            }
        }
        impl<'a> Mul<&'a $t> for &'a $t {
            type Output = $t;
            fn mul(self, o: &$t) -> $t {
                self.times(o)
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                self.negated()
            }
        }
    };
}

forward_ops!(ComplexRational);
forward_ops!(Surd);

/// Element `a + b sqrt(d)` of `Q(i)(sqrt d)` for a positive, non-square
/// rational `d`. `d` is carried by the value; combining elements from
/// different extensions panics, since that is always a programming error.
#[derive(Clone)]
pub struct Surd {
    a: ComplexRational,
    b: ComplexRational,
    d: Option<Arc<BigRational>>,
}

impl Surd {
    /// `sqrt(r)` for `r >= 0`. Perfect squares come back as plain rationals.
    pub fn sqrt_of(r: &BigRational) -> Result<Surd, Error> {
        if r.is_negative() {
            return Err(Error::Domain(format!("square root of negative {r}")));
        }
        if let Some(s) = rational_sqrt(r) {
            return Ok(Surd::from_gaussian(&ComplexRational::real(s)));
        }
        Ok(Surd {
            a: ComplexRational::zero(),
            b: ComplexRational::one(),
            d: Some(Arc::new(r.clone())),
        })
    }

    pub fn parts(&self) -> (&ComplexRational, &ComplexRational, Option<&BigRational>) {
        (&self.a, &self.b, self.d.as_deref())
    }

    /// Returns the Gaussian-rational value when no radical is involved.
    pub fn as_gaussian(&self) -> Option<&ComplexRational> {
        if self.b.is_zero() {
            Some(&self.a)
        } else {
            None
        }
    }

    fn build(a: ComplexRational, b: ComplexRational, d: Option<Arc<BigRational>>) -> Surd {
        if b.is_zero() {
            Surd { a, b, d: None }
        } else {
            Surd { a, b, d }
        }
    }

    fn radicand(x: &Surd, y: &Surd) -> Option<Arc<BigRational>> {
        match (&x.d, &y.d) {
            (Some(p), Some(q)) => {
                assert!(p == q, "mixing Q(i)(sqrt {p}) with Q(i)(sqrt {q})");
                Some(p.clone())
            }
            (Some(p), None) | (None, Some(p)) => Some(p.clone()),
            (None, None) => None,
        }
    }
}

impl PartialEq for Surd {
    fn eq(&self, o: &Self) -> bool {
        self.a == o.a && self.b == o.b && (self.b.is_zero() || self.d == o.d)
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.d {
            None => write!(f, "{}", self.a),
            Some(d) => write!(f, "{} + {}*sqrt({})", self.a, self.b, d),
        }
    }
}

impl Field for Surd {
    fn zero() -> Self {
        Surd::from_gaussian(&ComplexRational::zero())
    }
    fn one() -> Self {
        Surd::from_gaussian(&ComplexRational::one())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        Surd::build(&self.a + &o.a, &self.b + &o.b, Surd::radicand(self, o))
    }
    fn minus(&self, o: &Self) -> Self {
        Surd::build(&self.a - &o.a, &self.b - &o.b, Surd::radicand(self, o))
    }
    fn times(&self, o: &Self) -> Self {
        let d = Surd::radicand(self, o);
        let mut a = &self.a * &o.a;
        if let Some(d) = &d {
            if !self.b.is_zero() && !o.b.is_zero() {
                let dd = ComplexRational::real((**d).clone());
                a = a + &(&self.b * &o.b) * &dd;
            }
        }
        let b = &self.a * &o.b + &self.b * &o.a;
        Surd::build(a, b, d)
    }
    fn negated(&self) -> Self {
        Surd::build(-self.a.clone(), -self.b.clone(), self.d.clone())
    }
    fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        match &self.d {
            None => Some(Surd::from_gaussian(&self.a.recip()?)),
            Some(d) => {
                // (a + b s)^-1 = (a - b s) / (a^2 - b^2 d); the norm is nonzero
                // because sqrt(d) is not in Q(i).
                let dd = ComplexRational::real((**d).clone());
                let norm = &self.a * &self.a - &(&self.b * &self.b) * &dd;
                let inv = norm.recip()?;
                Some(Surd::build(
                    &self.a * &inv,
                    -(&self.b * &inv),
                    self.d.clone(),
                ))
            }
        }
    }
    fn conj(&self) -> Self {
        Surd::build(self.a.conj(), self.b.conj(), self.d.clone())
    }
    fn from_gaussian(c: &ComplexRational) -> Self {
        Surd {
            a: c.clone(),
            b: ComplexRational::zero(),
            d: None,
        }
    }
    fn to_c64(&self) -> Complex64 {
        match &self.d {
            None => self.a.to_c64(),
            Some(d) => self.a.to_c64() + self.b.to_c64() * rat_to_f64(d).sqrt(),
        }
    }
    fn re_sign(&self) -> Ordering {
        let x = &self.a.re;
        let y = &self.b.re;
        let d = match &self.d {
            None => return sign_of(x),
            Some(d) => d,
        };
        let (sx, sy) = (sign_of(x), sign_of(y));
        if sy == Ordering::Equal {
            return sx;
        }
        if sx == Ordering::Equal || sx == sy {
            return sy;
        }
        // opposite signs: compare x^2 with y^2 d
        let lhs = x * x;
        let rhs = y * y * &**d;
        match lhs.cmp(&rhs) {
            Ordering::Greater => sx,
            Ordering::Less => sy,
            Ordering::Equal => Ordering::Equal,
        }
    }
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn sign_of(r: &BigRational) -> Ordering {
    if r.is_zero() {
        Ordering::Equal
    } else if r.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

pub fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // huge numerator/denominator: scale down via bit lengths
        let shift = r.numer().bits().max(r.denom().bits()) as i64 - 1000;
        let n = r.numer() >> shift.max(0) as usize;
        let d = r.denom() >> shift.max(0) as usize;
        n.to_f64().unwrap_or(f64::NAN) / d.to_f64().unwrap_or(f64::NAN)
    })
}

/// Nearest rational with denominator `2^bits`.
pub fn approx_rational(x: f64, bits: u32) -> BigRational {
    let scale = (2.0f64).powi(bits as i32);
    let n = (x * scale).round();
    let n = BigInt::from(n as i128);
    BigRational::new(n, BigInt::from(1u8) << bits as usize)
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &n * &n == *r.numer() && &d * &d == *r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Parses `"p/q"`, `"p"`, or a plain decimal like `"-0.125"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational, Error> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((p, q)) = t.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        let neg = ip.starts_with('-');
        let ip_abs = ip.trim_start_matches(['-', '+']);
        if !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{}{}", if ip_abs.is_empty() { "0" } else { ip_abs }, fp);
        let n = BigInt::from_str(&digits).map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10u8), fp.len());
        let r = BigRational::new(n, d);
        return Ok(if neg { -r } else { r });
    }
    Ok(BigRational::from_integer(BigInt::from_str(t).map_err(|_| bad())?))
}

/// Canonical `"p/q"` string with `q > 0`.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_inverse() {
        let z = ComplexRational::from_ints(3, -4);
        let inv = z.recip().unwrap();
        assert_eq!(&z * &inv, ComplexRational::one());
        assert_eq!(z.conj().conj(), z);
    }

    #[test]
    fn surd_arithmetic_is_exact() {
        let s = Surd::sqrt_of(&frac(2, 1)).unwrap();
        let two = Surd::from_i64(2);
        assert_eq!(s.times(&s), two);
        let x = s.plus(&Surd::one());
        let y = x.recip().unwrap();
        assert!(x.times(&y).is_one());
        assert_eq!(s.conj(), s);
    }

    #[test]
    fn perfect_squares_stay_rational() {
        let s = Surd::sqrt_of(&frac(9, 4)).unwrap();
        assert_eq!(s.as_gaussian().unwrap(), &ComplexRational::real(frac(3, 2)));
        assert!(Surd::sqrt_of(&frac(-1, 1)).is_err());
    }

    #[test]
    fn surd_sign() {
        let s = Surd::sqrt_of(&frac(2, 1)).unwrap();
        // 1.5 - sqrt 2 > 0, 1.4 - sqrt 2 < 0
        let a = Surd::from_rational(&frac(3, 2)).minus(&s);
        let b = Surd::from_rational(&frac(7, 5)).minus(&s);
        assert_eq!(a.re_sign(), Ordering::Greater);
        assert_eq!(b.re_sign(), Ordering::Less);
        assert_eq!(s.minus(&s).re_sign(), Ordering::Equal);
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_rational("9/4").unwrap(), frac(9, 4));
        assert_eq!(parse_rational("-0.125").unwrap(), frac(-1, 8));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(parse_rational("3/-6").unwrap(), frac(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert_eq!(format_rational(&frac(3, -6)), "-1/2");
    }
}
