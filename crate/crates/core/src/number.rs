//! Gaussian rationals: complex numbers with exact rational real and imaginary parts.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use std::cmp::Ordering;

use malachite_base::num::arithmetic::traits::{Abs, Sign};
use malachite_base::num::conversion::traits::{IsInteger, RoundingFrom};
use malachite_base::rounding_modes::RoundingMode;
use malachite_nz::integer::Integer;
use malachite_nz::natural::Natural;
pub use malachite_q::Rational;
use num_traits::{One, Zero};

/// A complex number `re + im·i` with `re, im ∈ ℚ`.
///
/// Both parts are kept in lowest terms with positive denominators, so
/// structural equality is exact equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussRational {
    re: Rational,
    im: Rational,
}

impl GaussRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self::new(Rational::from(re), Rational::from(im))
    }

    /// `num/den` as a real number. Panics on `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::real(Rational::from_signeds(num, den))
    }

    pub fn real(re: Rational) -> Self {
        Self::new(re, Rational::from(0))
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn re(&self) -> &Rational {
        &self.re
    }

    pub fn im(&self) -> &Rational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im == 0u32
    }

    /// Real or purely imaginary with a negative coefficient, so that it
    /// prints with a leading minus sign.
    pub fn has_negative_sign(&self) -> bool {
        (self.im == 0u32 && self.re.sign() == Ordering::Less) || (self.re == 0u32 && self.im.sign() == Ordering::Less)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// `|z|²`, which is always rational.
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self::new(&self.re / &n, -(&self.im / &n)))
    }

    /// Floating-point modulus. Diagnostics only.
    pub fn abs_f64(&self) -> f64 {
        let re = f64::rounding_from(&self.re, RoundingMode::Nearest).0;
        let im = f64::rounding_from(&self.im, RoundingMode::Nearest).0;
        re.hypot(im)
    }

    /// `ln |z|`, finite for every nonzero value however large. Diagnostics only.
    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        0.5 * self.norm_sqr().approx_log()
    }

    /// `k!` as a real Gaussian rational.
    pub fn factorial(k: u32) -> Self {
        let mut acc = Natural::from(1u32);
        for j in 2..=k {
            acc *= Natural::from(j);
        }
        Self::real(Rational::from(acc))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }
}

fn signed_numerator(q: &Rational) -> Integer {
    let n = Integer::from(q.numerator_ref());
    if q.sign() == Ordering::Less {
        -n
    } else {
        n
    }
}

/// Canonical `p/q` spelling used by the document format.
pub fn format_fraction(q: &Rational) -> String {
    format!("{}/{}", signed_numerator(q), q.denominator_ref())
}

/// Parses a canonical `p/q` fraction: `q > 0`, lowest terms, no `+`, zero as `0/1`.
pub fn parse_canonical_fraction(s: &str) -> Result<Rational, String> {
    let (p, q) = s.split_once('/').ok_or_else(|| format!("malformed fraction `{s}`: expected p/q"))?;
    let digits_ok = |t: &str, allow_minus: bool| {
        let body = if allow_minus { t.strip_prefix('-').unwrap_or(t) } else { t };
        !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit())
    };
    if !digits_ok(p, true) || !digits_ok(q, false) {
        return Err(format!("malformed fraction `{s}`"));
    }
    let num = Integer::from_str(p).map_err(|_| format!("malformed fraction `{s}`"))?;
    let den = Integer::from_str(q).map_err(|_| format!("malformed fraction `{s}`"))?;
    if den == 0u32 {
        return Err(format!("malformed fraction `{s}`: zero denominator"));
    }
    let value = Rational::from_integers(num, den);
    if format_fraction(&value) != s {
        return Err(format!("non-canonical fraction `{s}` (expected `{}`)", format_fraction(&value)));
    }
    Ok(value)
}

impl Zero for GaussRational {
    fn zero() -> Self {
        Self::from_ints(0, 0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0u32 && self.im == 0u32
    }
}

impl One for GaussRational {
    fn one() -> Self {
        Self::from_ints(1, 0)
    }
}

impl From<i64> for GaussRational {
    fn from(v: i64) -> Self {
        Self::from_ints(v, 0)
    }
}

impl From<Rational> for GaussRational {
    fn from(v: Rational) -> Self {
        Self::real(v)
    }
}

impl<'a> Add<&'a GaussRational> for &'a GaussRational {
    type Output = GaussRational;
    fn add(self, rhs: &GaussRational) -> GaussRational {
        GaussRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a> Sub<&'a GaussRational> for &'a GaussRational {
    type Output = GaussRational;
    fn sub(self, rhs: &GaussRational) -> GaussRational {
        GaussRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'a> Mul<&'a GaussRational> for &'a GaussRational {
    type Output = GaussRational;
    fn mul(self, rhs: &GaussRational) -> GaussRational {
        if self.im == 0u32 && rhs.im == 0u32 {
            return GaussRational::real(&self.re * &rhs.re);
        }
        GaussRational::new(&self.re * &rhs.re - &self.im * &rhs.im, &self.re * &rhs.im + &self.im * &rhs.re)
    }
}

impl<'a> Div<&'a GaussRational> for &'a GaussRational {
    type Output = GaussRational;
    /// Panics on division by zero, like the rational division it wraps.
    fn div(self, rhs: &GaussRational) -> GaussRational {
        self * &rhs.inv().expect("division by zero Gaussian rational")
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for GaussRational {
            type Output = GaussRational;
            fn $m(self, rhs: GaussRational) -> GaussRational {
                $tr::$m(&self, &rhs)
            }
        }
        impl<'a> $tr<&'a GaussRational> for GaussRational {
            type Output = GaussRational;
            fn $m(self, rhs: &GaussRational) -> GaussRational {
                $tr::$m(&self, rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul, Div::div);

impl AddAssign<&GaussRational> for GaussRational {
    fn add_assign(&mut self, rhs: &GaussRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussRational> for GaussRational {
    fn sub_assign(&mut self, rhs: &GaussRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&GaussRational> for GaussRational {
    fn mul_assign(&mut self, rhs: &GaussRational) {
        *self = &*self * rhs;
    }
}

impl Neg for GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        GaussRational::new(-self.re, -self.im)
    }
}

impl Neg for &GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        GaussRational::new(-self.re.clone(), -self.im.clone())
    }
}

fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        signed_numerator(q).to_string()
    } else {
        format_fraction(q)
    }
}

impl GaussRational {
    /// Expression-syntax rendering that the expression parser reads back:
    /// `3`, `-1/2`, `2*i`, `(1/2)*i`, `(1 - 3*i)`.
    pub fn to_expr(&self) -> String {
        let imag = |q: &Rational| {
            if *q == 1u32 {
                "i".to_string()
            } else if q.is_integer() {
                format!("{}*i", fmt_rational(q))
            } else {
                format!("({})*i", fmt_rational(q))
            }
        };
        let negative = |q: &Rational| q.sign() == Ordering::Less;
        match (self.re == 0u32, self.im == 0u32) {
            (_, true) => fmt_rational(&self.re),
            (true, false) => {
                if negative(&self.im) {
                    format!("-{}", imag(&-self.im.clone()))
                } else {
                    imag(&self.im)
                }
            }
            (false, false) => {
                let sign = if negative(&self.im) { '-' } else { '+' };
                format!("({} {} {})", fmt_rational(&self.re), sign, imag(&(&self.im).abs()))
            }
        }
    }
}

impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr())
    }
}

impl fmt::Debug for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
