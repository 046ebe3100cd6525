//! Exact rationals and the divisor-sum functions used throughout.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number, always in lowest terms with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        Ok(Rational(BigRational::new(numer.into(), denom)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    /// `n / d` for machine integers; panics on `d == 0`.
    pub fn ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Rational(BigRational::new(n.into(), d.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// `(-1)^k`.
    pub fn sign_power(k: u64) -> Self {
        if k.is_multiple_of(2) {
            Self::one()
        } else {
            -Self::one()
        }
    }

    /// Lossy conversion, for display only.
    pub fn to_f64(&self) -> Option<f64> {
        self.0.to_f64()
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational: {s:?}"));
        match s.split_once('/') {
            None => Ok(Rational::from_integer(s.parse::<BigInt>().map_err(|_| bad())?)),
            Some((n, d)) => {
                let n: BigInt = n.parse().map_err(|_| bad())?;
                let d: BigInt = d.parse().map_err(|_| bad())?;
                if !d.is_positive() {
                    return Err(bad());
                }
                Rational::new(n, d)
            }
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational(self.0.$m(rhs.0))
            }
        }
        impl<'a> $tr<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $m(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$m(&rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero rational");
        Rational(self.0 / rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

fn require_positive(d: u64, what: &str) -> Result<()> {
    if d == 0 {
        Err(Error::Domain(format!("{what} requires a positive argument, got 0")))
    } else {
        Ok(())
    }
}

/// Sum of the positive divisors of `d`, via the multiplicative formula
/// over a trial-division factorization.
pub fn sigma(d: u64) -> Result<u64> {
    require_positive(d, "sigma")?;
    let overflow = || Error::Capacity(format!("sigma({d}) overflows u64"));
    let mut n = d;
    let mut total: u64 = 1;
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            // 1 + p + ... + p^e
            let mut term: u64 = 1;
            let mut power: u64 = 1;
            while n.is_multiple_of(p) {
                n /= p;
                power = power.checked_mul(p).ok_or_else(overflow)?;
                term = term.checked_add(power).ok_or_else(overflow)?;
            }
            total = total.checked_mul(term).ok_or_else(overflow)?;
        }
        p += 1;
    }
    if n > 1 {
        total = total.checked_mul(n + 1).ok_or_else(overflow)?;
    }
    Ok(total)
}

/// `sigma(d / 2)` for even `d`, and 0 for odd `d`.
pub fn sigma_at_half(d: u64) -> Result<u64> {
    require_positive(d, "sigma_at_half")?;
    if d.is_multiple_of(2) {
        sigma(d / 2)
    } else {
        Ok(0)
    }
}

/// All positive divisors of `d` in ascending order.
pub fn divisors(d: u64) -> Result<Vec<u64>> {
    require_positive(d, "divisors")?;
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut k = 1u64;
    while k.saturating_mul(k) <= d {
        if d.is_multiple_of(k) {
            small.push(k);
            if k != d / k {
                large.push(d / k);
            }
        }
        k += 1;
    }
    small.extend(large.into_iter().rev());
    Ok(small)
}

/// Coefficients `[c_0, c_1, ..., c_n]` of the Lambert series
/// `sum_{k>0} k t^k / (1 - t^k)` truncated at `t^n`. The coefficient of
/// `t^d` is `sigma(d)`; `c_0 = 0`.
pub fn lambert_divisor_series(n: usize) -> Vec<u64> {
    let mut coeffs = vec![0u64; n + 1];
    // k t^k / (1 - t^k) = k (t^k + t^{2k} + ...)
    for k in 1..=n {
        for e in (k..=n).step_by(k) {
            coeffs[e] += k as u64;
        }
    }
    coeffs
}

pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    num_integer::lcm(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive_sigma(d: u64) -> u64 {
        (1..=d).filter(|k| d.is_multiple_of(*k)).sum()
    }

    #[test]
    fn sigma_values() {
        assert_eq!(sigma(1).unwrap(), 1);
        assert_eq!(sigma(2).unwrap(), 3);
        assert_eq!(sigma(6).unwrap(), 12);
        assert!(matches!(sigma(0), Err(Error::Domain(_))));
    }

    #[test]
    fn sigma_at_half_values() {
        assert_eq!(sigma_at_half(1).unwrap(), 0);
        assert_eq!(sigma_at_half(2).unwrap(), 1);
        assert_eq!(sigma_at_half(4).unwrap(), 3);
        assert!(sigma_at_half(0).is_err());
    }

    #[test]
    fn divisors_values() {
        assert_eq!(divisors(1).unwrap(), vec![1]);
        assert_eq!(divisors(4).unwrap(), vec![1, 2, 4]);
        assert_eq!(divisors(12).unwrap(), vec![1, 2, 3, 4, 6, 12]);
        assert!(divisors(0).is_err());
    }

    #[test]
    fn sigma_matches_trial_division_up_to_ten_thousand() {
        for d in 1..=10_000u64 {
            let s = sigma(d).unwrap();
            assert_eq!(s, naive_sigma(d), "d={d}");
            assert_eq!(s, divisors(d).unwrap().iter().sum::<u64>(), "d={d}");
        }
    }

    #[test]
    fn sigma_is_multiplicative() {
        for a in 1..=100u64 {
            for b in 1..=100u64 {
                if gcd(a, b) == 1 {
                    assert_eq!(sigma(a * b).unwrap(), sigma(a).unwrap() * sigma(b).unwrap());
                }
            }
        }
    }

    #[test]
    fn lambert_series_sum_form_gives_sigma() {
        let c = lambert_divisor_series(300);
        assert_eq!(c[0], 0);
        for d in 1..=300u64 {
            assert_eq!(c[d as usize], naive_sigma(d));
        }
    }

    #[test]
    fn rational_display_and_parse() {
        assert_eq!(Rational::ratio(-3, 2).to_string(), "-3/2");
        assert_eq!(Rational::ratio(4, 2).to_string(), "2");
        assert_eq!(Rational::ratio(0, 5).to_string(), "0");
        assert_eq!("6/-4".parse::<Rational>().ok(), None);
        assert_eq!("-6/4".parse::<Rational>().unwrap(), Rational::ratio(-3, 2));
        assert_eq!("17".parse::<Rational>().unwrap(), Rational::from(17));
        let big = "123456789012345678901234567890/17";
        assert_eq!(big.parse::<Rational>().unwrap().to_string(), big);
        assert!(Rational::new(1, 0).is_err());
    }

    #[test]
    fn zero_is_zero_over_one() {
        let z = Rational::ratio(0, -7);
        assert_eq!(z.numer(), &BigInt::from(0));
        assert_eq!(z.denom(), &BigInt::from(1));
    }

    fn big_rational() -> impl Strategy<Value = Rational> {
        (any::<i128>(), any::<i128>(), 1u64..u64::MAX).prop_map(|(a, b, q)| {
            let n = BigInt::from(a) * BigInt::from(b);
            Rational::new(n, BigInt::from(q)).unwrap()
        })
    }

    fn normalized(r: &Rational) -> bool {
        use num_integer::Integer;
        r.denom().is_positive() && r.numer().gcd(r.denom()) == BigInt::one()
    }

    proptest! {
        #[test]
        fn add_then_subtract_is_exact(x in big_rational(), y in big_rational()) {
            let s = &x + &y;
            prop_assert!(normalized(&s));
            let back = &s - &y;
            prop_assert!(normalized(&back));
            prop_assert_eq!(back, x.clone());
            let p = &x * &y;
            prop_assert!(normalized(&p));
        }

        #[test]
        fn string_form_round_trips(x in big_rational()) {
            prop_assert_eq!(x.to_string().parse::<Rational>().unwrap(), x);
        }
    }
}
