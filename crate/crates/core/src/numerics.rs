//! Exact half-integer quantum numbers, signed square roots of rationals and
//! the floating complex scalar shared by the rest of the crate.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Complex amplitude type.
pub type ComplexF = num_complex::Complex64;

/// Global comparison tolerance for amplitudes and phases.
pub const TAU: f64 = 1e-10;

/// A half-integer stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);
    pub const ONE: HalfInt = HalfInt(2);

    /// Builds the value `twice / 2`.
    pub const fn from_twice(twice: i32) -> Self {
        HalfInt(twice)
    }

    pub const fn from_int(n: i32) -> Self {
        HalfInt(2 * n)
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub fn is_half_odd(self) -> bool {
        self.0 % 2 != 0
    }

    pub fn is_integer(self) -> bool {
        !self.is_half_odd()
    }

    /// The integer value, if there is one.
    pub fn as_int(self) -> Option<i32> {
        self.is_integer().then_some(self.0 / 2)
    }

    pub fn to_f64(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    pub fn abs(self) -> Self {
        HalfInt(self.0.abs())
    }

    /// Projections `m = j, j-1, ..., -j` in descending order.
    pub fn projections(self) -> impl Iterator<Item = HalfInt> {
        let j = self.0;
        (0..self.multiplicity() as i32).map(move |k| HalfInt(j - 2 * k))
    }

    /// Dimension `2j + 1` of the spin-j representation.
    pub fn multiplicity(self) -> usize {
        (self.0 + 1).max(0) as usize
    }

    /// Row/column index of projection `m` in a spin-j matrix (m descending).
    pub fn index_of(self, m: HalfInt) -> Option<usize> {
        let d = self.0 - m.0;
        (m.0.abs() <= self.0 && d % 2 == 0).then_some((d / 2) as usize)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

/// `(-1)^{twice(n)}`: the phase picked up by a spin-`n` state under a 2π turn.
pub fn halfint_phase(n: HalfInt) -> i32 {
    if n.twice().rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `(-1)^n` for an integer-valued `n`; `None` when `n` is half-odd.
pub fn integer_sign(n: HalfInt) -> Option<i32> {
    n.as_int().map(|k| if k.rem_euclid(2) == 0 { 1 } else { -1 })
}

/// `e^{iπx}`, the branch of `(-1)^x` used for half-integer exponents.
pub fn unit_phase(x: HalfInt) -> ComplexF {
    // exact on the quarter turns
    match x.twice().rem_euclid(4) {
        0 => ComplexF::new(1.0, 0.0),
        1 => ComplexF::new(0.0, 1.0),
        2 => ComplexF::new(-1.0, 0.0),
        _ => ComplexF::new(0.0, -1.0),
    }
}

/// `sign * sqrt(radicand)` with an exact rational radicand.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedSqrtRational {
    sign: i8,
    radicand: BigRational,
}

impl SignedSqrtRational {
    pub fn zero() -> Self {
        SignedSqrtRational { sign: 0, radicand: BigRational::zero() }
    }

    pub fn one() -> Self {
        SignedSqrtRational { sign: 1, radicand: BigRational::one() }
    }

    /// `sign * sqrt(radicand)`; a zero sign or radicand gives exact zero.
    ///
    /// Panics if the radicand is negative.
    pub fn new(sign: i8, radicand: BigRational) -> Self {
        assert!(!radicand.is_negative(), "negative radicand");
        if sign == 0 || radicand.is_zero() {
            return Self::zero();
        }
        SignedSqrtRational { sign: sign.signum(), radicand }
    }

    /// The signed square root of `x * |x|`, i.e. the value whose square has
    /// magnitude `x^2` and whose sign is that of `x`.
    pub fn from_rational(x: &BigRational) -> Self {
        let sign = if x.is_positive() {
            1
        } else if x.is_negative() {
            -1
        } else {
            0
        };
        Self::new(sign, x * x)
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn radicand(&self) -> &BigRational {
        &self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// Exact rational value when the radicand is a perfect square.
    pub fn to_rational(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        let n = exact_sqrt(self.radicand.numer())?;
        let d = exact_sqrt(self.radicand.denom())?;
        let v = BigRational::new(n, d);
        Some(if self.sign < 0 { -v } else { v })
    }

    pub fn to_f64(&self) -> Result<f64, Error> {
        ssr_to_float(self)
    }
}

fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

impl Mul for &SignedSqrtRational {
    type Output = SignedSqrtRational;
    fn mul(self, rhs: &SignedSqrtRational) -> SignedSqrtRational {
        SignedSqrtRational::new(self.sign * rhs.sign, &self.radicand * &rhs.radicand)
    }
}

impl Neg for SignedSqrtRational {
    type Output = SignedSqrtRational;
    fn neg(self) -> SignedSqrtRational {
        SignedSqrtRational { sign: -self.sign, radicand: self.radicand }
    }
}

impl SignedSqrtRational {
    /// Exact quotient; `None` when dividing by zero.
    pub fn checked_div(&self, rhs: &SignedSqrtRational) -> Option<SignedSqrtRational> {
        if rhs.is_zero() {
            return None;
        }
        Some(SignedSqrtRational::new(self.sign * rhs.sign, &self.radicand / &rhs.radicand))
    }
}

impl fmt::Display for SignedSqrtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            s => {
                let sign = if s < 0 { "-" } else { "" };
                match self.to_rational() {
                    Some(r) => write!(f, "{}", r),
                    None => write!(f, "{}sqrt({})", sign, self.radicand),
                }
            }
        }
    }
}

/// Floating value of `sign * sqrt(radicand)`.
pub fn ssr_to_float(v: &SignedSqrtRational) -> Result<f64, Error> {
    if v.is_zero() {
        return Ok(0.0);
    }
    let r = v.radicand.to_f64().filter(|x| x.is_finite()).ok_or(Error::Overflow)?;
    Ok(f64::from(v.sign) * r.sqrt())
}

const FACTORIAL_CACHE_LEN: usize = 4 * 32 + 1;

fn factorial_table() -> &'static [BigUint] {
    static TABLE: OnceLock<Vec<BigUint>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(FACTORIAL_CACHE_LEN);
        t.push(BigUint::one());
        for k in 1..FACTORIAL_CACHE_LEN {
            let next = &t[k - 1] * BigUint::from(k);
            t.push(next);
        }
        t
    })
}

/// `n!` as a big integer. Cached for `n ≤ 128` (covers `2j ≤ 32`).
pub fn factorial(n: u32) -> BigUint {
    let table = factorial_table();
    match table.get(n as usize) {
        Some(f) => f.clone(),
        None => {
            let mut acc = table[table.len() - 1].clone();
            for k in table.len() as u32..=n {
                acc *= BigUint::from(k);
            }
            acc
        }
    }
}

/// `n!` as a float, for the floating D-matrix sums.
pub fn factorial_f64(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * f64::from(k))
}

/// Maximum modulus of the difference of two equally sized complex slices.
pub fn max_abs_diff(a: &[ComplexF], b: &[ComplexF]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Pairwise (cascade) summation of complex values.
pub fn pairwise_sum(values: &[ComplexF]) -> ComplexF {
    match values.len() {
        0 => ComplexF::new(0.0, 0.0),
        1 => values[0],
        n if n <= 8 => values.iter().sum(),
        n => {
            let (lo, hi) = values.split_at(n / 2);
            pairwise_sum(lo) + pairwise_sum(hi)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn phase_examples() {
        assert_eq!(halfint_phase(HalfInt::from_twice(1)), -1);
        assert_eq!(halfint_phase(HalfInt::from_twice(2)), 1);
        assert_eq!(halfint_phase(HalfInt::from_twice(3)), -1);
        assert_eq!(halfint_phase(HalfInt::from_twice(-3)), -1);
    }

    #[test]
    fn ssr_float_examples() {
        let v = SignedSqrtRational::new(1, rat(1, 2));
        assert_eq!(ssr_to_float(&v).unwrap(), std::f64::consts::FRAC_1_SQRT_2);
        assert_eq!(ssr_to_float(&SignedSqrtRational::zero()).unwrap(), 0.0);
        let v = SignedSqrtRational::new(-1, rat(9, 4));
        assert_eq!(ssr_to_float(&v).unwrap(), -1.5);
        assert_eq!(v.to_rational(), Some(rat(-3, 2)));
    }

    #[test]
    fn ssr_overflow() {
        let huge = BigRational::from_integer(BigInt::from(10).pow(400));
        let v = SignedSqrtRational::new(1, huge);
        assert!(matches!(ssr_to_float(&v), Err(Error::Overflow)));
    }

    #[test]
    fn projections_descend() {
        let m: Vec<i32> = HalfInt::from_twice(3).projections().map(|m| m.twice()).collect();
        assert_eq!(m, vec![3, 1, -1, -3]);
        assert_eq!(HalfInt::ZERO.projections().count(), 1);
        assert_eq!(HalfInt::from_twice(3).index_of(HalfInt::from_twice(-1)), Some(2));
        assert_eq!(HalfInt::from_twice(3).index_of(HalfInt::from_twice(0)), None);
        assert_eq!(HalfInt::from_twice(5).to_string(), "5/2");
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), BigUint::one());
        assert_eq!(factorial(10), BigUint::from(3_628_800u32));
        assert_eq!(factorial(130), factorial(129) * BigUint::from(130u32));
    }

    #[test]
    fn unit_phase_quarters() {
        assert_eq!(unit_phase(HalfInt::from_twice(1)), ComplexF::new(0.0, 1.0));
        assert_eq!(unit_phase(HalfInt::from_twice(-1)), ComplexF::new(0.0, -1.0));
        assert_eq!(unit_phase(HalfInt::from_twice(2)), ComplexF::new(-1.0, 0.0));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn addition_keeps_parity(a in -40i32..40, b in -40i32..40) {
                let (x, y) = (HalfInt::from_twice(a), HalfInt::from_twice(b));
                prop_assert_eq!((x + y).twice(), a + b);
                prop_assert_eq!(halfint_phase(x + y), halfint_phase(x) * halfint_phase(y));
            }

            #[test]
            fn product_matches_floats(
                n1 in 1i64..1_000_000, d1 in 1i64..1_000_000,
                n2 in 1i64..1_000_000, d2 in 1i64..1_000_000,
                s1 in prop::sample::select(vec![-1i8, 1]), s2 in prop::sample::select(vec![-1i8, 1]),
            ) {
                let x = SignedSqrtRational::new(s1, rat(n1, d1));
                let y = SignedSqrtRational::new(s2, rat(n2, d2));
                let exact = ssr_to_float(&(&x * &y)).unwrap();
                let approx = ssr_to_float(&x).unwrap() * ssr_to_float(&y).unwrap();
                prop_assert!((exact - approx).abs() <= 4.0 * f64::EPSILON * exact.abs());
            }
        }
    }
}
