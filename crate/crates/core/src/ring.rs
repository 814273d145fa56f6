// Copyright 2026 The postsel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Exact scalars for Hadamard+Toffoli circuits.
//!
//! Every amplitude such a circuit produces lies in `Z[1/√2]`, and every
//! outcome probability is a dyadic rational. The three types here cover
//! those cases without any floating point:
//!
//! * [`SqrtDyadic`]: `(a + b·√2) / 2^k`, the full amplitude ring.
//! * [`DyadicRational`]: `n / 2^k`, probabilities and their differences.
//! * [`PathAmplitude`]: `c / √2^m`, one basis amplitude after `m` Hadamards.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `(a + b·√2) / 2^k` in canonical form: `k == 0` or not both `a` and `b` even.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SqrtDyadic {
    a: BigInt,
    b: BigInt,
    k: u32,
}

impl SqrtDyadic {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, k: u32) -> Self {
        let mut value = SqrtDyadic {
            a: a.into(),
            b: b.into(),
            k,
        };
        value.canonicalize();
        value
    }

    pub fn zero() -> Self {
        Self::new(0, 0, 0)
    }

    pub fn one() -> Self {
        Self::new(1, 0, 0)
    }

    pub fn rational_part(&self) -> &BigInt {
        &self.a
    }

    pub fn sqrt2_part(&self) -> &BigInt {
        &self.b
    }

    pub fn exponent(&self) -> u32 {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Squared magnitude; only defined when the value is purely rational or
    /// purely a multiple of √2, which is the case for every basis amplitude.
    pub fn square_if_monomial(&self) -> Option<DyadicRational> {
        if self.b.is_zero() {
            Some(DyadicRational::new(&self.a * &self.a, 2 * self.k))
        } else if self.a.is_zero() {
            Some(DyadicRational::new(&self.b * &self.b * 2, 2 * self.k))
        } else {
            None
        }
    }

    fn canonicalize(&mut self) {
        if self.a.is_zero() && self.b.is_zero() {
            self.k = 0;
            return;
        }
        let twos = trailing_zeros(&self.a).min(trailing_zeros(&self.b));
        let shift = twos.min(self.k as u64) as u32;
        if shift > 0 {
            self.a >>= shift as usize;
            self.b >>= shift as usize;
            self.k -= shift;
        }
    }

    fn scaled_to(&self, k: u32) -> (BigInt, BigInt) {
        let shift = (k - self.k) as usize;
        (&self.a << shift, &self.b << shift)
    }
}

fn trailing_zeros(n: &BigInt) -> u64 {
    n.trailing_zeros().unwrap_or(u64::MAX)
}

/// Sum of two ring elements.
pub fn sd_add(x: &SqrtDyadic, y: &SqrtDyadic) -> SqrtDyadic {
    let k = x.k.max(y.k);
    let (xa, xb) = x.scaled_to(k);
    let (ya, yb) = y.scaled_to(k);
    SqrtDyadic::new(xa + ya, xb + yb, k)
}

/// Product of two ring elements, reducing `(√2)² = 2`.
pub fn sd_mul(x: &SqrtDyadic, y: &SqrtDyadic) -> SqrtDyadic {
    let a = &x.a * &y.a + (&x.b * &y.b) * 2;
    let b = &x.a * &y.b + &x.b * &y.a;
    SqrtDyadic::new(a, b, x.k + y.k)
}

impl Add for &SqrtDyadic {
    type Output = SqrtDyadic;
    fn add(self, rhs: &SqrtDyadic) -> SqrtDyadic {
        sd_add(self, rhs)
    }
}

impl Add for SqrtDyadic {
    type Output = SqrtDyadic;
    fn add(self, rhs: SqrtDyadic) -> SqrtDyadic {
        sd_add(&self, &rhs)
    }
}

impl Mul for &SqrtDyadic {
    type Output = SqrtDyadic;
    fn mul(self, rhs: &SqrtDyadic) -> SqrtDyadic {
        sd_mul(self, rhs)
    }
}

impl Mul for SqrtDyadic {
    type Output = SqrtDyadic;
    fn mul(self, rhs: SqrtDyadic) -> SqrtDyadic {
        sd_mul(&self, &rhs)
    }
}

impl Neg for SqrtDyadic {
    type Output = SqrtDyadic;
    fn neg(self) -> SqrtDyadic {
        SqrtDyadic::new(-self.a, -self.b, self.k)
    }
}

impl From<&PathAmplitude> for SqrtDyadic {
    fn from(p: &PathAmplitude) -> Self {
        if p.m.is_multiple_of(2) {
            SqrtDyadic::new(p.c.clone(), 0, p.m / 2)
        } else {
            // c/√2^m = c·√2 / 2^((m+1)/2)
            SqrtDyadic::new(0, p.c.clone(), p.m.div_ceil(2))
        }
    }
}

impl fmt::Display for SqrtDyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}+{}r2)/2^{}", self.a, self.b, self.k)
    }
}

/// `n / 2^k` in canonical form: `n` odd, or `n == 0` with `k == 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DyadicRational {
    n: BigInt,
    k: u32,
}

impl DyadicRational {
    pub fn new(n: impl Into<BigInt>, k: u32) -> Self {
        let mut n = n.into();
        if n.is_zero() {
            return DyadicRational { n, k: 0 };
        }
        let shift = n.trailing_zeros().unwrap_or(0).min(k as u64) as u32;
        n >>= shift as usize;
        DyadicRational { n, k: k - shift }
    }

    pub fn zero() -> Self {
        Self::new(0, 0)
    }

    pub fn one() -> Self {
        Self::new(1, 0)
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        Self::new(n, 0)
    }

    /// `2^-e`.
    pub fn pow2_neg(e: u32) -> Self {
        Self::new(1, e)
    }

    pub fn numerator(&self) -> &BigInt {
        &self.n
    }

    pub fn exponent(&self) -> u32 {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.n.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.n.is_negative()
    }

    /// Numerator once the value is written over `2^k` with `k >= self.exponent()`.
    pub fn numerator_over(&self, k: u32) -> BigInt {
        assert!(k >= self.k, "cannot write {self} over 2^{k}");
        &self.n << (k - self.k) as usize
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.n.clone(), BigInt::one() << self.k as usize)
    }

    /// Multiplies by `2^-e`.
    pub fn shr(&self, e: u32) -> Self {
        Self::new(self.n.clone(), self.k + e)
    }

    /// Lossy display conversion.
    pub fn to_f64(&self) -> f64 {
        self.to_rational().to_f64().unwrap_or(f64::NAN)
    }

    pub fn abs(&self) -> Self {
        Self::new(self.n.abs(), self.k)
    }

    pub fn from_rational(r: &BigRational) -> Option<Self> {
        let den = r.denom();
        if !is_power_of_two(den) {
            return None;
        }
        let k = den.bits() as u32 - 1;
        Some(Self::new(r.numer().clone(), k))
    }
}

pub(crate) fn is_power_of_two(n: &BigInt) -> bool {
    n.is_positive() && n.trailing_zeros() == Some(n.bits() - 1)
}

/// Exact three-way comparison.
pub fn dy_cmp(x: &DyadicRational, y: &DyadicRational) -> Ordering {
    let k = x.k.max(y.k);
    x.numerator_over(k).cmp(&y.numerator_over(k))
}

impl Ord for DyadicRational {
    fn cmp(&self, other: &Self) -> Ordering {
        dy_cmp(self, other)
    }
}

impl PartialOrd for DyadicRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &DyadicRational {
    type Output = DyadicRational;
    fn add(self, rhs: &DyadicRational) -> DyadicRational {
        let k = self.k.max(rhs.k);
        DyadicRational::new(self.numerator_over(k) + rhs.numerator_over(k), k)
    }
}

impl Sub for &DyadicRational {
    type Output = DyadicRational;
    fn sub(self, rhs: &DyadicRational) -> DyadicRational {
        let k = self.k.max(rhs.k);
        DyadicRational::new(self.numerator_over(k) - rhs.numerator_over(k), k)
    }
}

impl Mul for &DyadicRational {
    type Output = DyadicRational;
    fn mul(self, rhs: &DyadicRational) -> DyadicRational {
        DyadicRational::new(&self.n * &rhs.n, self.k + rhs.k)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for DyadicRational {
            type Output = DyadicRational;
            fn $method(self, rhs: DyadicRational) -> DyadicRational {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for DyadicRational {
    type Output = DyadicRational;
    fn neg(self) -> DyadicRational {
        DyadicRational::new(-self.n, self.k)
    }
}

/// Canonical report form `n/2^k`, e.g. `9/2^4`.
impl fmt::Display for DyadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.n, self.k)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed dyadic rational {0:?}, expected n/2^k")]
pub struct ParseDyadicError(String);

impl FromStr for DyadicRational {
    type Err = ParseDyadicError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseDyadicError(s.to_string());
        let (n, k) = s.trim().split_once("/2^").ok_or_else(err)?;
        let n: BigInt = n.parse().map_err(|_| err())?;
        let k: u32 = k.parse().map_err(|_| err())?;
        Ok(DyadicRational::new(n, k))
    }
}

/// `c / √2^m`, the amplitude of one basis state after `m` Hadamards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathAmplitude {
    pub c: BigInt,
    pub m: u32,
}

impl PathAmplitude {
    pub fn new(c: impl Into<BigInt>, m: u32) -> Self {
        PathAmplitude { c: c.into(), m }
    }
}

/// Probability of a basis state with amplitude `c/√2^m`: `c²/2^m`.
pub fn amp_square(p: &PathAmplitude) -> DyadicRational {
    DyadicRational::new(&p.c * &p.c, p.m)
}

/// Writes an exact rational, using `n/2^k` when the denominator is a power of
/// two so that dyadic values match their [`DyadicRational`] rendering.
pub fn format_rational(r: &BigRational) -> String {
    match DyadicRational::from_rational(r) {
        Some(d) => d.to_string(),
        None => format!("{}/{}", r.numer(), r.denom()),
    }
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `2^-e` as a rational.
pub fn rational_pow2_neg(e: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << e as usize)
}

/// `floor(log2 n)` for `n > 0`.
pub fn floor_log2(n: &BigInt) -> u32 {
    debug_assert!(n.is_positive());
    n.bits() as u32 - 1
}

/// `ceil(log2 n)` for `n > 0`.
pub fn ceil_log2(n: &BigInt) -> u32 {
    let f = floor_log2(n);
    if is_power_of_two(n) {
        f
    } else {
        f + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use num_integer::Integer;

    fn sd(a: i64, b: i64, k: u32) -> SqrtDyadic {
        SqrtDyadic::new(a, b, k)
    }

    #[test]
    fn add_examples() {
        assert_eq!(sd_add(&sd(1, 0, 0), &sd(1, 0, 0)), sd(2, 0, 0));
        assert_eq!(sd_add(&sd(1, 1, 1), &sd(1, -1, 1)), sd(1, 0, 0));
        let s = sd_add(&sd(0, 1, 1), &sd(0, 1, 1));
        assert_eq!((s.rational_part(), s.sqrt2_part(), s.exponent()), (&BigInt::zero(), &BigInt::one(), 0));
    }

    #[test]
    fn mul_examples() {
        let s = sd_mul(&sd(0, 1, 1), &sd(0, 1, 1));
        assert_eq!((s.rational_part(), s.sqrt2_part(), s.exponent()), (&BigInt::one(), &BigInt::zero(), 1));
        let x = sd(3, -5, 4);
        assert_eq!(sd_mul(&x, &sd(1, 0, 0)), x);
        assert_eq!(sd_mul(&sd(1, 1, 0), &sd(1, -1, 0)), sd(-1, 0, 0));
    }

    #[test]
    fn amp_square_examples() {
        assert_eq!(amp_square(&PathAmplitude::new(1, 1)), DyadicRational::new(1, 1));
        assert_eq!(amp_square(&PathAmplitude::new(-3, 4)), DyadicRational::new(9, 4));
        assert_eq!(amp_square(&PathAmplitude::new(0, 7)), DyadicRational::zero());
        assert_eq!(amp_square(&PathAmplitude::new(0, 7)).exponent(), 0);
    }

    #[test]
    fn cmp_examples() {
        let fifteen_16 = DyadicRational::new(15, 4);
        let one_minus = &DyadicRational::one() - &DyadicRational::pow2_neg(4);
        assert_eq!(dy_cmp(&fifteen_16, &one_minus), Ordering::Equal);
        assert_eq!(dy_cmp(&DyadicRational::new(9, 4), &DyadicRational::new(1, 1)), Ordering::Greater);
        assert_eq!(dy_cmp(&DyadicRational::zero(), &DyadicRational::new(1, 10)), Ordering::Less);
    }

    #[test]
    fn display_is_canonical() {
        assert_eq!(DyadicRational::new(9, 4).to_string(), "9/2^4");
        assert_eq!(DyadicRational::new(8, 6).to_string(), "1/2^3");
        assert_eq!(DyadicRational::new(0, 6).to_string(), "0/2^0");
        assert_eq!(DyadicRational::new(-12, 1).to_string(), "-6/2^0");
        assert_eq!("9/2^4".parse::<DyadicRational>().unwrap(), DyadicRational::new(9, 4));
        assert!("9/16".parse::<DyadicRational>().is_err());
        assert_eq!(format_rational(&rational(9, 16)), "9/2^4");
        assert_eq!(format_rational(&rational(4, 5)), "4/5");
    }

    #[test]
    fn path_amplitude_embeds_into_ring() {
        // 1/√2 = √2/2
        assert_eq!(SqrtDyadic::from(&PathAmplitude::new(1, 1)), sd(0, 1, 1));
        assert_eq!(SqrtDyadic::from(&PathAmplitude::new(2, 2)), sd(1, 0, 0));
        let half = SqrtDyadic::from(&PathAmplitude::new(1, 1));
        assert_eq!(half.square_if_monomial(), Some(DyadicRational::new(1, 1)));
    }

    #[test]
    fn log2_helpers() {
        assert_eq!(floor_log2(&BigInt::from(1)), 0);
        assert_eq!(floor_log2(&BigInt::from(7)), 2);
        assert_eq!(ceil_log2(&BigInt::from(1)), 0);
        assert_eq!(ceil_log2(&BigInt::from(8)), 3);
        assert_eq!(ceil_log2(&BigInt::from(9)), 4);
    }

    fn arb_sd() -> impl Strategy<Value = SqrtDyadic> {
        (-1000i64..1000, -1000i64..1000, 0u32..12).prop_map(|(a, b, k)| sd(a, b, k))
    }

    proptest! {
        #[test]
        fn ring_laws(x in arb_sd(), y in arb_sd(), z in arb_sd()) {
            prop_assert_eq!(&x + &y, &y + &x);
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        }

        #[test]
        fn canonical_forms_are_unique(a in -500i64..500, b in -500i64..500, k in 0u32..8, s in 0u32..6) {
            let x = sd(a, b, k);
            let scaled = SqrtDyadic::new(BigInt::from(a) << s as usize, BigInt::from(b) << s as usize, k + s);
            prop_assert_eq!(&x, &scaled);
            prop_assert_eq!(SqrtDyadic::new(x.a.clone(), x.b.clone(), x.k), x.clone());
            prop_assert!(x.k == 0 || x.a.is_odd() || x.b.is_odd());
        }

        #[test]
        fn amp_square_scales_back(c in -100_000i64..100_000, m in 0u32..40) {
            let p = amp_square(&PathAmplitude::new(c, m));
            prop_assert_eq!(p.numerator_over(m), BigInt::from(c) * BigInt::from(c));
        }

        #[test]
        fn dyadic_order_matches_rationals(n1 in -300i64..300, k1 in 0u32..10, n2 in -300i64..300, k2 in 0u32..10) {
            let x = DyadicRational::new(n1, k1);
            let y = DyadicRational::new(n2, k2);
            prop_assert_eq!(dy_cmp(&x, &y), x.to_rational().cmp(&y.to_rational()));
            prop_assert_eq!((&x + &y).to_rational(), x.to_rational() + y.to_rational());
            prop_assert_eq!((&x * &y).to_rational(), x.to_rational() * y.to_rational());
            prop_assert_eq!(x.to_string().parse::<DyadicRational>().unwrap(), x);
        }
    }
}
