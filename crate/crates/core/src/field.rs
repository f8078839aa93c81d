//! Scalar fields used for linear coding.
//!
//! Everything above this module is generic over [`Field`]. Two fields are
//! provided: the prime field GF(2^31 - 1) ([`Fp`]), which is what the CLI and
//! the experiment harness use, and exact rationals ([`num_rational::BigRational`]),
//! which stand in for real-valued segments without rounding.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exact field arithmetic needed by elimination and coding.
pub trait Field:
    Clone
    + PartialEq
    + Eq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    /// Image of an integer under the canonical ring map.
    fn from_u64(n: u64) -> Self;

    /// A random element. The distribution only has to hit enough distinct
    /// values for random matrices to be full rank with high probability.
    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self;

    fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            exp >>= 1;
        }
        acc
    }
}

/// Element of GF(p) with p = 2^31 - 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fp(u32);

impl Fp {
    pub const MODULUS: u32 = 2_147_483_647;

    pub const fn new(value: u32) -> Self {
        Fp(value % Self::MODULUS)
    }

    pub const fn value(self) -> u32 {
        self.0
    }

    #[inline]
    fn reduce(x: u64) -> u32 {
        // 2^31 = 1 (mod p), so fold the high bits twice.
        let p = Self::MODULUS as u64;
        let x = (x & p) + (x >> 31);
        let x = (x & p) + (x >> 31);
        if x >= p {
            (x - p) as u32
        } else {
            x as u32
        }
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fp({})", self.0)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for Fp {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u32(self.0)
    }
}

impl<'de> Deserialize<'de> for Fp {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = u32::deserialize(d)?;
        if v >= Self::MODULUS {
            return Err(serde::de::Error::custom(format!(
                "field element {v} out of range"
            )));
        }
        Ok(Fp(v))
    }
}

impl Add for Fp {
    type Output = Fp;
    #[inline]
    fn add(self, rhs: Fp) -> Fp {
        let s = self.0 + rhs.0;
        Fp(if s >= Self::MODULUS {
            s - Self::MODULUS
        } else {
            s
        })
    }
}

impl Sub for Fp {
    type Output = Fp;
    #[inline]
    fn sub(self, rhs: Fp) -> Fp {
        if self.0 >= rhs.0 {
            Fp(self.0 - rhs.0)
        } else {
            Fp(self.0 + Self::MODULUS - rhs.0)
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    #[inline]
    fn mul(self, rhs: Fp) -> Fp {
        Fp(Self::reduce(self.0 as u64 * rhs.0 as u64))
    }
}

impl Neg for Fp {
    type Output = Fp;
    #[inline]
    fn neg(self) -> Fp {
        if self.0 == 0 {
            self
        } else {
            Fp(Self::MODULUS - self.0)
        }
    }
}

impl Div for Fp {
    type Output = Fp;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Fp) -> Fp {
        self * rhs.inv().expect("division by zero in GF(p)")
    }
}

impl AddAssign for Fp {
    fn add_assign(&mut self, rhs: Fp) {
        *self = *self + rhs;
    }
}

impl SubAssign for Fp {
    fn sub_assign(&mut self, rhs: Fp) {
        *self = *self - rhs;
    }
}

impl MulAssign for Fp {
    fn mul_assign(&mut self, rhs: Fp) {
        *self = *self * rhs;
    }
}

impl Zero for Fp {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl One for Fp {
    fn one() -> Self {
        Fp(1)
    }
}

impl Field for Fp {
    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(Self::MODULUS as u64 - 2))
        }
    }

    fn from_u64(n: u64) -> Self {
        Fp(Self::reduce(n))
    }

    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Fp(rng.gen_range(0..Self::MODULUS))
    }
}

impl Field for BigRational {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_u64(n: u64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let numer: i64 = rng.gen_range(-1000..=1000);
        let denom: i64 = rng.gen_range(1..=16);
        BigRational::new(BigInt::from(numer), BigInt::from(denom))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fp_wraps_at_modulus() {
        let a = Fp::new(Fp::MODULUS - 1);
        assert_eq!(a + Fp::new(1), Fp::zero());
        assert_eq!(Fp::zero() - Fp::new(1), a);
        assert_eq!(-Fp::new(2), Fp::new(Fp::MODULUS - 2));
        assert_eq!(
            Fp::from_u64(u64::MAX),
            Fp::new((u64::MAX % Fp::MODULUS as u64) as u32)
        );
    }

    #[test]
    fn fp_inverse_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let a = Fp::random(&mut rng);
            if a.is_zero() {
                assert!(a.inv().is_none());
                continue;
            }
            assert_eq!(a * a.inv().unwrap(), Fp::one());
        }
    }

    #[test]
    fn fp_mul_matches_u128() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..1000 {
            let a = Fp::random(&mut rng);
            let b = Fp::random(&mut rng);
            let want = (a.value() as u128 * b.value() as u128) % Fp::MODULUS as u128;
            assert_eq!((a * b).value() as u128, want);
        }
    }

    #[test]
    fn rational_pow_and_inverse() {
        let two = BigRational::from_u64(2);
        assert_eq!(two.pow(10), BigRational::from_u64(1024));
        assert_eq!(two.inv().unwrap() * two, BigRational::one());
        assert!(BigRational::zero().inv().is_none());
    }
}
