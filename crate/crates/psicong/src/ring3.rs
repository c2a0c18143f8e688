//! Arithmetic in Z/3^e and 3-adic valuations.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

/// Largest supported modulus exponent; 3^39 still fits in a u64 with room for
/// a u128 product.
pub const MAX_EXP: u32 = 39;

pub fn pow3(e: u32) -> u64 {
    assert!(e <= MAX_EXP, "modulus exponent {e} too large");
    3u64.pow(e)
}

/// The modulus 3^e together with the reduction helpers used by every dense
/// coefficient vector in the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Modulus {
    pub e: u32,
    pub m: u64,
}

impl Modulus {
    pub fn new(e: u32) -> Self {
        assert!(e >= 1, "modulus exponent must be positive");
        Modulus { e, m: pow3(e) }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.m {
            s - self.m
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.m - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.m - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.m as u128) as u64
    }

    pub fn from_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.m as i64) as u64
    }

    pub fn from_i128(&self, x: i128) -> u64 {
        x.rem_euclid(self.m as i128) as u64
    }

    pub fn from_bigint(&self, x: &BigInt) -> u64 {
        let r = x.mod_floor(&BigInt::from(self.m));
        r.to_u64().expect("reduced residue fits")
    }

    /// Signed representative in (-m/2, m/2].
    pub fn signed(&self, a: u64) -> i64 {
        if a > self.m / 2 {
            a as i64 - self.m as i64
        } else {
            a as i64
        }
    }

    pub fn pow(&self, mut a: u64, mut k: u64) -> u64 {
        let mut r = 1 % self.m;
        while k > 0 {
            if k & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            k >>= 1;
        }
        r
    }

    /// Inverse of a unit (a not divisible by 3).
    pub fn inv(&self, a: u64) -> Option<u64> {
        if a.is_multiple_of(3) {
            return None;
        }
        // Euler: a^(phi(3^e)-1)
        let phi = self.m / 3 * 2;
        Some(self.pow(a, phi - 1))
    }

    /// Valuation of a residue, capped at e (0 maps to e).
    pub fn val(&self, a: u64) -> u32 {
        if a == 0 {
            return self.e;
        }
        let mut a = a;
        let mut t = 0;
        while a.is_multiple_of(3) {
            a /= 3;
            t += 1;
        }
        t
    }
}

/// An element of Z/3^e.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    e: u32,
}

impl Residue {
    pub fn new(x: i64, e: u32) -> Self {
        let md = Modulus::new(e);
        Residue {
            value: md.from_i64(x),
            e,
        }
    }

    pub fn from_bigint(x: &BigInt, e: u32) -> Self {
        let md = Modulus::new(e);
        Residue {
            value: md.from_bigint(x),
            e,
        }
    }

    pub fn from_raw(value: u64, e: u32) -> Self {
        let md = Modulus::new(e);
        assert!(value < md.m, "residue {value} not reduced mod 3^{e}");
        Residue { value, e }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn exp(&self) -> u32 {
        self.e
    }

    pub fn modulus(&self) -> u64 {
        pow3(self.e)
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    /// Reduce to a smaller modulus exponent.
    pub fn reduce(&self, e: u32) -> Residue {
        assert!(
            e <= self.e,
            "cannot lift a residue mod 3^{} to 3^{e}",
            self.e
        );
        Residue {
            value: self.value % pow3(e),
            e,
        }
    }

    pub fn v3(&self) -> Val {
        if self.value == 0 {
            Val::Infinite
        } else {
            Val::Finite(Modulus::new(self.e).val(self.value))
        }
    }

    fn check(&self, other: &Residue) -> Modulus {
        assert_eq!(
            self.e, other.e,
            "mixing residues mod 3^{} and 3^{}",
            self.e, other.e
        );
        Modulus::new(self.e)
    }
}

impl fmt::Debug for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod 3^{})", self.value, self.e)
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus())
    }
}

impl Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Residue) -> Residue {
        let md = self.check(&rhs);
        Residue {
            value: md.add(self.value, rhs.value),
            e: self.e,
        }
    }
}

impl Sub for Residue {
    type Output = Residue;
    fn sub(self, rhs: Residue) -> Residue {
        let md = self.check(&rhs);
        Residue {
            value: md.sub(self.value, rhs.value),
            e: self.e,
        }
    }
}

impl Mul for Residue {
    type Output = Residue;
    fn mul(self, rhs: Residue) -> Residue {
        let md = self.check(&rhs);
        Residue {
            value: md.mul(self.value, rhs.value),
            e: self.e,
        }
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        let md = Modulus::new(self.e);
        Residue {
            value: md.neg(self.value),
            e: self.e,
        }
    }
}

/// A 3-adic valuation; zero has infinite valuation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Val {
    Finite(u32),
    Infinite,
}

impl Val {
    pub fn finite(self) -> Option<u32> {
        match self {
            Val::Finite(t) => Some(t),
            Val::Infinite => None,
        }
    }
}

pub fn v3(n: &BigInt) -> Val {
    if n.is_zero() {
        return Val::Infinite;
    }
    let (_, digits) = n.to_u32_digits();
    let mut x = BigInt::from_slice(Sign::Plus, &digits);
    let three = BigInt::from(3);
    let mut t = 0;
    loop {
        let (q, r) = x.div_rem(&three);
        if !r.is_zero() {
            return Val::Finite(t);
        }
        x = q;
        t += 1;
    }
}

pub fn v3_i64(n: i64) -> Val {
    if n == 0 {
        return Val::Infinite;
    }
    let mut n = n.unsigned_abs();
    let mut t = 0;
    while n.is_multiple_of(3) {
        n /= 3;
        t += 1;
    }
    Val::Finite(t)
}

pub fn digit_sum3(mut d: u64) -> u64 {
    let mut s = 0;
    while d > 0 {
        s += d % 3;
        d /= 3;
    }
    s
}

/// v_3(d!) by Legendre's sum of floor(d/3^l).
pub fn v3_factorial(d: u64) -> u64 {
    let mut t = 0;
    let mut q = d / 3;
    while q > 0 {
        t += q;
        q /= 3;
    }
    t
}

/// Lower bound 2d on the degree of a minimal polynomial for Psi modulo 3^gamma:
/// d is least with d + v_3(d!) >= gamma.
pub fn min_degree_bound(gamma: u64) -> u64 {
    assert!(gamma >= 1);
    let mut d = 1;
    while d + v3_factorial(d) < gamma {
        d += 1;
    }
    2 * d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations() {
        assert_eq!(v3(&BigInt::from(27)), Val::Finite(3));
        assert_eq!(v3(&BigInt::from(10)), Val::Finite(0));
        assert_eq!(v3(&BigInt::from(-18)), Val::Finite(2));
        assert_eq!(v3(&BigInt::zero()), Val::Infinite);
        assert_eq!(v3_i64(0), Val::Infinite);
    }

    #[test]
    fn legendre() {
        assert_eq!(v3_factorial(0), 0);
        assert_eq!(v3_factorial(9), 4);
        assert_eq!(v3_factorial(10), 4);
        for d in 0..=1_000_000u64 {
            assert_eq!(2 * v3_factorial(d), d - digit_sum3(d));
        }
    }

    #[test]
    fn degree_bound() {
        let got: Vec<u64> = (1..=13).map(min_degree_bound).collect();
        assert_eq!(got, vec![2, 4, 6, 6, 8, 10, 12, 12, 14, 16, 18, 18, 18]);
    }

    #[test]
    fn residue_ops() {
        let a = Residue::new(-1, 2);
        assert_eq!(a.value(), 8);
        assert_eq!((a * a).value(), 1);
        assert_eq!((a + Residue::new(1, 2)).value(), 0);
        assert_eq!(Residue::new(18, 3).v3(), Val::Finite(2));
        assert_eq!(Residue::new(26, 3).reduce(2).value(), 8);
        let md = Modulus::new(3);
        assert_eq!(md.mul(md.inv(5).unwrap(), 5), 1);
        assert_eq!(md.inv(6), None);
    }

    #[test]
    #[should_panic]
    fn mixed_exponents_panic() {
        let _ = Residue::new(1, 1) + Residue::new(1, 2);
    }
}
