use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};

/// Base-3 expansion, least significant trit first, implicitly padded with
/// zeros on the left. No trailing zeros are stored, so 0 is the empty string.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct TritString {
    digits: Vec<u8>,
}

impl TritString {
    pub fn from_digits_lsb(mut digits: Vec<u8>) -> Self {
        assert!(digits.iter().all(|&d| d < 3), "trits must be 0, 1 or 2");
        while digits.last() == Some(&0) {
            digits.pop();
        }
        TritString { digits }
    }

    pub fn from_biguint(n: &BigUint) -> Self {
        if n.is_zero() {
            return TritString::default();
        }
        TritString::from_digits_lsb(n.to_radix_le(3))
    }

    pub fn to_biguint(&self) -> BigUint {
        if self.digits.is_empty() {
            return BigUint::zero();
        }
        BigUint::from_radix_le(&self.digits, 3).expect("trits are valid base-3 digits")
    }

    /// Number of stored trits (0 for n = 0).
    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// s_i, zero beyond the stored length.
    pub fn digit(&self, i: usize) -> u8 {
        self.digits.get(i).copied().unwrap_or(0)
    }

    pub fn digits_lsb(&self) -> &[u8] {
        &self.digits
    }

    /// Most significant trit first, as the patterns are written.
    pub fn to_msb_string(&self) -> String {
        self.digits
            .iter()
            .rev()
            .map(|&d| (b'0' + d) as char)
            .collect()
    }

    /// n mod 4, using 3 = -1 mod 4.
    pub fn mod4(&self) -> u8 {
        let s: i64 = self
            .digits
            .iter()
            .enumerate()
            .map(|(i, &d)| if i % 2 == 0 { d as i64 } else { -(d as i64) })
            .sum();
        s.rem_euclid(4) as u8
    }

    pub fn count(&self, d: u8) -> usize {
        self.digits.iter().filter(|&&x| x == d).count()
    }

    /// Number of maximal runs of the letter `d` (d != 0).
    pub fn runs(&self, d: u8) -> usize {
        assert!(d != 0, "runs of the padding letter are unbounded");
        (0..self.len())
            .filter(|&i| self.digit(i) == d && (i + 1 >= self.len() || self.digit(i + 1) != d))
            .count()
    }

    /// Isolated occurrences of letters in `letters`, ignoring positions
    /// below `skip`. A letter is isolated when both neighbours differ from it.
    pub fn isolated(&self, letters: &[u8], skip: usize) -> usize {
        assert!(skip >= 1);
        (skip..=self.len())
            .filter(|&i| {
                let c = self.digit(i);
                letters.contains(&c) && self.digit(i - 1) != c && self.digit(i + 1) != c
            })
            .count()
    }

    /// Occurrences of `pat` (written most significant first) whose lowest
    /// position is at least `from`. Windows may extend into the padding.
    pub fn occurrences_from(&self, pat: &str, from: usize) -> usize {
        let p = parse_pat(pat);
        assert!(
            p.iter().any(|&d| d != 0),
            "all-zero pattern occurs infinitely often"
        );
        (from..self.len())
            .filter(|&i| {
                p.iter()
                    .rev()
                    .enumerate()
                    .all(|(j, &d)| self.digit(i + j) == d)
            })
            .count()
    }

    pub fn occurrences(&self, pat: &str) -> usize {
        self.occurrences_from(pat, 0)
    }

    /// Whether the padded string ends with `pat`.
    pub fn ends_with(&self, pat: &str) -> bool {
        parse_pat(pat)
            .iter()
            .rev()
            .enumerate()
            .all(|(j, &d)| self.digit(j) == d)
    }
}

fn parse_pat(pat: &str) -> Vec<u8> {
    pat.bytes()
        .map(|b| match b {
            b'0'..=b'2' => b - b'0',
            _ => panic!("bad trit pattern {pat:?}"),
        })
        .collect()
}

impl fmt::Display for TritString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.digits.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&self.to_msb_string())
        }
    }
}

impl fmt::Debug for TritString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TritString({self})")
    }
}

/// Parses a trit string written most significant first. Leading zeros are
/// dropped.
impl FromStr for TritString {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut digits = Vec::with_capacity(s.len());
        for b in s.bytes().rev() {
            match b {
                b'0'..=b'2' => digits.push(b - b'0'),
                _ => return Err(Error::Parse(format!("not a trit string: {s:?}"))),
            }
        }
        if digits.is_empty() {
            return Err(Error::Parse("empty trit string".into()));
        }
        Ok(TritString::from_digits_lsb(digits))
    }
}

impl From<u64> for TritString {
    fn from(mut n: u64) -> Self {
        let mut digits = Vec::new();
        while n > 0 {
            digits.push((n % 3) as u8);
            n /= 3;
        }
        TritString { digits }
    }
}

impl From<&BigUint> for TritString {
    fn from(n: &BigUint) -> Self {
        TritString::from_biguint(n)
    }
}

impl From<BigUint> for TritString {
    fn from(n: BigUint) -> Self {
        TritString::from_biguint(&n)
    }
}

impl From<&TritString> for TritString {
    fn from(t: &TritString) -> Self {
        t.clone()
    }
}

impl TryFrom<&BigInt> for TritString {
    type Error = Error;
    fn try_from(n: &BigInt) -> Result<Self> {
        match n.sign() {
            Sign::Minus => Err(Error::Parse(format!("negative index {n}"))),
            _ => Ok(TritString::from_biguint(n.magnitude())),
        }
    }
}

/// String statistics used by the mod-27 digit rules.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DigitStats {
    /// maximal runs of 1s
    pub estring: usize,
    /// isolated 0s and 1s, excluding s_0, s_1
    pub iso2: usize,
    /// isolated 0s and 1s, excluding s_0, s_1, s_2
    pub iso3: usize,
    pub occ_011: usize,
    /// "100" not involving s_0
    pub occ1_100: usize,
    pub occ_020: usize,
    pub occ_021: usize,
    pub occ_102: usize,
    pub occ_10: usize,
    pub occ_01: usize,
    /// maximal runs of 2s
    pub eestring: usize,
    /// isolated 0s and 2s, excluding s_0, s_1, s_2
    pub iso3_02: usize,
    pub occ_022: usize,
    pub occ_200: usize,
    pub occ_201: usize,
    pub occ_21: usize,
}

pub fn digit_stats(s: &TritString) -> DigitStats {
    DigitStats {
        estring: s.runs(1),
        iso2: s.isolated(&[0, 1], 2),
        iso3: s.isolated(&[0, 1], 3),
        occ_011: s.occurrences("011"),
        occ1_100: s.occurrences_from("100", 1),
        occ_020: s.occurrences("020"),
        occ_021: s.occurrences("021"),
        occ_102: s.occurrences("102"),
        occ_10: s.occurrences("10"),
        occ_01: s.occurrences("01"),
        eestring: s.runs(2),
        iso3_02: s.isolated(&[0, 2], 3),
        occ_022: s.occurrences("022"),
        occ_200: s.occurrences("200"),
        occ_201: s.occurrences("201"),
        occ_21: s.occurrences("21"),
    }
}

/// One string statistic, as referenced from the rule tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Stat {
    Runs1,
    Runs2,
    Iso1,
    Iso2,
    Iso3Of02,
    Occ(&'static str),
    /// occurrences not involving s_0
    Occ1(&'static str),
    End(&'static str),
}

impl Stat {
    pub(crate) fn eval(self, s: &TritString) -> i64 {
        (match self {
            Stat::Runs1 => s.runs(1),
            Stat::Runs2 => s.runs(2),
            Stat::Iso1 => s.isolated(&[0, 1], 1),
            Stat::Iso2 => s.isolated(&[0, 1], 2),
            Stat::Iso3Of02 => s.isolated(&[0, 2], 3),
            Stat::Occ(p) => s.occurrences(p),
            Stat::Occ1(p) => s.occurrences_from(p, 1),
            Stat::End(p) => s.ends_with(p) as usize,
        }) as i64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ts(s: &str) -> TritString {
        s.parse().unwrap()
    }

    #[test]
    fn conversions() {
        assert_eq!(TritString::from(0u64).to_string(), "0");
        assert_eq!(TritString::from(9u64).to_string(), "100");
        assert_eq!(TritString::from(9u64), ts("00100"));
        let big = BigUint::parse_bytes(b"1000000000000000000000", 10).unwrap();
        assert_eq!(TritString::from(&big).to_biguint(), big);
        assert!(TritString::try_from(&BigInt::from(-1)).is_err());
        for n in 0..200u64 {
            assert_eq!(TritString::from(n).mod4() as u64, n % 4);
        }
    }

    #[test]
    fn statistics() {
        assert_eq!(ts("022").occurrences("022"), 1);
        let s = ts("0110");
        assert_eq!(digit_stats(&s).estring, 1);
        assert_eq!(digit_stats(&s).iso2, 0);
        let s = ts("10");
        assert_eq!(s.runs(1), 1);
        assert!(s.ends_with("10"));
        assert!(s.ends_with("010"));
        assert!(!s.ends_with("110"));
        // the 100 at the bottom touches s_0
        assert_eq!(ts("100").occurrences_from("100", 1), 0);
        assert_eq!(ts("1000").occurrences_from("100", 1), 1);
        // s_3 = 0 between 1 and 1 is isolated, s_2 = 1 next to it is too
        let s = ts("10100");
        assert_eq!(s.isolated(&[0, 1], 2), 3);
        assert_eq!(s.isolated(&[0, 1], 3), 2);
        assert_eq!(ts("20202").runs(2), 3);
        assert_eq!(ts("2002").isolated(&[0, 2], 3), 1);
    }
}
