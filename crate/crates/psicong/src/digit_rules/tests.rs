use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use proptest::prelude::*;

use super::*;
use crate::psi_core::psi_series;
use crate::sequences::{apery2_by_recurrence, apery3_by_recurrence, free_subgroup_numbers};

/// Coefficients of Psi^k mod 27 for n < len, multiplying by the sparse Psi.
fn psi_power_series(k: u32, len: usize) -> Vec<u64> {
    let psi = psi_series(1, 1, 3, len as i64 - 1);
    let support: Vec<usize> = (0..len).filter(|&i| psi.coeff(i as i64) != 0).collect();
    let mut acc = vec![0u64; len];
    acc[0] = 1;
    for _ in 0..k {
        let mut next = vec![0u64; len];
        for (i, &a) in acc.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for &j in support.iter().take_while(|&&j| i + j < len) {
                next[i + j] = (next[i + j] + a) % 27;
            }
        }
        acc = next;
    }
    acc
}

fn ts(s: &str) -> TritString {
    s.parse().unwrap()
}

#[test]
fn stated_examples() {
    assert_eq!(psi_power_coeff(3, 2, 0u64).unwrap().value(), 1);
    assert_eq!(psi_power_coeff(3, 2, 1u64).unwrap().value(), 3);
    assert_eq!(psi_power_coeff(3, 2, 5u64).unwrap().value(), 0);
    assert_eq!(psi3_coeff_by_terms(0u64, 3).unwrap().value(), 1);
    assert_eq!(psi3_coeff_by_terms(2u64, 3).unwrap().value(), 3);
    assert!(matches!(
        psi_power_coeff(7, 2, 1u64),
        Err(Error::Untabulated { power: 7, e: 2 })
    ));
    assert!(matches!(
        psi_power_coeff(3, 1, 1u64),
        Err(Error::Untabulated { .. })
    ));
    assert_eq!(free_class(1u64, 1).unwrap().value(), 2);
    assert_eq!(free_class(ts("10"), 2).unwrap().value(), 7);
    assert_eq!(free_class(4u64, 2).unwrap().value(), 3);
    assert!(free27_is_one(ts("100")));
    assert!(!free27_is_one(1u64));
    assert_eq!(apery_class(AperyKind::Zeta2, 0u64).value(), 1);
    assert_eq!(apery_class(AperyKind::Zeta2, 1u64).value(), 3);
    assert_eq!(apery_class(AperyKind::Zeta3, 0u64).value(), 1);
}

#[test]
fn huge_index() {
    let n = BigUint::parse_bytes(b"1000000000000000000000", 10).unwrap();
    let r9 = psi_power_coeff(3, 2, &n).unwrap();
    let r27 = psi_power_coeff(3, 3, &n).unwrap();
    assert_eq!(r27.reduce(2), r9);
}

#[test]
fn psi_powers_match_series() {
    let len = 3usize.pow(7);
    for k in [1u32, 3, 5] {
        let series = psi_power_series(k, len);
        for (n, &c) in series.iter().enumerate() {
            let n = n as u64;
            for e in [2u32, 3] {
                let got = psi_power_coeff(k, e, n).unwrap();
                assert_eq!(
                    got.value(),
                    c % 3u64.pow(e),
                    "Psi^{k} at n={n} ({}) mod 3^{e}",
                    TritString::from(n)
                );
            }
            if k == 3 {
                assert_eq!(
                    psi3_coeff_by_terms(n, 3).unwrap().value(),
                    c,
                    "term-by-term sum at n={n}"
                );
            }
        }
    }
}

#[test]
fn case_lists_do_not_overlap() {
    for (p, e) in TABULATED {
        for n in 0..3u64.pow(7) {
            let c = psi_power_candidates(p, e, n).unwrap();
            assert!(
                c.len() <= 1,
                "Psi^{p} mod 3^{e}: n={} in classes {c:?}",
                TritString::from(n)
            );
        }
    }
}

#[test]
fn cube_never_two_mod_three() {
    for n in 0..3u64.pow(7) {
        assert_ne!(psi_power_coeff(3, 3, n).unwrap().value() % 3, 2);
    }
}

#[test]
fn free_rules_match_recurrence() {
    let f9 = free_subgroup_numbers(1, 2188, 2);
    let f27 = free_subgroup_numbers(1, 2188, 3);
    for lambda in 1..2188u64 {
        let want = f9[lambda as usize];
        assert_eq!(
            free_class(lambda, 2).unwrap().value(),
            want,
            "lambda={lambda} mod 9"
        );
        assert_eq!(
            free_class(lambda, 1).unwrap().value(),
            want % 3,
            "lambda={lambda} mod 3"
        );
        assert_eq!(
            free27_is_one(lambda),
            f27[lambda as usize] == 1,
            "lambda={lambda} mod 27"
        );
    }
}

#[test]
fn free_2212_reading() {
    // f_{2212} = 7 mod 27 has one run of 2s and one run of 1s
    let s = ts("2212");
    assert!(!free27_is_one_with(&s, Free27Reading::RunsOfTwos));
    assert!(free27_is_one_with(&s, Free27Reading::AsPrinted));
}

#[test]
fn apery_classes_match_recurrence() {
    let nine = BigInt::from(9);
    for (kind, seq) in [
        (AperyKind::Zeta2, apery2_by_recurrence(730)),
        (AperyKind::Zeta3, apery3_by_recurrence(730)),
    ] {
        for (n, a) in seq.iter().enumerate() {
            assert_eq!(
                BigInt::from(apery_class(kind, n as u64).value()),
                a.mod_floor(&nine),
                "{kind:?} n={n}"
            );
        }
    }
}

/// [z^n] Psi^k mod 27 by counting the ways to write n as a sum of k numbers
/// whose trits are all 0 or 1, carrying from the least significant end.
fn carry_count(k: usize, s: &TritString) -> u64 {
    let binom: Vec<u64> = (0..=k)
        .map(|t| (0..t).fold(1u64, |acc, i| acc * (k - i) as u64 / (i + 1) as u64))
        .collect();
    let mut ways = vec![0u64; k];
    ways[0] = 1;
    for i in 0..s.len() + 2 {
        let d = s.digit(i) as usize;
        let mut next = vec![0u64; k];
        for (carry, &w) in ways.iter().enumerate() {
            for (t, &b) in binom.iter().enumerate() {
                if (t + carry) % 3 == d {
                    next[(t + carry) / 3] = (next[(t + carry) / 3] + w * b) % 27;
                }
            }
        }
        ways = next;
    }
    ways[0]
}

#[test]
fn carry_count_agrees_with_series() {
    let series = psi_power_series(5, 729);
    for (n, &c) in series.iter().enumerate() {
        assert_eq!(carry_count(5, &TritString::from(n as u64)), c);
    }
}

proptest! {
    #[test]
    fn long_indices_match_carry_count(digits in proptest::collection::vec(0u8..3, 0..60), ones in proptest::collection::vec(0u8..2, 0..60)) {
        // mostly 0/1 strings with a few 2s, where the rules have the most structure
        let lsb: Vec<u8> = digits.iter().zip(ones.iter().chain(std::iter::repeat(&1))).map(|(&d, &o)| if d == 2 && o == 1 { 2 } else { d.min(1) }).collect();
        let s = TritString::from_digits_lsb(lsb);
        for k in [3u32, 5] {
            let c = carry_count(k as usize, &s);
            prop_assert_eq!(psi_power_coeff(k, 3, &s).unwrap().value(), c, "Psi^{} at {}", k, s);
            prop_assert_eq!(psi_power_coeff(k, 2, &s).unwrap().value(), c % 9);
            if k == 3 {
                prop_assert_eq!(psi3_coeff_by_terms(&s, 3).unwrap().value(), c);
            }
        }
    }
}

// one sample per clause family, most significant trit first
#[test]
fn golden_clauses() {
    let cases: &[(u32, u32, &str, u64)] = &[
        (3, 2, "0", 1),
        (3, 2, "1010", 1),
        (3, 2, "100", 7),
        (3, 2, "10", 4),
        (3, 2, "10100", 4),
        (3, 2, "1010110", 7),
        (3, 2, "1100", 7),
        (3, 2, "1101", 3),
        (3, 2, "1102", 3),
        (3, 2, "1021", 0),
        (3, 2, "2010", 6),
        (3, 3, "0", 1),
        (3, 3, "2", 3),
        (3, 3, "202", 18),
        (3, 3, "1012", 9),
        (3, 3, "20201", 0),
        (3, 3, "110", 13),
        (3, 3, "10110", 1),
        (5, 2, "1", 5),
        (5, 2, "101", 8),
        (5, 2, "2", 1),
        (5, 2, "201", 6),
        (5, 2, "200", 3),
        (5, 2, "11", 3),
        (5, 2, "10000", 4),
        (5, 2, "10200", 3),
        (5, 3, "2", 10),
        (5, 3, "201", 15),
        (5, 3, "11", 3),
        (5, 3, "1000", 4),
        (5, 3, "10201", 24),
        (5, 3, "1100201", 6),
        (5, 3, "121", 0),
        (5, 3, "1011", 12),
        (5, 3, "10101", 14),
    ];
    for &(p, e, s, want) in cases {
        assert_eq!(
            psi_power_coeff(p, e, ts(s)).unwrap().value(),
            want,
            "Psi^{p} mod 3^{e} at {s}"
        );
    }
}
