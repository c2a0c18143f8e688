//! Psi^3 mod 27 assembled term by term: the constant part Psi(z^3), 3 times
//! the single sums over k1 and 9 times the double sums over k1 > k2, each
//! summand read off from its fixed-width digit pattern.

use super::trits::TritString;

/// A fixed-width piece of a pattern, most significant first.
#[derive(Clone, Copy)]
enum Piece<'a> {
    OneOf(&'a [&'a str]),
    /// a run of this many trits from {0,1}
    Free(usize),
}

use Piece::{Free, OneOf};

/// Matches `{0,1}* p_1 p_2 ... p_r` against the padded string.
fn matches(s: &TritString, pieces: &[Piece]) -> bool {
    let mut pos = 0usize;
    for piece in pieces.iter().rev() {
        match *piece {
            OneOf(alts) => {
                let w = alts[0].len();
                let hit = alts.iter().any(|a| {
                    a.bytes()
                        .rev()
                        .enumerate()
                        .all(|(j, b)| s.digit(pos + j) == b - b'0')
                });
                if !hit {
                    return false;
                }
                pos += w;
            }
            Free(w) => {
                if (pos..pos + w).any(|i| s.digit(i) > 1) {
                    return false;
                }
                pos += w;
            }
        }
    }
    (pos..s.len()).all(|i| s.digit(i) <= 1)
}

const X0110: &[&str] = &["01", "10"];
const X0102: &[&str] = &["01", "02"];
const X02: &[&str] = &["02"];
const X0: &[&str] = &["0"];

/// Coefficient of Psi(z) z^{3^k1}(1+z^{3^k1}) / ((1+z)(1+z^{3^{k1+1}})).
fn single(s: &TritString, k1: usize) -> i64 {
    if k1 == 0 {
        return matches(s, &[OneOf(X0102)]) as i64;
    }
    if matches(s, &[OneOf(X0110), Free(k1 - 1), OneOf(X0)]) {
        1
    } else if matches(s, &[OneOf(X02), Free(k1 - 1), OneOf(X0)]) {
        2
    } else {
        0
    }
}

/// Coefficient of the k1 > k2 summand.
fn double(s: &TritString, k1: usize, k2: usize) -> i64 {
    if k1 == k2 + 1 {
        if k2 == 0 {
            return matches(s, &[OneOf(&["011", "012", "021", "022"])]) as i64;
        }
        let tail = [Free(k2 - 1), OneOf(X0)];
        if matches(
            s,
            &[&[OneOf(&["011", "020", "021", "100"])][..], &tail].concat(),
        ) {
            return 1;
        }
        if matches(s, &[&[OneOf(&["012", "022"])][..], &tail].concat()) {
            return 2;
        }
        return 0;
    }
    if k2 == 0 {
        let gap = Free(k1 - 2);
        if matches(s, &[OneOf(X0110), gap, OneOf(X0102)]) {
            return 1;
        }
        if matches(s, &[OneOf(X02), gap, OneOf(X0102)]) {
            return 2;
        }
        return 0;
    }
    let gap = Free(k1 - k2 - 2);
    let tail = [Free(k2 - 1), OneOf(X0)];
    let shape = |x: &'static [&'static str], y: &'static [&'static str]| {
        let p: Vec<Piece> = [&[OneOf(x), gap, OneOf(y)][..], &tail].concat();
        matches(s, &p)
    };
    if shape(X0110, X0110) {
        1
    } else if shape(X02, X0110) || shape(X0110, X02) {
        2
    } else if shape(X02, X02) {
        4
    } else {
        0
    }
}

/// [z^n] Psi^3 mod 27.
pub(crate) fn psi3_mod27_by_terms(s: &TritString) -> u64 {
    // Psi(z)/(1+z) = Psi(z^3)
    let mut acc = matches(s, &[OneOf(X0)]) as i64;
    // summands with 3^k1 > n vanish
    let top = s.len() + 1;
    for k1 in 0..top {
        acc += 3 * single(s, k1);
        for k2 in 0..k1 {
            acc += 9 * double(s, k1, k2);
        }
    }
    acc.rem_euclid(27) as u64
}
