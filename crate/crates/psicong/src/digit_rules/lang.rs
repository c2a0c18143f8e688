//! Rule tables: each residue class is a union of clauses, a clause being a
//! regular language over the most-significant-first trit string plus an
//! optional congruence on string statistics.

use regex::Regex;

use super::trits::{Stat, TritString};

/// Leading zeros prepended before matching. Enough for every table: the
/// longest all-zero prefix any clause can demand is three trits.
const PAD: &str = "0000";

#[derive(Clone, Copy, Debug)]
pub(crate) enum Rep {
    /// k >= 0 with k = a mod 3
    Mod(u8),
    /// k >= 1 with k = a mod 3
    Pos(u8),
    Any,
}

/// `block` repeated k times, k constrained by `r`.
pub(crate) fn rep(block: &str, r: Rep) -> String {
    match r {
        Rep::Mod(a) => format!("(?:(?:{block}){{3}})*(?:{block}){{{a}}}"),
        Rep::Pos(0) => format!("(?:(?:{block}){{3}})+"),
        Rep::Pos(a) => rep(block, Rep::Mod(a)),
        Rep::Any => format!("(?:{block})*"),
    }
}

/// `runs = r (mod 3)` and `(coef*runs + konst)/3 + sum terms = target (mod 3)`.
/// Without `runs` the fraction is just `konst/3`.
#[derive(Clone, Debug)]
pub(crate) struct Cond {
    pub runs: Option<(Stat, i64)>,
    pub coef: i64,
    pub konst: i64,
    pub terms: Vec<(Stat, i64)>,
    pub target: i64,
}

impl Cond {
    fn holds(&self, s: &TritString) -> bool {
        let r = match self.runs {
            Some((st, want)) => {
                let r = st.eval(s);
                if r.rem_euclid(3) != want {
                    return false;
                }
                r
            }
            None => 0,
        };
        let num = self.coef * r + self.konst;
        debug_assert_eq!(num.rem_euclid(3), 0);
        let v = num.div_euclid(3)
            + self
                .terms
                .iter()
                .map(|&(st, c)| c * st.eval(s))
                .sum::<i64>();
        v.rem_euclid(3) == self.target
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Clause {
    re: Regex,
    pub cond: Option<Cond>,
}

impl Clause {
    pub fn new(pattern: &str, cond: Option<Cond>) -> Self {
        let re = Regex::new(&format!("^0*(?:{pattern})$"))
            .unwrap_or_else(|e| panic!("bad clause {pattern}: {e}"));
        Clause { re, cond }
    }

    pub fn plain(pattern: &str) -> Self {
        Clause::new(pattern, None)
    }

    pub fn matches_padded(&self, padded: &str, s: &TritString) -> bool {
        self.re.is_match(padded) && self.cond.as_ref().is_none_or(|c| c.holds(s))
    }

    #[cfg(test)]
    pub fn matches(&self, s: &TritString) -> bool {
        self.matches_padded(&padded(s), s)
    }
}

pub(crate) fn padded(s: &TritString) -> String {
    format!("{PAD}{}", s.to_msb_string())
}

/// Residue classes in table order; anything unmatched is 0.
#[derive(Clone, Debug)]
pub(crate) struct Table {
    pub classes: Vec<(u64, Vec<Clause>)>,
}

impl Table {
    pub fn classify(&self, s: &TritString) -> u64 {
        let p = padded(s);
        self.classes
            .iter()
            .find(|(_, cl)| cl.iter().any(|c| c.matches_padded(&p, s)))
            .map(|(r, _)| *r)
            .unwrap_or(0)
    }

    /// Every class with a matching clause; more than one entry means the
    /// printed case lists overlap at `s`.
    pub fn all_matches(&self, s: &TritString) -> Vec<u64> {
        let p = padded(s);
        self.classes
            .iter()
            .filter(|(_, cl)| cl.iter().any(|c| c.matches_padded(&p, s)))
            .map(|(r, _)| *r)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repetition_counts() {
        let re = Regex::new(&format!("^{}$", rep("0+1+", Rep::Mod(2)))).unwrap();
        assert!(re.is_match("0101"));
        assert!(!re.is_match("010101"));
        assert!(re.is_match("0101010101"));
        let re = Regex::new(&format!("^{}$", rep("0+1+", Rep::Pos(0)))).unwrap();
        assert!(!re.is_match(""));
        assert!(!re.is_match("001011"));
        assert!(re.is_match("001011001"));
    }

    #[test]
    fn padding_supplies_leading_zeros() {
        let c = Clause::plain("0201");
        assert!(c.matches(&"201".parse().unwrap()));
        assert!(!c.matches(&"1201".parse().unwrap()));
        assert!(Clause::plain("0").matches(&TritString::from(0u64)));
    }
}
