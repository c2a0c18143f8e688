//! Congruence classes read directly off the base-3 expansion of the index.
//! Every rule runs in one pass over the trits (the term-by-term Psi^3
//! evaluator is the exception: it loops over index pairs and exists as an
//! independent cross-check).

mod expansion;
mod free;
mod lang;
mod psi;
mod trits;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring3::Residue;

pub use free::Free27Reading;
pub use trits::{digit_stats, DigitStats, TritString};

/// (power, mod_exp) pairs with a digit table; power 1 works for any modulus.
pub const TABULATED: [(u32, u32); 4] = [(3, 2), (3, 3), (5, 2), (5, 3)];

fn table(power: u32, mod_exp: u32) -> Result<&'static lang::Table> {
    match (power, mod_exp) {
        (3, 2) => Ok(psi::psi3_mod9()),
        (3, 3) => Ok(psi::psi3_mod27()),
        (5, 2) => Ok(psi::psi5_mod9()),
        (5, 3) => Ok(psi::psi5_mod27()),
        _ => Err(Error::Untabulated { power, e: mod_exp }),
    }
}

/// [z^n] Psi(z)^power mod 3^mod_exp.
pub fn psi_power_coeff(power: u32, mod_exp: u32, n: impl Into<TritString>) -> Result<Residue> {
    let s = n.into();
    if power == 1 && mod_exp >= 1 {
        return Ok(Residue::new((s.count(2) == 0) as i64, mod_exp));
    }
    Ok(Residue::from_raw(
        table(power, mod_exp)?.classify(&s),
        mod_exp,
    ))
}

/// All classes whose printed case list contains n. A well-formed table
/// gives at most one.
pub fn psi_power_candidates(
    power: u32,
    mod_exp: u32,
    n: impl Into<TritString>,
) -> Result<Vec<u64>> {
    Ok(table(power, mod_exp)?.all_matches(&n.into()))
}

/// [z^n] Psi(z)^3 mod 3^mod_exp (mod_exp <= 3), summed term by term from
/// the single and double sums of the mod-27 expansion.
pub fn psi3_coeff_by_terms(n: impl Into<TritString>, mod_exp: u32) -> Result<Residue> {
    if !(1..=3).contains(&mod_exp) {
        return Err(Error::Untabulated {
            power: 3,
            e: mod_exp,
        });
    }
    let v = expansion::psi3_mod27_by_terms(&n.into());
    Ok(Residue::from_raw(v, 3).reduce(mod_exp))
}

/// f_lambda mod 3 (mod_exp 1) or mod 9 (mod_exp 2).
pub fn free_class(lambda: impl Into<TritString>, mod_exp: u32) -> Result<Residue> {
    let s = lambda.into();
    if s.is_empty() {
        return Err(Error::NoDigitRule(
            "free subgroup numbers at lambda = 0".into(),
        ));
    }
    match mod_exp {
        1 => Ok(Residue::from_raw(free::free_mod3().classify(&s), 1)),
        2 => Ok(Residue::from_raw(free::free_mod9_class(&s), 2)),
        _ => Err(Error::NoDigitRule(format!(
            "free subgroup numbers mod 3^{mod_exp}"
        ))),
    }
}

/// Whether f_lambda = 1 mod 27.
pub fn free27_is_one(lambda: impl Into<TritString>) -> bool {
    free27_is_one_with(lambda, Free27Reading::default())
}

pub fn free27_is_one_with(lambda: impl Into<TritString>, reading: Free27Reading) -> bool {
    let s = lambda.into();
    let p = lang::padded(&s);
    !s.is_empty()
        && free::free27_table(reading)
            .iter()
            .any(|c| c.matches_padded(&p, &s))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AperyKind {
    Zeta2,
    Zeta3,
}

impl std::str::FromStr for AperyKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zeta2" | "apery2" | "apery_zeta2" => Ok(AperyKind::Zeta2),
            "zeta3" | "apery3" | "apery_zeta3" => Ok(AperyKind::Zeta3),
            _ => Err(Error::Parse(format!("unknown Apery kind {s:?}"))),
        }
    }
}

/// Conjectured class of the Apery number mod 9. Unproved, so callers
/// comparing against exact values should report disagreements, not abort.
pub fn apery_class(kind: AperyKind, n: impl Into<TritString>) -> Residue {
    let s = n.into();
    let ones = s.count(1);
    let v = match kind {
        AperyKind::Zeta2 => match ones {
            0 => 1,
            1 if s.occurrences("01") == 1 => 3,
            1 if s.occurrences("21") == 1 => 6,
            _ => 0,
        },
        AperyKind::Zeta3 => match ones % 6 {
            0 => 1,
            5 => 2,
            4 => 4,
            1 => 5,
            2 => 7,
            _ => 8,
        },
    };
    Residue::from_raw(v, 2)
}

#[cfg(test)]
mod tests;
