//! Free subgroup numbers f_lambda (m = 1) modulo 3, 9 and the class 1 mod 27.

use std::sync::OnceLock;

use super::lang::{rep, Clause, Cond, Rep, Table};
use super::trits::{Stat, Stat::*, TritString};

/// (00*22*)
const F: &str = "0+2+";
/// (22*00*)
const G: &str = "2+0+";

use Rep::{Mod, Pos};

fn f(r: Rep) -> String {
    rep(F, r)
}

fn g(r: Rep) -> String {
    rep(G, r)
}

fn plain(pats: &[String]) -> Vec<Clause> {
    pats.iter().map(|p| Clause::plain(p)).collect()
}

pub(crate) fn free_mod3() -> &'static Table {
    static T: OnceLock<Table> = OnceLock::new();
    T.get_or_init(|| Table {
        classes: vec![
            (2, plain(&["[02]*1".into()])),
            (1, plain(&["[02]*10+".into(), "[02]*12+".into()])),
        ],
    })
}

/// The pattern part of the mod-9 rule. The lambda mod 4 clauses of the
/// classes 3 and 6 are applied by the caller.
pub(crate) fn free_mod9() -> &'static Table {
    static T: OnceLock<Table> = OnceLock::new();
    T.get_or_init(|| Table {
        classes: vec![
            (
                1,
                plain(&[
                    "0".into(),
                    f(Mod(0)) + "0*10*00",
                    f(Mod(2)) + "0*10",
                    g(Mod(2)) + "2*12",
                    g(Mod(0)) + "2*12*22",
                ]),
            ),
            (
                4,
                plain(&[
                    f(Mod(2)) + "0*10*00",
                    f(Mod(1)) + "0*10",
                    g(Mod(1)) + "2*12",
                    g(Mod(2)) + "2*12*22",
                ]),
            ),
            (
                7,
                plain(&[
                    "10".into(),
                    f(Mod(1)) + "0*10*00",
                    f(Mod(0)) + "0*10",
                    g(Mod(0)) + "2*12",
                    g(Mod(1)) + "2*12*22",
                ]),
            ),
            (2, plain(&[f(Mod(2)) + "0*01", f(Mod(1)) + "1"])),
            (5, plain(&[f(Mod(0)) + "0*01", f(Mod(2)) + "1"])),
            (8, plain(&[f(Mod(1)) + "0*01", f(Pos(0)) + "1"])),
            (3, plain(&["[02]*11[02]*1".into()])),
            (
                6,
                plain(&[
                    "[02]*102+".into(),
                    "[02]*120+".into(),
                    "[02]*11[02]*10+".into(),
                    "[02]*11[02]*12+".into(),
                ]),
            ),
        ],
    })
}

pub fn free_mod9_class(s: &TritString) -> u64 {
    match s.mod4() {
        0 => 3,
        2 => 6,
        _ => free_mod9().classify(s),
    }
}

/// Which run statistic the `{0,2}*2212` clause of the class-1 rule uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Free27Reading {
    /// maximal runs of 1s
    AsPrinted,
    /// maximal runs of 2s, like every neighbouring clause
    #[default]
    RunsOfTwos,
}

fn free27_clauses(reading: Free27Reading) -> Vec<Clause> {
    let base = [(Iso3Of02, -1), (Occ("022"), 1), (Occ("200"), 1)];
    let with = |extra: &[(Stat, i64)]| {
        let mut t = base.to_vec();
        t.extend_from_slice(extra);
        t
    };
    let c = |pat: &str, runs: Stat, r: i64, konst: i64, extra: &[(Stat, i64)], target: i64| {
        Clause::new(
            pat,
            Some(Cond {
                runs: Some((runs, r)),
                coef: 2,
                konst,
                terms: with(extra),
                target,
            }),
        )
    };
    let minus201 = [(Occ("201"), -1)];
    let minus21 = [(Occ("21"), -1), (Occ("201"), -1)];
    let minus021 = [(Occ("021"), -1)];
    let runs_2212 = match reading {
        Free27Reading::AsPrinted => Runs1,
        Free27Reading::RunsOfTwos => Runs2,
    };
    vec![
        c("[02]*0100", Runs2, 0, 0, &minus201, 0),
        c("[02]*2100", Runs2, 0, 0, &[], 1),
        c("[02]*10*0000", Runs2, 0, 0, &minus21, 2),
        c("[02]*1000", Runs2, 0, 0, &minus21, 2),
        c("[02]*2210", Runs2, 2, -1, &[], 0),
        c("[02]*0210", Runs2, 2, -1, &[], 1),
        c("[02]*2010", Runs2, 2, -1, &[], 2),
        c("[02]*0010", Runs2, 2, -1, &[], 0),
        c("[02]*0012", Runs2, 0, -3, &[], 0),
        c("[02]*0212", Runs2, 1, -2, &[], 0),
        c("[02]*2012", Runs2, 0, -3, &[], 1),
        c("[02]*2212", runs_2212, 1, -2, &[], 1),
        c("[02]*0122", Runs2, 1, -2, &[], 0),
        c("[02]*2122", Runs2, 2, -4, &minus021, 2),
        c("[02]*01222", Runs2, 1, -2, &[], 2),
        c("[02]*21222", Runs2, 2, -1, &minus021, 2),
        c("[02]*012*2222", Runs2, 1, -2, &[], 2),
        c("[02]*212*2222", Runs2, 2, -1, &minus021, 2),
    ]
}

pub(crate) fn free27_table(reading: Free27Reading) -> &'static [Clause] {
    static PRINTED: OnceLock<Vec<Clause>> = OnceLock::new();
    static TWOS: OnceLock<Vec<Clause>> = OnceLock::new();
    match reading {
        Free27Reading::AsPrinted => PRINTED.get_or_init(|| free27_clauses(reading)),
        Free27Reading::RunsOfTwos => TWOS.get_or_init(|| free27_clauses(reading)),
    }
}
