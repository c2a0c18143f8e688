//! Coefficients of Psi^3 and Psi^5 modulo 9 and 27.

use std::sync::OnceLock;

use super::lang::{rep, Clause, Cond, Rep, Table};
use super::trits::Stat::{self, *};

/// (00*11*)
const A: &str = "0+1+";
/// (11*00*)
const B: &str = "1+0+";

fn a(r: Rep) -> String {
    rep(A, r)
}

fn b(r: Rep) -> String {
    rep(B, r)
}

fn cond(
    runs: Stat,
    runs_mod: i64,
    coef: i64,
    konst: i64,
    terms: &[(Stat, i64)],
    target: i64,
) -> Option<Cond> {
    Some(Cond {
        runs: Some((runs, runs_mod)),
        coef,
        konst,
        terms: terms.to_vec(),
        target,
    })
}

fn plain(pats: &[String]) -> Vec<Clause> {
    pats.iter().map(|p| Clause::plain(p)).collect()
}

use Rep::{Any, Mod, Pos};

pub(crate) fn psi3_mod9() -> &'static Table {
    static T: OnceLock<Table> = OnceLock::new();
    T.get_or_init(|| Table {
        classes: vec![
            (1, plain(&["0".into(), a(Mod(2)) + "0", a(Mod(0)) + "0*00"])),
            (4, plain(&[a(Mod(1)) + "0", a(Mod(2)) + "0*00"])),
            (7, plain(&[a(Pos(0)) + "0", a(Mod(1)) + "0*00"])),
            (3, plain(&["[01]*01".into(), "[01]*02".into()])),
            (6, plain(&["[01]*02[01]*0".into()])),
        ],
    })
}

pub(crate) fn psi3_mod27() -> &'static Table {
    static T: OnceLock<Table> = OnceLock::new();
    T.get_or_init(|| {
        let s = [(Iso2, -1), (Occ("011"), 1), (Occ1("100"), 1)];
        let pair = |(e10, k10, t10): (i64, i64, i64), (e00, k00, t00): (i64, i64, i64)| {
            vec![
                Clause::new("[01]*10", cond(Runs1, e10, 2, k10, &s, t10)),
                Clause::new("[01]*00", cond(Runs1, e00, 2, k00, &s, t00)),
            ]
        };
        let d = [
            (Occ("020"), 1),
            (Occ("021"), 1),
            (Occ("102"), 1),
            (Occ("01"), -1),
            (Occ("10"), -1),
        ];
        let sixes = |t00: i64, t10: i64, t020: i64| {
            let c = |konst, target| {
                Some(Cond {
                    runs: None,
                    coef: 0,
                    konst,
                    terms: d.to_vec(),
                    target,
                })
            };
            vec![
                Clause::new("[01]*02[01]*00", c(0, t00)),
                Clause::new("[01]*02[01]*10", c(0, t10)),
                Clause::new("[01]*020", c(-3, t020)),
            ]
        };
        Table {
            classes: vec![
                (1, pair((2, -1, 0), (0, 0, 0))),
                (4, pair((1, -2, 0), (2, -1, 0))),
                (7, pair((0, -3, 2), (1, -2, 2))),
                (10, pair((2, -1, 1), (0, 0, 1))),
                (13, pair((1, -2, 1), (2, -1, 1))),
                (16, pair((0, -3, 0), (1, -2, 0))),
                (19, pair((2, -1, 2), (0, 0, 2))),
                (22, pair((1, -2, 2), (2, -1, 2))),
                (25, pair((0, -3, 1), (1, -2, 1))),
                (
                    9,
                    plain(&["[01]*02[01]*02[01]*0".into(), "[01]*0[12][12]".into()]),
                ),
                (
                    18,
                    plain(&["[01]*02[01]*0[12]".into(), "[01]*0[12]2[01]*0".into()]),
                ),
                (
                    3,
                    plain(&[
                        b(Mod(1)) + "1+0[12]",
                        b(Mod(2)) + "1+0*00[12]",
                        "[12]".into(),
                    ]),
                ),
                (
                    12,
                    plain(&[b(Mod(0)) + "1+0[12]", b(Mod(1)) + "1+0*00[12]"]),
                ),
                (
                    21,
                    plain(&[b(Mod(2)) + "1+0[12]", b(Mod(0)) + "1+0*00[12]"]),
                ),
                (6, sixes(0, 2, 0)),
                (15, sixes(1, 0, 1)),
                (24, sixes(2, 1, 2)),
            ],
        }
    })
}

/// The eight two-block clause shapes shared by the 0 mod 3 classes of Psi^5:
/// (11*00*)^k1 [11*] 02[00*] (11*00*)^k2 [11*] tail, with k1 + k2
/// constrained mod 3 (`None` leaves them free). A bare 02 with no 1-run
/// after it needs k2 > 0 once k is constrained; k2 = 0 is a separate clause.
fn two_block(tail: &str, sums: Option<[u8; 8]>) -> Vec<String> {
    // (mid, 1-run before mid, 1-run before tail, k2 > 0)
    const SHAPES: [(&str, bool, bool, bool); 8] = [
        ("020+", false, false, false),
        ("020+", true, false, false),
        ("02", false, false, true),
        ("02", true, false, true),
        ("020+", false, true, false),
        ("020+", true, true, false),
        ("02", false, true, false),
        ("02", true, true, false),
    ];
    let mut out = Vec::new();
    for (i, &(mid, lead, trail, k2pos)) in SHAPES.iter().enumerate() {
        let lead = if lead { "1+" } else { "" };
        let trail = if trail { "1+" } else { "" };
        match sums {
            None => out.push(format!("{}{lead}{mid}{}{trail}{tail}", b(Any), b(Any))),
            Some(r) => {
                for k1 in 0..3u8 {
                    let k2 = (r[i] + 3 - k1) % 3;
                    let k2 = if k2pos { b(Pos(k2)) } else { b(Mod(k2)) };
                    out.push(format!("{}{lead}{mid}{k2}{trail}{tail}", b(Mod(k1))));
                }
            }
        }
    }
    out
}

pub(crate) fn psi5_mod9() -> &'static Table {
    static T: OnceLock<Table> = OnceLock::new();
    T.get_or_init(|| {
        let mut six = vec![b(Any) + "0201"];
        six.extend(two_block("01", None));
        six.push(b(Any) + "0[12][02]");
        six.push(b(Any) + "1+0[12][02]");
        let mut three = vec![b(Any) + "020[02]"];
        three.extend(two_block("0[02]", None));
        three.push(b(Any) + "0[12]1");
        three.push(b(Any) + "1+0[12]1");
        Table {
            classes: vec![
                (
                    1,
                    plain(&["0".into(), a(Mod(0)) + "0*00[02]", a(Mod(2)) + "0[02]"]),
                ),
                (4, plain(&[a(Mod(1)) + "0*00[02]", a(Pos(0)) + "0[02]"])),
                (7, plain(&[a(Mod(2)) + "0*00[02]", a(Mod(1)) + "0[02]"])),
                (2, plain(&[a(Mod(1)) + "0*001", a(Pos(0)) + "01"])),
                (5, plain(&[a(Mod(0)) + "0*001", a(Mod(2)) + "01"])),
                (8, plain(&[a(Mod(2)) + "0*001", a(Mod(1)) + "01"])),
                (6, plain(&six)),
                (3, plain(&three)),
            ],
        }
    })
}

/// Strings in {0,1}* followed by one of four endings. With E the number of
/// 1-runs and r = E mod 3, the class is `base[r] + 9 t` where
/// `sign (4E - r)/3 + terms = t - shift[r] (mod 3)`.
struct Unit {
    pattern: &'static str,
    sign: i64,
    terms: &'static [(Stat, i64)],
    base: [u64; 3],
    shift: [i64; 3],
}

const UNITS: [Unit; 4] = [
    Unit {
        pattern: "[01]*00[02]",
        sign: 1,
        terms: &[(Iso1, 1), (End("0000"), 2), (End("1002"), 1)],
        base: [1, 4, 7],
        shift: [1, 1, 2],
    },
    Unit {
        pattern: "[01]*10[02]",
        sign: 1,
        terms: &[(Iso1, 2), (Iso2, 2)],
        base: [4, 7, 1],
        shift: [0, 1, 1],
    },
    Unit {
        pattern: "[01]*001",
        sign: -1,
        terms: &[(Iso1, -1), (End("0001"), 1)],
        base: [8, 5, 2],
        shift: [0, 0, 2],
    },
    Unit {
        pattern: "[01]*101",
        sign: -1,
        terms: &[(Iso1, -1)],
        base: [5, 2, 8],
        shift: [0, 2, 2],
    },
];

pub(crate) fn psi5_mod27() -> &'static Table {
    static T: OnceLock<Table> = OnceLock::new();
    T.get_or_init(|| {
        let mut classes: Vec<(u64, Vec<Clause>)> = Vec::new();
        for u in &UNITS {
            for r in 0..3 {
                for t in 0..3 {
                    let target = (t - u.shift[r as usize]).rem_euclid(3);
                    let c = Clause::new(
                        u.pattern,
                        cond(Runs1, r, 4 * u.sign, -r * u.sign, u.terms, target),
                    );
                    classes.push((u.base[r as usize] + 9 * t as u64, vec![c]));
                }
            }
        }
        // 0 mod 3 classes: the single-block clauses with and without a
        // 1-run before `lead`, the two-block family and the short tails, each
        // with its k constraint
        let zero = |lead: &str,
                    single: [u8; 2],
                    sums: [u8; 8],
                    tails: &[(&str, u8)],
                    ltails: &[(&str, u8)]| {
            let mut v = vec![b(Mod(single[0])) + lead, b(Mod(single[1])) + "1+" + lead];
            v.extend(two_block(
                if lead == "0201" { "01" } else { "0[02]" },
                Some(sums),
            ));
            v.extend(tails.iter().map(|&(t, k)| b(Mod(k)) + t));
            v.extend(ltails.iter().map(|&(t, k)| b(Mod(k)) + "1+" + t));
            plain(&v)
        };
        classes.extend([
            (
                9,
                plain(&[
                    "[01]*0(?:11|22)1".into(),
                    "[01]*0[12]2[01]*01".into(),
                    "[01]*02[01]*0[12]1".into(),
                    "[01]*02[01]*02[01]*0[02]".into(),
                ]),
            ),
            (
                18,
                plain(&[
                    "[01]*0(?:11|22)[02]".into(),
                    "[01]*0[12]2[01]*0[02]".into(),
                    "[01]*02[01]*0[12][02]".into(),
                    "[01]*02[01]*02[01]*01".into(),
                ]),
            ),
            (
                6,
                zero(
                    "0201",
                    [1, 2],
                    [1, 2, 0, 1, 2, 0, 1, 2],
                    &[("010", 1), ("012", 2), ("020", 0), ("022", 2)],
                    &[("010", 0), ("012", 1), ("020", 0), ("022", 2)],
                ),
            ),
            (
                15,
                zero(
                    "0201",
                    [0, 1],
                    [0, 1, 2, 0, 1, 2, 0, 1],
                    &[("010", 0), ("012", 1), ("020", 2), ("022", 1)],
                    &[("010", 2), ("012", 0), ("020", 2), ("022", 1)],
                ),
            ),
            (
                24,
                zero(
                    "0201",
                    [2, 0],
                    [2, 0, 1, 2, 0, 1, 2, 0],
                    &[("010", 2), ("012", 0), ("020", 1), ("022", 0)],
                    &[("010", 1), ("012", 2), ("020", 1), ("022", 0)],
                ),
            ),
            (
                3,
                zero(
                    "020[02]",
                    [0, 1],
                    [0, 1, 2, 0, 1, 2, 0, 1],
                    &[("011", 0), ("021", 1)],
                    &[("011", 2), ("021", 1)],
                ),
            ),
            (
                12,
                zero(
                    "020[02]",
                    [1, 2],
                    [1, 2, 0, 1, 2, 0, 1, 2],
                    &[("011", 1), ("021", 2)],
                    &[("011", 0), ("021", 2)],
                ),
            ),
            (
                21,
                zero(
                    "020[02]",
                    [2, 0],
                    [2, 0, 1, 2, 0, 1, 2, 0],
                    &[("011", 2), ("021", 0)],
                    &[("011", 1), ("021", 0)],
                ),
            ),
        ]);
        Table { classes }
    })
}
