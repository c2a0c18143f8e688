//! Acceptance sweep: one PASS/FAIL line per criterion, details underneath.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use psicong::digit_rules::{free27_is_one_with, Free27Reading};
use psicong::h_series::psi_power_series_via_h;
use psicong::sequences::{
    self, apery0_equation, apery2_by_recurrence, apery3_by_recurrence, catalan_squared_equation,
    euler_kernel, free_subgroup_numbers, oracle_terms, stored_fixture, EulerianKind,
};
use psicong::{
    apery_class, check_minpoly, free27_is_one, free_class, h_tilde_series, min_degree_bound,
    psi_power_coeff, reduce_h, unique_series_solution, AperyKind, Error, HIndex, MinPolyFixture,
    PsiPoly, Residue, SequenceId, TruncSeries,
};

struct Report {
    ok: bool,
    details: Vec<String>,
}

impl Report {
    fn new() -> Self {
        Report {
            ok: true,
            details: Vec::new(),
        }
    }

    fn check(&mut self, cond: bool, what: impl Into<String>) {
        if !cond {
            self.ok = false;
            self.details.push(format!("failed: {}", what.into()));
        }
    }

    fn note(&mut self, what: impl Into<String>) {
        self.details.push(what.into());
    }
}

fn first_diff(p: &PsiPoly, oracle: &TruncSeries, e: u32, terms: i64) -> Option<i64> {
    p.to_series(terms - 1)
        .reduce(e)
        .first_difference(oracle, terms - 1)
}

/// Derived, printed and brute-force series agree below `terms`.
fn triple(r: &mut Report, id: SequenceId, e: u32, terms: i64) {
    let oracle = oracle_terms(id, terms as usize, e);
    match sequences::derive(id, e, 1) {
        Ok(d) => {
            let m = first_diff(&d, &oracle, e, terms);
            r.check(
                m.is_none(),
                format!(
                    "{id} mod {}: derived differs from oracle at n={m:?}",
                    3u64.pow(e)
                ),
            );
        }
        Err(err) => r.check(false, format!("{id} mod {}: {err}", 3u64.pow(e))),
    }
    match stored_fixture(id, e) {
        Ok(f) => {
            let m = first_diff(&f, &oracle, e, terms);
            r.check(
                m.is_none(),
                format!(
                    "{id} mod {}: printed form differs from oracle at n={m:?}",
                    3u64.pow(e)
                ),
            );
        }
        Err(err) => r.check(false, format!("{id} mod {}: {err}", 3u64.pow(e))),
    }
}

fn criterion1() -> Report {
    use SequenceId::*;
    let mut r = Report::new();
    let ids = [
        AlmostCentralBinomial,
        Motzkin,
        MotzkinPrefix,
        Riordan,
        CentralTrinomial,
        CentralBinomial,
        CentralBinomialSums,
        Catalan,
        Delannoy,
        Schroeder,
        HexTree,
        FreeSubgroups(1),
        EulerianEven,
        EulerianOdd,
    ];
    let start = Instant::now();
    for id in ids {
        triple(&mut r, id, 3, 729);
    }
    r.check(
        start.elapsed() < Duration::from_secs(120),
        "runtime over 2 minutes",
    );
    r
}

fn criterion2() -> Report {
    use SequenceId::*;
    let mut r = Report::new();
    let ids = [
        Motzkin,
        MotzkinPrefix,
        Riordan,
        CentralTrinomial,
        CentralBinomial,
        CentralBinomialSums,
        Catalan,
        Delannoy,
        Schroeder,
        HexTree,
        FreeSubgroups(1),
        FreeSubgroups(2),
        FreeSubgroups(4),
        FreeSubgroups(5),
        EulerianEven,
        EulerianOdd,
    ];
    for id in ids {
        triple(&mut r, id, 2, 729);
    }
    r
}

/// Psi^k mod 27 below `len`, from the definition: the monomials of Psi are
/// the exponents with no trit equal to 2.
fn psi_power_oracle(k: u32, len: usize) -> Vec<u64> {
    let support: Vec<usize> = (0..len)
        .filter(|&i| {
            let mut n = i;
            while n > 0 {
                if n % 3 == 2 {
                    return false;
                }
                n /= 3;
            }
            true
        })
        .collect();
    let mut acc = vec![0u64; len];
    acc[0] = 1;
    for _ in 0..k {
        let mut next = vec![0u64; len];
        for (i, &a) in acc.iter().enumerate().filter(|(_, &a)| a != 0) {
            for &j in support.iter().take_while(|&&j| i + j < len) {
                next[i + j] = (next[i + j] + a) % 27;
            }
        }
        acc = next;
    }
    acc
}

fn criterion3() -> Report {
    let mut r = Report::new();
    let start = Instant::now();
    let len9 = 3usize.pow(9);
    let len8 = 3usize.pow(8);
    for k in [3u32, 5] {
        let series = psi_power_oracle(k, len9);
        for (e, len) in [(2u32, len9), (3, len8)] {
            let m = 3u64.pow(e);
            let got = psicong::par::map_range(0..len as u64, |n| {
                psi_power_coeff(k, e, n).map(|x| x.value())
            });
            let bad: Vec<u64> = (0..len)
                .filter(|&n| got[n].as_ref().ok() != Some(&(series[n] % m)))
                .map(|n| n as u64)
                .take(5)
                .collect();
            r.check(
                bad.is_empty(),
                format!("Psi^{k} mod {m}: first mismatches at {bad:?}"),
            );
        }
    }
    r.check(
        start.elapsed() < Duration::from_secs(60),
        "runtime over 1 minute",
    );
    r
}

fn criterion4() -> Report {
    let mut r = Report::new();
    let n = 5001;
    let f3 = free_subgroup_numbers(1, n, 1);
    let f9 = free_subgroup_numbers(1, n, 2);
    let f27 = free_subgroup_numbers(1, n, 3);
    let mut printed_misses = Vec::new();
    for lambda in 1..n as u64 {
        let l = lambda as usize;
        r.check(
            free_class(lambda, 1).map(|x| x.value()) == Ok(f3[l]),
            format!("mod 3 at lambda={lambda}"),
        );
        r.check(
            free_class(lambda, 2).map(|x| x.value()) == Ok(f9[l]),
            format!("mod 9 at lambda={lambda}"),
        );
        r.check(
            free27_is_one(lambda) == (f27[l] == 1),
            format!("class 1 mod 27 at lambda={lambda}"),
        );
        if free27_is_one_with(lambda, Free27Reading::AsPrinted) != (f27[l] == 1) {
            printed_misses.push(lambda);
        }
    }
    r.note(format!(
        "2212 clause: runs of 2s used; runs of 1s would misclassify {} values, first {:?}",
        printed_misses.len(),
        &printed_misses[..printed_misses.len().min(4)]
    ));
    r
}

fn criterion5() -> Report {
    let mut r = Report::new();
    for fix in MinPolyFixture::table() {
        r.check(
            check_minpoly(&fix, 2000),
            format!("{} mod 3^{}", fix.name, fix.mod_exp),
        );
    }
    let control = MinPolyFixture::new("A0", 1, 0, false, 2);
    r.check(
        !check_minpoly(&control, 2000),
        "A0 unexpectedly vanishes mod 9",
    );
    let want = [2u64, 4, 6, 6, 8, 10, 12, 12, 14, 16, 18, 18, 18];
    let got: Vec<u64> = (1..=13).map(min_degree_bound).collect();
    r.check(got == want, format!("degree bounds {got:?}"));
    r
}

fn criterion6() -> Report {
    let mut r = Report::new();
    let n = 60;
    let a0 = unique_series_solution(&apery0_equation(), 1, n);
    r.check(
        matches!(a0, Err(Error::NonUnique { .. })),
        format!("Apery0 mod 3: {a0:?}"),
    );
    let c3 = unique_series_solution(&catalan_squared_equation(), 1, n);
    r.check(c3.is_ok(), format!("Cat2 mod 3: {c3:?}"));
    if let Ok(s) = &c3 {
        let want = oracle_terms(SequenceId::Catalan, n, 1);
        r.check(
            s.agrees_with(&want, n as i64 - 1),
            "Cat2 mod 3 is not the Catalan series",
        );
    }
    let c9 = unique_series_solution(&catalan_squared_equation(), 2, n);
    r.check(
        matches!(c9, Err(Error::NonUnique { .. })),
        format!("Cat2 mod 9: {c9:?}"),
    );
    r
}

fn criterion7() -> Report {
    let mut r = Report::new();
    let top = 400;
    // (1+z) Psi^2 = 1 + 3 H~_1 + 9 H~_11 mod 27
    let lhs = psi_power_series_via_h(2, 3, top);
    let direct = psicong::psi_series(1, 1, 3, top).pow(2, top);
    let mut shifted = TruncSeries::zero(3, 0, top);
    for d in 1..=top {
        shifted.set(d, direct.coeff(d - 1));
    }
    let plus = direct.add(&shifted);
    let rhs = TruncSeries::one(3, top)
        .add(&h_tilde_series(&HIndex::new(vec![1]), top, 3).scale(3))
        .add(&h_tilde_series(&HIndex::new(vec![1, 1]), top, 3).scale(9));
    r.check(plus.agrees_with(&rhs, top), "(1+z)Psi^2 identity");
    r.check(lhs.agrees_with(&direct, top), "Psi^2 via the H~ expansion");
    let mut indices: Vec<Vec<u64>> = (1..=9).map(|a| vec![a]).collect();
    for a in 1..=9 {
        for b in 1..=9 {
            indices.push(vec![a, b]);
        }
    }
    let jobs: Vec<(Vec<u64>, u32)> = indices
        .iter()
        .flat_map(|i| (1..=3).map(move |e| (i.clone(), e)))
        .collect();
    let results = psicong::par::map(jobs, |(idx, e)| {
        let idx = HIndex::new(idx);
        let red = reduce_h(&idx, e);
        let want = h_tilde_series(&idx, top, e);
        (
            idx,
            e,
            red.is_reduced(),
            red.to_series(top).first_difference(&want, top),
        )
    });
    for (idx, e, pure, diff) in results {
        r.check(
            pure && diff.is_none(),
            format!("reduce_h {idx} mod 3^{e}: pure={pure}, first difference {diff:?}"),
        );
    }
    r
}

fn criterion8() -> Report {
    let mut r = Report::new();
    let ints = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
    let cases: [(EulerianKind, u64, &[i64]); 5] = [
        (EulerianKind::Even, 2, &[0, 12]),
        (EulerianKind::Even, 3, &[0, 60, 360]),
        (EulerianKind::Odd, 2, &[0, 6]),
        (EulerianKind::Odd, 3, &[0, 30, 120]),
        (EulerianKind::Odd, 4, &[0, 126, 1680, 5040]),
    ];
    for (kind, s, want) in cases {
        let got = euler_kernel(kind, s).map(|k| k.p);
        r.check(
            got.as_ref() == Ok(&ints(want)),
            format!("{kind:?} s={s}: {got:?}"),
        );
    }
    let three = BigInt::from(3);
    for s in 1..=10 {
        for kind in [EulerianKind::Even, EulerianKind::Odd] {
            match euler_kernel(kind, s) {
                Ok(k) => r.check(
                    k.p.iter().all(|c| (c % &three) == BigInt::from(0)),
                    format!("{kind:?} s={s} not divisible by 3"),
                ),
                Err(e) => r.check(false, format!("{kind:?} s={s}: {e}")),
            }
        }
    }
    r
}

fn criterion9() -> Report {
    let mut r = Report::new();
    let count = 6562;
    for (kind, seq) in [
        (AperyKind::Zeta2, apery2_by_recurrence(count)),
        (AperyKind::Zeta3, apery3_by_recurrence(count)),
    ] {
        let mut found = 0;
        for (n, a) in seq.iter().enumerate() {
            let exact = Residue::from_bigint(a, 2).value();
            let predicted = apery_class(kind, n as u64).value();
            if exact != predicted {
                found += 1;
                r.note(format!(
                    "{{\"kind\":\"{kind:?}\",\"n\":{n},\"exact\":{exact},\"predicted\":{predicted}}}"
                ));
            }
        }
        r.check(found == 0, format!("{kind:?}: {found} counterexamples"));
    }
    r
}

fn main() {
    let criteria: [(&str, fn() -> Report); 9] = [
        ("fixture reproduction mod 27", criterion1),
        ("fixture reproduction mod 9", criterion2),
        ("digit rules for Psi powers", criterion3),
        ("free subgroup classifiers", criterion4),
        ("minimal polynomials", criterion5),
        ("uniqueness guards", criterion6),
        ("H~ identity and reduction", criterion7),
        ("Eulerian kernels", criterion8),
        ("Apery classes mod 9 (non-blocking)", criterion9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let rep = f();
        let verdict = if rep.ok { "PASS" } else { "FAIL" };
        if !rep.ok {
            failed += 1;
        }
        println!(
            "criterion {}: {verdict} {name} ({:.2}s)",
            i + 1,
            start.elapsed().as_secs_f64()
        );
        for d in &rep.details {
            println!("    {d}");
        }
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
}
