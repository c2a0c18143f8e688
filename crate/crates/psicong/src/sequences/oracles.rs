//! Brute-force term generators, independent of the Psi machinery.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::SequenceId;
use crate::laurent::TruncSeries;
use crate::ring3::Modulus;

/// Paths of n unit steps from height 0 with steps -1/0/+1, never below 0.
/// `flat_on_axis` allows horizontal steps at height 0; the result holds the
/// count per final height after each step.
fn motzkin_dp(md: &Modulus, n: usize, flat_on_axis: bool, mut visit: impl FnMut(usize, &[u64])) {
    let mut row = vec![0u64; n + 2];
    row[0] = 1;
    visit(0, &row);
    for step in 1..n {
        let mut next = vec![0u64; n + 2];
        for h in 0..=step.min(n) {
            let mut c = 0u64;
            if h > 0 {
                c = md.add(c, row[h - 1]);
            }
            if h > 0 || flat_on_axis {
                c = md.add(c, row[h]);
            }
            c = md.add(c, row[h + 1]);
            next[h] = c;
        }
        row = next;
        visit(step, &row);
    }
}

fn dp_series(md: &Modulus, n: usize, flat_on_axis: bool, sum_all: bool) -> Vec<u64> {
    let mut out = Vec::with_capacity(n);
    motzkin_dp(md, n, flat_on_axis, |_, row| {
        out.push(if sum_all {
            row.iter().fold(0, |a, &x| md.add(a, x))
        } else {
            row[0]
        });
    });
    out.truncate(n);
    out
}

fn central_trinomial(md: &Modulus, n: usize) -> Vec<u64> {
    // unrestricted walks returning to 0, heights offset by n
    let w = 2 * n + 3;
    let mut row = vec![0u64; w];
    row[n + 1] = 1;
    let mut out = vec![1u64];
    for _ in 1..n {
        let mut next = vec![0u64; w];
        for h in 1..w - 1 {
            next[h] = md.add(md.add(row[h - 1], row[h]), row[h + 1]);
        }
        row = next;
        out.push(row[n + 1]);
    }
    out.truncate(n);
    out
}

fn delannoy(md: &Modulus, n: usize) -> Vec<u64> {
    let mut grid = vec![vec![0u64; n]; n];
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        for j in 0..n {
            grid[i][j] = if i == 0 || j == 0 {
                1
            } else {
                md.add(md.add(grid[i - 1][j], grid[i][j - 1]), grid[i - 1][j - 1])
            };
        }
        out.push(grid[i][i]);
    }
    out
}

/// Paths to (2n, 0) with steps (2,0), (1,1), (1,-1) above the axis.
fn schroeder(md: &Modulus, n: usize) -> Vec<u64> {
    let len = 2 * n;
    // ways[x][h]
    let mut ways = vec![vec![0u64; n + 2]; len.max(1)];
    ways[0][0] = 1;
    for x in 1..len {
        for h in 0..=n {
            let mut c = 0;
            if h > 0 {
                c = md.add(c, ways[x - 1][h - 1]);
            }
            c = md.add(c, ways[x - 1][h + 1]);
            if x >= 2 {
                c = md.add(c, ways[x - 2][h]);
            }
            ways[x][h] = c;
        }
    }
    (0..n).map(|k| ways[2 * k][0]).collect()
}

/// Convolution recurrence h_k = [k=0] + 3 h_(k-1) + sum h_i h_(k-2-i).
fn hex_tree(md: &Modulus, n: usize) -> Vec<u64> {
    let mut h = vec![0u64; n];
    for k in 0..n {
        let mut c = if k == 0 { 1 } else { md.mul(3, h[k - 1]) };
        if k >= 2 {
            for i in 0..=k - 2 {
                c = md.add(c, md.mul(h[i], h[k - 2 - i]));
            }
        }
        h[k] = c;
    }
    h
}

/// Central binomial coefficients binom(2k, k) for k < n, exactly.
fn central_binomials(n: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(n + 2);
    let mut c = BigInt::one();
    for k in 0..n + 2 {
        out.push(c.clone());
        let k = BigInt::from(k);
        c = c * (2 * &k + 1) * (2 * &k + 2) / ((&k + 1) * (&k + 1));
    }
    out
}

/// f_lambda(m) mod 3^e from coefficient comparison in the Riccati equation.
pub fn free_subgroup_numbers(m: u64, n: usize, e: u32) -> Vec<u64> {
    let md = Modulus::new(e);
    let m = m as i64;
    let mut f = vec![0u64; n];
    if n == 0 {
        return f;
    }
    f[0] = 1;
    for k in 1..n {
        let mut c = 0u64;
        for i in 0..k {
            c = md.add(c, md.mul(f[i], f[k - 1 - i]));
        }
        let lin = md.from_i64(6 * m - 2 + 6 * m * (k as i64 - 1));
        c = md.add(c, md.mul(lin, f[k - 1]));
        if k == 1 {
            c = md.add(c, md.from_i64(1 - 6 * m + 5 * m * m));
        }
        f[k] = c;
    }
    f
}

/// A(n, k) exactly, from the alternating sum. The j = 0 term is dropped, so
/// A(0, 1) = 1.
pub fn eulerian_exact(n: i64, k: i64) -> BigInt {
    if n < 0 {
        return BigInt::zero();
    }
    let mut acc = BigInt::zero();
    let mut binom = BigInt::one();
    // binom(n+1, k-j) as j runs down from k
    for i in 0..k {
        let j = k - i;
        let term = &binom * BigInt::from(j).pow(n as u32);
        if i % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
        binom = binom * BigInt::from(n + 1 - i) / BigInt::from(i + 1);
    }
    acc
}

/// A(2n, n+1) (`even`) or A(2n-1, n) (`!even`) for n < count, modulo 3^e.
/// Binomials come from Pascal rows and powers from modular exponentiation,
/// so nothing is divided.
pub fn central_eulerian_mod(even: bool, count: usize, e: u32) -> Vec<u64> {
    let md = Modulus::new(e);
    let mut out = Vec::with_capacity(count);
    let mut row = vec![1u64];
    let max_row = 2 * count + 1;
    for r in 0..=max_row {
        if r > 0 {
            let mut next = vec![1u64; r + 1];
            for i in 1..r {
                next[i] = md.add(row[i - 1], row[i]);
            }
            row = next;
        }
        // even: row 2n+1 gives A(2n, n+1); odd: row 2n gives A(2n-1, n)
        let (n, top, exp) = if even {
            if r % 2 == 0 {
                continue;
            }
            let n = (r - 1) / 2;
            (n, n + 1, 2 * n as u64)
        } else {
            if r % 2 == 1 {
                continue;
            }
            let n = r / 2;
            if n == 0 {
                out.push(0);
                continue;
            }
            (n, n, 2 * n as u64 - 1)
        };
        if n >= count {
            break;
        }
        let mut acc = 0u64;
        for j in 1..=top {
            let t = md.mul(row[top - j], md.pow(j as u64 % md.m, exp));
            acc = if (top - j) % 2 == 0 {
                md.add(acc, t)
            } else {
                md.sub(acc, t)
            };
        }
        out.push(acc);
    }
    out.truncate(count);
    out
}

pub fn apery2_by_sum(n: u64) -> BigInt {
    let mut acc = BigInt::zero();
    let mut b = BigInt::one(); // binom(n, k)
    let mut c = BigInt::one(); // binom(n+k, k)
    for k in 0..=n {
        acc += &b * &b * &c;
        b = b * (n - k) / (k + 1);
        c = c * (n + k + 1) / (k + 1);
    }
    acc
}

pub fn apery3_by_sum(n: u64) -> BigInt {
    let mut acc = BigInt::zero();
    let mut b = BigInt::one();
    let mut c = BigInt::one();
    for k in 0..=n {
        let t = &b * &c;
        acc += &t * &t;
        b = b * (n - k) / (k + 1);
        c = c * (n + k + 1) / (k + 1);
    }
    acc
}

/// Three-term recurrence run exactly; each division is checked.
fn run_recurrence(
    count: usize,
    a0: i64,
    a1: i64,
    step: impl Fn(i64, &BigInt, &BigInt) -> (BigInt, BigInt),
) -> Vec<BigInt> {
    let mut out = vec![BigInt::from(a0), BigInt::from(a1)];
    out.truncate(count);
    while out.len() < count {
        let n = out.len() as i64 - 2;
        let (num, den) = step(n, &out[out.len() - 1], &out[out.len() - 2]);
        let (q, r) = num.div_rem(&den);
        assert!(r.is_zero(), "recurrence left a remainder at n = {}", n + 2);
        out.push(q);
    }
    out
}

pub fn apery2_by_recurrence(count: usize) -> Vec<BigInt> {
    run_recurrence(count, 1, 3, |n, a1, a0| {
        let num =
            BigInt::from(11 * n * n + 33 * n + 25) * a1 + BigInt::from((n + 1) * (n + 1)) * a0;
        (num, BigInt::from((n + 2) * (n + 2)))
    })
}

pub fn apery3_by_recurrence(count: usize) -> Vec<BigInt> {
    run_recurrence(count, 1, 5, |n, a1, a0| {
        let num = BigInt::from((2 * n + 3) * (17 * n * n + 51 * n + 39)) * a1
            - BigInt::from((n + 1).pow(3)) * a0;
        (num, BigInt::from((n + 2).pow(3)))
    })
}

/// The first `n` terms of a sequence modulo 3^e.
pub fn oracle_terms(id: SequenceId, n: usize, e: u32) -> TruncSeries {
    use SequenceId::*;
    let md = Modulus::new(e);
    let reduce =
        |v: Vec<BigInt>| -> Vec<u64> { v.iter().take(n).map(|x| md.from_bigint(x)).collect() };
    let coeffs: Vec<u64> = match id {
        Motzkin => dp_series(&md, n, true, false),
        MotzkinPrefix => dp_series(&md, n, true, true),
        Riordan => dp_series(&md, n, false, false),
        CentralTrinomial => central_trinomial(&md, n),
        Delannoy => delannoy(&md, n),
        Schroeder => schroeder(&md, n),
        HexTree => hex_tree(&md, n),
        CentralBinomial => reduce(central_binomials(n)),
        CentralBinomialSums => {
            let mut acc = BigInt::zero();
            reduce(
                central_binomials(n)
                    .into_iter()
                    .map(|c| {
                        acc += c;
                        acc.clone()
                    })
                    .collect(),
            )
        }
        Catalan => reduce(
            central_binomials(n)
                .into_iter()
                .enumerate()
                .map(|(k, c)| c / BigInt::from(k + 1))
                .collect(),
        ),
        AlmostCentralBinomial => {
            // binom(2k+2, k) = binom(2k+2, k+1) (k+1)/(k+2)
            let cb = central_binomials(n + 1);
            reduce(
                (0..n)
                    .map(|k| &cb[k + 1] * BigInt::from(k + 1) / BigInt::from(k + 2))
                    .collect(),
            )
        }
        FreeSubgroups(m) => free_subgroup_numbers(m, n, e),
        EulerianEven => central_eulerian_mod(true, n, e),
        EulerianOdd => central_eulerian_mod(false, n, e),
        AperyZeta2 => reduce(apery2_by_recurrence(n)),
        AperyZeta3 => reduce(apery3_by_recurrence(n)),
    };
    TruncSeries::from_coeffs(e, 0, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn first(id: SequenceId, n: usize) -> Vec<u64> {
        oracle_terms(id, n, 20).coeffs
    }

    #[test]
    fn small_terms() {
        use SequenceId::*;
        assert_eq!(first(Motzkin, 7), vec![1, 1, 2, 4, 9, 21, 51]);
        assert_eq!(first(MotzkinPrefix, 6), vec![1, 2, 5, 13, 35, 96]);
        assert_eq!(first(Riordan, 7), vec![1, 0, 1, 1, 3, 6, 15]);
        assert_eq!(first(CentralTrinomial, 6), vec![1, 1, 3, 7, 19, 51]);
        assert_eq!(first(CentralBinomial, 5), vec![1, 2, 6, 20, 70]);
        assert_eq!(first(CentralBinomialSums, 5), vec![1, 3, 9, 29, 99]);
        assert_eq!(first(Catalan, 6), vec![1, 1, 2, 5, 14, 42]);
        assert_eq!(first(AlmostCentralBinomial, 5), vec![1, 4, 15, 56, 210]);
        assert_eq!(first(Delannoy, 5), vec![1, 3, 13, 63, 321]);
        assert_eq!(first(Schroeder, 6), vec![1, 2, 6, 22, 90, 394]);
        assert_eq!(first(HexTree, 6), vec![1, 3, 10, 36, 137, 543]);
        assert_eq!(first(AperyZeta2, 4), vec![1, 3, 19, 147]);
        assert_eq!(first(AperyZeta3, 4), vec![1, 5, 73, 1445]);
    }

    #[test]
    fn eulerian_values() {
        assert_eq!(eulerian_exact(4, 2), BigInt::from(11));
        assert_eq!(
            first(SequenceId::EulerianEven, 5),
            vec![1, 1, 11, 302, 15619]
        );
        assert_eq!(first(SequenceId::EulerianOdd, 5), vec![0, 1, 4, 66, 2416]);
        for n in 1..40i64 {
            assert_eq!(eulerian_exact(2 * n, n), eulerian_exact(2 * n, n + 1));
        }
        let md = Modulus::new(3);
        let modular = central_eulerian_mod(true, 60, 3);
        for n in 0..60 {
            assert_eq!(
                modular[n],
                md.from_bigint(&eulerian_exact(2 * n as i64, n as i64 + 1))
            );
        }
    }

    #[test]
    fn apery_recurrence_matches_sum() {
        let r2 = apery2_by_recurrence(120);
        let r3 = apery3_by_recurrence(120);
        for n in 0..120 {
            assert_eq!(r2[n], apery2_by_sum(n as u64));
            assert_eq!(r3[n], apery3_by_sum(n as u64));
        }
    }
}
