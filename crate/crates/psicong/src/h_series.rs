//! The auxiliary series H~_{a_1..a_s}, expansion of Psi powers into them and
//! reduction onto indices free of multiples of 3.
//!
//! R(k) = z^(3^k) (1 + z^(3^k)) / (1 + z^(3^(k+1))) and
//! H~_{a_1..a_s} = sum over k_1 > ... > k_s >= 0 of prod R(k_j)^(a_j).

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::laurent::{rewrite_inv_1pz3j, Ctx, LaurentCoeff, TruncSeries};
use crate::ring3::{pow3, v3, Modulus, Val};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HIndex(Vec<u64>);

impl HIndex {
    pub fn new(a: Vec<u64>) -> Self {
        assert!(!a.is_empty(), "empty H index");
        assert!(
            a.iter().all(|&x| x >= 1),
            "H index entries must be positive"
        );
        HIndex(a)
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_pure(&self) -> bool {
        self.0.iter().all(|a| a % 3 != 0)
    }
}

impl fmt::Display for HIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "H~[{}]", parts.join(","))
    }
}

/// (s, v, i, t): length, coefficient valuation, last 3-divisible position
/// (1-based, 0 if none) and the valuation of that entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReductionRank {
    pub s: usize,
    pub v: u32,
    pub i: usize,
    pub t: u32,
}

impl ReductionRank {
    pub fn of(idx: &[u64], v: u32) -> Self {
        let last = idx.iter().rposition(|a| a % 3 == 0);
        let (i, t) = match last {
            Some(p) => (p + 1, v3_u64(idx[p])),
            None => (0, 0),
        };
        ReductionRank {
            s: idx.len(),
            v,
            i,
            t,
        }
    }
}

impl PartialOrd for ReductionRank {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ReductionRank {
    fn cmp(&self, other: &Self) -> Ordering {
        self.s
            .cmp(&other.s)
            .then(other.v.cmp(&self.v))
            .then(self.i.cmp(&other.i))
            .then(self.t.cmp(&other.t))
    }
}

fn v3_u64(mut x: u64) -> u32 {
    let mut t = 0;
    while x.is_multiple_of(3) {
        x /= 3;
        t += 1;
    }
    t
}

/// constant + sum of coeff * H~_idx, all over base 1+z mod 3^e.
#[derive(Clone, PartialEq, Eq)]
pub struct HCombination {
    pub e: u32,
    pub constant: LaurentCoeff,
    pub terms: BTreeMap<HIndex, LaurentCoeff>,
}

fn ctx1(e: u32) -> Ctx {
    Ctx::new(1, 1, e)
}

impl HCombination {
    pub fn zero(e: u32) -> Self {
        HCombination {
            e,
            constant: LaurentCoeff::zero(ctx1(e)),
            terms: BTreeMap::new(),
        }
    }

    pub fn single(idx: HIndex, e: u32) -> Self {
        let mut c = Self::zero(e);
        c.terms.insert(idx, LaurentCoeff::one(ctx1(e)));
        c
    }

    pub fn is_reduced(&self) -> bool {
        self.terms.keys().all(HIndex::is_pure)
    }

    pub fn add_term(&mut self, idx: Option<HIndex>, c: &LaurentCoeff) {
        if c.is_zero() {
            return;
        }
        match idx {
            None => self.constant = self.constant.add(c),
            Some(idx) => {
                let slot = self
                    .terms
                    .entry(idx.clone())
                    .or_insert_with(|| LaurentCoeff::zero(c.ctx()));
                *slot = slot.add(c);
                if slot.is_zero() {
                    self.terms.remove(&idx);
                }
            }
        }
    }

    /// self += 3^t * f * other, where other lives mod 3^(e - t).
    fn add_lifted(&mut self, other: &HCombination, t: u32, f: &LaurentCoeff) {
        let e = self.e;
        let lift = |c: &LaurentCoeff| c.mul_pow3_into(t, e).mul(f);
        let k = lift(&other.constant);
        self.add_term(None, &k);
        for (idx, c) in &other.terms {
            let k = lift(c);
            self.add_term(Some(idx.clone()), &k);
        }
    }

    pub fn to_series(&self, top: i64) -> TruncSeries {
        let mut acc = self.constant.to_series(top);
        if acc.top() < top || acc.min_deg > 0 {
            acc = acc.add(&TruncSeries::zero(self.e, 0, top));
        }
        for (idx, c) in &self.terms {
            let h = h_tilde_series(idx, top, self.e);
            let cs = c.to_series(top - h_order(idx));
            let prod = loose_product(&cs, &h, top);
            acc = acc.add(&prod);
        }
        acc
    }
}

impl fmt::Debug for HCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[mod 3^{}] {}", self.e, self.constant)?;
        for (idx, c) in &self.terms {
            write!(f, " + ({c}){idx}")?;
        }
        Ok(())
    }
}

/// Product of a coefficient series and an H~ series, truncated at top.
fn loose_product(c: &TruncSeries, h: &TruncSeries, top: i64) -> TruncSeries {
    let lo = c.min_deg + h.min_deg;
    let mut out = TruncSeries::zero(c.e(), lo.min(0), top);
    for dc in c.min_deg..=c.top() {
        let x = c.coeff(dc);
        if x == 0 {
            continue;
        }
        for dh in h.min_deg..=h.top() {
            let d = dc + dh;
            if d > top {
                break;
            }
            let y = h.coeff(dh);
            if y != 0 {
                let cur = out.coeff(d);
                out.set(d, c.md.add(cur, c.md.mul(x, y)));
            }
        }
    }
    out
}

/// Order of H~_idx: the smallest exponent sum of a_j 3^(s-j).
fn h_order(idx: &HIndex) -> i64 {
    let s = idx.len();
    idx.entries()
        .iter()
        .enumerate()
        .map(|(j, &a)| a as i64 * 3i64.pow((s - 1 - j) as u32))
        .sum()
}

/// Truncated series of R(k) mod 3^e.
pub fn r_series(k: u32, e: u32, top: i64) -> TruncSeries {
    let mut s = TruncSeries::zero(e, 0, top.max(0));
    let md = s.md;
    let p = pow3(k) as i64;
    let q = 3 * p;
    // (z^p + z^(2p)) * sum_i (-1)^i z^(iq)
    let mut i = 0i64;
    while p + i * q <= top {
        let sign = if i % 2 == 0 { 1 } else { md.neg(1) };
        for d in [p + i * q, 2 * p + i * q] {
            if d <= top {
                let cur = s.coeff(d);
                s.set(d, md.add(cur, sign));
            }
        }
        i += 1;
    }
    s
}

pub fn h_tilde_series(idx: &HIndex, top: i64, e: u32) -> TruncSeries {
    let a = idx.entries();
    let s = a.len();
    let one = TruncSeries::one(e, top);
    let mut t: Vec<TruncSeries> = vec![one];
    t.extend((0..s).map(|_| TruncSeries::zero(e, 0, top.max(0))));
    let mut k = 0u32;
    while top >= 1 && (pow3(k) as i64) <= top {
        let r = r_series(k, e, top);
        for j in (1..=s).rev() {
            let exp = a[s - j];
            if (exp as i64).saturating_mul(pow3(k) as i64) > top {
                continue;
            }
            let rp = r.pow(exp as u32, top);
            let add = rp.mul(&t[j - 1], top);
            t[j] = t[j].add(&add);
        }
        k += 1;
        if k > 38 {
            break;
        }
    }
    t.swap_remove(s)
}

/// Generalized binomial coefficient C(x, k) for integer x.
fn binom(x: i64, k: u64) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(x - i as i64);
        den *= BigInt::from(i + 1);
    }
    num / den
}

fn residue(md: &Modulus, c: &BigInt) -> u64 {
    md.from_bigint(c)
}

/// Expansion of (1+z)^K Psi^(2K) (equally (1+z)^K Psi^(2K+1)/Psi):
/// sum over compositions (a_1..a_r), a_j <= K, of prod 3^(a_j) C(K, a_j) H~_a.
pub fn psi_power_h_expansion(k: u64, e: u32) -> HCombination {
    let ctx = ctx1(e);
    let md = ctx.md();
    let mut out = HCombination::zero(e);
    out.constant = LaurentCoeff::one(ctx);
    let mut stack: Vec<(Vec<u64>, BigInt)> = vec![(Vec::new(), BigInt::one())];
    while let Some((seq, c)) = stack.pop() {
        let used: u64 = seq.iter().sum();
        for a in 1..=k {
            if used + a >= e as u64 {
                break;
            }
            let c2 = &c * BigInt::from(pow3(a as u32)) * binom(k as i64, a);
            let mut s2 = seq.clone();
            s2.push(a);
            let r = residue(&md, &c2);
            if r != 0 {
                out.add_term(
                    Some(HIndex::new(s2.clone())),
                    &LaurentCoeff::one(ctx).scale(r),
                );
            }
            stack.push((s2, c2));
        }
    }
    out
}

/// Truncated series of Psi^power via the H~ expansion.
pub fn psi_power_series_via_h(power: u64, e: u32, top: i64) -> TruncSeries {
    let k = power / 2;
    let comb = psi_power_h_expansion(k, e);
    let ctx = ctx1(e);
    let mut s = comb.to_series(top);
    let den = LaurentCoeff::base_pow(ctx, -(k as i64)).to_series(top);
    s = s.mul(&den, top);
    if power % 2 == 1 {
        let psi = crate::psi_core::psi_series(1, 1, e, top);
        s = s.mul(&psi, top);
    }
    s
}

/// All (|s|, |t|, coefficient) from the nested sums over vectors s, t with
/// s_0 = m, weight |s|+|t| <= budget, and factors C(s_{j-1},s_j) C(-s_{j-1},t_j).
fn chain_sums(m: u64, budget: u32) -> Vec<(u64, u64, BigInt)> {
    let mut acc: HashMap<(u64, u64), BigInt> = HashMap::new();
    fn walk(
        prev: u64,
        rb: u64,
        ss: u64,
        tt: u64,
        c: BigInt,
        acc: &mut HashMap<(u64, u64), BigInt>,
    ) {
        for sj in 0..=prev.min(rb) {
            for tj in 0..=(rb - sj) {
                let c2 = &c * binom(prev as i64, sj) * binom(-(prev as i64), tj);
                if c2.is_zero() {
                    continue;
                }
                if sj == 0 {
                    *acc.entry((ss, tt + tj)).or_insert_with(BigInt::zero) += c2;
                } else {
                    walk(sj, rb - sj - tj, ss + sj, tt + tj, c2, acc);
                }
            }
        }
    }
    walk(m, budget as u64, 0, 0, BigInt::one(), &mut acc);
    let mut v: Vec<_> = acc.into_iter().map(|((s, t), c)| (s, t, c)).collect();
    v.sort_by_key(|a| (a.0, a.1));
    v
}

type HMemo = Mutex<HashMap<(HIndex, u32), Arc<HCombination>>>;

fn memo() -> &'static HMemo {
    static MEMO: OnceLock<HMemo> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// R(0)^m = z^m (1+z)^m / (1+z^3)^m rewritten over base 1+z mod 3^e.
fn r0_pow(m: u64, e: u32) -> LaurentCoeff {
    rewrite_inv_1pz3j(1, m, e, e)
        .shift(m as i64)
        .mul_base_pow(m as i64)
}

struct Reducer {
    e: u32,
    parent: ReductionRank,
    out: HCombination,
}

impl Reducer {
    /// out += c * factor * H~_idx (idx empty meaning the series 1).
    fn push(&mut self, idx: Vec<u64>, c: &BigInt, factor: Option<&LaurentCoeff>) {
        let v = match v3(c) {
            Val::Infinite => return,
            Val::Finite(v) => v,
        };
        if v >= self.e {
            return;
        }
        let ctx = ctx1(self.e);
        let md = ctx.md();
        let unit = c / BigInt::from(pow3(v));
        let mut f = LaurentCoeff::one(ctx).scale(residue(&md, &unit));
        if let Some(x) = factor {
            f = f.mul(x);
        }
        let child = ReductionRank::of(&idx, v);
        assert!(
            child < self.parent,
            "reduction rank did not decrease: {child:?} vs {:?}",
            self.parent
        );
        if idx.is_empty() {
            self.out.add_term(None, &f.mul_pow3_into(v, self.e));
            return;
        }
        let sub = reduce_h(&HIndex::new(idx), self.e - v);
        self.out.add_lifted(&sub, v, &f);
    }
}

/// Rewrites H~_idx mod 3^e as a combination of 1 and H~ with pure indices.
pub fn reduce_h(idx: &HIndex, e: u32) -> Arc<HCombination> {
    if idx.is_pure() {
        return Arc::new(HCombination::single(idx.clone(), e));
    }
    let key = (idx.clone(), e);
    if let Some(r) = memo().lock().unwrap().get(&key) {
        return r.clone();
    }
    let b = idx.entries();
    let h = b.iter().rposition(|x| x % 3 == 0).unwrap();
    let n = b[h] / 3;
    let prefix = &b[..h];
    let suffix = &b[h + 1..];
    let mut red = Reducer {
        e,
        parent: ReductionRank::of(b, 0),
        out: HCombination::zero(e),
    };
    let with = |mid: u64, rest: &[u64]| -> Vec<u64> {
        let mut v = prefix.to_vec();
        v.push(mid);
        v.extend_from_slice(rest);
        v
    };
    for bb in 0..e as u64 {
        let cb = BigInt::from(pow3(bb as u32)) * binom(-(n as i64), bb);
        if cb.is_zero() {
            continue;
        }
        let m = n + bb;
        red.push(with(m, suffix), &cb, None);
        if let Some((&last, head)) = prefix.split_last() {
            let mut v = head.to_vec();
            v.push(last + m);
            v.extend_from_slice(suffix);
            red.push(v, &cb, None);
        }
        let budget = e - 1 - bb as u32;
        match suffix.split_first() {
            Some((&next, tail)) => {
                for (uu, vv, c) in chain_sums(m, budget) {
                    let c = -&cb * BigInt::from(pow3((uu + vv) as u32)) * c;
                    let mut v = prefix.to_vec();
                    v.push(3 * (m + uu) + vv + next);
                    v.extend_from_slice(tail);
                    red.push(v, &c, None);
                }
            }
            None => {
                let f = r0_pow(m, e);
                red.push(prefix.to_vec(), &-&cb, Some(&f));
            }
        }
        for a in 1..(e as u64 - bb) {
            let ca =
                BigInt::from(pow3((a + bb) as u32)) * binom(n as i64, a) * binom(-(n as i64), bb);
            if ca.is_zero() {
                continue;
            }
            let budget = e as u64 - 1 - a - bb;
            for (ss, tt, c) in chain_sums(m, budget as u32) {
                let c = &ca * BigInt::from(pow3((ss + tt) as u32)) * c;
                red.push(with(3 * (ss + m) + tt + a, suffix), &c, None);
            }
        }
    }
    let out = Arc::new(red.out);
    memo().lock().unwrap().insert(key, out.clone());
    out
}

/// Reduces every term of a combination.
pub fn reduce_combination(c: &HCombination) -> HCombination {
    let mut out = HCombination::zero(c.e);
    out.constant = c.constant.clone();
    for (idx, k) in &c.terms {
        let r = reduce_h(idx, c.e);
        out.add_lifted(&r, 0, k);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::psi_core::psi_series;

    #[test]
    fn r0_coefficients() {
        let r = r_series(0, 2, 6);
        // (z + z^2)(1 - z^3 + z^6)
        assert_eq!(r.coeffs, vec![0, 1, 1, 0, 8, 8, 0]);
    }

    #[test]
    fn h1_low_terms() {
        let h = h_tilde_series(&HIndex::new(vec![1]), 10, 3);
        assert_eq!(h.coeff(0), 0);
        assert_eq!(h.coeff(1), 1);
        let h11 = h_tilde_series(&HIndex::new(vec![1, 1]), 10, 3);
        assert!((0..4).all(|d| h11.coeff(d) == 0));
        assert_eq!(h11.coeff(4), 1);
    }

    #[test]
    fn psi_square_identity() {
        let top = 200;
        // (1+z) Psi^2
        let p = psi_series(1, 1, 3, top).pow(2, top);
        let mut shifted = TruncSeries::zero(3, 0, top);
        for d in 1..=top {
            shifted.set(d, p.coeff(d - 1));
        }
        let lhs = p.add(&shifted);
        let h1 = h_tilde_series(&HIndex::new(vec![1]), top, 3).scale(3);
        let h11 = h_tilde_series(&HIndex::new(vec![1, 1]), top, 3).scale(9);
        let rhs = TruncSeries::one(3, top).add(&h1).add(&h11);
        assert!(lhs.agrees_with(&rhs, top));
    }

    #[test]
    fn expansion_coefficients() {
        let c = psi_power_h_expansion(2, 3);
        let k1 = c.terms.get(&HIndex::new(vec![1])).unwrap();
        assert_eq!(k1.terms(), vec![(0, 6)]);
        let k2 = c.terms.get(&HIndex::new(vec![2])).unwrap();
        assert_eq!(k2.terms(), vec![(0, 9)]);
    }

    #[test]
    fn powers_by_expansion() {
        let top = 150;
        for e in 1..=3 {
            let psi = psi_series(1, 1, e, top);
            for p in 1..=7u64 {
                let direct = psi.pow(p as u32, top);
                assert!(
                    psi_power_series_via_h(p, e, top).agrees_with(&direct, top),
                    "power {p} mod 3^{e}"
                );
            }
        }
    }

    #[test]
    fn h3_mod3() {
        let r = reduce_h(&HIndex::new(vec![3]), 1);
        assert!(r.is_reduced());
        let one = r.terms.get(&HIndex::new(vec![1])).unwrap();
        assert_eq!(one, &LaurentCoeff::one(ctx1(1)));
        // -z(1+z)/(1+z^3) = -z/(1+z)^2 mod 3
        assert_eq!(r.constant, LaurentCoeff::from_i64(ctx1(1), 1, &[-1], 2));
    }

    #[test]
    fn reduction_small_cases() {
        let top = 300;
        for e in 1..=3 {
            for idx in [
                vec![3],
                vec![6],
                vec![9],
                vec![3, 1],
                vec![1, 3],
                vec![3, 3],
                vec![2, 6],
            ] {
                let idx = HIndex::new(idx);
                let r = reduce_h(&idx, e);
                assert!(r.is_reduced());
                let want = h_tilde_series(&idx, top, e);
                let got = r.to_series(top);
                assert!(
                    got.agrees_with(&want, top),
                    "{idx} mod 3^{e}: {:?}",
                    got.first_difference(&want, top)
                );
            }
        }
    }
}
