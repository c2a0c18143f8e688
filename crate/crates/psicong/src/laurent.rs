//! The coefficient ring Z/3^e[z, 1/z, 1/(1+eps z^gamma)] and truncated series.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::poly;
use crate::ring3::{pow3, Modulus};

/// Context of a coefficient: the base 1+eps*z^gamma and the modulus 3^e.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ctx {
    pub eps: i8,
    pub gamma: u32,
    pub e: u32,
}

impl Ctx {
    pub fn new(eps: i8, gamma: u32, e: u32) -> Self {
        assert!(eps == 1 || eps == -1, "eps must be +1 or -1");
        assert!(gamma >= 1, "gamma must be positive");
        assert!(e >= 1, "modulus exponent must be positive");
        Ctx { eps, gamma, e }
    }

    pub fn md(&self) -> Modulus {
        Modulus::new(self.e)
    }

    pub fn with_e(&self, e: u32) -> Ctx {
        Ctx::new(self.eps, self.gamma, e)
    }
}

/// A power or Laurent series mod 3^e, known for degrees min_deg..=top().
#[derive(Clone, PartialEq, Eq)]
pub struct TruncSeries {
    pub md: Modulus,
    pub min_deg: i64,
    pub coeffs: Vec<u64>,
}

impl TruncSeries {
    pub fn zero(e: u32, min_deg: i64, top: i64) -> Self {
        let len = (top - min_deg + 1).max(0) as usize;
        TruncSeries {
            md: Modulus::new(e),
            min_deg,
            coeffs: vec![0; len],
        }
    }

    pub fn from_coeffs(e: u32, min_deg: i64, coeffs: Vec<u64>) -> Self {
        let md = Modulus::new(e);
        let coeffs = coeffs.into_iter().map(|c| c % md.m).collect();
        TruncSeries {
            md,
            min_deg,
            coeffs,
        }
    }

    pub fn from_i64(e: u32, min_deg: i64, coeffs: &[i64]) -> Self {
        let md = Modulus::new(e);
        TruncSeries {
            md,
            min_deg,
            coeffs: coeffs.iter().map(|&c| md.from_i64(c)).collect(),
        }
    }

    /// The constant 1 known to degree `top`.
    pub fn one(e: u32, top: i64) -> Self {
        let mut s = TruncSeries::zero(e, 0, top.max(0));
        s.coeffs[0] = 1;
        s
    }

    /// A polynomial (coefficients from degree lo) known to degree `top`.
    pub fn padded(e: u32, lo: i64, coeffs: &[i64], top: i64) -> Self {
        let mut s = TruncSeries::zero(e, lo.min(0), top);
        for (i, &c) in coeffs.iter().enumerate() {
            let d = lo + i as i64;
            if d <= top {
                let v = s.md.from_i64(c);
                s.set(d, v);
            }
        }
        s
    }

    pub fn e(&self) -> u32 {
        self.md.e
    }

    pub fn top(&self) -> i64 {
        self.min_deg + self.coeffs.len() as i64 - 1
    }

    /// Coefficient at degree d (zero below min_deg).
    pub fn coeff(&self, d: i64) -> u64 {
        if d < self.min_deg {
            return 0;
        }
        assert!(
            d <= self.top(),
            "degree {d} beyond truncation {}",
            self.top()
        );
        self.coeffs[(d - self.min_deg) as usize]
    }

    pub fn set(&mut self, d: i64, c: u64) {
        let i = (d - self.min_deg) as usize;
        self.coeffs[i] = c % self.md.m;
    }

    /// Same series viewed on degrees lo..=top (lo <= min_deg pads, higher
    /// lo requires the dropped coefficients to vanish).
    pub fn window(&self, lo: i64, top: i64) -> TruncSeries {
        assert!(
            top <= self.top(),
            "window top {top} beyond truncation {}",
            self.top()
        );
        let mut out = TruncSeries {
            md: self.md,
            min_deg: lo,
            coeffs: vec![0; (top - lo + 1).max(0) as usize],
        };
        for d in self.min_deg..lo.min(top + 1) {
            assert_eq!(self.coeff(d), 0, "dropping nonzero coefficient at {d}");
        }
        for d in lo.max(self.min_deg)..=top {
            out.coeffs[(d - lo) as usize] = self.coeff(d);
        }
        out
    }

    pub fn truncate(&self, top: i64) -> TruncSeries {
        self.window(self.min_deg, top)
    }

    fn aligned(&self, other: &TruncSeries) -> (i64, i64) {
        assert_eq!(self.md, other.md, "series moduli differ");
        (self.min_deg.min(other.min_deg), self.top().min(other.top()))
    }

    pub fn add(&self, other: &TruncSeries) -> TruncSeries {
        let (lo, top) = self.aligned(other);
        let mut out = TruncSeries::zero(self.e(), lo, top);
        for d in lo..=top {
            out.coeffs[(d - lo) as usize] = self.md.add(self.coeff(d), other.coeff(d));
        }
        out
    }

    pub fn sub(&self, other: &TruncSeries) -> TruncSeries {
        let (lo, top) = self.aligned(other);
        let mut out = TruncSeries::zero(self.e(), lo, top);
        for d in lo..=top {
            out.coeffs[(d - lo) as usize] = self.md.sub(self.coeff(d), other.coeff(d));
        }
        out
    }

    pub fn scale(&self, c: u64) -> TruncSeries {
        let md = self.md;
        TruncSeries {
            md,
            min_deg: self.min_deg,
            coeffs: self.coeffs.iter().map(|&x| md.mul(x, c)).collect(),
        }
    }

    /// Product truncated at `top`. Both factors must be known far enough.
    pub fn mul(&self, other: &TruncSeries, top: i64) -> TruncSeries {
        assert_eq!(self.md, other.md, "series moduli differ");
        assert!(
            self.top() >= top - other.min_deg && other.top() >= top - self.min_deg,
            "factors not known to degree {top}"
        );
        let lo = self.min_deg + other.min_deg;
        let len = (top - lo + 1).max(0) as usize;
        let a = &self.coeffs[..self.coeffs.len().min(len)];
        let b = &other.coeffs[..other.coeffs.len().min(len)];
        let coeffs = poly::mul_trunc(&self.md, a, b, len);
        TruncSeries {
            md: self.md,
            min_deg: lo,
            coeffs,
        }
    }

    /// Product keeping the truncation the inputs allow.
    pub fn mul_auto(&self, other: &TruncSeries) -> TruncSeries {
        let top = (self.top() + other.min_deg).min(other.top() + self.min_deg);
        self.mul(other, top)
    }

    pub fn pow(&self, k: u32, top: i64) -> TruncSeries {
        let mut acc = TruncSeries::one(self.e(), top);
        for _ in 0..k {
            acc = acc.mul_loose(self, top);
        }
        acc
    }

    /// Product truncated at `top`, trusting the caller about known ranges of
    /// factors with nonnegative order.
    fn mul_loose(&self, other: &TruncSeries, top: i64) -> TruncSeries {
        let lo = self.min_deg + other.min_deg;
        let len = (top - lo + 1).max(0) as usize;
        let a = &self.coeffs[..self.coeffs.len().min(len)];
        let b = &other.coeffs[..other.coeffs.len().min(len)];
        TruncSeries {
            md: self.md,
            min_deg: lo,
            coeffs: poly::mul_trunc(&self.md, a, b, len),
        }
    }

    pub fn derivative(&self) -> TruncSeries {
        let md = self.md;
        let mut out = TruncSeries::zero(self.e(), self.min_deg - 1, self.top() - 1);
        for d in self.min_deg..=self.top() {
            let c = md.mul(self.coeff(d), md.from_i64(d));
            out.coeffs[(d - 1 - out.min_deg) as usize] = c;
        }
        out
    }

    pub fn reduce(&self, e: u32) -> TruncSeries {
        assert!(e <= self.e());
        let md = Modulus::new(e);
        TruncSeries {
            md,
            min_deg: self.min_deg,
            coeffs: self.coeffs.iter().map(|&c| c % md.m).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Least degree <= top where the two series differ.
    pub fn first_difference(&self, other: &TruncSeries, top: i64) -> Option<i64> {
        assert_eq!(self.md, other.md, "series moduli differ");
        let lo = self.min_deg.min(other.min_deg);
        (lo..=top).find(|&d| self.coeff(d) != other.coeff(d))
    }

    pub fn agrees_with(&self, other: &TruncSeries, top: i64) -> bool {
        self.first_difference(other, top).is_none()
    }
}

impl fmt::Debug for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "TruncSeries(mod 3^{}, from z^{}: {:?})",
            self.md.e, self.min_deg, self.coeffs
        )
    }
}

/// num / (1+eps z^gamma)^den, numerator stored densely from degree `lo`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentCoeff {
    ctx: Ctx,
    lo: i64,
    num: Vec<u64>,
    den: u32,
}

impl LaurentCoeff {
    pub fn zero(ctx: Ctx) -> Self {
        LaurentCoeff {
            ctx,
            lo: 0,
            num: Vec::new(),
            den: 0,
        }
    }

    pub fn one(ctx: Ctx) -> Self {
        Self::monomial(ctx, 1, 0)
    }

    pub fn monomial(ctx: Ctx, c: i64, k: i64) -> Self {
        Self::new(ctx, k, vec![ctx.md().from_i64(c)], 0)
    }

    /// Integer polynomial sum c_i z^(lo+i) over (1+eps z^gamma)^den.
    pub fn from_i64(ctx: Ctx, lo: i64, coeffs: &[i64], den: u32) -> Self {
        let md = ctx.md();
        Self::new(
            ctx,
            lo,
            coeffs.iter().map(|&c| md.from_i64(c)).collect(),
            den,
        )
    }

    /// (1+eps z^gamma)^k for any integer k.
    pub fn base_pow(ctx: Ctx, k: i64) -> Self {
        if k >= 0 {
            Self::new(
                ctx,
                0,
                poly::base_pow(&ctx.md(), ctx.eps, ctx.gamma, k as u32),
                0,
            )
        } else {
            Self::new(ctx, 0, vec![1], (-k) as u32)
        }
    }

    pub fn new(ctx: Ctx, lo: i64, num: Vec<u64>, den: u32) -> Self {
        let md = ctx.md();
        let num = num.into_iter().map(|c| c % md.m).collect();
        let mut out = LaurentCoeff { ctx, lo, num, den };
        out.normalize();
        out
    }

    fn normalize(&mut self) {
        let lead = self.num.iter().position(|&c| c != 0);
        match lead {
            None => {
                self.lo = 0;
                self.num.clear();
                self.den = 0;
                return;
            }
            Some(i) if i > 0 => {
                self.num.drain(..i);
                self.lo += i as i64;
            }
            _ => {}
        }
        poly::trim(&mut self.num);
        let md = self.ctx.md();
        while self.den > 0 {
            match poly::div_base(&md, self.ctx.eps, self.ctx.gamma, &self.num) {
                Some(q) => {
                    self.num = q;
                    poly::trim(&mut self.num);
                    self.den -= 1;
                }
                None => break,
            }
        }
    }

    pub fn ctx(&self) -> Ctx {
        self.ctx
    }

    pub fn den_pow(&self) -> u32 {
        self.den
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn num_dense(&self) -> &[u64] {
        &self.num
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    /// Nonzero numerator terms (exponent, value), ascending.
    pub fn terms(&self) -> Vec<(i64, u64)> {
        self.num
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (self.lo + i as i64, c))
            .collect()
    }

    /// Lowest power of z that can occur in the expansion.
    pub fn order(&self) -> i64 {
        if self.is_zero() {
            0
        } else {
            self.lo
        }
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.ctx, other.ctx, "mixing coefficient contexts");
    }

    /// Numerator after raising the denominator to `den`.
    fn num_at(&self, den: u32) -> Vec<u64> {
        assert!(den >= self.den);
        if den == self.den {
            return self.num.clone();
        }
        let md = self.ctx.md();
        let f = poly::base_pow(&md, self.ctx.eps, self.ctx.gamma, den - self.den);
        poly::mul(&md, &self.num, &f)
    }

    fn combine(&self, other: &Self, subtract: bool) -> Self {
        self.check(other);
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if subtract { other.neg() } else { other.clone() };
        }
        let den = self.den.max(other.den);
        let a = self.num_at(den);
        let b = other.num_at(den);
        let lo = self.lo.min(other.lo);
        let len = ((self.lo + a.len() as i64).max(other.lo + b.len() as i64) - lo) as usize;
        let md = self.ctx.md();
        let mut out = vec![0u64; len];
        for (i, &c) in a.iter().enumerate() {
            out[(self.lo - lo) as usize + i] = c;
        }
        for (i, &c) in b.iter().enumerate() {
            let slot = &mut out[(other.lo - lo) as usize + i];
            *slot = if subtract {
                md.sub(*slot, c)
            } else {
                md.add(*slot, c)
            };
        }
        Self::new(self.ctx, lo, out, den)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    pub fn neg(&self) -> Self {
        let md = self.ctx.md();
        LaurentCoeff {
            ctx: self.ctx,
            lo: self.lo,
            num: self.num.iter().map(|&c| md.neg(c)).collect(),
            den: self.den,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.ctx);
        }
        let md = self.ctx.md();
        Self::new(
            self.ctx,
            self.lo + other.lo,
            poly::mul(&md, &self.num, &other.num),
            self.den + other.den,
        )
    }

    pub fn scale(&self, c: u64) -> Self {
        let md = self.ctx.md();
        Self::new(
            self.ctx,
            self.lo,
            self.num.iter().map(|&x| md.mul(x, c)).collect(),
            self.den,
        )
    }

    pub fn scale_i64(&self, c: i64) -> Self {
        self.scale(self.ctx.md().from_i64(c))
    }

    /// Multiply by z^k.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        LaurentCoeff {
            lo: self.lo + k,
            ..self.clone()
        }
    }

    /// Multiply by (1+eps z^gamma)^k, k of either sign.
    pub fn mul_base_pow(&self, k: i64) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        if k < 0 {
            return Self::new(self.ctx, self.lo, self.num.clone(), self.den + (-k) as u32);
        }
        let k = k as u32;
        if k <= self.den {
            return Self::new(self.ctx, self.lo, self.num.clone(), self.den - k);
        }
        let md = self.ctx.md();
        let f = poly::base_pow(&md, self.ctx.eps, self.ctx.gamma, k - self.den);
        Self::new(self.ctx, self.lo, poly::mul(&md, &self.num, &f), 0)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.ctx);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact division by 3^t. The result lives mod 3^(e-t).
    pub fn div_pow3(&self, t: u32) -> Result<Self> {
        assert!(
            t < self.ctx.e,
            "cannot divide by 3^{t} mod 3^{}",
            self.ctx.e
        );
        let q = pow3(t);
        if self.num.iter().any(|&c| c % q != 0) {
            return Err(Error::DivideNotExact(t));
        }
        let ctx = self.ctx.with_e(self.ctx.e - t);
        Ok(Self::new(
            ctx,
            self.lo,
            self.num.iter().map(|&c| c / q).collect(),
            self.den,
        ))
    }

    /// Multiply by 3^t, moving to modulus 3^e (e <= current e + t).
    pub fn mul_pow3_into(&self, t: u32, e: u32) -> Self {
        assert!(e <= self.ctx.e + t, "lifting beyond the known precision");
        let ctx = self.ctx.with_e(e);
        let md = ctx.md();
        let f = pow3(t) % md.m;
        Self::new(
            ctx,
            self.lo,
            self.num.iter().map(|&c| md.mul(c % md.m, f)).collect(),
            self.den,
        )
    }

    /// Reinterpret the residues in a larger modulus (values unchanged).
    pub fn lift(&self, e: u32) -> Self {
        assert!(e >= self.ctx.e);
        Self::new(self.ctx.with_e(e), self.lo, self.num.clone(), self.den)
    }

    pub fn reduce(&self, e: u32) -> Self {
        assert!(e <= self.ctx.e);
        let m = pow3(e);
        Self::new(
            self.ctx.with_e(e),
            self.lo,
            self.num.iter().map(|&c| c % m).collect(),
            self.den,
        )
    }

    /// Least 3-adic valuation over the numerator (e for zero).
    pub fn valuation(&self) -> u32 {
        let md = self.ctx.md();
        self.num
            .iter()
            .map(|&c| md.val(c))
            .min()
            .unwrap_or(self.ctx.e)
    }

    pub fn derivative(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let md = self.ctx.md();
        let dp: Vec<u64> = self
            .num
            .iter()
            .enumerate()
            .map(|(i, &c)| md.mul(c, md.from_i64(self.lo + i as i64)))
            .collect();
        let dp = LaurentCoeff::new(self.ctx, self.lo - 1, dp, 0);
        if self.den == 0 {
            return dp;
        }
        // (P'(1+u) - L eps gamma z^(gamma-1) P) / (1+u)^(L+1)
        let ctx = self.ctx;
        let p = LaurentCoeff {
            den: 0,
            ..self.clone()
        };
        let t1 = dp.mul_base_pow(1);
        let k = self.den as i64 * ctx.eps as i64 * ctx.gamma as i64;
        let t2 = p.shift(ctx.gamma as i64 - 1).scale_i64(k);
        t1.sub(&t2).mul_base_pow(-(self.den as i64 + 1))
    }

    /// Substitute z -> eps z^gamma into a coefficient over base 1+z.
    pub fn substitute_base(&self, ctx: Ctx) -> Self {
        assert!(
            self.ctx.eps == 1 && self.ctx.gamma == 1,
            "substitution expects base 1+z"
        );
        assert!(self.lo >= 0, "substitution expects a polynomial numerator");
        let md = ctx.md();
        let g = ctx.gamma as usize;
        let lo = self.lo * ctx.gamma as i64;
        let mut num = vec![
            0u64;
            if self.num.is_empty() {
                0
            } else {
                (self.num.len() - 1) * g + 1
            }
        ];
        for (i, &c) in self.num.iter().enumerate() {
            let k = self.lo + i as i64;
            let c = c % md.m;
            num[i * g] = if ctx.eps < 0 && k % 2 != 0 {
                md.neg(c)
            } else {
                c
            };
        }
        Self::new(ctx, lo, num, self.den)
    }

    /// Evaluate z -> z^k (k >= 1) on a coefficient over base 1+eps z^gamma;
    /// the result lives over base 1+eps z^(gamma k).
    pub fn compose_power(&self, k: u32) -> Self {
        let ctx = Ctx::new(self.ctx.eps, self.ctx.gamma * k, self.ctx.e);
        let k = k as usize;
        let mut num = vec![
            0u64;
            if self.num.is_empty() {
                0
            } else {
                (self.num.len() - 1) * k + 1
            }
        ];
        for (i, &c) in self.num.iter().enumerate() {
            num[i * k] = c;
        }
        Self::new(ctx, self.lo * k as i64, num, self.den)
    }

    /// Expansion truncated at degree `top`.
    pub fn to_series(&self, top: i64) -> TruncSeries {
        let md = self.ctx.md();
        let min_deg = self.order().min(0);
        let mut s = TruncSeries::zero(self.ctx.e, min_deg, top);
        for (i, &c) in self.num.iter().enumerate() {
            let d = self.lo + i as i64;
            if d > top {
                break;
            }
            s.coeffs[(d - min_deg) as usize] = c;
        }
        let g = self.ctx.gamma as usize;
        for _ in 0..self.den {
            // b_n = a_n - eps b_(n-gamma)
            for i in g..s.coeffs.len() {
                let prev = s.coeffs[i - g];
                s.coeffs[i] = if self.ctx.eps > 0 {
                    md.sub(s.coeffs[i], prev)
                } else {
                    md.add(s.coeffs[i], prev)
                };
            }
        }
        s
    }

    pub fn to_json(&self) -> Value {
        let num: Vec<Value> = self
            .terms()
            .into_iter()
            .map(|(k, c)| json!([k, c]))
            .collect();
        json!({ "den_pow": self.den, "num": num })
    }

    pub fn from_json(ctx: Ctx, v: &Value) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed coefficient {v}"));
        let den = v.get("den_pow").and_then(Value::as_u64).ok_or_else(bad)? as u32;
        let terms = v.get("num").and_then(Value::as_array).ok_or_else(bad)?;
        let md = ctx.md();
        let mut out = LaurentCoeff::zero(ctx);
        for t in terms {
            let pair = t.as_array().filter(|p| p.len() == 2).ok_or_else(bad)?;
            let k = pair[0].as_i64().ok_or_else(bad)?;
            let c = pair[1].as_i64().ok_or_else(bad)?;
            out = out.add(&LaurentCoeff::new(ctx, k, vec![md.from_i64(c)], 0));
        }
        Ok(out.mul_base_pow(-(den as i64)))
    }
}

impl fmt::Debug for LaurentCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let md = self.ctx.md();
        let mut parts = Vec::new();
        for (k, c) in self.terms() {
            let c = md.signed(c);
            let mono = match k {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{k}"),
            };
            parts.push(match (c, mono.is_empty()) {
                (_, true) => format!("{c}"),
                (1, false) => mono,
                (-1, false) => format!("-{mono}"),
                _ => format!("{c}*{mono}"),
            });
        }
        let num = parts.join(" + ").replace("+ -", "- ");
        if self.den == 0 {
            write!(f, "{num}")
        } else {
            let sign = if self.ctx.eps > 0 { '+' } else { '-' };
            let base = if self.ctx.gamma == 1 {
                "z".to_string()
            } else {
                format!("z^{}", self.ctx.gamma)
            };
            write!(f, "({num})/(1{sign}{base})^{}", self.den)
        }
    }
}

type InvKey = (u32, u64, i64, u32);

fn inv_memo() -> &'static Mutex<HashMap<InvKey, Arc<LaurentCoeff>>> {
    static MEMO: OnceLock<Mutex<HashMap<InvKey, Arc<LaurentCoeff>>>> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

fn binom_small(n: u64, k: u64) -> u64 {
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r as u64
}

/// An element of the ring over base 1+z congruent to 1/(1+z^(3^j))^alpha
/// modulo 3^beta; coefficients are carried mod 3^e.
pub fn rewrite_inv_1pz3j(j: u32, alpha: u64, beta: u32, e: u32) -> LaurentCoeff {
    assert!(e >= beta, "need e >= beta");
    inv_rec(j, alpha, beta as i64, e).as_ref().clone()
}

fn inv_rec(j: u32, alpha: u64, beta: i64, e: u32) -> Arc<LaurentCoeff> {
    let ctx = Ctx::new(1, 1, e);
    if beta <= 0 {
        return Arc::new(LaurentCoeff::zero(ctx));
    }
    if j == 0 {
        return Arc::new(LaurentCoeff::base_pow(ctx, -(alpha as i64)));
    }
    let key = (j, alpha, beta, e);
    if let Some(v) = inv_memo().lock().unwrap().get(&key) {
        return v.clone();
    }
    // (1+x)^(3a) = sum_l C(a,l) (1+x^3)^(a-l) (3x(1+x))^l, x = z^(3^(j-1))
    let step = 3u64.pow(j - 1) as i64;
    let md = ctx.md();
    let mut acc = inv_rec(j - 1, 3 * alpha, beta, e).as_ref().clone();
    let top = alpha.min((beta - 1).max(0) as u64);
    for l in 1..=top {
        let c = md.mul(binom_small(alpha, l) % md.m, pow3(l as u32) % md.m);
        let a = inv_rec(j - 1, 3 * alpha - l, beta - l as i64, e);
        let b = inv_rec(j, l, beta - l as i64, e);
        let term = a.mul(&b).shift(step * l as i64).scale(c);
        acc = acc.add(&term);
    }
    let out = Arc::new(acc);
    inv_memo().lock().unwrap().insert(key, out.clone());
    out
}

/// 1/(1+u^(3^j))^alpha mod 3^beta with u = eps z^gamma, in context ctx.
pub fn rewrite_inv_general(ctx: Ctx, j: u32, alpha: u64, beta: u32) -> LaurentCoeff {
    rewrite_inv_1pz3j(j, alpha, beta.min(ctx.e), ctx.e).substitute_base(ctx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c1(e: u32) -> Ctx {
        Ctx::new(1, 1, e)
    }

    #[test]
    fn reciprocal_pair() {
        let ctx = c1(3);
        let a = LaurentCoeff::from_i64(ctx, -1, &[1, 1], 0);
        let b = LaurentCoeff::from_i64(ctx, 1, &[1], 1);
        assert_eq!(a.mul(&b), LaurentCoeff::one(ctx));
    }

    #[test]
    fn exact_division() {
        let ctx = c1(2);
        let a = LaurentCoeff::from_i64(ctx, 1, &[3, 6], 0);
        let q = a.div_pow3(1).unwrap();
        assert_eq!(q.terms(), vec![(1, 1), (2, 2)]);
        assert_eq!(
            LaurentCoeff::from_i64(ctx, 0, &[1, 3], 0).div_pow3(1),
            Err(Error::DivideNotExact(1))
        );
    }

    #[test]
    fn derivative_of_inverse() {
        let ctx = c1(2);
        let d = LaurentCoeff::base_pow(ctx, -1).derivative();
        assert_eq!(d.den_pow(), 2);
        assert_eq!(d.terms(), vec![(0, 8)]);
    }

    #[test]
    fn series_expansions() {
        let s = LaurentCoeff::base_pow(c1(1), -1).to_series(3);
        assert_eq!(s.coeffs, vec![1, 2, 1, 2]);
        let s = LaurentCoeff::monomial(c1(1), 1, -2).to_series(0);
        assert_eq!((s.min_deg, s.coeffs.clone()), (-2, vec![1, 0, 0]));
        let s = LaurentCoeff::base_pow(Ctx::new(-1, 1, 2), -1).to_series(3);
        assert_eq!(s.coeffs, vec![1, 1, 1, 1]);
    }

    #[test]
    fn canonical_denominator() {
        let ctx = Ctx::new(-1, 2, 3);
        let a = LaurentCoeff::from_i64(ctx, 0, &[1, 0, -1], 2);
        assert_eq!(a.den_pow(), 1);
        assert_eq!(a.terms(), vec![(0, 1)]);
    }

    #[test]
    fn rewrite_small_cases() {
        let r = rewrite_inv_1pz3j(0, 1, 2, 2);
        assert_eq!(r, LaurentCoeff::base_pow(c1(2), -1));
        let r = rewrite_inv_1pz3j(1, 1, 1, 1);
        assert_eq!(r, LaurentCoeff::base_pow(c1(1), -3));
        let r = rewrite_inv_1pz3j(1, 1, 2, 2);
        let want =
            LaurentCoeff::base_pow(c1(2), -3).add(&LaurentCoeff::from_i64(c1(2), 1, &[3], 5));
        assert_eq!(r, want);
    }

    #[test]
    fn json_round_trip() {
        let ctx = Ctx::new(-1, 2, 3);
        let a = LaurentCoeff::from_i64(ctx, -2, &[4, 0, 13, 5], 3);
        let v = a.to_json();
        assert_eq!(LaurentCoeff::from_json(ctx, &v).unwrap(), a);
    }
}
