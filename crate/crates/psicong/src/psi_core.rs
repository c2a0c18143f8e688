//! The series Psi and polynomials in Psi(eps z^gamma) modulo the relation
//! (Psi^2 - 1/(1+eps z^gamma))^(3^alpha) = 0.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::laurent::{rewrite_inv_general, Ctx, LaurentCoeff, TruncSeries};
use crate::ring3::pow3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PsiContext {
    pub eps: i8,
    pub gamma: u32,
    pub alpha: u32,
    pub e: u32,
}

impl PsiContext {
    pub fn new(eps: i8, gamma: u32, alpha: u32, e: u32) -> Self {
        assert!(alpha >= 1, "alpha must be positive");
        assert!(
            e as u64 <= pow3(alpha),
            "modulus 3^{e} exceeds 3^(3^{alpha})"
        );
        let _ = Ctx::new(eps, gamma, e);
        PsiContext {
            eps,
            gamma,
            alpha,
            e,
        }
    }

    pub fn lc(&self) -> Ctx {
        Ctx::new(self.eps, self.gamma, self.e)
    }

    /// Number of stored coefficients, 2*3^alpha.
    pub fn len(&self) -> usize {
        2 * pow3(self.alpha) as usize
    }

    pub fn with_e(&self, e: u32) -> Self {
        PsiContext::new(self.eps, self.gamma, self.alpha, e)
    }
}

/// Truncated series of Psi(eps z^gamma) mod 3^e.
pub fn psi_series(eps: i8, gamma: u32, e: u32, top: i64) -> TruncSeries {
    let mut s = TruncSeries::zero(e, 0, top.max(0));
    let md = s.md;
    let g = gamma as u64;
    // exponents m with ternary digits in {0,1}: enumerate by binary counting
    let mut b: u64 = 0;
    loop {
        let mut m = 0u64;
        let mut p = 1u64;
        let mut x = b;
        let mut big = false;
        while x > 0 {
            if x & 1 == 1 {
                m += p;
            }
            x >>= 1;
            if x > 0 {
                p = match p.checked_mul(3) {
                    Some(v) => v,
                    None => {
                        big = true;
                        break;
                    }
                };
            }
        }
        if big || m.saturating_mul(g) > top.max(0) as u64 {
            // binary counting is monotone in m
            break;
        }
        let c = if eps < 0 && m % 2 == 1 { md.neg(1) } else { 1 };
        s.set((m * g) as i64, c);
        b += 1;
    }
    s
}

pub fn psi_series_ctx(ctx: &PsiContext, top: i64) -> TruncSeries {
    psi_series(ctx.eps, ctx.gamma, ctx.e, top)
}

#[derive(Clone, PartialEq, Eq)]
pub struct PsiPoly {
    ctx: PsiContext,
    coeffs: Vec<LaurentCoeff>,
}

fn relation(ctx: &PsiContext) -> Arc<Vec<LaurentCoeff>> {
    static MEMO: OnceLock<Mutex<HashMap<PsiContext, Arc<Vec<LaurentCoeff>>>>> = OnceLock::new();
    let memo = MEMO.get_or_init(Default::default);
    if let Some(r) = memo.lock().unwrap().get(ctx) {
        return r.clone();
    }
    // Psi^(2N) = -sum_{k<N} C(N,k) (-1)^(N-k) (1+u)^(-(N-k)) Psi^(2k)
    let n = pow3(ctx.alpha);
    let lc = ctx.lc();
    let md = lc.md();
    let mut binom = 1u64;
    let mut rel = Vec::with_capacity(n as usize);
    for k in 0..n {
        let sign = if (n - k).is_multiple_of(2) {
            md.neg(1)
        } else {
            1
        };
        rel.push(LaurentCoeff::base_pow(lc, -((n - k) as i64)).scale(md.mul(binom % md.m, sign)));
        binom = (binom as u128 * (n - k) as u128 / (k + 1) as u128) as u64;
    }
    let rel = Arc::new(rel);
    memo.lock().unwrap().insert(*ctx, rel.clone());
    rel
}

/// Log-derivative d/dz log Psi(eps z^gamma) as an element of the coefficient ring.
fn log_derivative(ctx: &PsiContext) -> Arc<LaurentCoeff> {
    static MEMO: OnceLock<Mutex<HashMap<PsiContext, Arc<LaurentCoeff>>>> = OnceLock::new();
    let memo = MEMO.get_or_init(Default::default);
    if let Some(r) = memo.lock().unwrap().get(ctx) {
        return r.clone();
    }
    let lc = ctx.lc();
    let mut acc = LaurentCoeff::zero(lc);
    for j in 0..ctx.e {
        // 3^j u^(3^j - 1) / (1 + u^(3^j)); the exponent 3^j - 1 is even
        let inv = rewrite_inv_general(lc, j, 1, ctx.e - j);
        let k = (pow3(j) as i64 - 1) * ctx.gamma as i64;
        acc = acc.add(&inv.shift(k).scale(pow3(j) % lc.md().m));
    }
    let d = acc
        .shift(ctx.gamma as i64 - 1)
        .scale_i64(ctx.eps as i64 * ctx.gamma as i64);
    let d = Arc::new(d);
    memo.lock().unwrap().insert(*ctx, d.clone());
    d
}

impl PsiPoly {
    pub fn zero(ctx: PsiContext) -> Self {
        PsiPoly {
            ctx,
            coeffs: vec![LaurentCoeff::zero(ctx.lc()); ctx.len()],
        }
    }

    pub fn one(ctx: PsiContext) -> Self {
        Self::constant(ctx, LaurentCoeff::one(ctx.lc()))
    }

    pub fn constant(ctx: PsiContext, a: LaurentCoeff) -> Self {
        let mut p = Self::zero(ctx);
        assert_eq!(a.ctx(), ctx.lc(), "coefficient context mismatch");
        p.coeffs[0] = a;
        p
    }

    /// Psi^i, reduced.
    pub fn psi_pow(ctx: PsiContext, i: usize) -> Self {
        let mut v = vec![LaurentCoeff::zero(ctx.lc()); (i + 1).max(ctx.len())];
        v[i] = LaurentCoeff::one(ctx.lc());
        Self::from_coeffs(ctx, v)
    }

    /// Builds sum a_i Psi^i from any number of coefficients, reducing eagerly.
    pub fn from_coeffs(ctx: PsiContext, mut coeffs: Vec<LaurentCoeff>) -> Self {
        let lc = ctx.lc();
        for a in &coeffs {
            assert_eq!(a.ctx(), lc, "coefficient context mismatch");
        }
        let len = ctx.len();
        if coeffs.len() > len {
            let rel = relation(&ctx);
            let two_n = len;
            for d in (two_n..coeffs.len()).rev() {
                let c = std::mem::replace(&mut coeffs[d], LaurentCoeff::zero(lc));
                if c.is_zero() {
                    continue;
                }
                for (k, r) in rel.iter().enumerate() {
                    let t = d - two_n + 2 * k;
                    coeffs[t] = coeffs[t].add(&c.mul(r));
                }
            }
        }
        coeffs.resize(len, LaurentCoeff::zero(lc));
        PsiPoly { ctx, coeffs }
    }

    pub fn ctx(&self) -> PsiContext {
        self.ctx
    }

    pub fn coeffs(&self) -> &[LaurentCoeff] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &LaurentCoeff {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(LaurentCoeff::is_zero)
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.ctx, other.ctx, "mixing Psi contexts");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.add(b))
            .collect();
        PsiPoly {
            ctx: self.ctx,
            coeffs,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.sub(b))
            .collect();
        PsiPoly {
            ctx: self.ctx,
            coeffs,
        }
    }

    pub fn neg(&self) -> Self {
        PsiPoly {
            ctx: self.ctx,
            coeffs: self.coeffs.iter().map(LaurentCoeff::neg).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let lc = self.ctx.lc();
        let n = self.coeffs.len();
        let mut prod = vec![LaurentCoeff::zero(lc); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                prod[i + j] = prod[i + j].add(&a.mul(b));
            }
        }
        Self::from_coeffs(self.ctx, prod)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.ctx);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn mul_coeff(&self, a: &LaurentCoeff) -> Self {
        PsiPoly {
            ctx: self.ctx,
            coeffs: self.coeffs.iter().map(|c| c.mul(a)).collect(),
        }
    }

    pub fn scale_i64(&self, c: i64) -> Self {
        PsiPoly {
            ctx: self.ctx,
            coeffs: self.coeffs.iter().map(|a| a.scale_i64(c)).collect(),
        }
    }

    pub fn derivative(&self) -> Self {
        let d = log_derivative(&self.ctx);
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let mut r = a.derivative();
                if i > 0 && !a.is_zero() {
                    r = r.add(&a.mul(&d).scale_i64(i as i64));
                }
                r
            })
            .collect();
        PsiPoly {
            ctx: self.ctx,
            coeffs,
        }
    }

    /// Reduce coefficients to a smaller modulus (the relation stays valid).
    pub fn reduce(&self, e: u32) -> Self {
        let ctx = self.ctx.with_e(e);
        PsiPoly {
            ctx,
            coeffs: self.coeffs.iter().map(|a| a.reduce(e)).collect(),
        }
    }

    /// Exact division by 3^t; the result lives mod 3^(e-t).
    pub fn div_pow3(&self, t: u32) -> Result<Self> {
        let ctx = self.ctx.with_e(self.ctx.e - t);
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| a.div_pow3(t))
            .collect::<Result<Vec<_>>>()?;
        Ok(PsiPoly { ctx, coeffs })
    }

    /// Lowest z-power occurring among the coefficients.
    pub fn order(&self) -> i64 {
        self.coeffs
            .iter()
            .filter(|a| !a.is_zero())
            .map(|a| a.order())
            .min()
            .unwrap_or(0)
    }

    pub fn to_series(&self, top: i64) -> TruncSeries {
        let lo = self.order().min(0);
        let e = self.ctx.e;
        let reach = top - lo;
        let psi = psi_series_ctx(&self.ctx, reach);
        let mut acc = TruncSeries::zero(e, lo, top);
        let mut pw = TruncSeries::one(e, reach);
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                pw = pw.mul(&psi, reach);
            }
            if a.is_zero() {
                continue;
            }
            let term = a.to_series(top).mul(&pw, top);
            acc = acc.add(&term);
        }
        acc
    }

    /// Equality of the represented series up to degree `top`.
    pub fn series_eq(&self, other: &Self, top: i64) -> bool {
        self.check(other);
        self.sub(other).to_series(top).is_zero()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "epsilon": self.ctx.eps,
            "gamma": self.ctx.gamma,
            "alpha": self.ctx.alpha,
            "mod_exp": self.ctx.e,
            "coeffs": self.coeffs.iter().map(LaurentCoeff::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |k: &str| {
            v.get(k)
                .and_then(Value::as_i64)
                .ok_or_else(|| Error::Parse(format!("missing field {k}")))
        };
        let eps = field("epsilon")?;
        let (gamma, alpha, e) = (field("gamma")?, field("alpha")?, field("mod_exp")?);
        if !(eps == 1 || eps == -1)
            || gamma < 1
            || alpha < 1
            || e < 1
            || e as u64 > pow3(alpha as u32)
        {
            return Err(Error::Parse("invalid Psi context".into()));
        }
        let ctx = PsiContext::new(eps as i8, gamma as u32, alpha as u32, e as u32);
        let arr = v
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing coeffs".into()))?;
        let coeffs = arr
            .iter()
            .map(|c| LaurentCoeff::from_json(ctx.lc(), c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_coeffs(ctx, coeffs))
    }
}

impl fmt::Debug for PsiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PsiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arg = match (self.ctx.eps, self.ctx.gamma) {
            (1, 1) => "z".to_string(),
            (-1, 1) => "-z".to_string(),
            (1, g) => format!("z^{g}"),
            (_, g) => format!("-z^{g}"),
        };
        let mut parts = Vec::new();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            parts.push(match i {
                0 => format!("{a}"),
                1 => format!("({a})*Psi({arg})"),
                _ => format!("({a})*Psi({arg})^{i}"),
            });
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{}  (mod 3^{})", parts.join(" + "), self.ctx.e)
    }
}

/// Minimal-polynomial rows: A0^a * A1^b (or A2) modulo 3^k.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MinPolyFixture {
    pub name: &'static str,
    pub a0: u32,
    pub a1: u32,
    pub a2: bool,
    pub mod_exp: u32,
}

impl MinPolyFixture {
    pub const fn new(name: &'static str, a0: u32, a1: u32, a2: bool, mod_exp: u32) -> Self {
        MinPolyFixture {
            name,
            a0,
            a1,
            a2,
            mod_exp,
        }
    }

    /// Degree in t.
    pub fn degree(&self) -> u64 {
        if self.a2 {
            18
        } else {
            2 * self.a0 as u64 + 6 * self.a1 as u64
        }
    }

    pub fn table() -> Vec<MinPolyFixture> {
        vec![
            Self::new("A0", 1, 0, false, 1),
            Self::new("A0^2", 2, 0, false, 2),
            Self::new("A0^3", 3, 0, false, 3),
            Self::new("A1", 0, 1, false, 4),
            Self::new("A0*A1", 1, 1, false, 5),
            Self::new("A0^2*A1", 2, 1, false, 6),
            Self::new("A1^2", 0, 2, false, 7),
            Self::new("A1^2", 0, 2, false, 8),
            Self::new("A0*A1^2", 1, 2, false, 9),
            Self::new("A0^2*A1^2", 2, 2, false, 10),
            Self::new("A1^3", 0, 3, false, 11),
            Self::new("A1^3", 0, 3, false, 12),
            Self::new("A2", 0, 0, true, 13),
        ]
    }
}

fn inv_base_series(e: u32, k: i64, top: i64) -> TruncSeries {
    LaurentCoeff::base_pow(Ctx::new(1, 1, e), -k).to_series(top)
}

/// Substitute Psi(z) for t and test for the zero series mod 3^k up to `top`.
pub fn check_minpoly(fix: &MinPolyFixture, top: i64) -> bool {
    minpoly_residual(fix, top).is_zero()
}

pub fn minpoly_residual(fix: &MinPolyFixture, top: i64) -> TruncSeries {
    let e = fix.mod_exp;
    let md = crate::ring3::Modulus::new(e);
    let psi = psi_series(1, 1, e, top);
    let a0 = psi.mul(&psi, top).sub(&inv_base_series(e, 1, top));
    let c = |x: i64| md.from_i64(x);
    let a0_2 = a0.mul(&a0, top);
    let a0_3 = a0_2.mul(&a0, top);
    // A1 = A0^3 - 9/(1+z)^2 A0 + 27z/(1+z)^5
    let z = |s: TruncSeries| {
        let mut out = TruncSeries::zero(e, 0, top);
        for d in 1..=top {
            out.set(d, s.coeff(d - 1));
        }
        out
    };
    let a1 = a0_3
        .sub(&inv_base_series(e, 2, top).mul(&a0, top).scale(c(9)))
        .add(&z(inv_base_series(e, 5, top)).scale(c(27)));
    let mut acc = TruncSeries::one(e, top);
    if fix.a2 {
        let a1_3 = a1.mul(&a1, top).mul(&a1, top);
        let mut t = a1_3.sub(
            &inv_base_series(e, 6, top)
                .mul(&a1, top)
                .scale(c(3i64.pow(8))),
        );
        t = t.add(
            &z(inv_base_series(e, 9, top))
                .mul(&a0_2, top)
                .scale(c(3i64.pow(10))),
        );
        let z1z2 = z(inv_base_series(e, 12, top));
        let z1z2 = z1z2.add(&z(z(z1z2.clone())));
        t = t.sub(&z1z2.mul(&a0, top).scale(c(3i64.pow(11))));
        let mut z4 = inv_base_series(e, 17, top);
        for _ in 0..4 {
            z4 = z(z4);
        }
        t = t.add(&z4.scale(c(3i64.pow(12))));
        acc = acc.mul(&t, top);
    }
    for _ in 0..fix.a0 {
        acc = acc.mul(&a0, top);
    }
    for _ in 0..fix.a1 {
        acc = acc.mul(&a1, top);
    }
    acc
}
