//! Solving quadratic-type functional-differential equations modulo 3^(3^alpha)
//! in the Psi algebra, power-series uniqueness checks and sectioning.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::laurent::{Ctx, LaurentCoeff, TruncSeries};
use crate::poly;
use crate::psi_core::{PsiContext, PsiPoly};
use crate::ring3::{pow3, Modulus};

/// Integer polynomial in z, dense from degree 0.
pub type ZPoly = Vec<i64>;

/// A polynomial in z, F, F', F'', ... with integer coefficients. Each term is
/// c(z) times the product of F^(d) over the listed derivative orders.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiffPoly {
    terms: BTreeMap<Vec<u32>, ZPoly>,
}

fn zp_add(a: &[i64], b: &[i64]) -> ZPoly {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0))
        .collect()
}

fn zp_mul(a: &[i64], b: &[i64]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn zp_trim(mut p: ZPoly) -> ZPoly {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

impl DiffPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The polynomial c(z) with no F factor.
    pub fn constant(c: &[i64]) -> Self {
        Self::term(c, &[])
    }

    /// c(z) * prod F^(d) over `derivs`.
    pub fn term(c: &[i64], derivs: &[u32]) -> Self {
        let mut d = derivs.to_vec();
        d.sort_unstable();
        let mut out = Self::zero();
        let c = zp_trim(c.to_vec());
        if !c.is_empty() {
            out.terms.insert(d, c);
        }
        out
    }

    /// F^(d).
    pub fn f(d: u32) -> Self {
        Self::term(&[1], &[d])
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &ZPoly)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            let s = zp_trim(zp_add(
                out.terms.get(k).map(Vec::as_slice).unwrap_or(&[]),
                c,
            ));
            if s.is_empty() {
                out.terms.remove(k);
            } else {
                out.terms.insert(k.clone(), s);
            }
        }
        out
    }

    pub fn scale(&self, c: i64) -> Self {
        self.mul(&Self::constant(&[c]))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let mut k = ka.clone();
                k.extend_from_slice(kb);
                out = out.add(&Self::term(&zp_mul(ca, cb), &k));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(&[1]);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Highest derivative order occurring.
    pub fn order(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|k| k.iter().copied())
            .max()
            .unwrap_or(0)
    }

    /// Substitutes a Psi polynomial for F.
    pub fn eval_psi(&self, f: &PsiPoly) -> PsiPoly {
        let ctx = f.ctx();
        let lc = ctx.lc();
        let mut derivs = vec![f.clone()];
        for _ in 0..self.order() {
            let next = derivs.last().unwrap().derivative();
            derivs.push(next);
        }
        let mut acc = PsiPoly::zero(ctx);
        for (k, c) in &self.terms {
            let mut t = PsiPoly::constant(ctx, LaurentCoeff::from_i64(lc, 0, c, 0));
            for &d in k {
                t = t.mul(&derivs[d as usize]);
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Substitutes a truncated power series for F, exact to degree `top`.
    pub fn eval_series(&self, f: &TruncSeries, top: i64) -> TruncSeries {
        let e = f.e();
        let mut derivs = vec![f.truncate(top + self.order() as i64)];
        for _ in 0..self.order() {
            let next = derivs.last().unwrap().derivative();
            derivs.push(next);
        }
        let mut acc = TruncSeries::zero(e, 0, top);
        for (k, c) in &self.terms {
            let mut t = TruncSeries::from_i64(e, 0, c)
                .window(0, top.max(c.len() as i64 - 1))
                .truncate(top);
            for &d in k {
                t = t.mul(&derivs[d as usize].truncate(top), top);
            }
            acc = acc.add(&t);
        }
        acc
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(
                f,
                "({})",
                LaurentCoeff::from_i64(Ctx::new(1, 1, 39), 0, c, 0)
            )?;
            for d in k {
                write!(f, "*F{}", "'".repeat(*d as usize))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// c2 F^2 + c1 F + c0 + 3 Q(z; F, F', ...) = 0 with Psi argument eps z^gamma.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionalEq {
    pub name: String,
    pub c0: ZPoly,
    pub c1: ZPoly,
    pub c2: ZPoly,
    pub q: DiffPoly,
    pub eps: i8,
    pub gamma: u32,
    /// Leading coefficients of the wanted solution when the equation alone
    /// leaves a choice (e.g. the sign of F(0)).
    pub init: Vec<i64>,
}

impl FunctionalEq {
    pub fn to_diffpoly(&self) -> DiffPoly {
        DiffPoly::term(&self.c2, &[0, 0])
            .add(&DiffPoly::term(&self.c1, &[0]))
            .add(&DiffPoly::constant(&self.c0))
            .add(&self.q.scale(3))
    }

    /// The power-series solution modulo 3^e, honouring `init`.
    pub fn series_solution(&self, e: u32, n: usize) -> Result<TruncSeries> {
        unique_series_solution_with(
            &self.to_diffpoly(),
            e,
            n,
            &self.init,
            SearchLimits::default(),
        )
    }

    pub fn derivative_order(&self) -> u32 {
        self.q.order()
    }
}

/// The constants of the mod-3 shape: c2 = sigma z^e1 (1+u)^e2 and
/// c1^2 - c0 c2 = z^(2 f1) (1+u)^(2 f2 + 1) S^2 modulo 3, u = eps z^gamma.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqShape {
    pub e1: u32,
    pub e2: u32,
    pub f1: u32,
    pub f2: u32,
    pub sigma: u64,
    pub cofactor: Vec<u64>,
}

impl EqShape {
    pub fn constants(&self) -> (u32, u32, u32, u32) {
        (self.e1, self.e2, self.f1, self.f2)
    }
}

fn mod3(p: &[i64]) -> Vec<u64> {
    let md = Modulus::new(1);
    let mut v: Vec<u64> = p.iter().map(|&c| md.from_i64(c)).collect();
    poly::trim(&mut v);
    v
}

/// Splits p = z^a (1+u)^b r over F_3 with r(0) != 0 and r not divisible by 1+u.
fn split_monomial(p: &[u64], eps: i8, gamma: u32) -> Option<(u32, u32, Vec<u64>)> {
    let md = Modulus::new(1);
    let a = p.iter().position(|&c| c != 0)?;
    let mut r = p[a..].to_vec();
    let mut b = 0;
    while let Some(q) = poly::div_base(&md, eps, gamma, &r) {
        let mut q = q;
        poly::trim(&mut q);
        if q.is_empty() {
            break;
        }
        r = q;
        b += 1;
    }
    Some((a as u32, b, r))
}

/// Square root over F_3 of a polynomial with constant term 1, if it exists.
fn poly_sqrt(r: &[u64]) -> Option<Vec<u64>> {
    let md = Modulus::new(1);
    let deg = r.len() - 1;
    if deg % 2 == 1 || r[0] != 1 {
        return None;
    }
    let n = deg / 2 + 1;
    let mut s = vec![0u64; n];
    s[0] = 1;
    // 2 s_0 s_k = r_k - sum_{0<i<k} s_i s_(k-i), and 1/2 = 2 mod 3
    for k in 1..n {
        let mut acc = r[k];
        for i in 1..k {
            acc = md.sub(acc, md.mul(s[i], s[k - i]));
        }
        s[k] = md.mul(acc, 2);
    }
    let mut sq = poly::mul(&md, &s, &s);
    poly::trim(&mut sq);
    if sq == r {
        Some(s)
    } else {
        None
    }
}

/// Checks the mod-3 shape conditions on c2 and the discriminant.
pub fn validate_equation(eqn: &FunctionalEq) -> Result<EqShape> {
    let (eps, gamma) = (eqn.eps, eqn.gamma);
    let c2 = mod3(&eqn.c2);
    let (e1, e2, rest) = split_monomial(&c2, eps, gamma)
        .ok_or_else(|| Error::ShapeMismatch("c2 vanishes mod 3".into()))?;
    if rest.len() != 1 {
        return Err(Error::ShapeMismatch(format!(
            "c2 mod 3 is not a monomial in z and 1+u: {rest:?}"
        )));
    }
    let sigma = rest[0];
    let md = Modulus::new(1);
    let c1 = mod3(&eqn.c1);
    let c0 = mod3(&eqn.c0);
    let disc = poly::sub(&md, &poly::mul(&md, &c1, &c1), &poly::mul(&md, &c0, &c2));
    let mut disc = disc;
    poly::trim(&mut disc);
    let (a, b, r) = split_monomial(&disc, eps, gamma)
        .ok_or_else(|| Error::ShapeMismatch("discriminant vanishes mod 3".into()))?;
    if a % 2 == 1 || b % 2 == 0 {
        return Err(Error::ShapeMismatch(format!(
            "discriminant has z^{a} (1+u)^{b}"
        )));
    }
    let cofactor = poly_sqrt(&r).ok_or_else(|| {
        Error::ShapeMismatch(format!("discriminant cofactor {r:?} is not a square"))
    })?;
    Ok(EqShape {
        e1,
        e2,
        f1: a / 2,
        f2: (b - 1) / 2,
        sigma,
        cofactor,
    })
}

/// Coefficient of z^j in F^(d) given the coefficients f of F.
fn deriv_coeff(md: &Modulus, f: &[u64], d: u32, j: i64) -> u64 {
    if j < 0 {
        return 0;
    }
    let idx = (j + d as i64) as usize;
    let mut c = f[idx];
    for t in 0..d as i64 {
        c = md.mul(c, md.from_i64(j + d as i64 - t));
    }
    c
}

/// As `deriv_coeff`, reading zeros past the end of f.
fn deriv_coeff_padded(md: &Modulus, f: &[u64], d: u32, j: i64) -> u64 {
    if j < 0 || (j + d as i64) as usize >= f.len() {
        return 0;
    }
    deriv_coeff(md, f, d, j)
}

/// (derivative orders, coefficient in z) pairs
type Terms = Vec<(Vec<u32>, Vec<u64>)>;

struct Compiled {
    md: Modulus,
    terms: Terms,
    shift: i64,
    /// Taylor coefficients D_a G, keyed by the multiset a of derivative
    /// orders (a = [] is G itself)
    taylor: Vec<(Vec<u32>, Terms)>,
}

/// Sub-multisets of a sorted multiset, with the multinomial weight of each
/// choice and the remaining factors.
fn splits(k: &[u32]) -> Vec<(Vec<u32>, u64, Vec<u32>)> {
    let mut groups: Vec<(u32, usize)> = Vec::new();
    for &d in k {
        match groups.last_mut() {
            Some((x, m)) if *x == d => *m += 1,
            _ => groups.push((d, 1)),
        }
    }
    let mut out = vec![(Vec::new(), 1u64, Vec::new())];
    for (d, m) in groups {
        let mut next = Vec::new();
        for (a, w, rest) in &out {
            let mut binom = 1u64;
            for take in 0..=m {
                let mut a2 = a.clone();
                a2.extend(std::iter::repeat_n(d, take));
                let mut r2 = rest.clone();
                r2.extend(std::iter::repeat_n(d, m - take));
                next.push((a2, w * binom, r2));
                binom = binom * (m - take) as u64 / (take + 1) as u64;
            }
        }
        out = next;
    }
    out
}

impl Compiled {
    fn new(g: &DiffPoly, e: u32) -> Self {
        let md = Modulus::new(e);
        let mut terms = Vec::new();
        let mut shift = i64::MIN;
        for (k, c) in g.terms() {
            let mut c: Vec<u64> = c.iter().map(|&x| md.from_i64(x)).collect();
            poly::trim(&mut c);
            let Some(low) = c.iter().position(|&x| x != 0) else {
                continue;
            };
            if !k.is_empty() {
                let dmax = *k.iter().max().unwrap() as i64;
                shift = shift.max(dmax - low as i64);
            }
            terms.push((k.clone(), c));
        }
        let mut taylor: BTreeMap<Vec<u32>, BTreeMap<Vec<u32>, Vec<u64>>> = BTreeMap::new();
        for (k, c) in &terms {
            for (a, w, rest) in splits(k) {
                let slot = taylor.entry(a).or_default().entry(rest).or_default();
                let wc: Vec<u64> = c.iter().map(|&x| md.mul(x, w % md.m)).collect();
                *slot = poly::add(&md, slot, &wc);
            }
        }
        let taylor = taylor
            .into_iter()
            .map(|(a, t)| (a, t.into_iter().collect()))
            .collect();
        Compiled {
            md,
            terms,
            shift: if shift == i64::MIN { 0 } else { shift },
            taylor,
        }
    }

    /// A polynomial in z, F, F', ... evaluated at the polynomial f, below
    /// degree `len`.
    fn eval_trunc(
        &self,
        terms: &[(Vec<u32>, Vec<u64>)],
        derivs: &BTreeMap<u32, Vec<u64>>,
        len: usize,
    ) -> Vec<u64> {
        let md = &self.md;
        let mut acc = vec![0u64; len];
        for (k, c) in terms {
            let mut prod = c.clone();
            prod.truncate(len);
            for d in k {
                prod = poly::mul_trunc(md, &prod, &derivs[d], len);
            }
            for (i, x) in prod.into_iter().enumerate() {
                acc[i] = md.add(acc[i], x);
            }
        }
        acc
    }

    /// False when some coefficient of G(f + z^L Y) is nonzero for every
    /// tail Y, L = f.len(). Uses G(f + T) = sum_a D_a G(f) T^a, where the
    /// factor T^(j) has order at least L - j.
    fn viable(&self, f: &[u64]) -> bool {
        let md = &self.md;
        let l = f.len() as i64;
        let cap = 2 * f.len() + 8;
        let mut derivs: BTreeMap<u32, Vec<u64>> = BTreeMap::new();
        for (a, t) in &self.taylor {
            for d in a.iter().chain(t.iter().flat_map(|(k, _)| k.iter())) {
                derivs.entry(*d).or_insert_with(|| {
                    (0..cap as i64)
                        .map(|j| deriv_coeff_padded(md, f, *d, j))
                        .collect()
                });
            }
        }
        let mut fixed = cap as i64;
        let mut g = None;
        for (a, t) in &self.taylor {
            let s = self.eval_trunc(t, &derivs, cap);
            if a.is_empty() {
                g = Some(s);
                continue;
            }
            let ord = s
                .iter()
                .position(|&x| x != 0)
                .map_or(cap as i64, |o| o as i64);
            let tail: i64 = a.iter().map(|&j| (l - j as i64).max(0)).sum();
            fixed = fixed.min(ord + tail);
        }
        match g {
            Some(g) => g[..fixed as usize].iter().all(|&x| x == 0),
            None => true,
        }
    }

    /// [z^deg] of the equation for the prefix f, which must reach deg + shift.
    fn coeff(&self, f: &[u64], deg: i64) -> u64 {
        let md = &self.md;
        let mut acc = 0u64;
        for (k, c) in &self.terms {
            for (i, &ci) in c.iter().enumerate() {
                if ci == 0 || i as i64 > deg {
                    continue;
                }
                let rest = deg - i as i64;
                let v = match k.len() {
                    0 => u64::from(rest == 0),
                    1 => deriv_coeff(md, f, k[0], rest),
                    2 => {
                        let mut s = 0u64;
                        for j in 0..=rest {
                            let a = deriv_coeff(md, f, k[0], j);
                            if a != 0 {
                                s = md.add(s, md.mul(a, deriv_coeff(md, f, k[1], rest - j)));
                            }
                        }
                        s
                    }
                    _ => {
                        let len = rest as usize + 1;
                        let mut prod = vec![1u64];
                        for &d in k {
                            let fs: Vec<u64> =
                                (0..len as i64).map(|j| deriv_coeff(md, f, d, j)).collect();
                            prod = poly::mul_trunc(md, &prod, &fs, len);
                        }
                        prod[rest as usize]
                    }
                };
                acc = md.add(acc, md.mul(ci, v));
            }
        }
        acc
    }
}

/// Limits for the survivor search in `unique_series_solution`.
#[derive(Clone, Copy, Debug)]
pub struct SearchLimits {
    pub max_survivors: usize,
    pub extra_len: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_survivors: 5000,
            extra_len: 6,
        }
    }
}

/// The power-series solution of g = 0 modulo 3^e, first n coefficients.
pub fn unique_series_solution(g: &DiffPoly, e: u32, n: usize) -> Result<TruncSeries> {
    unique_series_solution_with(g, e, n, &[], SearchLimits::default())
}

/// As `unique_series_solution`, with the first coefficients fixed to `init`.
pub fn unique_series_solution_with(
    g: &DiffPoly,
    e: u32,
    n: usize,
    init: &[i64],
    lim: SearchLimits,
) -> Result<TruncSeries> {
    let comp = Compiled::new(g, e);
    let m = comp.md.m;
    let mut survivors: Vec<Vec<u64>> = vec![Vec::new()];
    let max_len = 2 * n + lim.extra_len + init.len();
    let mut len = 0usize;
    loop {
        let agreed = common_prefix(&survivors);
        if agreed >= n {
            let f = survivors[0][..n].to_vec();
            return Ok(TruncSeries::from_coeffs(e, 0, f));
        }
        if survivors.len() > lim.max_survivors || len >= max_len {
            return Err(Error::NonUnique { index: agreed, e });
        }
        // degrees checkable once f_0..f_len are known
        let deg = len as i64 - comp.shift;
        let mut next = Vec::new();
        let choices: Vec<u64> = match init.get(len) {
            Some(&c) => vec![comp.md.from_i64(c)],
            None => (0..m).collect(),
        };
        for s in &survivors {
            for &x in &choices {
                let mut t = s.clone();
                t.push(x);
                if deg < 0 || comp.coeff(&t, deg) == 0 {
                    next.push(t);
                }
            }
        }
        if next.len() > 1 {
            next.retain(|t| comp.viable(t));
        }
        if next.is_empty() {
            let at = (deg.max(0)) as usize;
            return Err(Error::Inconsistent { index: at, e });
        }
        survivors = next;
        len += 1;
    }
}

fn common_prefix(v: &[Vec<u64>]) -> usize {
    let first = &v[0];
    let mut k = first.len();
    for s in &v[1..] {
        k = k.min(s.iter().zip(first).take_while(|(a, b)| a == b).count());
    }
    k
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub representation: PsiPoly,
    pub verified_prefix: usize,
    pub branch: i8,
    pub shape: EqShape,
}

pub fn default_prefix(alpha: u32) -> usize {
    2 * pow3(alpha + 2) as usize
}

/// Runs the base step and the lifting iteration for one sign branch.
pub fn solve_branch(eqn: &FunctionalEq, shape: &EqShape, alpha: u32, sign: i8) -> Result<PsiPoly> {
    let big_n = pow3(alpha) as usize;
    let e = big_n as u32;
    let ctx = PsiContext::new(eqn.eps, eqn.gamma, alpha, e);
    let lc = ctx.lc();
    let lc3 = lc.with_e(1);
    let g = eqn.to_diffpoly();
    let unit_inv = if shape.sigma == 1 { 1 } else { 2 };

    let a0 = LaurentCoeff::from_i64(lc3, 0, &eqn.c1, 0)
        .shift(-(shape.e1 as i64))
        .mul_base_pow(-(shape.e2 as i64))
        .scale(unit_inv);
    let cof: Vec<i64> = shape.cofactor.iter().map(|&c| c as i64).collect();
    let top_exp = shape.f2 as i64 - shape.e2 as i64 + (big_n as i64 + 1) / 2;
    let a3 = LaurentCoeff::from_i64(lc3, 0, &cof, 0)
        .shift(shape.f1 as i64 - shape.e1 as i64)
        .mul_base_pow(top_exp)
        .scale_i64(sign as i64);
    let mut coeffs = vec![LaurentCoeff::zero(lc); ctx.len()];
    coeffs[0] = a0.lift(e);
    coeffs[big_n] = a3.lift(e);
    let mut f = PsiPoly::from_coeffs(ctx, coeffs);

    // 2 c2 a3 = (2 sigma sign) S z^f1 (1+u)^(f2 + (N+1)/2) modulo 3
    let md3 = Modulus::new(1);
    let lead = md3.mul(md3.mul(2, shape.sigma), md3.from_i64(sign as i64));
    let lead_inv = md3.inv(lead).unwrap();
    let a_exp = shape.f2 as i64 + (big_n as i64 + 1) / 2;

    for beta in 1..e {
        let resid = g.eval_psi(&f);
        let rat = resid
            .div_pow3(beta)
            .map_err(|_| Error::DivisibilityFailure {
                beta,
                what: "residual not divisible".into(),
            })?
            .reduce(1);
        let mut b = vec![LaurentCoeff::zero(lc3); ctx.len()];
        for i in 0..ctx.len() {
            let r = rat.coeff(i);
            if r.is_zero() {
                continue;
            }
            // Rat_i + A b_(i-N) = 0 for i >= N, Rat_i + A (1+u)^(-N) b_(i+N) = 0 otherwise
            let (j, extra) = if i >= big_n {
                (i - big_n, 0)
            } else {
                (i + big_n, big_n as i64)
            };
            let x = r
                .scale(md3.neg(lead_inv))
                .shift(-(shape.f1 as i64))
                .mul_base_pow(extra - a_exp);
            b[j] = div_cofactor(&x, &shape.cofactor).ok_or_else(|| Error::DivisibilityFailure {
                beta,
                what: format!("Rat_{i} numerator not divisible by the discriminant cofactor"),
            })?;
        }
        let lifted: Vec<LaurentCoeff> = f
            .coeffs()
            .iter()
            .zip(&b)
            .map(|(a, bi)| a.add(&bi.lift(e).mul_pow3_into(beta, e)))
            .collect();
        f = PsiPoly::from_coeffs(ctx, lifted);
    }
    if !g.eval_psi(&f).is_zero() {
        return Err(Error::DivisibilityFailure {
            beta: e,
            what: "final residual nonzero".into(),
        });
    }
    Ok(f)
}

/// x / S for a coefficient mod 3, if the numerator is divisible by S.
fn div_cofactor(x: &LaurentCoeff, s: &[u64]) -> Option<LaurentCoeff> {
    if s == [1] {
        return Some(x.clone());
    }
    let md = x.ctx().md();
    let (q, r) = poly::divrem(&md, x.num_dense(), s);
    if !r.is_empty() {
        return None;
    }
    Some(LaurentCoeff::new(x.ctx(), x.lo(), q, x.den_pow()))
}

/// Representation of the solution modulo 3^(3^alpha), with branch selection
/// against the series solution on `prefix` coefficients.
pub fn solve_mod3k_with(eqn: &FunctionalEq, alpha: u32, prefix: usize) -> Result<SolveReport> {
    let shape = validate_equation(eqn)?;
    let e = pow3(alpha) as u32;
    let target = eqn.series_solution(e, prefix)?;
    let mut found = Vec::new();
    for sign in [1i8, -1] {
        let rep = solve_branch(eqn, &shape, alpha, sign)?;
        let s = rep.to_series(prefix as i64 - 1);
        let lo = s.min_deg.min(0);
        if (lo..prefix as i64)
            .all(|d| s.coeff(d) == target.coeff(d.max(0)) || (d < 0 && s.coeff(d) == 0))
        {
            found.push((sign, rep));
        }
    }
    match found.len() {
        0 => Err(Error::NoBranch),
        1 => {
            let (branch, representation) = found.pop().unwrap();
            Ok(SolveReport {
                representation,
                verified_prefix: prefix,
                branch,
                shape,
            })
        }
        _ => Err(Error::BranchAmbiguous),
    }
}

pub fn solve_mod3k(eqn: &FunctionalEq, alpha: u32) -> Result<SolveReport> {
    solve_mod3k_with(eqn, alpha, default_prefix(alpha))
}

/// Re-expresses p (over Psi(z)) over Psi(z^M), M = 3^(beta-1), keeping only
/// the z-exponents congruent to one of `residues` modulo M.
pub fn m_section(p: &PsiPoly, residues: &[u64], beta: u32) -> Result<PsiPoly> {
    let ctx = p.ctx();
    if ctx.eps != 1 || ctx.gamma != 1 {
        return Err(Error::SectionDenominator(format!(
            "{}z^{}",
            if ctx.eps < 0 { "-" } else { "" },
            ctx.gamma
        )));
    }
    assert!(beta >= 1);
    let mm = pow3(beta - 1);
    let new_ctx = PsiContext::new(1, mm as u32, ctx.alpha, ctx.e);
    let md = Modulus::new(ctx.e);
    // Psi(z) = Psi(z^M) P(z), and 1/(1+z) = Pi(z)/(1+z^M)
    let mut pp = vec![1u64];
    let mut pi = vec![1u64];
    for j in 0..beta - 1 {
        let s = pow3(j) as usize;
        let mut f = vec![0u64; s + 1];
        f[0] = 1;
        f[s] = 1;
        pp = poly::mul(&md, &pp, &f);
        let mut g = vec![0u64; 2 * s + 1];
        g[0] = 1;
        g[s] = md.neg(1);
        g[2 * s] = 1;
        pi = poly::mul(&md, &pi, &g);
    }
    let keep = |d: i64| {
        residues
            .iter()
            .any(|&r| d.rem_euclid(mm as i64) as u64 == r % mm)
    };
    let mut out = Vec::with_capacity(ctx.len());
    let mut p_pow = vec![1u64];
    for (i, a) in p.coeffs().iter().enumerate() {
        if i > 0 {
            p_pow = poly::mul(&md, &p_pow, &pp);
        }
        if a.is_zero() {
            out.push(LaurentCoeff::zero(new_ctx.lc()));
            continue;
        }
        let mut num = poly::mul(&md, a.num_dense(), &p_pow);
        for _ in 0..a.den_pow() {
            num = poly::mul(&md, &num, &pi);
        }
        let lo = a.lo();
        let masked: Vec<u64> = num
            .iter()
            .enumerate()
            .map(|(k, &c)| if keep(lo + k as i64) { c } else { 0 })
            .collect();
        out.push(LaurentCoeff::new(new_ctx.lc(), lo, masked, a.den_pow()));
    }
    Ok(PsiPoly::from_coeffs(new_ctx, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn catalan() -> FunctionalEq {
        FunctionalEq {
            name: "catalan".into(),
            c2: vec![0, 1],
            c1: vec![-1],
            c0: vec![1],
            q: DiffPoly::zero(),
            eps: -1,
            gamma: 1,
            init: Vec::new(),
        }
    }

    #[test]
    fn catalan_series_mod9() {
        let s = unique_series_solution(&catalan().to_diffpoly(), 2, 5).unwrap();
        assert_eq!(s.coeffs, vec![1, 1, 2, 5, 5]);
    }

    #[test]
    fn catalan_shape() {
        let sh = validate_equation(&catalan()).unwrap();
        assert_eq!(sh.constants(), (1, 0, 0, 0));
    }

    #[test]
    fn squared_catalan_uniqueness() {
        let c = catalan();
        let base = DiffPoly::term(&c.c2, &[0, 0])
            .add(&DiffPoly::term(&c.c1, &[0]))
            .add(&DiffPoly::constant(&c.c0));
        let sq = base.pow(2);
        let s = unique_series_solution(&sq, 1, 6).unwrap();
        assert_eq!(s.coeffs, vec![1, 1, 2, 2, 2, 0]);
        // each coefficient is only pinned at about twice its index
        let long = unique_series_solution(&sq, 1, 60).unwrap();
        let want = unique_series_solution(&c.to_diffpoly(), 1, 60).unwrap();
        assert_eq!(long.coeffs, want.coeffs);
        assert!(matches!(
            unique_series_solution(&sq, 2, 6),
            Err(Error::NonUnique { index: 0, .. })
        ));
    }

    #[test]
    fn catalan_solves_mod27() {
        let rep = solve_mod3k(&catalan(), 1).unwrap();
        let want = unique_series_solution(&catalan().to_diffpoly(), 3, 300).unwrap();
        let got = rep.representation.to_series(299);
        assert!((0..300).all(|d| got.coeff(d) == want.coeff(d)));
        assert!((got.min_deg..0).all(|d| got.coeff(d) == 0));
    }

    #[test]
    fn section_all_residues_is_identity() {
        let ctx = PsiContext::new(1, 1, 1, 2);
        let lc = ctx.lc();
        let p = PsiPoly::from_coeffs(
            ctx,
            vec![
                LaurentCoeff::from_i64(lc, -1, &[1, 2, 3], 1),
                LaurentCoeff::from_i64(lc, 0, &[4, 0, 1], 2),
                LaurentCoeff::zero(lc),
                LaurentCoeff::from_i64(lc, 1, &[5], 0),
            ],
        );
        let s = m_section(&p, &[0, 1, 2], 2).unwrap();
        assert!(s.to_series(200).agrees_with(&p.to_series(200), 200));
        let s1 = m_section(&p, &[1], 2).unwrap().to_series(200);
        let full = p.to_series(200);
        for d in s1.min_deg..=200 {
            let want = if d.rem_euclid(3) == 1 {
                full.coeff(d)
            } else {
                0
            };
            assert_eq!(s1.coeff(d), want, "degree {d}");
        }
    }
}
