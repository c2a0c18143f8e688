//! Central Eulerian numbers: kernel polynomials, the per-residue equations,
//! and assembly of the sections.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::oracles::central_eulerian_mod;
use crate::error::{Error, Result};
use crate::laurent::LaurentCoeff;
use crate::psi_core::PsiPoly;
use crate::ring3::pow3;
use crate::solver::{m_section, solve_mod3k, DiffPoly, FunctionalEq};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EulerianKind {
    /// A(2n, n+1)
    Even,
    /// A(2n-1, n)
    Odd,
}

impl EulerianKind {
    fn power(self, s: u64) -> u64 {
        match self {
            EulerianKind::Even => 2 * s,
            EulerianKind::Odd => 2 * s - 1,
        }
    }

    /// Least n for which the reduced exponent agrees with the true one
    /// modulo 3^beta on multiples of 3.
    pub fn floor(self, beta: u32) -> u64 {
        match self {
            EulerianKind::Even => (beta as u64).div_ceil(2),
            EulerianKind::Odd => (beta as u64 + 1).div_ceil(2),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerKernel {
    pub kind: EulerianKind,
    pub s: u64,
    /// coefficients of p from degree 0
    pub p: Vec<BigInt>,
}

fn binom(n: u64, k: u64) -> BigInt {
    let mut c = BigInt::one();
    for i in 0..k {
        c = c * (n - i) / (i + 1);
    }
    c
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// p_s for the given kind, from q(2u+1) = sum_m (Delta^m y^S)(0) u^(m-1).
pub fn euler_kernel(kind: EulerianKind, s: u64) -> Result<EulerKernel> {
    assert!(s >= 1);
    let big_s = kind.power(s);
    let mm = big_s as usize;
    // 2^(M-1) q(w) = sum_m c_m (w-1)^(m-1) 2^(M-m), as a polynomial in w
    let mut q = vec![BigInt::zero(); mm];
    for m in 1..=mm as u64 {
        let mut c = BigInt::zero();
        for k in 1..=m {
            let t = binom(m, k) * BigInt::from(k).pow(big_s as u32);
            if (m - k) % 2 == 0 {
                c += t;
            } else {
                c -= t;
            }
        }
        let scale = c << (mm - m as usize);
        // (w-1)^(m-1)
        for i in 0..m {
            let b = binom(m - 1, i);
            let term = if (m - 1 - i) % 2 == 0 { b } else { -b };
            q[i as usize] += &scale * term;
        }
    }
    let fail = |what: &str| Error::KernelIntegrality(format!("{kind:?} s={s}: {what}"));
    // even kind: q is odd and we divide by w; odd kind: q is even
    let shift = match kind {
        EulerianKind::Even => 1,
        EulerianKind::Odd => 0,
    };
    let mut in_w2 = Vec::new();
    for (i, c) in q.iter().enumerate() {
        if i % 2 == shift {
            in_w2.push(c.clone());
        } else if !c.is_zero() {
            return Err(fail("wrong parity in sqrt(1+4z)"));
        }
    }
    // substitute w^2 = 1 + 4z
    let mut p = vec![BigInt::zero()];
    let mut power = vec![BigInt::one()];
    for d in &in_w2 {
        for (i, c) in power.iter().enumerate() {
            if i >= p.len() {
                p.push(BigInt::zero());
            }
            p[i] += d * c;
        }
        power = poly_mul(&power, &[BigInt::one(), BigInt::from(4)]);
    }
    let den = BigInt::one() << (mm - 1);
    for c in p.iter_mut() {
        let (q, r) = c.div_rem(&den);
        if !r.is_zero() {
            return Err(fail("non-integral coefficient"));
        }
        *c = q;
    }
    if p[0] != BigInt::one() {
        return Err(fail("constant term is not 1"));
    }
    p[0] = BigInt::zero();
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    if p.iter().any(|c| !c.is_multiple_of(&BigInt::from(3))) {
        return Err(fail("coefficient not divisible by 3"));
    }
    Ok(EulerKernel { kind, s, p })
}

const COEFF_MOD_EXP: u32 = 12;

fn small(c: &BigInt) -> i64 {
    let m = BigInt::from(pow3(COEFF_MOD_EXP));
    let mut r = c.mod_floor(&m);
    if r > &m / 2 {
        r -= &m;
    }
    r.to_i64().unwrap()
}

fn smalls(p: &[BigInt]) -> Vec<i64> {
    p.iter().map(small).collect()
}

/// The equation for E_s, with coefficients reduced far beyond any modulus
/// used here.
pub fn eulerian_equation(kind: EulerianKind, s: u64) -> Result<FunctionalEq> {
    let k = euler_kernel(kind, s)?;
    let p3: Vec<BigInt> = k.p.iter().map(|c| c / 3).collect();
    // (p/3)(2+p)
    let mut two_p = k.p.clone();
    two_p[0] += 2;
    let mixed = poly_mul(&p3, &two_p);
    let eq = match kind {
        EulerianKind::Even => {
            // E^2 - E - z - p E - z p (2+p)
            let mut zmixed = vec![BigInt::zero()];
            zmixed.extend(mixed);
            let q = DiffPoly::term(&smalls(&p3), &[0])
                .add(&DiffPoly::constant(&smalls(&zmixed)))
                .scale(-1);
            FunctionalEq {
                name: format!("eulerian_even_s{s}"),
                c2: vec![1],
                c1: vec![-1],
                c0: vec![0, -1],
                q,
                eps: 1,
                gamma: 1,
                init: vec![1],
            }
        }
        EulerianKind::Odd => {
            // (1+z) E^2 - z^2 + 3 z E^2 - z^2 p (2+p)
            let mut z2mixed = vec![BigInt::zero(), BigInt::zero()];
            z2mixed.extend(mixed);
            let q = DiffPoly::term(&[0, 1], &[0, 0]).sub(&DiffPoly::constant(&smalls(&z2mixed)));
            FunctionalEq {
                name: format!("eulerian_odd_s{s}"),
                c2: vec![1, 1],
                c1: vec![],
                c0: vec![0, 0, -1],
                q,
                eps: 1,
                gamma: 1,
                init: vec![0, 1],
            }
        }
    };
    Ok(eq)
}

#[derive(Clone, Debug)]
pub struct EulerianReport {
    pub representation: PsiPoly,
    /// (n, value added) for the small indices outside the congruence window
    pub corrections: Vec<(u64, u64)>,
    pub window: std::ops::Range<u64>,
}

/// Generating function of the central Eulerian numbers modulo 3^beta, as a
/// polynomial in Psi(z^(3^(beta-1))).
pub fn derive_eulerian(kind: EulerianKind, beta: u32, alpha: u32) -> Result<EulerianReport> {
    assert!(
        (2..=3).contains(&beta),
        "only moduli 9 and 27 are supported"
    );
    assert!(pow3(alpha) >= beta as u64);
    let period = pow3(beta - 1);
    let lo = kind.floor(beta);
    let mut total: Option<PsiPoly> = None;
    for s in lo..lo + period {
        let eq = eulerian_equation(kind, s)?;
        let rep = solve_mod3k(&eq, alpha)?.representation.reduce(beta);
        let sec = m_section(&rep, &[s % period], beta)?;
        total = Some(match total {
            None => sec,
            Some(t) => t.add(&sec),
        });
    }
    let mut total = total.unwrap();
    // compare the small indices against the oracle
    let check = 2 * period as usize;
    let oracle = central_eulerian_mod(kind == EulerianKind::Even, check, beta);
    let got = total.to_series(check as i64 - 1);
    let ctx = total.ctx();
    let md = ctx.lc().md();
    let mut corrections = Vec::new();
    let mut fix = LaurentCoeff::zero(ctx.lc());
    for n in 0..check {
        let diff = md.sub(oracle[n], got.coeff(n as i64));
        if diff == 0 {
            continue;
        }
        if n as u64 >= lo {
            return Err(Error::DivisibilityFailure {
                beta,
                what: format!("assembled sections disagree with the oracle at n = {n}"),
            });
        }
        corrections.push((n as u64, diff));
        fix = fix.add(&LaurentCoeff::monomial(ctx.lc(), md.signed(diff), n as i64));
    }
    if !fix.is_zero() {
        total = total.add(&PsiPoly::constant(ctx, fix));
    }
    Ok(EulerianReport {
        representation: total,
        corrections,
        window: lo..lo + period,
    })
}
