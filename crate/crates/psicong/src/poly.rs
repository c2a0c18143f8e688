//! Dense polynomial helpers over Z/3^e. Vectors are indexed by degree.

use crate::ring3::Modulus;

pub fn trim(p: &mut Vec<u64>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

pub fn add(md: &Modulus, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| md.add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
        .collect()
}

pub fn sub(md: &Modulus, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| md.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
        .collect()
}

pub fn scale(md: &Modulus, a: &[u64], c: u64) -> Vec<u64> {
    a.iter().map(|&x| md.mul(x, c)).collect()
}

const ACC_LIMIT: u128 = 1 << 126;

/// Schoolbook product, accumulating in u128 and reducing lazily.
pub fn mul(md: &Modulus, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    mul_trunc(md, a, b, a.len() + b.len() - 1)
}

/// First `len` coefficients of a*b.
pub fn mul_trunc(md: &Modulus, a: &[u64], b: &[u64], len: usize) -> Vec<u64> {
    let m = md.m as u128;
    let mut out = vec![0u64; len];
    for (k, slot) in out.iter_mut().enumerate() {
        let lo = (k + 1).saturating_sub(b.len());
        let hi = k.min(a.len().saturating_sub(1));
        if lo > hi || a.is_empty() {
            continue;
        }
        let mut acc: u128 = 0;
        for i in lo..=hi {
            acc += a[i] as u128 * b[k - i] as u128;
            if acc >= ACC_LIMIT {
                acc %= m;
            }
        }
        *slot = (acc % m) as u64;
    }
    out
}

/// (1 + eps*z^gamma)^k as a dense vector.
pub fn base_pow(md: &Modulus, eps: i8, gamma: u32, k: u32) -> Vec<u64> {
    let g = gamma as usize;
    let mut out = vec![0u64; g * k as usize + 1];
    // binomials mod 3^e by Pascal's rule
    let mut row = vec![1u64];
    for _ in 0..k {
        let mut next = vec![1u64; row.len() + 1];
        for i in 1..row.len() {
            next[i] = md.add(row[i - 1], row[i]);
        }
        row = next;
    }
    for (i, &c) in row.iter().enumerate() {
        let c = if eps < 0 && i % 2 == 1 { md.neg(c) } else { c };
        out[g * i] = c;
    }
    out
}

/// Divide by (1 + eps*z^gamma) if exact.
pub fn div_base(md: &Modulus, eps: i8, gamma: u32, p: &[u64]) -> Option<Vec<u64>> {
    let g = gamma as usize;
    if p.len() <= g {
        return if p.iter().all(|&c| c == 0) {
            Some(Vec::new())
        } else {
            None
        };
    }
    let mut r = p.to_vec();
    let mut q = vec![0u64; p.len() - g];
    for k in (g..p.len()).rev() {
        let c = r[k];
        if c == 0 {
            continue;
        }
        let qc = if eps < 0 { md.neg(c) } else { c };
        q[k - g] = qc;
        r[k] = 0;
        r[k - g] = md.sub(r[k - g], qc);
    }
    if r[..g].iter().all(|&c| c == 0) {
        Some(q)
    } else {
        None
    }
}

/// Long division by a polynomial whose leading coefficient is a unit.
pub fn divrem(md: &Modulus, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let mut b = b.to_vec();
    trim(&mut b);
    assert!(!b.is_empty(), "division by zero polynomial");
    let lead_inv = md
        .inv(*b.last().unwrap())
        .expect("leading coefficient must be a unit");
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - b.len() + 1];
    for k in (0..q.len()).rev() {
        let c = md.mul(r[k + b.len() - 1], lead_inv);
        q[k] = c;
        if c != 0 {
            for (i, &bi) in b.iter().enumerate() {
                r[k + i] = md.sub(r[k + i], md.mul(c, bi));
            }
        }
    }
    trim(&mut r);
    (q, r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_powers() {
        let md = Modulus::new(2);
        assert_eq!(base_pow(&md, 1, 1, 3), vec![1, 3, 3, 1]);
        assert_eq!(base_pow(&md, -1, 2, 2), vec![1, 0, 7, 0, 1]);
    }

    #[test]
    fn division_by_base() {
        let md = Modulus::new(3);
        let p = mul(&md, &[2, 5, 1], &base_pow(&md, -1, 2, 1));
        assert_eq!(div_base(&md, -1, 2, &p), Some(vec![2, 5, 1]));
        assert_eq!(div_base(&md, 1, 1, &[1, 0, 1]), None);
    }

    #[test]
    fn long_division() {
        let md = Modulus::new(1);
        // (z^2 + 2z + 1) / (z + 1) over F_3
        let (q, r) = divrem(&md, &[1, 2, 1], &[1, 1]);
        assert_eq!(q, vec![1, 1]);
        assert!(r.is_empty());
    }
}
