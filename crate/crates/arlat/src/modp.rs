//! Polynomials over F_p with small p, enough to read off factorization
//! patterns: squarefree decomposition plus distinct-degree factorization.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::poly::IntPolynomial;

/// Coefficients mod p, lowest first, no trailing zeros.
pub type FpPoly = Vec<u64>;

fn trim(mut f: FpPoly) -> FpPoly {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

fn deg(f: &FpPoly) -> usize {
    f.len().saturating_sub(1)
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

pub fn inv(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

pub fn reduce(f: &IntPolynomial, p: u64) -> FpPoly {
    let pb = BigInt::from(p);
    trim(
        f.coeffs()
            .iter()
            .map(|c| c.mod_floor(&pb).to_u64().expect("residue fits"))
            .collect(),
    )
}

pub fn mul(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
        }
    }
    trim(out)
}

pub fn sub(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect(),
    )
}

pub fn divrem(a: &FpPoly, b: &FpPoly, p: u64) -> (FpPoly, FpPoly) {
    assert!(!b.is_empty(), "division by zero polynomial mod p");
    let mut r = a.clone();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lb = inv(*b.last().unwrap(), p);
    let mut q = vec![0u64; r.len() - b.len() + 1];
    while !r.is_empty() && r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = mulmod(*r.last().unwrap(), lb, p);
        q[shift] = c;
        for (j, &y) in b.iter().enumerate() {
            let t = mulmod(c, y, p);
            r[shift + j] = (r[shift + j] + p - t) % p;
        }
        r = trim(r);
    }
    (trim(q), r)
}

pub fn monic(f: &FpPoly, p: u64) -> FpPoly {
    match f.last() {
        None => Vec::new(),
        Some(&l) => {
            let li = inv(l, p);
            f.iter().map(|&c| mulmod(c, li, p)).collect()
        }
    }
}

pub fn gcd(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let (_, r) = divrem(&a, &b, p);
        a = b;
        b = r;
    }
    monic(&a, p)
}

fn derivative(f: &FpPoly, p: u64) -> FpPoly {
    trim(
        f.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mulmod(c, (i as u64) % p, p))
            .collect(),
    )
}

fn powmod_poly(base: &FpPoly, mut e: u128, m: &FpPoly, p: u64) -> FpPoly {
    let mut r: FpPoly = vec![1];
    let mut b = divrem(base, m, p).1;
    while e > 0 {
        if e & 1 == 1 {
            r = divrem(&mul(&r, &b, p), m, p).1;
        }
        b = divrem(&mul(&b, &b, p), m, p).1;
        e >>= 1;
    }
    r
}

/// Squarefree decomposition over F_p: monic `(g_i, i)` with `f = lc·Π g_i^i`.
pub fn squarefree_decomposition(f: &FpPoly, p: u64) -> Vec<(FpPoly, u32)> {
    let f = monic(f, p);
    let mut out = Vec::new();
    if deg(&f) == 0 {
        return out;
    }
    let fp = derivative(&f, p);
    if fp.is_empty() {
        // f is a p-th power: f(x) = g(x^p) = g(x)^p over F_p.
        let g: FpPoly = f.iter().step_by(p as usize).copied().collect();
        for (h, m) in squarefree_decomposition(&g, p) {
            out.push((h, m * p as u32));
        }
        return out;
    }
    let mut c = gcd(&f, &fp, p);
    let mut w = divrem(&f, &c, p).0;
    let mut i = 1u32;
    while deg(&w) > 0 {
        let y = gcd(&w, &c, p);
        let z = divrem(&w, &y, p).0;
        if deg(&z) > 0 {
            out.push((monic(&z, p), i));
        }
        i += 1;
        w = y;
        c = divrem(&c, &w, p).0;
    }
    if deg(&c) > 0 {
        let g: FpPoly = c.iter().step_by(p as usize).copied().collect();
        for (h, m) in squarefree_decomposition(&g, p) {
            out.push((h, m * p as u32));
        }
    }
    out
}

/// Distinct-degree factorization of a monic squarefree polynomial:
/// `(d, number of irreducible factors of degree d)`.
pub fn distinct_degree(f: &FpPoly, p: u64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut f = monic(f, p);
    let x: FpPoly = vec![0, 1];
    let mut h = x.clone();
    let mut d = 0usize;
    while deg(&f) >= 2 * (d + 1) {
        d += 1;
        h = powmod_poly(&h, p as u128, &f, p);
        let g = gcd(&sub(&h, &x, p), &f, p);
        if deg(&g) > 0 {
            out.push((d, deg(&g) / d));
            f = divrem(&f, &g, p).0;
            h = divrem(&h, &f, p).1;
        }
    }
    if deg(&f) > 0 {
        let n = deg(&f);
        out.push((n, 1));
    }
    out
}

/// Factorization pattern `(residue degree, multiplicity)` of `f mod p`,
/// sorted; one entry per irreducible factor.
pub fn factor_pattern(f: &IntPolynomial, p: u64) -> Vec<(usize, u32)> {
    let fp = reduce(f, p);
    let mut out = Vec::new();
    for (g, e) in squarefree_decomposition(&fp, p) {
        for (d, count) in distinct_degree(&g, p) {
            for _ in 0..count {
                out.push((d, e));
            }
        }
    }
    out.sort();
    out
}

/// True when `f mod p` is irreducible of the same degree, which certifies
/// irreducibility of `f` over Q.
pub fn irreducible_mod_p(f: &IntPolynomial, p: u64) -> bool {
    let fp = reduce(f, p);
    deg(&fp) == f.degree() && factor_pattern(f, p) == vec![(f.degree(), 1)]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(s: &str) -> IntPolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn quartic_mod_three_is_two_quadratics() {
        // Oracle: (x^2 + x + 2)(x^2 + 2x + 2) expands to x^4 − 2 mod 3.
        let prod = mul(
            &reduce(&ip("x^2 + x + 2"), 3),
            &reduce(&ip("x^2 + 2x + 2"), 3),
            3,
        );
        assert_eq!(prod, reduce(&ip("x^4 - 2"), 3));
        assert_eq!(factor_pattern(&ip("x^4 - 2"), 3), vec![(2, 1), (2, 1)]);
    }

    #[test]
    fn gaussian_split_at_five() {
        assert_eq!(
            mul(&reduce(&ip("x - 2"), 5), &reduce(&ip("x - 3"), 5), 5),
            reduce(&ip("x^2 + 1"), 5)
        );
        assert_eq!(factor_pattern(&ip("x^2 + 1"), 5), vec![(1, 1), (1, 1)]);
        assert_eq!(factor_pattern(&ip("x^2 + 1"), 3), vec![(2, 1)]);
        assert_eq!(factor_pattern(&ip("x^2 + 1"), 2), vec![(1, 2)]);
    }

    #[test]
    fn repeated_and_pth_power_factors() {
        // x^4 ≡ x^4 − 2 mod 2.
        assert_eq!(factor_pattern(&ip("x^4 - 2"), 2), vec![(1, 4)]);
        // (x+1)^3 (x^2+x+1)^2 mod 3: x^2+x+1 = (x−1)^2 mod 3.
        let f = &ip("x + 1").pow(3) * &ip("x^2 + x + 1").pow(2);
        assert_eq!(factor_pattern(&f, 3), vec![(1, 3), (1, 4)]);
        // Pattern multiplicities times degrees always recover the degree.
        for p in [2u64, 3, 5, 7, 11] {
            let s: usize = factor_pattern(&f, p)
                .iter()
                .map(|&(d, e)| d * e as usize)
                .sum();
            assert_eq!(s, f.degree());
        }
    }

    #[test]
    fn cyclotomic_degree_is_order_of_p() {
        // Φ_7 mod 2 splits into two cubics since 2 has order 3 mod 7.
        assert_eq!(
            factor_pattern(&IntPolynomial::cyclotomic(7), 2),
            vec![(3, 1), (3, 1)]
        );
        assert!(irreducible_mod_p(&IntPolynomial::cyclotomic(7), 3));
    }
}
