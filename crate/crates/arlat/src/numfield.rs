//! Number fields presented by a monic irreducible integer polynomial.
//!
//! The order used is the monogenic one, Z[x]/(f). Splitting of a prime p is
//! read off the factorization of f mod p, which is only correct when the
//! order is p-maximal; primes dividing the polynomial discriminant are
//! therefore refused unless the field was built with a declaration that the
//! order is maximal there.

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modp;
use crate::poly::IntPolynomial;
use crate::roots;
use crate::scalar::{DoubleDouble, RealScalar};

/// Tolerance deciding whether an embedding is real, relative to its modulus.
pub const REAL_ROOT_TOL: f64 = 1e-12;

/// Which primes dividing the polynomial discriminant are known to be
/// harmless (the monogenic order is maximal there).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MaximalityOverride {
    None,
    /// Z[x]/(f) is the full ring of integers.
    Maximal,
    /// Z[x]/(f) is p-maximal for the listed primes.
    AtPrimes(Vec<u64>),
}

#[derive(Clone, Debug)]
pub struct NumberField {
    pub name: String,
    pub min_poly: IntPolynomial,
    pub degree: usize,
    pub signature: (usize, usize),
    pub poly_discriminant: BigInt,
    pub embeddings: Vec<Complex<f64>>,
    pub maximality: MaximalityOverride,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeSplitting {
    pub p: u64,
    /// `(residue degree f, ramification index e)` per prime ideal.
    pub factors: Vec<(usize, u32)>,
    #[serde(serialize_with = "ser_decimal")]
    pub norms: Vec<BigInt>,
}

fn ser_decimal<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

impl PrimeSplitting {
    pub fn degree_sum(&self) -> usize {
        self.factors.iter().map(|&(f, e)| f * e as usize).sum()
    }
}

/// Exact discriminant of a monic polynomial.
pub fn poly_discriminant(f: &IntPolynomial) -> Result<BigInt> {
    if f.is_zero() || f.degree() == 0 {
        return Err(Error::Domain("discriminant needs degree >= 1".into()));
    }
    if !f.is_monic() {
        return Err(Error::Domain(format!("{f} is not monic")));
    }
    Ok(f.discriminant())
}

/// `(r1, r2)` from the numeric roots of a squarefree polynomial.
pub fn signature(f: &IntPolynomial) -> Result<(usize, usize)> {
    let (zs, _) = roots::squarefree_roots::<DoubleDouble>(f)?;
    signature_of(
        &zs.iter()
            .map(|z| Complex::new(z.re.to_f64(), z.im.to_f64()))
            .collect::<Vec<_>>(),
    )
}

fn signature_of(zs: &[Complex<f64>]) -> Result<(usize, usize)> {
    let mut upper = 0;
    let mut lower = 0;
    for z in zs {
        let tol = REAL_ROOT_TOL * z.norm().max(1.0);
        if z.im > tol {
            upper += 1;
        } else if z.im < -tol {
            lower += 1;
        } else if z.im.abs() > 1e-3 * tol {
            // Inside the band but not clearly on the axis.
            if z.im.abs() > tol * 0.5 {
                return Err(Error::Precision(format!(
                    "root {z} too close to the real axis to classify"
                )));
            }
        }
    }
    if upper != lower {
        return Err(Error::Precision("complex roots do not pair up".into()));
    }
    Ok((zs.len() - 2 * upper, upper))
}

impl NumberField {
    pub fn new(
        name: &str,
        min_poly: IntPolynomial,
        maximality: MaximalityOverride,
    ) -> Result<Self> {
        let disc = poly_discriminant(&min_poly)?;
        if disc.is_zero() {
            return Err(Error::Domain(format!("{min_poly} has a repeated root")));
        }
        let (zs, _) = roots::squarefree_roots::<DoubleDouble>(&min_poly)?;
        let mut embeddings: Vec<Complex<f64>> = zs
            .iter()
            .map(|z| Complex::new(z.re.to_f64(), z.im.to_f64()))
            .collect();
        // Real embeddings first, then complex ones with positive imaginary
        // part followed by their conjugates, each group sorted.
        embeddings.sort_by(|a, b| embed_key(a).partial_cmp(&embed_key(b)).unwrap());
        let signature = signature_of(&embeddings)?;
        for z in embeddings.iter_mut().take(signature.0) {
            z.im = 0.0;
        }
        Ok(NumberField {
            name: name.to_string(),
            degree: min_poly.degree(),
            min_poly,
            signature,
            poly_discriminant: disc,
            embeddings,
            maximality,
        })
    }

    /// Parse a polynomial and build a field with no maximality declaration.
    pub fn from_poly_str(s: &str) -> Result<Self> {
        let f: IntPolynomial = s.parse()?;
        NumberField::new(&f.to_string(), f, MaximalityOverride::None)
    }

    pub fn rationals() -> Self {
        NumberField::new(
            "Q",
            IntPolynomial::from_i64(&[0, 1]),
            MaximalityOverride::Maximal,
        )
        .unwrap()
    }

    /// Q(a^{1/n}) via x^n − a. For a = 2 the polynomial is Eisenstein at 2,
    /// so the order is 2-maximal; for n a power of two that is the only
    /// prime dividing the discriminant.
    pub fn pure(n: usize, a: i64) -> Result<Self> {
        let mut c = vec![0i64; n + 1];
        c[0] = -a;
        c[n] = 1;
        let f = IntPolynomial::from_i64(&c);
        let m = if a == 2 {
            if n == 3 {
                MaximalityOverride::AtPrimes(vec![2, 3])
            } else {
                MaximalityOverride::AtPrimes(vec![2])
            }
        } else {
            MaximalityOverride::None
        };
        NumberField::new(&format!("Q({a}^(1/{n}))"), f, m)
    }

    /// Q(ζ_m); Z[ζ_m] is the ring of integers.
    pub fn cyclotomic(m: u64) -> Result<Self> {
        NumberField::new(
            &format!("Q(zeta_{m})"),
            IntPolynomial::cyclotomic(m),
            MaximalityOverride::Maximal,
        )
    }

    /// Q(√d) for a fundamental discriminant d, presented by the minimal
    /// polynomial of the standard integral generator.
    pub fn quadratic(d: i64) -> Result<Self> {
        if !is_fundamental_discriminant(d) {
            return Err(Error::Domain(format!(
                "{d} is not a fundamental discriminant"
            )));
        }
        let f = if d.rem_euclid(4) == 1 {
            IntPolynomial::from_i64(&[(1 - d) / 4, -1, 1])
        } else {
            IntPolynomial::from_i64(&[-d / 4, 0, 1])
        };
        NumberField::new(&format!("Q(sqrt({d}))"), f, MaximalityOverride::Maximal)
    }

    /// The field of Lehmer's number, degree 10.
    pub fn lehmer() -> Self {
        NumberField::new("Q(lehmer)", lehmer_polynomial(), MaximalityOverride::None).unwrap()
    }

    /// The totally real quintic field generated by λ + 1/λ for Lehmer's λ.
    /// Its polynomial discriminant 36497 is prime, hence squarefree, so the
    /// monogenic order is maximal.
    pub fn lehmer_trace_field() -> Self {
        NumberField::new(
            "Q(lehmer+1/lehmer)",
            lehmer_trace_polynomial(),
            MaximalityOverride::Maximal,
        )
        .unwrap()
    }

    pub fn r1(&self) -> usize {
        self.signature.0
    }

    pub fn r2(&self) -> usize {
        self.signature.1
    }

    fn declared_maximal_at(&self, p: u64) -> bool {
        match &self.maximality {
            MaximalityOverride::None => false,
            MaximalityOverride::Maximal => true,
            MaximalityOverride::AtPrimes(ps) => ps.contains(&p),
        }
    }

    /// Whether `p` may be split by polynomial factorization.
    pub fn splitting_allowed(&self, p: u64) -> bool {
        !(&self.poly_discriminant % BigInt::from(p)).is_zero() || self.declared_maximal_at(p)
    }

    pub fn prime_splitting(&self, p: u64) -> Result<PrimeSplitting> {
        if !is_prime(p) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        if !self.splitting_allowed(p) {
            return Err(Error::NonMaximalOrder { p });
        }
        let factors = modp::factor_pattern(&self.min_poly, p);
        let norms = factors
            .iter()
            .map(|&(f, _)| num_traits::pow(BigInt::from(p), f))
            .collect();
        Ok(PrimeSplitting { p, factors, norms })
    }

    /// Prime ideals of norm at most `x`. Primes that cannot be split are
    /// listed in `skipped`, never dropped silently.
    pub fn prime_count(&self, x: f64) -> Result<PrimeCount> {
        if x < 2.0 {
            return Err(Error::Domain("prime_count needs x >= 2".into()));
        }
        let xb = x.floor() as u64;
        let mut count = 0u64;
        let mut skipped = Vec::new();
        for p in primes_up_to(xb) {
            match self.prime_splitting(p) {
                Ok(sp) => {
                    count += sp.norms.iter().filter(|n| **n <= BigInt::from(xb)).count() as u64;
                }
                Err(Error::NonMaximalOrder { p }) => skipped.push(p),
                Err(e) => return Err(e),
            }
        }
        Ok(PrimeCount { count, skipped })
    }

    /// Norms of all prime ideals above primes `p <= x`, ascending in p.
    fn prime_norms_up_to(&self, x: u64) -> Result<Vec<(u64, Vec<u32>)>> {
        let mut out = Vec::new();
        let mut bad = Vec::new();
        for p in primes_up_to(x) {
            match self.prime_splitting(p) {
                Ok(sp) => out.push((p, sp.factors.iter().map(|&(f, _)| f as u32).collect())),
                Err(Error::NonMaximalOrder { p }) => bad.push(p),
                Err(e) => return Err(e),
            }
        }
        if !bad.is_empty() {
            return Err(Error::Domain(format!(
                "Euler product needs every prime; cannot split {bad:?} in the monogenic order"
            )));
        }
        Ok(out)
    }

    /// Truncated Euler product over prime ideals of norm at most `x`, with a
    /// rigorous bound on the missing factor.
    pub fn dedekind_zeta<S: RealScalar>(&self, s: f64, x: f64) -> Result<ZetaValue> {
        if s.partial_cmp(&1.0) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::Domain(format!("dedekind_zeta needs s > 1, got {s}")));
        }
        if x < 2.0 {
            return Err(Error::Domain("dedekind_zeta needs X >= 2".into()));
        }
        let xb = x.floor() as u64;
        let ss = S::from_f64(s);
        let mut value = S::one();
        for (p, fs) in self.prime_norms_up_to(xb)? {
            let lp = S::from_i64(p as i64).ln();
            for f in fs {
                let norm = (p as u128).checked_pow(f);
                if norm.is_none_or(|n| n > xb as u128) {
                    continue;
                }
                let t = (-(ss * lp * S::from_i64(f as i64))).exp();
                value = value / (S::one() - t);
            }
        }
        let tail_log = zeta_tail_log(self.degree, s, xb);
        let v = value.to_f64();
        Ok(ZetaValue {
            value: v,
            tail_bound: v * tail_log.exp_m1(),
            tail_log,
        })
    }
}

fn embed_key(z: &Complex<f64>) -> (i32, f64, f64) {
    let tol = REAL_ROOT_TOL * z.norm().max(1.0);
    let class = if z.im.abs() <= tol {
        0
    } else if z.im > 0.0 {
        1
    } else {
        2
    };
    (class, z.re, z.im.abs())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrimeCount {
    pub count: u64,
    /// Primes that divide the polynomial discriminant without a maximality
    /// declaration; their prime ideals are not counted.
    pub skipped: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ZetaValue {
    pub value: f64,
    /// `ζ_K(s) ∈ [value, value + tail_bound]`.
    pub tail_bound: f64,
    /// Bound on `log ζ_K(s) − log value`.
    pub tail_log: f64,
}

/// Upper bound for `Σ_{N𝔭 > X} Σ_m N𝔭^{−ms}/m`.
///
/// At most n prime ideals share a norm, and norms are integers > X, so the
/// sum is at most `n Σ_{k>X} k^{−s}/(1 − k^{−s})`, bounded by
/// `n (1 − (X+1)^{−s})^{−1} ((X+1)^{−s} + (X+1)^{1−s}/(s−1))`. This
/// dominates the sum over rational primes p > X and also covers prime ideals
/// above small p whose norm exceeds X. It drops by at least the contribution
/// of norm X+1 when X increases by one, so value·exp(bound) is nonincreasing
/// in X.
pub fn zeta_tail_log(n: usize, s: f64, x: u64) -> f64 {
    let y = (x + 1) as f64;
    let ys = y.powf(-s);
    let u = ys + y.powf(1.0 - s) / (s - 1.0);
    n as f64 * u / (1.0 - ys)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LValue {
    pub value: f64,
    pub error_bound: f64,
    pub terms: u64,
}

/// `L(1, χ_d) ≈ Σ_{m≤N} χ_d(m)/m` for the Kronecker character of a
/// fundamental discriminant.
///
/// By Abel summation the tail is at most `2B/(N+1)` where B bounds the
/// partial sums of χ_d; B is computed exactly over one period.
pub fn dirichlet_l_quadratic(d: i64, n: u64) -> Result<LValue> {
    if !is_fundamental_discriminant(d) {
        return Err(Error::Domain(format!(
            "{d} is not a fundamental discriminant"
        )));
    }
    if n < 1000 {
        return Err(Error::Domain("need at least 1000 terms".into()));
    }
    let mut sum = DoubleDouble::zero();
    for m in 1..=n {
        let c = kronecker(d, m);
        if c != 0 {
            sum += DoubleDouble::from(c as f64) / DoubleDouble::from(m as f64);
        }
    }
    let period = d.unsigned_abs();
    let mut partial = 0i64;
    let mut b = 0i64;
    for m in 1..=period {
        partial += kronecker(d, m) as i64;
        b = b.max(partial.abs());
    }
    Ok(LValue {
        value: sum.to_f64(),
        error_bound: 2.0 * b as f64 / (n + 1) as f64,
        terms: n,
    })
}

/// Kronecker symbol (d/m) for m >= 1.
pub fn kronecker(d: i64, m: u64) -> i32 {
    let mut m = m;
    let mut result = 1i32;
    while m % 2 == 0 {
        m /= 2;
        let r = d.rem_euclid(8);
        result *= match r {
            0 | 2 | 4 | 6 => 0,
            1 | 7 => 1,
            _ => -1,
        };
        if result == 0 {
            return 0;
        }
    }
    result * jacobi(d.rem_euclid(m as i64) as u64, m)
}

/// Jacobi symbol (a/n) for odd n >= 1.
pub fn jacobi(a: u64, n: u64) -> i32 {
    debug_assert!(n % 2 == 1);
    let (mut a, mut n) = (a % n, n);
    let mut t = 1i32;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

pub fn is_squarefree(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d.unsigned_abs()),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            return false;
        }
        p += 1;
    }
    true
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| i as u64)
        .collect()
}

/// Distinct prime divisors.
pub fn prime_factors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            out.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiscBoundFlavor {
    Minkowski,
    Odlyzko60,
}

/// Minkowski's bound `(n^n/n! (π/4)^{r2})²`, or the reference growth rate
/// `60^n` (whose implicit constant is unknown; never asserted as a bound).
pub fn discriminant_lower_bound(n: usize, r2: usize, flavor: DiscBoundFlavor) -> Result<f64> {
    if n == 0 || 2 * r2 > n {
        return Err(Error::Domain(format!("bad signature data n={n}, r2={r2}")));
    }
    Ok(match flavor {
        DiscBoundFlavor::Minkowski => {
            let mut log = n as f64 * (n as f64).ln();
            for k in 2..=n {
                log -= (k as f64).ln();
            }
            log += r2 as f64 * (std::f64::consts::PI / 4.0).ln();
            (2.0 * log).exp()
        }
        DiscBoundFlavor::Odlyzko60 => 60f64.powi(n as i32),
    })
}

pub fn lehmer_polynomial() -> IntPolynomial {
    IntPolynomial::from_i64(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1])
}

/// Minimal polynomial of λ + 1/λ for Lehmer's λ: x^5 + x^4 − 5x^3 − 5x^2 + 4x + 3.
pub fn lehmer_trace_polynomial() -> IntPolynomial {
    trace_polynomial(&lehmer_polynomial()).expect("Lehmer polynomial is reciprocal")
}

/// For a reciprocal polynomial P of degree 2N, the degree-N polynomial T
/// with `P(x) = x^N T(x + 1/x)`.
pub fn trace_polynomial(p: &IntPolynomial) -> Result<IntPolynomial> {
    let d = p.degree();
    if d % 2 != 0 || (0..=d).any(|i| p.coeff(i) != p.coeff(d - i)) {
        return Err(Error::Domain(format!(
            "{p} is not reciprocal of even degree"
        )));
    }
    let n = d / 2;
    // Peel off the top power of y = x + 1/x repeatedly: x^N T(y) has the
    // same top coefficient as P, and (x + 1/x)^k x^N is reciprocal.
    let mut rem: Vec<BigInt> = p.coeffs().to_vec();
    let mut t = vec![BigInt::zero(); n + 1];
    for k in (0..=n).rev() {
        let c = rem[n + k].clone();
        t[k] = c.clone();
        if c.is_zero() {
            continue;
        }
        // Subtract c · x^{N−k} (x^2 + 1)^k.
        let mut binom = BigInt::one();
        for j in 0..=k {
            let idx = n - k + 2 * j;
            rem[idx] -= &c * &binom;
            binom = binom * BigInt::from((k - j) as i64) / BigInt::from((j + 1) as i64);
        }
    }
    if rem.iter().any(|c| !c.is_zero()) {
        return Err(Error::Domain(
            "trace polynomial reduction left a remainder".into(),
        ));
    }
    Ok(IntPolynomial::new(t))
}

/// `|Δ|` as f64.
pub fn abs_f64(x: &BigInt) -> f64 {
    x.abs().to_f64().unwrap_or(f64::INFINITY)
}

/// `n mod p` helper used by tests and presets.
pub fn divides(p: u64, x: &BigInt) -> bool {
    x.mod_floor(&BigInt::from(p)).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(s: &str) -> IntPolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(
            poly_discriminant(&ip("x^2 - x - 1")).unwrap(),
            BigInt::from(5)
        );
        assert_eq!(poly_discriminant(&ip("x^2 + 1")).unwrap(), BigInt::from(-4));
        assert_eq!(poly_discriminant(&ip("x - 1")).unwrap(), BigInt::from(1));
        assert!(poly_discriminant(&ip("2x^2 + 1")).is_err());
    }

    #[test]
    fn signature_examples() {
        assert_eq!(signature(&ip("x^2 - 2")).unwrap(), (2, 0));
        assert_eq!(signature(&ip("x^2 + 1")).unwrap(), (0, 1));
        assert_eq!(signature(&ip("x^4 - 2")).unwrap(), (2, 1));
        assert_eq!(NumberField::lehmer().signature, (2, 4));
        assert_eq!(NumberField::lehmer_trace_field().signature, (5, 0));
    }

    #[test]
    fn splitting_examples() {
        let k = NumberField::pure(4, 2).unwrap();
        let sp = k.prime_splitting(3).unwrap();
        assert_eq!(sp.factors, vec![(2, 1), (2, 1)]);
        assert_eq!(sp.norms, vec![BigInt::from(9), BigInt::from(9)]);
        let gi = NumberField::quadratic(-4).unwrap();
        assert_eq!(gi.prime_splitting(5).unwrap().factors, vec![(1, 1), (1, 1)]);
        assert_eq!(gi.prime_splitting(2).unwrap().factors, vec![(1, 2)]);
        let q = NumberField::rationals();
        for p in [2, 3, 101] {
            assert_eq!(q.prime_splitting(p).unwrap().factors, vec![(1, 1)]);
        }
    }

    #[test]
    fn undeclared_ramified_prime_is_refused() {
        let k = NumberField::from_poly_str("x^2 + 1").unwrap();
        assert_eq!(k.prime_splitting(2), Err(Error::NonMaximalOrder { p: 2 }));
        let c = k.prime_count(10.0).unwrap();
        assert_eq!(c.skipped, vec![2]);
        assert!(k.dedekind_zeta::<f64>(2.0, 10.0).is_err());
    }

    #[test]
    fn prime_count_examples() {
        assert_eq!(NumberField::rationals().prime_count(10.0).unwrap().count, 4);
        assert_eq!(
            NumberField::quadratic(-4)
                .unwrap()
                .prime_count(5.0)
                .unwrap()
                .count,
            3
        );
        // Norms <= 8 in Q(2^(1/4)): the ramified prime above 2, and two
        // degree-one primes above 7 since 2^4 = 16 ≡ 2 mod 7; nothing above
        // 3 (two quadratics) or 5 (no fourth root of 2 mod 5).
        let f = ip("x^4 - 2");
        assert_eq!(f.eval(&BigInt::from(2)) % 7, BigInt::zero());
        assert!((0..5).all(|a| f.eval(&BigInt::from(a)) % 5 != BigInt::zero()));
        let k = NumberField::pure(4, 2).unwrap();
        let c = k.prime_count(8.0).unwrap();
        assert_eq!((c.count, c.skipped.len()), (3, 0));
        assert_eq!(k.prime_count(6.0).unwrap().count, 1);
    }

    #[test]
    fn zeta_of_rationals() {
        let z = NumberField::rationals()
            .dedekind_zeta::<DoubleDouble>(2.0, 1e5)
            .unwrap();
        // Direct series oracle with its own integral tail.
        let mut direct = 0.0f64;
        for n in (1..=2_000_000u64).rev() {
            direct += 1.0 / (n as f64 * n as f64);
        }
        direct += 1.0 / 2_000_000.5;
        assert!((z.value - direct).abs() < 1e-5);
        assert!(z.value <= direct && direct <= z.value + z.tail_bound);
        let z4 = NumberField::rationals()
            .dedekind_zeta::<DoubleDouble>(4.0, 1e3)
            .unwrap();
        let mut d4 = 0.0f64;
        for n in (1..=100_000u64).rev() {
            d4 += (n as f64).powi(-4);
        }
        assert!((z4.value - d4).abs() < 1e-6);
        assert!(NumberField::rationals()
            .dedekind_zeta::<f64>(1.0, 10.0)
            .is_err());
    }

    #[test]
    fn zeta_at_tiny_cutoff_is_bounded() {
        for k in [
            NumberField::quadratic(-4).unwrap(),
            NumberField::pure(4, 2).unwrap(),
            NumberField::cyclotomic(8).unwrap(),
        ] {
            let z = k.dedekind_zeta::<f64>(2.0, 2.0).unwrap();
            assert!(z.value <= 2f64.powi(k.degree as i32));
            assert!(z.tail_bound.is_finite());
        }
    }

    #[test]
    fn l_values() {
        let l = dirichlet_l_quadratic(-4, 10_000).unwrap();
        assert!((l.value - std::f64::consts::PI / 4.0).abs() < 1e-3);
        assert!((l.value - std::f64::consts::PI / 4.0).abs() <= l.error_bound);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let l5 = dirichlet_l_quadratic(5, 10_000).unwrap();
        assert!((l5.value - 2.0 / 5f64.sqrt() * phi.ln()).abs() < 1e-3);
        let l3 = dirichlet_l_quadratic(-3, 10_000).unwrap();
        assert!((l3.value - 2.0 * std::f64::consts::PI / (6.0 * 3f64.sqrt())).abs() < 1e-3);
        assert!(dirichlet_l_quadratic(20, 10_000).is_err());
        assert!(dirichlet_l_quadratic(-4, 10).is_err());
    }

    #[test]
    fn kronecker_matches_legendre() {
        // Euler's criterion oracle for odd primes not dividing d.
        for &d in &[-4i64, -3, 5, 8, -8, 12, 13] {
            for p in primes_up_to(60)
                .into_iter()
                .filter(|&p| p > 2 && d % p as i64 != 0)
            {
                let a = d.rem_euclid(p as i64) as u64;
                let mut e = 1u64;
                for _ in 0..(p - 1) / 2 {
                    e = e * a % p;
                }
                let leg = if e == 1 { 1 } else { -1 };
                assert_eq!(kronecker(d, p), leg, "d={d} p={p}");
            }
        }
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(-7, 2), 1);
        assert_eq!(kronecker(-4, 2), 0);
    }

    #[test]
    fn fundamental_discriminants() {
        let yes = [-4, -3, -7, -8, 5, 8, 12, 13, -15, -20, 24];
        let no = [0, 1, -1, 2, 3, 4, 9, 16, -12, 20, 25];
        assert!(yes.iter().all(|&d| is_fundamental_discriminant(d)));
        assert!(no.iter().all(|&d| !is_fundamental_discriminant(d)));
    }

    #[test]
    fn discriminant_bounds() {
        assert!(
            (discriminant_lower_bound(2, 0, DiscBoundFlavor::Minkowski).unwrap() - 4.0).abs()
                < 1e-12
        );
        assert!(
            (discriminant_lower_bound(1, 0, DiscBoundFlavor::Minkowski).unwrap() - 1.0).abs()
                < 1e-12
        );
        assert_eq!(
            discriminant_lower_bound(3, 0, DiscBoundFlavor::Odlyzko60).unwrap(),
            216000.0
        );
        assert!(discriminant_lower_bound(2, 2, DiscBoundFlavor::Minkowski).is_err());
    }

    #[test]
    fn lehmer_discriminants() {
        assert_eq!(
            NumberField::lehmer().poly_discriminant,
            BigInt::from(36497i64 * 36497)
        );
        assert_eq!(
            NumberField::lehmer_trace_field().poly_discriminant,
            BigInt::from(36497)
        );
    }

    #[test]
    fn lehmer_trace_polynomial_value() {
        assert_eq!(
            lehmer_trace_polynomial(),
            ip("x^5 + x^4 - 5x^3 - 5x^2 + 4x + 3")
        );
    }
}
