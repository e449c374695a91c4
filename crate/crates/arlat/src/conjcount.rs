//! Ingredients of the conjugacy-class count: normalized-trace decay,
//! almost-orthogonality of trace vectors, and the Kabatjanskii–Levenstein
//! packing bound.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mahler::{mahler_measure, AlgebraicNumberFamily};
use crate::modp::factor_pattern;
use crate::numfield::{primes_up_to, NumberField};
use crate::poly::IntPolynomial;
use crate::roots::roots_f64;

/// `(log N / N)^{1/2}`.
pub fn decay_shape(n: usize) -> f64 {
    let n = n as f64;
    (n.ln() / n).sqrt()
}

/// Degree-set certificate: over primes p ≤ 200 not dividing the leading
/// coefficient or discriminant, intersect the sets of degrees reachable as
/// sums of mod-p factor degrees. If no proper degree survives, f is
/// irreducible. `false` means "not certified", not "reducible".
pub fn certify_irreducible(f: &IntPolynomial) -> bool {
    let n = f.degree();
    if n <= 1 {
        return n == 1;
    }
    let disc = f.discriminant();
    if disc.is_zero() {
        return false;
    }
    let lead = f.leading();
    let mut possible = vec![true; n + 1];
    for p in primes_up_to(200) {
        let bp = BigInt::from(p);
        if (&disc % &bp).is_zero() || (&lead % &bp).is_zero() {
            continue;
        }
        let mut reach = vec![false; n + 1];
        reach[0] = true;
        for (d, _) in factor_pattern(f, p) {
            for s in (d..=n).rev() {
                reach[s] |= reach[s - d];
            }
        }
        for s in 0..=n {
            possible[s] &= reach[s];
        }
        if (1..n).all(|s| !possible[s]) {
            return true;
        }
    }
    false
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalizedTrace {
    pub degree: usize,
    /// `|a_{N−1}| / (a_N · N)`, exact.
    pub exact: String,
    pub value: f64,
    /// `|Σ roots| / N` from numerical roots.
    pub root_sum: f64,
    pub irreducible_certified: bool,
}

/// `|tr α / N|` for a root α of f, read off the second coefficient.
pub fn normalized_trace(f: &IntPolynomial) -> Result<NormalizedTrace> {
    let n = f.degree();
    if n < 2 {
        return Err(Error::Domain(format!("degree must be at least 2, got {n}")));
    }
    if !f.is_monic() {
        return Err(Error::Domain(format!("{f} is not monic")));
    }
    if f.discriminant().is_zero() {
        return Err(Error::Domain(format!(
            "{f} has a repeated root, so it is reducible"
        )));
    }
    let exact = BigRational::new(f.coeff(n - 1).abs(), f.leading() * BigInt::from(n));
    let roots = roots_f64(f)?;
    let root_sum = roots.iter().sum::<Complex<f64>>().norm() / n as f64;
    Ok(NormalizedTrace {
        degree: n,
        exact: exact.to_string(),
        value: exact.to_f64().unwrap_or(f64::NAN),
        root_sum,
        irreducible_certified: certify_irreducible(f),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceDecayRow {
    pub index: usize,
    pub degree: usize,
    pub normalized_trace: f64,
    pub shape: f64,
    /// `normalized_trace / shape`: the measured constant.
    pub ratio: f64,
    pub mahler: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceDecaySweep {
    pub rows: Vec<TraceDecayRow>,
    pub max_ratio: f64,
    pub mahler_cap: f64,
    /// Some member exceeds the Mahler cap.
    pub unbounded_mahler: bool,
}

/// Normalized trace against `(log N / N)^{1/2}` across a family; members
/// with Mahler measure above `mahler_cap` flag the family.
pub fn trace_decay_sweep(
    family: &AlgebraicNumberFamily,
    mahler_cap: f64,
) -> Result<TraceDecaySweep> {
    let rows: Vec<TraceDecayRow> = family
        .members()
        .par_iter()
        .map(|(index, f)| {
            let t = normalized_trace(f)?;
            let shape = decay_shape(t.degree);
            Ok(TraceDecayRow {
                index: *index,
                degree: t.degree,
                normalized_trace: t.value,
                shape,
                ratio: t.value / shape,
                mahler: mahler_measure(f)?,
            })
        })
        .collect::<Result<_>>()?;
    let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let unbounded_mahler = rows.iter().any(|r| r.mahler > mahler_cap);
    Ok(TraceDecaySweep {
        rows,
        max_ratio,
        mahler_cap,
        unbounded_mahler,
    })
}

pub fn trace_decay_csv(s: &TraceDecaySweep) -> String {
    let mut out = String::from("index,degree,normalized_trace,shape,ratio,mahler\n");
    for r in &s.rows {
        out.push_str(&format!(
            "{},{},{:.12},{:.12},{:.12},{:.12}\n",
            r.index, r.degree, r.normalized_trace, r.shape, r.ratio, r.mahler
        ));
    }
    out
}

/// An element `x = λ + λ^{−1}` of a number field, written as an integer
/// polynomial in the field generator θ, with the minimal polynomial of λ
/// used to validate the embedding.
#[derive(Clone, Debug)]
pub struct TraceVector {
    pub label: String,
    pub x: IntPolynomial,
    pub lambda_poly: IntPolynomial,
}

/// Exact trace `tr_{K/Q} g(θ)` from the power sums of the field polynomial.
pub fn field_trace(field: &NumberField, g: &IntPolynomial) -> BigInt {
    g.coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| c * field.min_poly.power_sum(k))
        .sum()
}

fn mul_mod(a: &IntPolynomial, b: &IntPolynomial, m: &IntPolynomial) -> IntPolynomial {
    (a.clone() * b.clone()).pseudo_rem(m)
}

/// `λ^n + λ^{−n}` as a polynomial in θ = λ + λ^{−1}, reduced modulo the
/// field polynomial.
pub fn chebyshev_in_field(field: &NumberField, n: usize) -> IntPolynomial {
    let m = &field.min_poly;
    let theta = IntPolynomial::monomial(1).pseudo_rem(m);
    let (mut prev, mut cur) = (IntPolynomial::constant(BigInt::from(2)), theta.clone());
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = mul_mod(&cur, &theta, m) - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Minimal polynomial of `λ^n` from that of λ: `Π (x − ρ^n)` over the roots,
/// rounded to integers after checking the rounding error.
pub fn power_min_poly(f: &IntPolynomial, n: u32) -> Result<IntPolynomial> {
    let roots = roots_f64(f)?;
    let mut coeffs = vec![Complex::new(1.0, 0.0)];
    for r in &roots {
        let rn = r.powu(n);
        let mut next = vec![Complex::new(0.0, 0.0); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * rn;
        }
        coeffs = next;
    }
    let mut ints = Vec::with_capacity(coeffs.len());
    for c in &coeffs {
        let r = c.re.round();
        if (c.re - r).abs() > 1e-6 * r.abs().max(1.0) || c.im.abs() > 1e-6 * r.abs().max(1.0) {
            return Err(Error::Precision(format!(
                "coefficient {c} of the power polynomial is not near an integer"
            )));
        }
        ints.push(BigInt::from(r as i64));
    }
    let p = IntPolynomial::new(ints);
    if p.discriminant().is_zero() {
        return Err(Error::Domain(format!(
            "λ^{n} has repeated conjugates; not a primitive power"
        )));
    }
    Ok(p)
}

/// Powers `λ^n`, n in `exponents`, as trace vectors in the field generated
/// by θ = λ + λ^{−1}; `field` must be presented by the minimal polynomial
/// of θ.
pub fn salem_power_vectors(
    name: &str,
    lambda: &IntPolynomial,
    field: &NumberField,
    exponents: &[u32],
) -> Result<Vec<TraceVector>> {
    exponents
        .iter()
        .map(|&n| {
            Ok(TraceVector {
                label: format!("{name}^{n}"),
                x: chebyshev_in_field(field, n as usize),
                lambda_poly: if n == 1 {
                    lambda.clone()
                } else {
                    power_min_poly(lambda, n)?
                },
            })
        })
        .collect()
}

/// Powers of Lehmer's number in the Lehmer trace field.
pub fn lehmer_power_vectors(field: &NumberField, exponents: &[u32]) -> Result<Vec<TraceVector>> {
    salem_power_vectors(
        "lehmer",
        &crate::numfield::lehmer_polynomial(),
        field,
        exponents,
    )
}

#[derive(Clone, Debug, Serialize)]
pub struct GramDiagnostics {
    pub labels: Vec<String>,
    pub degree: usize,
    /// Per vector, the value at each place (real places first; complex
    /// places as the embedding with positive imaginary part).
    pub vectors: Vec<Vec<[f64; 2]>>,
    pub gram: Vec<Vec<f64>>,
    /// `tr_{K/Q}(x y) / N`, exact.
    pub exact_gram: Vec<Vec<String>>,
    pub off_diag_max: f64,
    pub diag_range: (f64, f64),
    pub shape: f64,
    /// `off_diag_max / shape`.
    pub off_diag_constant: f64,
    /// `max |diag − 2| / shape`.
    pub diag_constant: f64,
    pub rank: usize,
    /// Largest difference between the numeric and exact Gram entries.
    pub exact_agreement: f64,
}

/// Gram matrix of trace vectors under
/// `⟨x, y⟩ = (1/N)(Σ_real x_ν y_ν + Σ_complex 2 Re(x_ν ȳ_ν))`.
pub fn gram_diagnostics(vectors: &[TraceVector], field: &NumberField) -> Result<GramDiagnostics> {
    if vectors.is_empty() {
        return Err(Error::Domain("no vectors".into()));
    }
    let n = field.degree;
    let (r1, r2) = field.signature;
    let places: Vec<Complex<f64>> = field.embeddings[..r1 + r2].to_vec();
    let mut embedded = Vec::with_capacity(vectors.len());
    for v in vectors {
        let vals: Vec<Complex<f64>> = places
            .iter()
            .map(|t| {
                v.x.coeffs()
                    .iter()
                    .rev()
                    .fold(Complex::new(0.0, 0.0), |acc, c| {
                        acc * t + c.to_f64().unwrap_or(f64::NAN)
                    })
            })
            .collect();
        let lambda_roots = roots_f64(&v.lambda_poly)?;
        let xs: Vec<Complex<f64>> = lambda_roots.iter().map(|r| r + r.inv()).collect();
        for (k, val) in vals.iter().enumerate() {
            let ok = xs.iter().any(|x| {
                (x - val).norm() <= 1e-8 * val.norm().max(1.0)
                    || (x.conj() - val).norm() <= 1e-8 * val.norm().max(1.0)
            });
            if !ok {
                return Err(Error::Domain(format!(
                    "{}: value {val} at place {k} is not λ + 1/λ for a root of {}",
                    v.label, v.lambda_poly
                )));
            }
        }
        // Real places: drop the rounding residue in the imaginary part.
        let vals: Vec<Complex<f64>> = vals
            .into_iter()
            .enumerate()
            .map(|(k, z)| if k < r1 { Complex::new(z.re, 0.0) } else { z })
            .collect();
        embedded.push(vals);
    }
    let m = vectors.len();
    let mut gram = vec![vec![0.0; m]; m];
    let mut exact_gram = vec![vec![String::new(); m]; m];
    let mut exact_agreement: f64 = 0.0;
    let nn = BigInt::from(n);
    for i in 0..m {
        for j in 0..m {
            let mut s = 0.0;
            for (k, (a, b)) in embedded[i].iter().zip(&embedded[j]).enumerate() {
                s += if k < r1 {
                    a.re * b.re
                } else {
                    2.0 * (a * b.conj()).re
                };
            }
            gram[i][j] = s / n as f64;
            let prod = mul_mod(&vectors[i].x, &vectors[j].x, &field.min_poly);
            let exact = BigRational::new(field_trace(field, &prod), nn.clone());
            exact_agreement =
                exact_agreement.max((exact.to_f64().unwrap_or(f64::NAN) - gram[i][j]).abs());
            exact_gram[i][j] = exact.to_string();
        }
    }
    let off_diag_max = (0..m)
        .flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| gram[i][j].abs())
        .fold(0.0, f64::max);
    let diag: Vec<f64> = (0..m).map(|i| gram[i][i]).collect();
    let diag_range = (
        diag.iter().cloned().fold(f64::INFINITY, f64::min),
        diag.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    );
    let shape = decay_shape(n);
    let diag_constant = diag.iter().map(|d| (d - 2.0).abs()).fold(0.0, f64::max) / shape;
    let eig = DMatrix::from_fn(m, m, |i, j| gram[i][j]).symmetric_eigenvalues();
    let top = eig.iter().cloned().fold(0.0, f64::max);
    let rank = eig.iter().filter(|&&e| e > 1e-9 * top.max(1.0)).count();
    Ok(GramDiagnostics {
        labels: vectors.iter().map(|v| v.label.clone()).collect(),
        degree: n,
        vectors: embedded
            .iter()
            .map(|v| v.iter().map(|z| [z.re, z.im]).collect())
            .collect(),
        gram,
        exact_gram,
        off_diag_max,
        diag_range,
        shape,
        off_diag_constant: off_diag_max / shape,
        diag_constant,
        rank,
        exact_agreement,
    })
}

/// `(C n / A²)^{C A²}` for unit vectors in dimension n with pairwise
/// `|⟨v_i, v_j⟩| ≤ A n^{−1/2}`, `1/2 < A < √n / 2` (Kabatjanskii-Levenstein). The
/// absolute constant C is not known explicitly; 1 is a placeholder.
pub fn kl_packing_bound(n: usize, a: f64, c: f64) -> Result<f64> {
    let half_root = (n as f64).sqrt() / 2.0;
    if !(a > 0.5 && a < half_root) {
        return Err(Error::Domain(format!(
            "A must lie in (1/2, √n/2) = (0.5, {half_root}), got {a}"
        )));
    }
    if !(c > 0.0) {
        return Err(Error::Domain(format!("C must be positive, got {c}")));
    }
    Ok((c * n as f64 / (a * a)).powf(c * a * a))
}

/// Seeded Gaussian-normalized unit vectors.
pub fn random_unit_vectors(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.into_iter().map(|x| x / norm).collect()
        })
        .collect()
}

/// Greedy subset in input order with pairwise `|⟨v, w⟩| ≤ A n^{−1/2}`.
/// Returns the chosen indices.
pub fn greedy_almost_orthogonal(vectors: &[Vec<f64>], a: f64) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        let thr = a / (v.len() as f64).sqrt();
        let ok = chosen.iter().all(|&j| {
            v.iter()
                .zip(&vectors[j])
                .map(|(x, y)| x * y)
                .sum::<f64>()
                .abs()
                <= thr
        });
        if ok {
            chosen.push(i);
        }
    }
    chosen
}

#[derive(Clone, Debug, Serialize)]
pub struct PackingCheck {
    pub n: usize,
    pub a: f64,
    pub c: f64,
    pub candidates: usize,
    pub seed: u64,
    pub greedy_count: usize,
    pub bound: f64,
    pub within_bound: bool,
    /// Smallest C ≥ 1 (to 1e-6) with the bound at least the greedy count.
    pub calibrated_c: f64,
}

pub fn packing_check(
    n: usize,
    a: f64,
    c: f64,
    candidates: usize,
    seed: u64,
) -> Result<PackingCheck> {
    let bound = kl_packing_bound(n, a, c)?;
    let vecs = random_unit_vectors(n, candidates, seed);
    let greedy_count = greedy_almost_orthogonal(&vecs, a).len();
    let need = greedy_count as f64;
    let (mut lo, mut hi) = (1.0, 1.0);
    if kl_packing_bound(n, a, 1.0)? < need {
        while kl_packing_bound(n, a, hi)? < need {
            lo = hi;
            hi *= 2.0;
        }
        while hi - lo > 1e-6 {
            let mid = 0.5 * (lo + hi);
            if kl_packing_bound(n, a, mid)? >= need {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }
    Ok(PackingCheck {
        n,
        a,
        c,
        candidates,
        seed,
        greedy_count,
        bound,
        within_bound: need <= bound,
        calibrated_c: hi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(s: &str) -> IntPolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn trace_readoff() {
        assert_eq!(normalized_trace(&ip("x^5 - 2")).unwrap().value, 0.0);
        let t = normalized_trace(&ip("x^2 - x - 1")).unwrap();
        assert_eq!(t.exact, "1/2");
        assert!((t.root_sum - 0.5).abs() < 1e-12);
        let t = normalized_trace(&IntPolynomial::cyclotomic(7)).unwrap();
        assert_eq!(t.exact, "1/6");
        assert!(t.irreducible_certified);
        assert!(normalized_trace(&ip("x^2 - 2x + 1")).is_err());
        assert!(normalized_trace(&ip("2x^2 - 1")).is_err());
    }

    #[test]
    fn irreducibility_certificate() {
        assert!(certify_irreducible(&ip("x^5 - x - 1")));
        assert!(certify_irreducible(&crate::numfield::lehmer_polynomial()));
        assert!(!certify_irreducible(&ip("x^4 + 1")));
        // (x^2 + 1)(x^2 + 3)
        assert!(!certify_irreducible(&ip("x^4 + 4x^2 + 3")));
    }

    #[test]
    fn kl_examples() {
        assert!((kl_packing_bound(100, 1.0, 1.0).unwrap() - 100.0).abs() < 1e-9);
        assert!(kl_packing_bound(100, 5.0, 1.0).is_err());
        assert!(kl_packing_bound(100, 0.5, 1.0).is_err());
    }

    #[test]
    fn chebyshev_matches_embeddings() {
        let k = NumberField::lehmer_trace_field();
        let lam = roots_f64(&crate::numfield::lehmer_polynomial())
            .unwrap()
            .into_iter()
            .fold(Complex::new(0.0, 0.0), |a, b| {
                if b.norm() > a.norm() {
                    b
                } else {
                    a
                }
            });
        let x3 = chebyshev_in_field(&k, 3);
        let theta = k.embeddings.iter().find(|t| t.re > 2.0).unwrap();
        let v = x3
            .coeffs()
            .iter()
            .rev()
            .fold(Complex::new(0.0, 0.0), |acc, c| {
                acc * theta + c.to_f64().unwrap()
            });
        assert!((v - (lam.powu(3) + lam.powu(3).inv())).norm() < 1e-9);
    }

    #[test]
    fn gram_rank_detects_repeats() {
        let k = NumberField::lehmer_trace_field();
        let v = lehmer_power_vectors(&k, &[1, 1]).unwrap();
        let g = gram_diagnostics(&v, &k).unwrap();
        assert_eq!(g.rank, 1);
    }
}
