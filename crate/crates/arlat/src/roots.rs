//! Complex roots of integer polynomials.
//!
//! Distinct roots of each squarefree factor are found by Aberth–Ehrlich
//! simultaneous iteration started on a circle inside the Cauchy annulus, then
//! polished by Newton steps in the requested scalar type. Multiplicities come
//! from the exact Yun decomposition, so repeated roots never reach the
//! floating-point stage.

use num_complex::Complex;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::poly::IntPolynomial;
use crate::scalar::RealScalar;

/// Residue target for polishing, relative to the coefficient height.
pub const RESIDUAL_TARGET: f64 = 1e-30;
const MAX_ABERTH_ITERS: usize = 2000;

#[derive(Clone, Debug)]
pub struct Root<S> {
    pub z: Complex<S>,
    pub multiplicity: u32,
}

fn cabs<S: RealScalar>(z: Complex<S>) -> S {
    z.re.hypot(z.im)
}

fn horner<S: RealScalar>(c: &[S], z: Complex<S>) -> (Complex<S>, Complex<S>) {
    let mut p = Complex::new(S::zero(), S::zero());
    let mut dp = Complex::new(S::zero(), S::zero());
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + Complex::new(a, S::zero());
    }
    (p, dp)
}

/// `Σ |a_i| |z|^i`, the natural scale for the residual at `z`.
fn abs_scale<S: RealScalar>(c: &[S], r: S) -> S {
    let mut acc = S::zero();
    for &a in c.iter().rev() {
        acc = acc * r + a.abs();
    }
    acc
}

/// Bounds `lo <= |root| <= hi` from the Cauchy bound of `f` and of its
/// reversal.
fn cauchy_annulus(c: &[f64]) -> (f64, f64) {
    let n = c.len() - 1;
    let lead = c[n].abs();
    let hi = 1.0 + c[..n].iter().map(|a| a.abs() / lead).fold(0.0, f64::max);
    let c0 = c[0].abs();
    let lo = if c0 == 0.0 {
        0.0
    } else {
        1.0 / (1.0 + c[1..].iter().map(|a| a.abs() / c0).fold(0.0, f64::max))
    };
    (lo, hi)
}

fn aberth_f64(c: &[f64]) -> Result<Vec<Complex<f64>>> {
    let n = c.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![Complex::new(-c[0] / c[1], 0.0)]);
    }
    let (lo, hi) = cauchy_annulus(c);
    // Geometric mean of the coefficient ratio: exact radius for binomials.
    let guess = (c[0].abs() / c[n].abs()).powf(1.0 / n as f64);
    let r = if guess > 0.0 {
        guess.clamp(lo.max(1e-300), hi)
    } else {
        (lo + hi) / 2.0
    };
    let mut z: Vec<Complex<f64>> = (0..n)
        .map(|k| {
            Complex::from_polar(
                r,
                2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4,
            )
        })
        .collect();
    let mut done = vec![false; n];
    for _ in 0..MAX_ABERTH_ITERS {
        let mut all = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (p, dp) = horner(c, z[i]);
            let scale = abs_scale(c, z[i].norm());
            if p.norm() <= 4.0 * f64::EPSILON * scale {
                done[i] = true;
                continue;
            }
            all = false;
            let ratio = p / dp;
            let mut s = Complex::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    s += (z[i] - z[j]).inv();
                }
            }
            let w = ratio / (Complex::new(1.0, 0.0) - ratio * s);
            z[i] -= w;
            if w.norm() <= 1e-15 * z[i].norm().max(1e-300) {
                done[i] = true;
            }
        }
        if all {
            break;
        }
    }
    if z.iter().any(|w| !w.re.is_finite() || !w.im.is_finite()) {
        return Err(Error::Precision("root iteration diverged".into()));
    }
    Ok(z)
}

fn newton_polish<S: RealScalar>(c: &[S], z0: Complex<S>) -> (Complex<S>, S) {
    let mut z = z0;
    let mut best = z0;
    let mut best_res = S::from_f64(f64::INFINITY);
    for _ in 0..8 {
        let (p, dp) = horner(c, z);
        let res = cabs(p) / abs_scale(c, cabs(z));
        if res < best_res {
            best_res = res;
            best = z;
        }
        if res.is_zero() || cabs(dp).is_zero() {
            break;
        }
        z = z - p / dp;
    }
    (best, best_res)
}

/// Distinct roots of a squarefree polynomial, polished in scalar `S`.
/// Returns the roots and the worst relative residual.
pub fn squarefree_roots<S: RealScalar>(f: &IntPolynomial) -> Result<(Vec<Complex<S>>, f64)> {
    if f.is_zero() {
        return Err(Error::Domain("zero polynomial has no root set".into()));
    }
    let cf = f.to_f64_coeffs();
    if cf.iter().any(|x| !x.is_finite()) {
        return Err(Error::Precision("coefficients exceed f64 range".into()));
    }
    let cs: Vec<S> = f
        .coeffs()
        .iter()
        .map(|a| {
            // Split large integers so double-double keeps all digits.
            let hi = a.to_f64().unwrap_or(0.0);
            let rest = a - num_bigint::BigInt::from(hi as i128);
            S::from_f64(hi) + S::from_f64(rest.to_f64().unwrap_or(0.0))
        })
        .collect();
    let approx = aberth_f64(&cf)?;
    let mut roots = Vec::with_capacity(approx.len());
    let mut worst = 0.0f64;
    for z in approx {
        let (r, res) = newton_polish(&cs, Complex::new(S::from_f64(z.re), S::from_f64(z.im)));
        worst = worst.max(res.to_f64());
        roots.push(r);
    }
    // Distinctness: squarefree input has distinct roots; a collision means
    // the iteration lost one.
    let n = roots.len();
    let scale = roots.iter().map(|z| cabs(*z).to_f64()).fold(1.0, f64::max);
    for i in 0..n {
        for j in i + 1..n {
            if cabs(roots[i] - roots[j]).to_f64() < 1e-12 * scale {
                return Err(Error::Precision(format!(
                    "roots {i} and {j} not separated at working precision"
                )));
            }
        }
    }
    Ok((roots, worst))
}

/// All complex roots with multiplicity, via the exact squarefree
/// decomposition.
pub fn roots_with_multiplicity<S: RealScalar>(f: &IntPolynomial) -> Result<Vec<Root<S>>> {
    let mut out = Vec::new();
    for (g, m) in f.squarefree_decomposition() {
        let (zs, _) = squarefree_roots::<S>(&g)?;
        out.extend(zs.into_iter().map(|z| Root { z, multiplicity: m }));
    }
    Ok(out)
}

/// Roots listed with repetition, in f64.
pub fn roots_f64(f: &IntPolynomial) -> Result<Vec<Complex<f64>>> {
    let mut out = Vec::new();
    for r in roots_with_multiplicity::<f64>(f)? {
        for _ in 0..r.multiplicity {
            out.push(r.z);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::DoubleDouble;

    fn ip(s: &str) -> IntPolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn golden_ratio_roots() {
        let mut r: Vec<f64> = roots_f64(&ip("x^2 - x - 1"))
            .unwrap()
            .iter()
            .map(|z| z.re)
            .collect();
        r.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let s5 = 5f64.sqrt();
        assert!((r[0] - (1.0 - s5) / 2.0).abs() < 1e-14);
        assert!((r[1] - (1.0 + s5) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn double_double_hits_residual_target() {
        let lehmer = ip("x^10 + x^9 - x^7 - x^6 - x^5 - x^4 - x^3 + x + 1");
        let (zs, worst) = squarefree_roots::<DoubleDouble>(&lehmer).unwrap();
        assert_eq!(zs.len(), 10);
        assert!(worst < RESIDUAL_TARGET, "worst residual {worst:e}");
    }

    #[test]
    fn repeated_roots_keep_multiplicity() {
        let f = &ip("x - 1").pow(3) * &ip("x^2 + 1");
        let r = roots_with_multiplicity::<f64>(&f).unwrap();
        let total: u32 = r.iter().map(|x| x.multiplicity).sum();
        assert_eq!(total, 5);
        assert!(r
            .iter()
            .any(|x| x.multiplicity == 3 && (x.z.re - 1.0).abs() < 1e-14));
    }

    #[test]
    fn high_degree_binomial() {
        let f = ip("x^256 - 2");
        let zs = roots_f64(&f).unwrap();
        assert_eq!(zs.len(), 256);
        let r = 2f64.powf(1.0 / 256.0);
        assert!(zs.iter().all(|z| (z.norm() - r).abs() < 1e-12));
    }

    #[test]
    fn single_precision_path() {
        let (zs, _) = squarefree_roots::<f32>(&ip("x^2 + 1")).unwrap();
        assert!(zs.iter().all(|z| (z.re.hypot(z.im) - 1.0).abs() < 1e-6));
    }
}
