//! Mahler measures, Kronecker/Salem classification and equidistribution of
//! conjugates on the unit circle.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{totient, IntPolynomial};
use crate::roots::{self, Root};
use crate::scalar::{DoubleDouble, RealScalar};

/// A root is on the unit circle when `||z| − 1|` is below this.
pub const UNIT_CIRCLE_TOL: f64 = 1e-12;
/// Roots with `UNIT_CIRCLE_TOL <= ||z| − 1| < AMBIGUITY_BAND` cannot be
/// classified safely.
pub const AMBIGUITY_BAND: f64 = 1e-8;

/// Split off the power of x; roots at 0 contribute nothing to the measure.
fn strip_x_power(f: &IntPolynomial) -> IntPolynomial {
    let k = f.coeffs().iter().take_while(|c| c.is_zero()).count();
    IntPolynomial::new(f.coeffs()[k..].to_vec())
}

fn check_monic(f: &IntPolynomial) -> Result<()> {
    if f.is_zero() || !f.is_monic() {
        return Err(Error::Domain(format!("{f} is not monic")));
    }
    Ok(())
}

/// Exact test that `f` is a product of cyclotomic polynomials (after
/// removing powers of x): divide out every Φ_m with φ(m) <= deg.
pub fn is_cyclotomic_product(f: &IntPolynomial) -> bool {
    let mut g = strip_x_power(f);
    // Products of cyclotomics are reciprocal up to sign with f(0) = ±1.
    if !g.is_monic() || g.coeff(0).abs() != BigInt::from(1) || !g.is_reciprocal_up_to_sign() {
        return false;
    }
    let mut m = 1u64;
    // φ(m) >= sqrt(m/2), so m <= 2 deg^2 covers every candidate.
    let limit = 2 * (g.degree() as u64).pow(2) + 2;
    while g.degree() > 0 && m <= limit {
        if totient(m) as usize > g.degree() {
            m += 1;
            continue;
        }
        let phi = IntPolynomial::cyclotomic(m);
        while let Ok(q) = g.div_exact(&phi) {
            g = q;
            if g.degree() == 0 {
                break;
            }
        }
        m += 1;
    }
    g.degree() == 0 && g.coeff(0) == BigInt::from(1)
}

fn refined_roots(f: &IntPolynomial) -> Result<Vec<Root<DoubleDouble>>> {
    roots::roots_with_multiplicity::<DoubleDouble>(&strip_x_power(f))
}

fn modulus(z: &num_complex::Complex<DoubleDouble>) -> DoubleDouble {
    z.re.hypot(z.im)
}

/// Logarithmic Mahler measure `Σ log⁺|root|` of a monic polynomial.
pub fn mahler_measure(f: &IntPolynomial) -> Result<f64> {
    check_monic(f)?;
    if is_cyclotomic_product(f) {
        return Ok(0.0);
    }
    let mut m = DoubleDouble::zero();
    for r in refined_roots(f)? {
        let a = modulus(&r.z);
        if a.to_f64() > 1.0 + UNIT_CIRCLE_TOL {
            m += a.ln() * DoubleDouble::from(r.multiplicity as f64);
        }
    }
    Ok(m.to_f64())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MahlerClass {
    Kronecker,
    SalemLike,
    Other,
}

/// Kronecker (all roots on the circle), Salem-like (exactly one root
/// outside, one inside, the rest on the circle) or other.
pub fn classify(f: &IntPolynomial) -> Result<MahlerClass> {
    check_monic(f)?;
    if is_cyclotomic_product(f) {
        return Ok(MahlerClass::Kronecker);
    }
    let (mut out, mut inside) = (0u32, 0u32);
    for r in refined_roots(f)? {
        let dev = modulus(&r.z).to_f64() - 1.0;
        if dev.abs() < UNIT_CIRCLE_TOL {
            continue;
        } else if dev.abs() < AMBIGUITY_BAND {
            return Err(Error::Precision(format!(
                "root modulus 1{dev:+e} inside the ambiguity band; refusing to classify"
            )));
        } else if dev > 0.0 {
            out += r.multiplicity;
        } else {
            inside += r.multiplicity;
        }
    }
    Ok(if out == 0 && inside == 0 {
        // Roots on the circle but not a cyclotomic product cannot happen for
        // monic integer polynomials (Kronecker); keep the numeric verdict.
        MahlerClass::Kronecker
    } else if out == 1 && inside == 1 {
        MahlerClass::SalemLike
    } else {
        MahlerClass::Other
    })
}

/// `N(1 − α) = Π (1 − α_i) = f(1)` for monic f, exactly; no sign flip is
/// needed with this convention.
pub fn norm_one_minus(f: &IntPolynomial) -> Result<BigInt> {
    check_monic(f)?;
    Ok(f.eval(&BigInt::from(1)))
}

#[derive(Clone, Debug, Serialize)]
pub struct RootMeasure {
    /// Arguments in (−π, π].
    pub angles: Vec<f64>,
    pub radii: Vec<f64>,
    pub degree: usize,
}

impl RootMeasure {
    pub fn of(f: &IntPolynomial) -> Result<Self> {
        let zs = roots::roots_f64(f)?;
        Ok(RootMeasure {
            angles: zs.iter().map(|z| z.im.atan2(z.re)).collect(),
            radii: zs.iter().map(|z| z.norm()).collect(),
            degree: zs.len(),
        })
    }

    pub fn from_angles(angles: Vec<f64>) -> Self {
        let n = angles.len();
        RootMeasure {
            radii: vec![1.0; n],
            angles,
            degree: n,
        }
    }

    /// `(k, ∫cos kθ dμ, ∫sin kθ dμ)` for k = 1..=kmax; the circle averages
    /// are all zero.
    pub fn fourier_averages(&self, kmax: u32) -> Vec<(u32, f64, f64)> {
        let n = self.degree as f64;
        (1..=kmax)
            .map(|k| {
                let kf = k as f64;
                let c = self.angles.iter().map(|t| (kf * t).cos()).sum::<f64>() / n;
                let s = self.angles.iter().map(|t| (kf * t).sin()).sum::<f64>() / n;
                (k, c, s)
            })
            .collect()
    }
}

/// Star discrepancy of `{θ/2π mod 1}` against the uniform law:
/// `max_i max(i/n − u_(i), u_(i) − (i−1)/n)` over the sorted points.
pub fn bilu_discrepancy(m: &RootMeasure) -> Result<f64> {
    if m.degree == 0 {
        return Err(Error::Domain("empty root measure".into()));
    }
    let tau = 2.0 * std::f64::consts::PI;
    let mut u: Vec<f64> = m
        .angles
        .iter()
        .map(|t| {
            let x = (t / tau).rem_euclid(1.0);
            if x >= 1.0 {
                0.0
            } else {
                x
            }
        })
        .collect();
    u.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = u.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in u.iter().enumerate() {
        let i = i as f64;
        d = d.max((i + 1.0) / n - x).max(x - i / n);
    }
    Ok(d)
}

/// `(log log d / log d)^3`, the shape of Dobrowolski's lower bound with
/// implicit constant 1.
pub fn dobrowolski_floor(d: u64) -> Result<f64> {
    if d < 3 {
        return Err(Error::Domain("dobrowolski_floor needs d >= 3".into()));
    }
    let l = (d as f64).ln();
    Ok((l.ln() / l).powi(3))
}

#[derive(Clone, Debug)]
pub enum AlgebraicNumberFamily {
    /// `x^n − a` for each index n.
    Binomial { a: i64, indices: Vec<usize> },
    /// `Φ_n` for each index n.
    Cyclotomic { indices: Vec<u64> },
    /// Explicit list.
    Explicit { polys: Vec<(usize, IntPolynomial)> },
}

impl AlgebraicNumberFamily {
    pub fn members(&self) -> Vec<(usize, IntPolynomial)> {
        match self {
            AlgebraicNumberFamily::Binomial { a, indices } => indices
                .iter()
                .map(|&n| {
                    let mut c = vec![0i64; n + 1];
                    c[0] = -a;
                    c[n] = 1;
                    (n, IntPolynomial::from_i64(&c))
                })
                .collect(),
            AlgebraicNumberFamily::Cyclotomic { indices } => indices
                .iter()
                .map(|&n| (n as usize, IntPolynomial::cyclotomic(n)))
                .collect(),
            AlgebraicNumberFamily::Explicit { polys } => polys.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyRow {
    pub n: usize,
    pub degree: usize,
    pub mahler: f64,
    pub discrepancy: f64,
    pub norm_one_minus: String,
}

/// Per-index Mahler measure, discrepancy and N(1 − α), computed in
/// parallel and returned in index order.
pub fn family_sweep(family: &AlgebraicNumberFamily) -> Result<Vec<FamilyRow>> {
    family
        .members()
        .par_iter()
        .map(|(n, f)| {
            Ok(FamilyRow {
                n: *n,
                degree: f.degree(),
                mahler: mahler_measure(f)?,
                discrepancy: bilu_discrepancy(&RootMeasure::of(f)?)?,
                norm_one_minus: norm_one_minus(f)?.to_string(),
            })
        })
        .collect()
}

pub fn family_csv(rows: &[FamilyRow]) -> String {
    let mut s = String::from("n,degree,mahler,discrepancy,norm_one_minus\n");
    for r in rows {
        s.push_str(&format!(
            "{},{},{:.12},{:.12},{}\n",
            r.n, r.degree, r.mahler, r.discrepancy, r.norm_one_minus
        ));
    }
    s
}

/// Root moduli product, `|f(0)|` for monic f.
pub fn modulus_product(f: &IntPolynomial) -> Result<f64> {
    let zs = roots::roots_f64(f)?;
    Ok(zs.iter().map(|z| z.norm()).product())
}

pub fn constant_term_abs(f: &IntPolynomial) -> f64 {
    f.coeff(0).to_f64().unwrap_or(f64::NAN).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::lehmer_polynomial;

    fn ip(s: &str) -> IntPolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn measure_examples() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((mahler_measure(&ip("x^2 - x - 1")).unwrap() - phi.ln()).abs() < 1e-15);
        for m in [1u64, 2, 3, 5, 12, 30, 105] {
            assert_eq!(mahler_measure(&IntPolynomial::cyclotomic(m)).unwrap(), 0.0);
        }
        let lehmer = mahler_measure(&lehmer_polynomial()).unwrap();
        assert!((lehmer - 0.162357612).abs() < 1e-6, "{lehmer}");
    }

    #[test]
    fn classification() {
        assert_eq!(
            classify(&IntPolynomial::cyclotomic(12)).unwrap(),
            MahlerClass::Kronecker
        );
        assert_eq!(
            classify(&lehmer_polynomial()).unwrap(),
            MahlerClass::SalemLike
        );
        assert_eq!(classify(&ip("x^2 - 2")).unwrap(), MahlerClass::Other);
        assert_eq!(
            classify(&ip("x^2 - 3x + 1")).unwrap(),
            MahlerClass::SalemLike
        );
    }

    #[test]
    fn norms() {
        for n in 1..20 {
            let f = AlgebraicNumberFamily::Binomial {
                a: 2,
                indices: vec![n],
            }
            .members()[0]
                .1
                .clone();
            assert_eq!(norm_one_minus(&f).unwrap(), BigInt::from(-1));
        }
        assert_eq!(
            norm_one_minus(&ip("x^2 - x - 1")).unwrap(),
            BigInt::from(-1)
        );
        for p in [2u64, 3, 5, 7, 11, 13] {
            assert_eq!(
                norm_one_minus(&IntPolynomial::cyclotomic(p)).unwrap(),
                BigInt::from(p)
            );
        }
    }

    #[test]
    fn discrepancy_examples() {
        let f = ip("x^64 - 2");
        let d = bilu_discrepancy(&RootMeasure::of(&f).unwrap()).unwrap();
        assert!(d <= 1.0 / 64.0 + 1e-6, "{d}");
        let single = bilu_discrepancy(&RootMeasure::of(&ip("x - 2")).unwrap()).unwrap();
        assert_eq!(single, 1.0);
        let l = bilu_discrepancy(&RootMeasure::of(&lehmer_polynomial()).unwrap()).unwrap();
        assert!(l > 0.0 && l < 0.35, "{l}");
    }

    #[test]
    fn discrepancy_matches_brute_force() {
        // Oracle: sup over a fine grid of anchored intervals [0, t).
        let angles = vec![0.3, -2.0, 1.1, 3.0, -0.4, 2.2, 0.0];
        let m = RootMeasure::from_angles(angles.clone());
        let u: Vec<f64> = angles
            .iter()
            .map(|t| (t / (2.0 * std::f64::consts::PI)).rem_euclid(1.0))
            .collect();
        let mut brute = 0.0f64;
        for k in 0..=200_000 {
            let t = k as f64 / 200_000.0;
            let open = u.iter().filter(|&&x| x < t).count() as f64 / u.len() as f64;
            let closed = u.iter().filter(|&&x| x <= t).count() as f64 / u.len() as f64;
            brute = brute.max((open - t).abs()).max((closed - t).abs());
        }
        assert!((bilu_discrepancy(&m).unwrap() - brute).abs() < 1e-4);
    }

    #[test]
    fn dobrowolski_values() {
        assert!((dobrowolski_floor(10).unwrap() - 0.047523).abs() < 1e-5);
        let l3 = 3f64.ln();
        assert!((dobrowolski_floor(3).unwrap() - (l3.ln() / l3).powi(3)).abs() < 1e-15);
        assert!((dobrowolski_floor(3).unwrap() - 0.000627).abs() < 1e-6);
        assert!(dobrowolski_floor(2).is_err());
        let mut prev = dobrowolski_floor(16).unwrap();
        for d in 17..2000 {
            let v = dobrowolski_floor(d).unwrap();
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn circle_averages_vanish_for_equidistributed_roots() {
        let m = RootMeasure::of(&ip("x^128 - 2")).unwrap();
        for (_, c, s) in m.fourier_averages(4) {
            assert!(c.abs() < 1e-12 && s.abs() < 1e-12);
        }
    }

    #[test]
    fn sweep_is_ordered_and_csv_has_header() {
        let fam = AlgebraicNumberFamily::Binomial {
            a: 2,
            indices: vec![8, 16, 32],
        };
        let rows = family_sweep(&fam).unwrap();
        assert_eq!(
            rows.iter().map(|r| r.n).collect::<Vec<_>>(),
            vec![8, 16, 32]
        );
        assert!(family_csv(&rows).starts_with("n,degree,mahler,discrepancy,norm_one_minus\n"));
    }
}
