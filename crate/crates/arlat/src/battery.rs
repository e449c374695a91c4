//! The acceptance battery: every check the library is expected to pass, each
//! reported as one line with its measured values.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::btree::{check_preset_geometry, tree_weight_limit, tree_weight_partial_sum, TorusType};
use crate::error::{Error, Result};
use crate::geom::{
    class_invariants, compare_orbital, frobenius_distance, orbital_presets, ClassType, FieldKind,
    MobiusElement, RadialBump,
};
use crate::mahler::{classify, family_sweep, mahler_measure, AlgebraicNumberFamily, MahlerClass};
use crate::nerve::{self, MetricSampleSpace};
use crate::numfield::{lehmer_polynomial, NumberField};
use crate::poly::IntPolynomial;
use crate::repzeta::{jz_level_multiset, sum_of_squares_check};
use crate::volume::{
    complex_ratio_integral, covolume, local_ratio_complex_oracle, local_ratio_real_oracle,
    nerve_degree_constant, real_ratio_integral, torus_volume_quadratic, LatticeSpec,
};

/// Criteria that cannot pass as stated; they run and print, but a failure
/// does not fail the battery.
pub const KNOWN_FAILURES: &[&str] = &["4b", "12b"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    Quick,
    Full,
}

impl std::str::FromStr for Profile {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Profile::Quick),
            "full" => Ok(Profile::Full),
            _ => Err(Error::Parse(format!(
                "unknown profile {s:?}; expected quick or full"
            ))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Criterion {
    pub id: String,
    pub name: String,
    pub passed: bool,
    pub known: bool,
    pub measured: String,
    #[serde(skip)]
    pub elapsed: Duration,
    /// Wall-clock budget; exceeding it fails the criterion.
    #[serde(skip)]
    pub budget: Option<Duration>,
}

impl Criterion {
    /// Passed, or failed but listed as known.
    pub fn acceptable(&self) -> bool {
        self.passed || self.known
    }

    pub fn line(&self) -> String {
        let status = match (self.passed, self.known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (KNOWN)",
            (false, false) => "FAIL",
        };
        format!("[{status}] {:<4} {}: {}", self.id, self.name, self.measured)
    }
}

fn timed(id: &str, name: &str, f: impl FnOnce() -> Result<(bool, String)>) -> Criterion {
    let t = Instant::now();
    let (passed, measured) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
    Criterion {
        id: id.into(),
        name: name.into(),
        passed,
        known: KNOWN_FAILURES.contains(&id),
        measured,
        elapsed: t.elapsed(),
        budget: None,
    }
}

fn budget(mut c: Criterion, secs: u64) -> Criterion {
    let b = Duration::from_secs(secs);
    if c.elapsed > b {
        c.passed = false;
        c.measured.push_str(&format!("; over the {secs} s budget"));
    }
    c.budget = Some(b);
    c
}

pub fn tree_oracle(profile: Profile) -> Criterion {
    let radius = if profile == Profile::Full { 8 } else { 6 };
    timed("1", "tree fixed sets vs closed forms", || {
        let (mut ok, mut total, mut bad) = (0, 0, Vec::new());
        for q in [2u64, 3, 5] {
            let mut cells = Vec::new();
            for v in [0u32, 2, 4] {
                if !(q == 2 && v == 0) {
                    cells.push((TorusType::Split, v));
                }
                cells.push((TorusType::Unramified, v));
            }
            if q != 2 {
                for v in [0u32, 1, 3] {
                    cells.push((TorusType::TamelyRamified, v));
                }
            }
            for (t, v) in cells {
                total += 1;
                if check_preset_geometry(t, q, v, radius)?.ok() {
                    ok += 1;
                } else {
                    bad.push(format!("{t:?} q={q} v={v}"));
                }
            }
        }
        Ok((bad.is_empty(), format!("{ok}/{total} cells exact at radius {radius} (q=2 split v=0 unrealizable); failing {bad:?}")))
    })
}

pub fn tree_weight() -> Criterion {
    timed("2", "tree weight sum", || {
        let s = tree_weight_partial_sum(2, 20);
        let limit = tree_weight_limit(2);
        let tail = &limit - &s;
        let five_halves = BigRational::new(BigInt::from(5), BigInt::from(2));
        let bound = BigRational::new(BigInt::one(), BigInt::from(1u64 << 19));
        let passed = limit == five_halves && tail.is_positive() && tail < bound;
        Ok((passed, format!("limit {limit}, tail {tail}")))
    })
}

pub fn repzeta(profile: Profile) -> Criterion {
    let qs: &[u64] = if profile == Profile::Full {
        &[3, 5, 7, 11]
    } else {
        &[3, 5, 7]
    };
    timed("3", "representation zeta sum of squares", || {
        let mut all = true;
        for &q in qs {
            all &= sum_of_squares_check(q, 4)?.ok;
        }
        let level1 = jz_level_multiset(5, 1)?.sum_of_squares();
        let passed = all && level1 == BigInt::from(120);
        Ok((
            passed,
            format!("q in {qs:?}, n <= 4 exact: {all}; q=5 level 1 sums to {level1}"),
        ))
    })
}

pub fn measure_ratio_real() -> Criterion {
    timed("4a", "real measure ratio", || {
        let i = real_ratio_integral(1e-9)?;
        let r = local_ratio_real_oracle(1e-9)?;
        let passed = (i - PI / 2.0).abs() <= 1e-6 && (r.oracle_value - 2.0 * PI).abs() <= 1e-5;
        Ok((
            passed,
            format!(
                "integral {i:.10} (π/2 = {:.10}), ratio {:.10}",
                PI / 2.0,
                r.oracle_value
            ),
        ))
    })
}

pub fn measure_ratio_complex() -> Criterion {
    timed("4b", "complex measure ratio", || {
        let i = complex_ratio_integral(1e-9)?;
        let r = local_ratio_complex_oracle(1e-9)?;
        let passed = (i - PI / 6.0).abs() <= 1e-6 && (r.oracle_value - 8.0 * PI * PI).abs() <= 1e-4;
        Ok((
            passed,
            format!(
                "integral {i:.10} (π/6 = {:.10}), ratio {:.6} (8π² = {:.6})",
                PI / 6.0,
                r.oracle_value,
                8.0 * PI * PI
            ),
        ))
    })
}

pub fn nerve_constant() -> Criterion {
    timed("5", "nerve degree constant", || {
        let c = nerve_degree_constant();
        Ok((
            (c - 244.52).abs() <= 0.01,
            format!("V(4/5)/V(2/15) = {c:.6}"),
        ))
    })
}

pub fn covolume_q() -> Criterion {
    timed("6", "covolume over Q", || {
        let base = covolume(&LatticeSpec::rationals(&[2, 3]))?;
        let sym = base
            .symbolic
            .clone()
            .ok_or_else(|| Error::Domain("no symbolic value".into()))?;
        let mut linear = true;
        for k in [2u64, 3, 7] {
            let mut spec = LatticeSpec::rationals(&[2, 3]);
            spec.index_uv = k;
            let s = covolume(&spec)?
                .symbolic
                .ok_or_else(|| Error::Domain("no symbolic value".into()))?;
            linear &= s.pi_power == sym.pi_power
                && s.coeff == &sym.coeff * BigRational::from_integer(BigInt::from(k));
        }
        let passed = (base.value - PI / 3.0).abs() <= 1e-9 && sym.to_string() == "π/3" && linear;
        Ok((
            passed,
            format!(
                "{sym} = {:.12}, exactly linear in [U:V]: {linear}",
                base.value
            ),
        ))
    })
}

pub fn torus_volume() -> Criterion {
    timed("7", "quadratic torus volumes", || {
        let r = torus_volume_quadratic(-4)?;
        let mut consistent = true;
        let mut diffs = Vec::new();
        for d in [-4i64, -3, 5] {
            let t = torus_volume_quadratic(d)?;
            consistent &= t.consistent;
            diffs.push(format!("{d}: {:.1e}", t.difference));
        }
        let passed = (r.lambda_route - 0.25).abs() <= 1e-3
            && (r.l_value.value - PI / 4.0).abs() <= 1e-3
            && consistent;
        Ok((
            passed,
            format!(
                "d=-4 volume {:.8}, L(1) {:.8}; route gaps {}",
                r.lambda_route,
                r.l_value.value,
                diffs.join(", ")
            ),
        ))
    })
}

pub fn mahler_bilu(profile: Profile) -> Criterion {
    let top = if profile == Profile::Full { 256 } else { 64 };
    timed("8", "Mahler measure and Bilu sweep", || {
        let mut kronecker = true;
        for m in 1..=30u64 {
            let f = IntPolynomial::cyclotomic(m);
            kronecker &= mahler_measure(&f)? == 0.0 && classify(&f)? == MahlerClass::Kronecker;
        }
        let lehmer = mahler_measure(&lehmer_polynomial())?;
        let indices: Vec<usize> = std::iter::successors(Some(8usize), |n| Some(n * 2))
            .take_while(|&n| n <= top)
            .collect();
        let rows = family_sweep(&AlgebraicNumberFamily::Binomial { a: 2, indices })?;
        let decreasing = rows.windows(2).all(|w| w[1].discrepancy < w[0].discrepancy);
        let unit_norm = rows
            .iter()
            .all(|r| r.norm_one_minus.trim_start_matches('-') == "1");
        let passed = kronecker && (lehmer - 0.162358).abs() <= 1e-6 && decreasing && unit_norm;
        let disc: Vec<String> = rows
            .iter()
            .map(|r| format!("{}:{:.4}", r.n, r.discrepancy))
            .collect();
        Ok((
            passed,
            format!(
                "Φ_1..Φ_30 kronecker {kronecker}; m(Lehmer) {lehmer:.9}; x^n-2 discrepancy {} decreasing {decreasing}; |N(1-α)| = 1 {unit_norm}",
                disc.join(" ")
            ),
        ))
    })
}

pub fn prime_escape(profile: Profile) -> Criterion {
    let ns: &[usize] = if profile == Profile::Full {
        &[4, 8, 16, 32]
    } else {
        &[4, 8, 16]
    };
    timed("9", "prime escape", || {
        let mut counts = Vec::new();
        for &n in ns {
            let c = NumberField::pure(n, 2)?.prime_count(10.0)?;
            if !c.skipped.is_empty() {
                return Ok((false, format!("n={n}: unsplit primes {:?}", c.skipped)));
            }
            counts.push((n, c.count));
        }
        // c_i/n_i ≥ c_j/n_j compared as integers.
        let passed = counts
            .windows(2)
            .all(|w| w[0].1 * w[1].0 as u64 >= w[1].1 * w[0].0 as u64);
        let shown: Vec<String> = counts.iter().map(|(n, c)| format!("{c}/{n}")).collect();
        Ok((passed, format!("π_K(10)/n = {}", shown.join(", "))))
    })
}

pub fn orbital_grid(profile: Profile) -> Criterion {
    timed("10", "archimedean orbital integrals", || {
        let f = RadialBump::of_radius(4.0)?;
        let mut worst: (f64, String) = (0.0, String::new());
        let mut n = 0;
        for (name, g) in orbital_presets() {
            if profile == Profile::Quick && name.starts_with("loxodromic 2") {
                continue;
            }
            let c = compare_orbital(&name, &g, &f, 1e-6)?;
            if !(c.closed.value > 0.0) {
                return Ok((
                    false,
                    format!("{name}: closed value {} not positive", c.closed.value),
                ));
            }
            if !(c.relative_error <= worst.0) {
                worst = (c.relative_error, name);
            }
            n += 1;
        }
        Ok((
            worst.0 < 1e-3,
            format!(
                "{n} presets, worst relative error {:.2e} ({})",
                worst.0, worst.1
            ),
        ))
    })
}

pub fn nerve_torus() -> Criterion {
    timed("11", "nerve on the flat 2-torus", || {
        let space = MetricSampleSpace::preset("torus2", 10_000, 7)?;
        let (a, _) = nerve::run(&space, 7, 2)?;
        let (b, _) = nerve::run(&space, 7, 2)?;
        let same = serde_json::to_string(&a).ok() == serde_json::to_string(&b).ok();
        let passed =
            a.packing_exact && a.cover.coverage == 1.0 && a.degree.max_degree <= 36 && same;
        Ok((
            passed,
            format!(
                "{} centers, packing exact {}, coverage {}, max degree {} (bound 36), deterministic {same}",
                a.centers, a.packing_exact, a.cover.coverage, a.degree.max_degree
            ),
        ))
    })
}

fn random_real(rng: &mut ChaCha8Rng, scale: f64) -> MobiusElement<f64> {
    loop {
        let mut v = [0.0; 4];
        for x in &mut v {
            *x = rng.gen_range(-scale..scale);
        }
        v[0] += 1.0;
        v[3] += 1.0;
        if (v[0] * v[3] - v[1] * v[2]).abs() > 0.1 {
            return MobiusElement::real(v[0], v[1], v[2], v[3]).unwrap();
        }
    }
}

fn random_complex(rng: &mut ChaCha8Rng, scale: f64) -> MobiusElement<f64> {
    loop {
        let mut z = [Complex::new(0.0, 0.0); 4];
        for w in &mut z {
            *w = Complex::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale));
        }
        z[0] += 1.0;
        z[3] += 1.0;
        if (z[0] * z[3] - z[1] * z[2]).norm() > 0.1 {
            return MobiusElement::complex(z[0], z[1], z[2], z[3]).unwrap();
        }
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

fn samples(profile: Profile) -> usize {
    if profile == Profile::Full {
        1000
    } else {
        200
    }
}

pub fn metric_axioms(profile: Profile, seed: u64) -> Criterion {
    let n = samples(profile);
    timed(
        "12a",
        "distance: zero diagonal, symmetry, left invariance",
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut bad = 0;
            for i in 0..n {
                let (x, y, h) = if i % 2 == 0 {
                    (
                        random_real(&mut rng, 0.5),
                        random_real(&mut rng, 0.5),
                        random_real(&mut rng, 0.5),
                    )
                } else {
                    (
                        random_complex(&mut rng, 0.5),
                        random_complex(&mut rng, 0.5),
                        random_complex(&mut rng, 0.5),
                    )
                };
                let d = frobenius_distance(&x, &y);
                let ok = frobenius_distance(&x, &x) < 1e-12
                    && close(d, frobenius_distance(&y, &x), 1e-9)
                    && close(d, frobenius_distance(&h.mul(&x), &h.mul(&y)), 1e-9);
                bad += usize::from(!ok);
            }
            Ok((bad == 0, format!("{n} sampled triples, {bad} violations")))
        },
    )
}

pub fn triangle_inequality(profile: Profile, seed: u64) -> Criterion {
    let n = samples(profile);
    timed("12b", "distance: triangle inequality", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mut bad, mut worst) = (0, 0.0f64);
        for _ in 0..n {
            let (x, y, z) = (
                random_real(&mut rng, 0.5),
                random_real(&mut rng, 0.5),
                random_real(&mut rng, 0.5),
            );
            let gap = frobenius_distance(&x, &z)
                - frobenius_distance(&x, &y)
                - frobenius_distance(&y, &z);
            if gap > 1e-12 {
                bad += 1;
                worst = worst.max(gap);
            }
        }
        Ok((
            bad == 0,
            format!("{n} sampled triples, {bad} violations, worst excess {worst:.3}"),
        ))
    })
}

pub fn conjugation_invariance(profile: Profile, seed: u64) -> Criterion {
    let n = samples(profile);
    timed("12c", "class invariants under conjugation", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mut bad, mut tested) = (0, 0);
        for i in 0..n {
            let (g, h) = if i % 2 == 0 {
                (random_real(&mut rng, 1.0), random_real(&mut rng, 1.0))
            } else {
                (random_complex(&mut rng, 1.0), random_complex(&mut rng, 1.0))
            };
            let a = class_invariants(&g, None)?;
            // Near-parabolic classes are ill-conditioned; skip them.
            let l = Complex::new(a.lambda[0], a.lambda[1]);
            if a.class_type == ClassType::Parabolic
                || (a.class_type != ClassType::Elliptic && (l.norm() - 1.0).abs() < 1e-6)
            {
                continue;
            }
            tested += 1;
            let b = class_invariants(&g.conjugate_by(&h), None)?;
            let lb = Complex::new(b.lambda[0], b.lambda[1]);
            let da = Complex::new(a.weyl_disc[0], a.weyl_disc[1]);
            let db = Complex::new(b.weyl_disc[0], b.weyl_disc[1]);
            let ok = a.class_type == b.class_type
                && (l - lb).norm() <= 1e-8 * (1.0 + l.norm())
                && (da - db).norm() <= 1e-8 * (1.0 + da.norm());
            bad += usize::from(!ok);
        }
        let one = MobiusElement::<f64>::identity(FieldKind::Real);
        let rot = MobiusElement::rotation(0.7);
        let g = random_real(&mut rng, 1.0);
        let k_inv = close(
            frobenius_distance(&one, &g.conjugate_by(&rot)),
            frobenius_distance(&one, &g),
            1e-10,
        );
        Ok((
            bad == 0 && k_inv,
            format!("{tested} sampled pairs, {bad} violations; d(1, kgk⁻¹) = d(1, g): {k_inv}"),
        ))
    })
}

pub fn zeta_monotonicity(profile: Profile) -> Criterion {
    let cutoff = if profile == Profile::Full {
        5000.0
    } else {
        1000.0
    };
    timed("12d", "Dedekind zeta decreasing in s", || {
        let fields = [
            NumberField::quadratic(-4)?,
            NumberField::quadratic(5)?,
            NumberField::pure(3, 2)?,
            NumberField::cyclotomic(8)?,
        ];
        let mut bad = 0;
        for k in &fields {
            let mut prev = f64::INFINITY;
            for i in 0..16 {
                let s = 1.25 + 0.25 * i as f64;
                let z = k.dedekind_zeta::<f64>(s, cutoff)?.value;
                bad += usize::from(!(z < prev && z >= 1.0));
                prev = z;
            }
        }
        Ok((
            bad == 0,
            format!("4 fields, s = 1.25..5 step 0.25, cutoff {cutoff}: {bad} violations"),
        ))
    })
}

pub fn mahler_multiplicativity(profile: Profile, seed: u64) -> Criterion {
    let n = samples(profile) / 4;
    timed("12e", "Mahler measure multiplicative", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let draw = |rng: &mut ChaCha8Rng| {
            let deg = rng.gen_range(1..=5);
            let mut c: Vec<i64> = (0..deg).map(|_| rng.gen_range(-4..=4)).collect();
            c.push(1);
            IntPolynomial::from_i64(&c)
        };
        let (mut bad, mut worst) = (0, 0.0f64);
        for _ in 0..n {
            let (f, g) = (draw(&mut rng), draw(&mut rng));
            let lhs = mahler_measure(&(&f * &g))?;
            let rhs = mahler_measure(&f)? + mahler_measure(&g)?;
            let err = (lhs - rhs).abs() / (1.0 + rhs);
            worst = worst.max(err);
            bad += usize::from(err > 1e-9);
        }
        Ok((
            bad == 0,
            format!("{n} sampled pairs, {bad} violations, worst relative gap {worst:.1e}"),
        ))
    })
}

/// Runs every criterion in order. Sampled checks draw from `seed`.
pub fn run(profile: Profile, seed: u64) -> Vec<Criterion> {
    vec![
        budget(tree_oracle(profile), 30),
        tree_weight(),
        budget(repzeta(profile), 1),
        budget(measure_ratio_real(), 20),
        budget(measure_ratio_complex(), 20),
        nerve_constant(),
        covolume_q(),
        budget(torus_volume(), 5),
        budget(mahler_bilu(profile), 30),
        budget(prime_escape(profile), 10),
        budget(orbital_grid(profile), 120),
        budget(nerve_torus(), 60),
        metric_axioms(profile, seed),
        triangle_inequality(profile, seed),
        conjugation_invariance(profile, seed),
        zeta_monotonicity(profile),
        mahler_multiplicativity(profile, seed),
    ]
}
