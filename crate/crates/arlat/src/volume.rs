//! Measure ratios, covolumes of quaternionic lattices, volumes of tori and
//! the hyperbolic ball volumes behind the nerve degree bound.

use std::f64::consts::PI;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::btree::{tree_weight_limit, tree_weight_partial_sum};
use crate::error::{Error, Result};
use crate::numfield::{
    dirichlet_l_quadratic, is_fundamental_discriminant, is_prime, prime_factors, LValue,
    NumberField, ZetaValue,
};
use crate::quadrature::{integrate_real_line, integrate_to_infinity, Nested, QuadConfig};
use crate::scalar::DoubleDouble;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlaceType {
    RealSplit,
    ComplexSplit,
    Hamilton,
    PadicVertex,
    PadicEdge,
    PadicRamified,
}

#[derive(Clone, Debug, Serialize)]
pub struct MeasureRatioReport {
    pub place_type: PlaceType,
    /// Tamagawa over standard measure, as derived in closed form.
    pub ratio: f64,
    pub ratio_expr: String,
    /// The same ratio recomputed independently.
    pub oracle_value: f64,
    pub discrepancy: f64,
    /// The integral behind an archimedean oracle.
    pub integral: Option<f64>,
}

impl MeasureRatioReport {
    fn new(
        place_type: PlaceType,
        ratio: f64,
        ratio_expr: String,
        oracle_value: f64,
        integral: Option<f64>,
    ) -> Self {
        MeasureRatioReport {
            place_type,
            ratio,
            ratio_expr,
            oracle_value,
            discrepancy: (ratio - oracle_value).abs(),
            integral,
        }
    }
}

fn check_tol(tol: f64) -> Result<QuadConfig> {
    if !(tol > 0.0 && tol <= 1e-7) {
        return Err(Error::Domain(format!(
            "oracle tolerance must lie in (0, 1e-7], got {tol}"
        )));
    }
    Ok(QuadConfig {
        abs_tol: tol * 1e-2,
        rel_tol: tol * 1e-2,
        max_intervals: 4000,
    })
}

/// `∫_R ∫_{R+} (1 + y² + x²)^{−2} dy dx` by nested adaptive quadrature.
pub fn real_ratio_integral(tol: f64) -> Result<f64> {
    let cfg = check_tol(tol)?;
    let nest = Nested::new();
    let outer = integrate_real_line(
        |x| {
            nest.inner(integrate_to_infinity(
                |y| (1.0 + y * y + x * x).powi(-2),
                0.0,
                cfg,
            ))
        },
        cfg,
    );
    Ok(nest.finish(outer)?.value)
}

/// `∫_R ∫_R ∫_{R+} y (1 + y² + x₁² + x₂²)^{−4} dy dx₁ dx₂`.
pub fn complex_ratio_integral(tol: f64) -> Result<f64> {
    let cfg = check_tol(tol)?;
    let nest = Nested::new();
    let outer = integrate_real_line(
        |x1| {
            nest.inner(integrate_real_line(
                |x2| {
                    let a = 1.0 + x1 * x1 + x2 * x2;
                    nest.inner(integrate_to_infinity(
                        |y| y * (a + y * y).powi(-4),
                        0.0,
                        cfg,
                    ))
                },
                cfg,
            ))
        },
        cfg,
    );
    Ok(nest.finish(outer)?.value)
}

/// Real place: the Tamagawa integral is π², so the ratio is π²/I.
pub fn local_ratio_real_oracle(tol: f64) -> Result<MeasureRatioReport> {
    let i = real_ratio_integral(tol)?;
    Ok(MeasureRatioReport::new(
        PlaceType::RealSplit,
        2.0 * PI,
        "2π".into(),
        PI * PI / i,
        Some(i),
    ))
}

/// Complex place: the Tamagawa integral is 4π³/3, so the ratio is
/// (4π³/3)/I. The closed form carried through the covolume formula is 8π²;
/// the integral as set up evaluates to π/12, giving 16π², and the gap is
/// reported in `discrepancy`.
pub fn local_ratio_complex_oracle(tol: f64) -> Result<MeasureRatioReport> {
    let i = complex_ratio_integral(tol)?;
    Ok(MeasureRatioReport::new(
        PlaceType::ComplexSplit,
        8.0 * PI * PI,
        "8π²".into(),
        4.0 * PI.powi(3) / 3.0 / i,
        Some(i),
    ))
}

/// Hamilton quaternions: the compact group has ratio 4π², no integration.
pub fn local_ratio_hamilton() -> MeasureRatioReport {
    MeasureRatioReport::new(
        PlaceType::Hamilton,
        4.0 * PI * PI,
        "4π²".into(),
        4.0 * PI * PI,
        None,
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PadicKind {
    Vertex,
    Edge,
    Ramified,
}

fn rq(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact p-adic ratio for an unramified place (local discriminant factor 1):
/// vertex `1 − q^{−2}`, edge `2(1 − q^{−2})/(q + 1)`, ramified
/// `2(1 − q^{−2})/(q − 1)`.
pub fn local_ratio_padic(q: u64, kind: PadicKind) -> Result<BigRational> {
    if q < 2 {
        return Err(Error::Domain(format!("residue field size {q} < 2")));
    }
    let q = q as i64;
    let base = BigRational::one() - rq(1, q * q);
    Ok(match kind {
        PadicKind::Vertex => base,
        PadicKind::Edge => base * rq(2, q + 1),
        PadicKind::Ramified => base * rq(2, q - 1),
    })
}

/// The Tamagawa integral of `|det g|²/‖g‖⁴`: `(1 − q^{−4})/(1 − q^{−1})`.
fn padic_tamagawa_integral(q: u64) -> BigRational {
    let q = q as i64;
    (BigRational::one() - rq(1, q.pow(4))) / (BigRational::one() - rq(1, q))
}

/// Vertex ratio recomputed as the Tamagawa integral over the tree sum
/// truncated at depth n, with the truncation gap.
pub fn padic_vertex_ratio_from_tree(q: u64, n: u32) -> (f64, f64) {
    let approx = padic_tamagawa_integral(q) / tree_weight_partial_sum(q, n);
    let exact = padic_tamagawa_integral(q) / tree_weight_limit(q);
    let gap = (&approx - &exact).abs().to_f64().unwrap_or(f64::NAN);
    (approx.to_f64().unwrap_or(f64::NAN), gap)
}

/// Ramified ratio recomputed from the split of `PD^×` by norm parity: the
/// Tamagawa integral `1/(q − 1)` equals `Vol · ½(1 + q^{−2}) Σ_n q^{−4n}`.
fn padic_ramified_oracle(q: u64) -> f64 {
    let qf = q as f64;
    let series: f64 = (0..40).map(|n| qf.powi(-4 * n)).sum();
    let per_unit_volume = 0.5 * series * (1.0 + qf.powi(-2));
    (1.0 / (qf - 1.0)) / per_unit_volume
}

pub fn padic_ratio_report(q: u64, kind: PadicKind) -> Result<MeasureRatioReport> {
    let exact = local_ratio_padic(q, kind)?;
    let (tree, _) = padic_vertex_ratio_from_tree(q, 60);
    let (place, oracle) = match kind {
        PadicKind::Vertex => (PlaceType::PadicVertex, tree),
        // Edge stabilizers have index (q + 1)/2 in the vertex stabilizer.
        PadicKind::Edge => (PlaceType::PadicEdge, tree * 2.0 / (q as f64 + 1.0)),
        PadicKind::Ramified => (PlaceType::PadicRamified, padic_ramified_oracle(q)),
    };
    Ok(MeasureRatioReport::new(
        place,
        exact.to_f64().unwrap(),
        format!("{exact}"),
        oracle,
        None,
    ))
}

/// The six-row ratio table.
pub fn all_ratio_reports(q: u64, tol: f64) -> Result<Vec<MeasureRatioReport>> {
    Ok(vec![
        local_ratio_real_oracle(tol)?,
        local_ratio_complex_oracle(tol)?,
        local_ratio_hamilton(),
        padic_ratio_report(q, PadicKind::Vertex)?,
        padic_ratio_report(q, PadicKind::Edge)?,
        padic_ratio_report(q, PadicKind::Ramified)?,
    ])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldSpec {
    Rationals,
    /// Q(√d) for a fundamental discriminant d.
    Quadratic {
        d: i64,
    },
    Cyclotomic {
        m: u64,
    },
    /// A monic polynomial whose monogenic order is declared maximal.
    Polynomial {
        poly: String,
    },
}

impl FieldSpec {
    pub fn build(&self) -> Result<NumberField> {
        match self {
            FieldSpec::Rationals => Ok(NumberField::rationals()),
            FieldSpec::Quadratic { d } => NumberField::quadratic(*d),
            FieldSpec::Cyclotomic { m } => NumberField::cyclotomic(*m),
            FieldSpec::Polynomial { poly } => {
                let f = poly.parse()?;
                NumberField::new(poly, f, crate::numfield::MaximalityOverride::Maximal)
            }
        }
    }
}

/// A finite place given by its rational prime and norm; `index` tells apart
/// several primes above p with the same norm.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Place {
    pub p: u64,
    pub norm: u64,
    #[serde(default)]
    pub index: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArchimedeanType {
    Real,
    Complex,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    pub field: FieldSpec,
    pub archimedean_type: ArchimedeanType,
    #[serde(default)]
    pub ram_f: Vec<Place>,
    /// Finite places where the local maximal compact is an edge stabilizer.
    #[serde(default, rename = "S", alias = "s")]
    pub s: Vec<Place>,
    #[serde(default = "one")]
    pub index_uv: u64,
    #[serde(default = "one")]
    pub cl_v: u64,
    /// Prime cutoff for the Euler product of ζ_k(2).
    #[serde(default)]
    pub zeta_cutoff: Option<u64>,
}

fn one() -> u64 {
    1
}

pub const DEFAULT_ZETA_CUTOFF: u64 = 20_000;

/// A spec that passed validation, with its field built.
#[derive(Clone, Debug)]
pub struct AdmissibleSpec {
    pub spec: LatticeSpec,
    pub field: NumberField,
    /// |Δ_k|.
    pub disc: BigInt,
}

impl LatticeSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("lattice spec: {e}")))
    }

    pub fn rationals(ram_f: &[u64]) -> Self {
        LatticeSpec {
            field: FieldSpec::Rationals,
            archimedean_type: ArchimedeanType::Real,
            ram_f: ram_f
                .iter()
                .map(|&p| Place {
                    p,
                    norm: p,
                    index: 0,
                })
                .collect(),
            s: Vec::new(),
            index_uv: 1,
            cl_v: 1,
            zeta_cutoff: None,
        }
    }

    pub fn validate(&self) -> Result<AdmissibleSpec> {
        let field = self.field.build()?;
        let (r1, r2) = field.signature;
        let inadmissible = |m: String| Err(Error::Inadmissible(m));
        match self.archimedean_type {
            ArchimedeanType::Real if r2 != 0 => {
                return inadmissible(format!(
                    "archimedean type real needs a totally real field, r2 = {r2}"
                ))
            }
            ArchimedeanType::Complex if r2 != 1 => {
                return inadmissible(format!(
                    "archimedean type complex needs exactly one complex place, r2 = {r2}"
                ))
            }
            _ => {}
        }
        let ram_inf = match self.archimedean_type {
            ArchimedeanType::Real => r1 - 1,
            ArchimedeanType::Complex => r1,
        };
        if (self.ram_f.len() + ram_inf) % 2 != 0 {
            return inadmissible(format!(
                "|Ram D| = |ram_f| + |Ram^∞| = {} + {ram_inf} must be even",
                self.ram_f.len()
            ));
        }
        if self.index_uv == 0 || self.cl_v == 0 {
            return inadmissible("index_uv and cl_v must be positive".into());
        }
        for p in prime_factors(
            field
                .poly_discriminant
                .abs()
                .to_u64()
                .ok_or_else(|| Error::Unsupported("discriminant exceeds u64".into()))?,
        ) {
            if !field.splitting_allowed(p) {
                return inadmissible(format!(
                    "field discriminant unknown: the monogenic order is not declared maximal at {p}"
                ));
            }
        }
        let mut seen = Vec::new();
        for (label, places) in [("ram_f", &self.ram_f), ("S", &self.s)] {
            for pl in places {
                if !is_prime(pl.p) {
                    return inadmissible(format!("{label}: {} is not prime", pl.p));
                }
                let sp = field.prime_splitting(pl.p)?;
                let available = sp
                    .norms
                    .iter()
                    .filter(|n| **n == BigInt::from(pl.norm))
                    .count();
                if pl.index >= available {
                    return inadmissible(format!(
                        "{label}: no prime of norm {} (index {}) above {}",
                        pl.norm, pl.index, pl.p
                    ));
                }
                if label == "ram_f" && seen.contains(pl) {
                    return inadmissible(format!("ram_f lists the place above {} twice", pl.p));
                }
                if label == "S" && self.s.iter().filter(|x| *x == pl).count() > 1 {
                    return inadmissible(format!("S lists the place above {} twice", pl.p));
                }
                if label == "ram_f" {
                    seen.push(*pl);
                }
            }
        }
        let disc = field.poly_discriminant.abs();
        Ok(AdmissibleSpec {
            spec: self.clone(),
            field,
            disc,
        })
    }
}

/// `c · π^e` with rational c.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiMultiple {
    pub coeff: BigRational,
    pub pi_power: i32,
}

impl PiMultiple {
    pub fn to_f64(&self) -> f64 {
        self.coeff.to_f64().unwrap_or(f64::NAN) * PI.powi(self.pi_power)
    }
}

impl fmt::Display for PiMultiple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pi = match self.pi_power {
            0 => String::new(),
            1 => "π".into(),
            e => format!("π^{e}"),
        };
        let (n, d) = (self.coeff.numer(), self.coeff.denom());
        match (n.is_one(), d.is_one(), pi.is_empty()) {
            (_, _, true) => write!(f, "{}", self.coeff),
            (true, true, false) => write!(f, "{pi}"),
            (true, false, false) => write!(f, "{pi}/{d}"),
            (false, true, false) => write!(f, "{n}{pi}"),
            (false, false, false) => write!(f, "{n}{pi}/{d}"),
        }
    }
}

impl Serialize for PiMultiple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CovolumeReport {
    /// The true covolume lies in `[value, value + error_bar]`.
    pub value: f64,
    pub error_bar: f64,
    pub symbolic: Option<PiMultiple>,
    pub zeta_k_2: ZetaValue,
    pub disc: String,
    pub degree: usize,
    pub archimedean_type: ArchimedeanType,
    /// Complex case only: the value if the complex ratio is the one the
    /// quadrature oracle measures (16π² instead of 8π²), i.e. half.
    pub value_with_oracle_complex_ratio: Option<f64>,
}

/// `Π_{Ram_f}(N − 1) · Π_{S ∖ Ram_f}(N + 1)` and `|S|`.
fn local_products(spec: &LatticeSpec) -> (BigInt, usize) {
    let mut prod = BigInt::one();
    for pl in &spec.ram_f {
        prod *= BigInt::from(pl.norm) - 1;
    }
    for pl in &spec.s {
        if !spec.ram_f.contains(pl) {
            prod *= BigInt::from(pl.norm) + 1;
        }
    }
    (prod, spec.s.len())
}

/// Covolume of `Γ_V` acting on H² (real) or H³ (complex):
/// `([U:V]/|cl V|) |Δ|^{3/2} ζ_k(2) Π(N−1) Π(N+1) / (π (4π²)^{n−1} 2^{|S|})`,
/// with denominator `4π² (4π²)^{n−2} 2^{|S|}` in the complex case.
pub fn covolume(spec: &LatticeSpec) -> Result<CovolumeReport> {
    let adm = spec.validate()?;
    let n = adm.field.degree;
    let (prod, s_len) = local_products(spec);
    let rational_part =
        BigRational::new(BigInt::from(spec.index_uv) * &prod, BigInt::from(spec.cl_v))
            / BigRational::from_integer(num_traits::pow(BigInt::from(2), s_len));
    let disc_f = adm.disc.to_f64().unwrap();
    let disc32 = disc_f.powf(1.5);
    let denom = match spec.archimedean_type {
        ArchimedeanType::Real => PI * (4.0 * PI * PI).powi(n as i32 - 1),
        ArchimedeanType::Complex => 4.0 * PI * PI * (4.0 * PI * PI).powi(n as i32 - 2),
    };
    let (zeta, symbolic) = if n == 1 {
        let z = PI * PI / 6.0;
        // ζ(2) = π²/6, |Δ| = 1, real denominator π.
        let sym = PiMultiple {
            coeff: rational_part.clone() / BigRational::from_integer(BigInt::from(6)),
            pi_power: 1,
        };
        (
            ZetaValue {
                value: z,
                tail_bound: 0.0,
                tail_log: 0.0,
            },
            Some(sym),
        )
    } else {
        let cutoff = spec.zeta_cutoff.unwrap_or(DEFAULT_ZETA_CUTOFF) as f64;
        (adm.field.dedekind_zeta::<DoubleDouble>(2.0, cutoff)?, None)
    };
    let scale = rational_part.to_f64().unwrap() * disc32 / denom;
    let value = match &symbolic {
        Some(s) => s.to_f64(),
        None => scale * zeta.value,
    };
    let complex = spec.archimedean_type == ArchimedeanType::Complex;
    Ok(CovolumeReport {
        value,
        error_bar: scale * zeta.tail_bound,
        symbolic,
        zeta_k_2: zeta,
        disc: adm.disc.to_string(),
        degree: n,
        archimedean_type: spec.archimedean_type,
        value_with_oracle_complex_ratio: complex.then_some(value / 2.0),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateReport {
    pub covolume: f64,
    /// `|Δ_k|^{0.044} Π_{Ram_f}(N − 1)/2 Π_{S∖Ram_f}(N + 1)/2`, constant 1.
    pub rhs: f64,
    /// `exp(0.46 r1 + 0.1 r2)`, constant 1.
    pub zimmert_floor: f64,
    pub regulator_floor: f64,
    pub covolume_over_rhs: f64,
    pub regulator_over_zimmert: f64,
    /// A ratio below 10⁻³: worth a look, not a contradiction.
    pub suspicious: bool,
}

/// Evaluates both sides of the volume lower bound and the regulator floor.
/// Nothing is asserted: every inequality involved hides a constant.
pub fn volume_lower_bound_certificate(
    spec: &LatticeSpec,
    regulator_floor: f64,
) -> Result<CertificateReport> {
    let adm = spec.validate()?;
    let cov = covolume(spec)?;
    let mut rhs = adm.disc.to_f64().unwrap().powf(0.044);
    for pl in &spec.ram_f {
        rhs *= (pl.norm as f64 - 1.0) / 2.0;
    }
    for pl in &spec.s {
        if !spec.ram_f.contains(pl) {
            rhs *= (pl.norm as f64 + 1.0) / 2.0;
        }
    }
    let (r1, r2) = adm.field.signature;
    let zimmert = (0.46 * r1 as f64 + 0.1 * r2 as f64).exp();
    let a = cov.value / rhs;
    let b = regulator_floor / zimmert;
    Ok(CertificateReport {
        covolume: cov.value,
        rhs,
        zimmert_floor: zimmert,
        regulator_floor,
        covolume_over_rhs: a,
        regulator_over_zimmert: b,
        suspicious: a < 1e-3 || b < 1e-3,
    })
}

/// Reduced positive definite forms of discriminant d < 0.
pub fn class_number_imaginary(d: i64) -> u64 {
    assert!(d < 0);
    let n = d.unsigned_abs() as i64;
    let mut h = 0;
    let mut a = 1i64;
    while 3 * a * a <= n {
        for b in -a + 1..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (b < 0 && a == c) {
                continue;
            }
            if a.gcd(&b).gcd(&c) == 1 {
                h += 1;
            }
        }
        a += 1;
    }
    h
}

/// Smallest `(x, y)` with `x, y > 0` and `x² − d y² = ±4`, and the sign.
pub fn fundamental_unit(d: i64) -> Result<(u128, u128, i32)> {
    if d <= 0 {
        return Err(Error::Domain("fundamental unit needs d > 0".into()));
    }
    let d = d as u128;
    for y in 1u128..50_000_000 {
        let t = d * y * y;
        for (x2, sign) in [(t.checked_sub(4), -1), (Some(t + 4), 1)] {
            if let Some(x2) = x2 {
                let x = x2.isqrt();
                if x > 0 && x * x == x2 {
                    return Ok((x, y, sign));
                }
            }
        }
    }
    Err(Error::Unsupported(format!(
        "fundamental unit of discriminant {d} beyond search range"
    )))
}

/// Narrow class number of a real quadratic discriminant: the number of
/// cycles of reduced indefinite forms.
pub fn narrow_class_number_real(d: i64) -> u64 {
    assert!(d > 0);
    let sd = (d as f64).sqrt();
    let reduced =
        |a: i64, b: i64| b > 0 && (b as f64) < sd && (sd - 2.0 * a.abs() as f64).abs() < b as f64;
    let mut forms = Vec::new();
    for b in 1..=(sd as i64) {
        if (b * b - d) % 4 != 0 {
            continue;
        }
        let ac = (b * b - d) / 4;
        for a in 1..=ac.abs() {
            if ac % a != 0 {
                continue;
            }
            for sa in [a, -a] {
                let c = ac / sa;
                if reduced(sa, b) && sa.gcd(&b).gcd(&c) == 1 {
                    forms.push((sa, b, c));
                }
            }
        }
    }
    // One reduction step: (a, b, c) ↦ (c, b', ·) with b' ≡ −b mod 2c and
    // √d − 2|c| < b' < √d.
    let step = |(_, b, c): (i64, i64, i64)| -> (i64, i64, i64) {
        let m = 2 * c.abs();
        let hi = sd.floor() as i64;
        let mut bp = hi - (hi + b).rem_euclid(m);
        if (bp as f64) >= sd {
            bp -= m;
        }
        (c, bp, (bp * bp - d) / (4 * c))
    };
    let mut seen = vec![false; forms.len()];
    let mut cycles = 0;
    for i in 0..forms.len() {
        if seen[i] {
            continue;
        }
        cycles += 1;
        let mut f = forms[i];
        loop {
            let j = forms
                .iter()
                .position(|g| *g == f)
                .expect("reduction keeps forms reduced");
            if seen[j] {
                break;
            }
            seen[j] = true;
            f = step(f);
        }
    }
    cycles
}

#[derive(Clone, Debug, Serialize)]
pub struct TorusVolumeReport {
    pub d: i64,
    pub a: u32,
    pub e: u64,
    pub l_value: LValue,
    /// `2Λ(1, χ)/(2^a e)` from the truncated L-series.
    pub lambda_route: f64,
    pub lambda_error: f64,
    /// The same volume from the residue ρ_l via class number and regulator.
    pub rho_route: f64,
    pub class_number: u64,
    pub units: u64,
    pub regulator: f64,
    pub difference: f64,
    pub consistent: bool,
}

/// Number of L-series terms used by [`torus_volume_quadratic`].
pub const TORUS_L_TERMS: u64 = 2_000_000;

/// Volume of `T(Q)\T(A)` for the norm-one-modulo-center torus of Q(√d).
pub fn torus_volume_quadratic(d: i64) -> Result<TorusVolumeReport> {
    if !is_fundamental_discriminant(d) {
        return Err(Error::Domain(format!(
            "{d} is not a fundamental discriminant"
        )));
    }
    let field = NumberField::quadratic(d)?;
    let mut e = 1u64;
    for p in prime_factors(d.unsigned_abs()) {
        let sp = field.prime_splitting(p)?;
        e *= sp
            .factors
            .iter()
            .map(|&(_, ram)| ram as u64)
            .product::<u64>();
    }
    let (r1l, r2l) = field.signature;
    // a = r1(l) − r1(k) + r2(l) − r2(k) with k = Q.
    let a = (r1l as i64 - 1 + r2l as i64) as u32;
    let l = dirichlet_l_quadratic(d, TORUS_L_TERMS)?;
    let sqrt_d = (d.unsigned_abs() as f64).sqrt();
    let twopi_r2 = (2.0 * PI).powi(r2l as i32);
    let denom = 2f64.powi(a as i32) * e as f64;
    let lambda_route = 2.0 * sqrt_d * l.value / twopi_r2 / denom;
    let lambda_error = 2.0 * sqrt_d * l.error_bound / twopi_r2 / denom;
    let (h, w, reg) = if d < 0 {
        let w = match d {
            -3 => 6,
            -4 => 4,
            _ => 2,
        };
        (class_number_imaginary(d), w, 1.0)
    } else {
        let (x, y, sign) = fundamental_unit(d)?;
        let eps = (x as f64 + y as f64 * sqrt_d) / 2.0;
        let hp = narrow_class_number_real(d);
        let h = if sign == -1 { hp } else { hp / 2 };
        (h, 2, eps.ln())
    };
    // ρ_l = 2^{r1} (2π)^{r2} h R / (w √|d|), ρ_Q = 1.
    let rho = 2f64.powi(r1l as i32) * twopi_r2 * h as f64 * reg / (w as f64 * sqrt_d);
    let rho_route = 2.0 * sqrt_d * rho / twopi_r2 / denom;
    let difference = (lambda_route - rho_route).abs();
    Ok(TorusVolumeReport {
        d,
        a,
        e,
        l_value: l,
        lambda_route,
        lambda_error,
        rho_route,
        class_number: h,
        units: w,
        regulator: reg,
        difference,
        consistent: difference <= lambda_error + 1e-12,
    })
}

/// `π(sinh 2R − 2R)`, the volume of a radius-R ball in H³.
pub fn hyperbolic_ball_volume(r: f64) -> Result<f64> {
    if r.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::Domain(format!(
            "ball radius must be positive, got {r}"
        )));
    }
    // Series for small R avoids cancellation: sinh x − x = x³/6 + x⁵/120 + ...
    let x = 2.0 * r;
    let v = if x < 1e-2 {
        x.powi(3) / 6.0 + x.powi(5) / 120.0 + x.powi(7) / 5040.0
    } else {
        x.sinh() - x
    };
    Ok(PI * v)
}

/// `V(4/5)/V(2/15)` in H³.
pub fn nerve_degree_constant() -> f64 {
    hyperbolic_ball_volume(0.8).unwrap() / hyperbolic_ball_volume(2.0 / 15.0).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_oracle() {
        let r = local_ratio_real_oracle(1e-8).unwrap();
        assert!((r.integral.unwrap() - PI / 2.0).abs() < 1e-6);
        assert!(r.discrepancy < 1e-5);
        assert!(local_ratio_real_oracle(1.0).is_err());
    }

    #[test]
    fn padic_ratios() {
        assert_eq!(local_ratio_padic(2, PadicKind::Vertex).unwrap(), rq(3, 4));
        assert_eq!(local_ratio_padic(3, PadicKind::Edge).unwrap(), rq(4, 9));
        for q in [2u64, 3, 5] {
            for n in [5u32, 10, 20] {
                let (_, gap) = padic_vertex_ratio_from_tree(q, n);
                assert!(gap < 2.0 * (q as f64).powi(-(n as i32)));
            }
            for k in [PadicKind::Vertex, PadicKind::Edge, PadicKind::Ramified] {
                assert!(padic_ratio_report(q, k).unwrap().discrepancy < 1e-12);
            }
        }
    }

    #[test]
    fn covolume_of_the_discriminant_six_order() {
        let spec = LatticeSpec::rationals(&[2, 3]);
        let c = covolume(&spec).unwrap();
        assert_eq!(c.symbolic.as_ref().unwrap().to_string(), "π/3");
        assert!((c.value - PI / 3.0).abs() < 1e-12);
        let mut s12 = spec.clone();
        s12.index_uv = 12;
        assert_eq!(covolume(&s12).unwrap().symbolic.unwrap().to_string(), "4π");
    }

    #[test]
    fn inadmissible_specs_name_the_invariant() {
        let odd = LatticeSpec::rationals(&[2]);
        match covolume(&odd) {
            Err(Error::Inadmissible(m)) => assert!(m.contains("even")),
            other => panic!("{other:?}"),
        }
        let mut complex = LatticeSpec::rationals(&[2, 3]);
        complex.archimedean_type = ArchimedeanType::Complex;
        assert!(matches!(covolume(&complex), Err(Error::Inadmissible(_))));
    }

    #[test]
    fn quadratic_covolume_has_error_bar() {
        let spec = LatticeSpec {
            field: FieldSpec::Quadratic { d: 8 },
            archimedean_type: ArchimedeanType::Real,
            ram_f: vec![],
            s: vec![],
            index_uv: 1,
            cl_v: 1,
            zeta_cutoff: Some(5000),
        };
        // Q(√2) has two real places, so |Ram^∞| = 1 and ram_f must be odd.
        assert!(covolume(&spec).is_err());
        let spec = LatticeSpec {
            ram_f: vec![Place {
                p: 2,
                norm: 2,
                index: 0,
            }],
            ..spec
        };
        let c = covolume(&spec).unwrap();
        assert!(c.value > 0.0 && c.error_bar > 0.0 && c.error_bar < 1e-2 * c.value);
    }

    #[test]
    fn class_numbers() {
        for (d, h) in [(-3, 1), (-4, 1), (-20, 2), (-23, 3), (-47, 5), (-84, 4)] {
            assert_eq!(class_number_imaginary(d), h, "d = {d}");
        }
        assert_eq!(fundamental_unit(5).unwrap(), (1, 1, -1));
        assert_eq!(fundamental_unit(12).unwrap(), (4, 1, 1));
        // h⁺ for Q(√3) is 2, for Q(√2) and Q(√5) it is 1; Q(√10) has h = 2.
        for (d, hp) in [(5, 1), (8, 1), (12, 2), (13, 1), (40, 2), (60, 4), (229, 3)] {
            assert_eq!(narrow_class_number_real(d), hp, "d = {d}");
        }
    }

    #[test]
    fn torus_volumes() {
        let t = torus_volume_quadratic(-4).unwrap();
        assert!((t.l_value.value - PI / 4.0).abs() < 1e-3);
        assert!((t.lambda_route - 0.25).abs() < 1e-3 && (t.rho_route - 0.25).abs() < 1e-12);
        for d in [-4, -3, 5, -8, 8] {
            let t = torus_volume_quadratic(d).unwrap();
            assert!(t.consistent && t.difference < 1e-3, "{t:?}");
        }
        assert!(torus_volume_quadratic(9).is_err());
    }

    #[test]
    fn ball_volumes() {
        assert!((hyperbolic_ball_volume(0.8).unwrap() - 2.4365).abs() < 1e-4);
        assert!(
            (nerve_degree_constant() - 244.52).abs() < 0.01,
            "{}",
            nerve_degree_constant()
        );
        let r = 1e-3;
        let euclid = 4.0 / 3.0 * PI * r * r * r;
        assert!((hyperbolic_ball_volume(r).unwrap() / euclid - 1.0).abs() < 0.01);
        assert!(hyperbolic_ball_volume(0.0).is_err());
    }
}
