//! The adjoint (Frobenius) metric on PGL(2, R) and PGL(2, C), conjugacy
//! class invariants, and archimedean orbital integrals.
//!
//! `Ad(g)` acts on trace-zero matrices in the orthonormal basis
//! `{E12, E21, H/√2}`, so `Ad(k)` is unitary for k in the maximal compact
//! and `d(x, y) = ‖1 − Ad(y^{−1}x)‖_F` is left-invariant and
//! K-conjugation-invariant.
//!
//! Orbital integrals use these normalizations: the standard measure on G is
//! hyperbolic volume on G/K times the probability measure on K; a split
//! centralizer carries `dt/t` on its identity component (times the
//! probability measure on the circle over C); the compact centralizer of an
//! elliptic element has mass 1.

use std::f64::consts::PI;

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mahler::mahler_measure;
use crate::poly::IntPolynomial;
use crate::quadrature::{integrate, integrate_real_line, Nested, QuadConfig};
use crate::roots::roots_f64;
use crate::scalar::RealScalar;

/// Relative tolerance for classifying eigenvalue ratios.
pub const CLASS_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    Real,
    Complex,
}

type C<S> = Complex<S>;

fn c<S: RealScalar>(re: S) -> C<S> {
    Complex::new(re, S::zero())
}

fn cabs<S: RealScalar>(z: C<S>) -> S {
    z.re.hypot(z.im)
}

fn csqrt<S: RealScalar>(z: C<S>) -> C<S> {
    let r = cabs(z);
    if r.is_zero() {
        return z;
    }
    let two = S::from_f64(2.0);
    let re = ((r + z.re) / two).sqrt();
    let im = ((r - z.re) / two).sqrt();
    Complex::new(re, if z.im < S::zero() { -im } else { im })
}

/// A 2×2 invertible matrix taken up to scalars, stored as the
/// representative with |det| = 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MobiusElement<S: RealScalar> {
    pub m: [[C<S>; 2]; 2],
    pub field: FieldKind,
}

impl<S: RealScalar> MobiusElement<S> {
    pub fn new(m: [[C<S>; 2]; 2], field: FieldKind) -> Result<Self> {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let ad = cabs(det);
        if !(ad > S::zero()) {
            return Err(Error::Domain("matrix is singular".into()));
        }
        if field == FieldKind::Real && m.iter().flatten().any(|z| !z.im.is_zero()) {
            return Err(Error::Domain("real element with complex entries".into()));
        }
        let s = c(S::one() / ad.sqrt());
        Ok(MobiusElement {
            m: [[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]],
            field,
        })
    }

    pub fn real(a: S, b: S, cc: S, d: S) -> Result<Self> {
        MobiusElement::new([[c(a), c(b)], [c(cc), c(d)]], FieldKind::Real)
    }

    pub fn complex(a: C<S>, b: C<S>, cc: C<S>, d: C<S>) -> Result<Self> {
        MobiusElement::new([[a, b], [cc, d]], FieldKind::Complex)
    }

    pub fn identity(field: FieldKind) -> Self {
        MobiusElement::new(
            [[c(S::one()), c(S::zero())], [c(S::zero()), c(S::one())]],
            field,
        )
        .unwrap()
    }

    /// `diag(t, 1)`.
    pub fn diag(t: C<S>, field: FieldKind) -> Result<Self> {
        MobiusElement::new([[t, c(S::zero())], [c(S::zero()), c(S::one())]], field)
    }

    /// Rotation by θ, `[[cos θ, −sin θ], [sin θ, cos θ]]`.
    pub fn rotation(theta: S) -> Self {
        let (s, co) = (theta.sin(), theta.cos());
        MobiusElement::real(co, -s, s, co).unwrap()
    }

    pub fn det(&self) -> C<S> {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn trace(&self) -> C<S> {
        self.m[0][0] + self.m[1][1]
    }

    fn join(self, o: FieldKind) -> FieldKind {
        if self.field == FieldKind::Complex || o == FieldKind::Complex {
            FieldKind::Complex
        } else {
            FieldKind::Real
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let a = &self.m;
        let b = &o.m;
        let m = [
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ];
        MobiusElement {
            m,
            field: self.join(o.field),
        }
    }

    pub fn inverse(&self) -> Self {
        let d = self.det();
        let m = [
            [self.m[1][1] / d, -self.m[0][1] / d],
            [-self.m[1][0] / d, self.m[0][0] / d],
        ];
        MobiusElement {
            m,
            field: self.field,
        }
    }

    pub fn conjugate_by(&self, h: &Self) -> Self {
        h.mul(self).mul(&h.inverse())
    }

    /// `Ad(g)` on `(y12, y21, √2 y11)` coordinates of a trace-zero Y.
    pub fn adjoint(&self) -> [[C<S>; 3]; 3] {
        let g = &self.m;
        let gi = self.inverse().m;
        let r2 = c(S::from_f64(2.0).sqrt());
        let conj = |y: [[C<S>; 2]; 2]| -> [C<S>; 3] {
            let t = [
                [
                    g[0][0] * y[0][0] + g[0][1] * y[1][0],
                    g[0][0] * y[0][1] + g[0][1] * y[1][1],
                ],
                [
                    g[1][0] * y[0][0] + g[1][1] * y[1][0],
                    g[1][0] * y[0][1] + g[1][1] * y[1][1],
                ],
            ];
            let z00 = t[0][0] * gi[0][0] + t[0][1] * gi[1][0];
            let z01 = t[0][0] * gi[0][1] + t[0][1] * gi[1][1];
            let z10 = t[1][0] * gi[0][0] + t[1][1] * gi[1][0];
            [z01, z10, r2 * z00]
        };
        let (o, z) = (c(S::one()), c(S::zero()));
        let h = c(S::one() / S::from_f64(2.0).sqrt());
        let cols = [
            conj([[z, o], [z, z]]),
            conj([[z, z], [o, z]]),
            conj([[h, z], [z, -h]]),
        ];
        let mut out = [[z; 3]; 3];
        for (j, col) in cols.iter().enumerate() {
            for i in 0..3 {
                out[i][j] = col[i];
            }
        }
        out
    }

    /// `‖1 − Ad(g)‖_F`.
    pub fn distance_to_identity(&self) -> S {
        let ad = self.adjoint();
        let mut s = S::zero();
        for (i, row) in ad.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                let e = if i == j { c(S::one()) - v } else { -v };
                s += e.re * e.re + e.im * e.im;
            }
        }
        s.sqrt()
    }

    /// Eigenvalues `(μ1, μ2)` of the |det| = 1 representative.
    pub fn eigenvalues(&self) -> (C<S>, C<S>) {
        let t = self.trace();
        let two = c(S::from_f64(2.0));
        let sq = csqrt(t * t - c(S::from_f64(4.0)) * self.det());
        ((t + sq) / two, (t - sq) / two)
    }
}

/// `d(x, y) = ‖1 − Ad(y^{−1}x)‖_F`.
pub fn frobenius_distance<S: RealScalar>(x: &MobiusElement<S>, y: &MobiusElement<S>) -> S {
    y.inverse().mul(x).distance_to_identity()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassType {
    Identity,
    Parabolic,
    Hyperbolic,
    Elliptic,
    Loxodromic,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConjClassInvariants {
    /// Eigenvalue ratio, normalized to |λ| ≥ 1 and, on the unit circle, to
    /// arg λ ∈ [0, π].
    pub lambda: [f64; 2],
    /// `(1 − λ)(1 − λ^{−1})`, computed as `−(t² − 4 det)/det`.
    pub weyl_disc: [f64; 2],
    pub class_type: ClassType,
    /// Mahler measure of the supplied minimal polynomial.
    pub mahler: Option<f64>,
    /// Whether the supplied polynomial vanishes at λ or at an eigenvalue of
    /// the lift, and `log⁺|root| ≤ mahler` there.
    pub mahler_consistent: Option<bool>,
}

fn canonical_lambda(l: Complex<f64>) -> Complex<f64> {
    let mut l = l;
    if l.norm() < 1.0 - CLASS_TOL {
        l = l.inv();
    }
    if (l.norm() - 1.0).abs() <= CLASS_TOL && l.im < 0.0 {
        l = l.conj();
    }
    l
}

pub fn class_invariants<S: RealScalar>(
    g: &MobiusElement<S>,
    min_poly: Option<&IntPolynomial>,
) -> Result<ConjClassInvariants> {
    let to64 = |z: C<S>| Complex::new(z.re.to_f64(), z.im.to_f64());
    let t = to64(g.trace());
    let d = to64(g.det());
    let disc = t * t - 4.0 * d;
    let delta = -disc / d;
    let off = to64(g.m[0][1]).norm() + to64(g.m[1][0]).norm();
    let scale = t.norm_sqr() + d.norm();
    let (class_type, lambda) = if disc.norm() <= 1e-10 * scale {
        let scalar = off <= 1e-12 && (to64(g.m[0][0]) - to64(g.m[1][1])).norm() <= 1e-12;
        (
            if scalar {
                ClassType::Identity
            } else {
                ClassType::Parabolic
            },
            Complex::new(1.0, 0.0),
        )
    } else {
        let (m1, m2) = g.eigenvalues();
        let l = canonical_lambda(to64(m1) / to64(m2));
        let on_circle = (l.norm() - 1.0).abs() <= CLASS_TOL;
        let ty = match (g.field, on_circle) {
            (_, true) => ClassType::Elliptic,
            (FieldKind::Real, false) => ClassType::Hyperbolic,
            (FieldKind::Complex, false) if l.im.abs() <= CLASS_TOL * l.norm() && l.re > 0.0 => {
                ClassType::Hyperbolic
            }
            (FieldKind::Complex, false) => ClassType::Loxodromic,
        };
        (ty, l)
    };
    let (mahler, mahler_consistent) = match min_poly {
        None => (None, None),
        Some(f) => {
            let m = mahler_measure(f)?;
            let (m1, m2) = g.eigenvalues();
            let cands = [lambda, to64(m1), to64(m2)];
            let roots = roots_f64(f)?;
            let hit = cands.iter().find(|z| {
                roots
                    .iter()
                    .any(|r| (*r - **z).norm() <= 1e-8 * z.norm().max(1.0))
            });
            let ok = hit
                .map(|z| z.norm().ln().max(0.0) <= m + 1e-9)
                .unwrap_or(false);
            (Some(m), Some(ok))
        }
    };
    Ok(ConjClassInvariants {
        lambda: [lambda.re, lambda.im],
        weyl_disc: [delta.re, delta.im],
        class_type,
        mahler,
        mahler_consistent,
    })
}

/// `√(|1 − λ|² + |1 − λ^{−1}|²)`: the distance from 1 to the diagonal (or
/// rotation) normal form of the class. By Schur's inequality
/// `‖1 − A‖_F² ≥ Σ|1 − eig|²` with equality for normal A, so this is the
/// infimum of `d(1, ·)` over the conjugacy class.
pub fn class_min_distance<S: RealScalar>(g: &MobiusElement<S>) -> Result<f64> {
    let inv = class_invariants(g, None)?;
    match inv.class_type {
        ClassType::Parabolic => Err(Error::Domain(
            "parabolic elements are not semisimple".into(),
        )),
        ClassType::Identity => Ok(0.0),
        _ => {
            let l = Complex::new(inv.lambda[0], inv.lambda[1]);
            let one = Complex::new(1.0, 0.0);
            Ok(((one - l).norm_sqr() + (one - l.inv()).norm_sqr()).sqrt())
        }
    }
}

/// Whether the conjugacy class of g meets the ball `B(1, R)`.
pub fn meets_ball<S: RealScalar>(g: &MobiusElement<S>, r: f64) -> Result<bool> {
    Ok(class_min_distance(g)? <= r)
}

/// Smooth radial test function `f(g) = φ(d(1, g))`: 1 up to `plateau`,
/// 0 from `radius` on, C^∞ in between.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RadialBump {
    pub radius: f64,
    pub plateau: f64,
}

impl RadialBump {
    pub fn new(radius: f64, plateau: f64) -> Result<Self> {
        if !(radius > 0.0 && plateau >= 0.0 && plateau < radius) {
            return Err(Error::Domain(format!(
                "bump needs 0 <= plateau < radius, got {plateau}, {radius}"
            )));
        }
        Ok(RadialBump { radius, plateau })
    }

    /// Bump with plateau at a quarter of the radius.
    pub fn of_radius(radius: f64) -> Result<Self> {
        RadialBump::new(radius, radius / 4.0)
    }

    pub fn profile(&self, r: f64) -> f64 {
        if r <= self.plateau {
            return 1.0;
        }
        // Also catches NaN from overflow far outside the support.
        if !(r < self.radius) {
            return 0.0;
        }
        let s = (r - self.plateau) / (self.radius - self.plateau);
        let psi = |x: f64| if x <= 0.0 { 0.0 } else { (-1.0 / x).exp() };
        psi(1.0 - s) / (psi(1.0 - s) + psi(s))
    }

    pub fn eval(&self, g: &MobiusElement<f64>) -> f64 {
        self.profile(g.distance_to_identity())
    }

    pub fn sup_norm(&self) -> f64 {
        1.0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitalReport {
    pub method: &'static str,
    pub value: f64,
    /// `|O| / (shape · ‖f‖_∞)` where shape is `|Δ|^{−1/2}` (split) or
    /// `|sin θ|^{−2}` (elliptic); empty for brute force.
    pub measured_constant: Option<f64>,
    pub bound_shape: Option<f64>,
    /// Elliptic only: the same integral with weight `((t + t^{−1})/2)²`.
    pub cosh_squared_weight_value: Option<f64>,
}

fn n_of(u: Complex<f64>, field: FieldKind) -> MobiusElement<f64> {
    let (o, z) = (Complex::new(1.0, 0.0), Complex::new(0.0, 0.0));
    MobiusElement {
        m: [[o, u], [z, o]],
        field,
    }
}

fn split_eigenvalues(g: &MobiusElement<f64>) -> Result<(Complex<f64>, Complex<f64>)> {
    let inv = class_invariants(g, None)?;
    match (inv.class_type, g.field) {
        (ClassType::Hyperbolic, FieldKind::Real)
        | (ClassType::Hyperbolic | ClassType::Loxodromic, FieldKind::Complex) => {
            Ok(g.eigenvalues())
        }
        (ClassType::Elliptic, _) => Err(Error::Domain(
            "|a| = |b| with a ≠ b: not a split regular element".into(),
        )),
        (t, _) => Err(Error::Domain(format!(
            "split orbital integral needs a regular split element, got {t:?}"
        ))),
    }
}

/// `O_γ(f) = |1 − b/a|^{−1} ∫_N f(γn) dn` for `γ ~ diag(a, b)`; over C the
/// Jacobian is squared and N ≅ C carries Lebesgue measure.
pub fn orbital_split(g: &MobiusElement<f64>, f: &RadialBump, tol: f64) -> Result<OrbitalReport> {
    let (a, b) = split_eigenvalues(g)?;
    let gamma = MobiusElement::new(
        [[a, Complex::new(0.0, 0.0)], [Complex::new(0.0, 0.0), b]],
        g.field,
    )?;
    let cfg = QuadConfig::tol(tol);
    let jac = (Complex::new(1.0, 0.0) - b / a).norm();
    let value = match g.field {
        FieldKind::Real => {
            let r = integrate_real_line(
                |v| f.eval(&gamma.mul(&n_of(Complex::new(v, 0.0), FieldKind::Real))),
                cfg,
            )?;
            r.value / jac
        }
        FieldKind::Complex => {
            let nest = Nested::new();
            let outer = integrate_real_line(
                |x| {
                    nest.inner(integrate_real_line(
                        |y| f.eval(&gamma.mul(&n_of(Complex::new(x, y), FieldKind::Complex))),
                        cfg,
                    ))
                },
                cfg,
            );
            nest.finish(outer)?.value / (jac * jac)
        }
    };
    let inv = class_invariants(&gamma, None)?;
    let delta = Complex::new(inv.weyl_disc[0], inv.weyl_disc[1]).norm();
    let shape = delta.powf(-0.5);
    Ok(OrbitalReport {
        method: "split",
        value,
        measured_constant: Some(value.abs() / (shape * f.sup_norm())),
        bound_shape: Some(shape),
        cosh_squared_weight_value: None,
    })
}

/// Rotation angle θ ∈ (0, π/2] of a real elliptic element (λ = e^{2iθ}).
pub fn elliptic_angle(g: &MobiusElement<f64>) -> Result<f64> {
    if g.field != FieldKind::Real {
        return Err(Error::Domain(
            "no anisotropic torus over C: elliptic orbital integrals are real only".into(),
        ));
    }
    let inv = class_invariants(g, None)?;
    if inv.class_type != ClassType::Elliptic {
        return Err(Error::Domain(format!(
            "expected an elliptic element, got {:?}",
            inv.class_type
        )));
    }
    Ok(inv.lambda[1].atan2(inv.lambda[0]) / 2.0)
}

/// Largest t at which `diag(t^{−1}, 1) γ diag(t, 1)` is still in supp f.
fn support_edge(gamma: &MobiusElement<f64>, f: &RadialBump) -> f64 {
    let dist = |t: f64| {
        let a = MobiusElement::diag(Complex::new(t, 0.0), FieldKind::Real).unwrap();
        a.inverse().mul(gamma).mul(&a).distance_to_identity()
    };
    let mut hi = 2.0;
    while dist(hi) < f.radius && hi < 1e12 {
        hi *= 2.0;
    }
    let mut lo = 1.0;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if dist(mid) < f.radius {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// `O_γ(f) = 2π ∫_1^∞ ((t − t^{−1})/2) f(diag(t^{−1},1) r_θ diag(t,1)) dt/t`
/// for the rotation r_θ in the class of g: hyperbolic polar coordinates
/// about the fixed point, compact centralizer of mass 1.
pub fn orbital_elliptic(g: &MobiusElement<f64>, f: &RadialBump, tol: f64) -> Result<OrbitalReport> {
    let theta = elliptic_angle(g)?;
    let gamma = MobiusElement::rotation(theta);
    let conj = |t: f64| {
        let a = MobiusElement::diag(Complex::new(t, 0.0), FieldKind::Real).unwrap();
        f.eval(&a.inverse().mul(&gamma).mul(&a))
    };
    let top = support_edge(&gamma, f);
    let cfg = QuadConfig::tol(tol);
    let (value, cosh_sq) = if top <= 1.0 || !meets_ball(&gamma, f.radius)? {
        (0.0, 0.0)
    } else {
        let v = integrate(|t| 0.5 * (t - 1.0 / t) * conj(t) / t, 1.0, top, cfg)?.value;
        let p = integrate(
            |t| (0.5 * (t + 1.0 / t)).powi(2) * conj(t) / t,
            1.0,
            top,
            cfg,
        )?
        .value;
        (2.0 * PI * v, p)
    };
    let shape = theta.sin().abs().powi(-2);
    Ok(OrbitalReport {
        method: "elliptic",
        value,
        measured_constant: Some(value.abs() / (shape * f.sup_norm())),
        bound_shape: Some(shape),
        cosh_squared_weight_value: Some(cosh_sq),
    })
}

/// Fixed elements of K used to average over K-conjugation.
fn k_samples(field: FieldKind) -> Vec<MobiusElement<f64>> {
    match field {
        FieldKind::Real => [0.0, 0.7, 1.9, 2.6]
            .iter()
            .map(|&a| MobiusElement::rotation(a))
            .collect(),
        FieldKind::Complex => {
            let u = |a: f64, b: f64, ph: f64| {
                let (ca, sa) = (a.cos(), a.sin());
                let e = Complex::from_polar(1.0, ph);
                MobiusElement::complex(
                    Complex::new(ca, 0.0) * e,
                    Complex::new(-sa, 0.0) * Complex::from_polar(1.0, b),
                    Complex::new(sa, 0.0) * Complex::from_polar(1.0, -b),
                    Complex::new(ca, 0.0) * e.conj(),
                )
                .unwrap()
            };
            vec![
                u(0.0, 0.0, 0.0),
                u(0.4, 1.1, 0.3),
                u(1.2, -0.5, 2.0),
                u(2.5, 2.2, -1.0),
            ]
        }
    }
}

/// Normal form of the class: `diag(a, b)` for split classes, a rotation for
/// real elliptic ones.
pub fn normal_form(g: &MobiusElement<f64>) -> Result<MobiusElement<f64>> {
    let inv = class_invariants(g, None)?;
    match inv.class_type {
        ClassType::Parabolic => Err(Error::Domain(
            "parabolic elements have no semisimple normal form".into(),
        )),
        ClassType::Elliptic if g.field == FieldKind::Real => {
            Ok(MobiusElement::rotation(elliptic_angle(g)?))
        }
        _ => {
            let (a, b) = g.eigenvalues();
            MobiusElement::new(
                [[a, Complex::new(0.0, 0.0)], [Complex::new(0.0, 0.0), b]],
                g.field,
            )
        }
    }
}

/// Direct quadrature of `∫_G α(x) f(x^{−1} γ x) dx` in Iwasawa coordinates
/// `x = n(u) a(y) k` on the normal form γ of g's class. For split γ,
/// `α(x) = β(log y)` with β a unit-mass Gaussian, so that α integrates to 1
/// over each centralizer coset; for elliptic γ, α = 1. The K-integral is an
/// average over fixed elements of K, exact for K-conjugation-invariant f.
pub fn orbital_bruteforce(
    g: &MobiusElement<f64>,
    f: &RadialBump,
    tol: f64,
) -> Result<OrbitalReport> {
    if tol < 1e-6 {
        return Err(Error::Domain(format!(
            "brute-force tolerance must be at least 1e-6, got {tol}"
        )));
    }
    if class_invariants(g, None)?.class_type == ClassType::Identity {
        // The centralizer is G itself, so α integrates to 1 over G and the
        // integral collapses to f(1).
        let value = f.eval(&MobiusElement::identity(g.field));
        return Ok(OrbitalReport {
            method: "bruteforce",
            value,
            measured_constant: None,
            bound_shape: None,
            cosh_squared_weight_value: None,
        });
    }
    let gamma = normal_form(g)?;
    let field = gamma.field;
    let split = class_invariants(&gamma, None)?.class_type != ClassType::Elliptic;
    let ks = k_samples(field);
    let kinv: Vec<_> = ks.iter().map(|k| k.inverse()).collect();
    let sigma = 0.5;
    let beta = |s: f64| (-(s * s) / (2.0 * sigma * sigma)).exp() / (sigma * (2.0 * PI).sqrt());
    let integrand = |u: Complex<f64>, y: f64| -> f64 {
        let x = n_of(u, field).mul(&MobiusElement::diag(Complex::new(y, 0.0), field).unwrap());
        let conj = x.inverse().mul(&gamma).mul(&x);
        let avg: f64 = ks
            .iter()
            .zip(&kinv)
            .map(|(k, ki)| f.eval(&ki.mul(&conj).mul(k)))
            .sum::<f64>()
            / ks.len() as f64;
        let alpha = if split { beta(y.ln()) } else { 1.0 };
        alpha * avg
    };
    // Inner tolerances are tighter so the outer error estimate dominates.
    let outer_cfg = QuadConfig {
        abs_tol: tol * 1e-2,
        rel_tol: tol * 1e-1,
        max_intervals: 4000,
    };
    let inner_cfg = QuadConfig {
        abs_tol: tol * 1e-3,
        rel_tol: tol * 1e-2,
        max_intervals: 4000,
    };
    let nest = Nested::new();
    // y = e^s; the H² measure du dy/y² becomes du e^{−s} ds, H³ has dy/y³.
    let power = match field {
        FieldKind::Real => 1.0,
        FieldKind::Complex => 2.0,
    };
    let s_range = if split { 4.5 } else { 12.0 };
    let outer = integrate(
        |s| {
            let y = s.exp();
            let w = (-power * s).exp();
            let inner = match field {
                FieldKind::Real => {
                    integrate_real_line(|u| integrand(Complex::new(u, 0.0), y), inner_cfg)
                }
                FieldKind::Complex => integrate_real_line(
                    |u1| {
                        nest.inner(integrate_real_line(
                            |u2| integrand(Complex::new(u1, u2), y),
                            inner_cfg,
                        ))
                    },
                    inner_cfg,
                ),
            };
            w * nest.inner(inner)
        },
        -s_range,
        s_range,
        outer_cfg,
    );
    let value = nest.finish(outer)?.value;
    Ok(OrbitalReport {
        method: "bruteforce",
        value,
        measured_constant: None,
        bound_shape: None,
        cosh_squared_weight_value: None,
    })
}

/// The shared preset grid: three real split ratios, two loxodromic
/// elements, five rotation angles.
pub fn orbital_presets() -> Vec<(String, MobiusElement<f64>)> {
    let mut out = Vec::new();
    for (name, r) in [
        ("split a/b=2", 2.0),
        ("split a/b=4", 4.0),
        ("split a/b=e", std::f64::consts::E),
    ] {
        out.push((
            name.to_string(),
            MobiusElement::diag(Complex::new(r, 0.0), FieldKind::Real).unwrap(),
        ));
    }
    for (name, a) in [
        ("loxodromic 1.5e^{0.7i}", Complex::from_polar(1.5, 0.7)),
        ("loxodromic 2e^{1.2i}", Complex::from_polar(2.0, 1.2)),
    ] {
        out.push((
            name.to_string(),
            MobiusElement::diag(a, FieldKind::Complex).unwrap(),
        ));
    }
    for (name, th) in [
        ("elliptic π/6", PI / 6.0),
        ("elliptic π/4", PI / 4.0),
        ("elliptic π/2", PI / 2.0),
        ("elliptic π/3", PI / 3.0),
        ("elliptic π/8", PI / 8.0),
    ] {
        out.push((name.to_string(), MobiusElement::rotation(th)));
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitalComparison {
    pub name: String,
    pub closed: OrbitalReport,
    pub brute: OrbitalReport,
    pub relative_error: f64,
}

/// Closed reduction against brute force for one element.
pub fn compare_orbital(
    name: &str,
    g: &MobiusElement<f64>,
    f: &RadialBump,
    tol: f64,
) -> Result<OrbitalComparison> {
    let closed = match class_invariants(g, None)?.class_type {
        ClassType::Elliptic => orbital_elliptic(g, f, tol * 1e-2)?,
        _ => orbital_split(g, f, tol * 1e-2)?,
    };
    let brute = orbital_bruteforce(g, f, tol)?;
    let denom = closed.value.abs().max(1e-300);
    let relative_error = if closed.value == 0.0 && brute.value.abs() < 1e-12 {
        0.0
    } else {
        (closed.value - brute.value).abs() / denom
    };
    Ok(OrbitalComparison {
        name: name.to_string(),
        closed,
        brute,
        relative_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::DoubleDouble;

    #[test]
    fn distance_examples() {
        let g = MobiusElement::diag(Complex::new(2.0, 0.0), FieldKind::Real).unwrap();
        let one = MobiusElement::identity(FieldKind::Real);
        assert!((frobenius_distance(&one, &g) - 1.25f64.sqrt()).abs() < 1e-14);
        assert_eq!(frobenius_distance(&g, &g), 0.0);
        let h = MobiusElement::real(1.0, 3.0, -2.0, 0.5).unwrap();
        let x = MobiusElement::real(0.3, 1.0, 1.0, 2.0).unwrap();
        let l = frobenius_distance(&h.mul(&x), &h.mul(&g));
        assert!((l - frobenius_distance(&x, &g)).abs() < 1e-12);
    }

    #[test]
    fn double_double_distance() {
        let g = MobiusElement::<DoubleDouble>::diag(
            Complex::new(DoubleDouble::from(2.0), DoubleDouble::from(0.0)),
            FieldKind::Real,
        )
        .unwrap();
        let d = g.distance_to_identity();
        let expect = DoubleDouble::from(1.25).sqrt();
        assert!((d - expect).abs().to_f64() < 1e-30);
    }

    #[test]
    fn invariants_of_rotations_and_diagonals() {
        for th in [0.3, PI / 4.0, 1.2] {
            let inv = class_invariants(&MobiusElement::rotation(th), None).unwrap();
            assert_eq!(inv.class_type, ClassType::Elliptic);
            assert!((inv.weyl_disc[0] - 4.0 * th.sin().powi(2)).abs() < 1e-12);
            assert!((inv.lambda[1].atan2(inv.lambda[0]) - 2.0 * th).abs() < 1e-12);
        }
        let inv = class_invariants(
            &MobiusElement::diag(Complex::new(3.0, 0.0), FieldKind::Real).unwrap(),
            None,
        )
        .unwrap();
        assert_eq!(inv.class_type, ClassType::Hyperbolic);
        assert!((inv.weyl_disc[0] - (2.0 - 3.0 - 1.0 / 3.0)).abs() < 1e-12);
        let par = MobiusElement::real(1.0, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(
            class_invariants(&par, None).unwrap().class_type,
            ClassType::Parabolic
        );
        assert!(meets_ball(&par, 1.0).is_err());
        let lox = MobiusElement::diag(Complex::from_polar(2.0, 1.0), FieldKind::Complex).unwrap();
        assert_eq!(
            class_invariants(&lox, None).unwrap().class_type,
            ClassType::Loxodromic
        );
    }

    #[test]
    fn mahler_of_a_lift() {
        let g = MobiusElement::real(3.0, -1.0, 1.0, 0.0).unwrap();
        let f: IntPolynomial = "x^2 - 3x + 1".parse().unwrap();
        let inv = class_invariants(&g, Some(&f)).unwrap();
        assert!((inv.mahler.unwrap() - 2.0 * 0.481212).abs() < 1e-6);
        assert_eq!(inv.mahler_consistent, Some(true));
    }

    #[test]
    fn meets_ball_examples() {
        assert!(meets_ball(&MobiusElement::<f64>::identity(FieldKind::Real), 1e-9).unwrap());
        let far = MobiusElement::diag(Complex::new(10f64.exp(), 0.0), FieldKind::Real).unwrap();
        assert!(!meets_ball(&far, 1.0).unwrap());
    }

    #[test]
    fn bump_profile() {
        let b = RadialBump::new(3.0, 1.0).unwrap();
        assert_eq!(b.profile(0.5), 1.0);
        assert_eq!(b.profile(3.0), 0.0);
        assert!((b.profile(2.0) - 0.5).abs() < 1e-15);
        assert!(RadialBump::new(1.0, 1.0).is_err());
    }

    #[test]
    fn split_orbital_outside_support_vanishes() {
        let g = MobiusElement::diag(Complex::new(5f64.exp(), 0.0), FieldKind::Real).unwrap();
        let f = RadialBump::of_radius(0.1).unwrap();
        assert_eq!(orbital_split(&g, &f, 1e-8).unwrap().value, 0.0);
    }

    #[test]
    fn rejects_misuse() {
        let f = RadialBump::of_radius(3.0).unwrap();
        assert!(orbital_split(&MobiusElement::rotation(0.4), &f, 1e-8).is_err());
        let lox = MobiusElement::diag(Complex::from_polar(2.0, 1.0), FieldKind::Complex).unwrap();
        assert!(orbital_elliptic(&lox, &f, 1e-8).is_err());
    }
}
