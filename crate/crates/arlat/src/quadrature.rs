//! Adaptive Gauss–Kronrod (7, 15) quadrature.
//!
//! Intervals are split in a fixed order (largest error estimate first, ties
//! by creation index), so results are reproducible bit for bit.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_intervals: 2000,
        }
    }
}

impl QuadConfig {
    pub fn tol(t: f64) -> Self {
        QuadConfig {
            abs_tol: t,
            rel_tol: t,
            ..Default::default()
        }
    }
}

/// One G7K15 panel: `(Kronrod value, |Kronrod − Gauss|)`.
pub fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let x = h * XGK[i];
        let s = f(c - x) + f(c + x);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    id: usize,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error.total_cmp(&o.error).then(o.id.cmp(&self.id))
    }
}

/// `∫_a^b f` on a finite interval.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: QuadConfig) -> Result<QuadResult> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Quadrature(
            "finite limits required; use the infinite-range variants".into(),
        ));
    }
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            intervals: 0,
        });
    }
    let mut heap = BinaryHeap::new();
    let (v, e) = gk15(&f, a, b);
    heap.push(Panel {
        a,
        b,
        value: v,
        error: e,
        id: 0,
    });
    let mut next_id = 1;
    let (mut total, mut err) = (v, e);
    while err > cfg.abs_tol.max(cfg.rel_tol * total.abs()) {
        if !total.is_finite() {
            return Err(Error::Quadrature(
                "integrand produced a non-finite value".into(),
            ));
        }
        if heap.len() >= cfg.max_intervals {
            return Err(Error::Quadrature(format!(
                "no convergence after {} intervals (estimate {total:e}, error {err:e})",
                heap.len()
            )));
        }
        let p = heap.pop().expect("heap is never empty");
        let m = 0.5 * (p.a + p.b);
        let (v1, e1) = gk15(&f, p.a, m);
        let (v2, e2) = gk15(&f, m, p.b);
        heap.push(Panel {
            a: p.a,
            b: m,
            value: v1,
            error: e1,
            id: next_id,
        });
        heap.push(Panel {
            a: m,
            b: p.b,
            value: v2,
            error: e2,
            id: next_id + 1,
        });
        next_id += 2;
        // Recompute in creation order so the sum does not depend on heap layout.
        let mut panels: Vec<&Panel> = heap.iter().collect();
        panels.sort_by_key(|p| p.id);
        total = panels.iter().map(|p| p.value).sum();
        err = panels.iter().map(|p| p.error).sum();
    }
    if !total.is_finite() {
        return Err(Error::Quadrature(
            "integrand produced a non-finite value".into(),
        ));
    }
    Ok(QuadResult {
        value: total,
        error: err,
        intervals: heap.len(),
    })
}

/// `∫_a^∞ f` through `x = a + t/(1 − t)`.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    cfg: QuadConfig,
) -> Result<QuadResult> {
    integrate(
        |t| {
            if t >= 1.0 {
                return 0.0;
            }
            let s = 1.0 - t;
            f(a + t / s) / (s * s)
        },
        0.0,
        1.0,
        cfg,
    )
}

/// `∫_{−∞}^{∞} f`, as two half-lines from 0.
pub fn integrate_real_line<F: Fn(f64) -> f64>(f: F, cfg: QuadConfig) -> Result<QuadResult> {
    let r = integrate_to_infinity(&f, 0.0, cfg)?;
    let l = integrate_to_infinity(|x| f(-x), 0.0, cfg)?;
    Ok(QuadResult {
        value: r.value + l.value,
        error: r.error + l.error,
        intervals: r.intervals + l.intervals,
    })
}

/// Runs a nested integrand, turning an inner failure into an outer error.
pub struct Nested {
    failure: std::cell::RefCell<Option<Error>>,
}

impl Default for Nested {
    fn default() -> Self {
        Self::new()
    }
}

impl Nested {
    pub fn new() -> Self {
        Nested {
            failure: std::cell::RefCell::new(None),
        }
    }

    /// The inner value, or NaN after recording the first failure.
    pub fn inner(&self, r: Result<QuadResult>) -> f64 {
        match r {
            Ok(q) => q.value,
            Err(e) => {
                self.failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    }

    pub fn finish(self, outer: Result<QuadResult>) -> Result<QuadResult> {
        if let Some(e) = self.failure.into_inner() {
            return Err(e);
        }
        outer
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| x.powi(6) - 3.0 * x, 0.0, 2.0, QuadConfig::default()).unwrap();
        assert!((r.value - (128.0 / 7.0 - 6.0)).abs() < 1e-13);
        assert_eq!(r.intervals, 1);
    }

    #[test]
    fn infinite_ranges() {
        let r = integrate_real_line(|x| 1.0 / (1.0 + x * x), QuadConfig::tol(1e-12)).unwrap();
        assert!((r.value - PI).abs() < 1e-10);
        let r = integrate_to_infinity(|x| (-x).exp(), 1.0, QuadConfig::tol(1e-12)).unwrap();
        assert!((r.value - (-1f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn kinks_need_refinement_and_are_deterministic() {
        let f = |x: f64| (x - 0.3).abs().sqrt();
        let a = integrate(f, 0.0, 1.0, QuadConfig::tol(1e-10)).unwrap();
        let b = integrate(f, 0.0, 1.0, QuadConfig::tol(1e-10)).unwrap();
        assert_eq!(a, b);
        let exact = (2.0 / 3.0) * (0.3f64.powf(1.5) + 0.7f64.powf(1.5));
        assert!((a.value - exact).abs() < 1e-9);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let cfg = QuadConfig {
            abs_tol: 1e-15,
            rel_tol: 0.0,
            max_intervals: 4,
        };
        assert!(matches!(
            integrate(|x: f64| (1.0 / x).sin(), 1e-6, 1.0, cfg),
            Err(Error::Quadrature(_))
        ));
    }
}
