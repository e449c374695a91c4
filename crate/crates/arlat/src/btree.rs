//! The Bruhat–Tits tree of PGL(2, Q_p) in horocycle coordinates.
//!
//! The vertex `(m, b)` is the homothety class of the lattice spanned by the
//! columns of `[[p^m, b], [0, 1]]`, equivalently the ball `b + p^m Z_p`. The
//! label `b` is kept canonical: a rational `c / p^e` with `0 <= c < p^{m+e}`.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numfield::is_prime;

/// Largest radius accepted by [`fixed_set_bruteforce`].
pub const MAX_BRUTE_RADIUS: u32 = 12;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeVertex {
    pub m: i64,
    pub b: BigRational,
}

impl fmt::Debug for TreeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.m, self.b)
    }
}

impl Serialize for TreeVertex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (self.m, self.b.to_string()).serialize(s)
    }
}

/// p-adic valuation of a nonzero integer.
pub fn vp_int(x: &BigInt, p: u64) -> i64 {
    debug_assert!(!x.is_zero());
    let pb = BigInt::from(p);
    let mut x = x.clone();
    let mut v = 0;
    loop {
        let (q, r) = x.div_rem(&pb);
        if !r.is_zero() {
            return v;
        }
        x = q;
        v += 1;
    }
}

/// p-adic valuation of a rational; `None` for zero.
pub fn vp(x: &BigRational, p: u64) -> Option<i64> {
    if x.is_zero() {
        None
    } else {
        Some(vp_int(x.numer(), p) - vp_int(x.denom(), p))
    }
}

fn pow(p: u64, e: i64) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let g = a.extended_gcd(m);
    debug_assert!(g.gcd.is_one());
    g.x.mod_floor(m)
}

/// Canonical representative of `b + p^m Z_p`.
pub fn canonical_label(m: i64, b: &BigRational, p: u64) -> BigRational {
    let Some(v) = vp(b, p) else {
        return BigRational::zero();
    };
    if v >= m {
        return BigRational::zero();
    }
    let e = (-v).max(0);
    let n = m + e;
    let modulus = pow(p, n);
    // b = num / (p^e w) with w prime to p.
    let w = b.denom() / pow(p, vp_int(b.denom(), p));
    let num = b.numer() * pow(p, e - vp_int(b.denom(), p));
    let c = (num * mod_inverse(&w.mod_floor(&modulus), &modulus)).mod_floor(&modulus);
    BigRational::new(c, pow(p, e))
}

impl TreeVertex {
    pub fn base() -> Self {
        TreeVertex {
            m: 0,
            b: BigRational::zero(),
        }
    }

    pub fn new(m: i64, b: BigRational, p: u64) -> Self {
        let b = canonical_label(m, &b, p);
        TreeVertex { m, b }
    }

    pub fn from_int(m: i64, b: i64, p: u64) -> Self {
        TreeVertex::new(m, BigRational::from_integer(BigInt::from(b)), p)
    }

    /// The horocycle parent `(m − 1, b)`.
    pub fn parent(&self, p: u64) -> Self {
        TreeVertex::new(self.m - 1, self.b.clone(), p)
    }

    pub fn children(&self, p: u64) -> Vec<Self> {
        let step = if self.m >= 0 {
            BigRational::from_integer(pow(p, self.m))
        } else {
            BigRational::new(BigInt::one(), pow(p, -self.m))
        };
        (0..p)
            .map(|t| TreeVertex::new(self.m + 1, &self.b + &step * BigInt::from(t), p))
            .collect()
    }
}

/// The p + 1 neighbours: children first in increasing digit, then the parent.
pub fn neighbors(v: &TreeVertex, p: u64) -> Vec<TreeVertex> {
    let mut out = v.children(p);
    out.push(v.parent(p));
    out
}

/// Tree distance between `(m1, b1)` and `(m2, b2)`.
pub fn distance(x: &TreeVertex, y: &TreeVertex, p: u64) -> u64 {
    let meet = match vp(&(&x.b - &y.b), p) {
        None => x.m.min(y.m),
        Some(v) => x.m.min(y.m).min(v),
    };
    ((x.m - meet) + (y.m - meet)) as u64
}

/// `(distance to the standard apartment {(k, 0)}, projection level k)`.
pub fn apartment_projection(v: &TreeVertex, p: u64) -> (u64, i64) {
    match vp(&v.b, p) {
        None => (0, v.m),
        Some(val) => {
            let k = v.m.min(val);
            ((v.m - k) as u64, k)
        }
    }
}

/// 2×2 matrix with exact rational entries.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GL2Rational {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
    pub d: BigRational,
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl GL2Rational {
    pub fn new(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Result<Self> {
        let g = GL2Rational { a, b, c, d };
        if g.det().is_zero() {
            return Err(Error::Domain("matrix has zero determinant".into()));
        }
        Ok(g)
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        GL2Rational::new(q(a), q(b), q(c), q(d))
    }

    pub fn identity() -> Self {
        GL2Rational::from_i64(1, 0, 0, 1).unwrap()
    }

    pub fn det(&self) -> BigRational {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> BigRational {
        &self.a + &self.d
    }

    pub fn mul(&self, o: &GL2Rational) -> GL2Rational {
        GL2Rational {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    pub fn inverse(&self) -> GL2Rational {
        let det = self.det();
        GL2Rational {
            a: &self.d / &det,
            b: -&self.b / &det,
            c: -&self.c / &det,
            d: &self.a / &det,
        }
    }

    /// Weyl discriminant `Δ = (1 − λ)(1 − λ^{−1}) = −(t² − 4d)/d`.
    pub fn weyl_discriminant(&self) -> BigRational {
        let t = self.trace();
        let d = self.det();
        -(&t * &t - q(4) * &d) / d
    }

    /// Parse `"a,b;c,d"` with integer or fractional entries.
    pub fn parse(s: &str) -> Result<Self> {
        let rows: Vec<&str> = s.split(';').collect();
        if rows.len() != 2 {
            return Err(Error::Parse(format!(
                "matrix `{s}` needs two rows separated by ';'"
            )));
        }
        let mut e = Vec::new();
        for r in rows {
            for x in r.split(',') {
                let x = x.trim();
                let v: BigRational = x
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad matrix entry `{x}`")))?;
                e.push(v);
            }
        }
        if e.len() != 4 {
            return Err(Error::Parse(format!("matrix `{s}` needs four entries")));
        }
        let mut it = e.into_iter();
        GL2Rational::new(
            it.next().unwrap(),
            it.next().unwrap(),
            it.next().unwrap(),
            it.next().unwrap(),
        )
    }
}

/// The vertex of the lattice `g · L(v)`, by column reduction over Z_p.
pub fn act(g: &GL2Rational, v: &TreeVertex, p: u64) -> TreeVertex {
    let pm = if v.m >= 0 {
        BigRational::from_integer(pow(p, v.m))
    } else {
        BigRational::new(BigInt::one(), pow(p, -v.m))
    };
    // Columns of g · [[p^m, b], [0, 1]].
    let (x1, y1) = (&g.a * &pm, &g.c * &pm);
    let (x2, y2) = (&g.a * &v.b + &g.b, &g.c * &v.b + &g.d);
    let v1 = vp(&y1, p);
    let v2 = vp(&y2, p);
    // Pivot on the column whose bottom entry has the smaller valuation.
    let use_first = match (v1, v2) {
        (None, _) => false,
        (Some(_), None) => true,
        (Some(a), Some(b)) => a <= b,
    };
    let (px, py, ox, oy) = if use_first {
        (x1, y1, x2, y2)
    } else {
        (x2, y2, x1, y1)
    };
    // Other column minus (oy/py)·pivot has bottom entry 0.
    let top = ox - &px * (&oy / &py);
    let m_new = vp(&top, p).expect("nonzero determinant") - vp(&py, p).unwrap();
    let b_new = px / py;
    TreeVertex::new(m_new, b_new, p)
}

/// Vertices within distance `radius` of the base vertex, BFS order, with
/// the BFS predecessor of each non-base vertex.
pub fn ball(p: u64, radius: u32) -> Vec<(TreeVertex, Option<usize>)> {
    let mut out: Vec<(TreeVertex, Option<usize>)> = vec![(TreeVertex::base(), None)];
    let mut depth = vec![0u32];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        if depth[i] == radius {
            continue;
        }
        let v = out[i].0.clone();
        let pred = out[i].1.map(|j| out[j].0.clone());
        for w in neighbors(&v, p) {
            if Some(&w) == pred.as_ref() {
                continue;
            }
            out.push((w, Some(i)));
            depth.push(depth[i] + 1);
            queue.push_back(out.len() - 1);
        }
    }
    out
}

/// Ball enumeration and action with machine integers. A label `c / p^e`
/// is stored as `(c, e)`, canonical as for [`TreeVertex`]. Any overflow makes
/// the caller fall back to the exact path.
mod fast {
    use super::*;

    #[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
    pub struct FastVertex {
        pub m: i64,
        pub c: i128,
        pub e: u32,
    }

    pub fn ppow(p: u64, e: i64) -> Option<i128> {
        if e < 0 {
            return None;
        }
        (p as i128).checked_pow(e as u32)
    }

    pub fn val(mut x: i128, p: u64) -> Option<i64> {
        if x == 0 {
            return None;
        }
        let p = p as i128;
        let mut v = 0;
        while x % p == 0 {
            x /= p;
            v += 1;
        }
        Some(v)
    }

    /// Canonical vertex for the ball `c/p^e + p^m Z_p`, any integer c.
    pub fn canon(m: i64, c: i128, e: u32, p: u64) -> Option<FastVertex> {
        let mut c = c;
        let mut e = e;
        while e > 0 && c % p as i128 == 0 {
            c /= p as i128;
            e -= 1;
        }
        if c == 0 {
            return Some(FastVertex { m, c: 0, e: 0 });
        }
        let n = m + e as i64;
        if n <= 0 || val(c, p).unwrap() - e as i64 >= m {
            return Some(FastVertex { m, c: 0, e: 0 });
        }
        let modulus = ppow(p, n)?;
        let mut c = c.rem_euclid(modulus);
        while e > 0 && c % p as i128 == 0 {
            c /= p as i128;
            e -= 1;
        }
        Some(FastVertex { m, c, e })
    }

    pub fn from_vertex(v: &TreeVertex, p: u64) -> Option<FastVertex> {
        let e = vp_int(v.b.denom(), p) as u32;
        let c: i128 = v.b.numer().try_into().ok()?;
        Some(FastVertex { m: v.m, c, e })
    }

    pub fn to_vertex(v: &FastVertex, p: u64) -> TreeVertex {
        TreeVertex {
            m: v.m,
            b: BigRational::new(BigInt::from(v.c), pow(p, v.e as i64)),
        }
    }

    pub fn neighbors(v: &FastVertex, p: u64) -> Option<Vec<FastVertex>> {
        let mut out = Vec::with_capacity(p as usize + 1);
        if v.m >= 0 {
            let step = ppow(p, v.m + v.e as i64)?;
            for t in 0..p as i128 {
                out.push(canon(
                    v.m + 1,
                    v.c.checked_add(step.checked_mul(t)?)?,
                    v.e,
                    p,
                )?);
            }
        } else {
            let e2 = v.e.max((-v.m) as u32);
            let base = v.c.checked_mul(ppow(p, (e2 - v.e) as i64)?)?;
            let step = ppow(p, e2 as i64 + v.m)?;
            for t in 0..p as i128 {
                out.push(canon(
                    v.m + 1,
                    base.checked_add(step.checked_mul(t)?)?,
                    e2,
                    p,
                )?);
            }
        }
        out.push(canon(v.m - 1, v.c, v.e, p)?);
        Some(out)
    }

    pub fn distance(x: &FastVertex, y: &FastVertex, p: u64) -> Option<u64> {
        let e = x.e.max(y.e);
        let diff = x.c.checked_mul(ppow(p, (e - x.e) as i64)?)?
            - y.c.checked_mul(ppow(p, (e - y.e) as i64)?)?;
        let meet = match val(diff, p) {
            None => x.m.min(y.m),
            Some(v) => x.m.min(y.m).min(v - e as i64),
        };
        Some(((x.m - meet) + (y.m - meet)) as u64)
    }

    pub fn apartment_distance(x: &FastVertex, p: u64) -> u64 {
        match val(x.c, p) {
            None => 0,
            Some(v) => (x.m - x.m.min(v - x.e as i64)) as u64,
        }
    }

    pub fn ball(p: u64, radius: u32) -> Option<Vec<(FastVertex, Option<usize>)>> {
        let mut out = vec![(FastVertex { m: 0, c: 0, e: 0 }, None)];
        let mut depth = vec![0u32];
        let mut i = 0;
        while i < out.len() {
            if depth[i] < radius {
                let (v, pred) = out[i];
                let pred = pred.map(|j: usize| out[j].0);
                for w in neighbors(&v, p)? {
                    if Some(w) != pred {
                        out.push((w, Some(i)));
                        depth.push(depth[i] + 1);
                    }
                }
            }
            i += 1;
        }
        Some(out)
    }

    fn inv_mod(a: i128, m: i128) -> i128 {
        let (mut r0, mut r1, mut s0, mut s1) = (a.rem_euclid(m), m, 1i128, 0i128);
        while r1 != 0 {
            let qq = r0 / r1;
            (r0, r1) = (r1, r0 - qq * r1);
            (s0, s1) = (s1, s0 - qq * s1);
        }
        s0.rem_euclid(m)
    }

    /// Action of an integer matrix `[a, b, c, d]`.
    pub fn act(g: &[i128; 4], v: &FastVertex, p: u64) -> Option<FastVertex> {
        let [a, b, c, d] = *g;
        let big_e = v.e as i64 + (-v.m).max(0);
        let pm = ppow(p, v.m + big_e)?;
        let pe = ppow(p, big_e)?;
        let pce = v.c.checked_mul(ppow(p, big_e - v.e as i64)?)?;
        let (x1, y1) = (a.checked_mul(pm)?, c.checked_mul(pm)?);
        let x2 = a.checked_mul(pce)?.checked_add(b.checked_mul(pe)?)?;
        let y2 = c.checked_mul(pce)?.checked_add(d.checked_mul(pe)?)?;
        let det = x1.checked_mul(y2)?.checked_sub(x2.checked_mul(y1)?)?;
        let use_first = match (val(y1, p), val(y2, p)) {
            (None, _) => false,
            (Some(_), None) => true,
            (Some(s), Some(t)) => s <= t,
        };
        let (px, py) = if use_first { (x1, y1) } else { (x2, y2) };
        let k = val(py, p)?;
        let m_new = val(det, p)? - 2 * k;
        let w = py / ppow(p, k)?;
        // b' = px / (p^k w), needed mod p^{m_new}.
        let n = m_new + k;
        if n <= 0 || px == 0 || val(px, p)? - k >= m_new {
            return Some(FastVertex {
                m: m_new,
                c: 0,
                e: 0,
            });
        }
        let modulus = ppow(p, n)?;
        if modulus > u64::MAX as i128 {
            return None;
        }
        let cc = (px.rem_euclid(modulus) * inv_mod(w, modulus)).rem_euclid(modulus);
        if k >= 0 {
            canon(m_new, cc, k as u32, p)
        } else {
            canon(m_new, cc.checked_mul(ppow(p, -k)?)?, 0, p)
        }
    }

    /// Integer matrix in the homothety class of g.
    pub fn integral(g: &GL2Rational) -> Option<[i128; 4]> {
        let l = [&g.a, &g.b, &g.c, &g.d]
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let mut out = [0i128; 4];
        for (o, x) in out.iter_mut().zip([&g.a, &g.b, &g.c, &g.d]) {
            *o = (x.numer() * (&l / x.denom())).try_into().ok()?;
        }
        Some(out)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FixedSet {
    pub p: u64,
    pub radius: u32,
    pub vertices: Vec<TreeVertex>,
    pub edges: Vec<(TreeVertex, TreeVertex)>,
    pub ball_vertices: usize,
}

/// All vertices of the radius-R ball fixed by g, and the ball's edges fixed
/// setwise. Output sorted.
pub fn fixed_set_bruteforce(g: &GL2Rational, p: u64, radius: u32) -> Result<FixedSet> {
    if radius > MAX_BRUTE_RADIUS {
        return Err(Error::Domain(format!(
            "radius {radius} exceeds {MAX_BRUTE_RADIUS}"
        )));
    }
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    if let (Some(gi), Some(verts)) = (fast::integral(g), fast::ball(p, radius)) {
        // `None`: the image has labels beyond i128, so it is not in the ball.
        let images: Vec<Option<fast::FastVertex>> = verts
            .par_iter()
            .map(|(v, _)| {
                fast::act(&gi, v, p)
                    .or_else(|| fast::from_vertex(&act(g, &fast::to_vertex(v, p), p), p))
            })
            .collect();
        let is_image = |i: usize, target: &fast::FastVertex| images[i].as_ref() == Some(target);
        let mut fixed: Vec<TreeVertex> = (0..verts.len())
            .filter(|&i| is_image(i, &verts[i].0))
            .map(|i| fast::to_vertex(&verts[i].0, p))
            .collect();
        let mut edges = Vec::new();
        for (i, (v, pred)) in verts.iter().enumerate() {
            let Some(j) = *pred else { continue };
            let w = &verts[j].0;
            if (is_image(i, v) && is_image(j, w)) || (is_image(i, w) && is_image(j, v)) {
                let (a, b) = (fast::to_vertex(v, p), fast::to_vertex(w, p));
                edges.push(if a < b { (a, b) } else { (b, a) });
            }
        }
        fixed.sort();
        edges.sort();
        return Ok(FixedSet {
            p,
            radius,
            vertices: fixed,
            edges,
            ball_vertices: verts.len(),
        });
    }
    let verts = ball(p, radius);
    let images: Vec<TreeVertex> = verts.par_iter().map(|(v, _)| act(g, v, p)).collect();
    let mut fixed: Vec<TreeVertex> = verts
        .iter()
        .zip(&images)
        .filter(|((v, _), gv)| v == *gv)
        .map(|((v, _), _)| v.clone())
        .collect();
    let mut edges = Vec::new();
    for (i, (v, pred)) in verts.iter().enumerate() {
        let Some(j) = *pred else { continue };
        let w = &verts[j].0;
        let (gv, gw) = (&images[i], &images[j]);
        if (gv == v && gw == w) || (gv == w && gw == v) {
            let e = if v < w {
                (v.clone(), w.clone())
            } else {
                (w.clone(), v.clone())
            };
            edges.push(e);
        }
    }
    fixed.sort();
    edges.sort();
    Ok(FixedSet {
        p,
        radius,
        vertices: fixed,
        edges,
        ball_vertices: verts.len(),
    })
}

impl FixedSet {
    /// Connectedness of the fixed vertices through fixed edges.
    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let idx: HashMap<&TreeVertex, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v, i))
            .collect();
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for (a, b) in &self.edges {
            if let (Some(&i), Some(&j)) = (idx.get(a), idx.get(b)) {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for &j in &adj[i] {
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// Fixed vertices whose projection to the standard apartment is the base
    /// vertex: one representative per orbit of the diagonal torus.
    pub fn split_transversal_vertices(&self) -> usize {
        self.vertices
            .iter()
            .filter(|v| apartment_projection(v, self.p).1 == 0)
            .count()
    }

    /// Fixed edges modulo the diagonal torus: the apartment edge
    /// `{(0,0),(1,0)}` and the edges whose far endpoint projects to (0,0).
    pub fn split_transversal_edges(&self) -> usize {
        let p = self.p;
        self.edges
            .iter()
            .filter(|(a, b)| {
                let (da, ka) = apartment_projection(a, p);
                let (db, kb) = apartment_projection(b, p);
                if da == 0 && db == 0 {
                    ka.min(kb) == 0
                } else if da > db {
                    ka == 0
                } else {
                    kb == 0
                }
            })
            .count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TorusType {
    Split,
    Unramified,
    TamelyRamified,
    WildlyRamified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilizerKind {
    Vertex,
    Edge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LocalClassData {
    pub q: u64,
    pub v_delta: i64,
    pub torus_type: TorusType,
    pub stabilizer_kind: StabilizerKind,
}

impl LocalClassData {
    pub fn new(
        q: u64,
        v_delta: i64,
        torus_type: TorusType,
        stabilizer_kind: StabilizerKind,
    ) -> Self {
        LocalClassData {
            q,
            v_delta,
            torus_type,
            stabilizer_kind,
        }
    }

    fn validate(&self) -> Result<()> {
        if !is_prime(self.q) {
            return Err(Error::Unsupported(format!(
                "residue field size {} is not prime",
                self.q
            )));
        }
        if self.v_delta < 0 {
            return Err(Error::Domain("v(Δ) < 0: the fixed set is empty".into()));
        }
        match self.torus_type {
            TorusType::WildlyRamified => Err(Error::Unsupported("wildly ramified tori".into())),
            TorusType::TamelyRamified if self.q == 2 => Err(Error::Unsupported(
                "a ramified torus at q = 2 is wildly ramified".into(),
            )),
            TorusType::TamelyRamified if self.v_delta != 0 && self.v_delta % 2 == 0 => Err(
                Error::Domain("a ramified elliptic element has v(Δ) = 0 or odd".into()),
            ),
            TorusType::Split | TorusType::Unramified if self.v_delta % 2 != 0 => Err(
                Error::Domain("split and unramified classes have even v(Δ)".into()),
            ),
            _ => Ok(()),
        }
    }
}

fn rat(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

/// Size of the transversal set S of fixed cosets.
///
/// Split: `q^{v/2}` (strip modulo the torus). Unramified: the ball of radius
/// v/2, `q^{v/2} + 2(q^{v/2} − 1)/(q − 1)` vertices and one fewer edge.
/// Tamely ramified, v odd: the ball of radius v/2 around an edge midpoint,
/// `2(q^{(v+1)/2} − 1)/(q − 1)` vertices and one fewer edge; v = 0: the
/// element flips an edge, so no vertex and one edge.
pub fn fixed_count_closed_form(c: &LocalClassData) -> Result<BigRational> {
    c.validate()?;
    let q = BigInt::from(c.q);
    let edge = c.stabilizer_kind == StabilizerKind::Edge;
    let n = match c.torus_type {
        TorusType::Split => num_traits::pow(q, (c.v_delta / 2) as usize),
        TorusType::Unramified => {
            let h = num_traits::pow(q.clone(), (c.v_delta / 2) as usize);
            let v = &h + BigInt::from(2) * (&h - 1) / (&q - 1);
            if edge {
                v - 1
            } else {
                v
            }
        }
        TorusType::TamelyRamified => {
            if c.v_delta == 0 {
                BigInt::from(if edge { 1 } else { 0 })
            } else {
                let v = BigInt::from(2)
                    * (num_traits::pow(q.clone(), ((c.v_delta + 1) / 2) as usize) - 1)
                    / (&q - 1);
                if edge {
                    v - 1
                } else {
                    v
                }
            }
        }
        TorusType::WildlyRamified => unreachable!("rejected by validate"),
    };
    Ok(rat(n))
}

/// The tame-case expression as printed in the source,
/// `2(q^{v/2} − q^{−1/2})/(q^{3/2} − q^{1/2})`, evaluated in floating point
/// with a flag telling whether it is an integer. It equals the geometric
/// count divided by q, so it is reported and never used as the count.
pub fn tame_expression_as_printed(q: u64, v: i64) -> (f64, bool) {
    let qf = q as f64;
    let x = 2.0 * (qf.powf(v as f64 / 2.0) - qf.powf(-0.5)) / (qf.powf(1.5) - qf.powf(0.5));
    (x, (x - x.round()).abs() < 1e-9)
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitalUnit {
    /// `O_γ(1_U)` exactly.
    pub value: String,
    pub value_f64: f64,
    /// `|Δ|^{−1/2}(1 + b/(q − 1))`, b = 0 for split centralizers, else 2.
    pub bound: f64,
    pub b: u32,
    pub bound_holds: bool,
}

/// Orbital integral of the unit-group indicator; equals the transversal
/// count, and is 1 when the local group is anisotropic.
pub fn orbital_integral_unit(c: &LocalClassData) -> Result<OrbitalUnit> {
    let value = fixed_count_closed_form(c)?;
    let b = if c.torus_type == TorusType::Split {
        0
    } else {
        2
    };
    let bound = (c.q as f64).powf(c.v_delta as f64 / 2.0) * (1.0 + b as f64 / (c.q as f64 - 1.0));
    let vf = value.to_f64().unwrap_or(f64::NAN);
    Ok(OrbitalUnit {
        value: value.to_string(),
        value_f64: vf,
        bound,
        b,
        bound_holds: vf <= bound + 1e-12,
    })
}

/// At a place where the quaternion algebra ramifies the local group is
/// compact and `O_γ(1_U) = 1`.
pub fn orbital_integral_anisotropic() -> BigRational {
    BigRational::one()
}

/// `1 + (q + 1) Σ_{k=1..n} q^{−k−1}`, exactly.
pub fn tree_weight_partial_sum(p: u64, n: u32) -> BigRational {
    let q = BigInt::from(p);
    let mut s = BigRational::zero();
    for k in 1..=n {
        s += BigRational::new(BigInt::one(), num_traits::pow(q.clone(), k as usize + 1));
    }
    BigRational::one() + rat(&q + 1) * s
}

/// `(1 + q^{−2}) / (1 − q^{−1})`.
pub fn tree_weight_limit(p: u64) -> BigRational {
    let q = rat(BigInt::from(p));
    let one = BigRational::one();
    (&one + &one / (&q * &q)) / (&one - &one / &q)
}

/// Comparison of a preset's brute-force fixed set with the predicted shape
/// and the closed-form count.
#[derive(Clone, Debug, Serialize)]
pub struct GeometryCheck {
    pub q: u64,
    pub v_delta: i64,
    pub torus_type: TorusType,
    pub radius: u32,
    pub fixed_vertices: usize,
    pub fixed_edges: usize,
    pub shape_matches: bool,
    pub connected: bool,
    pub transversal_vertices: usize,
    pub transversal_edges: usize,
    pub closed_form_vertices: String,
    pub closed_form_edges: String,
    pub counts_match: bool,
}

impl GeometryCheck {
    pub fn ok(&self) -> bool {
        self.shape_matches && self.connected && self.counts_match
    }
}

/// Build the preset for `(torus, q, v)`, compute its fixed set in the ball of
/// the given radius and compare: split presets fix the strip of radius v/2
/// about the standard apartment, unramified ones the ball of radius v/2 about
/// the base vertex, tame ones the ball of radius v/2 about the midpoint of
/// `{(0,0), (1,0)}`.
pub fn check_preset_geometry(
    torus: TorusType,
    q: u64,
    v: u32,
    radius: u32,
) -> Result<GeometryCheck> {
    let g = match torus {
        TorusType::Split => presets::split(q, v / 2)?,
        TorusType::Unramified => presets::unramified(q, v / 2)?,
        TorusType::TamelyRamified => presets::tame(q, v)?,
        TorusType::WildlyRamified => return Err(Error::Unsupported("wildly ramified tori".into())),
    };
    let fs = fixed_set_bruteforce(&g, q, radius)?;
    let base = fast::FastVertex { m: 0, c: 0, e: 0 };
    let nb = fast::FastVertex { m: 1, c: 0, e: 0 };
    let h = (v / 2) as u64;
    let overflow = || Error::Precision("ball labels exceed machine integers".into());
    let dist =
        |x: &fast::FastVertex, y: &fast::FastVertex| fast::distance(x, y, q).ok_or_else(overflow);
    let predicted = |x: &fast::FastVertex| -> Result<bool> {
        Ok(match torus {
            TorusType::Split => fast::apartment_distance(x, q) <= h,
            TorusType::Unramified => dist(x, &base)? <= h,
            _ if v == 0 => false,
            _ => dist(x, &base)?.min(dist(x, &nb)?) <= ((v - 1) / 2) as u64,
        })
    };
    let all = fast::ball(q, radius).ok_or_else(overflow)?;
    let mut inside = Vec::with_capacity(all.len());
    for (x, _) in &all {
        inside.push(predicted(x)?);
    }
    let mut want_v: Vec<TreeVertex> = all
        .iter()
        .zip(&inside)
        .filter(|(_, &i)| i)
        .map(|((x, _), _)| fast::to_vertex(x, q))
        .collect();
    want_v.sort();
    let mut want_e: Vec<(TreeVertex, TreeVertex)> = Vec::new();
    for (i, (x, pred)) in all.iter().enumerate() {
        let Some(j) = *pred else { continue };
        let y = &all[j].0;
        let flip = torus == TorusType::TamelyRamified
            && v == 0
            && [x, y].contains(&&base)
            && [x, y].contains(&&nb);
        if (inside[i] && inside[j]) || flip {
            let (x, y) = (fast::to_vertex(x, q), fast::to_vertex(y, q));
            want_e.push(if x < y { (x, y) } else { (y, x) });
        }
    }
    want_e.sort();
    let (tv, te) = if torus == TorusType::Split {
        (
            fs.split_transversal_vertices(),
            fs.split_transversal_edges(),
        )
    } else {
        (fs.vertices.len(), fs.edges.len())
    };
    let cv = fixed_count_closed_form(&LocalClassData::new(
        q,
        v as i64,
        torus,
        StabilizerKind::Vertex,
    ))?;
    let ce = fixed_count_closed_form(&LocalClassData::new(
        q,
        v as i64,
        torus,
        StabilizerKind::Edge,
    ))?;
    let counts_match = cv == rat(BigInt::from(tv)) && ce == rat(BigInt::from(te));
    Ok(GeometryCheck {
        q,
        v_delta: v as i64,
        torus_type: torus,
        radius,
        fixed_vertices: fs.vertices.len(),
        fixed_edges: fs.edges.len(),
        shape_matches: fs.vertices == want_v && fs.edges == want_e,
        connected: fs.is_connected(),
        transversal_vertices: tv,
        transversal_edges: te,
        closed_form_vertices: cv.to_string(),
        closed_form_edges: ce.to_string(),
        counts_match,
    })
}

/// Standard test elements with prescribed class data, used to compare the
/// brute-force geometry with the closed forms.
pub mod presets {
    use super::*;

    /// `diag(1 + p^k, 1)`, v(Δ) = 2k; for k = 0 uses `diag(2, 1)` (p odd).
    pub fn split(p: u64, k: u32) -> Result<GL2Rational> {
        if k == 0 {
            if p == 2 {
                return Err(Error::Domain(
                    "no split element with v(Δ) = 0 exists at p = 2".into(),
                ));
            }
            return GL2Rational::from_i64(2, 0, 0, 1);
        }
        GL2Rational::new(rat(pow(p, k as i64) + 1), q(0), q(0), q(1))
    }

    /// A monic quadratic `x^2 − s x − t` irreducible mod p with `f(−1)` a
    /// unit, as `(s, t)`.
    fn irreducible_quadratic(p: u64) -> (i64, i64) {
        for s in 0..p as i64 {
            for t in 0..p as i64 {
                let roots = (0..p as i64).any(|x| (x * x - s * x - t).rem_euclid(p as i64) == 0);
                let at_minus_one = (1 + s - t).rem_euclid(p as i64);
                if !roots && at_minus_one != 0 && t != 0 {
                    return (s, t);
                }
            }
        }
        unreachable!("an irreducible quadratic exists mod every prime")
    }

    /// `I + p^k C` with C the companion matrix of an irreducible quadratic
    /// mod p: elliptic, unramified, v(Δ) = 2k, fixing the ball of radius k
    /// around the base vertex.
    pub fn unramified(p: u64, k: u32) -> Result<GL2Rational> {
        let (s, t) = irreducible_quadratic(p);
        let pk = pow(p, k as i64);
        // Companion matrix [[0, t], [1, s]].
        GL2Rational::new(
            q(1),
            rat(&pk * BigInt::from(t)),
            rat(pk.clone()),
            rat(BigInt::one() + &pk * BigInt::from(s)),
        )
    }

    /// Tamely ramified elliptic elements (p odd): v = 0 gives the edge flip
    /// `[[0, p], [1, 0]]`; odd v = 2j + 1 gives `[[1, p^{j+1}], [p^j, 1]]`.
    pub fn tame(p: u64, v: u32) -> Result<GL2Rational> {
        if p == 2 {
            return Err(Error::Unsupported("ramified tori at p = 2 are wild".into()));
        }
        if v == 0 {
            return GL2Rational::from_i64(0, p as i64, 1, 0);
        }
        if v % 2 == 0 {
            return Err(Error::Domain(
                "ramified elliptic elements have v(Δ) = 0 or odd".into(),
            ));
        }
        let j = ((v - 1) / 2) as i64;
        GL2Rational::new(q(1), rat(pow(p, j + 1)), rat(pow(p, j)), q(1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(m: i64, b: i64, p: u64) -> TreeVertex {
        TreeVertex::from_int(m, b, p)
    }

    #[test]
    fn neighbor_examples() {
        assert_eq!(
            neighbors(&TreeVertex::base(), 2),
            vec![v(1, 0, 2), v(1, 1, 2), v(-1, 0, 2)]
        );
        assert_eq!(
            neighbors(&v(1, 0, 3), 3),
            vec![v(2, 0, 3), v(2, 3, 3), v(2, 6, 3), v(0, 0, 3)]
        );
    }

    #[test]
    fn neighbor_relation_is_symmetric() {
        for p in [2u64, 3] {
            for (x, _) in ball(p, 5) {
                for y in neighbors(&x, p) {
                    assert!(neighbors(&y, p).contains(&x));
                    assert_eq!(distance(&x, &y, p), 1);
                }
            }
        }
    }

    #[test]
    fn canonical_labels() {
        // 1/3 mod 2^2 Z_2 is 3, since 3·3 = 9 ≡ 1 mod 4.
        let b = BigRational::new(BigInt::from(1), BigInt::from(3));
        assert_eq!(canonical_label(2, &b, 2), q(3));
        // 5/4 mod 2^0 Z_2 is 1/4.
        let b = BigRational::new(BigInt::from(5), BigInt::from(4));
        assert_eq!(
            canonical_label(0, &b, 2),
            BigRational::new(BigInt::from(1), BigInt::from(4))
        );
        assert_eq!(canonical_label(-1, &q(7), 3), q(0));
    }

    #[test]
    fn ball_size_matches_regular_tree() {
        for (p, r) in [(2u64, 6u32), (3, 4), (5, 3)] {
            let expected = 1 + (p + 1) * (p.pow(r) - 1) / (p - 1);
            let b = ball(p, r);
            assert_eq!(b.len() as u64, expected);
            assert!(b
                .iter()
                .all(|(x, _)| distance(x, &TreeVertex::base(), p) <= r as u64));
        }
    }

    #[test]
    fn action_examples() {
        let id = GL2Rational::identity();
        for (x, _) in ball(3, 3) {
            assert_eq!(act(&id, &x, 3), x);
        }
        let g = GL2Rational::from_i64(3, 0, 0, 1).unwrap();
        assert_eq!(act(&g, &TreeVertex::base(), 3), v(1, 0, 3));
        assert!(GL2Rational::from_i64(1, 2, 2, 4).is_err());
    }

    #[test]
    fn action_composes() {
        let g = GL2Rational::from_i64(2, 1, 3, 5).unwrap();
        let h = GL2Rational::from_i64(1, -4, 7, 2).unwrap();
        let gh = g.mul(&h);
        for (x, _) in ball(3, 3) {
            assert_eq!(act(&gh, &x, 3), act(&g, &act(&h, &x, 3), 3));
            assert_eq!(act(&g.inverse(), &act(&g, &x, 3), 3), x);
        }
    }

    #[test]
    fn unipotent_fixes_a_horoball() {
        // [[1,1],[0,1]] fixes (m, b) iff 1 ∈ p^m Z_p, i.e. m <= 0.
        let g = GL2Rational::from_i64(1, 1, 0, 1).unwrap();
        let fs = fixed_set_bruteforce(&g, 2, 6).unwrap();
        let direct: Vec<TreeVertex> = {
            let mut d: Vec<TreeVertex> = ball(2, 6)
                .into_iter()
                .map(|(x, _)| x)
                .filter(|x| x.m <= 0)
                .collect();
            d.sort();
            d
        };
        assert_eq!(fs.vertices, direct);
        assert!(fs.is_connected());
    }

    #[test]
    fn closed_form_examples() {
        let c = |t, q, v, k| fixed_count_closed_form(&LocalClassData::new(q, v, t, k)).unwrap();
        use StabilizerKind::*;
        use TorusType::*;
        assert_eq!(c(Split, 3, 2, Vertex), q(3));
        assert_eq!(c(Unramified, 3, 2, Vertex), q(5));
        assert_eq!(c(Unramified, 3, 2, Edge), q(4));
        assert_eq!(c(Unramified, 7, 0, Vertex), q(1));
        assert_eq!(c(TamelyRamified, 3, 1, Vertex), q(2));
        assert_eq!(c(TamelyRamified, 3, 3, Vertex), q(8));
        assert_eq!(c(TamelyRamified, 5, 0, Edge), q(1));
        let wild = LocalClassData::new(2, 2, WildlyRamified, Vertex);
        assert!(matches!(
            fixed_count_closed_form(&wild),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn printed_tame_expression_is_count_over_q() {
        for qq in [3u64, 5, 7] {
            for vv in [1i64, 3, 5] {
                let (x, integral) = tame_expression_as_printed(qq, vv);
                let geo = fixed_count_closed_form(&LocalClassData::new(
                    qq,
                    vv,
                    TorusType::TamelyRamified,
                    StabilizerKind::Vertex,
                ))
                .unwrap();
                assert!((x * qq as f64 - geo.to_f64().unwrap()).abs() < 1e-9);
                assert!(!integral);
            }
        }
    }

    #[test]
    fn orbital_unit_examples() {
        let o = orbital_integral_unit(&LocalClassData::new(
            3,
            2,
            TorusType::Split,
            StabilizerKind::Vertex,
        ))
        .unwrap();
        assert_eq!((o.value.as_str(), o.bound), ("3", 3.0));
        let o = orbital_integral_unit(&LocalClassData::new(
            5,
            2,
            TorusType::Unramified,
            StabilizerKind::Vertex,
        ))
        .unwrap();
        assert_eq!(o.value, "7");
        assert!((o.bound - 7.5).abs() < 1e-12 && o.bound_holds);
        assert_eq!(orbital_integral_anisotropic(), q(1));
    }

    #[test]
    fn small_preset_geometry() {
        for (t, q, v) in [
            (TorusType::Split, 3, 0),
            (TorusType::Split, 2, 2),
            (TorusType::Unramified, 2, 2),
            (TorusType::Unramified, 3, 0),
            (TorusType::TamelyRamified, 3, 0),
            (TorusType::TamelyRamified, 3, 1),
            (TorusType::TamelyRamified, 3, 3),
        ] {
            let c = check_preset_geometry(t, q, v, 4).unwrap();
            assert!(c.ok(), "{c:?}");
        }
    }

    #[test]
    fn fast_path_agrees_with_exact_action() {
        let mats = [
            [2, 1, 3, 5],
            [1, -4, 7, 2],
            [0, 5, 1, 0],
            [9, 2, 4, 1],
            [1, 25, 5, 1],
        ];
        for p in [2u64, 3, 5] {
            let verts = fast::ball(p, 4).unwrap();
            for m in mats {
                let g = GL2Rational::from_i64(m[0], m[1], m[2], m[3]).unwrap();
                let gi = fast::integral(&g).unwrap();
                for (v, _) in &verts {
                    let exact = act(&g, &fast::to_vertex(v, p), p);
                    if let Some(w) = fast::act(&gi, v, p) {
                        assert_eq!(fast::to_vertex(&w, p), exact);
                    }
                }
            }
            let slow: Vec<TreeVertex> = ball(p, 4).into_iter().map(|(x, _)| x).collect();
            let quick: Vec<TreeVertex> = verts.iter().map(|(x, _)| fast::to_vertex(x, p)).collect();
            assert_eq!(slow, quick);
        }
    }

    #[test]
    fn weight_sums() {
        assert_eq!(tree_weight_partial_sum(2, 0), q(1));
        assert_eq!(
            tree_weight_limit(2),
            BigRational::new(BigInt::from(5), BigInt::from(2))
        );
        let s = tree_weight_partial_sum(3, 4);
        let direct = q(1)
            + q(4)
                * (BigRational::new(1.into(), 9.into())
                    + BigRational::new(1.into(), 27.into())
                    + BigRational::new(1.into(), 81.into())
                    + BigRational::new(1.into(), 243.into()));
        assert_eq!(s, direct);
        assert_eq!(tree_weight_limit(3), BigRational::new(5.into(), 3.into()));
        assert!(tree_weight_limit(3) - s < BigRational::new(1.into(), 81.into()));
    }

    #[test]
    fn weyl_discriminant_valuations_of_presets() {
        for p in [3u64, 5] {
            for k in 0..3u32 {
                assert_eq!(
                    vp(&presets::split(p, k).unwrap().weyl_discriminant(), p),
                    Some(2 * k as i64)
                );
                assert_eq!(
                    vp(&presets::unramified(p, k).unwrap().weyl_discriminant(), p),
                    Some(2 * k as i64)
                );
            }
            for vv in [0u32, 1, 3] {
                assert_eq!(
                    vp(&presets::tame(p, vv).unwrap().weyl_discriminant(), p),
                    Some(vv as i64)
                );
            }
        }
        for k in 1..3u32 {
            assert_eq!(
                vp(&presets::unramified(2, k).unwrap().weyl_discriminant(), 2),
                Some(2 * k as i64)
            );
        }
        assert!(presets::split(2, 0).is_err());
    }
}
