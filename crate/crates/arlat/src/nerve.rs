//! Ball-packing nerves of sampled metric spaces.
//!
//! With `i(x) = min(inj x, 1)`, a maximal set B with the balls
//! `B(x, i(x)/16)` pairwise disjoint is chosen greedily, the balls
//! `B(x, i(x)/5)` over B are checked to cover the samples, and the nerve of
//! that cover is built.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::volume::nerve_degree_constant;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Geometry {
    /// `R^n / Z^n` with the quotient Euclidean metric.
    FlatTorus {
        dim: usize,
    },
    Euclidean {
        dim: usize,
    },
    /// Poincaré disk model of H².
    PoincareDisk,
}

impl Geometry {
    pub fn dist(&self, x: &[f64], y: &[f64]) -> f64 {
        match self {
            Geometry::FlatTorus { .. } => x
                .iter()
                .zip(y)
                .map(|(a, b)| {
                    let d = (a - b).rem_euclid(1.0);
                    let d = d.min(1.0 - d);
                    d * d
                })
                .sum::<f64>()
                .sqrt(),
            Geometry::Euclidean { .. } => x
                .iter()
                .zip(y)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt(),
            Geometry::PoincareDisk => {
                let d2 = (x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2);
                let nx = 1.0 - x[0] * x[0] - x[1] * x[1];
                let ny = 1.0 - y[0] * y[0] - y[1] * y[1];
                (1.0 + 2.0 * d2 / (nx * ny)).acosh()
            }
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Geometry::FlatTorus { dim } | Geometry::Euclidean { dim } => *dim,
            Geometry::PoincareDisk => 2,
        }
    }

    /// Volume of a ball of radius r, up to a dimension constant that cancels
    /// in ratios.
    fn ball_volume(&self, r: f64) -> f64 {
        match self {
            Geometry::FlatTorus { dim } | Geometry::Euclidean { dim } => r.powi(*dim as i32),
            Geometry::PoincareDisk => 2.0 * std::f64::consts::PI * (r.cosh() - 1.0),
        }
    }
}

/// Finite sample of a metric space with a truncated injectivity radius.
#[derive(Clone, Debug, Serialize)]
pub struct MetricSampleSpace {
    pub name: String,
    pub geometry: Geometry,
    /// Identifiers; iteration always runs in increasing identifier order.
    pub ids: Vec<u64>,
    pub points: Vec<Vec<f64>>,
    /// `i(x) = min(inj x, 1)`.
    pub inj: Vec<f64>,
}

impl MetricSampleSpace {
    pub fn new(
        name: &str,
        geometry: Geometry,
        ids: Vec<u64>,
        points: Vec<Vec<f64>>,
        inj: Vec<f64>,
    ) -> Result<Self> {
        if ids.len() != points.len() || inj.len() != points.len() {
            return Err(Error::Domain(
                "ids, points and inj must have equal length".into(),
            ));
        }
        if points.iter().any(|p| p.len() != geometry.dim()) {
            return Err(Error::Domain(format!(
                "points must have dimension {}",
                geometry.dim()
            )));
        }
        if inj.iter().any(|&r| !(r > 0.0)) {
            return Err(Error::Domain("injectivity radii must be positive".into()));
        }
        if ids.iter().collect::<BTreeSet<_>>().len() != ids.len() {
            return Err(Error::Domain("duplicate identifiers".into()));
        }
        let inj = inj.into_iter().map(|r| r.min(1.0)).collect();
        Ok(MetricSampleSpace {
            name: name.into(),
            geometry,
            ids,
            points,
            inj,
        })
    }

    /// Euclidean points with identifiers in input order.
    pub fn euclidean(points: Vec<Vec<f64>>, inj: Vec<f64>) -> Result<Self> {
        let dim = points.first().map_or(1, |p| p.len());
        let ids = (0..points.len() as u64).collect();
        MetricSampleSpace::new("euclidean", Geometry::Euclidean { dim }, ids, points, inj)
    }

    /// `per_side^dim` grid on the flat torus with constant injectivity radius.
    /// Identifiers are a seeded permutation, so the seed fixes the greedy order.
    pub fn flat_torus_grid(dim: usize, per_side: usize, inj: f64, seed: u64) -> Result<Self> {
        if dim == 0 || per_side == 0 {
            return Err(Error::Domain(
                "torus grid needs dim >= 1 and per_side >= 1".into(),
            ));
        }
        let total = per_side
            .checked_pow(dim as u32)
            .ok_or_else(|| Error::Domain("grid too large".into()))?;
        let points: Vec<Vec<f64>> = (0..total)
            .map(|mut k| {
                (0..dim)
                    .map(|_| {
                        let c = k % per_side;
                        k /= per_side;
                        c as f64 / per_side as f64
                    })
                    .collect()
            })
            .collect();
        let ids = seeded_ids(total, seed);
        MetricSampleSpace::new(
            &format!("torus{dim}"),
            Geometry::FlatTorus { dim },
            ids,
            points,
            vec![inj; total],
        )
    }

    /// Uniform random samples on the flat torus.
    pub fn flat_torus_random(dim: usize, samples: usize, inj: f64, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points = (0..samples)
            .map(|_| (0..dim).map(|_| rng.gen::<f64>()).collect())
            .collect();
        let ids = seeded_ids(samples, seed);
        MetricSampleSpace::new(
            &format!("torus{dim}-random"),
            Geometry::FlatTorus { dim },
            ids,
            points,
            vec![inj; samples],
        )
    }

    /// Uniform samples (for hyperbolic area) of the disk of hyperbolic
    /// radius `radius` about the origin, with the synthetic 1/2-Lipschitz
    /// profile `i(x) = min(1, 1/4 + (radius − ρ(x))/2)`.
    pub fn poincare_patch(samples: usize, radius: f64, seed: u64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::Domain("patch radius must be positive".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut points = Vec::with_capacity(samples);
        let mut inj = Vec::with_capacity(samples);
        for _ in 0..samples {
            let u: f64 = rng.gen();
            let rho = (1.0 + u * (radius.cosh() - 1.0)).acosh();
            let phi = rng.gen::<f64>() * std::f64::consts::TAU;
            let r = (rho / 2.0).tanh();
            points.push(vec![r * phi.cos(), r * phi.sin()]);
            inj.push(0.25 + (radius - rho) / 2.0);
        }
        let ids = seeded_ids(samples, seed);
        MetricSampleSpace::new("poincare-patch", Geometry::PoincareDisk, ids, points, inj)
    }

    /// Named presets: `torus2` (100×100 grid, inj 1/2), `torus2-random`,
    /// `torus3` (20³ grid), `poincare`.
    pub fn preset(name: &str, samples: usize, seed: u64) -> Result<Self> {
        match name {
            "torus2" => {
                let side = (samples as f64).sqrt().round() as usize;
                if side * side != samples {
                    return Err(Error::Domain(format!(
                        "torus2 needs a square sample count, got {samples}"
                    )));
                }
                MetricSampleSpace::flat_torus_grid(2, side, 0.5, seed)
            }
            "torus2-random" => MetricSampleSpace::flat_torus_random(2, samples, 0.5, seed),
            "torus3" => {
                let side = (samples as f64).cbrt().round() as usize;
                if side * side * side != samples {
                    return Err(Error::Domain(format!(
                        "torus3 needs a cube sample count, got {samples}"
                    )));
                }
                MetricSampleSpace::flat_torus_grid(3, side, 0.5, seed)
            }
            "poincare" => MetricSampleSpace::poincare_patch(samples, 2.0, seed),
            _ => Err(Error::Domain(format!(
                "unknown space preset '{name}' (torus2, torus2-random, torus3, poincare)"
            ))),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dist(&self, a: usize, b: usize) -> f64 {
        self.geometry.dist(&self.points[a], &self.points[b])
    }

    /// Indices in increasing identifier order.
    pub fn order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by_key(|&i| self.ids[i]);
        idx
    }

    /// Spot-checks the metric axioms and the 1-Lipschitz property of i on
    /// `pairs` seeded random pairs (triples for the triangle inequality).
    pub fn spot_check(&self, pairs: usize, seed: u64) -> SpaceCheck {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.len();
        let mut check = SpaceCheck {
            samples: pairs,
            symmetric: true,
            zero_diagonal: true,
            triangle: true,
            lipschitz: true,
        };
        if n == 0 {
            return check;
        }
        for _ in 0..pairs {
            let (a, b, c) = (
                rng.gen_range(0..n),
                rng.gen_range(0..n),
                rng.gen_range(0..n),
            );
            let (ab, ba, bc, ac) = (
                self.dist(a, b),
                self.dist(b, a),
                self.dist(b, c),
                self.dist(a, c),
            );
            check.symmetric &= (ab - ba).abs() <= 1e-12 * (1.0 + ab);
            check.zero_diagonal &= self.dist(a, a) <= 1e-12;
            check.triangle &= ac <= ab + bc + 1e-12 * (1.0 + ac);
            check.lipschitz &= (self.inj[a] - self.inj[b]).abs() <= ab + 1e-12;
        }
        check
    }
}

fn seeded_ids(n: usize, seed: u64) -> Vec<u64> {
    let mut ids: Vec<u64> = (0..n as u64).collect();
    ids.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    ids
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpaceCheck {
    pub samples: usize,
    pub symmetric: bool,
    pub zero_diagonal: bool,
    pub triangle: bool,
    pub lipschitz: bool,
}

impl SpaceCheck {
    pub fn ok(&self) -> bool {
        self.symmetric && self.zero_diagonal && self.triangle && self.lipschitz
    }
}

fn separated(space: &MetricSampleSpace, x: usize, y: usize) -> bool {
    space.dist(x, y) >= (space.inj[x] + space.inj[y]) / 16.0
}

/// Greedy maximal packing: scan in identifier order, keep a point when its
/// `i/16` ball misses every kept one. Returns sample indices.
pub fn greedy_packing(space: &MetricSampleSpace) -> Vec<usize> {
    let mut centers: Vec<usize> = Vec::new();
    for i in space.order() {
        if centers.iter().all(|&c| separated(space, i, c)) {
            centers.push(i);
        }
    }
    centers
}

/// Whether `centers` is a packing and no further sample can be added.
pub fn verify_packing(space: &MetricSampleSpace, centers: &[usize]) -> (bool, bool) {
    let packing = centers
        .par_iter()
        .enumerate()
        .all(|(k, &x)| centers[k + 1..].iter().all(|&y| separated(space, x, y)));
    let chosen: BTreeSet<usize> = centers.iter().copied().collect();
    let maximal = (0..space.len())
        .into_par_iter()
        .filter(|i| !chosen.contains(i))
        .all(|i| centers.iter().any(|&c| !separated(space, i, c)));
    (packing, maximal)
}

/// Values of the covering argument at an uncovered sample y and its nearest
/// packing conflict x.
#[derive(Clone, Debug, Serialize)]
pub struct UncoveredPoint {
    pub sample: usize,
    pub nearest_conflict: Option<usize>,
    pub dist: f64,
    pub i_x: f64,
    pub i_y: f64,
    /// `d(x,y) < (i(x)+i(y))/16`.
    pub conflict: bool,
    /// `i(y) < (17/15) i(x)`.
    pub lipschitz_step: bool,
    /// `d(x,y) < (2/15) i(x)`.
    pub distance_step: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverReport {
    pub samples: usize,
    pub covered: usize,
    pub coverage: f64,
    pub uncovered: Vec<UncoveredPoint>,
}

/// Fraction of samples lying in some `B(x, i(x)/5)`, x a center.
pub fn cover_check(space: &MetricSampleSpace, centers: &[usize]) -> CoverReport {
    let in_ball = |y: usize, x: usize| space.dist(x, y) < space.inj[x] / 5.0;
    let uncovered_idx: Vec<usize> = (0..space.len())
        .into_par_iter()
        .filter(|&y| !centers.iter().any(|&x| in_ball(y, x)))
        .collect();
    let uncovered = uncovered_idx
        .iter()
        .map(|&y| {
            let near = centers
                .iter()
                .copied()
                .filter(|&x| !separated(space, x, y))
                .min_by(|&a, &b| space.dist(a, y).total_cmp(&space.dist(b, y)));
            match near {
                Some(x) => {
                    let d = space.dist(x, y);
                    UncoveredPoint {
                        sample: y,
                        nearest_conflict: Some(x),
                        dist: d,
                        i_x: space.inj[x],
                        i_y: space.inj[y],
                        conflict: d < (space.inj[x] + space.inj[y]) / 16.0,
                        lipschitz_step: space.inj[y] < 17.0 / 15.0 * space.inj[x],
                        distance_step: d < 2.0 / 15.0 * space.inj[x],
                    }
                }
                None => UncoveredPoint {
                    sample: y,
                    nearest_conflict: None,
                    dist: f64::INFINITY,
                    i_x: f64::NAN,
                    i_y: space.inj[y],
                    conflict: false,
                    lipschitz_step: false,
                    distance_step: false,
                },
            }
        })
        .collect();
    let n = space.len();
    let covered = n - uncovered_idx.len();
    CoverReport {
        samples: n,
        covered,
        coverage: if n == 0 {
            1.0
        } else {
            covered as f64 / n as f64
        },
        uncovered,
    }
}

/// Nerve of the cover, with simplices as sorted lists of center positions
/// (indices into the center list).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NerveComplex {
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
    /// Simplices of dimension 2..=dim_cap with a witness sample index.
    pub simplices: Vec<(Vec<usize>, usize)>,
    pub dim_cap: usize,
}

impl NerveComplex {
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices.len()];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// `(degree, number of vertices)` histogram.
    pub fn degree_histogram(&self) -> Vec<(usize, usize)> {
        let mut h = BTreeMap::new();
        for d in self.degrees() {
            *h.entry(d).or_insert(0) += 1;
        }
        h.into_iter().collect()
    }

    /// Simplex counts by dimension, from 0.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![self.vertices.len(), self.edges.len()];
        for (s, _) in &self.simplices {
            let d = s.len() - 1;
            if f.len() <= d {
                f.resize(d + 1, 0);
            }
            f[d] += 1;
        }
        f
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(d, &n)| if d % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Every face of every simplex is present.
    pub fn is_downward_closed(&self) -> bool {
        let edges: BTreeSet<(usize, usize)> = self.edges.iter().copied().collect();
        let higher: BTreeSet<&[usize]> = self.simplices.iter().map(|(s, _)| s.as_slice()).collect();
        self.simplices.iter().all(|(s, _)| {
            (0..s.len()).all(|skip| {
                let face: Vec<usize> = s
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != skip)
                    .map(|(_, &v)| v)
                    .collect();
                if face.len() == 2 {
                    edges.contains(&(face[0], face[1]))
                } else {
                    higher.contains(face.as_slice())
                }
            })
        })
    }
}

fn subsets(items: &[usize], size: usize, out: &mut Vec<Vec<usize>>) {
    fn go(
        items: &[usize],
        size: usize,
        start: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for k in start..items.len() {
            cur.push(items[k]);
            go(items, size, k + 1, cur, out);
            cur.pop();
        }
    }
    go(items, size, 0, &mut Vec::new(), out);
}

/// Edges by the exact test `d(x,y) < (i(x)+i(y))/5`; higher simplices from
/// sample points lying in all member balls. Witness sampling can miss
/// simplices but never invents one.
pub fn build_nerve(
    space: &MetricSampleSpace,
    centers: &[usize],
    dim_cap: usize,
) -> Result<NerveComplex> {
    if dim_cap > 3 {
        return Err(Error::Domain(format!(
            "dim_cap must be at most 3, got {dim_cap}"
        )));
    }
    let n = centers.len();
    let edges: Vec<(usize, usize)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|a| {
            (a + 1..n)
                .filter(move |&b| {
                    let (x, y) = (centers[a], centers[b]);
                    space.dist(x, y) < (space.inj[x] + space.inj[y]) / 5.0
                })
                .map(move |b| (a, b))
        })
        .collect();
    let mut simplices: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    if dim_cap >= 2 {
        let memberships: Vec<Vec<usize>> = (0..space.len())
            .into_par_iter()
            .map(|y| {
                (0..n)
                    .filter(|&a| space.dist(centers[a], y) < space.inj[centers[a]] / 5.0)
                    .collect()
            })
            .collect();
        for (y, members) in memberships.iter().enumerate() {
            for size in 3..=dim_cap + 1 {
                let mut subs = Vec::new();
                subsets(members, size, &mut subs);
                for s in subs {
                    simplices.entry(s).or_insert(y);
                }
            }
        }
    }
    Ok(NerveComplex {
        vertices: centers.to_vec(),
        edges,
        simplices: simplices.into_iter().collect(),
        dim_cap,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeBound {
    pub max_degree: usize,
    /// `⌊V(4/5) / V(2/15)⌋` for the space's geometry.
    pub theoretical_bound: u64,
    pub volume_ratio: f64,
    pub holds: bool,
}

/// Volume ratio behind the degree bound. Euclidean: `6^dim`. The hyperbolic
/// ratios grow with the radius, so `i ≤ 1` makes radius 1 the worst case.
pub fn degree_volume_ratio(geometry: &Geometry) -> f64 {
    geometry.ball_volume(4.0 / 5.0) / geometry.ball_volume(2.0 / 15.0)
}

/// The hyperbolic 3-space constant `V(4/5)/V(2/15)`.
pub fn hyperbolic3_degree_ratio() -> f64 {
    nerve_degree_constant()
}

pub fn degree_bound(space: &MetricSampleSpace, nerve: &NerveComplex) -> DegreeBound {
    let ratio = degree_volume_ratio(&space.geometry);
    // Guard the exact integer ratios of the flat case against rounding down.
    let bound = (ratio + 1e-9).floor() as u64;
    let max_degree = nerve.max_degree();
    DegreeBound {
        max_degree,
        theoretical_bound: bound,
        volume_ratio: ratio,
        holds: max_degree as u64 <= bound,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NerveRun {
    pub space: String,
    pub samples: usize,
    pub seed: u64,
    pub centers: usize,
    pub packing_exact: bool,
    pub packing_maximal: bool,
    pub space_check: SpaceCheck,
    pub cover: CoverReport,
    pub f_vector: Vec<usize>,
    pub euler_characteristic: i64,
    pub connected: bool,
    pub downward_closed: bool,
    pub degree: DegreeBound,
    pub degree_histogram: Vec<(usize, usize)>,
}

/// Packing, cover check, nerve and degree bound in one pass.
pub fn run(
    space: &MetricSampleSpace,
    seed: u64,
    dim_cap: usize,
) -> Result<(NerveRun, NerveComplex)> {
    let centers = greedy_packing(space);
    let (packing_exact, packing_maximal) = verify_packing(space, &centers);
    let cover = cover_check(space, &centers);
    let nerve = build_nerve(space, &centers, dim_cap)?;
    let report = NerveRun {
        space: space.name.clone(),
        samples: space.len(),
        seed,
        centers: centers.len(),
        packing_exact,
        packing_maximal,
        space_check: space.spot_check(1000, seed),
        cover,
        f_vector: nerve.f_vector(),
        euler_characteristic: nerve.euler_characteristic(),
        connected: nerve.is_connected(),
        downward_closed: nerve.is_downward_closed(),
        degree: degree_bound(space, &nerve),
        degree_histogram: nerve.degree_histogram(),
    };
    Ok((report, nerve))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_spaces() {
        let one = MetricSampleSpace::euclidean(vec![vec![0.0, 0.0]], vec![1.0]).unwrap();
        assert_eq!(greedy_packing(&one), vec![0]);
        let nerve = build_nerve(&one, &[0], 2).unwrap();
        assert_eq!(nerve.max_degree(), 0);
        let two =
            MetricSampleSpace::euclidean(vec![vec![0.0], vec![10.0]], vec![1.0, 1.0]).unwrap();
        let c = greedy_packing(&two);
        assert_eq!(c, vec![0, 1]);
        assert!(build_nerve(&two, &c, 1).unwrap().edges.is_empty());
    }

    #[test]
    fn torus_distance_wraps() {
        let g = Geometry::FlatTorus { dim: 2 };
        assert!((g.dist(&[0.05, 0.5], &[0.95, 0.5]) - 0.1).abs() < 1e-12);
    }

    #[test]
    fn ratios() {
        assert!((degree_volume_ratio(&Geometry::FlatTorus { dim: 2 }) - 36.0).abs() < 1e-9);
        assert!((hyperbolic3_degree_ratio() - 244.52).abs() < 0.01);
    }

    #[test]
    fn removing_centers_breaks_coverage() {
        let two =
            MetricSampleSpace::euclidean(vec![vec![0.0], vec![10.0]], vec![1.0, 1.0]).unwrap();
        let rep = cover_check(&two, &[0]);
        assert_eq!(rep.coverage, 0.5);
        assert_eq!(rep.uncovered[0].nearest_conflict, None);

        // On the torus the 1/5-balls overlap heavily, so cut out a hole.
        let space = MetricSampleSpace::flat_torus_grid(2, 40, 0.5, 3).unwrap();
        let centers = greedy_packing(&space);
        assert_eq!(cover_check(&space, &centers).coverage, 1.0);
        let hole = centers[0];
        let kept: Vec<usize> = centers
            .iter()
            .copied()
            .filter(|&c| space.dist(c, hole) > 0.15)
            .collect();
        assert!(cover_check(&space, &kept).coverage < 1.0);
    }

    #[test]
    fn poincare_patch_is_covered() {
        let space = MetricSampleSpace::poincare_patch(3000, 2.0, 11).unwrap();
        assert!(space.spot_check(500, 1).ok());
        let (rep, _) = run(&space, 11, 2).unwrap();
        assert!(rep.packing_exact && rep.packing_maximal);
        assert_eq!(rep.cover.coverage, 1.0);
        assert!(rep.downward_closed);
    }
}
