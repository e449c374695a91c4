use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(
    name = "arlat",
    version,
    about = "Number fields, trees, volumes and orbital integrals for arithmetic lattices"
)]
pub struct Cli {
    /// key=value file whose entries fill in flags not given on the command line.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    pub output: Output,
    /// Seed for sampled procedures; required by `nerve run` and `conjcount kl --candidates`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum, env = "ARLAT_PRECISION", default_value_t = Precision::F64)]
    pub precision: Precision,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Output {
    Json,
    Csv,
    Pretty,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Precision {
    F64,
    Dd,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Number-field invariants.
    Nf {
        #[command(subcommand)]
        op: NfOp,
    },
    /// Mahler measures.
    Mahler {
        #[command(subcommand)]
        op: MahlerOp,
    },
    /// Equidistribution sweeps of Galois conjugates.
    Bilu {
        #[command(subcommand)]
        op: BiluOp,
    },
    /// Bruhat-Tits tree fixed sets and local orbital integrals.
    Tree {
        #[command(subcommand)]
        op: TreeOp,
    },
    /// Representation zeta functions.
    Repzeta {
        #[command(subcommand)]
        op: RepzetaOp,
    },
    /// Measure ratios, covolumes and torus volumes.
    Volume {
        #[command(subcommand)]
        op: VolumeOp,
    },
    /// Archimedean geometry and orbital integrals.
    Geom {
        #[command(subcommand)]
        op: GeomOp,
    },
    /// Nerve of a ball cover.
    Nerve {
        #[command(subcommand)]
        op: NerveOp,
    },
    /// Conjugacy-counting diagnostics.
    Conjcount {
        #[command(subcommand)]
        op: ConjcountOp,
    },
    /// Run the acceptance battery.
    Suite(SuiteArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct PolyArgs {
    /// `x^2 - x - 1` or a coefficient list `[-1,-1,1]`, lowest degree first.
    #[arg(long, allow_hyphen_values = true)]
    pub poly: String,
    /// Declare Z[x]/(f) maximal, allowing splitting at primes dividing the discriminant.
    #[arg(long)]
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub maximal: bool,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NfOp {
    /// Degree, signature, discriminant and embeddings.
    Info(PolyArgs),
    Split {
        #[command(flatten)]
        #[serde(flatten)]
        poly: PolyArgs,
        #[arg(long)]
        p: u64,
    },
    /// Truncated Euler product with its tail bound.
    Zeta {
        #[command(flatten)]
        #[serde(flatten)]
        poly: PolyArgs,
        #[arg(long)]
        s: f64,
        #[arg(long, default_value_t = 10000.0)]
        cutoff: f64,
    },
    /// Number of prime ideals of norm at most x.
    Primes {
        #[command(flatten)]
        #[serde(flatten)]
        poly: PolyArgs,
        #[arg(long)]
        x: f64,
    },
    /// L(1, χ_d) for a fundamental discriminant.
    Lvalue {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long, default_value_t = 1_000_000)]
        terms: u64,
    },
    DiscBound {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        r2: usize,
        #[arg(long, value_enum, default_value_t = Flavor::Minkowski)]
        flavor: Flavor,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    Minkowski,
    Odlyzko60,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MahlerOp {
    /// Measure, class, N(1 − α) and discrepancy.
    Measure(PolyArgs),
    Classify(PolyArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    /// x^n − a
    Binomial,
    /// Φ_n
    Cyclotomic,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BiluOp {
    Sweep {
        #[arg(long, value_enum, default_value_t = FamilyKind::Binomial)]
        family: FamilyKind,
        #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, value_delimiter = ',', default_value = "8,16,32,64,128,256")]
        indices: Vec<u64>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TorusCase {
    Split,
    Unramified,
    Tame,
    Wild,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stabilizer {
    Vertex,
    Edge,
}

#[derive(Args, Debug, Serialize)]
pub struct ClassArgs {
    #[arg(long, value_enum)]
    pub case: TorusCase,
    #[arg(long)]
    pub q: u64,
    /// v(Δ(γ)).
    #[arg(long)]
    pub vdelta: i64,
    #[arg(long, value_enum, default_value_t = Stabilizer::Vertex)]
    pub stabilizer: Stabilizer,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TreeOp {
    /// Brute-force fixed set of a matrix in a ball about the base vertex.
    Fixed {
        #[arg(long)]
        p: u64,
        /// `a,b;c,d` with integer or fractional entries.
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        #[arg(long, default_value_t = 8)]
        radius: u32,
    },
    /// Closed-form transversal count.
    Count(ClassArgs),
    /// Orbital integral of the unit-group indicator.
    Orbital(ClassArgs),
    /// Partial sum of the tree weight series and its limit.
    Weight {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
    },
    /// Brute-force geometry of a preset element against the closed forms.
    Check {
        #[arg(long, value_enum)]
        case: TorusCase,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        vdelta: u32,
        #[arg(long, default_value_t = 8)]
        radius: u32,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalTypeArg {
    PglVertex,
    PglEdge,
    Ramified,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RepzetaOp {
    /// Σ m·d² against |SL(2, O/𝔭^n)| level by level.
    Check {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        levels: u32,
    },
    /// Degree multiset at one level.
    Dims {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        level: u32,
    },
    Carayol {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        c: u32,
    },
    /// Minimal dimension and special zeta bounds for a local type.
    Bound {
        #[arg(long = "type", value_enum)]
        local_type: LocalTypeArg,
        #[arg(long)]
        q: u64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PlaceArg {
    Real,
    Complex,
    Hamilton,
    Vertex,
    Edge,
    Ramified,
}

#[derive(Args, Debug, Serialize)]
pub struct SpecArgs {
    /// Lattice spec as JSON.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec: Option<PathBuf>,
    /// Shortcut for k = Q with these ramified primes.
    #[arg(long, value_delimiter = ',', conflicts_with = "spec")]
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub ram: Vec<u64>,
    /// [U:V] for the `--ram` shortcut.
    #[arg(long, default_value_t = 1, conflicts_with = "spec")]
    pub index: u64,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VolumeOp {
    /// Tamagawa against standard measure, with independent oracles.
    Ratios {
        #[arg(long)]
        all: bool,
        #[arg(long, value_enum, conflicts_with = "all")]
        #[serde(skip_serializing_if = "Option::is_none")]
        place: Option<PlaceArg>,
        /// Residue field size for the p-adic rows.
        #[arg(long, default_value_t = 3)]
        q: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    Covolume(SpecArgs),
    /// Both sides of the volume lower bound.
    Certificate {
        #[command(flatten)]
        #[serde(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 0.2)]
        regulator_floor: f64,
    },
    /// Volume of the norm-one torus of Q(√d), by two routes.
    Torus {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
    },
    /// Volume of a hyperbolic 3-ball.
    Ball {
        #[arg(long)]
        r: f64,
    },
    NerveConstant,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitalType {
    Split,
    Elliptic,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GeomOp {
    /// ‖1 − Ad(y⁻¹x)‖_F. Matrices as `a,b;c,d`, entries like `2`, `1+0.5i`.
    Distance {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// Eigenvalue ratio, Weyl discriminant and class type.
    Invariants {
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[arg(long, allow_hyphen_values = true)]
        #[serde(skip_serializing_if = "Option::is_none")]
        min_poly: Option<String>,
    },
    /// Whether the conjugacy class meets the ball of radius r about 1.
    MeetsBall {
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[arg(long)]
        r: f64,
    },
    /// Closed-form orbital integral of a radial bump.
    Orbital {
        #[arg(long = "type", value_enum)]
        kind: OrbitalType,
        /// Eigenvalue ratio |a/b| of a split element.
        #[arg(long)]
        #[serde(skip_serializing_if = "Option::is_none")]
        ratio: Option<f64>,
        /// Argument of a/b; makes the split element loxodromic.
        #[arg(long, allow_hyphen_values = true)]
        #[serde(skip_serializing_if = "Option::is_none")]
        arg: Option<f64>,
        /// Rotation angle of an elliptic element.
        #[arg(long, allow_hyphen_values = true)]
        #[serde(skip_serializing_if = "Option::is_none")]
        angle: Option<f64>,
        /// Radius of the bump's support.
        #[arg(long, default_value_t = 4.0)]
        bump: f64,
        #[arg(long)]
        #[serde(skip_serializing_if = "Option::is_none")]
        plateau: Option<f64>,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Also run the brute-force quadrature.
        #[arg(long)]
        compare: bool,
    },
    /// Closed forms against brute force on the preset grid.
    Presets {
        #[arg(long, default_value_t = 4.0)]
        bump: f64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NerveOp {
    /// Greedy packing, cover check, nerve and degree bound.
    Run {
        /// torus2, torus2-random, torus3 or poincare.
        #[arg(long, default_value = "torus2")]
        space: String,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 2)]
        dim_cap: usize,
        /// Leave the simplices out of the JSON.
        #[arg(long)]
        summary_only: bool,
    },
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConjcountOp {
    /// |tr α| / N, exactly.
    Trace(PolyArgs),
    /// Normalized trace against (log N / N)^{1/2} across a family.
    Sweep {
        #[arg(long, value_enum, default_value_t = FamilyKind::Cyclotomic)]
        family: FamilyKind,
        #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
        a: i64,
        /// Defaults to the odd primes up to 101 (cyclotomic) or 2..64 (binomial).
        #[arg(long, value_delimiter = ',')]
        #[serde(skip_serializing_if = "Vec::is_empty")]
        indices: Vec<u64>,
        #[arg(long, default_value_t = 1.0)]
        mahler_cap: f64,
    },
    /// Gram matrix of powers of a Salem number in its trace field.
    Gram {
        /// JSON `{"name", "lambda_poly", "exponents"}`; defaults to Lehmer's number.
        #[arg(long)]
        #[serde(skip_serializing_if = "Option::is_none")]
        family: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        #[serde(skip_serializing_if = "Vec::is_empty")]
        exponents: Vec<u32>,
    },
    /// (Cn/A²)^{CA²}, optionally against a greedy count on random vectors.
    Kl {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: f64,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        /// Random unit vectors to draw for the greedy count (needs --seed).
        #[arg(long, default_value_t = 0)]
        candidates: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileArg {
    Quick,
    Full,
}

#[derive(Args, Debug, Serialize)]
pub struct SuiteArgs {
    #[arg(long, value_enum, default_value_t = ProfileArg::Quick)]
    pub profile: ProfileArg,
}
