use std::fs;
use std::path::Path;
use std::time::Instant;

use arlat::battery::{self, Profile};
use arlat::btree::{
    check_preset_geometry, fixed_count_closed_form, fixed_set_bruteforce, orbital_integral_unit,
    tree_weight_limit, tree_weight_partial_sum, LocalClassData, StabilizerKind, TorusType,
};
use arlat::conjcount::{
    gram_diagnostics, kl_packing_bound, lehmer_power_vectors, normalized_trace, packing_check,
    salem_power_vectors, trace_decay_csv, trace_decay_sweep,
};
use arlat::geom::{
    class_invariants, class_min_distance, compare_orbital, frobenius_distance, orbital_elliptic,
    orbital_presets, orbital_split, FieldKind, MobiusElement, RadialBump,
};
use arlat::mahler::{
    bilu_discrepancy, classify, dobrowolski_floor, family_csv, family_sweep, mahler_measure,
    norm_one_minus, AlgebraicNumberFamily, RootMeasure,
};
use arlat::nerve::{self, MetricSampleSpace};
use arlat::numfield::{
    dirichlet_l_quadratic, discriminant_lower_bound, is_prime, trace_polynomial, DiscBoundFlavor,
    MaximalityOverride,
};
use arlat::repzeta::{
    carayol_dim, jz_level_multiset, min_dim_bound, special_zeta_local_bound,
    special_zeta_local_bound_exact, sum_of_squares_check, LocalType,
};
use arlat::volume::{
    all_ratio_reports, covolume, hyperbolic_ball_volume, local_ratio_complex_oracle,
    local_ratio_hamilton, local_ratio_real_oracle, nerve_degree_constant, padic_ratio_report,
    torus_volume_quadratic, volume_lower_bound_certificate, LatticeSpec, PadicKind,
};
use arlat::{DoubleDouble, Error, IntPolynomial, NumberField, RealScalar, Result};
use num_complex::Complex;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::args::*;
use crate::render;

/// Seed for the sampled property checks of `suite` when none is given.
pub const DEFAULT_SUITE_SEED: u64 = 20240601;

pub struct Report {
    pub command: String,
    /// Module path of the operation run.
    pub op: &'static str,
    pub params: Value,
    pub result: Value,
    pub csv: Option<String>,
    pub pretty: Option<String>,
    /// False when the operation ran but its check failed.
    pub ok: bool,
}

fn report<T: Serialize>(command: &str, op: &'static str, params: Value, result: &T) -> Report {
    Report {
        command: command.into(),
        op,
        params,
        result: serde_json::to_value(result).expect("reports serialize"),
        csv: None,
        pretty: None,
        ok: true,
    }
}

fn params<T: Serialize>(p: &T) -> Value {
    serde_json::to_value(p).expect("arguments serialize")
}

fn parse_poly(s: &str) -> Result<IntPolynomial> {
    s.parse()
}

fn field_of(p: &PolyArgs) -> Result<NumberField> {
    let f = parse_poly(&p.poly)?;
    let m = if p.maximal {
        MaximalityOverride::Maximal
    } else {
        MaximalityOverride::None
    };
    NumberField::new(&f.to_string(), f, m)
}

fn need_seed(seed: Option<u64>, what: &str) -> Result<u64> {
    seed.ok_or_else(|| Error::Parse(format!("{what} is sampled and needs --seed")))
}

pub fn dispatch(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Nf { op } => nf(op, cli.precision),
        Command::Mahler { op } => mahler(op),
        Command::Bilu { op } => bilu(op),
        Command::Tree { op } => tree(op),
        Command::Repzeta { op } => repzeta(op),
        Command::Volume { op } => volume(op),
        Command::Geom { op } => geom(op, cli.precision),
        Command::Nerve { op } => nerve_cmd(op, cli.seed),
        Command::Conjcount { op } => conjcount(op, cli.seed),
        Command::Suite(a) => suite(a, cli.seed),
    }
}

fn nf(op: &NfOp, precision: Precision) -> Result<Report> {
    let p = params(op);
    Ok(match op {
        NfOp::Info(a) => {
            let k = field_of(a)?;
            let emb: Vec<[f64; 2]> = k.embeddings.iter().map(|z| [z.re, z.im]).collect();
            let r = json!({
                "poly": k.min_poly.to_string(),
                "degree": k.degree,
                "signature": [k.signature.0, k.signature.1],
                "poly_discriminant": k.poly_discriminant.to_string(),
                "embeddings": emb,
                "maximality": k.maximality,
            });
            report("nf info", "arlat::numfield::NumberField::new", p, &r)
        }
        NfOp::Split { poly, p: prime } => {
            if !is_prime(*prime) {
                return Err(Error::Domain(format!("{prime} is not prime")));
            }
            let r = field_of(poly)?.prime_splitting(*prime)?;
            report(
                "nf split",
                "arlat::numfield::NumberField::prime_splitting",
                p,
                &r,
            )
        }
        NfOp::Zeta { poly, s, cutoff } => {
            let k = field_of(poly)?;
            let z = match precision {
                Precision::F64 => k.dedekind_zeta::<f64>(*s, *cutoff)?,
                Precision::Dd => k.dedekind_zeta::<DoubleDouble>(*s, *cutoff)?,
            };
            report(
                "nf zeta",
                "arlat::numfield::NumberField::dedekind_zeta",
                p,
                &z,
            )
        }
        NfOp::Primes { poly, x } => {
            let r = field_of(poly)?.prime_count(*x)?;
            report(
                "nf primes",
                "arlat::numfield::NumberField::prime_count",
                p,
                &r,
            )
        }
        NfOp::Lvalue { d, terms } => {
            let r = dirichlet_l_quadratic(*d, *terms)?;
            report("nf lvalue", "arlat::numfield::dirichlet_l_quadratic", p, &r)
        }
        NfOp::DiscBound { n, r2, flavor } => {
            let fl = match flavor {
                Flavor::Minkowski => DiscBoundFlavor::Minkowski,
                Flavor::Odlyzko60 => DiscBoundFlavor::Odlyzko60,
            };
            let r = json!({ "bound": discriminant_lower_bound(*n, *r2, fl)? });
            report(
                "nf disc-bound",
                "arlat::numfield::discriminant_lower_bound",
                p,
                &r,
            )
        }
    })
}

fn mahler(op: &MahlerOp) -> Result<Report> {
    let p = params(op);
    Ok(match op {
        MahlerOp::Measure(a) => {
            let f = parse_poly(&a.poly)?;
            let r = json!({
                "poly": f.to_string(),
                "degree": f.degree(),
                "mahler": mahler_measure(&f)?,
                "class": classify(&f)?,
                "norm_one_minus": norm_one_minus(&f)?.to_string(),
                "discrepancy": bilu_discrepancy(&RootMeasure::of(&f)?)?,
                "dobrowolski_floor": dobrowolski_floor(f.degree() as u64).ok(),
            });
            report("mahler measure", "arlat::mahler::mahler_measure", p, &r)
        }
        MahlerOp::Classify(a) => {
            let f = parse_poly(&a.poly)?;
            report(
                "mahler classify",
                "arlat::mahler::classify",
                p,
                &json!({ "class": classify(&f)? }),
            )
        }
    })
}

fn family(kind: FamilyKind, a: i64, indices: &[u64]) -> AlgebraicNumberFamily {
    match kind {
        FamilyKind::Binomial => AlgebraicNumberFamily::Binomial {
            a,
            indices: indices.iter().map(|&n| n as usize).collect(),
        },
        FamilyKind::Cyclotomic => AlgebraicNumberFamily::Cyclotomic {
            indices: indices.to_vec(),
        },
    }
}

fn bilu(op: &BiluOp) -> Result<Report> {
    let p = params(op);
    let BiluOp::Sweep {
        family: kind,
        a,
        indices,
    } = op;
    if indices.iter().any(|&n| n == 0) {
        return Err(Error::Domain("family indices must be positive".into()));
    }
    let rows = family_sweep(&family(*kind, *a, indices))?;
    let mut r = report("bilu sweep", "arlat::mahler::family_sweep", p, &rows);
    r.csv = Some(family_csv(&rows));
    Ok(r)
}

fn torus(c: TorusCase) -> TorusType {
    match c {
        TorusCase::Split => TorusType::Split,
        TorusCase::Unramified => TorusType::Unramified,
        TorusCase::Tame => TorusType::TamelyRamified,
        TorusCase::Wild => TorusType::WildlyRamified,
    }
}

fn class_data(a: &ClassArgs) -> LocalClassData {
    let st = match a.stabilizer {
        Stabilizer::Vertex => StabilizerKind::Vertex,
        Stabilizer::Edge => StabilizerKind::Edge,
    };
    LocalClassData::new(a.q, a.vdelta, torus(a.case), st)
}

fn tree(op: &TreeOp) -> Result<Report> {
    let p = params(op);
    Ok(match op {
        TreeOp::Fixed {
            p: prime,
            matrix,
            radius,
        } => {
            let g = arlat::GL2Rational::parse(matrix)?;
            let fs = fixed_set_bruteforce(&g, *prime, *radius)?;
            let r = json!({
                "vertices": fs.vertices,
                "edges": fs.edges,
                "counts": {
                    "vertices": fs.vertices.len(),
                    "edges": fs.edges.len(),
                    "ball_vertices": fs.ball_vertices,
                    "connected": fs.is_connected(),
                },
            });
            let mut rep = report("tree fixed", "arlat::btree::fixed_set_bruteforce", p, &r);
            rep.pretty = Some(render::pretty(&r["counts"]));
            rep
        }
        TreeOp::Count(a) => {
            let c = class_data(a);
            let r = json!({ "class": c, "count": fixed_count_closed_form(&c)?.to_string() });
            report("tree count", "arlat::btree::fixed_count_closed_form", p, &r)
        }
        TreeOp::Orbital(a) => {
            let c = class_data(a);
            let r = orbital_integral_unit(&c)?;
            report("tree orbital", "arlat::btree::orbital_integral_unit", p, &r)
        }
        TreeOp::Weight { p: prime, n } => {
            let s = tree_weight_partial_sum(*prime, *n);
            let l = tree_weight_limit(*prime);
            let tail = &l - &s;
            let r = json!({
                "partial_sum": s.to_string(),
                "limit": l.to_string(),
                "tail": tail.to_string(),
                "tail_f64": num_traits::ToPrimitive::to_f64(&tail),
            });
            report(
                "tree weight",
                "arlat::btree::tree_weight_partial_sum",
                p,
                &r,
            )
        }
        TreeOp::Check {
            case,
            q,
            vdelta,
            radius,
        } => {
            let c = check_preset_geometry(torus(*case), *q, *vdelta, *radius)?;
            let mut rep = report("tree check", "arlat::btree::check_preset_geometry", p, &c);
            rep.ok = c.ok();
            rep
        }
    })
}

fn repzeta(op: &RepzetaOp) -> Result<Report> {
    let p = params(op);
    Ok(match op {
        RepzetaOp::Check { q, levels } => {
            let c = sum_of_squares_check(*q, *levels)?;
            let ledger = c.ledger();
            let r = json!({ "q": c.q, "levels": c.levels, "rows": c.rows, "ok": c.ok, "ledger": ledger });
            let mut rep = report(
                "repzeta check",
                "arlat::repzeta::sum_of_squares_check",
                p,
                &r,
            );
            rep.csv = Some(render::csv(&r["rows"]));
            rep.pretty = Some(ledger);
            rep.ok = c.ok;
            rep
        }
        RepzetaOp::Dims { q, level } => {
            let m = jz_level_multiset(*q, *level)?;
            let r = json!({
                "level": m.level,
                "entries": m.entries.iter().map(|(d, k)| json!({"dimension": d.to_string(), "multiplicity": k.to_string()})).collect::<Vec<_>>(),
                "count": m.count().to_string(),
                "sum_of_squares": m.sum_of_squares().to_string(),
            });
            let mut rep = report("repzeta dims", "arlat::repzeta::jz_level_multiset", p, &r);
            rep.csv = Some(m.to_csv());
            rep
        }
        RepzetaOp::Carayol { q, c } => {
            let r = json!({ "dimension": carayol_dim(*q, *c)?.to_string() });
            report("repzeta carayol", "arlat::repzeta::carayol_dim", p, &r)
        }
        RepzetaOp::Bound { local_type, q } => {
            if !is_prime(*q) {
                return Err(Error::Domain(format!("{q} is not prime")));
            }
            let t = match local_type {
                LocalTypeArg::PglVertex => LocalType::PglVertex,
                LocalTypeArg::PglEdge => LocalType::PglEdge,
                LocalTypeArg::Ramified => LocalType::Ramified,
            };
            let (threshold, floor) = min_dim_bound(t, *q);
            let z = special_zeta_local_bound(t, *q);
            let r = json!({
                "threshold_dim": threshold,
                "floor": floor,
                "special_zeta_bound": z.value,
                "special_zeta_bound_exact": special_zeta_local_bound_exact(t, *q).to_string(),
                "valid_from_s": z.valid_from_s,
            });
            report("repzeta bound", "arlat::repzeta::min_dim_bound", p, &r)
        }
    })
}

fn lattice_spec(a: &SpecArgs) -> Result<LatticeSpec> {
    match &a.spec {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            LatticeSpec::from_json(&text)
        }
        None if a.ram.is_empty() => Err(Error::Parse("give --spec FILE or --ram p,q,...".into())),
        None => {
            let mut s = LatticeSpec::rationals(&a.ram);
            s.index_uv = a.index;
            Ok(s)
        }
    }
}

fn volume(op: &VolumeOp) -> Result<Report> {
    let p = params(op);
    Ok(match op {
        VolumeOp::Ratios { all, place, q, tol } => {
            let rows = match (all, place) {
                (true, _) => all_ratio_reports(*q, *tol)?,
                (false, Some(pl)) => vec![match pl {
                    PlaceArg::Real => local_ratio_real_oracle(*tol)?,
                    PlaceArg::Complex => local_ratio_complex_oracle(*tol)?,
                    PlaceArg::Hamilton => local_ratio_hamilton(),
                    PlaceArg::Vertex => padic_ratio_report(*q, PadicKind::Vertex)?,
                    PlaceArg::Edge => padic_ratio_report(*q, PadicKind::Edge)?,
                    PlaceArg::Ramified => padic_ratio_report(*q, PadicKind::Ramified)?,
                }],
                (false, None) => return Err(Error::Parse("give --all or --place".into())),
            };
            let mut rep = report(
                "volume ratios",
                "arlat::volume::all_ratio_reports",
                p,
                &rows,
            );
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        format!("{:?}", r.place_type),
                        r.ratio_expr.clone(),
                        format!("{:.12}", r.ratio),
                        format!("{:.12}", r.oracle_value),
                        format!("{:.3e}", r.discrepancy),
                    ]
                })
                .collect();
            let header: Vec<String> = ["place", "expr", "ratio", "oracle", "discrepancy"]
                .iter()
                .map(|s| s.to_string())
                .collect();
            rep.pretty = Some(
                table
                    .iter()
                    .map(|r| {
                        format!(
                            "{:<14} {:<16} {:>18} {:>18} {:>10}\n",
                            r[0], r[1], r[2], r[3], r[4]
                        )
                    })
                    .collect(),
            );
            rep.csv = Some(render::write_rows(&header, &table));
            rep
        }
        VolumeOp::Covolume(a) => {
            let r = covolume(&lattice_spec(a)?)?;
            report("volume covolume", "arlat::volume::covolume", p, &r)
        }
        VolumeOp::Certificate {
            spec,
            regulator_floor,
        } => {
            let r = volume_lower_bound_certificate(&lattice_spec(spec)?, *regulator_floor)?;
            report(
                "volume certificate",
                "arlat::volume::volume_lower_bound_certificate",
                p,
                &r,
            )
        }
        VolumeOp::Torus { d } => {
            let r = torus_volume_quadratic(*d)?;
            let mut rep = report(
                "volume torus",
                "arlat::volume::torus_volume_quadratic",
                p,
                &r,
            );
            rep.ok = r.consistent;
            rep
        }
        VolumeOp::Ball { r } => {
            let v = json!({ "volume": hyperbolic_ball_volume(*r)? });
            report(
                "volume ball",
                "arlat::volume::hyperbolic_ball_volume",
                p,
                &v,
            )
        }
        VolumeOp::NerveConstant => {
            let v = json!({ "ratio": nerve_degree_constant() });
            report(
                "volume nerve-constant",
                "arlat::volume::nerve_degree_constant",
                p,
                &v,
            )
        }
    })
}

fn parse_matrix(s: &str) -> Result<[Complex<f64>; 4]> {
    let entries: Vec<&str> = s
        .split(';')
        .flat_map(|row| row.split(','))
        .map(str::trim)
        .collect();
    if s.split(';').count() != 2 || entries.len() != 4 {
        return Err(Error::Parse(format!(
            "matrix `{s}` must look like `a,b;c,d`"
        )));
    }
    let mut m = [Complex::new(0.0, 0.0); 4];
    for (slot, e) in m.iter_mut().zip(&entries) {
        *slot = e
            .parse()
            .map_err(|_| Error::Parse(format!("bad matrix entry `{e}`")))?;
    }
    Ok(m)
}

fn mobius<S: RealScalar>(m: &[Complex<f64>; 4], complex: bool) -> Result<MobiusElement<S>> {
    let c = |z: Complex<f64>| Complex::new(S::from_f64(z.re), S::from_f64(z.im));
    if complex {
        MobiusElement::complex(c(m[0]), c(m[1]), c(m[2]), c(m[3]))
    } else {
        MobiusElement::real(
            S::from_f64(m[0].re),
            S::from_f64(m[1].re),
            S::from_f64(m[2].re),
            S::from_f64(m[3].re),
        )
    }
}

fn is_complex(ms: &[&[Complex<f64>; 4]]) -> bool {
    ms.iter().any(|m| m.iter().any(|z| z.im != 0.0))
}

fn distance_value<S: RealScalar>(x: &[Complex<f64>; 4], y: &[Complex<f64>; 4]) -> Result<Value> {
    let complex = is_complex(&[x, y]);
    let (gx, gy) = (mobius::<S>(x, complex)?, mobius::<S>(y, complex)?);
    Ok(json!({
        "distance": frobenius_distance(&gx, &gy).to_f64(),
        "field": if complex { FieldKind::Complex } else { FieldKind::Real },
    }))
}

fn invariants_value<S: RealScalar>(
    g: &[Complex<f64>; 4],
    min_poly: Option<&IntPolynomial>,
) -> Result<Value> {
    let e = mobius::<S>(g, is_complex(&[g]))?;
    let inv = class_invariants(&e, min_poly)?;
    let min_distance = class_min_distance(&e).ok();
    Ok(json!({ "invariants": inv, "class_min_distance": min_distance }))
}

fn geom(op: &GeomOp, precision: Precision) -> Result<Report> {
    let p = params(op);
    Ok(match op {
        GeomOp::Distance { x, y } => {
            let (x, y) = (parse_matrix(x)?, parse_matrix(y)?);
            let r = match precision {
                Precision::F64 => distance_value::<f64>(&x, &y)?,
                Precision::Dd => distance_value::<DoubleDouble>(&x, &y)?,
            };
            report("geom distance", "arlat::geom::frobenius_distance", p, &r)
        }
        GeomOp::Invariants { g, min_poly } => {
            let g = parse_matrix(g)?;
            let f = min_poly.as_deref().map(parse_poly).transpose()?;
            let r = match precision {
                Precision::F64 => invariants_value::<f64>(&g, f.as_ref())?,
                Precision::Dd => invariants_value::<DoubleDouble>(&g, f.as_ref())?,
            };
            report("geom invariants", "arlat::geom::class_invariants", p, &r)
        }
        GeomOp::MeetsBall { g, r } => {
            let m = parse_matrix(g)?;
            let e = mobius::<f64>(&m, is_complex(&[&m]))?;
            let d = class_min_distance(&e)?;
            let v = json!({ "meets": d <= *r, "class_min_distance": d });
            report("geom meets-ball", "arlat::geom::meets_ball", p, &v)
        }
        GeomOp::Orbital {
            kind,
            ratio,
            arg,
            angle,
            bump,
            plateau,
            tol,
            compare,
        } => {
            let f = match plateau {
                Some(pl) => RadialBump::new(*bump, *pl)?,
                None => RadialBump::of_radius(*bump)?,
            };
            let (name, g) = match kind {
                OrbitalType::Split => {
                    let r =
                        ratio.ok_or_else(|| Error::Parse("split orbital needs --ratio".into()))?;
                    match arg {
                        Some(t) => (
                            format!("loxodromic {r}e^{{{t}i}}"),
                            MobiusElement::diag(Complex::from_polar(r, *t), FieldKind::Complex)?,
                        ),
                        None => (
                            format!("split a/b={r}"),
                            MobiusElement::diag(Complex::new(r, 0.0), FieldKind::Real)?,
                        ),
                    }
                }
                OrbitalType::Elliptic => {
                    let t = angle
                        .ok_or_else(|| Error::Parse("elliptic orbital needs --angle".into()))?;
                    (format!("elliptic {t}"), MobiusElement::rotation(t))
                }
            };
            if *compare {
                let c = compare_orbital(&name, &g, &f, *tol)?;
                let mut rep = report("geom orbital", "arlat::geom::compare_orbital", p, &c);
                rep.ok = c.relative_error < 1e-3;
                rep
            } else {
                let (op_name, r) = match kind {
                    OrbitalType::Split => {
                        ("arlat::geom::orbital_split", orbital_split(&g, &f, *tol)?)
                    }
                    OrbitalType::Elliptic => (
                        "arlat::geom::orbital_elliptic",
                        orbital_elliptic(&g, &f, *tol)?,
                    ),
                };
                report("geom orbital", op_name, p, &r)
            }
        }
        GeomOp::Presets { bump, tol } => {
            let f = RadialBump::of_radius(*bump)?;
            let rows: Vec<_> = orbital_presets()
                .iter()
                .map(|(n, g)| compare_orbital(n, g, &f, *tol))
                .collect::<Result<_>>()?;
            let table: Vec<Value> = rows
                .iter()
                .map(|c| {
                    json!({
                        "name": c.name,
                        "closed": c.closed.value,
                        "brute": c.brute.value,
                        "relative_error": c.relative_error,
                        "measured_constant": c.closed.measured_constant,
                    })
                })
                .collect();
            let mut rep = report("geom presets", "arlat::geom::compare_orbital", p, &rows);
            rep.csv = Some(render::csv(&Value::Array(table)));
            rep.ok = rows.iter().all(|c| c.relative_error < 1e-3);
            rep
        }
    })
}

fn nerve_cmd(op: &NerveOp, seed: Option<u64>) -> Result<Report> {
    let p = params(op);
    let NerveOp::Run {
        space,
        samples,
        dim_cap,
        summary_only,
    } = op;
    let seed = need_seed(seed, "nerve run")?;
    let s = MetricSampleSpace::preset(space, *samples, seed)?;
    let (run, complex) = nerve::run(&s, seed, *dim_cap)?;
    let r = if *summary_only {
        json!({ "run": run })
    } else {
        json!({ "run": run, "complex": complex })
    };
    let mut rep = report("nerve run", "arlat::nerve::run", p, &r);
    let hist: Vec<Vec<String>> = run
        .degree_histogram
        .iter()
        .map(|(d, c)| vec![d.to_string(), c.to_string()])
        .collect();
    rep.csv = Some(render::write_rows(
        &["degree".into(), "count".into()],
        &hist,
    ));
    rep.pretty = Some(render::pretty(&json!(run)));
    rep.ok = run.packing_exact && run.cover.coverage == 1.0 && run.degree.holds;
    Ok(rep)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SalemFamily {
    #[serde(default)]
    name: Option<String>,
    lambda_poly: String,
    #[serde(default)]
    exponents: Option<Vec<u32>>,
}

fn load_family(path: &Path) -> Result<SalemFamily> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn conjcount(op: &ConjcountOp, seed: Option<u64>) -> Result<Report> {
    let p = params(op);
    Ok(match op {
        ConjcountOp::Trace(a) => {
            let r = normalized_trace(&parse_poly(&a.poly)?)?;
            report(
                "conjcount trace",
                "arlat::conjcount::normalized_trace",
                p,
                &r,
            )
        }
        ConjcountOp::Sweep {
            family: kind,
            a,
            indices,
            mahler_cap,
        } => {
            let indices: Vec<u64> = match (indices.is_empty(), kind) {
                (false, _) => indices.clone(),
                (true, FamilyKind::Cyclotomic) => (3..=101).filter(|&n| is_prime(n)).collect(),
                (true, FamilyKind::Binomial) => (2..=64).collect(),
            };
            let s = trace_decay_sweep(&family(*kind, *a, &indices), *mahler_cap)?;
            let mut rep = report(
                "conjcount sweep",
                "arlat::conjcount::trace_decay_sweep",
                p,
                &s,
            );
            rep.csv = Some(trace_decay_csv(&s));
            rep
        }
        ConjcountOp::Gram {
            family: path,
            exponents,
        } => {
            let default = [1, 2, 3, 5, 7];
            let (field, vectors) = match path {
                None => {
                    let ex = if exponents.is_empty() {
                        &default[..]
                    } else {
                        exponents
                    };
                    let k = NumberField::lehmer_trace_field();
                    let v = lehmer_power_vectors(&k, ex)?;
                    (k, v)
                }
                Some(path) => {
                    let fam = load_family(path)?;
                    let lambda = parse_poly(&fam.lambda_poly)?;
                    let k = NumberField::new(
                        "trace field",
                        trace_polynomial(&lambda)?,
                        MaximalityOverride::None,
                    )?;
                    let ex = match (exponents.is_empty(), &fam.exponents) {
                        (false, _) => exponents.clone(),
                        (true, Some(e)) => e.clone(),
                        (true, None) => default.to_vec(),
                    };
                    let v = salem_power_vectors(
                        fam.name.as_deref().unwrap_or("lambda"),
                        &lambda,
                        &k,
                        &ex,
                    )?;
                    (k, v)
                }
            };
            let g = gram_diagnostics(&vectors, &field)?;
            let mut header = vec!["label".to_string()];
            header.extend(g.labels.iter().cloned());
            let rows: Vec<Vec<String>> = g
                .labels
                .iter()
                .zip(&g.gram)
                .map(|(l, row)| {
                    std::iter::once(l.clone())
                        .chain(row.iter().map(|x| format!("{x:.15}")))
                        .collect()
                })
                .collect();
            let mut rep = report(
                "conjcount gram",
                "arlat::conjcount::gram_diagnostics",
                p,
                &g,
            );
            rep.csv = Some(render::write_rows(&header, &rows));
            rep
        }
        ConjcountOp::Kl {
            n,
            a,
            c,
            candidates,
        } => {
            if *candidates == 0 {
                let r = json!({ "n": n, "a": a, "c": c, "bound": kl_packing_bound(*n, *a, *c)? });
                report("conjcount kl", "arlat::conjcount::kl_packing_bound", p, &r)
            } else {
                let seed = need_seed(seed, "conjcount kl --candidates")?;
                let r = packing_check(*n, *a, *c, *candidates, seed)?;
                let mut rep = report("conjcount kl", "arlat::conjcount::packing_check", p, &r);
                rep.ok = r.within_bound;
                rep
            }
        }
    })
}

fn suite(a: &SuiteArgs, seed: Option<u64>) -> Result<Report> {
    let p = params(a);
    let profile = match a.profile {
        ProfileArg::Quick => Profile::Quick,
        ProfileArg::Full => Profile::Full,
    };
    let seed = seed.unwrap_or(DEFAULT_SUITE_SEED);
    let t = Instant::now();
    let results = battery::run(profile, seed);
    for c in &results {
        eprintln!("{:<4} {:>10.2?}", c.id, c.elapsed);
    }
    eprintln!("total {:.2?}", t.elapsed());
    let failed: Vec<&str> = results
        .iter()
        .filter(|c| !c.acceptable())
        .map(|c| c.id.as_str())
        .collect();
    let known: Vec<&str> = results
        .iter()
        .filter(|c| !c.passed && c.known)
        .map(|c| c.id.as_str())
        .collect();
    let r = json!({ "seed": seed, "criteria": results, "failed": failed, "known_failures": known });
    let mut rep = report("suite", "arlat::battery::run", p, &r);
    rep.csv = Some(render::csv(&r["criteria"]));
    rep.pretty = Some(results.iter().map(|c| c.line() + "\n").collect());
    rep.ok = failed.is_empty();
    Ok(rep)
}
