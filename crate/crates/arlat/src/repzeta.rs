//! Representation zeta functions of the local maximal compact subgroups.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numfield::prime_factors;

/// Irreducible degrees of `SL(2, O/𝔭^n)` of level exactly n, as
/// `(dimension, multiplicity)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeMultiset {
    pub level: u32,
    #[serde(serialize_with = "ser_pairs")]
    pub entries: Vec<(BigInt, BigInt)>,
}

fn ser_pairs<S: serde::Serializer>(
    v: &[(BigInt, BigInt)],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let strs: Vec<(String, String)> = v
        .iter()
        .map(|(d, m)| (d.to_string(), m.to_string()))
        .collect();
    strs.serialize(s)
}

impl DegreeMultiset {
    /// `Σ multiplicity · dimension²`.
    pub fn sum_of_squares(&self) -> BigInt {
        self.entries.iter().map(|(d, m)| m * d * d).sum()
    }

    pub fn count(&self) -> BigInt {
        self.entries.iter().map(|(_, m)| m.clone()).sum()
    }

    pub fn min_dimension(&self) -> Option<BigInt> {
        self.entries.iter().map(|(d, _)| d.clone()).min()
    }

    /// Entries with equal dimensions combined, sorted by dimension.
    pub fn merged(&self) -> Vec<(BigInt, BigInt)> {
        let mut out: Vec<(BigInt, BigInt)> = Vec::new();
        let mut sorted = self.entries.clone();
        sorted.sort();
        for (d, m) in sorted {
            match out.last_mut() {
                Some((ld, lm)) if *ld == d => *lm += m,
                _ => out.push((d, m)),
            }
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("dimension,multiplicity\n");
        for (d, m) in &self.entries {
            s.push_str(&format!("{d},{m}\n"));
        }
        s
    }

    /// Converts exact rational terms, rejecting non-integral values and
    /// dropping zero multiplicities.
    fn finalize(level: u32, raw: Vec<(BigRational, BigRational)>) -> Result<Self> {
        let mut entries = Vec::with_capacity(raw.len());
        for (d, m) in raw {
            if !d.is_integer() || !m.is_integer() || !d.is_positive() || m.is_negative() {
                return Err(Error::Domain(format!("non-integral degree term {d} × {m}")));
            }
            if !m.is_zero() {
                entries.push((d.to_integer(), m.to_integer()));
            }
        }
        Ok(DegreeMultiset { level, entries })
    }
}

/// `Some(p)` when q is a power of the prime p.
pub fn prime_power_base(q: u64) -> Option<u64> {
    let f = prime_factors(q);
    (f.len() == 1).then(|| f[0])
}

/// Degrees of level exactly n from the explicit formula for
/// `ζ_{SL(2,O)}(s)` (q odd).
pub fn jz_level_multiset(q: u64, n: u32) -> Result<DegreeMultiset> {
    if q % 2 == 0 || prime_power_base(q).is_none() {
        return Err(Error::Domain(format!("q = {q} must be an odd prime power")));
    }
    if n == 0 {
        return Err(Error::Domain("level must be at least 1".into()));
    }
    let r = |x: i128| BigRational::from_integer(BigInt::from(x));
    let half = |x: i128| BigRational::new(BigInt::from(x), BigInt::from(2));
    let qi = q as i128;
    let raw = if n == 1 {
        vec![
            (r(1), r(1)),
            (r(qi), r(1)),
            (r(qi + 1), half(qi - 3)),
            (half(qi + 1), r(2)),
            (r(qi - 1), half(qi - 1)),
            (half(qi - 1), r(2)),
        ]
    } else {
        let scale = BigRational::from_integer(num_traits::pow(BigInt::from(q), (n - 2) as usize));
        [
            (half(qi * qi - 1), r(4 * qi)),
            (r(qi * qi - qi), half(qi * qi - 1)),
            (r(qi * qi + qi), half((qi - 1) * (qi - 1))),
        ]
        .into_iter()
        .map(|(d, m)| (d * &scale, m * &scale))
        .collect()
    };
    DegreeMultiset::finalize(n, raw)
}

/// `|SL(2, O/𝔭^n)| = q^{3n−2}(q² − 1)`.
pub fn sl2_group_order(q: u64, n: u32) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::Domain("level must be at least 1".into()));
    }
    let q = BigInt::from(q);
    Ok(num_traits::pow(q.clone(), (3 * n - 2) as usize) * (&q * &q - 1))
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelContribution {
    pub level: u32,
    pub contribution: String,
    pub cumulative: String,
    pub group_order: String,
    pub matches: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SumOfSquaresReport {
    pub q: u64,
    pub levels: u32,
    pub rows: Vec<LevelContribution>,
    pub ok: bool,
}

impl SumOfSquaresReport {
    pub fn ledger(&self) -> String {
        let mut s = format!(
            "{:>5} {:>24} {:>24} {:>24}\n",
            "level", "Σ m·d²", "cumulative", "|SL(2)|"
        );
        for r in &self.rows {
            s.push_str(&format!(
                "{:>5} {:>24} {:>24} {:>24}{}\n",
                r.level,
                r.contribution,
                r.cumulative,
                r.group_order,
                if r.matches { "" } else { "  MISMATCH" }
            ));
        }
        s.push_str(if self.ok { "OK\n" } else { "FAIL\n" });
        s
    }
}

/// Checks `Σ_{levels ≤ n} Σ m·d² = |SL(2, O/𝔭^n)|` at every level.
pub fn sum_of_squares_check(q: u64, n: u32) -> Result<SumOfSquaresReport> {
    let mut rows = Vec::new();
    let mut cumulative = BigInt::zero();
    for level in 1..=n {
        let contribution = jz_level_multiset(q, level)?.sum_of_squares();
        cumulative += &contribution;
        let order = sl2_group_order(q, level)?;
        rows.push(LevelContribution {
            level,
            contribution: contribution.to_string(),
            cumulative: cumulative.to_string(),
            group_order: order.to_string(),
            matches: cumulative == order,
        });
    }
    let ok = rows.iter().all(|r| r.matches);
    Ok(SumOfSquaresReport {
        q,
        levels: n,
        rows,
        ok,
    })
}

/// Dimension of a representation of minimal level c ≥ 2:
/// `r(q² − 1)/(q^r − 1) · q^{(c+r−4)/2}` with r = gcd(2, c).
pub fn carayol_dim(q: u64, c: u32) -> Result<BigInt> {
    if c < 2 {
        return Err(Error::Domain("minimal level must be at least 2".into()));
    }
    let r: u32 = c.gcd(&2);
    let qb = BigInt::from(q);
    let num: BigInt =
        BigInt::from(r) * (&qb * &qb - 1) * num_traits::pow(qb.clone(), ((c + r - 4) / 2) as usize);
    let den = num_traits::pow(qb, r as usize) - 1;
    let (d, rem) = num.div_rem(&den);
    if !rem.is_zero() {
        return Err(Error::Domain(format!(
            "dimension formula is not integral at q = {q}, c = {c}"
        )));
    }
    Ok(d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalType {
    PglVertex,
    PglEdge,
    Ramified,
}

impl std::str::FromStr for LocalType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pgl_vertex" | "vertex" => Ok(LocalType::PglVertex),
            "pgl_edge" | "edge" => Ok(LocalType::PglEdge),
            "ramified" => Ok(LocalType::Ramified),
            _ => Err(Error::Parse(format!("unknown local type `{s}`"))),
        }
    }
}

/// `(threshold, floor)`: every nontrivial irreducible representation of
/// dimension greater than `threshold` has dimension at least `floor`.
pub fn min_dim_bound(t: LocalType, q: u64) -> (u64, u64) {
    match t {
        LocalType::PglVertex => (1, q - 1),
        LocalType::PglEdge => (2, q - 1),
        LocalType::Ramified => (2, q + 1),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LocalZetaBound {
    pub value: f64,
    /// The bound holds for all real s at least this.
    pub valid_from_s: u32,
}

/// Upper bound for the special zeta function of the local maximal compact:
/// `(1 − q^{−2})^{−1}` at vertices (s ≥ 5, s ≥ 6 when q = 2), times
/// `(1 + q)` for edge stabilizers and ramified places (s ≥ 7).
pub fn special_zeta_local_bound(t: LocalType, q: u64) -> LocalZetaBound {
    let base = 1.0 / (1.0 - (q as f64).powi(-2));
    match t {
        LocalType::PglVertex => LocalZetaBound {
            value: base,
            valid_from_s: if q == 2 { 6 } else { 5 },
        },
        _ => LocalZetaBound {
            value: base * (1.0 + q as f64),
            valid_from_s: 7,
        },
    }
}

/// `ζ_k(2) · Π_{𝔭 ∈ S} (N(𝔭) + 1)`, valid for s ≥ 7.
pub fn special_zeta_global_bound(zeta_k_2: f64, edge_norms: &[u64]) -> f64 {
    edge_norms
        .iter()
        .fold(zeta_k_2, |acc, &n| acc * (n as f64 + 1.0))
}

/// Exact version of the local bound as a rational.
pub fn special_zeta_local_bound_exact(t: LocalType, q: u64) -> BigRational {
    let q2 = BigInt::from(q) * BigInt::from(q);
    let base = BigRational::new(q2.clone(), q2 - BigInt::one());
    match t {
        LocalType::PglVertex => base,
        _ => base * BigRational::from_integer(BigInt::from(q + 1)),
    }
}

/// Smallest dimension appearing at level n, as an integer.
pub fn level_min_dimension(q: u64, n: u32) -> Result<u64> {
    let m = jz_level_multiset(q, n)?;
    m.min_dimension()
        .and_then(|d| d.to_u64())
        .ok_or_else(|| Error::Domain("empty degree multiset".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(m: &DegreeMultiset) -> Vec<(i64, i64)> {
        m.entries
            .iter()
            .map(|(d, k)| (d.to_i64().unwrap(), k.to_i64().unwrap()))
            .collect()
    }

    #[test]
    fn level_one_and_two_examples() {
        assert_eq!(
            pairs(&jz_level_multiset(5, 1).unwrap()),
            vec![(1, 1), (5, 1), (6, 1), (3, 2), (4, 2), (2, 2)]
        );
        assert_eq!(
            pairs(&jz_level_multiset(5, 2).unwrap()),
            vec![(12, 20), (20, 12), (30, 8)]
        );
        // The (q + 1)-dimensional term vanishes at q = 3.
        assert!(pairs(&jz_level_multiset(3, 1).unwrap())
            .iter()
            .all(|&(d, _)| d != 4));
        assert!(jz_level_multiset(4, 1).is_err());
        assert!(jz_level_multiset(9, 1).is_ok());
    }

    #[test]
    fn group_orders() {
        assert_eq!(sl2_group_order(5, 1).unwrap(), BigInt::from(120));
        assert_eq!(sl2_group_order(3, 2).unwrap(), BigInt::from(648));
        assert_eq!(sl2_group_order(2, 1).unwrap(), BigInt::from(6));
    }

    #[test]
    fn sums_of_squares() {
        let r = sum_of_squares_check(5, 2).unwrap();
        assert_eq!(r.rows[0].contribution, "120");
        assert_eq!(r.rows[1].contribution, "14880");
        assert_eq!(r.rows[1].cumulative, "15000");
        assert!(r.ok && r.ledger().ends_with("OK\n"));
        for q in [3, 5, 7, 11] {
            assert!(sum_of_squares_check(q, 4).unwrap().ok, "q = {q}");
        }
    }

    #[test]
    fn carayol_examples() {
        assert_eq!(carayol_dim(3, 2).unwrap(), BigInt::from(2));
        assert_eq!(carayol_dim(3, 3).unwrap(), BigInt::from(4));
        assert_eq!(carayol_dim(5, 4).unwrap(), BigInt::from(10));
        assert!(carayol_dim(5, 1).is_err());
    }

    #[test]
    fn dimension_bounds() {
        assert_eq!(min_dim_bound(LocalType::PglVertex, 7), (1, 6));
        assert_eq!(min_dim_bound(LocalType::Ramified, 3), (2, 4));
        assert_eq!(min_dim_bound(LocalType::PglEdge, 2), (2, 1));
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11] {
            for c in (3..=8).step_by(2) {
                assert!(carayol_dim(q, c).unwrap() >= BigInt::from(q - 1));
            }
        }
        for q in [3u64, 5, 7] {
            for n in 2..=4 {
                assert!(level_min_dimension(q, n).unwrap() >= (q - 1) * q.pow(n - 2));
            }
        }
    }

    #[test]
    fn zeta_bounds() {
        assert!(
            (special_zeta_local_bound(LocalType::PglVertex, 3).value - 9.0 / 8.0).abs() < 1e-15
        );
        assert!((special_zeta_local_bound(LocalType::PglEdge, 3).value - 4.5).abs() < 1e-15);
        assert_eq!(
            special_zeta_local_bound(LocalType::PglVertex, 2).valid_from_s,
            6
        );
        assert_eq!(
            special_zeta_local_bound_exact(LocalType::Ramified, 3),
            BigRational::new(BigInt::from(9), BigInt::from(2))
        );
        assert!((special_zeta_global_bound(2.0, &[2, 3]) - 24.0).abs() < 1e-12);
    }
}
