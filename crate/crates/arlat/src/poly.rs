//! Dense univariate polynomials, lowest degree first.
//!
//! `Poly<T>` carries the ring operations for any `num_traits::Num` coefficient
//! type. The exact-integer specialisation [`IntPolynomial`] adds parsing,
//! content, gcd, resultants and the squarefree decomposition.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

pub type IntPolynomial = Poly<BigInt>;

impl<T: Num + Clone> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `x^n`.
    pub fn monomial(n: usize) -> Self {
        let mut v = vec![T::zero(); n + 1];
        v[n] = T::one();
        Poly { coeffs: v }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0 as well, check `is_zero` first.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn leading(&self) -> T {
        self.coeffs.last().cloned().unwrap_or_else(T::zero)
    }

    pub fn is_monic(&self) -> bool {
        !self.is_zero() && self.leading().is_one()
    }

    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let mut out = Vec::with_capacity(self.coeffs.len().saturating_sub(1));
        let mut k = T::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                out.push(c.clone() * k.clone());
            }
            k = k + T::one();
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn map<U: Num + Clone>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Poly::constant(T::one());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }
}

impl<T: Num + Clone> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, o: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl<T: Num + Clone> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, o: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl<T: Num + Clone> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, o: &Poly<T>) -> Poly<T> {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<T: Num + Clone + Neg<Output = T>> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T: Num + Clone> $tr for Poly<T> {
            type Output = Poly<T>;
            fn $m(self, o: Poly<T>) -> Poly<T> {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl IntPolynomial {
    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `Φ_m = Π_{d|m} (x^d − 1)^{μ(m/d)}`.
    pub fn cyclotomic(m: u64) -> Self {
        assert!(m >= 1);
        let xd1 = |d: u64| &Poly::monomial(d as usize) - &Poly::constant(BigInt::one());
        let divisors: Vec<u64> = (1..=m).filter(|d| m % d == 0).collect();
        let mut num = Poly::constant(BigInt::one());
        let mut den = Poly::constant(BigInt::one());
        for &d in &divisors {
            match mobius(m / d) {
                1 => num = &num * &xd1(d),
                -1 => den = &den * &xd1(d),
                _ => {}
            }
        }
        num.div_exact(&den).expect("cyclotomic quotient is exact")
    }

    /// Whether `x^n f(1/x) = ±f(x)`.
    pub fn is_reciprocal_up_to_sign(&self) -> bool {
        let n = self.degree();
        let plus = (0..=n).all(|i| self.coeff(i) == self.coeff(n - i));
        let minus = (0..=n).all(|i| self.coeff(i) == -self.coeff(n - i));
        plus || minus
    }

    /// Largest-modulus coefficient.
    pub fn height(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default()
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.leading().is_negative() {
            c = -c;
        }
        Poly::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    /// Pseudo-remainder `lc(g)^(deg f − deg g + 1) f mod g`.
    pub fn pseudo_rem(&self, g: &Self) -> Self {
        assert!(!g.is_zero());
        let mut r = self.clone();
        let dg = g.degree();
        let lg = g.leading();
        while !r.is_zero() && r.degree() >= dg {
            let shift = r.degree() - dg;
            let lr = r.leading();
            let mut t = vec![BigInt::zero(); shift];
            t.extend(g.coeffs.iter().map(|c| c * &lr));
            r = &r.scale(&lg) - &Poly::new(t);
        }
        r
    }

    /// Exact quotient `self / g` over Z; fails if the division leaves a
    /// remainder or a non-integral coefficient.
    pub fn div_exact(&self, g: &Self) -> Result<Self> {
        if g.is_zero() {
            return Err(Error::Domain("division by zero polynomial".into()));
        }
        let (q, r) = self.div_rem_rational(g)?;
        if !r.is_zero() {
            return Err(Error::Domain("inexact polynomial division".into()));
        }
        Ok(q)
    }

    fn div_rem_rational(&self, g: &Self) -> Result<(Self, Self)> {
        let mut r = self.clone();
        if r.is_zero() || r.degree() < g.degree() {
            return Ok((Poly::zero(), r));
        }
        let dg = g.degree();
        let lg = g.leading();
        let mut q = vec![BigInt::zero(); r.degree() - dg + 1];
        while !r.is_zero() && r.degree() >= dg {
            let shift = r.degree() - dg;
            let (c, rem) = r.leading().div_rem(&lg);
            if !rem.is_zero() {
                return Err(Error::Domain("non-integral quotient".into()));
            }
            let mut t = vec![BigInt::zero(); shift];
            t.extend(g.coeffs.iter().map(|a| a * &c));
            q[shift] = c;
            r = &r - &Poly::new(t);
        }
        Ok((Poly::new(q), r))
    }

    /// Primitive gcd over Z (primitive PRS), positive leading coefficient.
    pub fn gcd(&self, g: &Self) -> Self {
        if self.is_zero() {
            return g.primitive_part();
        }
        if g.is_zero() {
            return self.primitive_part();
        }
        let cont = self.content().gcd(&g.content());
        let (mut a, mut b) = (self.primitive_part(), g.primitive_part());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.primitive_part().scale(&cont)
    }

    /// Yun decomposition: `self = c · Π g_i^i` with each `g_i` squarefree and
    /// pairwise coprime. Returns `(g_i, i)` for nonconstant `g_i`.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, u32)> {
        let f = self.primitive_part();
        if f.is_zero() || f.degree() == 0 {
            return Vec::new();
        }
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.div_exact(&a0).expect("gcd divides f");
        let mut c = fp.div_exact(&a0).expect("gcd divides f'");
        let mut d = &c - &b.derivative();
        let mut out = Vec::new();
        let mut i = 1;
        loop {
            let a = b.gcd(&d);
            if a.degree() > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_exact(&a).expect("gcd divides b");
            if b.degree() == 0 {
                break;
            }
            c = d.div_exact(&a).expect("gcd divides d");
            d = &c - &b.derivative();
            i += 1;
        }
        out
    }

    pub fn squarefree_part(&self) -> Self {
        let f = self.primitive_part();
        if f.degree() == 0 {
            return f;
        }
        f.div_exact(&f.gcd(&f.derivative())).expect("gcd divides f")
    }

    /// Resultant via the fraction-free Bareiss determinant of the Sylvester
    /// matrix.
    pub fn resultant(&self, g: &Self) -> BigInt {
        let m = self.degree();
        let n = g.degree();
        if self.is_zero() || g.is_zero() {
            return BigInt::zero();
        }
        let size = m + n;
        if size == 0 {
            return BigInt::one();
        }
        let mut mat = vec![vec![BigInt::zero(); size]; size];
        for (row, r) in mat.iter_mut().take(n).enumerate() {
            for j in 0..=m {
                r[row + j] = self.coeff(m - j);
            }
        }
        for row in 0..m {
            for j in 0..=n {
                mat[n + row][row + j] = g.coeff(n - j);
            }
        }
        bareiss_det(mat)
    }

    /// Discriminant `(−1)^{n(n−1)/2} Res(f, f′) / lc(f)`.
    pub fn discriminant(&self) -> BigInt {
        let n = self.degree();
        if n == 0 {
            return BigInt::zero();
        }
        if n == 1 {
            return BigInt::one();
        }
        let r = self.resultant(&self.derivative()) / self.leading();
        if (n * (n - 1) / 2) % 2 == 1 {
            -r
        } else {
            r
        }
    }

    /// Sum of the k-th powers of the roots (with multiplicity), monic input,
    /// by Newton's identities.
    pub fn power_sum(&self, k: usize) -> BigInt {
        assert!(self.is_monic());
        let n = self.degree();
        // e_j up to sign: x^n + a_{n-1}x^{n-1} + ... gives e_j = (−1)^j a_{n−j}.
        let e = |j: usize| -> BigInt {
            if j > n {
                return BigInt::zero();
            }
            let a = self.coeff(n - j);
            if j % 2 == 1 {
                -a
            } else {
                a
            }
        };
        let mut p: Vec<BigInt> = vec![BigInt::from(n as i64)];
        for m in 1..=k {
            let mut s = BigInt::zero();
            for i in 1..m {
                let term = e(i) * &p[m - i];
                if i % 2 == 1 {
                    s += term;
                } else {
                    s -= term;
                }
            }
            let last = e(m) * BigInt::from(m as i64);
            if m % 2 == 1 {
                s += last;
            } else {
                s -= last;
            }
            p.push(s);
        }
        p[k].clone()
    }
}

/// Möbius function.
pub fn mobius(n: u64) -> i32 {
    let mut m = n;
    let mut sign = 1;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    sign
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    let mut m = n;
    let mut out = n;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if m > 1 {
        out -= out / m;
    }
    out
}

/// Determinant of an integer matrix by fraction-free elimination.
pub fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = !a.is_one() || i == 0;
            if show_coeff {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

impl FromStr for IntPolynomial {
    type Err = Error;

    /// Accepts `"x^4 - 2"` style or a coefficient list `"[-2,0,0,0,1]"`
    /// (lowest degree first).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.replace('\u{2212}', "-");
        let t = s.trim();
        if t.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        if let Some(inner) = t.strip_prefix('[') {
            let inner = inner
                .strip_suffix(']')
                .ok_or_else(|| Error::Parse("unterminated coefficient list".into()))?;
            let mut v = Vec::new();
            for part in inner.split(',') {
                let part = part.trim();
                if part.is_empty() {
                    continue;
                }
                v.push(
                    part.parse::<BigInt>()
                        .map_err(|_| Error::Parse(format!("bad coefficient `{part}`")))?,
                );
            }
            if v.is_empty() {
                return Err(Error::Parse("empty coefficient list".into()));
            }
            return Ok(Poly::new(v));
        }
        parse_expr(t)
    }
}

fn parse_expr(t: &str) -> Result<IntPolynomial> {
    let compact: String = t.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let bytes: Vec<char> = compact.chars().collect();
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    for (i, &ch) in bytes.iter().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 && bytes[i - 1] != '^' {
            if cur.is_empty() {
                return Err(Error::Parse(format!("dangling sign in `{t}`")));
            }
            terms.push((neg, std::mem::take(&mut cur)));
            neg = ch == '-';
        } else if (ch == '+' || ch == '-') && i == 0 {
            neg = ch == '-';
        } else {
            cur.push(ch);
        }
    }
    if cur.is_empty() {
        return Err(Error::Parse(format!("trailing sign in `{t}`")));
    }
    terms.push((neg, cur));

    let mut coeffs: Vec<BigInt> = Vec::new();
    for (neg, term) in terms {
        let (c, e) = parse_term(&term)?;
        if coeffs.len() <= e {
            coeffs.resize(e + 1, BigInt::zero());
        }
        coeffs[e] += if neg { -c } else { c };
    }
    Ok(Poly::new(coeffs))
}

fn parse_term(term: &str) -> Result<(BigInt, usize)> {
    let bad = || Error::Parse(format!("bad term `{term}`"));
    let Some(pos) = term.find('x') else {
        return term.parse::<BigInt>().map(|c| (c, 0)).map_err(|_| bad());
    };
    let (cpart, rest) = term.split_at(pos);
    let cpart = cpart.strip_suffix('*').unwrap_or(cpart);
    let c = if cpart.is_empty() {
        BigInt::one()
    } else {
        cpart.parse::<BigInt>().map_err(|_| bad())?
    };
    let rest = &rest[1..];
    let e = if rest.is_empty() {
        1
    } else {
        let exp = rest.strip_prefix('^').ok_or_else(bad)?;
        exp.parse::<usize>().map_err(|_| bad())?
    };
    Ok((c, e))
}
