//! Real scalar abstraction shared by the numeric routines.
//!
//! `RealScalar` is implemented for `f32`, `f64` and [`DoubleDouble`]. Root
//! refinement and Euler products are generic over it, so the same code runs in
//! single, double, or roughly 106-bit precision.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, Sub, SubAssign};

use num_traits::{Num, One, Zero};

/// Ordered real field with the elementary functions the crate needs.
pub trait RealScalar:
    Copy
    + PartialOrd
    + fmt::Debug
    + Send
    + Sync
    + Num
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
{
    /// Unit roundoff of the type.
    fn epsilon() -> Self;
    fn from_f64(x: f64) -> Self;
    fn from_i64(x: i64) -> Self;
    fn to_f64(self) -> f64;
    fn abs(self) -> Self;
    fn sqrt(self) -> Self;
    fn ln(self) -> Self;
    fn exp(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn atan2(self, other: Self) -> Self;
    fn pi() -> Self;

    fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }
    fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }
    fn powi(self, n: i32) -> Self {
        let mut base = if n < 0 { Self::one() / self } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
    fn hypot(self, other: Self) -> Self {
        let a = self.abs();
        let b = other.abs();
        let (big, small) = if a >= b { (a, b) } else { (b, a) };
        if big.is_zero() {
            return big;
        }
        let r = small / big;
        big * (Self::one() + r * r).sqrt()
    }
}

macro_rules! impl_native {
    ($t:ty, $pi:expr) => {
        impl RealScalar for $t {
            fn epsilon() -> Self {
                <$t>::EPSILON
            }
            fn from_f64(x: f64) -> Self {
                x as $t
            }
            fn from_i64(x: i64) -> Self {
                x as $t
            }
            fn to_f64(self) -> f64 {
                self as f64
            }
            fn abs(self) -> Self {
                <$t>::abs(self)
            }
            fn sqrt(self) -> Self {
                <$t>::sqrt(self)
            }
            fn ln(self) -> Self {
                <$t>::ln(self)
            }
            fn exp(self) -> Self {
                <$t>::exp(self)
            }
            fn sin(self) -> Self {
                <$t>::sin(self)
            }
            fn cos(self) -> Self {
                <$t>::cos(self)
            }
            fn atan2(self, other: Self) -> Self {
                <$t>::atan2(self, other)
            }
            fn pi() -> Self {
                $pi
            }
            fn hypot(self, other: Self) -> Self {
                <$t>::hypot(self, other)
            }
        }
    };
}

impl_native!(f32, std::f32::consts::PI);
impl_native!(f64, std::f64::consts::PI);

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`, about 106 bits of
/// mantissa.
#[derive(Clone, Copy, Default, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const fn new(hi: f64, lo: f64) -> Self {
        DoubleDouble { hi, lo }
    }

    pub fn from_parts(hi: f64, lo: f64) -> Self {
        let (h, l) = two_sum(hi, lo);
        DoubleDouble { hi: h, lo: l }
    }

    fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (h, l) = quick_two_sum(p, e);
        DoubleDouble { hi: h, lo: l }
    }

    fn ldexp(self, k: i32) -> Self {
        let f = 2f64.powi(k);
        DoubleDouble {
            hi: self.hi * f,
            lo: self.lo * f,
        }
    }
}

impl fmt::Debug for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "dd({:e} + {:e})", self.hi, self.lo)
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.hi + self.lo)
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            o => o,
        }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (h, l) = quick_two_sum(s, e + f);
        DoubleDouble { hi: h, lo: l }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        DoubleDouble {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (h, l) = quick_two_sum(p, e);
        DoubleDouble { hi: h, lo: l }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (h, l) = quick_two_sum(q1, q2);
        DoubleDouble { hi: h, lo: l } + DoubleDouble::from(q3)
    }
}

macro_rules! assign_op {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for DoubleDouble {
            fn $m(&mut self, b: Self) {
                *self = *self $op b;
            }
        }
    };
}
assign_op!(AddAssign, add_assign, +);
assign_op!(SubAssign, sub_assign, -);
assign_op!(MulAssign, mul_assign, *);
assign_op!(DivAssign, div_assign, /);

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }
}

impl Zero for DoubleDouble {
    fn zero() -> Self {
        DoubleDouble::from(0.0)
    }
    fn is_zero(&self) -> bool {
        self.hi == 0.0
    }
}

impl One for DoubleDouble {
    fn one() -> Self {
        DoubleDouble::from(1.0)
    }
}

impl Rem for DoubleDouble {
    type Output = Self;
    fn rem(self, b: Self) -> Self {
        let q = (self / b).hi.trunc();
        self - b * DoubleDouble::from(q)
    }
}

impl Num for DoubleDouble {
    type FromStrRadixErr = std::num::ParseFloatError;
    fn from_str_radix(s: &str, _radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        s.parse::<f64>().map(DoubleDouble::from)
    }
}

const DD_PI: DoubleDouble = DoubleDouble::new(3.141592653589793, 1.2246467991473532e-16);
const DD_LN2: DoubleDouble = DoubleDouble::new(0.6931471805599453, 2.3190468138462996e-17);

impl DoubleDouble {
    // Taylor series for exp on |x| <= ln2/512.
    fn exp_small(x: Self) -> Self {
        let mut term = DoubleDouble::one();
        let mut sum = DoubleDouble::one();
        for k in 1..=14 {
            term = term * x / DoubleDouble::from(k as f64);
            sum += term;
            if term.hi.abs() < 1e-34 {
                break;
            }
        }
        sum
    }

    // sin and cos by Taylor series on |x| <= pi/4 after reduction.
    fn sin_cos_reduced(x: Self) -> (Self, Self) {
        let x2 = x * x;
        let mut term = x;
        let mut s = x;
        let mut k = 1.0;
        loop {
            term = -term * x2 / DoubleDouble::from((k + 1.0) * (k + 2.0));
            s += term;
            k += 2.0;
            if term.hi.abs() < 1e-34 || k > 60.0 {
                break;
            }
        }
        let mut term = DoubleDouble::one();
        let mut c = DoubleDouble::one();
        let mut k = 0.0;
        loop {
            term = -term * x2 / DoubleDouble::from((k + 1.0) * (k + 2.0));
            c += term;
            k += 2.0;
            if term.hi.abs() < 1e-34 || k > 60.0 {
                break;
            }
        }
        (s, c)
    }

    fn sin_cos(self) -> (Self, Self) {
        let half_pi = DD_PI.ldexp(-1);
        let n = (self / half_pi).hi.round();
        let r = self - half_pi * DoubleDouble::from(n);
        let (s, c) = Self::sin_cos_reduced(r);
        match (n as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }
}

impl RealScalar for DoubleDouble {
    fn epsilon() -> Self {
        DoubleDouble::from(4.93038065763132e-32)
    }
    fn from_f64(x: f64) -> Self {
        DoubleDouble::from(x)
    }
    fn from_i64(x: i64) -> Self {
        let hi = x as f64;
        let lo = (x - hi as i64) as f64;
        DoubleDouble::from_parts(hi, lo)
    }
    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
    fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }
    fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return DoubleDouble::zero();
        }
        // One Newton step from the f64 root.
        let x = self.hi.sqrt();
        let (p, e) = two_prod(x, x);
        let r = (self - DoubleDouble::from_parts(p, e)).hi;
        DoubleDouble::from_parts(x, r / (2.0 * x))
    }
    fn ln(self) -> Self {
        // Newton on exp(y) = self.
        let mut y = DoubleDouble::from(self.hi.ln());
        for _ in 0..2 {
            let ey = y.exp();
            y = y + (self - ey) / ey;
        }
        y
    }
    fn exp(self) -> Self {
        if self.hi > 709.0 {
            return DoubleDouble::from(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return DoubleDouble::zero();
        }
        let k = (self / DD_LN2).hi.round();
        let r = self - DD_LN2 * DoubleDouble::from(k);
        let mut e = Self::exp_small(r.ldexp(-9));
        for _ in 0..9 {
            e = e * e;
        }
        e.ldexp(k as i32)
    }
    fn sin(self) -> Self {
        self.sin_cos().0
    }
    fn cos(self) -> Self {
        self.sin_cos().1
    }
    fn atan2(self, other: Self) -> Self {
        // Newton refinement of the f64 angle.
        let mut t = DoubleDouble::from(self.hi.atan2(other.hi));
        let r = self.hypot(other);
        if r.is_zero() {
            return t;
        }
        for _ in 0..2 {
            let (s, c) = t.sin_cos();
            // Residual of the rotated point's perpendicular component.
            let perp = (self * c - other * s) / r;
            t += perp;
        }
        t
    }
    fn pi() -> Self {
        DD_PI
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type DD = DoubleDouble;

    #[test]
    fn sqrt_two_squared_residual() {
        let s = DD::from(2.0).sqrt();
        let r = s * s - DD::from(2.0);
        assert!(r.abs().hi < 1e-30, "{r:?}");
    }

    #[test]
    fn division_round_trip() {
        let a = DD::from(1.0) / DD::from(3.0);
        let back = a * DD::from(3.0) - DD::one();
        assert!(back.abs().hi < 1e-31);
    }

    #[test]
    fn exp_ln_inverse() {
        for &x in &[0.1, 1.0, 2.5, 10.0, 123.456] {
            let y = DD::from(x).ln().exp() - DD::from(x);
            assert!(y.abs().hi < 1e-29 * x, "x={x} {y:?}");
        }
    }

    #[test]
    fn pi_from_trig() {
        let s = DD::pi().sin();
        assert!(s.abs().hi < 1e-31);
        let c = (DD::pi() / DD::from(3.0)).cos() - DD::from(0.5);
        assert!(c.abs().hi < 1e-30);
    }

    #[test]
    fn atan2_quadrants() {
        let a = DD::from(1.0).atan2(DD::from(1.0)) - DD::pi() / DD::from(4.0);
        assert!(a.abs().hi < 1e-30);
        let b = DD::from(-1.0).atan2(DD::from(-1.0)) + DD::pi() * DD::from(0.75);
        assert!(b.abs().hi < 1e-30);
    }

    #[test]
    fn native_hypot_agrees() {
        assert!((RealScalar::hypot(3.0f64, 4.0) - 5.0).abs() < 1e-15);
        assert!((RealScalar::powi(2.0f32, -2) - 0.25).abs() < 1e-7);
    }
}
