//! Multiprecision reals and a small complex type on top of MPFR.
//!
//! MPC is not available in every build environment, so complex arithmetic is
//! done by hand on pairs of [`rug::Float`].

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Assign, Float};

pub type Real = Float;

pub fn real(prec: u32, v: impl Into<f64>) -> Real {
    Float::with_val(prec, v.into())
}

pub fn real_int(prec: u32, v: i64) -> Real {
    Float::with_val(prec, v)
}

pub fn pi(prec: u32) -> Real {
    Float::with_val(prec, Constant::Pi)
}

pub fn euler_gamma(prec: u32) -> Real {
    Float::with_val(prec, Constant::Euler)
}

pub fn ln2(prec: u32) -> Real {
    Float::with_val(prec, Constant::Log2)
}

pub fn ln_int(prec: u32, n: u64) -> Real {
    Float::with_val(prec, n).ln()
}

/// Number of significant decimal digits carried by `prec` bits.
pub fn decimal_digits(prec: u32) -> usize {
    (prec as f64 * std::f64::consts::LOG10_2).ceil() as usize + 1
}

pub fn fmt_real(x: &Real) -> String {
    if x.is_zero() {
        return "0".into();
    }
    x.to_string_radix(10, Some(decimal_digits(x.prec())))
}

#[derive(Clone, PartialEq)]
pub struct Cx {
    pub re: Real,
    pub im: Real,
}

impl fmt::Debug for Cx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}i)", self.re.to_f64(), self.im.to_f64())
    }
}

impl Cx {
    pub fn new(re: Real, im: Real) -> Self {
        Cx { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Cx::new(Float::new(prec), Float::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        Cx::from_real(Float::with_val(prec, 1))
    }

    pub fn i(prec: u32) -> Self {
        Cx::new(Float::new(prec), Float::with_val(prec, 1))
    }

    pub fn from_real(re: Real) -> Self {
        let prec = re.prec();
        Cx::new(re, Float::new(prec))
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        Cx::new(Float::with_val(prec, re), Float::with_val(prec, im))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    /// `e^{i theta}`.
    pub fn cis(theta: &Real) -> Self {
        let (s, c) = theta.clone().sin_cos(Float::new(theta.prec()));
        Cx::new(c, s)
    }

    /// `e^{2 pi i num/den}` with exact values at the quarter points.
    pub fn root_of_unity(prec: u32, num: i64, den: u64) -> Self {
        let den_i = den as i64;
        let num = num.rem_euclid(den_i);
        if (4 * num) % den_i == 0 {
            return match 4 * num / den_i {
                0 => Cx::one(prec),
                1 => Cx::i(prec),
                2 => -Cx::one(prec),
                _ => -Cx::i(prec),
            };
        }
        let theta = pi(prec) * Float::with_val(prec, 2 * num) / Float::with_val(prec, den);
        Cx::cis(&theta)
    }

    /// `e^{2 pi i z}` for `z = x + iy`.
    pub fn q_of(z: &Cx) -> Self {
        let prec = z.prec();
        let two_pi = pi(prec) * 2u32;
        let modulus = (-(two_pi.clone() * &z.im)).exp();
        let arg = two_pi * &z.re;
        Cx::cis(&arg).scale(&modulus)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Cx::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> Real {
        Float::with_val(self.prec(), self.re.square_ref()) + Float::with_val(self.prec(), self.im.square_ref())
    }

    pub fn abs(&self) -> Real {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn arg(&self) -> Real {
        Float::with_val(self.prec(), self.im.atan2_ref(&self.re))
    }

    pub fn scale(&self, r: &Real) -> Self {
        Cx::new(
            Float::with_val(self.prec(), &self.re * r),
            Float::with_val(self.prec(), &self.im * r),
        )
    }

    pub fn scale_i64(&self, r: i64) -> Self {
        Cx::new(self.re.clone() * r, self.im.clone() * r)
    }

    /// Multiplication by `i`.
    pub fn mul_i(&self) -> Self {
        Cx::new(-self.im.clone(), self.re.clone())
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        Cx::new(
            Float::with_val(self.prec(), &self.re / &n),
            -Float::with_val(self.prec(), &self.im / &n),
        )
    }

    pub fn div(&self, other: &Cx) -> Self {
        self * &other.recip()
    }

    pub fn powi(&self, e: i64) -> Self {
        let base = if e < 0 { self.recip() } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Cx::one(self.prec());
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        acc
    }

    pub fn exp(&self) -> Self {
        let m = self.re.clone().exp();
        Cx::cis(&self.im).scale(&m)
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        Cx::new(self.abs().ln(), self.arg())
    }

    /// Principal power `self^e` for real `e`.
    pub fn powf(&self, e: &Real) -> Self {
        if self.is_zero() {
            return Cx::zero(self.prec());
        }
        let r = self.abs().pow(e);
        let theta = self.arg() * e;
        Cx::cis(&theta).scale(&r)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl Add<&Cx> for &Cx {
    type Output = Cx;
    fn add(self, o: &Cx) -> Cx {
        Cx::new(
            Float::with_val(self.prec(), &self.re + &o.re),
            Float::with_val(self.prec(), &self.im + &o.im),
        )
    }
}

impl Add for Cx {
    type Output = Cx;
    fn add(self, o: Cx) -> Cx {
        Cx::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub<&Cx> for &Cx {
    type Output = Cx;
    fn sub(self, o: &Cx) -> Cx {
        Cx::new(
            Float::with_val(self.prec(), &self.re - &o.re),
            Float::with_val(self.prec(), &self.im - &o.im),
        )
    }
}

impl Sub for Cx {
    type Output = Cx;
    fn sub(self, o: Cx) -> Cx {
        Cx::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul<&Cx> for &Cx {
    type Output = Cx;
    fn mul(self, o: &Cx) -> Cx {
        let p = self.prec();
        let re = Float::with_val(p, &self.re * &o.re) - Float::with_val(p, &self.im * &o.im);
        let im = Float::with_val(p, &self.re * &o.im) + Float::with_val(p, &self.im * &o.re);
        Cx::new(re, im)
    }
}

impl Mul for Cx {
    type Output = Cx;
    fn mul(self, o: Cx) -> Cx {
        &self * &o
    }
}

impl Neg for Cx {
    type Output = Cx;
    fn neg(self) -> Cx {
        Cx::new(-self.re, -self.im)
    }
}

impl AddAssign<&Cx> for Cx {
    fn add_assign(&mut self, o: &Cx) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl AddAssign for Cx {
    fn add_assign(&mut self, o: Cx) {
        self.re += o.re;
        self.im += o.im;
    }
}

impl SubAssign<&Cx> for Cx {
    fn sub_assign(&mut self, o: &Cx) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl MulAssign<&Cx> for Cx {
    fn mul_assign(&mut self, o: &Cx) {
        *self = &*self * o;
    }
}

/// Multiply-accumulate `acc += a * b` using one scratch value.
pub fn mul_add_assign(acc: &mut Cx, a: &Cx, b: &Cx, tmp: &mut Real) {
    tmp.assign(&a.re * &b.re);
    acc.re += &*tmp;
    tmp.assign(&a.im * &b.im);
    acc.re -= &*tmp;
    tmp.assign(&a.re * &b.im);
    acc.im += &*tmp;
    tmp.assign(&a.im * &b.re);
    acc.im += &*tmp;
}
