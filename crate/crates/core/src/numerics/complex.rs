use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;

use super::BigFloat;

/// Complex number with [`BigFloat`] parts. The precision of a value is the
/// larger of its parts' precisions.
#[derive(Clone, Debug, PartialEq)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigComplex {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        BigComplex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        BigComplex::new(BigFloat::zero(prec), BigFloat::zero(prec))
    }

    pub fn one(prec: u32) -> Self {
        BigComplex::from_i64(1, prec)
    }

    pub fn i(prec: u32) -> Self {
        BigComplex::new(BigFloat::zero(prec), BigFloat::one(prec))
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        BigComplex::new(BigFloat::from_i64(v, prec), BigFloat::zero(prec))
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> Self {
        BigComplex::new(BigFloat::from_bigint(v, prec), BigFloat::zero(prec))
    }

    pub fn from_real(re: BigFloat) -> Self {
        let p = re.prec();
        BigComplex::new(re, BigFloat::zero(p))
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        BigComplex::new(BigFloat::from_f64(re, prec), BigFloat::from_f64(im, prec))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        BigComplex::new(self.re.with_prec(prec), self.im.with_prec(prec))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        BigComplex::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> BigFloat {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn abs(&self) -> BigFloat {
        self.norm_sqr().sqrt()
    }

    /// Upper bound on `log2 |z|` (exponent of the larger part plus one).
    pub fn log2_ceil(&self) -> Option<i64> {
        match (self.re.log2_ceil(), self.im.log2_ceil()) {
            (None, None) => None,
            (a, b) => Some(a.unwrap_or(i64::MIN).max(b.unwrap_or(i64::MIN)) + 1),
        }
    }

    pub fn scale(&self, k: &BigFloat) -> Self {
        BigComplex::new(&self.re * k, &self.im * k)
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        BigComplex::new(self.re.mul_pow2(k), self.im.mul_pow2(k))
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        let k = BigFloat::from_i64(k, 64);
        self.scale(&k)
    }

    pub fn add_i64(&self, k: i64) -> Self {
        BigComplex::new(&self.re + &BigFloat::from_i64(k, 64), self.im.clone())
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn recip(&self) -> Self {
        let d = self.norm_sqr();
        BigComplex::new(&self.re / &d, -(&self.im / &d))
    }

    /// Principal square root (branch cut on the negative real axis, which
    /// maps to the positive imaginary axis).
    pub fn sqrt(&self) -> Self {
        let p = self.prec();
        if self.is_zero() {
            return BigComplex::zero(p);
        }
        let r = self.abs();
        if !self.re.is_negative() {
            let s = ((&r + &self.re).mul_pow2(-1)).sqrt();
            let t = (&self.im / &s).mul_pow2(-1);
            BigComplex::new(s, t)
        } else {
            let t = ((&r - &self.re).mul_pow2(-1)).sqrt();
            let s = (self.im.abs() / &t).mul_pow2(-1);
            let t = if self.im.is_negative() { -t } else { t };
            BigComplex::new(s, t)
        }
    }

    pub fn exp(&self) -> Self {
        let m = self.re.exp();
        let (c, s) = self.im.cos_sin();
        BigComplex::new(&m * &c, &m * &s)
    }

    /// `exp(2 pi i z)`.
    pub fn exp_2pi_i(&self) -> Self {
        let p = self.prec() + 8;
        let two_pi = BigFloat::pi(p).mul_pow2(1);
        let arg = BigComplex::new(-(&self.im * &two_pi), &self.re * &two_pi);
        arg.exp().with_prec(self.prec())
    }

    pub fn powi(&self, n: i64) -> Self {
        let mut base = self.clone();
        let mut acc = BigComplex::one(self.prec());
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        if n < 0 {
            acc.recip()
        } else {
            acc
        }
    }

    /// `|self - other| <= 2^k * max(1, |other|)`, tested in a way that never
    /// needs the square root.
    pub fn close_to(&self, other: &BigComplex, k: i64) -> bool {
        let diff = (self - other).norm_sqr();
        if diff.is_zero() {
            return true;
        }
        let scale = other.norm_sqr().max(BigFloat::one(64));
        let bound = scale.mul_pow2(2 * k);
        diff <= bound
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        let im = self.im.to_sci_string(digits);
        let im = if im.starts_with('-') {
            im
        } else {
            format!("+{im}")
        };
        write!(f, "{}{}i", self.re.to_sci_string(digits), im)
    }
}

fn cadd(a: &BigComplex, b: &BigComplex) -> BigComplex {
    BigComplex::new(&a.re + &b.re, &a.im + &b.im)
}

fn csub(a: &BigComplex, b: &BigComplex) -> BigComplex {
    BigComplex::new(&a.re - &b.re, &a.im - &b.im)
}

fn cmul(a: &BigComplex, b: &BigComplex) -> BigComplex {
    BigComplex::new(
        &a.re * &b.re - &a.im * &b.im,
        &a.re * &b.im + &a.im * &b.re,
    )
}

fn cdiv(a: &BigComplex, b: &BigComplex) -> BigComplex {
    let d = b.norm_sqr();
    let re = &a.re * &b.re + &a.im * &b.im;
    let im = &a.im * &b.re - &a.re * &b.im;
    BigComplex::new(&re / &d, &im / &d)
}

macro_rules! forward_cbinop {
    ($tr:ident, $method:ident, $f:ident) => {
        impl<'a> $tr<&'a BigComplex> for &'a BigComplex {
            type Output = BigComplex;
            fn $method(self, rhs: &'a BigComplex) -> BigComplex {
                $f(self, rhs)
            }
        }
        impl $tr<BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $method(self, rhs: BigComplex) -> BigComplex {
                $f(&self, &rhs)
            }
        }
        impl<'a> $tr<&'a BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $method(self, rhs: &'a BigComplex) -> BigComplex {
                $f(&self, rhs)
            }
        }
    };
}

forward_cbinop!(Add, add, cadd);
forward_cbinop!(Sub, sub, csub);
forward_cbinop!(Mul, mul, cmul);
forward_cbinop!(Div, div, cdiv);

impl Neg for BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex::new(-self.re, -self.im)
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        -self.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn principal_sqrt_branches() {
        let p = 128;
        let minus_one = BigComplex::from_i64(-1, p);
        let r = minus_one.sqrt();
        assert!(r.close_to(&BigComplex::i(p), -120));
        let z = BigComplex::from_f64(-3.0, -4.0, p);
        // sqrt(-3-4i) = 1-2i
        assert!(z.sqrt().close_to(&BigComplex::from_f64(1.0, -2.0, p), -120));
        let z = BigComplex::from_f64(3.0, 4.0, p);
        assert!(z.sqrt().close_to(&BigComplex::from_f64(2.0, 1.0, p), -120));
    }

    #[test]
    fn euler_identity() {
        let p = 160;
        let half = BigComplex::from_f64(0.5, 0.0, p);
        // exp(2 pi i / 2) = -1
        assert!(half
            .exp_2pi_i()
            .close_to(&BigComplex::from_i64(-1, p), -150));
    }

    #[test]
    fn division_inverts_multiplication() {
        let p = 128;
        let a = BigComplex::from_f64(1.25, -7.5, p);
        let b = BigComplex::from_f64(-0.375, 2.0, p);
        assert!((&(&a * &b) / &b).close_to(&a, -120));
        assert!(b.powi(-3).close_to(&b.powi(3).recip(), -118));
    }
}
