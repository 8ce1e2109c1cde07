//! Binary floating point numbers with an arbitrary-length mantissa.
//!
//! A [`BigFloat`] is `mant * 2^exp` with `|mant| < 2^prec`. Every operation
//! rounds its exact result to nearest at the larger precision of its operands.
//! Transcendental functions are computed in fixed point with guard bits and
//! rounded once at the end.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Mutex;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
    prec: u32,
}

fn round_shift(m: &BigInt, shift: u64) -> BigInt {
    if shift == 0 {
        return m.clone();
    }
    let (sign, mag) = (m.sign(), m.magnitude());
    let half = num_bigint::BigUint::one() << (shift - 1);
    let r = (mag + half) >> shift;
    BigInt::from_biguint(if r.is_zero() { Sign::NoSign } else { sign }, r)
}

impl BigFloat {
    fn normalized(mant: BigInt, exp: i64, prec: u32) -> Self {
        let bits = mant.bits();
        if bits > prec as u64 {
            let shift = bits - prec as u64;
            let mant = round_shift(&mant, shift);
            BigFloat {
                mant,
                exp: exp + shift as i64,
                prec,
            }
        } else if mant.is_zero() {
            BigFloat::zero(prec)
        } else {
            BigFloat { mant, exp, prec }
        }
    }

    pub fn zero(prec: u32) -> Self {
        BigFloat {
            mant: BigInt::zero(),
            exp: 0,
            prec,
        }
    }

    pub fn one(prec: u32) -> Self {
        BigFloat::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        BigFloat::normalized(BigInt::from(v), 0, prec)
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> Self {
        BigFloat::normalized(v.clone(), 0, prec)
    }

    pub fn from_ratio(v: &BigRational, prec: u32) -> Self {
        (BigFloat::from_bigint(v.numer(), prec + 2) / BigFloat::from_bigint(v.denom(), prec + 2))
            .with_prec(prec)
    }

    /// Exact conversion of a finite `f64` (then rounded to `prec`).
    pub fn from_f64(v: f64, prec: u32) -> Self {
        assert!(v.is_finite(), "non-finite f64");
        if v == 0.0 {
            return BigFloat::zero(prec);
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let e = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, exp) = if e == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), e - 1075)
        };
        BigFloat::normalized(BigInt::from(m) * sign, exp, prec)
    }

    /// `m * 2^e` rounded to `prec`.
    pub fn from_parts(m: BigInt, e: i64, prec: u32) -> Self {
        BigFloat::normalized(m, e, prec)
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        BigFloat::normalized(self.mant.clone(), self.exp, prec)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        BigFloat {
            mant: self.mant.abs(),
            exp: self.exp,
            prec: self.prec,
        }
    }

    /// Exponent of the leading bit plus one: `2^(e-1) <= |x| < 2^e`.
    /// `None` for zero.
    pub fn log2_ceil(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp + self.mant.bits() as i64)
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        BigFloat {
            mant: self.mant.clone(),
            exp: if self.is_zero() { 0 } else { self.exp + k },
            prec: self.prec,
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// Square root of a non-negative number.
    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "sqrt of negative BigFloat");
        if self.is_zero() {
            return self.clone();
        }
        let p = self.prec as u64;
        let bits = self.mant.bits();
        let mut shift = (2 * p + 4).saturating_sub(bits) as i64;
        if (self.exp - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let m = &self.mant << shift as usize;
        let r = m.sqrt();
        BigFloat::normalized(r, (self.exp - shift) / 2, self.prec)
    }

    /// Value as `round(x * 2^w)`.
    pub fn to_fixed(&self, w: u32) -> BigInt {
        let e = self.exp + w as i64;
        if e >= 0 {
            &self.mant << e as usize
        } else {
            round_shift(&self.mant, (-e) as u64)
        }
    }

    pub fn from_fixed(v: BigInt, w: u32, prec: u32) -> Self {
        BigFloat::normalized(v, -(w as i64), prec)
    }

    /// Nearest integer, ties away from zero.
    pub fn round(&self) -> BigInt {
        self.to_fixed(0)
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as usize
        } else {
            self.mant.div_floor(&(BigInt::one() << (-self.exp) as usize))
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits();
        let drop = bits.saturating_sub(60);
        let top = round_shift(&self.mant, drop).to_f64().unwrap_or(f64::NAN);
        let e = self.exp + drop as i64;
        if e > 2000 {
            return top.signum() * f64::INFINITY;
        }
        if e < -2200 {
            return 0.0;
        }
        top * 2f64.powi(e as i32)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as usize)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    /// Scientific notation with `digits` significant decimal digits,
    /// e.g. `-1.25000e-3`.
    pub fn to_sci_string(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.is_zero() {
            return format!("0.{}e0", "0".repeat(digits - 1));
        }
        let l2 = self.log2_ceil().unwrap_or(0) as f64;
        let mut e10 = ((l2 - 1.0) * std::f64::consts::LOG10_2).floor() as i64;
        let exact = self.abs().to_rational();
        let ten = BigInt::from(10);
        let scaled = |e10: i64| -> BigInt {
            let k = digits as i64 - 1 - e10;
            let v = if k >= 0 {
                &exact * BigRational::from_integer(num_traits::pow(ten.clone(), k as usize))
            } else {
                &exact / BigRational::from_integer(num_traits::pow(ten.clone(), (-k) as usize))
            };
            v.round().to_integer()
        };
        let mut q = scaled(e10);
        let limit = num_traits::pow(ten.clone(), digits);
        while q >= limit {
            e10 += 1;
            q = scaled(e10);
        }
        while q < num_traits::pow(ten.clone(), digits - 1) {
            e10 -= 1;
            q = scaled(e10);
        }
        let s = q.to_string();
        let sign = if self.is_negative() { "-" } else { "" };
        if digits == 1 {
            format!("{sign}{s}e{e10}")
        } else {
            format!("{sign}{}.{}e{e10}", &s[..1], &s[1..])
        }
    }

    pub fn pi(prec: u32) -> Self {
        BigFloat::from_fixed(pi_fixed(prec + 8), prec + 8, prec)
    }

    pub fn ln2(prec: u32) -> Self {
        BigFloat::from_fixed(ln2_fixed(prec + 8), prec + 8, prec)
    }

    pub fn exp(&self) -> Self {
        let p = self.prec;
        if self.is_zero() {
            return BigFloat::one(p);
        }
        // x = k ln2 + r with |r| <= ln2/2
        let mag = self.log2_ceil().unwrap_or(0).max(0) as u32;
        let wp = p + mag + 16;
        let ln2 = BigFloat::ln2(wp);
        let x = self.with_prec(wp);
        let k = (&x / &ln2).round();
        let r = &x - &(&ln2 * &BigFloat::from_bigint(&k, wp));
        let w = p + 24;
        let e = exp_fixed(&r.to_fixed(w), w);
        let k = k.to_i64().expect("exponent out of range");
        BigFloat::normalized(e, k - w as i64, p)
    }

    /// `(cos x, sin x)`.
    pub fn cos_sin(&self) -> (Self, Self) {
        let p = self.prec;
        if self.is_zero() {
            return (BigFloat::one(p), BigFloat::zero(p));
        }
        let mag = self.log2_ceil().unwrap_or(0).max(0) as u32;
        let wp = p + mag + 16;
        let two_pi = BigFloat::pi(wp).mul_pow2(1);
        let x = self.with_prec(wp);
        let k = (&x / &two_pi).round();
        let r = &x - &(&two_pi * &BigFloat::from_bigint(&k, wp));
        let w = p + 24;
        let (c, s) = cis_fixed(&r.to_fixed(w), w);
        (
            BigFloat::from_fixed(c, w, p),
            BigFloat::from_fixed(s, w, p),
        )
    }

    pub fn powi(&self, n: i64) -> Self {
        let mut base = self.clone();
        let mut acc = BigFloat::one(self.prec);
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
            BigFloat::one(self.prec) / acc
        } else {
            acc
        }
    }

    fn add_impl(&self, other: &BigFloat, negate: bool) -> BigFloat {
        let prec = self.prec.max(other.prec);
        let b_mant = if negate { -&other.mant } else { other.mant.clone() };
        if other.is_zero() {
            return self.with_prec(prec);
        }
        if self.is_zero() {
            return BigFloat::normalized(b_mant, other.exp, prec);
        }
        let top_a = self.exp + self.mant.bits() as i64;
        let top_b = other.exp + other.mant.bits() as i64;
        let gap = prec as i64 + 4;
        if top_a - top_b > gap {
            return self.with_prec(prec);
        }
        if top_b - top_a > gap {
            return BigFloat::normalized(b_mant, other.exp, prec);
        }
        let e = self.exp.min(other.exp);
        let m = (&self.mant << (self.exp - e) as usize) + (b_mant << (other.exp - e) as usize);
        BigFloat::normalized(m, e, prec)
    }

    fn mul_impl(&self, other: &BigFloat) -> BigFloat {
        BigFloat::normalized(
            &self.mant * &other.mant,
            self.exp + other.exp,
            self.prec.max(other.prec),
        )
    }

    fn div_impl(&self, other: &BigFloat) -> BigFloat {
        assert!(!other.is_zero(), "BigFloat division by zero");
        let prec = self.prec.max(other.prec);
        if self.is_zero() {
            return BigFloat::zero(prec);
        }
        let shift =
            (prec as i64 + 2 + other.mant.bits() as i64 - self.mant.bits() as i64).max(0);
        let q = (&self.mant << shift as usize) / &other.mant;
        BigFloat::normalized(q, self.exp - shift - other.exp, prec)
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for BigFloat {}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BigFloat {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as usize;
        let b = &other.mant << (other.exp - e) as usize;
        a.cmp(&b)
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f
            .precision()
            .unwrap_or(((self.prec as f64) * std::f64::consts::LOG10_2) as usize);
        f.write_str(&self.to_sci_string(digits.max(1)))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<'a> $tr<&'a BigFloat> for &'a BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: &'a BigFloat) -> BigFloat {
                $body(self, rhs)
            }
        }
        impl $tr<BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: BigFloat) -> BigFloat {
                $body(&self, &rhs)
            }
        }
        impl<'a> $tr<&'a BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: &'a BigFloat) -> BigFloat {
                $body(&self, rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &BigFloat, b: &BigFloat| a.add_impl(b, false));
forward_binop!(Sub, sub, |a: &BigFloat, b: &BigFloat| a.add_impl(b, true));
forward_binop!(Mul, mul, |a: &BigFloat, b: &BigFloat| a.mul_impl(b));
forward_binop!(Div, div, |a: &BigFloat, b: &BigFloat| a.div_impl(b));

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat {
            mant: -self.mant,
            exp: self.exp,
            prec: self.prec,
        }
    }
}

impl Neg for &BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        -self.clone()
    }
}

/// `sum_k 1/((2k+1) x^(2k+1))` scaled by `2^w`, i.e. `atan(1/x)` (or
/// `atanh(1/x)` when `hyperbolic`).
fn arctan_inv_fixed(x: u32, w: u32, hyperbolic: bool) -> BigInt {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut power = (BigInt::one() << w as usize) / &x;
    let mut sum = power.clone();
    let mut k: u64 = 1;
    loop {
        power /= &x2;
        let term = &power / BigInt::from(2 * k + 1);
        if term.is_zero() {
            break;
        }
        if hyperbolic || k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        k += 1;
    }
    sum
}

struct ConstCache {
    bits: u32,
    value: BigInt,
}

fn cached(
    cache: &Mutex<Option<ConstCache>>,
    w: u32,
    compute: impl Fn(u32) -> BigInt,
) -> BigInt {
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(c) = guard.as_ref() {
        if c.bits >= w {
            return round_shift(&c.value, (c.bits - w) as u64);
        }
    }
    let bits = w.max(256) + 32;
    let value = compute(bits);
    let out = round_shift(&value, (bits - w) as u64);
    *guard = Some(ConstCache { bits, value });
    out
}

static PI_CACHE: Mutex<Option<ConstCache>> = Mutex::new(None);
static LN2_CACHE: Mutex<Option<ConstCache>> = Mutex::new(None);

/// `round(pi * 2^w)` via Machin's formula.
pub(crate) fn pi_fixed(w: u32) -> BigInt {
    cached(&PI_CACHE, w, |bits| {
        let g = bits + 16;
        let v = arctan_inv_fixed(5, g, false) * 16 - arctan_inv_fixed(239, g, false) * 4;
        round_shift(&v, 16)
    })
}

/// `round(ln 2 * 2^w)` via `ln 2 = 2 atanh(1/3)`.
pub(crate) fn ln2_fixed(w: u32) -> BigInt {
    cached(&LN2_CACHE, w, |bits| {
        let g = bits + 16;
        round_shift(&(arctan_inv_fixed(3, g, true) * 2), 16)
    })
}

/// `exp(r)` for a fixed-point `r` (scale `2^w`) with `|r| <= 1`.
fn exp_fixed(r: &BigInt, w: u32) -> BigInt {
    const HALVINGS: u32 = 12;
    let ww = w + HALVINGS + 16;
    let one = BigInt::one() << ww as usize;
    let y = r << (ww - w - HALVINGS) as usize;
    let mut sum = one.clone();
    let mut term = one;
    let mut k: u64 = 1;
    loop {
        term = (&term * &y) >> ww as usize;
        term /= BigInt::from(k);
        if term.is_zero() {
            break;
        }
        sum += &term;
        k += 1;
    }
    for _ in 0..HALVINGS {
        sum = (&sum * &sum) >> ww as usize;
    }
    round_shift(&sum, (ww - w) as u64)
}

/// `(cos r, sin r)` for fixed-point `r` (scale `2^w`) with `|r| <= 4`.
fn cis_fixed(r: &BigInt, w: u32) -> (BigInt, BigInt) {
    const HALVINGS: u32 = 14;
    let ww = w + HALVINGS + 16;
    let one = BigInt::one() << ww as usize;
    let y = r << (ww - w) as usize;
    let y = &y >> HALVINGS as usize;
    // Taylor series of exp(i y)
    let mut re = one.clone();
    let mut im = BigInt::zero();
    let mut term = one;
    let mut k: u64 = 1;
    loop {
        term = (&term * &y) >> ww as usize;
        term /= BigInt::from(k);
        if term.is_zero() {
            break;
        }
        match k % 4 {
            1 => im += &term,
            2 => re -= &term,
            3 => im -= &term,
            _ => re += &term,
        }
        k += 1;
    }
    for _ in 0..HALVINGS {
        let nre = (&re * &re - &im * &im) >> ww as usize;
        let nim = (&re * &im) >> (ww - 1) as usize;
        re = nre;
        im = nim;
    }
    let d = (ww - w) as u64;
    (round_shift(&re, d), round_shift(&im, d))
}
