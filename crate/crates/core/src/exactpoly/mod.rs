//! Exact integer and rational polynomials, and arithmetic in `Q[x]/(m)`.

mod laurent;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use laurent::{verify_root_relation, LaurentExpr};

pub type BigRat = BigRational;

/// Dense integer polynomial, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

/// Dense rational polynomial, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<BigRat>,
}

fn trim<T: Zero>(v: &mut Vec<T>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        trim(&mut coeffs);
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn to_rat(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .map(|c| BigRat::from_integer(c.clone()))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// True when `gcd(p, p')` is a constant.
    pub fn is_square_free(&self) -> bool {
        let p = self.to_rat();
        let g = p.gcd(&p.derivative());
        g.degree().unwrap_or(0) == 0
    }

    /// Human-readable form, highest degree first: `x^7+4*x^6-1`.
    pub fn pretty(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push(if neg { '-' } else { '+' });
            }
            let mono = match i {
                0 => String::new(),
                1 => "x".into(),
                _ => format!("x^{i}"),
            };
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        out
    }
}

/// Lowest-degree-first comma-separated coefficients, e.g. `1,0,-2,-3,1,5,4,1`.
impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for IntPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<BigInt>()
                    .map_err(|_| Error::domain(format!("bad polynomial coefficient `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IntPoly::new(coeffs))
    }
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRat>) -> Self {
        trim(&mut coeffs);
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRat) -> Self {
        RatPoly::new(vec![c])
    }

    pub fn one() -> Self {
        RatPoly::constant(BigRat::one())
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        RatPoly::new(vec![BigRat::zero(), BigRat::one()])
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        IntPoly::from_i64s(coeffs).to_rat()
    }

    pub fn coeffs(&self) -> &[BigRat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRat> {
        self.coeffs.last()
    }

    /// Integer polynomial if every coefficient is integral.
    pub fn to_int(&self) -> Option<IntPoly> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect::<Option<Vec<_>>>()
            .map(IntPoly::new)
    }

    pub fn add(&self, other: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = BigRat::zero();
        RatPoly::new(
            (0..n)
                .map(|i| {
                    self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero)
                })
                .collect(),
        )
    }

    pub fn neg(&self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &RatPoly) -> RatPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigRat) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        if self.is_zero() || other.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![BigRat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }

    pub fn derivative(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRat::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigRat) -> BigRat {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRat::zero(), |acc, c| acc * x + c)
    }

    pub fn monic(&self) -> RatPoly {
        match self.leading() {
            None => RatPoly::zero(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    /// Euclidean division `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &RatPoly) -> Result<(RatPoly, RatPoly)> {
        let dd = d
            .degree()
            .ok_or_else(|| Error::InvalidModulus("division by the zero polynomial".into()))?;
        let lead_inv = d.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((RatPoly::zero(), self.clone()));
        }
        let mut quot = vec![BigRat::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((RatPoly::new(quot), RatPoly::new(rem)))
    }

    /// Monic greatest common divisor (zero only if both are zero).
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

fn check_modulus(m: &RatPoly) -> Result<usize> {
    match m.degree() {
        None => Err(Error::InvalidModulus("modulus is the zero polynomial".into())),
        Some(0) => Err(Error::InvalidModulus("modulus is a nonzero constant".into())),
        Some(d) => Ok(d),
    }
}

/// Remainder of `p` modulo `m` (exact long division).
pub fn polymod_reduce(p: &RatPoly, m: &RatPoly) -> Result<RatPoly> {
    if m.is_zero() {
        return Err(Error::InvalidModulus("modulus is the zero polynomial".into()));
    }
    Ok(p.div_rem(m)?.1)
}

/// Inverse of `g` in `Q[x]/(m)` via the extended Euclidean algorithm.
pub fn polymod_invert(g: &RatPoly, m: &RatPoly) -> Result<RatPoly> {
    check_modulus(m)?;
    // invariant: s_i * g == r_i (mod m)
    let (mut r0, mut r1) = (m.clone(), polymod_reduce(g, m)?);
    let (mut s0, mut s1) = (RatPoly::zero(), RatPoly::one());
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1)?;
        let s = s0.sub(&q.mul(&s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    if r0.degree() != Some(0) {
        return Err(Error::NonInvertible);
    }
    let inv = s0.scale(&r0.coeffs[0].recip());
    polymod_reduce(&inv, m)
}

/// `a * b mod m`.
pub fn polymod_mul(a: &RatPoly, b: &RatPoly, m: &RatPoly) -> Result<RatPoly> {
    polymod_reduce(&a.mul(b), m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w71() -> RatPoly {
        RatPoly::from_i64s(&[-1, -1, 1, 1, 1, -1, -2, 1])
    }

    #[test]
    fn reduce_examples() {
        let x2 = RatPoly::from_i64s(&[0, 0, 1]);
        let m = RatPoly::from_i64s(&[1, 0, 1]);
        assert_eq!(polymod_reduce(&x2, &m).unwrap(), RatPoly::from_i64s(&[-1]));
        let p = RatPoly::from_i64s(&[3, 1]);
        assert_eq!(polymod_reduce(&p, &m).unwrap(), p);
        let x7 = RatPoly::from_i64s(&[0, 0, 0, 0, 0, 0, 0, 1]);
        assert_eq!(
            polymod_reduce(&x7, &w71()).unwrap(),
            RatPoly::from_i64s(&[1, 1, -1, -1, -1, 1, 2])
        );
        assert!(matches!(
            polymod_reduce(&x7, &RatPoly::zero()),
            Err(Error::InvalidModulus(_))
        ));
    }

    #[test]
    fn invert_examples() {
        let m = w71();
        assert_eq!(polymod_invert(&RatPoly::one(), &m).unwrap(), RatPoly::one());
        let inv_x = polymod_invert(&RatPoly::x(), &m).unwrap();
        assert_eq!(inv_x, RatPoly::from_i64s(&[-1, 1, 1, 1, -1, -2, 1]));
        assert_eq!(polymod_mul(&inv_x, &RatPoly::x(), &m).unwrap(), RatPoly::one());
        let shared = polymod_invert(&RatPoly::from_i64s(&[-1, 1]), &RatPoly::from_i64s(&[-1, 0, 1]));
        assert!(matches!(shared, Err(Error::NonInvertible)));
    }

    #[test]
    fn display_and_parse() {
        let h71 = IntPoly::from_i64s(&[1, 0, -2, -3, 1, 5, 4, 1]);
        assert_eq!(h71.to_string(), "1,0,-2,-3,1,5,4,1");
        assert_eq!("1,0,-2,-3,1,5,4,1".parse::<IntPoly>().unwrap(), h71);
        assert_eq!(h71.pretty(), "x^7+4*x^6+5*x^5+x^4-3*x^3-2*x^2+1");
        assert!(h71.is_monic());
        assert!(h71.is_square_free());
        assert!(!IntPoly::from_i64s(&[1, 2, 1]).is_square_free());
    }

    #[test]
    fn gcd_is_monic() {
        let a = RatPoly::from_i64s(&[-2, 0, 2]); // 2(x-1)(x+1)
        let b = RatPoly::from_i64s(&[3, 3]); // 3(x+1)
        assert_eq!(a.gcd(&b), RatPoly::from_i64s(&[1, 1]));
    }
}
