use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use super::{polymod_invert, polymod_mul, polymod_reduce, BigRat, IntPoly, RatPoly};
use crate::error::Result;

/// Finite Laurent polynomial in one variable with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentExpr {
    terms: BTreeMap<i64, BigRat>,
}

impl LaurentExpr {
    pub fn new() -> Self {
        LaurentExpr::default()
    }

    /// Builds `sum c * x^e` from `(exponent, coefficient)` pairs; repeated
    /// exponents are added together.
    pub fn from_terms<I: IntoIterator<Item = (i64, i64)>>(terms: I) -> Self {
        let mut e = LaurentExpr::new();
        for (exp, c) in terms {
            e.add_term(exp, BigRat::from_integer(c.into()));
        }
        e
    }

    pub fn add_term(&mut self, exp: i64, c: BigRat) {
        let slot = self.terms.entry(exp).or_insert_with(BigRat::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRat)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Residue of the expression in `Q[x]/(m)`, where `x` is the class of the
    /// variable. Negative powers go through the inverse of `x`.
    pub fn residue(&self, m: &RatPoly) -> Result<RatPoly> {
        let mut acc = RatPoly::zero();
        if self.terms.is_empty() {
            return Ok(acc);
        }
        let x = polymod_reduce(&RatPoly::x(), m)?;
        let x_inv = if self.min_exponent().is_some_and(|e| e < 0) {
            Some(polymod_invert(&RatPoly::x(), m)?)
        } else {
            None
        };
        for (&e, c) in &self.terms {
            let base = if e < 0 { x_inv.as_ref().expect("inverse computed") } else { &x };
            let mut pow = polymod_reduce(&RatPoly::one(), m)?;
            for _ in 0..e.unsigned_abs() {
                pow = polymod_mul(&pow, base, m)?;
            }
            acc = acc.add(&pow.scale(c));
        }
        polymod_reduce(&acc, m)
    }
}

impl fmt::Display for LaurentExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (&e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { "-" } else { "+" })?;
            }
            first = false;
            let mag = c.abs();
            let unit = mag == BigRat::from_integer(1.into());
            match e {
                0 => write!(f, "{mag}")?,
                1 if unit => f.write_str("b")?,
                1 => write!(f, "{mag}*b")?,
                _ if unit => write!(f, "b^{e}")?,
                _ => write!(f, "{mag}*b^{e}")?,
            }
        }
        Ok(())
    }
}

/// Checks exactly that `target(expr(b)) == 0` in `Q[x]/(modulus)`, where `b`
/// is a root of `modulus`.
///
/// If `modulus` is irreducible (assumed, not checked) this proves that
/// `expr(b)` is a root of `target` for every root `b` of `modulus`.
pub fn verify_root_relation(
    expr: &LaurentExpr,
    target: &IntPoly,
    modulus: &IntPoly,
) -> Result<bool> {
    let m = modulus.to_rat();
    let value = expr.residue(&m)?;
    // Horner in the residue ring
    let mut acc = RatPoly::zero();
    for c in target.coeffs().iter().rev() {
        acc = polymod_mul(&acc, &value, &m)?.add(&RatPoly::constant(BigRat::from_integer(c.clone())));
    }
    Ok(polymod_reduce(&acc, &m)?.is_zero())
}
