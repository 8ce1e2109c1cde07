//! Multiprecision complex numerics: polynomials from roots, rounding to
//! integer polynomials, and simultaneous root finding.

mod complex;
mod float;
mod roots;

pub use complex::BigComplex;
pub use float::BigFloat;
pub use roots::find_roots;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exactpoly::IntPoly;

/// How the class polynomial pipeline escalates precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub start_bits: u32,
    pub max_bits: u32,
    /// Rounding succeeds when every coefficient is within `2^-tol_bits` of an
    /// integer.
    pub tol_bits: u32,
    /// Number of consecutive precisions that must give the same polynomial.
    pub stable_runs: u32,
}

impl PrecisionPolicy {
    pub const MIN_START_BITS: u32 = 64;
    pub const DEFAULT_MAX_BITS: u32 = 16384;
    pub const DEFAULT_TOL_BITS: u32 = 32;

    /// Default policy for a polynomial of the given degree:
    /// start at `max(128, 10 deg + 32)` bits.
    pub fn for_degree(degree: usize) -> Self {
        PrecisionPolicy {
            start_bits: (10 * degree as u32 + 32).max(128),
            max_bits: Self::DEFAULT_MAX_BITS,
            tol_bits: Self::DEFAULT_TOL_BITS,
            stable_runs: 2,
        }
    }

    pub fn with_start_bits(mut self, bits: u32) -> Self {
        self.start_bits = bits;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.start_bits < Self::MIN_START_BITS {
            return Err(Error::domain(format!(
                "start precision {} is below {} bits",
                self.start_bits,
                Self::MIN_START_BITS
            )));
        }
        if self.max_bits < self.start_bits {
            return Err(Error::domain("max_bits is below start_bits"));
        }
        if self.stable_runs == 0 {
            return Err(Error::domain("stable_runs must be at least 1"));
        }
        Ok(())
    }

    pub fn tolerance(&self) -> BigFloat {
        BigFloat::one(64).mul_pow2(-(self.tol_bits as i64))
    }
}

/// Coefficients of `prod (x - v)`, lowest degree first (monic).
pub fn poly_from_roots(values: &[BigComplex]) -> Vec<BigComplex> {
    let prec = values.iter().map(BigComplex::prec).max().unwrap_or(64);
    let mut coeffs = vec![BigComplex::one(prec)];
    for v in values {
        let mut next = vec![BigComplex::zero(prec); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] = &next[i + 1] + c;
            next[i] = &next[i] - &(c * v);
        }
        coeffs = next;
    }
    coeffs
}

/// Rounds complex coefficients to the nearest integers. The residual is the
/// largest distance `|c - round(Re c)|` over all coefficients, which includes
/// the imaginary part.
pub fn round_to_int_poly(coeffs: &[BigComplex], tol: &BigFloat) -> Result<(IntPoly, BigFloat)> {
    let prec = coeffs.iter().map(BigComplex::prec).max().unwrap_or(64);
    let mut ints = Vec::with_capacity(coeffs.len());
    let mut residual = BigFloat::zero(prec);
    for c in coeffs {
        let r: BigInt = c.re.round();
        let d = BigComplex::new(&c.re - &BigFloat::from_bigint(&r, prec), c.im.clone()).abs();
        if d > residual {
            residual = d;
        }
        ints.push(r);
    }
    if residual >= *tol {
        return Err(Error::RoundingFailure {
            residual: residual.to_sci_string(6),
        });
    }
    Ok((IntPoly::new(ints), residual))
}

/// Evaluates an integer polynomial at a complex point.
pub fn eval_int_poly(p: &IntPoly, z: &BigComplex) -> BigComplex {
    let prec = z.prec();
    p.coeffs()
        .iter()
        .rev()
        .fold(BigComplex::zero(prec), |acc, c| {
            &(&acc * z) + &BigComplex::from_bigint(c, prec)
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_of_simple_roots() {
        let p = 128;
        let c = poly_from_roots(&[BigComplex::from_i64(1, p), BigComplex::from_i64(2, p)]);
        let tol = BigFloat::one(64).mul_pow2(-32);
        let (poly, res) = round_to_int_poly(&c, &tol).unwrap();
        assert_eq!(poly, IntPoly::from_i64s(&[2, -3, 1]));
        assert!(res.is_zero());

        let c = poly_from_roots(&[BigComplex::i(p), -BigComplex::i(p)]);
        let (poly, res) = round_to_int_poly(&c, &tol).unwrap();
        assert_eq!(poly, IntPoly::from_i64s(&[1, 0, 1]));
        assert!(res.is_zero() || res.log2_ceil().unwrap() < -(p as i64) + 8);
    }

    #[test]
    fn rounding_examples() {
        let p = 128;
        let tol = BigFloat::from_f64(1e-6, 64);
        let c = vec![
            BigComplex::from_f64(2.0000000001, 0.0, p),
            BigComplex::from_f64(-3.0000000002, 0.0, p),
        ];
        let (poly, res) = round_to_int_poly(&c, &tol).unwrap();
        assert_eq!(poly, IntPoly::from_i64s(&[2, -3]));
        assert!((res.to_f64() - 2e-10).abs() < 1e-15);

        let c = vec![BigComplex::from_f64(0.5, 0.0, p), BigComplex::from_f64(1.0, 0.0, p)];
        match round_to_int_poly(&c, &tol) {
            Err(Error::RoundingFailure { residual }) => assert_eq!(residual, "5.00000e-1"),
            other => panic!("expected rounding failure, got {other:?}"),
        }
    }

    #[test]
    fn policy_defaults() {
        let p = PrecisionPolicy::for_degree(7);
        assert_eq!(p.start_bits, 128);
        assert_eq!(PrecisionPolicy::for_degree(20).start_bits, 232);
        assert_eq!(p.max_bits, 16384);
        assert!(p.validate().is_ok());
        assert!(p.clone().with_start_bits(32).validate().is_err());
    }
}
