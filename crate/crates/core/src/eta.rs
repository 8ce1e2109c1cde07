//! The Dedekind eta function at arbitrary precision, evaluated anywhere in
//! the upper half plane by reducing to the standard fundamental domain and
//! applying the exact multiplier system.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactpoly::BigRat;
use crate::numerics::{BigComplex, BigFloat};
use crate::quadforms::UnimodularMatrix;

const MAX_REDUCTION_STEPS: usize = 100_000;

/// Exact Dedekind sum `s(h, k)` for `k > 0`, `gcd(h, k) = 1`, by the
/// reciprocity law.
pub fn dedekind_sum(h: i64, k: i64) -> Result<BigRat> {
    dedekind_sum_big(&BigInt::from(h), &BigInt::from(k))
}

pub fn dedekind_sum_big(h: &BigInt, k: &BigInt) -> Result<BigRat> {
    if !k.is_positive() {
        return Err(Error::domain(format!("s(h, k) needs k > 0, got k = {k}")));
    }
    if !h.gcd(k).is_one() {
        return Err(Error::domain(format!("s(h, k) needs gcd(h, k) = 1, got ({h}, {k})")));
    }
    let rat = |n: &BigInt, d: &BigInt| BigRat::new(n.clone(), d.clone());
    let quarter = BigRat::new(1.into(), 4.into());
    let mut sign = BigRat::one();
    let mut acc = BigRat::zero();
    let mut h = h.mod_floor(k);
    let mut k = k.clone();
    // s(h, k) = -1/4 + (h/k + k/h + 1/(hk)) / 12 - s(k mod h, h)
    while !h.is_zero() {
        let term = -&quarter
            + (rat(&h, &k) + rat(&k, &h) + rat(&BigInt::one(), &(&h * &k))) / BigRat::from_integer(12.into());
        acc += &sign * term;
        sign = -sign;
        let next = k.mod_floor(&h);
        k = h;
        h = next;
    }
    Ok(acc)
}

/// Sign-normalizes `g` to `c > 0`, or `c = 0` and `d = 1`.
fn normalize(g: &UnimodularMatrix) -> UnimodularMatrix {
    if g.c.is_negative() || (g.c.is_zero() && g.d.is_negative()) {
        UnimodularMatrix {
            a: -&g.a,
            b: -&g.b,
            c: -&g.c,
            d: -&g.d,
        }
    } else {
        g.clone()
    }
}

/// The rational `r` with `eps(g) = exp(pi i r)`, reduced into `[0, 2)`, for
/// `g` in its sign normalization.
pub fn multiplier_exponent(g: &UnimodularMatrix) -> Result<BigRat> {
    let g = normalize(g);
    let r = if g.c.is_zero() {
        BigRat::new(g.b.clone(), 12.into())
    } else {
        BigRat::new(&g.a + &g.d, BigInt::from(12) * &g.c)
            - dedekind_sum_big(&g.d, &g.c)?
            - BigRat::new(1.into(), 4.into())
    };
    let two = BigRat::from_integer(2.into());
    let k = (&r / &two).floor();
    Ok(r - two * k)
}

fn exp_pi_i_rational(r: &BigRat, prec: u32) -> BigComplex {
    let angle = &BigFloat::from_ratio(r, prec) * &BigFloat::pi(prec);
    let (c, s) = angle.cos_sin();
    BigComplex::new(c, s)
}

/// `eps(g) (c tau + d)^(1/2)` with `g` sign-normalized, so that
/// `eta(g tau) = transform_factor(g, tau) eta(tau)`.
pub fn transform_factor(g: &UnimodularMatrix, tau: &BigComplex) -> Result<BigComplex> {
    let prec = tau.prec();
    let g = normalize(g);
    let eps = exp_pi_i_rational(&multiplier_exponent(&g)?, prec);
    if g.c.is_zero() {
        return Ok(eps);
    }
    let ctd = &tau.scale(&BigFloat::from_bigint(&g.c, prec)) + &BigComplex::from_bigint(&g.d, prec);
    Ok(&eps * &ctd.sqrt())
}

/// `g tau` for an integer matrix.
pub fn mobius(g: &UnimodularMatrix, tau: &BigComplex) -> BigComplex {
    let prec = tau.prec();
    let f = |v: &BigInt| BigFloat::from_bigint(v, prec);
    let num = &tau.scale(&f(&g.a)) + &BigComplex::from_real(f(&g.b));
    let den = &tau.scale(&f(&g.c)) + &BigComplex::from_real(f(&g.d));
    &num / &den
}

/// A matrix `g` with `g tau` in the closure of the standard fundamental
/// domain, up to rounding at its edges.
pub fn reduce_to_fundamental_domain(tau: &BigComplex) -> Result<UnimodularMatrix> {
    if tau.im.is_zero() || tau.im.is_negative() {
        return Err(Error::domain(format!("tau = {tau} is not in the upper half plane")));
    }
    let mut g = UnimodularMatrix::identity();
    let mut z = tau.clone();
    let one = BigFloat::one(64);
    for _ in 0..MAX_REDUCTION_STEPS {
        let m = z.re.round();
        if !m.is_zero() {
            let t = UnimodularMatrix::translation(-&m);
            z = BigComplex::new(&z.re - &BigFloat::from_bigint(&m, z.prec()), z.im.clone());
            g = t.mul(&g);
        }
        if z.norm_sqr() < one {
            z = -z.recip();
            g = UnimodularMatrix::swap().mul(&g);
        } else {
            return Ok(g);
        }
    }
    Err(Error::Convergence {
        iterations: MAX_REDUCTION_STEPS,
    })
}

/// `q^(1/24) sum_k (-1)^k q^(k(3k-1)/2)`, summed directly at `tau` with no
/// reduction. Converges anywhere but is only fast for `Im tau` bounded below.
pub fn eta_series(tau: &BigComplex) -> BigComplex {
    let prec = tau.prec();
    let q = tau.exp_2pi_i();
    let k24 = BigFloat::from_i64(24, prec);
    let q24 = BigComplex::new(&tau.re / &k24, &tau.im / &k24).exp_2pi_i();
    let eps = BigFloat::one(64).mul_pow2(-(prec as i64) - 8);
    let q3 = &q.square() * &q;
    let mut sum = BigComplex::one(prec);
    // q^(k(3k-1)/2), q^k and q^(3k+1) for the current k
    let mut pent = BigComplex::one(prec);
    let mut qk = BigComplex::one(prec);
    let mut step = q.clone();
    let mut k: u64 = 0;
    loop {
        k += 1;
        pent = &pent * &step;
        step = &step * &q3;
        qk = &qk * &q;
        let pair = &pent + &(&pent * &qk);
        if k % 2 == 1 {
            sum = &sum - &pair;
        } else {
            sum = &sum + &pair;
        }
        if pent.abs() < eps {
            break;
        }
    }
    &q24 * &sum
}

fn guard_bits(tau: &BigComplex) -> u32 {
    let size = tau.log2_ceil().unwrap_or(0).max(0);
    let small = tau.im.log2_ceil().map_or(0, |l| (-l).max(0));
    32 + (size + 2 * small) as u32
}

/// `eta(tau)` to relative error about `2^-prec`, where `prec = tau.prec()`.
pub fn eta(tau: &BigComplex) -> Result<BigComplex> {
    let prec = tau.prec();
    let wp = prec + guard_bits(tau);
    let t = tau.with_prec(wp);
    let g = normalize(&reduce_to_fundamental_domain(&t)?);
    if g.is_identity() {
        return Ok(eta_series(&t).with_prec(prec));
    }
    // recompute the reduced point from the input rather than the iterates
    let z = mobius(&g, &t);
    let v = &eta_series(&z) / &transform_factor(&g, &t)?;
    Ok(v.with_prec(prec))
}

/// `prod_d eta(d tau)^(r_d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaQuotientSpec {
    terms: Vec<(u64, i64)>,
}

impl EtaQuotientSpec {
    pub fn new(terms: Vec<(u64, i64)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::domain("eta quotient needs at least one term"));
        }
        if terms.iter().any(|&(d, r)| d == 0 || r == 0) {
            return Err(Error::domain("eta quotient scales must be positive and exponents nonzero"));
        }
        Ok(EtaQuotientSpec { terms })
    }

    pub fn terms(&self) -> &[(u64, i64)] {
        &self.terms
    }

    /// Order at infinity in units of `q`, times 24.
    pub fn order_24(&self) -> i64 {
        self.terms.iter().map(|&(d, r)| d as i64 * r).sum()
    }

    /// Coefficients of the `q`-expansion starting at `q^(order_24/24)`;
    /// requires `order_24` to be a multiple of 24.
    pub fn q_expansion(&self, len: usize) -> Result<(i64, Vec<BigInt>)> {
        let o = self.order_24();
        if o % 24 != 0 {
            return Err(Error::domain(format!("eta quotient {self} has fractional order {o}/24")));
        }
        let mut acc = vec![BigInt::zero(); len];
        acc[0] = BigInt::one();
        for &(d, r) in &self.terms {
            // prod_m (1 - q^(dm)), truncated
            let mut p = vec![BigInt::zero(); len];
            p[0] = BigInt::one();
            let d = d as usize;
            let mut m = d;
            while m < len {
                for i in (m..len).rev() {
                    let t = p[i - m].clone();
                    p[i] -= t;
                }
                m += d;
            }
            let factor = if r > 0 { p } else { series_inverse(&p) };
            for _ in 0..r.unsigned_abs() {
                acc = series_mul(&acc, &factor);
            }
        }
        Ok((o / 24, acc))
    }
}

pub(crate) fn series_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let len = a.len();
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().take(len - i).enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Inverse of a power series with constant term 1.
pub(crate) fn series_inverse(a: &[BigInt]) -> Vec<BigInt> {
    let len = a.len();
    let mut out = vec![BigInt::zero(); len];
    out[0] = BigInt::one();
    for i in 1..len {
        let mut s = BigInt::zero();
        for j in 1..=i {
            s += &a[j] * &out[i - j];
        }
        out[i] = -s;
    }
    out
}

impl fmt::Display for EtaQuotientSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(d, r)| format!("{d}^{r}")).collect();
        f.write_str(&parts.join(" "))
    }
}

/// `prod_d eta(d tau)^(r_d)`, each factor evaluated with full modular
/// reduction.
pub fn eta_quotient(spec: &EtaQuotientSpec, tau: &BigComplex) -> Result<BigComplex> {
    let prec = tau.prec();
    // the product of |r| factors loses a few bits each
    let extra: i64 = spec.terms.iter().map(|&(_, r)| r.abs()).sum();
    let wp = prec + 64 - (extra.max(1) as u64).leading_zeros() + 8;
    let t = tau.with_prec(wp);
    let mut acc = BigComplex::one(wp);
    for &(d, r) in &spec.terms {
        let dt = t.scale(&BigFloat::from_i64(d as i64, wp));
        acc = &acc * &eta(&dt)?.powi(r);
    }
    Ok(acc.with_prec(prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn r(n: i64, d: i64) -> BigRat {
        BigRat::new(n.into(), d.into())
    }

    /// Independent oracle: `q^(1/24) prod (1 - q^m)`.
    fn eta_product(tau: &BigComplex) -> BigComplex {
        let prec = tau.prec();
        let q = tau.exp_2pi_i();
        let q24 = BigComplex::new(
            &tau.re / &BigFloat::from_i64(24, prec),
            &tau.im / &BigFloat::from_i64(24, prec),
        )
        .exp_2pi_i();
        let mut acc = q24;
        let mut qm = q.clone();
        let eps = BigFloat::one(64).mul_pow2(-(prec as i64) - 16);
        while qm.abs() > eps {
            acc = &acc * &(&BigComplex::one(prec) - &qm);
            qm = &qm * &q;
        }
        acc
    }

    fn cx(re: f64, im: f64, prec: u32) -> BigComplex {
        BigComplex::from_f64(re, im, prec)
    }

    #[test]
    fn dedekind_sum_examples() {
        assert_eq!(dedekind_sum(0, 1).unwrap(), r(0, 1));
        assert_eq!(dedekind_sum(1, 3).unwrap(), r(1, 18));
        assert_eq!(dedekind_sum(2, 3).unwrap(), r(-1, 18));
        assert_eq!(dedekind_sum(-1, 3).unwrap(), r(-1, 18));
        assert!(dedekind_sum(2, 4).is_err());
        assert!(dedekind_sum(1, 0).is_err());
    }

    #[test]
    fn dedekind_sum_matches_definition() {
        // s(h,k) = sum_{r=1}^{k-1} ((r/k)) ((hr/k)) with ((x)) = x - floor(x) - 1/2
        let saw = |x: BigRat| {
            if x.is_integer() {
                BigRat::zero()
            } else {
                &x - x.floor() - r(1, 2)
            }
        };
        for k in 1..30i64 {
            for h in -k..2 * k {
                if h.gcd(&k) != 1 {
                    continue;
                }
                let direct: BigRat = (1..k).map(|j| saw(r(j, k)) * saw(r(h * j, k))).sum();
                assert_eq!(dedekind_sum(h, k).unwrap(), direct, "s({h},{k})");
            }
        }
    }

    #[test]
    fn eta_at_i() {
        let p = 256;
        let v = eta(&BigComplex::i(p)).unwrap();
        let oracle = eta_product(&BigComplex::i(p));
        assert!(v.close_to(&oracle, -(p as i64) + 8));
        let s = v.re.to_sci_string(12);
        assert!(s.starts_with("7.68225422326"), "{s}");
        assert!(v.im.abs().log2_ceil().is_none_or(|l| l < -(p as i64) + 8));
    }

    #[test]
    fn translation_law() {
        let p = 192;
        let tau = cx(0.0, 2.0, p);
        let ratio = &eta(&tau.add_i64(1)).unwrap() / &eta(&tau).unwrap();
        let want = exp_pi_i_rational(&r(1, 12), p);
        assert!(ratio.close_to(&want, -(p as i64) + 10));
    }

    #[test]
    fn inversion_law_against_product_oracle() {
        let p = 192;
        let tau = cx(0.5, 2.0, p);
        let inv = -tau.recip();
        let lhs = eta_product(&inv);
        let minus_i_tau = BigComplex::new(tau.im.clone(), -tau.re.clone());
        let rhs = &minus_i_tau.sqrt() * &eta_product(&tau);
        assert!(lhs.close_to(&rhs, -(p as i64) + 10));
        assert!(eta(&inv).unwrap().close_to(&lhs, -(p as i64) + 10));
    }

    #[test]
    fn reduced_path_matches_product_at_small_imaginary_part() {
        let p = 160;
        let tau = cx(0.3, 0.05, p);
        // Im 0.05 needs a few thousand product terms, still fine for a test
        assert!(eta(&tau).unwrap().close_to(&eta_product(&tau), -(p as i64) + 12));
    }

    #[test]
    fn rejects_lower_half_plane() {
        assert!(eta(&cx(0.0, -1.0, 64)).is_err());
        assert!(eta(&cx(0.0, 0.0, 64)).is_err());
    }

    #[test]
    fn quotient_matches_product() {
        let p = 192;
        let spec = EtaQuotientSpec::new(vec![(1, 24), (2, -24)]).unwrap();
        let tau = cx(0.0, 3.0, p);
        let direct = &eta_product(&tau).powi(24) / &eta_product(&tau.scale(&BigFloat::from_i64(2, p))).powi(24);
        assert!(eta_quotient(&spec, &tau).unwrap().close_to(&direct, -(p as i64) + 16));

        let single = EtaQuotientSpec::new(vec![(1, 1)]).unwrap();
        let z = cx(0.1, 0.7, p);
        assert_eq!(eta_quotient(&single, &z).unwrap(), eta(&z).unwrap());
    }

    #[test]
    fn level_two_fixed_point_value() {
        let p = 192;
        let spec = EtaQuotientSpec::new(vec![(1, 24), (2, -24)]).unwrap();
        let half = BigFloat::from_i64(2, p).sqrt().mul_pow2(-1);
        let tau = BigComplex::new(BigFloat::zero(p), half);
        let v = eta_quotient(&spec, &tau).unwrap();
        assert!(v.close_to(&BigComplex::from_i64(64, p), -(p as i64) + 16));
    }

    #[test]
    fn q_expansions() {
        let (o, c) = EtaQuotientSpec::new(vec![(1, 24)]).unwrap().q_expansion(6).unwrap();
        assert_eq!(o, 1);
        let tau: Vec<i64> = c.iter().map(|v| v.to_i64().unwrap()).collect();
        assert_eq!(tau, [1, -24, 252, -1472, 4830, -6048]);
        let (o, c) = EtaQuotientSpec::new(vec![(1, 24), (2, -24)]).unwrap().q_expansion(3).unwrap();
        assert_eq!(o, -1);
        assert_eq!(c, [BigInt::from(1), BigInt::from(-24), BigInt::from(276)]);
        assert!(EtaQuotientSpec::new(vec![(1, 1)]).unwrap().q_expansion(3).is_err());
    }

    #[test]
    fn spec_validation() {
        assert!(EtaQuotientSpec::new(vec![]).is_err());
        assert!(EtaQuotientSpec::new(vec![(1, 0)]).is_err());
        assert!(EtaQuotientSpec::new(vec![(0, 1)]).is_err());
        assert_eq!(EtaQuotientSpec::new(vec![(1, 8), (4, -8)]).unwrap().to_string(), "1^8 4^-8");
    }
}
