use super::{eval_int_poly, BigComplex, BigFloat};
use crate::error::{Error, Result};
use crate::exactpoly::IntPoly;

const MAX_ITERATIONS: usize = 500;
// fixed offset of the initial circle, in radians
const ROTATION: f64 = 0.618_033_988_749_894_9;

/// Fujiwara's bound on the moduli of the roots.
fn fujiwara_bound(p: &IntPoly) -> f64 {
    let c = p.coeffs();
    let n = c.len() - 1;
    let lead = BigFloat::from_bigint(&c[n], 64).to_f64().abs();
    let mut bound: f64 = 0.0;
    for k in 1..=n {
        let mut a = BigFloat::from_bigint(&c[n - k], 64).to_f64().abs() / lead;
        if k == n {
            a /= 2.0;
        }
        bound = bound.max(a.powf(1.0 / k as f64));
    }
    (2.0 * bound).max(1e-3)
}

fn derivative(p: &IntPoly) -> IntPoly {
    IntPoly::new(
        p.coeffs()
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * i)
            .collect(),
    )
}

/// One Aberth sweep; returns the largest relative correction as a log2 bound.
fn aberth_step(p: &IntPoly, dp: &IntPoly, z: &mut [BigComplex]) -> i64 {
    let n = z.len();
    let mut worst = i64::MIN;
    for k in 0..n {
        let pv = eval_int_poly(p, &z[k]);
        if pv.is_zero() {
            continue;
        }
        let ratio = &pv / &eval_int_poly(dp, &z[k]);
        let prec = z[k].prec();
        let mut sum = BigComplex::zero(prec);
        for j in 0..n {
            if j != k {
                sum = &sum + &(&z[k] - &z[j]).recip();
            }
        }
        let denom = &BigComplex::one(prec) - &(&ratio * &sum);
        let step = &ratio / &denom;
        let scale = z[k].log2_ceil().unwrap_or(0).max(0);
        if let Some(l) = step.log2_ceil() {
            worst = worst.max(l - scale);
        }
        z[k] = &z[k] - &step;
    }
    worst
}

/// All roots of a square-free integer polynomial by Aberth–Ehrlich
/// iteration, refined at 64 bits first and then at `prec` bits.
///
/// Each returned root `r` satisfies `|p(r)| < 2^(-prec/2) * ||p||_r` where
/// `||p||_r = sum |a_i| max(1, |r|)^i`.
pub fn find_roots(p: &IntPoly, prec: u32) -> Result<Vec<BigComplex>> {
    let n = match p.degree() {
        None => return Err(Error::domain("cannot find roots of the zero polynomial")),
        Some(0) => return Ok(Vec::new()),
        Some(n) => n,
    };
    if !p.is_square_free() {
        return Err(Error::domain("polynomial is not square-free"));
    }
    let dp = derivative(p);
    let radius = fujiwara_bound(p);
    let mut z: Vec<BigComplex> = (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + ROTATION;
            BigComplex::from_f64(radius * t.cos(), radius * t.sin(), 64)
        })
        .collect();

    let mut iterations = 0;
    for (work, target) in [(64u32, -40i64), (prec + 16, -(prec as i64) - 4)] {
        z = z.into_iter().map(|v| v.with_prec(work)).collect();
        loop {
            if iterations >= MAX_ITERATIONS {
                return Err(Error::Convergence { iterations });
            }
            iterations += 1;
            if aberth_step(p, &dp, &mut z) <= target {
                break;
            }
        }
    }

    let roots: Vec<BigComplex> = z.into_iter().map(|v| v.with_prec(prec)).collect();
    for r in &roots {
        let work = prec + 16;
        let rr = r.with_prec(work);
        let mag = rr.abs().max(BigFloat::one(work));
        let mut norm = BigFloat::zero(work);
        let mut pow = BigFloat::one(work);
        for c in p.coeffs() {
            norm = &norm + &(&BigFloat::from_bigint(c, work).abs() * &pow);
            pow = &pow * &mag;
        }
        let bound = norm.mul_pow2(-(prec as i64 / 2));
        if eval_int_poly(p, &rr).abs() >= bound {
            return Err(Error::Convergence { iterations });
        }
    }
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn contains(roots: &[BigComplex], z: &BigComplex, k: i64) -> bool {
        roots.iter().any(|r| r.close_to(z, k))
    }

    #[test]
    fn quadratic_and_cubic() {
        let p = 128;
        let r = find_roots(&IntPoly::from_i64s(&[1, 0, 1]), p).unwrap();
        assert_eq!(r.len(), 2);
        assert!(contains(&r, &BigComplex::i(p), -100));
        assert!(contains(&r, &-BigComplex::i(p), -100));

        let r = find_roots(&IntPoly::from_i64s(&[-1, 0, 0, 1]), p).unwrap();
        let h = 3f64.sqrt() / 2.0;
        for z in [
            BigComplex::from_i64(1, p),
            BigComplex::new(BigFloat::from_f64(-0.5, p), BigFloat::from_i64(3, p).sqrt().mul_pow2(-1)),
            BigComplex::new(BigFloat::from_f64(-0.5, p), -BigFloat::from_i64(3, p).sqrt().mul_pow2(-1)),
        ] {
            assert!(contains(&r, &z, -100), "missing {z} ({h})");
        }
    }

    #[test]
    fn rejects_repeated_roots() {
        assert!(matches!(
            find_roots(&IntPoly::from_i64s(&[1, -2, 1]), 128),
            Err(Error::Domain(_))
        ));
    }
}
