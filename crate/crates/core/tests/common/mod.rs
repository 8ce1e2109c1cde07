//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use std::collections::HashMap;

use cfq::numerics::{BigComplex, BigFloat};
use cfq::quadforms::{QuadForm, UnimodularMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use rand::Rng;

/// Class number of discriminant `d` counted as the number of connected
/// components of primitive forms in a box under `S` and `T^{+-1}`.
///
/// Every form in the box reaches its reduced form by steps that stay in the
/// box, so components correspond to classes. No reduction code is shared
/// with the library.
pub fn class_number_by_orbits(d: i64) -> usize {
    assert!(d < 0 && d.rem_euclid(4) <= 1);
    let m = (-d) / 4 + 2;
    let mut index: HashMap<(i64, i64, i64), usize> = HashMap::new();
    let mut forms = Vec::new();
    for a in 1..=m {
        for b in -m..=m {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < 1 || c > m || a.gcd(&b).gcd(&c) != 1 {
                continue;
            }
            index.insert((a, b, c), forms.len());
            forms.push((a, b, c));
        }
    }
    let mut parent: Vec<usize> = (0..forms.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (i, &(a, b, c)) in forms.iter().enumerate() {
        let neighbours = [
            (c, -b, a),
            (a, b + 2 * a, a + b + c),
            (a, b - 2 * a, a - b + c),
        ];
        for f in neighbours {
            if let Some(&j) = index.get(&f) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    (0..forms.len())
        .filter(|&i| find(&mut parent, i) == i)
        .count()
}

/// The primitive form attached to the product of the ideals
/// `[a, (-b + sqrt D)/2]` of two forms, computed with lattice arithmetic.
pub fn ideal_product_form(f: &QuadForm, g: &QuadForm) -> QuadForm {
    let d = f.discriminant();
    assert_eq!(d, g.discriminant());
    // elements (x + y sqrt D) / 2 are stored as (x, y)
    let gens = |q: &QuadForm| [(BigInt::from(2) * &q.a, BigInt::from(0)), (-q.b.clone(), BigInt::from(1))];
    let mut vecs = Vec::new();
    for (x1, y1) in gens(f) {
        for (x2, y2) in gens(g) {
            let x = (&x1 * &x2 + &y1 * &y2 * &d) / 2;
            let y = (&x1 * &y2 + &x2 * &y1) / 2;
            vecs.push((x, y));
        }
    }
    // Hermite normal form of the rank 2 lattice
    let mut pivot = (BigInt::from(0), BigInt::from(0));
    for v in vecs.iter() {
        let e = pivot.1.extended_gcd(&v.1);
        let new = (&e.x * &pivot.0 + &e.y * &v.0, e.gcd.clone());
        pivot = new;
    }
    if pivot.1 < BigInt::from(0) {
        pivot = (-pivot.0, -pivot.1);
    }
    let mut x_gcd = BigInt::from(0);
    for v in vecs.iter() {
        let k = &v.1 / &pivot.1;
        let r = &v.0 - &k * &pivot.0;
        x_gcd = x_gcd.gcd(&r);
    }
    let gy = pivot.1.clone();
    let a3 = &x_gcd / (BigInt::from(2) * &gy);
    let b3 = (-(&pivot.0 / &gy)).mod_floor(&(BigInt::from(2) * &a3));
    let c3 = (&b3 * &b3 - &d) / (BigInt::from(4) * &a3);
    QuadForm::new(a3, b3, c3)
}

/// A random element of `Gamma0(n)` with `|c| <= 3n` and `|d| <= dmax`.
pub fn random_gamma0<R: Rng>(rng: &mut R, n: i64, dmax: i64) -> UnimodularMatrix {
    loop {
        let c = n * rng.gen_range(-3..=3);
        let d = rng.gen_range(-dmax..=dmax);
        if d == 0 || c.gcd(&d) != 1 {
            continue;
        }
        // a d - b c = 1
        let e = d.extended_gcd(&c);
        let (mut a, mut b) = (e.x * e.gcd, -e.y * e.gcd);
        if c != 0 {
            let k = rng.gen_range(-2..=2);
            a += k * c;
            b += k * d;
        } else {
            b = rng.gen_range(-5..=5);
        }
        let m = UnimodularMatrix::new(a.into(), b.into(), c.into(), d.into()).expect("det 1");
        return m;
    }
}

/// A random element of `SL2(Z)` with entries at most `bound`.
pub fn random_sl2<R: Rng>(rng: &mut R, bound: i64) -> UnimodularMatrix {
    loop {
        let c = rng.gen_range(-bound..=bound);
        let d = rng.gen_range(-bound..=bound);
        if c.gcd(&d) != 1 {
            continue;
        }
        let e = d.extended_gcd(&c);
        let (a, b) = (e.x * e.gcd, -e.y * e.gcd);
        if a.abs() > bound || b.abs() > bound {
            continue;
        }
        return UnimodularMatrix::new(a.into(), b.into(), c.into(), d.into()).expect("det 1");
    }
}

pub fn random_tau<R: Rng>(rng: &mut R, prec: u32) -> BigComplex {
    BigComplex::from_f64(rng.gen_range(-0.5..0.5), rng.gen_range(0.3..1.5), prec)
}

/// `-1 / (n tau)`.
pub fn fricke(tau: &BigComplex, n: i64) -> BigComplex {
    -(tau.scale(&BigFloat::from_i64(n, tau.prec()))).recip()
}
