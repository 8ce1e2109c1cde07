//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use cfq::classfield::{galois_permutation, ring_class_polynomial, singular_values};
use cfq::elliptic::{enumerate_representatives, EllipticElement};
use cfq::eta::{eta, mobius, transform_factor};
use cfq::exactpoly::{verify_root_relation, IntPoly, LaurentExpr};
use cfq::hauptmodul::{evaluate, evaluate_complex, Catalog, Group, HauptSpec, GAMMA0_LEVELS};
use cfq::numerics::{BigComplex, BigFloat, PrecisionPolicy};
use cfq::quadforms::{compose, enumerate_class_group, Discriminant};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde_json::Value;

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, Box<dyn Fn() -> Check>);

fn disc(d: i64) -> Discriminant {
    Discriminant::from_i64(d).unwrap()
}

fn ensure(ok: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn h71() -> IntPoly {
    IntPoly::from_i64s(&[1, 0, -2, -3, 1, 5, 4, 1])
}

fn h284() -> IntPoly {
    IntPoly::from_i64s(&[-11, 4, 18, 5, -11, -7, 0, 1])
}

fn level71_poly(d: i64, want: IntPoly) -> Check {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_cfq"))
        .args(["--json", "class-poly", "-n", "71", "--group", "fricke", "-D", &d.to_string()])
        .env_remove("CFQ_DATA_DIR")
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(out.status.success(), String::from_utf8_lossy(&out.stderr).to_string())?;
    let v: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let poly: Vec<String> = v["poly"].as_array().ok_or("no poly")?.iter().map(|c| c.as_str().unwrap_or("").to_string()).collect();
    let expect: Vec<String> = want.coeffs().iter().map(|c| c.to_string()).collect();
    ensure(poly == expect, format!("got {poly:?}"))?;
    let residual: f64 = v["residual"].as_str().ok_or("no residual")?.parse().map_err(|_| "bad residual")?;
    let bits = v["prec_bits"].as_u64().ok_or("no prec_bits")?;
    ensure(residual < 2f64.powi(-32), format!("residual {residual:e}"))?;
    ensure(bits <= 512, format!("{bits} bits"))?;
    ensure(elapsed < Duration::from_secs(60), format!("{elapsed:?}"))?;
    Ok(format!("{} residual {residual:.1e} at {bits} bits in {:.2?}", want.pretty(), elapsed))
}

fn ac3() -> Check {
    let w71 = IntPoly::from_i64s(&[-1, -1, 1, 1, 1, -1, -2, 1]);
    let e284 = LaurentExpr::from_terms([(2, 1), (0, -1), (-1, -1)]);
    let e71 = LaurentExpr::from_terms([(6, -1), (5, 3), (4, -2), (0, 1)]);
    ensure(verify_root_relation(&e284, &h284(), &w71).map_err(|e| e.to_string())?, format!("{e284}"))?;
    ensure(verify_root_relation(&e71, &h71(), &w71).map_err(|e| e.to_string())?, format!("{e71}"))?;
    Ok(format!("{e284} and {e71} verified exactly mod w_-71"))
}

fn ac4() -> Check {
    let mut total = 0;
    for d in [-71, -284] {
        let h = enumerate_class_group(&disc(d)).class_number();
        ensure(h == 7 && common::class_number_by_orbits(d) == 7, format!("h({d}) = {h}"))?;
        total += enumerate_representatives(71, &disc(d)).map_err(|e| e.to_string())?.len();
    }
    ensure(total == 14, format!("{total} representatives"))?;
    Ok("h(-71) = h(-284) = 7, 14 representatives".into())
}

fn ac5() -> Check {
    let start = Instant::now();
    let cat = Catalog::default();
    let mut count = 0;
    for n in GAMMA0_LEVELS {
        let mut ds = vec![-4 * n as i64];
        if n % 4 == 3 {
            ds.push(-(n as i64));
        }
        for d in ds {
            let h = common::class_number_by_orbits(d);
            let r = ring_class_polynomial(&cat, n, Group::Gamma0, &disc(d), &PrecisionPolicy::for_degree(h))
                .map_err(|e| format!("n = {n}, D = {d}: {e}"))?;
            ensure(r.poly.is_monic() && r.poly.degree() == Some(h), format!("n = {n}, D = {d}: {}", r.poly.pretty()))?;
            count += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(600), format!("{elapsed:?}"))?;
    Ok(format!("{count} (level, disc) pairs, degree = h, monic, {elapsed:.2?}"))
}

fn ac6() -> Check {
    let prec = 128;
    let tol = -(prec as i64) + 16;
    let cat = Catalog::default();
    let mut rng = StdRng::seed_from_u64(0xac6);
    let mut entries = 0;
    for (n, group) in Catalog::keys() {
        let Ok(spec) = cat.lookup(n, group) else { continue };
        if !matches!(spec, HauptSpec::EtaQuotient { .. } | HauptSpec::FrickeSym { .. }) {
            continue;
        }
        entries += 1;
        // points are handed over at prec + 64 bits: near a cusp |c tau + d|^2
        // magnifies any rounding of the moved point itself
        let f = |z: &BigComplex| evaluate_complex(&spec, z, prec).map_err(|e| e.to_string());
        for _ in 0..20 {
            let tau = common::random_tau(&mut rng, prec + 64);
            let base = f(&tau)?;
            for _ in 0..5 {
                let g = common::random_gamma0(&mut rng, n as i64, 12);
                let moved = f(&mobius(&g, &tau))?;
                ensure(moved.close_to(&base, tol), format!("{n} {group}: {g:?}"))?;
            }
            if group == Group::Fricke {
                let w = f(&common::fricke(&tau, n as i64))?;
                ensure(w.close_to(&base, tol), format!("{n} {group}: w_n"))?;
            }
        }
    }
    Ok(format!("{entries} catalog entries, 20 points x 5 elements each"))
}

fn ac7() -> Check {
    let prec = 256;
    let spec = Catalog::default().lookup(71, Group::Fricke).map_err(|e| e.to_string())?;
    let near = EllipticElement::from_i64(71, 1, -36, 2).unwrap();
    let far = EllipticElement::from_i64(71, 1, -2, 36).unwrap();
    let a = evaluate(&spec, &near.fixed_point(), prec).map_err(|e| e.to_string())?;
    let b = evaluate(&spec, &far.fixed_point(), prec).map_err(|e| e.to_string())?;
    ensure(a.close_to(&b, -32), format!("{a} vs {b}"))?;
    Ok(format!("f = {:.18} at C = 2 and C = 36", a.re.to_f64()))
}

/// `q^(1/24) prod (1 - q^m)` multiplied out at `tau = i`.
fn eta_at_i_by_product(prec: u32) -> BigComplex {
    let tau = BigComplex::i(prec);
    let q = tau.exp_2pi_i();
    let mut acc = tau.scale(&(BigFloat::one(prec) / &BigFloat::from_i64(24, prec))).exp_2pi_i();
    let one = BigComplex::one(prec);
    let mut qm = q.clone();
    for _ in 0..(prec / 8 + 4) {
        acc = &acc * &(&one - &qm);
        qm = &qm * &q;
    }
    acc
}

fn ac8() -> Check {
    let prec = 128;
    let mut rng = StdRng::seed_from_u64(0xac8);
    for _ in 0..500 {
        let tau = common::random_tau(&mut rng, prec);
        let g = common::random_sl2(&mut rng, 50);
        let lhs = eta(&mobius(&g, &tau.with_prec(prec + 64)).with_prec(prec)).map_err(|e| e.to_string())?;
        let rhs = &transform_factor(&g, &tau).map_err(|e| e.to_string())? * &eta(&tau).map_err(|e| e.to_string())?;
        ensure(lhs.close_to(&rhs, -(prec as i64) + 12), format!("{g:?}"))?;
    }
    let v = eta(&BigComplex::i(prec)).map_err(|e| e.to_string())?;
    let direct = eta_at_i_by_product(prec);
    ensure(v.close_to(&direct, -(prec as i64) + 8), format!("eta(i) = {v}, product {direct}"))?;
    Ok("500 transformation pairs, eta(i) against the product".into())
}

fn ac9() -> Check {
    let cat = Catalog::default();
    for d in [-71, -284] {
        let set = singular_values(&cat, 71, Group::Fricke, &disc(d), 128).map_err(|e| e.to_string())?;
        let classes = enumerate_class_group(&disc(d)).classes().to_vec();
        let perm = |b: &cfq::quadforms::IdealClass| galois_permutation(b, &set).map_err(|e| e.to_string());
        for b in &classes {
            let pb = perm(b)?;
            for b2 in &classes {
                let pb2 = perm(b2)?;
                let prod = perm(&compose(b, b2).map_err(|e| e.to_string())?)?;
                let composed: Vec<usize> = pb2.iter().map(|&i| pb[i]).collect();
                ensure(composed == prod, format!("D = {d}: {b} * {b2}"))?;
            }
            if b.is_principal() {
                ensure(pb == (0..classes.len()).collect::<Vec<_>>(), "principal is not the identity")?;
            }
        }
    }
    Ok("pi_b . pi_b' = pi_bb' on C(-71) and C(-284), principal acts trivially".into())
}

fn main() {
    let checks: Vec<Criterion> = vec![
        ("AC1", Box::new(|| level71_poly(-71, h71()))),
        ("AC2", Box::new(|| level71_poly(-284, h284()))),
        ("AC3", Box::new(ac3)),
        ("AC4", Box::new(ac4)),
        ("AC5", Box::new(ac5)),
        ("AC6", Box::new(ac6)),
        ("AC7", Box::new(ac7)),
        ("AC8", Box::new(ac8)),
        ("AC9", Box::new(ac9)),
    ];
    let mut failed = 0;
    for (name, check) in checks {
        let res = catch_unwind(AssertUnwindSafe(&check)).unwrap_or_else(|_| Err("panicked".into()));
        match res {
            Ok(msg) => println!("{name} PASS {msg}"),
            Err(msg) => {
                failed += 1;
                println!("{name} FAIL {msg}");
            }
        }
    }
    println!("AC10 NOTE Artin-symbol claims on specific roots need independent number field software; not checked");
    if failed > 0 {
        std::process::exit(1);
    }
}
