//! Singular values at one elliptic point per ideal class, the class
//! polynomial they generate, and the Galois action on them realized by
//! composition of forms.

use rayon::prelude::*;

use crate::elliptic::{check_disc, enumerate_representatives, CMPoint, EllipticElement};
use crate::error::{Error, Result};
use crate::exactpoly::IntPoly;
use crate::hauptmodul::{evaluate, Catalog, Group};
use crate::numerics::{poly_from_roots, round_to_int_poly, BigComplex, BigFloat, PrecisionPolicy};
use crate::quadforms::{compose, enumerate_class_group, ClassGroup, Discriminant, IdealClass};

#[derive(Clone, Debug)]
pub struct SingularValue {
    pub class: IdealClass,
    pub element: EllipticElement,
    pub point: CMPoint,
    pub value: BigComplex,
}

#[derive(Clone, Debug)]
pub struct SingularValueSet {
    pub n: u64,
    pub group: Group,
    pub disc: Discriminant,
    /// One entry per class, in class group order.
    pub entries: Vec<SingularValue>,
    pub prec: u32,
}

impl SingularValueSet {
    pub fn values(&self) -> Vec<BigComplex> {
        self.entries.iter().map(|e| e.value.clone()).collect()
    }
}

#[derive(Clone, Debug)]
pub struct ClassPolyResult {
    pub poly: IntPoly,
    pub residual: BigFloat,
    pub prec_bits: u32,
    pub values: SingularValueSet,
}

/// Evaluates the catalog principal modulus for `(n, group)` at
/// representatives of every class of discriminant `disc`.
pub fn singular_values(
    catalog: &Catalog,
    n: u64,
    group: Group,
    disc: &Discriminant,
    prec: u32,
) -> Result<SingularValueSet> {
    check_disc(n, disc)?;
    let spec = catalog.lookup(n, group)?;
    let classes = enumerate_class_group(disc).classes().to_vec();
    let reps = enumerate_representatives(n, disc)?;
    let entries = classes
        .into_par_iter()
        .zip(reps.into_par_iter())
        .map(|(class, element)| {
            let point = element.fixed_point();
            let value = evaluate(&spec, &point, prec)?;
            Ok(SingularValue {
                class,
                element,
                point,
                value,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SingularValueSet {
        n,
        group,
        disc: disc.clone(),
        entries,
        prec,
    })
}

/// The class polynomial `prod (x - f(tau_alpha))`, with precision doubled
/// from `policy.start_bits` until rounding succeeds with the same result at
/// `policy.stable_runs` consecutive precisions.
pub fn ring_class_polynomial(
    catalog: &Catalog,
    n: u64,
    group: Group,
    disc: &Discriminant,
    policy: &PrecisionPolicy,
) -> Result<ClassPolyResult> {
    policy.validate()?;
    let tol = policy.tolerance();
    let mut prec = policy.start_bits;
    let mut last: Option<IntPoly> = None;
    let mut runs = 0;
    let mut reason = String::from("no precision attempted");
    while prec <= policy.max_bits {
        let values = singular_values(catalog, n, group, disc, prec)?;
        match round_to_int_poly(&poly_from_roots(&values.values()), &tol) {
            Ok((poly, residual)) => {
                runs = if last.as_ref() == Some(&poly) { runs + 1 } else { 1 };
                if runs >= policy.stable_runs {
                    debug_assert!(poly.is_monic() && poly.degree() == Some(values.entries.len()));
                    return Ok(ClassPolyResult {
                        poly,
                        residual,
                        prec_bits: prec,
                        values,
                    });
                }
                reason = format!("polynomial not yet stable at {prec} bits");
                last = Some(poly);
            }
            Err(Error::RoundingFailure { residual }) => {
                reason = format!("rounding residual {residual} at {prec} bits");
                last = None;
                runs = 0;
            }
            Err(e) => return Err(e),
        }
        prec *= 2;
    }
    Err(Error::Escalation {
        max_bits: policy.max_bits,
        reason,
    })
}

/// The permutation `i -> j` with `[class_j] = [class_i] [beta]^-1`.
pub fn galois_permutation(beta: &IdealClass, values: &SingularValueSet) -> Result<Vec<usize>> {
    if beta.discriminant() != *values.disc.value() {
        return Err(Error::domain(format!(
            "class {beta} has discriminant {}, values have {}",
            beta.discriminant(),
            values.disc
        )));
    }
    let inv = beta.inverse();
    let classes: Vec<&IdealClass> = values.entries.iter().map(|e| &e.class).collect();
    classes
        .iter()
        .map(|c| {
            let target = compose(c, &inv)?;
            classes
                .iter()
                .position(|x| **x == target)
                .ok_or_else(|| Error::domain(format!("class {target} missing from the value set")))
        })
        .collect()
}

/// Same as [`galois_permutation`] but on a bare class group, by index.
pub fn galois_permutation_in(group: &ClassGroup, beta: usize) -> Vec<usize> {
    let inv = group.inverse_idx(beta);
    (0..group.class_number()).map(|i| group.compose_idx(i, inv)).collect()
}
