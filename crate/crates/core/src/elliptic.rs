//! Elliptic elements of order 2 in the Fricke group outside `Gamma0(n)`,
//! their CM fixed points and one representative per ideal class.
//!
//! An element is stored as the integer triple `(A, B, C)` with
//! `nA^2 + BC = -1`; the matrix itself is `sqrt(n) [[A, B/n], [C, -A]]`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::{BigComplex, BigFloat};
use crate::quadforms::{enumerate_class_group, equivalent, Discriminant, QuadForm};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EllipticElement {
    n: u64,
    a: BigInt,
    b: BigInt,
    c: BigInt,
}

/// The point `(u + v sqrt(-n)) / w` in the upper half plane.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CMPoint {
    pub u: BigInt,
    pub v: BigInt,
    pub w: BigInt,
    pub n: u64,
}

/// The order `O_alpha` of discriminant `-n` or `-4n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderDesc {
    pub n: u64,
    pub disc: Discriminant,
}

fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

impl EllipticElement {
    pub fn new(n: u64, a: BigInt, b: BigInt, c: BigInt) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("level must be positive"));
        }
        if !b.is_negative() || !c.is_positive() {
            return Err(Error::domain(format!("need B < 0 and C > 0, got B = {b}, C = {c}")));
        }
        let nn = BigInt::from(n);
        if &nn * &a * &a + &b * &c != -BigInt::one() {
            return Err(Error::domain(format!("nA^2 + BC != -1 for ({a},{b},{c}) at level {n}")));
        }
        Ok(EllipticElement { n, a, b, c })
    }

    pub fn from_i64(n: u64, a: i64, b: i64, c: i64) -> Result<Self> {
        EllipticElement::new(n, int(a), int(b), int(c))
    }

    /// `(A, B, C) = (0, -1, 1)`, the Fricke involution itself.
    pub fn fricke(n: u64) -> Self {
        EllipticElement::from_i64(n, 0, -1, 1).expect("w_n is elliptic")
    }

    pub fn level(&self) -> u64 {
        self.n
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    /// `(-A, B, C)`, whose fixed point is `-conj(tau)`.
    pub fn mirror(&self) -> Self {
        EllipticElement {
            n: self.n,
            a: -&self.a,
            b: self.b.clone(),
            c: self.c.clone(),
        }
    }

    /// `F_alpha = nC x^2 - 2nA xy - B y^2`, of discriminant `-4n`.
    pub fn form(&self) -> QuadForm {
        let nn = BigInt::from(self.n);
        QuadForm::new(&nn * &self.c, -int(2) * &nn * &self.a, -&self.b)
    }

    /// `F_alpha`, halved when `B` and `C` are both even.
    pub fn primitive_form(&self) -> QuadForm {
        let f = self.form();
        if self.halves() {
            QuadForm::new(f.a / 2, f.b / 2, f.c / 2)
        } else {
            f
        }
    }

    fn halves(&self) -> bool {
        self.b.is_even() && self.c.is_even()
    }

    pub fn discriminant(&self) -> BigInt {
        self.primitive_form().discriminant()
    }

    pub fn fixed_point(&self) -> CMPoint {
        let nn = BigInt::from(self.n);
        let p = CMPoint {
            u: &nn * &self.a,
            v: BigInt::one(),
            w: &nn * &self.c,
            n: self.n,
        };
        debug_assert!(p.is_root_of(&self.form()));
        p
    }

    pub fn order(&self) -> OrderDesc {
        order_of(self)
    }

    /// Applies `alpha` as a Moebius map: `(A tau + B/n) / (C tau - A)`.
    pub fn act(&self, tau: &BigComplex) -> BigComplex {
        let prec = tau.prec();
        let nn = BigFloat::from_i64(self.n as i64, prec);
        let a = BigFloat::from_bigint(&self.a, prec);
        let num = &tau.scale(&a) + &BigComplex::from_real(&BigFloat::from_bigint(&self.b, prec) / &nn);
        let den = &tau.scale(&BigFloat::from_bigint(&self.c, prec)) - &BigComplex::from_real(a);
        &num / &den
    }
}

impl fmt::Display for EllipticElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.a, self.b, self.c)
    }
}

impl FromStr for EllipticElement {
    type Err = Error;

    /// Parses `"A,B,C@n"`.
    fn from_str(s: &str) -> Result<Self> {
        let (abc, n) = s
            .split_once('@')
            .ok_or_else(|| Error::domain(format!("expected A,B,C@n but got `{s}`")))?;
        let n: u64 = n
            .trim()
            .parse()
            .map_err(|_| Error::domain(format!("`{n}` is not a positive level")))?;
        parse_element(abc, n)
    }
}

/// Parses `"A,B,C"` at a given level.
pub fn parse_element(s: &str, n: u64) -> Result<EllipticElement> {
    let f: QuadForm = s.parse()?;
    EllipticElement::new(n, f.a, f.b, f.c)
}

impl CMPoint {
    /// Exact check that `f(tau) = 0` for `f = a X^2 + b X + c`, computed in
    /// `Q(sqrt(-n))`.
    pub fn is_root_of(&self, f: &QuadForm) -> bool {
        let nn = BigInt::from(self.n);
        let (u, v, w) = (&self.u, &self.v, &self.w);
        // w^2 f(tau) = a (u + v s)^2 + b w (u + v s) + c w^2 with s^2 = -n
        let rational = &f.a * (u * u - &nn * v * v) + &f.b * w * u + &f.c * w * w;
        let irrational = int(2) * &f.a * u * v + &f.b * w * v;
        rational.is_zero() && irrational.is_zero()
    }

    pub fn to_complex(&self, prec: u32) -> BigComplex {
        let w = BigFloat::from_bigint(&self.w, prec);
        let re = &BigFloat::from_bigint(&self.u, prec) / &w;
        let root = BigFloat::from_i64(self.n as i64, prec).sqrt();
        let im = &(&BigFloat::from_bigint(&self.v, prec) * &root) / &w;
        BigComplex::new(re, im)
    }

    /// `Im(tau)` as a double, for choosing evaluation strategies.
    pub fn imag_f64(&self) -> f64 {
        self.to_complex(64).im.to_f64()
    }
}

impl fmt::Display for CMPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}+{}*sqrt(-{}))/{}", self.u, self.v, self.n, self.w)
    }
}

impl OrderDesc {
    pub fn generator(&self) -> String {
        if *self.disc.value() == -BigInt::from(self.n) {
            format!("Z[(-{0}+sqrt(-{0}))/2]", self.n)
        } else {
            format!("Z[sqrt(-{})]", self.n)
        }
    }
}

impl fmt::Display for OrderDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (disc {})", self.generator(), self.disc)
    }
}

pub fn order_of(alpha: &EllipticElement) -> OrderDesc {
    let n = alpha.n;
    let d = if alpha.halves() {
        assert_eq!(n % 4, 3, "B and C both even forces n = 3 mod 4");
        -BigInt::from(n)
    } else {
        -BigInt::from(4 * n)
    };
    debug_assert_eq!(d, alpha.discriminant());
    OrderDesc {
        n,
        disc: Discriminant::new(d).expect("-n or -4n is a discriminant"),
    }
}

/// Inverts `alpha -> F_alpha`. A form of discriminant `-n` is read as
/// `F_alpha / 2`.
pub fn from_form(f: &QuadForm, n: u64) -> Result<EllipticElement> {
    let nn = BigInt::from(n);
    let d = f.discriminant();
    let f = if d == -&nn {
        f.scaled(&int(2))
    } else if d == -int(4) * &nn {
        f.clone()
    } else {
        return Err(Error::domain(format!("form {f} has discriminant {d}, not -{n} or -4*{n}")));
    };
    let two_n = int(2) * &nn;
    if !f.a.is_multiple_of(&nn) || !f.b.is_multiple_of(&two_n) {
        return Err(Error::domain(format!("form {f} is not in Fricke shape for n = {n}")));
    }
    EllipticElement::new(n, -(&f.b / &two_n), -f.c.clone(), &f.a / &nn)
}

/// `true` iff the two elements are conjugate in the Fricke group.
pub fn conjugate_in_fricke(x: &EllipticElement, y: &EllipticElement) -> Result<bool> {
    if x.n != y.n {
        return Err(Error::domain(format!("levels {} and {} differ", x.n, y.n)));
    }
    Ok(equivalent(&x.form(), &y.form())?.is_some())
}

/// Checks that `disc` is `-4n`, or `-n` with `n = 3 mod 4`.
pub fn check_disc(n: u64, disc: &Discriminant) -> Result<()> {
    let nn = BigInt::from(n);
    let d = disc.value();
    if *d == -int(4) * &nn || (*d == -&nn && n % 4 == 3) {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "discriminant {d} is not admissible at level {n} (need -4n, or -n with n = 3 mod 4)"
        )))
    }
}

/// One element per class of discriminant `disc`, in class group order, each
/// with the smallest possible `C`.
pub fn enumerate_representatives(n: u64, disc: &Discriminant) -> Result<Vec<EllipticElement>> {
    check_disc(n, disc)?;
    let group = enumerate_class_group(disc);
    let h = group.class_number();
    let want_half = *disc.value() == -BigInt::from(n);
    let bound = 64 * h as u64;
    let nn = BigInt::from(n);
    let mut slots: Vec<Option<EllipticElement>> = vec![None; h];
    let mut filled = 0;
    'scan: for c in 1..=bound {
        let cc = BigInt::from(c);
        for a in 0..c {
            let aa = BigInt::from(a);
            let num = -BigInt::one() - &nn * &aa * &aa;
            if !num.is_multiple_of(&cc) {
                continue;
            }
            let b = num / &cc;
            if (b.is_even() && cc.is_even()) != want_half {
                continue;
            }
            let alpha = EllipticElement::new(n, aa, b, cc.clone())?;
            let idx = group
                .index_of_form(&alpha.primitive_form())
                .expect("primitive form lies in the class group");
            if slots[idx].is_none() {
                slots[idx] = Some(alpha);
                filled += 1;
                if filled == h {
                    break 'scan;
                }
            }
        }
    }
    if filled < h {
        let missing = slots.iter().position(Option::is_none).expect("a class is missing");
        return Err(Error::SearchFailure {
            class: group.classes()[missing].to_string(),
            bound,
        });
    }
    Ok(slots.into_iter().map(|s| s.expect("filled")).collect())
}
