//! Positive definite binary quadratic forms: reduction, equivalence, Gauss
//! composition and class groups of imaginary quadratic orders.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The form `a x^2 + b x y + c y^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadForm {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

/// A negative discriminant `D = 0, 1 (mod 4)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Discriminant(BigInt);

/// Integer 2x2 matrix of determinant 1, acting on forms by substitution:
/// `(F . U)(x, y) = F(a x + b y, c x + d y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnimodularMatrix {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

impl Discriminant {
    pub fn new(d: BigInt) -> Result<Self> {
        if !d.is_negative() {
            return Err(Error::domain(format!("discriminant {d} is not negative")));
        }
        let r = d.mod_floor(&int(4));
        if !(r.is_zero() || r.is_one()) {
            return Err(Error::domain(format!("discriminant {d} is not 0 or 1 mod 4")));
        }
        Ok(Discriminant(d))
    }

    pub fn from_i64(d: i64) -> Result<Self> {
        Discriminant::new(int(d))
    }

    pub fn value(&self) -> &BigInt {
        &self.0
    }

    /// The reduced form of the principal class: `(1, 0, -D/4)` or
    /// `(1, 1, (1-D)/4)`.
    pub fn principal_form(&self) -> QuadForm {
        let b = self.0.mod_floor(&int(2));
        let c = (&b * &b - &self.0) / 4;
        QuadForm::new(BigInt::one(), b, c)
    }
}

impl fmt::Display for Discriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl UnimodularMatrix {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self> {
        if &a * &d - &b * &c != BigInt::one() {
            return Err(Error::domain("matrix determinant is not 1"));
        }
        Ok(UnimodularMatrix { a, b, c, d })
    }

    pub fn identity() -> Self {
        UnimodularMatrix {
            a: int(1),
            b: int(0),
            c: int(0),
            d: int(1),
        }
    }

    /// `[[1, k], [0, 1]]`
    pub fn translation(k: BigInt) -> Self {
        UnimodularMatrix {
            a: int(1),
            b: k,
            c: int(0),
            d: int(1),
        }
    }

    /// `[[0, -1], [1, 0]]`
    pub fn swap() -> Self {
        UnimodularMatrix {
            a: int(0),
            b: int(-1),
            c: int(1),
            d: int(0),
        }
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn mul(&self, o: &UnimodularMatrix) -> UnimodularMatrix {
        UnimodularMatrix {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    pub fn inverse(&self) -> UnimodularMatrix {
        UnimodularMatrix {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == UnimodularMatrix::identity()
    }
}

impl QuadForm {
    pub fn new(a: BigInt, b: BigInt, c: BigInt) -> Self {
        QuadForm { a, b, c }
    }

    pub fn from_i64(a: i64, b: i64, c: i64) -> Self {
        QuadForm::new(int(a), int(b), int(c))
    }

    pub fn discriminant(&self) -> BigInt {
        &self.b * &self.b - int(4) * &self.a * &self.c
    }

    pub fn is_positive_definite(&self) -> bool {
        self.discriminant().is_negative() && self.a.is_positive()
    }

    pub fn content(&self) -> BigInt {
        self.a.gcd(&self.b).gcd(&self.c)
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// `-a < b <= a <= c`, with `b >= 0` when `a == c`.
    pub fn is_reduced(&self) -> bool {
        let neg_a = -&self.a;
        neg_a < self.b
            && self.b <= self.a
            && self.a <= self.c
            && !(self.a == self.c && self.b.is_negative())
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        &self.a * x * x + &self.b * x * y + &self.c * y * y
    }

    /// The form `F(a x + b y, c x + d y)`.
    pub fn transform(&self, u: &UnimodularMatrix) -> QuadForm {
        let a = self.eval(&u.a, &u.c);
        let c = self.eval(&u.b, &u.d);
        let b = int(2) * &self.a * &u.a * &u.b
            + &self.b * (&u.a * &u.d + &u.b * &u.c)
            + int(2) * &self.c * &u.c * &u.d;
        QuadForm::new(a, b, c)
    }

    /// `(a, -b, c)`, the inverse class.
    pub fn opposite(&self) -> QuadForm {
        QuadForm::new(self.a.clone(), -&self.b, self.c.clone())
    }

    pub fn scaled(&self, k: &BigInt) -> QuadForm {
        QuadForm::new(&self.a * k, &self.b * k, &self.c * k)
    }

    fn check_definite(&self) -> Result<()> {
        if !self.is_positive_definite() {
            return Err(Error::domain(format!("form {self} is not positive definite")));
        }
        Ok(())
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.a, self.b, self.c)
    }
}

impl FromStr for QuadForm {
    type Err = Error;

    /// Parses `"a,b,c"`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::domain(format!("expected a,b,c but got `{s}`")));
        }
        let p = |t: &str| {
            t.parse::<BigInt>()
                .map_err(|_| Error::domain(format!("`{t}` is not an integer")))
        };
        Ok(QuadForm::new(p(parts[0])?, p(parts[1])?, p(parts[2])?))
    }
}

/// Reduces a positive definite form, returning the reduced form `G` and `U`
/// with `F . U = G`.
pub fn reduce(f: &QuadForm) -> Result<(QuadForm, UnimodularMatrix)> {
    f.check_definite()?;
    let mut g = f.clone();
    let mut u = UnimodularMatrix::identity();
    loop {
        // bring b into (-a, a]
        let two_a = int(2) * &g.a;
        let k = (&g.a - &g.b).div_floor(&two_a);
        if !k.is_zero() {
            let t = UnimodularMatrix::translation(k);
            g = g.transform(&t);
            u = u.mul(&t);
        }
        if g.a > g.c || (g.a == g.c && g.b.is_negative()) {
            let s = UnimodularMatrix::swap();
            g = g.transform(&s);
            u = u.mul(&s);
            continue;
        }
        break;
    }
    debug_assert!(g.is_reduced());
    Ok((g, u))
}

/// A transformation taking `f` to `g` if the forms are properly equivalent.
pub fn equivalent(f: &QuadForm, g: &QuadForm) -> Result<Option<UnimodularMatrix>> {
    let (rf, u) = reduce(f)?;
    let (rg, v) = reduce(g)?;
    Ok((rf == rg).then(|| u.mul(&v.inverse())))
}

/// An ideal class, held as its reduced primitive representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IdealClass {
    rep: QuadForm,
}

impl IdealClass {
    /// Class of a primitive positive definite form. Imprimitive forms are
    /// rejected.
    pub fn from_form(f: &QuadForm) -> Result<Self> {
        f.check_definite()?;
        if !f.is_primitive() {
            return Err(Error::domain(format!("form {f} is not primitive")));
        }
        Ok(IdealClass { rep: reduce(f)?.0 })
    }

    pub fn principal(d: &Discriminant) -> Self {
        IdealClass {
            rep: d.principal_form(),
        }
    }

    pub fn rep(&self) -> &QuadForm {
        &self.rep
    }

    pub fn discriminant(&self) -> BigInt {
        self.rep.discriminant()
    }

    pub fn inverse(&self) -> IdealClass {
        IdealClass {
            rep: reduce(&self.rep.opposite()).expect("definite").0,
        }
    }

    pub fn is_principal(&self) -> bool {
        self.rep.a.is_one()
    }
}

impl fmt::Display for IdealClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.rep.fmt(f)
    }
}

/// `(g, x, y)` with `x a + y b = g = gcd(a, b) >= 0`.
pub(crate) fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Gauss composition of two classes of the same discriminant.
pub fn compose(f: &IdealClass, g: &IdealClass) -> Result<IdealClass> {
    let d = f.discriminant();
    if d != g.discriminant() {
        return Err(Error::domain(format!(
            "cannot compose classes of discriminants {d} and {}",
            g.discriminant()
        )));
    }
    let (mut f1, mut f2) = (f.rep.clone(), g.rep.clone());
    if f1.a > f2.a {
        std::mem::swap(&mut f1, &mut f2);
    }
    let s: BigInt = (&f1.b + &f2.b) / int(2);
    let n = &f2.b - &s;
    let (y1, dd) = if f2.a.is_multiple_of(&f1.a) {
        (BigInt::zero(), f1.a.clone())
    } else {
        let (g, u, _) = ext_gcd(&f2.a, &f1.a);
        (u, g)
    };
    let (x2, y2, d1) = if s.is_multiple_of(&dd) {
        (BigInt::zero(), int(-1), dd)
    } else {
        let (g, u, v) = ext_gcd(&s, &dd);
        (u, -v, g)
    };
    let v1 = &f1.a / &d1;
    let v2 = &f2.a / &d1;
    let r = (&y1 * &y2 * &n - &x2 * &f2.c).mod_floor(&v1);
    let b3 = &f2.b + int(2) * &v2 * &r;
    let a3 = &v1 * &v2;
    let num = &b3 * &b3 - &d;
    debug_assert!(num.is_multiple_of(&(int(4) * &a3)));
    let c3 = num / (int(4) * &a3);
    IdealClass::from_form(&QuadForm::new(a3, b3, c3))
}

/// Class group of discriminant `D` with its full composition table.
#[derive(Clone, Debug)]
pub struct ClassGroup {
    disc: Discriminant,
    classes: Vec<IdealClass>,
    table: Vec<Vec<usize>>,
    principal: usize,
}

impl ClassGroup {
    pub fn discriminant(&self) -> &Discriminant {
        &self.disc
    }

    pub fn class_number(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[IdealClass] {
        &self.classes
    }

    pub fn principal_index(&self) -> usize {
        self.principal
    }

    /// `table()[i][j]` is the index of `classes[i] * classes[j]`.
    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn index_of(&self, c: &IdealClass) -> Option<usize> {
        self.classes.iter().position(|x| x == c)
    }

    /// Index of the class of an arbitrary primitive form of this discriminant.
    pub fn index_of_form(&self, f: &QuadForm) -> Option<usize> {
        IdealClass::from_form(f).ok().and_then(|c| self.index_of(&c))
    }

    pub fn compose_idx(&self, i: usize, j: usize) -> usize {
        self.table[i][j]
    }

    pub fn inverse_idx(&self, i: usize) -> usize {
        self.index_of(&self.classes[i].inverse())
            .expect("inverse class is enumerated")
    }

    /// Order of the class at index `i`.
    pub fn order_of(&self, i: usize) -> usize {
        let mut k = 1;
        let mut cur = i;
        while cur != self.principal {
            cur = self.table[cur][i];
            k += 1;
        }
        k
    }
}

/// All reduced primitive forms of discriminant `D`, ordered by `(a, |b|, b < 0)`.
pub fn reduced_forms(d: &Discriminant) -> Vec<QuadForm> {
    let dv = d.value();
    let bound: BigInt = Roots::sqrt(&(-dv / int(3)));
    let mut out = Vec::new();
    let mut a = BigInt::one();
    while a <= bound {
        let four_a = int(4) * &a;
        let mut b_abs = dv.mod_floor(&int(2));
        while b_abs <= a {
            let signs = if b_abs.is_zero() { vec![BigInt::zero()] } else { vec![b_abs.clone(), -&b_abs] };
            for b in signs {
                let num = &b * &b - dv;
                if !num.is_multiple_of(&four_a) {
                    continue;
                }
                let f = QuadForm::new(a.clone(), b.clone(), num / &four_a);
                if f.is_reduced() && f.is_primitive() {
                    out.push(f);
                }
            }
            b_abs += 2;
        }
        a += 1;
    }
    out
}

pub fn enumerate_class_group(d: &Discriminant) -> ClassGroup {
    let classes: Vec<IdealClass> = reduced_forms(d)
        .into_iter()
        .map(|rep| IdealClass { rep })
        .collect();
    let principal = classes
        .iter()
        .position(IdealClass::is_principal)
        .expect("principal form is reduced");
    let table = classes
        .iter()
        .map(|x| {
            classes
                .iter()
                .map(|y| {
                    let z = compose(x, y).expect("same discriminant");
                    classes.iter().position(|c| *c == z).expect("closed")
                })
                .collect()
        })
        .collect();
    ClassGroup {
        disc: d.clone(),
        classes,
        table,
        principal,
    }
}

fn coprime_candidates(radius: i64) -> impl Iterator<Item = (i64, i64)> {
    (1..=radius).flat_map(move |r| {
        (0..=r).flat_map(move |x| {
            (0..=r)
                .flat_map(|m| if m == 0 { vec![0] } else { vec![m, -m] })
                .map(move |y| (x, y))
                .filter(move |&(x, y)| x.abs().max(y.abs()) == r)
                .filter(|&(x, y)| x > 0 || y > 0)
                .filter(|&(x, y)| x.gcd(&y) == 1)
        })
    })
}

/// Search radius for a value of `G` coprime to the discriminant.
pub const COPRIME_SEARCH_RADIUS: i64 = 16;

/// An equivalent form with `n | a` and `n | b` (`2n | b` for `D = -4n`),
/// together with the transforming matrix.
pub fn to_fricke_shape_with_matrix(g: &QuadForm, n: u64) -> Result<(QuadForm, UnimodularMatrix)> {
    g.check_definite()?;
    if !g.is_primitive() {
        return Err(Error::domain(format!("form {g} is not primitive")));
    }
    let nn = BigInt::from(n);
    let d = g.discriminant();
    let full = d == -int(4) * &nn;
    let half = d == -&nn && n % 4 == 3;
    if !(full || half) {
        return Err(Error::domain(format!(
            "discriminant {d} is neither -4n nor -n (n = 3 mod 4) for n = {n}"
        )));
    }
    let (x, y) = coprime_candidates(COPRIME_SEARCH_RADIUS)
        .map(|(x, y)| (int(x), int(y)))
        .find(|(x, y)| g.eval(x, y).gcd(&d).is_one())
        .ok_or_else(|| {
            Error::domain(format!(
                "no value of {g} coprime to {d} within radius {COPRIME_SEARCH_RADIUS}"
            ))
        })?;
    // complete (x, y) to the second column of a unimodular matrix
    let (one, s, t) = ext_gcd(&y, &x);
    debug_assert!(one.is_one());
    let m1 = UnimodularMatrix::new(s, x, -t, y)?;
    let g1 = g.transform(&m1);

    let target: BigInt = if full { -(&g1.b / int(2)) } else { -&g1.b };
    let unit = if full { g1.c.clone() } else { int(2) * &g1.c };
    let k = if n == 1 {
        BigInt::zero()
    } else {
        let (gg, inv, _) = ext_gcd(&unit.mod_floor(&nn), &nn);
        debug_assert!(gg.is_one());
        (target * inv).mod_floor(&nn)
    };
    let m2 = UnimodularMatrix::new(int(1), int(0), k, int(1))?;
    let out = g1.transform(&m2);
    let step = if full { int(2) * &nn } else { nn.clone() };
    if !(out.a.is_multiple_of(&nn) && out.b.is_multiple_of(&step)) {
        return Err(Error::domain(format!("failed to reach Fricke shape from {g}")));
    }
    Ok((out, m1.mul(&m2)))
}

/// A form equivalent to `g` of the shape `(nC, -2nA, -B)` (`D = -4n`) or
/// half of it (`D = -n`).
pub fn to_fricke_shape(g: &QuadForm, n: u64) -> Result<QuadForm> {
    Ok(to_fricke_shape_with_matrix(g, n)?.0)
}

/// Small-integer view of a form, for callers that index by value.
pub fn form_to_i64(f: &QuadForm) -> Option<(i64, i64, i64)> {
    Some((f.a.to_i64()?, f.b.to_i64()?, f.c.to_i64()?))
}
