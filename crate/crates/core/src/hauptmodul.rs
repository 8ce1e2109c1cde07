//! Principal moduli for the genus-zero groups `Gamma0(n)` and the Fricke
//! groups `Gamma0(n)+w_n`: built-in eta quotients, their Fricke
//! symmetrizations, and q-series read from coefficient files.
//!
//! Every function here is normalized as `q^-1 + 0 + O(q)`.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::elliptic::CMPoint;
use crate::error::{Error, QSeriesParseError, Result};
use crate::eta::{eta_quotient, series_inverse, series_mul, EtaQuotientSpec};
use crate::numerics::{BigComplex, BigFloat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Group {
    Gamma0,
    Fricke,
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Group::Gamma0 => "gamma0",
            Group::Fricke => "fricke",
        })
    }
}

impl FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gamma0" => Ok(Group::Gamma0),
            "fricke" => Ok(Group::Fricke),
            _ => Err(Error::domain(format!("unknown group `{s}` (expected gamma0 or fricke)"))),
        }
    }
}

/// A q-expansion `sum_{k >= -1} coeffs[k+1] q^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    pub label: String,
    pub n: u64,
    pub group: Group,
    pub q_min: i64,
    pub coeffs: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HauptSpec {
    EtaQuotient {
        spec: EtaQuotientSpec,
        const_shift: BigInt,
    },
    /// `t + kappa / t + const_shift` for the eta quotient `t`.
    FrickeSym {
        base: EtaQuotientSpec,
        kappa: BigInt,
        const_shift: BigInt,
    },
    QSeries(QSeries),
}

impl HauptSpec {
    pub fn describe(&self) -> String {
        match self {
            HauptSpec::EtaQuotient { spec, const_shift } => format!("eta {spec} + {const_shift}"),
            HauptSpec::FrickeSym {
                base,
                kappa,
                const_shift,
            } => format!("t + {kappa}/t + {const_shift}, t = eta {base}"),
            HauptSpec::QSeries(s) => format!("q-series {} ({} coefficients)", s.label, s.coeffs.len()),
        }
    }
}

/// `Gamma0(n)` levels of genus zero, with `(d, r_d)` eta exponents. The
/// constant shift is `r_1` and `kappa = prod (n/d)^(r_d/2)`; both are
/// checked against the definitions in tests.
type Gamma0Row = (u64, &'static [(u64, i64)], i64, i64);

const GAMMA0_TABLE: &[Gamma0Row] = &[
    (2, &[(1, 24), (2, -24)], 24, 4096),
    (3, &[(1, 12), (3, -12)], 12, 729),
    (4, &[(1, 8), (4, -8)], 8, 256),
    (5, &[(1, 6), (5, -6)], 6, 125),
    (6, &[(1, 5), (2, -1), (3, 1), (6, -5)], 5, 72),
    (7, &[(1, 4), (7, -4)], 4, 49),
    (8, &[(1, 4), (2, -2), (4, 2), (8, -4)], 4, 32),
    (9, &[(1, 3), (9, -3)], 3, 27),
    (10, &[(1, 3), (2, -1), (5, 1), (10, -3)], 3, 20),
    (12, &[(1, 3), (2, -2), (3, -1), (4, 1), (6, 2), (12, -3)], 3, 12),
    (13, &[(1, 2), (13, -2)], 2, 13),
    (16, &[(1, 2), (2, -1), (8, 1), (16, -2)], 2, 8),
    (18, &[(1, 2), (2, -1), (3, -1), (6, 1), (9, 1), (18, -2)], 2, 6),
    (25, &[(1, 1), (25, -1)], 1, 5),
];

/// The 15 levels with `Gamma0(n)` of genus zero.
pub const GAMMA0_LEVELS: [u64; 15] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 13, 16, 18, 25];

/// The 37 levels with `Gamma0(n)+w_n` of genus zero.
pub const FRICKE_LEVELS: [u64; 37] = [
    2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20, 21, 23, 24, 25, 26, 27,
    29, 31, 32, 35, 36, 39, 41, 47, 49, 50, 59, 71,
];

/// Minimum number of coefficients accepted from a data file.
pub const MIN_FILE_COEFFS: usize = 64;

/// Number of coefficients of `j - 744` generated for level 1.
const LEVEL_ONE_COEFFS: usize = 1024;

pub const DATA_DIR_ENV: &str = "CFQ_DATA_DIR";

fn gamma0_row(n: u64) -> Option<&'static Gamma0Row> {
    GAMMA0_TABLE.iter().find(|row| row.0 == n)
}

/// `j - 744 = q^-1 + 196884 q + ...`, computed as `E4^3 / Delta`.
fn j_minus_744() -> &'static QSeries {
    static J: OnceLock<QSeries> = OnceLock::new();
    J.get_or_init(|| {
        let len = LEVEL_ONE_COEFFS;
        let mut e4 = vec![BigInt::zero(); len];
        e4[0] = BigInt::one();
        for (k, slot) in e4.iter_mut().enumerate().skip(1) {
            let sigma3: u64 = (1..=k as u64).filter(|d| (k as u64).is_multiple_of(*d)).map(|d| d * d * d).sum();
            *slot = BigInt::from(240u64 * sigma3);
        }
        let e4_cubed = series_mul(&series_mul(&e4, &e4), &e4);
        let delta_over_q = EtaQuotientSpec::new(vec![(1, 24)])
            .expect("valid")
            .q_expansion(len)
            .expect("integral order")
            .1;
        let mut coeffs = series_mul(&e4_cubed, &series_inverse(&delta_over_q));
        coeffs[1] -= 744;
        QSeries {
            label: "1A".into(),
            n: 1,
            group: Group::Gamma0,
            q_min: -1,
            coeffs,
        }
    })
}

/// Maps `(n, group)` to its principal modulus. Files are looked up in the
/// data directory as `<n>A.txt`.
#[derive(Clone, Debug)]
pub struct Catalog {
    data_dir: PathBuf,
}

impl Default for Catalog {
    fn default() -> Self {
        Catalog::new(default_data_dir())
    }
}

/// The data directory shipped with the crate.
pub fn default_data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data")
}

impl Catalog {
    pub fn new(data_dir: impl Into<PathBuf>) -> Self {
        Catalog {
            data_dir: data_dir.into(),
        }
    }

    /// Data directory from an explicit flag, else `CFQ_DATA_DIR`, else the
    /// shipped directory.
    pub fn resolve(flag: Option<PathBuf>) -> Self {
        let dir = flag
            .or_else(|| std::env::var_os(DATA_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(default_data_dir);
        Catalog::new(dir)
    }

    pub fn data_dir(&self) -> &Path {
        &self.data_dir
    }

    pub fn is_genus_zero(n: u64, group: Group) -> bool {
        match group {
            Group::Gamma0 => GAMMA0_LEVELS.contains(&n),
            Group::Fricke => FRICKE_LEVELS.contains(&n),
        }
    }

    /// All `(n, group)` keys, `Gamma0` first.
    pub fn keys() -> Vec<(u64, Group)> {
        GAMMA0_LEVELS
            .iter()
            .map(|&n| (n, Group::Gamma0))
            .chain(FRICKE_LEVELS.iter().map(|&n| (n, Group::Fricke)))
            .collect()
    }

    pub fn file_for(&self, n: u64) -> PathBuf {
        self.data_dir.join(format!("{n}A.txt"))
    }

    pub fn lookup(&self, n: u64, group: Group) -> Result<HauptSpec> {
        if !Catalog::is_genus_zero(n, group) {
            return Err(Error::NotGenusZero { level: n, group });
        }
        if n == 1 {
            return Ok(HauptSpec::QSeries(j_minus_744().clone()));
        }
        match (gamma0_row(n), group) {
            (Some(&(_, terms, shift, _)), Group::Gamma0) => Ok(HauptSpec::EtaQuotient {
                spec: EtaQuotientSpec::new(terms.to_vec())?,
                const_shift: shift.into(),
            }),
            (Some(&(_, terms, shift, kappa)), Group::Fricke) => Ok(HauptSpec::FrickeSym {
                base: EtaQuotientSpec::new(terms.to_vec())?,
                kappa: kappa.into(),
                const_shift: shift.into(),
            }),
            (None, _) => {
                let path = self.file_for(n);
                let s = load_qseries(&path)?;
                if s.n != n || s.group != group {
                    return Err(Error::domain(format!(
                        "{} declares level {} group {}, expected {n} {group}",
                        path.display(),
                        s.n,
                        s.group
                    )));
                }
                Ok(HauptSpec::QSeries(s))
            }
        }
    }
}

/// Convenience wrapper over [`Catalog::lookup`] with the resolved data
/// directory.
pub fn catalog_lookup(n: u64, group: Group) -> Result<HauptSpec> {
    Catalog::resolve(None).lookup(n, group)
}

pub fn load_qseries(path: &Path) -> Result<QSeries> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            Error::MissingData {
                path: path.to_path_buf(),
            }
        } else {
            Error::Io {
                path: path.to_path_buf(),
                source: e,
            }
        }
    })?;
    Ok(parse_qseries(&text, MIN_FILE_COEFFS)?)
}

/// Parses the coefficient file format; `min_coeffs` is the smallest
/// acceptable number of coefficients.
pub fn parse_qseries(text: &str, min_coeffs: usize) -> std::result::Result<QSeries, QSeriesParseError> {
    let mut lines = text.lines().enumerate();
    let header = lines
        .next()
        .map(|(_, l)| l.trim())
        .filter(|l| l.starts_with('#'))
        .ok_or(QSeriesParseError::MissingHeader)?;
    let mut fields = std::collections::HashMap::new();
    for tok in header.trim_start_matches('#').split_whitespace() {
        if let Some((k, v)) = tok.split_once('=') {
            fields.insert(k, v);
        }
    }
    let get = |k: &'static str| fields.get(k).copied().ok_or(QSeriesParseError::MissingField(k));
    let label = get("label")?.to_string();
    let level_text = get("level")?;
    let n: u64 = level_text
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| QSeriesParseError::BadField {
            field: "level",
            value: level_text.into(),
        })?;
    let group_text = get("group")?;
    let group: Group = group_text.parse().map_err(|_| QSeriesParseError::BadField {
        field: "group",
        value: group_text.into(),
    })?;
    let q_text = get("q_min")?;
    let q_min: i64 = q_text.parse().map_err(|_| QSeriesParseError::BadField {
        field: "q_min",
        value: q_text.into(),
    })?;
    if q_min != -1 {
        return Err(QSeriesParseError::QMin(q_min));
    }
    let mut coeffs = Vec::new();
    for (i, line) in lines {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let v: BigInt = t.parse().map_err(|_| QSeriesParseError::BadCoefficient {
            line: i + 1,
            text: t.into(),
        })?;
        coeffs.push(v);
    }
    if coeffs.len() < min_coeffs {
        return Err(QSeriesParseError::TooFewCoefficients {
            found: coeffs.len(),
            required: min_coeffs,
        });
    }
    if coeffs.first().is_none_or(Zero::is_zero) {
        return Err(QSeriesParseError::ZeroLeading);
    }
    Ok(QSeries {
        label,
        n,
        group,
        q_min,
        coeffs,
    })
}

/// Ascends under `tau -> tau + 1` and `w_n: tau -> -1/(n tau)` until `Re tau`
/// lies in `(-1/2, 1/2]` and `n |tau|^2 >= 1`, with a margin of `2^(-prec/2)`
/// so that points on the boundary circle are left in place.
pub fn fricke_reduce(tau: &BigComplex, n: u64) -> BigComplex {
    let prec = tau.prec();
    let nn = BigFloat::from_i64(n as i64, prec);
    let one = &BigFloat::one(prec) - &BigFloat::one(prec).mul_pow2(-(prec as i64) / 2);
    let mut z = tau.clone();
    loop {
        z = center(&z);
        if &z.norm_sqr() * &nn < one {
            z = -(z.scale(&nn)).recip();
        } else {
            return z;
        }
    }
}

/// Translates `Re tau` into `(-1/2, 1/2]`.
fn center(z: &BigComplex) -> BigComplex {
    let half = BigFloat::one(64).mul_pow2(-1);
    // ceil(re - 1/2) puts the remainder in (-1/2, 1/2]
    let m = -((-(&z.re - &half)).floor());
    if m.is_zero() {
        return z.clone();
    }
    BigComplex::new(&z.re - &BigFloat::from_bigint(&m, z.prec()), z.im.clone())
}

/// Sums the series at `tau`, stopping after 32 consecutive terms below
/// `2^(-prec-8)`.
fn sum_qseries(s: &QSeries, tau: &BigComplex, prec: u32) -> Result<BigComplex> {
    const QUIET_RUN: usize = 32;
    let wp = prec + 32;
    let t = tau.with_prec(wp);
    let q = t.exp_2pi_i();
    let eps = BigFloat::one(64).mul_pow2(-(prec as i64) - 8);
    let mut pow = q.recip();
    let mut sum = BigComplex::zero(wp);
    let mut quiet = 0;
    let mut mags: Vec<i64> = Vec::with_capacity(s.coeffs.len());
    for c in &s.coeffs {
        let term = pow.scale(&BigFloat::from_bigint(c, wp));
        let small = term.abs() < eps;
        mags.push(term.log2_ceil().unwrap_or(i64::MIN));
        sum = &sum + &term;
        quiet = if small { quiet + 1 } else { 0 };
        if quiet >= QUIET_RUN {
            return Ok(sum.with_prec(prec));
        }
        pow = &pow * &q;
    }
    let available = s.coeffs.len();
    Err(Error::InsufficientData {
        q_abs: q.abs().to_f64(),
        available,
        needed: extrapolate_needed(&mags, -(prec as i64) - 8) + QUIET_RUN,
    })
}

/// Linear extrapolation of the log2 term sizes over the last quarter of the
/// available terms.
fn extrapolate_needed(mags: &[i64], target: i64) -> usize {
    let len = mags.len();
    let m = (len / 4).max(1);
    if len <= m {
        return 2 * len.max(1);
    }
    let (last, prev) = (mags[len - 1], mags[len - 1 - m]);
    if last == i64::MIN || prev == i64::MIN {
        return 2 * len;
    }
    let slope = (last - prev) as f64 / m as f64;
    if slope >= 0.0 {
        return 2 * len;
    }
    len + ((last - target) as f64 / -slope).ceil().max(0.0) as usize
}

/// Value of the principal modulus at an arbitrary point of the upper half
/// plane, to about `prec` bits.
pub fn evaluate_complex(spec: &HauptSpec, tau: &BigComplex, prec: u32) -> Result<BigComplex> {
    let tau = tau.with_prec(prec + 32);
    match spec {
        HauptSpec::EtaQuotient { spec, const_shift } => {
            let t = eta_quotient(spec, &tau)?;
            Ok((&t + &BigComplex::from_bigint(const_shift, t.prec())).with_prec(prec))
        }
        HauptSpec::FrickeSym {
            base,
            kappa,
            const_shift,
        } => {
            let t = eta_quotient(base, &tau)?;
            let p = t.prec();
            let v = &(&t + &t.recip().scale(&BigFloat::from_bigint(kappa, p))) + &BigComplex::from_bigint(const_shift, p);
            Ok(v.with_prec(prec))
        }
        HauptSpec::QSeries(s) => {
            let z = if s.group == Group::Fricke || s.n == 1 {
                fricke_reduce(&tau, s.n)
            } else {
                center(&tau)
            };
            sum_qseries(s, &z, prec)
        }
    }
}

pub fn evaluate(spec: &HauptSpec, tau: &CMPoint, prec: u32) -> Result<BigComplex> {
    evaluate_complex(spec, &tau.to_complex(prec + 32), prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::BigRat;
    use num_integer::Roots;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn table_constants_match_definitions() {
        for &(n, terms, shift, kappa) in GAMMA0_TABLE {
            let spec = EtaQuotientSpec::new(terms.to_vec()).unwrap();
            let (order, c) = spec.q_expansion(4).unwrap();
            assert_eq!(order, -1, "level {n}");
            assert_eq!(c[0], big(1));
            assert_eq!(c[1], big(-shift), "level {n} shift");
            // kappa^2 = prod (n/d)^r_d, exactly
            let mut k2 = BigRat::one();
            for &(d, r) in terms {
                let f = BigRat::new(big(n as i64), big(d as i64));
                k2 *= if r > 0 { f.pow(r as i32) } else { f.recip().pow(-r as i32) };
            }
            assert!(k2.is_integer(), "level {n}");
            let k2 = k2.to_integer();
            assert_eq!(Roots::sqrt(&k2), big(kappa), "level {n} kappa");
            assert_eq!(big(kappa) * big(kappa), k2);
            // exponents antisymmetric under d -> n/d, so t(w_n tau) = kappa/t(tau)
            for &(d, r) in terms {
                assert!(terms.contains(&(n / d, -r)), "level {n}");
            }
        }
        assert_eq!(GAMMA0_TABLE.len() + 1, GAMMA0_LEVELS.len());
    }

    #[test]
    fn lookups() {
        let cat = Catalog::default();
        match cat.lookup(2, Group::Gamma0).unwrap() {
            HauptSpec::EtaQuotient { spec, const_shift } => {
                assert_eq!(spec.terms(), &[(1, 24), (2, -24)]);
                assert_eq!(const_shift, big(24));
            }
            other => panic!("{other:?}"),
        }
        match cat.lookup(13, Group::Fricke).unwrap() {
            HauptSpec::FrickeSym { kappa, .. } => assert_eq!(kappa, big(13)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            cat.lookup(11, Group::Gamma0),
            Err(Error::NotGenusZero { level: 11, group: Group::Gamma0 })
        ));
        assert!(matches!(cat.lookup(22, Group::Fricke), Err(Error::NotGenusZero { .. })));
        match cat.lookup(71, Group::Fricke).unwrap() {
            HauptSpec::QSeries(s) => {
                assert_eq!(s.label, "71A");
                assert!(s.coeffs.len() >= 2000);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(cat.lookup(11, Group::Fricke), Err(Error::MissingData { .. })));
        assert_eq!(Catalog::keys().len(), 52);
    }

    #[test]
    fn level_one_is_j() {
        let j = j_minus_744();
        let head: Vec<BigInt> = j.coeffs[..4].to_vec();
        assert_eq!(head, [big(1), big(0), big(196884), big(21493760)]);
        let v = evaluate_complex(&HauptSpec::QSeries(j.clone()), &BigComplex::i(128), 128).unwrap();
        assert!(v.close_to(&BigComplex::from_i64(984, 128), -110));
    }

    #[test]
    fn parse_synthetic() {
        let text = "# label=TEST level=2 group=fricke q_min=-1\n1\n0\n4372\n";
        let s = parse_qseries(text, 3).unwrap();
        assert_eq!(s.coeffs, [big(1), big(0), big(4372)]);
        assert_eq!((s.n, s.group, s.label.as_str()), (2, Group::Fricke, "TEST"));
        assert_eq!(
            parse_qseries(text, MIN_FILE_COEFFS),
            Err(QSeriesParseError::TooFewCoefficients { found: 3, required: 64 })
        );
        assert_eq!(
            parse_qseries("# label=T group=fricke q_min=-1\n1\n", 1),
            Err(QSeriesParseError::MissingField("level"))
        );
        assert_eq!(
            parse_qseries("# label=T level=2 group=fricke q_min=0\n1\n", 1),
            Err(QSeriesParseError::QMin(0))
        );
        assert_eq!(parse_qseries("1\n2\n", 1), Err(QSeriesParseError::MissingHeader));
        assert_eq!(
            parse_qseries("# label=T level=2 group=fricke q_min=-1\n1\nx\n", 1),
            Err(QSeriesParseError::BadCoefficient { line: 3, text: "x".into() })
        );
        assert_eq!(
            parse_qseries("# label=T level=2 group=fricke q_min=-1\n0\n1\n", 1),
            Err(QSeriesParseError::ZeroLeading)
        );
        assert!(matches!(
            parse_qseries("# label=T level=2 group=other q_min=-1\n1\n", 1),
            Err(QSeriesParseError::BadField { field: "group", .. })
        ));
        let s = parse_qseries("# label=T level=2 group=gamma0 q_min=-1\n\n# note\n1\n", 1).unwrap();
        assert_eq!(s.coeffs, [big(1)]);
    }

    #[test]
    fn fricke_reduce_examples() {
        let p = 128;
        let n = 71;
        let fixed = BigComplex::new(BigFloat::zero(p), &BigFloat::one(p) / &BigFloat::from_i64(n, p).sqrt());
        assert!(fricke_reduce(&fixed, 71).close_to(&fixed, -120));
        assert!(fricke_reduce(&fixed.add_i64(3), 71).close_to(&fixed, -120));

        let z = CMPoint { u: big(-71), v: big(1), w: big(2556), n: 71 }.to_complex(p);
        let r = fricke_reduce(&z, 71);
        assert!(r.im > z.im);
    }

    #[test]
    fn fricke_sym_level_two() {
        let p = 160;
        let cat = Catalog::default();
        let spec = cat.lookup(2, Group::Fricke).unwrap();
        let tau = CMPoint { u: big(0), v: big(1), w: big(2), n: 2 };
        let v = evaluate(&spec, &tau, p).unwrap();
        assert!(v.close_to(&BigComplex::from_i64(152, p), -(p as i64) + 16));
    }

    #[test]
    fn insufficient_data_is_reported() {
        let mut s = match Catalog::default().lookup(71, Group::Fricke).unwrap() {
            HauptSpec::QSeries(s) => s,
            _ => unreachable!(),
        };
        s.coeffs.truncate(100);
        let tau = CMPoint { u: big(-71), v: big(1), w: big(568), n: 71 };
        match evaluate(&HauptSpec::QSeries(s), &tau, 256) {
            Err(Error::InsufficientData { available, needed, q_abs }) => {
                assert_eq!(available, 100);
                assert!(needed > 100);
                assert!(q_abs > 0.5 && q_abs < 1.0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn group_parse() {
        assert_eq!("gamma0".parse::<Group>().unwrap(), Group::Gamma0);
        assert_eq!(Group::Fricke.to_string(), "fricke");
        assert!("Fricke".parse::<Group>().is_err());
    }
}
