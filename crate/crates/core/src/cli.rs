//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for bad input or a failed check, 2 when a
//! computation does not reach the requested accuracy.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::classfield::{ring_class_polynomial, ClassPolyResult};
use crate::elliptic::{check_disc, enumerate_representatives, parse_element, EllipticElement};
use crate::error::{Error, Result};
use crate::exactpoly::{verify_root_relation, IntPoly, LaurentExpr};
use crate::hauptmodul::{evaluate, Catalog, Group, HauptSpec};
use crate::numerics::{BigComplex, PrecisionPolicy};
use crate::quadforms::{enumerate_class_group, Discriminant};

const DEFAULT_PREC_BITS: u32 = 256;
const VALUE_DIGITS: usize = 30;

#[derive(Parser, Debug)]
#[command(name = "cfq", version, about = "Ring class polynomials from singular values of principal moduli")]
struct Cli {
    /// Directory holding q-series coefficient files (overrides CFQ_DATA_DIR)
    #[arg(long, global = true)]
    data_dir: Option<PathBuf>,

    /// Working precision in bits (at least 64)
    #[arg(long, global = true, default_value_t = DEFAULT_PREC_BITS)]
    prec_bits: u32,

    /// Emit JSON instead of text
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Class polynomial of the singular values for one discriminant
    ClassPoly {
        #[arg(short = 'n', long = "level")]
        level: u64,
        #[arg(long)]
        group: Group,
        #[arg(short = 'D', long = "disc", allow_negative_numbers = true)]
        disc: i64,
    },
    /// Reduced forms and composition table
    ClassGroup {
        #[arg(short = 'D', long = "disc", allow_negative_numbers = true)]
        disc: i64,
    },
    /// Elliptic representatives and their fixed points
    Reps {
        #[arg(short = 'n', long = "level")]
        level: u64,
        #[arg(short = 'D', long = "disc", allow_negative_numbers = true)]
        disc: i64,
    },
    /// One singular value at the fixed point of an elliptic element
    Eval {
        #[arg(short = 'n', long = "level")]
        level: Option<u64>,
        #[arg(long)]
        group: Group,
        /// "A,B,C" or "A,B,C@n"
        #[arg(long, allow_hyphen_values = true)]
        element: String,
    },
    /// Reproduce the level 71 class polynomials and root relations
    Verify {
        #[arg(long)]
        paper71: bool,
    },
    /// List the genus-zero levels and their principal moduli
    Catalog,
}

struct Ctx<'a> {
    catalog: Catalog,
    prec_bits: u32,
    json: bool,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn emit_json(&mut self, v: &Value) -> Result<()> {
        let s = serde_json::to_string_pretty(v).expect("json values serialize");
        self.line(&s)
    }

    fn line(&mut self, s: &str) -> Result<()> {
        writeln!(self.out, "{s}").map_err(|e| Error::Io {
            path: PathBuf::from("<stdout>"),
            source: e,
        })
    }
}

/// Runs the CLI on `argv` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    if cli.prec_bits < PrecisionPolicy::MIN_START_BITS {
        let _ = writeln!(err, "error: --prec-bits must be at least {}", PrecisionPolicy::MIN_START_BITS);
        return 1;
    }
    let mut ctx = Ctx {
        catalog: Catalog::resolve(cli.data_dir),
        prec_bits: cli.prec_bits,
        json: cli.json,
        out,
    };
    let result = match cli.command {
        Command::ClassPoly { level, group, disc } => class_poly(&mut ctx, level, group, disc),
        Command::ClassGroup { disc } => class_group(&mut ctx, disc),
        Command::Reps { level, disc } => reps(&mut ctx, level, disc),
        Command::Eval { level, group, element } => eval(&mut ctx, level, group, &element),
        Command::Verify { paper71 } => {
            if paper71 {
                verify71(&mut ctx)
            } else {
                Err(Error::domain("nothing to verify (use --paper71)"))
            }
        }
        Command::Catalog => catalog(&mut ctx),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_numeric() {
                2
            } else {
                1
            }
        }
    }
}

fn value_strings(v: &BigComplex) -> (String, String) {
    (v.re.to_sci_string(VALUE_DIGITS), v.im.to_sci_string(VALUE_DIGITS))
}

fn compute_class_poly(ctx: &Ctx, n: u64, group: Group, d: &Discriminant) -> Result<ClassPolyResult> {
    check_disc(n, d)?;
    let h = enumerate_class_group(d).class_number();
    let policy = PrecisionPolicy::for_degree(h).with_start_bits(ctx.prec_bits);
    ring_class_polynomial(&ctx.catalog, n, group, d, &policy)
}

fn class_poly(ctx: &mut Ctx, n: u64, group: Group, disc: i64) -> Result<i32> {
    let d = Discriminant::from_i64(disc)?;
    let r = compute_class_poly(ctx, n, group, &d)?;
    if ctx.json {
        let points: Vec<Value> = r
            .values
            .entries
            .iter()
            .map(|e| {
                let (re, im) = value_strings(&e.value);
                json!({
                    "class": e.class.to_string(),
                    "element": e.element.to_string(),
                    "value_re": re,
                    "value_im": im,
                })
            })
            .collect();
        let poly: Vec<String> = r.poly.coeffs().iter().map(|c| c.to_string()).collect();
        let v = json!({
            "level": n,
            "group": group.to_string(),
            "disc": disc,
            "class_number": r.values.entries.len(),
            "poly": poly,
            "residual": r.residual.to_sci_string(6),
            "prec_bits": r.prec_bits,
            "points": points,
        });
        ctx.emit_json(&v)?;
    } else {
        ctx.line(&r.poly.to_string())?;
        ctx.line(&format!("# {}", r.poly.pretty()))?;
        ctx.line(&format!(
            "# level {n} group {group} disc {disc} class number {}",
            r.values.entries.len()
        ))?;
        ctx.line(&format!(
            "# residual {} at {} bits",
            r.residual.to_sci_string(6),
            r.prec_bits
        ))?;
        for e in &r.values.entries {
            ctx.line(&format!("# class {} element {} value {}", e.class, e.element, e.value))?;
        }
    }
    Ok(0)
}

fn class_group(ctx: &mut Ctx, disc: i64) -> Result<i32> {
    let d = Discriminant::from_i64(disc)?;
    let g = enumerate_class_group(&d);
    let h = g.class_number();
    if ctx.json {
        let forms: Vec<String> = g.classes().iter().map(|c| c.to_string()).collect();
        let v = json!({
            "disc": disc,
            "class_number": h,
            "forms": forms,
            "principal": g.principal_index(),
            "table": g.table(),
        });
        ctx.emit_json(&v)?;
    } else {
        ctx.line(&format!("# disc {disc} class number {h}"))?;
        for (i, c) in g.classes().iter().enumerate() {
            ctx.line(&format!("{c}  # [{i}] order {}", g.order_of(i)))?;
        }
        ctx.line("# composition table (row * column)")?;
        for row in g.table() {
            let cells: Vec<String> = row.iter().map(|j| j.to_string()).collect();
            ctx.line(&format!("# {}", cells.join(" ")))?;
        }
    }
    Ok(0)
}

fn reps(ctx: &mut Ctx, n: u64, disc: i64) -> Result<i32> {
    let d = Discriminant::from_i64(disc)?;
    let elements = enumerate_representatives(n, &d)?;
    let g = enumerate_class_group(&d);
    if ctx.json {
        let items: Vec<Value> = g
            .classes()
            .iter()
            .zip(&elements)
            .map(|(c, e)| {
                let p = e.fixed_point();
                json!({
                    "class": c.to_string(),
                    "element": e.to_string(),
                    "tau": p.to_string(),
                    "im_tau": p.to_complex(64).im.to_sci_string(6),
                })
            })
            .collect();
        ctx.emit_json(&json!({ "level": n, "disc": disc, "reps": items }))?;
    } else {
        let order = elements.first().map(|e| e.order().generator()).unwrap_or_default();
        ctx.line(&format!("# level {n} disc {disc} order {order}"))?;
        for (c, e) in g.classes().iter().zip(&elements) {
            let p = e.fixed_point();
            ctx.line(&format!(
                "{e}@{n}  # class {c} tau {p} Im {}",
                p.to_complex(64).im.to_sci_string(6)
            ))?;
        }
    }
    Ok(0)
}

fn parse_eval_element(level: Option<u64>, s: &str) -> Result<EllipticElement> {
    match (s.contains('@'), level) {
        (true, lvl) => {
            let e: EllipticElement = s.parse()?;
            if lvl.is_some_and(|n| n != e.level()) {
                return Err(Error::domain(format!(
                    "--level {} disagrees with element level {}",
                    lvl.unwrap_or_default(),
                    e.level()
                )));
            }
            Ok(e)
        }
        (false, Some(n)) => parse_element(s, n),
        (false, None) => Err(Error::domain("give the level with -n or as A,B,C@n")),
    }
}

fn eval(ctx: &mut Ctx, level: Option<u64>, group: Group, element: &str) -> Result<i32> {
    let e = parse_eval_element(level, element)?;
    let n = e.level();
    let spec = ctx.catalog.lookup(n, group)?;
    let p = e.fixed_point();
    let v = evaluate(&spec, &p, ctx.prec_bits)?;
    let (re, im) = value_strings(&v);
    if ctx.json {
        let out = json!({
            "level": n,
            "group": group.to_string(),
            "element": e.to_string(),
            "disc": e.order().disc.value().to_i64(),
            "tau": p.to_string(),
            "value_re": re,
            "value_im": im,
            "prec_bits": ctx.prec_bits,
        });
        ctx.emit_json(&out)?;
    } else {
        ctx.line(&format!("{re} {im}"))?;
        ctx.line(&format!("# level {n} group {group} element {e} tau {p}"))?;
    }
    Ok(0)
}

/// Class polynomials at level 71 and the root relations over the field of
/// `w = x^7 - 2x^6 - x^5 + x^4 + x^3 + x^2 - x - 1`.
pub fn level71_checks(catalog: &Catalog, prec_bits: u32) -> Vec<(String, Result<bool>)> {
    let h71 = IntPoly::from_i64s(&[1, 0, -2, -3, 1, 5, 4, 1]);
    let h284 = IntPoly::from_i64s(&[-11, 4, 18, 5, -11, -7, 0, 1]);
    let w71 = IntPoly::from_i64s(&[-1, -1, 1, 1, 1, -1, -2, 1]);
    let mut out = Vec::new();
    for (disc, want) in [(-71, &h71), (-284, &h284)] {
        let d = Discriminant::from_i64(disc).expect("valid");
        let policy = PrecisionPolicy::for_degree(7).with_start_bits(prec_bits);
        let got = ring_class_polynomial(catalog, 71, Group::Fricke, &d, &policy).map(|r| r.poly == *want);
        out.push((format!("h_{disc} = {}", want.pretty()), got));
    }
    let e284 = LaurentExpr::from_terms([(2, 1), (0, -1), (-1, -1)]);
    let e71 = LaurentExpr::from_terms([(6, -1), (5, 3), (4, -2), (0, 1)]);
    out.push((
        format!("{e284} is a root of h_-284 mod w_-71"),
        verify_root_relation(&e284, &h284, &w71),
    ));
    out.push((
        format!("{e71} is a root of h_-71 mod w_-71"),
        verify_root_relation(&e71, &h71, &w71),
    ));
    out
}

fn verify71(ctx: &mut Ctx) -> Result<i32> {
    let checks = level71_checks(&ctx.catalog, ctx.prec_bits);
    let mut code = 0;
    let mut items = Vec::new();
    for (name, res) in checks {
        let (status, detail) = match res {
            Ok(true) => ("PASS", String::new()),
            Ok(false) => {
                code = code.max(1);
                ("FAIL", String::new())
            }
            Err(e) => {
                code = code.max(if e.is_numeric() { 2 } else { 1 });
                ("FAIL", e.to_string())
            }
        };
        if ctx.json {
            items.push(json!({ "check": name, "status": status, "detail": detail }));
        } else if detail.is_empty() {
            ctx.line(&format!("{status} {name}"))?;
        } else {
            ctx.line(&format!("{status} {name} ({detail})"))?;
        }
    }
    if ctx.json {
        ctx.emit_json(&json!({ "checks": items }))?;
    }
    Ok(code)
}

fn catalog(ctx: &mut Ctx) -> Result<i32> {
    let mut items = Vec::new();
    for (n, group) in Catalog::keys() {
        let (kind, desc) = match ctx.catalog.lookup(n, group) {
            Ok(spec) => {
                let kind = match spec {
                    HauptSpec::EtaQuotient { .. } => "eta-quotient",
                    HauptSpec::FrickeSym { .. } => "fricke-sym",
                    HauptSpec::QSeries(_) => "q-series",
                };
                (kind, spec.describe())
            }
            Err(Error::MissingData { path }) => ("q-series", format!("missing {}", path.display())),
            Err(e) => return Err(e),
        };
        if ctx.json {
            items.push(json!({ "level": n, "group": group.to_string(), "kind": kind, "description": desc }));
        } else {
            ctx.line(&format!("{group:<6} {n:>3}  {kind:<12} {desc}"))?;
        }
    }
    if ctx.json {
        ctx.emit_json(&json!({ "entries": items }))?;
    }
    Ok(0)
}
