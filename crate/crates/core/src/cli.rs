//! Command-line front end.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::fundsol::{round_trip_residual, DivisionFunctional, Pairing, TwistSide};
use crate::laurent::laurent_expand;
use crate::operator::{apply_operator, Beta, SymbolSpec};
use crate::padic::{Ball, MultCharacter};
use crate::parse::parse_polynomial;
use crate::poly::Polynomial;
use crate::ratfunc::RatFunc;
use crate::rational::{fmt_f64, format_rational, parse_rational};
use crate::sb::{random_sb, GridFunction, Resolution, SBFunction, SBJson};
use crate::zeta::{truncated_zeta, ZetaEngine, ZetaResult};

/// Bumped whenever the cached payload changes shape.
const CACHE_FORMAT: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARTIAL: i32 = 2;
pub const EXIT_FAILED: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "padic-fundsol", version, about = "Igusa zeta functions and fundamental solutions over Q_p")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    #[arg(long)]
    p: u64,
    /// polynomial in x1..xn (or x / xi when n = 1)
    #[arg(long)]
    f: String,
    /// number of variables; inferred from `--f` when omitted
    #[arg(long)]
    n: Option<usize>,
    /// multiplicative character `order,generator-index`
    #[arg(long)]
    chi: Option<String>,
    #[arg(long, default_value_t = 40)]
    depth: u32,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    allow_partial: bool,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct Input {
    /// ball `c1,..,cn@e`; the default test function is the indicator of Z_p^n
    #[arg(long, conflicts_with = "phi")]
    ball: Option<String>,
    /// test function JSON
    #[arg(long)]
    phi: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Side {
    Conjugate,
    Same,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Local zeta function as a rational function of t = p^{-s}
    Zeta {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        input: Input,
    },
    /// Laurent coefficients at s = -β
    Laurent {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        beta: String,
        /// highest coefficient index
        #[arg(long, default_value_t = 1)]
        top: i64,
    },
    /// Apply the operator with symbol χ(ac f)|f|^β to a test function
    Apply {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        beta: String,
        #[arg(long = "in")]
        input: PathBuf,
        /// output grid `M,N`; defaults to the resolution of the input
        #[arg(long)]
        window: Option<String>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Sample u = E * g on a window
    Solve {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        beta: String,
        #[arg(long)]
        g: PathBuf,
        #[arg(long, default_value = "2,2")]
        window: String,
        /// also report the round-trip residual on the interior window
        #[arg(long)]
        check: bool,
        #[arg(long, default_value_t = 1)]
        margin: i64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Check the division identity on seeded random test functions
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        beta: String,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Side::Conjugate)]
        twist_side: Side,
    },
    /// Compare the engine value with the truncated-sum bracket at s0
    Oracle {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        s0: f64,
        #[arg(long, default_value_t = 20)]
        oracle_depth: u32,
    },
    /// Pair the fundamental solution with a test function
    PairE {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        beta: String,
    },
    /// Pair the division functional with a test function
    PairT {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        beta: String,
    },
}

struct Outcome {
    doc: Value,
    text: String,
    code: i32,
}

/// Runs one command; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            if e.use_stderr() {
                let _ = write!(err, "{e}");
            } else {
                let _ = write!(out, "{e}");
            }
            return code;
        }
    };
    let common = common_of(&cli.cmd).clone();
    match dispatch(cli.cmd) {
        Ok(o) => {
            let rendered = if common.json {
                let mut s = serde_json::to_string_pretty(&o.doc).expect("serializable");
                s.push('\n');
                s
            } else {
                o.text
            };
            if let Some(path) = &common.out {
                let body = serde_json::to_string_pretty(&o.doc).expect("serializable") + "\n";
                if let Err(e) = write_atomic(path, body.as_bytes()) {
                    let _ = writeln!(err, "error: {e}");
                    return EXIT_USAGE;
                }
            }
            let _ = out.write_all(rendered.as_bytes());
            if o.code == EXIT_PARTIAL && common.allow_partial {
                EXIT_OK
            } else {
                o.code
            }
        }
        Err(Error::Uncertified(balls)) => {
            let _ = writeln!(err, "error: {} undecided ball(s)", balls.len());
            for b in balls.iter().take(20) {
                let _ = writeln!(err, "  {b}");
            }
            EXIT_PARTIAL
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn common_of(cmd: &Command) -> &Common {
    match cmd {
        Command::Zeta { common, .. }
        | Command::Laurent { common, .. }
        | Command::Apply { common, .. }
        | Command::Solve { common, .. }
        | Command::Verify { common, .. }
        | Command::Oracle { common, .. }
        | Command::PairE { common, .. }
        | Command::PairT { common, .. } => common,
    }
}

/// Largest `k` such that `xk` or `xik` occurs; 1 when only `x`/`xi` occur.
fn infer_dimension(src: &str) -> usize {
    let bytes = src.as_bytes();
    let mut n = 1;
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'x' && (i == 0 || !bytes[i - 1].is_ascii_alphanumeric()) {
            let mut j = i + 1;
            if j < bytes.len() && bytes[j] == b'i' {
                j += 1;
            }
            let start = j;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            if let Ok(k) = src[start..j].parse::<usize>() {
                n = n.max(k);
            }
            i = j;
        } else {
            i += 1;
        }
    }
    n
}

struct Setup {
    p: u64,
    n: usize,
    f: Polynomial,
    chi: Option<MultCharacter>,
}

fn setup(c: &Common) -> Result<Setup> {
    crate::padic::PrimeContext::new(c.p)?;
    let n = c.n.unwrap_or_else(|| infer_dimension(&c.f));
    let f = parse_polynomial(&c.f, n)?;
    let chi = match &c.chi {
        None => None,
        Some(s) => {
            let (d, g) = s.split_once(',').ok_or_else(|| Error::BadCharacter(s.clone()))?;
            let d = d.trim().parse().map_err(|_| Error::BadCharacter(s.clone()))?;
            let g = g.trim().parse().map_err(|_| Error::BadCharacter(s.clone()))?;
            Some(MultCharacter::new(c.p, d, g)?)
        }
    };
    Ok(Setup { p: c.p, n, f, chi })
}

fn read_sb_json(path: &Path) -> Result<SBJson> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn exact_input(s: &Setup, input: &Input) -> Result<SBFunction<Cyclo>> {
    if let Some(b) = &input.ball {
        let ball = Ball::parse(s.p, b)?;
        check_dim(s.n, ball.dim())?;
        return Ok(SBFunction::indicator(s.p, ball));
    }
    if let Some(path) = &input.phi {
        let j = read_sb_json(path)?;
        check_dim(s.n, j.n)?;
        check_p(s.p, j.p)?;
        return SBFunction::from_json_exact(&j);
    }
    Ok(SBFunction::indicator(s.p, Ball::origin(s.n, 0)))
}

fn float_input(s: &Setup, path: &Path) -> Result<SBFunction<Complex64>> {
    let j = read_sb_json(path)?;
    check_dim(s.n, j.n)?;
    check_p(s.p, j.p)?;
    SBFunction::from_json(&j)
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::Dimension { expected, got });
    }
    Ok(())
}

fn check_p(expected: u64, got: u64) -> Result<()> {
    if expected != got {
        return Err(Error::Json(format!("test function is over p = {got}, expected {expected}")));
    }
    Ok(())
}

fn parse_window(s: &str) -> Result<Resolution> {
    let bad = || Error::BadResolution(s.to_string());
    let (m, n) = s.split_once(',').ok_or_else(bad)?;
    Resolution::new(m.trim().parse().map_err(|_| bad())?, n.trim().parse().map_err(|_| bad())?)
}

fn chi_json(chi: &Option<MultCharacter>) -> Value {
    match chi {
        Some(c) => json!([c.order(), c.gen_index()]),
        None => Value::Null,
    }
}

fn complex_json(z: Complex64) -> Value {
    json!({"re": fmt_f64(z.re), "im": fmt_f64(z.im)})
}

fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(
        ".{}.{}.tmp",
        path.file_name().and_then(|s| s.to_str()).unwrap_or("out"),
        std::process::id()
    ));
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)
}

/// Zeta of Φ, read from and written to the cache when one is configured.
fn cached_zeta(c: &Common, s: &Setup, phi: &SBFunction<Cyclo>) -> Result<ZetaResult> {
    let key = c.cache_dir.as_ref().map(|dir| {
        let mut h = Sha256::new();
        let material = json!({
            "format": CACHE_FORMAT,
            "p": s.p,
            "f": s.f.to_string(),
            "n": s.n,
            "chi": chi_json(&s.chi),
            "phi": serde_json::to_value(phi.to_json_exact()).expect("serializable"),
            "depth": c.depth,
        });
        h.update(material.to_string().as_bytes());
        dir.join(format!("zeta-{}.json", hex::encode(h.finalize())))
    });
    if let Some(path) = &key {
        if let Ok(text) = fs::read_to_string(path) {
            if let Ok(v) = serde_json::from_str::<Value>(&text) {
                if v["format"] == json!(CACHE_FORMAT) && v["certified"] == json!(true) {
                    let value = RatFunc::from_json(&v["value"])?;
                    return Ok(ZetaResult {
                        value,
                        certified: true,
                        undecided: Vec::new(),
                    });
                }
            }
        }
    }
    let engine = ZetaEngine::new(s.p, s.f.clone(), s.chi.clone())?;
    let r = engine.zeta_of(phi, c.depth);
    if let (Some(path), true) = (&key, r.certified) {
        let body = json!({"format": CACHE_FORMAT, "certified": true, "value": r.value.to_json()});
        write_atomic(path, body.to_string().as_bytes())?;
    }
    Ok(r)
}

fn zeta_doc(s: &Setup, phi: &SBFunction<Cyclo>, r: &ZetaResult) -> Value {
    let poles: Vec<Value> = r
        .value
        .poles()
        .iter()
        .map(|pl| json!({"real_part": format_rational(&pl.real_part), "order": pl.order, "multiplicity": pl.multiplicity}))
        .collect();
    let undecided: Vec<Value> = r
        .undecided
        .iter()
        .map(|u| json!({"ball": u.ball.to_string(), "sup_valuation": u.sup_valuation}))
        .collect();
    json!({
        "command": "zeta",
        "p": s.p,
        "n": s.n,
        "f": s.f.to_string(),
        "chi": chi_json(&s.chi),
        "phi": serde_json::to_value(phi.to_json_exact()).expect("serializable"),
        "certified": r.certified,
        "value": r.value.to_json(),
        "text": r.value.to_string(),
        "poles": poles,
        "undecided": undecided,
    })
}

fn symbol(s: &Setup, beta: &str) -> Result<SymbolSpec> {
    SymbolSpec::new(s.p, s.f.clone(), Beta::parse(beta)?, s.chi.clone())
}

fn pairing_doc(cmd: &str, beta: &str, r: &Pairing) -> Value {
    json!({
        "command": cmd,
        "beta": beta,
        "exact": r.exact.as_ref().map(|a| a.to_string()),
        "value": complex_json(r.numeric),
        "pole_order": r.pole_order,
        "warning": r.warning,
    })
}

fn grid_text(g: &GridFunction) -> String {
    g.to_csv()
}

fn dispatch(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Zeta { common, input } => {
            let s = setup(&common)?;
            let phi = exact_input(&s, &input)?;
            let mut r = cached_zeta(&common, &s, &phi)?;
            r.value = r.value.reduced();
            let mut text = format!("{}\n", r.value);
            for u in &r.undecided {
                text.push_str(&format!("undecided {} (|f| <= {}^-{})\n", u.ball, s.p, u.sup_valuation));
            }
            Ok(Outcome {
                doc: zeta_doc(&s, &phi, &r),
                text,
                code: if r.certified { EXIT_OK } else { EXIT_PARTIAL },
            })
        }
        Command::Laurent { common, input, beta, top } => {
            let s = setup(&common)?;
            let phi = exact_input(&s, &input)?;
            let b = parse_rational(&beta).map_err(|_| Error::IrrationalBeta)?;
            let z = cached_zeta(&common, &s, &phi)?.require_certified()?;
            let series = laurent_expand(&z, &b, top)?;
            let coeffs: Vec<Value> = (series.order().min(top)..=top)
                .map(|m| {
                    let c = series.coeff(m);
                    json!({"m": m, "exact": c.to_string(), "value": complex_json(c.render())})
                })
                .collect();
            let text = (series.order().min(top)..=top)
                .map(|m| format!("c[{m}] = {}\n", series.coeff(m)))
                .collect();
            Ok(Outcome {
                doc: json!({"command": "laurent", "p": s.p, "f": s.f.to_string(), "beta": format_rational(&b),
                            "order": series.order(), "coefficients": coeffs}),
                text,
                code: EXIT_OK,
            })
        }
        Command::Apply { common, beta, input, window, csv } => {
            let s = setup(&common)?;
            let sym = symbol(&s, &beta)?;
            let phi = float_input(&s, &input)?;
            let res = window.as_deref().map(parse_window).transpose()?;
            let r = apply_operator(&sym, &phi, common.depth, res)?;
            if let Some(path) = &csv {
                write_atomic(path, r.grid.to_csv().as_bytes())?;
            }
            let doc = json!({
                "command": "apply",
                "exact": r.exact,
                "l2_error_bound": fmt_f64(r.l2_error_bound),
                "uncertified": r.uncertified,
                "grid": serde_json::to_value(r.grid.to_json()).expect("serializable"),
                "sb": r.sb.as_ref().map(|f| serde_json::to_value(f.to_json()).expect("serializable")),
            });
            Ok(Outcome {
                text: format!("exact: {}\nl2_error_bound: {}\n{}", r.exact, fmt_f64(r.l2_error_bound), grid_text(&r.grid)),
                doc,
                code: if r.exact { EXIT_OK } else { EXIT_PARTIAL },
            })
        }
        Command::Solve { common, beta, g, window, check, margin, csv } => {
            let s = setup(&common)?;
            let sym = symbol(&s, &beta)?;
            let g = float_input(&s, &g)?;
            let window = parse_window(&window)?;
            let t = DivisionFunctional::new(sym.clone(), common.depth)?;
            let r = t.solve(&g, window)?;
            if let Some(path) = &csv {
                write_atomic(path, r.u.to_csv().as_bytes())?;
            }
            let residual = if check {
                let modulo = s.f.eval(&vec![num_traits::Zero::zero(); s.n]) == num_traits::Zero::zero();
                Some(round_trip_residual(&sym, &r.u, &g, common.depth, margin, modulo)?)
            } else {
                None
            };
            let doc = json!({
                "command": "solve",
                "cells": r.cells,
                "residual": residual.map(fmt_f64),
                "u": serde_json::to_value(r.u.to_json()).expect("serializable"),
            });
            let mut text = grid_text(&r.u);
            if let Some(x) = residual {
                text.push_str(&format!("residual: {}\n", fmt_f64(x)));
            }
            Ok(Outcome { doc, text, code: EXIT_OK })
        }
        Command::Verify { common, beta, trials, seed, twist_side } => {
            let s = setup(&common)?;
            let sym = symbol(&s, &beta)?;
            let t = DivisionFunctional::new(sym, common.depth)?;
            let side = match twist_side {
                Side::Conjugate => TwistSide::Conjugate,
                Side::Same => TwistSide::Same,
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut rows = Vec::new();
            let mut text = String::new();
            let mut all_ok = true;
            for trial in 0..trials {
                let phi = random_sb(&mut rng, s.p, s.n, 30, 1, 4);
                let r = t.verify_division(&phi, side)?;
                all_ok &= r.ok;
                text.push_str(&format!(
                    "trial {trial}: {} left={} right={} removed_poles={}\n",
                    if r.ok { "ok" } else { "FAIL" },
                    r.left,
                    r.right,
                    r.removed_poles
                ));
                rows.push(json!({"trial": trial, "ok": r.ok, "left": r.left.to_string(),
                                 "right": r.right.to_string(), "removed_poles": r.removed_poles}));
            }
            Ok(Outcome {
                doc: json!({"command": "verify", "p": s.p, "f": s.f.to_string(), "beta": beta, "seed": seed,
                            "ok": all_ok, "trials": rows}),
                text,
                code: if all_ok { EXIT_OK } else { EXIT_FAILED },
            })
        }
        Command::Oracle { common, input, s0, oracle_depth } => {
            let s = setup(&common)?;
            let phi = exact_input(&s, &input)?;
            let z = cached_zeta(&common, &s, &phi)?.require_certified()?;
            let point = Complex64::new(s0, 0.0);
            let value = z.evaluate(point, 0.0)?;
            let bracket = truncated_zeta(s.p, &s.f, s.chi.as_ref(), &phi, point, oracle_depth)?;
            let inside = bracket.contains(value, 1e-12);
            Ok(Outcome {
                doc: json!({"command": "oracle", "s0": fmt_f64(s0), "value": complex_json(value),
                            "bracket": {"center": complex_json(bracket.value), "radius": fmt_f64(bracket.radius)},
                            "inside": inside}),
                text: format!(
                    "value {} bracket {} ± {} {}\n",
                    value,
                    bracket.value,
                    fmt_f64(bracket.radius),
                    if inside { "inside" } else { "OUTSIDE" }
                ),
                code: if inside { EXIT_OK } else { EXIT_FAILED },
            })
        }
        Command::PairE { common, input, beta } => pair(&common, &input, &beta, true),
        Command::PairT { common, input, beta } => pair(&common, &input, &beta, false),
    }
}

fn pair(common: &Common, input: &Input, beta: &str, e: bool) -> Result<Outcome> {
    let s = setup(common)?;
    let phi = exact_input(&s, input)?;
    let t = DivisionFunctional::new(symbol(&s, beta)?, common.depth)?;
    let r = if e { t.pair_e(&phi)? } else { t.pair_t(&phi)? };
    let cmd = if e { "pair-e" } else { "pair-t" };
    let text = match &r.exact {
        Some(a) => format!("{a}\n"),
        None => format!("{}\n", r.numeric),
    };
    Ok(Outcome {
        doc: pairing_doc(cmd, beta, &r),
        text,
        code: EXIT_OK,
    })
}
