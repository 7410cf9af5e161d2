//! Pseudo-differential operators `Φ ↦ F⁻¹(χ(ac f)|f|^β FΦ)`.

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::padic::{Ball, MultCharacter};
use crate::poly::Polynomial;
use crate::rational::{angular_component, ppow, to_f64, valuation, Q};
use crate::sb::{GridFunction, Resolution, SBFunction};
use crate::zeta::{certify_unit_ball, ZetaEngine};

/// Exponent β of the symbol: exact rational or a complex number.
#[derive(Clone, Debug, PartialEq)]
pub enum Beta {
    Rational(Q),
    Complex(Complex64),
}

impl Beta {
    pub fn to_complex(&self) -> Complex64 {
        match self {
            Beta::Rational(r) => Complex64::new(to_f64(r), 0.0),
            Beta::Complex(z) => *z,
        }
    }

    pub fn as_rational(&self) -> Option<&Q> {
        match self {
            Beta::Rational(r) => Some(r),
            Beta::Complex(_) => None,
        }
    }

    /// `"a/b"` is exact, anything else is parsed as a float.
    pub fn parse(s: &str) -> Result<Beta> {
        if let Ok(r) = crate::rational::parse_rational(s) {
            return Ok(Beta::Rational(r));
        }
        s.trim()
            .parse::<f64>()
            .map(|x| Beta::Complex(Complex64::new(x, 0.0)))
            .map_err(|_| Error::BadRational(s.to_string()))
    }
}

/// The symbol `χ(ac f)|f|^β`.
#[derive(Clone, Debug)]
pub struct SymbolSpec {
    pub p: u64,
    pub f: Polynomial,
    pub beta: Beta,
    pub chi: Option<MultCharacter>,
}

impl SymbolSpec {
    pub fn new(p: u64, f: Polynomial, beta: Beta, chi: Option<MultCharacter>) -> Result<Self> {
        if beta.to_complex().re <= 0.0 {
            return Err(Error::NonPositiveBeta);
        }
        if f.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(SymbolSpec { p, f, beta, chi })
    }

    pub fn engine(&self) -> Result<ZetaEngine> {
        ZetaEngine::new(self.p, self.f.clone(), self.chi.clone())
    }

    /// `p^{-vβ}`
    fn power(&self, v: i64) -> Complex64 {
        let lnp = (self.p as f64).ln();
        (-self.beta.to_complex() * lnp * v as f64).exp()
    }
}

#[derive(Clone, Debug)]
pub struct ApplyReport {
    /// samples of the result on the output grid
    pub grid: GridFunction,
    /// the result as a test function, when no refinement was needed
    pub sb: Option<SBFunction<Complex64>>,
    pub exact: bool,
    pub l2_error_bound: f64,
    /// Fourier-side balls left uncertified at the depth limit
    pub uncertified: usize,
}

/// `FΦ` through the grid DFT, with round-off residue removed.
fn fourier_side(phi: &SBFunction<Complex64>, out: Resolution) -> Result<SBFunction<Complex64>> {
    let mut g = phi.to_grid(phi.resolution().join(&out))?.fourier();
    let cut = 1e-13 * g.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    for v in g.values.iter_mut() {
        if v.norm() <= cut {
            *v = Complex64::new(0.0, 0.0);
        }
    }
    Ok(g.to_sb())
}

struct Multiplied {
    leaves: Vec<(Ball, Complex64)>,
    exact: bool,
    err_sq: f64,
    uncertified: usize,
}

/// `F⁻¹G` sampled on the grid of `out`; coarse leaves go through the DFT,
/// finer ones are summed pointwise.
fn inverse_on_grid(p: u64, n: usize, leaves: &[(Ball, Complex64)], out: Resolution) -> Result<GridFunction> {
    let base_level = out.m;
    let (coarse, fine): (Vec<_>, Vec<_>) = leaves.iter().cloned().partition(|(b, _)| b.level() <= base_level);
    let g = SBFunction::normalize(p, n, coarse);
    let mut grid = g.to_grid(out.dual())?.inverse_fourier();
    debug_assert_eq!(grid.res, out);
    if fine.is_empty() {
        return Ok(grid);
    }
    // integer coordinates: x = p^{-M} k
    let pts: Vec<Vec<i128>> = (0..grid.values.len())
        .map(|i| grid.index(i).into_iter().map(|k| k as i128).collect())
        .collect();
    let pf = p as f64;
    for (b, c) in &fine {
        let e = b.level();
        let j = b
            .center()
            .iter()
            .filter_map(|x| valuation(x, p))
            .map(|v| (-v).max(0))
            .max()
            .unwrap_or(0);
        let modulus = (p as i128).pow((j + out.m).max(0) as u32);
        let scale = ppow(p, j);
        let num: Vec<i128> = b
            .center()
            .iter()
            .map(|x| (x * &scale).to_integer().to_i128().expect("center fits"))
            .collect();
        let weight = *c * pf.powf(-(e * n as i64) as f64);
        // x ∈ p^{-e}Z^n  ⇔  p^{M-e} | k_i
        let div = if out.m - e > 0 {
            (p as i128).pow((out.m - e) as u32)
        } else {
            1
        };
        for (val, k) in grid.values.iter_mut().zip(&pts) {
            if k.iter().any(|ki| ki % div != 0) {
                continue;
            }
            let phase = if modulus == 1 {
                0
            } else {
                num.iter().zip(k).fold(0i128, |acc, (a, x)| (acc + a.rem_euclid(modulus) * x) % modulus)
            };
            let ang = 2.0 * std::f64::consts::PI * phase as f64 / modulus as f64;
            *val += weight * Complex64::from_polar(1.0, ang);
        }
    }
    Ok(grid)
}

fn multiply_symbol(
    sym: &SymbolSpec,
    engine: &ZetaEngine,
    fphi: &SBFunction<Complex64>,
    depth: u32,
    zeta_depth: u32,
) -> Multiplied {
    let mut m = Multiplied {
        leaves: Vec::new(),
        exact: true,
        err_sq: 0.0,
        uncertified: 0,
    };
    for (b, c) in fphi.terms() {
        refine_ball(sym, engine, b, *c, depth, zeta_depth, &mut m);
    }
    m
}

fn refine_ball(
    sym: &SymbolSpec,
    engine: &ZetaEngine,
    ball: &Ball,
    c: Complex64,
    depth: u32,
    zeta_depth: u32,
    out: &mut Multiplied,
) {
    let p = sym.p;
    if let Some(cert) = certify_unit_ball(p, &sym.f, ball, sym.chi.is_some()) {
        let mut mult = sym.power(cert.v);
        if let Some(chi) = &sym.chi {
            let ac = angular_component(&sym.f.eval(ball.center()), p, 1).expect("nonzero");
            mult *= chi.value(ac).to_complex();
        }
        out.leaves.push((ball.clone(), c * mult));
        return;
    }
    if depth > 0 {
        for child in ball.subdivide(p) {
            refine_ball(sym, engine, &child, c, depth - 1, zeta_depth, out);
        }
        return;
    }
    // symbol replaced by its exact ball average
    out.exact = false;
    out.uncertified += 1;
    let vol = to_f64(&ball.volume(p));
    let z = engine.zeta_ball(ball, zeta_depth);
    let avg = z
        .value
        .evaluate(sym.beta.to_complex(), 0.0)
        .unwrap_or(Complex64::new(0.0, 0.0))
        / vol;
    out.leaves.push((ball.clone(), c * avg));
    let sup_val = z
        .undecided
        .iter()
        .map(|u| u.sup_valuation)
        .chain(std::iter::once(sup_valuation(sym, ball)))
        .min()
        .unwrap_or(i64::MAX);
    let sup = (p as f64).powf(-(sup_val as f64) * sym.beta.to_complex().re);
    let osc = if sym.chi.is_some() { 2.0 * sup } else { sup };
    out.err_sq += vol * c.norm_sqr() * osc * osc;
}

fn sup_valuation(sym: &SymbolSpec, ball: &Ball) -> i64 {
    sym.f
        .hasse_taylor(ball.center())
        .iter()
        .map(|(alpha, c)| {
            valuation(c, sym.p).expect("nonzero") + ball.level() * alpha.iter().sum::<u32>() as i64
        })
        .min()
        .unwrap_or(i64::MAX)
}

/// Apply `f(∂,β)` (or the twisted operator) to `Φ`, sampling the result on
/// `out` (default: the resolution of `Φ`).
pub fn apply_operator(
    sym: &SymbolSpec,
    phi: &SBFunction<Complex64>,
    depth: u32,
    out: Option<Resolution>,
) -> Result<ApplyReport> {
    let p = sym.p;
    let n = phi.dim();
    let res = out.unwrap_or_else(|| phi.resolution());
    let engine = sym.engine()?;
    if phi.is_zero() {
        let grid = SBFunction::<Complex64>::zero(p, n).to_grid(res)?;
        return Ok(ApplyReport {
            grid,
            sb: Some(SBFunction::zero(p, n)),
            exact: true,
            l2_error_bound: 0.0,
            uncertified: 0,
        });
    }
    let fphi = fourier_side(phi, res)?;
    let m = multiply_symbol(sym, &engine, &fphi, depth, depth.max(30));
    let grid = inverse_on_grid(p, n, &m.leaves, res)?;
    let sb = if m.exact {
        let g = SBFunction::normalize(p, n, m.leaves);
        Some(g.to_grid(g.resolution())?.inverse_fourier().to_sb())
    } else {
        None
    };
    Ok(ApplyReport {
        grid,
        sb,
        exact: m.exact,
        l2_error_bound: m.err_sq.sqrt(),
        uncertified: m.uncertified,
    })
}

/// `D^α` with symbol `|ξ|^α` in one variable. Shells `p^kZ_p \ p^{k+1}Z_p`
/// are summed in closed form for `depth` levels below each Fourier-side ball
/// containing 0; the remaining core ball carries the exact average of `|ξ|^α`.
pub fn apply_vladimirov(
    p: u64,
    alpha: f64,
    phi: &SBFunction<Complex64>,
    depth: u32,
    out: Option<Resolution>,
) -> Result<ApplyReport> {
    if alpha <= 0.0 {
        return Err(Error::NonPositiveBeta);
    }
    if phi.dim() != 1 {
        return Err(Error::Dimension {
            expected: 1,
            got: phi.dim(),
        });
    }
    let res = out.unwrap_or_else(|| phi.resolution());
    let fphi = fourier_side(phi, res)?;
    let pf = p as f64;
    let mut leaves = Vec::new();
    let mut exact = true;
    let mut err_sq = 0.0;
    let mut refined = false;
    for (b, c) in fphi.terms() {
        let a = &b.center()[0];
        if !a.is_zero() {
            let v = valuation(a, p).expect("nonzero");
            leaves.push((b.clone(), c * pf.powf(-(v as f64) * alpha)));
            continue;
        }
        refined = true;
        let e = b.level();
        for k in e..e + depth as i64 {
            let shell_val = *c * pf.powf(-(k as f64) * alpha);
            for child in Ball::origin(1, k).subdivide(p).into_iter().skip(1) {
                leaves.push((child, shell_val));
            }
        }
        let core = e + depth as i64;
        // ∫_{p^m Z_p}|ξ|^α / vol = (1 − p^{-1}) p^{-mα} / (1 − p^{-1-α})
        let avg = (1.0 - 1.0 / pf) * pf.powf(-(core as f64) * alpha) / (1.0 - pf.powf(-1.0 - alpha));
        leaves.push((Ball::origin(1, core), *c * avg));
        exact = false;
        let vol = pf.powf(-(core as f64));
        let sup = pf.powf(-(core as f64) * alpha);
        err_sq += vol * c.norm_sqr() * sup * sup;
    }
    let grid = inverse_on_grid(p, 1, &leaves, res)?;
    let sb = if !refined {
        Some(SBFunction::normalize(p, 1, leaves).inverse_fourier())
    } else {
        None
    };
    Ok(ApplyReport {
        grid,
        sb,
        exact,
        l2_error_bound: err_sq.sqrt(),
        uncertified: usize::from(!exact),
    })
}
