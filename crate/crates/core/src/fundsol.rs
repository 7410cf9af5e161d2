//! The division functional `T`, the fundamental solution `E = F⁻¹T` and
//! solutions `u = E ∗ g`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::Zero;
use rayon::prelude::*;

use crate::cyclo::Cyclo;
use crate::error::Result;
use crate::laurent::{laurent_expand, Alg};
use crate::operator::{apply_operator, Beta, SymbolSpec};
use crate::padic::{Ball, MultCharacter};
use crate::ratfunc::RatFunc;
use crate::rational::{to_f64, Q};
use crate::sb::{GridFunction, Resolution, SBFunction};
use crate::zeta::ZetaEngine;

/// Below this modulus a denominator factor at `s = −β` draws a warning on
/// the numeric path.
const POLE_WARNING: f64 = 1e-6;

/// `⟨T, Φ⟩`: exact when β is rational.
#[derive(Clone, Debug)]
pub struct Pairing {
    pub exact: Option<Alg>,
    pub numeric: Complex64,
    /// order of the pole of the zeta function at `s = −β` (0 if none)
    pub pole_order: i64,
    pub warning: Option<String>,
}

impl Pairing {
    fn zero(p: u64, beta: &Beta) -> Self {
        Pairing {
            exact: beta.as_rational().map(|b| Alg::zero(p, b.denom().try_into().unwrap_or(1))),
            numeric: Complex64::new(0.0, 0.0),
            pole_order: 0,
            warning: None,
        }
    }
}

/// Which character the verification pairs against the twisted functional.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TwistSide {
    /// multiplier `χ̄(ac f)|f|^β`, the product character is trivial
    #[default]
    Conjugate,
    /// multiplier `χ(ac f)|f|^β`, the product character is `χ²`
    Same,
}

#[derive(Clone, Debug)]
pub struct DivisionReport {
    pub ok: bool,
    pub left: Cyclo,
    pub right: Cyclo,
    /// pole order at `s = −β` cancelled by the factor `|f|^β`
    pub removed_poles: i64,
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub u: GridFunction,
    /// Fourier-side cells whose constants were computed
    pub cells: usize,
}

/// `T` for a fixed symbol, sharing one zeta memo across all pairings.
pub struct DivisionFunctional {
    sym: SymbolSpec,
    engine: ZetaEngine,
    depth: u32,
}

impl DivisionFunctional {
    pub fn new(sym: SymbolSpec, depth: u32) -> Result<Self> {
        let engine = sym.engine()?;
        Ok(DivisionFunctional { sym, engine, depth })
    }

    pub fn symbol(&self) -> &SymbolSpec {
        &self.sym
    }

    pub fn engine(&self) -> &ZetaEngine {
        &self.engine
    }

    fn pair_ratfunc(&self, z: &RatFunc) -> Result<Pairing> {
        match &self.sym.beta {
            Beta::Rational(b) => {
                let series = laurent_expand(z, b, 0)?;
                let c0 = series.coeff(0).value;
                Ok(Pairing {
                    numeric: c0.to_complex(),
                    exact: Some(c0),
                    pole_order: (-series.order()).max(0),
                    warning: None,
                })
            }
            Beta::Complex(b) => {
                let numeric = z.evaluate(-*b, 0.0)?;
                let t = (*b * (self.sym.p as f64).ln()).exp();
                let closest = z
                    .denominator()
                    .iter()
                    .map(|f| (Complex64::new(1.0, 0.0) - t.powu(f.b) * (self.sym.p as f64).powf(-(f.a as f64))).norm())
                    .fold(f64::INFINITY, f64::min);
                Ok(Pairing {
                    exact: None,
                    numeric,
                    pole_order: 0,
                    warning: (closest < POLE_WARNING).then(|| format!("within {closest:e} of a pole")),
                })
            }
        }
    }

    /// `⟨T, Φ⟩ = c₀` of the zeta function of Φ at `s = −β`.
    pub fn pair_t(&self, phi: &SBFunction<Cyclo>) -> Result<Pairing> {
        if phi.is_zero() {
            return Ok(Pairing::zero(self.sym.p, &self.sym.beta));
        }
        let z = self.engine.zeta_of(phi, self.depth).require_certified()?;
        self.pair_ratfunc(&z)
    }

    /// `⟨E, Φ⟩ = ⟨T, F⁻¹Φ⟩`.
    pub fn pair_e(&self, phi: &SBFunction<Cyclo>) -> Result<Pairing> {
        self.pair_t(&phi.inverse_fourier())
    }

    /// `⟨T, 1_B⟩` rendered, for a single ball.
    fn ball_constant(&self, ball: &Ball) -> Result<Complex64> {
        let z = self.engine.zeta_ball(ball, self.depth).require_certified()?;
        Ok(self.pair_ratfunc(&z)?.numeric)
    }

    /// Samples of `u = E ∗ g` on the grid of `window`:
    /// `u(x) = ⟨T_ξ, ĝ(ξ)Ψ([x,ξ])⟩`.
    pub fn solve(&self, g: &SBFunction<Complex64>, window: Resolution) -> Result<SolveReport> {
        let p = self.sym.p;
        let n = g.dim();
        let mut u = SBFunction::<Complex64>::zero(p, n).to_grid(window)?;
        if g.is_zero() {
            return Ok(SolveReport { u, cells: 0 });
        }
        // ĝ on cells fine enough for Ψ([x,·]) to be constant on each
        let gr = g.resolution();
        let ghat = g
            .to_grid(Resolution {
                m: gr.m.max(window.m),
                n: gr.n,
            })?
            .fourier();
        let cut = 1e-13 * ghat.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let mut cells = Vec::new();
        for (i, v) in ghat.values.iter().enumerate() {
            if v.norm() <= cut {
                continue;
            }
            let ball = Ball::new(p, ghat.point(i), ghat.res.n)?;
            let k: Vec<i128> = ghat.index(i).into_iter().map(|k| k as i128).collect();
            cells.push((ball, k, *v));
        }
        let mut consts = BTreeMap::new();
        for (ball, _, _) in &cells {
            consts.insert(ball.clone(), self.ball_constant(ball)?);
        }
        // ξ = p^{-A}k, x = p^{-W}l, [x,ξ] = Σ k l / p^{A+W}
        let modulus = (p as i128).pow((ghat.res.m + window.m).max(0) as u32);
        let weights: Vec<(Vec<i128>, Complex64)> = cells
            .iter()
            .map(|(b, k, v)| (k.clone(), v * consts[b]))
            .collect();
        let side = u.side();
        u.values.par_iter_mut().enumerate().for_each(|(flat, val)| {
            let mut l = vec![0i128; n];
            let mut r = flat;
            for d in (0..n).rev() {
                l[d] = (r % side) as i128;
                r /= side;
            }
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, w) in &weights {
                let phase = k.iter().zip(&l).fold(0i128, |s, (a, b)| (s + a * b) % modulus);
                acc += w * Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * phase as f64 / modulus as f64);
            }
            *val = acc;
        });
        Ok(SolveReport { u, cells: cells.len() })
    }

    /// Checks `lim_{s'→0}⟨|f|^{s'}, Φ⟩ = ∫Φ`, the reduction of `|f|^β T = 1`.
    pub fn verify_division(&self, phi: &SBFunction<Cyclo>, side: TwistSide) -> Result<DivisionReport> {
        let p = self.sym.p;
        let product: Option<MultCharacter> = self.sym.chi.as_ref().map(|chi| match side {
            TwistSide::Conjugate => chi.mul(&chi.conj()),
            TwistSide::Same => chi.mul(chi),
        });
        let removed_poles = match self.sym.beta.as_rational() {
            Some(_) if !phi.is_zero() => self.pair_t(phi)?.pole_order,
            _ => 0,
        };
        let right = phi.integrate();
        let left = if phi.is_zero() {
            Cyclo::zero()
        } else {
            let r = if product.as_ref().is_none_or(|c| c.is_trivial()) && self.sym.chi.is_none() {
                self.engine.zeta_of(phi, self.depth)
            } else {
                ZetaEngine::new(p, self.sym.f.clone(), product)?.zeta_of(phi, self.depth)
            }
            .require_certified()?;
            r.eval_at_integer(0)?
        };
        Ok(DivisionReport {
            ok: left == right,
            left,
            right,
            removed_poles,
        })
    }
}

/// `sup |f(∂,β)u − g|` over the points of `u`'s grid at distance at least
/// `margin` levels from the window boundary, optionally modulo a constant.
pub fn round_trip_residual(
    sym: &SymbolSpec,
    u: &GridFunction,
    g: &SBFunction<Complex64>,
    depth: u32,
    margin: i64,
    modulo_constants: bool,
) -> Result<f64> {
    let report = apply_operator(sym, &u.to_sb(), depth, Some(u.res))?;
    let inner = u.res.m - margin;
    let mut diffs = Vec::new();
    for i in 0..report.grid.values.len() {
        let x = report.grid.point(i);
        let interior = x
            .iter()
            .all(|xi| crate::rational::valuation(xi, sym.p).is_none_or(|v| v >= -inner));
        if interior {
            diffs.push(report.grid.values[i] - g.eval(&x));
        }
    }
    if diffs.is_empty() {
        return Ok(0.0);
    }
    let shift = if modulo_constants {
        diffs.iter().sum::<Complex64>() / diffs.len() as f64
    } else {
        Complex64::zero()
    };
    Ok(diffs.iter().map(|d| (d - shift).norm()).fold(0.0, f64::max))
}

/// `∫ Φ(x)|x|^{α−1} dx / Γ_p(α)` in one variable, for exact `Φ`.
pub fn riesz_pairing(p: u64, alpha: &Q, phi: &SBFunction<Cyclo>) -> Complex64 {
    let a = to_f64(alpha);
    let pf = p as f64;
    let gamma = (1.0 - pf.powf(a - 1.0)) / (1.0 - pf.powf(-a));
    // ∫_{c+p^eZ_p}|x|^{α−1}: |c|^{α−1}p^{-e} off zero, shell sum at zero
    let mut acc = Complex64::new(0.0, 0.0);
    for (b, c) in phi.terms() {
        let e = b.level() as f64;
        let center = &b.center()[0];
        let integral = if b.contains_point(p, &[Q::zero()]) {
            (1.0 - 1.0 / pf) * pf.powf(-e * a) / (1.0 - pf.powf(-a))
        } else {
            let v = crate::rational::valuation(center, p).expect("nonzero") as f64;
            pf.powf(-v * (a - 1.0)) * pf.powf(-e)
        };
        acc += c.to_complex() * integral;
    }
    acc / gamma
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Polynomial;
    use crate::rational::{ppow, q, qf};

    fn functional(p: u64, f: Polynomial, beta: Q) -> DivisionFunctional {
        DivisionFunctional::new(SymbolSpec::new(p, f, Beta::Rational(beta), None).unwrap(), 30).unwrap()
    }

    fn x() -> Polynomial {
        Polynomial::var(1, 0)
    }

    fn unit(p: u64) -> SBFunction<Cyclo> {
        SBFunction::indicator(p, Ball::origin(1, 0))
    }

    #[test]
    fn pair_t_examples() {
        for p in [2u64, 3, 5] {
            let pf = p as f64;
            let r = functional(p, x(), qf(1, 2)).pair_t(&unit(p)).unwrap();
            let want = (1.0 - 1.0 / pf) / (1.0 - pf.powf(-0.5));
            assert_eq!(r.pole_order, 0);
            assert!((r.numeric.re - want).abs() < 1e-12);

            let r = functional(p, x(), q(1)).pair_t(&unit(p)).unwrap();
            assert_eq!(r.pole_order, 1);
            let half = (q(1) - ppow(p, -1)) / q(2);
            assert_eq!(r.exact.unwrap().as_rational(), Some(half));

            let shell = SBFunction::indicator(p, Ball::new(p, vec![q(1)], 1).unwrap());
            let r = functional(p, x(), q(1)).pair_t(&shell).unwrap();
            assert_eq!(r.exact.unwrap().as_rational(), Some(ppow(p, -1)));
        }
    }

    #[test]
    fn pair_e_examples() {
        let t = functional(3, x(), qf(1, 2));
        assert!(t.pair_e(&SBFunction::zero(3, 1)).unwrap().numeric.norm() == 0.0);
        let a = t.pair_e(&unit(3)).unwrap();
        let b = t.pair_t(&unit(3)).unwrap();
        assert_eq!(a.exact, b.exact);
    }

    #[test]
    fn riesz_kernel_on_mean_zero() {
        for p in [2u64, 3, 5] {
            let phi = SBFunction::normalize(
                p,
                1,
                vec![
                    (Ball::origin(1, 1), Cyclo::one()),
                    (Ball::origin(1, 0), Cyclo::from_q(-ppow(p, -1))),
                ],
            );
            assert!(phi.integrate().is_zero());
            for alpha in [qf(1, 2), q(2), q(3)] {
                let e = functional(p, x(), alpha.clone()).pair_e(&phi).unwrap();
                let k = riesz_pairing(p, &alpha, &phi);
                assert!((e.numeric - k).norm() < 1e-12, "p={p} α={alpha}: {} vs {k}", e.numeric);
            }
        }
    }

    #[test]
    fn division_identity() {
        let f = Polynomial::from_terms(2, [(vec![1, 1], q(1))]);
        let phi = SBFunction::indicator(3, Ball::origin(2, 0));
        let r = functional(3, f, qf(3, 2)).verify_division(&phi, TwistSide::Conjugate).unwrap();
        assert!(r.ok);
        assert_eq!(r.left, Cyclo::one());

        let r = functional(5, x(), q(1)).verify_division(&unit(5), TwistSide::Conjugate).unwrap();
        assert!(r.ok);
        assert_eq!(r.removed_poles, 1);

        let sym = SymbolSpec::new(3, x(), Beta::Rational(q(1)), Some(MultCharacter::quadratic(3).unwrap())).unwrap();
        let t = DivisionFunctional::new(sym, 30).unwrap();
        for side in [TwistSide::Conjugate, TwistSide::Same] {
            let r = t.verify_division(&unit(3), side).unwrap();
            assert!(r.ok);
            assert_eq!(r.left, Cyclo::one());
        }
    }

    #[test]
    fn solve_round_trip_without_zeros() {
        let f = Polynomial::from_terms(1, [(vec![2], q(1)), (vec![0], q(1))]);
        let t = functional(3, f, q(1));
        let g = SBFunction::<Complex64>::indicator(3, Ball::origin(1, 0));
        let window = Resolution::new(2, 2).unwrap();
        let u = t.solve(&g, window).unwrap();
        let res = round_trip_residual(t.symbol(), &u.u, &g, 10, 1, false).unwrap();
        assert!(res < 1e-8, "{res}");

        let zero = t.solve(&SBFunction::zero(3, 1), window).unwrap();
        assert!(zero.u.values.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn solve_round_trip_modulo_constants() {
        let f = Polynomial::from_terms(2, [(vec![2, 0], q(1)), (vec![0, 2], q(1))]);
        let t = functional(3, f, q(1));
        let g = SBFunction::<Complex64>::indicator(3, Ball::origin(2, 0));
        let u = t.solve(&g, Resolution::new(2, 2).unwrap()).unwrap();
        let raw = round_trip_residual(t.symbol(), &u.u, &g, 12, 1, false).unwrap();
        let res = round_trip_residual(t.symbol(), &u.u, &g, 12, 1, true).unwrap();
        assert!(res < 1e-8, "{res} (raw {raw})");
    }

    #[test]
    fn solve_translation() {
        let t = functional(3, x(), q(1));
        let g = SBFunction::<Complex64>::indicator(3, Ball::new(3, vec![q(1)], 1).unwrap());
        let a = [q(1)];
        let window = Resolution::new(1, 1).unwrap();
        let u1 = t.solve(&g, window).unwrap().u;
        let u2 = t.solve(&g.translate(&a).unwrap(), window).unwrap().u;
        for i in 0..u1.values.len() {
            let x = u1.point(i);
            let y: Vec<Q> = x.iter().zip(&a).map(|(x, a)| x + a).collect();
            let j = u2.flat_of_point(&y).unwrap();
            assert!((u1.values[i] - u2.values[j]).norm() < 1e-10);
        }
    }
}
