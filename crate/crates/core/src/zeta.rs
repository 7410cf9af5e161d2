//! Local zeta functions `Z(s,Φ) = ∫ Φ(x)|f(x)|^s dx` (optionally twisted by
//! `χ(ac f)`) as rational functions of `t = p^{-s}`.
//!
//! Balls are decided by three certified leaf rules tried in order: constant
//! absolute value (unit rule), a simple zero with constant derivative norm
//! (smooth-zero rule), and homogeneous scaling about the origin. Anything
//! else is split into its `p^n` children until the depth budget runs out.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::coeff::Coeff;
use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::padic::{Ball, MultCharacter};
use crate::poly::Polynomial;
use crate::ratfunc::{DenFactor, RatFunc};
use crate::rational::{angular_component, ppow, q, valuation};
use crate::sb::SBFunction;

static FACTOR_VIOLATIONS: AtomicUsize = AtomicUsize::new(0);
static FACTORS_EMITTED: AtomicUsize = AtomicUsize::new(0);

/// Number of emitted denominator factors with `a < 1` or `b < 1` so far.
pub fn factor_violations() -> usize {
    FACTOR_VIOLATIONS.load(Ordering::Relaxed)
}

pub fn factors_emitted() -> usize {
    FACTORS_EMITTED.load(Ordering::Relaxed)
}

fn emit(a: i64, b: u32) -> DenFactor {
    FACTORS_EMITTED.fetch_add(1, Ordering::Relaxed);
    if a < 1 || b < 1 {
        FACTOR_VIOLATIONS.fetch_add(1, Ordering::Relaxed);
    }
    DenFactor::new(a, b)
}

/// `min_{α≠0} v(f_α(a)) + e|α|`, i.e. the tail of the Taylor expansion is
/// bounded by `p^{-result}` on the ball. `None` when there is no tail.
fn tail_valuation(p: u64, f: &Polynomial, ball: &Ball) -> (Option<i64>, Option<i64>) {
    let e = ball.level();
    let taylor = f.hasse_taylor(ball.center());
    let mut v0 = None;
    let mut tail: Option<i64> = None;
    for (alpha, c) in &taylor {
        let deg: u32 = alpha.iter().sum();
        let v = valuation(c, p).expect("nonzero Taylor coefficient");
        if deg == 0 {
            v0 = Some(v);
        } else {
            let t = v + e * deg as i64;
            tail = Some(tail.map_or(t, |x: i64| x.min(t)));
        }
    }
    (v0, tail)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnitCert {
    /// `|f| ≡ p^{-v}` on the ball
    pub v: i64,
    /// `f(x)/f(a) ∈ 1 + pZ_p` on the ball
    pub angular: bool,
}

/// Certificate that `|f|` is constant on the ball.
pub fn certify_unit_ball(p: u64, f: &Polynomial, ball: &Ball, need_angular: bool) -> Option<UnitCert> {
    let (v0, tail) = tail_valuation(p, f, ball);
    let v = v0?;
    let dominated = tail.is_none_or(|t| t > v);
    let angular = tail.is_none_or(|t| t > v);
    if !dominated || (need_angular && !angular) {
        return None;
    }
    Some(UnitCert { v, angular })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SmoothCert {
    /// index of the variable whose partial derivative has constant norm
    pub i: usize,
    /// `|∂_i f| ≡ p^{-d}` on the ball
    pub d: i64,
}

/// Hensel-type certificate: `f(a + p^e y) = p^{e+d} g(y)` with `g` integral
/// and `∂g/∂y_i` a unit everywhere, so `g` pushes Haar measure forward to Haar
/// measure on `Z_p`.
pub fn certify_smooth_zero(p: u64, f: &Polynomial, partials: &[Polynomial], ball: &Ball) -> Option<SmoothCert> {
    let e = ball.level();
    let (v0, tail) = tail_valuation(p, f, ball);
    for (i, g) in partials.iter().enumerate() {
        let (gv, gtail) = tail_valuation(p, g, ball);
        let Some(d) = gv else { continue };
        if !gtail.is_none_or(|t| t > d) {
            continue;
        }
        let depth_ok = v0.is_none_or(|v| v >= e + d) && tail.is_none_or(|t| t >= e + d);
        if depth_ok {
            return Some(SmoothCert { i, d });
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq)]
pub struct Undecided {
    pub ball: Ball,
    /// `|f| ≤ p^{-sup_valuation}` on the ball
    pub sup_valuation: i64,
}

impl Undecided {
    pub fn sup_bound(&self, p: u64) -> f64 {
        (p as f64).powf(-(self.sup_valuation as f64))
    }
}

#[derive(Clone, Debug)]
pub struct ZetaResult {
    pub value: RatFunc,
    pub certified: bool,
    pub undecided: Vec<Undecided>,
}

impl ZetaResult {
    fn leaf(value: RatFunc) -> Self {
        ZetaResult {
            value,
            certified: true,
            undecided: Vec::new(),
        }
    }

    fn absorb(&mut self, other: ZetaResult, coeff: &Cyclo) {
        self.value = self.value.add(&other.value.scale(coeff));
        self.certified &= other.certified;
        self.undecided.extend(other.undecided);
    }

    pub fn require_certified(self) -> Result<RatFunc> {
        if self.certified {
            Ok(self.value)
        } else {
            Err(Error::Uncertified(self.undecided.into_iter().map(|u| u.ball).collect()))
        }
    }
}

/// Leaf rule that decided a ball.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    Unit,
    SmoothZero,
    Scaling,
    Split,
    Exhausted,
}

/// The engine for one `(p, f, χ)`, with a memo cache keyed by `(ball, depth)`.
pub struct ZetaEngine {
    p: u64,
    f: Polynomial,
    chi: Option<MultCharacter>,
    partials: Vec<Polynomial>,
    homogeneous: Option<u32>,
    cache: Mutex<HashMap<(Ball, u32), ZetaResult>>,
}

impl ZetaEngine {
    pub fn new(p: u64, f: Polynomial, chi: Option<MultCharacter>) -> Result<Self> {
        if f.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if let Some(c) = &chi {
            if c.p() != p {
                return Err(Error::BadCharacter(format!("character is for p = {}", c.p())));
            }
        }
        let chi = chi.filter(|c| !c.is_trivial());
        let partials = (0..f.nvars()).map(|i| f.partial(i)).collect();
        let homogeneous = f.homogeneous_degree();
        Ok(ZetaEngine {
            p,
            f,
            chi,
            partials,
            homogeneous,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.f
    }

    pub fn character(&self) -> Option<&MultCharacter> {
        self.chi.as_ref()
    }

    pub fn cache_len(&self) -> usize {
        self.cache.lock().unwrap().len()
    }

    fn sup_valuation(&self, ball: &Ball) -> i64 {
        let (v0, tail) = tail_valuation(self.p, &self.f, ball);
        match (v0, tail) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => i64::MAX,
        }
    }

    /// Which rule applies at this ball (before any recursion).
    pub fn classify(&self, ball: &Ball, depth: u32) -> Rule {
        if certify_unit_ball(self.p, &self.f, ball, self.chi.is_some()).is_some() {
            Rule::Unit
        } else if certify_smooth_zero(self.p, &self.f, &self.partials, ball).is_some() {
            Rule::SmoothZero
        } else if depth == 0 {
            Rule::Exhausted
        } else if self.homogeneous.is_some() && ball.is_centered_at_zero() {
            Rule::Scaling
        } else {
            Rule::Split
        }
    }

    pub fn zeta_ball(&self, ball: &Ball, depth: u32) -> ZetaResult {
        let key = (ball.clone(), depth);
        if let Some(r) = self.cache.lock().unwrap().get(&key) {
            return r.clone();
        }
        let r = self.compute(ball, depth);
        self.cache.lock().unwrap().insert(key, r.clone());
        r
    }

    fn compute(&self, ball: &Ball, depth: u32) -> ZetaResult {
        let p = self.p;
        let n = ball.dim() as i64;
        let e = ball.level();
        let vol = Cyclo::from_q(ball.volume(p));
        if let Some(cert) = certify_unit_ball(p, &self.f, ball, self.chi.is_some()) {
            let mut c = vol;
            if let Some(chi) = &self.chi {
                let fa = self.f.eval(ball.center());
                let ac = angular_component(&fa, p, 1).expect("nonzero value");
                c = &c * &chi.value(ac);
            }
            return ZetaResult::leaf(RatFunc::monomial(p, c, cert.v));
        }
        if let Some(cert) = certify_smooth_zero(p, &self.f, &self.partials, ball) {
            if self.chi.is_some() {
                return ZetaResult::leaf(RatFunc::zero(p));
            }
            let c = vol.scale(&(q(1) - ppow(p, -1)));
            let v = RatFunc::monomial(p, c, e + cert.d).divide_by(emit(1, 1));
            return ZetaResult::leaf(v);
        }
        if depth == 0 {
            return ZetaResult {
                value: RatFunc::zero(p),
                certified: false,
                undecided: vec![Undecided {
                    ball: ball.clone(),
                    sup_valuation: self.sup_valuation(ball),
                }],
            };
        }
        let children = ball.subdivide(p);
        if let (Some(deg), true) = (self.homogeneous, ball.is_centered_at_zero()) {
            // Z_B = Shell_B / (1 − p^{-n} t^D)
            let mut shell = self.sum_children(&children[1..], depth - 1);
            shell.value = shell.value.divide_by(emit(n, deg));
            return shell;
        }
        self.sum_children(&children, depth - 1)
    }

    fn sum_children(&self, children: &[Ball], depth: u32) -> ZetaResult {
        let parts: Vec<ZetaResult> = if children.len() >= 8 {
            children.par_iter().map(|c| self.zeta_ball(c, depth)).collect()
        } else {
            children.iter().map(|c| self.zeta_ball(c, depth)).collect()
        };
        let mut acc = ZetaResult::leaf(RatFunc::zero(self.p));
        for r in parts {
            acc.absorb(r, &Cyclo::one());
        }
        acc
    }

    /// `Σ_i c_i·Z(B_i)` over the balls of a normalized test function.
    pub fn zeta_of(&self, phi: &SBFunction<Cyclo>, depth: u32) -> ZetaResult {
        let parts: Vec<(Cyclo, ZetaResult)> = phi
            .terms()
            .par_iter()
            .map(|(b, c)| (c.clone(), self.zeta_ball(b, depth)))
            .collect();
        let mut acc = ZetaResult::leaf(RatFunc::zero(self.p));
        for (c, r) in parts {
            acc.absorb(r, &c);
        }
        acc
    }

    /// Per-ball results for a test function with arbitrary coefficients.
    pub fn zeta_terms<C: Coeff>(&self, phi: &SBFunction<C>, depth: u32) -> Vec<(C, ZetaResult)> {
        phi.terms()
            .par_iter()
            .map(|(b, c)| (c.clone(), self.zeta_ball(b, depth)))
            .collect()
    }
}

/// Convenience wrapper for a single ball.
pub fn zeta_ball(
    p: u64,
    f: &Polynomial,
    chi: Option<&MultCharacter>,
    ball: &Ball,
    depth: u32,
) -> Result<ZetaResult> {
    Ok(ZetaEngine::new(p, f.clone(), chi.cloned())?.zeta_ball(ball, depth))
}

pub fn zeta_of(
    p: u64,
    f: &Polynomial,
    chi: Option<&MultCharacter>,
    phi: &SBFunction<Cyclo>,
    depth: u32,
) -> Result<ZetaResult> {
    Ok(ZetaEngine::new(p, f.clone(), chi.cloned())?.zeta_of(phi, depth))
}

/// Enclosure of a complex value: `|true − value| ≤ radius`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bracket {
    /// sum over decided balls
    pub value: Complex64,
    /// mass bound of the undecided balls
    pub radius: f64,
}

impl Bracket {
    pub fn contains(&self, z: Complex64, slack: f64) -> bool {
        (z - self.value).norm() <= self.radius + slack
    }

    pub fn width(&self) -> f64 {
        2.0 * self.radius
    }
}

/// Direct numeric integration of `∫Φ χ(ac f)|f|^{s₀}` for `Re(s₀) > 0`.
///
/// Uses only ball subdivision, the unit rule and the smooth-zero push-forward
/// evaluated as a numeric geometric series; no rational-function arithmetic
/// and no scaling rule.
pub fn truncated_zeta<C: Coeff>(
    p: u64,
    f: &Polynomial,
    chi: Option<&MultCharacter>,
    phi: &SBFunction<C>,
    s0: Complex64,
    depth: u32,
) -> Result<Bracket> {
    if s0.re <= 0.0 {
        return Err(Error::OutsideConvergence);
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let chi = chi.filter(|c| !c.is_trivial());
    let partials: Vec<Polynomial> = (0..f.nvars()).map(|i| f.partial(i)).collect();
    let mut acc = Bracket {
        value: Complex64::new(0.0, 0.0),
        radius: 0.0,
    };
    for (b, c) in phi.terms() {
        let mut local = Bracket {
            value: Complex64::new(0.0, 0.0),
            radius: 0.0,
        };
        oracle_ball(p, f, &partials, chi, b, s0, depth, &mut local);
        let cv = c.to_complex();
        acc.value += cv * local.value;
        acc.radius += cv.norm() * local.radius;
    }
    Ok(acc)
}

#[allow(clippy::too_many_arguments)]
fn oracle_ball(
    p: u64,
    f: &Polynomial,
    partials: &[Polynomial],
    chi: Option<&MultCharacter>,
    ball: &Ball,
    s0: Complex64,
    depth: u32,
    out: &mut Bracket,
) {
    let pf = p as f64;
    let vol = pf.powf(-(ball.level() * ball.dim() as i64) as f64);
    let pow = |k: f64| (-(s0 * pf.ln()) * k).exp();
    if let Some(cert) = certify_unit_ball(p, f, ball, chi.is_some()) {
        let mut v = Complex64::new(vol, 0.0) * pow(cert.v as f64);
        if let Some(ch) = chi {
            let fa = f.eval(ball.center());
            let ac = angular_component(&fa, p, 1).expect("nonzero value");
            v *= ch.value(ac).to_complex();
        }
        out.value += v;
        return;
    }
    if let Some(cert) = certify_smooth_zero(p, f, partials, ball) {
        if chi.is_none() {
            // Σ_{k≥0} (1 − p^{-1}) p^{-k} p^{-k s₀}
            let ratio = pow(1.0) / pf;
            let series = Complex64::new(1.0 - 1.0 / pf, 0.0) / (Complex64::new(1.0, 0.0) - ratio);
            out.value += Complex64::new(vol, 0.0) * pow((ball.level() + cert.d) as f64) * series;
        }
        return;
    }
    if depth == 0 {
        let (v0, tail) = tail_valuation(p, f, ball);
        let sv = match (v0, tail) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => i64::MAX,
        };
        out.radius += vol * pf.powf(-(sv as f64) * s0.re);
        return;
    }
    for child in ball.subdivide(p) {
        oracle_ball(p, f, partials, chi, &child, s0, depth - 1, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{qf, Q};

    fn x_pow(m: u32) -> Polynomial {
        Polynomial::from_terms(1, [(vec![m], q(1))])
    }

    fn ball(p: u64, c: &[Q], e: i64) -> Ball {
        Ball::new(p, c.to_vec(), e).unwrap()
    }

    fn geometric(p: u64, b: u32) -> RatFunc {
        RatFunc::constant(p, Cyclo::from_q(q(1) - ppow(p, -1))).divide_by(DenFactor::new(1, b))
    }

    /// Truncated shell sum `Σ_{k<K} (1 − p^{-1}) p^{-k} t^{mk}` as a polynomial in t.
    fn shell_sum_oracle(p: u64, m: i64, terms: i64, t: &Q) -> Q {
        (0..terms)
            .map(|k| (q(1) - ppow(p, -1)) * ppow(p, -k) * num_traits::pow(t.clone(), (m * k) as usize))
            .sum()
    }

    #[test]
    fn unit_certificates() {
        let f = x_pow(1);
        let c = certify_unit_ball(3, &f, &ball(3, &[q(1)], 1), true).unwrap();
        assert_eq!(c, UnitCert { v: 0, angular: true });
        assert!(certify_unit_ball(3, &f, &Ball::origin(1, 0), false).is_none());
        let g = Polynomial::from_terms(1, [(vec![2], q(1)), (vec![0], q(-2))]);
        assert!(certify_unit_ball(7, &g, &ball(7, &[q(3)], 1), false).is_none());
    }

    #[test]
    fn smooth_zero_certificates() {
        let f = x_pow(1);
        let partials = vec![f.partial(0)];
        for p in [2, 3, 5] {
            let b = Ball::origin(1, 2);
            assert_eq!(certify_smooth_zero(p, &f, &partials, &b), Some(SmoothCert { i: 0, d: 0 }));
            let z = zeta_ball(p, &f, None, &b, 5).unwrap();
            // the shell sum from k = 2
            let expect = geometric(p, 1).scale_monomial(&Cyclo::from_q(ppow(p, -2)), 2);
            assert!(z.value.equals(&expect));
        }
        let g = Polynomial::from_terms(1, [(vec![2], q(1)), (vec![0], q(-2))]);
        let gp = vec![g.partial(0)];
        let b = ball(7, &[q(3)], 1);
        assert_eq!(certify_smooth_zero(7, &g, &gp, &b), Some(SmoothCert { i: 0, d: 0 }));
        let z = zeta_ball(7, &g, None, &b, 3).unwrap();
        let expect = geometric(7, 1).scale_monomial(&Cyclo::from_q(qf(1, 7)), 1);
        assert!(z.value.equals(&expect));
        // truncated shell-sum oracle around the Hensel root: numeric bracket
        let br = truncated_zeta(7, &g, None, &SBFunction::<Cyclo>::indicator(7, b), Complex64::new(1.0, 0.0), 6).unwrap();
        let closed = z.value.evaluate(Complex64::new(1.0, 0.0), 0.0).unwrap();
        assert!(br.contains(closed, 1e-12));

        let h = Polynomial::from_terms(2, [(vec![2, 0], q(1)), (vec![0, 2], q(1))]);
        let hp = vec![h.partial(0), h.partial(1)];
        assert!(certify_smooth_zero(3, &h, &hp, &Ball::origin(2, 0)).is_none());
    }

    #[test]
    fn univariate_monomials() {
        for p in [2u64, 3, 5, 7] {
            for m in 1..=4u32 {
                let z = zeta_ball(p, &x_pow(m), None, &Ball::origin(1, 0), 10).unwrap();
                assert!(z.certified);
                assert!(z.value.equals(&geometric(p, m)), "p={p} m={m}: {}", z.value);
                // shell-sum oracle at t = 1/p: truncated sum converges to the value
                let t = ppow(p, -1);
                let exact = z.value.eval_t(&t).unwrap().as_rational().unwrap();
                let approx = shell_sum_oracle(p, m as i64, 60, &t);
                let diff = crate::rational::to_f64(&(exact - approx)).abs();
                assert!(diff < 1e-20, "p={p} m={m}");
            }
        }
    }

    #[test]
    fn binary_forms() {
        let h = Polynomial::from_terms(2, [(vec![2, 0], q(1)), (vec![0, 2], q(1))]);
        let z = zeta_ball(3, &h, None, &Ball::origin(2, 0), 10).unwrap();
        assert!(z.certified);
        let expect = RatFunc::constant(3, Cyclo::from_q(qf(8, 9))).divide_by(DenFactor::new(2, 2));
        assert!(z.value.equals(&expect));

        for p in [2u64, 3, 5] {
            let xy = Polynomial::from_terms(2, [(vec![1, 1], q(1))]);
            let z = zeta_ball(p, &xy, None, &Ball::origin(2, 0), 10).unwrap();
            assert!(z.certified);
            let g = geometric(p, 1);
            assert!(z.value.equals(&g.mul(&g)));
        }
    }

    #[test]
    fn twisted_vanishing() {
        for p in [3u64, 5, 7] {
            let chi = MultCharacter::quadratic(p).unwrap();
            let z = zeta_ball(p, &x_pow(1), Some(&chi), &Ball::origin(1, 0), 10).unwrap();
            assert!(z.certified);
            assert!(z.value.is_zero());
            // oracle: unit shell character sum is zero on every shell
            let shell: Cyclo = (1..p).fold(Cyclo::zero(), |s, u| &s + &chi.value(u));
            assert!(shell.is_zero());
        }
        // x² is a square: χ(ac x²) = 1, the twist disappears
        let chi = MultCharacter::quadratic(5).unwrap();
        let z = zeta_ball(5, &x_pow(2), Some(&chi), &Ball::origin(1, 0), 10).unwrap();
        assert!(z.value.equals(&geometric(5, 2)));
    }

    #[test]
    fn test_function_linearity() {
        let p = 3;
        let f = x_pow(1);
        let one = SBFunction::<Cyclo>::indicator(p, Ball::origin(1, 0));
        assert!(zeta_of(p, &f, None, &one, 5).unwrap().value.equals(&geometric(p, 1)));
        let unit = SBFunction::<Cyclo>::indicator(p, ball(p, &[q(1)], 1));
        let z = zeta_of(p, &f, None, &unit, 5).unwrap();
        assert!(z.value.equals(&RatFunc::constant(p, Cyclo::from_q(qf(1, 3)))));
        let shell = one.add(&SBFunction::indicator(p, Ball::origin(1, 1)).scale(&Cyclo::from_q(q(-1))));
        let z = zeta_of(p, &f, None, &shell, 5).unwrap();
        assert!(z.value.equals(&RatFunc::constant(p, Cyclo::from_q(qf(2, 3)))));
    }

    #[test]
    fn depth_exhaustion_reports_undecided() {
        // x^2 - y^3 has a cusp at the origin and no homogeneity
        let f = Polynomial::from_terms(2, [(vec![2, 0], q(1)), (vec![0, 3], q(-1))]);
        let z = zeta_ball(2, &f, None, &Ball::origin(2, 0), 3).unwrap();
        assert!(!z.certified);
        assert!(!z.undecided.is_empty());
        assert!(z.undecided.iter().any(|u| u.ball.is_centered_at_zero()));
        assert!(zeta_ball(2, &Polynomial::zero(1), None, &Ball::origin(1, 0), 3).is_err());
    }

    #[test]
    fn oracle_examples() {
        let br = truncated_zeta(
            2,
            &x_pow(1),
            None,
            &SBFunction::<Cyclo>::indicator(2, Ball::origin(1, 0)),
            Complex64::new(1.0, 0.0),
            20,
        )
        .unwrap();
        assert!(br.contains(Complex64::new(2.0 / 3.0, 0.0), 1e-12));
        assert!(br.width() < 1e-5);

        let xy = Polynomial::from_terms(2, [(vec![1, 1], q(1))]);
        let br = truncated_zeta(3, &xy, None, &SBFunction::<Cyclo>::indicator(3, Ball::origin(2, 0)), Complex64::new(2.0, 0.0), 12).unwrap();
        let closed = (9.0f64 / 13.0).powi(2);
        assert!(br.contains(Complex64::new(closed, 0.0), 1e-12));

        let br = truncated_zeta(3, &x_pow(1), None, &SBFunction::<Cyclo>::indicator(3, ball(3, &[q(1)], 1)), Complex64::new(0.5, 0.0), 1).unwrap();
        assert_eq!(br.radius, 0.0);
        assert!((br.value.re - 1.0 / 3.0).abs() < 1e-15);

        assert_eq!(
            truncated_zeta(3, &x_pow(1), None, &SBFunction::<Cyclo>::indicator(3, Ball::origin(1, 0)), Complex64::new(0.0, 1.0), 3),
            Err(Error::OutsideConvergence)
        );
    }

    #[test]
    fn cache_hits_are_identical() {
        let f = Polynomial::from_terms(2, [(vec![1, 1], q(1))]);
        let eng = ZetaEngine::new(3, f, None).unwrap();
        let a = eng.zeta_ball(&Ball::origin(2, 0), 8);
        assert!(eng.cache_len() > 0);
        let b = eng.zeta_ball(&Ball::origin(2, 0), 8);
        assert_eq!(a.value.to_json(), b.value.to_json());
        assert_eq!(factor_violations(), 0);
    }
}
