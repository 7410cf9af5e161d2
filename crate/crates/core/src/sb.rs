//! Schwartz-Bruhat functions as weighted sums of disjoint balls, with the
//! Fourier transform realized per ball (any backend) and as a grid DFT.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::coeff::Coeff;
use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::padic::Ball;
use crate::rational::{
    fmt_f64, format_rational, frac_p, parse_rational, ppow, q, qf, reduce_mod_ppow, to_f64,
    valuation, Q,
};

/// `Ψ(x) = exp(2πi·frac_p(x))` as `(m, k)` with value `ζ_m^k`, `m` a power of p.
pub fn psi_exponent(x: &Q, p: u64) -> Result<(u64, i64)> {
    let fr = frac_p(x, p)?;
    if fr.is_zero() {
        return Ok((1, 0));
    }
    let m = fr.denom().to_u64().expect("root order fits u64");
    let k = fr.numer().to_i64().expect("fits");
    Ok((m, k))
}

pub fn psi<C: Coeff>(x: &Q, p: u64) -> Result<C> {
    let (m, k) = psi_exponent(x, p)?;
    Ok(C::root(m, k))
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Support exponent M (support ⊆ p^{-M}Z_p^n) and constancy exponent N.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resolution {
    pub m: i64,
    pub n: i64,
}

impl Resolution {
    pub fn new(m: i64, n: i64) -> Result<Self> {
        if m + n < 0 {
            return Err(Error::BadResolution(format!("M + N = {} < 0", m + n)));
        }
        Ok(Resolution { m, n })
    }

    /// Cells per axis.
    pub fn side(&self, p: u64) -> usize {
        (p as usize).pow((self.m + self.n) as u32)
    }

    pub fn dual(&self) -> Resolution {
        Resolution {
            m: self.n,
            n: self.m,
        }
    }

    /// Componentwise maximum.
    pub fn join(&self, o: &Resolution) -> Resolution {
        Resolution {
            m: self.m.max(o.m),
            n: self.n.max(o.n),
        }
    }
}

/// A finite sum of ball indicators with pairwise disjoint balls, stored in
/// the coarsest canonical decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct SBFunction<C: Coeff> {
    p: u64,
    n: usize,
    terms: BTreeMap<Ball, C>,
}

impl<C: Coeff> SBFunction<C> {
    pub fn zero(p: u64, n: usize) -> Self {
        SBFunction {
            p,
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn indicator(p: u64, ball: Ball) -> Self {
        let n = ball.dim();
        Self::normalize(p, n, vec![(ball, C::from_q(&q(1)))])
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Ball, C> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Split overlaps to a common refinement, sum coefficients, drop zeros
    /// and merge complete sibling families with equal coefficients.
    pub fn normalize(p: u64, n: usize, raw: Vec<(Ball, C)>) -> Self {
        let mut merged: BTreeMap<Ball, C> = BTreeMap::new();
        for (b, c) in raw {
            assert_eq!(b.dim(), n);
            match merged.get_mut(&b) {
                Some(acc) => *acc = acc.add(&c),
                None => {
                    merged.insert(b, c);
                }
            }
        }
        let levels: BTreeSet<i64> = merged.keys().map(|b| b.level()).collect();
        let is_root = |b: &Ball| {
            !levels
                .range(..b.level())
                .any(|&l| merged.contains_key(&b.ancestor(p, l)))
        };
        let roots: Vec<Ball> = merged.keys().filter(|b| is_root(b)).cloned().collect();
        let mut out: BTreeMap<Ball, C> = BTreeMap::new();
        for r in roots {
            let desc: Vec<&Ball> = merged
                .keys()
                .filter(|b| b.level() > r.level() && r.contains(p, b))
                .collect();
            let acc = merged[&r].clone();
            refine_into(p, &merged, r, acc, &desc, &mut out);
        }
        out.retain(|_, c| !c.is_zero());
        let mut f = SBFunction { p, n, terms: out };
        f.coarsen();
        f
    }

    fn coarsen(&mut self) {
        let fam = (self.p as usize).pow(self.n as u32);
        loop {
            let mut groups: BTreeMap<Ball, Vec<Ball>> = BTreeMap::new();
            for b in self.terms.keys() {
                groups
                    .entry(b.ancestor(self.p, b.level() - 1))
                    .or_default()
                    .push(b.clone());
            }
            let mut changed = false;
            for (parent, kids) in groups {
                if kids.len() != fam {
                    continue;
                }
                let c0 = self.terms[&kids[0]].clone();
                if kids.iter().all(|k| self.terms[k] == c0) {
                    for k in &kids {
                        self.terms.remove(k);
                    }
                    self.terms.insert(parent, c0);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }

    pub fn from_terms(p: u64, n: usize, raw: Vec<(Ball, C)>) -> Self {
        Self::normalize(p, n, raw)
    }

    pub fn integrate(&self) -> C {
        self.terms
            .iter()
            .fold(C::zero(), |acc, (b, c)| acc.add(&c.scale(&b.volume(self.p))))
    }

    pub fn eval(&self, x: &[Q]) -> C {
        self.terms
            .iter()
            .find(|(b, _)| b.contains_point(self.p, x))
            .map(|(_, c)| c.clone())
            .unwrap_or_else(C::zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let raw = self
            .terms
            .iter()
            .chain(o.terms.iter())
            .map(|(b, c)| (b.clone(), c.clone()))
            .collect();
        Self::normalize(self.p, self.n, raw)
    }

    pub fn scale(&self, c: &C) -> Self {
        let raw = self
            .terms
            .iter()
            .map(|(b, x)| (b.clone(), x.mul(c)))
            .collect();
        Self::normalize(self.p, self.n, raw)
    }

    /// `x ↦ Φ(x − a)`.
    pub fn translate(&self, a: &[Q]) -> Result<Self> {
        let raw = self
            .terms
            .iter()
            .map(|(b, c)| Ok((b.translate(self.p, a)?, c.clone())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::normalize(self.p, self.n, raw))
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> SBFunction<D> {
        SBFunction::normalize(
            self.p,
            self.n,
            self.terms.iter().map(|(b, c)| (b.clone(), f(c))).collect(),
        )
    }

    pub fn to_complex(&self) -> SBFunction<Complex64> {
        SBFunction {
            p: self.p,
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(b, c)| (b.clone(), c.to_complex()))
                .collect(),
        }
    }

    /// `∫|Φ|²` in the coefficient backend.
    pub fn l2_norm_sq(&self) -> C {
        self.terms.iter().fold(C::zero(), |acc, (b, c)| {
            acc.add(&c.mul(&c.conj()).scale(&b.volume(self.p)))
        })
    }

    /// Smallest resolution at which this function is a grid function.
    pub fn resolution(&self) -> Resolution {
        let mut n_exp = i64::MIN;
        let mut m_exp = i64::MIN;
        for b in self.terms.keys() {
            n_exp = n_exp.max(b.level());
            m_exp = m_exp.max(-b.level());
            for c in b.center() {
                if let Some(v) = valuation(c, self.p) {
                    m_exp = m_exp.max(-v);
                }
            }
        }
        if self.terms.is_empty() {
            return Resolution { m: 0, n: 0 };
        }
        Resolution {
            m: m_exp.max(-n_exp),
            n: n_exp,
        }
    }

    fn transform(&self, sign: i64) -> Self {
        let p = self.p;
        let n = self.n;
        // (output ball, input term, ζ_m^k)
        let mut parts: Vec<(Ball, usize, u64, i64)> = Vec::new();
        let mut weights = Vec::new();
        for (idx, (b, c)) in self.terms.iter().enumerate() {
            let e = b.level();
            let ma = b
                .center()
                .iter()
                .filter_map(|x| valuation(x, p))
                .map(|v| -v)
                .max()
                .unwrap_or(i64::MIN);
            let out_level = ma.max(-e);
            weights.push(c.scale(&ppow(p, -e * n as i64)));
            let side = (p as usize).pow((out_level + e) as u32);
            let step = ppow(p, -e);
            let mut k = vec![0usize; n];
            for _ in 0..side.pow(n as u32) {
                let xi: Vec<Q> = k
                    .iter()
                    .map(|&ki| &step * Q::from_integer(ki.into()))
                    .collect();
                let phase = dot(b.center(), &xi) * q(sign);
                let (m, kk) = psi_exponent(&phase, p).expect("Z[1/p] phase");
                parts.push((Ball::new(p, xi, out_level).expect("canonical"), idx, m, kk));
                for d in (0..n).rev() {
                    k[d] += 1;
                    if k[d] < side {
                        break;
                    }
                    k[d] = 0;
                }
            }
        }
        let l = parts
            .iter()
            .map(|t| t.2)
            .chain(weights.iter().map(|w| w.conductor()))
            .fold(1u64, |a, b| a.lcm(&b));
        let coords: Option<Vec<Vec<Q>>> = weights.iter().map(|w| w.power_coords(l)).collect();
        let raw = match coords {
            // exact backend: rotate-and-add in unreduced coordinates, reduce once per ball
            Some(coords) => {
                let mut acc: BTreeMap<Ball, Vec<Q>> = BTreeMap::new();
                for (ball, idx, m, kk) in parts {
                    let shift = kk.rem_euclid(m as i64) as usize * (l / m) as usize;
                    let slot = acc.entry(ball).or_insert_with(|| vec![Q::zero(); l as usize]);
                    for (i, c) in coords[idx].iter().enumerate() {
                        if !c.is_zero() {
                            slot[(i + shift) % l as usize] += c;
                        }
                    }
                }
                acc.into_iter()
                    .map(|(b, v)| (b, C::from_power_coords(l, v).expect("exact backend")))
                    .collect()
            }
            None => parts
                .into_iter()
                .map(|(ball, idx, m, kk)| (ball, weights[idx].mul_root(m, kk)))
                .collect(),
        };
        Self::normalize(p, n, raw)
    }

    /// `FΦ(ξ) = ∫ Ψ(−[x,ξ]) Φ(x) dx`, summed ball by ball in closed form.
    pub fn fourier(&self) -> Self {
        self.transform(-1)
    }

    /// Inverse transform with kernel `Ψ(+[x,ξ])`.
    pub fn inverse_fourier(&self) -> Self {
        self.transform(1)
    }

    /// Dense samples on `(Z/p^{M+N})^n`, index k ↔ point `p^{-M}k`.
    pub fn to_grid(&self, res: Resolution) -> Result<GridFunction> {
        let p = self.p;
        let side = res.side(p);
        let mut values = vec![Complex64::new(0.0, 0.0); side.pow(self.n as u32)];
        let scale_m = ppow(p, res.m);
        for (b, c) in &self.terms {
            let fits = b.level() <= res.n
                && b.level() >= -res.m
                && b
                    .center()
                    .iter()
                    .all(|x| valuation(x, p).is_none_or(|v| v >= -res.m));
            if !fits {
                return Err(Error::ResolutionTooCoarse(b.clone()));
            }
            let base: Vec<usize> = b
                .center()
                .iter()
                .map(|x| (x * &scale_m).to_integer().to_usize().expect("index"))
                .collect();
            let stride = (p as usize).pow((res.m + b.level()) as u32);
            let count = (p as usize).pow((res.n - b.level()) as u32);
            let cv = c.to_complex();
            let mut j = vec![0usize; self.n];
            for _ in 0..count.pow(self.n as u32) {
                let idx = base
                    .iter()
                    .zip(&j)
                    .fold(0usize, |acc, (&b0, &ji)| acc * side + (b0 + ji * stride) % side);
                values[idx] = cv;
                for d in (0..self.n).rev() {
                    j[d] += 1;
                    if j[d] < count {
                        break;
                    }
                    j[d] = 0;
                }
            }
        }
        Ok(GridFunction {
            p,
            n: self.n,
            res,
            values,
        })
    }
}

fn refine_into<C: Coeff>(
    p: u64,
    merged: &BTreeMap<Ball, C>,
    ball: Ball,
    acc: C,
    desc: &[&Ball],
    out: &mut BTreeMap<Ball, C>,
) {
    if desc.is_empty() {
        out.insert(ball, acc);
        return;
    }
    for child in ball.subdivide(p) {
        let inner: Vec<&Ball> = desc
            .iter()
            .copied()
            .filter(|b| child.contains(p, b))
            .collect();
        let mut a = acc.clone();
        let mut rest = inner.clone();
        if let Some(pos) = inner.iter().position(|b| **b == child) {
            a = a.add(&merged[&child]);
            rest.remove(pos);
        }
        refine_into(p, merged, child, a, &rest, out);
    }
}

impl SBFunction<Complex64> {
    /// Forward transform through the grid DFT.
    pub fn fourier_grid(&self) -> Result<SBFunction<Complex64>> {
        let g = self.to_grid(self.resolution())?;
        Ok(g.fourier().to_sb())
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Values on the grid `p^{-M}(Z/p^{M+N})^n`, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    pub p: u64,
    pub n: usize,
    pub res: Resolution,
    pub values: Vec<Complex64>,
}

impl GridFunction {
    pub fn side(&self) -> usize {
        self.res.side(self.p)
    }

    /// Multi-index of a flat position (first coordinate most significant).
    pub fn index(&self, flat: usize) -> Vec<usize> {
        let side = self.side();
        let mut k = vec![0; self.n];
        let mut r = flat;
        for d in (0..self.n).rev() {
            k[d] = r % side;
            r /= side;
        }
        k
    }

    pub fn point(&self, flat: usize) -> Vec<Q> {
        let s = ppow(self.p, -self.res.m);
        self.index(flat)
            .into_iter()
            .map(|k| &s * Q::from_integer(k.into()))
            .collect()
    }

    pub fn flat_of_point(&self, x: &[Q]) -> Option<usize> {
        let side = self.side();
        let s = ppow(self.p, self.res.m);
        let mut flat = 0usize;
        for xi in x {
            let r = reduce_mod_ppow(xi, self.p, self.res.n).ok()?;
            let k = (r * &s).to_integer().to_usize()?;
            if !(valuation(xi, self.p).is_none_or(|v| v >= -self.res.m)) {
                return None;
            }
            flat = flat * side + k % side;
        }
        Some(flat)
    }

    pub fn to_sb(&self) -> SBFunction<Complex64> {
        let raw = (0..self.values.len())
            .filter(|&i| self.values[i] != Complex64::new(0.0, 0.0))
            .map(|i| {
                (
                    Ball::new(self.p, self.point(i), self.res.n).expect("canonical"),
                    self.values[i],
                )
            })
            .collect();
        SBFunction::normalize(self.p, self.n, raw)
    }

    fn dft(&self, inverse: bool) -> GridFunction {
        let side = self.side();
        let mut data = self.values.clone();
        let mut planner = FftPlanner::<f64>::new();
        let fft = if inverse {
            planner.plan_fft_inverse(side)
        } else {
            planner.plan_fft_forward(side)
        };
        let total = data.len();
        for axis in 0..self.n {
            let stride = side.pow((self.n - 1 - axis) as u32);
            let mut buf = vec![Complex64::new(0.0, 0.0); side];
            for start in 0..total {
                // first element of each line along `axis`
                if !(start / stride).is_multiple_of(side) {
                    continue;
                }
                for (t, slot) in buf.iter_mut().enumerate() {
                    *slot = data[start + t * stride];
                }
                fft.process(&mut buf);
                for (t, v) in buf.iter().enumerate() {
                    data[start + t * stride] = *v;
                }
            }
        }
        let w = to_f64(&ppow(self.p, -self.res.n * self.n as i64));
        GridFunction {
            p: self.p,
            n: self.n,
            res: self.res.dual(),
            values: data.into_iter().map(|v| v * w).collect(),
        }
    }

    /// DFT with kernel `Ψ(−xξ)` and cell weight `p^{-Nn}`; resolution (M,N) ↦ (N,M).
    pub fn fourier(&self) -> GridFunction {
        self.dft(false)
    }

    pub fn inverse_fourier(&self) -> GridFunction {
        self.dft(true)
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct CoeffJson {
    pub re: String,
    pub im: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct TermJson {
    pub level: i64,
    pub center: Vec<String>,
    pub coeff: CoeffJson,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct SBJson {
    pub n: usize,
    pub p: u64,
    pub terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct GridJson {
    pub p: u64,
    pub n: usize,
    #[serde(rename = "M")]
    pub m: i64,
    #[serde(rename = "N")]
    pub big_n: i64,
    pub re: Vec<String>,
    pub im: Vec<String>,
}

impl GridFunction {
    pub fn to_json(&self) -> GridJson {
        GridJson {
            p: self.p,
            n: self.n,
            m: self.res.m,
            big_n: self.res.n,
            re: self.values.iter().map(|v| fmt_f64(v.re)).collect(),
            im: self.values.iter().map(|v| fmt_f64(v.im)).collect(),
        }
    }

    /// Rows `x1,..,xn,re,im`.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let hdr: Vec<String> = (1..=self.n).map(|i| format!("x{i}")).collect();
        s.push_str(&format!("{},re,im\n", hdr.join(",")));
        for (i, v) in self.values.iter().enumerate() {
            let pt: Vec<String> = self.point(i).iter().map(format_rational).collect();
            s.push_str(&format!("{},{},{}\n", pt.join(","), fmt_f64(v.re), fmt_f64(v.im)));
        }
        s
    }
}

fn parse_num(s: &str) -> Result<f64> {
    if let Ok(r) = parse_rational(s) {
        return Ok(to_f64(&r));
    }
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::BadRational(s.to_string()))
}

impl<C: Coeff> SBFunction<C> {
    pub fn to_json(&self) -> SBJson {
        SBJson {
            n: self.n,
            p: self.p,
            terms: self
                .terms
                .iter()
                .map(|(b, c)| {
                    let z = c.to_complex();
                    TermJson {
                        level: b.level(),
                        center: b.center().iter().map(format_rational).collect(),
                        coeff: CoeffJson {
                            re: fmt_f64(z.re),
                            im: fmt_f64(z.im),
                        },
                    }
                })
                .collect(),
        }
    }
}

impl SBFunction<Complex64> {
    pub fn from_json(j: &SBJson) -> Result<Self> {
        let raw = j
            .terms
            .iter()
            .map(|t| {
                let c: Vec<Q> = t.center.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?;
                if c.len() != j.n {
                    return Err(Error::Dimension {
                        expected: j.n,
                        got: c.len(),
                    });
                }
                let z = Complex64::new(parse_num(&t.coeff.re)?, parse_num(&t.coeff.im)?);
                Ok((Ball::new(j.p, c, t.level)?, z))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::normalize(j.p, j.n, raw))
    }
}

impl SBFunction<Cyclo> {
    /// Exact reading: both parts must be rational literals; `im` enters as `im·ζ_4`.
    pub fn from_json_exact(j: &SBJson) -> Result<Self> {
        let raw = j
            .terms
            .iter()
            .map(|t| {
                let c: Vec<Q> = t.center.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?;
                if c.len() != j.n {
                    return Err(Error::Dimension {
                        expected: j.n,
                        got: c.len(),
                    });
                }
                let re = parse_rational(&t.coeff.re)?;
                let im = parse_rational(&t.coeff.im)?;
                let z = &Cyclo::from_q(re) + &Cyclo::root(4, 1).scale(&im);
                Ok((Ball::new(j.p, c, t.level)?, z))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::normalize(j.p, j.n, raw))
    }

    /// JSON with exact rational strings for real-rational coefficients.
    pub fn to_json_exact(&self) -> SBJson {
        let mut j = self.to_json();
        for (t, c) in j.terms.iter_mut().zip(self.terms.values()) {
            if let Some(r) = c.as_rational() {
                t.coeff.re = format_rational(&r);
                t.coeff.im = "0".into();
            }
        }
        j
    }
}

/// Seeded random test function: up to `max_balls` weighted balls inside
/// `p^{-support}Z_p^n` with levels in `[-support, max_level]` and small
/// rational weights.
pub fn random_sb<R: Rng>(
    rng: &mut R,
    p: u64,
    n: usize,
    max_balls: usize,
    support: i64,
    max_level: i64,
) -> SBFunction<Cyclo> {
    let count = rng.gen_range(1..=max_balls);
    let raw = (0..count)
        .map(|_| {
            let level = rng.gen_range(-support..=max_level);
            let span = (p as i64).pow((level + support) as u32);
            let center = (0..n)
                .map(|_| qf(rng.gen_range(0..span.max(1)), 1) * ppow(p, -support))
                .collect();
            let c = qf(rng.gen_range(-6..=6), rng.gen_range(1..=4));
            (Ball::new(p, center, level).expect("Z[1/p] center"), Cyclo::from_q(c))
        })
        .collect();
    SBFunction::normalize(p, n, raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;

    fn ball(p: u64, c: &[Q], e: i64) -> Ball {
        Ball::new(p, c.to_vec(), e).unwrap()
    }

    #[test]
    fn psi_values() {
        assert_eq!(psi::<Cyclo>(&q(2), 3).unwrap(), Cyclo::one());
        assert_eq!(psi::<Cyclo>(&qf(1, 3), 3).unwrap(), Cyclo::root(3, 1));
        assert_eq!(psi::<Cyclo>(&qf(5, 9), 3).unwrap(), Cyclo::root(9, 5));
        let z: Complex64 = psi(&qf(5, 9), 3).unwrap();
        assert!((z - Complex64::from_polar(1.0, 10.0 * std::f64::consts::PI / 9.0)).norm() < 1e-15);
    }

    #[test]
    fn normalize_examples() {
        let f = SBFunction::<Cyclo>::normalize(
            2,
            1,
            vec![(Ball::origin(1, 0), Cyclo::one()), (Ball::origin(1, 1), Cyclo::one())],
        );
        let expect: BTreeMap<Ball, Cyclo> = [
            (Ball::origin(1, 1), Cyclo::from_q(q(2))),
            (ball(2, &[q(1)], 1), Cyclo::one()),
        ]
        .into();
        assert_eq!(f.terms(), &expect);

        let g = SBFunction::<Cyclo>::normalize(
            3,
            1,
            vec![
                (Ball::origin(1, 0), Cyclo::one()),
                (Ball::origin(1, 0), Cyclo::from_q(q(-1))),
            ],
        );
        assert!(g.is_zero());

        let h = SBFunction::<Cyclo>::normalize(3, 1, vec![(ball(3, &[q(1)], 1), Cyclo::from_q(q(5)))]);
        assert_eq!(h.terms().len(), 1);
        assert_eq!(h.terms()[&ball(3, &[q(1)], 1)], Cyclo::from_q(q(5)));

        // a complete sibling family coarsens to its parent
        let k = SBFunction::<Cyclo>::normalize(
            2,
            1,
            vec![(Ball::origin(1, 1), Cyclo::one()), (ball(2, &[q(1)], 1), Cyclo::one())],
        );
        assert_eq!(k, SBFunction::indicator(2, Ball::origin(1, 0)));
    }

    #[test]
    fn integrate_examples() {
        for p in [2, 3, 5] {
            let f = SBFunction::<Cyclo>::indicator(p, Ball::origin(2, 0));
            assert_eq!(f.integrate(), Cyclo::one());
        }
        let c = Cyclo::from_q(qf(7, 2));
        let f = SBFunction::normalize(3, 1, vec![(ball(3, &[q(4)], 2), c.clone())]);
        assert_eq!(f.integrate(), c.scale(&qf(1, 9)));
        let g = SBFunction::normalize(
            3,
            1,
            vec![
                (Ball::origin(1, 1), Cyclo::one()),
                (Ball::origin(1, 0), Cyclo::from_q(qf(-1, 3))),
            ],
        );
        assert!(g.integrate().is_zero());
    }

    #[test]
    fn fourier_examples() {
        let p = 3;
        let one = SBFunction::<Cyclo>::indicator(p, Ball::origin(1, 0));
        assert_eq!(one.fourier(), one);

        let f = SBFunction::<Cyclo>::indicator(p, Ball::origin(1, 1));
        let expect = SBFunction::indicator(p, Ball::origin(1, -1)).scale(&Cyclo::from_q(qf(1, 3)));
        assert_eq!(f.fourier(), expect);

        // F(1_{1+3Z_3}) on the three level-0 cosets of 3^{-1}Z_3:
        // direct 3-point DFT oracle, value 3^{-1}·exp(-2πi k/3) at ξ = k/3
        let g = SBFunction::<Cyclo>::indicator(p, ball(p, &[q(1)], 1)).fourier();
        for k in 0..3i64 {
            let xi = qf(k, 3);
            let oracle = Complex64::from_polar(1.0 / 3.0, -2.0 * std::f64::consts::PI * k as f64 / 3.0);
            assert!((g.eval(&[xi]).to_complex() - oracle).norm() < 1e-15);
        }
        assert_eq!(g.terms().len(), 3);
    }

    #[test]
    fn grid_examples() {
        let f = SBFunction::<Complex64>::indicator(2, Ball::origin(1, 0));
        let g = f.to_grid(Resolution::new(0, 1).unwrap()).unwrap();
        assert_eq!(g.values, vec![Complex64::new(1.0, 0.0); 2]);
        assert_eq!(g.to_sb(), f);
        let dft = f.to_grid(Resolution::new(0, 0).unwrap()).unwrap().fourier();
        assert!((dft.values[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);

        let coarse = SBFunction::<Complex64>::indicator(3, Ball::origin(1, 2));
        assert!(matches!(
            coarse.to_grid(Resolution::new(0, 1).unwrap()),
            Err(Error::ResolutionTooCoarse(_))
        ));
    }

    #[test]
    fn grid_point_lookup() {
        let g = SBFunction::<Complex64>::indicator(3, Ball::origin(2, 0))
            .to_grid(Resolution::new(1, 1).unwrap())
            .unwrap();
        for i in 0..g.values.len() {
            assert_eq!(g.flat_of_point(&g.point(i)), Some(i));
        }
        assert_eq!(g.flat_of_point(&[qf(1, 9), q(0)]), None);
    }

    #[test]
    fn json_round_trip() {
        let f = SBFunction::<Cyclo>::normalize(
            3,
            1,
            vec![(ball(3, &[qf(1, 3)], 1), Cyclo::from_q(qf(2, 5)))],
        );
        let j = f.to_json_exact();
        assert_eq!(j.terms[0].coeff.re, "2/5");
        assert_eq!(SBFunction::from_json_exact(&j).unwrap(), f);
        let text = serde_json::to_string(&SBFunction::<Complex64>::indicator(3, Ball::origin(1, 0)).to_json()).unwrap();
        assert_eq!(
            text,
            r#"{"n":1,"p":3,"terms":[{"level":0,"center":["0"],"coeff":{"re":"1.0000000000000000e0","im":"0"}}]}"#
        );
    }
}
