//! Rational functions of `t = p^{-s}` with factored denominators.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::laurent::laurent_expand;
use crate::rational::{format_rational, parse_rational, ppow, to_f64, Q};

/// The factor `1 − p^{-a} t^b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DenFactor {
    pub a: i64,
    pub b: u32,
}

impl DenFactor {
    pub fn new(a: i64, b: u32) -> Self {
        assert!(b >= 1, "denominator factor needs b ≥ 1");
        DenFactor { a, b }
    }

    /// Real part `−a/b` of the zeros in `s`.
    pub fn pole_real_part(&self) -> Q {
        Q::new((-self.a).into(), (self.b as i64).into())
    }

    fn poly(&self, p: u64) -> BTreeMap<i64, Cyclo> {
        let mut m = BTreeMap::new();
        m.insert(0, Cyclo::one());
        m.insert(self.b as i64, Cyclo::from_q(-ppow(p, -self.a)));
        m
    }
}

impl fmt::Display for DenFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.b {
            1 => write!(f, "(1 - p^{} t)", -self.a),
            b => write!(f, "(1 - p^{} t^{})", -self.a, b),
        }
    }
}

type LPoly = BTreeMap<i64, Cyclo>;

fn lp_mul(x: &LPoly, y: &LPoly) -> LPoly {
    let mut r: LPoly = BTreeMap::new();
    for (i, a) in x {
        for (j, b) in y {
            let e = r.entry(i + j).or_insert_with(Cyclo::zero);
            *e = &*e + &(a * b);
        }
    }
    r.retain(|_, c| !c.is_zero());
    r
}

fn lp_add(x: &LPoly, y: &LPoly) -> LPoly {
    let mut r = x.clone();
    for (k, c) in y {
        let e = r.entry(*k).or_insert_with(Cyclo::zero);
        *e = &*e + c;
    }
    r.retain(|_, c| !c.is_zero());
    r
}

/// Exact quotient `x / y` for `y` with constant term 1, if it exists.
fn lp_divide(x: &LPoly, y: &LPoly) -> Option<LPoly> {
    debug_assert_eq!(y.get(&0), Some(&Cyclo::one()));
    let deg_y = *y.keys().next_back()?;
    let top = *x.keys().next_back()?;
    let mut r = x.clone();
    let mut quo = LPoly::new();
    while let Some((&k, c)) = r.iter().next() {
        if k + deg_y > top {
            return None;
        }
        let c = c.clone();
        let step: LPoly = y.iter().map(|(e, v)| (e + k, -&(v * &c))).collect();
        quo.insert(k, c);
        r = lp_add(&r, &step);
    }
    Some(quo)
}

#[derive(Clone, Debug)]
pub struct RatFunc {
    p: u64,
    num: LPoly,
    den: Vec<DenFactor>,
}

/// A non-removable pole line `Re(s) = real_part`.
#[derive(Clone, Debug, PartialEq)]
pub struct Pole {
    pub real_part: Q,
    /// number of denominator factors vanishing there
    pub multiplicity: usize,
    /// pole order at the real point `s = real_part` after cancellation
    pub order: i64,
}

impl RatFunc {
    pub fn zero(p: u64) -> Self {
        RatFunc {
            p,
            num: BTreeMap::new(),
            den: Vec::new(),
        }
    }

    pub fn constant(p: u64, c: Cyclo) -> Self {
        Self::monomial(p, c, 0)
    }

    /// `c·t^k`.
    pub fn monomial(p: u64, c: Cyclo, k: i64) -> Self {
        let mut num = BTreeMap::new();
        if !c.is_zero() {
            num.insert(k, c);
        }
        RatFunc {
            p,
            num,
            den: Vec::new(),
        }
    }

    pub fn new(p: u64, num: BTreeMap<i64, Cyclo>, mut den: Vec<DenFactor>) -> Self {
        den.sort();
        let mut num = num;
        num.retain(|_, c| !c.is_zero());
        RatFunc { p, num, den }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn numerator(&self) -> &BTreeMap<i64, Cyclo> {
        &self.num
    }

    pub fn denominator(&self) -> &[DenFactor] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    /// Divide by `1 − p^{-a} t^b`.
    pub fn divide_by(&self, f: DenFactor) -> Self {
        let mut den = self.den.clone();
        den.push(f);
        RatFunc::new(self.p, self.num.clone(), den)
    }

    /// Multiply by `c·t^k`.
    pub fn scale_monomial(&self, c: &Cyclo, k: i64) -> Self {
        let num = self.num.iter().map(|(e, x)| (e + k, x * c)).collect();
        RatFunc::new(self.p, num, self.den.clone())
    }

    pub fn scale(&self, c: &Cyclo) -> Self {
        self.scale_monomial(c, 0)
    }

    fn den_poly(&self, factors: &[DenFactor]) -> LPoly {
        factors
            .iter()
            .fold(BTreeMap::from([(0, Cyclo::one())]), |acc, f| {
                lp_mul(&acc, &f.poly(self.p))
            })
    }

    /// `self.den \ other` as multisets.
    fn missing(from: &[DenFactor], have: &[DenFactor]) -> Vec<DenFactor> {
        let mut have = have.to_vec();
        let mut out = Vec::new();
        for f in from {
            if let Some(i) = have.iter().position(|g| g == f) {
                have.remove(i);
            } else {
                out.push(*f);
            }
        }
        out
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        assert_eq!(self.p, o.p);
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        let extra_for_self = Self::missing(&o.den, &self.den);
        let extra_for_o = Self::missing(&self.den, &o.den);
        let n1 = lp_mul(&self.num, &self.den_poly(&extra_for_self));
        let n2 = lp_mul(&o.num, &o.den_poly(&extra_for_o));
        let mut den = self.den.clone();
        den.extend(extra_for_self);
        RatFunc::new(self.p, lp_add(&n1, &n2), den)
    }

    /// Cancels denominator factors, and parts of them, that divide the
    /// numerator. `1 − p^{-a}t^b` splits off `1 − p^{-c}t^d` whenever
    /// `d | b` and `c = ad/b` is an integer.
    pub fn reduced(&self) -> RatFunc {
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        'outer: loop {
            if num.is_empty() {
                return RatFunc::zero(self.p);
            }
            for i in 0..den.len() {
                let f = den[i];
                if let Some(q) = lp_divide(&num, &f.poly(self.p)) {
                    num = q;
                    den.remove(i);
                    continue 'outer;
                }
                for d in (1..f.b).filter(|d| f.b.is_multiple_of(*d)) {
                    if (f.a * d as i64) % f.b as i64 != 0 {
                        continue;
                    }
                    let c = f.a * d as i64 / f.b as i64;
                    let cof: LPoly = (0..(f.b / d) as i64)
                        .map(|k| (k * d as i64, Cyclo::from_q(ppow(self.p, -c * k))))
                        .collect();
                    if let Some(q) = lp_divide(&num, &cof) {
                        num = q;
                        den[i] = DenFactor::new(c, d);
                        continue 'outer;
                    }
                }
            }
            return RatFunc::new(self.p, num, den);
        }
    }

    pub fn neg(&self) -> RatFunc {
        self.scale(&Cyclo::from_q(Q::from_integer((-1).into())))
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        let mut den = self.den.clone();
        den.extend(o.den.iter().copied());
        RatFunc::new(self.p, lp_mul(&self.num, &o.num), den)
    }

    /// Equality as functions: `N₁·D₂ = N₂·D₁`.
    pub fn equals(&self, o: &RatFunc) -> bool {
        let l = lp_mul(&self.num, &self.den_poly(&o.den));
        let r = lp_mul(&o.num, &o.den_poly(&self.den));
        l.len() == r.len() && l.iter().zip(&r).all(|(a, b)| a.0 == b.0 && a.1 == b.1)
    }

    /// Exact value at a rational `t`.
    pub fn eval_t(&self, t: &Q) -> Result<Cyclo> {
        let mut den = Q::one();
        for f in &self.den {
            let v = Q::one() - ppow(self.p, -f.a) * num_traits::pow(t.clone(), f.b as usize);
            if v.is_zero() {
                return Err(Error::PoleHit(*f));
            }
            den *= v;
        }
        let mut num = Cyclo::zero();
        for (k, c) in &self.num {
            let tk = if *k >= 0 {
                num_traits::pow(t.clone(), *k as usize)
            } else {
                Q::one() / num_traits::pow(t.clone(), (-*k) as usize)
            };
            num = &num + &c.scale(&tk);
        }
        Ok(num.scale(&(Q::one() / den)))
    }

    /// Exact value at an integer `s` (`t = p^{-s}`).
    pub fn eval_at_integer(&self, s: i64) -> Result<Cyclo> {
        self.eval_t(&ppow(self.p, -s))
    }

    /// Numeric value at complex `s₀`; a factor whose modulus falls below
    /// `tol` counts as a pole. Rational real `s₀` is checked exactly.
    pub fn evaluate(&self, s0: Complex64, tol: f64) -> Result<Complex64> {
        let lnp = (self.p as f64).ln();
        let t = (-s0 * lnp).exp();
        let mut den = Complex64::new(1.0, 0.0);
        for f in &self.den {
            let v = Complex64::new(1.0, 0.0) - t.powu(f.b) * (self.p as f64).powf(-(f.a as f64));
            if v.norm() <= tol {
                return Err(Error::PoleHit(*f));
            }
            den *= v;
        }
        let num: Complex64 = self
            .num
            .iter()
            .map(|(k, c)| c.to_complex() * t.powi(*k as i32))
            .sum();
        Ok(num / den)
    }

    /// Value at a rational real point, with the pole test done exactly.
    pub fn evaluate_rational(&self, s0: &Q) -> Result<Complex64> {
        for f in &self.den {
            if (Q::from_integer(f.a.into()) + Q::from_integer(f.b.into()) * s0).is_zero() {
                return Err(Error::PoleHit(*f));
            }
        }
        self.evaluate(Complex64::new(to_f64(s0), 0.0), 0.0)
    }

    /// Non-removable poles grouped by real part, most negative last.
    pub fn poles(&self) -> Vec<Pole> {
        let mut groups: BTreeMap<Q, usize> = BTreeMap::new();
        for f in &self.den {
            *groups.entry(f.pole_real_part()).or_default() += 1;
        }
        let mut out = Vec::new();
        for (re, mult) in groups.into_iter().rev() {
            let beta = -re.clone();
            let order = laurent_expand(self, &beta, 0)
                .map(|l| -l.order())
                .unwrap_or(mult as i64);
            if order > 0 {
                out.push(Pole {
                    real_part: re,
                    multiplicity: mult,
                    order,
                });
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let num: Vec<Value> = self
            .num
            .iter()
            .map(|(k, c)| json!([k, cyclo_json(c)]))
            .collect();
        let den: Vec<Value> = self.den.iter().map(|f| json!([f.a, f.b])).collect();
        json!({"p": self.p, "num": num, "den": den})
    }

    pub fn from_json(v: &Value) -> Result<RatFunc> {
        let bad = |m: &str| Error::Json(m.to_string());
        let p = v["p"].as_u64().ok_or_else(|| bad("missing p"))?;
        let mut num = BTreeMap::new();
        for term in v["num"].as_array().ok_or_else(|| bad("missing num"))? {
            let k = term[0].as_i64().ok_or_else(|| bad("bad exponent"))?;
            let c = cyclo_from_json(&term[1])?;
            num.insert(k, c);
        }
        let mut den = Vec::new();
        for f in v["den"].as_array().ok_or_else(|| bad("missing den"))? {
            let a = f[0].as_i64().ok_or_else(|| bad("bad factor"))?;
            let b = f[1].as_u64().filter(|&b| b >= 1).ok_or_else(|| bad("bad factor"))?;
            den.push(DenFactor::new(a, b as u32));
        }
        Ok(RatFunc::new(p, num, den))
    }
}

pub fn cyclo_json(c: &Cyclo) -> Value {
    match c.as_rational() {
        Some(r) => Value::String(format_rational(&r)),
        None => json!({
            "m": c.order(),
            "coeffs": c.coeffs().iter().map(format_rational).collect::<Vec<_>>(),
        }),
    }
}

pub fn cyclo_from_json(v: &Value) -> Result<Cyclo> {
    if let Some(s) = v.as_str() {
        return Ok(Cyclo::from_q(parse_rational(s)?));
    }
    let m = v["m"]
        .as_u64()
        .ok_or_else(|| Error::Json("bad cyclotomic coefficient".into()))?;
    let coeffs = v["coeffs"]
        .as_array()
        .ok_or_else(|| Error::Json("bad cyclotomic coefficient".into()))?
        .iter()
        .map(|c| parse_rational(c.as_str().unwrap_or("")))
        .collect::<Result<Vec<_>>>()?;
    Ok(Cyclo::from_coeffs(m, coeffs))
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.p;
        let num: Vec<String> = self
            .num
            .iter()
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("({c})*t"),
                _ => format!("({c})*t^{k}"),
            })
            .collect();
        let num = if num.is_empty() { "0".to_string() } else { num.join(" + ") };
        if self.den.is_empty() {
            return write!(f, "{num}");
        }
        let mut grouped: Vec<(DenFactor, usize)> = Vec::new();
        for d in &self.den {
            match grouped.last_mut() {
                Some((g, k)) if g == d => *k += 1,
                _ => grouped.push((*d, 1)),
            }
        }
        let den: Vec<String> = grouped
            .iter()
            .map(|(d, k)| {
                let base = match d.b {
                    1 => format!("(1 - {p}^{}*t)", -d.a),
                    b => format!("(1 - {p}^{}*t^{b})", -d.a),
                };
                if *k == 1 {
                    base
                } else {
                    format!("{base}^{k}")
                }
            })
            .collect();
        write!(f, "({num}) / ({})", den.join("*"))
    }
}
