//! Laurent expansion of `R(p^{-s})` at `s = −β` in `w = s + β`.
//!
//! With `t = p^{β}·e^{−Λw}` and `u = Λw`, every factor is a power series in
//! `u`, so the coefficient of `w^m` is `a_m·Λ^m` with `a_m` in
//! `Q(ζ) ⊗ Q(ρ)`, `ρ = p^{1/q}` and `q` the denominator of β.

use std::fmt;
use std::ops::{Add, Mul};

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::rational::{q, Q};
use crate::ratfunc::RatFunc;

/// An element `Σ_j c_j ρ^j` (`0 ≤ j < q`) with `c_j ∈ Q(ζ)` and `ρ^q = p`.
#[derive(Clone, Debug, PartialEq)]
pub struct Alg {
    p: u64,
    q: u32,
    parts: Vec<Cyclo>,
}

impl Alg {
    pub fn zero(p: u64, q: u32) -> Self {
        Alg {
            p,
            q,
            parts: vec![Cyclo::zero(); q as usize],
        }
    }

    pub fn from_cyclo(p: u64, q: u32, c: Cyclo) -> Self {
        let mut a = Self::zero(p, q);
        a.parts[0] = c;
        a
    }

    pub fn from_q(p: u64, qd: u32, r: Q) -> Self {
        Self::from_cyclo(p, qd, Cyclo::from_q(r))
    }

    /// `ρ^k = p^{k/q}` for any integer k.
    pub fn rho_pow(p: u64, qd: u32, k: i64) -> Self {
        let (whole, rem) = k.div_mod_floor(&(qd as i64));
        let mut a = Self::zero(p, qd);
        a.parts[rem as usize] = Cyclo::from_q(crate::rational::ppow(p, whole));
        a
    }

    pub fn parts(&self) -> &[Cyclo] {
        &self.parts
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(|c| c.is_zero())
    }

    /// The value when it lies in `Q`.
    pub fn as_rational(&self) -> Option<Q> {
        if self.parts[1..].iter().all(|c| c.is_zero()) {
            self.parts[0].as_rational()
        } else {
            None
        }
    }

    pub fn scale(&self, r: &Q) -> Self {
        Alg {
            p: self.p,
            q: self.q,
            parts: self.parts.iter().map(|c| c.scale(r)).collect(),
        }
    }

    pub fn mul_cyclo(&self, c: &Cyclo) -> Self {
        Alg {
            p: self.p,
            q: self.q,
            parts: self.parts.iter().map(|x| x * c).collect(),
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        let rho = (self.p as f64).powf(1.0 / self.q as f64);
        self.parts
            .iter()
            .enumerate()
            .map(|(j, c)| c.to_complex() * rho.powi(j as i32))
            .sum()
    }

    fn is_real_rational(&self) -> bool {
        self.parts.iter().all(|c| c.as_rational().is_some())
    }

    /// Inverse of an element of the field `Q(ρ)` (all parts rational).
    pub fn inverse_real(&self) -> Option<Self> {
        if !self.is_real_rational() || self.is_zero() {
            return None;
        }
        let n = self.q as usize;
        // column j = coefficients of self·ρ^j
        let mut m: Vec<Vec<Q>> = vec![vec![Q::zero(); n + 1]; n];
        for j in 0..n {
            let col = self * &Alg::rho_pow(self.p, self.q, j as i64);
            for (i, c) in col.parts.iter().enumerate() {
                m[i][j] = c.as_rational().expect("rational");
            }
        }
        m[0][n] = Q::one();
        // Gauss-Jordan
        for col in 0..n {
            let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
            m.swap(col, piv);
            let inv = Q::one() / &m[col][col];
            for x in m[col].iter_mut() {
                *x *= &inv;
            }
            for r in 0..n {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for c in 0..=n {
                        let v = &m[col][c] * &f;
                        m[r][c] -= v;
                    }
                }
            }
        }
        Some(Alg {
            p: self.p,
            q: self.q,
            parts: (0..n).map(|i| Cyclo::from_q(m[i][n].clone())).collect(),
        })
    }
}

impl Add for &Alg {
    type Output = Alg;
    fn add(self, o: &Alg) -> Alg {
        assert_eq!(self.q, o.q);
        Alg {
            p: self.p,
            q: self.q,
            parts: self.parts.iter().zip(&o.parts).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Mul for &Alg {
    type Output = Alg;
    fn mul(self, o: &Alg) -> Alg {
        assert_eq!(self.q, o.q);
        let n = self.q as usize;
        let mut r = Alg::zero(self.p, self.q);
        let pq = q(self.p as i64);
        for (i, a) in self.parts.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.parts.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let mut prod = a * b;
                let mut k = i + j;
                if k >= n {
                    k -= n;
                    prod = prod.scale(&pq);
                }
                r.parts[k] = &r.parts[k] + &prod;
            }
        }
        r
    }
}

impl fmt::Display for Alg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.parts.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match j {
                0 => write!(f, "{c}")?,
                _ => write!(f, "({c})*{}^({}/{})", self.p, j, self.q)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `a_m·Λ^m`, Λ standing for `ln p`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentCoeff {
    pub value: Alg,
    pub lambda_power: i64,
}

impl LaurentCoeff {
    pub fn render(&self) -> Complex64 {
        let lnp = (self.value.p as f64).ln();
        self.value.to_complex() * lnp.powi(self.lambda_power as i32)
    }
}

impl fmt::Display for LaurentCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.lambda_power {
            0 => write!(f, "{}", self.value),
            k => write!(f, "({})*Λ^{}", self.value, k),
        }
    }
}

#[derive(Clone, Debug)]
pub struct LaurentSeries {
    beta: Q,
    order: i64,
    /// coefficients for m = order..=top
    coeffs: Vec<LaurentCoeff>,
    p: u64,
    qd: u32,
}

impl LaurentSeries {
    pub fn beta(&self) -> &Q {
        &self.beta
    }

    /// Most negative exponent with a nonzero coefficient; `top + 1` when all vanish.
    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn top(&self) -> i64 {
        self.order + self.coeffs.len() as i64 - 1
    }

    pub fn coeff(&self, m: i64) -> LaurentCoeff {
        if m < self.order || m > self.top() {
            assert!(m < self.order || self.coeffs.is_empty(), "coefficient beyond truncation");
            return LaurentCoeff {
                value: Alg::zero(self.p, self.qd),
                lambda_power: m,
            };
        }
        self.coeffs[(m - self.order) as usize].clone()
    }

    pub fn coefficients(&self) -> &[LaurentCoeff] {
        &self.coeffs
    }
}

type Series = Vec<Alg>;

fn series_mul(a: &Series, b: &Series, len: usize) -> Series {
    let (p, qd) = (a[0].p, a[0].q);
    let mut r = vec![Alg::zero(p, qd); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if !y.is_zero() {
                r[i + j] = &r[i + j] + &(x * y);
            }
        }
    }
    r
}

fn series_inverse(a: &Series, len: usize) -> Series {
    let inv0 = a[0].inverse_real().expect("invertible real constant term");
    let mut r = vec![inv0.clone(); 1];
    for k in 1..len {
        let mut s = Alg::zero(a[0].p, a[0].q);
        for j in 1..=k.min(a.len() - 1) {
            s = &s + &(&a[j] * &r[k - j]);
        }
        r.push((&s * &inv0).scale(&q(-1)));
    }
    r
}

fn factorial(k: usize) -> Q {
    (1..=k).fold(Q::one(), |acc, i| acc * q(i as i64))
}

/// Expansion of `R` at `s = −β` through `w^top`.
pub fn laurent_expand(r: &RatFunc, beta: &Q, top: i64) -> Result<LaurentSeries> {
    let p = r.p();
    let qd = beta.denom().to_u32().ok_or(Error::IrrationalBeta)?;
    let rnum = beta.numer().to_i64().ok_or(Error::IrrationalBeta)?;
    let zero = Alg::zero(p, qd);

    let poles = r
        .denominator()
        .iter()
        .filter(|f| f.b as i64 * rnum == f.a * qd as i64)
        .count() as i64;
    let len = (top + poles + 1).max(1) as usize;

    // denominator series (pole factors divided by u)
    let mut den: Series = vec![Alg::from_q(p, qd, Q::one())];
    for f in r.denominator() {
        let b = q(f.b as i64);
        let is_pole = f.b as i64 * rnum == f.a * qd as i64;
        let s: Series = if is_pole {
            // (1 − e^{−bu})/u = Σ_j −(−b)^{j+1} u^j/(j+1)!
            (0..len)
                .map(|j| {
                    let c = -num_traits::pow(-b.clone(), j + 1) / factorial(j + 1);
                    Alg::from_q(p, qd, c)
                })
                .collect()
        } else {
            // 1 − c·e^{−bu}, c = p^{bβ − a} = ρ^{b·r − a·q}
            let c = Alg::rho_pow(p, qd, f.b as i64 * rnum - f.a * qd as i64);
            (0..len)
                .map(|j| {
                    let e = num_traits::pow(-b.clone(), j) / factorial(j);
                    let term = c.scale(&-e);
                    if j == 0 {
                        &term + &Alg::from_q(p, qd, Q::one())
                    } else {
                        term
                    }
                })
                .collect()
        };
        den = series_mul(&den, &s, len);
    }
    let den_inv = series_inverse(&den, len);

    // numerator: Σ_k n_k ρ^{k r} e^{−k u}
    let mut num: Series = vec![zero.clone(); len];
    for (k, c) in r.numerator() {
        let base = Alg::rho_pow(p, qd, k * rnum).mul_cyclo(c);
        let kk = q(-*k);
        for (j, slot) in num.iter_mut().enumerate() {
            let e = num_traits::pow(kk.clone(), j) / factorial(j);
            if !e.is_zero() {
                *slot = &*slot + &base.scale(&e);
            }
        }
    }
    let prod = series_mul(&num, &den_inv, len);
    let first = prod.iter().position(|a| !a.is_zero()).unwrap_or(len);
    let order = first as i64 - poles;
    let coeffs = prod[first..]
        .iter()
        .enumerate()
        .map(|(i, a)| LaurentCoeff {
            value: a.clone(),
            lambda_power: order + i as i64,
        })
        .collect();
    Ok(LaurentSeries {
        beta: beta.clone(),
        order,
        coeffs,
        p,
        qd,
    })
}

/// Numeric `c_{-k}`-style check: `(1/2πi)∮ (s+β)^{-m-1} R(s) ds` on a circle.
pub fn circle_coefficient(r: &RatFunc, beta: f64, m: i64, radius: f64, samples: usize) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..samples {
        let th = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / samples as f64;
        let w = Complex64::from_polar(radius, th);
        let v = r
            .evaluate(Complex64::new(-beta, 0.0) + w, 0.0)
            .expect("off the pole");
        acc += v * w.powi(-(m as i32));
    }
    acc / samples as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfunc::DenFactor;
    use crate::rational::{ppow, qf};
    use std::collections::BTreeMap;

    fn geometric(p: u64, c: Q) -> RatFunc {
        RatFunc::constant(p, Cyclo::from_q(c)).divide_by(DenFactor::new(1, 1))
    }

    #[test]
    fn simple_pole_coefficients() {
        for p in [2u64, 3, 5] {
            let l = laurent_expand(&geometric(p, q(1)), &q(1), 1).unwrap();
            assert_eq!(l.order(), -1);
            assert_eq!(l.coeff(-1).value.as_rational(), Some(q(1)));
            assert_eq!(l.coeff(-1).lambda_power, -1);
            assert_eq!(l.coeff(0).value.as_rational(), Some(qf(1, 2)));
            assert_eq!(l.coeff(1).value.as_rational(), Some(qf(1, 12)));
            assert_eq!(l.coeff(1).lambda_power, 1);
        }
    }

    #[test]
    fn half_integer_point() {
        let p = 3;
        let r = geometric(p, q(1) - ppow(p, -1));
        let l = laurent_expand(&r, &qf(1, 2), 1).unwrap();
        assert_eq!(l.order(), 0);
        let direct = (1.0 - 1.0 / 3.0) / (1.0 - 3f64.powf(-0.5));
        assert!((l.coeff(0).render().re - direct).abs() < 1e-14);
        // exact: (2/3)/(1 - ρ^{-1}) lives in Q(√3)
        let c0 = l.coeff(0).value;
        let one_minus = &Alg::from_q(p, 2, q(1)) + &Alg::rho_pow(p, 2, -1).scale(&q(-1));
        assert_eq!(&c0 * &one_minus, Alg::from_q(p, 2, qf(2, 3)));
    }

    #[test]
    fn pure_monomial() {
        let p = 5;
        let r = RatFunc::monomial(p, Cyclo::one(), 2);
        let l = laurent_expand(&r, &q(1), 1).unwrap();
        assert_eq!(l.order(), 0);
        assert_eq!(l.coeff(0).value.as_rational(), Some(q(25)));
        assert_eq!(l.coeff(1).value.as_rational(), Some(q(-50)));
    }

    #[test]
    fn numerator_cancellation() {
        let mut num = BTreeMap::new();
        num.insert(0, Cyclo::one());
        num.insert(1, Cyclo::from_q(qf(-1, 3)));
        let r = RatFunc::new(3, num, vec![DenFactor::new(1, 1)]);
        let l = laurent_expand(&r, &q(1), 2).unwrap();
        assert_eq!(l.order(), 0);
        assert_eq!(l.coeff(0).value.as_rational(), Some(q(1)));
        assert!(l.coeff(1).value.is_zero());
    }

    #[test]
    fn circle_matches_exact() {
        let r = geometric(3, q(1));
        for m in -1..=1 {
            let num = circle_coefficient(&r, 1.0, m, 1e-3, 64);
            let exact = laurent_expand(&r, &q(1), 1).unwrap().coeff(m).render();
            assert!((num - exact).norm() <= 1e-6 * exact.norm(), "m={m}");
        }
    }

    #[test]
    fn field_inverse() {
        let a = &Alg::from_q(5, 3, q(2)) + &Alg::rho_pow(5, 3, 1);
        let inv = a.inverse_real().unwrap();
        assert_eq!(&a * &inv, Alg::from_q(5, 3, q(1)));
    }
}
