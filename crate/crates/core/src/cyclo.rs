//! Exact elements of cyclotomic fields `Q(ζ_m)`.
//!
//! An element is stored in the power basis `1, ζ, …, ζ^{φ(m)-1}` after
//! reduction modulo the m-th cyclotomic polynomial, so equal elements of the
//! same field have identical coefficient vectors. Elements of different
//! fields are compared and combined in `Q(ζ_lcm)`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rational::{format_rational, to_f64, Q};

#[derive(Clone, Debug)]
pub struct Cyclo {
    m: u64,
    c: Vec<Q>,
}

struct Tables {
    poly: HashMap<u64, Arc<Vec<i64>>>,
    powers: HashMap<u64, Arc<Vec<Vec<Q>>>>,
}

fn tables() -> &'static Mutex<Tables> {
    static T: OnceLock<Mutex<Tables>> = OnceLock::new();
    T.get_or_init(|| {
        Mutex::new(Tables {
            poly: HashMap::new(),
            powers: HashMap::new(),
        })
    })
}

/// Coefficients (ascending) of the m-th cyclotomic polynomial.
pub fn cyclotomic_poly(m: u64) -> Arc<Vec<i64>> {
    if let Some(p) = tables().lock().unwrap().poly.get(&m) {
        return p.clone();
    }
    // x^m - 1 divided by Φ_d for all proper divisors d
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m.is_multiple_of(d) {
            let div = cyclotomic_poly(d);
            num = poly_div_exact(&num, &div);
        }
    }
    let arc = Arc::new(num);
    tables().lock().unwrap().poly.insert(m, arc.clone());
    arc
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0i64; num.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[k + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0));
    quot
}

pub fn euler_phi(m: u64) -> u64 {
    (1..=m).filter(|k| k.gcd(&m) == 1).count() as u64
}

/// Reduce a dense polynomial in ζ (any degree) into the canonical basis.
fn reduce(m: u64, mut v: Vec<Q>) -> Vec<Q> {
    let phi = cyclotomic_poly(m);
    let deg = phi.len() - 1;
    // fold exponents modulo m first
    if v.len() > m as usize {
        for k in (m as usize..v.len()).rev() {
            let c = std::mem::take(&mut v[k]);
            if !c.is_zero() {
                let idx = k % m as usize;
                v[idx] += c;
            }
        }
        v.truncate(m as usize);
    }
    for k in (deg..v.len()).rev() {
        let c = std::mem::take(&mut v[k]);
        if c.is_zero() {
            continue;
        }
        for (j, &pj) in phi.iter().enumerate().take(deg) {
            if pj != 0 {
                v[k - deg + j] -= &c * Q::from_integer(pj.into());
            }
        }
    }
    v.resize(deg, Q::zero());
    v
}

fn powers(m: u64) -> Arc<Vec<Vec<Q>>> {
    if let Some(p) = tables().lock().unwrap().powers.get(&m) {
        return p.clone();
    }
    let list: Vec<Vec<Q>> = (0..m as usize)
        .map(|k| {
            let mut v = vec![Q::zero(); k + 1];
            v[k] = Q::one();
            reduce(m, v)
        })
        .collect();
    let arc = Arc::new(list);
    tables().lock().unwrap().powers.insert(m, arc.clone());
    arc
}

impl Cyclo {
    pub fn zero() -> Self {
        Self::from_q(Q::zero())
    }

    pub fn one() -> Self {
        Self::from_q(Q::one())
    }

    pub fn from_q(r: Q) -> Self {
        Cyclo { m: 1, c: vec![r] }
    }

    /// `ζ_m^k`.
    pub fn root(m: u64, k: i64) -> Self {
        assert!(m >= 1);
        let k = k.rem_euclid(m as i64) as usize;
        Cyclo {
            m,
            c: powers(m)[k].clone(),
        }
    }

    pub fn order(&self) -> u64 {
        self.m
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.c
    }

    pub fn from_coeffs(m: u64, c: Vec<Q>) -> Self {
        Cyclo { m, c: reduce(m, c) }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    /// The value as a rational, when it lies in `Q`.
    pub fn as_rational(&self) -> Option<Q> {
        let mut it = self.c.iter();
        let first = it.next().cloned().unwrap_or_else(Q::zero);
        if it.all(|x| x.is_zero()) {
            Some(first)
        } else {
            None
        }
    }

    /// Re-express in `Q(ζ_target)`; `self.m` must divide `target`.
    pub fn lift(&self, target: u64) -> Self {
        if target == self.m {
            return self.clone();
        }
        assert_eq!(target % self.m, 0);
        let step = (target / self.m) as usize;
        let mut v = vec![Q::zero(); target as usize];
        for (i, c) in self.c.iter().enumerate() {
            if !c.is_zero() {
                v[i * step] += c;
            }
        }
        Cyclo {
            m: target,
            c: reduce(target, v),
        }
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        let l = a.m.lcm(&b.m);
        (a.lift(l), b.lift(l))
    }

    pub fn scale(&self, r: &Q) -> Self {
        Cyclo {
            m: self.m,
            c: self.c.iter().map(|x| x * r).collect(),
        }
    }

    /// `self + r·ζ_n^k` without a general multiplication.
    pub fn add_root_scaled(&mut self, n: u64, k: i64, r: &Q) {
        if r.is_zero() {
            return;
        }
        let l = self.m.lcm(&n);
        if l != self.m {
            *self = self.lift(l);
        }
        let idx = (k.rem_euclid(n as i64) as u64 * (l / n)) as usize;
        let pw = powers(l);
        for (dst, src) in self.c.iter_mut().zip(&pw[idx]) {
            if !src.is_zero() {
                *dst += src * r;
            }
        }
    }

    /// `self·ζ_n^k` by rotating the power basis.
    pub fn mul_root(&self, n: u64, k: i64) -> Self {
        let l = self.m.lcm(&n);
        let lifted = self.lift(l);
        let shift = k.rem_euclid(n as i64) as usize * (l / n) as usize;
        let mut v = vec![Q::zero(); l as usize];
        for (i, c) in lifted.c.iter().enumerate() {
            if !c.is_zero() {
                v[(i + shift) % l as usize] += c;
            }
        }
        Cyclo { m: l, c: reduce(l, v) }
    }

    pub fn conj(&self) -> Self {
        let mut v = vec![Q::zero(); self.m as usize];
        for (i, c) in self.c.iter().enumerate() {
            if !c.is_zero() {
                v[(self.m as usize - i) % self.m as usize] += c;
            }
        }
        Cyclo {
            m: self.m,
            c: reduce(self.m, v),
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        let mut z = Complex64::new(0.0, 0.0);
        for (i, c) in self.c.iter().enumerate() {
            if !c.is_zero() {
                let ang = 2.0 * std::f64::consts::PI * i as f64 / self.m as f64;
                z += Complex64::from_polar(1.0, ang) * to_f64(c);
            }
        }
        z
    }
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Self) -> bool {
        if self.m == other.m {
            return self.c == other.c;
        }
        let (a, b) = Cyclo::common(self, other);
        a.c == b.c
    }
}

impl Eq for Cyclo {}

impl Add for &Cyclo {
    type Output = Cyclo;
    fn add(self, o: &Cyclo) -> Cyclo {
        let (a, b) = Cyclo::common(self, o);
        Cyclo {
            m: a.m,
            c: a.c.iter().zip(&b.c).map(|(x, y)| x + y).collect(),
        }
    }
}

impl Sub for &Cyclo {
    type Output = Cyclo;
    fn sub(self, o: &Cyclo) -> Cyclo {
        self + &(-o)
    }
}

impl Neg for &Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        Cyclo {
            m: self.m,
            c: self.c.iter().map(|x| -x).collect(),
        }
    }
}

impl Mul for &Cyclo {
    type Output = Cyclo;
    fn mul(self, o: &Cyclo) -> Cyclo {
        if self.m == 1 {
            return o.scale(&self.c[0]);
        }
        if o.m == 1 {
            return self.scale(&o.c[0]);
        }
        let (a, b) = Cyclo::common(self, o);
        let mut v = vec![Q::zero(); a.c.len() + b.c.len()];
        for (i, x) in a.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.c.iter().enumerate() {
                if !y.is_zero() {
                    v[i + j] += x * y;
                }
            }
        }
        Cyclo {
            m: a.m,
            c: reduce(a.m, v),
        }
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{}", format_rational(&r));
        }
        let mut first = true;
        for (i, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", format_rational(c))?,
                _ => write!(f, "({})·ζ{}^{}", format_rational(c), self.m, i)?,
            }
        }
        Ok(())
    }
}
