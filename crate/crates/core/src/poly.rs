//! Multivariate polynomials over Q with Hasse-derivative Taylor expansion.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::rational::{format_rational, q, Q};

pub type Exponent = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polynomial {
    n: usize,
    terms: BTreeMap<Exponent, Q>,
}

fn binom(n: u32, k: u32) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        Polynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: Q) -> Self {
        let mut p = Self::zero(n);
        p.add_term(vec![0; n], c);
        p
    }

    /// The coordinate function `x_i` (0-based).
    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        let mut p = Self::zero(n);
        p.add_term(e, q(1));
        p
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Exponent, Q)>) -> Self {
        let mut p = Self::zero(n);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: Exponent, c: Q) {
        assert_eq!(e.len(), self.n);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e.clone()).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum())
            .max()
            .unwrap_or(0)
    }

    /// `Some(D)` when every monomial has total degree `D ≥ 1`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let d = degs.next()?;
        (d >= 1 && degs.all(|x| x == d)).then_some(d)
    }

    pub fn eval(&self, a: &[Q]) -> Q {
        assert_eq!(a.len(), self.n);
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(a)
                    .fold(c.clone(), |acc, (&k, x)| acc * num_traits::pow(x.clone(), k as usize))
            })
            .sum()
    }

    pub fn eval_f64(&self, a: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(a)
                    .fold(crate::rational::to_f64(c), |acc, (&k, x)| acc * x.powi(k as i32))
            })
            .sum()
    }

    pub fn mul(&self, o: &Polynomial) -> Polynomial {
        assert_eq!(self.n, o.n);
        let mut r = Polynomial::zero(self.n);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(e, c1 * c2);
            }
        }
        r
    }

    pub fn add(&self, o: &Polynomial) -> Polynomial {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            n: self.n,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        (0..k).fold(Polynomial::constant(self.n, q(1)), |acc, _| acc.mul(self))
    }

    pub fn partial(&self, i: usize) -> Polynomial {
        let mut r = Polynomial::zero(self.n);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                r.add_term(e2, c * Q::from_integer(e[i].into()));
            }
        }
        r
    }

    /// Hasse coefficients: `f(a + h) = Σ_α f_α(a) h^α` with α ranging over
    /// the returned keys (zero coefficients omitted).
    pub fn hasse_taylor(&self, a: &[Q]) -> BTreeMap<Exponent, Q> {
        assert_eq!(a.len(), self.n);
        let mut out: BTreeMap<Exponent, Q> = BTreeMap::new();
        for (beta, c) in &self.terms {
            let mut alpha = vec![0u32; self.n];
            loop {
                let mut term = c.clone();
                for i in 0..self.n {
                    term *= Q::from_integer(binom(beta[i], alpha[i]));
                    term *= num_traits::pow(a[i].clone(), (beta[i] - alpha[i]) as usize);
                }
                if !term.is_zero() {
                    *out.entry(alpha.clone()).or_insert_with(Q::zero) += term;
                }
                // next α ≤ β
                let mut k = 0;
                while k < self.n {
                    if alpha[k] < beta[k] {
                        alpha[k] += 1;
                        break;
                    }
                    alpha[k] = 0;
                    k += 1;
                }
                if k == self.n {
                    break;
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        format!("x{}", i + 1)
                    } else {
                        format!("x{}^{}", i + 1, k)
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{}", format_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rational(&abs), vars.join("*"))?;
            }
        }
        Ok(())
    }
}
