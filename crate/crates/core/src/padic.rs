//! Prime context, balls of Q_p^n and multiplicative characters of conductor one.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::rational::{
    format_rational, in_z_inv_p, is_prime, parse_rational, ppow, reduce_mod_ppow, Q,
};

#[derive(Clone, Debug, PartialEq)]
pub struct PrimeContext {
    pub p: u64,
    pub depth: u32,
    pub tolerance: f64,
}

impl PrimeContext {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeContext {
            p,
            depth: 40,
            tolerance: 1e-10,
        })
    }

    pub fn with_depth(mut self, depth: u32) -> Self {
        self.depth = depth;
        self
    }
}

/// The coset `center + p^level Z_p^n` with a canonical center.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ball {
    level: i64,
    center: Vec<Q>,
}

impl Ball {
    pub fn new(p: u64, center: Vec<Q>, level: i64) -> Result<Self> {
        let center = center
            .iter()
            .map(|c| reduce_mod_ppow(c, p, level))
            .collect::<Result<Vec<_>>>()?;
        Ok(Ball { level, center })
    }

    /// `p^level Z_p^n`.
    pub fn origin(n: usize, level: i64) -> Self {
        Ball {
            level,
            center: vec![Q::zero(); n],
        }
    }

    pub fn level(&self) -> i64 {
        self.level
    }

    pub fn center(&self) -> &[Q] {
        &self.center
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn is_centered_at_zero(&self) -> bool {
        self.center.iter().all(|c| c.is_zero())
    }

    pub fn volume(&self, p: u64) -> Q {
        ppow(p, -self.level * self.dim() as i64)
    }

    pub fn contains_point(&self, p: u64, x: &[Q]) -> bool {
        x.len() == self.dim()
            && x.iter().zip(&self.center).all(|(xi, ci)| {
                in_z_inv_p(xi, p)
                    && reduce_mod_ppow(&(xi - ci), p, self.level)
                        .map(|r| r.is_zero())
                        .unwrap_or(false)
            })
    }

    pub fn contains(&self, p: u64, other: &Ball) -> bool {
        other.level >= self.level && self.contains_point(p, &other.center)
    }

    /// The unique ball of `level` (≤ own level) containing this one.
    pub fn ancestor(&self, p: u64, level: i64) -> Ball {
        debug_assert!(level <= self.level);
        Ball::new(p, self.center.clone(), level).expect("canonical center")
    }

    /// The `p^n` children at level `e+1`, lexicographic in the new digit.
    pub fn subdivide(&self, p: u64) -> Vec<Ball> {
        let n = self.dim();
        let step = ppow(p, self.level);
        let total = (p as usize).pow(n as u32);
        let mut out = Vec::with_capacity(total);
        let mut digits = vec![0u64; n];
        for _ in 0..total {
            let center = self
                .center
                .iter()
                .zip(&digits)
                .map(|(c, &d)| c + &step * Q::from_integer(d.into()))
                .collect();
            out.push(Ball::new(p, center, self.level + 1).expect("canonical center"));
            for k in (0..n).rev() {
                digits[k] += 1;
                if digits[k] < p {
                    break;
                }
                digits[k] = 0;
            }
        }
        out
    }

    /// Translate by `a ∈ Z[1/p]^n`.
    pub fn translate(&self, p: u64, a: &[Q]) -> Result<Ball> {
        let c = self.center.iter().zip(a).map(|(c, a)| c + a).collect();
        Ball::new(p, c, self.level)
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.center.iter().map(format_rational).collect();
        write!(f, "{}@{}", c.join(","), self.level)
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct BallJson {
    pub level: i64,
    pub center: Vec<String>,
}

impl Ball {
    pub fn to_json(&self) -> BallJson {
        BallJson {
            level: self.level,
            center: self.center.iter().map(format_rational).collect(),
        }
    }

    pub fn from_json(p: u64, j: &BallJson) -> Result<Ball> {
        let c = j
            .center
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        Ball::new(p, c, j.level)
    }

    /// `"c1,..,cn@e"`.
    pub fn parse(p: u64, s: &str) -> Result<Ball> {
        let (c, e) = s
            .split_once('@')
            .ok_or_else(|| Error::BadRational(s.to_string()))?;
        let level: i64 = e
            .trim()
            .parse()
            .map_err(|_| Error::BadRational(e.to_string()))?;
        let center = c
            .split(',')
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()?;
        Ball::new(p, center, level)
    }
}

/// A multiplicative character of `Z_p^×` trivial on `1 + pZ_p`, with values
/// in the d-th roots of unity and the convention `χ(0) = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultCharacter {
    p: u64,
    order: u64,
    gen_index: u64,
    /// discrete logarithm of each residue 1..p to the primitive root
    dlog: Vec<u64>,
}

pub fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let factors: Vec<u64> = (2..p).filter(|d| (p - 1).is_multiple_of(*d) && is_prime(*d)).collect();
    (2..p)
        .find(|&g| factors.iter().all(|&f| pow_mod(g, (p - 1) / f, p) != 1))
        .expect("primitive root exists")
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

impl MultCharacter {
    /// `χ(γ) = ζ_d^{gen_index}` for the least primitive root `γ` mod p.
    pub fn new(p: u64, order: u64, gen_index: u64) -> Result<Self> {
        if order == 0 || !(p - 1).is_multiple_of(order) {
            return Err(Error::BadCharacter(format!(
                "order {order} does not divide p-1 = {}",
                p - 1
            )));
        }
        let g = primitive_root(p);
        let mut dlog = vec![0u64; p as usize];
        let mut x = 1u64;
        for k in 0..(p - 1) {
            dlog[x as usize] = k;
            x = x * g % p;
        }
        Ok(MultCharacter {
            p,
            order,
            gen_index: gen_index % order,
            dlog,
        })
    }

    /// The quadratic (Legendre) character, p odd.
    pub fn quadratic(p: u64) -> Result<Self> {
        Self::new(p, 2, 1)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn gen_index(&self) -> u64 {
        self.gen_index
    }

    pub fn is_trivial(&self) -> bool {
        self.gen_index == 0
    }

    /// Exponent k with `χ(u) = ζ_d^k`; `None` for `u ≡ 0`.
    pub fn exponent(&self, u: u64) -> Option<u64> {
        let u = u % self.p;
        if u == 0 {
            return None;
        }
        Some(self.dlog[u as usize] * self.gen_index % self.order)
    }

    pub fn value(&self, u: u64) -> Cyclo {
        match self.exponent(u) {
            None => Cyclo::zero(),
            Some(k) => Cyclo::root(self.order, k as i64),
        }
    }

    pub fn conj(&self) -> Self {
        let mut c = self.clone();
        c.gen_index = (self.order - self.gen_index) % self.order;
        c
    }

    /// Pointwise product on units.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        let l = num_integer::lcm(self.order, other.order);
        let gi = (self.gen_index * (l / self.order) + other.gen_index * (l / other.order)) % l;
        let g = num_integer::gcd(gi, l).max(1);
        let (order, gen_index) = if gi == 0 { (1, 0) } else { (l / g, gi / g) };
        MultCharacter {
            p: self.p,
            order,
            gen_index,
            dlog: self.dlog.clone(),
        }
    }
}
