//! Exact rationals with p-adic valuation helpers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// `p^k` as an exact rational, for any sign of `k`.
pub fn ppow(p: u64, k: i64) -> Q {
    let base = BigInt::from(p).pow(k.unsigned_abs() as u32);
    if k >= 0 {
        Q::from_integer(base)
    } else {
        Q::new(BigInt::one(), base)
    }
}

fn int_val(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let pb = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (d, r) = n.div_rem(&pb);
        if !r.is_zero() {
            return v;
        }
        n = d;
        v += 1;
    }
}

/// Exact p-adic valuation; `None` stands for +∞ (the value zero).
pub fn valuation(r: &Q, p: u64) -> Option<i64> {
    if r.is_zero() {
        None
    } else {
        Some(int_val(r.numer(), p) - int_val(r.denom(), p))
    }
}

/// `|r|_p` as an f64.
pub fn abs_p(r: &Q, p: u64) -> f64 {
    match valuation(r, p) {
        None => 0.0,
        Some(v) => (p as f64).powi(-v as i32),
    }
}

/// Angular component `r·p^{-v(r)}` reduced modulo `p^k`.
pub fn angular_component(r: &Q, p: u64, k: u32) -> Result<u64> {
    let v = valuation(r, p).ok_or(Error::AngularAtZero)?;
    let unit = r * ppow(p, -v);
    let modulus = BigInt::from(p).pow(k);
    let num = unit.numer().mod_floor(&modulus);
    let den = unit.denom().mod_floor(&modulus);
    let inv = mod_inverse(&den, &modulus).expect("unit denominator");
    Ok(((num * inv).mod_floor(&modulus)).to_u64().expect("fits"))
}

pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(m);
    if !g.gcd.is_one() {
        return None;
    }
    Some(g.x.mod_floor(m))
}

/// Reduce `x ∈ Z[1/p]` modulo `p^e Z_p`, returning the canonical
/// representative `m/p^j` with `0 ≤ m < p^{e+j}`, `j = max(0, -v(x))`.
pub fn reduce_mod_ppow(x: &Q, p: u64, e: i64) -> Result<Q> {
    if !in_z_inv_p(x, p) {
        return Err(Error::NotInZp(x.to_string()));
    }
    if x.is_zero() {
        return Ok(Q::zero());
    }
    let j = (-valuation(x, p).unwrap()).max(0);
    if e + j <= 0 {
        return Ok(Q::zero());
    }
    let scale = BigInt::from(p).pow(j as u32);
    let m = (x * Q::from_integer(scale.clone())).to_integer();
    let modulus = BigInt::from(p).pow((e + j) as u32);
    Ok(Q::new(m.mod_floor(&modulus), scale))
}

/// True when the denominator of `x` is a power of `p`.
pub fn in_z_inv_p(x: &Q, p: u64) -> bool {
    let mut d = x.denom().clone();
    let pb = BigInt::from(p);
    while (&d % &pb).is_zero() {
        d /= &pb;
    }
    d.is_one()
}

/// p-adic fractional part of `x ∈ Z[1/p]`, as an exact rational in `[0,1)`.
pub fn frac_p(x: &Q, p: u64) -> Result<Q> {
    reduce_mod_ppow(x, p, 0)
}

pub fn parse_rational(s: &str) -> Result<Q> {
    let t = s.trim();
    let bad = || Error::BadRational(s.to_string());
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Q::new(n, d))
}

/// `"num/den"` or `"num"`.
pub fn format_rational(r: &Q) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Q) -> f64 {
    let n = r.numer().to_f64().unwrap_or(f64::NAN);
    let d = r.denom().to_f64().unwrap_or(f64::NAN);
    if n.is_finite() && d.is_finite() {
        n / d
    } else {
        // very large numerator or denominator: scale by shared bit length
        let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(900);
        let n = (r.numer() >> shift).to_f64().unwrap_or(0.0);
        let d = (r.denom() >> shift).to_f64().unwrap_or(1.0);
        if d == 0.0 {
            if r.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY }
        } else {
            n / d
        }
    }
}

/// Render with 17 significant digits so JSON output is byte-stable.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    format!("{:.16e}", x)
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
