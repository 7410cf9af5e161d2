//! Coefficient backends for test functions: exact cyclotomic or complex float.

use std::fmt::Debug;

use num_complex::Complex64;
use num_traits::Zero;

use crate::cyclo::Cyclo;
use crate::rational::{to_f64, Q};

pub trait Coeff: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn from_q(r: &Q) -> Self;
    /// `ζ_m^k`
    fn root(m: u64, k: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn scale(&self, r: &Q) -> Self;
    fn conj(&self) -> Self;
    fn to_complex(&self) -> Complex64;

    fn neg(&self) -> Self {
        self.scale(&Q::from_integer((-1).into()))
    }

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    fn add_root_scaled(&mut self, m: u64, k: i64, r: &Q) {
        *self = self.add(&Self::root(m, k).scale(r));
    }

    /// `self·ζ_m^k`
    fn mul_root(&self, m: u64, k: i64) -> Self {
        self.mul(&Self::root(m, k))
    }

    /// Coordinates on `1, ζ_l, …, ζ_l^{l−1}` when the backend is exact.
    fn power_coords(&self, _l: u64) -> Option<Vec<Q>> {
        None
    }

    /// Inverse of [`Coeff::power_coords`].
    fn from_power_coords(_l: u64, _v: Vec<Q>) -> Option<Self> {
        None
    }

    fn conductor(&self) -> u64 {
        1
    }
}

impl Coeff for Cyclo {
    fn zero() -> Self {
        Cyclo::zero()
    }
    fn mul_root(&self, m: u64, k: i64) -> Self {
        Cyclo::mul_root(self, m, k)
    }
    fn power_coords(&self, l: u64) -> Option<Vec<Q>> {
        let mut v = self.lift(l).coeffs().to_vec();
        v.resize(l as usize, Q::zero());
        Some(v)
    }
    fn from_power_coords(l: u64, v: Vec<Q>) -> Option<Self> {
        Some(Cyclo::from_coeffs(l, v))
    }
    fn conductor(&self) -> u64 {
        self.order()
    }
    fn from_q(r: &Q) -> Self {
        Cyclo::from_q(r.clone())
    }
    fn root(m: u64, k: i64) -> Self {
        Cyclo::root(m, k)
    }
    fn is_zero(&self) -> bool {
        Cyclo::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn scale(&self, r: &Q) -> Self {
        Cyclo::scale(self, r)
    }
    fn conj(&self) -> Self {
        Cyclo::conj(self)
    }
    fn to_complex(&self) -> Complex64 {
        Cyclo::to_complex(self)
    }
    fn add_root_scaled(&mut self, m: u64, k: i64, r: &Q) {
        Cyclo::add_root_scaled(self, m, k, r)
    }
}

impl Coeff for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn from_q(r: &Q) -> Self {
        Complex64::new(to_f64(r), 0.0)
    }
    fn root(m: u64, k: i64) -> Self {
        let k = k.rem_euclid(m as i64);
        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / m as f64)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn scale(&self, r: &Q) -> Self {
        self * to_f64(r)
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
}
