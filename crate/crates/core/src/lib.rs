//! Exact Igusa local zeta functions over Q_p, division of distributions by
//! `|f|^β`, and fundamental solutions of p-adic pseudo-differential equations.

pub mod cli;
pub mod coeff;
pub mod cyclo;
pub mod error;
pub mod fundsol;
pub mod laurent;
pub mod operator;
pub mod padic;
pub mod parse;
pub mod poly;
pub mod ratfunc;
pub mod rational;
pub mod sb;
pub mod zeta;

pub use error::{Error, Result};
