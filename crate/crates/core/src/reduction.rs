//! Reduced areas, orbit lifts and the versal family of `Υ_k` tori.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::rational::{format, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("k must be at least 2, got {0}")]
    BadK(i64),
    #[error("point {0} lies outside the reduced-space domain")]
    OutsideDomain(String),
    #[error("orbit height {0} out of range")]
    OutOfRange(String),
    #[error("parameters violate 0 < a2 < a1/k: {0}")]
    InvalidParams(String),
    #[error("product torus entry {index} is not positive: {value}")]
    NonPositiveOutput { index: usize, value: String },
    #[error("product torus needs at least one entry")]
    EmptyTorus,
}

/// `T(a_1, …, a_n)`, a product of circles of areas `a_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProductTorusSpec {
    a: Vec<Rational>,
}

impl ProductTorusSpec {
    pub fn new(a: Vec<Rational>) -> Result<Self, ReductionError> {
        if a.is_empty() {
            return Err(ReductionError::EmptyTorus);
        }
        if let Some((index, v)) = a.iter().enumerate().find(|(_, v)| !v.is_positive()) {
            return Err(ReductionError::NonPositiveOutput { index, value: format(v) });
        }
        Ok(ProductTorusSpec { a })
    }

    pub fn entries(&self) -> &[Rational] {
        &self.a
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn min(&self) -> &Rational {
        self.a.iter().min().expect("nonempty")
    }

    pub fn sum(&self) -> Rational {
        self.a.iter().sum()
    }
}

impl fmt::Display for ProductTorusSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.a.iter().map(format).collect();
        write!(f, "T({})", parts.join(","))
    }
}

/// Parameters `(k, a1, a2)` of a torus `Υ_k(a1, a2)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UpsilonParams {
    k: i64,
    a1: Rational,
    a2: Rational,
}

impl UpsilonParams {
    pub fn new(k: i64, a1: Rational, a2: Rational) -> Result<Self, ReductionError> {
        if k < 2 {
            return Err(ReductionError::BadK(k));
        }
        let kq = Rational::from_integer(k.into());
        if !a2.is_positive() || a2 >= &a1 / &kq {
            return Err(ReductionError::InvalidParams(format!("k={k}, a1={}, a2={}", format(&a1), format(&a2))));
        }
        Ok(UpsilonParams { k, a1, a2 })
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn a1(&self) -> &Rational {
        &self.a1
    }

    pub fn a2(&self) -> &Rational {
        &self.a2
    }

    pub fn k_rational(&self) -> Rational {
        Rational::from_integer(self.k.into())
    }

    /// `a1 − k·a2`
    pub fn d(&self) -> Rational {
        &self.a1 - self.k_rational() * &self.a2
    }
}

fn kq(k: i64) -> Rational {
    Rational::from_integer(BigInt::from(k))
}

/// Area of the reduced space over `c ∈ Δ_k = {x ≥ 0, x + k·y ≥ 0}`.
pub fn alpha_k(k: i64, c: &[Rational; 2]) -> Result<Rational, ReductionError> {
    if k < 2 {
        return Err(ReductionError::BadK(k));
    }
    let k = kq(k);
    let outside = || ReductionError::OutsideDomain(format!("({},{})", format(&c[0]), format(&c[1])));
    if !c[0].is_positive() || !(&c[0] + &k * &c[1]).is_positive() {
        return Err(outside());
    }
    let a = if c[1].is_negative() { &c[0] / &k + &c[1] } else { &c[0] / &k };
    if !a.is_positive() {
        return Err(outside());
    }
    Ok(a)
}

/// Product torus in `ℂ³` lying over the circle of height `c3` in the
/// reduced space at `c`.
pub fn orbit_lift(k: i64, c: &[Rational; 2], c3: &Rational) -> Result<ProductTorusSpec, ReductionError> {
    let alpha = alpha_k(k, c)?;
    if !c3.is_positive() || c3 >= &alpha {
        return Err(ReductionError::OutOfRange(format(c3)));
    }
    let k = kq(k);
    let (c1, c2) = (&c[0], &c[1]);
    let entries = if c2.is_negative() {
        vec![c1 - &k * c3 + &k * c2, c3.clone(), c3 - c2]
    } else {
        vec![c1 - &k * c3, c3 + c2, c3.clone()]
    };
    ProductTorusSpec::new(entries).map_err(|_| ReductionError::OutOfRange(format(c3)))
}

pub fn in_uk(k: i64, a1: &Rational, a2: &Rational) -> bool {
    k >= 2 && a1.is_positive() && a2.is_positive() && &(a1 / kq(k + 1)) <= a2 && a2 < &(a1 / kq(k))
}

pub fn is_monotone_upsilon(k: i64, a1: &Rational, a2: &Rational) -> bool {
    *a1 == kq(k + 1) * a2
}

/// Outcome of following the versal family of `Υ_k(a1, a2)` to flux `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VersalImage {
    Product(ProductTorusSpec),
    /// `b2 = 0`: the torus is again of `Υ` type.
    Wall,
}

pub fn versal_to_product(p: &UpsilonParams, b: &[Rational; 3]) -> Result<VersalImage, ReductionError> {
    let k = p.k_rational();
    let d = p.d();
    let a2 = &p.a2;
    let entries = if b[1].is_zero() {
        return Ok(VersalImage::Wall);
    } else if b[1].is_positive() {
        vec![&d + &b[0] - &k * &b[2], a2 + &b[1] + &b[2], a2 + &b[2]]
    } else {
        vec![&d + &b[0] + &k * &b[1] - &k * &b[2], a2 + &b[2], a2 - &b[1] + &b[2]]
    };
    ProductTorusSpec::new(entries).map(VersalImage::Product)
}
