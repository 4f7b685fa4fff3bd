//! Smallness predicates for tori placed in a Darboux chart.

use num_traits::Signed;
use thiserror::Error;

use crate::rational::{format, ExtRational, Rational};
use crate::reduction::ProductTorusSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalityError {
    #[error("chart radius must be positive, got {0}")]
    BadRadius(String),
    #[error("sphere bound must be positive, got {0}")]
    BadLambda(String),
    #[error("area must be positive, got {0}")]
    BadArea(String),
}

/// Ball capacity `R` of a Darboux chart and the sphere-area bound `λ_S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartSpec {
    radius: Rational,
    lambda_s: ExtRational,
}

impl ChartSpec {
    pub fn new(radius: Rational, lambda_s: ExtRational) -> Result<Self, LocalityError> {
        if !radius.is_positive() {
            return Err(LocalityError::BadRadius(format(&radius)));
        }
        if let ExtRational::Finite(l) = &lambda_s {
            if !l.is_positive() {
                return Err(LocalityError::BadLambda(format(l)));
            }
        }
        Ok(ChartSpec { radius, lambda_s })
    }

    pub fn radius(&self) -> &Rational {
        &self.radius
    }

    pub fn lambda_s(&self) -> &ExtRational {
        &self.lambda_s
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CsReport {
    pub holds: bool,
    /// `R − (Σa + min a)`; positive iff the capacity bound holds.
    pub slack_capacity: Rational,
    /// `λ_S − min a`; positive iff the sphere bound holds.
    pub slack_sphere: ExtRational,
}

/// `Σa + min a < R` and `min a < λ_S`. When it holds, the displacement
/// energy of the torus in the ambient manifold is `min a`.
pub fn has_property_cs(a: &ProductTorusSpec, chart: &ChartSpec) -> CsReport {
    let m = a.min();
    let slack_capacity = &chart.radius - (a.sum() + m);
    let slack_sphere = chart.lambda_s.minus(m);
    let holds = slack_capacity.is_positive() && chart.lambda_s.exceeds(m);
    CsReport { holds, slack_capacity, slack_sphere }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Upsilon,
    Theta,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Upsilon => "upsilon",
            Family::Theta => "theta",
        }
    }
}

/// `min(R/2, λ_S)` for `Υ` tori and `min(3R/4, λ_S)` for `Θ` tori.
pub fn epsilon_threshold(family: Family, chart: &ChartSpec) -> Rational {
    let scale = match family {
        Family::Upsilon => Rational::new(1.into(), 2.into()),
        Family::Theta => Rational::new(3.into(), 4.into()),
    };
    chart.lambda_s.min_with(&(&chart.radius * scale))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremDReport {
    pub holds: bool,
    /// `a/3 ≤ min(tail)`
    pub tail_bound: bool,
    /// `4a/3 + Σ tail < R`
    pub capacity: bool,
    /// `a/3 < λ_S`
    pub sphere: bool,
    pub slack_capacity: Rational,
    pub slack_sphere: ExtRational,
}

/// Conditions under which `Θ_m(a) × T(a_4, …, a_n)` sits in the chart with
/// its germ intact.
pub fn theorem_d_condition(a: &Rational, tail: &[Rational], chart: &ChartSpec) -> Result<TheoremDReport, LocalityError> {
    if let Some(bad) = std::iter::once(a).chain(tail).find(|x| !x.is_positive()) {
        return Err(LocalityError::BadArea(format(bad)));
    }
    let third = a / Rational::from_integer(3.into());
    let tail_bound = tail.iter().all(|t| &third <= t);
    let load = a * Rational::new(4.into(), 3.into()) + tail.iter().sum::<Rational>();
    let slack_capacity = &chart.radius - load;
    let capacity = slack_capacity.is_positive();
    let sphere = chart.lambda_s.exceeds(&third);
    Ok(TheoremDReport {
        holds: tail_bound && capacity && sphere,
        tail_bound,
        capacity,
        sphere,
        slack_capacity,
        slack_sphere: chart.lambda_s.minus(&third),
    })
}
