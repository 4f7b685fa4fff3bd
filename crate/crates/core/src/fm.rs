//! Fourier–Motzkin elimination over the rationals.
//!
//! Small systems only: the polytopes handled by the crate have a handful of
//! facets in dimension at most a few.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// `coeffs · y + constant ≥ 0`
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Ineq {
    pub coeffs: Vec<Rational>,
    pub constant: Rational,
}

impl Ineq {
    pub fn new(coeffs: Vec<Rational>, constant: Rational) -> Self {
        Ineq { coeffs, constant }.normalized()
    }

    /// Scales so the first nonzero coefficient has absolute value 1, which
    /// lets duplicate constraints be merged.
    fn normalized(mut self) -> Self {
        if let Some(lead) = self.coeffs.iter().find(|c| !c.is_zero()).map(Rational::abs) {
            for c in &mut self.coeffs {
                *c /= &lead;
            }
            self.constant /= &lead;
        }
        self
    }

    fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

fn dedup(mut sys: Vec<Ineq>) -> Vec<Ineq> {
    sys.sort();
    sys.dedup();
    sys
}

/// Eliminates variable `var`, returning the projected system (same arity,
/// coefficient of `var` zero everywhere). `None` if a trivial constraint is
/// violated.
fn eliminate(sys: &[Ineq], var: usize) -> Option<Vec<Ineq>> {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut out = Vec::new();
    for q in sys {
        let c = &q.coeffs[var];
        if c.is_positive() {
            pos.push(q);
        } else if c.is_negative() {
            neg.push(q);
        } else if q.is_trivial() {
            if q.constant.is_negative() {
                return None;
            }
        } else {
            out.push(q.clone());
        }
    }
    for p in &pos {
        for n in &neg {
            let a = &p.coeffs[var];
            let b = -&n.coeffs[var];
            let coeffs = p.coeffs.iter().zip(&n.coeffs).map(|(x, y)| x * &b + y * a).collect();
            let constant = &p.constant * &b + &n.constant * a;
            let q = Ineq::new(coeffs, constant);
            if q.is_trivial() {
                if q.constant.is_negative() {
                    return None;
                }
            } else {
                out.push(q);
            }
        }
    }
    Some(dedup(out))
}

/// Bounds on `var` implied by `sys` once all other variables are fixed to
/// `values` (entries for `var` are ignored).
fn bounds(sys: &[Ineq], var: usize, values: &[Rational]) -> (Option<Rational>, Option<Rational>) {
    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    for q in sys {
        let c = &q.coeffs[var];
        if c.is_zero() {
            continue;
        }
        let rest: Rational = q
            .coeffs
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != var)
            .map(|(j, a)| a * &values[j])
            .sum::<Rational>()
            + &q.constant;
        let bound = -rest / c;
        if c.is_positive() {
            if lo.as_ref().is_none_or(|l| &bound > l) {
                lo = Some(bound);
            }
        } else if hi.as_ref().is_none_or(|h| &bound < h) {
            hi = Some(bound);
        }
    }
    (lo, hi)
}

/// Whether the system has a real solution.
pub(crate) fn feasible(sys: &[Ineq]) -> bool {
    let Some(n) = sys.first().map(|q| q.coeffs.len()) else { return true };
    let mut cur = dedup(sys.to_vec());
    for var in 0..n {
        match eliminate(&cur, var) {
            Some(next) => cur = next,
            None => return false,
        }
    }
    cur.iter().all(|q| !q.constant.is_negative())
}

/// Maximizes the last variable subject to `sys`, returning a maximizer.
///
/// Returns `None` when the system is infeasible. An unbounded last variable
/// is capped at `cap`.
pub(crate) fn maximize_last(sys: &[Ineq], cap: &Rational) -> Option<Vec<Rational>> {
    let n = sys.first()?.coeffs.len();
    let last = n - 1;
    let mut stages = vec![dedup(sys.to_vec())];
    for var in 0..last {
        let next = eliminate(stages.last().unwrap(), var)?;
        stages.push(next);
    }
    let mut values = vec![Rational::zero(); n];
    let final_sys = stages.last().unwrap();
    if final_sys.iter().any(|q| q.is_trivial() && q.constant.is_negative()) {
        return None;
    }
    let (lo, hi) = bounds(final_sys, last, &values);
    let t = match hi {
        Some(h) if &h < cap => h,
        _ => cap.clone(),
    };
    if lo.as_ref().is_some_and(|l| l > &t) {
        return None;
    }
    values[last] = t;
    for var in (0..last).rev() {
        let (lo, hi) = bounds(&stages[var], var, &values);
        values[var] = match (lo, hi) {
            (Some(l), Some(h)) => {
                if l > h {
                    return None;
                }
                (l + h) / Rational::from_integer(2.into())
            }
            (Some(l), None) => l + Rational::one(),
            (None, Some(h)) => h - Rational::one(),
            (None, None) => Rational::zero(),
        };
    }
    Some(values)
}
