//! Rational convex polyhedra in H-representation, with a V-representation
//! in the plane.
//!
//! A facet is the half-space `ℓ(x) = ⟨x, v⟩ + λ ≥ 0` with `v` a primitive
//! inward normal. For such a facet `ℓ(x)` is the integral-affine distance of
//! `x` to the facet hyperplane.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::fm::{self, Ineq};
use crate::lattice::{primitivize, IntVec, LatticeError, PrimVec};
use crate::rational::Rational;

pub type Point2 = [Rational; 2];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("polytope needs at least one facet")]
    NoFacets,
    #[error("duplicate facet {index}")]
    DuplicateFacet { index: usize },
    #[error("polytope has empty interior")]
    EmptyInterior,
    #[error("point lies outside the polytope (facet {facet} value {value})")]
    OutsidePolytope { facet: usize, value: String },
    #[error("polytope is unbounded")]
    Unbounded,
    #[error("degenerate polygon: {0}")]
    Degenerate(String),
    #[error("vertex list is not strictly convex and counterclockwise")]
    NotConvex,
    #[error("facet offsets are not all equal")]
    NotMonotone,
    #[error("origin is not an interior point")]
    OriginNotInterior,
    #[error("operation needs a 2D polytope, got dimension {0}")]
    NotPlanar(usize),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Facet {
    pub normal: PrimVec,
    pub offset: Rational,
}

impl Facet {
    pub fn new(normal: PrimVec, offset: Rational) -> Self {
        Facet { normal, offset }
    }

    pub fn from_i64s(normal: &[i64], offset: Rational) -> Result<Self, PolytopeError> {
        Ok(Facet { normal: PrimVec::from_i64s(normal)?, offset })
    }

    pub fn dim(&self) -> usize {
        self.normal.dim()
    }

    /// `ℓ(x) = ⟨x, normal⟩ + offset`
    pub fn value(&self, x: &[Rational]) -> Rational {
        self.normal.dot_rational(x) + &self.offset
    }
}

/// Integral-affine distance `|⟨x, v⟩ + λ|` from `x` to the facet hyperplane.
pub fn dia_hyperplane(x: &[Rational], f: &Facet) -> Result<Rational, PolytopeError> {
    if x.len() != f.dim() {
        return Err(PolytopeError::DimensionMismatch { expected: f.dim(), found: x.len() });
    }
    Ok(f.value(x).abs())
}

/// A polyhedron `{x : ℓ_i(x) ≥ 0}` with nonempty interior.
///
/// In dimension 2 facets are kept sorted counterclockwise by the angle of
/// their normal, measured from `(1, 0)` in `[0, 2π)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPolytope {
    dim: usize,
    facets: Vec<Facet>,
    interior_point: Vec<Rational>,
    bounded: bool,
}

impl RationalPolytope {
    pub fn new(dim: usize, mut facets: Vec<Facet>) -> Result<Self, PolytopeError> {
        if facets.is_empty() {
            return Err(PolytopeError::NoFacets);
        }
        for f in &facets {
            if f.dim() != dim {
                return Err(PolytopeError::DimensionMismatch { expected: dim, found: f.dim() });
            }
        }
        if dim == 2 {
            facets.sort_by(|a, b| angle_cmp(a.normal.coords(), b.normal.coords()));
        }
        for i in 1..facets.len() {
            if facets[..i].contains(&facets[i]) {
                return Err(PolytopeError::DuplicateFacet { index: i });
            }
        }
        // maximize t subject to ℓ_i(x) ≥ t, t ≤ 1
        let sys: Vec<Ineq> = facets
            .iter()
            .map(|f| {
                let mut c = f.normal.to_rational();
                c.push(-Rational::one());
                Ineq::new(c, f.offset.clone())
            })
            .collect();
        let sol = fm::maximize_last(&sys, &Rational::one()).ok_or(PolytopeError::EmptyInterior)?;
        if !sol[dim].is_positive() {
            return Err(PolytopeError::EmptyInterior);
        }
        let interior_point = sol[..dim].to_vec();
        let bounded = recession_cone_is_trivial(dim, &facets);
        Ok(RationalPolytope { dim, facets, interior_point, bounded })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// A point with `ℓ_i > 0` for every facet.
    pub fn interior_point(&self) -> &[Rational] {
        &self.interior_point
    }

    pub fn is_bounded(&self) -> bool {
        self.bounded
    }

    pub fn normals(&self) -> Vec<IntVec> {
        self.facets.iter().map(|f| f.normal.as_int_vec().clone()).collect()
    }

    pub fn values(&self, x: &[Rational]) -> Vec<Rational> {
        self.facets.iter().map(|f| f.value(x)).collect()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.dim && self.facets.iter().all(|f| !f.value(x).is_negative())
    }

    pub fn contains_strictly(&self, x: &[Rational]) -> bool {
        x.len() == self.dim && self.facets.iter().all(|f| f.value(x).is_positive())
    }

    /// The common offset, when all facets share one.
    pub fn common_offset(&self) -> Option<&Rational> {
        let first = &self.facets[0].offset;
        self.facets.iter().all(|f| &f.offset == first).then_some(first)
    }
}

/// `{d : ⟨d, v_i⟩ ≥ 0 ∀i} = {0}`
fn recession_cone_is_trivial(dim: usize, facets: &[Facet]) -> bool {
    let cone: Vec<Ineq> = facets.iter().map(|f| Ineq::new(f.normal.to_rational(), Rational::zero())).collect();
    for j in 0..dim {
        for sign in [1i64, -1] {
            let mut sys = cone.clone();
            let mut c = vec![Rational::zero(); dim];
            c[j] = Rational::from_integer(BigInt::from(sign));
            sys.push(Ineq::new(c, -Rational::one()));
            if fm::feasible(&sys) {
                return false;
            }
        }
    }
    true
}

/// Orders 2D vectors by angle in `[0, 2π)` from the positive x-axis.
fn angle_cmp(a: &[BigInt], b: &[BigInt]) -> Ordering {
    fn half(v: &[BigInt]) -> u8 {
        // upper half including the positive x-axis
        if v[1].is_positive() || (v[1].is_zero() && v[0].is_positive()) {
            0
        } else {
            1
        }
    }
    half(a).cmp(&half(b)).then_with(|| {
        let cross = &a[0] * &b[1] - &a[1] * &b[0];
        BigInt::zero().cmp(&cross)
    })
}

/// `min_i ℓ_i(x)` and the facets attaining it.
pub fn dia_boundary(x: &[Rational], p: &RationalPolytope) -> Result<(Rational, Vec<usize>), PolytopeError> {
    if x.len() != p.dim {
        return Err(PolytopeError::DimensionMismatch { expected: p.dim, found: x.len() });
    }
    let values = p.values(x);
    if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| v.is_negative()) {
        return Err(PolytopeError::OutsidePolytope { facet: i, value: crate::rational::format(v) });
    }
    let min = values.iter().min().expect("nonempty facet list").clone();
    let argmin = values.iter().enumerate().filter(|(_, v)| **v == min).map(|(i, _)| i).collect();
    Ok((min, argmin))
}

pub fn det2(a: &[Rational], b: &[Rational]) -> Rational {
    &a[0] * &b[1] - &a[1] * &b[0]
}

/// A strictly convex polygon, vertices counterclockwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polygon2 {
    vertices: Vec<Point2>,
}

impl Polygon2 {
    pub fn new(vertices: Vec<Point2>) -> Result<Self, PolytopeError> {
        let n = vertices.len();
        if n < 3 {
            return Err(PolytopeError::NotConvex);
        }
        for i in 0..n {
            let a = &vertices[i];
            let b = &vertices[(i + 1) % n];
            let c = &vertices[(i + 2) % n];
            let turn = det2(&sub2(b, a), &sub2(c, b));
            if !turn.is_positive() {
                return Err(PolytopeError::NotConvex);
            }
        }
        // positive turns everywhere also admit a polygon winding twice
        let winding: Rational = (0..n).map(|i| det2(&vertices[i], &vertices[(i + 1) % n])).sum();
        if !winding.is_positive() {
            return Err(PolytopeError::NotConvex);
        }
        let total_angle_ok = {
            // count sign changes of the edge direction's y-coordinate
            let mut upward = 0;
            for i in 0..n {
                let d = sub2(&vertices[(i + 1) % n], &vertices[i]);
                let e = sub2(&vertices[(i + 2) % n], &vertices[(i + 1) % n]);
                if angle_cmp_q(&d, &e) == Ordering::Greater {
                    upward += 1;
                }
            }
            upward == 1
        };
        if !total_angle_ok {
            return Err(PolytopeError::NotConvex);
        }
        Ok(Polygon2 { vertices })
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

fn angle_cmp_q(a: &Point2, b: &Point2) -> Ordering {
    fn half(v: &Point2) -> u8 {
        if v[1].is_positive() || (v[1].is_zero() && v[0].is_positive()) {
            0
        } else {
            1
        }
    }
    half(a).cmp(&half(b)).then_with(|| Rational::zero().cmp(&det2(a, b)))
}

pub fn sub2(a: &Point2, b: &Point2) -> Point2 {
    [&a[0] - &b[0], &a[1] - &b[1]]
}

fn require_planar(p: &RationalPolytope) -> Result<(), PolytopeError> {
    if p.dim != 2 {
        return Err(PolytopeError::NotPlanar(p.dim));
    }
    Ok(())
}

/// Vertices of a bounded polygon; vertex `i` is where facet `i` meets facet
/// `i + 1`, so facet `i` runs from vertex `i - 1` to vertex `i`.
pub fn vertices_2d(p: &RationalPolytope) -> Result<Polygon2, PolytopeError> {
    require_planar(p)?;
    if !p.bounded {
        return Err(PolytopeError::Unbounded);
    }
    let n = p.facets.len();
    let mut verts = Vec::with_capacity(n);
    for i in 0..n {
        let f = &p.facets[i];
        let g = &p.facets[(i + 1) % n];
        let (a, b) = (f.normal.coords(), g.normal.coords());
        let det = &a[0] * &b[1] - &a[1] * &b[0];
        if !det.is_positive() {
            return Err(PolytopeError::Degenerate(format!("facets {i} and {} do not meet in a corner", (i + 1) % n)));
        }
        // solve ⟨x,a⟩ = -λf, ⟨x,b⟩ = -λg
        let det = Rational::from_integer(det);
        let (rf, rg) = (-&f.offset, -&g.offset);
        let x = (&rf * Rational::from_integer(b[1].clone()) - &rg * Rational::from_integer(a[1].clone())) / &det;
        let y = (&rg * Rational::from_integer(a[0].clone()) - &rf * Rational::from_integer(b[0].clone())) / &det;
        let v = [x, y];
        if !p.contains(&v) {
            return Err(PolytopeError::Degenerate(format!("facet {} is redundant", (i + 1) % n)));
        }
        verts.push(v);
    }
    Polygon2::new(verts).map_err(|_| PolytopeError::Degenerate("vertices are not strictly convex".into()))
}

/// H-representation of a convex polygon, normals primitive and inward.
pub fn polytope_from_vertices_2d(poly: &Polygon2) -> Result<RationalPolytope, PolytopeError> {
    let vs = &poly.vertices;
    let n = vs.len();
    let mut facets = Vec::with_capacity(n);
    for i in 0..n {
        let d = sub2(&vs[(i + 1) % n], &vs[i]);
        let (normal, _) = primitivize(&[-d[1].clone(), d[0].clone()])?;
        let offset = -normal.dot_rational(&vs[i]);
        facets.push(Facet { normal, offset });
    }
    RationalPolytope::new(2, facets)
}

/// Chamber of facet `i`: the triangle `(0, V_{i-1}, V_i)` on which facet `i`
/// realises the distance to the boundary.
pub fn chambers_2d(p: &RationalPolytope) -> Result<Vec<(usize, [Point2; 3])>, PolytopeError> {
    require_planar(p)?;
    let offset = p.common_offset().ok_or(PolytopeError::NotMonotone)?;
    if !offset.is_positive() {
        return Err(PolytopeError::OriginNotInterior);
    }
    let poly = vertices_2d(p)?;
    let vs = poly.vertices();
    let n = vs.len();
    let origin = [Rational::zero(), Rational::zero()];
    Ok((0..n).map(|i| (i, [origin.clone(), vs[(i + n - 1) % n].clone(), vs[i].clone()])).collect())
}

/// Closed triangle membership.
pub fn in_triangle(x: &Point2, t: &[Point2; 3]) -> bool {
    let s: Vec<Rational> = (0..3).map(|i| det2(&sub2(&t[(i + 1) % 3], &t[i]), &sub2(x, &t[i]))).collect();
    s.iter().all(|v| !v.is_negative()) || s.iter().all(|v| !v.is_positive())
}

/// Delzant condition in the plane: consecutive normals form a lattice basis.
pub fn is_delzant_2d(p: &RationalPolytope) -> Result<bool, PolytopeError> {
    require_planar(p)?;
    if !p.bounded {
        return Err(PolytopeError::Unbounded);
    }
    let n = p.facets.len();
    Ok((0..n).all(|i| {
        let a = p.facets[i].normal.coords();
        let b = p.facets[(i + 1) % n].normal.coords();
        (&a[0] * &b[1] - &a[1] * &b[0]).abs().is_one()
    }))
}

/// The cone `{(h·x, h) : h > 0, x ∈ Δ}`; facet `⟨x,v⟩ + λ ≥ 0` becomes the
/// linear facet with normal proportional to `(v, λ)`.
pub fn cone_over(p: &RationalPolytope) -> Result<RationalPolytope, PolytopeError> {
    require_planar(p)?;
    if !p.bounded {
        return Err(PolytopeError::Unbounded);
    }
    if p.facets.iter().any(|f| !f.offset.is_positive()) {
        return Err(PolytopeError::OriginNotInterior);
    }
    let facets = p
        .facets
        .iter()
        .map(|f| {
            let mut v = f.normal.to_rational();
            v.push(f.offset.clone());
            let (normal, _) = primitivize(&v)?;
            Ok(Facet { normal, offset: Rational::zero() })
        })
        .collect::<Result<Vec<_>, PolytopeError>>()?;
    RationalPolytope::new(3, facets)
}

/// Δ_{CP²}: normals `(1,0), (0,1), (-1,-1)`, offsets `1/3`.
pub fn delta_cp2() -> RationalPolytope {
    let third = Rational::new(1.into(), 3.into());
    RationalPolytope::new(
        2,
        [[1, 0], [0, 1], [-1, -1]]
            .iter()
            .map(|n| Facet::from_i64s(n, third.clone()).unwrap())
            .collect(),
    )
    .expect("Δ_CP2 is a valid polygon")
}

/// Square `|x_i| ≤ offset` with normals `±e_i`.
pub fn square(offset: Rational) -> RationalPolytope {
    RationalPolytope::new(
        2,
        [[1, 0], [0, 1], [-1, 0], [0, -1]]
            .iter()
            .map(|n| Facet::from_i64s(n, offset.clone()).unwrap())
            .collect(),
    )
    .expect("square is a valid polygon")
}

/// `{x ∈ ℝ^n : x_i ≥ 0}`
pub fn orthant(n: usize) -> RationalPolytope {
    RationalPolytope::new(
        n,
        (0..n)
            .map(|i| Facet { normal: PrimVec::new(IntVec::unit(n, i)).unwrap(), offset: Rational::zero() })
            .collect(),
    )
    .expect("orthant has interior")
}
