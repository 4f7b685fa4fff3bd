//! Displacement-energy germs `c + min_i ⟨b, v_i⟩` and their `GL(n, ℤ)`
//! classification.

use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::atf::{delta_m, AtfError};
use crate::lattice::{
    elementary_divisors, hnf_canonical, hnf_with_transform, integral_index, primitivize, IntMatrix, IntVec,
    LatticeError, UnimodularMap,
};
use crate::markov::{path_to_triple, MarkovError, MarkovTriple};
use crate::polytope::{dia_boundary, PolytopeError, RationalPolytope};
use crate::rational::{format, Rational};
use crate::reduction::{ProductTorusSpec, ReductionError, UpsilonParams};

/// Largest vector set for which the permutation search runs.
pub const SEARCH_CAP: usize = 8;

/// Flag attached when comparing `Υ_2(3a, a)` with `Θ_{(1,1,2)}(3a)`, whose
/// literal germs agree in pairwise indices but not in the triple index.
pub const REMARK_DISCREPANCY_FLAG: &str = "paper-remark-1.7-discrepancy";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GermError {
    #[error("germ needs at least one vector")]
    NoVectors,
    #[error("germ vectors must be nonzero")]
    ZeroVector,
    #[error("germ constant must be positive, got {0}")]
    NonPositiveConstant(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("surviving functional has non-integer linear part")]
    NonIntegerVector,
    #[error("all functional constants must be positive")]
    NonPositiveFunctional,
    #[error("a/3 = {third} exceeds the smallest tail entry {min}")]
    TailTooSmall { third: String, min: String },
    #[error("area must be positive, got {0}")]
    NonPositiveArea(String),
    #[error("point lies on the boundary")]
    OnBoundary,
    #[error("empty piecewise minimum")]
    EmptyPiecewise,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Atf(#[from] AtfError),
    #[error(transparent)]
    Markov(#[from] MarkovError),
}

/// `c + min{⟨b, v⟩ : v ∈ V}` with `V` a nonempty set of nonzero vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Germ {
    constant: Rational,
    vectors: Vec<IntVec>,
}

impl Germ {
    /// Vectors are stored sorted with duplicates merged.
    pub fn new(constant: Rational, mut vectors: Vec<IntVec>) -> Result<Self, GermError> {
        if !constant.is_positive() {
            return Err(GermError::NonPositiveConstant(format(&constant)));
        }
        let n = vectors.first().ok_or(GermError::NoVectors)?.dim();
        if let Some(v) = vectors.iter().find(|v| v.dim() != n) {
            return Err(GermError::DimensionMismatch(n, v.dim()));
        }
        if vectors.iter().any(IntVec::is_zero) {
            return Err(GermError::ZeroVector);
        }
        vectors.sort();
        vectors.dedup();
        Ok(Germ { constant, vectors })
    }

    pub fn constant(&self) -> &Rational {
        &self.constant
    }

    pub fn vectors(&self) -> &[IntVec] {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.vectors[0].dim()
    }

    /// `b ↦ c + min ⟨b, v⟩`
    pub fn evaluate(&self, b: &[Rational]) -> Rational {
        let m = self.vectors.iter().map(|v| v.dot_rational(b)).min().expect("nonempty");
        &self.constant + m
    }

    /// `Φ·G`: every vector mapped by `Φ`.
    pub fn transform(&self, phi: &UnimodularMap) -> Result<Germ, GermError> {
        let vs = self.vectors.iter().map(|v| phi.apply(v)).collect::<Result<Vec<_>, _>>()?;
        Germ::new(self.constant.clone(), vs)
    }

    /// Matrix with the vectors as columns, in stored order.
    pub fn matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(&self.vectors).expect("uniform dimension")
    }
}

impl fmt::Display for Germ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self.vectors.iter().map(ToString::to_string).collect();
        write!(f, "{} + min{{{}}}", format(&self.constant), vs.join(", "))
    }
}

pub fn germ_product_torus(a: &ProductTorusSpec) -> Germ {
    let m = a.min().clone();
    let n = a.dim();
    let vs = a.entries().iter().enumerate().filter(|(_, x)| **x == m).map(|(i, _)| IntVec::unit(n, i)).collect();
    Germ::new(m, vs).expect("positive entries")
}

pub fn germ_toric_fibre(p: &RationalPolytope, x: &[Rational]) -> Result<Germ, GermError> {
    if !p.contains_strictly(x) {
        if p.contains(x) {
            return Err(GermError::OnBoundary);
        }
        return Err(PolytopeError::OutsidePolytope {
            facet: p.values(x).iter().position(Signed::is_negative).unwrap_or(0),
            value: p.values(x).into_iter().min().map(|v| format(&v)).unwrap_or_default(),
        }
        .into());
    }
    let (d, idx) = dia_boundary(x, p)?;
    let vs = idx.iter().map(|&i| p.facets()[i].normal.as_int_vec().clone()).collect();
    Germ::new(d, vs)
}

pub fn germ_upsilon(p: &UpsilonParams) -> Germ {
    let k = p.k();
    let d = p.d();
    let v1 = IntVec::from_i64s(&[1, k, -k]);
    let v2 = IntVec::from_i64s(&[1, 0, -k]);
    let v3 = IntVec::from_i64s(&[0, 0, 1]);
    let (c, vs) = match d.cmp(p.a2()) {
        std::cmp::Ordering::Less => (d, vec![v1, v2]),
        std::cmp::Ordering::Equal => (d, vec![v1, v2, v3]),
        std::cmp::Ordering::Greater => (p.a2().clone(), vec![v3]),
    };
    Germ::new(c, vs).expect("valid parameters give a positive constant")
}

/// How the Θ vectors are normalized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ThetaMode {
    /// `(u, 1)` with constant `a/3`.
    #[default]
    Literal,
    /// Primitive normals of the cone over `Δ_m`: `(3u, 1)` with constant `a`.
    Cone,
}

/// Ordered facet normals of the Markov triangle of `m`.
pub fn markov_normals(m: &MarkovTriple) -> Result<Vec<IntVec>, GermError> {
    let path = path_to_triple(*m)?;
    let (d, _) = delta_m(&path)?;
    Ok(d.polytope().normals())
}

fn theta_vectors(normals: &[IntVec], mode: ThetaMode, extra: usize) -> Result<Vec<IntVec>, GermError> {
    let third = Rational::new(1.into(), 3.into());
    normals
        .iter()
        .map(|u| {
            let v = match mode {
                ThetaMode::Literal => u.extended(&[BigInt::one()]),
                ThetaMode::Cone => {
                    let mut q = u.to_rational();
                    q.push(third.clone());
                    primitivize(&q)?.0.into_int_vec()
                }
            };
            Ok(v.extended(&vec![BigInt::zero(); extra]))
        })
        .collect()
}

pub fn germ_theta_from_normals(normals: &[IntVec], a: &Rational, mode: ThetaMode) -> Result<Germ, GermError> {
    if !a.is_positive() {
        return Err(GermError::NonPositiveArea(format(a)));
    }
    let c = match mode {
        ThetaMode::Literal => a / Rational::from_integer(3.into()),
        ThetaMode::Cone => a.clone(),
    };
    Germ::new(c, theta_vectors(normals, mode, 0)?)
}

pub fn germ_theta(m: &MarkovTriple, a: &Rational) -> Result<Germ, GermError> {
    germ_theta_from_normals(&markov_normals(m)?, a, ThetaMode::Literal)
}

pub fn germ_theta_product(m: &MarkovTriple, a: &Rational, tail: &[Rational]) -> Result<Germ, GermError> {
    germ_theta_product_from_normals(&markov_normals(m)?, a, tail)
}

pub fn germ_theta_product_from_normals(
    normals: &[IntVec],
    a: &Rational,
    tail: &[Rational],
) -> Result<Germ, GermError> {
    if !a.is_positive() {
        return Err(GermError::NonPositiveArea(format(a)));
    }
    if let Some(bad) = tail.iter().find(|t| !t.is_positive()) {
        return Err(GermError::NonPositiveArea(format(bad)));
    }
    let third = a / Rational::from_integer(3.into());
    if let Some(min) = tail.iter().min() {
        if &third > min {
            return Err(GermError::TailTooSmall { third: format(&third), min: format(min) });
        }
    }
    let n = 3 + tail.len();
    let mut vs = theta_vectors(normals, ThetaMode::Literal, tail.len())?;
    vs.extend(tail.iter().enumerate().filter(|(_, t)| **t == third).map(|(i, _)| IntVec::unit(n, 3 + i)));
    Germ::new(third, vs)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineFunctional {
    pub constant: Rational,
    pub vector: Vec<Rational>,
}

impl AffineFunctional {
    pub fn from_ints(constant: Rational, vector: &[i64]) -> Self {
        AffineFunctional { constant, vector: vector.iter().map(|&x| Rational::from_integer(x.into())).collect() }
    }
}

/// Open region of flux space on which a piece applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    Everywhere,
    /// `b_i > 0` (0-based `i`).
    Positive(usize),
    /// `b_i < 0` (0-based `i`).
    Negative(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseMin {
    pub pieces: Vec<(Region, Vec<AffineFunctional>)>,
}

/// The displacement energy of the product tori along the versal family,
/// one piece per side of the wall `b2 = 0`.
pub fn upsilon_versal_pieces(p: &UpsilonParams) -> PiecewiseMin {
    let k = p.k();
    let d = p.d();
    let a2 = p.a2().clone();
    let f = AffineFunctional::from_ints;
    PiecewiseMin {
        pieces: vec![
            (Region::Positive(1), vec![f(d.clone(), &[1, 0, -k]), f(a2.clone(), &[0, 1, 1]), f(a2.clone(), &[0, 0, 1])]),
            (Region::Negative(1), vec![f(d, &[1, k, -k]), f(a2.clone(), &[0, 0, 1]), f(a2, &[0, -1, 1])]),
        ],
    }
}

/// Whether `g ≤ f` on the closure of `region`, for functionals with equal
/// constants.
fn dominated_by(f: &AffineFunctional, g: &AffineFunctional, region: Region) -> bool {
    let diff: Vec<Rational> = f.vector.iter().zip(&g.vector).map(|(x, y)| x - y).collect();
    let only = |i: usize| diff.iter().enumerate().all(|(j, x)| j == i || x.is_zero());
    match region {
        Region::Everywhere => diff.iter().all(Zero::is_zero),
        Region::Positive(i) => only(i) && !diff[i].is_negative(),
        Region::Negative(i) => only(i) && !diff[i].is_positive(),
    }
}

pub fn extract_germ(pw: &PiecewiseMin) -> Result<Germ, GermError> {
    let all = pw.pieces.iter().flat_map(|(_, fs)| fs);
    if all.clone().any(|f| !f.constant.is_positive()) {
        return Err(GermError::NonPositiveFunctional);
    }
    let c = all.map(|f| &f.constant).min().ok_or(GermError::EmptyPiecewise)?.clone();
    let mut vectors = Vec::new();
    for (region, fs) in &pw.pieces {
        let mut active: Vec<&AffineFunctional> = fs.iter().filter(|f| f.constant == c).collect();
        active.dedup_by(|a, b| a.vector == b.vector);
        for (i, f) in active.iter().enumerate() {
            let dominated = active.iter().enumerate().any(|(j, g)| j != i && g.vector != f.vector && dominated_by(f, g, *region));
            if dominated {
                continue;
            }
            let coords = f
                .vector
                .iter()
                .map(|x| x.is_integer().then(|| x.to_integer()).ok_or(GermError::NonIntegerVector))
                .collect::<Result<Vec<_>, _>>()?;
            vectors.push(IntVec::new(coords)?);
        }
    }
    Germ::new(c, vectors)
}

/// Unimodular invariants of a germ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GermInvariants {
    pub constant: Rational,
    pub dim: usize,
    pub count: usize,
    /// Sorted integral indices of all pairs of vectors (`n ≥ 2`).
    pub pairwise_index: Vec<BigInt>,
    /// Sorted integral indices of all triples of vectors (`n ≥ 3`).
    pub triple_index: Vec<BigInt>,
    /// gcd of the maximal minors of the whole vector matrix.
    pub full_index: BigInt,
    /// Lexicographically least Hermite form over all column orders; `None`
    /// above [`SEARCH_CAP`] vectors.
    pub canonical: Option<IntMatrix>,
}

fn subset_indices(vs: &[IntVec], size: usize) -> Vec<BigInt> {
    if vs.is_empty() || size > vs[0].dim() {
        return Vec::new();
    }
    let mut out: Vec<BigInt> = vs
        .iter()
        .cloned()
        .combinations(size)
        .map(|c| integral_index(&c).expect("size at most the dimension"))
        .collect();
    out.sort();
    out
}

fn full_index(vs: &[IntVec]) -> BigInt {
    let n = vs[0].dim();
    if vs.len() <= n {
        return integral_index(vs).expect("size at most the dimension");
    }
    let m = IntMatrix::from_columns(vs).expect("uniform dimension");
    let divs = elementary_divisors(&m);
    if divs.iter().any(Zero::is_zero) {
        BigInt::zero()
    } else {
        divs.iter().product()
    }
}

fn columns_in_order(vs: &[IntVec], order: &[usize]) -> IntMatrix {
    let cols: Vec<IntVec> = order.iter().map(|&i| vs[i].clone()).collect();
    IntMatrix::from_columns(&cols).expect("uniform dimension")
}

fn canonical_form(vs: &[IntVec]) -> Option<IntMatrix> {
    if vs.len() > SEARCH_CAP {
        return None;
    }
    (0..vs.len())
        .permutations(vs.len())
        .map(|p| hnf_canonical(&columns_in_order(vs, &p)))
        .min_by(|a, b| a.entries().cmp(b.entries()))
}

pub fn germ_invariants(g: &Germ) -> GermInvariants {
    let vs = g.vectors();
    GermInvariants {
        constant: g.constant.clone(),
        dim: g.dim(),
        count: vs.len(),
        pairwise_index: subset_indices(vs, 2),
        triple_index: subset_indices(vs, 3),
        full_index: full_index(vs),
        canonical: canonical_form(vs),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvariantKind {
    Constant,
    Cardinality,
    PairwiseIndex,
    TripleIndex,
    FullIndex,
    CanonicalForm,
}

impl InvariantKind {
    pub fn name(self) -> &'static str {
        match self {
            InvariantKind::Constant => "constant",
            InvariantKind::Cardinality => "cardinality",
            InvariantKind::PairwiseIndex => "pairwise_index",
            InvariantKind::TripleIndex => "triple_index",
            InvariantKind::FullIndex => "full_index",
            InvariantKind::CanonicalForm => "canonical_form",
        }
    }
}

/// Value of an invariant on one side of a comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InvariantValue {
    Rational(Rational),
    Count(usize),
    Indices(Vec<BigInt>),
    Index(BigInt),
    Matrix(Option<IntMatrix>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    /// `Φ` maps the left vector set onto the right one.
    Equivalent { witness: UnimodularMap },
    Inequivalent { invariant: InvariantKind, left: InvariantValue, right: InvariantValue },
    /// All invariants agree but the set is too large to search.
    Undecided,
}

impl Equivalence {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Equivalence::Equivalent { .. })
    }
}

fn first_difference(a: &GermInvariants, b: &GermInvariants) -> Option<(InvariantKind, InvariantValue, InvariantValue)> {
    use InvariantKind as K;
    use InvariantValue as V;
    let checks = [
        (K::Constant, V::Rational(a.constant.clone()), V::Rational(b.constant.clone())),
        (K::Cardinality, V::Count(a.count), V::Count(b.count)),
        (K::PairwiseIndex, V::Indices(a.pairwise_index.clone()), V::Indices(b.pairwise_index.clone())),
        (K::TripleIndex, V::Indices(a.triple_index.clone()), V::Indices(b.triple_index.clone())),
        (K::FullIndex, V::Index(a.full_index.clone()), V::Index(b.full_index.clone())),
        (K::CanonicalForm, V::Matrix(a.canonical.clone()), V::Matrix(b.canonical.clone())),
    ];
    checks.into_iter().find(|(_, l, r)| l != r)
}

/// Decides whether some `Φ ∈ GL(n, ℤ)` carries the vectors of `g` onto those
/// of `h` (with equal constants). The witness belongs to the
/// lexicographically first matching column order of `h`.
pub fn germ_equivalent(g: &Germ, h: &Germ) -> Result<Equivalence, GermError> {
    if g.dim() != h.dim() {
        return Err(GermError::DimensionMismatch(g.dim(), h.dim()));
    }
    let (a, b) = (germ_invariants(g), germ_invariants(h));
    if let Some((invariant, left, right)) = first_difference(&a, &b) {
        return Ok(Equivalence::Inequivalent { invariant, left, right });
    }
    if g.vectors.len() > SEARCH_CAP {
        return Ok(Equivalence::Undecided);
    }
    let (target, u1) = hnf_with_transform(&g.matrix());
    let n = g.vectors.len();
    for order in (0..n).permutations(n) {
        let (form, u2) = hnf_with_transform(&columns_in_order(&h.vectors, &order));
        if form != target {
            continue;
        }
        let u2_inv = UnimodularMap::new(u2)?.inverse();
        let witness = u2_inv.compose(&UnimodularMap::new(u1)?)?;
        let image = g.transform(&witness)?;
        assert_eq!(image.vectors, h.vectors, "witness verification");
        return Ok(Equivalence::Equivalent { witness });
    }
    unreachable!("equal canonical forms imply a matching order")
}

/// Where a germ came from, for reporting known discrepancies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GermSource {
    Upsilon { k: i64, a1: Rational, a2: Rational },
    Theta { triple: [u64; 3], area: Rational },
}

/// Flags comparisons of `Υ_2(3a, a)` against the literal `Θ_{(1,1,2)}(3a)`.
pub fn known_discrepancy(left: &GermSource, right: &GermSource) -> Option<&'static str> {
    let matches = |u: &GermSource, t: &GermSource| match (u, t) {
        (GermSource::Upsilon { k, a1, a2 }, GermSource::Theta { triple, area }) => {
            let mut t = *triple;
            t.sort_unstable();
            *k == 2 && *a1 == a2 * Rational::from_integer(3.into()) && t == [1, 1, 2] && area == a1
        }
        _ => false,
    };
    (matches(left, right) || matches(right, left)).then_some(REMARK_DISCREPANCY_FLAG)
}
