//! Almost toric base diagrams and their mutations.
//!
//! A diagram is a planar polygon decorated with nodes. Each node carries a
//! primitive direction `w` along the line joining it to the center (the
//! origin); its branch cut runs from the node in direction `-w` to the
//! boundary. Mutating at a node applies the piecewise shear `τ` with
//! eigenline `ℝw`, after which the cut points the other way.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::lattice::{primitivize, IntVec, PrimVec};
use crate::markov::{MarkovError, MarkovTriple};
use crate::polytope::{
    dia_boundary, polytope_from_vertices_2d, sub2, vertices_2d, Point2, Polygon2, PolytopeError, RationalPolytope,
};
use crate::rational::{format, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AtfError {
    #[error("cut line of node {node} does not pass through the center")]
    CutNotThroughCenter { node: usize },
    #[error("node {other} lies on the cut line of node {node}")]
    NodeCollision { node: usize, other: usize },
    #[error("cut line of node {node} leaves the polygon through a vertex")]
    CutThroughVertex { node: usize },
    #[error("cut of node {node} does not end at a vertex")]
    CutMissesVertex { node: usize },
    #[error("node index {0} out of range")]
    NoSuchNode(usize),
    #[error("node {0} is not in the interior of the polygon")]
    NodeOutside(usize),
    #[error("cuts of nodes {0} and {1} intersect")]
    CutsIntersect(usize, usize),
    #[error("mutated polygon is not convex")]
    NotConvexImage,
    #[error("no node carries Markov number {0}")]
    NoNodeForEntry(u64),
    #[error("vertex at node {node} is not a Markov corner (det {det})")]
    NotMarkovCorner { node: usize, det: BigInt },
    #[error("diagram must be planar")]
    NotPlanar,
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Markov(#[from] MarkovError),
}

/// Which side of the eigenline a mutation moves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Half {
    /// `det(w|x) ≥ 0` moves by `σ_w`.
    #[default]
    Plus,
    /// `det(w|x) ≤ 0` moves by `σ_w⁻¹`.
    Minus,
}

impl Half {
    pub fn symbol(self) -> &'static str {
        match self {
            Half::Plus => "+",
            Half::Minus => "-",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        match s {
            "+" => Some(Half::Plus),
            "-" | "−" => Some(Half::Minus),
            _ => None,
        }
    }
}

fn q(n: &BigInt) -> Rational {
    Rational::from_integer(n.clone())
}

/// `det(w|x) = w1·x2 − w2·x1`
pub fn det_wx(w: &IntVec, x: &Point2) -> Rational {
    let c = w.coords();
    q(&c[0]) * &x[1] - q(&c[1]) * &x[0]
}

/// `σ_w(x) = x − det(w|x)·w` on the half `det(w|x) ≥ 0`, identity elsewhere.
pub fn shear(w: &PrimVec, x: &Point2) -> Point2 {
    let d = det_wx(w, x);
    if d.is_negative() {
        return x.clone();
    }
    linear_shear(w, x, &d)
}

fn linear_shear(w: &IntVec, x: &Point2, d: &Rational) -> Point2 {
    let c = w.coords();
    [&x[0] - d * q(&c[0]), &x[1] - d * q(&c[1])]
}

/// Pullback of a covector under the linear shear: `⟨σ_w x, v⟩ = ⟨x, σ_w* v⟩`.
pub fn shear_dual(w: &PrimVec, v: &IntVec) -> IntVec {
    let c = w.coords();
    let wv = w.dot(v);
    let vc = v.coords();
    IntVec::new(vec![&vc[0] + &wv * &c[1], &vc[1] - &wv * &c[0]]).expect("planar vector")
}

/// Integer image of a direction under `σ_w` (`inverse = false`) or `σ_w⁻¹`.
fn shear_vector(w: &IntVec, v: &IntVec, inverse: bool) -> IntVec {
    let c = w.coords();
    let vc = v.coords();
    let d = &c[0] * &vc[1] - &c[1] * &vc[0];
    let d = if inverse { -d } else { d };
    IntVec::new(vec![&vc[0] - &d * &c[0], &vc[1] - &d * &c[1]]).expect("planar vector")
}

/// The piecewise map `τ` of one mutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mutation {
    pub w: PrimVec,
    pub sheared_half: Half,
}

impl Mutation {
    pub fn apply(&self, x: &Point2) -> Point2 {
        let d = det_wx(&self.w, x);
        match self.sheared_half {
            Half::Plus if !d.is_negative() => linear_shear(&self.w, x, &d),
            Half::Minus if d.is_negative() => linear_shear(&self.w, x, &-d),
            _ => x.clone(),
        }
    }

    fn moves(&self, x: &Point2) -> bool {
        let d = det_wx(&self.w, x);
        match self.sheared_half {
            Half::Plus => d.is_positive(),
            Half::Minus => d.is_negative(),
        }
    }

    fn apply_direction(&self, x: &Point2, v: &IntVec) -> IntVec {
        if !self.moves(x) {
            return v.clone();
        }
        shear_vector(&self.w, v, self.sheared_half == Half::Minus)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub position: Point2,
    /// Mutation direction `w`; the branch cut itself points along `-w`.
    pub cut: PrimVec,
    pub sheared_half: Half,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtfDiagram {
    polytope: RationalPolytope,
    nodes: Vec<Node>,
}

impl AtfDiagram {
    pub fn new(polytope: RationalPolytope, nodes: Vec<Node>) -> Result<Self, AtfError> {
        if polytope.dim() != 2 || nodes.iter().any(|n| n.cut.dim() != 2) {
            return Err(AtfError::NotPlanar);
        }
        for (i, n) in nodes.iter().enumerate() {
            if !polytope.contains_strictly(&n.position) {
                return Err(AtfError::NodeOutside(i));
            }
        }
        let d = AtfDiagram { polytope, nodes };
        let segments: Vec<[Point2; 2]> = (0..d.nodes.len()).map(|i| d.cut_segment(i)).collect();
        for i in 0..segments.len() {
            for j in i + 1..segments.len() {
                if segments_intersect(&segments[i], &segments[j]) {
                    return Err(AtfError::CutsIntersect(i, j));
                }
            }
        }
        Ok(d)
    }

    pub fn polytope(&self) -> &RationalPolytope {
        &self.polytope
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// Branch cut of node `i`: from the node along `-w` to the boundary.
    pub fn cut_segment(&self, i: usize) -> [Point2; 2] {
        let n = &self.nodes[i];
        let dir = n.cut.neg().to_rational();
        let pos = &n.position;
        let mut t_max: Option<Rational> = None;
        for f in self.polytope.facets() {
            let rate = f.normal.dot_rational(&dir);
            if rate.is_negative() {
                let t = f.value(pos) / -rate;
                if t_max.as_ref().is_none_or(|m| &t < m) {
                    t_max = Some(t);
                }
            }
        }
        let t = t_max.expect("bounded diagram");
        let end = [&pos[0] + &t * &dir[0], &pos[1] + &t * &dir[1]];
        [pos.clone(), end]
    }

    /// Index `k` of the polygon vertex where the cut of node `i` ends; the
    /// vertex joins facets `k` and `k + 1`.
    pub fn node_vertex(&self, i: usize) -> Result<usize, AtfError> {
        let node = self.nodes.get(i).ok_or(AtfError::NoSuchNode(i))?;
        let poly = vertices_2d(&self.polytope)?;
        let w = node.cut.as_int_vec();
        poly.vertices()
            .iter()
            .position(|v| det_wx(w, v).is_zero() && w.dot_rational(v).is_negative())
            .ok_or(AtfError::CutMissesVertex { node: i })
    }

    /// `p` with `det(n_k|n_{k+1}) = p²` at the corner of node `i`.
    pub fn node_markov_number(&self, i: usize) -> Result<u64, AtfError> {
        let k = self.node_vertex(i)?;
        let ns = self.polytope.normals();
        let (a, b) = (&ns[k], &ns[(k + 1) % ns.len()]);
        let det = det_int(a, b);
        let root = det.sqrt();
        if &root * &root != det || !det.is_positive() {
            return Err(AtfError::NotMarkovCorner { node: i, det });
        }
        u64::try_from(&root).map_err(|_| AtfError::Markov(MarkovError::Overflow))
    }
}

impl fmt::Display for AtfDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let facets: Vec<String> =
            self.polytope.facets().iter().map(|x| format!("{}+{}", x.normal, format(&x.offset))).collect();
        write!(f, "diagram[{}; {} nodes]", facets.join(", "), self.nodes.len())
    }
}

pub fn det_int(a: &IntVec, b: &IntVec) -> BigInt {
    let (a, b) = (a.coords(), b.coords());
    &a[0] * &b[1] - &a[1] * &b[0]
}

fn orient(a: &Point2, b: &Point2, c: &Point2) -> Rational {
    crate::polytope::det2(&sub2(b, a), &sub2(c, a))
}

fn on_segment(p: &Point2, s: &[Point2; 2]) -> bool {
    let lo = |i: usize| s[0][i].clone().min(s[1][i].clone());
    let hi = |i: usize| s[0][i].clone().max(s[1][i].clone());
    orient(&s[0], &s[1], p).is_zero() && (0..2).all(|i| lo(i) <= p[i] && p[i] <= hi(i))
}

fn segments_intersect(s: &[Point2; 2], t: &[Point2; 2]) -> bool {
    let d1 = orient(&t[0], &t[1], &s[0]);
    let d2 = orient(&t[0], &t[1], &s[1]);
    let d3 = orient(&s[0], &s[1], &t[0]);
    let d4 = orient(&s[0], &s[1], &t[1]);
    if ((d1.is_positive() && d2.is_negative()) || (d1.is_negative() && d2.is_positive()))
        && ((d3.is_positive() && d4.is_negative()) || (d3.is_negative() && d4.is_positive()))
    {
        return true;
    }
    on_segment(&s[0], t) || on_segment(&s[1], t) || on_segment(&t[0], s) || on_segment(&t[1], s)
}

/// Δ_{CP²} with one node halfway between each corner and the origin.
pub fn cp2_diagram() -> AtfDiagram {
    let polytope = crate::polytope::delta_cp2();
    let poly = vertices_2d(&polytope).expect("bounded");
    let half = Rational::new(1.into(), 2.into());
    let nodes = poly
        .vertices()
        .iter()
        .map(|v| {
            let (cut, _) = primitivize(&[-v[0].clone(), -v[1].clone()]).expect("corner is not the origin");
            Node { position: [&v[0] * &half, &v[1] * &half], cut, sheared_half: Half::Plus }
        })
        .collect();
    AtfDiagram::new(polytope, nodes).expect("valid CP2 diagram")
}

fn simplify_cycle(mut pts: Vec<Point2>) -> Vec<Point2> {
    loop {
        let n = pts.len();
        if n < 3 {
            return pts;
        }
        let drop = (0..n).find(|&i| {
            let prev = &pts[(i + n - 1) % n];
            let next = &pts[(i + 1) % n];
            pts[i] == *next || orient(prev, &pts[i], next).is_zero()
        });
        match drop {
            Some(i) => {
                pts.remove(i);
            }
            None => return pts,
        }
    }
}

/// Mutates the diagram at node `i`; returns the image diagram and `τ`.
pub fn mutate_diagram(d: &AtfDiagram, i: usize) -> Result<(AtfDiagram, Mutation), AtfError> {
    let node = d.nodes.get(i).ok_or(AtfError::NoSuchNode(i))?;
    let w = node.cut.as_int_vec();
    if !det_wx(w, &node.position).is_zero() {
        return Err(AtfError::CutNotThroughCenter { node: i });
    }
    for (j, other) in d.nodes.iter().enumerate() {
        if j != i && det_wx(w, &other.position).is_zero() {
            return Err(AtfError::NodeCollision { node: i, other: j });
        }
    }
    let poly = vertices_2d(&d.polytope)?;
    let vs = poly.vertices();
    if vs.iter().any(|v| det_wx(w, v).is_zero() && w.dot_rational(v).is_positive()) {
        return Err(AtfError::CutThroughVertex { node: i });
    }
    let old_vertex = &vs[d.node_vertex(i)?];

    let tau = Mutation { w: node.cut.clone(), sheared_half: node.sheared_half };
    let n = vs.len();
    let mut image = Vec::with_capacity(n + 2);
    let mut far_point = None;
    for j in 0..n {
        let (a, b) = (&vs[j], &vs[(j + 1) % n]);
        image.push(tau.apply(a));
        let (da, db) = (det_wx(w, a), det_wx(w, b));
        if (da.is_positive() && db.is_negative()) || (da.is_negative() && db.is_positive()) {
            let t = &da / (&da - &db);
            let x = [&a[0] + &t * (&b[0] - &a[0]), &a[1] + &t * (&b[1] - &a[1])];
            if w.dot_rational(&x).is_positive() {
                far_point = Some(x.clone());
            }
            image.push(x);
        }
    }
    let far_point = far_point.ok_or(AtfError::CutThroughVertex { node: i })?;
    let polygon = Polygon2::new(simplify_cycle(image)).map_err(|_| AtfError::NotConvexImage)?;
    let polytope = polytope_from_vertices_2d(&polygon)?;

    // slide node i to the same relative position on the far side
    let s = w.dot_rational(&node.position) / w.dot_rational(old_vertex);
    let mut nodes = Vec::with_capacity(d.nodes.len());
    for (j, other) in d.nodes.iter().enumerate() {
        if j == i {
            nodes.push(Node {
                position: [&s * &far_point[0], &s * &far_point[1]],
                cut: node.cut.neg(),
                sheared_half: node.sheared_half,
            });
        } else {
            let cut = tau.apply_direction(&other.position, other.cut.as_int_vec());
            nodes.push(Node {
                position: tau.apply(&other.position),
                cut: PrimVec::new(cut).expect("unimodular image of a primitive vector"),
                sheared_half: other.sheared_half,
            });
        }
    }
    Ok((AtfDiagram::new(polytope, nodes)?, tau))
}

/// Diagram reached from Δ_{CP²} by following tree slots (1-based positions
/// in the ascending triple), together with the Markov triple reached.
pub fn delta_m(path: &[usize]) -> Result<(AtfDiagram, MarkovTriple), AtfError> {
    let steps = delta_m_steps(path)?;
    let (d, t, _) = steps.into_iter().last().expect("at least the root");
    Ok((d, t))
}

/// Every intermediate diagram of [`delta_m`], with the mutation that
/// produced it (`None` for the root).
pub fn delta_m_steps(path: &[usize]) -> Result<Vec<(AtfDiagram, MarkovTriple, Option<Mutation>)>, AtfError> {
    let mut d = cp2_diagram();
    let mut t = MarkovTriple::root();
    let mut out = vec![(d.clone(), t, None)];
    for &slot in path {
        let entry = *t.entries().get(slot.wrapping_sub(1)).ok_or(MarkovError::BadSlot(slot))?;
        let mut node = None;
        for k in 0..d.nodes.len() {
            if d.node_markov_number(k)? == entry {
                node = Some(k);
                break;
            }
        }
        let node = node.ok_or(AtfError::NoNodeForEntry(entry))?;
        let (next, tau) = mutate_diagram(&d, node)?;
        t = t.mutate(slot)?.sorted();
        d = next;
        out.push((d.clone(), t, Some(tau)));
    }
    Ok(out)
}

/// Consecutive normal determinants `(det(u|v), det(v|w), det(w|u))`.
pub fn corner_determinants(p: &RationalPolytope) -> Vec<BigInt> {
    let ns = p.normals();
    let n = ns.len();
    (0..n).map(|i| det_int(&ns[i], &ns[(i + 1) % n])).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceFailure {
    pub point: Point2,
    pub before: Rational,
    pub after: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceReport {
    pub samples: usize,
    pub failures: Vec<InvarianceFailure>,
}

impl InvarianceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Rational points of a polygon as barycentric combinations of its
/// vertices with small integer weights, drawn from `seed`.
pub fn sample_points(poly: &Polygon2, count: usize, seed: u64) -> Vec<Point2> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vs = poly.vertices();
    (0..count)
        .map(|_| {
            let mut weights: Vec<i64> = vs.iter().map(|_| rng.gen_range(0..=12)).collect();
            if weights.iter().all(|&x| x == 0) {
                weights[0] = 1;
            }
            let total = Rational::from_integer(weights.iter().sum::<i64>().into());
            let mut p = [Rational::zero(), Rational::zero()];
            for (v, &wt) in vs.iter().zip(&weights) {
                let wt = Rational::from_integer(wt.into());
                p[0] += &v[0] * &wt;
                p[1] += &v[1] * &wt;
            }
            [&p[0] / &total, &p[1] / &total]
        })
        .collect()
}

/// Checks `d_IA(x, ∂D) = d_IA(τ(x), ∂D′)` exactly on seeded samples of `D`.
pub fn check_dia_invariance(
    before: &AtfDiagram,
    after: &AtfDiagram,
    tau: &Mutation,
    samples: usize,
    seed: u64,
) -> Result<InvarianceReport, AtfError> {
    let poly = vertices_2d(&before.polytope)?;
    let mut points = sample_points(&poly, samples, seed);
    if let Some(first) = points.first_mut() {
        *first = [Rational::zero(), Rational::zero()];
    }
    let failures = points
        .par_iter()
        .filter_map(|x| {
            let (d0, _) = dia_boundary(x, &before.polytope).expect("sample lies in the polygon");
            let d1 = dia_boundary(&tau.apply(x), &after.polytope).ok().map(|(d, _)| d);
            (d1.as_ref() != Some(&d0)).then(|| InvarianceFailure { point: x.clone(), before: d0, after: d1 })
        })
        .collect();
    Ok(InvarianceReport { samples: points.len(), failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{delta_cp2, is_delzant_2d};
    use crate::rational::{int, ratio};

    fn p(c: &[i64]) -> PrimVec {
        PrimVec::from_i64s(c).unwrap()
    }

    fn v(c: &[i64]) -> IntVec {
        IntVec::from_i64s(c)
    }

    #[test]
    fn shear_examples() {
        assert_eq!(shear(&p(&[0, 1]), &[int(2), int(1)]), [int(2), int(1)]);
        assert_eq!(shear(&p(&[1, 1]), &[int(3), int(3)]), [int(3), int(3)]);
        assert_eq!(shear(&p(&[0, 1]), &[int(-2), int(1)]), [int(-2), int(-1)]);
    }

    #[test]
    fn shear_dual_examples() {
        assert_eq!(shear_dual(&p(&[0, 1]), &v(&[1, 0])), v(&[1, 0]));
        assert_eq!(shear_dual(&p(&[1, 1]), &v(&[-1, -1])), v(&[-3, 1]));
    }

    #[test]
    fn shear_dual_adjoint_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0;
        while checked < 100 {
            let w = [rng.gen_range(-5..=5i64), rng.gen_range(-5..=5i64)];
            let Ok(w) = PrimVec::from_i64s(&w) else { continue };
            let vv = v(&[rng.gen_range(-9..=9), rng.gen_range(-9..=9)]);
            let x = [ratio(rng.gen_range(-20..=20), rng.gen_range(1..=7)), ratio(rng.gen_range(-20..=20), 3)];
            if det_wx(&w, &x).is_negative() {
                continue;
            }
            let lhs = vv.dot_rational(&shear(&w, &x));
            let rhs = shear_dual(&w, &vv).dot_rational(&x);
            assert_eq!(lhs, rhs);
            checked += 1;
        }
    }

    #[test]
    fn cp2_single_mutation() {
        let d = cp2_diagram();
        assert_eq!(d.nodes()[0].cut, p(&[1, 1]));
        let (m, tau) = mutate_diagram(&d, 0).unwrap();
        assert_eq!(tau.w, p(&[1, 1]));
        let mut normals = m.polytope().normals();
        normals.sort();
        let mut want = vec![v(&[0, 1]), v(&[-1, -1]), v(&[1, -3])];
        want.sort();
        assert_eq!(normals, want);
        assert!(m.polytope().facets().iter().all(|f| f.offset == ratio(1, 3)));
        let mut dets = corner_determinants(m.polytope());
        dets.sort();
        assert_eq!(dets, vec![BigInt::from(1), BigInt::from(1), BigInt::from(4)]);
        assert!(!is_delzant_2d(m.polytope()).unwrap());
        // node 0 moved to the new corner (1/6, 1/6) side and reversed its cut
        assert_eq!(m.nodes()[0].cut, p(&[-1, -1]));
        assert_eq!(m.nodes()[0].position, [ratio(1, 12), ratio(1, 12)]);
        assert_eq!(m.node_markov_number(0).unwrap(), 2);
    }

    #[test]
    fn double_mutation_is_a_global_shear() {
        let d = cp2_diagram();
        let (m1, tau) = mutate_diagram(&d, 0).unwrap();
        let (m2, _) = mutate_diagram(&m1, 0).unwrap();
        let mut got = vertices_2d(m2.polytope()).unwrap().vertices().to_vec();
        let w = tau.w.as_int_vec();
        let mut want: Vec<Point2> = vertices_2d(&delta_cp2())
            .unwrap()
            .vertices()
            .iter()
            .map(|x| linear_shear(w, x, &det_wx(w, x)))
            .collect();
        got.sort();
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn minus_half_convention_differs_by_global_shear() {
        let mut d = cp2_diagram();
        let mut nodes = d.nodes().to_vec();
        nodes[0].sheared_half = Half::Minus;
        d = AtfDiagram::new(d.polytope().clone(), nodes).unwrap();
        let (m, tau) = mutate_diagram(&d, 0).unwrap();
        assert_eq!(tau.sheared_half, Half::Minus);
        let (plus, _) = mutate_diagram(&cp2_diagram(), 0).unwrap();
        let w = tau.w.as_int_vec();
        let mut want: Vec<Point2> = vertices_2d(plus.polytope())
            .unwrap()
            .vertices()
            .iter()
            .map(|x| linear_shear(w, x, &-det_wx(w, x)))
            .collect();
        let mut got = vertices_2d(m.polytope()).unwrap().vertices().to_vec();
        got.sort();
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn mutation_errors() {
        let d = cp2_diagram();
        let mut nodes = d.nodes().to_vec();
        nodes[0].cut = p(&[1, 0]);
        let bad = AtfDiagram::new(d.polytope().clone(), nodes).unwrap();
        assert_eq!(mutate_diagram(&bad, 0).unwrap_err(), AtfError::CutNotThroughCenter { node: 0 });
        assert_eq!(mutate_diagram(&d, 5).unwrap_err(), AtfError::NoSuchNode(5));

        // a second node on the first node's cut line
        let mut nodes = d.nodes().to_vec();
        nodes.push(Node { position: [ratio(1, 12), ratio(1, 12)], cut: p(&[-1, -1]), sheared_half: Half::Plus });
        let crowded = AtfDiagram::new(d.polytope().clone(), nodes).unwrap();
        assert_eq!(mutate_diagram(&crowded, 0).unwrap_err(), AtfError::NodeCollision { node: 0, other: 3 });
    }

    #[test]
    fn cut_through_vertex_rejected() {
        // square: the line through (-1,-1) and the origin exits at (1,1)
        let sq = crate::polytope::square(int(1));
        let node = Node { position: [ratio(-1, 2), ratio(-1, 2)], cut: p(&[1, 1]), sheared_half: Half::Plus };
        let d = AtfDiagram::new(sq, vec![node]).unwrap();
        assert_eq!(mutate_diagram(&d, 0).unwrap_err(), AtfError::CutThroughVertex { node: 0 });
    }

    #[test]
    fn delta_m_small_paths() {
        let (d, t) = delta_m(&[]).unwrap();
        assert_eq!(t, MarkovTriple::root());
        assert_eq!(d.polytope(), &delta_cp2());

        let (_, t) = delta_m(&[1]).unwrap();
        assert_eq!(t.entries(), [1, 1, 2]);

        let (d, t) = delta_m(&[1, 1]).unwrap();
        assert_eq!(t.entries(), [1, 2, 5]);
        let mut dets = corner_determinants(d.polytope());
        dets.sort();
        assert_eq!(dets, vec![BigInt::from(1), BigInt::from(4), BigInt::from(25)]);
    }

    #[test]
    fn invariance_on_first_mutation() {
        let d = cp2_diagram();
        let (m, tau) = mutate_diagram(&d, 0).unwrap();
        let report = check_dia_invariance(&d, &m, &tau, 1000, 0).unwrap();
        assert_eq!(report.samples, 1000);
        assert!(report.passed(), "{:?}", report.failures.first());
        let origin = [int(0), int(0)];
        assert_eq!(dia_boundary(&origin, d.polytope()).unwrap().0, ratio(1, 3));
        assert_eq!(dia_boundary(&tau.apply(&origin), m.polytope()).unwrap().0, ratio(1, 3));
        let corner = [ratio(2, 3), ratio(-1, 3)];
        assert_eq!(dia_boundary(&tau.apply(&corner), m.polytope()).unwrap().0, int(0));
    }

    #[test]
    fn sampling_is_deterministic() {
        let poly = vertices_2d(&delta_cp2()).unwrap();
        assert_eq!(sample_points(&poly, 50, 3), sample_points(&poly, 50, 3));
        assert_ne!(sample_points(&poly, 50, 3), sample_points(&poly, 50, 4));
    }
}
