//! Exact integer linear algebra on lattice vectors.
//!
//! Everything here is arbitrary precision. Matrices are dense and row-major;
//! lattice vectors enter matrices as columns unless stated otherwise.

use std::fmt;
use std::ops::Deref;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("zero vector has no primitive direction")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vector must have dimension at least 1")]
    EmptyVector,
    #[error("vector is not primitive (gcd {gcd})")]
    NotPrimitive { gcd: BigInt },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not unimodular (det {det})")]
    NotUnimodular { det: BigInt },
    #[error("integral index needs 1 <= k <= n vectors, got k={k}, n={n}")]
    BadVectorCount { k: usize, n: usize },
    #[error("matrix rows have inconsistent lengths")]
    RaggedRows,
}

/// A vector in `ℤ^n`, `n ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVec(Vec<BigInt>);

impl IntVec {
    pub fn new(coords: Vec<BigInt>) -> Result<Self, LatticeError> {
        if coords.is_empty() {
            return Err(LatticeError::EmptyVector);
        }
        Ok(IntVec(coords))
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        assert!(!coords.is_empty(), "IntVec needs at least one coordinate");
        IntVec(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(n: usize) -> Self {
        assert!(n > 0);
        IntVec(vec![BigInt::zero(); n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zero(n);
        v.0[i] = BigInt::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// gcd of the coordinates (0 for the zero vector).
    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn dot(&self, other: &IntVec) -> BigInt {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn dot_rational(&self, x: &[Rational]) -> Rational {
        debug_assert_eq!(self.dim(), x.len());
        self.0
            .iter()
            .zip(x)
            .map(|(a, b)| b * Rational::from_integer(a.clone()))
            .sum()
    }

    pub fn to_rational(&self) -> Vec<Rational> {
        self.0.iter().cloned().map(Rational::from_integer).collect()
    }

    pub fn neg(&self) -> IntVec {
        IntVec(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &IntVec) -> IntVec {
        IntVec(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// Appends coordinates, e.g. `(u, 1)` from `u`.
    pub fn extended(&self, tail: &[BigInt]) -> IntVec {
        let mut c = self.0.clone();
        c.extend_from_slice(tail);
        IntVec(c)
    }

    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.0.iter().map(|c| i64::try_from(c).ok()).collect()
    }
}

impl fmt::Display for IntVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(","))
    }
}

/// A primitive lattice vector: coordinates with gcd 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimVec(IntVec);

impl PrimVec {
    pub fn new(v: IntVec) -> Result<Self, LatticeError> {
        let g = v.content();
        if g.is_zero() {
            return Err(LatticeError::ZeroVector);
        }
        if !g.is_one() {
            return Err(LatticeError::NotPrimitive { gcd: g });
        }
        Ok(PrimVec(v))
    }

    pub fn from_i64s(coords: &[i64]) -> Result<Self, LatticeError> {
        Self::new(IntVec::from_i64s(coords))
    }

    pub fn as_int_vec(&self) -> &IntVec {
        &self.0
    }

    pub fn into_int_vec(self) -> IntVec {
        self.0
    }

    pub fn neg(&self) -> PrimVec {
        PrimVec(self.0.neg())
    }
}

impl Deref for PrimVec {
    type Target = IntVec;

    fn deref(&self) -> &IntVec {
        &self.0
    }
}

impl fmt::Display for PrimVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Writes a nonzero rational vector as `scale · prim` with `scale > 0`.
pub fn primitivize(v: &[Rational]) -> Result<(PrimVec, Rational), LatticeError> {
    if v.is_empty() {
        return Err(LatticeError::EmptyVector);
    }
    if v.iter().all(Zero::is_zero) {
        return Err(LatticeError::ZeroVector);
    }
    let denom = v.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
    let ints: Vec<BigInt> = v.iter().map(|q| q.numer() * (&denom / q.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    let prim = IntVec(ints.into_iter().map(|c| c / &g).collect());
    Ok((PrimVec(prim), Rational::new(g, denom)))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self, LatticeError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LatticeError::RaggedRows);
        }
        Ok(IntMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let v = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Self::from_rows(v).expect("ragged literal matrix")
    }

    pub fn diag(entries: &[i64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m.data[i * n + i] = BigInt::from(e);
        }
        m
    }

    /// Matrix `(v1|…|vk)` with the vectors as columns.
    pub fn from_columns(cols: &[IntVec]) -> Result<Self, LatticeError> {
        let k = cols.len();
        let n = cols.first().map_or(0, IntVec::dim);
        let mut m = Self::zeros(n, k);
        for (j, v) in cols.iter().enumerate() {
            if v.dim() != n {
                return Err(LatticeError::DimensionMismatch { expected: n, found: v.dim() });
            }
            for i in 0..n {
                m.data[i * k + j] = v.0[i].clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> IntVec {
        IntVec((0..self.rows).map(|i| self.get(i, j).clone()).collect())
    }

    pub fn columns(&self) -> Vec<IntVec> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, LatticeError> {
        if self.cols != other.rows {
            return Err(LatticeError::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &IntVec) -> Result<IntVec, LatticeError> {
        if v.dim() != self.cols {
            return Err(LatticeError::DimensionMismatch { expected: self.cols, found: v.dim() });
        }
        Ok(IntVec((0..self.rows).map(|i| IntVec(self.row(i).to_vec()).dot(v)).collect()))
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt, LatticeError> {
        if !self.is_square() {
            return Err(LatticeError::NotSquare { rows: self.rows, cols: self.cols });
        }
        Ok(bareiss_det(self.to_rows()))
    }

    /// The square submatrix on the given rows and all columns.
    fn select_rows(&self, rows: &[usize]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|&i| self.row(i).to_vec()).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] -= factor * row[source]
    fn row_axpy(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = self.get(source, j) * factor;
            self.data[target * self.cols + j] -= s;
        }
    }

    /// col[target] -= factor * col[source]
    fn col_axpy(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = self.get(i, source) * factor;
            self.data[i * self.cols + target] -= s;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.data[i * self.cols + j] = v;
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = (0..self.rows).map(|i| format!("[{}]", self.row(i).iter().join(","))).join(",");
        write!(f, "[{rows}]")
    }
}

fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// A matrix in `GL(n, ℤ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnimodularMap(IntMatrix);

impl UnimodularMap {
    pub fn new(m: IntMatrix) -> Result<Self, LatticeError> {
        let det = m.determinant()?;
        if det.abs().is_one() {
            Ok(UnimodularMap(m))
        } else {
            Err(LatticeError::NotUnimodular { det })
        }
    }

    pub fn identity(n: usize) -> Self {
        UnimodularMap(IntMatrix::identity(n))
    }

    pub fn dim(&self) -> usize {
        self.0.rows
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }

    pub fn apply(&self, v: &IntVec) -> Result<IntVec, LatticeError> {
        self.0.apply(v)
    }

    pub fn compose(&self, other: &UnimodularMap) -> Result<UnimodularMap, LatticeError> {
        Ok(UnimodularMap(self.0.mul(&other.0)?))
    }

    pub fn transpose(&self) -> UnimodularMap {
        UnimodularMap(self.0.transpose())
    }

    /// Exact inverse; integral because the determinant is a unit.
    pub fn inverse(&self) -> UnimodularMap {
        let n = self.dim();
        let (h, u) = hnf_with_transform(&self.0);
        // h = u·m is upper triangular with unit pivots, reduced above: the identity.
        debug_assert_eq!(h, IntMatrix::identity(n));
        UnimodularMap(u)
    }
}

/// gcd of all `k × k` minors of `(v1|…|vk)`; zero iff the vectors are dependent.
pub fn integral_index(vs: &[IntVec]) -> Result<BigInt, LatticeError> {
    let k = vs.len();
    let n = vs.first().map_or(0, IntVec::dim);
    if k == 0 || k > n {
        return Err(LatticeError::BadVectorCount { k, n });
    }
    let m = IntMatrix::from_columns(vs)?;
    let mut g = BigInt::zero();
    for rows in (0..n).combinations(k) {
        let minor = bareiss_det(m.select_rows(&rows));
        g = g.gcd(&minor);
        if g.is_one() {
            break;
        }
    }
    Ok(g)
}

/// Invariant factors `d1 | d2 | …` of `m` (Smith normal form diagonal,
/// `min(rows, cols)` entries, zeros last).
pub fn elementary_divisors(m: &IntMatrix) -> Vec<BigInt> {
    let mut a = m.clone();
    let r = a.rows.min(a.cols);
    let mut t = 0;
    while t < r {
        // smallest nonzero entry of the trailing block as pivot
        let pivot = (t..a.rows)
            .flat_map(|i| (t..a.cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !a.get(i, j).is_zero())
            .min_by(|&(i1, j1), &(i2, j2)| a.get(i1, j1).abs().cmp(&a.get(i2, j2).abs()));
        let Some((pi, pj)) = pivot else { break };
        a.swap_rows(t, pi);
        a.swap_cols(t, pj);

        let mut dirty = false;
        for i in t + 1..a.rows {
            let q = a.get(i, t).div_floor(a.get(t, t));
            a.row_axpy(i, t, &q);
            dirty |= !a.get(i, t).is_zero();
        }
        for j in t + 1..a.cols {
            let q = a.get(t, j).div_floor(a.get(t, t));
            a.col_axpy(j, t, &q);
            dirty |= !a.get(t, j).is_zero();
        }
        if dirty {
            continue;
        }
        // pivot must divide the whole trailing block
        let p = a.get(t, t).clone();
        let offender = (t + 1..a.rows).find(|&i| (t + 1..a.cols).any(|j| !a.get(i, j).is_multiple_of(&p)));
        if let Some(i) = offender {
            a.row_axpy(t, i, &BigInt::from(-1));
            continue;
        }
        if p.is_negative() {
            a.negate_row(t);
        }
        t += 1;
    }
    (0..r).map(|i| a.get(i, i).clone()).collect()
}

pub fn is_unimodular(m: &IntMatrix) -> Result<bool, LatticeError> {
    Ok(m.determinant()?.abs().is_one())
}

/// Hermite normal form for the left `GL(n, ℤ)` action: `H = U·M`.
///
/// `H` is in row echelon form, every pivot is positive and the entries above
/// a pivot lie in `[0, pivot)`. Two matrices lie in the same left orbit iff
/// their forms coincide.
pub fn hnf_canonical(m: &IntMatrix) -> IntMatrix {
    hnf_with_transform(m).0
}

/// Returns `(H, U)` with `H = U·m` and `U` unimodular.
pub fn hnf_with_transform(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut r = 0;
    for c in 0..h.cols {
        if r == h.rows {
            break;
        }
        loop {
            let best = (r..h.rows)
                .filter(|&i| !h.get(i, c).is_zero())
                .min_by(|&a, &b| h.get(a, c).abs().cmp(&h.get(b, c).abs()).then(a.cmp(&b)));
            let Some(p) = best else { break };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..h.rows {
                if h.get(i, c).is_zero() {
                    continue;
                }
                let q = h.get(i, c).div_floor(h.get(r, c));
                h.row_axpy(i, r, &q);
                u.row_axpy(i, r, &q);
                done &= h.get(i, c).is_zero();
            }
            if done {
                break;
            }
        }
        if h.get(r, c).is_zero() {
            continue;
        }
        if h.get(r, c).is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        let pivot = h.get(r, c).clone();
        for i in 0..r {
            let q = h.get(i, c).div_floor(&pivot);
            h.row_axpy(i, r, &q);
            u.row_axpy(i, r, &q);
        }
        r += 1;
    }
    (h, u)
}

/// Checks the normal-form conditions of [`hnf_canonical`] directly.
pub fn is_in_hnf(h: &IntMatrix) -> bool {
    let mut last_pivot: Option<usize> = None;
    let mut seen_zero_row = false;
    for i in 0..h.rows {
        let lead = (0..h.cols).find(|&j| !h.get(i, j).is_zero());
        match lead {
            None => seen_zero_row = true,
            Some(j) => {
                if seen_zero_row || last_pivot.is_some_and(|p| j <= p) {
                    return false;
                }
                let p = h.get(i, j);
                if !p.is_positive() {
                    return false;
                }
                if (0..i).any(|k| h.get(k, j).is_negative() || h.get(k, j) >= p) {
                    return false;
                }
                last_pivot = Some(j);
            }
        }
    }
    true
}
