//! Shared generators for the integration tests.
#![allow(dead_code)]

use atfgerm::lattice::{IntMatrix, UnimodularMap};
use rand::Rng;

/// Random element of `GL(n, ℤ)` as a product of elementary moves and sign flips.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize) -> UnimodularMap {
    let mut m = IntMatrix::identity(n);
    for _ in 0..(3 * n) {
        let mut e = IntMatrix::identity(n);
        if n > 1 {
            let i = rng.gen_range(0..n);
            let j = (i + rng.gen_range(1..n)) % n;
            e.set(i, j, rng.gen_range(-3..=3i64).into());
        } else {
            e.set(0, 0, if rng.gen_bool(0.5) { 1 } else { -1 }.into());
        }
        m = e.mul(&m).unwrap();
    }
    if rng.gen_bool(0.5) {
        let mut f = IntMatrix::identity(n);
        f.set(0, 0, (-1).into());
        m = f.mul(&m).unwrap();
    }
    UnimodularMap::new(m).unwrap()
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let data: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect()).collect();
    let refs: Vec<&[i64]> = data.iter().map(Vec::as_slice).collect();
    IntMatrix::from_i64_rows(&refs)
}
