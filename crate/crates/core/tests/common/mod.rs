#![allow(dead_code)]

use maxplus::{kleene_star, max_cycle_mean, TropMatrix, TropScalar};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn m(rows: &[&[i64]]) -> TropMatrix {
    TropMatrix::from_ints(rows).unwrap()
}

pub fn v(xs: &[i64]) -> Vec<TropScalar> {
    xs.iter().map(|&x| TropScalar::int(x)).collect()
}

pub fn example1() -> TropMatrix {
    m(&[&[-2, -4, -1], &[-3, -8, -4], &[-1, -5, -6]])
}

pub fn example2() -> TropMatrix {
    m(&[&[3, 1, 2, 4], &[2, 3, 1, 1], &[4, 2, 2, 1], &[3, 2, 1, 2]])
}

pub fn example3() -> TropMatrix {
    m(&[&[4, 3, 2], &[5, 2, 6], &[3, 4, 2]])
}

pub fn example5() -> TropMatrix {
    m(&[
        &[2, 0, -1, 3, 1],
        &[3, -1, 1, 2, 0],
        &[0, 4, -1, 2, 1],
        &[1, 2, 2, 1, 0],
        &[-1, 0, 1, 0, 0],
    ])
}

/// Integer entries in `lo..=hi`, each ε with probability `eps`.
pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize, lo: i64, hi: i64, eps: f64) -> TropMatrix {
    let data = (0..n * n)
        .map(|_| {
            if rng.gen_bool(eps) {
                TropScalar::Eps
            } else {
                TropScalar::int(rng.gen_range(lo..=hi))
            }
        })
        .collect();
    TropMatrix::new(n, n, data).unwrap()
}

/// Entries `p/q` with `q ∈ 1..=4`, numerators spanning `lo..=hi` in value.
pub fn random_rational_matrix(rng: &mut ChaCha8Rng, n: usize, lo: i64, hi: i64, eps: f64) -> TropMatrix {
    let data = (0..n * n)
        .map(|_| {
            if rng.gen_bool(eps) {
                TropScalar::Eps
            } else {
                let q = rng.gen_range(1..=4);
                TropScalar::ratio(rng.gen_range(lo * q..=hi * q), q)
            }
        })
        .collect();
    TropMatrix::new(n, n, data).unwrap()
}

/// Like [`random_matrix`] but with a finite Hamiltonian cycle forced in, so
/// the digraph is strongly connected.
pub fn random_irreducible(rng: &mut ChaCha8Rng, n: usize, lo: i64, hi: i64, eps: f64) -> TropMatrix {
    let mut a = random_matrix(rng, n, lo, hi, eps);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for k in 0..n {
        let (i, j) = (order[k], order[(k + 1) % n]);
        if a.get(i, j).is_eps() {
            a.set(i, j, TropScalar::int(rng.gen_range(lo..=hi)));
        }
    }
    a
}

/// Kleene star of a random irreducible matrix shifted to `μ = 0`: an
/// idempotent irreducible matrix with zero diagonal, hence strictly periodic
/// and robust, with `λ = 0`.
pub fn random_idempotent(rng: &mut ChaCha8Rng, n: usize) -> TropMatrix {
    let base = random_irreducible(rng, n, -6, 6, 0.3);
    let mu = max_cycle_mean(&base).unwrap();
    kleene_star(&base.scale(&mu.inverse().unwrap())).unwrap()
}

/// Critical graph forced to disjoint cycles of the given lengths with weight
/// `lambda`; every other arc is strictly lighter.
pub fn planted_cycles(rng: &mut ChaCha8Rng, lengths: &[usize], lambda: i64) -> TropMatrix {
    let n: usize = lengths.iter().sum();
    let mut a = random_matrix(rng, n, lambda - 8, lambda - 1, 0.4);
    let mut start = 0;
    for &len in lengths {
        for k in 0..len {
            a.set(start + k, start + (k + 1) % len, TropScalar::int(lambda));
        }
        start += len;
    }
    for i in 0..n {
        let j = (i + 1) % n;
        if a.get(i, j).is_eps() {
            a.set(i, j, TropScalar::int(lambda - 5));
        }
    }
    a
}
