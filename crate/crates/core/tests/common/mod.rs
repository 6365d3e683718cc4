#![allow(dead_code)]

use pgclass::ff::{FpMatrix, Prime};
use pgclass::CommutatorStructure;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn prime(p: u32) -> Prime {
    Prime::new(p).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut impl Rng, p: Prime, rows: usize, cols: usize) -> FpMatrix {
    FpMatrix::from_fn(p, rows, cols, |_, _| rng.gen_range(0..p.value()) as i64)
}

pub fn random_invertible(rng: &mut impl Rng, p: Prime, n: usize) -> FpMatrix {
    loop {
        let m = random_matrix(rng, p, n, n);
        if m.is_invertible() {
            return m;
        }
    }
}

pub fn random_structure(rng: &mut impl Rng, p: Prime, d: usize, r: usize) -> CommutatorStructure {
    CommutatorStructure::from_upper(p, d, r, |_, _| (0..r).map(|_| rng.gen_range(0..p.value()) as i64).collect())
}

/// A random basis change of `cs`.
pub fn moved(rng: &mut impl Rng, cs: &CommutatorStructure) -> CommutatorStructure {
    let s = random_invertible(rng, cs.p(), cs.d());
    let t = random_invertible(rng, cs.p(), cs.r());
    cs.change_of_basis(&s, &t).unwrap()
}

/// Rank by plain integer elimination, independent of the library's echelon code.
pub fn oracle_rank(p: u32, rows: &[Vec<i64>]) -> usize {
    let p = p as i64;
    let mut m: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|x| x.rem_euclid(p)).collect()).collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = (1..p).find(|x| x * m[rank][c] % p == 1).unwrap();
        for i in 0..m.len() {
            if i != rank && m[i][c] != 0 {
                let f = m[i][c] * inv % p;
                for k in 0..cols {
                    m[i][k] = (m[i][k] - f * m[rank][k]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}
