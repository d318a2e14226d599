#![allow(dead_code)]

use gitstab_core::hilbert_mumford::WeightVector;
use gitstab_core::num::rat;
use gitstab_core::poly::monomials_of_degree;
use gitstab_core::{HomogeneousPoly, Rational, RationalMatrix};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn nonzero_coef(rng: &mut ChaCha8Rng) -> Rational {
    let mut c = 0;
    while c == 0 {
        c = rng.gen_range(-5..=5);
    }
    if rng.gen_bool(0.2) {
        Rational::new(c.into(), rng.gen_range(2..=4).into())
    } else {
        rat(c)
    }
}

/// Sorted weights with entries of size at most about `range`.
pub fn random_sorted_weights(rng: &mut ChaCha8Rng, n: usize, range: i64) -> WeightVector {
    loop {
        let mut r: Vec<i64> = (0..n).map(|_| rng.gen_range(-range..=range)).collect();
        r.push(-r.iter().sum::<i64>());
        r.sort_unstable_by(|a, b| b.cmp(a));
        if let Ok(w) = WeightVector::new(r) {
            return w;
        }
    }
}

/// Random form whose support is a random subset of the admissible monomials.
pub fn random_member(rng: &mut ChaCha8Rng, r: &WeightVector, d: u32, strict: bool) -> HomogeneousPoly {
    let n = r.n();
    let admissible: Vec<_> = monomials_of_degree(n + 1, d)
        .into_iter()
        .filter(|m| {
            let w: i64 = r.entries().iter().zip(m.exps()).map(|(a, &b)| a * b as i64).sum();
            if strict {
                w > 0
            } else {
                w >= 0
            }
        })
        .collect();
    assert!(!admissible.is_empty(), "x0^d is always admissible");
    loop {
        let keep = rng.gen_range(1..=admissible.len().min(8));
        let chosen: Vec<_> = admissible.choose_multiple(rng, keep).cloned().collect();
        let f = HomogeneousPoly::new(n, d, chosen.into_iter().map(|m| (m, nonzero_coef(rng)))).unwrap();
        if !f.is_zero() {
            return f;
        }
    }
}

pub fn random_poly(rng: &mut ChaCha8Rng, n: usize, d: u32, max_terms: usize) -> HomogeneousPoly {
    let all = monomials_of_degree(n + 1, d);
    loop {
        let keep = rng.gen_range(1..=max_terms.min(all.len()));
        let chosen: Vec<_> = all.choose_multiple(rng, keep).cloned().collect();
        let f = HomogeneousPoly::new(n, d, chosen.into_iter().map(|m| (m, nonzero_coef(rng)))).unwrap();
        if !f.is_zero() {
            return f;
        }
    }
}

pub fn random_matrix(rng: &mut ChaCha8Rng, size: usize, range: i64) -> RationalMatrix {
    let rows = (0..size).map(|_| (0..size).map(|_| rat(rng.gen_range(-range..=range))).collect()).collect();
    RationalMatrix::from_rows(rows).unwrap()
}

pub fn random_invertible(rng: &mut ChaCha8Rng, size: usize, range: i64) -> RationalMatrix {
    loop {
        let m = random_matrix(rng, size, range);
        if m.is_invertible() {
            return m;
        }
    }
}

/// Invertible matrix whose action fixes `Q = [0:...:0:1]`: the last row is `(0, ..., 0, c)`.
pub fn random_stabilizer_of_q(rng: &mut ChaCha8Rng, size: usize) -> RationalMatrix {
    loop {
        let mut m = random_matrix(rng, size, 3);
        for j in 0..size - 1 {
            m.set(size - 1, j, rat(0));
        }
        m.set(size - 1, size - 1, rat(rng.gen_range(1..=3)));
        if m.is_invertible() {
            return m;
        }
    }
}
