#![allow(dead_code)]

use nodal_ic::monodromy::{symplectic_form, MonodromyData};
use nodal_ic::points::ProjectivePointSet;
use nodal_ic::{RatMatrix, Rational};
use rand::Rng;

pub fn q(x: i64) -> Rational {
    Rational::from(x)
}

pub fn unit(m: usize, i: usize) -> Vec<Rational> {
    (0..m).map(|j| q((i == j) as i64)).collect()
}

/// Random invertible integer matrix with small entries.
pub fn random_invertible<R: Rng>(rng: &mut R, m: usize) -> RatMatrix {
    loop {
        let data = (0..m * m).map(|_| q(rng.gen_range(-3..=3))).collect();
        let a = RatMatrix::from_vec(m, m, data).unwrap();
        if a.rref().rank == m {
            return a;
        }
    }
}

/// Nondegenerate skew pairing `Aᵀ J A` together with `δ` nonzero pairwise
/// orthogonal cycles `A^{-1} w_i`, the `w_i` drawn from a random isotropic
/// subspace of the standard symplectic space. Spans smaller than `δ` occur
/// whenever the isotropic subspace is small, giving defective configurations.
pub fn random_monodromy<R: Rng>(rng: &mut R, max_m: usize, max_delta: usize) -> MonodromyData {
    let g = rng.gen_range(1..=max_m / 2);
    let m = 2 * g;
    let delta = rng.gen_range(0..=max_delta);
    let iso_dim = rng.gen_range(1..=g);
    // isotropic subspace: span of e_0, e_2, ..., e_{2(iso_dim-1)}
    let mut ws = Vec::with_capacity(delta);
    while ws.len() < delta {
        let mut w = vec![q(0); m];
        for i in 0..iso_dim {
            w[2 * i] = q(rng.gen_range(-2..=2));
        }
        if w.iter().any(|x| !x.is_zero()) {
            ws.push(w);
        }
    }
    let a = random_invertible(rng, m);
    let a_inv = a.solve_in_basis(&RatMatrix::identity(m)).unwrap();
    let j = symplectic_form(m).unwrap();
    let pairing = a.transpose().matmul(&j).unwrap().matmul(&a).unwrap();
    let cycles = ws.iter().map(|w| a_inv.mul_vec(w).unwrap()).collect();
    let h_ambient = rng.gen_range(0..=4);
    MonodromyData::new(pairing, cycles, h_ambient).unwrap()
}

/// Random distinct points in `P^N`; with probability one half they are drawn
/// from a random subspace of dimension below `δ`, so dependent configurations
/// show up regularly.
pub fn random_points<R: Rng>(rng: &mut R, big_n: usize, delta: usize) -> ProjectivePointSet {
    loop {
        let low_rank = rng.gen_bool(0.5);
        let generators: Vec<Vec<Rational>> = if low_rank {
            let r = rng.gen_range(1..=delta.max(1));
            (0..r)
                .map(|_| (0..=big_n).map(|_| q(rng.gen_range(-3..=3))).collect())
                .collect()
        } else {
            Vec::new()
        };
        let pts: Vec<Vec<Rational>> = (0..delta)
            .map(|_| {
                if low_rank {
                    let mut p = vec![q(0); big_n + 1];
                    for g in &generators {
                        let c = q(rng.gen_range(-2..=2));
                        for (x, y) in p.iter_mut().zip(g) {
                            *x = &*x + &(&c * y);
                        }
                    }
                    p
                } else {
                    (0..=big_n).map(|_| q(rng.gen_range(-4..=4))).collect()
                }
            })
            .collect();
        if let Ok(set) = ProjectivePointSet::new(big_n, pts) {
            return set;
        }
    }
}
