#![allow(dead_code)]

use std::f64::consts::PI;

use everett_sim::{Direction, Layout, Operator};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform on the sphere.
pub fn random_direction(rng: &mut impl Rng) -> Direction {
    let cos_t: f64 = rng.gen_range(-1.0..=1.0);
    Direction::new(cos_t.acos(), rng.gen_range(0.0..2.0 * PI))
}

pub fn random_operator(rng: &mut impl Rng, layout: &Layout) -> Operator {
    let n = layout.total_dim();
    let data = (0..n * n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    Operator::from_rows(layout, data).unwrap()
}

pub fn random_hermitian(rng: &mut impl Rng, layout: &Layout) -> Operator {
    let a = random_operator(rng, layout);
    a.add(&a.adjoint()).unwrap().scale(Complex64::new(0.5, 0.0))
}

/// Gram-Schmidt on random complex columns.
pub fn random_unitary(rng: &mut impl Rng, layout: &Layout) -> Operator {
    let n = layout.total_dim();
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        for c in &cols {
            let proj: Complex64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(c) {
                *x -= proj * y;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-6 {
            continue;
        }
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    let mut data = vec![Complex64::new(0.0, 0.0); n * n];
    for (j, c) in cols.iter().enumerate() {
        for (i, z) in c.iter().enumerate() {
            data[i * n + j] = *z;
        }
    }
    Operator::from_rows(layout, data).unwrap()
}

pub fn dot(a: &Direction, b: &Direction) -> f64 {
    let (u, v) = (a.unit_vector(), b.unit_vector());
    u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

pub fn arb_direction() -> impl Strategy<Value = Direction> {
    (-1.0f64..=1.0, 0.0..2.0 * PI).prop_map(|(c, phi)| Direction::new(c.acos(), phi))
}

pub fn arb_seed() -> impl Strategy<Value = u64> {
    any::<u64>()
}
