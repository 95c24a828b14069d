#![allow(dead_code)]

use dvcs_core::numerics::{rank, Matrix, RMatrix, Rational};
use dvcs_core::systems::LinSys;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn example1() -> (LinSys<Rational>, LinSys<Rational>) {
    let s1 = LinSys::new(
        "sigma1",
        RMatrix::from_i64_rows(&[&[0, 1], &[0, 0]]),
        RMatrix::from_i64_rows(&[&[0], &[1]]),
    )
    .unwrap();
    let s2 = LinSys::new(
        "sigma2",
        RMatrix::from_i64_rows(&[&[0, 0, 1], &[0, 0, 0], &[0, 1, 0]]),
        RMatrix::from_i64_rows(&[&[0], &[1], &[0]]),
    )
    .unwrap();
    (s1, s2)
}

pub fn random_int_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> RMatrix {
    let data: Vec<Vec<i64>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect())
        .collect();
    let refs: Vec<&[i64]> = data.iter().map(Vec::as_slice).collect();
    RMatrix::from_i64_rows(&refs)
}

pub fn random_system(rng: &mut ChaCha8Rng, n: usize, r: usize, bound: i64) -> LinSys<Rational> {
    LinSys::new(
        "random",
        random_int_matrix(rng, n, n, bound),
        random_int_matrix(rng, n, r, bound),
    )
    .unwrap()
}

/// Draws until the pair is controllable.
pub fn random_controllable(rng: &mut ChaCha8Rng, n: usize, r: usize, bound: i64) -> LinSys<Rational> {
    loop {
        let s = random_system(rng, n, r, bound);
        let c = dvcs_core::controllability::ctrb_matrix(s.a(), s.b()).unwrap();
        if rank(&c) == n {
            return s;
        }
    }
}

pub fn random_nonsingular(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> RMatrix {
    loop {
        let m = random_int_matrix(rng, n, n, bound);
        if rank(&m) == n {
            return m;
        }
    }
}

pub fn vector(values: &[i64]) -> RMatrix {
    Matrix::column(values.iter().map(|&v| dvcs_core::numerics::rat(v, 1)).collect())
}
