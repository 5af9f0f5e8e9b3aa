#![allow(dead_code)]

use chiralkit::galilean::{axis_angle, GalileanIsometry};
use chiralkit::linalg::{self, Matrix, Vector};
use chiralkit::{OrthogonalMap, QuadraticSpace, Rational};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Support with `|Q(u)| ≥ ‖u‖²/2`, rescaled to `|Q(u)| = 1`.
pub fn random_support(space: &QuadraticSpace<f64>, rng: &mut ChaCha8Rng) -> Vector<f64> {
    loop {
        let u: Vector<f64> = (0..space.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let q = space.eval_q(&u).unwrap();
        let n = linalg::norm_sq(&u);
        if n > 1e-3 && q.abs() >= 0.5 * n {
            return linalg::scale(&u, &(1.0 / q.abs().sqrt()));
        }
    }
}

/// Product of `0..=max_reflections` random reflections.
pub fn random_orthogonal(
    space: &QuadraticSpace<f64>,
    rng: &mut ChaCha8Rng,
    max_reflections: usize,
) -> OrthogonalMap<f64> {
    let k = rng.gen_range(0..=max_reflections);
    let supports: Vec<Vector<f64>> = (0..k).map(|_| random_support(space, rng)).collect();
    OrthogonalMap::from_reflections(space.clone(), &supports).unwrap()
}

pub fn random_vec3(rng: &mut ChaCha8Rng, r: f64) -> [f64; 3] {
    [rng.gen_range(-r..r), rng.gen_range(-r..r), rng.gen_range(-r..r)]
}

pub fn random_rotation(rng: &mut ChaCha8Rng) -> Matrix<f64> {
    loop {
        let a = random_vec3(rng, 1.0);
        if linalg::norm_sq(&a) > 1e-2 {
            return axis_angle(&a, rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI));
        }
    }
}

pub fn random_galilean(rng: &mut ChaCha8Rng) -> GalileanIsometry<f64> {
    let sigma = *[1i8, -1].choose(rng).unwrap();
    let eps = *[1.0, -1.0].choose(rng).unwrap();
    GalileanIsometry {
        sigma,
        omega: random_rotation(rng).scale(&eps),
        v: random_vec3(rng, 3.0),
        s: rng.gen_range(-3.0..3.0),
        z: random_vec3(rng, 3.0),
    }
}

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

pub fn random_rat(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(-20..=20), rng.gen_range(1..=6))
}

/// Rational rotation `(I − K)(I + K)⁻¹` from a random skew-symmetric `K`.
pub fn random_rational_rotation(rng: &mut ChaCha8Rng) -> Matrix<Rational> {
    let (a, b, c) = (random_rat(rng), random_rat(rng), random_rat(rng));
    let zero = rat(0, 1);
    let k = Matrix::from_rows(vec![
        vec![zero.clone(), -a.clone(), b.clone()],
        vec![a, zero.clone(), -c.clone()],
        vec![-b, c, zero],
    ])
    .unwrap();
    let i = Matrix::identity(3);
    let inv = (&i + &k).inverse(&rat(0, 1)).expect("I + K is invertible for skew K");
    &(&i - &k) * &inv
}

/// Independent label oracle: `Direct` iff `det M > 0` and the block of `M`
/// on the negative axes has positive determinant (orientation of negative
/// subspaces preserved).
pub fn block_oracle_direct(space: &QuadraticSpace<f64>, m: &Matrix<f64>) -> bool {
    let p = space.signature().p;
    let q = space.signature().q;
    let neg_block = Matrix::from_fn(q, q, |i, j| m[(p + i, p + j)]);
    let neg_ok = q == 0 || neg_block.determinant() > 0.0;
    m.determinant() > 0.0 && neg_ok
}
