//! Seeded dataset generators.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::training::Dataset;

/// Decay rate `lambda` of the damped sine.
pub const DAMPING_RATE: f64 = 0.3;
/// Angular frequency `omega` of the damped sine.
pub const ANGULAR_FREQUENCY: f64 = 2.0;
/// Radius of the positive-class disk.
pub const DISK_RADIUS: f64 = 0.35;
pub const DISK_CENTER: [f64; 2] = [0.5, 0.5];

/// `e^(-lambda x) sin(omega x)`
pub fn damped_sine(x: f64) -> f64 {
    (-DAMPING_RATE * x).exp() * (ANGULAR_FREQUENCY * x).sin()
}

fn sample_1d(n_train: usize, n_test: usize, seed: u64, f: impl Fn(f64) -> f64) -> Result<Dataset> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs: Vec<f64> = (0..n_train + n_test)
        .map(|_| rng.gen_range(0.0..TAU))
        .collect();
    let labels = xs.iter().map(|&x| f(x)).collect();
    Dataset::new(
        xs.into_iter().map(|x| vec![x]).collect(),
        labels,
        n_train,
        n_test,
    )
}

/// `x ~ U[0, 2 pi)`, `y = cos x`.
pub fn gen_cosine(n_train: usize, n_test: usize, seed: u64) -> Result<Dataset> {
    sample_1d(n_train, n_test, seed, f64::cos)
}

/// `x ~ U[0, 2 pi)`, `y = e^(-0.3 x) sin(2 x)`; already inside `[-1, 1]`.
pub fn gen_damped_sine(n_train: usize, n_test: usize, seed: u64) -> Result<Dataset> {
    sample_1d(n_train, n_test, seed, damped_sine)
}

fn distance_to_center(p: [f64; 2]) -> f64 {
    (p[0] - DISK_CENTER[0]).hypot(p[1] - DISK_CENTER[1])
}

/// `+1` inside the disk, `-1` outside.
pub fn disk_label(p: [f64; 2]) -> f64 {
    if distance_to_center(p) < DISK_RADIUS {
        1.0
    } else {
        -1.0
    }
}

/// Whether `p` lies in the excluded band `|d - r0| < g r0`.
pub fn in_band(p: [f64; 2], g: f64) -> bool {
    (distance_to_center(p) - DISK_RADIUS).abs() < g * DISK_RADIUS
}

/// Points in `[0, 1]^2` labelled by the disk rule. Candidates inside the
/// band are redrawn, and classes alternate `+1, -1, ...` so the two sides
/// are balanced exactly (up to one point).
pub fn gen_nonlinear_classes(
    total: usize,
    n_train: usize,
    n_test: usize,
    g: f64,
    seed: u64,
) -> Result<Dataset> {
    if total != n_train + n_test {
        return Err(Error::Config(format!(
            "total {total} != {n_train} + {n_test}"
        )));
    }
    if !(0.0..1.0).contains(&g) {
        return Err(Error::Config(format!(
            "decision boundary {g} leaves no room inside the disk"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inputs = Vec::with_capacity(total);
    let mut labels = Vec::with_capacity(total);
    for k in 0..total {
        let want = if k % 2 == 0 { 1.0 } else { -1.0 };
        loop {
            let p = [rng.gen::<f64>(), rng.gen::<f64>()];
            if in_band(p, g) || disk_label(p) != want {
                continue;
            }
            inputs.push(p.to_vec());
            labels.push(want);
            break;
        }
    }
    Dataset::new(inputs, labels, n_train, n_test)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosine_sizes_and_range() {
        let d = gen_cosine(600, 200, 1).unwrap();
        assert_eq!((d.n_train, d.n_test), (600, 200));
        assert!(d.labels.iter().all(|y| (-1.0..=1.0).contains(y)));
        assert!(d.inputs.iter().all(|x| (0.0..TAU).contains(&x[0])));
        for (x, y) in d.inputs.iter().zip(&d.labels) {
            assert_eq!(*y, x[0].cos());
        }
    }

    #[test]
    fn generators_are_pure_in_seed() {
        assert_eq!(
            gen_cosine(30, 10, 5).unwrap(),
            gen_cosine(30, 10, 5).unwrap()
        );
        assert_ne!(
            gen_cosine(30, 10, 5).unwrap(),
            gen_cosine(30, 10, 6).unwrap()
        );
        assert_eq!(
            gen_nonlinear_classes(40, 30, 10, 0.3, 9).unwrap(),
            gen_nonlinear_classes(40, 30, 10, 0.3, 9).unwrap()
        );
    }

    #[test]
    fn damped_sine_formula() {
        assert_eq!(damped_sine(0.0), 0.0);
        let xs = [0.1_f64, 0.5, 1.0, 1.7, 2.2, 3.0, 3.9, 4.4, 5.1, 6.0];
        let want = [
            0.19280_f64,
            0.72426,
            0.67362,
            -0.15345,
            -0.49184,
            -0.11360,
            0.30991,
            0.15625,
            -0.15155,
            -0.08869,
        ];
        for (x, w) in xs.iter().zip(want) {
            let direct = (-0.3 * x).exp() * (2.0 * x).sin();
            assert!((damped_sine(*x) - direct).abs() < 1e-15);
            assert!((damped_sine(*x) - w).abs() < 1e-5, "x = {x}");
        }
        let d = gen_damped_sine(100, 50, 3).unwrap();
        for (x, y) in d.inputs.iter().zip(&d.labels) {
            assert!(y.abs() <= (-0.3 * x[0]).exp());
        }
    }

    #[test]
    fn classes_respect_band_and_balance() {
        let d = gen_nonlinear_classes(450, 300, 150, 0.3, 42).unwrap();
        assert_eq!((d.n_train, d.n_test), (300, 150));
        for (x, y) in d.inputs.iter().zip(&d.labels) {
            let p = [x[0], x[1]];
            assert!((0.0..1.0).contains(&p[0]) && (0.0..1.0).contains(&p[1]));
            assert!(!in_band(p, 0.3));
            assert_eq!(disk_label(p), *y);
        }
        let positive = d.labels.iter().filter(|&&y| y > 0.0).count() as f64 / 450.0;
        assert!((positive - 0.5).abs() <= 0.05);
    }

    #[test]
    fn zero_band_excludes_nothing() {
        let d = gen_nonlinear_classes(450, 300, 150, 0.0, 42).unwrap();
        assert!(d.inputs.iter().all(|x| !in_band([x[0], x[1]], 0.0)));
        let closest = d
            .inputs
            .iter()
            .map(|x| (distance_to_center([x[0], x[1]]) - DISK_RADIUS).abs())
            .fold(f64::INFINITY, f64::min);
        assert!(closest < 0.01 * DISK_RADIUS);
    }

    #[test]
    fn class_generator_errors() {
        assert!(gen_nonlinear_classes(10, 5, 4, 0.3, 1).is_err());
        assert!(gen_nonlinear_classes(10, 5, 5, 1.0, 1).is_err());
        assert!(gen_nonlinear_classes(10, 0, 10, 0.3, 1).is_err());
    }
}
