//! Demonstration objectives: the negative two-dimensional Ackley function and
//! a pair of overlapping Gaussians with fixed width.

use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inference::{with_gaussian_noise, Dataset, ForwardModel, LogLikelihood, ParameterSpace};

const ACKLEY_A: f64 = 20.0;
const ACKLEY_B: f64 = 0.2;
const ACKLEY_C: f64 = 2.0 * PI;

/// `-A(x, y)` for the standard Ackley function (a = 20, b = 0.2, c = 2π).
/// Its global maximum is 0 at the origin.
pub fn negative_ackley(point: [f64; 2]) -> f64 {
    let [x, y] = point;
    let radial = -ACKLEY_A * (-ACKLEY_B * (0.5 * (x * x + y * y)).sqrt()).exp();
    let periodic = -(0.5 * ((ACKLEY_C * x).cos() + (ACKLEY_C * y).cos())).exp();
    -(radial + periodic + ACKLEY_A + E)
}

/// The negative Ackley function as a log-likelihood on a square box.
#[derive(Debug, Clone)]
pub struct AckleyObjective {
    space: ParameterSpace,
}

impl AckleyObjective {
    pub fn new(half_width: f64) -> Result<Self> {
        Ok(Self {
            space: ParameterSpace::from_bounds([
                ("x", -half_width, half_width),
                ("y", -half_width, half_width),
            ])?,
        })
    }
}

impl Default for AckleyObjective {
    fn default() -> Self {
        Self::new(5.0).expect("valid bounds")
    }
}

impl LogLikelihood for AckleyObjective {
    fn space(&self) -> &ParameterSpace {
        &self.space
    }

    fn ln_likelihood(&self, theta: &[f64]) -> f64 {
        if !self.space.contains(theta) {
            return f64::NEG_INFINITY;
        }
        negative_ackley([theta[0], theta[1]])
    }
}

/// Two unit-area normal densities of common, known width, scaled by their
/// integrals `theta1`, `theta2` and centred at `theta3`, `theta4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianPairModel {
    pub theta1: f64,
    pub theta2: f64,
    pub theta3: f64,
    pub theta4: f64,
    pub width: f64,
}

impl GaussianPairModel {
    pub fn new(theta: [f64; 4], width: f64) -> Result<Self> {
        if !(width.is_finite() && width > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "Gaussian width must be > 0, got {width}"
            )));
        }
        Ok(Self {
            theta1: theta[0],
            theta2: theta[1],
            theta3: theta[2],
            theta4: theta[3],
            width,
        })
    }

    /// Defaults for the demonstration: areas 10 and 6 at -1 and +1, width 1.
    pub fn demo_truth() -> Self {
        Self::new([10.0, 6.0, -1.0, 1.0], 1.0).expect("valid width")
    }

    pub fn theta(&self) -> [f64; 4] {
        [self.theta1, self.theta2, self.theta3, self.theta4]
    }
}

fn normal_density(x: f64, centre: f64, width: f64) -> f64 {
    let u = (x - centre) / width;
    (-0.5 * u * u).exp() / (width * (2.0 * PI).sqrt())
}

pub fn gaussian_pair_curve(model: &GaussianPairModel, x: &[f64]) -> Vec<f64> {
    x.iter()
        .map(|&x| {
            model.theta1 * normal_density(x, model.theta3, model.width)
                + model.theta2 * normal_density(x, model.theta4, model.width)
        })
        .collect()
}

/// Noisy observations of `model`; see [`with_gaussian_noise`].
pub fn synthesize_dataset(
    model: &GaussianPairModel,
    x: &[f64],
    noise_fraction: f64,
    floor: f64,
    seed: u64,
) -> Result<Dataset> {
    with_gaussian_noise(
        x,
        &gaussian_pair_curve(model, x),
        noise_fraction,
        floor,
        seed,
    )
}

/// The Gaussian pair as a four-parameter forward model `(θ1, θ2, θ3, θ4)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPairForward {
    pub width: f64,
}

impl ForwardModel for GaussianPairForward {
    fn n_params(&self) -> usize {
        4
    }

    fn evaluate(&self, theta: &[f64], x: &[f64]) -> Result<Vec<f64>> {
        if theta.len() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                got: theta.len(),
            });
        }
        let model = GaussianPairModel::new([theta[0], theta[1], theta[2], theta[3]], self.width)?;
        Ok(gaussian_pair_curve(&model, x))
    }
}

/// Abscissa of the demonstration: 50 points evenly spread over [-5, 5].
pub fn demo_abscissa() -> Vec<f64> {
    (0..50).map(|i| -5.0 + 10.0 * i as f64 / 49.0).collect()
}

/// Bounds for fitting the demonstration. The two centres are confined to
/// opposite half-lines so the labels of the two peaks cannot swap.
pub fn demo_space() -> ParameterSpace {
    ParameterSpace::from_bounds([
        ("theta1", 0.0, 20.0),
        ("theta2", 0.0, 20.0),
        ("theta3", -4.0, 0.0),
        ("theta4", 0.0, 4.0),
    ])
    .expect("valid bounds")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Independent evaluation of the textbook Ackley formula.
    fn ackley_reference(x: f64, y: f64) -> f64 {
        let term1 = -20.0 * (-0.2 * ((x * x + y * y) / 2.0).sqrt()).exp();
        let term2 = -(((2.0 * PI * x).cos() + (2.0 * PI * y).cos()) / 2.0).exp();
        term1 + term2 + 20.0 + std::f64::consts::E
    }

    #[test]
    fn ackley_origin_is_zero() {
        assert!(negative_ackley([0.0, 0.0]).abs() < 1e-14);
    }

    #[test]
    fn ackley_at_one_one() {
        let v = negative_ackley([1.0, 1.0]);
        assert_relative_eq!(v, -ackley_reference(1.0, 1.0), max_relative = 1e-14);
        assert_relative_eq!(v, -3.6254, epsilon = 5e-5);
    }

    #[test]
    fn ackley_symmetries() {
        for &(x, y) in &[(0.3, -1.7), (2.5, 0.1), (-4.2, 3.3)] {
            let v = negative_ackley([x, y]);
            assert_eq!(v, negative_ackley([-x, y]));
            assert_eq!(v, negative_ackley([x, -y]));
            assert_relative_eq!(v, negative_ackley([y, x]), max_relative = 1e-15);
        }
    }

    #[test]
    fn ackley_origin_dominates_grid() {
        let top = negative_ackley([0.0, 0.0]);
        for i in 0..=400 {
            for j in 0..=400 {
                let p = [-5.0 + i as f64 * 0.025, -5.0 + j as f64 * 0.025];
                if p == [0.0, 0.0] {
                    continue;
                }
                assert!(negative_ackley(p) < top);
            }
        }
    }

    #[test]
    fn ackley_objective_bounds() {
        let obj = AckleyObjective::default();
        assert_eq!(obj.ln_likelihood(&[6.0, 0.0]), f64::NEG_INFINITY);
        assert_eq!(obj.ln_likelihood(&[0.0, 0.0]), negative_ackley([0.0, 0.0]));
    }

    #[test]
    fn zero_areas_give_zero_curve() {
        let m = GaussianPairModel::new([0.0, 0.0, -1.0, 2.0], 0.7).unwrap();
        assert!(gaussian_pair_curve(&m, &demo_abscissa())
            .iter()
            .all(|&v| v == 0.0));
    }

    #[test]
    fn curve_integrates_to_total_area() {
        let m = GaussianPairModel::demo_truth();
        let n = 20_001;
        let x: Vec<f64> = (0..n)
            .map(|i| -20.0 + 40.0 * i as f64 / (n - 1) as f64)
            .collect();
        let y = gaussian_pair_curve(&m, &x);
        let h = x[1] - x[0];
        let integral: f64 = y.windows(2).map(|w| 0.5 * h * (w[0] + w[1])).sum();
        assert_relative_eq!(integral, 16.0, max_relative = 1e-3);
    }

    #[test]
    fn coincident_centres_make_one_gaussian() {
        let x = demo_abscissa();
        let pair = GaussianPairModel::new([3.0, 4.0, 0.5, 0.5], 1.3).unwrap();
        let single = GaussianPairModel::new([7.0, 0.0, 0.5, 0.0], 1.3).unwrap();
        for (a, b) in gaussian_pair_curve(&pair, &x)
            .iter()
            .zip(gaussian_pair_curve(&single, &x))
        {
            assert_relative_eq!(*a, b, max_relative = 1e-14, epsilon = 1e-300);
        }
    }

    #[test]
    fn curve_is_linear_in_areas() {
        let x = demo_abscissa();
        let a = GaussianPairModel::new([2.0, 3.0, -1.0, 1.5], 0.8).unwrap();
        let b = GaussianPairModel::new([5.0, -1.0, -1.0, 1.5], 0.8).unwrap();
        let sum =
            GaussianPairModel::new([2.0 * 2.0 + 5.0, 2.0 * 3.0 - 1.0, -1.0, 1.5], 0.8).unwrap();
        let (ya, yb, ys) = (
            gaussian_pair_curve(&a, &x),
            gaussian_pair_curve(&b, &x),
            gaussian_pair_curve(&sum, &x),
        );
        for i in 0..x.len() {
            assert_relative_eq!(
                ys[i],
                2.0 * ya[i] + yb[i],
                max_relative = 1e-12,
                epsilon = 1e-14
            );
        }
    }

    #[test]
    fn width_must_be_positive() {
        assert!(GaussianPairModel::new([1.0, 1.0, 0.0, 0.0], 0.0).is_err());
    }

    #[test]
    fn noiseless_dataset_matches_curve() {
        let m = GaussianPairModel::demo_truth();
        let x = demo_abscissa();
        let d = synthesize_dataset(&m, &x, 0.0, 1e-300, 1).unwrap();
        let y = gaussian_pair_curve(&m, &x);
        for (a, b) in d.y().iter().zip(&y) {
            assert!((a - b).abs() <= 1e-290);
        }
    }

    #[test]
    fn dataset_is_reproducible() {
        let m = GaussianPairModel::demo_truth();
        let x = demo_abscissa();
        assert_eq!(
            synthesize_dataset(&m, &x, 0.05, 0.01, 42).unwrap(),
            synthesize_dataset(&m, &x, 0.05, 0.01, 42).unwrap()
        );
        assert_ne!(
            synthesize_dataset(&m, &x, 0.05, 0.01, 42).unwrap(),
            synthesize_dataset(&m, &x, 0.05, 0.01, 43).unwrap()
        );
    }

    #[test]
    fn pulls_are_standard_normal() {
        let m = GaussianPairModel::demo_truth();
        let n = 10_000;
        let x: Vec<f64> = (0..n)
            .map(|i| -6.0 + 12.0 * i as f64 / (n - 1) as f64)
            .collect();
        let d = synthesize_dataset(&m, &x, 0.05, 0.01, 7).unwrap();
        let y = gaussian_pair_curve(&m, &x);
        let pulls: Vec<f64> = (0..n).map(|i| (d.y()[i] - y[i]) / d.dy()[i]).collect();
        let mean = pulls.iter().sum::<f64>() / n as f64;
        let std = (pulls.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt();
        assert!(mean.abs() < 0.03, "{mean}");
        assert!((std - 1.0).abs() < 0.03, "{std}");
    }
}
