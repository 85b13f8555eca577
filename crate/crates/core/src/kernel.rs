//! Specular reflectivity of stratified media.
//!
//! A [`LayeredStructure`] is an ordered stack of [`Layer`]s running from the
//! ambient medium (index 0) down to the substrate (last index). Both outer
//! media are semi-infinite, so their thicknesses are ignored; the roughness of
//! a layer describes the interface with the layer above it.
//!
//! Two routes to `R(q)` are provided:
//!
//! * [`dynamical_reflectivity`]: the exact Abelès characteristic-matrix
//!   product with Névot–Croce roughness damping of each Fresnel coefficient.
//! * [`kinematic_reflectivity`]: the single-scattering (Born) result for a
//!   sharp step profile, `16π²/q⁴ · |Σ Δρ_j exp(-i q z_j)|²`. It is not
//!   clamped, and exceeds 1 near the critical edge.
//!
//! Units throughout are Å for lengths, Å⁻² for scattering length densities and
//! Å⁻¹ for momentum transfer.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One slab of the model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    /// Thickness in Å. Ignored for the ambient and the substrate.
    pub thickness: f64,
    /// Scattering length density in Å⁻².
    pub sld: f64,
    /// Gaussian roughness in Å of the interface between this layer and the
    /// one above it. Ignored for the ambient.
    pub roughness: f64,
}

impl Layer {
    pub fn new(thickness: f64, sld: f64, roughness: f64) -> Self {
        Self {
            thickness,
            sld,
            roughness,
        }
    }

    /// A semi-infinite medium (ambient or substrate).
    pub fn medium(sld: f64, roughness: f64) -> Self {
        Self::new(0.0, sld, roughness)
    }

    fn validate(&self, index: usize) -> Result<()> {
        let fail = |reason: &str| {
            Err(Error::InvalidLayer {
                index,
                reason: reason.to_string(),
            })
        };
        if !self.thickness.is_finite() || self.thickness < 0.0 {
            return fail("thickness must be finite and >= 0");
        }
        if !self.sld.is_finite() {
            return fail("sld must be finite");
        }
        if !self.roughness.is_finite() || self.roughness < 0.0 {
            return fail("roughness must be finite and >= 0");
        }
        Ok(())
    }
}

/// Ambient-to-substrate stack of layers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Layer>", into = "Vec<Layer>")]
pub struct LayeredStructure {
    layers: Vec<Layer>,
}

impl LayeredStructure {
    pub fn new(layers: Vec<Layer>) -> Result<Self> {
        if layers.len() < 2 {
            return Err(Error::TooFewLayers(layers.len()));
        }
        for (i, layer) in layers.iter().enumerate() {
            layer.validate(i)?;
        }
        Ok(Self { layers })
    }

    /// Bare substrate under an ambient medium: a single sharp or rough interface.
    pub fn two_media(ambient_sld: f64, substrate_sld: f64, roughness: f64) -> Result<Self> {
        Self::new(vec![
            Layer::medium(ambient_sld, 0.0),
            Layer::medium(substrate_sld, roughness),
        ])
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    pub fn ambient(&self) -> &Layer {
        &self.layers[0]
    }

    pub fn substrate(&self) -> &Layer {
        &self.layers[self.layers.len() - 1]
    }

    /// Depths of the interfaces below the ambient; the first sits at `z = 0`.
    pub fn interface_depths(&self) -> Vec<f64> {
        let mut depths = Vec::with_capacity(self.layers.len() - 1);
        let mut z = 0.0;
        depths.push(z);
        for layer in &self.layers[1..self.layers.len() - 1] {
            z += layer.thickness;
            depths.push(z);
        }
        depths
    }

    /// Sum of the finite (interior) layer thicknesses.
    pub fn total_thickness(&self) -> f64 {
        self.layers[1..self.layers.len() - 1]
            .iter()
            .map(|l| l.thickness)
            .sum()
    }
}

impl TryFrom<Vec<Layer>> for LayeredStructure {
    type Error = Error;

    fn try_from(layers: Vec<Layer>) -> Result<Self> {
        Self::new(layers)
    }
}

impl From<LayeredStructure> for Vec<Layer> {
    fn from(s: LayeredStructure) -> Self {
        s.layers
    }
}

/// Strictly increasing, strictly positive momentum-transfer values.
#[derive(Debug, Clone, PartialEq)]
pub struct WavevectorGrid {
    q: Vec<f64>,
}

impl WavevectorGrid {
    pub fn new(q: Vec<f64>) -> Result<Self> {
        if q.is_empty() {
            return Err(Error::InvalidGrid("grid is empty".into()));
        }
        if let Some(bad) = q.iter().find(|v| !v.is_finite() || **v <= 0.0) {
            return Err(Error::InvalidGrid(format!(
                "q values must be finite and > 0, found {bad}"
            )));
        }
        if let Some(w) = q.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid(format!(
                "q must be strictly increasing ({} followed by {})",
                w[0], w[1]
            )));
        }
        Ok(Self { q })
    }

    /// `points` evenly spaced values from `qmin` to `qmax` inclusive.
    pub fn linear(qmin: f64, qmax: f64, points: usize) -> Result<Self> {
        if points < 2 {
            return Err(Error::InvalidGrid("need at least 2 points".into()));
        }
        if !(qmin > 0.0 && qmax > qmin) {
            return Err(Error::InvalidGrid(format!(
                "need 0 < qmin < qmax, got [{qmin}, {qmax}]"
            )));
        }
        let step = (qmax - qmin) / (points - 1) as f64;
        let mut q: Vec<f64> = (0..points).map(|i| qmin + step * i as f64).collect();
        q[points - 1] = qmax;
        Self::new(q)
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }
}

/// Parallel arrays of `q`, `R(q)` and optionally `δR(q)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReflectivityCurve {
    pub q: Vec<f64>,
    pub r: Vec<f64>,
    pub dr: Option<Vec<f64>>,
}

impl ReflectivityCurve {
    pub fn new(q: Vec<f64>, r: Vec<f64>, dr: Option<Vec<f64>>) -> Result<Self> {
        if q.len() != r.len() {
            return Err(Error::InvalidCurve(format!(
                "q has {} points but R has {}",
                q.len(),
                r.len()
            )));
        }
        if q.iter().chain(&r).any(|v| !v.is_finite()) {
            return Err(Error::InvalidCurve("non-finite q or R value".into()));
        }
        if let Some(dr) = &dr {
            if dr.len() != q.len() {
                return Err(Error::InvalidCurve(format!(
                    "q has {} points but dR has {}",
                    q.len(),
                    dr.len()
                )));
            }
            if let Some(bad) = dr.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
                return Err(Error::InvalidCurve(format!(
                    "uncertainties must be finite and > 0, found {bad}"
                )));
            }
        }
        Ok(Self { q, r, dr })
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }
}

/// Depth profile of the scattering length density.
#[derive(Debug, Clone, PartialEq)]
pub struct SldProfile {
    pub z: Vec<f64>,
    pub rho: Vec<f64>,
}

/// Perpendicular wavevector inside a medium of SLD `rho_n`, given the
/// ambient wavevector `k0 = q/2` and ambient SLD `rho_0`.
///
/// Below the critical edge the radicand is negative and the root is taken
/// on the positive imaginary axis so the wave decays into the medium.
pub fn layer_wavevector(k0: f64, rho_n: f64, rho_0: f64) -> Complex64 {
    let radicand = k0 * k0 - 4.0 * PI * (rho_n - rho_0);
    if radicand >= 0.0 {
        Complex64::new(radicand.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-radicand).sqrt())
    }
}

/// Fresnel reflection amplitude between two media, damped by the
/// Névot–Croce factor `exp(-2 k_n k_{n+1} σ²)`.
pub fn fresnel_coefficient(k_n: Complex64, k_n1: Complex64, sigma: f64) -> Result<Complex64> {
    let sum = k_n + k_n1;
    if sum == Complex64::new(0.0, 0.0) {
        return Err(Error::DegenerateInterface);
    }
    let ratio = (k_n - k_n1) / sum;
    if sigma == 0.0 {
        Ok(ratio)
    } else {
        Ok(ratio * (-2.0 * k_n * k_n1 * sigma * sigma).exp())
    }
}

/// Critical momentum transfer `4·sqrt(π·Δρ)` for an SLD step `Δρ > 0`.
pub fn critical_edge(delta_rho: f64) -> f64 {
    4.0 * (PI * delta_rho).sqrt()
}

/// Exact reflectivity of `structure` at each point of `grid`.
pub fn dynamical_reflectivity(
    structure: &LayeredStructure,
    grid: &WavevectorGrid,
) -> Result<ReflectivityCurve> {
    let r = dynamical_values(structure, grid.q())?;
    Ok(ReflectivityCurve {
        q: grid.q().to_vec(),
        r,
        dr: None,
    })
}

/// As [`dynamical_reflectivity`] but on a raw slice of `q > 0` values, for
/// callers that already hold a validated grid (forward models, datasets).
pub fn dynamical_values(structure: &LayeredStructure, q: &[f64]) -> Result<Vec<f64>> {
    let layers = structure.layers();
    let rho_0 = layers[0].sld;
    let mut k = vec![Complex64::new(0.0, 0.0); layers.len()];
    q.iter()
        .map(|&qv| {
            let k0 = 0.5 * qv;
            for (kn, layer) in k.iter_mut().zip(layers) {
                *kn = layer_wavevector(k0, layer.sld, rho_0);
            }
            let amplitude = reflection_amplitude(layers, &k)?;
            let r = amplitude.norm_sqr();
            if r.is_finite() {
                Ok(r)
            } else {
                Err(Error::NumericalOverflow { q: qv })
            }
        })
        .collect()
}

/// 2×2 complex matrix, row-major.
#[derive(Clone, Copy)]
struct Matrix2([Complex64; 4]);

impl Matrix2 {
    fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self([one, zero, zero, one])
    }

    fn mul(&self, o: &Matrix2) -> Matrix2 {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = o.0;
        Matrix2([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }
}

fn reflection_amplitude(layers: &[Layer], k: &[Complex64]) -> Result<Complex64> {
    let i = Complex64::new(0.0, 1.0);
    let mut product = Matrix2::identity();
    for j in 1..layers.len() {
        let r = if k[j - 1] == k[j] {
            Complex64::new(0.0, 0.0)
        } else {
            fresnel_coefficient(k[j - 1], k[j], layers[j].roughness)?
        };
        // the ambient carries no phase
        let beta = if j == 1 {
            Complex64::new(0.0, 0.0)
        } else {
            k[j - 1] * layers[j - 1].thickness
        };
        let forward = (i * beta).exp();
        let backward = (-i * beta).exp();
        let m = Matrix2([forward, r * forward, r * backward, backward]);
        product = product.mul(&m);
    }
    Ok(product.0[2] / product.0[0])
}

/// Born-approximation reflectivity of a sharp multi-step profile.
pub fn kinematic_reflectivity(
    structure: &LayeredStructure,
    grid: &WavevectorGrid,
) -> Result<ReflectivityCurve> {
    let layers = structure.layers();
    if let Some((index, layer)) = layers
        .iter()
        .enumerate()
        .skip(1)
        .find(|(_, l)| l.roughness != 0.0)
    {
        return Err(Error::UnsupportedRoughness {
            layer: index,
            sigma: layer.roughness,
        });
    }
    let steps: Vec<(f64, f64)> = structure
        .interface_depths()
        .into_iter()
        .zip(layers.windows(2).map(|w| w[1].sld - w[0].sld))
        .collect();
    let r = grid
        .q()
        .iter()
        .map(|&q| {
            let amplitude: Complex64 = steps
                .iter()
                .map(|&(z, drho)| drho * Complex64::new(0.0, -q * z).exp())
                .sum();
            16.0 * PI * PI / q.powi(4) * amplitude.norm_sqr()
        })
        .collect();
    Ok(ReflectivityCurve {
        q: grid.q().to_vec(),
        r,
        dr: None,
    })
}

/// SLD depth profile sampled at `n_points` evenly spaced depths.
///
/// Sharp interfaces are Heaviside steps (the upper value is taken at the
/// interface itself); rough interfaces are error-function transitions of
/// width σ. This rendering is for display only.
pub fn sld_profile(structure: &LayeredStructure, n_points: usize) -> Result<SldProfile> {
    if n_points < 2 {
        return Err(Error::InvalidGrid(
            "an SLD profile needs at least 2 points".into(),
        ));
    }
    let layers = structure.layers();
    let max_sigma = layers[1..]
        .iter()
        .map(|l| l.roughness)
        .fold(0.0_f64, f64::max);
    let pad = 4.0 * max_sigma.max(10.0);
    let z_min = -pad;
    let z_max = structure.total_thickness() + pad;
    let step = (z_max - z_min) / (n_points - 1) as f64;

    let interfaces: Vec<(f64, f64, f64)> = structure
        .interface_depths()
        .into_iter()
        .zip(layers.windows(2))
        .map(|(z, w)| (z, w[1].sld - w[0].sld, w[1].roughness))
        .collect();

    let z: Vec<f64> = (0..n_points).map(|i| z_min + step * i as f64).collect();
    let rho = z
        .iter()
        .map(|&zv| {
            layers[0].sld
                + interfaces
                    .iter()
                    .map(|&(zi, drho, sigma)| {
                        let frac = if sigma == 0.0 {
                            if zv >= zi {
                                1.0
                            } else {
                                0.0
                            }
                        } else {
                            0.5 * (1.0 + libm::erf((zv - zi) / (std::f64::consts::SQRT_2 * sigma)))
                        };
                        drho * frac
                    })
                    .sum::<f64>()
        })
        .collect();
    Ok(SldProfile { z, rho })
}
