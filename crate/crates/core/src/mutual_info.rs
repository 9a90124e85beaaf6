//! Per-block AWGN mutual information.
//!
//! Discrete-input (coded-modulation) mutual information is an expectation
//! over circularly symmetric Gaussian noise, evaluated here with a tensor
//! Gauss–Hermite rule over the real and imaginary noise components.

use std::f64::consts::{LN_2, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::constellation::Constellation;
use crate::error::{Error, Result};

/// Nodes per real dimension unless configured otherwise.
pub const DEFAULT_QUADRATURE_ORDER: usize = 96;

/// Signal-to-noise ratio as a linear power ratio.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Snr(f64);

impl Snr {
    pub fn new(rho: f64) -> Result<Self> {
        if rho >= 0.0 && !rho.is_nan() {
            Ok(Self(rho))
        } else {
            Err(Error::domain(format!("SNR must be nonnegative, got {rho}")))
        }
    }

    /// Power convention: `rho = 10^{dB/10}`.
    pub fn from_db(db: f64) -> Result<Self> {
        if db.is_nan() {
            return Err(Error::domain("SNR in dB is NaN"));
        }
        Self::new(10f64.powf(db / 10.0))
    }

    pub fn rho(self) -> f64 {
        self.0
    }

    pub fn db(self) -> f64 {
        10.0 * self.0.log10()
    }

    /// The SNR seen through a fading gain, `γ·rho`.
    pub fn scaled(self, gain: f64) -> Self {
        Self((self.0 * gain).max(0.0))
    }
}

/// Gauss–Hermite rule for `∫ f(t) e^{-t²} dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    /// Golub–Welsch: nodes are the eigenvalues of the Hermite Jacobi matrix.
    ///
    /// Weights come from the Christoffel function `1 / Σ_k p_k(x)²` of the
    /// orthonormal recurrence behind the same matrix. This equals `√π` times
    /// the squared first eigenvector component, but keeps relative accuracy
    /// on the far nodes where the eigenvector entries underflow into noise.
    pub fn gauss_hermite(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::domain("quadrature order must be positive"));
        }
        let jacobi = DMatrix::from_fn(order, order, |i, j| {
            if i + 1 == j || j + 1 == i {
                (i.max(j) as f64 / 2.0).sqrt()
            } else {
                0.0
            }
        });
        let mut nodes: Vec<f64> = jacobi.symmetric_eigenvalues().iter().copied().collect();
        nodes.sort_by(f64::total_cmp);
        let weights = nodes.iter().map(|&x| christoffel_weight(x, order)).collect();
        Ok(Self { nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Noise samples `Z` with probability weights for `Z ~ CN(0, 1)`.
    ///
    /// Each component of `Z` has density `e^{-u²}/√π`, so the Hermite nodes
    /// are used unscaled and the product weight is divided by `π`.
    pub fn complex_gaussian_points(&self) -> Vec<(Complex64, f64)> {
        let mut out = Vec::with_capacity(self.order() * self.order());
        for (&re, &wr) in self.nodes.iter().zip(&self.weights) {
            for (&im, &wi) in self.nodes.iter().zip(&self.weights) {
                out.push((Complex64::new(re, im), wr * wi / PI));
            }
        }
        out
    }
}

fn christoffel_weight(x: f64, order: usize) -> f64 {
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25);
    let mut sum = cur * cur;
    for k in 1..order {
        let next = ((2.0 / k as f64).sqrt() * x * cur) - ((k as f64 - 1.0) / k as f64).sqrt() * prev;
        prev = cur;
        cur = next;
        sum += cur * cur;
    }
    1.0 / sum
}

impl Default for QuadratureRule {
    fn default() -> Self {
        Self::gauss_hermite(DEFAULT_QUADRATURE_ORDER).expect("positive order")
    }
}

/// Groups constellation points into orbits under the symmetries that also
/// preserve the noise grid: negation, rotation by 90° and conjugation. Each
/// representative carries its orbit size, so only one point per orbit needs
/// the noise expectation.
fn symmetry_orbits(points: &[Complex64]) -> Vec<(Complex64, f64)> {
    let find = |z: Complex64| points.iter().position(|p| (p - z).norm_sqr() < 1e-20);
    let maps: [fn(Complex64) -> Complex64; 3] = [|z| -z, |z| z * Complex64::i(), |z| z.conj()];
    let generators: Vec<_> = maps
        .into_iter()
        .filter(|f| points.iter().all(|&p| find(f(p)).is_some()))
        .collect();
    let mut seen = vec![false; points.len()];
    let mut orbits = Vec::new();
    for start in 0..points.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut size = 0usize;
        while let Some(i) = stack.pop() {
            size += 1;
            for g in &generators {
                let j = find(g(points[i])).expect("closed under generator");
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        orbits.push((points[start], size as f64));
    }
    orbits
}

fn mi_discrete_at(rho: f64, points: &[Complex64], orbits: &[(Complex64, f64)], noise: &[(Complex64, f64)]) -> f64 {
    let bits = (points.len() as f64).log2();
    if rho <= 0.0 {
        return 0.0;
    }
    let amp = rho.sqrt();
    let mut exps = vec![0.0; points.len()];
    let mut total = 0.0;
    for &(x, multiplicity) in orbits {
        let mut acc = 0.0;
        for &(z, w) in noise {
            let mut top = f64::NEG_INFINITY;
            for (e, &xp) in exps.iter_mut().zip(points) {
                let a = amp * (x - xp);
                *e = -(a + z).norm_sqr() + z.norm_sqr();
                top = top.max(*e);
            }
            let s: f64 = exps.iter().map(|e| (e - top).exp()).sum();
            acc += w * (top + s.ln());
        }
        total += multiplicity * acc;
    }
    let mi = bits - total / (points.len() as f64 * LN_2);
    mi.clamp(0.0, bits)
}

/// Discrete-input AWGN mutual information in bits per channel use,
/// with equiprobable inputs.
pub fn mi_discrete(snr: Snr, c: &Constellation, q: &QuadratureRule) -> f64 {
    mi_discrete_at(snr.rho(), c.points(), &symmetry_orbits(c.points()), &q.complex_gaussian_points())
}

/// Gaussian-input AWGN mutual information `log2(1 + rho)`.
pub fn mi_gaussian(snr: Snr) -> f64 {
    snr.rho().ln_1p() / LN_2
}

/// `min{M, log2(1 + rho)}`, an upper bound on [`mi_discrete`].
pub fn mi_capped(snr: Snr, bits: u32) -> f64 {
    mi_gaussian(snr).min(bits as f64)
}

/// [`mi_discrete`] tabulated on a uniform grid in `ln rho`, for Monte Carlo
/// loops that need millions of evaluations.
///
/// Interior points use cubic Hermite interpolation. Below the grid the
/// curve is extended linearly in `rho` (the low-SNR slope is `log2(e)·rho`
/// to first order); above it the value is held.
#[derive(Debug, Clone)]
pub struct MiTable {
    bits: f64,
    ln_lo: f64,
    step: f64,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl MiTable {
    const RHO_MIN: f64 = 1e-4;
    const RHO_MAX: f64 = 1e5;
    const STEP: f64 = 0.03;

    pub fn new(c: &Constellation, q: &QuadratureRule) -> Self {
        let ln_lo = Self::RHO_MIN.ln();
        let n = ((Self::RHO_MAX.ln() - ln_lo) / Self::STEP).ceil() as usize + 1;
        let noise = q.complex_gaussian_points();
        let orbits = symmetry_orbits(c.points());
        let values: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|i| mi_discrete_at((ln_lo + i as f64 * Self::STEP).exp(), c.points(), &orbits, &noise))
            .collect();
        let slopes = (0..n)
            .map(|i| {
                let (a, b) = (i.saturating_sub(1), (i + 1).min(n - 1));
                (values[b] - values[a]) / (b - a) as f64
            })
            .collect();
        Self { bits: c.bits() as f64, ln_lo, step: Self::STEP, values, slopes }
    }

    pub fn bits(&self) -> u32 {
        self.bits as u32
    }

    pub fn eval(&self, rho: f64) -> f64 {
        if !(rho > 0.0) {
            return 0.0;
        }
        let pos = (rho.ln() - self.ln_lo) / self.step;
        if pos <= 0.0 {
            return self.values[0] * rho / Self::RHO_MIN;
        }
        let last = self.values.len() - 1;
        if pos >= last as f64 {
            return self.values[last].min(self.bits);
        }
        let k = pos.floor() as usize;
        let t = pos - k as f64;
        let (y0, y1) = (self.values[k], self.values[k + 1]);
        let (d0, d1) = (self.slopes[k], self.slopes[k + 1]);
        let t2 = t * t;
        let t3 = t2 * t;
        let v = (2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * d0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * d1;
        v.clamp(0.0, self.bits)
    }
}
