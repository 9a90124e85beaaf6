//! Probability masses on a uniform grid, and their FFT self-convolution.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Masses of a continuous variable on cells of width `step`.
///
/// Cell `k` covers `[offset + k·step, offset + (k+1)·step)` and the variable
/// is taken to be uniform inside each cell, so the distribution function is
/// piecewise linear between cell edges.
///
/// A table built from a distribution function has `offset = 0`. The n-fold
/// self-convolution of such a table treats each cell's mass as sitting at
/// the cell midpoint; the sum of `n` midpoints lands `(n-1)·step/2` above the
/// left edge of the output cell, which is recorded in `offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedPmf {
    step: f64,
    offset: f64,
    masses: Vec<f64>,
}

impl TabulatedPmf {
    pub fn new(step: f64, offset: f64, masses: Vec<f64>) -> Result<Self> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(Error::domain(format!("grid step must be positive, got {step}")));
        }
        if masses.is_empty() {
            return Err(Error::domain("a tabulated pmf needs at least one cell"));
        }
        if masses.iter().any(|m| !(*m >= 0.0) || !m.is_finite()) {
            return Err(Error::domain("cell masses must be finite and nonnegative"));
        }
        Ok(Self { step, offset, masses })
    }

    /// Tabulates a distribution function supported on `[0, top]` with
    /// `n_cells` cells. Masses are exact cdf differences.
    pub fn from_cdf(top: f64, n_cells: usize, cdf: impl Fn(f64) -> f64) -> Result<Self> {
        if n_cells < 2 {
            return Err(Error::domain(format!("need at least 2 cells, got {n_cells}")));
        }
        if !(top > 0.0) {
            return Err(Error::domain(format!("support top must be positive, got {top}")));
        }
        let n = n_cells as f64;
        let edges: Vec<f64> = (0..=n_cells)
            .map(|k| match k {
                0 => 0.0,
                k if k == n_cells => 1.0,
                k => cdf(k as f64 * top / n).clamp(0.0, 1.0),
            })
            .collect();
        let masses = edges.windows(2).map(|w| (w[1] - w[0]).max(0.0)).collect();
        Self::new(top / n, 0.0, masses)
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    /// Upper edge of the last cell.
    pub fn support_top(&self) -> f64 {
        self.offset + self.len() as f64 * self.step
    }

    /// Piecewise-linear distribution function; see [`cdf_y_at`].
    pub fn cdf(&self, x: f64) -> f64 {
        cdf_y_at(self, x)
    }
}

/// Distribution function of a tabulated pmf at `x`: all cells below `x`
/// plus the linear share of the cell that straddles it.
pub fn cdf_y_at(pmf: &TabulatedPmf, x: f64) -> f64 {
    if x <= 0.0 || x <= pmf.offset {
        return 0.0;
    }
    if x >= pmf.support_top() {
        return 1.0;
    }
    let pos = (x - pmf.offset) / pmf.step;
    let k = (pos.floor() as usize).min(pmf.len() - 1);
    let below: f64 = pmf.masses[..k].iter().sum();
    (below + (pos - k as f64) * pmf.masses[k]).clamp(0.0, 1.0)
}

/// Reusable spectrum of a pmf, zero padded for sums of up to `max_power`
/// copies without circular wrap-around.
pub(crate) struct SelfConvolver {
    base: TabulatedPmf,
    spectrum: Vec<Complex64>,
    planner: FftPlanner<f64>,
}

impl SelfConvolver {
    pub(crate) fn new(base: &TabulatedPmf, max_power: usize) -> Self {
        let size = (max_power.max(1) * base.len()).next_power_of_two();
        let mut spectrum = vec![Complex64::new(0.0, 0.0); size];
        for (s, &m) in spectrum.iter_mut().zip(&base.masses) {
            s.re = m;
        }
        let mut planner = FftPlanner::new();
        planner.plan_fft_forward(size).process(&mut spectrum);
        Self { base: base.clone(), spectrum, planner }
    }

    /// The `n`-fold self-convolution, `n <= max_power`.
    pub(crate) fn power(&mut self, n: usize) -> TabulatedPmf {
        assert!(n >= 1, "convolution power must be positive");
        if n == 1 {
            return self.base.clone();
        }
        let size = self.spectrum.len();
        let out_len = n * (self.base.len() - 1) + 1;
        assert!(out_len <= size, "convolution power {n} exceeds the planned size");
        let mut buf: Vec<Complex64> = self.spectrum.iter().map(|z| z.powi(n as i32)).collect();
        self.planner.plan_fft_inverse(size).process(&mut buf);
        let scale = 1.0 / size as f64;
        let mut masses: Vec<f64> = buf[..out_len].iter().map(|z| (z.re * scale).max(0.0)).collect();
        let total: f64 = masses.iter().sum();
        for m in &mut masses {
            *m /= total;
        }
        TabulatedPmf {
            step: self.base.step,
            offset: n as f64 * self.base.offset + (n - 1) as f64 * self.base.step / 2.0,
            masses,
        }
    }
}

/// The `n`-fold linear self-convolution of a pmf, through a zero-padded FFT.
///
/// The result has `n(N-1)+1` cells of the same width. Round-off negatives
/// are clamped to zero and the masses renormalized.
pub fn convolve_power(pmf: &TabulatedPmf, n: usize) -> Result<TabulatedPmf> {
    if n == 0 {
        return Err(Error::domain("convolution power must be at least 1"));
    }
    Ok(SelfConvolver::new(pmf, n).power(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct_power(masses: &[f64], n: usize) -> Vec<f64> {
        let mut acc = masses.to_vec();
        for _ in 1..n {
            let mut next = vec![0.0; acc.len() + masses.len() - 1];
            for (i, a) in acc.iter().enumerate() {
                for (j, b) in masses.iter().enumerate() {
                    next[i + j] += a * b;
                }
            }
            acc = next;
        }
        acc
    }

    fn pseudo_random_pmf(n: usize, seed: u64) -> TabulatedPmf {
        let mut state = seed;
        let mut raw: Vec<f64> = (0..n)
            .map(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (state >> 11) as f64 / (1u64 << 53) as f64
            })
            .collect();
        let s: f64 = raw.iter().sum();
        raw.iter_mut().for_each(|m| *m /= s);
        TabulatedPmf::new(4.0 / n as f64, 0.0, raw).unwrap()
    }

    #[test]
    fn identity_power() {
        let p = pseudo_random_pmf(64, 1);
        assert_eq!(convolve_power(&p, 1).unwrap(), p);
        assert!(convolve_power(&p, 0).is_err());
    }

    #[test]
    fn delta_shifts() {
        let mut masses = vec![0.0; 32];
        masses[5] = 1.0;
        let p = TabulatedPmf::new(0.125, 0.0, masses).unwrap();
        for n in 1..=4 {
            let out = convolve_power(&p, n).unwrap();
            assert_eq!(out.len(), n * 31 + 1);
            let (arg, max) = out
                .masses()
                .iter()
                .enumerate()
                .fold((0, 0.0), |acc, (i, &m)| if m > acc.1 { (i, m) } else { acc });
            assert_eq!(arg, 5 * n);
            assert!((max - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn fft_matches_direct() {
        let p = pseudo_random_pmf(512, 42);
        for n in 2..=4 {
            let fft = convolve_power(&p, n).unwrap();
            let direct = direct_power(p.masses(), n);
            assert_eq!(fft.len(), direct.len());
            let err = fft.masses().iter().zip(&direct).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(err < 1e-10, "n = {n}: {err}");
        }
    }

    #[test]
    fn cdf_edges() {
        let p = pseudo_random_pmf(100, 3);
        assert_eq!(p.cdf(0.0), 0.0);
        assert_eq!(p.cdf(-1.0), 0.0);
        assert!((p.cdf(p.support_top()) - 1.0).abs() < 1e-9);
        let one = TabulatedPmf::new(0.5, 0.0, vec![1.0]).unwrap();
        assert!((one.cdf(0.25) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn from_cdf_reproduces_grid_values() {
        let f = |x: f64| (x / 4.0).powf(0.7);
        let p = TabulatedPmf::from_cdf(4.0, 1000, f).unwrap();
        assert!((p.total_mass() - 1.0).abs() < 1e-12);
        assert_eq!(p.masses()[0], f(p.step()));
        let mut cum = 0.0;
        for (k, m) in p.masses().iter().enumerate() {
            cum += m;
            let x = (k + 1) as f64 * 4.0 / 1000.0;
            assert!((cum - f(x)).abs() < 1e-12);
            assert!((p.cdf(x) - f(x)).abs() < 1e-12);
        }
        assert!(TabulatedPmf::from_cdf(4.0, 1, f).is_err());
    }

    #[test]
    fn convolved_offset_centers_mass() {
        // Uniform on [0, 1]: the sum of two has mean 1 and cdf 1/2 there.
        let p = TabulatedPmf::from_cdf(1.0, 256, |x| x).unwrap();
        let y = convolve_power(&p, 2).unwrap();
        assert!((y.cdf(1.0) - 0.5).abs() < 1e-12);
        // Triangular cdf at 0.5 is 1/8.
        assert!((y.cdf(0.5) - 0.125).abs() < 1e-5);
    }
}
