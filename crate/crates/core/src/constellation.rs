//! Unit-energy discrete signal sets.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A signal set of `2^M` distinct points with unit average energy.
///
/// `points[label]` is the point carrying the binary label `label`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    name: String,
    bits: u32,
    points: Vec<Complex64>,
}

impl Constellation {
    /// Validates the size, distinctness and energy of an arbitrary point set.
    pub fn new(name: impl Into<String>, bits: u32, points: Vec<Complex64>) -> Result<Self> {
        if bits == 0 || bits > 16 {
            return Err(Error::domain(format!("bits per symbol must be in 1..=16, got {bits}")));
        }
        if points.len() != 1 << bits {
            return Err(Error::domain(format!(
                "expected {} points for {bits} bits, got {}",
                1usize << bits,
                points.len()
            )));
        }
        let energy = points.iter().map(|p| p.norm_sqr()).sum::<f64>() / points.len() as f64;
        if (energy - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!("average energy {energy} is not 1")));
        }
        for (i, a) in points.iter().enumerate() {
            if points[..i].iter().any(|b| (a - b).norm_sqr() < 1e-24) {
                return Err(Error::domain(format!("point {i} is duplicated")));
            }
        }
        Ok(Self { name: name.into(), bits, points })
    }

    /// Looks up one of `qam4`, `qam16`, `qam64`, `psk2`, `psk4`, `psk8`.
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "qam4" => make_qam(2),
            "qam16" => make_qam(4),
            "qam64" => make_qam(6),
            "psk2" => make_psk(1),
            "psk4" => make_psk(2),
            "psk8" => make_psk(3),
            other => Err(Error::domain(format!("unknown constellation `{other}`"))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Bits per symbol `M`.
    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn average_energy(&self) -> f64 {
        self.points.iter().map(|p| p.norm_sqr()).sum::<f64>() / self.len() as f64
    }

    pub fn min_squared_distance(&self) -> f64 {
        let mut best = f64::INFINITY;
        for (i, a) in self.points.iter().enumerate() {
            for b in &self.points[i + 1..] {
                best = best.min((a - b).norm_sqr());
            }
        }
        best
    }
}

impl fmt::Display for Constellation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

fn gray_decode(mut g: usize) -> usize {
    let mut b = g;
    while g > 0 {
        g >>= 1;
        b ^= g;
    }
    b
}

/// Square `2^{M/2} × 2^{M/2}` QAM with Gray labels on each axis.
pub fn make_qam(bits: u32) -> Result<Constellation> {
    if bits == 0 || !bits.is_multiple_of(2) || bits > 8 {
        return Err(Error::domain(format!("square QAM needs even bits in 2..=8, got {bits}")));
    }
    let half = bits / 2;
    let side = 1usize << half;
    // Levels ±1, ±3, ... have mean square (side² - 1)/3 per axis.
    let scale = (2.0 * ((side * side) as f64 - 1.0) / 3.0).sqrt().recip();
    let level = |label: usize| (2.0 * gray_decode(label) as f64 - (side as f64 - 1.0)) * scale;
    let points = (0..1usize << bits)
        .map(|label| Complex64::new(level(label >> half), level(label & (side - 1))))
        .collect();
    Constellation::new(format!("qam{}", 1usize << bits), bits, points)
}

/// `2^M`-PSK with points `exp(i 2π k / 2^M)`.
pub fn make_psk(bits: u32) -> Result<Constellation> {
    if bits == 0 || bits > 16 {
        return Err(Error::domain(format!("PSK needs bits in 1..=16, got {bits}")));
    }
    let n = 1usize << bits;
    let points = (0..n)
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64))
        .collect();
    Constellation::new(format!("psk{n}"), bits, points)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn contains(set: &[Complex64], z: Complex64) -> bool {
        set.iter().any(|p| (p - z).norm() < 1e-12)
    }

    #[test]
    fn qpsk_corners() {
        let c = make_qam(2).unwrap();
        let s = 0.5f64.sqrt();
        for (re, im) in [(s, s), (s, -s), (-s, s), (-s, -s)] {
            assert!(contains(c.points(), Complex64::new(re, im)));
        }
    }

    #[test]
    fn qam16_geometry() {
        let c = make_qam(4).unwrap();
        assert_eq!(c.len(), 16);
        assert!((c.average_energy() - 1.0).abs() < 1e-12);
        assert!((c.min_squared_distance() - 0.4).abs() < 1e-12);
    }

    #[test]
    fn qam_gray_neighbors_differ_in_one_bit() {
        let c = make_qam(6).unwrap();
        let d = c.min_squared_distance();
        for (i, a) in c.points().iter().enumerate() {
            for (j, b) in c.points().iter().enumerate() {
                if ((a - b).norm_sqr() - d).abs() < 1e-12 {
                    assert_eq!((i ^ j).count_ones(), 1);
                }
            }
        }
    }

    #[test]
    fn qam_is_symmetric() {
        for bits in [2, 4, 6, 8] {
            let c = make_qam(bits).unwrap();
            for &p in c.points() {
                assert!(contains(c.points(), -p));
                assert!(contains(c.points(), p.conj()));
            }
        }
    }

    #[test]
    fn qam_rejects_odd_and_large() {
        assert!(make_qam(3).is_err());
        assert!(make_qam(0).is_err());
        assert!(make_qam(10).is_err());
    }

    #[test]
    fn psk_points() {
        let c = make_psk(1).unwrap();
        assert!(contains(c.points(), Complex64::new(1.0, 0.0)));
        assert!(contains(c.points(), Complex64::new(-1.0, 0.0)));
        let c = make_psk(2).unwrap();
        for z in [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)] {
            assert!(contains(c.points(), Complex64::new(z.0, z.1)));
        }
        for bits in 1..=6 {
            let c = make_psk(bits).unwrap();
            assert!(c.points().iter().all(|p| (p.norm() - 1.0).abs() < 1e-15));
            assert!((c.average_energy() - 1.0).abs() < 1e-12);
        }
        assert!(make_psk(0).is_err());
    }

    #[test]
    fn names() {
        for (name, bits) in [("qam4", 2), ("qam16", 4), ("qam64", 6), ("psk2", 1), ("psk4", 2), ("psk8", 3)] {
            let c = Constellation::from_name(name).unwrap();
            assert_eq!(c.bits(), bits);
            assert_eq!(c.name(), name);
        }
        assert!(Constellation::from_name("qam32").is_err());
    }

    #[test]
    fn new_validates() {
        let pts = vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)];
        assert!(Constellation::new("dup", 1, pts).is_err());
        let pts = vec![Complex64::new(2.0, 0.0), Complex64::new(-2.0, 0.0)];
        assert!(Constellation::new("loud", 1, pts).is_err());
    }
}
