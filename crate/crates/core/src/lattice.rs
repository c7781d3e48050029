//! Periodic cubic lattice, its momentum grid, and the unitary Fourier pair.
//!
//! Sites sit at `x = a·j` for `j ∈ [0, N)³` with `a = L/N`. Momentum bins carry
//! `p = (2πħ/L)·n` with integer `n ∈ [-N/2, N/2)³`, bin `j` holding
//! `n = j` for `j < N/2` and `n = j - N` otherwise.
//!
//! The transform is normalized so that plane waves are orthonormal under the
//! discrete measure `a³ Σ_x`:
//!
//! ```text
//! f̃(n) = a³ L^{-3/2} Σ_x f(x) e^{-i p_n·x/ħ}
//! f(x) = L^{-3/2} Σ_n f̃(n) e^{+i p_n·x/ħ}
//! ```
//!
//! which gives Parseval in the form `a³ Σ_x |f|² = Σ_n |f̃|²`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
pub use crate::units::Units;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

struct FftPair {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

#[derive(Clone)]
pub struct Lattice {
    n: usize,
    length: f64,
    units: Units,
    fft: Arc<FftPair>,
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Lattice")
            .field("n", &self.n)
            .field("length", &self.length)
            .field("units", &self.units)
            .finish()
    }
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.length == other.length && self.units == other.units
    }
}

impl Lattice {
    pub fn new(n: usize, length: f64, units: Units) -> Result<Self> {
        if !n.is_multiple_of(2) {
            return Err(Error::InvalidLattice(format!("N must be even, got {n}")));
        }
        if n < 4 {
            return Err(Error::InvalidLattice(format!("N must be at least 4, got {n}")));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::InvalidLattice(format!("L must be positive, got {length}")));
        }
        if !(units.mass > 0.0) {
            return Err(Error::NonPositiveMass(units.mass));
        }
        if !(units.hbar > 0.0) || !(units.c > 0.0) {
            return Err(Error::InvalidLattice(format!(
                "hbar and c must be positive, got hbar={} c={}",
                units.hbar, units.c
            )));
        }
        let mut planner = FftPlanner::new();
        let fft = FftPair {
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        };
        Ok(Self {
            n,
            length,
            units,
            fft: Arc::new(fft),
        })
    }

    /// Sites per axis.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn units(&self) -> &Units {
        &self.units
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n as f64
    }

    /// Volume element `a³`.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(3)
    }

    pub fn box_volume(&self) -> f64 {
        self.length.powi(3)
    }

    pub fn sites(&self) -> usize {
        self.n * self.n * self.n
    }

    /// Momentum quantum `Δp = 2πħ/L`.
    pub fn dp(&self) -> f64 {
        2.0 * PI * self.units.hbar / self.length
    }

    pub fn index(&self, i: [usize; 3]) -> usize {
        (i[0] * self.n + i[1]) * self.n + i[2]
    }

    pub fn coords(&self, idx: usize) -> [usize; 3] {
        let n = self.n;
        [idx / (n * n), (idx / n) % n, idx % n]
    }

    /// Signed mode number for a bin index along one axis.
    pub fn mode_number(&self, j: usize) -> i64 {
        if j < self.n / 2 {
            j as i64
        } else {
            j as i64 - self.n as i64
        }
    }

    pub fn mode_numbers(&self, idx: usize) -> [i64; 3] {
        let c = self.coords(idx);
        [self.mode_number(c[0]), self.mode_number(c[1]), self.mode_number(c[2])]
    }

    pub fn momentum(&self, idx: usize) -> [f64; 3] {
        let m = self.mode_numbers(idx);
        let dp = self.dp();
        [m[0] as f64 * dp, m[1] as f64 * dp, m[2] as f64 * dp]
    }

    pub fn position(&self, idx: usize) -> [f64; 3] {
        let c = self.coords(idx);
        let a = self.spacing();
        [c[0] as f64 * a, c[1] as f64 * a, c[2] as f64 * a]
    }

    /// Bin holding `-n` (modulo the lattice). Nyquist components map to
    /// themselves.
    pub fn mirror(&self, idx: usize) -> usize {
        let n = self.n;
        let c = self.coords(idx);
        self.index([(n - c[0]) % n, (n - c[1]) % n, (n - c[2]) % n])
    }

    /// True when every component satisfies `|n_i| < N/4`. Bilinears of fields
    /// supported on such bins never alias on this lattice.
    pub fn in_dealiased_band(&self, idx: usize) -> bool {
        let q = (self.n / 4) as i64;
        self.mode_numbers(idx).iter().all(|m| m.abs() < q)
    }

    /// In-place 3D transform of one scalar plane of length `N³`.
    pub fn fft3(&self, data: &mut [Complex64], direction: Direction) {
        assert_eq!(data.len(), self.sites(), "plane length does not match lattice");
        let n = self.n;
        let fft = match direction {
            Direction::Forward => &self.fft.forward,
            Direction::Inverse => &self.fft.inverse,
        };
        // z lines are contiguous
        fft.process(data);
        let mut lines = vec![Complex64::new(0.0, 0.0); data.len()];
        // y lines
        for ix in 0..n {
            for iz in 0..n {
                let line = (ix * n + iz) * n;
                for iy in 0..n {
                    lines[line + iy] = data[(ix * n + iy) * n + iz];
                }
            }
        }
        fft.process(&mut lines);
        for ix in 0..n {
            for iz in 0..n {
                let line = (ix * n + iz) * n;
                for iy in 0..n {
                    data[(ix * n + iy) * n + iz] = lines[line + iy];
                }
            }
        }
        // x lines
        for iy in 0..n {
            for iz in 0..n {
                let line = (iy * n + iz) * n;
                for ix in 0..n {
                    lines[line + ix] = data[(ix * n + iy) * n + iz];
                }
            }
        }
        fft.process(&mut lines);
        for iy in 0..n {
            for iz in 0..n {
                let line = (iy * n + iz) * n;
                for ix in 0..n {
                    data[(ix * n + iy) * n + iz] = lines[line + ix];
                }
            }
        }
        let scale = match direction {
            Direction::Forward => self.length.powf(1.5) / (self.sites() as f64),
            Direction::Inverse => self.length.powf(-1.5),
        };
        for x in data.iter_mut() {
            *x *= scale;
        }
    }

    /// Spectral partial derivative `∂/∂x_axis` of one plane.
    pub fn derivative(&self, plane: &[Complex64], axis: usize) -> Vec<Complex64> {
        let mut work = plane.to_vec();
        self.fft3(&mut work, Direction::Forward);
        let inv_hbar = 1.0 / self.units.hbar;
        for (idx, x) in work.iter_mut().enumerate() {
            let k = self.momentum(idx)[axis] * inv_hbar;
            *x *= Complex64::new(0.0, k);
        }
        self.fft3(&mut work, Direction::Inverse);
        work
    }

    /// Spectral gradient of one plane.
    pub fn gradient(&self, plane: &[Complex64]) -> [Vec<Complex64>; 3] {
        let mut spectrum = plane.to_vec();
        self.fft3(&mut spectrum, Direction::Forward);
        let inv_hbar = 1.0 / self.units.hbar;
        std::array::from_fn(|axis| {
            let mut work: Vec<Complex64> = spectrum
                .iter()
                .enumerate()
                .map(|(idx, x)| x * Complex64::new(0.0, self.momentum(idx)[axis] * inv_hbar))
                .collect();
            self.fft3(&mut work, Direction::Inverse);
            work
        })
    }

    /// Spectral divergence of a real vector field.
    pub fn divergence(&self, v: &RealField<3>) -> Vec<Complex64> {
        let inv_hbar = 1.0 / self.units.hbar;
        let mut acc = vec![Complex64::new(0.0, 0.0); self.sites()];
        for axis in 0..3 {
            let mut work: Vec<Complex64> = v.planes[axis].iter().map(|&x| Complex64::new(x, 0.0)).collect();
            self.fft3(&mut work, Direction::Forward);
            for (idx, (a, w)) in acc.iter_mut().zip(&work).enumerate() {
                *a += w * Complex64::new(0.0, self.momentum(idx)[axis] * inv_hbar);
            }
        }
        self.fft3(&mut acc, Direction::Inverse);
        acc
    }

    /// Spectral curl of a real vector field.
    pub fn curl(&self, v: &RealField<3>) -> RealField<3> {
        let grads: Vec<[Vec<Complex64>; 3]> = (0..3)
            .map(|axis| {
                let plane: Vec<Complex64> = v.planes[axis].iter().map(|&x| Complex64::new(x, 0.0)).collect();
                self.gradient(&plane)
            })
            .collect();
        // (∇×v)_i = ∂_j v_k - ∂_k v_j for cyclic (i, j, k)
        let planes = std::array::from_fn(|i| {
            let j = (i + 1) % 3;
            let k = (i + 2) % 3;
            (0..self.sites())
                .map(|s| (grads[k][j][s] - grads[j][k][s]).re)
                .collect()
        });
        RealField { planes }
    }

    /// `a³ Σ_x f(x)` with fixed-order summation.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.cell_volume() * values.iter().sum::<f64>()
    }

    /// `(a³ Σ_x |f|²)^{1/2}` over a complex plane.
    pub fn l2_norm(&self, values: &[Complex64]) -> f64 {
        (self.cell_volume() * values.iter().map(|x| x.norm_sqr()).sum::<f64>()).sqrt()
    }
}

/// A complex `K`-component value at every site.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField<const K: usize> {
    pub planes: [Vec<Complex64>; K],
}

pub type SpinorField = GridField<4>;
pub type VectorGrid = GridField<3>;
pub type ScalarGrid = GridField<1>;

impl<const K: usize> GridField<K> {
    pub fn zeros(lattice: &Lattice) -> Self {
        Self {
            planes: std::array::from_fn(|_| vec![Complex64::new(0.0, 0.0); lattice.sites()]),
        }
    }

    pub fn sites(&self) -> usize {
        self.planes[0].len()
    }

    pub fn check_shape(&self, lattice: &Lattice) -> Result<()> {
        for p in &self.planes {
            if p.len() != lattice.sites() {
                return Err(Error::ShapeMismatch {
                    expected: lattice.sites(),
                    actual: p.len(),
                });
            }
        }
        Ok(())
    }

    pub fn at(&self, idx: usize) -> [Complex64; K] {
        std::array::from_fn(|k| self.planes[k][idx])
    }

    pub fn set(&mut self, idx: usize, value: [Complex64; K]) {
        for (k, v) in value.into_iter().enumerate() {
            self.planes[k][idx] = v;
        }
    }

    /// Componentwise complex conjugate.
    pub fn conj(&self) -> Self {
        Self {
            planes: std::array::from_fn(|k| self.planes[k].iter().map(|x| x.conj()).collect()),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            planes: std::array::from_fn(|k| {
                self.planes[k]
                    .iter()
                    .zip(&other.planes[k])
                    .map(|(a, b)| a + b)
                    .collect()
            }),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            planes: std::array::from_fn(|k| {
                self.planes[k]
                    .iter()
                    .zip(&other.planes[k])
                    .map(|(a, b)| a - b)
                    .collect()
            }),
        }
    }

    pub fn l2_norm(&self, lattice: &Lattice) -> f64 {
        self.planes
            .iter()
            .map(|p| lattice.l2_norm(p).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Pointwise `f†g` summed over components.
    pub fn dot_density(&self, other: &Self) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.sites()];
        for k in 0..K {
            for (o, (a, b)) in out.iter_mut().zip(self.planes[k].iter().zip(&other.planes[k])) {
                *o += a.conj() * b;
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.planes
            .iter()
            .flat_map(|p| p.iter())
            .fold(0.0, |m, x| m.max(x.norm()))
    }
}

/// Unitary transform of every component.
pub fn transform<const K: usize>(lattice: &Lattice, field: &GridField<K>, direction: Direction) -> GridField<K> {
    let mut out = field.clone();
    for plane in out.planes.iter_mut() {
        lattice.fft3(plane, direction);
    }
    out
}

/// A real `K`-component value at every site.
#[derive(Debug, Clone, PartialEq)]
pub struct RealField<const K: usize> {
    pub planes: [Vec<f64>; K],
}

pub type DensityField = RealField<1>;
pub type VectorDensityField = RealField<3>;

impl<const K: usize> RealField<K> {
    pub fn zeros(lattice: &Lattice) -> Self {
        Self {
            planes: std::array::from_fn(|_| vec![0.0; lattice.sites()]),
        }
    }

    pub fn total(&self, lattice: &Lattice) -> [f64; K] {
        std::array::from_fn(|k| lattice.integrate(&self.planes[k]))
    }

    pub fn max_abs(&self) -> f64 {
        self.planes
            .iter()
            .flat_map(|p| p.iter())
            .fold(0.0, |m, x| m.max(x.abs()))
    }
}

impl DensityField {
    pub fn values(&self) -> &[f64] {
        &self.planes[0]
    }

    pub fn from_values(values: Vec<f64>) -> Self {
        Self { planes: [values] }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lattice(n: usize, l: f64) -> Lattice {
        Lattice::new(n, l, Units::default()).unwrap()
    }

    #[test]
    fn momentum_grid() {
        let lat = lattice(4, 2.0 * PI);
        assert!((lat.dp() - 1.0).abs() < 1e-15);
        let comps: Vec<f64> = (0..4).map(|j| lat.momentum(lat.index([j, 0, 0]))[0]).collect();
        assert_eq!(comps, vec![0.0, 1.0, -2.0, -1.0]);
    }

    #[test]
    fn rejects_odd_and_small() {
        match Lattice::new(3, 1.0, Units::default()) {
            Err(Error::InvalidLattice(msg)) => assert!(msg.contains("N must be even")),
            other => panic!("unexpected {other:?}"),
        }
        assert!(Lattice::new(2, 1.0, Units::default()).is_err());
        assert!(Lattice::new(4, -1.0, Units::default()).is_err());
        let massless = Units {
            mass: 0.0,
            ..Units::default()
        };
        assert!(Lattice::new(4, 1.0, massless).is_err());
    }

    #[test]
    fn sixteen_site_box() {
        let lat = lattice(16, 16.0);
        assert_eq!(lat.spacing(), 1.0);
        let dp = 2.0 * PI / 16.0;
        let most_negative = lat.momentum(lat.index([8, 0, 0]))[0];
        let most_positive = lat.momentum(lat.index([7, 0, 0]))[0];
        assert!((most_negative + 8.0 * dp).abs() < 1e-14);
        assert!((most_positive - 7.0 * dp).abs() < 1e-14);
    }

    #[test]
    fn zero_transforms_to_zero() {
        let lat = lattice(4, 3.0);
        let f = GridField::<1>::zeros(&lat);
        assert_eq!(transform(&lat, &f, Direction::Forward), f);
    }

    #[test]
    fn mirror_is_involution() {
        let lat = lattice(6, 1.0);
        for idx in 0..lat.sites() {
            assert_eq!(lat.mirror(lat.mirror(idx)), idx);
        }
    }
}
