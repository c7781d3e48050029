//! The free electromagnetic field written as a three-component complex
//! field `φ`, with `φ̃ = (Ẽ + iB̃) / √(8π ħ|k|c)`.
//!
//! `φ` obeys `iħ ∂φ/∂t = -iħc s·∇φ` with `(s_i)_jk = -i ε_ijk`. In momentum
//! space `(s·k̂)φ̃ = i k̂ × φ̃`, so helicity `+1` is positive frequency,
//! helicity `-1` negative frequency, and helicity `0` is absent for
//! transverse fields.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::lattice::{transform, Direction, Lattice, RealField, VectorDensityField, VectorGrid};

#[derive(Debug, Clone, PartialEq)]
pub struct EMState {
    pub e: VectorDensityField,
    pub b: VectorDensityField,
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhiField {
    pub phi: VectorGrid,
    pub t: f64,
}

/// Helicity parts of `φ`. `photon() = φ₊`, `antiphoton() = φ₋*`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiSplit {
    pub positive: VectorGrid,
    pub negative: VectorGrid,
    pub longitudinal: VectorGrid,
}

impl PhiSplit {
    pub fn photon(&self) -> &VectorGrid {
        &self.positive
    }

    pub fn antiphoton(&self) -> VectorGrid {
        self.negative.conj()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmEnergies {
    /// `a³ Σ (E² + B²) / 8π`.
    pub standard: f64,
    /// `iħ a³ Σ (φ₊†∂φ₊/∂t - φ₋†∂φ₋/∂t)`.
    pub phi: f64,
    /// `iħ a³ Σ (φ_γ†∂φ_γ/∂t + φ_γ̄†∂φ_γ̄/∂t)`.
    pub particle: f64,
}

type V3 = [Complex64; 3];

fn cross(a: [f64; 3], v: &V3) -> V3 {
    [
        a[1] * v[2] - a[2] * v[1],
        a[2] * v[0] - a[0] * v[2],
        a[0] * v[1] - a[1] * v[0],
    ]
}

/// `(s·k̂) v = i k̂ × v`.
fn helicity_op(khat: [f64; 3], v: &V3) -> V3 {
    let c = cross(khat, v);
    let i = Complex64::new(0.0, 1.0);
    [i * c[0], i * c[1], i * c[2]]
}

/// Projections of `v` onto helicities `+1`, `-1` and `0` along `k̂`.
fn helicity_parts(khat: [f64; 3], v: &V3) -> [V3; 3] {
    let s1 = helicity_op(khat, v);
    let s2 = helicity_op(khat, &s1);
    let plus = std::array::from_fn(|i| 0.5 * (s2[i] + s1[i]));
    let minus = std::array::from_fn(|i| 0.5 * (s2[i] - s1[i]));
    let zero = std::array::from_fn(|i| v[i] - s2[i]);
    [plus, minus, zero]
}

/// Wavevector `p/ħ` of a bin, its length and unit vector.
fn wave(lattice: &Lattice, idx: usize) -> (f64, [f64; 3]) {
    let p = lattice.momentum(idx);
    let hbar = lattice.units().hbar;
    let k = [p[0] / hbar, p[1] / hbar, p[2] / hbar];
    let norm = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
    if norm == 0.0 {
        (0.0, [0.0; 3])
    } else {
        (norm, [k[0] / norm, k[1] / norm, k[2] / norm])
    }
}

fn complexify(e: &VectorDensityField, b: &VectorDensityField) -> VectorGrid {
    VectorGrid {
        planes: std::array::from_fn(|i| {
            e.planes[i]
                .iter()
                .zip(&b.planes[i])
                .map(|(&x, &y)| Complex64::new(x, y))
                .collect()
        }),
    }
}

fn check_mean(lattice: &Lattice, state: &EMState) -> Result<()> {
    let scale = state.e.max_abs().max(state.b.max_abs());
    let n = lattice.sites() as f64;
    let worst = state
        .e
        .planes
        .iter()
        .chain(state.b.planes.iter())
        .map(|p| (p.iter().sum::<f64>() / n).abs())
        .fold(0.0, f64::max);
    if worst > 1e-12 * scale {
        return Err(Error::NonzeroMean(worst));
    }
    Ok(())
}

pub fn phi_from_em(lattice: &Lattice, state: &EMState) -> Result<PhiField> {
    check_mean(lattice, state)?;
    let units = lattice.units();
    let mut spec = transform(lattice, &complexify(&state.e, &state.b), Direction::Forward);
    for idx in 0..lattice.sites() {
        let (k, _) = wave(lattice, idx);
        let w = if k == 0.0 {
            0.0
        } else {
            (8.0 * std::f64::consts::PI * units.hbar * k * units.c).sqrt().recip()
        };
        for plane in spec.planes.iter_mut() {
            plane[idx] *= w;
        }
    }
    Ok(PhiField {
        phi: transform(lattice, &spec, Direction::Inverse),
        t: state.t,
    })
}

pub fn em_from_phi(lattice: &Lattice, phi: &PhiField) -> EMState {
    let units = lattice.units();
    let mut spec = transform(lattice, &phi.phi, Direction::Forward);
    for idx in 0..lattice.sites() {
        let (k, _) = wave(lattice, idx);
        let w = (8.0 * std::f64::consts::PI * units.hbar * k * units.c).sqrt();
        for plane in spec.planes.iter_mut() {
            plane[idx] *= w;
        }
    }
    let f = transform(lattice, &spec, Direction::Inverse);
    EMState {
        e: RealField {
            planes: std::array::from_fn(|i| f.planes[i].iter().map(|z| z.re).collect()),
        },
        b: RealField {
            planes: std::array::from_fn(|i| f.planes[i].iter().map(|z| z.im).collect()),
        },
        t: phi.t,
    }
}

/// Apply `g(bin, [φ̃₊, φ̃₋, φ̃₀]) -> φ̃'` in momentum space.
fn map_helicity<F>(lattice: &Lattice, phi: &VectorGrid, mut g: F) -> VectorGrid
where
    F: FnMut(f64, [V3; 3]) -> V3,
{
    let mut spec = transform(lattice, phi, Direction::Forward);
    for idx in 0..lattice.sites() {
        let (k, khat) = wave(lattice, idx);
        let parts = helicity_parts(khat, &spec.at(idx));
        spec.set(idx, g(k, parts));
    }
    transform(lattice, &spec, Direction::Inverse)
}

/// Exact evolution: helicity `λ` picks up `e^{-iλc|k|dt}`.
pub fn phi_evolve(lattice: &Lattice, phi: &PhiField, dt: f64) -> PhiField {
    let c = lattice.units().c;
    let out = map_helicity(lattice, &phi.phi, |k, [p, m, z]| {
        let ep = Complex64::from_polar(1.0, -c * k * dt);
        let em = ep.conj();
        std::array::from_fn(|i| p[i] * ep + m[i] * em + z[i])
    });
    PhiField {
        phi: out,
        t: phi.t + dt,
    }
}

pub fn split(lattice: &Lattice, phi: &PhiField) -> PhiSplit {
    let pick = |which: usize| map_helicity(lattice, &phi.phi, |_, parts| parts[which]);
    PhiSplit {
        positive: pick(0),
        negative: pick(1),
        longitudinal: pick(2),
    }
}

/// `∂/∂t` of each helicity part.
pub fn split_time_derivative(lattice: &Lattice, phi: &PhiField) -> PhiSplit {
    let c = lattice.units().c;
    let rate = |which: usize, sign: f64| {
        map_helicity(lattice, &phi.phi, |k, parts| {
            let w = Complex64::new(0.0, -sign * c * k);
            std::array::from_fn(|i| w * parts[which][i])
        })
    };
    PhiSplit {
        positive: rate(0, 1.0),
        negative: rate(1, -1.0),
        longitudinal: VectorGrid::zeros(lattice),
    }
}

/// Free Maxwell evolution in momentum space:
/// `Ẽ(t) = cos ωt Ẽ₀ + i sin ωt k̂×B̃₀`, `B̃(t) = cos ωt B̃₀ - i sin ωt k̂×Ẽ₀`.
pub fn maxwell_evolve(lattice: &Lattice, state: &EMState, dt: f64) -> EMState {
    let c = lattice.units().c;
    let to_grid = |f: &VectorDensityField| VectorGrid {
        planes: std::array::from_fn(|i| f.planes[i].iter().map(|&x| Complex64::new(x, 0.0)).collect()),
    };
    let es = transform(lattice, &to_grid(&state.e), Direction::Forward);
    let bs = transform(lattice, &to_grid(&state.b), Direction::Forward);
    let mut e_out = VectorGrid::zeros(lattice);
    let mut b_out = VectorGrid::zeros(lattice);
    let i = Complex64::new(0.0, 1.0);
    for idx in 0..lattice.sites() {
        let (k, khat) = wave(lattice, idx);
        let (s, co) = (c * k * dt).sin_cos();
        let e0 = es.at(idx);
        let b0 = bs.at(idx);
        let kb = cross(khat, &b0);
        let ke = cross(khat, &e0);
        e_out.set(idx, std::array::from_fn(|a| co * e0[a] + i * s * kb[a]));
        b_out.set(idx, std::array::from_fn(|a| co * b0[a] - i * s * ke[a]));
    }
    let real = |g: &VectorGrid| RealField {
        planes: std::array::from_fn(|a| {
            transform(lattice, g, Direction::Inverse).planes[a]
                .iter()
                .map(|z| z.re)
                .collect()
        }),
    };
    EMState {
        e: real(&e_out),
        b: real(&b_out),
        t: state.t + dt,
    }
}

fn integral(lattice: &Lattice, f: &VectorGrid, g: &VectorGrid) -> Complex64 {
    lattice.cell_volume() * f.dot_density(g).iter().sum::<Complex64>()
}

pub fn em_energies(lattice: &Lattice, state: &EMState) -> Result<EmEnergies> {
    let sq: f64 = state
        .e
        .planes
        .iter()
        .chain(state.b.planes.iter())
        .flat_map(|p| p.iter())
        .map(|x| x * x)
        .sum();
    let standard = lattice.cell_volume() * sq / (8.0 * std::f64::consts::PI);

    let phi = phi_from_em(lattice, state)?;
    let parts = split(lattice, &phi);
    let rates = split_time_derivative(lattice, &phi);
    let ih = Complex64::new(0.0, lattice.units().hbar);
    let plus = ih * integral(lattice, &parts.positive, &rates.positive);
    let minus = ih * integral(lattice, &parts.negative, &rates.negative);
    let anti = ih * integral(lattice, &parts.antiphoton(), &rates.negative.conj());
    Ok(EmEnergies {
        standard,
        phi: (plus - minus).re,
        particle: (plus + anti).re,
    })
}

/// `Σ_k ħc|k| (|φ̃₊|² + |φ̃₋|²)`.
pub fn phi_energy_mode_sum(lattice: &Lattice, phi: &PhiField) -> f64 {
    let units = lattice.units();
    let spec = transform(lattice, &phi.phi, Direction::Forward);
    let mut total = 0.0;
    for idx in 0..lattice.sites() {
        let (k, khat) = wave(lattice, idx);
        let [p, m, _] = helicity_parts(khat, &spec.at(idx));
        let w: f64 = p.iter().chain(m.iter()).map(|z| z.norm_sqr()).sum();
        total += units.hbar * units.c * k * w;
    }
    total
}

/// `(a³ Σ |φ₊|², a³ Σ |φ₋|²)`.
pub fn photon_number(lattice: &Lattice, phi: &PhiField) -> (f64, f64) {
    let parts = split(lattice, phi);
    let count = |f: &VectorGrid| integral(lattice, f, f).re;
    (count(&parts.positive), count(&parts.negative))
}

/// Random transverse field with the `k = 0` bin and all Nyquist planes empty.
pub fn random_free_field<R: Rng>(lattice: &Lattice, rng: &mut R) -> EMState {
    let half = (lattice.n() / 2) as i64;
    let mut draw = || {
        let mut g = VectorGrid::zeros(lattice);
        for plane in g.planes.iter_mut() {
            for x in plane.iter_mut() {
                *x = Complex64::new(rng.random_range(-1.0..1.0), 0.0);
            }
        }
        let mut spec = transform(lattice, &g, Direction::Forward);
        for idx in 0..lattice.sites() {
            let (k, khat) = wave(lattice, idx);
            let nyquist = lattice.mode_numbers(idx).iter().any(|m| m.abs() == half);
            if k == 0.0 || nyquist {
                spec.set(idx, [Complex64::new(0.0, 0.0); 3]);
                continue;
            }
            let v = spec.at(idx);
            let along: Complex64 = (0..3).map(|a| khat[a] * v[a]).sum();
            spec.set(idx, std::array::from_fn(|a| v[a] - khat[a] * along));
        }
        let back = transform(lattice, &spec, Direction::Inverse);
        RealField {
            planes: std::array::from_fn(|a| back.planes[a].iter().map(|z| z.re).collect()),
        }
    };
    let e = draw();
    let b = draw();
    EMState { e, b, t: 0.0 }
}

/// `F = E₀ (x̂ + iŷ) e^{i(kz - ωt)}` at `t = 0`, with `k = 2πm/L`.
pub fn circular_wave(lattice: &Lattice, amplitude: f64, m: i64) -> EMState {
    plane_wave(lattice, amplitude, m, true)
}

/// `E = E₀ x̂ cos(kz)`, `B = E₀ ŷ cos(kz)` at `t = 0`.
pub fn linear_wave(lattice: &Lattice, amplitude: f64, m: i64) -> EMState {
    plane_wave(lattice, amplitude, m, false)
}

fn plane_wave(lattice: &Lattice, amplitude: f64, m: i64, circular: bool) -> EMState {
    let k = 2.0 * std::f64::consts::PI * m as f64 / lattice.length();
    let mut e = RealField::<3>::zeros(lattice);
    let mut b = RealField::<3>::zeros(lattice);
    for idx in 0..lattice.sites() {
        let theta = k * lattice.position(idx)[2];
        let (s, c) = theta.sin_cos();
        if circular {
            e.planes[0][idx] = amplitude * c;
            e.planes[1][idx] = -amplitude * s;
            b.planes[0][idx] = amplitude * s;
            b.planes[1][idx] = amplitude * c;
        } else {
            e.planes[0][idx] = amplitude * c;
            b.planes[1][idx] = amplitude * c;
        }
    }
    EMState { e, b, t: 0.0 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::Units;

    #[test]
    fn helicity_projectors_are_complete_and_idempotent() {
        let khat = [0.6, 0.0, 0.8];
        let v = [
            Complex64::new(0.3, 0.1),
            Complex64::new(-1.0, 0.4),
            Complex64::new(0.2, -0.7),
        ];
        let parts = helicity_parts(khat, &v);
        for i in 0..3 {
            let sum = parts[0][i] + parts[1][i] + parts[2][i];
            assert!((sum - v[i]).norm() < 1e-15);
        }
        for (lambda, part) in [1.0, -1.0, 0.0].into_iter().zip(parts.iter()) {
            let s = helicity_op(khat, part);
            for i in 0..3 {
                assert!((s[i] - lambda * part[i]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn nonzero_mean_rejected() {
        let l = Lattice::new(4, 2.0, Units::default()).unwrap();
        let mut s = EMState {
            e: RealField::zeros(&l),
            b: RealField::zeros(&l),
            t: 0.0,
        };
        s.e.planes[2] = vec![1.0; l.sites()];
        assert!(matches!(phi_from_em(&l, &s), Err(Error::NonzeroMean(_))));
    }

    #[test]
    fn circular_wave_is_pure_positive_helicity() {
        let l = Lattice::new(8, 4.0, Units::default()).unwrap();
        let s = circular_wave(&l, 1.5, 1);
        let phi = phi_from_em(&l, &s).unwrap();
        let (n, nbar) = photon_number(&l, &phi);
        assert!(n > 0.0);
        assert!(nbar < 1e-28);
    }
}
