//! The classical Dirac field as plane-wave mode amplitudes.
//!
//! Amplitudes are stored per lattice bin and normalized as `B = b·Δp^{3/2}`
//! (likewise `D`), which turns the continuum expansion into
//!
//! ```text
//! ψ(x,t) = L^{-3/2} Σ_n (2E_n)^{-1/2} Σ_s [ Bˢ_n uˢ(p_n) e^{ i(p_n·x - E t)/ħ}
//!                                         + Dˢ*_n vˢ(p_n) e^{-i(p_n·x - E t)/ħ} ]
//! ```
//!
//! so energies, charges and particle numbers become exact finite sums.
//!
//! The `D` amplitude with label `n` lives in the spatial bin `-n`. On the
//! Nyquist planes `-n` wraps onto `n` itself; there the `v` spinor is
//! evaluated at the negated *bin* momentum so that every bin stays an exact
//! eigenvector of the lattice Hamiltonian.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::lattice::{transform, Direction, Lattice, SpinorField};
use crate::spinor::{dirac_hamiltonian, inner, SpinBasis};

/// Which frequency family to include when synthesizing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Positive,
    Negative,
    Both,
}

/// Support of randomly drawn amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Band {
    /// Every bin.
    Full,
    /// Only bins with `|n_i| < N/4`, so quadratic densities do not alias.
    Dealiased,
}

/// Electron amplitudes `B[s][n]` and positron amplitudes `D[s][n]`, at the
/// `t = 0` reference phase.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeAmplitudes {
    pub b: [Vec<Complex64>; 2],
    pub d: [Vec<Complex64>; 2],
}

impl ModeAmplitudes {
    pub fn zeros(lattice: &Lattice) -> Self {
        let z = vec![Complex64::new(0.0, 0.0); lattice.sites()];
        Self {
            b: [z.clone(), z.clone()],
            d: [z.clone(), z],
        }
    }

    /// Uniform random real and imaginary parts in `[-1, 1)`.
    pub fn random<R: Rng>(lattice: &Lattice, rng: &mut R, band: Band) -> Self {
        let mut m = Self::zeros(lattice);
        for idx in 0..lattice.sites() {
            if band == Band::Dealiased && !lattice.in_dealiased_band(idx) {
                continue;
            }
            for s in 0..2 {
                m.b[s][idx] = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                m.d[s][idx] = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            }
        }
        m
    }

    pub fn check_shape(&self, lattice: &Lattice) -> Result<()> {
        for v in self.b.iter().chain(self.d.iter()) {
            if v.len() != lattice.sites() {
                return Err(Error::ShapeMismatch {
                    expected: lattice.sites(),
                    actual: v.len(),
                });
            }
        }
        if let Some(bad) = self
            .b
            .iter()
            .chain(self.d.iter())
            .flat_map(|v| v.iter())
            .find(|x| !x.re.is_finite() || !x.im.is_finite())
        {
            return Err(Error::InvalidLattice(format!("non-finite mode amplitude {bad}")));
        }
        Ok(())
    }

    /// `Σ |B|²`.
    pub fn electron_weight(&self) -> f64 {
        self.b.iter().flat_map(|v| v.iter()).map(|x| x.norm_sqr()).sum()
    }

    /// `Σ |D|²`.
    pub fn positron_weight(&self) -> f64 {
        self.d.iter().flat_map(|v| v.iter()).map(|x| x.norm_sqr()).sum()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let f = |v: &Vec<Complex64>| v.iter().map(|x| x * factor).collect::<Vec<_>>();
        Self {
            b: [f(&self.b[0]), f(&self.b[1])],
            d: [f(&self.d[0]), f(&self.d[1])],
        }
    }

    /// Keep only the electron amplitudes.
    pub fn electron_part(&self) -> Self {
        let z = vec![Complex64::new(0.0, 0.0); self.b[0].len()];
        Self {
            b: self.b.clone(),
            d: [z.clone(), z],
        }
    }

    /// Keep only the positron amplitudes.
    pub fn positron_part(&self) -> Self {
        let z = vec![Complex64::new(0.0, 0.0); self.b[0].len()];
        Self {
            b: [z.clone(), z],
            d: self.d.clone(),
        }
    }

    /// Largest entrywise difference to another set of amplitudes.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.b
            .iter()
            .chain(self.d.iter())
            .zip(other.b.iter().chain(other.d.iter()))
            .flat_map(|(x, y)| x.iter().zip(y).map(|(a, b)| (a - b).norm()))
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.b
            .iter()
            .chain(self.d.iter())
            .flat_map(|v| v.iter())
            .fold(0.0, |m, x| m.max(x.norm()))
    }
}

/// The field on the lattice at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub psi: SpinorField,
    pub t: f64,
}

/// Positive- and negative-frequency parts of a field.
///
/// The electron field is `ψ₊`; the positron field is the componentwise
/// complex conjugate of `ψ₋`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSplit {
    pub positive: SpinorField,
    pub negative: SpinorField,
    pub t: f64,
}

impl FieldSplit {
    pub fn electron(&self) -> &SpinorField {
        &self.positive
    }

    pub fn positron(&self) -> SpinorField {
        self.negative.conj()
    }

    pub fn recombine(&self) -> SpinorField {
        self.positive.add(&self.negative)
    }
}

/// Per-bin spinor data: `u(p)` for the electron family and `v(-p)` for the
/// positron amplitude landing in this bin.
struct BinBasis {
    energy: f64,
    u: [[Complex64; 4]; 2],
    v: [[Complex64; 4]; 2],
}

fn bin_basis(lattice: &Lattice, idx: usize) -> BinBasis {
    let units = lattice.units();
    let p = lattice.momentum(idx);
    let up = SpinBasis::compute(p, units);
    let vm = SpinBasis::compute([-p[0], -p[1], -p[2]], units);
    BinBasis {
        energy: up.energy,
        u: up.u,
        v: vm.v,
    }
}

/// Energy attached to mode label `idx`.
pub fn mode_energy(lattice: &Lattice, idx: usize) -> f64 {
    lattice.units().energy(lattice.momentum(idx))
}

/// Momentum-space spinor field of the chosen family, optionally its time
/// derivative.
fn spectrum(lattice: &Lattice, modes: &ModeAmplitudes, t: f64, family: Family, time_derivative: bool) -> SpinorField {
    let hbar = lattice.units().hbar;
    let mut out = SpinorField::zeros(lattice);
    for k in 0..lattice.sites() {
        let basis = bin_basis(lattice, k);
        let e = basis.energy;
        let norm = (2.0 * e).sqrt().recip();
        let mut value = [Complex64::new(0.0, 0.0); 4];
        if family != Family::Negative {
            let mut w = Complex64::from_polar(norm, -e * t / hbar);
            if time_derivative {
                w *= Complex64::new(0.0, -e / hbar);
            }
            for s in 0..2 {
                let amp = modes.b[s][k] * w;
                for i in 0..4 {
                    value[i] += amp * basis.u[s][i];
                }
            }
        }
        if family != Family::Positive {
            let mk = lattice.mirror(k);
            let mut w = Complex64::from_polar(norm, e * t / hbar);
            if time_derivative {
                w *= Complex64::new(0.0, e / hbar);
            }
            for s in 0..2 {
                let amp = modes.d[s][mk].conj() * w;
                for i in 0..4 {
                    value[i] += amp * basis.v[s][i];
                }
            }
        }
        out.set(k, value);
    }
    out
}

/// Position-space field of one frequency family at time `t`.
pub fn synthesize_family(lattice: &Lattice, modes: &ModeAmplitudes, t: f64, family: Family) -> SpinorField {
    transform(lattice, &spectrum(lattice, modes, t, family, false), Direction::Inverse)
}

/// Analytic `∂ψ/∂t` of one frequency family at time `t`.
pub fn time_derivative(lattice: &Lattice, modes: &ModeAmplitudes, t: f64, family: Family) -> SpinorField {
    transform(lattice, &spectrum(lattice, modes, t, family, true), Direction::Inverse)
}

pub fn synthesize(lattice: &Lattice, modes: &ModeAmplitudes, t: f64) -> Result<FieldState> {
    modes.check_shape(lattice)?;
    Ok(FieldState {
        psi: synthesize_family(lattice, modes, t, Family::Both),
        t,
    })
}

/// Exact left inverse of [`synthesize`].
pub fn decompose(lattice: &Lattice, state: &FieldState) -> Result<ModeAmplitudes> {
    state.psi.check_shape(lattice)?;
    let hbar = lattice.units().hbar;
    let spec = transform(lattice, &state.psi, Direction::Forward);
    let mut modes = ModeAmplitudes::zeros(lattice);
    for k in 0..lattice.sites() {
        let basis = bin_basis(lattice, k);
        let e = basis.energy;
        let value = spec.at(k);
        let norm = (2.0 * e).sqrt().recip();
        let undo_pos = Complex64::from_polar(norm, e * state.t / hbar);
        let undo_neg = Complex64::from_polar(norm, -e * state.t / hbar);
        let mk = lattice.mirror(k);
        for s in 0..2 {
            modes.b[s][k] = inner(&basis.u[s], &value) * undo_pos;
            modes.d[s][mk] = (inner(&basis.v[s], &value) * undo_neg).conj();
        }
    }
    Ok(modes)
}

/// Exact free evolution by `dt`: every amplitude picks up `e^{-iE dt/ħ}`.
pub fn evolve(lattice: &Lattice, modes: &ModeAmplitudes, dt: f64) -> ModeAmplitudes {
    let hbar = lattice.units().hbar;
    let mut out = modes.clone();
    for idx in 0..lattice.sites() {
        let phase = Complex64::from_polar(1.0, -mode_energy(lattice, idx) * dt / hbar);
        for s in 0..2 {
            out.b[s][idx] *= phase;
            out.d[s][idx] *= phase;
        }
    }
    out
}

/// `(-iħc α·∇ + β mc²) ψ`, applied spectrally.
pub fn apply_hamiltonian(lattice: &Lattice, psi: &SpinorField) -> SpinorField {
    let mut spec = transform(lattice, psi, Direction::Forward);
    for k in 0..lattice.sites() {
        let h = dirac_hamiltonian(lattice.momentum(k), lattice.units());
        let v = h.apply(&spec.at(k));
        spec.set(k, v);
    }
    transform(lattice, &spec, Direction::Inverse)
}

/// L² norm of `iħ ∂ψ/∂t - Hψ` for an explicit field and time derivative.
pub fn hamiltonian_residual(lattice: &Lattice, psi: &SpinorField, dpsi_dt: &SpinorField) -> f64 {
    let hbar = lattice.units().hbar;
    let h_psi = apply_hamiltonian(lattice, psi);
    let mut total = 0.0;
    for i in 0..4 {
        let r: Vec<Complex64> = dpsi_dt.planes[i]
            .iter()
            .zip(&h_psi.planes[i])
            .map(|(d, h)| Complex64::new(0.0, hbar) * d - h)
            .collect();
        total += lattice.l2_norm(&r).powi(2);
    }
    total.sqrt()
}

/// Dirac-equation residual of the field synthesized from `modes` at `t`,
/// with `∂ψ/∂t` taken from the mode phases and `∇` spectrally.
pub fn dirac_residual(lattice: &Lattice, modes: &ModeAmplitudes, t: f64) -> f64 {
    dirac_residual_family(lattice, modes, t, Family::Both)
}

pub fn dirac_residual_family(lattice: &Lattice, modes: &ModeAmplitudes, t: f64, family: Family) -> f64 {
    let psi = synthesize_family(lattice, modes, t, family);
    let dpsi = time_derivative(lattice, modes, t, family);
    hamiltonian_residual(lattice, &psi, &dpsi)
}

pub fn split(lattice: &Lattice, state: &FieldState) -> Result<FieldSplit> {
    let modes = decompose(lattice, state)?;
    Ok(split_modes(lattice, &modes, state.t))
}

/// Frequency split straight from amplitudes.
pub fn split_modes(lattice: &Lattice, modes: &ModeAmplitudes, t: f64) -> FieldSplit {
    FieldSplit {
        positive: synthesize_family(lattice, modes, t, Family::Positive),
        negative: synthesize_family(lattice, modes, t, Family::Negative),
        t,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::Units;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn lat() -> Lattice {
        Lattice::new(4, 5.0, Units::default()).unwrap()
    }

    #[test]
    fn zero_modes_give_zero_field() {
        let l = lat();
        let s = synthesize(&l, &ModeAmplitudes::zeros(&l), 0.3).unwrap();
        assert_eq!(s.psi.max_abs(), 0.0);
        let back = decompose(&l, &s).unwrap();
        assert_eq!(back.max_abs(), 0.0);
    }

    #[test]
    fn single_rest_mode_is_uniform() {
        let l = lat();
        let mut m = ModeAmplitudes::zeros(&l);
        m.b[0][0] = Complex64::new(1.0, 0.0);
        let s = synthesize(&l, &m, 0.0).unwrap();
        // L^{-3/2} (2mc²)^{-1/2} √(2mc²) (1,0,0,0)
        let expected = 5f64.powf(-1.5);
        for idx in 0..l.sites() {
            let v = s.psi.at(idx);
            assert!((v[0].re - expected).abs() < 1e-15);
            assert!(v[0].im.abs() < 1e-15);
            for c in &v[1..] {
                assert!(c.norm() < 1e-15);
            }
        }
    }

    #[test]
    fn shape_mismatch_rejected() {
        let l = lat();
        let other = Lattice::new(6, 5.0, Units::default()).unwrap();
        let m = ModeAmplitudes::zeros(&other);
        assert!(matches!(synthesize(&l, &m, 0.0), Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn evolve_zero_is_identity_and_full_period_returns() {
        let l = lat();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = ModeAmplitudes::random(&l, &mut rng, Band::Full);
        assert_eq!(evolve(&l, &m, 0.0), m);

        let mut single = ModeAmplitudes::zeros(&l);
        let idx = l.index([1, 2, 3]);
        single.b[1][idx] = Complex64::new(0.3, -0.8);
        let period = 2.0 * std::f64::consts::PI / mode_energy(&l, idx);
        let back = evolve(&l, &single, period);
        assert!(back.max_abs_diff(&single) < 1e-14);
    }

    #[test]
    fn pure_u_content_has_no_positron_amplitude() {
        let l = lat();
        let mut m = ModeAmplitudes::zeros(&l);
        m.b[0][l.index([1, 0, 3])] = Complex64::new(0.5, 0.5);
        let back = decompose(&l, &synthesize(&l, &m, 0.7).unwrap()).unwrap();
        assert!(back.positron_weight() < 1e-28);
        assert!(back.max_abs_diff(&m) < 1e-14);
    }

    #[test]
    fn random_full_band_roundtrip_and_residual() {
        let l = Lattice::new(
            6,
            4.0,
            Units {
                hbar: 1.0,
                c: 1.3,
                mass: 0.7,
                charge: 1.0,
            },
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = ModeAmplitudes::random(&l, &mut rng, Band::Full);
        let s = synthesize(&l, &m, 0.45).unwrap();
        let back = decompose(&l, &s).unwrap();
        assert!(back.max_abs_diff(&m) < 1e-12, "{}", back.max_abs_diff(&m));
        let r = dirac_residual(&l, &m, 0.45);
        assert!(r < 1e-11 * s.psi.l2_norm(&l), "{r}");
    }
}
