//! Energy, charge, current and particle number in both observable systems,
//! plus wavepacket diagnostics.
//!
//! The *original* system reads every observable off the full field `ψ`.
//! The *revised* system splits `ψ = ψ₊ + ψ₋`, treats `ψ_e = ψ₊` as the
//! electron field and `ψ_p = ψ₋*` as the positron field, and gives both
//! positive energy and opposite charges.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{
    mode_energy, split_modes, synthesize_family, time_derivative, Family, FieldSplit, FieldState, ModeAmplitudes,
};
use crate::lattice::{DensityField, Lattice, RealField, ScalarGrid, SpinorField, VectorDensityField};
use crate::spinor::{gamma_matrices, Mat4};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theory {
    Original,
    Revised,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityVariant {
    /// `iħ ψ†∂ψ/∂t`
    Canonical,
    /// `(iħ/2)(ψ†∂ψ/∂t - ∂ψ†/∂t ψ)`
    Symmetrized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurrentTag {
    Original,
    Electron,
    Positron,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PacketKind {
    Electron,
    Positron,
}

/// The six conserved scalars of both theories.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableReport {
    pub e_original: f64,
    pub e_revised: f64,
    pub q_original: f64,
    pub q_revised: f64,
    pub n_electron: f64,
    pub n_positron: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FourCurrent {
    pub rho: DensityField,
    pub j: VectorDensityField,
    pub tag: CurrentTag,
}

impl FourCurrent {
    /// `a³ Σ ρ`.
    pub fn total_charge(&self, lattice: &Lattice) -> f64 {
        self.rho.total(lattice)[0]
    }
}

/// L² norm of `∂ρ/∂t + ∇·J` and the size of the terms it balances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuityResidual {
    pub absolute: f64,
    /// `‖∂ρ/∂t‖ + ‖∇·J‖`.
    pub scale: f64,
}

impl ContinuityResidual {
    pub fn relative(&self) -> f64 {
        if self.scale > 0.0 {
            self.absolute / self.scale
        } else {
            self.absolute
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinReport {
    pub mu_z: f64,
    pub l_z: f64,
    /// `(μ_z / L_z)(2mc / -e)`.
    pub g_ratio: f64,
    pub rms_radius: f64,
}

/// `Σ E (|B|² - |D|²)`.
pub fn energy_original(lattice: &Lattice, modes: &ModeAmplitudes) -> f64 {
    weighted_sum(lattice, modes, -1.0)
}

/// `Σ E (|B|² + |D|²)`.
pub fn energy_revised(lattice: &Lattice, modes: &ModeAmplitudes) -> f64 {
    weighted_sum(lattice, modes, 1.0)
}

fn weighted_sum(lattice: &Lattice, modes: &ModeAmplitudes, d_sign: f64) -> f64 {
    let mut total = 0.0;
    for idx in 0..lattice.sites() {
        let e = mode_energy(lattice, idx);
        for s in 0..2 {
            total += e * (modes.b[s][idx].norm_sqr() + d_sign * modes.d[s][idx].norm_sqr());
        }
    }
    total
}

/// `a³ Σ iħ ψ†∂ψ/∂t` evaluated on the lattice.
pub fn energy_original_spatial(lattice: &Lattice, modes: &ModeAmplitudes, t: f64) -> f64 {
    let d = energy_density(lattice, modes, t, DensityVariant::Canonical, Theory::Original);
    total_real(lattice, &d)
}

/// `a³ Σ iħ (ψ_e†∂ψ_e/∂t + ψ_p†∂ψ_p/∂t)` evaluated on the lattice.
pub fn energy_revised_spatial(lattice: &Lattice, modes: &ModeAmplitudes, t: f64) -> f64 {
    let d = energy_density(lattice, modes, t, DensityVariant::Canonical, Theory::Revised);
    total_real(lattice, &d)
}

fn total_real(lattice: &Lattice, d: &ScalarGrid) -> f64 {
    lattice.cell_volume() * d.planes[0].iter().map(|x| x.re).sum::<f64>()
}

/// `-e(N_e + N_p)`.
pub fn charge_original(lattice: &Lattice, modes: &ModeAmplitudes) -> f64 {
    -lattice.units().charge * (modes.electron_weight() + modes.positron_weight())
}

/// `-e N_e + e N_p`.
pub fn charge_revised(lattice: &Lattice, modes: &ModeAmplitudes) -> f64 {
    lattice.units().charge * (modes.positron_weight() - modes.electron_weight())
}

/// Mode-sum values of every scalar observable.
pub fn observable_report(lattice: &Lattice, modes: &ModeAmplitudes) -> ObservableReport {
    ObservableReport {
        e_original: energy_original(lattice, modes),
        e_revised: energy_revised(lattice, modes),
        q_original: charge_original(lattice, modes),
        q_revised: charge_revised(lattice, modes),
        n_electron: modes.electron_weight(),
        n_positron: modes.positron_weight(),
    }
}

/// Same scalars computed from lattice integrals of the fields.
pub fn observable_report_spatial(lattice: &Lattice, modes: &ModeAmplitudes, t: f64) -> ObservableReport {
    let split = split_modes(lattice, modes, t);
    let full = split.recombine();
    let e = lattice.units().charge;
    let (n_e, n_p) = particle_numbers(lattice, &split);
    let n_full = lattice.cell_volume() * full.dot_density(&full).iter().map(|x| x.re).sum::<f64>();
    ObservableReport {
        e_original: energy_original_spatial(lattice, modes, t),
        e_revised: energy_revised_spatial(lattice, modes, t),
        q_original: -e * n_full,
        q_revised: -e * n_e + e * n_p,
        n_electron: n_e,
        n_positron: n_p,
    }
}

/// `(a³ Σ ψ_e†ψ_e, a³ Σ ψ_p†ψ_p)`.
pub fn particle_numbers(lattice: &Lattice, split: &FieldSplit) -> (f64, f64) {
    let count = |f: &SpinorField| lattice.cell_volume() * f.dot_density(f).iter().map(|x| x.re).sum::<f64>();
    (count(&split.positive), count(&split.negative))
}

/// `s ψ†ψ` and `s c ψ†Aψ` for the matrices `A = α_i` (or `α_i*`).
fn bilinear_current(
    lattice: &Lattice,
    psi: &SpinorField,
    charge: f64,
    alpha: &[Mat4; 3],
    tag: CurrentTag,
) -> FourCurrent {
    let c = lattice.units().c;
    let mut rho = vec![0.0; lattice.sites()];
    let mut j: [Vec<f64>; 3] = std::array::from_fn(|_| vec![0.0; lattice.sites()]);
    for idx in 0..lattice.sites() {
        let v = psi.at(idx);
        rho[idx] = charge * v.iter().map(|x| x.norm_sqr()).sum::<f64>();
        for axis in 0..3 {
            let av = alpha[axis].apply(&v);
            let q: Complex64 = v.iter().zip(&av).map(|(a, b)| a.conj() * b).sum();
            j[axis][idx] = charge * c * q.re;
        }
    }
    FourCurrent {
        rho: DensityField::from_values(rho),
        j: RealField { planes: j },
        tag,
    }
}

fn alphas() -> [Mat4; 3] {
    let g = gamma_matrices();
    std::array::from_fn(|i| g.alpha(i + 1))
}

/// `ρ = -e ψ†ψ`, `J = -ec ψ†αψ`.
pub fn four_current_original(lattice: &Lattice, state: &FieldState) -> FourCurrent {
    bilinear_current(
        lattice,
        &state.psi,
        -lattice.units().charge,
        &alphas(),
        CurrentTag::Original,
    )
}

/// Electron current `(-eψ_e†ψ_e, -ec ψ_e†αψ_e)` and positron current
/// `(eψ_p†ψ_p, ec ψ_p†α*ψ_p)`.
///
/// `ψ_p†α*ψ_p` equals `ψ₋†αψ₋`, the current that satisfies the continuity
/// equation together with `ρ_p`. Writing `α` there instead
/// flips the sign of the y component; see [`positron_current_unconjugated`].
pub fn four_current_revised(lattice: &Lattice, split: &FieldSplit) -> (FourCurrent, FourCurrent) {
    let e = lattice.units().charge;
    let a = alphas();
    let electron = bilinear_current(lattice, &split.positive, -e, &a, CurrentTag::Electron);
    // ψ_p†α*ψ_p = ψ₋ᵀ α* ψ₋* = (ψ₋†αψ₋)*, real
    let positron = bilinear_current(lattice, &split.negative, e, &a, CurrentTag::Positron);
    (electron, positron)
}

/// `(eψ_p†ψ_p, ec ψ_p†αψ_p)` with the plain `α`. Not conserved.
pub fn positron_current_unconjugated(lattice: &Lattice, split: &FieldSplit) -> FourCurrent {
    let e = lattice.units().charge;
    let a = alphas();
    bilinear_current(lattice, &split.positron(), e, &a, CurrentTag::Positron)
}

fn family_for(tag: CurrentTag) -> Family {
    match tag {
        CurrentTag::Original => Family::Both,
        CurrentTag::Electron => Family::Positive,
        CurrentTag::Positron => Family::Negative,
    }
}

/// `∂ρ/∂t` of the density carried by `tag`, from the mode phases.
pub fn charge_rate(lattice: &Lattice, tag: CurrentTag, modes: &ModeAmplitudes, t: f64) -> DensityField {
    let family = family_for(tag);
    let psi = synthesize_family(lattice, modes, t, family);
    let dpsi = time_derivative(lattice, modes, t, family);
    let e = lattice.units().charge;
    let charge = match tag {
        CurrentTag::Positron => e,
        _ => -e,
    };
    // |ψ₋|² = |ψ_p|², so all three cases read ∂(s ψ†ψ)/∂t = 2s Re ψ†∂ψ.
    DensityField::from_values(psi.dot_density(&dpsi).iter().map(|x| 2.0 * charge * x.re).collect())
}

/// `‖∂ρ/∂t + ∇·J‖` with `∂ρ/∂t` analytic and `∇` spectral.
pub fn continuity_residual(
    lattice: &Lattice,
    current: &FourCurrent,
    modes: &ModeAmplitudes,
    t: f64,
) -> ContinuityResidual {
    let rate = charge_rate(lattice, current.tag, modes, t);
    continuity_residual_with_rate(lattice, current, &rate)
}

/// Continuity residual against an explicitly supplied `∂ρ/∂t`.
pub fn continuity_residual_with_rate(
    lattice: &Lattice,
    current: &FourCurrent,
    rate: &DensityField,
) -> ContinuityResidual {
    let div = lattice.divergence(&current.j);
    let sum: Vec<Complex64> = div.iter().zip(rate.values()).map(|(d, r)| d + r).collect();
    let rate_c: Vec<Complex64> = rate.values().iter().map(|&r| Complex64::new(r, 0.0)).collect();
    ContinuityResidual {
        absolute: lattice.l2_norm(&sum),
        scale: lattice.l2_norm(&rate_c) + lattice.l2_norm(&div),
    }
}

/// Complex energy density of the chosen theory and variant.
///
/// The canonical density is complex pointwise. Its real part equals the
/// symmetrized density and its imaginary part integrates to zero.
pub fn energy_density(
    lattice: &Lattice,
    modes: &ModeAmplitudes,
    t: f64,
    variant: DensityVariant,
    theory: Theory,
) -> ScalarGrid {
    let hbar = lattice.units().hbar;
    let ih = Complex64::new(0.0, hbar);
    let local = |family: Family, conjugate: bool| -> Vec<Complex64> {
        let psi = synthesize_family(lattice, modes, t, family);
        let dpsi = time_derivative(lattice, modes, t, family);
        psi.dot_density(&dpsi)
            .into_iter()
            .map(|z| {
                // ψ_p†∂ψ_p = (ψ₋†∂ψ₋)*
                let z = if conjugate { z.conj() } else { z };
                match variant {
                    DensityVariant::Canonical => ih * z,
                    DensityVariant::Symmetrized => Complex64::new(-hbar * z.im, 0.0),
                }
            })
            .collect()
    };
    let plane = match theory {
        Theory::Original => local(Family::Both, false),
        Theory::Revised => {
            let e = local(Family::Positive, false);
            let p = local(Family::Negative, true);
            e.iter().zip(&p).map(|(a, b)| a + b).collect()
        }
    };
    ScalarGrid { planes: [plane] }
}

/// Gaussian packet `∝ e^{-σ²|p|²/2ħ²} e^{-ip·x₀/ħ}` on a single spin label,
/// normalized to one particle.
pub fn build_packet(
    lattice: &Lattice,
    center: [f64; 3],
    sigma: f64,
    spin: usize,
    kind: PacketKind,
) -> Result<ModeAmplitudes> {
    if !(sigma.is_finite() && sigma > 0.0) || spin > 1 {
        return Err(Error::InvalidWidth(sigma));
    }
    let units = lattice.units();
    let required = sigma.min(units.compton_length()) / 3.0;
    if lattice.spacing() > required {
        return Err(Error::UnresolvedPacket {
            spacing: lattice.spacing(),
            required,
        });
    }
    let hbar = units.hbar;
    let mut modes = ModeAmplitudes::zeros(lattice);
    let target = match kind {
        PacketKind::Electron => &mut modes.b[spin],
        PacketKind::Positron => &mut modes.d[spin],
    };
    for (idx, slot) in target.iter_mut().enumerate() {
        let p = lattice.momentum(idx);
        let p2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
        let phase = -(p[0] * center[0] + p[1] * center[1] + p[2] * center[2]) / hbar;
        *slot = Complex64::from_polar((-sigma * sigma * p2 / (2.0 * hbar * hbar)).exp(), phase);
    }
    let norm = match kind {
        PacketKind::Electron => modes.electron_weight(),
        PacketKind::Positron => modes.positron_weight(),
    };
    if norm == 0.0 {
        return Err(Error::ZeroField);
    }
    Ok(modes.scaled(norm.sqrt().recip()))
}

/// Periodic centroid of `|ρ|`, one circular mean per axis.
pub fn periodic_centroid(lattice: &Lattice, rho: &DensityField) -> Result<[f64; 3]> {
    let total: f64 = rho.values().iter().map(|x| x.abs()).sum();
    if total == 0.0 || !total.is_finite() {
        return Err(Error::ZeroField);
    }
    let l = lattice.length();
    let mut centroid = [0.0; 3];
    for (axis, c) in centroid.iter_mut().enumerate() {
        let (mut s, mut co) = (0.0, 0.0);
        for (idx, w) in rho.values().iter().enumerate() {
            let theta = 2.0 * PI * lattice.position(idx)[axis] / l;
            s += w.abs() * theta.sin();
            co += w.abs() * theta.cos();
        }
        // A resultant this small has no preferred direction.
        if s.hypot(co) > 1e-12 * total {
            *c = (s.atan2(co) / (2.0 * PI) * l).rem_euclid(l);
        }
    }
    Ok(centroid)
}

/// Minimum-image displacement of site `idx` from `origin`.
pub fn displacement(lattice: &Lattice, idx: usize, origin: [f64; 3]) -> [f64; 3] {
    let l = lattice.length();
    let x = lattice.position(idx);
    std::array::from_fn(|i| {
        let mut d = (x[i] - origin[i]).rem_euclid(l);
        if d >= l / 2.0 {
            d -= l;
        }
        d
    })
}

/// rms radius `√(Σ|x - x̄|²|ρ| / Σ|ρ|)` about the periodic centroid.
pub fn packet_width(lattice: &Lattice, rho: &DensityField) -> Result<f64> {
    let centroid = periodic_centroid(lattice, rho)?;
    let mut num = 0.0;
    let mut den = 0.0;
    for (idx, w) in rho.values().iter().enumerate() {
        let d = displacement(lattice, idx, centroid);
        num += w.abs() * (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
        den += w.abs();
    }
    Ok((num / den).sqrt())
}

/// Shell-averaged `|ρ|` about the periodic centroid: `(r_mid, mean)` per bin,
/// out to `L/2`.
pub fn radial_profile(lattice: &Lattice, rho: &DensityField, bins: usize) -> Result<Vec<(f64, f64)>> {
    let centroid = periodic_centroid(lattice, rho)?;
    let r_max = lattice.length() / 2.0;
    let width = r_max / bins as f64;
    let mut sum = vec![0.0; bins];
    let mut count = vec![0usize; bins];
    for (idx, w) in rho.values().iter().enumerate() {
        let d = displacement(lattice, idx, centroid);
        let r = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
        let b = (r / width) as usize;
        if b < bins {
            sum[b] += w.abs();
            count[b] += 1;
        }
    }
    Ok((0..bins)
        .map(|b| {
            let mean = if count[b] > 0 { sum[b] / count[b] as f64 } else { 0.0 };
            ((b as f64 + 0.5) * width, mean)
        })
        .collect())
}

/// Magnetic moment, angular momentum and their ratio for a one-electron
/// packet.
///
/// `μ_z = (1/2c) a³ Σ (x × J_e)_z` and `L_z = a³ Σ (x × g)_z` about the charge
/// centroid, where `g = Re[ψ_e†(-iħ∇)ψ_e] + (ħ/4)∇×(ψ_e†Σψ_e)` is the
/// symmetric (Belinfante) momentum density. Its curl term carries the spin.
pub fn spin_diagnostics(lattice: &Lattice, split: &FieldSplit) -> Result<SpinReport> {
    let (_, n_p) = particle_numbers(lattice, split);
    if n_p > 1e-6 {
        return Err(Error::PositronContent(n_p));
    }
    let units = lattice.units();
    let (electron, _) = four_current_revised(lattice, split);
    let rms_radius = packet_width(lattice, &electron.rho)?;
    let centroid = periodic_centroid(lattice, &electron.rho)?;

    let psi = &split.positive;
    let g = momentum_density(lattice, psi);

    let dv = lattice.cell_volume();
    let mut mu = 0.0;
    let mut lz = 0.0;
    for idx in 0..lattice.sites() {
        let d = displacement(lattice, idx, centroid);
        mu += d[0] * electron.j.planes[1][idx] - d[1] * electron.j.planes[0][idx];
        lz += d[0] * g.planes[1][idx] - d[1] * g.planes[0][idx];
    }
    let mu_z = mu * dv / (2.0 * units.c);
    let l_z = lz * dv;
    let g_ratio = (mu_z / l_z) * (2.0 * units.mass * units.c / -units.charge);
    Ok(SpinReport {
        mu_z,
        l_z,
        g_ratio,
        rms_radius,
    })
}

/// Symmetric momentum density `Re[ψ†(-iħ∇)ψ] + (ħ/4)∇×(ψ†Σψ)`.
pub fn momentum_density(lattice: &Lattice, psi: &SpinorField) -> VectorDensityField {
    let hbar = lattice.units().hbar;
    let grads: Vec<[Vec<Complex64>; 3]> = psi.planes.iter().map(|p| lattice.gradient(p)).collect();
    let mut orbital: [Vec<f64>; 3] = std::array::from_fn(|_| vec![0.0; lattice.sites()]);
    for (axis, out) in orbital.iter_mut().enumerate() {
        for (idx, o) in out.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for comp in 0..4 {
                acc += psi.planes[comp][idx].conj() * grads[comp][axis][idx];
            }
            // Re[-iħ ψ†∂ψ] = ħ Im[ψ†∂ψ]
            *o = hbar * acc.im;
        }
    }
    let gam = gamma_matrices();
    let sig: [Mat4; 3] = std::array::from_fn(|i| gam.big_sigma(i + 1));
    let mut spin: [Vec<f64>; 3] = std::array::from_fn(|_| vec![0.0; lattice.sites()]);
    for idx in 0..lattice.sites() {
        let v = psi.at(idx);
        for axis in 0..3 {
            let sv = sig[axis].apply(&v);
            spin[axis][idx] = v.iter().zip(&sv).map(|(a, b)| a.conj() * b).sum::<Complex64>().re;
        }
    }
    let curl = lattice.curl(&RealField { planes: spin });
    RealField {
        planes: std::array::from_fn(|axis| {
            orbital[axis]
                .iter()
                .zip(&curl.planes[axis])
                .map(|(o, c)| o + 0.25 * hbar * c)
                .collect()
        }),
    }
}
