//! Spin angular momentum and magnetic moment of a spin-up packet.

use diraclab::field;
use diraclab::observables::{self, PacketKind};
use diraclab::{Lattice, Units};

fn main() -> diraclab::Result<()> {
    let units = Units::default();
    let lattice = Lattice::new(96, 32.0, units)?;
    let modes = observables::build_packet(&lattice, [16.0; 3], 2.0, 0, PacketKind::Electron)?;
    let split = field::split_modes(&lattice, &modes, 0.0);
    let s = observables::spin_diagnostics(&lattice, &split)?;
    let magneton = units.charge * units.hbar / (2.0 * units.mass * units.c);
    println!("L_z = {:.6} ħ", s.l_z / units.hbar);
    println!("μ_z = {:.6} (Bohr magnetons: {:.6})", s.mu_z, -s.mu_z / magneton);
    println!("g   = {:.6}", s.g_ratio);
    println!("rms = {:.6}", s.rms_radius);
    Ok(())
}
