//! RMS charge radius of a Gaussian electron packet versus its target width.

use diraclab::field;
use diraclab::observables::{self, PacketKind};
use diraclab::{Lattice, Units};

fn main() -> diraclab::Result<()> {
    let lattice = Lattice::new(64, 16.0, Units::default())?;
    let center = [8.0; 3];
    println!("{:>6} {:>10} {:>14}", "σ", "rms", "rms/(σ√1.5)");
    for sigma in [2.0, 1.5, 1.0, 0.75] {
        let modes = observables::build_packet(&lattice, center, sigma, 0, PacketKind::Electron)?;
        let split = field::split_modes(&lattice, &modes, 0.0);
        let (electron, _) = observables::four_current_revised(&lattice, &split);
        let rms = observables::packet_width(&lattice, &electron.rho)?;
        println!("{sigma:>6.2} {rms:>10.5} {:>14.5}", rms / (sigma * 1.5f64.sqrt()));
    }
    Ok(())
}
