//! Mode-sum energies and charges of both theories.

use diraclab::field::Band;
use diraclab::observables;
use diraclab::{Lattice, ModeAmplitudes, Units};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> diraclab::Result<()> {
    let lattice = Lattice::new(8, 8.0, Units::default())?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let modes = ModeAmplitudes::random(&lattice, &mut rng, Band::Dealiased);

    for (name, m) in [
        ("electrons only", modes.electron_part()),
        ("positrons only", modes.positron_part()),
        ("mixed", modes.clone()),
    ] {
        let r = observables::observable_report(&lattice, &m);
        println!(
            "{name:>15}: E_orig = {:+.6} E_rev = {:+.6} Q_orig = {:+.6} Q_rev = {:+.6}",
            r.e_original, r.e_revised, r.q_original, r.q_revised
        );
    }
    let spatial = observables::observable_report_spatial(&lattice, &modes, 1.3);
    let mode_sum = observables::observable_report(&lattice, &modes);
    println!(
        "spatial vs mode sum, revised energy: {:.3e}",
        (spatial.e_revised - mode_sum.e_revised).abs()
    );
    Ok(())
}
