//! Continuity residuals of the three four-currents.

use diraclab::field::{self, Band};
use diraclab::observables;
use diraclab::{Lattice, ModeAmplitudes, Units};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> diraclab::Result<()> {
    let lattice = Lattice::new(16, 16.0, Units::default())?;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let modes = ModeAmplitudes::random(&lattice, &mut rng, Band::Dealiased);
    let t = 0.4;
    let state = field::synthesize(&lattice, &modes, t)?;
    let split = field::split(&lattice, &state)?;

    let original = observables::four_current_original(&lattice, &state);
    let (electron, positron) = observables::four_current_revised(&lattice, &split);
    let literal = observables::positron_current_unconjugated(&lattice, &split);
    for (name, current) in [
        ("original", &original),
        ("electron", &electron),
        ("positron", &positron),
        ("positron, unconjugated α", &literal),
    ] {
        let r = observables::continuity_residual(&lattice, current, &modes, t);
        println!("{name:>25}: relative residual {:.3e}", r.relative());
    }
    Ok(())
}
