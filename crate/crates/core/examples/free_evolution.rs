//! Synthesize a random field, evolve it exactly and check the Dirac equation.

use diraclab::field::{self, Band};
use diraclab::{Lattice, ModeAmplitudes, Units};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> diraclab::Result<()> {
    let lattice = Lattice::new(16, 16.0, Units::default())?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let modes = ModeAmplitudes::random(&lattice, &mut rng, Band::Dealiased);

    let state = field::synthesize(&lattice, &modes, 0.0)?;
    let back = field::decompose(&lattice, &state)?;
    println!("decompose(synthesize(a)) - a = {:.3e}", back.max_abs_diff(&modes));

    for step in 0..=4 {
        let t = 0.5 * step as f64;
        let evolved = field::evolve(&lattice, &modes, t);
        let psi = field::synthesize(&lattice, &evolved, 0.0)?;
        let direct = field::synthesize(&lattice, &modes, t)?;
        let norm = psi.psi.l2_norm(&lattice);
        println!(
            "t = {t:.1}  ‖ψ‖ = {norm:.12}  evolve vs phase = {:.2e}  Dirac residual = {:.2e}",
            psi.psi.sub(&direct.psi).max_abs(),
            field::dirac_residual(&lattice, &modes, t) / norm
        );
    }
    Ok(())
}
