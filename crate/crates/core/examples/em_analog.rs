//! Helicity split of a free electromagnetic field and its energy forms.

use diraclab::em;
use diraclab::{Lattice, Units};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> diraclab::Result<()> {
    let lattice = Lattice::new(16, 16.0, Units::default())?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let state = em::random_free_field(&lattice, &mut rng);
    let e = em::em_energies(&lattice, &state)?;
    println!(
        "standard {:.10}  phi {:.10}  particle {:.10}",
        e.standard, e.phi, e.particle
    );

    let phi = em::phi_from_em(&lattice, &state)?;
    let (n, nbar) = em::photon_number(&lattice, &phi);
    println!("N_γ = {n:.6}  N_γ̄ = {nbar:.6}");

    let dt = 0.9;
    let a = em::phi_evolve(&lattice, &phi, dt);
    let b = em::phi_from_em(&lattice, &em::maxwell_evolve(&lattice, &state, dt))?;
    println!("φ evolution vs Maxwell evolution: {:.3e}", a.phi.sub(&b.phi).max_abs());

    let circular = em::circular_wave(&lattice, 0.5, 2);
    let (n, nbar) = em::photon_number(&lattice, &em::phi_from_em(&lattice, &circular)?);
    println!("circular wave: N_γ = {n:.6}  N_γ̄ = {nbar:.3e}");
    Ok(())
}
