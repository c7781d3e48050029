//! Lift a field sample into the Grassmann algebra and compare energy forms.

use diraclab::field::{self, Band, Family};
use diraclab::grassmann::{self, EnergyForm};
use diraclab::{Lattice, ModeAmplitudes, Units};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> diraclab::Result<()> {
    let lattice = Lattice::new(4, 4.0, Units::default())?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let modes = ModeAmplitudes::random(&lattice, &mut rng, Band::Full);
    let sites = [0, 9, 42];
    let psi = field::synthesize_family(&lattice, &modes, 0.0, Family::Both);
    let lifted = grassmann::lift_field(&psi, &sites)?;
    println!("{} generator pairs", lifted.algebra().pairs());

    let main = grassmann::grassmann_energy(&lattice, &modes, 0.0, &sites, EnergyForm::Main)?;
    let reordered = grassmann::grassmann_energy(&lattice, &modes, 0.0, &sites, EnergyForm::Reordered)?;
    println!("energy element: {} monomials, degrees {:?}", main.len(), main.degrees());
    println!("main - reordered = {}", main.max_abs_diff(&reordered));

    let rho = lifted.charge_density(0, 1.0)?;
    println!("charge density at site 0: {} monomials", rho.len());
    println!("unlift matches samples: {}", lifted.unlift().len() == 4 * sites.len());
    Ok(())
}
