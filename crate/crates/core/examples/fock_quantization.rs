//! Both quantization routes on a small mode set, compared exactly.

use diraclab::fock::{self, ModeSpec};
use diraclab::Units;

fn main() -> diraclab::Result<()> {
    let spec = ModeSpec::with_energies(&[1.0, 1.5], &[1.25, 2.0])?;
    let units = Units::default();
    let cs = fock::build_space(&spec);
    let ds = fock::build_d_space(&spec);

    let naive = fock::hamiltonian_naive(&cs);
    let normal = fock::hamiltonian_normal(&cs);
    println!("naive H spectrum:  {:?}", fock::spectrum(&naive)?);
    println!("normal H spectrum: {:?}", fock::spectrum(&normal)?);
    println!("vacuum energy (naive): {}", naive.expectation(cs.vacuum()).re);
    println!(
        "charge (naive) spectrum: {:?}",
        fock::spectrum(&fock::charge_naive(&cs, &units))?
    );
    println!(
        "charge (normal) spectrum: {:?}",
        fock::spectrum(&fock::charge_normal(&cs, &units))?
    );

    let direct = fock::hamiltonian_direct(&ds);
    println!(
        "R H_normal R† - H_direct = {}",
        fock::relabel(&spec, &normal).max_abs_diff(&direct)
    );
    for k in 0..spec.c_slots().len() {
        println!(
            "R c_{k}† R† - d_{k} = {}",
            fock::relabel(&spec, &cs.c_dag(k)).max_abs_diff(ds.d(k))
        );
    }
    Ok(())
}
