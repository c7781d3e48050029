//! Clifford algebra, plane-wave spinors and their completeness.

use diraclab::spinor::{self, inner, metric, Mat4};
use diraclab::{Complex64, Units};

fn main() -> diraclab::Result<()> {
    let g = spinor::gamma_matrices();
    let mut clifford: f64 = 0.0;
    for mu in 0..4 {
        for nu in 0..4 {
            let expected = Mat4::identity().scale(Complex64::new(2.0 * metric(mu, nu), 0.0));
            clifford = clifford.max(g.gamma[mu].anticommutator(&g.gamma[nu]).max_abs_diff(&expected));
        }
    }
    println!("max |{{γ^μ, γ^ν}} - 2g^μν| = {clifford:.3e}");

    let units = Units::default();
    let p = [0.3, -0.7, 1.1];
    let basis = spinor::basis_spinors(p, &units)?;
    let h = spinor::dirac_hamiltonian(p, &units);
    let hm = spinor::dirac_hamiltonian([-p[0], -p[1], -p[2]], &units);
    println!("E(p) = {:.6}", basis.energy);
    for s in 0..2 {
        let hu = h.apply(&basis.u[s]);
        let hv = hm.apply(&basis.v[s]);
        let ru = (0..4)
            .map(|i| (hu[i] - basis.u[s][i] * basis.energy).norm())
            .fold(0.0, f64::max);
        let rv = (0..4)
            .map(|i| (hv[i] + basis.v[s][i] * basis.energy).norm())
            .fold(0.0, f64::max);
        println!(
            "s={s}: u†u = {:.6}  |H u - E u| = {ru:.2e}  |H(-p) v + E v| = {rv:.2e}",
            inner(&basis.u[s], &basis.u[s]).re
        );
    }
    println!(
        "spinor completeness error = {:.3e}",
        diraclab::fock::spinor_completeness_error(p, &units)
    );
    Ok(())
}
