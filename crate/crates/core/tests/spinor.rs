use diraclab::spinor::{self, inner, metric, pauli, Mat4};
use diraclab::{Complex64, Units};
use proptest::prelude::*;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[test]
fn clifford_relation_is_exact() {
    let g = spinor::gamma_matrices();
    for mu in 0..4 {
        for nu in 0..4 {
            let expected = Mat4::identity().scale(c(2.0 * metric(mu, nu)));
            assert_eq!(g.gamma[mu].anticommutator(&g.gamma[nu]), expected, "μ={mu} ν={nu}");
        }
    }
}

#[test]
fn gamma_hermiticity() {
    let g = spinor::gamma_matrices();
    assert!(g.gamma[0].is_hermitian());
    for i in 1..4 {
        assert!(g.gamma[i].is_anti_hermitian());
        assert!(g.alpha(i).is_hermitian());
    }
}

#[test]
fn pauli_algebra() {
    let s = pauli();
    let i = Complex64::new(0.0, 1.0);
    assert_eq!(s[0] * s[1], s[2].scale(i));
    assert_eq!(s[1] * s[2], s[0].scale(i));
    assert_eq!(s[2] * s[0], s[1].scale(i));
}

#[test]
fn spin_matrices_commutation() {
    let g = spinor::gamma_matrices();
    let i2 = Complex64::new(0.0, 2.0);
    assert_eq!(g.big_sigma(1).commutator(&g.big_sigma(2)), g.big_sigma(3).scale(i2));
}

#[test]
fn rest_frame_spinors() {
    let units = Units {
        mass: 2.0,
        c: 3.0,
        hbar: 0.5,
        charge: 1.0,
    };
    let b = spinor::basis_spinors([0.0; 3], &units).unwrap();
    assert_eq!(b.energy, 18.0);
    let n = 6.0;
    assert_eq!(b.u[0], [c(n), c(0.0), c(0.0), c(0.0)]);
    assert_eq!(b.v[1], [c(0.0), c(0.0), c(0.0), c(n)]);
}

#[test]
fn massless_rejected() {
    let units = Units {
        mass: 0.0,
        ..Units::default()
    };
    assert!(spinor::basis_spinors([1.0, 0.0, 0.0], &units).is_err());
}

#[test]
fn spin1_matrices_are_hermitian_and_satisfy_angular_momentum_algebra() {
    let s = spinor::spin1_matrices().s;
    let i = Complex64::new(0.0, 1.0);
    for a in 0..3 {
        assert!(s[a].is_hermitian());
        let b = (a + 1) % 3;
        let d = (a + 2) % 3;
        assert!(s[a].commutator(&s[b]).max_abs_diff(&s[d].scale(i)) < 1e-15);
    }
}

proptest! {
    #[test]
    fn basis_spinors_are_eigenvectors_and_normalized(px in -5.0..5.0f64, py in -5.0..5.0f64, pz in -5.0..5.0f64, m in 0.2..3.0f64) {
        let units = Units { mass: m, ..Units::default() };
        let p = [px, py, pz];
        let b = spinor::basis_spinors(p, &units).unwrap();
        let h = spinor::dirac_hamiltonian(p, &units);
        let hm = spinor::dirac_hamiltonian([-px, -py, -pz], &units);
        let e = b.energy;
        let tol = 1e-12 * e * e;
        for s in 0..2 {
            let hu = h.apply(&b.u[s]);
            let hv = hm.apply(&b.v[s]);
            for i in 0..4 {
                prop_assert!((hu[i] - b.u[s][i] * e).norm() < tol);
                prop_assert!((hv[i] + b.v[s][i] * e).norm() < tol);
            }
            for r in 0..2 {
                let delta = if r == s { 2.0 * e } else { 0.0 };
                prop_assert!((inner(&b.u[r], &b.u[s]) - delta).norm() < tol);
                prop_assert!((inner(&b.v[r], &b.v[s]) - delta).norm() < tol);
            }
        }
    }

    #[test]
    fn hamiltonian_squares_to_energy_squared(px in -5.0..5.0f64, py in -5.0..5.0f64, pz in -5.0..5.0f64) {
        let units = Units::default();
        let h = spinor::dirac_hamiltonian([px, py, pz], &units);
        let e2 = units.energy([px, py, pz]).powi(2);
        prop_assert!((h * h).max_abs_diff(&Mat4::identity().scale(c(e2))) < 1e-12 * e2);
    }
}
