use diraclab::fock::{self, FockOperator, ModeSlot, ModeSpec};
use diraclab::{Complex64, Error, Lattice, Units};
use proptest::prelude::*;

/// Dense Jordan–Wigner annihilator by Kronecker products, bit `j` as the
/// `j`-th tensor factor from the least significant end.
fn kron_annihilator(modes: usize, j: usize) -> Vec<Vec<f64>> {
    let lower = [[0.0, 1.0], [0.0, 0.0]];
    let z = [[1.0, 0.0], [0.0, -1.0]];
    let id = [[1.0, 0.0], [0.0, 1.0]];
    let mut m = vec![vec![1.0]];
    for q in 0..modes {
        let f = if q == j {
            lower
        } else if q < j {
            z
        } else {
            id
        };
        let n = m.len();
        let mut out = vec![vec![0.0; 2 * n]; 2 * n];
        for (a, row) in f.iter().enumerate() {
            for (b, &fv) in row.iter().enumerate() {
                for r in 0..n {
                    for c in 0..n {
                        out[a * n + r][b * n + c] = fv * m[r][c];
                    }
                }
            }
        }
        m = out;
    }
    m
}

fn dense_eq(op: &FockOperator, dense: &[Vec<f64>]) -> bool {
    (0..dense.len()).all(|r| (0..dense.len()).all(|c| op.get(r, c) == Complex64::new(dense[r][c], 0.0)))
}

fn enumerate<F: Fn(usize) -> f64>(modes: usize, f: F) -> Vec<f64> {
    let mut v: Vec<f64> = (0..1usize << modes).map(f).collect();
    v.sort_by(f64::total_cmp);
    v
}

#[test]
fn operators_match_kronecker_construction() {
    let spec = ModeSpec::with_energies(&[1.0, 2.0, 3.0], &[1.5, 2.5]).unwrap();
    let cs = fock::build_space(&spec);
    for k in 0..3 {
        assert!(dense_eq(cs.0.b(k), &kron_annihilator(5, k)));
    }
    for k in 0..2 {
        assert!(dense_eq(cs.c(k), &kron_annihilator(5, 3 + k)));
    }
}

#[test]
fn unit_two_mode_preset_spectra() {
    let spec = ModeSpec::with_energies(&[1.0], &[1.0]).unwrap();
    let cs = fock::build_space(&spec);
    assert_eq!(
        fock::spectrum(&fock::hamiltonian_naive(&cs)).unwrap(),
        vec![-1.0, 0.0, 0.0, 1.0]
    );
    assert_eq!(
        fock::spectrum(&fock::hamiltonian_normal(&cs)).unwrap(),
        vec![0.0, 1.0, 1.0, 2.0]
    );
    let ds = fock::build_d_space(&spec);
    assert_eq!(
        fock::spectrum(&fock::hamiltonian_direct(&ds)).unwrap(),
        vec![0.0, 1.0, 1.0, 2.0]
    );
}

#[test]
fn spectra_match_occupation_enumeration() {
    let eb = [1.0, 1.75, 2.5];
    let ec = [1.25, 3.0];
    let units = Units {
        charge: 0.5,
        ..Units::default()
    };
    let spec = ModeSpec::with_energies(&eb, &ec).unwrap();
    let cs = fock::build_space(&spec);
    let bit = |n: usize, j: usize| ((n >> j) & 1) as f64;
    let nb = |n: usize| (0..3).map(|j| bit(n, j)).sum::<f64>();
    let nc = |n: usize| (0..2).map(|j| bit(n, 3 + j)).sum::<f64>();
    let eb_occ = |n: usize| (0..3).map(|j| eb[j] * bit(n, j)).sum::<f64>();
    let ec_occ = |n: usize| (0..2).map(|j| ec[j] * bit(n, 3 + j)).sum::<f64>();
    let ec_hole = |n: usize| (0..2).map(|j| ec[j] * (1.0 - bit(n, 3 + j))).sum::<f64>();
    let e = units.charge;
    let cases: Vec<(FockOperator, Vec<f64>)> = vec![
        (fock::hamiltonian_naive(&cs), enumerate(5, |n| eb_occ(n) - ec_occ(n))),
        (fock::hamiltonian_normal(&cs), enumerate(5, |n| eb_occ(n) + ec_hole(n))),
        (fock::charge_naive(&cs, &units), enumerate(5, |n| -e * (nb(n) + nc(n)))),
        (
            fock::charge_normal(&cs, &units),
            enumerate(5, |n| -e * nb(n) + e * (2.0 - nc(n))),
        ),
    ];
    for (op, expected) in cases {
        let got = fock::spectrum(&op).unwrap();
        for (a, b) in got.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-14, "{got:?} vs {expected:?}");
        }
    }
}

#[test]
fn c_vacuum_is_annihilated_and_has_zero_normal_energy() {
    let spec = ModeSpec::with_energies(&[1.0, 2.0], &[1.5, 0.5]).unwrap();
    let cs = fock::build_space(&spec);
    let vac = cs.vacuum();
    for k in 0..2 {
        assert!(cs.0.b(k).apply_basis(vac).is_empty());
        assert!(cs.c_dag(k).apply_basis(vac).is_empty());
        assert!(cs.d(k).apply_basis(vac).is_empty());
    }
    assert_eq!(fock::hamiltonian_normal(&cs).expectation(vac), Complex64::new(0.0, 0.0));
    assert_eq!(fock::hamiltonian_naive(&cs).expectation(vac), Complex64::new(-2.0, 0.0));
    assert_eq!(
        fock::hamiltonian_naive(&cs).expectation(cs.bare()),
        Complex64::new(0.0, 0.0)
    );
}

#[test]
fn relabeling_is_unitary_and_carries_c_dagger_to_d() {
    let spec = ModeSpec::with_energies(&[1.0, 2.0], &[1.5, 0.5, 3.0]).unwrap();
    let cs = fock::build_space(&spec);
    let ds = fock::build_d_space(&spec);
    let r = fock::relabeling(&spec);
    assert_eq!(r.mul(&r.adjoint()), FockOperator::identity(spec.dim()));
    for k in 0..3 {
        assert_eq!(fock::relabel(&spec, &cs.c_dag(k)), *ds.d(k));
        assert_eq!(fock::relabel(&spec, cs.c(k)), ds.d_dag(k));
    }
    for k in 0..2 {
        assert_eq!(fock::relabel(&spec, cs.0.b(k)), *ds.0.b(k));
    }
    assert_eq!(
        fock::relabel(&spec, &fock::hamiltonian_normal(&cs)),
        fock::hamiltonian_direct(&ds)
    );
    let image = r.apply_basis(cs.vacuum());
    assert_eq!(image.len(), 1);
    assert_eq!(image[0].0, ds.vacuum());
}

#[test]
fn dimension_cap_enforced() {
    let e = vec![1.0; 7];
    assert!(matches!(
        ModeSpec::with_energies(&e, &e),
        Err(Error::DimensionCap { .. })
    ));
}

#[test]
fn off_shell_energies_rejected() {
    let units = Units::default();
    let good = ModeSlot::on_shell([0.5, 0.0, 0.0], 0, &units);
    let bad = ModeSlot { energy: -1.0, ..good };
    assert!(ModeSpec::new(vec![good], vec![bad]).is_err());
}

#[test]
fn truncated_field_operators_anticommute_canonically() {
    let lat = Lattice::new(4, 3.0, Units::default()).unwrap();
    let bins = [0, lat.index([1, 0, 0]), lat.index([0, 3, 1])];
    let pairs = [(0, 0), (0, 5), (7, 21), (13, 13)];
    let r = fock::field_operator_check(&lat, &bins, &pairs).unwrap();
    assert_eq!(r.modes, 12);
    assert!(r.completeness < 1e-12);
    assert!(r.mixed < 1e-12, "{}", r.mixed);
    assert!(r.same < 1e-12, "{}", r.same);
}

#[test]
fn spinor_completeness_holds() {
    let units = Units {
        mass: 0.7,
        c: 1.3,
        hbar: 1.0,
        charge: 1.0,
    };
    for p in [[0.0; 3], [1.0, -2.0, 0.5], [10.0, 3.0, -7.0]] {
        let e = units.energy(p);
        assert!(fock::spinor_completeness_error(p, &units) < 1e-13 * e);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn naive_and_normal_differ_by_constants(
        eb in prop::collection::vec(0.1..5.0f64, 0..4),
        ec in prop::collection::vec(0.1..5.0f64, 1..4),
        charge in 0.1..2.0f64,
    ) {
        let spec = ModeSpec::with_energies(&eb, &ec).unwrap();
        let cs = fock::build_space(&spec);
        let units = Units { charge, ..Units::default() };
        let id = FockOperator::identity(spec.dim());
        let sea: f64 = ec.iter().sum();
        let h = fock::hamiltonian_naive(&cs).sub(&fock::hamiltonian_normal(&cs).sub(&id.scale_real(sea)));
        prop_assert!(h.max_abs() < 1e-13 * sea);
        let q = fock::charge_naive(&cs, &units)
            .sub(&fock::charge_normal(&cs, &units).sub(&id.scale_real(charge * ec.len() as f64)));
        prop_assert!(q.max_abs() < 1e-13);
        prop_assert!(fock::charge_normal(&cs, &units).commutator(&fock::hamiltonian_normal(&cs)).is_zero());
        prop_assert!(fock::spectrum(&fock::hamiltonian_normal(&cs)).unwrap()[0] == 0.0);
    }

    #[test]
    fn canonical_anticommutators(mb in 0usize..4, mc in 0usize..4) {
        let eb = vec![1.0; mb];
        let ec = vec![1.0; mc];
        prop_assume!(mb + mc > 0);
        let spec = ModeSpec::with_energies(&eb, &ec).unwrap();
        let cs = fock::build_space(&spec);
        let ds = fock::build_d_space(&spec);
        let dim = spec.dim();
        let id = FockOperator::identity(dim);
        let mut ops: Vec<FockOperator> = (0..mb).map(|k| cs.0.b(k).clone()).collect();
        ops.extend((0..mc).map(|k| cs.d(k)));
        let mut direct: Vec<FockOperator> = (0..mb).map(|k| ds.0.b(k).clone()).collect();
        direct.extend((0..mc).map(|k| ds.d(k).clone()));
        for set in [&ops, &direct] {
            for (i, a) in set.iter().enumerate() {
                for (j, b) in set.iter().enumerate() {
                    let expected = if i == j { id.clone() } else { FockOperator::zero(dim) };
                    prop_assert_eq!(a.anticommutator(&b.adjoint()), expected);
                    prop_assert!(a.anticommutator(b).is_zero());
                }
            }
        }
    }
}
