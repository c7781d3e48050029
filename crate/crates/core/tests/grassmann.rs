use diraclab::field::{self, Band, Family};
use diraclab::grassmann::{self, EnergyForm, Generator, GrassmannAlgebra, GrassmannElement};
use diraclab::lattice::SpinorField;
use diraclab::observables;
use diraclab::{Complex64, Error, Lattice, ModeAmplitudes, Units};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const PAIRS: usize = 4;

fn alg() -> GrassmannAlgebra {
    GrassmannAlgebra::new(PAIRS).unwrap()
}

fn gen(a: GrassmannAlgebra, bit: usize) -> Generator {
    if bit < a.pairs() {
        Generator::Alpha(bit)
    } else {
        Generator::AlphaStar(bit - a.pairs())
    }
}

/// Product of generators in the listed order, built one factor at a time.
fn word(a: GrassmannAlgebra, bits: &[usize]) -> GrassmannElement {
    bits.iter().fold(a.one(), |acc, &b| {
        acc.multiply(&a.generator(gen(a, b)).unwrap()).unwrap()
    })
}

/// Sign of sorting a generator list by bubble sort; zero on repeats.
fn bubble_sign(bits: &[usize]) -> f64 {
    let mut v = bits.to_vec();
    let mut sign = 1.0;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] == v[j + 1] {
                return 0.0;
            }
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        0.0
    } else {
        sign
    }
}

fn element() -> impl Strategy<Value = GrassmannElement> {
    let term = (0u64..1 << (2 * PAIRS), -8i32..8, -8i32..8);
    prop::collection::vec(term, 0..6).prop_map(|terms| {
        let a = alg();
        terms.into_iter().fold(a.zero(), |acc, (mask, re, im)| {
            let bits: Vec<usize> = (0..2 * PAIRS).filter(|b| mask >> b & 1 == 1).collect();
            let c = Complex64::new(re as f64 / 4.0, im as f64 / 4.0);
            acc.add(&word(a, &bits).scale(c)).unwrap()
        })
    })
}

/// Homogeneous of one parity: keep only terms of even or odd degree.
fn parity_part(x: &GrassmannElement, odd: bool) -> GrassmannElement {
    let a = x.algebra();
    x.terms()
        .filter(|(m, _)| (m.count_ones() % 2 == 1) == odd)
        .fold(a.zero(), |acc, (m, c)| {
            let bits: Vec<usize> = (0..64).filter(|b| m >> b & 1 == 1).collect();
            acc.add(&word(a, &bits).scale(c)).unwrap()
        })
}

#[test]
fn generator_relations_are_exact() {
    let a = GrassmannAlgebra::new(6).unwrap();
    let zero = a.zero();
    for i in 0..12 {
        let gi = a.generator(gen(a, i)).unwrap();
        assert_eq!(gi.multiply(&gi).unwrap(), zero);
        for j in 0..12 {
            let gj = a.generator(gen(a, j)).unwrap();
            let ac = gi.multiply(&gj).unwrap().add(&gj.multiply(&gi).unwrap()).unwrap();
            assert_eq!(ac, zero);
            // {∂_i, g_j} acting on 1 and on a spectator
            let d = |x: &GrassmannElement| x.derivative(gen(a, i)).unwrap();
            for x in [a.one(), a.generator(gen(a, (j + 5) % 12)).unwrap()] {
                let lhs = d(&gj.multiply(&x).unwrap()).add(&gj.multiply(&d(&x)).unwrap()).unwrap();
                let expected = if i == j { x.clone() } else { zero.clone() };
                assert_eq!(lhs, expected);
            }
        }
        let pair = a.alpha_star(i % 6).unwrap().multiply(&a.alpha(i % 6).unwrap()).unwrap();
        assert_eq!(pair.multiply(&pair).unwrap(), zero);
    }
}

#[test]
fn budget_and_index_errors() {
    assert!(matches!(GrassmannAlgebra::new(25), Err(Error::GeneratorBudget { .. })));
    let a = alg();
    assert!(matches!(a.alpha(PAIRS), Err(Error::GeneratorIndex { .. })));
    let b = GrassmannAlgebra::new(2).unwrap();
    assert!(matches!(a.one().multiply(&b.one()), Err(Error::AlgebraMismatch { .. })));
    let lat = Lattice::new(4, 4.0, Units::default()).unwrap();
    let psi = SpinorField::zeros(&lat);
    assert!(matches!(
        grassmann::lift_field(&psi, &[0, 1, 2, 3, 4, 5, 6]),
        Err(Error::GeneratorBudget { .. })
    ));
    let lifted = grassmann::lift_field(&psi, &[0]).unwrap();
    assert!(matches!(
        lifted.field_derivative(2, &lifted.algebra().one()),
        Err(Error::ZeroFieldValue(2))
    ));
}

/// Values whose reciprocals are exact in binary floating point.
fn dyadic_field() -> (Lattice, SpinorField, [usize; 2]) {
    let lat = Lattice::new(4, 2.0, Units::default()).unwrap();
    let mut psi = SpinorField::zeros(&lat);
    let c = Complex64::new;
    let sites = [0, 5];
    psi.set(0, [c(1.0, 1.0), c(0.0, -2.0), c(0.5, 0.0), c(-1.0, 1.0)]);
    psi.set(5, [c(0.25, -0.25), c(-4.0, 0.0), c(2.0, 2.0), c(0.0, 0.125)]);
    (lat, psi, sites)
}

#[test]
fn lifted_field_operators_have_exact_canonical_anticommutators() {
    let (_, psi, sites) = dyadic_field();
    let lifted = grassmann::lift_field(&psi, &sites).unwrap();
    let a = lifted.algebra();
    assert_eq!(a.pairs(), 8);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..4 {
        let x = diraclab::experiment::random_element(a, &mut rng, 5);
        for k in 0..8 {
            for j in 0..8 {
                let mixed = lifted
                    .field_derivative(j, &lifted.field_operator(k, &x).unwrap())
                    .unwrap()
                    .add(
                        &lifted
                            .field_operator(k, &lifted.field_derivative(j, &x).unwrap())
                            .unwrap(),
                    )
                    .unwrap();
                let expected = if j == k { x.clone() } else { a.zero() };
                assert_eq!(mixed, expected, "k={k} j={j}");
                let same = lifted
                    .field_operator(k, &lifted.field_operator(j, &x).unwrap())
                    .unwrap()
                    .add(
                        &lifted
                            .field_operator(j, &lifted.field_operator(k, &x).unwrap())
                            .unwrap(),
                    )
                    .unwrap();
                assert_eq!(same, a.zero());
            }
        }
    }
}

#[test]
fn lift_roundtrip_and_charge_density() {
    let (lat, psi, sites) = dyadic_field();
    let lifted = grassmann::lift_field(&psi, &sites).unwrap();
    let mut back = SpinorField::zeros(&lat);
    lifted.unlift_into(&mut back);
    for &s in &sites {
        assert_eq!(back.at(s), psi.at(s));
    }
    let rho = lifted.charge_density(1, 2.0).unwrap();
    // -e Σ |ψ_i|² α*_i α_i, one monomial per component.
    assert_eq!(rho.len(), 4);
    let a = lifted.algebra();
    for i in 0..4 {
        let k = 4 + i;
        let mono = a.alpha_star(k).unwrap().multiply(&a.alpha(k).unwrap()).unwrap();
        let (mask, unit) = mono.terms().next().unwrap();
        let expected = -2.0 * psi.at(5)[i].norm_sqr() * unit;
        assert_eq!(rho.coefficient(mask), expected);
    }
}

#[test]
fn energy_element_sums_to_original_energy() {
    let lat = Lattice::new(
        4,
        3.0,
        Units {
            mass: 1.1,
            hbar: 0.9,
            c: 1.2,
            charge: 1.0,
        },
    )
    .unwrap();
    let m = ModeAmplitudes::random(&lat, &mut ChaCha8Rng::seed_from_u64(4), Band::Full);
    let t = 0.35;
    let mut total = Complex64::new(0.0, 0.0);
    let all: Vec<usize> = (0..lat.sites()).collect();
    for batch in all.chunks(6) {
        let batch = batch.to_vec();
        let main = grassmann::grassmann_energy(&lat, &m, t, &batch, EnergyForm::Main).unwrap();
        let re = grassmann::grassmann_energy(&lat, &m, t, &batch, EnergyForm::Reordered).unwrap();
        assert_eq!(main, re);
        assert!(main.degrees().iter().all(|&d| d == 2));
        // Every monomial pairs α_k with α*_k.
        let a = main.algebra();
        for (mask, _) in main.terms() {
            let k = mask.trailing_zeros() as usize;
            assert_eq!(mask, (1u64 << k) | (1u64 << (k + a.pairs())));
        }
        total += main.coefficient_sum();
    }
    // α*_k α_k is stored as α_k α*_k, one transposition away.
    let total = -total;
    let expected = observables::energy_original(&lat, &m);
    assert!(
        (total.re - expected).abs() < 1e-12 * expected.abs(),
        "{total} vs {expected}"
    );
    assert!(total.im.abs() < 1e-12 * expected.abs());
}

#[test]
fn reordered_form_is_the_sign_rewrite_of_the_negative_terms() {
    let lat = Lattice::new(4, 4.0, Units::default()).unwrap();
    let m = ModeAmplitudes::random(&lat, &mut ChaCha8Rng::seed_from_u64(6), Band::Full).positron_part();
    let sites = [3, 17, 40];
    let minus = field::synthesize_family(&lat, &m, 0.0, Family::Negative);
    let dminus = field::time_derivative(&lat, &m, 0.0, Family::Negative);
    let lm = grassmann::lift_field(&minus, &sites).unwrap();
    let ld = grassmann::lift_field(&dminus, &sites).unwrap();
    for k in 0..12 {
        let forward = lm.component(k).conjugate().multiply(ld.component(k)).unwrap();
        let backward = ld.component(k).multiply(&lm.component(k).conjugate()).unwrap();
        assert_eq!(forward, backward.scale(Complex64::new(-1.0, 0.0)));
    }
}

proptest! {
    #[test]
    fn monomial_signs_match_bubble_sort(bits in prop::collection::vec(0usize..2 * PAIRS, 0..6)) {
        let a = alg();
        let w = word(a, &bits);
        let sign = bubble_sign(&bits);
        let mask = bits.iter().fold(0u64, |m, &b| m | 1 << b);
        prop_assert_eq!(w.coefficient(mask), Complex64::new(sign, 0.0));
        prop_assert!(w.len() <= 1);
    }

    #[test]
    fn multiplication_is_associative_and_distributive(x in element(), y in element(), z in element()) {
        let xy_z = x.multiply(&y).unwrap().multiply(&z).unwrap();
        let x_yz = x.multiply(&y.multiply(&z).unwrap()).unwrap();
        prop_assert_eq!(xy_z, x_yz);
        let left = x.multiply(&y.add(&z).unwrap()).unwrap();
        let right = x.multiply(&y).unwrap().add(&x.multiply(&z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn conjugation_reverses_products(x in element(), y in element()) {
        prop_assert_eq!(x.conjugate().conjugate(), x.clone());
        let lhs = x.multiply(&y).unwrap().conjugate();
        let rhs = y.conjugate().multiply(&x.conjugate()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn derivative_obeys_graded_leibniz_rule(x in element(), y in element(), g in 0usize..2 * PAIRS) {
        let a = alg();
        let g = gen(a, g);
        for odd in [false, true] {
            let xh = parity_part(&x, odd);
            let sign = if odd { -1.0 } else { 1.0 };
            let lhs = xh.multiply(&y).unwrap().derivative(g).unwrap();
            let rhs = xh
                .derivative(g)
                .unwrap()
                .multiply(&y)
                .unwrap()
                .add(&xh.multiply(&y.derivative(g).unwrap()).unwrap().scale(Complex64::new(sign, 0.0)))
                .unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn even_elements_commute_with_everything(x in element(), y in element()) {
        let e = parity_part(&x, false);
        prop_assert_eq!(e.multiply(&y).unwrap(), y.multiply(&e).unwrap());
    }
}
