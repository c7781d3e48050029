//! A finite Grassmann algebra and the Grassmann-valued Dirac field.
//!
//! Generator pair `k` is `α_k` (bit `k`) and `α*_k` (bit `n + k`). A
//! monomial is a bitmask read as the product of its generators in ascending
//! bit order. A complex field is lifted one generator pair per (site,
//! component): `ψᴳ_k = ψᶜ_k α_k`. The product `α*_k α_k` is never given a
//! value.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{synthesize_family, time_derivative, Family, ModeAmplitudes};
use crate::lattice::{Lattice, SpinorField};

/// `2 · MAX_PAIRS` generators fit in a `u64` mask with room to spare.
pub const MAX_PAIRS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GrassmannAlgebra {
    pairs: usize,
}

/// A single generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    Alpha(usize),
    AlphaStar(usize),
}

impl GrassmannAlgebra {
    pub fn new(pairs: usize) -> Result<Self> {
        if pairs > MAX_PAIRS {
            return Err(Error::GeneratorBudget {
                requested: pairs,
                max: MAX_PAIRS,
            });
        }
        Ok(Self { pairs })
    }

    pub fn pairs(&self) -> usize {
        self.pairs
    }

    pub fn generators(&self) -> usize {
        2 * self.pairs
    }

    pub fn bit(&self, g: Generator) -> Result<u32> {
        let (k, offset) = match g {
            Generator::Alpha(k) => (k, 0),
            Generator::AlphaStar(k) => (k, self.pairs),
        };
        if k >= self.pairs {
            return Err(Error::GeneratorIndex {
                index: k,
                pairs: self.pairs,
            });
        }
        Ok((k + offset) as u32)
    }

    pub fn zero(&self) -> GrassmannElement {
        GrassmannElement {
            algebra: *self,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(&self, c: Complex64) -> GrassmannElement {
        self.zero().with_term(0, c)
    }

    pub fn one(&self) -> GrassmannElement {
        self.scalar(Complex64::new(1.0, 0.0))
    }

    pub fn generator(&self, g: Generator) -> Result<GrassmannElement> {
        Ok(self.zero().with_term(1u64 << self.bit(g)?, Complex64::new(1.0, 0.0)))
    }

    pub fn alpha(&self, k: usize) -> Result<GrassmannElement> {
        self.generator(Generator::Alpha(k))
    }

    pub fn alpha_star(&self, k: usize) -> Result<GrassmannElement> {
        self.generator(Generator::AlphaStar(k))
    }
}

/// Sparse sum of monomials with complex coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct GrassmannElement {
    algebra: GrassmannAlgebra,
    terms: BTreeMap<u64, Complex64>,
}

fn parity_sign(count: u32) -> f64 {
    if count.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Sign of reordering `m1 · m2` into ascending order; zero on overlap.
fn product_sign(m1: u64, m2: u64) -> f64 {
    if m1 & m2 != 0 {
        return 0.0;
    }
    let mut swaps = 0;
    let mut rest = m2;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (m1 >> j).count_ones();
        rest &= rest - 1;
    }
    parity_sign(swaps)
}

impl GrassmannElement {
    fn with_term(mut self, mask: u64, c: Complex64) -> Self {
        self.add_term(mask, c);
        self
    }

    fn add_term(&mut self, mask: u64, c: Complex64) {
        let slot = self.terms.entry(mask).or_default();
        *slot += c;
        if *slot == Complex64::new(0.0, 0.0) {
            self.terms.remove(&mask);
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch {
                left: self.algebra.pairs,
                right: other.algebra.pairs,
            });
        }
        Ok(())
    }

    pub fn algebra(&self) -> GrassmannAlgebra {
        self.algebra
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, mask: u64) -> Complex64 {
        self.terms.get(&mask).copied().unwrap_or_default()
    }

    /// `(mask, coefficient)` pairs in ascending mask order.
    pub fn terms(&self) -> impl Iterator<Item = (u64, Complex64)> + '_ {
        self.terms.iter().map(|(&m, &c)| (m, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degrees of the monomials present, ascending and deduplicated.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(|m| m.count_ones()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Sum of all coefficients.
    pub fn coefficient_sum(&self) -> Complex64 {
        self.terms.values().sum()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (&m, &c) in &other.terms {
            out.add_term(m, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = self.algebra.zero();
        for (&m, &c) in &self.terms {
            out.add_term(m, c * s);
        }
        out
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.algebra.zero();
        for (&m1, &c1) in &self.terms {
            for (&m2, &c2) in &other.terms {
                let sign = product_sign(m1, m2);
                if sign != 0.0 {
                    out.add_term(m1 | m2, c1 * c2 * sign);
                }
            }
        }
        Ok(out)
    }

    /// `α ↔ α*`, complex-conjugated coefficients, reversed factor order.
    pub fn conjugate(&self) -> Self {
        let n = self.algebra.pairs as u32;
        let mut out = self.algebra.zero();
        for (&m, &c) in &self.terms {
            // Image generators in the reversed order of the original factors.
            let mut image: Vec<u32> = Vec::with_capacity(m.count_ones() as usize);
            let mut rest = m;
            while rest != 0 {
                let b = rest.trailing_zeros();
                image.push(if b < n { b + n } else { b - n });
                rest &= rest - 1;
            }
            image.reverse();
            let mut inversions = 0;
            for i in 0..image.len() {
                for j in i + 1..image.len() {
                    if image[i] > image[j] {
                        inversions += 1;
                    }
                }
            }
            let mask = image.iter().fold(0u64, |acc, &b| acc | (1 << b));
            out.add_term(mask, c.conj() * parity_sign(inversions));
        }
        out
    }

    /// Left derivative `∂/∂g`.
    pub fn derivative(&self, g: Generator) -> Result<Self> {
        let bit = self.algebra.bit(g)?;
        let flag = 1u64 << bit;
        let mut out = self.algebra.zero();
        for (&m, &c) in &self.terms {
            if m & flag != 0 {
                let before = (m & (flag - 1)).count_ones();
                out.add_term(m & !flag, c * parity_sign(before));
            }
        }
        Ok(out)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut keys: Vec<u64> = self.terms.keys().chain(other.terms.keys()).copied().collect();
        keys.sort_unstable();
        keys.dedup();
        keys.iter()
            .map(|&k| (self.coefficient(k) - other.coefficient(k)).norm())
            .fold(0.0, f64::max)
    }
}

pub fn multiply(a: &GrassmannElement, b: &GrassmannElement) -> Result<GrassmannElement> {
    a.multiply(b)
}

pub fn conjugate(a: &GrassmannElement) -> GrassmannElement {
    a.conjugate()
}

/// A complex spinor field on a few sites, lifted to `ψᴳ_k = ψᶜ_k α_k` with
/// `k = 4·slot + component`.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedField {
    algebra: GrassmannAlgebra,
    sites: Vec<usize>,
    components: Vec<GrassmannElement>,
}

fn pairs_for(sites: &[usize]) -> Result<GrassmannAlgebra> {
    let pairs = 4 * sites.len();
    GrassmannAlgebra::new(pairs)
}

/// Lift the listed lattice sites of `psi`.
pub fn lift_field(psi: &SpinorField, sites: &[usize]) -> Result<LiftedField> {
    let algebra = pairs_for(sites)?;
    let mut components = Vec::with_capacity(algebra.pairs());
    for &site in sites {
        if site >= psi.sites() {
            return Err(Error::ShapeMismatch {
                expected: psi.sites(),
                actual: site,
            });
        }
        for i in 0..4 {
            let k = components.len();
            components.push(algebra.alpha(k)?.scale(psi.planes[i][site]));
        }
    }
    Ok(LiftedField {
        algebra,
        sites: sites.to_vec(),
        components,
    })
}

impl LiftedField {
    pub fn algebra(&self) -> GrassmannAlgebra {
        self.algebra
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    /// `ψᴳ_k`.
    pub fn component(&self, k: usize) -> &GrassmannElement {
        &self.components[k]
    }

    /// Complex factor of `α_k` in each component.
    pub fn unlift(&self) -> Vec<Complex64> {
        self.components
            .iter()
            .enumerate()
            .map(|(k, c)| c.coefficient(1u64 << k))
            .collect()
    }

    /// Write the unlifted values back into a spinor field.
    pub fn unlift_into(&self, psi: &mut SpinorField) {
        for (k, v) in self.unlift().into_iter().enumerate() {
            psi.planes[k % 4][self.sites[k / 4]] = v;
        }
    }

    /// `Ψ ↦ ψᴳ_k Ψ`.
    pub fn field_operator(&self, k: usize, target: &GrassmannElement) -> Result<GrassmannElement> {
        self.components[k].multiply(target)
    }

    /// `Ψ ↦ δΨ/δψᴳ_k = (1/ψᶜ_k) ∂Ψ/∂α_k`.
    pub fn field_derivative(&self, k: usize, target: &GrassmannElement) -> Result<GrassmannElement> {
        let value = self.components[k].coefficient(1u64 << k);
        if value == Complex64::new(0.0, 0.0) {
            return Err(Error::ZeroFieldValue(k));
        }
        Ok(target.derivative(Generator::Alpha(k))?.scale(value.inv()))
    }

    /// `-e Σ_i ψᴳ_i* ψᴳ_i` at one lifted site, by algebra multiplication.
    pub fn charge_density(&self, slot: usize, charge: f64) -> Result<GrassmannElement> {
        let mut out = self.algebra.zero();
        for i in 0..4 {
            let c = &self.components[4 * slot + i];
            out = out.add(&c.conjugate().multiply(c)?)?;
        }
        Ok(out.scale(Complex64::new(-charge, 0.0)))
    }
}

/// Which way the negative-frequency factors are ordered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyForm {
    /// `iħ a³ Σ (ψ₊ᴳ† ∂ψ₊ᴳ/∂t + ψ₋ᴳ† ∂ψ₋ᴳ/∂t)`.
    Main,
    /// `iħ a³ Σ (ψ₊ᴳ† ∂ψ₊ᴳ/∂t - ∂ψ₋ᴳ/∂t ψ₋ᴳ†)`.
    Reordered,
}

/// Grassmann-valued energy of the field built from `modes`, restricted to
/// the listed sites.
pub fn grassmann_energy(
    lattice: &Lattice,
    modes: &ModeAmplitudes,
    t: f64,
    sites: &[usize],
    form: EnergyForm,
) -> Result<GrassmannElement> {
    modes.check_shape(lattice)?;
    let plus = lift_field(&synthesize_family(lattice, modes, t, Family::Positive), sites)?;
    let minus = lift_field(&synthesize_family(lattice, modes, t, Family::Negative), sites)?;
    let dplus = lift_field(&time_derivative(lattice, modes, t, Family::Positive), sites)?;
    let dminus = lift_field(&time_derivative(lattice, modes, t, Family::Negative), sites)?;
    let algebra = plus.algebra();
    let mut out = algebra.zero();
    for k in 0..algebra.pairs() {
        let positive = plus.component(k).conjugate().multiply(dplus.component(k))?;
        let negative = match form {
            EnergyForm::Main => minus.component(k).conjugate().multiply(dminus.component(k))?,
            EnergyForm::Reordered => dminus
                .component(k)
                .multiply(&minus.component(k).conjugate())?
                .scale(Complex64::new(-1.0, 0.0)),
        };
        out = out.add(&positive)?.add(&negative)?;
    }
    let weight = Complex64::new(0.0, lattice.units().hbar * lattice.cell_volume());
    Ok(out.scale(weight))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn nilpotent_and_anticommuting() {
        let g = GrassmannAlgebra::new(3).unwrap();
        let a1 = g.alpha(0).unwrap();
        let a2 = g.alpha(1).unwrap();
        assert!(a1.multiply(&a1).unwrap().is_zero());
        let s = a1.multiply(&a2).unwrap().add(&a2.multiply(&a1).unwrap()).unwrap();
        assert!(s.is_zero());
    }

    #[test]
    fn derivative_sign() {
        let g = GrassmannAlgebra::new(2).unwrap();
        let a1 = g.alpha(0).unwrap();
        let a2 = g.alpha(1).unwrap();
        assert_eq!(a1.derivative(Generator::Alpha(0)).unwrap(), g.one());
        let prod = a2.multiply(&a1).unwrap();
        assert_eq!(prod.derivative(Generator::Alpha(0)).unwrap(), a2.scale(c(-1.0)));
    }

    #[test]
    fn conjugate_basics() {
        let g = GrassmannAlgebra::new(2).unwrap();
        assert_eq!(g.alpha(0).unwrap().conjugate(), g.alpha_star(0).unwrap());
        let s = g.scalar(Complex64::new(1.0, 2.0));
        assert_eq!(s.conjugate(), g.scalar(Complex64::new(1.0, -2.0)));
        // (α₁α₂)* = α₂*α₁* = -α₁*α₂*
        let p = g.alpha(0).unwrap().multiply(&g.alpha(1).unwrap()).unwrap();
        let expected = g.alpha_star(1).unwrap().multiply(&g.alpha_star(0).unwrap()).unwrap();
        assert_eq!(p.conjugate(), expected);
    }

    #[test]
    fn budget_and_mismatch() {
        assert_eq!(
            GrassmannAlgebra::new(25),
            Err(Error::GeneratorBudget { requested: 25, max: 24 })
        );
        let a = GrassmannAlgebra::new(1).unwrap().one();
        let b = GrassmannAlgebra::new(2).unwrap().one();
        assert_eq!(a.multiply(&b), Err(Error::AlgebraMismatch { left: 1, right: 2 }));
        assert!(matches!(
            GrassmannAlgebra::new(2).unwrap().alpha(2),
            Err(Error::GeneratorIndex { index: 2, pairs: 2 })
        ));
    }
}
