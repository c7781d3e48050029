//! Gamma matrices, plane-wave basis spinors and spin-1 matrices.
//!
//! Everything here uses the Dirac (standard) representation and metric
//! signature (+, -, -, -):
//!
//! ```text
//! γ⁰ = [ 1  0 ]      γⁱ = [  0   σⁱ ]
//!      [ 0 -1 ]           [ -σⁱ  0  ]
//! ```
//!
//! The basis spinors at 3-momentum `p` are
//!
//! ```text
//! uˢ(p) = √(E + mc²) ( ξˢ ; c σ·p / (E + mc²) ξˢ )
//! vˢ(p) = √(E + mc²) ( c σ·p / (E + mc²) ξˢ ; ξˢ )
//! ```
//!
//! with `ξ¹ = (1, 0)`, `ξ² = (0, 1)`, normalized so that `u†u = v†v = 2E`.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::units::Units;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Four complex components of a Dirac spinor.
pub type Spinor4 = [Complex64; 4];

/// Dense square complex matrix of fixed size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CMat<const N: usize>(pub [[Complex64; N]; N]);

pub type Mat4 = CMat<4>;
pub type Mat3 = CMat<3>;
pub type Mat2 = CMat<2>;

impl<const N: usize> CMat<N> {
    pub fn zero() -> Self {
        CMat([[ZERO; N]; N])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..N {
            m.0[i][i] = ONE;
        }
        m
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut m = *self;
        for row in m.0.iter_mut() {
            for x in row.iter_mut() {
                *x *= s;
            }
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zero();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    /// Entrywise complex conjugate (no transpose).
    pub fn conj(&self) -> Self {
        let mut m = *self;
        for row in m.0.iter_mut() {
            for x in row.iter_mut() {
                *x = x.conj();
            }
        }
        m
    }

    pub fn apply(&self, v: &[Complex64; N]) -> [Complex64; N] {
        let mut out = [ZERO; N];
        for (i, o) in out.iter_mut().enumerate() {
            for j in 0..N {
                *o += self.0[i][j] * v[j];
            }
        }
        out
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        *self * *other + *other * *self
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..N {
            for j in 0..N {
                worst = worst.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self) -> bool {
        *self == self.adjoint()
    }

    pub fn is_anti_hermitian(&self) -> bool {
        *self == -self.adjoint()
    }
}

impl<const N: usize> Mul for CMat<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut m = Self::zero();
        for i in 0..N {
            for k in 0..N {
                let a = self.0[i][k];
                if a == ZERO {
                    continue;
                }
                for j in 0..N {
                    m.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        m
    }
}

impl<const N: usize> Add for CMat<N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut m = self;
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] += rhs.0[i][j];
            }
        }
        m
    }
}

impl<const N: usize> Sub for CMat<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<const N: usize> Neg for CMat<N> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-ONE)
    }
}

/// `a† b` for two spinors of equal length.
pub fn inner<const N: usize>(a: &[Complex64; N], b: &[Complex64; N]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Outer product `a b†`.
pub fn outer<const N: usize>(a: &[Complex64; N], b: &[Complex64; N]) -> CMat<N> {
    let mut m = CMat::zero();
    for i in 0..N {
        for j in 0..N {
            m.0[i][j] = a[i] * b[j].conj();
        }
    }
    m
}

pub fn pauli() -> [Mat2; 3] {
    [
        CMat([[ZERO, ONE], [ONE, ZERO]]),
        CMat([[ZERO, -I], [I, ZERO]]),
        CMat([[ONE, ZERO], [ZERO, -ONE]]),
    ]
}

fn block(tl: Mat2, tr: Mat2, bl: Mat2, br: Mat2) -> Mat4 {
    let mut m = Mat4::zero();
    for i in 0..2 {
        for j in 0..2 {
            m.0[i][j] = tl.0[i][j];
            m.0[i][j + 2] = tr.0[i][j];
            m.0[i + 2][j] = bl.0[i][j];
            m.0[i + 2][j + 2] = br.0[i][j];
        }
    }
    m
}

/// The four Dirac matrices γ⁰..γ³.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaSet {
    pub gamma: [Mat4; 4],
}

impl GammaSet {
    pub fn gamma0(&self) -> &Mat4 {
        &self.gamma[0]
    }

    /// `αⁱ = γ⁰ γⁱ`, the velocity matrices, for `i` in 1..=3.
    pub fn alpha(&self, i: usize) -> Mat4 {
        self.gamma[0] * self.gamma[i]
    }

    /// `β = γ⁰`.
    pub fn beta(&self) -> Mat4 {
        self.gamma[0]
    }

    /// Spin matrices `Σⁱ = diag(σⁱ, σⁱ)` for `i` in 1..=3.
    pub fn big_sigma(&self, i: usize) -> Mat4 {
        let s = pauli()[i - 1];
        block(s, Mat2::zero(), Mat2::zero(), s)
    }
}

/// Minkowski metric diag(+1, -1, -1, -1).
pub fn metric(mu: usize, nu: usize) -> f64 {
    match (mu, nu) {
        (0, 0) => 1.0,
        (a, b) if a == b => -1.0,
        _ => 0.0,
    }
}

pub fn gamma_matrices() -> GammaSet {
    let id = Mat2::identity();
    let z = Mat2::zero();
    let s = pauli();
    let g0 = block(id, z, z, -id);
    let gi = |k: usize| block(z, s[k], -s[k], z);
    GammaSet {
        gamma: [g0, gi(0), gi(1), gi(2)],
    }
}

/// `u¹, u², v¹, v²` at one 3-momentum, plus its on-shell energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinBasis {
    pub momentum: [f64; 3],
    pub energy: f64,
    pub u: [Spinor4; 2],
    pub v: [Spinor4; 2],
}

impl SpinBasis {
    /// Construction without the mass check; callers guarantee `m > 0`.
    pub(crate) fn compute(p: [f64; 3], units: &Units) -> Self {
        let energy = units.energy(p);
        let mc2 = units.rest_energy();
        let norm = (energy + mc2).sqrt();
        let f = units.c / (energy + mc2);
        // c σ·p / (E + mc²) applied to ξ¹ and ξ²
        let px = p[0] * f;
        let py = p[1] * f;
        let pz = p[2] * f;
        let sp_up = [Complex64::new(pz, 0.0), Complex64::new(px, py)];
        let sp_dn = [Complex64::new(px, -py), Complex64::new(-pz, 0.0)];
        let n = Complex64::new(norm, 0.0);
        let u = [
            [n, ZERO, sp_up[0] * norm, sp_up[1] * norm],
            [ZERO, n, sp_dn[0] * norm, sp_dn[1] * norm],
        ];
        let v = [
            [sp_up[0] * norm, sp_up[1] * norm, n, ZERO],
            [sp_dn[0] * norm, sp_dn[1] * norm, ZERO, n],
        ];
        SpinBasis {
            momentum: p,
            energy,
            u,
            v,
        }
    }
}

pub fn basis_spinors(p: [f64; 3], units: &Units) -> Result<SpinBasis> {
    if !(units.mass > 0.0) {
        return Err(Error::NonPositiveMass(units.mass));
    }
    Ok(SpinBasis::compute(p, units))
}

/// Momentum-space Dirac Hamiltonian `c α·p + β mc²`.
pub fn dirac_hamiltonian(p: [f64; 3], units: &Units) -> Mat4 {
    let g = gamma_matrices();
    let mut h = g.beta().scale(Complex64::new(units.rest_energy(), 0.0));
    for (i, &pi) in p.iter().enumerate() {
        h = h + g.alpha(i + 1).scale(Complex64::new(units.c * pi, 0.0));
    }
    h
}

pub fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Spin-1 matrices `(sᵢ)ⱼₖ = -i εᵢⱼₖ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinOneSet {
    pub s: [Mat3; 3],
}

pub fn spin1_matrices() -> SpinOneSet {
    let mut s = [Mat3::zero(); 3];
    for (i, si) in s.iter_mut().enumerate() {
        for j in 0..3 {
            for k in 0..3 {
                si.0[j][k] = Complex64::new(0.0, -levi_civita(i, j, k));
            }
        }
    }
    SpinOneSet { s }
}
