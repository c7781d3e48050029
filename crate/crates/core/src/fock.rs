//! Exact quantization of a handful of modes.
//!
//! Modes are ordered `b` first, then the second family, and each mode owns
//! one bit of the occupation-basis index. Operators are built by a
//! Jordan–Wigner construction, so every anticommutator is an exact integer
//! matrix.
//!
//! Two routes to the same theory are provided. Starting from `b` and `c`
//! operators, the positron annihilator is `d = c†` and the Hamiltonian is
//! repaired by dropping a constant. Starting directly from `b` and `d`, the
//! correct Hamiltonian appears at once. [`relabel`] maps one onto the other.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::spinor::{outer, Mat4, SpinBasis};
use crate::units::Units;

/// Largest supported mode count; the Fock dimension is `2^modes`.
pub const MAX_MODES: usize = 12;

/// Sparse complex matrix on the occupation basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    dim: usize,
    entries: BTreeMap<(usize, usize), Complex64>,
}

impl FockOperator {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut op = Self::zero(dim);
        for i in 0..dim {
            op.entries.insert((i, i), Complex64::new(1.0, 0.0));
        }
        op
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries.get(&(row, col)).copied().unwrap_or_default()
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        self.entries.iter().map(|(&(r, c), &v)| (r, c, v))
    }

    fn insert_add(&mut self, row: usize, col: usize, v: Complex64) {
        let slot = self.entries.entry((row, col)).or_default();
        *slot += v;
        if *slot == Complex64::new(0.0, 0.0) {
            self.entries.remove(&(row, col));
        }
    }

    pub fn adjoint(&self) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|(&(r, c), v)| ((c, r), v.conj())).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = Self::zero(self.dim);
        for (&(r, c), &v) in &self.entries {
            out.insert_add(r, c, v * s);
        }
        out
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(r, c), &v) in &other.entries {
            out.insert_add(r, c, v);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(r, c), &v) in &other.entries {
            out.insert_add(r, c, -v);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut rows: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); other.dim];
        for (&(r, c), &v) in &other.entries {
            rows[r].push((c, v));
        }
        let mut out = Self::zero(self.dim);
        for (&(i, k), &a) in &self.entries {
            for &(j, b) in &rows[k] {
                out.insert_add(i, j, a * b);
            }
        }
        out
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        self.mul(other).add(&other.mul(self))
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.values().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.sub(other).max_abs()
    }

    pub fn is_hermitian(&self) -> bool {
        *self == self.adjoint()
    }

    /// `op |basis⟩` as a sparse column.
    pub fn apply_basis(&self, col: usize) -> Vec<(usize, Complex64)> {
        self.entries
            .iter()
            .filter(|(&(_, c), _)| c == col)
            .map(|(&(r, _), &v)| (r, v))
            .collect()
    }

    /// `⟨basis| op |basis⟩`.
    pub fn expectation(&self, basis: usize) -> Complex64 {
        self.get(basis, basis)
    }

    /// Real diagonal of an operator that is diagonal in the occupation basis.
    pub fn diagonal(&self) -> Result<Vec<f64>> {
        let mut d = vec![0.0; self.dim];
        for (&(r, c), v) in &self.entries {
            if r != c || v.im != 0.0 {
                return Err(Error::NotDiagonal);
            }
            d[r] = v.re;
        }
        Ok(d)
    }
}

/// One mode slot: momentum, spin label and energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSlot {
    pub momentum: [f64; 3],
    pub spin: usize,
    pub energy: f64,
}

impl ModeSlot {
    /// Slot with on-shell energy.
    pub fn on_shell(momentum: [f64; 3], spin: usize, units: &Units) -> Self {
        Self {
            momentum,
            spin,
            energy: units.energy(momentum),
        }
    }
}

/// Electron slots and second-family slots (`c` or, equivalently, `d`).
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSpec {
    b: Vec<ModeSlot>,
    c: Vec<ModeSlot>,
}

impl ModeSpec {
    pub fn new(b: Vec<ModeSlot>, c: Vec<ModeSlot>) -> Result<Self> {
        let modes = b.len() + c.len();
        if modes > MAX_MODES {
            return Err(Error::DimensionCap { modes, cap: MAX_MODES });
        }
        if let Some(bad) = b
            .iter()
            .chain(&c)
            .find(|s| !(s.energy > 0.0 && s.energy.is_finite()) || s.spin > 1)
        {
            return Err(Error::InvalidMode(format!(
                "slot with energy {} and spin {} (needs energy > 0, spin 0 or 1)",
                bad.energy, bad.spin
            )));
        }
        Ok(Self { b, c })
    }

    /// `m_b` and `m_c` slots at rest with the given energies.
    pub fn with_energies(b: &[f64], c: &[f64]) -> Result<Self> {
        let slot = |(k, &e): (usize, &f64)| ModeSlot {
            momentum: [0.0; 3],
            spin: k % 2,
            energy: e,
        };
        Self::new(
            b.iter().enumerate().map(slot).collect(),
            c.iter().enumerate().map(slot).collect(),
        )
    }

    pub fn b_slots(&self) -> &[ModeSlot] {
        &self.b
    }

    pub fn c_slots(&self) -> &[ModeSlot] {
        &self.c
    }

    pub fn modes(&self) -> usize {
        self.b.len() + self.c.len()
    }

    pub fn dim(&self) -> usize {
        1 << self.modes()
    }
}

/// Jordan–Wigner annihilator of mode `j` among `modes`.
fn annihilator(modes: usize, j: usize) -> FockOperator {
    let dim = 1usize << modes;
    let mut op = FockOperator::zero(dim);
    let below = (1usize << j) - 1;
    for n in 0..dim {
        if n & (1 << j) != 0 {
            let sign = if (n & below).count_ones().is_multiple_of(2) {
                1.0
            } else {
                -1.0
            };
            op.entries.insert((n & !(1 << j), n), Complex64::new(sign, 0.0));
        }
    }
    op
}

/// Annihilators for all `b` modes and all second-family modes, in one basis.
#[derive(Debug, Clone)]
pub struct FockSpace {
    spec: ModeSpec,
    b: Vec<FockOperator>,
    second: Vec<FockOperator>,
}

impl FockSpace {
    pub fn spec(&self) -> &ModeSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.spec.dim()
    }

    pub fn b(&self, k: usize) -> &FockOperator {
        &self.b[k]
    }

    pub fn b_dag(&self, k: usize) -> FockOperator {
        self.b[k].adjoint()
    }

    /// Annihilator of the `k`-th second-family bit.
    pub fn second(&self, k: usize) -> &FockOperator {
        &self.second[k]
    }

    pub fn second_dag(&self, k: usize) -> FockOperator {
        self.second[k].adjoint()
    }

    /// Basis index with the given `b` bits and second-family bits.
    pub fn basis_index(&self, b_bits: usize, second_bits: usize) -> usize {
        b_bits | (second_bits << self.spec.b.len())
    }
}

/// Operators `b̂, ĉ` of the negative-energy reading. `d̂ = ĉ†` is the same
/// matrix under a new name.
#[derive(Debug, Clone)]
pub struct CSpace(pub FockSpace);

/// Operators `b̂, d̂` built directly.
#[derive(Debug, Clone)]
pub struct DSpace(pub FockSpace);

impl CSpace {
    pub fn c(&self, k: usize) -> &FockOperator {
        self.0.second(k)
    }

    pub fn c_dag(&self, k: usize) -> FockOperator {
        self.0.second_dag(k)
    }

    /// `d̂_k := ĉ_k†`.
    pub fn d(&self, k: usize) -> FockOperator {
        self.0.second_dag(k)
    }

    pub fn d_dag(&self, k: usize) -> FockOperator {
        self.0.second(k).clone()
    }

    /// No `b` quanta; every `c` mode filled. Annihilated by all `b̂` and `ĉ†`.
    pub fn vacuum(&self) -> usize {
        self.0.basis_index(0, (1 << self.0.spec.c.len()) - 1)
    }

    /// The truly empty state: every bit clear.
    pub fn bare(&self) -> usize {
        0
    }
}

impl DSpace {
    pub fn d(&self, k: usize) -> &FockOperator {
        self.0.second(k)
    }

    pub fn d_dag(&self, k: usize) -> FockOperator {
        self.0.second_dag(k)
    }

    pub fn vacuum(&self) -> usize {
        0
    }
}

fn build(spec: &ModeSpec) -> FockSpace {
    let m = spec.modes();
    let mb = spec.b.len();
    FockSpace {
        spec: spec.clone(),
        b: (0..mb).map(|j| annihilator(m, j)).collect(),
        second: (0..spec.c.len()).map(|j| annihilator(m, mb + j)).collect(),
    }
}

/// Build `b̂` and `ĉ` operators.
pub fn build_space(spec: &ModeSpec) -> CSpace {
    CSpace(build(spec))
}

/// Build `b̂` and `d̂` operators directly.
pub fn build_d_space(spec: &ModeSpec) -> DSpace {
    DSpace(build(spec))
}

fn number_sum<F>(space: &FockSpace, mut term: F) -> FockOperator
where
    F: FnMut(usize, usize) -> FockOperator,
{
    let mut h = FockOperator::zero(space.dim());
    let mb = space.spec.b.len();
    for k in 0..mb + space.spec.c.len() {
        h = h.add(&term(k, mb));
    }
    h
}

/// `Σ E (b̂†b̂ - ĉ†ĉ)`.
pub fn hamiltonian_naive(space: &CSpace) -> FockOperator {
    let s = &space.0;
    number_sum(s, |k, mb| {
        if k < mb {
            s.b_dag(k).mul(s.b(k)).scale_real(s.spec.b[k].energy)
        } else {
            let j = k - mb;
            space.c_dag(j).mul(space.c(j)).scale_real(-s.spec.c[j].energy)
        }
    })
}

/// `Σ E (b̂†b̂ + d̂†d̂)` with `d̂ = ĉ†`: the naive Hamiltonian rewritten through
/// `ĉ†ĉ = 1 - ĉĉ†` with the constant dropped.
pub fn hamiltonian_normal(space: &CSpace) -> FockOperator {
    let s = &space.0;
    number_sum(s, |k, mb| {
        if k < mb {
            s.b_dag(k).mul(s.b(k)).scale_real(s.spec.b[k].energy)
        } else {
            let j = k - mb;
            space.d_dag(j).mul(&space.d(j)).scale_real(s.spec.c[j].energy)
        }
    })
}

/// `Σ E (b̂†b̂ + d̂†d̂)` built from independent `d̂` operators.
pub fn hamiltonian_direct(space: &DSpace) -> FockOperator {
    let s = &space.0;
    number_sum(s, |k, mb| {
        if k < mb {
            s.b_dag(k).mul(s.b(k)).scale_real(s.spec.b[k].energy)
        } else {
            let j = k - mb;
            space.d_dag(j).mul(space.d(j)).scale_real(s.spec.c[j].energy)
        }
    })
}

/// `-e Σ (b̂†b̂ + ĉ†ĉ)`.
pub fn charge_naive(space: &CSpace, units: &Units) -> FockOperator {
    let s = &space.0;
    let e = units.charge;
    number_sum(s, |k, mb| {
        if k < mb {
            s.b_dag(k).mul(s.b(k)).scale_real(-e)
        } else {
            let j = k - mb;
            space.c_dag(j).mul(space.c(j)).scale_real(-e)
        }
    })
}

/// `Σ (-e b̂†b̂ + e d̂†d̂)`.
pub fn charge_normal(space: &CSpace, units: &Units) -> FockOperator {
    let s = &space.0;
    let e = units.charge;
    number_sum(s, |k, mb| {
        if k < mb {
            s.b_dag(k).mul(s.b(k)).scale_real(-e)
        } else {
            let j = k - mb;
            space.d_dag(j).mul(&space.d(j)).scale_real(e)
        }
    })
}

/// Signed basis map `R|n⟩ = s(n)|n'⟩` with every second-family bit of `n`
/// flipped and `s(n) = (-1)^{Σ_k q_k n_k}`, `q_k` the number of
/// second-family modes before `k`. It carries `ĉ_k†` onto the directly built
/// `d̂_k` and fixes every `b̂_k`.
pub fn relabeling(spec: &ModeSpec) -> FockOperator {
    let dim = spec.dim();
    let mb = spec.b.len();
    let mc = spec.c.len();
    let mask = ((1usize << mc) - 1) << mb;
    let mut r = FockOperator::zero(dim);
    for n in 0..dim {
        let parity: usize = (0..mc).filter(|&k| n & (1 << (mb + k)) != 0).sum();
        let sign = if parity.is_multiple_of(2) { 1.0 } else { -1.0 };
        r.entries.insert((n ^ mask, n), Complex64::new(sign, 0.0));
    }
    r
}

/// `R op R†`.
pub fn relabel(spec: &ModeSpec, op: &FockOperator) -> FockOperator {
    let r = relabeling(spec);
    r.mul(op).mul(&r.adjoint())
}

/// Sorted eigenvalues of an occupation-diagonal operator.
pub fn spectrum(op: &FockOperator) -> Result<Vec<f64>> {
    let mut d = op.diagonal()?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// `Σ_s [u uˢ†(p) + vˢ(-p) vˢ†(-p)]`.
pub fn spinor_completeness(p: [f64; 3], units: &Units) -> Mat4 {
    let up = SpinBasis::compute(p, units);
    let vm = SpinBasis::compute([-p[0], -p[1], -p[2]], units);
    let mut sum = Mat4::zero();
    for s in 0..2 {
        sum = sum + outer(&up.u[s], &up.u[s]) + outer(&vm.v[s], &vm.v[s]);
    }
    sum
}

/// Largest entry of `Σ_s [u u† + v(-p)v†(-p)] - 2E I`.
pub fn spinor_completeness_error(p: [f64; 3], units: &Units) -> f64 {
    let e = units.energy(p);
    spinor_completeness(p, units).max_abs_diff(&Mat4::identity().scale(Complex64::new(2.0 * e, 0.0)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldOperatorReport {
    /// Worst spinor completeness deviation over the included momenta.
    pub completeness: f64,
    /// Worst `|{ψ̂_i(x), ψ̂_j†(y)} - δ_ij L^{-3} Σ e^{ip(x-y)/ħ}|`.
    pub mixed: f64,
    /// Worst `|{ψ̂_i(x), ψ̂_j(y)}|`.
    pub same: f64,
    pub modes: usize,
}

/// Truncated field operators on a lattice, anticommuted at the given site
/// pairs.
///
/// Each listed bin `n` contributes both spins of `b̂` at `p_n` and both
/// spins of `d̂` at `-p_n`, so the truncated field is
/// `ψ̂(x) = L^{-3/2} Σ_n (2E)^{-1/2} Σ_s [b̂ uˢ(p_n) e^{ip_n·x/ħ} + d̂† vˢ(-p_n) e^{ip_n·x/ħ}]`.
pub fn field_operator_check(
    lattice: &Lattice,
    bins: &[usize],
    pairs: &[(usize, usize)],
) -> Result<FieldOperatorReport> {
    let units = lattice.units();
    let mut b_slots = Vec::new();
    let mut d_slots = Vec::new();
    for &n in bins {
        let p = lattice.momentum(n);
        for s in 0..2 {
            b_slots.push(ModeSlot::on_shell(p, s, units));
            d_slots.push(ModeSlot::on_shell([-p[0], -p[1], -p[2]], s, units));
        }
    }
    let spec = ModeSpec::new(b_slots, d_slots)?;
    let space = build_d_space(&spec);
    let dim = spec.dim();
    let volume = lattice.box_volume();
    let hbar = units.hbar;

    let completeness = bins
        .iter()
        .map(|&n| spinor_completeness_error(lattice.momentum(n), units))
        .fold(0.0, f64::max);

    let psi = |i: usize, site: usize| -> FockOperator {
        let x = lattice.position(site);
        let mut op = FockOperator::zero(dim);
        for (slot_index, &n) in bins.iter().enumerate() {
            let p = lattice.momentum(n);
            let up = SpinBasis::compute(p, units);
            let vm = SpinBasis::compute([-p[0], -p[1], -p[2]], units);
            let phase = (p[0] * x[0] + p[1] * x[1] + p[2] * x[2]) / hbar;
            let w = Complex64::from_polar((volume * 2.0 * up.energy).sqrt().recip(), phase);
            for s in 0..2 {
                let k = 2 * slot_index + s;
                op = op.add(&space.0.b(k).scale(w * up.u[s][i]));
                op = op.add(&space.d_dag(k).scale(w * vm.v[s][i]));
            }
        }
        op
    };

    let mut mixed: f64 = 0.0;
    let mut same: f64 = 0.0;
    let identity = FockOperator::identity(dim);
    for &(xs, ys) in pairs {
        let x = lattice.position(xs);
        let y = lattice.position(ys);
        let delta: Complex64 = bins
            .iter()
            .map(|&n| {
                let p = lattice.momentum(n);
                let phase = (p[0] * (x[0] - y[0]) + p[1] * (x[1] - y[1]) + p[2] * (x[2] - y[2])) / hbar;
                Complex64::from_polar(1.0 / volume, phase)
            })
            .sum();
        let px: Vec<FockOperator> = (0..4).map(|i| psi(i, xs)).collect();
        let py: Vec<FockOperator> = (0..4).map(|i| psi(i, ys)).collect();
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == j {
                    identity.scale(delta)
                } else {
                    FockOperator::zero(dim)
                };
                let ac = px[i].anticommutator(&py[j].adjoint());
                mixed = mixed.max(ac.max_abs_diff(&expected));
                same = same.max(px[i].anticommutator(&py[j]).max_abs());
            }
        }
    }
    Ok(FieldOperatorReport {
        completeness,
        mixed,
        same,
        modes: spec.modes(),
    })
}
