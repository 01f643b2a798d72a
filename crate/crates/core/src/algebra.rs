//! Two-spin algebra in the triplet/singlet (multiplet) basis.
//!
//! Basis ordering is fixed throughout the crate:
//! `|1⟩ = ↑↑`, `|2⟩ = (↑↓ + ↓↑)/√2`, `|3⟩ = ↓↓`, `|4⟩ = (↑↓ − ↓↑)/√2`,
//! with indices `0..4`. Product-basis ordering is `↑↑, ↑↓, ↓↑, ↓↓`, the first
//! arrow belonging to dot 1.

use crate::error::{invalid, Error, Result};
use crate::linalg::{Mat4, Tensor4, DIM};
use crate::scalar::{czero, re, Real, C};

/// Index of the singlet state `|4⟩`.
pub const SINGLET: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dot {
    First,
    Second,
}

impl Dot {
    pub const ALL: [Dot; 2] = [Dot::First, Dot::Second];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];
}

/// Amplitudes of the multiplet states over the product basis.
#[derive(Clone, Debug, PartialEq)]
pub struct MultipletBasis<T: Real> {
    /// `amplitudes[α][p] = ⟨p|α⟩`.
    pub amplitudes: [[C<T>; DIM]; DIM],
}

impl<T: Real> Default for MultipletBasis<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> MultipletBasis<T> {
    pub fn new() -> Self {
        let h = re(T::FRAC_1_SQRT_2());
        let o = re(T::one());
        let z = czero();
        Self {
            amplitudes: [
                [o, z, z, z],
                [z, h, h, z],
                [z, z, z, o],
                [z, h, -h, z],
            ],
        }
    }

    /// Unitary whose column `α` is `|α⟩` written in the product basis.
    pub fn unitary(&self) -> Mat4<T> {
        Mat4::from_fn(|p, a| self.amplitudes[a][p])
    }

    pub fn state(&self, alpha: usize) -> [C<T>; DIM] {
        self.amplitudes[alpha]
    }
}

/// Rewrites a product-basis operator in the multiplet basis.
pub fn product_to_multiplet<T: Real>(m: &Mat4<T>) -> Mat4<T> {
    let v = MultipletBasis::new().unitary();
    v.adjoint() * *m * v
}

/// Rewrites a multiplet-basis operator in the product basis.
pub fn multiplet_to_product<T: Real>(m: &Mat4<T>) -> Mat4<T> {
    let v = MultipletBasis::new().unitary();
    v * *m * v.adjoint()
}

fn pauli_half<T: Real>(axis: Axis) -> [[C<T>; 2]; 2] {
    let h = T::lit(0.5);
    let z = czero();
    match axis {
        Axis::X => [[z, re(h)], [re(h), z]],
        Axis::Y => [[z, C::new(T::zero(), -h)], [C::new(T::zero(), h), z]],
        Axis::Z => [[re(h), z], [z, re(-h)]],
    }
}

fn identity2<T: Real>() -> [[C<T>; 2]; 2] {
    [[re(T::one()), czero()], [czero(), re(T::one())]]
}

/// Spin-1/2 operator `S^axis` of the given dot, in the multiplet basis.
pub fn build_spin_operator<T: Real>(dot: Dot, axis: Axis) -> Mat4<T> {
    let s = pauli_half::<T>(axis);
    let product = match dot {
        Dot::First => Mat4::kron(&s, &identity2()),
        Dot::Second => Mat4::kron(&identity2(), &s),
    };
    product_to_multiplet(&product)
}

/// The six operators `S^j_i`, dot `i ∈ {1, 2}` and axis `j ∈ {x, y, z}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinOperatorSet<T: Real> {
    ops: [[Mat4<T>; 3]; 2],
}

impl<T: Real> Default for SpinOperatorSet<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> SpinOperatorSet<T> {
    pub fn new() -> Self {
        let row = |dot| Axis::ALL.map(|axis| build_spin_operator(dot, axis));
        Self { ops: [row(Dot::First), row(Dot::Second)] }
    }

    pub fn get(&self, dot: Dot, axis: Axis) -> &Mat4<T> {
        let i = match dot {
            Dot::First => 0,
            Dot::Second => 1,
        };
        let j = match axis {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        };
        &self.ops[i][j]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Mat4<T>> {
        self.ops.iter().flatten()
    }

    /// `J₀ S₁·S₂` in the multiplet basis.
    pub fn heisenberg(&self, j0: T) -> Mat4<T> {
        Axis::ALL
            .iter()
            .fold(Mat4::zero(), |acc, &a| acc + *self.get(Dot::First, a) * *self.get(Dot::Second, a))
            .scale(re(j0))
    }
}

/// Multiplet energies and transition frequencies for exchange energy `J₀`.
#[derive(Clone, Debug, PartialEq)]
pub struct EnergySpectrum<T: Real> {
    pub j0: T,
    pub energies: [T; DIM],
    /// `omega[α][β] = E_α − E_β`.
    pub omega: [[T; DIM]; DIM],
}

/// Which of the three values `{−J₀, 0, +J₀}` a transition frequency takes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FreqClass {
    Minus,
    Zero,
    Plus,
}

impl FreqClass {
    pub const ALL: [FreqClass; 3] = [FreqClass::Minus, FreqClass::Zero, FreqClass::Plus];

    #[inline]
    pub fn index(self) -> usize {
        match self {
            FreqClass::Minus => 0,
            FreqClass::Zero => 1,
            FreqClass::Plus => 2,
        }
    }

    pub fn negated(self) -> Self {
        match self {
            FreqClass::Minus => FreqClass::Plus,
            FreqClass::Zero => FreqClass::Zero,
            FreqClass::Plus => FreqClass::Minus,
        }
    }

    /// The frequency in units of `J₀`.
    pub fn sign<T: Real>(self) -> T {
        match self {
            FreqClass::Minus => -T::one(),
            FreqClass::Zero => T::zero(),
            FreqClass::Plus => T::one(),
        }
    }
}

impl<T: Real> EnergySpectrum<T> {
    /// Swap time `τ_s = π/J₀`.
    pub fn tau_s(&self) -> T {
        T::PI() / self.j0
    }

    pub fn class(&self, alpha: usize, beta: usize) -> FreqClass {
        transition_class(alpha, beta)
    }
}

/// Class of `ω_{αβ} = E_α − E_β`; only the singlet differs in energy.
pub fn transition_class(alpha: usize, beta: usize) -> FreqClass {
    match (alpha == SINGLET, beta == SINGLET) {
        (true, false) => FreqClass::Minus,
        (false, true) => FreqClass::Plus,
        _ => FreqClass::Zero,
    }
}

/// Triplet energies `J₀/4` and singlet energy `−3J₀/4`.
pub fn energies<T: Real>(j0: T) -> Result<EnergySpectrum<T>> {
    if !(j0 > T::zero()) || !j0.is_finite() {
        return Err(invalid("j0", format!("exchange energy must be positive and finite, got {j0}")));
    }
    let triplet = j0 * T::lit(0.25);
    let singlet = -j0 * T::lit(0.75);
    let energies = [triplet, triplet, triplet, singlet];
    let mut omega = [[T::zero(); DIM]; DIM];
    for a in 0..DIM {
        for b in 0..DIM {
            omega[a][b] = energies[a] - energies[b];
        }
    }
    Ok(EnergySpectrum { j0, energies, omega })
}

/// `M_{αβγδ} = Σ_{ij} ⟨α|S^j_i|β⟩⟨γ|S^j_i|δ⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct CouplingTensor<T: Real> {
    pub m: Tensor4<T>,
}

impl<T: Real> CouplingTensor<T> {
    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> C<T> {
        self.m.get(a, b, c, d)
    }
}

pub fn build_m_tensor<T: Real>(ops: &SpinOperatorSet<T>) -> CouplingTensor<T> {
    let m = Tensor4::from_fn(|a, b, c, d| ops.iter().fold(czero(), |acc, s| acc + s[(a, b)] * s[(c, d)]));
    CouplingTensor { m }
}

/// Reduced density matrix in the multiplet basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix<T: Real> {
    pub rho: Mat4<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Wraps a matrix without validation; used for intermediate channel outputs.
    pub fn from_matrix_unchecked(rho: Mat4<T>) -> Self {
        Self { rho }
    }

    /// Validates Hermiticity, unit trace and positivity (eigenvalues ≥ −1e-9).
    pub fn new(rho: Mat4<T>) -> Result<Self> {
        let tol = T::tolerance(1e-9);
        let herm = rho.hermiticity_error();
        if herm > tol {
            return Err(Error::InvalidState(format!("not Hermitian: max |ρ − ρ†| = {herm:e}")));
        }
        let tr = rho.trace();
        if (tr - re(T::one())).norm() > tol {
            return Err(Error::InvalidState(format!("trace is {} + {}i, expected 1", tr.re, tr.im)));
        }
        let (vals, _) = rho.eigh();
        if vals[0] < -tol {
            return Err(Error::InvalidState(format!("negative eigenvalue {:e}", vals[0])));
        }
        Ok(Self { rho })
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> C<T> {
        self.rho[(a, b)]
    }

    pub fn trace_error(&self) -> T {
        (self.rho.trace() - re(T::one())).norm()
    }

    pub fn hermiticity_error(&self) -> T {
        self.rho.hermiticity_error()
    }

    pub fn eigenvalues(&self) -> [T; DIM] {
        self.rho.eigh().0
    }

    /// Returns the state vector if `ρ` is pure to within `1e-9` in `tr ρ²`.
    pub fn pure_state(&self) -> Option<[C<T>; DIM]> {
        let purity = (self.rho * self.rho).trace().re;
        if (purity - T::one()).abs() > T::tolerance(1e-9) {
            return None;
        }
        let (_, vecs) = self.rho.eigh();
        Some(vecs.column(DIM - 1))
    }
}

/// Canonical initial states.
#[derive(Clone, Debug, PartialEq)]
pub enum InitialState<T: Real> {
    /// Dot 1 unpolarised, dot 2 spin-up: `(|↑↑⟩⟨↑↑| + |↓↑⟩⟨↓↑|)/2`.
    MixedUp,
    /// `|4⟩⟨4|`.
    Singlet,
    /// Arbitrary multiplet-basis matrix, validated on construction.
    Custom(Mat4<T>),
}

pub fn initial_state<T: Real>(kind: &InitialState<T>) -> Result<DensityMatrix<T>> {
    match kind {
        InitialState::MixedUp => {
            let q = T::lit(0.25);
            let mut rho = Mat4::zero();
            rho[(0, 0)] = re(T::lit(0.5));
            rho[(1, 1)] = re(q);
            rho[(1, 3)] = re(-q);
            rho[(3, 1)] = re(-q);
            rho[(3, 3)] = re(q);
            Ok(DensityMatrix { rho })
        }
        InitialState::Singlet => {
            let mut rho = Mat4::zero();
            rho[(SINGLET, SINGLET)] = re(T::one());
            Ok(DensityMatrix { rho })
        }
        InitialState::Custom(m) => DensityMatrix::new(*m),
    }
}
