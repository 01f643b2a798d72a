//! Fixed-size complex linear algebra for the four-level two-spin system.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::scalar::{czero, re, Real, C};

pub const DIM: usize = 4;

/// Dense 4×4 complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat4<T: Real>(pub [[C<T>; DIM]; DIM]);

impl<T: Real> Default for Mat4<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Real> Mat4<T> {
    pub fn zero() -> Self {
        Self([[czero(); DIM]; DIM])
    }

    pub fn identity() -> Self {
        Self::from_fn(|i, j| if i == j { re(T::one()) } else { czero() })
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut m = Self::zero();
        for i in 0..DIM {
            for j in 0..DIM {
                m.0[i][j] = f(i, j);
            }
        }
        m
    }

    pub fn diag(d: [C<T>; DIM]) -> Self {
        Self::from_fn(|i, j| if i == j { d[i] } else { czero() })
    }

    pub fn real_diag(d: [T; DIM]) -> Self {
        Self::diag(d.map(re))
    }

    /// `|a⟩⟨b|` for column vectors `a`, `b`.
    pub fn outer(a: &[C<T>; DIM], b: &[C<T>; DIM]) -> Self {
        Self::from_fn(|i, j| a[i] * b[j].conj())
    }

    /// Kronecker product of two single-spin operators.
    pub fn kron(a: &[[C<T>; 2]; 2], b: &[[C<T>; 2]; 2]) -> Self {
        Self::from_fn(|i, j| a[i / 2][j / 2] * b[i % 2][j % 2])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i].conj())
    }

    pub fn trace(&self) -> C<T> {
        (0..DIM).fold(czero(), |acc, i| acc + self.0[i][i])
    }

    pub fn scale(&self, s: C<T>) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * s)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        self.0
            .iter()
            .flatten()
            .fold(T::zero(), |acc, z| acc.max(z.norm()))
    }

    /// `max |A − A†|` entrywise.
    pub fn hermiticity_error(&self) -> T {
        (*self - self.adjoint()).max_abs()
    }

    pub fn apply(&self, v: &[C<T>; DIM]) -> [C<T>; DIM] {
        let mut out = [czero(); DIM];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..DIM).fold(czero(), |acc, j| acc + self.0[i][j] * v[j]);
        }
        out
    }

    /// `⟨a|A|b⟩`.
    pub fn sandwich(&self, a: &[C<T>; DIM], b: &[C<T>; DIM]) -> C<T> {
        let ab = self.apply(b);
        (0..DIM).fold(czero(), |acc, i| acc + a[i].conj() * ab[i])
    }

    /// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
    ///
    /// Only the Hermitian part of `self` is used. Eigenvalues come back in ascending
    /// order; column `k` of the returned unitary is the eigenvector of eigenvalue `k`.
    pub fn eigh(&self) -> ([T; DIM], Mat4<T>) {
        let half = T::lit(0.5);
        let mut a = Self::from_fn(|i, j| (self.0[i][j] + self.0[j][i].conj()) * re(half));
        let mut v = Self::identity();
        let scale = a.max_abs().max(T::min_positive_value());
        let eps = T::epsilon();

        for _sweep in 0..64 {
            let off = (0..DIM)
                .flat_map(|i| (0..DIM).filter(move |&j| j != i).map(move |j| (i, j)))
                .fold(T::zero(), |acc, (i, j)| acc + a.0[i][j].norm_sqr());
            if off.sqrt() <= eps * scale {
                break;
            }
            for p in 0..DIM {
                for q in (p + 1)..DIM {
                    let z = a.0[p][q];
                    let r = z.norm();
                    if r <= T::min_positive_value() {
                        continue;
                    }
                    let phase = z / re(r);
                    let app = a.0[p][p].re;
                    let aqq = a.0[q][q].re;
                    let theta = half * (r + r).atan2(aqq - app);
                    let (s, c) = theta.sin_cos();
                    // J = diag(1, conj(phase)) · [[c, s], [-s, c]] embedded in the (p, q) plane.
                    let mut j = Self::identity();
                    j.0[p][p] = re(c);
                    j.0[p][q] = re(s);
                    j.0[q][p] = -phase.conj() * re(s);
                    j.0[q][q] = phase.conj() * re(c);
                    a = j.adjoint() * a * j;
                    a.0[p][q] = czero();
                    a.0[q][p] = czero();
                    v = v * j;
                }
            }
        }

        let mut order = [0usize, 1, 2, 3];
        order.sort_by(|&x, &y| a.0[x][x].re.partial_cmp(&a.0[y][y].re).unwrap_or(std::cmp::Ordering::Equal));
        let values = order.map(|k| a.0[k][k].re);
        let vectors = Self::from_fn(|i, k| v.0[i][order[k]]);
        (values, vectors)
    }

    pub fn column(&self, k: usize) -> [C<T>; DIM] {
        [self.0[0][k], self.0[1][k], self.0[2][k], self.0[3][k]]
    }
}

impl<T: Real> Index<(usize, usize)> for Mat4<T> {
    type Output = C<T>;
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        &self.0[i][j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for Mat4<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        &mut self.0[i][j]
    }
}

impl<T: Real> Add for Mat4<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] + rhs.0[i][j])
    }
}

impl<T: Real> Sub for Mat4<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] - rhs.0[i][j])
    }
}

impl<T: Real> Neg for Mat4<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::from_fn(|i, j| -self.0[i][j])
    }
}

impl<T: Real> Mul for Mat4<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| (0..DIM).fold(czero(), |acc, k| acc + self.0[i][k] * rhs.0[k][j]))
    }
}

/// Complex rank-4 tensor over the four basis labels, `t[a][b][c][d]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor4<T: Real> {
    data: Vec<C<T>>,
}

impl<T: Real> Tensor4<T> {
    pub fn zero() -> Self {
        Self { data: vec![czero(); DIM * DIM * DIM * DIM] }
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize, usize, usize) -> C<T>) -> Self {
        let mut t = Self::zero();
        for a in 0..DIM {
            for b in 0..DIM {
                for c in 0..DIM {
                    for d in 0..DIM {
                        t.data[Self::offset(a, b, c, d)] = f(a, b, c, d);
                    }
                }
            }
        }
        t
    }

    #[inline]
    fn offset(a: usize, b: usize, c: usize, d: usize) -> usize {
        ((a * DIM + b) * DIM + c) * DIM + d
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> C<T> {
        self.data[Self::offset(a, b, c, d)]
    }

    #[inline]
    pub fn set(&mut self, a: usize, b: usize, c: usize, d: usize, v: C<T>) {
        self.data[Self::offset(a, b, c, d)] = v;
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc.max(z.norm()))
    }

    /// Largest modulus of the entrywise difference.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |acc, (x, y)| acc.max((*x - *y).norm()))
    }
}
