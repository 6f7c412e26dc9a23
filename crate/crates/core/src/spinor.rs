//! Fixed-size Dirac algebra: 4-spinors, 4×4 complex matrices and the
//! Dirac–Pauli representation of `α₁, α₂, α₃, β`.

use crate::sign::Sign;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

pub type Complex = num_complex::Complex64;

pub const ZERO: Complex = Complex::new(0.0, 0.0);
pub const ONE: Complex = Complex::new(1.0, 0.0);
pub const I: Complex = Complex::new(0.0, 1.0);

/// Four complex amplitudes, the value of a wave function at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct Spinor4(pub [Complex; 4]);

impl Spinor4 {
    pub const ZERO: Spinor4 = Spinor4([ZERO; 4]);

    pub fn new(c: [Complex; 4]) -> Self {
        Spinor4(c)
    }

    pub fn from_real(c: [f64; 4]) -> Self {
        Spinor4(c.map(|x| Complex::new(x, 0.0)))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Hermitian inner product `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn dot(&self, other: &Spinor4) -> Complex {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn scale(&self, s: Complex) -> Spinor4 {
        Spinor4(self.0.map(|c| c * s))
    }

    pub fn scale_re(&self, s: f64) -> Spinor4 {
        Spinor4(self.0.map(|c| c * s))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Largest absolute component.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl Index<usize> for Spinor4 {
    type Output = Complex;
    fn index(&self, i: usize) -> &Complex {
        &self.0[i]
    }
}

impl IndexMut<usize> for Spinor4 {
    fn index_mut(&mut self, i: usize) -> &mut Complex {
        &mut self.0[i]
    }
}

impl Add for Spinor4 {
    type Output = Spinor4;
    fn add(self, rhs: Spinor4) -> Spinor4 {
        Spinor4(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl AddAssign for Spinor4 {
    fn add_assign(&mut self, rhs: Spinor4) {
        for i in 0..4 {
            self.0[i] += rhs.0[i];
        }
    }
}

impl Sub for Spinor4 {
    type Output = Spinor4;
    fn sub(self, rhs: Spinor4) -> Spinor4 {
        Spinor4(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl Neg for Spinor4 {
    type Output = Spinor4;
    fn neg(self) -> Spinor4 {
        Spinor4(self.0.map(|c| -c))
    }
}

impl Mul<Spinor4> for Complex {
    type Output = Spinor4;
    fn mul(self, rhs: Spinor4) -> Spinor4 {
        rhs.scale(self)
    }
}

impl Mul<Spinor4> for f64 {
    type Output = Spinor4;
    fn mul(self, rhs: Spinor4) -> Spinor4 {
        rhs.scale_re(self)
    }
}

/// Row-major 4×4 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix4(pub [[Complex; 4]; 4]);

impl Matrix4 {
    pub const ZERO: Matrix4 = Matrix4([[ZERO; 4]; 4]);

    pub fn identity() -> Self {
        Self::diag([ONE; 4])
    }

    pub fn diag(d: [Complex; 4]) -> Self {
        let mut m = Self::ZERO;
        for (i, v) in d.into_iter().enumerate() {
            m.0[i][i] = v;
        }
        m
    }

    /// Block matrix `[[a, b], [c, d]]` from 2×2 blocks.
    pub fn from_blocks(a: [[Complex; 2]; 2], b: [[Complex; 2]; 2], c: [[Complex; 2]; 2], d: [[Complex; 2]; 2]) -> Self {
        let mut m = Self::ZERO;
        for i in 0..2 {
            for j in 0..2 {
                m.0[i][j] = a[i][j];
                m.0[i][j + 2] = b[i][j];
                m.0[i + 2][j] = c[i][j];
                m.0[i + 2][j + 2] = d[i][j];
            }
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        Matrix4(std::array::from_fn(|i| std::array::from_fn(|j| self.0[j][i].conj())))
    }

    pub fn scale(&self, s: Complex) -> Self {
        Matrix4(self.0.map(|row| row.map(|c| c * s)))
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, other: &Matrix4) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        worst
    }

    pub fn anticommutator(&self, other: &Matrix4) -> Matrix4 {
        *self * *other + *other * *self
    }
}

impl Add for Matrix4 {
    type Output = Matrix4;
    fn add(self, rhs: Matrix4) -> Matrix4 {
        Matrix4(std::array::from_fn(|i| std::array::from_fn(|j| self.0[i][j] + rhs.0[i][j])))
    }
}

impl Sub for Matrix4 {
    type Output = Matrix4;
    fn sub(self, rhs: Matrix4) -> Matrix4 {
        Matrix4(std::array::from_fn(|i| std::array::from_fn(|j| self.0[i][j] - rhs.0[i][j])))
    }
}

impl Mul for Matrix4 {
    type Output = Matrix4;
    fn mul(self, rhs: Matrix4) -> Matrix4 {
        Matrix4(std::array::from_fn(|i| std::array::from_fn(|j| (0..4).map(|k| self.0[i][k] * rhs.0[k][j]).sum())))
    }
}

impl Mul<Spinor4> for Matrix4 {
    type Output = Spinor4;
    fn mul(self, rhs: Spinor4) -> Spinor4 {
        Spinor4(std::array::from_fn(|i| (0..4).map(|k| self.0[i][k] * rhs.0[k]).sum()))
    }
}

impl Mul<Matrix4> for Complex {
    type Output = Matrix4;
    fn mul(self, rhs: Matrix4) -> Matrix4 {
        rhs.scale(self)
    }
}

impl Mul<Matrix4> for f64 {
    type Output = Matrix4;
    fn mul(self, rhs: Matrix4) -> Matrix4 {
        rhs.scale(Complex::new(self, 0.0))
    }
}

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn pauli() -> [[[Complex; 2]; 2]; 3] {
    [[[ZERO, ONE], [ONE, ZERO]], [[ZERO, c(0.0, -1.0)], [I, ZERO]], [[ONE, ZERO], [ZERO, c(-1.0, 0.0)]]]
}

/// `α₁, α₂, α₃, β` in the Dirac–Pauli representation.
#[derive(Debug, Clone, Copy)]
pub struct DiracMatrices {
    pub alpha: [Matrix4; 3],
    pub beta: Matrix4,
}

impl DiracMatrices {
    /// Spin matrix `Σ_k = diag(σ_k, σ_k)`.
    pub fn sigma(&self, k: usize) -> Matrix4 {
        let s = pauli()[k];
        let z = [[ZERO; 2]; 2];
        Matrix4::from_blocks(s, z, z, s)
    }
}

/// The standard Dirac–Pauli matrices: `α_k` carries the Pauli matrix `σ_k` in its
/// off-diagonal blocks and `β = diag(1, 1, -1, -1)`.
pub fn dirac_matrices() -> DiracMatrices {
    let z = [[ZERO; 2]; 2];
    let id = [[ONE, ZERO], [ZERO, ONE]];
    let mid = [[c(-1.0, 0.0), ZERO], [ZERO, c(-1.0, 0.0)]];
    let s = pauli();
    DiracMatrices {
        alpha: [
            Matrix4::from_blocks(z, s[0], s[0], z),
            Matrix4::from_blocks(z, s[1], s[1], z),
            Matrix4::from_blocks(z, s[2], s[2], z),
        ],
        beta: Matrix4::from_blocks(id, z, z, mid),
    }
}

/// `exp(½ α₁α₂ θ) = cos(θ/2)·I + sin(θ/2)·α₁α₂`.
///
/// `(α₁α₂)² = -I`, so the series closes. In this representation the result is
/// `diag(e^{iθ/2}, e^{-iθ/2}, e^{iθ/2}, e^{-iθ/2})`.
pub fn rot_phase(theta: f64) -> Matrix4 {
    let g = dirac_matrices();
    let a12 = g.alpha[0] * g.alpha[1];
    let (s, co) = (0.5 * theta).sin_cos();
    co * Matrix4::identity() + s * a12
}

/// Action of `exp(½ α₁α₂ θ)` on a spinor without forming the matrix.
#[inline]
pub fn apply_rot_phase(theta: f64, psi: &Spinor4) -> Spinor4 {
    let up = Complex::from_polar(1.0, 0.5 * theta);
    let down = up.conj();
    Spinor4([psi[0] * up, psi[1] * down, psi[2] * up, psi[3] * down])
}

/// Spin weight of each component under `α₁α₂ = i·diag(1, -1, 1, -1)`.
pub const SPIN_WEIGHT: [f64; 4] = [1.0, -1.0, 1.0, -1.0];

/// `ε·α₁α₃β·ψ`, the map between the two signs of the envelope coefficient `d`.
pub fn flip_state(psi: &Spinor4, propagation: Sign) -> Spinor4 {
    let g = dirac_matrices();
    (g.alpha[0] * g.alpha[2] * g.beta * *psi).scale_re(propagation.value())
}
