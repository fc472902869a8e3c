//! Dense matrices, state vectors and density operators over any [`Scalar`].
//!
//! Operators act on column vectors from the left. Basis index bits are read
//! with wire 0 as the most significant bit.

use std::ops::{Index, IndexMut};

use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<D> {
    rows: usize,
    cols: usize,
    data: Vec<D>,
}

impl<D: Scalar> Matrix<D> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![D::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = D::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> D) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<D>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<D>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::from_vec(r, c, rows.into_iter().flatten().collect())
    }

    pub fn diagonal(entries: &[D]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[D] {
        &self.data
    }

    pub fn map<E: Scalar>(&self, f: impl Fn(D) -> E) -> Matrix<E> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    /// `(AB)_ik = Σ_j A_ij · B_jk`, left operand first in every product.
    pub fn matmul(&self, other: &Matrix<D>) -> Result<Matrix<D>> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for (j, &a) in row.iter().enumerate() {
                if a == D::zero() {
                    continue;
                }
                let src = &other.data[j * other.cols..(j + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose in the matrix's own domain.
    pub fn adjoint(&self) -> Matrix<D> {
        Matrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Matrix<D> {
        Matrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    /// Kronecker product with entries `A_ij · B_kl` in that order.
    pub fn kron(&self, other: &Matrix<D>) -> Matrix<D> {
        let (p, q) = (other.rows, other.cols);
        Matrix::from_fn(self.rows * p, self.cols * q, |r, c| {
            self[(r / p, c / q)] * other[(r % p, c % q)]
        })
    }

    pub fn add(&self, other: &Matrix<D>) -> Result<Matrix<D>> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Dimension("shape mismatch in addition".into()));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        })
    }

    pub fn scale(&self, s: f64) -> Matrix<D> {
        self.map(|x| x.scale(s))
    }

    /// Copy of the `rows × cols` block whose top-left corner is `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix<D> {
        Matrix::from_fn(rows, cols, |r, c| self[(r0 + r, c0 + c)])
    }

    /// Assembles a square grid of equally sized blocks.
    pub fn from_blocks(grid: &[Vec<Matrix<D>>]) -> Result<Matrix<D>> {
        let br = grid.len();
        let bc = grid.first().map_or(0, Vec::len);
        let (r, c) = grid
            .first()
            .and_then(|row| row.first())
            .map(|m| (m.rows, m.cols))
            .ok_or_else(|| Error::Dimension("empty block grid".into()))?;
        for row in grid {
            if row.len() != bc || row.iter().any(|m| (m.rows, m.cols) != (r, c)) {
                return Err(Error::Dimension("blocks of unequal shape".into()));
            }
        }
        Ok(Matrix::from_fn(br * r, bc * c, |i, j| {
            grid[i / r][j / c][(i % r, j % c)]
        }))
    }

    pub fn trace(&self) -> D {
        let mut t = D::zero();
        for i in 0..self.rows.min(self.cols) {
            t += self[(i, i)];
        }
        t
    }

    /// Largest entrywise modulus of `self − other`; infinite on shape mismatch.
    pub fn max_dist(&self, other: &Matrix<D>) -> f64 {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b).modulus())
            .fold(0.0, f64::max)
    }

    /// Max-norm distance of `M†M` from the identity. Covers O(n), U(n) and
    /// Sp(n) depending on `D`.
    pub fn group_deviation(&self) -> Result<f64> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let gram = self.adjoint().matmul(self)?;
        Ok(gram.max_dist(&Matrix::identity(self.rows)))
    }

    pub fn is_group_member(&self, tol: f64) -> bool {
        self.group_deviation().is_ok_and(|d| d <= tol)
    }

    pub fn apply(&self, v: &StateVector<D>) -> Result<StateVector<D>> {
        if self.cols != v.dim() {
            return Err(Error::Dimension(format!(
                "{}x{} operator on a vector of length {}",
                self.rows,
                self.cols,
                v.dim()
            )));
        }
        let amps = (0..self.rows)
            .map(|r| {
                let mut acc = D::zero();
                for (c, &a) in v.amplitudes().iter().enumerate() {
                    acc += self[(r, c)] * a;
                }
                acc
            })
            .collect();
        Ok(StateVector::from_amplitudes_unchecked(amps))
    }
}

impl<D> Index<(usize, usize)> for Matrix<D> {
    type Output = D;
    fn index(&self, (r, c): (usize, usize)) -> &D {
        &self.data[r * self.cols + c]
    }
}

impl<D> IndexMut<(usize, usize)> for Matrix<D> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut D {
        &mut self.data[r * self.cols + c]
    }
}

/// Draws a random element of O(n), U(n) or Sp(n) by Gram–Schmidt on a
/// Gaussian matrix. Projection coefficients multiply columns from the
/// right, which is what keeps the quaternionic case orthonormal.
pub fn random_group_element<D: Scalar, R: Rng + ?Sized>(
    dim: usize,
    rng: &mut R,
) -> Result<Matrix<D>> {
    const ATTEMPTS: usize = 16;
    if dim == 0 {
        return Err(Error::Dimension("group element of dimension 0".into()));
    }
    'attempt: for _ in 0..ATTEMPTS {
        let mut cols: Vec<Vec<D>> = (0..dim)
            .map(|_| (0..dim).map(|_| D::sample_normal(rng)).collect())
            .collect();
        for k in 0..dim {
            // two passes of modified Gram-Schmidt
            for _ in 0..2 {
                for j in 0..k {
                    let coeff = inner(&cols[j], &cols[k]);
                    let basis = cols[j].clone();
                    for (x, &u) in cols[k].iter_mut().zip(&basis) {
                        *x = *x - u * coeff;
                    }
                }
            }
            let norm = cols[k].iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-8 {
                continue 'attempt;
            }
            for x in cols[k].iter_mut() {
                *x = x.scale(1.0 / norm);
            }
        }
        return Ok(Matrix::from_fn(dim, dim, |r, c| cols[c][r]));
    }
    Err(Error::SingularDraw(ATTEMPTS))
}

/// `⟨u, v⟩ = Σ conj(u_k) · v_k`.
pub fn inner<D: Scalar>(u: &[D], v: &[D]) -> D {
    let mut acc = D::zero();
    for (&a, &b) in u.iter().zip(v) {
        acc += a.conj() * b;
    }
    acc
}

/// Amplitude vector of length `2^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<D> {
    amps: Vec<D>,
}

/// Norm tolerance for anything treated as a state.
pub const STATE_NORM_TOL: f64 = 1e-10;

impl<D: Scalar> StateVector<D> {
    /// Checks length is a power of two and the norm is 1.
    pub fn new(amps: Vec<D>) -> Result<Self> {
        if amps.is_empty() || !amps.len().is_power_of_two() {
            return Err(Error::Dimension(format!(
                "state length {} is not a power of two",
                amps.len()
            )));
        }
        let v = StateVector { amps };
        v.check_normalized()?;
        Ok(v)
    }

    pub fn from_amplitudes_unchecked(amps: Vec<D>) -> Self {
        StateVector { amps }
    }

    /// Computational basis state `|index⟩` on `wires` wires.
    pub fn basis(wires: usize, index: usize) -> Self {
        let mut amps = vec![D::zero(); 1 << wires];
        amps[index] = D::one();
        StateVector { amps }
    }

    pub fn random<R: Rng + ?Sized>(wires: usize, rng: &mut R) -> Self {
        let amps: Vec<D> = (0..1usize << wires)
            .map(|_| D::sample_normal(rng))
            .collect();
        let norm = amps.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        StateVector {
            amps: amps.into_iter().map(|x| x.scale(1.0 / norm)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn wires(&self) -> usize {
        self.amps.len().trailing_zeros() as usize
    }

    pub fn amplitudes(&self) -> &[D] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<D> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn check_normalized(&self) -> Result<()> {
        let n = self.norm();
        if (n - 1.0).abs() > STATE_NORM_TOL {
            return Err(Error::NotNormalized(n));
        }
        Ok(())
    }

    pub fn max_dist(&self, other: &StateVector<D>) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(&a, &b)| (a - b).modulus())
            .fold(0.0, f64::max)
    }

    /// Left scalar multiple `η·|v⟩`.
    pub fn left_phase(&self, eta: D) -> Self {
        StateVector {
            amps: self.amps.iter().map(|&a| eta * a).collect(),
        }
    }

    pub fn map<E: Scalar>(&self, f: impl Fn(D) -> E) -> StateVector<E> {
        StateVector {
            amps: self.amps.iter().map(|&a| f(a)).collect(),
        }
    }

    /// Outer product `|v⟩⟨v|`, entry `(i, k) = v_i · conj(v_k)`.
    pub fn density(&self) -> DensityOperator<D> {
        let m = Matrix::from_fn(self.dim(), self.dim(), |i, k| {
            self.amps[i] * self.amps[k].conj()
        });
        DensityOperator { matrix: m }
    }

    /// Column matrix view.
    pub fn to_column(&self) -> Matrix<D> {
        Matrix::from_fn(self.dim(), 1, |r, _| self.amps[r])
    }
}

/// A square operator of dimension `2^m`, produced from pure states or by
/// partial tracing.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator<D> {
    matrix: Matrix<D>,
}

impl<D: Scalar> DensityOperator<D> {
    pub fn new(matrix: Matrix<D>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        if !matrix.rows().is_power_of_two() {
            return Err(Error::Dimension(format!(
                "density operator of dimension {} is not a power of two",
                matrix.rows()
            )));
        }
        Ok(DensityOperator { matrix })
    }

    pub fn matrix(&self) -> &Matrix<D> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Traces out wire 0: with `ρ = [[A, B], [C, D]]` returns `A + D`.
    pub fn partial_trace_first(&self) -> Result<DensityOperator<D>> {
        let n = self.dim();
        if n < 4 {
            return Err(Error::NotBipartite(n));
        }
        let h = n / 2;
        let a = self.matrix.block(0, 0, h, h);
        let d = self.matrix.block(h, h, h, h);
        Ok(DensityOperator { matrix: a.add(&d)? })
    }

    /// Real diagonal. Diagonal entries of `|v⟩⟨v|` are `|v_i|²`.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim())
            .map(|i| self.matrix[(i, i)].to_quaternion().re)
            .collect()
    }

    pub fn trace(&self) -> D {
        self.matrix.trace()
    }

    /// Max-norm distance from its own adjoint.
    pub fn hermitian_deviation(&self) -> f64 {
        self.matrix.max_dist(&self.matrix.adjoint())
    }
}
