//! Dense column-major complex matrices and Hermitian band storage.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::par;
use crate::C64;

/// Dense complex matrix stored column by column.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: Vec<Vec<C64>>) -> Self {
        let cols = columns.len();
        let mut data = Vec::with_capacity(rows * cols);
        for c in columns {
            assert_eq!(c.len(), rows, "column length mismatch");
            data.extend(c);
        }
        Self { rows, cols, data }
    }

    pub fn from_diagonal(d: &[C64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = v;
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

    pub fn col(&self, j: usize) -> &[C64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [C64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn into_columns(self) -> Vec<Vec<C64>> {
        if self.rows == 0 {
            return vec![Vec::new(); self.cols];
        }
        self.data.chunks(self.rows).map(|c| c.to_vec()).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&v| v * s).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    /// Matrix product, evaluated column by column.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let rows = self.rows;
        let mut out = Self::zeros(rows, other.cols);
        if rows == 0 {
            return out;
        }
        par::for_each_chunk_mut(&mut out.data, rows, |j, col| {
            for (k, &b) in other.col(j).iter().enumerate() {
                if b == C64::new(0.0, 0.0) {
                    continue;
                }
                for (o, &a) in col.iter_mut().zip(self.col(k)) {
                    *o += a * b;
                }
            }
        });
        out
    }

    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.cols);
        let mut y = vec![C64::new(0.0, 0.0); self.rows];
        for (j, &xj) in x.iter().enumerate() {
            if xj == C64::new(0.0, 0.0) {
                continue;
            }
            for (yi, &a) in y.iter_mut().zip(self.col(j)) {
                *yi += a * xj;
            }
        }
        y
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - self†`.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for j in 0..self.cols {
            for i in 0..=j {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `max |(U†U - I)_{ij}|`, computed from column inner products.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.cols;
        let per_col = par::map_range(n, |j| {
            let cj = self.col(j);
            let mut worst = 0.0f64;
            for i in 0..=j {
                let dot: C64 = self.col(i).iter().zip(cj).map(|(a, b)| a.conj() * b).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).norm());
            }
            worst
        });
        per_col.into_iter().fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[j * self.rows + i]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[j * self.rows + i]
    }
}

/// Hermitian matrix in band storage.
///
/// Only the real diagonal and the super-diagonals at offsets `1..=b` are
/// stored; the lower triangle is implied by self-adjointness, so every value
/// of this type is exactly Hermitian.
#[derive(Clone, Debug, PartialEq)]
pub struct BandedHermitian {
    dim: usize,
    diag: Vec<f64>,
    /// `upper[d - 1][i] = M(i, i + d)`.
    upper: Vec<Vec<C64>>,
}

impl BandedHermitian {
    pub fn zeros(dim: usize, half_bandwidth: usize) -> Self {
        let b = half_bandwidth.min(dim.saturating_sub(1));
        let upper = (1..=b).map(|d| vec![C64::new(0.0, 0.0); dim - d]).collect();
        Self { dim, diag: vec![0.0; dim], upper }
    }

    pub fn from_diagonal(diag: Vec<f64>) -> Self {
        Self { dim: diag.len(), diag, upper: Vec::new() }
    }

    /// Converts a dense matrix, rejecting it if it is not Hermitian within `tol`.
    /// The stored half-bandwidth is the smallest one holding every nonzero.
    pub fn from_dense(m: &CMatrix, tol: f64) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension(format!("{}x{} is not square", m.rows(), m.cols())));
        }
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        let defect = m.hermitian_defect();
        if defect > tol {
            return Err(Error::NotSelfAdjoint(defect));
        }
        let n = m.rows();
        let mut b = 0;
        for j in 0..n {
            for i in 0..j {
                if m[(i, j)] != C64::new(0.0, 0.0) || m[(j, i)] != C64::new(0.0, 0.0) {
                    b = b.max(j - i);
                }
            }
        }
        let mut out = Self::zeros(n, b);
        for i in 0..n {
            out.diag[i] = m[(i, i)].re;
            for d in 1..=b.min(n - 1 - i) {
                // average the two triangles so small asymmetries do not bias one side
                out.upper[d - 1][i] = 0.5 * (m[(i, i + d)] + m[(i + d, i)].conj());
            }
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn half_bandwidth(&self) -> usize {
        self.upper.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    /// Super-diagonal at offset `d >= 1`: entry `i` is `M(i, i + d)`.
    pub fn super_diagonal(&self, d: usize) -> &[C64] {
        &self.upper[d - 1]
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        if i == j {
            return C64::new(self.diag[i], 0.0);
        }
        let (lo, hi, conj) = if i < j { (i, j, false) } else { (j, i, true) };
        let d = hi - lo;
        if d > self.half_bandwidth() {
            return C64::new(0.0, 0.0);
        }
        let v = self.upper[d - 1][lo];
        if conj {
            v.conj()
        } else {
            v
        }
    }

    pub fn add_diagonal(&mut self, i: usize, v: f64) {
        self.diag[i] += v;
    }

    /// Adds `v` to `M(i, j)` (and `conj(v)` to `M(j, i)`); requires `i != j`.
    pub fn add_off_diagonal(&mut self, i: usize, j: usize, v: C64) {
        assert_ne!(i, j, "use add_diagonal for diagonal entries");
        let (lo, hi, v) = if i < j { (i, j, v) } else { (j, i, v.conj()) };
        let d = hi - lo;
        self.grow(d);
        self.upper[d - 1][lo] += v;
    }

    fn grow(&mut self, b: usize) {
        while self.upper.len() < b.min(self.dim.saturating_sub(1)) {
            let d = self.upper.len() + 1;
            self.upper.push(vec![C64::new(0.0, 0.0); self.dim - d]);
        }
    }

    /// Adds `s * other` in place.
    pub fn add_scaled(&mut self, other: &BandedHermitian, s: f64) {
        assert_eq!(self.dim, other.dim);
        self.grow(other.half_bandwidth());
        for (a, b) in self.diag.iter_mut().zip(&other.diag) {
            *a += s * b;
        }
        for (d, band) in other.upper.iter().enumerate() {
            for (a, b) in self.upper[d].iter_mut().zip(band) {
                *a += s * b;
            }
        }
    }

    pub fn shift_diagonal(&mut self, c: f64) {
        for d in &mut self.diag {
            *d += c;
        }
    }

    /// Drops all-zero outer diagonals.
    pub fn trimmed(mut self) -> Self {
        while let Some(last) = self.upper.last() {
            if last.iter().all(|v| *v == C64::new(0.0, 0.0)) {
                self.upper.pop();
            } else {
                break;
            }
        }
        self
    }

    pub fn is_real(&self) -> bool {
        self.upper.iter().all(|band| band.iter().all(|v| v.im == 0.0))
    }

    pub fn is_finite(&self) -> bool {
        self.diag.iter().all(|v| v.is_finite()) && self.upper.iter().all(|b| b.iter().all(|v| v.re.is_finite() && v.im.is_finite()))
    }

    pub fn to_dense(&self) -> CMatrix {
        CMatrix::from_fn(self.dim, self.dim, |i, j| self.get(i, j))
    }

    /// `y = M x`.
    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.dim);
        let mut y: Vec<C64> = self.diag.iter().zip(x).map(|(d, v)| v * *d).collect();
        for (k, band) in self.upper.iter().enumerate() {
            let d = k + 1;
            for (i, &m) in band.iter().enumerate() {
                y[i] += m * x[i + d];
                y[i + d] += m.conj() * x[i];
            }
        }
        y
    }

    /// `⟨x|M|x⟩`, real by Hermiticity.
    pub fn expectation(&self, x: &[C64]) -> f64 {
        let mut acc: f64 = self.diag.iter().zip(x).map(|(d, v)| d * v.norm_sqr()).sum();
        for (k, band) in self.upper.iter().enumerate() {
            let d = k + 1;
            for (i, &m) in band.iter().enumerate() {
                acc += 2.0 * (x[i].conj() * m * x[i + d]).re;
            }
        }
        acc
    }

    /// Maximum absolute row sum, an upper bound on the spectral norm.
    pub fn norm_inf(&self) -> f64 {
        let mut rows: Vec<f64> = self.diag.iter().map(|d| d.abs()).collect();
        for (k, band) in self.upper.iter().enumerate() {
            let d = k + 1;
            for (i, m) in band.iter().enumerate() {
                rows[i] += m.norm();
                rows[i + d] += m.norm();
            }
        }
        rows.into_iter().fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &BandedHermitian) -> f64 {
        assert_eq!(self.dim, other.dim);
        let b = self.half_bandwidth().max(other.half_bandwidth());
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..(i + b + 1).min(self.dim) {
                worst = worst.max((self.get(i, j) - other.get(i, j)).norm());
            }
        }
        worst
    }
}

pub(crate) fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn norm(a: &[C64]) -> f64 {
    a.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn banded_roundtrip_and_matvec() {
        let mut m = BandedHermitian::zeros(5, 0);
        m.add_diagonal(0, 1.0);
        m.add_diagonal(3, -2.0);
        m.add_off_diagonal(1, 3, c(0.5, 0.25));
        m.add_off_diagonal(4, 2, c(0.0, 1.0));
        assert_eq!(m.half_bandwidth(), 2);
        let dense = m.to_dense();
        assert_eq!(dense.hermitian_defect(), 0.0);
        let back = BandedHermitian::from_dense(&dense, 0.0).unwrap();
        assert_eq!(back, m);
        let x: Vec<C64> = (0..5).map(|i| c(i as f64, 1.0 - i as f64)).collect();
        let y1 = m.matvec(&x);
        let y2 = dense.matvec(&x);
        for (a, b) in y1.iter().zip(&y2) {
            assert!((a - b).norm() < 1e-14);
        }
        let e = m.expectation(&x);
        assert!((e - dot(&x, &y2).re).abs() < 1e-12);
    }

    #[test]
    fn from_dense_rejects_non_hermitian() {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = c(1.0, 0.0);
        assert!(matches!(BandedHermitian::from_dense(&m, 1e-12), Err(Error::NotSelfAdjoint(_))));
    }

    #[test]
    fn unitarity_defect_of_identity_is_zero() {
        assert_eq!(CMatrix::identity(4).unitarity_defect(), 0.0);
        let m = CMatrix::identity(3).scale(c(2.0, 0.0));
        assert!((m.unitarity_defect() - 3.0).abs() < 1e-15);
    }
}
