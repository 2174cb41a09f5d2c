//! Truncated oscillator and qubit operators and their embedding into the
//! joint space with flat index `k = 2n + s`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{BandedHermitian, CMatrix};
use crate::C64;

/// Number of retained oscillator levels, `n = 0 .. N-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockTruncation(usize);

impl FockTruncation {
    pub fn new(levels: usize) -> Result<Self> {
        if levels < 2 {
            return Err(Error::InvalidTruncation(levels));
        }
        Ok(Self(levels))
    }

    pub fn levels(self) -> usize {
        self.0
    }

    /// Dimension of the joint oscillator-qubit space.
    pub fn joint_dim(self) -> usize {
        2 * self.0
    }
}

/// Position `(n, s)` in the joint basis. `s = 1` is the excited qubit state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct JointIndex {
    pub n: usize,
    pub s: usize,
}

impl JointIndex {
    pub fn new(n: usize, s: usize) -> Self {
        debug_assert!(s < 2);
        Self { n, s }
    }

    pub fn flat(self) -> usize {
        2 * self.n + self.s
    }

    pub fn from_flat(k: usize) -> Self {
        Self { n: k / 2, s: k % 2 }
    }

    /// Eigenvalue of σz on this basis state.
    pub fn sigma_z(self) -> f64 {
        if self.s == 1 {
            1.0
        } else {
            -1.0
        }
    }
}

/// Annihilation operator: `a(n-1, n) = √n`.
pub fn build_annihilation(trunc: FockTruncation) -> CMatrix {
    let n = trunc.levels();
    let mut a = CMatrix::zeros(n, n);
    for k in 1..n {
        a[(k - 1, k)] = C64::new((k as f64).sqrt(), 0.0);
    }
    a
}

pub fn build_creation(trunc: FockTruncation) -> CMatrix {
    build_annihilation(trunc).adjoint()
}

pub fn build_number(trunc: FockTruncation) -> CMatrix {
    let d: Vec<C64> = (0..trunc.levels()).map(|k| C64::new(k as f64, 0.0)).collect();
    CMatrix::from_diagonal(&d)
}

/// `a + a†`.
pub fn build_quadrature(trunc: FockTruncation) -> CMatrix {
    let a = build_annihilation(trunc);
    a.add(&a.adjoint())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QubitOperator {
    Identity,
    SigmaX,
    SigmaZ,
    /// Raising operator, maps `s = 0` to `s = 1`.
    SigmaPlus,
    SigmaMinus,
}

/// 2x2 matrix in the `(s = 0, s = 1)` basis with `σz = diag(-1, +1)`.
pub fn build_qubit_operator(which: QubitOperator) -> CMatrix {
    let one = C64::new(1.0, 0.0);
    let mut m = CMatrix::zeros(2, 2);
    match which {
        QubitOperator::Identity => {
            m[(0, 0)] = one;
            m[(1, 1)] = one;
        }
        QubitOperator::SigmaX => {
            m[(0, 1)] = one;
            m[(1, 0)] = one;
        }
        QubitOperator::SigmaZ => {
            m[(0, 0)] = -one;
            m[(1, 1)] = one;
        }
        QubitOperator::SigmaPlus => m[(1, 0)] = one,
        QubitOperator::SigmaMinus => m[(0, 1)] = one,
    }
    m
}

/// Sparse operator on the joint space, keyed by `(row, col)` flat indices.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct JointOperator {
    dim: usize,
    entries: BTreeMap<(usize, usize), C64>,
}

impl JointOperator {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, entries: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.entries.get(&(i, j)).copied().unwrap_or_default()
    }

    pub fn insert_add(&mut self, i: usize, j: usize, v: C64) {
        if v != C64::new(0.0, 0.0) {
            *self.entries.entry((i, j)).or_default() += v;
        }
    }

    pub fn nonzeros(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        self.entries.iter().map(|(&(i, j), &v)| (i, j, v))
    }

    pub fn adjoint(&self) -> Self {
        let entries = self.entries.iter().map(|(&(i, j), v)| ((j, i), v.conj())).collect();
        Self { dim: self.dim, entries }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (i, j, v) in other.nonzeros() {
            out.insert_add(i, j, v);
        }
        out
    }

    pub fn scale(&self, s: C64) -> Self {
        let entries = self.entries.iter().map(|(&k, &v)| (k, v * s)).collect();
        Self { dim: self.dim, entries }
    }

    pub fn to_dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for (i, j, v) in self.nonzeros() {
            m[(i, j)] += v;
        }
        m
    }

    /// Largest `|M(i,j) - conj(M(j,i))|`.
    pub fn hermitian_defect(&self) -> f64 {
        self.nonzeros().map(|(i, j, v)| (v - self.get(j, i).conj()).norm()).fold(0.0, f64::max)
    }

    /// Band storage with the minimal half-bandwidth. Fails for operators
    /// that are not self-adjoint within `tol`.
    pub fn to_banded(&self, tol: f64) -> Result<BandedHermitian> {
        let defect = self.hermitian_defect();
        if defect > tol {
            return Err(Error::NotSelfAdjoint(defect));
        }
        let b = self.nonzeros().map(|(i, j, _)| i.abs_diff(j)).max().unwrap_or(0);
        let mut out = BandedHermitian::zeros(self.dim, b);
        for (i, j, v) in self.nonzeros() {
            if i == j {
                out.add_diagonal(i, v.re);
            } else if i < j {
                out.add_off_diagonal(i, j, 0.5 * (v + self.get(j, i).conj()));
            }
        }
        Ok(out)
    }
}

/// Tensor product `osc ⊗ qubit` in the interleaved ordering:
/// `((n,s),(n',s')) = osc(n,n') * qubit(s,s')`.
pub fn embed(osc: &CMatrix, qubit: &CMatrix) -> Result<JointOperator> {
    if !osc.is_square() || qubit.rows() != 2 || qubit.cols() != 2 {
        return Err(Error::Dimension(format!(
            "embed needs NxN and 2x2 factors, got {}x{} and {}x{}",
            osc.rows(),
            osc.cols(),
            qubit.rows(),
            qubit.cols()
        )));
    }
    let n = osc.rows();
    let mut out = JointOperator::zeros(2 * n);
    for col in 0..n {
        for (row, &o) in osc.col(col).iter().enumerate() {
            if o == C64::new(0.0, 0.0) {
                continue;
            }
            for s2 in 0..2 {
                for s1 in 0..2 {
                    let q = qubit[(s1, s2)];
                    if q != C64::new(0.0, 0.0) {
                        out.insert_add(2 * row + s1, 2 * col + s2, o * q);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// [`embed`] followed by conversion to band storage; errors when the product
/// is not self-adjoint.
pub fn embed_banded(osc: &CMatrix, qubit: &CMatrix) -> Result<BandedHermitian> {
    embed(osc, qubit)?.to_banded(0.0)
}
