//! Eigendecomposition of Hermitian band matrices and of dense unitary
//! matrices.
//!
//! Hermitian path: Givens bulge-chasing reduces the band one diagonal at a
//! time down to a tridiagonal, a diagonal phase change makes it real, and
//! implicit-shift QL finds the spectrum. Every rotation is recorded and the
//! eigenvector matrix is assembled afterwards by replaying the rotations on
//! independent blocks of rows, which is where the parallelism lives.
//!
//! Unitary path: Householder reduction to Hessenberg form followed by
//! single-shift QR. A unitary matrix is normal, so its Schur form is
//! diagonal and the Schur vectors are the eigenvectors.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::linalg::{self, BandedHermitian, CMatrix};
use crate::par;
use crate::C64;

/// Largest matrix dimension accepted by [`eigh`].
pub const MAX_DIM: usize = 8192;

/// Default tolerance on `max |U†U - I|` for [`eig_unitary`].
pub const UNITARITY_TOL: f64 = 1e-8;

const ROW_BLOCK: usize = 64;

/// Sorted eigenpairs of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    /// Ascending eigenvalues; position `j` is the eigenstate index.
    pub values: Vec<f64>,
    /// Column `j` is the eigenvector of `values[j]`.
    pub vectors: CMatrix,
    /// `max_j ‖M v_j − λ_j v_j‖`.
    pub residual_norm: f64,
}

impl EigenDecomposition {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn vector(&self, j: usize) -> &[C64] {
        self.vectors.col(j)
    }

    pub fn orthonormality_defect(&self) -> f64 {
        self.vectors.unitarity_defect()
    }
}

/// Eigenvalues, quasienergies and eigenvectors of a unitary matrix.
#[derive(Clone, Debug)]
pub struct UnitaryEigen {
    /// Eigenvalues `μ_j`, sorted by quasienergy.
    pub eigenvalues: Vec<C64>,
    /// `ε_j = −arg(μ_j)/T` folded into `[0, 2π/T)`, ascending.
    pub quasienergies: Vec<f64>,
    pub vectors: CMatrix,
    pub period: f64,
    /// `max |U†U − I|` of the input.
    pub unitarity_defect: f64,
    /// `max_j | |μ_j| − 1 |`.
    pub modulus_defect: f64,
}

// ---------------------------------------------------------------------------
// scalar abstraction so the band reduction runs in real arithmetic whenever
// the input is real

pub(crate) trait Scalar:
    Copy
    + Send
    + Sync
    + Default
    + PartialEq
    + std::fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    fn conj(self) -> Self;
    fn abs(self) -> f64;
    fn re(self) -> f64;
    fn from_re(x: f64) -> Self;
    fn scale(self, x: f64) -> Self;
    fn to_c64(self) -> C64;
    /// `x / |x|`, or one for zero.
    fn unit(self) -> Self {
        let a = self.abs();
        if a == 0.0 {
            Self::from_re(1.0)
        } else {
            self.scale(1.0 / a)
        }
    }
}

impl Scalar for f64 {
    fn conj(self) -> Self {
        self
    }
    fn abs(self) -> f64 {
        f64::abs(self)
    }
    fn re(self) -> f64 {
        self
    }
    fn from_re(x: f64) -> Self {
        x
    }
    fn scale(self, x: f64) -> Self {
        self * x
    }
    fn to_c64(self) -> C64 {
        C64::new(self, 0.0)
    }
}

impl Scalar for C64 {
    fn conj(self) -> Self {
        C64::conj(&self)
    }
    fn abs(self) -> f64 {
        self.norm()
    }
    fn re(self) -> f64 {
        self.re
    }
    fn from_re(x: f64) -> Self {
        C64::new(x, 0.0)
    }
    fn scale(self, x: f64) -> Self {
        self * x
    }
    fn to_c64(self) -> C64 {
        self
    }
}

/// Plane rotation `G = [[c, s], [−conj(s), c]]` on indices `(p, p+1)`.
#[derive(Clone, Copy, Debug)]
struct Rotation<T> {
    p: usize,
    c: f64,
    s: T,
}

impl<T: Scalar> Rotation<T> {
    /// Rotation with `G (x, y)ᵀ = (r, 0)ᵀ`.
    fn zeroing(p: usize, x: T, y: T) -> Self {
        let ax = x.abs();
        let ay = y.abs();
        if ay == 0.0 {
            return Self { p, c: 1.0, s: T::default() };
        }
        if ax == 0.0 {
            return Self { p, c: 0.0, s: T::from_re(1.0) };
        }
        let rho = ax.hypot(ay);
        Self { p, c: ax / rho, s: (x.unit() * y.conj()).scale(1.0 / rho) }
    }
}

/// Lower band of a Hermitian matrix with one extra diagonal for the bulge.
struct BandWork<T> {
    n: usize,
    width: usize,
    data: Vec<T>,
}

impl<T: Scalar> BandWork<T> {
    fn new(n: usize, width: usize) -> Self {
        Self { n, width, data: vec![T::default(); n * (width + 1)] }
    }

    /// Entry `(i, j)` with `i >= j`.
    #[inline]
    fn at(&self, i: usize, j: usize) -> T {
        debug_assert!(i >= j && i - j <= self.width);
        self.data[j * (self.width + 1) + (i - j)]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: T) {
        debug_assert!(i >= j && i - j <= self.width);
        self.data[j * (self.width + 1) + (i - j)] = v;
    }

    /// `A ← G A G†` for a rotation on rows/columns `(p, p+1)`.
    fn similarity(&mut self, r: &Rotation<T>) {
        let (p, c, s) = (r.p, r.c, r.s);
        let q = p + 1;
        let w = self.width;
        // row entries left of the 2x2 block
        let lo = q.saturating_sub(w);
        for k in lo..p {
            let x = self.at(p, k);
            let y = self.at(q, k);
            self.set(p, k, x.scale(c) + s * y);
            self.set(q, k, y.scale(c) - s.conj() * x);
        }
        // column entries below the block
        let hi = (p + w).min(self.n - 1);
        for k in (q + 1)..=hi {
            let x = self.at(k, p);
            let y = if k - q <= w { self.at(k, q) } else { T::default() };
            self.set(k, p, x.scale(c) + s.conj() * y);
            if k - q <= w {
                self.set(k, q, y.scale(c) - s * x);
            }
        }
        let alpha = self.at(p, p).re();
        let beta = self.at(q, p);
        let gamma = self.at(q, q).re();
        let sb = (s * beta).re();
        let ss = s.abs().powi(2);
        let new_pp = c * c * alpha + 2.0 * c * sb + ss * gamma;
        let new_qq = ss * alpha - 2.0 * c * sb + c * c * gamma;
        let sc = s.conj();
        let new_qp = beta.scale(c * c) - sc * sc * beta.conj() + sc.scale(c * (gamma - alpha));
        self.set(p, p, T::from_re(new_pp));
        self.set(q, q, T::from_re(new_qq));
        self.set(q, p, new_qp);
    }
}

/// Reduces a Hermitian band matrix to real symmetric tridiagonal form.
/// Returns `(diag, offdiag, phases, rotations)` with
/// `A = Y D T D† Y†`, where `Y` is the product of the rotations' adjoints.
#[allow(clippy::type_complexity)]
fn reduce_to_tridiagonal<T: Scalar>(n: usize, b: usize, get: impl Fn(usize, usize) -> T) -> (Vec<f64>, Vec<f64>, Vec<T>, Vec<Rotation<T>>) {
    let mut work = BandWork::new(n, b + 1);
    for j in 0..n {
        for d in 0..=b.min(n - 1 - j) {
            work.set(j + d, j, get(j + d, j));
        }
    }
    let mut rotations = Vec::new();
    for bw in (2..=b).rev() {
        for j in 0..n {
            let i = j + bw;
            if i >= n {
                break;
            }
            if work.at(i, j) == T::default() {
                continue;
            }
            let r = Rotation::zeroing(i - 1, work.at(i - 1, j), work.at(i, j));
            work.similarity(&r);
            work.set(i, j, T::default());
            rotations.push(r);
            let mut col = i - 1;
            let mut row = i + bw;
            while row < n {
                let bulge = work.at(row, col);
                if bulge == T::default() {
                    break;
                }
                let r = Rotation::zeroing(row - 1, work.at(row - 1, col), bulge);
                work.similarity(&r);
                work.set(row, col, T::default());
                rotations.push(r);
                col = row - 1;
                row += bw;
            }
        }
    }
    let diag: Vec<f64> = (0..n).map(|j| work.at(j, j).re()).collect();
    let mut off = Vec::with_capacity(n.saturating_sub(1));
    let mut phases = Vec::with_capacity(n);
    let mut delta = T::from_re(1.0);
    phases.push(delta);
    for j in 0..n.saturating_sub(1) {
        let e = work.at(j + 1, j);
        off.push(e.abs());
        delta = delta * e.unit();
        phases.push(delta);
    }
    (diag, off, phases, rotations)
}

/// Implicit QL on a symmetric tridiagonal matrix. Returns the (unsorted)
/// eigenvalues and the column rotations `(i, c, s)` acting as
/// `z[i+1] ← s z[i] + c z[i+1]`, `z[i] ← c z[i] − s z[i+1]`.
fn tridiagonal_ql(mut d: Vec<f64>, off: &[f64]) -> Result<(Vec<f64>, Vec<(usize, f64, f64)>)> {
    let n = d.len();
    let mut e = vec![0.0; n];
    e[..n.saturating_sub(1)].copy_from_slice(off);
    let mut rots = Vec::new();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::NoConvergence(format!("tridiagonal QL at index {l}")));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut early = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    early = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                rots.push((i, c, s));
            }
            if early {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok((d, rots))
}

/// Rows of an `n x n` matrix processed in blocks of [`ROW_BLOCK`] rows. A
/// block stores entry `(first + r, p)` at `p * count + r`, so a rotation on
/// columns `(p, p+1)` touches two contiguous strips.
struct RowBlocks<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> RowBlocks<T> {
    fn build(n: usize, init: impl Fn(usize, usize) -> T + Sync, work: impl Fn(&mut [T], usize) + Sync) -> Self {
        let mut data = vec![T::default(); n * n];
        par::for_each_chunk_mut(&mut data, ROW_BLOCK * n.max(1), |blk, chunk| {
            let first = blk * ROW_BLOCK;
            let count = chunk.len() / n;
            for p in 0..n {
                for r in 0..count {
                    chunk[p * count + r] = init(first + r, p);
                }
            }
            work(chunk, count);
        });
        Self { n, data }
    }

    fn get(&self, i: usize, p: usize) -> T {
        let first = i / ROW_BLOCK * ROW_BLOCK;
        let count = ROW_BLOCK.min(self.n - first);
        self.data[first * self.n + p * count + (i - first)]
    }
}

/// Right-multiplies every row of a block by `G†` on columns `(p, p+1)`.
#[inline]
fn rotate_block<T: Scalar>(chunk: &mut [T], count: usize, r: &Rotation<T>) {
    let (a, b) = chunk[r.p * count..(r.p + 2) * count].split_at_mut(count);
    let sc = r.s.conj();
    for (u, v) in a.iter_mut().zip(b.iter_mut()) {
        let (x, y) = (*u, *v);
        *u = x.scale(r.c) + sc * y;
        *v = y.scale(r.c) - r.s * x;
    }
}

fn assemble_vectors<T: Scalar>(
    n: usize,
    band_rots: &[Rotation<T>],
    phases: &[T],
    ql_rots: &[(usize, f64, f64)],
    order: &[usize],
) -> CMatrix {
    // W = Y D Z
    let w = RowBlocks::build(
        n,
        |i, p| if i == p { T::from_re(1.0) } else { T::default() },
        |chunk, count| {
            for rot in band_rots {
                rotate_block(chunk, count, rot);
            }
            for (p, ph) in phases.iter().enumerate() {
                for v in &mut chunk[p * count..(p + 1) * count] {
                    *v = *v * *ph;
                }
            }
            for &(i, c, s) in ql_rots {
                let (a, b) = chunk[i * count..(i + 2) * count].split_at_mut(count);
                for (zi, zj) in a.iter_mut().zip(b.iter_mut()) {
                    let f = *zj;
                    *zj = zi.scale(s) + f.scale(c);
                    *zi = zi.scale(c) - f.scale(s);
                }
            }
        },
    );
    let mut v = CMatrix::from_fn(n, n, |i, j| w.get(i, order[j]).to_c64());
    for j in 0..n {
        normalize_phase(v.col_mut(j));
    }
    v
}

/// Rotates a vector so its largest-magnitude component (first on ties) is real positive.
pub(crate) fn normalize_phase(v: &mut [C64]) {
    let mut best = 0;
    let mut best_abs = -1.0;
    for (i, x) in v.iter().enumerate() {
        let a = x.norm();
        if a > best_abs * (1.0 + 1e-12) {
            best = i;
            best_abs = a;
        }
    }
    if best_abs <= 0.0 {
        return;
    }
    let ph = v[best].conj() / best_abs;
    for x in v.iter_mut() {
        *x *= ph;
    }
    v[best] = C64::new(v[best].norm(), 0.0);
}

fn eigh_generic<T: Scalar>(m: &BandedHermitian, get: impl Fn(usize, usize) -> T) -> Result<EigenDecomposition> {
    let n = m.dim();
    let (diag, off, phases, band_rots) = reduce_to_tridiagonal(n, m.half_bandwidth(), get);
    let (values, ql_rots) = tridiagonal_ql(diag, &off)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let vectors = assemble_vectors(n, &band_rots, &phases, &ql_rots, &order);
    let values: Vec<f64> = order.iter().map(|&k| values[k]).collect();
    let residuals = par::map_range(n, |j| {
        let v = vectors.col(j);
        let mv = m.matvec(v);
        linalg::norm(&mv.iter().zip(v).map(|(a, b)| a - b * values[j]).collect::<Vec<_>>())
    });
    let residual_norm = residuals.into_iter().fold(0.0, f64::max);
    Ok(EigenDecomposition { values, vectors, residual_norm })
}

/// Full eigendecomposition of a Hermitian band matrix.
pub fn eigh(m: &BandedHermitian) -> Result<EigenDecomposition> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    if m.dim() > MAX_DIM {
        return Err(Error::Dimension(format!("dimension {} exceeds eigh maximum {MAX_DIM}", m.dim())));
    }
    if m.dim() == 0 {
        return Ok(EigenDecomposition { values: vec![], vectors: CMatrix::zeros(0, 0), residual_norm: 0.0 });
    }
    if m.is_real() {
        eigh_generic::<f64>(m, |i, j| m.get(i, j).re)
    } else {
        eigh_generic::<C64>(m, |i, j| m.get(i, j))
    }
}

/// Eigendecomposition of a dense Hermitian matrix. The input must be
/// Hermitian to within `1e-12 · max|M|`.
pub fn eigh_dense(m: &CMatrix) -> Result<EigenDecomposition> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let scale = m.as_slice().iter().map(|v| v.norm()).fold(0.0, f64::max).max(1.0);
    let banded = BandedHermitian::from_dense(m, 1e-12 * scale)?;
    eigh(&banded)
}

// ---------------------------------------------------------------------------
// unitary eigenproblem

/// Folds `−arg(μ)/T` into `[0, 2π/T)`.
pub fn quasienergy(mu: C64, period: f64) -> f64 {
    let window = 2.0 * PI / period;
    let mut e = (-mu.arg()).rem_euclid(2.0 * PI) / period;
    if e >= window {
        e -= window;
    }
    e
}

/// Folds an energy into the quasienergy window `[0, 2π/T)`.
pub fn fold_energy(e: f64, period: f64) -> f64 {
    let window = 2.0 * PI / period;
    let mut x = e.rem_euclid(window);
    if x >= window {
        x -= window;
    }
    x
}

fn hessenberg(h: &mut CMatrix, q: &mut CMatrix) {
    let n = h.rows();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = linalg::norm(&x);
        if xnorm == 0.0 || x[1..].iter().all(|v| *v == C64::new(0.0, 0.0)) {
            continue;
        }
        let phase = if x[0].norm() == 0.0 { C64::new(1.0, 0.0) } else { x[0] / x[0].norm() };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vn = linalg::norm(&v);
        for e in &mut v {
            *e /= vn;
        }
        let off = k + 1;
        // left: rows off.. of columns k..
        let rows = h.rows();
        par::for_each_chunk_mut(&mut h.as_mut_slice()[k * rows..], rows, |_, col| {
            let seg = &mut col[off..];
            let s: C64 = v.iter().zip(seg.iter()).map(|(a, b)| a.conj() * b).sum();
            for (x, a) in seg.iter_mut().zip(&v) {
                *x -= 2.0 * a * s;
            }
        });
        apply_reflector_right(h, &v, off);
        apply_reflector_right(q, &v, off);
        h[(off, k)] = alpha;
        for i in off + 1..n {
            h[(i, k)] = C64::new(0.0, 0.0);
        }
    }
}

/// `M ← M (I − 2 v v†)` on columns `off..`.
fn apply_reflector_right(m: &mut CMatrix, v: &[C64], off: usize) {
    let rows = m.rows();
    let mut w = vec![C64::new(0.0, 0.0); rows];
    for (i, &vi) in v.iter().enumerate() {
        for (wr, &x) in w.iter_mut().zip(m.col(off + i)) {
            *wr += x * vi;
        }
    }
    par::for_each_chunk_mut(&mut m.as_mut_slice()[off * rows..], rows, |i, col| {
        let c = 2.0 * v[i].conj();
        for (x, wr) in col.iter_mut().zip(&w) {
            *x -= wr * c;
        }
    });
}

fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    // eigenvalue of [[a, b], [c, d]] closest to d
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr * 0.25 - det).sqrt();
    let l1 = tr * 0.5 + disc;
    let l2 = tr * 0.5 - disc;
    if (l1 - d).norm() < (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Eigendecomposition of a unitary matrix with the default unitarity tolerance.
pub fn eig_unitary(u: &CMatrix, period: f64) -> Result<UnitaryEigen> {
    eig_unitary_with_tol(u, period, UNITARITY_TOL)
}

pub fn eig_unitary_with_tol(u: &CMatrix, period: f64, tol: f64) -> Result<UnitaryEigen> {
    if !u.is_square() {
        return Err(Error::Dimension(format!("{}x{} is not square", u.rows(), u.cols())));
    }
    if !u.is_finite() {
        return Err(Error::NonFinite);
    }
    if !(period > 0.0) {
        return Err(Error::InvalidParams(format!("period must be positive, got {period}")));
    }
    let defect = u.unitarity_defect();
    if defect > tol {
        return Err(Error::PropagationAccuracy { defect, tolerance: tol });
    }
    let n = u.rows();
    let mut h = u.clone();
    let mut q = CMatrix::identity(n);
    hessenberg(&mut h, &mut q);

    let mut rots: Vec<Rotation<C64>> = Vec::new();
    let eps = f64::EPSILON;
    let mut hi = n.saturating_sub(1);
    let mut iter = 0usize;
    let mut total = 0usize;
    let mut window: Vec<Rotation<C64>> = Vec::new();
    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let s = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            if h[(l, l - 1)].norm() <= eps * s {
                h[(l, l - 1)] = C64::new(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if iter > 200 || total > 100 * n.max(10) {
            return Err(Error::NoConvergence(format!("unitary QR stalled at index {hi}")));
        }
        let mu = if iter.is_multiple_of(11) {
            // exceptional shift
            h[(hi, hi)] + C64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        for i in l..=hi {
            h[(i, i)] -= mu;
        }
        window.clear();
        for k in l..hi {
            let r = Rotation::zeroing(k, h[(k, k)], h[(k + 1, k)]);
            for j in k..=hi {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = x * r.c + r.s * y;
                h[(k + 1, j)] = y * r.c - r.s.conj() * x;
            }
            h[(k + 1, k)] = C64::new(0.0, 0.0);
            window.push(r);
        }
        for r in &window {
            let k = r.p;
            for i in l..=(k + 2).min(hi) {
                let x = h[(i, k)];
                let y = h[(i, k + 1)];
                h[(i, k)] = x * r.c + r.s.conj() * y;
                h[(i, k + 1)] = y * r.c - r.s * x;
            }
        }
        rots.extend_from_slice(&window);
        for i in l..=hi {
            h[(i, i)] += mu;
        }
    }

    // Schur vectors: Z = Q G_1† G_2† ...
    let z = RowBlocks::build(
        n,
        |i, j| q[(i, j)],
        |chunk, count| {
            for rot in &rots {
                rotate_block(chunk, count, rot);
            }
        },
    );

    let mus: Vec<C64> = (0..n).map(|j| h[(j, j)]).collect();
    let quasi: Vec<f64> = mus.iter().map(|&m| quasienergy(m, period)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| quasi[a].total_cmp(&quasi[b]).then(a.cmp(&b)));
    let mut vectors = CMatrix::from_fn(n, n, |i, j| z.get(i, order[j]));
    for j in 0..n {
        normalize_phase(vectors.col_mut(j));
    }
    let modulus_defect = mus.iter().map(|m| (m.norm() - 1.0).abs()).fold(0.0, f64::max);
    Ok(UnitaryEigen {
        eigenvalues: order.iter().map(|&k| mus[k]).collect(),
        quasienergies: order.iter().map(|&k| quasi[k]).collect(),
        vectors,
        period,
        unitarity_defect: defect,
        modulus_defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    /// xorshift so tests do not depend on an RNG crate
    struct Lcg(u64);
    impl Lcg {
        fn next(&mut self) -> f64 {
            self.0 ^= self.0 << 13;
            self.0 ^= self.0 >> 7;
            self.0 ^= self.0 << 17;
            (self.0 >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        }
    }

    fn random_hermitian(n: usize, b: usize, complex: bool, seed: u64) -> BandedHermitian {
        let mut rng = Lcg(seed);
        let mut m = BandedHermitian::zeros(n, b);
        for i in 0..n {
            m.add_diagonal(i, rng.next());
            for d in 1..=b {
                if i + d < n {
                    let im = if complex { rng.next() } else { 0.0 };
                    m.add_off_diagonal(i, i + d, c(rng.next(), im));
                }
            }
        }
        m
    }

    #[test]
    fn sigma_x() {
        let mut m = BandedHermitian::zeros(2, 1);
        m.add_off_diagonal(0, 1, c(1.0, 0.0));
        let e = eigh(&m).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-15 && (e.values[1] - 1.0).abs() < 1e-15);
        let v0 = e.vector(0);
        assert!((v0[0] + v0[1]).norm() < 1e-15);
        assert!((v0[0].norm() - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn diagonal_sorting() {
        let e = eigh(&BandedHermitian::from_diagonal(vec![3.0, 1.0, 2.0])).unwrap();
        assert_eq!(e.values, vec![1.0, 2.0, 3.0]);
        assert_eq!(e.vector(0)[1], c(1.0, 0.0));
        assert_eq!(e.vector(1)[2], c(1.0, 0.0));
        assert_eq!(e.vector(2)[0], c(1.0, 0.0));
    }

    #[test]
    fn random_band_real_and_complex() {
        for (b, complex) in [(1, false), (2, true), (3, false), (3, true), (6, true)] {
            let m = random_hermitian(120, b, complex, 7 + b as u64);
            let e = eigh(&m).unwrap();
            let norm = m.norm_inf();
            assert!(e.residual_norm <= 1e-12 * norm, "b={b}: residual {}", e.residual_norm);
            assert!(e.orthonormality_defect() < 1e-12, "b={b}");
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn dense_random_200() {
        let mut rng = Lcg(99);
        let n = 200;
        let mut a = CMatrix::zeros(n, n);
        for j in 0..n {
            for i in 0..=j {
                let v = if i == j { c(rng.next(), 0.0) } else { c(rng.next(), rng.next()) };
                a[(i, j)] = v;
                a[(j, i)] = v.conj();
            }
        }
        let e = eigh_dense(&a).unwrap();
        let banded = BandedHermitian::from_dense(&a, 0.0).unwrap();
        assert!(e.residual_norm <= 1e-10 * banded.norm_inf());
        assert!(e.orthonormality_defect() <= 1e-10);
    }

    #[test]
    fn rejects_non_finite() {
        let m = BandedHermitian::from_diagonal(vec![1.0, f64::NAN]);
        assert!(matches!(eigh(&m), Err(Error::NonFinite)));
    }

    #[test]
    fn degenerate_spectrum() {
        let m = BandedHermitian::from_diagonal(vec![1.0; 6]);
        let e = eigh(&m).unwrap();
        assert!(e.values.iter().all(|v| *v == 1.0));
        assert!(e.orthonormality_defect() < 1e-15);
    }

    #[test]
    fn phase_convention() {
        let m = random_hermitian(40, 2, true, 3);
        let e = eigh(&m).unwrap();
        for j in 0..e.len() {
            let v = e.vector(j);
            let (imax, _) =
                v.iter().enumerate().fold((0, -1.0), |acc, (i, x)| if x.norm() > acc.1 * (1.0 + 1e-12) { (i, x.norm()) } else { acc });
            assert!(v[imax].im == 0.0 && v[imax].re > 0.0);
        }
    }

    #[test]
    fn unitary_identity_and_single_phase() {
        let e = eig_unitary(&CMatrix::identity(5), 2.0 * PI).unwrap();
        assert!(e.quasienergies.iter().all(|q| *q == 0.0));

        let theta = 0.3;
        let d: Vec<C64> = (0..4).map(|_| C64::from_polar(1.0, -theta)).collect();
        let e = eig_unitary(&CMatrix::from_diagonal(&d), 2.0 * PI).unwrap();
        for q in &e.quasienergies {
            assert!((q - 0.3 / (2.0 * PI)).abs() < 1e-14);
        }
        assert!((e.quasienergies[0] - 0.047_746_482_927_568_6).abs() < 1e-14);
    }

    #[test]
    fn unitary_rejects_non_unitary() {
        let m = CMatrix::identity(3).scale(c(1.1, 0.0));
        assert!(matches!(eig_unitary(&m, 1.0), Err(Error::PropagationAccuracy { .. })));
    }

    #[test]
    fn unitary_from_hermitian_exponential() {
        // U = V exp(-i E T) V†; quasienergies must be the folded eigenvalues
        let m = random_hermitian(50, 3, true, 11);
        let eh = eigh(&m).unwrap();
        let period = 2.0 * PI / 1.3;
        let phases: Vec<C64> = eh.values.iter().map(|e| C64::from_polar(1.0, -e * period)).collect();
        let u = eh.vectors.matmul(&CMatrix::from_diagonal(&phases)).matmul(&eh.vectors.adjoint());
        let eu = eig_unitary(&u, period).unwrap();
        let mut folded: Vec<f64> = eh.values.iter().map(|e| fold_energy(*e, period)).collect();
        folded.sort_by(f64::total_cmp);
        for (a, b) in folded.iter().zip(&eu.quasienergies) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
        assert!(eu.vectors.unitarity_defect() < 1e-12);
        // eigenvector check
        for j in 0..eu.vectors.cols() {
            let v = eu.vectors.col(j);
            let uv = u.matvec(v);
            let lam = eu.eigenvalues[j];
            let r = linalg::norm(&uv.iter().zip(v).map(|(a, b)| a - b * lam).collect::<Vec<_>>());
            assert!(r < 1e-10, "residual {r}");
        }
    }

    #[test]
    fn quasienergy_folding_is_idempotent() {
        let t = 2.0 * PI;
        for e in [-3.7, -0.1, 0.0, 0.4, 0.999999, 12.3] {
            let f = fold_energy(e, t);
            assert!((0.0..1.0).contains(&f));
            assert_eq!(fold_energy(f, t), f);
        }
    }
}
