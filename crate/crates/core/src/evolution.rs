//! Split-step propagation, one-period propagators, Floquet modes and the
//! rotating-frame map.
//!
//! Each Hamiltonian is split into its diagonal part `D` (oscillator and
//! qubit energies) and a coupling part that only connects neighbouring
//! oscillator levels. The coupling part is a sum over bonds `(n, n+1)`; bonds
//! of equal parity commute, so one step is
//!
//! ```text
//! D/2 · E/2 · O · E/2 · D/2
//! ```
//!
//! with `E`/`O` the even/odd bond products. Every bond factor is the exact
//! exponential of a 4x4 Hermitian block, so a step is unitary to rounding.
//! The couplings are frozen at the step midpoint.
//!
//! On a bond the block is `[[0, C†], [C, 0]]`, with `C` mapping level `n`
//! to level `n+1`. `C = √(n+1) C₀(t)` for every model, so the 2x2 spectral
//! data of `C₀†C₀` and `C₀C₀†` is computed once per step and rescaled per
//! bond.

use std::f64::consts::PI;

use crate::eigensolve::{self, UnitaryEigen};
use crate::error::{Error, Result};
use crate::hamiltonians::ModelParams;
use crate::linalg::{self, CMatrix};
use crate::operators::FockTruncation;
use crate::par;
use crate::C64;

/// Default integration step.
pub const DEFAULT_STEP: f64 = 0.005;

/// Largest tolerated `max |U†U − I|` of a one-period propagator.
pub const UNITARITY_TOL: f64 = 1e-8;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Which Hamiltonian drives the evolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Model {
    /// Lab-frame model with counter-rotating coupling and `f cos(ωt)(a + a†)` drive.
    Full,
    /// Rotating-wave model, still time dependent through `e^{±iωt}`.
    Rwa,
    /// Stationary rotating-frame model.
    Rotating,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Full => "full",
            Model::Rwa => "rwa",
            Model::Rotating => "rotating",
        }
    }
}

impl std::str::FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Model::Full),
            "rwa" => Ok(Model::Rwa),
            "rotating" => Ok(Model::Rotating),
            _ => Err(Error::Config(format!("unknown model '{s}' (expected full, rwa or rotating)"))),
        }
    }
}

/// Amplitudes over the joint basis, flat index `2n + s`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: Vec<C64>,
}

impl StateVector {
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        if amps.len() < 4 || !amps.len().is_multiple_of(2) {
            return Err(Error::Dimension(format!("state length {} is not 2N with N >= 2", amps.len())));
        }
        Ok(Self { amps })
    }

    pub fn basis(trunc: FockTruncation, n: usize, s: usize) -> Result<Self> {
        if n >= trunc.levels() || s > 1 {
            return Err(Error::Dimension(format!("basis state ({n}, {s}) outside N = {}", trunc.levels())));
        }
        let mut amps = vec![ZERO; trunc.joint_dim()];
        amps[2 * n + s] = C64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    /// Product of an oscillator state with the qubit basis state `s`.
    pub fn product(osc: &[C64], s: usize) -> Result<Self> {
        if s > 1 {
            return Err(Error::Dimension(format!("qubit index {s}")));
        }
        let mut amps = vec![ZERO; 2 * osc.len()];
        for (n, &c) in osc.iter().enumerate() {
            amps[2 * n + s] = c;
        }
        Self::new(amps)
    }

    pub fn levels(&self) -> usize {
        self.amps.len() / 2
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn amp(&self, n: usize, s: usize) -> C64 {
        self.amps[2 * n + s]
    }

    pub fn norm(&self) -> f64 {
        linalg::norm(&self.amps)
    }

    /// `|‖ψ‖ − 1|`.
    pub fn norm_drift(&self) -> f64 {
        (self.norm() - 1.0).abs()
    }

    pub fn normalized(mut self) -> Result<Self> {
        let nrm = self.norm();
        if nrm == 0.0 {
            return Err(Error::ZeroVector);
        }
        for a in &mut self.amps {
            *a /= nrm;
        }
        Ok(self)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        linalg::dot(&self.amps, &other.amps)
    }
}

impl std::ops::Deref for StateVector {
    type Target = [C64];
    fn deref(&self) -> &[C64] {
        &self.amps
    }
}

// ---------------------------------------------------------------------------
// bond kernels

type M2 = [[C64; 2]; 2];

fn m2_mul(a: &M2, b: &M2) -> M2 {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn m2_adjoint(a: &M2) -> M2 {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

/// Eigenvalues `(λ+, λ−)` and projectors of a 2x2 Hermitian matrix.
fn hermitian2(m: &M2) -> ((f64, M2), (f64, M2)) {
    let a = m[0][0].re;
    let d = m[1][1].re;
    let b = m[0][1];
    let mean = 0.5 * (a + d);
    let rad = (0.5 * (a - d)).hypot(b.norm());
    let theta = 0.5 * (2.0 * b.norm()).atan2(a - d);
    let e = if b.norm() == 0.0 { C64::new(1.0, 0.0) } else { (b / b.norm()).conj() };
    let (c, s) = (theta.cos(), theta.sin());
    let vp = [C64::new(c, 0.0), e * s];
    let vm = [C64::new(-s, 0.0), e * c];
    let proj = |v: [C64; 2]| -> M2 { [[v[0] * v[0].conj(), v[0] * v[1].conj()], [v[1] * v[0].conj(), v[1] * v[1].conj()]] };
    ((mean + rad, proj(vp)), (mean - rad, proj(vm)))
}

/// `sin(x)/x`.
fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// n-independent factors of the bond exponentials for one coupling `C₀`.
struct BondFamily {
    lam: [f64; 2],
    /// spectral projectors of `C₀†C₀`
    p: [M2; 2],
    /// spectral projectors of `C₀C₀†`
    q: [M2; 2],
    /// `C₀† Q±`
    cdq: [M2; 2],
    /// `C₀ P±`
    cp: [M2; 2],
}

impl BondFamily {
    fn new(c0: &M2) -> Self {
        let cd = m2_adjoint(c0);
        let ((l1, p1), (l2, p2)) = hermitian2(&m2_mul(&cd, c0));
        // C₀C₀† has the same spectrum; its projectors are C₀ P C₀† / λ,
        // but the direct decomposition stays well defined when λ = 0.
        let ((_, q1), (_, q2)) = hermitian2(&m2_mul(c0, &cd));
        Self {
            lam: [l1.max(0.0), l2.max(0.0)],
            p: [p1, p2],
            q: [q1, q2],
            cdq: [m2_mul(&cd, &q1), m2_mul(&cd, &q2)],
            cp: [m2_mul(c0, &p1), m2_mul(c0, &p2)],
        }
    }

    /// `exp(−iτ [[0, C†], [C, 0]])` for `C = √(n+1) C₀`, row-major 4x4 over
    /// `((n,0), (n,1), (n+1,0), (n+1,1))`.
    fn block(&self, n: usize, tau: f64) -> [C64; 16] {
        let r = ((n + 1) as f64).sqrt();
        let mut cs = [0.0; 2];
        let mut sn = [0.0; 2];
        for k in 0..2 {
            let x = tau * r * self.lam[k].sqrt();
            cs[k] = x.cos();
            sn[k] = sinc(x);
        }
        let mi = C64::new(0.0, -tau * r);
        let mut out = [ZERO; 16];
        for i in 0..2 {
            for j in 0..2 {
                out[i * 4 + j] = self.p[0][i][j] * cs[0] + self.p[1][i][j] * cs[1];
                out[(i + 2) * 4 + j + 2] = self.q[0][i][j] * cs[0] + self.q[1][i][j] * cs[1];
                out[i * 4 + j + 2] = mi * (self.cdq[0][i][j] * sn[0] + self.cdq[1][i][j] * sn[1]);
                out[(i + 2) * 4 + j] = mi * (self.cp[0][i][j] * sn[0] + self.cp[1][i][j] * sn[1]);
            }
        }
        out
    }
}

#[inline]
fn apply_block(b: &[C64; 16], x: &mut [C64]) {
    let v = [x[0], x[1], x[2], x[3]];
    for (i, out) in x.iter_mut().take(4).enumerate() {
        let row = &b[i * 4..i * 4 + 4];
        *out = row[0] * v[0] + row[1] * v[1] + row[2] * v[2] + row[3] * v[3];
    }
}

/// Per-model diagonal energies and coupling matrix `C₀(t)`.
fn diagonal_energies(params: &ModelParams, model: Model) -> Vec<f64> {
    let (w0, wq) = match model {
        Model::Full | Model::Rwa => (params.omega0, params.omega_q),
        Model::Rotating => (params.detuning_osc(), params.detuning_qubit()),
    };
    (0..params.dim()).map(|k| w0 * (k / 2) as f64 + 0.5 * wq * if k % 2 == 1 { 1.0 } else { -1.0 }).collect()
}

fn coupling_c0(params: &ModelParams, model: Model, t: f64) -> M2 {
    let gc = C64::new(params.coupling(), 0.0);
    match model {
        Model::Full => {
            let d = C64::new(params.f * (params.omega * t).cos(), 0.0);
            [[d, gc], [gc, d]]
        }
        Model::Rwa => {
            let d = C64::from_polar(0.5 * params.f, -params.omega * t);
            [[d, gc], [ZERO, d]]
        }
        Model::Rotating => {
            let d = C64::new(0.5 * params.f, 0.0);
            [[d, gc], [ZERO, d]]
        }
    }
}

/// `⟨ψ|H(t)|ψ⟩` for the chosen model, evaluated from the bond structure.
pub fn energy_expectation(params: &ModelParams, model: Model, t: f64, psi: &[C64]) -> f64 {
    let diag = diagonal_energies(params, model);
    let c0 = coupling_c0(params, model, t);
    let mut e: f64 = psi.iter().zip(&diag).map(|(a, d)| a.norm_sqr() * d).sum();
    let levels = psi.len() / 2;
    for n in 0..levels.saturating_sub(1) {
        let r = ((n + 1) as f64).sqrt();
        let lo = [psi[2 * n], psi[2 * n + 1]];
        let hi = [psi[2 * n + 2], psi[2 * n + 3]];
        let mut acc = ZERO;
        for sp in 0..2 {
            acc += hi[sp].conj() * (c0[sp][0] * lo[0] + c0[sp][1] * lo[1]);
        }
        e += 2.0 * r * acc.re;
    }
    e
}

/// Precomputed data for steps of one fixed size.
struct Stepper {
    params: ModelParams,
    model: Model,
    h: f64,
    half_phase: Vec<C64>,
    levels: usize,
    /// stationary model: blocks never change
    frozen: Option<(Vec<[C64; 16]>, Vec<[C64; 16]>)>,
}

impl Stepper {
    fn new(params: &ModelParams, model: Model, h: f64) -> Self {
        let half_phase = diagonal_energies(params, model).iter().map(|e| C64::from_polar(1.0, -0.5 * h * e)).collect();
        let mut s = Self { params: *params, model, h, half_phase, levels: params.levels(), frozen: None };
        if model == Model::Rotating {
            s.frozen = Some(s.blocks(0.0));
        }
        s
    }

    /// (even bonds with τ = h/2, odd bonds with τ = h) at midpoint `tm`.
    fn blocks(&self, tm: f64) -> (Vec<[C64; 16]>, Vec<[C64; 16]>) {
        let fam = BondFamily::new(&coupling_c0(&self.params, self.model, tm));
        let bonds = self.levels - 1;
        let even = (0..bonds).step_by(2).map(|n| fam.block(n, 0.5 * self.h)).collect();
        let odd = (1..bonds).step_by(2).map(|n| fam.block(n, self.h)).collect();
        (even, odd)
    }

    fn apply(&self, x: &mut [C64], even: &[[C64; 16]], odd: &[[C64; 16]]) {
        for (a, p) in x.iter_mut().zip(&self.half_phase) {
            *a *= p;
        }
        for (k, b) in even.iter().enumerate() {
            apply_block(b, &mut x[4 * k..4 * k + 4]);
        }
        for (k, b) in odd.iter().enumerate() {
            apply_block(b, &mut x[4 * k + 2..4 * k + 6]);
        }
        for (k, b) in even.iter().enumerate() {
            apply_block(b, &mut x[4 * k..4 * k + 4]);
        }
        for (a, p) in x.iter_mut().zip(&self.half_phase) {
            *a *= p;
        }
    }

    fn step(&self, x: &mut [C64], t: f64) {
        match &self.frozen {
            Some((e, o)) => self.apply(x, e, o),
            None => {
                let (e, o) = self.blocks(t + 0.5 * self.h);
                self.apply(x, &e, &o);
            }
        }
    }

    /// One step applied to every column of `m`.
    fn step_columns(&self, m: &mut CMatrix, t: f64) {
        let rows = m.rows();
        let owned;
        let (e, o) = match &self.frozen {
            Some((e, o)) => (e, o),
            None => {
                owned = self.blocks(t + 0.5 * self.h);
                (&owned.0, &owned.1)
            }
        };
        par::for_each_chunk_mut(m.as_mut_slice(), rows, |_, col| self.apply(col, e, o));
    }
}

/// Equal steps covering `[t0, t1]` with size at most `dt`.
fn step_grid(t0: f64, t1: f64, dt: f64) -> Result<(usize, f64)> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidParams(format!("time step must be positive, got {dt}")));
    }
    if !(t1 >= t0) || !t0.is_finite() || !t1.is_finite() {
        return Err(Error::InvalidParams(format!("bad interval [{t0}, {t1}]")));
    }
    let span = t1 - t0;
    if span == 0.0 {
        return Ok((0, dt));
    }
    let m = ((span / dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    Ok((m, span / m as f64))
}

fn check_dims(params: &ModelParams, psi: &[C64]) -> Result<()> {
    if psi.len() != params.dim() {
        return Err(Error::Dimension(format!("state has {} amplitudes, model needs {}", psi.len(), params.dim())));
    }
    Ok(())
}

/// One split step of size `dt` starting at time `t`.
pub fn trotter_step(psi: &StateVector, params: &ModelParams, model: Model, t: f64, dt: f64) -> Result<StateVector> {
    params.validate()?;
    check_dims(params, psi)?;
    if !(dt > 0.0) {
        return Err(Error::InvalidParams(format!("time step must be positive, got {dt}")));
    }
    let mut out = psi.clone();
    Stepper::new(params, model, dt).step(out.amplitudes_mut(), t);
    Ok(out)
}

/// States captured during [`propagate`].
#[derive(Clone, Debug)]
pub struct Trajectory {
    /// Step-boundary times at which the snapshots were taken.
    pub times: Vec<f64>,
    pub snapshots: Vec<StateVector>,
    pub final_state: StateVector,
    pub steps: usize,
    /// Actual step size, `≤ dt`, chosen so the steps tile the interval.
    pub step: f64,
    /// Largest `|‖ψ‖ − 1|` seen at the snapshots and the final state.
    pub norm_drift: f64,
}

/// Propagates `psi0` from `t0` to `t1`. Snapshots are taken at the step
/// boundary nearest to each requested time.
pub fn propagate(
    psi0: &StateVector,
    params: &ModelParams,
    model: Model,
    t0: f64,
    t1: f64,
    dt: f64,
    snapshot_times: &[f64],
) -> Result<Trajectory> {
    params.validate()?;
    check_dims(params, psi0)?;
    let (m, h) = step_grid(t0, t1, dt)?;
    let mut marks: Vec<(usize, usize)> = Vec::with_capacity(snapshot_times.len());
    for (i, &ts) in snapshot_times.iter().enumerate() {
        if !(ts >= t0 - 1e-12 && ts <= t1 + 1e-12) {
            return Err(Error::InvalidParams(format!("snapshot time {ts} outside [{t0}, {t1}]")));
        }
        let k = if m == 0 { 0 } else { (((ts - t0) / h).round() as usize).min(m) };
        marks.push((k, i));
    }
    marks.sort();
    let stepper = Stepper::new(params, model, h);
    let mut x = psi0.clone();
    let mut snaps: Vec<Option<(f64, StateVector)>> = vec![None; snapshot_times.len()];
    let mut next = 0;
    for k in 0..=m {
        while next < marks.len() && marks[next].0 == k {
            snaps[marks[next].1] = Some((t0 + k as f64 * h, x.clone()));
            next += 1;
        }
        if k < m {
            stepper.step(x.amplitudes_mut(), t0 + k as f64 * h);
        }
    }
    let (times, snapshots): (Vec<f64>, Vec<StateVector>) = snaps.into_iter().map(|s| s.expect("all marks visited")).unzip();
    let norm_drift = snapshots.iter().chain(std::iter::once(&x)).map(|s| s.norm_drift()).fold(0.0, f64::max);
    Ok(Trajectory { times, snapshots, final_state: x, steps: m, step: h, norm_drift })
}

/// Propagates `psi0` and calls `observe(t, ψ)` at `t0` and after every
/// `every` steps (and at `t1`). Returns the final state.
#[allow(clippy::too_many_arguments)]
pub fn propagate_observed(
    psi0: &StateVector,
    params: &ModelParams,
    model: Model,
    t0: f64,
    t1: f64,
    dt: f64,
    every: usize,
    mut observe: impl FnMut(f64, &StateVector),
) -> Result<StateVector> {
    params.validate()?;
    check_dims(params, psi0)?;
    let (m, h) = step_grid(t0, t1, dt)?;
    let every = every.max(1);
    let stepper = Stepper::new(params, model, h);
    let mut x = psi0.clone();
    observe(t0, &x);
    for k in 0..m {
        stepper.step(x.amplitudes_mut(), t0 + k as f64 * h);
        if (k + 1) % every == 0 || k + 1 == m {
            observe(t0 + (k + 1) as f64 * h, &x);
        }
    }
    Ok(x)
}

/// Propagates every column of `m` over `[t0, t1]`; `observe(t, m)` is called
/// at every step boundary, including `t0` but not `t1`.
pub fn propagate_columns(
    m: &mut CMatrix,
    params: &ModelParams,
    model: Model,
    t0: f64,
    t1: f64,
    dt: f64,
    mut observe: impl FnMut(f64, &CMatrix),
) -> Result<usize> {
    params.validate()?;
    if m.rows() != params.dim() {
        return Err(Error::Dimension(format!("matrix has {} rows, model needs {}", m.rows(), params.dim())));
    }
    let (steps, h) = step_grid(t0, t1, dt)?;
    let stepper = Stepper::new(params, model, h);
    for k in 0..steps {
        let t = t0 + k as f64 * h;
        observe(t, m);
        stepper.step_columns(m, t);
    }
    Ok(steps)
}

/// `U(T)` over one drive period with its unitarity defect.
#[derive(Clone, Debug)]
pub struct Propagator {
    pub u: CMatrix,
    pub period: f64,
    pub steps: usize,
    pub unitarity_defect: f64,
}

/// One-period propagator; fails when `max |U†U − I|` exceeds [`UNITARITY_TOL`].
pub fn one_period_propagator(params: &ModelParams, model: Model, dt: f64) -> Result<Propagator> {
    let period = params.period();
    let mut u = CMatrix::identity(params.dim());
    let steps = propagate_columns(&mut u, params, model, 0.0, period, dt, |_, _| {})?;
    if !u.is_finite() {
        return Err(Error::NonFinite);
    }
    let defect = u.unitarity_defect();
    if defect > UNITARITY_TOL {
        return Err(Error::PropagationAccuracy { defect, tolerance: UNITARITY_TOL });
    }
    Ok(Propagator { u, period, steps, unitarity_defect: defect })
}

/// Quasienergies and modes of a periodically driven model.
#[derive(Clone, Debug)]
pub struct FloquetSolution {
    /// `ε_j ∈ [0, 2π/T)`, ascending.
    pub quasienergies: Vec<f64>,
    /// Column `j` is the mode `Φ_j(0)` belonging to `quasienergies[j]`.
    pub modes: CMatrix,
    /// One-period average of `⟨H(t)⟩` for each mode.
    pub ordering_energy: Vec<f64>,
    /// Mode indices sorted by increasing `ordering_energy`.
    pub order: Vec<usize>,
    pub period: f64,
    pub unitarity_defect: f64,
}

impl FloquetSolution {
    pub fn len(&self) -> usize {
        self.quasienergies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quasienergies.is_empty()
    }

    pub fn mode(&self, j: usize) -> &[C64] {
        self.modes.col(j)
    }

    /// `k`-th mode in ordering-energy order.
    pub fn ordered_mode(&self, k: usize) -> &[C64] {
        self.modes.col(self.order[k])
    }
}

/// Floquet analysis of `model` over one period.
///
/// The ordering energy of each mode is the mean of `⟨H(t)⟩` over the step
/// boundaries `t_k = kT/M`, `k = 0..M-1`. For a periodic integrand this
/// equispaced rule converges faster than any power of the step.
pub fn floquet_modes(params: &ModelParams, model: Model, dt: f64) -> Result<FloquetSolution> {
    let prop = one_period_propagator(params, model, dt)?;
    let eig = eigensolve::eig_unitary_with_tol(&prop.u, prop.period, UNITARITY_TOL)?;
    let ordering_energy = ordering_energies(params, model, &eig, dt)?;
    let mut order: Vec<usize> = (0..ordering_energy.len()).collect();
    order.sort_by(|&a, &b| ordering_energy[a].total_cmp(&ordering_energy[b]).then(a.cmp(&b)));
    Ok(FloquetSolution {
        quasienergies: eig.quasienergies,
        modes: eig.vectors,
        ordering_energy,
        order,
        period: prop.period,
        unitarity_defect: prop.unitarity_defect,
    })
}

fn ordering_energies(params: &ModelParams, model: Model, eig: &UnitaryEigen, dt: f64) -> Result<Vec<f64>> {
    let n = eig.vectors.cols();
    let mut acc = vec![0.0; n];
    let mut samples = 0usize;
    let mut modes = eig.vectors.clone();
    propagate_columns(&mut modes, params, model, 0.0, eig.period, dt, |t, m| {
        let e = par::map_range(n, |j| energy_expectation(params, model, t, m.col(j)));
        for (a, v) in acc.iter_mut().zip(e) {
            *a += v;
        }
        samples += 1;
    })?;
    Ok(acc.into_iter().map(|a| a / samples.max(1) as f64).collect())
}

/// c-number dropped from the stationary rotating-frame Hamiltonian.
///
/// Transforming the rotating-wave model with `Â = ω(n̂ + σ+σ−)` gives the
/// stationary Hamiltonian plus `−ω/2`, because `σ+σ− = (1 + σz)/2`. Hence
/// `ψ_rwa(t) = e^{iωt/2} e^{−iÂt} ψ_rot(t)`, and the rotating-wave
/// quasienergies are the stationary eigenvalues shifted by this offset.
pub fn rotating_frame_offset(params: &ModelParams) -> f64 {
    -0.5 * params.omega
}

/// Lab frame to rotating frame: amplitude `(n, s)` times `e^{+iω(n+s)t}`.
pub fn rotating_frame_map(psi: &StateVector, t: f64, omega: f64) -> StateVector {
    frame_phase(psi, omega * t)
}

/// Rotating frame back to the lab frame.
pub fn inverse_rotating_frame_map(psi: &StateVector, t: f64, omega: f64) -> StateVector {
    frame_phase(psi, -omega * t)
}

fn frame_phase(psi: &StateVector, wt: f64) -> StateVector {
    let mut out = psi.clone();
    for (k, a) in out.amplitudes_mut().iter_mut().enumerate() {
        let exc = (k / 2 + k % 2) as f64;
        // reduce the phase first so large n·ωt stays accurate
        let ph = (exc * wt).rem_euclid(2.0 * PI);
        *a *= C64::from_polar(1.0, ph);
    }
    out
}

/// `U^k ψ` for each requested `k` (ascending order not required).
pub fn stroboscopic(u: &CMatrix, psi0: &StateVector, periods: &[usize]) -> Result<Vec<StateVector>> {
    if u.rows() != psi0.dim() || !u.is_square() {
        return Err(Error::Dimension(format!("propagator {}x{} vs state {}", u.rows(), u.cols(), psi0.dim())));
    }
    let mut targets: Vec<(usize, usize)> = periods.iter().copied().enumerate().map(|(i, k)| (k, i)).collect();
    targets.sort();
    let mut out: Vec<Option<StateVector>> = vec![None; periods.len()];
    let mut x = psi0.amplitudes().to_vec();
    let mut done = 0usize;
    for (k, i) in targets {
        while done < k {
            x = u.matvec(&x);
            done += 1;
        }
        out[i] = Some(StateVector::new(x.clone())?);
    }
    Ok(out.into_iter().map(|s| s.expect("filled")).collect())
}
