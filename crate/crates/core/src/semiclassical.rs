//! Semiclassical two-branch theory of the rotating-frame model.
//!
//! Treating the oscillator classically with `h0 = p²/2 + Δ0² x²/2` and
//! diagonalizing the remaining 2x2 spin problem gives two energy branches
//!
//! ```text
//! h = h0 ± sqrt(g² ω0² h0 / Δ0 + Δ_Ω² / 4)
//! ```
//!
//! together with the spin polarization on each branch, the energy-photon
//! number relation and the turning points of the driven orbit.
//!
//! The formulas need `Δ0 > 0` under the square roots, while several
//! parameter sets of interest have `ω0 < ω`. Everything here is evaluated
//! with `|Δ0|`; [`eigenstate_branch_point`] maps quantum eigenstates onto
//! the same convention.

use crate::error::{Error, Result};
use crate::hamiltonians::ModelParams;
use crate::observables::{mean_annihilation, mean_photon_number, EigenstateDiagnostics};
use crate::C64;

/// Selects the upper (`+`) or lower (`−`) branch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn both() -> [Branch; 2] {
        [Branch::Plus, Branch::Minus]
    }
}

#[derive(Clone, Debug)]
pub struct BranchSpec {
    pub branch: Branch,
    pub params: ModelParams,
}

impl BranchSpec {
    pub fn new(branch: Branch, params: &ModelParams) -> Self {
        Self { branch, params: *params }
    }
}

fn abs_detuning(p: &ModelParams) -> Result<f64> {
    let d = p.detuning_osc().abs();
    if d == 0.0 {
        return Err(Error::ResonanceSingularity);
    }
    Ok(d)
}

/// `h(h0)` on the chosen branch, without the drive term linear in `x`.
pub fn branch_energy(h0: f64, spec: &BranchSpec) -> Result<f64> {
    if !(h0 >= 0.0) {
        return Err(Error::Domain(format!("h0 must be non-negative, got {h0}")));
    }
    let p = &spec.params;
    let d = abs_detuning(p)?;
    let dq = p.detuning_qubit();
    Ok(h0 + spec.branch.sign() * (p.coupling().powi(2) * h0 / d + 0.25 * dq * dq).sqrt())
}

/// Distance between the two branches at `h0`.
pub fn branch_separation(h0: f64, params: &ModelParams) -> Result<f64> {
    let up = branch_energy(h0, &BranchSpec::new(Branch::Plus, params))?;
    let down = branch_energy(h0, &BranchSpec::new(Branch::Minus, params))?;
    Ok(up - down)
}

/// Spin polarization on a branch.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Polarization {
    pub value: f64,
    /// Set when `Δ_Ω = 0`, where the value is the `±0` limit.
    pub degenerate: bool,
}

/// `⟨σz⟩ = ±(1 + 4 g² ω0² ⟨n⟩ / Δ_Ω²)^{-1/2}`.
pub fn polarization(mean_n: f64, spec: &BranchSpec) -> Result<Polarization> {
    if !(mean_n >= 0.0) {
        return Err(Error::Domain(format!("mean photon number must be non-negative, got {mean_n}")));
    }
    let p = &spec.params;
    let dq = p.detuning_qubit();
    let s = spec.branch.sign();
    if dq == 0.0 {
        return Ok(Polarization { value: s * 0.0, degenerate: true });
    }
    let x = 4.0 * p.coupling().powi(2) * mean_n / (dq * dq);
    Ok(Polarization { value: s / (1.0 + x).sqrt(), degenerate: false })
}

/// `E(n) = |Δ0| n ± sqrt(g² ω0² n + Δ_Ω²/4)`.
pub fn energy_of_n(n: f64, spec: &BranchSpec) -> Result<f64> {
    let p = &spec.params;
    let d = abs_detuning(p)?;
    branch_energy(d * n, spec)
}

/// Non-negative photon numbers `n` with `E(n) = e` on the chosen branch,
/// ascending. Empty when there is none.
pub fn n_of_energy(e: f64, spec: &BranchSpec) -> Result<Vec<f64>> {
    let p = &spec.params;
    let d = abs_detuning(p)?;
    let g2 = p.coupling().powi(2);
    let c = 0.25 * p.detuning_qubit().powi(2);
    // (e − D n)² = G n + c
    let qa = d * d;
    let qb = -(2.0 * d * e + g2);
    let qc = e * e - c;
    let disc = qb * qb - 4.0 * qa * qc;
    let scale = qb * qb + (4.0 * qa * qc).abs();
    if disc < -1e-14 * scale {
        return Ok(vec![]);
    }
    let sq = disc.max(0.0).sqrt();
    let q = -0.5 * (qb + qb.signum() * sq);
    let mut roots = vec![q / qa];
    if q != 0.0 {
        roots.push(qc / q);
    }
    let tol = 1e-9 * (1.0 + e.abs());
    let mut out: Vec<f64> = Vec::new();
    for r in roots {
        let n = if r < 0.0 && r > -1e-12 { 0.0 } else { r };
        if n < 0.0 || !n.is_finite() {
            continue;
        }
        if (energy_of_n(n, spec)? - e).abs() <= tol && !out.iter().any(|m| (m - n).abs() <= 1e-12 * (1.0 + n)) {
            out.push(n);
        }
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Turning-point estimate of the two `P(n)` maxima.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PnExtrema {
    pub n_min: f64,
    pub n_max: f64,
    /// `n_min` was negative and has been set to zero.
    pub clamped: bool,
}

/// `⟨n⟩ ± f sqrt(⟨n⟩) / |Δ0|`.
pub fn pn_extrema(mean_n: f64, params: &ModelParams) -> Result<PnExtrema> {
    if !(mean_n >= 0.0) {
        return Err(Error::Domain(format!("mean photon number must be non-negative, got {mean_n}")));
    }
    let d = abs_detuning(params)?;
    let w = params.f * mean_n.sqrt() / d;
    let lo = mean_n - w;
    Ok(PnExtrema { n_min: lo.max(0.0), n_max: mean_n + w, clamped: lo < 0.0 })
}

/// Deviation statistics of `(⟨n⟩, ⟨σz⟩)` points from the polarization curve.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FitReport {
    pub count: usize,
    pub count_plus: usize,
    pub count_minus: usize,
    pub rms: f64,
    pub max_abs: f64,
}

/// Compares each point against the branch selected by the sign of its
/// `⟨σz⟩`.
pub fn polarization_fit_report(points: &[(f64, f64)], params: &ModelParams) -> Result<FitReport> {
    let mut rep = FitReport::default();
    let mut sum2 = 0.0;
    for &(n, sz) in points {
        let branch = if sz >= 0.0 { Branch::Plus } else { Branch::Minus };
        let th = polarization(n.max(0.0), &BranchSpec::new(branch, params))?.value;
        let dev = (sz - th).abs();
        sum2 += dev * dev;
        rep.max_abs = rep.max_abs.max(dev);
        rep.count += 1;
        match branch {
            Branch::Plus => rep.count_plus += 1,
            Branch::Minus => rep.count_minus += 1,
        }
    }
    if rep.count > 0 {
        rep.rms = (sum2 / rep.count as f64).sqrt();
    }
    Ok(rep)
}

/// [`polarization_fit_report`] over eigenstate diagnostics.
pub fn polarization_fit_diagnostics(states: &[EigenstateDiagnostics], params: &ModelParams) -> Result<FitReport> {
    let pts: Vec<(f64, f64)> = states.iter().map(|d| (d.mean_n, d.mean_sigma_z)).collect();
    polarization_fit_report(&pts, params)
}

/// `(h, h0)` of a rotating-frame eigenstate in the semiclassical convention.
///
/// The displacement `a = b − f/(2Δ0)` removes the drive: the stationary
/// Hamiltonian becomes `Δ0 n_b + Δ_Ω σz/2 + gω0(bσ+ + h.c.)` plus a small
/// `σx` field and the constant `−f²/(4Δ0)`. So `h0 = |Δ0| ⟨n_b⟩` and
/// `h = sign(Δ0)(E + f²/(4Δ0))`, the sign making `h0` non-negative.
pub fn eigenstate_branch_point(psi: &[C64], energy: f64, params: &ModelParams) -> Result<(f64, f64)> {
    let d0 = params.detuning_osc();
    if d0 == 0.0 {
        return Err(Error::ResonanceSingularity);
    }
    let beta = params.f / (2.0 * d0);
    let nb = mean_photon_number(psi) + 2.0 * beta * mean_annihilation(psi).re + beta * beta;
    let h0 = d0.abs() * nb;
    let h = d0.signum() * (energy + params.f * params.f / (4.0 * d0));
    Ok((h, h0))
}

/// Distance of `(h, h0)` to the nearer branch, with that branch.
pub fn nearest_branch(h: f64, h0: f64, params: &ModelParams) -> Result<(Branch, f64)> {
    let h0c = h0.max(0.0);
    let up = branch_energy(h0c, &BranchSpec::new(Branch::Plus, params))?;
    let down = branch_energy(h0c, &BranchSpec::new(Branch::Minus, params))?;
    let (du, dd) = ((h - up).abs(), (h - down).abs());
    Ok(if du <= dd { (Branch::Plus, du) } else { (Branch::Minus, dd) })
}
