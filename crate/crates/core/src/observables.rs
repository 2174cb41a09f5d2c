//! Scalar and distribution diagnostics of joint oscillator-qubit states.
//!
//! All functions take raw amplitude slices in the `2n + s` ordering, so they
//! apply equally to [`StateVector`](crate::evolution::StateVector)s,
//! eigenvector columns and Floquet modes.

use crate::eigensolve::EigenDecomposition;
use crate::error::{Error, Result};
use crate::evolution::{energy_expectation, Model};
use crate::hamiltonians::ModelParams;
use crate::par;
use crate::C64;

/// Per-state summary used by the spectral scenarios.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenstateDiagnostics {
    pub j: usize,
    /// Participation ratio in the uncoupled product basis.
    pub xi: f64,
    pub mean_n: f64,
    pub mean_sigma_z: f64,
    /// Eigenvalue or quasienergy.
    pub energy: f64,
    pub h: f64,
    pub h0: f64,
}

/// `(Σ|ψ_k|²)² / Σ|ψ_k|⁴`, the effective number of basis states.
pub fn participation_ratio(psi: &[C64]) -> Result<f64> {
    let (s2, s4) = psi.iter().fold((0.0, 0.0), |(a, b), x| {
        let p = x.norm_sqr();
        (a + p, b + p * p)
    });
    if s4 == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(s2 * s2 / s4)
}

pub fn mean_photon_number(psi: &[C64]) -> f64 {
    psi.iter().enumerate().map(|(k, x)| (k / 2) as f64 * x.norm_sqr()).sum()
}

pub fn mean_sigma_z(psi: &[C64]) -> f64 {
    psi.iter().enumerate().map(|(k, x)| if k % 2 == 1 { x.norm_sqr() } else { -x.norm_sqr() }).sum()
}

/// `⟨a⟩ = Σ √(n+1) conj(ψ(n, s)) ψ(n+1, s)`.
pub fn mean_annihilation(psi: &[C64]) -> C64 {
    let levels = psi.len() / 2;
    let mut acc = C64::new(0.0, 0.0);
    for n in 0..levels.saturating_sub(1) {
        let r = ((n + 1) as f64).sqrt();
        for s in 0..2 {
            acc += psi[2 * n + s].conj() * psi[2 * n + 2 + s] * r;
        }
    }
    acc
}

/// `P(n) = Σ_s |ψ(n, s)|²`.
pub fn pn_distribution(psi: &[C64]) -> Vec<f64> {
    psi.chunks(2).map(|c| c.iter().map(|x| x.norm_sqr()).sum()).collect()
}

/// Probability of the qubit state `s`.
pub fn spin_probability(psi: &[C64], s: usize) -> f64 {
    psi.iter().skip(s).step_by(2).map(|x| x.norm_sqr()).sum()
}

/// Locations of the largest `P(n)` below and above `split`: the argmax over
/// `n ≤ split` and over `n ≥ split`. Ties go to the smaller `n`.
pub fn pn_peaks(pn: &[f64], split: usize) -> Option<(usize, usize)> {
    if pn.is_empty() {
        return None;
    }
    let split = split.min(pn.len() - 1);
    let argmax = |lo: usize, hi: usize| (lo..=hi).fold(lo, |b, n| if pn[n] > pn[b] { n } else { b });
    Some((argmax(0, split), argmax(split, pn.len() - 1)))
}

/// Total probability in the `m` highest oscillator levels, both spins.
pub fn edge_probability(psi: &[C64], m: usize) -> Result<f64> {
    let levels = psi.len() / 2;
    if m > levels {
        return Err(Error::InvalidParams(format!("edge width {m} exceeds N = {levels}")));
    }
    Ok(psi[2 * (levels - m)..].iter().map(|x| x.norm_sqr()).sum())
}

/// `(h, h0)` of a Floquet mode at `t = 0`: `h = ⟨H(0)⟩` of the lab-frame
/// model and `h0 = ω⟨n̂⟩`.
pub fn floquet_h_h0(mode: &[C64], params: &ModelParams) -> (f64, f64) {
    (energy_expectation(params, Model::Full, 0.0, mode), params.omega * mean_photon_number(mode))
}

/// Diagnostics of one state; `h` and `h0` are supplied by the caller because
/// their meaning depends on the context.
pub fn diagnose(j: usize, psi: &[C64], energy: f64, h: f64, h0: f64) -> Result<EigenstateDiagnostics> {
    Ok(EigenstateDiagnostics {
        j,
        xi: participation_ratio(psi)?,
        mean_n: mean_photon_number(psi),
        mean_sigma_z: mean_sigma_z(psi),
        energy,
        h,
        h0,
    })
}

/// Diagnostics of the first `count` eigenstates, with `h = E_j` and
/// `h0 = ⟨n⟩`.
pub fn eigenstate_diagnostics(eig: &EigenDecomposition, count: usize) -> Result<Vec<EigenstateDiagnostics>> {
    let count = count.min(eig.len());
    par::try_map_range(count, |j| {
        let v = eig.vector(j);
        diagnose(j, v, eig.values[j], eig.values[j], mean_photon_number(v))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(dim: usize, k: usize) -> Vec<C64> {
        let mut v = vec![C64::new(0.0, 0.0); dim];
        v[k] = C64::new(1.0, 0.0);
        v
    }

    #[test]
    fn pr_of_basis_and_superpositions() {
        assert_eq!(participation_ratio(&basis(10, 3)).unwrap(), 1.0);
        for m in 1..6 {
            let mut v = vec![C64::new(0.0, 0.0); 10];
            for x in v.iter_mut().take(m) {
                *x = C64::new(0.0, 1.0 / (m as f64).sqrt());
            }
            assert!((participation_ratio(&v).unwrap() - m as f64).abs() < 1e-12);
        }
        assert!(matches!(participation_ratio(&[C64::new(0.0, 0.0); 4]), Err(Error::ZeroVector)));
    }

    #[test]
    fn photon_number_and_spin() {
        let v = basis(10, 6); // |3, 0>
        assert_eq!(mean_photon_number(&v), 3.0);
        assert_eq!(mean_sigma_z(&v), -1.0);
        let h = 0.5f64.sqrt();
        let v = vec![C64::new(h, 0.0), C64::new(h, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
        assert!(mean_sigma_z(&v).abs() < 1e-15);
        assert!((spin_probability(&v, 1) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn annihilation_of_superposition() {
        // (|0> + |1>)/√2 with spin down: <a> = 1/2
        let h = 0.5f64.sqrt();
        let v = vec![C64::new(h, 0.0), C64::new(0.0, 0.0), C64::new(h, 0.0), C64::new(0.0, 0.0)];
        assert!((mean_annihilation(&v) - C64::new(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn pn_and_edge() {
        let v = basis(20, 11); // |5, 1>
        let p = pn_distribution(&v);
        assert_eq!(p.len(), 10);
        assert_eq!(p[5], 1.0);
        assert_eq!(p.iter().sum::<f64>(), 1.0);
        assert_eq!(edge_probability(&v, 3).unwrap(), 0.0);
        assert_eq!(edge_probability(&basis(20, 18), 1).unwrap(), 1.0);
        assert_eq!(edge_probability(&v, 10).unwrap(), 1.0);
        assert!(edge_probability(&v, 11).is_err());
    }

    #[test]
    fn peaks_on_both_sides() {
        let pn = [0.1, 0.3, 0.05, 0.0, 0.02, 0.4, 0.13];
        assert_eq!(pn_peaks(&pn, 3), Some((1, 5)));
        assert_eq!(pn_peaks(&pn, 1), Some((1, 5)));
        assert_eq!(pn_peaks(&pn, 100), Some((5, 6)));
        assert_eq!(pn_peaks(&[], 0), None);
    }

    #[test]
    fn uncoupled_h_h0() {
        let p = ModelParams::new(0.975, 1.2, 0.0, 0.0, 1.0, 10).unwrap();
        let (h, h0) = floquet_h_h0(&basis(20, 9), &p); // |4, 1>
        assert!((h0 - 4.0).abs() < 1e-15);
        assert!((h - (0.975 * 4.0 + 0.6)).abs() < 1e-14);
    }
}
