//! Coherent states and spin-resolved Husimi functions.
//!
//! Coherent states use `α = (q + ip)/√2` and the standard Fock amplitudes
//! `e^{−|α|²/2} αⁿ/√(n!)`. In position space this is the unit-normalized
//! Gaussian `π^{−1/4} exp(−(x−q)²/2 + ip(x−q))` times the global phase
//! `e^{iqp/2}`, which drops out of every `|⟨α|ψ⟩|²`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::observables::mean_photon_number;
use crate::par;
use crate::C64;

/// Largest tolerated coherent-state probability beyond the truncation.
pub const LEAKAGE_TOL: f64 = 1e-10;

/// Relative amplitude below which coherent-state tails are dropped.
const TAIL_CUTOFF: f64 = 1e-18;

/// Fock amplitudes of `|α⟩` for `n < levels`, computed outward from the
/// peak so that neither tail underflows prematurely. Amplitudes below
/// `TAIL_CUTOFF` of the peak are left at zero.
fn coherent_amplitudes(alpha: C64, levels: usize, out: &mut [C64]) {
    for v in out.iter_mut() {
        *v = C64::new(0.0, 0.0);
    }
    let r2 = alpha.norm_sqr();
    if r2 == 0.0 {
        out[0] = C64::new(1.0, 0.0);
        return;
    }
    let peak = (r2.floor() as usize).min(levels - 1);
    let ln_fact: f64 = (1..=peak).map(|k| (k as f64).ln()).sum();
    let theta = alpha.arg();
    let ln_mag = -0.5 * r2 + peak as f64 * r2.sqrt().ln() - 0.5 * ln_fact;
    let c_peak = C64::from_polar(ln_mag.exp(), (peak as f64 * theta).rem_euclid(2.0 * PI));
    out[peak] = c_peak;
    let floor = c_peak.norm() * TAIL_CUTOFF;
    let mut c = c_peak;
    for n in peak + 1..levels {
        c = c * alpha / (n as f64).sqrt();
        if c.norm() < floor {
            break;
        }
        out[n] = c;
    }
    let mut c = c_peak;
    for n in (0..peak).rev() {
        c = c * ((n + 1) as f64).sqrt() / alpha;
        if c.norm() < floor {
            break;
        }
        out[n] = c;
    }
}

/// Oscillator amplitudes of the coherent state centred at `(q0, p0)`.
pub fn coherent_state(q0: f64, p0: f64, levels: usize) -> Result<Vec<C64>> {
    if levels < 1 || !q0.is_finite() || !p0.is_finite() {
        return Err(Error::InvalidParams(format!("coherent state ({q0}, {p0}) with N = {levels}")));
    }
    let alpha = C64::new(q0, p0) / 2f64.sqrt();
    let mut c = vec![C64::new(0.0, 0.0); levels];
    coherent_amplitudes(alpha, levels, &mut c);
    let kept: f64 = c.iter().map(|x| x.norm_sqr()).sum();
    let leakage = (1.0 - kept).max(0.0);
    if leakage > LEAKAGE_TOL {
        return Err(Error::BasisTooSmall { leakage, n: levels });
    }
    Ok(c)
}

/// Rectangular sampling of the `(q, p)` plane, endpoints included.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseSpaceGrid {
    pub q_min: f64,
    pub q_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub nq: usize,
    pub np: usize,
}

impl PhaseSpaceGrid {
    pub fn new(q_range: (f64, f64), p_range: (f64, f64), nq: usize, np: usize) -> Result<Self> {
        let ok = |a: f64, b: f64| a.is_finite() && b.is_finite() && b > a;
        if nq < 2 || np < 2 || !ok(q_range.0, q_range.1) || !ok(p_range.0, p_range.1) {
            return Err(Error::InvalidParams(format!("grid q={q_range:?} p={p_range:?} with {nq}x{np} samples")));
        }
        Ok(Self { q_min: q_range.0, q_max: q_range.1, p_min: p_range.0, p_max: p_range.1, nq, np })
    }

    /// Square grid of half-width `1.5·sqrt(2⟨n⟩ + 4)` around the origin.
    pub fn default_for(psi: &[C64], samples: usize) -> Result<Self> {
        let half = 1.5 * (2.0 * mean_photon_number(psi) + 4.0).sqrt();
        Self::new((-half, half), (-half, half), samples, samples)
    }

    pub fn dq(&self) -> f64 {
        (self.q_max - self.q_min) / (self.nq - 1) as f64
    }

    pub fn dp(&self) -> f64 {
        (self.p_max - self.p_min) / (self.np - 1) as f64
    }

    pub fn q(&self, i: usize) -> f64 {
        self.q_min + i as f64 * self.dq()
    }

    pub fn p(&self, j: usize) -> f64 {
        self.p_min + j as f64 * self.dp()
    }
}

/// Husimi function of one spin component on a grid.
#[derive(Clone, Debug)]
pub struct HusimiGrid {
    pub grid: PhaseSpaceGrid,
    /// Qubit index `s` of the projector `|s⟩⟨s|`.
    pub projector: usize,
    /// `values[i * np + j] = ρ_H(q_i, p_j)`.
    pub values: Vec<f64>,
    pub max: f64,
    /// `Σ ρ_H ΔqΔp / (2π)`.
    pub norm_estimate: f64,
}

impl HusimiGrid {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.grid.np + j]
    }

    /// Grid point of the maximum.
    pub fn argmax(&self) -> (usize, usize) {
        let k = self.values.iter().enumerate().fold((0, f64::NEG_INFINITY), |acc, (k, &v)| if v > acc.1 { (k, v) } else { acc }).0;
        (k / self.grid.np, k % self.grid.np)
    }
}

/// `ρ_H(q, p) = |⟨α(q, p)| Π_s ψ⟩|²` over the grid.
pub fn husimi_map(psi: &[C64], projector: usize, grid: &PhaseSpaceGrid) -> Result<HusimiGrid> {
    if projector > 1 {
        return Err(Error::InvalidParams(format!("projector index {projector}")));
    }
    if psi.len() < 2 || !psi.len().is_multiple_of(2) {
        return Err(Error::Dimension(format!("state length {}", psi.len())));
    }
    let levels = psi.len() / 2;
    let comp: Vec<C64> = psi.iter().skip(projector).step_by(2).copied().collect();
    let np = grid.np;
    let mut values = vec![0.0; grid.nq * np];
    par::for_each_chunk_mut(&mut values, np, |i, row| {
        let mut c = vec![C64::new(0.0, 0.0); levels];
        let q = grid.q(i);
        for (j, out) in row.iter_mut().enumerate() {
            let alpha = C64::new(q, grid.p(j)) / 2f64.sqrt();
            coherent_amplitudes(alpha, levels, &mut c);
            let ov: C64 = c.iter().zip(&comp).map(|(a, b)| a.conj() * b).sum();
            *out = ov.norm_sqr();
        }
    });
    let max = values.iter().copied().fold(0.0, f64::max);
    let norm_estimate = values.iter().sum::<f64>() * grid.dq() * grid.dp() / (2.0 * PI);
    Ok(HusimiGrid { grid: *grid, projector, values, max, norm_estimate })
}

/// Angular distribution of a Husimi function on its dominant ring.
#[derive(Clone, Debug, PartialEq)]
pub struct AngularProfile {
    /// Radius of the ring carrying the most probability.
    pub ring_radius: f64,
    /// Probability mass per angular bin, normalized to one.
    pub bins: Vec<f64>,
    /// Shannon entropy of `bins` in nats; `ln(bins.len())` when uniform.
    pub entropy: f64,
}

/// Half-width of the annulus used by [`angular_profile`].
pub const RING_HALF_WIDTH: f64 = 1.5;

/// Angular entropy of `h` around `centre` on the annulus
/// `r* ± RING_HALF_WIDTH`, where `r*` maximizes the radial mass.
pub fn angular_profile(h: &HusimiGrid, centre: (f64, f64), angular_bins: usize) -> Result<AngularProfile> {
    if angular_bins < 2 {
        return Err(Error::InvalidParams(format!("need at least 2 angular bins, got {angular_bins}")));
    }
    let g = &h.grid;
    let polar = |i: usize, j: usize| {
        let (x, y) = (g.q(i) - centre.0, g.p(j) - centre.1);
        (x.hypot(y), y.atan2(x))
    };
    let rmax = (g.q_max - g.q_min).hypot(g.p_max - g.p_min);
    let dr = 0.25;
    let nr = (rmax / dr).ceil() as usize + 1;
    let mut radial = vec![0.0; nr];
    for i in 0..g.nq {
        for j in 0..g.np {
            let (r, _) = polar(i, j);
            radial[((r / dr) as usize).min(nr - 1)] += h.at(i, j);
        }
    }
    let kbest = radial.iter().enumerate().fold((0, -1.0), |a, (k, &v)| if v > a.1 { (k, v) } else { a }).0;
    let ring_radius = (kbest as f64 + 0.5) * dr;
    let mut bins = vec![0.0; angular_bins];
    for i in 0..g.nq {
        for j in 0..g.np {
            let (r, phi) = polar(i, j);
            if (r - ring_radius).abs() <= RING_HALF_WIDTH {
                let u = (phi + PI) / (2.0 * PI);
                bins[((u * angular_bins as f64) as usize).min(angular_bins - 1)] += h.at(i, j);
            }
        }
    }
    let total: f64 = bins.iter().sum();
    if total <= 0.0 {
        return Err(Error::ZeroVector);
    }
    for b in &mut bins {
        *b /= total;
    }
    let entropy = -bins.iter().filter(|&&b| b > 0.0).map(|b| b * b.ln()).sum::<f64>();
    Ok(AngularProfile { ring_radius, bins, entropy })
}

/// Position-space wavefunction `Σ c_n ψ_n(x)` of oscillator amplitudes,
/// with `ψ_n` the normalized Hermite functions.
pub fn position_wavefunction(osc: &[C64], x: f64) -> C64 {
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-0.5 * x * x).exp();
    let mut acc = C64::new(0.0, 0.0);
    for (n, &c) in osc.iter().enumerate() {
        acc += c * cur;
        let next = (2.0 / (n + 1) as f64).sqrt() * x * cur - (n as f64 / (n + 1) as f64).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    acc
}

/// `⟨φ|ψ⟩` by trapezoidal quadrature on `[x_min, x_max]`, where
/// `φ(x) = π^{−1/4} exp(−(x−q0)²/2 + i p0 (x−q0))`.
pub fn position_space_overlap(osc: &[C64], q0: f64, p0: f64, x_range: (f64, f64), samples: usize) -> C64 {
    let dx = (x_range.1 - x_range.0) / (samples - 1) as f64;
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..samples {
        let x = x_range.0 + k as f64 * dx;
        let w = if k == 0 || k + 1 == samples { 0.5 } else { 1.0 };
        let phi = C64::from_polar(PI.powf(-0.25) * (-0.5 * (x - q0).powi(2)).exp(), p0 * (x - q0));
        acc += phi.conj() * position_wavefunction(osc, x) * w;
    }
    acc * dx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observables::pn_distribution;

    fn joint(osc: &[C64], s: usize) -> Vec<C64> {
        let mut v = vec![C64::new(0.0, 0.0); 2 * osc.len()];
        for (n, &c) in osc.iter().enumerate() {
            v[2 * n + s] = c;
        }
        v
    }

    #[test]
    fn vacuum_and_mean() {
        let c = coherent_state(0.0, 0.0, 5).unwrap();
        assert_eq!(c[0], C64::new(1.0, 0.0));
        assert!(c[1..].iter().all(|x| x.norm() == 0.0));
        let c = coherent_state(5.0, 0.0, 700).unwrap();
        let v = joint(&c, 0);
        assert!((mean_photon_number(&v) - 12.5).abs() < 1e-10);
        let norm: f64 = c.iter().map(|x| x.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        // Poisson weights
        let p = pn_distribution(&v);
        let mut poisson = (-12.5f64).exp();
        for (n, pn) in p.iter().enumerate().take(40) {
            if n > 0 {
                poisson *= 12.5 / n as f64;
            }
            assert!((pn - poisson).abs() < 1e-14, "n={n}");
        }
    }

    #[test]
    fn coherent_norm_small_basis() {
        let c = coherent_state(5.0, 0.0, 60).unwrap();
        let norm: f64 = c.iter().map(|x| x.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        assert!(matches!(coherent_state(5.0, 0.0, 20), Err(Error::BasisTooSmall { .. })));
    }

    #[test]
    fn husimi_of_vacuum() {
        let mut osc = vec![C64::new(0.0, 0.0); 10];
        osc[0] = C64::new(1.0, 0.0);
        let psi = joint(&osc, 1);
        let grid = PhaseSpaceGrid::new((-3.0, 3.0), (-3.0, 3.0), 31, 31).unwrap();
        let h = husimi_map(&psi, 1, &grid).unwrap();
        for i in 0..31 {
            for j in 0..31 {
                let a2 = 0.5 * (grid.q(i).powi(2) + grid.p(j).powi(2));
                assert!((h.at(i, j) - (-a2).exp()).abs() < 1e-14);
            }
        }
        assert!((h.max - 1.0).abs() < 1e-15);
        let other = husimi_map(&psi, 0, &grid).unwrap();
        assert!(other.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn kernel_phase_convention_is_global() {
        // |<φ_kernel|ψ>| = |<α|ψ>| for a generic oscillator state
        let osc: Vec<C64> = (0..12).map(|n| C64::new((n as f64 * 0.7).cos(), (n as f64 * 0.3).sin()) / 3.0).collect();
        let nrm = osc.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        let osc: Vec<C64> = osc.iter().map(|x| x / nrm).collect();
        for &(q, p) in &[(0.0, 0.0), (1.5, -0.5), (-2.0, 2.5)] {
            let mut c = vec![C64::new(0.0, 0.0); 12];
            coherent_amplitudes(C64::new(q, p) / 2f64.sqrt(), 12, &mut c);
            let fock: C64 = c.iter().zip(&osc).map(|(a, b)| a.conj() * b).sum();
            let pos = position_space_overlap(&osc, q, p, (-14.0, 14.0), 4001);
            assert!((fock.norm() - pos.norm()).abs() < 1e-10, "({q},{p}): {} vs {}", fock.norm(), pos.norm());
        }
    }

    #[test]
    fn grid_validation() {
        assert!(PhaseSpaceGrid::new((0.0, 1.0), (0.0, 1.0), 1, 5).is_err());
        assert!(PhaseSpaceGrid::new((1.0, 0.0), (0.0, 1.0), 5, 5).is_err());
        let psi = joint(&coherent_state(5.0, 0.0, 60).unwrap(), 0);
        let g = PhaseSpaceGrid::default_for(&psi, 256).unwrap();
        assert!((g.q_max - 1.5 * 29f64.sqrt()).abs() < 1e-9);
        assert_eq!((g.nq, g.np), (256, 256));
    }

    #[test]
    fn ring_entropy_uniform_vs_spot() {
        // a Fock state gives a uniform ring, a coherent state a localized spot
        let mut osc = vec![C64::new(0.0, 0.0); 60];
        osc[20] = C64::new(1.0, 0.0);
        let fock = joint(&osc, 0);
        let grid = PhaseSpaceGrid::default_for(&fock, 161).unwrap();
        let ring = angular_profile(&husimi_map(&fock, 0, &grid).unwrap(), (0.0, 0.0), 64).unwrap();
        assert!((ring.ring_radius - 40f64.sqrt()).abs() < 0.6, "{}", ring.ring_radius);
        assert!(ring.entropy > 64f64.ln() - 0.01);
        let coh = joint(&coherent_state(6.0, 0.0, 60).unwrap(), 0);
        let spot = angular_profile(&husimi_map(&coh, 0, &grid).unwrap(), (0.0, 0.0), 64).unwrap();
        assert!(spot.entropy < ring.entropy - 1.0);
    }
}
