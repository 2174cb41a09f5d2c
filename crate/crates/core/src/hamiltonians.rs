//! The Hamiltonian chain of the driven model, all in the joint basis:
//!
//! * full lab-frame model: `ω0 n + (Ω/2)σz + gω0 (a + a†)σx + f cos(ωt)(a + a†)`
//! * rotating-wave model: `ω0 n + (Ω/2)σz + gω0 (aσ+ + a†σ-) + (f/2)(a e^{iωt} + a† e^{-iωt})`
//! * stationary rotating frame: `Δ0 n + (Δ_Ω/2)σz + gω0 (aσ+ + a†σ-) + (f/2)(a + a†)`
//! * displaced frame, obtained from the rotating frame by `a = b - f/(2Δ0)`.
//!
//! `ħ = 1` throughout.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{BandedHermitian, CMatrix};
use crate::operators::{
    build_annihilation, build_number, build_quadrature, build_qubit_operator, embed, embed_banded, FockTruncation, QubitOperator,
};
use crate::C64;

/// Drive amplitude `f = λ √n_p`, kept only to echo where `f` came from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DriveProvenance {
    pub lambda: f64,
    pub n_p: f64,
}

/// Physical constants of the model plus the oscillator truncation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    /// Oscillator frequency ω0.
    pub omega0: f64,
    /// Qubit level spacing Ω.
    pub omega_q: f64,
    /// Dimensionless coupling g.
    pub g: f64,
    /// Drive amplitude f.
    pub f: f64,
    /// Drive frequency ω.
    pub omega: f64,
    pub trunc: FockTruncation,
    pub provenance: Option<DriveProvenance>,
}

impl ModelParams {
    pub fn new(omega0: f64, omega_q: f64, g: f64, f: f64, omega: f64, levels: usize) -> Result<Self> {
        let p = Self { omega0, omega_q, g, f, omega, trunc: FockTruncation::new(levels)?, provenance: None };
        p.validate()?;
        Ok(p)
    }

    /// `ω0 = 1, Ω = 1.2, g = 0.04, f = 5^{-3/2}` driven at frequency `omega`.
    pub fn main_set(omega: f64, levels: usize) -> Result<Self> {
        Self::new(1.0, 1.2, 0.04, 5f64.powf(-1.5), omega, levels)
    }

    /// Sets `f = λ √n_p` and records the provenance.
    pub fn with_drive_provenance(mut self, lambda: f64, n_p: f64) -> Result<Self> {
        if !(lambda >= 0.0 && n_p >= 0.0) {
            return Err(Error::InvalidParams(format!("lambda = {lambda}, n_p = {n_p}")));
        }
        self.f = lambda * n_p.sqrt();
        self.provenance = Some(DriveProvenance { lambda, n_p });
        self.validate()?;
        Ok(self)
    }

    pub fn with_levels(mut self, levels: usize) -> Result<Self> {
        self.trunc = FockTruncation::new(levels)?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.omega0, self.omega_q, self.g, self.f, self.omega].iter().all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidParams("non-finite parameter".into()));
        }
        if self.omega <= 0.0 || self.omega0 <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "need omega > 0 and omega0 > 0, got omega = {}, omega0 = {}",
                self.omega, self.omega0
            )));
        }
        if self.g < 0.0 || self.f < 0.0 {
            return Err(Error::InvalidParams(format!("need g, f >= 0, got g = {}, f = {}", self.g, self.f)));
        }
        Ok(())
    }

    pub fn levels(&self) -> usize {
        self.trunc.levels()
    }

    pub fn dim(&self) -> usize {
        self.trunc.joint_dim()
    }

    /// Δ0 = ω0 − ω.
    pub fn detuning_osc(&self) -> f64 {
        self.omega0 - self.omega
    }

    /// Δ_Ω = Ω − ω.
    pub fn detuning_qubit(&self) -> f64 {
        self.omega_q - self.omega
    }

    /// Drive period T = 2π/ω.
    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega
    }

    /// Coupling energy gω0.
    pub fn coupling(&self) -> f64 {
        self.g * self.omega0
    }
}

/// Constants produced by the displacement `a = b − f/(2Δ0)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DisplacedFrameConstants {
    /// Effective transverse field `f g ω0 / (2Δ0)`.
    pub b_x: f64,
    /// Scalar offset magnitude `f² / (4Δ0)`.
    pub k: f64,
    /// Oscillator displacement `−f/(2Δ0)`.
    pub shift: f64,
    /// Effective coupling `g ω0 / Δ0`.
    pub g_eff: f64,
}

impl DisplacedFrameConstants {
    pub fn new(params: &ModelParams) -> Result<Self> {
        let d0 = params.detuning_osc();
        if d0 == 0.0 {
            return Err(Error::ResonanceSingularity);
        }
        Ok(Self {
            b_x: params.f * params.coupling() / (2.0 * d0),
            k: params.f * params.f / (4.0 * d0),
            shift: -params.f / (2.0 * d0),
            g_eff: params.coupling() / d0,
        })
    }
}

struct Pieces {
    number: BandedHermitian,
    sigma_z: BandedHermitian,
    quadrature: BandedHermitian,
    jc: BandedHermitian,
    x_sigma_x: BandedHermitian,
    sigma_x: BandedHermitian,
}

fn pieces(trunc: FockTruncation) -> Result<Pieces> {
    let n = trunc.levels();
    let id_osc = CMatrix::identity(n);
    let id_q = build_qubit_operator(QubitOperator::Identity);
    let a = build_annihilation(trunc);
    let x = build_quadrature(trunc);
    let jc = embed(&a, &build_qubit_operator(QubitOperator::SigmaPlus))?;
    let jc = jc.add(&jc.adjoint()).to_banded(0.0)?;
    Ok(Pieces {
        number: embed_banded(&build_number(trunc), &id_q)?,
        sigma_z: embed_banded(&id_osc, &build_qubit_operator(QubitOperator::SigmaZ))?,
        quadrature: embed_banded(&x, &id_q)?,
        jc,
        x_sigma_x: embed_banded(&x, &build_qubit_operator(QubitOperator::SigmaX))?,
        sigma_x: embed_banded(&id_osc, &build_qubit_operator(QubitOperator::SigmaX))?,
    })
}

fn combine(dim: usize, terms: &[(&BandedHermitian, f64)]) -> BandedHermitian {
    let mut h = BandedHermitian::zeros(dim, 0);
    for (term, c) in terms {
        if *c != 0.0 {
            h.add_scaled(term, *c);
        }
    }
    h
}

/// Time-independent part and drive operator of the full model:
/// `H(t) = static + f cos(ωt) · drive`.
pub fn full_parts(params: &ModelParams) -> Result<(BandedHermitian, BandedHermitian)> {
    params.validate()?;
    let p = pieces(params.trunc)?;
    let dim = params.dim();
    let stat = combine(dim, &[(&p.number, params.omega0), (&p.sigma_z, 0.5 * params.omega_q), (&p.x_sigma_x, params.coupling())]);
    Ok((stat, p.quadrature))
}

/// Full lab-frame Hamiltonian at time `t` (half-bandwidth 3).
pub fn build_full(params: &ModelParams, t: f64) -> Result<BandedHermitian> {
    let (mut h, drive) = full_parts(params)?;
    let c = params.f * (params.omega * t).cos();
    if c != 0.0 {
        h.add_scaled(&drive, c);
    }
    Ok(h)
}

/// Rotating-wave Hamiltonian at time `t` (half-bandwidth 2).
pub fn build_rwa(params: &ModelParams, t: f64) -> Result<BandedHermitian> {
    params.validate()?;
    let p = pieces(params.trunc)?;
    let mut h = combine(params.dim(), &[(&p.number, params.omega0), (&p.sigma_z, 0.5 * params.omega_q), (&p.jc, params.coupling())]);
    // (f/2)(a e^{iωt} + a† e^{-iωt}): the a-part sits above the diagonal
    let a = build_annihilation(params.trunc);
    let phase = C64::from_polar(0.5 * params.f, params.omega * t);
    let drive = embed(&a, &build_qubit_operator(QubitOperator::Identity))?.scale(phase);
    let drive = drive.add(&drive.adjoint()).to_banded(0.0)?;
    h.add_scaled(&drive, 1.0);
    Ok(h)
}

/// Stationary rotating-frame Hamiltonian (half-bandwidth 2).
pub fn build_rotating_frame(params: &ModelParams) -> Result<BandedHermitian> {
    params.validate()?;
    let p = pieces(params.trunc)?;
    Ok(combine(
        params.dim(),
        &[
            (&p.number, params.detuning_osc()),
            (&p.sigma_z, 0.5 * params.detuning_qubit()),
            (&p.jc, params.coupling()),
            (&p.quadrature, 0.5 * params.f),
        ],
    ))
}

/// Displaced-frame Hamiltonian in the `b` oscillator basis together with the
/// frame constants.
///
/// The matrix is the exact image of [`build_rotating_frame`] under
/// `a = b − f/(2Δ0)`, which gives `Δ0 n_b + (Δ_Ω/2)σz + gω0 (bσ+ + b†σ−) − B_x σx − K`
/// with `B_x`, `K` as reported in [`DisplacedFrameConstants`]. The sign of the
/// `σx` term is spectrally irrelevant; the sign of `K` is not.
pub fn build_displaced(params: &ModelParams) -> Result<(BandedHermitian, DisplacedFrameConstants)> {
    params.validate()?;
    let consts = DisplacedFrameConstants::new(params)?;
    let p = pieces(params.trunc)?;
    let mut h = combine(
        params.dim(),
        &[
            (&p.number, params.detuning_osc()),
            (&p.sigma_z, 0.5 * params.detuning_qubit()),
            (&p.jc, params.coupling()),
            (&p.sigma_x, -consts.b_x),
        ],
    );
    h.shift_diagonal(-consts.k);
    Ok((h, consts))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f_main() -> f64 {
        5f64.powf(-1.5)
    }

    #[test]
    fn full_uncoupled_is_diagonal() {
        let p = ModelParams::new(1.0, 1.2, 0.0, 0.0, 1.0, 5).unwrap();
        let h = build_full(&p, 0.3).unwrap().trimmed();
        assert_eq!(h.half_bandwidth(), 0);
        for k in 0..10 {
            let (n, s) = (k / 2, k % 2);
            let expected = n as f64 + (2.0 * s as f64 - 1.0) * 0.6;
            assert!((h.diagonal()[k] - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn full_drive_vanishes_at_quarter_period() {
        let p = ModelParams::new(1.0, 1.2, 0.04, 0.3, 1.0, 6).unwrap();
        let h = build_full(&p, PI / (2.0 * p.omega)).unwrap();
        let undriven = build_full(&ModelParams { f: 0.0, ..p }, 0.0).unwrap();
        assert!(h.max_abs_diff(&undriven) < 1e-16);
        assert_eq!(h.half_bandwidth(), 3);
    }

    #[test]
    fn full_coupling_element() {
        let p = ModelParams::new(1.0, 1.2, 0.04, 0.0, 1.0, 4).unwrap();
        let h = build_full(&p, 0.0).unwrap();
        // |0,0> <-> |1,1> and |0,1> <-> |1,0>
        assert!((h.get(0, 3).norm() - 0.04).abs() < 1e-16);
        assert!((h.get(1, 2).norm() - 0.04).abs() < 1e-16);
        assert_eq!(h.get(0, 2).norm(), 0.0);
    }

    #[test]
    fn rwa_structure() {
        let p = ModelParams::new(1.0, 1.2, 0.04, 0.0, 1.0, 6).unwrap();
        let h = build_rwa(&p, 0.7).unwrap().trimmed();
        assert_eq!(h.half_bandwidth(), 1);
        for n in 0..5 {
            let v = h.get(2 * n + 2, 2 * n + 1);
            assert!((v.re - 0.04 * ((n + 1) as f64).sqrt()).abs() < 1e-15);
        }
        for n in 0..5 {
            assert_eq!(h.get(2 * n, 2 * n + 1).norm(), 0.0);
        }

        let p = ModelParams::new(1.0, 1.2, 0.04, 0.2, 1.0, 6).unwrap();
        let h = build_rwa(&p, 0.0).unwrap();
        for n in 0..5 {
            for s in 0..2 {
                let v = h.get(2 * n + s, 2 * (n + 1) + s);
                assert!((v - C64::new(0.1 * ((n + 1) as f64).sqrt(), 0.0)).norm() < 1e-15);
            }
        }

        let p0 = ModelParams::new(1.0, 1.2, 0.0, 0.0, 1.0, 6).unwrap();
        assert!(build_rwa(&p0, 1.1).unwrap().max_abs_diff(&build_full(&p0, 1.1).unwrap()) < 1e-16);
    }

    #[test]
    fn rotating_frame_entries() {
        let p = ModelParams::new(1.0, 1.0, 0.04, 0.1, 1.0, 5).unwrap();
        let h = build_rotating_frame(&p).unwrap();
        assert!(h.diagonal().iter().all(|d| *d == 0.0));

        let p = ModelParams::new(0.975, 1.2, 0.04, f_main(), 1.0, 5).unwrap();
        let h = build_rotating_frame(&p).unwrap();
        for n in 0..5 {
            let osc = h.diagonal()[2 * n] + h.diagonal()[2 * n + 1];
            assert!((0.5 * osc + 0.025 * n as f64).abs() < 1e-14);
        }
        let drive = h.get(0, 2).re;
        assert!((drive - 0.044721359549995794).abs() < 1e-15);
    }

    #[test]
    fn displaced_constants() {
        let p = ModelParams::new(1.0, 1.2, 0.04, f_main(), 0.975, 5).unwrap();
        let (_, c) = build_displaced(&p).unwrap();
        assert!((c.b_x - 0.0715541752799933).abs() < 1e-12);
        // f² = 5^-3 = 0.008 exactly, so K = 0.008 / 0.1
        assert!((c.k - 0.08).abs() < 1e-12);
        assert!((c.g_eff - 1.6).abs() < 1e-12);
        assert!((c.shift + f_main() / 0.05).abs() < 1e-12);
    }

    #[test]
    fn displaced_without_drive_matches_rotating_frame() {
        let p = ModelParams::new(1.0, 1.2, 0.04, 0.0, 0.95, 8).unwrap();
        let (h, c) = build_displaced(&p).unwrap();
        assert_eq!((c.b_x, c.k), (0.0, 0.0));
        assert!(h.max_abs_diff(&build_rotating_frame(&p).unwrap()) < 1e-16);
    }

    #[test]
    fn displaced_rejects_resonance() {
        let p = ModelParams::new(1.0, 1.2, 0.04, 0.1, 1.0, 8).unwrap();
        assert!(matches!(build_displaced(&p), Err(Error::ResonanceSingularity)));
    }

    #[test]
    fn params_validation() {
        assert!(ModelParams::new(1.0, 1.2, 0.04, 0.1, 0.0, 8).is_err());
        assert!(ModelParams::new(1.0, 1.2, -0.1, 0.1, 1.0, 8).is_err());
        assert!(ModelParams::new(1.0, 1.2, 0.04, 0.1, 1.0, 1).is_err());
        let p = ModelParams::new(0.975, 1.2, 0.04, 0.0, 1.0, 8).unwrap().with_drive_provenance(0.02, 20.0).unwrap();
        assert!((p.f - f_main()).abs() < 1e-15);
        assert!((p.detuning_osc() + 0.025).abs() < 1e-15);
        assert!((p.detuning_qubit() - 0.2).abs() < 1e-15);
        assert!((p.period() - 2.0 * PI).abs() < 1e-15);
    }
}
