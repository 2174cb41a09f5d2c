//! Figure scenarios. Each function reads its parameters from the resolved
//! config, computes, and writes through the shared [`Output`].

use super::config::ExperimentConfig;
use super::io::{fmt_num, Axis, Output};
use super::Scenario;
use crate::eigensolve::{eigh, EigenDecomposition};
use crate::error::{Error, Result};
use crate::evolution::{floquet_modes, one_period_propagator, propagate_observed, stroboscopic, FloquetSolution, Model, StateVector};
use crate::hamiltonians::{build_displaced, build_rotating_frame, DisplacedFrameConstants, ModelParams};
use crate::husimi::{angular_profile, coherent_state, husimi_map, PhaseSpaceGrid};
use crate::linalg::BandedHermitian;
use crate::observables::{
    edge_probability, floquet_h_h0, mean_photon_number, mean_sigma_z, participation_ratio, pn_distribution, pn_peaks, spin_probability,
};
use crate::operators::FockTruncation;
use crate::par;
use crate::semiclassical::{
    branch_energy, eigenstate_branch_point, n_of_energy, nearest_branch, pn_extrema, polarization, Branch, BranchSpec,
};
use crate::C64;

/// Residual bound accepted from the eigensolver, relative to `‖M‖∞`.
const EIGH_RESIDUAL_TOL: f64 = 1e-10;

pub(super) struct Ctx<'a> {
    pub cfg: &'a ExperimentConfig,
    pub out: Output,
    pub warnings: Vec<String>,
}

impl Ctx<'_> {
    fn warn(&mut self, w: String) {
        self.warnings.push(w);
    }

    /// Records a warning when any of `states` has edge weight above `edge_tol`.
    fn check_stability<'s>(&mut self, label: &str, states: impl Iterator<Item = &'s [C64]>) -> Result<()> {
        let width = self.cfg.count("edge_width")?;
        let tol = self.cfg.num("edge_tol")?;
        let mut worst: f64 = 0.0;
        let mut bad = 0usize;
        for s in states {
            let pb = edge_probability(s, width.min(s.len() / 2))?;
            worst = worst.max(pb);
            bad += usize::from(pb > tol);
        }
        if bad > 0 {
            self.warn(format!(
                "{label}: {bad} retained states have edge probability above {} (max {}); increase levels",
                fmt_num(tol),
                fmt_num(worst)
            ));
        }
        Ok(())
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

fn checked_eigh(h: &BandedHermitian) -> Result<EigenDecomposition> {
    let eig = eigh(h)?;
    let bound = EIGH_RESIDUAL_TOL * h.norm_inf().max(1.0);
    if eig.residual_norm > bound {
        return Err(Error::NoConvergence(format!("eigenpair residual {} exceeds {}", fmt_num(eig.residual_norm), fmt_num(bound))));
    }
    Ok(eig)
}

fn first_n(cfg: &ExperimentConfig, key: &str, available: usize) -> Result<usize> {
    Ok(cfg.count(key)?.min(available))
}

fn indices(n: usize) -> Vec<f64> {
    (0..n).map(|i| i as f64).collect()
}

fn largest_root(e: f64, branch: Branch, p: &ModelParams) -> Result<f64> {
    Ok(n_of_energy(e, &BranchSpec::new(branch, p))?.last().copied().unwrap_or(f64::NAN))
}

// --- detuning sweeps -------------------------------------------------------

#[derive(Clone, Copy)]
enum SweepQuantity {
    Xi,
    MeanN,
    SigmaZ,
}

pub(super) fn sweep_detuning(ctx: &mut Ctx<'_>) -> Result<()> {
    let cfg = ctx.cfg;
    let (q, name) = match cfg.scenario {
        Scenario::Fig1 => (SweepQuantity::Xi, "xi"),
        Scenario::Fig2 => (SweepQuantity::MeanN, "mean_n"),
        _ => (SweepQuantity::SigmaZ, "sigma_z"),
    };
    let x = linspace(cfg.num("detuning_min")?, cfg.num("detuning_max")?, cfg.count("detuning_samples")?);
    if x.is_empty() {
        return Err(Error::Config("detuning_samples must be at least 1".into()));
    }
    let omega = cfg.num("omega")?;
    let width = cfg.count("edge_width")?;
    let tol = cfg.num("edge_tol")?;
    for (gi, &g) in cfg.list("g_values")?.iter().enumerate() {
        let rows = par::try_map_range(x.len(), |i| -> Result<(Vec<f64>, f64)> {
            let p = cfg.model_params(&[("omega0", omega * (1.0 + x[i])), ("g", g)])?;
            let eig = checked_eigh(&build_rotating_frame(&p)?)?;
            let jn = first_n(cfg, "j_max", eig.len())?;
            let mut row = Vec::with_capacity(jn);
            let mut edge: f64 = 0.0;
            for j in 0..jn {
                let v = eig.vector(j);
                row.push(match q {
                    SweepQuantity::Xi => participation_ratio(v)?,
                    SweepQuantity::MeanN => mean_photon_number(v),
                    SweepQuantity::SigmaZ => mean_sigma_z(v),
                });
                edge = edge.max(edge_probability(v, width.min(p.levels()))?);
            }
            Ok((row, edge))
        })?;
        let jn = rows[0].0.len();
        for (i, (_, edge)) in rows.iter().enumerate() {
            if *edge > tol {
                ctx.warn(format!(
                    "g = {}, detuning/omega = {}: edge probability {} above tolerance",
                    fmt_num(g),
                    fmt_num(x[i]),
                    fmt_num(*edge)
                ));
            }
        }
        let values: Vec<f64> = rows.into_iter().flat_map(|r| r.0).collect();
        ctx.out.matrix(
            &format!("{name}_g{gi}.dat"),
            &[("g", fmt_num(g)), ("quantity", name.to_string())],
            Axis { name: "detuning_over_omega", values: &x },
            Axis { name: "j", values: &indices(jn) },
            &values,
        )?;
    }
    Ok(())
}

// --- P(n) maps -------------------------------------------------------------

fn pn_rows(eig: &EigenDecomposition, jn: usize, n_max: usize) -> Vec<f64> {
    (0..jn).flat_map(|j| pn_distribution(eig.vector(j)).into_iter().take(n_max)).collect()
}

/// Per-state overlay columns shared by the P(n) scenarios.
const PN_COLUMNS: [&str; 13] = [
    "j",
    "energy",
    "mean_n",
    "sigma_z",
    "xi",
    "h",
    "h0",
    "n_branch_plus",
    "n_branch_minus",
    "n_turn_min",
    "n_turn_max",
    "peak_low",
    "peak_high",
];

fn pn_state_rows(eig: &EigenDecomposition, jn: usize, p: &ModelParams) -> Result<Vec<Vec<f64>>> {
    par::try_map_range(jn, |j| -> Result<Vec<f64>> {
        let v = eig.vector(j);
        let e = eig.values[j];
        let n = mean_photon_number(v);
        let (h, h0) = eigenstate_branch_point(v, e, p)?;
        let ext = pn_extrema(n, p)?;
        let pn = pn_distribution(v);
        let (lo, hi) = pn_peaks(&pn, n.round() as usize).unwrap_or((0, 0));
        Ok(vec![
            j as f64,
            e,
            n,
            mean_sigma_z(v),
            participation_ratio(v)?,
            h,
            h0,
            largest_root(h, Branch::Plus, p)?,
            largest_root(h, Branch::Minus, p)?,
            ext.n_min,
            ext.n_max,
            lo as f64,
            hi as f64,
        ])
    })
}

pub(super) fn eigenstate_maps(ctx: &mut Ctx<'_>) -> Result<()> {
    let cfg = ctx.cfg;
    let runs: Vec<(String, ModelParams)> = if cfg.scenario == Scenario::Fig5 {
        cfg.list("f_values")?.iter().map(|&f| Ok((format!("f{}", fmt_num(f)), cfg.model_params(&[("f", f)])?))).collect::<Result<_>>()?
    } else {
        cfg.list("detunings")?
            .iter()
            .map(|&d| Ok((format!("detuning{}", fmt_num(d)), cfg.model_params(&[("omega0", cfg.omega0_for(d)?)])?)))
            .collect::<Result<_>>()?
    };
    for (ri, (label, p)) in runs.iter().enumerate() {
        let h = if cfg.scenario == Scenario::FigA2 { build_displaced(p)?.0 } else { build_rotating_frame(p)? };
        let eig = checked_eigh(&h)?;
        let jn = first_n(cfg, "j_max", eig.len())?;
        let n_max = first_n(cfg, "n_max", p.levels())?;
        ctx.check_stability(label, (0..jn).map(|j| eig.vector(j)))?;
        let extra = [("run", label.clone()), ("omega0", fmt_num(p.omega0)), ("f", fmt_num(p.f))];
        ctx.out.matrix(
            &format!("pn_{ri}.dat"),
            &extra,
            Axis { name: "j", values: &indices(jn) },
            Axis { name: "n", values: &indices(n_max) },
            &pn_rows(&eig, jn, n_max),
        )?;
        ctx.out.series(&format!("states_{ri}.tsv"), &extra, &PN_COLUMNS, &pn_state_rows(&eig, jn, p)?)?;
    }
    Ok(())
}

// --- two-branch relation ---------------------------------------------------

pub(super) fn branch_relation(ctx: &mut Ctx<'_>) -> Result<()> {
    let cfg = ctx.cfg;
    let p = cfg.model_params(&[])?;
    let eig = checked_eigh(&build_rotating_frame(&p)?)?;
    let jn = first_n(cfg, "j_max", eig.len())?;
    ctx.check_stability("rotating frame", (0..jn).map(|j| eig.vector(j)))?;
    let rows = par::try_map_range(jn, |j| -> Result<Vec<f64>> {
        let v = eig.vector(j);
        let (h, h0) = eigenstate_branch_point(v, eig.values[j], &p)?;
        let (b, dist) = nearest_branch(h, h0, &p)?;
        Ok(vec![j as f64, eig.values[j], h, h0, mean_sigma_z(v), b.sign(), dist])
    })?;
    ctx.out.series("states.tsv", &[], &["j", "energy", "h", "h0", "sigma_z", "branch", "residual"], &rows)?;
    let h0s = linspace(0.0, cfg.num("curve_h0_max")?, cfg.count("curve_samples")?);
    let curves = h0s
        .iter()
        .map(|&h0| {
            Ok(vec![h0, branch_energy(h0, &BranchSpec::new(Branch::Plus, &p))?, branch_energy(h0, &BranchSpec::new(Branch::Minus, &p))?])
        })
        .collect::<Result<Vec<_>>>()?;
    ctx.out.series("branches.tsv", &[], &["h0", "h_plus", "h_minus"], &curves)
}

fn markers(cfg: &ExperimentConfig) -> Result<Vec<(f64, f64)>> {
    let m = cfg.list("markers")?;
    if m.len() % 2 != 0 {
        return Err(Error::Config("markers must hold (h, h0) pairs".into()));
    }
    Ok(m.chunks(2).map(|c| (c[0], c[1])).collect())
}

/// Mode closest to `(h, h0)` in the max-relative-deviation sense.
pub fn nearest_marker(points: &[(f64, f64)], target: (f64, f64)) -> Option<(usize, f64)> {
    let rel = |(h, h0): (f64, f64)| ((h - target.0) / target.0).abs().max(((h0 - target.1) / target.1).abs());
    points.iter().enumerate().map(|(j, &pt)| (j, rel(pt))).min_by(|a, b| a.1.total_cmp(&b.1))
}

fn floquet_points(sol: &FloquetSolution, p: &ModelParams) -> Vec<(f64, f64)> {
    par::map_range(sol.len(), |j| floquet_h_h0(sol.mode(j), p))
}

pub(super) fn floquet_cloud(ctx: &mut Ctx<'_>) -> Result<()> {
    let cfg = ctx.cfg;
    let p = cfg.model_params(&[])?;
    let sol = floquet_modes(&p, Model::Full, cfg.num("dt")?)?;
    ctx.check_stability("floquet", (0..sol.len()).map(|j| sol.mode(j)))?;
    let pts = floquet_points(&sol, &p);
    let width = cfg.count("edge_width")?.min(p.levels());
    let rows = (0..sol.len())
        .map(|j| {
            let m = sol.mode(j);
            Ok(vec![
                j as f64,
                sol.quasienergies[j],
                sol.ordering_energy[j],
                pts[j].0,
                pts[j].1,
                mean_sigma_z(m),
                edge_probability(m, width)?,
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let extra = [("unitarity_defect", fmt_num(sol.unitarity_defect))];
    ctx.out.series("floquet.tsv", &extra, &["j", "quasienergy", "ordering_energy", "h", "h0", "sigma_z", "edge_probability"], &rows)?;
    let mrows = markers(cfg)?
        .into_iter()
        .map(|t| {
            let (j, d) = nearest_marker(&pts, t).unwrap_or((0, f64::NAN));
            vec![t.0, t.1, j as f64, pts[j].0, pts[j].1, d]
        })
        .collect::<Vec<_>>();
    ctx.out.series("markers.tsv", &[], &["h_target", "h0_target", "j", "h", "h0", "relative_distance"], &mrows)
}

// --- Floquet vs RWA participation ratio ------------------------------------

pub(super) fn floquet_compare(ctx: &mut Ctx<'_>) -> Result<()> {
    let cfg = ctx.cfg;
    for (di, &d) in cfg.list("detunings")?.iter().enumerate() {
        let p = cfg.model_params(&[("omega0", cfg.omega0_for(d)?)])?;
        let eig = checked_eigh(&build_rotating_frame(&p)?)?;
        let sol = floquet_modes(&p, Model::Full, cfg.num("dt")?)?;
        let jn = first_n(cfg, "j_max", eig.len())?;
        ctx.check_stability("rotating frame", (0..jn).map(|j| eig.vector(j)))?;
        ctx.check_stability("floquet", (0..jn).map(|k| sol.ordered_mode(k)))?;
        let rows = (0..jn)
            .map(|j| {
                let (v, m) = (eig.vector(j), sol.ordered_mode(j));
                Ok(vec![
                    j as f64,
                    participation_ratio(v)?,
                    participation_ratio(m)?,
                    eig.values[j],
                    sol.ordering_energy[sol.order[j]],
                    mean_photon_number(v),
                    mean_photon_number(m),
                ])
            })
            .collect::<Result<Vec<_>>>()?;
        ctx.out.series(
            &format!("xi_{di}.tsv"),
            &[("detuning", fmt_num(d)), ("omega0", fmt_num(p.omega0)), ("unitarity_defect", fmt_num(sol.unitarity_defect))],
            &["j", "xi_rwa", "xi_floquet", "energy_rwa", "ordering_energy", "mean_n_rwa", "mean_n_floquet"],
            &rows,
        )?;
    }
    Ok(())
}

// --- polarization vs photon number -----------------------------------------

/// `(⟨n⟩, ⟨σz⟩, energy)` of the first `jn` states of `model`, where
/// `model` is `full` (Floquet, ordering-energy order), `rotating` or
/// `displaced` (eigenvalue order).
fn polarization_points(model: &str, p: &ModelParams, jn: usize, dt: f64) -> Result<Vec<(f64, f64, f64)>> {
    let pick = |v: &[C64], e: f64| (mean_photon_number(v), mean_sigma_z(v), e);
    match model {
        "full" => {
            let sol = floquet_modes(p, Model::Full, dt)?;
            Ok((0..jn.min(sol.len())).map(|k| pick(sol.ordered_mode(k), sol.ordering_energy[sol.order[k]])).collect())
        }
        "rotating" | "displaced" => {
            let h = if model == "rotating" { build_rotating_frame(p)? } else { build_displaced(p)?.0 };
            let eig = checked_eigh(&h)?;
            Ok((0..jn.min(eig.len())).map(|j| pick(eig.vector(j), eig.values[j])).collect())
        }
        other => Err(Error::Config(format!("unknown model {other:?}; expected full, rotating or displaced"))),
    }
}

pub(super) fn polarization_vs_n(ctx: &mut Ctx<'_>) -> Result<()> {
    let cfg = ctx.cfg;
    let dt = cfg.num("dt")?;
    let jn = cfg.count("j_max")?;
    if cfg.scenario == Scenario::Fig8 {
        for model in cfg.names("models")? {
            for (di, &d) in cfg.list("detunings")?.iter().enumerate() {
                let p = cfg.model_params(&[("omega0", cfg.omega0_for(d)?)])?;
                let pts = polarization_points(&model, &p, jn, dt)?;
                let rows: Vec<Vec<f64>> = pts.iter().enumerate().map(|(j, &(n, s, e))| vec![j as f64, n, s, e]).collect();
                ctx.out.series(
                    &format!("polarization_{model}_{di}.tsv"),
                    &[("model", model.clone()), ("detuning", fmt_num(d)), ("omega0", fmt_num(p.omega0))],
                    &["j", "mean_n", "sigma_z", "energy"],
                    &rows,
                )?;
            }
        }
        let d = cfg.num("curve_detuning")?;
        let p = cfg.model_params(&[("omega0", cfg.omega0_for(d)?)])?;
        let curve = linspace(0.0, cfg.num("curve_n_max")?, cfg.count("curve_samples")?)
            .into_iter()
            .map(|n| {
                Ok(vec![
                    n,
                    polarization(n, &BranchSpec::new(Branch::Plus, &p))?.value,
                    polarization(n, &BranchSpec::new(Branch::Minus, &p))?.value,
                ])
            })
            .collect::<Result<Vec<_>>>()?;
        return ctx.out.series("polarization_curve.tsv", &[("detuning", fmt_num(d))], &["mean_n", "sigma_z_plus", "sigma_z_minus"], &curve);
    }
    let d = cfg.num("detuning")?;
    for (gi, &g) in cfg.list("g_values")?.iter().enumerate() {
        let p = cfg.model_params(&[("omega0", cfg.omega0_for(d)?), ("g", g)])?;
        let full = polarization_points("full", &p, jn, dt)?;
        let rwa = polarization_points("rotating", &p, jn, dt)?;
        let rows: Vec<Vec<f64>> = full.iter().zip(&rwa).enumerate().map(|(j, (a, b))| vec![j as f64, a.0, a.1, b.0, b.1]).collect();
        ctx.out.series(
            &format!("polarization_g{gi}.tsv"),
            &[("g", fmt_num(g)), ("detuning", fmt_num(d)), ("omega0", fmt_num(p.omega0))],
            &["j", "mean_n_floquet", "sigma_z_floquet", "mean_n_rwa", "sigma_z_rwa"],
            &rows,
        )?;
    }
    Ok(())
}

// --- Husimi images of Floquet modes ----------------------------------------

pub(super) fn floquet_husimi(ctx: &mut Ctx<'_>) -> Result<()> {
    let cfg = ctx.cfg;
    let p = cfg.model_params(&[])?;
    let sol = floquet_modes(&p, Model::Full, cfg.num("dt")?)?;
    let pts = floquet_points(&sol, &p);
    let samples = cfg.count("grid_samples")?;
    let mut summary = vec![];
    for (mi, t) in markers(cfg)?.into_iter().enumerate() {
        let (j, dist) = nearest_marker(&pts, t).unwrap_or((0, f64::NAN));
        let mode = sol.mode(j);
        let grid = PhaseSpaceGrid::default_for(mode, samples)?;
        let mut maxima = [0.0; 2];
        for s in 0..2 {
            let hm = husimi_map(mode, s, &grid)?;
            maxima[s] = hm.max;
            let qs: Vec<f64> = (0..grid.nq).map(|i| grid.q(i)).collect();
            let ps: Vec<f64> = (0..grid.np).map(|i| grid.p(i)).collect();
            ctx.out.matrix(
                &format!("husimi_{mi}_s{s}.dat"),
                &[("mode", j.to_string()), ("projector", s.to_string()), ("h", fmt_num(pts[j].0)), ("h0", fmt_num(pts[j].1))],
                Axis { name: "q", values: &qs },
                Axis { name: "p", values: &ps },
                &hm.values,
            )?;
        }
        summary.push(vec![mi as f64, j as f64, pts[j].0, pts[j].1, dist, maxima[0], maxima[1]]);
    }
    ctx.out.series("modes.tsv", &[], &["marker", "j", "h", "h0", "relative_distance", "max_s0", "max_s1"], &summary)
}

// --- coherent-state evolution ----------------------------------------------

fn parse_model(name: &str) -> Result<Model> {
    name.parse::<Model>().map_err(|_| Error::Config(format!("unknown model {name:?}")))
}

fn check_budget(cfg: &ExperimentConfig, cost: f64) -> Result<()> {
    let budget = cfg.num("budget")?;
    if cost > budget && !cfg.flag("allow_long")? {
        return Err(Error::Config(format!(
            "estimated cost {} exceeds budget {}; set allow_long=true or raise budget",
            fmt_num(cost),
            fmt_num(budget)
        )));
    }
    Ok(())
}

/// Split-step work estimate: `dim` columns, `steps` steps, about 50 flops
/// per amplitude per step.
fn step_cost(dim: usize, columns: usize, steps: f64) -> f64 {
    50.0 * dim as f64 * columns as f64 * steps
}

/// Phase-space point `(q, p)` of the drive-displaced fixed point
/// `α = −f/(2Δ0)`, the centre of the rings traced at stroboscopic times.
pub fn orbit_centre(p: &ModelParams) -> Result<(f64, f64)> {
    let shift = DisplacedFrameConstants::new(p)?.shift;
    Ok((2f64.sqrt() * shift, 0.0))
}

pub(super) fn coherent_evolution(ctx: &mut Ctx<'_>) -> Result<()> {
    let cfg = ctx.cfg;
    let p = cfg.model_params(&[])?;
    let dt = cfg.num("dt")?;
    let frames: Vec<usize> = cfg
        .list("frames")?
        .iter()
        .map(|&x| {
            if x >= 0.0 && x.fract() == 0.0 {
                Ok(x as usize)
            } else {
                Err(Error::Config(format!("frames must be whole periods, got {x}")))
            }
        })
        .collect::<Result<_>>()?;
    let every = cfg.count("series_every")?.max(1);
    let last = frames.iter().copied().max().unwrap_or(0);
    let models = cfg.names("models")?.iter().map(|m| parse_model(m)).collect::<Result<Vec<_>>>()?;
    let dim = p.dim();
    let steps = (p.period() / dt).ceil();
    let cost = models.len() as f64 * (step_cost(dim, dim, steps) + 8.0 * (dim * dim) as f64 * last as f64);
    check_budget(cfg, cost)?;

    let spin = cfg.count("spin")?;
    if spin > 1 {
        return Err(Error::Config(format!("spin must be 0 or 1, got {spin}")));
    }
    let osc = coherent_state(cfg.num("q0")?, cfg.num("p0")?, p.levels())?;
    let psi0 = StateVector::product(&osc, spin)?;
    let hw = cfg.num("grid_half_width")?;
    let n = cfg.count("grid_samples")?;
    let grid = PhaseSpaceGrid::new((-hw, hw), (-hw, hw), n, n)?;
    let qs: Vec<f64> = (0..n).map(|i| grid.q(i)).collect();
    let bins = cfg.count("angular_bins")?;
    let centre = orbit_centre(&p)?;

    let mut samples: Vec<usize> = (0..=last).step_by(every).chain(frames.iter().copied()).collect();
    samples.sort_unstable();
    samples.dedup();
    for model in models {
        let prop = one_period_propagator(&p, model, dt)?;
        let states = stroboscopic(&prop.u, &psi0, &samples)?;
        let rows = par::try_map_range(samples.len(), |i| -> Result<Vec<f64>> {
            let s = &states[i];
            let hm = husimi_map(s, spin, &grid)?;
            let ang = angular_profile(&hm, centre, bins)?;
            Ok(vec![
                samples[i] as f64,
                mean_photon_number(s),
                mean_sigma_z(s),
                spin_probability(s, 1),
                spin_probability(s, 0),
                ang.ring_radius,
                ang.entropy,
                s.norm_drift(),
            ])
        })?;
        ctx.out.series(
            &format!("dynamics_{}.tsv", model.name()),
            &[
                ("model", model.name().to_string()),
                ("unitarity_defect", fmt_num(prop.unitarity_defect)),
                ("ring_centre_q", fmt_num(centre.0)),
                ("ring_centre_p", fmt_num(centre.1)),
            ],
            &["period", "mean_n", "sigma_z", "p_up", "p_down", "ring_radius", "angular_entropy", "norm_drift"],
            &rows,
        )?;
        for (fi, &k) in frames.iter().enumerate() {
            let i = samples.binary_search(&k).expect("frame is sampled");
            let hm = husimi_map(&states[i], spin, &grid)?;
            ctx.out.matrix(
                &format!("frame_{}_{fi:04}.dat", model.name()),
                &[("model", model.name().to_string()), ("period", k.to_string()), ("projector", spin.to_string())],
                Axis { name: "q", values: &qs },
                Axis { name: "p", values: &qs },
                &hm.values,
            )?;
        }
    }
    Ok(())
}

// --- delocalization at resonance -------------------------------------------

pub(super) fn resonance_delocalization(ctx: &mut Ctx<'_>) -> Result<()> {
    let cfg = ctx.cfg;
    let g = cfg.num("g")?;
    let dt = cfg.num("dt")?;
    let t_max = cfg.num("t_max")?;
    let every = cfg.count("sample_every")?.max(1);
    let width = cfg.count("edge_width")?;
    let mults = cfg.list("f_multipliers")?;
    let models = cfg.names("models")?.iter().map(|m| parse_model(m)).collect::<Result<Vec<_>>>()?;
    let runs: Vec<(Model, f64)> = models.iter().flat_map(|&m| mults.iter().map(move |&k| (m, k))).collect();
    let probe = cfg.model_params(&[("f", 0.0)])?;
    check_budget(cfg, runs.len() as f64 * step_cost(probe.dim(), 1, (t_max / dt).ceil()))?;
    if width > probe.levels() {
        return Err(Error::Config(format!("edge_width {width} exceeds levels {}", probe.levels())));
    }
    let curves = par::try_map_range(runs.len(), |r| -> Result<Vec<(f64, f64)>> {
        let (model, k) = runs[r];
        let p = cfg.model_params(&[("f", k * g)])?;
        let psi = StateVector::basis(FockTruncation::new(p.levels())?, 1, 0)?;
        let mut out = vec![];
        let mut err = None;
        propagate_observed(&psi, &p, model, 0.0, t_max, dt, every, |t, s| match edge_probability(s, width) {
            Ok(pb) => out.push((t, pb)),
            Err(e) => err = Some(e),
        })?;
        match err {
            Some(e) => Err(e),
            None => Ok(out),
        }
    })?;
    for (r, c) in curves.iter().enumerate() {
        if c.iter().all(|&(_, pb)| pb == 0.0) {
            ctx.warn(format!("{} f = {} g: edge probability is exactly zero over the run", runs[r].0.name(), fmt_num(runs[r].1)));
        }
    }
    let names: Vec<String> = runs.iter().map(|(m, k)| format!("{}_f{}g", m.name(), k)).collect();
    let mut columns = vec!["t"];
    columns.extend(names.iter().map(String::as_str));
    let rows: Vec<Vec<f64>> =
        (0..curves[0].len()).map(|i| std::iter::once(curves[0][i].0).chain(curves.iter().map(|c| c[i].1)).collect()).collect();
    ctx.out.series("edge_probability.tsv", &[], &columns, &rows)
}
