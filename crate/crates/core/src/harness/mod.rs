//! Figure-reproduction scenarios, their configuration and data export.
//!
//! A run resolves an [`ExperimentConfig`], executes the scenario, writes its
//! data files into the output directory and finishes with `manifest.txt`,
//! which echoes the resolved configuration, warnings and the file list.

pub mod config;
pub mod io;
mod scenarios;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

pub use config::{ExperimentConfig, Value};
pub use scenarios::{nearest_marker, orbit_centre};

use crate::error::{Error, Result};
use crate::par;

/// Named scenarios, one per figure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scenario {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
    Fig10,
    Fig11,
    FigA1,
    FigA2,
    FigA3,
    FigA4,
}

const NAMES: [(Scenario, &str, &str); 15] = [
    (Scenario::Fig1, "fig1", "participation ratio vs detuning and eigenstate index"),
    (Scenario::Fig2, "fig2", "mean photon number vs detuning and eigenstate index"),
    (Scenario::Fig3, "fig3", "spin polarization vs detuning and eigenstate index"),
    (Scenario::Fig4, "fig4", "P(n) of rotating-frame eigenstates at four detunings"),
    (Scenario::Fig5, "fig5", "P(n) maxima vs drive strength with turning-point estimates"),
    (Scenario::Fig6, "fig6", "(h, h0) of rotating-frame eigenstates and the two branches"),
    (Scenario::Fig7, "fig7", "participation ratio: rotating-frame eigenstates vs Floquet modes"),
    (Scenario::Fig8, "fig8", "polarization vs photon number for three Hamiltonians"),
    (Scenario::Fig9, "fig9", "(h, h0) cloud of Floquet modes"),
    (Scenario::Fig10, "fig10", "Husimi functions of two marked Floquet modes"),
    (Scenario::Fig11, "fig11", "Husimi frames of an evolving coherent state"),
    (Scenario::FigA1, "figA1", "edge probability growth at resonance"),
    (Scenario::FigA2, "figA2", "P(n) of displaced-frame eigenstates at four detunings"),
    (Scenario::FigA3, "figA3", "polarization, Floquet vs rotating frame, small detuning"),
    (Scenario::FigA4, "figA4", "polarization, Floquet vs rotating frame, larger detuning"),
];

impl Scenario {
    pub fn all() -> impl Iterator<Item = Scenario> {
        NAMES.iter().map(|e| e.0)
    }

    pub fn name(self) -> &'static str {
        NAMES.iter().find(|e| e.0 == self).expect("listed").1
    }

    pub fn description(self) -> &'static str {
        NAMES.iter().find(|e| e.0 == self).expect("listed").2
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NAMES.iter().find(|e| e.1.eq_ignore_ascii_case(s)).map(|e| e.0).ok_or_else(|| Error::Config(format!("unknown scenario {s:?}")))
    }
}

/// What a finished run produced.
#[derive(Clone, Debug)]
pub struct RunSummary {
    pub out_dir: PathBuf,
    /// Data files relative to `out_dir`, in write order; the manifest is last.
    pub files: Vec<String>,
    pub warnings: Vec<String>,
}

/// Executes a resolved configuration.
pub fn run(cfg: &ExperimentConfig) -> Result<RunSummary> {
    if let Some(n) = cfg.threads {
        par::configure_threads(n).map_err(|e| Error::Config(format!("threads: {e}")))?;
    }
    let mut ctx = scenarios::Ctx { cfg, out: io::Output::new(&cfg.out_dir, cfg.header())?, warnings: vec![] };
    let default_levels = config::defaults(cfg.scenario)["levels"].clone();
    if let (Value::Num(d), Ok(l)) = (default_levels, cfg.num("levels")) {
        if l < d {
            ctx.warnings.push(format!("levels = {l} is below the default {d}; results may not be converged in the truncation"));
        }
    }
    use Scenario::*;
    match cfg.scenario {
        Fig1 | Fig2 | Fig3 => scenarios::sweep_detuning(&mut ctx)?,
        Fig4 | Fig5 | FigA2 => scenarios::eigenstate_maps(&mut ctx)?,
        Fig6 => scenarios::branch_relation(&mut ctx)?,
        Fig7 => scenarios::floquet_compare(&mut ctx)?,
        Fig8 | FigA3 | FigA4 => scenarios::polarization_vs_n(&mut ctx)?,
        Fig9 => scenarios::floquet_cloud(&mut ctx)?,
        Fig10 => scenarios::floquet_husimi(&mut ctx)?,
        Fig11 => scenarios::coherent_evolution(&mut ctx)?,
        FigA1 => scenarios::resonance_delocalization(&mut ctx)?,
    }
    let mut manifest = cfg.header();
    manifest.push(("parallel".into(), cfg!(feature = "parallel").to_string()));
    manifest.push(("threads".into(), par::threads().to_string()));
    manifest.push(("warnings".into(), ctx.warnings.len().to_string()));
    manifest.extend(ctx.warnings.iter().enumerate().map(|(i, w)| (format!("warning.{i}"), w.clone())));
    manifest.extend(ctx.out.files().iter().enumerate().map(|(i, f)| (format!("file.{i}"), f.clone())));
    io::write_manifest(&cfg.out_dir.join("manifest.txt"), &manifest)?;
    let mut files = ctx.out.files().to_vec();
    files.push("manifest.txt".into());
    Ok(RunSummary { out_dir: cfg.out_dir.clone(), files, warnings: ctx.warnings })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scenario_names_round_trip() {
        for s in Scenario::all() {
            assert_eq!(s.name().parse::<Scenario>().unwrap(), s);
        }
        assert_eq!("FIGA1".parse::<Scenario>().unwrap(), Scenario::FigA1);
        assert!(matches!("fig12".parse::<Scenario>(), Err(Error::Config(_))));
        assert_eq!(Scenario::all().count(), 15);
    }

    #[test]
    fn small_fig6_run_writes_manifest_and_data() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = ExperimentConfig::new(Scenario::Fig6, dir.path());
        cfg.apply_overrides(&["levels=40", "j_max=20"]).unwrap();
        let sum = run(&cfg).unwrap();
        assert_eq!(sum.files, vec!["states.tsv", "branches.tsv", "manifest.txt"]);
        let m = io::read_manifest(&dir.path().join("manifest.txt")).unwrap();
        assert!(m.iter().any(|(k, v)| k == "param.levels" && v.starts_with("4.0")));
        let s = io::read_series(&dir.path().join("states.tsv")).unwrap();
        assert_eq!(s.rows.len(), 20);
        assert!(sum.warnings.iter().any(|w| w.contains("below the default")));
    }
}
