//! The three run modes and their output files.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use twofermion::analysis::{
    formation_time_of, stationary_of, write_series_csv, EntanglementSeries,
};
use twofermion::io::fmt_sig;
use twofermion::spin::SpinConfig;
use twofermion::toy::{sweep_alpha, write_sweep_csv};
use twofermion::{Error, Result};

use crate::collision::{run_collision, Checkpoint, CollisionOptions, CollisionOutcome};
use crate::config::{config_hash, RunConfig};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    ToySweep,
    Scatter,
    Compare,
}

impl Mode {
    pub fn label(self) -> &'static str {
        match self {
            Mode::ToySweep => "toy-sweep",
            Mode::Scatter => "scatter",
            Mode::Compare => "compare",
        }
    }
}

/// Everything a run needs: the parsed configuration, its source text (for the
/// hash) and where to write.
#[derive(Clone, Debug)]
pub struct RunManifest {
    pub mode: Mode,
    pub config: RunConfig,
    pub config_text: String,
    pub config_path: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub snapshots: bool,
    pub resume: bool,
}

impl RunManifest {
    pub fn from_text(mode: Mode, text: &str, out_dir: impl Into<PathBuf>) -> Result<Self> {
        let config = RunConfig::parse(text)?;
        config.validate(mode != Mode::ToySweep)?;
        Ok(Self {
            mode,
            config,
            config_text: text.to_string(),
            config_path: None,
            out_dir: out_dir.into(),
            snapshots: false,
            resume: false,
        })
    }

    pub fn hash(&self) -> String {
        config_hash(&self.config_text)
    }

    fn header(&self) -> String {
        format!("# twofermion {VERSION} mode={} config_sha256={}\n", self.mode.label(), self.hash())
    }

    fn create(&self, name: &str) -> Result<BufWriter<fs::File>> {
        fs::create_dir_all(&self.out_dir)?;
        let mut w = BufWriter::new(fs::File::create(self.out_dir.join(name))?);
        w.write_all(self.header().as_bytes())?;
        Ok(w)
    }

    fn metadata(&self, name: &str, entries: &[(&str, String)]) -> Result<()> {
        let mut w = self.create(name)?;
        writeln!(w, "version = \"{VERSION}\"")?;
        writeln!(w, "mode = \"{}\"", self.mode.label())?;
        writeln!(w, "config_sha256 = \"{}\"", self.hash())?;
        if let Some(p) = &self.config_path {
            writeln!(w, "config_path = {:?}", p.display().to_string())?;
        }
        for (k, v) in entries {
            writeln!(w, "{k} = {v}")?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Files written by a run, relative to the output directory.
pub type Written = Vec<PathBuf>;

pub fn run(manifest: &RunManifest) -> Result<Written> {
    twofermion::linalg::set_threads(manifest.config.numerics.threads);
    match manifest.mode {
        Mode::ToySweep => run_toy_sweep(manifest),
        Mode::Scatter => run_scatter(manifest).map(|(w, _)| w),
        Mode::Compare => run_compare(manifest).map(|(w, _)| w),
    }
}

pub fn run_toy_sweep(manifest: &RunManifest) -> Result<Written> {
    let run = &manifest.config.run;
    if run.toy_n_pairs < 2 {
        return Err(Error::InvalidConfig(format!(
            "run.toy_n_pairs = {} but the normalized von Neumann entropy needs at least 2 pairs",
            run.toy_n_pairs
        )));
    }
    if run.toy_points < 2 {
        return Err(Error::InvalidConfig("run.toy_points must be at least 2".into()));
    }
    let rows = sweep_alpha(run.toy_n_pairs, run.toy_points)?;
    let mut w = manifest.create("toy_sweep.csv")?;
    write_sweep_csv(&mut w, &rows)?;
    w.flush()?;
    manifest.metadata(
        "toy_sweep.meta.toml",
        &[("n_pairs", run.toy_n_pairs.to_string()), ("points", run.toy_points.to_string())],
    )?;
    Ok(vec!["toy_sweep.csv".into(), "toy_sweep.meta.toml".into()])
}

fn energy_tag(ek: f64) -> String {
    format!("{}meV", fmt_sig(ek, 6))
}

/// Plateau and formation time of `values`, or why they are unavailable.
pub struct Summary {
    pub stationary: f64,
    pub tail_std: f64,
    pub settled: bool,
    pub formation_time: Option<f64>,
}

pub fn summarize(times: &[f64], values: &[f64], tail_fraction: f64, delta: f64) -> Result<Summary> {
    let st = stationary_of(values, tail_fraction)?;
    Ok(Summary {
        stationary: st.mean,
        tail_std: st.std,
        settled: st.settled,
        formation_time: formation_time_of(times, values, st.mean, delta).ok(),
    })
}

fn write_summary<W: Write>(w: &mut W, label: &str, s: &Summary) -> Result<()> {
    writeln!(
        w,
        "# summary measure={label} stationary={} tail_std={} settled={} formation_time_fs={}",
        fmt_sig(s.stationary, 12),
        fmt_sig(s.tail_std, 12),
        s.settled,
        s.formation_time.map_or("not_converged".to_string(), |t| fmt_sig(t, 12))
    )?;
    Ok(())
}

fn collision_options(manifest: &RunManifest, spins: Vec<SpinConfig>, vne: bool, time_paths: bool, ek: f64) -> CollisionOptions {
    let run = &manifest.config.run;
    let tag = energy_tag(ek);
    CollisionOptions {
        spins,
        vne,
        time_paths,
        projections: run.projections.iter().map(|p| (p[0], p[1])).collect(),
        snapshot_dir: manifest
            .snapshots
            .then(|| manifest.out_dir.join(format!("snapshots_{}_{tag}", manifest.mode.label()))),
        checkpoint: (run.checkpoint_every > 0).then(|| Checkpoint {
            stem: manifest.out_dir.join(format!("checkpoint_{}_{tag}", manifest.mode.label())),
            every: run.checkpoint_every,
            resume: manifest.resume,
        }),
    }
}

fn write_series(manifest: &RunManifest, name: &str, series: &EntanglementSeries) -> Result<()> {
    let run = &manifest.config.run;
    let mut w = manifest.create(name)?;
    write_series_csv(&mut w, series)?;
    if series.len() >= 10 {
        write_summary(&mut w, "le", &summarize(&series.times(), &series.le(), run.tail_fraction, run.formation_delta)?)?;
        if series.records().iter().all(|r| r.vne.is_some()) {
            let times = series.times();
            let le_n = series.le_normalized()?;
            let vne_n = series.vne_normalized()?;
            write_summary(&mut w, "le_norm", &summarize(&times, &le_n, run.tail_fraction, run.formation_delta)?)?;
            write_summary(&mut w, "vne_norm", &summarize(&times, &vne_n, run.tail_fraction, run.formation_delta)?)?;
        }
    } else {
        writeln!(w, "# summary unavailable: fewer than 10 snapshots")?;
    }
    w.flush()?;
    Ok(())
}

fn write_collision(manifest: &RunManifest, out: &CollisionOutcome, ek: f64, written: &mut Written) -> Result<()> {
    let mode = manifest.mode.label();
    let tag = energy_tag(ek);
    for s in &out.series {
        let name = format!("{mode}_{tag}_{}.csv", s.spin);
        write_series(manifest, &name, s)?;
        written.push(name.into());
    }
    for (when, maps) in [("initial", &out.projections_initial), ("final", &out.projections_final)] {
        for p in maps {
            let name = format!("{mode}_{tag}_projection_{}{}_{when}.csv", p.n.0, p.n.1);
            let mut w = manifest.create(&name)?;
            p.write_csv(&mut w)?;
            w.flush()?;
            written.push(name.into());
        }
    }
    let cfg = manifest.config.scattering(ek)?;
    let name = format!("{mode}_{tag}.meta.toml");
    manifest.metadata(
        &name,
        &[
            ("kinetic_energy_mev", format!("{ek:?}")),
            ("dt_fs", format!("{:?}", cfg.dt)),
            ("n_steps", cfg.n_steps.to_string()),
            ("snapshot_stride", cfg.snapshot_stride.to_string()),
            ("packet_sigma_nm", format!("{:?}", cfg.packet_sigma)),
            ("packet_center_nm", format!("[{:?}, {:?}]", cfg.packet_center[0], cfg.packet_center[1])),
            ("coulomb_softening_nm", format!("{:?}", cfg.coulomb_softening)),
            ("norm_drift", format!("{:?}", out.norm_drift())),
            ("energy_initial_mev", format!("{:?}", out.energy_initial)),
            ("energy_final_mev", format!("{:?}", out.energy_final)),
            ("energy_drift_relative", format!("{:?}", out.energy_drift())),
        ],
    )?;
    written.push(name.into());
    Ok(())
}

pub fn run_scatter(manifest: &RunManifest) -> Result<(Written, Vec<CollisionOutcome>)> {
    let spins = manifest.config.spins()?;
    let mut written = Vec::new();
    let mut outcomes = Vec::new();
    for &ek in &manifest.config.packet.kinetic_energies_mev {
        let cfg = manifest.config.scattering(ek)?;
        let opts = collision_options(manifest, spins.clone(), manifest.config.run.vne, false, ek);
        let out = run_collision(&cfg, &opts)?;
        write_collision(manifest, &out, ek, &mut written)?;
        outcomes.push(out);
    }
    Ok((written, outcomes))
}

pub const COMPARE_SPINS: [SpinConfig; 2] = [SpinConfig::SameSpin, SpinConfig::OppositeNonFactorizable];
pub const TIMING_HEADER: &str = "t_fs,spin,le_seconds,vne_seconds,le_eigensolves";

/// Both normalized measures for the same-spin and non-factorizable
/// configurations, with per-snapshot timings of the two evaluation paths.
/// The timing CSV is a wall-clock measurement and varies between runs.
pub fn run_compare(manifest: &RunManifest) -> Result<(Written, Vec<CollisionOutcome>)> {
    let mut written = Vec::new();
    let mut outcomes = Vec::new();
    for &ek in &manifest.config.packet.kinetic_energies_mev {
        let cfg = manifest.config.scattering(ek)?;
        let opts = collision_options(manifest, COMPARE_SPINS.to_vec(), true, true, ek);
        let out = run_collision(&cfg, &opts)?;
        write_collision(manifest, &out, ek, &mut written)?;
        let name = format!("compare_{}_timing.csv", energy_tag(ek));
        write_timings(manifest, &name, &out)?;
        written.push(name.into());
        outcomes.push(out);
    }
    Ok((written, outcomes))
}

fn write_timings(manifest: &RunManifest, name: &str, out: &CollisionOutcome) -> Result<()> {
    let mut w = manifest.create(name)?;
    writeln!(w, "{TIMING_HEADER}")?;
    for r in &out.timings {
        writeln!(w, "{},{},{:e},{:e},{}", fmt_sig(r.t, 12), r.spin, r.le_seconds, r.vne_seconds, r.le_eigensolves)?;
    }
    w.flush()?;
    Ok(())
}
