//! One collision run: propagate the product state and evaluate the requested
//! spin configurations at every snapshot.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use twofermion::analysis::{ho_projection, EntanglementSeries, ProjectionMap};
use twofermion::faer::Mat;
use twofermion::linalg::{eigensolver_calls, outer_gram};
use twofermion::scattering::{
    build_potential, gaussian_packet, ho_eigenstate, ho_ground_state, product_initial,
    read_wavefunction_dump, write_wavefunction_dump, ScatteringConfig, SplitOperator,
};
use twofermion::spin::{spatial_blocks, BlockGrams, SpatialBlocks, SpinConfig};
use twofermion::{Error, Result, Symmetry, WaveFn2P, C64};

#[derive(Clone, Debug, Default)]
pub struct CollisionOptions {
    pub spins: Vec<SpinConfig>,
    pub vne: bool,
    /// Time the linear-entropy and von Neumann paths separately per snapshot
    /// (implies `vne`).
    pub time_paths: bool,
    pub projections: Vec<(usize, usize)>,
    pub snapshot_dir: Option<PathBuf>,
    pub checkpoint: Option<Checkpoint>,
}

/// Checkpoint every `every` snapshots to `<stem>.wf2p` and `<stem>.state`.
#[derive(Clone, Debug)]
pub struct Checkpoint {
    pub stem: PathBuf,
    pub every: usize,
    pub resume: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimingRow {
    pub t: f64,
    pub spin: SpinConfig,
    pub le_seconds: f64,
    pub vne_seconds: f64,
    /// Eigensolves observed while evaluating ε_L; always zero.
    pub le_eigensolves: u64,
}

#[derive(Clone, Debug)]
pub struct CollisionOutcome {
    pub series: Vec<EntanglementSeries>,
    pub timings: Vec<TimingRow>,
    pub norm_initial: f64,
    pub norm_final: f64,
    pub energy_initial: f64,
    pub energy_final: f64,
    pub projections_initial: Vec<ProjectionMap>,
    pub projections_final: Vec<ProjectionMap>,
    pub final_state: WaveFn2P,
    pub resumed_from_step: usize,
}

impl CollisionOutcome {
    pub fn series_for(&self, spin: SpinConfig) -> Option<&EntanglementSeries> {
        self.series.iter().find(|s| s.spin == spin)
    }

    pub fn norm_drift(&self) -> f64 {
        (self.norm_final - self.norm_initial).abs()
    }

    pub fn energy_drift(&self) -> f64 {
        ((self.energy_final - self.energy_initial) / self.energy_initial).abs()
    }
}

/// The incident packet (particle a) times the trap ground state (particle b).
pub fn initial_state(cfg: &ScatteringConfig) -> Result<WaveFn2P> {
    product_initial(&gaussian_packet(cfg)?, &ho_ground_state(cfg)?)
}

/// Gram blocks shared between configurations within one snapshot.
struct GramCache<'a> {
    blocks: &'a SpatialBlocks,
    aa: Option<Mat<C64>>,
    ss: Option<Mat<C64>>,
}

impl<'a> GramCache<'a> {
    fn new(blocks: &'a SpatialBlocks) -> Self {
        Self { blocks, aa: None, ss: None }
    }

    fn grams(&mut self, spin: SpinConfig) -> Result<BlockGrams> {
        let blocks = self.blocks;
        Ok(match spin {
            SpinConfig::SameSpin | SpinConfig::Triplet => {
                let g = self.aa.get_or_insert_with(|| outer_gram(blocks.a())).clone();
                BlockGrams { blocks: vec![(g, if spin == SpinConfig::Triplet { 2 } else { 1 })] }
            }
            SpinConfig::Singlet => {
                if self.ss.is_none() {
                    self.ss = Some(outer_gram(blocks.s()?));
                }
                BlockGrams { blocks: vec![(self.ss.clone().unwrap(), 2)] }
            }
            SpinConfig::OppositeNonFactorizable => BlockGrams::new(blocks, spin)?,
        })
    }
}

struct Recorder<'a> {
    opts: &'a CollisionOptions,
    series: Vec<EntanglementSeries>,
    timings: Vec<TimingRow>,
}

impl Recorder<'_> {
    fn record(&mut self, t: f64, psi: &WaveFn2P) -> Result<()> {
        let blocks = spatial_blocks(psi)?;
        let mut cache = GramCache::new(&blocks);
        for (k, &spin) in self.opts.spins.iter().enumerate() {
            let (le, vne) = if self.opts.time_paths {
                let calls = eigensolver_calls();
                let start = Instant::now();
                let le = BlockGrams::new(&blocks, spin)?.linear_entropy();
                let le_seconds = start.elapsed().as_secs_f64();
                let le_eigensolves = eigensolver_calls() - calls;
                let start = Instant::now();
                let vne = BlockGrams::new(&blocks, spin)?.von_neumann_entropy()?;
                let vne_seconds = start.elapsed().as_secs_f64();
                self.timings.push(TimingRow { t, spin, le_seconds, vne_seconds, le_eigensolves });
                (le, Some(vne))
            } else {
                let g = cache.grams(spin)?;
                let vne = if self.opts.vne { Some(g.von_neumann_entropy()?) } else { None };
                (g.linear_entropy(), vne)
            };
            self.series[k].push(t, le, vne)?;
        }
        Ok(())
    }
}

fn projections(cfg: &ScatteringConfig, psi: &WaveFn2P, levels: &[(usize, usize)]) -> Result<Vec<ProjectionMap>> {
    if levels.is_empty() {
        return Ok(Vec::new());
    }
    let anti = psi.projected(Symmetry::Antisymmetric)?;
    levels
        .iter()
        .map(|&(nx, ny)| ho_projection(&anti, &ho_eigenstate(cfg, nx, ny)?, (nx, ny)))
        .collect()
}

/// Runs the collision described by `cfg`; refuses to start if the step-size
/// bounds are violated.
pub fn run_collision(cfg: &ScatteringConfig, opts: &CollisionOptions) -> Result<CollisionOutcome> {
    cfg.validate()?;
    let v = build_potential(cfg);
    let mut op = SplitOperator::two_particle(cfg, &v)?;
    op.check_stability()?;
    let modes = cfg.grid.len();
    let mut opts_eff = opts.clone();
    opts_eff.vne |= opts.time_paths;
    let mut rec = Recorder {
        opts: &opts_eff,
        series: opts
            .spins
            .iter()
            .map(|&s| EntanglementSeries::new(s, cfg.kinetic_energy, modes, 2 * modes))
            .collect(),
        timings: Vec::new(),
    };
    if let Some(dir) = &opts.snapshot_dir {
        fs::create_dir_all(dir)?;
    }

    let resumed = match &opts.checkpoint {
        Some(cp) if cp.resume && checkpoint_exists(&cp.stem) => Some(load_checkpoint(cfg, cp, &mut rec)?),
        _ => None,
    };
    let (mut psi, start, norm_initial, energy_initial, projections_initial) = match resumed {
        Some((psi, step, norm, energy)) => {
            let proj = projections(cfg, &initial_state(cfg)?, &opts.projections)?;
            (psi, step, norm, energy, proj)
        }
        None => {
            let psi = initial_state(cfg)?;
            let norm = psi.norm_sqr();
            let energy = op.energy(&psi.amplitudes);
            let proj = projections(cfg, &psi, &opts.projections)?;
            snapshot(cfg, opts, &mut rec, 0, &psi, norm, energy)?;
            (psi, 0, norm, energy, proj)
        }
    };

    for s in start + 1..=cfg.n_steps {
        op.step(&mut psi.amplitudes);
        if s % cfg.snapshot_stride == 0 {
            snapshot(cfg, opts, &mut rec, s, &psi, norm_initial, energy_initial)?;
        }
    }

    let norm_final = psi.norm_sqr();
    let energy_final = op.energy(&psi.amplitudes);
    let projections_final = projections(cfg, &psi, &opts.projections)?;
    Ok(CollisionOutcome {
        series: rec.series,
        timings: rec.timings,
        norm_initial,
        norm_final,
        energy_initial,
        energy_final,
        projections_initial,
        projections_final,
        final_state: psi,
        resumed_from_step: start,
    })
}

fn snapshot(
    cfg: &ScatteringConfig,
    opts: &CollisionOptions,
    rec: &mut Recorder<'_>,
    step: usize,
    psi: &WaveFn2P,
    norm_initial: f64,
    energy_initial: f64,
) -> Result<()> {
    let t = step as f64 * cfg.dt;
    rec.record(t, psi)?;
    if let Some(dir) = &opts.snapshot_dir {
        let path = dir.join(format!("state_{step:06}.wf2p"));
        write_wavefunction_dump(BufWriter::new(fs::File::create(path)?), psi, t)?;
    }
    if let Some(cp) = &opts.checkpoint {
        let index = step / cfg.snapshot_stride;
        if cp.every > 0 && index > 0 && index.is_multiple_of(cp.every) && step < cfg.n_steps {
            save_checkpoint(cp, psi, t, step, norm_initial, energy_initial, &rec.series)?;
        }
    }
    Ok(())
}

fn with_ext(stem: &Path, ext: &str) -> PathBuf {
    let mut s = stem.as_os_str().to_owned();
    s.push(ext);
    PathBuf::from(s)
}

fn checkpoint_exists(stem: &Path) -> bool {
    with_ext(stem, ".wf2p").exists() && with_ext(stem, ".state").exists()
}

fn write_atomically(path: &Path, f: impl FnOnce(&mut BufWriter<fs::File>) -> Result<()>) -> Result<()> {
    let tmp = with_ext(path, ".tmp");
    {
        let mut w = BufWriter::new(fs::File::create(&tmp)?);
        f(&mut w)?;
        w.flush()?;
    }
    fs::rename(tmp, path)?;
    Ok(())
}

// Floats are written with `{:?}`, Rust's shortest round-trip form, so a
// resumed run continues from bit-identical data.
fn save_checkpoint(
    cp: &Checkpoint,
    psi: &WaveFn2P,
    t: f64,
    step: usize,
    norm_initial: f64,
    energy_initial: f64,
    series: &[EntanglementSeries],
) -> Result<()> {
    if let Some(dir) = cp.stem.parent() {
        fs::create_dir_all(dir)?;
    }
    write_atomically(&with_ext(&cp.stem, ".wf2p"), |w| write_wavefunction_dump(w, psi, t))?;
    write_atomically(&with_ext(&cp.stem, ".state"), |w| {
        writeln!(w, "step {step}")?;
        writeln!(w, "norm_initial {norm_initial:?}")?;
        writeln!(w, "energy_initial {energy_initial:?}")?;
        for s in series {
            for r in s.records() {
                let vne = r.vne.map_or("-".to_string(), |v| format!("{v:?}"));
                writeln!(w, "record {} {:?} {:?} {}", r.spin, r.t, r.le, vne)?;
            }
        }
        Ok(())
    })
}

fn load_checkpoint(
    cfg: &ScatteringConfig,
    cp: &Checkpoint,
    rec: &mut Recorder<'_>,
) -> Result<(WaveFn2P, usize, f64, f64)> {
    let dump = read_wavefunction_dump(BufReader::new(fs::File::open(with_ext(&cp.stem, ".wf2p"))?))?;
    if (dump.nx, dump.ny) != (cfg.grid.nx, cfg.grid.ny) {
        return Err(Error::Format("checkpoint grid does not match the configuration".into()));
    }
    let psi = WaveFn2P::new(cfg.grid, dump.amplitudes, Symmetry::None)?;
    let bad = |line: &str| Error::Format(format!("bad checkpoint line {line:?}"));
    let num = |s: Option<&str>, line: &str| -> Result<f64> { s.and_then(|v| v.parse().ok()).ok_or_else(|| bad(line)) };
    let (mut step, mut norm, mut energy) = (None, None, None);
    let reader = BufReader::new(fs::File::open(with_ext(&cp.stem, ".state"))?);
    for line in reader.lines() {
        let line = line?;
        let mut parts = line.split_whitespace();
        match parts.next() {
            Some("step") => step = parts.next().and_then(|v| v.parse::<usize>().ok()),
            Some("norm_initial") => norm = Some(num(parts.next(), &line)?),
            Some("energy_initial") => energy = Some(num(parts.next(), &line)?),
            Some("record") => {
                let spin: SpinConfig = parts.next().ok_or_else(|| bad(&line))?.parse()?;
                let t = num(parts.next(), &line)?;
                let le = num(parts.next(), &line)?;
                let vne = match parts.next() {
                    Some("-") => None,
                    v => Some(num(v, &line)?),
                };
                if let Some(s) = rec.series.iter_mut().find(|s| s.spin == spin) {
                    s.push(t, le, vne)?;
                }
            }
            _ => return Err(bad(&line)),
        }
    }
    let step = step.ok_or_else(|| Error::Format("checkpoint without step".into()))?;
    if ((dump.t - step as f64 * cfg.dt) / cfg.dt).abs() > 1e-6 {
        return Err(Error::Format("checkpoint time does not match its step".into()));
    }
    Ok((psi, step, norm.ok_or_else(|| bad("norm"))?, energy.ok_or_else(|| bad("energy"))?))
}
