//! Declarative run configuration: a small line-oriented config grammar,
//! the three preset benchmark cases, deterministic case execution, and the
//! mesh-convergence study.
//!
//! # Grammar
//!
//! `key = value` lines grouped under `[section]` headers.  `#` starts a
//! comment, blank lines are ignored, keys before the first header belong
//! to `[case]`, and on repeated keys the last occurrence wins.  The preset
//! expands first; explicit keys then override individual fields.
//!
//! | section | keys |
//! |---|---|
//! | `[case]` | `preset` (`1`, `2`, `3`, `custom`), `cylinder` (`C1`..`C5`), `refinement` (level), and the geometry overrides `r_core`, `r_outer` (m), `n_theta`, `core_rings`, `air_rings`, `grading`, `segments`, `layer` (m), `refine_layers` |
//! | `[excitation]` | `amplitude` (A), `frequency` (Hz), `periods`, `steps_per_period` |
//! | `[solver]` | `method` (`cg`, `direct`), `tol`, `max_iter`, `precond` (`none`, `diagonal`, `sweep`), `increment` |
//! | `[output]` | `records`, `errors` (booleans), `snapshots` (comma-separated times in s) |
//!
//! `segments` is a comma-separated list of `material length flag` triples,
//! e.g. `iron 0.002 eddy, copper 0.004 static`; lengths are in meters and
//! the material set is fixed (iron, copper, air).
//!
//! # Presets
//!
//! * preset 1: homogeneous iron cylinder of length 4 mm, eddy currents
//!   everywhere, refined isotropically (the axial layers halve with each
//!   level along with the disk spacing), analytic-error output enabled;
//! * preset 2: composite iron/copper/iron cylinder, eddy currents
//!   everywhere.  Cylinder `Cj` doubles every portion of `C(j-1)`, with
//!   `C1` = 2/4/2 mm, and refinement refines the disk only (fixed 1 mm
//!   layers);
//! * preset 3: identical to preset 2 except the copper segment is treated
//!   magneto-statically.
//!
//! A run writes into one directory named from the preset, cylinder and
//! refinement level: `records.csv` (one row per step), `errors.csv` (per
//! step relative field errors, preset 1 only), and `snapshots/step_*.vtk`
//! at the requested times.  Reruns of the same config produce identical
//! bytes.

use crate::analytic::EddyCylinder;
use crate::driver::{self, Excitation, Method, Model, RunResult, Schedule, SolverOpts, StepState};
use crate::mesh::{
    build_disk, classify, extrude, CylinderSpec, DiskParams, Domains, Material, MaterialTable,
    Mesh, Segment,
};
use crate::post::{
    cell_fields, log_log_slope, write_errors, write_records, write_vtk, VolumeError, WindowNorm,
};
use crate::solver::Precond;
use crate::{Error, Result, MU0};
use num_complex::Complex64;
use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

pub const SIGMA_IRON: f64 = 1.0e7;
pub const MU_R_IRON: f64 = 1500.0;
pub const SIGMA_COPPER: f64 = 6.0e7;
pub const MU_R_COPPER: f64 = 1.0;
/// Conductor core radius shared by all presets [m].
pub const R_CORE: f64 = 3.0e-3;
/// Outer radius of the air mantle [m].
pub const R_OUTER: f64 = 8.0e-3;
pub const FREQUENCY: f64 = 50.0;

/// Material ids of the fixed table.
pub const IRON: usize = 0;
pub const COPPER: usize = 1;
pub const AIR: usize = 2;

pub fn standard_materials() -> MaterialTable {
    MaterialTable {
        materials: vec![
            Material { name: "iron".into(), sigma: SIGMA_IRON, mu_r: MU_R_IRON },
            Material { name: "copper".into(), sigma: SIGMA_COPPER, mu_r: MU_R_COPPER },
            Material { name: "air".into(), sigma: 0.0, mu_r: 1.0 },
        ],
    }
}

fn standard_disk() -> DiskParams {
    // four graded core rings put the finest level-0 radial spacing at
    // 0.2 mm, inside the 0.58 mm iron skin depth
    DiskParams {
        r_core: R_CORE,
        r_outer: R_OUTER,
        n_theta: 12,
        core_rings: 4,
        air_rings: 2,
        grading: 0.5,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    One,
    Two,
    Three,
    Custom,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExcitationSpec {
    pub amplitude: f64,
    pub frequency: f64,
    pub periods: usize,
    pub steps_per_period: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverSpec {
    pub method: Method,
    pub tol: f64,
    pub max_iter: usize,
    pub precond: Precond,
    pub increment: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutputSpec {
    pub records: bool,
    /// Per-step comparison against the closed-form solution; only takes
    /// effect on the homogeneous case (preset 1).
    pub errors: bool,
    /// Times at which a VTK field snapshot is written.
    pub snapshots: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub preset: Preset,
    /// Cylinder index 1..=5 (presets 2 and 3).
    pub cylinder: usize,
    /// Mesh refinement level.
    pub refinement: u32,
    pub disk: DiskParams,
    pub spec: CylinderSpec,
    /// Halve the axial layer thickness with each refinement level instead
    /// of keeping it fixed.
    pub refine_layers: bool,
    pub materials: MaterialTable,
    pub excitation: ExcitationSpec,
    pub solver: SolverSpec,
    pub output: OutputSpec,
}

fn preset_config(preset: Preset, cylinder: usize, refinement: u32) -> RunConfig {
    let scale = (1u32 << (cylinder.saturating_sub(1)).min(8)) as f64;
    let (segments, refine_layers) = match preset {
        Preset::One => (vec![Segment { length: 4e-3, material: IRON, eddy: true }], true),
        Preset::Two | Preset::Three => (
            vec![
                Segment { length: 2e-3 * scale, material: IRON, eddy: true },
                Segment {
                    length: 4e-3 * scale,
                    material: COPPER,
                    eddy: preset == Preset::Two,
                },
                Segment { length: 2e-3 * scale, material: IRON, eddy: true },
            ],
            false,
        ),
        Preset::Custom => (Vec::new(), false),
    };
    RunConfig {
        preset,
        cylinder,
        refinement,
        disk: standard_disk(),
        spec: CylinderSpec { segments, layer: 1e-3, air_material: AIR },
        refine_layers,
        materials: standard_materials(),
        excitation: ExcitationSpec {
            amplitude: 100.0,
            frequency: FREQUENCY,
            periods: 7,
            steps_per_period: 50,
        },
        solver: SolverSpec {
            method: Method::Cg,
            tol: 1e-12,
            max_iter: 50_000,
            precond: Precond::SymmetricSweep,
            increment: true,
        },
        output: OutputSpec { records: true, errors: preset == Preset::One, snapshots: Vec::new() },
    }
}

impl RunConfig {
    /// Physical and numerical validation; called by [`parse_config`] and
    /// again by [`run_case`] before anything touches the file system.
    pub fn validate(&self) -> Result<()> {
        if !(1..=5).contains(&self.cylinder) {
            return Err(Error::Setup(format!("cylinder index {} outside C1..C5", self.cylinder)));
        }
        if self.spec.segments.is_empty() {
            return Err(Error::Setup("missing preset or geometry: no segments".into()));
        }
        let d = &self.disk;
        if !(d.r_core > 0.0) || !(d.r_outer > d.r_core) {
            return Err(Error::Setup(format!(
                "need 0 < r_core < r_outer, got {} and {}",
                d.r_core, d.r_outer
            )));
        }
        if d.n_theta < 3 || d.core_rings == 0 || d.air_rings == 0 {
            return Err(Error::Setup("need n_theta >= 3 and at least one ring per zone".into()));
        }
        if !(d.grading > 0.0 && d.grading <= 1.0) {
            return Err(Error::Setup(format!("grading {} outside (0, 1]", d.grading)));
        }
        if !(self.spec.layer > 0.0) {
            return Err(Error::Setup(format!("layer thickness {} must be positive", self.spec.layer)));
        }
        for (i, s) in self.spec.segments.iter().enumerate() {
            if !(s.length > 0.0) || !s.length.is_finite() {
                return Err(Error::Setup(format!("segment {i} length {} invalid", s.length)));
            }
            self.materials.get(s.material)?;
            let ratio = s.length / self.spec.layer;
            if (ratio - ratio.round()).abs() > 1e-9 * ratio.max(1.0) || ratio.round() < 1.0 {
                return Err(Error::Setup(format!(
                    "layer {} must divide segment {i} length {}",
                    self.spec.layer, s.length
                )));
            }
        }
        let e = &self.excitation;
        if !e.amplitude.is_finite() {
            return Err(Error::Setup(format!("excitation amplitude {} invalid", e.amplitude)));
        }
        if !(e.frequency > 0.0) || !e.frequency.is_finite() {
            return Err(Error::Setup(format!("frequency {} must be positive", e.frequency)));
        }
        if e.periods == 0 || e.steps_per_period == 0 {
            return Err(Error::Setup("need at least one period and one step per period".into()));
        }
        if !(self.solver.tol > 0.0) || !self.solver.tol.is_finite() {
            return Err(Error::Setup(format!("solver tol must be positive, got {}", self.solver.tol)));
        }
        if self.solver.max_iter == 0 {
            return Err(Error::Setup("solver max_iter must be positive".into()));
        }
        let t_end = e.periods as f64 / e.frequency;
        for &t in &self.output.snapshots {
            if !t.is_finite() || t < 0.0 || t > t_end * (1.0 + 1e-12) {
                return Err(Error::Setup(format!(
                    "snapshot time {t} outside the simulated interval [0, {t_end}]"
                )));
            }
        }
        Ok(())
    }

    /// Mesh and domain classification at the configured refinement level.
    pub fn build_mesh(&self) -> Result<(Mesh, Domains)> {
        let disk = build_disk(&self.disk, self.refinement)?;
        let mut spec = self.spec.clone();
        if self.refine_layers {
            spec.layer /= (1u64 << self.refinement.min(62)) as f64;
        }
        let mesh = extrude(&disk, &spec)?;
        let domains = classify(&mesh, &spec, &self.materials)?;
        Ok((mesh, domains))
    }

    pub fn excitation(&self) -> Result<Excitation> {
        Excitation::new(self.excitation.amplitude, self.excitation.frequency)
    }

    pub fn schedule(&self) -> Result<Schedule> {
        Schedule::periods(
            self.excitation.frequency,
            self.excitation.periods,
            self.excitation.steps_per_period,
        )
    }

    pub fn solver_opts(&self) -> SolverOpts {
        SolverOpts {
            method: self.solver.method,
            tol: self.solver.tol,
            max_iter: self.solver.max_iter,
            precond: self.solver.precond,
            increment: self.solver.increment,
        }
    }

    /// Closed-form skin-effect solution matching this configuration; the
    /// phasor carries the driving current `I1`, whose positive direction
    /// is out of port 1.
    pub fn reference_oracle(&self) -> Result<EddyCylinder> {
        let core = self.materials.get(self.spec.segments[0].material)?;
        let air = self.materials.get(self.spec.air_material)?;
        EddyCylinder::new(
            self.disk.r_core,
            core.sigma,
            core.mu_r * MU0,
            air.mu_r * MU0,
            2.0 * PI * self.excitation.frequency,
            Complex64::new(-self.excitation.amplitude, 0.0),
        )
    }

    /// Output directory name, e.g. `case2_C3_l1`.
    pub fn run_dir_name(&self) -> String {
        match self.preset {
            Preset::One => format!("case1_l{}", self.refinement),
            Preset::Two => format!("case2_C{}_l{}", self.cylinder, self.refinement),
            Preset::Three => format!("case3_C{}_l{}", self.cylinder, self.refinement),
            Preset::Custom => format!("custom_l{}", self.refinement),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Section {
    Case,
    Excitation,
    Solver,
    Output,
}

fn cfg_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Config { line, msg: msg.into() }
}

fn parse_f64(v: &str, ln: usize) -> Result<f64> {
    v.parse::<f64>().map_err(|e| cfg_err(ln, format!("bad number '{v}': {e}")))
}

fn parse_usize(v: &str, ln: usize) -> Result<usize> {
    v.parse::<usize>().map_err(|e| cfg_err(ln, format!("bad integer '{v}': {e}")))
}

fn parse_u32(v: &str, ln: usize) -> Result<u32> {
    v.parse::<u32>().map_err(|e| cfg_err(ln, format!("bad integer '{v}': {e}")))
}

fn parse_bool(v: &str, ln: usize) -> Result<bool> {
    match v {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(cfg_err(ln, format!("expected true or false, got '{v}'"))),
    }
}

fn parse_cylinder(v: &str, ln: usize) -> Result<usize> {
    let digits = v.strip_prefix('C').or_else(|| v.strip_prefix('c')).unwrap_or(v);
    let idx = parse_usize(digits, ln)?;
    if !(1..=5).contains(&idx) {
        return Err(cfg_err(ln, format!("cylinder {v} outside C1..C5")));
    }
    Ok(idx)
}

fn parse_segments(v: &str, table: &MaterialTable, ln: usize) -> Result<Vec<Segment>> {
    let mut segments = Vec::new();
    for part in v.split(',') {
        let fields: Vec<&str> = part.split_whitespace().collect();
        let [name, length, flag] = fields[..] else {
            return Err(cfg_err(ln, format!("segment '{}' is not 'material length eddy|static'", part.trim())));
        };
        let material = table
            .materials
            .iter()
            .position(|m| m.name.eq_ignore_ascii_case(name))
            .ok_or_else(|| cfg_err(ln, format!("unknown material '{name}'")))?;
        let eddy = match flag {
            "eddy" => true,
            "static" => false,
            _ => return Err(cfg_err(ln, format!("segment flag '{flag}' is not eddy or static"))),
        };
        segments.push(Segment { length: parse_f64(length, ln)?, material, eddy });
    }
    Ok(segments)
}

fn parse_snapshots(v: &str, ln: usize) -> Result<Vec<f64>> {
    if v.trim().is_empty() {
        return Ok(Vec::new());
    }
    v.split(',').map(|t| parse_f64(t.trim(), ln)).collect()
}

/// Parse and validate a config text.  The preset expands first, then every
/// explicit key overrides its field in file order.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut entries: Vec<(usize, Section, String, String)> = Vec::new();
    let mut section = Section::Case;
    for (idx, raw) in text.lines().enumerate() {
        let ln = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| cfg_err(ln, "unterminated section header"))?
                .trim();
            section = match name {
                "case" => Section::Case,
                "excitation" => Section::Excitation,
                "solver" => Section::Solver,
                "output" => Section::Output,
                _ => return Err(cfg_err(ln, format!("unknown section '[{name}]'"))),
            };
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| cfg_err(ln, "expected 'key = value'"))?;
        entries.push((ln, section, k.trim().to_ascii_lowercase(), v.trim().to_string()));
    }

    let find_last = |key: &str| {
        entries
            .iter()
            .rev()
            .find(|(_, s, k, _)| *s == Section::Case && k == key)
            .map(|(ln, _, _, v)| (*ln, v.as_str()))
    };
    let Some((pl, pv)) = find_last("preset") else {
        return Err(Error::Setup("missing preset or geometry".into()));
    };
    let preset = match pv {
        "1" => Preset::One,
        "2" => Preset::Two,
        "3" => Preset::Three,
        "custom" => Preset::Custom,
        _ => return Err(cfg_err(pl, format!("unknown preset '{pv}'"))),
    };
    let cylinder = match find_last("cylinder") {
        Some((ln, v)) => parse_cylinder(v, ln)?,
        None => 1,
    };
    let refinement = match find_last("refinement") {
        Some((ln, v)) => parse_u32(v, ln)?,
        None => 0,
    };
    let mut cfg = preset_config(preset, cylinder, refinement);

    for (ln, sec, key, val) in &entries {
        let (ln, val) = (*ln, val.as_str());
        match (sec, key.as_str()) {
            (Section::Case, "preset" | "cylinder" | "refinement") => {}
            (Section::Case, "r_core") => cfg.disk.r_core = parse_f64(val, ln)?,
            (Section::Case, "r_outer") => cfg.disk.r_outer = parse_f64(val, ln)?,
            (Section::Case, "n_theta") => cfg.disk.n_theta = parse_usize(val, ln)?,
            (Section::Case, "core_rings") => cfg.disk.core_rings = parse_usize(val, ln)?,
            (Section::Case, "air_rings") => cfg.disk.air_rings = parse_usize(val, ln)?,
            (Section::Case, "grading") => cfg.disk.grading = parse_f64(val, ln)?,
            (Section::Case, "segments") => {
                cfg.spec.segments = parse_segments(val, &cfg.materials, ln)?
            }
            (Section::Case, "layer") => cfg.spec.layer = parse_f64(val, ln)?,
            (Section::Case, "refine_layers") => cfg.refine_layers = parse_bool(val, ln)?,
            (Section::Excitation, "amplitude") => cfg.excitation.amplitude = parse_f64(val, ln)?,
            (Section::Excitation, "frequency") => cfg.excitation.frequency = parse_f64(val, ln)?,
            (Section::Excitation, "periods") => cfg.excitation.periods = parse_usize(val, ln)?,
            (Section::Excitation, "steps_per_period") => {
                cfg.excitation.steps_per_period = parse_usize(val, ln)?
            }
            (Section::Solver, "method") => {
                cfg.solver.method = match val {
                    "cg" => Method::Cg,
                    "direct" => Method::Direct,
                    _ => return Err(cfg_err(ln, format!("unknown method '{val}'"))),
                }
            }
            (Section::Solver, "tol") => cfg.solver.tol = parse_f64(val, ln)?,
            (Section::Solver, "max_iter") => cfg.solver.max_iter = parse_usize(val, ln)?,
            (Section::Solver, "precond") => {
                cfg.solver.precond = match val {
                    "none" => Precond::None,
                    "diagonal" => Precond::Diagonal,
                    "sweep" => Precond::SymmetricSweep,
                    _ => return Err(cfg_err(ln, format!("unknown preconditioner '{val}'"))),
                }
            }
            (Section::Solver, "increment") => cfg.solver.increment = parse_bool(val, ln)?,
            (Section::Output, "records") => cfg.output.records = parse_bool(val, ln)?,
            (Section::Output, "errors") => cfg.output.errors = parse_bool(val, ln)?,
            (Section::Output, "snapshots") => cfg.output.snapshots = parse_snapshots(val, ln)?,
            (sec, key) => {
                let name = match sec {
                    Section::Case => "case",
                    Section::Excitation => "excitation",
                    Section::Solver => "solver",
                    Section::Output => "output",
                };
                return Err(cfg_err(ln, format!("unknown key '{key}' in [{name}]")));
            }
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn fmt_f(v: f64) -> String {
    if v != 0.0 && v.abs() < 1e-3 {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

/// Canonical text form; `parse_config(&serialize(&c))` reproduces `c`
/// exactly because the full geometry is written alongside the preset tag.
pub fn serialize(cfg: &RunConfig) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "[case]");
    let preset = match cfg.preset {
        Preset::One => "1",
        Preset::Two => "2",
        Preset::Three => "3",
        Preset::Custom => "custom",
    };
    let _ = writeln!(out, "preset = {preset}");
    let _ = writeln!(out, "cylinder = C{}", cfg.cylinder);
    let _ = writeln!(out, "refinement = {}", cfg.refinement);
    let _ = writeln!(out, "r_core = {}", fmt_f(cfg.disk.r_core));
    let _ = writeln!(out, "r_outer = {}", fmt_f(cfg.disk.r_outer));
    let _ = writeln!(out, "n_theta = {}", cfg.disk.n_theta);
    let _ = writeln!(out, "core_rings = {}", cfg.disk.core_rings);
    let _ = writeln!(out, "air_rings = {}", cfg.disk.air_rings);
    let _ = writeln!(out, "grading = {}", fmt_f(cfg.disk.grading));
    let segs: Vec<String> = cfg
        .spec
        .segments
        .iter()
        .map(|s| {
            let name = &cfg.materials.materials[s.material].name;
            let flag = if s.eddy { "eddy" } else { "static" };
            format!("{name} {} {flag}", fmt_f(s.length))
        })
        .collect();
    let _ = writeln!(out, "segments = {}", segs.join(", "));
    let _ = writeln!(out, "layer = {}", fmt_f(cfg.spec.layer));
    let _ = writeln!(out, "refine_layers = {}", cfg.refine_layers);
    let _ = writeln!(out, "\n[excitation]");
    let _ = writeln!(out, "amplitude = {}", fmt_f(cfg.excitation.amplitude));
    let _ = writeln!(out, "frequency = {}", fmt_f(cfg.excitation.frequency));
    let _ = writeln!(out, "periods = {}", cfg.excitation.periods);
    let _ = writeln!(out, "steps_per_period = {}", cfg.excitation.steps_per_period);
    let _ = writeln!(out, "\n[solver]");
    let method = match cfg.solver.method {
        Method::Cg => "cg",
        Method::Direct => "direct",
    };
    let _ = writeln!(out, "method = {method}");
    let _ = writeln!(out, "tol = {}", fmt_f(cfg.solver.tol));
    let _ = writeln!(out, "max_iter = {}", cfg.solver.max_iter);
    let precond = match cfg.solver.precond {
        Precond::None => "none",
        Precond::Diagonal => "diagonal",
        Precond::SymmetricSweep => "sweep",
    };
    let _ = writeln!(out, "precond = {precond}");
    let _ = writeln!(out, "increment = {}", cfg.solver.increment);
    let _ = writeln!(out, "\n[output]");
    let _ = writeln!(out, "records = {}", cfg.output.records);
    let _ = writeln!(out, "errors = {}", cfg.output.errors);
    if !cfg.output.snapshots.is_empty() {
        let times: Vec<String> = cfg.output.snapshots.iter().map(|t| fmt_f(*t)).collect();
        let _ = writeln!(out, "snapshots = {}", times.join(", "));
    }
    out
}

/// Everything a finished case run produced.
pub struct CaseOutput {
    pub dir: PathBuf,
    pub cells: usize,
    pub run: RunResult,
    /// Time-integrated relative (j, B) errors over the final period, when
    /// the analytic comparison applies.
    pub window_err: Option<(f64, f64)>,
}

/// Execute one configured case and write its output directory.  All
/// validation and the whole solve happen before any file is created, so a
/// failing run leaves no partial output.
pub fn run_case(cfg: &RunConfig, out_root: &Path) -> Result<CaseOutput> {
    cfg.validate()?;
    let opts = cfg.solver_opts();
    let (mesh, domains) = cfg.build_mesh()?;
    let model = Model::build(mesh, domains, &opts)?;
    let excitation = cfg.excitation()?;
    let schedule = cfg.schedule()?;

    let vol = if cfg.preset == Preset::One && cfg.output.errors {
        Some(VolumeError::new(
            &model.mesh,
            &model.domains,
            &model.edges,
            &model.dc.phi,
            cfg.reference_oracle()?,
        ))
    } else {
        None
    };
    let t_end = schedule.end_time();
    let period = 1.0 / cfg.excitation.frequency;
    let mut win_j = WindowNorm::new(t_end - period, t_end);
    let mut win_b = WindowNorm::new(t_end - period, t_end);
    let mut err_rows: Vec<(f64, f64, f64)> = Vec::new();

    let snap_steps: BTreeSet<usize> = cfg
        .output
        .snapshots
        .iter()
        .map(|&t| ((t / schedule.dt).round() as usize).clamp(1, schedule.n_steps))
        .collect();
    let mut snaps: Vec<(usize, Vec<[f64; 3]>, Vec<[f64; 3]>)> = Vec::new();

    let mut observer = |st: &StepState| {
        if let Some(v) = &vol {
            let (nj, dj, nb, db) = v.at_step(st.t, st.i1, st.a_edges, st.da_edges);
            win_j.add(st.t, nj, dj);
            win_b.add(st.t, nb, db);
            err_rows.push((st.t, (nj / dj).sqrt(), (nb / db).sqrt()));
        }
        if snap_steps.contains(&st.step) {
            let (j, b) = cell_fields(
                &model.mesh,
                &model.domains,
                &model.edges,
                &model.dc.phi,
                st.i1,
                st.a_edges,
                st.da_edges,
            );
            snaps.push((st.step, j, b));
        }
    };
    let run = driver::run(&model, &excitation, &schedule, &opts, Some(&mut observer))?;

    let dir = out_root.join(cfg.run_dir_name());
    fs::create_dir_all(&dir)?;
    if cfg.output.records {
        write_records(&dir.join("records.csv"), &run.records)?;
    }
    if vol.is_some() {
        write_errors(&dir.join("errors.csv"), &err_rows)?;
    }
    if !snaps.is_empty() {
        let sd = dir.join("snapshots");
        fs::create_dir_all(&sd)?;
        for (step, j, b) in &snaps {
            write_vtk(&sd.join(format!("step_{step:05}.vtk")), &model.mesh, &model.domains, j, b)?;
        }
    }
    let window_err = vol.map(|_| (win_j.relative(), win_b.relative()));
    Ok(CaseOutput { dir, cells: model.mesh.n_cells(), run, window_err })
}

#[derive(Clone, Copy, Debug)]
pub struct StudyRow {
    pub level: u32,
    pub cells: usize,
    pub err_j: f64,
    pub err_b: f64,
}

#[derive(Clone, Debug)]
pub struct StudyResult {
    pub rows: Vec<StudyRow>,
    pub slope_j: Option<f64>,
    pub slope_b: Option<f64>,
}

fn write_study_files(
    out_root: &Path,
    rows: &[StudyRow],
    slopes: (Option<f64>, Option<f64>),
) -> Result<()> {
    let mut table = String::from("level, cells, err_j, err_b\n");
    for r in rows {
        let _ = writeln!(table, "{}, {}, {:.16e}, {:.16e}", r.level, r.cells, r.err_j, r.err_b);
    }
    fs::write(out_root.join("convergence.csv"), table)?;
    let s = format!(
        "slope_j, slope_b\n{:.6}, {:.6}\n",
        slopes.0.unwrap_or(f64::NAN),
        slopes.1.unwrap_or(f64::NAN)
    );
    fs::write(out_root.join("slopes.csv"), s)?;
    Ok(())
}

fn study_slopes(rows: &[StudyRow]) -> (Option<f64>, Option<f64>) {
    if rows.len() < 2 {
        return (None, None);
    }
    let n: Vec<f64> = rows.iter().map(|r| r.cells as f64).collect();
    let ej: Vec<f64> = rows.iter().map(|r| r.err_j).collect();
    let eb: Vec<f64> = rows.iter().map(|r| r.err_b).collect();
    (Some(log_log_slope(&n, &ej)), Some(log_log_slope(&n, &eb)))
}

/// Run the homogeneous case across refinement levels and fit the error
/// slopes against the cell count.  `runner` maps a per-level config to
/// `(cells, err_j, err_b)`; [`measure_case`] is the standard choice.  The
/// table file is rewritten after every level, so an aborted study leaves
/// the completed rows on disk.
pub fn convergence_study(
    base: &RunConfig,
    levels: &[u32],
    out_root: &Path,
    runner: &mut dyn FnMut(&RunConfig) -> Result<(usize, f64, f64)>,
) -> Result<StudyResult> {
    if base.preset != Preset::One {
        return Err(Error::Setup("convergence study needs the homogeneous case (preset 1)".into()));
    }
    if levels.is_empty() {
        return Err(Error::Setup("convergence study needs at least one level".into()));
    }
    fs::create_dir_all(out_root)?;
    let mut rows: Vec<StudyRow> = Vec::new();
    write_study_files(out_root, &rows, (None, None))?;
    for &level in levels {
        let mut cfg = base.clone();
        cfg.refinement = level;
        let (cells, err_j, err_b) = runner(&cfg)?;
        rows.push(StudyRow { level, cells, err_j, err_b });
        write_study_files(out_root, &rows, study_slopes(&rows))?;
    }
    let (slope_j, slope_b) = study_slopes(&rows);
    Ok(StudyResult { rows, slope_j, slope_b })
}

/// Standard study runner: executes the case and reports its windowed
/// field errors.
pub fn measure_case(cfg: &RunConfig, out_root: &Path) -> Result<(usize, f64, f64)> {
    let out = run_case(cfg, out_root)?;
    let (ej, eb) = out.window_err.ok_or_else(|| {
        Error::Setup("study case produced no error measurement (needs preset 1 with errors on)".into())
    })?;
    Ok((out.cells, ej, eb))
}
