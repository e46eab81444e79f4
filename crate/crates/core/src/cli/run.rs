//! Runs one configured experiment and writes its outputs.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::combine::{combine, Family};
use crate::diag::{entropy_functionals, error_norms, error_reports};
use crate::grid::{GridField, GridGeometry};
use crate::models::{normalize_initial, stationary_state, ConservationProblem, VbProblem, VmProblem, VmState};
use crate::timestep::{evolve_family, Evolve, StepPolicy};
use crate::Result;

use super::config::{ExampleId, GridMode, Physics, RunConfig};
use super::dump::write_dump;
use super::table::{emit_table, sci, TableRow};

/// Finest-grid solution at one output time.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub time: f64,
    pub field: GridField,
}

/// Scalar diagnostics at one output time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesRow {
    pub time: f64,
    pub mass: f64,
    pub min: f64,
    pub max: f64,
    pub h2: Option<f64>,
    pub hlog: Option<f64>,
}

pub const SERIES_HEADER: &str = "t,mass,min,max,h2,hlog";

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub nr: usize,
    /// Initial state first, then one entry per output time.
    pub series: Vec<SeriesRow>,
    pub snapshots: Vec<Snapshot>,
    /// Time spent inside the integrator only.
    pub wall_seconds: f64,
    pub steps: usize,
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub rows: Vec<TableRow>,
    pub trajectory: Trajectory,
    pub files: Vec<PathBuf>,
}

fn build_family<S, F>(mode: GridMode, finest: GridGeometry, init: F) -> Result<Family<S>>
where
    F: Fn(GridGeometry) -> Result<S>,
{
    match mode {
        GridMode::Sparse => Family::sparse(finest, init),
        GridMode::Single => Family::single(finest, init),
    }
}

fn finest_field<S, X>(cfg: &RunConfig, family: &Family<S>, extract: X) -> Result<GridField>
where
    X: Fn(&S) -> &GridField,
{
    match cfg.grid_mode {
        GridMode::Single => Ok(extract(family.states().next().expect("one grid")).clone()),
        GridMode::Sparse => {
            let set = family.map(|_, s| extract(s).clone());
            combine(&set, cfg.prolongation, cfg.epsilon)
        }
    }
}

struct Marcher<'a> {
    cfg: &'a RunConfig,
    reference: Option<GridField>,
}

impl Marcher<'_> {
    fn row(&self, time: f64, u: &GridField) -> Result<SeriesRow> {
        let (h2, hlog) = match &self.reference {
            Some(m) => {
                let (a, b) = entropy_functionals(u, m)?;
                (Some(a), Some(b))
            }
            None => (None, None),
        };
        Ok(SeriesRow {
            time,
            mass: u.integrate(),
            min: u.min(),
            max: u.max(),
            h2,
            hlog,
        })
    }

    fn march<P, X>(&self, nr: usize, mut family: Family<P::State>, problem: &P, extract: X) -> Result<Trajectory>
    where
        P: Evolve,
        X: Fn(&P::State) -> &GridField + Copy,
    {
        let cfg = self.cfg;
        let policy = StepPolicy::new(cfg.dt_mode, cfg.cfl, family.finest_geometry().spacings())?;
        let mut t = 0.0;
        let mut wall = 0.0;
        let mut steps = 0;
        let u0 = finest_field(cfg, &family, extract)?;
        let mut series = vec![self.row(0.0, &u0)?];
        let mut snapshots = Vec::new();
        for &target in &cfg.output_times() {
            if target > t {
                let start = Instant::now();
                let log = evolve_family(&mut family, problem, &policy, t, target)?;
                wall += start.elapsed().as_secs_f64();
                steps += log.dts.len();
                t = target;
            }
            let u = if t == 0.0 { u0.clone() } else { finest_field(cfg, &family, extract)? };
            series.push(self.row(t, &u)?);
            snapshots.push(Snapshot { time: t, field: u });
        }
        Ok(Trajectory {
            nr,
            series,
            snapshots,
            wall_seconds: wall,
            steps,
        })
    }
}

/// Evolves the configured example on a root grid of `nr` cells per
/// direction and records the finest-grid solution at every output time.
pub fn simulate(cfg: &RunConfig, nr: usize) -> Result<Trajectory> {
    let finest = cfg.finest_geometry(nr)?;
    let weno = cfg.weno();
    match cfg.example.physics() {
        Physics::Scalar { law, initial } => {
            let family = build_family(cfg.grid_mode, finest, |g| Ok(initial.restrict(g)))?;
            let problem = ConservationProblem { law, weno };
            Marcher { cfg, reference: None }.march(nr, family, &problem, |s: &GridField| s)
        }
        Physics::Kinetic(spec) => {
            let shape = initial_shape(cfg.example);
            let family = build_family(cfg.grid_mode, finest.clone(), |g| {
                normalize_initial(GridField::restrict(g, &shape))
            })?;
            let reference = Some(stationary_state(&spec, finest)?);
            let problem = VbProblem { spec, weno };
            Marcher { cfg, reference }.march(nr, family, &problem, |s: &GridField| s)
        }
        Physics::Maxwell(spec) => {
            spec.validate()?;
            let family = build_family(cfg.grid_mode, finest, |g| Ok(spec.initial_state(g)))?;
            let problem = VmProblem { spec, weno };
            Marcher { cfg, reference: None }.march(nr, family, &problem, |s: &VmState| &s.f)
        }
    }
}

/// Unnormalised initial distributions of the relaxation examples.
fn initial_shape(example: ExampleId) -> impl Fn(&[f64]) -> f64 + Sync + Send {
    move |p: &[f64]| {
        let r2: f64 = p.iter().map(|a| a * a).sum();
        let gauss = (-0.5 * r2).exp();
        match example {
            ExampleId::Ex5b => (0.5 * p[0] * p[0]).sin().powi(2) * (0.5 * p[1] * p[1]).cos().powi(2) * gauss,
            _ => (0.5 * p[0] * p[0]).sin().powi(2) * gauss,
        }
    }
}

/// Convergence rows for the smooth examples, one per refinement.
pub fn convergence_table(cfg: &RunConfig) -> Result<(Vec<TableRow>, Trajectory)> {
    let Physics::Scalar { law, initial } = cfg.example.physics() else {
        return Err(crate::Error::InvalidConfig {
            field: "example".into(),
            reason: format!("{} has no exact solution", cfg.example),
        });
    };
    let mut norms = Vec::new();
    let mut walls = Vec::new();
    let mut grids = Vec::new();
    let mut last = None;
    for j in 0..cfg.refinements {
        let nr = cfg.nr << j;
        let traj = simulate(cfg, nr)?;
        let u = &traj.snapshots.last().expect("final snapshot").field;
        let exact = initial.exact_field(&law, u.geometry().clone(), cfg.final_time)?;
        norms.push(error_norms(u, &exact)?);
        walls.push(traj.wall_seconds);
        grids.push(u.geometry().cells(0));
        last = Some(traj);
    }
    let rows = error_reports(&norms)
        .into_iter()
        .zip(walls)
        .zip(grids)
        .map(|((report, wall_seconds), grid)| TableRow {
            grid,
            report,
            wall_seconds,
        })
        .collect();
    Ok((rows, last.expect("at least one refinement")))
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| sci(x, 10)).unwrap_or_default()
}

pub fn emit_series(rows: &[SeriesRow]) -> String {
    let mut s = format!("{SERIES_HEADER}\n");
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.time,
            sci(r.mass, 10),
            sci(r.min, 10),
            sci(r.max, 10),
            opt(r.h2),
            opt(r.hlog)
        ));
    }
    s
}

/// Values along direction 0 through the middle of the other directions.
pub fn emit_cut(u: &GridField) -> String {
    let g = u.geometry();
    let mut idx: Vec<usize> = (0..g.dim()).map(|k| g.points(k) / 2).collect();
    let mut s = String::from("x,value\n");
    for i in 0..g.points(0) {
        idx[0] = i;
        s.push_str(&format!("{},{}\n", g.coordinate(0, i), sci(u.values()[idx.as_slice()], 10)));
    }
    s
}

/// Values on the plane of directions 0 and 1 through the middle of the rest.
pub fn emit_plane(u: &GridField) -> String {
    let g = u.geometry();
    let mut idx: Vec<usize> = (0..g.dim()).map(|k| g.points(k) / 2).collect();
    let mut s = String::from("x0,x1,value\n");
    if g.dim() < 2 {
        return s;
    }
    for i in 0..g.points(0) {
        for j in 0..g.points(1) {
            idx[0] = i;
            idx[1] = j;
            s.push_str(&format!(
                "{},{},{}\n",
                g.coordinate(0, i),
                g.coordinate(1, j),
                sci(u.values()[idx.as_slice()], 10)
            ));
        }
    }
    s
}

pub const META_FILE: &str = "run.csv";

pub fn snapshot_name(k: usize) -> String {
    format!("snapshot_{k:03}.bin")
}

fn emit_meta(cfg: &RunConfig, traj: &Trajectory) -> String {
    let extents = traj
        .snapshots
        .last()
        .map(|s| s.field.geometry().shape())
        .unwrap_or_default()
        .iter()
        .map(|n| n.to_string())
        .collect::<Vec<_>>()
        .join("x");
    let times = traj.snapshots.iter().map(|s| s.time.to_string()).collect::<Vec<_>>().join(";");
    [
        "key,value".to_string(),
        format!("example,{}", cfg.example),
        format!("grid_mode,{}", cfg.grid_mode),
        format!("nr,{}", traj.nr),
        format!("nl,{}", cfg.nl),
        format!("scheme,{}", cfg.scheme),
        format!("prolongation,{}", cfg.prolongation),
        format!("epsilon,{}", cfg.epsilon),
        format!("cfl,{}", cfg.cfl),
        format!("dt_mode,{}", cfg.dt_mode),
        format!("final_time,{}", cfg.final_time),
        format!("extents,{extents}"),
        format!("snapshot_times,{times}"),
        format!("steps,{}", traj.steps),
        format!("wall_seconds,{}", sci(traj.wall_seconds, 5)),
    ]
    .join("\n")
        + "\n"
}

fn write(path: PathBuf, text: &str, files: &mut Vec<PathBuf>) -> Result<()> {
    fs::write(&path, text)?;
    files.push(path);
    Ok(())
}

/// Validates `cfg`, runs it, and writes every output into `cfg.output_dir`.
pub fn run(cfg: &RunConfig) -> Result<RunSummary> {
    cfg.validate()?;
    let dir: &Path = &cfg.output_dir;
    fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    let (rows, traj) = if cfg.example.has_exact_solution() {
        let (rows, traj) = convergence_table(cfg)?;
        write(dir.join("table.csv"), &emit_table(&rows), &mut files)?;
        (rows, traj)
    } else {
        (Vec::new(), simulate(cfg, cfg.nr)?)
    };
    write(dir.join("timeseries.csv"), &emit_series(&traj.series), &mut files)?;
    for (k, snap) in traj.snapshots.iter().enumerate() {
        let bin = dir.join(snapshot_name(k));
        write_dump(&bin, &snap.field)?;
        files.push(bin);
        write(dir.join(format!("cut_{k:03}.csv")), &emit_cut(&snap.field), &mut files)?;
        write(dir.join(format!("plane_{k:03}.csv")), &emit_plane(&snap.field), &mut files)?;
    }
    write(dir.join(META_FILE), &emit_meta(cfg, &traj), &mut files)?;
    Ok(RunSummary {
        rows,
        trajectory: traj,
        files,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_time_run_has_zero_error() {
        let cfg = RunConfig {
            grid_mode: GridMode::Single,
            final_time: 0.0,
            ..RunConfig::defaults(ExampleId::Ex1)
        };
        let (rows, traj) = convergence_table(&cfg).unwrap();
        assert_eq!(rows[0].grid, 80);
        assert_eq!((rows[0].report.l1, rows[0].report.linf), (0.0, 0.0));
        assert_eq!(traj.steps, 0);
    }

    #[test]
    fn single_and_sparse_share_the_finest_geometry() {
        let base = RunConfig {
            nr: 6,
            nl: 1,
            final_time: 0.0,
            ..RunConfig::defaults(ExampleId::Ex3a)
        };
        let a = simulate(&RunConfig { grid_mode: GridMode::Single, ..base.clone() }, 6).unwrap();
        let b = simulate(&base, 6).unwrap();
        assert_eq!(a.snapshots[0].field.geometry(), b.snapshots[0].field.geometry());
    }

    #[test]
    fn kinetic_series_starts_normalised() {
        let cfg = RunConfig {
            nr: 8,
            nl: 1,
            final_time: 0.05,
            snapshots: vec![],
            ..RunConfig::defaults(ExampleId::Ex5a)
        };
        let traj = simulate(&cfg, 8).unwrap();
        assert_eq!(traj.series.len(), 2);
        assert!(traj.series[0].h2.is_some());
        let single = simulate(&RunConfig { grid_mode: GridMode::Single, ..cfg }, 8).unwrap();
        assert!((single.series[0].mass - 1.0).abs() < 1e-12);
    }

    #[test]
    fn series_and_cut_formats() {
        let row = SeriesRow {
            time: 0.5,
            mass: 1.0,
            min: 0.0,
            max: 2.0,
            h2: None,
            hlog: None,
        };
        let s = emit_series(&[row]);
        assert_eq!(s.lines().nth(1).unwrap(), "0.5,1.0000000000e+00,0.0000000000e+00,2.0000000000e+00,,");
    }
}
