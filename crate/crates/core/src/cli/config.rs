//! Run configuration and the per-example defaults.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::grid::{Boundary, DomainBox, GridGeometry, LevelIndex};
use crate::interp::Prolongation;
use crate::models::{ScalarConservationLaw, SineProfile, VlasovBoltzmannSpec, VlasovMaxwellSpec};
use crate::timestep::DtMode;
use crate::weno::{WeightMode, WenoParams};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExampleId {
    Ex1,
    Ex2,
    Ex3a,
    Ex3b,
    Ex4,
    Ex5a,
    Ex5b,
    Ex6,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridMode {
    Single,
    Sparse,
}

macro_rules! string_enum {
    ($ty:ty, $what:literal, { $($name:literal => $val:expr),+ $(,)? }) => {
        impl FromStr for $ty {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s.to_ascii_lowercase().as_str() {
                    $($name => Ok($val),)+
                    _ => Err(Error::InvalidConfig {
                        field: $what.into(),
                        reason: format!("unknown value `{s}`"),
                    }),
                }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                $(if *self == $val { return f.write_str($name); })+
                unreachable!()
            }
        }
    };
}

string_enum!(ExampleId, "example", {
    "ex1" => ExampleId::Ex1, "ex2" => ExampleId::Ex2, "ex3a" => ExampleId::Ex3a, "ex3b" => ExampleId::Ex3b,
    "ex4" => ExampleId::Ex4, "ex5a" => ExampleId::Ex5a, "ex5b" => ExampleId::Ex5b, "ex6" => ExampleId::Ex6,
});
string_enum!(GridMode, "grid-mode", { "single" => GridMode::Single, "sparse" => GridMode::Sparse });
string_enum!(WeightMode, "scheme", { "linear" => WeightMode::Linear, "weno" => WeightMode::Nonlinear });
string_enum!(Prolongation, "prolongation", { "lagrange" => Prolongation::Lagrange, "weno" => Prolongation::Weno });
string_enum!(DtMode, "dt-mode", { "cfl" => DtMode::Cfl, "accuracy" => DtMode::Accuracy });

/// The physics behind an example id.
#[derive(Debug, Clone)]
pub enum Physics {
    Scalar {
        law: ScalarConservationLaw,
        initial: SineProfile,
    },
    Kinetic(VlasovBoltzmannSpec),
    Maxwell(VlasovMaxwellSpec),
}

impl ExampleId {
    pub const ALL: [ExampleId; 8] = [
        ExampleId::Ex1,
        ExampleId::Ex2,
        ExampleId::Ex3a,
        ExampleId::Ex3b,
        ExampleId::Ex4,
        ExampleId::Ex5a,
        ExampleId::Ex5b,
        ExampleId::Ex6,
    ];

    pub fn dim(self) -> usize {
        match self {
            ExampleId::Ex1 | ExampleId::Ex3a | ExampleId::Ex5a => 2,
            ExampleId::Ex2 | ExampleId::Ex3b | ExampleId::Ex4 | ExampleId::Ex6 => 3,
            ExampleId::Ex5b => 4,
        }
    }

    /// Smooth examples have an exact solution and report convergence tables.
    pub fn has_exact_solution(self) -> bool {
        matches!(self, ExampleId::Ex1 | ExampleId::Ex2 | ExampleId::Ex3a | ExampleId::Ex3b)
    }

    pub fn physics(self) -> Physics {
        use std::f64::consts::PI;
        let smooth = SineProfile {
            mean: 1.0,
            amplitude: 0.5,
            wavenumber: 1.0,
        };
        match self {
            ExampleId::Ex1 => Physics::Scalar {
                law: ScalarConservationLaw::advection(2),
                initial: SineProfile {
                    mean: 0.3,
                    amplitude: 0.7,
                    wavenumber: PI / 2.0,
                },
            },
            ExampleId::Ex2 => Physics::Scalar {
                law: ScalarConservationLaw::advection(3),
                initial: smooth,
            },
            ExampleId::Ex3a => Physics::Scalar {
                law: ScalarConservationLaw::burgers(2),
                initial: smooth,
            },
            ExampleId::Ex3b => Physics::Scalar {
                law: ScalarConservationLaw::burgers(3),
                initial: smooth,
            },
            ExampleId::Ex4 => Physics::Scalar {
                law: ScalarConservationLaw::burgers(3),
                initial: SineProfile {
                    mean: 0.3,
                    amplitude: 0.7,
                    wavenumber: 1.0,
                },
            },
            ExampleId::Ex5a => Physics::Kinetic(VlasovBoltzmannSpec::standard(1)),
            ExampleId::Ex5b => Physics::Kinetic(VlasovBoltzmannSpec::standard(2)),
            ExampleId::Ex6 => Physics::Maxwell(VlasovMaxwellSpec::default()),
        }
    }

    pub fn domain(self) -> DomainBox {
        use std::f64::consts::PI;
        match self.physics() {
            Physics::Kinetic(spec) => spec.domain(),
            Physics::Maxwell(spec) => spec.domain(),
            Physics::Scalar { .. } if self == ExampleId::Ex1 => DomainBox::cube(2, 0.0, 4.0).expect("box"),
            Physics::Scalar { law, .. } => DomainBox::cube(law.dim(), 0.0, 2.0 * PI).expect("box"),
        }
    }

    pub fn boundaries(self) -> Vec<Boundary> {
        match self.physics() {
            Physics::Kinetic(spec) => spec.boundaries(),
            Physics::Maxwell(spec) => spec.boundaries(),
            Physics::Scalar { law, .. } => vec![Boundary::Periodic; law.dim()],
        }
    }
}

/// Everything needed to reproduce one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub example: ExampleId,
    pub grid_mode: GridMode,
    pub nr: usize,
    pub nl: u32,
    pub scheme: WeightMode,
    pub prolongation: Prolongation,
    pub epsilon: f64,
    pub cfl: f64,
    pub dt_mode: DtMode,
    pub final_time: f64,
    pub output_dir: PathBuf,
    /// Output times in `(0, final_time]`. The final time is always output.
    pub snapshots: Vec<f64>,
    /// Number of convergence-table rows; each doubles `nr`.
    pub refinements: usize,
}

impl RunConfig {
    /// The published setup of each example.
    pub fn defaults(example: ExampleId) -> Self {
        let base = RunConfig {
            example,
            grid_mode: GridMode::Sparse,
            nr: 10,
            nl: 3,
            scheme: WeightMode::Nonlinear,
            prolongation: Prolongation::Weno,
            epsilon: crate::weno::DEFAULT_EPSILON,
            cfl: 0.4,
            dt_mode: DtMode::Cfl,
            final_time: 0.5,
            output_dir: PathBuf::from("out"),
            snapshots: Vec::new(),
            refinements: 1,
        };
        match example {
            ExampleId::Ex1 | ExampleId::Ex2 => RunConfig {
                scheme: WeightMode::Linear,
                prolongation: Prolongation::Lagrange,
                dt_mode: DtMode::Accuracy,
                ..base
            },
            ExampleId::Ex3a => RunConfig {
                epsilon: BURGERS_EPSILON,
                dt_mode: DtMode::Accuracy,
                final_time: 0.3,
                ..base
            },
            ExampleId::Ex3b => RunConfig {
                epsilon: BURGERS_EPSILON,
                dt_mode: DtMode::Accuracy,
                final_time: 0.1,
                ..base
            },
            ExampleId::Ex4 => RunConfig {
                nr: 40,
                final_time: 0.52,
                ..base
            },
            ExampleId::Ex5a => RunConfig {
                nr: 40,
                final_time: 6.0,
                snapshots: vec![0.5, 1.0, 2.0, 3.0, 6.0],
                ..base
            },
            ExampleId::Ex5b => RunConfig {
                nr: 10,
                final_time: 3.0,
                snapshots: vec![0.5, 1.0, 2.0, 3.0],
                ..base
            },
            ExampleId::Ex6 => RunConfig {
                nr: 20,
                final_time: 10.0,
                ..base
            },
        }
    }

    /// Shrinks the root grid and the simulated time by `factor` in `(0, 1]`,
    /// dropping output times past the new final time.
    pub fn scaled(mut self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor <= 1.0) {
            return Err(Error::InvalidConfig {
                field: "scale".into(),
                reason: format!("{factor} outside (0, 1]"),
            });
        }
        self.nr = ((self.nr as f64 * factor).round() as usize).max(MIN_ROOT_CELLS);
        self.final_time *= factor;
        let t = self.final_time;
        self.snapshots.retain(|&s| s <= t);
        Ok(self)
    }

    pub fn weno(&self) -> WenoParams {
        WenoParams {
            epsilon: self.epsilon,
            mode: self.scheme,
        }
    }

    pub fn finest_geometry(&self, nr: usize) -> Result<GridGeometry> {
        let d = self.example.dim();
        GridGeometry::new(
            self.example.domain(),
            vec![nr; d],
            LevelIndex::uniform(d, self.nl),
            self.example.boundaries(),
        )
    }

    /// Sorted output times, always ending at the final time.
    pub fn output_times(&self) -> Vec<f64> {
        let mut t: Vec<f64> = self.snapshots.iter().copied().filter(|&s| s < self.final_time).collect();
        t.sort_by(f64::total_cmp);
        t.dedup();
        t.push(self.final_time);
        t
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field: &str, reason: String| {
            Err(Error::InvalidConfig {
                field: field.into(),
                reason,
            })
        };
        if self.nr < MIN_ROOT_CELLS {
            return bad("nr", format!("{} root cells leave lines shorter than the stencil", self.nr));
        }
        let d = self.example.dim();
        if self.grid_mode == GridMode::Sparse && (self.nl as usize) + 1 < d {
            return bad("nl", format!("sparse grids in {d} dimensions need nl >= {}", d - 1));
        }
        if self.nl > 20 {
            return bad("nl", format!("{} levels is beyond any feasible grid", self.nl));
        }
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return bad("epsilon", format!("{} must be positive", self.epsilon));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return bad("cfl", format!("{} outside (0, 1]", self.cfl));
        }
        if !(self.final_time >= 0.0) || !self.final_time.is_finite() {
            return bad("tfinal", format!("{} must be finite and non-negative", self.final_time));
        }
        if let Some(s) = self.snapshots.iter().find(|&&s| !(s > 0.0 && s <= self.final_time)) {
            return bad("snapshots", format!("time {s} outside (0, {}]", self.final_time));
        }
        if self.refinements == 0 || self.refinements > 8 {
            return bad("refinements", format!("{} outside 1..=8", self.refinements));
        }
        Ok(())
    }
}

/// Weight regulariser of the smooth Burgers runs; their published error
/// tables are reproduced with this value.
pub const BURGERS_EPSILON: f64 = 1e-3;

/// Smallest root grid whose lines admit the five-point stencil with ghosts.
pub const MIN_ROOT_CELLS: usize = 6;
