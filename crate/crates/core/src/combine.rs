//! Sparse-grid combination of semi-coarsened solutions.
//!
//! In `d` dimensions with finest level `N_L`, the grids of level sum
//! `N_L - j` (`j = 0..d-1`) enter with coefficient `(-1)^j C(d-1, j)`.

use std::collections::BTreeMap;

use crate::grid::{enumerate_combination_levels, GridField, GridGeometry, LevelIndex};
use crate::interp::{prolong, Prolongation};
use crate::{Error, Result};

/// Signed combination weights per level-sum band.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombinationCoefficients {
    dim: usize,
    finest: u32,
    /// `(level sum, coefficient)`, finest band first.
    bands: Vec<(u32, i64)>,
}

impl CombinationCoefficients {
    pub fn bands(&self) -> &[(u32, i64)] {
        &self.bands
    }

    pub fn coefficient(&self, level_sum: u32) -> Option<i64> {
        self.bands.iter().find(|(s, _)| *s == level_sum).map(|&(_, c)| c)
    }

    /// Coefficients ordered from the finest band down.
    pub fn values(&self) -> Vec<i64> {
        self.bands.iter().map(|&(_, c)| c).collect()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn finest(&self) -> u32 {
        self.finest
    }
}

fn binomial(n: u64, k: u64) -> i64 {
    let mut r: u64 = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r as i64
}

/// Combination coefficients for dimension `d` and finest level `finest`.
pub fn combination_coefficients(d: usize, finest: u32) -> Result<CombinationCoefficients> {
    if d == 0 || (finest as usize) + 1 < d {
        return Err(Error::InvalidArgument(format!(
            "combination needs d >= 1 and finest level >= d - 1 (d = {d}, finest = {finest})"
        )));
    }
    let d64 = d as i64;
    let nl = finest as i64;
    let mut bands = Vec::with_capacity(d);
    // m runs over N_L..=N_L+d-1; the band level sum is m - (d - 1).
    for m in (nl..nl + d64).rev() {
        let sign = if (d64 + nl - (m + 1)).rem_euclid(2) == 0 { 1 } else { -1 };
        let c = sign * binomial((d - 1) as u64, (m - nl) as u64);
        bands.push(((m - (d64 - 1)) as u32, c));
    }
    Ok(CombinationCoefficients { dim: d, finest, bands })
}

/// States on every grid of a combination family, keyed by level index.
#[derive(Debug, Clone, PartialEq)]
pub struct Family<S> {
    finest: GridGeometry,
    members: BTreeMap<LevelIndex, S>,
}

/// The family of point-value fields the combination acts on.
pub type CombinationSet = Family<GridField>;

impl<S> Family<S> {
    /// Empty family whose finest grid is `finest` (all levels equal).
    pub fn new(finest: GridGeometry) -> Result<Self> {
        let levels = finest.level().levels();
        if levels.windows(2).any(|w| w[0] != w[1]) {
            return Err(Error::InvalidArgument(format!(
                "finest grid must be isotropic, got {}",
                finest.level()
            )));
        }
        Ok(Self {
            finest,
            members: BTreeMap::new(),
        })
    }

    /// Builds every member of the sparse family with `init`.
    pub fn sparse<F>(finest: GridGeometry, init: F) -> Result<Self>
    where
        F: Fn(GridGeometry) -> Result<S>,
    {
        let mut fam = Self::new(finest)?;
        for level in enumerate_combination_levels(fam.dim(), fam.finest_level())? {
            let g = fam.finest.with_level(level.clone())?;
            fam.members.insert(level, init(g)?);
        }
        Ok(fam)
    }

    /// A one-member family holding only the finest grid.
    pub fn single<F>(finest: GridGeometry, init: F) -> Result<Self>
    where
        F: FnOnce(GridGeometry) -> Result<S>,
    {
        let mut fam = Self::new(finest)?;
        let level = fam.finest.level().clone();
        let s = init(fam.finest.clone())?;
        fam.members.insert(level, s);
        Ok(fam)
    }

    pub fn insert(&mut self, level: LevelIndex, state: S) {
        self.members.insert(level, state);
    }

    pub fn finest_geometry(&self) -> &GridGeometry {
        &self.finest
    }

    pub fn finest_level(&self) -> u32 {
        self.finest.level().levels()[0]
    }

    pub fn dim(&self) -> usize {
        self.finest.dim()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn get(&self, level: &LevelIndex) -> Option<&S> {
        self.members.get(level)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LevelIndex, &S)> {
        self.members.iter()
    }

    pub fn states(&self) -> impl Iterator<Item = &S> {
        self.members.values()
    }

    pub fn levels(&self) -> impl Iterator<Item = &LevelIndex> {
        self.members.keys()
    }

    /// Members in sorted level order, mutable.
    pub fn members_mut(&mut self) -> Vec<(&LevelIndex, &mut S)> {
        self.members.iter_mut().collect()
    }

    /// Applies `f` to every member, keeping the level structure.
    pub fn map<T, F>(&self, f: F) -> Family<T>
    where
        F: Fn(&LevelIndex, &S) -> T,
    {
        Family {
            finest: self.finest.clone(),
            members: self.members.iter().map(|(l, s)| (l.clone(), f(l, s))).collect(),
        }
    }
}

/// Prolongs every grid to the finest level and superposes them with the
/// combination coefficients. Grids are processed one at a time in sorted
/// level order, so peak memory is one finest-grid buffer plus one prolongation.
pub fn combine(set: &CombinationSet, mode: Prolongation, epsilon: f64) -> Result<GridField> {
    let d = set.dim();
    let nl = set.finest_level();
    let coeffs = combination_coefficients(d, nl)?;
    let required = enumerate_combination_levels(d, nl)?;
    for level in &required {
        let field = set.get(level).ok_or_else(|| Error::MissingGrid(level.clone()))?;
        let g = field.geometry();
        if !g.same_family(set.finest_geometry()) || g.level() != level {
            return Err(Error::InconsistentDomain(format!(
                "grid {level} does not belong to the family of {}",
                set.finest_geometry().level()
            )));
        }
    }
    let target = set.finest_geometry().level().clone();
    let mut acc = GridField::zeros(set.finest_geometry().clone());
    for level in &required {
        let c = coeffs.coefficient(level.sum()).expect("band present") as f64;
        let p = prolong(&set.members[level], &target, mode, epsilon)?;
        crate::par::zip_apply(acc.view_mut(), p.view(), |a, b| a + c * b);
    }
    Ok(acc)
}
