//! On-disk formats: basis configurations, ideal files and basis files.
//!
//! Rationals are always written as strings (`"3/4"`), polynomials as text in
//! the variables `x1 .. xn`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::basis::{BasisBundle, FamilyAssignment, FamilyScope};
use crate::dyadic::{DyadicCube, GridWindow};
use crate::error::{Error, Result};
use crate::groebner::GroebnerBasis;
use crate::measure::Measure;
use crate::piecewise::Piecewise;
use crate::polynomial::{MonomialOrder, Polynomial};
use crate::rational::Scalar;

/// `{"measure": path, "window": {...}, "order": "grevlex", "families": {...}}`.
/// The measure path is resolved against the config file's directory.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BasisConfig {
    pub measure: PathBuf,
    pub window: GridWindow,
    #[serde(default)]
    pub order: MonomialOrder,
    pub families: FamiliesConfig,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamiliesConfig {
    pub default_degree: u32,
    #[serde(default)]
    pub overrides: Vec<OverrideConfig>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OverrideConfig {
    BelowLevel { below_level: i32, degree: u32 },
    Subtree { subtree: DyadicCube, degree: u32 },
}

impl BasisConfig {
    /// Reads the config and the measure it points to.
    pub fn load(path: &Path) -> Result<(Self, Measure)> {
        let cfg: BasisConfig = read_json(path)?;
        cfg.window.validate()?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        let measure: Measure = read_json(&base.join(&cfg.measure))?;
        Ok((cfg, measure))
    }

    pub fn measure_path(&self, config_path: &Path) -> PathBuf {
        config_path.parent().unwrap_or_else(|| Path::new(".")).join(&self.measure)
    }

    pub fn assignment(&self) -> FamilyAssignment {
        let overrides: Vec<(FamilyScope, u32)> = self
            .families
            .overrides
            .iter()
            .map(|o| match o {
                OverrideConfig::BelowLevel { below_level, degree } => (FamilyScope::BelowLevel(*below_level), *degree),
                OverrideConfig::Subtree { subtree, degree } => (FamilyScope::Subtree(subtree.clone()), *degree),
            })
            .collect();
        FamilyAssignment::from_degrees(self.window.dim(), self.order, self.families.default_degree, &overrides)
    }
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    Ok(serde_json::from_str(&text)?)
}

/// `{"nvars": n, "order": "grevlex", "generators": ["x1^2 - x2", ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdealFile {
    pub nvars: usize,
    #[serde(default)]
    pub order: MonomialOrder,
    pub generators: Vec<String>,
}

impl IdealFile {
    pub fn from_basis(gb: &GroebnerBasis) -> Self {
        Self {
            nvars: gb.nvars(),
            order: gb.order(),
            generators: gb.generators().iter().map(|g| g.to_text(gb.order())).collect(),
        }
    }

    pub fn polynomials(&self) -> Result<Vec<Polynomial>> {
        self.generators.iter().map(|g| Polynomial::parse(g, self.nvars)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PieceRecord {
    pub cube: DyadicCube,
    pub poly: String,
}

/// One line of a basis file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisRecord {
    pub cube: DyadicCube,
    pub kind: crate::basis::BasisKind,
    pub pieces: Vec<PieceRecord>,
    pub norm: f64,
    pub exact_pre_normalized: Vec<PieceRecord>,
}

fn piece_records<C: Scalar>(f: &Piecewise<C>, order: MonomialOrder) -> Vec<PieceRecord> {
    f.to_texts(order).into_iter().map(|(cube, poly)| PieceRecord { cube, poly }).collect()
}

/// Records in coefficient order.
pub fn basis_records(bundle: &BasisBundle, order: MonomialOrder) -> Vec<BasisRecord> {
    bundle
        .entries()
        .iter()
        .map(|e| BasisRecord {
            cube: e.cube.clone(),
            kind: e.kind,
            pieces: piece_records(&e.function.normalized, order),
            norm: e.function.norm,
            exact_pre_normalized: piece_records(&e.function.exact, order),
        })
        .collect()
}
