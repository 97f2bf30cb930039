//! Batch front end behind the `alpert` binary.
//!
//! Every command returns a [`RunReport`] that is printed to stdout as JSON.
//! Reports are byte-identical for identical inputs and seed; wall time is
//! written to stderr only.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num::Signed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::basis::{build, BasisBundle};
use crate::config::{basis_records, read_json, BasisConfig, IdealFile};
use crate::dyadic::DyadicCube;
use crate::error::{Error, Result};
use crate::groebner::buchberger;
use crate::measure::Measure;
use crate::polynomial::MonomialOrder;
use crate::spaces::{component_dimension, FunctionFamily};
use crate::vanishing::{buchberger_moller, support, vanishing_ideal, SupportDescriptor};

/// Thresholds for `verify`.
pub const COMPLETENESS_TOL: f64 = 1e-9;
pub const TELESCOPING_TOL: f64 = 1e-9;
pub const ORTHOGONALITY_TOL: f64 = 1e-10;
pub const NORMALIZATION_TOL: f64 = 1e-12;

#[derive(Debug, Parser)]
#[command(name = "alpert", version, about = "Variable Alpert bases and Gröbner dimension counts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dimensions of the polynomial spaces F^n_k on one cube, k = 1..kmax.
    Dims {
        #[arg(long)]
        measure: PathBuf,
        /// `level:c1,c2,...` or a JSON cube.
        #[arg(long)]
        cube: DyadicCube,
        #[arg(long, default_value_t = 4)]
        kmax: u32,
        #[arg(long, default_value_t = MonomialOrder::Grevlex)]
        order: MonomialOrder,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the basis described by a config and write the basis file.
    Build {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build the basis and check completeness, orthogonality and telescoping.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reduced Gröbner basis of an ideal file.
    Groebner {
        input: PathBuf,
        /// Overrides the order stored in the file.
        #[arg(long)]
        order: Option<MonomialOrder>,
        /// Also report staircase counts for k = 1..kmax.
        #[arg(long)]
        kmax: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Vanishing ideal of the support of a measure on one cube.
    Vanishing {
        #[arg(long)]
        measure: PathBuf,
        #[arg(long)]
        cube: DyadicCube,
        #[arg(long, default_value_t = MonomialOrder::Grevlex)]
        order: MonomialOrder,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct InputHash {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<InputHash>,
    pub outputs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub passed: bool,
    pub result: Value,
}

impl RunReport {
    fn new(command: &str, inputs: &[&Path]) -> Result<Self> {
        let inputs = inputs
            .iter()
            .map(|p| {
                let bytes = fs::read(p)?;
                Ok(InputHash { path: p.display().to_string(), sha256: hex::encode(Sha256::digest(&bytes)) })
            })
            .collect::<Result<_>>()?;
        Ok(Self { command: command.into(), inputs, outputs: Vec::new(), seed: None, passed: true, result: Value::Null })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

fn write_output(report: &mut RunReport, path: &Path, value: &impl Serialize) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(value)? + "\n")?;
    report.outputs.push(path.display().to_string());
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimsRow {
    pub k: u32,
    pub family_size: usize,
    /// `dim P_{Q,F^n_k}` from the Gram rank.
    pub component_dim: usize,
    /// `#F^n_k - #gdep_k`; absent for density measures.
    pub staircase_dim: Option<usize>,
    /// `sum_{Q'} dim P_{Q',F^n_k}`.
    pub ambient: usize,
    /// `dim L2_{Q,F^n_k,F^n_k} = ambient - component_dim`.
    pub alpert_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimsTable {
    pub rows: Vec<DimsRow>,
    pub hilbert_dimension: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl DimsTable {
    /// Gram and staircase columns agree wherever both exist.
    pub fn consistent(&self) -> bool {
        self.rows.iter().all(|r| r.staircase_dim.is_none_or(|s| s == r.component_dim))
    }
}

pub fn dims_table(mu: &Measure, q: &DyadicCube, kmax: u32, order: MonomialOrder) -> Result<DimsTable> {
    if q.dim() != mu.nvars() {
        return Err(Error::DimensionMismatch { expected: mu.nvars(), found: q.dim() });
    }
    let desc = support(mu, q);
    let ideal = vanishing_ideal(&desc, order);
    let full_box = matches!(desc, SupportDescriptor::FullBox { .. });
    let mut rows = Vec::new();
    for k in 1..=kmax {
        let u = FunctionFamily::monomials(mu.nvars(), k, order);
        let component_dim = component_dimension(mu, q, &u);
        let ambient: usize = q.children().iter().map(|c| component_dimension(mu, c, &u)).sum();
        let staircase_dim = if full_box { None } else { Some(ideal.staircase_count(k)?) };
        rows.push(DimsRow { k, family_size: u.len(), component_dim, staircase_dim, ambient, alpert_dim: ambient - component_dim });
    }
    Ok(DimsTable {
        rows,
        hilbert_dimension: ideal.hilbert_dimension()?,
        note: full_box.then(|| "I_Q = {0}: staircase column n/a".to_string()),
    })
}

/// Telescoping pairs `Q ⊊ R` among charged window cubes with equal families.
pub fn telescoping_pairs(bundle: &BasisBundle) -> Vec<(DyadicCube, DyadicCube)> {
    let mu = bundle.measure();
    let window = bundle.window();
    let a = bundle.assignment();
    let mut out = Vec::new();
    for q in window.cubes_where(|c| mu.mass(c).is_positive()) {
        let uq = a.family_for(&q);
        for r in window.tower(&q).expect("window cube").into_iter().skip(1) {
            let ur = a.family_for(&r);
            if uq.is_subset_of(ur) && ur.is_subset_of(uq) {
                out.push((q.clone(), r));
            }
        }
    }
    out
}

fn cmd_verify(config: &Path, trials: usize, seed: u64, out: Option<&Path>) -> Result<RunReport> {
    let (cfg, mu) = BasisConfig::load(config)?;
    let mut report = RunReport::new("verify", &[config, &cfg.measure_path(config)])?;
    report.seed = Some(seed);
    let bundle = build(&mu, &cfg.window, &cfg.assignment())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let complete = bundle.verify_complete(trials, &mut rng)?;
    let orthogonality = bundle.verify_orthogonality();
    let pairs = telescoping_pairs(&bundle);
    let mut telescoping = 0.0f64;
    for (q, r) in &pairs {
        telescoping = telescoping.max(bundle.verify_telescoping(q, r, trials, &mut rng)?);
    }
    let normalization = [&bundle.tops, &bundle.complements, &bundle.wavelets]
        .iter()
        .flat_map(|m| m.values())
        .map(|b| b.normalization_error(&mu))
        .fold(0.0, f64::max);
    let table = bundle.dimension_table();
    let count_mismatches = table
        .iter()
        .filter(|d| d.wavelets != d.predicted_wavelets || d.complements + d.tops != d.predicted_complements)
        .count();

    report.passed = complete <= COMPLETENESS_TOL
        && orthogonality.max_violation() <= ORTHOGONALITY_TOL
        && orthogonality.exact_moment_failures == 0
        && orthogonality.exact_cross_failures == 0
        && telescoping <= TELESCOPING_TOL
        && normalization <= NORMALIZATION_TOL
        && count_mismatches == 0;
    report.result = json!({
        "bundle_size": bundle.len(),
        "trials": trials,
        "completeness": {"max_residual": complete, "threshold": COMPLETENESS_TOL},
        "orthogonality": {"report": orthogonality, "threshold": ORTHOGONALITY_TOL},
        "telescoping": {"pairs": pairs.len(), "max_discrepancy": telescoping, "threshold": TELESCOPING_TOL},
        "normalization": {"max_error": normalization, "threshold": NORMALIZATION_TOL},
        "dimension_mismatches": count_mismatches,
    });
    if let Some(path) = out {
        let result = report.result.clone();
        write_output(&mut report, path, &result)?;
    }
    Ok(report)
}

/// Runs one command. `Err` is an input error; a report with `passed = false`
/// is a verification failure.
pub fn run(cli: &Cli) -> Result<RunReport> {
    match &cli.command {
        Command::Dims { measure, cube, kmax, order, out } => {
            let mut report = RunReport::new("dims", &[measure])?;
            let mu: Measure = read_json(measure)?;
            let table = dims_table(&mu, cube, *kmax, *order)?;
            report.passed = table.consistent();
            if let Some(path) = out {
                write_output(&mut report, path, &table)?;
            }
            report.result = serde_json::to_value(&table)?;
            Ok(report)
        }
        Command::Build { config, out } => {
            let (cfg, mu) = BasisConfig::load(config)?;
            let mut report = RunReport::new("build", &[config, &cfg.measure_path(config)])?;
            let bundle = build(&mu, &cfg.window, &cfg.assignment())?;
            write_output(&mut report, out, &basis_records(&bundle, cfg.order))?;
            let count = |m: &std::collections::BTreeMap<DyadicCube, crate::spaces::OrthoBasis>| {
                m.values().map(|b| b.len()).sum::<usize>()
            };
            report.result = json!({
                "bundle_size": bundle.len(),
                "tops": count(&bundle.tops),
                "complements": count(&bundle.complements),
                "wavelets": count(&bundle.wavelets),
                "dimensions": bundle.dimension_table(),
            });
            Ok(report)
        }
        Command::Verify { config, trials, seed, out } => cmd_verify(config, *trials, *seed, out.as_deref()),
        Command::Groebner { input, order, kmax, out } => {
            let mut report = RunReport::new("groebner", &[input])?;
            let file: IdealFile = read_json(input)?;
            let order = order.unwrap_or(file.order);
            let gens = file.polynomials()?;
            let gb = if gens.iter().all(|g| g.is_zero()) {
                crate::groebner::GroebnerBasis::zero_ideal(file.nvars, order)
            } else {
                buchberger(&gens, order)?
            };
            let ideal = IdealFile::from_basis(&gb);
            if let Some(path) = out {
                write_output(&mut report, path, &ideal)?;
            }
            let staircase = match kmax {
                Some(k) => (1..=*k).map(|k| gb.staircase_count(k)).collect::<Result<Vec<_>>>()?,
                None => Vec::new(),
            };
            report.result = json!({
                "ideal": ideal,
                "leading_monomials": gb.leading_monomials().iter().map(|m| m.to_text()).collect::<Vec<_>>(),
                "hilbert_dimension": gb.hilbert_dimension()?,
                "staircase_counts": staircase,
            });
            Ok(report)
        }
        Command::Vanishing { measure, cube, order, out } => {
            let mut report = RunReport::new("vanishing", &[measure])?;
            let mu: Measure = read_json(measure)?;
            if cube.dim() != mu.nvars() {
                return Err(Error::DimensionMismatch { expected: mu.nvars(), found: cube.dim() });
            }
            let (gb, staircase, kind, size) = match support(&mu, cube) {
                SupportDescriptor::FinitePoints { points, .. } => {
                    let (gb, stairs) = buchberger_moller(mu.nvars(), &points, *order);
                    (gb, Some(stairs), "finite_points", points.len())
                }
                SupportDescriptor::FullBox { boxes, .. } => {
                    (crate::groebner::GroebnerBasis::zero_ideal(mu.nvars(), *order), None, "full_box", boxes.len())
                }
            };
            let ideal = IdealFile::from_basis(&gb);
            let mut value = serde_json::to_value(&ideal)?;
            value["staircase"] = match staircase {
                Some(s) => json!(s.iter().map(|m| m.to_text()).collect::<Vec<_>>()),
                None => Value::Null,
            };
            if let Some(path) = out {
                write_output(&mut report, path, &value)?;
            }
            report.result = json!({"support": kind, "support_size": size, "ideal": value, "hilbert_dimension": gb.hilbert_dimension()?});
            Ok(report)
        }
    }
}

/// `{"error": {"kind": ..., "message": ...}}`.
pub fn error_record(kind: &str, message: &str) -> String {
    json!({"error": {"kind": kind, "message": message}}).to_string()
}
