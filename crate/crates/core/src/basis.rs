//! Variable Alpert bases over a grid window.
//!
//! Each window cube `Q` carries a family `U_Q`. The bundle holds, per cube,
//! an orthonormal basis of the Alpert space `L2_{Q,U_Q,U_Q}` (wavelets), of
//! `P_{Q,U_Q} ⊖ P_{Q,U_{P(Q)}}` (complements) and, on roots, of `P_{T,U_T}`
//! (tops). Roots are treated as cubes whose parent family is empty, so tops
//! and complements share one code path.

use std::collections::BTreeMap;
use std::fmt;

use num::{Signed, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dyadic::{DyadicCube, GridWindow};
use crate::error::{Error, Result};
use crate::measure::Measure;
use crate::piecewise::{PiecewisePoly, RealPiecewise};
use crate::polynomial::{MonomialOrder, Polynomial};
use crate::rational::{frac, Rational, Scalar};
use crate::spaces::{
    alpert_space_basis, component_basis, component_dimension, gram_unchecked, orthogonalize, BasisFunction,
    FunctionFamily, OrthoBasis,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyScope {
    /// Cubes with `level < m`.
    BelowLevel(i32),
    /// Cubes inside the given cube, itself included.
    Subtree(DyadicCube),
}

impl FamilyScope {
    pub fn applies_to(&self, q: &DyadicCube) -> bool {
        match self {
            FamilyScope::BelowLevel(m) => q.level < *m,
            FamilyScope::Subtree(c) => c.contains_cube(q),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyOverride {
    pub scope: FamilyScope,
    pub family: FunctionFamily,
}

/// `Q -> U_Q` as a default family plus scoped overrides; the last matching
/// override wins.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyAssignment {
    default: FunctionFamily,
    overrides: Vec<FamilyOverride>,
}

impl FamilyAssignment {
    pub fn constant(family: FunctionFamily) -> Self {
        Self { default: family, overrides: Vec::new() }
    }

    pub fn with_override(mut self, scope: FamilyScope, family: FunctionFamily) -> Self {
        self.overrides.push(FamilyOverride { scope, family });
        self
    }

    /// Families `F^n_k`: `default_degree` everywhere, then `(scope, k)`
    /// overrides in order.
    pub fn from_degrees(nvars: usize, order: MonomialOrder, default_degree: u32, overrides: &[(FamilyScope, u32)]) -> Self {
        overrides.iter().fold(
            Self::constant(FunctionFamily::monomials(nvars, default_degree, order)),
            |a, (scope, k)| a.with_override(scope.clone(), FunctionFamily::monomials(nvars, *k, order)),
        )
    }

    pub fn nvars(&self) -> usize {
        self.default.nvars()
    }

    pub fn default_family(&self) -> &FunctionFamily {
        &self.default
    }

    pub fn overrides(&self) -> &[FamilyOverride] {
        &self.overrides
    }

    pub fn family_for(&self, q: &DyadicCube) -> &FunctionFamily {
        self.overrides
            .iter()
            .rev()
            .find(|o| o.scope.applies_to(q))
            .map_or(&self.default, |o| &o.family)
    }

    /// `U_T`: the intersection of `U_Q` over window cubes inside `root`, in
    /// the root family's order.
    pub fn top_family(&self, window: &GridWindow, root: &DyadicCube) -> FunctionFamily {
        let mut fam = self.family_for(root).clone();
        let mut layer = vec![root.clone()];
        for _ in window.min_level..root.level {
            layer = layer.iter().flat_map(DyadicCube::children).collect();
            for q in &layer {
                fam = fam.intersection(self.family_for(q));
            }
        }
        fam
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    MissingConstant(DyadicCube),
    NotNested { parent: DyadicCube, child: DyadicCube },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingConstant(q) => write!(f, "1 is not in the family of {q}"),
            Violation::NotNested { parent, child } => {
                write!(f, "family of {parent} is not contained in the family of its child {child}")
            }
        }
    }
}

/// Every window cube lacking the constant, and every parent/child pair in the
/// window where nesting fails.
pub fn validate_assignment(assignment: &FamilyAssignment, window: &GridWindow) -> Vec<Violation> {
    let one = Polynomial::one(assignment.nvars());
    let mut out = Vec::new();
    for q in window.cubes_where(|_| true) {
        let u = assignment.family_for(&q);
        if !u.contains(&one) {
            out.push(Violation::MissingConstant(q.clone()));
        }
        if q.level > window.min_level {
            for child in q.children() {
                if !u.is_subset_of(assignment.family_for(&child)) {
                    out.push(Violation::NotNested { parent: q.clone(), child });
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisKind {
    Top,
    Complement,
    Wavelet,
}

/// A bundle function with its place in the coefficient order.
#[derive(Clone, Copy, Debug)]
pub struct Entry<'a> {
    pub cube: &'a DyadicCube,
    pub kind: BasisKind,
    pub function: &'a BasisFunction,
}

/// Orthonormal basis of `P_{Q,outer} ⊖ P_{Q,inner}`.
fn complement_basis(mu: &Measure, q: &DyadicCube, inner: &FunctionFamily, outer: &FunctionFamily) -> OrthoBasis {
    let inner_basis = component_basis(mu, q, inner);
    let functions: Vec<PiecewisePoly> = inner_basis
        .iter()
        .chain(component_basis(mu, q, outer).iter())
        .map(|p| PiecewisePoly::on_cube(q.clone(), p.clone()))
        .collect();
    let gram = gram_unchecked(mu, &functions);
    let identity: Vec<Vec<Rational>> = (0..functions.len())
        .map(|i| (0..functions.len()).map(|j| if i == j { Rational::from_integer(1.into()) } else { Rational::zero() }).collect())
        .collect();
    let all = orthogonalize(mu, &functions, &gram, &identity);
    // The inner basis is independent, so it fills the first slots unchanged
    // in count; what follows spans the complement.
    let kept: Vec<(PiecewisePoly, Rational)> =
        all.functions.into_iter().skip(inner_basis.len()).map(|b| (b.exact, b.norm_sq)).collect();
    OrthoBasis::from_orthogonal(mu, kept)
}

#[derive(Default)]
struct CubeSpaces {
    top: Option<OrthoBasis>,
    complement: Option<OrthoBasis>,
    wavelet: Option<OrthoBasis>,
}

/// Per-cube dimensions next to the values predicted from component-space
/// dimensions alone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CubeDimensions {
    pub cube: DyadicCube,
    pub wavelets: usize,
    pub complements: usize,
    pub tops: usize,
    /// `sum_{Q'} dim P_{Q',U_Q} - dim P_{Q,U_Q}`, or 0 at `min_level`.
    pub predicted_wavelets: usize,
    /// `dim P_{Q,U_Q} - dim P_{Q,U_parent}` with an empty parent family on
    /// roots (where it counts tops instead).
    pub predicted_complements: usize,
}

#[derive(Clone, Debug)]
pub struct BasisBundle {
    measure: Measure,
    window: GridWindow,
    assignment: FamilyAssignment,
    pub wavelets: BTreeMap<DyadicCube, OrthoBasis>,
    pub complements: BTreeMap<DyadicCube, OrthoBasis>,
    pub tops: BTreeMap<DyadicCube, OrthoBasis>,
}

/// Builds the bundle. Cubes with `mu(Q) = 0`, and so their subtrees, are
/// skipped; each remaining cube is handled independently in parallel.
pub fn build(mu: &Measure, window: &GridWindow, assignment: &FamilyAssignment) -> Result<BasisBundle> {
    window.validate()?;
    for n in [window.dim(), assignment.nvars()] {
        if n != mu.nvars() {
            return Err(Error::DimensionMismatch { expected: mu.nvars(), found: n });
        }
    }
    let violations = validate_assignment(assignment, window);
    if !violations.is_empty() {
        return Err(Error::InvalidAssignment(violations));
    }
    let cubes = window.cubes_where(|q| mu.mass(q).is_positive());
    let spaces: Vec<(DyadicCube, CubeSpaces)> = cubes
        .par_iter()
        .map(|q| {
            let u = assignment.family_for(q);
            let mut s = CubeSpaces::default();
            if q.level > window.min_level {
                s.wavelet = Some(alpert_space_basis(mu, q, u, u));
            }
            if q.level == window.max_level {
                let top = assignment.top_family(window, q);
                s.top = Some(complement_basis(mu, q, &FunctionFamily::empty(mu.nvars()), &top));
            } else {
                s.complement = Some(complement_basis(mu, q, assignment.family_for(&q.parent()), u));
            }
            (q.clone(), s)
        })
        .collect();

    let mut bundle = BasisBundle {
        measure: mu.clone(),
        window: window.clone(),
        assignment: assignment.clone(),
        wavelets: BTreeMap::new(),
        complements: BTreeMap::new(),
        tops: BTreeMap::new(),
    };
    for (q, s) in spaces {
        for (map, basis) in [(&mut bundle.tops, s.top), (&mut bundle.complements, s.complement), (&mut bundle.wavelets, s.wavelet)] {
            if let Some(b) = basis.filter(|b| !b.is_empty()) {
                map.insert(q.clone(), b);
            }
        }
    }
    Ok(bundle)
}

fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    frac(rng.gen_range(-9..=9), rng.gen_range(1..=4))
}

impl BasisBundle {
    pub fn measure(&self) -> &Measure {
        &self.measure
    }

    pub fn window(&self) -> &GridWindow {
        &self.window
    }

    pub fn assignment(&self) -> &FamilyAssignment {
        &self.assignment
    }

    /// Bundle functions in coefficient order: tops by root order, then cubes
    /// coarse to fine and by coordinates within a level, complements before
    /// wavelets on each cube.
    pub fn entries(&self) -> Vec<Entry<'_>> {
        let mut out = Vec::new();
        for root in &self.window.roots {
            if let Some(b) = self.tops.get(root) {
                out.extend(b.functions.iter().map(|function| Entry { cube: root, kind: BasisKind::Top, function }));
            }
        }
        let mut cubes: Vec<&DyadicCube> = self.complements.keys().chain(self.wavelets.keys()).collect();
        cubes.sort_by(|a, b| b.level.cmp(&a.level).then_with(|| a.coords.cmp(&b.coords)));
        cubes.dedup();
        for q in cubes {
            for (kind, map) in [(BasisKind::Complement, &self.complements), (BasisKind::Wavelet, &self.wavelets)] {
                if let Some(b) = map.get(q) {
                    out.extend(b.functions.iter().map(|function| Entry { cube: q, kind, function }));
                }
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        [&self.tops, &self.complements, &self.wavelets].iter().flat_map(|m| m.values()).map(OrthoBasis::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn check_support(&self, f: &PiecewisePoly) -> Result<()> {
        if f.nvars() != self.measure.nvars() {
            return Err(Error::DimensionMismatch { expected: self.measure.nvars(), found: f.nvars() });
        }
        match f.pieces().find(|(c, _)| !self.window.covers(c)) {
            Some((c, _)) => Err(Error::OutsideWindow(c.clone())),
            None => Ok(()),
        }
    }

    /// `<f, b_i>` for every bundle function, in [`BasisBundle::entries`] order.
    pub fn expand(&self, f: &PiecewisePoly) -> Result<Vec<f64>> {
        self.check_support(f)?;
        Ok(self.entries().iter().map(|e| e.function.coefficient(&self.measure, f)).collect())
    }

    /// Floating-point expansion against the normalized representatives.
    pub fn expand_real(&self, f: &RealPiecewise) -> Vec<f64> {
        self.entries().iter().map(|e| self.measure.inner(f, &e.function.normalized)).collect()
    }

    pub fn reconstruct(&self, coeffs: &[f64]) -> Result<RealPiecewise> {
        let entries = self.entries();
        if coeffs.len() != entries.len() {
            return Err(Error::LengthMismatch { expected: entries.len(), found: coeffs.len() });
        }
        Ok(RealPiecewise::combination(self.measure.nvars(), coeffs.iter().zip(entries.iter().map(|e| &e.function.normalized))))
    }

    /// `||f - reconstruct(expand(f))|| / ||f||`, or 0 for `f = 0` in `L2(mu)`.
    pub fn residual(&self, f: &PiecewisePoly) -> Result<f64> {
        let norm = self.measure.norm_sq(f);
        if norm.is_zero() {
            return Ok(0.0);
        }
        let back = self.reconstruct(&self.expand(f)?)?;
        let diff = f.to_real().sub(&back);
        Ok((self.measure.norm_sq(&diff) / norm.to_f64()).sqrt())
    }

    /// A random element of the resolvable space: on every charged cube at
    /// `min_level`, a random combination of that cube's family.
    pub fn sample_resolvable<R: Rng>(&self, rng: &mut R) -> PiecewisePoly {
        let nvars = self.measure.nvars();
        let mut pieces = Vec::new();
        for q in self.window.cubes_at_level(self.window.min_level) {
            if !self.measure.mass(&q).is_positive() {
                continue;
            }
            let p = self.assignment.family_for(&q).members().iter().fold(Polynomial::zero(nvars), |acc, m| {
                &acc + &m.scale(&random_rational(rng))
            });
            pieces.push((q, p));
        }
        PiecewisePoly::from_pieces(nvars, pieces).expect("window cubes at one level are disjoint")
    }

    /// Largest relative reconstruction residual over `trials` random
    /// resolvable functions.
    pub fn verify_complete<R: Rng>(&self, trials: usize, rng: &mut R) -> Result<f64> {
        let mut worst = 0.0f64;
        for _ in 0..trials {
            worst = worst.max(self.residual(&self.sample_resolvable(rng))?);
        }
        Ok(worst)
    }

    fn project(&self, basis: &OrthoBasis, f: &RealPiecewise) -> RealPiecewise {
        let nvars = self.measure.nvars();
        let coeffs: Vec<f64> = basis.functions.iter().map(|b| self.measure.inner(f, &b.normalized)).collect();
        RealPiecewise::combination(nvars, coeffs.iter().zip(basis.functions.iter().map(|b| &b.normalized)))
    }

    /// Checks `1_Q sum_{Q ⊊ P ⊆ R} Δ_P = E_{Q,U_Q} - 1_Q E_{R,U_R}` on random
    /// resolvable functions, returning the largest `||LHS f - RHS f|| / ||f||`.
    /// Requires `Q ⊊ R` in the window and `U_Q = U_R`.
    pub fn verify_telescoping<R: Rng>(&self, q: &DyadicCube, r: &DyadicCube, trials: usize, rng: &mut R) -> Result<f64> {
        for c in [q, r] {
            if !self.window.contains(c) {
                return Err(Error::OutsideWindow(c.clone()));
            }
        }
        if !r.strictly_contains(q) {
            return Err(Error::HypothesisViolated(format!("{q} is not strictly inside {r}")));
        }
        let (uq, ur) = (self.assignment.family_for(q), self.assignment.family_for(r));
        if !(uq.is_subset_of(ur) && ur.is_subset_of(uq)) {
            return Err(Error::HypothesisViolated(format!("families of {q} and {r} differ")));
        }
        let mu = &self.measure;
        let eq = complement_basis(mu, q, &FunctionFamily::empty(mu.nvars()), uq);
        let er = complement_basis(mu, r, &FunctionFamily::empty(mu.nvars()), ur);
        let between: Vec<&OrthoBasis> = self
            .window
            .tower(q)?
            .iter()
            .skip(1)
            .take_while(|p| p.level <= r.level)
            .filter_map(|p| self.wavelets.get(p))
            .collect();

        let mut worst = 0.0f64;
        for _ in 0..trials {
            let f = self.sample_resolvable(rng);
            let norm = mu.norm_sq(&f).to_f64();
            if norm == 0.0 {
                continue;
            }
            let fr = f.to_real();
            let lhs = between
                .iter()
                .fold(RealPiecewise::zero(mu.nvars()), |acc, b| acc.add(&self.project(b, &fr)))
                .restrict(q);
            let rhs = self.project(&eq, &fr).sub(&self.project(&er, &fr).restrict(q));
            worst = worst.max((mu.norm_sq(&lhs.sub(&rhs)) / norm).sqrt());
        }
        Ok(worst)
    }

    /// Wavelet moments against `U_R` for `R` the wavelet's cube and each of
    /// its window ancestors, and orthonormality of every pair of bundle
    /// functions with overlapping support.
    pub fn verify_orthogonality(&self) -> OrthogonalityReport {
        let mu = &self.measure;
        let mut report = OrthogonalityReport::default();
        for (q, basis) in &self.wavelets {
            let tower = self.window.tower(q).expect("bundle cubes lie in the window");
            for r in &tower {
                for p in self.assignment.family_for(r).members() {
                    let exact = PiecewisePoly::on_cube(r.clone(), p.clone());
                    let real = exact.to_real();
                    for b in &basis.functions {
                        report.wavelet_moments = report.wavelet_moments.max(mu.inner(&b.normalized, &real).abs());
                        if !mu.inner(&b.exact, &exact).is_zero() {
                            report.exact_moment_failures += 1;
                        }
                    }
                }
            }
        }
        let entries = self.entries();
        for (i, a) in entries.iter().enumerate() {
            for (j, b) in entries.iter().enumerate().skip(i) {
                if !a.cube.intersects(b.cube) {
                    continue;
                }
                let target = if i == j { 1.0 } else { 0.0 };
                let v = mu.inner(&a.function.normalized, &b.function.normalized);
                report.cross_pairs = report.cross_pairs.max((v - target).abs());
                if i != j && !mu.inner(&a.function.exact, &b.function.exact).is_zero() {
                    report.exact_cross_failures += 1;
                }
            }
        }
        report
    }

    /// Constructed and predicted dimensions for every charged window cube.
    pub fn dimension_table(&self) -> Vec<CubeDimensions> {
        let mu = &self.measure;
        let empty = FunctionFamily::empty(mu.nvars());
        let count = |m: &BTreeMap<DyadicCube, OrthoBasis>, q: &DyadicCube| m.get(q).map_or(0, OrthoBasis::len);
        self.window
            .cubes_where(|q| mu.mass(q).is_positive())
            .into_iter()
            .map(|q| {
                let u = self.assignment.family_for(&q);
                let dim_q = component_dimension(mu, &q, u);
                let predicted_wavelets = if q.level > self.window.min_level {
                    q.children().iter().map(|c| component_dimension(mu, c, u)).sum::<usize>() - dim_q
                } else {
                    0
                };
                let predicted_complements = if q.level == self.window.max_level {
                    component_dimension(mu, &q, &self.assignment.top_family(&self.window, &q))
                        - component_dimension(mu, &q, &empty)
                } else {
                    dim_q - component_dimension(mu, &q, self.assignment.family_for(&q.parent()))
                };
                CubeDimensions {
                    wavelets: count(&self.wavelets, &q),
                    complements: count(&self.complements, &q),
                    tops: count(&self.tops, &q),
                    predicted_wavelets,
                    predicted_complements,
                    cube: q,
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct OrthogonalityReport {
    /// `max |<b, 1_R p>|` over wavelets `b` on `Q`, `R ⊇ Q`, `p ∈ U_R`.
    pub wavelet_moments: f64,
    /// `max |<b_i, b_j> - δ_ij|` over the normalized bundle.
    pub cross_pairs: f64,
    /// Exact moments that failed to vanish on the rational representatives.
    pub exact_moment_failures: usize,
    /// Distinct pairs of rational representatives that are not orthogonal.
    pub exact_cross_failures: usize,
}

impl OrthogonalityReport {
    pub fn max_violation(&self) -> f64 {
        self.wavelet_moments.max(self.cross_pairs)
    }
}
