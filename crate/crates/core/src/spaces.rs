//! Component spaces `P_{Q,U}(mu)`, Alpert spaces `L2_{Q,U,V}(mu)`, their
//! exact dimensions, and orthonormal bases.
//!
//! Every rank, dimension and orthogonality decision is made in exact rational
//! arithmetic. Floating point enters only when a basis function is divided by
//! its norm.

use num::Zero;
use serde::Serialize;

use crate::dyadic::DyadicCube;
use crate::error::{Error, Result};
use crate::linalg::{gram_schmidt, Matrix};
use crate::measure::{Measure, MeasureKind};
use crate::piecewise::{PiecewisePoly, RealPiecewise};
use crate::polynomial::{f_n_k, MonomialOrder, Polynomial};
use crate::rational::{Rational, Scalar};

/// An ordered finite family of polynomials. The order drives every greedy
/// selection and Gram-Schmidt pass, so it is part of the value.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionFamily {
    nvars: usize,
    members: Vec<Polynomial>,
}

impl FunctionFamily {
    pub fn new(nvars: usize, members: Vec<Polynomial>) -> Result<Self> {
        if let Some(p) = members.iter().find(|p| p.nvars() != nvars) {
            return Err(Error::DimensionMismatch { expected: nvars, found: p.nvars() });
        }
        Ok(Self { nvars, members })
    }

    pub fn empty(nvars: usize) -> Self {
        Self { nvars, members: Vec::new() }
    }

    /// `{1}`.
    pub fn constants(nvars: usize) -> Self {
        Self { nvars, members: vec![Polynomial::one(nvars)] }
    }

    /// `F^n_k`, ascending under `order`.
    pub fn monomials(nvars: usize, k: u32, order: MonomialOrder) -> Self {
        let members = f_n_k(nvars, k, order).into_iter().map(Polynomial::from_monomial).collect();
        Self { nvars, members }
    }

    pub fn parse(nvars: usize, texts: &[&str]) -> Result<Self> {
        let members = texts.iter().map(|t| Polynomial::parse(t, nvars)).collect::<Result<_>>()?;
        Ok(Self { nvars, members })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn members(&self) -> &[Polynomial] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        self.members.contains(p)
    }

    /// Set inclusion; order and multiplicity are ignored.
    pub fn is_subset_of(&self, other: &FunctionFamily) -> bool {
        self.members.iter().all(|p| other.contains(p))
    }

    /// Members of `self` that also lie in `other`, in `self`'s order.
    pub fn intersection(&self, other: &FunctionFamily) -> Self {
        Self { nvars: self.nvars, members: self.members.iter().filter(|p| other.contains(p)).cloned().collect() }
    }

    /// Indices of members equal to an earlier member.
    pub fn duplicates(&self) -> Vec<usize> {
        (0..self.members.len()).filter(|&i| self.members[..i].contains(&self.members[i])).collect()
    }

    pub fn has_duplicates(&self) -> bool {
        !self.duplicates().is_empty()
    }

    /// `1_Q p` for each member.
    pub fn restricted_to(&self, q: &DyadicCube) -> Vec<PiecewisePoly> {
        self.members.iter().map(|p| PiecewisePoly::on_cube(q.clone(), p.clone())).collect()
    }
}

/// `G_ij = <f_i, f_j>` over `R^n`, without support checks.
pub(crate) fn gram_unchecked(mu: &Measure, fam: &[PiecewisePoly]) -> Matrix {
    match mu.kind() {
        MeasureKind::Atomic(atoms) => {
            let values: Vec<Vec<Rational>> =
                fam.iter().map(|f| atoms.iter().map(|a| f.evaluate(&a.point)).collect()).collect();
            Matrix::symmetric(fam.len(), |i, j| {
                atoms
                    .iter()
                    .enumerate()
                    .filter(|(t, _)| !values[i][*t].is_zero() && !values[j][*t].is_zero())
                    .fold(Rational::zero(), |acc, (t, a)| acc + &a.weight * &values[i][t] * &values[j][t])
            })
        }
        MeasureKind::UniformBoxes(_) => Matrix::symmetric(fam.len(), |i, j| mu.inner(&fam[i], &fam[j])),
    }
}

/// Exact Gram matrix `<f_i, f_j>_{mu,Q}`. Every piece must lie inside `q`.
pub fn gram_matrix(mu: &Measure, q: &DyadicCube, fam: &[PiecewisePoly]) -> Result<Matrix> {
    for f in fam {
        if f.nvars() != mu.nvars() {
            return Err(Error::DimensionMismatch { expected: mu.nvars(), found: f.nvars() });
        }
        if let Some((piece, _)) = f.pieces().find(|(c, _)| !q.contains_cube(c)) {
            return Err(Error::PieceOutsideCube { piece: piece.clone(), cube: q.clone() });
        }
    }
    Ok(gram_unchecked(mu, fam))
}

fn component_gram(mu: &Measure, q: &DyadicCube, u: &FunctionFamily) -> Matrix {
    gram_unchecked(mu, &u.restricted_to(q))
}

/// `dim P_{Q,U}(mu)`, the rank of the Gram matrix of `1_Q U`.
pub fn component_dimension(mu: &Measure, q: &DyadicCube, u: &FunctionFamily) -> usize {
    component_gram(mu, q, u).rank()
}

/// Greedy maximal independent sublist of `U` on `Q`, scanning in family
/// order. A column of a Gram matrix is independent of the earlier columns
/// exactly when the corresponding function is.
pub fn component_basis(mu: &Measure, q: &DyadicCube, u: &FunctionFamily) -> Vec<Polynomial> {
    component_gram(mu, q, u).pivot_columns().into_iter().map(|i| u.members[i].clone()).collect()
}

/// One orthogonal basis function: the exact representative and its float
/// normalization.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisFunction {
    pub exact: PiecewisePoly,
    pub norm_sq: Rational,
    pub norm: f64,
    pub normalized: RealPiecewise,
}

impl BasisFunction {
    fn new(exact: PiecewisePoly, norm_sq: Rational) -> Self {
        let norm = norm_sq.to_f64().sqrt();
        let normalized = exact.to_real().scale(&norm.recip());
        Self { exact, norm_sq, norm, normalized }
    }

    /// `<f, b>` for the normalized `b`, computed exactly before the final
    /// division by the norm.
    pub fn coefficient(&self, mu: &Measure, f: &PiecewisePoly) -> f64 {
        mu.inner(f, &self.exact).to_f64() / self.norm
    }
}

/// Orthonormal basis with an exact certificate: the rational Gram matrix of
/// the pre-normalized representatives, computed directly from the measure.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthoBasis {
    pub functions: Vec<BasisFunction>,
    pub gram_certificate: Matrix,
}

impl OrthoBasis {
    pub fn empty() -> Self {
        Self { functions: Vec::new(), gram_certificate: Matrix::zeros(0, 0) }
    }

    pub(crate) fn from_orthogonal(mu: &Measure, pairs: Vec<(PiecewisePoly, Rational)>) -> Self {
        let functions: Vec<BasisFunction> = pairs.into_iter().map(|(f, n)| BasisFunction::new(f, n)).collect();
        let exact: Vec<PiecewisePoly> = functions.iter().map(|b| b.exact.clone()).collect();
        Self { gram_certificate: gram_unchecked(mu, &exact), functions }
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    /// The certificate is diagonal and agrees with the recorded norms.
    pub fn is_certified(&self) -> bool {
        self.gram_certificate.is_diagonal()
            && self.gram_certificate.rows() == self.functions.len()
            && self.functions.iter().enumerate().all(|(i, b)| *self.gram_certificate.get(i, i) == b.norm_sq)
    }

    /// Largest `| ||b|| - 1 |` over the normalized float representatives.
    pub fn normalization_error(&self, mu: &Measure) -> f64 {
        self.functions.iter().map(|b| (mu.norm_sq(&b.normalized).sqrt() - 1.0).abs()).fold(0.0, f64::max)
    }
}

/// Exact orthogonalization of `sum_j c_j a_j` for each coefficient vector,
/// with `gram` the Gram matrix of `ambient`.
pub(crate) fn orthogonalize(
    mu: &Measure,
    ambient: &[PiecewisePoly],
    gram: &Matrix,
    vectors: &[Vec<Rational>],
) -> OrthoBasis {
    let nvars = mu.nvars();
    let pairs = gram_schmidt(gram, vectors)
        .into_iter()
        .map(|(w, n)| (PiecewisePoly::combination(nvars, w.iter().zip(ambient)), n))
        .collect();
    OrthoBasis::from_orthogonal(mu, pairs)
}

/// Basis of `L2_{Q,U,0} = (+)_{Q'} P_{Q',U}`: child-major, family order
/// within each child.
pub fn ambient_functions(mu: &Measure, q: &DyadicCube, u: &FunctionFamily) -> Vec<PiecewisePoly> {
    let mut out = Vec::new();
    for child in q.children() {
        for p in component_basis(mu, &child, u) {
            out.push(PiecewisePoly::on_cube(child.clone(), p));
        }
    }
    out
}

/// `C_{ij} = <a_j, 1_Q v_i>`.
fn constraint_matrix(mu: &Measure, q: &DyadicCube, ambient: &[PiecewisePoly], v: &FunctionFamily) -> Matrix {
    let rows = v
        .restricted_to(q)
        .iter()
        .map(|vq| ambient.iter().map(|a| mu.inner(a, vq)).collect())
        .collect();
    if v.is_empty() {
        return Matrix::zeros(0, ambient.len());
    }
    Matrix::from_rows(rows)
}

/// Orthonormal basis of `L2_{Q,U,V}(mu)`: functions on `Q` that restrict to
/// `span 1_{Q'} U` on each child and are orthogonal to every `1_Q v`.
pub fn alpert_space_basis(mu: &Measure, q: &DyadicCube, u: &FunctionFamily, v: &FunctionFamily) -> OrthoBasis {
    let ambient = ambient_functions(mu, q, u);
    if ambient.is_empty() {
        return OrthoBasis::empty();
    }
    let gram = gram_unchecked(mu, &ambient);
    let null = constraint_matrix(mu, q, &ambient, v).null_space();
    orthogonalize(mu, &ambient, &gram, &null)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionReport {
    pub ambient: usize,
    /// `ambient - dim P_{Q,V}`; may be negative when `V` is large.
    pub lower_bound: i64,
    pub upper_bound: usize,
    pub actual: usize,
    /// Conditions of `V` that, imposed one at a time in order, left the
    /// dimension unchanged.
    pub freebies: usize,
    /// `dim L2_{Q,U,{v_1..v_i}}` for `i = 0..=|V|`.
    pub prefix_dims: Vec<usize>,
    pub component_dim_v: usize,
    pub v_subset_of_u: bool,
}

impl DimensionReport {
    /// Broken statements among: the sandwich bounds, each prefix step being
    /// 0 or -1, and equality with the lower bound when `V ⊆ U`.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if (self.actual as i64) < self.lower_bound || self.actual > self.upper_bound {
            out.push(format!("{} outside [{}, {}]", self.actual, self.lower_bound, self.upper_bound));
        }
        for (i, w) in self.prefix_dims.windows(2).enumerate() {
            if w[1] > w[0] || w[0] - w[1] > 1 {
                out.push(format!("condition {} changed the dimension from {} to {}", i + 1, w[0], w[1]));
            }
        }
        if self.prefix_dims.last() != Some(&self.actual) {
            out.push(format!("constructed dimension {} disagrees with constraint rank", self.actual));
        }
        if self.v_subset_of_u && self.actual as i64 != self.lower_bound {
            out.push(format!("V ⊆ U but dimension {} != {}", self.actual, self.lower_bound));
        }
        out
    }
}

pub fn dimension_report(mu: &Measure, q: &DyadicCube, u: &FunctionFamily, v: &FunctionFamily) -> DimensionReport {
    let ambient_fns = ambient_functions(mu, q, u);
    let ambient = ambient_fns.len();
    let constraints = constraint_matrix(mu, q, &ambient_fns, v);
    let prefix_dims: Vec<usize> = (0..=v.len()).map(|i| ambient - constraints.top_rows(i).rank()).collect();
    let freebies = prefix_dims.windows(2).filter(|w| w[0] == w[1]).count();
    let component_dim_v = component_dimension(mu, q, v);
    DimensionReport {
        ambient,
        lower_bound: ambient as i64 - component_dim_v as i64,
        upper_bound: ambient,
        actual: alpert_space_basis(mu, q, u, v).len(),
        freebies,
        prefix_dims,
        component_dim_v,
        v_subset_of_u: v.is_subset_of(u),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn cube(level: i32, coords: &[i64]) -> DyadicCube {
        DyadicCube::new(level, coords.to_vec())
    }

    // The interval [-1, 1) sits at [0, 2) in grid coordinates y = x + 1;
    // families are written in x and shifted.
    fn interval() -> (Measure, DyadicCube) {
        (Measure::lebesgue_on(vec![cube(0, &[0]), cube(0, &[1])]).unwrap(), cube(1, &[0]))
    }

    fn centered(texts: &[&str]) -> FunctionFamily {
        let fam = FunctionFamily::parse(1, texts).unwrap();
        FunctionFamily::new(1, fam.members().iter().map(|p| p.shift(&[int(-1)]).unwrap()).collect()).unwrap()
    }

    fn collinear() -> (Measure, DyadicCube) {
        let pts = (0..4).map(|i| vec![frac(i, 4), frac(i, 4)]).collect();
        (Measure::counting(2, pts).unwrap(), cube(0, &[0, 0]))
    }

    #[test]
    fn interval_gram() {
        let (mu, i) = interval();
        let g = gram_matrix(&mu, &i, &centered(&["1", "x1"]).restricted_to(&i)).unwrap();
        assert_eq!(g, Matrix::from_rows(vec![vec![int(2), int(0)], vec![int(0), frac(2, 3)]]));
        assert_eq!(gram_matrix(&mu, &i, &[]).unwrap().rows(), 0);
        let outside = PiecewisePoly::on_cube(cube(0, &[2]), Polynomial::one(1));
        assert!(matches!(gram_matrix(&mu, &i, &[outside]), Err(Error::PieceOutsideCube { .. })));
    }

    #[test]
    fn single_atom_gram_has_rank_one() {
        let mu = Measure::counting(2, vec![vec![frac(1, 3), frac(1, 5)]]).unwrap();
        let q = cube(0, &[0, 0]);
        let fam = FunctionFamily::monomials(2, 3, MonomialOrder::Grevlex);
        assert_eq!(gram_matrix(&mu, &q, &fam.restricted_to(&q)).unwrap().rank(), 1);
    }

    #[test]
    fn extra_orthogonality() {
        let (mu, i) = interval();
        let u = FunctionFamily::constants(1);
        let haar = alpert_space_basis(&mu, &i, &u, &centered(&["1"]));
        assert_eq!(haar.len(), 1);
        assert_eq!(alpert_space_basis(&mu, &i, &u, &centered(&["1", "x1"])).len(), 0);
        let even = alpert_space_basis(&mu, &i, &u, &centered(&["1", "x1^2"]));
        assert_eq!(even.len(), 1);
        assert!(even.is_certified());
        assert!(even.normalization_error(&mu) < 1e-12);
        let r = dimension_report(&mu, &i, &u, &centered(&["1", "x1^2"]));
        assert_eq!((r.ambient, r.actual, r.freebies), (2, 1, 1));
        assert!(r.violations().is_empty());
    }

    #[test]
    fn collinear_component_spaces() {
        let (mu, q) = collinear();
        let f23 = FunctionFamily::monomials(2, 3, MonomialOrder::Grevlex);
        assert_eq!(component_dimension(&mu, &q, &f23), 3);
        let listed = FunctionFamily::parse(2, &["1", "x1", "x2", "x1^2", "x1*x2", "x2^2"]).unwrap();
        let basis = component_basis(&mu, &q, &listed);
        assert_eq!(basis, FunctionFamily::parse(2, &["1", "x1", "x1^2"]).unwrap().members());
        assert_eq!(component_basis(&mu, &q, &f23), FunctionFamily::parse(2, &["1", "x2", "x2^2"]).unwrap().members());
        assert_eq!(component_dimension(&mu, &cube(0, &[5, 5]), &f23), 0);
    }

    #[test]
    fn duplicates_are_dropped() {
        let (mu, i) = interval();
        let ones = FunctionFamily::parse(1, &["1", "1"]).unwrap();
        assert!(ones.has_duplicates());
        assert_eq!(component_basis(&mu, &i, &ones), vec![Polynomial::one(1)]);
    }

    #[test]
    fn empty_v_keeps_ambient() {
        let (mu, q) = collinear();
        let u = FunctionFamily::monomials(2, 2, MonomialOrder::Grevlex);
        let r = dimension_report(&mu, &q, &u, &FunctionFamily::empty(2));
        assert_eq!(r.actual, r.ambient);
        assert_eq!(r.freebies, 0);
    }
}
