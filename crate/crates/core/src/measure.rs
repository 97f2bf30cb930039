//! Finite atomic measures and piecewise-uniform densities on dyadic boxes,
//! with exact integration of piecewise polynomials against them.

use std::collections::HashSet;

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::dyadic::DyadicCube;
use crate::error::{Error, Result};
use crate::piecewise::{Piecewise, PiecewisePoly};
use crate::polynomial::Poly;
use crate::rational::{serde_str, Rational, Scalar};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    #[serde(with = "serde_str::vec")]
    pub point: Vec<Rational>,
    #[serde(with = "serde_str")]
    pub weight: Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityBox {
    pub cube: DyadicCube,
    #[serde(with = "serde_str")]
    pub density: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub enum MeasureKind {
    Atomic(Vec<Atom>),
    UniformBoxes(Vec<DensityBox>),
}

/// A validated measure on `R^n`. Weights and densities are positive, atoms
/// are distinct and boxes are pairwise disjoint.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeasureFile", into = "MeasureFile")]
pub struct Measure {
    nvars: usize,
    kind: MeasureKind,
}

/// On-disk form: `{"nvars": n, "kind": "atomic", "atoms": [...]}` or
/// `{"nvars": n, "kind": "uniform_boxes", "boxes": [...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum MeasureFile {
    Atomic { nvars: usize, atoms: Vec<Atom> },
    UniformBoxes { nvars: usize, boxes: Vec<DensityBox> },
}

impl TryFrom<MeasureFile> for Measure {
    type Error = Error;

    fn try_from(f: MeasureFile) -> Result<Self> {
        match f {
            MeasureFile::Atomic { nvars, atoms } => Measure::atomic(nvars, atoms),
            MeasureFile::UniformBoxes { nvars, boxes } => Measure::uniform_boxes(nvars, boxes),
        }
    }
}

impl From<Measure> for MeasureFile {
    fn from(m: Measure) -> Self {
        match m.kind {
            MeasureKind::Atomic(atoms) => MeasureFile::Atomic { nvars: m.nvars, atoms },
            MeasureKind::UniformBoxes(boxes) => MeasureFile::UniformBoxes { nvars: m.nvars, boxes },
        }
    }
}

impl Measure {
    pub fn atomic(nvars: usize, atoms: Vec<Atom>) -> Result<Self> {
        let mut seen = HashSet::new();
        for a in &atoms {
            if a.point.len() != nvars {
                return Err(Error::DimensionMismatch { expected: nvars, found: a.point.len() });
            }
            if !a.weight.is_positive() {
                return Err(Error::InvalidMeasure(format!("non-positive weight {}", a.weight)));
            }
            if !seen.insert(a.point.clone()) {
                return Err(Error::InvalidMeasure(format!("duplicate atom {:?}", a.point)));
            }
        }
        Ok(Self { nvars, kind: MeasureKind::Atomic(atoms) })
    }

    /// Unit-weight atoms at `points`.
    pub fn counting(nvars: usize, points: Vec<Vec<Rational>>) -> Result<Self> {
        let one = Rational::from_integer(1.into());
        Self::atomic(nvars, points.into_iter().map(|point| Atom { point, weight: one.clone() }).collect())
    }

    pub fn uniform_boxes(nvars: usize, boxes: Vec<DensityBox>) -> Result<Self> {
        for (i, b) in boxes.iter().enumerate() {
            if b.cube.dim() != nvars {
                return Err(Error::DimensionMismatch { expected: nvars, found: b.cube.dim() });
            }
            if !b.density.is_positive() {
                return Err(Error::InvalidMeasure(format!("non-positive density {}", b.density)));
            }
            if let Some(o) = boxes[..i].iter().find(|o| o.cube.intersects(&b.cube)) {
                return Err(Error::InvalidMeasure(format!("boxes {} and {} overlap", o.cube, b.cube)));
            }
        }
        Ok(Self { nvars, kind: MeasureKind::UniformBoxes(boxes) })
    }

    /// Density 1 on each of `cubes`.
    pub fn lebesgue_on(cubes: Vec<DyadicCube>) -> Result<Self> {
        let nvars = cubes.first().map_or(0, DyadicCube::dim);
        let one = Rational::from_integer(1.into());
        Self::uniform_boxes(nvars, cubes.into_iter().map(|cube| DensityBox { cube, density: one.clone() }).collect())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn kind(&self) -> &MeasureKind {
        &self.kind
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self.kind, MeasureKind::Atomic(_))
    }

    pub fn atoms_in<'a>(&'a self, q: &'a DyadicCube) -> impl Iterator<Item = &'a Atom> + 'a {
        let atoms: &[Atom] = match &self.kind {
            MeasureKind::Atomic(a) => a,
            MeasureKind::UniformBoxes(_) => &[],
        };
        atoms.iter().filter(move |a| q.contains_point(&a.point))
    }

    /// `mu(Q)`.
    pub fn mass(&self, q: &DyadicCube) -> Rational {
        match &self.kind {
            MeasureKind::Atomic(_) => self.atoms_in(q).fold(Rational::zero(), |acc, a| acc + &a.weight),
            MeasureKind::UniformBoxes(boxes) => boxes
                .iter()
                .filter_map(|b| b.cube.intersection(q).map(|r| &b.density * r.volume()))
                .fold(Rational::zero(), |acc, v| acc + v),
        }
    }

    /// `int_region p dmu`.
    pub fn integrate<C: Scalar>(&self, region: &DyadicCube, p: &Poly<C>) -> C {
        match &self.kind {
            MeasureKind::Atomic(_) => self.atoms_in(region).fold(C::zero(), |acc, a| {
                let x: Vec<C> = a.point.iter().map(C::from_rational).collect();
                acc.add_ref(&C::from_rational(&a.weight).mul_ref(&p.eval_unchecked(&x)))
            }),
            MeasureKind::UniformBoxes(boxes) => boxes.iter().fold(C::zero(), |acc, b| match b.cube.intersection(region) {
                Some(r) => acc.add_ref(&C::from_rational(&b.density).mul_ref(&lebesgue_integral(&r, p))),
                None => acc,
            }),
        }
    }

    /// `int f g dmu` over all of `R^n`.
    pub fn inner<C: Scalar>(&self, f: &Piecewise<C>, g: &Piecewise<C>) -> C {
        match &self.kind {
            MeasureKind::Atomic(atoms) => atoms.iter().fold(C::zero(), |acc, a| {
                let fv = f.evaluate(&a.point);
                if fv.is_zero() {
                    return acc;
                }
                acc.add_ref(&C::from_rational(&a.weight).mul_ref(&fv).mul_ref(&g.evaluate(&a.point)))
            }),
            MeasureKind::UniformBoxes(_) => {
                let mut acc = C::zero();
                for (qf, pf) in f.pieces() {
                    for (qg, pg) in g.pieces() {
                        if let Some(r) = qf.intersection(qg) {
                            acc = acc.add_ref(&self.integrate(&r, &(pf * pg)));
                        }
                    }
                }
                acc
            }
        }
    }

    pub fn norm_sq<C: Scalar>(&self, f: &Piecewise<C>) -> C {
        self.inner(f, f)
    }

    /// `int_Q f g dmu`; every piece of `f` and `g` must meet `q`.
    pub fn inner_product(&self, q: &DyadicCube, f: &PiecewisePoly, g: &PiecewisePoly) -> Result<Rational> {
        for h in [f, g] {
            if h.nvars() != self.nvars {
                return Err(Error::DimensionMismatch { expected: self.nvars, found: h.nvars() });
            }
            if let Some((piece, _)) = h.pieces().find(|(c, _)| !c.intersects(q)) {
                return Err(Error::PieceOutsideCube { piece: piece.clone(), cube: q.clone() });
            }
        }
        Ok(self.inner(&f.restrict(q), &g.restrict(q)))
    }

    /// Cubes of `candidates` with positive mass.
    pub fn charged<'a>(&'a self, candidates: &'a [DyadicCube]) -> impl Iterator<Item = &'a DyadicCube> + 'a {
        candidates.iter().filter(|q| self.mass(q).is_positive())
    }
}

/// `int_Q p dx`, using `int_a^b x^e dx = (b^(e+1) - a^(e+1)) / (e+1)` per axis.
pub fn lebesgue_integral<C: Scalar>(q: &DyadicCube, p: &Poly<C>) -> C {
    let n = q.dim();
    let lo: Vec<C> = (0..n).map(|i| C::from_rational(&q.lower(i))).collect();
    let hi: Vec<C> = (0..n).map(|i| C::from_rational(&q.upper(i))).collect();
    let mut total = C::zero();
    for (m, c) in p.terms() {
        let mut term = c.clone();
        for (i, &e) in m.exponents().iter().enumerate() {
            let mut a = lo[i].clone();
            let mut b = hi[i].clone();
            for _ in 0..e {
                a = a.mul_ref(&lo[i]);
                b = b.mul_ref(&hi[i]);
            }
            let denom = C::from_rational(&Rational::from_integer((e + 1).into()));
            term = term.mul_ref(&b.sub_ref(&a).div_ref(&denom));
        }
        total = total.add_ref(&term);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::Polynomial;
    use crate::rational::{frac, int};

    fn cube(level: i32, coords: &[i64]) -> DyadicCube {
        DyadicCube::new(level, coords.to_vec())
    }

    fn poly(t: &str) -> Polynomial {
        Polynomial::parse(t, 1).unwrap()
    }

    // [-1, 1) in grid coordinates y = x + 1, where it is the cube [0, 2).
    fn interval_measure() -> Measure {
        Measure::lebesgue_on(vec![cube(0, &[0]), cube(0, &[1])]).unwrap()
    }

    fn haar() -> PiecewisePoly {
        PiecewisePoly::on_cube(cube(0, &[0]), poly("1")).add(&PiecewisePoly::on_cube(cube(0, &[1]), poly("-1")))
    }

    fn centered(t: &str) -> Polynomial {
        poly(t).shift(&[int(-1)]).unwrap()
    }

    #[test]
    fn boundary_atoms_follow_half_open_rule() {
        let mu = Measure::atomic(1, vec![Atom { point: vec![int(0)], weight: int(1) }, Atom { point: vec![int(1)], weight: int(2) }]).unwrap();
        assert_eq!(mu.mass(&cube(0, &[0])), int(1));
        assert_eq!(mu.mass(&cube(0, &[1])), int(2));
        assert_eq!(mu.mass(&cube(0, &[5])), int(0));
    }

    #[test]
    fn box_mass_is_volume() {
        let mu = Measure::lebesgue_on(vec![cube(0, &[0])]).unwrap();
        assert_eq!(mu.mass(&cube(-1, &[0])), frac(1, 2));
        assert_eq!(mu.mass(&cube(1, &[0])), int(1));
        assert_eq!(mu.mass(&cube(0, &[3])), int(0));
    }

    #[test]
    fn interval_inner_products() {
        let mu = interval_measure();
        let i = cube(1, &[0]);
        let one = PiecewisePoly::on_cube(i.clone(), poly("1"));
        assert_eq!(mu.inner_product(&i, &one, &one).unwrap(), int(2));
        let x2 = PiecewisePoly::on_cube(i.clone(), centered("x1^2"));
        assert_eq!(mu.inner_product(&i, &haar(), &x2).unwrap(), int(0));
        let x = PiecewisePoly::on_cube(i.clone(), centered("x1"));
        assert_eq!(mu.inner_product(&i, &haar(), &x).unwrap(), int(-1));
    }

    #[test]
    fn pieces_outside_cube_are_an_error() {
        let mu = interval_measure();
        let f = PiecewisePoly::on_cube(cube(0, &[3]), poly("1"));
        assert!(matches!(mu.inner_product(&cube(0, &[0]), &f, &f), Err(Error::PieceOutsideCube { .. })));
    }

    #[test]
    fn invalid_measures() {
        assert!(Measure::atomic(1, vec![Atom { point: vec![int(0)], weight: int(0) }]).is_err());
        let a = Atom { point: vec![int(0)], weight: int(1) };
        assert!(Measure::atomic(1, vec![a.clone(), a]).is_err());
        assert!(Measure::lebesgue_on(vec![cube(0, &[0]), cube(-1, &[1])]).is_err());
    }

    #[test]
    fn json_format() {
        let text = r#"{"nvars": 2, "kind": "atomic", "atoms": [{"point": ["1/2","3/4"], "weight": "1"}]}"#;
        let mu: Measure = serde_json::from_str(text).unwrap();
        assert_eq!(mu.mass(&cube(0, &[0, 0])), int(1));
        let back = serde_json::to_string(&mu).unwrap();
        assert_eq!(serde_json::from_str::<Measure>(&back).unwrap(), mu);
        let boxes = r#"{"nvars": 1, "kind": "uniform_boxes", "boxes": [{"cube": {"level":0,"coords":[0]}, "density": "1"}]}"#;
        let mu: Measure = serde_json::from_str(boxes).unwrap();
        assert!(!mu.is_atomic());
        let bad = r#"{"nvars": 1, "kind": "atomic", "atoms": [{"point": ["1"], "weight": "-1"}]}"#;
        assert!(serde_json::from_str::<Measure>(bad).is_err());
    }

    #[test]
    fn float_and_exact_integrals_agree() {
        let q = cube(-1, &[1, -1]);
        let p = Polynomial::parse("3*x1^2*x2 - 1/3*x2^3 + 2", 2).unwrap();
        let exact = lebesgue_integral(&q, &p);
        let float = lebesgue_integral(&q, &p.to_real());
        assert!((num::ToPrimitive::to_f64(&exact).unwrap() - float).abs() < 1e-14);
    }
}
