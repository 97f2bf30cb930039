//! The smallest algebraic set carrying the mass of a cube, and the ideal of
//! polynomials vanishing on it.
//!
//! Atomic supports are finite point sets, handled by Buchberger-Möller.
//! A density box meeting the cube in positive volume forces the zero ideal.

use num::{One, Zero};

use crate::dyadic::DyadicCube;
use crate::groebner::GroebnerBasis;
use crate::measure::{Measure, MeasureKind};
use crate::polynomial::{Monomial, MonomialOrder, Polynomial};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq)]
pub enum SupportDescriptor {
    /// Distinct points; empty when the cube carries no mass.
    FinitePoints { nvars: usize, points: Vec<Vec<Rational>> },
    /// Boxes meeting the cube in positive volume.
    FullBox { nvars: usize, boxes: Vec<DyadicCube> },
}

impl SupportDescriptor {
    pub fn nvars(&self) -> usize {
        match self {
            SupportDescriptor::FinitePoints { nvars, .. } | SupportDescriptor::FullBox { nvars, .. } => *nvars,
        }
    }
}

pub fn support(mu: &Measure, q: &DyadicCube) -> SupportDescriptor {
    let nvars = mu.nvars();
    match mu.kind() {
        MeasureKind::Atomic(_) => SupportDescriptor::FinitePoints {
            nvars,
            points: mu.atoms_in(q).map(|a| a.point.clone()).collect(),
        },
        MeasureKind::UniformBoxes(boxes) => {
            let hits: Vec<DyadicCube> = boxes.iter().filter_map(|b| b.cube.intersection(q)).collect();
            if hits.is_empty() {
                SupportDescriptor::FinitePoints { nvars, points: Vec::new() }
            } else {
                SupportDescriptor::FullBox { nvars, boxes: hits }
            }
        }
    }
}

/// Reduced Gröbner basis of the vanishing ideal.
pub fn vanishing_ideal(desc: &SupportDescriptor, order: MonomialOrder) -> GroebnerBasis {
    match desc {
        SupportDescriptor::FullBox { nvars, .. } => GroebnerBasis::zero_ideal(*nvars, order),
        SupportDescriptor::FinitePoints { nvars, points } => buchberger_moller(*nvars, points, order).0,
    }
}

struct EchelonRow {
    pivot: usize,
    values: Vec<Rational>,
    poly: Polynomial,
}

/// Buchberger-Möller: scans monomials in increasing order, keeping those
/// whose evaluation vectors are independent of earlier ones (the staircase);
/// each dependent monomial not already a multiple of a leading term yields a
/// generator `t - sum c_s s` with `s` in the staircase.
///
/// Returns the reduced basis and the staircase, ascending.
pub fn buchberger_moller(nvars: usize, points: &[Vec<Rational>], order: MonomialOrder) -> (GroebnerBasis, Vec<Monomial>) {
    let mut leads: Vec<Monomial> = Vec::new();
    let mut generators: Vec<Polynomial> = Vec::new();
    let mut staircase: Vec<Monomial> = Vec::new();
    let mut rows: Vec<EchelonRow> = Vec::new();
    let mut candidates: Vec<Monomial> = vec![Monomial::one(nvars)];

    while let Some(idx) = (0..candidates.len()).min_by(|&a, &b| order.cmp(&candidates[a], &candidates[b])) {
        let t = candidates.swap_remove(idx);
        if leads.iter().any(|l| l.divides(&t)) {
            continue;
        }
        let mut values: Vec<Rational> = points.iter().map(|p| t.evaluate(p)).collect();
        let mut poly = Polynomial::from_monomial(t.clone());
        for row in &rows {
            let c = values[row.pivot].clone();
            if c.is_zero() {
                continue;
            }
            for (v, r) in values.iter_mut().zip(&row.values) {
                *v -= &c * r;
            }
            poly = &poly - &row.poly.scale(&c);
        }
        match values.iter().position(|v| !v.is_zero()) {
            None => {
                leads.push(t);
                generators.push(poly);
            }
            Some(pivot) => {
                let inv = values[pivot].recip();
                values.iter_mut().for_each(|v| *v *= &inv);
                rows.push(EchelonRow { pivot, values, poly: poly.scale(&inv) });
                for i in 0..nvars {
                    let next = t.mul(&Monomial::var(nvars, i));
                    if !candidates.contains(&next) && !leads.iter().any(|l| l.divides(&next)) {
                        candidates.push(next);
                    }
                }
                staircase.push(t);
            }
        }
    }
    debug_assert!(generators.iter().all(|g| g.leading_term(order).is_ok_and(|(_, c)| c.is_one())));
    (GroebnerBasis::from_reduced(nvars, order, generators), staircase)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::buchberger;
    use crate::rational::{frac, int};

    fn pts(v: &[&[i64]]) -> Vec<Vec<Rational>> {
        v.iter().map(|p| p.iter().map(|&x| int(x)).collect()).collect()
    }

    fn p(t: &str) -> Polynomial {
        Polynomial::parse(t, 2).unwrap()
    }

    #[test]
    fn three_corner_points() {
        let (gb, stairs) = buchberger_moller(2, &pts(&[&[0, 0], &[1, 0], &[0, 1]]), MonomialOrder::Grevlex);
        assert_eq!(gb.generators(), &[p("x2^2 - x2"), p("x1*x2"), p("x1^2 - x1")]);
        assert_eq!(stairs.len(), 3);
        assert!(gb.is_reduced());
        assert!(gb.is_groebner());
    }

    #[test]
    fn single_point_is_maximal_ideal() {
        let (gb, stairs) = buchberger_moller(2, &[vec![frac(1, 2), int(-3)]], MonomialOrder::Grevlex);
        assert_eq!(gb.generators(), &[p("x2 + 3"), p("x1 - 1/2")]);
        assert_eq!(stairs, vec![Monomial::one(2)]);
    }

    #[test]
    fn empty_set_gives_unit_ideal() {
        let (gb, stairs) = buchberger_moller(3, &[], MonomialOrder::Grevlex);
        assert!(gb.is_unit_ideal());
        assert!(stairs.is_empty());
    }

    #[test]
    fn agrees_with_buchberger() {
        let points = pts(&[&[0, 0], &[1, 1], &[2, 2], &[3, 3], &[1, 2]]);
        let (gb, stairs) = buchberger_moller(2, &points, MonomialOrder::Grevlex);
        assert_eq!(stairs.len(), points.len());
        assert_eq!(buchberger(gb.generators(), MonomialOrder::Grevlex).unwrap(), gb);
        for g in gb.generators() {
            for pt in &points {
                assert!(g.evaluate(pt).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn supports() {
        let mu = Measure::counting(1, pts(&[&[0], &[1], &[2]])).unwrap();
        let q = DyadicCube::new(1, vec![0]);
        assert_eq!(support(&mu, &q), SupportDescriptor::FinitePoints { nvars: 1, points: pts(&[&[0], &[1]]) });
        let empty = DyadicCube::new(0, vec![7]);
        assert!(vanishing_ideal(&support(&mu, &empty), MonomialOrder::Grevlex).is_unit_ideal());

        let boxes = Measure::lebesgue_on(vec![DyadicCube::new(0, vec![0])]).unwrap();
        let desc = support(&boxes, &DyadicCube::new(-1, vec![1]));
        assert!(matches!(desc, SupportDescriptor::FullBox { .. }));
        assert!(vanishing_ideal(&desc, MonomialOrder::Grevlex).is_zero_ideal());
    }
}
