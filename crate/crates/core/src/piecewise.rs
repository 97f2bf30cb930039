//! Piecewise polynomials over disjoint dyadic cubes: `f = sum 1_Q p_Q`.

use std::collections::BTreeMap;

use crate::dyadic::DyadicCube;
use crate::error::{Error, Result};
use crate::polynomial::{MonomialOrder, Poly};
use crate::rational::{Rational, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Piecewise<C> {
    nvars: usize,
    pieces: BTreeMap<DyadicCube, Poly<C>>,
}

pub type PiecewisePoly = Piecewise<Rational>;
pub type RealPiecewise = Piecewise<f64>;

impl<C: Scalar> Piecewise<C> {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, pieces: BTreeMap::new() }
    }

    /// `1_Q * p`.
    pub fn on_cube(cube: DyadicCube, p: Poly<C>) -> Self {
        let mut f = Self::zero(p.nvars());
        if !p.is_zero() {
            f.pieces.insert(cube, p);
        }
        f
    }

    /// Checks that pieces are pairwise disjoint and match `nvars`.
    pub fn from_pieces(nvars: usize, pieces: impl IntoIterator<Item = (DyadicCube, Poly<C>)>) -> Result<Self> {
        let mut out = Self::zero(nvars);
        for (cube, p) in pieces {
            if p.nvars() != nvars {
                return Err(Error::DimensionMismatch { expected: nvars, found: p.nvars() });
            }
            if cube.dim() != nvars {
                return Err(Error::DimensionMismatch { expected: nvars, found: cube.dim() });
            }
            if let Some(other) = out.pieces.keys().find(|k| k.intersects(&cube)) {
                return Err(Error::OverlappingPieces(other.clone(), cube));
            }
            if !p.is_zero() {
                out.pieces.insert(cube, p);
            }
        }
        Ok(out)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn pieces(&self) -> impl Iterator<Item = (&DyadicCube, &Poly<C>)> {
        self.pieces.iter()
    }

    pub fn num_pieces(&self) -> usize {
        self.pieces.len()
    }

    /// Every piece lies inside `q`.
    pub fn supported_in(&self, q: &DyadicCube) -> bool {
        self.pieces.keys().all(|c| q.contains_cube(c))
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            pieces: self.pieces.iter().map(|(q, p)| (q.clone(), p.scale(c))).collect(),
        }
    }

    /// `1_Q f`: pieces inside `q` are kept, a piece containing `q` is cut down
    /// to `q`, disjoint pieces are dropped.
    pub fn restrict(&self, q: &DyadicCube) -> Self {
        let mut out = Self::zero(self.nvars);
        for (cube, p) in &self.pieces {
            if q.contains_cube(cube) {
                out.pieces.insert(cube.clone(), p.clone());
            } else if cube.contains_cube(q) {
                out.pieces.insert(q.clone(), p.clone());
            }
        }
        out
    }

    /// The piece whose cube contains `point`, if any.
    pub fn piece_at(&self, point: &[Rational]) -> Option<(&DyadicCube, &Poly<C>)> {
        // Keys sort by level first; visit each level present once.
        let mut next = self.pieces.keys().next().map(|q| q.level);
        while let Some(level) = next {
            if let Some(hit) = self.pieces.get_key_value(&DyadicCube::containing(point, level)) {
                return Some(hit);
            }
            next = self.pieces.range(DyadicCube::new(level + 1, Vec::new())..).next().map(|(q, _)| q.level);
        }
        None
    }

    /// `f(point)`, zero off the support.
    pub fn evaluate(&self, point: &[Rational]) -> C {
        match self.piece_at(point) {
            Some((_, p)) => {
                let x: Vec<C> = point.iter().map(C::from_rational).collect();
                p.eval_unchecked(&x)
            }
            None => C::zero(),
        }
    }

    /// `self + c * other`, refining pieces wherever a cube of one operand
    /// strictly contains a cube of the other.
    pub fn add_scaled(&self, other: &Self, c: &C) -> Self {
        assert_eq!(self.nvars, other.nvars, "piecewise dimension mismatch");
        let mut out = self.pieces.clone();
        for (cube, p) in &other.pieces {
            insert_add(&mut out, cube.clone(), p.scale(c));
        }
        out.retain(|_, p| !p.is_zero());
        Self { nvars: self.nvars, pieces: out }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled(other, &C::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(other, &-C::one())
    }

    /// `sum_i c_i f_i`.
    pub fn combination<'a>(nvars: usize, terms: impl IntoIterator<Item = (&'a C, &'a Self)>) -> Self {
        let mut acc = Self::zero(nvars);
        for (c, f) in terms {
            if !c.is_zero() {
                acc = acc.add_scaled(f, c);
            }
        }
        acc
    }

    pub fn to_real(&self) -> RealPiecewise {
        Piecewise {
            nvars: self.nvars,
            pieces: self.pieces.iter().map(|(q, p)| (q.clone(), p.to_real())).collect(),
        }
    }

    pub fn to_texts(&self, order: MonomialOrder) -> Vec<(DyadicCube, String)> {
        self.pieces.iter().map(|(q, p)| (q.clone(), p.to_text(order))).collect()
    }
}

fn insert_add<C: Scalar>(map: &mut BTreeMap<DyadicCube, Poly<C>>, cube: DyadicCube, p: Poly<C>) {
    if let Some(existing) = map.get_mut(&cube) {
        *existing = &*existing + &p;
        return;
    }
    if let Some(anc) = map.keys().find(|k| k.strictly_contains(&cube)).cloned() {
        let q = map.remove(&anc).expect("key present");
        for child in anc.children() {
            map.insert(child, q.clone());
        }
        insert_add(map, cube, p);
        return;
    }
    if map.keys().any(|k| cube.strictly_contains(k)) {
        for child in cube.children() {
            insert_add(map, child, p.clone());
        }
        return;
    }
    map.insert(cube, p);
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

    #[test]
    fn overlapping_pieces_rejected() {
        let r = PiecewisePoly::from_pieces(1, [(cube(0, &[0]), poly("1")), (cube(-1, &[1]), poly("x1"))]);
        assert!(matches!(r, Err(Error::OverlappingPieces(_, _))));
    }

    #[test]
    fn addition_refines_coarse_pieces() {
        let coarse = PiecewisePoly::on_cube(cube(0, &[0]), poly("1"));
        let fine = PiecewisePoly::on_cube(cube(-2, &[3]), poly("x1"));
        let sum = coarse.add(&fine);
        for i in 0..40 {
            let x = [frac(i, 40)];
            assert_eq!(sum.evaluate(&x), coarse.evaluate(&x) + fine.evaluate(&x));
        }
        let back = sum.sub(&fine);
        for i in 0..40 {
            let x = [frac(i, 40)];
            assert_eq!(back.evaluate(&x), int(1));
        }
        let fine_first = fine.add(&coarse);
        for i in 0..40 {
            let x = [frac(i, 40)];
            assert_eq!(fine_first.evaluate(&x), sum.evaluate(&x));
        }
    }

    #[test]
    fn restriction() {
        let f = PiecewisePoly::on_cube(cube(1, &[0]), poly("x1"));
        let r = f.restrict(&cube(-1, &[1]));
        assert_eq!(r.pieces().count(), 1);
        assert!(r.supported_in(&cube(-1, &[1])));
        assert!(f.restrict(&cube(0, &[5])).is_zero());
        assert!(f.add(&f.scale(&int(-1))).is_zero());
    }
}
