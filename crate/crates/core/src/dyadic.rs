//! Dyadic cubes, grid windows and towers.
//!
//! A cube is stored as an integer level `m` and integer coordinates `c`, and
//! denotes the half-open box `prod_i [c_i 2^m, (c_i + 1) 2^m)`. Keeping cubes
//! symbolic makes boundary membership exact.

use std::fmt;
use std::str::FromStr;

use num::{BigInt, Integer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{pow2, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DyadicCube {
    pub level: i32,
    pub coords: Vec<i64>,
}

impl DyadicCube {
    pub fn new(level: i32, coords: Vec<i64>) -> Self {
        Self { level, coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Side length `2^level`.
    pub fn side(&self) -> Rational {
        pow2(self.level)
    }

    pub fn lower(&self, axis: usize) -> Rational {
        Rational::from_integer(BigInt::from(self.coords[axis])) * self.side()
    }

    pub fn upper(&self, axis: usize) -> Rational {
        Rational::from_integer(BigInt::from(self.coords[axis] + 1)) * self.side()
    }

    /// `2^(n * level)`.
    pub fn volume(&self) -> Rational {
        pow2(self.level * self.dim() as i32)
    }

    /// The `2^n` children, ordered by the offset bitmask with axis 0 as the
    /// least significant bit.
    pub fn children(&self) -> Vec<DyadicCube> {
        let n = self.dim();
        (0..1usize << n)
            .map(|mask| {
                let coords = self
                    .coords
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| 2 * c + ((mask >> i) & 1) as i64)
                    .collect();
                DyadicCube::new(self.level - 1, coords)
            })
            .collect()
    }

    pub fn parent(&self) -> DyadicCube {
        DyadicCube::new(self.level + 1, self.coords.iter().map(|c| c.div_floor(&2)).collect())
    }

    /// The ancestor at `level`; `self` when `level == self.level`.
    pub fn ancestor_at(&self, level: i32) -> Option<DyadicCube> {
        if level < self.level {
            return None;
        }
        let shift = (level - self.level) as u32;
        if shift >= 63 {
            return None;
        }
        let coords = self.coords.iter().map(|c| c >> shift).collect();
        Some(DyadicCube::new(level, coords))
    }

    /// `other ⊆ self`.
    pub fn contains_cube(&self, other: &DyadicCube) -> bool {
        other.dim() == self.dim() && other.ancestor_at(self.level).as_ref() == Some(self)
    }

    pub fn strictly_contains(&self, other: &DyadicCube) -> bool {
        other.level < self.level && self.contains_cube(other)
    }

    /// Dyadic cubes are either nested or disjoint.
    pub fn intersects(&self, other: &DyadicCube) -> bool {
        self.contains_cube(other) || other.contains_cube(self)
    }

    /// Half-open membership: lower faces included, upper faces excluded.
    pub fn contains_point(&self, point: &[Rational]) -> bool {
        if point.len() != self.dim() {
            return false;
        }
        let side = self.side();
        point.iter().zip(&self.coords).all(|(x, &c)| {
            let cell = (x / &side).floor().to_integer();
            cell == BigInt::from(c)
        })
    }

    /// The cube at `level` containing `point`.
    pub fn containing(point: &[Rational], level: i32) -> DyadicCube {
        let side = pow2(level);
        let coords = point
            .iter()
            .map(|x| {
                let cell = (x / &side).floor().to_integer();
                i64::try_from(cell).expect("coordinate out of i64 range")
            })
            .collect();
        DyadicCube::new(level, coords)
    }

    /// The intersection of two cubes, which is the smaller one when nested.
    pub fn intersection(&self, other: &DyadicCube) -> Option<DyadicCube> {
        if self.contains_cube(other) {
            Some(other.clone())
        } else if other.contains_cube(self) {
            Some(self.clone())
        } else {
            None
        }
    }
}

impl fmt::Display for DyadicCube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(level {}, {:?})", self.level, self.coords)
    }
}

/// `"level:c1,c2,..."`, e.g. `"-1:0,3"`, or the JSON object form.
impl FromStr for DyadicCube {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            return serde_json::from_str(s).map_err(|e| Error::Parse(format!("cube {s:?}: {e}")));
        }
        let bad = || Error::Parse(format!("cube {s:?}: expected level:c1,c2,..."));
        let (level, coords) = s.split_once(':').ok_or_else(bad)?;
        let level = level.trim().parse().map_err(|_| bad())?;
        let coords = coords.split(',').map(|c| c.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?;
        Ok(DyadicCube::new(level, coords))
    }
}

/// Finite truncation of a dyadic grid: the cubes inside `roots` with levels in
/// `min_level..=max_level`. Roots stand in for the tops of the grid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridWindow {
    pub min_level: i32,
    pub max_level: i32,
    pub roots: Vec<DyadicCube>,
}

impl GridWindow {
    pub fn new(min_level: i32, max_level: i32, roots: Vec<DyadicCube>) -> Result<Self> {
        let w = Self { min_level, max_level, roots };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if self.min_level > self.max_level {
            return Err(Error::InvalidWindow(format!(
                "min_level {} exceeds max_level {}",
                self.min_level, self.max_level
            )));
        }
        if self.roots.is_empty() {
            return Err(Error::InvalidWindow("no root cubes".into()));
        }
        let n = self.roots[0].dim();
        for (i, r) in self.roots.iter().enumerate() {
            if r.level != self.max_level {
                return Err(Error::InvalidWindow(format!("root {r} is not at max_level {}", self.max_level)));
            }
            if r.dim() != n {
                return Err(Error::InvalidWindow(format!("root {r} has dimension {} != {n}", r.dim())));
            }
            if self.roots[..i].contains(r) {
                return Err(Error::InvalidWindow(format!("root {r} listed twice")));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.roots[0].dim()
    }

    pub fn contains(&self, q: &DyadicCube) -> bool {
        self.root_of(q).is_some()
    }

    pub fn root_of(&self, q: &DyadicCube) -> Option<&DyadicCube> {
        if q.level < self.min_level || q.level > self.max_level {
            return None;
        }
        self.roots.iter().find(|r| r.contains_cube(q))
    }

    /// Whether a cube at or above `min_level` in some root contains `q`
    /// (`q` itself may be finer than the window).
    pub fn covers(&self, q: &DyadicCube) -> bool {
        self.roots.iter().any(|r| r.contains_cube(q))
    }

    /// All window cubes at `level`, root by root, each root's cubes in
    /// ascending coordinate order.
    pub fn cubes_at_level(&self, level: i32) -> Vec<DyadicCube> {
        if level < self.min_level || level > self.max_level {
            return Vec::new();
        }
        let mut out = Vec::new();
        for root in &self.roots {
            let mut layer = vec![root.clone()];
            for _ in level..self.max_level {
                layer = layer.iter().flat_map(DyadicCube::children).collect();
            }
            layer.sort();
            out.extend(layer);
        }
        out
    }

    /// Window cubes accepted by `keep`, descending from each root and pruning
    /// every subtree whose top is rejected. Coarse to fine, within a level in
    /// root order then coordinate order.
    pub fn cubes_where(&self, mut keep: impl FnMut(&DyadicCube) -> bool) -> Vec<DyadicCube> {
        let mut out = Vec::new();
        let mut layer: Vec<DyadicCube> = self.roots.iter().filter(|r| keep(r)).cloned().collect();
        let mut level = self.max_level;
        loop {
            out.extend(layer.iter().cloned());
            if level == self.min_level {
                break;
            }
            let mut next = Vec::new();
            for q in &layer {
                let mut kids: Vec<DyadicCube> = q.children().into_iter().filter(|c| keep(c)).collect();
                kids.sort();
                next.extend(kids);
            }
            layer = next;
            level -= 1;
        }
        out
    }

    /// `Q ⊂ P(Q) ⊂ ...` up to the containing root.
    pub fn tower(&self, q: &DyadicCube) -> Result<Vec<DyadicCube>> {
        if !self.contains(q) {
            return Err(Error::OutsideWindow(q.clone()));
        }
        let mut chain = vec![q.clone()];
        let mut cur = q.clone();
        while cur.level < self.max_level {
            cur = cur.parent();
            chain.push(cur.clone());
        }
        Ok(chain)
    }
}
