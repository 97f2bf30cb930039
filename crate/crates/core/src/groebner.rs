//! Buchberger's algorithm, reduced Gröbner bases, and the monomial
//! bookkeeping built on leading terms: the `gdep`/`gind` split of `F^n_k`,
//! staircase counts and Hilbert dimension.

use std::collections::BTreeSet;

use num::One;

use crate::error::{Error, Result};
use crate::polynomial::{f_n_k, Monomial, MonomialOrder, Polynomial};
use crate::rational::Rational;

/// Generators of an ideal under a fixed monomial order. When `reduced` is set
/// the generators form the unique reduced Gröbner basis, sorted ascending by
/// leading monomial.
#[derive(Clone, Debug, PartialEq)]
pub struct GroebnerBasis {
    nvars: usize,
    order: MonomialOrder,
    generators: Vec<Polynomial>,
    reduced: bool,
}

impl GroebnerBasis {
    pub fn zero_ideal(nvars: usize, order: MonomialOrder) -> Self {
        Self { nvars, order, generators: Vec::new(), reduced: true }
    }

    pub fn unit_ideal(nvars: usize, order: MonomialOrder) -> Self {
        Self { nvars, order, generators: vec![Polynomial::one(nvars)], reduced: true }
    }

    /// Wraps generators already known to be the reduced basis (for instance
    /// the output of Buchberger-Möller). Normalizes them to monic form and
    /// sorts them; [`GroebnerBasis::is_reduced`] can confirm the claim.
    pub(crate) fn from_reduced(nvars: usize, order: MonomialOrder, mut generators: Vec<Polynomial>) -> Self {
        generators = generators.into_iter().map(|g| g.monic(order)).collect();
        sort_by_leading(&mut generators, order);
        Self { nvars, order, generators, reduced: true }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn is_flagged_reduced(&self) -> bool {
        self.reduced
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.generators.iter().any(|g| g.len() == 1 && g.leading_monomial(self.order).is_some_and(Monomial::is_one))
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.generators
            .iter()
            .filter_map(|g| g.leading_monomial(self.order).cloned())
            .collect()
    }

    pub fn normal_form(&self, p: &Polynomial) -> Polynomial {
        reduce(p, &self.generators, self.order)
    }

    /// Ideal membership; exact because the generators are a Gröbner basis.
    pub fn contains(&self, p: &Polynomial) -> bool {
        self.normal_form(p).is_zero()
    }

    /// Every S-polynomial reduces to zero.
    pub fn is_groebner(&self) -> bool {
        let g = &self.generators;
        (0..g.len()).all(|i| (i + 1..g.len()).all(|j| reduce(&s_polynomial(&g[i], &g[j], self.order), g, self.order).is_zero()))
    }

    /// Monic, and no monomial of any generator lies in the leading-term ideal
    /// of the others.
    pub fn is_reduced(&self) -> bool {
        let lts = self.leading_monomials();
        self.generators.iter().enumerate().all(|(i, g)| {
            let monic = g.leading_term(self.order).is_ok_and(|(_, c)| c.is_one());
            monic
                && g.monomials()
                    .all(|m| lts.iter().enumerate().all(|(j, lt)| j == i || !lt.divides(m)))
        })
    }

    fn lt_divides(&self, lts: &[Monomial], m: &Monomial) -> bool {
        lts.iter().any(|lt| lt.divides(m))
    }

    /// Splits `F^n_k` into monomials divisible by some leading term (`gdep`)
    /// and the rest (`gind`), both ascending under the basis order.
    pub fn gdep_gind(&self, k: u32) -> Result<(Vec<Monomial>, Vec<Monomial>)> {
        if !self.order.is_graded() {
            return Err(Error::NonGradedOrder(self.order));
        }
        let lts = self.leading_monomials();
        Ok(f_n_k(self.nvars, k, self.order)
            .into_iter()
            .partition(|m| self.lt_divides(&lts, m)))
    }

    /// `#gind_k`, the number of standard monomials of degree `< k`.
    pub fn staircase_count(&self, k: u32) -> Result<usize> {
        Ok(self.gdep_gind(k)?.1.len())
    }

    /// All standard monomials, or `None` when infinitely many exist.
    pub fn standard_monomials(&self) -> Option<Vec<Monomial>> {
        if !self.is_zero_dimensional() {
            return None;
        }
        let lts = self.leading_monomials();
        // Each variable has a pure power among the leading terms; degrees of
        // standard monomials are bounded by the sum of those exponents.
        let bound: u32 = (0..self.nvars)
            .map(|i| {
                lts.iter()
                    .filter(|m| m.support_mask() == 1 << i)
                    .map(|m| m.exponents()[i])
                    .min()
                    .unwrap_or(0)
            })
            .sum();
        let mut out: Vec<Monomial> = f_n_k(self.nvars, bound + 1, self.order)
            .into_iter()
            .filter(|m| !self.lt_divides(&lts, m))
            .collect();
        self.order.sort(&mut out);
        Some(out)
    }

    /// Finitely many standard monomials: either the unit ideal or a pure
    /// power of every variable among the leading terms.
    pub fn is_zero_dimensional(&self) -> bool {
        if self.is_unit_ideal() {
            return true;
        }
        let lts = self.leading_monomials();
        (0..self.nvars).all(|i| lts.iter().any(|m| m.support_mask() == 1 << i))
    }

    /// Size of the largest set of variables none of whose products is a
    /// leading monomial. `n` for the zero ideal and `-1` for the unit ideal,
    /// where no set qualifies.
    pub fn hilbert_dimension(&self) -> Result<i32> {
        if self.nvars > 16 {
            return Err(Error::TooManyVariables(self.nvars));
        }
        let masks: Vec<u64> = self.leading_monomials().iter().map(Monomial::support_mask).collect();
        let n = self.nvars;
        let mut best = -1i32;
        for subset in 0u64..(1 << n) {
            let size = subset.count_ones() as i32;
            if size <= best {
                continue;
            }
            if masks.iter().all(|&m| m & !subset != 0) {
                best = size;
            }
        }
        Ok(best)
    }
}

fn sort_by_leading(polys: &mut [Polynomial], order: MonomialOrder) {
    polys.sort_by(|a, b| {
        let la = a.leading_monomial(order).expect("nonzero generator");
        let lb = b.leading_monomial(order).expect("nonzero generator");
        order.cmp(la, lb)
    });
}

/// Full multivariate division: the remainder of `p` modulo `basis`, none of
/// whose monomials is divisible by a leading monomial of `basis`.
pub fn reduce(p: &Polynomial, basis: &[Polynomial], order: MonomialOrder) -> Polynomial {
    let leads: Vec<(Monomial, Rational)> = basis
        .iter()
        .filter_map(|g| g.leading_term(order).ok().map(|(m, c)| (m.clone(), c.clone())))
        .collect();
    let divisors: Vec<&Polynomial> = basis.iter().filter(|g| !g.is_zero()).collect();
    let mut rest = p.clone();
    let mut remainder = Polynomial::zero(p.nvars());
    while let Ok((lm, lc)) = rest.leading_term(order) {
        let (lm, lc) = (lm.clone(), lc.clone());
        match leads.iter().position(|(m, _)| m.divides(&lm)) {
            Some(i) => {
                let (gm, gc) = &leads[i];
                let factor = lm.checked_div(gm).expect("divisibility checked");
                let c = -(&lc / gc);
                rest.add_scaled_term(divisors[i], &factor, &c);
            }
            None => {
                let t = Polynomial::term(lm, lc);
                rest = &rest - &t;
                remainder = &remainder + &t;
            }
        }
    }
    remainder
}

pub fn s_polynomial(f: &Polynomial, g: &Polynomial, order: MonomialOrder) -> Polynomial {
    let (Ok((fm, fc)), Ok((gm, gc))) = (f.leading_term(order), g.leading_term(order)) else {
        return Polynomial::zero(f.nvars());
    };
    let l = fm.lcm(gm);
    let a = f.mul_term(&l.checked_div(fm).expect("lcm"), &fc.recip());
    let b = g.mul_term(&l.checked_div(gm).expect("lcm"), &gc.recip());
    &a - &b
}

/// The reduced Gröbner basis of the ideal generated by `gens`.
pub fn buchberger(gens: &[Polynomial], order: MonomialOrder) -> Result<GroebnerBasis> {
    buchberger_bounded(gens, order, usize::MAX)
}

/// [`buchberger`] that gives up after `budget` S-polynomial reductions.
///
/// Pairs are selected by smallest lcm (normal strategy) and pruned with the
/// product criterion and the chain criterion.
pub fn buchberger_bounded(gens: &[Polynomial], order: MonomialOrder, budget: usize) -> Result<GroebnerBasis> {
    let Some(first) = gens.first() else {
        return Err(Error::Parse("no generators given; the number of variables is unknown".into()));
    };
    let nvars = first.nvars();
    if let Some(g) = gens.iter().find(|g| g.nvars() != nvars) {
        return Err(Error::DimensionMismatch { expected: nvars, found: g.nvars() });
    }
    let mut basis: Vec<Polynomial> = Vec::new();
    let mut leads: Vec<Monomial> = Vec::new();
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();

    let push = |p: Polynomial, basis: &mut Vec<Polynomial>, leads: &mut Vec<Monomial>, pending: &mut BTreeSet<(usize, usize)>| {
        let p = p.monic(order);
        let lm = p.leading_monomial(order).expect("nonzero").clone();
        let t = basis.len();
        for i in 0..t {
            pending.insert((i, t));
        }
        basis.push(p);
        leads.push(lm);
    };

    for g in gens {
        let r = reduce(g, &basis, order);
        if !r.is_zero() {
            push(r, &mut basis, &mut leads, &mut pending);
        }
    }

    let mut reductions = 0usize;
    while let Some(&(i, j)) = pending
        .iter()
        .min_by(|a, b| order.cmp(&leads[a.0].lcm(&leads[a.1]), &leads[b.0].lcm(&leads[b.1])).then(a.cmp(b)))
    {
        pending.remove(&(i, j));
        if leads[i].is_coprime(&leads[j]) {
            continue;
        }
        let l = leads[i].lcm(&leads[j]);
        let key = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
        let chain = (0..basis.len()).any(|k| {
            k != i && k != j && leads[k].divides(&l) && !pending.contains(&key(i, k)) && !pending.contains(&key(j, k))
        });
        if chain {
            continue;
        }
        if reductions >= budget {
            return Err(Error::BudgetExceeded(budget));
        }
        reductions += 1;
        let r = reduce(&s_polynomial(&basis[i], &basis[j], order), &basis, order);
        if !r.is_zero() {
            push(r, &mut basis, &mut leads, &mut pending);
        }
    }

    Ok(GroebnerBasis { nvars, order, generators: interreduce(basis, order), reduced: true })
}

/// Turns a Gröbner basis into the reduced one: drop generators whose leading
/// monomial is a multiple of another's, then reduce each tail.
pub fn interreduce(basis: Vec<Polynomial>, order: MonomialOrder) -> Vec<Polynomial> {
    let mut basis: Vec<Polynomial> = basis.into_iter().filter(|g| !g.is_zero()).map(|g| g.monic(order)).collect();
    sort_by_leading(&mut basis, order);
    let mut minimal: Vec<Polynomial> = Vec::new();
    for g in basis {
        let lm = g.leading_monomial(order).expect("nonzero").clone();
        let redundant = minimal
            .iter()
            .any(|h| h.leading_monomial(order).expect("nonzero").divides(&lm));
        if !redundant {
            minimal.push(g);
        }
    }
    let mut out = minimal.clone();
    for i in 0..out.len() {
        let others: Vec<Polynomial> = out.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
        out[i] = reduce(&out[i], &others, order).monic(order);
    }
    sort_by_leading(&mut out, order);
    out
}

/// Whether every polynomial of `basis` has zero remainder modulo `gb`.
pub fn generates_within(basis: &[Polynomial], gb: &GroebnerBasis) -> bool {
    basis.iter().all(|p| gb.contains(p))
}
