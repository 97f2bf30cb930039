use std::cmp::Ordering;

use alpert::basis::{build, FamilyAssignment, FamilyScope};
use alpert::dyadic::{DyadicCube, GridWindow};
use alpert::groebner::{buchberger, reduce};
use alpert::measure::Measure;
use alpert::piecewise::PiecewisePoly;
use alpert::polynomial::{f_n_k, Monomial, MonomialOrder, Polynomial};
use alpert::rational::{frac, Rational};
use alpert::spaces::{
    alpert_space_basis, ambient_functions, component_dimension, dimension_report, FunctionFamily,
};
use alpert::vanishing::buchberger_moller;
use num::{Signed, Zero};
use proptest::prelude::*;

fn order() -> impl Strategy<Value = MonomialOrder> {
    prop_oneof![Just(MonomialOrder::Lex), Just(MonomialOrder::Grlex), Just(MonomialOrder::Grevlex)]
}

fn graded_order() -> impl Strategy<Value = MonomialOrder> {
    prop_oneof![Just(MonomialOrder::Grlex), Just(MonomialOrder::Grevlex)]
}

fn rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=6).prop_map(|(p, q)| frac(p, q))
}

fn monomial(nvars: usize, max_exp: u32) -> impl Strategy<Value = Monomial> {
    prop::collection::vec(0..=max_exp, nvars).prop_map(Monomial::new)
}

fn poly(nvars: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((monomial(nvars, 3), rational()), 0..5)
        .prop_map(move |terms| Polynomial::from_terms(nvars, terms).unwrap())
}

/// Distinct points of `(1/16) Z^n ∩ [0,1)^n`.
fn points(nvars: usize, max: usize) -> impl Strategy<Value = Vec<Vec<Rational>>> {
    prop::collection::vec(prop::collection::vec(0i64..16, nvars), 1..=max).prop_map(|pts| {
        let mut pts: Vec<Vec<Rational>> =
            pts.into_iter().map(|p| p.into_iter().map(|c| frac(c, 16)).collect()).collect();
        pts.sort();
        pts.dedup();
        pts
    })
}

fn family(nvars: usize, max: usize) -> impl Strategy<Value = FunctionFamily> {
    prop::collection::vec(poly(nvars), 0..=max).prop_map(move |m| {
        FunctionFamily::new(nvars, m.into_iter().filter(|p| !p.is_zero()).collect()).unwrap()
    })
}

fn unit(nvars: usize) -> DyadicCube {
    DyadicCube::new(0, vec![0; nvars])
}

proptest! {
    #[test]
    fn children_partition_their_parent(level in -4i32..4, coords in prop::collection::vec(-20i64..20, 1..=3)) {
        let q = DyadicCube::new(level, coords);
        let kids = q.children();
        prop_assert_eq!(kids.len(), 1 << q.dim());
        let total = kids.iter().fold(Rational::zero(), |acc, c| acc + c.volume());
        prop_assert_eq!(total, q.volume());
        for (i, c) in kids.iter().enumerate() {
            prop_assert_eq!(&c.parent(), &q);
            prop_assert!(q.strictly_contains(c));
            for d in &kids[..i] {
                prop_assert!(!c.intersects(d));
            }
        }
    }

    #[test]
    fn containing_cube_holds_the_point(point in prop::collection::vec(rational(), 1..=3), level in -5i32..3) {
        let q = DyadicCube::containing(&point, level);
        prop_assert!(q.contains_point(&point));
        let up = q.ancestor_at(level + 2).unwrap();
        prop_assert!(up.contains_point(&point));
        prop_assert!(up.contains_cube(&q));
    }

    #[test]
    fn text_round_trips(p in poly(3), o in order()) {
        prop_assert_eq!(Polynomial::parse(&p.to_text(o), 3).unwrap(), p);
    }

    #[test]
    fn ring_laws(p in poly(2), q in poly(2), r in poly(2), x in prop::collection::vec(rational(), 2)) {
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p + &q) * &r, &(&p * &r) + &(&q * &r));
        prop_assert!((&p - &p).is_zero());
        let lhs = (&p * &q).evaluate(&x).unwrap();
        prop_assert_eq!(lhs, p.evaluate(&x).unwrap() * q.evaluate(&x).unwrap());
    }

    #[test]
    fn shift_inverts(p in poly(2), s in prop::collection::vec(rational(), 2)) {
        let back: Vec<Rational> = s.iter().map(|c| -c.clone()).collect();
        prop_assert_eq!(p.shift(&s).unwrap().shift(&back).unwrap(), p);
    }

    #[test]
    fn orders_are_admissible(u in monomial(3, 4), v in monomial(3, 4), w in monomial(3, 4), o in order()) {
        prop_assert_eq!(o.cmp(&u, &v), o.cmp(&v, &u).reverse());
        prop_assert_eq!(o.cmp(&u, &v) == Ordering::Equal, u == v);
        prop_assert_eq!(o.cmp(&u.mul(&w), &v.mul(&w)), o.cmp(&u, &v));
        prop_assert_ne!(o.cmp(&Monomial::one(3), &u), Ordering::Greater);
        if o.is_graded() && u.degree() < v.degree() {
            prop_assert_eq!(o.cmp(&u, &v), Ordering::Less);
        }
    }

    #[test]
    fn f_n_k_counts(n in 1usize..=4, k in 0u32..=5, o in graded_order()) {
        let fam = f_n_k(n, k, o);
        let binom = |a: usize, b: usize| (0..b).fold(1usize, |acc, i| acc * (a - i) / (i + 1));
        prop_assert_eq!(fam.len(), if k == 0 { 0 } else { binom(n + k as usize - 1, n) });
        prop_assert!(fam.windows(2).all(|w| o.cmp(&w[0], &w[1]) == Ordering::Less));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn buchberger_output_is_the_reduced_basis(gens in prop::collection::vec(poly(2), 1..4), o in order()) {
        prop_assume!(gens.iter().any(|g| !g.is_zero()));
        let gb = buchberger(&gens, o).unwrap();
        prop_assert!(gb.is_groebner());
        prop_assert!(gb.is_reduced());
        for g in &gens {
            prop_assert!(reduce(g, gb.generators(), o).is_zero());
        }
        let mut rev = gens.clone();
        rev.reverse();
        prop_assert_eq!(&buchberger(&rev, o).unwrap(), &gb);
        prop_assert_eq!(&buchberger(gb.generators(), o).unwrap(), &gb);
    }

    #[test]
    fn staircase_counts_grow(gens in prop::collection::vec(poly(2), 1..3), o in graded_order()) {
        prop_assume!(gens.iter().any(|g| !g.is_zero()));
        let gb = buchberger(&gens, o).unwrap();
        let counts: Vec<usize> = (1..=6).map(|k| gb.staircase_count(k).unwrap()).collect();
        prop_assert!(counts.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn inner_products_are_symmetric_and_mass_is_additive(
        pts in points(2, 8),
        p in poly(2),
        q in poly(2),
    ) {
        let mu = Measure::counting(2, pts).unwrap();
        let c = unit(2);
        let f = PiecewisePoly::on_cube(c.clone(), p);
        let g = PiecewisePoly::on_cube(c.children()[1].clone(), q);
        prop_assert_eq!(mu.inner(&f, &g), mu.inner(&g, &f));
        prop_assert!(!mu.norm_sq(&f).is_negative());
        let split = c.children().iter().fold(Rational::zero(), |acc, k| acc + mu.mass(k));
        prop_assert_eq!(split, mu.mass(&c));
    }

    #[test]
    fn buchberger_moller_matches_its_points(pts in points(2, 9), o in graded_order()) {
        let (gb, stairs) = buchberger_moller(2, &pts, o);
        prop_assert_eq!(stairs.len(), pts.len());
        prop_assert!(gb.is_reduced());
        for g in gb.generators() {
            for x in &pts {
                prop_assert!(g.evaluate(x).unwrap().is_zero());
            }
        }
        prop_assert_eq!(&buchberger(gb.generators(), o).unwrap(), &gb);
    }

    #[test]
    fn gram_rank_equals_staircase(pts in points(2, 10), planted in 0usize..3) {
        let pts: Vec<Vec<Rational>> = match planted {
            1 => pts.into_iter().map(|p| vec![p[0].clone(), p[0].clone()]).collect(),
            2 => pts.into_iter().map(|p| vec![p[0].clone(), &p[0] * &p[0]]).collect(),
            _ => pts,
        };
        let mut pts = pts;
        pts.sort();
        pts.dedup();
        let mu = Measure::counting(2, pts.clone()).unwrap();
        let (gb, _) = buchberger_moller(2, &pts, MonomialOrder::Grevlex);
        for k in 1..=6 {
            let fam = FunctionFamily::monomials(2, k, MonomialOrder::Grevlex);
            let (gdep, _) = gb.gdep_gind(k).unwrap();
            prop_assert_eq!(component_dimension(&mu, &unit(2), &fam), fam.len() - gdep.len());
        }
    }

    #[test]
    fn direct_sum_identity(pts in points(2, 10), u in family(2, 5)) {
        let mu = Measure::counting(2, pts).unwrap();
        let q = unit(2);
        let ambient = ambient_functions(&mu, &q, &u).len();
        let wavelets = alpert_space_basis(&mu, &q, &u, &u).len();
        prop_assert_eq!(ambient, wavelets + component_dimension(&mu, &q, &u));
    }

    #[test]
    fn alpert_bases_are_exactly_orthogonal(pts in points(2, 10), u in family(2, 5), v in family(2, 5)) {
        let mu = Measure::counting(2, pts).unwrap();
        let q = unit(2);
        let basis = alpert_space_basis(&mu, &q, &u, &v);
        prop_assert!(basis.is_certified());
        prop_assert!(basis.normalization_error(&mu) < 1e-12);
        for b in &basis.functions {
            prop_assert!(b.exact.supported_in(&q));
            for vq in v.restricted_to(&q) {
                prop_assert!(mu.inner(&b.exact, &vq).is_zero());
            }
        }
    }

    #[test]
    fn dimension_bounds_hold(pts in points(2, 10), u in family(2, 5), v in family(2, 5)) {
        let mu = Measure::counting(2, pts).unwrap();
        let r = dimension_report(&mu, &unit(2), &u, &v);
        prop_assert!(r.violations().is_empty(), "{:?}", r.violations());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn bundles_count_atoms_and_satisfy_parseval(cells in prop::collection::btree_set(0i64..32, 1..20), seed in 0u64..1000) {
        let pts: Vec<Vec<Rational>> = cells.into_iter().map(|c| vec![frac(c, 32)]).collect();
        let n = pts.len();
        let mu = Measure::counting(1, pts).unwrap();
        let window = GridWindow::new(-5, 0, vec![unit(1)]).unwrap();
        let assignment = FamilyAssignment::constant(FunctionFamily::constants(1))
            .with_override(FamilyScope::BelowLevel(-2), FunctionFamily::monomials(1, 2, MonomialOrder::Grevlex));
        let bundle = build(&mu, &window, &assignment).unwrap();
        prop_assert_eq!(bundle.len(), n);
        for d in bundle.dimension_table() {
            prop_assert_eq!(d.wavelets, d.predicted_wavelets);
            prop_assert_eq!(d.complements + d.tops, d.predicted_complements);
        }
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let f = bundle.sample_resolvable(&mut rng);
        let coeffs = bundle.expand(&f).unwrap();
        let energy: f64 = coeffs.iter().map(|c| c * c).sum();
        let norm = num::ToPrimitive::to_f64(&mu.norm_sq(&f)).unwrap();
        prop_assert!((energy - norm).abs() <= 1e-9 * norm.max(1.0));
    }

    #[test]
    fn constant_assignment_has_no_complements(cells in prop::collection::btree_set(0i64..16, 1..12), k in 1u32..=3) {
        let pts: Vec<Vec<Rational>> = cells.into_iter().map(|c| vec![frac(c, 16)]).collect();
        let mu = Measure::counting(1, pts).unwrap();
        let window = GridWindow::new(-4, 0, vec![unit(1)]).unwrap();
        let fam = FunctionFamily::monomials(1, k, MonomialOrder::Grevlex);
        let bundle = build(&mu, &window, &FamilyAssignment::constant(fam)).unwrap();
        prop_assert!(bundle.complements.is_empty());
        prop_assert!(bundle.verify_orthogonality().max_violation() < 1e-10);
    }
}
