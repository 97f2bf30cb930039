//! Piecewise constants on a two-cell interval that are orthogonal to a
//! family V, for three choices of V.
//!
//! The interval [-1, 1) is placed on the grid as [0, 2) via y = x + 1;
//! families are written in x and shifted.

use alpert::dyadic::DyadicCube;
use alpert::measure::Measure;
use alpert::polynomial::Polynomial;
use alpert::rational::int;
use alpert::spaces::{alpert_space_basis, dimension_report, FunctionFamily};

fn family(texts: &[&str]) -> FunctionFamily {
    let members = texts.iter().map(|t| Polynomial::parse(t, 1).unwrap().shift(&[int(-1)]).unwrap()).collect();
    FunctionFamily::new(1, members).unwrap()
}

fn main() {
    let q = DyadicCube::new(1, vec![0]);
    let mu = Measure::lebesgue_on(q.children()).unwrap();
    let u = FunctionFamily::constants(1);
    for (name, v) in [("V = {1}", family(&["1"])), ("V = {1, x}", family(&["1", "x1"])), ("V = {1, x^2}", family(&["1", "x1^2"]))] {
        let report = dimension_report(&mu, &q, &u, &v);
        let basis = alpert_space_basis(&mu, &q, &u, &v);
        println!(
            "{name}: dim = {} in [{}, {}], freebies = {}, certified = {}",
            report.actual,
            report.lower_bound,
            report.upper_bound,
            report.freebies,
            basis.is_certified()
        );
    }
}
