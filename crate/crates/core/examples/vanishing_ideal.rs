//! Vanishing ideal of atoms sampled on a parabola, and the rank it predicts.

use alpert::dyadic::DyadicCube;
use alpert::measure::Measure;
use alpert::polynomial::MonomialOrder;
use alpert::rational::frac;
use alpert::spaces::{component_dimension, FunctionFamily};
use alpert::vanishing::{support, vanishing_ideal};

fn main() {
    let order = MonomialOrder::Grevlex;
    let points: Vec<_> = (0..12).map(|i| vec![frac(i, 12), frac(i * i, 144)]).collect();
    let mu = Measure::counting(2, points).unwrap();
    let q = DyadicCube::new(0, vec![0, 0]);
    let ideal = vanishing_ideal(&support(&mu, &q), order);
    println!("generators:");
    for g in ideal.generators() {
        println!("  {}", g.to_text(order));
    }
    for k in 1..=8 {
        let fam = FunctionFamily::monomials(2, k, order);
        println!(
            "k = {k}: |F| = {:>2}, staircase = {:>2}, Gram rank = {:>2}",
            fam.len(),
            ideal.staircase_count(k).unwrap(),
            component_dimension(&mu, &q, &fam)
        );
    }
}
