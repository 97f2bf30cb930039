//! Reduced Gröbner basis of the twisted cubic and its staircase growth.

use alpert::groebner::buchberger;
use alpert::polynomial::{MonomialOrder, Polynomial};

fn main() {
    let order = MonomialOrder::Grevlex;
    let gens: Vec<Polynomial> =
        ["x2 - x1^2", "x3 - x1^3"].iter().map(|t| Polynomial::parse(t, 3).unwrap()).collect();
    let gb = buchberger(&gens, order).unwrap();
    for g in gb.generators() {
        println!("  {}", g.to_text(order));
    }
    println!("hilbert dimension: {}", gb.hilbert_dimension().unwrap());
    for k in [2u32, 4, 8, 16, 32] {
        let count = gb.staircase_count(k).unwrap();
        println!("k = {k:>2}: {count:>3} standard monomials (ratio to k: {:.3})", count as f64 / k as f64);
    }
}
