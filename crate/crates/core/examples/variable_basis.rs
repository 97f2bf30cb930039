//! Builds a basis whose degree varies across the grid and round-trips a
//! random function through it.

use std::path::Path;

use alpert::basis::build;
use alpert::config::BasisConfig;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/atomic.json");
    let (cfg, mu) = BasisConfig::load(&path).unwrap();
    let bundle = build(&mu, &cfg.window, &cfg.assignment()).unwrap();
    println!(
        "{} functions: {} tops, {} complement cubes, {} wavelet cubes",
        bundle.len(),
        bundle.tops.values().map(|b| b.len()).sum::<usize>(),
        bundle.complements.len(),
        bundle.wavelets.len()
    );
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let f = bundle.sample_resolvable(&mut rng);
    let coeffs = bundle.expand(&f).unwrap();
    let largest = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    println!("largest coefficient: {largest:.4}");
    println!("relative residual: {:.2e}", bundle.residual(&f).unwrap());
    println!("orthogonality defect: {:.2e}", bundle.verify_orthogonality().max_violation());
}
