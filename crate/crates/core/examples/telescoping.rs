//! Compares the projection telescoping identity on every admissible pair of
//! cubes in a Lebesgue window.

use std::path::Path;

use alpert::basis::build;
use alpert::cli::telescoping_pairs;
use alpert::config::BasisConfig;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/mixed.json");
    let (cfg, mu) = BasisConfig::load(&path).unwrap();
    let bundle = build(&mu, &cfg.window, &cfg.assignment()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (q, r) in telescoping_pairs(&bundle) {
        let gap = bundle.verify_telescoping(&q, &r, 5, &mut rng).unwrap();
        println!("{q} inside {r}: {gap:.2e}");
    }
}
