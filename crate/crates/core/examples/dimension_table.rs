//! Per-cube dimension table of a basis next to the predicted counts.

use std::path::Path;

use alpert::basis::build;
use alpert::config::BasisConfig;

fn main() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/mixed.json");
    let (cfg, mu) = BasisConfig::load(&path).unwrap();
    let bundle = build(&mu, &cfg.window, &cfg.assignment()).unwrap();
    println!("{:<24} {:>8} {:>8} {:>6}", "cube", "wavelet", "complem", "top");
    for d in bundle.dimension_table() {
        println!(
            "{:<24} {:>3} ({:>2}) {:>3} ({:>2}) {:>6}",
            d.cube.to_string(),
            d.wavelets,
            d.predicted_wavelets,
            d.complements,
            d.predicted_complements,
            d.tops
        );
    }
}
