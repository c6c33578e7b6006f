//! Seeded corpus generation and the oracle battery, as a library: random
//! weighted presentations, symbolic results cross-checked against
//! brute-force enumeration.
//!
//! Run with `cargo run --example random_corpus`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use treespace::check::run_checks;
use treespace::gen::{gen_presentation, gen_weights, GenConfig};
use treespace::rat::rat;

fn main() {
    let cfg = GenConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..5 {
        let p = gen_presentation(&mut rng, &cfg);
        let w = gen_weights(&mut rng, &p, &cfg);
        let checks = run_checks(&p, &w, &rat(1, 8), None, None);
        let passed = checks.iter().filter(|c| c.pass).count();
        println!(
            "tree {i}: {} nodes, depth {} -> {passed}/{} checks pass",
            p.template_node_count(),
            p.depth(),
            checks.len()
        );
        for c in checks.iter().filter(|c| !c.pass) {
            println!("  FAIL {}: {}", c.name, c.detail);
        }
    }
}
