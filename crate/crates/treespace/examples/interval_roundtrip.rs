//! Both directions of the tree/interval correspondence: presenting the
//! ordinal interval `[0, beta]` as a tree for any `beta` below `w^w`, and
//! recovering `beta` from the presentation.
//!
//! Run with `cargo run --example interval_roundtrip`.

use treespace::indices::{interval_type, tree_of_interval};
use treespace::ordinal::Ordinal;

fn main() {
    for text in ["0", "5", "w", "w*2+3", "w^(2)", "w^(3)*2+w*4+17"] {
        let beta: Ordinal = text.parse().unwrap();
        let p = tree_of_interval(&beta).unwrap();
        println!(
            "beta = {text:<16} tree: {:>3} nodes, depth {:<2} interval_type back = {}",
            p.template_node_count(),
            p.depth(),
            interval_type(&p)
        );
        assert_eq!(interval_type(&p), beta);
    }

    // w^w and beyond have no finite-depth regular presentation
    let too_big: Ordinal = "w^(w)".parse().unwrap();
    match tree_of_interval(&too_big) {
        Err(e) => println!("w^(w): {e}"),
        Ok(_) => unreachable!(),
    }
}
