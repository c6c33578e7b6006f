//! Epsilon-derivation of closed subsets under a weighted ultrametric, and
//! the fragmentation index it computes. The same tree fragments in two steps
//! at a coarse scale and three at a fine one.
//!
//! Run with `cargo run --example fragmentation_sequence`.

use treespace::fragmentation::{derivation_sequence, frag_index_sup, TemplateMarking};
use treespace::gen::{t2, t2_decaying_weights};
use treespace::rat::rat;

fn main() {
    let p = t2();
    let w = t2_decaying_weights(&p);
    let full = TemplateMarking::full(&p);

    for eps in [rat(1, 2), rat(1, 8)] {
        println!("epsilon = {eps}:");
        let seq = derivation_sequence(&p, &w, &eps, &full);
        for (i, m) in seq.iter().enumerate() {
            let marked: Vec<String> = m
                .marked_paths(&p)
                .iter()
                .map(|t| t.to_string())
                .collect();
            println!("  step {i}: {{{}}}", marked.join(", "));
        }
        println!("  fragmentation index: {}", seq.len() - 1);
    }

    // the supremum over all positive scales is attained below the smallest
    // positive weight
    println!("index over all scales: {:?}", frag_index_sup(&p, &w, &full));
}
