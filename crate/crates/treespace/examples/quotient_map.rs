//! The quotient map onto the tree of basic clopen sets: every branch goes to
//! the smallest member containing it, the fibers are the leftover sets, and
//! the preimage of a member's cone is the member itself.
//!
//! Run with `cargo run --example quotient_map`.

use treespace::gen::{t2, t2_decaying_weights};
use treespace::rat::rat;
use treespace::zippin::{build_construction_tree, quotient_map};

fn main() {
    let p = t2();
    let w = t2_decaying_weights(&p);
    let ct = build_construction_tree(&p, &w, &rat(1, 8)).unwrap();

    println!("images of enumerated branches (two copies per countable group):");
    for b in p.enumerate_points(2) {
        let q = quotient_map(&ct, &b).unwrap();
        println!("  q({b})  =  {}   [level {}]", q.clopen, q.alpha);
    }

    // fibers partition the enumerated branch space
    let instances = ct.instances(ct.design_copy_bound());
    let points = p.enumerate_points(ct.design_copy_bound());
    let mut owned = 0usize;
    for m in &instances {
        let fiber: Vec<String> = points
            .iter()
            .filter(|b| quotient_map(&ct, b).unwrap().clopen == m.clopen)
            .map(|b| b.to_string())
            .collect();
        owned += fiber.len();
        println!("leftover set of {}: {{{}}}", m.clopen, fiber.join(", "));
    }
    assert_eq!(owned, points.len());
    println!("{} branches partitioned into {} leftover sets", points.len(), instances.len());
}
