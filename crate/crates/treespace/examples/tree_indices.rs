//! Topological indices of presented tree spaces: the ordinal index (iterated
//! removal of maximal nodes), the interval type (the ordinal interval the
//! branch space is homeomorphic to), and the Cantor-Bendixson rank.
//!
//! Run with `cargo run --example tree_indices`.

use treespace::gen::{t1, t2};
use treespace::indices::{cb_rank, interval_type, ordinal_index, point_to_ordinal};
use treespace::presentation::{PointAddress, TreePresentation};

fn describe(name: &str, p: &TreePresentation) {
    let (rank, count) = cb_rank(p);
    println!(
        "{name:<18} o = {:<4} beta = {:<8} rank = {rank} with {count} final point(s)",
        ordinal_index(p).to_string(),
        interval_type(p).to_string(),
    );
}

fn main() {
    let leaf = TreePresentation::single_leaf();
    describe("single leaf", &leaf);
    describe("omega leaves", &t1());
    describe("omega copies", &t2());

    let forest = TreePresentation {
        roots: vec![
            t1().roots[0].clone(),
            t1().roots[0].clone(),
            t1().roots[0].clone(),
        ],
    };
    describe("three-root forest", &forest);

    // the homeomorphism onto the interval, point by point
    let p = t1();
    println!("\nimages of branches of the omega-leaf tree under the interval map:");
    let root = PointAddress::root_branch(0);
    for n in 0..4 {
        let leaf = root.child(0, n);
        println!("  {leaf}  ->  {}", point_to_ordinal(&p, &leaf));
    }
    println!("  {root}      ->  {}", point_to_ordinal(&p, &root));
}
