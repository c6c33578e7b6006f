//! DOT rendering of presentations and construction trees; countable groups
//! show as single template nodes with annotated edges.
//!
//! Run with `cargo run --example dot_export`.

use treespace::dot::{construction_dot, presentation_dot};
use treespace::gen::{t2, t2_decaying_weights};
use treespace::rat::rat;
use treespace::zippin::build_construction_tree;

fn main() {
    let p = t2();
    println!("{}", presentation_dot(&p));

    let w = t2_decaying_weights(&p);
    let ct = build_construction_tree(&p, &w, &rat(1, 8)).unwrap();
    println!("{}", construction_dot(&ct));
}
