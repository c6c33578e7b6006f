//! Depth-truncated product trees: bounded-size finite subsets of the
//! naturals under extension carry the product topology, realized here as
//! uniform countably-branching trees. A cone minus an initial segment of its
//! child cones is again a basic set of the same shape.
//!
//! Run with `cargo run --example cantor_truncation`.

use treespace::clopen::ClopenDescriptor;
use treespace::indices::{cb_rank, interval_type, ordinal_index};
use treespace::presentation::{cantor_tree, PointAddress};

/// The finite set an address denotes: each copy index picks the next larger
/// element.
fn set_of(addr: &PointAddress) -> Vec<usize> {
    let mut out = Vec::new();
    let mut max = 0;
    for &(_, c) in &addr.steps {
        max += 1 + c;
        out.push(max);
    }
    out
}

fn main() {
    for depth in 0..=3 {
        let p = cantor_tree(depth);
        println!(
            "depth {depth}: o = {:<3} beta = {:<8} rank = {:?}",
            ordinal_index(&p).to_string(),
            interval_type(&p).to_string(),
            cb_rank(&p)
        );
    }

    // sets denoted by enumerated addresses
    let p = cantor_tree(2);
    println!("\naddresses of the depth-2 truncation and the sets they denote:");
    for b in p.enumerate_points(3) {
        println!("  {b:<12} ~ {:?}", set_of(&b));
    }

    // a cone minus the child cones up to N equals the branches whose next
    // element exceeds N
    let a = PointAddress::root_branch(0).child(0, 0); // the set {1}
    let n_bound = 3;
    let u_a_n = ClopenDescriptor::with_exclusions(a.clone(), (0..n_bound - 1).map(|c| (0, c)));
    println!("\nmembers of U_A,N for A = {{1}}, N = {n_bound}:");
    for x in p.enumerate_points(4) {
        if u_a_n.member(&x) {
            println!("  {:?}", set_of(&x));
        }
    }
}
