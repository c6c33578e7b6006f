//! The full approximation pipeline: a Lipschitz function on the branch space
//! is approximated within `L * epsilon` by a locally constant function that
//! factors through the quotient of the clopen family built at `epsilon / 2`.
//!
//! Run with `cargo run --example lipschitz_approximation`.

use treespace::approx::approximate;
use treespace::gen::{t2, t2_decaying_weights};
use treespace::rat::{format_rat, rat, rat_int};
use treespace::simple_fn::{SimpleFunction, ValueGroup, ValueNode};

fn main() {
    let p = t2();
    let w = t2_decaying_weights(&p);

    // a two-level profile: 0 on the tail, 1 on the first middle copy, 5/4 on
    // its first leaf
    let mut g = SimpleFunction::constant(&p, rat_int(0));
    g.roots[0].groups[0].explicit = vec![ValueNode {
        value: rat_int(1),
        groups: vec![ValueGroup {
            explicit: vec![ValueNode {
                value: rat(5, 4),
                groups: vec![],
            }],
        }],
    }];

    for eps in [rat(1, 2), rat(1, 4), rat(1, 8)] {
        let a = approximate(&p, &w, &g, &eps).unwrap();
        assert!(a.report.all_pass());
        println!(
            "epsilon {}:  eta = {}, family index {} <= {},  lipschitz = {},  sup|g - y| = {}",
            format_rat(&eps),
            a.report.eta,
            a.report.o_n,
            a.report.bound,
            format_rat(a.report.lipschitz.as_ref().unwrap()),
            format_rat(a.report.error.as_ref().unwrap()),
        );
    }

    // pointwise view at the coarsest scale
    let a = approximate(&p, &w, &g, &rat(1, 2)).unwrap();
    println!("\nbranch        g        y");
    for b in p.enumerate_points(2) {
        println!(
            "{:<12}  {:<7}  {}",
            b.to_string(),
            format_rat(&g.evaluate(&b)),
            format_rat(&a.y.evaluate(&b))
        );
    }
}
