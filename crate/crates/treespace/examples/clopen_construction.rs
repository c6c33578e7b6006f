//! The well-founded tree of basic clopen sets: every branch receives a basic
//! neighbourhood whose leftover set is smaller than epsilon, the family is
//! nested-or-disjoint, and its ordinal index is bounded by twice the
//! derivation length plus two.
//!
//! Run with `cargo run --example clopen_construction`.

use treespace::gen::{t2, t2_decaying_weights};
use treespace::metric::WeightAssignment;
use treespace::rat::rat;
use treespace::zippin::{
    build_construction_tree, verify_construction, verify_quotient, NNode,
};

fn show(n: &NNode, indent: usize) {
    let excl = if n.excluded.is_empty() {
        String::new()
    } else {
        format!(
            "  minus {{{}}}",
            n.excluded
                .iter()
                .map(|(g, c)| format!("{g}.{c}"))
                .collect::<Vec<_>>()
                .join(",")
        )
    };
    println!(
        "{:indent$}cone at {}  level {}{excl}",
        "",
        n.desc_path,
        n.alpha,
        indent = indent
    );
    for g in &n.groups {
        let omega = g.steps.iter().any(|s| matches!(s.copies, treespace::zippin::CopySel::All | treespace::zippin::CopySel::AllBut(_)));
        if omega {
            println!("{:indent$}  [countably many copies of]", "", indent = indent);
        }
        show(&g.template, indent + 4);
    }
}

fn main() {
    let p = treespace::gen::t1();
    let w = WeightAssignment::weight_one(&p);
    let ct = build_construction_tree(&p, &w, &rat(1, 2)).unwrap();
    println!("discrete omega-leaf tree at epsilon 1/2:");
    for r in &ct.roots {
        show(&r.entry.template, 2);
    }
    println!("ordinal index of the family: {}\n", ct.ordinal_index());

    let p = t2();
    let w = t2_decaying_weights(&p);
    let ct = build_construction_tree(&p, &w, &rat(1, 8)).unwrap();
    println!("decaying two-level tree at epsilon 1/8:");
    for r in &ct.roots {
        show(&r.entry.template, 2);
    }
    println!(
        "ordinal index {} within the bound {}",
        ct.ordinal_index(),
        2 * ct.eta + 2
    );

    for c in verify_construction(&ct).iter().chain(verify_quotient(&ct).iter()) {
        println!("[{}] {}: {}", if c.pass { "pass" } else { "FAIL" }, c.name, c.detail);
    }
}
