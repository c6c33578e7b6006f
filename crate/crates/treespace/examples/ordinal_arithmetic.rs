//! Exact ordinal arithmetic in Cantor normal form: parsing, formatting,
//! addition with absorption, and the `delta * omega` step.
//!
//! Run with `cargo run --example ordinal_arithmetic`.

use treespace::ordinal::Ordinal;

fn main() {
    let a: Ordinal = "w^(2)*3+w+1".parse().unwrap();
    let b: Ordinal = "w*5+3".parse().unwrap();
    println!("a           = {a}");
    println!("b           = {b}");
    println!("a + b       = {}", a.add(&b));
    println!("b + a       = {}", b.add(&a));

    // addition absorbs on the left: 1 + w = w
    let one = Ordinal::one();
    let omega = Ordinal::omega();
    println!("1 + w       = {}", one.add(&omega));
    println!("w + 1       = {}", omega.add(&one));

    // delta * omega is the supremum of delta * n, an indecomposable power
    let delta: Ordinal = "w+3".parse().unwrap();
    println!("(w+3)*3     = {}", delta.times_nat(3));
    println!("(w+3)*w     = {}", delta.omega_step());

    // comparison is the ordinal order
    let pairs = [("w", "2"), ("w+1", "w*2"), ("w^(2)", "w*5+3"), ("w^(w)", "w^(100)*9")];
    for (x, y) in pairs {
        let (ox, oy): (Ordinal, Ordinal) = (x.parse().unwrap(), y.parse().unwrap());
        println!("cmp({x}, {y}) = {:?}", ox.cmp(&oy));
    }
}
