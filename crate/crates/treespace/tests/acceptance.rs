//! Acceptance suite: every release gate in one place, one printed verdict
//! line per criterion. Run with `cargo test --test acceptance -- --nocapture`
//! to see the lines.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use treespace::approx::approximate;
use treespace::fragmentation::{
    derivation_sequence, derive_once, frag_index, FragIndex, PointCount, TemplateMarking,
};
use treespace::gen::{
    gen_function, gen_marking, gen_ordinal, gen_ordinal_below_omega_omega, gen_presentation,
    gen_weights, make_lipschitz_one, t2, t2_decaying_weights, GenConfig,
};
use treespace::indices::{cb_derive, cb_rank, interval_type, ordinal_index, tree_of_interval};
use treespace::metric::WeightAssignment;
use treespace::ordinal::Ordinal;
use treespace::presentation::{cantor_tree, PointAddress, TplMap, TreePresentation};
use treespace::rat::{rat, rat_int};
use treespace::zippin::{build_construction_tree, verify_construction, verify_quotient};
use treespace::ClopenDescriptor;

fn verdict(criterion: &str, detail: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    println!("acceptance {criterion}: PASS ({detail}; {elapsed:.2?} of {budget:.1?})");
    assert!(
        elapsed < budget,
        "{criterion} exceeded its time budget: {elapsed:?} >= {budget:?}"
    );
}

fn corpus(seed: u64, count: usize) -> Vec<(TreePresentation, WeightAssignment)> {
    let cfg = GenConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let p = gen_presentation(&mut rng, &cfg);
            let w = gen_weights(&mut rng, &p, &cfg);
            (p, w)
        })
        .collect()
}

#[test]
fn criterion_01_ordinal_algebra() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(11);

    let mut pool: Vec<Ordinal> = Vec::new();
    for _ in 0..6_000 {
        pool.push(gen_ordinal_below_omega_omega(&mut rng, 4));
    }
    for _ in 0..6_000 {
        pool.push(gen_ordinal(&mut rng, 3, 2));
    }
    assert!(pool.len() >= 10_000);

    for o in &pool {
        let text = o.to_string();
        let back: Ordinal = text.parse().expect("canonical text parses");
        assert_eq!(&back, o, "roundtrip failed on {text}");
    }

    let one = Ordinal::one();
    let omega = Ordinal::omega();
    assert_eq!(one.add(&omega), omega);
    assert_ne!(omega.add(&one), one.add(&omega));
    assert_eq!(omega.add(&one), "w+1".parse().unwrap());

    for i in 0..10_000 {
        let a = &pool[i % pool.len()];
        let b = &pool[(i * 7 + 1) % pool.len()];
        let c = &pool[(i * 13 + 2) % pool.len()];
        assert_eq!(a.add(b).add(c), a.add(&b.add(c)), "associativity at {i}");
        if b < c {
            assert!(a.add(b) < a.add(c), "right monotonicity at {i}");
        }
        // absorption into an indecomposable step
        if !b.is_zero() {
            let step = b.omega_step();
            assert!(b < &step);
            if a < &step {
                assert_eq!(a.add(&step), step);
            }
        }
    }

    verdict(
        "01 ordinal algebra",
        &format!("{} ordinals, 10000 triples", pool.len()),
        started,
        Duration::from_secs(5),
    );
}

#[test]
fn criterion_02_rank_below_index() {
    let started = Instant::now();
    let trees = corpus(21, 500);
    for (i, (p, _)) in trees.iter().enumerate() {
        assert!(p.depth() <= 4);
        let o = ordinal_index(p);
        let (rank, _) = cb_rank(p);
        assert!(rank <= o, "tree {i}: rank {rank} above index {o}");
    }
    verdict(
        "02 rank below index",
        "500 presentations, zero violations",
        started,
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_03_interval_types() {
    let started = Instant::now();
    let trees = corpus(21, 500);

    for (i, (p, _)) in trees.iter().enumerate() {
        let o = ordinal_index(p);
        let beta = interval_type(p);
        assert!(
            beta <= Ordinal::omega_pow(&o),
            "tree {i}: interval type {beta} above w^({o})"
        );

        // the rank pair equals the leading-term closed form of the interval
        // type: the leading term itself for infinite types, the point count
        // of the finite interval otherwise
        let (rank, count) = cb_rank(p);
        match beta.as_nat() {
            Some(n) => {
                assert_eq!(rank, Ordinal::one(), "tree {i}");
                assert_eq!(count, n + 1u32, "tree {i}");
            }
            None => {
                let (e, c) = beta.leading().unwrap();
                assert_eq!(rank, e.succ(), "tree {i}");
                assert_eq!(&count, c, "tree {i}");
            }
        }

        // independent route: iterated isolated-point derivation
        let mut seq = vec![TemplateMarking::full(p)];
        while !seq.last().unwrap().is_empty() {
            seq.push(cb_derive(p, seq.last().unwrap()));
        }
        assert_eq!(Ordinal::from_nat(seq.len() as u64 - 1), rank, "tree {i}");
        assert_eq!(
            seq[seq.len() - 2].count_points(p),
            PointCount::Finite(count),
            "tree {i}"
        );
    }

    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for i in 0..1_000 {
        let beta = gen_ordinal_below_omega_omega(&mut rng, 4);
        let p = tree_of_interval(&beta).expect("below w^w is presentable");
        assert!(p.validate().is_empty());
        assert_eq!(interval_type(&p), beta, "roundtrip {i} failed on {beta}");
    }

    verdict(
        "03 interval types",
        "500 bounds + closed forms, 1000 roundtrips",
        started,
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_04_discrete_bridge() {
    let started = Instant::now();
    let trees = corpus(21, 500);
    let half = rat(1, 2);
    for (i, (p, _)) in trees.iter().enumerate() {
        let one = WeightAssignment::weight_one(p);
        let full = TemplateMarking::full(p);
        let frag_seq = derivation_sequence(p, &one, &half, &full);
        let mut cb_seq = vec![full];
        while !cb_seq.last().unwrap().is_empty() {
            cb_seq.push(cb_derive(p, cb_seq.last().unwrap()));
        }
        assert_eq!(frag_seq, cb_seq, "tree {i}: sequences differ");
    }
    verdict(
        "04 discrete bridge",
        "500 derivation sequences agree marking-for-marking",
        started,
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_05_fragmentation_traces() {
    let started = Instant::now();
    for k in 0..=4usize {
        let p = cantor_tree(k);
        let one = WeightAssignment::weight_one(&p);
        let full = TemplateMarking::full(&p);
        assert_eq!(
            frag_index(&p, &one, &rat(1, 2), &full),
            FragIndex::Ordinal(Ordinal::from_nat(k as u64 + 1)),
            "uniform depth {k}"
        );
    }
    let p = t2();
    let w = t2_decaying_weights(&p);
    let full = TemplateMarking::full(&p);
    assert_eq!(
        frag_index(&p, &w, &rat(1, 2), &full),
        FragIndex::Ordinal(Ordinal::from_nat(2u64))
    );
    assert_eq!(
        frag_index(&p, &w, &rat(1, 8), &full),
        FragIndex::Ordinal(Ordinal::from_nat(3u64))
    );
    verdict(
        "05 fragmentation traces",
        "uniform depths 0..4 and the decaying tree match the hand traces",
        started,
        Duration::from_secs(5),
    );
}

#[test]
fn criterion_06_derivation_oracle() {
    let started = Instant::now();
    let cfg = GenConfig {
        max_depth: 3,
        max_groups: 2,
        max_finite_multiplicity: 2,
        zero_weight_percent: 10,
        ..GenConfig::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let mut instances = 0usize;
    while instances < 200 {
        let p = gen_presentation(&mut rng, &cfg);
        let w = gen_weights(&mut rng, &p, &cfg);
        let marking = if instances.is_multiple_of(3) {
            TemplateMarking::full(&p)
        } else {
            gen_marking(&mut rng, &p)
        };
        let mut eps_list = vec![rat(1, 2), rat(1, 8)];
        if let Some(min) = w.min_positive_weight() {
            eps_list.push(min / rat_int(2));
        }
        for eps in eps_list {
            let symbolic = derive_once(&p, &w, &marking, &eps);
            // design bound and one copy deeper must agree exactly
            for bound in [2usize, 3] {
                for (b, kept) in
                    treespace::oracle::brute_derive_verdicts(&p, &w, &marking, &eps, bound)
                {
                    assert_eq!(
                        kept,
                        symbolic.contains(&b),
                        "instance {instances}: bound {bound}, point {b}, eps {eps}"
                    );
                }
            }
            instances += 1;
        }
    }
    verdict(
        "06 derivation oracle",
        &format!("{instances} instances at bounds 2 and 3, zero discrepancies"),
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_07_08_construction_and_quotient() {
    let started = Instant::now();
    let trees = corpus(21, 500);
    let mut runs = 0usize;
    let mut construction_checks = 0usize;
    let mut quotient_checks = 0usize;
    for (i, (p, w)) in trees.iter().enumerate() {
        let mut eps_list = vec![rat(1, 2), rat(1, 8)];
        if let Some(min) = w.min_positive_weight() {
            eps_list.push(min / rat_int(2));
        }
        for eps in eps_list {
            let ct = build_construction_tree(p, w, &eps)
                .unwrap_or_else(|e| panic!("tree {i} at {eps}: {e}"));
            for c in verify_construction(&ct) {
                assert!(c.pass, "tree {i} at {eps}: {}: {}", c.name, c.detail);
                construction_checks += 1;
            }
            for c in verify_quotient(&ct) {
                assert!(c.pass, "tree {i} at {eps}: {}: {}", c.name, c.detail);
                quotient_checks += 1;
            }
            runs += 1;
        }
    }
    let elapsed = started.elapsed();
    println!(
        "acceptance 07 construction postconditions: PASS ({runs} builds, {construction_checks} checks; {elapsed:.2?} of 120s)"
    );
    println!(
        "acceptance 08 quotient postconditions: PASS ({runs} builds, {quotient_checks} checks; {elapsed:.2?} of 120s)"
    );
    assert!(elapsed < Duration::from_secs(120));
}

#[test]
fn criterion_09_lipschitz_approximation() {
    let started = Instant::now();
    let cfg = GenConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(77);

    let mut spaces: Vec<(TreePresentation, WeightAssignment)> = Vec::new();
    for depth in 0..=3usize {
        let p = cantor_tree(depth);
        let one = WeightAssignment::weight_one(&p);
        let decay = WeightAssignment::from_map(TplMap::build(&p, |path, _| {
            rat(1, 1 << path.groups.len().min(6) as i64)
        }));
        spaces.push((p.clone(), one));
        spaces.push((p, decay));
    }
    for _ in 0..2 {
        let p = gen_presentation(&mut rng, &cfg);
        let w = gen_weights(&mut rng, &p, &cfg);
        spaces.push((p, w));
    }

    let mut runs = 0usize;
    for (si, (p, w)) in spaces.iter().enumerate() {
        let mut functions = 0usize;
        let mut attempts = 0usize;
        while functions < 100 {
            attempts += 1;
            assert!(attempts < 1000, "space {si}: cannot generate functions");
            let raw = gen_function(&mut rng, p, &cfg);
            let Some(g) = make_lipschitz_one(p, w, &raw) else {
                continue;
            };
            functions += 1;
            for eps in [rat(1, 2), rat(1, 4)] {
                let a = approximate(p, w, &g, &eps)
                    .unwrap_or_else(|e| panic!("space {si}: {e}"));
                for c in &a.report.checks {
                    assert!(c.pass, "space {si}: {}: {}", c.name, c.detail);
                }
                // 1-Lipschitz input: the guarantee collapses to epsilon
                let err = a.report.error.clone().unwrap();
                assert!(err <= eps, "space {si}: error {err} above {eps}");
                // index of the construction stays within a finite margin of
                // the fragmentation index at half scale
                assert!(a.report.o_n <= a.report.bound);
                let frag = a.report.eta.succ();
                assert!(a.report.o_n <= frag.add(&a.report.eta.succ()));
                runs += 1;
            }
        }
    }
    verdict(
        "09 lipschitz approximation",
        &format!("{runs} pipeline runs over {} spaces", spaces.len()),
        started,
        Duration::from_secs(120),
    );
}

/// Translates an enumerated address of the truncated product tree into the
/// finite set it denotes: each copy index picks the next element.
fn address_to_set(addr: &PointAddress) -> Vec<usize> {
    let mut out = Vec::new();
    let mut max = 0usize;
    for &(_, c) in &addr.steps {
        let n = max + 1 + c;
        out.push(n);
        max = n;
    }
    out
}

#[test]
fn criterion_10_truncated_product_identity_and_cli() {
    let started = Instant::now();

    // pointwise basis identity on truncations of the product tree
    for depth in 0..=3usize {
        let p = cantor_tree(depth);
        let points = p.enumerate_points(3);
        for a in &points {
            let set = address_to_set(a);
            let max_a = set.last().copied().unwrap_or(0);
            if a.depth() >= depth {
                continue;
            }
            for n_bound in max_a..=max_a + 2 {
                // U_{A,N} excludes the children A+{n} for n = max(A)+1 ..= N
                let excl: Vec<(usize, usize)> =
                    (max_a + 1..=n_bound).map(|n| (0, n - max_a - 1)).collect();
                let lhs = ClopenDescriptor::with_exclusions(a.clone(), excl);
                for x in &points {
                    let rhs = ClopenDescriptor::cone(a.clone()).member(x)
                        && !(max_a + 1..=n_bound).any(|n| {
                            ClopenDescriptor::cone(a.child(0, n - max_a - 1)).member(x)
                        });
                    assert_eq!(lhs.member(x), rhs, "depth {depth}: {lhs} at {x}");
                }
            }
        }
    }

    // end-to-end: cantor -> zippin -> check all exit 0
    let dir = tempfile::tempdir().unwrap();
    let tree = dir.path().join("cantor2.json");
    let bin = env!("CARGO_BIN_EXE_treespace");

    let run = |args: &[&str]| {
        let out = std::process::Command::new(bin)
            .args(args)
            .output()
            .expect("binary runs");
        (out.status.code(), String::from_utf8_lossy(&out.stdout).into_owned())
    };

    let (code, _) = run(&["cantor", "--depth", "2", "--out", tree.to_str().unwrap()]);
    assert_eq!(code, Some(0));
    let (code, out) = run(&["zippin", tree.to_str().unwrap(), "--epsilon", "1/2"]);
    assert_eq!(code, Some(0), "zippin failed: {out}");
    let (code, out) = run(&[
        "check",
        tree.to_str().unwrap(),
        "--epsilon",
        "1/2",
        "--copy-bound",
        "2",
    ]);
    assert_eq!(code, Some(0), "check failed: {out}");

    verdict(
        "10 truncated product identity + CLI",
        "pointwise identities at depths 0..3; cantor/zippin/check exit 0",
        started,
        Duration::from_secs(60),
    );
}
