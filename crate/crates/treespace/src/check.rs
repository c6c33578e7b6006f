//! The oracle battery behind the `check` command: every cross-check between
//! a symbolic computation and its brute-force counterpart, run against one
//! weighted presentation.

use num_rational::BigRational;
use num_traits::Zero;

use crate::clopen::ClopenDescriptor;
use crate::fragmentation::{
    clopen_diam, derivation_sequence, derive_once, PointCount, TemplateMarking,
};
use crate::indices::{cb_derive, cb_rank, interval_type, ordinal_index, tree_of_interval};
use crate::metric::WeightAssignment;
use crate::ordinal::Ordinal;
use crate::presentation::{PointAddress, TreePresentation};
use crate::rat::{rat, rat_int};
use crate::simple_fn::SimpleFunction;
use crate::zippin::{verify_construction, verify_quotient, Check};

fn check_from(name: &str, failures: Vec<String>, ok_detail: String) -> Check {
    if failures.is_empty() {
        Check {
            name: name.into(),
            pass: true,
            detail: ok_detail,
        }
    } else {
        let shown = failures
            .iter()
            .take(3)
            .cloned()
            .collect::<Vec<_>>()
            .join("; ");
        Check {
            name: name.into(),
            pass: false,
            detail: format!("{} violation(s): {}", failures.len(), shown),
        }
    }
}

/// Runs every oracle comparison against `(p, w)` at scale `epsilon`.
/// `copy_bound` overrides the design enumeration bound.
pub fn run_checks(
    p: &TreePresentation,
    w: &WeightAssignment,
    epsilon: &BigRational,
    copy_bound: Option<usize>,
    function: Option<&SimpleFunction>,
) -> Vec<Check> {
    let mut checks = Vec::new();
    let bound = copy_bound.unwrap_or(2).max(2);
    let points = p.enumerate_points(bound);

    // input validation
    {
        let mut failures: Vec<String> = p
            .validate()
            .into_iter()
            .map(|d| format!("{}: {}", d.path, d.message))
            .collect();
        if let Err(e) = w.validate(p) {
            failures.push(e.to_string());
        }
        if epsilon <= &BigRational::zero() {
            failures.push("epsilon must be positive".into());
        }
        checks.push(check_from(
            "validate",
            failures,
            format!("{} template nodes", p.template_node_count()),
        ));
        if !checks[0].pass {
            return checks;
        }
    }

    // the induced distance is an ultrametric pseudo-metric
    {
        let mut failures = Vec::new();
        let n = points.len();
        let stride = (n * n * n / 4000).max(1);
        let mut counter = 0usize;
        for i in 0..n {
            for j in 0..n {
                let dij = w.distance(&points[i], &points[j]);
                if dij != w.distance(&points[j], &points[i]) {
                    failures.push(format!("asymmetry at {} {}", points[i], points[j]));
                }
                for k in 0..n {
                    counter += 1;
                    if !counter.is_multiple_of(stride) {
                        continue;
                    }
                    let dik = w.distance(&points[i], &points[k]);
                    let djk = w.distance(&points[j], &points[k]);
                    if dik > dij.clone().max(djk) {
                        failures.push(format!(
                            "ultrametric fails at {} {} {}",
                            points[i], points[j], points[k]
                        ));
                    }
                }
            }
        }
        checks.push(check_from(
            "ultrametric",
            failures,
            format!("sampled triples over {n} branches"),
        ));
    }

    // swapping two copies of a countable group beyond all explicit data
    // changes neither distances nor function values
    {
        let mut failures = Vec::new();
        let mut targets = Vec::new();
        for t in p.template_paths() {
            let node = p.node_at(&t).unwrap();
            for (g, grp) in node.groups.iter().enumerate() {
                if grp.multiplicity.is_omega() {
                    targets.push((t, g));
                    break;
                }
            }
        }
        let deep = p.enumerate_points(bound + 2);
        let sample: Vec<&PointAddress> = deep
            .iter()
            .step_by((deep.len() / 30).max(1))
            .collect();
        for (tpl, g) in targets.iter().take(4) {
            // transpose the copies `bound` and `bound + 1` of this group,
            // wherever an address enters it
            let swap = |x: &PointAddress| {
                let mut y = x.clone();
                let mut path = crate::presentation::TplPath::root_path(x.root);
                for s in &mut y.steps {
                    if &path == tpl && s.0 == *g {
                        if s.1 == bound {
                            s.1 = bound + 1;
                        } else if s.1 == bound + 1 {
                            s.1 = bound;
                        }
                    }
                    path = path.child(s.0);
                }
                y
            };
            for a in &sample {
                for b in &sample {
                    if w.distance(a, b) != w.distance(&swap(a), &swap(b)) {
                        failures.push(format!("swap at {tpl}/{g} changes d({a}, {b})"));
                    }
                }
                if let Some(f) = function {
                    if f.max_explicit_index().is_some_and(|i| i < bound)
                        && f.evaluate(a) != f.evaluate(&swap(a))
                    {
                        failures.push(format!("swap at {tpl}/{g} changes f({a})"));
                    }
                }
            }
        }
        checks.push(check_from(
            "copy_permutation",
            failures,
            format!("{} countable groups exercised", targets.len().min(4)),
        ));
    }

    // the weight-1 assignment induces the discrete metric
    {
        let one = WeightAssignment::weight_one(p);
        let mut failures = Vec::new();
        for (i, a) in points.iter().enumerate() {
            for b in points.iter().skip(i + 1) {
                if one.distance(a, b) != rat_int(1) {
                    failures.push(format!("d({a},{b}) != 1"));
                }
            }
        }
        checks.push(check_from(
            "discrete_weight_one",
            failures,
            "distinct branches at distance 1".into(),
        ));
    }

    // full cones are pairwise nested or disjoint, both symbolically and
    // pointwise
    {
        let mut failures = Vec::new();
        let cones: Vec<ClopenDescriptor> = points
            .iter()
            .map(|t| ClopenDescriptor::cone(t.clone()))
            .collect();
        for (i, a) in cones.iter().enumerate() {
            for b in cones.iter().skip(i + 1) {
                if !a.trichotomy_with(b) {
                    failures.push(format!("{a} vs {b}: no trichotomy"));
                    continue;
                }
                // pointwise confirmation over the enumeration
                let sub = points.iter().all(|x| !a.member(x) || b.member(x));
                let sup = points.iter().all(|x| !b.member(x) || a.member(x));
                let dis = points.iter().all(|x| !(a.member(x) && b.member(x)));
                if sub != a.subset_of(b) || sup != b.subset_of(a) || dis != a.disjoint_from(b) {
                    failures.push(format!("{a} vs {b}: verdicts disagree with points"));
                }
            }
        }
        checks.push(check_from(
            "cone_trichotomy",
            failures,
            format!("{} cones compared", cones.len()),
        ));
    }

    // basic-set identity: a cone minus its first child cones is the
    // two-sided description of the same basic set
    {
        let mut failures = Vec::new();
        for t in &points {
            let node = p.resolve(t).unwrap();
            for (g, grp) in node.groups.iter().enumerate() {
                if !grp.multiplicity.is_omega() {
                    continue;
                }
                for k in 1..bound {
                    let excl: Vec<(usize, usize)> = (0..k).map(|c| (g, c)).collect();
                    let d = ClopenDescriptor::with_exclusions(t.clone(), excl.clone());
                    for x in &points {
                        let direct = d.member(x);
                        let via_union = ClopenDescriptor::cone(t.clone()).member(x)
                            && !excl
                                .iter()
                                .any(|&(gg, cc)| {
                                    ClopenDescriptor::cone(t.child(gg, cc)).member(x)
                                });
                        if direct != via_union {
                            failures.push(format!("identity fails at {d} on {x}"));
                        }
                    }
                }
            }
        }
        checks.push(check_from(
            "basis_identity",
            failures,
            "cone-minus-children identities hold pointwise".into(),
        ));
    }

    // index comparisons
    let o = ordinal_index(p);
    let beta = interval_type(p);
    let (rank, count) = cb_rank(p);
    {
        let mut failures = Vec::new();
        if rank > o {
            failures.push(format!("rank {rank} exceeds index {o}"));
        }
        checks.push(check_from(
            "rank_le_index",
            failures,
            format!("{rank} <= {o}"),
        ));
    }
    {
        let mut failures = Vec::new();
        if beta > Ordinal::omega_pow(&o) {
            failures.push(format!("interval type {beta} exceeds w^({o})"));
        }
        checks.push(check_from(
            "interval_le_pow",
            failures,
            format!("{beta} <= w^({o})"),
        ));
    }
    {
        let mut failures = Vec::new();
        match tree_of_interval(&beta) {
            Ok(back) => {
                let beta2 = interval_type(&back);
                if beta2 != beta {
                    failures.push(format!("roundtrip gave {beta2} for {beta}"));
                }
            }
            Err(e) => failures.push(e.to_string()),
        }
        checks.push(check_from(
            "interval_roundtrip",
            failures,
            format!("interval type {beta} reconstructs"),
        ));
    }

    // the rank read off the interval type agrees with iterated derivation
    {
        let mut failures = Vec::new();
        let mut seq = vec![TemplateMarking::full(p)];
        while !seq.last().unwrap().is_empty() && seq.len() <= p.template_node_count() + 2 {
            let next = cb_derive(p, seq.last().unwrap());
            seq.push(next);
        }
        let steps = Ordinal::from_nat(seq.len() as u64 - 1);
        if steps != rank {
            failures.push(format!("derivation empties in {steps} steps, rank is {rank}"));
        } else if seq.len() >= 2 {
            match seq[seq.len() - 2].count_points(p) {
                PointCount::Finite(c) if c == count => {}
                other => failures.push(format!(
                    "final derivative holds {other:?} points, closed form says {count}"
                )),
            }
        }
        checks.push(check_from(
            "rank_closed_form",
            failures,
            format!("rank {rank}, final count {count}"),
        ));
    }

    // with weight-1 and epsilon 1/2 the derivation is the isolated-point
    // derivation, marking for marking
    {
        let one = WeightAssignment::weight_one(p);
        let full = TemplateMarking::full(p);
        let frag_seq = derivation_sequence(p, &one, &rat(1, 2), &full);
        let mut cb_seq = vec![full];
        while !cb_seq.last().unwrap().is_empty() && cb_seq.len() < frag_seq.len() + 2 {
            let next = cb_derive(p, cb_seq.last().unwrap());
            cb_seq.push(next);
        }
        let mut failures = Vec::new();
        if frag_seq != cb_seq {
            failures.push(format!(
                "sequences differ: {} vs {} steps",
                frag_seq.len(),
                cb_seq.len()
            ));
        }
        checks.push(check_from(
            "discrete_bridge",
            failures,
            format!("{} markings agree", frag_seq.len()),
        ));
    }

    // symbolic derivation against the brute-force neighbourhood check, at
    // the given bound and once more one copy deeper
    {
        let full = TemplateMarking::full(p);
        let symbolic = derive_once(p, w, &full, epsilon);
        let mut failures = Vec::new();
        for b in [bound, bound + 1] {
            for (pt, kept) in crate::oracle::brute_derive_verdicts(p, w, &full, epsilon, b) {
                if kept != symbolic.contains(&pt) {
                    failures.push(format!("bound {b}: {pt} disagrees"));
                }
            }
        }
        checks.push(check_from(
            "derivation_oracle",
            failures,
            format!("verdicts agree at bounds {bound} and {}", bound + 1),
        ));
    }

    // symbolic diameters against enumerated diameters, at the design bound
    // and one copy deeper
    {
        let full = TemplateMarking::full(p);
        let mut failures = Vec::new();
        for t in points.iter().take(40) {
            let d = ClopenDescriptor::cone(t.clone());
            let sym = clopen_diam(p, w, &d, &full);
            for b in [bound, bound + 1] {
                let brute = crate::oracle::enum_clopen_diam(p, w, &d, &full, b);
                if sym != brute {
                    failures.push(format!(
                        "cone {d} at bound {b}: symbolic {sym} vs enumerated {brute}"
                    ));
                }
            }
        }
        checks.push(check_from(
            "diameter_oracle",
            failures,
            format!("cone diameters agree with enumeration at bounds {bound} and {}", bound + 1),
        ));
    }

    // derivation descends strictly and is monotone in epsilon
    {
        let full = TemplateMarking::full(p);
        let seq = derivation_sequence(p, w, epsilon, &full);
        let mut failures = Vec::new();
        if !seq.last().unwrap().is_empty() {
            failures.push("sequence went stationary while non-empty".into());
        }
        if seq.len() > p.template_node_count() + 2 {
            failures.push(format!("{} steps for {} nodes", seq.len(), p.template_node_count()));
        }
        for win in seq.windows(2) {
            if !win[1].subset_of(&win[0]) {
                failures.push("derivation is not decreasing".into());
            }
            if !win[1].validate_closed(p).is_ok() {
                failures.push("derived marking is not closed".into());
            }
        }
        let twice = epsilon * rat_int(2);
        let d_small = derive_once(p, w, &full, epsilon);
        let d_large = derive_once(p, w, &full, &twice);
        if !d_large.subset_of(&d_small) {
            failures.push("derivative not monotone in epsilon".into());
        }
        checks.push(check_from(
            "derivation_descent",
            failures,
            format!("index {} within node bound", seq.len() - 1),
        ));
    }

    // construction and quotient postconditions at the given epsilon
    {
        match crate::zippin::build_construction_tree(p, w, epsilon) {
            Ok(ct) => {
                for mut c in verify_construction(&ct) {
                    c.name = format!("construction_{}", c.name);
                    checks.push(c);
                }
                for mut c in verify_quotient(&ct) {
                    c.name = format!("quotient_{}", c.name);
                    checks.push(c);
                }
            }
            Err(e) => checks.push(Check {
                name: "construction_build".into(),
                pass: false,
                detail: e.to_string(),
            }),
        }
    }

    // optional function checks: the full approximation pipeline
    if let Some(g) = function {
        match crate::approx::approximate(p, w, g, epsilon) {
            Ok(a) => {
                for mut c in a.report.checks {
                    c.name = format!("approximation_{}", c.name);
                    checks.push(c);
                }
            }
            Err(e) => checks.push(Check {
                name: "approximation".into(),
                pass: false,
                detail: e.to_string(),
            }),
        }
    }

    checks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{t2, t2_decaying_weights};

    #[test]
    fn battery_passes_on_the_decaying_tree() {
        let p = t2();
        let w = t2_decaying_weights(&p);
        let checks = run_checks(&p, &w, &rat(1, 8), None, None);
        for c in &checks {
            assert!(c.pass, "{}: {}", c.name, c.detail);
        }
        assert!(checks.len() >= 15);
    }

    #[test]
    fn battery_rejects_bad_epsilon() {
        let p = t2();
        let w = t2_decaying_weights(&p);
        let checks = run_checks(&p, &w, &rat_int(0), None, None);
        assert!(!checks[0].pass);
    }
}
