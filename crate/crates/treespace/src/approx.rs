//! Approximation of Lipschitz functions by functions factoring through a
//! construction-tree quotient.
//!
//! The pipeline builds the clopen family at half the requested scale, reads
//! the function off one witness branch per member, smooths the resulting
//! node values into a locally constant function on the family, and pulls it
//! back along the quotient map. The end-to-end error is computed exactly on
//! a finite enumeration.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::clopen::ClopenDescriptor;
use crate::error::Error;
use crate::metric::WeightAssignment;
use crate::ordinal::Ordinal;
use crate::presentation::{Multiplicity, PointAddress, PresentationNode, TreePresentation};
use crate::rat::{abs_diff, format_rat, rat_int};
use crate::simple_fn::{Lipschitz, SimpleFunction, ValueGroup, ValueNode};
use crate::zippin::{
    build_construction_tree, quotient_map, verify_construction, verify_quotient, Check,
    ConstructionTree, NGroup, NNode, PipelineReport,
};

/// A rational per node of a construction tree, finitely presented: explicit
/// values on finitely many copies per lift step, and a template subtree for
/// the tail copies of countable steps. Unlike a locally constant function,
/// tail templates may carry their own value variation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NValues {
    pub roots: Vec<NValLayer>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NValLayer {
    Node(NValNode),
    Step {
        explicit: Vec<(usize, NValLayer)>,
        /// Values on the non-explicit copies; `None` for fully explicit
        /// finite steps.
        tail: Option<Box<NValLayer>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NValNode {
    pub value: BigRational,
    pub groups: Vec<NValLayer>,
}

/// A locally constant function on a construction tree: explicit values on
/// finitely many copies, with all remaining copies inheriting the owning
/// node's value on their whole cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NFunction {
    pub roots: Vec<NFnLayer>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NFnLayer {
    Node(NFnNode),
    Step { explicit: Vec<(usize, NFnLayer)> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NFnNode {
    pub value: BigRational,
    pub groups: Vec<NFnLayer>,
}

fn concat(addr: &PointAddress, rel: &[(usize, usize)]) -> PointAddress {
    let mut out = addr.clone();
    out.steps.extend_from_slice(rel);
    out
}

/// Walks the explicit length of `g` along an address: the number of
/// explicit overrides the group `group` carries at the node the address
/// reaches, or 0 once the address has left the explicit region.
fn explicit_len_along(g: &SimpleFunction, addr: &PointAddress, group: usize) -> usize {
    let mut cur = &g.roots[addr.root];
    for &(gi, c) in &addr.steps {
        match cur.groups[gi].explicit.get(c) {
            Some(sub) => cur = sub,
            None => return 0,
        }
    }
    cur.groups.get(group).map(|vg| vg.explicit.len()).unwrap_or(0)
}

fn enumerate_relative(node: &PresentationNode, bound: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    fn walk(
        node: &PresentationNode,
        rel: &mut Vec<(usize, usize)>,
        bound: usize,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        out.push(rel.clone());
        for (g, grp) in node.groups.iter().enumerate() {
            let copies = match grp.multiplicity {
                Multiplicity::Finite(m) => m,
                Multiplicity::Omega => bound,
            };
            for c in 0..copies {
                rel.push((g, c));
                walk(&grp.template, rel, bound, out);
                rel.pop();
            }
        }
    }
    walk(node, &mut Vec::new(), bound, &mut out);
    out
}

struct Lifter<'a> {
    ct: &'a ConstructionTree,
    g: &'a SimpleFunction,
    x_rel: BTreeMap<usize, Vec<(usize, usize)>>,
}

impl<'a> Lifter<'a> {
    /// The witness branch of a member, relative to its descriptor root: the
    /// root branch itself when it lies in the member's leftover set, else
    /// the lexicographically least enumerated leftover point.
    fn x_rel(&mut self, n: &NNode, root_addr: &PointAddress) -> Vec<(usize, usize)> {
        if let Some(rel) = self.x_rel.get(&n.id) {
            return rel.clone();
        }
        let needs_search = n.excluded.is_empty()
            && self
                .ct
                .presence
                .get(&n.desc_path)
                .map(|pr| pr.type_ii.is_some())
                .unwrap_or(false);
        let rel = if !needs_search {
            Vec::new()
        } else {
            let target = ClopenDescriptor::cone(root_addr.clone());
            let src = self.ct.source.node_at(&n.desc_path).unwrap();
            let bound = self.ct.design_copy_bound();
            enumerate_relative(src, bound)
                .into_iter()
                .find(|rel| {
                    quotient_map(self.ct, &concat(root_addr, rel))
                        .map(|q| q.clopen == target)
                        .unwrap_or(false)
                })
                .expect("verified members have non-empty leftover sets")
        };
        self.x_rel.insert(n.id, rel.clone());
        rel
    }

    fn build_node(&mut self, n: &NNode, root_addr: &PointAddress) -> NValNode {
        let rel = self.x_rel(n, root_addr);
        let value = self.g.evaluate(&concat(root_addr, &rel));
        let groups = n
            .groups
            .iter()
            .map(|grp| self.build_steps(grp, 0, root_addr.clone()))
            .collect();
        NValNode { value, groups }
    }

    fn build_steps(&mut self, grp: &NGroup, i: usize, addr: PointAddress) -> NValLayer {
        if i == grp.steps.len() {
            return NValLayer::Node(self.build_node(&grp.template, &addr));
        }
        let step = &grp.steps[i];
        let src = self.ct.source.resolve(&addr).expect("lift address resolves");
        let mult = src.groups[step.group].multiplicity;
        match mult {
            Multiplicity::Finite(_) => {
                let explicit = step
                    .copies
                    .copies(mult, 0)
                    .into_iter()
                    .map(|c| (c, self.build_steps(grp, i + 1, addr.child(step.group, c))))
                    .collect();
                NValLayer::Step {
                    explicit,
                    tail: None,
                }
            }
            Multiplicity::Omega => {
                let e = explicit_len_along(self.g, &addr, step.group);
                let explicit = (0..e)
                    .filter(|&c| step.copies.admits(c))
                    .map(|c| (c, self.build_steps(grp, i + 1, addr.child(step.group, c))))
                    .collect();
                let fresh = (e..)
                    .find(|&c| step.copies.admits(c))
                    .expect("countable selectors admit arbitrarily large copies");
                let tail = self.build_steps(grp, i + 1, addr.child(step.group, fresh));
                NValLayer::Step {
                    explicit,
                    tail: Some(Box::new(tail)),
                }
            }
        }
    }
}

/// Reads `g` off one canonical witness branch per member of the family.
pub fn lift_function(ct: &ConstructionTree, g: &SimpleFunction) -> NValues {
    let mut lifter = Lifter {
        ct,
        g,
        x_rel: BTreeMap::new(),
    };
    let roots = ct
        .roots
        .iter()
        .map(|r| lifter.build_steps(&r.entry, 0, PointAddress::root_branch(r.source_root)))
        .collect();
    NValues { roots }
}

fn span(values: impl IntoIterator<Item = BigRational>) -> Option<(BigRational, BigRational)> {
    let mut iter = values.into_iter();
    let first = iter.next()?;
    let mut lo = first.clone();
    let mut hi = first;
    for v in iter {
        if v < lo {
            lo = v.clone();
        }
        if v > hi {
            hi = v;
        }
    }
    Some((lo, hi))
}

fn collect_all(layer: &NValLayer, out: &mut Vec<BigRational>) {
    match layer {
        NValLayer::Node(n) => {
            out.push(n.value.clone());
            for g in &n.groups {
                collect_all(g, out);
            }
        }
        NValLayer::Step { explicit, tail } => {
            for (_, l) in explicit {
                collect_all(l, out);
            }
            if let Some(t) = tail {
                collect_all(t, out);
            }
        }
    }
}

/// Values of members that every basic neighbourhood of the owning node
/// keeps: anything reachable through at least one tail edge.
fn tail_values(layer: &NValLayer, passed_tail: bool, out: &mut Vec<BigRational>) {
    match layer {
        NValLayer::Node(_) if passed_tail => collect_all(layer, out),
        NValLayer::Node(_) => {}
        NValLayer::Step { explicit, tail } => {
            for (_, l) in explicit {
                tail_values(l, passed_tail, out);
            }
            if let Some(t) = tail {
                tail_values(t, true, out);
            }
        }
    }
}

fn check_oscillation(layer: &NValLayer, epsilon: &BigRational) -> Result<(), Error> {
    match layer {
        NValLayer::Node(n) => {
            let mut vals = vec![n.value.clone()];
            for g in &n.groups {
                tail_values(g, false, &mut vals);
            }
            if let Some((lo, hi)) = span(vals) {
                let osc = hi - lo;
                if &osc > epsilon {
                    return Err(Error::Validation {
                        what: format!(
                            "oscillation {} on a minimal neighbourhood exceeds {}",
                            format_rat(&osc),
                            format_rat(epsilon)
                        ),
                    });
                }
            }
            for g in &n.groups {
                check_oscillation(g, epsilon)?;
            }
            Ok(())
        }
        NValLayer::Step { explicit, tail } => {
            for (_, l) in explicit {
                check_oscillation(l, epsilon)?;
            }
            if let Some(t) = tail {
                check_oscillation(t, epsilon)?;
            }
            Ok(())
        }
    }
}

fn strip_tails(layer: &NValLayer) -> NFnLayer {
    match layer {
        NValLayer::Node(n) => NFnLayer::Node(NFnNode {
            value: n.value.clone(),
            groups: n.groups.iter().map(strip_tails).collect(),
        }),
        NValLayer::Step { explicit, .. } => NFnLayer::Step {
            explicit: explicit.iter().map(|(c, l)| (*c, strip_tails(l))).collect(),
        },
    }
}

/// Produces a locally constant function within `epsilon` of the given node
/// values: each member keeps its own value on the piece consisting of its
/// branch and the tails of its countable families, so every piece is
/// constant at the value of its distinguished point. Rejects inputs where
/// some member has no basic neighbourhood with oscillation at most
/// `epsilon`.
pub fn uniform_approximation(f1: &NValues, epsilon: &BigRational) -> Result<NFunction, Error> {
    for layer in &f1.roots {
        check_oscillation(layer, epsilon)?;
    }
    Ok(NFunction {
        roots: f1.roots.iter().map(strip_tails).collect(),
    })
}

impl NFunction {
    pub fn max_explicit_copy(&self) -> Option<usize> {
        fn walk(layer: &NFnLayer, best: &mut Option<usize>) {
            match layer {
                NFnLayer::Node(n) => {
                    for g in &n.groups {
                        walk(g, best);
                    }
                }
                NFnLayer::Step { explicit } => {
                    for (c, l) in explicit {
                        if best.map(|b| *c > b).unwrap_or(true) {
                            *best = Some(*c);
                        }
                        walk(l, best);
                    }
                }
            }
        }
        let mut best = None;
        for r in &self.roots {
            walk(r, &mut best);
        }
        best
    }

    /// Value at the member denoted by `target`. Copies beyond the explicit
    /// entries inherit the owning node's value.
    pub fn value_at(
        &self,
        ct: &ConstructionTree,
        target: &ClopenDescriptor,
    ) -> Option<BigRational> {
        fn walk_group(
            grp: &NGroup,
            mut layer: Option<&NFnLayer>,
            owner: Option<&BigRational>,
            target: &ClopenDescriptor,
            mut pos: usize,
        ) -> Option<BigRational> {
            for step in &grp.steps {
                let &(g, c) = target.root.steps.get(pos)?;
                if g != step.group || !step.copies.admits(c) {
                    return None;
                }
                pos += 1;
                layer = match layer {
                    Some(NFnLayer::Step { explicit }) => {
                        explicit.iter().find(|(cc, _)| *cc == c).map(|(_, l)| l)
                    }
                    Some(NFnLayer::Node(_)) => unreachable!("layer depth mismatch"),
                    None => None,
                };
            }
            let node = &grp.template;
            let (value, fnode) = match layer {
                Some(NFnLayer::Node(n)) => (n.value.clone(), Some(n)),
                Some(NFnLayer::Step { .. }) => unreachable!("layer depth mismatch"),
                None => (
                    owner.expect("root families are fully explicit").clone(),
                    None,
                ),
            };
            if pos == target.root.steps.len() && node.excluded == target.excluded {
                return Some(value);
            }
            for (gi, sub) in node.groups.iter().enumerate() {
                let sub_layer = fnode.map(|n| &n.groups[gi]);
                if let Some(v) = walk_group(sub, sub_layer, Some(&value), target, pos) {
                    return Some(v);
                }
            }
            None
        }

        for (root, layer) in ct.roots.iter().zip(&self.roots) {
            if root.source_root != target.root.root {
                continue;
            }
            if let Some(v) = walk_group(&root.entry, Some(layer), None, target, 0) {
                return Some(v);
            }
        }
        None
    }
}

impl NValues {
    /// Value at the member denoted by `target`, reading tail templates for
    /// non-explicit copies.
    pub fn value_at(
        &self,
        ct: &ConstructionTree,
        target: &ClopenDescriptor,
    ) -> Option<BigRational> {
        fn walk_group(
            grp: &NGroup,
            mut layer: &NValLayer,
            target: &ClopenDescriptor,
            mut pos: usize,
        ) -> Option<BigRational> {
            for step in &grp.steps {
                let &(g, c) = target.root.steps.get(pos)?;
                if g != step.group || !step.copies.admits(c) {
                    return None;
                }
                pos += 1;
                layer = match layer {
                    NValLayer::Step { explicit, tail } => explicit
                        .iter()
                        .find(|(cc, _)| *cc == c)
                        .map(|(_, l)| l)
                        .or(tail.as_deref())
                        .expect("finite steps are fully explicit"),
                    NValLayer::Node(_) => unreachable!("layer depth mismatch"),
                };
            }
            let NValLayer::Node(node_vals) = layer else {
                unreachable!("layer depth mismatch")
            };
            let node = &grp.template;
            if pos == target.root.steps.len() && node.excluded == target.excluded {
                return Some(node_vals.value.clone());
            }
            for (gi, sub) in node.groups.iter().enumerate() {
                if let Some(v) = walk_group(sub, &node_vals.groups[gi], target, pos) {
                    return Some(v);
                }
            }
            None
        }

        for (root, layer) in ct.roots.iter().zip(&self.roots) {
            if root.source_root != target.root.root {
                continue;
            }
            if let Some(v) = walk_group(&root.entry, layer, target, 0) {
                return Some(v);
            }
        }
        None
    }
}

/// Expresses `f` composed with the quotient map as a locally constant
/// function on the source presentation.
pub fn pullback(ct: &ConstructionTree, f: &NFunction) -> Result<SimpleFunction, Error> {
    let bound = ct
        .design_copy_bound()
        .max(f.max_explicit_copy().map_or(0, |i| i + 2));

    fn value_at_branch(
        ct: &ConstructionTree,
        f: &NFunction,
        b: &PointAddress,
    ) -> Result<BigRational, Error> {
        let q = quotient_map(ct, b)?;
        f.value_at(ct, &q.clopen).ok_or_else(|| Error::Validation {
            what: format!("member {} not found in the function data", q.clopen),
        })
    }

    fn build(
        ct: &ConstructionTree,
        f: &NFunction,
        src: &PresentationNode,
        ctx: &PointAddress,
        bound: usize,
    ) -> Result<ValueNode, Error> {
        let value = value_at_branch(ct, f, ctx)?;
        let mut groups = Vec::new();
        for (g, grp) in src.groups.iter().enumerate() {
            let count = match grp.multiplicity {
                Multiplicity::Finite(m) => m,
                Multiplicity::Omega => bound,
            };
            let mut explicit = Vec::new();
            for c in 0..count {
                explicit.push(build(ct, f, &grp.template, &ctx.child(g, c), bound)?);
            }
            if grp.multiplicity.is_omega() {
                debug_assert_eq!(
                    value_at_branch(ct, f, &ctx.child(g, bound))?,
                    value,
                    "tail copies inherit the owning node's value"
                );
            }
            groups.push(ValueGroup { explicit });
        }
        Ok(ValueNode { value, groups })
    }

    let mut roots = Vec::new();
    for (r, src) in ct.source.roots.iter().enumerate() {
        roots.push(build(ct, f, src, &PointAddress::root_branch(r), bound)?);
    }
    let y = SimpleFunction { roots };
    debug_assert!(y.validate(&ct.source).is_ok());
    Ok(y)
}

/// The result of an approximation run.
#[derive(Clone, Debug)]
pub struct Approximation {
    pub y: SimpleFunction,
    pub construction: ConstructionTree,
    pub report: PipelineReport,
}

/// Builds the clopen family at `epsilon` and verifies its postconditions,
/// without an approximation target.
pub fn construction_report(
    p: &TreePresentation,
    w: &WeightAssignment,
    epsilon: &BigRational,
) -> Result<(ConstructionTree, PipelineReport), Error> {
    let ct = build_construction_tree(p, w, epsilon)?;
    let mut checks = verify_construction(&ct);
    checks.extend(verify_quotient(&ct));
    let report = report_for(&ct, epsilon.clone(), checks, None, None);
    Ok((ct, report))
}

fn report_for(
    ct: &ConstructionTree,
    epsilon: BigRational,
    checks: Vec<Check>,
    error: Option<BigRational>,
    lipschitz: Option<BigRational>,
) -> PipelineReport {
    PipelineReport {
        epsilon,
        eta: Ordinal::from_nat(ct.eta as u64),
        lambda: Ordinal::zero(),
        n: Ordinal::from_nat(ct.eta as u64),
        bound: Ordinal::from_nat(2 * ct.eta as u64 + 2),
        o_n: ct.ordinal_index(),
        checks,
        error,
        lipschitz,
    }
}

/// Approximates a Lipschitz function `g` within `L * epsilon` by a function
/// factoring through the quotient of the family built at `epsilon / 2`,
/// where `L` is the larger of 1 and the Lipschitz constant of `g`.
pub fn approximate(
    p: &TreePresentation,
    w: &WeightAssignment,
    g: &SimpleFunction,
    epsilon: &BigRational,
) -> Result<Approximation, Error> {
    if epsilon <= &BigRational::zero() {
        return Err(Error::Validation {
            what: "epsilon must be strictly positive".into(),
        });
    }
    g.validate(p)?;
    let l_raw = match g.lipschitz_bound(p, w) {
        Lipschitz::Infinite => {
            return Err(Error::Validation {
                what: "the function distinguishes branches at pseudo-distance zero".into(),
            })
        }
        Lipschitz::Finite(l) => l,
    };
    let l = l_raw.clone().max(rat_int(1));
    let half = epsilon / rat_int(2);

    let ct = build_construction_tree(p, w, &half)?;
    let f1 = lift_function(&ct, g);
    let f = uniform_approximation(&f1, &(&l * &half))?;
    let y = pullback(&ct, &f)?;

    let mut checks = verify_construction(&ct);
    checks.extend(verify_quotient(&ct));

    let bound = ct
        .design_copy_bound()
        .max(g.design_copy_bound())
        .max(y.design_copy_bound());
    let points = p.enumerate_points(bound);

    // exact oscillation of g on every leftover set
    {
        let instances = ct.instances(bound);
        let mut fiber_vals: Vec<Vec<BigRational>> = vec![Vec::new(); instances.len()];
        let mut failures = Vec::new();
        for b in &points {
            match quotient_map(&ct, b) {
                Ok(q) => {
                    if let Some(idx) = instances.iter().position(|m| m.clopen == q.clopen) {
                        fiber_vals[idx].push(g.evaluate(b));
                    }
                }
                Err(e) => failures.push(e.to_string()),
            }
        }
        let limit = &l * &half;
        for (m, vals) in instances.iter().zip(&fiber_vals) {
            if let Some((lo, hi)) = span(vals.iter().cloned()) {
                let osc = hi - lo;
                if osc >= limit {
                    failures.push(format!(
                        "oscillation {} on the leftover set of {}",
                        format_rat(&osc),
                        m.clopen
                    ));
                }
            }
        }
        checks.push(if failures.is_empty() {
            Check {
                name: "leftover_oscillation".into(),
                pass: true,
                detail: format!("below {}", format_rat(&limit)),
            }
        } else {
            Check {
                name: "leftover_oscillation".into(),
                pass: false,
                detail: failures.join("; "),
            }
        });
    }

    // exact end-to-end error
    let mut error = BigRational::zero();
    for b in &points {
        let d = abs_diff(&g.evaluate(b), &y.evaluate(b));
        if d > error {
            error = d;
        }
    }
    let guarantee = &l * epsilon;
    checks.push(if error <= guarantee {
        Check {
            name: "error_bound".into(),
            pass: true,
            detail: format!(
                "sup |g - y| = {} <= {}",
                format_rat(&error),
                format_rat(&guarantee)
            ),
        }
    } else {
        Check {
            name: "error_bound".into(),
            pass: false,
            detail: format!(
                "sup |g - y| = {} exceeds {}",
                format_rat(&error),
                format_rat(&guarantee)
            ),
        }
    });

    let report = report_for(&ct, epsilon.clone(), checks, Some(error), Some(l_raw));
    Ok(Approximation {
        y,
        construction: ct,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{t1, t2, t2_decaying_weights};
    use crate::rat::rat;

    fn step_function(p: &TreePresentation) -> SimpleFunction {
        let mut f = SimpleFunction::constant(p, rat_int(0));
        f.roots[0].groups[0].explicit = vec![
            ValueNode { value: rat_int(1), groups: vec![] },
            ValueNode { value: rat_int(1), groups: vec![] },
            ValueNode { value: rat_int(1), groups: vec![] },
        ];
        f
    }

    #[test]
    fn constant_functions_come_back_exactly() {
        let p = t2();
        let w = t2_decaying_weights(&p);
        let g = SimpleFunction::constant(&p, rat(7, 3));
        let a = approximate(&p, &w, &g, &rat(1, 2)).unwrap();
        assert!(a.report.all_pass());
        assert_eq!(a.report.error, Some(rat_int(0)));
        for b in p.enumerate_points(3) {
            assert_eq!(a.y.evaluate(&b), rat(7, 3));
        }
    }

    #[test]
    fn discrete_t1_reproduces_the_function() {
        // the quotient separates every branch here, so y reproduces g
        let p = t1();
        let w = WeightAssignment::weight_one(&p);
        let g = step_function(&p);
        let a = approximate(&p, &w, &g, &rat(1, 2)).unwrap();
        assert!(a.report.all_pass(), "{:?}", a.report.checks);
        assert_eq!(a.report.error, Some(rat_int(0)));
        assert_eq!(a.report.lipschitz, Some(rat_int(1)));
        for b in p.enumerate_points(5) {
            assert_eq!(a.y.evaluate(&b), g.evaluate(&b));
        }
    }

    #[test]
    fn decaying_t2_stays_within_the_guarantee() {
        let p = t2();
        let w = t2_decaying_weights(&p);
        // depth profile: 0 at the root cone, larger on one explicit copy
        let mut g = SimpleFunction::constant(&p, rat_int(0));
        g.roots[0].groups[0].explicit = vec![ValueNode {
            value: rat_int(1),
            groups: vec![ValueGroup {
                explicit: vec![ValueNode { value: rat(5, 4), groups: vec![] }],
            }],
        }];
        let eps = rat(1, 4);
        let a = approximate(&p, &w, &g, &eps).unwrap();
        assert!(a.report.all_pass(), "{:?}", a.report.checks);
        let l = match g.lipschitz_bound(&p, &w) {
            Lipschitz::Finite(l) => l.max(rat_int(1)),
            _ => unreachable!(),
        };
        assert!(a.report.error.as_ref().unwrap() <= &(l * eps));

        // the output is constant on every fiber of the quotient map
        let ct = &a.construction;
        let mut fiber_values: std::collections::BTreeMap<_, BigRational> = Default::default();
        for b in p.enumerate_points(ct.design_copy_bound()) {
            let q = quotient_map(ct, &b).unwrap();
            let v = a.y.evaluate(&b);
            if let Some(seen) = fiber_values.insert(q.clopen, v.clone()) {
                assert_eq!(seen, v, "y varies on a fiber");
            }
        }
    }

    #[test]
    fn locally_constant_input_is_returned_unchanged() {
        let p = t1();
        let w = WeightAssignment::weight_one(&p);
        let ct = build_construction_tree(&p, &w, &rat(1, 4)).unwrap();
        let g = step_function(&p);
        let f1 = lift_function(&ct, &g);
        let f = uniform_approximation(&f1, &rat(1, 4)).unwrap();
        // g already factors through the quotient, so nothing moves
        for b in p.enumerate_points(5) {
            let q = quotient_map(&ct, &b).unwrap();
            assert_eq!(f.value_at(&ct, &q.clopen).unwrap(), g.evaluate(&b));
            assert_eq!(f1.value_at(&ct, &q.clopen).unwrap(), g.evaluate(&b));
        }
    }

    #[test]
    fn oscillation_precondition_is_enforced() {
        // tail values 1 against a node value 0 oscillate by 1 on every
        // basic neighbourhood of the root member
        let p = t1();
        let w = WeightAssignment::weight_one(&p);
        let ct = build_construction_tree(&p, &w, &rat(1, 2)).unwrap();
        let f1 = NValues {
            roots: vec![NValLayer::Node(NValNode {
                value: rat_int(0),
                groups: vec![NValLayer::Step {
                    explicit: vec![],
                    tail: Some(Box::new(NValLayer::Node(NValNode {
                        value: rat_int(1),
                        groups: vec![],
                    }))),
                }],
            })],
        };
        assert!(uniform_approximation(&f1, &rat(1, 2)).is_err());
        let f = uniform_approximation(&f1, &rat_int(1)).unwrap();
        // the flattened function takes the owning node's value on tails
        let leaf = ClopenDescriptor::cone(PointAddress::root_branch(0).child(0, 9));
        assert_eq!(f.value_at(&ct, &leaf).unwrap(), rat_int(0));
    }

    #[test]
    fn two_member_space_deviation_stays_within_epsilon() {
        // a single root with one finite child gives a two-member family;
        // values 0 and epsilon are collapsible within epsilon
        use crate::presentation::ChildGroup;
        let p = TreePresentation {
            roots: vec![PresentationNode {
                groups: vec![ChildGroup {
                    template: PresentationNode::leaf(),
                    multiplicity: Multiplicity::Finite(1),
                }],
            }],
        };
        let w = WeightAssignment::weight_one(&p);
        let eps = rat(1, 2);
        let ct = build_construction_tree(&p, &w, &eps).unwrap();
        let mut g = SimpleFunction::constant(&p, rat_int(0));
        g.roots[0].groups[0].explicit = vec![ValueNode { value: eps.clone(), groups: vec![] }];
        let f1 = lift_function(&ct, &g);
        let f = uniform_approximation(&f1, &eps).unwrap();
        for b in p.enumerate_points(2) {
            let q = quotient_map(&ct, &b).unwrap();
            let fb = f.value_at(&ct, &q.clopen).unwrap();
            assert!(abs_diff(&fb, &g.evaluate(&b)) <= eps);
        }
    }

    #[test]
    fn rerunning_on_the_output_gives_zero_error() {
        // y factors through a quotient already; rerunning at the smallest
        // positive weight reproduces it exactly
        let p = t2();
        let w = t2_decaying_weights(&p);
        let mut g = SimpleFunction::constant(&p, rat_int(0));
        g.roots[0].groups[0].explicit = vec![ValueNode {
            value: rat_int(1),
            groups: vec![ValueGroup {
                explicit: vec![ValueNode { value: rat(3, 4), groups: vec![] }],
            }],
        }];
        let a = approximate(&p, &w, &g, &rat(1, 4)).unwrap();
        let y = a.y;
        let min_w = w.min_positive_weight().unwrap();
        let rerun = approximate(&p, &w, &y, &min_w).unwrap();
        assert!(rerun.report.all_pass(), "{:?}", rerun.report.checks);
        assert_eq!(rerun.report.error, Some(rat_int(0)));
    }
}
