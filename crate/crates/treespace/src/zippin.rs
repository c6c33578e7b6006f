//! Well-founded trees of basic clopen sets and their quotient maps.
//!
//! Given a weighted presentation and a positive epsilon, every branch is
//! assigned a basic clopen neighbourhood: the cone of the least ancestor
//! whose intersection with the branch's derivation level has diameter below
//! epsilon, or, when no ancestor cone qualifies, the branch's own cone minus
//! a canonical minimal finite set of child cones. The resulting family is a
//! well-founded tree under containment, it covers the branch space, the
//! leftover sets partition it, and mapping each branch to the smallest
//! member containing it is a topological quotient.
//!
//! The family is copy-uniform, so it is stored as a finite presented tree
//! whose nodes are descriptor templates with copy-selector lift paths.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::clopen::{ClopenDescriptor, ClopenKind};
use crate::error::Error;
use crate::fragmentation::{
    cone_stats, derivation_sequence, diam_with_exclusions, ConeStats, TemplateMarking,
};
use crate::metric::WeightAssignment;
use crate::ordinal::Ordinal;
use crate::presentation::{
    ChildGroup, Multiplicity, PointAddress, PresentationNode, TplMap, TplPath, TreePresentation,
};

/// Which copies of a source child group a lift step ranges over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CopySel {
    /// Every copy of the group.
    All,
    /// Exactly one copy.
    Only(usize),
    /// Every copy except the listed ones.
    AllBut(BTreeSet<usize>),
}

impl CopySel {
    pub fn admits(&self, copy: usize) -> bool {
        match self {
            CopySel::All => true,
            CopySel::Only(c) => copy == *c,
            CopySel::AllBut(ex) => !ex.contains(&copy),
        }
    }

    /// Copies below `bound` admitted by this selector over the given
    /// multiplicity.
    pub fn copies(&self, mult: Multiplicity, bound: usize) -> Vec<usize> {
        let limit = match mult {
            Multiplicity::Finite(m) => m,
            Multiplicity::Omega => bound,
        };
        (0..limit).filter(|&c| self.admits(c)).collect()
    }

    fn count(&self, mult: Multiplicity) -> Multiplicity {
        match (self, mult) {
            (_, Multiplicity::Omega) => match self {
                CopySel::Only(_) => Multiplicity::Finite(1),
                _ => Multiplicity::Omega,
            },
            (CopySel::All, Multiplicity::Finite(m)) => Multiplicity::Finite(m),
            (CopySel::Only(_), Multiplicity::Finite(_)) => Multiplicity::Finite(1),
            (CopySel::AllBut(ex), Multiplicity::Finite(m)) => {
                Multiplicity::Finite(m - ex.iter().filter(|&&c| c < m).count())
            }
        }
    }
}

/// One step of the source path from a parent descriptor root down to a
/// child descriptor root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftStep {
    pub group: usize,
    pub copies: CopySel,
}

/// A child family of the construction tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NGroup {
    pub steps: Vec<LiftStep>,
    pub template: NNode,
}

/// A descriptor-template node of the construction tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NNode {
    pub id: usize,
    /// Template path of the descriptor root in the source tree.
    pub desc_path: TplPath,
    /// Excluded direct children; empty for a full cone.
    pub excluded: BTreeSet<(usize, usize)>,
    /// Derivation level of the branches this descriptor was assigned to.
    pub alpha: usize,
    pub groups: Vec<NGroup>,
}

impl NNode {
    pub fn kind(&self) -> ClopenKind {
        if self.excluded.is_empty() {
            ClopenKind::TypeI
        } else {
            ClopenKind::TypeII
        }
    }
}

/// A root entry of the construction tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NRoot {
    pub source_root: usize,
    pub entry: NGroup,
}

/// Which descriptors are rooted at a given source template node.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Presence {
    /// Full cone rooted here, with its derivation level.
    pub type_i: Option<usize>,
    /// Cone minus the canonical minimal child set, with its level.
    pub type_ii: Option<(BTreeSet<(usize, usize)>, usize)>,
}

/// The constructed tree of basic clopen sets together with its source data.
#[derive(Clone, Debug)]
pub struct ConstructionTree {
    pub source: TreePresentation,
    pub weights: WeightAssignment,
    pub epsilon: BigRational,
    /// Derivation sequence of the full marking, ending with the empty one.
    pub markings: Vec<TemplateMarking>,
    /// The fragmentation index is `eta + 1`.
    pub eta: usize,
    /// Derivation level of each source template node.
    pub alpha: TplMap<usize>,
    pub presence: TplMap<Presence>,
    pub roots: Vec<NRoot>,
    pub node_count: usize,
}

/// A concrete member of the constructed family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescriptorInstance {
    pub clopen: ClopenDescriptor,
    pub alpha: usize,
}

/// One named verification result.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn ok(name: &str, detail: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            pass: true,
            detail: detail.into(),
        }
    }

    fn fail(name: &str, detail: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            pass: false,
            detail: detail.into(),
        }
    }

    fn from(name: &str, failures: Vec<String>, ok_detail: impl Into<String>) -> Check {
        if failures.is_empty() {
            Check::ok(name, ok_detail)
        } else {
            let shown = failures.iter().take(3).cloned().collect::<Vec<_>>().join("; ");
            Check::fail(name, format!("{} violation(s): {}", failures.len(), shown))
        }
    }
}

/// Summary of a construction or approximation run.
#[derive(Clone, Debug)]
pub struct PipelineReport {
    pub epsilon: BigRational,
    pub eta: Ordinal,
    pub lambda: Ordinal,
    pub n: Ordinal,
    pub bound: Ordinal,
    pub o_n: Ordinal,
    pub checks: Vec<Check>,
    pub error: Option<BigRational>,
    pub lipschitz: Option<BigRational>,
}

impl PipelineReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

struct Builder<'a> {
    p: &'a TreePresentation,
    epsilon: &'a BigRational,
    stats: Vec<TplMap<ConeStats>>,
    markings: &'a [TemplateMarking],
    alpha: TplMap<usize>,
    presence: TplMap<Presence>,
    next_id: usize,
}

impl<'a> Builder<'a> {
    fn diam_at(&self, level: usize, path: &TplPath) -> &BigRational {
        &self.stats[level].get(path).expect("stats shape").diam
    }

    fn diam_excl(
        &self,
        level: usize,
        path: &TplPath,
        excl: &BTreeSet<(usize, usize)>,
    ) -> BigRational {
        diam_with_exclusions(self.p, &self.stats[level], &self.markings[level], path, excl)
    }

    /// The canonical minimal finite child set making the leftover set small:
    /// candidates are finite-multiplicity children with marked content,
    /// taken by descending diameter contribution and pruned in presentation
    /// order. Dropping copies of countable groups never helps because their
    /// tails contribute the same content.
    fn canonical_f(&self, path: &TplPath, level: usize) -> BTreeSet<(usize, usize)> {
        let node = self.p.node_at(path).unwrap();
        let stat = self.stats[level].node(path).unwrap();
        let mut candidates: Vec<(BigRational, usize, usize)> = Vec::new();
        for (g, grp) in node.groups.iter().enumerate() {
            if let Multiplicity::Finite(m) = grp.multiplicity {
                if let Some(r) = &stat.groups[g].value.reach {
                    for c in 0..m {
                        candidates.push((r.clone(), g, c));
                    }
                }
            }
        }
        candidates.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

        let mut excl: BTreeSet<(usize, usize)> = BTreeSet::new();
        let mut iter = candidates.iter();
        while self.diam_excl(level, path, &excl) >= *self.epsilon {
            let (_, g, c) = iter
                .next()
                .expect("excluding all finite children reaches the minimal neighbourhood");
            excl.insert((*g, *c));
        }
        // prune to an inclusion-minimal set, scanning in presentation order
        let chosen: Vec<(usize, usize)> = excl.iter().copied().collect();
        for e in chosen {
            let mut without = excl.clone();
            without.remove(&e);
            if self.diam_excl(level, path, &without) < *self.epsilon {
                excl = without;
            }
        }
        excl
    }

    /// First pass: for every template node, walk its root path and record
    /// which descriptor its branches are assigned.
    fn assign(&mut self) {
        for path in self.p.template_paths() {
            let level = *self.alpha.get(&path).unwrap();
            let mut prefixes = Vec::with_capacity(path.groups.len() + 1);
            let mut prefix = TplPath::root_path(path.root);
            prefixes.push(prefix.clone());
            for &g in &path.groups {
                prefix = prefix.child(g);
                prefixes.push(prefix.clone());
            }
            let selected = prefixes
                .iter()
                .find(|s| self.diam_at(level, s) < self.epsilon);
            match selected {
                Some(s) => {
                    let slot = &mut self.presence.node_mut(s).unwrap().value.type_i;
                    match slot {
                        None => *slot = Some(level),
                        Some(existing) => debug_assert_eq!(
                            *existing, level,
                            "descriptor level must not depend on the defining branch"
                        ),
                    }
                }
                None => {
                    let f = self.canonical_f(&path, level);
                    debug_assert!(!f.is_empty(), "a failing cone needs exclusions");
                    let slot = &mut self.presence.node_mut(&path).unwrap().value.type_ii;
                    debug_assert!(slot.is_none());
                    *slot = Some((f, level));
                }
            }
        }
    }

    /// Second pass: assemble the presented tree. Returns the forest of
    /// descriptor families for the cone at `path`, with lift steps relative
    /// to `path`.
    fn sub(&mut self, path: &TplPath) -> Vec<(Vec<LiftStep>, NNode)> {
        let node = self.p.node_at(path).unwrap().clone();
        let presence = self.presence.get(path).unwrap().clone();

        let mut out: Vec<(Vec<LiftStep>, NNode)> = Vec::new();
        if let Some((f, level)) = &presence.type_ii {
            // children of the leftover-set node: families in non-excluded
            // copies
            let mut groups = Vec::new();
            for (g, grp) in node.groups.iter().enumerate() {
                let ex: BTreeSet<usize> = f
                    .iter()
                    .filter(|&&(gg, _)| gg == g)
                    .map(|&(_, c)| c)
                    .collect();
                if let Multiplicity::Finite(m) = grp.multiplicity {
                    if ex.len() >= m {
                        continue;
                    }
                }
                let sel = if ex.is_empty() {
                    CopySel::All
                } else {
                    CopySel::AllBut(ex)
                };
                for (steps, sub_node) in self.sub(&path.child(g)) {
                    let mut full = vec![LiftStep {
                        group: g,
                        copies: sel.clone(),
                    }];
                    full.extend(steps);
                    groups.push(NGroup {
                        steps: full,
                        template: sub_node,
                    });
                }
            }
            let id = self.next_id;
            self.next_id += 1;
            out.push((
                Vec::new(),
                NNode {
                    id,
                    desc_path: path.clone(),
                    excluded: f.clone(),
                    alpha: *level,
                    groups,
                },
            ));
            // families inside excluded copies sit beside the leftover node
            for &(g, c) in f {
                for (steps, sub_node) in self.sub(&path.child(g)) {
                    let mut full = vec![LiftStep {
                        group: g,
                        copies: CopySel::Only(c),
                    }];
                    full.extend(steps);
                    out.push((full, sub_node));
                }
            }
        } else {
            for (g, _) in node.groups.iter().enumerate() {
                for (steps, sub_node) in self.sub(&path.child(g)) {
                    let mut full = vec![LiftStep {
                        group: g,
                        copies: CopySel::All,
                    }];
                    full.extend(steps);
                    out.push((full, sub_node));
                }
            }
        }
        if let Some(level) = presence.type_i {
            let groups = out
                .into_iter()
                .map(|(steps, template)| NGroup { steps, template })
                .collect();
            let id = self.next_id;
            self.next_id += 1;
            out = vec![(
                Vec::new(),
                NNode {
                    id,
                    desc_path: path.clone(),
                    excluded: BTreeSet::new(),
                    alpha: level,
                    groups,
                },
            )];
        }
        out
    }
}

/// Builds the tree of basic clopen sets for `(p, w, epsilon)`.
pub fn build_construction_tree(
    p: &TreePresentation,
    w: &WeightAssignment,
    epsilon: &BigRational,
) -> Result<ConstructionTree, Error> {
    if epsilon <= &BigRational::zero() {
        return Err(Error::Validation {
            what: "epsilon must be strictly positive".into(),
        });
    }
    let diags = p.validate();
    if !diags.is_empty() {
        return Err(Error::Validation {
            what: format!("invalid presentation: {}", diags[0].message),
        });
    }
    w.validate(p)?;

    let full = TemplateMarking::full(p);
    let markings = derivation_sequence(p, w, epsilon, &full);
    if !markings.last().unwrap().is_empty() {
        return Err(Error::Unsupported {
            what: "fragmentation index is not finite for this input".into(),
        });
    }
    let eta = markings.len() - 2;

    let alpha = TplMap::build(p, |path, _| {
        (0..markings.len())
            .rev()
            .find(|&i| markings[i].is_marked(path))
            .expect("every node is marked in the full marking")
    });
    let stats = markings[..=eta]
        .iter()
        .map(|m| cone_stats(p, w, m))
        .collect();

    let (alpha, presence, roots, node_count) = {
        let mut builder = Builder {
            p,
            epsilon,
            stats,
            markings: &markings,
            alpha,
            presence: TplMap::build(p, |_, _| Presence::default()),
            next_id: 0,
        };
        builder.assign();

        let mut roots = Vec::new();
        for r in 0..p.roots.len() {
            for (steps, node) in builder.sub(&TplPath::root_path(r)) {
                // descriptors always root at source roots or inside excluded
                // finite copies, so root families are single members
                debug_assert!(
                    steps.iter().all(|s| matches!(s.copies, CopySel::Only(_))),
                    "root families must be finite"
                );
                roots.push(NRoot {
                    source_root: r,
                    entry: NGroup {
                        steps,
                        template: node,
                    },
                });
            }
        }
        (builder.alpha, builder.presence, roots, builder.next_id)
    };

    Ok(ConstructionTree {
        source: p.clone(),
        weights: w.clone(),
        epsilon: epsilon.clone(),
        markings,
        eta,
        alpha,
        presence,
        roots,
        node_count,
    })
}

impl ConstructionTree {
    /// Copy bound making enumerated checks exact for this tree: the largest
    /// excluded copy index plus two.
    pub fn design_copy_bound(&self) -> usize {
        let mut max_idx: Option<usize> = None;
        fn walk(n: &crate::presentation::TplMapNode<Presence>, best: &mut Option<usize>) {
            if let Some((f, _)) = &n.value.type_ii {
                for &(_, c) in f {
                    if best.map(|b| c > b).unwrap_or(true) {
                        *best = Some(c);
                    }
                }
            }
            for g in &n.groups {
                walk(g, best);
            }
        }
        for r in &self.presence.roots {
            walk(r, &mut max_idx);
        }
        max_idx.unwrap_or(0) + 2
    }

    /// Every member of the family whose copy indices lie below `bound`.
    pub fn instances(&self, bound: usize) -> Vec<DescriptorInstance> {
        let mut out = Vec::new();
        for s in self.source.enumerate_points(bound) {
            let pr = self.presence.get(&s.template_path()).unwrap();
            if let Some(level) = pr.type_i {
                out.push(DescriptorInstance {
                    clopen: ClopenDescriptor::cone(s.clone()),
                    alpha: level,
                });
            }
            if let Some((f, level)) = &pr.type_ii {
                out.push(DescriptorInstance {
                    clopen: ClopenDescriptor::with_exclusions(s.clone(), f.iter().copied()),
                    alpha: *level,
                });
            }
        }
        out
    }

    /// All descriptor-template nodes of the presented tree.
    pub fn template_nodes(&self) -> Vec<&NNode> {
        fn walk<'a>(n: &'a NNode, out: &mut Vec<&'a NNode>) {
            out.push(n);
            for g in &n.groups {
                walk(&g.template, out);
            }
        }
        let mut out = Vec::new();
        for r in &self.roots {
            walk(&r.entry.template, &mut out);
        }
        out
    }

    /// Strips descriptor payloads, leaving the presented tree shape.
    pub fn to_presentation(&self) -> TreePresentation {
        fn conv(n: &NNode, p: &TreePresentation) -> PresentationNode {
            PresentationNode {
                groups: n
                    .groups
                    .iter()
                    .map(|g| ChildGroup {
                        template: conv(&g.template, p),
                        multiplicity: group_multiplicity(g, n, p),
                    })
                    .collect(),
            }
        }
        fn group_multiplicity(g: &NGroup, parent: &NNode, p: &TreePresentation) -> Multiplicity {
            let mut path = parent.desc_path.clone();
            let mut total = Multiplicity::Finite(1);
            for step in &g.steps {
                let node = p.node_at(&path).unwrap();
                let m = step.copies.count(node.groups[step.group].multiplicity);
                total = match (total, m) {
                    (Multiplicity::Finite(a), Multiplicity::Finite(b)) => {
                        Multiplicity::Finite(a * b)
                    }
                    _ => Multiplicity::Omega,
                };
                path = path.child(step.group);
            }
            total
        }
        let mut roots = Vec::new();
        for r in &self.roots {
            let parent_path = TplPath::root_path(r.source_root);
            let pseudo_parent = NNode {
                id: usize::MAX,
                desc_path: parent_path,
                excluded: BTreeSet::new(),
                alpha: 0,
                groups: vec![r.entry.clone()],
            };
            match group_multiplicity(&r.entry, &pseudo_parent, &self.source) {
                Multiplicity::Finite(m) => {
                    for _ in 0..m {
                        roots.push(conv(&r.entry.template, &self.source));
                    }
                }
                Multiplicity::Omega => {
                    debug_assert!(false, "root families are finite");
                    roots.push(conv(&r.entry.template, &self.source));
                }
            }
        }
        TreePresentation { roots }
    }

    /// Ordinal index of the presented tree of clopen sets.
    pub fn ordinal_index(&self) -> Ordinal {
        crate::indices::ordinal_index(&self.to_presentation())
    }
}

/// The smallest member of the family containing `b`: the image of `b` under
/// the quotient map. Walks the ancestors of `b` from the deepest up; at each
/// ancestor a leftover-type descriptor is smaller than the full cone.
pub fn quotient_map(ct: &ConstructionTree, b: &PointAddress) -> Result<DescriptorInstance, Error> {
    let mut prefix = b.clone();
    loop {
        let pr = ct.presence.get(&prefix.template_path()).unwrap();
        if let Some((f, level)) = &pr.type_ii {
            let d = ClopenDescriptor::with_exclusions(prefix.clone(), f.iter().copied());
            if d.member(b) {
                return Ok(DescriptorInstance {
                    clopen: d,
                    alpha: *level,
                });
            }
        }
        if let Some(level) = pr.type_i {
            return Ok(DescriptorInstance {
                clopen: ClopenDescriptor::cone(prefix),
                alpha: level,
            });
        }
        prefix = match prefix.parent() {
            Some(p) => p,
            None => {
                return Err(Error::Validation {
                    what: format!("branch {b} is not covered by the family"),
                })
            }
        };
    }
}

fn minimal_container<'a>(
    instances: &'a [DescriptorInstance],
    b: &PointAddress,
) -> (Vec<&'a DescriptorInstance>, Option<&'a DescriptorInstance>) {
    let containers: Vec<&DescriptorInstance> = instances
        .iter()
        .filter(|m| m.clopen.member(b))
        .collect();
    let mut minimal: Option<&DescriptorInstance> = None;
    for cand in &containers {
        match minimal {
            None => minimal = Some(cand),
            Some(cur) => {
                if cand.clopen.subset_of(&cur.clopen) {
                    minimal = Some(cand);
                }
            }
        }
    }
    if let Some(min) = minimal {
        if !containers.iter().all(|c| min.clopen.subset_of(&c.clopen)) {
            return (containers, None);
        }
    }
    let min = minimal;
    (containers, min)
}

/// Runs the structural postconditions of the construction: trichotomy,
/// well-foundedness, cover, partition, leftover diameters, level-label
/// consistency, level descent over two generations, and the ordinal-index
/// bound. Failures are reported per check, never raised.
pub fn verify_construction(ct: &ConstructionTree) -> Vec<Check> {
    let mut checks = Vec::new();
    let bound = ct.design_copy_bound();
    let instances = ct.instances(bound);
    let points = ct.source.enumerate_points(bound);

    // (a) any two members are nested or disjoint
    {
        let mut failures = Vec::new();
        for i in 0..instances.len() {
            for j in (i + 1)..instances.len() {
                let (a, b) = (&instances[i].clopen, &instances[j].clopen);
                if a == b {
                    failures.push(format!("duplicate member {a}"));
                } else if !a.trichotomy_with(b) {
                    failures.push(format!("{a} and {b} overlap without nesting"));
                }
            }
        }
        checks.push(Check::from(
            "trichotomy",
            failures,
            format!("{} members pairwise nested or disjoint", instances.len()),
        ));
    }

    // (b) well-founded presented tree with finitely many initial nodes
    {
        let shape = ct.to_presentation();
        let diags = shape.validate();
        let mut failures: Vec<String> =
            diags.into_iter().map(|d| format!("{}: {}", d.path, d.message)).collect();
        if ct.roots.is_empty() {
            failures.push("no initial nodes".into());
        }
        checks.push(Check::from(
            "well_founded",
            failures,
            format!(
                "finite presentation, {} initial nodes, depth {}",
                shape.roots.len(),
                shape.depth()
            ),
        ));
    }

    // (c) cover and partition, against both the brute-force minimal member
    // and the symbolic quotient walk
    let mut fibers: Vec<Vec<&PointAddress>> = vec![Vec::new(); instances.len()];
    {
        let mut failures = Vec::new();
        for b in &points {
            let (containers, min) = minimal_container(&instances, b);
            if containers.is_empty() {
                failures.push(format!("branch {b} is uncovered"));
                continue;
            }
            match min {
                None => failures.push(format!("branch {b} has no smallest container")),
                Some(min) => {
                    match quotient_map(ct, b) {
                        Ok(q) if q.clopen == min.clopen => {}
                        Ok(q) => failures.push(format!(
                            "quotient walk gives {} but smallest container is {}",
                            q.clopen, min.clopen
                        )),
                        Err(e) => failures.push(format!("quotient walk failed at {b}: {e}")),
                    }
                    let idx = instances
                        .iter()
                        .position(|m| m.clopen == min.clopen)
                        .unwrap();
                    fibers[idx].push(b);
                }
            }
        }
        checks.push(Check::from(
            "cover_partition",
            failures,
            format!("{} branches covered with unique smallest members", points.len()),
        ));
    }

    // (d) leftover sets have diameter below epsilon
    {
        let mut failures = Vec::new();
        for (idx, m) in instances.iter().enumerate() {
            let diam = crate::oracle::pairwise_diam(&ct.weights, &fibers[idx]);
            if diam >= ct.epsilon {
                failures.push(format!(
                    "leftover set of {} has diameter {}",
                    m.clopen,
                    crate::rat::format_rat(&diam)
                ));
            }
        }
        checks.push(Check::from(
            "leftover_diameter",
            failures,
            format!("all {} leftover sets below epsilon", instances.len()),
        ));
    }

    // (e) ordinal index bound: o <= lambda + 2n + 2 (lambda = 0 here)
    {
        let o = ct.ordinal_index();
        let bound_ord = Ordinal::from_nat(2 * ct.eta as u64 + 2);
        if o <= bound_ord {
            checks.push(Check::ok(
                "ordinal_index_bound",
                format!("o = {o} <= {bound_ord}"),
            ));
        } else {
            checks.push(Check::fail(
                "ordinal_index_bound",
                format!("o = {o} exceeds {bound_ord}"),
            ));
        }
    }

    // (f) level labels: alpha(N) = max {b : N meets level b} = min {b :
    // diam(N at level b) < epsilon}
    {
        let mut failures = Vec::new();
        let stats: Vec<_> = ct.markings[..=ct.eta]
            .iter()
            .map(|m| cone_stats(&ct.source, &ct.weights, m))
            .collect();
        let has_mark: Vec<TplMap<bool>> = ct.markings[..=ct.eta]
            .iter()
            .map(subtree_marked_map)
            .collect();
        for n in ct.template_nodes() {
            let max_meets = (0..=ct.eta)
                .filter(|&b| desc_meets_marking(ct, &has_mark[b], &ct.markings[b], n))
                .max();
            let min_small = (0..=ct.eta).find(|&b| {
                diam_with_exclusions(
                    &ct.source,
                    &stats[b],
                    &ct.markings[b],
                    &n.desc_path,
                    &n.excluded,
                ) < ct.epsilon
            });
            if max_meets != Some(n.alpha) || min_small != Some(n.alpha) {
                failures.push(format!(
                    "node {} labelled {} but max-meets = {:?}, min-small = {:?}",
                    n.desc_path, n.alpha, max_meets, min_small
                ));
            }
        }
        checks.push(Check::from(
            "level_labels",
            failures,
            format!("{} template labels consistent", ct.node_count),
        ));
    }

    // (g) levels strictly descend over two generations
    {
        let mut failures = Vec::new();
        fn walk(n: &NNode, failures: &mut Vec<String>) {
            for g in &n.groups {
                let child = &g.template;
                if child.alpha > n.alpha {
                    failures.push(format!(
                        "child {} has level {} above parent {} ({})",
                        child.desc_path, child.alpha, n.desc_path, n.alpha
                    ));
                }
                for gg in &child.groups {
                    let grand = &gg.template;
                    if grand.alpha >= n.alpha {
                        failures.push(format!(
                            "grandchild {} level {} does not descend below {} ({})",
                            grand.desc_path, grand.alpha, n.desc_path, n.alpha
                        ));
                    }
                }
                walk(child, failures);
            }
        }
        for r in &ct.roots {
            walk(&r.entry.template, &mut failures);
        }
        checks.push(Check::from(
            "level_descent",
            failures,
            "levels strictly descend over two generations",
        ));
    }

    // parent-child strict containment at the template level
    {
        let mut failures = Vec::new();
        fn walk(n: &NNode, failures: &mut Vec<String>) {
            for g in &n.groups {
                let child = &g.template;
                let ok = if child.desc_path == n.desc_path {
                    n.excluded.is_empty() && !child.excluded.is_empty()
                } else {
                    child.desc_path.root == n.desc_path.root
                        && child.desc_path.groups.len() > n.desc_path.groups.len()
                        && child.desc_path.groups[..n.desc_path.groups.len()]
                            == n.desc_path.groups[..]
                        && g.steps.first().map(|s| match &s.copies {
                            CopySel::All => n
                                .excluded
                                .iter()
                                .all(|&(gg, _)| gg != s.group),
                            CopySel::Only(c) => !n.excluded.contains(&(s.group, *c)),
                            CopySel::AllBut(ex) => n
                                .excluded
                                .iter()
                                .filter(|&&(gg, _)| gg == s.group)
                                .all(|&(_, c)| ex.contains(&c)),
                        }).unwrap_or(false)
                };
                if !ok {
                    failures.push(format!(
                        "family {} is not strictly inside {}",
                        child.desc_path, n.desc_path
                    ));
                }
                walk(child, failures);
            }
        }
        for r in &ct.roots {
            walk(&r.entry.template, &mut failures);
        }
        checks.push(Check::from(
            "strict_containment",
            failures,
            "every child family strictly inside its parent",
        ));
    }

    checks
}

fn subtree_marked_map(m: &TemplateMarking) -> TplMap<bool> {
    fn walk(
        mk: &crate::presentation::TplMapNode<bool>,
    ) -> crate::presentation::TplMapNode<bool> {
        let groups: Vec<_> = mk.groups.iter().map(walk).collect();
        let value = mk.value || groups.iter().any(|g| g.value);
        crate::presentation::TplMapNode { value, groups }
    }
    TplMap {
        roots: m.marks.roots.iter().map(walk).collect(),
    }
}

/// Does the descriptor template meet the marking? True when the root is
/// marked or some non-excluded child copy leads to marked content.
fn desc_meets_marking(
    ct: &ConstructionTree,
    has_mark: &TplMap<bool>,
    marking: &TemplateMarking,
    n: &NNode,
) -> bool {
    if marking.is_marked(&n.desc_path) {
        return true;
    }
    let node = ct.source.node_at(&n.desc_path).unwrap();
    for (g, grp) in node.groups.iter().enumerate() {
        let child = n.desc_path.child(g);
        if !has_mark.get(&child).copied().unwrap_or(false) {
            continue;
        }
        let excluded = n.excluded.iter().filter(|&&(gg, _)| gg == g).count();
        let remaining = match grp.multiplicity {
            Multiplicity::Finite(m) => m.saturating_sub(excluded),
            Multiplicity::Omega => 1,
        };
        if remaining > 0 {
            return true;
        }
    }
    false
}

/// Verifies the quotient-map postconditions: every leftover set is
/// non-empty, and the preimage of the cone below a member is the member
/// itself.
pub fn verify_quotient(ct: &ConstructionTree) -> Vec<Check> {
    let mut checks = Vec::new();
    let bound = ct.design_copy_bound();
    let instances = ct.instances(bound);
    let points = ct.source.enumerate_points(bound);

    let q: Vec<Option<DescriptorInstance>> = points
        .iter()
        .map(|b| quotient_map(ct, b).ok())
        .collect();

    // (i) surjectivity: every member owns at least one branch
    {
        let mut failures = Vec::new();
        for m in &instances {
            let hit = q
                .iter()
                .any(|qi| qi.as_ref().map(|d| d.clopen == m.clopen).unwrap_or(false));
            if !hit {
                failures.push(format!("leftover set of {} is empty", m.clopen));
            }
        }
        checks.push(Check::from(
            "surjectivity",
            failures,
            format!("all {} leftover sets inhabited", instances.len()),
        ));
    }

    // (ii) preimage identity: q(b) inside M exactly when b lies in M
    {
        let mut failures = Vec::new();
        for (b, qi) in points.iter().zip(&q) {
            let Some(qi) = qi else {
                failures.push(format!("branch {b} has no image"));
                continue;
            };
            for m in &instances {
                let lhs = qi.clopen.subset_of(&m.clopen);
                let rhs = m.clopen.member(b);
                if lhs != rhs {
                    failures.push(format!(
                        "branch {b}: q(b) = {} vs member {}: {} / {}",
                        qi.clopen, m.clopen, lhs, rhs
                    ));
                }
            }
        }
        checks.push(Check::from(
            "preimage_identity",
            failures,
            format!(
                "preimages of member cones match over {} branches x {} members",
                points.len(),
                instances.len()
            ),
        ));
    }

    checks
}
