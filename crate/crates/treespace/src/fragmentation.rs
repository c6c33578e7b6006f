//! Epsilon-derivatives of closed subsets and fragmentation indices.
//!
//! Closed subsets of the branch space are represented by template-uniform
//! markings: a branch belongs to the set exactly when its terminal node
//! instantiates a marked template node. Copy-uniform weights make the
//! derivative condition copy-symmetric, so one derivation step is an exact
//! finite computation on the marking.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::clopen::ClopenDescriptor;
use crate::metric::WeightAssignment;
use crate::ordinal::Ordinal;
use crate::presentation::{
    Multiplicity, PresentationNode, TplMap, TplMapNode, TplPath, TreePresentation,
};

/// A template-uniform closed subset of the branch space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemplateMarking {
    pub marks: TplMap<bool>,
}

/// Cardinality of a denoted point set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointCount {
    Finite(num_bigint::BigUint),
    Infinite,
}

/// Fragmentation index: the number of derivation steps until the set
/// empties, or `Infinite` when the sequence goes stationary while non-empty
/// (which cannot happen for valid weighted markings).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FragIndex {
    Ordinal(Ordinal),
    Infinite,
}

impl TemplateMarking {
    pub fn full(p: &TreePresentation) -> Self {
        TemplateMarking {
            marks: TplMap::build(p, |_, _| true),
        }
    }

    pub fn empty(p: &TreePresentation) -> Self {
        TemplateMarking {
            marks: TplMap::build(p, |_, _| false),
        }
    }

    pub fn is_empty(&self) -> bool {
        fn any(n: &TplMapNode<bool>) -> bool {
            n.value || n.groups.iter().any(any)
        }
        !self.marks.roots.iter().any(any)
    }

    pub fn is_marked(&self, path: &TplPath) -> bool {
        *self.marks.get(path).expect("marking path out of shape")
    }

    pub fn set(&mut self, path: &TplPath, v: bool) {
        self.marks.node_mut(path).expect("marking path out of shape").value = v;
    }

    /// the denoted set contains the branch iff its terminal template node is
    /// marked
    pub fn contains(&self, b: &crate::presentation::PointAddress) -> bool {
        self.is_marked(&b.template_path())
    }

    pub fn marked_paths(&self, p: &TreePresentation) -> Vec<TplPath> {
        p.template_paths()
            .into_iter()
            .filter(|t| self.is_marked(t))
            .collect()
    }

    /// Subset relation as markings.
    pub fn subset_of(&self, other: &TemplateMarking) -> bool {
        fn walk(a: &TplMapNode<bool>, b: &TplMapNode<bool>) -> bool {
            (!a.value || b.value)
                && a.groups.iter().zip(&b.groups).all(|(x, y)| walk(x, y))
        }
        self.marks
            .roots
            .iter()
            .zip(&other.marks.roots)
            .all(|(a, b)| walk(a, b))
    }

    /// Closedness: whenever a node inside the template subtree of a
    /// countable group is marked, the group's parent node must be marked,
    /// since limits of branches through distinct copies end at the parent.
    pub fn validate_closed(&self, p: &TreePresentation) -> Result<(), crate::error::Error> {
        if !self.marks.matches_shape(p) {
            return Err(crate::error::Error::Validation {
                what: "marking does not mirror the presentation".into(),
            });
        }
        fn any_marked(n: &TplMapNode<bool>) -> bool {
            n.value || n.groups.iter().any(any_marked)
        }
        fn walk(
            m: &TplMapNode<bool>,
            n: &PresentationNode,
            path: &TplPath,
        ) -> Result<(), crate::error::Error> {
            for (g, (mg, ng)) in m.groups.iter().zip(&n.groups).enumerate() {
                if ng.multiplicity.is_omega() && any_marked(mg) && !m.value {
                    return Err(crate::error::Error::Validation {
                        what: format!(
                            "marking is not closed: node {path} is unmarked but its \
                             countable group {g} has marked content"
                        ),
                    });
                }
                walk(mg, &ng.template, &path.child(g))?;
            }
            Ok(())
        }
        for (r, (m, n)) in self.marks.roots.iter().zip(&p.roots).enumerate() {
            walk(m, n, &TplPath::root_path(r))?;
        }
        Ok(())
    }

    /// Number of branches in the denoted set.
    pub fn count_points(&self, p: &TreePresentation) -> PointCount {
        use num_bigint::BigUint;
        fn walk(
            m: &TplMapNode<bool>,
            n: &PresentationNode,
            scale: Option<BigUint>,
            total: &mut Option<BigUint>,
        ) -> bool {
            // returns false when an infinite count was found
            if m.value {
                match (&scale, total.as_mut()) {
                    (Some(s), Some(t)) => *t += s,
                    _ => return false,
                }
            }
            for (mg, ng) in m.groups.iter().zip(&n.groups) {
                let child_scale = match (&scale, ng.multiplicity) {
                    (Some(s), Multiplicity::Finite(k)) => Some(s * BigUint::from(k)),
                    _ => None,
                };
                let marked_below = {
                    fn any(n: &TplMapNode<bool>) -> bool {
                        n.value || n.groups.iter().any(any)
                    }
                    any(mg)
                };
                if marked_below && child_scale.is_none() {
                    return false;
                }
                if !walk(mg, &ng.template, child_scale, total) {
                    return false;
                }
            }
            true
        }
        let mut total = Some(BigUint::zero());
        for (m, n) in self.marks.roots.iter().zip(&p.roots) {
            if !walk(m, n, Some(BigUint::from(1u32)), &mut total) {
                return PointCount::Infinite;
            }
        }
        PointCount::Finite(total.unwrap())
    }
}

/// Per-template-node statistics of a marking under a weight assignment.
#[derive(Clone, Debug)]
pub(crate) struct ConeStats {
    /// Max weight over paths from this node (inclusive) down to marked
    /// nodes; `None` when the subtree holds no marked node.
    pub reach: Option<BigRational>,
    /// Exact diameter of (cone of this node) intersected with the marking.
    pub diam: BigRational,
    /// Diameter of the intersection of the marking with the minimal basic
    /// neighbourhood of this node: the node itself plus the tails of its
    /// countable groups.
    pub diam_min: BigRational,
}

/// Computes [`ConeStats`] for every template node under a given marking.
pub(crate) fn cone_stats(
    p: &TreePresentation,
    w: &WeightAssignment,
    f: &TemplateMarking,
) -> TplMap<ConeStats> {
    fn walk(
        n: &PresentationNode,
        wn: &TplMapNode<BigRational>,
        mn: &TplMapNode<bool>,
    ) -> TplMapNode<ConeStats> {
        let children: Vec<TplMapNode<ConeStats>> = n
            .groups
            .iter()
            .zip(&wn.groups)
            .zip(&mn.groups)
            .map(|((g, wg), mg)| walk(&g.template, wg, mg))
            .collect();

        let mut content: Vec<(usize, &BigRational)> = Vec::new();
        for (i, c) in children.iter().enumerate() {
            if let Some(r) = &c.value.reach {
                content.push((i, r));
            }
        }

        let reach = if mn.value || !content.is_empty() {
            let mut best = wn.value.clone();
            for (_, r) in &content {
                if *r > &best {
                    best = (*r).clone();
                }
            }
            Some(best)
        } else {
            None
        };

        let mut diam = BigRational::zero();
        let mut diam_min = BigRational::zero();
        let anchored = mn.value;
        for &(i, r) in &content {
            let mult = n.groups[i].multiplicity;
            // anchored pair, a pair across two copies, or a pair across two
            // different groups all realize the reach of a group
            let counted = anchored
                || content.len() >= 2
                || matches!(mult, Multiplicity::Omega)
                || matches!(mult, Multiplicity::Finite(m) if m >= 2);
            if counted && *r > diam {
                diam = r.clone();
            }
            let inner = &children[i].value.diam;
            if *inner > diam {
                diam = inner.clone();
            }
            if mult.is_omega() && *r > diam_min {
                diam_min = r.clone();
            }
        }

        TplMapNode {
            value: ConeStats {
                reach,
                diam,
                diam_min,
            },
            groups: children,
        }
    }

    TplMap {
        roots: p
            .roots
            .iter()
            .zip(&w.weights.roots)
            .zip(&f.marks.roots)
            .map(|((n, wn), mn)| walk(n, wn, mn))
            .collect(),
    }
}

/// Diameter of the marked part of a cone minus excluded child cones,
/// computed from precomputed cone statistics. Exclusion of whole copies only
/// rescales multiplicities, so the candidate analysis at the root level is
/// the same as for a full cone.
pub(crate) fn diam_with_exclusions(
    p: &TreePresentation,
    stats: &TplMap<ConeStats>,
    f: &TemplateMarking,
    root: &TplPath,
    excluded: &std::collections::BTreeSet<(usize, usize)>,
) -> BigRational {
    let node = p.node_at(root).expect("descriptor root out of shape");
    let stat_node = stats.node(root).expect("stats out of shape");
    let marked = f.is_marked(root);

    let mut content: Vec<(usize, BigRational, Multiplicity)> = Vec::new();
    for (i, grp) in node.groups.iter().enumerate() {
        let excl = excluded.iter().filter(|&&(g, _)| g == i).count();
        let mult = match grp.multiplicity {
            Multiplicity::Omega => Multiplicity::Omega,
            Multiplicity::Finite(m) => Multiplicity::Finite(m.saturating_sub(excl)),
        };
        if mult == Multiplicity::Finite(0) {
            continue;
        }
        if let Some(r) = &stat_node.groups[i].value.reach {
            content.push((i, r.clone(), mult));
        }
    }

    let mut diam = BigRational::zero();
    for (i, r, mult) in &content {
        let counted = marked
            || content.len() >= 2
            || mult.is_omega()
            || matches!(mult, Multiplicity::Finite(m) if *m >= 2);
        if counted && r > &diam {
            diam = r.clone();
        }
        let inner = &stat_node.groups[*i].value.diam;
        if inner > &diam {
            diam = inner.clone();
        }
    }
    diam
}

/// Exact diameter of the intersection of the descriptor's set with the
/// marking's set.
pub fn clopen_diam(
    p: &TreePresentation,
    w: &WeightAssignment,
    c: &ClopenDescriptor,
    f: &TemplateMarking,
) -> BigRational {
    let stats = cone_stats(p, w, f);
    diam_with_exclusions(p, &stats, f, &c.root.template_path(), &c.excluded)
}

/// One epsilon-derivation step: keeps the branches of `f` all of whose basic
/// neighbourhoods meet `f` in a set of diameter at least `epsilon`.
///
/// A basic neighbourhood can drop finite-multiplicity children entirely but
/// only finitely many copies of a countable group, so the tails of countable
/// groups always contribute: a branch survives exactly when the marked
/// content of some countable group below its terminal node reaches weight
/// `epsilon` or more.
pub fn derive_once(
    p: &TreePresentation,
    w: &WeightAssignment,
    f: &TemplateMarking,
    epsilon: &BigRational,
) -> TemplateMarking {
    assert!(
        epsilon > &BigRational::zero(),
        "epsilon must be strictly positive"
    );
    let stats = cone_stats(p, w, f);
    fn walk(
        m: &TplMapNode<bool>,
        s: &TplMapNode<ConeStats>,
        epsilon: &BigRational,
    ) -> TplMapNode<bool> {
        TplMapNode {
            value: m.value && &s.value.diam_min >= epsilon,
            groups: m
                .groups
                .iter()
                .zip(&s.groups)
                .map(|(mg, sg)| walk(mg, sg, epsilon))
                .collect(),
        }
    }
    TemplateMarking {
        marks: TplMap {
            roots: f
                .marks
                .roots
                .iter()
                .zip(&stats.roots)
                .map(|(m, s)| walk(m, s, epsilon))
                .collect(),
        },
    }
}

/// The derivation sequence starting at `start`, including the first empty
/// (or repeated) marking.
pub fn derivation_sequence(
    p: &TreePresentation,
    w: &WeightAssignment,
    epsilon: &BigRational,
    start: &TemplateMarking,
) -> Vec<TemplateMarking> {
    let mut seq = vec![start.clone()];
    loop {
        let last = seq.last().unwrap();
        if last.is_empty() {
            return seq;
        }
        let next = derive_once(p, w, last, epsilon);
        let stationary = &next == last;
        seq.push(next);
        if stationary {
            return seq;
        }
    }
}

/// Number of derivation steps until `start` empties.
pub fn frag_index(
    p: &TreePresentation,
    w: &WeightAssignment,
    epsilon: &BigRational,
    start: &TemplateMarking,
) -> FragIndex {
    let seq = derivation_sequence(p, w, epsilon, start);
    let last = seq.last().unwrap();
    if last.is_empty() {
        FragIndex::Ordinal(Ordinal::from_nat(seq.len() as u64 - 1))
    } else {
        FragIndex::Infinite
    }
}

/// The fragmentation index of `start` over all positive epsilon. Over a
/// finite weight set the supremum is attained below the smallest positive
/// weight, so it is computed at half that weight; a weightless (all-zero)
/// assignment fragments in one step at every scale.
pub fn frag_index_sup(
    p: &TreePresentation,
    w: &WeightAssignment,
    start: &TemplateMarking,
) -> FragIndex {
    let eps = match w.min_positive_weight() {
        Some(min) => min / BigRational::from_integer(2.into()),
        None => BigRational::one(),
    };
    frag_index(p, w, &eps, start)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{t1, t2, t2_decaying_weights};
    use crate::presentation::cantor_tree;
    use crate::rat::{rat, rat_int};

    fn ord(n: u64) -> FragIndex {
        FragIndex::Ordinal(Ordinal::from_nat(n))
    }

    #[test]
    fn clopen_diam_examples() {
        let p = t1();
        let w = WeightAssignment::weight_one(&p);
        let full = TemplateMarking::full(&p);
        let u_root = ClopenDescriptor::cone(crate::presentation::PointAddress::root_branch(0));
        // two distinct branches at distance 1
        assert_eq!(clopen_diam(&p, &w, &u_root, &full), rat_int(1));

        let u_leaf = ClopenDescriptor::cone(
            crate::presentation::PointAddress::root_branch(0).child(0, 2),
        );
        assert_eq!(clopen_diam(&p, &w, &u_leaf, &full), rat_int(0));

        let nothing = TemplateMarking::empty(&p);
        assert_eq!(clopen_diam(&p, &w, &u_root, &nothing), rat_int(0));
    }

    #[test]
    fn derive_once_examples() {
        let p = t1();
        let w = WeightAssignment::weight_one(&p);
        let full = TemplateMarking::full(&p);
        let half = rat(1, 2);

        // leaves have singleton neighbourhoods; the root keeps tail leaves
        // at distance 1
        let d1 = derive_once(&p, &w, &full, &half);
        let root = TplPath::root_path(0);
        let leaf = root.child(0);
        assert!(d1.is_marked(&root));
        assert!(!d1.is_marked(&leaf));

        let d2 = derive_once(&p, &w, &d1, &half);
        assert!(d2.is_empty());

        let p2 = t2();
        let w2 = t2_decaying_weights(&p2);
        let full2 = TemplateMarking::full(&p2);
        let root = TplPath::root_path(0);
        let mid = root.child(0);
        let leaf = mid.child(0);

        let d = derive_once(&p2, &w2, &full2, &rat(1, 8));
        assert!(d.is_marked(&root) && d.is_marked(&mid) && !d.is_marked(&leaf));

        let d = derive_once(&p2, &w2, &full2, &half);
        assert!(d.is_marked(&root) && !d.is_marked(&mid) && !d.is_marked(&leaf));
    }

    #[test]
    fn frag_index_examples() {
        // discrete uniform trees of depth k fragment in k+1 steps
        for k in 0..=4usize {
            let p = cantor_tree(k);
            let w = WeightAssignment::weight_one(&p);
            let full = TemplateMarking::full(&p);
            assert_eq!(frag_index(&p, &w, &rat(1, 2), &full), ord(k as u64 + 1));
        }

        let p = t2();
        let w = t2_decaying_weights(&p);
        let full = TemplateMarking::full(&p);
        assert_eq!(frag_index(&p, &w, &rat(1, 2), &full), ord(2));
        assert_eq!(frag_index(&p, &w, &rat(1, 8), &full), ord(3));

        // epsilon above the largest weight empties everything in one step
        assert_eq!(frag_index(&p, &w, &rat_int(7), &full), ord(1));
        assert_eq!(frag_index_sup(&p, &w, &full), ord(3));
    }

    #[test]
    fn derivation_properties() {
        let p = t2();
        let w = t2_decaying_weights(&p);
        let full = TemplateMarking::full(&p);
        let small = rat(1, 8);
        let large = rat(1, 2);

        let d_small = derive_once(&p, &w, &full, &small);
        let d_large = derive_once(&p, &w, &full, &large);
        // monotone in epsilon
        assert!(d_large.subset_of(&d_small));
        assert!(d_small.subset_of(&full));
        d_small.validate_closed(&p).unwrap();
        d_large.validate_closed(&p).unwrap();

        // strict descent bounds the index by the node count plus one
        let seq = derivation_sequence(&p, &w, &small, &full);
        assert!(seq.len() <= p.template_node_count() + 2);
        for win in seq.windows(2) {
            assert!(win[1].subset_of(&win[0]));
            if !win[0].is_empty() {
                assert_ne!(win[0], win[1]);
            }
        }
    }

    #[test]
    fn count_points_examples() {
        use num_bigint::BigUint;
        let p = t1();
        let mut m = TemplateMarking::empty(&p);
        m.set(&TplPath::root_path(0), true);
        assert_eq!(m.count_points(&p), PointCount::Finite(BigUint::from(1u32)));
        let full = TemplateMarking::full(&p);
        assert_eq!(full.count_points(&p), PointCount::Infinite);
    }

    proptest::proptest! {
        #[test]
        fn derivation_laws_on_random_instances(seed in 0u64..400) {
            use rand::SeedableRng;
            let cfg = crate::gen::GenConfig { max_depth: 3, ..Default::default() };
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let p = crate::gen::gen_presentation(&mut rng, &cfg);
            let w = crate::gen::gen_weights(&mut rng, &p, &cfg);
            let f = crate::gen::gen_marking(&mut rng, &p);
            let small = rat(1, 8);
            let large = rat(1, 2);
            let d_small = derive_once(&p, &w, &f, &small);
            let d_large = derive_once(&p, &w, &f, &large);
            proptest::prop_assert!(d_small.subset_of(&f));
            proptest::prop_assert!(d_large.subset_of(&d_small));
            proptest::prop_assert!(d_small.validate_closed(&p).is_ok());
            let idx = frag_index(&p, &w, &small, &f);
            match idx {
                FragIndex::Ordinal(o) => {
                    let bound = Ordinal::from_nat(p.template_node_count() as u64 + 1);
                    proptest::prop_assert!(o <= bound);
                }
                FragIndex::Infinite => proptest::prop_assert!(false, "stationary non-empty"),
            }
        }
    }
}
