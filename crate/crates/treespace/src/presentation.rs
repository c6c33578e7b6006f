//! Finitely presented regular omega-trees and their branch spaces.
//!
//! A presentation is a finite term: a non-empty list of roots, where each
//! node carries an ordered list of child groups and each group unfolds into
//! either finitely many or countably many copies of a single template node.
//! Every branch of the unfolded tree is finite, so branches correspond
//! one-to-one with nodes and are denoted by [`PointAddress`]es.

use std::fmt;

/// Number of copies a child group unfolds into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Multiplicity {
    Finite(usize),
    Omega,
}

impl Multiplicity {
    pub fn admits(&self, copy: usize) -> bool {
        match self {
            Multiplicity::Finite(m) => copy < *m,
            Multiplicity::Omega => true,
        }
    }

    pub fn is_omega(&self) -> bool {
        matches!(self, Multiplicity::Omega)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChildGroup {
    pub template: PresentationNode,
    pub multiplicity: Multiplicity,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PresentationNode {
    pub groups: Vec<ChildGroup>,
}

impl PresentationNode {
    pub fn leaf() -> Self {
        PresentationNode { groups: Vec::new() }
    }

    pub fn is_leaf(&self) -> bool {
        self.groups.is_empty()
    }
}

/// A finitely presented regular omega-tree with finitely many roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreePresentation {
    pub roots: Vec<PresentationNode>,
}

/// Identifies a template node: a root index plus a path of group indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TplPath {
    pub root: usize,
    pub groups: Vec<usize>,
}

impl TplPath {
    pub fn root_path(root: usize) -> Self {
        TplPath {
            root,
            groups: Vec::new(),
        }
    }

    pub fn child(&self, group: usize) -> Self {
        let mut groups = self.groups.clone();
        groups.push(group);
        TplPath {
            root: self.root,
            groups,
        }
    }
}

impl fmt::Display for TplPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.root)?;
        for g in &self.groups {
            write!(f, "/{g}")?;
        }
        Ok(())
    }
}

/// A node of the unfolded tree, i.e. a finite branch: a root index followed
/// by `(group index, copy index)` steps. The derived ordering is the
/// lexicographic enumeration order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointAddress {
    pub root: usize,
    pub steps: Vec<(usize, usize)>,
}

impl PointAddress {
    pub fn root_branch(root: usize) -> Self {
        PointAddress {
            root,
            steps: Vec::new(),
        }
    }

    pub fn child(&self, group: usize, copy: usize) -> Self {
        let mut steps = self.steps.clone();
        steps.push((group, copy));
        PointAddress {
            root: self.root,
            steps,
        }
    }

    pub fn depth(&self) -> usize {
        self.steps.len()
    }

    /// The template path obtained by erasing copy indices.
    pub fn template_path(&self) -> TplPath {
        TplPath {
            root: self.root,
            groups: self.steps.iter().map(|(g, _)| *g).collect(),
        }
    }

    /// True when `self` lies in the cone below `base` (inclusive).
    pub fn extends(&self, base: &PointAddress) -> bool {
        self.root == base.root
            && self.steps.len() >= base.steps.len()
            && self.steps[..base.steps.len()] == base.steps[..]
    }

    pub fn parent(&self) -> Option<PointAddress> {
        if self.steps.is_empty() {
            return None;
        }
        let mut steps = self.steps.clone();
        steps.pop();
        Some(PointAddress {
            root: self.root,
            steps,
        })
    }
}

impl fmt::Display for PointAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.root)?;
        for (g, c) in &self.steps {
            write!(f, "/{g}.{c}")?;
        }
        Ok(())
    }
}

/// A validation finding, reported with the template path it concerns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub path: String,
    pub message: String,
}

impl TreePresentation {
    pub fn single_leaf() -> Self {
        TreePresentation {
            roots: vec![PresentationNode::leaf()],
        }
    }

    pub fn node_at(&self, path: &TplPath) -> Option<&PresentationNode> {
        let mut node = self.roots.get(path.root)?;
        for &g in &path.groups {
            node = &node.groups.get(g)?.template;
        }
        Some(node)
    }

    /// Resolves an address, checking group ranges and copy bounds.
    pub fn resolve(&self, addr: &PointAddress) -> Option<&PresentationNode> {
        let mut node = self.roots.get(addr.root)?;
        for &(g, c) in &addr.steps {
            let group = node.groups.get(g)?;
            if !group.multiplicity.admits(c) {
                return None;
            }
            node = &group.template;
        }
        Some(node)
    }

    /// Checks the type invariants; an empty list means the presentation is
    /// well-formed. Violations are reported with the offending path.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        if self.roots.is_empty() {
            out.push(Diagnostic {
                path: "-".into(),
                message: "presentation has no roots".into(),
            });
        }
        fn walk(node: &PresentationNode, path: &TplPath, out: &mut Vec<Diagnostic>) {
            for (g, group) in node.groups.iter().enumerate() {
                let child = path.child(g);
                if group.multiplicity == Multiplicity::Finite(0) {
                    out.push(Diagnostic {
                        path: child.to_string(),
                        message: "empty group".into(),
                    });
                }
                walk(&group.template, &child, out);
            }
        }
        for (r, root) in self.roots.iter().enumerate() {
            walk(root, &TplPath::root_path(r), &mut out);
        }
        out
    }

    /// All addresses whose omega-copy indices are below `copy_bound`, in
    /// lexicographic order. Finite groups are enumerated in full.
    pub fn enumerate_points(&self, copy_bound: usize) -> Vec<PointAddress> {
        assert!(copy_bound >= 1, "copy bound must be at least 1");
        let mut out = Vec::new();
        fn walk(
            node: &PresentationNode,
            addr: &PointAddress,
            bound: usize,
            out: &mut Vec<PointAddress>,
        ) {
            out.push(addr.clone());
            for (g, group) in node.groups.iter().enumerate() {
                let copies = match group.multiplicity {
                    Multiplicity::Finite(m) => m,
                    Multiplicity::Omega => bound,
                };
                for c in 0..copies {
                    walk(&group.template, &addr.child(g, c), bound, out);
                }
            }
        }
        for (r, root) in self.roots.iter().enumerate() {
            walk(root, &PointAddress::root_branch(r), copy_bound, &mut out);
        }
        out
    }

    /// All template paths in depth-first order.
    pub fn template_paths(&self) -> Vec<TplPath> {
        let mut out = Vec::new();
        fn walk(node: &PresentationNode, path: &TplPath, out: &mut Vec<TplPath>) {
            out.push(path.clone());
            for (g, group) in node.groups.iter().enumerate() {
                walk(&group.template, &path.child(g), out);
            }
        }
        for (r, root) in self.roots.iter().enumerate() {
            walk(root, &TplPath::root_path(r), &mut out);
        }
        out
    }

    pub fn template_node_count(&self) -> usize {
        fn count(node: &PresentationNode) -> usize {
            1 + node.groups.iter().map(|g| count(&g.template)).sum::<usize>()
        }
        self.roots.iter().map(count).sum()
    }

    pub fn depth(&self) -> usize {
        fn d(node: &PresentationNode) -> usize {
            node.groups
                .iter()
                .map(|g| 1 + d(&g.template))
                .max()
                .unwrap_or(0)
        }
        self.roots.iter().map(d).max().unwrap_or(0)
    }
}

/// The depth-`d` uniform omega-branching tree: every node of level below `d`
/// has a single countable group of the level-below tree. Its branch space is
/// the space of bounded-size finite subsets of the naturals with the
/// subset-extension topology, truncated at size `d`.
pub fn cantor_tree(depth: usize) -> TreePresentation {
    let mut node = PresentationNode::leaf();
    for _ in 0..depth {
        node = PresentationNode {
            groups: vec![ChildGroup {
                template: node,
                multiplicity: Multiplicity::Omega,
            }],
        };
    }
    TreePresentation { roots: vec![node] }
}

/// A value attached to every template node of a presentation, mirroring its
/// shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TplMap<T> {
    pub roots: Vec<TplMapNode<T>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TplMapNode<T> {
    pub value: T,
    pub groups: Vec<TplMapNode<T>>,
}

impl<T> TplMap<T> {
    /// Builds a map over the shape of `p`, calling `f` per template node.
    pub fn build(p: &TreePresentation, mut f: impl FnMut(&TplPath, &PresentationNode) -> T) -> Self {
        fn walk<T>(
            node: &PresentationNode,
            path: &TplPath,
            f: &mut impl FnMut(&TplPath, &PresentationNode) -> T,
        ) -> TplMapNode<T> {
            let value = f(path, node);
            let groups = node
                .groups
                .iter()
                .enumerate()
                .map(|(g, group)| walk(&group.template, &path.child(g), f))
                .collect();
            TplMapNode { value, groups }
        }
        TplMap {
            roots: p
                .roots
                .iter()
                .enumerate()
                .map(|(r, root)| walk(root, &TplPath::root_path(r), &mut f))
                .collect(),
        }
    }

    pub fn node(&self, path: &TplPath) -> Option<&TplMapNode<T>> {
        let mut node = self.roots.get(path.root)?;
        for &g in &path.groups {
            node = node.groups.get(g)?;
        }
        Some(node)
    }

    pub fn node_mut(&mut self, path: &TplPath) -> Option<&mut TplMapNode<T>> {
        let mut node = self.roots.get_mut(path.root)?;
        for &g in &path.groups {
            node = node.groups.get_mut(g)?;
        }
        Some(node)
    }

    pub fn get(&self, path: &TplPath) -> Option<&T> {
        self.node(path).map(|n| &n.value)
    }

    /// Verifies that the map mirrors the shape of `p` exactly.
    pub fn matches_shape(&self, p: &TreePresentation) -> bool {
        fn ok<T>(m: &TplMapNode<T>, n: &PresentationNode) -> bool {
            m.groups.len() == n.groups.len()
                && m.groups
                    .iter()
                    .zip(&n.groups)
                    .all(|(mg, ng)| ok(mg, &ng.template))
        }
        self.roots.len() == p.roots.len()
            && self.roots.iter().zip(&p.roots).all(|(m, n)| ok(m, n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{t1, t2};

    #[test]
    fn validate_examples() {
        assert!(TreePresentation::single_leaf().validate().is_empty());
        assert!(t1().validate().is_empty());
        let bad = TreePresentation {
            roots: vec![PresentationNode {
                groups: vec![ChildGroup {
                    template: PresentationNode::leaf(),
                    multiplicity: Multiplicity::Finite(0),
                }],
            }],
        };
        let diags = bad.validate();
        assert_eq!(diags.len(), 1);
        assert!(diags[0].message.contains("empty group"));
        assert!(TreePresentation { roots: vec![] }.validate().len() == 1);
    }

    #[test]
    fn enumerate_counts() {
        assert_eq!(t1().enumerate_points(3).len(), 4);
        assert_eq!(TreePresentation::single_leaf().enumerate_points(7).len(), 1);
        // 1 + 2 * (1 + 2), counted by unfolding two copies of each group
        assert_eq!(t2().enumerate_points(2).len(), 7);
    }

    #[test]
    fn enumerate_is_sorted_lexicographically() {
        let pts = t2().enumerate_points(3);
        let mut sorted = pts.clone();
        sorted.sort();
        assert_eq!(pts, sorted);
    }

    #[test]
    fn cantor_tree_counts() {
        assert_eq!(cantor_tree(0), TreePresentation::single_leaf());
        assert_eq!(cantor_tree(1), t1());
        // geometric count (k^(D+1) - 1) / (k - 1)
        for depth in 0..=3usize {
            for bound in 2..=4usize {
                let expect = (bound.pow(depth as u32 + 1) - 1) / (bound - 1);
                assert_eq!(
                    cantor_tree(depth).enumerate_points(bound).len(),
                    expect,
                    "depth {depth} bound {bound}"
                );
            }
        }
    }

    #[test]
    fn address_extension() {
        let root = PointAddress::root_branch(0);
        let leaf = root.child(0, 4);
        assert!(leaf.extends(&root));
        assert!(!root.extends(&leaf));
        assert!(leaf.extends(&leaf));
        assert!(!leaf.extends(&root.child(0, 3)));
        assert_eq!(leaf.parent().unwrap(), root);
    }
}
