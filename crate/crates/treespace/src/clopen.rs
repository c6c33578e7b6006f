//! Basic clopen subsets of a branch space.
//!
//! A descriptor denotes either a full cone `U_t` (type I) or a cone minus a
//! non-empty finite set of direct-successor cones (type II). The root node
//! and the excluded children are recoverable from the denoted set, so
//! descriptor equality is set equality.

use std::collections::BTreeSet;
use std::fmt;

use crate::presentation::{PointAddress, TreePresentation};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClopenKind {
    TypeI,
    TypeII,
}

/// A basic clopen set: the branches through `root`, minus the branches
/// through each excluded direct child of `root`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClopenDescriptor {
    pub root: PointAddress,
    /// Excluded direct successors, as `(group, copy)` steps below `root`.
    pub excluded: BTreeSet<(usize, usize)>,
}

impl ClopenDescriptor {
    pub fn cone(root: PointAddress) -> Self {
        ClopenDescriptor {
            root,
            excluded: BTreeSet::new(),
        }
    }

    pub fn with_exclusions(
        root: PointAddress,
        excluded: impl IntoIterator<Item = (usize, usize)>,
    ) -> Self {
        ClopenDescriptor {
            root,
            excluded: excluded.into_iter().collect(),
        }
    }

    pub fn kind(&self) -> ClopenKind {
        if self.excluded.is_empty() {
            ClopenKind::TypeI
        } else {
            ClopenKind::TypeII
        }
    }

    /// Membership: `b` extends the root and avoids every excluded child cone.
    pub fn member(&self, b: &PointAddress) -> bool {
        if !b.extends(&self.root) {
            return false;
        }
        if b.steps.len() > self.root.steps.len() {
            let step = b.steps[self.root.steps.len()];
            if self.excluded.contains(&step) {
                return false;
            }
        }
        true
    }

    /// The largest copy index appearing in the root address or exclusions.
    pub fn max_copy_index(&self) -> Option<usize> {
        self.root
            .steps
            .iter()
            .map(|&(_, c)| c)
            .chain(self.excluded.iter().map(|&(_, c)| c))
            .max()
    }

    pub fn validate(&self, p: &TreePresentation) -> bool {
        let Some(node) = p.resolve(&self.root) else {
            return false;
        };
        self.excluded.iter().all(|&(g, c)| {
            node.groups
                .get(g)
                .map(|grp| grp.multiplicity.admits(c))
                .unwrap_or(false)
        })
    }

    /// Set inclusion `self <= other`, decided from the descriptor data.
    pub fn subset_of(&self, other: &ClopenDescriptor) -> bool {
        if self.root == other.root {
            return self.excluded.is_superset(&other.excluded);
        }
        if self.root.extends(&other.root) {
            let step = self.root.steps[other.root.steps.len()];
            return !other.excluded.contains(&step);
        }
        false
    }

    /// Set disjointness, decided from the descriptor data.
    pub fn disjoint_from(&self, other: &ClopenDescriptor) -> bool {
        if self.root == other.root {
            // both contain the branch ending at the shared root
            return false;
        }
        if self.root.extends(&other.root) {
            let step = self.root.steps[other.root.steps.len()];
            return other.excluded.contains(&step);
        }
        if other.root.extends(&self.root) {
            let step = other.root.steps[self.root.steps.len()];
            return self.excluded.contains(&step);
        }
        true
    }

    /// Nested-or-disjoint trichotomy for basic clopen sets.
    pub fn trichotomy_with(&self, other: &ClopenDescriptor) -> bool {
        self.subset_of(other) || other.subset_of(self) || self.disjoint_from(other)
    }
}

impl fmt::Display for ClopenDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "U[{}]", self.root)?;
        if !self.excluded.is_empty() {
            let parts: Vec<String> = self
                .excluded
                .iter()
                .map(|(g, c)| format!("{g}.{c}"))
                .collect();
            write!(f, "\\{{{}}}", parts.join(","))?;
        }
        Ok(())
    }
}
