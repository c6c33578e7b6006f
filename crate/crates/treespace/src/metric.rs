//! Weighted ultrametric pseudo-metrics on branch spaces.
//!
//! A weight assignment attaches one non-negative rational to every template
//! node; copies of a group share the template's weights. The induced
//! distance between two branches is the maximum weight over the nodes in the
//! symmetric difference of their node sets, which is an ultrametric
//! pseudo-metric with a finite value set.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::Error;
use crate::presentation::{PointAddress, TplMap, TplMapNode, TplPath, TreePresentation};

/// One non-negative rational per template node of a presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightAssignment {
    pub weights: TplMap<BigRational>,
}

impl WeightAssignment {
    pub fn uniform(p: &TreePresentation, w: BigRational) -> Self {
        WeightAssignment {
            weights: TplMap::build(p, |_, _| w.clone()),
        }
    }

    /// The discrete assignment: weight 1 everywhere, inducing the
    /// discrete metric on distinct branches.
    pub fn weight_one(p: &TreePresentation) -> Self {
        Self::uniform(p, BigRational::from_integer(1.into()))
    }

    pub fn from_map(weights: TplMap<BigRational>) -> Self {
        WeightAssignment { weights }
    }

    pub fn validate(&self, p: &TreePresentation) -> Result<(), Error> {
        if !self.weights.matches_shape(p) {
            return Err(Error::Validation {
                what: "weight assignment does not mirror the presentation".into(),
            });
        }
        fn nonneg(n: &TplMapNode<BigRational>) -> bool {
            !n.value.is_negative() && n.groups.iter().all(nonneg)
        }
        fn is_ok(n: &TplMapNode<BigRational>) -> bool {
            nonneg(n)
        }
        if !self.weights.roots.iter().all(is_ok) {
            return Err(Error::Validation {
                what: "weights must be non-negative".into(),
            });
        }
        Ok(())
    }

    pub fn weight_at(&self, path: &TplPath) -> &BigRational {
        self.weights.get(path).expect("weight path out of shape")
    }

    /// Maximum weight over the nodes of a branch at depth `from_depth` or
    /// deeper (depth 0 is the root node).
    fn path_max(&self, addr: &PointAddress, from_depth: usize) -> Option<BigRational> {
        let mut best: Option<BigRational> = None;
        let consider = |w: &BigRational, best: &mut Option<BigRational>| {
            if best.as_ref().map(|b| w > b).unwrap_or(true) {
                *best = Some(w.clone());
            }
        };
        let mut path = TplPath::root_path(addr.root);
        if from_depth == 0 {
            consider(self.weight_at(&path), &mut best);
        }
        for (i, &(g, _)) in addr.steps.iter().enumerate() {
            path = path.child(g);
            if i + 1 >= from_depth {
                consider(self.weight_at(&path), &mut best);
            }
        }
        best
    }

    /// The induced pseudo-metric: the maximum weight over the symmetric
    /// difference of the two branches' node sets.
    pub fn distance(&self, a: &PointAddress, b: &PointAddress) -> BigRational {
        if a == b {
            return BigRational::zero();
        }
        if a.root != b.root {
            let da = self.path_max(a, 0);
            let db = self.path_max(b, 0);
            return da.into_iter().chain(db).max().unwrap_or_else(BigRational::zero);
        }
        let mut common = 0;
        while common < a.steps.len()
            && common < b.steps.len()
            && a.steps[common] == b.steps[common]
        {
            common += 1;
        }
        // nodes strictly beyond the common prefix, on either branch
        let da = self.path_max(a, common + 1);
        let db = self.path_max(b, common + 1);
        da.into_iter().chain(db).max().unwrap_or_else(BigRational::zero)
    }

    pub fn max_weight(&self) -> BigRational {
        fn m(n: &TplMapNode<BigRational>) -> BigRational {
            n.groups
                .iter()
                .map(m)
                .max()
                .map(|c| c.max(n.value.clone()))
                .unwrap_or_else(|| n.value.clone())
        }
        self.weights
            .roots
            .iter()
            .map(m)
            .max()
            .unwrap_or_else(BigRational::zero)
    }

    /// Smallest strictly positive weight, if any.
    pub fn min_positive_weight(&self) -> Option<BigRational> {
        fn m(n: &TplMapNode<BigRational>, best: &mut Option<BigRational>) {
            if n.value.is_positive() && best.as_ref().map(|b| &n.value < b).unwrap_or(true) {
                *best = Some(n.value.clone());
            }
            for g in &n.groups {
                m(g, best);
            }
        }
        let mut best = None;
        for r in &self.weights.roots {
            m(r, &mut best);
        }
        best
    }
}
