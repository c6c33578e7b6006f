//! Finitely presented locally constant functions on a branch space.
//!
//! A [`SimpleFunction`] mirrors a presentation: every template node carries a
//! rational value, and every child group carries an optional finite list of
//! explicit per-copy override subtrees. A branch leaving the explicit region
//! takes the value of the node where it left, on its entire remaining cone,
//! which makes every denoted function locally constant and hence continuous.

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::Error;
use crate::metric::WeightAssignment;
use crate::presentation::{
    Multiplicity, PointAddress, PresentationNode, TreePresentation,
};
use crate::rat::abs_diff;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueGroup {
    /// Explicit override subtrees for copies `0..explicit.len()`.
    pub explicit: Vec<ValueNode>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueNode {
    pub value: BigRational,
    pub groups: Vec<ValueGroup>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleFunction {
    pub roots: Vec<ValueNode>,
}

/// Least Lipschitz constant of a function, or `Infinite` when two branches
/// at pseudo-distance zero take different values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Lipschitz {
    Finite(BigRational),
    Infinite,
}

impl SimpleFunction {
    pub fn constant(p: &TreePresentation, v: BigRational) -> Self {
        fn node(n: &PresentationNode, v: &BigRational) -> ValueNode {
            ValueNode {
                value: v.clone(),
                groups: n.groups.iter().map(|_| ValueGroup { explicit: Vec::new() }).collect(),
            }
        }
        SimpleFunction {
            roots: p.roots.iter().map(|r| node(r, &v)).collect(),
        }
    }

    pub fn validate(&self, p: &TreePresentation) -> Result<(), Error> {
        fn walk(v: &ValueNode, n: &PresentationNode, path: String) -> Result<(), Error> {
            if v.groups.len() != n.groups.len() {
                return Err(Error::Validation {
                    what: format!("function node at {path} has {} groups, tree has {}",
                        v.groups.len(), n.groups.len()),
                });
            }
            for (g, (vg, ng)) in v.groups.iter().zip(&n.groups).enumerate() {
                if let Multiplicity::Finite(m) = ng.multiplicity {
                    if vg.explicit.len() > m {
                        return Err(Error::Validation {
                            what: format!(
                                "group {path}/{g} has {} explicit overrides for multiplicity {m}",
                                vg.explicit.len()
                            ),
                        });
                    }
                }
                for (c, sub) in vg.explicit.iter().enumerate() {
                    walk(sub, &ng.template, format!("{path}/{g}.{c}"))?;
                }
            }
            Ok(())
        }
        if self.roots.len() != p.roots.len() {
            return Err(Error::Validation {
                what: "function root count differs from presentation".into(),
            });
        }
        for (r, (v, n)) in self.roots.iter().zip(&p.roots).enumerate() {
            walk(v, n, r.to_string())?;
        }
        Ok(())
    }

    /// Evaluates the denoted function at a branch. Walking out of the
    /// explicit overrides returns the value of the last explicit node.
    pub fn evaluate(&self, b: &PointAddress) -> BigRational {
        let mut cur = &self.roots[b.root];
        for &(g, c) in &b.steps {
            let group = &cur.groups[g];
            match group.explicit.get(c) {
                Some(sub) => cur = sub,
                None => return cur.value.clone(),
            }
        }
        cur.value.clone()
    }

    /// Largest explicit override copy index anywhere in the function.
    pub fn max_explicit_index(&self) -> Option<usize> {
        fn walk(v: &ValueNode, best: &mut Option<usize>) {
            for g in &v.groups {
                if !g.explicit.is_empty() {
                    let idx = g.explicit.len() - 1;
                    if best.map(|b| idx > b).unwrap_or(true) {
                        *best = Some(idx);
                    }
                }
                for sub in &g.explicit {
                    walk(sub, best);
                }
            }
        }
        let mut best = None;
        for r in &self.roots {
            walk(r, &mut best);
        }
        best
    }

    /// Copy bound that makes finite enumeration exact for pairwise
    /// quantities over this function: largest explicit index plus two.
    pub fn design_copy_bound(&self) -> usize {
        self.max_explicit_index().unwrap_or(0) + 2
    }

    /// Least `L` with `|f(b) - f(c)| <= L * d(b, c)` over all branch pairs,
    /// computed exactly on the design enumeration; `Infinite` when some pair
    /// has distance 0 but different values.
    pub fn lipschitz_bound(&self, p: &TreePresentation, w: &WeightAssignment) -> Lipschitz {
        let bound = self.design_copy_bound();
        let pts = p.enumerate_points(bound);
        let values: Vec<BigRational> = pts.iter().map(|b| self.evaluate(b)).collect();
        let mut best = BigRational::zero();
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                let dv = abs_diff(&values[i], &values[j]);
                if dv.is_zero() {
                    continue;
                }
                let d = w.distance(&pts[i], &pts[j]);
                if d.is_zero() {
                    return Lipschitz::Infinite;
                }
                let ratio = dv / d;
                if ratio > best {
                    best = ratio;
                }
            }
        }
        Lipschitz::Finite(best)
    }

    /// Rescales all values by `factor`.
    pub fn scale(&self, factor: &BigRational) -> SimpleFunction {
        fn walk(v: &ValueNode, factor: &BigRational) -> ValueNode {
            ValueNode {
                value: &v.value * factor,
                groups: v
                    .groups
                    .iter()
                    .map(|g| ValueGroup {
                        explicit: g.explicit.iter().map(|s| walk(s, factor)).collect(),
                    })
                    .collect(),
            }
        }
        SimpleFunction {
            roots: self.roots.iter().map(|r| walk(r, factor)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::t1;
    use crate::rat::{rat, rat_int};

    /// Root value 0 with leaf copies 0..=2 overridden to 1.
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
    fn evaluate_examples() {
        let p = t1();
        let c = SimpleFunction::constant(&p, rat(5, 3));
        for b in p.enumerate_points(4) {
            assert_eq!(c.evaluate(&b), rat(5, 3));
        }

        let f = step_function(&p);
        let root = PointAddress::root_branch(0);
        assert_eq!(f.evaluate(&root.child(0, 5)), rat_int(0));
        assert_eq!(f.evaluate(&root.child(0, 1)), rat_int(1));
        assert_eq!(f.evaluate(&root), rat_int(0));
    }

    #[test]
    fn lipschitz_examples() {
        let p = t1();
        let w = WeightAssignment::weight_one(&p);
        let c = SimpleFunction::constant(&p, rat_int(9));
        assert_eq!(c.lipschitz_bound(&p, &w), Lipschitz::Finite(rat_int(0)));

        // range inside an interval of length 1 gives a bound of at most 1
        let f = step_function(&p);
        assert_eq!(f.lipschitz_bound(&p, &w), Lipschitz::Finite(rat_int(1)));

        let g = f.scale(&rat_int(2));
        assert_eq!(g.lipschitz_bound(&p, &w), Lipschitz::Finite(rat_int(2)));
    }

    #[test]
    fn zero_distance_with_different_values_is_infinite() {
        let p = t1();
        let w = WeightAssignment::uniform(&p, rat_int(0));
        let f = step_function(&p);
        assert_eq!(f.lipschitz_bound(&p, &w), Lipschitz::Infinite);
    }

    #[test]
    fn validate_checks_finite_overrides() {
        use crate::presentation::{ChildGroup, Multiplicity};
        let p = TreePresentation {
            roots: vec![PresentationNode {
                groups: vec![ChildGroup {
                    template: PresentationNode::leaf(),
                    multiplicity: Multiplicity::Finite(1),
                }],
            }],
        };
        let mut f = SimpleFunction::constant(&p, rat_int(0));
        f.roots[0].groups[0].explicit = vec![
            ValueNode { value: rat_int(1), groups: vec![] },
            ValueNode { value: rat_int(2), groups: vec![] },
        ];
        assert!(f.validate(&p).is_err());
    }

    /// Supremum computations are exact at the design copy bound: one more
    /// enumerated copy never changes the answer.
    fn lipschitz_at(f: &SimpleFunction, p: &TreePresentation, w: &WeightAssignment, bound: usize) -> Lipschitz {
        use crate::rat::abs_diff;
        use num_traits::Zero;
        let pts = p.enumerate_points(bound);
        let mut best = num_rational::BigRational::zero();
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                let dv = abs_diff(&f.evaluate(&pts[i]), &f.evaluate(&pts[j]));
                if dv.is_zero() {
                    continue;
                }
                let d = w.distance(&pts[i], &pts[j]);
                if d.is_zero() {
                    return Lipschitz::Infinite;
                }
                let r = dv / d;
                if r > best {
                    best = r;
                }
            }
        }
        Lipschitz::Finite(best)
    }

    proptest::proptest! {
        #[test]
        fn design_bound_is_stable(seed in 0u64..150) {
            use rand::SeedableRng;
            let cfg = crate::gen::GenConfig { max_depth: 3, max_groups: 2, ..Default::default() };
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let p = crate::gen::gen_presentation(&mut rng, &cfg);
            let w = crate::gen::gen_weights(&mut rng, &p, &cfg);
            let f = crate::gen::gen_function(&mut rng, &p, &cfg);
            let bound = f.design_copy_bound();
            let at_design = lipschitz_at(&f, &p, &w, bound);
            let one_deeper = lipschitz_at(&f, &p, &w, bound + 1);
            proptest::prop_assert_eq!(&at_design, &one_deeper);
            proptest::prop_assert_eq!(&at_design, &f.lipschitz_bound(&p, &w));
        }
    }
}
