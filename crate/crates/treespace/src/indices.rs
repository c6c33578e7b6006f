//! Ordinal index, interval types, and Cantor-Bendixson ranks of presented
//! tree spaces.
//!
//! The interval type is computed by structural recursion with a canonical
//! child enumeration: finite-multiplicity children first in listed order,
//! then the countable groups as a round-robin block adjacent to the limit
//! point. The homeomorphism type does not depend on the enumeration, but the
//! canonical order makes the resulting ordinal deterministic.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::Error;
use crate::fragmentation::{derive_once, TemplateMarking};
use crate::metric::WeightAssignment;
use crate::ordinal::Ordinal;
use crate::presentation::{
    ChildGroup, Multiplicity, PointAddress, PresentationNode, TreePresentation,
};
use crate::rat::rat_int;

/// Length of the process that repeatedly deletes maximal nodes: leaves have
/// rank 0, an inner node one more than the maximum over its child templates,
/// and the tree index is the maximal root rank plus one.
pub fn ordinal_index(p: &TreePresentation) -> Ordinal {
    fn rank(n: &PresentationNode) -> u64 {
        n.groups
            .iter()
            .map(|g| rank(&g.template) + 1)
            .max()
            .unwrap_or(0)
    }
    let r = p.roots.iter().map(rank).max().unwrap_or(0);
    Ordinal::from_nat(r + 1)
}

fn beta_of_node(n: &PresentationNode) -> Ordinal {
    let mut finite_sum = Ordinal::zero();
    let mut cycle = Ordinal::zero();
    let mut has_omega = false;
    for g in &n.groups {
        let beta = beta_of_node(&g.template);
        match g.multiplicity {
            Multiplicity::Finite(m) => {
                finite_sum = finite_sum.add(&beta.succ().times_nat(m));
            }
            Multiplicity::Omega => {
                has_omega = true;
                cycle = cycle.add(&beta.succ());
            }
        }
    }
    if has_omega {
        finite_sum.add(&cycle.omega_step())
    } else {
        finite_sum
    }
}

/// The ordinal `beta` such that the branch space is homeomorphic to the
/// closed interval `[0, beta]`. Roots are concatenated in order, the last
/// root contributing its closed interval.
pub fn interval_type(p: &TreePresentation) -> Ordinal {
    let betas: Vec<Ordinal> = p.roots.iter().map(beta_of_node).collect();
    let mut acc = Ordinal::zero();
    for (i, b) in betas.iter().enumerate() {
        if i + 1 < betas.len() {
            acc = acc.add(&b.succ());
        } else {
            acc = acc.add(b);
        }
    }
    acc
}

/// The image of a branch under the canonical homeomorphism onto
/// `[0, interval_type]`. The map is injective, order-preserving for the
/// canonical branch order, and sends each cone onto a closed interval whose
/// top is the image of the cone's root.
pub fn point_to_ordinal(p: &TreePresentation, b: &PointAddress) -> Ordinal {
    let mut offset = Ordinal::zero();
    for r in 0..b.root {
        offset = offset.add(&beta_of_node(&p.roots[r]).succ());
    }
    let mut node = &p.roots[b.root];
    for &(g, c) in &b.steps {
        // positions of earlier children in the canonical enumeration
        let mut finite_prefix = Ordinal::zero();
        let mut cycle = Ordinal::zero();
        let mut omega_before_g = Ordinal::zero();
        for (i, grp) in node.groups.iter().enumerate() {
            let beta1 = beta_of_node(&grp.template).succ();
            match grp.multiplicity {
                Multiplicity::Finite(m) => {
                    let copies_before = if i < g {
                        m
                    } else if i == g {
                        c
                    } else {
                        0
                    };
                    finite_prefix = finite_prefix.add(&beta1.times_nat(copies_before));
                }
                Multiplicity::Omega => {
                    if i < g {
                        omega_before_g = omega_before_g.add(&beta1);
                    }
                    cycle = cycle.add(&beta1);
                }
            }
        }
        let grp = &node.groups[g];
        match grp.multiplicity {
            Multiplicity::Finite(_) => {
                offset = offset.add(&finite_prefix);
            }
            Multiplicity::Omega => {
                // all finite children come first, then full round-robin
                // cycles for earlier copies, then earlier groups in this
                // cycle
                offset = offset
                    .add(&finite_prefix)
                    .add(&cycle.times_nat(c))
                    .add(&omega_before_g);
            }
        }
        node = &grp.template;
    }
    offset.add(&beta_of_node(node))
}

/// The canonical linear order realized by [`point_to_ordinal`]: ancestors
/// sit above their descendants, and siblings compare by their position in
/// the canonical child enumeration.
pub fn canonical_point_cmp(
    p: &TreePresentation,
    a: &PointAddress,
    b: &PointAddress,
) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    if a == b {
        return Ordering::Equal;
    }
    if a.root != b.root {
        return a.root.cmp(&b.root);
    }
    let mut node = &p.roots[a.root];
    for i in 0.. {
        match (a.steps.get(i), b.steps.get(i)) {
            (None, None) => return Ordering::Equal,
            // a is an ancestor of b: the ancestor maps to the cone's top
            (None, Some(_)) => return Ordering::Greater,
            (Some(_), None) => return Ordering::Less,
            (Some(&(ga, ca)), Some(&(gb, cb))) => {
                if (ga, ca) == (gb, cb) {
                    node = &node.groups[ga].template;
                    continue;
                }
                let key = |g: usize, c: usize| match node.groups[g].multiplicity {
                    Multiplicity::Finite(_) => (0usize, g, c),
                    Multiplicity::Omega => (1usize, c, g),
                };
                return key(ga, ca).cmp(&key(gb, cb));
            }
        }
    }
    unreachable!()
}

/// Builds a single-root presentation whose interval type is exactly `beta`.
/// Only ordinals below `w^w` are presentable in the regular class.
pub fn tree_of_interval(beta: &Ordinal) -> Result<TreePresentation, Error> {
    if !beta.below_omega_pow_omega() {
        return Err(Error::Unsupported {
            what: format!("interval type {beta} is not presentable in the regular class (needs w^w or more)"),
        });
    }
    Ok(TreePresentation {
        roots: vec![node_of_interval(beta)],
    })
}

fn coeff_to_usize(c: &BigUint) -> usize {
    c.to_usize()
        .expect("interval coefficient too large for a finite presentation")
}

fn node_of_interval(beta: &Ordinal) -> PresentationNode {
    if beta.is_zero() {
        return PresentationNode::leaf();
    }
    if beta.is_successor() {
        // beta = gamma + n with gamma limit or zero
        let (last_e, last_c) = last_term(beta);
        debug_assert!(last_e.is_zero());
        let n = coeff_to_usize(&last_c);
        let gamma = drop_last_term(beta);
        let mut groups = Vec::new();
        let leaves = if gamma.is_zero() {
            n
        } else {
            groups.push(ChildGroup {
                template: node_of_interval(&gamma),
                multiplicity: Multiplicity::Finite(1),
            });
            n - 1
        };
        if leaves > 0 {
            groups.push(ChildGroup {
                template: PresentationNode::leaf(),
                multiplicity: Multiplicity::Finite(leaves),
            });
        }
        PresentationNode { groups }
    } else {
        // beta limit: beta = delta + w^e with delta = beta minus one w^e
        let (last_e, last_c) = last_term(beta);
        let last_e_nat = last_e
            .as_nat()
            .and_then(|n| n.to_u64())
            .expect("checked below w^w");
        debug_assert!(last_e_nat >= 1);
        let delta = {
            let decremented = &last_c - BigUint::from(1u32);
            let mut d = drop_last_term(beta);
            if !decremented.is_zero() {
                d = d.add(
                    &Ordinal::omega_pow(&last_e)
                        .times_nat(coeff_to_usize(&decremented)),
                );
            }
            d
        };
        let template = if last_e_nat == 1 {
            PresentationNode::leaf()
        } else {
            node_of_interval(&Ordinal::omega_pow(&Ordinal::from_nat(last_e_nat - 1)))
        };
        let mut groups = Vec::new();
        if !delta.is_zero() {
            groups.push(ChildGroup {
                template: node_of_interval(&delta),
                multiplicity: Multiplicity::Finite(1),
            });
        }
        groups.push(ChildGroup {
            template,
            multiplicity: Multiplicity::Omega,
        });
        PresentationNode { groups }
    }
}

fn last_term(o: &Ordinal) -> (Ordinal, BigUint) {
    let (e, c) = o.terms().last().expect("nonzero by construction");
    (e.clone(), c.clone())
}

fn drop_last_term(o: &Ordinal) -> Ordinal {
    let terms: Vec<_> = o.terms().collect();
    Ordinal::from_terms(terms[..terms.len().saturating_sub(1)].iter().copied())
}

/// Cantor-Bendixson rank and the size of the final non-empty derivative,
/// read off the interval type: for infinite `[0, w^g*n + lower]` the rank is
/// `g + 1` and the final derivative has `n` points. A finite space is its
/// own final derivative, so `[0, n]` has rank 1 and count `n + 1`.
pub fn cb_rank(p: &TreePresentation) -> (Ordinal, BigUint) {
    let beta = interval_type(p);
    if let Some(n) = beta.as_nat() {
        return (Ordinal::one(), n + BigUint::from(1u32));
    }
    let (e, c) = beta.leading().expect("infinite ordinals are non-zero");
    (e.succ(), c.clone())
}

/// One Cantor-Bendixson derivation step: removes the relatively isolated
/// branches of a closed marking. Realized as the epsilon-derivative for the
/// discrete (weight-1) metric at epsilon 1: a branch is isolated exactly
/// when no countable group below it has marked content.
pub fn cb_derive(p: &TreePresentation, f: &TemplateMarking) -> TemplateMarking {
    let one = WeightAssignment::weight_one(p);
    derive_once(p, &one, f, &rat_int(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{t1, t2};
    use crate::presentation::{cantor_tree, TplPath};

    fn ord(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    /// Brute-force ordinal index on a finite truncation: repeatedly delete
    /// the maximal addresses and count the steps. Truncation preserves the
    /// height, so the result matches the symbolic index for any bound.
    fn brute_ordinal_index(p: &TreePresentation, bound: usize) -> u64 {
        let mut alive: Vec<PointAddress> = p.enumerate_points(bound);
        let mut steps = 0;
        while !alive.is_empty() {
            let maximal: Vec<bool> = alive
                .iter()
                .map(|a| !alive.iter().any(|b| b != a && b.extends(a)))
                .collect();
            alive = alive
                .into_iter()
                .zip(maximal)
                .filter(|(_, m)| !m)
                .map(|(a, _)| a)
                .collect();
            steps += 1;
        }
        steps
    }

    #[test]
    fn ordinal_index_examples() {
        assert_eq!(ordinal_index(&TreePresentation::single_leaf()), ord("1"));
        assert_eq!(ordinal_index(&t1()), ord("2"));
        assert_eq!(ordinal_index(&t2()), ord("3"));
        assert_eq!(brute_ordinal_index(&t1(), 2), 2);
        assert_eq!(brute_ordinal_index(&t2(), 2), 3);
    }

    #[test]
    fn interval_type_examples() {
        assert_eq!(interval_type(&TreePresentation::single_leaf()), ord("0"));
        assert_eq!(interval_type(&t1()), ord("w"));
        assert_eq!(interval_type(&t2()), ord("w^(2)"));
    }

    #[test]
    fn point_to_ordinal_on_t1() {
        let p = t1();
        let root = PointAddress::root_branch(0);
        assert_eq!(point_to_ordinal(&p, &root), ord("w"));
        for n in 0..6u64 {
            assert_eq!(
                point_to_ordinal(&p, &root.child(0, n as usize)),
                Ordinal::from_nat(n)
            );
        }
    }

    #[test]
    fn point_to_ordinal_is_order_isomorphic_on_samples() {
        for p in [t1(), t2(), cantor_tree(3)] {
            let pts = p.enumerate_points(3);
            let imgs: Vec<Ordinal> = pts.iter().map(|b| point_to_ordinal(&p, b)).collect();
            for i in 0..pts.len() {
                for j in 0..pts.len() {
                    assert_eq!(
                        imgs[i].cmp(&imgs[j]),
                        canonical_point_cmp(&p, &pts[i], &pts[j]),
                        "{} vs {}",
                        pts[i],
                        pts[j]
                    );
                }
            }
        }
    }

    #[test]
    fn cones_map_to_intervals() {
        let p = t2();
        let beta = interval_type(&p);
        let pts = p.enumerate_points(3);
        let mid = PointAddress::root_branch(0).child(0, 1);
        let top = point_to_ordinal(&p, &mid);
        for b in &pts {
            let img = point_to_ordinal(&p, b);
            assert!(img <= beta);
            if b.extends(&mid) {
                assert!(img <= top);
            }
        }
    }

    #[test]
    fn tree_of_interval_roundtrips() {
        for text in ["0", "w", "w*2+3", "w^(2)", "w^(3)*2+w*4+17", "5", "w^(2)+1"] {
            let beta = ord(text);
            let p = tree_of_interval(&beta).unwrap();
            assert!(p.validate().is_empty());
            assert_eq!(interval_type(&p), beta, "roundtrip failed for {text}");
        }
        assert!(tree_of_interval(&ord("w^(w)")).is_err());
    }

    #[test]
    fn cb_rank_examples() {
        let leaf = TreePresentation::single_leaf();
        assert_eq!(cb_rank(&leaf), (ord("1"), 1u32.into()));
        assert_eq!(cb_rank(&t1()), (ord("2"), 1u32.into()));

        let forest = TreePresentation {
            roots: vec![
                t1().roots[0].clone(),
                t1().roots[0].clone(),
                t1().roots[0].clone(),
            ],
        };
        assert_eq!(cb_rank(&forest), (ord("2"), 3u32.into()));
    }

    #[test]
    fn cb_derive_examples() {
        let p = t1();
        let full = TemplateMarking::full(&p);
        let d1 = cb_derive(&p, &full);
        assert!(d1.is_marked(&TplPath::root_path(0)));
        assert!(!d1.is_marked(&TplPath::root_path(0).child(0)));
        let d2 = cb_derive(&p, &d1);
        assert!(d2.is_empty());
        let d3 = cb_derive(&p, &d2);
        assert!(d3.is_empty());
    }

    #[test]
    fn cb_derivation_matches_rank_and_count() {
        use crate::fragmentation::PointCount;
        for p in [
            TreePresentation::single_leaf(),
            t1(),
            t2(),
            cantor_tree(3),
            tree_of_interval(&ord("w^(2)*3+w*5+7")).unwrap(),
        ] {
            let (rank, count) = cb_rank(&p);
            let mut seq = vec![TemplateMarking::full(&p)];
            while !seq.last().unwrap().is_empty() {
                let next = cb_derive(&p, seq.last().unwrap());
                seq.push(next);
            }
            let steps = Ordinal::from_nat(seq.len() as u64 - 1);
            assert_eq!(steps, rank);
            let penultimate = &seq[seq.len() - 2];
            assert_eq!(penultimate.count_points(&p), PointCount::Finite(count));
        }
    }
}
