//! Brute-force reference computations over finite enumerations.
//!
//! Everything here recomputes quantities from first principles on an
//! enumerated truncation of the branch space: diameters by scanning pairs,
//! derivation membership by trying basic neighbourhoods. The code shares no
//! path with the symbolic implementations it cross-checks, and backs both
//! the test suites and the `check` command.

use num_rational::BigRational;
use num_traits::Zero;

use crate::clopen::ClopenDescriptor;
use crate::fragmentation::TemplateMarking;
use crate::metric::WeightAssignment;
use crate::presentation::{Multiplicity, PointAddress, TreePresentation};

/// Pairwise diameter of a finite point set.
pub fn pairwise_diam(w: &WeightAssignment, pts: &[&PointAddress]) -> BigRational {
    let mut best = BigRational::zero();
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            let d = w.distance(pts[i], pts[j]);
            if d > best {
                best = d;
            }
        }
    }
    best
}

/// Diameter of the descriptor-marking intersection over an enumeration.
pub fn enum_clopen_diam(
    p: &TreePresentation,
    w: &WeightAssignment,
    c: &ClopenDescriptor,
    f: &TemplateMarking,
    copy_bound: usize,
) -> BigRational {
    let pts = p.enumerate_points(copy_bound);
    let members: Vec<&PointAddress> = pts
        .iter()
        .filter(|b| c.member(b) && f.contains(b))
        .collect();
    pairwise_diam(w, &members)
}

/// All exclusion profiles for the children of `t`: every subset of the
/// copies of each finite group, combined with every prefix length up to
/// `max_omega_prefix` for each countable group.
fn exclusion_profiles(
    p: &TreePresentation,
    t: &PointAddress,
    max_omega_prefix: usize,
) -> Vec<Vec<(usize, usize)>> {
    let node = p.resolve(t).expect("point resolves");
    let mut profiles: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
    for (g, grp) in node.groups.iter().enumerate() {
        match grp.multiplicity {
            Multiplicity::Finite(m) => {
                let mut next = Vec::new();
                for subset in 0u32..(1 << m) {
                    for base in &profiles {
                        let mut prof = base.clone();
                        for c in 0..m {
                            if subset & (1 << c) != 0 {
                                prof.push((g, c));
                            }
                        }
                        next.push(prof);
                    }
                }
                profiles = next;
            }
            Multiplicity::Omega => {
                let mut next = Vec::new();
                for prefix in 0..=max_omega_prefix {
                    for base in &profiles {
                        let mut prof = base.clone();
                        for c in 0..prefix {
                            prof.push((g, c));
                        }
                        next.push(prof);
                    }
                }
                profiles = next;
            }
        }
    }
    profiles
}

/// Whether the branch `b` survives one derivation step of `f`, decided by
/// brute force: `b` is removed exactly when some basic neighbourhood meets
/// `f` in a set of diameter below `epsilon`. Neighbourhood exclusions range
/// over all subsets of finite-group copies and over prefixes of countable
/// groups short enough to leave two enumerated tail copies.
pub fn brute_derive_keeps(
    p: &TreePresentation,
    w: &WeightAssignment,
    f: &TemplateMarking,
    epsilon: &BigRational,
    b: &PointAddress,
    copy_bound: usize,
) -> bool {
    debug_assert!(f.contains(b));
    let pts = p.enumerate_points(copy_bound);
    let members: Vec<&PointAddress> = pts
        .iter()
        .filter(|x| x.extends(b) && f.contains(x))
        .collect();
    let max_prefix = copy_bound.saturating_sub(2);
    for profile in exclusion_profiles(p, b, max_prefix) {
        let desc = ClopenDescriptor::with_exclusions(b.clone(), profile);
        let kept: Vec<&PointAddress> = members
            .iter()
            .copied()
            .filter(|x| desc.member(x))
            .collect();
        if pairwise_diam(w, &kept) < *epsilon {
            return false;
        }
    }
    true
}

/// One derivation step over an enumeration: for every enumerated branch of
/// `f`, the brute-force survival verdict.
pub fn brute_derive_verdicts(
    p: &TreePresentation,
    w: &WeightAssignment,
    f: &TemplateMarking,
    epsilon: &BigRational,
    copy_bound: usize,
) -> Vec<(PointAddress, bool)> {
    p.enumerate_points(copy_bound)
        .into_iter()
        .filter(|b| f.contains(b))
        .map(|b| {
            let keeps = brute_derive_keeps(p, w, f, epsilon, &b, copy_bound);
            (b, keeps)
        })
        .collect()
}
