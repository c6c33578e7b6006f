//! Deterministic corpus generation: seeded random presentations, weights,
//! markings, functions, and ordinals. Identical seeds produce identical
//! values on every platform.

use num_rational::BigRational;
use num_traits::One;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::fragmentation::TemplateMarking;
use crate::metric::WeightAssignment;
use crate::ordinal::Ordinal;
use crate::presentation::{
    ChildGroup, Multiplicity, PresentationNode, TplMap, TreePresentation,
};
use crate::rat::{rat, rat_int};
use crate::simple_fn::{Lipschitz, SimpleFunction, ValueGroup, ValueNode};

/// Generator bounds. The defaults keep desk-scale runtimes while still
/// exercising derivation lengths up to about five.
#[derive(Clone, Debug)]
pub struct GenConfig {
    pub max_depth: usize,
    pub max_groups: usize,
    pub max_finite_multiplicity: usize,
    pub max_explicit_overrides: usize,
    pub max_roots: usize,
    /// Chance (out of 100) that a weight is zero.
    pub zero_weight_percent: u32,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_depth: 4,
            max_groups: 3,
            max_finite_multiplicity: 3,
            max_explicit_overrides: 2,
            max_roots: 2,
            zero_weight_percent: 0,
        }
    }
}

fn gen_node(rng: &mut ChaCha8Rng, depth_left: usize, at_root: bool, cfg: &GenConfig) -> PresentationNode {
    if depth_left == 0 {
        return PresentationNode::leaf();
    }
    // leaf-biased: deeper nodes carry fewer groups
    let attempts = if at_root {
        rng.gen_range(1..=cfg.max_groups)
    } else {
        rng.gen_range(0..=cfg.max_groups)
    };
    let keep_percent = if at_root { 85 } else { 70 };
    let mut groups = Vec::new();
    for _ in 0..attempts {
        if rng.gen_range(0..100) >= keep_percent {
            continue;
        }
        let multiplicity = match rng.gen_range(0..100) {
            0..=39 => Multiplicity::Omega,
            40..=69 => Multiplicity::Finite(1),
            _ => Multiplicity::Finite(rng.gen_range(2..=cfg.max_finite_multiplicity)),
        };
        groups.push(ChildGroup {
            template: gen_node(rng, depth_left - 1, false, cfg),
            multiplicity,
        });
    }
    PresentationNode { groups }
}

pub fn gen_presentation(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> TreePresentation {
    let roots = rng.gen_range(1..=cfg.max_roots);
    let p = TreePresentation {
        roots: (0..roots)
            .map(|_| gen_node(rng, cfg.max_depth, true, cfg))
            .collect(),
    };
    debug_assert!(p.validate().is_empty());
    p
}

/// Weights from a small dyadic palette scaled down with depth, with an
/// optional chance of exact zeros.
pub fn gen_weights(
    rng: &mut ChaCha8Rng,
    p: &TreePresentation,
    cfg: &GenConfig,
) -> WeightAssignment {
    let palette = [rat_int(1), rat(1, 2), rat(1, 4), rat(3, 4), rat_int(2)];
    let map = TplMap::build(p, |path, _| {
        if rng.gen_range(0..100) < cfg.zero_weight_percent {
            return rat_int(0);
        }
        let base = palette[rng.gen_range(0..palette.len())].clone();
        let scale = rat(1, 1 << path.groups.len().min(6) as i64);
        base * scale
    });
    WeightAssignment::from_map(map)
}

/// A random closed marking: random marks, then closure upward through
/// countable groups.
pub fn gen_marking(rng: &mut ChaCha8Rng, p: &TreePresentation) -> TemplateMarking {
    let mut m = TemplateMarking {
        marks: TplMap::build(p, |_, _| rng.gen_range(0..100) < 60),
    };
    fn close(
        mk: &mut crate::presentation::TplMapNode<bool>,
        n: &PresentationNode,
    ) -> bool {
        let mut any = mk.value;
        for (g, grp) in n.groups.iter().enumerate() {
            let sub_any = close(&mut mk.groups[g], &grp.template);
            if sub_any && grp.multiplicity.is_omega() {
                mk.value = true;
            }
            any |= sub_any;
        }
        any || mk.value
    }
    for (mk, n) in m.marks.roots.iter_mut().zip(&p.roots) {
        close(mk, n);
    }
    debug_assert!(m.validate_closed(p).is_ok());
    m
}

fn gen_value(rng: &mut ChaCha8Rng) -> BigRational {
    rat(rng.gen_range(-4..=4), [1, 2, 4][rng.gen_range(0..3)])
}

fn gen_value_node(
    rng: &mut ChaCha8Rng,
    n: &PresentationNode,
    cfg: &GenConfig,
    depth: usize,
) -> ValueNode {
    let value = gen_value(rng);
    let groups = n
        .groups
        .iter()
        .map(|grp| {
            let cap = match grp.multiplicity {
                Multiplicity::Finite(m) => m.min(cfg.max_explicit_overrides),
                Multiplicity::Omega => cfg.max_explicit_overrides,
            };
            let count = if depth > 2 || rng.gen_range(0..100) < 40 {
                0
            } else {
                rng.gen_range(0..=cap)
            };
            ValueGroup {
                explicit: (0..count)
                    .map(|_| gen_value_node(rng, &grp.template, cfg, depth + 1))
                    .collect(),
            }
        })
        .collect();
    ValueNode { value, groups }
}

pub fn gen_function(
    rng: &mut ChaCha8Rng,
    p: &TreePresentation,
    cfg: &GenConfig,
) -> SimpleFunction {
    let f = SimpleFunction {
        roots: p
            .roots
            .iter()
            .map(|r| gen_value_node(rng, r, cfg, 0))
            .collect(),
    };
    debug_assert!(f.validate(p).is_ok());
    f
}

/// Rescales a generated function so its Lipschitz constant is at most one;
/// `None` when the function distinguishes branches at pseudo-distance zero.
pub fn make_lipschitz_one(
    p: &TreePresentation,
    w: &WeightAssignment,
    f: &SimpleFunction,
) -> Option<SimpleFunction> {
    match f.lipschitz_bound(p, w) {
        Lipschitz::Infinite => None,
        Lipschitz::Finite(l) => {
            if l <= rat_int(1) {
                Some(f.clone())
            } else {
                Some(f.scale(&(rat_int(1) / l)))
            }
        }
    }
}

/// A random ordinal with up to `max_terms` terms and exponents nested up to
/// `exp_depth` levels.
pub fn gen_ordinal(rng: &mut ChaCha8Rng, max_terms: usize, exp_depth: usize) -> Ordinal {
    let terms = rng.gen_range(0..=max_terms);
    let mut acc = Ordinal::zero();
    for _ in 0..terms {
        let exponent = if exp_depth == 0 {
            Ordinal::from_nat(rng.gen_range(0..5u64))
        } else {
            gen_ordinal(rng, 2, exp_depth - 1)
        };
        let coeff: u64 = match rng.gen_range(0..100) {
            0..=79 => rng.gen_range(1..6),
            80..=94 => rng.gen_range(6..50),
            _ => rng.gen_range(1000..100000),
        };
        acc = acc.add(&Ordinal::omega_pow(&exponent).times_nat(coeff as usize));
    }
    acc
}

/// A random ordinal below `w^w`: all exponents are naturals.
pub fn gen_ordinal_below_omega_omega(rng: &mut ChaCha8Rng, max_terms: usize) -> Ordinal {
    let terms = rng.gen_range(0..=max_terms);
    let mut exps: Vec<u64> = (0..terms).map(|_| rng.gen_range(0..6u64)).collect();
    exps.sort_unstable_by(|a, b| b.cmp(a));
    exps.dedup();
    let mut acc = Ordinal::zero();
    for e in exps {
        let coeff: usize = rng.gen_range(1..7);
        acc = acc.add(&Ordinal::omega_pow(&Ordinal::from_nat(e)).times_nat(coeff));
    }
    acc
}

/// One countable group of leaves under a single root.
pub fn t1() -> TreePresentation {
    crate::presentation::cantor_tree(1)
}

/// A root with countably many copies of `t1`.
pub fn t2() -> TreePresentation {
    crate::presentation::cantor_tree(2)
}

/// The decaying weights used in the worked traces: 1 at the root and middle
/// level, 1/4 at the leaves.
pub fn t2_decaying_weights(p: &TreePresentation) -> WeightAssignment {
    WeightAssignment::from_map(TplMap::build(p, |path, _| {
        if path.groups.len() == 2 {
            rat(1, 4)
        } else {
            BigRational::one()
        }
    }))
}
