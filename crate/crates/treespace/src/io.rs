//! JSON spec files and machine-readable reports.
//!
//! Tree files carry the presentation and its weights in one document:
//! `{"roots":[NODE]}` with
//! `NODE = {"weight":"p/q"?, "groups":[{"template":NODE, "multiplicity": int|"omega"}]}`.
//! A missing weight defaults to 1, the discrete assignment. Function files
//! mirror the tree shape: `FNODE = {"value":"p/q", "groups":[GROUP...]}`
//! with `GROUP = {"explicit":[FNODE,...]} | null`; a bare `FNODE` addresses
//! a single-root tree and `{"roots":[FNODE,...]}` a forest. All rationals
//! travel as `p/q` strings, so no floating point crosses the boundary.

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::metric::WeightAssignment;
use crate::ordinal::Ordinal;
use crate::presentation::{
    ChildGroup, Multiplicity, PresentationNode, TplMap, TplMapNode, TreePresentation,
};
use crate::rat::{format_rat, parse_rat};
use crate::simple_fn::{SimpleFunction, ValueGroup, ValueNode};
use crate::zippin::Check;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TreeFile {
    pub roots: Vec<NodeSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NodeSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub groups: Vec<GroupSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupSpec {
    pub template: NodeSpec,
    pub multiplicity: MultSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MultSpec {
    Finite(usize),
    Word(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FunctionFile {
    Forest { roots: Vec<FNodeSpec> },
    Single(FNodeSpec),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FNodeSpec {
    pub value: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub groups: Vec<Option<FGroupSpec>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FGroupSpec {
    #[serde(default)]
    pub explicit: Vec<FNodeSpec>,
}

fn node_from_spec(spec: &NodeSpec) -> Result<PresentationNode, Error> {
    let mut groups = Vec::new();
    for g in &spec.groups {
        let multiplicity = match &g.multiplicity {
            MultSpec::Finite(m) => Multiplicity::Finite(*m),
            MultSpec::Word(w) if w == "omega" => Multiplicity::Omega,
            MultSpec::Word(w) => {
                return Err(Error::Parse {
                    what: format!(
                        "multiplicity must be a positive integer or \"omega\", got {w:?}"
                    ),
                })
            }
        };
        groups.push(ChildGroup {
            template: node_from_spec(&g.template)?,
            multiplicity,
        });
    }
    Ok(PresentationNode { groups })
}

fn weights_from_spec(spec: &NodeSpec) -> Result<TplMapNode<BigRational>, Error> {
    let value = match &spec.weight {
        Some(text) => parse_rat(text)?,
        None => BigRational::one(),
    };
    let groups = spec
        .groups
        .iter()
        .map(|g| weights_from_spec(&g.template))
        .collect::<Result<_, _>>()?;
    Ok(TplMapNode { value, groups })
}

/// Parses a tree file into a presentation and its weight assignment,
/// validating both.
pub fn tree_from_json(text: &str) -> Result<(TreePresentation, WeightAssignment), Error> {
    let spec: TreeFile = serde_json::from_str(text)?;
    let p = TreePresentation {
        roots: spec
            .roots
            .iter()
            .map(node_from_spec)
            .collect::<Result<_, _>>()?,
    };
    let diags = p.validate();
    if let Some(d) = diags.first() {
        return Err(Error::Validation {
            what: format!("{}: {}", d.path, d.message),
        });
    }
    let w = WeightAssignment::from_map(TplMap {
        roots: spec
            .roots
            .iter()
            .map(weights_from_spec)
            .collect::<Result<_, _>>()?,
    });
    w.validate(&p)?;
    Ok((p, w))
}

fn node_to_spec(n: &PresentationNode, w: &TplMapNode<BigRational>) -> NodeSpec {
    NodeSpec {
        weight: Some(format_rat(&w.value)),
        groups: n
            .groups
            .iter()
            .zip(&w.groups)
            .map(|(g, wg)| GroupSpec {
                template: node_to_spec(&g.template, wg),
                multiplicity: match g.multiplicity {
                    Multiplicity::Finite(m) => MultSpec::Finite(m),
                    Multiplicity::Omega => MultSpec::Word("omega".into()),
                },
            })
            .collect(),
    }
}

pub fn tree_to_json(p: &TreePresentation, w: &WeightAssignment) -> String {
    let file = TreeFile {
        roots: p
            .roots
            .iter()
            .zip(&w.weights.roots)
            .map(|(n, wn)| node_to_spec(n, wn))
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("tree files serialize")
}

fn fnode_from_spec(spec: &FNodeSpec, n: &PresentationNode) -> Result<ValueNode, Error> {
    if spec.groups.len() > n.groups.len() {
        return Err(Error::Validation {
            what: format!(
                "function node lists {} groups, tree node has {}",
                spec.groups.len(),
                n.groups.len()
            ),
        });
    }
    let mut groups = Vec::new();
    for (g, ng) in n.groups.iter().enumerate() {
        let explicit = match spec.groups.get(g) {
            Some(Some(fg)) => fg
                .explicit
                .iter()
                .map(|sub| fnode_from_spec(sub, &ng.template))
                .collect::<Result<_, _>>()?,
            _ => Vec::new(),
        };
        groups.push(ValueGroup { explicit });
    }
    Ok(ValueNode {
        value: parse_rat(&spec.value)?,
        groups,
    })
}

/// Parses a function file against the presentation it mirrors.
pub fn function_from_json(text: &str, p: &TreePresentation) -> Result<SimpleFunction, Error> {
    let spec: FunctionFile = serde_json::from_str(text)?;
    let roots = match &spec {
        FunctionFile::Forest { roots } => roots.clone(),
        FunctionFile::Single(node) => vec![node.clone()],
    };
    if roots.len() != p.roots.len() {
        return Err(Error::Validation {
            what: format!(
                "function file has {} roots, tree has {}",
                roots.len(),
                p.roots.len()
            ),
        });
    }
    let f = SimpleFunction {
        roots: roots
            .iter()
            .zip(&p.roots)
            .map(|(spec, n)| fnode_from_spec(spec, n))
            .collect::<Result<_, _>>()?,
    };
    f.validate(p)?;
    Ok(f)
}

fn fnode_to_spec(v: &ValueNode) -> FNodeSpec {
    FNodeSpec {
        value: format_rat(&v.value),
        groups: v
            .groups
            .iter()
            .map(|g| {
                if g.explicit.is_empty() {
                    None
                } else {
                    Some(FGroupSpec {
                        explicit: g.explicit.iter().map(fnode_to_spec).collect(),
                    })
                }
            })
            .collect(),
    }
}

pub fn function_to_json(f: &SimpleFunction) -> String {
    let file = if f.roots.len() == 1 {
        FunctionFile::Single(fnode_to_spec(&f.roots[0]))
    } else {
        FunctionFile::Forest {
            roots: f.roots.iter().map(fnode_to_spec).collect(),
        }
    };
    serde_json::to_string_pretty(&file).expect("function files serialize")
}

/// The report wrapper every command emits in JSON mode.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: serde_json::Value,
    pub results: serde_json::Value,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn any_check_failed(&self) -> bool {
        self.checks.iter().any(|c| !c.pass)
    }
}

pub fn ordinal_json(o: &Ordinal) -> serde_json::Value {
    serde_json::Value::String(o.to_string())
}

pub fn rational_json(r: &BigRational) -> serde_json::Value {
    serde_json::Value::String(format_rat(r))
}
