//! Deterministic DOT rendering of presentations and construction trees.
//!
//! Countable groups are rendered as a single template node with the edge
//! annotated by the multiplicity. Node identifiers are template paths, so
//! identical inputs always produce byte-identical output.

use std::fmt::Write;

use crate::clopen::ClopenKind;
use crate::presentation::{Multiplicity, PresentationNode, TreePresentation};
use crate::zippin::{ConstructionTree, CopySel, NGroup, NNode};

fn mult_label(m: Multiplicity) -> String {
    match m {
        Multiplicity::Finite(1) => String::new(),
        Multiplicity::Finite(m) => format!("x{m}"),
        Multiplicity::Omega => "x\u{03c9}".into(),
    }
}

/// Renders a presentation as a digraph of template nodes.
pub fn presentation_dot(p: &TreePresentation) -> String {
    let mut out = String::from("digraph tree {\n  node [shape=circle];\n");
    fn walk(n: &PresentationNode, id: &str, out: &mut String) {
        let _ = writeln!(out, "  \"{id}\" [label=\"{id}\"];");
        for (g, grp) in n.groups.iter().enumerate() {
            let child = format!("{id}/{g}");
            let label = mult_label(grp.multiplicity);
            if label.is_empty() {
                let _ = writeln!(out, "  \"{id}\" -> \"{child}\";");
            } else {
                let _ = writeln!(out, "  \"{id}\" -> \"{child}\" [label=\"{label}\"];");
            }
            walk(&grp.template, &child, out);
        }
    }
    for (r, root) in p.roots.iter().enumerate() {
        walk(root, &r.to_string(), &mut out);
    }
    out.push_str("}\n");
    out
}

fn nnode_label(n: &NNode) -> String {
    let kind = match n.kind() {
        ClopenKind::TypeI => "I",
        ClopenKind::TypeII => "II",
    };
    let mut label = format!("t={} {kind} a={}", n.desc_path, n.alpha);
    if !n.excluded.is_empty() {
        let parts: Vec<String> = n
            .excluded
            .iter()
            .map(|(g, c)| format!("{g}.{c}"))
            .collect();
        label.push_str(&format!(" F={{{}}}", parts.join(",")));
    }
    label
}

fn ngroup_label(ct: &ConstructionTree, parent_path: &crate::presentation::TplPath, g: &NGroup) -> String {
    let mut path = parent_path.clone();
    let mut omega = false;
    let mut finite = 1usize;
    for step in &g.steps {
        let node = ct.source.node_at(&path).unwrap();
        match node.groups[step.group].multiplicity {
            Multiplicity::Omega => match &step.copies {
                CopySel::Only(_) => {}
                _ => omega = true,
            },
            Multiplicity::Finite(m) => {
                let admitted = step.copies.copies(Multiplicity::Finite(m), 0).len();
                finite *= admitted;
            }
        }
        path = path.child(step.group);
    }
    if omega {
        "x\u{03c9}".into()
    } else {
        mult_label(Multiplicity::Finite(finite))
    }
}

/// Renders a construction tree: nodes carry descriptor paths, their kind,
/// and their level labels.
pub fn construction_dot(ct: &ConstructionTree) -> String {
    let mut out = String::from("digraph construction {\n  node [shape=box];\n");
    fn walk(ct: &ConstructionTree, n: &NNode, id: &str, out: &mut String) {
        let _ = writeln!(out, "  \"{id}\" [label=\"{}\"];", nnode_label(n));
        for (g, grp) in n.groups.iter().enumerate() {
            let child = format!("{id}/{g}");
            let label = ngroup_label(ct, &n.desc_path, grp);
            if label.is_empty() {
                let _ = writeln!(out, "  \"{id}\" -> \"{child}\";");
            } else {
                let _ = writeln!(out, "  \"{id}\" -> \"{child}\" [label=\"{label}\"];");
            }
            walk(ct, &grp.template, &child, out);
        }
    }
    for (r, root) in ct.roots.iter().enumerate() {
        walk(ct, &root.entry.template, &format!("n{r}"), &mut out);
    }
    out.push_str("}\n");
    out
}
