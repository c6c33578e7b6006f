//! Exact symbolic computation on finitely presented compact tree spaces.
//!
//! The crate models regular omega-trees given by finite presentation terms,
//! the compact topology on their branch spaces, weighted ultrametric
//! pseudo-metrics, and locally constant functions. On top of that substrate
//! it computes ordinal and Cantor-Bendixson indices, fragmentation indices
//! of closed subsets, the homeomorphism between tree spaces and ordinal
//! intervals in both directions, well-founded trees of basic clopen sets
//! with their quotient maps, and epsilon-approximation of Lipschitz
//! functions by functions factoring through such a quotient.
//!
//! All numerics are exact: rationals throughout the metric layer, and
//! arbitrary-precision Cantor normal forms in the ordinal layer. Every value
//! is immutable after construction and every operation is pure, so values
//! can be shared freely across threads.
//!
//! The `examples/` directory contains one runnable example per capability;
//! the `treespace` binary exposes the same operations on spec files.

pub mod approx;
pub mod check;
pub mod clopen;
pub mod dot;
pub mod error;
pub mod fragmentation;
pub mod gen;
pub mod indices;
pub mod io;
pub mod metric;
pub mod oracle;
pub mod ordinal;
pub mod presentation;
pub mod rat;
pub mod simple_fn;
pub mod zippin;

pub use clopen::{ClopenDescriptor, ClopenKind};
pub use error::{Error, Result};
pub use fragmentation::{
    clopen_diam, derivation_sequence, derive_once, frag_index, frag_index_sup, FragIndex,
    PointCount, TemplateMarking,
};
pub use indices::{cb_derive, cb_rank, interval_type, ordinal_index, point_to_ordinal, tree_of_interval};
pub use metric::WeightAssignment;
pub use ordinal::{Ordinal, ParseOrdinalError};
pub use presentation::{
    cantor_tree, ChildGroup, Multiplicity, PointAddress, PresentationNode, TplMap, TplPath,
    TreePresentation,
};
pub use simple_fn::{Lipschitz, SimpleFunction, ValueGroup, ValueNode};
pub use zippin::{
    build_construction_tree, quotient_map, verify_construction, verify_quotient, Check,
    ConstructionTree, PipelineReport,
};
