//! Flip graphs of degree-bounded triangulations of convex polygons.
//!
//! The crate has four layers:
//!
//! * [`triangulation`] — the combinatorial core: diagonals, flips, degrees,
//!   generators for zigzag and fan triangulations, dual trees and canonical
//!   codes.
//! * [`structure`] — classification of triangles and dual-tree substructures:
//!   ears, fans, zigzag paths, fringe triangulations and merge triangles.
//! * [`canon`] — the constructive pipeline that flips any triangulation with
//!   maximum degree at most `k` (for `k > 6`) into the left-most zigzag
//!   triangulation without ever exceeding degree `k`, plus flip paths between
//!   arbitrary pairs.
//! * [`explore`] — exhaustive enumeration of all triangulations at small `n`,
//!   degree-bounded flip graphs, connected components, frozen triangulations
//!   and exact flip distances. This is the ground truth the pipeline is
//!   checked against.

pub mod canon;
pub mod docs;
pub mod error;
pub mod explore;
pub mod structure;
pub mod triangulation;

pub use canon::{
    canonicalize, canonicalize_traced, flip_path, invert_zigzag, invert_zigzag_at, merge_zigzags,
    rotate, to_fringe, to_zigzag, verify_sequence, CanonicalizeTrace, FlipSequence, MergeRound,
    VerifyReport,
};
pub use error::{Error, Result};
pub use explore::{
    build_flip_graph, catalan, components, enumerate, enumerate_count, exact_distance, frozen,
    Budget, ComponentReport, FlipGraph,
};
pub use structure::{
    classify_triangles, decompose, find_fans, find_light_merge_triangle, find_merge_triangles,
    is_fringe, is_zigzag_triangulation, rotation_angle, zigzag_dual_path, DualDecomposition, Fan,
    FringeViolation, LightMerge, MergeTriangle, RotationAngle, TriangleClass, ZigzagPath,
};
pub use triangulation::{Diagonal, DualTree, Flip, Triangulation};
