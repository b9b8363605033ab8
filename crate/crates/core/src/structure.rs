//! Classification of triangles and dual-tree substructures: ears, path and
//! inner triangles, fans, zigzag paths, fringe triangulations and merge
//! triangles.

use crate::error::{Error, Result};
use crate::triangulation::{in_ccw_arc, Diagonal, DualTree, Triangulation};

/// Triangle classes by hull-edge count: ears have two hull edges, path
/// triangles one, inner triangles none. The single triangle of a 3-gon has
/// three hull edges and is treated as an ear with the smallest vertex as tip.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TriangleClass {
    Ear { tip: usize },
    Path,
    Inner,
}

fn hull_adjacent(n: usize, a: usize, b: usize) -> bool {
    (a + 1) % n == b || (b + 1) % n == a
}

fn classify_one(n: usize, t: [usize; 3]) -> TriangleClass {
    let pairs = [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])];
    let hull: Vec<(usize, usize)> = pairs
        .into_iter()
        .filter(|&(a, b)| hull_adjacent(n, a, b))
        .collect();
    match hull.len() {
        0 => TriangleClass::Inner,
        1 => TriangleClass::Path,
        2 => {
            // The tip is the vertex shared by both hull edges.
            let (a1, b1) = hull[0];
            let (a2, b2) = hull[1];
            let tip = if a1 == a2 || a1 == b2 { a1 } else { b1 };
            TriangleClass::Ear { tip }
        }
        _ => TriangleClass::Ear { tip: t[0] }, // n = 3 only
    }
}

/// Classifies every triangle face, in the order of `Triangulation::triangles`.
pub fn classify_triangles(t: &Triangulation) -> Vec<([usize; 3], TriangleClass)> {
    t.triangles()
        .into_iter()
        .map(|tri| (tri, classify_one(t.n(), tri)))
        .collect()
}

/// A maximal fan: a dual path of at least two path triangles sharing the
/// handle, with hull edges consecutive on the hull. Size is the handle degree
/// minus two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    pub handle: usize,
    /// Indices into the dual tree's triangle list, in hull order.
    pub triangles: Vec<usize>,
    pub size: usize,
}

/// All maximal fans, ordered by ascending handle then hull position.
pub fn find_fans(t: &Triangulation) -> Vec<Fan> {
    let n = t.n();
    let dual = t.dual_tree();
    let mut index = std::collections::HashMap::new();
    for (i, tri) in dual.triangles.iter().enumerate() {
        index.insert(*tri, i);
    }
    let degrees = t.degrees();
    let mut fans = Vec::new();
    for v in 0..n {
        // Path triangles of the form (v, x, x+1); runs of consecutive x make
        // a fan around handle v.
        let mut run: Vec<usize> = Vec::new();
        let mut flush = |run: &mut Vec<usize>, fans: &mut Vec<Fan>| {
            if run.len() >= 2 {
                fans.push(Fan {
                    handle: v,
                    triangles: run.clone(),
                    size: degrees[v] - 2,
                });
            }
            run.clear();
        };
        for off in 1..n - 2 {
            let x = (v + off) % n;
            let x1 = (x + 1) % n;
            let mut tri = [v, x, x1];
            tri.sort_unstable();
            let is_fan_triangle = x != (v + 1) % n
                && x1 != (v + n - 1) % n
                && index.contains_key(&tri)
                && classify_one(n, tri) == TriangleClass::Path;
            if is_fan_triangle {
                run.push(index[&tri]);
            } else {
                flush(&mut run, &mut fans);
            }
        }
        flush(&mut run, &mut fans);
    }
    fans
}

/// A zigzag segment of the dual tree: hull edges of consecutive path
/// triangles alternate sides, so every second one is hull-adjacent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZigzagPath {
    /// Dual-tree triangle indices in path order.
    pub triangles: Vec<usize>,
    /// The diagonals closing the path at each end (`None` at an ear).
    pub ends: [Option<Diagonal>; 2],
}

/// Dual-tree data shared by the fringe test and merge search.
pub struct DualDecomposition {
    pub dual: DualTree,
    pub classes: Vec<TriangleClass>,
    /// Dual leaves, i.e. ears.
    pub leaves: Vec<usize>,
    /// Maximal degree-2 runs adjacent to at least one leaf.
    pub leaf_paths: Vec<Vec<usize>>,
    /// All other maximal degree-2 runs.
    pub inner_paths: Vec<Vec<usize>>,
    /// Nodes surviving removal of leaves and leaf paths.
    pub d_prime: Vec<usize>,
    /// Nodes surviving a further removal of the leaves of `d_prime`.
    pub d_double: Vec<usize>,
}

/// Computes the dual tree, triangle classes, path structure and the two
/// pruned trees used by the light-merge search.
pub fn decompose(t: &Triangulation) -> DualDecomposition {
    let dual = t.dual_tree();
    let n = t.n();
    let classes: Vec<TriangleClass> = dual
        .triangles
        .iter()
        .map(|&tri| classify_one(n, tri))
        .collect();
    let adj = dual.adjacency();
    let node_count = dual.triangles.len();
    let leaves: Vec<usize> = (0..node_count).filter(|&i| adj[i].len() <= 1).collect();

    // Maximal runs of dual degree-2 vertices.
    let mut seen = vec![false; node_count];
    let mut leaf_paths = Vec::new();
    let mut inner_paths = Vec::new();
    for start in 0..node_count {
        if seen[start] || adj[start].len() != 2 {
            continue;
        }
        // Collect the whole run containing `start`.
        let mut run = vec![start];
        seen[start] = true;
        for &first in &adj[start] {
            let mut prev = start;
            let mut cur = first;
            let mut grow = Vec::new();
            while adj[cur].len() == 2 && !seen[cur] {
                seen[cur] = true;
                grow.push(cur);
                let next = *adj[cur].iter().find(|&&x| x != prev).unwrap();
                prev = cur;
                cur = next;
            }
            if first == adj[start][0] {
                grow.reverse();
                grow.extend(run.iter().copied());
                run = grow;
            } else {
                run.extend(grow);
            }
        }
        let touches_leaf = run.iter().any(|&i| {
            adj[i]
                .iter()
                .any(|&j| adj[j as usize].len() <= 1)
        });
        if touches_leaf {
            leaf_paths.push(run);
        } else {
            inner_paths.push(run);
        }
    }
    leaf_paths.sort();
    inner_paths.sort();

    let mut removed = vec![false; node_count];
    for &l in &leaves {
        removed[l] = true;
    }
    for p in &leaf_paths {
        for &i in p {
            removed[i] = true;
        }
    }
    let d_prime: Vec<usize> = (0..node_count).filter(|&i| !removed[i]).collect();
    // Leaves of D': surviving nodes with at most one surviving neighbor.
    let mut d_prime_leaf = vec![false; node_count];
    for &i in &d_prime {
        let surviving = adj[i].iter().filter(|&&j| !removed[j]).count();
        if surviving <= 1 {
            d_prime_leaf[i] = true;
        }
    }
    let d_double: Vec<usize> = d_prime
        .iter()
        .copied()
        .filter(|&i| !d_prime_leaf[i])
        .collect();

    DualDecomposition {
        dual,
        classes,
        leaves,
        leaf_paths,
        inner_paths,
        d_prime,
        d_double,
    }
}

/// True iff the triangulation has precisely two ears connected by a zigzag.
/// Degenerate sizes n <= 4 are vacuously zigzag.
pub fn is_zigzag_triangulation(t: &Triangulation) -> bool {
    if t.n() <= 4 {
        return true;
    }
    let dual = t.dual_tree();
    let adj = dual.adjacency();
    if adj.iter().any(|a| a.len() > 2) {
        return false;
    }
    // The dual is a path; the zigzag condition is that consecutive path
    // triangles use hull edges on alternating sides, which is equivalent to
    // no vertex exceeding degree four.
    t.max_degree() <= 4
}

/// Why a triangulation fails to be fringe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FringeViolation {
    /// A fan of size greater than four (handle degree above six).
    OversizedFan(Fan),
    /// A fan none of whose dual neighbors is an inner triangle.
    FanNotAtInner(Fan),
    /// A leaf path of length at least three failing the zigzag alternation.
    NonZigzagLeafPath(Vec<usize>),
}

/// Checks the fringe conditions: no fan of size greater than four, every fan
/// adjacent to an inner triangle, every leaf path dual to a zigzag. Returns
/// the first violation found, or `None` when fringe.
pub fn is_fringe(t: &Triangulation) -> Option<FringeViolation> {
    let deco = decompose(t);
    let adj = deco.dual.adjacency();
    let fans = find_fans(t);
    for fan in &fans {
        if fan.size > 4 {
            return Some(FringeViolation::OversizedFan(fan.clone()));
        }
    }
    for fan in &fans {
        let run: std::collections::HashSet<usize> = fan.triangles.iter().copied().collect();
        let next_to_inner = fan.triangles.iter().any(|&i| {
            adj[i].iter().any(|&j| {
                !run.contains(&j) && deco.classes[j] == TriangleClass::Inner
            })
        });
        if !next_to_inner {
            return Some(FringeViolation::FanNotAtInner(fan.clone()));
        }
    }
    for path in &deco.leaf_paths {
        if !path_is_zigzag(t.n(), &deco.dual, path) {
            return Some(FringeViolation::NonZigzagLeafPath(path.clone()));
        }
    }
    None
}

/// Zigzag alternation test for a dual path given by triangle indices in path
/// order. Paths of length at most two are degenerate zigzags.
fn path_is_zigzag(n: usize, dual: &DualTree, path: &[usize]) -> bool {
    if path.len() < 3 {
        return true;
    }
    let hull_edge = |i: usize| -> Option<(usize, usize)> {
        let t = dual.triangles[i];
        [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])]
            .into_iter()
            .find(|&(a, b)| hull_adjacent(n, a, b))
    };
    // Hull edges of every second triangle must be adjacent on the hull, and
    // consecutive ones must not be.
    let edges: Vec<(usize, usize)> = match path.iter().map(|&i| hull_edge(i)).collect() {
        Some(e) => e,
        None => return false,
    };
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        if shares_vertex(a, b) {
            return false;
        }
    }
    for w in edges.windows(3) {
        if !shares_vertex(w[0], w[2]) {
            return false;
        }
    }
    true
}

fn shares_vertex(a: (usize, usize), b: (usize, usize)) -> bool {
    a.0 == b.0 || a.0 == b.1 || a.1 == b.0 || a.1 == b.1
}

/// A merge triangle: an inner triangle adjacent to two leaf paths (possibly
/// empty ones, when the triangle touches an ear directly). The tip is the
/// vertex shared by both zigzag-side edges; the base is the opposite edge.
#[derive(Clone, Debug)]
pub struct MergeTriangle {
    pub triangle: [usize; 3],
    pub tip: usize,
    pub base: Diagonal,
    /// The two adjacent zigzag zones, tip side first by convention of
    /// counterclockwise order from the base.
    pub zigzags: [ZigzagPath; 2],
}

/// Reports every (inner triangle, admissible tip) pair, ordered by ascending
/// tip within each triangle and by triangle order overall. An inner triangle
/// adjacent to three leaf paths yields three entries.
pub fn find_merge_triangles(t: &Triangulation) -> Vec<MergeTriangle> {
    let deco = decompose(t);
    let adj = deco.dual.adjacency();
    let n = t.n();
    let mut out = Vec::new();
    for (i, &class) in deco.classes.iter().enumerate() {
        if class != TriangleClass::Inner {
            continue;
        }
        let tri = deco.dual.triangles[i];
        // For each edge of the inner triangle, the subtree beyond it is a
        // zone iff it is a pure path ending in an ear.
        let mut zones: Vec<(Diagonal, Option<ZigzagPath>)> = Vec::new();
        for (a, b) in [(tri[0], tri[1]), (tri[1], tri[2]), (tri[0], tri[2])] {
            let d = Diagonal::new(a, b);
            zones.push((d, zone_beyond(n, &deco, &adj, i, d)));
        }
        // Tips: each pair of zone edges meets at a candidate tip.
        let mut tips: Vec<(usize, Diagonal, ZigzagPath, ZigzagPath)> = Vec::new();
        for x in 0..3 {
            for y in x + 1..3 {
                if let (Some(zx), Some(zy)) = (&zones[x].1, &zones[y].1) {
                    let (dx, dy) = (zones[x].0, zones[y].0);
                    let tip = common_vertex(dx, dy);
                    let base = Diagonal::new(dx.other(tip), dy.other(tip));
                    tips.push((tip, base, zx.clone(), zy.clone()));
                }
            }
        }
        tips.sort_by_key(|e| e.0);
        for (tip, base, z1, z2) in tips {
            out.push(MergeTriangle {
                triangle: tri,
                tip,
                base,
                zigzags: [z1, z2],
            });
        }
    }
    out
}

fn common_vertex(a: Diagonal, b: Diagonal) -> usize {
    if b.touches(a.a) {
        a.a
    } else {
        a.b
    }
}

/// The subtree on the far side of `edge` from inner triangle `from`, if it is
/// a path ending in an ear. The returned path lists triangles from the edge
/// outward; it is empty when the edge leads directly to an ear.
fn zone_beyond(
    n: usize,
    deco: &DualDecomposition,
    adj: &[Vec<usize>],
    from: usize,
    edge: Diagonal,
) -> Option<ZigzagPath> {
    // Find the dual neighbor across `edge`.
    let mut neighbor = None;
    for &j in &adj[from] {
        let tri = deco.dual.triangles[j];
        if tri.contains(&edge.a) && tri.contains(&edge.b) {
            neighbor = Some(j);
        }
    }
    let mut cur = neighbor?;
    let mut prev = from;
    let mut path = Vec::new();
    loop {
        match deco.classes[cur] {
            TriangleClass::Ear { .. } => {
                return Some(ZigzagPath {
                    triangles: path,
                    ends: [Some(edge), None],
                });
            }
            TriangleClass::Path => {
                path.push(cur);
                let next = *adj[cur].iter().find(|&&x| x != prev).unwrap();
                prev = cur;
                cur = next;
            }
            TriangleClass::Inner => return None,
        }
    }
}

/// The full dual path of a zigzag triangulation, ordered from the ear with
/// the smallest triangle index; both ends are open (no bounding diagonals).
pub fn zigzag_dual_path(t: &Triangulation) -> Result<ZigzagPath> {
    if !is_zigzag_triangulation(t) {
        return Err(Error::NotZigzag);
    }
    let dual = t.dual_tree();
    let adj = dual.adjacency();
    let node_count = dual.triangles.len();
    let mut triangles = Vec::new();
    if node_count > 1 {
        let start = (0..node_count).find(|&i| adj[i].len() == 1).unwrap();
        let mut prev = usize::MAX;
        let mut cur = start;
        loop {
            if adj[cur].len() == 2 {
                triangles.push(cur);
            }
            match adj[cur].iter().find(|&&x| x != prev) {
                Some(&next) => {
                    prev = cur;
                    cur = next;
                }
                None => break,
            }
        }
    }
    Ok(ZigzagPath {
        triangles,
        ends: [None, None],
    })
}

/// A light merge triangle plus the preparatory flips that make both adjacent
/// zones outward-rooted zigzags and (thereby) lower the base endpoints.
#[derive(Clone, Debug)]
pub struct LightMerge {
    pub merge: MergeTriangle,
    /// Diagonals to flip, in order, before the merge proper.
    pub plan: Vec<Diagonal>,
    /// Degrees of the base endpoints after the plan, (low vertex, high vertex).
    pub post_base_degrees: (usize, usize),
    /// True when the merge must consume the counterclockwise region end
    /// first (the end whose opposite endpoint has slack).
    pub consume_low_end_first: bool,
}

/// Finds a merge triangle that can be merged under the cap `k`: after its
/// preparatory plan both base endpoints have degree below `k`, or failing
/// that at least one does (which suffices, entering from the light side).
/// Candidates are scanned in ascending tip order; two-sided light triangles
/// are preferred.
pub fn find_light_merge_triangle(t: &Triangulation, k: usize) -> Result<LightMerge> {
    if k < 7 {
        return Err(Error::UnsupportedBound { k, min: 7 });
    }
    if t.max_degree() > k {
        return Err(Error::DegreeBoundExceeded {
            max_degree: t.max_degree(),
            k,
        });
    }
    if is_zigzag_triangulation(t) {
        return Err(Error::NotZigzag);
    }
    if is_fringe(t).is_some() {
        return Err(Error::NotFringe);
    }
    let candidates = find_merge_triangles(t);
    let mut fallback: Option<LightMerge> = None;
    for m in candidates {
        let Some((plan, d_low, d_high)) = crate::canon::preview_merge_plan(t, &m, k) else {
            continue;
        };
        let low_light = d_low < k;
        let high_light = d_high < k;
        if low_light && high_light {
            return Ok(LightMerge {
                merge: m,
                plan,
                post_base_degrees: (d_low, d_high),
                consume_low_end_first: true,
            });
        }
        if (low_light || high_light) && fallback.is_none() {
            fallback = Some(LightMerge {
                merge: m,
                plan,
                post_base_degrees: (d_low, d_high),
                // The first consumed end raises the opposite endpoint, so
                // consume the end whose opposite has slack.
                consume_low_end_first: high_light,
            });
        }
    }
    fallback.ok_or(Error::NotLight {
        tip: 0,
        k,
    })
}

/// Combinatorial angle between two zigzag ear lines, classified by the vertex
/// counts of the four arcs the lines cut: a quarter turn when all four are
/// equal up to one, under an eighth below that, in between otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RotationAngle {
    Exactly90,
    Between45And90,
    Below45,
}

/// Classifies the angle between ear lines `(a1, a2)` and `(b1, b2)` of two
/// zigzag triangulations of the `n`-gon from arc vertex counts alone.
pub fn rotation_angle(n: usize, a: (usize, usize), b: (usize, usize)) -> RotationAngle {
    let mut cuts = [a.0, a.1, b.0, b.1];
    cuts.sort_unstable();
    let mut arcs = [0usize; 4];
    for i in 0..4 {
        let from = cuts[i];
        let to = cuts[(i + 1) % 4];
        arcs[i] = (to + n - from) % n - if from == to { 0 } else { 1 };
    }
    let min = *arcs.iter().min().unwrap();
    let max = *arcs.iter().max().unwrap();
    if max - min <= 1 {
        RotationAngle::Exactly90
    } else if (min + 1) * 8 >= n {
        RotationAngle::Between45And90
    } else {
        RotationAngle::Below45
    }
}
