//! Combinatorial triangulations of a convex polygon.
//!
//! Vertices are the indices `0..n` in counterclockwise order around the hull;
//! no coordinates are ever stored. A triangulation is the set of its `n - 3`
//! pairwise non-crossing diagonals. Degrees count hull edges as well as
//! diagonals, so a vertex with no incident diagonal has degree 2.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// A polygon diagonal, stored with `a < b`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Diagonal {
    pub a: usize,
    pub b: usize,
}

impl Diagonal {
    /// Builds a diagonal from two endpoints in either order.
    pub fn new(a: usize, b: usize) -> Diagonal {
        assert_ne!(a, b, "degenerate diagonal ({a},{a})");
        if a < b {
            Diagonal { a, b }
        } else {
            Diagonal { a: b, b: a }
        }
    }

    /// Endpoints must be non-adjacent on the hull of an `n`-gon.
    pub fn is_valid_for(&self, n: usize) -> bool {
        self.b < n && self.b - self.a >= 2 && !(self.a == 0 && self.b == n - 1)
    }

    /// Strict interleaving test: with `self = (a,b)`, `other = (c,d)` and
    /// `a < c`, the two cross iff `a < c < b < d`.
    pub fn crosses(&self, other: &Diagonal) -> bool {
        let (x, y) = if self.a <= other.a {
            (self, other)
        } else {
            (other, self)
        };
        x.a < y.a && y.a < x.b && x.b < y.b
    }

    pub fn touches(&self, v: usize) -> bool {
        self.a == v || self.b == v
    }

    /// The endpoint other than `v`.
    pub fn other(&self, v: usize) -> usize {
        if v == self.a {
            self.b
        } else {
            self.a
        }
    }
}

impl fmt::Debug for Diagonal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

impl fmt::Display for Diagonal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.a, self.b)
    }
}

/// One elementary flip: `removed` is exchanged for `inserted` across the
/// convex quadrilateral formed by the two incident triangles.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Flip {
    pub removed: Diagonal,
    pub inserted: Diagonal,
}

impl Flip {
    /// The same move played backwards.
    pub fn reversed(&self) -> Flip {
        Flip {
            removed: self.inserted,
            inserted: self.removed,
        }
    }
}

/// A triangulation of the convex `n`-gon as a sorted diagonal set.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Triangulation {
    n: usize,
    diagonals: Vec<Diagonal>,
}

impl fmt::Debug for Triangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Triangulation[{}]", self.canonical_code())
    }
}

impl Triangulation {
    /// Validates and builds a triangulation. Reports the first violated
    /// invariant: bad vertex, bad diagonal shape, wrong count, duplicate, or
    /// a crossing pair.
    pub fn new(n: usize, mut diagonals: Vec<Diagonal>) -> Result<Triangulation> {
        if n < 3 {
            return Err(Error::PolygonTooSmall { n });
        }
        for d in &diagonals {
            if d.b >= n {
                return Err(Error::VertexOutOfRange { v: d.b, n });
            }
            if !d.is_valid_for(n) {
                return Err(Error::InvalidDiagonal { a: d.a, b: d.b, n });
            }
        }
        diagonals.sort();
        if diagonals.len() != n - 3 {
            return Err(Error::WrongDiagonalCount {
                n,
                expected: n - 3,
                found: diagonals.len(),
            });
        }
        for w in diagonals.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateDiagonal {
                    a: w[0].a,
                    b: w[0].b,
                });
            }
        }
        for i in 0..diagonals.len() {
            for j in i + 1..diagonals.len() {
                if diagonals[i].crosses(&diagonals[j]) {
                    return Err(Error::CrossingDiagonals {
                        first: (diagonals[i].a, diagonals[i].b),
                        second: (diagonals[j].a, diagonals[j].b),
                    });
                }
            }
        }
        Ok(Triangulation { n, diagonals })
    }

    /// Internal constructor for diagonal sets known to be valid.
    pub(crate) fn from_parts(n: usize, mut diagonals: Vec<Diagonal>) -> Triangulation {
        diagonals.sort();
        debug_assert!(Triangulation::new(n, diagonals.clone()).is_ok());
        Triangulation { n, diagonals }
    }

    /// Re-checks every invariant of an already constructed value.
    pub fn validate(&self) -> Result<()> {
        Triangulation::new(self.n, self.diagonals.clone()).map(|_| ())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn diagonals(&self) -> &[Diagonal] {
        &self.diagonals
    }

    pub fn contains(&self, d: Diagonal) -> bool {
        self.diagonals.binary_search(&d).is_ok()
    }

    /// The zigzag triangulation with an ear tip at `tip`.
    ///
    /// In the canonical parity the triangle attached to the ear
    /// `(tip-1, tip, tip+1)` uses hull edge `(tip+1, tip+2)`; `inverted`
    /// selects the mirrored parity.
    pub fn zigzag(n: usize, tip: usize, inverted: bool) -> Triangulation {
        assert!(n >= 3, "zigzag needs n >= 3");
        assert!(tip < n, "tip {tip} out of range for n={n}");
        let mut diagonals = Vec::with_capacity(n.saturating_sub(3));
        if n >= 4 {
            let mut l = (tip + n - 1) % n;
            let mut r = (tip + 1) % n;
            diagonals.push(Diagonal::new(l, r));
            for step in 0..n - 4 {
                let advance_right = (step % 2 == 0) != inverted;
                if advance_right {
                    r = (r + 1) % n;
                } else {
                    l = (l + n - 1) % n;
                }
                diagonals.push(Diagonal::new(l, r));
            }
        }
        Triangulation::from_parts(n, diagonals)
    }

    /// The fan triangulation: every diagonal incident to `apex`.
    pub fn fan(n: usize, apex: usize) -> Triangulation {
        assert!(n >= 3, "fan needs n >= 3");
        assert!(apex < n, "apex {apex} out of range for n={n}");
        let diagonals = (0..n)
            .filter(|&v| {
                v != apex && v != (apex + 1) % n && v != (apex + n - 1) % n
            })
            .map(|v| Diagonal::new(apex, v))
            .collect();
        Triangulation::from_parts(n, diagonals)
    }

    /// Vertex degree counting both hull edges and diagonals.
    pub fn degree(&self, v: usize) -> usize {
        assert!(v < self.n);
        2 + self.diagonals.iter().filter(|d| d.touches(v)).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![2usize; self.n];
        for d in &self.diagonals {
            deg[d.a] += 1;
            deg[d.b] += 1;
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(2)
    }

    /// Flips diagonal `d`, returning the new triangulation and the move.
    pub fn flip(&self, d: Diagonal) -> Result<(Triangulation, Flip)> {
        if !self.contains(d) {
            return Err(Error::NotADiagonal { a: d.a, b: d.b });
        }
        let mesh = Mesh::from_triangulation(self);
        let (p, q) = mesh.counterpart(d);
        let inserted = Diagonal::new(p, q);
        let mut diagonals = self.diagonals.clone();
        let pos = diagonals.binary_search(&d).unwrap();
        diagonals.remove(pos);
        diagonals.push(inserted);
        Ok((
            Triangulation::from_parts(self.n, diagonals),
            Flip {
                removed: d,
                inserted,
            },
        ))
    }

    /// Diagonals whose flip keeps every vertex degree at most `k`: exactly
    /// those whose two new endpoints currently have degree below `k`.
    pub fn legal_flips(&self, k: usize) -> Vec<Diagonal> {
        let mesh = Mesh::from_triangulation(self);
        let deg = self.degrees();
        self.diagonals
            .iter()
            .copied()
            .filter(|&d| {
                let (p, q) = mesh.counterpart(d);
                deg[p] < k && deg[q] < k
            })
            .collect()
    }

    /// All triangle faces as sorted vertex triples, ascending.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        Mesh::from_triangulation(self).triangles()
    }

    /// The dual tree over the triangle faces.
    pub fn dual_tree(&self) -> DualTree {
        let triangles = self.triangles();
        let mut by_diagonal: HashMap<Diagonal, Vec<usize>> = HashMap::new();
        for (i, t) in triangles.iter().enumerate() {
            for (x, y) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
                let d = Diagonal::new(x, y);
                if d.is_valid_for(self.n) {
                    by_diagonal.entry(d).or_default().push(i);
                }
            }
        }
        let mut edges: Vec<(usize, usize)> = by_diagonal
            .into_iter()
            .map(|(d, tris)| {
                debug_assert_eq!(tris.len(), 2, "diagonal {d} not shared by 2 triangles");
                (tris[0].min(tris[1]), tris[0].max(tris[1]))
            })
            .collect();
        edges.sort();
        DualTree { triangles, edges }
    }

    /// Injective identifier: `"<n>:" + "-"-joined endpoints, sorted diagonals
    /// separated by ","`. Used verbatim as the flip-graph node key.
    pub fn canonical_code(&self) -> String {
        let mut code = format!("{}:", self.n);
        for (i, d) in self.diagonals.iter().enumerate() {
            if i > 0 {
                code.push(',');
            }
            code.push_str(&format!("{}-{}", d.a, d.b));
        }
        code
    }
}

/// Dual tree of a triangulation: nodes are triangle faces, edges connect
/// faces sharing a diagonal. Leaves correspond to ears.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualTree {
    pub triangles: Vec<[usize; 3]>,
    pub edges: Vec<(usize, usize)>,
}

impl DualTree {
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.triangles.len()];
        for &(x, y) in &self.edges {
            adj[x].push(y);
            adj[y].push(x);
        }
        adj
    }

    pub fn leaf_count(&self) -> usize {
        self.adjacency().iter().filter(|a| a.len() <= 1).count()
    }
}

/// Mutable adjacency form used by the flip engines. Neighbor lists are kept
/// sorted; hull edges are included.
#[derive(Clone)]
pub(crate) struct Mesh {
    n: usize,
    nbr: Vec<Vec<usize>>,
}

impl Mesh {
    pub fn from_triangulation(t: &Triangulation) -> Mesh {
        let n = t.n();
        let mut nbr: Vec<Vec<usize>> = vec![Vec::with_capacity(6); n];
        for v in 0..n {
            nbr[v].push((v + n - 1) % n);
            nbr[v].push((v + 1) % n);
        }
        for d in t.diagonals() {
            nbr[d.a].push(d.b);
            nbr[d.b].push(d.a);
        }
        for list in &mut nbr {
            list.sort_unstable();
        }
        Mesh { n, nbr }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn to_triangulation(&self) -> Triangulation {
        let mut diagonals = Vec::with_capacity(self.n.saturating_sub(3));
        for v in 0..self.n {
            for &w in &self.nbr[v] {
                if w > v {
                    let d = Diagonal::new(v, w);
                    if d.is_valid_for(self.n) {
                        diagonals.push(d);
                    }
                }
            }
        }
        Triangulation::from_parts(self.n, diagonals)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.nbr[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.nbr.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.nbr[a].binary_search(&b).is_ok()
    }

    pub fn insert_edge(&mut self, a: usize, b: usize) {
        let pos = self.nbr[a].binary_search(&b).unwrap_err();
        self.nbr[a].insert(pos, b);
        let pos = self.nbr[b].binary_search(&a).unwrap_err();
        self.nbr[b].insert(pos, a);
    }

    pub fn remove_edge(&mut self, a: usize, b: usize) {
        let pos = self.nbr[a].binary_search(&b).unwrap();
        self.nbr[a].remove(pos);
        let pos = self.nbr[b].binary_search(&a).unwrap();
        self.nbr[b].remove(pos);
    }

    pub fn common_neighbors(&self, a: usize, b: usize) -> Vec<usize> {
        let (xs, ys) = (&self.nbr[a], &self.nbr[b]);
        let mut out = Vec::with_capacity(2);
        let (mut i, mut j) = (0, 0);
        while i < xs.len() && j < ys.len() {
            match xs[i].cmp(&ys[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(xs[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out
    }

    /// The two opposite quadrilateral vertices of diagonal `d`. In convex
    /// position every 3-clique is a face and non-crossing forces exactly one
    /// common neighbor on each side of the diagonal.
    pub fn counterpart(&self, d: Diagonal) -> (usize, usize) {
        let common = self.common_neighbors(d.a, d.b);
        debug_assert_eq!(common.len(), 2, "diagonal {d} must bound two faces");
        let mut inside = None;
        let mut outside = None;
        for c in common {
            if d.a < c && c < d.b {
                inside = Some(c);
            } else {
                outside = Some(c);
            }
        }
        (
            inside.expect("diagonal has an inner triangle"),
            outside.expect("diagonal has an outer triangle"),
        )
    }

    /// Flips `d`, which must be a present diagonal; returns the move made.
    pub fn flip(&mut self, d: Diagonal) -> Result<Flip> {
        if !d.is_valid_for(self.n) || !self.has_edge(d.a, d.b) {
            return Err(Error::NotADiagonal { a: d.a, b: d.b });
        }
        let (p, q) = self.counterpart(d);
        self.remove_edge(d.a, d.b);
        self.insert_edge(p, q);
        Ok(Flip {
            removed: d,
            inserted: Diagonal::new(p, q),
        })
    }

    /// All faces as sorted triples, ascending. In convex position a face is
    /// exactly a 3-clique of the edge set.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let mut out = Vec::with_capacity(self.n.saturating_sub(2));
        for v in 0..self.n {
            let nv = &self.nbr[v];
            for (i, &x) in nv.iter().enumerate() {
                if x <= v {
                    continue;
                }
                for &y in &nv[i + 1..] {
                    if self.has_edge(x, y) {
                        out.push([v, x, y]);
                    }
                }
            }
        }
        out
    }

    /// The apex of the unique triangle on edge `(a,b)` whose third vertex
    /// lies strictly inside the counterclockwise arc `a -> b`.
    pub fn apex_in_ccw_arc(&self, a: usize, b: usize) -> Option<usize> {
        self.common_neighbors(a, b)
            .into_iter()
            .find(|&c| in_ccw_arc(self.n, a, b, c))
    }

    /// Non-hull neighbors of `v`.
    pub fn neighbor_diagonals(&self, v: usize) -> Vec<usize> {
        let prev = (v + self.n - 1) % self.n;
        let next = (v + 1) % self.n;
        self.nbr[v]
            .iter()
            .copied()
            .filter(|&w| w != prev && w != next)
            .collect()
    }
}

/// True if `x` lies strictly inside the counterclockwise arc from `a` to `b`.
pub(crate) fn in_ccw_arc(n: usize, a: usize, b: usize, x: usize) -> bool {
    if x == a || x == b {
        return false;
    }
    let span = (b + n - a) % n;
    let off = (x + n - a) % n;
    off > 0 && off < span
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diags(pairs: &[(usize, usize)]) -> Vec<Diagonal> {
        pairs.iter().map(|&(a, b)| Diagonal::new(a, b)).collect()
    }

    #[test]
    fn validate_accepts_square() {
        assert!(Triangulation::new(4, diags(&[(0, 2)])).is_ok());
    }

    #[test]
    fn validate_accepts_hexagon_zigzag() {
        assert!(Triangulation::new(6, diags(&[(1, 5), (2, 5), (2, 4)])).is_ok());
    }

    #[test]
    fn validate_rejects_crossing_pair() {
        let err = Triangulation::new(5, diags(&[(0, 2), (1, 3)])).unwrap_err();
        assert_eq!(
            err,
            Error::CrossingDiagonals {
                first: (0, 2),
                second: (1, 3)
            }
        );
    }

    #[test]
    fn validate_rejects_wrong_count() {
        let err = Triangulation::new(6, diags(&[(1, 5)])).unwrap_err();
        assert!(matches!(err, Error::WrongDiagonalCount { .. }));
    }

    #[test]
    fn validate_rejects_hull_edge() {
        let err = Triangulation::new(4, diags(&[(2, 3)])).unwrap_err();
        assert!(matches!(err, Error::InvalidDiagonal { .. }));
    }

    #[test]
    fn zigzag_hexagon_matches_construction() {
        let t = Triangulation::zigzag(6, 0, false);
        assert_eq!(t.diagonals(), diags(&[(1, 5), (2, 4), (2, 5)]).as_slice());
        assert_eq!(t.max_degree(), 4);
    }

    #[test]
    fn zigzag_heptagon_matches_construction() {
        let t = Triangulation::zigzag(7, 0, false);
        assert_eq!(
            t.diagonals(),
            diags(&[(1, 6), (2, 5), (2, 6), (3, 5)]).as_slice()
        );
    }

    #[test]
    fn zigzag_square_and_triangle() {
        assert_eq!(
            Triangulation::zigzag(4, 0, false).diagonals(),
            diags(&[(1, 3)]).as_slice()
        );
        assert!(Triangulation::zigzag(3, 0, false).diagonals().is_empty());
    }

    #[test]
    fn zigzag_inverted_hexagon() {
        let t = Triangulation::zigzag(6, 0, true);
        assert_eq!(t.diagonals(), diags(&[(1, 4), (1, 5), (2, 4)]).as_slice());
    }

    #[test]
    fn fan_examples() {
        let t = Triangulation::fan(6, 0);
        assert_eq!(t.diagonals(), diags(&[(0, 2), (0, 3), (0, 4)]).as_slice());
        assert_eq!(t.degree(0), 5);

        let t = Triangulation::fan(5, 2);
        assert_eq!(t.diagonals(), diags(&[(0, 2), (2, 4)]).as_slice());
        assert_eq!(t.degree(2), 4);

        assert!(Triangulation::fan(3, 1).diagonals().is_empty());
    }

    #[test]
    fn degree_examples() {
        assert_eq!(Triangulation::fan(6, 0).degree(0), 5);
        assert_eq!(Triangulation::zigzag(6, 0, false).degree(2), 4);
        // A hull-only vertex.
        assert_eq!(Triangulation::zigzag(6, 0, false).degree(3), 2);
    }

    #[test]
    fn flip_square() {
        let t = Triangulation::new(4, diags(&[(0, 2)])).unwrap();
        let (t2, f) = t.flip(Diagonal::new(0, 2)).unwrap();
        assert_eq!(t2.diagonals(), diags(&[(1, 3)]).as_slice());
        assert_eq!(f.inserted, Diagonal::new(1, 3));
    }

    #[test]
    fn flip_zigzag_to_inverted() {
        let t = Triangulation::zigzag(6, 0, false);
        let (t2, _) = t.flip(Diagonal::new(2, 5)).unwrap();
        assert_eq!(t2, Triangulation::zigzag(6, 0, true));
    }

    #[test]
    fn flip_is_involution() {
        let t = Triangulation::zigzag(6, 0, false);
        let (t2, f) = t.flip(Diagonal::new(2, 5)).unwrap();
        let (t3, _) = t2.flip(f.inserted).unwrap();
        assert_eq!(t, t3);
    }

    #[test]
    fn flip_missing_diagonal_errors() {
        let t = Triangulation::zigzag(6, 0, false);
        assert!(matches!(
            t.flip(Diagonal::new(0, 3)),
            Err(Error::NotADiagonal { a: 0, b: 3 })
        ));
    }

    #[test]
    fn legal_flips_zigzag_heptagon_frozen_at_4() {
        let t = Triangulation::zigzag(7, 0, false);
        assert!(t.legal_flips(4).is_empty());
    }

    #[test]
    fn legal_flips_zigzag_hexagon_at_4() {
        let t = Triangulation::zigzag(6, 0, false);
        assert_eq!(t.legal_flips(4), vec![Diagonal::new(2, 5)]);
    }

    #[test]
    fn legal_flips_square_at_3() {
        let t = Triangulation::new(4, diags(&[(0, 2)])).unwrap();
        assert_eq!(t.legal_flips(3), vec![Diagonal::new(0, 2)]);
    }

    #[test]
    fn dual_tree_shapes() {
        let t = Triangulation::new(4, diags(&[(0, 2)])).unwrap();
        let d = t.dual_tree();
        assert_eq!(d.triangles.len(), 2);
        assert_eq!(d.edges.len(), 1);

        let fan = Triangulation::fan(6, 0).dual_tree();
        assert_eq!(fan.triangles.len(), 4);
        assert!(fan.adjacency().iter().all(|a| a.len() <= 2));

        let zz = Triangulation::zigzag(8, 0, false).dual_tree();
        assert_eq!(zz.triangles.len(), 6);
        assert!(zz.adjacency().iter().all(|a| a.len() <= 2));
        assert_eq!(zz.leaf_count(), 2);
    }

    #[test]
    fn canonical_code_examples() {
        let t = Triangulation::new(4, diags(&[(1, 3)])).unwrap();
        assert_eq!(t.canonical_code(), "4:1-3");
        let other = Triangulation::new(4, diags(&[(0, 2)])).unwrap();
        assert_ne!(t.canonical_code(), other.canonical_code());
        let same = Triangulation::new(4, diags(&[(1, 3)])).unwrap();
        assert_eq!(t.canonical_code(), same.canonical_code());
    }

    #[test]
    fn degree_sum_invariant() {
        for n in 3..9 {
            let t = Triangulation::zigzag(n, 0, false);
            let total: usize = t.degrees().iter().sum();
            assert_eq!(total, 2 * (2 * n - 3));
        }
    }
}
