//! The smocked distance as a shortest-path problem.
//!
//! Every stitch is a node of a complete graph whose edge weights are the
//! Euclidean distances between stitches; query points become extra nodes.
//! Jumping inside a stitch is free, so the smocked distance between two
//! nodes is the shortest-path length in this graph, and the direct edge
//! between the two query points is the zero-stitch term.

mod periodic;

pub use periodic::{OffsetTable, PeriodicMetric, DEFAULT_HOP_LIMIT, DEFAULT_TABLE_MARGIN};

use crate::error::{Error, Result};
use crate::geom::{segment_distance, segment_segment_nearest, DirectedSegment, Point2, SegmentPair, EPS};
use crate::pattern::{Extent, Pattern, PatternConstants, StitchIndex};

/// A graph node: a stitch of the pattern or a free point of the plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Node {
    Stitch(usize),
    Point(Point2),
}

/// Complete weighted graph over (a subset of) the stitches of a pattern
/// plus up to two point nodes. Weights are evaluated on demand.
#[derive(Clone, Debug)]
pub struct StitchGraph<'a> {
    pattern: &'a Pattern,
    nodes: Vec<Node>,
    shapes: Vec<DirectedSegment>,
    terminals: Vec<usize>,
}

impl<'a> StitchGraph<'a> {
    /// All stitches of `pattern`, plus one node per endpoint. Endpoints
    /// lying on a stitch are identified with that stitch's node.
    pub fn build(pattern: &'a Pattern, endpoints: &[Point2]) -> Self {
        let ids: Vec<usize> = (0..pattern.len()).collect();
        let terminals: Vec<Terminal> = endpoints.iter().map(|&p| Terminal::resolve(pattern, p)).collect();
        Self::with_stitches(pattern, ids, &terminals)
    }

    fn with_stitches(pattern: &'a Pattern, mut ids: Vec<usize>, terminals: &[Terminal]) -> Self {
        for t in terminals {
            if let Terminal::Stitch(id) = t {
                ids.push(*id);
            }
        }
        // pattern ids are in lexicographic index order
        ids.sort_unstable();
        ids.dedup();
        let mut nodes: Vec<Node> = ids.iter().map(|&i| Node::Stitch(i)).collect();
        let mut terminal_nodes = Vec::with_capacity(terminals.len());
        for t in terminals {
            let node = match *t {
                Terminal::Stitch(id) => ids.binary_search(&id).expect("terminal stitch present"),
                Terminal::Point(p) => {
                    nodes.push(Node::Point(p));
                    nodes.len() - 1
                }
            };
            terminal_nodes.push(node);
        }
        let shapes = nodes
            .iter()
            .map(|n| match *n {
                Node::Stitch(i) => pattern.stitches()[i].segment,
                Node::Point(p) => DirectedSegment::new(p, p),
            })
            .collect();
        StitchGraph {
            pattern,
            nodes,
            shapes,
            terminals: terminal_nodes,
        }
    }

    pub fn pattern(&self) -> &Pattern {
        self.pattern
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        let n = self.nodes.len();
        n * n.saturating_sub(1) / 2
    }

    pub fn node(&self, i: usize) -> Node {
        self.nodes[i]
    }

    /// Node ids of the endpoints, in the order they were given.
    pub fn terminals(&self) -> &[usize] {
        &self.terminals
    }

    pub fn node_of_stitch(&self, index: &StitchIndex) -> Option<usize> {
        let id = self.pattern.id_of(index)?;
        self.nodes.iter().position(|n| *n == Node::Stitch(id))
    }

    pub fn stitch_index(&self, node: usize) -> Option<StitchIndex> {
        match self.nodes[node] {
            Node::Stitch(i) => Some(self.pattern.stitches()[i].index),
            Node::Point(_) => None,
        }
    }

    #[inline]
    pub fn weight(&self, a: usize, b: usize) -> f64 {
        if a == b {
            return 0.0;
        }
        segment_distance(&self.shapes[a], &self.shapes[b])
    }

    /// Nearest-point pair realizing the edge `a -> b`.
    pub fn witness(&self, a: usize, b: usize) -> SegmentPair {
        segment_segment_nearest(&self.shapes[a], &self.shapes[b])
    }
}

/// Where a query starts or ends after applying the smocking map.
#[derive(Clone, Copy, Debug, PartialEq)]
enum Terminal {
    Stitch(usize),
    Point(Point2),
}

impl Terminal {
    fn resolve(pattern: &Pattern, p: Point2) -> Terminal {
        match pattern.stitch_containing(p) {
            Some(id) => Terminal::Stitch(id),
            None => Terminal::Point(p),
        }
    }
}

/// Shortest-path labels from a root node: distance, fewest hops among
/// shortest paths, and a parent on such a path.
#[derive(Clone, Debug)]
pub struct ShortestPathTree {
    pub root: usize,
    pub dist: Vec<f64>,
    pub hops: Vec<u32>,
    pub parent: Vec<usize>,
    pub settled: Vec<bool>,
}

pub const NO_PARENT: usize = usize::MAX;

impl ShortestPathTree {
    /// Node sequence from `node` back to the root.
    pub fn path_to_root(&self, node: usize) -> Option<Vec<usize>> {
        if !self.settled[node] {
            return None;
        }
        let mut seq = vec![node];
        let mut cur = node;
        while cur != self.root {
            cur = self.parent[cur];
            if cur == NO_PARENT {
                return None;
            }
            seq.push(cur);
        }
        Some(seq)
    }
}

/// Label-setting shortest paths over the complete graph (O(V^2)). Stops
/// early once `stop` is settled. Labels compare by distance, then hop count,
/// then parent id; distances within [`EPS`] count as equal.
pub fn shortest_path_tree(graph: &StitchGraph<'_>, root: usize, stop: Option<usize>) -> ShortestPathTree {
    let n = graph.node_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut hops = vec![u32::MAX; n];
    let mut parent = vec![NO_PARENT; n];
    let mut settled = vec![false; n];
    dist[root] = 0.0;
    hops[root] = 0;
    let mut open: Vec<usize> = (0..n).collect();
    while !open.is_empty() {
        let (pos, &u) = open
            .iter()
            .enumerate()
            .min_by(|(_, &a), (_, &b)| {
                dist[a]
                    .total_cmp(&dist[b])
                    .then(hops[a].cmp(&hops[b]))
                    .then(a.cmp(&b))
            })
            .expect("non-empty");
        if dist[u].is_infinite() {
            break;
        }
        open.swap_remove(pos);
        settled[u] = true;
        if Some(u) == stop {
            break;
        }
        let (du, hu) = (dist[u], hops[u] + 1);
        for &v in &open {
            let nd = du + graph.weight(u, v);
            let dv = dist[v];
            if nd < dv - EPS {
                dist[v] = nd;
                hops[v] = hu;
                parent[v] = u;
            } else if nd <= dv + EPS && (hu < hops[v] || (hu == hops[v] && u < parent[v])) {
                dist[v] = dv.min(nd);
                hops[v] = hu;
                parent[v] = u;
            }
        }
    }
    ShortestPathTree {
        root,
        dist,
        hops,
        parent,
        settled,
    }
}

/// One end of a [`Path`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PathEnd {
    Point(Point2),
    Stitch(StitchIndex),
}

/// A list of directed segments; consecutive segments meet in a common
/// stitch (`junctions[i]` joins segment `i` to segment `i + 1`).
#[derive(Clone, Debug, PartialEq)]
pub struct Path {
    pub start: PathEnd,
    pub end: PathEnd,
    pub segments: Vec<DirectedSegment>,
    pub junctions: Vec<StitchIndex>,
}

impl Path {
    pub fn stationary(at: PathEnd) -> Self {
        Path {
            start: at,
            end: at,
            segments: Vec::new(),
            junctions: Vec::new(),
        }
    }

    pub fn total_length(&self) -> f64 {
        self.segments.iter().map(DirectedSegment::length).sum()
    }

    /// Number of segments.
    pub fn combinatorial_length(&self) -> usize {
        self.segments.len()
    }

    /// Stitches touched by the path in order, including stitch endpoints.
    pub fn visited_stitches(&self) -> Vec<StitchIndex> {
        let mut out = Vec::with_capacity(self.junctions.len() + 2);
        if let PathEnd::Stitch(s) = self.start {
            out.push(s);
        }
        out.extend_from_slice(&self.junctions);
        if let PathEnd::Stitch(s) = self.end {
            if self.segments.is_empty() && out.first() == Some(&s) {
                return out;
            }
            out.push(s);
        }
        out
    }

    /// Checks the junction invariant against `pattern`: each junction
    /// stitch contains the end of one segment and the start of the next,
    /// and stitch endpoints contain the first/last segment ends.
    pub fn is_consistent(&self, pattern: &Pattern, tol: f64) -> bool {
        if self.junctions.len() + 1 != self.segments.len() && !self.segments.is_empty() {
            return false;
        }
        let on = |idx: &StitchIndex, p: Point2| {
            pattern
                .get(idx)
                .map(|s| s.segment.contains(p, tol))
                .unwrap_or(false)
        };
        let at = |end: &PathEnd, p: Point2| match end {
            PathEnd::Point(q) => q.approx_eq(p, tol),
            PathEnd::Stitch(idx) => on(idx, p),
        };
        if let (Some(first), Some(last)) = (self.segments.first(), self.segments.last()) {
            if !at(&self.start, first.start) || !at(&self.end, last.end) {
                return false;
            }
        }
        self.junctions.iter().enumerate().all(|(i, j)| {
            on(j, self.segments[i].end) && on(j, self.segments[i + 1].start)
        })
    }
}

/// A shortest path together with its length.
#[derive(Clone, Debug, PartialEq)]
pub struct GeodesicResult {
    pub path: Path,
    pub distance: f64,
    pub stitch_count: usize,
}

/// Window radius beyond which no stitch can lie on a shortest path from
/// `x` to `y`: the larger of `max(|x|inf, |y|inf) + |x - y| + L + 3` and the
/// bound `|m|inf + (delta + L) / (2 delta) |x - y| + L` (m the midpoint),
/// which follows from every hop being at least `delta` long while a stitch
/// jump moves at most `L`. For the checkered pattern the first term always
/// dominates.
pub fn required_window(x: Point2, y: Point2, constants: &PatternConstants) -> f64 {
    let gap = x.distance(y);
    let l = constants.max_stitch_length;
    let delta = constants.separation;
    let stated = x.norm_inf().max(y.norm_inf()) + gap + l + 3.0;
    let mid = (x + y) * 0.5;
    let ellipse = mid.norm_inf() + (delta + l) / (2.0 * delta) * gap + l;
    stated.max(ellipse)
}

fn constants_or_trivial(pattern: &Pattern) -> PatternConstants {
    pattern.constants().unwrap_or(PatternConstants {
        separation: f64::INFINITY,
        max_stitch_length: pattern.max_stitch_length(),
    })
}

fn check_window(pattern: &Pattern, a: Point2, b: Point2) -> Result<()> {
    if let Extent::Window { radius } = pattern.extent() {
        let required = required_window(a, b, &constants_or_trivial(pattern));
        if radius + EPS < required {
            return Err(Error::InsufficientWindow {
                required,
                available: radius,
            });
        }
    }
    Ok(())
}

/// Lower bound on the smocked distance from a terminal to stitch `z`.
/// A path with n hops has length at least (n - 1) delta (n delta from a
/// stitch) and its stitch jumps displace it by at most n L.
fn lower_bound(pattern: &Pattern, c: &PatternConstants, from: &Terminal, z: usize) -> f64 {
    let cz = pattern.stitches()[z].index.center();
    let ratio = c.separation / (c.separation + c.max_stitch_length);
    match *from {
        Terminal::Stitch(s) => ratio * pattern.stitches()[s].index.center().distance(cz),
        Terminal::Point(p) => (ratio * (p.distance(cz) - c.max_stitch_length / 2.0)).max(0.0),
    }
}

/// The graph restricted to stitches that can lie on a path from `a` to `b`
/// no longer than the direct hop.
fn pruned_graph<'a>(pattern: &'a Pattern, a: Terminal, b: Terminal) -> StitchGraph<'a> {
    let c = constants_or_trivial(pattern);
    let direct = {
        let shape = |t: &Terminal| match *t {
            Terminal::Stitch(id) => pattern.stitches()[id].segment,
            Terminal::Point(p) => DirectedSegment::new(p, p),
        };
        segment_distance(&shape(&a), &shape(&b))
    };
    let ids: Vec<usize> = if c.separation.is_finite() {
        (0..pattern.len())
            .filter(|&z| lower_bound(pattern, &c, &a, z) + lower_bound(pattern, &c, &b, z) <= direct + EPS)
            .collect()
    } else {
        (0..pattern.len()).collect()
    };
    StitchGraph::with_stitches(pattern, ids, &[a, b])
}

/// Smocked distance between two stitches of `pattern`.
pub fn stitch_distance(pattern: &Pattern, j: &StitchIndex, k: &StitchIndex) -> Result<f64> {
    let (a, b) = (pattern.get(j)?, pattern.get(k)?);
    if a.index == b.index {
        return Ok(0.0);
    }
    check_window(pattern, j.center(), k.center())?;
    let (ta, tb) = (
        Terminal::Stitch(pattern.id_of(j).expect("checked")),
        Terminal::Stitch(pattern.id_of(k).expect("checked")),
    );
    distance_between(pattern, ta, tb)
}

fn distance_between(pattern: &Pattern, a: Terminal, b: Terminal) -> Result<f64> {
    let graph = pruned_graph(pattern, a, b);
    let (s, t) = (graph.terminals()[0], graph.terminals()[1]);
    if s == t {
        return Ok(0.0);
    }
    let tree = shortest_path_tree(&graph, s, Some(t));
    Ok(tree.dist[t])
}

/// The smocking pseudometric between two points of the plane.
pub fn pseudometric(pattern: &Pattern, x: Point2, y: Point2) -> Result<f64> {
    if !x.is_finite() || !y.is_finite() {
        return Err(Error::InvalidArgument("coordinates must be finite".into()));
    }
    check_window(pattern, x, y)?;
    if x == y {
        return Ok(0.0);
    }
    let (a, b) = (Terminal::resolve(pattern, x), Terminal::resolve(pattern, y));
    distance_between(pattern, a, b)
}

/// A shortest path between two points with its witness segments. Among
/// shortest paths the one with the fewest hops is chosen, then the
/// lexicographically smallest sequence of stitch indices.
pub fn geodesic(pattern: &Pattern, x: Point2, y: Point2) -> Result<GeodesicResult> {
    if !x.is_finite() || !y.is_finite() {
        return Err(Error::InvalidArgument("coordinates must be finite".into()));
    }
    check_window(pattern, x, y)?;
    let (a, b) = (Terminal::resolve(pattern, x), Terminal::resolve(pattern, y));
    geodesic_between(pattern, a, b)
}

/// [`geodesic`] between two stitches.
pub fn stitch_geodesic(pattern: &Pattern, j: &StitchIndex, k: &StitchIndex) -> Result<GeodesicResult> {
    pattern.get(j)?;
    pattern.get(k)?;
    check_window(pattern, j.center(), k.center())?;
    let a = Terminal::Stitch(pattern.id_of(j).expect("checked"));
    let b = Terminal::Stitch(pattern.id_of(k).expect("checked"));
    geodesic_between(pattern, a, b)
}

fn path_end(pattern: &Pattern, t: &Terminal) -> PathEnd {
    match *t {
        Terminal::Stitch(id) => PathEnd::Stitch(pattern.stitches()[id].index),
        Terminal::Point(p) => PathEnd::Point(p),
    }
}

fn geodesic_between(pattern: &Pattern, a: Terminal, b: Terminal) -> Result<GeodesicResult> {
    let (start, end) = (path_end(pattern, &a), path_end(pattern, &b));
    if a == b {
        let path = Path::stationary(start);
        let stitch_count = path.visited_stitches().len();
        return Ok(GeodesicResult {
            path,
            distance: 0.0,
            stitch_count,
        });
    }
    let graph = pruned_graph(pattern, a, b);
    let (s, t) = (graph.terminals()[0], graph.terminals()[1]);
    // Labels toward the target let us walk forward from the source,
    // choosing the smallest admissible next stitch at every step.
    let tree = shortest_path_tree(&graph, t, Some(s));
    let mut nodes = vec![s];
    let mut cur = s;
    while cur != t {
        let want = tree.hops[cur] - 1;
        let next = (0..graph.node_count())
            .filter(|&v| v != cur && tree.settled[v] && tree.hops[v] == want)
            .filter(|&v| (graph.weight(cur, v) + tree.dist[v] - tree.dist[cur]).abs() <= EPS)
            .min_by(|&p, &q| match (graph.stitch_index(p), graph.stitch_index(q)) {
                (Some(i), Some(k)) => i.lex_cmp(&k),
                // the only point node that can follow is the target
                (None, _) => std::cmp::Ordering::Less,
                (_, None) => std::cmp::Ordering::Greater,
            })
            .expect("a shortest path continues toward the target");
        nodes.push(next);
        cur = next;
    }
    let segments: Vec<DirectedSegment> = nodes
        .windows(2)
        .map(|w| graph.witness(w[0], w[1]).as_segment())
        .collect();
    let junctions = nodes[1..nodes.len() - 1]
        .iter()
        .map(|&n| graph.stitch_index(n).expect("interior nodes are stitches"))
        .collect();
    let path = Path {
        start,
        end,
        segments,
        junctions,
    };
    let distance = path.total_length();
    let stitch_count = path.visited_stitches().len();
    Ok(GeodesicResult {
        path,
        distance,
        stitch_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::{checkered_pattern, parse_pattern_file};
    use std::f64::consts::SQRT_2;

    fn idx(a: f64, b: f64) -> StitchIndex {
        StitchIndex::checkered(a, b).unwrap()
    }

    #[test]
    fn graph_sizes() {
        let p = checkered_pattern(0.0);
        let g = StitchGraph::build(&p, &[]);
        assert_eq!((g.node_count(), g.edge_count()), (1, 0));

        let p = checkered_pattern(2.0);
        let g = StitchGraph::build(&p, &[]);
        assert_eq!(g.node_count(), 5);
        let (a, b) = (
            g.node_of_stitch(&StitchIndex::ORIGIN).unwrap(),
            g.node_of_stitch(&idx(1.5, 1.5)).unwrap(),
        );
        assert!((g.weight(a, b) - SQRT_2).abs() < 1e-15);

        let g = StitchGraph::build(&p, &[Point2::new(0.0, 2.0), Point2::new(0.0, -2.0)]);
        assert_eq!(g.node_count(), 7);
        let t = g.terminals();
        assert_eq!(g.weight(t[0], t[1]), 4.0);
    }

    #[test]
    fn endpoint_inside_stitch_collapses() {
        let p = checkered_pattern(2.0);
        let g = StitchGraph::build(&p, &[Point2::new(0.2, 0.0)]);
        assert_eq!(g.node_count(), 5);
        assert_eq!(g.stitch_index(g.terminals()[0]), Some(StitchIndex::ORIGIN));
    }

    #[test]
    fn required_window_values() {
        let c = PatternConstants::CHECKERED;
        let x = Point2::new(2.0, -1.0);
        assert_eq!(required_window(x, x, &c), 2.0 + 1.0 + 3.0);
        assert_eq!(required_window(Point2::ORIGIN, Point2::new(9.0, 0.0), &c), 22.0);
    }

    #[test]
    fn insufficient_window_is_reported() {
        let p = checkered_pattern(5.0);
        let err = pseudometric(&p, Point2::ORIGIN, Point2::new(9.0, 0.0)).unwrap_err();
        assert_eq!(
            err,
            Error::InsufficientWindow {
                required: 22.0,
                available: 5.0
            }
        );
    }

    #[test]
    fn stitch_not_in_pattern() {
        let p = checkered_pattern(3.0);
        assert!(matches!(
            stitch_distance(&p, &StitchIndex::ORIGIN, &idx(6.0, 0.0)),
            Err(Error::IndexNotInPattern(_))
        ));
    }

    #[test]
    fn pseudometric_basics() {
        let p = checkered_pattern(12.0);
        let z = Point2::new(0.7, 0.3);
        assert_eq!(pseudometric(&p, z, z).unwrap(), 0.0);
        let same = pseudometric(&p, Point2::new(-0.4, 0.0), Point2::new(0.5, 0.0)).unwrap();
        assert_eq!(same, 0.0);
        let d = pseudometric(&p, Point2::new(0.6, 0.0), Point2::new(2.4, 0.0)).unwrap();
        assert!((d - 1.8).abs() < 1e-12, "{d}");
        let d = pseudometric(&p, Point2::new(0.0, 2.0), Point2::new(0.0, -2.0)).unwrap();
        assert!((d - 4.0).abs() < 1e-12, "{d}");
    }

    #[test]
    fn finite_patterns_skip_the_window_check() {
        let p = parse_pattern_file("H 0 0\nH 3 0\n").unwrap();
        let d = pseudometric(&p, Point2::new(-2.0, 0.0), Point2::new(6.0, 0.0)).unwrap();
        // (-2,0) -> (-0.5,0) jump, (0.5,0) -> (2.5,0) jump, (3.5,0) -> (6,0)
        assert!((d - (1.5 + 2.0 + 2.5)).abs() < 1e-12);
    }

    #[test]
    fn stationary_geodesic() {
        let p = checkered_pattern(6.0);
        let z = Point2::new(0.6, 0.0);
        let g = geodesic(&p, z, z).unwrap();
        assert_eq!(g.distance, 0.0);
        assert!(g.path.segments.is_empty());
    }

    #[test]
    fn single_diagonal_geodesic() {
        let p = checkered_pattern(8.0);
        let g = geodesic(&p, Point2::new(0.5, 0.0), Point2::new(1.5, 1.0)).unwrap();
        assert_eq!(g.path.segments.len(), 1);
        assert!((g.distance - SQRT_2).abs() < 1e-12);
        assert_eq!(g.path.segments[0].start, Point2::new(0.5, 0.0));
        assert_eq!(g.path.segments[0].end, Point2::new(1.5, 1.0));
        assert_eq!(g.stitch_count, 2);
    }

    #[test]
    fn geodesic_matches_pseudometric_and_is_consistent() {
        let p = checkered_pattern(20.0);
        let pts = [
            (Point2::new(0.3, 1.2), Point2::new(4.1, -2.6)),
            (Point2::new(-3.3, 2.2), Point2::new(2.0, 2.0)),
            (Point2::new(0.0, 0.0), Point2::new(6.0, 3.0)),
        ];
        for (x, y) in pts {
            let g = geodesic(&p, x, y).unwrap();
            let d = pseudometric(&p, x, y).unwrap();
            assert!((g.distance - d).abs() < 1e-12, "{x} {y}: {} vs {d}", g.distance);
            assert!(g.path.is_consistent(&p, 1e-9));
            assert!(d <= x.distance(y) + 1e-12);
        }
    }
}
