//! Distance tables for periodic patterns.
//!
//! The smocked distance between two stitches of a periodic pattern depends
//! only on their motif elements and on the lattice offset between them, so
//! one shortest-path tree per motif element answers every stitch pair whose
//! offset it covers. Point-to-point distances then reduce to a minimum over
//! entry and exit stitches near each point.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{required_window, shortest_path_tree, StitchGraph, NO_PARENT};
use crate::error::{Error, Result};
use crate::geom::{point_segment_distance, segment_distance, Point2};
use crate::pattern::{PatternConstants, PeriodicPattern, Stitch, StitchIndex};

/// Longest single hop considered by hop-limited tables and point queries.
pub const DEFAULT_HOP_LIMIT: f64 = 6.0;

/// Extra lattice margin around the offsets a hop-limited table must answer.
pub const DEFAULT_TABLE_MARGIN: f64 = 12.0;

#[derive(Clone, Debug)]
struct SourceField {
    dist: Vec<f64>,
    /// Entries at offsets the table vouches for.
    valid: Vec<bool>,
    hops: Vec<u32>,
    parent: Vec<u32>,
}

/// Stitch-to-stitch distances of a periodic pattern, indexed by lattice
/// offset from each motif element.
#[derive(Clone, Debug)]
pub struct OffsetTable {
    periodic: PeriodicPattern,
    half_width: i64,
    offset_radius: f64,
    hop_limit: Option<f64>,
    fields: Vec<SourceField>,
}

impl OffsetTable {
    /// Exact table over the complete stitch graph, covering every target
    /// within `offset_radius` (Chebyshev, in plane units) of the source.
    /// Each source runs over a window large enough by [`required_window`].
    pub fn exact(periodic: &PeriodicPattern, offset_radius: f64) -> Result<Self> {
        let constants = periodic_constants(periodic)?;
        let q = offset_radius;
        let mut fields = Vec::with_capacity(periodic.motif.len());
        let mut half_width = 0;
        let windows: Vec<f64> = periodic
            .motif
            .iter()
            .map(|src| {
                let c = src.center();
                [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)]
                    .iter()
                    .map(|&(sx, sy)| required_window(c, c + Point2::new(sx * q, sy * q), &constants))
                    .fold(0.0, f64::max)
            })
            .collect();
        let widest = windows.iter().cloned().fold(0.0, f64::max);
        half_width = half_width.max(cells_for(periodic, widest) + 1);
        for (m, src) in periodic.motif.iter().enumerate() {
            let pattern = periodic.window(windows[m]);
            let graph = StitchGraph::build(&pattern, &[]);
            let root = graph.node_of_stitch(src).expect("source in window");
            let tree = shortest_path_tree(&graph, root, None);
            let size = grid_len(half_width, periodic.motif.len());
            let mut field = SourceField {
                dist: vec![f64::NAN; size],
                valid: vec![false; size],
                hops: vec![u32::MAX; size],
                parent: vec![u32::MAX; size],
            };
            let lattice_id = |node: usize| {
                let idx = graph.stitch_index(node).expect("stitch node");
                let (a, b, mm) = periodic.locate(&idx).expect("periodic index");
                grid_id(half_width, periodic.motif.len(), a, b, mm)
            };
            for node in 0..graph.node_count() {
                let Some(id) = lattice_id(node) else { continue };
                field.dist[id] = tree.dist[node];
                field.hops[id] = tree.hops[node];
                if tree.parent[node] != NO_PARENT {
                    if let Some(pid) = lattice_id(tree.parent[node]) {
                        field.parent[id] = pid as u32;
                    }
                }
                let idx = graph.stitch_index(node).expect("stitch node");
                field.valid[id] = (idx.center() - src.center()).norm_inf() <= q + 1e-9;
            }
            fields.push(field);
        }
        Ok(OffsetTable {
            periodic: periodic.clone(),
            half_width,
            offset_radius: q,
            hop_limit: None,
            fields,
        })
    }

    /// Table over the graph restricted to hops no longer than `hop_limit`,
    /// computed on a lattice patch reaching `margin` beyond `offset_radius`.
    pub fn hop_limited(periodic: &PeriodicPattern, offset_radius: f64, hop_limit: f64, margin: f64) -> Result<Self> {
        if !(hop_limit > 0.0) || !(offset_radius >= 0.0) || !(margin >= 0.0) {
            return Err(Error::InvalidArgument(
                "hop limit must be positive, radius and margin nonnegative".into(),
            ));
        }
        periodic_constants(periodic)?;
        let nm = periodic.motif.len();
        let half_width = cells_for(periodic, offset_radius + margin) + 1;
        let neighbours = neighbour_offsets(periodic, hop_limit);
        let size = grid_len(half_width, nm);
        let side = 2 * half_width + 1;
        let mut fields = Vec::with_capacity(nm);
        for (m, src) in periodic.motif.iter().enumerate() {
            let mut dist = vec![f64::INFINITY; size];
            let root = grid_id(half_width, nm, 0, 0, m).expect("origin cell");
            dist[root] = 0.0;
            let mut heap = BinaryHeap::new();
            heap.push(Candidate { dist: 0.0, node: root as u32 });
            while let Some(Candidate { dist: d, node }) = heap.pop() {
                let node = node as usize;
                if d > dist[node] {
                    continue;
                }
                let mm = node % nm;
                let cell = node / nm;
                let (a, b) = ((cell / side as usize) as i64 - half_width, (cell % side as usize) as i64 - half_width);
                for &(da, db, mt, w) in &neighbours[mm] {
                    let (na, nb) = (a + da, b + db);
                    if na.abs() > half_width || nb.abs() > half_width {
                        continue;
                    }
                    let id = (((na + half_width) * side + (nb + half_width)) as usize) * nm + mt;
                    let nd = d + w;
                    if nd < dist[id] {
                        dist[id] = nd;
                        heap.push(Candidate { dist: nd, node: id as u32 });
                    }
                }
            }
            let mut valid = vec![false; size];
            for a in -half_width..=half_width {
                for b in -half_width..=half_width {
                    for mt in 0..nm {
                        let idx = periodic.index_at(a, b, mt);
                        let id = grid_id(half_width, nm, a, b, mt).expect("in grid");
                        valid[id] = (idx.center() - src.center()).norm_inf() <= offset_radius + 1e-9;
                    }
                }
            }
            fields.push(SourceField {
                dist,
                valid,
                hops: Vec::new(),
                parent: Vec::new(),
            });
        }
        Ok(OffsetTable {
            periodic: periodic.clone(),
            half_width,
            offset_radius,
            hop_limit: Some(hop_limit),
            fields,
        })
    }

    pub fn periodic(&self) -> &PeriodicPattern {
        &self.periodic
    }

    pub fn offset_radius(&self) -> f64 {
        self.offset_radius
    }

    pub fn hop_limit(&self) -> Option<f64> {
        self.hop_limit
    }

    fn entry(&self, from: &StitchIndex, to: &StitchIndex) -> Result<(usize, usize)> {
        let locate = |i: &StitchIndex| {
            self.periodic
                .locate(i)
                .ok_or_else(|| Error::OutsideTable(format!("{i} is not in the periodic pattern")))
        };
        let (fa, fb, fm) = locate(from)?;
        let (ta, tb, tm) = locate(to)?;
        let id = grid_id(self.half_width, self.periodic.motif.len(), ta - fa, tb - fb, tm)
            .filter(|&id| self.fields[fm].valid[id])
            .ok_or_else(|| Error::OutsideTable(format!("{from} -> {to}")))?;
        Ok((fm, id))
    }

    /// Smocked distance between two stitches.
    pub fn distance(&self, from: &StitchIndex, to: &StitchIndex) -> Result<f64> {
        let (m, id) = self.entry(from, to)?;
        Ok(self.fields[m].dist[id])
    }

    #[inline]
    fn distance_by_cells(&self, fm: usize, da: i64, db: i64, tm: usize) -> Option<f64> {
        let id = grid_id(self.half_width, self.periodic.motif.len(), da, db, tm)?;
        let f = &self.fields[fm];
        f.valid[id].then(|| f.dist[id])
    }

    /// Fewest hops among shortest paths (exact tables only).
    pub fn hops(&self, from: &StitchIndex, to: &StitchIndex) -> Result<u32> {
        let (m, id) = self.entry(from, to)?;
        self.fields[m]
            .hops
            .get(id)
            .copied()
            .ok_or_else(|| Error::InvalidArgument("hop counts are kept by exact tables only".into()))
    }

    /// A shortest path with fewest hops, as its stitch sequence from `from`
    /// to `to` (exact tables only).
    pub fn min_hop_path(&self, from: &StitchIndex, to: &StitchIndex) -> Result<Vec<StitchIndex>> {
        let (m, id) = self.entry(from, to)?;
        let field = &self.fields[m];
        if field.parent.is_empty() {
            return Err(Error::InvalidArgument("paths are kept by exact tables only".into()));
        }
        let (fa, fb, _) = self.periodic.locate(from).expect("located");
        let nm = self.periodic.motif.len();
        let side = (2 * self.half_width + 1) as usize;
        let to_index = |id: usize| {
            let mm = id % nm;
            let cell = id / nm;
            let a = (cell / side) as i64 - self.half_width;
            let b = (cell % side) as i64 - self.half_width;
            self.periodic.index_at(a + fa, b + fb, mm)
        };
        let mut seq = vec![to_index(id)];
        let mut cur = id;
        while field.hops[cur] > 0 {
            let p = field.parent[cur];
            if p == u32::MAX {
                return Err(Error::OutsideTable(format!("path {from} -> {to} leaves the table")));
            }
            cur = p as usize;
            seq.push(to_index(cur));
        }
        seq.reverse();
        Ok(seq)
    }
}

fn periodic_constants(periodic: &PeriodicPattern) -> Result<PatternConstants> {
    if periodic.motif.is_empty() {
        return Err(Error::InvalidArgument("empty motif".into()));
    }
    // One lattice cell in every direction realizes the separation.
    periodic.window(
        periodic
            .motif
            .iter()
            .map(|i| i.center().norm_inf())
            .fold(0.0, f64::max)
            + periodic.period.0.max(periodic.period.1) * 2.0,
    )
    .constants()
}

fn cells_for(periodic: &PeriodicPattern, radius: f64) -> i64 {
    (radius / periodic.period.0.min(periodic.period.1)).ceil() as i64 + 1
}

fn grid_len(half_width: i64, nm: usize) -> usize {
    let side = (2 * half_width + 1) as usize;
    side * side * nm
}

#[inline]
fn grid_id(half_width: i64, nm: usize, a: i64, b: i64, m: usize) -> Option<usize> {
    if a.abs() > half_width || b.abs() > half_width {
        return None;
    }
    let side = 2 * half_width + 1;
    Some((((a + half_width) * side + (b + half_width)) as usize) * nm + m)
}

/// For each motif element, the stitches within `hop_limit` of it as
/// `(cell offset a, cell offset b, motif, weight)`.
fn neighbour_offsets(periodic: &PeriodicPattern, hop_limit: f64) -> Vec<Vec<(i64, i64, usize, f64)>> {
    let reach = cells_for(periodic, hop_limit + 2.0 * max_motif_extent(periodic)) + 1;
    periodic
        .motif
        .iter()
        .enumerate()
        .map(|(m, _)| {
            let here = Stitch::new(periodic.index_at(0, 0, m));
            let mut out = Vec::new();
            for a in -reach..=reach {
                for b in -reach..=reach {
                    for mt in 0..periodic.motif.len() {
                        if (a, b, mt) == (0, 0, m) {
                            continue;
                        }
                        let there = Stitch::new(periodic.index_at(a, b, mt));
                        let w = segment_distance(&here.segment, &there.segment);
                        if w <= hop_limit {
                            out.push((a, b, mt, w));
                        }
                    }
                }
            }
            out
        })
        .collect()
}

fn max_motif_extent(periodic: &PeriodicPattern) -> f64 {
    periodic
        .motif
        .iter()
        .map(|i| i.center().norm_inf() + 0.5)
        .fold(0.0, f64::max)
}

#[derive(Clone, Copy, Debug)]
struct Candidate {
    dist: f64,
    node: u32,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    // reversed: BinaryHeap pops the smallest distance first
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

/// Point-to-point smocked distances on a periodic pattern, backed by a
/// hop-limited [`OffsetTable`].
#[derive(Clone, Debug)]
pub struct PeriodicMetric {
    table: OffsetTable,
    hop_limit: f64,
    reach: f64,
}

impl PeriodicMetric {
    /// Answers every pair with `|x - y|inf <= reach`.
    pub fn new(periodic: &PeriodicPattern, reach: f64, hop_limit: f64) -> Result<Self> {
        let offset_radius = reach + 2.0 * (hop_limit + max_motif_extent(periodic));
        let table = OffsetTable::hop_limited(periodic, offset_radius, hop_limit, DEFAULT_TABLE_MARGIN)?;
        Ok(PeriodicMetric {
            table,
            hop_limit,
            reach,
        })
    }

    pub fn checkered(reach: f64) -> Result<Self> {
        Self::new(&PeriodicPattern::checkered(), reach, DEFAULT_HOP_LIMIT)
    }

    pub fn reach(&self) -> f64 {
        self.reach
    }

    pub fn table(&self) -> &OffsetTable {
        &self.table
    }

    /// Stitches within the hop limit of `p`: `(cell a, cell b, motif, distance)`.
    fn entries(&self, p: Point2) -> Vec<(i64, i64, usize, f64)> {
        let per = &self.table.periodic;
        let span = self.hop_limit + max_motif_extent(per);
        let a_lo = ((p.x - span) / per.period.0).floor() as i64;
        let a_hi = ((p.x + span) / per.period.0).ceil() as i64;
        let b_lo = ((p.y - span) / per.period.1).floor() as i64;
        let b_hi = ((p.y + span) / per.period.1).ceil() as i64;
        let mut out = Vec::new();
        for a in a_lo..=a_hi {
            for b in b_lo..=b_hi {
                for m in 0..per.motif.len() {
                    let s = Stitch::new(per.index_at(a, b, m));
                    let d = point_segment_distance(p, &s.segment).distance;
                    if d <= self.hop_limit {
                        out.push((a, b, m, d));
                    }
                }
            }
        }
        out
    }

    /// The smocking pseudometric between `x` and `y`.
    pub fn distance(&self, x: Point2, y: Point2) -> Result<f64> {
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::InvalidArgument("coordinates must be finite".into()));
        }
        if (x - y).norm_inf() > self.reach + 1e-9 {
            return Err(Error::OutsideTable(format!(
                "|x - y| = {} exceeds the table reach {}",
                (x - y).norm_inf(),
                self.reach
            )));
        }
        let mut best = x.distance(y);
        let exits = self.entries(y);
        for (a, b, m, dx) in self.entries(x) {
            if dx >= best {
                continue;
            }
            for &(c, d, mt, dy) in &exits {
                let Some(mid) = self.table.distance_by_cells(m, c - a, d - b, mt) else {
                    return Err(Error::OutsideTable(format!("offset ({}, {})", c - a, d - b)));
                };
                best = best.min(dx + mid + dy);
            }
        }
        Ok(best)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{pseudometric, stitch_distance};
    use crate::pattern::checkered_pattern;
    use std::f64::consts::SQRT_2;

    fn idx(a: f64, b: f64) -> StitchIndex {
        StitchIndex::checkered(a, b).unwrap()
    }

    #[test]
    fn exact_table_small_values() {
        let t = OffsetTable::exact(&PeriodicPattern::checkered(), 9.0).unwrap();
        let o = StitchIndex::ORIGIN;
        assert_eq!(t.distance(&o, &o).unwrap(), 0.0);
        assert!((t.distance(&o, &idx(3.0, 0.0)).unwrap() - 2.0).abs() < 1e-12);
        assert!((t.distance(&o, &idx(0.0, 3.0)).unwrap() - 2.0 * SQRT_2).abs() < 1e-12);
        assert!((t.distance(&o, &idx(6.0, 3.0)).unwrap() - (2.0 + 2.0 * SQRT_2)).abs() < 1e-12);
        // translation invariance
        let a = idx(-4.5, 7.5);
        let b = idx(1.5, 10.5);
        assert!((t.distance(&a, &b).unwrap() - t.distance(&idx(1.5, 1.5), &idx(7.5, 4.5)).unwrap()).abs() < 1e-15);
        assert!(t.distance(&o, &idx(12.0, 0.0)).is_err());
        assert_eq!(t.hops(&o, &idx(6.0, 3.0)).unwrap(), 3);
        let path = t.min_hop_path(&o, &idx(6.0, 3.0)).unwrap();
        assert_eq!(path.len(), 4);
        assert_eq!(path[0], o);
        assert_eq!(path[3], idx(6.0, 3.0));
    }

    #[test]
    fn exact_table_agrees_with_windowed_oracle() {
        let t = OffsetTable::exact(&PeriodicPattern::checkered(), 9.0).unwrap();
        let p = checkered_pattern(40.0);
        for (a, b) in [((0.0, 0.0), (7.5, -1.5)), ((1.5, 1.5), (-3.0, 6.0)), ((3.0, 3.0), (3.0, 12.0))] {
            let (a, b) = (idx(a.0, a.1), idx(b.0, b.1));
            let w = stitch_distance(&p, &a, &b).unwrap();
            assert!((t.distance(&a, &b).unwrap() - w).abs() < 1e-12, "{a} {b}");
        }
    }

    #[test]
    fn hop_limited_table_matches_exact_table() {
        let per = PeriodicPattern::checkered();
        let exact = OffsetTable::exact(&per, 15.0).unwrap();
        let capped = OffsetTable::hop_limited(&per, 15.0, DEFAULT_HOP_LIMIT, DEFAULT_TABLE_MARGIN).unwrap();
        for s in checkered_pattern(15.0).stitches() {
            for src in [StitchIndex::ORIGIN, idx(1.5, 1.5)] {
                if (s.index.center() - src.center()).norm_inf() > 15.0 {
                    continue;
                }
                let (e, c) = (exact.distance(&src, &s.index).unwrap(), capped.distance(&src, &s.index).unwrap());
                assert!((e - c).abs() < 1e-12, "{src} -> {}: {e} vs {c}", s.index);
            }
        }
    }

    #[test]
    fn periodic_metric_matches_windowed_pseudometric() {
        let m = PeriodicMetric::checkered(12.0).unwrap();
        let p = checkered_pattern(40.0);
        let pts = [
            (Point2::new(0.6, 0.0), Point2::new(2.4, 0.0)),
            (Point2::new(0.0, 2.0), Point2::new(0.0, -2.0)),
            (Point2::new(0.3, 1.2), Point2::new(4.1, -2.6)),
            (Point2::new(-5.2, 3.9), Point2::new(5.0, -4.4)),
            (Point2::new(0.1, 0.0), Point2::new(-0.4, 0.0)),
        ];
        for (x, y) in pts {
            let a = m.distance(x, y).unwrap();
            let b = pseudometric(&p, x, y).unwrap();
            assert!((a - b).abs() < 1e-12, "{x} {y}: {a} vs {b}");
        }
        assert!(m.distance(Point2::ORIGIN, Point2::new(13.0, 0.0)).is_err());
    }
}
